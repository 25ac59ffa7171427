//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use gerbe_core::caloron::{
    b_field, index_curvature, ms_identity_check, pontryagin_form, rho_scaling_check, to_caloron, ConnectionPreset,
    Grid, RepKind, Representation,
};
use gerbe_core::detline::{compose, delta_triviality, det_line, CechTriple};
use gerbe_core::fock::{
    bogoliubov_vacuum, car_check, commutator_check, cut_shift_check, cut_shift_count, projective_equality_check,
    sigma, vacuum_violations, FockWindow, LieElement,
};
use gerbe_core::linalg::{random_special_unitary, random_su_algebra};
use gerbe_core::moduli::{
    balanced_path, circle_holonomy, conjugate, irreducibility_check, relation_check, LoopWord, SurfaceGroupRep,
};
use gerbe_core::spectral::{dirac_spectrum, reference_holonomies, spectral_flow, winding_path, SpectralCut};
use gerbe_core::{seeded_rng, Complex64, Rational64};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// One rational cut in every gap between consecutive distinct eigenvalues inside `(−N, N)`.
fn gap_cuts(values: &[f64], n: i64) -> Vec<SpectralCut> {
    let mut pts: Vec<f64> = values.iter().copied().filter(|v| v.abs() < n as f64).collect();
    pts.push(-(n as f64));
    pts.push(n as f64);
    pts.sort_by(f64::total_cmp);
    pts.windows(2)
        .filter(|w| w[1] - w[0] > 1e-6)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            SpectralCut::new((mid * 1e6).round() as i64, 1_000_000)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let n = 4;
    let suite = reference_holonomies(7).map_err(|e| e.to_string())?;
    let (mut worst_delta, mut worst_assoc, mut triples, mut quads) = (0.0f64, 0.0f64, 0usize, 0usize);
    for (_, h) in &suite {
        let s = dirac_spectrum(h, n).map_err(|e| e.to_string())?;
        let values: Vec<f64> = s.eigenvalues().collect();
        let cuts = gap_cuts(&values, n);
        let k = cuts.len();
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    let t = CechTriple::new(&s, [cuts[a], cuts[b], cuts[c]]).map_err(|e| e.to_string())?;
                    worst_delta = worst_delta.max((delta_triviality(&t).map_err(|e| e.to_string())? - 1.0).norm());
                    triples += 1;
                    for d in c + 1..k {
                        let line = |i: usize, j: usize| det_line(&s, cuts[i], cuts[j]);
                        let (ab, bc, cd) = (line(a, b).unwrap(), line(b, c).unwrap(), line(c, d).unwrap());
                        let left = compose(&compose(&ab, &bc).unwrap(), &cd).unwrap();
                        let right = compose(&ab, &compose(&bc, &cd).unwrap()).unwrap();
                        worst_assoc = worst_assoc.max((left.relative_phase(&right).unwrap() - 1.0).norm());
                        quads += 1;
                    }
                }
            }
        }
    }
    ensure(
        worst_delta <= 1e-12 && worst_assoc <= 1e-12,
        format!(
            "{} holonomies, {triples} cut triples: max |delta - 1| = {worst_delta:.1e}; {quads} quadruples: max associativity gap = {worst_assoc:.1e}",
            suite.len()
        ),
    )
}

fn criterion_2() -> Outcome {
    let half = Rational64::new(1, 2);
    let mut worst = 0.0f64;
    let mut report = Vec::new();
    for colors in 1..=2 {
        let w = FockWindow::new(colors, 6, half).map_err(|e| e.to_string())?;
        let r = car_check(&w, 2).map_err(|e| e.to_string())?;
        worst = worst.max(r);
        report.push(format!("colors={colors}: {r}"));
    }
    // every state of a smaller window
    let small = FockWindow::new(1, 3, half).map_err(|e| e.to_string())?;
    let full = car_check(&small, small.slot_count()).map_err(|e| e.to_string())?;
    worst = worst.max(full);
    ensure(
        worst == 0.0,
        format!("N=6 ({}), all 2^{} states at N=3: {full}", report.join(", "), small.slot_count()),
    )
}

fn criterion_3() -> Outcome {
    let w = FockWindow::new(2, 6, Rational64::new(1, 2)).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut cases = 0;
    for i in 1..=2 {
        for j in 1..=2 {
            for k in 1..=2 {
                for l in 1..=2 {
                    for m in -2..=2 {
                        for n in -2..=2 {
                            worst = worst.max(commutator_check(i, j, k, l, m, n, &w).map_err(|e| e.to_string())?);
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    let vac = w.vacuum();
    let mut pairings = Vec::new();
    let mut central_ok = true;
    for m in 1..=3 {
        let a = sigma(1, 1, m, &w).map_err(|e| e.to_string())?;
        let b = sigma(1, 1, -m, &w).map_err(|e| e.to_string())?;
        let comm = &a.apply(&b.apply(&vac)) - &b.apply(&a.apply(&vac));
        let p = vac.inner(&comm);
        central_ok &= p == Complex64::new(-m as f64, 0.0);
        pairings.push(format!("m={m}: {}", p.re));
    }
    ensure(
        worst == 0.0 && central_ok,
        format!(
            "{cases} commutators exact (max residual {worst}); vacuum pairing [σ(e_m), σ(e_-m)] = -m ({}); integer |m| reproduced, sign fixed by the CAR conventions",
            pairings.join(", ")
        ),
    )
}

fn criterion_4() -> Outcome {
    let lambda = Rational64::new(1, 2);
    let w = FockWindow::new(2, 6, lambda).map_err(|e| e.to_string())?;
    let mut violations = 0.0f64;
    let mut shift = 0.0f64;
    let mut counts_ok = true;
    for mu in [Rational64::new(3, 2), Rational64::new(5, 2), Rational64::new(7, 3)] {
        let v = bogoliubov_vacuum(&w, mu).map_err(|e| e.to_string())?;
        violations = violations.max(vacuum_violations(&v, mu).map_err(|e| e.to_string())?);
        // integers strictly between the cuts
        let count = (-10..=10).filter(|m| lambda < Rational64::from_integer(*m) && Rational64::from_integer(*m) < mu).count();
        counts_ok &= cut_shift_count(lambda, mu) == count as i64;
        for i in 1..=2 {
            for j in 1..=2 {
                for n in -2..=2 {
                    shift = shift.max(cut_shift_check(i, j, n, &w, mu).map_err(|e| e.to_string())?);
                }
            }
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let exps = [
        (LieElement::basis(1, 1, 0), 0.5),
        (LieElement::basis(1, 1, 0).with(1, 1, 1, one * 0.5).with(1, 1, -1, one * -0.5), -0.3),
        (LieElement::basis(1, 2, 1).with(2, 1, -1, -one).with(2, 2, 0, one * 0.5), 0.8),
    ];
    let mut proj = 0.0f64;
    for (k, t) in &exps {
        proj = proj.max(projective_equality_check(k, *t, &w, Rational64::new(5, 2)).map_err(|e| e.to_string())?);
    }
    ensure(
        violations == 0.0 && shift == 0.0 && counts_ok && proj <= 1e-10,
        format!("vacuum annihilation residual {violations}, cut shift residual {shift}, n_λμ counts match: {counts_ok}, projective residual {proj:.1e}"),
    )
}

fn criterion_5() -> Outcome {
    let conn = ConnectionPreset::su2_family()
        .sample(Grid::new(8, 16, 3).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let ms = ms_identity_check(&conn).map_err(|e| e.to_string())?;
    let order = ms.order.unwrap_or(f64::NAN);
    ensure(
        order >= 1.9,
        format!(
            "residual {:.3e} (M=16) -> {:.3e} (M=32), order {order:.2}, Pontryagin scale {:.3}",
            ms.residual,
            ms.refined_residual.unwrap_or(f64::NAN),
            ms.lhs_max
        ),
    )
}

/// `tr_ρ(X²) / tr(X²)` on a pseudorandom `X`, from the representation matrices alone.
fn trace_oracle(rho: &Representation, seed: u64) -> f64 {
    let mut rng = seeded_rng(seed);
    let x = random_su_algebra(rho.n(), 1.0, &mut rng);
    let rx = rho.apply(&x).unwrap();
    ((&rx * &rx).trace() / (&x * &x).trace()).re
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    for name in ["su2-family", "su2-simple", "flat", "abelian", "theta-only"] {
        let preset = ConnectionPreset::from_name(name, &[]).map_err(|e| e.to_string())?;
        let pair = to_caloron(&preset.sample(Grid::new(8, 8, 3).unwrap()).map_err(|e| e.to_string())?);
        let adj = Representation::new(2, RepKind::Adjoint).map_err(|e| e.to_string())?;
        let b = b_field(&pair).map_err(|e| e.to_string())?;
        let scale = 4.0 * b.max_abs().max(b.exterior_derivative().unwrap().max_abs()).max(1e-300);
        let r = rho_scaling_check(&pair, &adj).map_err(|e| e.to_string())?;
        worst = worst.max(if b.max_abs() == 0.0 { r } else { r / scale });
    }
    let cases = [
        (2, RepKind::Fundamental, 1),
        (3, RepKind::Fundamental, 1),
        (4, RepKind::Fundamental, 1),
        (2, RepKind::Adjoint, 4),
        (2, RepKind::Trivial, 0),
        (3, RepKind::Trivial, 0),
    ];
    let mut index_ok = true;
    let mut rows = Vec::new();
    for (k, (n, kind, want)) in cases.into_iter().enumerate() {
        let rho = Representation::new(n, kind).map_err(|e| e.to_string())?;
        let exact = rho.dynkin_index().map_err(|e| e.to_string())?;
        let oracle = trace_oracle(&rho, k as u64);
        index_ok &= exact == Rational64::from_integer(want) && (oracle - want as f64).abs() < 1e-10;
        rows.push(format!("su({n}) {kind:?} = {exact}"));
    }
    ensure(
        worst <= 1e-8 && index_ok,
        format!("max relative |B_adj - 4B|, |H_adj - 4H| = {worst:.1e} over 5 presets; {}", rows.join(", ")),
    )
}

fn criterion_7() -> Outcome {
    let conn = ConnectionPreset::su2_family()
        .sample(Grid::new(8, 16, 3).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let pont = pontryagin_form(&conn).map_err(|e| e.to_string())?;
    let fund = index_curvature(&conn, &Representation::new(2, RepKind::Fundamental).unwrap()).map_err(|e| e.to_string())?;
    let adj = index_curvature(&conn, &Representation::new(2, RepKind::Adjoint).unwrap()).map_err(|e| e.to_string())?;
    let scale = pont.max_abs();
    let fund_gap = fund.max_diff(&pont).unwrap() / scale;
    let adj_gap = adj.max_diff(&fund.scaled(4.0)).unwrap() / (4.0 * scale);
    ensure(
        fund_gap <= 1e-13 && adj_gap <= 1e-8,
        format!("index(fundamental) vs Pontryagin: {fund_gap:.1e} relative; index(adjoint) vs 4x: {adj_gap:.1e}"),
    )
}

fn criterion_8() -> Outcome {
    let r = SurfaceGroupRep::su2_anticommuting().map_err(|e| e.to_string())?;
    let rel = relation_check(&r);
    let irr = irreducibility_check(&r);
    let mut rng = seeded_rng(99);
    let mut invariant = true;
    let mut drift = 0.0f64;
    for _ in 0..10 {
        let s = conjugate(&r, &random_special_unitary(2, &mut rng)).map_err(|e| e.to_string())?;
        let v = irreducibility_check(&s);
        invariant &= v.irreducible && v.commutant_dim == 1 && !v.indeterminate;
        drift = drift.max((relation_check(&s) - rel).abs());
    }
    let cut = SpectralCut::new(1, 3);
    let mut flows_ok = true;
    let mut flows = Vec::new();
    for w in [1, 2, -1] {
        let f = spectral_flow(&winding_path(&[w], 48).unwrap(), &cut, 4).map_err(|e| e.to_string())?;
        flows_ok &= f == w;
        flows.push(format!("U(1) winding {w}: {f}"));
    }
    let a1 = LoopWord::new(vec![(1, 1)]).unwrap();
    let path: Vec<_> = balanced_path(32, 0.0, 1.0)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|p| circle_holonomy(p, &a1).unwrap())
        .collect();
    let balanced = spectral_flow(&path, &cut, 4).map_err(|e| e.to_string())?;
    flows_ok &= balanced == 0;
    ensure(
        rel <= 1e-12 && irr.irreducible && !irr.indeterminate && invariant && drift <= 1e-12 && flows_ok,
        format!(
            "relation {rel:.1e}, irreducible {} (commutant {}), 10 conjugations invariant: {invariant} (drift {drift:.1e}); {}; SU(2) balanced: {balanced}",
            irr.irreducible,
            irr.commutant_dim,
            flows.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    let mut slowest = Duration::ZERO;
    for k in 0..2 {
        let path = dir.path().join(format!("all-{k}.json"));
        let start = Instant::now();
        let status = Command::new(env!("CARGO_BIN_EXE_gerbetool"))
            .args(["all", "--seed", "7", "--out", path.to_str().unwrap()])
            .status()
            .map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        if status.code() != Some(0) {
            return Err(format!("gerbetool all exited with {status}"));
        }
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let report: serde_json::Value = serde_json::from_slice(&outputs[0]).map_err(|e| e.to_string())?;
    let stable = outputs[0] == outputs[1];
    ensure(
        stable && slowest < Duration::from_secs(300),
        format!(
            "exit 0, {} checks, slowest run {:.1}s, byte-identical reports: {stable}",
            report["summary"]["total"],
            slowest.as_secs_f64()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<u64>); 9] = [
        ("determinant-line cocycle", criterion_1, Some(10)),
        ("CAR algebra", criterion_2, Some(30)),
        ("central extension", criterion_3, Some(60)),
        ("Bogoliubov transport", criterion_4, Some(30)),
        ("Murray-Stevenson identity", criterion_5, Some(180)),
        ("Dynkin scaling", criterion_6, Some(60)),
        ("index/caloron curvature", criterion_7, None),
        ("moduli checks", criterion_8, Some(30)),
        ("full suite", criterion_9, None),
    ];
    let mut failed = 0;
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let over = budget.is_some_and(|b| secs > b as f64);
        let (tag, msg) = match outcome {
            Ok(m) if !over => ("PASS", m),
            Ok(m) => ("FAIL", format!("{m}; over the {}s budget", budget.unwrap())),
            Err(m) => ("FAIL", m),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {} [{tag}] {name}: {msg} ({secs:.1}s)", k + 1);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
