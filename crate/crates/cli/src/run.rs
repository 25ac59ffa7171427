use gerbe_core::caloron::{
    b_field, higgs_gauge_law_check, index_curvature, ms_identity_check, pontryagin_form, rho_scaling_check,
    to_caloron, winding_gauge, ConnectionPreset, Grid, RepKind, Representation,
};
use gerbe_core::detline::{compose, delta_triviality, det_line, hodge_dual_iso, CechTriple};
use gerbe_core::fock::{
    bogoliubov_reverse, bogoliubov_vacuum, car_check, commutator_check, cut_shift_check, cut_shift_count,
    projective_equality_check, sigma, vacuum_violations, FockWindow, LieElement,
};
use gerbe_core::linalg::{determinant, max_abs, random_special_unitary};
use gerbe_core::moduli::{
    balanced_path, circle_holonomy, conjugate, holonomy, irreducibility_check, pairing_scaling_residual,
    pontryagin_pairing, relation_check, LoopWord, PairingFamily, SurfaceGroupRep,
};
use gerbe_core::spectral::{
    band, dirac_spectrum, in_cover, reference_holonomies, spectral_flow, winding_path, Holonomy, SpectralCut,
};
use gerbe_core::{seeded_rng, CMatrix, Complex64};
use rand::Rng;
use serde_json::json;

use crate::config::{ConfigError, Params, Scenario, SECTIONS};
use crate::report::{number, timed, Check, Report};

/// `U` is taken to have `e^{2πiv}` as an eigenvalue when `|det(U − e^{2πiv})|` is below this.
const COVER_DET_TOL: f64 = 1e-8;

pub fn run(s: &Scenario, timings: bool) -> Result<Report, ConfigError> {
    let mut checks = Vec::new();
    for section in SECTIONS {
        if !s.sections.contains_key(section) {
            continue;
        }
        let p = s.params(section);
        let batch = match section {
            "spectrum" => spectrum(p, s.seed, timings)?,
            "cover" => cover(p, s.seed, timings)?,
            "cocycle" => cocycle(p, s.seed, timings)?,
            "fock" => fock(p, timings)?,
            "caloron" => caloron(p, timings)?,
            "moduli" => moduli(p, s.seed, timings)?,
            "pairing" => pairing(p, timings)?,
            _ => unreachable!("sections are fixed"),
        };
        if s.command == "all" {
            checks.extend(batch.into_iter().map(|c| c.prefixed(section)));
        } else {
            checks.extend(batch);
        }
    }
    Ok(Report {
        scenario: s.clone(),
        checks,
    })
}

fn config_err(p: &Params, key: &str, e: impl ToString) -> ConfigError {
    ConfigError(format!("key '{}': {}", p.path(key), e.to_string()))
}

/// Turns a fallible check body into a record.
fn check(name: &str, f: impl FnOnce() -> gerbe_core::Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::errored(name, e))
}

fn holonomies(p: &Params, seed: u64) -> Result<Vec<(String, Holonomy)>, ConfigError> {
    let phases = p.phase_lists("phases");
    if phases.is_empty() {
        return reference_holonomies(seed).map_err(|e| config_err(p, "phases", e));
    }
    phases
        .iter()
        .enumerate()
        .map(|(k, f)| {
            Holonomy::from_fractional_phases(f)
                .map(|h| (format!("phases[{k}]"), h))
                .map_err(|e| config_err(p, "phases", e))
        })
        .collect()
}

/// Cuts `(2k+1)/(2q)` strictly inside `(−N, N)`.
fn candidate_cuts(window: i64, q: i64) -> Vec<SpectralCut> {
    (-window * q..window * q).map(|k| SpectralCut::new(2 * k + 1, 2 * q)).collect()
}

fn cover_cuts(h: &Holonomy, window: i64, q: i64) -> gerbe_core::Result<Vec<SpectralCut>> {
    let s = dirac_spectrum(h, window)?;
    let mut out = Vec::new();
    for c in candidate_cuts(window, q) {
        if in_cover(&s, &c)? {
            out.push(c);
        }
    }
    Ok(out)
}

fn spectrum(p: &Params, seed: u64, timings: bool) -> Result<Vec<Check>, ConfigError> {
    let suite = holonomies(p, seed)?;
    let n = p.int("window");
    let windings = p.ints("windings");
    let steps = p.usize("steps");
    let cut = SpectralCut::with_tolerance(p.rational("cut"), 1e-9);
    if windings.is_empty() {
        return Err(config_err(p, "windings", "needs at least one winding"));
    }
    if cut.value().abs() >= n as f64 {
        return Err(config_err(p, "cut", "must lie strictly inside the window"));
    }
    let mut checks = timed(timings, || {
        vec![check("spectrum_trace_oracle", || {
            // Σ e^{2πiλ} over the window equals (2N+1) tr U
            let mut worst = 0.0f64;
            for (_, h) in &suite {
                let s = dirac_spectrum(h, n)?;
                let sum: Complex64 = s.eigenvalues().map(|l| (Complex64::i() * std::f64::consts::TAU * l).exp()).sum();
                worst = worst.max((sum - h.matrix().trace() * (2 * n + 1) as f64).norm());
                let v: Vec<f64> = s.eigenvalues().collect();
                if v.len() != h.rank() * (2 * n as usize + 1) || v.windows(2).any(|w| w[0] > w[1]) {
                    worst = f64::INFINITY;
                }
            }
            Ok(Check::at_most("spectrum_trace_oracle", worst, 1e-9).with("holonomies", json!(suite.len())))
        })]
    });
    checks.extend(timed(timings, || {
        let path = winding_path(&windings, steps);
        let want: i64 = windings.iter().sum();
        vec![
            check("flow_winding", || {
                Ok(Check::exact("flow_winding", spectral_flow(&path.clone()?, &cut, n)?, want))
            }),
            check("flow_constant", || {
                let h = path.clone()?[0].clone();
                Ok(Check::exact("flow_constant", spectral_flow(&[h.clone(), h], &cut, n)?, 0))
            }),
            check("flow_additive", || {
                let loop_ = path.clone()?;
                let twice: Vec<_> = loop_.iter().chain(&loop_[1..]).cloned().collect();
                let back: Vec<_> = loop_.iter().chain(loop_.iter().rev().skip(1)).cloned().collect();
                let single = spectral_flow(&loop_, &cut, n)?;
                let err = (spectral_flow(&twice, &cut, n)? - 2 * single).abs() + spectral_flow(&back, &cut, n)?.abs();
                Ok(Check::exact("flow_additive", err, 0))
            }),
        ]
    }));
    Ok(checks)
}

fn cover(p: &Params, seed: u64, timings: bool) -> Result<Vec<Check>, ConfigError> {
    let suite = holonomies(p, seed)?;
    let n = p.int("window");
    let q = p.int("cut_denominator");
    Ok(timed(timings, || {
        vec![
            check("cover_determinant_oracle", || {
                let mut mismatches = 0;
                let mut tested = 0;
                for (_, h) in &suite {
                    let s = dirac_spectrum(h, n)?;
                    let dim = h.rank();
                    for c in candidate_cuts(n, q) {
                        let z = (Complex64::i() * std::f64::consts::TAU * c.value()).exp();
                        let shifted = h.matrix() - CMatrix::identity(dim, dim) * z;
                        let oracle = determinant(&shifted).norm() > COVER_DET_TOL;
                        tested += 1;
                        if in_cover(&s, &c)? != oracle {
                            mismatches += 1;
                        }
                    }
                }
                Ok(Check::exact("cover_determinant_oracle", mismatches, 0).with("cuts_tested", json!(tested)))
            }),
            check("band_additivity", || {
                let mut mismatches = 0;
                let mut triples = 0;
                for (_, h) in &suite {
                    let s = dirac_spectrum(h, n)?;
                    let cuts = cover_cuts(h, n, q)?;
                    for a in 0..cuts.len() {
                        for b in a + 1..cuts.len() {
                            for c in b + 1..cuts.len() {
                                let whole = band(&s, &cuts[a], &cuts[c])?;
                                let mut parts = band(&s, &cuts[a], &cuts[b])?;
                                parts.extend(band(&s, &cuts[b], &cuts[c])?);
                                parts.sort_by(|x, y| x.canonical_cmp(y));
                                triples += 1;
                                if whole != parts {
                                    mismatches += 1;
                                }
                            }
                        }
                    }
                }
                Ok(Check::exact("band_additivity", mismatches, 0).with("triples", json!(triples)))
            }),
        ]
    }))
}

fn cocycle(p: &Params, seed: u64, timings: bool) -> Result<Vec<Check>, ConfigError> {
    let suite = holonomies(p, seed)?;
    let n = p.int("window");
    let q = p.int("cut_denominator");
    let hodge_max = p.usize("hodge_max_dim");
    if hodge_max > gerbe_core::detline::MAX_HODGE_DIM {
        return Err(config_err(p, "hodge_max_dim", format!("must be <= {}", gerbe_core::detline::MAX_HODGE_DIM)));
    }
    Ok(timed(timings, || {
        vec![
            check("delta_triviality", || {
                let mut worst = 0.0f64;
                let mut triples = 0;
                for (_, h) in &suite {
                    let s = dirac_spectrum(h, n)?;
                    let cuts = cover_cuts(h, n, q)?;
                    for a in 0..cuts.len() {
                        for b in a + 1..cuts.len() {
                            for c in b + 1..cuts.len() {
                                let t = CechTriple::new(&s, [cuts[a], cuts[b], cuts[c]])?;
                                worst = worst.max((delta_triviality(&t)? - 1.0).norm());
                                triples += 1;
                            }
                        }
                    }
                }
                Ok(Check::at_most("delta_triviality", worst, 1e-12).with("triples", json!(triples)))
            }),
            check("associativity", || {
                let mut worst = 0.0f64;
                let mut quadruples = 0;
                for (_, h) in &suite {
                    let s = dirac_spectrum(h, n)?;
                    let cuts = cover_cuts(h, n, q)?;
                    let k = cuts.len();
                    for a in 0..k {
                        for b in a + 1..k {
                            let ab = det_line(&s, cuts[a], cuts[b])?;
                            for c in b + 1..k {
                                let bc = det_line(&s, cuts[b], cuts[c])?;
                                let abc = compose(&ab, &bc)?;
                                for d in c + 1..k {
                                    let cd = det_line(&s, cuts[c], cuts[d])?;
                                    let left = compose(&abc, &cd)?;
                                    let right = compose(&ab, &compose(&bc, &cd)?)?;
                                    worst = worst.max((left.relative_phase(&right)? - 1.0).norm());
                                    quadruples += 1;
                                }
                            }
                        }
                    }
                }
                Ok(Check::at_most("associativity", worst, 1e-12).with("quadruples", json!(quadruples)))
            }),
            check("hodge_dual_iso", || {
                let mut worst = 0.0f64;
                for dim in 1..=hodge_max {
                    worst = worst.max(hodge_dual_iso(dim, seed.wrapping_add(dim as u64))?);
                }
                Ok(Check::at_most("hodge_dual_iso", worst, 1e-10).with("max_dim", json!(hodge_max)))
            }),
        ]
    }))
}

/// Test elements of `L𝔤𝔩(n)` for the projective exponentials, cycled over the requested times.
fn test_elements(colors: usize) -> Vec<LieElement> {
    let one = Complex64::new(1.0, 0.0);
    let mut out = vec![
        LieElement::basis(1, 1, 0),
        LieElement::basis(1, 1, 0)
            .with(1, 1, 1, one * 0.5)
            .with(1, 1, -1, one * -0.5),
    ];
    out.push(if colors >= 2 {
        LieElement::basis(1, 2, 1).with(2, 1, -1, -one).with(2, 2, 0, one * 0.5)
    } else {
        LieElement::basis(1, 1, 2).with(1, 1, -2, -one).with(1, 1, 0, one * 0.25)
    });
    out
}

fn fock(p: &Params, timings: bool) -> Result<Vec<Check>, ConfigError> {
    let colors = p.usize("colors");
    let lambda = p.rational("lambda");
    let mu = p.rational("mu");
    let bound = p.int("mode_bound");
    let car_exc = p.usize("car_excitations");
    let times = p.floats("exp_times");
    let w = FockWindow::new(colors, p.int("window"), lambda).map_err(|e| config_err(p, "lambda", e))?;
    if mu <= lambda || mu.is_integer() {
        return Err(config_err(p, "mu", "must be a non-integer above lambda"));
    }
    if let Some(t) = times.iter().find(|t| t.abs() > 1.0) {
        return Err(config_err(p, "exp_times", format!("|t| = {} exceeds 1", t.abs())));
    }
    let mut checks = timed(timings, || {
        vec![check("car", || {
            Ok(Check::at_most("car", car_check(&w, car_exc)?, 0.0).with("max_excitations", json!(car_exc)))
        })]
    });
    checks.extend(timed(timings, || {
        vec![check("commutator_sweep", || {
            let mut worst = 0.0f64;
            let mut cases = 0;
            for i in 1..=colors {
                for j in 1..=colors {
                    for k in 1..=colors {
                        for l in 1..=colors {
                            for m in -bound..=bound {
                                for n in -bound..=bound {
                                    worst = worst.max(commutator_check(i, j, k, l, m, n, &w)?);
                                    cases += 1;
                                }
                            }
                        }
                    }
                }
            }
            Ok(Check::at_most("commutator_sweep", worst, 0.0).with("cases", json!(cases)))
        })]
    }));
    checks.extend(timed(timings, || {
        vec![check("central_term", || {
            // ⟨λ|[σ(e^{11}_m), σ(e^{11}_{−m})]|λ⟩ = −m for the CAR conventions used here
            let vac = w.vacuum();
            let mut worst = 0.0f64;
            let mut values = Vec::new();
            for m in 1..=bound.max(1) {
                let a = sigma(1, 1, m, &w)?;
                let b = sigma(1, 1, -m, &w)?;
                let comm = &a.apply(&b.apply(&vac)) - &b.apply(&a.apply(&vac));
                let pairing = vac.inner(&comm);
                worst = worst.max((pairing - Complex64::new(-m as f64, 0.0)).norm());
                values.push(json!([m, number(pairing.re)]));
            }
            Ok(Check::at_most("central_term", worst, 0.0)
                .with("vacuum_pairings", json!(values))
                .with("expected", json!("-m")))
        })]
    }));
    checks.extend(timed(timings, || {
        vec![
            check("bogoliubov_vacuum", || {
                let v = bogoliubov_vacuum(&w, mu)?;
                Ok(Check::at_most("bogoliubov_vacuum", vacuum_violations(&v, mu)?, 0.0))
            }),
            check("bogoliubov_reverse", || {
                let v = bogoliubov_vacuum(&w, mu)?;
                let back = bogoliubov_reverse(&w, mu, &v)?;
                Ok(Check::at_most("bogoliubov_reverse", (&back - &w.vacuum()).max_norm(), 0.0))
            }),
            check("cut_shift", || {
                let mut worst = 0.0f64;
                for i in 1..=colors {
                    for j in 1..=colors {
                        for n in -bound..=bound {
                            worst = worst.max(cut_shift_check(i, j, n, &w, mu)?);
                        }
                    }
                }
                Ok(Check::at_most("cut_shift", worst, 0.0).with("n_lambda_mu", json!(cut_shift_count(lambda, mu))))
            }),
            check("projective_exponentials", || {
                let elements = test_elements(colors);
                let mut worst = 0.0f64;
                for (idx, t) in times.iter().enumerate() {
                    let k = &elements[idx % elements.len()];
                    worst = worst.max(projective_equality_check(k, *t, &w, mu)?);
                }
                Ok(Check::at_most("projective_exponentials", worst, 1e-10).with("exponentials", json!(times.len())))
            }),
        ]
    }));
    Ok(checks)
}

fn parse_rep(n: usize, name: &str) -> Option<RepKind> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a.trim().parse::<usize>().ok()?)),
        None => (name, None),
    };
    Some(match (head.trim(), arg) {
        ("trivial", None) => RepKind::Trivial,
        ("fundamental", None) => RepKind::Fundamental,
        ("adjoint", None) if n >= 2 => RepKind::Adjoint,
        ("sym", Some(k)) => RepKind::Symmetric(k),
        ("ext", Some(k)) => RepKind::Exterior(k),
        _ => return None,
    })
}

fn caloron(p: &Params, timings: bool) -> Result<Vec<Check>, ConfigError> {
    let preset =
        ConnectionPreset::from_name(p.str("preset"), &p.floats("amplitudes")).map_err(|e| config_err(p, "preset", e))?;
    let grid = Grid::new(p.usize("theta_points"), p.usize("base_points"), 3).map_err(|e| config_err(p, "base_points", e))?;
    let gauge_p = p.usize("gauge_theta_points");
    let gauge_grid = Grid::new(gauge_p, p.usize("gauge_base_points"), 3).map_err(|e| config_err(p, "gauge_base_points", e))?;
    let min_order = p.float("min_order");
    let winding = p.int("gauge_winding");
    let n = preset.rank();

    let mut checks = timed(timings, || {
        vec![check("ms_identity", || {
            let conn = preset.sample(grid)?;
            let ms = ms_identity_check(&conn)?;
            let order = ms.order.unwrap_or(f64::NAN);
            Ok(Check::at_least("ms_identity", order, min_order)
                .with("residual", number(ms.residual))
                .with("refined_residual", number(ms.refined_residual.unwrap_or(f64::NAN)))
                .with("pontryagin_max", number(ms.lhs_max))
                .with("base_points", json!([grid.base_points(), 2 * grid.base_points()])))
        })]
    });
    checks.extend(timed(timings, || {
        vec![check("higgs_gauge_law", || {
            let gamma = winding_gauge(n, gauge_p, winding);
            let coarse = higgs_gauge_law_check(&to_caloron(&preset.sample(gauge_grid)?), &gamma)?;
            let fine_grid = gauge_grid.with_theta_points(2 * gauge_p)?;
            let fine_gamma = winding_gauge(n, 2 * gauge_p, winding);
            let fine = higgs_gauge_law_check(&to_caloron(&preset.sample(fine_grid)?), &fine_gamma)?;
            let order = (coarse / fine).log2();
            Ok(Check::at_least("higgs_gauge_law", if coarse == 0.0 { f64::INFINITY } else { order }, 3.5)
                .with("residual", number(coarse))
                .with("refined_residual", number(fine))
                .with("theta_points", json!([gauge_p, 2 * gauge_p])))
        })]
    }));
    checks.extend(timed(timings, || {
        vec![check("dynkin_index", || {
            let cases = [
                (2, RepKind::Fundamental, 1),
                (3, RepKind::Fundamental, 1),
                (4, RepKind::Fundamental, 1),
                (2, RepKind::Adjoint, 4),
                (2, RepKind::Trivial, 0),
            ];
            let mut worst = 0.0f64;
            let mut rows = Vec::new();
            for (n, kind, want) in cases {
                let r = Representation::new(n, kind)?;
                let exact = r.dynkin_index()?;
                let trace_oracle = r.numeric_index()?;
                let got = *exact.numer() as f64 / *exact.denom() as f64;
                worst = worst.max((got - want as f64).abs()).max((trace_oracle - got).abs());
                rows.push(json!([n, format!("{kind:?}"), exact.to_string()]));
            }
            Ok(Check::at_most("dynkin_index", worst, 1e-12).with("cases", json!(rows)))
        })]
    }));
    checks.extend(timed(timings, || {
        vec![
            check("rho_scaling_adjoint", || {
                let conn = preset.sample(grid)?;
                let pair = to_caloron(&conn);
                let adj = Representation::new(n, RepKind::Adjoint)?;
                let iota = adj.numeric_index()?;
                let b = b_field(&pair)?;
                let scale = iota * b.max_abs().max(b.exterior_derivative()?.max_abs());
                Ok(Check::at_most("rho_scaling_adjoint", rho_scaling_check(&pair, &adj)? / scale, 1e-8)
                    .with("dynkin_index", number(iota)))
            }),
            check("index_curvature", || {
                let conn = preset.sample(grid)?;
                let fund = Representation::new(n, RepKind::Fundamental)?;
                let adj = Representation::new(n, RepKind::Adjoint)?;
                let pont = pontryagin_form(&conn)?;
                let h_fund = index_curvature(&conn, &fund)?;
                let h_adj = index_curvature(&conn, &adj)?;
                let scale = pont.max_abs();
                let fund_gap = h_fund.max_diff(&pont)? / scale;
                let iota = adj.numeric_index()?;
                let adj_gap = h_adj.max_diff(&h_fund.scaled(iota))? / (iota * scale);
                Ok(Check::at_most("index_curvature", fund_gap.max(adj_gap), 1e-8)
                    .with("fundamental_vs_pontryagin", number(fund_gap))
                    .with("adjoint_vs_scaled_fundamental", number(adj_gap)))
            }),
        ]
    }));
    Ok(checks)
}

fn random_word<R: Rng>(rng: &mut R, generators: usize, len: usize) -> LoopWord {
    let letters = (0..len)
        .map(|_| (rng.random_range(1..=generators), if rng.random_bool(0.5) { 1 } else { -1 }))
        .collect();
    LoopWord::new(letters).expect("nonempty word with valid letters")
}

fn moduli(p: &Params, seed: u64, timings: bool) -> Result<Vec<Check>, ConfigError> {
    let conjugations = p.usize("conjugations");
    let steps = p.usize("flow_steps");
    let window = p.int("flow_window");
    let words = p.usize("words");
    let cut = SpectralCut::new(1, 3);
    if window < 1 {
        return Err(config_err(p, "flow_window", "must be positive"));
    }
    let mut checks = timed(timings, || {
        vec![
            check("relation", || {
                let r = SurfaceGroupRep::su2_anticommuting()?;
                Ok(Check::at_most("relation", relation_check(&r), 1e-12))
            }),
            check("irreducible", || {
                let v = irreducibility_check(&SurfaceGroupRep::su2_anticommuting()?);
                let c = Check::exact("irreducible", v.commutant_dim as i64, 1).with("irreducible", json!(v.irreducible));
                Ok(if v.indeterminate { c.indeterminate() } else { c })
            }),
            check("reducible_blocks", || {
                let v = irreducibility_check(&SurfaceGroupRep::su4_blocks()?);
                let c = Check::exact("reducible_blocks", v.commutant_dim as i64, 4);
                Ok(if v.indeterminate { c.indeterminate() } else { c })
            }),
        ]
    });
    checks.extend(timed(timings, || {
        vec![check("conjugation_invariance", || {
            let mut rng = seeded_rng(seed);
            let mut worst = 0.0f64;
            let mut indeterminate = false;
            for r in [SurfaceGroupRep::su2_anticommuting()?, SurfaceGroupRep::su4_blocks()?] {
                let base_rel = relation_check(&r);
                let base = irreducibility_check(&r);
                for _ in 0..conjugations {
                    let h = random_special_unitary(r.n(), &mut rng);
                    let s = conjugate(&r, &h)?;
                    let v = irreducibility_check(&s);
                    indeterminate |= v.indeterminate;
                    worst = worst.max((relation_check(&s) - base_rel).abs());
                    if (v.commutant_dim, v.irreducible) != (base.commutant_dim, base.irreducible) {
                        worst = f64::INFINITY;
                    }
                }
            }
            let c = Check::at_most("conjugation_invariance", worst, 1e-12).with("conjugations", json!(conjugations));
            Ok(if indeterminate { c.indeterminate() } else { c })
        })]
    }));
    checks.extend(timed(timings, || {
        vec![
            check("word_homomorphism", || {
                let mut rng = seeded_rng(seed ^ 0x5eed);
                let mut worst = 0.0f64;
                for r in [SurfaceGroupRep::su2_anticommuting()?, SurfaceGroupRep::su4_blocks()?] {
                    for _ in 0..words {
                        let (a, b) = (random_word(&mut rng, 4, 5), random_word(&mut rng, 4, 4));
                        let joint = holonomy(&r, &a.concat(&b))?;
                        worst = worst.max(max_abs(&(joint - holonomy(&r, &a)? * holonomy(&r, &b)?)));
                    }
                }
                Ok(Check::at_most("word_homomorphism", worst, 0.0).with("pairs", json!(2 * words)))
            }),
            check("flow_u1_winding", || {
                Ok(Check::exact("flow_u1_winding", spectral_flow(&winding_path(&[1], steps)?, &cut, window)?, 1))
            }),
            check("flow_su2_balanced", || {
                let a1 = LoopWord::new(vec![(1, 1)])?;
                let path = balanced_path(steps, 0.0, 1.0)?
                    .iter()
                    .map(|r| circle_holonomy(r, &a1))
                    .collect::<gerbe_core::Result<Vec<_>>>()?;
                Ok(Check::exact("flow_su2_balanced", spectral_flow(&path, &cut, window)?, 0))
            }),
        ]
    }));
    Ok(checks)
}

fn pairing(p: &Params, timings: bool) -> Result<Vec<Check>, ConfigError> {
    let family = PairingFamily::from_name(p.str("family"), p.float("epsilon"), {
        let w = p.ints("windings");
        if w.len() != 3 {
            return Err(config_err(p, "windings", "needs exactly three entries"));
        }
        [w[0], w[1], w[2]]
    })
    .map_err(|e| config_err(p, "family", e))?;
    let gamma = LoopWord::new(p.word("gamma")).map_err(|e| config_err(p, "gamma", e))?;
    if gamma.letters().iter().any(|(g, _)| *g > 4) {
        return Err(config_err(p, "gamma", "genus-2 words use generators 1..=4"));
    }
    let rep_name = p.str("representation");
    let kind = parse_rep(2, rep_name).ok_or_else(|| config_err(p, "representation", format!("unknown '{rep_name}'")))?;
    let rho = Representation::new(2, kind).map_err(|e| config_err(p, "representation", e))?;
    let theta = p.usize("theta_points");
    let sizes = p.ints("base_points");
    if sizes.is_empty() {
        return Err(config_err(p, "base_points", "needs at least one resolution"));
    }
    let grids = sizes
        .iter()
        .map(|m| Grid::new(theta, *m as usize, 3).map_err(|e| config_err(p, "base_points", e)))
        .collect::<Result<Vec<_>, _>>()?;
    let finest = *grids.last().expect("nonempty");
    Ok(timed(timings, || {
        vec![
            check("density_scaling", || {
                let r = pairing_scaling_residual(&family, &gamma, &rho, finest)?;
                Ok(Check::at_most("density_scaling", r, 1e-6).with("representation", json!(rep_name)))
            }),
            check("pairing_vanishes", || {
                // trivialized families pair to zero; the value must shrink relative to the density
                let mut worst = 0.0f64;
                let mut exact = 0.0f64;
                let mut rows = Vec::new();
                for g in &grids {
                    let v = pontryagin_pairing(&family, &gamma, &rho, *g)?;
                    let rel = if v.density_max > 0.0 { v.value.abs() / v.density_max } else { v.value.abs() };
                    worst = worst.max(rel);
                    exact = exact.max(v.exact_part.abs());
                    rows.push(json!({
                        "base_points": g.base_points(),
                        "value": number(v.value),
                        "density_max": number(v.density_max),
                    }));
                }
                Ok(Check::at_most("pairing_vanishes", worst, 1e-3)
                    .with("resolutions", json!(rows))
                    .with("exact_part", number(exact)))
            }),
        ]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_cuts_avoid_integers() {
        let cuts = candidate_cuts(2, 2);
        assert_eq!(cuts.len(), 8);
        assert!(cuts.iter().all(|c| c.value().abs() < 2.0 && c.value().fract() != 0.0));
    }

    #[test]
    fn representation_names() {
        assert_eq!(parse_rep(2, "sym:3"), Some(RepKind::Symmetric(3)));
        assert_eq!(parse_rep(2, "adjoint"), Some(RepKind::Adjoint));
        assert_eq!(parse_rep(2, "spin"), None);
        assert_eq!(parse_rep(2, "ext:x"), None);
    }
}
