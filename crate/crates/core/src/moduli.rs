//! Representations of surface groups `π₁Σ′ → SU(n)` with a central defect
//! `∏[Aᵢ, Bᵢ] = z`, their circle holonomies, and model families whose
//! induced connections over `S¹ × T³` feed the caloron pipeline.

use std::f64::consts::TAU;

use num_integer::Integer;

use crate::caloron::{
    b_field, pontryagin_form, to_caloron, Grid, LatticeConnection, LoopField, RepKind, Representation,
};
use crate::error::{Error, Result};
use crate::linalg::{expm, log_unitary, max_abs, pauli, validate_unitary, CMatrix, I};
use crate::spectral::Holonomy;

/// Singular values below this count as null directions of the commutant system.
pub const NULL_THRESHOLD: f64 = 1e-8;
/// Singular values inside this band make the commutant dimension indeterminate.
pub const INDETERMINATE_BAND: (f64, f64) = (1e-9, 1e-7);

/// Central element `z = e^{2πik/n} I` of `SU(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CentralElement {
    pub n: usize,
    pub k: i64,
}

impl CentralElement {
    pub fn new(n: usize, k: i64) -> Self {
        Self {
            n,
            k: k.rem_euclid(n as i64),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, 0)
    }

    pub fn matrix(&self) -> CMatrix {
        let phase = (I * (TAU * self.k as f64 / self.n as f64)).exp();
        CMatrix::identity(self.n, self.n) * phase
    }

    /// Whether `z` generates the center `ℤ/n`, the condition under which the
    /// moduli space is smooth and closed.
    pub fn generates_center(&self) -> bool {
        self.k.gcd(&(self.n as i64)) == 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGroupRep {
    genus: usize,
    z: CentralElement,
    generators: Vec<CMatrix>,
    tolerance: f64,
}

pub const DEFAULT_REP_TOLERANCE: f64 = 1e-10;

impl SurfaceGroupRep {
    /// Generators ordered `A₁, B₁, …, A_g, B_g`; each must be special unitary.
    ///
    /// The relation is not enforced here so that perturbed points can be
    /// studied; use [`SurfaceGroupRep::validated`] when it must hold.
    pub fn new(genus: usize, z: CentralElement, generators: Vec<CMatrix>, tolerance: f64) -> Result<Self> {
        if genus < 2 {
            return Err(Error::Argument(format!("genus must be at least 2, got {genus}")));
        }
        if z.n < 2 {
            return Err(Error::Argument(format!("SU(n) needs n >= 2, got {}", z.n)));
        }
        if generators.len() != 2 * genus {
            return Err(Error::Argument(format!(
                "genus {genus} needs {} generators, got {}",
                2 * genus,
                generators.len()
            )));
        }
        for (k, g) in generators.iter().enumerate() {
            if g.nrows() != z.n || g.ncols() != z.n {
                return Err(Error::Dimension(format!("generator {} is not {}x{}", k + 1, z.n, z.n)));
            }
            validate_unitary(g, tolerance, true)
                .map_err(|e| Error::Validation(format!("generator {}: {e}", k + 1)))?;
        }
        Ok(Self {
            genus,
            z,
            generators,
            tolerance,
        })
    }

    /// As [`SurfaceGroupRep::new`], additionally requiring the relation within tolerance.
    pub fn validated(genus: usize, z: CentralElement, generators: Vec<CMatrix>, tolerance: f64) -> Result<Self> {
        let r = Self::new(genus, z, generators, tolerance)?;
        let res = relation_check(&r);
        if res > tolerance {
            return Err(Error::Validation(format!(
                "surface relation violated: residual {res:.3e} > {tolerance:e}"
            )));
        }
        Ok(r)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn n(&self) -> usize {
        self.z.n
    }

    pub fn z(&self) -> CentralElement {
        self.z
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Replaces generator `index` (1-based) without re-checking the relation.
    pub fn with_generator(&self, index: usize, m: CMatrix) -> Result<Self> {
        if index == 0 || index > self.generators.len() {
            return Err(Error::Argument(format!("generator index {index} out of range")));
        }
        let mut gens = self.generators.clone();
        gens[index - 1] = m;
        Self::new(self.genus, self.z, gens, self.tolerance)
    }

    pub fn trivial(genus: usize, n: usize) -> Result<Self> {
        Self::validated(
            genus,
            CentralElement::identity(n),
            vec![CMatrix::identity(n, n); 2 * genus],
            DEFAULT_REP_TOLERANCE,
        )
    }

    /// Genus 2, `SU(2)`: `A₁ = iσ₁`, `B₁ = iσ₂` anticommute, so `[A₁, B₁] = −I`.
    pub fn su2_anticommuting() -> Result<Self> {
        let [s1, s2, _] = pauli();
        let id = CMatrix::identity(2, 2);
        Self::validated(
            2,
            CentralElement::new(2, 1),
            vec![s1 * I, s2 * I, id.clone(), id],
            DEFAULT_REP_TOLERANCE,
        )
    }

    /// Two copies of the anticommuting pair in `SU(4)`; reducible.
    pub fn su4_blocks() -> Result<Self> {
        let [s1, s2, _] = pauli();
        let block = |m: &CMatrix| {
            let mut out = CMatrix::zeros(4, 4);
            out.view_mut((0, 0), (2, 2)).copy_from(&(m * I));
            out.view_mut((2, 2), (2, 2)).copy_from(&(m * I));
            out
        };
        let id = CMatrix::identity(4, 4);
        Self::validated(
            2,
            CentralElement::new(4, 2),
            vec![block(&s1), block(&s2), id.clone(), id],
            DEFAULT_REP_TOLERANCE,
        )
    }

    /// `z = 1` point with `A₂ = B₁`, `B₂ = A₁`, so the two commutators cancel.
    pub fn mirrored(a1: CMatrix, b1: CMatrix, tolerance: f64) -> Result<Self> {
        let n = a1.nrows();
        Self::validated(2, CentralElement::identity(n), vec![a1.clone(), b1.clone(), b1, a1], tolerance)
    }
}

/// `A B A⁻¹ B⁻¹` for unitary `A, B`.
fn group_commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b * a.adjoint() * b.adjoint()
}

/// `‖∏ᵢ[Aᵢ, Bᵢ] − z‖_max`.
pub fn relation_check(r: &SurfaceGroupRep) -> f64 {
    let n = r.n();
    let mut prod = CMatrix::identity(n, n);
    for pair in r.generators.chunks(2) {
        prod = prod * group_commutator(&pair[0], &pair[1]);
    }
    max_abs(&(prod - r.z.matrix()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Irreducibility {
    pub irreducible: bool,
    pub commutant_dim: usize,
    /// A singular value fell in the ambiguous band; the verdict is unreliable.
    pub indeterminate: bool,
    /// Smallest singular value counted as non-null, for diagnostics.
    pub smallest_nonnull: Option<f64>,
}

/// Dimension of `{h : hX = Xh for every generator X}` from the singular
/// values of the stacked map `vec(h) ↦ vec(hX − Xh)`.
pub fn irreducibility_check(r: &SurfaceGroupRep) -> Irreducibility {
    let n = r.n();
    let nn = n * n;
    let mut stacked = CMatrix::zeros(r.generators.len() * nn, nn);
    let id = CMatrix::identity(n, n);
    for (k, x) in r.generators.iter().enumerate() {
        // column-major vec: vec(hX) = (Xᵀ ⊗ I) vec(h), vec(Xh) = (I ⊗ X) vec(h)
        let block = x.transpose().kronecker(&id) - id.kronecker(x);
        stacked.view_mut((k * nn, 0), (nn, nn)).copy_from(&block);
    }
    let sv = stacked.singular_values();
    let commutant_dim = sv.iter().filter(|s| **s < NULL_THRESHOLD).count();
    let indeterminate = sv
        .iter()
        .any(|s| *s >= INDETERMINATE_BAND.0 && *s <= INDETERMINATE_BAND.1);
    let smallest_nonnull = sv.iter().copied().filter(|s| *s >= NULL_THRESHOLD).reduce(f64::min);
    Irreducibility {
        irreducible: commutant_dim == 1,
        commutant_dim,
        indeterminate,
        smallest_nonnull,
    }
}

/// `Ad_h`: every generator `X ↦ h X h⁻¹`.
pub fn conjugate(r: &SurfaceGroupRep, h: &CMatrix) -> Result<SurfaceGroupRep> {
    if h.nrows() != r.n() || h.ncols() != r.n() {
        return Err(Error::Dimension(format!("conjugating matrix must be {0}x{0}", r.n())));
    }
    validate_unitary(h, r.tolerance, true)?;
    let gens = r.generators.iter().map(|x| h * x * h.adjoint()).collect();
    Ok(SurfaceGroupRep {
        generators: gens,
        ..r.clone()
    })
}

/// A word in the generators `a₁, b₁, …` with exponents `±1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopWord {
    letters: Vec<(usize, i8)>,
}

impl LoopWord {
    pub fn new(letters: Vec<(usize, i8)>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Argument("loop word must be nonempty".into()));
        }
        if let Some((g, e)) = letters.iter().find(|(g, e)| *g == 0 || e.abs() != 1) {
            return Err(Error::Argument(format!(
                "letter ({g}, {e}) needs a 1-based generator and exponent ±1"
            )));
        }
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    /// `∏ᵢ aᵢ bᵢ aᵢ⁻¹ bᵢ⁻¹`.
    pub fn surface_relation(genus: usize) -> Self {
        let letters = (0..genus)
            .flat_map(|i| {
                let (a, b) = (2 * i + 1, 2 * i + 2);
                [(a, 1), (b, 1), (a, -1), (b, -1)]
            })
            .collect();
        Self { letters }
    }

    pub fn concat(&self, other: &LoopWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }
}

/// Ordered product of generators (adjoint for exponent −1) along the word.
pub fn holonomy(r: &SurfaceGroupRep, w: &LoopWord) -> Result<CMatrix> {
    let n = r.n();
    let mut out = CMatrix::identity(n, n);
    for &(g, e) in &w.letters {
        let m = r
            .generators
            .get(g - 1)
            .ok_or_else(|| Error::Argument(format!("generator index {g} exceeds {}", r.generators.len())))?;
        out = if e > 0 { out * m } else { out * m.adjoint() };
    }
    Ok(out)
}

/// Holonomy as a [`Holonomy`] ready for the spectral module.
pub fn circle_holonomy(r: &SurfaceGroupRep, w: &LoopWord) -> Result<Holonomy> {
    Holonomy::special_unitary(holonomy(r, w)?, r.tolerance.max(Holonomy::DEFAULT_TOLERANCE))
}

/// `SU(2)` path `t ↦ r(t)` with `A₁(t) = diag(e^{2πit}, e^{−2πit})`,
/// `B₁ = diag(i, −i)`, mirrored so that `z = 1`; the eigenphases of `a₁` move
/// in opposite directions.
pub fn balanced_path(steps: usize, t0: f64, t1: f64) -> Result<Vec<SurfaceGroupRep>> {
    if steps == 0 {
        return Err(Error::Argument("path needs at least one step".into()));
    }
    let mut b1 = CMatrix::zeros(2, 2);
    b1[(0, 0)] = I;
    b1[(1, 1)] = -I;
    (0..=steps)
        .map(|k| {
            let t = t0 + (t1 - t0) * k as f64 / steps as f64;
            let mut a1 = CMatrix::zeros(2, 2);
            a1[(0, 0)] = (I * TAU * t).exp();
            a1[(1, 1)] = (-I * TAU * t).exp();
            SurfaceGroupRep::mirrored(a1, b1.clone(), DEFAULT_REP_TOLERANCE)
        })
        .collect()
}

/// Model families over the parameter torus `T³` of points in `Hom_1(π₁Σ′, SU(2))`.
///
/// At `x ∈ T³` the point is `mirrored(exp L(x), B)` with a fixed `B`. For a
/// loop `γ` let `L_γ(x) = log holonomy(r(x), γ)`; the connection over
/// `S¹ × T³` uses `A_θ = L_γ` and a base part chosen by the variant. Values are
/// model-dependent; only their scaling and convergence are meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairingFamily {
    /// `L ≡ 0`.
    Constant,
    /// `A_θ = 0`, `A_a = ∂_a L_γ`: no `dθ` leg at all.
    Static { epsilon: f64 },
    /// `A_θ = L_γ`, `A_a = sin(2πθ) ∂_a L_γ`, with integer windings of `L` in each parameter.
    Loop { epsilon: f64, windings: [i64; 3] },
}

/// Eigenphases of `holonomy(r(x), γ)` must stay this far from `π`.
pub const BRANCH_MARGIN: f64 = 1e-3;

impl PairingFamily {
    pub fn name(&self) -> &'static str {
        match self {
            PairingFamily::Constant => "constant",
            PairingFamily::Static { .. } => "static",
            PairingFamily::Loop { .. } => "loop",
        }
    }

    pub fn names() -> &'static [&'static str] {
        &["constant", "static", "loop"]
    }

    /// Family by name; `epsilon` is ignored by `constant`, windings only used by `loop`.
    pub fn from_name(name: &str, epsilon: f64, windings: [i64; 3]) -> Result<Self> {
        Ok(match name {
            "constant" => PairingFamily::Constant,
            "static" => PairingFamily::Static { epsilon },
            "loop" => PairingFamily::Loop { epsilon, windings },
            other => {
                return Err(Error::Argument(format!(
                    "unknown pairing family '{other}'; expected one of {}",
                    Self::names().join(", ")
                )))
            }
        })
    }

    fn epsilon(&self) -> f64 {
        match *self {
            PairingFamily::Constant => 0.0,
            PairingFamily::Static { epsilon } | PairingFamily::Loop { epsilon, .. } => epsilon,
        }
    }

    fn windings(&self) -> [i64; 3] {
        match *self {
            PairingFamily::Loop { windings, .. } => windings,
            _ => [1, 1, 1],
        }
    }

    /// `L(x) = ε(sin 2πw₁x₁ T₁ + cos 2πw₂x₂ T₂ + sin 2π(w₃x₃ + x₁) T₃)`.
    fn log_a1(&self, x: [f64; 3]) -> CMatrix {
        let t = pauli().map(|s| s * I);
        let w = self.windings().map(|k| k as f64);
        let (a1, a2, a3) = (TAU * w[0] * x[0], TAU * w[1] * x[1], TAU * (w[2] * x[2] + x[0]));
        (t[0].scale(a1.sin()) + t[1].scale(a2.cos()) + t[2].scale(a3.sin())).scale(self.epsilon())
    }

    /// The representation at parameter `x`.
    pub fn point(&self, x: [f64; 3]) -> Result<SurfaceGroupRep> {
        let b = expm(&(pauli()[2].clone() * I).scale(0.5));
        SurfaceGroupRep::mirrored(expm(&self.log_a1(x)), b, DEFAULT_REP_TOLERANCE)
    }

    /// Induced connection over `S¹ × T³` along the loop `gamma`.
    pub fn connection(&self, gamma: &LoopWord, grid: Grid) -> Result<LatticeConnection> {
        if grid.dim() != 3 {
            return Err(Error::Dimension(format!(
                "pairing families live over T³, got d = {}",
                grid.dim()
            )));
        }
        let (p, b) = (grid.theta_points(), grid.base_len());
        let mut logs = Vec::with_capacity(b);
        for xi in 0..b {
            let r = self.point(grid.point(xi))?;
            let res = relation_check(&r);
            if res > r.tolerance() {
                return Err(Error::Validation(format!("family point {xi} violates the relation by {res:e}")));
            }
            let l = log_unitary(&holonomy(&r, gamma)?, BRANCH_MARGIN)
                .map_err(|e| Error::Validation(format!("family point {xi}: {e}")))?;
            logs.push(l);
        }
        let lift = |f: &dyn Fn(usize, usize) -> CMatrix| {
            let data = (0..p).flat_map(|t| (0..b).map(move |xi| (t, xi))).map(|(t, xi)| f(t, xi)).collect();
            LoopField::from_samples(grid, 2, data)
        };
        let l = lift(&|_, xi| logs[xi].clone())?;
        let loop_part = matches!(self, PairingFamily::Loop { .. });
        let theta = if loop_part { l.clone() } else { LoopField::zeros(grid, 2) };
        let base = (0..3)
            .map(|a| {
                let grad = l.d_base(a);
                lift(&|t, xi| {
                    let g = grad.at(t, xi);
                    if loop_part {
                        g.scale((TAU * grid.theta(t)).sin())
                    } else {
                        g.clone()
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LatticeConnection::new(theta, base)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pairing {
    /// `∫_{T³} H_{ρ,γ}` by the midpoint rule on the periodic grid.
    pub value: f64,
    /// `max |H_{ρ,γ}|`, the pointwise density scale.
    pub density_max: f64,
    /// `∫_{T³} dB_ρ`, which vanishes identically on a periodic grid.
    pub exact_part: f64,
}

/// `∫_{T³} −(1/8π²) ∫_{S¹} ⟨F, F⟩_ρ` for the family's induced connection pushed through `ρ`.
///
/// Every family here is globally trivialized over `S¹ × T³`, so the integral
/// is a Chern number of a trivial bundle and vanishes in the continuum; the
/// density itself is what scales with the Dynkin index.
pub fn pontryagin_pairing(
    family: &PairingFamily,
    gamma: &LoopWord,
    rho: &Representation,
    grid: Grid,
) -> Result<Pairing> {
    let conn = rho.push_connection(&family.connection(gamma, grid)?)?;
    let h = pontryagin_form(&conn)?;
    let density = h.component(&[1, 2, 3])?;
    let value = density.iter().sum::<f64>() / density.len() as f64;
    let db = b_field(&to_caloron(&conn))?.exterior_derivative()?;
    let exact = db.component(&[1, 2, 3])?;
    Ok(Pairing {
        value,
        density_max: h.max_abs(),
        exact_part: exact.iter().sum::<f64>() / exact.len() as f64,
    })
}

/// Relative gap between the `ρ` density and `ι_ρ` times the fundamental one.
pub fn pairing_scaling_residual(
    family: &PairingFamily,
    gamma: &LoopWord,
    rho: &Representation,
    grid: Grid,
) -> Result<f64> {
    let conn = family.connection(gamma, grid)?;
    let fund = Representation::new(2, RepKind::Fundamental)?;
    let base = pontryagin_form(&fund.push_connection(&conn)?)?;
    let pushed = pontryagin_form(&rho.push_connection(&conn)?)?;
    let iota = {
        let r = rho.dynkin_index()?;
        *r.numer() as f64 / *r.denom() as f64
    };
    let scale = base.max_abs().max(f64::MIN_POSITIVE) * iota.max(1.0);
    Ok(pushed.max_diff(&base.scaled(iota))? / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, random_special_unitary};
    use crate::spectral::{spectral_flow, SpectralCut};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn relation_examples() {
        assert_eq!(relation_check(&SurfaceGroupRep::trivial(2, 3).unwrap()), 0.0);
        let r = SurfaceGroupRep::su2_anticommuting().unwrap();
        assert!(relation_check(&r) <= 1e-12);
        let x = (pauli()[2].clone() * I).scale(1e-3);
        let bumped = r.with_generator(1, &r.generators()[0] * expm(&x)).unwrap();
        let res = relation_check(&bumped);
        assert!(res > 1e-4 && res < 1e-2, "{res}");
    }

    #[test]
    fn irreducibility_examples() {
        let triv = irreducibility_check(&SurfaceGroupRep::trivial(2, 2).unwrap());
        assert_eq!((triv.irreducible, triv.commutant_dim), (false, 4));
        let r = irreducibility_check(&SurfaceGroupRep::su2_anticommuting().unwrap());
        assert_eq!((r.irreducible, r.commutant_dim, r.indeterminate), (true, 1, false));
        let b = irreducibility_check(&SurfaceGroupRep::su4_blocks().unwrap());
        assert!(!b.irreducible && b.commutant_dim >= 2);
    }

    #[test]
    fn conjugation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = SurfaceGroupRep::su2_anticommuting().unwrap();
        assert_eq!(conjugate(&r, &CMatrix::identity(2, 2)).unwrap(), r);
        let minus = CMatrix::identity(2, 2) * c(-1.0);
        assert_eq!(conjugate(&r, &minus).unwrap(), r);
        let h = random_special_unitary(2, &mut rng);
        let s = conjugate(&r, &h).unwrap();
        assert!((relation_check(&s) - relation_check(&r)).abs() <= 1e-12);
        assert_eq!(irreducibility_check(&s).commutant_dim, 1);
        let bad = CMatrix::identity(2, 2) * c(1.5);
        assert!(matches!(conjugate(&r, &bad), Err(Error::Validation(_))));
    }

    #[test]
    fn holonomy_examples() {
        let r = SurfaceGroupRep::su2_anticommuting().unwrap();
        let a = LoopWord::new(vec![(1, 1)]).unwrap();
        let back = LoopWord::new(vec![(1, 1), (1, -1)]).unwrap();
        assert_eq!(holonomy(&r, &a).unwrap(), r.generators()[0]);
        assert!(max_abs(&(holonomy(&r, &back).unwrap() - CMatrix::identity(2, 2))) < 1e-15);
        let rel = holonomy(&r, &LoopWord::surface_relation(2)).unwrap();
        assert!(max_abs(&(rel - r.z().matrix())) <= 1e-12);
        let b = LoopWord::new(vec![(2, -1), (3, 1)]).unwrap();
        assert_eq!(
            holonomy(&r, &a.concat(&b)).unwrap(),
            holonomy(&r, &a).unwrap() * holonomy(&r, &b).unwrap()
        );
        assert!(matches!(holonomy(&r, &LoopWord::new(vec![(5, 1)]).unwrap()), Err(Error::Argument(_))));
        assert!(LoopWord::new(vec![]).is_err());
    }

    #[test]
    fn balanced_flow_is_integral_and_additive() {
        let a1 = LoopWord::new(vec![(1, 1)]).unwrap();
        let cut = SpectralCut::new(1, 3);
        let loop_from = |t0: f64, t1: f64| -> Vec<Holonomy> {
            balanced_path(24, t0, t1)
                .unwrap()
                .iter()
                .map(|r| circle_holonomy(r, &a1).unwrap())
                .collect()
        };
        let forward = loop_from(0.1, 1.1);
        let backward = loop_from(0.1, -0.9);
        let twice: Vec<_> = forward.iter().chain(&backward[1..]).cloned().collect();
        let f = spectral_flow(&forward, &cut, 4).unwrap();
        let b = spectral_flow(&backward, &cut, 4).unwrap();
        // determinant one pins the net flow of every loop to zero
        assert_eq!((f, b), (0, 0));
        assert_eq!(spectral_flow(&twice, &cut, 4).unwrap(), f + b);
        let constant = vec![forward[0].clone(); 5];
        assert_eq!(spectral_flow(&constant, &cut, 4).unwrap(), 0);
    }

    #[test]
    fn pairing_trivial_families() {
        let grid = Grid::new(8, 6, 3).unwrap();
        let fund = Representation::new(2, RepKind::Fundamental).unwrap();
        let a1 = LoopWord::new(vec![(1, 1)]).unwrap();
        let c = pontryagin_pairing(&PairingFamily::Constant, &a1, &fund, grid).unwrap();
        assert_eq!((c.value, c.density_max), (0.0, 0.0));
        let s = pontryagin_pairing(&PairingFamily::Static { epsilon: 0.4 }, &a1, &fund, grid).unwrap();
        assert!(s.density_max < 1e-14, "{s:?}");
    }

    #[test]
    fn pairing_loop_family_scales_and_vanishes_in_total() {
        let grid = Grid::new(16, 8, 3).unwrap();
        let fam = PairingFamily::Loop {
            epsilon: 0.5,
            windings: [1, 1, 1],
        };
        let fund = Representation::new(2, RepKind::Fundamental).unwrap();
        let adj = Representation::new(2, RepKind::Adjoint).unwrap();
        let gamma = LoopWord::new(vec![(1, 1), (2, 1)]).unwrap();
        let p = pontryagin_pairing(&fam, &gamma, &fund, grid).unwrap();
        assert!(p.density_max > 1e-3);
        assert!(p.value.abs() < 1e-3 * p.density_max, "{p:?}");
        assert!(p.exact_part.abs() < 1e-12);
        assert!(pairing_scaling_residual(&fam, &gamma, &adj, grid).unwrap() <= 1e-6);
    }
}
