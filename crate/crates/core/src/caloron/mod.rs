//! Sampled connections on `S¹ × T^d` and their caloron transforms.
//!
//! All bundles are globally trivialized, so a connection `Ã = A_θ dθ + A_a dx^a`
//! on `S¹ × X` and a loop-group pair `(A, Φ)` on `X` carry the same samples:
//! `Φ(x)(θ) = A_θ(θ, x)` and `A(x)(θ) = A_a(θ, x)`. The circle has unit
//! period; `θ`-derivatives are spectral and base derivatives fourth-order
//! central differences on periodic grids.

mod forms;
mod grid;
mod presets;
mod rep;

pub use forms::{
    b_field, index_curvature, ms_identity_check, pontryagin_form, rho_scaling_check, GridForm,
    MsIdentity, B_FIELD_SCALE, REALITY_TOLERANCE,
};
pub use grid::{fd4_scalar, inner, spectral_derivative_matrix, Grid, LoopField};
pub use presets::ConnectionPreset;
pub use rep::{dynkin_index, hook_content_dimension, RepKind, Representation, MAX_REP_DIM};

use crate::error::{Error, Result};
use crate::linalg::{c, max_abs, unitarity_residual, CMatrix, I};
use grid::bracket;

/// Tolerance for unitarity of sampled gauge transformations.
pub const GAUGE_UNITARITY_TOL: f64 = 1e-10;

/// `su(n)` with the form `⟨X, Y⟩ = −tr(XY)` and an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraSpec {
    n: usize,
    basis: Vec<CMatrix>,
}

impl LieAlgebraSpec {
    pub fn su(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Argument(format!("su(n) needs n >= 2, got {n}")));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut basis = Vec::with_capacity(n * n - 1);
        for p in 0..n {
            for q in p + 1..n {
                let mut a = CMatrix::zeros(n, n);
                a[(p, q)] = c(s);
                a[(q, p)] = c(-s);
                basis.push(a);
                let mut b = CMatrix::zeros(n, n);
                b[(p, q)] = I * s;
                b[(q, p)] = I * s;
                basis.push(b);
            }
        }
        for k in 1..n {
            let norm = ((k * (k + 1)) as f64).sqrt();
            let mut d = CMatrix::zeros(n, n);
            for j in 0..k {
                d[(j, j)] = I / norm;
            }
            d[(k, k)] = I * (-(k as f64) / norm);
            basis.push(d);
        }
        let spec = Self { n, basis };
        let r = spec.orthonormality_residual();
        if r > 1e-12 {
            return Err(Error::Consistency(format!("su({n}) basis orthonormality residual {r:e}")));
        }
        let root = (spec.inner(&spec.coroot(0, 1), &spec.coroot(0, 1)) - 2.0).abs();
        if root > 1e-12 {
            return Err(Error::Consistency(format!("long root length off by {root:e}")));
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn inner(&self, x: &CMatrix, y: &CMatrix) -> f64 {
        inner(x, y).re
    }

    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, x) in self.basis.iter().enumerate() {
            for (b, y) in self.basis.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((inner(x, y) - c(target)).norm());
            }
        }
        worst
    }

    /// `i·(E_pp − E_qq)`, the coroot of the root `e_p − e_q`.
    pub fn coroot(&self, p: usize, q: usize) -> CMatrix {
        let mut h = CMatrix::zeros(self.n, self.n);
        h[(p, p)] = I;
        h[(q, q)] = -I;
        h
    }

    /// Coordinates of `x` in the orthonormal basis.
    pub fn coordinates(&self, x: &CMatrix) -> Vec<f64> {
        self.basis.iter().map(|b| self.inner(b, x)).collect()
    }

    pub fn combine(&self, coeffs: &[f64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.n, self.n);
        for (b, w) in self.basis.iter().zip(coeffs) {
            out += b.scale(*w);
        }
        out
    }
}

fn check_field(name: &str, f: &LoopField, grid: &Grid, size: usize) -> Result<()> {
    if f.grid() != grid {
        return Err(Error::Validation(format!("{name} is sampled on a different grid")));
    }
    if f.size() != size {
        return Err(Error::Dimension(format!(
            "{name} has {}x{} samples, expected {size}x{size}",
            f.size(),
            f.size()
        )));
    }
    Ok(())
}

/// Connection `Ã = A_θ dθ + Σ_a A_a dx^a` sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConnection {
    grid: Grid,
    a_theta: LoopField,
    a_base: Vec<LoopField>,
    source: Option<ConnectionPreset>,
}

impl LatticeConnection {
    pub fn new(a_theta: LoopField, a_base: Vec<LoopField>) -> Result<Self> {
        let grid = *a_theta.grid();
        let size = a_theta.size();
        if a_base.len() != grid.dim() {
            return Err(Error::Dimension(format!(
                "{} base components for a {}-dimensional base",
                a_base.len(),
                grid.dim()
            )));
        }
        for (a, f) in a_base.iter().enumerate() {
            check_field(&format!("A_{}", a + 1), f, &grid, size)?;
        }
        Ok(Self {
            grid,
            a_theta,
            a_base,
            source: None,
        })
    }

    pub(crate) fn with_source(mut self, preset: ConnectionPreset) -> Self {
        self.source = Some(preset);
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.a_theta.size()
    }

    pub fn a_theta(&self) -> &LoopField {
        &self.a_theta
    }

    pub fn a_base(&self) -> &[LoopField] {
        &self.a_base
    }

    /// The analytic family this connection was sampled from, if any.
    pub fn source(&self) -> Option<&ConnectionPreset> {
        self.source.as_ref()
    }

    /// Component along axis `0 = θ`, `1..=d` base.
    pub fn component(&self, axis: usize) -> &LoopField {
        if axis == 0 {
            &self.a_theta
        } else {
            &self.a_base[axis - 1]
        }
    }

    /// Largest deviation of any sample from anti-Hermitian.
    pub fn anti_hermitian_residual(&self) -> f64 {
        std::iter::once(&self.a_theta)
            .chain(&self.a_base)
            .flat_map(|f| f.samples())
            .map(|m| max_abs(&(m + m.adjoint())))
            .fold(0.0, f64::max)
    }
}

/// Loop-algebra connection `A` and Higgs field `Φ` over the base.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopHiggsPair {
    grid: Grid,
    a: Vec<LoopField>,
    phi: LoopField,
}

impl LoopHiggsPair {
    pub fn new(a: Vec<LoopField>, phi: LoopField) -> Result<Self> {
        let grid = *phi.grid();
        if a.len() != grid.dim() {
            return Err(Error::Dimension(format!(
                "{} connection components for a {}-dimensional base",
                a.len(),
                grid.dim()
            )));
        }
        for (k, f) in a.iter().enumerate() {
            check_field(&format!("A_{}", k + 1), f, &grid, phi.size())?;
        }
        Ok(Self { grid, a, phi })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.phi.size()
    }

    pub fn a(&self) -> &[LoopField] {
        &self.a
    }

    pub fn phi(&self) -> &LoopField {
        &self.phi
    }
}

pub fn to_caloron(c: &LatticeConnection) -> LoopHiggsPair {
    LoopHiggsPair {
        grid: c.grid,
        a: c.a_base.clone(),
        phi: c.a_theta.clone(),
    }
}

pub fn from_caloron(p: &LoopHiggsPair) -> LatticeConnection {
    LatticeConnection {
        grid: p.grid,
        a_theta: p.phi.clone(),
        a_base: p.a.clone(),
        source: None,
    }
}

/// Components `F_{ab}` of `F = dÃ + Ã∧Ã`, axes `0 = θ`, `1..=d` base, `a < b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curvature {
    dim: usize,
    comps: Vec<((usize, usize), LoopField)>,
}

impl Curvature {
    pub fn component(&self, a: usize, b: usize) -> Result<&LoopField> {
        self.comps
            .iter()
            .find(|(k, _)| *k == (a, b))
            .map(|(_, f)| f)
            .ok_or_else(|| {
                Error::Argument(format!("no curvature component ({a},{b}) for d = {}", self.dim))
            })
    }

    pub fn components(&self) -> &[((usize, usize), LoopField)] {
        &self.comps
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(|(_, f)| f.max_abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn field_strength(
    a: &LoopField,
    b: &LoopField,
    da_b: &LoopField,
    db_a: &LoopField,
) -> LoopField {
    let mut out = da_b.zip(db_a, |x, y| x - y);
    let comm = a.zip(b, bracket);
    out = out.zip(&comm, |x, y| x + y);
    out
}

pub fn curvature(c: &LatticeConnection) -> Curvature {
    let d = c.grid.dim();
    let comps = (0..=d)
        .flat_map(|a| (a + 1..=d).map(move |b| (a, b)))
        .map(|(a, b)| {
            let (fa, fb) = (c.component(a), c.component(b));
            ((a, b), field_strength(fa, fb, &fb.derivative(a), &fa.derivative(b)))
        })
        .collect();
    Curvature { dim: d, comps }
}

/// `γ(θ) = exp(2π w θ · i diag(1, −1, 0, …))`, a loop in `SU(n)` of winding `w`.
pub fn winding_gauge(n: usize, theta_points: usize, w: i64) -> Vec<CMatrix> {
    (0..theta_points)
        .map(|t| {
            let phase = 2.0 * std::f64::consts::PI * w as f64 * t as f64 / theta_points as f64;
            let mut g = CMatrix::identity(n, n);
            g[(0, 0)] = (I * phase).exp();
            g[(1, 1)] = (-I * phase).exp();
            g
        })
        .collect()
}

fn validate_gauge(grid: &Grid, size: usize, gamma: &[CMatrix]) -> Result<()> {
    if gamma.len() != grid.theta_points() {
        return Err(Error::Argument(format!(
            "{} gauge samples for {} circle points",
            gamma.len(),
            grid.theta_points()
        )));
    }
    for (t, g) in gamma.iter().enumerate() {
        if g.nrows() != size || g.ncols() != size {
            return Err(Error::Dimension(format!("gauge sample {t} has the wrong size")));
        }
        let r = unitarity_residual(g);
        if r > GAUGE_UNITARITY_TOL {
            return Err(Error::Validation(format!(
                "gauge sample {t} violates unitarity by {r:.3e}"
            )));
        }
    }
    Ok(())
}

/// Spreads circle samples `γ(θ)` constantly over the base.
fn lift_loop(grid: &Grid, gamma: &[CMatrix]) -> Result<LoopField> {
    let data = gamma
        .iter()
        .flat_map(|g| std::iter::repeat(g.clone()).take(grid.base_len()))
        .collect();
    LoopField::from_samples(*grid, gamma[0].nrows(), data)
}

/// `Ã ↦ γ⁻¹Ãγ + γ⁻¹dγ` for a base-constant loop `γ(θ)`, with a fourth-order
/// difference for `∂_θγ`.
pub fn gauge_transform(c: &LatticeConnection, gamma: &[CMatrix]) -> Result<LatticeConnection> {
    validate_gauge(&c.grid, c.size(), gamma)?;
    let g = lift_loop(&c.grid, gamma)?;
    let dg = g.d_theta_fd4();
    let p = c.grid.theta_points();
    let b = c.grid.base_len();
    let conj = |f: &LoopField, shift: Option<&LoopField>| {
        let data = (0..p * b)
            .map(|k| {
                let (t, xi) = (k / b, k % b);
                let gi = gamma[t].adjoint();
                let mut out = &gi * f.at(t, xi) * &gamma[t];
                if let Some(d) = shift {
                    out += &gi * d.at(t, xi);
                }
                out
            })
            .collect();
        LoopField::from_samples(c.grid, c.size(), data)
    };
    let theta = conj(&c.a_theta, Some(&dg))?;
    let base = c.a_base.iter().map(|f| conj(f, None)).collect::<Result<_>>()?;
    LatticeConnection::new(theta, base)
}

/// Gauge law `Φ(pγ) = ad(γ⁻¹)Φ(p) + γ⁻¹∂_θγ`, computed two ways.
///
/// Route (a) gauge-transforms `Ã` (fourth-order `∂_θγ`) and reads off the
/// new Higgs field; route (b) evaluates the right-hand side with the
/// spectral derivative. Returns the max-norm gap.
pub fn higgs_gauge_law_check(p: &LoopHiggsPair, gamma: &[CMatrix]) -> Result<f64> {
    validate_gauge(&p.grid, p.size(), gamma)?;
    let route_a = to_caloron(&gauge_transform(&from_caloron(p), gamma)?);
    let g = lift_loop(&p.grid, gamma)?;
    let dg = g.d_theta();
    let b = p.grid.base_len();
    let mut worst = 0.0f64;
    for t in 0..p.grid.theta_points() {
        let gi = gamma[t].adjoint();
        for xi in 0..b {
            let route_b = &gi * p.phi.at(t, xi) * &gamma[t] + &gi * dg.at(t, xi);
            worst = worst.max(max_abs(&(route_a.phi().at(t, xi) - route_b)));
        }
    }
    Ok(worst)
}
