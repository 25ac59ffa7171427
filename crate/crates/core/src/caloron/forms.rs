use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::{fd4_scalar, inner, Grid, LoopField};
use super::rep::Representation;
use super::{curvature, field_strength, to_caloron, LatticeConnection, LoopHiggsPair};
use crate::error::{Error, Result};

/// Imaginary parts above this signal a convention error upstream.
pub const REALITY_TOLERANCE: f64 = 1e-10;

/// Real prefactor of the curving: `B = B_FIELD_SCALE ∫ (½⟨A, ∂_θA⟩ − ⟨F_A, Φ⟩) dθ`.
///
/// Fixed so that `dB` equals `−(1/8π²) ∫ ⟨F_Ã, F_Ã⟩` on the nose.
pub const B_FIELD_SCALE: f64 = -1.0 / (4.0 * PI * PI);

/// Real differential form on the base torus, one sample array per
/// increasing axis multi-index (axes numbered from 1).
#[derive(Debug, Clone, PartialEq)]
pub struct GridForm {
    grid: Grid,
    degree: usize,
    indices: Vec<Vec<usize>>,
    values: Vec<Vec<f64>>,
}

fn increasing(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for a in start..=dim {
            cur.push(a);
            rec(a + 1, dim, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, dim, degree, &mut Vec::new(), &mut out);
    out
}

impl GridForm {
    pub fn zeros(grid: Grid, degree: usize) -> Result<Self> {
        if degree > grid.dim() {
            return Err(Error::Dimension(format!(
                "degree {degree} exceeds the base dimension {}",
                grid.dim()
            )));
        }
        let indices = increasing(grid.dim(), degree);
        let values = vec![vec![0.0; grid.base_len()]; indices.len()];
        Ok(Self {
            grid,
            degree,
            indices,
            values,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn indices(&self) -> &[Vec<usize>] {
        &self.indices
    }

    fn slot(&self, index: &[usize]) -> Result<usize> {
        self.indices
            .iter()
            .position(|i| i == index)
            .ok_or_else(|| Error::Argument(format!("{index:?} is not an increasing index of degree {}", self.degree)))
    }

    pub fn component(&self, index: &[usize]) -> Result<&[f64]> {
        Ok(&self.values[self.slot(index)?])
    }

    pub fn component_mut(&mut self, index: &[usize]) -> Result<&mut Vec<f64>> {
        let s = self.slot(index)?;
        Ok(&mut self.values[s])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().flatten().for_each(|v| *v *= s);
        out
    }

    pub fn max_diff(&self, other: &GridForm) -> Result<f64> {
        if self.grid != other.grid || self.degree != other.degree {
            return Err(Error::Dimension("forms differ in grid or degree".into()));
        }
        Ok(self
            .values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// `(dω)_J = Σ_k (−1)^k ∂_{j_k} ω_{J∖j_k}` with fourth-order differences.
    pub fn exterior_derivative(&self) -> Result<GridForm> {
        let mut out = GridForm::zeros(self.grid, self.degree + 1)?;
        for (slot, index) in out.indices.clone().iter().enumerate() {
            for k in 0..index.len() {
                let mut rest = index.clone();
                let axis = rest.remove(k);
                let d = fd4_scalar(&self.grid, self.component(&rest)?, axis - 1);
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                for (o, v) in out.values[slot].iter_mut().zip(d) {
                    *o += sign * v;
                }
            }
        }
        Ok(out)
    }
}

fn real_part(z: Complex64, worst_imag: &mut f64) -> f64 {
    *worst_imag = worst_imag.max(z.im.abs());
    z.re
}

fn reality_check(worst_imag: f64, what: &str) -> Result<()> {
    if worst_imag > REALITY_TOLERANCE {
        return Err(Error::Consistency(format!(
            "{what} has imaginary residue {worst_imag:.3e} > {REALITY_TOLERANCE:e}"
        )));
    }
    Ok(())
}

/// Curving `B = κ ∫_{S¹} (½⟨A, ∂_θA⟩ − ⟨F_A, Φ⟩) dθ` with `κ = B_FIELD_SCALE`.
///
/// `F_A` is the curvature of the loop connection on the base; the pairing
/// with `Φ` keeps the integrand a 2-form. Trapezoid quadrature in `θ`.
pub fn b_field(p: &LoopHiggsPair) -> Result<GridForm> {
    let grid = *p.grid();
    let d = grid.dim();
    let big_p = grid.theta_points();
    let dth: Vec<LoopField> = p.a().iter().map(|a| a.d_theta()).collect();
    let mut out = GridForm::zeros(grid, 2)?;
    let mut worst_imag = 0.0f64;
    for a in 1..=d {
        for b in a + 1..=d {
            let (fa, fb) = (&p.a()[a - 1], &p.a()[b - 1]);
            let f_ab = field_strength(fa, fb, &fb.d_base(a - 1), &fa.d_base(b - 1));
            let comp = out.component_mut(&[a, b])?;
            for (xi, slot) in comp.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..big_p {
                    let cs = inner(fa.at(t, xi), dth[b - 1].at(t, xi))
                        - inner(fb.at(t, xi), dth[a - 1].at(t, xi));
                    acc += cs * 0.5 - inner(f_ab.at(t, xi), p.phi().at(t, xi));
                }
                *slot = real_part(acc * (B_FIELD_SCALE / big_p as f64), &mut worst_imag);
            }
        }
    }
    reality_check(worst_imag, "B-field")?;
    Ok(out)
}

fn require_three(grid: &Grid) -> Result<()> {
    if grid.dim() != 3 {
        return Err(Error::Dimension(format!(
            "3-form comparison needs a 3-dimensional base, got d = {}",
            grid.dim()
        )));
    }
    Ok(())
}

/// `∫_{S¹} (F_{θ1}·F_{23} − F_{θ2}·F_{13} + F_{θ3}·F_{12}) dθ` for a pairing `·`.
fn wedge_density(
    grid: &Grid,
    f: &super::Curvature,
    pair: impl Fn(&crate::linalg::CMatrix, &crate::linalg::CMatrix) -> Complex64,
    scale: f64,
    what: &str,
) -> Result<GridForm> {
    let terms = [((0, 1), (2, 3), 1.0), ((0, 2), (1, 3), -1.0), ((0, 3), (1, 2), 1.0)];
    let comps: Vec<_> = terms
        .iter()
        .map(|&(a, b, s)| Ok((f.component(a.0, a.1)?, f.component(b.0, b.1)?, s)))
        .collect::<Result<_>>()?;
    let mut out = GridForm::zeros(*grid, 3)?;
    let big_p = grid.theta_points();
    let mut worst_imag = 0.0f64;
    let comp = out.component_mut(&[1, 2, 3])?;
    for (xi, slot) in comp.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..big_p {
            for (x, y, s) in &comps {
                acc += pair(x.at(t, xi), y.at(t, xi)) * *s;
            }
        }
        *slot = real_part(acc * (scale / big_p as f64), &mut worst_imag);
    }
    reality_check(worst_imag, what)?;
    Ok(out)
}

/// `−(1/8π²) ∫_{S¹} ⟨F_Ã, F_Ã⟩` on a 3-dimensional base.
pub fn pontryagin_form(c: &LatticeConnection) -> Result<GridForm> {
    require_three(c.grid())?;
    // the 4-form ⟨F∧F⟩ contributes each θ-pairing twice
    wedge_density(c.grid(), &curvature(c), inner, -2.0 / (8.0 * PI * PI), "Pontryagin form")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsIdentity {
    /// `max |−(1/8π²)∫⟨F,F⟩ − dB|` on the given grid.
    pub residual: f64,
    /// Scale of the Pontryagin side, for relative comparisons.
    pub lhs_max: f64,
    /// Residual on the base grid refined to `2M`, when the source family is known.
    pub refined_residual: Option<f64>,
    /// `log₂(residual / refined_residual)`.
    pub order: Option<f64>,
}

fn ms_residual(c: &LatticeConnection) -> Result<(f64, f64)> {
    let lhs = pontryagin_form(c)?;
    let h = b_field(&to_caloron(c))?.exterior_derivative()?;
    Ok((lhs.max_diff(&h)?, lhs.max_abs()))
}

/// Compares both sides of `−(1/8π²)∫⟨F_Ã, F_Ã⟩ = dB` and, for preset
/// connections, the convergence order under base refinement `M → 2M`.
pub fn ms_identity_check(c: &LatticeConnection) -> Result<MsIdentity> {
    require_three(c.grid())?;
    let (residual, lhs_max) = ms_residual(c)?;
    let mut refined_residual = None;
    let mut order = None;
    if let Some(preset) = c.source() {
        let fine = preset.sample(c.grid().with_base_points(2 * c.grid().base_points())?)?;
        let (r2, _) = ms_residual(&fine)?;
        refined_residual = Some(r2);
        if residual > 0.0 && r2 > 0.0 {
            order = Some((residual / r2).log2());
        }
    }
    Ok(MsIdentity {
        residual,
        lhs_max,
        refined_residual,
        order,
    })
}

/// `(1/8π²) ∫_{S¹} tr_V(F^E ∧ F^E)` with `F^E = ρ̇(F_Ã)`.
pub fn index_curvature(c: &LatticeConnection, rho: &Representation) -> Result<GridForm> {
    require_three(c.grid())?;
    let f = curvature(c);
    let pushed = super::Curvature {
        dim: 3,
        comps: f
            .components()
            .iter()
            .map(|(k, v)| Ok((*k, rho.push_field(v)?)))
            .collect::<Result<_>>()?,
    };
    let trace = |x: &crate::linalg::CMatrix, y: &crate::linalg::CMatrix| (x * y).trace();
    wedge_density(c.grid(), &pushed, trace, 2.0 / (8.0 * PI * PI), "index curvature")
}

/// Max residual of `B_ρ − ι_ρ B` and, on 3-dimensional bases, `H_ρ − ι_ρ H`.
pub fn rho_scaling_check(p: &LoopHiggsPair, rho: &Representation) -> Result<f64> {
    let iota = super::rep::rational_f64(rho.dynkin_index()?);
    let b = b_field(p)?;
    let b_rho = b_field(&rho.push_pair(p)?)?;
    let mut worst = b_rho.max_diff(&b.scaled(iota))?;
    if p.grid().dim() == 3 {
        let h = b.exterior_derivative()?;
        let h_rho = b_rho.exterior_derivative()?;
        worst = worst.max(h_rho.max_diff(&h.scaled(iota))?);
    }
    Ok(worst)
}
