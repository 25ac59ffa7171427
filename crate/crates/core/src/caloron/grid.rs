use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Periodic sampling of `S¹ × T^d` with `θ, x_a ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    theta_points: usize,
    base_points: usize,
    dim: usize,
}

/// Smallest base resolution the 5-point stencil tolerates.
pub const MIN_BASE_POINTS: usize = 5;
pub const MIN_THETA_POINTS: usize = 8;

impl Grid {
    pub fn new(theta_points: usize, base_points: usize, dim: usize) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::Dimension(format!("base dimension {dim} not in {{2, 3}}")));
        }
        if theta_points < MIN_THETA_POINTS {
            return Err(Error::Argument(format!(
                "theta_points = {theta_points} below the minimum {MIN_THETA_POINTS}"
            )));
        }
        if base_points < MIN_BASE_POINTS {
            return Err(Error::Argument(format!(
                "base_points = {base_points} below the minimum {MIN_BASE_POINTS}"
            )));
        }
        Ok(Self {
            theta_points,
            base_points,
            dim,
        })
    }

    pub fn theta_points(&self) -> usize {
        self.theta_points
    }

    pub fn base_points(&self) -> usize {
        self.base_points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base_len(&self) -> usize {
        self.base_points.pow(self.dim as u32)
    }

    pub fn len(&self) -> usize {
        self.theta_points * self.base_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn theta(&self, t: usize) -> f64 {
        t as f64 / self.theta_points as f64
    }

    /// Base spacing `h = 1/M`.
    pub fn spacing(&self) -> f64 {
        1.0 / self.base_points as f64
    }

    /// Per-axis indices of base point `xi`; unused axes are zero.
    pub fn coords(&self, xi: usize) -> [usize; 3] {
        let m = self.base_points;
        let mut c = [0; 3];
        let mut r = xi;
        for slot in c.iter_mut().take(self.dim) {
            *slot = r % m;
            r /= m;
        }
        c
    }

    pub fn point(&self, xi: usize) -> [f64; 3] {
        let c = self.coords(xi);
        let h = self.spacing();
        [c[0] as f64 * h, c[1] as f64 * h, c[2] as f64 * h]
    }

    /// Base point displaced by `delta` steps along 0-based `axis`, periodically.
    pub fn shift(&self, xi: usize, axis: usize, delta: isize) -> usize {
        let m = self.base_points as isize;
        let stride = self.base_points.pow(axis as u32);
        let c = (xi / stride) % self.base_points;
        let moved = ((c as isize + delta).rem_euclid(m)) as usize;
        xi - c * stride + moved * stride
    }

    /// Same axes and θ sampling at base resolution `m`.
    pub fn with_base_points(&self, m: usize) -> Result<Self> {
        Self::new(self.theta_points, m, self.dim)
    }

    pub fn with_theta_points(&self, p: usize) -> Result<Self> {
        Self::new(p, self.base_points, self.dim)
    }
}

/// Fourier differentiation matrix on `P` equispaced points of a unit period.
pub fn spectral_derivative_matrix(p: usize) -> Vec<f64> {
    let mut d = vec![0.0; p * p];
    for j in 0..p {
        for k in 0..p {
            if j == k {
                continue;
            }
            let diff = j as isize - k as isize;
            let sign = if diff.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let arg = PI * diff as f64 / p as f64;
            d[j * p + k] = if p % 2 == 0 {
                PI * sign / arg.tan()
            } else {
                PI * sign / arg.sin()
            };
        }
    }
    d
}

/// Fourth-order central difference weights at offsets `±1, ±2`.
const FD4: [(isize, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];

/// Real fourth-order derivative of a base scalar along 0-based `axis`.
pub fn fd4_scalar(grid: &Grid, values: &[f64], axis: usize) -> Vec<f64> {
    let scale = 1.0 / (12.0 * grid.spacing());
    (0..grid.base_len())
        .map(|xi| {
            FD4.iter()
                .map(|(off, w)| w * values[grid.shift(xi, axis, *off)])
                .sum::<f64>()
                * scale
        })
        .collect()
}

/// Matrix-valued samples over `S¹ × T^d`, indexed `t · M^d + xi`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopField {
    grid: Grid,
    size: usize,
    data: Vec<CMatrix>,
}

impl LoopField {
    pub fn zeros(grid: Grid, size: usize) -> Self {
        Self {
            grid,
            size,
            data: vec![CMatrix::zeros(size, size); grid.len()],
        }
    }

    /// Samples `f(θ, x)` on every grid point.
    pub fn from_fn(grid: Grid, size: usize, f: impl Fn(f64, [f64; 3]) -> CMatrix) -> Result<Self> {
        let mut data = Vec::with_capacity(grid.len());
        for t in 0..grid.theta_points() {
            let th = grid.theta(t);
            for xi in 0..grid.base_len() {
                let m = f(th, grid.point(xi));
                if m.nrows() != size || m.ncols() != size {
                    return Err(Error::Dimension(format!(
                        "sample is {}x{}, expected {size}x{size}",
                        m.nrows(),
                        m.ncols()
                    )));
                }
                data.push(m);
            }
        }
        Ok(Self { grid, size, data })
    }

    pub fn from_samples(grid: Grid, size: usize, data: Vec<CMatrix>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "{} samples for a grid of {} points",
                data.len(),
                grid.len()
            )));
        }
        if data.iter().any(|m| m.nrows() != size || m.ncols() != size) {
            return Err(Error::Dimension(format!("samples must be {size}x{size}")));
        }
        Ok(Self { grid, size, data })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn samples(&self) -> &[CMatrix] {
        &self.data
    }

    pub fn at(&self, t: usize, xi: usize) -> &CMatrix {
        &self.data[t * self.grid.base_len() + xi]
    }

    pub fn map(&self, size: usize, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Self {
            grid: self.grid,
            size,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn zip(&self, other: &LoopField, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        Self {
            grid: self.grid,
            size: self.size,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|m| m.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &LoopField) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| crate::linalg::max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }

    /// Spectral `∂_θ`.
    pub fn d_theta(&self) -> Self {
        let p = self.grid.theta_points();
        let b = self.grid.base_len();
        let d = spectral_derivative_matrix(p);
        let mut out = LoopField::zeros(self.grid, self.size);
        for t in 0..p {
            for xi in 0..b {
                let mut acc = CMatrix::zeros(self.size, self.size);
                for k in 0..p {
                    let w = d[t * p + k];
                    if w != 0.0 {
                        acc += self.data[k * b + xi].scale(w);
                    }
                }
                out.data[t * b + xi] = acc;
            }
        }
        out
    }

    /// Fourth-order central-difference `∂_θ`.
    pub fn d_theta_fd4(&self) -> Self {
        let p = self.grid.theta_points() as isize;
        let b = self.grid.base_len();
        let scale = self.grid.theta_points() as f64 / 12.0;
        let mut out = LoopField::zeros(self.grid, self.size);
        for t in 0..p {
            for xi in 0..b {
                let mut acc = CMatrix::zeros(self.size, self.size);
                for (off, w) in FD4 {
                    let k = (t + off).rem_euclid(p) as usize;
                    acc += self.data[k * b + xi].scale(w * scale);
                }
                out.data[t as usize * b + xi] = acc;
            }
        }
        out
    }

    /// Fourth-order central-difference `∂_{x_axis}` for 0-based `axis`.
    pub fn d_base(&self, axis: usize) -> Self {
        let b = self.grid.base_len();
        let scale = 1.0 / (12.0 * self.grid.spacing());
        let mut out = LoopField::zeros(self.grid, self.size);
        for t in 0..self.grid.theta_points() {
            for xi in 0..b {
                let mut acc = CMatrix::zeros(self.size, self.size);
                for (off, w) in FD4 {
                    acc += self.data[t * b + self.grid.shift(xi, axis, off)].scale(w * scale);
                }
                out.data[t * b + xi] = acc;
            }
        }
        out
    }

    /// `∂_axis`, with axis 0 the circle (spectral) and `1..=d` the base.
    pub fn derivative(&self, axis: usize) -> Self {
        if axis == 0 {
            self.d_theta()
        } else {
            self.d_base(axis - 1)
        }
    }
}

/// `−tr(XY)`, the invariant form in whatever representation `X, Y` are given.
pub fn inner(x: &CMatrix, y: &CMatrix) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..x.nrows() {
        for k in 0..x.ncols() {
            acc += x[(i, k)] * y[(k, i)];
        }
    }
    -acc
}

pub fn bracket(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x * y - y * x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn spectral_derivative_is_exact_on_low_modes() {
        for p in [8usize, 9, 16] {
            let d = spectral_derivative_matrix(p);
            let f: Vec<f64> = (0..p).map(|k| (2.0 * PI * k as f64 / p as f64).sin()).collect();
            for j in 0..p {
                let df: f64 = (0..p).map(|k| d[j * p + k] * f[k]).sum();
                let exact = 2.0 * PI * (2.0 * PI * j as f64 / p as f64).cos();
                assert!((df - exact).abs() < 1e-12, "p = {p}");
            }
        }
    }

    #[test]
    fn shifts_wrap() {
        let g = Grid::new(8, 5, 3).unwrap();
        let xi = 4 + 5 * 2;
        assert_eq!(g.coords(g.shift(xi, 0, 1)), [0, 2, 0]);
        assert_eq!(g.coords(g.shift(xi, 2, -1)), [4, 2, 4]);
        assert_eq!(g.coords(g.shift(xi, 1, 2)), [4, 4, 0]);
    }

    #[test]
    fn fd4_converges_at_fourth_order() {
        let err = |m: usize| {
            let g = Grid::new(8, m, 2).unwrap();
            let f = LoopField::from_fn(g, 1, |_, x| CMatrix::from_element(1, 1, c((2.0 * PI * x[1]).sin())))
                .unwrap();
            let df = f.d_base(1);
            (0..g.base_len())
                .map(|xi| {
                    let exact = 2.0 * PI * (2.0 * PI * g.point(xi)[1]).cos();
                    (df.at(0, xi)[(0, 0)].re - exact).abs()
                })
                .fold(0.0, f64::max)
        };
        let order = (err(16) / err(32)).log2();
        assert!(order > 3.8, "{order}");
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(Grid::new(8, 8, 4), Err(Error::Dimension(_))));
        assert!(matches!(Grid::new(4, 8, 3), Err(Error::Argument(_))));
        assert!(matches!(Grid::new(8, 3, 3), Err(Error::Argument(_))));
    }
}
