use std::f64::consts::TAU;

use super::grid::{Grid, LoopField};
use super::LatticeConnection;
use crate::error::{Error, Result};
use crate::linalg::{expm, pauli, CMatrix, I};

/// Named analytic connection families on `S¹ × T^d`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConnectionPreset {
    Zero { n: usize },
    /// `Ã = a cos(2πx₁) T₃ dθ`.
    ThetaOnly { amplitude: f64 },
    /// `A = a sin(2πx₁) T₃ dx₂`, abelian and θ-independent.
    Abelian { amplitude: f64 },
    /// Pure gauge `g⁻¹dg` with `g = exp(α sin 2π(x₁+θ) T₁) exp(β cos 2π(x₂+x₃) T₂)`.
    Flat { alpha: f64, beta: f64 },
    /// `Ã = a sin(2πθ) cos(2πx₂) T₁ dx₁ + b sin(2π(x₁+x_d)) T₂ dθ`.
    ///
    /// Its Pontryagin density vanishes identically, so it only exercises the
    /// B-field pipeline, not the 3-form identity.
    Su2Simple { a: f64, b: f64 },
    /// `su(2)` family with non-degenerate Pontryagin density, each component
    /// scaled by one amplitude:
    /// `A_θ = α₀(0.7 cos 2πx₁ T₂ + 0.5 sin 2πx₂ T₃ + 0.3 cos 2π(x₃+θ) T₁)`,
    /// `A₁ = α₁(0.9 sin 2πθ cos 2πx₂ T₁ + 0.4 cos 2πx₃ T₃)`,
    /// `A₂ = α₂(0.6 cos 2π(θ+x₃) T₂ + 0.3 sin 2πx₁ T₁)`,
    /// `A₃ = α₃(0.8 sin 2π(x₁+θ) T₃ + 0.2 cos 2π(x₂−θ) T₂)`.
    Su2Family { amplitudes: [f64; 4] },
    /// The same pattern in `su(3)` with `T₁, T₂, T₃ = iλ₁, iλ₄, iλ₆`.
    Su3Family { amplitudes: [f64; 4] },
}

fn su2_generators() -> [CMatrix; 3] {
    pauli().map(|s| s.map(|z| z * I))
}

fn su3_generators() -> [CMatrix; 3] {
    let mut l1 = CMatrix::zeros(3, 3);
    l1[(0, 1)] = I;
    l1[(1, 0)] = I;
    let mut l4 = CMatrix::zeros(3, 3);
    l4[(0, 2)] = I;
    l4[(2, 0)] = I;
    let mut l6 = CMatrix::zeros(3, 3);
    l6[(1, 2)] = I;
    l6[(2, 1)] = I;
    [l1, l4, l6]
}

fn family(grid: Grid, t: &[CMatrix; 3], al: [f64; 4]) -> Result<(LoopField, Vec<LoopField>)> {
    let n = t[0].nrows();
    let wave = |f: fn(f64) -> f64, arg: f64| f(TAU * arg);
    let theta = LoopField::from_fn(grid, n, |th, x| {
        (t[1].scale(0.7 * wave(f64::cos, x[0]))
            + t[2].scale(0.5 * wave(f64::sin, x[1]))
            + t[0].scale(0.3 * wave(f64::cos, x[2] + th)))
        .scale(al[0])
    })?;
    let mut base = vec![
        LoopField::from_fn(grid, n, |th, x| {
            (t[0].scale(0.9 * wave(f64::sin, th) * wave(f64::cos, x[1]))
                + t[2].scale(0.4 * wave(f64::cos, x[2])))
            .scale(al[1])
        })?,
        LoopField::from_fn(grid, n, |th, x| {
            (t[1].scale(0.6 * wave(f64::cos, th + x[2])) + t[0].scale(0.3 * wave(f64::sin, x[0])))
                .scale(al[2])
        })?,
    ];
    if grid.dim() == 3 {
        base.push(LoopField::from_fn(grid, n, |th, x| {
            (t[2].scale(0.8 * wave(f64::sin, x[0] + th)) + t[1].scale(0.2 * wave(f64::cos, x[1] - th)))
                .scale(al[3])
        })?);
    }
    Ok((theta, base))
}

impl ConnectionPreset {
    pub fn su2_family() -> Self {
        ConnectionPreset::Su2Family {
            amplitudes: [1.0, 1.0, 1.0, 1.0],
        }
    }

    pub fn su3_family() -> Self {
        ConnectionPreset::Su3Family {
            amplitudes: [1.0, 1.0, 1.0, 1.0],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConnectionPreset::Zero { .. } => "zero",
            ConnectionPreset::ThetaOnly { .. } => "theta-only",
            ConnectionPreset::Abelian { .. } => "abelian",
            ConnectionPreset::Flat { .. } => "flat",
            ConnectionPreset::Su2Simple { .. } => "su2-simple",
            ConnectionPreset::Su2Family { .. } => "su2-family",
            ConnectionPreset::Su3Family { .. } => "su3-family",
        }
    }

    pub fn names() -> &'static [&'static str] {
        &["zero", "theta-only", "abelian", "flat", "su2-simple", "su2-family", "su3-family"]
    }

    /// Preset by name with its default parameters, the first `amplitudes`
    /// entries overriding them in declaration order.
    pub fn from_name(name: &str, amplitudes: &[f64]) -> Result<Self> {
        let pick = |k: usize, default: f64| amplitudes.get(k).copied().unwrap_or(default);
        let four = |d: [f64; 4]| [pick(0, d[0]), pick(1, d[1]), pick(2, d[2]), pick(3, d[3])];
        Ok(match name {
            "zero" => ConnectionPreset::Zero { n: 2 },
            "theta-only" => ConnectionPreset::ThetaOnly { amplitude: pick(0, 1.0) },
            "abelian" => ConnectionPreset::Abelian { amplitude: pick(0, 1.0) },
            "flat" => ConnectionPreset::Flat {
                alpha: pick(0, 0.7),
                beta: pick(1, 0.5),
            },
            "su2-simple" => ConnectionPreset::Su2Simple {
                a: pick(0, 0.8),
                b: pick(1, 0.6),
            },
            "su2-family" => ConnectionPreset::Su2Family {
                amplitudes: four([1.0, 1.0, 1.0, 1.0]),
            },
            "su3-family" => ConnectionPreset::Su3Family {
                amplitudes: four([1.0, 1.0, 1.0, 1.0]),
            },
            other => {
                return Err(Error::Argument(format!(
                    "unknown connection preset '{other}'; expected one of {}",
                    Self::names().join(", ")
                )))
            }
        })
    }

    /// Rank `n` of the structure group `SU(n)`.
    pub fn rank(&self) -> usize {
        match self {
            ConnectionPreset::Zero { n } => *n,
            ConnectionPreset::Su3Family { .. } => 3,
            _ => 2,
        }
    }

    pub fn sample(&self, grid: Grid) -> Result<LatticeConnection> {
        let n = self.rank();
        let zero = || LoopField::zeros(grid, n);
        let t = su2_generators();
        let d = grid.dim();
        let (theta, base) = match *self {
            ConnectionPreset::Zero { n } => {
                if n < 2 {
                    return Err(Error::Argument(format!("su(n) needs n >= 2, got {n}")));
                }
                (zero(), vec![zero(); d])
            }
            ConnectionPreset::ThetaOnly { amplitude } => (
                LoopField::from_fn(grid, 2, |_, x| t[2].scale(amplitude * (TAU * x[0]).cos()))?,
                vec![zero(); d],
            ),
            ConnectionPreset::Abelian { amplitude } => {
                let mut base = vec![zero(); d];
                base[1] = LoopField::from_fn(grid, 2, |_, x| t[2].scale(amplitude * (TAU * x[0]).sin()))?;
                (zero(), base)
            }
            ConnectionPreset::Flat { alpha, beta } => {
                // A_μ = Ad(exp(−f₂T₂))(∂_μ f₁ T₁) + ∂_μ f₂ T₂
                let pure = |axis: usize| {
                    let t = t.clone();
                    LoopField::from_fn(grid, 2, move |th, x| {
                        let s = x[1] + if d == 3 { x[2] } else { 0.0 };
                        let f2 = beta * (TAU * s).cos();
                        let df1 = match axis {
                            0 | 1 => alpha * TAU * (TAU * (x[0] + th)).cos(),
                            _ => 0.0,
                        };
                        let df2 = match axis {
                            2 | 3 => -beta * TAU * (TAU * s).sin(),
                            _ => 0.0,
                        };
                        let h = expm(&t[1].scale(f2));
                        h.adjoint() * t[0].scale(df1) * h + t[1].scale(df2)
                    })
                };
                let base = (1..=d).map(pure).collect::<Result<Vec<_>>>()?;
                (pure(0)?, base)
            }
            ConnectionPreset::Su2Simple { a, b } => {
                let last = d - 1;
                let theta = LoopField::from_fn(grid, 2, |_, x| t[1].scale(b * (TAU * (x[0] + x[last])).sin()))?;
                let mut base = vec![zero(); d];
                base[0] = LoopField::from_fn(grid, 2, |th, x| {
                    t[0].scale(a * (TAU * th).sin() * (TAU * x[1]).cos())
                })?;
                (theta, base)
            }
            ConnectionPreset::Su2Family { amplitudes } => family(grid, &t, amplitudes)?,
            ConnectionPreset::Su3Family { amplitudes } => family(grid, &su3_generators(), amplitudes)?,
        };
        Ok(LatticeConnection::new(theta, base)?.with_source(self.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_anti_hermitian_and_remember_their_source() {
        let grid = Grid::new(8, 5, 3).unwrap();
        for name in ConnectionPreset::names() {
            let p = ConnectionPreset::from_name(name, &[]).unwrap();
            let conn = p.sample(grid).unwrap();
            assert!(conn.anti_hermitian_residual() < 1e-14, "{name}");
            assert_eq!(conn.source(), Some(&p));
            assert_eq!(p.name(), *name);
        }
        assert!(matches!(ConnectionPreset::from_name("nope", &[]), Err(Error::Argument(_))));
    }
}
