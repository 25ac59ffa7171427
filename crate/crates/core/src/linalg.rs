//! Small dense complex linear algebra shared by the modules.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// `‖U†U − I‖_max`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

pub fn determinant(u: &CMatrix) -> Complex64 {
    u.clone().determinant()
}

/// Checks `u` is square unitary (and special unitary when asked) within `tol`.
pub fn validate_unitary(u: &CMatrix, tol: f64, special: bool) -> Result<()> {
    if u.nrows() != u.ncols() || u.nrows() == 0 {
        return Err(Error::Validation(format!(
            "matrix must be square and non-empty, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let r = unitarity_residual(u);
    if r > tol {
        return Err(Error::Validation(format!(
            "unitarity bound violated: ||U^dag U - I||_max = {r:.3e} > {tol:.3e}"
        )));
    }
    if special {
        let d = (determinant(u) - c(1.0)).norm();
        if d > tol {
            return Err(Error::Validation(format!(
                "special-unitary bound violated: |det U - 1| = {d:.3e} > {tol:.3e}"
            )));
        }
    }
    Ok(())
}

/// Eigenvalues of a unitary matrix as fractional phases `arg/2π ∈ [0, 1)`,
/// sorted ascending. Phases within `1e-12` of each other are snapped to the
/// smaller one so that ties are exact.
pub fn unitary_phases(u: &CMatrix) -> Result<Vec<f64>> {
    let eig = u
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Consistency("complex Schur form did not triangularize".into()))?;
    let mut phases: Vec<f64> = eig
        .iter()
        .map(|z| {
            let mut p = z.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU;
            if p >= 1.0 - 1e-12 {
                p = 0.0;
            }
            p
        })
        .collect();
    phases.sort_by(f64::total_cmp);
    for k in 1..phases.len() {
        if phases[k] - phases[k - 1] < 1e-12 {
            phases[k] = phases[k - 1];
        }
    }
    Ok(phases)
}

/// `exp(X)` for anti-Hermitian `X`, through the Hermitian eigendecomposition of `-iX`.
pub fn exp_anti_hermitian(x: &CMatrix) -> CMatrix {
    let h = x * (-I);
    let h = (&h + h.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    let v = &eig.eigenvectors;
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| (I * l).exp()));
    v * d * v.adjoint()
}

/// Principal logarithm of a unitary matrix, eigenphases in `(−π, π]`.
///
/// Fails when an eigenvalue sits within `margin` of `−1`, where the
/// principal branch is discontinuous.
pub fn log_unitary(u: &CMatrix, margin: f64) -> Result<CMatrix> {
    let (q, t) = u.clone().schur().unpack();
    let mut d = CMatrix::zeros(u.nrows(), u.ncols());
    for k in 0..u.nrows() {
        let phi = t[(k, k)].arg();
        if std::f64::consts::PI - phi.abs() < margin {
            return Err(Error::Validation(format!(
                "eigenphase {phi:.6} is within {margin:e} of the branch cut"
            )));
        }
        d[(k, k)] = I * phi;
    }
    Ok(&q * d * q.adjoint())
}

/// `exp(X)` for a general square matrix by scaling and squaring with a
/// Taylor core; adequate for the small, well-conditioned inputs used here.
pub fn expm(x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    let norm: f64 = x.iter().map(|z| z.norm()).sum();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let xs = x * c(scale);
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..=20 {
        term = &term * &xs * c(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Deterministic generator behind every seeded construction.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Pseudorandom element of `su(n)` with entries of order `scale`.
pub fn random_su_algebra<R: Rng>(n: usize, scale: f64, rng: &mut R) -> CMatrix {
    let mut h = CMatrix::zeros(n, n);
    for r in 0..n {
        for s in r..n {
            if r == s {
                h[(r, r)] = c(rng.random_range(-1.0..1.0));
            } else {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                h[(r, s)] = z;
                h[(s, r)] = z.conj();
            }
        }
    }
    let tr = h.trace() / c(n as f64);
    for r in 0..n {
        h[(r, r)] -= tr;
    }
    h * (I * scale)
}

/// Pseudorandom special-unitary matrix.
pub fn random_special_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    exp_anti_hermitian(&random_su_algebra(n, 3.0, rng))
}

pub fn pauli() -> [CMatrix; 3] {
    let z = c(0.0);
    let o = c(1.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        CMatrix::from_row_slice(2, 2, &[z, -I, I, z]),
        CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// Permutation sign from an explicit inversion count.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}
