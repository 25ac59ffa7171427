//! Determinant lines of the finite-dimensional spans between spectral cuts.
//!
//! A line `det(H_λ⁺ ∩ H_μ⁻)` is stored as an ordered basis of eigenmodes
//! together with a unit phase: the represented section is
//! `phase · (e_1 ∧ … ∧ e_k)`. Reordering the basis multiplies the wedge by the
//! sign of the permutation, so every isomorphism between such lines reduces
//! to permutation parity and phase arithmetic, which is exactly checkable.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::spectral::{band, in_cover, EigenMode, SpectralCut, Spectrum};

const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct DetLine<'s> {
    spectrum: &'s Spectrum,
    basis: Vec<EigenMode>,
    phase: Complex64,
    lo: SpectralCut,
    hi: SpectralCut,
}

impl<'s> DetLine<'s> {
    /// A line with an explicit (not necessarily canonical) basis ordering.
    ///
    /// The basis must coincide as a set with the band between the cuts.
    pub fn with_basis(
        spectrum: &'s Spectrum,
        lo: SpectralCut,
        hi: SpectralCut,
        basis: Vec<EigenMode>,
        phase: Complex64,
    ) -> Result<Self> {
        if (phase.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::Validation(format!(
                "phase must be a unit complex number, |phase| = {}",
                phase.norm()
            )));
        }
        let canonical = band(spectrum, &lo, &hi)?;
        let mut labels: Vec<_> = basis.iter().map(EigenMode::label).collect();
        let mut expected: Vec<_> = canonical.iter().map(EigenMode::label).collect();
        labels.sort_unstable();
        expected.sort_unstable();
        if labels != expected {
            return Err(Error::Validation(format!(
                "basis is not the band between {lo} and {hi}"
            )));
        }
        Ok(Self {
            spectrum,
            basis,
            phase,
            lo,
            hi,
        })
    }

    pub fn basis(&self) -> &[EigenMode] {
        &self.basis
    }

    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn lo(&self) -> &SpectralCut {
        &self.lo
    }

    pub fn hi(&self) -> &SpectralCut {
        &self.hi
    }

    pub fn spectrum(&self) -> &'s Spectrum {
        self.spectrum
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The same section with its phase multiplied by `factor`.
    pub fn twisted(mut self, factor: Complex64) -> Result<Self> {
        let phase = self.phase * factor;
        if (phase.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::Validation("twist must be a unit complex number".into()));
        }
        self.phase = phase;
        Ok(self)
    }

    /// Re-sorts the basis into canonical order, absorbing the permutation sign.
    pub fn canonical(&self) -> Self {
        let (basis, sign) = sort_with_sign(&self.basis);
        Self {
            basis,
            phase: self.phase * sign as f64,
            ..self.clone()
        }
    }

    /// Phase `c` with `self = c · other` as sections of the same line.
    pub fn relative_phase(&self, other: &DetLine<'_>) -> Result<Complex64> {
        if self.lo.lambda != other.lo.lambda || self.hi.lambda != other.hi.lambda {
            return Err(Error::Argument(format!(
                "lines over ({}, {}) and ({}, {}) are different lines",
                self.lo, self.hi, other.lo, other.hi
            )));
        }
        let a = self.canonical();
        let b = other.canonical();
        if a.basis.iter().map(EigenMode::label).ne(b.basis.iter().map(EigenMode::label)) {
            return Err(Error::Argument("lines are built on different spectra".into()));
        }
        Ok(a.phase / b.phase)
    }
}

fn sort_with_sign(basis: &[EigenMode]) -> (Vec<EigenMode>, i32) {
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&a, &b| basis[a].canonical_cmp(&basis[b]));
    let sign = linalg::permutation_sign(&order);
    (order.into_iter().map(|k| basis[k]).collect(), sign)
}

/// The canonical section of `det(band(lo, hi))`: canonical basis, phase 1.
pub fn det_line<'s>(s: &'s Spectrum, lo: SpectralCut, hi: SpectralCut) -> Result<DetLine<'s>> {
    let basis = band(s, &lo, &hi)?;
    Ok(DetLine {
        spectrum: s,
        basis,
        phase: Complex64::new(1.0, 0.0),
        lo,
        hi,
    })
}

/// `L_{λμ} ⊗ L_{μτ} → L_{λτ}`: concatenate, sort, and multiply in the sign.
pub fn compose<'s>(a: &DetLine<'s>, b: &DetLine<'s>) -> Result<DetLine<'s>> {
    if a.hi.lambda != b.lo.lambda {
        return Err(Error::Composition(format!(
            "upper cut {} of the first line does not meet lower cut {} of the second",
            a.hi, b.lo
        )));
    }
    if !std::ptr::eq(a.spectrum, b.spectrum) && a.spectrum != b.spectrum {
        return Err(Error::Composition("lines live on different spectra".into()));
    }
    let joined: Vec<EigenMode> = a.basis.iter().chain(b.basis.iter()).copied().collect();
    let (basis, sign) = sort_with_sign(&joined);
    Ok(DetLine {
        spectrum: a.spectrum,
        basis,
        phase: a.phase * b.phase * sign as f64,
        lo: a.lo,
        hi: b.hi,
    })
}

/// Three cuts `λ < μ < τ` with the lines over each consecutive pair and the outer pair.
#[derive(Debug, Clone)]
pub struct CechTriple<'s> {
    cuts: [SpectralCut; 3],
    lines: [DetLine<'s>; 3],
}

impl<'s> CechTriple<'s> {
    /// Builds the canonical lines for `cuts` on `s`.
    pub fn new(s: &'s Spectrum, cuts: [SpectralCut; 3]) -> Result<Self> {
        let [l, m, t] = cuts;
        let lines = [det_line(s, l, m)?, det_line(s, m, t)?, det_line(s, l, t)?];
        Self::from_lines(cuts, lines)
    }

    /// Triple from explicitly given lines `(L_{λμ}, L_{μτ}, L_{λτ})`.
    pub fn from_lines(cuts: [SpectralCut; 3], lines: [DetLine<'s>; 3]) -> Result<Self> {
        let [l, m, t] = cuts;
        if !(l.lambda < m.lambda && m.lambda < t.lambda) {
            return Err(Error::Argument(format!("cuts must satisfy {l} < {m} < {t}")));
        }
        let expected = [(l, m), (m, t), (l, t)];
        for (line, (lo, hi)) in lines.iter().zip(expected) {
            if line.lo.lambda != lo.lambda || line.hi.lambda != hi.lambda {
                return Err(Error::Argument(format!(
                    "line over ({}, {}) does not match cuts ({lo}, {hi})",
                    line.lo, line.hi
                )));
            }
        }
        let s = lines[0].spectrum;
        for cut in &cuts {
            if !in_cover(s, cut)? {
                return Err(Error::Argument(format!("cut {cut} is not in the cover")));
            }
        }
        Ok(Self { cuts, lines })
    }

    pub fn cuts(&self) -> &[SpectralCut; 3] {
        &self.cuts
    }

    pub fn lines(&self) -> &[DetLine<'s>; 3] {
        &self.lines
    }
}

/// `δ(L)` on a triple overlap: the composite `L_{λμ} ⊗ L_{μτ}` measured against `L_{λτ}`.
pub fn delta_triviality(t: &CechTriple<'_>) -> Result<Complex64> {
    let [ab, bc, ac] = &t.lines;
    compose(ab, bc)?.relative_phase(ac)
}

/// Largest dimension accepted by [`hodge_dual_iso`].
pub const MAX_HODGE_DIM: usize = 10;

/// Matrix of `ω̄ ⊗ vol ↦ ι_ω̄ vol` from `⋀^k V̄ ⊗ det V` to `⋀^{d-k} V`.
///
/// `V = ℂ^d` carries the inner product with Gram matrix `gram` in its standard
/// basis `b_j`; columns are indexed by `k`-subsets `S` (sorted, lexicographic
/// by bitmask) and rows by `(d-k)`-subsets. `vol = b_1 ∧ … ∧ b_d / √det G`.
pub fn contraction_matrix(gram: &CMatrix, k: usize) -> CMatrix {
    let d = gram.nrows();
    let src = subsets(d, k);
    let dst = subsets(d, d - k);
    let vol_norm = gram.clone().determinant().re.sqrt();
    let full: u32 = (1u32 << d) - 1;
    let mut m = CMatrix::zeros(dst.len(), src.len());
    for (col, &s) in src.iter().enumerate() {
        // contract with b̄_{s_1}, then b̄_{s_2}, …
        let mut form: Vec<(u32, Complex64)> = vec![(full, Complex64::new(1.0 / vol_norm, 0.0))];
        for idx in bits(s) {
            let mut next: Vec<(u32, Complex64)> = Vec::new();
            for (t, coeff) in form {
                for (pos, tj) in bits(t).into_iter().enumerate() {
                    let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                    let val = coeff * gram[(idx, tj)] * sign;
                    let key = t & !(1 << tj);
                    match next.iter_mut().find(|(k, _)| *k == key) {
                        Some((_, v)) => *v += val,
                        None => next.push((key, val)),
                    }
                }
            }
            form = next;
        }
        for (t, coeff) in form {
            let row = dst.iter().position(|&x| x == t).expect("degree matches");
            m[(row, col)] += coeff;
        }
    }
    m
}

/// Gram matrix of `⋀^k` induced by `gram`: `⟨b_S, b_T⟩ = det G[S, T]`.
pub fn exterior_gram(gram: &CMatrix, k: usize) -> CMatrix {
    let sets = subsets(gram.nrows(), k);
    let mut g = CMatrix::zeros(sets.len(), sets.len());
    for (a, &s) in sets.iter().enumerate() {
        for (b, &t) in sets.iter().enumerate() {
            let rows = bits(s);
            let cols = bits(t);
            let sub = CMatrix::from_fn(k, k, |r, c| gram[(rows[r], cols[c])]);
            g[(a, b)] = if k == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                sub.determinant()
            };
        }
    }
    g
}

/// Checks the canonical isomorphism `⋀V̄ ⊗ det V ≅ ⋀V` on a pseudorandom
/// inner-product space; returns the largest deviation from unitarity over all
/// exterior degrees.
pub fn hodge_dual_iso(dim: usize, seed: u64) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    if dim == 0 {
        return Err(Error::Argument("dimension must be positive".into()));
    }
    if dim > MAX_HODGE_DIM {
        return Err(Error::Resource(format!(
            "exterior algebra of dimension 2^{dim} exceeds the limit 2^{MAX_HODGE_DIM}"
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let a = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let gram = a.adjoint() * &a + CMatrix::identity(dim, dim);
    Ok(hodge_residual(&gram))
}

/// Unitarity residual of the contraction map for a given Gram matrix.
pub fn hodge_residual(gram: &CMatrix) -> f64 {
    let d = gram.nrows();
    let mut worst = 0.0_f64;
    for k in 0..=d {
        let m = contraction_matrix(gram, k);
        // ⟨b̄_S, b̄_T⟩ on V̄ is the conjugate of ⟨b_S, b_T⟩.
        let source = exterior_gram(gram, k).map(|z| z.conj());
        let target = exterior_gram(gram, d - k);
        let lhs = m.adjoint() * target * &m;
        worst = worst.max(linalg::max_abs(&(lhs - source)));
    }
    worst
}

/// All `k`-subsets of `{0, …, d-1}` as bitmasks, ascending.
fn subsets(d: usize, k: usize) -> Vec<u32> {
    (0u32..(1 << d)).filter(|s| s.count_ones() as usize == k).collect()
}

fn bits(s: u32) -> Vec<usize> {
    (0..32).filter(|b| s & (1 << b) != 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dirac_spectrum, Holonomy};

    fn cut(p: i64, q: i64) -> SpectralCut {
        SpectralCut::new(p, q)
    }

    #[test]
    fn canonical_lines() {
        let s = dirac_spectrum(&Holonomy::identity(1), 3).unwrap();
        let l = det_line(&s, cut(-1, 2), cut(1, 2)).unwrap();
        assert_eq!(l.basis().iter().map(EigenMode::label).collect::<Vec<_>>(), vec![(1, 0)]);
        assert_eq!(l.phase(), Complex64::new(1.0, 0.0));
        let empty = det_line(&s, cut(1, 4), cut(3, 4)).unwrap();
        assert_eq!(empty.dimension(), 0);
        assert_eq!(empty.phase(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn compose_sorted_bands() {
        let s = dirac_spectrum(&Holonomy::identity(1), 3).unwrap();
        let a = det_line(&s, cut(-1, 2), cut(1, 2)).unwrap();
        let b = det_line(&s, cut(1, 2), cut(3, 2)).unwrap();
        let ab = compose(&a, &b).unwrap();
        let direct = det_line(&s, cut(-1, 2), cut(3, 2)).unwrap();
        assert_eq!(ab.phase(), Complex64::new(1.0, 0.0));
        assert_eq!(ab.relative_phase(&direct).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn compose_cut_mismatch() {
        let s = dirac_spectrum(&Holonomy::identity(1), 3).unwrap();
        let a = det_line(&s, cut(-1, 2), cut(1, 2)).unwrap();
        let b = det_line(&s, cut(3, 2), cut(5, 2)).unwrap();
        assert!(matches!(compose(&a, &b), Err(Error::Composition(_))));
    }

    #[test]
    fn injected_defect_is_detected() {
        let s = dirac_spectrum(&Holonomy::identity(2), 4).unwrap();
        let cuts = [cut(-1, 2), cut(1, 2), cut(3, 2)];
        let good = CechTriple::new(&s, cuts).unwrap();
        assert_eq!(delta_triviality(&good).unwrap(), Complex64::new(1.0, 0.0));
        let [a, b, c] = good.lines().clone();
        let bad = CechTriple::from_lines(cuts, [a.twisted(Complex64::new(-1.0, 0.0)).unwrap(), b, c])
            .unwrap();
        assert_eq!(delta_triviality(&bad).unwrap(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn triple_rejects_disordered_cuts() {
        let s = dirac_spectrum(&Holonomy::identity(1), 4).unwrap();
        assert!(matches!(
            CechTriple::new(&s, [cut(1, 2), cut(-1, 2), cut(3, 2)]),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn hodge_scalar_case_and_limits() {
        assert!(hodge_dual_iso(1, 0).unwrap() < 1e-14);
        assert!(hodge_dual_iso(1, 99).unwrap() < 1e-14);
        assert!(matches!(hodge_dual_iso(11, 0), Err(Error::Resource(_))));
    }
}
