//! Spectra of the circle Dirac operator `-i d/dθ` coupled to a flat bundle.
//!
//! A flat rank-`n` bundle over the circle is determined by its holonomy `U`.
//! Diagonalizing `U` with eigenphases `e^{2πi a_c}`, `a_c ∈ [0, 1)`, the
//! twisted operator has eigenvalues `m + a_c` for every Fourier mode `m ∈ ℤ`.
//! We keep the modes with `|m| ≤ N` (the window) and order them by eigenvalue,
//! breaking ties by `(color, mode)`.
//!
//! Spectral cuts are exact rationals. Membership of a parameter point in the
//! open set where a cut misses the spectrum is decided with an explicit gap
//! tolerance, because eigenphases are generically irrational.

use std::cmp::Ordering;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Floating value of an exact rational.
pub fn rational_value(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Holonomy of a flat bundle around the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Holonomy {
    matrix: CMatrix,
    tolerance: f64,
    special: bool,
    phases: Vec<f64>,
}

impl Holonomy {
    pub const DEFAULT_TOLERANCE: f64 = 1e-10;

    pub fn new(matrix: CMatrix, tolerance: f64) -> Result<Self> {
        Self::build(matrix, tolerance, false)
    }

    pub fn special_unitary(matrix: CMatrix, tolerance: f64) -> Result<Self> {
        Self::build(matrix, tolerance, true)
    }

    fn build(matrix: CMatrix, tolerance: f64, special: bool) -> Result<Self> {
        if !(tolerance >= 0.0) {
            return Err(Error::Validation(format!("tolerance must be >= 0, got {tolerance}")));
        }
        linalg::validate_unitary(&matrix, tolerance, special)?;
        let phases = linalg::unitary_phases(&matrix)?;
        Ok(Self {
            matrix,
            tolerance,
            special,
            phases,
        })
    }

    /// `diag(e^{2πi f_1}, …, e^{2πi f_n})`.
    pub fn from_fractional_phases(fractions: &[f64]) -> Result<Self> {
        let diag = nalgebra::DVector::from_iterator(
            fractions.len(),
            fractions
                .iter()
                .map(|f| (linalg::I * std::f64::consts::TAU * *f).exp()),
        );
        Self::new(CMatrix::from_diagonal(&diag), Self::DEFAULT_TOLERANCE)
    }

    pub fn identity(n: usize) -> Self {
        Self::new(CMatrix::identity(n, n), Self::DEFAULT_TOLERANCE).expect("identity is unitary")
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn is_special(&self) -> bool {
        self.special
    }

    /// Eigenphases divided by `2π`, in `[0, 1)`, ascending; index `c - 1` is color `c`.
    pub fn fractional_phases(&self) -> &[f64] {
        &self.phases
    }
}

/// One eigenvector of the windowed operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenMode {
    /// 1-based index of the holonomy eigenvector.
    pub color: usize,
    /// Fourier index.
    pub mode: i64,
    pub eigenvalue: f64,
}

impl EigenMode {
    /// The canonical total order: eigenvalue, then color, then mode.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.eigenvalue
            .total_cmp(&other.eigenvalue)
            .then(self.color.cmp(&other.color))
            .then(self.mode.cmp(&other.mode))
    }

    pub fn label(&self) -> (usize, i64) {
        (self.color, self.mode)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    holonomy: Holonomy,
    window: i64,
    modes: Vec<EigenMode>,
}

impl Spectrum {
    pub fn holonomy(&self) -> &Holonomy {
        &self.holonomy
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn modes(&self) -> &[EigenMode] {
        &self.modes
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        self.modes.iter().map(|m| m.eigenvalue)
    }

    /// Position of a mode in canonical order.
    pub fn position(&self, label: (usize, i64)) -> Option<usize> {
        self.modes.iter().position(|m| m.label() == label)
    }
}

/// A rational spectral cut with the tolerance used for gap tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCut {
    pub lambda: Rational64,
    pub gap_tolerance: f64,
}

impl SpectralCut {
    pub const DEFAULT_GAP: f64 = 1e-9;

    pub fn new(numer: i64, denom: i64) -> Self {
        Self::with_tolerance(Rational64::new(numer, denom), Self::DEFAULT_GAP)
    }

    pub fn with_tolerance(lambda: Rational64, gap_tolerance: f64) -> Self {
        Self {
            lambda,
            gap_tolerance,
        }
    }

    pub fn value(&self) -> f64 {
        rational_value(self.lambda)
    }
}

impl std::fmt::Display for SpectralCut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.lambda)
    }
}

/// All eigenmodes with `|mode| ≤ window`, in canonical order.
pub fn dirac_spectrum(h: &Holonomy, window: i64) -> Result<Spectrum> {
    if window < 1 {
        return Err(Error::Argument(format!("window must be >= 1, got {window}")));
    }
    let mut modes = Vec::with_capacity(h.rank() * (2 * window as usize + 1));
    for (k, &a) in h.fractional_phases().iter().enumerate() {
        for mode in -window..=window {
            modes.push(EigenMode {
                color: k + 1,
                mode,
                eigenvalue: mode as f64 + a,
            });
        }
    }
    modes.sort_by(EigenMode::canonical_cmp);
    Ok(Spectrum {
        holonomy: h.clone(),
        window,
        modes,
    })
}

fn check_cut_in_window(s: &Spectrum, cut: &SpectralCut) -> Result<()> {
    let n = s.window as f64;
    let l = cut.value();
    if !(l > -n && l < n) {
        return Err(Error::Range(format!(
            "cut {} lies outside the window (-{n}, {n}); truncation cannot certify membership",
            cut
        )));
    }
    Ok(())
}

/// Whether the parameter point lies in the open set where `cut` misses the spectrum.
pub fn in_cover(s: &Spectrum, cut: &SpectralCut) -> Result<bool> {
    check_cut_in_window(s, cut)?;
    let l = cut.value();
    let gap = s
        .eigenvalues()
        .map(|e| (e - l).abs())
        .fold(f64::INFINITY, f64::min);
    Ok(gap > cut.gap_tolerance)
}

/// Eigenmodes strictly between two cuts, in canonical order.
pub fn band(s: &Spectrum, lo: &SpectralCut, hi: &SpectralCut) -> Result<Vec<EigenMode>> {
    if lo.lambda >= hi.lambda {
        return Err(Error::Argument(format!(
            "cuts out of order: lo = {lo} must be < hi = {hi}"
        )));
    }
    for cut in [lo, hi] {
        if !in_cover(s, cut)? {
            return Err(Error::Cover(format!("cut {cut} meets the spectrum")));
        }
    }
    let (l, h) = (lo.value(), hi.value());
    Ok(s
        .modes
        .iter()
        .filter(|m| m.eigenvalue > l && m.eigenvalue < h)
        .copied()
        .collect())
}

/// Largest eigenvalue motion allowed between consecutive samples of a path.
pub const MAX_FLOW_STEP: f64 = 0.25;

/// Net number of eigenvalues crossing `cut` upward along a closed path of holonomies.
///
/// Eigenphases are lifted continuously from sample to sample; the flow is the
/// total decrease of the count of lifted eigenvalues below the cut.
pub fn spectral_flow(path: &[Holonomy], cut: &SpectralCut, window: i64) -> Result<i64> {
    if path.len() < 2 {
        return Err(Error::Argument("path needs at least two samples".into()));
    }
    let first = &path[0];
    let last = &path[path.len() - 1];
    let n = first.rank();
    if path.iter().any(|h| h.rank() != n) {
        return Err(Error::Argument("path mixes holonomies of different rank".into()));
    }
    if linalg::max_abs(&(first.matrix() - last.matrix())) > first.tolerance().max(1e-10) {
        return Err(Error::Argument("path is not closed: first and last holonomy differ".into()));
    }
    let s = dirac_spectrum(first, window)?;
    check_cut_in_window(&s, cut)?;
    let l = cut.value();

    let below = |lifted: &[f64]| -> i64 { lifted.iter().map(|a| (l - a).ceil() as i64).sum() };

    let mut lifted: Vec<f64> = first.fractional_phases().to_vec();
    let start = below(&lifted);
    for (step, h) in path.iter().enumerate().skip(1) {
        let next = h.fractional_phases();
        let (assignment, motion) = match_phases(&lifted, next);
        if motion >= MAX_FLOW_STEP {
            return Err(Error::Resolution(format!(
                "eigenvalue moved by {motion:.3} at step {step} (limit {MAX_FLOW_STEP}); refine the path"
            )));
        }
        lifted = assignment;
    }
    Ok(start - below(&lifted))
}

/// Lifts `next` (phases mod 1) to the real line next to `prev`, choosing the
/// matching with the smallest largest displacement. Returns the lifted values
/// (aligned with `prev`) and that displacement.
fn match_phases(prev: &[f64], next: &[f64]) -> (Vec<f64>, f64) {
    let n = prev.len();
    let lift = |p: f64, target: f64| -> f64 { target + (p - target + 0.5).rem_euclid(1.0) - 0.5 };
    if n <= 6 {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<(f64, Vec<usize>)> = None;
        loop {
            let cost = (0..n)
                .map(|k| (lift(next[perm[k]], prev[k]) - prev[k]).abs())
                .fold(0.0, f64::max);
            if best.as_ref().map_or(true, |(b, _)| cost < *b) {
                best = Some((cost, perm.clone()));
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let (cost, perm) = best.expect("at least one permutation");
        let lifted = (0..n).map(|k| lift(next[perm[k]], prev[k])).collect();
        (lifted, cost)
    } else {
        let mut used = vec![false; n];
        let mut lifted = vec![0.0; n];
        let mut cost = 0.0_f64;
        for k in 0..n {
            let (j, d) = (0..n)
                .filter(|j| !used[*j])
                .map(|j| (j, (lift(next[j], prev[k]) - prev[k]).abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("free phase");
            used[j] = true;
            lifted[k] = lift(next[j], prev[k]);
            cost = cost.max(d);
        }
        (lifted, cost)
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Samples `t ↦ diag(e^{2πi w_1 t}, …)` at `steps + 1` points on `[0, 1]`.
pub fn winding_path(windings: &[i64], steps: usize) -> Result<Vec<Holonomy>> {
    (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            let f: Vec<f64> = windings.iter().map(|w| *w as f64 * t).collect();
            Holonomy::from_fractional_phases(&f)
        })
        .collect()
}

/// Twenty labelled holonomies spanning `U(1)`, `SU(2)` and `SU(3)` with
/// degenerate, central and generic eigenphases, diagonal and conjugated.
/// The conjugations are drawn from `seed`.
pub fn reference_holonomies(seed: u64) -> Result<Vec<(String, Holonomy)>> {
    let mut rng = linalg::seeded_rng(seed);
    let diagonal: [(&str, &[f64]); 13] = [
        ("u1-trivial", &[0.0]),
        ("u1-quarter", &[0.25]),
        ("u1-half", &[0.5]),
        ("u1-third", &[1.0 / 3.0]),
        ("u1-generic", &[0.9137]),
        ("su2-identity", &[0.0, 0.0]),
        ("su2-center", &[0.5, 0.5]),
        ("su2-quarter", &[0.25, 0.75]),
        ("su2-generic", &[0.1173, 0.8827]),
        ("su3-identity", &[0.0, 0.0, 0.0]),
        ("su3-center", &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]),
        ("su3-degenerate", &[0.0, 0.5, 0.5]),
        ("su3-generic", &[0.1, 0.3, 0.6]),
    ];
    let mut out = Vec::with_capacity(20);
    for (name, phases) in diagonal {
        out.push((name.to_string(), Holonomy::from_fractional_phases(phases)?));
    }
    let conjugated: [(&str, &[f64]); 3] = [
        ("su2-conjugated", &[0.3, 0.7]),
        ("su3-conjugated-degenerate", &[0.2, 0.2, 0.6]),
        ("su3-conjugated", &[0.05, 0.4, 0.55]),
    ];
    for (name, phases) in conjugated {
        let d = Holonomy::from_fractional_phases(phases)?;
        let h = linalg::random_special_unitary(phases.len(), &mut rng);
        let m = &h * d.matrix() * h.adjoint();
        out.push((name.to_string(), Holonomy::special_unitary(m, Holonomy::DEFAULT_TOLERANCE)?));
    }
    for (name, n) in [("su2-random-a", 2), ("su2-random-b", 2), ("su3-random-a", 3), ("su3-random-b", 3)] {
        let m = linalg::random_special_unitary(n, &mut rng);
        out.push((name.to_string(), Holonomy::special_unitary(m, Holonomy::DEFAULT_TOLERANCE)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(s: &Spectrum) -> Vec<f64> {
        s.eigenvalues().collect()
    }

    #[test]
    fn reference_suite_shape() {
        let suite = reference_holonomies(1).unwrap();
        assert_eq!(suite.len(), 20);
        assert!(suite.iter().skip(5).all(|(_, h)| h.is_special() || h.rank() > 1));
        assert_eq!(suite, reference_holonomies(1).unwrap());
    }

    #[test]
    fn trivial_u1_is_integer_spectrum() {
        let s = dirac_spectrum(&Holonomy::identity(1), 2).unwrap();
        assert_eq!(values(&s), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn phase_pi_shifts_by_half() {
        let h = Holonomy::from_fractional_phases(&[0.5]).unwrap();
        let s = dirac_spectrum(&h, 1).unwrap();
        let v = values(&s);
        for (a, b) in v.iter().zip([-0.5, 0.5, 1.5]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn non_unitary_holonomy_names_bound() {
        let m = CMatrix::identity(2, 2) * linalg::c(1.1);
        let err = Holonomy::new(m, 1e-10).unwrap_err();
        assert!(matches!(err, Error::Validation(ref s) if s.contains("unitarity")));
        let m = CMatrix::identity(2, 2) * linalg::I;
        let err = Holonomy::special_unitary(m, 1e-10).unwrap_err();
        assert!(matches!(err, Error::Validation(ref s) if s.contains("det")));
    }

    #[test]
    fn window_must_be_positive() {
        assert!(matches!(
            dirac_spectrum(&Holonomy::identity(1), 0),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn cover_membership() {
        let s = dirac_spectrum(&Holonomy::identity(1), 2).unwrap();
        assert!(in_cover(&s, &SpectralCut::new(1, 2)).unwrap());
        assert!(!in_cover(&s, &SpectralCut::new(1, 1)).unwrap());
        assert!(matches!(in_cover(&s, &SpectralCut::new(5, 2)), Err(Error::Range(_))));
    }

    #[test]
    fn band_examples() {
        let s = dirac_spectrum(&Holonomy::identity(1), 2).unwrap();
        let b = band(&s, &SpectralCut::new(-1, 2), &SpectralCut::new(1, 2)).unwrap();
        assert_eq!(b.iter().map(|m| m.label()).collect::<Vec<_>>(), vec![(1, 0)]);
        assert!(matches!(
            band(&s, &SpectralCut::new(1, 2), &SpectralCut::new(1, 2)),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            band(&s, &SpectralCut::new(-1, 2), &SpectralCut::new(1, 1)),
            Err(Error::Cover(_))
        ));

        let s2 = dirac_spectrum(&Holonomy::identity(2), 2).unwrap();
        let b = band(&s2, &SpectralCut::new(-1, 2), &SpectralCut::new(3, 2)).unwrap();
        assert_eq!(
            b.iter().map(|m| m.label()).collect::<Vec<_>>(),
            vec![(1, 0), (2, 0), (1, 1), (2, 1)]
        );
    }

    #[test]
    fn flow_of_simple_paths() {
        let cut = SpectralCut::new(1, 2);
        let constant = vec![Holonomy::identity(2); 5];
        assert_eq!(spectral_flow(&constant, &cut, 3).unwrap(), 0);
        let u1 = winding_path(&[1], 64).unwrap();
        assert_eq!(spectral_flow(&u1, &cut, 3).unwrap(), 1);
        let su2 = winding_path(&[1, -1], 64).unwrap();
        assert_eq!(spectral_flow(&su2, &cut, 3).unwrap(), 0);
        let back = winding_path(&[-1], 64).unwrap();
        assert_eq!(spectral_flow(&back, &cut, 3).unwrap(), -1);
    }

    #[test]
    fn flow_rejects_open_and_coarse_paths() {
        let cut = SpectralCut::new(1, 2);
        let mut open = winding_path(&[1], 64).unwrap();
        open.pop();
        assert!(matches!(spectral_flow(&open, &cut, 3), Err(Error::Argument(_))));
        let coarse = winding_path(&[1], 3).unwrap();
        assert!(matches!(spectral_flow(&coarse, &cut, 3), Err(Error::Resolution(_))));
    }
}
