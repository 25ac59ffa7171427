use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;

use super::state::{FockState, FockVector};
use super::{validate_cut, FockWindow};
use crate::error::{Error, Result};

/// Creation or annihilation in one slot of the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

/// `coeff · word[0] word[1] …`; the rightmost ladder acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub word: Vec<Ladder>,
}

/// Finite linear combination of ladder words on one window.
///
/// `safe_margin` marks the modes within that distance of `±N` as boundary:
/// identities that hold for the untruncated operators are only asserted on
/// states whose excitations stay clear of it.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    window: FockWindow,
    terms: BTreeMap<Vec<Ladder>, Complex64>,
    safe_margin: i64,
}

/// Columns of an operator restricted to an enumerated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub columns: Vec<FockState>,
    /// `(row state, column index, amplitude)`, rows in state order per column.
    pub entries: Vec<(FockState, usize, Complex64)>,
}

impl SparseOperator {
    pub fn zero(window: FockWindow) -> Self {
        Self {
            window,
            terms: BTreeMap::new(),
            safe_margin: 0,
        }
    }

    pub fn scalar(window: FockWindow, c: Complex64) -> Self {
        let mut op = Self::zero(window);
        op.add_word(Vec::new(), c);
        op
    }

    pub fn word(window: FockWindow, word: Vec<Ladder>, c: Complex64) -> Self {
        let mut op = Self::zero(window);
        op.add_word(word, c);
        op
    }

    fn add_word(&mut self, word: Vec<Ladder>, c: Complex64) {
        let e = self.terms.entry(word).or_default();
        *e += c;
        if e.norm() == 0.0 {
            // exact cancellation of integer coefficients
            self.terms.retain(|_, z| z.norm() != 0.0);
        }
    }

    pub fn window(&self) -> &FockWindow {
        &self.window
    }

    pub fn safe_margin(&self) -> i64 {
        self.safe_margin
    }

    pub fn with_margin(mut self, margin: i64) -> Self {
        self.safe_margin = margin;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(w, c)| Term {
            coeff: *c,
            word: w.clone(),
        })
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Upper bound on the operator norm: every ladder word has norm at most one.
    pub fn norm_bound(&self) -> f64 {
        self.terms.values().map(|z| z.norm()).sum()
    }

    fn check_window(&self, other: &FockWindow) -> Result<()> {
        if &self.window != other {
            return Err(Error::Argument("operators live on different windows".into()));
        }
        Ok(())
    }

    pub fn plus(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.check_window(&other.window)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_word(w.clone(), *c);
        }
        out.safe_margin = self.safe_margin.max(other.safe_margin);
        Ok(out)
    }

    pub fn scaled(&self, c: Complex64) -> SparseOperator {
        let mut out = SparseOperator::zero(self.window);
        for (w, z) in &self.terms {
            out.add_word(w.clone(), z * c);
        }
        out.safe_margin = self.safe_margin;
        out
    }

    pub fn minus(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.plus(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Operator product `self · other`.
    pub fn times(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.check_window(&other.window)?;
        let mut out = SparseOperator::zero(self.window);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_word(w, ca * cb);
            }
        }
        out.safe_margin = self.safe_margin + other.safe_margin;
        Ok(out)
    }

    pub fn commutator(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.times(other)?.minus(&other.times(self)?)
    }

    pub fn anticommutator(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.times(other)?.plus(&other.times(self)?)
    }

    pub fn apply_state(&self, state: FockState) -> FockVector {
        let mut out = FockVector::zero(self.window);
        'terms: for (word, c) in &self.terms {
            let mut s = state;
            let mut sign = 1.0;
            for op in word.iter().rev() {
                match s.apply(*op) {
                    Some((t, sg)) => {
                        s = t;
                        sign *= sg;
                    }
                    None => continue 'terms,
                }
            }
            out.add_term(s, c * sign);
        }
        out
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(self.window);
        for (s, z) in v.terms() {
            out.axpy(*z, &self.apply_state(*s));
        }
        out
    }

    /// Whether an excitation of `state` sits within `safe_margin` of the window edge.
    pub fn touches_boundary(&self, state: &FockState) -> bool {
        state
            .edge_distance(&self.window)
            .map_or(false, |d| d < self.safe_margin)
    }

    /// The basis states on which this operator is contaminated by truncation.
    pub fn contaminated<'a>(&self, basis: &'a [FockState]) -> Vec<&'a FockState> {
        basis.iter().filter(|s| self.touches_boundary(s)).collect()
    }

    pub fn matrix_on(&self, basis: &[FockState]) -> SparseMatrix {
        let mut entries = Vec::new();
        for (col, s) in basis.iter().enumerate() {
            for (row, z) in self.apply_state(*s).terms() {
                entries.push((*row, col, *z));
            }
        }
        SparseMatrix {
            columns: basis.to_vec(),
            entries,
        }
    }
}

/// `:ψ^i_m ψ̄^j_n:` normal-ordered relative to `cut`.
///
/// Creators above the cut stay left; for `m < cut`, `ψ^i_m` annihilates the
/// cut vacuum and is moved right with a sign.
pub fn normal_ordered_pair_at(
    i: usize,
    j: usize,
    m: i64,
    n: i64,
    w: &FockWindow,
    cut: Rational64,
) -> Result<SparseOperator> {
    validate_cut(w, cut)?;
    let psi = super::ModeOperator::psi(i, m).ladder(w)?;
    let bar = super::ModeOperator::psi_bar(j, n).ladder(w)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(if Rational64::from_integer(m) > cut {
        SparseOperator::word(*w, vec![psi, bar], one)
    } else {
        SparseOperator::word(*w, vec![bar, psi], -one)
    })
}

/// `:ψ^i_m ψ̄^j_n:_λ` at the window's reference cut.
pub fn normal_ordered_pair(i: usize, j: usize, m: i64, n: i64, w: &FockWindow) -> Result<SparseOperator> {
    normal_ordered_pair_at(i, j, m, n, w, w.lambda())
}

/// `σ(e^{ij}_n) = Σ_m :ψ^i_m ψ̄^j_{n-m}:` normal-ordered at `cut`, summed over
/// every `m` with both modes inside the window.
pub fn sigma_at(i: usize, j: usize, n: i64, w: &FockWindow, cut: Rational64) -> Result<SparseOperator> {
    if n.abs() > 2 * w.n_max() {
        return Err(Error::Range(format!(
            "mode transfer {n} exceeds 2N = {}",
            2 * w.n_max()
        )));
    }
    let mut out = SparseOperator::zero(*w);
    for m in -w.n_max()..=w.n_max() {
        if w.contains_mode(n - m) {
            out = out.plus(&normal_ordered_pair_at(i, j, m, n - m, w, cut)?)?;
        }
    }
    Ok(out.with_margin(n.abs()))
}

/// `σ_λ(e^{ij}_n)` at the window's reference cut.
pub fn sigma(i: usize, j: usize, n: i64, w: &FockWindow) -> Result<SparseOperator> {
    sigma_at(i, j, n, w, w.lambda())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ModeOperator;

    fn window(colors: usize, big_n: i64) -> FockWindow {
        FockWindow::new(colors, big_n, Rational64::new(1, 2)).unwrap()
    }

    #[test]
    fn normal_order_case_split() {
        let w = window(1, 3);
        let keep = normal_ordered_pair(1, 1, 1, -1, &w).unwrap();
        let t: Vec<_> = keep.terms().collect();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].coeff, Complex64::new(1.0, 0.0));
        assert_eq!(
            t[0].word,
            vec![
                ModeOperator::psi(1, 1).ladder(&w).unwrap(),
                ModeOperator::psi_bar(1, -1).ladder(&w).unwrap()
            ]
        );
        let swap = normal_ordered_pair(1, 1, 0, 0, &w).unwrap();
        let t: Vec<_> = swap.terms().collect();
        assert_eq!(t[0].coeff, Complex64::new(-1.0, 0.0));
        assert_eq!(
            t[0].word,
            vec![
                ModeOperator::psi_bar(1, 0).ladder(&w).unwrap(),
                ModeOperator::psi(1, 0).ladder(&w).unwrap()
            ]
        );
    }

    #[test]
    fn normal_ordering_kills_vacuum_expectations() {
        let w = window(2, 3);
        let vac = w.vacuum();
        for m in -3..=3 {
            for (i, j) in [(1, 1), (1, 2), (2, 2)] {
                let op = normal_ordered_pair(i, j, m, -m, &w).unwrap();
                assert_eq!(vac.inner(&op.apply(&vac)), Complex64::new(0.0, 0.0), "m = {m}");
            }
        }
    }

    #[test]
    fn sigma_zero_annihilates_vacuum() {
        let w = window(2, 4);
        for i in 1..=2 {
            assert!(sigma(i, i, 0, &w).unwrap().apply(&w.vacuum()).is_empty());
        }
    }

    #[test]
    fn sigma_marks_boundary_states() {
        let w = window(1, 4);
        let s = sigma(1, 1, 2, &w).unwrap();
        assert_eq!(s.safe_margin(), 2);
        let edge = FockState::from_excitations(&w, &[(1, 4)], &[]).unwrap();
        let inner = FockState::from_excitations(&w, &[(1, 2)], &[]).unwrap();
        assert!(s.touches_boundary(&edge));
        assert!(!s.touches_boundary(&inner));
        assert_eq!(s.contaminated(&[edge, inner]).len(), 1);
    }

    #[test]
    fn transfer_range() {
        let w = window(1, 2);
        assert!(matches!(sigma(1, 1, 5, &w), Err(Error::Range(_))));
    }
}
