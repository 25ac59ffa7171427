//! Truncated fermionic Fock spaces for the polarization `H = H_λ⁺ ⊕ H_λ⁻`.
//!
//! Modes `ψ^i_m` carry a color `i ∈ 1..=n` and a Fourier index `|m| ≤ N`.
//! Each `(i, m)` is one fermionic slot; `ψ^i_m` creates in slot `(i, m)` and
//! `ψ̄^j_n` annihilates in slot `(j, -n)`, so `{ψ^i_m, ψ̄^j_n} = δ_{m+n,0} δ^{ij}`.
//! The vacuum `|λ⟩` fills every slot below the reference cut λ.
//!
//! Slots are ordered away from the cut: modes above λ ascending, then modes
//! below λ descending, colors ascending within a mode. Fermionic signs count
//! occupied slots that precede the acted-on slot in this order, which makes
//! the amplitudes of particle/hole states independent of the window size.

mod checks;
mod operator;
mod state;

pub use checks::{
    bogoliubov_reverse, bogoliubov_vacuum, car_check, commutator_check, commutator_margin, cut_shift_check,
    cut_shift_count, exp_apply, projective_equality_check, sigma_commutator_rhs, vacuum_violations,
    LieElement, SafeSubspace, DEFAULT_MAX_EXCITATIONS,
};
pub use operator::{
    normal_ordered_pair, normal_ordered_pair_at, sigma, sigma_at, Ladder, SparseMatrix, SparseOperator,
    Term,
};
pub use state::{apply_mode, FockState, FockVector, ModeKind, ModeOperator};

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::spectral::rational_value;

/// Largest number of slots representable in a [`FockState`] bitmask.
pub const MAX_SLOTS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockWindow {
    n_colors: usize,
    n_max: i64,
    lambda: Rational64,
}

impl FockWindow {
    pub fn new(n_colors: usize, n_max: i64, lambda: Rational64) -> Result<Self> {
        if n_colors == 0 || n_max < 1 {
            return Err(Error::Argument(format!(
                "need at least one color and N >= 1, got colors = {n_colors}, N = {n_max}"
            )));
        }
        if lambda.is_integer() {
            return Err(Error::Argument(format!("reference cut {lambda} must not be an integer")));
        }
        if !(lambda > Rational64::from_integer(-n_max) && lambda < Rational64::from_integer(n_max))
        {
            return Err(Error::Range(format!(
                "reference cut {lambda} must lie inside (-{n_max}, {n_max})"
            )));
        }
        let slots = n_colors * (2 * n_max as usize + 1);
        if slots > MAX_SLOTS {
            return Err(Error::Resource(format!(
                "{slots} slots exceed the representable maximum {MAX_SLOTS}"
            )));
        }
        Ok(Self {
            n_colors,
            n_max,
            lambda,
        })
    }

    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn lambda(&self) -> Rational64 {
        self.lambda
    }

    pub fn slot_count(&self) -> usize {
        self.n_colors * (2 * self.n_max as usize + 1)
    }

    pub fn contains_mode(&self, mode: i64) -> bool {
        mode.abs() <= self.n_max
    }

    pub(crate) fn is_above(&self, mode: i64) -> bool {
        Rational64::from_integer(mode) > self.lambda
    }

    /// Number of window modes above the reference cut.
    fn above_count(&self) -> usize {
        (-self.n_max..=self.n_max).filter(|m| self.is_above(*m)).count()
    }

    /// Position of slot `(color, mode)` in the canonical order.
    pub fn slot(&self, color: usize, mode: i64) -> Result<usize> {
        if color == 0 || color > self.n_colors {
            return Err(Error::Range(format!("color {color} outside 1..={}", self.n_colors)));
        }
        if !self.contains_mode(mode) {
            return Err(Error::Range(format!(
                "mode {mode} outside the window |m| <= {}",
                self.n_max
            )));
        }
        let first_above = self.lambda.floor().to_integer() + 1;
        let rank = if mode >= first_above {
            (mode - first_above) as usize
        } else {
            self.above_count() + (first_above - 1 - mode) as usize
        };
        Ok(rank * self.n_colors + (color - 1))
    }

    /// Inverse of [`FockWindow::slot`].
    pub fn slot_label(&self, slot: usize) -> (usize, i64) {
        let color = slot % self.n_colors + 1;
        let rank = (slot / self.n_colors) as i64;
        let first_above = self.lambda.floor().to_integer() + 1;
        let above = self.above_count() as i64;
        let mode = if rank < above {
            first_above + rank
        } else {
            first_above - 1 - (rank - above)
        };
        (color, mode)
    }

    /// Occupation mask of `|λ⟩`.
    pub fn vacuum_mask(&self) -> u128 {
        let mut mask = 0u128;
        for mode in -self.n_max..=self.n_max {
            if !self.is_above(mode) {
                for color in 1..=self.n_colors {
                    mask |= 1u128 << self.slot(color, mode).expect("in window");
                }
            }
        }
        mask
    }

    pub fn vacuum(&self) -> FockVector {
        FockVector::basis(*self, FockState::vacuum(self))
    }

    pub fn lambda_value(&self) -> f64 {
        rational_value(self.lambda)
    }
}

/// Checks a cut is admissible for normal ordering on this window.
pub(crate) fn validate_cut(w: &FockWindow, cut: Rational64) -> Result<()> {
    if cut.is_integer() {
        return Err(Error::Argument(format!("cut {cut} must not be an integer")));
    }
    let n = Rational64::from_integer(w.n_max());
    if !(cut > -n && cut < n) {
        return Err(Error::Range(format!("cut {cut} must lie inside (-{n}, {n})")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_order_moves_away_from_cut() {
        let w = FockWindow::new(2, 2, Rational64::new(1, 2)).unwrap();
        let labels: Vec<_> = (0..w.slot_count()).map(|s| w.slot_label(s)).collect();
        assert_eq!(
            labels,
            vec![(1, 1), (2, 1), (1, 2), (2, 2), (1, 0), (2, 0), (1, -1), (2, -1), (1, -2), (2, -2)]
        );
        for s in 0..w.slot_count() {
            let (c, m) = w.slot_label(s);
            assert_eq!(w.slot(c, m).unwrap(), s);
        }
    }

    #[test]
    fn window_validation() {
        assert!(matches!(FockWindow::new(1, 3, Rational64::from_integer(1)), Err(Error::Argument(_))));
        assert!(matches!(FockWindow::new(1, 3, Rational64::new(7, 2)), Err(Error::Range(_))));
        assert!(matches!(FockWindow::new(5, 20, Rational64::new(1, 2)), Err(Error::Resource(_))));
    }
}
