use std::collections::BTreeMap;

use num_complex::Complex64;

use super::operator::Ladder;
use super::FockWindow;
use crate::error::{Error, Result};

/// Amplitudes below this are dropped from sparse vectors.
pub const ZERO_AMPLITUDE: f64 = 1e-14;

/// A basis state: one occupation bit per slot, in canonical slot order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState(pub(crate) u128);

impl FockState {
    pub fn vacuum(w: &FockWindow) -> Self {
        Self(w.vacuum_mask())
    }

    /// The state `∏ ψ(particles) ∏ ψ̄(holes) |λ⟩` up to sign, given by its excitations.
    ///
    /// Particles are `(color, mode)` above the cut, holes `(color, mode)` below it.
    pub fn from_excitations(
        w: &FockWindow,
        particles: &[(usize, i64)],
        holes: &[(usize, i64)],
    ) -> Result<Self> {
        let mut mask = w.vacuum_mask();
        for &(c, m) in particles {
            if !w.is_above(m) {
                return Err(Error::Argument(format!("particle mode {m} is not above the cut")));
            }
            mask |= 1u128 << w.slot(c, m)?;
        }
        for &(c, m) in holes {
            if w.is_above(m) {
                return Err(Error::Argument(format!("hole mode {m} is not below the cut")));
            }
            mask &= !(1u128 << w.slot(c, m)?);
        }
        Ok(Self(mask))
    }

    pub fn mask(&self) -> u128 {
        self.0
    }

    pub fn is_occupied(&self, slot: usize) -> bool {
        self.0 & (1u128 << slot) != 0
    }

    /// Occupied slots above the cut, as `(color, mode)` sorted by slot order.
    pub fn particles(&self, w: &FockWindow) -> Vec<(usize, i64)> {
        let diff = self.0 & !w.vacuum_mask();
        slots_of(diff).map(|s| w.slot_label(s)).collect()
    }

    /// Empty slots below the cut.
    pub fn holes(&self, w: &FockWindow) -> Vec<(usize, i64)> {
        let diff = w.vacuum_mask() & !self.0;
        slots_of(diff).map(|s| w.slot_label(s)).collect()
    }

    pub fn excitations(&self, w: &FockWindow) -> usize {
        (self.0 ^ w.vacuum_mask()).count_ones() as usize
    }

    /// Charge relative to the vacuum: particles minus holes.
    pub fn charge(&self, w: &FockWindow) -> i64 {
        self.0.count_ones() as i64 - w.vacuum_mask().count_ones() as i64
    }

    /// Smallest distance from an excitation to the window edge `±N`, or `None` for the vacuum.
    pub fn edge_distance(&self, w: &FockWindow) -> Option<i64> {
        slots_of(self.0 ^ w.vacuum_mask())
            .map(|s| w.n_max() - w.slot_label(s).1.abs())
            .min()
    }

    /// Applies one ladder operator; `None` when the result vanishes.
    pub(crate) fn apply(self, op: Ladder) -> Option<(FockState, f64)> {
        let (slot, create) = match op {
            Ladder::Create(s) => (s, true),
            Ladder::Annihilate(s) => (s, false),
        };
        let bit = 1u128 << slot;
        if (self.0 & bit != 0) == create {
            return None;
        }
        let below = (self.0 & (bit - 1)).count_ones();
        let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
        Some((FockState(self.0 ^ bit), sign))
    }
}

fn slots_of(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let s = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(s)
        }
    })
}

/// Sparse superposition of basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    window: FockWindow,
    terms: BTreeMap<FockState, Complex64>,
}

impl FockVector {
    pub fn zero(window: FockWindow) -> Self {
        Self {
            window,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(window: FockWindow, state: FockState) -> Self {
        let mut v = Self::zero(window);
        v.terms.insert(state, Complex64::new(1.0, 0.0));
        v
    }

    pub fn window(&self) -> &FockWindow {
        &self.window
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockState, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, state: &FockState) -> Complex64 {
        self.terms.get(state).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, state: FockState, amp: Complex64) {
        let e = self.terms.entry(state).or_default();
        *e += amp;
        if e.norm() < ZERO_AMPLITUDE {
            self.terms.remove(&state);
        }
    }

    pub fn axpy(&mut self, a: Complex64, other: &FockVector) {
        for (s, z) in &other.terms {
            self.add_term(*s, a * z);
        }
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        let mut v = Self::zero(self.window);
        v.axpy(a, self);
        v
    }

    pub fn max_norm(&self) -> f64 {
        self.terms.values().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|z| z.norm()).sum()
    }

    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.terms
            .iter()
            .map(|(s, z)| z.conj() * other.amplitude(s))
            .sum()
    }

    pub(crate) fn apply_ladder(&self, op: Ladder) -> FockVector {
        let mut out = FockVector::zero(self.window);
        for (s, z) in &self.terms {
            if let Some((t, sign)) = s.apply(op) {
                out.add_term(t, z * sign);
            }
        }
        out
    }
}

impl std::ops::Sub for &FockVector {
    type Output = FockVector;

    fn sub(self, rhs: &FockVector) -> FockVector {
        let mut v = self.clone();
        v.axpy(Complex64::new(-1.0, 0.0), rhs);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeKind {
    /// `ψ^i_m`
    Psi,
    /// `ψ̄^i_m`
    PsiBar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeOperator {
    pub kind: ModeKind,
    pub color: usize,
    pub mode: i64,
}

impl ModeOperator {
    pub fn psi(color: usize, mode: i64) -> Self {
        Self {
            kind: ModeKind::Psi,
            color,
            mode,
        }
    }

    pub fn psi_bar(color: usize, mode: i64) -> Self {
        Self {
            kind: ModeKind::PsiBar,
            color,
            mode,
        }
    }

    pub fn ladder(&self, w: &FockWindow) -> Result<Ladder> {
        Ok(match self.kind {
            ModeKind::Psi => Ladder::Create(w.slot(self.color, self.mode)?),
            ModeKind::PsiBar => Ladder::Annihilate(w.slot(self.color, -self.mode)?),
        })
    }
}

pub fn apply_mode(op: &ModeOperator, v: &FockVector) -> Result<FockVector> {
    Ok(v.apply_ladder(op.ladder(v.window())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn window(n: usize, big_n: i64) -> FockWindow {
        FockWindow::new(n, big_n, Rational64::new(1, 2)).unwrap()
    }

    #[test]
    fn creation_on_vacuum() {
        let w = window(1, 3);
        let v = apply_mode(&ModeOperator::psi(1, 1), &w.vacuum()).unwrap();
        let s = FockState::from_excitations(&w, &[(1, 1)], &[]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.amplitude(&s), Complex64::new(1.0, 0.0));
        assert_eq!(s.particles(&w), vec![(1, 1)]);
    }

    #[test]
    fn annihilators_kill_vacuum() {
        let w = window(2, 3);
        for c in 1..=2 {
            for m in -3..=3 {
                let psi = apply_mode(&ModeOperator::psi(c, m), &w.vacuum()).unwrap();
                assert_eq!(psi.is_empty(), m < 1, "psi^{c}_{m}");
                let bar = apply_mode(&ModeOperator::psi_bar(c, m), &w.vacuum()).unwrap();
                assert_eq!(bar.is_empty(), m <= -1, "psibar^{c}_{m}");
            }
        }
    }

    #[test]
    fn hole_amplitude_is_window_independent() {
        for big_n in 2..6 {
            let w = window(1, big_n);
            let v = apply_mode(&ModeOperator::psi_bar(1, 1), &w.vacuum()).unwrap();
            let s = FockState::from_excitations(&w, &[], &[(1, -1)]).unwrap();
            assert_eq!(v.amplitude(&s), Complex64::new(-1.0, 0.0));
            assert_eq!(s.holes(&w), vec![(1, -1)]);
        }
    }

    #[test]
    fn out_of_window_mode_is_range_error() {
        let w = window(1, 2);
        assert!(matches!(apply_mode(&ModeOperator::psi(1, 3), &w.vacuum()), Err(Error::Range(_))));
        assert!(matches!(apply_mode(&ModeOperator::psi(2, 0), &w.vacuum()), Err(Error::Range(_))));
    }
}
