use num_complex::Complex64;
use num_rational::Rational64;

use super::operator::{sigma_at, SparseOperator};
use super::state::{apply_mode, FockState, FockVector, ModeOperator};
use super::{validate_cut, FockWindow};
use crate::error::{Error, Result};

/// Default cap on particle plus hole count when enumerating test states.
pub const DEFAULT_MAX_EXCITATIONS: usize = 3;

/// Taylor tail bound for operator exponentials.
const EXP_TAIL: f64 = 1e-13;
const EXP_MAX_ORDER: usize = 80;

/// States whose excitations all sit at least `margin` modes inside `±N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SafeSubspace {
    pub margin: i64,
    pub max_excitations: usize,
}

impl SafeSubspace {
    pub fn new(margin: i64, max_excitations: usize) -> Self {
        Self {
            margin,
            max_excitations,
        }
    }

    pub fn with_margin(margin: i64) -> Self {
        Self::new(margin, DEFAULT_MAX_EXCITATIONS)
    }

    /// Enumerates the subspace basis, graded by excitation count, then by
    /// `(particles, holes)` in slot order.
    pub fn states(&self, w: &FockWindow) -> Result<Vec<FockState>> {
        let reach = w.n_max() - self.margin;
        let slots: Vec<usize> = (0..w.slot_count())
            .filter(|s| w.slot_label(*s).1.abs() <= reach)
            .collect();
        let above = slots.iter().filter(|s| w.is_above(w.slot_label(**s).1)).count();
        if above == 0 || above == slots.len() {
            return Err(Error::Resolution(format!(
                "safe subspace with margin {} is empty on N = {}; increase N",
                self.margin,
                w.n_max()
            )));
        }
        let vac = w.vacuum_mask();
        let mut out = Vec::new();
        let mut pick = Vec::new();
        for k in 0..=self.max_excitations.min(slots.len()) {
            let mut level = Vec::new();
            subsets(&slots, k, 0, &mut pick, &mut |chosen| {
                let flip = chosen.iter().fold(0u128, |m, s| m | (1u128 << s));
                level.push(FockState(vac ^ flip));
            });
            level.sort_by_key(|s| (s.particles(w), s.holes(w)));
            out.extend(level);
        }
        Ok(out)
    }
}

fn subsets(
    slots: &[usize],
    k: usize,
    start: usize,
    pick: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for idx in start..slots.len() {
        pick.push(slots[idx]);
        subsets(slots, k, idx + 1, pick, f);
        pick.pop();
    }
}

/// Largest violation of the four anticommutation relations
/// `{ψ, ψ} = {ψ̄, ψ̄} = 0`, `{ψ^i_m, ψ̄^j_n} = {ψ̄^i_m, ψ^j_n} = δ^{ij}δ_{m+n,0}`
/// over every pair of window modes, tested on all states with at most
/// `max_excitations` particles plus holes.
///
/// No boundary margin is needed: the relations hold exactly in the truncation.
pub fn car_check(w: &FockWindow, max_excitations: usize) -> Result<f64> {
    let states = SafeSubspace::new(0, max_excitations).states(w)?;
    let n = w.n_max();
    let mut ops = Vec::new();
    for color in 1..=w.n_colors() {
        for mode in -n..=n {
            ops.push(ModeOperator::psi(color, mode));
            ops.push(ModeOperator::psi_bar(color, mode));
        }
    }
    let word = |op: &ModeOperator| -> Result<SparseOperator> {
        Ok(SparseOperator::word(*w, vec![op.ladder(w)?], Complex64::new(1.0, 0.0)))
    };
    let mut worst = 0.0f64;
    for a in &ops {
        let wa = word(a)?;
        for b in &ops {
            let paired = a.kind != b.kind && a.color == b.color && a.mode + b.mode == 0;
            let rhs = SparseOperator::scalar(*w, Complex64::new(if paired { 1.0 } else { 0.0 }, 0.0));
            let diff = wa.anticommutator(&word(b)?)?.minus(&rhs)?;
            for s in &states {
                worst = worst.max(diff.apply_state(*s).max_norm());
            }
        }
    }
    Ok(worst)
}

/// Margin needed for `[σ(e_m), σ(e_n)]` to be free of truncation effects.
pub fn commutator_margin(m: i64, n: i64) -> i64 {
    m.abs() + n.abs()
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Right-hand side of the current-algebra commutator
/// `[σ(e^{ij}_m), σ(e^{kl}_n)] = δ^{jk}σ(e^{il}_{m+n}) − δ^{il}σ(e^{kj}_{m+n}) − δ^{jk}δ^{il} m δ_{m+n,0}`.
///
/// The central term carries `−m`: with `ψ^i_m` creating above the cut, the
/// vacuum pairing `⟨λ|[σ(e^{ii}_m), σ(e^{ii}_{−m})]|λ⟩` equals `−m`.
pub fn sigma_commutator_rhs(
    (i, j, m): (usize, usize, i64),
    (k, l, n): (usize, usize, i64),
    w: &FockWindow,
) -> Result<SparseOperator> {
    let cut = w.lambda();
    let mut rhs = SparseOperator::zero(*w);
    if j == k {
        rhs = rhs.plus(&sigma_at(i, l, m + n, w, cut)?)?;
    }
    if i == l {
        rhs = rhs.minus(&sigma_at(k, j, m + n, w, cut)?)?;
    }
    if j == k && i == l && m + n == 0 {
        rhs = rhs.plus(&SparseOperator::scalar(*w, Complex64::new(-m as f64, 0.0)))?;
    }
    Ok(rhs)
}

/// Max-norm residual of the commutator identity on the safe subspace.
#[allow(clippy::too_many_arguments)]
pub fn commutator_check(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    m: i64,
    n: i64,
    w: &FockWindow,
) -> Result<f64> {
    let margin = commutator_margin(m, n);
    if margin >= w.n_max() {
        return Err(Error::Resolution(format!(
            "|m| + |n| = {margin} leaves no safe modes on N = {}; increase N",
            w.n_max()
        )));
    }
    let a = sigma_at(i, j, m, w, w.lambda())?;
    let b = sigma_at(k, l, n, w, w.lambda())?;
    let rhs = sigma_commutator_rhs((i, j, m), (k, l, n), w)?;
    let states = SafeSubspace::with_margin(margin).states(w)?;
    let mut worst = 0.0f64;
    for s in states {
        let v = FockVector::basis(*w, s);
        let lhs = &a.apply(&b.apply(&v)) - &b.apply(&a.apply(&v));
        worst = worst.max((&lhs - &rhs.apply(&v)).max_norm());
    }
    Ok(worst)
}

fn check_order(w: &FockWindow, mu: Rational64) -> Result<()> {
    validate_cut(w, mu)?;
    if mu <= w.lambda() {
        return Err(Error::Argument(format!(
            "target cut {mu} must exceed the reference cut {}",
            w.lambda()
        )));
    }
    Ok(())
}

fn apply_word(ops: &[ModeOperator], v: &FockVector) -> Result<FockVector> {
    let mut out = v.clone();
    for op in ops.iter().rev() {
        out = apply_mode(op, &out)?;
    }
    Ok(out)
}

/// `|μ⟩ = ∏_{λ<n≤μ} ∏_i ψ^i_n |λ⟩`, factors written with modes and colors ascending.
pub fn bogoliubov_vacuum(w: &FockWindow, mu: Rational64) -> Result<FockVector> {
    check_order(w, mu)?;
    let lo = w.lambda().floor().to_integer() + 1;
    let hi = mu.floor().to_integer();
    let mut word = Vec::new();
    for n in lo..=hi {
        for i in 1..=w.n_colors() {
            word.push(ModeOperator::psi(i, n));
        }
    }
    apply_word(&word, &w.vacuum())
}

/// `∏_{−μ≤n<−λ} ∏_i ψ̄^i_n` applied to `v`, factors written with modes and colors ascending.
pub fn bogoliubov_reverse(w: &FockWindow, mu: Rational64, v: &FockVector) -> Result<FockVector> {
    check_order(w, mu)?;
    let lo = (-mu).ceil().to_integer();
    let hi = (-w.lambda()).ceil().to_integer() - 1;
    let mut word = Vec::new();
    for n in lo..=hi {
        for i in 1..=w.n_colors() {
            word.push(ModeOperator::psi_bar(i, n));
        }
    }
    apply_word(&word, v)
}

/// Largest amplitude left by the vacuum annihilators of `cut` acting on `v`:
/// `ψ^i_k` for `k < cut` and `ψ̄^i_k` for `k ≤ −cut`, over the window.
pub fn vacuum_violations(v: &FockVector, cut: Rational64) -> Result<f64> {
    let w = *v.window();
    validate_cut(&w, cut)?;
    let mut worst = 0.0f64;
    for k in -w.n_max()..=w.n_max() {
        let r = Rational64::from_integer(k);
        for i in 1..=w.n_colors() {
            if r < cut {
                worst = worst.max(apply_mode(&ModeOperator::psi(i, k), v)?.max_norm());
            }
            if r <= -cut {
                worst = worst.max(apply_mode(&ModeOperator::psi_bar(i, k), v)?.max_norm());
            }
        }
    }
    Ok(worst)
}

/// `n_{λμ} = #{m ∈ ℤ : λ < m ≤ μ}`, negated when `μ < λ`.
pub fn cut_shift_count(lambda: Rational64, mu: Rational64) -> i64 {
    mu.floor().to_integer() - lambda.floor().to_integer()
}

/// Residual of `σ_μ(e^{ij}_n) = σ_λ(e^{ij}_n) − n_{λμ} δ^{ij} δ_{n,0}` on the safe subspace.
pub fn cut_shift_check(i: usize, j: usize, n: i64, w: &FockWindow, mu: Rational64) -> Result<f64> {
    validate_cut(w, mu)?;
    let shift = cut_shift_count(w.lambda(), mu) as f64 * delta(i, j) * if n == 0 { 1.0 } else { 0.0 };
    let s_mu = sigma_at(i, j, n, w, mu)?;
    let s_lambda = sigma_at(i, j, n, w, w.lambda())?
        .minus(&SparseOperator::scalar(*w, Complex64::new(shift, 0.0)))?;
    let diff = s_mu.minus(&s_lambda)?;
    let mut worst = 0.0f64;
    for s in SafeSubspace::with_margin(n.abs()).states(w)? {
        worst = worst.max(diff.apply_state(s).max_norm());
    }
    Ok(worst)
}

/// Finite combination `Σ c · e^{ij}_n` in the loop algebra.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LieElement {
    terms: Vec<(usize, usize, i64, Complex64)>,
}

impl LieElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(i: usize, j: usize, n: i64) -> Self {
        Self::new().with(i, j, n, Complex64::new(1.0, 0.0))
    }

    pub fn with(mut self, i: usize, j: usize, n: i64, c: Complex64) -> Self {
        self.terms.push((i, j, n, c));
        self
    }

    pub fn terms(&self) -> &[(usize, usize, i64, Complex64)] {
        &self.terms
    }

    /// `Tr K`: only diagonal zero modes contribute.
    pub fn trace(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|(i, j, n, _)| i == j && *n == 0)
            .map(|t| t.3)
            .sum()
    }

    pub fn margin(&self) -> i64 {
        self.terms.iter().map(|t| t.2.abs()).max().unwrap_or(0)
    }

    pub fn sigma_at(&self, w: &FockWindow, cut: Rational64) -> Result<SparseOperator> {
        let mut op = SparseOperator::zero(*w);
        for &(i, j, n, c) in &self.terms {
            op = op.plus(&sigma_at(i, j, n, w, cut)?.scaled(c))?;
        }
        Ok(op.with_margin(self.margin()))
    }
}

/// `exp(t·A) v` by scaled Taylor steps; each step's tail is bounded below `EXP_TAIL`.
pub fn exp_apply(op: &SparseOperator, t: Complex64, v: &FockVector) -> Result<FockVector> {
    let beta = op.norm_bound() * t.norm();
    let steps = (2.0 * beta).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let x = beta / steps as f64;
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        let scale = out.l1_norm().max(1.0);
        let mut bound = scale;
        let mut converged = false;
        for order in 1..=EXP_MAX_ORDER {
            term = op.apply(&term).scaled(h / order as f64);
            acc.axpy(Complex64::new(1.0, 0.0), &term);
            bound *= x / (order + 1) as f64;
            // remaining terms are dominated by a geometric series in x ≤ 1/2
            if bound * 2.0 < EXP_TAIL / steps as f64 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Precision(format!(
                "exponential series did not reach tail {EXP_TAIL:e} in {EXP_MAX_ORDER} terms"
            )));
        }
        out = acc;
    }
    Ok(out)
}

/// Residual of `exp(t σ_μ(K)) = exp(t σ_λ(K)) · exp(−t n_{λμ} Tr K)` on the safe subspace.
pub fn projective_equality_check(
    k: &LieElement,
    t: f64,
    w: &FockWindow,
    mu: Rational64,
) -> Result<f64> {
    if t.abs() > 1.0 {
        return Err(Error::Argument(format!("|t| = {} exceeds 1", t.abs())));
    }
    validate_cut(w, mu)?;
    let t = Complex64::new(t, 0.0);
    let s_mu = k.sigma_at(w, mu)?;
    let s_lambda = k.sigma_at(w, w.lambda())?;
    let phase = (-t * cut_shift_count(w.lambda(), mu) as f64 * k.trace()).exp();
    let mut worst = 0.0f64;
    for s in SafeSubspace::new(k.margin(), 2).states(w)? {
        let v = FockVector::basis(*w, s);
        let lhs = exp_apply(&s_mu, t, &v)?;
        let rhs = exp_apply(&s_lambda, t, &v)?.scaled(phase);
        worst = worst.max((&lhs - &rhs).max_norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::sigma;

    fn window(colors: usize, big_n: i64) -> FockWindow {
        FockWindow::new(colors, big_n, Rational64::new(1, 2)).unwrap()
    }

    #[test]
    fn vacuum_pairing_is_minus_m() {
        let w = window(1, 4);
        let vac = w.vacuum();
        for m in 1..=3 {
            let a = sigma(1, 1, m, &w).unwrap();
            let b = sigma(1, 1, -m, &w).unwrap();
            let comm = &a.apply(&b.apply(&vac)) - &b.apply(&a.apply(&vac));
            assert_eq!(vac.inner(&comm), Complex64::new(-m as f64, 0.0));
        }
    }

    #[test]
    fn commutator_examples() {
        let w = window(2, 4);
        assert_eq!(commutator_check(1, 2, 2, 1, 1, 0, &w).unwrap(), 0.0);
        let w6 = window(2, 6);
        assert_eq!(commutator_check(1, 2, 2, 1, 2, -2, &w6).unwrap(), 0.0);
        assert_eq!(commutator_check(1, 1, 1, 1, 1, -1, &w6).unwrap(), 0.0);
    }

    #[test]
    fn car_holds_exactly() {
        let w = FockWindow::new(2, 3, Rational64::new(1, 2)).unwrap();
        assert_eq!(car_check(&w, 2).unwrap(), 0.0);
    }

    #[test]
    fn commutator_needs_room() {
        let w = window(1, 3);
        assert!(matches!(commutator_check(1, 1, 1, 1, 2, -2, &w), Err(Error::Resolution(_))));
    }

    #[test]
    fn safe_subspace_grading() {
        let w = window(1, 3);
        let states = SafeSubspace::new(1, 2).states(&w).unwrap();
        assert_eq!(states[0], FockState::vacuum(&w));
        let counts: Vec<_> = states.iter().map(|s| s.excitations(&w)).collect();
        assert!(counts.windows(2).all(|p| p[0] <= p[1]));
        // band |m| <= 2 holds 5 slots
        assert_eq!(states.len(), 1 + 5 + 10);
    }

    #[test]
    fn bogoliubov_example() {
        let w = window(1, 4);
        let mu = Rational64::new(5, 2);
        let v = bogoliubov_vacuum(&w, mu).unwrap();
        assert_eq!(v.len(), 1);
        let (s, z) = v.terms().next().unwrap();
        assert_eq!(s.particles(&w), vec![(1, 1), (1, 2)]);
        assert_eq!(z.norm(), 1.0);
        assert_eq!(vacuum_violations(&v, mu).unwrap(), 0.0);
        let back = bogoliubov_reverse(&w, mu, &v).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back.terms().next().unwrap().0, &FockState::vacuum(&w));
        assert!(matches!(bogoliubov_vacuum(&w, Rational64::new(-1, 2)), Err(Error::Argument(_))));
    }

    #[test]
    fn cut_shift_examples() {
        let w = window(2, 5);
        let mu = Rational64::new(5, 2);
        assert_eq!(cut_shift_count(w.lambda(), mu), 2);
        assert_eq!(cut_shift_count(w.lambda(), Rational64::new(-3, 2)), -2);
        for (i, j, n) in [(1, 1, 0), (1, 2, 0), (2, 1, 1), (2, 2, -2)] {
            assert_eq!(cut_shift_check(i, j, n, &w, mu).unwrap(), 0.0);
        }
    }

    #[test]
    fn projective_example() {
        let w = window(1, 4);
        let k = LieElement::basis(1, 1, 0);
        assert_eq!(k.trace(), Complex64::new(1.0, 0.0));
        let r = projective_equality_check(&k, 0.3, &w, Rational64::new(3, 2)).unwrap();
        assert!(r <= 1e-10, "{r}");
    }
}
