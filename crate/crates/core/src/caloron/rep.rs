use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;

use super::grid::LoopField;
use super::{LatticeConnection, LieAlgebraSpec, LoopHiggsPair};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};

/// Largest irreducible representation handled.
pub const MAX_REP_DIM: usize = 200;
/// Largest tensor power materialized for symmetric and exterior powers.
const MAX_TENSOR_DIM: usize = 1 << 14;
const MAX_BOXES: usize = 24;

pub(crate) fn rational_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn normalize_partition(n: usize, partition: &[usize]) -> Result<Vec<usize>> {
    if partition.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Argument(format!("{partition:?} is not a partition (must be non-increasing)")));
    }
    let mut p: Vec<usize> = partition.iter().copied().filter(|&r| r > 0).collect();
    if p.len() > n {
        return Err(Error::Argument(format!(
            "partition {partition:?} has more than {n} rows and gives no su({n}) representation"
        )));
    }
    if p.len() == n {
        let full = p[n - 1];
        p.iter_mut().for_each(|r| *r -= full);
        p.retain(|&r| r > 0);
    }
    if p.iter().sum::<usize>() > MAX_BOXES {
        return Err(Error::Capability(format!(
            "partitions with more than {MAX_BOXES} boxes are not supported"
        )));
    }
    Ok(p)
}

/// Dimension of the `su(n)` irreducible with Young diagram `partition`.
pub fn hook_content_dimension(n: usize, partition: &[usize]) -> Result<u128> {
    let p = normalize_partition(n, partition)?;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for (i, &row) in p.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = p.iter().skip(i + 1).filter(|&&r| r > j).count();
            num *= (n + j - i) as u128;
            den *= (arm + leg + 1) as u128;
        }
    }
    Ok(num / den)
}

/// Walks every semistandard tableau of shape `p` with entries `0..n`,
/// reporting the content (multiplicity of each entry).
fn for_each_tableau(n: usize, p: &[usize], f: &mut dyn FnMut(&[i64])) {
    let cells: Vec<(usize, usize)> = p
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| (0..r).map(move |j| (i, j)))
        .collect();
    let mut filling = vec![vec![0usize; p.first().copied().unwrap_or(0)]; p.len()];
    let mut content = vec![0i64; n];
    fn rec(
        k: usize,
        n: usize,
        cells: &[(usize, usize)],
        filling: &mut Vec<Vec<usize>>,
        content: &mut Vec<i64>,
        f: &mut dyn FnMut(&[i64]),
    ) {
        if k == cells.len() {
            f(content);
            return;
        }
        let (i, j) = cells[k];
        let lo_row = if j > 0 { filling[i][j - 1] } else { 0 };
        let lo_col = if i > 0 { filling[i - 1][j] + 1 } else { 0 };
        for v in lo_row.max(lo_col)..n {
            filling[i][j] = v;
            content[v] += 1;
            rec(k + 1, n, cells, filling, content, f);
            content[v] -= 1;
        }
    }
    rec(0, n, &cells, &mut filling, &mut content, f);
}

/// Dynkin index `ι_ρ = tr_ρ(h²)/⟨h, h⟩` of the `su(n)` irreducible with the
/// given Young diagram, from its weights; checked on the coroots of
/// `e_1 − e_2` and `e_1 − e_n`.
pub fn dynkin_index(n: usize, partition: &[usize]) -> Result<Rational64> {
    if n < 2 {
        return Err(Error::Argument(format!("su(n) needs n >= 2, got {n}")));
    }
    let dim = hook_content_dimension(n, partition)?;
    if dim > MAX_REP_DIM as u128 {
        return Err(Error::Capability(format!(
            "representation of dimension {dim} exceeds the supported {MAX_REP_DIM}"
        )));
    }
    let p = normalize_partition(n, partition)?;
    let (mut first, mut last, mut count) = (0i64, 0i64, 0u128);
    for_each_tableau(n, &p, &mut |w| {
        first += (w[0] - w[1]).pow(2);
        last += (w[0] - w[n - 1]).pow(2);
        count += 1;
    });
    if count != dim {
        return Err(Error::Consistency(format!(
            "weight enumeration found {count} states, hook-content formula gives {dim}"
        )));
    }
    if first != last {
        return Err(Error::Consistency(format!(
            "trace normalization depends on the coroot: {first} vs {last}"
        )));
    }
    Ok(Rational64::new(first, 2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    Trivial,
    Fundamental,
    /// `Sym^k` of the fundamental.
    Symmetric(usize),
    /// `Λ^k` of the fundamental.
    Exterior(usize),
    Adjoint,
}

impl RepKind {
    pub fn partition(&self, n: usize) -> Vec<usize> {
        match *self {
            RepKind::Trivial => vec![],
            RepKind::Fundamental => vec![1],
            RepKind::Symmetric(k) => vec![k],
            RepKind::Exterior(k) => vec![1; k],
            RepKind::Adjoint => {
                let mut p = vec![2];
                p.extend(std::iter::repeat(1).take(n - 2));
                p
            }
        }
    }
}

/// Matrix form of `ρ̇: su(n) → su(V)`, stored as the images of the matrix
/// units `E_pq` and extended complex-linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    n: usize,
    kind: RepKind,
    dim: usize,
    images: Vec<CMatrix>,
}

fn unit(n: usize, p: usize, q: usize) -> CMatrix {
    let mut e = CMatrix::zeros(n, n);
    e[(p, q)] = c(1.0);
    e
}

/// Orthonormal vectors in `(ℂⁿ)^{⊗k}` spanning `Sym^k` or `Λ^k`, as sparse columns.
fn power_basis(n: usize, k: usize, symmetric: bool) -> Vec<BTreeMap<Vec<usize>, f64>> {
    let mut out = Vec::new();
    let mut multiset = vec![0usize; k];
    fn next(ms: &mut [usize], n: usize, strict: bool) -> bool {
        // advance a non-decreasing (or increasing) sequence lexicographically
        let k = ms.len();
        for i in (0..k).rev() {
            let cap = if strict { n - (k - i) } else { n - 1 };
            if ms[i] < cap {
                ms[i] += 1;
                for j in i + 1..k {
                    ms[j] = if strict { ms[j - 1] + 1 } else { ms[i] };
                }
                return true;
            }
        }
        false
    }
    if !symmetric {
        if k > n {
            return out;
        }
        for (i, m) in multiset.iter_mut().enumerate() {
            *m = i;
        }
    }
    loop {
        let mut col = BTreeMap::new();
        // distinct rearrangements of the sorted word, in lexicographic order
        let mut word = multiset.clone();
        loop {
            let sign = if symmetric {
                1.0
            } else {
                crate::linalg::permutation_sign(&word) as f64
            };
            col.insert(word.clone(), sign);
            if !crate::spectral::next_permutation(&mut word) {
                break;
            }
        }
        col.retain(|_, v: &mut f64| *v != 0.0);
        let norm = col.values().map(|v| v * v).sum::<f64>().sqrt();
        col.values_mut().for_each(|v| *v /= norm);
        out.push(col);
        if !next(&mut multiset, n, !symmetric) {
            break;
        }
    }
    out
}

fn power_images(n: usize, k: usize, symmetric: bool) -> Result<Vec<CMatrix>> {
    if n.checked_pow(k as u32).is_none_or(|d| d > MAX_TENSOR_DIM) {
        return Err(Error::Capability(format!(
            "tensor power ({n})^{k} exceeds {MAX_TENSOR_DIM}"
        )));
    }
    let basis = power_basis(n, k, symmetric);
    let dim = basis.len();
    let mut images = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            let mut m = CMatrix::zeros(dim, dim);
            for (col, v) in basis.iter().enumerate() {
                // derivation action of E_pq on every tensor factor
                let mut image: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
                for (word, w) in v {
                    for s in 0..k {
                        if word[s] == q {
                            let mut moved = word.clone();
                            moved[s] = p;
                            *image.entry(moved).or_insert(0.0) += w;
                        }
                    }
                }
                for (row, u) in basis.iter().enumerate() {
                    let dot: f64 = u.iter().map(|(word, a)| a * image.get(word).copied().unwrap_or(0.0)).sum();
                    m[(row, col)] = c(dot);
                }
            }
            images.push(m);
        }
    }
    Ok(images)
}

impl Representation {
    pub fn new(n: usize, kind: RepKind) -> Result<Self> {
        let algebra = LieAlgebraSpec::su(n)?;
        let images = match kind {
            RepKind::Trivial => (0..n * n).map(|_| CMatrix::zeros(1, 1)).collect(),
            RepKind::Fundamental => (0..n)
                .flat_map(|p| (0..n).map(move |q| unit(n, p, q)))
                .collect(),
            RepKind::Symmetric(k) | RepKind::Exterior(k) if k == 0 => {
                return Err(Error::Argument("power k must be positive".into()))
            }
            RepKind::Exterior(k) if k > n => {
                return Err(Error::Argument(format!("Λ^{k} of ℂ^{n} vanishes")))
            }
            RepKind::Symmetric(k) => {
                hook_content_dimension(n, &[k]).and_then(|d| check_dim(d))?;
                power_images(n, k, true)?
            }
            RepKind::Exterior(k) => power_images(n, k, false)?,
            RepKind::Adjoint => {
                let basis = algebra.basis();
                let mut images = Vec::with_capacity(n * n);
                for p in 0..n {
                    for q in 0..n {
                        let e = unit(n, p, q);
                        let mut m = CMatrix::zeros(basis.len(), basis.len());
                        for (b, tb) in basis.iter().enumerate() {
                            let br = &e * tb - tb * &e;
                            for (a, ta) in basis.iter().enumerate() {
                                m[(a, b)] = super::grid::inner(ta, &br);
                            }
                        }
                        images.push(m);
                    }
                }
                images
            }
        };
        let dim = images[0].nrows();
        Ok(Self { n, kind, dim, images })
    }

    /// Representation for a Young diagram, if it is one of the supported families.
    pub fn from_partition(n: usize, partition: &[usize]) -> Result<Self> {
        let p = normalize_partition(n, partition)?;
        let kind = match p.as_slice() {
            [] => RepKind::Trivial,
            [1] => RepKind::Fundamental,
            [k] => RepKind::Symmetric(*k),
            rows if rows.iter().all(|&r| r == 1) => RepKind::Exterior(rows.len()),
            [2, rest @ ..] if rest.len() == n - 2 && rest.iter().all(|&r| r == 1) => RepKind::Adjoint,
            _ => {
                return Err(Error::Capability(format!(
                    "no matrix construction for the su({n}) representation {partition:?}"
                )))
            }
        };
        Self::new(n, kind)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dynkin_index(&self) -> Result<Rational64> {
        dynkin_index(self.n, &self.kind.partition(self.n))
    }

    /// `−tr(ρ̇(h)²)/⟨h, h⟩` for the first coroot, straight from the matrices.
    pub fn numeric_index(&self) -> Result<f64> {
        let algebra = LieAlgebraSpec::su(self.n)?;
        let h = algebra.coroot(0, 1);
        let rh = self.apply(&h)?;
        Ok(-(&rh * &rh).trace().re / algebra.inner(&h, &h))
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(Error::Dimension(format!(
                "expected a {0}x{0} matrix, got {1}x{2}",
                self.n,
                x.nrows(),
                x.ncols()
            )));
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for p in 0..self.n {
            for q in 0..self.n {
                let z: Complex64 = x[(p, q)];
                if z != Complex64::new(0.0, 0.0) {
                    out += &self.images[p * self.n + q] * z;
                }
            }
        }
        Ok(out)
    }

    pub fn push_field(&self, f: &LoopField) -> Result<LoopField> {
        let data = f.samples().iter().map(|m| self.apply(m)).collect::<Result<_>>()?;
        LoopField::from_samples(*f.grid(), self.dim, data)
    }

    pub fn push_pair(&self, p: &LoopHiggsPair) -> Result<LoopHiggsPair> {
        let a = p.a().iter().map(|f| self.push_field(f)).collect::<Result<_>>()?;
        LoopHiggsPair::new(a, self.push_field(p.phi())?)
    }

    pub fn push_connection(&self, conn: &LatticeConnection) -> Result<LatticeConnection> {
        let base = conn.a_base().iter().map(|f| self.push_field(f)).collect::<Result<_>>()?;
        LatticeConnection::new(self.push_field(conn.a_theta())?, base)
    }
}

fn check_dim(d: u128) -> Result<()> {
    if d > MAX_REP_DIM as u128 {
        return Err(Error::Capability(format!(
            "representation of dimension {d} exceeds the supported {MAX_REP_DIM}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, random_su_algebra};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_and_classical_indices() {
        for n in 2..=5 {
            assert_eq!(dynkin_index(n, &[1]).unwrap(), Rational64::from_integer(1));
            assert_eq!(dynkin_index(n, &[]).unwrap(), Rational64::from_integer(0));
            // adjoint index is the dual Coxeter number times two
            let adj = RepKind::Adjoint.partition(n);
            assert_eq!(dynkin_index(n, &adj).unwrap(), Rational64::from_integer(2 * n as i64));
        }
        assert_eq!(dynkin_index(2, &[2]).unwrap(), Rational64::from_integer(4));
        assert_eq!(dynkin_index(2, &[3]).unwrap(), Rational64::from_integer(10));
        assert_eq!(dynkin_index(3, &[1, 1, 1]).unwrap(), Rational64::from_integer(0));
    }

    #[test]
    fn index_matches_casimir_formula() {
        // ι = dim · C₂ / (n² − 1) with C₂ from the shifted content sum
        for n in 2..=4usize {
            for p in [vec![2], vec![1, 1], vec![3], vec![2, 1], vec![2, 2], vec![3, 1]] {
                if p.len() > n {
                    continue;
                }
                let dim = hook_content_dimension(n, &p).unwrap() as i64;
                let boxes: i64 = p.iter().map(|&r| r as i64).sum();
                let contents: i64 = p
                    .iter()
                    .enumerate()
                    .map(|(i, &r)| (0..r as i64).map(|j| j - i as i64).sum::<i64>())
                    .sum();
                let nn = n as i64;
                // n·C₂ = n²|λ| + 2n·Σ contents − |λ|²
                let c2_times_n = nn * nn * boxes + 2 * nn * contents - boxes * boxes;
                let expected = Rational64::new(dim * c2_times_n, nn * (nn * nn - 1));
                assert_eq!(dynkin_index(n, &p).unwrap(), expected, "n = {n}, {p:?}");
            }
        }
    }

    #[test]
    fn unsupported_weights() {
        assert!(matches!(dynkin_index(2, &[250]), Err(Error::Capability(_))));
        assert!(matches!(dynkin_index(2, &[1, 1, 1]), Err(Error::Argument(_))));
        assert!(matches!(Representation::from_partition(3, &[3, 1]), Err(Error::Capability(_))));
    }

    #[test]
    fn matrices_are_homomorphisms_with_the_right_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, kind) in [
            (2, RepKind::Fundamental),
            (2, RepKind::Adjoint),
            (2, RepKind::Symmetric(3)),
            (3, RepKind::Adjoint),
            (3, RepKind::Symmetric(2)),
            (4, RepKind::Exterior(2)),
            (3, RepKind::Trivial),
        ] {
            let rho = Representation::new(n, kind).unwrap();
            assert_eq!(rho.dim() as u128, hook_content_dimension(n, &kind.partition(n)).unwrap());
            let x = random_su_algebra(n, 1.0, &mut rng);
            let y = random_su_algebra(n, 1.0, &mut rng);
            let (rx, ry) = (rho.apply(&x).unwrap(), rho.apply(&y).unwrap());
            let lhs = rho.apply(&(&x * &y - &y * &x)).unwrap();
            assert!(max_abs(&(lhs - (&rx * &ry - &ry * &rx))) < 1e-12, "{kind:?}");
            assert!(max_abs(&(&rx + rx.adjoint())) < 1e-12);
            let iota = rational_f64(rho.dynkin_index().unwrap());
            assert!((rho.numeric_index().unwrap() - iota).abs() < 1e-12, "{kind:?}");
        }
    }
}
