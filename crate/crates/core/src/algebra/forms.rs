//! Alternating forms with scalar or endomorphism coefficients.
//!
//! A `p`-form on an `m`-dimensional space is stored densely by its
//! coefficients on strictly increasing multi-indices `i₁ < … < i_p`
//! (lexicographic order), so antisymmetry holds by construction. The
//! coefficient on `I` is the value of the form on `(e_{i₁}, …, e_{i_p})`,
//! i.e. `(α∧β)(v, w) = α(v)β(w) − α(w)β(v)`.

use smallvec::SmallVec;

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub type MultiIndex = SmallVec<[usize; 8]>;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All strictly increasing `p`-tuples from `0..m`, lexicographic.
pub fn multi_indices(m: usize, p: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(binomial(m, p));
    let mut cur: MultiIndex = SmallVec::new();
    fn rec(start: usize, m: usize, p: usize, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, p, cur, out);
            cur.pop();
        }
    }
    rec(0, m, p, &mut cur, &mut out);
    out
}

/// Position of an increasing multi-index in [`multi_indices`] order.
pub fn rank(m: usize, idx: &[usize]) -> usize {
    let p = idx.len();
    let mut r = 0;
    let mut prev = 0usize;
    for (t, &i) in idx.iter().enumerate() {
        for v in prev..i {
            r += binomial(m - v - 1, p - t - 1);
        }
        prev = i + 1;
    }
    r
}

/// Sign of the permutation sorting `seq` (which must have distinct entries).
pub fn sort_sign(seq: &[usize]) -> i32 {
    let mut inversions = 0;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
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

/// Sorted copy and its sign, or `None` if an index repeats.
pub fn normalize(idx: &[usize]) -> Option<(MultiIndex, i32)> {
    let sign = sort_sign(idx);
    let mut sorted: MultiIndex = idx.iter().copied().collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sorted, sign))
}

/// Determinant of the `p×p` minor `[v_b[idx_a]]` (rows = index, cols = vector).
fn minor_det<T: Real>(idx: &[usize], vectors: &[&[T]]) -> T {
    match idx.len() {
        0 => T::one(),
        1 => vectors[0][idx[0]],
        2 => vectors[0][idx[0]] * vectors[1][idx[1]] - vectors[1][idx[0]] * vectors[0][idx[1]],
        p => {
            let m = Matrix::from_fn(p, |a, b| vectors[b][idx[a]]);
            m.det()
        }
    }
}

/// Enumerates every ordered split of the increasing tuple `k` into blocks
/// of the given sizes; `visit(blocks, sign)` receives the increasing blocks
/// and the sign of the shuffle taking their concatenation to `k`.
pub fn for_each_shuffle(k: &[usize], sizes: &[usize], mut visit: impl FnMut(&[MultiIndex], i32)) {
    debug_assert_eq!(k.len(), sizes.iter().sum::<usize>());
    let mut blocks: Vec<MultiIndex> = vec![SmallVec::new(); sizes.len()];
    let mut positions: Vec<usize> = Vec::with_capacity(k.len());
    fn rec(
        block: usize,
        remaining: &[usize],
        k: &[usize],
        sizes: &[usize],
        blocks: &mut Vec<MultiIndex>,
        positions: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[MultiIndex], i32),
    ) {
        if block == sizes.len() {
            visit(blocks, sort_sign(positions));
            return;
        }
        let size = sizes[block];
        for chosen in multi_indices(remaining.len(), size) {
            let mut rest: SmallVec<[usize; 8]> = SmallVec::new();
            blocks[block].clear();
            let mark = positions.len();
            let mut c = 0;
            for (t, &pos) in remaining.iter().enumerate() {
                if c < chosen.len() && chosen[c] == t {
                    blocks[block].push(k[pos]);
                    positions.push(pos);
                    c += 1;
                } else {
                    rest.push(pos);
                }
            }
            rec(block + 1, &rest, k, sizes, blocks, positions, visit);
            positions.truncate(mark);
        }
    }
    let all: SmallVec<[usize; 8]> = (0..k.len()).collect();
    rec(0, &all, k, sizes, &mut blocks, &mut positions, &mut visit);
}

/// Scalar-valued alternating form.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarForm<T> {
    degree: usize,
    space_dim: usize,
    coeffs: Vec<T>,
}

impl<T: Real> ScalarForm<T> {
    pub fn zero(degree: usize, space_dim: usize) -> Self {
        Self {
            degree,
            space_dim,
            coeffs: vec![T::zero(); binomial(space_dim, degree)],
        }
    }

    pub fn from_fn(degree: usize, space_dim: usize, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let coeffs = multi_indices(space_dim, degree)
            .iter()
            .map(|i| f(i))
            .collect();
        Self {
            degree,
            space_dim,
            coeffs,
        }
    }

    /// 1-form with the given components.
    pub fn covector(components: &[T]) -> Self {
        Self {
            degree: 1,
            space_dim: components.len(),
            coeffs: components.to_vec(),
        }
    }

    pub fn constant(value: T, space_dim: usize) -> Self {
        Self {
            degree: 0,
            space_dim,
            coeffs: vec![value],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient on an arbitrary (not necessarily sorted) index tuple.
    pub fn component(&self, idx: &[usize]) -> T {
        match normalize(idx) {
            None => T::zero(),
            Some((sorted, sign)) => {
                let c = self.coeffs[rank(self.space_dim, &sorted)];
                if sign > 0 {
                    c
                } else {
                    -c
                }
            }
        }
    }

    pub fn set(&mut self, sorted_idx: &[usize], value: T) {
        let r = rank(self.space_dim, sorted_idx);
        self.coeffs[r] = value;
    }

    /// Top-degree coefficient (requires `degree == space_dim`).
    pub fn top(&self) -> T {
        debug_assert_eq!(self.degree, self.space_dim);
        self.coeffs[0]
    }

    pub fn evaluate(&self, vectors: &[&[T]]) -> Result<T> {
        if vectors.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        let mut acc = T::zero();
        for (c, idx) in self
            .coeffs
            .iter()
            .zip(multi_indices(self.space_dim, self.degree))
        {
            if *c != T::zero() {
                acc = acc + *c * minor_det(&idx, vectors);
            }
        }
        Ok(acc)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.space_dim != other.space_dim {
            return Err(Error::DimensionMismatch {
                expected: self.space_dim,
                found: other.space_dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.space_dim {
            return Err(Error::DegreeOverflow {
                degree,
                dim: self.space_dim,
            });
        }
        let m = self.space_dim;
        Ok(Self::from_fn(degree, m, |k| {
            let mut acc = T::zero();
            for_each_shuffle(k, &[self.degree, other.degree], |blocks, sign| {
                let v = self.coeffs[rank(m, &blocks[0])] * other.coeffs[rank(m, &blocks[1])];
                acc = if sign > 0 { acc + v } else { acc - v };
            });
            acc
        }))
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(
            (self.degree, self.space_dim),
            (other.degree, other.space_dim)
        );
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a + b)
            .collect();
        Self {
            coeffs,
            ..self.clone()
        }
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }
}

/// Endomorphism-valued alternating form.
#[derive(Clone, Debug, PartialEq)]
pub struct EndForm<T: Real> {
    degree: usize,
    space_dim: usize,
    mat_dim: usize,
    coeffs: Vec<Matrix<T>>,
}

impl<T: Real> EndForm<T> {
    pub fn zero(degree: usize, space_dim: usize, mat_dim: usize) -> Self {
        Self {
            degree,
            space_dim,
            mat_dim,
            coeffs: vec![Matrix::zeros(mat_dim); binomial(space_dim, degree)],
        }
    }

    pub fn from_fn(
        degree: usize,
        space_dim: usize,
        mat_dim: usize,
        mut f: impl FnMut(&[usize]) -> Matrix<T>,
    ) -> Self {
        let coeffs = multi_indices(space_dim, degree)
            .iter()
            .map(|i| {
                let m = f(i);
                debug_assert_eq!(m.dim(), mat_dim);
                m
            })
            .collect();
        Self {
            degree,
            space_dim,
            mat_dim,
            coeffs,
        }
    }

    /// Endomorphism-valued 0-form.
    pub fn constant(value: Matrix<T>, space_dim: usize) -> Self {
        Self {
            degree: 0,
            space_dim,
            mat_dim: value.dim(),
            coeffs: vec![value],
        }
    }

    /// Decomposable form `A ⊗ α`.
    pub fn decomposable(a: &Matrix<T>, alpha: &ScalarForm<T>) -> Self {
        Self {
            degree: alpha.degree,
            space_dim: alpha.space_dim,
            mat_dim: a.dim(),
            coeffs: alpha.coeffs.iter().map(|&c| a.scale(c)).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn mat_dim(&self) -> usize {
        self.mat_dim
    }

    pub fn coeffs(&self) -> &[Matrix<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Matrix<T>] {
        &mut self.coeffs
    }

    #[inline]
    pub fn coeff(&self, sorted_idx: &[usize]) -> &Matrix<T> {
        &self.coeffs[rank(self.space_dim, sorted_idx)]
    }

    pub fn component(&self, idx: &[usize]) -> Matrix<T> {
        match normalize(idx) {
            None => Matrix::zeros(self.mat_dim),
            Some((sorted, sign)) => {
                let c = self.coeff(&sorted).clone();
                if sign > 0 {
                    c
                } else {
                    -c
                }
            }
        }
    }

    pub fn evaluate(&self, vectors: &[&[T]]) -> Result<Matrix<T>> {
        if vectors.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != self.space_dim) {
            return Err(Error::DimensionMismatch {
                expected: self.space_dim,
                found: v.len(),
            });
        }
        let mut acc = Matrix::zeros(self.mat_dim);
        for (c, idx) in self
            .coeffs
            .iter()
            .zip(multi_indices(self.space_dim, self.degree))
        {
            let d = minor_det(&idx, vectors);
            if d != T::zero() {
                acc.axpy(d, c);
            }
        }
        Ok(acc)
    }

    /// Pullback along the linear map sending the `a`-th basis vector to `vectors[a]`.
    pub fn restrict(&self, vectors: &[&[T]]) -> Result<Self> {
        let m = vectors.len();
        let mut err = None;
        let out = Self::from_fn(self.degree, m, self.mat_dim, |idx| {
            let picked: Vec<&[T]> = idx.iter().map(|&a| vectors[a]).collect();
            self.evaluate(&picked).unwrap_or_else(|e| {
                err = Some(e);
                Matrix::zeros(self.mat_dim)
            })
        });
        err.map_or(Ok(out), Err)
    }

    /// Applies `f` to every matrix coefficient (linear maps only).
    pub fn map(&self, mut f: impl FnMut(&Matrix<T>) -> Matrix<T>) -> Self {
        let coeffs: Vec<Matrix<T>> = self.coeffs.iter().map(&mut f).collect();
        let mat_dim = coeffs.first().map_or(self.mat_dim, |m| m.dim());
        Self {
            coeffs,
            mat_dim,
            ..self.clone()
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|m| m.scale(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(
            (self.degree, self.space_dim),
            (other.degree, other.space_dim)
        );
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            coeffs,
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    pub fn max_abs(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |m, c| m.max(c.max_abs()))
    }

    /// Wedge product with composition of values in argument order:
    /// `(F∧G)_K = Σ ± F_I · G_J`.
    pub fn wedge_compose(&self, other: &Self) -> Result<Self> {
        if self.space_dim != other.space_dim {
            return Err(Error::DimensionMismatch {
                expected: self.space_dim,
                found: other.space_dim,
            });
        }
        if self.mat_dim != other.mat_dim {
            return Err(Error::DimensionMismatch {
                expected: self.mat_dim,
                found: other.mat_dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.space_dim {
            return Err(Error::DegreeOverflow {
                degree,
                dim: self.space_dim,
            });
        }
        let m = self.space_dim;
        Ok(Self::from_fn(degree, m, self.mat_dim, |k| {
            let mut acc = Matrix::zeros(self.mat_dim);
            for_each_shuffle(k, &[self.degree, other.degree], |blocks, sign| {
                let prod = &self.coeffs[rank(m, &blocks[0])] * &other.coeffs[rank(m, &blocks[1])];
                acc.axpy(T::from_f64(sign as f64).unwrap(), &prod);
            });
            acc
        }))
    }

    pub fn trace(&self) -> ScalarForm<T> {
        ScalarForm {
            degree: self.degree,
            space_dim: self.space_dim,
            coeffs: self.coeffs.iter().map(|c| c.trace()).collect(),
        }
    }
}

/// `tr(F₁ ∧ F₂ ∧ … ∧ F_k)` with values composed in argument order.
pub fn trace_wedge<T: Real>(forms: &[&EndForm<T>]) -> Result<ScalarForm<T>> {
    let (first, rest) = forms
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("trace_wedge needs at least one form".into()))?;
    let mut acc = (*first).clone();
    for f in rest {
        acc = acc.wedge_compose(f)?;
    }
    Ok(acc.trace())
}
