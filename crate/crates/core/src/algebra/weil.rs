//! Invariant (Weil) polynomials on matrix algebras and their polarized
//! evaluation on matrices and on endomorphism-valued forms.

use smallvec::SmallVec;

use super::forms::{for_each_shuffle, EndForm, MultiIndex, ScalarForm};
use super::matrix::{pfaffian2, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A product of traces `Π tr(A^{m})`, or the 2×2 Pfaffian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Monomial {
    Traces(SmallVec<[usize; 4]>),
    Pfaffian,
}

impl Monomial {
    pub fn degree(&self) -> usize {
        match self {
            Monomial::Traces(parts) => parts.iter().sum(),
            Monomial::Pfaffian => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeilPolynomial<T> {
    name: String,
    degree: usize,
    terms: Vec<(T, Monomial)>,
}

impl<T: Real> WeilPolynomial<T> {
    pub fn new(name: impl Into<String>, terms: Vec<(T, Monomial)>) -> Result<Self> {
        let degree = terms.first().map_or(0, |(_, m)| m.degree());
        if let Some((_, m)) = terms.iter().find(|(_, m)| m.degree() != degree) {
            return Err(Error::InvalidArgument(format!(
                "inhomogeneous Weil polynomial: monomial {m:?} has degree {} != {degree}",
                m.degree()
            )));
        }
        Ok(Self {
            name: name.into(),
            degree,
            terms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(T, Monomial)] {
        &self.terms
    }

    pub fn has_pfaffian(&self) -> bool {
        self.terms.iter().any(|(_, m)| *m == Monomial::Pfaffian)
    }

    /// `f(A)` on a single matrix.
    pub fn evaluate(&self, a: &Matrix<T>) -> Result<T> {
        let max_power = self
            .terms
            .iter()
            .filter_map(|(_, m)| match m {
                Monomial::Traces(parts) => parts.iter().copied().max(),
                Monomial::Pfaffian => None,
            })
            .max()
            .unwrap_or(0);
        let traces = power_traces(a, max_power);
        let mut acc = T::zero();
        for (c, m) in &self.terms {
            let v = match m {
                Monomial::Traces(parts) => parts.iter().fold(T::one(), |p, &k| p * traces[k - 1]),
                Monomial::Pfaffian => {
                    if a.dim() != 2 {
                        return Err(Error::DimensionMismatch {
                            expected: 2,
                            found: a.dim(),
                        });
                    }
                    // linear extension of the Pfaffian to all of gl(2)
                    T::lit(0.5) * (a[(0, 1)] - a[(1, 0)])
                }
            };
            acc = acc + *c * v;
        }
        Ok(acc)
    }
}

/// `[tr A, tr A², …, tr A^max]`.
fn power_traces<T: Real>(a: &Matrix<T>, max: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(max);
    if max == 0 {
        return out;
    }
    out.push(a.trace());
    if max == 1 {
        return out;
    }
    out.push(a.trace_of_product(a));
    if max == 2 {
        return out;
    }
    let a2 = a * a;
    out.push(a2.trace_of_product(a));
    if max == 3 {
        return out;
    }
    out.push(a2.trace_of_product(&a2));
    let mut pow = &a2 * &a2;
    for _ in 5..=max {
        pow = &pow * a;
        out.push(pow.trace());
    }
    out
}

fn traces(parts: &[usize]) -> Monomial {
    Monomial::Traces(parts.iter().copied().collect())
}

/// Named polynomials: `p1`, `p2`, `t2`, `t4`, `t2sq`, `pfaff2`.
pub fn make_weil<T: Real>(name: &str) -> Result<WeilPolynomial<T>> {
    let pi2 = T::pi() * T::pi();
    let terms = match name {
        "t2" => vec![(T::one(), traces(&[2]))],
        "t4" => vec![(T::one(), traces(&[4]))],
        "t2sq" => vec![(T::one(), traces(&[2, 2]))],
        "p1" => vec![(-T::one() / (T::lit(8.0) * pi2), traces(&[2]))],
        "p2" => {
            let c = T::one() / (T::lit(128.0) * pi2 * pi2);
            vec![(c, traces(&[2, 2])), (-T::lit(2.0) * c, traces(&[4]))]
        }
        "pfaff2" => vec![(T::one(), Monomial::Pfaffian)],
        other => return Err(Error::UnknownWeil(other.to_string())),
    };
    WeilPolynomial::new(name, terms)
}

/// Symmetric multilinear form of `f` by inclusion–exclusion:
/// `(1/k!) Σ_{∅≠S⊆[k]} (−1)^{k−|S|} f(Σ_{i∈S} A_i)`.
pub fn polarize_eval<T: Real>(f: &WeilPolynomial<T>, mats: &[&Matrix<T>]) -> Result<T> {
    let k = f.degree();
    if mats.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: mats.len(),
        });
    }
    if k == 0 {
        return f.evaluate(&Matrix::zeros(0));
    }
    let dim = mats[0].dim();
    if let Some(m) = mats.iter().find(|m| m.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.dim(),
        });
    }
    if k == 1 {
        return f.evaluate(mats[0]);
    }
    let mut acc = T::zero();
    let mut sum = Matrix::zeros(dim);
    for subset in 1u32..(1 << k) {
        sum.as_mut_slice().iter_mut().for_each(|x| *x = T::zero());
        for (i, m) in mats.iter().enumerate() {
            if subset & (1 << i) != 0 {
                sum += *m;
            }
        }
        let v = f.evaluate(&sum)?;
        if (k - subset.count_ones() as usize) % 2 == 0 {
            acc = acc + v;
        } else {
            acc = acc - v;
        }
    }
    let factorial = (1..=k).fold(T::one(), |p, i| p * T::from_usize_lossy(i));
    Ok(acc / factorial)
}

/// `f(F₁, …, F_k)` for endomorphism-valued forms: on each increasing
/// multi-index of the total degree, the signed sum over shuffles of
/// `polarize_eval` on the matching coefficients.
///
/// Arguments that are the same form (by address) are summed once per
/// unordered choice of blocks and weighted, which is exact because the
/// polarization is symmetric and swapping two equal even-degree blocks
/// does not change the shuffle sign.
pub fn weil_eval_forms<T: Real>(
    f: &WeilPolynomial<T>,
    forms: &[&EndForm<T>],
) -> Result<ScalarForm<T>> {
    let k = f.degree();
    if forms.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: forms.len(),
        });
    }
    let Some(first) = forms.first() else {
        return Err(Error::InvalidArgument(
            "degree-0 polynomial has no form arguments".into(),
        ));
    };
    let m = first.space_dim();
    let dim = first.mat_dim();
    for f in forms {
        if f.space_dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: f.space_dim(),
            });
        }
        if f.mat_dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: f.mat_dim(),
            });
        }
    }
    let degrees: Vec<usize> = forms.iter().map(|f| f.degree()).collect();
    let total: usize = degrees.iter().sum();
    if total > m {
        return Err(Error::DegreeOverflow {
            degree: total,
            dim: m,
        });
    }
    // Runs of identical even-degree forms: only blocks in increasing order are
    // visited, each standing for `run!` orderings.
    let same = |a: usize, b: usize| {
        std::ptr::eq(forms[a], forms[b]) && degrees[a] > 0 && degrees[a] % 2 == 0
    };
    let mut weight = T::one();
    let mut run = 1usize;
    for i in 1..k {
        if same(i - 1, i) {
            run += 1;
            weight = weight * T::from_usize_lossy(run);
        } else {
            run = 1;
        }
    }
    let mut err = None;
    let out = ScalarForm::from_fn(total, m, |kidx| {
        let mut acc = T::zero();
        for_each_shuffle(kidx, &degrees, |blocks: &[MultiIndex], sign| {
            if (1..k).any(|i| same(i - 1, i) && blocks[i - 1] > blocks[i]) {
                return;
            }
            let mats: SmallVec<[&Matrix<T>; 8]> =
                forms.iter().zip(blocks).map(|(f, b)| f.coeff(b)).collect();
            match polarize_eval(f, &mats) {
                Ok(v) => acc = if sign > 0 { acc + v } else { acc - v },
                Err(e) => err = Some(e),
            }
        });
        acc * weight
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// The Pfaffian of the bilinear form `(u, v) ↦ g(Eu, v)` relative to the
/// `g`-volume, for a `g`-skew 2×2 endomorphism `E`.
pub fn pfaffian_g<T: Real>(g: &Matrix<T>, e: &Matrix<T>) -> Result<T> {
    let d = g.det();
    if !(d > T::zero()) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: g.symmetric_eigenvalues()[0].to_f64_lossy(),
        });
    }
    let form = &e.transpose() * g;
    let scale = e.max_abs() * g.max_abs();
    let defect = form.skew_defect();
    if defect > T::lit(1e-10) * scale.max(T::one()) {
        return Err(Error::NotSkew {
            asymmetry: defect.to_f64_lossy(),
        });
    }
    let skew = Matrix::from_fn(2, |i, j| T::lit(0.5) * (form[(i, j)] - form[(j, i)]));
    Ok(pfaffian2(&skew)? / d.sqrt())
}
