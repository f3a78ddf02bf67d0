//! Coefficient arrays of multilinear forms and their nested mixed norms.
//!
//! An order-`m` form is stored as the flat row-major array of its
//! coefficients, slot 1 slowest. Rectangular shapes are allowed: the
//! phase-grid lift used by the verifiers has a first slot of length
//! `M^{Nm}` next to slots of length `N`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponent::Exponent;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Coefficient array `a_{i1..im}` of an `m`-linear form.
///
/// Immutable after construction; all entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTensor {
    shape: Vec<usize>,
    data: Vec<Complex64>,
}

impl ComplexTensor {
    /// Builds a tensor from its shape and flat row-major coefficients
    /// (slot 1 slowest, last slot fastest).
    pub fn new(shape: Vec<usize>, data: Vec<Complex64>) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::Usage("tensor needs at least one slot".into()));
        }
        if shape.iter().any(|&n| n == 0) {
            return Err(Error::Usage(format!("zero-length slot in shape {shape:?}")));
        }
        let count: usize = shape.iter().product();
        if data.len() != count {
            return Err(Error::Usage(format!(
                "shape {shape:?} needs {count} coefficients, got {}",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("tensor coefficients must be finite".into()));
        }
        Ok(Self { shape, data })
    }

    /// Builds a tensor by evaluating `f` at every multi-index.
    pub fn from_fn<F: FnMut(&[usize]) -> Complex64>(shape: Vec<usize>, mut f: F) -> Result<Self> {
        let count: usize = shape.iter().product();
        let mut idx = vec![0usize; shape.len()];
        let mut data = Vec::with_capacity(count);
        for _ in 0..count {
            data.push(f(&idx));
            for k in (0..shape.len()).rev() {
                idx[k] += 1;
                if idx[k] == shape[k] {
                    idx[k] = 0;
                } else {
                    break;
                }
            }
        }
        Self::new(shape, data)
    }

    /// Number of slots `m`.
    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// The tensor scaled by a complex constant.
    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// Evaluates the form at one vector per slot (exact multilinear
    /// contraction).
    pub fn evaluate(&self, xs: &[&[Complex64]]) -> Result<Complex64> {
        if xs.len() != self.order() {
            return Err(Error::Usage(format!(
                "form of order {} applied to {} vectors",
                self.order(),
                xs.len()
            )));
        }
        for (j, x) in xs.iter().enumerate() {
            if x.len() != self.shape[j] {
                return Err(Error::Usage(format!(
                    "slot {} expects a vector of length {}, got {}",
                    j + 1,
                    self.shape[j],
                    x.len()
                )));
            }
        }
        let mut cur = self.data.clone();
        for x in xs {
            cur = contract_first_axis(&cur, x);
        }
        debug_assert_eq!(cur.len(), 1);
        Ok(cur[0])
    }

    /// Frobenius norm `(Σ |a|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Nested mixed sequence norm with a slot permutation.
    ///
    /// The innermost sum runs over slot `sigma(m)` with exponent `t_m`,
    /// the outermost over slot `sigma(1)` with exponent `t_1`. An
    /// exponent of `inf` takes the maximum. Exponents below 1 are
    /// evaluated as formal power sums (no triangle inequality is implied).
    pub fn mixed_norm(&self, spec: &MixedNormSpec) -> Result<f64> {
        let m = self.order();
        if spec.len() != m {
            return Err(Error::Usage(format!(
                "mixed norm spec for {} slots applied to an order-{} tensor",
                spec.len(),
                m
            )));
        }
        let mut dims = self.shape.clone();
        let mut axes: Vec<usize> = (0..m).collect();
        let mut cur: Vec<f64> = self.data.iter().map(|z| z.norm()).collect();
        for level in (0..m).rev() {
            let target = spec.sigma[level];
            let pos = axes
                .iter()
                .position(|&a| a == target)
                .expect("sigma is a bijection over the slots");
            cur = reduce_axis(&cur, &dims, pos, spec.t[level]);
            dims.remove(pos);
            axes.remove(pos);
        }
        debug_assert_eq!(cur.len(), 1);
        Ok(cur[0])
    }

    /// Permutes the slots: entry `perm[k]` is the original axis placed at
    /// position `k`.
    pub(crate) fn transpose(&self, perm: &[usize]) -> ComplexTensor {
        debug_assert_eq!(perm.len(), self.order());
        let m = self.order();
        let new_shape: Vec<usize> = perm.iter().map(|&a| self.shape[a]).collect();
        // strides of the original layout
        let mut strides = vec![1usize; m];
        for k in (0..m.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.shape[k + 1];
        }
        let count = self.data.len();
        let mut out = Vec::with_capacity(count);
        let mut idx = vec![0usize; m];
        for _ in 0..count {
            let mut off = 0;
            for k in 0..m {
                off += idx[k] * strides[perm[k]];
            }
            out.push(self.data[off]);
            for k in (0..m).rev() {
                idx[k] += 1;
                if idx[k] == new_shape[k] {
                    idx[k] = 0;
                } else {
                    break;
                }
            }
        }
        ComplexTensor { shape: new_shape, data: out }
    }

    /// Zero-pads every slot to the common length `n`.
    pub(crate) fn zero_pad_to(&self, n: usize) -> ComplexTensor {
        if self.shape.iter().all(|&d| d == n) {
            return self.clone();
        }
        let m = self.order();
        let shape = vec![n; m];
        let mut data = vec![Complex64::new(0.0, 0.0); n.pow(m as u32)];
        let mut idx = vec![0usize; m];
        for &z in &self.data {
            let mut off = 0;
            for k in 0..m {
                off = off * n + idx[k];
            }
            data[off] = z;
            for k in (0..m).rev() {
                idx[k] += 1;
                if idx[k] == self.shape[k] {
                    idx[k] = 0;
                } else {
                    break;
                }
            }
        }
        ComplexTensor { shape, data }
    }
}

/// Contracts the leading axis with `x`: views `data` as `(n, rest)` and
/// returns the length-`rest` array `out[r] = Σ_i x[i]·data[i·rest + r]`.
pub(crate) fn contract_first_axis(data: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    debug_assert!(n > 0 && data.len() % n == 0);
    let rest = data.len() / n;
    let mut out = vec![Complex64::new(0.0, 0.0); rest];
    for (i, &xi) in x.iter().enumerate() {
        let row = &data[i * rest..(i + 1) * rest];
        for (o, &v) in out.iter_mut().zip(row) {
            *o += xi * v;
        }
    }
    out
}

/// Reuses a caller-provided buffer for [`contract_first_axis`].
pub(crate) fn contract_first_axis_into(
    data: &[Complex64],
    x: &[Complex64],
    out: &mut Vec<Complex64>,
) {
    let n = x.len();
    let rest = data.len() / n;
    out.clear();
    out.resize(rest, Complex64::new(0.0, 0.0));
    for (i, &xi) in x.iter().enumerate() {
        let row = &data[i * rest..(i + 1) * rest];
        for (o, &v) in out.iter_mut().zip(row) {
            *o += xi * v;
        }
    }
}

/// ℓ_t reduction of a nonnegative array along one axis.
fn reduce_axis(data: &[f64], dims: &[usize], pos: usize, t: Exponent) -> Vec<f64> {
    let n = dims[pos];
    let inner: usize = dims[pos + 1..].iter().product();
    let outer: usize = dims[..pos].iter().product();
    let mut out = vec![0.0f64; outer * inner];
    for o in 0..outer {
        for i in 0..inner {
            let at = |k: usize| data[(o * n + k) * inner + i];
            let v = if t.is_infinite() {
                let mut best = 0.0f64;
                for k in 0..n {
                    best = best.max(at(k));
                }
                best
            } else {
                let tv = t.value();
                let mut acc = 0.0f64;
                if tv == 1.0 {
                    for k in 0..n {
                        acc += at(k);
                    }
                    acc
                } else if tv == 2.0 {
                    for k in 0..n {
                        acc += at(k) * at(k);
                    }
                    acc.sqrt()
                } else {
                    for k in 0..n {
                        acc += at(k).powf(tv);
                    }
                    acc.powf(1.0 / tv)
                }
            };
            out[o * inner + i] = v;
        }
    }
    out
}

/// Slot permutation and exponents for a nested mixed norm.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedNormSpec {
    /// Visit order of the slots (0-based): `sigma[0]` is the outermost
    /// summation axis, `sigma[m-1]` the innermost.
    sigma: Vec<usize>,
    /// Per-level exponents, outermost first.
    t: Vec<Exponent>,
    /// Domain exponents of the underlying spaces (metadata; used for the
    /// derived `lambda`).
    p: Vec<Exponent>,
}

impl MixedNormSpec {
    pub fn new(sigma: Vec<usize>, t: Vec<Exponent>, p: Vec<Exponent>) -> Result<Self> {
        let m = sigma.len();
        if t.len() != m || p.len() != m {
            return Err(Error::Usage(format!(
                "mismatched spec lengths: sigma {m}, t {}, p {}",
                t.len(),
                p.len()
            )));
        }
        let mut seen = vec![false; m];
        for &s in &sigma {
            if s >= m || seen[s] {
                return Err(Error::Usage(format!("sigma {sigma:?} is not a permutation")));
            }
            seen[s] = true;
        }
        Ok(Self { sigma, t, p })
    }

    /// Identity visit order with the given exponents; domain exponents
    /// default to `inf`.
    pub fn with_identity(t: Vec<Exponent>) -> Result<Self> {
        let m = t.len();
        Self::new((0..m).collect(), t, vec![Exponent::INF; m])
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn t(&self) -> &[Exponent] {
        &self.t
    }

    pub fn p(&self) -> &[Exponent] {
        &self.p
    }

    /// `lambda = (1 - Σ 1/p_j)^{-1}` when `Σ 1/p_j < 1`, else `None`.
    pub fn lambda(&self) -> Option<f64> {
        let s: f64 = self.p.iter().map(|e| e.recip()).sum();
        if s < 1.0 {
            Some(1.0 / (1.0 - s))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn littlewood_matrix() -> ComplexTensor {
        ComplexTensor::new(
            vec![2, 2],
            vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)],
        )
        .unwrap()
    }

    fn identity2() -> ComplexTensor {
        ComplexTensor::new(
            vec![2, 2],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(ComplexTensor::new(vec![], vec![]).is_err());
        assert!(ComplexTensor::new(vec![2, 0], vec![]).is_err());
        assert!(ComplexTensor::new(vec![2], vec![c(1.0, 0.0)]).is_err());
        assert!(ComplexTensor::new(vec![1], vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let e1 = [c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = [c(0.0, 0.0), c(1.0, 0.0)];
        let id = identity2();
        assert_eq!(id.evaluate(&[&e1, &e1]).unwrap(), c(1.0, 0.0));

        let t = littlewood_matrix();
        let zero = [c(0.0, 0.0), c(0.0, 0.0)];
        assert_eq!(t.evaluate(&[&e1, &zero]).unwrap(), c(0.0, 0.0));
        // picks a_{12}
        assert_eq!(t.evaluate(&[&e1, &e2]).unwrap(), c(1.0, 0.0));

        assert!(t.evaluate(&[&e1]).is_err());
        assert!(t.evaluate(&[&e1, &e1[..1]]).is_err());
    }

    #[test]
    fn mixed_norm_examples() {
        let spec12 =
            MixedNormSpec::with_identity(vec![Exponent::ONE, Exponent::TWO]).unwrap();
        assert!((identity2().mixed_norm(&spec12).unwrap() - 2.0).abs() < 1e-15);

        let lw = littlewood_matrix();
        let two_sqrt2 = 2.0 * 2.0f64.sqrt();
        assert!((lw.mixed_norm(&spec12).unwrap() - two_sqrt2).abs() < 1e-14);

        let ft = Exponent::new(4.0 / 3.0).unwrap();
        let spec43 = MixedNormSpec::with_identity(vec![ft, ft]).unwrap();
        assert!((lw.mixed_norm(&spec43).unwrap() - two_sqrt2).abs() < 1e-14);
    }

    #[test]
    fn l2_norm_examples() {
        let pair = ComplexTensor::new(vec![2, 2], vec![c(1.0, 0.0); 4]).unwrap();
        assert!((pair.l2_norm() - 2.0).abs() < 1e-15);

        let n = 4usize;
        let uniform = ComplexTensor::from_fn(vec![n; 3], |_| {
            c(1.0 / (n as f64).powf(1.5), 0.0)
        })
        .unwrap();
        assert!((uniform.l2_norm() - 1.0).abs() < 1e-14);

        let zero = ComplexTensor::new(vec![2, 3], vec![c(0.0, 0.0); 6]).unwrap();
        assert_eq!(zero.l2_norm(), 0.0);
    }

    #[test]
    fn mixed_norm_with_max_exponent() {
        let lw = littlewood_matrix();
        let spec = MixedNormSpec::with_identity(vec![Exponent::INF, Exponent::ONE]).unwrap();
        // rows have l1 norm 2; max over rows is 2
        assert!((lw.mixed_norm(&spec).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn transpose_roundtrip() {
        let t = ComplexTensor::from_fn(vec![2, 3, 4], |idx| {
            c(idx[0] as f64 + 10.0 * idx[1] as f64, idx[2] as f64)
        })
        .unwrap();
        let u = t.transpose(&[2, 0, 1]);
        assert_eq!(u.shape(), &[4, 2, 3]);
        let back = u.transpose(&[1, 2, 0]);
        assert_eq!(back, t);
    }

    #[test]
    fn zero_pad_preserves_entries() {
        let t = ComplexTensor::new(
            vec![1, 2],
            vec![c(1.0, 2.0), c(3.0, 4.0)],
        )
        .unwrap();
        let p = t.zero_pad_to(2);
        assert_eq!(p.shape(), &[2, 2]);
        assert_eq!(p.data()[0], c(1.0, 2.0));
        assert_eq!(p.data()[1], c(3.0, 4.0));
        assert_eq!(p.data()[2], c(0.0, 0.0));
        assert_eq!(p.l2_norm(), t.l2_norm());
    }

    #[test]
    fn sigma_validation() {
        assert!(MixedNormSpec::new(
            vec![0, 0],
            vec![Exponent::ONE; 2],
            vec![Exponent::INF; 2]
        )
        .is_err());
        let spec = MixedNormSpec::with_identity(vec![Exponent::ONE]).unwrap();
        assert!(littlewood_matrix().mixed_norm(&spec).is_err());
    }

    #[test]
    fn lambda_derivation() {
        let p4 = Exponent::new(4.0).unwrap();
        let spec =
            MixedNormSpec::new(vec![0, 1], vec![Exponent::TWO; 2], vec![p4, Exponent::INF])
                .unwrap();
        assert!((spec.lambda().unwrap() - 4.0 / 3.0).abs() < 1e-15);
        let bad = MixedNormSpec::new(vec![0, 1], vec![Exponent::TWO; 2], vec![Exponent::ONE; 2])
            .unwrap();
        assert_eq!(bad.lambda(), None);
    }
}
