//! Dense tensors of rank 0..=4 over 4-D Minkowski spacetime.
//!
//! Every tensor carries a per-slot [`Variance`] tag. Contractions refuse to
//! pair two slots of the same variance, so raise/lower bookkeeping is checked
//! rather than assumed. The metric is `diag(+1,-1,-1,-1)` and the alternating
//! tensor has `ε^{0123} = -1`.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::TensorError;
use crate::scalar::Scalar;

/// Spacetime dimension.
pub const DIM: usize = 4;
/// Highest supported tensor rank.
pub const MAX_RANK: usize = 4;
/// Diagonal of the metric in both upper-upper and lower-lower form.
pub const SIGNATURE: [i64; DIM] = [1, -1, -1, -1];
/// Value of the contravariant alternating tensor at `(0,1,2,3)`.
pub const EPSILON_UPPER_0123: i64 = -1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Upper,
    Lower,
}

impl Variance {
    pub fn flipped(self) -> Self {
        match self {
            Variance::Upper => Variance::Lower,
            Variance::Lower => Variance::Upper,
        }
    }
}

use Variance::{Lower, Upper};

#[derive(Clone, PartialEq)]
pub struct SmallTensor<S> {
    variance: Vec<Variance>,
    components: Vec<S>,
}

fn flat_index(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| {
        debug_assert!(i < DIM);
        acc * DIM + i
    })
}

fn multi_index(mut flat: usize, rank: usize) -> [usize; MAX_RANK + 2] {
    let mut idx = [0; MAX_RANK + 2];
    for slot in (0..rank).rev() {
        idx[slot] = flat % DIM;
        flat /= DIM;
    }
    idx
}

fn len_for(rank: usize) -> usize {
    DIM.pow(rank as u32)
}

impl<S: Scalar> SmallTensor<S> {
    pub fn zeros(variance: &[Variance]) -> Result<Self, TensorError> {
        if variance.len() > MAX_RANK {
            return Err(TensorError::RankExceeded(variance.len()));
        }
        Ok(Self {
            variance: variance.to_vec(),
            components: vec![S::zero(); len_for(variance.len())],
        })
    }

    pub fn scalar(value: S) -> Self {
        Self { variance: Vec::new(), components: vec![value] }
    }

    pub fn from_fn(variance: &[Variance], mut f: impl FnMut(&[usize]) -> S) -> Result<Self, TensorError> {
        let mut t = Self::zeros(variance)?;
        let rank = variance.len();
        for flat in 0..t.components.len() {
            let idx = multi_index(flat, rank);
            t.components[flat] = f(&idx[..rank]);
        }
        Ok(t)
    }

    pub fn from_components(variance: &[Variance], components: Vec<S>) -> Result<Self, TensorError> {
        if variance.len() > MAX_RANK {
            return Err(TensorError::RankExceeded(variance.len()));
        }
        let expected = len_for(variance.len());
        if components.len() != expected {
            return Err(TensorError::LengthMismatch { expected, found: components.len() });
        }
        Ok(Self { variance: variance.to_vec(), components })
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn components(&self) -> &[S] {
        &self.components
    }

    pub fn get(&self, idx: &[usize]) -> S {
        assert_eq!(idx.len(), self.rank(), "index arity does not match tensor rank");
        self.components[flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: S) {
        assert_eq!(idx.len(), self.rank(), "index arity does not match tensor rank");
        self.components[flat_index(idx)] = value;
    }

    /// The rank-0 value.
    pub fn to_scalar(&self) -> Option<S> {
        (self.rank() == 0).then(|| self.components[0])
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        Self {
            variance: self.variance.clone(),
            components: self.components.iter().map(|&c| f(c)).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Result<Self, TensorError> {
        if self.variance != other.variance {
            return Err(TensorError::VarianceMismatch);
        }
        Ok(Self {
            variance: self.variance.clone(),
            components: self.components.iter().zip(&other.components).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip_with(other, |a, b| if b.is_zero() { a } else if a.is_zero() { b } else { a + b })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip_with(other, |a, b| if b.is_zero() { a } else { a - b })
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|c| if c.is_zero() { c } else { s * c })
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    /// Componentwise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn re_part(&self) -> Self {
        self.map(|c| c.re())
    }

    pub fn im_part(&self) -> Self {
        self.map(|c| c.im())
    }

    /// Reorders slots: `out[i_0, .., i_{r-1}] = self[i_{perm[0]}, .., i_{perm[r-1]}]`.
    /// Variance tags travel with their slots.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, TensorError> {
        let rank = self.rank();
        let mut seen = [false; MAX_RANK];
        if perm.len() != rank || perm.iter().any(|&p| p >= rank || std::mem::replace(&mut seen[p], true)) {
            return Err(TensorError::BadPermutation);
        }
        // out slot k corresponds to self slot j where perm[j] == k
        let mut variance = vec![Upper; rank];
        for (j, &p) in perm.iter().enumerate() {
            variance[p] = self.variance[j];
        }
        let mut out = Self::zeros(&variance)?;
        for flat in 0..out.components.len() {
            let idx = multi_index(flat, rank);
            let mut src = [0usize; MAX_RANK];
            for j in 0..rank {
                src[j] = idx[perm[j]];
            }
            out.components[flat] = self.components[flat_index(&src[..rank])];
        }
        Ok(out)
    }

    /// Raises or lowers one slot by contraction with the metric.
    pub fn adjust_index(&self, slot: usize, to: Variance) -> Result<Self, TensorError> {
        let rank = self.rank();
        if slot >= rank {
            return Err(TensorError::SlotOutOfRange { slot, rank });
        }
        if self.variance[slot] == to {
            return Ok(self.clone());
        }
        // the metric is diagonal with entries ±1 both ways
        let mut out = self.clone();
        out.variance[slot] = to;
        for (flat, c) in out.components.iter_mut().enumerate() {
            if SIGNATURE[multi_index(flat, rank)[slot]] < 0 {
                *c = -*c;
            }
        }
        Ok(out)
    }

    /// Brings every slot to the requested variances.
    pub fn with_variance(&self, target: &[Variance]) -> Result<Self, TensorError> {
        if target.len() != self.rank() {
            return Err(TensorError::VarianceMismatch);
        }
        let mut out = self.clone();
        for (slot, &v) in target.iter().enumerate() {
            out = out.adjust_index(slot, v)?;
        }
        Ok(out)
    }

    pub fn all_upper(&self) -> Self {
        self.with_variance(&vec![Upper; self.rank()]).expect("rank-consistent variance")
    }

    pub fn all_lower(&self) -> Self {
        self.with_variance(&vec![Lower; self.rank()]).expect("rank-consistent variance")
    }

    /// Trace over two slots of opposite variance.
    pub fn contract(&self, slot_a: usize, slot_b: usize) -> Result<Self, TensorError> {
        let rank = self.rank();
        for slot in [slot_a, slot_b] {
            if slot >= rank {
                return Err(TensorError::SlotOutOfRange { slot, rank });
            }
        }
        if slot_a == slot_b {
            return Err(TensorError::SameSlot(slot_a));
        }
        if self.variance[slot_a] == self.variance[slot_b] {
            return Err(TensorError::SameVariance { slot_a, slot_b });
        }
        let free: Vec<usize> = (0..rank).filter(|&s| s != slot_a && s != slot_b).collect();
        let variance: Vec<Variance> = free.iter().map(|&s| self.variance[s]).collect();
        let mut out = Self::zeros(&variance)?;
        for flat in 0..out.components.len() {
            let idx = multi_index(flat, free.len());
            let mut src = [0usize; MAX_RANK];
            for (k, &s) in free.iter().enumerate() {
                src[s] = idx[k];
            }
            let mut acc = S::zero();
            for m in 0..DIM {
                src[slot_a] = m;
                src[slot_b] = m;
                acc = acc + self.components[flat_index(&src[..rank])];
            }
            out.components[flat] = acc;
        }
        Ok(out)
    }

    /// Tensor product; variance tags are concatenated.
    pub fn outer(&self, other: &Self) -> Result<Self, TensorError> {
        self.tensordot(other, &[])
    }

    /// Tensor product followed by contraction of each `(slot_in_self,
    /// slot_in_other)` pair. Free slots of `self` come first, then free slots
    /// of `other`. Paired slots must have opposite variance.
    pub fn tensordot(&self, other: &Self, pairs: &[(usize, usize)]) -> Result<Self, TensorError> {
        let (ra, rb) = (self.rank(), other.rank());
        for &(a, b) in pairs {
            if a >= ra {
                return Err(TensorError::SlotOutOfRange { slot: a, rank: ra });
            }
            if b >= rb {
                return Err(TensorError::SlotOutOfRange { slot: b, rank: rb });
            }
            if self.variance[a] == other.variance[b] {
                return Err(TensorError::SameVariance { slot_a: a, slot_b: ra + b });
            }
        }
        let paired_a: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let paired_b: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        if has_duplicates(&paired_a) || has_duplicates(&paired_b) {
            return Err(TensorError::SameSlot(paired_a.first().copied().unwrap_or(0)));
        }
        let free_a: Vec<usize> = (0..ra).filter(|s| !paired_a.contains(s)).collect();
        let free_b: Vec<usize> = (0..rb).filter(|s| !paired_b.contains(s)).collect();
        let out_rank = free_a.len() + free_b.len();
        if out_rank > MAX_RANK {
            return Err(TensorError::RankExceeded(out_rank));
        }
        let variance: Vec<Variance> = free_a
            .iter()
            .map(|&s| self.variance[s])
            .chain(free_b.iter().map(|&s| other.variance[s]))
            .collect();
        let mut out = Self::zeros(&variance)?;
        let b_nonzero: Vec<(usize, [usize; MAX_RANK + 2])> = other
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(f, _)| (f, multi_index(f, rb)))
            .collect();
        for (fa, ca) in self.components.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ia = multi_index(fa, ra);
            for (fb, ib) in &b_nonzero {
                if pairs.iter().any(|&(a, b)| ia[a] != ib[b]) {
                    continue;
                }
                let mut dst = 0;
                for &s in &free_a {
                    dst = dst * DIM + ia[s];
                }
                for &s in &free_b {
                    dst = dst * DIM + ib[s];
                }
                let term = *ca * other.components[*fb];
                let slot = &mut out.components[dst];
                *slot = if slot.is_zero() { term } else { *slot + term };
            }
        }
        Ok(out)
    }

    /// Componentwise comparison; variance tags must agree.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.variance == other.variance
            && self.components.iter().zip(&other.components).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.components.iter().all(|c| c.approx_eq(&S::zero(), tol))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.components.iter().all(|c| c.is_real(tol))
    }

    /// Largest component magnitude.
    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Largest componentwise distance, ignoring variance tags.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.components.iter().zip(&other.components).map(|(a, b)| (*a - *b).magnitude()).fold(0.0, f64::max)
    }

    /// Converts to the float backend.
    pub fn to_c64(&self) -> SmallTensor<crate::scalar::Complex64> {
        SmallTensor {
            variance: self.variance.clone(),
            components: self.components.iter().map(|c| c.to_c64()).collect(),
        }
    }
}

fn has_duplicates(v: &[usize]) -> bool {
    v.iter().enumerate().any(|(i, x)| v[..i].contains(x))
}

impl<S: Scalar, const N: usize> Index<[usize; N]> for SmallTensor<S> {
    type Output = S;

    fn index(&self, idx: [usize; N]) -> &S {
        assert_eq!(N, self.rank(), "index arity does not match tensor rank");
        &self.components[flat_index(&idx)]
    }
}

impl<S: fmt::Debug> fmt::Debug for SmallTensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmallTensor")
            .field("variance", &self.variance)
            .field("components", &self.components)
            .finish()
    }
}

/// The metric in the requested variance. Mixed variance gives the Kronecker delta.
pub fn metric<S: Scalar>(variance: [Variance; 2]) -> SmallTensor<S> {
    SmallTensor::from_fn(&variance, |idx| {
        if idx[0] != idx[1] {
            S::zero()
        } else if variance[0] == variance[1] {
            S::from_int(SIGNATURE[idx[0]])
        } else {
            S::one()
        }
    })
    .expect("rank 2")
}

/// Sign of the permutation `idx` of `0..4`, or 0 if any index repeats.
pub fn permutation_sign(idx: &[usize; 4]) -> i64 {
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] == idx[j] {
                return 0;
            }
        }
    }
    let mut sign = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// The rank-4 alternating tensor, all slots in `variance`.
///
/// The lower form is derived from the upper one by four metric contractions.
pub fn levi_civita4<S: Scalar>(variance: Variance) -> SmallTensor<S> {
    let upper = SmallTensor::from_fn(&[Upper; 4], |idx| {
        S::from_int(EPSILON_UPPER_0123 * permutation_sign(&[idx[0], idx[1], idx[2], idx[3]]))
    })
    .expect("rank 4");
    match variance {
        Upper => upper,
        Lower => upper.all_lower(),
    }
}

/// Precomputed constant tensors, one instance per backend (see
/// [`Scalar::constants`]).
#[derive(Debug, Clone)]
pub struct Constants<S> {
    pub metric_upper: SmallTensor<S>,
    pub metric_lower: SmallTensor<S>,
    pub delta: SmallTensor<S>,
    pub eps_upper: SmallTensor<S>,
    pub eps_lower: SmallTensor<S>,
    /// `ε^{αβ}{}_{μν}`, the bivector dual operator.
    pub eps_dual: SmallTensor<S>,
    /// `ε_μ{}^{βγδ}`.
    pub eps_first_lower: SmallTensor<S>,
}

impl<S: Scalar> Constants<S> {
    pub fn build() -> Self {
        let eps_upper = levi_civita4::<S>(Upper);
        Self {
            metric_upper: metric([Upper, Upper]),
            metric_lower: metric([Lower, Lower]),
            delta: metric([Upper, Lower]),
            eps_lower: levi_civita4(Lower),
            eps_dual: eps_upper.with_variance(&[Upper, Upper, Lower, Lower]).expect("rank 4"),
            eps_first_lower: eps_upper.adjust_index(0, Lower).expect("rank 4"),
            eps_upper,
        }
    }
}

/// Dual of an all-contravariant rank-2 tensor: `½ ε^{αβ}{}_{μν} X^{μν}`.
pub fn dual2<S: Scalar>(x: &SmallTensor<S>) -> Result<SmallTensor<S>, TensorError> {
    dual2_with(x, &S::constants().eps_dual)
}

/// [`dual2`] with an explicit `ε^{αβ}{}_{μν}` operator.
pub fn dual2_with<S: Scalar>(x: &SmallTensor<S>, eps_dual: &SmallTensor<S>) -> Result<SmallTensor<S>, TensorError> {
    Ok(eps_dual.tensordot(x, &[(2, 0), (3, 1)])?.scale(S::from_ratio(1, 2)))
}

/// Dual over the two leftmost slots of an all-contravariant rank-4 tensor.
pub fn dual_left<S: Scalar>(x: &SmallTensor<S>) -> Result<SmallTensor<S>, TensorError> {
    let eps = &S::constants().eps_dual;
    Ok(eps.tensordot(x, &[(2, 0), (3, 1)])?.scale(S::from_ratio(1, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Complex64, GaussianRational};

    type Q = GaussianRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn levi_civita_values() {
        let up = levi_civita4::<Q>(Upper);
        assert_eq!(up[[0, 1, 2, 3]], q(-1));
        assert_eq!(up[[0, 0, 1, 2]], q(0));
        assert_eq!(up[[1, 0, 2, 3]], q(1));
        let down = levi_civita4::<Q>(Lower);
        assert_eq!(down[[0, 1, 2, 3]], q(1));
    }

    #[test]
    fn epsilon_full_contraction_is_minus_24() {
        let up = levi_civita4::<Q>(Upper);
        let down = levi_civita4::<Q>(Lower);
        let full = up.tensordot(&down, &[(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap();
        assert_eq!(full.to_scalar(), Some(q(-24)));
    }

    #[test]
    fn metric_inverse_and_delta() {
        let gu = metric::<Q>([Upper, Upper]);
        let gl = metric::<Q>([Lower, Lower]);
        let prod = gu.tensordot(&gl, &[(1, 0)]).unwrap();
        assert_eq!(prod, metric([Upper, Lower]));
        // lowering one slot of g^{αβ} yields δ
        assert_eq!(gu.adjust_index(1, Lower).unwrap(), metric([Upper, Lower]));
        assert_eq!(gu[[0, 0]], q(1));
        assert_eq!(gl[[2, 2]], q(-1));
    }

    #[test]
    fn trace_of_delta_is_dimension() {
        let d = metric::<Q>([Upper, Lower]);
        assert_eq!(d.contract(0, 1).unwrap().to_scalar(), Some(q(4)));
    }

    #[test]
    fn adjust_index_round_trip_and_errors() {
        let t = SmallTensor::<Q>::from_fn(&[Upper, Upper], |i| q((i[0] * 4 + i[1]) as i64)).unwrap();
        let back = t.adjust_index(1, Lower).unwrap().adjust_index(1, Upper).unwrap();
        assert_eq!(back, t);
        assert!(matches!(t.adjust_index(2, Lower), Err(TensorError::SlotOutOfRange { .. })));
    }

    #[test]
    fn adjust_index_matches_metric_contraction() {
        let t = SmallTensor::<Q>::from_fn(&[Upper; 3], |i| q((i[0] * 16 + i[1] * 4 + i[2]) as i64 - 20)).unwrap();
        let g = metric::<Q>([Lower, Lower]);
        for slot in 0..3 {
            let perm: Vec<usize> = std::iter::once(slot).chain((0..3).filter(|&s| s != slot)).collect();
            let direct = g.tensordot(&t, &[(1, slot)]).unwrap().permuted(&perm).unwrap();
            assert_eq!(t.adjust_index(slot, Lower).unwrap(), direct);
        }
    }

    #[test]
    fn contract_rejects_same_variance() {
        let g = metric::<Q>([Upper, Upper]);
        assert!(matches!(g.contract(0, 1), Err(TensorError::SameVariance { .. })));
        assert!(matches!(g.contract(0, 0), Err(TensorError::SameSlot(0))));
        assert!(matches!(g.contract(0, 5), Err(TensorError::SlotOutOfRange { .. })));
    }

    #[test]
    fn outer_products() {
        let e0 = SmallTensor::<Q>::from_fn(&[Upper], |i| if i[0] == 0 { q(1) } else { q(0) }).unwrap();
        let o = e0.outer(&e0).unwrap();
        assert_eq!(o[[0, 0]], q(1));
        assert_eq!(o.components().iter().filter(|c| !c.is_zero()).count(), 1);
        let two = SmallTensor::scalar(q(2));
        let g = metric::<Q>([Upper, Upper]);
        assert_eq!(two.outer(&g).unwrap(), g.scale(q(2)));
        let r4 = levi_civita4::<Q>(Upper);
        assert!(matches!(r4.outer(&e0), Err(TensorError::RankExceeded(5))));
    }

    #[test]
    fn permutation_reorders_slots() {
        let t = SmallTensor::<Q>::from_fn(&[Upper, Lower, Upper], |i| q((i[0] * 16 + i[1] * 4 + i[2]) as i64)).unwrap();
        let p = t.permuted(&[2, 0, 1]).unwrap();
        // out[a,b,c] = t[a_{perm0}, ..] = t[c, a, b]
        assert_eq!(p[[1, 2, 3]], t[[3, 1, 2]]);
        assert_eq!(p.variance(), &[Lower, Upper, Upper]);
        assert!(t.permuted(&[0, 0, 1]).is_err());
    }

    #[test]
    fn float_backend_constants_match() {
        let c = Complex64::constants();
        assert_eq!(c.eps_upper[[0, 1, 2, 3]], Complex64::new(-1.0, 0.0));
        assert_eq!(c.eps_lower[[0, 1, 2, 3]], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn tensordot_pairs_opposite_variance() {
        let e = levi_civita4::<Q>(Upper);
        let g = metric::<Q>([Upper, Upper]);
        assert!(e.tensordot(&g, &[(0, 0), (1, 1)]).is_err());
    }
}
