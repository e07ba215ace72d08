//! Trace and Levi-Civita conditions, and duality-transform eigenvalues.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bivector::{random_bivector, Bivector};
use crate::error::VerifyError;
use crate::scalar::Scalar;
use crate::tensor::{SmallTensor, Variance};

/// Slot pairs traced by the valence-4 pair-trace conditions.
pub const PAIR_TRACES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrreducibilityReport {
    pub rank: usize,
    /// Largest component of each metric pair trace, in [`PAIR_TRACES`] order.
    pub pair_traces: Vec<f64>,
    /// `|ε_{αβγδ} t^{αβγδ}|` (valence 4 only).
    pub full_epsilon: Option<f64>,
    /// Largest component of `ε_{…} t` with three slots contracted, one entry
    /// per free slot of `t` (valence 4 only).
    pub triple_epsilon: Vec<f64>,
    pub certified: bool,
    pub failures: Vec<String>,
}

fn check<S: Scalar>(t: &SmallTensor<S>, tol: f64) -> (f64, bool) {
    let zero = t.components().iter().all(|c| c.approx_eq(&S::zero(), tol));
    (t.max_abs(), zero)
}

/// Evaluates every irreducibility condition on an all-contravariant rank-2 or
/// rank-4 tensor. Exact for the rational backend; `tol` applies to floats.
pub fn irreducibility_report<S: Scalar>(t: &SmallTensor<S>, tol: f64) -> Result<IrreducibilityReport, VerifyError> {
    let rank = t.rank();
    if !(rank == 2 || rank == 4) || t.variance().iter().any(|&v| v != Variance::Upper) {
        return Err(VerifyError::UnsupportedRank(rank));
    }
    let mut failures = Vec::new();
    let mut record = |name: String, (norm, ok): (f64, bool)| {
        if !ok {
            failures.push(name);
        }
        norm
    };
    if rank == 2 {
        let tr = t.adjust_index(1, Variance::Lower)?.contract(0, 1)?;
        let norm = record("trace".into(), check(&tr, tol));
        return Ok(IrreducibilityReport {
            rank,
            pair_traces: vec![norm],
            full_epsilon: None,
            triple_epsilon: vec![],
            certified: failures.is_empty(),
            failures,
        });
    }
    let mut pair_traces = Vec::with_capacity(6);
    for (a, b) in PAIR_TRACES {
        let tr = t.adjust_index(b, Variance::Lower)?.contract(a, b)?;
        pair_traces.push(record(format!("trace({a},{b})"), check(&tr, tol)));
    }
    let eps = &S::constants().eps_lower;
    let full = t.tensordot(eps, &[(0, 0), (1, 1), (2, 2), (3, 3)])?;
    let full_epsilon = Some(record("epsilon".into(), check(&full, tol)));
    let mut triple_epsilon = Vec::with_capacity(4);
    for free in 0..4 {
        let slots: Vec<usize> = (0..4).filter(|&s| s != free).collect();
        let c = t.tensordot(eps, &[(slots[0], 0), (slots[1], 1), (slots[2], 2)])?;
        triple_epsilon.push(record(format!("epsilon3(free {free})"), check(&c, tol)));
    }
    Ok(IrreducibilityReport {
        rank,
        pair_traces,
        full_epsilon,
        triple_epsilon,
        certified: failures.is_empty(),
        failures,
    })
}

/// Measured sign of `C(duality_transform(F))` against `C(F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DualitySign {
    Plus,
    Minus,
    /// Different trials disagree, or neither sign fits.
    Mixed,
    /// Every sampled value was zero.
    Undetermined,
}

impl DualitySign {
    pub fn as_str(self) -> &'static str {
        match self {
            DualitySign::Plus => "+1",
            DualitySign::Minus => "-1",
            DualitySign::Mixed => "mixed",
            DualitySign::Undetermined => "undetermined",
        }
    }

    pub fn is_pure(self) -> bool {
        matches!(self, DualitySign::Plus | DualitySign::Minus)
    }

    /// Combines measurements from disjoint trial sets.
    pub fn merge(self, other: Self) -> Self {
        use DualitySign::*;
        match (self, other) {
            (Undetermined, x) | (x, Undetermined) => x,
            (a, b) if a == b => a,
            _ => Mixed,
        }
    }
}

impl fmt::Display for DualitySign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for DualitySign {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for DualitySign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "+1" => Ok(DualitySign::Plus),
            "-1" => Ok(DualitySign::Minus),
            "mixed" => Ok(DualitySign::Mixed),
            "undetermined" => Ok(DualitySign::Undetermined),
            other => Err(serde::de::Error::custom(format!("bad duality sign `{other}`"))),
        }
    }
}

/// Sign of a single paired observation `before = C(F)`, `after = C(★-transformed F)`.
pub fn duality_sign_of<S: Scalar>(before: &[S], after: &[S], tol: f64) -> DualitySign {
    if before.iter().chain(after).all(|c| c.approx_eq(&S::zero(), tol)) {
        return DualitySign::Undetermined;
    }
    let plus = before.iter().zip(after).all(|(b, a)| a.approx_eq(b, tol));
    let minus = before.iter().zip(after).all(|(b, a)| a.approx_eq(&-*b, tol));
    match (plus, minus) {
        (true, false) => DualitySign::Plus,
        (false, true) => DualitySign::Minus,
        _ => DualitySign::Mixed,
    }
}

/// Measures the duality eigenvalue of `functional` on `trials` random
/// bivectors drawn from `seed`.
pub fn duality_eigenvalue<S: Scalar>(
    functional: impl Fn(&Bivector<S>) -> Vec<S>,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<DualitySign, VerifyError> {
    if trials == 0 {
        return Err(VerifyError::NoTrials);
    }
    Ok((0..trials as u64).fold(DualitySign::Undetermined, |acc, k| {
        let f = random_bivector::<S>(seed.wrapping_add(k));
        acc.merge(duality_sign_of(&functional(&f), &functional(&f.duality_transform()), tol))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concomitants::compute;
    use crate::scalar::GaussianRational as Q;

    #[test]
    fn irreducible_tensors_are_certified() {
        for seed in 0..10 {
            let set = compute(&random_bivector::<Q>(seed));
            assert!(irreducibility_report(&set.d4, 0.0).unwrap().certified);
            assert!(irreducibility_report(&set.x4, 0.0).unwrap().certified);
            assert!(irreducibility_report(&set.d2, 0.0).unwrap().certified);
        }
        let zero = SmallTensor::<Q>::zeros(&[Variance::Upper; 4]).unwrap();
        assert!(irreducibility_report(&zero, 0.0).unwrap().certified);
    }

    #[test]
    fn raw_tensor_fails_middle_trace() {
        let f = Bivector::new([Q::one(), Q::zero(), Q::zero()], [Q::zero(); 3]);
        let r = irreducibility_report(&compute(&f).t_prime, 0.0).unwrap();
        assert!(!r.certified);
        assert!(r.failures.contains(&"trace(1,2)".to_string()));
        assert_eq!(r.pair_traces[3], 0.5);
    }

    #[test]
    fn unsupported_rank() {
        let v = SmallTensor::<Q>::zeros(&[Variance::Upper]).unwrap();
        assert_eq!(irreducibility_report(&v, 0.0), Err(VerifyError::UnsupportedRank(1)));
    }

    #[test]
    fn duality_sign_examples() {
        let t2 = duality_eigenvalue::<Q>(|f| compute(f).t2.components().to_vec(), 5, 1, 0.0).unwrap();
        let q2 = duality_eigenvalue::<Q>(|f| compute(f).q2.components().to_vec(), 5, 1, 0.0).unwrap();
        let lp = duality_eigenvalue::<Q>(|f| vec![compute(f).scalars.lplus], 5, 1, 0.0).unwrap();
        assert_eq!((t2, q2, lp), (DualitySign::Plus, DualitySign::Plus, DualitySign::Minus));
        assert_eq!(DualitySign::Plus.merge(DualitySign::Minus), DualitySign::Mixed);
        assert!(duality_eigenvalue::<Q>(|_| vec![], 0, 1, 0.0).is_err());
    }
}
