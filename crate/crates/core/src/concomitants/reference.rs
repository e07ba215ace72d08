//! Classical invariants of a real field: the two Lorentz scalars and the
//! symmetric stress-energy tensor.

use crate::bivector::Bivector;
use crate::error::ConcomitantError;
use crate::scalar::Scalar;
use crate::tensor::{SmallTensor, Variance};

#[derive(Debug, Clone, PartialEq)]
pub struct RealReferenceInvariants<S> {
    /// `−¼ F_{μν}F^{μν}`
    pub lplus: S,
    /// `−¼ F_{μν}★F^{μν}`
    pub lminus: S,
    /// `F^{αμ}F_μ{}^β − L₊ g^{αβ}`
    pub stress: SmallTensor<S>,
}

fn full_contraction<S: Scalar>(a: &SmallTensor<S>, b: &SmallTensor<S>) -> S {
    a.all_lower().tensordot(b, &[(0, 0), (1, 1)]).expect("rank 2").to_scalar().expect("rank 0")
}

/// Errors with [`ConcomitantError::ComplexInput`] unless `f` is real
/// (exactly for rationals, to `1e-12` for floats).
pub fn real_reference<S: Scalar>(f: &Bivector<S>) -> Result<RealReferenceInvariants<S>, ConcomitantError> {
    if !f.is_real(1e-12) {
        return Err(ConcomitantError::ComplexInput);
    }
    let m = f.matrix_form();
    let star = f.dual().matrix_form();
    let quarter = S::from_ratio(-1, 4);
    let lplus = full_contraction(&m, &m) * quarter;
    let lminus = full_contraction(&m, &star) * quarter;
    let mixed = m.adjust_index(0, Variance::Lower)?;
    let ff = m.tensordot(&mixed, &[(1, 0)])?;
    let stress = ff.sub(&S::constants().metric_upper.scale(lplus))?;
    Ok(RealReferenceInvariants { lplus, lminus, stress })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivector::{random_bivector, random_real_bivector};
    use crate::concomitants::compute;
    use crate::scalar::GaussianRational as Q;

    #[test]
    fn energy_density_of_static_field() {
        let f = Bivector::new([Q::from_int(1), Q::zero(), Q::zero()], [Q::zero(), Q::from_int(2), Q::zero()]);
        let r = real_reference(&f).unwrap();
        assert_eq!(r.stress[[0, 0]], Q::from_ratio(5, 2));
        assert_eq!(r.lplus, Q::from_ratio(-3, 2));
        assert_eq!(r.lminus, Q::zero());
        // Poynting vector E×B = (0,0,2)
        assert_eq!(r.stress[[3, 0]], Q::from_int(2));
    }

    #[test]
    fn complex_input_is_rejected() {
        assert_eq!(real_reference(&random_bivector::<Q>(1)), Err(ConcomitantError::ComplexInput));
    }

    #[test]
    fn hermitian_concomitants_reduce_to_classical_ones() {
        for seed in 0..30 {
            let f = random_real_bivector::<Q>(seed);
            let (r, set) = (real_reference(&f).unwrap(), compute(&f));
            assert_eq!(r.lplus, set.scalars.lplus);
            assert_eq!(r.lminus, set.scalars.lminus);
            assert_eq!(r.stress, set.t2);
        }
    }
}
