//! Hermitian-form matrices of concomitant components and exact span ranks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bivector::{random_bivector, Bivector, Sixtor};
use crate::concomitants::{compute, Concomitant, ConcomitantSet};
use crate::error::VerifyError;
use crate::scalar::{Complex64, GaussianRational, Rational, Scalar};

/// Number of random sixtors on which every extracted matrix is re-checked.
pub const RECONSTRUCTION_CHECKS: usize = 8;

const CHECK_SEED: u64 = 0x4E52_4D41_7453_0001;

/// `value(F) = Σ conj(Fᴬ) H_{AB} Fᴮ` with `H = H†`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianFormMatrix<S> {
    pub label: String,
    pub h: [[S; 6]; 6],
}

impl<S: Scalar> HermitianFormMatrix<S> {
    pub fn evaluate(&self, f: &Bivector<S>) -> S {
        let x = f.sixtor_form().0;
        let mut acc = S::zero();
        for a in 0..6 {
            for b in 0..6 {
                acc = acc + x[a].conj() * self.h[a][b] * x[b];
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().flatten().all(|c| c.is_zero())
    }

    /// Coordinates in the 36-dimensional real space of 6×6 hermitian
    /// matrices: 6 diagonal entries, then `Re H_{AB}`, `Im H_{AB}` for `A<B`.
    pub fn full_coordinates(&self) -> Vec<S> {
        let mut v: Vec<S> = (0..6).map(|a| self.h[a][a].re()).collect();
        for a in 0..6 {
            for b in a + 1..6 {
                v.push(self.h[a][b].re());
                v.push(self.h[a][b].im());
            }
        }
        v
    }

    /// Coordinates of `Re H` among 21 real symmetric 6×6 matrices: the
    /// quadratic form seen by real bivectors.
    pub fn real_coordinates(&self) -> Vec<S> {
        let mut v = Vec::with_capacity(21);
        for a in 0..6 {
            for b in a..6 {
                v.push(self.h[a][b].re());
            }
        }
        v
    }
}

fn unit<S: Scalar>(a: usize, scale: S) -> [S; 6] {
    let mut x = [S::zero(); 6];
    x[a] = scale;
    x
}

fn probe_sixtors<S: Scalar>() -> Vec<[S; 6]> {
    let mut out: Vec<[S; 6]> = (0..6).map(|a| unit(a, S::one())).collect();
    for a in 0..6 {
        for b in a + 1..6 {
            let mut x = unit(a, S::one());
            x[b] = S::one();
            out.push(x);
            let mut y = unit(a, S::one());
            y[b] = S::i();
            out.push(y);
        }
    }
    out
}

fn check_bivectors<S: Scalar>() -> Vec<Bivector<S>> {
    (0..RECONSTRUCTION_CHECKS as u64).map(|k| random_bivector(CHECK_SEED + k)).collect()
}

/// Extracts one matrix per output of `eval` by polarization, then checks each
/// on [`RECONSTRUCTION_CHECKS`] random sixtors. Every output must be real.
pub fn extract_forms<S: Scalar>(
    labels: &[String],
    tol: f64,
    mut eval: impl FnMut(&Bivector<S>) -> Vec<S>,
) -> Result<Vec<HermitianFormMatrix<S>>, VerifyError> {
    let n = labels.len();
    let probes: Vec<Vec<S>> =
        probe_sixtors::<S>().iter().map(|x| eval(&Bivector::from_sixtor(&Sixtor(*x)))).collect();
    let half = S::from_ratio(1, 2);
    let mut forms = Vec::with_capacity(n);
    for (k, label) in labels.iter().enumerate() {
        let mut h = [[S::zero(); 6]; 6];
        for (a, row) in h.iter_mut().enumerate() {
            row[a] = probes[a][k];
        }
        let mut p = 6;
        for a in 0..6 {
            for b in a + 1..6 {
                let base = h[a][a] + h[b][b];
                let re = (probes[p][k] - base) * half;
                let im = -(probes[p + 1][k] - base) * half;
                p += 2;
                h[a][b] = re + S::i() * im;
                h[b][a] = re - S::i() * im;
            }
        }
        forms.push(HermitianFormMatrix { label: label.clone(), h });
    }
    for f in check_bivectors::<S>() {
        let values = eval(&f);
        for (form, value) in forms.iter().zip(&values) {
            if !form.evaluate(&f).approx_eq(value, tol) {
                return Err(VerifyError::NotHermitianForm(form.label.clone()));
            }
        }
    }
    Ok(forms)
}

/// Matrix of a single real-valued component.
pub fn hermitian_form_matrix<S: Scalar>(
    label: &str,
    tol: f64,
    component: impl Fn(&Bivector<S>) -> S,
) -> Result<HermitianFormMatrix<S>, VerifyError> {
    let mut v = extract_forms(&[label.to_string()], tol, |f| vec![component(f)])?;
    Ok(v.remove(0))
}

/// Real-valued functionals making up `tag`: real and imaginary parts of
/// every component.
pub fn component_labels(tag: Concomitant) -> Vec<String> {
    let idx = |flat: usize| -> String {
        let rank = tag.valence();
        (0..rank).rev().map(|k| ((flat / 4usize.pow(k as u32)) % 4).to_string()).collect()
    };
    let count = 4usize.pow(tag.valence() as u32);
    (0..count).flat_map(|c| [format!("{tag}{}.re", idx(c)), format!("{tag}{}.im", idx(c))]).collect()
}

fn split_components<S: Scalar>(set: &ConcomitantSet<S>, tag: Concomitant) -> Vec<S> {
    set.components(tag).into_iter().flat_map(|c| [c.re(), c.im()]).collect()
}

/// Hermitian-form matrices for every component of each tag, extracted from a
/// single pass of concomitant evaluations.
pub fn concomitant_forms<S: Scalar>(
    tags: &[Concomitant],
    tol: f64,
) -> Result<Vec<Vec<HermitianFormMatrix<S>>>, VerifyError> {
    concomitant_forms_with(tags, tol, compute)
}

/// [`concomitant_forms`] with an explicit concomitant pipeline.
pub fn concomitant_forms_with<S: Scalar>(
    tags: &[Concomitant],
    tol: f64,
    pipeline: impl Fn(&Bivector<S>) -> ConcomitantSet<S>,
) -> Result<Vec<Vec<HermitianFormMatrix<S>>>, VerifyError> {
    let labels: Vec<String> = tags.iter().flat_map(|&t| component_labels(t)).collect();
    let mut forms = extract_forms(&labels, tol, |f| {
        let set = pipeline(f);
        tags.iter().flat_map(|&t| split_components(&set, t)).collect()
    })?;
    let mut out = Vec::with_capacity(tags.len());
    for &t in tags {
        let rest = forms.split_off(component_labels(t).len());
        out.push(std::mem::replace(&mut forms, rest));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Restriction {
    /// Complex bivectors: span inside the 36-dimensional hermitian space.
    Full,
    /// Real bivectors: span of the symmetrized real parts (21 dimensions).
    RealBivectors,
}

fn coordinates<S: Scalar>(forms: &[&HermitianFormMatrix<S>], restriction: Restriction) -> Vec<Vec<S>> {
    forms
        .iter()
        .map(|f| match restriction {
            Restriction::Full => f.full_coordinates(),
            Restriction::RealBivectors => f.real_coordinates(),
        })
        .collect()
}

/// Exact real rank of the span of `forms` (rational backend).
pub fn completeness_rank(forms: &[&HermitianFormMatrix<GaussianRational>], restriction: Restriction) -> usize {
    let rows: Vec<Vec<Rational>> =
        coordinates(forms, restriction).into_iter().map(|r| r.into_iter().map(|c| c.re).collect()).collect();
    exact_rank(&rows)
}

/// Pivot-thresholded rank in floating point; a cross-check only.
pub fn completeness_rank_float(
    forms: &[&HermitianFormMatrix<Complex64>],
    restriction: Restriction,
    tol: f64,
) -> usize {
    let rows: Vec<Vec<f64>> =
        coordinates(forms, restriction).into_iter().map(|r| r.into_iter().map(|c| c.re).collect()).collect();
    float_rank(rows, tol)
}

/// Rank of the hermitian forms of all components of `tag`.
pub fn independent_component_count(tag: Concomitant) -> Result<usize, VerifyError> {
    let forms = concomitant_forms::<GaussianRational>(&[tag], 0.0)?;
    Ok(completeness_rank(&forms[0].iter().collect::<Vec<_>>(), Restriction::Full))
}

/// Rank of a rational matrix by fraction-free (Bareiss) elimination.
pub fn exact_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(&BigInt::from(*r.denom())));
            row.iter().map(|r| BigInt::from(*r.numer()) * (&l / BigInt::from(*r.denom()))).collect()
        })
        .filter(|row: &Vec<BigInt>| row.iter().any(|x| !x.is_zero()))
        .collect();
    let Some(cols) = m.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..m.len() {
            let factor = m[r][col].clone();
            for c in col..cols {
                let v = (&pivot * &m[r][c] - &factor * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
        }
        prev = pivot;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Gaussian elimination with partial pivoting; pivots below `tol` times the
/// largest entry count as zero.
pub fn float_rank(mut m: Vec<Vec<f64>>, tol: f64) -> usize {
    let scale = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == m.len() {
            break;
        }
        let (p, best) = (rank..m.len())
            .map(|r| (r, m[r][col].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol * scale {
            continue;
        }
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            let f = m[r][col] / m[rank][col];
            if f != 0.0 {
                for c in col..cols {
                    m[r][c] -= f * m[rank][c];
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn energy_density_form_is_half_identity() {
        let h = hermitian_form_matrix::<Q>("T00", 0.0, |f| compute(f).t2[[0, 0]]).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(h.h[a][b], if a == b { q(1, 2) } else { q(0, 1) });
            }
        }
    }

    #[test]
    fn lplus_form_is_signed_half_identity() {
        let h = hermitian_form_matrix::<Q>("Lplus", 0.0, |f| compute(f).scalars.lplus).unwrap();
        for a in 0..6 {
            assert_eq!(h.h[a][a], if a < 3 { q(1, 2) } else { q(-1, 2) });
        }
        let zero = hermitian_form_matrix::<Q>("zero", 0.0, |_| <Q as Scalar>::zero()).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn non_hermitian_input_is_detected() {
        let r = hermitian_form_matrix::<Q>("E0^2", 0.0, |f| (f.e[0] * f.e[0]).re());
        assert!(matches!(r, Err(VerifyError::NotHermitianForm(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(exact_rank(&[]), 0);
        let r = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x as i128)).collect::<Vec<_>>();
        assert_eq!(exact_rank(&[r(&[1, 2]), r(&[2, 4])]), 1);
        assert_eq!(exact_rank(&[r(&[1, 2, 3]), r(&[0, 1, 1]), r(&[1, 3, 4])]), 2);
        assert_eq!(exact_rank(&[r(&[0, 0]), r(&[0, 3])]), 1);
        assert_eq!(float_rank(vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-15]], 1e-9), 1);
        assert_eq!(completeness_rank(&[], Restriction::Full), 0);
    }

    #[test]
    fn table_counts() {
        use Concomitant::*;
        for (tag, expected) in [(Lplus, 1), (Lminus, 1), (T2, 9), (Q2, 9), (D2, 6), (X2, 6), (D4, 10), (X4, 10)] {
            assert_eq!(independent_component_count(tag).unwrap(), expected, "{tag}");
        }
    }
}
