//! Concomitants from 3-vector algebra on `(E, B)` only: dot and cross
//! products, outer products and sixtor blocks. No ε contractions.

use crate::bivector::Bivector;
use crate::scalar::Scalar;
use crate::tensor::{SmallTensor, Variance};

use super::{from_sixtor_matrix, ConcomitantSet, Convention, InvariantScalars};

type V3<S> = [S; 3];
type M3<S> = [[S; 3]; 3];

fn dot<S: Scalar>(a: &V3<S>, b: &V3<S>) -> S {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross<S: Scalar>(a: &V3<S>, b: &V3<S>) -> V3<S> {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn conj3<S: Scalar>(a: &V3<S>) -> V3<S> {
    a.map(|x| x.conj())
}

/// `(ā ⊗ b)_{ij} = ā_i b_j`.
fn outer3<S: Scalar>(a: &V3<S>, b: &V3<S>) -> M3<S> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i].conj() * b[j]))
}

fn mmap<S: Scalar>(m: &M3<S>, f: impl Fn(S) -> S) -> M3<S> {
    m.map(|row| row.map(&f))
}

fn mzip<S: Scalar>(a: &M3<S>, b: &M3<S>, f: impl Fn(S, S) -> S) -> M3<S> {
    std::array::from_fn(|i| std::array::from_fn(|j| f(a[i][j], b[i][j])))
}

fn plus_delta<S: Scalar>(m: &M3<S>, s: S) -> M3<S> {
    let mut out = *m;
    for (k, row) in out.iter_mut().enumerate() {
        row[k] = row[k] + s;
    }
    out
}

/// Symmetric rank-2 tensor from `t00`, `t^{i0}` and the spatial block.
fn sym2<S: Scalar>(t00: S, t0: V3<S>, tij: M3<S>, antisym: bool) -> SmallTensor<S> {
    SmallTensor::from_fn(&[Variance::Upper; 2], |idx| match (idx[0], idx[1]) {
        (0, 0) => t00,
        (i, 0) => t0[i - 1],
        (0, j) => {
            if antisym {
                -t0[j - 1]
            } else {
                t0[j - 1]
            }
        }
        (i, j) => tij[i - 1][j - 1],
    })
    .expect("rank 2")
}

fn blocks<S: Scalar>(ul: M3<S>, ur: M3<S>, ll: M3<S>, lr: M3<S>) -> SmallTensor<S> {
    let m: [[S; 6]; 6] = std::array::from_fn(|a| {
        std::array::from_fn(|b| match (a < 3, b < 3) {
            (true, true) => ul[a][b],
            (true, false) => ur[a][b - 3],
            (false, true) => ll[a - 3][b],
            (false, false) => lr[a - 3][b - 3],
        })
    });
    from_sixtor_matrix(&m)
}

/// Scalars and irreducible valence-2 concomitants from `(E, B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EbValence2<S> {
    pub scalars: InvariantScalars<S>,
    pub t2: SmallTensor<S>,
    pub q2: SmallTensor<S>,
    pub d2: SmallTensor<S>,
    pub x2: SmallTensor<S>,
}

pub fn eb_valence2<S: Scalar>(f: &Bivector<S>) -> EbValence2<S> {
    let (e, b) = (&f.e, &f.b);
    let (eb, bb) = (conj3(e), conj3(b));
    let half = S::from_ratio(1, 2);
    let ihalf = S::i() * half;
    let ee = outer3(e, e);
    let bbm = outer3(b, b);
    let ebm = outer3(e, b);
    let bem = outer3(b, e);

    let lplus = (dot(&eb, e) - dot(&bb, b)) * half;
    let lminus = -dot(&eb, b).re();

    let t00 = (dot(&eb, e) + dot(&bb, b)) * half;
    let t0 = cross(&eb, b).map(|x| x.re());
    let tij = plus_delta(&mzip(&ee, &bbm, |x, y| -(x + y).re()), t00);

    let q00 = dot(&eb, b).im();
    let q0 = {
        let (a, c) = (cross(&eb, e), cross(&bb, b));
        std::array::from_fn(|k| ihalf * (a[k] + c[k]))
    };
    let qij = plus_delta(&mzip(&ebm, &bem, |x, y| -(x - y).im()), q00);

    let d0 = cross(&eb, b).map(|x| -x.im());
    let dij = mzip(&ee, &bbm, |x, y| -(x - y).im());

    let x0 = {
        let (a, c) = (cross(&eb, e), cross(&bb, b));
        std::array::from_fn(|k| ihalf * (a[k] - c[k]))
    };
    let xij = mzip(&ebm, &bem, |x, y| (x + y).im());

    EbValence2 {
        scalars: InvariantScalars { lplus, lminus },
        t2: sym2(t00, t0, tij, false),
        q2: sym2(q00, q0, qij, false),
        d2: sym2(S::zero(), d0, dij, true),
        x2: sym2(S::zero(), x0, xij, true),
    }
}

/// Full concomitant set from `(E, B)`; agrees with [`super::compute`].
pub fn eb_oracle<S: Scalar>(f: &Bivector<S>) -> ConcomitantSet<S> {
    let v2 = eb_valence2(f);
    let (e, b) = (&f.e, &f.b);
    let half = S::from_ratio(1, 2);
    let ihalf = S::i() * half;
    let ee = outer3(e, e);
    let bbm = outer3(b, b);
    let ebm = outer3(e, b);
    let bem = outer3(b, e);
    let add = |x: S, y: S| x + y;
    let sub = |x: S, y: S| x - y;
    let h = |m: M3<S>| mmap(&m, |x| x * half);
    let ih = |m: M3<S>| mmap(&m, |x| x * ihalf);

    let ee_p_bb = mzip(&ee, &bbm, add);
    let ee_m_bb = mzip(&ee, &bbm, sub);
    let eb_p_be = mzip(&ebm, &bem, add);
    let eb_m_be = mzip(&ebm, &bem, sub);
    let neg = |m: &M3<S>| mmap(m, |x| -x);

    let t_prime = blocks(h(ee_p_bb), h(eb_m_be), h(neg(&eb_m_be)), h(ee_p_bb));
    let q_prime = blocks(ih(neg(&eb_m_be)), ih(ee_p_bb), ih(neg(&ee_p_bb)), ih(neg(&eb_m_be)));
    let d_prime = blocks(h(ee_m_bb), h(eb_p_be), h(eb_p_be), h(neg(&ee_m_bb)));
    let x_prime = blocks(h(neg(&eb_p_be)), h(ee_m_bb), h(ee_m_bb), h(eb_p_be));

    let InvariantScalars { lplus, lminus } = v2.scalars;
    let tt = S::from_ratio(2, 3);
    let re = |m: &M3<S>| mmap(m, |x| x.re());
    let d4 = blocks(
        h(plus_delta(&re(&ee_m_bb), -tt * lplus)),
        h(plus_delta(&re(&eb_p_be), tt * lminus)),
        h(plus_delta(&re(&eb_p_be), tt * lminus)),
        h(plus_delta(&neg(&re(&ee_m_bb)), tt * lplus)),
    );
    let x4 = blocks(
        h(plus_delta(&neg(&re(&eb_p_be)), -tt * lminus)),
        h(plus_delta(&re(&ee_m_bb), -tt * lplus)),
        h(plus_delta(&re(&ee_m_bb), -tt * lplus)),
        h(plus_delta(&re(&eb_p_be), tt * lminus)),
    );

    let g = &S::constants().metric_upper;
    let raw = |l: S, irr: &SmallTensor<S>| g.scale(l).add(&irr.scale(S::i())).expect("rank 2");
    ConcomitantSet {
        source: *f,
        scalars: v2.scalars,
        d2_raw: raw(lplus, &v2.d2),
        x2_raw: raw(lminus, &v2.x2),
        t2: v2.t2,
        q2: v2.q2,
        d2: v2.d2,
        x2: v2.x2,
        t_prime,
        q_prime,
        d_prime,
        x_prime,
        d4,
        x4,
        convention: Convention::for_backend(S::BACKEND),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivector::{random_bivector, random_real_bivector};
    use crate::concomitants::compute;
    use crate::scalar::{Complex64, GaussianRational};

    #[test]
    fn oracle_matches_pipeline_exactly() {
        for seed in 0..60 {
            let f = random_bivector::<GaussianRational>(seed);
            let (a, b) = (compute(&f), eb_oracle(&f));
            assert_eq!(a.first_mismatch(&b, 0.0), None, "seed {seed}");
        }
    }

    #[test]
    fn oracle_matches_pipeline_for_real_and_float_input() {
        for seed in 0..30 {
            let f = random_real_bivector::<GaussianRational>(seed);
            assert_eq!(compute(&f).first_mismatch(&eb_oracle(&f), 0.0), None);
            let f = random_bivector::<Complex64>(seed);
            assert!(compute(&f).max_abs_diff(&eb_oracle(&f)) < 1e-12);
        }
    }
}
