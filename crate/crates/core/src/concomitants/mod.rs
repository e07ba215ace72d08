//! Bilinear hermitian-form concomitants of a complex bivector.
//!
//! Starting from the four outer products `F̄⊗F`, `★F̄⊗★F`, `F̄⊗★F`, `★F̄⊗F`
//! the module builds the raw valence-4 tensors `T′ Q′ D′ X′`, contracts them
//! over their middle slots to valence 2, traces again to the scalars `L±`, and
//! removes traces to obtain the irreducible tensors. All outputs are
//! all-contravariant; lower indices through [`SmallTensor::adjust_index`].
//!
//! [`oracle`] recomputes everything from 3-vector algebra alone and is the
//! independent check for this module. [`reference`] holds the classical
//! real-field invariants.

pub mod oracle;
pub mod reference;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bivector::{Bivector, SIXTOR_PAIRS};
use crate::error::{ConcomitantError, TensorError};
use crate::scalar::{Backend, Scalar};
use crate::tensor::{SmallTensor, Variance, EPSILON_UPPER_0123};

pub use oracle::eb_oracle;
pub use reference::{real_reference, RealReferenceInvariants};

/// Every concomitant the crate computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Concomitant {
    Lplus,
    Lminus,
    T2,
    Q2,
    D2Raw,
    X2Raw,
    D2,
    X2,
    TPrime,
    QPrime,
    DPrime,
    XPrime,
    D4,
    X4,
}

impl Concomitant {
    pub const ALL: [Concomitant; 14] = [
        Concomitant::Lplus,
        Concomitant::Lminus,
        Concomitant::T2,
        Concomitant::Q2,
        Concomitant::D2Raw,
        Concomitant::X2Raw,
        Concomitant::D2,
        Concomitant::X2,
        Concomitant::TPrime,
        Concomitant::QPrime,
        Concomitant::DPrime,
        Concomitant::XPrime,
        Concomitant::D4,
        Concomitant::X4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Concomitant::Lplus => "Lplus",
            Concomitant::Lminus => "Lminus",
            Concomitant::T2 => "T2",
            Concomitant::Q2 => "Q2",
            Concomitant::D2Raw => "D2raw",
            Concomitant::X2Raw => "X2raw",
            Concomitant::D2 => "D2",
            Concomitant::X2 => "X2",
            Concomitant::TPrime => "Tprime",
            Concomitant::QPrime => "Qprime",
            Concomitant::DPrime => "Dprime",
            Concomitant::XPrime => "Xprime",
            Concomitant::D4 => "D4",
            Concomitant::X4 => "X4",
        }
    }

    pub fn valence(self) -> usize {
        match self {
            Concomitant::Lplus | Concomitant::Lminus => 0,
            Concomitant::T2
            | Concomitant::Q2
            | Concomitant::D2Raw
            | Concomitant::X2Raw
            | Concomitant::D2
            | Concomitant::X2 => 2,
            _ => 4,
        }
    }

    /// Whether every component is real for arbitrary complex input.
    pub fn is_real_valued(self) -> bool {
        !matches!(
            self,
            Concomitant::D2Raw
                | Concomitant::X2Raw
                | Concomitant::TPrime
                | Concomitant::QPrime
                | Concomitant::DPrime
                | Concomitant::XPrime
        )
    }
}

impl fmt::Display for Concomitant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Concomitant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Concomitant::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown concomitant `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Valence4Concomitant<S> {
    pub tag: Concomitant,
    pub tensor: SmallTensor<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Valence2Concomitant<S> {
    pub tag: Concomitant,
    pub tensor: SmallTensor<S>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantScalars<S> {
    pub lplus: S,
    pub lminus: S,
}

/// Sign conventions embedded in every output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convention {
    pub signature: String,
    pub epsilon_upper_0123: i64,
    pub backend: Backend,
}

impl Convention {
    pub fn for_backend(backend: Backend) -> Self {
        Self { signature: "+---".to_string(), epsilon_upper_0123: EPSILON_UPPER_0123, backend }
    }
}

/// All concomitants of one bivector.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcomitantSet<S> {
    pub source: Bivector<S>,
    pub scalars: InvariantScalars<S>,
    pub t2: SmallTensor<S>,
    pub q2: SmallTensor<S>,
    pub d2_raw: SmallTensor<S>,
    pub x2_raw: SmallTensor<S>,
    pub d2: SmallTensor<S>,
    pub x2: SmallTensor<S>,
    pub t_prime: SmallTensor<S>,
    pub q_prime: SmallTensor<S>,
    pub d_prime: SmallTensor<S>,
    pub x_prime: SmallTensor<S>,
    pub d4: SmallTensor<S>,
    pub x4: SmallTensor<S>,
    pub convention: Convention,
}

impl<S: Scalar> ConcomitantSet<S> {
    /// The named concomitant; scalars come back as rank-0 tensors.
    pub fn get(&self, tag: Concomitant) -> SmallTensor<S> {
        match tag {
            Concomitant::Lplus => SmallTensor::scalar(self.scalars.lplus),
            Concomitant::Lminus => SmallTensor::scalar(self.scalars.lminus),
            _ => self.tensor(tag).expect("non-scalar tag").clone(),
        }
    }

    /// Borrowed tensor for valence-2 and valence-4 tags.
    pub fn tensor(&self, tag: Concomitant) -> Option<&SmallTensor<S>> {
        Some(match tag {
            Concomitant::Lplus | Concomitant::Lminus => return None,
            Concomitant::T2 => &self.t2,
            Concomitant::Q2 => &self.q2,
            Concomitant::D2Raw => &self.d2_raw,
            Concomitant::X2Raw => &self.x2_raw,
            Concomitant::D2 => &self.d2,
            Concomitant::X2 => &self.x2,
            Concomitant::TPrime => &self.t_prime,
            Concomitant::QPrime => &self.q_prime,
            Concomitant::DPrime => &self.d_prime,
            Concomitant::XPrime => &self.x_prime,
            Concomitant::D4 => &self.d4,
            Concomitant::X4 => &self.x4,
        })
    }

    /// Flat component list of a concomitant (row-major).
    pub fn components(&self, tag: Concomitant) -> Vec<S> {
        match tag {
            Concomitant::Lplus => vec![self.scalars.lplus],
            Concomitant::Lminus => vec![self.scalars.lminus],
            _ => self.tensor(tag).expect("non-scalar tag").components().to_vec(),
        }
    }

    /// Componentwise comparison over every concomitant; returns the first
    /// mismatching tag.
    pub fn first_mismatch(&self, other: &Self, tol: f64) -> Option<Concomitant> {
        Concomitant::ALL.into_iter().find(|&tag| {
            let (a, b) = (self.components(tag), other.components(tag));
            a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| !x.approx_eq(y, tol))
        })
    }

    /// Largest componentwise distance over every concomitant.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        Concomitant::ALL
            .into_iter()
            .flat_map(|tag| {
                let (a, b) = (self.components(tag), other.components(tag));
                a.into_iter().zip(b).map(|(x, y)| (x - y).magnitude()).collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }
}

const UU: [Variance; 2] = [Variance::Upper, Variance::Upper];

/// The four outer products `F̄⊗F`, `★F̄⊗★F`, `F̄⊗★F`, `★F̄⊗F`.
struct Products<S> {
    fbar_f: SmallTensor<S>,
    sfbar_sf: SmallTensor<S>,
    fbar_sf: SmallTensor<S>,
    sfbar_f: SmallTensor<S>,
}

fn products<S: Scalar>(f: &Bivector<S>) -> Products<S> {
    let m = f.matrix_form();
    let star = f.dual().matrix_form();
    let mbar = m.conj();
    let star_bar = star.conj();
    let outer = |a: &SmallTensor<S>, b: &SmallTensor<S>| a.outer(b).expect("rank 2 + rank 2");
    Products {
        fbar_f: outer(&mbar, &m),
        sfbar_sf: outer(&star_bar, &star),
        fbar_sf: outer(&mbar, &star),
        sfbar_f: outer(&star_bar, &m),
    }
}

fn raw_valence4<S: Scalar>(p: &Products<S>) -> [SmallTensor<S>; 4] {
    let half = S::from_ratio(1, 2);
    let ihalf = S::i() * half;
    let sum = |a: &SmallTensor<S>, b: &SmallTensor<S>| a.add(b).expect("same shape");
    let diff = |a: &SmallTensor<S>, b: &SmallTensor<S>| a.sub(b).expect("same shape");
    [
        sum(&p.fbar_f, &p.sfbar_sf).scale(half),
        diff(&p.fbar_sf, &p.sfbar_f).scale(ihalf),
        diff(&p.fbar_f, &p.sfbar_sf).scale(half),
        sum(&p.fbar_sf, &p.sfbar_f).scale(half),
    ]
}

/// `T′ = (F̄⊗F + ★F̄⊗★F)/2`, `Q′ = i(F̄⊗★F − ★F̄⊗F)/2`,
/// `D′ = (F̄⊗F − ★F̄⊗★F)/2`, `X′ = (F̄⊗★F + ★F̄⊗F)/2`.
pub fn valence4_set<S: Scalar>(f: &Bivector<S>) -> [Valence4Concomitant<S>; 4] {
    let [t, q, d, x] = raw_valence4(&products(f));
    [
        Valence4Concomitant { tag: Concomitant::TPrime, tensor: t },
        Valence4Concomitant { tag: Concomitant::QPrime, tensor: q },
        Valence4Concomitant { tag: Concomitant::DPrime, tensor: d },
        Valence4Concomitant { tag: Concomitant::XPrime, tensor: x },
    ]
}

/// 6×6 sixtor matrix `M^{AB} = t^{αβγδ}` with `A↔[αβ]`, `B↔[γδ]`.
pub fn sixtor_matrix<S: Scalar>(t: &SmallTensor<S>) -> [[S; 6]; 6] {
    assert_eq!(t.rank(), 4, "sixtor matrices need a rank-4 tensor");
    std::array::from_fn(|a| {
        let (p, q) = SIXTOR_PAIRS[a];
        std::array::from_fn(|b| {
            let (r, s) = SIXTOR_PAIRS[b];
            t[[p, q, r, s]]
        })
    })
}

/// Rebuilds a pair-antisymmetric rank-4 tensor from its sixtor matrix.
pub fn from_sixtor_matrix<S: Scalar>(m: &[[S; 6]; 6]) -> SmallTensor<S> {
    use crate::bivector::sixtor_slot;
    SmallTensor::from_fn(&[Variance::Upper; 4], |i| match (sixtor_slot(i[0], i[1]), sixtor_slot(i[2], i[3])) {
        (Some((a, sa)), Some((b, sb))) => {
            let v = m[a][b];
            if sa * sb > 0 {
                v
            } else {
                -v
            }
        }
        _ => S::zero(),
    })
    .expect("rank 4")
}

/// `t^{αμνβ} g_{μν}`.
pub fn middle_trace<S: Scalar>(t: &SmallTensor<S>) -> Result<SmallTensor<S>, TensorError> {
    t.adjust_index(2, Variance::Lower)?.contract(1, 2)
}

/// `t^{μν} g_{μν}` for a contravariant rank-2 tensor.
pub fn trace2<S: Scalar>(t: &SmallTensor<S>) -> Result<S, TensorError> {
    Ok(t.adjust_index(1, Variance::Lower)?.contract(0, 1)?.to_scalar().expect("rank 0"))
}

/// Valence-2 middle contractions of `T′ Q′ D′ X′`.
pub fn valence2_set<S: Scalar>(f: &Bivector<S>) -> [Valence2Concomitant<S>; 4] {
    let raw = valence4_set(f);
    let tags = [Concomitant::T2, Concomitant::Q2, Concomitant::D2Raw, Concomitant::X2Raw];
    std::array::from_fn(|k| Valence2Concomitant {
        tag: tags[k],
        tensor: middle_trace(&raw[k].tensor).expect("rank-4 contraction"),
    })
}

fn scalars_from_raw<S: Scalar>(d2_raw: &SmallTensor<S>, x2_raw: &SmallTensor<S>) -> InvariantScalars<S> {
    let quarter = S::from_ratio(1, 4);
    InvariantScalars {
        lplus: trace2(d2_raw).expect("rank 2") * quarter,
        lminus: trace2(x2_raw).expect("rank 2") * quarter,
    }
}

/// `L₊ = D′^{μν}g_{μν}/4`, `L₋ = X′^{μν}g_{μν}/4`. Also checks that `T2` and
/// `Q2` are trace-free (exactly, or to `1e-12` for floats).
pub fn scalar_invariants<S: Scalar>(f: &Bivector<S>) -> Result<InvariantScalars<S>, ConcomitantError> {
    let [t2, q2, d2, x2] = valence2_set(f);
    for (name, t) in [("T2", &t2.tensor), ("Q2", &q2.tensor)] {
        let tr = trace2(t)?;
        let scale = t.max_abs().max(1.0);
        if tr.magnitude() > 1e-12 * scale || (S::BACKEND == Backend::Rational && !tr.is_zero()) {
            return Err(ConcomitantError::NonzeroTrace(name));
        }
    }
    Ok(scalars_from_raw(&d2.tensor, &x2.tensor))
}

fn irreducible_from_raw<S: Scalar>(raw: &SmallTensor<S>, trace_scalar: S) -> SmallTensor<S> {
    let g = &S::constants().metric_upper;
    raw.sub(&g.scale(trace_scalar)).expect("rank 2").scale(-S::i())
}

/// `D = −i(D′ − L₊g)`, `X = −i(X′ − L₋g)`.
pub fn irreducible_v2<S: Scalar>(f: &Bivector<S>) -> (Valence2Concomitant<S>, Valence2Concomitant<S>) {
    let [_, _, d2_raw, x2_raw] = valence2_set(f);
    let s = scalars_from_raw(&d2_raw.tensor, &x2_raw.tensor);
    (
        Valence2Concomitant { tag: Concomitant::D2, tensor: irreducible_from_raw(&d2_raw.tensor, s.lplus) },
        Valence2Concomitant { tag: Concomitant::X2, tensor: irreducible_from_raw(&x2_raw.tensor, s.lminus) },
    )
}

/// `T^{[α[δ}g^{γ]β]} = ¼(T^{αδ}g^{γβ} − T^{αγ}g^{δβ} − T^{βδ}g^{γα} + T^{βγ}g^{δα})`.
pub fn nested_antisym_metric<S: Scalar>(t: &SmallTensor<S>) -> SmallTensor<S> {
    let o = t.outer(&S::constants().metric_upper).expect("rank 2 + rank 2");
    let p = |perm: [usize; 4]| o.permuted(&perm).expect("valid permutation");
    let combo = p([0, 3, 2, 1]).sub(&p([0, 2, 3, 1])).and_then(|x| x.sub(&p([1, 3, 2, 0]))).and_then(|x| x.add(&p([1, 2, 3, 0])));
    combo.expect("same shape").scale(S::from_ratio(1, 4))
}

/// `g^{α[δ}g^{γ]β} = ½(g^{αδ}g^{γβ} − g^{αγ}g^{δβ})`.
pub fn metric_pair<S: Scalar>() -> SmallTensor<S> {
    let g = &S::constants().metric_upper;
    let o = g.outer(g).expect("rank 2 + rank 2");
    let a = o.permuted(&[0, 3, 2, 1]).expect("valid permutation");
    let b = o.permuted(&[0, 2, 3, 1]).expect("valid permutation");
    a.sub(&b).expect("same shape").scale(S::from_ratio(1, 2))
}

/// `D4 = D′ − 2i D^{[α[δ}g^{γ]β]} − ⅔L₊ g^{α[δ}g^{γ]β} − ⅓L₋ ε^{αβγδ}`,
/// `X4 = X′ − 2i X^{[α[δ}g^{γ]β]} − ⅔L₋ g^{α[δ}g^{γ]β} + ⅓L₊ ε^{αβγδ}`.
fn irreducible4_from_parts<S: Scalar>(
    d_prime: &SmallTensor<S>,
    x_prime: &SmallTensor<S>,
    d2: &SmallTensor<S>,
    x2: &SmallTensor<S>,
    s: &InvariantScalars<S>,
) -> (SmallTensor<S>, SmallTensor<S>) {
    let two_i = S::from_int(2) * S::i();
    let two_thirds = S::from_ratio(2, 3);
    let third = S::from_ratio(1, 3);
    let gg = metric_pair::<S>();
    let eps = &S::constants().eps_upper;
    let build = |raw: &SmallTensor<S>, irr2: &SmallTensor<S>, lg: S, le: S| {
        raw.sub(&nested_antisym_metric(irr2).scale(two_i))
            .and_then(|x| x.sub(&gg.scale(two_thirds * lg)))
            .and_then(|x| x.add(&eps.scale(third * le)))
            .expect("same shape")
    };
    (build(d_prime, d2, s.lplus, -s.lminus), build(x_prime, x2, s.lminus, s.lplus))
}

pub fn irreducible_v4<S: Scalar>(f: &Bivector<S>) -> (Valence4Concomitant<S>, Valence4Concomitant<S>) {
    let set = compute(f);
    (
        Valence4Concomitant { tag: Concomitant::D4, tensor: set.d4 },
        Valence4Concomitant { tag: Concomitant::X4, tensor: set.x4 },
    )
}

/// Rebuilds `T′` (tag [`Concomitant::T2`]) or `Q′` (tag [`Concomitant::Q2`])
/// from the valence-2 pair:
///
/// ```text
/// T′ = 2T^{[α[δ}g^{γ]β]} − (i/4)(Q^{αμ}ε_μ^{βγδ} − Q^{βμ}ε_μ^{γδα} − Q^{γμ}ε_μ^{δαβ} + Q^{δμ}ε_μ^{αβγ})
/// Q′ = 2Q^{[α[δ}g^{γ]β]} − (i/4)(T^{αμ}ε_μ^{βγδ} − T^{βμ}ε_μ^{γδα} − T^{γμ}ε_μ^{δαβ} + T^{δμ}ε_μ^{αβγ})
/// ```
///
/// The imaginary part of `T′` is carried by `Q` and vice versa.
pub fn reconstruct_v4<S: Scalar>(
    tag: Concomitant,
    t2: &SmallTensor<S>,
    q2: &SmallTensor<S>,
) -> Result<Valence4Concomitant<S>, ConcomitantError> {
    let (own, other, out_tag) = match tag {
        Concomitant::T2 => (t2, q2, Concomitant::TPrime),
        Concomitant::Q2 => (q2, t2, Concomitant::QPrime),
        other => return Err(ConcomitantError::WrongTag(other.name().to_string())),
    };
    for t in [own, other] {
        if t.variance() != UU {
            return Err(ConcomitantError::Tensor(TensorError::VarianceMismatch));
        }
    }
    let r = other.tensordot(&S::constants().eps_first_lower, &[(1, 0)])?;
    let p = |perm: [usize; 4]| r.permuted(&perm).expect("valid permutation");
    let cyclic = r.sub(&p([1, 2, 3, 0]))?.sub(&p([2, 3, 0, 1]))?.add(&p([3, 0, 1, 2]))?;
    let tensor = nested_antisym_metric(own).scale(S::from_int(2)).sub(&cyclic.scale(S::i() * S::from_ratio(1, 4)))?;
    Ok(Valence4Concomitant { tag: out_tag, tensor })
}

/// Every concomitant of `f` through the abstract-index pipeline.
pub fn compute<S: Scalar>(f: &Bivector<S>) -> ConcomitantSet<S> {
    let [t_prime, q_prime, d_prime, x_prime] = raw_valence4(&products(f));
    let trace = |t: &SmallTensor<S>| middle_trace(t).expect("rank-4 contraction");
    let (t2, q2, d2_raw, x2_raw) = (trace(&t_prime), trace(&q_prime), trace(&d_prime), trace(&x_prime));
    let scalars = scalars_from_raw(&d2_raw, &x2_raw);
    let d2 = irreducible_from_raw(&d2_raw, scalars.lplus);
    let x2 = irreducible_from_raw(&x2_raw, scalars.lminus);
    let (d4, x4) = irreducible4_from_parts(&d_prime, &x_prime, &d2, &x2, &scalars);
    ConcomitantSet {
        source: *f,
        scalars,
        t2,
        q2,
        d2_raw,
        x2_raw,
        d2,
        x2,
        t_prime,
        q_prime,
        d_prime,
        x_prime,
        d4,
        x4,
        convention: Convention::for_backend(S::BACKEND),
    }
}
