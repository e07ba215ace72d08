//! The full property suite behind `concom verify`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bivector::{random_bivector, random_real_bivector, Bivector, LorentzTransform};
use crate::concomitants::{compute, eb_oracle, middle_trace, real_reference, reconstruct_v4, trace2, Concomitant, ConcomitantSet};
use crate::error::VerifyError;
use crate::scalar::{gaussian, Backend, Complex64, GaussianRational, Rational, Scalar};
use crate::tensor::{dual2_with, SmallTensor, Variance};

use super::forms::{completeness_rank, completeness_rank_float, concomitant_forms, HermitianFormMatrix, Restriction};
use super::irreducibility::{duality_sign_of, irreducibility_report, DualitySign};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Trials used by the Lorentz covariance property (capped by `trials`).
pub const LORENTZ_TRIALS: usize = 200;
/// Largest boost speed drawn by the Lorentz property.
pub const MAX_BOOST: f64 = 0.9;
pub const LORENTZ_TOLERANCE: f64 = 1e-9;
/// Number of distinct random phases used by the float phase property.
pub const FLOAT_PHASES: usize = 16;

/// Definition of "independent components" used by every count.
pub const COUNT_DEFINITION: &str = "real dimension of the span of the hermitian-form matrices of the real and imaginary \
     parts of all components, inside the 36-dimensional real space of 6x6 hermitian matrices";

/// One row of the summary table of the complete irreducible set.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub symbol: &'static str,
    pub tag: Concomitant,
    pub alternative: Option<Concomitant>,
    pub valence: usize,
    pub expected: usize,
}

pub const COUNT_TABLE: [TableRow; 6] = [
    TableRow { symbol: "L+", tag: Concomitant::Lplus, alternative: None, valence: 0, expected: 1 },
    TableRow { symbol: "L-", tag: Concomitant::Lminus, alternative: None, valence: 0, expected: 1 },
    TableRow { symbol: "T^ab", tag: Concomitant::T2, alternative: None, valence: 2, expected: 9 },
    TableRow { symbol: "iQ^ab", tag: Concomitant::Q2, alternative: None, valence: 2, expected: 9 },
    TableRow { symbol: "iD^ab (or iX^ab)", tag: Concomitant::D2, alternative: Some(Concomitant::X2), valence: 2, expected: 6 },
    TableRow { symbol: "D^abcd (or X^abcd)", tag: Concomitant::D4, alternative: Some(Concomitant::X4), valence: 4, expected: 10 },
];

pub const UNION_EXPECTED: usize = 36;
pub const REAL_RESTRICTION_EXPECTED: usize = 21;
pub const RAW_VALENCE4_EXPECTED: usize = 18;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub backend: Backend,
    pub tolerance: f64,
    /// Mutation hook: negate the Levi-Civita operator used by the dual.
    #[serde(default)]
    pub flip_epsilon: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 1, trials: 1000, backend: Backend::Rational, tolerance: 1e-12, flip_epsilon: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    pub failures: usize,
    pub worst_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<String>,
}

impl PropertyResult {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), passed: true, trials: 0, failures: 0, worst_residual: 0.0, first_failure: None }
    }

    fn check(&mut self, ok: bool, residual: f64, detail: impl FnOnce() -> String) {
        self.worst_residual = self.worst_residual.max(residual);
        if !ok {
            self.passed = false;
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn trial(&mut self) {
        self.trials += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountEntry {
    pub concomitant: String,
    pub measured: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetRank {
    pub members: Vec<String>,
    pub rank: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub definition: String,
    pub counts: Vec<CountEntry>,
    pub raw_valence4: Vec<CountEntry>,
    pub union: SetRank,
    pub sum_of_ranks: usize,
    pub alternatives: Vec<SetRank>,
    pub real_restriction: SetRank,
    /// Float-backend ranks of the same spans, in the order
    /// counts, union, real restriction.
    pub float_cross_check: Vec<usize>,
}

impl CompletenessReport {
    pub fn passed(&self) -> bool {
        self.counts.iter().chain(&self.raw_valence4).all(|c| c.measured == c.expected)
            && [&self.union, &self.real_restriction].into_iter().chain(&self.alternatives).all(|s| s.rank == s.expected)
            && self.sum_of_ranks == self.union.rank
    }

    /// Measured ranks of the six table rows, in table order.
    pub fn table_ranks(&self) -> Vec<usize> {
        COUNT_TABLE
            .iter()
            .map(|row| self.counts.iter().find(|c| c.concomitant == row.tag.name()).map_or(0, |c| c.measured))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub schema_version: u32,
    pub backend: Backend,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub flip_epsilon: bool,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
    pub duality_signs: BTreeMap<String, DualitySign>,
    pub completeness: CompletenessReport,
    /// Largest float residual over backend-native comparisons (zero for the
    /// rational backend).
    pub worst_float_residual: f64,
}

impl PropertyReport {
    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn failed_properties(&self) -> Vec<&str> {
        self.properties.iter().filter(|p| !p.passed).map(|p| p.name.as_str()).collect()
    }
}

/// Deterministic per-trial seed for an independent stream.
pub fn stream_seed(seed: u64, stream: u64, trial: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stream << 40).wrapping_add(trial)
}

const STREAM_COMPLEX: u64 = 1;
const STREAM_REAL: u64 = 2;
const STREAM_LORENTZ: u64 = 3;
const STREAM_PHASE: u64 = 4;

/// Exact unit phases used by the rational phase property.
pub fn exact_unit_phases() -> [GaussianRational; 3] {
    let r = |n: i128, d: i128| Rational::new(n, d);
    [gaussian(r(0, 1), r(1, 1)), gaussian(r(3, 5), r(4, 5)), gaussian(r(5, 13), r(12, 13))]
}

/// The fixed set of random float phase angles for a seed.
pub fn float_phases(seed: u64) -> [f64; FLOAT_PHASES] {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, STREAM_PHASE, 0));
    std::array::from_fn(|_| rng.random_range(0.0..2.0 * PI))
}

/// A random boost (speed up to [`MAX_BOOST`]) composed with a random rotation.
pub fn random_lorentz(seed: u64) -> LorentzTransform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = || loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    };
    let (dir, axis) = (unit(), unit());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB005_7000);
    let speed = rng.random_range(0.0..MAX_BOOST);
    let angle = rng.random_range(-PI..PI);
    let boost = LorentzTransform::boost(dir.map(|x| x * speed)).expect("subluminal");
    let rotation = LorentzTransform::rotation(axis, angle).expect("nonzero axis");
    boost.compose(&rotation)
}

fn tensor_residual<S: Scalar>(a: &SmallTensor<S>, b: &SmallTensor<S>, tol: f64) -> (bool, f64) {
    (a.approx_eq(b, tol), a.max_abs_diff(b))
}

fn scalar_residual<S: Scalar>(a: S, b: S, tol: f64) -> (bool, f64) {
    (a.approx_eq(&b, tol), (a - b).magnitude())
}

fn zero_residual<S: Scalar>(a: &SmallTensor<S>, tol: f64) -> (bool, f64) {
    (a.is_zero(tol), a.max_abs())
}

fn set_residual<S: Scalar>(a: &ConcomitantSet<S>, b: &ConcomitantSet<S>, tol: f64) -> (bool, f64, Option<Concomitant>) {
    let m = a.first_mismatch(b, tol);
    (m.is_none(), a.max_abs_diff(b), m)
}

const VALENCE4: [Concomitant; 6] = [
    Concomitant::TPrime,
    Concomitant::QPrime,
    Concomitant::DPrime,
    Concomitant::XPrime,
    Concomitant::D4,
    Concomitant::X4,
];

struct Props {
    list: Vec<PropertyResult>,
}

impl Props {
    fn get(&mut self, name: &str) -> &mut PropertyResult {
        if let Some(i) = self.list.iter().position(|p| p.name == name) {
            &mut self.list[i]
        } else {
            self.list.push(PropertyResult::new(name));
            self.list.last_mut().expect("just pushed")
        }
    }
}

struct Ctx<'a, S: Scalar> {
    tol: f64,
    eps_dual: &'a SmallTensor<S>,
}

/// Per-trial checks on one complex bivector.
fn complex_trial<S: Scalar>(props: &mut Props, signs: &mut BTreeMap<Concomitant, DualitySign>, ctx: &Ctx<S>, k: u64, f: &Bivector<S>) {
    let tol = ctx.tol;
    let at = |what: &str| format!("trial {k}: {what}");

    let p = props.get("antisymmetry");
    p.trial();
    let m = f.matrix_form();
    let (ok, r) = tensor_residual(&m.permuted(&[1, 0]).expect("rank 2").neg(), &m, tol);
    p.check(ok, r, || at("F^ab != -F^ba"));

    let p = props.get("dual_convention");
    p.trial();
    let d = f.dual_with(ctx.eps_dual);
    let swap = f.duality_transform();
    let ok1 = d.approx_eq(&swap, tol);
    let ok2 = d.dual_with(ctx.eps_dual).approx_eq(&f.scale(-S::one()), tol);
    let r = d.sub(&swap).components().iter().map(|c| c.magnitude()).fold(0.0, f64::max);
    p.check(ok1 && ok2, r, || at("Levi-Civita dual disagrees with E->-B, B->E"));

    let p = props.get("self_dual_parts");
    p.trial();
    let sd = f.self_dual_parts();
    let ok = sd.minus.dual().approx_eq(&sd.minus.scale(-S::i()), tol)
        && sd.plus.dual().approx_eq(&sd.plus.scale(S::i()), tol)
        && sd.minus.add(&sd.plus).approx_eq(f, tol)
        && sd.conj_minus.add(&sd.conj_plus).approx_eq(&f.conj(), tol);
    p.check(ok, 0.0, || at("self-dual eigenvalues or reconstruction"));

    let set = compute(f);

    let p = props.get("valence4_symmetry");
    p.trial();
    for tag in VALENCE4 {
        let t = set.tensor(tag).expect("valence 4");
        let checks = [
            tensor_residual(&t.permuted(&[1, 0, 2, 3]).expect("rank 4").neg(), t, tol),
            tensor_residual(&t.permuted(&[0, 1, 3, 2]).expect("rank 4").neg(), t, tol),
            tensor_residual(&t.permuted(&[2, 3, 0, 1]).expect("rank 4").conj(), t, tol),
        ];
        for (ok, r) in checks {
            p.check(ok, r, || at(&format!("{tag} pair antisymmetry / hermitian exchange")));
        }
    }

    let p = props.get("valence2_symmetry");
    p.trial();
    let sym = |t: &SmallTensor<S>, sign: i64| t.permuted(&[1, 0]).expect("rank 2").scale(S::from_int(sign));
    for (tag, t, sign) in [
        (Concomitant::T2, &set.t2, 1),
        (Concomitant::Q2, &set.q2, 1),
        (Concomitant::D2, &set.d2, -1),
        (Concomitant::X2, &set.x2, -1),
    ] {
        let (ok, r) = tensor_residual(&sym(t, sign), t, tol);
        p.check(ok && t.is_real(tol), r, || at(&format!("{tag} symmetry or reality")));
    }
    let four = S::from_int(4);
    let (ok1, r1) = scalar_residual(trace2(&set.d2_raw).expect("rank 2"), four * set.scalars.lplus, tol);
    let (ok2, r2) = scalar_residual(trace2(&set.x2_raw).expect("rank 2"), four * set.scalars.lminus, tol);
    p.check(ok1 && ok2, r1.max(r2), || at("raw valence-2 traces != 4 L"));
    let (ok1, r1) = tensor_residual(&set.d2_raw.im_part(), &set.d2, tol);
    let (ok2, r2) = tensor_residual(&set.x2_raw.im_part(), &set.x2, tol);
    p.check(ok1 && ok2, r1.max(r2), || at("irreducible valence-2 != Im(raw)"));
    p.check(set.scalars.lplus.is_real(tol) && set.scalars.lminus.is_real(tol), 0.0, || at("L not real"));

    let p = props.get("contraction_signs");
    p.trial();
    for tag in [Concomitant::TPrime, Concomitant::QPrime, Concomitant::DPrime, Concomitant::XPrime] {
        let t = set.tensor(tag).expect("valence 4");
        let mid = middle_trace(t).expect("rank 4");
        for ((a, b), sign) in [((0, 3), 1), ((0, 2), -1), ((1, 3), -1), ((0, 1), 0), ((2, 3), 0)] {
            let c = t.adjust_index(b, Variance::Lower).and_then(|x| x.contract(a, b)).expect("rank 4");
            let (ok, r) = tensor_residual(&c, &mid.scale(S::from_int(sign)), tol);
            p.check(ok, r, || at(&format!("{tag} contraction ({a},{b})")));
        }
    }

    let p = props.get("trace_free");
    p.trial();
    for (tag, t) in [(Concomitant::T2, &set.t2), (Concomitant::Q2, &set.q2), (Concomitant::D2, &set.d2), (Concomitant::X2, &set.x2)] {
        let tr = trace2(t).expect("rank 2");
        let (ok, r) = scalar_residual(tr, S::zero(), tol);
        p.check(ok, r, || at(&format!("trace of {tag}")));
    }

    let p = props.get("irreducibility");
    p.trial();
    for (tag, t) in [(Concomitant::D4, &set.d4), (Concomitant::X4, &set.x4)] {
        let report = irreducibility_report(t, tol).expect("rank 4");
        let worst = report.pair_traces.iter().chain(&report.triple_epsilon).chain(report.full_epsilon.iter()).fold(0.0f64, |a, &b| a.max(b));
        p.check(report.certified, worst, || at(&format!("{tag}: {}", report.failures.join(", "))));
    }

    let p = props.get("mutual_duality");
    p.trial();
    let dual = |t: &SmallTensor<S>| dual2_with(t, ctx.eps_dual).expect("contraction");
    for (name, (ok, r)) in [
        ("dual(D) = X", tensor_residual(&dual(&set.d2), &set.x2, tol)),
        ("dual(X) = -D", tensor_residual(&dual(&set.x2), &set.d2.neg(), tol)),
        ("dual(T) = 0", zero_residual(&dual(&set.t2), tol)),
        ("dual(Q) = 0", zero_residual(&dual(&set.q2), tol)),
    ] {
        p.check(ok, r, || at(name));
    }

    let p = props.get("leftmost_pair_duality");
    p.trial();
    for (name, (ok, r)) in [
        ("dual(D4) = X4", tensor_residual(&dual(&set.d4), &set.x4, tol)),
        ("dual(X4) = -D4", tensor_residual(&dual(&set.x4), &set.d4.neg(), tol)),
    ] {
        p.check(ok, r, || at(name));
    }

    let after = compute(&f.duality_transform());
    for tag in Concomitant::ALL {
        let s = duality_sign_of(&set.components(tag), &after.components(tag), tol);
        let e = signs.entry(tag).or_insert(DualitySign::Undetermined);
        *e = e.merge(s);
    }

    let p = props.get("reconstruction");
    p.trial();
    for (tag, direct) in [(Concomitant::T2, &set.t_prime), (Concomitant::Q2, &set.q_prime)] {
        let rebuilt = reconstruct_v4(tag, &set.t2, &set.q2).expect("valid tag");
        let (ok, r) = tensor_residual(&rebuilt.tensor, direct, tol);
        p.check(ok, r, || at(&format!("rebuilding from {tag}")));
    }

    let p = props.get("non_reconstructibility");
    p.trial();
    let generic = f.components().iter().all(|c| !c.is_zero());
    p.check(!generic || (!set.d4.is_zero(tol) && !set.x4.is_zero(tol)), 0.0, || at("D4/X4 vanish for a generic field"));

    let p = props.get("oracle_equivalence");
    p.trial();
    let (ok, r, which) = set_residual(&set, &eb_oracle(f), tol);
    p.check(ok, r, || at(&format!("{} differs from the E,B formulas", which.map_or("?", |t| t.name()))));
}

fn exact_phase_trial(props: &mut Props, k: u64, f: &Bivector<GaussianRational>, set: &ConcomitantSet<GaussianRational>) {
    let p = props.get("phase_invariance_exact");
    p.trial();
    for z in exact_unit_phases() {
        let rotated = compute(&f.phase_rotate(z).expect("unit phase"));
        let (ok, r, which) = set_residual(&rotated, set, 0.0);
        p.check(ok, r, || format!("trial {k}: {} changes under phase {z}", which.map_or("?", |t| t.name())));
    }
}

fn float_phase_trial(props: &mut Props, tol: f64, k: u64, f: &Bivector<Complex64>, set: &ConcomitantSet<Complex64>, phase: f64) {
    let p = props.get("phase_invariance_float");
    p.trial();
    let rotated = compute(&f.phase_rotate_angle(phase));
    let (ok, r, which) = set_residual(&rotated, set, tol);
    p.check(ok, r, || format!("trial {k}: {} changes under phase {phase}", which.map_or("?", |t| t.name())));
}

fn real_trial<S: Scalar>(props: &mut Props, tol: f64, k: u64, f: &Bivector<S>) {
    let p = props.get("real_degeneration");
    p.trial();
    let set = compute(f);
    for (tag, t) in [(Concomitant::Q2, &set.q2), (Concomitant::D2, &set.d2), (Concomitant::X2, &set.x2)] {
        let (ok, r) = zero_residual(t, tol);
        p.check(ok, r, || format!("trial {k}: {tag} nonzero for a real field"));
    }
    let reference = real_reference(f).expect("real input");
    let (ok1, r1) = scalar_residual(reference.lplus, set.scalars.lplus, tol);
    let (ok2, r2) = scalar_residual(reference.lminus, set.scalars.lminus, tol);
    let (ok3, r3) = tensor_residual(&reference.stress, &set.t2, tol);
    p.check(ok1 && ok2 && ok3, r1.max(r2).max(r3), || format!("trial {k}: classical invariants differ"));
}

fn lorentz_trial(props: &mut Props, seed: u64, k: u64) {
    let p = props.get("lorentz_covariance");
    p.trial();
    let f = random_bivector::<Complex64>(stream_seed(seed, STREAM_LORENTZ, k));
    let lambda = random_lorentz(stream_seed(seed, STREAM_LORENTZ, k) ^ 0x1A3B_5C7D);
    let before = compute(&f);
    let after = compute(&lambda.apply_bivector(&f));
    for tag in Concomitant::ALL {
        let (ok, r) = match tag {
            Concomitant::Lplus | Concomitant::Lminus => {
                let (a, b) = (before.components(tag)[0], after.components(tag)[0]);
                scalar_residual(a, b, LORENTZ_TOLERANCE)
            }
            _ => {
                let moved = lambda.apply_tensor(before.tensor(tag).expect("tensor"));
                tensor_residual(&moved, after.tensor(tag).expect("tensor"), LORENTZ_TOLERANCE)
            }
        };
        p.check(ok, r, || format!("trial {k}: {tag} is not covariant"));
    }
}

fn run_trials<S: Scalar>(
    config: &SuiteConfig,
    props: &mut Props,
    signs: &mut BTreeMap<Concomitant, DualitySign>,
    mut extra: impl FnMut(&mut Props, u64, &Bivector<S>, &ConcomitantSet<S>),
) {
    let eps = if config.flip_epsilon {
        S::constants().eps_dual.neg()
    } else {
        S::constants().eps_dual.clone()
    };
    let ctx = Ctx { tol: config.tolerance, eps_dual: &eps };
    for k in 0..config.trials as u64 {
        let f = random_bivector::<S>(stream_seed(config.seed, STREAM_COMPLEX, k));
        complex_trial(props, signs, &ctx, k, &f);
        extra(props, k, &f, &compute(&f));
        real_trial(props, config.tolerance, k, &random_real_bivector::<S>(stream_seed(config.seed, STREAM_REAL, k)));
    }
}

const RANKED: [Concomitant; 12] = [
    Concomitant::Lplus,
    Concomitant::Lminus,
    Concomitant::T2,
    Concomitant::Q2,
    Concomitant::D2,
    Concomitant::X2,
    Concomitant::D4,
    Concomitant::X4,
    Concomitant::TPrime,
    Concomitant::QPrime,
    Concomitant::DPrime,
    Concomitant::XPrime,
];

fn collect<'a, S>(forms: &'a [Vec<HermitianFormMatrix<S>>], tags: &[Concomitant]) -> Vec<&'a HermitianFormMatrix<S>> {
    tags.iter().flat_map(|t| forms[RANKED.iter().position(|r| r == t).expect("ranked tag")].iter()).collect()
}

fn expected_count(tag: Concomitant) -> usize {
    match tag {
        Concomitant::X2 => 6,
        Concomitant::X4 => 10,
        Concomitant::TPrime | Concomitant::QPrime | Concomitant::DPrime | Concomitant::XPrime => RAW_VALENCE4_EXPECTED,
        t => COUNT_TABLE.iter().find(|r| r.tag == t).map_or(0, |r| r.expected),
    }
}

fn names(tags: &[Concomitant]) -> Vec<String> {
    tags.iter().map(|t| t.name().to_string()).collect()
}

/// Exact completeness ranks plus the float cross-check.
pub fn completeness_report() -> Result<CompletenessReport, VerifyError> {
    use Concomitant::*;
    let exact = concomitant_forms::<GaussianRational>(&RANKED, 0.0)?;
    let float = concomitant_forms::<Complex64>(&RANKED, 1e-9)?;
    let rank = |tags: &[Concomitant]| completeness_rank(&collect(&exact, tags), Restriction::Full);
    let float_rank = |tags: &[Concomitant], r| completeness_rank_float(&collect(&float, tags), r, 1e-9);

    let entry = |t: Concomitant| CountEntry { concomitant: t.name().into(), measured: rank(&[t]), expected: expected_count(t) };
    let counts: Vec<CountEntry> = [Lplus, Lminus, T2, Q2, D2, X2, D4, X4].into_iter().map(entry).collect();
    let raw_valence4 = [TPrime, QPrime, DPrime, XPrime].into_iter().map(entry).collect();

    let table: Vec<Concomitant> = COUNT_TABLE.iter().map(|r| r.tag).collect();
    let union = SetRank { members: names(&table), rank: rank(&table), expected: UNION_EXPECTED };
    let sum_of_ranks = table.iter().map(|&t| counts.iter().find(|c| c.concomitant == t.name()).map_or(0, |c| c.measured)).sum();
    let mut alternatives = Vec::new();
    for v2 in [D2, X2] {
        for v4 in [D4, X4] {
            let tags = [Lplus, Lminus, T2, Q2, v2, v4];
            alternatives.push(SetRank { members: names(&tags), rank: rank(&tags), expected: UNION_EXPECTED });
        }
    }
    let real_tags = [Lplus, Lminus, T2, D4];
    let real_restriction = SetRank {
        members: names(&real_tags),
        rank: completeness_rank(&collect(&exact, &real_tags), Restriction::RealBivectors),
        expected: REAL_RESTRICTION_EXPECTED,
    };
    let mut float_cross_check: Vec<usize> =
        [Lplus, Lminus, T2, Q2, D2, X2, D4, X4].iter().map(|&t| float_rank(&[t], Restriction::Full)).collect();
    float_cross_check.push(float_rank(&table, Restriction::Full));
    float_cross_check.push(float_rank(&real_tags, Restriction::RealBivectors));

    Ok(CompletenessReport {
        definition: COUNT_DEFINITION.to_string(),
        counts,
        raw_valence4,
        union,
        sum_of_ranks,
        alternatives,
        real_restriction,
        float_cross_check,
    })
}

/// Runs every property. Failures are report entries; the report is a pure
/// function of the configuration.
pub fn run_suite(config: &SuiteConfig) -> PropertyReport {
    let mut props = Props { list: Vec::new() };
    let mut signs = BTreeMap::new();
    let phases = float_phases(config.seed);
    let tol = config.tolerance;

    match config.backend {
        Backend::Rational => run_trials::<GaussianRational>(config, &mut props, &mut signs, |props, k, f, set| {
            exact_phase_trial(props, k, f, set);
            let fc = f.to_c64();
            float_phase_trial(props, tol, k, &fc, &compute(&fc), phases[k as usize % FLOAT_PHASES]);
        }),
        Backend::Float => run_trials::<Complex64>(config, &mut props, &mut signs, |props, k, f, set| {
            float_phase_trial(props, tol, k, f, set, phases[k as usize % FLOAT_PHASES]);
        }),
    }
    for k in 0..config.trials.min(LORENTZ_TRIALS) as u64 {
        lorentz_trial(&mut props, config.seed, k);
    }

    let p = props.get("duality_eigenvalues");
    p.trials = config.trials;
    for (tag, sign) in &signs {
        p.check(sign.is_pure(), 0.0, || format!("{tag} has no consistent duality sign ({sign})"));
    }

    let completeness = completeness_report();
    let p = props.get("hermitian_form_extraction");
    p.check(completeness.is_ok(), 0.0, || completeness.as_ref().err().map(|e| e.to_string()).unwrap_or_default());
    let completeness = completeness.unwrap_or_else(|_| CompletenessReport {
        definition: COUNT_DEFINITION.to_string(),
        counts: vec![],
        raw_valence4: vec![],
        union: SetRank { members: vec![], rank: 0, expected: UNION_EXPECTED },
        sum_of_ranks: 0,
        alternatives: vec![],
        real_restriction: SetRank { members: vec![], rank: 0, expected: REAL_RESTRICTION_EXPECTED },
        float_cross_check: vec![],
    });
    let ok = completeness.passed();
    props.get("completeness_counts").check(ok, 0.0, || "measured ranks differ from the table".into());
    let exact: Vec<usize> = completeness
        .counts
        .iter()
        .map(|c| c.measured)
        .chain([completeness.union.rank, completeness.real_restriction.rank])
        .collect();
    let agree = exact == completeness.float_cross_check;
    props.get("float_rank_cross_check").check(agree, 0.0, || format!("float ranks {:?}", completeness.float_cross_check));

    let worst_float_residual = match config.backend {
        Backend::Rational => 0.0,
        Backend::Float => props
            .list
            .iter()
            .filter(|p| p.name != "lorentz_covariance")
            .map(|p| p.worst_residual)
            .fold(0.0, f64::max),
    };
    let passed = props.list.iter().all(|p| p.passed);
    PropertyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        backend: config.backend,
        seed: config.seed,
        trials: config.trials,
        tolerance: config.tolerance,
        flip_epsilon: config.flip_epsilon,
        passed,
        properties: props.list,
        duality_signs: signs.into_iter().map(|(t, s)| (t.name().to_string(), s)).collect(),
        completeness,
        worst_float_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rational_suite_passes() {
        let report = run_suite(&SuiteConfig { trials: 5, ..SuiteConfig::default() });
        assert!(report.passed, "{:?}", report.failed_properties());
        assert_eq!(report.completeness.table_ranks(), vec![1, 1, 9, 9, 6, 10]);
        assert_eq!(report.completeness.union.rank, 36);
    }

    #[test]
    fn zero_trials_runs_structural_checks() {
        let report = run_suite(&SuiteConfig { trials: 0, ..SuiteConfig::default() });
        assert!(report.passed);
        assert_eq!(report.property("oracle_equivalence"), None);
    }

    #[test]
    fn flipped_epsilon_fails() {
        let report = run_suite(&SuiteConfig { trials: 3, flip_epsilon: true, ..SuiteConfig::default() });
        assert!(!report.passed);
        assert!(report.failed_properties().contains(&"dual_convention"));
    }

    #[test]
    fn float_suite_residuals() {
        let report = run_suite(&SuiteConfig { trials: 5, backend: Backend::Float, ..SuiteConfig::default() });
        assert!(report.passed, "{:?}", report.failed_properties());
        assert!(report.worst_float_residual < 1e-12);
    }

    #[test]
    fn deterministic() {
        let c = SuiteConfig { trials: 2, ..SuiteConfig::default() };
        assert_eq!(run_suite(&c), run_suite(&c));
    }

    #[test]
    fn report_json_round_trip() {
        let report = run_suite(&SuiteConfig { trials: 2, backend: Backend::Float, ..SuiteConfig::default() });
        let text = serde_json::to_string(&report).unwrap();
        let back: PropertyReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        assert!(text.contains(r#""T2":"+1""#));
    }
}
