//! Acceptance criteria, one line per criterion. Exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use concom_core::bivector::random_real_bivector;
use concom_core::concomitants::{middle_trace, reconstruct_v4, trace2};
use concom_core::signal::{analytic_signal, concomitant_series, parse_selection, synth_plane_wave, PlaneWaveParams, Polarization};
use concom_core::tensor::{dual2, dual_left};
use concom_core::verify::irreducibility_report;
use concom_core::verify::suite::{exact_unit_phases, float_phases, random_lorentz, stream_seed, LORENTZ_TOLERANCE};
use concom_core::verify::{completeness_report, COUNT_TABLE};
use concom_core::{
    compute, eb_oracle, random_bivector, real_reference, Complex64, Concomitant, ConcomitantSet, GaussianRational as Q, Scalar,
    SmallTensor, Variance,
};

const TRIALS: u64 = 1000;
const REAL_TRIALS: u64 = 500;
const LORENTZ_TRIALS: u64 = 200;
const FLOAT_TOL: f64 = 1e-12;
const SEED: u64 = 20_240_829;

const RAW: [Concomitant; 4] = [Concomitant::TPrime, Concomitant::QPrime, Concomitant::DPrime, Concomitant::XPrime];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

struct Fixture {
    exact: Vec<(concom_core::Bivector<Q>, ConcomitantSet<Q>)>,
    float: Vec<(concom_core::Bivector<Complex64>, ConcomitantSet<Complex64>)>,
}

fn fixture() -> Fixture {
    let exact: Vec<_> = (0..TRIALS)
        .map(|k| {
            let f = random_bivector::<Q>(stream_seed(SEED, 1, k));
            let set = compute(&f);
            (f, set)
        })
        .collect();
    let float = exact
        .iter()
        .map(|(f, _)| {
            let g = f.to_c64();
            let set = compute(&g);
            (g, set)
        })
        .collect();
    Fixture { exact, float }
}

/// Largest violation of the pair antisymmetry, hermitian exchange and
/// contraction-sign relations of a raw valence-4 tensor.
fn raw_relations<S: Scalar>(t: &SmallTensor<S>) -> f64 {
    let mut worst = 0.0f64;
    let perm = |p: &[usize]| t.permuted(p).unwrap();
    worst = worst.max(perm(&[1, 0, 2, 3]).neg().max_abs_diff(t));
    worst = worst.max(perm(&[0, 1, 3, 2]).neg().max_abs_diff(t));
    worst = worst.max(perm(&[2, 3, 0, 1]).conj().max_abs_diff(t));
    let mid = middle_trace(t).unwrap();
    for ((a, b), sign) in [((0, 3), 1), ((0, 2), -1), ((1, 3), -1), ((0, 1), 0), ((2, 3), 0)] {
        let c = t.adjust_index(b, Variance::Lower).unwrap().contract(a, b).unwrap();
        worst = worst.max(c.max_abs_diff(&mid.scale(S::from_int(sign))));
    }
    worst
}

fn symmetry_suite(fx: &Fixture) -> Outcome {
    let t = Instant::now();
    let exact_failures = fx.exact.iter().filter(|(_, s)| RAW.iter().any(|&tag| raw_relations(s.tensor(tag).unwrap()) != 0.0)).count();
    let exact_time = t.elapsed().as_secs_f64();
    let float_worst =
        fx.float.iter().flat_map(|(_, s)| RAW.iter().map(move |&tag| raw_relations(s.tensor(tag).unwrap()))).fold(0.0, f64::max);
    outcome(
        exact_failures == 0 && float_worst < FLOAT_TOL,
        format!("exact failures {exact_failures}/{TRIALS} ({exact_time:.2} s), float residual {float_worst:.2e}"),
    )
}

fn irreducibility(fx: &Fixture) -> Outcome {
    let mut failures = 0;
    for (_, s) in &fx.exact {
        let traces_zero = [&s.t2, &s.q2, &s.d2, &s.x2].iter().all(|t| trace2(t).unwrap().is_zero());
        let certified = [&s.d4, &s.x4].iter().all(|t| irreducibility_report(t, 0.0).unwrap().certified);
        if !(traces_zero && certified) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("failures {failures}/{TRIALS} (traces, pair traces, full and triple epsilon)"))
}

fn duality(fx: &Fixture) -> Outcome {
    let mut failures = 0;
    for (_, s) in &fx.exact {
        let ok = dual2(&s.d2).unwrap() == s.x2
            && dual2(&s.x2).unwrap() == s.d2.neg()
            && dual_left(&s.d4).unwrap() == s.x4
            && dual_left(&s.x4).unwrap() == s.d4.neg()
            && dual2(&s.t2).unwrap().is_zero(0.0)
            && dual2(&s.q2).unwrap().is_zero(0.0);
        failures += usize::from(!ok);
    }
    outcome(failures == 0, format!("failures {failures}/{TRIALS}"))
}

fn phase_invariance(fx: &Fixture) -> Outcome {
    let phases = exact_unit_phases();
    let exact_failures = fx
        .exact
        .iter()
        .filter(|(f, s)| phases.iter().any(|&z| compute(&f.phase_rotate(z).unwrap()).first_mismatch(s, 0.0).is_some()))
        .count();
    let angles = float_phases(SEED);
    let mut float_worst = 0.0f64;
    for (f, s) in fx.float.iter().take(100) {
        for &phi in &angles {
            float_worst = float_worst.max(compute(&f.phase_rotate_angle(phi)).max_abs_diff(s));
        }
    }
    outcome(
        exact_failures == 0 && float_worst < FLOAT_TOL,
        format!("exact failures {exact_failures}/{TRIALS} over 3 phases, float residual {float_worst:.2e} over 16 phases"),
    )
}

fn completeness() -> Outcome {
    let c = match completeness_report() {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let ranks = c.table_ranks();
    let expected: Vec<usize> = COUNT_TABLE.iter().map(|r| r.expected).collect();
    let alternatives: Vec<usize> = c.alternatives.iter().map(|a| a.rank).collect();
    let passed = ranks == expected && c.union.rank == 36 && c.real_restriction.rank == 21 && alternatives.iter().all(|&r| r == 36);
    outcome(
        passed,
        format!("ranks {ranks:?}, union {}, real {}, alternatives {alternatives:?}", c.union.rank, c.real_restriction.rank),
    )
}

fn reconstruction(fx: &Fixture) -> Outcome {
    let failures = fx
        .exact
        .iter()
        .filter(|(_, s)| {
            reconstruct_v4(Concomitant::T2, &s.t2, &s.q2).unwrap().tensor != s.t_prime
                || reconstruct_v4(Concomitant::Q2, &s.t2, &s.q2).unwrap().tensor != s.q_prime
        })
        .count();
    outcome(failures == 0, format!("failures {failures}/{TRIALS}"))
}

fn oracle(fx: &Fixture) -> Outcome {
    let mut failures = 0;
    let mut first = None;
    for (k, (f, s)) in fx.exact.iter().enumerate() {
        if let Some(tag) = s.first_mismatch(&eb_oracle(f), 0.0) {
            failures += 1;
            first.get_or_insert((k, tag));
        }
    }
    let detail = match first {
        Some((k, tag)) => format!("failures {failures}/{TRIALS}, first trial {k} on {tag}"),
        None => format!("all 14 concomitants equal on {TRIALS} trials"),
    };
    outcome(failures == 0, detail)
}

fn real_degeneration() -> Outcome {
    let mut failures = 0;
    for k in 0..REAL_TRIALS {
        let f = random_real_bivector::<Q>(stream_seed(SEED, 2, k));
        let s = compute(&f);
        let r = real_reference(&f).unwrap();
        let ok = s.q2.is_zero(0.0)
            && s.d2.is_zero(0.0)
            && s.x2.is_zero(0.0)
            && r.lplus == s.scalars.lplus
            && r.lminus == s.scalars.lminus
            && r.stress == s.t2;
        failures += usize::from(!ok);
    }
    outcome(failures == 0, format!("failures {failures}/{REAL_TRIALS}"))
}

fn lorentz() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..LORENTZ_TRIALS {
        let f = random_bivector::<Complex64>(stream_seed(SEED, 3, k));
        let lambda = random_lorentz(stream_seed(SEED, 3, k) ^ 0x5EED);
        let before = compute(&f);
        let after = compute(&lambda.apply_bivector(&f));
        for tag in Concomitant::ALL {
            let r = match tag {
                Concomitant::Lplus | Concomitant::Lminus => (before.components(tag)[0] - after.components(tag)[0]).norm(),
                _ => lambda.apply_tensor(before.tensor(tag).unwrap()).max_abs_diff(after.tensor(tag).unwrap()),
            };
            worst = worst.max(r);
        }
    }
    outcome(worst < LORENTZ_TOLERANCE, format!("{LORENTZ_TRIALS} transforms, residual {worst:.2e}"))
}

fn signal_pipeline() -> Outcome {
    let selection = parse_selection("T00,Q30,Lplus,Lminus").unwrap();
    let mut worst = 0.0f64;
    for (polarization, spin) in [(Polarization::CircularLeft, 2.0), (Polarization::CircularRight, -2.0)] {
        let p = PlaneWaveParams { polarization, amplitude: 1.0, samples: 1024, ..Default::default() };
        let series = concomitant_series(&analytic_signal(&synth_plane_wave(&p).unwrap()), &selection).unwrap();
        for (name, target) in [("T00", 2.0), ("Q30", spin), ("Lplus", 0.0), ("Lminus", 0.0)] {
            let col = series.column(name).unwrap();
            worst = worst.max(col.iter().map(|x| (x - target).abs()).fold(0.0, f64::max));
        }
    }
    outcome(worst < 1e-6, format!("both handednesses, worst deviation {worst:.2e}"))
}

fn verify_binary() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_concom");
    let report = tempfile::NamedTempFile::new().unwrap();
    let run = |args: &[&str]| Command::new(bin).args(args).env_remove("CONCOM_BACKEND").output().unwrap();
    let start = Instant::now();
    let full = run(&["verify", "--trials", "1000", "--backend", "rational", "--report", report.path().to_str().unwrap()]);
    let full_time = start.elapsed();
    let flipped = run(&["verify", "--trials", "10", "--flip-epsilon"]);
    let passed = full.status.success() && full_time < Duration::from_secs(60) && flipped.status.code() == Some(1);
    outcome(
        passed,
        format!(
            "1000-trial verify exit {:?} in {:.1} s, --flip-epsilon exit {:?}",
            full.status.code(),
            full_time.as_secs_f64(),
            flipped.status.code()
        ),
    )
}

fn main() {
    let start = Instant::now();
    let fx = fixture();
    let setup = start.elapsed();
    println!("shared fixture: {TRIALS} rational and float concomitant sets in {:.2} s", setup.as_secs_f64());

    // Criteria that share the fixture are charged its construction time.
    type Check<'a> = (u32, &'a str, Option<Duration>, Box<dyn Fn() -> Outcome + 'a>);
    let checks: Vec<Check> = vec![
        (1, "symmetry suite", Some(Duration::from_secs(10)), Box::new(|| symmetry_suite(&fx))),
        (2, "trace and irreducibility", None, Box::new(|| irreducibility(&fx))),
        (3, "duality", None, Box::new(|| duality(&fx))),
        (4, "phase invariance", None, Box::new(|| phase_invariance(&fx))),
        (5, "completeness counts", Some(Duration::from_secs(30)), Box::new(completeness)),
        (6, "reconstruction", None, Box::new(|| reconstruction(&fx))),
        (7, "oracle equivalence", None, Box::new(|| oracle(&fx))),
        (8, "real degeneration", None, Box::new(real_degeneration)),
        (9, "Lorentz covariance", None, Box::new(lorentz)),
        (10, "signal pipeline", Some(Duration::from_secs(1)), Box::new(signal_pipeline)),
        (11, "verify binary and mutation hook", None, Box::new(verify_binary)),
    ];

    let mut failed = 0;
    for (id, name, budget, check) in checks {
        let t = Instant::now();
        let mut o = check();
        let mut elapsed = t.elapsed();
        if [1, 2, 3, 4, 6, 7].contains(&id) {
            elapsed += setup;
        }
        if let Some(limit) = budget {
            if elapsed >= limit {
                o.passed = false;
                o.detail.push_str(&format!("; over the {} s budget", limit.as_secs()));
            }
        }
        failed += usize::from(!o.passed);
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status} {name:<32} {:>7.2} s  {}", elapsed.as_secs_f64(), o.detail);
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
