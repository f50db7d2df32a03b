// Acceptance run: each criterion prints one PASS/FAIL line with the measured
// value next to its threshold. Runs sequentially (no test harness) so the
// timing criteria see an otherwise idle process.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{bhattacharyya_sq, expectation, pair, pure_overlap, spread};
use uhlfid::bench::{self, BenchConfig};
use uhlfid::fidelity::{miszczak_decomposition, sandwich_spectrum};
use uhlfid::states::{
    conjugate, pure_state, random_probability_vector, random_state_vector, random_unitary, tensor,
    validate, StateSeed,
};
use uhlfid::verify::check_block_structure;
use uhlfid::{fidelity, ComplexMatrix, DensityMatrix, FidelityMethod, DEFAULT_TOL};

const DIMS: [usize; 7] = [2, 3, 4, 8, 16, 32, 64];

struct Outcome {
    passed: bool,
    detail: String,
}

/// Worst observed value against an upper bound.
fn at_most(worst: f64, bound: f64) -> Outcome {
    Outcome {
        passed: worst <= bound,
        detail: format!("worst {worst:.3e} (limit {bound:.0e})"),
    }
}

fn values(rho: &DensityMatrix, sigma: &DensityMatrix) -> Vec<f64> {
    FidelityMethod::CONCRETE
        .iter()
        .map(|&m| fidelity(rho, sigma, m).expect("fidelity").value)
        .collect()
}

fn equivalence(master: u64, ranks: impl Fn(usize) -> (usize, usize), bound: f64) -> Outcome {
    let mut worst = 0.0f64;
    for (d, &n) in DIMS.iter().enumerate() {
        let (r, s) = ranks(n);
        for k in 0..50u64 {
            let (rho, sigma) = pair(n, r, s, master, (d as u64) << 16 | k);
            worst = worst.max(spread(&values(&rho, &sigma)));
        }
    }
    at_most(worst, bound)
}

fn method_equivalence() -> Outcome {
    equivalence(1, |n| (n, n), 1e-8)
}

fn semidefinite() -> Outcome {
    let half = |n: usize| n.div_ceil(2);
    let one = equivalence(2, |n| (half(n), n), 1e-7);
    let both = equivalence(3, |n| (half(n), half(n).max(1)), 1e-7);
    Outcome {
        passed: one.passed && both.passed,
        detail: format!(
            "ρ deficient: {}; both deficient: {}",
            one.detail, both.detail
        ),
    }
}

fn block_structure() -> Outcome {
    let (mut offdiag, mut lower_left, mut spec) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..100u64 {
        let n = [2usize, 4, 8][k as usize % 3];
        let rank = 1 + (k as usize / 3) % (n - 1);
        let rank_sigma = 1 + (k as usize / 7) % n;
        let (rho, sigma) = pair(n, rank, rank_sigma, 4, k);
        let r = check_block_structure(&rho, &sigma).expect("block structure");
        offdiag = offdiag.max(r.m_offdiag);
        lower_left = lower_left.max(r.max_lower_left);
        spec = spec.max(r.spec_distance);
    }
    Outcome {
        passed: offdiag <= 1e-9 && lower_left <= 1e-9 && spec <= 1e-8,
        detail: format!(
            "m_offdiag {offdiag:.3e} (1e-9), max_lower_left {lower_left:.3e} (1e-9), spec_distance {spec:.3e} (1e-8)"
        ),
    }
}

fn corollaries() -> Outcome {
    let (mut sym, mut unitary, mut mult, mut pure, mut split, mut own) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut min_correction = f64::INFINITY;
    for k in 0..50u64 {
        let n = [2usize, 3, 4, 8][k as usize % 4];
        let (rho, sigma) = pair(n, n, n, 5, k);
        let u = random_unitary(n, StateSeed::new(6, k));
        let moved_rho = conjugate(&u, &rho).unwrap();
        let moved_sigma = conjugate(&u, &sigma).unwrap();

        let (r1, s1) = pair(2, 2, 2, 7, k);
        let (r2, s2) = pair(3, 3, 3, 8, k);
        let joint_rho = tensor(&r1, &r2).unwrap();
        let joint_sigma = tensor(&s1, &s2).unwrap();

        let psi = random_state_vector(n, StateSeed::new(9, 2 * k));
        let phi = random_state_vector(n, StateSeed::new(9, 2 * k + 1));
        let pure_rho = pure_state(&psi).unwrap();
        let pure_sigma = pure_state(&phi).unwrap();

        for m in FidelityMethod::CONCRETE {
            let f = |a: &DensityMatrix, b: &DensityMatrix| fidelity(a, b, m).unwrap().value;
            let base = f(&rho, &sigma);
            sym = sym.max((base - f(&sigma, &rho)).abs());
            unitary = unitary.max((base - f(&moved_rho, &moved_sigma)).abs());
            mult = mult.max((f(&joint_rho, &joint_sigma) - f(&r1, &s1) * f(&r2, &s2)).abs());
            pure = pure.max((f(&pure_rho, &sigma) - expectation(&psi, sigma.matrix())).abs());
            pure = pure.max((f(&pure_rho, &pure_sigma) - pure_overlap(&psi, &phi)).abs());
            own = own.max((f(&rho, &rho) - 1.0).abs());
        }
        let terms = miszczak_decomposition(&rho, &sigma).unwrap();
        let reference = fidelity(&rho, &sigma, FidelityMethod::Classic)
            .unwrap()
            .value;
        split = split.max((terms.total() - reference).abs());
        min_correction = min_correction.min(terms.correction);
    }
    let checks = [
        ("symmetry", sym, 1e-9),
        ("unitary", unitary, 1e-9),
        ("multiplicativity", mult, 1e-8),
        ("pure", pure, 1e-10),
        ("overlap+correction", split, 1e-9),
        ("self", own, 1e-10),
    ];
    let passed = checks.iter().all(|(_, v, b)| v <= b) && min_correction >= -1e-10;
    let mut detail: Vec<String> = checks
        .iter()
        .map(|(name, v, b)| format!("{name} {v:.2e} ({b:.0e})"))
        .collect();
    detail.push(format!("min correction {min_correction:.2e} (-1e-10)"));
    Outcome {
        passed,
        detail: detail.join(", "),
    }
}

fn commuting_diagonal() -> Outcome {
    let diag =
        |p: &[f64]| validate(ComplexMatrix::from_real_diagonal(p).unwrap(), DEFAULT_TOL).unwrap();
    let mut worst = 0.0f64;
    for k in 0..100u64 {
        let n = 1 + (k as usize % 16);
        let p = random_probability_vector(n, StateSeed::new(10, 2 * k));
        let q = random_probability_vector(n, StateSeed::new(10, 2 * k + 1));
        let expected = bhattacharyya_sq(&p, &q);
        for v in values(&diag(&p), &diag(&q)) {
            worst = worst.max((v - expected).abs());
        }
    }
    at_most(worst, 1e-12)
}

fn sandwich() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..50u64 {
        let (rho, sigma) = pair(4, 4, 4, 11, k);
        let spectra: Vec<Vec<f64>> = [0.0, 0.3, 0.5, 1.0]
            .iter()
            .map(|&x| {
                sandwich_spectrum(&rho, &sigma, x)
                    .unwrap()
                    .sorted_real_parts()
            })
            .collect();
        for s in &spectra[1..] {
            for (a, b) in s.iter().zip(&spectra[0]) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    at_most(worst, 1e-8)
}

fn timing() -> (Outcome, Outcome) {
    bench::configure_threads(1);
    let config = BenchConfig {
        dims: vec![64, 128, 256, 512],
        reps: 10,
        ..BenchConfig::default()
    };
    let report = bench::speedup_report(&config).expect("benchmark");
    for e in &report.entries {
        println!(
            "      n={:<4} {:<13} median {:.4e} s",
            e.dim, e.method, e.stats.median
        );
    }
    let ratio = report.speedup(512).unwrap_or(f64::NAN);
    let slope = report
        .scaling_exponent(FidelityMethod::Classic)
        .unwrap_or(f64::NAN);
    (
        Outcome {
            passed: ratio >= 3.0,
            detail: format!(
                "median(classic)/median(product-eig) at n=512 = {ratio:.3} (need >= 3, {})",
                report.mode
            ),
        },
        Outcome {
            passed: (2.5..=3.5).contains(&slope),
            detail: format!("classic log-log slope over 64..512 = {slope:.3} (need [2.5, 3.5])"),
        },
    )
}

fn capture(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("uhlfid").chain(args.iter().copied());
    let code = uhlfid::cli::run(argv, &mut out, &mut err);
    (code, out)
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (rho, sigma) = pair(4, 4, 3, 12, 0);
    std::fs::write(
        path("rho.json"),
        uhlfid::cli::serialize_matrix(rho.matrix()),
    )
    .unwrap();
    std::fs::write(
        path("sigma.json"),
        uhlfid::cli::serialize_matrix(sigma.matrix()),
    )
    .unwrap();

    // Same report path both times: the report echoes the command line.
    let report = path("verify.json");
    let verify = || {
        let (code, out) = capture(&[
            "verify", "--dims", "2,4,8", "--trials", "10", "--seed", "7", "--report", &report,
        ]);
        (code, out, std::fs::read(&report).unwrap())
    };
    let v1 = verify();
    let v2 = verify();
    let (rp, sp) = (path("rho.json"), path("sigma.json"));
    let compute = || capture(&["compute", "--rho", &rp, "--sigma", &sp, "--all-methods"]);
    let c1 = compute();
    let c2 = compute();

    let verify_same = v1 == v2 && v1.0 == 0;
    let compute_same = c1 == c2 && c1.0 == 0;
    Outcome {
        passed: verify_same && compute_same,
        detail: format!(
            "verify stdout+report identical: {verify_same} ({} bytes), compute stdout identical: {compute_same} ({} bytes)",
            v1.1.len() + v1.2.len(),
            c1.1.len()
        ),
    }
}

fn print(id: u32, name: &str, o: &Outcome, seconds: f64) {
    let verdict = if o.passed { "PASS" } else { "FAIL" };
    println!(
        "{verdict} criterion {id} {name}: {} [{seconds:.1} s]",
        o.detail
    );
}

fn main() -> ExitCode {
    type Check = (u32, &'static str, fn() -> Outcome);
    let checks: [Check; 6] = [
        (1, "method equivalence, full rank", method_equivalence),
        (2, "method equivalence, semidefinite", semidefinite),
        (3, "block structure", block_structure),
        (4, "corollaries", corollaries),
        (5, "commuting diagonal oracle", commuting_diagonal),
        (6, "sandwich invariance", sandwich),
    ];
    let mut outcomes = Vec::new();
    for (id, name, check) in checks {
        let started = Instant::now();
        let o = check();
        print(id, name, &o, started.elapsed().as_secs_f64());
        outcomes.push(o.passed);
    }

    let started = Instant::now();
    let (speed, scaling) = timing();
    let seconds = started.elapsed().as_secs_f64();
    print(7, "speedup at n=512", &speed, seconds);
    print(8, "classic scaling", &scaling, seconds);
    outcomes.extend([speed.passed, scaling.passed]);

    let started = Instant::now();
    let o = reproducibility();
    print(9, "reproducibility", &o, started.elapsed().as_secs_f64());
    outcomes.push(o.passed);

    let failed = outcomes.iter().filter(|p| !**p).count();
    if failed == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
