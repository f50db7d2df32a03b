//! Executable checks of the semi-definite argument and the property suite.
//!
//! For rank-deficient `ρ`, working in `ρ`'s eigenbasis with the null
//! eigenvectors last, `M = √ρ·σ·√ρ` is block diagonal with a zero null
//! block while `N = ρσ` is block upper triangular with the same zero rows.
//! [`check_block_structure`] measures both shapes and compares the nonzero
//! spectra. [`run_property_suite`] drives every fidelity invariant over
//! seeded random instances and reports, never panics.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::{
    fidelity, miszczak_decomposition, sandwich_spectrum, FidelityMethod, FidelityResult,
};
use crate::matcore::{self, ComplexMatrix, DEFAULT_TOL};
use crate::states::{
    self, conjugate, random_density, random_probability_vector, random_unitary, tensor,
    DensityMatrix, StateSeed,
};

/// Eigenvalues below this are counted as the null block's zeros when
/// comparing spectra.
pub const NULL_EIGENVALUE_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockStructureReport {
    /// Dimension of the positive-definite block.
    pub p: usize,
    /// Dimension of the null block.
    pub q: usize,
    /// Largest `|N'_ij|` with `i` in the null block and `j` in the support.
    pub max_lower_left: f64,
    /// Largest `|M'_ij|` outside the leading `p × p` block.
    pub m_offdiag: f64,
    /// Max componentwise gap between the sorted nonzero spectra of `M` and `N`.
    pub spec_distance: f64,
}

/// Multiset distance between two spectra: real parts sorted descending,
/// values below [`NULL_EIGENVALUE_THRESHOLD`] replaced by zero, max
/// absolute componentwise difference.
pub fn spectral_distance(a: &[f64], b: &[f64]) -> f64 {
    let prep = |v: &[f64]| {
        let mut v: Vec<f64> = v
            .iter()
            .map(|&x| {
                if x.abs() < NULL_EIGENVALUE_THRESHOLD {
                    0.0
                } else {
                    x
                }
            })
            .collect();
        v.sort_by(|x, y| y.total_cmp(x));
        v
    };
    let (a, b) = (prep(a), prep(b));
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Transforms `M` and `N` into `ρ`'s eigenbasis and measures the block
/// shapes. Requires `ρ` to be numerically rank deficient.
pub fn check_block_structure(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<BlockStructureReport> {
    let n = rho.dim();
    if sigma.dim() != n {
        return Err(Error::Dimension(format!(
            "states have dimensions {n} and {}",
            sigma.dim()
        )));
    }
    let p = rho.rank_estimate();
    if p >= n {
        return Err(Error::Rank { rank: p, dim: n });
    }
    let tol = rho.validation_tol().max(sigma.validation_tol());

    // Descending eigenvalues so the null block is trailing.
    let eig = matcore::herm_eig(rho.matrix(), tol)?;
    let v_asc = eig.eigenvectors.as_faer();
    let v = ComplexMatrix::try_from_faer(faer::Mat::from_fn(n, n, |i, j| v_asc[(i, n - 1 - j)]))?;
    let vh = v.adjoint();

    let root = matcore::psd_sqrt(rho.matrix(), tol)?;
    let m = matcore::matmul(&matcore::matmul(&root, sigma.matrix())?, &root)?;
    let nmat = matcore::matmul(rho.matrix(), sigma.matrix())?;
    let m_rot = matcore::matmul(&matcore::matmul(&vh, &m)?, &v)?;
    let n_rot = matcore::matmul(&matcore::matmul(&vh, &nmat)?, &v)?;

    let mut m_offdiag = 0.0f64;
    let mut max_lower_left = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i >= p || j >= p {
                m_offdiag = m_offdiag.max(m_rot.get(i, j).norm());
            }
            if i >= p && j < p {
                max_lower_left = max_lower_left.max(n_rot.get(i, j).norm());
            }
        }
    }

    let m_spec = matcore::herm_eig(&m, tol)?.eigenvalues;
    let n_spec: Vec<f64> = matcore::general_eigenvalues(&nmat)?
        .iter()
        .map(|z| z.re)
        .collect();
    Ok(BlockStructureReport {
        p,
        q: n - p,
        max_lower_left,
        m_offdiag,
        spec_distance: spectral_distance(&m_spec, &n_spec),
    })
}

/// `(Σ_i √(p_i q_i))²`, the fidelity of two commuting states with spectra
/// `p` and `q` in a shared eigenbasis.
pub fn commuting_oracle(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() || p.is_empty() {
        return Err(Error::Domain(format!(
            "probability vectors have lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    for (name, v) in [("p", p), ("q", q)] {
        if v.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::Domain(format!(
                "{name} has a negative or non-finite entry"
            )));
        }
        let total: f64 = v.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("{name} sums to {total}, not 1")));
        }
    }
    let bc: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    Ok(bc * bc)
}

/// Thresholds for every suite property.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub equivalence_full_rank: f64,
    pub equivalence_rank_deficient: f64,
    pub self_fidelity: f64,
    pub range_slack: f64,
    pub symmetry: f64,
    pub unitary_invariance: f64,
    pub multiplicativity: f64,
    pub pure_state_reduction: f64,
    pub miszczak_identity: f64,
    pub correction_floor: f64,
    pub overlap_bound: f64,
    pub commuting_oracle: f64,
    pub block_offdiag: f64,
    pub block_lower_left: f64,
    pub block_spectrum: f64,
    pub sandwich_invariance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TolProfile {
    Default,
    /// Every threshold tightened tenfold.
    Strict,
}

impl TolProfile {
    pub fn tolerances(self) -> Tolerances {
        let base = Tolerances {
            equivalence_full_rank: 1e-8,
            equivalence_rank_deficient: 1e-7,
            self_fidelity: 1e-10,
            range_slack: 1e-9,
            symmetry: 1e-9,
            unitary_invariance: 1e-9,
            multiplicativity: 1e-8,
            pure_state_reduction: 1e-10,
            miszczak_identity: 1e-9,
            correction_floor: 1e-10,
            overlap_bound: 1e-10,
            commuting_oracle: 1e-12,
            block_offdiag: 1e-9,
            block_lower_left: 1e-9,
            block_spectrum: 1e-8,
            sandwich_invariance: 1e-8,
        };
        match self {
            TolProfile::Default => base,
            TolProfile::Strict => Tolerances {
                equivalence_full_rank: base.equivalence_full_rank / 10.0,
                equivalence_rank_deficient: base.equivalence_rank_deficient / 10.0,
                self_fidelity: base.self_fidelity / 10.0,
                range_slack: base.range_slack / 10.0,
                symmetry: base.symmetry / 10.0,
                unitary_invariance: base.unitary_invariance / 10.0,
                multiplicativity: base.multiplicativity / 10.0,
                pure_state_reduction: base.pure_state_reduction / 10.0,
                miszczak_identity: base.miszczak_identity / 10.0,
                correction_floor: base.correction_floor / 10.0,
                overlap_bound: base.overlap_bound / 10.0,
                commuting_oracle: base.commuting_oracle / 10.0,
                block_offdiag: base.block_offdiag / 10.0,
                block_lower_left: base.block_lower_left / 10.0,
                block_spectrum: base.block_spectrum / 10.0,
                sandwich_invariance: base.sandwich_invariance / 10.0,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TolProfile::Default => "default",
            TolProfile::Strict => "strict",
        }
    }
}

impl FromStr for TolProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(TolProfile::Default),
            "strict" => Ok(TolProfile::Strict),
            other => Err(Error::Domain(format!(
                "unknown tolerance profile `{other}`"
            ))),
        }
    }
}

/// Deliberate corruption of one method's value, for exercising the failure
/// path of the suite and the command line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaultInjection {
    pub method: FidelityMethod,
    pub offset: f64,
}

/// Where a property first failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureSite {
    pub dim: usize,
    pub trial: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub passed: bool,
    pub threshold: f64,
    /// Largest residual observed, comparable with `threshold`.
    pub worst_residual: f64,
    pub trials: u64,
    pub failures: u64,
    pub first_failure: Option<FailureSite>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub master_seed: u64,
    pub trials: u64,
    pub dims: Vec<usize>,
    pub tol_profile: TolProfile,
    pub tolerances: Tolerances,
    pub fault: Option<FaultInjection>,
    pub properties: Vec<PropertyOutcome>,
    pub all_passed: bool,
}

impl SuiteReport {
    pub fn property(&self, name: &str) -> Option<&PropertyOutcome> {
        self.properties.iter().find(|p| p.name == name)
    }
}

/// Property names, in report order.
pub const PROPERTIES: [&str; 15] = [
    "method_equivalence_full_rank",
    "method_equivalence_rank_deficient",
    "method_equivalence_both_rank_deficient",
    "self_fidelity",
    "value_range",
    "symmetry",
    "unitary_invariance",
    "multiplicativity",
    "pure_state_reduction",
    "miszczak_identity",
    "miszczak_correction_nonnegative",
    "overlap_bound",
    "commuting_oracle",
    "block_structure",
    "sandwich_invariance",
];

struct Tally {
    outcome: PropertyOutcome,
}

impl Tally {
    fn new(name: &str, threshold: f64) -> Self {
        Self {
            outcome: PropertyOutcome {
                name: name.to_string(),
                passed: true,
                threshold,
                worst_residual: 0.0,
                trials: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    /// Records one trial's residual; `NaN` counts as failure.
    fn record(&mut self, dim: usize, trial: u64, residual: f64) {
        self.outcome.trials += 1;
        let ok = residual <= self.outcome.threshold;
        if residual.is_nan() || residual > self.outcome.worst_residual {
            self.outcome.worst_residual = if residual.is_nan() {
                f64::INFINITY
            } else {
                residual
            };
        }
        if !ok {
            self.fail(dim, trial, format!("residual {residual:.3e}"));
        }
    }

    fn error(&mut self, dim: usize, trial: u64, err: &dyn std::fmt::Display) {
        self.outcome.trials += 1;
        self.outcome.worst_residual = f64::INFINITY;
        self.fail(dim, trial, err.to_string());
    }

    fn fail(&mut self, dim: usize, trial: u64, detail: String) {
        self.outcome.passed = false;
        self.outcome.failures += 1;
        if self.outcome.first_failure.is_none() {
            self.outcome.first_failure = Some(FailureSite { dim, trial, detail });
        }
    }

    fn run(&mut self, dim: usize, trial: u64, f: impl FnOnce() -> Checked) {
        match f() {
            Ok(r) => self.record(dim, trial, r),
            Err(e) => self.error(dim, trial, &e.0),
        }
    }
}

/// Error message carried out of a trial; lets a shared intermediate result
/// fail every property that depends on it.
struct Failed(String);

impl From<Error> for Failed {
    fn from(e: Error) -> Self {
        Failed(e.to_string())
    }
}

type Checked = std::result::Result<f64, Failed>;

fn shared<T: Clone>(r: &Result<T>) -> std::result::Result<T, Failed> {
    match r {
        Ok(v) => Ok(v.clone()),
        Err(e) => Err(Failed(e.to_string())),
    }
}

/// Stream identifiers: `trial << 24 | property << 16 | dim_index << 8 | slot`.
fn seed(master: u64, trial: u64, property: usize, dim_index: usize, slot: u64) -> StateSeed {
    StateSeed::new(
        master,
        (trial << 24) | ((property as u64) << 16) | ((dim_index as u64 & 0xff) << 8) | slot,
    )
}

fn max_pairwise(values: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            let d = (a - b).abs();
            if d.is_nan() {
                return f64::INFINITY;
            }
            worst = worst.max(d);
        }
    }
    worst
}

/// Evaluates methods with an optional injected fault.
struct Evaluator {
    fault: Option<FaultInjection>,
}

impl Evaluator {
    fn eval(
        &self,
        rho: &DensityMatrix,
        sigma: &DensityMatrix,
        method: FidelityMethod,
    ) -> Result<FidelityResult> {
        let mut r = fidelity(rho, sigma, method)?;
        if let Some(f) = self.fault {
            if f.method.resolve() == r.method {
                r.raw_value += f.offset;
                r.value = r.raw_value.clamp(0.0, 1.0);
            }
        }
        Ok(r)
    }

    fn all(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Vec<f64>> {
        FidelityMethod::CONCRETE
            .iter()
            .map(|&m| self.eval(rho, sigma, m).map(|r| r.value))
            .collect()
    }
}

fn diagonal_state(p: &[f64]) -> Result<DensityMatrix> {
    states::validate(ComplexMatrix::from_real_diagonal(p)?, DEFAULT_TOL)
}

/// Runs every property over `trials` seeded instances per dimension.
pub fn run_property_suite(
    trials: u64,
    dims: &[usize],
    master_seed: u64,
    profile: TolProfile,
) -> SuiteReport {
    run_property_suite_with_fault(trials, dims, master_seed, profile, None)
}

/// [`run_property_suite`] with an optional [`FaultInjection`].
pub fn run_property_suite_with_fault(
    trials: u64,
    dims: &[usize],
    master_seed: u64,
    profile: TolProfile,
    fault: Option<FaultInjection>,
) -> SuiteReport {
    let tol = profile.tolerances();
    let ev = Evaluator { fault };
    let mut t: Vec<Tally> = PROPERTIES
        .iter()
        .map(|&name| {
            let threshold = match name {
                "method_equivalence_full_rank" => tol.equivalence_full_rank,
                "method_equivalence_rank_deficient" | "method_equivalence_both_rank_deficient" => {
                    tol.equivalence_rank_deficient
                }
                "self_fidelity" => tol.self_fidelity,
                "value_range" => tol.range_slack,
                "symmetry" => tol.symmetry,
                "unitary_invariance" => tol.unitary_invariance,
                "multiplicativity" => tol.multiplicativity,
                "pure_state_reduction" => tol.pure_state_reduction,
                "miszczak_identity" => tol.miszczak_identity,
                "miszczak_correction_nonnegative" => tol.correction_floor,
                "overlap_bound" => tol.overlap_bound,
                "commuting_oracle" => tol.commuting_oracle,
                "block_structure" => 1.0,
                "sandwich_invariance" => tol.sandwich_invariance,
                _ => unreachable!("unlisted property {name}"),
            };
            Tally::new(name, threshold)
        })
        .collect();
    let idx = |name: &str| PROPERTIES.iter().position(|&p| p == name).unwrap();

    for trial in 0..trials {
        for (di, &n) in dims.iter().enumerate() {
            let s = |prop: &str, slot: u64| seed(master_seed, trial, idx(prop), di, slot);

            // Full-rank pair shared by several invariants.
            let pair = random_density(n, n, s("method_equivalence_full_rank", 0)).and_then(|r| {
                random_density(n, n, s("method_equivalence_full_rank", 1)).map(|q| (r, q))
            });
            let (rho, sigma) = match pair {
                Ok(p) => p,
                Err(e) => {
                    for tally in &mut t {
                        tally.error(n, trial, &e);
                    }
                    continue;
                }
            };
            let forward = ev.all(&rho, &sigma);

            t[idx("method_equivalence_full_rank")]
                .run(n, trial, || shared(&forward).map(|v| max_pairwise(&v)));

            if n >= 2 {
                let half = n.div_ceil(2);
                t[idx("method_equivalence_rank_deficient")].run(n, trial, || {
                    let r = random_density(n, half, s("method_equivalence_rank_deficient", 0))?;
                    let q = random_density(n, n, s("method_equivalence_rank_deficient", 1))?;
                    Ok(max_pairwise(&ev.all(&r, &q)?))
                });
                t[idx("method_equivalence_both_rank_deficient")].run(n, trial, || {
                    let p = "method_equivalence_both_rank_deficient";
                    let r = random_density(n, half, s(p, 0))?;
                    let q = random_density(n, half, s(p, 1))?;
                    Ok(max_pairwise(&ev.all(&r, &q)?))
                });
            }

            t[idx("self_fidelity")].run(n, trial, || {
                let mut worst = 0.0f64;
                for m in FidelityMethod::CONCRETE {
                    worst = worst.max((ev.eval(&rho, &rho, m)?.value - 1.0).abs());
                }
                Ok(worst)
            });

            t[idx("value_range")].run(n, trial, || {
                let mut worst = 0.0f64;
                for m in FidelityMethod::CONCRETE {
                    let r = ev.eval(&rho, &sigma, m)?;
                    if !(0.0..=1.0).contains(&r.value) {
                        return Ok(f64::INFINITY);
                    }
                    worst = worst.max(-r.raw_value).max(r.raw_value - 1.0);
                }
                Ok(worst.max(0.0))
            });

            t[idx("symmetry")].run(n, trial, || {
                let fwd = shared(&forward)?;
                let back = ev.all(&sigma, &rho)?;
                Ok(fwd
                    .iter()
                    .zip(&back)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max))
            });

            t[idx("unitary_invariance")].run(n, trial, || {
                let u = random_unitary(n, s("unitary_invariance", 0));
                let r2 = conjugate(&u, &rho)?;
                let q2 = conjugate(&u, &sigma)?;
                let fwd = shared(&forward)?;
                let rotated = ev.all(&r2, &q2)?;
                Ok(fwd
                    .iter()
                    .zip(&rotated)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max))
            });

            t[idx("pure_state_reduction")].run(n, trial, || {
                let pure = random_density(n, 1, s("pure_state_reduction", 0))?;
                let overlap = matcore::trace_of_product(pure.matrix(), sigma.matrix())?.re;
                let mut worst = 0.0f64;
                for m in FidelityMethod::CONCRETE {
                    worst = worst.max((ev.eval(&pure, &sigma, m)?.value - overlap).abs());
                }
                Ok(worst)
            });

            let split = miszczak_decomposition(&rho, &sigma);
            let f_eig = ev.eval(&rho, &sigma, FidelityMethod::ProductEig);
            t[idx("miszczak_identity")].run(n, trial, || {
                let split = shared(&split)?;
                Ok((split.total() - shared(&f_eig)?.raw_value).abs())
            });
            t[idx("miszczak_correction_nonnegative")]
                .run(n, trial, || Ok((-shared(&split)?.correction).max(0.0)));
            t[idx("overlap_bound")].run(n, trial, || {
                let split = shared(&split)?;
                Ok((split.overlap - shared(&f_eig)?.raw_value).max(0.0))
            });

            t[idx("commuting_oracle")].run(n, trial, || {
                let p = random_probability_vector(n, s("commuting_oracle", 0));
                let q = random_probability_vector(n, s("commuting_oracle", 1));
                let expected = commuting_oracle(&p, &q)?;
                let values = ev.all(&diagonal_state(&p)?, &diagonal_state(&q)?)?;
                Ok(values
                    .iter()
                    .map(|v| (v - expected).abs())
                    .fold(0.0, f64::max))
            });

            if n >= 2 {
                t[idx("block_structure")].run(n, trial, || {
                    // Rank cycles through 1..n-1 across trials.
                    let rank = 1 + (trial as usize % (n - 1));
                    let r = random_density(n, rank, s("block_structure", 0))?;
                    let q = random_density(n, n, s("block_structure", 1))?;
                    let rep = check_block_structure(&r, &q)?;
                    // Normalised so that 1.0 is the pass boundary.
                    Ok((rep.m_offdiag / tol.block_offdiag)
                        .max(rep.max_lower_left / tol.block_lower_left)
                        .max(rep.spec_distance / tol.block_spectrum))
                });
            }

            t[idx("sandwich_invariance")].run(n, trial, || {
                let reference = sandwich_spectrum(&rho, &sigma, 0.5)?.sorted_real_parts();
                let mut worst = 0.0f64;
                for x in [0.0, 0.3, 1.0] {
                    let other = sandwich_spectrum(&rho, &sigma, x)?.sorted_real_parts();
                    for (a, b) in reference.iter().zip(&other) {
                        worst = worst.max((a - b).abs());
                    }
                }
                Ok(worst)
            });
        }

        // Fixed 2 ⊗ 3 instance per trial, independent of `dims`.
        t[idx("multiplicativity")].run(6, trial, || {
            let s = |slot| seed(master_seed, trial, idx("multiplicativity"), 0, slot);
            let r1 = random_density(2, 2, s(0))?;
            let r2 = random_density(3, 3, s(1))?;
            let q1 = random_density(2, 2, s(2))?;
            let q2 = random_density(3, 3, s(3))?;
            let joint_r = tensor(&r1, &r2)?;
            let joint_q = tensor(&q1, &q2)?;
            let mut worst = 0.0f64;
            for m in FidelityMethod::CONCRETE {
                let whole = ev.eval(&joint_r, &joint_q, m)?.raw_value;
                let parts = ev.eval(&r1, &q1, m)?.raw_value * ev.eval(&r2, &q2, m)?.raw_value;
                worst = worst.max((whole - parts).abs());
            }
            Ok(worst)
        });
    }

    let properties: Vec<PropertyOutcome> = t.into_iter().map(|t| t.outcome).collect();
    let all_passed = properties.iter().all(|p| p.passed);
    SuiteReport {
        master_seed,
        trials,
        dims: dims.to_vec(),
        tol_profile: profile,
        tolerances: tol,
        fault,
        properties,
        all_passed,
    }
}
