//! Validated density matrices and seeded random states.
//!
//! Random generation is deterministic in a [`StateSeed`]. The generator is
//! ChaCha20 keyed by `master_seed` (little-endian in the first eight key
//! bytes, the remaining key bytes zero) with the ChaCha stream number set to
//! `stream_id`. Standard complex Gaussians are drawn as `(a + ib)/√2` with
//! `a`, `b` standard normal, consumed in row-major order.

use faer::{c64, Mat};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, DEFAULT_TOL};

/// A Hermitian, positive semi-definite, unit-trace matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    rank_estimate: usize,
    validation_tol: f64,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Number of eigenvalues above `validation_tol · dim`.
    pub fn rank_estimate(&self) -> usize {
        self.rank_estimate
    }

    pub fn validation_tol(&self) -> f64 {
        self.validation_tol
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank_estimate == self.dim()
    }
}

/// Checks the three density-matrix invariants, in the order Hermiticity,
/// unit trace, positivity.
pub fn validate(a: ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    let n = a.dim();
    let residual = a.hermiticity_residual();
    if residual > tol {
        return Err(Error::Hermiticity { residual, tol });
    }
    let tr = matcore::trace(&a);
    let deviation = (tr - c64::new(1.0, 0.0)).norm();
    if deviation > tol * n as f64 {
        return Err(Error::Trace {
            trace: tr.re,
            deviation,
            tol: tol * n as f64,
        });
    }
    let eig = matcore::herm_eig(&a, tol)?;
    let min = eig.eigenvalues[0];
    if min < -tol {
        return Err(Error::Negativity {
            min_eigenvalue: min,
            tol,
        });
    }
    let threshold = tol * n as f64;
    let rank = eig.eigenvalues.iter().filter(|&&l| l > threshold).count();
    Ok(DensityMatrix {
        mat: a,
        rank_estimate: rank.max(1),
        validation_tol: tol,
    })
}

/// `|ψ⟩⟨ψ|` for `ψ = v/‖v‖`.
pub fn pure_state(v: &[c64]) -> Result<DensityMatrix> {
    let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if v.is_empty() || norm_sq == 0.0 {
        return Err(Error::ZeroVector);
    }
    if !norm_sq.is_finite() {
        return Err(Error::Domain("state vector has non-finite entries".into()));
    }
    let n = v.len();
    let inv = 1.0 / norm_sq;
    let m = Mat::from_fn(n, n, |i, j| v[i] * v[j].conj() * inv);
    validate(ComplexMatrix::from_faer(m).hermitian_part(), DEFAULT_TOL)
}

/// `I/n`.
pub fn maximally_mixed(n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    Ok(DensityMatrix {
        mat: ComplexMatrix::identity(n).scale(c64::new(1.0 / n as f64, 0.0)),
        rank_estimate: n,
        validation_tol: DEFAULT_TOL,
    })
}

/// Identifies one reproducible random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateSeed {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl StateSeed {
    pub const fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    /// Two child streams, `2·stream_id` and `2·stream_id + 1` (wrapping).
    pub fn split(self) -> (Self, Self) {
        let base = self.stream_id.wrapping_mul(2);
        (
            Self::new(self.master_seed, base),
            Self::new(self.master_seed, base.wrapping_add(1)),
        )
    }

    pub fn rng(self) -> ChaCha20Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn complex_gaussian(rng: &mut ChaCha20Rng) -> c64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `rows × cols` Ginibre matrix, row-major draw order.
pub fn ginibre(rows: usize, cols: usize, seed: StateSeed) -> Mat<c64> {
    let mut rng = seed.rng();
    let mut g = Mat::<c64>::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            g[(i, j)] = complex_gaussian(&mut rng);
        }
    }
    g
}

/// Random density matrix `G·G†/tr(G·G†)` with `G` an `n × rank` Ginibre
/// matrix. Rank deficiency is structural, so the null block is exact up to
/// rounding.
pub fn random_density(n: usize, rank: usize, seed: StateSeed) -> Result<DensityMatrix> {
    if n == 0 || rank == 0 || rank > n {
        return Err(Error::Domain(format!(
            "rank {rank} must lie in [1, {n}] for dimension {n}"
        )));
    }
    let g = ginibre(n, rank, seed);
    let w = g.as_ref() * g.adjoint();
    let tr: f64 = (0..n).map(|i| w[(i, i)].re).sum();
    let rho = ComplexMatrix::from_faer(w)
        .scale(c64::new(1.0 / tr, 0.0))
        .hermitian_part();
    validate(rho, DEFAULT_TOL)
}

/// Random probability vector of length `n` (normalised exponentials, i.e.
/// uniform on the simplex).
pub fn random_probability_vector(n: usize, seed: StateSeed) -> Vec<f64> {
    let mut rng = seed.rng();
    let draws: Vec<f64> = (0..n)
        .map(|_| {
            let e: f64 = rand_distr::Exp1.sample(&mut rng);
            e
        })
        .collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Random normalised state vector.
pub fn random_state_vector(n: usize, seed: StateSeed) -> Vec<c64> {
    let mut rng = seed.rng();
    let v: Vec<c64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn random_unitary(n: usize, seed: StateSeed) -> ComplexMatrix {
    assert!(n > 0, "dimension must be at least 1");
    let g = ginibre(n, n, seed);
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let phases: Vec<c64> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                c64::new(1.0, 0.0)
            } else {
                d / d.norm()
            }
        })
        .collect();
    ComplexMatrix::from_faer(Mat::from_fn(n, n, |i, j| q[(i, j)] * phases[j]))
}

/// Tolerance on `‖U†U − I‖_max` accepted by [`conjugate`].
pub const UNITARITY_TOL: f64 = 1e-8;

/// `U ρ U†`, revalidated.
pub fn conjugate(u: &ComplexMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(Error::Dimension(format!(
            "unitary has dimension {}, state has {}",
            u.dim(),
            rho.dim()
        )));
    }
    let residual = u.unitarity_residual();
    if residual > UNITARITY_TOL {
        return Err(Error::Unitarity {
            residual,
            tol: UNITARITY_TOL,
        });
    }
    let m = u.as_faer() * rho.mat.as_faer() * u.as_faer().adjoint();
    validate(ComplexMatrix::try_from_faer(m)?, rho.validation_tol)
}

/// `ρ₁ ⊗ ρ₂`, revalidated.
pub fn tensor(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<DensityMatrix> {
    let k = matcore::kron(&rho1.mat, &rho2.mat);
    validate(k, rho1.validation_tol.max(rho2.validation_tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> c64 {
        c64::new(re, im)
    }

    #[test]
    fn validate_examples() {
        let d = validate(
            ComplexMatrix::from_real_diagonal(&[0.5, 0.5]).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(d.rank_estimate(), 2);

        let err = validate(
            ComplexMatrix::from_real_diagonal(&[1.0, 0.1]).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap_err();
        match err {
            Error::Trace { trace, .. } => assert!((trace - 1.1).abs() < 1e-15),
            other => panic!("expected TraceError, got {other}"),
        }

        let err = validate(
            ComplexMatrix::from_real_rows(&[vec![0.5, 0.6], vec![0.6, 0.5]]).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap_err();
        match err {
            Error::Negativity { min_eigenvalue, .. } => {
                assert!((min_eigenvalue + 0.1).abs() < 1e-14)
            }
            other => panic!("expected NegativityError, got {other}"),
        }
    }

    #[test]
    fn validate_rejects_non_hermitian_and_names_it() {
        let a =
            ComplexMatrix::from_rows(&[vec![(0.5, 0.0), (0.1, 0.1)], vec![(0.1, 0.1), (0.5, 0.0)]])
                .unwrap();
        let err = validate(a, DEFAULT_TOL).unwrap_err();
        assert!(err.to_string().starts_with("HermiticityError"));
    }

    #[test]
    fn pure_state_examples() {
        let p = pure_state(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(p.rank_estimate(), 1);
        assert!(
            p.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap())
                < 1e-15
        );

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = pure_state(&[c(s, 0.0), c(s, 0.0)]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert!(p.matrix().max_abs_diff(&expected) < 1e-15);

        let p = pure_state(&[c(s, 0.0), c(0.0, s)]).unwrap();
        let expected = ComplexMatrix::from_rows(&[
            vec![(0.5, 0.0), (0.0, -0.5)],
            vec![(0.0, 0.5), (0.5, 0.0)],
        ])
        .unwrap();
        assert!(p.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn pure_state_zero_vector() {
        assert!(matches!(
            pure_state(&[c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(pure_state(&[]), Err(Error::ZeroVector)));
    }

    #[test]
    fn maximally_mixed_examples() {
        let m = maximally_mixed(2).unwrap();
        assert_eq!(
            m.matrix(),
            &ComplexMatrix::from_real_diagonal(&[0.5, 0.5]).unwrap()
        );
        let m = maximally_mixed(4).unwrap();
        assert_eq!(m.rank_estimate(), 4);
        let m = maximally_mixed(37).unwrap();
        assert!((matcore::trace(m.matrix()).re - 1.0).abs() < 1e-12);
        assert!(validate(m.into_matrix(), DEFAULT_TOL).is_ok());
        assert!(maximally_mixed(0).is_err());
    }

    #[test]
    fn random_density_is_deterministic() {
        let s = StateSeed::new(11, 3);
        let a = random_density(4, 4, s).unwrap();
        let b = random_density(4, 4, s).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let c = random_density(4, 4, StateSeed::new(11, 4)).unwrap();
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn random_density_rank() {
        for stream in 0..10 {
            let r = random_density(4, 2, StateSeed::new(5, stream)).unwrap();
            let eig = matcore::herm_eig(r.matrix(), DEFAULT_TOL).unwrap();
            assert_eq!(eig.eigenvalues.iter().filter(|&&l| l > 1e-10).count(), 2);
            assert_eq!(r.rank_estimate(), 2);
        }
        let r = random_density(8, 8, StateSeed::new(5, 99)).unwrap();
        assert!(validate(r.into_matrix(), 1e-10).is_ok());
    }

    #[test]
    fn random_density_domain() {
        assert!(matches!(
            random_density(4, 5, StateSeed::new(0, 0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            random_density(4, 0, StateSeed::new(0, 0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn random_unitary_examples() {
        let u = random_unitary(1, StateSeed::new(1, 1));
        assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-14);
        for n in [2, 5, 16] {
            let u = random_unitary(n, StateSeed::new(2, n as u64));
            assert!(u.unitarity_residual() <= 1e-10 * n as f64);
        }
        assert_eq!(
            random_unitary(6, StateSeed::new(9, 9)),
            random_unitary(6, StateSeed::new(9, 9))
        );
    }

    #[test]
    fn conjugate_examples() {
        let rho = random_density(3, 3, StateSeed::new(1, 2)).unwrap();
        let same = conjugate(&ComplexMatrix::identity(3), &rho).unwrap();
        assert!(same.matrix().max_abs_diff(rho.matrix()) < 1e-15);

        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let zero = pure_state(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let one = conjugate(&x, &zero).unwrap();
        assert!(
            one.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0]).unwrap())
                < 1e-15
        );
    }

    #[test]
    fn conjugate_rejects_non_unitary() {
        let rho = maximally_mixed(2).unwrap();
        let err = conjugate(
            &ComplexMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap(),
            &rho,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Unitarity { .. }));
    }

    #[test]
    fn tensor_examples() {
        let a = pure_state(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let b = maximally_mixed(2).unwrap();
        let t = tensor(&a, &b).unwrap();
        assert!(
            t.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5, 0.0, 0.0]).unwrap())
                < 1e-15
        );
        assert_eq!(t.rank_estimate(), 2);

        let r1 = random_density(3, 2, StateSeed::new(4, 1)).unwrap();
        let r2 = random_density(2, 2, StateSeed::new(4, 2)).unwrap();
        let t = tensor(&r1, &r2).unwrap();
        assert_eq!(t.dim(), 6);
        assert!((matcore::trace(t.matrix()).re - 1.0).abs() < 1e-12);
        assert_eq!(t.rank_estimate(), 4);
    }

    #[test]
    fn probability_vectors_sum_to_one() {
        let p = random_probability_vector(7, StateSeed::new(3, 3));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(p.iter().all(|&x| x > 0.0));
    }
}
