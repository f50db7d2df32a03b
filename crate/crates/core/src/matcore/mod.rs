//! Dense complex-matrix kernels and the decompositions the fidelity routes
//! are built from.
//!
//! Hermitian eigendecomposition, general eigenvalues and singular values are
//! delegated to `faer`; the complex Schur form used by [`schur_sqrt`] is
//! computed in [`schur`].
//!
//! Tolerances follow one convention: Hermiticity is checked against
//! `tol * max(1, ‖A‖_max)`, negativity against the absolute `tol`.

mod matrix;
pub mod schur;

use std::cmp::Ordering;

use faer::{c64, Mat, Side};

pub use self::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Default absolute tolerance for Hermiticity, PSD and trace checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Eigenvalues with modulus at or below `n · ε · scale` are below the
/// resolution of a backward-stable solver and are treated as exact zeros by
/// every square-root-like spectral map. `scale` is `max|λ|` for Hermitian
/// matrices and the Frobenius norm for general ones, whose eigenvalues can
/// be much smaller than the matrix.
pub fn noise_floor(n: usize, scale: f64) -> f64 {
    n as f64 * f64::EPSILON * scale
}

/// Hermitian eigendecomposition with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct HermEigResult {
    pub eigenvalues: Vec<f64>,
    /// Columns are the orthonormal eigenvectors, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl HermEigResult {
    /// `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = self.eigenvectors.as_faer();
        let n = v.nrows();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let scaled = Mat::from_fn(n, n, |i, j| v[(i, j)] * weights[j]);
        ComplexMatrix::from_faer(scaled.as_ref() * v.adjoint())
    }
}

fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "operands have dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_dim(a, b)?;
    ComplexMatrix::try_from_faer(a.as_faer() * b.as_faer())
}

/// Kronecker product; entry `(i·nB + k, j·nB + l)` is `A[i,j] · B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let (fa, fb) = (a.as_faer(), b.as_faer());
    ComplexMatrix::from_faer(Mat::from_fn(na * nb, na * nb, |r, c| {
        fa[(r / nb, c / nb)] * fb[(r % nb, c % nb)]
    }))
}

pub fn trace(a: &ComplexMatrix) -> c64 {
    a.diagonal().into_iter().sum()
}

/// `tr(A·B)` without forming the product.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<c64> {
    check_same_dim(a, b)?;
    let (fa, fb) = (a.as_faer(), b.as_faer());
    let n = a.dim();
    let mut acc = c64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += fa[(i, j)] * fb[(j, i)];
        }
    }
    Ok(acc)
}

fn check_hermitian(a: &ComplexMatrix, tol: f64) -> Result<()> {
    let allowed = tol * a.max_abs().max(1.0);
    let residual = a.hermiticity_residual();
    if residual > allowed {
        return Err(Error::Hermiticity {
            residual,
            tol: allowed,
        });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
///
/// The input is symmetrised as `(A + A†)/2` after the Hermiticity check, so
/// rounding-level asymmetry in computed products does not leak through.
pub fn herm_eig(a: &ComplexMatrix, tol: f64) -> Result<HermEigResult> {
    check_hermitian(a, tol)?;
    let h = a.hermitian_part();
    let evd = h
        .as_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Convergence(format!("Hermitian eigensolver: {e:?}")))?;
    let s = evd.S();
    let n = a.dim();
    let eigenvalues: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::Convergence("non-finite eigenvalue".into()));
    }
    Ok(HermEigResult {
        eigenvalues,
        eigenvectors: ComplexMatrix::try_from_faer(evd.U().to_owned())?,
    })
}

/// Ordering used for every reported complex spectrum: descending real part,
/// ties broken by descending imaginary part.
pub fn spectrum_order(a: &c64, b: &c64) -> Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

/// Eigenvalues of a general (non-Hermitian) matrix via Hessenberg
/// reduction and multishift QR. Returned in [`spectrum_order`].
pub fn general_eigenvalues(a: &ComplexMatrix) -> Result<Vec<c64>> {
    let mut ev = a
        .as_faer()
        .eigenvalues()
        .map_err(|e| Error::Convergence(format!("general eigensolver: {e:?}")))?;
    if ev.iter().any(|z| !z.is_finite()) {
        return Err(Error::Convergence("non-finite eigenvalue".into()));
    }
    ev.sort_by(spectrum_order);
    Ok(ev)
}

/// Hermitian decomposition of a numerically PSD matrix. Negative eigenvalues
/// within `tol` are allowed; larger negativity is an error. Also returns the
/// total clamped negative mass.
fn psd_eig(a: &ComplexMatrix, tol: f64) -> Result<(HermEigResult, f64)> {
    let eig = herm_eig(a, tol)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(Error::Negativity {
            min_eigenvalue: min,
            tol,
        });
    }
    let clamped = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l < 0.0)
        .fold(0.0, |acc, l| acc - l);
    Ok((eig, clamped))
}

fn floored_power(eig: &HermEigResult, x: f64) -> ComplexMatrix {
    let n = eig.eigenvalues.len();
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let floor = noise_floor(n, max);
    eig.map_spectrum(|l| if l <= floor { 0.0 } else { l.powf(x) })
}

/// Principal square root of a Hermitian PSD matrix, with the clamped
/// negative mass.
pub(crate) fn psd_sqrt_with_mass(a: &ComplexMatrix, tol: f64) -> Result<(ComplexMatrix, f64)> {
    let (eig, clamped) = psd_eig(a, tol)?;
    let n = eig.eigenvalues.len();
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let floor = noise_floor(n, max);
    let root = eig.map_spectrum(|l| if l <= floor { 0.0 } else { l.sqrt() });
    Ok((root, clamped))
}

/// Hermitian PSD square root `V·diag(√λ)·V†`, negative eigenvalues within
/// `tol` clamped to zero.
pub fn psd_sqrt(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    psd_sqrt_with_mass(a, tol).map(|(s, _)| s)
}

/// `A^x` for Hermitian PSD `A` and `x ∈ [0, 1]`.
///
/// `A^0` is the full identity (`0^0 = 1`), not the projector onto the
/// support of `A`. For `x > 0`, eigenvalues at or below the noise floor map
/// to zero.
pub fn psd_power(a: &ComplexMatrix, x: f64, tol: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("exponent {x} outside [0, 1]")));
    }
    if x == 0.5 {
        return psd_sqrt(a, tol);
    }
    let (eig, _) = psd_eig(a, tol)?;
    if x == 0.0 {
        return Ok(ComplexMatrix::identity(a.dim()));
    }
    Ok(floored_power(&eig, x))
}

/// Principal square root of a general matrix whose eigenvalues lie
/// (numerically) on the non-negative real axis.
///
/// Works on the complex Schur form `A = Q T Q†`: the triangular root `R`
/// satisfies `R_ii = √T_ii` and, above the diagonal,
/// `R_ij = (T_ij − Σ_{i<k<j} R_ik R_kj) / (R_ii + R_jj)`. When both roots
/// vanish the numerator must vanish too (a semisimple zero eigenvalue);
/// otherwise no square root exists and `SpectrumError` is returned.
pub fn schur_sqrt(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    schur_sqrt_with_floor(a, tol, noise_floor(a.dim(), a.as_faer().norm_l2()))
}

/// [`schur_sqrt`] with an explicit noise floor: eigenvalues of modulus at
/// or below `floor` are taken as exact zeros. Callers that formed `a` as a
/// product know a larger rounding bound than `a`'s own norm.
pub fn schur_sqrt_with_floor(a: &ComplexMatrix, tol: f64, floor: f64) -> Result<ComplexMatrix> {
    let n = a.dim();
    let scale = a.max_abs().max(1.0);
    let decomposition = schur::schur(a)?;
    let t = decomposition.t.as_faer();

    let eigenvalues: Vec<c64> = (0..n).map(|i| t[(i, i)]).collect();
    for z in &eigenvalues {
        if z.re < -tol || z.im.abs() > tol * scale {
            return Err(Error::Spectrum(format!(
                "eigenvalue {:.6e}{:+.6e}i is off the non-negative real axis (tol {tol:.1e})",
                z.re, z.im
            )));
        }
    }
    let roots: Vec<c64> = eigenvalues
        .iter()
        .map(|&z| {
            if z.re <= 0.0 || z.norm() <= floor {
                c64::new(0.0, 0.0)
            } else {
                z.sqrt()
            }
        })
        .collect();

    // A pair of roots this small is numerically a repeated zero.
    let pivot_guard = floor.sqrt();
    let residual_guard = tol * scale;
    let mut r = Mat::<c64>::zeros(n, n);
    for j in 0..n {
        r[(j, j)] = roots[j];
        for i in (0..j).rev() {
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            let d = roots[i] + roots[j];
            if d.norm() > pivot_guard {
                r[(i, j)] = s / d;
            } else if s.norm() <= residual_guard {
                r[(i, j)] = c64::new(0.0, 0.0);
            } else {
                return Err(Error::Spectrum(format!(
                    "no principal square root: coupling {:.3e} between zero eigenvalues at ({i}, {j})",
                    s.norm()
                )));
            }
        }
    }

    let q = decomposition.q.as_faer();
    ComplexMatrix::try_from_faer(q * r.as_ref() * q.adjoint())
}

/// Singular values, descending.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut sv = a
        .as_faer()
        .singular_values()
        .map_err(|e| Error::Convergence(format!("SVD: {e:?}")))?;
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Drazin (here also Moore–Penrose) pseudo-inverse of a Hermitian PSD
/// matrix: eigenvalues above `tol · λ_max · n` are inverted, the rest map
/// to zero.
pub fn drazin_pinv_psd(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let (eig, _) = psd_eig(a, tol)?;
    let n = a.dim();
    let max = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let rank_tol = tol * max * n as f64;
    Ok(eig.map_spectrum(|l| if l > rank_tol { 1.0 / l } else { 0.0 }))
}
