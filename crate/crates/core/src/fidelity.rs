//! Uhlmann–Jozsa fidelity `F(ρ, σ)` by four equivalent routes.
//!
//! | method        | evaluates                                   |
//! |---------------|---------------------------------------------|
//! | `TraceNorm`   | `(Σ singular values of √ρ·√σ)²`             |
//! | `Classic`     | `(tr √(√ρ·σ·√ρ))²`                          |
//! | `ProductSqrt` | `(Re tr √(ρσ))²`, principal root via Schur  |
//! | `ProductEig`  | `(Σ_j √λ_j)²`, `λ_j` the eigenvalues of `ρσ` |
//!
//! `ρσ` is similar to `√ρ·σ·√ρ` on the support of `ρ` and block upper
//! triangular with a zero diagonal block on its kernel, so its spectrum is
//! real and non-negative; the product routes never form `√ρ`.
//! `ProductEig` is the fast path and what `Auto` resolves to.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use faer::c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{self, noise_floor, spectrum_order};
use crate::states::DensityMatrix;

/// Imaginary parts of the `ρσ` spectrum above `IMAG_TOL_PER_DIM · n` are
/// treated as a numerical failure.
pub const IMAG_TOL_PER_DIM: f64 = 1e-8;

/// Largest clamped negative mass accepted from the `ρσ` spectrum.
pub const CLAMP_TOL: f64 = 1e-8;

/// Slack allowed outside `[0, 1]` before a raw value is reported as
/// out of range.
pub const RANGE_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FidelityMethod {
    TraceNorm,
    Classic,
    ProductSqrt,
    ProductEig,
    Auto,
}

impl FidelityMethod {
    /// The four concrete routes, in a fixed order.
    pub const CONCRETE: [FidelityMethod; 4] = [
        FidelityMethod::TraceNorm,
        FidelityMethod::Classic,
        FidelityMethod::ProductSqrt,
        FidelityMethod::ProductEig,
    ];

    pub fn resolve(self) -> Self {
        match self {
            FidelityMethod::Auto => FidelityMethod::ProductEig,
            m => m,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FidelityMethod::TraceNorm => "trace-norm",
            FidelityMethod::Classic => "classic",
            FidelityMethod::ProductSqrt => "product-sqrt",
            FidelityMethod::ProductEig => "product-eig",
            FidelityMethod::Auto => "auto",
        }
    }
}

impl fmt::Display for FidelityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for FidelityMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace-norm" => Ok(FidelityMethod::TraceNorm),
            "classic" => Ok(FidelityMethod::Classic),
            "product-sqrt" => Ok(FidelityMethod::ProductSqrt),
            "product-eig" => Ok(FidelityMethod::ProductEig),
            "auto" => Ok(FidelityMethod::Auto),
            other => Err(Error::Domain(format!("unknown fidelity method `{other}`"))),
        }
    }
}

/// Fidelity value with numerical diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityResult {
    /// Clipped to `[0, 1]`.
    pub value: f64,
    /// Unclipped value as computed.
    pub raw_value: f64,
    pub method: FidelityMethod,
    /// Largest `|Im|` met on a non-Hermitian path; zero otherwise.
    pub max_imag_residual: f64,
    /// Total negative eigenvalue mass clamped to zero.
    pub clamped_mass: f64,
    pub elapsed_seconds: f64,
}

impl FidelityResult {
    fn new(
        raw_value: f64,
        method: FidelityMethod,
        max_imag_residual: f64,
        clamped_mass: f64,
        started: Instant,
    ) -> Self {
        Self {
            value: raw_value.clamp(0.0, 1.0),
            raw_value,
            method,
            max_imag_residual,
            clamped_mass,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        }
    }

    /// Whether the raw value lies in `[−RANGE_SLACK, 1 + RANGE_SLACK]`.
    pub fn raw_in_range(&self) -> bool {
        (-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&self.raw_value)
    }
}

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<usize> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "states have dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(rho.dim())
}

fn working_tol(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    rho.validation_tol().max(sigma.validation_tol())
}

/// `(Σ σ_i(√ρ·√σ))²`.
pub fn fidelity_trace_norm(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FidelityResult> {
    let started = Instant::now();
    check_dims(rho, sigma)?;
    let tol = working_tol(rho, sigma);
    let (sqrt_rho, m1) = matcore::psd_sqrt_with_mass(rho.matrix(), tol)?;
    let (sqrt_sigma, m2) = matcore::psd_sqrt_with_mass(sigma.matrix(), tol)?;
    let product = matcore::matmul(&sqrt_rho, &sqrt_sigma)?;
    let norm: f64 = matcore::singular_values(&product)?.iter().sum();
    Ok(FidelityResult::new(
        norm * norm,
        FidelityMethod::TraceNorm,
        0.0,
        m1 + m2,
        started,
    ))
}

/// `(tr √(√ρ·σ·√ρ))²`, the baseline route.
pub fn fidelity_classic(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FidelityResult> {
    let started = Instant::now();
    check_dims(rho, sigma)?;
    let tol = working_tol(rho, sigma);
    let (sqrt_rho, m1) = matcore::psd_sqrt_with_mass(rho.matrix(), tol)?;
    let m = matcore::matmul(&matcore::matmul(&sqrt_rho, sigma.matrix())?, &sqrt_rho)?;
    let (sqrt_m, m2) = matcore::psd_sqrt_with_mass(&m, tol)?;
    let tr = matcore::trace(&sqrt_m).re;
    Ok(FidelityResult::new(
        tr * tr,
        FidelityMethod::Classic,
        0.0,
        m1 + m2,
        started,
    ))
}

/// `(Re tr √(ρσ))²` with the principal square root of the non-Hermitian
/// product.
pub fn fidelity_product_sqrt(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FidelityResult> {
    let started = Instant::now();
    let n = check_dims(rho, sigma)?;
    let tol = working_tol(rho, sigma);
    let product = matcore::matmul(rho.matrix(), sigma.matrix())?;
    let root = matcore::schur_sqrt_with_floor(&product, tol, product_floor(rho, sigma))?;
    let tr = matcore::trace(&root);
    let imag = tr.im.abs();
    if imag > IMAG_TOL_PER_DIM * n as f64 {
        return Err(Error::Spectrum(format!(
            "tr √(ρσ) has imaginary part {imag:.3e}"
        )));
    }
    Ok(FidelityResult::new(
        tr.re * tr.re,
        FidelityMethod::ProductSqrt,
        imag,
        0.0,
        started,
    ))
}

/// Eigenvalues of the computed `ρσ` below this are rounding noise. The
/// product itself carries an error of order `n·ε·‖ρ‖·‖σ‖`, which for nearly
/// orthogonal states is far larger than `‖ρσ‖`.
fn product_floor(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let scale = rho.matrix().as_faer().norm_l2() * sigma.matrix().as_faer().norm_l2();
    noise_floor(rho.dim(), scale)
}

/// Real, non-negative reading of the `ρσ` spectrum.
struct ProductSpectrum {
    /// Clamped real parts with noise-level values zeroed.
    values: Vec<f64>,
    max_imag: f64,
    clamped_mass: f64,
    product: matcore::ComplexMatrix,
}

fn product_spectrum(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ProductSpectrum> {
    let n = check_dims(rho, sigma)?;
    let product = matcore::matmul(rho.matrix(), sigma.matrix())?;
    let eigenvalues = matcore::general_eigenvalues(&product)?;
    let max_imag = eigenvalues.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let clamped_mass: f64 = eigenvalues
        .iter()
        .fold(0.0, |acc, z| acc + (-z.re).max(0.0));
    if max_imag > IMAG_TOL_PER_DIM * n as f64 {
        return Err(Error::Spectrum(format!(
            "eigenvalue of ρσ has imaginary part {max_imag:.3e} (limit {:.1e})",
            IMAG_TOL_PER_DIM * n as f64
        )));
    }
    if clamped_mass > CLAMP_TOL {
        return Err(Error::Spectrum(format!(
            "ρσ has negative spectral mass {clamped_mass:.3e} (limit {CLAMP_TOL:.1e})"
        )));
    }
    let floor = product_floor(rho, sigma);
    let values = eigenvalues
        .iter()
        .map(|z| if z.re <= floor { 0.0 } else { z.re })
        .collect();
    Ok(ProductSpectrum {
        values,
        max_imag,
        clamped_mass,
        product,
    })
}

/// `(Σ_j √λ_j)²` over the eigenvalues of `ρσ`.
pub fn fidelity_product_eig(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FidelityResult> {
    let started = Instant::now();
    let spectrum = product_spectrum(rho, sigma)?;
    let root_sum: f64 = spectrum.values.iter().map(|l| l.sqrt()).sum();
    Ok(FidelityResult::new(
        root_sum * root_sum,
        FidelityMethod::ProductEig,
        spectrum.max_imag,
        spectrum.clamped_mass,
        started,
    ))
}

/// Dispatches to the named route; `Auto` runs `ProductEig`.
pub fn fidelity(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    method: FidelityMethod,
) -> Result<FidelityResult> {
    match method.resolve() {
        FidelityMethod::TraceNorm => fidelity_trace_norm(rho, sigma),
        FidelityMethod::Classic => fidelity_classic(rho, sigma),
        FidelityMethod::ProductSqrt => fidelity_product_sqrt(rho, sigma),
        FidelityMethod::ProductEig | FidelityMethod::Auto => fidelity_product_eig(rho, sigma),
    }
}

/// Spectrum of `ρ^x · σ · ρ^{1−x}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub x: f64,
    /// In [`spectrum_order`].
    #[serde(with = "complex_list")]
    pub eigenvalues: Vec<c64>,
    pub max_imag: f64,
    /// Magnitude of the most negative real part, zero if none.
    pub negativity: f64,
}

impl SpectrumReport {
    /// Real parts, descending.
    pub fn sorted_real_parts(&self) -> Vec<f64> {
        let mut re: Vec<f64> = self.eigenvalues.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| b.total_cmp(a));
        re
    }
}

/// Eigenvalues of the generalised sandwich `ρ^x σ ρ^{1−x}`, `x ∈ [0, 1]`.
///
/// Every `x` gives the same spectrum. `x = 1/2` is the Hermitian
/// `√ρ·σ·√ρ` and uses the Hermitian solver; `x = 0` and `x = 1` are the
/// open products `σρ` and `ρσ`.
pub fn sandwich_spectrum(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    x: f64,
) -> Result<SpectrumReport> {
    check_dims(rho, sigma)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "sandwich exponent {x} outside [0, 1]"
        )));
    }
    let tol = working_tol(rho, sigma);
    let mut eigenvalues = if x == 0.5 {
        let root = matcore::psd_sqrt(rho.matrix(), tol)?;
        let m = matcore::matmul(&matcore::matmul(&root, sigma.matrix())?, &root)?;
        matcore::herm_eig(&m, tol)?
            .eigenvalues
            .into_iter()
            .map(|l| c64::new(l, 0.0))
            .collect()
    } else {
        let left = matcore::psd_power(rho.matrix(), x, tol)?;
        let right = matcore::psd_power(rho.matrix(), 1.0 - x, tol)?;
        let s = matcore::matmul(&matcore::matmul(&left, sigma.matrix())?, &right)?;
        matcore::general_eigenvalues(&s)?
    };
    eigenvalues.sort_by(spectrum_order);
    let max_imag = eigenvalues.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let negativity = eigenvalues.iter().fold(0.0f64, |m, z| m.max(-z.re));
    Ok(SpectrumReport {
        x,
        eigenvalues,
        max_imag,
        negativity,
    })
}

/// `F = tr(ρσ) + 2 Σ_{j<k} √(λ_j λ_k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiszczakTerms {
    /// `Re tr(ρσ)`; the pure-state fidelity.
    pub overlap: f64,
    /// `2 Σ_{j<k} √(λ_j λ_k)`, non-negative.
    pub correction: f64,
}

impl MiszczakTerms {
    pub fn total(&self) -> f64 {
        self.overlap + self.correction
    }
}

/// Splits the fidelity into the overlap `tr(ρσ)` and the pairwise
/// eigenvalue correction.
pub fn miszczak_decomposition(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<MiszczakTerms> {
    let spectrum = product_spectrum(rho, sigma)?;
    let overlap = matcore::trace(&spectrum.product).re;
    // Σ_{j<k} r_j r_k accumulated with a running prefix sum.
    let mut prefix = 0.0f64;
    let mut pairs = 0.0f64;
    for r in spectrum.values.iter().map(|l| l.sqrt()) {
        pairs += r * prefix;
        prefix += r;
    }
    Ok(MiszczakTerms {
        overlap,
        correction: 2.0 * pairs,
    })
}

mod complex_list {
    use faer::c64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[c64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<c64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| c64::new(re, im)).collect())
    }
}
