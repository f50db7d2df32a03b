// Reference computations that share no code with the library kernels:
// plain row-major complex arithmetic, Gauss-Jordan inversion and the
// Denman-Beavers square-root iteration.

#![allow(dead_code)]

use uhlfid::c64;
use uhlfid::states::{random_density, StateSeed};
use uhlfid::{ComplexMatrix, DensityMatrix};

pub type Dense = Vec<c64>;

pub fn to_dense(a: &ComplexMatrix) -> Dense {
    a.row_major()
}

pub fn mul(a: &[c64], b: &[c64], n: usize) -> Dense {
    let mut c = vec![c64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

pub fn trace(a: &[c64], n: usize) -> c64 {
    (0..n).map(|i| a[i * n + i]).sum()
}

pub fn identity(n: usize) -> Dense {
    let mut a = vec![c64::new(0.0, 0.0); n * n];
    for i in 0..n {
        a[i * n + i] = c64::new(1.0, 0.0);
    }
    a
}

/// Gauss-Jordan with partial pivoting.
pub fn inverse(a: &[c64], n: usize) -> Dense {
    let mut m = a.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x * n + col].norm().total_cmp(&m[y * n + col].norm()))
            .unwrap();
        for j in 0..n {
            m.swap(col * n + j, pivot * n + j);
            inv.swap(col * n + j, pivot * n + j);
        }
        let p = m[col * n + col];
        assert!(p.norm() > 0.0, "singular matrix in oracle inverse");
        for j in 0..n {
            m[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for i in 0..n {
            if i != col {
                let f = m[i * n + col];
                if f.norm() != 0.0 {
                    for j in 0..n {
                        let (mc, ic) = (m[col * n + j], inv[col * n + j]);
                        m[i * n + j] -= f * mc;
                        inv[i * n + j] -= f * ic;
                    }
                }
            }
        }
    }
    inv
}

/// Principal square root by the Denman-Beavers iteration
/// `Y ← (Y + Z⁻¹)/2, Z ← (Z + Y⁻¹)/2`, for matrices with spectrum in the
/// open right half-plane.
pub fn denman_beavers_sqrt(a: &[c64], n: usize) -> Dense {
    let mut y = a.to_vec();
    let mut z = identity(n);
    for _ in 0..100 {
        let yi = inverse(&y, n);
        let zi = inverse(&z, n);
        let y_next: Dense = y.iter().zip(&zi).map(|(p, q)| (p + q) * 0.5).collect();
        let z_next: Dense = z.iter().zip(&yi).map(|(p, q)| (p + q) * 0.5).collect();
        let change = y_next
            .iter()
            .zip(&y)
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max);
        y = y_next;
        z = z_next;
        if change < 1e-15 {
            break;
        }
    }
    y
}

/// `(Re tr √(ρσ))²` through the Denman-Beavers root; full-rank inputs only.
pub fn fidelity_denman_beavers(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let prod = mul(&to_dense(rho.matrix()), &to_dense(sigma.matrix()), n);
    let t = trace(&denman_beavers_sqrt(&prod, n), n).re;
    t * t
}

/// Qubit closed form `tr(ρσ) + 2√(det ρ · det σ)`. A state flagged pure
/// gets its determinant as exactly zero; computed from entries it would be
/// rounding noise whose square root is ~1e-8.
pub fn qubit_fidelity(
    rho: &ComplexMatrix,
    sigma: &ComplexMatrix,
    rho_pure: bool,
    sigma_pure: bool,
) -> f64 {
    let a = to_dense(rho);
    let b = to_dense(sigma);
    let overlap = trace(&mul(&a, &b, 2), 2).re;
    let det = |m: &[c64], pure: bool| {
        if pure {
            0.0
        } else {
            (m[0] * m[3] - m[1] * m[2]).re.max(0.0)
        }
    };
    overlap + 2.0 * (det(&a, rho_pure) * det(&b, sigma_pure)).sqrt()
}

/// Squared Bhattacharyya coefficient.
pub fn bhattacharyya_sq(p: &[f64], q: &[f64]) -> f64 {
    let s: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    s * s
}

/// `|⟨ψ|φ⟩|² / (‖ψ‖²‖φ‖²)`.
pub fn pure_overlap(psi: &[c64], phi: &[c64]) -> f64 {
    let ip: c64 = psi.iter().zip(phi).map(|(a, b)| a.conj() * b).sum();
    let n1: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let n2: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
    ip.norm_sqr() / (n1 * n2)
}

/// `⟨ψ|σ|ψ⟩ / ‖ψ‖²`.
pub fn expectation(psi: &[c64], sigma: &ComplexMatrix) -> f64 {
    let n = psi.len();
    let s = to_dense(sigma);
    let mut acc = c64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += psi[i].conj() * s[i * n + j] * psi[j];
        }
    }
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    acc.re / norm
}

pub fn max_abs_diff(a: &[c64], b: &[c64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn pair(
    n: usize,
    rank_rho: usize,
    rank_sigma: usize,
    master: u64,
    k: u64,
) -> (DensityMatrix, DensityMatrix) {
    let (a, b) = StateSeed::new(master, k).split();
    (
        random_density(n, rank_rho, a).unwrap(),
        random_density(n, rank_sigma, b).unwrap(),
    )
}

pub fn spread(values: &[f64]) -> f64 {
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}
