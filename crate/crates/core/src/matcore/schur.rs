//! Complex Schur decomposition `A = Q T Q†`.
//!
//! Householder reduction to upper Hessenberg form followed by implicit
//! single-shift QR sweeps with Wilkinson shifts and Givens rotations. Both
//! `T` and `Q` are accumulated. Unblocked; intended for the literal
//! principal-square-root route, not for the hot eigenvalue path.

use faer::{c64, Mat};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Iteration budget per deflated eigenvalue.
const MAX_SWEEPS_PER_EIGENVALUE: usize = 100;

#[derive(Clone, Debug)]
pub struct Schur {
    /// Unitary Schur vectors.
    pub q: ComplexMatrix,
    /// Upper-triangular Schur form; the diagonal holds the eigenvalues.
    pub t: ComplexMatrix,
}

/// Row-major square buffer used by the in-place sweeps.
struct Dense {
    n: usize,
    a: Vec<c64>,
}

impl Dense {
    fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            n: m.dim(),
            a: m.row_major(),
        }
    }

    fn identity(n: usize) -> Self {
        let mut a = vec![c64::new(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c64::new(1.0, 0.0);
        }
        Self { n, a }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> c64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, z: c64) {
        self.a[i * self.n + j] = z;
    }

    fn into_matrix(self) -> ComplexMatrix {
        let n = self.n;
        ComplexMatrix::from_faer(Mat::from_fn(n, n, |i, j| self.a[i * n + j]))
    }

    /// Rows `k, k+1` ← G · rows, for columns `cols`.
    fn rotate_rows(&mut self, k: usize, g: &Givens, cols: std::ops::Range<usize>) {
        let n = self.n;
        for j in cols {
            let x = self.a[k * n + j];
            let y = self.a[(k + 1) * n + j];
            self.a[k * n + j] = x * g.c + g.s * y;
            self.a[(k + 1) * n + j] = -g.s.conj() * x + y * g.c;
        }
    }

    /// Columns `k, k+1` ← columns · G†, for rows `rows`.
    fn rotate_cols(&mut self, k: usize, g: &Givens, rows: std::ops::Range<usize>) {
        let n = self.n;
        for i in rows {
            let u = self.a[i * n + k];
            let w = self.a[i * n + k + 1];
            self.a[i * n + k] = u * g.c + w * g.s.conj();
            self.a[i * n + k + 1] = -u * g.s + w * g.c;
        }
    }
}

/// Unitary `[[c, s], [-conj(s), c]]` with real `c`.
struct Givens {
    c: f64,
    s: c64,
}

impl Givens {
    /// Rotation mapping `(x, y)` to `(r, 0)`.
    fn zeroing(x: c64, y: c64) -> Self {
        let ay = y.norm();
        if ay == 0.0 {
            return Self {
                c: 1.0,
                s: c64::new(0.0, 0.0),
            };
        }
        let ax = x.norm();
        if ax == 0.0 {
            return Self {
                c: 0.0,
                s: y.conj() / ay,
            };
        }
        let norm = ax.hypot(ay);
        let phase = x / ax;
        Self {
            c: ax / norm,
            s: phase * y.conj() / norm,
        }
    }
}

#[inline]
fn abs1(z: c64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Reduces `h` to upper Hessenberg form in place, accumulating into `q`.
fn hessenberg(h: &mut Dense, q: &mut Dense) {
    let n = h.n;
    if n < 3 {
        return;
    }
    let mut v = vec![c64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let m = n - k - 1;
        let x: Vec<c64> = (k + 1..n).map(|i| h.at(i, k)).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0].norm() == 0.0 {
            c64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        v[..m].copy_from_slice(&x);
        v[0] -= alpha;
        let vnorm = v[..m].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v[..m] {
            *z /= vnorm;
        }

        // H ← P H with P = I − 2 v v†, acting on rows k+1..n.
        for j in k..n {
            let mut dot = c64::new(0.0, 0.0);
            for (r, vi) in v[..m].iter().enumerate() {
                dot += vi.conj() * h.at(k + 1 + r, j);
            }
            let dot = dot * 2.0;
            for (r, vi) in v[..m].iter().enumerate() {
                let cur = h.at(k + 1 + r, j);
                h.set(k + 1 + r, j, cur - *vi * dot);
            }
        }
        // H ← H P and Q ← Q P, acting on columns k+1..n.
        for target in [&mut *h, &mut *q] {
            for i in 0..n {
                let mut dot = c64::new(0.0, 0.0);
                for (r, vi) in v[..m].iter().enumerate() {
                    dot += target.at(i, k + 1 + r) * *vi;
                }
                let dot = dot * 2.0;
                for (r, vi) in v[..m].iter().enumerate() {
                    let cur = target.at(i, k + 1 + r);
                    target.set(i, k + 1 + r, cur - dot * vi.conj());
                }
            }
        }
        h.set(k + 1, k, alpha);
        for i in k + 2..n {
            h.set(i, k, c64::new(0.0, 0.0));
        }
    }
}

/// Eigenvalue of the trailing 2×2 block closest to its last diagonal entry.
fn wilkinson_shift(a: c64, b: c64, c: c64, d: c64) -> c64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Computes the complex Schur decomposition of `a`.
pub fn schur(a: &ComplexMatrix) -> Result<Schur> {
    let n = a.dim();
    let mut h = Dense::from_matrix(a);
    let mut q = Dense::identity(n);
    hessenberg(&mut h, &mut q);

    let eps = f64::EPSILON;
    let safe_min = f64::MIN_POSITIVE / eps;
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    while hi > 0 {
        // Locate the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = abs1(h.at(lo, lo - 1));
            let mut diag = abs1(h.at(lo - 1, lo - 1)) + abs1(h.at(lo, lo));
            if diag == 0.0 {
                diag = (lo.saturating_sub(1)..=hi.min(lo + 1))
                    .map(|i| abs1(h.at(i, i)))
                    .sum();
            }
            if sub <= (eps * diag).max(safe_min) {
                h.set(lo, lo - 1, c64::new(0.0, 0.0));
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            sweeps = 0;
            continue;
        }

        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::Convergence(format!(
                "complex Schur QR failed to deflate row {hi} after {MAX_SWEEPS_PER_EIGENVALUE} sweeps"
            )));
        }

        let shift = if sweeps % 10 == 0 {
            // Exceptional shift to break cycles.
            h.at(hi, hi) + c64::new(0.75 * abs1(h.at(hi, hi - 1)), 0.0)
        } else {
            wilkinson_shift(
                h.at(hi - 1, hi - 1),
                h.at(hi - 1, hi),
                h.at(hi, hi - 1),
                h.at(hi, hi),
            )
        };

        let mut x = h.at(lo, lo) - shift;
        let mut y = h.at(lo + 1, lo);
        for k in lo..hi {
            let g = Givens::zeroing(x, y);
            let first_col = if k > lo { k - 1 } else { lo };
            h.rotate_rows(k, &g, first_col..n);
            let last_row = (k + 2).min(hi);
            h.rotate_cols(k, &g, 0..last_row + 1);
            q.rotate_cols(k, &g, 0..n);
            if k > lo {
                h.set(k + 1, k - 1, c64::new(0.0, 0.0));
            }
            if k + 1 < hi {
                x = h.at(k + 1, k);
                y = h.at(k + 2, k);
            }
        }
    }

    for j in 0..n {
        for i in j + 1..n {
            h.set(i, j, c64::new(0.0, 0.0));
        }
    }
    Ok(Schur {
        q: q.into_matrix(),
        t: h.into_matrix(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::matmul;

    fn lcg_matrix(n: usize, mut s: u64) -> ComplexMatrix {
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let e = (0..n * n).map(|_| c64::new(next(), next())).collect();
        ComplexMatrix::from_row_major(n, e).unwrap()
    }

    fn check(a: &ComplexMatrix) {
        let s = schur(a).unwrap();
        let n = a.dim();
        assert!(s.q.unitarity_residual() < 1e-12 * n as f64);
        for j in 0..n {
            for i in j + 1..n {
                assert_eq!(s.t.get(i, j), c64::new(0.0, 0.0));
            }
        }
        let back = matmul(&matmul(&s.q, &s.t).unwrap(), &s.q.adjoint()).unwrap();
        let scale = a.max_abs().max(1.0);
        assert!(
            back.max_abs_diff(a) < 1e-12 * n as f64 * scale,
            "reconstruction {}",
            back.max_abs_diff(a)
        );
    }

    #[test]
    fn random_matrices_reconstruct() {
        for (n, seed) in [(1, 1), (2, 2), (3, 3), (5, 4), (12, 5), (40, 6)] {
            check(&lcg_matrix(n, seed));
        }
    }

    #[test]
    fn already_triangular_and_diagonal() {
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 5.0], vec![0.0, 2.0]]).unwrap();
        check(&a);
        let d = ComplexMatrix::from_real_diagonal(&[3.0, 3.0, 0.0, -1.0]).unwrap();
        check(&d);
        check(&ComplexMatrix::zeros(4));
    }

    #[test]
    fn rotation_with_complex_spectrum() {
        // Real rotation generator: eigenvalues ±i.
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        check(&a);
        let s = schur(&a).unwrap();
        let mut ev: Vec<f64> = s.t.diagonal().iter().map(|z| z.im).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nilpotent_jordan_block() {
        let a = ComplexMatrix::from_real_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        check(&a);
    }
}
