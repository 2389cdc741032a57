//! Symmetric tridiagonal eigenvalue tools: Sturm counts, bisection and inverse iteration.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e` (`e.len() + 1 == d.len()`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::SizeMismatch {
                expected: diag.len().saturating_sub(1),
                got: off.len(),
            });
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::Eigensolver("matrix has non-finite entries".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let e2 = if i > 0 {
                self.off[i - 1] * self.off[i - 1]
            } else {
                0.0
            };
            q = self.diag[i] - x - if i > 0 { e2 / q } else { 0.0 };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Number of eigenvalues in the closed interval `[lo, hi]`, up to bisection resolution.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        let above = self.count_below(next_up(hi));
        above.saturating_sub(self.count_below(lo))
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::Eigensolver(format!(
                "index {k} out of range for size {}",
                self.len()
            )));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        lo -= 1e-12 * scale;
        hi += 1e-12 * scale;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Eigenvalue of smallest magnitude.
    pub fn smallest_magnitude(&self) -> Result<f64> {
        let neg = self.count_below(0.0);
        let mut best: Option<f64> = None;
        for k in [neg.checked_sub(1), Some(neg)].into_iter().flatten() {
            if k < self.len() {
                let lam = self.eigenvalue(k)?;
                if best.is_none_or(|b| lam.abs() < b.abs()) {
                    best = Some(lam);
                }
            }
        }
        best.ok_or_else(|| Error::Eigensolver("empty matrix".into()))
    }

    /// Unit eigenvector for the eigenvalue `lambda` by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let (lo, hi) = self.gershgorin();
        let shift = lambda + 1e-13 * lo.abs().max(hi.abs()).max(1.0);
        let lu = ShiftedLu::factor(self, shift);
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.1 * ((i * 7919) % 101) as f64 / 101.0)
            .collect();
        normalize(&mut v);
        for _ in 0..8 {
            let mut w = lu.solve(&v);
            if !normalize(&mut w) {
                return Err(Error::Eigensolver(
                    "inverse iteration produced a non-finite vector".into(),
                ));
            }
            let change = v
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - b).abs().min((a + b).abs()))
                .fold(0.0, f64::max);
            v = w;
            if change < 1e-14 {
                break;
            }
        }
        Ok(v)
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits + 1 } else { bits - 1 })
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

/// LU factorization of `T - σI` with partial pivoting (upper factor has two superdiagonals).
struct ShiftedLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, sigma: f64) -> Self {
        let n = t.len();
        let (lo, hi) = t.gershgorin();
        let tiny = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];
        // the partially reduced row i holds (a, b) in columns i, i+1
        let mut a = t.diag[0] - sigma;
        let mut b = if n > 1 { t.off[0] } else { 0.0 };
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if a.abs() < tiny { tiny.copysign(a) } else { a };
                break;
            }
            // next row in columns i, i+1, i+2
            let na = t.off[i];
            let nb = t.diag[i + 1] - sigma;
            let nc = if i + 2 < n { t.off[i + 1] } else { 0.0 };
            let (p0, p1, p2, r0, r1, r2) = if na.abs() > a.abs() {
                (na, nb, nc, a, b, 0.0)
            } else {
                (a, b, 0.0, na, nb, nc)
            };
            swapped[i] = na.abs() > a.abs();
            let p0 = if p0.abs() < tiny {
                tiny.copysign(p0)
            } else {
                p0
            };
            let m = r0 / p0;
            u0[i] = p0;
            u1[i] = p1;
            u2[i] = p2;
            mult[i] = m;
            a = r1 - m * p1;
            b = r2 - m * p2;
        }
        Self {
            u0,
            u1,
            u2,
            mult,
            swapped,
        }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut y = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= self.mult[i] * y[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * x[i + 2];
            }
            x[i] = s / self.u0[i];
        }
        x
    }
}
