//! Eigenvalues of dense complex matrices: Hessenberg reduction followed by
//! single-shift QR with Wilkinson shifts.

use rug::{Complex, Float};

use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::numroots::{cabs, canonical_sort, pow2};

fn cz(prec: u32) -> Complex {
    Complex::new(prec)
}

/// Similarity reduction to upper Hessenberg form by Gaussian elimination
/// with partial pivoting.
fn hessenberg(a: &mut CMatrix, prec: u32) {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        let piv = (k + 1..n)
            .max_by(|&i, &j| cabs(&a[i][k]).partial_cmp(&cabs(&a[j][k])).expect("finite"))
            .expect("nonempty");
        if cabs(&a[piv][k]).is_zero() {
            continue;
        }
        if piv != k + 1 {
            a.swap(piv, k + 1);
            for row in a.iter_mut() {
                row.swap(piv, k + 1);
            }
        }
        for i in k + 2..n {
            if a[i][k].real().is_zero() && a[i][k].imag().is_zero() {
                continue;
            }
            let f = Complex::with_val(prec, &a[i][k] / &a[k + 1][k]);
            let (upper, lower) = a.split_at_mut(i);
            for (x, y) in lower[0][k..].iter_mut().zip(&upper[k + 1][k..]) {
                *x -= Complex::with_val(prec, &f * y);
            }
            for row in a.iter_mut() {
                let t = Complex::with_val(prec, &f * &row[i]);
                row[k + 1] += t;
            }
        }
    }
}

/// Rotation `G = [[c, s], [−s̄, c]]` with `c` real and `G (a, b)ᵀ = (r, 0)ᵀ`.
fn givens(a: &Complex, b: &Complex, prec: u32) -> (Float, Complex) {
    let na = cabs(a);
    let nb = cabs(b);
    let r = Float::with_val(prec, na.hypot_ref(&nb));
    if r.is_zero() {
        return (Float::with_val(prec, 1), cz(prec));
    }
    if na.is_zero() {
        return (Float::new(prec), Complex::with_val(prec, 1));
    }
    let c = Float::with_val(prec, &na / &r);
    let phase = Complex::with_val(prec, a / &na);
    let s = Complex::with_val(prec, phase * Complex::with_val(prec, b.conj_ref())) / &r;
    (c, Complex::with_val(prec, s))
}

fn wilkinson_shift(h: &CMatrix, hi: usize, prec: u32) -> Complex {
    let a = &h[hi - 1][hi - 1];
    let b = &h[hi - 1][hi];
    let c = &h[hi][hi - 1];
    let d = &h[hi][hi];
    let tr = Complex::with_val(prec, a + d);
    let det = Complex::with_val(prec, a * d) - Complex::with_val(prec, b * c);
    let half = Complex::with_val(prec, &tr / 2u32);
    let disc = Complex::with_val(prec, half.square_ref()) - det;
    let sq = Complex::with_val(prec, disc.sqrt_ref());
    let l1 = Complex::with_val(prec, &half + &sq);
    let l2 = Complex::with_val(prec, &half - &sq);
    let d1 = cabs(&Complex::with_val(prec, &l1 - d));
    let d2 = cabs(&Complex::with_val(prec, &l2 - d));
    if d1 <= d2 {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of `m`, sorted by real then imaginary part.
pub fn eigenvalues(m: &CMatrix, prec: u32) -> Result<Vec<Complex>> {
    let n = m.len();
    let mut h: CMatrix = m.iter().map(|r| r.iter().map(|v| Complex::with_val(prec, v)).collect()).collect();
    hessenberg(&mut h, prec);
    let eps = pow2(prec, -(prec as i32) + 6);
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut since = 0usize;
    loop {
        if hi == 0 {
            out.push(h[0][0].clone());
            break;
        }
        // deflate negligible subdiagonal entries
        let mut lo = hi;
        while lo > 0 {
            let s = Float::with_val(prec, cabs(&h[lo][lo]) + cabs(&h[lo - 1][lo - 1]));
            if cabs(&h[lo][lo - 1]) <= Float::with_val(prec, &eps * &s) {
                h[lo][lo - 1] = cz(prec);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out.push(h[hi][hi].clone());
            hi -= 1;
            since = 0;
            continue;
        }
        iter += 1;
        since += 1;
        if iter > 100 * n {
            return Err(Error::ConvergenceFailure(format!("{n}x{n} matrix after {iter} QR sweeps")));
        }
        let mu = if since % 11 == 10 {
            // exceptional shift
            Complex::with_val(prec, &h[hi][hi] + cabs(&h[hi][hi - 1]) * Float::with_val(prec, 0.75))
        } else {
            wilkinson_shift(&h, hi, prec)
        };
        for (k, row) in h.iter_mut().enumerate().take(hi + 1).skip(lo) {
            row[k] -= &mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(&h[k][k], &h[k + 1][k], prec);
            let sc = Complex::with_val(prec, s.conj_ref());
            let (top, bottom) = h.split_at_mut(k + 1);
            for (x, y) in top[k][k..=hi].iter_mut().zip(&mut bottom[0][k..=hi]) {
                let (x0, y0) = (x.clone(), y.clone());
                *x = Complex::with_val(prec, &x0 * &c) + Complex::with_val(prec, &s * &y0);
                *y = Complex::with_val(prec, &y0 * &c) - Complex::with_val(prec, &sc * &x0);
            }
            rots.push((c, s));
        }
        for (off, (c, s)) in rots.iter().enumerate() {
            let k = lo + off;
            let sc = Complex::with_val(prec, s.conj_ref());
            for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
                let x = row[k].clone();
                let y = row[k + 1].clone();
                row[k] = Complex::with_val(prec, &x * c) + Complex::with_val(prec, &sc * &y);
                row[k + 1] = Complex::with_val(prec, &y * c) - Complex::with_val(prec, s * &x);
            }
        }
        for (k, row) in h.iter_mut().enumerate().take(hi + 1).skip(lo) {
            row[k] += &mu;
        }
    }
    canonical_sort(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[(i64, i64)]], prec: u32) -> CMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&(a, b)| Complex::with_val(prec, (a, b))).collect())
            .collect()
    }

    fn near(z: &Complex, re: f64, im: f64) -> bool {
        let d = Complex::with_val(z.prec().0, z - Complex::with_val(64, (re, im)));
        cabs(&d) < 1e-60
    }

    #[test]
    fn symmetric_two_by_two() {
        let m = mat(&[&[(3, 0), (-1, 0)], &[(-1, 0), (3, 0)]], 256);
        let e = eigenvalues(&m, 256).unwrap();
        assert!(near(&e[0], 2.0, 0.0) && near(&e[1], 4.0, 0.0));
    }

    #[test]
    fn triangular_and_complex() {
        let m = mat(
            &[&[(1, 1), (5, 0), (2, -3)], &[(0, 0), (-2, 0), (7, 7)], &[(0, 0), (0, 0), (4, -1)]],
            256,
        );
        let e = eigenvalues(&m, 256).unwrap();
        assert!(near(&e[0], -2.0, 0.0) && near(&e[1], 1.0, 1.0) && near(&e[2], 4.0, -1.0));
        // rotation generator: eigenvalues ±i
        let m = mat(&[&[(0, 0), (-1, 0)], &[(1, 0), (0, 0)]], 256);
        let e = eigenvalues(&m, 256).unwrap();
        assert!(near(&e[0], 0.0, -1.0) && near(&e[1], 0.0, 1.0));
    }

    #[test]
    fn trace_is_preserved() {
        let prec = 256;
        let m: CMatrix = (0..7)
            .map(|i| (0..7).map(|j| Complex::with_val(prec, (((i * 7 + j) * 37 % 11) as i64 - 5, ((i + 2 * j) % 5) as i64 - 2))).collect())
            .collect();
        let e = eigenvalues(&m, prec).unwrap();
        let mut tr = Complex::new(prec);
        let mut se = Complex::new(prec);
        for i in 0..7 {
            tr += &m[i][i];
            se += &e[i];
        }
        assert!(cabs(&Complex::with_val(prec, tr - se)) < 1e-60);
    }
}
