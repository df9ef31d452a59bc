//! Determinants and Wronskians.

use super::{GaussianRational, Polynomial, QuasiRationalFunction, RationalFunction, Ring};
use crate::error::{Error, Result};

pub const WRONSKIAN_SIZE_CAP: usize = 8;

/// Determinant by cofactor expansion along rows, memoizing minors by the set
/// of columns already used. `m[r][c]`, square, nonempty.
pub fn determinant<T: Ring>(m: &[Vec<T>]) -> T {
    let k = m.len();
    assert!(k > 0 && m.iter().all(|row| row.len() == k), "square nonempty matrix");
    assert!(k < 24, "matrix too large for cofactor expansion");
    let mut memo: Vec<Option<T>> = vec![None; 1 << k];
    minor(m, 0, &mut memo)
}

fn minor<T: Ring>(m: &[Vec<T>], used: usize, memo: &mut [Option<T>]) -> T {
    let k = m.len();
    let row = used.count_ones() as usize;
    if row == k {
        return m[0][0].one_like();
    }
    if let Some(v) = &memo[used] {
        return v.clone();
    }
    let mut acc = m[0][0].zero_like();
    let mut free_before = 0;
    for c in 0..k {
        if used & (1 << c) != 0 {
            continue;
        }
        let a = &m[row][c];
        if !a.is_zero() {
            let t = a.mul_ref(&minor(m, used | (1 << c), memo));
            acc = if free_before % 2 == 0 {
                acc.add_ref(&t)
            } else {
                acc.sub_ref(&t)
            };
        }
        free_before += 1;
    }
    memo[used] = Some(acc.clone());
    acc
}

/// `W[f_1, …, f_k]`. The prefactor of the result is the product of the input
/// prefactors; the empty Wronskian is the constant 1.
pub fn wronskian(fs: &[QuasiRationalFunction]) -> Result<QuasiRationalFunction> {
    let k = fs.len();
    if k > WRONSKIAN_SIZE_CAP {
        return Err(Error::SizeCapExceeded {
            size: k,
            cap: WRONSKIAN_SIZE_CAP,
        });
    }
    let mut out = QuasiRationalFunction::from_rational(RationalFunction::one());
    if k == 0 {
        return Ok(out);
    }
    // columns (d/dη + L_i)^r R_i
    let cols: Vec<Vec<RationalFunction>> = fs
        .iter()
        .map(|f| {
            let mut col = vec![f.rat.clone()];
            for _ in 1..k {
                let next = f.twisted_derivative(col.last().expect("nonempty"));
                col.push(next);
            }
            col
        })
        .collect();
    // scale each row to polynomial entries by the lcm of its denominators
    let mut den = Polynomial::one();
    let mut rows = Vec::with_capacity(k);
    for r in 0..k {
        let mut l = Polynomial::one();
        for col in &cols {
            let d = col[r].den();
            let g = Polynomial::gcd(&l, d);
            l = &l * &d.exact_divide(&g)?;
        }
        let row: Vec<Polynomial> = cols
            .iter()
            .map(|col| {
                let e = &col[r];
                Ok(e.num() * &l.exact_divide(e.den())?)
            })
            .collect::<Result<_>>()?;
        den = &den * &l;
        rows.push(row);
    }
    out.rat = RationalFunction::new(determinant(&rows), den)?;
    for f in fs {
        out.exp_coeff += &f.exp_coeff;
        out.pow_eta += &f.pow_eta;
        out.pow_one_minus += &f.pow_one_minus;
        out.pow_one_plus += &f.pow_one_plus;
    }
    Ok(out)
}

/// Wronskian of plain polynomials; the empty Wronskian is 1.
pub fn poly_wronskian(ps: &[Polynomial]) -> Result<Polynomial> {
    let k = ps.len();
    if k > WRONSKIAN_SIZE_CAP {
        return Err(Error::SizeCapExceeded {
            size: k,
            cap: WRONSKIAN_SIZE_CAP,
        });
    }
    if k == 0 {
        return Ok(Polynomial::one());
    }
    let cols: Vec<Vec<Polynomial>> = ps
        .iter()
        .map(|p| {
            let mut col = vec![p.clone()];
            for _ in 1..k {
                let next = col.last().expect("nonempty").derivative();
                col.push(next);
            }
            col
        })
        .collect();
    let rows: Vec<Vec<Polynomial>> = (0..k)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    Ok(determinant(&rows))
}

/// Exact determinant of a scalar matrix by Gaussian
/// elimination over ℚ(i).
pub fn scalar_determinant(m: &[Vec<GaussianRational>]) -> GaussianRational {
    let k = m.len();
    let mut a: Vec<Vec<GaussianRational>> = m.to_vec();
    let mut det = GaussianRational::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !a[r][c].is_zero()) else {
            return GaussianRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let inv = a[c][c].inv();
        det *= &a[c][c];
        for r in c + 1..k {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            let (upper, lower) = a.split_at_mut(r);
            for (x, y) in lower[0][c..k].iter_mut().zip(&upper[c][c..k]) {
                *x -= &(&f * y);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn small_wronskians() {
        let one = QuasiRationalFunction::from_poly(Polynomial::one());
        let x = QuasiRationalFunction::from_poly(Polynomial::x());
        assert_eq!(wronskian(std::slice::from_ref(&x)).unwrap().rat, x.rat);
        assert_eq!(wronskian(&[one, x]).unwrap().rat, RationalFunction::one());
        // W[H1, H2] = 2x·8x − 2·(4x²−2)
        let h1 = p(&[0, 2]);
        let h2 = p(&[-2, 0, 4]);
        assert_eq!(poly_wronskian(&[h1, h2]).unwrap(), p(&[4, 0, 8]));
    }

    #[test]
    fn size_cap() {
        let fs = vec![QuasiRationalFunction::from_poly(Polynomial::one()); 9];
        assert_eq!(
            wronskian(&fs).unwrap_err(),
            Error::SizeCapExceeded { size: 9, cap: 8 }
        );
    }

    #[test]
    fn determinant_agrees_with_elimination() {
        let m: Vec<Vec<GaussianRational>> = [[2, -1, 3, 0], [1, 4, -2, 5], [0, 3, 1, -1], [7, 0, 2, 2]]
            .iter()
            .map(|r| r.iter().map(|&v| GaussianRational::from_int(v)).collect())
            .collect();
        assert_eq!(determinant(&m), scalar_determinant(&m));
        assert!(!determinant(&m).is_zero());
    }
}
