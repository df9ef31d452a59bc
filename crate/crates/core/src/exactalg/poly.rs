//! Dense univariate polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Complex;
use serde::{Deserialize, Serialize};

use super::{GaussianRational, Ring};
use crate::error::{Error, Result};

/// Dense polynomial, `coeffs[k]` multiplies `x^k`.
///
/// Trailing exact zeros are always trimmed, so the zero polynomial is the
/// empty coefficient vector and `leading()` is nonzero whenever it exists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Polynomial<T = GaussianRational> {
    coeffs: Vec<T>,
}

impl<T> Default for Polynomial<T> {
    fn default() -> Self {
        Self { coeffs: Vec::new() }
    }
}

impl<T: Ring> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c x^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `x - root`
    pub fn linear_factor(root: &T) -> Self {
        Self::new(vec![root.neg_ref(), root.one_like()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&T> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial (degree −∞).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale_int(k as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &T) -> T {
        let mut acc = z.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(z).add_ref(c);
        }
        acc
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    /// `∏ (x - r)` over `roots`; `one` supplies the unit of the scalar type.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a T>, one: T) -> Self
    where
        T: 'a,
    {
        roots
            .into_iter()
            .fold(Self::constant(one), |acc, r| &acc * &Self::linear_factor(r))
    }
}

impl<'a, T: Ring> Add<&'a Polynomial<T>> for &'a Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, o: &Polynomial<T>) -> Polynomial<T> {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut out = long.coeffs.clone();
        for (a, b) in out.iter_mut().zip(&short.coeffs) {
            *a = a.add_ref(b);
        }
        Polynomial::new(out)
    }
}

impl<'a, T: Ring> Sub<&'a Polynomial<T>> for &'a Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, o: &Polynomial<T>) -> Polynomial<T> {
        self + &(-o)
    }
}

impl<T: Ring> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial {
            coeffs: self.coeffs.iter().map(Ring::neg_ref).collect(),
        }
    }
}

impl<'a, T: Ring> Mul<&'a Polynomial<T>> for &'a Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, o: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Polynomial::new(out)
    }
}

macro_rules! forward_poly_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Ring> $tr<Polynomial<T>> for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, o: Polynomial<T>) -> Polynomial<T> {
                (&self).$m(&o)
            }
        }
    };
}
forward_poly_owned!(Add, add);
forward_poly_owned!(Sub, sub);
forward_poly_owned!(Mul, mul);

impl Polynomial<GaussianRational> {
    /// The identity polynomial `x` (or `η`).
    pub fn x() -> Self {
        Self::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    pub fn from_strs(coeffs: &[&str]) -> Result<Self> {
        coeffs
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `p(-x)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    /// Euclidean division `self = q d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.leading().ok_or(Error::DivisionByZero)?;
        let dinv = dl.inv();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![GaussianRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &dinv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    r[k + j] -= &t;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Quotient `r` with `self = d r` exactly.
    pub fn exact_divide(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonExactDivision)
        }
    }

    /// Monic greatest common divisor; zero iff both inputs are zero.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.monic(), b.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn to_complex(&self, prec: u32) -> Polynomial<Complex> {
        Polynomial::new(self.coeffs.iter().map(|c| c.to_complex(prec)).collect())
    }

    /// Horner evaluation at a big-float point, coefficients rounded to the
    /// point's precision on the fly.
    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let prec = z.prec().0.max(z.prec().1);
        let mut acc = Complex::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c.to_complex(prec);
        }
        acc
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }
}

impl Ring for Polynomial<GaussianRational> {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale_int(&self, k: i64) -> Self {
        self.scale(&GaussianRational::from_int(k))
    }
}

impl fmt::Display for Polynomial<GaussianRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c = if c.is_real() { c.to_string() } else { format!("({c})") };
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hermite_brute(n: usize) -> Polynomial {
        // H_n = sum_k (-1)^k n! / (k! (n-2k)!) (2x)^{n-2k}
        let fact = |m: usize| (1..=m as i64).product::<i64>();
        let mut c = vec![GaussianRational::zero(); n + 1];
        for k in 0..=n / 2 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let v = sign * fact(n) / (fact(k) * fact(n - 2 * k)) * (1 << (n - 2 * k));
            c[n - 2 * k] = GaussianRational::from_int(v);
        }
        Polynomial::new(c)
    }

    #[test]
    fn derivative_examples() {
        let p = Polynomial::from_ints(&[1, 0, 1]);
        assert_eq!(p.derivative(), Polynomial::from_ints(&[0, 2]));
        assert!(Polynomial::from_ints(&[5]).derivative().is_zero());
        let h2 = Polynomial::from_ints(&[-2, 0, 4]);
        assert_eq!(h2.derivative(), hermite_brute(1).scale(&GaussianRational::from_int(4)));
    }

    #[test]
    fn exact_division_examples() {
        let p = Polynomial::from_ints(&[-1, 0, 1]);
        let q = Polynomial::from_ints(&[-1, 1]);
        assert_eq!(p.exact_divide(&q).unwrap(), Polynomial::from_ints(&[1, 1]));
        assert_eq!(p.exact_divide(&Polynomial::one()).unwrap(), p);
        let p = Polynomial::from_ints(&[0, 1, 0, 1]);
        let q = Polynomial::from_ints(&[2, 0, 1]);
        assert_eq!(p.exact_divide(&q), Err(Error::NonExactDivision));
        assert_eq!(p.exact_divide(&Polynomial::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn evaluation_examples() {
        let p = Polynomial::from_ints(&[1, 0, 1]);
        assert!(p.eval(&GaussianRational::i()).is_zero());
        let z = GaussianRational::from_ratio(3, 7);
        assert_eq!(Polynomial::x().eval(&z), z);

        let h2 = Polynomial::from_ints(&[-2, 0, 4]);
        let x = Complex::with_val(256, 2).sqrt().recip();
        let v = h2.eval_complex(&x);
        let bound = rug::Float::with_val(256, rug::Float::i_exp(1, -240));
        assert!(Complex::with_val(256, v.abs_ref()).real() < &bound);
    }

    #[test]
    fn gcd_and_reflect() {
        let a = &Polynomial::from_ints(&[-1, 1]) * &Polynomial::from_ints(&[2, 1]);
        let b = &Polynomial::from_ints(&[-1, 1]) * &Polynomial::from_ints(&[5, 0, 1]);
        assert_eq!(Polynomial::gcd(&a, &b), Polynomial::from_ints(&[-1, 1]));
        assert_eq!(Polynomial::from_ints(&[1, 2, 3]).reflect(), Polynomial::from_ints(&[1, -2, 3]));
        assert_eq!(Polynomial::from_ints(&[3, 4]).to_string(), "4*x + 3");
    }
}
