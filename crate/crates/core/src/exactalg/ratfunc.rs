//! Rational functions over ℚ(i), kept in lowest terms.

use std::fmt;

use rug::Complex;

use super::{GaussianRational, Polynomial, Ring};
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Polynomial::gcd(&num, &den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (
                num.exact_divide(&g).expect("gcd divides"),
                den.exact_divide(&g).expect("gcd divides"),
            )
        };
        let lead = den.leading().expect("nonzero").clone();
        if !lead.is_one() {
            let inv = lead.inv();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn zero() -> Self {
        Self {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// The numerator when the denominator is 1.
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        self.is_polynomial().then(|| self.num.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduce(&self.num + &o.num, self.den.clone());
        }
        Self::reduce(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::reduce(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(n, &self.den * &self.den)
    }

    pub fn eval(&self, z: &GaussianRational) -> Result<GaussianRational> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.num.eval(z) / &d)
    }

    pub fn to_numeric(&self, prec: u32) -> NumericRationalFunction {
        NumericRationalFunction {
            num: self.num.to_complex(prec),
            den: self.den.to_complex(prec),
        }
    }
}

impl Ring for RationalFunction {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn scale_int(&self, k: i64) -> Self {
        self.scale(&GaussianRational::from_int(k))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Unreduced quotient of big-float polynomials; no gcd is attempted.
#[derive(Clone, Debug)]
pub struct NumericRationalFunction {
    pub num: Polynomial<Complex>,
    pub den: Polynomial<Complex>,
}

impl NumericRationalFunction {
    pub fn eval(&self, z: &Complex) -> Complex {
        let n = self.num.eval(z);
        let d = self.den.eval(z);
        Complex::with_val(z.prec(), n / d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn reduces_on_construction() {
        // (x^2 - 1) / (2x - 2) = (x + 1) / 2
        let r = RationalFunction::new(p(&[-1, 0, 1]), p(&[-2, 2])).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(
            r.num(),
            &Polynomial::from_strs(&["1/2", "1/2"]).unwrap()
        );
        assert!(RationalFunction::new(p(&[1]), Polynomial::zero()).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = RationalFunction::new(p(&[1]), p(&[0, 1])).unwrap(); // 1/x
        let b = RationalFunction::new(p(&[1]), p(&[1, 1])).unwrap(); // 1/(x+1)
        let s = a.add(&b);
        assert_eq!(s.num(), &p(&[1, 2]));
        assert_eq!(s.den(), &p(&[0, 1, 1]));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.mul(&a.inv().unwrap()), RationalFunction::one());
        // (1/x)' = -1/x^2
        assert_eq!(a.derivative(), RationalFunction::new(p(&[-1]), p(&[0, 0, 1])).unwrap());
    }
}
