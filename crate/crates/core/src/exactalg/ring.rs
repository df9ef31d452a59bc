use rug::Complex;

use super::GaussianRational;

/// Minimal commutative-ring interface shared by exact and big-float scalars,
/// and by the polynomial and rational-function types built on top of them.
pub trait Ring: Clone + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Exact zero test. For floats this is only true for an exact 0.
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale_int(&self, k: i64) -> Self;
}

impl Ring for GaussianRational {
    fn zero_like(&self) -> Self {
        GaussianRational::zero()
    }
    fn one_like(&self) -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
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
        self * &GaussianRational::from_int(k)
    }
}

impl Ring for Complex {
    fn zero_like(&self) -> Self {
        Complex::new(self.prec())
    }
    fn one_like(&self) -> Self {
        Complex::with_val(self.prec(), 1)
    }
    fn is_zero(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self + o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self - o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self * o)
    }
    fn neg_ref(&self) -> Self {
        Complex::with_val(self.prec(), -self)
    }
    fn scale_int(&self, k: i64) -> Self {
        Complex::with_val(self.prec(), self * k)
    }
}
