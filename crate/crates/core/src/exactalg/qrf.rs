//! Quasi-rational functions `e^{aη} η^b (1-η)^c (1+η)^d · R(η)`.

use super::{GaussianRational, Polynomial, RationalFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiRationalFunction {
    pub exp_coeff: GaussianRational,
    pub pow_eta: GaussianRational,
    pub pow_one_minus: GaussianRational,
    pub pow_one_plus: GaussianRational,
    pub rat: RationalFunction,
}

impl QuasiRationalFunction {
    /// Unit prefactor.
    pub fn from_rational(rat: RationalFunction) -> Self {
        Self {
            exp_coeff: GaussianRational::zero(),
            pow_eta: GaussianRational::zero(),
            pow_one_minus: GaussianRational::zero(),
            pow_one_plus: GaussianRational::zero(),
            rat,
        }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self::from_rational(RationalFunction::from_poly(p))
    }

    pub fn with_exp(mut self, a: GaussianRational) -> Self {
        self.exp_coeff = a;
        self
    }

    pub fn with_pow_eta(mut self, b: GaussianRational) -> Self {
        self.pow_eta = b;
        self
    }

    pub fn with_pow_one_minus(mut self, c: GaussianRational) -> Self {
        self.pow_one_minus = c;
        self
    }

    pub fn with_pow_one_plus(mut self, d: GaussianRational) -> Self {
        self.pow_one_plus = d;
        self
    }

    pub fn has_unit_prefactor(&self) -> bool {
        self.exp_coeff.is_zero()
            && self.pow_eta.is_zero()
            && self.pow_one_minus.is_zero()
            && self.pow_one_plus.is_zero()
    }

    /// `a + b/η − c/(1−η) + d/(1+η)`
    pub fn log_derivative(&self) -> RationalFunction {
        let mut l = RationalFunction::constant(self.exp_coeff.clone());
        let one = GaussianRational::one();
        let term = |k: &GaussianRational, den: Polynomial| {
            RationalFunction::new(Polynomial::constant(k.clone()), den).expect("nonzero den")
        };
        if !self.pow_eta.is_zero() {
            l = l.add(&term(&self.pow_eta, Polynomial::x()));
        }
        if !self.pow_one_minus.is_zero() {
            // −c/(1−η) = c/(η−1)
            let den = Polynomial::new(vec![-&one, one.clone()]);
            l = l.add(&term(&self.pow_one_minus, den));
        }
        if !self.pow_one_plus.is_zero() {
            let den = Polynomial::new(vec![one.clone(), one.clone()]);
            l = l.add(&term(&self.pow_one_plus, den));
        }
        l
    }

    /// `R ↦ R′ + L·R` with `L` the log-derivative of the prefactor.
    pub fn twisted_derivative(&self, r: &RationalFunction) -> RationalFunction {
        r.derivative().add(&self.log_derivative().mul(r))
    }

    pub fn derivative(&self) -> Self {
        Self {
            rat: self.twisted_derivative(&self.rat),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn exponential_is_fixed_point() {
        let f = QuasiRationalFunction::from_poly(Polynomial::one()).with_exp(q("1"));
        assert_eq!(f.derivative(), f);
    }

    #[test]
    fn power_rule() {
        let b = q("5/3+1/2*i");
        let f = QuasiRationalFunction::from_poly(Polynomial::one()).with_pow_eta(b.clone());
        let d = f.derivative();
        assert_eq!(d.pow_eta, b);
        let expect =
            RationalFunction::new(Polynomial::constant(b), Polynomial::x()).unwrap();
        assert_eq!(d.rat, expect);
    }

    #[test]
    fn one_minus_power() {
        // d/dη [(1−η)^c η] = (1−η)^c (1 − cη/(1−η))
        let c = q("7/3");
        let f = QuasiRationalFunction::from_poly(Polynomial::x()).with_pow_one_minus(c.clone());
        let d = f.derivative();
        // oracle: 1 − cη/(1−η) = (1 − η − cη)/(1 − η)
        let one = GaussianRational::one();
        let num = Polynomial::new(vec![one.clone(), -(&one + &c)]);
        let den = Polynomial::new(vec![one.clone(), -one]);
        assert_eq!(d.rat, RationalFunction::new(num, den).unwrap());
        assert_eq!(d.pow_one_minus, c);
    }
}
