//! Deformed polynomials `Ξ_D`, `P_{D,n}` and the exact eigen and basic
//! identities of the deformed second-order operator.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rug::Complex;
use serde::Serialize;

use crate::classical::{classical_poly, energy, seed_function, structure_functions, Family, SeedType, StructureData};
use crate::error::{Error, Result};
use crate::exactalg::{
    poly_wronskian, wronskian, GaussianRational, NumericRationalFunction, Polynomial, QuasiRationalFunction,
    RationalFunction, Ring,
};
use crate::mindex::{
    enumerate_extras, predicted_coefficient, predicted_eigenvalue, Direction, ExtraIndex, MultiIndex, MultiIndexSpec,
};

fn int(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

fn two_pow(k: i64) -> GaussianRational {
    let p = int(2).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        p
    } else {
        p.inv()
    }
}

fn integer_exponent(e: &GaussianRational, what: &str) -> Result<i64> {
    e.to_i64()
        .ok_or_else(|| Error::NonPolynomialResult(format!("{what} exponent {e} is not an integer")))
}

/// Wronskian of the seed functions (and `P_n` when given) times the
/// prefactor that turns it into a polynomial.
fn seed_wronskian(family: &Family, d1: &[usize], d2: &[usize], n: Option<usize>) -> Result<Polynomial> {
    let mut fs = Vec::with_capacity(d1.len() + d2.len() + 1);
    for &v in d1 {
        fs.push(seed_function(family, SeedType::I, v)?);
    }
    for &v in d2 {
        fs.push(seed_function(family, SeedType::II, v)?);
    }
    if let Some(n) = n {
        fs.push(QuasiRationalFunction::from_poly(classical_poly(family, n)));
    }
    let mut w = wronskian(&fs)?;
    let (m, nn) = (int(d1.len() as i64), int(d2.len() as i64));
    let pm = GaussianRational::from_ratio(if n.is_some() { 1 } else { -1 }, 2);
    match family {
        Family::Hermite => return Err(Error::UnsupportedFamily("H".into())),
        Family::Laguerre { g } => {
            w.exp_coeff -= &m;
            w.pow_eta += &(&(&(&m + g) + &pm) * &nn);
        }
        Family::Jacobi { g, h } => {
            w.pow_one_minus += &(&(&(&m + g) + &pm) * &nn);
            w.pow_one_plus += &(&(&(&nn + h) + &pm) * &m);
        }
    }
    if !w.exp_coeff.is_zero() {
        return Err(Error::NonPolynomialResult(format!("exponential factor e^({}η) remains", w.exp_coeff)));
    }
    let b = integer_exponent(&w.pow_eta, "η")?;
    let c = integer_exponent(&w.pow_one_minus, "(1−η)")?;
    let d = integer_exponent(&w.pow_one_plus, "(1+η)")?;
    let eta = Polynomial::x();
    let om = Polynomial::from_ints(&[1, -1]);
    let op = Polynomial::from_ints(&[1, 1]);
    let mut num = w.rat.num().clone();
    let mut den = w.rat.den().clone();
    for (base, e) in [(&eta, b), (&om, c), (&op, d)] {
        let f = base.pow(e.unsigned_abs() as u32);
        if e >= 0 {
            num = &num * &f;
        } else {
            den = &den * &f;
        }
    }
    // Jacobi bases are ((1∓η)/2)
    let num = num.scale(&two_pow(-(c + d)));
    num.exact_divide(&den)
        .map_err(|_| Error::NonPolynomialResult(format!("denominator {den} remains")))
}

fn raw_poly(spec: &MultiIndexSpec, n: Option<usize>) -> Result<Polynomial> {
    match &spec.index {
        MultiIndex::MultiIndexed { d1, d2 } => seed_wronskian(&spec.family, d1, d2, n),
        MultiIndex::KreinAdler { d } => {
            let mut ps: Vec<Polynomial> = d.iter().map(|&v| classical_poly(&spec.family, v)).collect();
            if let Some(n) = n {
                ps.push(classical_poly(&spec.family, n));
            }
            poly_wronskian(&ps)
        }
    }
}

fn check_degree(p: Polynomial, expected: i64, what: &str) -> Result<Polynomial> {
    match p.degree() {
        Some(d) if d as i64 == expected => Ok(p),
        got => Err(Error::DegenerateParameters(format!(
            "deg {what} = {} but {expected} expected",
            got.map_or("-inf".to_string(), |d| d.to_string())
        ))),
    }
}

fn nonzero(p: Polynomial, what: &str) -> Result<Polynomial> {
    if p.is_zero() {
        Err(Error::DegenerateParameters(format!("{what} vanishes identically")))
    } else {
        Ok(p)
    }
}

/// `Ξ_D`. Krein-Adler: `W[P_{d_1}, …, P_{d_M}]`.
pub fn denominator_poly(spec: &MultiIndexSpec) -> Result<Polynomial> {
    check_degree(raw_poly(spec, None)?, spec.index.xi_degree(), "Xi_D")
}

/// `P_{D,n}`.
pub fn deformed_poly(spec: &MultiIndexSpec, n: usize) -> Result<Polynomial> {
    check_degree(raw_poly(spec, Some(n))?, spec.ell() + n as i64, "P_D,n")
}

/// Coefficients of `Ξ·H̃ p = −4(a₂ p″ + a₁ p′ + a₀ p)`.
#[derive(Clone, Debug)]
pub struct OperatorCoefficients<T> {
    pub a2: Polynomial<T>,
    pub a1: Polynomial<T>,
    pub a0: Polynomial<T>,
}

impl<T: Ring> OperatorCoefficients<T> {
    /// `Ξ · H̃ p` as a polynomial.
    pub fn numerator(&self, p: &Polynomial<T>) -> Polynomial<T> {
        let d1 = p.derivative();
        let d2 = d1.derivative();
        let s = &(&(&self.a2 * &d2) + &(&self.a1 * &d1)) + &(&self.a0 * p);
        Polynomial::new(s.coeffs().iter().map(|c| c.scale_int(-4)).collect())
    }
}

fn operator_coefficients(st: &StructureData, xi: &Polynomial) -> OperatorCoefficients<GaussianRational> {
    let dxi = xi.derivative();
    let ddxi = dxi.derivative();
    let two = int(2);
    OperatorCoefficients {
        a2: &st.c2 * xi,
        a1: &(&st.c1 * xi) - &(&st.c2 * &dxi).scale(&two),
        a0: &(&(&st.c2 * &ddxi) - &(&st.c1_lowered * &dxi)) + &xi.scale(&st.ka_constant),
    }
}

/// The deformed family attached to a multi-index, with cached `P_{D,n}`.
#[derive(Debug)]
pub struct DeformedFamily {
    pub spec: MultiIndexSpec,
    /// Whether degrees are enforced (off for derived indices `D′`, whose
    /// degree may drop at exceptional parameter values).
    checked: bool,
    pub xi: Polynomial,
    pub structure: StructureData,
    ops: OperatorCoefficients<GaussianRational>,
    cache: Mutex<BTreeMap<usize, Polynomial>>,
    derived: Mutex<HashMap<MultiIndex, Arc<DeformedFamily>>>,
}

impl DeformedFamily {
    pub fn new(spec: MultiIndexSpec) -> Result<Self> {
        Self::build(spec, true)
    }

    fn build(spec: MultiIndexSpec, checked: bool) -> Result<Self> {
        let structure = structure_functions(&spec.family, spec.index.m(), spec.index.n(), spec.is_ka())?;
        let xi = if checked {
            denominator_poly(&spec)?
        } else {
            nonzero(raw_poly(&spec, None)?, "Xi_D")?
        };
        let ops = operator_coefficients(&structure, &xi);
        Ok(Self {
            spec,
            checked,
            xi,
            structure,
            ops,
            cache: Mutex::new(BTreeMap::new()),
            derived: Mutex::new(HashMap::new()),
        })
    }

    pub fn family(&self) -> &Family {
        &self.spec.family
    }

    pub fn poly(&self, n: usize) -> Result<Polynomial> {
        if let Some(p) = self.cache.lock().expect("cache lock").get(&n) {
            return Ok(p.clone());
        }
        let p = if self.checked {
            deformed_poly(&self.spec, n)?
        } else {
            nonzero(raw_poly(&self.spec, Some(n))?, "P_D,n")?
        };
        self.cache.lock().expect("cache lock").insert(n, p.clone());
        Ok(p)
    }

    /// The family of a derived index `D′` (same parameters), cached.
    pub fn derived(&self, index: &MultiIndex) -> Result<Arc<DeformedFamily>> {
        if let Some(f) = self.derived.lock().expect("cache lock").get(index) {
            return Ok(f.clone());
        }
        let spec = MultiIndexSpec::derived(self.spec.family.clone(), index.clone());
        let f = Arc::new(DeformedFamily::build(spec, false)?);
        self.derived.lock().expect("cache lock").insert(index.clone(), f.clone());
        Ok(f)
    }

    pub fn operator(&self) -> &OperatorCoefficients<GaussianRational> {
        &self.ops
    }

    pub fn operator_numeric(&self, prec: u32) -> OperatorCoefficients<Complex> {
        OperatorCoefficients {
            a2: self.ops.a2.to_complex(prec),
            a1: self.ops.a1.to_complex(prec),
            a0: self.ops.a0.to_complex(prec),
        }
    }

    /// `H̃_D p`, reduced.
    pub fn apply_operator(&self, p: &Polynomial) -> RationalFunction {
        RationalFunction::new(self.ops.numerator(p), self.xi.clone()).expect("Xi is nonzero")
    }

    /// `H̃_D p` for big-float coefficients, over the denominator `Ξ_D`.
    pub fn apply_operator_numeric(&self, p: &Polynomial<Complex>, prec: u32) -> NumericRationalFunction {
        NumericRationalFunction {
            num: self.operator_numeric(prec).numerator(p),
            den: self.xi.to_complex(prec),
        }
    }

    /// `gcd(P_{D,n}, Ξ_D) = 1`
    pub fn coprime(&self, n: usize) -> Result<bool> {
        Ok(Polynomial::gcd(&self.poly(n)?, &self.xi).degree() == Some(0))
    }

    /// `Ξ_D (H̃_D − 𝓔(n)) P_{D,n}` must vanish identically.
    pub fn check_eigen_identity(&self, n: usize) -> Result<IdentityReport> {
        let p = self.poly(n)?;
        let e = energy(self.family(), n);
        let residual = &self.ops.numerator(&p) - &(&self.xi * &p).scale(&e);
        Ok(IdentityReport::new(format!("eigen n={n}"), residual, None, None))
    }

    /// Forward: `Ξ_D (H̃_D − Ẽ) P_{D′,N} = c · P_{D,N} Ξ_{D′}`; exchanged:
    /// the same with `D` and `D′` swapped. The coefficient `c` is solved from
    /// the leading coefficients, then the whole identity is checked and `c`
    /// compared with the prediction.
    pub fn check_basic_identity(&self, extra: &ExtraIndex, n: usize, direction: Direction) -> Result<IdentityReport> {
        let eig = predicted_eigenvalue(&self.spec, extra, n)?;
        let predicted = predicted_coefficient(&self.spec, extra, n, direction)?;
        let other = self.derived(&extra.index)?;
        let (a, b) = match direction {
            Direction::Forward => (self, other.as_ref()),
            Direction::Exchanged => (other.as_ref(), self),
        };
        let label = format!("basic {} {:?}", extra.label(), direction).to_lowercase();
        basic_identity(a, b, n, &eig, label, Some(predicted))
    }

    /// Re-run of the basic-equation checker with `D′ = D`: the solved
    /// coefficient must be `𝓔(N) − Ẽ`.
    pub fn check_formal_reduction(&self, n: usize, eig: &GaussianRational) -> Result<IdentityReport> {
        let predicted = &energy(self.family(), n) - eig;
        basic_identity(self, self, n, eig, format!("reduction n={n}"), Some(predicted))
    }
}

fn basic_identity(
    a: &DeformedFamily,
    b: &DeformedFamily,
    n: usize,
    eig: &GaussianRational,
    label: String,
    predicted: Option<GaussianRational>,
) -> Result<IdentityReport> {
    let pb = b.poly(n)?;
    let lhs = &a.ops.numerator(&pb) - &(&a.xi * &pb).scale(eig);
    let rhs = &a.poly(n)? * &b.xi;
    let solved = match (lhs.degree(), rhs.degree()) {
        (None, _) => GaussianRational::zero(),
        (Some(dl), Some(dr)) if dl == dr => lhs.leading().expect("nonzero") / rhs.leading().expect("nonzero"),
        _ => {
            return Ok(IdentityReport::new(label, lhs, None, predicted));
        }
    };
    let residual = &lhs - &rhs.scale(&solved);
    Ok(IdentityReport::new(label, residual, Some(solved), predicted))
}

/// Outcome of one exact identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IdentityReport {
    pub label: String,
    pub passed: bool,
    pub residual_zero: bool,
    /// Offending residual polynomial, present only on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solved_coefficient: Option<GaussianRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_coefficient: Option<GaussianRational>,
}

impl IdentityReport {
    fn new(
        label: String,
        residual: Polynomial,
        solved: Option<GaussianRational>,
        predicted: Option<GaussianRational>,
    ) -> Self {
        let residual_zero = residual.is_zero();
        let coeff_ok = match (&solved, &predicted) {
            (Some(s), Some(p)) => s == p,
            (None, Some(_)) => false,
            _ => true,
        };
        Self {
            label,
            passed: residual_zero && coeff_ok,
            residual_zero,
            residual: (!residual_zero).then(|| residual.to_string()),
            solved_coefficient: solved,
            predicted_coefficient: predicted,
        }
    }
}

/// Every exact identity for one family: eigen identity for `n ≤ N` (K-A:
/// `n ∉ D`), then the basic equations for every extra in both directions.
pub fn identity_suite(fam: &DeformedFamily, n: usize, eigen_range: std::ops::RangeInclusive<usize>) -> Result<Vec<IdentityReport>> {
    let mut out = vec![];
    let skip: Vec<usize> = match &fam.spec.index {
        MultiIndex::KreinAdler { d } => d.clone(),
        _ => vec![],
    };
    for k in eigen_range.filter(|k| !skip.contains(k)) {
        out.push(fam.check_eigen_identity(k)?);
    }
    if !fam.spec.index.is_empty() {
        for e in enumerate_extras(&fam.spec, n)? {
            for dir in [Direction::Forward, Direction::Exchanged] {
                out.push(fam.check_basic_identity(&e, n, dir)?);
            }
        }
    }
    Ok(out)
}

/// Default sample values for `g`; the fourth is non-real.
pub const G_SAMPLES: [&str; 8] = ["7/2", "13/10", "9/2", "7/2+1*i", "17/6", "23/5", "31/7", "11/4"];
/// Default sample values for `h`; the fourth is non-real.
pub const H_SAMPLES: [&str; 8] = ["4", "19/10", "11/2", "3+1/2*i", "29/6", "18/5", "27/7", "15/4"];

/// Deterministic parameter samples, `count ≥ 2`, always including one
/// non-real value.
pub fn parameter_samples(count: usize) -> Vec<(GaussianRational, GaussianRational)> {
    let parse = |s: &str| s.parse::<GaussianRational>().expect("sample literal");
    let mut idx: Vec<usize> = (0..count.max(2)).map(|k| k % G_SAMPLES.len()).collect();
    if count < 4 {
        *idx.last_mut().expect("nonempty") = 3;
    }
    idx.into_iter().map(|k| (parse(G_SAMPLES[k]), parse(H_SAMPLES[k]))).collect()
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleReport {
    pub family: Family,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub checks: Vec<IdentityReport>,
}

/// Re-runs [`identity_suite`] at sampled parameter values. Degenerate samples
/// are skipped and reported.
pub fn identity_in_parameters(
    template: &Family,
    index: &MultiIndex,
    n: usize,
    eigen_range: std::ops::RangeInclusive<usize>,
    samples: usize,
) -> Result<Vec<SampleReport>> {
    if samples < 2 {
        return Err(Error::InvalidSpec("at least 2 parameter samples".into()));
    }
    let mut out = vec![];
    for (g, h) in parameter_samples(samples) {
        let family = template.with_parameters(g, Some(h));
        let spec = MultiIndexSpec::new(family.clone(), index.clone())?;
        let res = DeformedFamily::new(spec).and_then(|f| identity_suite(&f, n, eigen_range.clone()));
        out.push(match res {
            Ok(checks) => SampleReport {
                passed: checks.iter().all(|c| c.passed),
                family,
                skipped: None,
                checks,
            },
            Err(e @ Error::DegenerateParameters(_)) => SampleReport {
                family,
                passed: true,
                skipped: Some(e.to_string()),
                checks: vec![],
            },
            Err(e) => return Err(e),
        });
    }
    Ok(out)
}
