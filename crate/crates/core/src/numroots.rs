//! Arbitrary-precision zeros of exact polynomials and their classification.

use std::cmp::Ordering;

use rug::float::Constant;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::classical::Family;
use crate::error::{Error, Result};
use crate::exactalg::Polynomial;

const MAX_ITERATIONS: usize = 500;

pub fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

fn prec_of(z: &Complex) -> u32 {
    z.prec().0
}

/// `2^e` at precision `prec`.
pub fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, e))
}

/// `p(z)` and `p′(z)` by Horner.
fn eval_with_derivative(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let prec = prec_of(z);
    let mut p = Complex::new(prec);
    let mut dp = Complex::new(prec);
    for c in coeffs.iter().rev() {
        dp *= z;
        dp += &p;
        p *= z;
        p += c;
    }
    (p, dp)
}

/// `Σ |a_k| |z|^k`, the natural scale of `p` near `z`.
fn eval_scale(coeffs: &[Complex], z: &Complex) -> Float {
    let prec = prec_of(z);
    let r = cabs(z);
    let mut acc = Float::new(prec);
    for c in coeffs.iter().rev() {
        acc *= &r;
        acc += cabs(c);
    }
    acc
}

fn compare(a: &Complex, b: &Complex) -> Ordering {
    a.real()
        .partial_cmp(b.real())
        .unwrap_or(Ordering::Equal)
        .then(a.imag().partial_cmp(b.imag()).unwrap_or(Ordering::Equal))
}

/// Sort by real part, then imaginary part.
pub fn canonical_sort(zs: &mut [Complex]) {
    zs.sort_by(compare);
}

fn aberth(coeffs: &[Complex], prec: u32) -> Option<Vec<Complex>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].clone();
    let monic: Vec<Complex> = coeffs.iter().map(|c| Complex::with_val(prec, c / &lead)).collect();
    // Cauchy bound 1 + max |a_k / a_n|
    let mut bound = Float::with_val(prec, 0);
    for c in &monic[..n] {
        let a = cabs(c);
        if a > bound {
            bound = a;
        }
    }
    bound += 1;
    let center = -Complex::with_val(prec, &monic[n - 1] / n as u32);
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let theta = Float::with_val(prec, &two_pi * k as u32) / n as u32 + Float::with_val(prec, 0.4);
            let e = Complex::with_val(prec, (theta.clone().cos(), theta.sin()));
            Complex::with_val(prec, &center + e * &bound)
        })
        .collect();
    let tol = pow2(prec, -(prec as i32) + 8);
    for _ in 0..MAX_ITERATIONS {
        let mut done = true;
        for k in 0..n {
            let (p, dp) = eval_with_derivative(&monic, &z[k]);
            if p.real().is_zero() && p.imag().is_zero() {
                continue;
            }
            let ratio = Complex::with_val(prec, &p / &dp);
            let mut s = Complex::new(prec);
            for j in (0..n).filter(|&j| j != k) {
                let d = Complex::with_val(prec, &z[k] - &z[j]);
                s += d.recip();
            }
            let denom = Complex::with_val(prec, 1 - Complex::with_val(prec, &ratio * &s));
            let w = Complex::with_val(prec, &ratio / &denom);
            if !w.real().is_finite() || !w.imag().is_finite() {
                return None;
            }
            let mut scale = cabs(&z[k]);
            if scale < 1 {
                scale = Float::with_val(prec, 1);
            }
            if cabs(&w) > Float::with_val(prec, &tol * &scale) {
                done = false;
            }
            z[k] -= w;
        }
        if done {
            return Some(z);
        }
    }
    None
}

fn newton_polish(coeffs: &[Complex], z: &mut Complex) {
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(coeffs, z);
        if dp.real().is_zero() && dp.imag().is_zero() {
            return;
        }
        let step = Complex::with_val(prec_of(z), &p / &dp);
        *z -= step;
    }
}

/// All `deg p` complex roots, rounded to `prec` bits and sorted canonically.
///
/// Aberth–Ehrlich iteration at twice the requested precision, Newton
/// polishing, and a residual test `|p(r)| / Σ|a_k||r|^k < 2^(−prec/2)`; the
/// working precision is doubled (up to four times) when a stage stalls.
pub fn find_roots(p: &Polynomial, prec: u32) -> Result<Vec<Complex>> {
    let Some(deg) = p.degree() else {
        return Err(Error::DegenerateInput("zero polynomial".into()));
    };
    if deg == 0 {
        return Err(Error::DegenerateInput("constant polynomial has no roots".into()));
    }
    let bound = pow2(prec, -(prec as i32) / 2);
    for factor in [2u32, 4, 8] {
        let wp = prec * factor;
        let coeffs = p.to_complex(wp).into_coeffs();
        let Some(mut z) = aberth(&coeffs, wp) else {
            continue;
        };
        let pp = wp * 2;
        let hi = p.to_complex(pp).into_coeffs();
        let mut ok = true;
        for r in z.iter_mut() {
            let mut rr = Complex::with_val(pp, &*r);
            newton_polish(&hi, &mut rr);
            let (v, _) = eval_with_derivative(&hi, &rr);
            let limit = Float::with_val(pp, eval_scale(&hi, &rr) * &bound);
            if cabs(&v) > limit {
                ok = false;
            }
            *r = Complex::with_val(prec, &rr);
        }
        if ok {
            canonical_sort(&mut z);
            return Ok(z);
        }
    }
    Err(Error::PrecisionExhausted(format!(
        "degree {deg} polynomial at {prec} bits"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ZeroClass {
    Ordinary,
    ExtraReal,
    ExtraComplexPair,
    /// Complex parameters: reality is not meaningful.
    Unclassified,
}

/// Zeros of `P_{D,N}` with conjugation pairing and ordinary/extra tags.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    pub zeros: Vec<Complex>,
    /// `n ↦ n̄`; absent for complex parameters.
    pub pairing: Option<Vec<usize>>,
    pub classes: Vec<ZeroClass>,
    pub precision: u32,
    pub residual_bound: Float,
    pub warnings: Vec<String>,
}

impl ZeroSet {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn ordinary_count(&self) -> usize {
        self.classes.iter().filter(|c| **c == ZeroClass::Ordinary).count()
    }

    pub fn extra_count(&self) -> usize {
        self.len() - self.ordinary_count()
    }

    /// Smallest pairwise distance between zeros.
    pub fn min_separation(&self) -> Option<Float> {
        min_separation(&self.zeros)
    }
}

pub fn min_separation(zs: &[Complex]) -> Option<Float> {
    let mut best: Option<Float> = None;
    for a in 0..zs.len() {
        for b in a + 1..zs.len() {
            let d = cabs(&Complex::with_val(prec_of(&zs[a]), &zs[a] - &zs[b]));
            if best.as_ref().is_none_or(|m| d < *m) {
                best = Some(d);
            }
        }
    }
    best
}

fn root_scale(zs: &[Complex], prec: u32) -> Float {
    let mut s = Float::with_val(prec, 1);
    for z in zs {
        let a = cabs(z);
        if a > s {
            s = a;
        }
    }
    s
}

/// Pairing, classification and separation checks for roots of `P_{D,N}`.
pub fn analyze_zeros(roots: &[Complex], family: &Family, parameters_real: bool, prec: u32) -> Result<ZeroSet> {
    let scale = root_scale(roots, prec);
    let pair_tol = Float::with_val(prec, pow2(prec, -(prec as i32) / 4) * &scale);
    let sep_tol = Float::with_val(prec, pow2(prec, -(prec as i32) / 2) * &scale);
    let edge_tol = pow2(prec, -(prec as i32) / 2);
    let n = roots.len();
    let mut warnings = vec![];

    if let Some(m) = min_separation(roots) {
        if m <= sep_tol {
            return Err(Error::DegenerateParameters(format!(
                "zeros not separated: min distance {}",
                m.to_string_radix(10, Some(6))
            )));
        }
    }

    let is_real = |z: &Complex| Float::with_val(prec, z.imag().abs_ref()) <= pair_tol;
    let pairing = if parameters_real {
        let mut map: Vec<Option<usize>> = vec![None; n];
        for k in 0..n {
            if map[k].is_some() {
                continue;
            }
            if is_real(&roots[k]) {
                map[k] = Some(k);
                continue;
            }
            let conj = Complex::with_val(prec, roots[k].conj_ref());
            let best = (0..n)
                .filter(|&j| j != k && map[j].is_none())
                .map(|j| (j, cabs(&Complex::with_val(prec, &roots[j] - &conj))))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));
            match best {
                Some((j, d)) if d <= pair_tol => {
                    map[k] = Some(j);
                    map[j] = Some(k);
                }
                _ => {
                    return Err(Error::PairingFailure(format!(
                        "zero {k} has no conjugate partner"
                    )))
                }
            }
        }
        let map: Vec<usize> = map.into_iter().map(|m| m.expect("assigned")).collect();
        if (0..n).any(|k| map[map[k]] != k) {
            return Err(Error::PairingFailure("pairing is not an involution".into()));
        }
        Some(map)
    } else {
        None
    };

    let classes = roots
        .iter()
        .map(|z| {
            if !parameters_real {
                return ZeroClass::Unclassified;
            }
            if !is_real(z) {
                return ZeroClass::ExtraComplexPair;
            }
            let x = z.real();
            let near = |b: i32| Float::with_val(prec, x - b).abs() <= edge_tol;
            let inside = match family {
                Family::Hermite => true,
                Family::Laguerre { .. } => {
                    if near(0) {
                        warnings.push(format!("zero {} touches the boundary 0", x.to_string_radix(10, Some(12))));
                    }
                    *x > 0
                }
                Family::Jacobi { .. } => {
                    if near(1) || near(-1) {
                        warnings.push(format!("zero {} touches the boundary ±1", x.to_string_radix(10, Some(12))));
                    }
                    *x > -1 && *x < 1
                }
            };
            if inside {
                ZeroClass::Ordinary
            } else {
                ZeroClass::ExtraReal
            }
        })
        .collect();

    Ok(ZeroSet {
        zeros: roots.to_vec(),
        pairing,
        classes,
        precision: prec,
        residual_bound: pow2(prec, -(prec as i32) / 2),
        warnings,
    })
}

/// Relative errors of the root sum and product against `−c_{n−1}/c_n` and
/// `(−1)^n c_0/c_n`.
pub fn vieta_errors(p: &Polynomial, roots: &[Complex], prec: u32) -> (Float, Float) {
    let c = p.to_complex(prec).into_coeffs();
    let n = c.len() - 1;
    let lead = &c[n];
    let mut sum = Complex::new(prec);
    let mut prod = Complex::with_val(prec, 1);
    for r in roots {
        sum += r;
        prod *= r;
    }
    let want_sum = -Complex::with_val(prec, &c[n - 1] / lead);
    let mut want_prod = Complex::with_val(prec, &c[0] / lead);
    if n % 2 == 1 {
        want_prod = -want_prod;
    }
    let rel = |got: &Complex, want: &Complex| {
        let d = cabs(&Complex::with_val(prec, got - want));
        let s = cabs(want).max(&Float::with_val(prec, 1));
        Float::with_val(prec, d / s)
    };
    (rel(&sum, &want_sum), rel(&prod, &want_prod))
}

/// Decimal digits that `prec` bits carry.
pub fn decimal_digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).floor() as usize
}

pub fn float_to_decimal(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

/// `{re, im}` decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalComplex {
    pub re: String,
    pub im: String,
}

impl DecimalComplex {
    pub fn new(z: &Complex, digits: usize) -> Self {
        Self {
            re: float_to_decimal(z.real(), digits),
            im: float_to_decimal(z.imag(), digits),
        }
    }
}

/// Serializable view of a [`ZeroSet`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZeroSetRecord {
    pub precision_bits: u32,
    pub digits: usize,
    pub zeros: Vec<DecimalComplex>,
    pub pairing: Option<Vec<usize>>,
    pub classes: Vec<ZeroClass>,
    pub ordinary_count: usize,
    pub extra_count: usize,
    pub warnings: Vec<String>,
}

impl From<&ZeroSet> for ZeroSetRecord {
    fn from(z: &ZeroSet) -> Self {
        let digits = decimal_digits(z.precision).min(40);
        Self {
            precision_bits: z.precision,
            digits,
            zeros: z.zeros.iter().map(|c| DecimalComplex::new(c, digits)).collect(),
            pairing: z.pairing.clone(),
            classes: z.classes.clone(),
            ordinary_count: z.ordinary_count(),
            extra_count: z.extra_count(),
            warnings: z.warnings.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::GaussianRational;

    fn close(a: &Complex, re: &Float, im: &Float, tol: &Float) -> bool {
        let d = Complex::with_val(a.prec().0, a - Complex::with_val(a.prec().0, (re, im)));
        cabs(&d) < *tol
    }

    #[test]
    fn simple_roots() {
        let prec = 256;
        let tol = pow2(prec, -240);
        let r = find_roots(&Polynomial::from_ints(&[1, 0, 1]), prec).unwrap();
        let zero = Float::new(prec);
        let one = Float::with_val(prec, 1);
        assert!(close(&r[0], &zero, &Float::with_val(prec, -&one), &tol));
        assert!(close(&r[1], &zero, &one, &tol));

        let r = find_roots(&Polynomial::from_ints(&[-2, 0, 4]), prec).unwrap();
        let s = Float::with_val(prec, 2).sqrt().recip();
        assert!(close(&r[0], &Float::with_val(prec, -&s), &zero, &tol));
        assert!(close(&r[1], &s, &zero, &tol));
        assert!(find_roots(&Polynomial::zero(), prec).is_err());
    }

    #[test]
    fn clustered_roots() {
        let prec = 256;
        let third = GaussianRational::from_ratio(1, 3);
        let eps = GaussianRational::from_rational(rug::Rational::from((1, 1u64 << 40)));
        let p = &Polynomial::linear_factor(&third) * &Polynomial::linear_factor(&(&third - &eps));
        let r = find_roots(&p, prec).unwrap();
        let gap = cabs(&Complex::with_val(prec, &r[1] - &r[0]));
        let want = pow2(prec, -40);
        let err = Float::with_val(prec, &gap - &want).abs();
        assert!(err < pow2(prec, -200), "{gap}");
    }

    #[test]
    fn hermite_zero_set() {
        let prec = 256;
        let p = Polynomial::from_ints(&[-2, 0, 4]);
        let r = find_roots(&p, prec).unwrap();
        let z = analyze_zeros(&r, &Family::Hermite, true, prec).unwrap();
        assert_eq!(z.ordinary_count(), 2);
        assert_eq!(z.pairing, Some(vec![0, 1]));
        let (s, q) = vieta_errors(&p, &r, prec);
        assert!(s < pow2(prec, -128) && q < pow2(prec, -128));
    }

    #[test]
    fn conjugate_pairing() {
        // (η − 2)(η² + 1): the real entry is fixed by the involution
        let p = &Polynomial::from_ints(&[-2, 1]) * &Polynomial::from_ints(&[1, 0, 1]);
        let r = find_roots(&p, 128).unwrap();
        let z = analyze_zeros(&r, &Family::laguerre(GaussianRational::from_int(3)), true, 128).unwrap();
        let pairing = z.pairing.unwrap();
        let real = z.classes.iter().position(|c| *c == ZeroClass::Ordinary).unwrap();
        assert_eq!(pairing[real], real);
        assert_eq!(z.classes.iter().filter(|c| **c == ZeroClass::ExtraComplexPair).count(), 2);
    }
}
