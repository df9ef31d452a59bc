//! Matrices at the zeros of `P_{D,N}`, Christoffel numbers, discrete
//! orthogonality, predicted eigenpairs and quadrature checks.

mod eig;
mod matrix;

pub use eig::eigenvalues;
pub use matrix::{
    build_matrices, eta_dot, m_tilde_closed_form, m_tilde_direct, matrix_json, similarity, BuildPath, CMatrix,
    SpectralMatrix,
};

use rug::{Complex, Float};
use serde::Serialize;

use crate::classical::Family;
use crate::deform::DeformedFamily;
use crate::error::{Error, Result};
use crate::exactalg::{scalar_determinant, GaussianRational, Polynomial};
use crate::mindex::{participants, Participant};
use crate::numroots::{cabs, canonical_sort, find_roots, pow2, ZeroSet};

/// Zeros of `Ξ_D` (empty when `Ξ_D` is constant).
pub fn xi_zeros(fam: &DeformedFamily, prec: u32) -> Result<Vec<Complex>> {
    match fam.xi.degree() {
        Some(0) | None => Ok(vec![]),
        Some(_) => find_roots(&fam.xi, prec),
    }
}

/// Unnormalized Christoffel numbers `λ_n = 1/(η̇(x_n)² P′_{D,N}(η_n)²)`.
#[derive(Clone, Debug)]
pub struct ChristoffelSet {
    pub lambdas: Vec<Complex>,
}

impl ChristoffelSet {
    /// `max |λ_n* − λ_{n̄}| / max |λ|`.
    pub fn conjugation_defect(&self, pairing: &[usize]) -> Float {
        let prec = self.lambdas.first().map_or(64, |l| l.prec().0);
        let mut worst = Float::new(prec);
        let mut big = Float::new(prec);
        for (a, l) in self.lambdas.iter().enumerate() {
            let d = cabs(&Complex::with_val(prec, Complex::with_val(prec, l.conj_ref()) - &self.lambdas[pairing[a]]));
            worst = worst.max(&d);
            big = big.max(&cabs(l));
        }
        Float::with_val(prec, worst / big)
    }

    /// `max |λ_n − λ_0| / |λ_0|`.
    pub fn relative_spread(&self) -> Float {
        let prec = self.lambdas.first().map_or(64, |l| l.prec().0);
        let Some(first) = self.lambdas.first() else {
            return Float::new(prec);
        };
        let mut worst = Float::new(prec);
        for l in &self.lambdas {
            worst = worst.max(&cabs(&Complex::with_val(prec, l - first)));
        }
        Float::with_val(prec, worst / cabs(first))
    }
}

pub fn christoffel_numbers(fam: &DeformedFamily, n: usize, zero_set: &ZeroSet) -> Result<ChristoffelSet> {
    let prec = zero_set.precision;
    let dp = fam.poly(n)?.derivative().to_complex(prec);
    let coef_scale = dp.coeffs().iter().map(cabs).fold(Float::new(prec), |a, b| a.max(&b));
    let tol = Float::with_val(prec, pow2(prec, -(prec as i32) / 2) * coef_scale);
    let mut lambdas = Vec::with_capacity(zero_set.len());
    for z in &zero_set.zeros {
        let d = dp.eval(z);
        if cabs(&d) <= tol {
            return Err(Error::SimpleZeroViolation(format!("P' vanishes at {}", z.to_string_radix(10, Some(12)))));
        }
        let eds = fam.structure.eta_dot_sq.eval_complex(z);
        let den = Complex::with_val(prec, eds * Complex::with_val(prec, d.square_ref()));
        lambdas.push(den.recip());
    }
    Ok(ChristoffelSet { lambdas })
}

/// Participants together with their polynomials: `P_{D,m}` for ordinary
/// entries and `P_{D′,N}` for extras.
pub fn participant_polys(fam: &DeformedFamily, n: usize) -> Result<Vec<(Participant, Polynomial)>> {
    participants(&fam.spec, n)?
        .into_iter()
        .map(|p| {
            let poly = match (&p.ordinary, &p.extra) {
                (Some(m), _) => fam.poly(*m)?,
                (None, Some(e)) => fam.derived(&e.index)?.poly(n)?,
                (None, None) => unreachable!("participant is ordinary or extra"),
            };
            Ok((p, poly))
        })
        .collect()
}

/// Normalized bilinear sums `Ŝ_{ab} = |Σ_l w_l x_{al} x_{bl}| / Σ_l |w_l x_{al} x_{bl}|`.
fn normalized_bilinear(weights: Option<&[Complex]>, vectors: &[Vec<Complex>], prec: u32) -> Vec<Vec<Float>> {
    let k = vectors.len();
    let mut out = vec![vec![Float::new(prec); k]; k];
    for a in 0..k {
        for b in a..k {
            let mut s = Complex::new(prec);
            let mut t = Float::new(prec);
            for l in 0..vectors[a].len() {
                let mut term = Complex::with_val(prec, &vectors[a][l] * &vectors[b][l]);
                if let Some(w) = weights {
                    term *= &w[l];
                }
                t += cabs(&term);
                s += term;
            }
            let v = if t.is_zero() { Float::new(prec) } else { Float::with_val(prec, cabs(&s) / &t) };
            out[a][b] = v.clone();
            out[b][a] = v;
        }
    }
    out
}

fn max_off_diagonal(m: &[Vec<Float>], skip: &[(usize, usize)], prec: u32) -> Float {
    let mut worst = Float::new(prec);
    for (a, row) in m.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            if a != b && !skip.contains(&(a.min(b), a.max(b))) {
                worst = worst.max(v);
            }
        }
    }
    worst
}

#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub labels: Vec<String>,
    pub normalized: Vec<Vec<Float>>,
    pub max_off_diagonal: Float,
}

/// `Ŝ_{ab}` for `S_{ab} = Σ_l λ_l Q_a(η_l) Q_b(η_l)`.
pub fn orthogonality_sums(
    zero_set: &ZeroSet,
    christoffel: &ChristoffelSet,
    polys: &[(Participant, Polynomial)],
) -> OrthogonalityReport {
    let prec = zero_set.precision;
    let values: Vec<Vec<Complex>> = polys
        .iter()
        .map(|(_, q)| {
            let qc = q.to_complex(prec);
            zero_set.zeros.iter().map(|z| qc.eval(z)).collect()
        })
        .collect();
    let normalized = normalized_bilinear(Some(&christoffel.lambdas), &values, prec);
    let max_off_diagonal = max_off_diagonal(&normalized, &[], prec);
    OrthogonalityReport {
        labels: polys.iter().map(|(p, _)| p.label.clone()).collect(),
        normalized,
        max_off_diagonal,
    }
}

/// `v_n = Q(η_n) / (η̇(x_n) P′_{D,N}(η_n))`.
pub fn eigenvector(sm: &SpectralMatrix, p_prime: &[Complex], q: &Polynomial) -> Vec<Complex> {
    let prec = sm.precision;
    let qc = q.to_complex(prec);
    sm.zeros
        .iter()
        .zip(&sm.eta_dot)
        .zip(p_prime)
        .map(|((z, ed), dp)| Complex::with_val(prec, qc.eval(z) / Complex::with_val(prec, ed * dp)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct EigenpairResidual {
    pub label: String,
    pub predicted: GaussianRational,
    /// `‖Mv − αv‖∞ / ‖v‖∞`.
    pub residual: Float,
}

#[derive(Clone, Debug)]
pub struct EigenpairReport {
    pub residuals: Vec<EigenpairResidual>,
    pub max_residual: Float,
    /// Normalized bilinear products `|(v_a, v_b)| / Σ|v_{a,m} v_{b,m}|`.
    pub vector_products: Vec<Vec<Float>>,
    /// Largest product over pairs with distinct predicted eigenvalues.
    pub max_cross_product: Float,
    /// Pairs with exactly equal predictions; not asserted.
    pub degenerate: Vec<(usize, usize)>,
    /// Pairs with distinct predictions closer than `2^(−p/4)`.
    pub near_degenerate: Vec<(usize, usize)>,
}

pub fn predicted_eigenpairs_check(
    sm: &SpectralMatrix,
    fam: &DeformedFamily,
    n: usize,
    polys: &[(Participant, Polynomial)],
) -> Result<EigenpairReport> {
    let prec = sm.precision;
    let dp = fam.poly(n)?.derivative().to_complex(prec);
    let p_prime: Vec<Complex> = sm.zeros.iter().map(|z| dp.eval(z)).collect();
    let mut residuals = vec![];
    let mut vectors = vec![];
    for (part, q) in polys {
        let v = eigenvector(sm, &p_prime, q);
        let alpha = part.m_eigenvalue.to_complex(prec);
        let mut worst = Float::new(prec);
        let mut norm = Float::new(prec);
        for (row, vn) in sm.m.iter().zip(&v) {
            let mut s = Complex::new(prec);
            for (mij, vj) in row.iter().zip(&v) {
                s += Complex::with_val(prec, mij * vj);
            }
            s -= Complex::with_val(prec, &alpha * vn);
            worst = worst.max(&cabs(&s));
            norm = norm.max(&cabs(vn));
        }
        residuals.push(EigenpairResidual {
            label: part.label.clone(),
            predicted: part.m_eigenvalue.clone(),
            residual: Float::with_val(prec, worst / norm),
        });
        vectors.push(v);
    }
    let vector_products = normalized_bilinear(None, &vectors, prec);
    let near_tol = pow2(prec, -(prec as i32) / 4);
    let mut degenerate = vec![];
    let mut near_degenerate = vec![];
    for a in 0..polys.len() {
        for b in a + 1..polys.len() {
            let (ea, eb) = (&polys[a].0.m_eigenvalue, &polys[b].0.m_eigenvalue);
            if ea == eb {
                degenerate.push((a, b));
            } else if cabs(&(ea - eb).to_complex(prec)) < near_tol {
                near_degenerate.push((a, b));
            }
        }
    }
    let max_cross_product = max_off_diagonal(&vector_products, &degenerate, prec);
    let max_residual = residuals.iter().map(|r| r.residual.clone()).fold(Float::new(prec), |a, b| a.max(&b));
    Ok(EigenpairReport {
        residuals,
        max_residual,
        vector_products,
        max_cross_product,
        degenerate,
        near_degenerate,
    })
}

/// The eigenvalue multiset of `M`, sorted canonically.
pub fn eigen_spectrum(sm: &SpectralMatrix) -> Result<Vec<Complex>> {
    eigenvalues(&sm.m, sm.precision)
}

/// Largest distance between computed and predicted eigenvalues under a
/// greedy nearest matching; `None` when the multisets differ in size.
pub fn spectrum_mismatch(computed: &[Complex], predicted: &[GaussianRational], prec: u32) -> Option<Float> {
    if computed.len() != predicted.len() {
        return None;
    }
    let mut want: Vec<Complex> = predicted.iter().map(|p| p.to_complex(prec)).collect();
    canonical_sort(&mut want);
    let mut used = vec![false; computed.len()];
    let mut worst = Float::new(prec);
    for w in &want {
        let (j, d) = computed
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, c)| (j, cabs(&Complex::with_val(prec, c - w))))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
            .expect("sizes agree");
        used[j] = true;
        worst = worst.max(&d);
    }
    Some(worst)
}

/// Largest distance of an eigenvalue from the nearest Gaussian integer's
/// real line point, i.e. `max |λ − round(Re λ)|`.
pub fn integrality_defect(values: &[Complex], prec: u32) -> Float {
    values.iter().fold(Float::new(prec), |acc, v| {
        let r = Float::with_val(prec, v.real().round_ref());
        let d = cabs(&Complex::with_val(prec, v - r));
        acc.max(&d)
    })
}

/// Exact determinant of the coefficient matrix of `polys` in the monomial
/// basis `1, η, …, η^{k−1}`, `k = polys.len()`.
pub fn basis_determinant(polys: &[Polynomial]) -> Result<GaussianRational> {
    let k = polys.len();
    if let Some(p) = polys.iter().find(|p| p.degree().is_some_and(|d| d >= k)) {
        return Err(Error::InvalidSpec(format!(
            "degree {} does not fit a {k}-dimensional basis",
            p.degree().unwrap_or(0)
        )));
    }
    let rows: Vec<Vec<GaussianRational>> = polys.iter().map(|p| (0..k).map(|j| p.coeff(j).cloned().unwrap_or_default()).collect()).collect();
    Ok(scalar_determinant(&rows))
}

/// `μ_k/μ_0` for `k = 0..=kmax` of the classical weight.
pub fn normalized_moments(family: &Family, kmax: usize) -> Vec<GaussianRational> {
    let half = GaussianRational::from_ratio(1, 2);
    let int = |v: i64| GaussianRational::from_int(v);
    let mut out = Vec::with_capacity(kmax + 1);
    match family {
        Family::Hermite => {
            // (k−1)!!/2^{k/2} for even k
            let mut even = int(1);
            for k in 0..=kmax {
                if k % 2 == 1 {
                    out.push(int(0));
                } else {
                    if k > 0 {
                        even = &(&even * &int(k as i64 - 1)) * &half;
                    }
                    out.push(even.clone());
                }
            }
        }
        Family::Laguerre { g } => {
            let alpha = g - &half;
            let mut acc = int(1);
            for k in 0..=kmax {
                if k > 0 {
                    acc = &acc * &(&alpha + &int(k as i64));
                }
                out.push(acc.clone());
            }
        }
        Family::Jacobi { g, h } => {
            let (a, b) = (g - &half, h - &half);
            let ab2 = &(&a + &b) + &int(2);
            out.push(int(1));
            for k in 0..kmax {
                let prev = if k == 0 { int(0) } else { out[k - 1].clone() };
                let rhs = &(&(&b - &a) * &out[k]) + &(&int(k as i64) * &prev);
                let next = &rhs * &(&ab2 + &int(k as i64)).inv();
                out.push(next);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct QuadratureReport {
    /// `|Σλη^k/Σλ − μ_k/μ_0|` for `k = 0..=2N`.
    pub errors: Vec<Float>,
    /// Largest error for `k ≤ 2N−1`.
    pub max_exact_error: Float,
    /// The error at `k = 2N`.
    pub control_error: Float,
}

pub fn quadrature_moment_check(
    fam: &DeformedFamily,
    n: usize,
    zero_set: &ZeroSet,
    christoffel: &ChristoffelSet,
) -> Result<QuadratureReport> {
    if !fam.spec.index.is_empty() {
        return Err(Error::UnsupportedFamily(format!("deformed {}", fam.family())));
    }
    let prec = zero_set.precision;
    let moments = normalized_moments(fam.family(), 2 * n);
    let mut total = Complex::new(prec);
    for l in &christoffel.lambdas {
        total += l;
    }
    let mut errors = vec![];
    for (k, mk) in moments.iter().enumerate() {
        let mut s = Complex::new(prec);
        for (l, z) in christoffel.lambdas.iter().zip(&zero_set.zeros) {
            let zk = Complex::with_val(prec, rug::ops::Pow::pow(z, k as u32));
            s += Complex::with_val(prec, l * zk);
        }
        let ratio = Complex::with_val(prec, s / &total);
        errors.push(cabs(&Complex::with_val(prec, ratio - mk.to_complex(prec))));
    }
    let max_exact_error = errors[..2 * n].iter().fold(Float::new(prec), |a, b| a.max(b));
    let control_error = errors[2 * n].clone();
    Ok(QuadratureReport {
        errors,
        max_exact_error,
        control_error,
    })
}

/// Serializable float for reports: scientific notation with 6 digits.
pub fn sci(x: &Float) -> String {
    if x.is_zero() {
        "0".into()
    } else {
        x.to_string_radix(10, Some(6))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResidualRecord {
    pub label: String,
    pub predicted: GaussianRational,
    pub residual: String,
}

impl From<&EigenpairResidual> for ResidualRecord {
    fn from(r: &EigenpairResidual) -> Self {
        Self {
            label: r.label.clone(),
            predicted: r.predicted.clone(),
            residual: sci(&r.residual),
        }
    }
}
