//! The matrices `M̃` and `M` at the zeros of `P_{D,N}`.

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::classical::energy;
use crate::deform::DeformedFamily;
use crate::error::{Error, Result};
use crate::exactalg::Polynomial;
use crate::numroots::{cabs, min_separation, pow2, DecimalComplex, ZeroSet};

pub type CMatrix = Vec<Vec<Complex>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BuildPath {
    Direct,
    ClosedForm,
    Both,
}

#[derive(Clone, Debug)]
pub struct SpectralMatrix {
    pub m_tilde: CMatrix,
    pub m: CMatrix,
    /// `η̇(x_n)` with the chosen branch.
    pub eta_dot: Vec<Complex>,
    pub zeros: Vec<Complex>,
    pub xi_zeros: Vec<Complex>,
    pub path: BuildPath,
    /// `max |M̃_direct − M̃_closed| / max |M̃|` when both paths are built.
    pub discrepancy: Option<Float>,
    pub precision: u32,
}

/// `√(η̇²)` on the principal branch (real part ≥ 0, ties with imaginary
/// part ≥ 0); `flip` selects the opposite root.
pub fn eta_dot(fam: &DeformedFamily, z: &Complex, flip: bool) -> Complex {
    let prec = z.prec().0;
    let sq = fam.structure.eta_dot_sq.eval_complex(z);
    let mut r = Complex::with_val(prec, sq.sqrt_ref());
    if r.real().is_zero() && r.imag().is_sign_negative() {
        r = -r;
    }
    if flip {
        r = -r;
    }
    r
}

fn c(prec: u32) -> Complex {
    Complex::new(prec)
}

fn max_abs(m: &CMatrix, prec: u32) -> Float {
    let mut best = Float::new(prec);
    for row in m {
        for v in row {
            let a = cabs(v);
            if a > best {
                best = a;
            }
        }
    }
    best
}

/// `M̃` by applying `H̃_D − 𝓔(N)` to the Lagrange products
/// `∏_{j≠m}(η−η_j)` and evaluating at the zeros.
pub fn m_tilde_direct(fam: &DeformedFamily, n: usize, zeros: &[Complex], prec: u32) -> CMatrix {
    let k = zeros.len();
    let en = energy(fam.family(), n).to_complex(prec);
    let ops = fam.operator_numeric(prec);
    let xi = fam.xi.to_complex(prec);
    let one = Complex::with_val(prec, 1);
    let lagrange: Vec<Polynomial<Complex>> = (0..k)
        .map(|m| Polynomial::from_roots(zeros.iter().enumerate().filter(|&(j, _)| j != m).map(|(_, z)| z), one.clone()))
        .collect();
    let mut out = vec![vec![c(prec); k]; k];
    for (m, lm) in lagrange.iter().enumerate() {
        let num = ops.numerator(lm);
        for (nrow, zn) in zeros.iter().enumerate() {
            let h = Complex::with_val(prec, num.eval(zn) / xi.eval(zn));
            let v = Complex::with_val(prec, h - Complex::with_val(prec, &en * lm.eval(zn)));
            out[nrow][m] = Complex::with_val(prec, v / lagrange[nrow].eval(zn));
        }
    }
    out
}

/// `M̃` from the closed-form entries: `8c₂(η_n)/(η_n−η_m)²` off the
/// diagonal and the diagonal in terms of the zeros `η_k` and `ζ_j`.
pub fn m_tilde_closed_form(fam: &DeformedFamily, n: usize, zeros: &[Complex], xi_zeros: &[Complex], prec: u32) -> CMatrix {
    let k = zeros.len();
    let st = &fam.structure;
    let en = energy(fam.family(), n).to_complex(prec);
    let kappa = st.ka_constant.to_complex(prec);
    let mut out = vec![vec![c(prec); k]; k];
    for (a, za) in zeros.iter().enumerate() {
        let c1 = st.c1.eval_complex(za);
        let c1l = st.c1_lowered.eval_complex(za);
        let c2 = st.c2.eval_complex(za);
        let (mut s1, mut s2, mut z1, mut z2) = (c(prec), c(prec), c(prec), c(prec));
        for (b, zb) in zeros.iter().enumerate() {
            if a == b {
                continue;
            }
            let inv = Complex::with_val(prec, za - zb).recip();
            let inv2 = Complex::with_val(prec, inv.square_ref());
            out[a][b] = Complex::with_val(prec, &c2 * &inv2) * 8u32;
            s1 += &inv;
            s2 += inv2;
        }
        for zeta in xi_zeros {
            let inv = Complex::with_val(prec, za - zeta).recip();
            z2 += Complex::with_val(prec, inv.square_ref());
            z1 += inv;
        }
        // M_nn/4 = −c₂(Z₂+S₂) + (c₁/2 − c₁⁻)Z₁ + (c₁/2)S₁ + κ + 𝓔(N)/4
        let half_c1 = Complex::with_val(prec, &c1 / 2u32);
        let mut d = -Complex::with_val(prec, &c2 * Complex::with_val(prec, &z2 + &s2));
        d += Complex::with_val(prec, Complex::with_val(prec, &half_c1 - &c1l) * &z1);
        d += Complex::with_val(prec, &half_c1 * &s1);
        d += &kappa;
        let m_nn = Complex::with_val(prec, d * 4u32) + &en;
        out[a][a] = -m_nn;
    }
    out
}

/// `M_{nm} = −(η̇_m/η̇_n) M̃_{nm}`.
pub fn similarity(m_tilde: &CMatrix, eta_dot: &[Complex], prec: u32) -> CMatrix {
    m_tilde
        .iter()
        .enumerate()
        .map(|(a, row)| {
            row.iter()
                .enumerate()
                .map(|(b, v)| {
                    let r = Complex::with_val(prec, &eta_dot[b] / &eta_dot[a]);
                    -Complex::with_val(prec, r * v)
                })
                .collect()
        })
        .collect()
}

/// Builds `M̃` along `path` and `M` from it.
pub fn build_matrices(
    fam: &DeformedFamily,
    n: usize,
    zero_set: &ZeroSet,
    xi_zeros: &[Complex],
    prec: u32,
    path: BuildPath,
    flip_branch: bool,
) -> Result<SpectralMatrix> {
    if !fam.coprime(n)? {
        return Err(Error::ZeroCollision("P_{D,N} and Xi_D share a zero".into()));
    }
    let zeros = &zero_set.zeros;
    let scale = zeros.iter().chain(xi_zeros).map(cabs).fold(Float::with_val(prec, 1), |a, b| a.max(&b));
    let sep_tol = Float::with_val(prec, pow2(prec, -(prec as i32) / 2) * &scale);
    if min_separation(zeros).is_some_and(|m| m <= sep_tol) {
        return Err(Error::ZeroCollision("two zeros of P_{D,N} coincide".into()));
    }
    for z in zeros {
        for zeta in xi_zeros {
            if cabs(&Complex::with_val(prec, z - zeta)) <= sep_tol {
                return Err(Error::ZeroCollision("a zero of P_{D,N} meets a zero of Xi_D".into()));
            }
        }
    }
    let (m_tilde, discrepancy) = match path {
        BuildPath::Direct => (m_tilde_direct(fam, n, zeros, prec), None),
        BuildPath::ClosedForm => (m_tilde_closed_form(fam, n, zeros, xi_zeros, prec), None),
        BuildPath::Both => {
            let a = m_tilde_direct(fam, n, zeros, prec);
            let b = m_tilde_closed_form(fam, n, zeros, xi_zeros, prec);
            let mut worst = Float::new(prec);
            for (ra, rb) in a.iter().zip(&b) {
                for (x, y) in ra.iter().zip(rb) {
                    let d = cabs(&Complex::with_val(prec, x - y));
                    if d > worst {
                        worst = d;
                    }
                }
            }
            let rel = Float::with_val(prec, worst / max_abs(&a, prec));
            (a, Some(rel))
        }
    };
    let eta_dot: Vec<Complex> = zeros.iter().map(|z| eta_dot(fam, z, flip_branch)).collect();
    let m = similarity(&m_tilde, &eta_dot, prec);
    Ok(SpectralMatrix {
        m_tilde,
        m,
        eta_dot,
        zeros: zeros.clone(),
        xi_zeros: xi_zeros.to_vec(),
        path,
        discrepancy,
        precision: prec,
    })
}

impl SpectralMatrix {
    pub fn size(&self) -> usize {
        self.m.len()
    }

    /// `max |M_{nm} − M_{mn}| / max |M|`.
    pub fn symmetry_defect(&self) -> Float {
        let p = self.precision;
        let mut worst = Float::new(p);
        for a in 0..self.size() {
            for b in 0..a {
                let d = cabs(&Complex::with_val(p, &self.m[a][b] - &self.m[b][a]));
                if d > worst {
                    worst = d;
                }
            }
        }
        Float::with_val(p, worst / max_abs(&self.m, p))
    }

    /// `max |M̃_{nm}* − M̃_{n̄m̄}| / max |M̃|`.
    pub fn conjugation_defect(&self, pairing: &[usize]) -> Float {
        let p = self.precision;
        let mut worst = Float::new(p);
        for a in 0..self.size() {
            for b in 0..self.size() {
                let conj = Complex::with_val(p, self.m_tilde[a][b].conj_ref());
                let d = cabs(&Complex::with_val(p, conj - &self.m_tilde[pairing[a]][pairing[b]]));
                if d > worst {
                    worst = d;
                }
            }
        }
        Float::with_val(p, worst / max_abs(&self.m_tilde, p))
    }

    pub fn max_entry(&self) -> Float {
        max_abs(&self.m, self.precision)
    }

    /// `M` as nested arrays of `{re, im}` decimal strings.
    pub fn to_json(&self, digits: usize) -> serde_json::Value {
        matrix_json(&self.m, digits)
    }
}

pub fn matrix_json(m: &CMatrix, digits: usize) -> serde_json::Value {
    let rows: Vec<Vec<DecimalComplex>> = m
        .iter()
        .map(|r| r.iter().map(|v| DecimalComplex::new(v, digits)).collect())
        .collect();
    serde_json::to_value(rows).expect("serializable")
}
