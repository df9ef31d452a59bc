//! Hermite, Laguerre and Jacobi families: polynomials, energies, virtual
//! state seed functions and the structure functions of the deformed operator.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{GaussianRational, Polynomial, QuasiRationalFunction};

/// A classical family with its parameters. `α = g − 1/2`, `β = h − 1/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Family {
    #[serde(rename = "H")]
    Hermite,
    #[serde(rename = "L")]
    Laguerre { g: GaussianRational },
    #[serde(rename = "J")]
    Jacobi { g: GaussianRational, h: GaussianRational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SeedType {
    I,
    II,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Hermite => write!(f, "H"),
            Family::Laguerre { g } => write!(f, "L(g={g})"),
            Family::Jacobi { g, h } => write!(f, "J(g={g}, h={h})"),
        }
    }
}

fn half() -> GaussianRational {
    GaussianRational::from_ratio(1, 2)
}

fn int(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

impl Family {
    pub fn laguerre(g: GaussianRational) -> Self {
        Family::Laguerre { g }
    }

    pub fn jacobi(g: GaussianRational, h: GaussianRational) -> Self {
        Family::Jacobi { g, h }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Family::Hermite => "H",
            Family::Laguerre { .. } => "L",
            Family::Jacobi { .. } => "J",
        }
    }

    pub fn g(&self) -> Option<&GaussianRational> {
        match self {
            Family::Hermite => None,
            Family::Laguerre { g } | Family::Jacobi { g, .. } => Some(g),
        }
    }

    pub fn h(&self) -> Option<&GaussianRational> {
        match self {
            Family::Jacobi { h, .. } => Some(h),
            _ => None,
        }
    }

    pub fn parameters_real(&self) -> bool {
        self.g().is_none_or(GaussianRational::is_real) && self.h().is_none_or(GaussianRational::is_real)
    }

    /// Same family with `g`, `h` replaced; Hermite is returned unchanged.
    pub fn with_parameters(&self, g: GaussianRational, h: Option<GaussianRational>) -> Self {
        match self {
            Family::Hermite => Family::Hermite,
            Family::Laguerre { .. } => Family::Laguerre { g },
            Family::Jacobi { h: h0, .. } => Family::Jacobi {
                g,
                h: h.unwrap_or_else(|| h0.clone()),
            },
        }
    }
}

/// Generalized binomial coefficient `a (a−1) ⋯ (a−k+1) / k!`.
fn binomial(a: &GaussianRational, k: usize) -> GaussianRational {
    let mut acc = GaussianRational::one();
    for i in 0..k {
        acc = &acc * &(a - &int(i as i64));
        acc = &acc / &int(i as i64 + 1);
    }
    acc
}

pub fn hermite_poly(n: usize) -> Polynomial {
    let mut prev = Polynomial::zero();
    let mut cur = Polynomial::one();
    let two_x = Polynomial::from_ints(&[0, 2]);
    for k in 0..n {
        let next = &(&two_x * &cur) - &prev.scale(&int(2 * k as i64));
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_n^{(α)}(η)` by `(k+1) L_{k+1} = (2k+1+α−η) L_k − (k+α) L_{k−1}`.
pub fn laguerre_poly(alpha: &GaussianRational, n: usize) -> Polynomial {
    let mut prev = Polynomial::zero();
    let mut cur = Polynomial::one();
    for k in 0..n {
        let k_ = int(k as i64);
        let a = &(&int(2 * k as i64 + 1) + alpha);
        let lin = Polynomial::new(vec![a.clone(), int(-1)]);
        let next = &(&lin * &cur) - &prev.scale(&(&k_ + alpha));
        prev = cur;
        cur = next.scale(&int(k as i64 + 1).inv());
    }
    cur
}

/// `P_n^{(α,β)}` from the explicit sum
/// `Σ_s C(n+α, n−s) C(n+β, s) ((x−1)/2)^s ((x+1)/2)^{n−s}`.
pub fn jacobi_series(alpha: &GaussianRational, beta: &GaussianRational, n: usize) -> Polynomial {
    let xm = Polynomial::from_strs(&["-1/2", "1/2"]).expect("literal");
    let xp = Polynomial::from_strs(&["1/2", "1/2"]).expect("literal");
    let na = &int(n as i64) + alpha;
    let nb = &int(n as i64) + beta;
    (0..=n).fold(Polynomial::zero(), |acc, s| {
        let c = &binomial(&na, n - s) * &binomial(&nb, s);
        let term = &xm.pow(s as u32) * &xp.pow((n - s) as u32);
        &acc + &term.scale(&c)
    })
}

/// `P_n^{(α,β)}(η)` by the three-term recurrence, switching to the explicit
/// sum for any step whose leading factor vanishes.
pub fn jacobi_poly(alpha: &GaussianRational, beta: &GaussianRational, n: usize) -> Polynomial {
    if n == 0 {
        return Polynomial::one();
    }
    let ab = alpha + beta;
    let mut prev = Polynomial::one();
    // P_1 = (α+1) + (α+β+2)(η−1)/2
    let c1 = &(&ab + &int(2)) * &half();
    let mut cur = Polynomial::new(vec![&(alpha + &int(1)) - &c1, c1]);
    for k in 1..n {
        let k_ = int(k as i64);
        let s = &int(2 * k as i64) + &ab; // 2k+α+β
        let den = &(&int(2 * (k as i64 + 1)) * &(&(&k_ + &ab) + &int(1))) * &s;
        if den.is_zero() {
            prev = cur;
            cur = jacobi_series(alpha, beta, k + 1);
            continue;
        }
        let s1 = &s + &int(1);
        let s2 = &s + &int(2);
        let lin = Polynomial::new(vec![
            &s1 * &(&(alpha * alpha) - &(beta * beta)),
            &(&s1 * &s2) * &s,
        ]);
        let back = &(&(&int(2) * &(&k_ + alpha)) * &(&k_ + beta)) * &s2;
        let next = &(&lin * &cur) - &prev.scale(&back);
        prev = cur;
        cur = next.scale(&den.inv());
    }
    cur
}

/// The classical polynomial `P_n(η)` (`H_n(x)` for Hermite).
pub fn classical_poly(family: &Family, n: usize) -> Polynomial {
    match family {
        Family::Hermite => hermite_poly(n),
        Family::Laguerre { g } => laguerre_poly(&(g - &half()), n),
        Family::Jacobi { g, h } => jacobi_poly(&(g - &half()), &(h - &half()), n),
    }
}

/// Virtual state seed `μ_v(η)`. Jacobi bases are carried as `(1∓η)`; the
/// `((1∓η)/2)` normalization is restored by the deform module.
pub fn seed_function(family: &Family, seed: SeedType, v: usize) -> Result<QuasiRationalFunction> {
    let h_ = half();
    Ok(match (family, seed) {
        (Family::Hermite, _) => return Err(Error::UnsupportedFamily("H".into())),
        (Family::Laguerre { g }, SeedType::I) => {
            QuasiRationalFunction::from_poly(laguerre_poly(&(g - &h_), v).reflect()).with_exp(int(1))
        }
        (Family::Laguerre { g }, SeedType::II) => {
            let a = &h_ - g;
            QuasiRationalFunction::from_poly(laguerre_poly(&a, v)).with_pow_eta(a)
        }
        (Family::Jacobi { g, h }, SeedType::I) => {
            let b = &h_ - h;
            QuasiRationalFunction::from_poly(jacobi_poly(&(g - &h_), &b, v)).with_pow_one_plus(b)
        }
        (Family::Jacobi { g, h }, SeedType::II) => {
            let a = &h_ - g;
            QuasiRationalFunction::from_poly(jacobi_poly(&a, &(h - &h_), v)).with_pow_one_minus(a)
        }
    })
}

/// `𝓔(n)`: `2n` (H), `4n` (L), `4n(n+g+h)` (J).
pub fn energy(family: &Family, n: usize) -> GaussianRational {
    let n_ = int(n as i64);
    match family {
        Family::Hermite => int(2 * n as i64),
        Family::Laguerre { .. } => int(4 * n as i64),
        Family::Jacobi { g, h } => &(&int(4) * &n_) * &(&(&n_ + g) + h),
    }
}

/// `Ẽ^{I,II}(v)`; `v = 0` is admitted.
pub fn virtual_energy(family: &Family, seed: SeedType, v: usize) -> Result<GaussianRational> {
    let vh = &int(v as i64) + &half();
    let m4 = int(-4);
    Ok(match (family, seed) {
        (Family::Hermite, _) => return Err(Error::UnsupportedFamily("H".into())),
        (Family::Laguerre { g }, SeedType::I) => &m4 * &(g + &vh),
        (Family::Laguerre { g }, SeedType::II) => &m4 * &(g - &vh),
        (Family::Jacobi { g, h }, SeedType::I) => &(&m4 * &(g + &vh)) * &(h - &vh),
        (Family::Jacobi { g, h }, SeedType::II) => &(&m4 * &(g - &vh)) * &(h + &vh),
    })
}

/// Coefficient functions of the deformed operator
/// `H̃ = −4(c₂ ∂² + f₁ ∂ + f₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureData {
    /// `c₁` at the shifted parameters.
    pub c1: Polynomial,
    /// `c₁` at the shifted parameters lowered by one.
    pub c1_lowered: Polynomial,
    pub c2: Polynomial,
    pub eta_dot_sq: Polynomial,
    /// Additional constant in `f₂` (Krein-Adler only, zero otherwise).
    pub ka_constant: GaussianRational,
    /// Shifted parameters `(g, h)` used in `c1`.
    pub shifted: Vec<GaussianRational>,
}

fn c1_laguerre(g: &GaussianRational) -> Polynomial {
    Polynomial::new(vec![g + &half(), int(-1)])
}

fn c1_jacobi(g: &GaussianRational, h: &GaussianRational) -> Polynomial {
    Polynomial::new(vec![h - g, -&(&(g + h) + &int(1))])
}

/// `c₁`, `c₂`, `η̇²` and the shift rules. Multi-indexed mode (`ka = false`)
/// shifts `(g, h) → (g+M−N, h−M+N)`; Krein-Adler mode needs `n = 0` and
/// shifts `(g, h) → (g+M, h+M)`.
pub fn structure_functions(family: &Family, m: usize, n: usize, ka: bool) -> Result<StructureData> {
    let one = int(1);
    let (mi, ni) = (m as i64, n as i64);
    if ka && n != 0 {
        return Err(Error::InvalidSpec("Krein-Adler structure data has N = 0".into()));
    }
    let four = |p: &Polynomial| p.scale(&int(4));
    Ok(match family {
        Family::Hermite => {
            if !ka {
                return Err(Error::UnsupportedFamily(
                    "H has no virtual states; use Krein-Adler mode".into(),
                ));
            }
            let c1 = Polynomial::new(vec![int(0), GaussianRational::from_ratio(-1, 2)]);
            StructureData {
                c1_lowered: c1.clone(),
                c1,
                c2: Polynomial::constant(GaussianRational::from_ratio(1, 4)),
                eta_dot_sq: Polynomial::one(),
                ka_constant: GaussianRational::from_ratio(-mi, 2),
                shifted: vec![],
            }
        }
        Family::Laguerre { g } => {
            let gs = if ka { g + &int(mi) } else { g + &int(mi - ni) };
            let c2 = Polynomial::x();
            StructureData {
                c1: c1_laguerre(&gs),
                c1_lowered: c1_laguerre(&(&gs - &one)),
                eta_dot_sq: four(&c2),
                c2,
                ka_constant: if ka { int(-mi) } else { int(0) },
                shifted: vec![gs],
            }
        }
        Family::Jacobi { g, h } => {
            let (gs, hs) = if ka {
                (g + &int(mi), h + &int(mi))
            } else {
                (g + &int(mi - ni), h + &int(ni - mi))
            };
            let c2 = Polynomial::from_ints(&[1, 0, -1]);
            let kappa = if ka {
                &int(-mi) * &(&(g + h) + &int(mi))
            } else {
                int(0)
            };
            StructureData {
                c1: c1_jacobi(&gs, &hs),
                c1_lowered: c1_jacobi(&(&gs - &one), &(&hs - &one)),
                eta_dot_sq: four(&c2),
                c2,
                ka_constant: kappa,
                shifted: vec![gs, hs],
            }
        }
    })
}
