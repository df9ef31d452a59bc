//! Multi-indices, the degree offset ℓ, the extra lower-degree multi-indices
//! and their predicted eigenvalues and basic-equation coefficients.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classical::{energy, virtual_energy, Family, SeedType};
use crate::error::{Error, Result};
use crate::exactalg::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode")]
pub enum MultiIndex {
    #[serde(rename = "MI")]
    MultiIndexed {
        #[serde(rename = "dI")]
        d1: Vec<usize>,
        #[serde(rename = "dII")]
        d2: Vec<usize>,
    },
    #[serde(rename = "KA")]
    KreinAdler {
        #[serde(rename = "dKA")]
        d: Vec<usize>,
    },
}

impl MultiIndex {
    pub fn mi(d1: &[usize], d2: &[usize]) -> Self {
        MultiIndex::MultiIndexed {
            d1: d1.to_vec(),
            d2: d2.to_vec(),
        }
    }

    pub fn ka(d: &[usize]) -> Self {
        MultiIndex::KreinAdler { d: d.to_vec() }
    }

    pub fn is_ka(&self) -> bool {
        matches!(self, MultiIndex::KreinAdler { .. })
    }

    pub fn is_empty(&self) -> bool {
        match self {
            MultiIndex::MultiIndexed { d1, d2 } => d1.is_empty() && d2.is_empty(),
            MultiIndex::KreinAdler { d } => d.is_empty(),
        }
    }

    /// Number of type-I degrees (all degrees for Krein-Adler).
    pub fn m(&self) -> usize {
        match self {
            MultiIndex::MultiIndexed { d1, .. } => d1.len(),
            MultiIndex::KreinAdler { d } => d.len(),
        }
    }

    /// Number of type-II degrees (zero for Krein-Adler).
    pub fn n(&self) -> usize {
        match self {
            MultiIndex::MultiIndexed { d2, .. } => d2.len(),
            MultiIndex::KreinAdler { .. } => 0,
        }
    }

    /// `ℓ_D` (multi-indexed) or `ℓ′_D` (Krein-Adler). Also valid for
    /// derived indices containing 0 or listed out of order.
    pub fn ell(&self) -> i64 {
        let tri = |k: usize| (k * k.saturating_sub(1) / 2) as i64;
        let sum = |d: &[usize]| d.iter().sum::<usize>() as i64;
        match self {
            MultiIndex::MultiIndexed { d1, d2 } => {
                sum(d1) - tri(d1.len()) + sum(d2) - tri(d2.len()) + (d1.len() * d2.len()) as i64
            }
            MultiIndex::KreinAdler { d } => sum(d) - (d.len() * (d.len() + 1) / 2) as i64,
        }
    }

    /// Expected degree of the denominator polynomial: `ℓ_D`, or `ℓ′_D + M`
    /// for Krein-Adler (the Wronskian of `M` polynomials).
    pub fn xi_degree(&self) -> i64 {
        match self {
            MultiIndex::MultiIndexed { .. } => self.ell(),
            MultiIndex::KreinAdler { d } => self.ell() + d.len() as i64,
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiIndex::MultiIndexed { d1, d2 } => write!(f, "MI dI={d1:?} dII={d2:?}"),
            MultiIndex::KreinAdler { d } => write!(f, "KA d={d:?}"),
        }
    }
}

fn strictly_increasing_positive(d: &[usize], what: &str) -> Result<()> {
    if d.contains(&0) {
        return Err(Error::InvalidSpec(format!("{what} entries must be ≥ 1: {d:?}")));
    }
    if d.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSpec(format!("{what} must be strictly increasing: {d:?}")));
    }
    Ok(())
}

/// `∏_j (m − d_j) ≥ 0` for every `m ≥ 0`.
pub fn krein_adler_condition(d: &[usize]) -> bool {
    let top = d.iter().copied().max().unwrap_or(0);
    (0..=top)
        .filter(|m| !d.contains(m))
        .all(|m| d.iter().filter(|&&v| v > m).count() % 2 == 0)
}

/// A multi-index together with the family it deforms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndexSpec {
    pub family: Family,
    #[serde(flatten)]
    pub index: MultiIndex,
}

impl MultiIndexSpec {
    /// Validated constructor.
    pub fn new(family: Family, index: MultiIndex) -> Result<Self> {
        match &index {
            MultiIndex::MultiIndexed { d1, d2 } => {
                if family == Family::Hermite {
                    return Err(Error::UnsupportedFamily(
                        "H has no virtual states; use Krein-Adler mode".into(),
                    ));
                }
                strictly_increasing_positive(d1, "dI")?;
                strictly_increasing_positive(d2, "dII")?;
            }
            MultiIndex::KreinAdler { d } => {
                strictly_increasing_positive(d, "dKA")?;
                if !krein_adler_condition(d) {
                    return Err(Error::InvalidSpec(format!(
                        "dKA={d:?} violates the Krein-Adler condition"
                    )));
                }
            }
        }
        Ok(Self { family, index })
    }

    /// Unchecked constructor for derived indices `D′` (entries may be 0 and
    /// replaced degrees keep their slot).
    pub fn derived(family: Family, index: MultiIndex) -> Self {
        Self { family, index }
    }

    pub fn classical(family: Family) -> Self {
        let index = if family == Family::Hermite {
            MultiIndex::ka(&[])
        } else {
            MultiIndex::mi(&[], &[])
        };
        Self { family, index }
    }

    pub fn ell(&self) -> i64 {
        self.index.ell()
    }

    pub fn is_ka(&self) -> bool {
        self.index.is_ka()
    }

    /// Parameter bounds that keep the virtual energies negative. Returns
    /// human-readable warnings; empty when the bounds hold or do not apply.
    pub fn parameter_warnings(&self) -> Vec<String> {
        let MultiIndex::MultiIndexed { d1, d2 } = &self.index else {
            return vec![];
        };
        if !self.family.parameters_real() {
            return vec!["complex parameters: positivity bounds not applicable".into()];
        }
        let (m, n) = (d1.len() as i64, d2.len() as i64);
        let mut out = vec![];
        let mut check = |name: &str, val: &GaussianRational, floor: i64, dmax: Option<usize>| {
            // bound: val > max{floor/2, dmax + 1/2}
            let mut b = GaussianRational::from_ratio(floor, 2);
            if let Some(d) = dmax {
                let c = GaussianRational::from_ratio(2 * d as i64 + 1, 2);
                if c.re() > b.re() {
                    b = c;
                }
            }
            if val.re() <= b.re() {
                out.push(format!("{name}={val} does not exceed the bound {b}"));
            }
        };
        match &self.family {
            Family::Laguerre { g } => check("g", g, 2 * n + 3, d2.last().copied()),
            Family::Jacobi { g, h } => {
                check("g", g, 2 * n + 4, d2.last().copied());
                check("h", h, 2 * m + 4, d1.last().copied());
            }
            Family::Hermite => {}
        }
        out
    }

    /// `new` followed by the parameter-bound check; warnings become errors.
    pub fn new_strict(family: Family, index: MultiIndex) -> Result<Self> {
        let s = Self::new(family, index)?;
        match s.parameter_warnings().first() {
            Some(w) => Err(Error::InvalidSpec(w.clone())),
            None => Ok(s),
        }
    }

    /// Degrees `m` of the ordinary participants `P_{D,m}` for a given `N`.
    pub fn ordinary_indices(&self, n: usize) -> Vec<usize> {
        match &self.index {
            MultiIndex::MultiIndexed { .. } => (0..n).collect(),
            MultiIndex::KreinAdler { d } => (0..n).filter(|m| !d.contains(m)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtraType {
    I,
    II,
    III,
    KA,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Exchanged,
}

/// A derived multi-index `D′ ∈ 𝓔𝓟` with its complements relative to `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtraIndex {
    pub index: MultiIndex,
    pub extra_type: ExtraType,
    /// `D ∖ D′`
    pub removed: Vec<usize>,
    /// `D′ ∖ D`
    pub added: Vec<usize>,
}

impl ExtraIndex {
    pub fn label(&self) -> String {
        match self.extra_type {
            ExtraType::III => format!("III({},{})", self.removed[0], self.removed[1]),
            t => format!("{t:?}({}->{})", self.removed[0], self.added[0]),
        }
    }
}

fn replacements(d: &[usize], wrap: impl Fn(Vec<usize>) -> MultiIndex, t: ExtraType) -> Vec<ExtraIndex> {
    let used: BTreeSet<usize> = d.iter().copied().collect();
    let mut out = vec![];
    for (j, &dj) in d.iter().enumerate() {
        for eps in (0..dj).filter(|e| !used.contains(e)) {
            let mut d2 = d.to_vec();
            d2[j] = eps;
            out.push(ExtraIndex {
                index: wrap(d2),
                extra_type: t,
                removed: vec![dj],
                added: vec![eps],
            });
        }
    }
    out
}

/// All `D′ ∈ 𝓔𝓟` in canonical order: type I by `(j, ε)`, type II, then
/// type III by `(j, k)`; Krein-Adler single replacements by `(j, ε)`.
pub fn enumerate_extras(spec: &MultiIndexSpec, n: usize) -> Result<Vec<ExtraIndex>> {
    match &spec.index {
        MultiIndex::MultiIndexed { d1, d2 } => {
            if n == 0 {
                return Err(Error::UnsupportedRange("N must be ≥ 1".into()));
            }
            let mut out = replacements(d1, |v| MultiIndex::mi(&v, d2), ExtraType::I);
            out.extend(replacements(d2, |v| MultiIndex::mi(d1, &v), ExtraType::II));
            for (j, &a) in d1.iter().enumerate() {
                for (k, &b) in d2.iter().enumerate() {
                    let r1: Vec<usize> = d1.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v).collect();
                    let r2: Vec<usize> = d2.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
                    out.push(ExtraIndex {
                        index: MultiIndex::mi(&r1, &r2),
                        extra_type: ExtraType::III,
                        removed: vec![a, b],
                        added: vec![],
                    });
                }
            }
            Ok(out)
        }
        MultiIndex::KreinAdler { d } => {
            if d.iter().any(|&v| v >= n) {
                return Err(Error::UnsupportedRange(format!(
                    "Krein-Adler extras need N > max(D); N={n}, D={d:?}"
                )));
            }
            Ok(replacements(d, |v| MultiIndex::KreinAdler { d: v }, ExtraType::KA))
        }
    }
}

fn check_member(spec: &MultiIndexSpec, extra: &ExtraIndex, n: usize) -> Result<()> {
    if enumerate_extras(spec, n)?.contains(extra) {
        Ok(())
    } else {
        Err(Error::MismatchedExtra)
    }
}

fn seed_of(t: ExtraType) -> SeedType {
    if t == ExtraType::II {
        SeedType::II
    } else {
        SeedType::I
    }
}

/// `Ẽ(D′)`, the eigenvalue attached to `P_{D′,N}`.
pub fn predicted_eigenvalue(spec: &MultiIndexSpec, extra: &ExtraIndex, n: usize) -> Result<GaussianRational> {
    check_member(spec, extra, n)?;
    let f = &spec.family;
    let en = energy(f, n);
    let val = match extra.extra_type {
        ExtraType::I | ExtraType::II => {
            let s = seed_of(extra.extra_type);
            &virtual_energy(f, s, extra.removed[0])? + &virtual_energy(f, s, extra.added[0])?
        }
        ExtraType::III => {
            &virtual_energy(f, SeedType::I, extra.removed[0])?
                + &virtual_energy(f, SeedType::II, extra.removed[1])?
        }
        ExtraType::KA => &energy(f, extra.removed[0]) + &energy(f, extra.added[0]),
    };
    Ok(&val - &en)
}

/// Eigenvalue of the matrix `M` attached to `P_{D′,N}`: `𝓔(N) − Ẽ(D′)`.
pub fn predicted_m_eigenvalue(spec: &MultiIndexSpec, extra: &ExtraIndex, n: usize) -> Result<GaussianRational> {
    Ok(&energy(&spec.family, n) - &predicted_eigenvalue(spec, extra, n)?)
}

/// Coefficient of the basic equation: `𝓔′(D′)` (forward) or `𝓔″(D)`
/// (exchanged).
pub fn predicted_coefficient(
    spec: &MultiIndexSpec,
    extra: &ExtraIndex,
    n: usize,
    direction: Direction,
) -> Result<GaussianRational> {
    check_member(spec, extra, n)?;
    let f = &spec.family;
    let en = energy(f, n);
    let two = GaussianRational::from_int(2);
    let deg = |forward: bool| {
        if forward {
            extra.added[0]
        } else {
            extra.removed[0]
        }
    };
    let fwd = direction == Direction::Forward;
    Ok(match extra.extra_type {
        ExtraType::I | ExtraType::II => &two * &(&en - &virtual_energy(f, seed_of(extra.extra_type), deg(fwd))?),
        ExtraType::KA => &two * &(&en - &energy(f, deg(fwd))),
        ExtraType::III => {
            let gamma = match f {
                Family::Laguerre { .. } => 2,
                Family::Jacobi { .. } => 8,
                Family::Hermite => return Err(Error::UnsupportedFamily("H".into())),
            };
            if fwd {
                GaussianRational::from_int(-4 * gamma)
            } else {
                let a = &en - &virtual_energy(f, SeedType::I, extra.removed[0])?;
                let b = &en - &virtual_energy(f, SeedType::II, extra.removed[1])?;
                &(&a * &b) * &GaussianRational::from_ratio(-1, gamma)
            }
        }
    })
}

/// A participant of the discrete orthogonality relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Participant {
    pub label: String,
    /// `Some(m)` for `P_{D,m}`, `None` for an extra `P_{D′,N}`.
    pub ordinary: Option<usize>,
    pub extra: Option<ExtraIndex>,
    /// Predicted eigenvalue of `M`.
    pub m_eigenvalue: GaussianRational,
}

/// Ordinary participants followed by the extras, with predicted
/// `M`-eigenvalues.
pub fn participants(spec: &MultiIndexSpec, n: usize) -> Result<Vec<Participant>> {
    let en = energy(&spec.family, n);
    let mut out: Vec<Participant> = spec
        .ordinary_indices(n)
        .into_iter()
        .map(|m| Participant {
            label: format!("P{m}"),
            ordinary: Some(m),
            extra: None,
            m_eigenvalue: &en - &energy(&spec.family, m),
        })
        .collect();
    if !spec.index.is_empty() {
        for e in enumerate_extras(spec, n)? {
            out.push(Participant {
                label: e.label(),
                m_eigenvalue: predicted_m_eigenvalue(spec, &e, n)?,
                ordinary: None,
                extra: Some(e),
            });
        }
    }
    Ok(out)
}

/// Index pairs of participants with exactly equal predicted eigenvalues.
pub fn degenerate_pairs(parts: &[Participant]) -> Vec<(usize, usize)> {
    let mut out = vec![];
    for a in 0..parts.len() {
        for b in a + 1..parts.len() {
            if parts[a].m_eigenvalue == parts[b].m_eigenvalue {
                out.push((a, b));
            }
        }
    }
    out
}

/// Whether every predicted `M`-eigenvalue is an integer.
pub fn diophantine(parts: &[Participant]) -> bool {
    parts.iter().all(|p| p.m_eigenvalue.to_integer().is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn flagship() -> MultiIndexSpec {
        MultiIndexSpec::new(Family::laguerre(q("7/2")), MultiIndex::mi(&[1], &[2])).unwrap()
    }

    #[test]
    fn ell_examples() {
        assert_eq!(MultiIndex::mi(&[1], &[2]).ell(), 4);
        assert_eq!(MultiIndex::mi(&[], &[]).ell(), 0);
        assert_eq!(MultiIndex::ka(&[1, 2]).ell(), 0);
        assert_eq!(MultiIndex::ka(&[1, 2]).xi_degree(), 2);
    }

    #[test]
    fn validation() {
        let l = Family::laguerre(q("7/2"));
        assert!(MultiIndexSpec::new(l.clone(), MultiIndex::mi(&[2, 1], &[])).is_err());
        assert!(MultiIndexSpec::new(l.clone(), MultiIndex::mi(&[0], &[])).is_err());
        assert!(MultiIndexSpec::new(Family::Hermite, MultiIndex::mi(&[1], &[])).is_err());
        assert!(MultiIndexSpec::new(Family::Hermite, MultiIndex::ka(&[1])).is_err());
        assert!(MultiIndexSpec::new(Family::Hermite, MultiIndex::ka(&[1, 2])).is_ok());
        assert!(MultiIndexSpec::new(Family::Hermite, MultiIndex::ka(&[2, 3, 5, 6])).is_ok());
        assert!(krein_adler_condition(&[]));
        assert!(!krein_adler_condition(&[1, 3]));
        assert!(flagship().parameter_warnings().is_empty());
        let low = MultiIndexSpec::new(Family::laguerre(q("2")), MultiIndex::mi(&[1], &[2])).unwrap();
        assert_eq!(low.parameter_warnings().len(), 1);
        assert!(MultiIndexSpec::new_strict(Family::laguerre(q("2")), MultiIndex::mi(&[1], &[2])).is_err());
    }

    #[test]
    fn extras_examples() {
        let l = Family::laguerre(q("7/2"));
        let s = MultiIndexSpec::new(l, MultiIndex::mi(&[2], &[])).unwrap();
        let e = enumerate_extras(&s, 3).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].index, MultiIndex::mi(&[0], &[]));
        assert_eq!(e[1].index, MultiIndex::mi(&[1], &[]));

        let e = enumerate_extras(&flagship(), 5).unwrap();
        let labels: Vec<String> = e.iter().map(ExtraIndex::label).collect();
        assert_eq!(labels, ["I(1->0)", "II(2->0)", "II(2->1)", "III(1,2)"]);
        assert_eq!(e[3].index, MultiIndex::mi(&[], &[]));

        let ka = MultiIndexSpec::new(Family::Hermite, MultiIndex::ka(&[1, 2])).unwrap();
        let e = enumerate_extras(&ka, 5).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].index, MultiIndex::ka(&[0, 2]));
        assert_eq!(e[1].index, MultiIndex::ka(&[1, 0]));
        assert!(matches!(enumerate_extras(&ka, 2), Err(Error::UnsupportedRange(_))));
    }

    #[test]
    fn predictions() {
        let s = flagship();
        let e = enumerate_extras(&s, 5).unwrap();
        assert_eq!(predicted_eigenvalue(&s, &e[0], 5).unwrap(), q("-56"));
        assert_eq!(predicted_m_eigenvalue(&s, &e[0], 5).unwrap(), q("76"));
        // type III: Ẽ^I(1) + Ẽ^II(2) − 𝓔(5) = −20 − 4 − 20
        assert_eq!(predicted_eigenvalue(&s, &e[3], 5).unwrap(), q("-44"));
        assert_eq!(predicted_coefficient(&s, &e[3], 5, Direction::Forward).unwrap(), q("-8"));
        // −(1/2)(20 + 20)(20 + 4)
        assert_eq!(predicted_coefficient(&s, &e[3], 5, Direction::Exchanged).unwrap(), q("-480"));

        let ka = MultiIndexSpec::new(Family::Hermite, MultiIndex::ka(&[1, 2])).unwrap();
        let e = enumerate_extras(&ka, 5).unwrap();
        assert_eq!(predicted_eigenvalue(&ka, &e[1], 5).unwrap(), q("-6"));
        assert_eq!(predicted_m_eigenvalue(&ka, &e[1], 5).unwrap(), q("16"));
        assert_eq!(predicted_coefficient(&ka, &e[1], 5, Direction::Forward).unwrap(), q("20"));

        let j = MultiIndexSpec::new(Family::jacobi(q("3"), q("4")), MultiIndex::mi(&[1], &[1])).unwrap();
        let e = enumerate_extras(&j, 3).unwrap();
        assert_eq!(predicted_coefficient(&j, &e[2], 3, Direction::Forward).unwrap(), q("-32"));

        let foreign = ExtraIndex {
            index: MultiIndex::mi(&[7], &[]),
            extra_type: ExtraType::I,
            removed: vec![8],
            added: vec![7],
        };
        assert_eq!(predicted_eigenvalue(&s, &foreign, 5), Err(Error::MismatchedExtra));
    }

    #[test]
    fn participants_and_diophantine() {
        let ka = MultiIndexSpec::new(Family::laguerre(q("13/10")), MultiIndex::ka(&[1, 2])).unwrap();
        let p = participants(&ka, 5).unwrap();
        assert_eq!(p.len(), 5);
        assert!(diophantine(&p));
        let p = participants(&flagship(), 5).unwrap();
        assert_eq!(p.len(), 9);
        assert!(degenerate_pairs(&p).is_empty());
    }

    #[test]
    fn serde_shape() {
        let js = serde_json::to_string(&MultiIndex::mi(&[1], &[2])).unwrap();
        assert_eq!(js, r#"{"mode":"MI","dI":[1],"dII":[2]}"#);
        let js = serde_json::to_string(&MultiIndex::ka(&[1, 2])).unwrap();
        assert_eq!(js, r#"{"mode":"KA","dKA":[1,2]}"#);
    }
}
