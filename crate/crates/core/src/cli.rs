//! Batch driver: case descriptions, the check pipeline and reports.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classical::Family;
use crate::deform::{identity_in_parameters, identity_suite, DeformedFamily};
use crate::error::{Error, Result};
use crate::exactalg::{GaussianRational, Polynomial};
use crate::mindex::{diophantine, enumerate_extras, MultiIndex, MultiIndexSpec, Participant};
use crate::numroots::{analyze_zeros, cabs, find_roots, pow2, vieta_errors, DecimalComplex, ZeroSet, ZeroSetRecord};
use crate::spectral::{
    basis_determinant, build_matrices, christoffel_numbers, eigen_spectrum, integrality_defect, orthogonality_sums,
    participant_polys, predicted_eigenpairs_check, quadrature_moment_check, sci, spectrum_mismatch, xi_zeros,
    BuildPath, ChristoffelSet, ResidualRecord, SpectralMatrix,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_PRECISION: u32 = 256;
pub const PRECISION_ENV: &str = "DISORTH_PRECISION";
const SUITE_MANIFEST: &str = include_str!("../suite.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "camelCase")]
#[value(rename_all = "camelCase")]
pub enum Check {
    Degrees,
    EigenIdentity,
    BasicIdentity,
    IdentityInParameters,
    Zeros,
    Matrices,
    Orthogonality,
    Eigenpairs,
    Spectrum,
    Basis,
    Quadrature,
    Diophantine,
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::Degrees,
        Check::EigenIdentity,
        Check::BasicIdentity,
        Check::IdentityInParameters,
        Check::Zeros,
        Check::Matrices,
        Check::Orthogonality,
        Check::Eigenpairs,
        Check::Spectrum,
        Check::Basis,
        Check::Quadrature,
        Check::Diophantine,
    ];

    fn needs_zeros(self) -> bool {
        matches!(
            self,
            Check::Zeros
                | Check::Matrices
                | Check::Orthogonality
                | Check::Eigenpairs
                | Check::Spectrum
                | Check::Quadrature
                | Check::Diophantine
        )
    }

    fn needs_matrices(self) -> bool {
        matches!(self, Check::Matrices | Check::Eigenpairs | Check::Spectrum | Check::Diophantine)
    }

    fn needs_participants(self) -> bool {
        matches!(
            self,
            Check::Orthogonality | Check::Eigenpairs | Check::Spectrum | Check::Basis | Check::Diophantine
        )
    }

    fn name(self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
    }
}

/// Tolerances as exact strings: a decimal (`"1e-50"`) or a power of two
/// (`"2^-100"`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct Tolerances {
    pub orthogonality: String,
    pub eigen_residual: String,
    pub spectrum: String,
    pub quadrature: String,
    /// Relative matrix tolerance; `2^(−p/2)` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<String>,
    /// Asserted bound on the relative spread of the Christoffel numbers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub christoffel_spread: Option<String>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orthogonality: "1e-50".into(),
            eigen_residual: "2^-100".into(),
            spectrum: "2^-100".into(),
            quadrature: "1e-50".into(),
            matrix: None,
            christoffel_spread: None,
        }
    }
}

pub fn parse_tolerance(s: &str, prec: u32) -> Result<Float> {
    let t = s.trim();
    if let Some(e) = t.strip_prefix("2^") {
        let e: i32 = e.parse().map_err(|_| Error::InvalidSpec(format!("tolerance {s}")))?;
        return Ok(pow2(prec, e));
    }
    Float::parse(t)
        .map(|v| Float::with_val(prec, v))
        .map_err(|_| Error::InvalidSpec(format!("tolerance {s}")))
}

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

fn default_path() -> BuildPath {
    BuildPath::Both
}

fn default_samples() -> usize {
    4
}

/// One verification case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseSpec {
    pub name: String,
    pub family: Family,
    #[serde(flatten)]
    pub index: MultiIndex,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_path")]
    pub build_path: BuildPath,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Empty means every check that applies to the case; quadrature only
    /// applies to undeformed families.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    /// Include `M` in the matrices check output.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub dump_matrices: bool,
}

impl CaseSpec {
    /// The validated multi-index. An empty multi-index is the
    /// classical family.
    pub fn multi_index_spec(&self) -> Result<MultiIndexSpec> {
        if self.index.is_empty() {
            return Ok(MultiIndexSpec::classical(self.family.clone()));
        }
        MultiIndexSpec::new(self.family.clone(), self.index.clone()).map_err(|e| match e {
            Error::InvalidSpec(_) => e,
            other => Error::InvalidSpec(other.to_string()),
        })
    }

    pub fn validate(&self) -> Result<MultiIndexSpec> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("N must be at least 1".into()));
        }
        if self.precision_bits < 64 {
            return Err(Error::InvalidSpec("precisionBits must be at least 64".into()));
        }
        let t = &self.tolerances;
        for s in [&t.orthogonality, &t.eigen_residual, &t.spectrum, &t.quadrature]
            .into_iter()
            .chain(t.matrix.iter())
            .chain(t.christoffel_spread.iter())
        {
            parse_tolerance(s, 64)?;
        }
        self.multi_index_spec()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Status {
    Fail,
    Error,
    Pass,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub check: Check,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub version: String,
    pub passed: bool,
    pub failures: Vec<Check>,
    pub case: CaseSpec,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn result(&self, check: Check) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == check)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub timings: bool,
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn decimal(z: &Complex) -> DecimalComplex {
    DecimalComplex::new(z, 30)
}

/// Shared intermediate results of one case.
struct Stage<'a> {
    spec: &'a CaseSpec,
    prec: u32,
    fam: &'a DeformedFamily,
    zeros: Option<std::result::Result<(ZeroSet, Vec<Complex>), String>>,
    matrices: Option<std::result::Result<SpectralMatrix, String>>,
    participants: Option<std::result::Result<Vec<(Participant, Polynomial)>, String>>,
    christoffel: Option<std::result::Result<ChristoffelSet, String>>,
    spectrum: Option<std::result::Result<Vec<Complex>, String>>,
}

fn dep<'b, T>(slot: &'b Option<std::result::Result<T, String>>, what: &str) -> std::result::Result<&'b T, String> {
    match slot {
        Some(Ok(v)) => Ok(v),
        Some(Err(e)) => Err(format!("{what} unavailable: {e}")),
        None => Err(format!("{what} not computed")),
    }
}

impl<'a> Stage<'a> {
    fn tol(&self, s: &str) -> Float {
        parse_tolerance(s, self.prec).expect("validated")
    }

    fn matrix_tol(&self) -> Float {
        match &self.spec.tolerances.matrix {
            Some(s) => self.tol(s),
            None => pow2(self.prec, -(self.prec as i32) / 2),
        }
    }

    fn prepare(&mut self, checks: &[Check]) {
        let n = self.spec.n;
        let prec = self.prec;
        let fam = self.fam;
        if checks.iter().any(|c| c.needs_zeros()) {
            self.zeros = Some(
                (|| -> Result<(ZeroSet, Vec<Complex>)> {
                    let roots = find_roots(&fam.poly(n)?, prec)?;
                    let zs = analyze_zeros(&roots, fam.family(), fam.family().parameters_real(), prec)?;
                    Ok((zs, xi_zeros(fam, prec)?))
                })()
                .map_err(|e| e.to_string()),
            );
            let christoffel = dep(&self.zeros, "zeros")
                .and_then(|(zs, _)| christoffel_numbers(fam, n, zs).map_err(|e| e.to_string()));
            self.christoffel = Some(christoffel);
        }
        if checks.iter().any(|c| c.needs_participants()) {
            self.participants = Some(participant_polys(fam, n).map_err(|e| e.to_string()));
        }
        if checks.iter().any(|c| c.needs_matrices()) {
            let path = self.spec.build_path;
            let m = dep(&self.zeros, "zeros")
                .and_then(|(zs, xz)| build_matrices(fam, n, zs, xz, prec, path, false).map_err(|e| e.to_string()));
            self.spectrum = Some(match &m {
                Ok(sm) => eigen_spectrum(sm).map_err(|e| e.to_string()),
                Err(e) => Err(format!("matrices unavailable: {e}")),
            });
            self.matrices = Some(m);
        }
    }

    fn run(&self, check: Check) -> std::result::Result<(Status, Value), String> {
        let spec = self.spec;
        let fam = self.fam;
        let n = spec.n;
        let prec = self.prec;
        let tols = &spec.tolerances;
        match check {
            Check::Degrees => {
                let ell = fam.spec.ell();
                let xi_expected = fam.spec.index.xi_degree();
                let xi_actual = fam.xi.degree().map_or(-1, |d| d as i64);
                let mut ok = xi_expected == xi_actual;
                let skip: Vec<usize> = match &fam.spec.index {
                    MultiIndex::KreinAdler { d } => d.clone(),
                    _ => vec![],
                };
                let mut polys = vec![];
                for k in (0..=n).filter(|k| !skip.contains(k)) {
                    let actual = fam.poly(k).map_err(|e| e.to_string())?.degree().map_or(-1, |d| d as i64);
                    let expected = ell + k as i64;
                    ok &= actual == expected;
                    polys.push(json!({"n": k, "expected": expected, "actual": actual}));
                }
                let mut details = json!({
                    "ell": ell,
                    "xiDegree": {"expected": xi_expected, "actual": xi_actual},
                    "polyDegrees": polys,
                });
                if !fam.spec.index.is_empty() {
                    let extras = enumerate_extras(&fam.spec, n).map_err(|e| e.to_string())?.len();
                    let parts = crate::mindex::participants(&fam.spec, n).map_err(|e| e.to_string())?.len();
                    if !fam.spec.is_ka() {
                        ok &= extras as i64 == ell;
                    }
                    ok &= parts as i64 == ell + n as i64;
                    details["extras"] = json!(extras);
                    details["participants"] = json!(parts);
                }
                Ok((pass_if(ok), details))
            }
            Check::EigenIdentity => {
                let skip: Vec<usize> = match &fam.spec.index {
                    MultiIndex::KreinAdler { d } => d.clone(),
                    _ => vec![],
                };
                let mut count = 0;
                let mut failed = vec![];
                for k in (0..=n).filter(|k| !skip.contains(k)) {
                    let r = fam.check_eigen_identity(k).map_err(|e| e.to_string())?;
                    count += 1;
                    if !r.passed {
                        failed.push(r.label);
                    }
                }
                Ok((pass_if(failed.is_empty()), json!({"count": count, "failed": failed})))
            }
            Check::BasicIdentity => {
                if fam.spec.index.is_empty() {
                    return Ok((Status::Skipped, json!({"reason": "classical family has no extras"})));
                }
                #[allow(clippy::reversed_empty_ranges)]
                let reps = identity_suite(fam, n, 1..=0).map_err(|e| e.to_string())?;
                let ok = reps.iter().all(|r| r.passed);
                Ok((pass_if(ok), serde_json::to_value(reps).expect("serializable")))
            }
            Check::IdentityInParameters => {
                if fam.spec.index.is_empty() || *fam.family() == Family::Hermite {
                    return Ok((Status::Skipped, json!({"reason": "no free deformation parameters"})));
                }
                let reps = identity_in_parameters(fam.family(), &fam.spec.index, n, 0..=n, spec.samples)
                    .map_err(|e| e.to_string())?;
                let ok = reps.iter().all(|r| r.passed);
                let summary: Vec<Value> = reps
                    .iter()
                    .map(|r| {
                        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.label.as_str()).collect();
                        json!({
                            "family": r.family,
                            "passed": r.passed,
                            "checks": r.checks.len(),
                            "failed": failed,
                            "skipped": r.skipped,
                        })
                    })
                    .collect();
                Ok((pass_if(ok), Value::Array(summary)))
            }
            Check::Zeros => {
                let (zs, xz) = dep(&self.zeros, "zeros")?;
                let p = fam.poly(n).map_err(|e| e.to_string())?;
                let (es, ep) = vieta_errors(&p, &zs.zeros, prec);
                let bound = pow2(prec, -(prec as i32) / 2);
                let mut ok = es < bound && ep < bound;
                // a Krein-Adler P_{D,N} has one node per surviving lower level
                let expected_ordinary = match &fam.spec.index {
                    MultiIndex::KreinAdler { d } => n - d.iter().filter(|&&v| v < n).count(),
                    _ => n,
                };
                if fam.family().parameters_real() {
                    ok &= zs.ordinary_count() == expected_ordinary;
                }
                let mut details = serde_json::to_value(ZeroSetRecord::from(zs)).expect("serializable");
                details["expectedOrdinaryCount"] = json!(expected_ordinary);
                details["vietaSumError"] = json!(sci(&es));
                details["vietaProductError"] = json!(sci(&ep));
                details["xiZeros"] = json!(xz.iter().map(decimal).collect::<Vec<_>>());
                Ok((pass_if(ok), details))
            }
            Check::Matrices => {
                let sm = dep(&self.matrices, "matrices")?;
                let (zs, _) = dep(&self.zeros, "zeros")?;
                let tol = self.matrix_tol();
                let sym = sm.symmetry_defect();
                let mut ok = sym <= tol;
                let mut details = json!({
                    "size": sm.size(),
                    "buildPath": sm.path,
                    "maxEntry": sci(&sm.max_entry()),
                    "symmetryDefect": sci(&sym),
                    "tolerance": sci(&tol),
                });
                if let Some(d) = &sm.discrepancy {
                    ok &= *d <= tol;
                    details["dualPathDiscrepancy"] = json!(sci(d));
                }
                match &zs.pairing {
                    Some(pairing) => {
                        let c = sm.conjugation_defect(pairing);
                        ok &= c <= tol;
                        details["conjugationDefect"] = json!(sci(&c));
                    }
                    None => details["conjugationDefect"] = json!("skipped: complex parameters"),
                }
                if spec.dump_matrices {
                    details["m"] = sm.to_json(30);
                }
                Ok((pass_if(ok), details))
            }
            Check::Orthogonality => {
                let (zs, _) = dep(&self.zeros, "zeros")?;
                let ch = dep(&self.christoffel, "christoffel numbers")?;
                let parts = dep(&self.participants, "participants")?;
                let rep = orthogonality_sums(zs, ch, parts);
                let tol = self.tol(&tols.orthogonality);
                let mut ok = rep.max_off_diagonal < tol;
                let diagonal: Vec<String> = (0..rep.labels.len()).map(|a| sci(&rep.normalized[a][a])).collect();
                let mut details = json!({
                    "participants": rep.labels,
                    "diagonal": diagonal,
                    "maxOffDiagonal": sci(&rep.max_off_diagonal),
                    "tolerance": tols.orthogonality,
                });
                if let Some(pairing) = &zs.pairing {
                    let c = ch.conjugation_defect(pairing);
                    ok &= c <= self.matrix_tol();
                    details["christoffelConjugationDefect"] = json!(sci(&c));
                }
                Ok((pass_if(ok), details))
            }
            Check::Eigenpairs => {
                let sm = dep(&self.matrices, "matrices")?;
                let parts = dep(&self.participants, "participants")?;
                let rep = predicted_eigenpairs_check(sm, fam, n, parts).map_err(|e| e.to_string())?;
                let ok = rep.max_residual < self.tol(&tols.eigen_residual)
                    && rep.max_cross_product < self.tol(&tols.orthogonality);
                let residuals: Vec<ResidualRecord> = rep.residuals.iter().map(ResidualRecord::from).collect();
                Ok((
                    pass_if(ok),
                    json!({
                        "residuals": residuals,
                        "maxResidual": sci(&rep.max_residual),
                        "maxEigenvectorProduct": sci(&rep.max_cross_product),
                        "degeneratePairs": rep.degenerate,
                        "nearDegeneratePairs": rep.near_degenerate,
                        "tolerance": tols.eigen_residual,
                    }),
                ))
            }
            Check::Spectrum => {
                let sm = dep(&self.matrices, "matrices")?;
                let eig = dep(&self.spectrum, "spectrum")?;
                let parts = dep(&self.participants, "participants")?;
                let predicted: Vec<GaussianRational> = parts.iter().map(|(p, _)| p.m_eigenvalue.clone()).collect();
                let mismatch = spectrum_mismatch(eig, &predicted, prec);
                let mut trace = Complex::new(prec);
                for (k, row) in sm.m.iter().enumerate() {
                    trace += &row[k];
                    trace -= &eig[k];
                }
                let trace_defect = cabs(&trace);
                let tol = self.tol(&tols.spectrum);
                let ok = mismatch.as_ref().is_some_and(|m| *m < tol)
                    && trace_defect <= Float::with_val(prec, self.matrix_tol() * sm.max_entry()) * sm.size() as u32;
                let mut sorted = predicted.clone();
                sorted.sort_by(|a, b| {
                    let (x, y) = (a.to_complex(64), b.to_complex(64));
                    x.real().partial_cmp(y.real()).expect("finite").then(x.imag().partial_cmp(y.imag()).expect("finite"))
                });
                Ok((
                    pass_if(ok),
                    json!({
                        "eigenvalues": eig.iter().map(decimal).collect::<Vec<_>>(),
                        "predicted": sorted,
                        "maxMismatch": mismatch.as_ref().map(sci),
                        "traceDefect": sci(&trace_defect),
                        "tolerance": tols.spectrum,
                    }),
                ))
            }
            Check::Basis => {
                let parts = dep(&self.participants, "participants")?;
                let mut polys: Vec<Polynomial> = parts.iter().map(|(_, p)| p.clone()).collect();
                polys.push(fam.poly(n).map_err(|e| e.to_string())?);
                let det = basis_determinant(&polys).map_err(|e| e.to_string())?;
                let last = polys.len() - 1;
                polys[last] = polys[0].clone();
                let control = basis_determinant(&polys).map_err(|e| e.to_string())?;
                Ok((
                    pass_if(!det.is_zero() && control.is_zero()),
                    json!({"size": polys.len(), "determinant": det, "duplicatedRowDeterminant": control}),
                ))
            }
            Check::Quadrature => {
                let (zs, _) = dep(&self.zeros, "zeros")?;
                let ch = dep(&self.christoffel, "christoffel numbers")?;
                let rep = quadrature_moment_check(fam, n, zs, ch).map_err(|e| e.to_string())?;
                let tol = self.tol(&tols.quadrature);
                let mut ok = rep.max_exact_error < tol && rep.control_error > tol;
                let spread = ch.relative_spread();
                let mut details = json!({
                    "momentErrors": rep.errors.iter().map(sci).collect::<Vec<_>>(),
                    "maxExactError": sci(&rep.max_exact_error),
                    "controlError": sci(&rep.control_error),
                    "christoffelSpread": sci(&spread),
                    "tolerance": tols.quadrature,
                });
                if let Some(s) = &tols.christoffel_spread {
                    ok &= spread < self.tol(s);
                    details["christoffelSpreadTolerance"] = json!(s);
                }
                Ok((pass_if(ok), details))
            }
            Check::Diophantine => {
                let parts = dep(&self.participants, "participants")?;
                let eig = dep(&self.spectrum, "spectrum")?;
                let predicted: Vec<Participant> = parts.iter().map(|(p, _)| p.clone()).collect();
                let exact = diophantine(&predicted);
                let defect = integrality_defect(eig, prec);
                let ok = exact && defect < self.tol(&tols.spectrum);
                Ok((
                    pass_if(ok),
                    json!({"predictedIntegral": exact, "integralityDefect": sci(&defect), "tolerance": tols.spectrum}),
                ))
            }
        }
    }
}

/// Runs the requested checks in dependency order. Only an invalid case is
/// an error; every other failure is recorded in the report.
pub fn run_case(spec: &CaseSpec, opts: RunOptions) -> Result<Report> {
    let mspec = spec.validate()?;
    let mut checks = if spec.checks.is_empty() {
        Check::ALL.iter().copied().filter(|c| *c != Check::Quadrature || mspec.index.is_empty()).collect()
    } else {
        spec.checks.clone()
    };
    checks.sort();
    checks.dedup();
    let mut results = vec![];
    match DeformedFamily::new(mspec) {
        Err(e) => {
            for c in &checks {
                results.push(CheckResult {
                    check: *c,
                    status: Status::Error,
                    message: Some(format!("construction failed: {e}")),
                    details: Value::Null,
                    timing_ms: None,
                });
            }
        }
        Ok(fam) => {
            let mut stage = Stage {
                spec,
                prec: spec.precision_bits,
                fam: &fam,
                zeros: None,
                matrices: None,
                participants: None,
                christoffel: None,
                spectrum: None,
            };
            let start = Instant::now();
            stage.prepare(&checks);
            let setup_ms = start.elapsed().as_millis() as u64;
            for (i, c) in checks.iter().enumerate() {
                let t = Instant::now();
                let (status, message, details) = match stage.run(*c) {
                    Ok((s, d)) => (s, None, d),
                    Err(m) => (Status::Error, Some(m), Value::Null),
                };
                let mut ms = t.elapsed().as_millis() as u64;
                if i == 0 {
                    ms += setup_ms;
                }
                results.push(CheckResult {
                    check: *c,
                    status,
                    message,
                    details,
                    timing_ms: opts.timings.then_some(ms),
                });
            }
        }
    }
    results.sort_by_key(|r| matches!(r.status, Status::Pass | Status::Skipped));
    let failures: Vec<Check> =
        results.iter().filter(|r| matches!(r.status, Status::Fail | Status::Error)).map(|r| r.check).collect();
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").to_string(),
        passed: failures.is_empty(),
        failures,
        case: spec.clone(),
        checks: results,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    CsvSummary,
}

/// One row per check: `case,check,status,message`.
pub fn csv_summary(reports: &[Report]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["case", "check", "status", "message"]).expect("in-memory write");
    for r in reports {
        for c in &r.checks {
            let status = serde_json::to_value(c.status).expect("serializable");
            w.write_record([
                r.case.name.as_str(),
                c.check.name().as_str(),
                status.as_str().unwrap_or_default(),
                c.message.as_deref().unwrap_or(""),
            ])
            .expect("in-memory write");
        }
    }
    w.into_inner().expect("in-memory write")
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(report).expect("serializable");
            v.push(b'\n');
            v
        }
        Format::CsvSummary => csv_summary(std::slice::from_ref(report)),
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub schema_version: u32,
    pub version: String,
    pub passed: bool,
    pub failed_cases: Vec<String>,
    pub cases: Vec<Report>,
}

pub fn emit_suite(report: &SuiteReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(report).expect("serializable");
            v.push(b'\n');
            v
        }
        Format::CsvSummary => csv_summary(&report.cases),
    }
}

/// The bundled acceptance manifest.
pub fn suite_manifest() -> Vec<CaseSpec> {
    serde_json::from_str(SUITE_MANIFEST).expect("bundled manifest parses")
}

/// Runs cases concurrently; the output keeps the input order.
pub fn run_suite(cases: &[CaseSpec], opts: RunOptions) -> Result<SuiteReport> {
    let reports: Vec<Report> = cases.par_iter().map(|c| run_case(c, opts)).collect::<Result<_>>()?;
    let mut failed_cases: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.case.name.clone()).collect();
    failed_cases.sort();
    let mut ordered: Vec<Report> = reports;
    ordered.sort_by_key(|r| r.passed);
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").to_string(),
        passed: failed_cases.is_empty(),
        failed_cases,
        cases: ordered,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Mi,
    Ka,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    H,
    L,
    J,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PathArg {
    Direct,
    ClosedForm,
    Both,
}

#[derive(Args, Debug)]
struct CaseArgs {
    #[arg(long, default_value = "case")]
    name: String,
    #[arg(long, value_enum, ignore_case = true)]
    family: FamilyArg,
    /// Exact parameter, e.g. "7/2" or "7/2+1*i".
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    #[arg(long, value_enum, default_value = "mi")]
    mode: ModeArg,
    #[arg(long = "d-i", value_delimiter = ',')]
    d_i: Vec<usize>,
    #[arg(long = "d-ii", value_delimiter = ',')]
    d_ii: Vec<usize>,
    #[arg(long = "d-ka", value_delimiter = ',')]
    d_ka: Vec<usize>,
    #[arg(short = 'n', long = "n")]
    n: usize,
    #[arg(long, env = PRECISION_ENV, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    #[arg(long, value_enum, default_value = "both")]
    path: PathArg,
    #[arg(long, default_value_t = 4)]
    samples: usize,
    #[arg(long)]
    tol_orthogonality: Option<String>,
    #[arg(long)]
    tol_eigen: Option<String>,
    #[arg(long)]
    tol_spectrum: Option<String>,
    #[arg(long)]
    tol_quadrature: Option<String>,
    #[arg(long)]
    tol_matrix: Option<String>,
    #[arg(long)]
    tol_christoffel_spread: Option<String>,
    /// Comma-separated subset of checks; all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    checks: Vec<Check>,
    #[arg(long)]
    dump_matrices: bool,
}

impl CaseArgs {
    fn to_spec(&self) -> Result<CaseSpec> {
        let parse = |s: &Option<String>, what: &str| -> Result<GaussianRational> {
            s.as_deref()
                .ok_or_else(|| Error::InvalidSpec(format!("--{what} is required")))?
                .parse()
        };
        let family = match self.family {
            FamilyArg::H => Family::Hermite,
            FamilyArg::L => Family::laguerre(parse(&self.g, "g")?),
            FamilyArg::J => Family::jacobi(parse(&self.g, "g")?, parse(&self.h, "h")?),
        };
        let index = match self.mode {
            ModeArg::Mi if family == Family::Hermite && self.d_i.is_empty() && self.d_ii.is_empty() => {
                MultiIndex::ka(&[])
            }
            ModeArg::Mi => MultiIndex::mi(&self.d_i, &self.d_ii),
            ModeArg::Ka => MultiIndex::ka(&self.d_ka),
        };
        let mut tolerances = Tolerances::default();
        for (src, dst) in [
            (&self.tol_orthogonality, &mut tolerances.orthogonality),
            (&self.tol_eigen, &mut tolerances.eigen_residual),
            (&self.tol_spectrum, &mut tolerances.spectrum),
            (&self.tol_quadrature, &mut tolerances.quadrature),
        ] {
            if let Some(s) = src {
                *dst = s.clone();
            }
        }
        tolerances.matrix = self.tol_matrix.clone();
        tolerances.christoffel_spread = self.tol_christoffel_spread.clone();
        Ok(CaseSpec {
            name: self.name.clone(),
            family,
            index,
            n: self.n,
            precision_bits: self.precision,
            tolerances,
            build_path: match self.path {
                PathArg::Direct => BuildPath::Direct,
                PathArg::ClosedForm => BuildPath::ClosedForm,
                PathArg::Both => BuildPath::Both,
            },
            samples: self.samples,
            checks: self.checks.clone(),
            dump_matrices: self.dump_matrices,
        })
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Include per-check wall-clock timings (breaks byte-for-byte determinism).
    #[arg(long)]
    timings: bool,
}

#[derive(Parser, Debug)]
#[command(name = "disorth", version, about = "Multi-indexed orthogonal polynomials: construction and discrete orthogonality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print Ξ_D, P_{D,n} for n ≤ N and the extra polynomials.
    Construct {
        #[command(flatten)]
        case: CaseArgs,
    },
    /// Print the zeros of P_{D,N} with pairing and classification.
    Zeros {
        #[command(flatten)]
        case: CaseArgs,
    },
    /// Run checks on a case given by flags.
    Verify {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Print the case as JSON instead of running it.
        #[arg(long)]
        print_spec: bool,
    },
    /// Run cases read from JSON files (an object or an array).
    Report {
        files: Vec<std::path::PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the bundled acceptance manifest.
    Suite {
        #[command(flatten)]
        out: OutputArgs,
        /// Only cases whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Print the manifest instead of running it.
        #[arg(long)]
        list: bool,
    },
}

fn construct_json(spec: &CaseSpec) -> Result<Value> {
    let fam = DeformedFamily::new(spec.validate()?)?;
    let n = spec.n;
    let skip: Vec<usize> = match &spec.index {
        MultiIndex::KreinAdler { d } => d.clone(),
        _ => vec![],
    };
    let mut polys = vec![];
    for k in (0..=n).filter(|k| !skip.contains(k)) {
        let p = fam.poly(k)?;
        polys.push(json!({"n": k, "degree": p.degree(), "poly": p.to_string()}));
    }
    let mut extras = vec![];
    if !fam.spec.index.is_empty() {
        for e in enumerate_extras(&fam.spec, n)? {
            let p = fam.derived(&e.index)?.poly(n)?;
            extras.push(json!({"label": e.label(), "index": e.index, "degree": p.degree(), "poly": p.to_string()}));
        }
    }
    Ok(json!({
        "family": spec.family,
        "index": spec.index,
        "ell": fam.spec.ell(),
        "xi": fam.xi.to_string(),
        "polys": polys,
        "extras": extras,
    }))
}

fn zeros_json(spec: &CaseSpec) -> Result<Value> {
    let fam = DeformedFamily::new(spec.validate()?)?;
    let prec = spec.precision_bits;
    let roots = find_roots(&fam.poly(spec.n)?, prec)?;
    let zs = analyze_zeros(&roots, fam.family(), fam.family().parameters_real(), prec)?;
    let mut v = serde_json::to_value(ZeroSetRecord::from(&zs)).expect("serializable");
    v["xiZeros"] = json!(xi_zeros(&fam, prec)?.iter().map(decimal).collect::<Vec<_>>());
    Ok(v)
}

fn read_specs(files: &[std::path::PathBuf]) -> Result<Vec<CaseSpec>> {
    let mut out = vec![];
    for f in files {
        let text = std::fs::read_to_string(f).map_err(|e| Error::InvalidSpec(format!("{}: {e}", f.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", f.display())))?;
        let parsed = if v.is_array() {
            serde_json::from_value::<Vec<CaseSpec>>(v)
        } else {
            serde_json::from_value::<CaseSpec>(v).map(|c| vec![c])
        };
        out.extend(parsed.map_err(|e| Error::InvalidSpec(format!("{}: {e}", f.display())))?);
    }
    Ok(out)
}

fn write_out(bytes: &[u8]) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(bytes);
    let _ = out.flush();
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(v).expect("serializable");
    b.push(b'\n');
    b
}

/// Entry point; returns the process exit status (0 pass, 1 failed checks,
/// 2 invalid input).
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result: Result<i32> = (|| match cli.command {
        Command::Construct { case } => {
            write_out(&json_bytes(&construct_json(&case.to_spec()?)?));
            Ok(0)
        }
        Command::Zeros { case } => {
            write_out(&json_bytes(&zeros_json(&case.to_spec()?)?));
            Ok(0)
        }
        Command::Verify { case, out, print_spec } => {
            let spec = case.to_spec()?;
            if print_spec {
                write_out(&json_bytes(&serde_json::to_value(&spec).expect("serializable")));
                return Ok(0);
            }
            let report = run_case(&spec, RunOptions { timings: out.timings })?;
            write_out(&emit_report(&report, out.format));
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Report { files, out } => {
            let specs = read_specs(&files)?;
            let opts = RunOptions { timings: out.timings };
            if specs.len() == 1 {
                let report = run_case(&specs[0], opts)?;
                write_out(&emit_report(&report, out.format));
                Ok(if report.passed { 0 } else { 1 })
            } else {
                let suite = run_suite(&specs, opts)?;
                write_out(&emit_suite(&suite, out.format));
                Ok(if suite.passed { 0 } else { 1 })
            }
        }
        Command::Suite { out, filter, list } => {
            let cases: Vec<CaseSpec> = suite_manifest()
                .into_iter()
                .filter(|c| filter.as_deref().is_none_or(|f| c.name.contains(f)))
                .collect();
            if list {
                write_out(&json_bytes(&serde_json::to_value(&cases).expect("serializable")));
                return Ok(0);
            }
            let suite = run_suite(&cases, RunOptions { timings: out.timings })?;
            write_out(&emit_suite(&suite, out.format));
            Ok(if suite.passed { 0 } else { 1 })
        }
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
