//! Acceptance criteria 1-9. Runs without the libtest harness so that each
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use disorth::classical::{energy, virtual_energy, Family, SeedType};
use disorth::deform::{identity_suite, DeformedFamily};
use disorth::exactalg::{GaussianRational, Polynomial};
use disorth::mindex::{
    diophantine, enumerate_extras, krein_adler_condition, predicted_coefficient, Direction, ExtraType, MultiIndex,
    MultiIndexSpec, Participant,
};
use disorth::numroots::{analyze_zeros, cabs, find_roots, pow2, ZeroSet};
use disorth::spectral::{
    basis_determinant, build_matrices, christoffel_numbers, eigen_spectrum, integrality_defect, orthogonality_sums,
    participant_polys, predicted_eigenpairs_check, quadrature_moment_check, sci, spectrum_mismatch, xi_zeros,
    BuildPath, SpectralMatrix,
};
use rug::{Complex, Float};

const PREC: u32 = 256;

fn q(s: &str) -> GaussianRational {
    s.parse().expect("literal")
}

fn flagship_family(g: &str) -> Family {
    Family::laguerre(q(g))
}

fn family(spec: MultiIndexSpec) -> DeformedFamily {
    DeformedFamily::new(spec).expect("construction")
}

fn flagship(g: &str) -> DeformedFamily {
    family(MultiIndexSpec::new(flagship_family(g), MultiIndex::mi(&[1], &[2])).expect("valid"))
}

fn jacobi_case() -> DeformedFamily {
    family(MultiIndexSpec::new(Family::jacobi(q("3"), q("4")), MultiIndex::mi(&[1], &[1])).expect("valid"))
}

fn classical(f: Family) -> DeformedFamily {
    family(MultiIndexSpec::classical(f))
}

fn zeros(fam: &DeformedFamily, n: usize) -> (ZeroSet, Vec<Complex>) {
    let roots = find_roots(&fam.poly(n).expect("P_D,N"), PREC).expect("roots");
    let zs = analyze_zeros(&roots, fam.family(), fam.family().parameters_real(), PREC).expect("zero analysis");
    (zs, xi_zeros(fam, PREC).expect("xi roots"))
}

fn matrices(fam: &DeformedFamily, n: usize, path: BuildPath) -> (ZeroSet, SpectralMatrix) {
    let (zs, xz) = zeros(fam, n);
    let sm = build_matrices(fam, n, &zs, &xz, PREC, path, false).expect("matrices");
    (zs, sm)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let t = start.elapsed();
    if let Some(limit) = limit {
        if t >= limit {
            o.passed = false;
        }
        o.detail = format!("{}; {:.2} s (limit {} s)", o.detail, t.as_secs_f64(), limit.as_secs());
    } else {
        o.detail = format!("{}; {:.2} s", o.detail, t.as_secs_f64());
    }
    o
}

fn criterion_1() -> Outcome {
    timed(Some(Duration::from_secs(30)), || {
        let tol = Float::with_val(PREC, 1e-50);
        let mut ok = true;
        let mut parts = vec![];
        for f in [Family::Hermite, Family::laguerre(q("7/2")), Family::jacobi(q("2"), q("3"))] {
            let fam = classical(f.clone());
            let (zs, _) = zeros(&fam, 6);
            let ch = christoffel_numbers(&fam, 6, &zs).expect("christoffel");
            let polys = participant_polys(&fam, 6).expect("participants");
            let rep = orthogonality_sums(&zs, &ch, &polys);
            ok &= polys.len() == 6 && rep.max_off_diagonal < tol;
            parts.push(format!("{} max S = {}", f.kind(), sci(&rep.max_off_diagonal)));
        }
        outcome(ok, parts.join(", "))
    })
}

fn criterion_2() -> Outcome {
    timed(None, || {
        let fam = flagship("7/2");
        let n = 5;
        let extras = enumerate_extras(&fam.spec, n).expect("extras");
        let a = extras.len() == 4 && fam.spec.ell() == 4;
        let b = fam.xi.degree() == Some(4) && (0..=n).all(|k| fam.poly(k).expect("P").degree() == Some(4 + k));
        let (zs, sm) = matrices(&fam, n, BuildPath::Direct);
        let polys = participant_polys(&fam, n).expect("participants");
        let ch = christoffel_numbers(&fam, n, &zs).expect("christoffel");
        let orth = orthogonality_sums(&zs, &ch, &polys);
        let c = polys.len() == 9 && sm.size() == 9 && orth.max_off_diagonal < Float::with_val(PREC, 1e-50);
        let want: Vec<GaussianRational> = polys.iter().map(|(p, _)| p.m_eigenvalue.clone()).collect();
        let mismatch = spectrum_mismatch(&eigen_spectrum(&sm).expect("spectrum"), &want, PREC);
        let d = mismatch.as_ref().is_some_and(|m| *m < pow2(PREC, -100));
        let rep = predicted_eigenpairs_check(&sm, &fam, n, &polys).expect("eigenpairs");
        let e = rep.max_residual < pow2(PREC, -100);
        outcome(
            a && b && c && d && e,
            format!(
                "(a) #EP = {} (b) degrees {} (c) max S = {} (d) spectrum mismatch = {} (e) max residual = {}",
                extras.len(),
                if b { "ok" } else { "wrong" },
                sci(&orth.max_off_diagonal),
                mismatch.as_ref().map_or("size differs".into(), sci),
                sci(&rep.max_residual)
            ),
        )
    })
}

fn criterion_3() -> Outcome {
    timed(Some(Duration::from_secs(60)), || {
        let mut count = 0;
        let mut ok = true;
        for (fam, n) in [(flagship("7/2"), 5), (jacobi_case(), 3)] {
            for k in 0..=n {
                let r = fam.check_eigen_identity(k).expect("identity");
                ok &= r.residual_zero;
                count += 1;
            }
        }
        outcome(ok, format!("{count} residual polynomials identically zero"))
    })
}

/// `−(1/γ)(𝓔(N) − Ẽ^I(d))(𝓔(N) − Ẽ^II(d′))` with `γ = 2` (L), `8` (J).
fn exchanged_type_three(f: &Family, n: usize, d1: usize, d2: usize) -> GaussianRational {
    let gamma = match f {
        Family::Laguerre { .. } => 2,
        _ => 8,
    };
    let en = energy(f, n);
    let a = &en - &virtual_energy(f, SeedType::I, d1).expect("seed");
    let b = &en - &virtual_energy(f, SeedType::II, d2).expect("seed");
    &(&a * &b) * &GaussianRational::from_ratio(-1, gamma)
}

fn criterion_4() -> Outcome {
    timed(None, || {
        let mut ok = true;
        let mut checked = 0;
        let mut notes = vec![];
        for (fam, n, three) in [(flagship("7/2"), 5usize, -8i64), (jacobi_case(), 3, -32)] {
            for e in enumerate_extras(&fam.spec, n).expect("extras") {
                for dir in [Direction::Forward, Direction::Exchanged] {
                    let r = fam.check_basic_identity(&e, n, dir).expect("basic identity");
                    let predicted = predicted_coefficient(&fam.spec, &e, n, dir).expect("prediction");
                    ok &= r.residual_zero && r.solved_coefficient.as_ref() == Some(&predicted);
                    if e.extra_type == ExtraType::III {
                        let want = match dir {
                            Direction::Forward => GaussianRational::from_int(three),
                            Direction::Exchanged => exchanged_type_three(fam.family(), n, e.removed[0], e.removed[1]),
                        };
                        ok &= r.solved_coefficient.as_ref() == Some(&want);
                        notes.push(format!("{} {} {:?} = {}", fam.family().kind(), e.label(), dir, want));
                    }
                    checked += 1;
                }
            }
        }
        outcome(ok, format!("{checked} identities exact; {}", notes.join(", ")))
    })
}

fn criterion_5() -> Outcome {
    timed(None, || {
        let n = 5;
        let mut ok = krein_adler_condition(&[1, 2]) && !krein_adler_condition(&[2]);
        ok &= MultiIndexSpec::new(Family::Hermite, MultiIndex::ka(&[2])).is_err();
        let mut notes = vec![];
        for f in [Family::Hermite, Family::laguerre(q("7/2")), Family::laguerre(q("13/10"))] {
            let fam = family(MultiIndexSpec::new(f.clone(), MultiIndex::ka(&[1, 2])).expect("valid K-A"));
            let reps = identity_suite(&fam, n, 0..=n).expect("identities");
            ok &= reps.iter().all(|r| r.passed);
            let (_, sm) = matrices(&fam, n, BuildPath::ClosedForm);
            let eig = eigen_spectrum(&sm).expect("spectrum");
            let defect = integrality_defect(&eig, PREC);
            let parts: Vec<Participant> =
                participant_polys(&fam, n).expect("participants").into_iter().map(|(p, _)| p).collect();
            let want: Vec<GaussianRational> = parts.iter().map(|p| p.m_eigenvalue.clone()).collect();
            let mismatch = spectrum_mismatch(&eig, &want, PREC);
            ok &= diophantine(&parts) && defect < pow2(PREC, -100) && mismatch.is_some_and(|m| m < pow2(PREC, -100));
            notes.push(format!("{f}: {} identities, integrality defect {}", reps.len(), sci(&defect)));
        }
        outcome(ok, notes.join("; "))
    })
}

fn criterion_6() -> Outcome {
    timed(None, || {
        let fam = flagship("7/2+1*i");
        let reps = identity_suite(&fam, 5, 0..=5).expect("identities");
        let exact = reps.iter().all(|r| r.passed);
        let (zs, sm) = matrices(&fam, 5, BuildPath::Both);
        let sym = sm.symmetry_defect();
        let ok = exact && zs.pairing.is_none() && sym < pow2(PREC, -128);
        outcome(
            ok,
            format!(
                "{} exact identities, symmetry defect {}, conjugation checks skipped",
                reps.len(),
                sci(&sym)
            ),
        )
    })
}

fn criterion_7() -> Outcome {
    timed(None, || {
        let tol = pow2(PREC, -128);
        let (_, flag) = matrices(&flagship("7/2"), 5, BuildPath::Both);
        let (_, herm) = matrices(&classical(Family::Hermite), 2, BuildPath::Both);
        let d1 = flag.discrepancy.clone().expect("both paths");
        let d2 = herm.discrepancy.clone().expect("both paths");
        let want = [[3, -1], [-1, 3]];
        let mut worst = Float::new(PREC);
        for (a, row) in want.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                worst = worst.max(&cabs(&Complex::with_val(PREC, &herm.m[a][b] - v)));
            }
        }
        let ok = d1 < tol && d2 < tol && worst < Float::with_val(PREC, &tol * herm.max_entry());
        outcome(
            ok,
            format!(
                "flagship discrepancy {}, Hermite N=2 discrepancy {}, |M - [[3,-1],[-1,3]]| = {}",
                sci(&d1),
                sci(&d2),
                sci(&worst)
            ),
        )
    })
}

fn criterion_8() -> Outcome {
    timed(None, || {
        let tol = Float::with_val(PREC, 1e-50);
        let mut ok = true;
        let mut notes = vec![];
        for f in [Family::Hermite, Family::laguerre(q("7/2")), Family::jacobi(q("2"), q("3"))] {
            let fam = classical(f.clone());
            let (zs, _) = zeros(&fam, 4);
            let ch = christoffel_numbers(&fam, 4, &zs).expect("christoffel");
            let r = quadrature_moment_check(&fam, 4, &zs, &ch).expect("quadrature");
            ok &= r.max_exact_error < tol && r.control_error > tol;
            notes.push(format!("{} k<8 err {} k=8 err {}", f.kind(), sci(&r.max_exact_error), sci(&r.control_error)));
        }
        let cheb = classical(Family::jacobi(q("0"), q("0")));
        let (zs, _) = zeros(&cheb, 4);
        let spread = christoffel_numbers(&cheb, 4, &zs).expect("christoffel").relative_spread();
        ok &= spread < tol;
        notes.push(format!("Chebyshev spread {}", sci(&spread)));
        outcome(ok, notes.join(", "))
    })
}

fn criterion_9() -> Outcome {
    timed(None, || {
        let fam = flagship("7/2");
        let mut polys: Vec<Polynomial> =
            participant_polys(&fam, 5).expect("participants").into_iter().map(|(_, p)| p).collect();
        polys.push(fam.poly(5).expect("P_D,5"));
        let det = basis_determinant(&polys).expect("determinant");
        let k = polys.len();
        polys[k - 1] = polys[3].clone();
        let control = basis_determinant(&polys).expect("determinant");
        outcome(
            k == 10 && !det.is_zero() && control.is_zero(),
            format!("{k}x{k} determinant {}, duplicated row gives {}", det, control),
        )
    })
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 classical discrete orthogonality", criterion_1),
        ("2 flagship multi-indexed Laguerre", criterion_2),
        ("3 exact eigen identities", criterion_3),
        ("4 basic equations and coefficients", criterion_4),
        ("5 Krein-Adler suite", criterion_5),
        ("6 complex parameter", criterion_6),
        ("7 dual-path matrix agreement", criterion_7),
        ("8 quadrature", criterion_8),
        ("9 basis determinant", criterion_9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
