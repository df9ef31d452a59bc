use disorth::classical::Family;
use disorth::deform::DeformedFamily;
use disorth::error::Error;
use disorth::exactalg::GaussianRational;
use disorth::mindex::{MultiIndex, MultiIndexSpec};
use disorth::numroots::{analyze_zeros, find_roots, pow2};
use disorth::spectral::{
    build_matrices, christoffel_numbers, eigen_spectrum, participant_polys, predicted_eigenpairs_check,
    quadrature_moment_check, spectrum_mismatch, xi_zeros, BuildPath,
};
use proptest::prelude::*;

const PREC: u32 = 192;

fn rational(lo: i64, hi: i64) -> impl Strategy<Value = GaussianRational> {
    (lo * 6..hi * 6).prop_map(|k| GaussianRational::from_ratio(k, 6))
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Hermite),
        rational(1, 6).prop_map(Family::laguerre),
        (rational(1, 5), rational(1, 5)).prop_map(|(g, h)| Family::jacobi(g, h)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Gauss quadrature at the classical zeros reproduces the moments up to
    /// degree 2N−1.
    #[test]
    fn classical_quadrature(family in family(), n in 1usize..6) {
        let fam = DeformedFamily::new(MultiIndexSpec::classical(family)).unwrap();
        let roots = find_roots(&fam.poly(n).unwrap(), PREC).unwrap();
        let zs = analyze_zeros(&roots, fam.family(), true, PREC).unwrap();
        prop_assert_eq!(zs.ordinary_count(), n);
        let ch = christoffel_numbers(&fam, n, &zs).unwrap();
        let r = quadrature_moment_check(&fam, n, &zs, &ch).unwrap();
        prop_assert!(r.max_exact_error < pow2(PREC, -120));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Degrees of Ξ_D and P_{D,n} follow the offset ℓ_D.
    #[test]
    fn degree_offsets(g in rational(1, 7), d1 in prop::collection::btree_set(1usize..4, 0..3),
                      d2 in prop::collection::btree_set(1usize..6, 0..3), n in 0usize..3) {
        let d1: Vec<usize> = d1.into_iter().collect();
        let d2: Vec<usize> = d2.into_iter().collect();
        prop_assume!(!d1.is_empty() || !d2.is_empty());
        let index = MultiIndex::mi(&d1, &d2);
        let spec = MultiIndexSpec::new(Family::laguerre(g.clone()), index.clone()).unwrap();
        // α = g − 1/2 a positive integer turns the type II seed of degree
        // v = n + α into the n-th eigenpolynomial, so P_{D,n} vanishes.
        let alpha = &g - &GaussianRational::from_ratio(1, 2);
        let collides = d2.iter().any(|&v| v > n && alpha == GaussianRational::from_int((v - n) as i64));
        match DeformedFamily::new(spec) {
            Ok(fam) => {
                prop_assert_eq!(fam.xi.degree().unwrap() as i64, index.ell());
                match fam.poly(n) {
                    Ok(p) => {
                        prop_assert!(!collides);
                        prop_assert_eq!(p.degree().unwrap() as i64, index.ell() + n as i64);
                    }
                    Err(Error::DegenerateParameters(_)) => prop_assert!(collides),
                    Err(e) => prop_assert!(false, "{e}"),
                }
            }
            Err(Error::DegenerateParameters(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// For multi-indexed Laguerre families the matrix M is symmetric, its
    /// predicted eigenpairs hold, both square-root branches agree and the
    /// spectrum is the predicted multiset.
    #[test]
    fn deformed_spectra(g in rational(4, 9), n in 2usize..4) {
        let spec = MultiIndexSpec::new(Family::laguerre(g), MultiIndex::mi(&[1], &[1])).unwrap();
        let fam = DeformedFamily::new(spec).unwrap();
        let roots = find_roots(&fam.poly(n).unwrap(), PREC).unwrap();
        let zs = analyze_zeros(&roots, fam.family(), true, PREC).unwrap();
        prop_assert_eq!(zs.ordinary_count(), n);
        let xz = xi_zeros(&fam, PREC).unwrap();
        let polys = participant_polys(&fam, n).unwrap();
        let tol = pow2(PREC, -80);
        for flip in [false, true] {
            let sm = build_matrices(&fam, n, &zs, &xz, PREC, BuildPath::Both, flip).unwrap();
            prop_assert!(sm.discrepancy.clone().unwrap() < tol);
            prop_assert!(sm.symmetry_defect() < tol);
            let rep = predicted_eigenpairs_check(&sm, &fam, n, &polys).unwrap();
            prop_assert!(rep.max_residual < tol);
            let want: Vec<GaussianRational> = polys.iter().map(|(p, _)| p.m_eigenvalue.clone()).collect();
            let got = eigen_spectrum(&sm).unwrap();
            prop_assert!(spectrum_mismatch(&got, &want, PREC).unwrap() < pow2(PREC, -60));
        }
    }
}
