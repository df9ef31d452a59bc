use disorth::exactalg::{
    determinant, poly_wronskian, wronskian, GaussianRational, Polynomial, QuasiRationalFunction, RationalFunction,
};
use proptest::prelude::*;

fn gr() -> impl Strategy<Value = GaussianRational> {
    (-20i64..20, 1i64..6, -3i64..4).prop_map(|(a, b, c)| {
        &GaussianRational::from_ratio(a, b) + &(&GaussianRational::i() * &GaussianRational::from_int(c))
    })
}

fn poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(gr(), 1..=max_deg + 1).prop_map(Polynomial::new)
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in poly(4), b in poly(4), c in poly(3)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz_rule(a in poly(5), b in poly(5)) {
        let lhs = (&a * &b).derivative();
        let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_round_trip(a in poly(4), d in nonzero_poly(3)) {
        let prod = &a * &d;
        prop_assert_eq!(prod.exact_divide(&d).unwrap(), a.clone());
        let (q, r) = (&prod + &Polynomial::one()).div_rem(&d).unwrap();
        prop_assert_eq!(&(&q * &d) + &r, &prod + &Polynomial::one());
        prop_assert!(r.is_zero() || r.degree() < d.degree());
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(3), b in nonzero_poly(3), c in nonzero_poly(2)) {
        let g = Polynomial::gcd(&(&a * &c), &(&b * &c));
        prop_assert!((&a * &c).exact_divide(&g).is_ok());
        prop_assert!((&b * &c).exact_divide(&g).is_ok());
        prop_assert!(g.degree() >= c.degree());
    }

    #[test]
    fn rational_functions_reduce(a in nonzero_poly(3), b in nonzero_poly(3), c in nonzero_poly(2)) {
        let f = RationalFunction::new(&a * &c, &b * &c).unwrap();
        let g = RationalFunction::new(a.clone(), b.clone()).unwrap();
        prop_assert_eq!(&f, &g);
        prop_assert_eq!(f.mul(&g.inv().unwrap()), RationalFunction::one());
        // quotient rule against the definition
        let d = f.derivative();
        let num = &(&a.derivative() * &b) - &(&a * &b.derivative());
        prop_assert_eq!(d, RationalFunction::new(num, &b * &b).unwrap());
    }

    #[test]
    fn wronskian_is_alternating(ps in prop::collection::vec(poly(4), 3)) {
        let w = poly_wronskian(&ps).unwrap();
        let swapped = poly_wronskian(&[ps[1].clone(), ps[0].clone(), ps[2].clone()]).unwrap();
        prop_assert_eq!(&w + &swapped, Polynomial::zero());
        let dup = poly_wronskian(&[ps[0].clone(), ps[1].clone(), ps[0].clone()]).unwrap();
        prop_assert!(dup.is_zero());
    }

    #[test]
    fn wronskian_is_multilinear(ps in prop::collection::vec(poly(3), 2), q in poly(3), c in gr()) {
        let mixed = &ps[0].scale(&c) + &q;
        let lhs = poly_wronskian(&[mixed, ps[1].clone()]).unwrap();
        let rhs = &poly_wronskian(&ps).unwrap().scale(&c) + &poly_wronskian(&[q, ps[1].clone()]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wronskian_scales_with_common_factor(ps in prop::collection::vec(poly(3), 2), f in nonzero_poly(2)) {
        // W[f p, f q] = f² W[p, q]
        let fp: Vec<Polynomial> = ps.iter().map(|p| &f * p).collect();
        prop_assert_eq!(poly_wronskian(&fp).unwrap(), &(&f * &f) * &poly_wronskian(&ps).unwrap());
    }

    #[test]
    fn quasi_rational_derivative_matches_polynomial(p in poly(5)) {
        let q = QuasiRationalFunction::from_poly(p.clone()).derivative();
        prop_assert!(q.has_unit_prefactor());
        prop_assert_eq!(q.rat.to_polynomial().unwrap(), p.derivative());
        let w = wronskian(&[QuasiRationalFunction::from_poly(p.clone()), QuasiRationalFunction::from_poly(Polynomial::one())]).unwrap();
        prop_assert_eq!(w.rat.to_polynomial().unwrap(), -&p.derivative());
    }

    #[test]
    fn determinant_of_transpose(m in prop::collection::vec(prop::collection::vec(gr(), 4), 4)) {
        let t: Vec<Vec<GaussianRational>> = (0..4).map(|j| (0..4).map(|i| m[i][j].clone()).collect()).collect();
        prop_assert_eq!(determinant(&m), determinant(&t));
        prop_assert_eq!(determinant(&m), disorth::exactalg::scalar_determinant(&m));
    }

    #[test]
    fn gaussian_rational_strings_round_trip(a in gr()) {
        let s = a.to_string();
        prop_assert_eq!(s.parse::<GaussianRational>().unwrap(), a);
    }
}
