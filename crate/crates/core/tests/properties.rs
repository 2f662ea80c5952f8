use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

use ladderkit::coeff::{rat, Qi2, Scalar, ScalarSum, UnitMonomial, UnitValues};
use ladderkit::fock::to_matrix;
use ladderkit::parser::{lower, parse, Ast, Symbol};
use ladderkit::pt::ladder_commutator;
use ladderkit::random::random_hermitian;
use ladderkit::{Expansion, Monomial, OperatorPoly, OperatorSeries};
use rand::SeedableRng;

fn small_rational() -> impl Strategy<Value = num_rational::BigRational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn qi2() -> impl Strategy<Value = Qi2> {
    (small_rational(), small_rational(), small_rational(), small_rational())
        .prop_map(|(a, b, c, d)| Qi2::new(a, b, c, d))
}

fn units() -> impl Strategy<Value = UnitMonomial> {
    (-3i32..=3, -3i32..=3, -3i32..=3).prop_map(|(h, m, w)| UnitMonomial::new(h, m, w))
}

fn operator(max_deg: u32) -> impl Strategy<Value = OperatorPoly> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, qi2(), units()), 0..4).prop_map(|terms| {
        let mut x = OperatorPoly::zero();
        for (j, k, c, u) in terms {
            x.add_term(Monomial::new(j, k), &ScalarSum::from(Scalar::new(c, u)));
        }
        x
    })
}

fn dimensionless(max_deg: u32) -> impl Strategy<Value = OperatorPoly> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, qi2()), 0..4).prop_map(|terms| {
        let mut x = OperatorPoly::zero();
        for (j, k, c) in terms {
            x.add_term(Monomial::new(j, k), &ScalarSum::from(Scalar::new(c, UnitMonomial::ONE)));
        }
        x
    })
}

fn ast() -> impl Strategy<Value = Ast> {
    let leaf = prop_oneof![
        (0u32..20).prop_map(|n| Ast::Int(BigInt::from(n))),
        (1u32..9, 2u32..9).prop_map(|(p, q)| Ast::Rational(BigInt::from(p), BigInt::from(q))),
        prop::sample::select(Symbol::ALL.to_vec()).prop_map(Ast::Symbol),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Ast::Sum),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Ast::Product),
            (inner.clone(), 0u32..3).prop_map(|(b, e)| Ast::Power(Box::new(b), e)),
            inner.prop_map(|x| Ast::Neg(Box::new(x))),
        ]
    })
}

fn close(x: Complex64, y: Complex64) -> bool {
    (x - y).norm() <= 1e-9 * (1.0 + x.norm().max(y.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(x in qi2(), y in qi2(), z in qi2()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &Qi2::zero(), x.clone());
        prop_assert_eq!(&x * &Qi2::one(), x.clone());
        prop_assert_eq!(&x - &x, Qi2::zero());
    }

    #[test]
    fn conjugation_is_an_automorphism(x in qi2(), y in qi2()) {
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
        prop_assert_eq!(x.conj().conj(), x.clone());
    }

    #[test]
    fn inverse(x in qi2()) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!(&x * &x.inv().unwrap(), Qi2::one());
    }

    #[test]
    fn float_homomorphism(factors in prop::collection::vec(
        (-100i64..=100, 1i64..=100, -100i64..=100, 1i64..=100), 1..=8)) {
        let xs: Vec<Qi2> = factors
            .iter()
            .map(|&(a, b, c, d)| Qi2::new(rat(a, b), rat(c, d), rat(d, b), rat(-a, d)))
            .collect();
        let exact = xs.iter().fold(Qi2::one(), |acc, x| &acc * x).to_complex();
        let float = xs.iter().fold(Complex64::new(1.0, 0.0), |acc, x| acc * x.to_complex());
        prop_assert!((exact - float).norm() <= 1e-10 * exact.norm().max(1.0), "{exact} vs {float}");
    }

    #[test]
    fn product_associative(x in operator(2), y in operator(2), z in operator(2)) {
        prop_assert_eq!(
            x.normal_order_product(&y).normal_order_product(&z),
            x.normal_order_product(&y.normal_order_product(&z))
        );
    }

    #[test]
    fn product_bilinear(x in operator(2), y in operator(2), z in operator(2), c in qi2()) {
        let s = ScalarSum::from(Scalar::new(c, UnitMonomial::ONE));
        prop_assert_eq!(x.normal_order_product(&(&y + &z)), &x.normal_order_product(&y) + &x.normal_order_product(&z));
        prop_assert_eq!((&x + &y).normal_order_product(&z), &x.normal_order_product(&z) + &y.normal_order_product(&z));
        prop_assert_eq!(x.scale(&s).normal_order_product(&y), x.normal_order_product(&y).scale(&s));
    }

    #[test]
    fn dagger_reverses_products(x in operator(3), y in operator(3)) {
        prop_assert_eq!(x.normal_order_product(&y).dagger(), y.dagger().normal_order_product(&x.dagger()));
        prop_assert_eq!(x.dagger().dagger(), x.clone());
    }

    #[test]
    fn bar_and_check(x in operator(4)) {
        prop_assert_eq!(x.bar().dagger(), -&x.dagger().bar());
        prop_assert!(x.bar().check().is_zero());
        prop_assert_eq!(x.check().check(), x.check());
        // [N, V̄] = V̌ − V
        prop_assert_eq!(OperatorPoly::number().commutator(&x.bar()), &x.check() - &x);
        let h = &x + &x.dagger();
        prop_assert!(h.check().is_hermitian());
    }

    #[test]
    fn matrix_homomorphism(x in dimensionless(2), y in dimensionless(2)) {
        let dim = 14;
        let units = UnitValues { hbar: 1.3, mass: 0.8, omega: 1.7 };
        let g = 4;
        let lhs = to_matrix(&x.normal_order_product(&y), dim, &units).unwrap().block(dim - 2 * g);
        let xm = to_matrix(&x, dim, &units).unwrap();
        let ym = to_matrix(&y, dim, &units).unwrap();
        let rhs = (&xm * &ym).block(dim - 2 * g);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn scalar_evaluation_is_multiplicative(x in qi2(), ux in units(), y in qi2(), uy in units()) {
        let u = UnitValues { hbar: 1.3, mass: 0.8, omega: 1.7 };
        let a = Scalar::new(x, ux);
        let b = Scalar::new(y, uy);
        prop_assert!(close((&a * &b).to_complex(&u), a.to_complex(&u) * b.to_complex(&u)));
    }

    #[test]
    fn parser_round_trip(tree in ast()) {
        let text = tree.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &tree, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn lowering_is_a_homomorphism(x in ast(), y in ast()) {
        let (lx, ly) = (lower(&x), lower(&y));
        prop_assert_eq!(lower(&Ast::Sum(vec![x.clone(), y.clone()])), &lx + &ly);
        prop_assert_eq!(lower(&Ast::Product(vec![x.clone(), y.clone()])), lx.normal_order_product(&ly));
        prop_assert_eq!(lower(&Ast::Neg(Box::new(x))), -&lx);
    }

    #[test]
    fn symmetrized_monomials_are_hermitian(j in 0u32..4, k in 0u32..4) {
        let q = OperatorPoly::position().pow(j);
        let p = OperatorPoly::momentum().pow(k);
        prop_assert!((&q.normal_order_product(&p) + &p.normal_order_product(&q)).is_hermitian());
        let i = OperatorPoly::scalar(Scalar::new(Qi2::i(), UnitMonomial::ONE));
        prop_assert!(i.normal_order_product(&q.commutator(&p)).is_hermitian());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// With unit-norm perturbed states the corrected ladder operators
    /// satisfy the canonical commutator through the truncation order, so
    /// any operator can be rewritten in them.
    #[test]
    fn unit_norm_ladder_is_canonical(seed in any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let v = random_hermitian(&mut rng, 3, 2);
        let order = 2;
        let ex = Expansion::new(&v, order).unwrap();
        let comm = ladder_commutator(&ex.unit_norm_alphas());
        prop_assert_eq!(comm, OperatorSeries::constant(OperatorPoly::identity(), order));
        let w = ex.unit_norm_frame();
        prop_assert_eq!(&w.dagger() * &w, OperatorSeries::constant(OperatorPoly::identity(), order));
    }
}
