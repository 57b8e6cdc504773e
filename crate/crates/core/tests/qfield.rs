use llt_core::qfield::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn qr(s: &str) -> QRat {
    QRat::parse(s).unwrap()
}

fn poly(c: &[i64]) -> QRat {
    QRat::from_poly(QPoly::from_ints(c))
}

#[test]
fn complementary_level_one_sum() {
    let a = qr("(1)/(1+q)");
    let b = qr("(q)/(1+q)");
    assert_eq!(a.arith(&b, ArithOp::Add).unwrap(), QRat::one());
}

#[test]
fn ratio_of_figure_nodes() {
    let a = qr("(q)/(1+4*q+6*q^2+4*q^3+q^4)");
    let b = qr("(1)/(1+q)");
    let r = a.arith(&b, ArithOp::Div).unwrap();
    assert_eq!(r.to_string(), "(q)/(1+3*q+3*q^2+q^3)");
}

#[test]
fn zero_absorbs() {
    let a = qr("(3+q^2)/(1-q)");
    assert!(a.times(&QRat::zero()).is_zero());
    assert_eq!(a.times(&QRat::zero()).to_string(), "(0)/(1)");
}

#[test]
fn division_by_zero_is_an_error() {
    let a = qr("(1)/(1+q)");
    assert_eq!(a.arith(&QRat::zero(), ArithOp::Div), Err(QFieldError::DivisionByZero));
    assert!(QRat::parse("(1)/(0)").is_err());
}

#[test]
fn evaluation() {
    assert_eq!(qr("(1)/(1+q)").eval(&int(1)).unwrap(), rat(1, 2));
    assert_eq!(qr("(q)/(1+q)").eval(&int(0)).unwrap(), int(0));
    // (q-1)^2 / q^3 at q = 2
    let f = poly(&[1, -2, 1]).over(&QRat::q_pow(3)).unwrap();
    assert_eq!(f.eval(&int(2)).unwrap(), rat(1, 8));
    assert!(matches!(qr("(1)/(1-q)").eval(&int(1)), Err(QFieldError::Pole(_))));
}

#[test]
fn pochhammer_examples() {
    assert!(q_pochhammer(&QRat::one(), 1).is_zero());
    let want = poly(&[1, -1]).times(&poly(&[1, 0, -1]));
    assert_eq!(q_pochhammer(&QRat::q(), 2), want);
    assert_eq!(q_pochhammer(&QRat::zero(), 5), QRat::one());
    assert_eq!(q_pochhammer(&QRat::q(), 0), QRat::one());
}

#[test]
fn canonical_denominator_convention() {
    // 2/(2+2q) = 1/(1+q); (1/2)/(-3q) = (-1/6)/(q)
    assert_eq!(qr("(2)/(2+2*q)").to_string(), "(1)/(1+q)");
    assert_eq!(qr("(1/2)/(-3*q)").to_string(), "(-1/6)/(q)");
    assert_eq!(qr("(q^2-1)/(q-1)").to_string(), "(1+q)/(1)");
}

#[test]
fn q_binomial_small() {
    let q = QRat::q();
    assert_eq!(q_binomial(4, 2, &q), poly(&[1, 1, 2, 1, 1]));
    assert_eq!(q_binomial(3, 0, &q), QRat::one());
    assert!(q_binomial(2, 3, &q).is_zero());
}

#[test]
fn laurent_roundtrip() {
    let a = LPoly::q_pow(-2).plus(&LPoly::from_i64(3));
    let b = LPoly::q_pow(2);
    assert_eq!(a.times(&b).to_qrat(), poly(&[1, 0, 3]));
    assert_eq!(a.to_qrat().to_string(), "(1+3*q^2)/(q^2)");
    assert!(a.minus(&a).is_zero());
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> QPoly {
    QPoly::from_coeffs((0..=deg).map(|_| random_rat(rng, 20)).collect())
}

fn random_qrat(rng: &mut ChaCha8Rng) -> QRat {
    use rand::Rng;
    let mut num = QPoly::constant(int(1));
    let mut den = QPoly::constant(int(1));
    let k = rng.random_range(0..3);
    let shared = random_poly(rng, k);
    for _ in 0..rng.random_range(1..3) {
        let k = rng.random_range(0..3);
        num = num.mul(&random_poly(rng, k));
    }
    for _ in 0..rng.random_range(1..3) {
        let k = rng.random_range(0..3);
        den = den.mul(&random_poly(rng, k));
    }
    if den.is_zero() || shared.is_zero() {
        den = QPoly::constant(int(1));
    }
    QRat::new(num.mul(&shared), den.mul(&shared)).unwrap_or_else(|_| QRat::one())
}

#[test]
fn canonicalization_idempotent_on_random_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let a = random_qrat(&mut rng);
        let again = QRat::new(a.num().clone(), a.den().clone()).unwrap();
        assert_eq!(a, again);
        assert_eq!(QRat::parse(&a.to_string()).unwrap(), a);
        let g = a.num().gcd(a.den());
        assert!(g.is_constant());
        assert!(a.den().leading().unwrap() > &int(0));
    }
}

#[test]
fn distributivity_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 200 {
        let (a, b, c) = (random_qrat(&mut rng), random_qrat(&mut rng), random_qrat(&mut rng));
        let q0 = random_rat(&mut rng, 50);
        let lhs = a.plus(&b).times(&c).eval(&q0);
        let parts = a.times(&c).eval(&q0).and_then(|x| b.times(&c).eval(&q0).map(|y| x + y));
        if let (Ok(l), Ok(r)) = (lhs, parts) {
            assert_eq!(l, r);
            checked += 1;
        }
    }
}

#[test]
fn pochhammer_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let z = random_qrat(&mut rng);
        for n in 0..=8usize {
            let lhs = q_pochhammer(&z, n + 1);
            let rhs = q_pochhammer(&z, n).times(&QRat::one().minus(&QRat::q_pow(n as i64).times(&z)));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn parse_rat_forms() {
    assert_eq!(parse_rat("1/2"), Some(rat(1, 2)));
    assert_eq!(parse_rat("0.25"), Some(rat(1, 4)));
    assert_eq!(parse_rat("-3"), Some(int(-3)));
    assert_eq!(parse_rat("1/0"), None);
}

proptest! {
    #[test]
    fn display_parse_roundtrip(num in proptest::collection::vec(-30i64..30, 0..6),
                               den in proptest::collection::vec(-30i64..30, 1..5)) {
        let d = QPoly::from_ints(&den);
        prop_assume!(!d.is_zero());
        let a = QRat::new(QPoly::from_ints(&num), d).unwrap();
        let s = a.to_string();
        let b = QRat::parse(&s).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(s, b.to_string());
    }

    #[test]
    fn field_inverse(num in proptest::collection::vec(-9i64..9, 1..5),
                     den in proptest::collection::vec(-9i64..9, 1..5)) {
        let n = QPoly::from_ints(&num);
        let d = QPoly::from_ints(&den);
        prop_assume!(!n.is_zero() && !d.is_zero());
        let a = QRat::new(n, d).unwrap();
        prop_assert_eq!(a.times(&a.inverse().unwrap()), QRat::one());
        prop_assert!(a.minus(&a).is_zero());
    }
}
