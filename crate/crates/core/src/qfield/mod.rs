//! Exact scalars: rationals, polynomials and rational functions in q.

mod laurent;
mod poly;
mod qrat;
mod ring;
mod series;

pub use laurent::LPoly;
pub use poly::QPoly;
pub use qrat::{parse_poly, q_pochhammer, ArithOp, QRat};
pub use ring::{int, pochhammer, q_binomial, rat, Field, Rat, Ring};
pub use series::{MPoly, TSeries};

use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QFieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = {0}")]
    Pole(String),
    #[error("cannot parse rational function: {0:?}")]
    Parse(String),
}

/// Random rational p/r with |p|, |r| <= bound and r != 0.
pub fn random_rat<G: Rng + ?Sized>(rng: &mut G, bound: i64) -> Rat {
    let p = rng.random_range(-bound..=bound);
    let mut r = 0;
    while r == 0 {
        r = rng.random_range(-bound..=bound);
    }
    rat(p, r)
}

/// Random nonzero rational avoiding the listed values.
pub fn random_rat_avoiding<G: Rng + ?Sized>(rng: &mut G, bound: i64, avoid: &[Rat]) -> Rat {
    loop {
        let x = random_rat(rng, bound);
        if !Ring::is_zero(&x) && !avoid.contains(&x) {
            return x;
        }
    }
}

/// Parses "p", "p/r" or a finite decimal such as "0.25" into an exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, r)) = s.split_once('/') {
        let p: num_bigint::BigInt = p.trim().parse().ok()?;
        let r: num_bigint::BigInt = r.trim().parse().ok()?;
        if num_traits::Zero::is_zero(&r) {
            return None;
        }
        return Some(Rat::new(p, r));
    }
    if let Some((a, b)) = s.split_once('.') {
        let neg = a.starts_with('-');
        let digits = format!("{}{}", a.trim_start_matches('-'), b);
        let n: num_bigint::BigInt = digits.parse().ok()?;
        let d = num_bigint::BigInt::from(10u32).pow(b.len() as u32);
        let r = Rat::new(n, d);
        return Some(if neg { -r } else { r });
    }
    Some(Rat::from_integer(s.parse().ok()?))
}
