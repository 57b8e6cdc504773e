use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{int_div_exact, QPoly};
use super::ring::{Field, Rat, Ring};
use super::QFieldError;

/// Rational function in q in canonical form: gcd(num, den) = 1 and den is
/// an integer polynomial with content 1 and positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QRat {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self, QFieldError> {
        if den.is_zero() {
            return Err(QFieldError::DivisionByZero);
        }
        Ok(Self::canon(num, den))
    }

    fn canon(num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return QRat { num, den: QPoly::one() };
        }
        let (sn, pn) = num.primitive_part();
        let (sd, pd) = den.primitive_part();
        let scale = sn / sd;
        let g = gcd_int(&pn, &pd);
        let (pn, pd) = if g.len() > 1 {
            (
                int_div_exact(&pn, &g).expect("gcd divides numerator"),
                int_div_exact(&pd, &g).expect("gcd divides denominator"),
            )
        } else {
            (pn, pd)
        };
        QRat { num: QPoly::from_bigints(&pn).scale(&scale), den: QPoly::from_bigints(&pd) }
    }

    pub fn from_poly(p: QPoly) -> Self {
        QRat { num: p, den: QPoly::one() }
    }

    pub fn from_rat(r: Rat) -> Self {
        QRat { num: QPoly::constant(r), den: QPoly::one() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rat(Rat::from_integer(v.into()))
    }

    pub fn q() -> Self {
        Self::from_poly(QPoly::q())
    }

    /// q^k for any integer k.
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(QPoly::monomial(<Rat as One>::one(), k as usize))
        } else {
            QRat { num: QPoly::one(), den: QPoly::monomial(<Rat as One>::one(), (-k) as usize) }
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn arith(&self, o: &Self, op: ArithOp) -> Result<Self, QFieldError> {
        match op {
            ArithOp::Add => Ok(self.plus(o)),
            ArithOp::Sub => Ok(self.minus(o)),
            ArithOp::Mul => Ok(self.times(o)),
            ArithOp::Div => self.over(o).ok_or(QFieldError::DivisionByZero),
        }
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat, QFieldError> {
        let d = self.den.eval(x);
        if Zero::is_zero(&d) {
            return Err(QFieldError::Pole(x.to_string()));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Value at q = 0 when finite.
    pub fn at_zero(&self) -> Result<Rat, QFieldError> {
        self.eval(&<Rat as Zero>::zero())
    }

    pub fn parse(s: &str) -> Result<Self, QFieldError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = t.strip_prefix('(') {
            let close = matching_paren(rest).ok_or_else(|| QFieldError::Parse(s.to_string()))?;
            let num = parse_poly(&rest[..close]).ok_or_else(|| QFieldError::Parse(s.to_string()))?;
            let tail = &rest[close + 1..];
            if tail.is_empty() {
                return Ok(Self::from_poly(num));
            }
            let d = tail
                .strip_prefix("/(")
                .and_then(|d| d.strip_suffix(')'))
                .ok_or_else(|| QFieldError::Parse(s.to_string()))?;
            let den = parse_poly(d).ok_or_else(|| QFieldError::Parse(s.to_string()))?;
            return QRat::new(num, den);
        }
        parse_poly(&t).map(Self::from_poly).ok_or_else(|| QFieldError::Parse(s.to_string()))
    }
}

fn gcd_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if b.len() == 1 || a.len() == 1 {
        return vec![BigInt::one()];
    }
    // Monomial denominators are common (Laurent values); handle them directly.
    let mono = |v: &[BigInt]| v[..v.len() - 1].iter().all(|x| x.is_zero());
    if mono(b) || mono(a) {
        let va = a.iter().position(|x| !x.is_zero()).unwrap();
        let vb = b.iter().position(|x| !x.is_zero()).unwrap();
        let k = va.min(vb);
        let mut g = vec![BigInt::zero(); k + 1];
        g[k] = BigInt::one();
        return g;
    }
    QPoly::from_bigints(a)
        .gcd(&QPoly::from_bigints(b))
        .coeffs()
        .iter()
        .map(|r| r.to_integer())
        .collect()
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                if depth == 0 {
                    return Some(i);
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    None
}

/// Grammar: term (('+'|'-') term)*, term = [coef ['*']] ['q' ['^' int]].
pub fn parse_poly(s: &str) -> Option<QPoly> {
    let b = s.as_bytes();
    if b.is_empty() {
        return None;
    }
    let mut i = 0;
    let mut acc = QPoly::zero();
    while i < b.len() {
        let mut sign = 1i64;
        if b[i] == b'+' || b[i] == b'-' {
            if b[i] == b'-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return None;
        }
        let start = i;
        while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'/') {
            i += 1;
        }
        let coef = if i > start {
            let txt = &s[start..i];
            let r = if let Some((p, d)) = txt.split_once('/') {
                let d: BigInt = d.parse().ok()?;
                if Zero::is_zero(&d) {
                    return None;
                }
                Rat::new(p.parse().ok()?, d)
            } else {
                Rat::from_integer(txt.parse().ok()?)
            };
            if i < b.len() && b[i] == b'*' {
                i += 1;
                if i >= b.len() || b[i] != b'q' {
                    return None;
                }
            }
            Some(r)
        } else {
            None
        };
        let mut deg = 0usize;
        if i < b.len() && b[i] == b'q' {
            i += 1;
            deg = 1;
            if i < b.len() && b[i] == b'^' {
                i += 1;
                let ds = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                deg = s[ds..i].parse().ok()?;
            }
        } else if coef.is_none() {
            return None;
        }
        let c = coef.unwrap_or_else(<Rat as One>::one) * Rat::from_integer(sign.into());
        acc = acc.add(&QPoly::monomial(c, deg));
    }
    Some(acc)
}

impl Ring for QRat {
    fn zero() -> Self {
        QRat { num: QPoly::zero(), den: QPoly::one() }
    }
    fn one() -> Self {
        QRat { num: QPoly::one(), den: QPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::canon(self.num.add(&o.num), self.den.clone());
        }
        Self::canon(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return Self::zero();
        }
        if self.den.is_constant() && o.den.is_constant() {
            return QRat { num: self.num.mul(&o.num), den: QPoly::one() };
        }
        Self::canon(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn negated(&self) -> Self {
        QRat { num: self.num.neg(), den: self.den.clone() }
    }
    fn from_rat(r: &Rat) -> Self {
        QRat::from_rat(r.clone())
    }
}

impl Field for QRat {
    fn inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::canon(self.den.clone(), self.num.clone()))
        }
    }
}

/// (z;q)_n with symbolic q.
pub fn q_pochhammer(z: &QRat, n: usize) -> QRat {
    super::ring::pochhammer(z, &QRat::q(), n)
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl FromStr for QRat {
    type Err = QFieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QRat::parse(s)
    }
}

impl Serialize for QRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        QRat::parse(&s).map_err(serde::de::Error::custom)
    }
}
