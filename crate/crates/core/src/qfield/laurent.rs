
use super::poly::QPoly;
use super::qrat::QRat;
use super::ring::{Rat, Ring};

/// Laurent polynomial q^low * p(q) with p(0) != 0 (or p = 0, low = 0).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LPoly {
    low: i64,
    p: QPoly,
}

impl LPoly {
    pub fn new(low: i64, p: QPoly) -> Self {
        match p.valuation() {
            None => LPoly::default(),
            Some(v) => LPoly { low: low + v as i64, p: p.unshift(v) },
        }
    }

    /// c * q^k.
    pub fn monomial(c: Rat, k: i64) -> Self {
        Self::new(k, QPoly::constant(c))
    }

    pub fn q_pow(k: i64) -> Self {
        Self::monomial(Rat::one(), k)
    }

    pub fn to_qrat(&self) -> QRat {
        if self.low >= 0 {
            QRat::from_poly(self.p.shift(self.low as usize))
        } else {
            QRat::new(self.p.clone(), QPoly::monomial(Rat::one(), (-self.low) as usize))
                .expect("nonzero monomial denominator")
        }
    }

    fn align(&self, o: &Self) -> (i64, QPoly, QPoly) {
        let low = self.low.min(o.low);
        (low, self.p.shift((self.low - low) as usize), o.p.shift((o.low - low) as usize))
    }
}

impl Ring for LPoly {
    fn zero() -> Self {
        LPoly::default()
    }
    fn one() -> Self {
        LPoly { low: 0, p: QPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.p.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (low, a, b) = self.align(o);
        LPoly::new(low, a.add(&b))
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return LPoly::default();
        }
        LPoly { low: self.low + o.low, p: self.p.mul(&o.p) }
    }
    fn negated(&self) -> Self {
        LPoly { low: self.low, p: self.p.neg() }
    }
    fn from_rat(r: &Rat) -> Self {
        LPoly::new(0, QPoly::constant(r.clone()))
    }
}
