use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

pub fn rat(p: i64, r: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(r))
}

pub fn int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Commutative ring with unit, as used by the transfer-matrix layer.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_rat(r: &Rat) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rat(&int(v))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn powu(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

pub trait Field: Ring {
    fn inverse(&self) -> Option<Self>;

    fn over(&self, o: &Self) -> Option<Self> {
        o.inverse().map(|i| self.times(&i))
    }

    /// Integer power; `None` for a negative power of zero.
    fn powi(&self, k: i64) -> Option<Self> {
        if k >= 0 {
            Some(self.powu(k as u32))
        } else {
            self.inverse().map(|i| i.powu((-k) as u32))
        }
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

impl Field for Rat {
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// (z;q)_n = prod_{k=0}^{n-1} (1 - q^k z).
pub fn pochhammer<R: Ring>(z: &R, q: &R, n: usize) -> R {
    let mut acc = R::one();
    let mut qk_z = z.clone();
    for _ in 0..n {
        acc = acc.times(&R::one().minus(&qk_z));
        qk_z = qk_z.times(q);
    }
    acc
}

/// Gaussian binomial [b choose a]_q as a ring element (polynomial in q).
pub fn q_binomial<R: Ring>(b: usize, a: usize, q: &R) -> R {
    if a > b {
        return R::zero();
    }
    // Pascal recursion avoids division: [b,a] = [b-1,a-1] + q^a [b-1,a].
    let mut row: Vec<R> = vec![R::one()];
    for bb in 1..=b {
        let mut next = vec![R::one(); bb + 1];
        for aa in 1..bb {
            next[aa] = row[aa - 1].plus(&q.powu(aa as u32).times(&row[aa]));
        }
        row = next;
    }
    row[a].clone()
}
