use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ring::Rat;

/// Dense univariate polynomial in q over the rationals, ascending coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QPoly {
    c: Vec<Rat>,
}

impl QPoly {
    pub fn from_coeffs(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| Rat::from_integer(x.into())).collect())
    }

    pub fn constant(r: Rat) -> Self {
        Self::from_coeffs(vec![r])
    }

    pub fn monomial(r: Rat, k: usize) -> Self {
        if r.is_zero() {
            return QPoly::default();
        }
        let mut c = vec![<Rat as Zero>::zero(); k + 1];
        c[k] = r;
        QPoly { c }
    }

    pub fn q() -> Self {
        Self::monomial(<Rat as One>::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.c.last()
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.c.get(k).cloned().unwrap_or_else(<Rat as Zero>::zero)
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = <Rat as Zero>::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return QPoly::default();
        }
        QPoly { c: self.c.iter().map(|a| a * r).collect() }
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.c.is_empty() || k == 0 {
            return self.clone();
        }
        let mut c = vec![<Rat as Zero>::zero(); k];
        c.extend(self.c.iter().cloned());
        QPoly { c }
    }

    /// Divide by q^k, assuming the low coefficients vanish.
    pub fn unshift(&self, k: usize) -> Self {
        QPoly::from_coeffs(self.c.iter().skip(k).cloned().collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(c)
    }

    pub fn neg(&self) -> Self {
        QPoly { c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return QPoly::default();
        }
        let mut c = vec![<Rat as Zero>::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    pub fn pow(&self, k: u32) -> Self {
        super::ring::Ring::powu(self, k)
    }

    /// Euclidean division over the rationals. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.c[dd].clone();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (QPoly::default(), self.clone());
        }
        let mut quo = vec![<Rat as Zero>::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let t = &r[k + dd] / &lc;
            if !t.is_zero() {
                for j in 0..=dd {
                    let v = &t * &d.c[j];
                    r[k + j] -= v;
                }
                quo[k] = t;
            }
        }
        r.truncate(dd);
        (Self::from_coeffs(quo), Self::from_coeffs(r))
    }

    /// Splits into (scale, primitive integer polynomial with positive leading coefficient).
    pub fn primitive_part(&self) -> (Rat, Vec<BigInt>) {
        if self.c.is_empty() {
            return (<Rat as Zero>::zero(), Vec::new());
        }
        let mut l = BigInt::one();
        for a in &self.c {
            l = l.lcm(a.denom());
        }
        let mut ints: Vec<BigInt> = self.c.iter().map(|a| (a * &l).to_integer()).collect();
        let mut g = BigInt::zero();
        for a in &ints {
            g = g.gcd(a);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        for a in ints.iter_mut() {
            *a = &*a / &g;
        }
        (Rat::new(g, l), ints)
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        Self::from_coeffs(v.iter().map(|a| Rat::from_integer(a.clone())).collect())
    }

    /// Monic-free gcd: primitive integer polynomial with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.c.is_empty() {
            return Self::from_bigints(&o.primitive_part().1);
        }
        if o.c.is_empty() {
            return Self::from_bigints(&self.primitive_part().1);
        }
        let a = self.primitive_part().1;
        let b = o.primitive_part().1;
        Self::from_bigints(&int_gcd(a, b))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// All coefficients are nonnegative integers.
    pub fn in_n_q(&self) -> bool {
        self.c.iter().all(|a| a.is_integer() && !a.is_negative())
    }
}

fn int_trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn int_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    int_trim(&mut v);
    if v.is_empty() {
        return v;
    }
    let mut g = BigInt::zero();
    for a in &v {
        g = g.gcd(a);
    }
    if v.last().unwrap().is_negative() {
        g = -g;
    }
    v.into_iter().map(|a| a / &g).collect()
}

fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r: Vec<BigInt> = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let t = r[dr].clone();
        for x in r.iter_mut() {
            *x *= lc;
        }
        let off = dr - db;
        for j in 0..=db {
            r[off + j] -= &t * &b[j];
        }
        int_trim(&mut r);
    }
    r
}

fn int_gcd(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let (mut a, mut b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    a = int_primitive(a);
    b = int_primitive(b);
    while !b.is_empty() {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = int_primitive(int_prem(&a, &b));
        a = b;
        b = r;
    }
    a
}

/// Exact division of integer polynomials; `None` if the division is not exact.
pub(crate) fn int_div_exact(a: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    let dd = d.len() - 1;
    if a.len() < d.len() {
        return None;
    }
    let mut r = a.to_vec();
    let mut quo = vec![BigInt::zero(); a.len() - dd];
    for k in (0..quo.len()).rev() {
        let (t, rem) = r[k + dd].div_rem(&d[dd]);
        if !rem.is_zero() {
            return None;
        }
        if !t.is_zero() {
            for j in 0..=dd {
                r[k + j] -= &t * &d[j];
            }
            quo[k] = t;
        }
    }
    if r.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(quo)
}

impl super::ring::Ring for QPoly {
    fn zero() -> Self {
        QPoly::default()
    }
    fn one() -> Self {
        QPoly::constant(<Rat as One>::one())
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn from_rat(r: &Rat) -> Self {
        QPoly::constant(r.clone())
    }
}

pub(crate) fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let qpart = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            let term = if k == 0 {
                fmt_rat(a)
            } else if a.is_one() {
                qpart
            } else if *a == -<Rat as One>::one() {
                format!("-{qpart}")
            } else {
                format!("{}*{qpart}", fmt_rat(a))
            };
            if !first && !term.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{term}")?;
            first = false;
        }
        Ok(())
    }
}
