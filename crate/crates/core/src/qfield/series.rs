use std::collections::BTreeMap;

use super::ring::{Field, Rat, Ring};

/// Sentinel precision for exact constants; binary operations keep the smaller cap.
const EXACT: usize = usize::MAX;

/// Power series in an auxiliary variable t, truncated after t^cap.
#[derive(Clone, Debug)]
pub struct TSeries {
    c: Vec<Rat>,
    cap: usize,
}

impl TSeries {
    /// The series c * t^k with precision cap.
    pub fn monomial(c: Rat, k: usize, cap: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        TSeries::from_coeffs(v, cap)
    }

    /// The variable t at the given precision.
    pub fn t(cap: usize) -> Self {
        TSeries::monomial(Rat::one(), 1, cap)
    }

    pub fn from_coeffs(mut c: Vec<Rat>, cap: usize) -> Self {
        if cap != EXACT {
            c.truncate(cap + 1);
        }
        while c.last().is_some_and(|x| Ring::is_zero(x)) {
            c.pop();
        }
        TSeries { c, cap }
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.c.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn with_cap(&self, cap: usize) -> Self {
        TSeries::from_coeffs(self.c.clone(), cap.min(self.cap))
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !Ring::is_zero(x))
    }
}

impl PartialEq for TSeries {
    fn eq(&self, o: &Self) -> bool {
        let cap = self.cap.min(o.cap);
        let len = self.c.len().max(o.c.len()).min(cap.saturating_add(1));
        (0..len).all(|k| self.coeff(k) == o.coeff(k))
    }
}

impl Ring for TSeries {
    fn zero() -> Self {
        TSeries { c: Vec::new(), cap: EXACT }
    }
    fn one() -> Self {
        TSeries { c: vec![Rat::one()], cap: EXACT }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        let len = self.c.len().max(o.c.len());
        TSeries::from_coeffs((0..len).map(|k| self.coeff(k) + o.coeff(k)).collect(), self.cap.min(o.cap))
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        let cap = self.cap.min(o.cap);
        if self.c.is_empty() || o.c.is_empty() {
            return TSeries { c: Vec::new(), cap };
        }
        let len = (self.c.len() + o.c.len() - 1).min(cap.saturating_add(1));
        let mut v = vec![Rat::zero(); len];
        for (i, a) in self.c.iter().enumerate() {
            if Ring::is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                v[i + j] += a * b;
            }
        }
        TSeries::from_coeffs(v, cap)
    }
    fn negated(&self) -> Self {
        TSeries { c: self.c.iter().map(|x| -x).collect(), cap: self.cap }
    }
    fn from_rat(r: &Rat) -> Self {
        TSeries::from_coeffs(vec![r.clone()], EXACT)
    }
}

impl Field for TSeries {
    /// Invertible exactly when the constant term is nonzero and the precision is finite
    /// (or the series is a constant).
    fn inverse(&self) -> Option<Self> {
        let a0 = self.c.first()?;
        if Ring::is_zero(a0) {
            return None;
        }
        if self.c.len() == 1 {
            return Some(TSeries { c: vec![a0.inverse()?], cap: self.cap });
        }
        let cap = self.cap;
        if cap == EXACT {
            return None;
        }
        let inv0 = a0.inverse()?;
        let mut b = vec![Rat::zero(); cap + 1];
        b[0] = inv0.clone();
        for k in 1..=cap {
            let mut acc = Rat::zero();
            for j in 1..=k.min(self.c.len() - 1) {
                acc += &self.c[j] * &b[k - j];
            }
            b[k] = -acc * &inv0;
        }
        Some(TSeries::from_coeffs(b, cap))
    }
}

/// Polynomial in x_1, x_2, ... with coefficients in a ring, truncated above a total degree.
#[derive(Clone, Debug)]
pub struct MPoly<C: Ring> {
    terms: BTreeMap<Vec<u8>, C>,
    cap: usize,
}

fn trim_exp(mut e: Vec<u8>) -> Vec<u8> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl<C: Ring> MPoly<C> {
    /// The variable x_i (0-based) at total-degree precision cap.
    pub fn var(i: usize, cap: usize) -> Self {
        let mut e = vec![0u8; i + 1];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        if cap >= 1 {
            terms.insert(e, C::one());
        }
        MPoly { terms, cap }
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MPoly { terms, cap: EXACT }
    }

    /// Coefficient of the monomial with the given exponent vector.
    pub fn coeff(&self, exps: &[u8]) -> C {
        self.terms.get(&trim_exp(exps.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &C)> {
        self.terms.iter()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn insert(terms: &mut BTreeMap<Vec<u8>, C>, e: Vec<u8>, c: C) {
        let sum = match terms.get(&e) {
            Some(v) => v.plus(&c),
            None => c,
        };
        if sum.is_zero() {
            terms.remove(&e);
        } else {
            terms.insert(e, sum);
        }
    }
}

fn degree(e: &[u8]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl<C: Ring> PartialEq for MPoly<C> {
    fn eq(&self, o: &Self) -> bool {
        let cap = self.cap.min(o.cap);
        let keys: std::collections::BTreeSet<&Vec<u8>> = self.terms.keys().chain(o.terms.keys()).collect();
        keys.into_iter().filter(|k| degree(k) <= cap).all(|k| self.coeff(k) == o.coeff(k))
    }
}

impl<C: Ring> Ring for MPoly<C> {
    fn zero() -> Self {
        MPoly { terms: BTreeMap::new(), cap: EXACT }
    }
    fn one() -> Self {
        MPoly::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        let cap = self.cap.min(o.cap);
        let mut terms = BTreeMap::new();
        for (k, v) in self.terms.iter().chain(o.terms.iter()) {
            if degree(k) <= cap {
                MPoly::insert(&mut terms, k.clone(), v.clone());
            }
        }
        MPoly { terms, cap }
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        let cap = self.cap.min(o.cap);
        let mut terms = BTreeMap::new();
        for (ka, va) in &self.terms {
            let da = degree(ka);
            for (kb, vb) in &o.terms {
                if da + degree(kb) > cap {
                    continue;
                }
                let len = ka.len().max(kb.len());
                let e: Vec<u8> = (0..len)
                    .map(|i| ka.get(i).copied().unwrap_or(0) + kb.get(i).copied().unwrap_or(0))
                    .collect();
                MPoly::insert(&mut terms, e, va.times(vb));
            }
        }
        MPoly { terms, cap }
    }
    fn negated(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(k, v)| (k.clone(), v.negated())).collect(), cap: self.cap }
    }
    fn from_rat(r: &Rat) -> Self {
        MPoly::constant(C::from_rat(r))
    }
}
