use crate::qfield::{Field, Ring};

use super::state::*;
use super::ModelError;

/// Quantum and spin parameters shared by one weight family.
#[derive(Clone, Debug)]
pub struct Params<F> {
    pub q: F,
    pub s: F,
    qinv: F,
}

impl<F: Field> Params<F> {
    pub fn new(q: F, s: F) -> Result<Self, ModelError> {
        let qinv = q.inverse().ok_or(ModelError::ZeroParameter("q"))?;
        Ok(Params { q, s, qinv })
    }

    pub fn qp(&self, k: i64) -> F {
        if k >= 0 {
            self.q.powu(k as u32)
        } else {
            self.qinv.powu((-k) as u32)
        }
    }

    pub fn qinv(&self) -> &F {
        &self.qinv
    }
}

fn sign<F: Ring>(odd: bool, x: F) -> F {
    if odd {
        x.negated()
    } else {
        x
    }
}

fn pole<F: Field>(num: F, den: &F, what: &'static str) -> Result<F, ModelError> {
    num.over(den).ok_or(ModelError::Pole(what))
}

/// Fundamental L-weight L^{(s)}_z(A,b;C,d).
pub fn l_weight<F: Field>(
    n: usize,
    a: StateVec,
    b: usize,
    c: StateVec,
    d: usize,
    z: &F,
    p: &Params<F>,
) -> Result<F, ModelError> {
    let den = F::one().minus(&p.s.times(z));
    if den.is_zero() {
        return Err(ModelError::Pole("1-sz"));
    }
    if !conserves(n, a, b, c, d) {
        return Ok(F::zero());
    }
    let s = &p.s;
    let num = match (b, d) {
        (0, 0) => F::one().minus(&p.qp(size(a) as i64).times(s).times(z)),
        (i, j) if i == j => {
            let ai = has(a, i);
            let t = s.minus(&p.qp(ai as i64).times(z));
            sign(ai == 1, t.times(&p.qp(above(a, i) as i64)).times(s))
        }
        (0, i) => p.qp(has(a, i) as i64).minus(&F::one()).times(&p.qp(above(a, i) as i64)).times(s).times(z),
        (_, 0) => F::one().minus(&s.times(s).times(&p.qp(size(a) as i64))),
        (i, j) if i < j => p.qp(has(a, j) as i64).minus(&F::one()).times(&p.qp(above(a, j) as i64)).times(s).times(z),
        (_, i) => p.qp(has(a, i) as i64).minus(&F::one()).times(&p.qp(above(a, i) as i64)).times(s).times(s),
    };
    pole(num, &den, "1-sz")
}

/// L-weight divided by (-s) when the right edge is occupied; regular at s = 0.
pub fn l_hat<F: Field>(
    n: usize,
    a: StateVec,
    b: usize,
    c: StateVec,
    d: usize,
    z: &F,
    p: &Params<F>,
) -> Result<F, ModelError> {
    let den = F::one().minus(&p.s.times(z));
    if den.is_zero() {
        return Err(ModelError::Pole("1-sz"));
    }
    if !conserves(n, a, b, c, d) {
        return Ok(F::zero());
    }
    let s = &p.s;
    let num = match (b, d) {
        (0, 0) => F::one().minus(&p.qp(size(a) as i64).times(s).times(z)),
        (i, j) if i == j => {
            let ai = has(a, i);
            let t = s.minus(&p.qp(ai as i64).times(z));
            sign(ai == 0, t.times(&p.qp(above(a, i) as i64)))
        }
        (0, i) => F::one().minus(&p.qp(has(a, i) as i64)).times(&p.qp(above(a, i) as i64)).times(z),
        (_, 0) => F::one().minus(&s.times(s).times(&p.qp(size(a) as i64))),
        (i, j) if i < j => F::one().minus(&p.qp(has(a, j) as i64)).times(&p.qp(above(a, j) as i64)).times(z),
        (_, i) => F::one().minus(&p.qp(has(a, i) as i64)).times(&p.qp(above(a, i) as i64)).times(s),
    };
    pole(num, &den, "1-sz")
}

/// M-weight times (-s) when the right (incoming) edge is occupied; regular at s = 0.
pub fn m_hat<F: Field>(
    n: usize,
    a: StateVec,
    b: usize,
    c: StateVec,
    d: usize,
    z: &F,
    p: &Params<F>,
) -> Result<F, ModelError> {
    let sz = p.s.times(z);
    let den = F::one().minus(&sz);
    if den.is_zero() {
        return Err(ModelError::Pole("1-sz"));
    }
    if !conserves(n, a, b, c, d) {
        return Ok(F::zero());
    }
    let s = &p.s;
    let num = match (b, d) {
        (0, 0) => p.qp(-(size(a) as i64)).minus(&sz),
        (i, j) if i == j => {
            let ai = has(a, i);
            let t = z.minus(&p.qp(-(ai as i64)).times(s));
            sign(ai == 1, t.times(&p.qp(-(above(a, i) as i64))))
        }
        (0, i) => F::one().minus(&p.qp(-(has(a, i) as i64))).times(&p.qp(-(above(a, i) as i64))),
        (_, 0) => s.times(s).minus(&p.qp(-(size(a) as i64))).times(z),
        (i, j) if i < j => p.qp(-(has(a, j) as i64)).minus(&F::one()).times(&p.qp(-(above(a, j) as i64))).times(s),
        (_, i) => p.qp(-(has(a, i) as i64)).minus(&F::one()).times(&p.qp(-(above(a, i) as i64))).times(z),
    };
    pole(num, &den, "1-sz")
}

/// M-weight M^{(s)}_z(A,b;C,d); b enters from the right, d leaves to the left.
pub fn m_weight<F: Field>(
    n: usize,
    a: StateVec,
    b: usize,
    c: StateVec,
    d: usize,
    z: &F,
    p: &Params<F>,
) -> Result<F, ModelError> {
    let h = m_hat(n, a, b, c, d, z, p)?;
    if b == 0 {
        Ok(h)
    } else {
        h.over(&p.s.negated()).ok_or(ModelError::ZeroParameter("s"))
    }
}

/// m_hat at s = 0, over any ring containing q^{-1}.
pub fn m_hat_s0<R: Ring>(n: usize, a: StateVec, b: usize, c: StateVec, d: usize, z: &R, qinv: &R) -> R {
    if !conserves(n, a, b, c, d) {
        return R::zero();
    }
    let qm = |k: u32| qinv.powu(k);
    match (b, d) {
        (0, 0) => qm(size(a)),
        (i, j) if i == j => sign(has(a, i) == 1, qm(above(a, i)).times(z)),
        (0, i) => R::one().minus(&qm(has(a, i))).times(&qm(above(a, i))),
        (_, 0) => qm(size(a)).times(z).negated(),
        (i, j) if i < j => R::zero(),
        (_, i) => qm(has(a, i)).minus(&R::one()).times(&qm(above(a, i))).times(z),
    }
}

/// Fundamental R-weight R_z(a,b;c,d): a bottom, b left, c top, d right.
pub fn r_weight<F: Field>(a: usize, b: usize, c: usize, d: usize, z: &F, q: &F) -> Result<F, ModelError> {
    let den = F::one().minus(&q.times(z));
    if den.is_zero() {
        return Err(ModelError::Pole("1-qz"));
    }
    let one = F::one();
    let num = if a == b {
        if c != a || d != a {
            return Ok(F::zero());
        }
        if a == 0 {
            return Ok(one);
        }
        z.minus(q)
    } else if a > b {
        // bottom is the larger colour
        if c == a && d == b {
            q.times(&one.minus(z))
        } else if c == b && d == a {
            one.minus(q)
        } else {
            return Ok(F::zero());
        }
    } else if c == a && d == b {
        one.minus(z)
    } else if c == b && d == a {
        one.minus(q).times(z)
    } else {
        return Ok(F::zero());
    };
    pole(num, &den, "1-qz")
}
