use crate::qfield::{pochhammer, q_binomial, Field, Ring};

use super::state::*;
use super::weights::{l_weight, Params};
use super::ModelError;

fn poch<F: Field>(u: &F, p: &Params<F>, k: i64) -> F {
    pochhammer(u, &p.q, k.max(0) as usize)
}

fn norm1(v: &[i64]) -> i64 {
    v.iter().sum()
}

/// Phi(S,T;u,v) from the closed form of the fused weights.
fn big_phi<F: Field>(s: &[i64], t: &[i64], u: &F, v: &F, p: &Params<F>) -> Result<F, ModelError> {
    let vu = v.over(u).ok_or(ModelError::Pole("Phi: u = 0"))?;
    let (ns, nt) = (norm1(s), norm1(t));
    let num = poch(u, p, ns).times(&poch(&vu, p, nt - ns));
    let den = poch(v, p, nt);
    let diff: Vec<i64> = t.iter().zip(s).map(|(a, b)| a - b).collect();
    let mut acc = num.over(&den).ok_or(ModelError::Pole("(v;q)_|T|"))?;
    acc = acc.times(&vu.powu(ns as u32)).times(&p.qp(phi(&diff, s)));
    for (ti, si) in t.iter().zip(s) {
        acc = acc.times(&q_binomial(*ti as usize, *si as usize, &p.q));
    }
    Ok(acc)
}

/// Fused weight L^{(r,s)}_x(A,B;C,D) at spectral parameter x, parametrized by r^2.
/// The closed form is written at spectral s*z, so internally z = x/s.
pub fn fused_weight<F: Field>(
    n: usize,
    a: StateVec,
    b: StateVec,
    c: StateVec,
    d: StateVec,
    x: &F,
    p: &Params<F>,
    r2: &F,
) -> Result<F, ModelError> {
    let z = x.over(&p.s).ok_or(ModelError::ZeroParameter("s"))?;
    let (av, bv, cv, dv) = (to_vec(n, a), to_vec(n, b), to_vec(n, c), to_vec(n, d));
    if (0..n).any(|i| av[i] + bv[i] != cv[i] + dv[i]) {
        return Ok(F::zero());
    }
    let vv: Vec<i64> = (0..n).map(|i| av[i].min(bv[i]).min(cv[i]).min(dv[i])).collect();
    let nv = norm1(&vv);
    let s2 = p.s.times(&p.s);
    let r2inv = r2.inverse().ok_or(ModelError::ZeroParameter("r"))?;
    let zpow = z.powi(norm1(&dv) - norm1(&bv)).ok_or(ModelError::ZeroParameter("z"))?;
    let mut pref = zpow
        .times(&r2inv.powu(norm1(&av) as u32))
        .times(&s2.powu(norm1(&dv) as u32))
        .times(&p.qp(-phi(&av, &vv) - nv));
    if nv % 2 == 1 {
        pref = pref.negated();
    }
    let top = poch(&r2inv.times(&p.qp(1 - nv)).times(&z), p, nv);
    let u1 = s2.times(&r2inv).times(&p.qp(-nv)).times(&z);
    let bot = poch(&u1, p, nv);
    pref = pref.times(&top).over(&bot).ok_or(ModelError::Pole("fused prefactor"))?;

    let v1 = s2.times(&z);
    let zinv = z.inverse().ok_or(ModelError::ZeroParameter("z"))?;
    let u2 = r2.times(&p.qp(nv)).times(&zinv);
    let v2 = r2.times(&p.qp(nv));
    let bmv: Vec<i64> = (0..n).map(|i| bv[i] - vv[i]).collect();
    let bound: Vec<i64> = (0..n).map(|i| cv[i].min(bmv[i])).collect();
    let mut w = F::zero();
    let total: usize = bound.iter().map(|&x| (x + 1) as usize).product();
    for idx in 0..total {
        let mut rem = idx;
        let mut pv = vec![0i64; n];
        for i in 0..n {
            let m = (bound[i] + 1) as usize;
            pv[i] = (rem % m) as i64;
            rem /= m;
        }
        let s1: Vec<i64> = (0..n).map(|i| cv[i] - pv[i]).collect();
        let t1: Vec<i64> = (0..n).map(|i| cv[i] + dv[i] - vv[i] - pv[i]).collect();
        let f1 = big_phi(&s1, &t1, &u1, &v1, p)?;
        let f2 = big_phi(&pv, &bmv, &u2, &v2, p)?;
        w = w.plus(&f1.times(&f2));
    }
    Ok(pref.times(&w))
}

fn inv_count(v: &[usize]) -> i64 {
    let mut k = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                k += 1;
            }
        }
    }
    k
}

/// All words (b_1..b_N) in [0,n]^N with sum of e_{b_i} equal to the given set.
fn decompositions(n: usize, set: StateVec, height: usize) -> Vec<Vec<usize>> {
    let colours: Vec<usize> = (1..=n).filter(|&i| has(set, i) == 1).collect();
    if colours.len() > height {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; height];
    fn place(k: usize, colours: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == colours.len() {
            out.push(cur.clone());
            return;
        }
        for pos in 0..cur.len() {
            if cur[pos] == 0 {
                cur[pos] = colours[k];
                place(k + 1, colours, cur, out);
                cur[pos] = 0;
            }
        }
    }
    place(0, &colours, &mut cur, &mut out);
    out
}

/// Fused weight computed from its defining tower sum with r = q^{-N/2}.
/// Rows carry spectral parameters q^{N-1}x, ..., qx, x from bottom to top.
pub fn fused_weight_by_fusion<F: Field>(
    n: usize,
    a: StateVec,
    b: StateVec,
    c: StateVec,
    d: StateVec,
    height: usize,
    x: &F,
    p: &Params<F>,
) -> Result<F, ModelError> {
    let bs = decompositions(n, b, height);
    let ds = decompositions(n, d, height);
    if bs.is_empty() || ds.is_empty() {
        return Ok(F::zero());
    }
    // Geometric progression read bottom to top, ending at x on the top line; this is
    // the alignment under which the tower sum reproduces the closed form.
    let spectral: Vec<F> = (0..height).map(|k| x.times(&p.qp((height - 1 - k) as i64))).collect();
    let mut acc = F::zero();
    for bw in &bs {
        let wq = p.qp(inv_count(bw));
        for dw in &ds {
            let mut state = a;
            let mut prod = wq.clone();
            let mut ok = true;
            for k in 0..height {
                let next_counts: Vec<i64> = (1..=n)
                    .map(|i| has(state, i) as i64 + (bw[k] == i) as i64 - (dw[k] == i) as i64)
                    .collect();
                if next_counts.iter().any(|&v| !(0..=1).contains(&v)) {
                    ok = false;
                    break;
                }
                let next = next_counts.iter().enumerate().fold(0u32, |m, (i, &v)| m | ((v as u32) << i));
                let w = l_weight(n, state, bw[k], next, dw[k], &spectral[k], p)?;
                if w.is_zero() {
                    ok = false;
                    break;
                }
                prod = prod.times(&w);
                state = next;
            }
            if ok && state == c {
                acc = acc.plus(&prod);
            }
        }
    }
    // Z_q(N;B) = (q;q)_N / ((q;q)_{N-|B|} (1-q)^{|B|}) for binary B.
    let q = &p.q;
    let lower = pochhammer(q, q, height - size(b) as usize).times(&F::one().minus(q).powu(size(b)));
    let zq = pochhammer(q, q, height).over(&lower).ok_or(ModelError::Pole("Z_q"))?;
    acc.over(&zq).ok_or(ModelError::Pole("Z_q"))
}

/// LLT vertex weight 1_{C+D binary} x^{|D|} q^{phi(D,C)+phi(D,D)}, with A+B = C+D enforced.
pub fn llt_weight<R: Ring>(n: usize, a: StateVec, b: StateVec, c: StateVec, d: StateVec, x: &R, q: &R) -> R {
    let (av, bv, cv, dv) = (to_vec(n, a), to_vec(n, b), to_vec(n, c), to_vec(n, d));
    if (0..n).any(|i| av[i] + bv[i] != cv[i] + dv[i]) || c & d != 0 {
        return R::zero();
    }
    let e = phi(&dv, &cv) + phi(&dv, &dv);
    x.powu(size(d)).times(&q.powu(e as u32))
}
