use std::collections::HashMap;

use crate::model::{full, l_hat, l_weight, llt_weight, m_hat, m_hat_s0, Params, StateVec};
use crate::qfield::{Field, QRat, Rat, Ring};

use super::comp::ColComp;
use super::engine::{evaluate, Flow, Horiz, LatticeSpec};
use super::LatticeError;

/// Number of columns needed to hold every part, plus `extra` empty ones.
fn window(comps: &[&ColComp], extra: usize) -> Result<usize, LatticeError> {
    let mut hi = -1i64;
    for c in comps {
        if let Some(m) = c.min_part() {
            if m < 0 {
                return Err(LatticeError::Window(format!("negative part in {c}")));
            }
        }
        if let Some(m) = c.max_part() {
            hi = hi.max(m);
        }
    }
    Ok((hi + 1) as usize + extra)
}

fn columns(c: &ColComp, width: usize) -> Vec<StateVec> {
    (0..width as i64).map(|k| c.column(k)).collect()
}

/// Sorted colour word (1^{lambda_1}, 2^{lambda_2}, ...).
pub fn sorted_word(profile: &[usize]) -> Vec<usize> {
    profile.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i + 1, k)).collect()
}

fn check_word(mu: &ColComp, sigma: &[usize]) -> Result<(), LatticeError> {
    let n = mu.n();
    let mut cnt = vec![0usize; n];
    for &c in sigma {
        if c == 0 || c > n {
            return Err(LatticeError::Composition(format!("colour {c} out of range")));
        }
        cnt[c - 1] += 1;
    }
    if cnt != mu.profile() {
        return Err(LatticeError::Composition(format!("colour word does not match the profile of {mu}")));
    }
    Ok(())
}

fn check_len<T>(xs: &[T], k: usize) -> Result<(), LatticeError> {
    if xs.len() != k {
        return Err(LatticeError::Shape(format!("expected {k} spectral values, got {}", xs.len())));
    }
    Ok(())
}

/// f^sigma_mu: L-hat weights, empty bottom, top mu, row j entering with colour sigma_j.
pub fn f_mu_sigma_w<F: Field>(
    mu: &ColComp,
    sigma: &[usize],
    xs: &[F],
    p: &Params<F>,
    extra: usize,
) -> Result<F, LatticeError> {
    check_word(mu, sigma)?;
    check_len(xs, sigma.len())?;
    let n = mu.n();
    let w = window(&[mu], extra)?;
    let spec = LatticeSpec {
        n,
        rows: sigma.len(),
        flow: Flow::Right,
        horiz: Horiz::Colour,
        bottom: vec![0; w],
        top: columns(mu, w),
        entry: sigma.iter().map(|&c| c as u32).collect(),
        exit: vec![0; sigma.len()],
    };
    evaluate(&spec, &|r, a, b, c, d| Ok(l_hat(n, a, b as usize, c, d as usize, &xs[r], p)?))
}

pub fn f_mu_sigma<F: Field>(mu: &ColComp, sigma: &[usize], xs: &[F], p: &Params<F>) -> Result<F, LatticeError> {
    f_mu_sigma_w(mu, sigma, xs, p, 0)
}

pub fn f_mu<F: Field>(mu: &ColComp, xs: &[F], p: &Params<F>) -> Result<F, LatticeError> {
    f_mu_sigma(mu, &sorted_word(&mu.profile()), xs, p)
}

/// g^sigma_mu: M-hat weights, bottom mu, empty top, row j leaving on the left with colour sigma_j.
pub fn g_mu_sigma_w<F: Field>(
    mu: &ColComp,
    sigma: &[usize],
    xs: &[F],
    p: &Params<F>,
    extra: usize,
) -> Result<F, LatticeError> {
    check_word(mu, sigma)?;
    check_len(xs, sigma.len())?;
    let n = mu.n();
    let w = window(&[mu], extra)?;
    let spec = LatticeSpec {
        n,
        rows: sigma.len(),
        flow: Flow::Left,
        horiz: Horiz::Colour,
        bottom: columns(mu, w),
        top: vec![0; w],
        entry: vec![0; sigma.len()],
        exit: sigma.iter().map(|&c| c as u32).collect(),
    };
    evaluate(&spec, &|r, a, b, c, d| Ok(m_hat(n, a, b as usize, c, d as usize, &xs[r], p)?))
}

pub fn g_mu_sigma<F: Field>(mu: &ColComp, sigma: &[usize], xs: &[F], p: &Params<F>) -> Result<F, LatticeError> {
    g_mu_sigma_w(mu, sigma, xs, p, 0)
}

pub fn g_mu<F: Field>(mu: &ColComp, xs: &[F], p: &Params<F>) -> Result<F, LatticeError> {
    g_mu_sigma(mu, &sorted_word(&mu.profile()), xs, p)
}

fn same_profile(mu: &ColComp, nu: &ColComp) -> Result<(), LatticeError> {
    if mu.profile() != nu.profile() {
        return Err(LatticeError::Composition(format!("{mu} and {nu} have different colour profiles")));
    }
    Ok(())
}

/// G_{mu/nu}: L-hat weights, bottom nu, top mu, empty sides, one row per spectral value.
pub fn g_skew_w<F: Field>(mu: &ColComp, nu: &ColComp, xs: &[F], p: &Params<F>, extra: usize) -> Result<F, LatticeError> {
    same_profile(mu, nu)?;
    let n = mu.n();
    let w = window(&[mu, nu], extra)?;
    let spec = LatticeSpec {
        n,
        rows: xs.len(),
        flow: Flow::Right,
        horiz: Horiz::Colour,
        bottom: columns(nu, w),
        top: columns(mu, w),
        entry: vec![0; xs.len()],
        exit: vec![0; xs.len()],
    };
    evaluate(&spec, &|r, a, b, c, d| Ok(l_hat(n, a, b as usize, c, d as usize, &xs[r], p)?))
}

pub fn g_skew<F: Field>(mu: &ColComp, nu: &ColComp, xs: &[F], p: &Params<F>) -> Result<F, LatticeError> {
    g_skew_w(mu, nu, xs, p, 0)
}

/// LLT polynomial G_{mu/nu}(xs). Signatures with negative parts are shifted to start at 0.
pub fn llt_poly_w<R: Ring>(mu: &ColComp, nu: &ColComp, xs: &[R], q: &R, extra: usize) -> Result<R, LatticeError> {
    same_profile(mu, nu)?;
    let low = mu.min_part().into_iter().chain(nu.min_part()).min().unwrap_or(0).min(0);
    let (mu, nu) = (mu.shift(-low), nu.shift(-low));
    let n = mu.n();
    let w = window(&[&mu, &nu], extra)?;
    let spec = LatticeSpec {
        n,
        rows: xs.len(),
        flow: Flow::Right,
        horiz: Horiz::Mask,
        bottom: columns(&nu, w),
        top: columns(&mu, w),
        entry: vec![0; xs.len()],
        exit: vec![0; xs.len()],
    };
    evaluate(&spec, &|r, a, b, c, d| Ok::<R, LatticeError>(llt_weight(n, a, b, c, d, &xs[r], q)))
}

pub fn llt_poly<R: Ring>(mu: &ColComp, nu: &ColComp, xs: &[R], q: &R) -> Result<R, LatticeError> {
    llt_poly_w(mu, nu, xs, q, 0)
}

/// Plancherel image of an LLT polynomial: coeff * t^degree.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PlancherelTerm {
    pub degree: usize,
    pub coeff: QRat,
}

/// Moves of one part by +1 that keep every part below its value in `cap`.
fn unit_moves(k: &ColComp, cap: &ColComp) -> Vec<ColComp> {
    let mut out = Vec::new();
    for (i, b) in k.blocks().iter().enumerate() {
        for j in 0..b.len() {
            let v = b[j] + 1;
            if v > cap.blocks()[i][j] || (j + 1 < b.len() && b[j + 1] == v) {
                continue;
            }
            let mut blocks = k.blocks().to_vec();
            blocks[i][j] = v;
            out.push(ColComp::new(blocks).expect("order preserved"));
        }
    }
    out
}

/// G_{mu/nu}(Pl_t) as (t^d / d!) times the sum over unit-step chains of one-row LLT weights.
pub fn llt_plancherel(mu: &ColComp, nu: &ColComp) -> Result<PlancherelTerm, LatticeError> {
    same_profile(mu, nu)?;
    let d = mu.weight() - nu.weight();
    let dominated = mu.blocks().iter().zip(nu.blocks()).all(|(a, b)| a.iter().zip(b).all(|(x, y)| x >= y));
    if d < 0 || !dominated {
        return Ok(PlancherelTerm { degree: 0, coeff: QRat::zero() });
    }
    let q = QRat::q();
    let one = [QRat::one()];
    let mut level: HashMap<ColComp, QRat> = HashMap::new();
    level.insert(nu.clone(), QRat::one());
    for _ in 0..d {
        let mut next: HashMap<ColComp, QRat> = HashMap::new();
        for (k, v) in &level {
            for k2 in unit_moves(k, mu) {
                let w = llt_poly(&k2, k, &one, &q)?;
                if w.is_zero() {
                    continue;
                }
                let add = v.times(&w);
                let e = next.entry(k2).or_insert_with(QRat::zero);
                *e = e.plus(&add);
            }
        }
        level = next;
    }
    let w = level.remove(mu).unwrap_or_else(QRat::zero);
    let fact: Rat = (1..=d).fold(Rat::one(), |a, k| a * Rat::from_integer(k.into()));
    let coeff = w.times(&QRat::from_rat(fact.inverse().expect("nonzero")));
    Ok(PlancherelTerm { degree: d as usize, coeff })
}

/// Z(xs; i): raw L weights on m columns, each fed all colours from below, row a leaving
/// on the right with colour i_a.
pub fn z_pf<F: Field>(n: usize, iseq: &[usize], xs: &[F], p: &Params<F>) -> Result<F, LatticeError> {
    if n == 0 || iseq.len() % n != 0 {
        return Err(LatticeError::Composition("colour sequence length is not a multiple of n".into()));
    }
    let m = iseq.len() / n;
    for c in 1..=n {
        if iseq.iter().filter(|&&x| x == c).count() != m {
            return Err(LatticeError::Composition(format!("colour {c} does not appear exactly {m} times")));
        }
    }
    if iseq.iter().any(|&c| c == 0 || c > n) {
        return Err(LatticeError::Composition("colour out of range".into()));
    }
    check_len(xs, iseq.len())?;
    let spec = LatticeSpec {
        n,
        rows: iseq.len(),
        flow: Flow::Right,
        horiz: Horiz::Colour,
        bottom: vec![full(n); m],
        top: vec![0; m],
        entry: vec![0; iseq.len()],
        exit: iseq.iter().map(|&c| c as u32).collect(),
    };
    evaluate(&spec, &|r, a, b, c, d| Ok(l_weight(n, a, b as usize, c, d as usize, &xs[r], p)?))
}

/// g^sigma_mu at s = 0 over any ring holding q^{-1}; used for exact specializations.
pub fn g_mu_sigma_s0<R: Ring>(mu: &ColComp, sigma: &[usize], xs: &[R], qinv: &R) -> Result<R, LatticeError> {
    check_word(mu, sigma)?;
    check_len(xs, sigma.len())?;
    let n = mu.n();
    let w = window(&[mu], 0)?;
    let spec = LatticeSpec {
        n,
        rows: sigma.len(),
        flow: Flow::Left,
        horiz: Horiz::Colour,
        bottom: columns(mu, w),
        top: vec![0; w],
        entry: vec![0; sigma.len()],
        exit: sigma.iter().map(|&c| c as u32).collect(),
    };
    evaluate(&spec, &|r, a, b, c, d| Ok::<R, LatticeError>(m_hat_s0(n, a, b as usize, c, d as usize, &xs[r], qinv)))
}
