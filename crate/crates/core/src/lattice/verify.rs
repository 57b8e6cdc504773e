use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{ModelError, Params};
use crate::qfield::{random_rat_avoiding, Field, Rat, Ring, TSeries};

use super::comp::{enumerate_compositions, psi2, ColComp};
use super::functions::{f_mu, f_mu_sigma, g_mu, g_mu_sigma, g_skew, llt_poly};
use super::LatticeError;

const DRAW_BOUND: i64 = 60;
const MAX_REDRAWS: usize = 200;
/// Parts of enumerated test compositions lie in [0, PART_BOUND).
const PART_BOUND: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub trial: usize,
    pub case: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of a randomized identity check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub trials: usize,
    pub seed: u64,
    pub checked: usize,
    pub skipped: usize,
    pub notices: Vec<String>,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeckeRelation {
    #[serde(rename = "T-f")]
    Tf,
    #[serde(rename = "T-g")]
    Tg,
    #[serde(rename = "invT-f")]
    InvTf,
    #[serde(rename = "invT-g")]
    InvTg,
}

impl fmt::Display for HeckeRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeckeRelation::Tf => "T-f",
            HeckeRelation::Tg => "T-g",
            HeckeRelation::InvTf => "invT-f",
            HeckeRelation::InvTg => "invT-g",
        })
    }
}

impl FromStr for HeckeRelation {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "t-f" | "tf" => Ok(HeckeRelation::Tf),
            "t-g" | "tg" => Ok(HeckeRelation::Tg),
            "invt-f" | "invtf" => Ok(HeckeRelation::InvTf),
            "invt-g" | "invtg" => Ok(HeckeRelation::InvTg),
            _ => Err(LatticeError::Precondition(format!("unknown relation {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CauchyKind {
    #[serde(rename = "gG")]
    GG,
    #[serde(rename = "skewLLT")]
    SkewLlt,
}

impl fmt::Display for CauchyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CauchyKind::GG => "gG",
            CauchyKind::SkewLlt => "skewLLT",
        })
    }
}

impl FromStr for CauchyKind {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gg" => Ok(CauchyKind::GG),
            "skewllt" | "llt" => Ok(CauchyKind::SkewLlt),
            _ => Err(LatticeError::Precondition(format!("unknown Cauchy identity {s}"))),
        }
    }
}

#[derive(Default)]
struct Outcome {
    checked: usize,
    failures: Vec<IdentityFailure>,
}

impl Outcome {
    fn record<T: PartialEq + fmt::Display>(&mut self, trial: usize, case: impl FnOnce() -> String, l: T, r: T) {
        self.checked += 1;
        if l != r {
            self.failures.push(IdentityFailure { trial, case: case(), lhs: l.to_string(), rhs: r.to_string() });
        }
    }
}

fn is_redraw(e: &LatticeError) -> bool {
    matches!(e, LatticeError::Model(ModelError::Pole(_)) | LatticeError::Model(ModelError::ZeroParameter(_)))
}

fn trial_rng(seed: u64, trial: usize, attempt: usize) -> ChaCha8Rng {
    let k = (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (attempt as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    ChaCha8Rng::seed_from_u64(seed ^ k)
}

/// Runs trials in parallel; draws that hit a pole are redrawn.
fn run_trials<F>(name: String, trials: usize, seed: u64, skipped: usize, notices: Vec<String>, f: F) -> Result<IdentityReport, LatticeError>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<Outcome, LatticeError> + Sync,
{
    let outs: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            for attempt in 0..MAX_REDRAWS {
                match f(t, &mut trial_rng(seed, t, attempt)) {
                    Err(e) if is_redraw(&e) => continue,
                    other => return other,
                }
            }
            Err(LatticeError::Model(ModelError::RedrawLimit))
        })
        .collect::<Result<_, _>>()?;
    let mut rep = IdentityReport { identity: name, trials, seed, checked: 0, skipped, notices, failures: Vec::new() };
    for o in outs {
        rep.checked += o.checked;
        rep.failures.extend(o.failures);
    }
    Ok(rep)
}

fn draw(rng: &mut ChaCha8Rng, avoid: &[Rat]) -> Rat {
    let mut av = vec![Rat::one(), Rat::one().negated()];
    av.extend_from_slice(avoid);
    random_rat_avoiding(rng, DRAW_BOUND, &av)
}

/// Pairwise distinct nonzero values.
fn draw_distinct(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rat> {
    let mut v: Vec<Rat> = Vec::with_capacity(k);
    for _ in 0..k {
        let x = draw(rng, &v);
        v.push(x);
    }
    v
}

fn swapped(xs: &[Rat], i: usize) -> Vec<Rat> {
    let mut v = xs.to_vec();
    v.swap(i, i + 1);
    v
}

/// Demazure-Lusztig operator at positions (i, i+1), 0-based; `tilde` exchanges the roles
/// of the two variables in the coefficient.
fn hecke_apply(h: &Rat, h_swapped: &Rat, xs: &[Rat], i: usize, q: &Rat, tilde: bool) -> Result<Rat, LatticeError> {
    let (a, b) = if tilde { (&xs[i + 1], &xs[i]) } else { (&xs[i], &xs[i + 1]) };
    let c = a.minus(&q.times(b)).over(&a.minus(b)).ok_or(ModelError::Pole("x_i = x_{i+1}"))?;
    Ok(q.times(h).minus(&c.times(&h.minus(h_swapped))))
}

/// All distinct words with the given colour counts.
pub fn colour_words(profile: &[usize]) -> Vec<Vec<usize>> {
    fn rec(left: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, total: usize) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for c in 0..left.len() {
            if left[c] > 0 {
                left[c] -= 1;
                cur.push(c + 1);
                rec(left, cur, out, total);
                cur.pop();
                left[c] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let total = profile.iter().sum();
    rec(&mut profile.to_vec(), &mut Vec::new(), &mut out, total);
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut v = p.clone();
            v.insert(pos, k - 1);
            out.push(v);
        }
    }
    out
}

pub fn inversions<T: Ord>(w: &[T]) -> usize {
    let mut k = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                k += 1;
            }
        }
    }
    k
}

/// Elements of the Young subgroup S_lambda, as 0-based permutations of 0..|lambda|.
pub fn young_subgroup(profile: &[usize]) -> Vec<Vec<usize>> {
    let mut acc = vec![Vec::new()];
    let mut base = 0;
    for &k in profile {
        let mut nx = Vec::new();
        for a in &acc {
            for p in permutations(k) {
                let mut v: Vec<usize> = a.clone();
                v.extend(p.iter().map(|&x| x + base));
                nx.push(v);
            }
        }
        acc = nx;
        base += k;
    }
    acc
}

fn rainbow_profile(lambda: &[usize]) -> bool {
    lambda.iter().all(|&k| k == 1)
}

/// Checks one of the four Hecke exchange relations at random points.
pub fn verify_hecke(rel: HeckeRelation, lambda: &[usize], trials: usize, seed: u64) -> Result<IdentityReport, LatticeError> {
    let n = lambda.len();
    let m: usize = lambda.iter().sum();
    if n == 0 || n > 3 || m > 4 {
        return Err(LatticeError::Precondition(format!("need 1 <= n <= 3 and |lambda| <= 4, got {lambda:?}")));
    }
    let mut skipped = 0;
    let mut notices = Vec::new();
    match rel {
        HeckeRelation::Tf | HeckeRelation::Tg => {
            if !rainbow_profile(lambda) {
                return Err(LatticeError::Precondition(format!("{rel} needs a rainbow profile, got {lambda:?}")));
            }
            let mut cases = Vec::new();
            for mu in enumerate_compositions(lambda, PART_BOUND) {
                for i in 0..n.saturating_sub(1) {
                    let (a, b) = (mu.blocks()[i][0], mu.blocks()[i + 1][0]);
                    if a == b {
                        skipped += 1;
                        notices.push(format!("skipped {mu} at i={}: equal parts", i + 1));
                    } else if a < b {
                        let mut bl = mu.blocks().to_vec();
                        bl.swap(i, i + 1);
                        cases.push((mu.clone(), i, ColComp::new(bl)?));
                    }
                }
            }
            run_trials(rel.to_string(), trials, seed, skipped, notices, |t, rng| {
                let q = draw(rng, &[]);
                let p = Params::new(q.clone(), draw(rng, &[]))?;
                let xs = draw_distinct(rng, n);
                let mut out = Outcome::default();
                for (mu, i, smu) in &cases {
                    let i = *i;
                    let (lhs, rhs) = if rel == HeckeRelation::Tf {
                        let h = f_mu(mu, &xs, &p)?;
                        let hs = f_mu(mu, &swapped(&xs, i), &p)?;
                        (hecke_apply(&h, &hs, &xs, i, &q, false)?, f_mu(smu, &xs, &p)?)
                    } else {
                        let h = g_mu(mu, &xs, &p)?;
                        let hs = g_mu(mu, &swapped(&xs, i), &p)?;
                        (hecke_apply(&h, &hs, &xs, i, &q, true)?, q.times(&g_mu(smu, &xs, &p)?))
                    };
                    out.record(t, || format!("mu={mu} i={}", i + 1), lhs, rhs);
                }
                Ok(out)
            })
        }
        HeckeRelation::InvTf | HeckeRelation::InvTg => {
            let mut cases = Vec::new();
            let words = colour_words(lambda);
            for nu in enumerate_compositions(lambda, PART_BOUND) {
                for w in &words {
                    for j in 0..m.saturating_sub(1) {
                        if w[j] < w[j + 1] {
                            let mut sw = w.clone();
                            sw.swap(j, j + 1);
                            cases.push((nu.clone(), w.clone(), sw, j));
                        }
                    }
                }
            }
            run_trials(rel.to_string(), trials, seed, 0, Vec::new(), |t, rng| {
                let q = draw(rng, &[]);
                let p = Params::new(q.clone(), draw(rng, &[]))?;
                let xs = draw_distinct(rng, m);
                let mut out = Outcome::default();
                for (nu, w, sw, j) in &cases {
                    let j = *j;
                    let (lhs, rhs) = if rel == HeckeRelation::InvTf {
                        let h = f_mu_sigma(nu, sw, &xs, &p)?;
                        let hs = f_mu_sigma(nu, sw, &swapped(&xs, j), &p)?;
                        (hecke_apply(&h, &hs, &xs, j, &q, false)?, q.times(&f_mu_sigma(nu, w, &xs, &p)?))
                    } else {
                        let h = g_mu_sigma(nu, w, &xs, &p)?;
                        let hs = g_mu_sigma(nu, w, &swapped(&xs, j), &p)?;
                        (hecke_apply(&h, &hs, &xs, j, &q, true)?, g_mu_sigma(nu, sw, &xs, &p)?)
                    };
                    out.record(t, || format!("nu={nu} sigma={w:?} j={}", j + 1), lhs, rhs);
                }
                Ok(out)
            })
        }
    }
}

fn permuted_rainbow(parts: &[i64], sigma: &[usize]) -> ColComp {
    ColComp::from_rainbow(&sigma.iter().map(|&k| parts[k]).collect::<Vec<_>>())
}

/// Antisymmetrization of rainbow g and G over the Young subgroup of the profile.
/// G is checked with two spectral values.
pub fn verify_antisym(mu: &ColComp, nu: &ColComp, trials: usize, seed: u64) -> Result<IdentityReport, LatticeError> {
    let lambda = mu.profile();
    if lambda != nu.profile() {
        return Err(LatticeError::Composition(format!("{mu} and {nu} have different colour profiles")));
    }
    let m: usize = lambda.iter().sum();
    if m > 4 {
        return Err(LatticeError::Precondition(format!("|lambda| = {m} exceeds 4")));
    }
    let group = young_subgroup(&lambda);
    let mu_parts: Vec<i64> = mu.blocks().iter().flatten().copied().collect();
    let nu_parts: Vec<i64> = nu.blocks().iter().flatten().copied().collect();
    let mu_r = mu.rainbow();
    let name = format!("antisym mu={mu} nu={nu}");
    run_trials(name, trials, seed, 0, Vec::new(), |t, rng| {
        let p = Params::new(draw(rng, &[]), draw(rng, &[]))?;
        let xs = draw_distinct(rng, m);
        let mut out = Outcome::default();
        let mut lhs = Rat::zero();
        for s in &group {
            let term = g_mu(&permuted_rainbow(&mu_parts, s), &xs, &p)?;
            lhs = if inversions(s) % 2 == 0 { lhs.plus(&term) } else { lhs.minus(&term) };
        }
        out.record(t, || "g".into(), lhs, g_mu(mu, &xs, &p)?);
        let ys = &xs[..2.min(m)];
        let mut lhs = Rat::zero();
        for s in &group {
            let term = g_skew(&mu_r, &permuted_rainbow(&nu_parts, s), ys, &p)?;
            lhs = if inversions(s) % 2 == 0 { lhs.plus(&term) } else { lhs.minus(&term) };
        }
        out.record(t, || "G".into(), lhs, g_skew(mu, nu, ys, &p)?);
        Ok(out)
    })
}

/// Compositions of the given profile with |kappa| - |nu| in [0, cap], parts >= 0.
fn compositions_up_to(profile: &[usize], nu: &ColComp, cap: usize) -> Vec<ColComp> {
    let bound = nu.max_part().unwrap_or(0) + cap as i64 + 1;
    enumerate_compositions(profile, bound)
        .into_iter()
        .filter(|k| {
            let d = k.weight() - nu.weight();
            d >= 0 && d <= cap as i64
        })
        .collect()
}

/// The starting compositions: Delta and every one-part move of it.
fn cauchy_bases(n: usize, nn: usize) -> Vec<ColComp> {
    let delta = ColComp::delta(n, nn);
    let mut v = vec![delta.clone()];
    for i in 0..n {
        let mut bl = delta.blocks().to_vec();
        if let Some(last) = bl[i].last_mut() {
            *last += 1;
            v.push(ColComp::new(bl).expect("still increasing"));
        }
    }
    v
}

fn series_const(r: &Rat, cap: usize) -> TSeries {
    TSeries::monomial(r.clone(), 0, cap)
}

fn series_coeffs(s: &TSeries, cap: usize) -> String {
    (0..=cap).map(|k| s.coeff(k).to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(PartialEq)]
struct Coeffs(String);

impl fmt::Display for Coeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// Cauchy identities compared coefficientwise in t after x_i -> t xi_i, with xi random.
/// For gG the spin is scaled to t s0 as well; the profile is N^n with two x values.
pub fn verify_cauchy(kind: CauchyKind, n: usize, nn: usize, cap: usize, trials: usize, seed: u64) -> Result<IdentityReport, LatticeError> {
    if n == 0 || n > 2 || nn == 0 || nn > 2 || cap > 4 {
        return Err(LatticeError::Precondition(format!("need n <= 2, N <= 2, cap <= 4; got n={n} N={nn} cap={cap}")));
    }
    let profile = vec![nn; n];
    let bases = cauchy_bases(n, nn);
    let sums: Vec<(ColComp, Vec<ColComp>)> =
        bases.iter().map(|nu| (nu.clone(), compositions_up_to(&profile, nu, cap))).collect();
    let px = 2;
    let name = format!("cauchy {kind} n={n} N={nn} cap={cap}");
    run_trials(name, trials, seed, 0, Vec::new(), |t, rng| {
        let q = draw(rng, &[]);
        let xi = draw_distinct(rng, px);
        let tt = TSeries::t(cap);
        let xs: Vec<TSeries> = xi.iter().map(|v| tt.times(&series_const(v, cap))).collect();
        let qs = series_const(&q, cap);
        let mut out = Outcome::default();
        match kind {
            CauchyKind::GG => {
                let m = n * nn;
                let ys: Vec<TSeries> = draw_distinct(rng, m).iter().map(|v| series_const(v, cap)).collect();
                let s = tt.times(&series_const(&draw(rng, &[]), cap));
                let p = Params::new(qs.clone(), s)?;
                let mut prod = TSeries::one().with_cap(cap);
                for x in &xs {
                    for y in &ys {
                        let xy = x.times(y);
                        let num = TSeries::one().minus(&qs.times(&xy));
                        let den = TSeries::one().minus(&xy);
                        prod = prod.times(&num.over(&den).ok_or(ModelError::Pole("1 - x y"))?);
                    }
                }
                for (nu, kappas) in &sums {
                    let mut lhs = TSeries::zero().with_cap(cap);
                    for k in kappas {
                        let gk = g_skew(k, nu, &xs, &p)?;
                        if gk.is_zero() {
                            continue;
                        }
                        lhs = lhs.plus(&gk.times(&g_mu(k, &ys, &p)?));
                    }
                    let rhs = prod.times(&g_mu(nu, &ys, &p)?);
                    out.record(t, || format!("nu={nu}"), Coeffs(series_coeffs(&lhs, cap)), Coeffs(series_coeffs(&rhs, cap)));
                }
            }
            CauchyKind::SkewLlt => {
                let ys: Vec<TSeries> = draw_distinct(rng, nn).iter().map(|v| series_const(v, cap)).collect();
                let qinv = q.inverse().ok_or(ModelError::ZeroParameter("q"))?;
                let qpow = |k: i64| series_const(&qinv.powu(k as u32), cap);
                let delta = ColComp::delta(n, nn);
                let mut prod = TSeries::one().with_cap(cap);
                for x in &xs {
                    for y in &ys {
                        let xy = x.times(y);
                        let mut poch = TSeries::one();
                        for k in 0..n {
                            poch = poch.times(&TSeries::one().minus(&qs.powu(k as u32).times(&xy)));
                        }
                        prod = prod.times(&poch.inverse().ok_or(ModelError::Pole("(xy; q)_n"))?);
                    }
                }
                for (nu, mus) in &sums {
                    let mut lhs = TSeries::zero().with_cap(cap);
                    for mu in mus {
                        let gk = llt_poly(mu, nu, &xs, &qs)?;
                        if gk.is_zero() {
                            continue;
                        }
                        lhs = lhs.plus(&qpow(psi2(mu)).times(&gk).times(&llt_poly(mu, &delta, &ys, &qs)?));
                    }
                    let rhs = prod.times(&qpow(psi2(nu))).times(&llt_poly(nu, &delta, &ys, &qs)?);
                    out.record(t, || format!("nu={nu}"), Coeffs(series_coeffs(&lhs, cap)), Coeffs(series_coeffs(&rhs, cap)));
                }
            }
        }
        Ok(out)
    })
}
