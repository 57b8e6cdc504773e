use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::qfield::{random_rat_avoiding, Field, Rat, Ring};

use super::fused::fused_weight;
use super::state::{fmt_state, StateVec};
use super::weights::{l_weight, m_weight, r_weight, Params};
use super::ModelError;

const DRAW_BOUND: i64 = 10_000;
const MAX_REDRAWS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum YbeKind {
    RLLa,
    RLLb,
    RLLc,
    #[serde(rename = "master")]
    Master,
    #[serde(rename = "reduced")]
    Reduced,
}

impl fmt::Display for YbeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            YbeKind::RLLa => "RLLa",
            YbeKind::RLLb => "RLLb",
            YbeKind::RLLc => "RLLc",
            YbeKind::Master => "master",
            YbeKind::Reduced => "reduced",
        };
        write!(f, "{s}")
    }
}

impl FromStr for YbeKind {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rlla" => Ok(YbeKind::RLLa),
            "rllb" => Ok(YbeKind::RLLb),
            "rllc" => Ok(YbeKind::RLLc),
            "master" => Ok(YbeKind::Master),
            "reduced" => Ok(YbeKind::Reduced),
            _ => Err(ModelError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct YbeFailure {
    pub trial: usize,
    pub boundary: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct YbeReport {
    pub kind: YbeKind,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub checked: usize,
    pub failures: Vec<YbeFailure>,
}

impl YbeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Dense table over four indices.
struct Tab {
    dims: [usize; 4],
    data: Vec<Rat>,
}

impl Tab {
    fn build<E>(
        dims: [usize; 4],
        f: impl Fn(usize, usize, usize, usize) -> Result<Rat, E>,
    ) -> Result<Self, E> {
        let mut data = Vec::with_capacity(dims.iter().product());
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    for l in 0..dims[3] {
                        data.push(f(i, j, k, l)?);
                    }
                }
            }
        }
        Ok(Tab { dims, data })
    }

    #[inline]
    fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Rat {
        let d = &self.dims;
        &self.data[((i * d[1] + j) * d[2] + k) * d[3] + l]
    }
}

fn draw(rng: &mut ChaCha8Rng) -> Rat {
    random_rat_avoiding(rng, DRAW_BOUND, &[Rat::one(), Rat::one().negated()])
}

fn lm_tab(n: usize, z: &Rat, p: &Params<Rat>, m: bool) -> Result<Tab, ModelError> {
    let st = 1usize << n;
    Tab::build([st, n + 1, st, n + 1], |a, b, c, d| {
        if m {
            m_weight(n, a as StateVec, b, c as StateVec, d, z, p)
        } else {
            l_weight(n, a as StateVec, b, c as StateVec, d, z, p)
        }
    })
}

fn r_tab(n: usize, z: &Rat, q: &Rat) -> Result<Tab, ModelError> {
    Tab::build([n + 1; 4], |a, b, c, d| r_weight(a, b, c, d, z, q))
}

fn f_tab(n: usize, x: &Rat, p: &Params<Rat>, r2: &Rat) -> Result<Tab, ModelError> {
    let st = 1usize << n;
    Tab::build([st; 4], |a, b, c, d| {
        fused_weight(n, a as StateVec, b as StateVec, c as StateVec, d as StateVec, x, p, r2)
    })
}

struct Outcome {
    checked: usize,
    failures: Vec<YbeFailure>,
}

fn record(out: &mut Outcome, trial: usize, boundary: impl FnOnce() -> String, l: Rat, r: Rat) {
    out.checked += 1;
    if l != r {
        out.failures.push(YbeFailure { trial, boundary: boundary(), lhs: l.to_string(), rhs: r.to_string() });
    }
}

fn mul3(a: &Rat, b: &Rat, c: &Rat) -> Option<Rat> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        None
    } else {
        Some(a.times(b).times(c))
    }
}

fn run_trial(kind: YbeKind, n: usize, trial: usize, seed: u64) -> Result<Outcome, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    for _ in 0..MAX_REDRAWS {
        match try_trial(kind, n, trial, &mut rng) {
            Err(ModelError::Pole(_)) | Err(ModelError::ZeroParameter(_)) => continue,
            other => return other,
        }
    }
    Err(ModelError::RedrawLimit)
}

fn try_trial(kind: YbeKind, n: usize, trial: usize, rng: &mut ChaCha8Rng) -> Result<Outcome, ModelError> {
    let st = 1usize << n;
    let h = n + 1;
    let mut out = Outcome { checked: 0, failures: Vec::new() };
    let q = draw(rng);
    match kind {
        YbeKind::RLLa => {
            let (s, x, y) = (draw(rng), draw(rng), draw(rng));
            let p = Params::new(q.clone(), s)?;
            let lx = lm_tab(n, &x, &p, false)?;
            let ly = lm_tab(n, &y, &p, false)?;
            let r = r_tab(n, &y.over(&x).ok_or(ModelError::ZeroParameter("x"))?, &q)?;
            for a1 in 0..h {
                for a2 in 0..h {
                    for b1 in 0..h {
                        for b2 in 0..h {
                            for aa in 0..st {
                                for bb in 0..st {
                                    let (mut l, mut rr) = (Rat::zero(), Rat::zero());
                                    for c1 in 0..h {
                                        for c2 in 0..h {
                                            for cc in 0..st {
                                                if let Some(v) = mul3(r.get(a2, a1, c2, c1), lx.get(aa, c1, cc, b1), ly.get(cc, c2, bb, b2)) {
                                                    l = l.plus(&v);
                                                }
                                                if let Some(v) = mul3(ly.get(aa, a2, cc, c2), lx.get(cc, a1, bb, c1), r.get(c2, c1, b2, b1)) {
                                                    rr = rr.plus(&v);
                                                }
                                            }
                                        }
                                    }
                                    record(&mut out, trial, || format!("a1={a1} a2={a2} b1={b1} b2={b2} A={} B={}", fmt_state(n, aa as u32), fmt_state(n, bb as u32)), l, rr);
                                }
                            }
                        }
                    }
                }
            }
        }
        YbeKind::RLLb => {
            let (s, x, z) = (draw(rng), draw(rng), draw(rng));
            let p = Params::new(q.clone(), s)?;
            let lx = lm_tab(n, &x, &p, false)?;
            let mz = lm_tab(n, &z, &p, true)?;
            let arg = q.times(&x).times(&z).inverse().ok_or(ModelError::ZeroParameter("qxz"))?;
            let r = r_tab(n, &arg, &q)?;
            for a1 in 0..h {
                for a3 in 0..h {
                    for b1 in 0..h {
                        for b3 in 0..h {
                            for aa in 0..st {
                                for bb in 0..st {
                                    let (mut l, mut rr) = (Rat::zero(), Rat::zero());
                                    for c1 in 0..h {
                                        for c3 in 0..h {
                                            for cc in 0..st {
                                                if let Some(v) = mul3(lx.get(aa, a1, cc, c1), r.get(a3, c1, c3, b1), mz.get(cc, c3, bb, b3)) {
                                                    l = l.plus(&v);
                                                }
                                                if let Some(v) = mul3(mz.get(aa, a3, cc, c3), r.get(c3, a1, b3, c1), lx.get(cc, c1, bb, b1)) {
                                                    rr = rr.plus(&v);
                                                }
                                            }
                                        }
                                    }
                                    record(&mut out, trial, || format!("a1={a1} a3={a3} b1={b1} b3={b3} A={} B={}", fmt_state(n, aa as u32), fmt_state(n, bb as u32)), l, rr);
                                }
                            }
                        }
                    }
                }
            }
        }
        YbeKind::RLLc => {
            let (s, y, z) = (draw(rng), draw(rng), draw(rng));
            let p = Params::new(q.clone(), s)?;
            let my = lm_tab(n, &y, &p, true)?;
            let mz = lm_tab(n, &z, &p, true)?;
            let r = r_tab(n, &y.over(&z).ok_or(ModelError::ZeroParameter("z"))?, &q)?;
            for a2 in 0..h {
                for a3 in 0..h {
                    for b2 in 0..h {
                        for b3 in 0..h {
                            for aa in 0..st {
                                for bb in 0..st {
                                    let (mut l, mut rr) = (Rat::zero(), Rat::zero());
                                    for c2 in 0..h {
                                        for c3 in 0..h {
                                            for cc in 0..st {
                                                if let Some(v) = mul3(my.get(aa, a2, cc, c2), mz.get(cc, a3, bb, c3), r.get(c3, c2, b3, b2)) {
                                                    l = l.plus(&v);
                                                }
                                                if let Some(v) = mul3(r.get(a3, a2, c3, c2), mz.get(aa, c3, cc, b3), my.get(cc, c2, bb, b2)) {
                                                    rr = rr.plus(&v);
                                                }
                                            }
                                        }
                                    }
                                    record(&mut out, trial, || format!("a2={a2} a3={a3} b2={b2} b3={b3} A={} B={}", fmt_state(n, aa as u32), fmt_state(n, bb as u32)), l, rr);
                                }
                            }
                        }
                    }
                }
            }
        }
        YbeKind::Master => {
            let (x, y, r, s, t) = (draw(rng), draw(rng), draw(rng), draw(rng), draw(rng));
            let ps = Params::new(q.clone(), s.clone())?;
            let pt = Params::new(q.clone(), t)?;
            let r2 = r.times(&r);
            let s2 = s.times(&s);
            let sxy = s.times(&x).over(&y).ok_or(ModelError::ZeroParameter("y"))?;
            let f1 = f_tab(n, &sxy, &ps, &r2)?;
            let f2 = f_tab(n, &x, &pt, &r2)?;
            let f3 = f_tab(n, &y, &pt, &s2)?;
            for a1 in 0..st {
                for a2 in 0..st {
                    for a3 in 0..st {
                        for b1 in 0..st {
                            for b2 in 0..st {
                                for b3 in 0..st {
                                    let (mut l, mut rr) = (Rat::zero(), Rat::zero());
                                    for c1 in 0..st {
                                        for c2 in 0..st {
                                            let w1 = f1.get(a2, a1, c2, c1);
                                            if !w1.is_zero() {
                                                for c3 in 0..st {
                                                    if let Some(v) = mul3(w1, f2.get(a3, c1, c3, b1), f3.get(c3, c2, b3, b2)) {
                                                        l = l.plus(&v);
                                                    }
                                                }
                                            }
                                            let w1r = f1.get(c2, c1, b2, b1);
                                            if !w1r.is_zero() {
                                                for c3 in 0..st {
                                                    if let Some(v) = mul3(f3.get(a3, a2, c3, c2), f2.get(c3, a1, b3, c1), w1r) {
                                                        rr = rr.plus(&v);
                                                    }
                                                }
                                            }
                                        }
                                    }
                                    record(&mut out, trial, || {
                                        format!(
                                            "A1={} A2={} A3={} B1={} B2={} B3={}",
                                            fmt_state(n, a1 as u32), fmt_state(n, a2 as u32), fmt_state(n, a3 as u32),
                                            fmt_state(n, b1 as u32), fmt_state(n, b2 as u32), fmt_state(n, b3 as u32)
                                        )
                                    }, l, rr);
                                }
                            }
                        }
                    }
                }
            }
        }
        YbeKind::Reduced => {
            let (x, y, r, s) = (draw(rng), draw(rng), draw(rng), draw(rng));
            let pr = Params::new(q.clone(), r.clone())?;
            let ps = Params::new(q.clone(), s)?;
            let rxy = r.times(&x).over(&y).ok_or(ModelError::ZeroParameter("y"))?;
            let lr = lm_tab(n, &rxy, &pr, false)?;
            let ls = lm_tab(n, &x, &ps, false)?;
            let f = f_tab(n, &y, &ps, &r.times(&r))?;
            for a in 0..h {
                for b in 0..h {
                    for a2 in 0..st {
                        for a3 in 0..st {
                            for b2 in 0..st {
                                for b3 in 0..st {
                                    let (mut l, mut rr) = (Rat::zero(), Rat::zero());
                                    for c in 0..h {
                                        for c2 in 0..st {
                                            for c3 in 0..st {
                                                if let Some(v) = mul3(lr.get(a2, a, c2, c), ls.get(a3, c, c3, b), f.get(c3, c2, b3, b2)) {
                                                    l = l.plus(&v);
                                                }
                                                if let Some(v) = mul3(f.get(a3, a2, c3, c2), ls.get(c3, a, b3, c), lr.get(c2, c, b2, b)) {
                                                    rr = rr.plus(&v);
                                                }
                                            }
                                        }
                                    }
                                    record(&mut out, trial, || {
                                        format!(
                                            "a={a} b={b} A2={} A3={} B2={} B3={}",
                                            fmt_state(n, a2 as u32), fmt_state(n, a3 as u32),
                                            fmt_state(n, b2 as u32), fmt_state(n, b3 as u32)
                                        )
                                    }, l, rr);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Checks a Yang-Baxter equation exactly at `trials` seeded random rational points,
/// over every boundary assignment.
pub fn verify_ybe(kind: YbeKind, n: usize, trials: usize, seed: u64) -> Result<YbeReport, ModelError> {
    if n == 0 || n > 3 {
        return Err(ModelError::Rank(n));
    }
    let outcomes: Vec<Result<Outcome, ModelError>> =
        (0..trials).into_par_iter().map(|t| run_trial(kind, n, t, seed)).collect();
    let mut report = YbeReport { kind, n, trials, seed, checked: 0, failures: Vec::new() };
    for o in outcomes {
        let o = o?;
        report.checked += o.checked;
        report.failures.extend(o.failures);
    }
    Ok(report)
}
