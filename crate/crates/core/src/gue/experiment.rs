use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::colour::{pcol_marginal, ColourSequence};
use crate::lattice::{llt_poly, psi2, ColComp};
use crate::qfield::{Field, Rat, Ring};

use super::{sample_corners_many, CompensatedSum, GueError};

/// Coordinates of level k: l_i = Q_i t + (Q_i t)^{1/2} x_i with Q_i = q^{n - ceil(i/k)}.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScalingMap {
    pub n: usize,
    pub k: usize,
    pub t: f64,
    pub q: f64,
}

impl ScalingMap {
    /// Q_i t for the 1-based index i.
    pub fn drift(&self, i: usize) -> f64 {
        self.q.powi((self.n - i.div_ceil(self.k)) as i32) * self.t
    }

    pub fn to_real(&self, i: usize, ell: f64) -> f64 {
        let d = self.drift(i);
        (ell - d) / d.sqrt()
    }

    pub fn to_lattice(&self, i: usize, x: f64) -> f64 {
        let d = self.drift(i);
        d + d.sqrt() * x
    }
}

/// One reachable composition of the first step, without its Poisson factor.
#[derive(Clone, Debug)]
struct State {
    degree: usize,
    /// Part of each colour.
    parts: Vec<i64>,
    /// Sorted coordinates.
    coords: Vec<i64>,
    /// None when two colours share a coordinate.
    colours: Option<ColourSequence>,
    weight: f64,
}

/// Exact law of the first step Delta -> mu of the finite-t chain, grouped by |mu|.
///
/// P(mu) = q^{-2 psi(mu)} G_mu(1) G_mu(Pl_t) e^{-ct} with c = 1 + q + ... + q^{n-1}, and
/// G_mu(Pl_t) = t^{|mu|} chains(mu) / |mu|!. Every degree's weights are checked to sum to
/// c^d exactly, so |mu| is Poisson(ct) and the tail beyond a cut-off is a Poisson tail.
pub struct FirstStepLaw {
    n: usize,
    q: Rat,
    c: f64,
    states: Vec<State>,
    max_degree: usize,
}

fn colour_of(parts: &[i64]) -> Option<ColourSequence> {
    let mut idx: Vec<usize> = (0..parts.len()).collect();
    idx.sort_by_key(|&i| parts[i]);
    if idx.windows(2).any(|w| parts[w[0]] == parts[w[1]]) {
        return None;
    }
    ColourSequence::new(parts.len(), idx.into_iter().map(|i| i + 1).collect()).ok()
}

impl FirstStepLaw {
    pub fn build(n: usize, q: &Rat, max_degree: usize) -> Result<Self, GueError> {
        if !(q > &Rat::zero() && q < &Rat::one()) {
            return Err(GueError::QRange(q.to_string()));
        }
        if !(1..=3).contains(&n) {
            return Err(GueError::Unsupported(format!("rank {n}; the first-step law is implemented for n <= 3")));
        }
        let one = [Rat::one()];
        let delta = ColComp::delta(n, 1);
        let c_exact = (0..n).fold(Rat::zero(), |a, i| a + q.powu(i as u32));
        let mut level: HashMap<ColComp, Rat> = HashMap::from([(delta.clone(), Rat::one())]);
        let mut states = Vec::new();
        for d in 0..=max_degree {
            let mut total = Rat::zero();
            let (mut pending, mut exact) = (Vec::new(), Vec::new());
            let mut keyed: Vec<(&ColComp, &Rat)> = level.iter().collect();
            keyed.sort_by(|a, b| a.0.blocks().cmp(b.0.blocks()));
            for (mu, chains) in keyed {
                let g1 = llt_poly(mu, &delta, &one, q)?;
                let w = q.powi(-psi2(mu)).expect("q nonzero") * g1 * chains;
                total += &w;
                let parts: Vec<i64> = mu.blocks().iter().map(|b| b[0]).collect();
                let mut coords = parts.clone();
                coords.sort();
                pending.push(State { degree: d, parts: parts.clone(), coords, colours: colour_of(&parts), weight: 0.0 });
                exact.push(w);
            }
            let want = c_exact.powu(d as u32);
            // weights divided by c^d, so each degree carries total mass one
            for (mut st, w) in pending.drain(..).zip(exact.drain(..)) {
                st.weight = (w / &want).to_f64().unwrap_or(f64::NAN);
                states.push(st);
            }
            if total != want {
                return Err(GueError::Certificate { degree: d, got: total.to_string(), want: want.to_string() });
            }
            if d == max_degree {
                break;
            }
            let mut next: HashMap<ColComp, Rat> = HashMap::new();
            for (k, v) in &level {
                for i in 0..n {
                    let mut blocks = k.blocks().to_vec();
                    blocks[i][0] += 1;
                    let k2 = ColComp::new(blocks)?;
                    let w = llt_poly(&k2, k, &one, q)?;
                    if !w.is_zero() {
                        *next.entry(k2).or_insert_with(Rat::zero) += w * v;
                    }
                }
            }
            level = next;
        }
        Ok(Self { n, q: q.clone(), c: c_exact.to_f64().unwrap_or(f64::NAN), states, max_degree })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// (part of each colour, probability at time t) for every enumerated composition.
    pub fn probabilities(&self, t: f64) -> Vec<(Vec<i64>, f64)> {
        self.states.iter().map(|s| (s.parts.clone(), s.weight * self.log_poisson(t, s.degree).exp())).collect()
    }

    fn log_poisson(&self, t: f64, d: usize) -> f64 {
        let lf: f64 = (1..=d).map(|k| (k as f64).ln()).sum();
        -self.c * t + d as f64 * (self.c * t).ln() - lf
    }

    /// Smallest cut-off D with a certified bound on the mass of degrees above D, and the bound.
    pub fn cutoff(&self, t: f64, tol: f64) -> Result<(usize, f64), GueError> {
        let mean = self.c * t;
        for dd in 0..self.max_degree {
            if (dd + 2) as f64 <= mean {
                continue;
            }
            // Poisson tail beyond dd is at most p(dd+1) / (1 - mean/(dd+2))
            let bound = self.log_poisson(t, dd + 1).exp() / (1.0 - mean / (dd + 2) as f64);
            if bound < tol {
                return Ok((dd, bound));
            }
        }
        Err(GueError::Truncation { t, max_degree: self.max_degree })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Moments {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance_std_error: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentPoint {
    pub t: f64,
    pub degree_cutoff: usize,
    pub tv_distance: f64,
    pub truncation_bound: f64,
    /// Mass on compositions where two colours share a coordinate.
    pub unresolved_mass: f64,
    pub colour_marginal: BTreeMap<String, f64>,
    pub coordinate_moments: Moments,
    pub gue_moments: Moments,
    pub moments_within_bands: bool,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: usize,
    pub height: usize,
    pub t_list: Vec<f64>,
    pub q: Rat,
    pub seed: u64,
    pub trials: usize,
    /// Certified truncation error allowed per t.
    pub tail_tolerance: f64,
    /// Engineering threshold for the final TV distance.
    pub tv_threshold: f64,
    pub max_degree: usize,
    /// Width of the Monte Carlo bands, in standard errors.
    pub sigmas: f64,
}

impl ExperimentConfig {
    pub fn new(n: usize, height: usize, t_list: Vec<f64>, q: Rat, seed: u64, trials: usize) -> Self {
        Self { n, height, t_list, q, seed, trials, tail_tolerance: 1e-8, tv_threshold: 0.05, max_degree: 400, sigmas: 4.0 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub height: usize,
    pub q: String,
    pub tv_threshold: f64,
    pub points: Vec<ExperimentPoint>,
    /// TV and TV + truncation bound both strictly decrease along the t list.
    pub tv_monotone: bool,
    pub final_tv_below_threshold: bool,
    pub final_moments_within_bands: bool,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.tv_monotone && self.final_tv_below_threshold && self.final_moments_within_bands
    }
}

fn gue_reference(trials: usize, seed: u64) -> Moments {
    let xs: Vec<f64> = sample_corners_many(1, trials, seed).into_iter().map(|p| p.levels[0][0]).collect();
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    Moments {
        mean: vec![mean],
        variance: vec![var],
        mean_std_error: Some((var / k).sqrt()),
        variance_std_error: Some(var * (2.0 / (k - 1.0)).sqrt()),
    }
}

/// Exact finite-t colour law against the limiting kernel, and rescaled coordinate moments
/// against sampled GUE corners. Only the first step (N = 1) is implemented.
pub fn convergence_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, GueError> {
    if cfg.height != 1 {
        return Err(GueError::Unsupported(format!("N = {}; only the first step N = 1 is implemented", cfg.height)));
    }
    if cfg.t_list.is_empty() || cfg.t_list.iter().any(|&t| !(t > 0.0)) || cfg.trials < 2 {
        return Err(GueError::Unsupported("t values must be positive and trials >= 2".into()));
    }
    // grow the exact law until the largest t is certifiable
    let tmax = cfg.t_list.iter().copied().fold(0.0, f64::max);
    let c = (0..cfg.n).map(|i| cfg.q.to_f64().unwrap_or(0.0).powi(i as i32)).sum::<f64>();
    let mut deg = ((c * tmax) + 8.0 * (c * tmax).sqrt() + 20.0) as usize;
    let law = loop {
        let l = FirstStepLaw::build(cfg.n, &cfg.q, deg.min(cfg.max_degree))?;
        if deg >= cfg.max_degree || l.cutoff(tmax, cfg.tail_tolerance).is_ok() {
            break l;
        }
        deg = (deg * 3 / 2).min(cfg.max_degree);
    };
    let limit: BTreeMap<ColourSequence, f64> = pcol_marginal(cfg.n, 1)?
        .into_iter()
        .map(|(k, v)| Ok((k, v.eval(&law.q).map_err(|_| GueError::QRange(law.q.to_string()))?.to_f64().unwrap_or(f64::NAN))))
        .collect::<Result<_, GueError>>()?;
    let gue = gue_reference(cfg.trials, cfg.seed);
    let qf = law.q.to_f64().unwrap_or(f64::NAN);
    let mut points = Vec::new();
    for &t in &cfg.t_list {
        let (cut, bound) = law.cutoff(t, cfg.tail_tolerance)?;
        let logp: Vec<f64> = (0..=cut).map(|d| law.log_poisson(t, d)).collect();
        let sm = ScalingMap { n: law.n, k: 1, t, q: qf };
        let mut colour: BTreeMap<ColourSequence, CompensatedSum> = BTreeMap::new();
        let mut unresolved = CompensatedSum::default();
        let mut mass = CompensatedSum::default();
        let mut m1 = vec![CompensatedSum::default(); law.n];
        let mut m2 = vec![CompensatedSum::default(); law.n];
        for s in law.states.iter().filter(|s| s.degree <= cut) {
            let p = s.weight * logp[s.degree].exp();
            mass.add(p);
            match &s.colours {
                Some(c) => colour.entry(c.clone()).or_default().add(p),
                None => unresolved.add(p),
            }
            for (i, &l) in s.coords.iter().enumerate() {
                let x = sm.to_real(i + 1, l as f64);
                m1[i].add(p * x);
                m2[i].add(p * x * x);
            }
        }
        let total = mass.value();
        let mut tv = CompensatedSum::default();
        for (c, lim) in &limit {
            tv.add((colour.get(c).map_or(0.0, CompensatedSum::value) - lim).abs());
        }
        tv.add(unresolved.value());
        let mean: Vec<f64> = m1.iter().map(|s| s.value() / total).collect();
        let variance: Vec<f64> = m2.iter().zip(&mean).map(|(s, mu)| s.value() / total - mu * mu).collect();
        let (ms, vs) = (gue.mean_std_error.unwrap_or(0.0), gue.variance_std_error.unwrap_or(0.0));
        let within = mean.iter().all(|m| (m - gue.mean[0]).abs() <= cfg.sigmas * ms)
            && variance.iter().all(|v| (v - gue.variance[0]).abs() <= cfg.sigmas * vs);
        points.push(ExperimentPoint {
            t,
            degree_cutoff: cut,
            tv_distance: 0.5 * tv.value(),
            truncation_bound: bound,
            unresolved_mass: unresolved.value(),
            colour_marginal: colour.iter().map(|(k, v)| (k.to_string(), v.value())).collect(),
            coordinate_moments: Moments { mean, variance, mean_std_error: None, variance_std_error: None },
            gue_moments: gue.clone(),
            moments_within_bands: within,
        });
    }
    let tv_monotone = points.windows(2).all(|w| {
        w[1].tv_distance < w[0].tv_distance && w[1].tv_distance + w[1].truncation_bound < w[0].tv_distance + w[0].truncation_bound
    });
    let last = points.last().expect("nonempty t list");
    Ok(ExperimentReport {
        n: cfg.n,
        height: cfg.height,
        q: cfg.q.to_string(),
        tv_threshold: cfg.tv_threshold,
        tv_monotone,
        final_tv_below_threshold: last.tv_distance + last.truncation_bound < cfg.tv_threshold,
        final_moments_within_bands: last.moments_within_bands,
        points,
    })
}
