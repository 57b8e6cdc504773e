use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, RwLock};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::{g_mu_sigma_s0, ColComp};
use crate::qfield::{q_pochhammer, Field, LPoly, QRat, Rat, Ring};

use super::seq::{step_stats, successors, ColourSequence};
use super::ColourError;

/// g^c_Delta(m^n; Q^[m]) at s = 0 as a Laurent polynomial in q; the empty sequence gives 1.
pub fn g_delta_q_laurent(c: &ColourSequence) -> Result<LPoly, ColourError> {
    if c.is_empty() {
        return Ok(LPoly::one());
    }
    let (n, m) = (c.n(), c.m());
    let xs: Vec<LPoly> = (0..n).flat_map(|k| std::iter::repeat_n(LPoly::q_pow((n - 1 - k) as i64), m)).collect();
    Ok(g_mu_sigma_s0(&ColComp::delta(n, m), c.word(), &xs, &LPoly::q_pow(-1))?)
}

pub fn g_delta_q(c: &ColourSequence) -> Result<QRat, ColourError> {
    Ok(g_delta_q_laurent(c)?.to_qrat())
}

/// Memoized g^c_Delta values shared across kernel evaluations.
#[derive(Default)]
pub struct GTable {
    cache: RwLock<HashMap<ColourSequence, QRat>>,
}

impl GTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, c: &ColourSequence) -> Result<QRat, ColourError> {
        if let Some(v) = self.cache.read().expect("cache lock").get(c) {
            return Ok(v.clone());
        }
        let v = g_delta_q(c)?;
        self.cache.write().expect("cache lock").insert(c.clone(), v.clone());
        Ok(v)
    }
}

fn binom2(k: usize) -> i64 {
    (k * k.saturating_sub(1) / 2) as i64
}

/// (-1)^n q^{C(nm+n+1,2) - C(nm+1,2)} (1-q)^{nm} / (q;q)_n^{2m+1}.
pub fn step_prefactor(n: usize, m: usize) -> QRat {
    let e = binom2(n * m + n + 1) - binom2(n * m + 1);
    let one_minus_q = QRat::one().minus(&QRat::q());
    let qq = q_pochhammer(&QRat::q(), n);
    let v = QRat::q_pow(e)
        .times(&one_minus_q.powu((n * m) as u32))
        .over(&qq.powu((2 * m + 1) as u32))
        .expect("(q;q)_n is nonzero");
    if n % 2 == 1 {
        v.negated()
    } else {
        v
    }
}

/// Expansion coefficient Theta(i; j) = prefactor * Psi(i; j)|_{q -> 1/q} on interlacing pairs.
pub fn theta(i: &ColourSequence, j: &ColourSequence) -> Result<QRat, ColourError> {
    let st = step_stats(i, j)?;
    Ok(step_prefactor(i.n(), i.m()).times(&QRat::q_pow(-st.psi_exp)))
}

/// One row of the colour kernel with its sum certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelTable {
    pub source: ColourSequence,
    pub entries: BTreeMap<ColourSequence, QRat>,
    pub certificate: QRat,
}

pub fn pcol_step(c: &ColourSequence) -> Result<KernelTable, ColourError> {
    pcol_step_with(&GTable::new(), c)
}

/// Entries use q^{-xi}; Theta uses Psi at inverted q, and the two agree on interlacing pairs.
pub fn pcol_step_with(gt: &GTable, c: &ColourSequence) -> Result<KernelTable, ColourError> {
    let base = gt.get(c)?;
    let pre = step_prefactor(c.n(), c.m());
    let rows: Vec<(ColourSequence, QRat)> = successors(c)
        .into_par_iter()
        .map(|j| {
            let st = step_stats(c, &j)?;
            let gj = gt.get(&j)?;
            let v = pre.times(&QRat::q_pow(-st.xi)).times(&gj).over(&base).ok_or(ColourError::ZeroG(c.to_string()))?;
            Ok((j, v))
        })
        .collect::<Result<_, ColourError>>()?;
    let entries: BTreeMap<ColourSequence, QRat> = rows.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    let certificate = entries.values().fold(QRat::zero(), |a, v| a.plus(v));
    if certificate != QRat::one() {
        return Err(ColourError::Certificate(c.to_string(), certificate.to_string()));
    }
    Ok(KernelTable { source: c.clone(), entries, certificate })
}

/// Law of c^[m] after m kernel steps from the empty sequence.
pub fn pcol_marginal(n: usize, m: usize) -> Result<BTreeMap<ColourSequence, QRat>, ColourError> {
    let gt = GTable::new();
    let mut level = BTreeMap::new();
    level.insert(ColourSequence::empty(n), QRat::one());
    for _ in 0..m {
        let mut next: BTreeMap<ColourSequence, QRat> = BTreeMap::new();
        for (c, p) in &level {
            for (j, v) in pcol_step_with(&gt, c)?.entries {
                let add = p.times(&v);
                let e = next.entry(j).or_insert_with(QRat::zero);
                *e = e.plus(&add);
            }
        }
        level = next;
    }
    Ok(level)
}

/// Level-by-level tree of kernel probabilities, each node carrying its marginal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PcolNode {
    pub sequence: ColourSequence,
    pub probability: QRat,
    pub children: Vec<PcolNode>,
}

/// Tree of successors down to `depth` levels. Nodes with several parents (n >= 3) appear
/// once under each parent, always labelled with their full marginal.
pub fn pcol_tree(n: usize, depth: usize) -> Result<PcolNode, ColourError> {
    let marg: Vec<BTreeMap<ColourSequence, QRat>> = (0..=depth).map(|m| pcol_marginal(n, m)).collect::<Result<_, _>>()?;
    fn build(c: &ColourSequence, depth: usize, marg: &[BTreeMap<ColourSequence, QRat>]) -> PcolNode {
        let m = c.m();
        let children = if m < depth {
            successors(c).into_iter().filter(|j| marg[m + 1].contains_key(j)).map(|j| build(&j, depth, marg)).collect()
        } else {
            Vec::new()
        };
        PcolNode { sequence: c.clone(), probability: marg[m][c].clone(), children }
    }
    Ok(build(&ColourSequence::empty(n), depth, &marg))
}

/// Closed-form joint law of an interlacing chain c^[1] ≺ ... ≺ c^[N] started from the empty sequence.
pub fn joint_law(chain: &[ColourSequence]) -> Result<QRat, ColourError> {
    let Some(last) = chain.last() else { return Ok(QRat::one()) };
    let n = last.n();
    let nn = chain.len();
    let mut prev = ColourSequence::empty(n);
    let mut xi = 0;
    for c in chain {
        if c.n() != n || c.m() != prev.m() + 1 {
            return Err(ColourError::Counts("chain levels must increase by one".into()));
        }
        match step_stats(&prev, c) {
            Ok(st) => xi += st.xi,
            Err(ColourError::NotInterlacing(..)) => return Ok(QRat::zero()),
            Err(e) => return Err(e),
        }
        prev = c.clone();
    }
    let qq = q_pochhammer(&QRat::q(), n);
    let mut v = QRat::q_pow(binom2(n * nn + 1) - xi)
        .times(&QRat::one().minus(&QRat::q()).powu((n as i64 * binom2(nn)) as u32))
        .over(&qq.powu((nn * nn) as u32))
        .expect("(q;q)_n is nonzero")
        .times(&g_delta_q(last)?);
    if (n * nn) % 2 == 1 {
        v = v.negated();
    }
    Ok(v)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PositivityReport {
    pub n: usize,
    pub m: usize,
    pub checked: usize,
    /// (sequence, P_col * Poincare^{m^2}) pairs that are not in N[q].
    pub violations: Vec<(ColourSequence, QRat)>,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// prod_{i=1}^n (1 - q^i) / (1 - q).
pub fn poincare(n: usize) -> QRat {
    let one_minus_q = QRat::one().minus(&QRat::q());
    (1..=n).fold(QRat::one(), |a, i| a.times(&QRat::one().minus(&QRat::q_pow(i as i64)).over(&one_minus_q).expect("1 - q")))
}

/// True when v is a polynomial in q with nonnegative integer coefficients.
pub fn in_n_q(v: &QRat) -> bool {
    let den = v.den();
    if !den.is_constant() {
        return false;
    }
    let d = den.coeff(0);
    let num = v.num().scale(&d.recip());
    num.in_n_q()
}

pub fn check_positivity(n: usize, m: usize) -> Result<PositivityReport, ColourError> {
    let marg = pcol_marginal(n, m)?;
    let scale = poincare(n).powu((m * m) as u32);
    let mut rep = PositivityReport { n, m, checked: 0, violations: Vec::new() };
    for (c, p) in marg {
        let v = p.times(&scale);
        rep.checked += 1;
        if !in_n_q(&v) {
            rep.violations.push((c, v));
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub n: usize,
    pub m: usize,
    pub checked: usize,
    pub failures: Vec<ColourSequence>,
}

impl ExpansionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// g^i(m) = sum_j Theta(i; j) g^j(m+1) for every level-m sequence i.
pub fn verify_expansion(n: usize, m: usize) -> Result<ExpansionReport, ColourError> {
    let gt = GTable::new();
    let sources = if m == 0 { vec![ColourSequence::empty(n)] } else { ColourSequence::all(n, m) };
    let mut rep = ExpansionReport { n, m, checked: 0, failures: Vec::new() };
    for i in sources {
        let mut sum = QRat::zero();
        for j in successors(&i) {
            sum = sum.plus(&theta(&i, &j)?.times(&gt.get(&j)?));
        }
        rep.checked += 1;
        if sum != gt.get(&i)? {
            rep.failures.push(i);
        }
    }
    Ok(rep)
}

/// Kernel rows evaluated at a numeric q in (0,1), cached by source.
pub struct ChainSampler {
    n: usize,
    q: Rat,
    gt: GTable,
    rows: Mutex<HashMap<ColourSequence, (Vec<ColourSequence>, Vec<Rat>)>>,
}

impl ChainSampler {
    pub fn new(n: usize, q: Rat) -> Result<Self, ColourError> {
        if q <= Rat::zero() || q >= Rat::one() {
            return Err(ColourError::QRange(q.to_string()));
        }
        Ok(ChainSampler { n, q, gt: GTable::new(), rows: Mutex::new(HashMap::new()) })
    }

    /// Successors of c with their exact probabilities at q.
    pub fn row(&self, c: &ColourSequence) -> Result<(Vec<ColourSequence>, Vec<Rat>), ColourError> {
        if let Some(r) = self.rows.lock().expect("row lock").get(c) {
            return Ok(r.clone());
        }
        let t = pcol_step_with(&self.gt, c)?;
        let mut seqs = Vec::new();
        let mut probs = Vec::new();
        for (j, v) in t.entries {
            let p = v.eval(&self.q).map_err(|e| ColourError::Eval(e.to_string()))?;
            if p < Rat::zero() {
                return Err(ColourError::Negative(c.to_string(), j.to_string()));
            }
            seqs.push(j);
            probs.push(p);
        }
        self.rows.lock().expect("row lock").insert(c.clone(), (seqs.clone(), probs.clone()));
        Ok((seqs, probs))
    }

    /// One chain of length `len` started from the empty sequence.
    pub fn sample(&self, len: usize, rng: &mut ChaCha8Rng) -> Result<Vec<ColourSequence>, ColourError> {
        let mut cur = ColourSequence::empty(self.n);
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let (seqs, probs) = self.row(&cur)?;
            let w: Vec<f64> = probs.iter().map(rat_to_f64).collect();
            let dist = WeightedIndex::new(&w).map_err(|e| ColourError::Eval(e.to_string()))?;
            cur = seqs[dist.sample(rng)].clone();
            out.push(cur.clone());
        }
        Ok(out)
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(0.0)
}

/// A single chain of length `len`, reproducible under `seed`.
pub fn sample_chain(n: usize, len: usize, q: &Rat, seed: u64) -> Result<Vec<ColourSequence>, ColourError> {
    ChainSampler::new(n, q.clone())?.sample(len, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `count` independent chains; chain k uses a seed derived from the master seed and k.
pub fn sample_chains(n: usize, len: usize, q: &Rat, count: usize, seed: u64) -> Result<Vec<Vec<ColourSequence>>, ColourError> {
    let s = ChainSampler::new(n, q.clone())?;
    s.row(&ColourSequence::empty(n))?;
    (0..count)
        .into_par_iter()
        .map(|k| s.sample(len, &mut ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))))
        .collect()
}
