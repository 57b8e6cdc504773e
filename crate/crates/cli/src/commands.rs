use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{ArgGroup, Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use llt_core::arrays::{
    check_conjectures, chromatic_count, chromatic_count_brute, count_arrays_by_level, ArrayStream, Budget, GraphKind,
    GridGraph,
};
use llt_core::colour::{
    check_positivity, pcol_marginal, pcol_tree, sample_chains, step_stats, successors, verify_expansion,
    ColourSequence,
};
use llt_core::gue::{
    convergence_experiment, gue_density, gue_transition_density, sample_corners_many, CornersPoint, ExperimentConfig,
};
use llt_core::lattice::{
    f_mu, g_mu, g_mu_sigma, g_skew, llt_plancherel, llt_poly, verify_antisym, verify_cauchy, verify_hecke,
    CauchyKind, HeckeRelation,
};
use llt_core::model::{
    fmt_state, fused_weight, l_weight, llt_weight, m_weight, r_weight, verify_ybe, ModelError, Params, YbeKind,
};
use llt_core::qfield::{QRat, Rat, Ring};

use crate::args;
use crate::output::{csv_field, ndjson, Format, Outcome};
use crate::{CliError, Command};

fn allow(f: Format, ok: &[Format], cmd: &str) -> Result<(), CliError> {
    if ok.contains(&f) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{cmd} does not write {}", f.ext())))
    }
}

fn parse_with<T: std::str::FromStr>(s: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| CliError::Usage(e.to_string()))
}

fn positive(v: usize, what: &str) -> Result<usize, CliError> {
    if v == 0 {
        Err(CliError::Usage(format!("{what} must be positive")))
    } else {
        Ok(v)
    }
}

/// Integer count as a JSON number when it fits, else as a decimal string.
fn count_value(s: String) -> Value {
    match s.parse::<u64>() {
        Ok(v) => json!(v),
        Err(_) => json!(s),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    L,
    M,
    R,
    Fused,
    Llt,
}

#[derive(Debug, Args)]
pub struct WeightsDump {
    #[arg(long, value_enum)]
    kind: WeightKind,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    /// Spin parameter (l, m, fused).
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Spectral parameter.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Fusion parameter r^2 (fused); defaults to q^-N with N from --height.
    #[arg(long, allow_hyphen_values = true)]
    r2: Option<String>,
    #[arg(long = "height", visible_alias = "N")]
    height: Option<usize>,
}

#[derive(Serialize)]
struct WeightRow {
    a: String,
    b: String,
    c: String,
    d: String,
    value: String,
}

fn weight_value(r: Result<Rat, ModelError>) -> Result<Option<String>, CliError> {
    match r {
        Ok(v) if v.is_zero() => Ok(None),
        Ok(v) => Ok(Some(v.to_string())),
        Err(ModelError::Pole(_)) => Ok(Some("pole".into())),
        Err(e) => Err(e.into()),
    }
}

impl WeightsDump {
    fn run(&self, f: Format) -> Result<Outcome, CliError> {
        allow(f, &[Format::Json, Format::Csv], "weights-dump")?;
        let n = self.n;
        if n == 0 || n > 6 {
            return Err(CliError::Usage("n must be in 1..=6".into()));
        }
        let q = args::exact_rat(&self.q)?;
        let x = args::exact_rat(&self.x)?;
        let s = self.s.as_deref().map(args::exact_rat).transpose()?;
        let need_s = || s.clone().ok_or_else(|| CliError::Usage("--s is required for this kind".into()));
        let states = 0..1u32 << n;
        let mut rows = Vec::new();
        let mut push = |a: String, b: String, c: String, d: String, v: Option<String>| {
            if let Some(value) = v {
                rows.push(WeightRow { a, b, c, d, value });
            }
        };
        let mut r2_used = None;
        match self.kind {
            WeightKind::L | WeightKind::M => {
                let p = Params::new(q.clone(), need_s()?)?;
                for a in states.clone() {
                    for b in 0..=n {
                        for c in states.clone() {
                            for d in 0..=n {
                                let w = if self.kind == WeightKind::L {
                                    l_weight(n, a, b, c, d, &x, &p)
                                } else {
                                    m_weight(n, a, b, c, d, &x, &p)
                                };
                                push(fmt_state(n, a), b.to_string(), fmt_state(n, c), d.to_string(), weight_value(w)?);
                            }
                        }
                    }
                }
            }
            WeightKind::R => {
                for a in 0..=n {
                    for b in 0..=n {
                        for c in 0..=n {
                            for d in 0..=n {
                                let w = weight_value(r_weight(a, b, c, d, &x, &q))?;
                                push(a.to_string(), b.to_string(), c.to_string(), d.to_string(), w);
                            }
                        }
                    }
                }
            }
            WeightKind::Fused => {
                let p = Params::new(q.clone(), need_s()?)?;
                let r2 = match (&self.r2, self.height) {
                    (Some(r), None) => args::exact_rat(r)?,
                    (None, Some(h)) => p.qp(-(positive(h, "height")? as i64)),
                    _ => return Err(CliError::Usage("fused weights need exactly one of --r2, --height".into())),
                };
                for a in states.clone() {
                    for b in states.clone() {
                        for c in states.clone() {
                            for d in states.clone() {
                                let w = weight_value(fused_weight(n, a, b, c, d, &x, &p, &r2))?;
                                push(fmt_state(n, a), fmt_state(n, b), fmt_state(n, c), fmt_state(n, d), w);
                            }
                        }
                    }
                }
                r2_used = Some(r2.to_string());
            }
            WeightKind::Llt => {
                for a in states.clone() {
                    for b in states.clone() {
                        for c in states.clone() {
                            for d in states.clone() {
                                let w = llt_weight(n, a, b, c, d, &x, &q);
                                let v = (!w.is_zero()).then(|| w.to_string());
                                push(fmt_state(n, a), fmt_state(n, b), fmt_state(n, c), fmt_state(n, d), v);
                            }
                        }
                    }
                }
            }
        }
        if f == Format::Csv {
            let mut out = String::from("a,b,c,d,value\n");
            for r in &rows {
                writeln!(out, "{},{},{},{},{}", r.a, r.b, r.c, r.d, csv_field(&r.value)).expect("string write");
            }
            return Ok(Outcome::lines(out, f, true));
        }
        let doc = json!({
            "kind": self.kind,
            "n": n,
            "q": q.to_string(),
            "s": s.map(|v| v.to_string()),
            "x": x.to_string(),
            "r2": r2_used,
            "weights": rows,
        });
        Outcome::json(&doc, true)
    }
}

#[derive(Debug, Args)]
pub struct VerifyYbe {
    /// RLLa, RLLb, RLLc, master or reduced.
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyHecke {
    /// T-f, T-g, invT-f or invT-g.
    #[arg(long)]
    relation: String,
    /// Colour profile, e.g. "1,1".
    #[arg(long)]
    lambda: String,
    #[arg(long, default_value_t = 4)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyAntisym {
    #[arg(long)]
    mu: String,
    #[arg(long)]
    nu: String,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyCauchy {
    /// gG or skewLLT.
    #[arg(long)]
    which: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long = "height", visible_alias = "N", default_value_t = 1)]
    height: usize,
    /// Degree cap of the truncated series.
    #[arg(long, default_value_t = 2)]
    cap: usize,
    #[arg(long, default_value_t = 2)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
pub struct ComputeF {
    #[arg(long)]
    mu: String,
    /// Comma-separated rationals, one per row.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    s: String,
}

#[derive(Debug, Args)]
pub struct ComputeG {
    #[arg(long)]
    mu: String,
    /// Colour word sigma; the sorted word when omitted.
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    s: String,
}

#[derive(Debug, Args)]
pub struct ComputeSkew {
    #[arg(long)]
    mu: String,
    #[arg(long)]
    nu: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    s: String,
}

#[derive(Debug, Args)]
pub struct ComputeLlt {
    #[arg(long)]
    mu: String,
    #[arg(long)]
    nu: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Rational q; the result is a rational function of q when omitted.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
}

#[derive(Debug, Args)]
pub struct Plancherel {
    #[arg(long)]
    mu: String,
    #[arg(long)]
    nu: String,
}

#[derive(Debug, Args)]
pub struct PcolTable {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    depth: usize,
}

#[derive(Debug, Args)]
pub struct Level {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Debug, Args)]
pub struct SampleChain {
    #[arg(long)]
    n: usize,
    /// Number of steps after the empty sequence.
    #[arg(long, visible_alias = "N")]
    length: usize,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Debug, Args)]
pub struct Enumerate {
    #[arg(long)]
    n: usize,
    #[arg(long = "height", visible_alias = "N")]
    height: usize,
    /// Also list every array (ndjson writes one per line).
    #[arg(long)]
    stream: bool,
    #[arg(long, default_value_t = Budget::default().max_states)]
    max_states: usize,
}

#[derive(Debug, Args)]
pub struct Colourings {
    /// triangle or king.
    #[arg(long)]
    graph: String,
    #[arg(long)]
    side: usize,
    #[arg(long)]
    colours: usize,
    /// Cross-check by exhaustive search (at most 16 vertices).
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Args)]
pub struct CheckConjectures {
    #[arg(long, default_value_t = 4)]
    nmax3: usize,
    #[arg(long, default_value_t = 3)]
    nmax4: usize,
    /// Rank-5 counts reported without a conjectured match.
    #[arg(long, default_value_t = 0)]
    nmax5: usize,
}

#[derive(Debug, Args)]
pub struct GueSample {
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["point", "lower"])))]
pub struct GueDensity {
    /// Full corners point, levels separated by ';' ("0.1;-0.5,0.7").
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Level m of a transition; needs --upper.
    #[arg(long, requires = "upper", allow_hyphen_values = true)]
    lower: Option<String>,
    #[arg(long, requires = "lower", allow_hyphen_values = true)]
    upper: Option<String>,
}

#[derive(Debug, Args)]
pub struct Convergence {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long = "height", visible_alias = "N", default_value_t = 1)]
    height: usize,
    #[arg(long, default_value = "5,10,20,40", allow_hyphen_values = true)]
    t: String,
    /// Rational or decimal, converted exactly.
    #[arg(long, default_value = "1/2")]
    q: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0.05)]
    tv_threshold: f64,
    #[arg(long, default_value_t = 4.0)]
    sigmas: f64,
    #[arg(long, default_value_t = 400)]
    max_degree: usize,
    #[arg(long, default_value_t = 1e-8)]
    tail_tolerance: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StatFailure {
    from: ColourSequence,
    to: ColourSequence,
    psi_exp: i64,
    ups_exp: i64,
    inv_delta: i64,
}

fn field_params(q: &str, s: &str) -> Result<Params<Rat>, CliError> {
    Ok(Params::new(args::exact_rat(q)?, args::exact_rat(s)?)?)
}

fn value_doc(function: &str, fields: Value, value: String) -> Result<Outcome, CliError> {
    let mut doc = json!({ "function": function });
    if let (Value::Object(d), Value::Object(extra)) = (&mut doc, fields) {
        d.extend(extra);
        d.insert("value".into(), json!(value));
    }
    Outcome::json(&doc, true)
}

fn sources(n: usize, m: usize) -> Vec<ColourSequence> {
    if m == 0 {
        vec![ColourSequence::empty(n)]
    } else {
        ColourSequence::all(n, m)
    }
}

pub fn dispatch(cmd: &Command, f: Format) -> Result<Outcome, CliError> {
    let json_only = |name: &str| allow(f, &[Format::Json], name);
    match cmd {
        Command::WeightsDump(c) => c.run(f),
        Command::VerifyYbe(c) => {
            json_only("verify-ybe")?;
            let kind: YbeKind = parse_with(&c.kind)?;
            let r = verify_ybe(kind, c.n, positive(c.trials, "trials")?, c.seed)?;
            Outcome::json(&r, r.passed())
        }
        Command::VerifyHecke(c) => {
            json_only("verify-hecke")?;
            let rel: HeckeRelation = parse_with(&c.relation)?;
            let r = verify_hecke(rel, &args::usize_list(&c.lambda)?, positive(c.trials, "trials")?, c.seed)?;
            Outcome::json(&r, r.passed())
        }
        Command::VerifyAntisym(c) => {
            json_only("verify-antisym")?;
            let r = verify_antisym(&args::comp(&c.mu)?, &args::comp(&c.nu)?, positive(c.trials, "trials")?, c.seed)?;
            Outcome::json(&r, r.passed())
        }
        Command::VerifyCauchy(c) => {
            json_only("verify-cauchy")?;
            let kind: CauchyKind = parse_with(&c.which)?;
            let r = verify_cauchy(kind, c.n, c.height, c.cap, positive(c.trials, "trials")?, c.seed)?;
            Outcome::json(&r, r.passed())
        }
        Command::ComputeF(c) => {
            json_only("compute-f")?;
            let mu = args::comp(&c.mu)?;
            let xs = args::rat_list(&c.x)?;
            let v = f_mu(&mu, &xs, &field_params(&c.q, &c.s)?)?;
            let fields = json!({"mu": mu, "x": xs.iter().map(ToString::to_string).collect::<Vec<_>>(), "q": c.q, "s": c.s});
            value_doc("f", fields, v.to_string())
        }
        Command::ComputeG(c) => {
            json_only("compute-g")?;
            let mu = args::comp(&c.mu)?;
            let xs = args::rat_list(&c.x)?;
            let p = field_params(&c.q, &c.s)?;
            let sigma = c.sigma.as_deref().map(|s| args::colour_word(mu.n(), s)).transpose()?;
            let v = match &sigma {
                Some(w) => g_mu_sigma(&mu, w, &xs, &p)?,
                None => g_mu(&mu, &xs, &p)?,
            };
            let fields = json!({"mu": mu, "sigma": sigma, "x": xs.iter().map(ToString::to_string).collect::<Vec<_>>(), "q": c.q, "s": c.s});
            value_doc("g", fields, v.to_string())
        }
        Command::ComputeSkewG(c) => {
            json_only("compute-G")?;
            let (mu, nu) = (args::comp(&c.mu)?, args::comp(&c.nu)?);
            let xs = args::rat_list(&c.x)?;
            let v = g_skew(&mu, &nu, &xs, &field_params(&c.q, &c.s)?)?;
            let fields = json!({"mu": mu, "nu": nu, "x": xs.iter().map(ToString::to_string).collect::<Vec<_>>(), "q": c.q, "s": c.s});
            value_doc("G", fields, v.to_string())
        }
        Command::ComputeLlt(c) => {
            json_only("compute-llt")?;
            let (mu, nu) = (args::comp(&c.mu)?, args::comp(&c.nu)?);
            let xs = args::rat_list(&c.x)?;
            let v = match &c.q {
                Some(q) => llt_poly(&mu, &nu, &xs, &args::exact_rat(q)?)?.to_string(),
                None => {
                    let xq: Vec<QRat> = xs.iter().cloned().map(QRat::from_rat).collect();
                    llt_poly(&mu, &nu, &xq, &QRat::q())?.to_string()
                }
            };
            let fields = json!({"mu": mu, "nu": nu, "x": xs.iter().map(ToString::to_string).collect::<Vec<_>>(), "q": c.q.clone().unwrap_or_else(|| "q".into())});
            value_doc("llt", fields, v)
        }
        Command::Plancherel(c) => {
            json_only("plancherel")?;
            let (mu, nu) = (args::comp(&c.mu)?, args::comp(&c.nu)?);
            let term = llt_plancherel(&mu, &nu)?;
            Outcome::json(&json!({"mu": mu, "nu": nu, "degree": term.degree, "coeff": term.coeff}), true)
        }
        Command::PcolTable(c) => {
            allow(f, &[Format::Json, Format::Csv], "pcol-table")?;
            if f == Format::Csv {
                let mut out = String::from("level,sequence,probability\n");
                for m in 0..=c.depth {
                    for (s, p) in pcol_marginal(c.n, m)? {
                        writeln!(out, "{m},{s},{}", csv_field(&p.to_string())).expect("string write");
                    }
                }
                return Ok(Outcome::lines(out, f, true));
            }
            let tree = pcol_tree(c.n, c.depth)?;
            Outcome::json(&json!({"n": c.n, "depth": c.depth, "tree": tree}), true)
        }
        Command::PcolMarginal(c) => {
            allow(f, &[Format::Json, Format::Csv], "pcol-marginal")?;
            let marg = pcol_marginal(c.n, c.m)?;
            let total = marg.values().fold(QRat::zero(), |a, v| a.plus(v));
            let ok = total == QRat::one();
            if f == Format::Csv {
                let mut out = String::from("sequence,probability\n");
                for (s, p) in &marg {
                    writeln!(out, "{s},{}", csv_field(&p.to_string())).expect("string write");
                }
                return Ok(Outcome::lines(out, f, ok));
            }
            Outcome::json(&json!({"n": c.n, "m": c.m, "total": total, "marginal": marg}), ok)
        }
        Command::CheckPositivity(c) => {
            json_only("check-positivity")?;
            let r = check_positivity(c.n, c.m)?;
            Outcome::json(&r, r.passed())
        }
        Command::VerifyExpansion(c) => {
            json_only("verify-expansion")?;
            let r = verify_expansion(c.n, c.m)?;
            Outcome::json(&r, r.passed())
        }
        Command::VerifyStatisticMatch(c) => {
            json_only("verify-statistic-match")?;
            let mut checked = 0usize;
            let mut failures = Vec::new();
            for m in 0..=c.m {
                for i in sources(positive(c.n, "n")?, m) {
                    for j in successors(&i) {
                        let s = step_stats(&i, &j)?;
                        checked += 1;
                        if s.psi_exp + s.ups_exp + s.inv_delta != 0 {
                            failures.push(StatFailure {
                                from: i.clone(),
                                to: j,
                                psi_exp: s.psi_exp,
                                ups_exp: s.ups_exp,
                                inv_delta: s.inv_delta,
                            });
                        }
                    }
                }
            }
            let ok = failures.is_empty() && checked > 0;
            Outcome::json(&json!({"n": c.n, "m": c.m, "checked": checked, "failures": failures}), ok)
        }
        Command::SampleChain(c) => {
            allow(f, &[Format::Json, Format::Ndjson], "sample-chain")?;
            let q = args::unit_interval(args::exact_rat(&c.q)?)?;
            let chains = sample_chains(c.n, c.length, &q, positive(c.count, "count")?, c.seed)?;
            if f == Format::Ndjson {
                return Ok(Outcome::lines(ndjson(&chains)?, f, true));
            }
            let doc = json!({"n": c.n, "length": c.length, "q": q.to_string(), "seed": c.seed, "chains": chains});
            Outcome::json(&doc, true)
        }
        Command::Enumerate(c) => {
            allow(f, &[Format::Json, Format::Ndjson], "enumerate")?;
            let counts = if c.height == 0 {
                Vec::new()
            } else {
                count_arrays_by_level(c.n, c.height, Budget { max_states: positive(c.max_states, "max-states")? })?
            };
            let count = counts.last().map(ToString::to_string).unwrap_or_else(|| "1".into());
            let params = json!({"n": c.n, "N": c.height});
            let by_level: Vec<Value> = counts.iter().map(|v| count_value(v.to_string())).collect();
            if !(c.stream || f == Format::Ndjson) {
                let doc = json!({"parameters": params, "count": count_value(count), "countsByLevel": by_level});
                return Outcome::json(&doc, true);
            }
            // the stream is an independent depth-first enumeration; its length must match
            let arrays: Vec<_> = ArrayStream::new(c.n, c.height)?.collect();
            let ok = arrays.len().to_string() == count;
            if f == Format::Ndjson {
                let mut out = ndjson(&arrays)?;
                out.push_str(&serde_json::to_string(&json!({"parameters": params, "count": count_value(count)}))?);
                out.push('\n');
                return Ok(Outcome::lines(out, f, ok));
            }
            let doc = json!({"parameters": params, "count": count_value(count), "countsByLevel": by_level, "arrays": arrays});
            Outcome::json(&doc, ok)
        }
        Command::Colourings(c) => {
            json_only("colourings")?;
            let kind: GraphKind = parse_with(&c.graph)?;
            let g = match kind {
                GraphKind::TriangleLattice => GridGraph::triangle(positive(c.side, "side")?),
                GraphKind::KingGraph => GridGraph::king(positive(c.side, "side")?),
            };
            let count = chromatic_count(&g, c.colours)?.to_string();
            let brute = if c.check { Some(chromatic_count_brute(&g, c.colours)?.to_string()) } else { None };
            let ok = brute.as_ref().is_none_or(|b| *b == count);
            let doc = json!({
                "graph": kind,
                "side": c.side,
                "vertices": g.vertex_count(),
                "edges": g.edges.len(),
                "colours": c.colours,
                "count": count_value(count),
                "exhaustive": brute.map(count_value),
            });
            Outcome::json(&doc, ok)
        }
        Command::CheckConjectures(c) => {
            json_only("check-conjectures")?;
            let r = check_conjectures(c.nmax3, c.nmax4, c.nmax5)?;
            Outcome::json(&r, r.holds())
        }
        Command::GueSample(c) => {
            allow(f, &[Format::Json, Format::Csv, Format::Ndjson], "gue-sample")?;
            let pts = sample_corners_many(positive(c.m, "m")?, positive(c.count, "count")?, c.seed);
            let ok = pts.iter().all(CornersPoint::interlaces);
            match f {
                Format::Ndjson => Ok(Outcome::lines(ndjson(&pts)?, f, ok)),
                Format::Csv => {
                    let mut out = String::from("sample,level,index,value\n");
                    for (s, p) in pts.iter().enumerate() {
                        for (l, lev) in p.levels.iter().enumerate() {
                            for (i, v) in lev.iter().enumerate() {
                                writeln!(out, "{s},{},{},{v:?}", l + 1, i + 1).expect("string write");
                            }
                        }
                    }
                    Ok(Outcome::lines(out, f, ok))
                }
                Format::Json => Outcome::json(&json!({"m": c.m, "seed": c.seed, "samples": pts}), ok),
            }
        }
        Command::GueDensity(c) => {
            json_only("gue-density")?;
            if let Some(p) = &c.point {
                let pt = CornersPoint::new(args::levels(p)?)?;
                let d = gue_density(&pt);
                return Outcome::json(&json!({"point": pt, "density": d}), true);
            }
            let lower = args::f64_list(c.lower.as_deref().unwrap_or(""))?;
            let upper = args::f64_list(c.upper.as_deref().unwrap_or(""))?;
            let d = gue_transition_density(&lower, &upper)?;
            Outcome::json(&json!({"lower": lower, "upper": upper, "density": d}), true)
        }
        Command::ConvergenceExperiment(c) => {
            allow(f, &[Format::Json, Format::Csv], "convergence-experiment")?;
            let q = args::unit_interval(args::rat_or_decimal(&c.q)?)?;
            let mut cfg = ExperimentConfig::new(c.n, c.height, args::f64_list(&c.t)?, q, c.seed, c.trials);
            cfg.tv_threshold = c.tv_threshold;
            cfg.sigmas = c.sigmas;
            cfg.max_degree = c.max_degree;
            cfg.tail_tolerance = c.tail_tolerance;
            let r = convergence_experiment(&cfg)?;
            if f == Format::Csv {
                let k = r.points.first().map_or(0, |p| p.coordinate_moments.mean.len());
                let mut out = String::from("t,degreeCutoff,tvDistance,truncationBound,unresolvedMass");
                let mut colours: BTreeMap<String, ()> = BTreeMap::new();
                for p in &r.points {
                    colours.extend(p.colour_marginal.keys().map(|s| (s.clone(), ())));
                }
                for s in colours.keys() {
                    write!(out, ",P{s}").expect("string write");
                }
                for i in 1..=k {
                    write!(out, ",mean{i},variance{i}").expect("string write");
                }
                out.push_str(",gueMean,gueVariance\n");
                for p in &r.points {
                    write!(
                        out,
                        "{:?},{},{:?},{:?},{:?}",
                        p.t, p.degree_cutoff, p.tv_distance, p.truncation_bound, p.unresolved_mass
                    )
                    .expect("string write");
                    for s in colours.keys() {
                        write!(out, ",{:?}", p.colour_marginal.get(s).copied().unwrap_or(0.0)).expect("string write");
                    }
                    for i in 0..k {
                        write!(out, ",{:?},{:?}", p.coordinate_moments.mean[i], p.coordinate_moments.variance[i])
                            .expect("string write");
                    }
                    writeln!(out, ",{:?},{:?}", p.gue_moments.mean[0], p.gue_moments.variance[0]).expect("string write");
                }
                return Ok(Outcome::lines(out, f, r.passed()));
            }
            Outcome::json(&r, r.passed())
        }
    }
}
