use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ColourError;

/// A word in [1,n]^{nm} in which every colour appears m times.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColourSequence {
    n: usize,
    word: Vec<usize>,
}

impl ColourSequence {
    pub fn new(n: usize, word: Vec<usize>) -> Result<Self, ColourError> {
        if n == 0 {
            return Err(ColourError::Counts("rank must be positive".into()));
        }
        if word.len() % n != 0 {
            return Err(ColourError::Counts(format!("length {} is not a multiple of {n}", word.len())));
        }
        let m = word.len() / n;
        for c in 1..=n {
            let k = word.iter().filter(|&&x| x == c).count();
            if k != m {
                return Err(ColourError::Counts(format!("colour {c} appears {k} times, expected {m}")));
            }
        }
        Ok(ColourSequence { n, word })
    }

    pub fn empty(n: usize) -> Self {
        ColourSequence { n, word: Vec::new() }
    }

    /// 1^m 2^m ... n^m.
    pub fn sorted(n: usize, m: usize) -> Self {
        ColourSequence { n, word: (1..=n).flat_map(|c| std::iter::repeat_n(c, m)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.word.len() / self.n
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn inv(&self) -> usize {
        let w = &self.word;
        (0..w.len()).map(|i| w[i + 1..].iter().filter(|&&b| b < w[i]).count()).sum()
    }

    /// All sequences of rank n and level m.
    pub fn all(n: usize, m: usize) -> Vec<ColourSequence> {
        fn rec(left: &mut [usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, total: usize) {
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
        rec(&mut vec![m; n], &mut Vec::new(), &mut out, n * m);
        out.into_iter().map(|word| ColourSequence { n, word }).collect()
    }

    /// Parses "1212", "(1,2,1,2)" or "()" for the empty sequence, given the rank.
    pub fn parse(n: usize, s: &str) -> Result<Self, ColourError> {
        let word = parse_word(s)?;
        Self::new(n, word)
    }
}

fn parse_word(s: &str) -> Result<Vec<usize>, ColourError> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if t.is_empty() || t == "∅" {
        return Ok(Vec::new());
    }
    let bad = || ColourError::Parse(s.to_string());
    if t.contains(',') {
        t.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect()
    } else {
        t.chars().map(|ch| ch.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect()
    }
}

impl fmt::Display for ColourSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n < 10 { "" } else { "," };
        let body: Vec<String> = self.word.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", body.join(sep))
    }
}

impl Serialize for ColourSequence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Deserialization infers the rank from the largest colour present.
impl<'de> Deserialize<'de> for ColourSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for ColourSequence {
    type Err = ColourError;
    /// Rank is the largest colour present; the empty sequence needs `parse` with a rank.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let word = parse_word(s)?;
        let n = word.iter().copied().max().ok_or_else(|| ColourError::Parse(format!("{s}: rank unknown")))?;
        Self::new(n, word)
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Top(usize),
    Bottom(usize),
}

/// Left-to-right layout of the stacked diagram: bundle k reads top, bottom, top, ..., top.
fn layout(n: usize, m: usize) -> Vec<Slot> {
    let mut v = Vec::with_capacity(n * (2 * m + 1));
    for k in 0..n {
        for a in 0..m {
            v.push(Slot::Top(k * (m + 1) + a));
            v.push(Slot::Bottom(k * m + a));
        }
        v.push(Slot::Top(k * (m + 1) + m));
    }
    v
}

fn check_ranks(i: &ColourSequence, j: &ColourSequence) -> Result<(), ColourError> {
    if i.n != j.n || i.m() + 1 != j.m() {
        return Err(ColourError::Counts(format!("{i} and {j} are not consecutive levels of one rank")));
    }
    Ok(())
}

/// Sweeps the diagram with the full palette entering on the right; returns the overpass
/// count or None when some colour would appear twice on the line or be missing.
fn sweep_right_to_left(i: &ColourSequence, j: &ColourSequence) -> Option<usize> {
    let full: u64 = (1u64 << i.n) - 1;
    let mut line = full;
    let mut over = 0;
    for slot in layout(i.n, i.m()).into_iter().rev() {
        match slot {
            Slot::Top(k) => {
                let b = 1u64 << (j.word[k] - 1);
                if line & b == 0 {
                    return None;
                }
                line &= !b;
            }
            Slot::Bottom(k) => {
                let c = i.word[k];
                let b = 1u64 << (c - 1);
                if line & b != 0 {
                    return None;
                }
                over += (line >> c).count_ones() as usize;
                line |= b;
            }
        }
    }
    (line == 0).then_some(over)
}

/// Same diagram traversed left to right; counts colours passing beneath a larger exiting colour.
fn sweep_left_to_right(i: &ColourSequence, j: &ColourSequence) -> Option<usize> {
    let full: u64 = (1u64 << i.n) - 1;
    let mut line = full;
    let mut under = 0;
    for slot in layout(i.n, i.m()) {
        match slot {
            Slot::Top(k) => {
                let c = j.word[k];
                let b = 1u64 << (c - 1);
                if line & b == 0 {
                    return None;
                }
                line &= !b;
                under += (line & (b - 1)).count_ones() as usize;
            }
            Slot::Bottom(k) => {
                let b = 1u64 << (i.word[k] - 1);
                if line & b != 0 {
                    return None;
                }
                line |= b;
            }
        }
    }
    (line == 0).then_some(under)
}

/// i ≺ j: the stacked diagram admits a routing with no colour twice on the line.
pub fn interlace_check(i: &ColourSequence, j: &ColourSequence) -> bool {
    check_ranks(i, j).is_ok() && sweep_right_to_left(i, j).is_some()
}

/// q-exponents of the one-step statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourStepStats {
    /// Psi = q^psi_exp.
    pub psi_exp: i64,
    /// Upsilon = q^ups_exp.
    pub ups_exp: i64,
    /// Overpass count of the admissible diagram.
    pub xi: i64,
    /// inv(i) - inv(j).
    pub inv_delta: i64,
}

pub fn step_stats(i: &ColourSequence, j: &ColourSequence) -> Result<ColourStepStats, ColourError> {
    check_ranks(i, j)?;
    let psi = sweep_right_to_left(i, j).ok_or_else(|| ColourError::NotInterlacing(i.to_string(), j.to_string()))?;
    let ups = sweep_left_to_right(i, j).ok_or_else(|| ColourError::NotInterlacing(i.to_string(), j.to_string()))?;
    let xi = xi_count(i, j);
    Ok(ColourStepStats { psi_exp: psi as i64, ups_exp: ups as i64, xi, inv_delta: i.inv() as i64 - j.inv() as i64 })
}

/// Overpass events traced path by path: for each entering colour i, the larger colours c
/// already on the line at its entry point. Scanning towards the source (rightwards), c is
/// on the line iff the nearest slot of colour c is an entry, or there is none.
fn xi_count(i: &ColourSequence, j: &ColourSequence) -> i64 {
    let slots = layout(i.n, i.m());
    let colour_at = |s: &Slot| match *s {
        Slot::Top(k) => j.word[k],
        Slot::Bottom(k) => i.word[k],
    };
    let mut count = 0;
    for (p, s) in slots.iter().enumerate() {
        if let Slot::Bottom(_) = s {
            let ci = colour_at(s);
            for c in ci + 1..=i.n {
                let nearest = slots[p + 1..].iter().find(|t| colour_at(t) == c);
                if !matches!(nearest, Some(Slot::Top(_))) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// All successors j with i ≺ j, by the right-to-left sweep.
pub fn successors(i: &ColourSequence) -> Vec<ColourSequence> {
    let n = i.n;
    let m = i.m();
    let slots: Vec<Slot> = layout(n, m).into_iter().rev().collect();
    let mut out = Vec::new();
    let mut word = vec![0usize; n * (m + 1)];
    fn rec(p: usize, line: u64, slots: &[Slot], i: &ColourSequence, word: &mut Vec<usize>, out: &mut Vec<ColourSequence>) {
        if p == slots.len() {
            if line == 0 {
                out.push(ColourSequence { n: i.n, word: word.clone() });
            }
            return;
        }
        match slots[p] {
            Slot::Top(k) => {
                for c in 1..=i.n {
                    let b = 1u64 << (c - 1);
                    if line & b != 0 {
                        word[k] = c;
                        rec(p + 1, line & !b, slots, i, word, out);
                    }
                }
            }
            Slot::Bottom(k) => {
                let b = 1u64 << (i.word[k] - 1);
                if line & b == 0 {
                    rec(p + 1, line | b, slots, i, word, out);
                }
            }
        }
    }
    rec(0, (1u64 << n) - 1, &slots, i, &mut word, &mut out);
    out.sort();
    out
}
