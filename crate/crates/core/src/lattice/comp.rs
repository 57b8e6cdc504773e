use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::StateVec;

use super::LatticeError;

/// Coloured composition: block i holds the strictly increasing parts of colour i+1.
/// Parts may be negative, which covers coloured signatures after padding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColComp {
    blocks: Vec<Vec<i64>>,
}

impl ColComp {
    pub fn new(blocks: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        if blocks.is_empty() {
            return Err(LatticeError::Composition("no colours".into()));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(LatticeError::Composition(format!("block {} is not strictly increasing", i + 1)));
            }
        }
        Ok(ColComp { blocks })
    }

    /// The minimal element (0,...,N-1 | ... | 0,...,N-1) with n colours.
    pub fn delta(n: usize, nn: usize) -> Self {
        ColComp { blocks: vec![(0..nn as i64).collect(); n] }
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<i64>] {
        &self.blocks
    }

    pub fn block(&self, colour: usize) -> &[i64] {
        &self.blocks[colour - 1]
    }

    /// Colour profile (lambda_1, ..., lambda_n).
    pub fn profile(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of all parts.
    pub fn weight(&self) -> i64 {
        self.blocks.iter().flatten().sum()
    }

    pub fn max_part(&self) -> Option<i64> {
        self.blocks.iter().flatten().copied().max()
    }

    pub fn min_part(&self) -> Option<i64> {
        self.blocks.iter().flatten().copied().min()
    }

    /// Occupation state of column k.
    pub fn column(&self, k: i64) -> StateVec {
        let mut a = 0;
        for (i, b) in self.blocks.iter().enumerate() {
            if b.binary_search(&k).is_ok() {
                a |= 1 << i;
            }
        }
        a
    }

    pub fn shift(&self, d: i64) -> Self {
        ColComp { blocks: self.blocks.iter().map(|b| b.iter().map(|x| x + d).collect()).collect() }
    }

    /// Prepends the part `p` to every block; p must lie below all existing parts.
    pub fn prepend(&self, p: i64) -> Result<Self, LatticeError> {
        if self.min_part().is_some_and(|m| m <= p) {
            return Err(LatticeError::Composition(format!("cannot prepend {p}")));
        }
        Ok(ColComp {
            blocks: self.blocks.iter().map(|b| std::iter::once(p).chain(b.iter().copied()).collect()).collect(),
        })
    }

    /// Rainbow recolouring: parts relabelled 1..m block by block, one part per colour.
    pub fn rainbow(&self) -> Self {
        ColComp { blocks: self.blocks.iter().flatten().map(|&x| vec![x]).collect() }
    }

    /// Rainbow composition from a list of parts, one per colour.
    pub fn from_rainbow(parts: &[i64]) -> Self {
        ColComp { blocks: parts.iter().map(|&x| vec![x]).collect() }
    }

    /// Sorted coordinates and colour sequence; ties carry increasing colours.
    pub fn coords(&self) -> (Vec<i64>, Vec<usize>) {
        let mut v: Vec<(i64, usize)> =
            self.blocks.iter().enumerate().flat_map(|(i, b)| b.iter().map(move |&x| (x, i + 1))).collect();
        v.sort();
        v.into_iter().unzip()
    }

    /// Inverse of `coords`.
    pub fn from_coords(n: usize, ell: &[i64], colours: &[usize]) -> Result<Self, LatticeError> {
        if ell.len() != colours.len() {
            return Err(LatticeError::Composition("coordinate and colour lengths differ".into()));
        }
        for k in 1..ell.len() {
            if ell[k] < ell[k - 1] || (ell[k] == ell[k - 1] && colours[k] <= colours[k - 1]) {
                return Err(LatticeError::Composition("coordinates not in canonical order".into()));
            }
        }
        let mut blocks = vec![Vec::new(); n];
        for (&x, &c) in ell.iter().zip(colours) {
            if c == 0 || c > n {
                return Err(LatticeError::Composition(format!("colour {c} out of range")));
            }
            blocks[c - 1].push(x);
        }
        ColComp::new(blocks)
    }
}

impl fmt::Display for ColComp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "({})", parts.join("|"))
    }
}

impl FromStr for ColComp {
    type Err = LatticeError;
    /// Accepts "(0,2|1)" or "0,2|1"; an empty block is written as nothing between bars.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
        let mut blocks = Vec::new();
        for part in t.split('|') {
            let part = part.trim();
            let mut b = Vec::new();
            if !part.is_empty() {
                for x in part.split(',') {
                    b.push(x.trim().parse::<i64>().map_err(|_| LatticeError::Composition(format!("bad part {x:?}")))?);
                }
            }
            blocks.push(b);
        }
        ColComp::new(blocks)
    }
}

impl Serialize for ColComp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ColComp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All compositions with the given profile, parts in [0, bound).
pub fn enumerate_compositions(profile: &[usize], bound: i64) -> Vec<ColComp> {
    fn subsets(k: usize, lo: i64, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for x in lo..bound {
            cur.push(x);
            subsets(k - 1, x + 1, bound, cur, out);
            cur.pop();
        }
    }
    let per_block: Vec<Vec<Vec<i64>>> = profile
        .iter()
        .map(|&k| {
            let mut out = Vec::new();
            subsets(k, 0, bound, &mut Vec::new(), &mut out);
            out
        })
        .collect();
    let mut acc: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
    for choices in &per_block {
        let mut nx = Vec::new();
        for a in &acc {
            for c in choices {
                let mut a2 = a.clone();
                a2.push(c.clone());
                nx.push(a2);
            }
        }
        acc = nx;
    }
    acc.into_iter().map(|blocks| ColComp { blocks }).collect()
}

/// Twice the statistic psi: pairs (a in block i, b in block j), i < j, with a > b.
pub fn psi2(mu: &ColComp) -> i64 {
    psi2_above(mu, None)
}

fn psi2_above(mu: &ColComp, floor: Option<i64>) -> i64 {
    let mut k = 0;
    let bl = mu.blocks();
    for i in 0..bl.len() {
        for j in i + 1..bl.len() {
            for &a in &bl[i] {
                for &b in &bl[j] {
                    if a > b && floor.is_none_or(|m| b >= m) {
                        k += 1;
                    }
                }
            }
        }
    }
    k
}

/// Twice the relative statistic psi(mu, nu) for signatures that agree and are frozen
/// (parts 0..cut-1 present in every block) below `cut`; only pairs with b >= cut count.
pub fn psi2_relative(mu: &ColComp, nu: &ColComp, cut: i64) -> i64 {
    psi2_above(mu, Some(cut)) - psi2_above(nu, Some(cut))
}
