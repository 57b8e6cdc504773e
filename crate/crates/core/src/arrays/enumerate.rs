use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colour::{interlace_check, successors, ColourSequence};

use super::ArraysError;

/// An interlacing triangular array, stored as its string of row colour sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularArray {
    n: usize,
    rows: Vec<ColourSequence>,
}

impl TriangularArray {
    pub fn new(n: usize, rows: Vec<ColourSequence>) -> Result<Self, ArraysError> {
        let mut prev = ColourSequence::empty(n);
        for (k, r) in rows.iter().enumerate() {
            if r.n() != n || r.m() != k + 1 || !interlace_check(&prev, r) {
                return Err(ArraysError::NotInterlacing { row: k + 1 });
            }
            prev = r.clone();
        }
        Ok(Self { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[ColourSequence] {
        &self.rows
    }

    /// Entry in bundle i, position j of row k (all 1-based).
    pub fn entry(&self, i: usize, j: usize, k: usize) -> usize {
        self.rows[k - 1].word()[(i - 1) * k + j - 1]
    }

    /// Twice the horizontal coordinate i N + j - (N + k)/2 of an entry.
    pub fn twice_coordinate(&self, i: usize, j: usize, k: usize) -> i64 {
        let nn = self.height() as i64;
        2 * (i as i64 * nn + j as i64) - (nn + k as i64)
    }
}

/// Stops enumeration once a level holds more than this many distinct colour sequences.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_states: 2_000_000 }
    }
}

fn check_rank(n: usize) -> Result<(), ArraysError> {
    if (1..=5).contains(&n) {
        Ok(())
    } else {
        Err(ArraysError::Rank(n))
    }
}

/// |T_k(n)| for k = 1..=height, by pushing path counts level to level.
pub fn count_arrays_by_level(n: usize, height: usize, budget: Budget) -> Result<Vec<BigUint>, ArraysError> {
    check_rank(n)?;
    let mut level: HashMap<ColourSequence, BigUint> = HashMap::from([(ColourSequence::empty(n), BigUint::one())]);
    let mut out = Vec::with_capacity(height);
    for k in 1..=height {
        let sources: Vec<(&ColourSequence, &BigUint)> = level.iter().collect();
        let mut next: HashMap<ColourSequence, BigUint> = HashMap::new();
        for chunk in sources.chunks(1024) {
            let parts: Vec<Vec<ColourSequence>> = chunk.par_iter().map(|(c, _)| successors(c)).collect();
            for ((_, w), js) in chunk.iter().zip(parts) {
                for j in js {
                    *next.entry(j).or_insert_with(BigUint::zero) += *w;
                }
            }
            if next.len() > budget.max_states {
                return Err(ArraysError::Budget {
                    budget: budget.max_states,
                    level: k,
                    completed: out.iter().map(|c: &BigUint| c.to_string()).collect(),
                });
            }
        }
        out.push(next.values().sum());
        level = next;
    }
    Ok(out)
}

pub fn count_arrays(n: usize, height: usize) -> Result<BigUint, ArraysError> {
    if height == 0 {
        return Ok(BigUint::one());
    }
    Ok(count_arrays_by_level(n, height, Budget::default())?.pop().expect("height >= 1"))
}

/// Depth-first stream of all arrays of a given height, in lexicographic order of their rows.
pub struct ArrayStream {
    n: usize,
    height: usize,
    prefix: Vec<ColourSequence>,
    stack: Vec<std::vec::IntoIter<ColourSequence>>,
}

impl ArrayStream {
    pub fn new(n: usize, height: usize) -> Result<Self, ArraysError> {
        check_rank(n)?;
        let root = if height == 0 { Vec::new() } else { successors(&ColourSequence::empty(n)) };
        Ok(Self { n, height, prefix: Vec::new(), stack: vec![root.into_iter()] })
    }
}

impl Iterator for ArrayStream {
    type Item = TriangularArray;

    fn next(&mut self) -> Option<TriangularArray> {
        if self.height == 0 {
            // the single empty array
            return self.stack.pop().map(|_| TriangularArray { n: self.n, rows: Vec::new() });
        }
        loop {
            let top = self.stack.last_mut()?;
            match top.next() {
                None => {
                    self.stack.pop();
                    self.prefix.pop();
                }
                Some(c) => {
                    self.prefix.push(c);
                    if self.prefix.len() == self.height {
                        let a = TriangularArray { n: self.n, rows: self.prefix.clone() };
                        self.prefix.pop();
                        return Some(a);
                    }
                    let next = successors(self.prefix.last().expect("nonempty prefix"));
                    self.stack.push(next.into_iter());
                }
            }
        }
    }
}
