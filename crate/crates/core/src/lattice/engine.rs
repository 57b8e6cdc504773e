use std::collections::HashMap;

use crate::model::{full, StateVec};
use crate::qfield::Ring;

use super::LatticeError;

/// Direction in which paths travel along the horizontal lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    /// Enter on the left, exit on the right (L, fused, LLT weights).
    Right,
    /// Enter on the right, exit on the left (M weights).
    Left,
}

/// What a horizontal edge carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Horiz {
    /// At most one colour: label 0..=n.
    Colour,
    /// A set of colours as a bit mask.
    Mask,
}

/// Boundary data of a rectangular lattice. Rows are listed bottom to top, columns left to right.
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    pub n: usize,
    pub rows: usize,
    pub flow: Flow,
    pub horiz: Horiz,
    pub bottom: Vec<StateVec>,
    pub top: Vec<StateVec>,
    /// Per-row label on the entry side.
    pub entry: Vec<u32>,
    /// Per-row label on the exit side.
    pub exit: Vec<u32>,
}

impl LatticeSpec {
    pub fn width(&self) -> usize {
        self.bottom.len()
    }

    fn label_mask(&self, l: u32) -> StateVec {
        match self.horiz {
            Horiz::Colour => crate::model::e(l as usize),
            Horiz::Mask => l,
        }
    }

    fn label_count(&self) -> usize {
        match self.horiz {
            Horiz::Colour => self.n + 1,
            Horiz::Mask => 1 << self.n,
        }
    }

    fn label_bits(&self) -> u32 {
        (usize::BITS - (self.label_count() - 1).leading_zeros()).max(1)
    }

    /// Per colour, flux in at bottom and entry side must equal flux out at top and exit side.
    pub fn balanced(&self) -> bool {
        (0..self.n).all(|i| {
            let bit = 1u32 << i;
            let count = |v: &[StateVec]| v.iter().filter(|&&a| a & bit != 0).count();
            let lab = |v: &[u32]| v.iter().filter(|&&l| self.label_mask(l) & bit != 0).count();
            count(&self.bottom) + lab(&self.entry) == count(&self.top) + lab(&self.exit)
        })
    }

    fn validate(&self) -> Result<(), LatticeError> {
        if self.top.len() != self.bottom.len() || self.entry.len() != self.rows || self.exit.len() != self.rows {
            return Err(LatticeError::Shape("boundary lengths do not match the lattice".into()));
        }
        let fm = full(self.n);
        let hc = self.label_count() as u32;
        if self.bottom.iter().chain(&self.top).any(|&a| a & !fm != 0)
            || self.entry.iter().chain(&self.exit).any(|&l| l >= hc)
        {
            return Err(LatticeError::Shape("boundary label out of range".into()));
        }
        if !self.balanced() {
            return Err(LatticeError::Unbalanced);
        }
        Ok(())
    }

    fn pack(&self, labels: &[u32]) -> u64 {
        let b = self.label_bits();
        labels.iter().enumerate().fold(0u64, |k, (r, &l)| k | ((l as u64) << (b as usize * r)))
    }

    fn unpack(&self, key: u64, r: usize) -> u32 {
        let b = self.label_bits() as usize;
        ((key >> (b * r)) & ((1u64 << b) - 1)) as u32
    }
}

/// Weight of one vertex: (row, bottom, entering label, top, exiting label).
pub type VertexWeight<'a, R, E> = dyn Fn(usize, StateVec, u32, StateVec, u32) -> Result<R, E> + Sync + 'a;

struct Tables<R> {
    sv: usize,
    hl: usize,
    rows: Vec<Vec<Option<R>>>,
}

impl<R: Ring> Tables<R> {
    fn build<E>(spec: &LatticeSpec, w: &VertexWeight<'_, R, E>) -> Result<Self, E> {
        let sv = 1usize << spec.n;
        let hl = spec.label_count();
        let mut rows = Vec::with_capacity(spec.rows);
        for r in 0..spec.rows {
            let mut t = vec![None; sv * hl * sv * hl];
            for a in 0..sv {
                for bi in 0..hl {
                    let inm = spec.label_mask(bi as u32) as usize;
                    for d in 0..hl {
                        let outm = spec.label_mask(d as u32) as usize;
                        let Some(c) = next_vertical(a as u32, inm as u32, outm as u32) else { continue };
                        let c = c as usize;
                        let wv = w(r, a as StateVec, bi as u32, c as StateVec, d as u32)?;
                        if !wv.is_zero() {
                            t[((a * hl + bi) * sv + c) * hl + d] = Some(wv);
                        }
                    }
                }
            }
            rows.push(t);
        }
        Ok(Tables { sv, hl, rows })
    }

    #[inline]
    fn get(&self, r: usize, a: usize, b: usize, c: usize, d: usize) -> Option<&R> {
        self.rows[r][((a * self.hl + b) * self.sv + c) * self.hl + d].as_ref()
    }
}

/// Vertical successor a + in - out, when binary.
#[inline]
fn next_vertical(a: u32, inm: u32, outm: u32) -> Option<u32> {
    if outm & !(a | inm) != 0 || a & inm & !outm != 0 {
        return None;
    }
    Some(((a ^ inm) & !outm) | (a & inm))
}

/// Evaluates the partition function with whichever transfer direction has the smaller state
/// space: horizontal labels of all rows, or vertical occupations of all columns.
pub fn evaluate<R: Ring, E: From<LatticeError>>(spec: &LatticeSpec, w: &VertexWeight<'_, R, E>) -> Result<R, E> {
    let col_bits = spec.label_bits() as usize * spec.rows;
    if col_bits <= 64 && col_bits <= spec.n * spec.width() {
        evaluate_by_columns(spec, w)
    } else {
        evaluate_by_rows(spec, w)
    }
}

/// Sweeps rows bottom to top, tracking the vertical occupation of every column.
pub fn evaluate_by_rows<R: Ring, E: From<LatticeError>>(spec: &LatticeSpec, w: &VertexWeight<'_, R, E>) -> Result<R, E> {
    spec.validate()?;
    let tables = Tables::build(spec, w)?;
    let width = spec.width();
    let order: Vec<usize> = match spec.flow {
        Flow::Right => (0..width).collect(),
        Flow::Left => (0..width).rev().collect(),
    };
    let mut cur: HashMap<Vec<StateVec>, R> = HashMap::new();
    cur.insert(spec.bottom.clone(), R::one());
    for r in 0..spec.rows {
        let mut next: HashMap<Vec<StateVec>, R> = HashMap::new();
        for (state, val) in &cur {
            let mut above = state.clone();
            row_dfs(spec, &tables, r, &order, 0, spec.entry[r], state, &mut above, val.clone(), &mut next);
        }
        next.retain(|_, v| !v.is_zero());
        cur = next;
        if cur.is_empty() {
            return Ok(R::zero());
        }
    }
    Ok(cur.remove(&spec.top).unwrap_or_else(R::zero))
}

#[allow(clippy::too_many_arguments)]
fn row_dfs<R: Ring>(
    spec: &LatticeSpec,
    t: &Tables<R>,
    r: usize,
    order: &[usize],
    k: usize,
    h: u32,
    below: &[StateVec],
    above: &mut Vec<StateVec>,
    acc: R,
    out: &mut HashMap<Vec<StateVec>, R>,
) {
    if k == order.len() {
        if h == spec.exit[r] {
            match out.get_mut(above.as_slice()) {
                Some(v) => *v = v.plus(&acc),
                None => {
                    out.insert(above.clone(), acc);
                }
            }
        }
        return;
    }
    let col = order[k];
    let a = below[col];
    let inm = spec.label_mask(h);
    for d in 0..t.hl as u32 {
        let Some(c) = next_vertical(a, inm, spec.label_mask(d)) else { continue };
        let Some(wv) = t.get(r, a as usize, h as usize, c as usize, d as usize) else { continue };
        above[col] = c;
        row_dfs(spec, t, r, order, k + 1, d, below, above, acc.times(wv), out);
    }
}

/// Sweeps columns along the flow direction, tracking the horizontal labels of all rows.
pub fn evaluate_by_columns<R: Ring, E: From<LatticeError>>(spec: &LatticeSpec, w: &VertexWeight<'_, R, E>) -> Result<R, E> {
    spec.validate()?;
    if spec.label_bits() as usize * spec.rows > 64 {
        return Err(LatticeError::Shape(format!("{} rows exceed the packed state size", spec.rows)).into());
    }
    let tables = Tables::build(spec, w)?;
    let width = spec.width();
    let order: Vec<usize> = match spec.flow {
        Flow::Right => (0..width).collect(),
        Flow::Left => (0..width).rev().collect(),
    };
    let hl = spec.label_count() as u32;
    let mut cur: HashMap<u64, R> = HashMap::new();
    cur.insert(spec.pack(&spec.entry), R::one());
    let mut memo: HashMap<(u64, StateVec, StateVec), Vec<(u64, R)>> = HashMap::new();
    for &col in &order {
        let (bot, top) = (spec.bottom[col], spec.top[col]);
        let mut next: HashMap<u64, R> = HashMap::new();
        for (key, val) in &cur {
            let outs = memo.entry((*key, bot, top)).or_insert_with(|| {
                let mut acc = Vec::new();
                let ins: Vec<u32> = (0..spec.rows).map(|r| spec.unpack(*key, r)).collect();
                let mut labels = vec![0u32; spec.rows];
                column_dfs(spec, &tables, hl, &ins, 0, bot, top, R::one(), &mut labels, &mut acc);
                acc
            });
            for (k2, wv) in outs.iter() {
                let add = val.times(wv);
                match next.get_mut(k2) {
                    Some(v) => *v = v.plus(&add),
                    None => {
                        next.insert(*k2, add);
                    }
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        cur = next;
        if cur.is_empty() {
            return Ok(R::zero());
        }
    }
    Ok(cur.remove(&spec.pack(&spec.exit)).unwrap_or_else(R::zero))
}

#[allow(clippy::too_many_arguments)]
fn column_dfs<R: Ring>(
    spec: &LatticeSpec,
    t: &Tables<R>,
    hl: u32,
    ins: &[u32],
    r: usize,
    v: StateVec,
    top: StateVec,
    acc_w: R,
    labels: &mut Vec<u32>,
    out: &mut Vec<(u64, R)>,
) {
    if r == spec.rows {
        if v == top {
            out.push((spec.pack(labels), acc_w));
        }
        return;
    }
    let inm = spec.label_mask(ins[r]);
    for d in 0..hl {
        let outm = spec.label_mask(d);
        let Some(c) = next_vertical(v, inm, outm) else { continue };
        let Some(wv) = t.get(r, v as usize, ins[r] as usize, c as usize, d as usize) else { continue };
        labels[r] = d;
        column_dfs(spec, t, hl, ins, r + 1, c, top, acc_w.times(wv), labels, out);
    }
}
