use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{count_arrays, ArraysError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GraphKind {
    TriangleLattice,
    KingGraph,
}

impl std::str::FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "triangle" | "triangleLattice" => Ok(Self::TriangleLattice),
            "king" | "kingGraph" => Ok(Self::KingGraph),
            _ => Err(format!("unknown graph kind {s:?} (expected triangle or king)")),
        }
    }
}

/// A graph drawn in horizontal rows; edges only join vertices in the same or adjacent rows.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridGraph {
    pub kind: GraphKind,
    pub side: usize,
    /// Vertex ids by row, bottom row first.
    pub rows: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl GridGraph {
    /// Triangular patch with `side` vertices along each edge.
    pub fn triangle(side: usize) -> Self {
        let mut rows = Vec::new();
        let mut id = 0;
        for r in 0..side {
            rows.push((0..side - r).map(|_| { id += 1; id - 1 }).collect::<Vec<_>>());
        }
        let mut edges = Vec::new();
        for r in 0..side {
            for i in 0..rows[r].len() {
                if i + 1 < rows[r].len() {
                    edges.push((rows[r][i], rows[r][i + 1]));
                }
                if r + 1 < side && i < rows[r + 1].len() {
                    // vertex above sits between i and i + 1
                    edges.push((rows[r][i], rows[r + 1][i]));
                    edges.push((rows[r][i + 1], rows[r + 1][i]));
                }
            }
        }
        Self { kind: GraphKind::TriangleLattice, side, rows, edges }
    }

    /// side x side board, vertices adjacent when a king move apart.
    pub fn king(side: usize) -> Self {
        let rows: Vec<Vec<usize>> = (0..side).map(|r| (0..side).map(|c| r * side + c).collect()).collect();
        let mut edges = Vec::new();
        for r in 0..side {
            for c in 0..side {
                let v = r * side + c;
                if c + 1 < side {
                    edges.push((v, v + 1));
                }
                if r + 1 < side {
                    edges.push((v, v + side));
                    if c + 1 < side {
                        edges.push((v, v + side + 1));
                    }
                    if c > 0 {
                        edges.push((v, v + side - 1));
                    }
                }
            }
        }
        Self { kind: GraphKind::KingGraph, side, rows, edges }
    }

    /// The graph attached to arrays of height N has N + 1 vertices per side.
    pub fn for_height(kind: GraphKind, height: usize) -> Self {
        match kind {
            GraphKind::TriangleLattice => Self::triangle(height + 1),
            GraphKind::KingGraph => Self::king(height + 1),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

fn row_colourings(
    adj: &[Vec<usize>],
    row: &[usize],
    below: &HashMap<usize, u8>,
    colours: u8,
) -> Vec<Vec<u8>> {
    fn rec(
        k: usize,
        row: &[usize],
        adj: &[Vec<usize>],
        below: &HashMap<usize, u8>,
        colours: u8,
        cur: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
    ) {
        if k == row.len() {
            out.push(cur.clone());
            return;
        }
        let v = row[k];
        for c in 0..colours {
            let clash = adj[v].iter().any(|u| {
                below.get(u).is_some_and(|&b| b == c) || row[..k].iter().position(|w| w == u).is_some_and(|p| cur[p] == c)
            });
            if !clash {
                cur.push(c);
                rec(k + 1, row, adj, below, colours, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, row, adj, below, colours, &mut Vec::with_capacity(row.len()), &mut out);
    out
}

const MAX_ROW_STATES: usize = 1 << 22;

/// Proper colourings counted row by row; the state is the colouring of the last finished row.
pub fn chromatic_count(g: &GridGraph, colours: usize) -> Result<BigUint, ArraysError> {
    let colours = u8::try_from(colours).map_err(|_| ArraysError::GraphSize(format!("{colours} colours")))?;
    if g.rows.is_empty() {
        return Ok(BigUint::one());
    }
    let widest = g.rows.iter().map(Vec::len).max().unwrap_or(0) as u32;
    if (colours as f64).powi(widest as i32) > MAX_ROW_STATES as f64 * 4.0 {
        return Err(ArraysError::GraphSize(format!("rows of {widest} vertices with {colours} colours")));
    }
    let adj = g.adjacency();
    let first = row_colourings(&adj, &g.rows[0], &HashMap::new(), colours);
    let mut level: HashMap<Vec<u8>, BigUint> = first.into_iter().map(|c| (c, BigUint::one())).collect();
    for r in 1..g.rows.len() {
        let prev = &g.rows[r - 1];
        let parts: Vec<Vec<(Vec<u8>, BigUint)>> = level
            .par_iter()
            .map(|(state, w)| {
                let below: HashMap<usize, u8> = prev.iter().copied().zip(state.iter().copied()).collect();
                row_colourings(&adj, &g.rows[r], &below, colours).into_iter().map(|c| (c, w.clone())).collect()
            })
            .collect();
        let mut next: HashMap<Vec<u8>, BigUint> = HashMap::new();
        for (c, w) in parts.into_iter().flatten() {
            *next.entry(c).or_insert_with(BigUint::zero) += w;
        }
        if next.len() > MAX_ROW_STATES {
            return Err(ArraysError::GraphSize(format!("{} frontier states", next.len())));
        }
        level = next;
    }
    Ok(level.into_values().sum())
}

/// Exhaustive backtracking over all vertices; intended as a reference on small graphs.
pub fn chromatic_count_brute(g: &GridGraph, colours: usize) -> Result<BigUint, ArraysError> {
    if g.vertex_count() > 16 {
        return Err(ArraysError::GraphSize(format!("{} vertices for exhaustive search", g.vertex_count())));
    }
    let adj = g.adjacency();
    fn rec(v: usize, adj: &[Vec<usize>], colours: usize, col: &mut Vec<usize>) -> u64 {
        if v == adj.len() {
            return 1;
        }
        let mut total = 0;
        for c in 0..colours {
            if adj[v].iter().all(|&u| u >= v || col[u] != c) {
                col[v] = c;
                total += rec(v + 1, adj, colours, col);
            }
        }
        total
    }
    let mut col = vec![usize::MAX; g.vertex_count()];
    Ok(BigUint::from(rec(0, &adj, colours, &mut col)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureRow {
    pub height: usize,
    pub arrays: String,
    pub scaled_arrays: String,
    pub colourings: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureReport {
    /// 4 |T_N(3)| against 4-colourings of the triangular patch.
    pub triangle: Vec<ConjectureRow>,
    /// 5 |T_N(4)| against 5-colourings of the king graph.
    pub king: Vec<ConjectureRow>,
    /// |T_N(5)|, reported without any conjectured match.
    pub rank5: Vec<String>,
}

impl ConjectureReport {
    pub fn holds(&self) -> bool {
        self.triangle.iter().chain(&self.king).all(|r| r.holds)
    }
}

fn compare(n: usize, kind: GraphKind, nmax: usize) -> Result<Vec<ConjectureRow>, ArraysError> {
    let colours = n + 1;
    (1..=nmax)
        .map(|h| {
            let a = count_arrays(n, h)?;
            let scaled = &a * BigUint::from(colours);
            let g = chromatic_count(&GridGraph::for_height(kind, h), colours)?;
            Ok(ConjectureRow {
                height: h,
                arrays: a.to_string(),
                scaled_arrays: scaled.to_string(),
                colourings: g.to_string(),
                holds: scaled == g,
            })
        })
        .collect()
}

pub fn check_conjectures(nmax3: usize, nmax4: usize, nmax5: usize) -> Result<ConjectureReport, ArraysError> {
    Ok(ConjectureReport {
        triangle: compare(3, GraphKind::TriangleLattice, nmax3)?,
        king: compare(4, GraphKind::KingGraph, nmax4)?,
        rank5: (1..=nmax5).map(|h| count_arrays(5, h).map(|c| c.to_string())).collect::<Result<_, _>>()?,
    })
}
