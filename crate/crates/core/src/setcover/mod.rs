//! Set cover over a finite witness by guard incidence matrix.

mod ilp;
mod lagrangian;
mod lp;

pub use ilp::{ilp_solve, IlpResult, IlpStatus};
pub use lagrangian::{lagrangian, LagrangianParams, LagrangianResult};
pub use lp::{lp_solve, LpResult};

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::geometry::{visibility_region, GeometryError, Point, Polygon, VisRegion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScpError {
    #[error("row {0} is covered by no column")]
    UncoverableRow(usize),
    #[error("witness {0:?} is seen by no guard")]
    UncoverableWitness(Box<Point>),
    #[error("column index {col} out of range in row {row}")]
    ColumnOutOfRange { row: usize, col: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Unit-cost set cover: each row lists the columns covering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScpInstance {
    n_cols: usize,
    rows: Vec<Vec<usize>>,
}

impl ScpInstance {
    pub fn new(n_cols: usize, mut rows: Vec<Vec<usize>>) -> Result<Self, ScpError> {
        for (i, r) in rows.iter_mut().enumerate() {
            r.sort_unstable();
            r.dedup();
            if r.is_empty() {
                return Err(ScpError::UncoverableRow(i));
            }
            if let Some(&c) = r.iter().find(|&&c| c >= n_cols) {
                return Err(ScpError::ColumnOutOfRange { row: i, col: c });
            }
        }
        Ok(ScpInstance { n_cols, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Rows covered by each column.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.n_cols];
        for (i, r) in self.rows.iter().enumerate() {
            for &c in r {
                cols[c].push(i);
            }
        }
        cols
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut set = FixedBitSet::with_capacity(self.n_cols);
        for &c in chosen {
            if c < self.n_cols {
                set.insert(c);
            }
        }
        self.rows.iter().all(|r| r.iter().any(|&c| set.contains(c)))
    }

    /// Sparse text form, one line `w: g1 g2 ...` per row after a
    /// `cols N` header.
    pub fn to_text(&self) -> String {
        let mut s = format!("cols {}\n", self.n_cols);
        for (i, r) in self.rows.iter().enumerate() {
            write!(s, "{i}:").unwrap();
            for c in r {
                write!(s, " {c}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, ScpError> {
        let mut n_cols = None;
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| ScpError::Syntax {
                line: ln + 1,
                msg: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix("cols") {
                n_cols = Some(rest.trim().parse::<usize>().map_err(|_| err("bad column count"))?);
                continue;
            }
            let (head, tail) = line.split_once(':').ok_or_else(|| err("expected `w: g1 g2 ...`"))?;
            let w: usize = head.trim().parse().map_err(|_| err("bad row id"))?;
            if w != rows.len() {
                return Err(err("row ids must be consecutive from 0"));
            }
            let r = tail
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| err("bad column id")))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(r);
        }
        let n_cols = match n_cols {
            Some(n) => n,
            None => rows.iter().flatten().map(|&c| c + 1).max().unwrap_or(0),
        };
        ScpInstance::new(n_cols, rows)
    }
}

/// Columns of `guards` (by index) seen from the witness whose region is `vis`.
pub fn witness_row(poly: &Polygon, vis: &VisRegion, guards: &[Point]) -> Vec<usize> {
    guards
        .iter()
        .enumerate()
        .filter(|(_, g)| vis.contains(poly, g))
        .map(|(i, _)| i)
        .collect()
}

/// Builds the incidence matrix `a[w][g] = sees(g, w)` from the witnesses'
/// visibility regions.
pub fn build_matrix(poly: &Polygon, guards: &[Point], witnesses: &[Point]) -> Result<ScpInstance, ScpError> {
    let mut rows = Vec::with_capacity(witnesses.len());
    for w in witnesses {
        let vis = visibility_region(poly, w)?;
        let r = witness_row(poly, &vis, guards);
        if r.is_empty() {
            return Err(ScpError::UncoverableWitness(Box::new(w.clone())));
        }
        rows.push(r);
    }
    ScpInstance::new(guards.len(), rows)
}

/// Result of dominance reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub instance: ScpInstance,
    /// Original id of each kept column.
    pub col_map: Vec<usize>,
    /// Original id of each kept row.
    pub row_map: Vec<usize>,
}

impl Reduction {
    pub fn lift(&self, cols: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = cols.iter().map(|&c| self.col_map[c]).collect();
        v.sort_unstable();
        v
    }
}

/// Removes dominated columns (subset of another column, lower id kept on
/// ties) and dominated rows (superset of another row) until nothing changes.
pub fn reduce(inst: &ScpInstance) -> Reduction {
    let (nr, nc) = (inst.n_rows(), inst.n_cols());
    let mut row_alive = vec![true; nr];
    let mut col_alive = vec![true; nc];
    let row_sets: Vec<FixedBitSet> = inst
        .rows
        .iter()
        .map(|r| {
            let mut b = FixedBitSet::with_capacity(nc);
            r.iter().for_each(|&c| b.insert(c));
            b
        })
        .collect();
    let col_sets_full: Vec<FixedBitSet> = inst
        .columns()
        .iter()
        .map(|c| {
            let mut b = FixedBitSet::with_capacity(nr);
            c.iter().for_each(|&r| b.insert(r));
            b
        })
        .collect();
    let mut alive_rows = FixedBitSet::with_capacity(nr);
    alive_rows.insert_range(..);
    let mut alive_cols = FixedBitSet::with_capacity(nc);
    alive_cols.insert_range(..);
    loop {
        let mut changed = false;
        let cols: Vec<FixedBitSet> = col_sets_full
            .iter()
            .map(|c| {
                let mut b = c.clone();
                b.intersect_with(&alive_rows);
                b
            })
            .collect();
        for j in 0..nc {
            if !col_alive[j] {
                continue;
            }
            let dominated = (0..nc).any(|k| {
                k != j
                    && col_alive[k]
                    && cols[j].is_subset(&cols[k])
                    && (k < j || cols[j] != cols[k])
            });
            if dominated {
                col_alive[j] = false;
                alive_cols.set(j, false);
                changed = true;
            }
        }
        let rows: Vec<FixedBitSet> = row_sets
            .iter()
            .map(|r| {
                let mut b = r.clone();
                b.intersect_with(&alive_cols);
                b
            })
            .collect();
        for i in 0..nr {
            if !row_alive[i] {
                continue;
            }
            let dominated = (0..nr).any(|k| {
                k != i
                    && row_alive[k]
                    && rows[k].is_subset(&rows[i])
                    && (k < i || rows[k] != rows[i])
            });
            if dominated {
                row_alive[i] = false;
                alive_rows.set(i, false);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let col_map: Vec<usize> = (0..nc).filter(|&j| col_alive[j]).collect();
    let row_map: Vec<usize> = (0..nr).filter(|&i| row_alive[i]).collect();
    let mut new_id = vec![usize::MAX; nc];
    for (k, &j) in col_map.iter().enumerate() {
        new_id[j] = k;
    }
    let rows = row_map
        .iter()
        .map(|&i| {
            inst.rows[i]
                .iter()
                .filter(|&&c| col_alive[c])
                .map(|&c| new_id[c])
                .collect()
        })
        .collect();
    Reduction {
        instance: ScpInstance {
            n_cols: col_map.len(),
            rows,
        },
        col_map,
        row_map,
    }
}

/// Repeatedly takes the column covering the most uncovered rows, lowest id
/// on ties.
pub fn greedy_cover(inst: &ScpInstance) -> Vec<usize> {
    greedy_extend(inst, &[])
}

/// Greedy completion of a partial cover.
pub fn greedy_extend(inst: &ScpInstance, start: &[usize]) -> Vec<usize> {
    let cols = inst.columns();
    let mut covered = vec![false; inst.n_rows()];
    let mut chosen: Vec<usize> = start.to_vec();
    let mut left = inst.n_rows();
    for &c in start {
        for &r in &cols[c] {
            if !covered[r] {
                covered[r] = true;
                left -= 1;
            }
        }
    }
    let mut gain: Vec<usize> = cols.iter().map(|c| c.iter().filter(|&&r| !covered[r]).count()).collect();
    while left > 0 {
        let (best, _) = gain
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("rows are coverable");
        for &r in &cols[best] {
            if !covered[r] {
                covered[r] = true;
                left -= 1;
                for &c in &inst.rows[r] {
                    gain[c] -= 1;
                }
            }
        }
        chosen.push(best);
    }
    chosen.sort_unstable();
    chosen.dedup();
    chosen
}

/// Drops columns, last first, whose rows are all covered twice.
pub fn remove_redundant(inst: &ScpInstance, chosen: &[usize]) -> Vec<usize> {
    let cols = inst.columns();
    let mut count = vec![0usize; inst.n_rows()];
    for &c in chosen {
        for &r in &cols[c] {
            count[r] += 1;
        }
    }
    let mut keep: Vec<usize> = chosen.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let mut out = Vec::with_capacity(keep.len());
    for &c in keep.iter().rev() {
        if cols[c].iter().all(|&r| count[r] >= 2) {
            for &r in &cols[c] {
                count[r] -= 1;
            }
        } else {
            out.push(c);
        }
    }
    out.reverse();
    out
}
