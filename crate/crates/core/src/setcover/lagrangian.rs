//! Subgradient optimisation of the Lagrangian dual with greedy repair.

use num_traits::{Signed, Zero};

use super::{remove_redundant, ScpInstance};
use crate::geometry::Rat;

#[derive(Debug, Clone, Copy)]
pub struct LagrangianParams {
    pub iterations: usize,
    /// Initial step factor.
    pub step: f64,
    /// Halve the step after this many iterations without improvement.
    pub patience: usize,
}

impl Default for LagrangianParams {
    fn default() -> Self {
        LagrangianParams {
            iterations: 200,
            step: 2.0,
            patience: 10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LagrangianResult {
    /// Best Lagrangian value found, exact for the multipliers used.
    pub lower_bound: Rat,
    /// Best repaired cover, sorted.
    pub cover: Vec<usize>,
}

/// `L(u) = sum u_i + sum_j min(0, 1 - sum_{i in col j} u_i)`.
fn value_f64(cols: &[Vec<usize>], u: &[f64]) -> f64 {
    let mut v: f64 = u.iter().sum();
    for c in cols {
        let rc = 1.0 - c.iter().map(|&i| u[i]).sum::<f64>();
        if rc < 0.0 {
            v += rc;
        }
    }
    v
}

fn value_exact(cols: &[Vec<usize>], u: &[f64]) -> Rat {
    let ur: Vec<Rat> = u.iter().map(|&x| Rat::from_float(x).expect("finite multipliers")).collect();
    let mut v: Rat = ur.iter().sum();
    let one = Rat::from_integer(1.into());
    for c in cols {
        let rc = &one - c.iter().map(|&i| &ur[i]).sum::<Rat>();
        if rc.is_negative() {
            v += rc;
        }
    }
    v
}

/// Columns with negative reduced cost, then cheapest-ratio repair and
/// redundancy removal.
fn repair(inst: &ScpInstance, cols: &[Vec<usize>], u: &[f64]) -> Vec<usize> {
    let rc: Vec<f64> = cols
        .iter()
        .map(|c| 1.0 - c.iter().map(|&i| u[i]).sum::<f64>())
        .collect();
    let mut chosen: Vec<usize> = (0..cols.len()).filter(|&j| rc[j] < 0.0).collect();
    let mut covered = vec![false; inst.n_rows()];
    for &j in &chosen {
        for &i in &cols[j] {
            covered[i] = true;
        }
    }
    for (i, r) in inst.rows().iter().enumerate() {
        if covered[i] {
            continue;
        }
        let gain = |j: usize| cols[j].iter().filter(|&&k| !covered[k]).count() as f64;
        let pick = r
            .iter()
            .copied()
            .min_by(|&a, &b| {
                let ka = rc[a].max(0.0) / gain(a);
                let kb = rc[b].max(0.0) / gain(b);
                ka.total_cmp(&kb).then(a.cmp(&b))
            })
            .expect("rows are nonempty");
        for &k in &cols[pick] {
            covered[k] = true;
        }
        chosen.push(pick);
    }
    chosen.sort_by(|&a, &b| rc[a].total_cmp(&rc[b]).then(a.cmp(&b)));
    let mut out = remove_redundant_ordered(inst, cols, &chosen);
    out.sort_unstable();
    debug_assert_eq!(out, remove_redundant(inst, &out));
    out
}

/// Redundancy removal that tries the worst (highest reduced cost) column
/// first.
fn remove_redundant_ordered(inst: &ScpInstance, cols: &[Vec<usize>], order: &[usize]) -> Vec<usize> {
    let mut count = vec![0usize; inst.n_rows()];
    for &c in order {
        for &r in &cols[c] {
            count[r] += 1;
        }
    }
    let mut out = Vec::new();
    for &c in order.iter().rev() {
        if cols[c].iter().all(|&r| count[r] >= 2) {
            for &r in &cols[c] {
                count[r] -= 1;
            }
        } else {
            out.push(c);
        }
    }
    out
}

pub fn lagrangian(inst: &ScpInstance, params: LagrangianParams) -> LagrangianResult {
    let nr = inst.n_rows();
    if nr == 0 {
        return LagrangianResult {
            lower_bound: Rat::zero(),
            cover: Vec::new(),
        };
    }
    let cols = inst.columns();
    let max_deg = inst.rows().iter().map(|r| r.len()).max().unwrap_or(1).max(1);
    let mut u = vec![1.0 / max_deg as f64; nr];
    let mut best_cover = repair(inst, &cols, &u);
    let mut best_f = value_f64(&cols, &u);
    let mut best_lb = value_exact(&cols, &u);
    let mut step = params.step;
    let mut stall = 0;
    for _ in 0..params.iterations {
        let x: Vec<bool> = cols
            .iter()
            .map(|c| 1.0 - c.iter().map(|&i| u[i]).sum::<f64>() < 0.0)
            .collect();
        let s: Vec<f64> = inst
            .rows()
            .iter()
            .map(|r| 1.0 - r.iter().filter(|&&j| x[j]).count() as f64)
            .collect();
        let norm: f64 = s.iter().map(|v| v * v).sum();
        if norm == 0.0 {
            break;
        }
        let lu = value_f64(&cols, &u);
        let gap = (best_cover.len() as f64 - lu).max(1e-6);
        let t = step * gap / norm;
        for i in 0..nr {
            u[i] = (u[i] + t * s[i]).max(0.0);
        }
        let lu = value_f64(&cols, &u);
        if lu > best_f + 1e-12 {
            best_f = lu;
            let exact = value_exact(&cols, &u);
            if exact > best_lb {
                best_lb = exact;
            }
            stall = 0;
        } else {
            stall += 1;
            if stall >= params.patience {
                step /= 2.0;
                stall = 0;
            }
        }
        let cover = repair(inst, &cols, &u);
        if cover.len() < best_cover.len() {
            best_cover = cover;
        }
        if step < 1e-6 {
            break;
        }
    }
    LagrangianResult {
        lower_bound: best_lb,
        cover: best_cover,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;
    use crate::setcover::tests::{c3, identity};

    #[test]
    fn identity_bound_is_tight() {
        let r = lagrangian(&identity(3), LagrangianParams::default());
        assert_eq!(r.lower_bound, rat(3, 1));
        assert_eq!(r.cover.len(), 3);
    }

    #[test]
    fn cyclic_bound() {
        let r = lagrangian(&c3(), LagrangianParams::default());
        assert!(r.lower_bound >= rat(1, 1) && r.lower_bound <= rat(3, 2));
        assert_eq!(r.cover.len(), 2);
        assert!(c3().is_cover(&r.cover));
    }
}
