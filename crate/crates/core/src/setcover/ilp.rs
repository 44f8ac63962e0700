//! Branch and bound on LP bounds.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{Signed, ToPrimitive, Zero};

use super::lp::lp_solve;
use super::{greedy_extend, reduce, remove_redundant, ScpInstance};
use crate::geometry::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IlpStatus {
    Optimal,
    /// The budget ran out; `lower_bound` is the smallest open node bound.
    TimeLimit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpResult {
    pub value: usize,
    /// Sorted chosen column ids.
    pub chosen: Vec<usize>,
    pub lower_bound: usize,
    pub status: IlpStatus,
    pub nodes: usize,
}

struct Node {
    ones: Vec<usize>,
    zeros: Vec<usize>,
    bound: usize,
}

fn ceil_usize(r: &Rat) -> usize {
    r.ceil().to_integer().to_usize().expect("bounds are small")
}

/// Minimum set cover. `incumbent`, if it covers, seeds the search; without
/// a budget the result is always optimal.
pub fn ilp_solve(inst: &ScpInstance, incumbent: Option<&[usize]>, budget: Option<Duration>) -> IlpResult {
    let start = Instant::now();
    let red = reduce(inst);
    let sub = &red.instance;
    let mut best: Vec<usize> = remove_redundant(sub, &greedy_extend(sub, &[]));
    if let Some(inc) = incumbent {
        if inst.is_cover(inc) {
            let mut inv = vec![None; inst.n_cols()];
            for (k, &j) in red.col_map.iter().enumerate() {
                inv[j] = Some(k);
            }
            // Dominated columns are replaced by the greedy completion.
            let mapped: Vec<usize> = inc.iter().filter_map(|&c| inv[c]).collect();
            let cand = remove_redundant(sub, &greedy_extend(sub, &mapped));
            if cand.len() < best.len() {
                best = cand;
            }
        }
    }

    let mut pool: BTreeMap<(usize, usize), Node> = BTreeMap::new();
    let mut seq = 0usize;
    let mut nodes = 0usize;
    let mut root_bound = 0usize;
    let mut stack: Vec<Node> = vec![Node {
        ones: Vec::new(),
        zeros: Vec::new(),
        bound: 0,
    }];
    let mut timed_out = false;
    'search: loop {
        let node = match stack.pop() {
            Some(n) => n,
            None => match pool.pop_first() {
                Some((_, n)) => n,
                None => break,
            },
        };
        if node.bound >= best.len() {
            continue;
        }
        if let Some(b) = budget {
            if start.elapsed() > b {
                stack.push(node);
                timed_out = true;
                break 'search;
            }
        }
        nodes += 1;
        let Some((local, map)) = restrict(sub, &node.ones, &node.zeros) else {
            continue;
        };
        let lp = lp_solve(&local);
        let bound = node.ones.len() + ceil_usize(&lp.value);
        if nodes == 1 {
            root_bound = bound;
        }
        if bound >= best.len() {
            continue;
        }
        if lp.is_integral() {
            let mut sol = node.ones.clone();
            sol.extend(lp.primal.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, _)| map[j]));
            best = remove_redundant(sub, &sol);
            continue;
        }
        // Rounding heuristic: take every column at 1/2 or more, then complete.
        let half = Rat::new(1.into(), 2.into());
        let mut guess = node.ones.clone();
        guess.extend(lp.primal.iter().enumerate().filter(|(_, x)| **x >= half).map(|(j, _)| map[j]));
        let guess = remove_redundant(sub, &greedy_extend(sub, &guess));
        if guess.len() < best.len() {
            best = guess;
            if bound >= best.len() {
                continue;
            }
        }
        let (branch, _) = lp
            .primal
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_integer())
            .map(|(j, x)| (j, (x - &half).abs()))
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("fractional LP has a fractional variable");
        let g = map[branch];
        let mut ones = node.ones.clone();
        ones.push(g);
        let mut zeros = node.zeros.clone();
        zeros.push(g);
        pool.insert(
            (bound, seq),
            Node {
                ones: node.ones,
                zeros,
                bound,
            },
        );
        seq += 1;
        stack.push(Node { ones, zeros: node.zeros, bound });
    }

    let value = best.len();
    let (status, lower_bound) = if timed_out {
        let open = stack
            .iter()
            .chain(pool.values())
            .map(|n| n.bound)
            .min()
            .unwrap_or(value)
            .max(root_bound)
            .min(value);
        (IlpStatus::TimeLimit, open)
    } else {
        (IlpStatus::Optimal, value)
    };
    IlpResult {
        value,
        chosen: red.lift(&best),
        lower_bound,
        status,
        nodes,
    }
}

/// The instance left after fixing `ones` to 1 and `zeros` to 0, with the
/// map from local to outer column ids. `None` if some row cannot be covered.
fn restrict(inst: &ScpInstance, ones: &[usize], zeros: &[usize]) -> Option<(ScpInstance, Vec<usize>)> {
    let n = inst.n_cols();
    let mut state = vec![0u8; n];
    for &c in ones {
        state[c] = 1;
    }
    for &c in zeros {
        state[c] = 2;
    }
    let map: Vec<usize> = (0..n).filter(|&c| state[c] == 0).collect();
    let mut local = vec![usize::MAX; n];
    for (k, &c) in map.iter().enumerate() {
        local[c] = k;
    }
    let mut rows = Vec::new();
    for r in inst.rows() {
        if r.iter().any(|&c| state[c] == 1) {
            continue;
        }
        let lr: Vec<usize> = r.iter().filter(|&&c| state[c] == 0).map(|&c| local[c]).collect();
        if lr.is_empty() {
            return None;
        }
        rows.push(lr);
    }
    Some((ScpInstance::new(map.len(), rows).expect("rows are nonempty"), map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcover::tests::{brute_force, c3, identity};
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        assert_eq!(ilp_solve(&identity(3), None, None).value, 3);
        let r = ilp_solve(&c3(), None, None);
        assert_eq!(r.value, 2);
        assert_eq!(r.status, IlpStatus::Optimal);
        assert!(c3().is_cover(&r.chosen));
    }

    #[test]
    fn ceil_matches() {
        assert_eq!(ceil_usize(&Rat::new(3.into(), 2.into())), 2);
        assert_eq!(ceil_usize(&Rat::new(4.into(), 2.into())), 2);
    }

    fn instance() -> impl Strategy<Value = ScpInstance> {
        (1usize..=12, 1usize..=12).prop_flat_map(|(nr, nc)| {
            proptest::collection::vec(proptest::collection::vec(0..nc, 1..=nc.min(4)), nr)
                .prop_map(move |rows| ScpInstance::new(nc, rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force(inst in instance()) {
            let r = ilp_solve(&inst, None, None);
            prop_assert!(inst.is_cover(&r.chosen));
            prop_assert_eq!(r.value, brute_force(&inst));
        }
    }
}
