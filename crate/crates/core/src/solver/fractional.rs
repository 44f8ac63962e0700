use std::time::Instant;

use num_traits::{One, Signed};

use super::ctx::{Ctx, Rows};
use super::point::{refresh_candidates, starting_witnesses};
use super::{initial_cover, int_rat, unit_guards, Solution, SolverConfig, SolverError, Status};
use crate::arrangement::Face;
use crate::geometry::{Point, Polygon, Rat};
use crate::pointgen::{dual_guards_in, update_witnesses, CandidateSet, CandidateTag};
use crate::setcover::lp_solve;

/// Fractional guards by alternating cutting planes and column generation.
/// Faces where the LP solution has weight below one give new witnesses;
/// light faces whose witness duals sum above one give new candidates. An
/// empty primal separation certifies the LP value as an upper bound, an
/// empty dual separation as a lower bound.
pub fn solve_fractional(poly: &Polygon, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    let mut ctx = Ctx::new(poly, cfg)?;
    let mut wit = starting_witnesses(poly, cfg)?;
    let mut cand = CandidateSet::new();
    refresh_candidates(&mut ctx, &wit, &mut cand)?;
    let mut rows = Rows::default();
    let start = initial_cover(poly)?;
    let mut ub = int_rat(start.len());
    let mut best = unit_guards(start);
    let mut lb = int_rat(0);
    let mut iterations = 0;
    let (mut g_hist, mut w_hist) = (Vec::new(), Vec::new());
    let one = Rat::one();
    let status = loop {
        if lb >= ub {
            break Status::ProvenOptimal;
        }
        if iterations >= cfg.max_iterations {
            break Status::Feasible;
        }
        if ctx.out_of_time() {
            break Status::TimeLimit;
        }
        iterations += 1;
        ctx.grow_rows(&mut rows, wit.points(), cand.points())?;
        let t = Instant::now();
        let lp = lp_solve(&rows.instance());
        ctx.times.set_cover += t.elapsed();

        let support: Vec<usize> = (0..cand.len()).filter(|&g| lp.primal[g].is_positive()).collect();
        let pts: Vec<Point> = support.iter().map(|&g| cand.points()[g].clone()).collect();
        let arr = ctx.overlay(&pts)?;
        let short: Vec<Face> = arr
            .faces()
            .iter()
            .filter(|f| f.cover().iter().map(|&i| &lp.primal[support[i]]).sum::<Rat>() < one)
            .cloned()
            .collect();
        if short.is_empty() && lp.value < ub {
            ub = lp.value.clone();
            best = support.iter().map(|&g| (cand.points()[g].clone(), lp.primal[g].clone())).collect();
        }

        let warr = ctx.overlay(wit.points())?;
        let columns = dual_guards_in(&warr, &lp.duals);
        if columns.is_empty() && lp.value > lb {
            lb = lp.value.clone();
        }

        let added = wit.extend(update_witnesses(&short, cfg.edge_witnesses))
            + cand.extend(columns.into_iter().map(|p| (p, CandidateTag::DualGuided)));
        g_hist.push(cand.len());
        w_hist.push(wit.len());
        if added == 0 && lb < ub {
            break Status::BoundsOnly;
        }
    };
    let lower_bound = if lb > ub { ub.clone() } else { lb };
    Ok(Solution {
        guards: best,
        lower_bound,
        upper_bound: ub,
        status,
        iterations,
        timings: ctx.finish(),
        candidates: g_hist,
        witnesses: w_hist,
    })
}
