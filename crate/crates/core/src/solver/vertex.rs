use super::ctx::{Ctx, Rows};
use super::{initial_cover, int_rat, unit_guards, Solution, SolverConfig, SolverError, Status};
use crate::geometry::{Point, Polygon};
use crate::pointgen::{initial_witnesses, update_witnesses};
use crate::setcover::IlpStatus;

/// Vertex guards: solve the set cover over the current witnesses, then add
/// witnesses in whatever the chosen vertices leave uncovered.
pub fn solve_vertex(poly: &Polygon, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    let mut ctx = Ctx::new(poly, cfg)?;
    let verts = poly.vertices().to_vec();
    let mut wit = initial_witnesses(poly, cfg.strategy())?;
    let mut rows = Rows::default();
    let mut best: Vec<Point> = initial_cover(poly)?;
    let mut lb = 0usize;
    let mut incumbent: Option<Vec<usize>> = None;
    let mut iterations = 0;
    let (mut g_hist, mut w_hist) = (Vec::new(), Vec::new());
    let status = loop {
        if lb >= best.len() {
            break Status::ProvenOptimal;
        }
        if iterations >= cfg.max_iterations {
            break Status::Feasible;
        }
        if ctx.out_of_time() {
            break Status::TimeLimit;
        }
        iterations += 1;
        ctx.grow_rows(&mut rows, wit.points(), &verts)?;
        let r = ctx.set_cover(&rows, incumbent.as_deref());
        lb = lb.max(r.lower_bound);
        let chosen: Vec<Point> = r.chosen.iter().map(|&i| verts[i].clone()).collect();
        incumbent = Some(r.chosen);
        let unc = ctx.uncovered(&chosen)?;
        g_hist.push(verts.len());
        if unc.is_empty() {
            if chosen.len() < best.len() {
                best = chosen;
            }
            w_hist.push(wit.len());
            if r.status == IlpStatus::TimeLimit && ctx.out_of_time() {
                break Status::TimeLimit;
            }
            continue;
        }
        let added = wit.extend(update_witnesses(&unc, cfg.edge_witnesses));
        w_hist.push(wit.len());
        if added == 0 {
            break Status::BoundsOnly;
        }
    };
    let ub = best.len();
    Ok(Solution {
        guards: unit_guards(best),
        lower_bound: int_rat(lb.min(ub)),
        upper_bound: int_rat(ub),
        status,
        iterations,
        timings: ctx.finish(),
        candidates: g_hist,
        witnesses: w_hist,
    })
}
