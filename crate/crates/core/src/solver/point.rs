use super::ctx::{Ctx, Rows};
use super::{initial_cover, int_rat, unit_guards, Solution, SolverConfig, SolverError, Status};
use crate::geometry::{Point, Polygon};
use crate::pointgen::{
    degenerate_candidates, initial_witnesses, light_candidates, update_witnesses, CandidateSet, CandidateTag,
    InitialStrategy, PointGenError, WitnessSet,
};
use crate::setcover::IlpStatus;

/// The configured initial witnesses. Chwa points are empty on convex
/// polygons; convex vertices are used then.
pub(super) fn starting_witnesses(poly: &Polygon, cfg: &SolverConfig) -> Result<WitnessSet, SolverError> {
    match initial_witnesses(poly, cfg.strategy()) {
        Err(PointGenError::EmptyWitnessSet) if cfg.strategy() == InitialStrategy::ChwaPoints => {
            Ok(initial_witnesses(poly, InitialStrategy::ConvexVertices)?)
        }
        r => Ok(r?),
    }
}

/// Polygon vertices plus the light-face candidates of the witness
/// arrangement. Returns the number of new candidates.
pub(super) fn refresh_candidates(
    ctx: &mut Ctx<'_>,
    wit: &WitnessSet,
    cand: &mut CandidateSet,
) -> Result<usize, SolverError> {
    let mut added = cand.extend(ctx.poly.vertices().iter().map(|v| (v.clone(), CandidateTag::PolygonVertex)));
    let arr = ctx.overlay(wit.points())?;
    added += cand.extend(light_candidates(&arr, ctx.cfg.guard_mode));
    added += cand.extend(degenerate_candidates(&arr));
    Ok(added)
}

/// Point guards. The lower phase solves over the light faces of the
/// witness arrangement, which contain an optimal guard set for the current
/// witnesses, so its value bounds the optimum from below. The upper phase
/// fixes the candidates and adds witnesses until the chosen guards cover
/// the polygon.
pub fn solve_point(poly: &Polygon, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    let mut ctx = Ctx::new(poly, cfg)?;
    let mut wit = starting_witnesses(poly, cfg)?;
    let mut cand = CandidateSet::new();
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
        let mut progress = refresh_candidates(&mut ctx, &wit, &mut cand)?;
        ctx.grow_rows(&mut rows, wit.points(), cand.points())?;
        let r = ctx.set_cover(&rows, incumbent.as_deref());
        let improved = r.lower_bound > lb;
        lb = lb.max(r.lower_bound);
        let chosen: Vec<Point> = r.chosen.iter().map(|&i| cand.points()[i].clone()).collect();
        let unc = ctx.uncovered(&chosen)?;
        if unc.is_empty() {
            if chosen.len() < best.len() {
                best = chosen;
            }
        } else {
            progress += wit.extend(update_witnesses(&unc, cfg.edge_witnesses));
            if (!cfg.defer_upper_bound || !improved) && lb < best.len() {
                let (cover, added) = upper_phase(&mut ctx, &mut wit, &mut rows, &cand, r.chosen.clone())?;
                progress += added;
                if let Some(c) = cover {
                    if c.len() < best.len() {
                        best = c;
                    }
                }
            }
        }
        incumbent = Some(r.chosen);
        g_hist.push(cand.len());
        w_hist.push(wit.len());
        if progress == 0 && lb < best.len() && r.status == IlpStatus::Optimal {
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

/// Covers the polygon with the current candidates only. Returns the cover
/// if one was found in time and the number of witnesses added.
fn upper_phase(
    ctx: &mut Ctx<'_>,
    wit: &mut WitnessSet,
    rows: &mut Rows,
    cand: &CandidateSet,
    mut incumbent: Vec<usize>,
) -> Result<(Option<Vec<Point>>, usize), SolverError> {
    let mut added = 0;
    for _ in 0..ctx.cfg.max_iterations {
        if ctx.out_of_time() {
            break;
        }
        ctx.grow_rows(rows, wit.points(), cand.points())?;
        let r = ctx.set_cover(rows, Some(&incumbent));
        let chosen: Vec<Point> = r.chosen.iter().map(|&i| cand.points()[i].clone()).collect();
        let unc = ctx.uncovered(&chosen)?;
        if unc.is_empty() {
            return Ok((Some(chosen), added));
        }
        let n = wit.extend(update_witnesses(&unc, ctx.cfg.edge_witnesses));
        if n == 0 {
            break;
        }
        added += n;
        incumbent = r.chosen;
    }
    Ok((None, added))
}
