//! State shared by the iterative solvers: cached visibility regions, the
//! incrementally grown incidence matrix and phase timers.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{SolverConfig, SolverError, Timings};
use crate::arrangement::{Arrangement, Face};
use crate::geometry::{visibility_region, Point, Polygon, VisRegion};
use crate::setcover::{ilp_solve, lagrangian, IlpResult, LagrangianParams, ScpInstance};

pub(super) struct Ctx<'a> {
    pub poly: &'a Polygon,
    pub cfg: &'a SolverConfig,
    start: Instant,
    vis: HashMap<Point, Arc<VisRegion>>,
    pub times: Timings,
}

impl<'a> Ctx<'a> {
    pub fn new(poly: &'a Polygon, cfg: &'a SolverConfig) -> Result<Self, SolverError> {
        cfg.validate()?;
        Ok(Ctx {
            poly,
            cfg,
            start: Instant::now(),
            vis: HashMap::new(),
            times: Timings::default(),
        })
    }

    pub fn out_of_time(&self) -> bool {
        self.start.elapsed() >= self.cfg.time_limit
    }

    fn remaining(&self) -> Duration {
        self.cfg.time_limit.saturating_sub(self.start.elapsed())
    }

    /// Visibility regions of `pts`, computing missing ones in parallel.
    pub fn regions(&mut self, pts: &[Point]) -> Result<Vec<Arc<VisRegion>>, SolverError> {
        let t = Instant::now();
        let mut missing: Vec<&Point> = pts.iter().filter(|p| !self.vis.contains_key(*p)).collect();
        missing.sort();
        missing.dedup();
        let computed: Vec<_> = missing
            .par_iter()
            .map(|p| visibility_region(self.poly, p))
            .collect::<Result<_, _>>()?;
        for (p, r) in missing.into_iter().zip(computed) {
            self.vis.insert(p.clone(), Arc::new(r));
        }
        self.times.visibility += t.elapsed();
        Ok(pts.iter().map(|p| self.vis[p].clone()).collect())
    }

    pub fn overlay(&mut self, pts: &[Point]) -> Result<Arrangement, SolverError> {
        let regions = self.regions(pts)?;
        let t = Instant::now();
        let arr = Arrangement::overlay(self.poly, &regions)?;
        self.times.arrangement += t.elapsed();
        Ok(arr)
    }

    pub fn uncovered(&mut self, guards: &[Point]) -> Result<Vec<Face>, SolverError> {
        let arr = self.overlay(guards)?;
        Ok(arr.uncovered().into_iter().map(|f| arr.face(f).clone()).collect())
    }

    /// Brings `rows` up to date: old witnesses are tested against guards
    /// added since the last call, new witnesses against all guards.
    pub fn grow_rows(&mut self, rows: &mut Rows, witnesses: &[Point], guards: &[Point]) -> Result<(), SolverError> {
        let regions = self.regions(witnesses)?;
        let t = Instant::now();
        let poly = self.poly;
        let old_g = rows.n_guards;
        let old_w = rows.rows.len();
        let fresh = &guards[old_g..];
        rows.rows.par_iter_mut().zip(&regions[..old_w]).for_each(|(row, vis)| {
            row.extend(
                fresh
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| vis.contains(poly, g))
                    .map(|(i, _)| old_g + i),
            );
        });
        let new_rows: Vec<Vec<usize>> = regions[old_w..]
            .par_iter()
            .map(|vis| {
                guards
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| vis.contains(poly, g))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        rows.rows.extend(new_rows);
        rows.n_guards = guards.len();
        self.times.set_cover += t.elapsed();
        if rows.rows.iter().any(|r| r.is_empty()) {
            return Err(SolverError::Infeasible);
        }
        Ok(())
    }

    /// Exact minimum cover within the per-solve budget, seeded with the
    /// previous choice and, for small matrices, a Lagrangian cover.
    pub fn set_cover(&mut self, rows: &Rows, incumbent: Option<&[usize]>) -> IlpResult {
        let t = Instant::now();
        let inst = rows.instance();
        let mut seed: Option<Vec<usize>> = incumbent.filter(|c| inst.is_cover(c)).map(|c| c.to_vec());
        if self.cfg.use_lagrangian && inst.n_rows() * inst.n_cols() <= self.cfg.lagrangian_max_size {
            let lr = lagrangian(&inst, LagrangianParams::default());
            if seed.as_ref().is_none_or(|s| lr.cover.len() < s.len()) {
                seed = Some(lr.cover);
            }
        }
        let budget = self.cfg.ilp_budget().min(self.remaining()).max(Duration::from_millis(1));
        let r = ilp_solve(&inst, seed.as_deref(), Some(budget));
        self.times.set_cover += t.elapsed();
        r
    }

    pub fn finish(&mut self) -> Timings {
        self.times.total = self.start.elapsed();
        self.times
    }
}

/// Incidence rows `rows[w]` listing the guard indices that see witness `w`.
#[derive(Debug, Default)]
pub(super) struct Rows {
    pub rows: Vec<Vec<usize>>,
    pub n_guards: usize,
}

impl Rows {
    pub fn instance(&self) -> ScpInstance {
        ScpInstance::new(self.n_guards, self.rows.clone()).expect("rows are nonempty and in range")
    }
}
