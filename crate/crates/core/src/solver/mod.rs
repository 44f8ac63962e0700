//! Iterative solvers for vertex guards, point guards and the fractional
//! relaxation, plus exhaustive oracles and coverage certification.

mod ctx;
mod fractional;
mod point;
mod vertex;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::arrangement::{uncovered_region, Arrangement, ArrangementError};
use crate::geometry::{fisk_guards, fmt_rat, visibility_region, GeometryError, Point, Polygon, Rat};
use crate::instances::parse_rat;
use crate::pointgen::{GuardMode, InitialStrategy, PointGenError};
use crate::setcover::ScpError;

pub use fractional::solve_fractional;
pub use point::solve_point;
pub use vertex::solve_vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    SetCover(#[from] ScpError),
    #[error(transparent)]
    PointGen(#[from] PointGenError),
    #[error("exhaustive search limited to 20 vertices, got {0}")]
    TooLarge(usize),
    #[error("some part of the polygon is seen by no guard candidate")]
    Infeasible,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("solution line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuardModel {
    Vertex,
    Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relaxation {
    Integer,
    Fractional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub guard_model: GuardModel,
    pub relaxation: Relaxation,
    /// `None` picks the model default: vertices for vertex guards, Chwa
    /// points otherwise.
    pub initial_strategy: Option<InitialStrategy>,
    pub guard_mode: GuardMode,
    pub time_limit: Duration,
    pub max_iterations: usize,
    /// Skip the upper bound procedure while the lower bound improves.
    pub defer_upper_bound: bool,
    pub use_lagrangian: bool,
    /// Largest `rows * cols` for which the Lagrangian heuristic runs.
    pub lagrangian_max_size: usize,
    /// Add midpoints of boundary pieces of uncovered faces as witnesses.
    pub edge_witnesses: bool,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            guard_model: GuardModel::Point,
            relaxation: Relaxation::Integer,
            initial_strategy: None,
            guard_mode: GuardMode::LightAvpInterior,
            time_limit: Duration::from_secs(60),
            max_iterations: 100,
            defer_upper_bound: true,
            use_lagrangian: true,
            lagrangian_max_size: 250_000,
            edge_witnesses: true,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn vertex() -> Self {
        SolverConfig {
            guard_model: GuardModel::Vertex,
            ..Self::default()
        }
    }

    pub fn fractional() -> Self {
        SolverConfig {
            relaxation: Relaxation::Fractional,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.time_limit.is_zero() {
            return Err(SolverError::InvalidConfig("time limit must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(SolverError::InvalidConfig("at least one iteration is required".into()));
        }
        if self.guard_model == GuardModel::Vertex && self.relaxation == Relaxation::Fractional {
            return Err(SolverError::InvalidConfig("the fractional solver uses point guards".into()));
        }
        Ok(())
    }

    /// Per set-cover solve time budget.
    pub fn ilp_budget(&self) -> Duration {
        self.time_limit / 10
    }

    fn strategy(&self) -> InitialStrategy {
        self.initial_strategy.unwrap_or(match self.guard_model {
            GuardModel::Vertex => InitialStrategy::JustVertices,
            GuardModel::Point => InitialStrategy::ChwaPoints,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    ProvenOptimal,
    /// Iteration cap reached with a certified cover.
    Feasible,
    /// The iteration stalled without closing the gap.
    BoundsOnly,
    TimeLimit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::ProvenOptimal => "ProvenOptimal",
            Status::Feasible => "Feasible",
            Status::BoundsOnly => "BoundsOnly",
            Status::TimeLimit => "TimeLimit",
        })
    }
}

impl FromStr for Status {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "ProvenOptimal" => Status::ProvenOptimal,
            "Feasible" => Status::Feasible,
            "BoundsOnly" => Status::BoundsOnly,
            "TimeLimit" => Status::TimeLimit,
            _ => return Err(format!("unknown status {s:?}")),
        })
    }
}

/// Wall time spent per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Timings {
    pub visibility: Duration,
    pub arrangement: Duration,
    pub set_cover: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Guards with their value; integer solutions use value 1.
    pub guards: Vec<(Point, Rat)>,
    pub lower_bound: Rat,
    pub upper_bound: Rat,
    pub status: Status,
    pub iterations: usize,
    pub timings: Timings,
    /// Candidate set size after each iteration.
    pub candidates: Vec<usize>,
    /// Witness set size after each iteration.
    pub witnesses: Vec<usize>,
}

impl Solution {
    pub fn guard_points(&self) -> Vec<Point> {
        self.guards.iter().map(|(p, _)| p.clone()).collect()
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::ProvenOptimal
    }

    /// Exact text form: header lines, then one `x y value` line per guard.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "status {}\nlower_bound {}\nupper_bound {}\niterations {}\nguards {}\n",
            self.status,
            fmt_rat(&self.lower_bound),
            fmt_rat(&self.upper_bound),
            self.iterations,
            self.guards.len()
        );
        for (p, v) in &self.guards {
            s.push_str(&format!("{} {} {}\n", fmt_rat(p.x()), fmt_rat(p.y()), fmt_rat(v)));
        }
        s
    }

    /// Reads [`Solution::to_text`] output. Timings and histories are not
    /// stored and come back empty.
    pub fn from_text(text: &str) -> Result<Solution, SolverError> {
        let err = |line: usize, msg: &str| SolverError::Syntax {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut field = |name: &str| -> Result<(usize, String), SolverError> {
            let (i, l) = lines.next().ok_or_else(|| err(0, &format!("missing {name}")))?;
            match l.split_once(' ') {
                Some((k, v)) if k == name => Ok((i, v.trim().to_string())),
                _ => Err(err(i, &format!("expected {name}"))),
            }
        };
        let (i, s) = field("status")?;
        let status = s.parse().map_err(|e: String| err(i, &e))?;
        let (i, s) = field("lower_bound")?;
        let lower_bound = parse_rat(&s).ok_or_else(|| err(i, "bad number"))?;
        let (i, s) = field("upper_bound")?;
        let upper_bound = parse_rat(&s).ok_or_else(|| err(i, "bad number"))?;
        let (i, s) = field("iterations")?;
        let iterations = s.parse().map_err(|_| err(i, "bad count"))?;
        let (i, s) = field("guards")?;
        let count: usize = s.parse().map_err(|_| err(i, "bad count"))?;
        let mut guards = Vec::with_capacity(count);
        for _ in 0..count {
            let (i, l) = lines.next().ok_or_else(|| err(0, "missing guard line"))?;
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(err(i, "expected x y value"));
            }
            let v: Vec<Rat> = parts
                .iter()
                .map(|t| parse_rat(t).ok_or_else(|| err(i, "bad number")))
                .collect::<Result<_, _>>()?;
            guards.push((Point::new(v[0].clone(), v[1].clone()), v[2].clone()));
        }
        if let Some((i, _)) = lines.next() {
            return Err(err(i, "trailing content"));
        }
        Ok(Solution {
            guards,
            lower_bound,
            upper_bound,
            status,
            iterations,
            timings: Timings::default(),
            candidates: Vec::new(),
            witnesses: Vec::new(),
        })
    }
}

/// Runs the solver selected by `cfg`.
pub fn solve(poly: &Polygon, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    match (cfg.guard_model, cfg.relaxation) {
        (GuardModel::Vertex, _) => solve_vertex(poly, cfg),
        (GuardModel::Point, Relaxation::Integer) => solve_point(poly, cfg),
        (GuardModel::Point, Relaxation::Fractional) => solve_fractional(poly, cfg),
    }
}

/// Whether the closed visibility regions of `guards` cover the polygon.
pub fn certify(poly: &Polygon, guards: &[Point]) -> Result<bool, SolverError> {
    if guards.is_empty() {
        return Ok(false);
    }
    let regions = guards
        .iter()
        .map(|g| visibility_region(poly, g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| match e {
            GeometryError::PointOutside => SolverError::Arrangement(ArrangementError::PointOutside(
                guards.iter().find(|g| !poly.contains(g)).cloned().map(Box::new).expect("an outside guard"),
            )),
            e => e.into(),
        })?;
    Ok(uncovered_region(poly, &regions)?.is_empty())
}

/// Whether the weighted guards cover every point with total weight one.
pub fn certify_fractional(poly: &Polygon, guards: &[(Point, Rat)]) -> Result<bool, SolverError> {
    let support: Vec<&(Point, Rat)> = guards.iter().filter(|(_, x)| x.is_positive()).collect();
    if support.is_empty() {
        return Ok(false);
    }
    let regions = support
        .iter()
        .map(|(g, _)| visibility_region(poly, g))
        .collect::<Result<Vec<_>, _>>()?;
    let arr = Arrangement::overlay(poly, &regions)?;
    let one = Rat::one();
    Ok(arr
        .faces()
        .iter()
        .all(|f| f.cover().iter().map(|&i| &support[i].1).sum::<Rat>() >= one))
}

/// Minimum number of vertex guards by enumeration over vertex subsets.
pub fn brute_force_vertex(poly: &Polygon) -> Result<usize, SolverError> {
    let n = poly.n();
    if n > 20 {
        return Err(SolverError::TooLarge(n));
    }
    let regions = poly
        .vertices()
        .iter()
        .map(|v| visibility_region(poly, v))
        .collect::<Result<Vec<_>, _>>()?;
    let arr = Arrangement::overlay(poly, &regions)?;
    // Hitting every minimal face hits every face.
    let mut masks: Vec<u32> = arr
        .faces()
        .iter()
        .zip(arr.classify())
        .filter(|(_, c)| c.is_shadow())
        .map(|(f, _)| f.cover().iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    masks.sort_unstable();
    masks.dedup();
    if masks.contains(&0) {
        return Err(SolverError::Infeasible);
    }
    for k in 1..=n as u32 {
        // Subsets of size k in increasing order.
        let mut c: u32 = (1u32 << k) - 1;
        while c < 1u32 << n {
            if masks.iter().all(|m| m & c != 0) {
                return Ok(k as usize);
            }
            let u = c & c.wrapping_neg();
            let v = c + u;
            c = v + (((v ^ c) / u) >> 2);
        }
    }
    Err(SolverError::Infeasible)
}

/// A certified cover used as the starting upper bound: Fisk's colouring
/// for simple polygons, all vertices otherwise.
fn initial_cover(poly: &Polygon) -> Result<Vec<Point>, SolverError> {
    if poly.is_simple() {
        let g = fisk_guards(poly)?;
        if certify(poly, &g)? {
            return Ok(g);
        }
    }
    Ok(poly.vertices().to_vec())
}

fn int_rat(v: usize) -> Rat {
    Rat::from_integer((v as i64).into())
}

fn unit_guards(pts: Vec<Point>) -> Vec<(Point, Rat)> {
    pts.into_iter().map(|p| (p, Rat::one())).collect()
}

#[cfg(test)]
mod tests;
