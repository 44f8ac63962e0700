//! Choice of witness and guard candidate points.

use std::collections::HashSet;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, Face};
use crate::geometry::{visibility_region, GeometryError, Point, Polygon, Rat, VisRegion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointGenError {
    #[error("the initial strategy produced no witnesses")]
    EmptyWitnessSet,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessTag {
    InitialStrategy,
    ShadowInterior,
    ShadowEdge,
    /// Interior point of a shadow face of the vertex arrangement.
    ShadowAvp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateTag {
    PolygonVertex,
    LightAvpVertex,
    LightAvpInterior,
    DualGuided,
}

/// Insertion-ordered point list without exact duplicates. Points are never
/// removed.
#[derive(Debug, Clone)]
pub struct TaggedPoints<T> {
    points: Vec<Point>,
    tags: Vec<T>,
    seen: HashSet<Point>,
}

pub type WitnessSet = TaggedPoints<WitnessTag>;
pub type CandidateSet = TaggedPoints<CandidateTag>;

impl<T: Copy> Default for TaggedPoints<T> {
    fn default() -> Self {
        TaggedPoints {
            points: Vec::new(),
            tags: Vec::new(),
            seen: HashSet::new(),
        }
    }
}

impl<T: Copy> TaggedPoints<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `p` unless already present. Returns whether it was new.
    pub fn push(&mut self, p: Point, tag: T) -> bool {
        if self.seen.contains(&p) {
            return false;
        }
        self.seen.insert(p.clone());
        self.points.push(p);
        self.tags.push(tag);
        true
    }

    /// Appends all new points and returns how many were added.
    pub fn extend(&mut self, items: impl IntoIterator<Item = (Point, T)>) -> usize {
        items.into_iter().filter(|(p, t)| self.push(p.clone(), *t)).count()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.seen.contains(p)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn tags(&self) -> &[T] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialStrategy {
    JustVertices,
    ConvexVertices,
    ChwaPoints,
    /// `k x k` interior grid of the bounding box, points outside dropped.
    RegularGrid(usize),
    /// One interior point per shadow face of the overlay of all vertex
    /// visibility regions.
    ShadowAvps,
}

impl fmt::Display for InitialStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialStrategy::JustVertices => write!(f, "vertices"),
            InitialStrategy::ConvexVertices => write!(f, "convex"),
            InitialStrategy::ChwaPoints => write!(f, "chwa"),
            InitialStrategy::RegularGrid(k) => write!(f, "grid{k}"),
            InitialStrategy::ShadowAvps => write!(f, "shadow"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuardMode {
    LightAvpVertices,
    LightAvpInterior,
}

impl fmt::Display for GuardMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardMode::LightAvpVertices => write!(f, "avp-vertices"),
            GuardMode::LightAvpInterior => write!(f, "avp-interior"),
        }
    }
}

pub fn initial_witnesses(poly: &Polygon, strategy: InitialStrategy) -> Result<WitnessSet, PointGenError> {
    let mut out = WitnessSet::new();
    let tag = WitnessTag::InitialStrategy;
    let verts = poly.vertices();
    match strategy {
        InitialStrategy::JustVertices => {
            out.extend(verts.iter().map(|v| (v.clone(), tag)));
        }
        InitialStrategy::ConvexVertices => {
            out.extend((0..verts.len()).filter(|&v| !poly.is_reflex(v)).map(|v| (verts[v].clone(), tag)));
        }
        InitialStrategy::ChwaPoints => {
            for v in 0..verts.len() {
                let (p, q) = (poly.prev_vertex(v), poly.next_vertex(v));
                let reflex = poly.is_reflex(v);
                if !reflex && (poly.is_reflex(p) || poly.is_reflex(q)) {
                    out.push(verts[v].clone(), tag);
                }
                if reflex && poly.is_reflex(q) {
                    out.push(verts[v].midpoint(&verts[q]), tag);
                }
            }
        }
        InitialStrategy::RegularGrid(k) => {
            let (x0, y0, x1, y1) = poly.bbox();
            let d = Rat::from_integer((k as i64 + 1).into());
            for i in 1..=k {
                for j in 1..=k {
                    let fi = Rat::from_integer((i as i64).into()) / &d;
                    let fj = Rat::from_integer((j as i64).into()) / &d;
                    let p = Point::new(&x0 + (&x1 - &x0) * fi, &y0 + (&y1 - &y0) * fj);
                    if poly.contains(&p) {
                        out.push(p, tag);
                    }
                }
            }
        }
        InitialStrategy::ShadowAvps => {
            let regions = verts
                .iter()
                .map(|v| visibility_region(poly, v))
                .collect::<Result<Vec<_>, _>>()?;
            let arr = Arrangement::overlay(poly, &regions)?;
            for (f, c) in arr.faces().iter().zip(arr.classify()) {
                if c.is_shadow() {
                    out.push(f.representative(), WitnessTag::ShadowAvp);
                }
            }
        }
    }
    if out.is_empty() {
        return Err(PointGenError::EmptyWitnessSet);
    }
    Ok(out)
}

/// Guard candidates from the light faces of an existing witness
/// arrangement. Polygon vertices are not included.
pub fn light_candidates(arr: &Arrangement, mode: GuardMode) -> Vec<(Point, CandidateTag)> {
    let mut out = Vec::new();
    for (f, c) in arr.faces().iter().zip(arr.classify()) {
        if !c.is_light() {
            continue;
        }
        match mode {
            GuardMode::LightAvpInterior => out.push((f.representative(), CandidateTag::LightAvpInterior)),
            GuardMode::LightAvpVertices => {
                for r in std::iter::once(f.outer()).chain(f.holes().iter().map(|h| h.as_slice())) {
                    out.extend(r.iter().map(|p| (p.clone(), CandidateTag::LightAvpVertex)));
                }
            }
        }
    }
    out
}

/// Points on edges or vertices of the arrangement that see strictly more
/// witnesses than any adjacent face. Under closed visibility these can be
/// the only optimal guard positions.
pub fn degenerate_candidates(arr: &Arrangement) -> Vec<(Point, CandidateTag)> {
    arr.degenerate_features()
        .into_iter()
        .map(|(p, _)| (p, CandidateTag::LightAvpVertex))
        .collect()
}

/// Builds the witness arrangement and returns its light-face candidates.
/// With `LightAvpVertices` the polygon vertices come first.
pub fn guard_candidates(poly: &Polygon, witnesses: &WitnessSet, mode: GuardMode) -> Result<CandidateSet, PointGenError> {
    let regions = witnesses
        .points()
        .iter()
        .map(|w| visibility_region(poly, w))
        .collect::<Result<Vec<VisRegion>, _>>()?;
    let arr = Arrangement::overlay(poly, &regions)?;
    let mut out = CandidateSet::new();
    if mode == GuardMode::LightAvpVertices {
        out.extend(poly.vertices().iter().map(|v| (v.clone(), CandidateTag::PolygonVertex)));
    }
    out.extend(light_candidates(&arr, mode));
    Ok(out)
}

/// New witnesses for uncovered faces: an interior point of each, and with
/// `edge_witnesses` the midpoint of every piece of its boundary lying on
/// the polygon boundary.
pub fn update_witnesses(uncovered: &[Face], edge_witnesses: bool) -> Vec<(Point, WitnessTag)> {
    let mut out = Vec::new();
    for f in uncovered {
        out.push((f.representative(), WitnessTag::ShadowInterior));
        if edge_witnesses {
            for (a, b) in f.boundary_segments() {
                out.push((a.midpoint(b), WitnessTag::ShadowEdge));
            }
        }
    }
    out
}

/// Candidates with negative reduced cost: light faces (and degenerate
/// features) of the witness arrangement whose witnesses' duals sum to more
/// than one.
pub fn dual_guards_in(arr: &Arrangement, duals: &[Rat]) -> Vec<Point> {
    let one = Rat::one();
    let exceeds = |cover: &[usize]| cover.iter().map(|&w| &duals[w]).sum::<Rat>() > one;
    let mut out = Vec::new();
    for (f, c) in arr.faces().iter().zip(arr.classify()) {
        if c.is_light() && exceeds(f.cover()) {
            out.push(f.representative());
        }
    }
    for (p, cover) in arr.degenerate_features() {
        if exceeds(&cover) {
            out.push(p);
        }
    }
    out
}

/// [`dual_guards_in`] on the arrangement of `witnesses`.
pub fn dual_guards(poly: &Polygon, witnesses: &[Point], duals: &[Rat]) -> Result<Vec<Point>, PointGenError> {
    let regions = witnesses
        .iter()
        .map(|w| visibility_region(poly, w))
        .collect::<Result<Vec<VisRegion>, _>>()?;
    let arr = Arrangement::overlay(poly, &regions)?;
    Ok(dual_guards_in(&arr, duals))
}

/// Low-complexity replacement for a point strictly inside `face`.
pub fn round_point(face: &Face, p: &Point) -> Point {
    face.round_point(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, rat};

    fn square() -> Polygon {
        Polygon::new(vec![vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(1, 1),
            Point::from_ints(0, 1),
        ]])
        .unwrap()
    }

    fn ell() -> Polygon {
        Polygon::new(vec![[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
            .iter()
            .map(|&(x, y)| Point::from_ints(x, y))
            .collect()])
        .unwrap()
    }

    #[test]
    fn initial_strategies() {
        assert_eq!(initial_witnesses(&square(), InitialStrategy::JustVertices).unwrap().len(), 4);
        let c = initial_witnesses(&ell(), InitialStrategy::ConvexVertices).unwrap();
        assert_eq!(c.len(), 5);
        assert!(!c.contains(&Point::from_ints(1, 1)));
        let w = initial_witnesses(&ell(), InitialStrategy::ChwaPoints).unwrap();
        assert_eq!(w.points(), &[Point::from_ints(2, 1), Point::from_ints(1, 2)]);
        assert_eq!(
            initial_witnesses(&square(), InitialStrategy::ChwaPoints).unwrap_err(),
            PointGenError::EmptyWitnessSet
        );
        let g = initial_witnesses(&ell(), InitialStrategy::RegularGrid(3)).unwrap();
        // 9 grid points at multiples of 1/2; (3/2,3/2) is outside.
        assert_eq!(g.len(), 8);
    }

    #[test]
    fn shadow_avp_witnesses() {
        let w = initial_witnesses(&ell(), InitialStrategy::ShadowAvps).unwrap();
        // Top arm and right arm are the two minimal faces.
        assert_eq!(w.len(), 2);
        assert!(w.tags().iter().all(|&t| t == WitnessTag::ShadowAvp));
    }

    #[test]
    fn tagged_points_dedupe() {
        let mut w = WitnessSet::new();
        assert!(w.push(Point::from_ints(1, 1), WitnessTag::InitialStrategy));
        assert!(!w.push(Point::from_ints(1, 1), WitnessTag::ShadowEdge));
        assert_eq!(w.tags(), &[WitnessTag::InitialStrategy]);
    }

    #[test]
    fn candidates_in_square() {
        let mut w = WitnessSet::new();
        w.push(Point::new(rat(1, 2), rat(1, 2)), WitnessTag::InitialStrategy);
        let c = guard_candidates(&square(), &w, GuardMode::LightAvpInterior).unwrap();
        assert_eq!(c.len(), 1);
        assert!(square().contains(&c.points()[0]));
    }

    #[test]
    fn candidates_in_ell() {
        let p = ell();
        let wp = Point::new(rat(1, 4), rat(15, 8));
        let mut w = WitnessSet::new();
        w.push(wp.clone(), WitnessTag::InitialStrategy);
        let vis = visibility_region(&p, &wp).unwrap();
        let c = guard_candidates(&p, &w, GuardMode::LightAvpInterior).unwrap();
        assert_eq!(c.len(), 1);
        assert!(vis.ring_contains(&c.points()[0]));
        let c = guard_candidates(&p, &w, GuardMode::LightAvpVertices).unwrap();
        assert!(c.contains(&Point::from_ints(0, 2)) && c.contains(&Point::from_ints(1, 2)));
        let light: Vec<CandidateTag> = c.tags().iter().copied().filter(|&t| t != CandidateTag::PolygonVertex).collect();
        assert!(light.iter().all(|&t| t == CandidateTag::LightAvpVertex));
        for (q, _) in c.points().iter().zip(c.tags()).filter(|(_, &t)| t == CandidateTag::LightAvpVertex) {
            assert!(vis.ring_contains(q));
        }
    }

    #[test]
    fn shadow_triangle_witnesses() {
        let p = ell();
        assert!(update_witnesses(&[], true).is_empty());
        let vis = visibility_region(&p, &Point::from_ints(2, 0)).unwrap();
        let arr = Arrangement::overlay(&p, &[vis]).unwrap();
        let faces: Vec<Face> = arr.uncovered().iter().map(|&f| arr.face(f).clone()).collect();
        assert_eq!(faces.len(), 1);
        let w = update_witnesses(&faces, true);
        assert_eq!(w.len(), 3);
        assert_eq!(w[0].1, WitnessTag::ShadowInterior);
        assert!(faces[0].contains_strict(&w[0].0));
        let mut mids: Vec<Point> = w[1..].iter().map(|(q, _)| q.clone()).collect();
        mids.sort();
        assert_eq!(mids, vec![Point::new(rat(1, 2), int(2)), Point::new(int(1), rat(3, 2))]);
        assert_eq!(update_witnesses(&faces, false).len(), 1);
    }

    #[test]
    fn dual_separation() {
        let p = square();
        let w = vec![Point::new(rat(1, 4), rat(1, 4)), Point::new(rat(3, 4), rat(3, 4))];
        assert!(dual_guards(&p, &w, &[int(0), int(0)]).unwrap().is_empty());
        assert!(dual_guards(&p, &w[..1], &[int(1)]).unwrap().is_empty());
        let g = dual_guards(&p, &w, &[int(1), int(1)]).unwrap();
        assert_eq!(g.len(), 1);
        assert!(p.contains(&g[0]));
    }
}
