use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::point::{on_segment, orient, segment_contact, Point, Rat, SegmentContact};
use super::GeometryError;

/// A polygon with holes. The outer ring is counterclockwise and every hole
/// is clockwise, so the interior of the polygon is always to the left of each
/// directed edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    rings: Vec<Vec<Point>>,
    flat: Vec<Point>,
    ring_start: Vec<usize>,
}

/// Result of [`Polygon::locate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

impl Polygon {
    /// Validates raw rings (first ring outer, the rest holes) and fixes their
    /// orientation.
    pub fn new(rings: Vec<Vec<Point>>) -> Result<Polygon, GeometryError> {
        validate(rings)
    }

    fn from_canonical(rings: Vec<Vec<Point>>) -> Polygon {
        let mut flat = Vec::new();
        let mut ring_start = Vec::with_capacity(rings.len() + 1);
        for r in &rings {
            ring_start.push(flat.len());
            flat.extend(r.iter().cloned());
        }
        ring_start.push(flat.len());
        Polygon {
            rings,
            flat,
            ring_start,
        }
    }

    pub fn outer(&self) -> &[Point] {
        &self.rings[0]
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        &self.rings[1..]
    }

    pub fn rings(&self) -> &[Vec<Point>] {
        &self.rings
    }

    pub fn is_simple(&self) -> bool {
        self.rings.len() == 1
    }

    /// All vertices, outer ring first, then holes in order.
    pub fn vertices(&self) -> &[Point] {
        &self.flat
    }

    /// Total vertex count.
    pub fn n(&self) -> usize {
        self.flat.len()
    }

    fn ring_of(&self, v: usize) -> usize {
        match self.ring_start.binary_search(&v) {
            Ok(r) => r,
            Err(r) => r - 1,
        }
    }

    /// Index of the vertex following `v` along its ring.
    pub fn next_vertex(&self, v: usize) -> usize {
        let r = self.ring_of(v);
        let (s, e) = (self.ring_start[r], self.ring_start[r + 1]);
        if v + 1 == e {
            s
        } else {
            v + 1
        }
    }

    pub fn prev_vertex(&self, v: usize) -> usize {
        let r = self.ring_of(v);
        let (s, e) = (self.ring_start[r], self.ring_start[r + 1]);
        if v == s {
            e - 1
        } else {
            v - 1
        }
    }

    /// Directed edges `(a, b)` with the interior on the left.
    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        (0..self.flat.len()).map(move |i| (&self.flat[i], &self.flat[self.next_vertex(i)]))
    }

    /// Whether vertex `v` is reflex (interior angle greater than pi).
    pub fn is_reflex(&self, v: usize) -> bool {
        let p = &self.flat[self.prev_vertex(v)];
        let n = &self.flat[self.next_vertex(v)];
        orient(p, &self.flat[v], n) == Ordering::Less
    }

    pub fn area(&self) -> Rat {
        let mut a = ring_area2(&self.rings[0]);
        for h in &self.rings[1..] {
            a += ring_area2(h);
        }
        a / Rat::from_integer(2.into())
    }

    pub fn bbox(&self) -> (Rat, Rat, Rat, Rat) {
        let o = &self.rings[0];
        let mut xmin = o[0].x().clone();
        let mut xmax = xmin.clone();
        let mut ymin = o[0].y().clone();
        let mut ymax = ymin.clone();
        for p in o {
            if p.x() < &xmin {
                xmin = p.x().clone();
            }
            if p.x() > &xmax {
                xmax = p.x().clone();
            }
            if p.y() < &ymin {
                ymin = p.y().clone();
            }
            if p.y() > &ymax {
                ymax = p.y().clone();
            }
        }
        (xmin, ymin, xmax, ymax)
    }

    /// Exact classification of `p` against the closed polygon.
    pub fn locate(&self, p: &Point) -> Location {
        let mut inside = false;
        for (a, b) in self.edges() {
            if on_segment(a, b, p) {
                return Location::Boundary;
            }
            if crosses_right_ray(a, b, p) {
                inside = !inside;
            }
        }
        if inside {
            Location::Interior
        } else {
            Location::Exterior
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.locate(p) != Location::Exterior
    }

    /// Whether the closed segment `ab` lies in the closed polygon. Segments
    /// running along the boundary count as inside.
    pub fn sees(&self, a: &Point, b: &Point) -> Result<bool, GeometryError> {
        if !self.contains(a) || !self.contains(b) {
            return Err(GeometryError::PointOutside);
        }
        Ok(self.sees_unchecked(a, b))
    }

    pub(crate) fn sees_unchecked(&self, a: &Point, b: &Point) -> bool {
        if a == b {
            return true;
        }
        // Split ab at every boundary contact; each open piece is then either
        // inside, outside or on the boundary as a whole.
        let mut cuts: Vec<Point> = vec![a.clone(), b.clone()];
        for (c, d) in self.edges() {
            match segment_contact(a, b, c, d) {
                SegmentContact::None => {}
                SegmentContact::Point(q) => cuts.push(q),
                SegmentContact::Overlap(q, r) => {
                    cuts.push(q);
                    cuts.push(r);
                }
            }
        }
        if a > b {
            cuts.sort_by(|p, q| q.cmp(p));
        } else {
            cuts.sort();
        }
        cuts.dedup();
        cuts.windows(2)
            .all(|w| self.locate(&w[0].midpoint(&w[1])) != Location::Exterior)
    }
}

/// Half-open crossing test of edge `ab` with the ray from `p` towards +x.
pub(crate) fn crosses_right_ray(a: &Point, b: &Point, p: &Point) -> bool {
    let (_, ay) = a.approx();
    let (_, by) = b.approx();
    let (px, py) = p.approx();
    // Cheap rejection when the edge is clearly above, below or left of p.
    let margin = 1e-9 * (1.0 + ay.abs().max(by.abs()).max(py.abs()));
    if (ay > py + margin && by > py + margin) || (ay < py - margin && by < py - margin) {
        return false;
    }
    let (ax, _) = a.approx();
    let (bx, _) = b.approx();
    let xm = 1e-9 * (1.0 + ax.abs().max(bx.abs()).max(px.abs()));
    if ax < px - xm && bx < px - xm {
        return false;
    }
    let a_above = a.y() > p.y();
    let b_above = b.y() > p.y();
    if a_above == b_above {
        return false;
    }
    let o = orient(a, b, p);
    if b_above {
        o == Ordering::Greater
    } else {
        o == Ordering::Less
    }
}

/// Whether `p` lies in the closed region bounded by a simple ring.
pub fn ring_contains(ring: &[Point], p: &Point) -> bool {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        if on_segment(a, b, p) {
            return true;
        }
        if crosses_right_ray(a, b, p) {
            inside = !inside;
        }
    }
    inside
}

/// Twice the signed area of a ring (positive when counterclockwise).
pub fn ring_area2(ring: &[Point]) -> Rat {
    let n = ring.len();
    let mut s = Rat::zero();
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        s += a.x() * b.y() - a.y() * b.x();
    }
    s
}

fn validate(mut rings: Vec<Vec<Point>>) -> Result<Polygon, GeometryError> {
    if rings.is_empty() {
        return Err(GeometryError::DegenerateRing { ring: 0 });
    }
    for (ri, r) in rings.iter().enumerate() {
        if r.len() < 3 {
            return Err(GeometryError::DegenerateRing { ring: ri });
        }
    }
    let mut all: Vec<&Point> = rings.iter().flatten().collect();
    all.sort();
    if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
        return Err(GeometryError::DuplicateVertex {
            point: Box::new(w[0].clone()),
        });
    }
    for (ri, r) in rings.iter().enumerate() {
        let n = r.len();
        for i in 0..n {
            if orient(&r[(i + n - 1) % n], &r[i], &r[(i + 1) % n]) == Ordering::Equal {
                return Err(GeometryError::DegenerateRing { ring: ri });
            }
        }
    }
    for (ri, r) in rings.iter().enumerate() {
        if ring_self_intersects(r) {
            return Err(GeometryError::SelfIntersection { ring: ri });
        }
        if ring_area2(r).is_zero() {
            return Err(GeometryError::DegenerateRing { ring: ri });
        }
    }
    for (ri, r) in rings.iter_mut().enumerate() {
        let ccw = ring_area2(r).is_positive();
        if (ri == 0) != ccw {
            r.reverse();
        }
    }
    for hi in 1..rings.len() {
        for rj in 0..rings.len() {
            if rj != hi && rings_touch(&rings[hi], &rings[rj]) {
                return Err(GeometryError::HoleOutsideOrTouching { hole: hi - 1 });
            }
        }
        if !ring_contains(&rings[0], &rings[hi][0]) {
            return Err(GeometryError::HoleOutsideOrTouching { hole: hi - 1 });
        }
        for rj in 1..rings.len() {
            if rj != hi && ring_contains(&rings[rj], &rings[hi][0]) {
                return Err(GeometryError::HoleOutsideOrTouching { hole: hi - 1 });
            }
        }
    }
    Ok(Polygon::from_canonical(rings))
}

fn ring_edges(r: &[Point]) -> Vec<(&Point, &Point)> {
    (0..r.len()).map(|i| (&r[i], &r[(i + 1) % r.len()])).collect()
}

/// Candidate pairs of edges whose approximate x-ranges overlap.
fn overlapping_pairs(
    e1: &[(&Point, &Point)],
    e2: &[(&Point, &Point)],
    same: bool,
) -> Vec<(usize, usize)> {
    let span = |(a, b): &(&Point, &Point)| {
        let (ax, _) = a.approx();
        let (bx, _) = b.approx();
        let pad = 1e-9 * (1.0 + ax.abs().max(bx.abs()));
        (ax.min(bx) - pad, ax.max(bx) + pad)
    };
    let mut events: Vec<(f64, f64, usize, bool)> = Vec::new();
    for (i, e) in e1.iter().enumerate() {
        let (lo, hi) = span(e);
        events.push((lo, hi, i, false));
    }
    if !same {
        for (i, e) in e2.iter().enumerate() {
            let (lo, hi) = span(e);
            events.push((lo, hi, i, true));
        }
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut active: Vec<(f64, usize, bool)> = Vec::new();
    let mut out = Vec::new();
    for (lo, hi, i, side) in events {
        active.retain(|&(h, _, _)| h >= lo);
        for &(_, j, s) in &active {
            if same {
                out.push((j.min(i), j.max(i)));
            } else if s != side {
                if side {
                    out.push((j, i));
                } else {
                    out.push((i, j));
                }
            }
        }
        active.push((hi, i, side));
    }
    out
}

fn ring_self_intersects(r: &[Point]) -> bool {
    let n = r.len();
    let edges = ring_edges(r);
    for (i, j) in overlapping_pairs(&edges, &edges, true) {
        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
        let contact = segment_contact(edges[i].0, edges[i].1, edges[j].0, edges[j].1);
        match contact {
            SegmentContact::None => {}
            SegmentContact::Overlap(..) => return true,
            SegmentContact::Point(q) => {
                if !adjacent {
                    return true;
                }
                // Adjacent edges may only share their common vertex.
                let shared = if j == i + 1 { edges[i].1 } else { edges[i].0 };
                if &q != shared {
                    return true;
                }
            }
        }
    }
    false
}

fn rings_touch(r1: &[Point], r2: &[Point]) -> bool {
    let e1 = ring_edges(r1);
    let e2 = ring_edges(r2);
    overlapping_pairs(&e1, &e2, false).into_iter().any(|(i, j)| {
        segment_contact(e1[i].0, e1[i].1, e2[j].0, e2[j].1) != SegmentContact::None
    })
}
