//! Exact visibility regions.
//!
//! The region is assembled interval by interval: polygon vertices split the
//! directions around the viewpoint into open angular intervals, and in each
//! interval a single polygon edge is the first one hit. Consecutive pieces
//! are joined along the separating rays. Zero-width spikes (visibility that
//! only continues along a grazing ray) are not part of the returned ring;
//! [`VisRegion::contains`] still reports points on them as seen.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::{Signed, Zero};

use super::point::{angle_cmp, line_intersection, on_segment, orient, Point, Rat};
use super::polygon::{ring_contains, Location, Polygon};
use super::GeometryError;

/// Canonical key of a direction vector, used to detect points lying on a
/// ray from the viewpoint through a polygon vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct DirKey(i8, Rat);

fn dir_key(from: &Point, to: &Point) -> Option<DirKey> {
    let (dx, dy) = to.sub(from);
    if !dx.is_zero() {
        let s = if dx.is_positive() { 1 } else { -1 };
        Some(DirKey(s, dy / dx))
    } else if !dy.is_zero() {
        Some(DirKey(if dy.is_positive() { 2 } else { -2 }, Rat::zero()))
    } else {
        None
    }
}

/// The visibility region of a point: a star-shaped simple ring
/// (counterclockwise) with the viewpoint in its kernel.
#[derive(Clone, Debug)]
pub struct VisRegion {
    viewpoint: Point,
    ring: Vec<Point>,
    dirs: HashSet<DirKey>,
    bbox: (f64, f64, f64, f64),
}

impl VisRegion {
    pub fn viewpoint(&self) -> &Point {
        &self.viewpoint
    }

    pub fn ring(&self) -> &[Point] {
        &self.ring
    }

    /// Whether the viewpoint sees `q`, for `q` in the polygon the region
    /// was computed for.
    pub fn contains(&self, poly: &Polygon, q: &Point) -> bool {
        if self.ring_contains(q) {
            return true;
        }
        match dir_key(&self.viewpoint, q) {
            Some(k) if self.dirs.contains(&k) => poly.sees_unchecked(&self.viewpoint, q),
            _ => false,
        }
    }

    /// Whether `q` lies in the closed ring (spikes excluded).
    pub fn ring_contains(&self, q: &Point) -> bool {
        let (x, y) = q.approx();
        let (x0, y0, x1, y1) = self.bbox;
        let pad = 1e-9 * (1.0 + x0.abs().max(x1.abs()).max(y0.abs()).max(y1.abs()));
        if x < x0 - pad || x > x1 + pad || y < y0 - pad || y > y1 + pad {
            return false;
        }
        ring_contains(&self.ring, q)
    }

    pub fn area(&self) -> Rat {
        super::polygon::ring_area2(&self.ring) / Rat::from_integer(2.into())
    }
}

enum Context {
    Interior,
    OnEdge(Point, Point),
    AtVertex { prev: Point, v: Point, next: Point },
}

fn context(poly: &Polygon, p: &Point) -> Result<Context, GeometryError> {
    match poly.locate(p) {
        Location::Exterior => Err(GeometryError::PointOutside),
        Location::Interior => Ok(Context::Interior),
        Location::Boundary => {
            let verts = poly.vertices();
            if let Some(i) = verts.iter().position(|v| v == p) {
                return Ok(Context::AtVertex {
                    prev: verts[poly.prev_vertex(i)].clone(),
                    v: verts[i].clone(),
                    next: verts[poly.next_vertex(i)].clone(),
                });
            }
            let (a, b) = poly
                .edges()
                .find(|(a, b)| on_segment(a, b, p))
                .expect("boundary point lies on some edge");
            Ok(Context::OnEdge(a.clone(), b.clone()))
        }
    }
}

impl Context {
    /// Whether the ray from the viewpoint towards `q` starts into the
    /// interior.
    fn admits(&self, q: &Point) -> bool {
        match self {
            Context::Interior => true,
            Context::OnEdge(a, b) => orient(a, b, q) == Ordering::Greater,
            Context::AtVertex { prev, v, next } => {
                let left_of_next = orient(v, next, q) == Ordering::Greater;
                let right_of_prev = orient(v, prev, q) == Ordering::Less;
                if orient(prev, v, next) == Ordering::Greater {
                    left_of_next && right_of_prev
                } else {
                    left_of_next || right_of_prev
                }
            }
        }
    }
}

/// A direction strictly between `u - p` and `w - p` going counterclockwise,
/// returned as the target point `p + d`.
fn mid_direction(p: &Point, u: &Point, w: &Point) -> Point {
    let (ux, uy) = u.sub(p);
    let (wx, wy) = w.sub(p);
    match orient(p, u, w) {
        Ordering::Greater => p.offset(&(&ux + &wx), &(&uy + &wy)),
        Ordering::Equal => p.offset(&(-&uy), &ux),
        Ordering::Less => p.offset(&(-(&ux + &wx)), &(-(&uy + &wy))),
    }
}

/// The first edge hit by the ray from `p` through `q`, which must not pass
/// through any polygon vertex.
fn first_hit<'a>(poly: &'a Polygon, p: &Point, q: &Point) -> Option<(&'a Point, &'a Point)> {
    let mut best: Option<((&Point, &Point), Point)> = None;
    for (a, b) in poly.edges() {
        let oa = orient(p, q, a);
        let ob = orient(p, q, b);
        if oa == Ordering::Equal || ob == Ordering::Equal || oa == ob {
            continue;
        }
        let ab = orient(p, a, b);
        if ab == Ordering::Equal || ab != ob {
            continue;
        }
        match &best {
            None => {
                let x = line_intersection(p, q, a, b);
                best = Some(((a, b), x));
            }
            Some((_, x)) => {
                if orient(a, b, x) != orient(a, b, p) {
                    let x = line_intersection(p, q, a, b);
                    best = Some(((a, b), x));
                }
            }
        }
    }
    best.map(|(e, _)| e)
}

fn ray_line_point(p: &Point, u: &Point, a: &Point, b: &Point) -> Point {
    if orient(a, b, u) == Ordering::Equal {
        u.clone()
    } else {
        line_intersection(p, u, a, b)
    }
}

/// Computes the visibility region of `p` in `poly`.
pub fn visibility_region(poly: &Polygon, p: &Point) -> Result<VisRegion, GeometryError> {
    let ctx = context(poly, p)?;
    let mut dirs: Vec<&Point> = poly.vertices().iter().filter(|v| *v != p).collect();
    dirs.sort_by(|a, b| angle_cmp(p, a, b));
    dirs.dedup_by(|a, b| angle_cmp(p, a, b) == Ordering::Equal);
    let m = dirs.len();

    struct Piece {
        valid: bool,
        start: Point,
        end: Point,
    }
    let mut pieces: Vec<Piece> = Vec::with_capacity(m);
    for i in 0..m {
        let u = dirs[i];
        let w = dirs[(i + 1) % m];
        let q = mid_direction(p, u, w);
        if !ctx.admits(&q) {
            pieces.push(Piece {
                valid: false,
                start: u.clone(),
                end: w.clone(),
            });
            continue;
        }
        let (a, b) = first_hit(poly, p, &q).expect("rays into the interior hit the boundary");
        pieces.push(Piece {
            valid: true,
            start: ray_line_point(p, u, a, b),
            end: ray_line_point(p, w, a, b),
        });
    }

    let mut ring: Vec<Point> = Vec::new();
    match ctx {
        Context::Interior => {
            for pc in &pieces {
                ring.push(pc.start.clone());
                ring.push(pc.end.clone());
            }
        }
        _ => {
            let first = (0..m)
                .find(|&i| pieces[i].valid && !pieces[(i + m - 1) % m].valid)
                .expect("a boundary viewpoint sees some interior direction");
            ring.push(p.clone());
            for k in 0..m {
                let pc = &pieces[(first + k) % m];
                if !pc.valid {
                    break;
                }
                ring.push(pc.start.clone());
                ring.push(pc.end.clone());
            }
        }
    }
    simplify_ring(&mut ring);

    let mut keys = HashSet::new();
    for d in &dirs {
        if let Some(k) = dir_key(p, d) {
            keys.insert(k);
        }
    }
    let mut bbox = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for v in &ring {
        let (x, y) = v.approx();
        bbox.0 = bbox.0.min(x);
        bbox.1 = bbox.1.min(y);
        bbox.2 = bbox.2.max(x);
        bbox.3 = bbox.3.max(y);
    }
    Ok(VisRegion {
        viewpoint: p.clone(),
        ring,
        dirs: keys,
        bbox,
    })
}

/// Removes repeated and collinear vertices from a closed ring.
pub(crate) fn simplify_ring(ring: &mut Vec<Point>) {
    loop {
        let before = ring.len();
        ring.dedup();
        while ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        let n = ring.len();
        if n < 3 {
            return;
        }
        let mut keep = vec![true; n];
        let mut i = 0;
        while i < n {
            let prev = (0..n).rev().map(|k| (i + k) % n).find(|&j| j != i && keep[j]);
            let next = (1..n).map(|k| (i + k) % n).find(|&j| keep[j]);
            if let (Some(a), Some(c)) = (prev, next) {
                if a != c && orient(&ring[a], &ring[i], &ring[c]) == Ordering::Equal {
                    keep[i] = false;
                }
            }
            i += 1;
        }
        let mut k = 0;
        ring.retain(|_| {
            let r = keep[k];
            k += 1;
            r
        });
        if ring.len() == before {
            return;
        }
    }
}
