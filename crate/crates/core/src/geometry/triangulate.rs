//! Ear-clipping triangulation. Holes are first joined to the outer ring by
//! bridges, giving a single weakly simple ring.

use std::cmp::Ordering;

use super::point::{on_segment, orient, segment_contact, Point, Rat, SegmentContact};
use super::polygon::{Location, Polygon};
use super::GeometryError;

/// One clipping step: `v` was removed between its ring neighbours `a` and `c`.
/// `triangle` is false when `v` was dropped as a collinear middle vertex.
pub(crate) struct Clip {
    pub a: usize,
    pub v: usize,
    pub c: usize,
    pub triangle: bool,
}

/// Clips ears from a counterclockwise ring until three vertices remain.
/// Returns the clip sequence and the final three indices.
pub(crate) fn clip_ears(ring: &[Point]) -> Result<(Vec<Clip>, [usize; 3]), GeometryError> {
    let n = ring.len();
    if n < 3 {
        return Err(GeometryError::TriangulationFailed);
    }
    let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut clips = Vec::with_capacity(n);
    let mut cur = 0;
    let mut since_clip = 0;
    while remaining > 3 {
        if since_clip > remaining {
            return Err(GeometryError::TriangulationFailed);
        }
        let (a, c) = (prev[cur], next[cur]);
        let turn = orient(&ring[a], &ring[cur], &ring[c]);
        let drop = turn == Ordering::Equal
            && on_segment(&ring[a], &ring[c], &ring[cur])
            && ring[a] != ring[c];
        let ear = drop || (turn == Ordering::Greater && is_clean(ring, &alive, a, cur, c));
        if ear {
            clips.push(Clip {
                a,
                v: cur,
                c,
                triangle: !drop,
            });
            alive[cur] = false;
            next[a] = c;
            prev[c] = a;
            remaining -= 1;
            since_clip = 0;
            cur = a;
        } else {
            since_clip += 1;
            cur = c;
        }
    }
    let a = cur;
    let b = next[a];
    let c = next[b];
    Ok((clips, [a, b, c]))
}

fn is_clean(ring: &[Point], alive: &[bool], a: usize, b: usize, c: usize) -> bool {
    let (pa, pb, pc) = (&ring[a], &ring[b], &ring[c]);
    ring.iter().enumerate().all(|(i, q)| {
        if !alive[i] || q == pa || q == pb || q == pc {
            return true;
        }
        !(orient(pa, pb, q) != Ordering::Less
            && orient(pb, pc, q) != Ordering::Less
            && orient(pc, pa, q) != Ordering::Less)
    })
}

fn in_wedge(prev: &Point, v: &Point, next: &Point, q: &Point) -> bool {
    let left_of_next = orient(v, next, q) == Ordering::Greater;
    let right_of_prev = orient(v, prev, q) == Ordering::Less;
    if orient(prev, v, next) == Ordering::Greater {
        left_of_next && right_of_prev
    } else {
        left_of_next || right_of_prev
    }
}

fn dist2(a: &Point, b: &Point) -> Rat {
    let (dx, dy) = a.sub(b);
    &dx * &dx + &dy * &dy
}

fn bridge_ok(poly: &Polygon, merged: &[Point], pending: &[Vec<Point>], h: &Point, m: &Point) -> bool {
    let rings = std::iter::once(merged).chain(pending.iter().map(|r| r.as_slice()));
    // `pending` starts with the hole being bridged.
    for r in rings {
        let k = r.len();
        for i in 0..k {
            let (a, b) = (&r[i], &r[(i + 1) % k]);
            match segment_contact(h, m, a, b) {
                SegmentContact::None => {}
                SegmentContact::Point(x) => {
                    if x != *h && x != *m {
                        return false;
                    }
                }
                SegmentContact::Overlap(_, _) => return false,
            }
        }
    }
    poly.locate(&h.midpoint(m)) == Location::Interior
}

/// Joins every hole to the outer ring, returning one counterclockwise ring in
/// which each bridge appears twice.
pub(crate) fn bridged_ring(poly: &Polygon) -> Result<Vec<Point>, GeometryError> {
    let mut merged: Vec<Point> = poly.outer().to_vec();
    let mut holes: Vec<Vec<Point>> = poly.holes().to_vec();
    holes.sort_by(|a, b| a.iter().min().cmp(&b.iter().min()));
    for hi in 0..holes.len() {
        let hole = &holes[hi];
        let (start, h) = hole
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .expect("holes are non-empty");
        let pending = &holes[hi..];
        let k = merged.len();
        let mut best: Option<(usize, Rat)> = None;
        for i in 0..k {
            let m = &merged[i];
            let (p, nx) = (&merged[(i + k - 1) % k], &merged[(i + 1) % k]);
            if !in_wedge(p, m, nx, h) {
                continue;
            }
            let d = dist2(h, m);
            if best.as_ref().is_some_and(|(_, bd)| *bd <= d) {
                continue;
            }
            if bridge_ok(poly, &merged, pending, h, m) {
                best = Some((i, d));
            }
        }
        let (i, _) = best.ok_or(GeometryError::TriangulationFailed)?;
        let mut spliced = Vec::with_capacity(k + hole.len() + 2);
        spliced.extend_from_slice(&merged[..=i]);
        let len = hole.len();
        spliced.extend((0..=len).map(|j| hole[(start + j) % len].clone()));
        spliced.push(merged[i].clone());
        spliced.extend_from_slice(&merged[i + 1..]);
        merged = spliced;
    }
    Ok(merged)
}

/// Triangulates the polygon; each triangle is counterclockwise.
pub fn triangulate(poly: &Polygon) -> Result<Vec<[Point; 3]>, GeometryError> {
    let ring = bridged_ring(poly)?;
    let (clips, last) = clip_ears(&ring)?;
    let mut out: Vec<[Point; 3]> = clips
        .iter()
        .filter(|c| c.triangle)
        .map(|c| [ring[c.a].clone(), ring[c.v].clone(), ring[c.c].clone()])
        .collect();
    out.push(last.map(|i| ring[i].clone()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point::rat;
    use crate::geometry::polygon::ring_area2;

    fn pts(c: &[(i64, i64)]) -> Vec<Point> {
        c.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
    }

    fn total_area(tris: &[[Point; 3]]) -> Rat {
        tris.iter().map(|t| ring_area2(t)).sum::<Rat>() / rat(2, 1)
    }

    #[test]
    fn square_gives_two_triangles() {
        let p = Polygon::new(vec![pts(&[(0, 0), (1, 0), (1, 1), (0, 1)])]).unwrap();
        let t = triangulate(&p).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(total_area(&t), rat(1, 1));
    }

    #[test]
    fn l_shape_gives_four_triangles() {
        let p = Polygon::new(vec![pts(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])])
            .unwrap();
        let t = triangulate(&p).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(total_area(&t), rat(3, 1));
        for tri in &t {
            assert_eq!(orient(&tri[0], &tri[1], &tri[2]), Ordering::Greater);
        }
    }

    #[test]
    fn square_with_holes() {
        let p = Polygon::new(vec![
            pts(&[(0, 0), (6, 0), (6, 6), (0, 6)]),
            pts(&[(1, 1), (2, 1), (2, 2), (1, 2)]),
            pts(&[(4, 4), (5, 4), (5, 5), (4, 5)]),
        ])
        .unwrap();
        let t = triangulate(&p).unwrap();
        // n + 2h - 2 triangles
        assert_eq!(t.len(), 12 + 4 - 2);
        assert_eq!(total_area(&t), rat(34, 1));
        for tri in &t {
            assert_eq!(orient(&tri[0], &tri[1], &tri[2]), Ordering::Greater);
            let c = Point::new(
                (tri[0].x() + tri[1].x() + tri[2].x()) / rat(3, 1),
                (tri[0].y() + tri[1].y() + tri[2].y()) / rat(3, 1),
            );
            assert_eq!(p.locate(&c), Location::Interior);
        }
    }

    #[test]
    fn bridge_does_not_cross_its_hole() {
        // The nearest outer corner to the hole's lowest vertex lies behind
        // the hole.
        let p = Polygon::new(vec![
            pts(&[(0, 0), (10, 0), (10, 10), (0, 10)]),
            pts(&[(6, 5), (9, 9), (9, 1)]),
        ])
        .unwrap();
        let t = triangulate(&p).unwrap();
        assert_eq!(t.len(), 4 + 3);
        assert_eq!(total_area(&t), rat(88, 1));
    }
}
