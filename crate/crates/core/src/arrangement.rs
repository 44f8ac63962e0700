//! Overlay of visibility regions inside a polygon.
//!
//! Every segment (polygon edges and region ring edges) is split at all
//! contacts, the pieces are merged into a half-edge structure, and face
//! cover sets are labelled by walking across edges from the unbounded face.
//! Regions are closed, so points on edges and vertices are covered by the
//! union of the regions of the incident faces.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::geometry::{
    angle_cmp, on_segment, orient, ring_area2, ring_contains, round_dyadic, segment_contact,
    Point, Polygon, Rat, SegmentContact, VisRegion,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("region {0} is not contained in the polygon")]
    RegionOutsidePolygon(usize),
    #[error("point {0:?} lies outside the polygon")]
    PointOutside(Box<Point>),
}

/// Index of a face inside the polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceClass {
    Light,
    Shadow,
    Both,
    Neither,
}

impl FaceClass {
    pub fn is_light(self) -> bool {
        matches!(self, FaceClass::Light | FaceClass::Both)
    }

    pub fn is_shadow(self) -> bool {
        matches!(self, FaceClass::Shadow | FaceClass::Both)
    }
}

/// Where a query point lies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feature {
    Face(FaceId),
    Edge { cover: Vec<usize> },
    Vertex { cover: Vec<usize> },
}

impl Feature {
    pub fn cover<'a>(&'a self, arr: &'a Arrangement) -> &'a [usize] {
        match self {
            Feature::Face(f) => arr.face(*f).cover(),
            Feature::Edge { cover } | Feature::Vertex { cover } => cover,
        }
    }
}

/// A bounded open face of the arrangement inside the polygon.
#[derive(Debug, Clone)]
pub struct Face {
    cover: Vec<usize>,
    area: Rat,
    outer: Vec<Point>,
    holes: Vec<Vec<Point>>,
    neighbors: Vec<FaceId>,
    on_boundary: Vec<(Point, Point)>,
    bbox: (f64, f64, f64, f64),
}

impl Face {
    /// Sorted indices of the regions containing the face.
    pub fn cover(&self) -> &[usize] {
        &self.cover
    }

    pub fn area(&self) -> &Rat {
        &self.area
    }

    /// Outer boundary, counterclockwise, starting at the smallest vertex.
    pub fn outer(&self) -> &[Point] {
        &self.outer
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        &self.holes
    }

    /// Faces sharing an edge with this one.
    pub fn neighbors(&self) -> &[FaceId] {
        &self.neighbors
    }

    /// Maximal straight pieces of the face boundary lying on the polygon
    /// boundary.
    pub fn boundary_segments(&self) -> &[(Point, Point)] {
        &self.on_boundary
    }

    fn rings(&self) -> impl Iterator<Item = &[Point]> {
        std::iter::once(self.outer.as_slice()).chain(self.holes.iter().map(|h| h.as_slice()))
    }

    /// Whether `p` lies in the open face.
    pub fn contains_strict(&self, p: &Point) -> bool {
        let (x, y) = p.approx();
        let (x0, y0, x1, y1) = self.bbox;
        if x < x0 || x > x1 || y < y0 || y > y1 {
            return false;
        }
        for r in self.rings() {
            let k = r.len();
            if (0..k).any(|i| on_segment(&r[i], &r[(i + 1) % k], p)) {
                return false;
            }
        }
        ring_contains(&self.outer, p) && !self.holes.iter().any(|h| ring_contains(h, p))
    }

    /// A point strictly inside the face.
    pub fn interior_point(&self) -> Point {
        let r = &self.outer;
        let k = r.len();
        let len2 = |i: usize| {
            let (ax, ay) = r[i].approx();
            let (bx, by) = r[(i + 1) % k].approx();
            (bx - ax).powi(2) + (by - ay).powi(2)
        };
        let mut src = 0;
        for i in 1..k {
            if len2(i) > len2(src) {
                src = i;
            }
        }
        let m = r[src].midpoint(&r[(src + 1) % k]);
        let (dx, dy) = r[(src + 1) % k].sub(&r[src]);
        let (nx, ny) = (-dy, dx);
        let mut best: Option<Rat> = None;
        let mut consider = |t: Rat| {
            if t.is_positive() && best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        };
        let nn = &nx * &nx + &ny * &ny;
        for ring in self.rings() {
            let kk = ring.len();
            for i in 0..kk {
                let (a, b) = (&ring[i], &ring[(i + 1) % kk]);
                let (ex, ey) = b.sub(a);
                let (qx, qy) = a.sub(&m);
                let denom = &nx * &ey - &ny * &ex;
                let qn = &qx * &ny - &qy * &nx;
                if denom.is_zero() {
                    if qn.is_zero() {
                        for v in [a, b] {
                            let (vx, vy) = v.sub(&m);
                            consider((vx * &nx + vy * &ny) / &nn);
                        }
                    }
                    continue;
                }
                let t = (&qx * &ey - &qy * &ex) / &denom;
                let s = qn / &denom;
                if !s.is_negative() && s <= Rat::from_integer(1.into()) {
                    consider(t);
                }
            }
        }
        match best {
            Some(t) => {
                let h = t / Rat::from_integer(2.into());
                m.offset(&(&nx * &h), &(&ny * &h))
            }
            None => m,
        }
    }

    /// Replaces `p` by the dyadic point of smallest denominator `2^k`,
    /// `k <= 16`, obtained by rounding that still lies in the open face.
    pub fn round_point(&self, p: &Point) -> Point {
        for k in 0..=16 {
            let q = Point::new(round_dyadic(p.x(), k), round_dyadic(p.y(), k));
            if self.contains_strict(&q) {
                return q;
            }
        }
        p.clone()
    }

    /// A low-complexity point strictly inside the face.
    pub fn representative(&self) -> Point {
        self.round_point(&self.interior_point())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag {
    Boundary,
    Region(usize),
}

#[derive(Debug, Clone)]
struct Edge {
    lo: usize,
    hi: usize,
    /// Each tag with whether its side (polygon interior or region) is to
    /// the left of `lo -> hi`.
    tags: Vec<(Tag, bool)>,
}

/// The overlay of a list of visibility regions within a polygon.
#[derive(Debug, Clone)]
pub struct Arrangement {
    n_regions: usize,
    verts: Vec<Point>,
    vindex: HashMap<Point, usize>,
    edges: Vec<Edge>,
    /// Public face of each half-edge (`None` outside the polygon).
    hface: Vec<Option<FaceId>>,
    /// Outgoing half-edges per vertex, counterclockwise.
    out: Vec<Vec<usize>>,
    faces: Vec<Face>,
}

struct Segment {
    a: Point,
    b: Point,
    tag: Tag,
}

fn bbox_of(a: &Point, b: &Point) -> (f64, f64, f64, f64) {
    let (ax, ay) = a.approx();
    let (bx, by) = b.approx();
    let pad = 1e-9 * (1.0 + ax.abs().max(ay.abs()).max(bx.abs()).max(by.abs()));
    (ax.min(bx) - pad, ay.min(by) - pad, ax.max(bx) + pad, ay.max(by) + pad)
}

fn ring_bbox(r: &[Point]) -> (f64, f64, f64, f64) {
    let mut b = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in r {
        let (x, y) = p.approx();
        b = (b.0.min(x), b.1.min(y), b.2.max(x), b.3.max(y));
    }
    let pad = 1e-9 * (1.0 + b.0.abs().max(b.1.abs()).max(b.2.abs()).max(b.3.abs()));
    (b.0 - pad, b.1 - pad, b.2 + pad, b.3 + pad)
}

impl Arrangement {
    pub fn overlay<R: Borrow<VisRegion>>(poly: &Polygon, regions: &[R]) -> Result<Arrangement, ArrangementError> {
        let mut segs: Vec<Segment> = poly
            .edges()
            .map(|(a, b)| Segment {
                a: a.clone(),
                b: b.clone(),
                tag: Tag::Boundary,
            })
            .collect();
        for (i, r) in regions.iter().enumerate() {
            let ring = r.borrow().ring();
            let k = ring.len();
            for j in 0..k {
                segs.push(Segment {
                    a: ring[j].clone(),
                    b: ring[(j + 1) % k].clone(),
                    tag: Tag::Region(i),
                });
            }
        }
        let cuts = split_points(&segs);

        let mut verts: Vec<Point> = cuts.iter().flatten().cloned().collect();
        verts.sort();
        verts.dedup();
        let vindex: HashMap<Point, usize> =
            verts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();

        let mut emap: BTreeMap<(usize, usize), Vec<(Tag, bool)>> = BTreeMap::new();
        for (s, c) in segs.iter().zip(&cuts) {
            let forward = s.a < s.b;
            for w in c.windows(2) {
                let (u, v) = (vindex[&w[0]], vindex[&w[1]]);
                emap.entry((u, v)).or_default().push((s.tag, forward));
            }
        }
        let edges: Vec<Edge> = emap
            .into_iter()
            .map(|((lo, hi), tags)| Edge { lo, hi, tags })
            .collect();

        Builder::new(verts, vindex, edges, regions.len()).finish()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id.0]
    }

    pub fn n_regions(&self) -> usize {
        self.n_regions
    }

    pub fn area(&self) -> Rat {
        self.faces.iter().map(|f| f.area.clone()).sum()
    }

    pub fn classify(&self) -> Vec<FaceClass> {
        self.faces
            .iter()
            .map(|f| {
                let mut has_super = false;
                let mut has_sub = false;
                for n in &f.neighbors {
                    let c = &self.faces[n.0].cover;
                    if c.len() > f.cover.len() && is_subset(&f.cover, c) {
                        has_super = true;
                    }
                    if c.len() < f.cover.len() && is_subset(c, &f.cover) {
                        has_sub = true;
                    }
                }
                match (has_super, has_sub) {
                    (false, false) => FaceClass::Both,
                    (false, true) => FaceClass::Light,
                    (true, false) => FaceClass::Shadow,
                    (true, true) => FaceClass::Neither,
                }
            })
            .collect()
    }

    fn edge_cover(&self, e: usize) -> Vec<usize> {
        let mut c: Vec<usize> = [2 * e, 2 * e + 1]
            .iter()
            .filter_map(|&h| self.hface[h])
            .flat_map(|f| self.faces[f.0].cover.iter().copied())
            .collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    fn vertex_cover(&self, v: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.out[v]
            .iter()
            .filter_map(|&h| self.hface[h])
            .flat_map(|f| self.faces[f.0].cover.iter().copied())
            .collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    fn edge_in_polygon(&self, e: usize) -> bool {
        self.hface[2 * e].is_some() || self.hface[2 * e + 1].is_some()
    }

    /// Lower-dimensional features whose cover is strictly larger than that
    /// of every incident higher-dimensional feature: edges between faces
    /// with incomparable covers, and vertices seeing more than any incident
    /// edge. Returned as (point, cover) in edge and vertex order.
    pub fn degenerate_features(&self) -> Vec<(Point, Vec<usize>)> {
        let mut out = Vec::new();
        let mut ecover: Vec<Option<Vec<usize>>> = vec![None; self.edges.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            if !self.edge_in_polygon(e) {
                continue;
            }
            let c = self.edge_cover(e);
            if let (Some(l), Some(r)) = (self.hface[2 * e], self.hface[2 * e + 1]) {
                let (cl, cr) = (&self.faces[l.0].cover, &self.faces[r.0].cover);
                if c.len() > cl.len() && c.len() > cr.len() {
                    out.push((self.verts[edge.lo].midpoint(&self.verts[edge.hi]), c.clone()));
                }
            }
            ecover[e] = Some(c);
        }
        for v in 0..self.verts.len() {
            let c = self.vertex_cover(v);
            if c.is_empty() {
                continue;
            }
            let dominated = self.out[v].iter().any(|&h| match &ecover[h / 2] {
                Some(ec) => ec.len() == c.len(),
                None => false,
            });
            if !dominated {
                out.push((self.verts[v].clone(), c));
            }
        }
        out
    }

    /// Maps each point to the feature containing it.
    pub fn locate_batch(&self, points: &[Point]) -> Result<Vec<Feature>, ArrangementError> {
        points.iter().map(|p| self.locate(p)).collect()
    }

    pub fn locate(&self, p: &Point) -> Result<Feature, ArrangementError> {
        if let Some(&v) = self.vindex.get(p) {
            if self.out[v].iter().any(|&h| self.hface[h].is_some()) {
                return Ok(Feature::Vertex {
                    cover: self.vertex_cover(v),
                });
            }
            return Err(ArrangementError::PointOutside(Box::new(p.clone())));
        }
        let (x, y) = p.approx();
        for (e, edge) in self.edges.iter().enumerate() {
            let (a, b) = (&self.verts[edge.lo], &self.verts[edge.hi]);
            let bb = bbox_of(a, b);
            if x < bb.0 || x > bb.2 || y < bb.1 || y > bb.3 {
                continue;
            }
            if on_segment(a, b, p) {
                if !self.edge_in_polygon(e) {
                    return Err(ArrangementError::PointOutside(Box::new(p.clone())));
                }
                return Ok(Feature::Edge {
                    cover: self.edge_cover(e),
                });
            }
        }
        self.faces
            .iter()
            .position(|f| f.contains_strict(p))
            .map(|i| Feature::Face(FaceId(i)))
            .ok_or_else(|| ArrangementError::PointOutside(Box::new(p.clone())))
    }

    /// Faces not covered by any region.
    pub fn uncovered(&self) -> Vec<FaceId> {
        (0..self.faces.len())
            .filter(|&i| self.faces[i].cover.is_empty())
            .map(FaceId)
            .collect()
    }
}

/// Faces of the overlay of `regions` that no region covers. An empty result
/// means the regions jointly cover the polygon.
pub fn uncovered_region<R: Borrow<VisRegion>>(
    poly: &Polygon,
    regions: &[R],
) -> Result<Vec<Face>, ArrangementError> {
    let arr = Arrangement::overlay(poly, regions)?;
    Ok(arr
        .uncovered()
        .into_iter()
        .map(|f| arr.faces[f.0].clone())
        .collect())
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Sorted, deduplicated cut points along each segment, endpoints included.
fn split_points(segs: &[Segment]) -> Vec<Vec<Point>> {
    let m = segs.len();
    let mut cuts: Vec<Vec<Point>> = segs.iter().map(|s| vec![s.a.clone(), s.b.clone()]).collect();
    let boxes: Vec<_> = segs.iter().map(|s| bbox_of(&s.a, &s.b)).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| boxes[a].0.total_cmp(&boxes[b].0));
    for (oi, &i) in order.iter().enumerate() {
        let bi = boxes[i];
        for &j in &order[oi + 1..] {
            let bj = boxes[j];
            if bj.0 > bi.2 {
                break;
            }
            if bj.1 > bi.3 || bj.3 < bi.1 {
                continue;
            }
            let (si, sj) = (&segs[i], &segs[j]);
            match segment_contact(&si.a, &si.b, &sj.a, &sj.b) {
                SegmentContact::None => {}
                SegmentContact::Point(q) => {
                    if q != si.a && q != si.b {
                        cuts[i].push(q.clone());
                    }
                    if q != sj.a && q != sj.b {
                        cuts[j].push(q);
                    }
                }
                SegmentContact::Overlap(q, r) => {
                    cuts[i].push(q.clone());
                    cuts[i].push(r.clone());
                    cuts[j].push(q);
                    cuts[j].push(r);
                }
            }
        }
    }
    for c in &mut cuts {
        c.sort();
        c.dedup();
    }
    cuts
}

struct Builder {
    n_regions: usize,
    verts: Vec<Point>,
    vindex: HashMap<Point, usize>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    next: Vec<usize>,
}

impl Builder {
    fn new(verts: Vec<Point>, vindex: HashMap<Point, usize>, edges: Vec<Edge>, n_regions: usize) -> Self {
        let mut b = Builder {
            n_regions,
            out: vec![Vec::new(); verts.len()],
            verts,
            vindex,
            next: vec![0; 2 * edges.len()],
            edges,
        };
        for h in 0..2 * b.edges.len() {
            let o = b.origin(h);
            b.out[o].push(h);
        }
        for v in 0..b.verts.len() {
            let mut o = std::mem::take(&mut b.out[v]);
            o.sort_by(|&x, &y| angle_cmp(&b.verts[v], &b.verts[b.dest(x)], &b.verts[b.dest(y)]));
            b.out[v] = o;
        }
        let mut pos = vec![0; 2 * b.edges.len()];
        for o in &b.out {
            for (i, &h) in o.iter().enumerate() {
                pos[h] = i;
            }
        }
        for h in 0..2 * b.edges.len() {
            let d = b.dest(h);
            let o = &b.out[d];
            b.next[h] = o[(pos[h ^ 1] + o.len() - 1) % o.len()];
        }
        b
    }

    fn origin(&self, h: usize) -> usize {
        let e = &self.edges[h / 2];
        if h.is_multiple_of(2) {
            e.lo
        } else {
            e.hi
        }
    }

    fn dest(&self, h: usize) -> usize {
        self.origin(h ^ 1)
    }

    fn finish(self) -> Result<Arrangement, ArrangementError> {
        let nh = 2 * self.edges.len();
        let nv = self.verts.len();

        // Trace boundary cycles.
        let mut cycle_of = vec![usize::MAX; nh];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for h0 in 0..nh {
            if cycle_of[h0] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut c = Vec::new();
            let mut h = h0;
            loop {
                cycle_of[h] = id;
                c.push(h);
                h = self.next[h];
                if h == h0 {
                    break;
                }
            }
            cycles.push(c);
        }
        let ring_of = |c: &[usize]| -> Vec<Point> { c.iter().map(|&h| self.verts[self.origin(h)].clone()).collect() };
        let areas: Vec<Rat> = cycles.iter().map(|c| ring_area2(&ring_of(c))).collect();

        // Connected components of the edge graph.
        let mut comp: Vec<usize> = (0..nv).collect();
        fn find(comp: &mut [usize], mut x: usize) -> usize {
            while comp[x] != x {
                comp[x] = comp[comp[x]];
                x = comp[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut comp, e.lo), find(&mut comp, e.hi));
            if a != b {
                comp[a.max(b)] = a.min(b);
            }
        }
        // Vertices are sorted, so each component root is its smallest vertex.
        let mut comp_min = vec![usize::MAX; nv];
        for v in 0..nv {
            let r = find(&mut comp, v);
            comp_min[r] = comp_min[r].min(v);
        }

        // Internal faces: 0 is unbounded, then one per positive cycle.
        let mut cface: Vec<Option<usize>> = vec![None; cycles.len()];
        let mut n_int = 1;
        for (c, a) in areas.iter().enumerate() {
            if a.is_positive() {
                cface[c] = Some(n_int);
                n_int += 1;
            }
        }
        let root = if nv > 0 { find(&mut comp, 0) } else { 0 };
        for c in 0..cycles.len() {
            if cface[c].is_none() {
                self.resolve_hole(c, &cycles, &cycle_of, &mut cface, &mut comp, &comp_min, root);
            }
        }
        let face_of = |h: usize| cface[cycle_of[h]].expect("every cycle resolved");

        let mut face_hedges: Vec<Vec<usize>> = vec![Vec::new(); n_int];
        for h in 0..nh {
            face_hedges[face_of(h)].push(h);
        }

        // Label cover sets and polygon membership.
        let mut cover: Vec<Option<FixedBitSet>> = vec![None; n_int];
        let mut inside = vec![false; n_int];
        cover[0] = Some(FixedBitSet::with_capacity(self.n_regions));
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &h in &face_hedges[a] {
                let t = h ^ 1;
                let b = face_of(t);
                if cover[b].is_some() {
                    continue;
                }
                let mut cb = cover[a].clone().expect("labelled");
                let mut ib = inside[a];
                let b_left = t % 2 == 0;
                for (tag, left) in &self.edges[h / 2].tags {
                    let member = b_left == *left;
                    match tag {
                        Tag::Boundary => ib = member,
                        Tag::Region(i) => cb.set(*i, member),
                    }
                }
                cover[b] = Some(cb);
                inside[b] = ib;
                queue.push_back(b);
            }
        }
        for f in 0..n_int {
            let c = cover[f].as_ref().expect("faces are connected");
            if !inside[f] {
                if let Some(i) = c.ones().next() {
                    return Err(ArrangementError::RegionOutsidePolygon(i));
                }
            }
        }

        // Public faces in canonical order.
        struct Draft {
            internal: usize,
            outer_cycle: usize,
            start: usize,
        }
        let mut drafts: Vec<Draft> = Vec::new();
        for (c, cyc) in cycles.iter().enumerate() {
            if areas[c].is_positive() {
                let f = cface[c].expect("positive cycle");
                if !inside[f] {
                    continue;
                }
                let start = (0..cyc.len())
                    .min_by(|&i, &j| {
                        let (hi, hj) = (cyc[i], cyc[j]);
                        let (oi, oj) = (self.origin(hi), self.origin(hj));
                        oi.cmp(&oj).then_with(|| self.out_order(oi, hi, hj))
                    })
                    .expect("nonempty cycle");
                drafts.push(Draft {
                    internal: f,
                    outer_cycle: c,
                    start,
                });
            }
        }
        drafts.sort_by(|a, b| {
            let ha = cycles[a.outer_cycle][a.start];
            let hb = cycles[b.outer_cycle][b.start];
            let (oa, ob) = (self.origin(ha), self.origin(hb));
            oa.cmp(&ob).then_with(|| self.out_order(oa, ha, hb))
        });
        let mut public = vec![None; n_int];
        for (i, d) in drafts.iter().enumerate() {
            public[d.internal] = Some(FaceId(i));
        }
        let hface: Vec<Option<FaceId>> = (0..nh).map(|h| public[face_of(h)]).collect();

        let mut hole_cycles: Vec<Vec<usize>> = vec![Vec::new(); n_int];
        for (c, a) in areas.iter().enumerate() {
            if !a.is_positive() {
                if let Some(f) = cface[c] {
                    hole_cycles[f].push(c);
                }
            }
        }
        let two = Rat::from_integer(2.into());
        let mut faces = Vec::with_capacity(drafts.len());
        for d in &drafts {
            let f = d.internal;
            let cyc = &cycles[d.outer_cycle];
            let mut hs = cyc[d.start..].to_vec();
            hs.extend_from_slice(&cyc[..d.start]);
            let outer = ring_of(&hs);
            let mut area = areas[d.outer_cycle].clone();
            let mut holes = Vec::new();
            let mut on_boundary = self.boundary_chains(&hs);
            for &hc in &hole_cycles[f] {
                area += &areas[hc];
                holes.push(ring_of(&cycles[hc]));
                on_boundary.extend(self.boundary_chains(&cycles[hc]));
            }
            let mut neighbors: Vec<FaceId> = face_hedges[f]
                .iter()
                .filter_map(|&h| public[face_of(h ^ 1)])
                .filter(|&n| public[f] != Some(n))
                .collect();
            neighbors.sort();
            neighbors.dedup();
            let c = cover[f].as_ref().expect("labelled");
            faces.push(Face {
                cover: c.ones().collect(),
                area: area / &two,
                bbox: ring_bbox(&outer),
                outer,
                holes,
                neighbors,
                on_boundary,
            });
        }

        Ok(Arrangement {
            n_regions: self.n_regions,
            verts: self.verts,
            vindex: self.vindex,
            edges: self.edges,
            hface,
            out: self.out,
            faces,
        })
    }

    /// Order of two outgoing half-edges at the smallest vertex of a cycle,
    /// lower direction first.
    fn out_order(&self, v: usize, a: usize, b: usize) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        match orient(&self.verts[v], &self.verts[self.dest(a)], &self.verts[self.dest(b)]) {
            Ordering::Greater => Ordering::Less,
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => a.cmp(&b),
        }
    }

    /// Finds the face containing the component bounded by the negative cycle
    /// `c` by shooting a ray to the left from its smallest vertex.
    #[allow(clippy::too_many_arguments)]
    fn resolve_hole(
        &self,
        c: usize,
        cycles: &[Vec<usize>],
        cycle_of: &[usize],
        cface: &mut Vec<Option<usize>>,
        comp: &mut [usize],
        comp_min: &[usize],
        root: usize,
    ) -> usize {
        if let Some(f) = cface[c] {
            return f;
        }
        let v0 = self.origin(cycles[c][0]);
        let mut r = v0;
        while comp[r] != r {
            r = comp[r];
        }
        if r == root {
            cface[c] = Some(0);
            return 0;
        }
        let u = &self.verts[comp_min[r]];
        let mut best: Option<(Rat, Option<usize>, Option<usize>)> = None; // x, edge, vertex
        for (ei, e) in self.edges.iter().enumerate() {
            let (a, b) = (&self.verts[e.lo], &self.verts[e.hi]);
            let (ay, by) = (a.y(), b.y());
            if (ay > u.y() && by > u.y()) || (ay < u.y() && by < u.y()) {
                continue;
            }
            let hit: (Rat, Option<usize>, Option<usize>) = if ay == u.y() && by == u.y() {
                let v = if a.x() > b.x() { e.lo } else { e.hi };
                (self.verts[v].x().clone(), None, Some(v))
            } else if ay == u.y() {
                (a.x().clone(), None, Some(e.lo))
            } else if by == u.y() {
                (b.x().clone(), None, Some(e.hi))
            } else {
                let x = a.x() + (u.y() - ay) * (b.x() - a.x()) / (by - ay);
                (x, Some(ei), None)
            };
            if hit.0 >= *u.x() {
                continue;
            }
            if best.as_ref().is_none_or(|b| hit.0 > b.0) {
                best = Some(hit);
            }
        }
        let (_, edge, vertex) = best.expect("nested components lie inside a bounded face");
        let h = match (edge, vertex) {
            (Some(e), _) => {
                let ed = &self.edges[e];
                if self.verts[ed.lo].y() > self.verts[ed.hi].y() {
                    2 * e
                } else {
                    2 * e + 1
                }
            }
            (None, Some(w)) => *self.out[w].last().expect("vertex has edges"),
            _ => unreachable!(),
        };
        let hc = cycle_of[h];
        let f = match cface[hc] {
            Some(f) => f,
            None => self.resolve_hole(hc, cycles, cycle_of, cface, comp, comp_min, root),
        };
        cface[c] = Some(f);
        f
    }

    fn boundary_chains(&self, hs: &[usize]) -> Vec<(Point, Point)> {
        let k = hs.len();
        let on_b = |h: usize| self.edges[h / 2].tags.iter().any(|(t, _)| *t == Tag::Boundary);
        let cont = |i: usize| {
            let (p, h) = (hs[(i + k - 1) % k], hs[i]);
            on_b(p)
                && on_b(h)
                && orient(
                    &self.verts[self.origin(p)],
                    &self.verts[self.origin(h)],
                    &self.verts[self.dest(h)],
                ) == Ordering::Equal
        };
        let Some(s) = (0..k).find(|&i| !cont(i)) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut i = 0;
        while i < k {
            let h = hs[(s + i) % k];
            if !on_b(h) {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            while j < k && cont((s + j) % k) {
                j += 1;
            }
            let last = hs[(s + j - 1) % k];
            out.push((self.verts[self.origin(h)].clone(), self.verts[self.dest(last)].clone()));
            i = j;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, visibility_region};

    fn pts(c: &[(i64, i64)]) -> Vec<Point> {
        c.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
    }

    fn square() -> Polygon {
        Polygon::new(vec![pts(&[(0, 0), (1, 0), (1, 1), (0, 1)])]).unwrap()
    }

    fn l_shape() -> Polygon {
        Polygon::new(vec![pts(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])]).unwrap()
    }

    fn vis(p: &Polygon, x: Rat, y: Rat) -> VisRegion {
        visibility_region(p, &Point::new(x, y)).unwrap()
    }

    #[test]
    fn no_regions_gives_polygon() {
        let p = l_shape();
        let a = Arrangement::overlay::<VisRegion>(&p, &[]).unwrap();
        assert_eq!(a.faces().len(), 1);
        assert!(a.faces()[0].cover().is_empty());
        assert_eq!(a.area(), rat(3, 1));
        assert_eq!(a.classify(), vec![FaceClass::Both]);
    }

    #[test]
    fn region_equal_to_polygon() {
        let p = square();
        let r = vis(&p, rat(1, 2), rat(1, 2));
        let a = Arrangement::overlay(&p, &[r]).unwrap();
        assert_eq!(a.faces().len(), 1);
        assert_eq!(a.faces()[0].cover(), &[0]);
    }

    #[test]
    fn two_corners_of_square() {
        let p = square();
        let r = [vis(&p, rat(0, 1), rat(0, 1)), vis(&p, rat(1, 1), rat(1, 1))];
        let a = Arrangement::overlay(&p, &r).unwrap();
        assert_eq!(a.faces().len(), 1);
        assert_eq!(a.faces()[0].cover(), &[0, 1]);
        assert_eq!(a.classify(), vec![FaceClass::Both]);
    }

    #[test]
    fn l_shape_with_shadow() {
        let p = l_shape();
        let a = Arrangement::overlay(&p, &[vis(&p, rat(2, 1), rat(0, 1))]).unwrap();
        assert_eq!(a.faces().len(), 2);
        let lit = a.faces().iter().position(|f| f.cover() == [0]).unwrap();
        let dark = 1 - lit;
        assert!(a.faces()[dark].cover().is_empty());
        assert_eq!(a.faces()[dark].area(), &rat(1, 2));
        assert_eq!(a.faces()[lit].area(), &rat(5, 2));
        let cls = a.classify();
        assert_eq!(cls[lit], FaceClass::Light);
        assert_eq!(cls[dark], FaceClass::Shadow);

        let f = &a.faces()[dark];
        let mut bs: Vec<Point> = f.boundary_segments().iter().map(|(u, v)| u.midpoint(v)).collect();
        bs.sort();
        assert_eq!(
            bs,
            vec![Point::new(rat(1, 2), rat(2, 1)), Point::new(rat(1, 1), rat(3, 2))]
        );
        let q = f.representative();
        assert!(f.contains_strict(&q));
    }

    #[test]
    fn locate_points() {
        let p = l_shape();
        let a = Arrangement::overlay(&p, &[vis(&p, rat(2, 1), rat(0, 1))]).unwrap();
        let got = a
            .locate_batch(&[
                Point::new(rat(1, 4), rat(15, 8)),
                Point::new(rat(1, 2), rat(3, 2)),
                Point::from_ints(1, 1),
            ])
            .unwrap();
        match &got[0] {
            Feature::Face(f) => assert!(a.face(*f).cover().is_empty()),
            other => panic!("expected a face, got {other:?}"),
        }
        assert_eq!(got[1], Feature::Edge { cover: vec![0] });
        assert_eq!(got[2], Feature::Vertex { cover: vec![0] });
        assert!(a.locate(&Point::from_ints(3, 3)).is_err());
    }

    #[test]
    fn uncovered_faces() {
        let p = l_shape();
        assert!(uncovered_region(&p, &[vis(&p, rat(0, 1), rat(0, 1))]).unwrap().is_empty());
        let u = uncovered_region(&p, &[vis(&p, rat(2, 1), rat(0, 1))]).unwrap();
        assert_eq!(u.len(), 1);
        assert_eq!(u[0].outer(), &pts(&[(0, 2), (1, 1), (1, 2)])[..]);
        assert_eq!(uncovered_region::<VisRegion>(&p, &[]).unwrap().len(), 1);
    }

    #[test]
    fn polygon_with_hole() {
        let p = Polygon::new(vec![
            pts(&[(0, 0), (3, 0), (3, 3), (0, 3)]),
            pts(&[(1, 1), (2, 1), (2, 2), (1, 2)]),
        ])
        .unwrap();
        let a = Arrangement::overlay::<VisRegion>(&p, &[]).unwrap();
        assert_eq!(a.faces().len(), 1);
        assert_eq!(a.faces()[0].holes().len(), 1);
        assert_eq!(a.area(), rat(8, 1));
        assert!(!a.faces()[0].contains_strict(&Point::new(rat(3, 2), rat(3, 2))));

        let r = [vis(&p, rat(1, 2), rat(1, 2)), vis(&p, rat(5, 2), rat(5, 2))];
        let a = Arrangement::overlay(&p, &r).unwrap();
        assert_eq!(a.area(), rat(8, 1));
        for f in a.faces() {
            assert!(f.contains_strict(&f.representative()));
            assert!(!f.cover().is_empty());
        }
        let cls = a.classify();
        for (i, f) in a.faces().iter().enumerate() {
            for n in f.neighbors() {
                let c = a.face(*n).cover();
                assert!(is_subset(c, f.cover()) || is_subset(f.cover(), c));
            }
            if f.cover().len() == 2 {
                assert_eq!(cls[i], FaceClass::Light);
            }
        }
    }

    #[test]
    fn round_point_prefers_small_denominators() {
        let p = square();
        let a = Arrangement::overlay::<VisRegion>(&p, &[]).unwrap();
        let f = &a.faces()[0];
        let q = f.round_point(&Point::new(rat(1, 3), rat(1, 3)));
        assert_eq!(q, Point::new(rat(1, 2), rat(1, 2)));
        let q = f.round_point(&Point::new(rat(3, 8), rat(1, 8)));
        assert!(f.contains_strict(&q));
    }

    #[test]
    fn round_point_keeps_input_on_slivers() {
        let h = rat(1, 1 << 20);
        let tri = vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::new(rat(1, 1), h.clone())];
        let p = Polygon::new(vec![tri]).unwrap();
        let a = Arrangement::overlay::<VisRegion>(&p, &[]).unwrap();
        let f = &a.faces()[0];
        let inside = Point::new(rat(2, 3), h / rat(3, 1));
        assert_eq!(f.round_point(&inside), inside);
        assert!(f.contains_strict(&f.representative()));
    }
}
