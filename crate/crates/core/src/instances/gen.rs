//! Seeded instance generators. All randomness comes from a ChaCha8 stream
//! seeded with the given `u64`, so outputs are reproducible across
//! platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::InstanceError;
use crate::geometry::{int, rat, Point, Polygon, Rat};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ipts(ring: &[(i64, i64)]) -> Vec<Point> {
    ring.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
}

/// Comb with `k` teeth and `3k` vertices; the tooth tips see pairwise
/// disjoint regions, so `k` guards are needed and `k` suffice.
pub fn gen_comb(k: usize) -> Polygon {
    assert!(k >= 1, "a comb needs at least one tooth");
    let k = k as i64;
    let mut ring = vec![(0, 0), (4 * k, 0), (4 * k - 2, 10)];
    for i in (0..k - 1).rev() {
        ring.push((4 * i + 5, 2));
        ring.push((4 * i + 3, 2));
        ring.push((4 * i + 2, 10));
    }
    Polygon::new(vec![ipts(&ring)]).expect("comb is a valid polygon")
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn proper_cross(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> bool {
    let d1 = cross(a, b, c).signum();
    let d2 = cross(a, b, d).signum();
    let d3 = cross(c, d, a).signum();
    let d4 = cross(c, d, b).signum();
    d1 * d2 < 0 && d3 * d4 < 0
}

/// Random simple polygon on `n` integer points in general position,
/// untangled by 2-opt moves.
pub fn gen_simple(n: usize, seed: u64) -> Result<Polygon, InstanceError> {
    if n < 3 {
        return Err(InstanceError::GenerationFailed("need at least 3 vertices".into()));
    }
    let mut r = rng(seed);
    let side = 10 * n as i64;
    let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
    let mut tries = 0;
    while pts.len() < n {
        tries += 1;
        if tries > 100 * n {
            return Err(InstanceError::GenerationFailed("could not place points".into()));
        }
        let p = (r.gen_range(0..side), r.gen_range(0..side));
        let ok = pts.iter().enumerate().all(|(i, &a)| {
            a != p && pts[i + 1..].iter().all(|&b| cross(a, b, p) != 0)
        });
        if ok {
            pts.push(p);
        }
    }
    pts.shuffle(&mut r);
    // Each 2-opt move strictly shortens the tour, so this terminates.
    loop {
        let mut moved = false;
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (pts[i], pts[i + 1]);
                let (c, d) = (pts[j], pts[(j + 1) % n]);
                if proper_cross(a, b, c, d) {
                    pts[i + 1..=j].reverse();
                    moved = true;
                }
            }
        }
        if !moved {
            break;
        }
    }
    Ok(Polygon::new(vec![ipts(&pts)])?)
}

fn unit(a: (i64, i64), b: (i64, i64)) -> ((i64, i64), i64) {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len = dx.abs() + dy.abs();
    ((dx.signum(), dy.signum()), len)
}

fn valid_ring(ring: &[(i64, i64)]) -> Option<Polygon> {
    Polygon::new(vec![ipts(ring)]).ok()
}

/// Random orthogonal polygon with `n` vertices, grown from a square by
/// corner cuts (+2 vertices) and edge notches (+4).
pub fn gen_ortho(n: usize, seed: u64) -> Result<Polygon, InstanceError> {
    if n < 4 || n % 2 == 1 {
        return Err(InstanceError::GenerationFailed("orthogonal polygons need an even n >= 4".into()));
    }
    let mut r = rng(seed);
    let side = 8 * n as i64;
    let mut ring = vec![(0, 0), (side, 0), (side, side), (0, side)];
    let mut fails = 0;
    while ring.len() < n {
        if fails > 10_000 {
            return Err(InstanceError::GenerationFailed("no valid modification found".into()));
        }
        let m = ring.len();
        let i = r.gen_range(0..m);
        let notch = n - m >= 4 && r.gen_bool(0.5);
        let cand = if notch {
            let (a, b) = (ring[i], ring[(i + 1) % m]);
            let (e, len) = unit(a, b);
            if len < 3 {
                fails += 1;
                continue;
            }
            let s = r.gen_range(1..len - 1);
            let t = r.gen_range(s + 1..len);
            let sign = if r.gen_bool(0.5) { 1 } else { -1 };
            let nrm = (-e.1 * sign, e.0 * sign);
            let d = r.gen_range(1..=side / 4);
            let p1 = (a.0 + s * e.0, a.1 + s * e.1);
            let p4 = (a.0 + t * e.0, a.1 + t * e.1);
            let p2 = (p1.0 + d * nrm.0, p1.1 + d * nrm.1);
            let p3 = (p4.0 + d * nrm.0, p4.1 + d * nrm.1);
            let mut c = ring[..=i].to_vec();
            c.extend([p1, p2, p3, p4]);
            c.extend_from_slice(&ring[i + 1..]);
            c
        } else {
            let v = ring[i];
            let (up, lp) = unit(v, ring[(i + m - 1) % m]);
            let (uq, lq) = unit(v, ring[(i + 1) % m]);
            if lp < 2 || lq < 2 {
                fails += 1;
                continue;
            }
            let d1 = r.gen_range(1..lp);
            let d2 = r.gen_range(1..lq);
            let a = (v.0 + d1 * up.0, v.1 + d1 * up.1);
            let c = (a.0 + d2 * uq.0, a.1 + d2 * uq.1);
            let b = (v.0 + d2 * uq.0, v.1 + d2 * uq.1);
            let mut out = ring[..i].to_vec();
            out.extend([a, c, b]);
            out.extend_from_slice(&ring[i + 1..]);
            out
        };
        if valid_ring(&cand).is_some() {
            ring = cand;
        } else {
            fails += 1;
        }
    }
    Ok(Polygon::new(vec![ipts(&ring)])?)
}

/// Square with `level` rounds of square-bump Koch replacement; each edge
/// is replaced with probability 1/2 and at least once per round.
pub fn gen_vonkoch(level: usize, seed: u64) -> Result<Polygon, InstanceError> {
    if level == 0 || level > 6 {
        return Err(InstanceError::GenerationFailed("level must be in 1..=6".into()));
    }
    let mut r = rng(seed);
    let side = 3i64.pow(level as u32);
    let mut ring = vec![(0, 0), (side, 0), (side, side), (0, side)];
    let bump = |ring: &[(i64, i64)], i: usize| -> Option<Vec<(i64, i64)>> {
        let m = ring.len();
        let (a, b) = (ring[i], ring[(i + 1) % m]);
        let (e, len) = unit(a, b);
        if len < 3 || len % 3 != 0 {
            return None;
        }
        let t = len / 3;
        let out = (e.1, -e.0);
        let p1 = (a.0 + t * e.0, a.1 + t * e.1);
        let p4 = (a.0 + 2 * t * e.0, a.1 + 2 * t * e.1);
        let p2 = (p1.0 + t * out.0, p1.1 + t * out.1);
        let p3 = (p4.0 + t * out.0, p4.1 + t * out.1);
        let mut c = ring[..=i].to_vec();
        c.extend([p1, p2, p3, p4]);
        c.extend_from_slice(&ring[i + 1..]);
        valid_ring(&c).map(|_| c)
    };
    for _ in 0..level {
        let original = ring.len();
        let picks: Vec<bool> = (0..original).map(|_| r.gen_bool(0.5)).collect();
        let mut done = 0;
        // Walk backwards so earlier indices stay valid after insertion.
        for i in (0..original).rev() {
            if picks[i] {
                if let Some(c) = bump(&ring, i) {
                    ring = c;
                    done += 1;
                }
            }
        }
        if done == 0 {
            let forced = (0..ring.len()).find_map(|i| bump(&ring, i));
            match forced {
                Some(c) => ring = c,
                None => return Err(InstanceError::GenerationFailed("no edge can be replaced".into())),
            }
        }
    }
    Ok(Polygon::new(vec![ipts(&ring)])?)
}

/// Places scaled copies of the outer rings of `holes` inside `main` by
/// rejection sampling. Each copy is scaled to between 1/20 and 1/5 of the
/// width of `main`.
pub fn gen_with_holes(main: &Polygon, holes: &[Polygon], seed: u64) -> Result<Polygon, InstanceError> {
    let mut r = rng(seed);
    let (x0, y0, x1, y1) = main.bbox();
    let (w, h) = (&x1 - &x0, &y1 - &y0);
    let mut rings: Vec<Vec<Point>> = main.rings().to_vec();
    for (hi, hole) in holes.iter().enumerate() {
        let (hx0, hy0, hx1, hy1) = hole.bbox();
        let hw = &hx1 - &hx0;
        let hh = &hy1 - &hy0;
        let mut placed = false;
        for _ in 0..1000 {
            let f = rat(r.gen_range(5..=20), 100);
            let scale = &f * &w / &hw;
            let (sw, sh) = (&hw * &scale, &hh * &scale);
            if sw >= w || sh >= h {
                continue;
            }
            let tx = &x0 + (&w - &sw) * rat(r.gen_range(1..1000), 1000);
            let ty = &y0 + (&h - &sh) * rat(r.gen_range(1..1000), 1000);
            let ring: Vec<Point> = hole
                .outer()
                .iter()
                .map(|p| Point::new((p.x() - &hx0) * &scale + &tx, (p.y() - &hy0) * &scale + &ty))
                .collect();
            let mut cand = rings.clone();
            cand.push(ring);
            if Polygon::new(cand.clone()).is_ok() {
                rings = cand;
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(InstanceError::GenerationFailed(format!("could not place hole {hi}")));
        }
    }
    Ok(Polygon::new(rings)?)
}

/// Corridor walls `c + t d + s n / 2` for `s = -1, +1`, cut by the line
/// `y = wall_y` and ending at `t = len`. Returned in traversal order:
/// mouth and far end of the `s = -1` wall, then far end and mouth of the
/// `s = +1` wall.
fn corridor(c: &Point, d: (Rat, Rat), n: (Rat, Rat), wall_y: &Rat, len: &Rat) -> [Point; 4] {
    let at = |t: &Rat, s: i64| {
        let h = rat(s, 2);
        Point::new(c.x() + t * &d.0 + &h * &n.0, c.y() + t * &d.1 + &h * &n.1)
    };
    let mouth = |s: i64| {
        let h = rat(s, 2);
        let t = (wall_y - c.y() - &h * &n.1) / &d.1;
        at(&t, s)
    };
    [mouth(-1), at(len, -1), at(len, 1), mouth(1)]
}

/// A hall with `k` units of three narrow corridors each. The corridor axes
/// of a unit meet at one hall point, which sees the whole unit, while no
/// polygon vertex sees more than part of it.
pub fn gen_spike(k: usize, seed: u64) -> Result<Polygon, InstanceError> {
    if k == 0 {
        return Err(InstanceError::GenerationFailed("need at least one unit".into()));
    }
    let mut r = rng(seed);
    let spacing = 60i64;
    let right = spacing * (k as i64 - 1) + 10;
    let (bottom, top) = (int(-5), int(5));
    let lens: Vec<[i64; 3]> = (0..k)
        .map(|_| [r.gen_range(20..=30), r.gen_range(20..=30), r.gen_range(20..=30)])
        .collect();
    let mut ring = vec![Point::from_ints(-10, -5)];
    for (j, l) in lens.iter().enumerate() {
        let c = Point::from_ints(spacing * j as i64, 0);
        let dl = corridor(&c, (rat(-4, 5), rat(-3, 5)), (rat(3, 5), rat(-4, 5)), &bottom, &int(l[0]));
        let dr = corridor(&c, (rat(4, 5), rat(-3, 5)), (rat(3, 5), rat(4, 5)), &bottom, &int(l[1]));
        ring.extend(dl);
        ring.extend(dr);
    }
    ring.push(Point::from_ints(right, -5));
    ring.push(Point::from_ints(right, 5));
    for (j, l) in lens.iter().enumerate().rev() {
        let c = Point::from_ints(spacing * j as i64, 0);
        let up = corridor(&c, (int(0), int(1)), (int(-1), int(0)), &top, &int(l[2] + 5));
        ring.extend(up);
    }
    ring.push(Point::from_ints(-10, 5));
    Ok(Polygon::new(vec![ring])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::visibility_region;

    #[test]
    fn comb_sizes() {
        assert_eq!(gen_comb(1).n(), 3);
        assert_eq!(gen_comb(3).n(), 9);
        assert_eq!(gen_comb(5).n(), 15);
    }

    #[test]
    fn comb_tips_see_disjoint_areas() {
        let p = gen_comb(4);
        let tips: Vec<Point> = p.vertices().iter().filter(|v| *v.y() == int(10)).cloned().collect();
        assert_eq!(tips.len(), 4);
        for (i, a) in tips.iter().enumerate() {
            let va = visibility_region(&p, a).unwrap();
            for b in &tips[i + 1..] {
                assert!(!va.contains(&p, b));
                let vb = visibility_region(&p, b).unwrap();
                assert!(!va.ring().iter().any(|q| vb.contains(&p, q)));
            }
        }
    }

    #[test]
    fn simple_is_deterministic() {
        let a = gen_simple(20, 7).unwrap();
        assert_eq!(a.n(), 20);
        assert_eq!(a, gen_simple(20, 7).unwrap());
        assert_ne!(a, gen_simple(20, 8).unwrap());
    }

    #[test]
    fn ortho_is_axis_parallel() {
        for seed in 0..5 {
            let p = gen_ortho(16, seed).unwrap();
            assert_eq!(p.n(), 16);
            assert!(p.edges().all(|(a, b)| a.x() == b.x() || a.y() == b.y()));
        }
        assert_eq!(gen_ortho(8, 3).unwrap(), gen_ortho(8, 3).unwrap());
    }

    #[test]
    fn vonkoch_grows() {
        let a = gen_vonkoch(1, 1).unwrap();
        let b = gen_vonkoch(2, 1).unwrap();
        assert!(b.n() > a.n());
        assert_eq!(b, gen_vonkoch(2, 1).unwrap());
    }

    #[test]
    fn holes_are_placed_inside() {
        let sq = |s: i64| Polygon::new(vec![ipts(&[(0, 0), (s, 0), (s, s), (0, s)])]).unwrap();
        let p = gen_with_holes(&sq(3), &[sq(1)], 5).unwrap();
        assert_eq!(p.holes().len(), 1);
        assert!(p.area() < int(9));
        assert_eq!(p, gen_with_holes(&sq(3), &[sq(1)], 5).unwrap());
    }

    #[test]
    fn spike_centre_sees_everything() {
        let p = gen_spike(2, 3).unwrap();
        assert_eq!(p.n(), 4 + 2 * 12);
        for c in [Point::from_ints(0, 0), Point::from_ints(60, 0)] {
            let v = visibility_region(&p, &c).unwrap();
            let near = |q: &Point| {
                let dx = q.x() - c.x();
                dx < int(30) && dx > int(-30)
            };
            let far: Vec<&Point> = p
                .vertices()
                .iter()
                .filter(|q| near(q) && (q.y() > &int(5) || q.y() < &int(-5)))
                .collect();
            assert_eq!(far.len(), 6);
            assert!(far.iter().all(|q| v.contains(&p, q)));
        }
    }
}
