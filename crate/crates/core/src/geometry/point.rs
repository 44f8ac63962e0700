//! Exact rational points and the orientation predicates everything else is
//! built on.
//!
//! Coordinates are [`Rat`] values. Every point also carries an `f64`
//! approximation that feeds a static filter in [`orient`]; the exact path is
//! taken whenever the filter cannot certify the sign.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar, always stored in reduced form with a positive
/// denominator.
pub type Rat = BigRational;

/// Builds a rational from a small integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub(crate) fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::MIN
        } else {
            f64::MAX
        }
    })
}

/// Formats a rational as `num` or `num/den`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A point in the plane with exact rational coordinates.
///
/// Equality, hashing and ordering use the exact coordinates only; ordering is
/// lexicographic by `(x, y)`.
#[derive(Clone)]
pub struct Point {
    x: Rat,
    y: Rat,
    fx: f64,
    fy: f64,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        let fx = to_f64(&x);
        let fy = to_f64(&y);
        Point { x, y, fx, fy }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y(&self) -> &Rat {
        &self.y
    }

    /// Approximate coordinates, for filters, bounding boxes and rendering.
    pub fn approx(&self) -> (f64, f64) {
        (self.fx, self.fy)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = rat(1, 2);
        Point::new(
            (&self.x + &other.x) * &half,
            (&self.y + &other.y) * &half,
        )
    }

    /// `self + t * (other - self)`.
    pub fn lerp(&self, other: &Point, t: &Rat) -> Point {
        Point::new(
            &self.x + (&other.x - &self.x) * t,
            &self.y + (&other.y - &self.y) * t,
        )
    }

    pub fn offset(&self, dx: &Rat, dy: &Rat) -> Point {
        Point::new(&self.x + dx, &self.y + dy)
    }

    pub fn sub(&self, other: &Point) -> (Rat, Rat) {
        (&self.x - &other.x, &self.y - &other.y)
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

/// Sign of the turn `a -> b -> c`: `Greater` for a left (counterclockwise)
/// turn, `Less` for a right turn, `Equal` when collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let (bx, by) = (b.fx - a.fx, b.fy - a.fy);
    let (cx, cy) = (c.fx - a.fx, c.fy - a.fy);
    let det = bx * cy - by * cx;
    let m = a
        .fx
        .abs()
        .max(a.fy.abs())
        .max(b.fx.abs())
        .max(b.fy.abs())
        .max(c.fx.abs())
        .max(c.fy.abs());
    let bound = 1e-10 * m * m;
    if det.is_finite() && bound.is_finite() {
        if det > bound {
            return Ordering::Greater;
        }
        if det < -bound {
            return Ordering::Less;
        }
    }
    orient_exact(a, b, c)
}

pub fn orient_exact(a: &Point, b: &Point, c: &Point) -> Ordering {
    let lhs = (&b.x - &a.x) * (&c.y - &a.y);
    let rhs = (&b.y - &a.y) * (&c.x - &a.x);
    lhs.cmp(&rhs)
}

/// Twice the signed area of triangle `abc`.
pub fn cross3(a: &Point, b: &Point, c: &Point) -> Rat {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// Whether `p` lies on the closed segment `ab`.
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    if !in_box(a, b, p) {
        return false;
    }
    orient(a, b, p) == Ordering::Equal
}

/// Whether `p` lies on segment `ab` but is neither endpoint.
pub fn strictly_on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    p != a && p != b && on_segment(a, b, p)
}

fn in_box(a: &Point, b: &Point, p: &Point) -> bool {
    // Approximate rejection first; the margin keeps it conservative.
    let eps = 1e-9 * (1.0 + a.fx.abs() + b.fx.abs() + a.fy.abs() + b.fy.abs());
    if p.fx < a.fx.min(b.fx) - eps
        || p.fx > a.fx.max(b.fx) + eps
        || p.fy < a.fy.min(b.fy) - eps
        || p.fy > a.fy.max(b.fy) + eps
    {
        return false;
    }
    let (lox, hix) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (loy, hiy) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    &p.x >= lox && &p.x <= hix && &p.y >= loy && &p.y <= hiy
}

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentContact {
    None,
    /// A single common point.
    Point(Point),
    /// A collinear overlap of positive length, given by its endpoints.
    Overlap(Point, Point),
}

/// Exact intersection of segments `ab` and `cd`.
pub fn segment_contact(a: &Point, b: &Point, c: &Point, d: &Point) -> SegmentContact {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    if o1 == o2 && o1 != Ordering::Equal {
        return SegmentContact::None;
    }
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o3 == o4 && o3 != Ordering::Equal {
        return SegmentContact::None;
    }
    if o1 == Ordering::Equal && o2 == Ordering::Equal {
        // Collinear: the overlap is the middle two of the four sorted points.
        let (s1, e1) = if a <= b { (a, b) } else { (b, a) };
        let (s2, e2) = if c <= d { (c, d) } else { (d, c) };
        let lo = if s1 >= s2 { s1 } else { s2 };
        let hi = if e1 <= e2 { e1 } else { e2 };
        return match lo.cmp(hi) {
            Ordering::Less => SegmentContact::Overlap(lo.clone(), hi.clone()),
            Ordering::Equal => SegmentContact::Point(lo.clone()),
            Ordering::Greater => SegmentContact::None,
        };
    }
    if o1 == Ordering::Equal {
        return if on_segment(a, b, c) {
            SegmentContact::Point(c.clone())
        } else {
            SegmentContact::None
        };
    }
    if o2 == Ordering::Equal {
        return if on_segment(a, b, d) {
            SegmentContact::Point(d.clone())
        } else {
            SegmentContact::None
        };
    }
    if o3 == Ordering::Equal {
        return if on_segment(c, d, a) {
            SegmentContact::Point(a.clone())
        } else {
            SegmentContact::None
        };
    }
    if o4 == Ordering::Equal {
        return if on_segment(c, d, b) {
            SegmentContact::Point(b.clone())
        } else {
            SegmentContact::None
        };
    }
    // Proper crossing.
    SegmentContact::Point(line_intersection(a, b, c, d))
}

/// Intersection of the supporting lines of `ab` and `cd`; they must not be
/// parallel.
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Point {
    let (rx, ry) = b.sub(a);
    let (sx, sy) = d.sub(c);
    let denom = &rx * &sy - &ry * &sx;
    debug_assert!(!denom.is_zero());
    let (qx, qy) = c.sub(a);
    let t = (&qx * &sy - &qy * &sx) / denom;
    a.lerp(b, &t)
}

/// Exact comparison of the directions `a - center` and `b - center` by angle
/// in `[0, 2pi)`, measured counterclockwise from the positive x-axis.
pub fn angle_cmp(center: &Point, a: &Point, b: &Point) -> Ordering {
    let ha = half_plane(center, a);
    let hb = half_plane(center, b);
    ha.cmp(&hb).then_with(|| orient(center, b, a))
}

/// 0 for angles in `[0, pi)`, 1 for `[pi, 2pi)`.
fn half_plane(center: &Point, p: &Point) -> u8 {
    match p.y.cmp(&center.y) {
        Ordering::Greater => 0,
        Ordering::Less => 1,
        Ordering::Equal => {
            if p.x > center.x {
                0
            } else {
                1
            }
        }
    }
}

/// Rounds `r` to the nearest multiple of `2^-k` (halves round up).
pub fn round_dyadic(r: &Rat, k: u32) -> Rat {
    let scale = BigInt::one() << k;
    let scaled = r * Rat::from_integer(scale.clone());
    let rounded = (scaled + rat(1, 2)).floor();
    rounded / Rat::from_integer(scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), Ordering::Greater);
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 0)), Ordering::Less);
        assert_eq!(orient(&p(0, 0), &p(1, 1), &p(3, 3)), Ordering::Equal);
    }

    #[test]
    fn filter_falls_back_on_near_degenerate_input() {
        let a = Point::new(rat(1, 3), rat(1, 3));
        let b = Point::new(rat(2, 3), rat(2, 3));
        let c = Point::new(rat(1_000_000_001, 1_000_000_000), int(1));
        assert_eq!(orient(&a, &b, &c), orient_exact(&a, &b, &c));
        let on = Point::new(rat(5, 7), rat(5, 7));
        assert_eq!(orient(&a, &b, &on), Ordering::Equal);
    }

    #[test]
    fn contacts() {
        assert_eq!(
            segment_contact(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)),
            SegmentContact::Point(p(1, 1))
        );
        assert_eq!(
            segment_contact(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)),
            SegmentContact::Overlap(p(1, 0), p(2, 0))
        );
        assert_eq!(
            segment_contact(&p(0, 0), &p(2, 0), &p(2, 0), &p(3, 1)),
            SegmentContact::Point(p(2, 0))
        );
        assert_eq!(
            segment_contact(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)),
            SegmentContact::None
        );
    }

    #[test]
    fn angles_sort_counterclockwise() {
        let c = p(0, 0);
        let mut pts = vec![p(0, -1), p(-1, 0), p(1, 1), p(1, 0), p(0, 1)];
        pts.sort_by(|a, b| angle_cmp(&c, a, b));
        assert_eq!(pts, vec![p(1, 0), p(1, 1), p(0, 1), p(-1, 0), p(0, -1)]);
    }

    #[test]
    fn dyadic_rounding() {
        assert_eq!(round_dyadic(&rat(1, 3), 1), rat(1, 2));
        assert_eq!(round_dyadic(&rat(1, 3), 2), rat(1, 4));
        assert_eq!(round_dyadic(&rat(-1, 3), 0), int(0));
    }
}
