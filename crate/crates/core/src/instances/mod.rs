//! Polygon files and benchmark generators.
//!
//! Canonical format:
//!
//! ```text
//! agp-polygon 1
//! # comment
//! outer 4
//! 0 0
//! 1 0
//! 1 1
//! 0 1
//! hole 3
//! 1/4 1/4
//! ...
//! ```
//!
//! Coordinates are integers, `p/q` fractions or finite decimals, all read
//! exactly. Files not starting with the header are read as whitespace
//! separated groups `count x1 y1 ... xcount ycount`, the first group being
//! the outer boundary and any further groups holes.

mod gen;

pub use gen::{gen_comb, gen_ortho, gen_simple, gen_spike, gen_vonkoch, gen_with_holes};

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::geometry::{fmt_rat, GeometryError, Point, Polygon, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid polygon: {0}")]
    Validation(#[from] GeometryError),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
}

pub const HEADER: &str = "agp-polygon 1";

struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn tokens(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for piece in body.split_whitespace() {
            let col = body[offset..].find(piece).map_or(0, |i| i + offset);
            offset = col + piece.len();
            out.push(Token {
                text: piece,
                line: ln + 1,
                col: col + 1,
            });
        }
    }
    out
}

fn syntax(t: &Token, msg: impl Into<String>) -> InstanceError {
    InstanceError::Syntax {
        line: t.line,
        col: t.col,
        msg: msg.into(),
    }
}

/// Parses an exact rational: `7`, `-3/4` or `0.125`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = i.starts_with('-');
        let ip: BigInt = match i.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            d => d.parse().ok()?,
        };
        let fp: BigInt = f.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), f.len());
        let mag = Rat::new(ip * &scale + fp, scale);
        return Some(if neg { -mag } else { mag });
    }
    s.parse::<BigInt>().ok().map(Rat::from_integer)
}

struct Cursor<'a> {
    toks: Vec<Token<'a>>,
    pos: usize,
    end_line: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self, what: &str) -> Result<&Token<'a>, InstanceError> {
        let t = self.toks.get(self.pos).ok_or_else(|| InstanceError::Syntax {
            line: self.end_line,
            col: 1,
            msg: format!("unexpected end of input, expected {what}"),
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn count(&mut self) -> Result<usize, InstanceError> {
        let t = self.next("a vertex count")?;
        t.text.parse::<usize>().map_err(|_| syntax(t, format!("expected a vertex count, found `{}`", t.text)))
    }

    fn ring(&mut self, k: usize) -> Result<Vec<Point>, InstanceError> {
        let mut ring = Vec::with_capacity(k);
        for _ in 0..k {
            let mut c = [Rat::zero(), Rat::zero()];
            for v in &mut c {
                let t = self.next("a coordinate")?;
                *v = parse_rat(t.text).ok_or_else(|| syntax(t, format!("bad coordinate `{}`", t.text)))?;
            }
            let [x, y] = c;
            ring.push(Point::new(x, y));
        }
        Ok(ring)
    }
}

/// Reads a polygon in canonical or count-prefixed form.
pub fn parse_polygon(text: &str) -> Result<Polygon, InstanceError> {
    let toks = tokens(text);
    let end_line = text.lines().count().max(1);
    let mut cur = Cursor { toks, pos: 0, end_line };
    let mut rings = Vec::new();
    let canonical = cur.toks.first().is_some_and(|t| t.text == "agp-polygon");
    if canonical {
        cur.next("header")?;
        let v = cur.next("a format version")?;
        if v.text != "1" {
            return Err(syntax(v, format!("unsupported format version `{}`", v.text)));
        }
        while !cur.done() {
            let kw = cur.next("`outer` or `hole`")?;
            let expect = if rings.is_empty() { "outer" } else { "hole" };
            if kw.text != expect {
                return Err(syntax(kw, format!("expected `{expect}`, found `{}`", kw.text)));
            }
            let k = cur.count()?;
            rings.push(cur.ring(k)?);
        }
    } else {
        while !cur.done() {
            let k = cur.count()?;
            rings.push(cur.ring(k)?);
        }
    }
    if rings.is_empty() {
        return Err(InstanceError::Syntax {
            line: 1,
            col: 1,
            msg: "no rings".into(),
        });
    }
    Ok(Polygon::new(rings)?)
}

/// Canonical text of a polygon.
pub fn write_polygon(poly: &Polygon) -> String {
    let mut s = format!("{HEADER}\n");
    for (i, r) in poly.rings().iter().enumerate() {
        let kw = if i == 0 { "outer" } else { "hole" };
        writeln!(s, "{kw} {}", r.len()).unwrap();
        for p in r {
            writeln!(s, "{} {}", fmt_rat(p.x()), fmt_rat(p.y())).unwrap();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    #[test]
    fn single_line_square() {
        let p = parse_polygon("4  0 0  1 0  1 1  0 1").unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(p.area(), rat(1, 1));
    }

    #[test]
    fn canonical_l_shape() {
        let text = "agp-polygon 1\n# L\nouter 6\n0 0\n2 0\n2 1\n1 1\n1 2\n0 2\n";
        let p = parse_polygon(text).unwrap();
        assert_eq!(p.n(), 6);
        assert!(p.holes().is_empty());
        assert_eq!(write_polygon(&p), text.replace("# L\n", ""));
    }

    #[test]
    fn rational_coordinates() {
        let p = parse_polygon("3 0 0 1 0 1/3 2/3").unwrap();
        assert!(p.vertices().contains(&Point::new(rat(1, 3), rat(2, 3))));
        assert_eq!(parse_rat("-0.125"), Some(rat(-1, 8)));
        assert_eq!(parse_rat("3/"), None);
    }

    #[test]
    fn hole_round_trip() {
        let text = "agp-polygon 1\nouter 4\n0 0\n3 0\n3 3\n0 3\nhole 4\n1 1\n1 2\n2 2\n2 1\n";
        let p = parse_polygon(text).unwrap();
        assert_eq!(p.holes().len(), 1);
        assert_eq!(parse_polygon(&write_polygon(&p)).unwrap(), p);
    }

    #[test]
    fn reports_positions() {
        match parse_polygon("agp-polygon 1\nouter 3\n0 0\n1 x\n") {
            Err(InstanceError::Syntax { line, col, .. }) => assert_eq!((line, col), (4, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_polygon("4 0 0 1 0 1 1"), Err(InstanceError::Syntax { .. })));
        assert!(matches!(
            parse_polygon("4 0 0 1 1 1 0 0 1"),
            Err(InstanceError::Validation(GeometryError::SelfIntersection { .. }))
        ));
    }
}
