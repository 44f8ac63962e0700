//! SVG scenes of polygons, guards, visibility regions and arrangements.

use std::fmt::Write as _;

use agp_core::arrangement::Arrangement;
use agp_core::geometry::{visibility_region, Point, Polygon, VisRegion};
use agp_core::solver::SolverError;

#[derive(Debug, Clone, Copy, Default)]
pub struct RenderOptions {
    /// Shade the visibility region of every guard.
    pub visibility: bool,
    /// Colour the faces of the guard arrangement by how many guards see them.
    pub arrangement: bool,
}

struct Frame {
    x0: f64,
    y1: f64,
    margin: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(poly: &Polygon) -> Frame {
        let pts: Vec<(f64, f64)> = poly.vertices().iter().map(|p| p.approx()).collect();
        let fold = |f: fn(f64, f64) -> f64, init: f64, sel: fn(&(f64, f64)) -> f64| pts.iter().map(sel).fold(init, f);
        let x0 = fold(f64::min, f64::INFINITY, |p| p.0);
        let x1 = fold(f64::max, f64::NEG_INFINITY, |p| p.0);
        let y0 = fold(f64::min, f64::INFINITY, |p| p.1);
        let y1 = fold(f64::max, f64::NEG_INFINITY, |p| p.1);
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let margin = span * 0.05;
        Frame {
            x0,
            y1,
            margin,
            width: x1 - x0 + 2.0 * margin,
            height: y1 - y0 + 2.0 * margin,
        }
    }

    /// Screen coordinates, y pointing down.
    fn map(&self, p: &Point) -> (f64, f64) {
        let (x, y) = p.approx();
        (x - self.x0 + self.margin, self.y1 - y + self.margin)
    }

    fn path(&self, rings: &[&[Point]]) -> String {
        let mut d = String::new();
        for r in rings {
            for (i, p) in r.iter().enumerate() {
                let (x, y) = self.map(p);
                let _ = write!(d, "{}{:.6} {:.6} ", if i == 0 { "M" } else { "L" }, x, y);
            }
            d.push_str("Z ");
        }
        d.trim_end().to_string()
    }

    fn unit(&self) -> f64 {
        self.width.max(self.height) / 400.0
    }
}

/// Blue ramp by cover size, red for uncovered faces.
fn face_colour(count: usize, max: usize) -> String {
    if count == 0 {
        return "#e06666".to_string();
    }
    let t = count as f64 / max.max(1) as f64;
    let light = (235.0 - 135.0 * t).round() as u8;
    format!("#{:02x}{:02x}ff", light, light)
}

pub fn render_svg(poly: &Polygon, guards: &[Point], opts: RenderOptions) -> Result<String, SolverError> {
    let fr = Frame::new(poly);
    let u = fr.unit();
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {:.6} {:.6}" width="800" height="{:.0}">"#,
        fr.width,
        fr.height,
        800.0 * fr.height / fr.width
    );
    let rings: Vec<&[Point]> = poly.rings().iter().map(|r| r.as_slice()).collect();
    let _ = writeln!(
        s,
        r##"<path class="polygon" d="{}" fill="#f4f4f4" fill-rule="evenodd" stroke="none"/>"##,
        fr.path(&rings)
    );

    let regions: Vec<VisRegion> = if opts.visibility || opts.arrangement {
        guards.iter().map(|g| visibility_region(poly, g)).collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };
    if opts.arrangement {
        let arr = Arrangement::overlay(poly, &regions)?;
        let max = arr.faces().iter().map(|f| f.cover().len()).max().unwrap_or(0);
        for f in arr.faces() {
            let mut fr_rings: Vec<&[Point]> = vec![f.outer()];
            fr_rings.extend(f.holes().iter().map(|h| h.as_slice()));
            let _ = writeln!(
                s,
                r##"<path class="face" d="{}" fill="{}" fill-rule="evenodd" stroke="#888888" stroke-width="{:.6}"/>"##,
                fr.path(&fr_rings),
                face_colour(f.cover().len(), max),
                u * 0.5
            );
        }
    }
    if opts.visibility {
        for r in &regions {
            let _ = writeln!(
                s,
                r##"<path class="vis" d="{}" fill="#f6c342" fill-opacity="0.35" stroke="#c9951a" stroke-width="{:.6}"/>"##,
                fr.path(&[r.ring()]),
                u * 0.5
            );
        }
    }
    let _ = writeln!(
        s,
        r##"<path class="outline" d="{}" fill="none" fill-rule="evenodd" stroke="#222222" stroke-width="{:.6}"/>"##,
        fr.path(&rings),
        u
    );
    for g in guards {
        let (x, y) = fr.map(g);
        let _ = writeln!(
            s,
            r##"<circle class="guard" cx="{:.6}" cy="{:.6}" r="{:.6}" fill="#d62728" stroke="#ffffff" stroke-width="{:.6}"/>"##,
            x,
            y,
            u * 4.0,
            u
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ell() -> Polygon {
        Polygon::new(vec![[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
            .iter()
            .map(|&(x, y)| Point::from_ints(x, y))
            .collect()])
        .unwrap()
    }

    fn fills(svg: &str, class: &str) -> HashSet<String> {
        svg.lines()
            .filter(|l| l.contains(&format!("class=\"{class}\"")))
            .filter_map(|l| l.split("fill=\"").nth(1).map(|r| r.split('"').next().unwrap().to_string()))
            .collect()
    }

    #[test]
    fn guard_and_shading() {
        let svg = render_svg(&ell(), &[Point::from_ints(0, 0)], RenderOptions { visibility: true, arrangement: false }).unwrap();
        assert_eq!(svg.matches("class=\"guard\"").count(), 1);
        assert_eq!(svg.matches("class=\"vis\"").count(), 1);
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn arrangement_colours() {
        let svg = render_svg(&ell(), &[Point::from_ints(2, 0)], RenderOptions { visibility: false, arrangement: true }).unwrap();
        assert_eq!(fills(&svg, "face").len(), 2);
    }

    #[test]
    fn holes_use_even_odd() {
        let sq = |a: i64, b: i64| vec![Point::from_ints(a, a), Point::from_ints(b, a), Point::from_ints(b, b), Point::from_ints(a, b)];
        let mut hole = sq(1, 2);
        hole.reverse();
        let p = Polygon::new(vec![sq(0, 3), hole]).unwrap();
        let svg = render_svg(&p, &[], RenderOptions::default()).unwrap();
        let line = svg.lines().find(|l| l.contains("class=\"polygon\"")).unwrap();
        assert!(line.contains("fill-rule=\"evenodd\""));
        assert_eq!(line.matches('Z').count(), 2);
    }
}
