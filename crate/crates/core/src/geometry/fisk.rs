//! Guard placement from a 3-coloured triangulation.

use super::point::Point;
use super::polygon::Polygon;
use super::triangulate::clip_ears;
use super::GeometryError;

/// Returns the vertices of the smallest colour class of a 3-colouring of
/// an ear-clipping triangulation. At most `floor(n/3)` guards, which jointly
/// see the whole polygon.
pub fn fisk_guards(poly: &Polygon) -> Result<Vec<Point>, GeometryError> {
    if !poly.is_simple() {
        return Err(GeometryError::HasHoles);
    }
    let ring = poly.outer();
    let (clips, last) = clip_ears(ring)?;
    let mut colour = vec![u8::MAX; ring.len()];
    for (c, &i) in last.iter().enumerate() {
        colour[i] = c as u8;
    }
    // Undo the clipping: each restored vertex needs a colour different from
    // its two neighbours, which are already coloured and differ.
    for clip in clips.iter().rev() {
        let used = [colour[clip.a], colour[clip.c]];
        colour[clip.v] = (0..3u8).find(|c| !used.contains(c)).expect("three colours");
    }
    let mut counts = [0usize; 3];
    for &c in &colour {
        counts[c as usize] += 1;
    }
    let best = (0..3).min_by_key(|&c| (counts[c], c)).expect("three colours") as u8;
    Ok(ring
        .iter()
        .zip(&colour)
        .filter(|(_, &c)| c == best)
        .map(|(p, _)| p.clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::visibility::visibility_region;

    fn pts(c: &[(i64, i64)]) -> Vec<Point> {
        c.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
    }

    #[test]
    fn comb_gets_one_guard_per_tooth_or_fewer() {
        let p = Polygon::new(vec![pts(&[
            (0, 0),
            (8, 0),
            (8, 2),
            (7, 2),
            (6, 10),
            (5, 2),
            (3, 2),
            (2, 10),
            (1, 2),
            (0, 2),
        ])])
        .unwrap();
        let g = fisk_guards(&p).unwrap();
        assert!(g.len() <= 3);
        // the two tips need separate guards
        for tip in [Point::from_ints(2, 10), Point::from_ints(6, 10)] {
            assert!(g
                .iter()
                .any(|x| visibility_region(&p, x).unwrap().contains(&p, &tip)));
        }
    }

    #[test]
    fn rejects_holes() {
        let p = Polygon::new(vec![
            pts(&[(0, 0), (6, 0), (6, 6), (0, 6)]),
            pts(&[(1, 1), (2, 1), (2, 2), (1, 2)]),
        ])
        .unwrap();
        assert_eq!(fisk_guards(&p), Err(GeometryError::HasHoles));
    }
}
