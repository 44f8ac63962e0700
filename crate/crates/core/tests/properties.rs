use agp_core::arrangement::Arrangement;
use agp_core::geometry::{
    fisk_guards, ring_area2, triangulate, visibility_region, Location, Point, Polygon, Rat, VisRegion,
};
use agp_core::instances::{gen_ortho, gen_simple, gen_with_holes};
use agp_core::pointgen::{light_candidates, GuardMode};
use agp_core::setcover::{lp_solve, ScpInstance};
use agp_core::solver::{certify, solve_point, solve_vertex, SolverConfig, Status};
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn polygon() -> impl Strategy<Value = Polygon> {
    prop_oneof![
        (5usize..=20, any::<u64>()).prop_map(|(n, s)| gen_simple(n, s).unwrap()),
        (2usize..=8, any::<u64>()).prop_map(|(h, s)| gen_ortho(2 * h, s).unwrap()),
        (12usize..=20, any::<u64>()).prop_map(|(n, s)| {
            let hole = gen_simple(5, s ^ 1).unwrap();
            gen_with_holes(&gen_simple(n, s).unwrap(), &[hole], s).unwrap()
        }),
    ]
}

/// Random points of `poly` with coordinates in eighths.
fn sample(poly: &Polygon, seed: u64, count: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x0, y0, x1, y1) = poly.bbox();
    let to8 = |r: &Rat| (r * Rat::from_integer(8.into())).floor().to_integer().to_i64().unwrap();
    let (lo_x, hi_x) = (to8(&x0), to8(&x1));
    let (lo_y, hi_y) = (to8(&y0), to8(&y1));
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 50 * count {
        tries += 1;
        let x: i64 = rng.gen_range(lo_x..=hi_x);
        let y: i64 = rng.gen_range(lo_y..=hi_y);
        let p = Point::new(Rat::new(x.into(), 8.into()), Rat::new(y.into(), 8.into()));
        if poly.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn regions(poly: &Polygon, pts: &[Point]) -> Vec<VisRegion> {
    pts.iter().map(|p| visibility_region(poly, p).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn visibility_matches_segment_test(poly in polygon(), seed in any::<u64>()) {
        let pts = sample(&poly, seed, 24);
        for (i, p) in pts.iter().enumerate().take(4) {
            let vis = visibility_region(&poly, p).unwrap();
            prop_assert!(vis.contains(&poly, p));
            let ring = vis.ring();
            for k in 0..ring.len() {
                prop_assert_ne!(poly.locate(&ring[k]), Location::Exterior);
                prop_assert_ne!(poly.locate(&ring[k].midpoint(&ring[(k + 1) % ring.len()])), Location::Exterior);
            }
            for q in &pts[i + 1..] {
                let s = poly.sees(p, q).unwrap();
                prop_assert_eq!(s, poly.sees(q, p).unwrap());
                prop_assert_eq!(vis.contains(&poly, q), s, "p {} q {}", p, q);
            }
        }
    }

    #[test]
    fn triangulation_conserves_area(poly in polygon()) {
        let tris = triangulate(&poly).unwrap();
        let total: Rat = tris.iter().map(|t| ring_area2(t)).sum::<Rat>() / Rat::from_integer(2.into());
        prop_assert_eq!(total, poly.area());
    }

    #[test]
    fn fisk_guards_cover(n in 5usize..=30, seed in any::<u64>()) {
        let poly = gen_simple(n, seed).unwrap();
        let g = fisk_guards(&poly).unwrap();
        prop_assert!(g.len() <= poly.n() / 3);
        prop_assert!(certify(&poly, &g).unwrap());
    }

    #[test]
    fn arrangement_faces(poly in polygon(), seed in any::<u64>(), k in 1usize..=6) {
        let guards = sample(&poly, seed, k);
        prop_assume!(!guards.is_empty());
        let regs = regions(&poly, &guards);
        let arr = Arrangement::overlay(&poly, &regs).unwrap();
        prop_assert_eq!(arr.area(), poly.area());
        let again = Arrangement::overlay(&poly, &regs).unwrap();
        let key = |a: &Arrangement| a.faces().iter().map(|f| (f.outer().to_vec(), f.cover().to_vec())).collect::<Vec<_>>();
        prop_assert_eq!(key(&arr), key(&again));
        prop_assert_eq!(arr.classify(), again.classify());

        let classes = arr.classify();
        for (i, f) in arr.faces().iter().enumerate() {
            prop_assert!(f.area() > &Rat::zero());
            let rep = f.representative();
            prop_assert!(f.contains_strict(&rep));
            // Cover sets are exactly the regions containing an interior point.
            let seen: Vec<usize> = (0..regs.len()).filter(|&r| regs[r].contains(&poly, &rep)).collect();
            prop_assert_eq!(&seen, &f.cover().to_vec());
            for nb in f.neighbors() {
                let c = arr.face(*nb).cover();
                let sup = c.len() > f.cover().len() && f.cover().iter().all(|x| c.contains(x));
                let sub = c.len() < f.cover().len() && c.iter().all(|x| f.cover().contains(x));
                if sup { prop_assert!(!classes[i].is_light()); }
                if sub { prop_assert!(!classes[i].is_shadow()); }
            }
        }

        // One guard per minimal face covers everything.
        let mut pick: Vec<Point> = arr
            .faces()
            .iter()
            .zip(&classes)
            .filter(|(f, c)| c.is_shadow() && !f.cover().is_empty())
            .map(|(f, _)| guards[f.cover()[0]].clone())
            .collect();
        pick.sort();
        pick.dedup();
        let uncovered = !arr.uncovered().is_empty();
        if !uncovered {
            prop_assert!(certify(&poly, &pick).unwrap());
        }
    }

    #[test]
    fn one_candidate_per_light_face(poly in polygon(), seed in any::<u64>(), k in 1usize..=6) {
        let wit = sample(&poly, seed, k);
        prop_assume!(!wit.is_empty());
        let arr = Arrangement::overlay(&poly, &regions(&poly, &wit)).unwrap();
        let light: Vec<usize> = (0..arr.faces().len()).filter(|&i| arr.classify()[i].is_light()).collect();
        let cands = light_candidates(&arr, GuardMode::LightAvpInterior);
        prop_assert_eq!(cands.len(), light.len());
        for ((p, _), &f) in cands.iter().zip(&light) {
            prop_assert!(arr.faces()[f].contains_strict(p));
            prop_assert_eq!(poly.locate(p), Location::Interior);
        }
        // Every witness sees some candidate.
        for w in &wit {
            let vis = visibility_region(&poly, w).unwrap();
            prop_assert!(cands.iter().any(|(p, _)| vis.contains(&poly, p)));
        }
    }

    #[test]
    fn lp_duality(rows in proptest::collection::vec(proptest::collection::vec(0usize..8, 1..4), 1..10)) {
        let inst = ScpInstance::new(8, rows).unwrap();
        let r = lp_solve(&inst);
        prop_assert_eq!(r.primal.iter().sum::<Rat>(), r.value.clone());
        prop_assert_eq!(r.duals.iter().sum::<Rat>(), r.value.clone());
        let one = Rat::from_integer(1.into());
        for col in inst.columns() {
            prop_assert!(col.iter().map(|&w| &r.duals[w]).sum::<Rat>() <= one);
        }
        for row in inst.rows() {
            prop_assert!(row.iter().map(|&g| &r.primal[g]).sum::<Rat>() >= one);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn solver_bounds(poly in polygon()) {
        let p = solve_point(&poly, &SolverConfig::default()).unwrap();
        let v = solve_vertex(&poly, &SolverConfig::vertex()).unwrap();
        for s in [&p, &v] {
            prop_assert!(s.lower_bound <= s.upper_bound);
            prop_assert!(certify(&poly, &s.guard_points()).unwrap());
            prop_assert!(s.witnesses.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(s.candidates.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(s.upper_bound.clone(), Rat::from_integer((s.guards.len() as i64).into()));
        }
        prop_assert_eq!(v.status, Status::ProvenOptimal);
        if p.status == Status::ProvenOptimal {
            prop_assert!(p.upper_bound <= v.upper_bound);
        }
        prop_assert!(p.lower_bound <= v.upper_bound);
    }
}
