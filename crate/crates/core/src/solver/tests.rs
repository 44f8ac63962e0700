use super::*;
use crate::geometry::{int, rat};
use crate::instances::{gen_comb, gen_simple, gen_spike};

fn poly(pts: &[(i64, i64)]) -> Polygon {
    Polygon::new(vec![pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()]).unwrap()
}

fn square() -> Polygon {
    poly(&[(0, 0), (1, 0), (1, 1), (0, 1)])
}

fn ell() -> Polygon {
    poly(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])
}

fn check(poly: &Polygon, s: &Solution) {
    assert!(s.lower_bound <= s.upper_bound);
    assert!(certify(poly, &s.guard_points()).unwrap());
}

#[test]
fn square_all_models() {
    let p = square();
    for cfg in [SolverConfig::vertex(), SolverConfig::default(), SolverConfig::fractional()] {
        let s = solve(&p, &cfg).unwrap();
        check(&p, &s);
        assert_eq!(s.status, Status::ProvenOptimal);
        assert_eq!(s.upper_bound, int(1));
        assert_eq!(s.lower_bound, int(1));
    }
}

#[test]
fn comb_four() {
    let p = gen_comb(4);
    for cfg in [SolverConfig::vertex(), SolverConfig::default(), SolverConfig::fractional()] {
        let s = solve(&p, &cfg).unwrap();
        check(&p, &s);
        assert_eq!(s.status, Status::ProvenOptimal, "{cfg:?}");
        assert_eq!(s.upper_bound, int(4));
    }
}

#[test]
fn brute_force_small() {
    assert_eq!(brute_force_vertex(&square()).unwrap(), 1);
    assert_eq!(brute_force_vertex(&ell()).unwrap(), 1);
    assert_eq!(brute_force_vertex(&gen_comb(3)).unwrap(), 3);
    assert_eq!(brute_force_vertex(&gen_comb(4)).unwrap(), 4);
    assert!(matches!(brute_force_vertex(&gen_comb(8)), Err(SolverError::TooLarge(24))));
}

#[test]
fn certify_examples() {
    let p = ell();
    assert!(certify(&p, &[Point::from_ints(0, 0)]).unwrap());
    assert!(!certify(&p, &[Point::from_ints(2, 0)]).unwrap());
    assert!(!certify(&p, &[]).unwrap());
    assert!(certify(&p, &[Point::from_ints(5, 5)]).is_err());
}

#[test]
fn vertex_matches_brute_force() {
    for seed in 0..10 {
        let p = gen_simple(10, seed).unwrap();
        let s = solve_vertex(&p, &SolverConfig::vertex()).unwrap();
        check(&p, &s);
        assert_eq!(s.status, Status::ProvenOptimal);
        assert_eq!(s.upper_bound, int(brute_force_vertex(&p).unwrap() as i64), "seed {seed}");
    }
}

#[test]
fn spike_separates_models() {
    let p = gen_spike(1, 0).unwrap();
    let s = solve_point(&p, &SolverConfig::default()).unwrap();
    check(&p, &s);
    assert_eq!(s.status, Status::ProvenOptimal);
    let v = brute_force_vertex(&p).unwrap();
    assert!(s.upper_bound < int(v as i64), "point {} vertex {v}", s.upper_bound);
}

#[test]
fn solution_text_round_trip() {
    let s = Solution {
        guards: vec![(Point::new(rat(1, 3), int(2)), rat(1, 2))],
        lower_bound: rat(1, 2),
        upper_bound: int(1),
        status: Status::Feasible,
        iterations: 4,
        timings: Timings::default(),
        candidates: Vec::new(),
        witnesses: Vec::new(),
    };
    let t = s.to_text();
    assert!(t.contains("1/3 2 1/2"));
    assert_eq!(Solution::from_text(&t).unwrap(), s);
    assert!(Solution::from_text("status Nope\n").is_err());
}
