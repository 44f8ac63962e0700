use agp_core::geometry::{Point, Rat};
use agp_core::instances::gen_ortho;
use agp_core::solver::{certify_fractional, solve_point, SolverConfig, Status};

// Shadows that shrink a little each round when witnesses are only placed in
// face interiors. Edge witnesses pin them down in a few iterations.
#[test]
fn edge_witnesses_stop_creeping_shadows() {
    let poly = gen_ortho(40, 8).unwrap();
    let run = |edge: bool| {
        let cfg = SolverConfig { edge_witnesses: edge, max_iterations: 60, ..SolverConfig::default() };
        solve_point(&poly, &cfg).unwrap()
    };
    let with = run(true);
    let without = run(false);
    assert_eq!(with.status, Status::ProvenOptimal);
    assert!(with.iterations <= 10, "{} iterations with edge witnesses", with.iterations);
    assert!(without.iterations > 10, "{} iterations without", without.iterations);
    assert_eq!(with.upper_bound, without.upper_bound);
}

#[test]
fn fractional_certificates() {
    let poly = gen_ortho(4, 0).unwrap();
    let (x0, y0, _, _) = poly.bbox();
    let corner = Point::new(x0, y0);
    let half = Rat::new(1.into(), 2.into());
    assert!(certify_fractional(&poly, &[(corner.clone(), Rat::from_integer(1.into()))]).unwrap());
    assert!(!certify_fractional(&poly, &[(corner.clone(), half.clone())]).unwrap());
    assert!(certify_fractional(&poly, &[(corner.clone(), half.clone()), (corner, half)]).unwrap());
}
