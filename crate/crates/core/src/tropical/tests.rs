use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::polyhedra::{convex_hull, normal_fan};
use crate::ratlin::vector::{dot, int_vec, rat, rat_vec};

fn iv(v: &[i64]) -> IntVec {
    int_vec(v)
}

fn cone(rays: &[usize], w: i64) -> WeightedCone {
    WeightedCone { rays: rays.to_vec(), weight: rat(w) }
}

fn tropical_line() -> WeightedFan {
    WeightedFan::new(
        2,
        1,
        vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1])],
        vec![],
        vec![cone(&[0], 1), cone(&[1], 1), cone(&[2], 1)],
    )
    .unwrap()
}

/// Complete fan of the projective plane with weight one on each 2-cone.
fn plane_mu() -> WeightedFan {
    WeightedFan::new(
        2,
        2,
        vec![iv(&[-1, 0]), iv(&[0, -1]), iv(&[1, 1])],
        vec![],
        vec![cone(&[0, 1], 1), cone(&[0, 2], 1), cone(&[1, 2], 1)],
    )
    .unwrap()
}

#[test]
fn tropical_line_is_balanced() {
    let r = check_balancing(&tropical_line()).unwrap();
    assert!(r.is_balanced());
    assert_eq!(r.entries.len(), 1);
}

#[test]
fn single_ray_fails_at_origin() {
    let f = WeightedFan::new(2, 1, vec![iv(&[1, 0])], vec![], vec![cone(&[0], 1)]).unwrap();
    let r = check_balancing(&f).unwrap();
    assert!(!r.is_balanced());
    assert_eq!(r.entries[0].defect, rat_vec(&[1, 0]));
}

#[test]
fn mixed_dimensions_are_rejected() {
    let f = WeightedFan::new(2, 1, vec![iv(&[1, 0]), iv(&[0, 1])], vec![], vec![cone(&[0], 1), cone(&[0, 1], 1)]);
    assert_eq!(f.unwrap_err(), TropicalError::NotPure);
}

#[test]
fn linear_function_has_empty_corner_locus() {
    let mu = plane_mu();
    let phi = PLFunction::linear(&mu.rays, &rat_vec(&[3, -2]));
    let out = divisor_intersect(&phi, &mu).unwrap();
    assert!(out.cones.is_empty());
    assert_eq!(out.dim, 1);
}

#[test]
fn max_function_cuts_out_tropical_line() {
    let mu = plane_mu();
    // max(0, x1, x2) at -e1, -e2, e1+e2
    let phi = PLFunction::new(vec![rat(0), rat(0), rat(1)]);
    let line = divisor_intersect(&phi, &mu).unwrap();
    let mut got: Vec<(Vec<usize>, BigRational)> =
        line.cones.iter().map(|c| (c.rays.clone(), c.weight.clone())).collect();
    got.sort();
    assert_eq!(got, vec![(vec![0], rat(1)), (vec![1], rat(1)), (vec![2], rat(1))]);
    assert!(check_balancing(&line).unwrap().is_balanced());
    let pt = divisor_intersect(&phi, &line).unwrap();
    assert_eq!(degree(&pt).unwrap(), rat(1));
}

fn support_values(rays: &[IntVec], vertices: &[RatVec]) -> PLFunction {
    PLFunction::new(rays.iter().map(|r| vertices.iter().map(|v| dot(v, &to_rational(r))).max().unwrap()).collect())
}

#[test]
fn square_support_function_squared_has_degree_two() {
    let square = convex_hull(&[rat_vec(&[0, 0]), rat_vec(&[1, 0]), rat_vec(&[0, 1]), rat_vec(&[1, 1])]);
    let nf = normal_fan(&square).unwrap();
    let phi = support_values(&nf.fan.rays, &square.vertices);
    let pt = divisor_power_weight(&phi, &nf.fan, 2).unwrap();
    assert_eq!(degree(&pt).unwrap(), rat(2));
    let mu = divisor_power_weight(&phi, &nf.fan, 0).unwrap();
    assert_eq!(mu.cones.len(), 4);
    assert!(mu.cones.iter().all(|c| c.weight.is_one()));
}

#[test]
fn cube_support_function_cubed_has_degree_six() {
    let mut pts = Vec::new();
    for m in 0..8i64 {
        pts.push(rat_vec(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]));
    }
    let cube = convex_hull(&pts);
    let nf = normal_fan(&cube).unwrap();
    let phi = support_values(&nf.fan.rays, &cube.vertices);
    let pt = divisor_power_weight(&phi, &nf.fan, 3).unwrap();
    assert_eq!(degree(&pt).unwrap(), rat(6));
}

#[test]
fn degree_of_empty_and_single_point() {
    let empty = WeightedFan::new(2, 0, vec![], vec![], vec![]).unwrap();
    assert_eq!(degree(&empty).unwrap(), BigRational::zero());
    let pt = WeightedFan::new(
        2,
        0,
        vec![],
        vec![],
        vec![WeightedCone { rays: vec![], weight: crate::ratlin::vector::ratio(5, 2) }],
    )
    .unwrap();
    assert_eq!(degree(&pt).unwrap(), crate::ratlin::vector::ratio(5, 2));
    assert_eq!(degree(&tropical_line()).unwrap_err(), TropicalError::NotZeroDimensional(1));
}

#[test]
fn shifted_representatives_do_not_change_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mu = plane_mu();
    let phi = PLFunction::new(vec![rat(2), rat(-1), rat(5)]);
    let a = divisor_intersect(&phi, &mu).unwrap();
    for _ in 0..5 {
        let b = divisor_intersect_shifted(&phi, &mu, &mut rng).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn unbalanced_input_is_reported() {
    let f = WeightedFan::new(2, 1, vec![iv(&[1, 0]), iv(&[0, 1])], vec![], vec![cone(&[0], 1), cone(&[1], 1)]).unwrap();
    let phi = PLFunction::new(vec![rat(1), rat(0)]);
    assert!(matches!(divisor_intersect(&phi, &f), Err(TropicalError::NotBalanced { .. })));
}

#[test]
fn product_with_line_stays_balanced() {
    let line = tropical_line();
    assert_eq!(product_with_lineality(&line, 0), line);
    let p = product_with_lineality(&line, 1);
    assert_eq!((p.ambient_dim, p.dim, p.cones.len()), (3, 2, 3));
    assert!(check_balancing(&p).unwrap().is_balanced());
    let unbalanced = WeightedFan::new(2, 1, vec![iv(&[1, 0])], vec![], vec![cone(&[0], 1)]).unwrap();
    assert!(!check_balancing(&product_with_lineality(&unbalanced, 2)).unwrap().is_balanced());
}

#[test]
fn intersection_with_lineality_reaches_zero() {
    // (line × ℝ) cut by two pullbacks of max(0, x1, x2) from the base.
    let p = product_with_lineality(&plane_mu(), 1);
    let phi = PLFunction::new(vec![rat(0), rat(0), rat(1)]);
    let once = divisor_intersect(&phi, &p).unwrap();
    assert!(check_balancing(&once).unwrap().is_balanced());
    let twice = divisor_intersect(&phi, &once).unwrap();
    assert_eq!(twice.dim, 1);
    assert_eq!(twice.cones.len(), 1);
    assert_eq!(twice.cones[0].weight, rat(1));
    let thrice = divisor_intersect(&phi, &twice).unwrap();
    assert_eq!(degree(&thrice).unwrap(), BigRational::zero());
}

#[test]
fn weight_space_of_tropical_line() {
    let ws = balancing_weight_space(&tropical_line()).unwrap();
    assert_eq!(ws.dim(), 1);
    let b = &ws.basis[0];
    assert!(b.iter().all(|x| *x == b[0]));
    assert!(ws.strongly_extremal());
}

#[test]
fn weight_space_of_coordinate_axes() {
    let f = WeightedFan::new(
        2,
        1,
        vec![iv(&[1, 0]), iv(&[-1, 0]), iv(&[0, 1]), iv(&[0, -1])],
        vec![],
        vec![cone(&[0], 1), cone(&[1], 1), cone(&[2], 1), cone(&[3], 1)],
    )
    .unwrap();
    let ws = balancing_weight_space(&f).unwrap();
    assert_eq!(ws.dim(), 2);
    assert!(!ws.strongly_extremal());
}

#[test]
fn compact_drops_unused_rays() {
    let f = WeightedFan::new(2, 1, vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1])], vec![], vec![cone(&[2], 1)]).unwrap();
    let (g, map) = f.compact();
    assert_eq!(g.rays, vec![iv(&[-1, -1])]);
    assert_eq!(map, vec![None, None, Some(0)]);
    assert_eq!(g.cones[0].rays, vec![0]);
}

#[test]
fn non_simplicial_cone_ridges_come_from_its_faces() {
    // Cone over a square in ℝ³ next to its mirror image: a balanced 3-dim
    // fan would need more cones, but the ridge structure is what we test.
    let rays = vec![iv(&[1, 0, 1]), iv(&[0, 1, 1]), iv(&[-1, 0, 1]), iv(&[0, -1, 1])];
    let f = WeightedFan::new(3, 3, rays, vec![], vec![cone(&[0, 1, 2, 3], 1)]).unwrap();
    assert!(!f.is_simplicial());
    let r = check_balancing(&f).unwrap();
    assert_eq!(r.entries.len(), 4);
    assert!(!r.is_balanced());
    let phi = PLFunction::new(vec![BigRational::one(); 4]);
    assert_eq!(divisor_intersect(&phi, &f).unwrap_err(), TropicalError::NotSimplicial);
}
