use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use tropicap::polyhedra::{
    cayley_polytope, cone_meets_halfplane, convex_hull, normal_fan, triangulate_fan, Cone, Fan, FlagPair,
    PolyhedraError,
};
use tropicap::ratlin::vector::{dot, int_vec, rat_vec, ratio, to_rational};
use tropicap::ratlin::{rank, Matrix};
use tropicap::{IntVec, RatVec};

fn iv(v: &[i64]) -> IntVec {
    int_vec(v)
}

#[test]
fn hull_discards_interior_point() {
    let mut pts: Vec<RatVec> = [[0, 0], [1, 0], [0, 1], [1, 1]].iter().map(|p| rat_vec(p)).collect();
    pts.push(vec![ratio(1, 2), ratio(1, 2)]);
    let p = convex_hull(&pts);
    assert_eq!(p.vertices.len(), 4);
    assert_eq!(p.facets.len(), 4);
    assert_eq!(p.dim, 2);
    assert!(p.check_representation());
    assert_eq!(p.vertices[0], rat_vec(&[0, 0]));
    assert_eq!(p.faces[1].len(), 4);
    assert_eq!(p.faces[0].len(), 4);
}

#[test]
fn hull_of_collinear_points_is_a_segment() {
    let pts: Vec<RatVec> = [[0, 0], [1, 1], [3, 3]].iter().map(|p| rat_vec(p)).collect();
    let p = convex_hull(&pts);
    assert_eq!(p.dim, 1);
    assert_eq!(p.vertices, vec![rat_vec(&[0, 0]), rat_vec(&[3, 3])]);
    assert_eq!(p.equations.len(), 1);
    assert!(p.check_representation());
    assert!(p.contains(&rat_vec(&[2, 2])));
    assert!(!p.contains(&rat_vec(&[4, 4])));
    assert!(!p.contains(&rat_vec(&[1, 0])));
}

/// Facets by brute force: every affinely independent triple whose plane has
/// all points on one side.
fn brute_force_facets(pts: &[RatVec]) -> BTreeSet<BTreeSet<usize>> {
    let n = pts.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = tropicap::ratlin::vector::sub(&pts[j], &pts[i]);
                let b = tropicap::ratlin::vector::sub(&pts[k], &pts[i]);
                let normal =
                    vec![&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]];
                if normal.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let c = dot(&normal, &pts[i]);
                let vals: Vec<BigRational> = pts.iter().map(|p| dot(&normal, p) - &c).collect();
                let pos = vals.iter().any(|v| v.is_positive());
                let neg = vals.iter().any(|v| v.is_negative());
                if pos && neg {
                    continue;
                }
                out.insert((0..n).filter(|&t| vals[t].is_zero()).collect());
            }
        }
    }
    out
}

#[test]
fn hull_matches_brute_force_in_three_dimensions() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let pts: Vec<RatVec> = (0..8)
            .map(|_| (0..3).map(|_| ratio(rng.random_range(-20..=20), rng.random_range(1..=3))).collect())
            .collect();
        let p = convex_hull(&pts);
        assert!(p.check_representation());
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        let brute: BTreeSet<BTreeSet<RatVec>> = brute_force_facets(&sorted)
            .into_iter()
            .map(|s| s.into_iter().map(|i| sorted[i].clone()).collect())
            .collect();
        let ours: BTreeSet<BTreeSet<RatVec>> = (0..p.facets.len())
            .map(|f| p.facet_vertices(f).into_iter().map(|v| p.vertices[v].clone()).collect())
            .collect();
        // Brute force lists all points on a facet plane; ours lists vertices only.
        let brute_vertices: BTreeSet<BTreeSet<RatVec>> =
            brute.into_iter().map(|s| s.into_iter().filter(|x| p.vertices.contains(x)).collect()).collect();
        assert_eq!(ours, brute_vertices);
    }
}

#[test]
fn normal_fan_of_square() {
    let p = convex_hull(&[rat_vec(&[0, 0]), rat_vec(&[1, 0]), rat_vec(&[0, 1]), rat_vec(&[1, 1])]);
    let nf = normal_fan(&p).unwrap();
    let rays: BTreeSet<IntVec> = nf.fan.rays.iter().cloned().collect();
    let expect: BTreeSet<IntVec> = [[1, 0], [-1, 0], [0, 1], [0, -1]].iter().map(|r| iv(r)).collect();
    assert_eq!(rays, expect);
    assert_eq!(nf.fan.cones[2].len(), 4);
    for c in &nf.fan.cones[2] {
        let s = &nf.fan.rays[c.rays[0]];
        let t = &nf.fan.rays[c.rays[1]];
        assert!(dot(s, t).is_zero(), "adjacent normals are orthogonal");
    }
}

#[test]
fn normal_fan_of_triangle() {
    let p = convex_hull(&[rat_vec(&[0, 0]), rat_vec(&[1, 0]), rat_vec(&[0, 1])]);
    let nf = normal_fan(&p).unwrap();
    let rays: BTreeSet<IntVec> = nf.fan.rays.iter().cloned().collect();
    let expect: BTreeSet<IntVec> = [[-1, 0], [0, -1], [1, 1]].iter().map(|r| iv(r)).collect();
    assert_eq!(rays, expect);
    let seg = convex_hull(&[rat_vec(&[0, 0]), rat_vec(&[1, 0])]);
    assert_eq!(normal_fan(&seg).unwrap_err(), PolyhedraError::NotFullDimensional);
}

#[test]
fn normal_fan_dimensions_are_complementary() {
    let mut pts = Vec::new();
    for m in 0..8i64 {
        pts.push(rat_vec(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]));
    }
    pts.push(rat_vec(&[2, 2, 2]));
    let p = convex_hull(&pts);
    let nf = normal_fan(&p).unwrap();
    for (k, level) in nf.fan.cones.iter().enumerate() {
        for (i, c) in level.iter().enumerate() {
            let (fd, fi) = nf.dual_face[k][i];
            assert_eq!(fd + k, 3);
            let rows: Vec<RatVec> = c.rays.iter().map(|&r| to_rational(&nf.fan.rays[r])).collect();
            assert_eq!(rank(&Matrix::from_rows(&rows, 3)), k);
            assert_eq!(p.faces[fd][fi].facets, c.rays);
        }
    }
}

#[test]
fn triangulation_of_square_cone_uses_lowest_ray() {
    let rays = vec![iv(&[1, 0, 1]), iv(&[0, 1, 1]), iv(&[-1, 0, 1]), iv(&[0, -1, 1])];
    let fan = Fan::from_maximal(3, rays, &[vec![0, 1, 2, 3]]).unwrap();
    assert!(!fan.is_simplicial());
    let t = triangulate_fan(&fan);
    assert!(t.is_simplicial());
    assert_eq!(t.maximal_cones(), &[Cone::new(vec![0, 1, 2]), Cone::new(vec![0, 2, 3])]);
    let again = triangulate_fan(&t);
    assert_eq!(again, t);
}

#[test]
fn triangulation_refines_cube_fan() {
    // Normal fan of an octahedron: cones over the faces of a cube.
    let mut pts = Vec::new();
    for i in 0..3 {
        for s in [-1, 1] {
            let mut v = vec![0i64; 3];
            v[i] = s;
            pts.push(rat_vec(&v));
        }
    }
    let oct = convex_hull(&pts);
    let nf = normal_fan(&oct).unwrap();
    assert_eq!(nf.fan.cones[3].len(), 6);
    let t = triangulate_fan(&nf.fan);
    assert!(t.is_simplicial());
    assert_eq!(t.maximal_cones().len(), 12);
    assert_eq!(t.rays, nf.fan.rays);
    for c in t.maximal_cones() {
        let inside = nf.fan.cones[3].iter().filter(|big| c.rays.iter().all(|r| big.rays.contains(r))).count();
        assert_eq!(inside, 1);
    }
}

#[test]
fn halfplane_examples() {
    let rays = vec![iv(&[1, 0, 0]), iv(&[-1, 1, 0])];
    let mut flags = FlagPair::coordinate(3);
    assert!(cone_meets_halfplane(&rays, &flags).unwrap());
    flags.i_sign = -1;
    assert!(!cone_meets_halfplane(&rays, &flags).unwrap());
    let bad = vec![iv(&[0, 1, 0]), iv(&[1, 0, 0])];
    assert_eq!(cone_meets_halfplane(&bad, &flags).unwrap_err(), PolyhedraError::NotTransversal(0));
}

/// Exact crossing of the segment `a + t (b - a)` with `x₁ = 0`.
fn crossing_oracle(a: &[i64], b: &[i64]) -> bool {
    if (a[0] > 0) == (b[0] > 0) {
        return false;
    }
    let t = ratio(a[0], a[0] - b[0]);
    let x2 = BigRational::from_integer(a[1].into()) + t * BigRational::from_integer((b[1] - a[1]).into());
    x2.is_positive()
}

proptest! {
    #[test]
    fn halfplane_matches_segment_oracle(
        a in prop::collection::vec(-5i64..=5, 4),
        b in prop::collection::vec(-5i64..=5, 4),
        k in 1i64..4,
    ) {
        prop_assume!(a[0] != 0 && b[0] != 0);
        let ra = iv(&a);
        let rb = iv(&b);
        let flags = FlagPair::coordinate(4);
        let got = cone_meets_halfplane(&[ra.clone(), rb.clone()], &flags).unwrap();
        prop_assert_eq!(got, crossing_oracle(&a, &b));
        let scaled: Vec<i64> = a.iter().map(|x| x * k).collect();
        prop_assert_eq!(cone_meets_halfplane(&[iv(&scaled), rb], &flags).unwrap(), got);
    }

    #[test]
    fn halfplane_is_disjunction_over_subdivision(
        rays in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 3),
    ) {
        prop_assume!(rays.iter().all(|r| r[0] != 0));
        let rs: Vec<IntVec> = rays.iter().map(|r| iv(r)).collect();
        let mid: Vec<i64> = (0..3).map(|j| rays[0][j] + rays[1][j] + rays[2][j]).collect();
        prop_assume!(mid[0] != 0);
        let rows: Vec<RatVec> = rs.iter().map(|r| to_rational(r)).collect();
        prop_assume!(rank(&Matrix::from_rows(&rows, 3)) == 3);
        let flags = FlagPair::coordinate(3);
        let whole = cone_meets_halfplane(&rs, &flags).unwrap();
        let m = iv(&mid);
        let parts = [
            vec![rs[0].clone(), rs[1].clone(), m.clone()],
            vec![rs[1].clone(), rs[2].clone(), m.clone()],
            vec![rs[0].clone(), rs[2].clone(), m],
        ];
        let any = parts.iter().any(|p| cone_meets_halfplane(p, &flags).unwrap());
        prop_assert_eq!(whole, any);
    }
}

fn circuit3() -> Vec<IntVec> {
    vec![iv(&[0, 0, 1, 0]), iv(&[0, 0, 0, 1]), iv(&[0, 0, -1, -1])]
}

#[test]
fn cayley_of_three_triangles_is_generic() {
    let polys = vec![
        vec![iv(&[3, 1]), iv(&[-2, 4]), iv(&[-1, -5])],
        vec![iv(&[4, -1]), iv(&[-3, 2]), iv(&[1, -4])],
        vec![iv(&[2, 3]), iv(&[-5, -1]), iv(&[3, -3])],
    ];
    let c = cayley_polytope(&polys, &circuit3()).unwrap();
    assert_eq!(c.polytope.dim, 4);
    assert_eq!(c.polytope.vertices.len(), 9);
    assert!(c.polytope.check_representation());
    assert!(c.is_generic(), "off-line simplicial: {}, subdivides: {}", c.simplicial_off_line, c.subdivides_line);
}

#[test]
fn cayley_of_identical_squares_is_not_generic() {
    let sq = vec![iv(&[1, 1]), iv(&[-1, 1]), iv(&[-1, -1]), iv(&[1, -1])];
    let circuit = vec![iv(&[0, 0, 1]), iv(&[0, 0, -1])];
    let c = cayley_polytope(&[sq.clone(), sq], &circuit).unwrap();
    assert!(!c.is_generic());
}

#[test]
fn cayley_rejects_bad_inputs() {
    let tri = vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1])];
    let not_circuit = vec![iv(&[0, 0, 1, 0]), iv(&[0, 0, 0, 1]), iv(&[0, 0, 1, 1])];
    assert!(matches!(
        cayley_polytope(&[tri.clone(), tri.clone(), tri.clone()], &not_circuit),
        Err(PolyhedraError::NotACircuit(_))
    ));
    let flat = vec![iv(&[0, 0]), iv(&[1, 1]), iv(&[2, 2])];
    assert_eq!(
        cayley_polytope(&[tri.clone(), flat, tri], &circuit3()).unwrap_err(),
        PolyhedraError::PolygonNotPlanar(1)
    );
}

#[test]
fn polar_reverses_face_lattice() {
    let mut pts = Vec::new();
    for m in 0..8i64 {
        pts.push(rat_vec(&[2 * (m & 1) - 1, 2 * ((m >> 1) & 1) - 1, 2 * ((m >> 2) & 1) - 1]));
    }
    let cube = convex_hull(&pts);
    let oct = cube.polar().unwrap();
    assert_eq!(oct.vertices.len(), 6);
    assert_eq!(oct.facets.len(), 8);
    assert!(oct.check_representation());
    let back = oct.polar().unwrap();
    assert_eq!(back.vertices, cube.vertices);
}
