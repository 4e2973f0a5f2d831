use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ratlin::vector::{primitive_of_rational, to_rational};
use crate::IntVec;

use super::{convex_hull, PolyhedraError, Polytope};

/// A cone given by sorted indices into the ray table of its fan.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    pub rays: Vec<usize>,
}

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Cone { rays }
    }
}

/// Polyhedral fan with all faces listed: `cones[k]` holds the `k`-dimensional cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub ambient_dim: usize,
    /// Primitive integer ray generators.
    pub rays: Vec<IntVec>,
    pub cones: Vec<Vec<Cone>>,
}

/// A normal fan with the face of the polytope dual to each cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFan {
    pub fan: Fan,
    /// `dual_face[k][i] = (dim, index)` of the face dual to `fan.cones[k][i]`.
    pub dual_face: Vec<Vec<(usize, usize)>>,
}

impl Fan {
    /// Builds the fan generated by pointed maximal cones, computing all faces.
    pub fn from_maximal(ambient_dim: usize, rays: Vec<IntVec>, maximal: &[Vec<usize>]) -> Result<Fan, PolyhedraError> {
        let mut by_dim: Vec<BTreeSet<Cone>> = vec![BTreeSet::new(); ambient_dim + 1];
        for m in maximal {
            for (k, faces) in cone_faces(&rays, m)?.into_iter().enumerate() {
                by_dim[k].extend(faces);
            }
        }
        let top = by_dim.iter().rposition(|s| !s.is_empty()).unwrap_or(0);
        by_dim.truncate(top + 1);
        Ok(Fan { ambient_dim, rays, cones: by_dim.into_iter().map(|s| s.into_iter().collect()).collect() })
    }

    pub fn dim(&self) -> usize {
        self.cones.len().saturating_sub(1)
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().enumerate().all(|(k, level)| level.iter().all(|c| c.rays.len() == k))
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        self.cones.last().map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// All faces of the pointed cone spanned by `rays[idx]`, by dimension.
///
/// Faces of the cone correspond to faces of `conv(0, rays)` through the origin.
pub fn cone_faces(rays: &[IntVec], idx: &[usize]) -> Result<Vec<Vec<Cone>>, PolyhedraError> {
    let n = rays.first().map(|r| r.len()).unwrap_or(0);
    let mut pts = vec![vec![BigRational::zero(); n]];
    pts.extend(idx.iter().map(|&i| to_rational(&rays[i])));
    let hull = convex_hull(&pts);
    let origin = pts[0].clone();
    let Some(o) = hull.vertices.iter().position(|v| *v == origin) else {
        return Err(PolyhedraError::BadCone);
    };
    let to_ray: HashMap<usize, usize> = hull
        .vertices
        .iter()
        .enumerate()
        .filter_map(|(vi, v)| idx.iter().find(|&&i| to_rational(&rays[i]) == *v).map(|&i| (vi, i)))
        .collect();
    let d = hull.dim;
    let mut out: Vec<Vec<Cone>> = vec![Vec::new(); d + 1];
    for (k, level) in hull.faces.iter().enumerate() {
        for face in level {
            if face.vertices.contains(&o) {
                let ids = face.vertices.iter().filter(|&&v| v != o).map(|v| to_ray[v]).collect();
                out[k].push(Cone::new(ids));
            }
        }
    }
    if out.get(1).map(|l| l.len()).unwrap_or(0) != idx.len() {
        return Err(PolyhedraError::BadCone);
    }
    for level in &mut out {
        level.sort();
    }
    Ok(out)
}

/// Normal fan with outer facet normals as rays: the cone of a face `F` is
/// spanned by the normals of the facets containing `F`.
pub fn normal_fan(p: &Polytope) -> Result<NormalFan, PolyhedraError> {
    if !p.is_full_dimensional() {
        return Err(PolyhedraError::NotFullDimensional);
    }
    let d = p.dim;
    let rays: Vec<IntVec> = p.facets.iter().map(|f| f.normal.clone()).collect();
    let mut cones: Vec<Vec<Cone>> = vec![Vec::new(); d + 1];
    let mut dual_face: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d + 1];
    for (fd, level) in p.faces.iter().enumerate() {
        for (fi, face) in level.iter().enumerate() {
            let k = d - fd;
            cones[k].push(Cone::new(face.facets.clone()));
            dual_face[k].push((fd, fi));
        }
    }
    for k in 0..=d {
        let mut order: Vec<usize> = (0..cones[k].len()).collect();
        order.sort_by(|&a, &b| cones[k][a].cmp(&cones[k][b]));
        cones[k] = order.iter().map(|&i| cones[k][i].clone()).collect();
        dual_face[k] = order.iter().map(|&i| dual_face[k][i]).collect();
    }
    Ok(NormalFan { fan: Fan { ambient_dim: d, rays, cones }, dual_face })
}

/// Face fan of a full-dimensional polytope with the origin in its interior:
/// one cone over each proper face, rays through the (primitive) vertices.
pub fn face_fan(p: &Polytope) -> Result<Fan, PolyhedraError> {
    if !p.is_full_dimensional() {
        return Err(PolyhedraError::NotFullDimensional);
    }
    if p.facets.iter().any(|f| !f.offset.is_positive()) {
        return Err(PolyhedraError::OriginNotInterior);
    }
    let d = p.dim;
    let rays: Vec<IntVec> = p.vertices.iter().map(|v| primitive_of_rational(v)).collect();
    let mut cones: Vec<Vec<Cone>> = vec![vec![Cone::new(vec![])]];
    for level in p.faces.iter().take(d) {
        let mut l: Vec<Cone> = level.iter().map(|f| Cone::new(f.vertices.clone())).collect();
        l.sort();
        cones.push(l);
    }
    Ok(Fan { ambient_dim: d, rays, cones })
}

/// Pulling triangulation at the lowest-index ray: every cone `σ` is replaced by
/// the joins of its lowest ray with the triangulated facets of `σ` missing it.
/// The ray set is unchanged and the result lists all faces.
pub fn triangulate_fan(fan: &Fan) -> Fan {
    let top = fan.dim();
    let sets: Vec<Vec<BTreeSet<usize>>> =
        fan.cones.iter().map(|l| l.iter().map(|c| c.rays.iter().copied().collect()).collect()).collect();
    let mut memo: HashMap<(usize, usize), Vec<Vec<usize>>> = HashMap::new();
    let mut out: Vec<BTreeSet<Cone>> = vec![BTreeSet::new(); top + 1];
    for k in 0..=top {
        for i in 0..fan.cones[k].len() {
            let is_face_of_larger = k < top && sets[k + 1].iter().any(|s| sets[k][i].is_subset(s));
            if is_face_of_larger {
                continue;
            }
            for simplex in pull(fan, &sets, k, i, &mut memo) {
                add_simplex_faces(&simplex, &mut out);
            }
        }
    }
    Fan {
        ambient_dim: fan.ambient_dim,
        rays: fan.rays.clone(),
        cones: out.into_iter().map(|s| s.into_iter().collect()).collect(),
    }
}

fn pull(
    fan: &Fan,
    sets: &[Vec<BTreeSet<usize>>],
    k: usize,
    i: usize,
    memo: &mut HashMap<(usize, usize), Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(v) = memo.get(&(k, i)) {
        return v.clone();
    }
    let rays = &fan.cones[k][i].rays;
    let result = if rays.len() == k {
        vec![rays.clone()]
    } else {
        let apex = rays[0];
        let mut acc = Vec::new();
        for j in 0..fan.cones[k - 1].len() {
            let f = &sets[k - 1][j];
            if f.contains(&apex) || !f.is_subset(&sets[k][i]) {
                continue;
            }
            for mut s in pull(fan, sets, k - 1, j, memo) {
                s.push(apex);
                s.sort_unstable();
                acc.push(s);
            }
        }
        acc.sort();
        acc
    };
    memo.insert((k, i), result.clone());
    result
}

fn add_simplex_faces(simplex: &[usize], out: &mut [BTreeSet<Cone>]) {
    let k = simplex.len();
    for mask in 0u64..(1u64 << k) {
        let sub: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| simplex[b]).collect();
        out[sub.len()].insert(Cone { rays: sub });
    }
}
