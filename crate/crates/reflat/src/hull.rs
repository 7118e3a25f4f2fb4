//! Exact incremental convex hull in low dimension.
//!
//! Facets are stored as `normal · x <= rhs` with primitive integer normals
//! and carry the indices of every processed input point lying on them, which
//! is what makes ridge detection between a visible and an invisible facet a
//! set-intersection problem. Handles non-simplicial facets directly.

use crate::error::{Error, Result};
use crate::linalg::{self, Veci};

#[derive(Clone, Debug)]
pub struct Facet {
    /// Primitive outer normal; the facet satisfies `normal · x = rhs`,
    /// the polytope `normal · x <= rhs`.
    pub normal: Veci,
    pub rhs: i128,
    /// Indices (into `Hull::points`) of the points on this facet.
    pub on: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Hull {
    pub dim: usize,
    /// Deduplicated input points.
    pub points: Vec<Veci>,
    pub facets: Vec<Facet>,
    /// Indices into `points` of the extreme points, sorted.
    pub vertex_indices: Vec<usize>,
}

/// Hull of a full-dimensional point set in `Z^dim`.
/// Fails with `DegenerateInput` when the affine span is a proper subspace.
pub fn convex_hull(input: &[Veci], dim: usize) -> Result<Hull> {
    assert!(dim >= 1, "dimension must be positive");
    let mut points: Vec<Veci> = Vec::new();
    for p in input {
        assert_eq!(p.len(), dim, "point dimension mismatch");
        if !points.contains(p) {
            points.push(p.clone());
        }
    }
    if dim == 1 {
        return hull_1d(points);
    }

    // greedily pick dim+1 affinely independent seed points
    let mut seed: Vec<usize> = Vec::new();
    for (i, _) in points.iter().enumerate() {
        if seed.is_empty() {
            seed.push(i);
            continue;
        }
        let mut diffs: Vec<Veci> = seed[1..]
            .iter()
            .map(|&j| linalg::sub(&points[j], &points[seed[0]]))
            .collect();
        diffs.push(linalg::sub(&points[i], &points[seed[0]]));
        if linalg::rank(&diffs) == diffs.len() {
            seed.push(i);
        }
        if seed.len() == dim + 1 {
            break;
        }
    }
    if seed.len() < dim + 1 {
        return Err(Error::DegenerateInput);
    }

    // rational reference point strictly inside: the seed simplex centroid,
    // stored as (coordinate sums, count)
    let mut centroid_num = vec![0i128; dim];
    for &i in &seed {
        centroid_num = linalg::add(&centroid_num, &points[i]);
    }
    let centroid_den = (dim + 1) as i128;

    let orient = |mut normal: Veci, mut rhs: i128| -> Facet {
        let lhs = linalg::dot(&normal, &centroid_num);
        let cmp = lhs.cmp(&linalg::cmul(rhs, centroid_den));
        match cmp {
            std::cmp::Ordering::Less => {}
            std::cmp::Ordering::Greater => {
                normal = linalg::neg(&normal);
                rhs = -rhs;
            }
            std::cmp::Ordering::Equal => unreachable!("reference point on a facet"),
        }
        Facet { normal, rhs, on: Vec::new() }
    };

    // initial simplex facets
    let mut facets: Vec<Facet> = Vec::new();
    for omit in 0..=dim {
        let face: Vec<&[i128]> = seed
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != omit)
            .map(|(_, &i)| points[i].as_slice())
            .collect();
        let (a, b) = linalg::hyperplane_through(&face).expect("seed facet is degenerate");
        facets.push(orient(a, b));
    }
    let mut processed: Vec<usize> = seed.clone();
    for f in facets.iter_mut() {
        f.on = processed
            .iter()
            .copied()
            .filter(|&i| linalg::dot(&f.normal, &points[i]) == f.rhs)
            .collect();
    }

    for i in 0..points.len() {
        if seed.contains(&i) {
            continue;
        }
        insert_point(&mut facets, &points, &processed, i, dim, &orient);
        processed.push(i);
    }

    facets.sort_by(|f, g| (&f.normal, f.rhs).cmp(&(&g.normal, g.rhs)));
    let vertex_indices = extreme_points(&facets, points.len(), dim);
    Ok(Hull { dim, points, facets, vertex_indices })
}

fn hull_1d(points: Vec<Veci>) -> Result<Hull> {
    let lo = points.iter().enumerate().min_by_key(|(_, p)| p[0]).map(|(i, _)| i);
    let hi = points.iter().enumerate().max_by_key(|(_, p)| p[0]).map(|(i, _)| i);
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::DegenerateInput);
    };
    if points[lo][0] == points[hi][0] {
        return Err(Error::DegenerateInput);
    }
    let facets = vec![
        Facet { normal: vec![-1], rhs: -points[lo][0], on: vec![lo] },
        Facet { normal: vec![1], rhs: points[hi][0], on: vec![hi] },
    ];
    let mut vertex_indices = vec![lo, hi];
    vertex_indices.sort_unstable();
    Ok(Hull { dim: 1, points, facets, vertex_indices })
}

fn insert_point(
    facets: &mut Vec<Facet>,
    points: &[Veci],
    processed: &[usize],
    idx: usize,
    dim: usize,
    orient: &dyn Fn(Veci, i128) -> Facet,
) {
    let p = &points[idx];
    let evals: Vec<i128> =
        facets.iter().map(|f| linalg::csub(linalg::dot(&f.normal, p), f.rhs)).collect();
    if evals.iter().all(|&e| e <= 0) {
        // inside or on the boundary of the current hull
        for (f, &e) in facets.iter_mut().zip(&evals) {
            if e == 0 {
                let pos = f.on.partition_point(|&j| j < idx);
                f.on.insert(pos, idx);
            }
        }
        return;
    }

    // horizon ridges: shared (dim-2)-dimensional faces between a visible
    // facet and a strictly invisible one
    let mut fresh: Vec<Facet> = Vec::new();
    for (fi, f) in facets.iter().enumerate() {
        if evals[fi] <= 0 {
            continue;
        }
        for (gi, g) in facets.iter().enumerate() {
            if evals[gi] >= 0 {
                continue;
            }
            let ridge: Vec<usize> =
                f.on.iter().copied().filter(|i| g.on.binary_search(i).is_ok()).collect();
            if ridge.len() < dim - 1 {
                continue;
            }
            let diffs: Vec<Veci> = ridge[1..]
                .iter()
                .map(|&i| linalg::sub(&points[i], &points[ridge[0]]))
                .collect();
            if linalg::rank(&diffs) != dim - 2 {
                continue;
            }
            let mut span: Vec<&[i128]> = ridge.iter().map(|&i| points[i].as_slice()).collect();
            span.push(p.as_slice());
            let Some((a, b)) = linalg::hyperplane_through(&span) else {
                continue;
            };
            let cand = orient(a, b);
            if !fresh.iter().any(|h| h.normal == cand.normal && h.rhs == cand.rhs) {
                fresh.push(cand);
            }
        }
    }

    let mut kept: Vec<Facet> = Vec::new();
    for (fi, f) in facets.drain(..).enumerate() {
        if evals[fi] < 0 {
            kept.push(f);
        } else if evals[fi] == 0 {
            let mut f = f;
            let pos = f.on.partition_point(|&j| j < idx);
            f.on.insert(pos, idx);
            kept.push(f);
        }
    }
    for mut h in fresh {
        if kept.iter().any(|f| f.normal == h.normal && f.rhs == h.rhs) {
            continue; // the plane of a coplanar survivor
        }
        h.on = processed
            .iter()
            .copied()
            .chain(std::iter::once(idx))
            .filter(|&i| linalg::dot(&h.normal, &points[i]) == h.rhs)
            .collect();
        h.on.sort_unstable();
        kept.push(h);
    }
    *facets = kept;
}

fn extreme_points(facets: &[Facet], npoints: usize, dim: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..npoints {
        let normals: Vec<Veci> = facets
            .iter()
            .filter(|f| f.on.binary_search(&i).is_ok())
            .map(|f| f.normal.clone())
            .collect();
        if normals.len() >= dim && linalg::rank(&normals) == dim {
            out.push(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hull_of(pts: &[&[i128]], dim: usize) -> Hull {
        convex_hull(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>(), dim).unwrap()
    }

    fn vertex_set(h: &Hull) -> Vec<Veci> {
        let mut v: Vec<Veci> = h.vertex_indices.iter().map(|&i| h.points[i].clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let h = hull_of(
            &[&[1, 1], &[0, 0], &[-1, -1], &[1, -1], &[-1, 1], &[1, 0], &[0, -1]],
            2,
        );
        assert_eq!(h.facets.len(), 4);
        assert_eq!(
            vertex_set(&h),
            vec![vec![-1, -1], vec![-1, 1], vec![1, -1], vec![1, 1]]
        );
        for f in &h.facets {
            assert_eq!(f.rhs, 1);
        }
    }

    #[test]
    fn triangle_facets_match_known_normals() {
        let h = hull_of(&[&[1, 0], &[0, 1], &[-1, -1]], 2);
        let mut got: Vec<(Veci, i128)> =
            h.facets.iter().map(|f| (f.normal.clone(), f.rhs)).collect();
        got.sort();
        // polytope form n·x >= -1 with normals (-1,-1), (2,-1), (-1,2)
        let mut want = vec![
            (vec![1, 1], 1),
            (vec![-2, 1], 1),
            (vec![1, -2], 1),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn octahedron_3d() {
        let h = hull_of(
            &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]],
            3,
        );
        assert_eq!(h.facets.len(), 8);
        assert_eq!(h.vertex_indices.len(), 6);
        for f in &h.facets {
            assert_eq!(f.rhs, 1);
            assert_eq!(f.normal.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1, 1]);
        }
    }

    #[test]
    fn cube_with_non_simplicial_facets() {
        let mut pts = Vec::new();
        for x in [-1i128, 1] {
            for y in [-1i128, 1] {
                for z in [-1i128, 1] {
                    pts.push(vec![x, y, z]);
                }
            }
        }
        pts.push(vec![0, 0, 0]);
        let h = convex_hull(&pts, 3).unwrap();
        assert_eq!(h.facets.len(), 6);
        assert_eq!(h.vertex_indices.len(), 8);
        for f in &h.facets {
            assert_eq!(f.on.len(), 4);
        }
    }

    #[test]
    fn degenerate_input_rejected() {
        let r = convex_hull(&[vec![0, 0], vec![1, 0], vec![2, 0]], 2);
        assert!(matches!(r, Err(Error::DegenerateInput)));
    }

    #[test]
    fn segment_1d() {
        let h = convex_hull(&[vec![4], vec![-2], vec![1]], 1).unwrap();
        assert_eq!(vertex_set(&h), vec![vec![-2], vec![4]]);
    }

    #[test]
    fn insertion_order_does_not_change_facets() {
        let base = vec![
            vec![2, -1, 0],
            vec![-1, 2, 0],
            vec![-1, -1, 3],
            vec![-1, -1, -1],
            vec![1, 1, -1],
            vec![0, 0, 1],
        ];
        let h1 = convex_hull(&base, 3).unwrap();
        let mut rev = base.clone();
        rev.reverse();
        let h2 = convex_hull(&rev, 3).unwrap();
        let key = |h: &Hull| {
            let mut v: Vec<(Veci, i128)> =
                h.facets.iter().map(|f| (f.normal.clone(), f.rhs)).collect();
            v.sort();
            v
        };
        assert_eq!(key(&h1), key(&h2));
        assert_eq!(vertex_set(&h1), vertex_set(&h2));
    }
}
