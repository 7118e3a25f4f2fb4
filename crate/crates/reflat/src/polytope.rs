//! Lattice polytopes: vertex representation with lazily cached facet
//! inequalities and lattice points, polar duality, and reflexivity tests.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::hull;
use crate::linalg::{self, Veci};

/// The halfspace `{x : normal · x >= -offset}` with a primitive normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfSpace {
    pub normal: Veci,
    pub offset: i128,
}

impl HalfSpace {
    /// Number of lattice hyperplane steps from the origin to the facet.
    pub fn lattice_distance(&self) -> i128 {
        self.offset
    }

    pub fn eval(&self, x: &[i128]) -> i128 {
        linalg::cadd(linalg::dot(&self.normal, x), self.offset)
    }
}

/// A lattice polytope in `Z^dim`, possibly of lower affine dimension.
/// Vertices are irredundant and lexicographically sorted, so equal vertex
/// sets compare equal.
#[derive(Debug)]
pub struct Polytope {
    dim: usize,
    affine_dim: usize,
    vertices: Vec<Veci>,
    /// Present exactly when the polytope is full-dimensional; sorted.
    facets: Option<Vec<HalfSpace>>,
    points: OnceLock<Vec<Veci>>,
    interior: OnceLock<Vec<Veci>>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope {
            dim: self.dim,
            affine_dim: self.affine_dim,
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
            points: self.points.clone(),
            interior: self.interior.clone(),
        }
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}
impl Eq for Polytope {}

impl Polytope {
    /// Convex hull of a nonempty point set.
    pub fn from_points(points: &[Veci], dim: usize) -> Result<Polytope> {
        if points.is_empty() {
            return Err(Error::Parse("empty point set".into()));
        }
        for p in points {
            if p.len() != dim {
                return Err(Error::Parse(format!(
                    "point of length {} in dimension {}",
                    p.len(),
                    dim
                )));
            }
        }
        let p0 = &points[0];
        let diffs: Vec<Veci> = points[1..].iter().map(|p| linalg::sub(p, p0)).collect();
        let affine_dim = linalg::rank(&diffs);
        if affine_dim == dim {
            let h = hull::convex_hull(points, dim)?;
            let mut vertices: Vec<Veci> =
                h.vertex_indices.iter().map(|i| h.points[*i].clone()).collect();
            vertices.sort();
            let mut facets: Vec<HalfSpace> = h
                .facets
                .iter()
                .map(|f| HalfSpace { normal: linalg::neg(&f.normal), offset: f.rhs })
                .collect();
            facets.sort();
            return Ok(Polytope {
                dim,
                affine_dim,
                vertices,
                facets: Some(facets),
                points: OnceLock::new(),
                interior: OnceLock::new(),
            });
        }
        if affine_dim == 0 {
            return Ok(Polytope {
                dim,
                affine_dim,
                vertices: vec![p0.clone()],
                facets: None,
                points: OnceLock::new(),
                interior: OnceLock::new(),
            });
        }
        // lower-dimensional: find the extreme points in projected coordinates
        let chart = AffineChart::spanning(points, dim);
        let projected: Vec<Veci> =
            points.iter().map(|p| chart.project(p).expect("point in affine hull")).collect();
        let h = hull::convex_hull(&projected, affine_dim)?;
        let mut vertices: Vec<Veci> =
            h.vertex_indices.iter().map(|i| chart.lift(&h.points[*i])).collect();
        vertices.sort();
        Ok(Polytope {
            dim,
            affine_dim,
            vertices,
            facets: None,
            points: OnceLock::new(),
            interior: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn vertices(&self) -> &[Veci] {
        &self.vertices
    }

    /// Minimal irredundant H-representation, primitive normals, sorted.
    pub fn facet_inequalities(&self) -> Result<&[HalfSpace]> {
        self.facets.as_deref().ok_or(Error::DegenerateInput)
    }

    /// All lattice points, lexicographically ordered.
    pub fn lattice_points(&self) -> &[Veci] {
        self.points.get_or_init(|| self.compute_points())
    }

    /// Strictly interior lattice points (empty for lower-dimensional input),
    /// lexicographically ordered.
    pub fn interior_lattice_points(&self) -> &[Veci] {
        self.interior.get_or_init(|| {
            let Some(facets) = self.facets.as_deref() else {
                return Vec::new();
            };
            self.lattice_points()
                .iter()
                .filter(|p| facets.iter().all(|f| f.eval(p) > 0))
                .cloned()
                .collect()
        })
    }

    fn compute_points(&self) -> Vec<Veci> {
        match &self.facets {
            Some(facets) => {
                let mut out = Vec::new();
                let mut cursor: Veci = (0..self.dim)
                    .map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap())
                    .collect();
                let hi: Veci = (0..self.dim)
                    .map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap())
                    .collect();
                let lo = cursor.clone();
                'scan: loop {
                    if facets.iter().all(|f| f.eval(&cursor) >= 0) {
                        out.push(cursor.clone());
                    }
                    for i in (0..self.dim).rev() {
                        if cursor[i] < hi[i] {
                            cursor[i] += 1;
                            for j in i + 1..self.dim {
                                cursor[j] = lo[j];
                            }
                            continue 'scan;
                        }
                    }
                    break;
                }
                out
            }
            None => {
                if self.affine_dim == 0 {
                    return vec![self.vertices[0].clone()];
                }
                let chart = AffineChart::spanning(&self.vertices, self.dim);
                let projected: Vec<Veci> = self
                    .vertices
                    .iter()
                    .map(|v| chart.project(v).expect("vertex in affine hull"))
                    .collect();
                let inner = Polytope::from_points(&projected, self.affine_dim)
                    .expect("projected polytope is full-dimensional");
                let mut pts: Vec<Veci> =
                    inner.lattice_points().iter().map(|p| chart.lift(p)).collect();
                pts.sort();
                pts
            }
        }
    }

    pub fn contains(&self, x: &[i128]) -> bool {
        match &self.facets {
            Some(facets) => facets.iter().all(|f| f.eval(x) >= 0),
            None => self.lattice_points().iter().any(|p| p == x),
        }
    }

    /// Exactly-one-interior-lattice-point test; the point itself on success.
    pub fn interior_point(&self) -> Option<&Veci> {
        match self.interior_lattice_points() {
            [p] => Some(p),
            _ => None,
        }
    }

    pub fn is_ip(&self) -> bool {
        self.interior_point().is_some()
    }

    pub fn translate(&self, t: &[i128]) -> Polytope {
        let mut vertices: Vec<Veci> = self.vertices.iter().map(|v| linalg::add(v, t)).collect();
        vertices.sort();
        let facets = self.facets.as_ref().map(|fs| {
            let mut fs: Vec<HalfSpace> = fs
                .iter()
                .map(|f| HalfSpace {
                    normal: f.normal.clone(),
                    offset: linalg::csub(f.offset, linalg::dot(&f.normal, t)),
                })
                .collect();
            fs.sort();
            fs
        });
        Polytope {
            dim: self.dim,
            affine_dim: self.affine_dim,
            vertices,
            facets,
            points: OnceLock::new(),
            interior: OnceLock::new(),
        }
    }

    /// Apply a linear map given by an integer matrix (rows of length dim).
    pub fn linear_image(&self, m: &[Veci]) -> Result<Polytope> {
        let vertices: Vec<Veci> = self
            .vertices
            .iter()
            .map(|v| m.iter().map(|row| linalg::dot(row, v)).collect())
            .collect();
        Polytope::from_points(&vertices, m.len())
    }

    /// Polar dual `{y : y · x >= -1 for all x}` with rational vertices.
    pub fn polar_dual(&self) -> Result<DualPolytope> {
        let facets = self.facets.as_deref().ok_or(Error::OriginNotInterior)?;
        if facets.iter().any(|f| f.offset <= 0) {
            return Err(Error::OriginNotInterior);
        }
        let vertices = facets
            .iter()
            .map(|f| {
                let g = linalg::gcd(linalg::gcd_slice(&f.normal), f.offset).max(1);
                (f.normal.iter().map(|x| x / g).collect(), f.offset / g)
            })
            .collect();
        Ok(DualPolytope { dim: self.dim, vertices })
    }

    /// IP with interior point 0 after translation, and every facet at
    /// lattice distance 1.
    pub fn is_reflexive(&self) -> bool {
        let Some(ip) = self.interior_point() else {
            return false;
        };
        let centered;
        let p = if ip.iter().all(|&x| x == 0) {
            self
        } else {
            centered = self.translate(&linalg::neg(ip));
            &centered
        };
        p.facets.as_deref().map_or(false, |fs| fs.iter().all(|f| f.offset == 1))
    }

    /// The dual as a lattice polytope; requires reflexivity (interior point
    /// already at 0).
    pub fn dual_lattice(&self) -> Result<Polytope> {
        if !self.is_reflexive() || self.interior_point().map_or(true, |p| p.iter().any(|&x| x != 0))
        {
            return Err(Error::NotReflexive);
        }
        let normals: Vec<Veci> =
            self.facet_inequalities()?.iter().map(|f| f.normal.clone()).collect();
        Polytope::from_points(&normals, self.dim)
    }
}

/// Dual polytope with rational vertices `(numerator, denominator)` in lowest
/// terms, denominators positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPolytope {
    pub dim: usize,
    pub vertices: Vec<(Veci, i128)>,
}

impl DualPolytope {
    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(|(_, den)| *den == 1)
    }

    pub fn to_lattice(&self) -> Option<Polytope> {
        if !self.is_lattice() {
            return None;
        }
        let pts: Vec<Veci> = self.vertices.iter().map(|(n, _)| n.clone()).collect();
        Polytope::from_points(&pts, self.dim).ok()
    }
}

/// Lattice-preserving chart between an affine sublattice of `Z^dim` and
/// `Z^k`: `x = base + B c` with `B` a saturated basis of the difference span.
pub struct AffineChart {
    base: Veci,
    basis: Vec<Veci>,
}

impl AffineChart {
    pub fn spanning(points: &[Veci], dim: usize) -> AffineChart {
        let base = points[0].clone();
        let diffs: Vec<Veci> = points[1..].iter().map(|p| linalg::sub(p, &base)).collect();
        let basis = linalg::saturated_span_basis(&diffs, dim);
        AffineChart { base, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a lattice point of the affine hull; `None` outside.
    pub fn project(&self, x: &[i128]) -> Option<Veci> {
        linalg::solve_integral(&self.basis, &linalg::sub(x, &self.base))
    }

    pub fn lift(&self, c: &[i128]) -> Veci {
        let mut out = self.base.clone();
        for (ci, b) in c.iter().zip(&self.basis) {
            for (o, bi) in out.iter_mut().zip(b) {
                *o = linalg::cadd(*o, linalg::cmul(*ci, *bi));
            }
        }
        out
    }
}

/// Parse the text format: header "v d", then v rows of d integers.
pub fn parse_polytope(text: &str) -> Result<Polytope> {
    let mut nums = text.split_whitespace().map(|t| {
        t.parse::<i128>().map_err(|_| Error::Parse(format!("bad integer {t:?}")))
    });
    let mut next = |what: &str| {
        nums.next().unwrap_or_else(|| Err(Error::Parse(format!("missing {what}"))))
    };
    let v = next("vertex count")?;
    let d = next("dimension")?;
    if v < 1 || d < 1 || d > 16 {
        return Err(Error::Parse(format!("bad header {v} {d}")));
    }
    let (v, d) = (v as usize, d as usize);
    let mut rows = Vec::with_capacity(v);
    for _ in 0..v {
        let mut row = Vec::with_capacity(d);
        for _ in 0..d {
            row.push(next("coordinate")?);
        }
        rows.push(row);
    }
    if next("end").is_ok() {
        return Err(Error::Parse("trailing data after vertex rows".into()));
    }
    Polytope::from_points(&rows, d)
}

pub fn format_polytope(p: &Polytope) -> String {
    let mut out = format!("{} {}\n", p.vertices().len(), p.dim());
    for v in p.vertices() {
        let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
