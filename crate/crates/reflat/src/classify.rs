//! Complete classification of reflexive classes in low dimension.
//!
//! Every reflexive polytope is a subpolytope of a maximal one, and the
//! maximal polytopes are Newton polytopes of weight systems, combined
//! weight matrices, and their admissible sublattice quotients. The run
//! seeds those ancestors and explores all subpolytopes that keep the
//! origin strictly interior, deduplicating by canonical key and linking
//! every reflexive class to its polar dual.

use std::collections::{BTreeMap, HashSet};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::db::ClassDatabase;
use crate::error::{Error, Result};
use crate::linalg::{self, Veci};
use crate::normal_form::{affine_normal_form, linear_normal_form, NormalFormKey};
use crate::polytope::Polytope;
use crate::weights::{
    enumerate_ip_weights, newton_polytope_quotient, parse_weight_line, WeightInput,
    WeightMatrix,
};

/// A candidate maximal polytope together with the weight input it came
/// from. Candidates are reflexive with interior point 0; whether they are
/// actually maximal is decided by the classification run.
#[derive(Clone, Debug)]
pub struct MaximalAncestor {
    pub source: WeightInput,
    pub polytope: Polytope,
    pub key: NormalFormKey,
}

/// Ancestor candidates for a complete classification: Newton polytopes of
/// all IP weight systems, of the combined weight matrices built from
/// lower-dimensional weights with overlapping supports, and (for d=3) the
/// order-2 quotient of the degree-4 simplex.
pub fn maximal_polytopes(d: usize) -> Result<Vec<MaximalAncestor>> {
    let mut inputs: Vec<WeightInput> = Vec::new();
    match d {
        1 => inputs.push(parse_weight_line("2 1 1")?),
        2 => {
            for line in ["3 1 1 1", "4 1 1 2", "6 1 2 3", "2 1 0 1 0 2 0 1 0 1"] {
                inputs.push(parse_weight_line(line)?);
            }
        }
        3 => {
            inputs.push(parse_weight_line("4 1 1 1 1 /Z2: 0 1 0 1")?);
            for ws in enumerate_ip_weights(3)? {
                inputs.push(WeightInput {
                    matrix: WeightMatrix::from_system(&ws),
                    quotient: None,
                });
            }
            for m in combined_weight_matrices(3) {
                inputs.push(WeightInput { matrix: m, quotient: None });
            }
        }
        _ => return Err(Error::UnsupportedDimension(d)),
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for input in inputs {
        let Ok(p) = newton_polytope_quotient(&input.matrix, input.quotient.as_ref()) else {
            continue;
        };
        if !p.is_full_dimensional()
            || p.interior_point().map_or(true, |ip| ip.iter().any(|&x| x != 0))
            || !p.is_reflexive()
        {
            continue;
        }
        let key = linear_normal_form(&p)?;
        if seen.insert(key.clone()) {
            out.push(MaximalAncestor { source: input, polytope: p, key });
        }
    }
    Ok(out)
}

/// All full-rank weight matrices with `d + nrows` columns whose rows are
/// lower-dimensional weight systems with supports covering every column:
/// the relation structures of minimal polytopes that are not simplices.
/// Returned up to row and column permutation.
fn combined_weight_matrices(d: usize) -> Vec<WeightMatrix> {
    let parts: [&[i128]; 4] = [&[1, 1], &[1, 1, 1], &[1, 1, 2], &[1, 2, 3]];
    let mut canon_seen: HashSet<Vec<Veci>> = HashSet::new();
    let mut out = Vec::new();
    for nrows in 2..=d {
        let ncols = d + nrows;
        let mut rows: Vec<Veci> = Vec::new();
        fill_rows(&parts, nrows, ncols, &mut rows, &mut |rows| {
            let covered = (0..ncols).all(|j| rows.iter().any(|r| r[j] != 0));
            if !covered {
                return;
            }
            let Ok(m) = WeightMatrix::new(rows.to_vec()) else { return };
            if canon_seen.insert(canonical_matrix(rows)) {
                out.push(m);
            }
        });
    }
    out
}

/// Recursively append rows; each row is a weight placed on a support. The
/// first row's support is pinned to the leading columns (column order is
/// free), later supports range over all column subsets.
fn fill_rows(
    parts: &[&[i128]],
    nrows: usize,
    ncols: usize,
    rows: &mut Vec<Veci>,
    emit: &mut impl FnMut(&[Veci]),
) {
    if rows.len() == nrows {
        emit(rows);
        return;
    }
    let first = rows.is_empty();
    for w in parts {
        for placed in placements(w, ncols, first) {
            rows.push(placed);
            fill_rows(parts, nrows, ncols, rows, emit);
            rows.pop();
        }
    }
}

/// All ways to place the entries of `w` on distinct columns. For the first
/// row only the leading-column placements are generated, since a global
/// column permutation is free.
fn placements(w: &[i128], ncols: usize, leading_only: bool) -> Vec<Veci> {
    let mut out = Vec::new();
    let mut slots: Vec<usize> = Vec::new();
    fn rec(
        w: &[i128],
        ncols: usize,
        slots: &mut Vec<usize>,
        out: &mut Vec<Veci>,
    ) {
        if slots.len() == w.len() {
            let mut row = vec![0i128; ncols];
            for (e, &j) in w.iter().zip(slots.iter()) {
                row[j] = *e;
            }
            if !out.contains(&row) {
                out.push(row);
            }
            return;
        }
        for j in 0..ncols {
            if !slots.contains(&j) {
                slots.push(j);
                rec(w, ncols, slots, out);
                slots.pop();
            }
        }
    }
    if leading_only {
        // entries permuted over the first |w| columns only
        fn rec_lead(w: &[i128], used: &mut Vec<usize>, ncols: usize, out: &mut Vec<Veci>) {
            if used.len() == w.len() {
                let mut row = vec![0i128; ncols];
                for (e, &j) in w.iter().zip(used.iter()) {
                    row[j] = *e;
                }
                if !out.contains(&row) {
                    out.push(row);
                }
                return;
            }
            for j in 0..w.len() {
                if !used.contains(&j) {
                    used.push(j);
                    rec_lead(w, used, ncols, out);
                    used.pop();
                }
            }
        }
        rec_lead(w, &mut slots, ncols, &mut out);
    } else {
        rec(w, ncols, &mut slots, &mut out);
    }
    out
}

/// Invariant of a weight matrix under row and column permutation: the
/// lexicographically smallest matrix over row orders with columns sorted.
fn canonical_matrix(rows: &[Veci]) -> Vec<Veci> {
    let mut best: Option<Vec<Veci>> = None;
    let mut order: Vec<usize> = (0..rows.len()).collect();
    permute(&mut order, 0, &mut |order| {
        let ncols = rows[0].len();
        let mut cols: Vec<Veci> = (0..ncols)
            .map(|j| order.iter().map(|&i| rows[i][j]).collect())
            .collect();
        cols.sort();
        if best.as_ref().map_or(true, |b| cols < *b) {
            best = Some(cols);
        }
    });
    best.expect("nonempty matrix")
}

fn permute(order: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == order.len() {
        visit(order);
        return;
    }
    for i in k..order.len() {
        order.swap(k, i);
        permute(order, k + 1, visit);
        order.swap(k, i);
    }
}

/// State of a classification run: canonical keys of everything visited,
/// dual links of the reflexive classes, and the ancestor keys seen as
/// proper subpolytopes (used to decide which ancestors are maximal). The
/// frontier holds keys only; polytopes are rebuilt from their canonical
/// form at expansion, which keeps the memory footprint of large runs flat.
#[derive(Clone, Debug)]
pub struct ClassRun {
    dim: usize,
    seen: HashSet<NormalFormKey>,
    pairs: BTreeMap<NormalFormKey, NormalFormKey>,
    ancestor_keys: Vec<NormalFormKey>,
    ancestors_hit: HashSet<NormalFormKey>,
    frontier: Vec<NormalFormKey>,
    p: usize,
    m: usize,
    s: usize,
}

/// Classes found, complete dual pairs found, self-dual classes found.
pub type ProgressFn<'a> = &'a (dyn Fn(usize, usize, usize) + Sync);

impl ClassRun {
    pub fn new(dim: usize) -> ClassRun {
        ClassRun {
            dim,
            seen: HashSet::new(),
            pairs: BTreeMap::new(),
            ancestor_keys: Vec::new(),
            ancestors_hit: HashSet::new(),
            frontier: Vec::new(),
            p: 0,
            m: 0,
            s: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reflexive classes found so far.
    pub fn class_count(&self) -> usize {
        self.p
    }

    /// Dual pairs with both members found.
    pub fn pair_count(&self) -> usize {
        self.m
    }

    pub fn self_dual_count(&self) -> usize {
        self.s
    }

    /// Ancestors whose class never appeared as a proper subpolytope.
    pub fn maximal_ancestors(&self) -> Vec<&NormalFormKey> {
        self.ancestor_keys
            .iter()
            .filter(|k| !self.ancestors_hit.contains(*k))
            .collect()
    }

    pub fn keys(&self) -> impl Iterator<Item = &NormalFormKey> {
        self.pairs.keys()
    }

    pub fn contains(&self, key: &NormalFormKey) -> bool {
        self.pairs.contains_key(key)
    }

    pub fn database(&self) -> Result<ClassDatabase> {
        ClassDatabase::from_dual_pairs(self.dim, &self.pairs)
    }

    /// Record a discovered class by key; reflexive discoveries get their
    /// dual linked and enqueued immediately.
    fn discover(&mut self, key: NormalFormKey, dual: Option<NormalFormKey>) {
        if !self.seen.insert(key.clone()) {
            return;
        }
        self.frontier.push(key.clone());
        if let Some(dual_key) = dual {
            self.p += 1;
            self.pairs.insert(key.clone(), dual_key.clone());
            if dual_key == key {
                self.s += 1;
            } else if self.seen.insert(dual_key.clone()) {
                self.pairs.insert(dual_key.clone(), key);
                self.p += 1;
                self.m += 1;
                self.frontier.push(dual_key);
            } else {
                self.m += 1;
            }
        }
    }

    fn seed(&mut self, a: &MaximalAncestor) -> Result<()> {
        let dual = a.polytope.dual_lattice()?;
        let dual_key = linear_normal_form(&dual)?;
        self.ancestor_keys.push(a.key.clone());
        self.discover(a.key.clone(), Some(dual_key));
        Ok(())
    }

    /// Expand the frontier to exhaustion, level by level.
    fn drain(&mut self, progress: Option<ProgressFn>) -> Result<()> {
        let ancestor_set: HashSet<NormalFormKey> =
            self.ancestor_keys.iter().cloned().collect();
        while !self.frontier.is_empty() {
            let level = std::mem::take(&mut self.frontier);
            let batches: Vec<Result<Vec<Child>>> =
                level.par_iter().map(|k| expand(k)).collect();
            for batch in batches {
                for c in batch? {
                    if ancestor_set.contains(&c.key) {
                        self.ancestors_hit.insert(c.key.clone());
                    }
                    self.discover(c.key, c.dual);
                }
            }
            if let Some(f) = progress {
                f(self.p, self.m, self.s);
            }
        }
        Ok(())
    }
}

struct Child {
    key: NormalFormKey,
    /// The dual's key, present iff the child is reflexive.
    dual: Option<NormalFormKey>,
}

/// Proper subpolytopes obtained by deleting one vertex from the canonical
/// representative, kept when the origin stays strictly interior.
fn expand(key: &NormalFormKey) -> Result<Vec<Child>> {
    let p = key.to_polytope()?;
    let pts = p.lattice_points().to_vec();
    let d = p.dim();
    let mut out = Vec::new();
    for v in p.vertices() {
        let cand: Vec<Veci> = pts.iter().filter(|q| *q != v).cloned().collect();
        let Ok(child) = Polytope::from_points(&cand, d) else { continue };
        if !child.is_full_dimensional() {
            continue;
        }
        let facets = child.facet_inequalities()?;
        if facets.iter().any(|f| f.lattice_distance() < 1) {
            continue;
        }
        let reflexive = facets.iter().all(|f| f.lattice_distance() == 1);
        let child_key = linear_normal_form(&child)?;
        let dual = if reflexive {
            Some(linear_normal_form(&child.dual_lattice()?)?)
        } else {
            None
        };
        out.push(Child { key: child_key, dual });
    }
    Ok(out)
}

/// Explore every subpolytope of one ancestor (shared deduplication keeps
/// repeated work across ancestors low).
pub fn enumerate_subpolytopes(a: &MaximalAncestor, mut run: ClassRun) -> Result<ClassRun> {
    run.seed(a)?;
    run.drain(None)?;
    Ok(run)
}

pub fn classify_reflexive(d: usize) -> Result<ClassRun> {
    classify_reflexive_with_progress(d, None)
}

/// Memoized complete runs, shared between the face tabulation and direct
/// classification queries; a 3d run is expensive enough to do only once
/// per process.
pub fn classify_reflexive_cached(d: usize) -> Result<std::sync::Arc<ClassRun>> {
    use std::sync::{Arc, Mutex as StdMutex, OnceLock};
    static CACHE: OnceLock<StdMutex<BTreeMap<usize, Arc<ClassRun>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| StdMutex::new(BTreeMap::new()));
    // the lock is held across the computation so that concurrent callers
    // never classify the same dimension twice
    let mut map = cache.lock().expect("no poisoned lock");
    if let Some(run) = map.get(&d) {
        return Ok(run.clone());
    }
    let run = Arc::new(classify_reflexive(d)?);
    map.insert(d, run.clone());
    Ok(run)
}

/// Complete classification of d-dimensional reflexive classes, d ≤ 3. The
/// progress callback receives (classes, complete pairs, self-duals) after
/// every completed search level.
pub fn classify_reflexive_with_progress(
    d: usize,
    progress: Option<ProgressFn>,
) -> Result<ClassRun> {
    let ancestors = maximal_polytopes(d)?;
    let mut run = ClassRun::new(d);
    for a in &ancestors {
        run.seed(a)?;
    }
    run.drain(progress)?;
    // a complete run is closed under duality; this fails loudly otherwise
    run.database()?;
    Ok(run)
}

/// Canonical keys of all reflexive polygons whose vertices fit in
/// [−bound, bound]²: an independent oracle for the 2d classification. The
/// full set is reproduced for bound ≥ 3 (larger bounds add nothing).
pub fn brute_force_reflexive_2d(bound: i128) -> HashSet<NormalFormKey> {
    // vertices of a reflexive polygon are primitive (they lie on a
    // distance-1 facet), and a reflexive polygon has at most 6 vertices
    let mut pts: Vec<Veci> = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            if (x, y) != (0, 0) && linalg::gcd(x, y) == 1 {
                pts.push(vec![x, y]);
            }
        }
    }
    let found = Mutex::new(HashSet::new());
    pts.par_iter().enumerate().for_each(|(i, first)| {
        let mut subset = vec![first.clone()];
        grow_convex(&pts, i, &mut subset, &found);
    });
    found.into_inner().expect("no poisoned lock")
}

/// Depth-first growth of subsets in convex position; every subset of a
/// convex-position set that loses a vertex is pruned, which keeps the
/// search far below the raw number of subsets.
fn grow_convex(
    pts: &[Veci],
    last: usize,
    subset: &mut Vec<Veci>,
    found: &Mutex<HashSet<NormalFormKey>>,
) {
    if subset.len() >= 3 {
        if let Ok(p) = Polytope::from_points(subset, 2) {
            if p.vertices().len() == subset.len()
                && p.is_full_dimensional()
                && p.interior_point().is_some_and(|ip| ip.iter().all(|&x| x == 0))
                && p.facet_inequalities()
                    .is_ok_and(|fs| fs.iter().all(|f| f.lattice_distance() == 1))
            {
                let key = linear_normal_form(&p).expect("centered IP polygon");
                found.lock().expect("no poisoned lock").insert(key);
            }
        }
    }
    if subset.len() == 6 {
        return;
    }
    for j in last + 1..pts.len() {
        subset.push(pts[j].clone());
        if in_convex_position(subset) {
            grow_convex(pts, j, subset, found);
        }
        subset.pop();
    }
}

fn in_convex_position(pts: &[Veci]) -> bool {
    if pts.len() < 3 {
        return true;
    }
    match Polytope::from_points(pts, 2) {
        Ok(p) => p.vertices().len() == pts.len(),
        // lower-dimensional subsets may still grow into polygons
        Err(_) => pts.len() <= 2,
    }
}

/// For each k ≤ max_rd: the classes of d-dimensional faces of reflexive
/// k-polytopes (affine equivalence), counted without the classes already
/// occurring for smaller k. Row k lists the counts for d = 1..=k.
pub fn classify_by_reflexive_dimension(max_rd: usize) -> Result<Vec<Vec<usize>>> {
    if !(1..=3).contains(&max_rd) {
        return Err(Error::UnsupportedDimension(max_rd));
    }
    let mut per_k: Vec<Vec<HashSet<NormalFormKey>>> = Vec::new();
    for k in 1..=max_rd {
        let run = classify_reflexive_cached(k)?;
        let keys: Vec<&NormalFormKey> = run.keys().collect();
        let sets = Mutex::new(vec![HashSet::new(); k]);
        let results: Vec<Result<()>> = keys
            .par_iter()
            .map(|key| {
                let poly = key.to_polytope()?;
                let faces = faces_by_dim(&poly)?;
                let mut local: Vec<Vec<NormalFormKey>> = vec![Vec::new(); k];
                for (fd, members) in faces.iter().enumerate() {
                    if fd == 0 || fd > k {
                        continue;
                    }
                    for verts in members {
                        let fp = Polytope::from_points(verts, poly.dim())?;
                        local[fd - 1].push(affine_normal_form(&fp));
                    }
                }
                let mut sets = sets.lock().expect("no poisoned lock");
                for (s, l) in sets.iter_mut().zip(local) {
                    s.extend(l);
                }
                Ok(())
            })
            .collect();
        for r in results {
            r?;
        }
        per_k.push(sets.into_inner().expect("no poisoned lock"));
    }
    let mut table = Vec::new();
    for k in 1..=max_rd {
        let mut row = Vec::new();
        for d in 1..=k {
            let mine = &per_k[k - 1][d - 1];
            let n = mine
                .iter()
                .filter(|key| {
                    !per_k[..k - 1].iter().any(|earlier| {
                        earlier.get(d - 1).is_some_and(|s| s.contains(*key))
                    })
                })
                .count();
            row.push(n);
        }
        table.push(row);
    }
    Ok(table)
}

/// All faces of a full-dimensional polytope, grouped by face dimension;
/// each face is given by its vertex list in ambient coordinates. Index d
/// holds the d-faces; the polytope itself is included at its dimension.
pub fn faces_by_dim(p: &Polytope) -> Result<Vec<Vec<Vec<Veci>>>> {
    use crate::polytope::AffineChart;
    let dim = p.dim();
    let mut by_dim: Vec<Vec<Vec<Veci>>> = vec![Vec::new(); dim + 1];
    let mut seen: HashSet<Vec<Veci>> = HashSet::new();
    let mut level: Vec<Vec<Veci>> = vec![p.vertices().to_vec()];
    seen.insert(p.vertices().to_vec());
    let mut level_dim = dim;
    by_dim[dim] = level.clone();
    while level_dim > 0 {
        let mut next: Vec<Vec<Veci>> = Vec::new();
        for verts in &level {
            let chart = AffineChart::spanning(verts, dim);
            let proj: Vec<Veci> = verts
                .iter()
                .map(|v| chart.project(v).expect("face vertex on its own chart"))
                .collect();
            let fp = Polytope::from_points(&proj, chart.rank())?;
            if chart.rank() == 0 {
                continue;
            }
            for f in fp.facet_inequalities()? {
                let mut sub: Vec<Veci> = proj
                    .iter()
                    .zip(verts)
                    .filter(|(q, _)| f.eval(q) == 0)
                    .map(|(_, v)| v.clone())
                    .collect();
                sub.sort();
                if seen.insert(sub.clone()) {
                    by_dim[level_dim - 1].push(sub.clone());
                    next.push(sub);
                }
            }
        }
        level = next;
        level_dim -= 1;
    }
    Ok(by_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::format_weight_line;

    #[test]
    fn one_dimensional_run_is_a_single_self_dual_segment() {
        let run = classify_reflexive(1).unwrap();
        assert_eq!(run.class_count(), 1);
        assert_eq!(run.self_dual_count(), 1);
        assert_eq!(run.maximal_ancestors().len(), 1);
        let key = run.keys().next().unwrap();
        let seg = key.to_polytope().unwrap();
        assert_eq!(seg.lattice_points().len(), 3);
    }

    #[test]
    fn two_dimensional_run_matches_known_counts() {
        let run = classify_reflexive(2).unwrap();
        assert_eq!(run.class_count(), 16);
        assert_eq!(run.self_dual_count(), 4);
        assert_eq!(run.pair_count(), 6);
        assert_eq!(run.maximal_ancestors().len(), 3);
        let db = run.database().unwrap();
        assert_eq!(db.len(), 16);
        assert_eq!(db.self_dual_count(), 4);
    }

    #[test]
    fn two_dimensional_run_agrees_with_brute_force() {
        let run = classify_reflexive(2).unwrap();
        let oracle = brute_force_reflexive_2d(3);
        assert_eq!(oracle.len(), 16);
        let keys: HashSet<NormalFormKey> = run.keys().cloned().collect();
        assert_eq!(keys, oracle);
    }

    #[test]
    fn two_dimensional_maximal_classes_are_the_expected_three() {
        let run = classify_reflexive(2).unwrap();
        let maximal: HashSet<&NormalFormKey> =
            run.maximal_ancestors().into_iter().collect();
        let mut expected = HashSet::new();
        let anc = maximal_polytopes(2).unwrap();
        let lines: Vec<String> =
            anc.iter().map(|a| format_weight_line(&a.source)).collect();
        for (a, line) in anc.iter().zip(&lines) {
            if line.starts_with("3 1 1 1")
                || line.starts_with("4 1 1 2")
                || line.starts_with("2 1 0 1 0")
            {
                expected.insert(&a.key);
            }
        }
        assert_eq!(maximal, expected, "sources: {lines:?}");
    }

    #[test]
    fn ancestors_are_deduplicated_and_reflexive() {
        for d in [1usize, 2] {
            let anc = maximal_polytopes(d).unwrap();
            let keys: HashSet<&NormalFormKey> = anc.iter().map(|a| &a.key).collect();
            assert_eq!(keys.len(), anc.len());
            for a in &anc {
                assert!(a.polytope.is_reflexive());
            }
        }
    }

    #[test]
    fn combined_matrices_for_3d_contain_the_cube_structure() {
        let ms = combined_weight_matrices(3);
        // three disjoint segments: the relation structure of the octahedron
        let cube = ms.iter().any(|m| {
            m.nrows() == 3
                && m.ncols() == 6
                && {
                    let p = crate::weights::newton_polytope(m).unwrap();
                    p.is_reflexive() && p.lattice_points().len() == 27
                }
        });
        assert!(cube);
    }

    #[test]
    fn face_lattice_of_the_square() {
        let square = Polytope::from_points(
            &[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]],
            2,
        )
        .unwrap();
        let faces = faces_by_dim(&square).unwrap();
        assert_eq!(faces[2].len(), 1);
        assert_eq!(faces[1].len(), 4);
        assert_eq!(faces[0].len(), 4);
    }

    #[test]
    fn reflexive_dimension_table_low_rows() {
        let table = classify_by_reflexive_dimension(2).unwrap();
        assert_eq!(table, vec![vec![1], vec![3, 16]]);
    }
}
