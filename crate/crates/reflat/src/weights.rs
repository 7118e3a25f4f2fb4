//! Weight systems and matrices: relations of IP simplices, Newton
//! polytopes on the degree slice, and enumeration of IP weights.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::{self, Veci};
use crate::polytope::Polytope;

/// A primitive positive relation `Σ w_j v_j = 0` of simplex vertices,
/// with degree `D = Σ w_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSystem {
    pub weights: Veci,
    pub degree: i128,
}

impl WeightSystem {
    pub fn new(weights: Veci) -> Result<WeightSystem> {
        if weights.is_empty() || weights.iter().any(|&w| w < 1) {
            return Err(Error::InvalidWeight("weights must be positive".into()));
        }
        if linalg::gcd_slice(&weights) != 1 {
            return Err(Error::InvalidWeight("weights must be coprime".into()));
        }
        let degree = weights.iter().copied().fold(0i128, linalg::cadd);
        Ok(WeightSystem { weights, degree })
    }
}

/// Stacked weight systems (rows zero-padded to a common length), the
/// relations of a non-simplicial minimal polytope. Rows are linearly
/// independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    pub rows: Vec<Veci>,
    pub degrees: Veci,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Veci>) -> Result<WeightMatrix> {
        let bad = |m: &str| Error::InvalidWeight(m.into());
        if rows.is_empty() || rows[0].is_empty() {
            return Err(bad("empty weight matrix"));
        }
        let ncols = rows[0].len();
        let mut degrees = Vec::with_capacity(rows.len());
        for row in &rows {
            if row.len() != ncols {
                return Err(bad("ragged weight matrix"));
            }
            if row.iter().any(|&w| w < 0) || row.iter().all(|&w| w == 0) {
                return Err(bad("rows must be nonzero and nonnegative"));
            }
            degrees.push(row.iter().copied().fold(0i128, linalg::cadd));
        }
        if linalg::rank(&rows) != rows.len() {
            return Err(bad("rows must be linearly independent"));
        }
        Ok(WeightMatrix { rows, degrees })
    }

    pub fn from_system(ws: &WeightSystem) -> WeightMatrix {
        WeightMatrix { rows: vec![ws.weights.clone()], degrees: vec![ws.degree] }
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
}

/// A cyclic sublattice restriction `Σ a_j m_j ≡ Σ a_j (mod order)` on the
/// monomial lattice of a Newton polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub order: i128,
    pub action: Veci,
}

/// One parsed weight line: a matrix plus an optional quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightInput {
    pub matrix: WeightMatrix,
    pub quotient: Option<Quotient>,
}

/// Parse "D w_1 … w_J [D w … ]… [/Zn: a_1 … a_J]". Each group is read
/// until its weights sum to the leading degree; trailing zero padding is
/// absorbed into the current row (a degree is never zero).
pub fn parse_weight_line(line: &str) -> Result<WeightInput> {
    let bad = |m: String| Error::Parse(m);
    let (body, quot_text) = match line.find("/Z") {
        Some(i) => (&line[..i], Some(&line[i..])),
        None => (line, None),
    };
    let mut toks = body.split_whitespace().peekable();
    let mut rows: Vec<Veci> = Vec::new();
    while let Some(t) = toks.next() {
        let degree: i128 =
            t.parse().map_err(|_| bad(format!("bad degree {t:?}")))?;
        if degree < 1 {
            return Err(bad(format!("degree must be positive, got {degree}")));
        }
        let mut row = Vec::new();
        let mut sum = 0i128;
        while sum < degree {
            let t = toks.next().ok_or_else(|| bad("weights do not reach the degree".into()))?;
            let w: i128 = t.parse().map_err(|_| bad(format!("bad weight {t:?}")))?;
            if w < 0 {
                return Err(bad("negative weight".into()));
            }
            sum = linalg::cadd(sum, w);
            row.push(w);
        }
        if sum != degree {
            return Err(bad(format!("weights sum to {sum}, expected {degree}")));
        }
        while toks.peek() == Some(&"0") {
            toks.next();
            row.push(0);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad("empty weight line".into()));
    }
    let ncols = rows.iter().map(|r| r.len()).max().unwrap();
    for row in rows.iter_mut() {
        row.resize(ncols, 0);
    }
    let matrix = WeightMatrix::new(rows)?;
    let quotient = match quot_text {
        None => None,
        Some(q) => {
            let rest = q.strip_prefix("/Z").unwrap();
            let (n, acts) =
                rest.split_once(':').ok_or_else(|| bad("missing ':' after /Zn".into()))?;
            let order: i128 =
                n.trim().parse().map_err(|_| bad(format!("bad quotient order {n:?}")))?;
            if order < 2 {
                return Err(bad("quotient order must be at least 2".into()));
            }
            let action: Veci = acts
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad(format!("bad quotient entry {t:?}"))))
                .collect::<Result<_>>()?;
            if action.len() != ncols {
                return Err(bad(format!(
                    "quotient action has {} entries for {} columns",
                    action.len(),
                    ncols
                )));
            }
            Some(Quotient { order, action })
        }
    };
    Ok(WeightInput { matrix, quotient })
}

pub fn format_weight_line(input: &WeightInput) -> String {
    let mut s = String::new();
    for (row, d) in input.matrix.rows.iter().zip(&input.matrix.degrees) {
        if !s.is_empty() {
            s.push(' ');
        }
        s.push_str(&d.to_string());
        for w in row {
            s.push(' ');
            s.push_str(&w.to_string());
        }
    }
    if let Some(q) = &input.quotient {
        s.push_str(&format!(" /Z{}:", q.order));
        for a in &q.action {
            s.push(' ');
            s.push_str(&a.to_string());
        }
    }
    s
}

/// The primitive positive relation among the vertices of a d-simplex with
/// the origin in its interior. Weight order follows the vertex order.
pub fn relation_from_simplex(s: &[Veci]) -> Result<WeightSystem> {
    if s.is_empty() {
        return Err(Error::NotSimplex);
    }
    let d = s[0].len();
    if s.len() != d + 1 {
        return Err(Error::NotSimplex);
    }
    let rows: Vec<Veci> = (0..d).map(|i| s.iter().map(|v| v[i]).collect()).collect();
    let kernel = linalg::integer_kernel_basis(&rows);
    if kernel.len() != 1 {
        return Err(Error::NotSimplex);
    }
    let mut w = kernel.into_iter().next().unwrap();
    linalg::make_primitive(&mut w);
    if w.iter().sum::<i128>() < 0 {
        w = linalg::neg(&w);
    }
    if w.iter().any(|&x| x <= 0) {
        return Err(Error::OriginNotInterior);
    }
    WeightSystem::new(w)
}

/// A witness simplex in `Z^d` realizing the relation on the lattice
/// generated by its vertices: the images of the standard basis under a
/// surjection `Z^{d+1} -> Z^d` whose kernel is spanned by the weights.
pub fn simplex_for_relation(ws: &WeightSystem) -> Polytope {
    let col: Vec<Veci> = ws.weights.iter().map(|&w| vec![w]).collect();
    let (h, u) = linalg::row_hnf_with_transform(&col);
    debug_assert_eq!(h[0], vec![1]);
    let d = ws.weights.len() - 1;
    let vertices: Vec<Veci> =
        (0..=d).map(|j| (1..=d).map(|i| u[i][j]).collect()).collect();
    Polytope::from_points(&vertices, d).expect("relation simplex is full-dimensional")
}

fn binomial(n: i128, k: usize) -> i128 {
    if n < k as i128 {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        acc = linalg::cmul(acc, n - i) / (i + 1);
    }
    acc
}

/// Number of interior lattice points of the simplex realizing the relation
/// on the lattice generated by its vertices (the coarsest possible lattice,
/// so the relation belongs to an IP simplex iff this count is 1).
///
/// Interior points lift to `m` in `Z^{d+1}` with `D m_j > w_j (Σm − 1)`
/// modulo shifts by `w`; grouping by `s = Σ m_j` in `1..=D` counts each
/// point once as a bounded composition.
pub fn relation_interior_count(ws: &WeightSystem) -> i128 {
    let d = ws.weights.len() - 1;
    let dd = ws.degree;
    let mut total: i128 = 0;
    for s in 1..=dd {
        let lsum: i128 = ws
            .weights
            .iter()
            .map(|&w| linalg::cmul(w, s - 1).div_euclid(dd) + 1)
            .fold(0, linalg::cadd);
        total = linalg::cadd(total, binomial(s - lsum + d as i128, d));
    }
    total
}

/// All nonnegative integer solutions of `W m = D` (the degree-slice
/// monomials), in lexicographic order.
fn slice_monomials(w: &WeightMatrix) -> Vec<Veci> {
    let ncols = w.ncols();
    let mut out = Vec::new();
    let mut m = vec![0i128; ncols];
    fn rec(
        w: &WeightMatrix,
        j: usize,
        rem: &mut Veci,
        m: &mut Veci,
        out: &mut Vec<Veci>,
    ) {
        let ncols = w.ncols();
        if j == ncols {
            if rem.iter().all(|&r| r == 0) {
                out.push(m.clone());
            }
            return;
        }
        // a row already exhausted of support forces its remainder to zero
        for (i, row) in w.rows.iter().enumerate() {
            if rem[i] != 0 && row[j..].iter().all(|&x| x == 0) {
                return;
            }
        }
        let mut cap = i128::MAX;
        for (i, row) in w.rows.iter().enumerate() {
            if row[j] > 0 {
                cap = cap.min(rem[i] / row[j]);
            }
        }
        if cap == i128::MAX {
            cap = 0; // column with all-zero weights carries no freedom
        }
        for v in 0..=cap {
            m[j] = v;
            for (i, row) in w.rows.iter().enumerate() {
                rem[i] -= v * row[j];
            }
            rec(w, j + 1, rem, m, out);
            for (i, row) in w.rows.iter().enumerate() {
                rem[i] += v * row[j];
            }
        }
        m[j] = 0;
    }
    let mut rem = w.degrees.clone();
    rec(w, 0, &mut rem, &mut m, &mut out);
    out
}

/// Newton polytope of a weight matrix, projected isomorphically onto the
/// degree-slice lattice (dimension J − I) so that the all-ones exponent
/// vector maps to the origin. An optional quotient restricts to the
/// sublattice where the action is trivial.
pub fn newton_polytope_quotient(
    w: &WeightMatrix,
    quotient: Option<&Quotient>,
) -> Result<Polytope> {
    let ones = vec![1i128; w.ncols()];
    let kernel = linalg::integer_kernel_basis(&w.rows);
    let basis: Vec<Veci> = match quotient {
        None => kernel,
        Some(q) => {
            // sublattice of the kernel where the action sums to 0 mod order
            let g: Veci = kernel.iter().map(|b| linalg::dot(&q.action, b)).collect();
            let mut row = g.clone();
            row.push(q.order);
            let sub = linalg::integer_kernel_basis(&[row]);
            sub.iter()
                .map(|c| {
                    let mut v = vec![0i128; w.ncols()];
                    for (ci, b) in c[..kernel.len()].iter().zip(&kernel) {
                        for (x, bi) in v.iter_mut().zip(b) {
                            *x = linalg::cadd(*x, linalg::cmul(*ci, *bi));
                        }
                    }
                    v
                })
                .collect()
        }
    };
    let mut projected = Vec::new();
    for m in slice_monomials(w) {
        let diff = linalg::sub(&m, &ones);
        if let Some(coords) = linalg::solve_integral(&basis, &diff) {
            projected.push(coords);
        }
    }
    if projected.is_empty() {
        return Err(Error::EmptyNewton);
    }
    Polytope::from_points(&projected, basis.len())
}

pub fn newton_polytope(w: &WeightMatrix) -> Result<Polytope> {
    newton_polytope_quotient(w, None)
}

/// Whether the Newton polytope is an IP polytope (full-dimensional with the
/// all-ones monomial as its only interior point).
pub fn is_ip_weight(w: &WeightMatrix) -> bool {
    match newton_polytope(w) {
        Ok(p) => {
            p.is_full_dimensional()
                && p.interior_point().is_some_and(|ip| ip.iter().all(|&x| x == 0))
        }
        Err(_) => false,
    }
}

/// A relation of a d-dimensional IP simplex, flagged by whether it is also
/// an IP weight (Newton polytope IP).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationEntry {
    pub ws: WeightSystem,
    pub ip_weight: bool,
}

/// Highest degree scanned per dimension; the enumerations stabilize well
/// below these bounds (degree 2 at d=1, 6 at d=2, 44 at d=3).
const RELATION_DEGREE_SCAN: [i128; 4] = [0, 4, 16, 80];

/// All primitive relations of d-dimensional IP simplices, sorted by
/// (degree, weights); weights ascending within each system.
pub fn enumerate_ip_simplex_relations(d: usize) -> Result<Vec<RelationEntry>> {
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut out = Vec::new();
    for degree in (d as i128 + 1)..=RELATION_DEGREE_SCAN[d] {
        let mut parts = vec![0i128; d + 1];
        ascending_partitions(degree, degree / 2, d + 1, 1, &mut parts, 0, &mut |w| {
            if linalg::gcd_slice(w) != 1 {
                return;
            }
            let ws = WeightSystem::new(w.to_vec()).unwrap();
            if relation_interior_count(&ws) == 1 {
                let ip_weight = is_ip_weight(&WeightMatrix::from_system(&ws));
                out.push(RelationEntry { ws, ip_weight });
            }
        });
    }
    out.sort_by(|a, b| (a.ws.degree, &a.ws.weights).cmp(&(b.ws.degree, &b.ws.weights)));
    Ok(out)
}

/// Ascending compositions `lo <= w_1 <= … <= w_k <= hi` with sum `total`.
fn ascending_partitions(
    total: i128,
    hi: i128,
    k: usize,
    lo: i128,
    buf: &mut Veci,
    pos: usize,
    f: &mut impl FnMut(&[i128]),
) {
    if pos == k {
        if total == 0 {
            f(buf);
        }
        return;
    }
    let remaining_slots = (k - pos) as i128;
    let mut w = lo;
    while w <= hi && w * remaining_slots <= total {
        buf[pos] = w;
        ascending_partitions(total - w, hi, k, w, buf, pos + 1, f);
        w += 1;
    }
}

/// Complete list of IP weight systems in dimension `d` (1..=4), sorted by
/// (degree, weights).
///
/// The search maintains a growing set of integer constraint points `y`
/// (starting from the all-ones vector) and the rational polytope
/// `{q >= 0 : q · y = 1 for all y}`. Its vertex average `qc` is strictly
/// positive on every branch that can still contain an IP weight; the
/// normalized `qc` is tested exactly, and the branch splits over the
/// finitely many lattice points `y >= 0` with `qc · y < 1` that lower the
/// affine dimension. If the true weight `q*` of an IP system differed from
/// `qc`, some monomial of its Newton polytope would satisfy `qc · y < 1`,
/// so the search cannot miss it.
pub fn enumerate_ip_weights(d: usize) -> Result<Vec<WeightSystem>> {
    if !(1..=4).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let j = d + 1;
    let mut found: HashSet<WeightSystem> = HashSet::new();
    let mut seen: HashSet<Vec<Veci>> = HashSet::new();
    let ones = vec![1i128; j];
    search_weights(&[ones], j, &mut seen, &mut found);
    let mut out: Vec<WeightSystem> = found.into_iter().collect();
    out.sort_by(|a, b| (a.degree, &a.weights).cmp(&(b.degree, &b.weights)));
    Ok(out)
}

fn search_weights(
    ys: &[Veci],
    j: usize,
    seen: &mut HashSet<Vec<Veci>>,
    found: &mut HashSet<WeightSystem>,
) {
    // the affine subspace {q : q·y = 1} is determined by the row span of
    // the homogenized constraints (y, 1)
    let aug: Vec<Veci> = ys
        .iter()
        .map(|y| y.iter().copied().chain(std::iter::once(1)).collect())
        .collect();
    let canon = linalg::rowspace_canonical(&aug);
    if !seen.insert(canon.clone()) {
        return;
    }
    // vertices of {q >= 0 : q · y = 1 ∀y}: pick zero-sets of complementary
    // size and solve exactly
    let ones_rhs: Veci = vec![1; ys.len()];
    let free = j - ys.len();
    let mut verts: Vec<Vec<linalg::Rat>> = Vec::new();
    let mut zero_sets = Vec::new();
    subsets_of_size(j, free, &mut Vec::new(), &mut zero_sets);
    for zs in &zero_sets {
        let keep: Vec<usize> = (0..j).filter(|i| !zs.contains(i)).collect();
        let a: Vec<Veci> = ys.iter().map(|y| keep.iter().map(|&i| y[i]).collect()).collect();
        let Some(sol) = linalg::solve_unique(&a, &ones_rhs) else {
            continue;
        };
        if sol.iter().any(|r| r.cmp0() == std::cmp::Ordering::Less) {
            continue;
        }
        let mut full = vec![linalg::Rat::zero(); j];
        for (&i, r) in keep.iter().zip(&sol) {
            full[i] = *r;
        }
        if !verts.contains(&full) {
            verts.push(full);
        }
    }
    if verts.is_empty() {
        return;
    }
    // average of the vertices; must be strictly positive to continue
    let n = linalg::Rat::int(verts.len() as i128);
    let mut qc = vec![linalg::Rat::zero(); j];
    for v in &verts {
        for (a, b) in qc.iter_mut().zip(v) {
            *a = a.add(*b);
        }
    }
    for a in qc.iter_mut() {
        *a = a.div(n);
    }
    if qc.iter().any(|r| r.is_zero()) {
        return;
    }
    // exact test of the candidate weight
    let mut den: i128 = 1;
    for r in &qc {
        den = linalg::cmul(den, r.den) / linalg::gcd(den, r.den);
    }
    let mut w: Veci = qc.iter().map(|r| linalg::cmul(r.num, den / r.den)).collect();
    linalg::make_primitive(&mut w);
    w.sort_unstable();
    if let Ok(ws) = WeightSystem::new(w) {
        if is_ip_weight(&WeightMatrix::from_system(&ws)) {
            found.insert(ws);
        }
    }
    if ys.len() == j {
        return;
    }
    // branch over lattice points below the slice of qc that cut the
    // subspace further
    for y in lattice_points_below(&qc) {
        let mut with = canon.clone();
        with.push(y.iter().copied().chain(std::iter::once(1)).collect());
        if linalg::rank(&with) == canon.len() {
            continue; // constraint already implied: does not shrink A
        }
        let mut next = ys.to_vec();
        next.push(y);
        search_weights(&next, j, seen, found);
    }
}

fn subsets_of_size(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    let start = cur.last().map_or(0, |&l| l + 1);
    for i in start..n {
        cur.push(i);
        subsets_of_size(n, k, cur, out);
        cur.pop();
    }
}

/// All `y >= 0` in `Z^j` with `qc · y < 1` for strictly positive `qc`.
fn lattice_points_below(qc: &[linalg::Rat]) -> Vec<Veci> {
    let j = qc.len();
    let mut out = Vec::new();
    let mut y = vec![0i128; j];
    fn rec(
        qc: &[linalg::Rat],
        pos: usize,
        acc: linalg::Rat,
        y: &mut Veci,
        out: &mut Vec<Veci>,
    ) {
        if pos == qc.len() {
            out.push(y.clone());
            return;
        }
        let mut v = 0i128;
        loop {
            let total = acc.add(qc[pos].mul(linalg::Rat::int(v)));
            if total.cmp0() != std::cmp::Ordering::Less && total.sub(linalg::Rat::int(1)).cmp0()
                != std::cmp::Ordering::Less
            {
                break;
            }
            y[pos] = v;
            rec(qc, pos + 1, total, y, out);
            v += 1;
        }
        y[pos] = 0;
    }
    rec(qc, 0, linalg::Rat::zero(), &mut y, &mut out);
    out
}
