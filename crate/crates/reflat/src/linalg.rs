//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Everything here works on `i128` entries with checked arithmetic; an
//! overflow aborts with a panic rather than wrapping. The matrices in scope
//! (dimension at most 6, coordinates of desk-scale polytopes) stay far below
//! the overflow threshold, so the checks are a safety net, not a code path.

pub type Veci = Vec<i128>;

#[inline]
pub fn cadd(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("integer overflow")
}

#[inline]
pub fn csub(a: i128, b: i128) -> i128 {
    a.checked_sub(b).expect("integer overflow")
}

#[inline]
pub fn cmul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow")
}

#[inline]
pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_slice(v: &[i128]) -> i128 {
    v.iter().fold(0, |g, &x| gcd(g, x))
}

/// Divide a nonzero vector by the gcd of its entries.
pub fn make_primitive(v: &mut [i128]) {
    let g = gcd_slice(v);
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

pub fn dot(a: &[i128], b: &[i128]) -> i128 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        acc = cadd(acc, cmul(*x, *y));
    }
    acc
}

pub fn sub(a: &[i128], b: &[i128]) -> Veci {
    a.iter().zip(b).map(|(x, y)| csub(*x, *y)).collect()
}

pub fn add(a: &[i128], b: &[i128]) -> Veci {
    a.iter().zip(b).map(|(x, y)| cadd(*x, *y)).collect()
}

pub fn neg(a: &[i128]) -> Veci {
    a.iter().map(|x| -x).collect()
}

/// Rank of the row span over the rationals.
pub fn rank(rows: &[Veci]) -> usize {
    rational_echelon(rows).len()
}

/// Fraction-free row echelon form; returns the nonzero rows, each divided by
/// its content. Not canonical (use `rowspace_canonical` for dedup keys).
fn rational_echelon(rows: &[Veci]) -> Vec<Veci> {
    let mut m: Vec<Veci> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= m.len() {
            break;
        }
        let Some(sel) = (pivot_row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pivot_row, sel);
        let p = m[pivot_row][col];
        for r in pivot_row + 1..m.len() {
            if m[r][col] != 0 {
                let q = m[r][col];
                for c in 0..ncols {
                    m[r][c] = csub(cmul(m[r][c], p), cmul(m[pivot_row][c], q));
                }
                make_primitive(&mut m[r]);
            }
        }
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m.retain(|r| r.iter().any(|&x| x != 0));
    m
}

/// Canonical basis (primitive-integer rref) of the rational row space.
/// Equal row spaces give byte-identical output.
pub fn rowspace_canonical(rows: &[Veci]) -> Vec<Veci> {
    let mut m = rational_echelon(rows);
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    // back-substitute above each pivot
    for i in (0..m.len()).rev() {
        let col = m[i].iter().position(|&x| x != 0).unwrap();
        let p = m[i][col];
        for r in 0..i {
            if m[r][col] != 0 {
                let q = m[r][col];
                for c in 0..ncols {
                    m[r][c] = csub(cmul(m[r][c], p), cmul(m[i][c], q));
                }
                make_primitive(&mut m[r]);
            }
        }
    }
    for row in m.iter_mut() {
        make_primitive(row);
        let lead = row.iter().find(|&&x| x != 0).copied().unwrap_or(1);
        if lead < 0 {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
    }
    m
}

/// Row-style Hermite normal form: the unique canonical representative of
/// `U * mat` over all unimodular `U`. Pivots positive, entries above a pivot
/// reduced into `[0, pivot)`, zero rows trailing.
pub fn row_hnf(mat: &[Veci]) -> Vec<Veci> {
    row_hnf_with_transform(mat).0
}

/// Row HNF together with the unimodular transform `u` (`u * mat = hnf`).
pub fn row_hnf_with_transform(mat: &[Veci]) -> (Vec<Veci>, Vec<Veci>) {
    let nrows = mat.len();
    let ncols = if nrows == 0 { 0 } else { mat[0].len() };
    let mut m: Vec<Veci> = mat.to_vec();
    let mut u: Vec<Veci> = (0..nrows)
        .map(|i| (0..nrows).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= nrows {
            break;
        }
        // clear the column below pivot_row with euclidean row steps
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..nrows {
                if m[r][col] != 0 {
                    best = match best {
                        None => Some(r),
                        Some(b) if m[r][col].abs() < m[b][col].abs() => Some(r),
                        other => other,
                    };
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let p = m[pivot_row][col];
            let mut done = true;
            for r in pivot_row + 1..nrows {
                if m[r][col] != 0 {
                    let q = m[r][col].div_euclid(p);
                    for c in 0..ncols {
                        m[r][c] = csub(m[r][c], cmul(q, m[pivot_row][c]));
                    }
                    for c in 0..nrows {
                        u[r][c] = csub(u[r][c], cmul(q, u[pivot_row][c]));
                    }
                    if m[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][col] == 0 {
            continue;
        }
        if m[pivot_row][col] < 0 {
            for c in 0..ncols {
                m[pivot_row][c] = -m[pivot_row][c];
            }
            for c in 0..nrows {
                u[pivot_row][c] = -u[pivot_row][c];
            }
        }
        let p = m[pivot_row][col];
        for r in 0..pivot_row {
            let q = m[r][col].div_euclid(p);
            if q != 0 {
                for c in 0..ncols {
                    m[r][c] = csub(m[r][c], cmul(q, m[pivot_row][c]));
                }
                for c in 0..nrows {
                    u[r][c] = csub(u[r][c], cmul(q, u[pivot_row][c]));
                }
            }
        }
        pivot_row += 1;
    }
    (m, u)
}

/// Saturated basis of the integer kernel `{x in Z^n : mat * x = 0}`.
pub fn integer_kernel_basis(mat: &[Veci]) -> Vec<Veci> {
    if mat.is_empty() {
        return Vec::new();
    }
    let n = mat[0].len();
    // transpose, row-reduce with transform; rows of u mapping to zero rows
    // of the hnf are a basis of the kernel (and automatically saturated).
    let t: Vec<Veci> = (0..n).map(|j| mat.iter().map(|row| row[j]).collect()).collect();
    let (h, u) = row_hnf_with_transform(&t);
    let mut basis = Vec::new();
    for (hrow, urow) in h.iter().zip(u.iter()) {
        if hrow.iter().all(|&x| x == 0) {
            basis.push(urow.clone());
        }
    }
    basis
}

/// Primitive hyperplane through a point set whose differences span a
/// hyperplane: returns `(a, b)` with `a · p = b` for every point.
pub fn hyperplane_through(points: &[&[i128]]) -> Option<(Veci, i128)> {
    let p0 = points.first()?;
    let diffs: Vec<Veci> = points[1..].iter().map(|p| sub(p, p0)).collect();
    let kernel = integer_kernel_basis(&diffs);
    if kernel.len() != 1 {
        return None;
    }
    let mut a = kernel.into_iter().next().unwrap();
    make_primitive(&mut a);
    let b = dot(&a, p0);
    Some((a, b))
}

/// Basis of the saturation of the integer span of the given vectors:
/// `{x in Z^n : x in the rational span}`. Every lattice vector of the
/// rational span is an integer combination of the result.
pub fn saturated_span_basis(vectors: &[Veci], n: usize) -> Vec<Veci> {
    if vectors.iter().all(|v| v.iter().all(|&x| x == 0)) {
        return Vec::new();
    }
    let complement = integer_kernel_basis(vectors);
    if complement.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect();
    }
    integer_kernel_basis(&complement)
}

/// Random element of GL(d,Z) as a product of elementary row operations.
/// `steps` bounds the entry growth; small values keep coordinates tame.
pub fn random_unimodular<R: rand::Rng>(rng: &mut R, d: usize, steps: usize) -> Vec<Veci> {
    let mut m: Vec<Veci> =
        (0..d).map(|i| (0..d).map(|j| i128::from(i == j)).collect()).collect();
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 => {
                let i = rng.gen_range(0..d);
                let mut j = rng.gen_range(0..d);
                if d > 1 {
                    while j == i {
                        j = rng.gen_range(0..d);
                    }
                    let sign: i128 = if rng.gen() { 1 } else { -1 };
                    for c in 0..d {
                        m[j][c] = cadd(m[j][c], cmul(sign, m[i][c]));
                    }
                }
            }
            1 => {
                let i = rng.gen_range(0..d);
                let j = rng.gen_range(0..d);
                m.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..d);
                for c in 0..d {
                    m[i][c] = -m[i][c];
                }
            }
        }
    }
    m
}

/// Exact rational number with `i128` backing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rat {
    pub num: i128,
    pub den: i128, // > 0
}

impl Rat {
    pub fn new(num: i128, den: i128) -> Rat {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Rat { num: sign * num / g, den: sign * den / g }
    }

    pub fn int(n: i128) -> Rat {
        Rat { num: n, den: 1 }
    }

    pub fn zero() -> Rat {
        Rat::int(0)
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn add(self, o: Rat) -> Rat {
        Rat::new(cadd(cmul(self.num, o.den), cmul(o.num, self.den)), cmul(self.den, o.den))
    }

    pub fn sub(self, o: Rat) -> Rat {
        Rat::new(csub(cmul(self.num, o.den), cmul(o.num, self.den)), cmul(self.den, o.den))
    }

    pub fn mul(self, o: Rat) -> Rat {
        Rat::new(cmul(self.num, o.num), cmul(self.den, o.den))
    }

    pub fn div(self, o: Rat) -> Rat {
        assert!(o.num != 0, "division by zero");
        Rat::new(cmul(self.num, o.den), cmul(self.den, o.num))
    }

    pub fn cmp0(self) -> std::cmp::Ordering {
        self.num.cmp(&0)
    }
}

/// Solve `A x = b` by Gaussian elimination over the rationals.
/// `A` is given by rows; any shape. Returns `None` if inconsistent or the
/// solution is not unique.
pub fn solve_unique(a: &[Veci], b: &[i128]) -> Option<Vec<Rat>> {
    let nrows = a.len();
    let ncols = if nrows == 0 { return None } else { a[0].len() };
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            row.iter().map(|&x| Rat::int(x)).chain(std::iter::once(Rat::int(bi))).collect()
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(sel) = (pivot_row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, sel);
        let p = m[pivot_row][col];
        for r in 0..nrows {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].div(p);
                for c in col..=ncols {
                    let t = m[pivot_row][c].mul(f);
                    m[r][c] = m[r][c].sub(t);
                }
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    // inconsistent?
    for r in pivot_row..nrows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    if pivots.len() != ncols {
        return None; // underdetermined
    }
    let mut x = vec![Rat::zero(); ncols];
    for &(r, c) in &pivots {
        x[c] = m[r][ncols].div(m[r][c]);
    }
    Some(x)
}

/// Solve `cols * x = t` (columns given as vectors) requiring an integral,
/// unique solution.
pub fn solve_integral(cols: &[Veci], t: &[i128]) -> Option<Veci> {
    if cols.is_empty() {
        return if t.iter().all(|&x| x == 0) { Some(Vec::new()) } else { None };
    }
    let d = cols[0].len();
    let rows: Vec<Veci> = (0..d).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let x = solve_unique(&rows, t)?;
    let mut out = Vec::with_capacity(x.len());
    for r in x {
        if r.den != 1 {
            return None;
        }
        out.push(r.num);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_is_canonical_under_left_unimodular() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
        // left-multiply by a unimodular matrix: add row 0 to row 1, swap rows
        let b = vec![vec![-6 + 2, 6 + 4, 12 + 4], vec![2, 4, 4], vec![10, 4, 16]];
        assert_eq!(row_hnf(&a), row_hnf(&b));
    }

    #[test]
    fn hnf_transform_reproduces_matrix() {
        let a = vec![vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]];
        let (h, u) = row_hnf_with_transform(&a);
        for i in 0..3 {
            for j in 0..3 {
                let v: i128 = (0..3).map(|k| u[i][k] * a[k][j]).sum();
                assert_eq!(v, h[i][j]);
            }
        }
    }

    #[test]
    fn kernel_basis_is_saturated() {
        // kernel of (2 4 6) over Z^3 must contain (1 1 -1), (2 -1 0), etc.
        let m = vec![vec![2, 4, 6]];
        let k = integer_kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(dot(&m[0], v), 0);
        }
        // (-3, 0, 1) is in the kernel; it must be an integer combination
        assert!(solve_integral(&k.iter().map(|v| v.clone()).collect::<Vec<_>>(), &[-3, 0, 1]).is_some());
    }

    #[test]
    fn hyperplane_through_points() {
        let pts: Vec<&[i128]> = vec![&[1, 0], &[0, 1]];
        let (a, b) = hyperplane_through(&pts).unwrap();
        assert_eq!(dot(&a, &[1, 0]), b);
        assert_eq!(dot(&a, &[0, 1]), b);
        assert_eq!(a.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn solve_unique_small() {
        let a = vec![vec![1, 1], vec![1, -1]];
        let x = solve_unique(&a, &[3, 1]).unwrap();
        assert_eq!(x, vec![Rat::int(2), Rat::int(1)]);
    }

    #[test]
    fn rowspace_canonical_equal_spans() {
        let a = vec![vec![1, 2, 3], vec![0, 1, 1]];
        let b = vec![vec![1, 3, 4], vec![2, 5, 7]];
        assert_eq!(rowspace_canonical(&a), rowspace_canonical(&b));
    }
}
