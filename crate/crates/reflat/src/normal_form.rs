//! Canonical representatives of unimodular and affine-unimodular
//! equivalence classes.
//!
//! The canonical form of a polytope is computed in two stages. First the
//! vertex–facet pairing matrix (facet normal · vertex + offset, which is
//! basis-independent) is maximized over all vertex orders, comparing
//! row-sorted matrices column by column; every vertex order attaining the
//! maximum is kept. Second, for each such order the row Hermite normal form
//! of the vertex matrix fixes the lattice basis, and the lexicographically
//! smallest result is the key. The key is therefore invariant under lattice
//! automorphisms and input vertex order.

use crate::error::{Error, Result};
use crate::linalg::{self, Veci};
use crate::polytope::Polytope;

/// Canonical byte key of an equivalence class. Byte equality is class
/// equality; the ordering is the byte ordering (used by the database).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NormalFormKey {
    bytes: Vec<u8>,
}

const ESCAPE: u8 = 0x80;

impl NormalFormKey {
    fn from_matrix(dim: usize, nv: usize, entries: &[i128]) -> NormalFormKey {
        assert_eq!(entries.len(), dim * nv);
        assert!(dim <= 127 && nv <= 255, "key header out of range");
        let mut bytes = Vec::with_capacity(2 + entries.len());
        bytes.push(dim as u8);
        bytes.push(nv as u8);
        for &e in entries {
            if (-127..=127).contains(&e) {
                bytes.push((e as i8) as u8);
            } else {
                let v = i32::try_from(e).expect("key entry exceeds 32 bits");
                bytes.push(ESCAPE);
                bytes.extend_from_slice(&v.to_le_bytes());
            }
        }
        NormalFormKey { bytes }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Decode from the binary encoding; consumes exactly one key from the
    /// front of `data` and returns it with the number of bytes read.
    pub fn from_bytes(data: &[u8]) -> Result<(NormalFormKey, usize)> {
        let bad = |m: &str| Error::CorruptDatabase(m.into());
        if data.len() < 2 {
            return Err(bad("truncated key header"));
        }
        let (dim, nv) = (data[0] as usize, data[1] as usize);
        if dim > 127 {
            return Err(bad("bad key dimension"));
        }
        let mut pos = 2;
        for _ in 0..dim * nv {
            let b = *data.get(pos).ok_or_else(|| bad("truncated key"))?;
            pos += 1;
            if b == ESCAPE {
                if data.len() < pos + 4 {
                    return Err(bad("truncated escaped key entry"));
                }
                pos += 4;
            }
        }
        Ok((NormalFormKey { bytes: data[..pos].to_vec() }, pos))
    }

    pub fn dim(&self) -> usize {
        self.bytes[0] as usize
    }

    pub fn vertex_count(&self) -> usize {
        self.bytes[1] as usize
    }

    /// The canonical vertex matrix, flattened row-major (dim × nv).
    pub fn entries(&self) -> Vec<i128> {
        let mut out = Vec::with_capacity(self.dim() * self.vertex_count());
        let mut pos = 2;
        while pos < self.bytes.len() {
            let b = self.bytes[pos];
            pos += 1;
            if b == ESCAPE {
                let mut le = [0u8; 4];
                le.copy_from_slice(&self.bytes[pos..pos + 4]);
                pos += 4;
                out.push(i32::from_le_bytes(le) as i128);
            } else {
                out.push((b as i8) as i128);
            }
        }
        out
    }

    /// Reconstruct the canonical representative polytope.
    pub fn to_polytope(&self) -> Result<Polytope> {
        let (d, v) = (self.dim(), self.vertex_count());
        if d == 0 {
            // a single point; embed as the origin of Z^1
            return Polytope::from_points(&[vec![0]], 1);
        }
        let entries = self.entries();
        let cols: Vec<Veci> = (0..v).map(|j| (0..d).map(|i| entries[i * v + j]).collect()).collect();
        Polytope::from_points(&cols, d)
    }

    /// Text form "NF d v:" followed by the d·v entries.
    pub fn to_text(&self) -> String {
        let mut s = format!("NF {} {}:", self.dim(), self.vertex_count());
        for e in self.entries() {
            s.push(' ');
            s.push_str(&e.to_string());
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<NormalFormKey> {
        let bad = |m: String| Error::Parse(m);
        let rest = text.trim().strip_prefix("NF").ok_or_else(|| bad("missing NF prefix".into()))?;
        let (head, tail) =
            rest.split_once(':').ok_or_else(|| bad("missing ':' in key".into()))?;
        let header: Vec<usize> = head
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(format!("bad key header {t:?}"))))
            .collect::<Result<_>>()?;
        let [d, v] = header[..] else {
            return Err(bad("key header is not 'd v'".into()));
        };
        let entries: Vec<i128> = tail
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(format!("bad key entry {t:?}"))))
            .collect::<Result<_>>()?;
        if entries.len() != d * v {
            return Err(bad(format!("expected {} entries, got {}", d * v, entries.len())));
        }
        Ok(NormalFormKey::from_matrix(d, v, &entries))
    }
}

/// All column orders maximizing the row-sorted pairing matrix, compared
/// column-major. Columns are added one at a time; a partial order survives
/// only while its row-sorted prefix ties the best, which is exact pruning
/// because equal row prefixes are equal in every chosen column.
fn maximizing_column_orders(m: &[Veci]) -> Vec<Vec<usize>> {
    let ncols = m[0].len();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..ncols {
        let mut best: Option<Vec<i128>> = None;
        let mut next: Vec<Vec<usize>> = Vec::new();
        for prefix in &frontier {
            for c in 0..ncols {
                if prefix.contains(&c) {
                    continue;
                }
                let mut order = prefix.clone();
                order.push(c);
                // row prefixes under this order, sorted descending,
                // flattened column-major
                let mut rows: Vec<Veci> =
                    m.iter().map(|row| order.iter().map(|&j| row[j]).collect()).collect();
                rows.sort_unstable_by(|a, b| b.cmp(a));
                let value: Vec<i128> =
                    (0..order.len()).flat_map(|j| rows.iter().map(move |r| r[j])).collect();
                match &best {
                    Some(b) if *b > value => {}
                    Some(b) if *b == value => next.push(order),
                    _ => {
                        best = Some(value);
                        next = vec![order];
                    }
                }
            }
        }
        frontier = next;
    }
    frontier
}

fn pairing_matrix(facets: &[crate::polytope::HalfSpace], vertices: &[Veci]) -> Vec<Veci> {
    facets.iter().map(|f| vertices.iter().map(|v| f.eval(v)).collect()).collect()
}

fn key_from_orders(dim: usize, vertices: &[Veci], orders: &[Vec<usize>]) -> NormalFormKey {
    let mut best: Option<Vec<i128>> = None;
    for order in orders {
        let rows: Vec<Veci> =
            (0..dim).map(|i| order.iter().map(|&j| vertices[j][i]).collect()).collect();
        let h = linalg::row_hnf(&rows);
        let flat: Vec<i128> = h.into_iter().flatten().collect();
        if best.as_ref().map_or(true, |b| flat < *b) {
            best = Some(flat);
        }
    }
    NormalFormKey::from_matrix(dim, vertices.len(), &best.unwrap())
}

/// Canonical key under GL(d,Z); requires an IP polytope with interior
/// point 0.
pub fn linear_normal_form(p: &Polytope) -> Result<NormalFormKey> {
    if p.interior_point().map_or(true, |ip| ip.iter().any(|&x| x != 0)) {
        return Err(Error::NotIP);
    }
    let facets = p.facet_inequalities()?;
    let orders = maximizing_column_orders(&pairing_matrix(facets, p.vertices()));
    Ok(key_from_orders(p.dim(), p.vertices(), &orders))
}

/// Canonical key under all affine unimodular maps, for lattice polytopes of
/// any dimension. Lower-dimensional input is first mapped isomorphically
/// onto a full-dimensional polytope via a lattice basis of its affine hull;
/// the translation ambiguity is resolved by anchoring at every vertex.
pub fn affine_normal_form(p: &Polytope) -> NormalFormKey {
    let k = p.affine_dim();
    if k == 0 {
        return NormalFormKey::from_matrix(0, 1, &[]);
    }
    let q = if p.is_full_dimensional() {
        p.clone()
    } else {
        let chart = crate::polytope::AffineChart::spanning(p.vertices(), p.dim());
        let projected: Vec<Veci> = p
            .vertices()
            .iter()
            .map(|v| chart.project(v).expect("vertex in affine hull"))
            .collect();
        Polytope::from_points(&projected, k).expect("projection is full-dimensional")
    };
    let mut best: Option<NormalFormKey> = None;
    for anchor in q.vertices().to_vec() {
        let t = q.translate(&linalg::neg(&anchor));
        let facets = t.facet_inequalities().expect("full-dimensional");
        let orders = maximizing_column_orders(&pairing_matrix(facets, t.vertices()));
        let key = key_from_orders(k, t.vertices(), &orders);
        if best.as_ref().map_or(true, |b| key < *b) {
            best = Some(key);
        }
    }
    best.unwrap()
}

/// Whether a reflexive polytope is unimodularly isomorphic to its polar
/// dual.
pub fn is_self_dual(p: &Polytope) -> Result<bool> {
    if !p.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    let ip = p.interior_point().unwrap().clone();
    let centered = p.translate(&linalg::neg(&ip));
    let dual = centered.dual_lattice()?;
    Ok(linear_normal_form(&centered)? == linear_normal_form(&dual)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[&[i128]], dim: usize) -> Polytope {
        Polytope::from_points(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>(), dim).unwrap()
    }

    #[test]
    fn sheared_square_same_key() {
        let a = poly(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]], 2);
        let b = poly(&[&[1, 0], &[1, 2], &[-1, 0], &[-1, -2]], 2);
        assert_eq!(linear_normal_form(&a).unwrap(), linear_normal_form(&b).unwrap());
    }

    #[test]
    fn vertex_order_independence() {
        let a = poly(&[&[1, 0], &[0, 1], &[-1, -1]], 2);
        let b = poly(&[&[0, 1], &[1, 0], &[-1, -1]], 2);
        assert_eq!(linear_normal_form(&a).unwrap(), linear_normal_form(&b).unwrap());
    }

    #[test]
    fn triangle_and_dual_differ() {
        let a = poly(&[&[1, 0], &[0, 1], &[-1, -1]], 2);
        let d = a.dual_lattice().unwrap();
        assert_ne!(linear_normal_form(&a).unwrap(), linear_normal_form(&d).unwrap());
        assert!(!is_self_dual(&a).unwrap());
    }

    #[test]
    fn square_and_diamond_are_a_dual_pair() {
        let square = poly(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]], 2);
        let diamond = square.dual_lattice().unwrap();
        assert!(!is_self_dual(&square).unwrap());
        assert!(!is_self_dual(&diamond).unwrap());
        assert_eq!(
            linear_normal_form(&diamond.dual_lattice().unwrap()).unwrap(),
            linear_normal_form(&square).unwrap()
        );
    }

    #[test]
    fn non_ip_rejected() {
        let a = poly(&[&[2, 2], &[2, -2], &[-2, 2], &[-2, -2]], 2);
        assert!(matches!(linear_normal_form(&a), Err(Error::NotIP)));
    }

    #[test]
    fn affine_key_ignores_translation_and_shear() {
        let a = poly(&[&[0, 0], &[1, 0]], 2);
        let b = poly(&[&[5, 7], &[6, 8]], 2);
        assert_eq!(affine_normal_form(&a), affine_normal_form(&b));
    }

    #[test]
    fn segment_lengths_distinct() {
        let keys: Vec<NormalFormKey> = (1..=3)
            .map(|l| affine_normal_form(&poly(&[&[0, 0], &[l, 0]], 2)))
            .collect();
        assert_eq!(keys[0].dim(), 1);
        assert_ne!(keys[0], keys[1]);
        assert_ne!(keys[1], keys[2]);
        assert_ne!(keys[0], keys[2]);
    }

    #[test]
    fn embedded_and_intrinsic_segments_agree() {
        let intrinsic = Polytope::from_points(&[vec![-1], vec![1]], 1).unwrap();
        let embedded = poly(&[&[1, 1], &[1, -1]], 2);
        assert_eq!(affine_normal_form(&intrinsic), affine_normal_form(&embedded));
    }

    #[test]
    fn affine_refines_linear_on_centered_ip() {
        let a = poly(&[&[1, 0], &[0, 1], &[-1, -1]], 2);
        let shear = a.linear_image(&[vec![1, 3], vec![0, 1]]).unwrap();
        assert_eq!(affine_normal_form(&a), affine_normal_form(&shear));
        let translated = a.translate(&[2, -1]);
        assert_eq!(affine_normal_form(&a), affine_normal_form(&translated));
    }

    #[test]
    fn key_codecs_round_trip() {
        let a = poly(&[&[1, 0], &[0, 1], &[-1, -1]], 2);
        let k = linear_normal_form(&a).unwrap();
        let (k2, used) = NormalFormKey::from_bytes(k.as_bytes()).unwrap();
        assert_eq!(k, k2);
        assert_eq!(used, k.as_bytes().len());
        assert_eq!(NormalFormKey::parse_text(&k.to_text()).unwrap(), k);
        // entry outside one byte forces the escaped encoding
        let wide = NormalFormKey::from_matrix(1, 2, &[0, 300]);
        assert_eq!(wide.entries(), vec![0, 300]);
        let (w2, _) = NormalFormKey::from_bytes(wide.as_bytes()).unwrap();
        assert_eq!(w2, wide);
    }

    #[test]
    fn key_reconstructs_equivalent_polytope() {
        let a = poly(&[&[1, 0], &[1, 2], &[-1, 0], &[-1, -2]], 2);
        let k = linear_normal_form(&a).unwrap();
        let p = k.to_polytope().unwrap();
        assert_eq!(linear_normal_form(&p).unwrap(), k);
    }

    #[test]
    fn random_unimodular_invariance() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let base = poly(&[&[1, 0], &[0, 1], &[-1, -1]], 2);
        let k = linear_normal_form(&base).unwrap();
        for _ in 0..50 {
            let m = linalg::random_unimodular(&mut rng, 2, 8);
            let img = base.linear_image(&m).unwrap();
            assert_eq!(linear_normal_form(&img).unwrap(), k);
        }
    }
}
