//! IP-confined polytopes and the lattice-point closure of polar duality.
//!
//! For an IP polytope Δ with interior point 0, `tilde(Δ)` is the convex
//! hull of the lattice points of the rational dual Δ*. On reflexive
//! polytopes tilde coincides with polar duality; in general it extends
//! duality to an involution on the polytopes fixed by applying it twice.

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::Polytope;

/// `conv(Δ* ∩ Z^d)`. Requires an IP polytope with interior point 0; the
/// result may be lower-dimensional or lack an interior point, and is
/// returned as-is so that non-IP-confined witnesses stay inspectable.
pub fn tilde(p: &Polytope) -> Result<Polytope> {
    if p.interior_point().map_or(true, |ip| ip.iter().any(|&x| x != 0)) {
        return Err(Error::NotIP);
    }
    let dual = p.polar_dual()?;
    let d = p.dim();
    // bounding box of the rational dual vertices, then the exact test
    // y · v >= -1 against every primal vertex
    let mut lo = vec![i128::MAX; d];
    let mut hi = vec![i128::MIN; d];
    for (num, den) in &dual.vertices {
        for i in 0..d {
            lo[i] = lo[i].min(num[i].div_euclid(*den));
            hi[i] = hi[i].max(num[i].div_euclid(*den) + 1);
        }
    }
    let mut points = Vec::new();
    let mut y = lo.clone();
    'scan: loop {
        if p.vertices().iter().all(|v| linalg::dot(&y, v) >= -1) {
            points.push(y.clone());
        }
        for i in (0..d).rev() {
            if y[i] < hi[i] {
                y[i] += 1;
                for j in i + 1..d {
                    y[j] = lo[j];
                }
                continue 'scan;
            }
        }
        break;
    }
    debug_assert!(!points.is_empty(), "0 is always a dual lattice point");
    Polytope::from_points(&points, d)
}

/// Whether `tilde(P)` is itself an IP polytope (full-dimensional with 0 as
/// its unique interior lattice point).
pub fn is_ip_confined(p: &Polytope) -> Result<bool> {
    let t = tilde(p)?;
    Ok(t.is_full_dimensional()
        && t.interior_point().is_some_and(|ip| ip.iter().all(|&x| x == 0)))
}

/// `tilde(tilde(P))`, a subpolytope of P; idempotent. Fails with
/// `NotIPConfined` when tilde(P) is not IP.
pub fn ipc_closure(p: &Polytope) -> Result<Polytope> {
    if !is_ip_confined(p)? {
        return Err(Error::NotIPConfined);
    }
    tilde(&tilde(p)?)
}

/// Full report for one polytope: both tilde steps and the derived flags.
#[derive(Clone, Debug)]
pub struct IpcReport {
    pub input: Polytope,
    pub tilde: Polytope,
    pub closure: Option<Polytope>,
    pub ip_confined: bool,
    pub ipc_closed: bool,
}

pub fn ipc_report(p: &Polytope) -> Result<IpcReport> {
    let t = tilde(p)?;
    let ip_confined = t.is_full_dimensional()
        && t.interior_point().is_some_and(|ip| ip.iter().all(|&x| x == 0));
    let closure = if ip_confined { Some(tilde(&t)?) } else { None };
    let ipc_closed = closure.as_ref().is_some_and(|c| c == p);
    Ok(IpcReport { input: p.clone(), tilde: t, closure, ip_confined, ipc_closed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{simplex_for_relation, WeightSystem};

    fn poly(pts: &[&[i128]], dim: usize) -> Polytope {
        Polytope::from_points(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>(), dim).unwrap()
    }

    #[test]
    fn tilde_of_reflexive_is_the_polar_dual() {
        let square = poly(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]], 2);
        let t = tilde(&square).unwrap();
        assert_eq!(t, square.dual_lattice().unwrap());
        let report = ipc_report(&square).unwrap();
        assert!(report.ip_confined);
        assert!(report.ipc_closed);
    }

    #[test]
    fn tilde_requires_centered_ip() {
        let big = poly(&[&[2, 2], &[2, -2], &[-2, 2], &[-2, -2]], 2);
        assert!(matches!(tilde(&big), Err(Error::NotIP)));
        let shifted = poly(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]], 2);
        assert!(matches!(tilde(&shifted), Err(Error::NotIP)));
    }

    #[test]
    fn non_confined_witness_simplex() {
        // the relation (1,5,6,8) belongs to an IP simplex whose tilde loses
        // the origin from its interior
        let ws = WeightSystem::new(vec![1, 5, 6, 8]).unwrap();
        let s = simplex_for_relation(&ws);
        assert!(s.is_ip());
        assert!(!is_ip_confined(&s).unwrap());
        let r = ipc_report(&s).unwrap();
        assert!(!r.ip_confined);
        assert!(r.closure.is_none());
        assert!(matches!(ipc_closure(&s), Err(Error::NotIPConfined)));
    }

    #[test]
    fn closure_is_idempotent_and_shrinking() {
        let ws = WeightSystem::new(vec![1, 1, 2]).unwrap();
        let s = simplex_for_relation(&ws);
        let c = ipc_closure(&s).unwrap();
        assert!(s.lattice_points().iter().any(|p| !c.contains(p)) || c == s);
        for v in c.vertices() {
            assert!(s.contains(v));
        }
        let cc = ipc_closure(&c).unwrap();
        assert_eq!(cc, c);
    }

    #[test]
    fn tilde_reverses_inclusion() {
        let inner = poly(&[&[1, 0], &[0, 1], &[-1, -1]], 2);
        let outer = poly(&[&[2, -1], &[-1, 2], &[-1, -1]], 2);
        for v in inner.vertices() {
            assert!(outer.contains(v));
        }
        let ti = tilde(&inner).unwrap();
        let to = tilde(&outer).unwrap();
        for v in to.vertices() {
            assert!(ti.contains(v));
        }
    }
}
