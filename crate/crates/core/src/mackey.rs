//! Values of the rational Mackey functor attached to an object of the
//! algebraic model, and an independent orbit-counting check of the
//! tom Dieck splitting for maps between orbits.

use std::collections::HashSet;

use serde::Serialize;

use crate::amodel::{GeneratorKind, RigidObject};
use crate::burnside::EvSeq;
use crate::cyclic::pow_u64;
use crate::error::{ensure_prime, Error, Result};
use crate::homext::GradedRigid;
use crate::natseq::NatSeq;

pub const TD_MAX_PRIME: u64 = 5;
pub const TD_MAX_LEVEL: u32 = 8;

/// The pieces of the value `M(Z_p/p^k)`: the part `M_∞^{p^k Z_p}` and the
/// `e_j`-components `M_j^{p^k Z_p/p^j}` for `j ≥ k` (zero below `k`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MackeyValueDescriptor {
    pub k: u32,
    pub inf_dim: u64,
    pub component_dims: NatSeq,
}

impl MackeyValueDescriptor {
    pub fn component(&self, j: u32) -> u64 {
        self.component_dims.get(j as usize)
    }

    /// Componentwise sum, for values of a direct sum.
    pub fn add(&self, other: &MackeyValueDescriptor) -> Result<MackeyValueDescriptor> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch(format!(
                "values at different subgroups {} and {}",
                self.k, other.k
            )));
        }
        Ok(MackeyValueDescriptor {
            k: self.k,
            inf_dim: self.inf_dim + other.inf_dim,
            component_dims: self.component_dims.add(&other.component_dims),
        })
    }
}

pub fn mackey_components(m: &RigidObject, k: u32) -> Result<MackeyValueDescriptor> {
    let s = m.stab();
    let inf_dim = m.minf().fixed_points(k.min(s))?.dim() as u64;
    let horizon = s.max(k);
    let at = |j: u32| -> Result<u64> {
        if j < k {
            return Ok(0);
        }
        Ok(m.level(j).fixed_points(k)?.dim() as u64)
    };
    let prefix = (0..horizon).map(at).collect::<Result<Vec<_>>>()?;
    let tail = at(horizon)?;
    Ok(MackeyValueDescriptor { k, inf_dim, component_dims: NatSeq::new(prefix, tail) })
}

/// Orbit counts from the tom Dieck splitting of `[Z_p/p^n, Z_p/p^m]`, one
/// for each subgroup `p^j Z_p`, `j = n..=jmax`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TomDieckTable {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    pub jmax: u32,
    pub per_j_dims: Vec<u64>,
}

impl TomDieckTable {
    /// The count at `j`, zero for `j < n`.
    pub fn dim_at(&self, j: u32) -> Option<u64> {
        if j > self.jmax {
            None
        } else if j < self.n {
            Some(0)
        } else {
            Some(self.per_j_dims[(j - self.n) as usize])
        }
    }
}

/// Enumerates, for each `j`, the points of `Z/p^m` fixed by `p^j`, and counts
/// their orbits under translation by `p^n`.
pub fn td_split(p: u64, n: u32, m: u32, jmax: u32) -> Result<TomDieckTable> {
    ensure_prime(p)?;
    if p > TD_MAX_PRIME {
        return Err(Error::BoundsExceeded(format!("p = {p} exceeds {TD_MAX_PRIME}")));
    }
    if jmax > TD_MAX_LEVEL {
        return Err(Error::BoundsExceeded(format!("jmax = {jmax} exceeds {TD_MAX_LEVEL}")));
    }
    if jmax < n.max(m) {
        return Err(Error::BoundsExceeded(format!("jmax = {jmax} is below max(n, m) = {}", n.max(m))));
    }
    let size = pow_u64(p, m);
    let step = pow_u64(p, n) % size;
    let per_j_dims = (n..=jmax)
        .map(|j| {
            let shift = pow_u64(p, j) % size;
            let fixed: Vec<u64> = (0..size).filter(|&x| (x + shift) % size == x).collect();
            let mut seen = HashSet::new();
            let mut orbits = 0;
            for &x in &fixed {
                if seen.contains(&x) {
                    continue;
                }
                orbits += 1;
                let mut y = x;
                while seen.insert(y) {
                    y = (y + step) % size;
                }
            }
            orbits
        })
        .collect();
    Ok(TomDieckTable { p, n, m, jmax, per_j_dims })
}

/// The shape of `[Z_p/p^n, Z_p/p^m] ≅ A(p^{max} Z_p) ⊗ Q[Z_p/p^{min}]`: the
/// `e_j`-component has dimension `p^{min}` for `j ≥ max` and vanishes below.
pub fn orbit_hom(p: u64, n: u32, m: u32) -> Result<MackeyValueDescriptor> {
    ensure_prime(p)?;
    let lo = pow_u64(p, n.min(m));
    let f = EvSeq::idempotent_f(p, n.max(m) as usize)?;
    let dim = |x: &crate::linalg::Rational| -> u64 {
        let v = x * crate::linalg::rat(lo as i64);
        v.to_integer().try_into().expect("non-negative count")
    };
    let prefix = f.prefix().iter().map(dim).collect();
    let component_dims = NatSeq::new(prefix, dim(f.tail()));
    Ok(MackeyValueDescriptor { k: n, inf_dim: lo, component_dims })
}

/// The homotopy object of the orbit `Z_p/p^n`: `A(n)` in degree zero.
pub fn pi_a_orbit(p: u64, n: u32) -> Result<GradedRigid> {
    Ok(GradedRigid::concentrated(RigidObject::generator(p, GeneratorKind::A, n)?, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amodel::GeneratorKind::{self, A, E, L};

    fn gen(p: u64, kind: GeneratorKind, n: u32) -> RigidObject {
        RigidObject::generator(p, kind, n).unwrap()
    }

    #[test]
    fn components_of_generators() {
        let d = mackey_components(&gen(2, A, 2), 0).unwrap();
        assert_eq!(d.inf_dim, 1);
        assert_eq!(d.component_dims, NatSeq::new(vec![0, 0], 1));

        for k in 0..4 {
            let d = mackey_components(&gen(3, E, 2), k).unwrap();
            for j in 0..6 {
                let expect = if j == 2 && k <= 2 { 3u64.pow(k) } else { 0 };
                assert_eq!(d.component(j), expect, "k={k} j={j}");
            }
            assert_eq!(d.inf_dim, 0);
            let l = mackey_components(&gen(3, L, 0), k).unwrap();
            assert!(l.component_dims.is_zero());
            assert_eq!(l.inf_dim, 1);
        }
    }

    #[test]
    fn components_are_additive() {
        let a = gen(2, A, 1);
        let b = gen(2, E, 2).direct_sum(&gen(2, L, 1)).unwrap();
        for k in 0..4 {
            let lhs = mackey_components(&a.direct_sum(&b).unwrap(), k).unwrap();
            let rhs = mackey_components(&a, k).unwrap().add(&mackey_components(&b, k).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tom_dieck_examples() {
        assert_eq!(td_split(2, 0, 0, 3).unwrap().per_j_dims, vec![1, 1, 1, 1]);
        assert_eq!(td_split(2, 1, 2, 4).unwrap().per_j_dims, vec![0, 2, 2, 2]);
        assert_eq!(td_split(3, 2, 1, 4).unwrap().per_j_dims, vec![3, 3, 3]);
        assert!(matches!(td_split(7, 0, 0, 1), Err(Error::BoundsExceeded(_))));
        assert!(matches!(td_split(2, 0, 0, 9), Err(Error::BoundsExceeded(_))));
        assert!(matches!(td_split(2, 3, 0, 2), Err(Error::BoundsExceeded(_))));
        assert!(matches!(td_split(4, 0, 0, 1), Err(Error::NotPrime(4))));
    }

    #[test]
    fn orbit_hom_shapes() {
        let d = orbit_hom(2, 0, 0).unwrap();
        assert_eq!(d.component_dims, NatSeq::constant(1));
        assert_eq!(d.inf_dim, 1);
        let d = orbit_hom(2, 1, 2).unwrap();
        assert_eq!(d.component_dims, NatSeq::new(vec![0, 0], 2));
        assert_eq!(orbit_hom(3, 1, 3).unwrap().component_dims, orbit_hom(3, 3, 1).unwrap().component_dims);
    }

    #[test]
    fn orbits_match_mackey_components() {
        for n in 0..4 {
            let x = pi_a_orbit(2, n).unwrap();
            let a = x.get(0).unwrap();
            for k in 0..=4 {
                assert_eq!(mackey_components(a, k).unwrap(), orbit_hom(2, k, n).unwrap());
            }
        }
        assert_eq!(pi_a_orbit(3, 0).unwrap().get(0).unwrap(), &RigidObject::unit(3).unwrap());
    }
}
