use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::amodel::RigidObject;
use crate::cyclic::{equivariant_hom_basis, equivariant_hom_space, CyclicModule};
use crate::error::{ensure_same_prime, Error, Result};
use crate::linalg::{RatMatrix, Rational, Subspace};

/// `Ext¹(M, N)` presented as germs of sequences in `W` modulo constant
/// sequences with values in `V`.
///
/// With `s` the common stab, `H = Hom(M_∞, T_N)` and `H_c` the maps that
/// factor through `c_M`, `W = H / H_c` and `V ⊆ W` is the image of the maps
/// `c_N g` for `g: M_∞ → N_∞`. The group is zero exactly when `W` is, and
/// infinite dimensional otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtDescriptor {
    w: CyclicModule,
    v: Subspace,
    h_dim: usize,
    hc_dim: usize,
}

impl Serialize for ExtDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExtDescriptor", 3)?;
        st.serialize_field("W_dim", &self.w_dim())?;
        st.serialize_field("V_dim", &self.v_dim())?;
        st.serialize_field("zero", &self.is_zero())?;
        st.end()
    }
}

impl ExtDescriptor {
    /// `W` as a module; conjugation acts trivially on equivariant maps.
    pub fn w(&self) -> &CyclicModule {
        &self.w
    }

    pub fn v(&self) -> &Subspace {
        &self.v
    }

    pub fn w_dim(&self) -> usize {
        self.w.dim()
    }

    pub fn v_dim(&self) -> usize {
        self.v.dim()
    }

    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    pub fn hc_dim(&self) -> usize {
        self.hc_dim
    }

    pub fn is_zero(&self) -> bool {
        self.w.dim() == 0
    }

    /// Predicted dimension of the cokernel computed by
    /// [`ext1_truncation_oracle`] over levels `s..=cutoff`.
    pub fn truncated_dim(&self, s: u32, cutoff: u32) -> usize {
        (cutoff - s + 1) as usize * self.w_dim() - self.v_dim()
    }
}

pub fn ext1(m: &RigidObject, n: &RigidObject) -> Result<ExtDescriptor> {
    ext1_at(m, n, m.stab().max(n.stab()))
}

/// [`ext1`] computed with the common stab raised to `s`; the answer does not
/// depend on `s`.
pub fn ext1_at(m: &RigidObject, n: &RigidObject, s: u32) -> Result<ExtDescriptor> {
    ensure_same_prime(m.p(), n.p())?;
    let t_m = m.template().inflate(s)?;
    let t_n = n.template().inflate(s)?;
    let minf_m = m.minf().inflate(s)?;
    let minf_n = n.minf().inflate(s)?;
    let c_m = m.structure_map();
    let c_n = n.structure_map();

    let h = equivariant_hom_space(&minf_m, &t_n)?;
    let coords = |x: &RatMatrix| h.coordinates(&x.flatten()).expect("equivariant map lies in H");
    let hc_vectors: Vec<Vec<Rational>> =
        equivariant_hom_basis(&t_m, &t_n)?.iter().map(|v| coords(&(v * c_m))).collect();
    let hc = Subspace::from_vectors(h.dim(), &hc_vectors);
    let q = hc.basis_columns().cokernel_projection();
    let v_vectors: Vec<Vec<Rational>> = equivariant_hom_basis(&minf_m, &minf_n)?
        .iter()
        .map(|g| q.apply(&coords(&(c_n * g))))
        .collect();
    let w_dim = q.rows();
    Ok(ExtDescriptor {
        w: CyclicModule::trivial(m.p(), s, w_dim),
        v: Subspace::from_vectors(w_dim, &v_vectors),
        h_dim: h.dim(),
        hc_dim: hc.dim(),
    })
}

/// Dimension of the cokernel of
/// `Hom(M_∞, N_∞) ⊕ ⊕_{k=s}^{K} Hom(M_k, N_k) → ⊕_{k=s}^{K} Hom(M_∞, N_k)`,
/// `(g, (h_k)) ↦ (h_k c_M − c_N g)_k`, where `s` is the common stab.
///
/// This is the truncation of `Hom(M, I) → Hom(M, J)` for the two-step
/// injective resolution of `N`; it grows like `(K − s + 1)·dim W − dim V`.
pub fn ext1_truncation_oracle(m: &RigidObject, n: &RigidObject, cutoff: u32) -> Result<usize> {
    ensure_same_prime(m.p(), n.p())?;
    let s = m.stab().max(n.stab());
    if cutoff < s + 1 {
        return Err(Error::OutOfRange { index: cutoff as u64, max: s as u64 + 1 });
    }
    let t_m = m.template().inflate(s)?;
    let t_n = n.template().inflate(s)?;
    let minf_m = m.minf().inflate(s)?;
    let minf_n = n.minf().inflate(s)?;
    let h = equivariant_hom_space(&minf_m, &t_n)?;
    let coords = |x: &RatMatrix| h.coordinates(&x.flatten()).expect("equivariant map lies in H");

    let slots = (cutoff - s + 1) as usize;
    let hd = h.dim();
    let g_images: Vec<Vec<Rational>> = equivariant_hom_basis(&minf_m, &minf_n)?
        .iter()
        .map(|g| coords(&(n.structure_map() * g)))
        .collect();
    // Every level k ≥ s has M_k = T_M and N_k = T_N.
    let h_images: Vec<Vec<Rational>> = equivariant_hom_basis(&t_m, &t_n)?
        .iter()
        .map(|x| coords(&(x * m.structure_map())))
        .collect();

    let mut columns = Vec::with_capacity(g_images.len() + slots * h_images.len());
    for gi in &g_images {
        let mut col = Vec::with_capacity(slots * hd);
        for _ in 0..slots {
            col.extend(gi.iter().map(|x| -x));
        }
        columns.push(col);
    }
    for slot in 0..slots {
        for hi in &h_images {
            let mut col = vec![<Rational as num_traits::Zero>::zero(); slots * hd];
            col[slot * hd..(slot + 1) * hd].clone_from_slice(hi);
            columns.push(col);
        }
    }
    let rank = RatMatrix::from_columns(slots * hd, &columns).rank();
    Ok(slots * hd - rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amodel::GeneratorKind::{self, A, E, L};

    fn gen(p: u64, kind: GeneratorKind, n: u32) -> RigidObject {
        RigidObject::generator(p, kind, n).unwrap()
    }

    #[test]
    fn ext_from_l0_to_unit() {
        let e = ext1(&gen(2, L, 0), &gen(2, A, 0)).unwrap();
        assert_eq!(e.w_dim(), 1);
        assert_eq!(e.v_dim(), 1);
        assert!(!e.is_zero());
        let a = ext1_truncation_oracle(&gen(2, L, 0), &gen(2, A, 0), 4).unwrap();
        let b = ext1_truncation_oracle(&gen(2, L, 0), &gen(2, A, 0), 5).unwrap();
        assert_eq!(b - a, 1);
        assert_eq!(a, e.truncated_dim(0, 4));
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(v, serde_json::json!({"W_dim": 1, "V_dim": 1, "zero": false}));
    }

    #[test]
    fn vanishing_cases() {
        let kinds = [A, E, L];
        for p in [2u64, 3] {
            for n in 0..3 {
                for &k in &kinds {
                    for m in 0..3 {
                        let x = gen(p, k, m);
                        assert!(ext1(&gen(p, A, n), &x).unwrap().is_zero());
                        assert!(ext1(&x, &gen(p, E, n)).unwrap().is_zero());
                        assert!(ext1(&x, &gen(p, L, n)).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn ext_from_l_to_a() {
        for p in [2u64, 3] {
            for m in 0..3u32 {
                for n in 0..3u32 {
                    let e = ext1(&gen(p, L, m), &gen(p, A, n)).unwrap();
                    assert_eq!(e.w_dim() as u64, p.pow(m.min(n)));
                    assert_eq!(e.v_dim(), e.w_dim());
                }
            }
        }
    }

    #[test]
    fn independent_of_the_chosen_stab() {
        let x = gen(2, L, 1).direct_sum(&gen(2, A, 0)).unwrap();
        let y = gen(2, A, 1).direct_sum(&gen(2, E, 0)).unwrap();
        let base = ext1(&x, &y).unwrap();
        for s in 2..4 {
            let e = ext1_at(&x, &y, s).unwrap();
            assert_eq!((e.w_dim(), e.v_dim()), (base.w_dim(), base.v_dim()));
        }
    }

    #[test]
    fn oracle_rejects_small_cutoff() {
        assert!(ext1_truncation_oracle(&gen(2, A, 2), &gen(2, A, 0), 2).is_err());
    }
}
