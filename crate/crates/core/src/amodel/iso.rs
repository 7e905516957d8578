use crate::amodel::morphism::RigidMorphism;
use crate::amodel::object::RigidObject;
use crate::cyclic::{adapted_bases, module_isomorphism};
use crate::error::{ensure_same_prime, Result};

/// An explicit isomorphism `M → N`, or `None` when the objects are not
/// isomorphic.
///
/// The levels below the common stab, the templates and the modules at `∞`
/// must have equal characters, and the structure maps must have the same
/// rank on every isotypic piece. Bases adapted to both structure maps then
/// give the witness directly.
pub fn isomorphism(m: &RigidObject, n: &RigidObject) -> Result<Option<RigidMorphism>> {
    ensure_same_prime(m.p(), n.p())?;
    let s = m.stab().max(n.stab());
    let (mr, nr) = (m.raise_stab(s), n.raise_stab(s));
    let mut level_maps = Vec::with_capacity(s as usize);
    for (a, b) in mr.levels().iter().zip(nr.levels()) {
        match module_isomorphism(a, b)? {
            Some(x) => level_maps.push(x),
            None => return Ok(None),
        }
    }
    if mr.template().character() != nr.template().character()
        || mr.minf().character() != nr.minf().character()
    {
        return Ok(None);
    }
    let (src_m, tgt_m, sig_m) = adapted_bases(mr.minf(), mr.template(), mr.structure_map());
    let (src_n, tgt_n, sig_n) = adapted_bases(nr.minf(), nr.template(), nr.structure_map());
    if sig_m != sig_n {
        return Ok(None);
    }
    let inv = |x: &crate::linalg::RatMatrix| x.inverse().expect("adapted basis is a basis");
    let infinity = &src_n * &inv(&src_m);
    let stable = &tgt_n * &inv(&tgt_m);
    let f = RigidMorphism::new(m.clone(), n.clone(), level_maps, stable, infinity)?;
    debug_assert!(f.is_isomorphism());
    Ok(Some(f))
}

pub fn is_isomorphic(m: &RigidObject, n: &RigidObject) -> Result<bool> {
    Ok(isomorphism(m, n)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amodel::object::GeneratorKind::{self, A, E, L};

    fn gen(p: u64, kind: GeneratorKind, n: u32) -> RigidObject {
        RigidObject::generator(p, kind, n).unwrap()
    }

    #[test]
    fn self_isomorphism() {
        let m = gen(2, A, 2).direct_sum(&gen(2, E, 1)).unwrap();
        let f = isomorphism(&m, &m).unwrap().unwrap();
        assert!(f.is_isomorphism());
        assert!(!is_isomorphic(&gen(2, A, 0), &gen(2, L, 0)).unwrap());
    }

    #[test]
    fn unit_is_a_tensor_unit() {
        let m = gen(2, A, 2).direct_sum(&gen(2, E, 1)).unwrap();
        let u = RigidObject::unit(2).unwrap();
        assert!(is_isomorphic(&u.tensor(&m).unwrap(), &m).unwrap());
    }

    #[test]
    fn tensor_of_a1_with_itself() {
        let a1 = gen(2, A, 1);
        let t = a1.tensor(&a1).unwrap();
        let s = a1.direct_sum(&a1).unwrap();
        let f = isomorphism(&t, &s).unwrap().unwrap();
        assert!(f.is_isomorphism());
        f.validate().unwrap();
    }

    #[test]
    fn structure_map_rank_matters() {
        // Same characters everywhere as U, but with c = 0.
        let q = crate::cyclic::CyclicModule::trivial(3, 0, 1);
        let split = RigidObject::new(3, vec![], q.clone(), q, crate::linalg::RatMatrix::zeros(1, 1))
            .unwrap();
        let u = gen(3, A, 0);
        assert!(!is_isomorphic(&u, &split).unwrap());
        assert!(is_isomorphic(&split, &split).unwrap());
        let x = gen(3, E, 0).direct_sum(&gen(3, L, 0)).unwrap();
        let y = gen(3, L, 0).direct_sum(&gen(3, E, 0)).unwrap();
        assert!(is_isomorphic(&x, &y).unwrap());
    }
}
