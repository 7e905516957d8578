//! Random objects for property checks.

use rand::Rng;

use crate::amodel::{GeneratorKind, RigidMorphism, RigidObject};
use crate::burnside::EvSeq;
use crate::error::Result;
use crate::homext::hom_space;
use crate::linalg::{rat, rat_frac, Rational};

const KINDS: [GeneratorKind; 3] = [GeneratorKind::A, GeneratorKind::E, GeneratorKind::L];

/// Between one and `max_terms` generators with indices up to `max_index`.
pub fn random_generator_terms<R: Rng>(
    rng: &mut R,
    max_index: u32,
    max_terms: usize,
) -> Vec<(GeneratorKind, u32)> {
    let count = rng.gen_range(1..=max_terms);
    (0..count).map(|_| (KINDS[rng.gen_range(0..3)], rng.gen_range(0..=max_index))).collect()
}

pub fn generator_sum(p: u64, terms: &[(GeneratorKind, u32)]) -> Result<RigidObject> {
    let mut acc = RigidObject::zero(p)?;
    for &(kind, n) in terms {
        acc = acc.direct_sum(&RigidObject::generator(p, kind, n)?)?;
    }
    Ok(acc)
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rat_frac(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

pub fn random_evseq<R: Rng>(rng: &mut R, p: u64) -> EvSeq {
    let len = rng.gen_range(0..6);
    let prefix = (0..len).map(|_| random_rational(rng)).collect();
    EvSeq::new(p, prefix, random_rational(rng)).expect("prime")
}

/// A random combination of the stable generators of `Hom(M, N)` and of its
/// deviation and free generators at a few levels around the stab.
pub fn random_morphism<R: Rng>(
    rng: &mut R,
    m: &RigidObject,
    n: &RigidObject,
) -> Result<RigidMorphism> {
    let h = hom_space(m, n)?;
    let mut f = RigidMorphism::zero(m, n)?;
    let add = |f: &mut RigidMorphism, g: &RigidMorphism, rng: &mut R| -> Result<()> {
        let a = rat(rng.gen_range(-2..=2));
        *f = f.add(&g.scale(&a))?;
        Ok(())
    };
    for g in h.stable_generators() {
        add(&mut f, g, rng)?;
    }
    for k in 0..h.stab() + 2 {
        if rng.gen_bool(0.5) {
            for g in h.deviation_generators(k)? {
                add(&mut f, &g, rng)?;
            }
        }
        if rng.gen_bool(0.3) {
            for g in h.free_generators(k)? {
                add(&mut f, &g, rng)?;
            }
        }
    }
    Ok(f)
}
