use mackey_core::amodel::{GeneratorKind, RigidMorphism, RigidObject};
use mackey_core::burnside::EvSeq;
use mackey_core::homext::{ext1, ext1_truncation_oracle, hom_space, hom_space_at, HomDescriptor};
use mackey_core::linalg::{RatMatrix, Rational};
use mackey_core::random::{generator_sum, random_evseq, random_generator_terms, random_morphism};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dimension of the kernel of `g ↦ f ∘ g` on a list of generators, reading
/// each composite through `view`.
fn kernel_dim(
    f: &RigidMorphism,
    gens: &[RigidMorphism],
    view: impl Fn(&RigidMorphism) -> Vec<Rational>,
) -> usize {
    if gens.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<Rational>> = gens.iter().map(|g| view(&f.compose(g).unwrap())).collect();
    let height = cols[0].len();
    gens.len() - RatMatrix::from_columns(height, &cols).rank()
}

fn check_left_exact(p_obj: &RigidObject, f: &RigidMorphism) {
    let (k, _) = f.kernel().unwrap();
    let s = [p_obj.stab(), f.source().stab(), f.target().stab(), f.stab(), k.stab()]
        .into_iter()
        .max()
        .unwrap();
    let hm: HomDescriptor = hom_space_at(p_obj, f.source(), s).unwrap();
    let hk = hom_space_at(p_obj, &k, s).unwrap();
    let stable_view = |h: &RigidMorphism| {
        let mut v = h.stable_map().flatten();
        v.extend(h.infinity_map().flatten());
        v
    };
    assert_eq!(kernel_dim(f, hm.stable_generators(), stable_view), hk.stable_dim);
    for lvl in 0..s + 2 {
        let at = |h: &RigidMorphism| h.map_at(lvl).flatten();
        let dev = hm.deviation_generators(lvl).unwrap();
        assert_eq!(kernel_dim(f, &dev, at) as u64, hk.dev_dims.get(lvl as usize), "dev slot {lvl}");
        let free = hm.free_generators(lvl).unwrap();
        assert_eq!(kernel_dim(f, &free, at) as u64, hk.free_dims.get(lvl as usize), "free slot {lvl}");
    }
}

fn endo_of_unit(a: &EvSeq) -> RigidMorphism {
    let u = RigidObject::unit(a.p()).unwrap();
    let scalar = |x: &Rational| RatMatrix::new(1, 1, vec![x.clone()]).unwrap();
    RigidMorphism::new(
        u.clone(),
        u,
        a.prefix().iter().map(scalar).collect(),
        scalar(a.tail()),
        scalar(a.tail()),
    )
    .unwrap()
}

fn as_sequence(f: &RigidMorphism) -> EvSeq {
    let prefix = f.level_maps().iter().map(|m| m.get(0, 0).clone()).collect();
    EvSeq::new(f.source().p(), prefix, f.stable_map().get(0, 0).clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hom_is_left_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = generator_sum(2, &random_generator_terms(&mut rng, 2, 3)).unwrap();
        let n = generator_sum(2, &random_generator_terms(&mut rng, 2, 3)).unwrap();
        let f = random_morphism(&mut rng, &m, &n).unwrap();
        for kind in [GeneratorKind::A, GeneratorKind::E, GeneratorKind::L] {
            for idx in 0..2 {
                check_left_exact(&RigidObject::generator(2, kind, idx).unwrap(), &f);
            }
        }
    }

    #[test]
    fn endomorphisms_of_unit_form_the_burnside_ring(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_evseq(&mut rng, 3);
        let b = random_evseq(&mut rng, 3);
        let (fa, fb) = (endo_of_unit(&a), endo_of_unit(&b));
        prop_assert_eq!(as_sequence(&fa.compose(&fb).unwrap()), a.mul(&b).unwrap());
        prop_assert_eq!(as_sequence(&fa.add(&fb).unwrap()), a.add(&b).unwrap());
        prop_assert_eq!(as_sequence(&fa), a);
    }

    #[test]
    fn hom_dims_are_symmetric_levelwise(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = generator_sum(3, &random_generator_terms(&mut rng, 2, 2)).unwrap();
        let n = generator_sum(3, &random_generator_terms(&mut rng, 2, 2)).unwrap();
        let (h, g) = (hom_space(&m, &n).unwrap(), hom_space(&n, &m).unwrap());
        for k in 0..5 {
            prop_assert_eq!(h.level_dim(k), g.level_dim(k));
        }
    }
}

#[test]
fn ext_oracle_growth_on_generator_pairs() {
    let kinds = [GeneratorKind::A, GeneratorKind::E, GeneratorKind::L];
    for p in [2u64, 3] {
        for &a in &kinds {
            for &b in &kinds {
                for m in 0..2 {
                    for n in 0..2 {
                        let x = RigidObject::generator(p, a, m).unwrap();
                        let y = RigidObject::generator(p, b, n).unwrap();
                        let e = ext1(&x, &y).unwrap();
                        let s = x.stab().max(y.stab());
                        let values: Vec<usize> = (s + 3..=s + 5)
                            .map(|k| ext1_truncation_oracle(&x, &y, k).unwrap())
                            .collect();
                        for (i, v) in values.iter().enumerate() {
                            assert_eq!(*v, e.truncated_dim(s, s + 3 + i as u32), "{a}({m}) {b}({n})");
                        }
                    }
                }
            }
        }
    }
}
