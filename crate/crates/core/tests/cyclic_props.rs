mod common;

use mackey_core::cyclic::{equivariant_hom_basis, module_isomorphism, CyclicModule};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(seed: u64, p: u64, level: u32) -> (CyclicModule, CyclicModule) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (common::random_module(&mut rng, p, level), common::random_module(&mut rng, p, level))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hom_basis_matches_sylvester(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3]), level in 0u32..3) {
        let (m, n) = pair(seed, p, level);
        let basis = equivariant_hom_basis(&m, &n).unwrap();
        prop_assert_eq!(basis.len(), common::sylvester_hom_dim(m.action(), n.action()));
        prop_assert_eq!(basis.len(), m.character().hom_dim(&n.character()));
        for x in &basis {
            prop_assert!(m.is_equivariant_map(&n, x));
        }
    }

    #[test]
    fn hom_dimension_is_symmetric(seed in any::<u64>(), level in 0u32..3) {
        let (m, n) = pair(seed, 3, level);
        prop_assert_eq!(
            equivariant_hom_basis(&m, &n).unwrap().len(),
            equivariant_hom_basis(&n, &m).unwrap().len()
        );
    }

    #[test]
    fn isomorphic_iff_same_character(seed in any::<u64>(), level in 0u32..3) {
        let (m, n) = pair(seed, 2, level);
        let iso = module_isomorphism(&m, &n).unwrap();
        prop_assert_eq!(iso.is_some(), m.character() == n.character());
        if let Some(x) = iso {
            prop_assert!(m.is_equivariant_map(&n, &x));
            prop_assert!(x.inverse().is_some());
        }
        // A module is always isomorphic to a scrambled copy of itself.
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let q = common::random_invertible(&mut rng, m.dim());
        let conj = CyclicModule::new(2, level, &(&q * m.action()) * &q.inverse().unwrap()).unwrap();
        prop_assert!(module_isomorphism(&m, &conj).unwrap().is_some());
    }

    #[test]
    fn character_determines_isotypic_dims(seed in any::<u64>(), level in 0u32..3) {
        let (m, _) = pair(seed, 3, level);
        let ch = m.character();
        for (j, d) in ch.isotypic_dims().iter().enumerate() {
            prop_assert_eq!(m.isotypic_component(j as u32).unwrap().dim(), *d);
        }
    }
}

#[test]
fn regular_tensor_is_a_multiple() {
    for p in [2u64, 3] {
        for m in 0..=3u32 {
            for n in m..=3u32 {
                let a = CyclicModule::regular(p, n).unwrap();
                let b = CyclicModule::regular(p, m).unwrap();
                let t = a.tensor(&b).unwrap().character();
                assert_eq!(t, a.character().scale(p.pow(m) as usize), "p={p} n={n} m={m}");
            }
        }
    }
}
