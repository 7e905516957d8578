#![allow(dead_code)]

use mackey_core::cyclic::{pow_u64, CyclicModule};
use mackey_core::linalg::{rat, RatMatrix, Rational};
use rand::Rng;

/// Orbit types in `Z/p^a × Z/p^b` with the diagonal translation action,
/// found by walking orbits. Entry `c` counts orbits with `p^c` points.
pub fn orbit_product_counts(p: u64, a: u32, b: u32) -> Vec<u64> {
    let (na, nb) = (pow_u64(p, a), pow_u64(p, b));
    let mut seen = vec![false; (na * nb) as usize];
    let mut counts = vec![0u64; a.max(b) as usize + 1];
    for start in 0..na * nb {
        if seen[start as usize] {
            continue;
        }
        let (mut x, mut y, mut size) = (start / nb, start % nb, 0u64);
        while !seen[(x * nb + y) as usize] {
            seen[(x * nb + y) as usize] = true;
            size += 1;
            x = (x + 1) % na;
            y = (y + 1) % nb;
        }
        let mut c = 0;
        while pow_u64(p, c) < size {
            c += 1;
        }
        assert_eq!(pow_u64(p, c), size);
        counts[c as usize] += 1;
    }
    counts
}

/// Points of the orbit with `p^a` elements fixed by translation by `p^j`.
pub fn orbit_fixed_points(p: u64, a: u32, j: u32) -> u64 {
    let size = pow_u64(p, a);
    let shift = pow_u64(p, j.min(a)) % size;
    (0..size).filter(|&x| (x + shift) % size == x).count() as u64
}

/// `dim {X : B X = X A}` from the Sylvester system `(I ⊗ B − Aᵀ ⊗ I) vec X = 0`.
pub fn sylvester_hom_dim(a: &RatMatrix, b: &RatMatrix) -> usize {
    let (m, n) = (a.rows(), b.rows());
    if m == 0 || n == 0 {
        return 0;
    }
    let lhs = RatMatrix::identity(m).kron(b);
    let rhs = a.transpose().kron(&RatMatrix::identity(n));
    (&lhs - &rhs).kernel().dim()
}

/// An invertible integer matrix: a product of random elementary matrices.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    let mut m = RatMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = rat(rng.gen_range(-2..=2));
        let mut e = RatMatrix::identity(n);
        e.set(i, j, c);
        m = &m * &e;
    }
    m
}

/// A direct sum of isotypic pieces of regular modules, in a scrambled basis.
pub fn random_module<R: Rng>(rng: &mut R, p: u64, level: u32) -> CyclicModule {
    let mut acc = CyclicModule::zero(p, level);
    for _ in 0..rng.gen_range(0..3) {
        let k = rng.gen_range(0..=level);
        let reg = CyclicModule::regular(p, k).unwrap();
        let j = rng.gen_range(0..=k);
        let piece = reg.submodule(&reg.isotypic_component(j).unwrap()).unwrap();
        acc = acc.direct_sum(&piece).unwrap();
    }
    let q = random_invertible(rng, acc.dim());
    let action = &(&q * acc.action()) * &q.inverse().unwrap();
    CyclicModule::new(p, level, action).unwrap()
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    mackey_core::random::random_rational(rng)
}
