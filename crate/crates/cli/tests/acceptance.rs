//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use mackey_core::amodel::{
    evspec_fixed_split, is_isomorphic, isomorphism, EvSpecElement, FiniteLevelObject, GeneratorKind,
    RigidObject,
};
use mackey_core::burnside::{EvSeq, FiniteBurnsideElt, PullbackDecomposition};
use mackey_core::cyclic::CyclicModule;
use mackey_core::homext::{adams_maps, ext1, ext1_truncation_oracle};
use mackey_core::linalg::{rat, RatMatrix};
use mackey_core::mackey::{mackey_components, pi_a_orbit, td_split};
use mackey_core::random::{generator_sum, random_evseq, random_generator_terms, random_morphism, random_rational};
use mackey_core::Result;
use padic_mackey::checks::{
    exactness_failures, four_way_failures, grothendieck_failures, idempotent_failures, left_exactness_failures,
    marks_failures,
};
use padic_mackey::table;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use GeneratorKind::{A, E, L};

const KINDS: [GeneratorKind; 3] = [A, E, L];

fn gen(p: u64, kind: GeneratorKind, n: u32) -> Result<RigidObject> {
    RigidObject::generator(p, kind, n)
}

fn note(failures: &mut Vec<String>, ok: bool, label: impl FnOnce() -> String) {
    if !ok {
        failures.push(label());
    }
}

fn extend(failures: &mut Vec<String>, label: &str, found: Vec<String>) {
    failures.extend(found.into_iter().map(|f| format!("{label}: {f}")));
}

/// Kernel dimension of `x^{p^n} − 1`, computed from the action matrix.
fn fixed_dim_oracle(m: &CyclicModule, n: u32) -> usize {
    if m.dim() == 0 {
        return 0;
    }
    let g = m.action().pow(m.p().pow(n));
    (&g - &RatMatrix::identity(m.dim())).kernel().dim()
}

fn criterion_1() -> Result<Vec<String>> {
    let mut out = Vec::new();
    for n in 0..=4 {
        for m in 0..=4 {
            if n == m {
                continue;
            }
            for row in table::rows(2, n, m)? {
                note(&mut out, row.matches(), || {
                    format!("n={n} m={m} {}: got stable {} dev {} free {}", row.entry, row.hom.stable_dim, row.hom.dev_dims, row.hom.free_dims)
                });
            }
        }
    }
    Ok(out)
}

fn criterion_2() -> Result<Vec<String>> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        for n in 0..=3 {
            for m in 0..=3 {
                extend(&mut out, "four-way", four_way_failures(p, n, m, 5)?);
                let td = td_split(p, n, m, 5)?;
                for j in 0..=5 {
                    let expected = if j >= n.max(m) { p.pow(n.min(m)) } else { 0 };
                    note(&mut out, td.dim_at(j) == Some(expected), || format!("td p={p} n={n} m={m} j={j}"));
                }
            }
        }
    }
    Ok(out)
}

fn random_finite(rng: &mut ChaCha8Rng, p: u64, n: u32) -> Result<FiniteBurnsideElt> {
    FiniteBurnsideElt::new(p, n, (0..=n).map(|_| random_rational(rng)).collect())
}

fn criterion_3() -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        let p = [2u64, 3, 5][i % 3];
        let n = rng.gen_range(0..6);
        let (x, y) = (random_finite(&mut rng, p, n)?, random_finite(&mut rng, p, n)?);
        extend(&mut out, &format!("marks pair {i}"), marks_failures(&x, &y)?);
    }
    for p in [2u64, 3] {
        extend(&mut out, &format!("idempotents p={p}"), idempotent_failures(p, 8)?);
        for n in 0..=5 {
            extend(&mut out, &format!("grothendieck p={p}"), grothendieck_failures(p, n)?);
        }
    }
    for i in 0..100 {
        let p = [2u64, 3][i % 2];
        let (a, b) = (random_evseq(&mut rng, p), random_evseq(&mut rng, p));
        let n = rng.gen_range(0..8);
        note(&mut out, a.mul(&b)?.truncate(n) == a.truncate(n).mul(&b.truncate(n))?, || format!("truncation {i}"));
        note(&mut out, a.add(&b)?.truncate(n) == a.truncate(n).add(&b.truncate(n))?, || format!("truncation sum {i}"));
        note(&mut out, EvSeq::one(p)?.truncate(n) == EvSeq::one(p)?, || format!("truncation unit {i}"));
        let d = PullbackDecomposition::of(&a);
        note(&mut out, d.is_compatible() && d.reconstruct()? == a, || format!("pullback {i}"));
    }
    Ok(out)
}

fn criterion_4() -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..20 {
        let p = [2u64, 3][i % 2];
        let m = generator_sum(p, &random_generator_terms(&mut rng, 2, 3))?;
        let t = RigidObject::unit(p)?.tensor(&m)?;
        let w = isomorphism(&t, &m)?;
        note(&mut out, w.is_some_and(|f| f.validate().is_ok() && f.is_isomorphism()), || format!("U * M #{i}: {m}"));
    }
    for p in [2u64, 3] {
        for n in 0..=3 {
            for m in 0..=n {
                let a = CyclicModule::regular(p, n)?;
                let b = CyclicModule::regular(p, m)?.inflate(n)?;
                let lhs = a.tensor(&b)?.character();
                note(&mut out, lhs == a.character().scale(p.pow(m) as usize), || format!("regular p={p} n={n} m={m}"));
            }
        }
    }
    Ok(out)
}

fn criterion_5() -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [2u64, 3] {
        let mut sums: Vec<RigidObject> = Vec::new();
        for kind in KINDS {
            for i in 0..=3 {
                sums.push(gen(p, kind, i)?);
            }
        }
        for _ in 0..12 {
            sums.push(generator_sum(p, &random_generator_terms(&mut rng, 3, 3))?);
        }
        for n in 0..=3 {
            let (a, e, l) = (gen(p, A, n)?, gen(p, E, n)?, gen(p, L, n)?);
            for x in &sums {
                note(&mut out, ext1(&a, x)?.is_zero(), || format!("Ext(A({n}), {x}) p={p}"));
                note(&mut out, ext1(x, &e)?.is_zero(), || format!("Ext({x}, E({n})) p={p}"));
                note(&mut out, ext1(x, &l)?.is_zero(), || format!("Ext({x}, L({n})) p={p}"));
            }
            for m in 0..=3 {
                let d = ext1(&gen(p, L, m)?, &a)?;
                let w = p.pow(m.min(n)) as usize;
                note(&mut out, d.w_dim() == w && d.v_dim() == w, || {
                    format!("Ext(L({m}), A({n})) p={p}: W {} V {}", d.w_dim(), d.v_dim())
                });
            }
        }
    }
    for p in [2u64, 3] {
        for a in KINDS {
            for b in KINDS {
                for m in 0..=3 {
                    for n in 0..=3 {
                        let (x, y) = (gen(p, a, m)?, gen(p, b, n)?);
                        let d = ext1(&x, &y)?;
                        let s = x.stab().max(y.stab());
                        for cutoff in s + 3..=s + 8 {
                            let got = ext1_truncation_oracle(&x, &y, cutoff)?;
                            let slots = (cutoff - s + 1) as usize;
                            note(&mut out, got + d.v_dim() == slots * d.w_dim(), || {
                                format!("oracle p={p} {a}({m}) -> {b}({n}) K={cutoff}: {got}")
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn criterion_6() -> Result<Vec<String>> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        for n in 0..=3 {
            for m in 0..=3 {
                let (x, y) = (pi_a_orbit(p, n)?, pi_a_orbit(p, m)?);
                let maps = adams_maps(&x, &y, 0)?;
                note(&mut out, maps.is_pure_hom() && maps.hom.len() == 1, || format!("d=0 p={p} n={n} m={m}"));
                if let Some(t) = maps.hom.first() {
                    for j in 0..=5 {
                        let expected = if j >= n.max(m) { p.pow(n.min(m)) } else { 0 };
                        note(&mut out, t.hom.level_dim(j) == expected, || format!("slot p={p} n={n} m={m} j={j}"));
                    }
                }
                for d in [-3i64, -2, -1, 1, 2, 3] {
                    note(&mut out, adams_maps(&x, &y, d)?.is_zero(), || format!("d={d} p={p} n={n} m={m}"));
                }
            }
        }
    }
    Ok(out)
}

fn criterion_7() -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..20 {
        let p = [2u64, 3][i % 2];
        let m = generator_sum(p, &random_generator_terms(&mut rng, 2, 3))?;
        let n = generator_sum(p, &random_generator_terms(&mut rng, 2, 3))?;
        let f = random_morphism(&mut rng, &m, &n)?;
        extend(&mut out, &format!("exactness #{i}"), exactness_failures(&f)?);
        for kind in KINDS {
            for idx in 0..=2 {
                let label = format!("left exactness #{i} against {kind}({idx})");
                extend(&mut out, &label, left_exactness_failures(&gen(p, kind, idx)?, &f)?);
            }
        }
    }
    Ok(out)
}

fn random_level(rng: &mut ChaCha8Rng, p: u64, k: u32) -> Result<CyclicModule> {
    let mut m = CyclicModule::zero(p, k);
    for _ in 0..rng.gen_range(0..3) {
        m = m.direct_sum(&CyclicModule::regular(p, rng.gen_range(0..=k))?.inflate(k)?)?;
    }
    Ok(m)
}

fn criterion_8() -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in [2u64, 3] {
        for n in 0..3 {
            let r = gen(p, A, n + 1)?.restrict(1);
            let copies = gen(p, A, n)?.multiple(p as usize)?;
            let chars = r.template().character() == copies.template().character()
                && r.minf().character() == copies.minf().character();
            note(&mut out, chars, || format!("character of res A({}) p={p}", n + 1));
            let w = isomorphism(&r, &copies)?;
            note(&mut out, w.is_some_and(|f| f.is_isomorphism()), || format!("witness for res A({}) p={p}", n + 1));
        }
        for i in 0..10 {
            let n = rng.gen_range(0..3);
            let levels = (0..=n).map(|k| random_level(&mut rng, p, k)).collect::<Result<Vec<_>>>()?;
            let fin = FiniteLevelObject::new(p, levels.clone())?;
            let obj = RigidObject::inflate_finite(&fin);
            for k in 0..n + 3 {
                let expected = if k <= n { levels[k as usize].clone() } else { levels[n as usize].inflate(k)? };
                note(&mut out, obj.level(k).character() == expected.character(), || format!("level {k} of inflation #{i}"));
            }
            let tail = RigidObject::unit(p)?.multiple(levels[n as usize].dim())?;
            note(&mut out, is_isomorphic(&obj.restrict(n), &tail)?, || format!("restricted inflation #{i}"));
        }
        for m in 0..=3 {
            let a = gen(p, A, m)?;
            for n in 0..=3 {
                let r = a.restrict(n);
                for k in 0..=3 {
                    let lhs = mackey_components(&r, k)?;
                    let rhs = mackey_components(&a, n + k)?;
                    let ok = lhs.inf_dim == rhs.inf_dim && (0..=6).all(|j| lhs.component(j) == rhs.component(n + j));
                    note(&mut out, ok, || format!("mackey shift p={p} A({m}) n={n} k={k}"));
                }
            }
        }
    }
    Ok(out)
}

fn criterion_9() -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in [2u64, 3] {
        let samples = [
            ("U", RigidObject::unit(p)?),
            ("A(1)", gen(p, A, 1)?),
            ("A(2)", gen(p, A, 2)?),
            ("E(1) + L(0)", gen(p, E, 1)?.direct_sum(&gen(p, L, 0)?)?),
        ];
        for (name, m) in &samples {
            for n in 0..=3 {
                let split = evspec_fixed_split(m, n)?;
                note(&mut out, split.is_consistent(), || format!("{name} n={n} p={p}"));
                note(&mut out, split.extra_dim == m.level_dim(n), || format!("{name} n={n}: extra summand"));
                note(&mut out, split.lhs.inf_dim == fixed_dim_oracle(&m.minf().inflate(m.stab().max(n))?, n), || {
                    format!("{name} n={n}: fixed part of M_inf")
                });
                for k in 0..n + 4 {
                    let expected = if k < n { 0 } else { fixed_dim_oracle(&m.level(k), n.min(k)) as u64 };
                    note(&mut out, split.lhs.level_dims.get(k as usize) == expected, || format!("{name} n={n}: level {k}"));
                }
                let base = (0..m.minf().dim()).map(|_| rat(rng.gen_range(-2..=2))).collect();
                let mut overrides = BTreeMap::new();
                for k in n..n + 3 {
                    overrides.insert(k, (0..m.level_dim(k)).map(|_| rat(rng.gen_range(-2..=2))).collect());
                }
                let x = EvSpecElement::new(m.clone(), n, base, overrides)?;
                let (tail, head) = x.split_first();
                note(&mut out, EvSpecElement::join_first(&tail, head)? == x, || format!("{name} n={n}: split round trip"));
                note(&mut out, x.is_fixed_by(n) == tail.is_fixed_by(n), || format!("{name} n={n}: fixedness of the split"));
            }
        }
    }
    Ok(out)
}

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Result<Vec<String>>);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "hom table, p = 2, indices <= 4", Some(Duration::from_secs(1)), criterion_1),
        (2, "four-way orbit dimension agreement", Some(Duration::from_secs(10)), criterion_2),
        (3, "Burnside ring calculus", None, criterion_3),
        (4, "monoidal unit and regular tensor characters", None, criterion_4),
        (5, "Ext vanishing, L to A, truncation oracle", Some(Duration::from_secs(30)), criterion_5),
        (6, "Adams sequence on orbits", None, criterion_6),
        (7, "exactness and left exactness of Hom", None, criterion_7),
        (8, "restriction, finite inflation, Mackey shift", None, criterion_8),
        (9, "fixed-point splitting of the product", None, criterion_9),
    ];
    let mut all = true;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let mut problems = match result {
            Ok(f) => f,
            Err(e) => vec![format!("error: {e}")],
        };
        if let Some(b) = budget {
            if elapsed > b {
                problems.push(format!("took {elapsed:.2?}, budget {b:?}"));
            }
        }
        let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {id}: {name} ({elapsed:.2?})");
        for p in problems.iter().take(10) {
            println!("    {p}");
        }
        all &= problems.is_empty();
    }
    if !all {
        std::process::exit(1);
    }
}
