//! Invariant suites run by the `check` command.

use mackey_core::amodel::{
    evspec_fixed_split, is_isomorphic, isomorphism, FiniteLevelObject, GeneratorKind, RigidMorphism,
    RigidObject,
};
use mackey_core::burnside::{EvSeq, FiniteBurnsideElt, PullbackDecomposition};
use mackey_core::cyclic::{equivariant_hom_basis, CyclicModule};
use mackey_core::homext::{adams_maps, ext1, ext1_truncation_oracle, hom_space, hom_space_at};
use mackey_core::linalg::{rat, RatMatrix, Rational};
use mackey_core::mackey::{mackey_components, orbit_hom, pi_a_orbit, td_split, TD_MAX_PRIME};
use mackey_core::random::{generator_sum, random_evseq, random_generator_terms, random_morphism, random_rational};
use mackey_core::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::expr::{parse, random_expr};

const KINDS: [GeneratorKind; 3] = [GeneratorKind::A, GeneratorKind::E, GeneratorKind::L];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), passed: 0, failed: 0, failures: Vec::new() }
    }

    fn record(&mut self, label: impl FnOnce() -> String, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.failures.push(label());
        }
    }

    /// Records a check whose computation may itself fail; errors count as failures.
    fn run(&mut self, label: impl Fn() -> String, f: impl FnOnce() -> Result<bool>) {
        match f() {
            Ok(ok) => self.record(label, ok),
            Err(e) => {
                let l = label();
                self.record(|| format!("{l}: {e}"), false)
            }
        }
    }

    fn absorb(&mut self, label: &str, failures: Result<Vec<String>>) {
        match failures {
            Ok(f) if f.is_empty() => self.passed += 1,
            Ok(f) => {
                self.failed += 1;
                self.failures.extend(f.into_iter().map(|m| format!("{label}: {m}")));
            }
            Err(e) => {
                self.failed += 1;
                self.failures.push(format!("{label}: {e}"));
            }
        }
    }
}

/// Largest generator index exercised at `p`, keeping modules at most `p^3`-dimensional for small `p`.
fn max_index(p: u64) -> u32 {
    match p {
        2 | 3 => 3,
        5 => 2,
        _ => 1,
    }
}

pub fn run_all(p: u64, seed: u64) -> Vec<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        linalg_suite(&mut rng),
        burnside_suite(&mut rng, p),
        cyclic_suite(p),
        amodel_suite(&mut rng, p),
        homext_suite(&mut rng, p),
        mackey_suite(p),
        evspec_suite(p),
        parser_suite(&mut rng, p),
    ]
}


fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RatMatrix {
    let data = (0..rows * cols).map(|_| rat(rng.gen_range(-2..=2))).collect();
    RatMatrix::new(rows, cols, data).expect("shape")
}

fn linalg_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut r = SuiteReport::new("linalg");
    for i in 0..30 {
        let (rows, cols) = (rng.gen_range(1..6), rng.gen_range(1..6));
        let a = random_matrix(rng, rows, cols);
        let ker = a.kernel();
        r.record(|| format!("rank-nullity #{i}"), a.rank() + ker.dim() == cols);
        r.record(|| format!("kernel annihilated #{i}"), (&a * &ker.basis_columns()).is_zero());
        r.record(|| format!("rref idempotent #{i}"), a.rref().rref() == a.rref());
        r.record(|| format!("transpose rank #{i}"), a.transpose().rank() == a.rank());
        let sq = random_matrix(rng, rows, rows);
        if let Some(inv) = sq.inverse() {
            r.record(|| format!("inverse #{i}"), (&sq * &inv).is_identity());
        } else {
            r.record(|| format!("singular rank #{i}"), sq.rank() < rows);
        }
    }
    r
}

fn random_finite<R: Rng>(rng: &mut R, p: u64, n: u32) -> Result<FiniteBurnsideElt> {
    FiniteBurnsideElt::new(p, n, (0..=n).map(|_| random_rational(rng)).collect())
}

/// Marks are multiplicative and additive, and determine the element.
pub fn marks_failures(x: &FiniteBurnsideElt, y: &FiniteBurnsideElt) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let prod: Vec<Rational> = x.marks().iter().zip(y.marks()).map(|(a, b)| a * b).collect();
    if x.mul(y)?.marks() != prod {
        out.push("marks not multiplicative".into());
    }
    let sum: Vec<Rational> = x.marks().iter().zip(y.marks()).map(|(a, b)| a + b).collect();
    if x.add(y)?.marks() != sum {
        out.push("marks not additive".into());
    }
    if FiniteBurnsideElt::from_marks(x.p(), &x.marks())? != *x {
        out.push("marks do not determine the element".into());
    }
    Ok(out)
}

/// `e_i e_j = δ_ij e_i` and `f_k = 1 − Σ_{i<k} e_i` for indices up to `max`.
pub fn idempotent_failures(p: u64, max: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let one = EvSeq::one(p)?;
    let es = (0..=max).map(|i| EvSeq::idempotent_e(p, i)).collect::<Result<Vec<_>>>()?;
    let mut f = one;
    for i in 0..=max {
        for j in 0..=max {
            let prod = es[i].mul(&es[j])?;
            let ok = if i == j { prod == es[i] } else { prod.is_zero() };
            if !ok {
                out.push(format!("e_{i} e_{j}"));
            }
        }
        if EvSeq::idempotent_f(p, i)? != f {
            out.push(format!("f_{i}"));
        }
        f = f.sub(&es[i])?;
    }
    Ok(out)
}

/// The Grothendieck-basis `e_n` has marks `δ_{jn}` and maps to the indicator sequence.
pub fn grothendieck_failures(p: u64, n: u32) -> Result<Vec<String>> {
    let e = FiniteBurnsideElt::grothendieck_e(p, n)?;
    let mut out = Vec::new();
    for (j, m) in e.marks().iter().enumerate() {
        if *m != rat((j == n as usize) as i64) {
            out.push(format!("mark {j} of e_{n} is {m}"));
        }
    }
    if e.colim_embed() != EvSeq::idempotent_e(p, n as usize)? {
        out.push(format!("e_{n} does not embed as an indicator"));
    }
    Ok(out)
}

fn burnside_suite(rng: &mut ChaCha8Rng, p: u64) -> SuiteReport {
    let mut r = SuiteReport::new("burnside");
    for i in 0..30 {
        let n = rng.gen_range(0..5);
        let pair = random_finite(rng, p, n).and_then(|x| Ok((x, random_finite(rng, p, n)?)));
        r.absorb(&format!("marks #{i}"), pair.and_then(|(x, y)| marks_failures(&x, &y)));
    }
    r.absorb("idempotents", idempotent_failures(p, 8));
    for n in 0..=5 {
        r.absorb(&format!("grothendieck e_{n}"), grothendieck_failures(p, n));
    }
    for i in 0..30 {
        let (a, b) = (random_evseq(rng, p), random_evseq(rng, p));
        let n = rng.gen_range(0..6);
        r.run(
            || format!("truncation #{i}"),
            || Ok(a.mul(&b)?.truncate(n) == a.truncate(n).mul(&b.truncate(n))?),
        );
        let d = PullbackDecomposition::of(&a);
        r.run(|| format!("pullback #{i}"), || Ok(d.is_compatible() && d.reconstruct()? == a));
    }
    r
}

fn cyclic_suite(p: u64) -> SuiteReport {
    let mut r = SuiteReport::new("cyclic");
    for n in 0..=max_index(p) {
        for m in 0..=n {
            r.run(
                || format!("regular({n}) * regular({m})"),
                || {
                    let a = CyclicModule::regular(p, n)?;
                    let b = CyclicModule::regular(p, m)?.inflate(n)?;
                    Ok(a.tensor(&b)?.character() == a.character().scale(p.pow(m) as usize))
                },
            );
            r.run(
                || format!("hom basis regular({n}) -> regular({m})"),
                || {
                    let a = CyclicModule::regular(p, n)?;
                    let b = CyclicModule::regular(p, m)?.inflate(n)?;
                    let basis = equivariant_hom_basis(&a, &b)?;
                    let equivariant = basis.iter().all(|f| a.is_equivariant_map(&b, f));
                    Ok(equivariant && basis.len() == a.character().hom_dim(&b.character()))
                },
            );
        }
    }
    r
}

/// `ker f → M → N → coker f` is exact at every level and at infinity, and
/// the image agrees with the kernel of the cokernel map.
pub fn exactness_failures(f: &RigidMorphism) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let (k, i) = f.kernel()?;
    let (c, q) = f.cokernel()?;
    if !f.compose(&i)?.is_zero() || !q.compose(f)?.is_zero() {
        out.push("composites are not zero".into());
    }
    let top = [f.stab(), i.stab(), q.stab()].into_iter().max().unwrap_or(0) + 2;
    for lvl in 0..top {
        let rank = f.map_at(lvl).rank();
        let ok = k.level_dim(lvl) + rank == f.source().level_dim(lvl)
            && c.level_dim(lvl) + rank == f.target().level_dim(lvl)
            && i.map_at(lvl).rank() == k.level_dim(lvl)
            && q.map_at(lvl).rank() == c.level_dim(lvl);
        if !ok {
            out.push(format!("level {lvl}"));
        }
    }
    let rank = f.infinity_map().rank();
    let ok = k.minf().dim() + rank == f.source().minf().dim()
        && c.minf().dim() + rank == f.target().minf().dim()
        && i.infinity_map().rank() == k.minf().dim()
        && q.infinity_map().rank() == c.minf().dim();
    if !ok {
        out.push("infinity".into());
    }
    let (im, _) = f.image()?;
    let (kc, _) = q.kernel()?;
    if !is_isomorphic(&im, &kc)? {
        out.push("image differs from the kernel of the cokernel".into());
    }
    Ok(out)
}

/// Dimension of the kernel of `g ↦ f ∘ g` on `gens`, read through `view`.
fn composite_kernel_dim(
    f: &RigidMorphism,
    gens: &[RigidMorphism],
    view: impl Fn(&RigidMorphism) -> Vec<Rational>,
) -> Result<usize> {
    if gens.is_empty() {
        return Ok(0);
    }
    let cols = gens.iter().map(|g| Ok(view(&f.compose(g)?))).collect::<Result<Vec<_>>>()?;
    Ok(gens.len() - RatMatrix::from_columns(cols[0].len(), &cols).rank())
}

/// `dim Hom(P, ker f) = dim ker(Hom(P, M) → Hom(P, N))` in the stable slot
/// and in each deviation and free slot up to two past the common stab.
pub fn left_exactness_failures(obj: &RigidObject, f: &RigidMorphism) -> Result<Vec<String>> {
    let (k, _) = f.kernel()?;
    let s = [obj.stab(), f.source().stab(), f.target().stab(), f.stab(), k.stab()]
        .into_iter()
        .max()
        .unwrap_or(0);
    let hm = hom_space_at(obj, f.source(), s)?;
    let hk = hom_space_at(obj, &k, s)?;
    let mut out = Vec::new();
    let stable_view = |h: &RigidMorphism| {
        let mut v = h.stable_map().flatten();
        v.extend(h.infinity_map().flatten());
        v
    };
    if composite_kernel_dim(f, hm.stable_generators(), stable_view)? != hk.stable_dim {
        out.push("stable slot".into());
    }
    for lvl in 0..s + 2 {
        let at = |h: &RigidMorphism| h.map_at(lvl).flatten();
        if composite_kernel_dim(f, &hm.deviation_generators(lvl)?, at)? as u64 != hk.dev_dims.get(lvl as usize) {
            out.push(format!("deviation slot {lvl}"));
        }
        if composite_kernel_dim(f, &hm.free_generators(lvl)?, at)? as u64 != hk.free_dims.get(lvl as usize) {
            out.push(format!("free slot {lvl}"));
        }
    }
    Ok(out)
}

fn amodel_suite(rng: &mut ChaCha8Rng, p: u64) -> SuiteReport {
    let mut r = SuiteReport::new("amodel");
    for i in 0..8 {
        let (top, terms) = if p <= 3 { (2, 3) } else { (1, 2) };
        let m = generator_sum(p, &random_generator_terms(rng, top, terms));
        let n = generator_sum(p, &random_generator_terms(rng, top, terms - 1));
        let (m, n) = match (m, n) {
            (Ok(m), Ok(n)) => (m, n),
            (Err(e), _) | (_, Err(e)) => {
                r.record(|| format!("objects #{i}: {e}"), false);
                continue;
            }
        };
        r.run(
            || format!("unit tensor #{i}"),
            || {
                let t = RigidObject::unit(p)?.tensor(&m)?;
                Ok(isomorphism(&t, &m)?.is_some_and(|w| w.is_isomorphism()))
            },
        );
        r.run(|| format!("tensor symmetric #{i}"), || is_isomorphic(&m.tensor(&n)?, &n.tensor(&m)?));
        let f = random_morphism(rng, &m, &n);
        r.absorb(&format!("exactness #{i}"), f.as_ref().map_err(Clone::clone).and_then(exactness_failures));
        if let Ok(f) = f {
            for kind in KINDS {
                let obj = RigidObject::generator(p, kind, 1);
                r.absorb(
                    &format!("left exactness #{i} against {kind}(1)"),
                    obj.and_then(|o| left_exactness_failures(&o, &f)),
                );
            }
        }
    }
    for n in 0..max_index(p) {
        r.run(
            || format!("restrict A({}) by 1", n + 1),
            || {
                let res = RigidObject::generator(p, GeneratorKind::A, n + 1)?.restrict(1);
                let copies = RigidObject::generator(p, GeneratorKind::A, n)?.multiple(p as usize)?;
                Ok(isomorphism(&res, &copies)?.is_some_and(|w| w.is_isomorphism()))
            },
        );
        r.run(
            || format!("inflate regular levels to {n} then restrict"),
            || {
                let levels = (0..=n).map(|k| CyclicModule::regular(p, k)).collect::<Result<Vec<_>>>()?;
                let inflated = RigidObject::inflate_finite(&FiniteLevelObject::new(p, levels)?);
                let expected = RigidObject::unit(p)?.multiple(p.pow(n) as usize)?;
                is_isomorphic(&inflated.restrict(n), &expected)
            },
        );
    }
    r
}

fn homext_suite(rng: &mut ChaCha8Rng, p: u64) -> SuiteReport {
    let mut r = SuiteReport::new("homext");
    match crate::table::rows(p, 1, 2) {
        Ok(rows) => {
            for row in rows {
                r.record(|| format!("table entry {}", row.entry), row.matches());
            }
        }
        Err(e) => r.record(|| format!("table: {e}"), false),
    }
    for a in KINDS {
        for b in KINDS {
            for m in 0..2 {
                for n in 0..2 {
                    r.run(
                        || format!("ext oracle {a}({m}) -> {b}({n})"),
                        || {
                            let x = RigidObject::generator(p, a, m)?;
                            let y = RigidObject::generator(p, b, n)?;
                            let e = ext1(&x, &y)?;
                            let s = x.stab().max(y.stab());
                            for cutoff in s + 1..=s + 4 {
                                if ext1_truncation_oracle(&x, &y, cutoff)? != e.truncated_dim(s, cutoff) {
                                    return Ok(false);
                                }
                            }
                            Ok(true)
                        },
                    );
                }
            }
        }
    }
    for i in 0..6 {
        let top = max_index(p).min(2);
        let terms = random_generator_terms(rng, top, 3);
        let n = rng.gen_range(0..=top);
        r.run(
            || format!("ext vanishing #{i}"),
            || {
                let x = generator_sum(p, &terms)?;
                Ok(ext1(&RigidObject::generator(p, GeneratorKind::A, n)?, &x)?.is_zero()
                    && ext1(&x, &RigidObject::generator(p, GeneratorKind::E, n)?)?.is_zero()
                    && ext1(&x, &RigidObject::generator(p, GeneratorKind::L, n)?)?.is_zero())
            },
        );
    }
    r
}

/// Compares the orbit count, the orbit Hom shape, the Mackey value of `A(m)`
/// at `Z_p/p^n` and the Hom slots of `Hom(A(n), A(m))` for `j ≤ jmax`.
pub fn four_way_failures(p: u64, n: u32, m: u32, jmax: u32) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let a_m = RigidObject::generator(p, GeneratorKind::A, m)?;
    let a_n = RigidObject::generator(p, GeneratorKind::A, n)?;
    let orbit = orbit_hom(p, n, m)?;
    let value = mackey_components(&a_m, n)?;
    let hom = hom_space(&a_n, &a_m)?;
    let td = if p <= TD_MAX_PRIME { Some(td_split(p, n, m, jmax.max(n.max(m)))?) } else { None };
    for j in 0..=jmax {
        let expected = if j >= n.max(m) { p.pow(n.min(m)) } else { 0 };
        let mut got = vec![orbit.component(j), value.component(j), hom.level_dim(j)];
        if let Some(t) = &td {
            got.push(t.dim_at(j).unwrap_or(0));
        }
        if got.iter().any(|&d| d != expected) {
            out.push(format!("p={p} n={n} m={m} j={j}: expected {expected}, got {got:?}"));
        }
    }
    if orbit != value {
        out.push(format!("p={p} n={n} m={m}: orbit shape differs from Mackey value"));
    }
    Ok(out)
}

fn mackey_suite(p: u64) -> SuiteReport {
    let mut r = SuiteReport::new("mackey");
    let top = max_index(p);
    for n in 0..=top {
        for m in 0..=top {
            r.absorb(&format!("four-way n={n} m={m}"), four_way_failures(p, n, m, 5));
            for d in [-1i64, 0, 1] {
                r.run(
                    || format!("adams maps n={n} m={m} d={d}"),
                    || {
                        let x = pi_a_orbit(p, n)?;
                        let y = pi_a_orbit(p, m)?;
                        let maps = adams_maps(&x, &y, d)?;
                        Ok(if d == 0 { maps.is_pure_hom() } else { maps.is_zero() })
                    },
                );
            }
        }
        for k in 0..=top {
            r.run(
                || format!("restriction shift n={n} k={k}"),
                || {
                    let a = RigidObject::generator(p, GeneratorKind::A, top)?;
                    let lhs = mackey_components(&a.restrict(n), k)?;
                    let rhs = mackey_components(&a, n + k)?;
                    Ok(lhs.inf_dim == rhs.inf_dim && (0..8).all(|j| lhs.component(j) == rhs.component(n + j)))
                },
            );
        }
    }
    r
}

fn evspec_suite(p: u64) -> SuiteReport {
    let mut r = SuiteReport::new("evspec");
    let samples = || -> Result<Vec<(&'static str, RigidObject)>> {
        Ok(vec![
            ("U", RigidObject::unit(p)?),
            ("A(1)", RigidObject::generator(p, GeneratorKind::A, 1)?),
            ("A(2)", RigidObject::generator(p, GeneratorKind::A, 2)?),
            (
                "E(1) + L(0)",
                RigidObject::generator(p, GeneratorKind::E, 1)?
                    .direct_sum(&RigidObject::generator(p, GeneratorKind::L, 0)?)?,
            ),
        ])
    };
    match samples() {
        Ok(objs) => {
            for (name, m) in objs {
                for n in 0..=3 {
                    r.run(|| format!("fixed split of {name} at {n}"), || Ok(evspec_fixed_split(&m, n)?.is_consistent()));
                }
            }
        }
        Err(e) => r.record(|| format!("samples: {e}"), false),
    }
    r
}

fn parser_suite(rng: &mut ChaCha8Rng, p: u64) -> SuiteReport {
    let mut r = SuiteReport::new("parser");
    for i in 0..50 {
        let e = random_expr(rng, 3, 3);
        let text = e.to_string();
        r.record(|| format!("round trip #{i}: {text}"), parse(&text).as_ref() == Ok(&e));
    }
    for i in 0..10 {
        let e = random_expr(rng, 2, max_index(p).min(2));
        r.run(
            || format!("evaluation #{i}: {e}"),
            || {
                let obj = e.eval_object(p)?;
                obj.validate()?;
                Ok(obj.canonical() == obj)
            },
        );
    }
    r
}
