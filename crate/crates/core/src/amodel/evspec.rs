use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::amodel::object::RigidObject;
use crate::cyclic::pow_u64;
use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::natseq::NatSeq;

/// An eventually specified sequence `(x_k)_{k ≥ start}` in a rigid object:
/// a base point `b ∈ M_∞` together with finitely many levels where `x_k`
/// differs from its default. The default is `c(b)` from the stab on and `0`
/// below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvSpecElement {
    home: RigidObject,
    start: u32,
    base: Vec<Rational>,
    overrides: BTreeMap<u32, Vec<Rational>>,
}

impl EvSpecElement {
    pub fn new(
        home: RigidObject,
        start: u32,
        base: Vec<Rational>,
        overrides: BTreeMap<u32, Vec<Rational>>,
    ) -> Result<Self> {
        if base.len() != home.minf().dim() {
            return Err(Error::DimensionMismatch(format!(
                "base has length {}, M_inf has dimension {}",
                base.len(),
                home.minf().dim()
            )));
        }
        for (&k, v) in &overrides {
            if k < start {
                return Err(Error::OutOfRange { index: k as u64, max: start as u64 });
            }
            if v.len() != home.level_dim(k) {
                return Err(Error::DimensionMismatch(format!(
                    "override at level {k} has length {}, expected {}",
                    v.len(),
                    home.level_dim(k)
                )));
            }
        }
        let mut x = EvSpecElement { home, start, base, overrides };
        x.normalize();
        Ok(x)
    }

    pub fn home(&self) -> &RigidObject {
        &self.home
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn overrides(&self) -> &BTreeMap<u32, Vec<Rational>> {
        &self.overrides
    }

    fn default_at(&self, k: u32) -> Vec<Rational> {
        if k >= self.home.stab() {
            self.home.structure_map().apply(&self.base)
        } else {
            vec![Rational::zero(); self.home.level_dim(k)]
        }
    }

    /// The entry `x_k`, for `k ≥ start`.
    pub fn value_at(&self, k: u32) -> Result<Vec<Rational>> {
        if k < self.start {
            return Err(Error::OutOfRange { index: k as u64, max: self.start as u64 });
        }
        Ok(self.overrides.get(&k).cloned().unwrap_or_else(|| self.default_at(k)))
    }

    fn normalize(&mut self) {
        let defaults: Vec<(u32, Vec<Rational>)> =
            self.overrides.keys().map(|&k| (k, self.default_at(k))).collect();
        for (k, d) in defaults {
            if self.overrides[&k] == d {
                self.overrides.remove(&k);
            }
        }
    }

    fn ensure_compatible(&self, other: &EvSpecElement) -> Result<()> {
        if self.home != other.home || self.start != other.start {
            return Err(Error::InvalidObject("eventually specified sequences in different homes".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &EvSpecElement) -> Result<EvSpecElement> {
        self.ensure_compatible(other)?;
        let base = self.base.iter().zip(&other.base).map(|(a, b)| a + b).collect();
        let mut overrides = BTreeMap::new();
        for &k in self.overrides.keys().chain(other.overrides.keys()) {
            let v = self.value_at(k)?.iter().zip(&other.value_at(k)?).map(|(a, b)| a + b).collect();
            overrides.insert(k, v);
        }
        EvSpecElement::new(self.home.clone(), self.start, base, overrides)
    }

    pub fn scale(&self, s: &Rational) -> EvSpecElement {
        let sc = |v: &Vec<Rational>| v.iter().map(|x| x * s).collect::<Vec<_>>();
        let mut x = EvSpecElement {
            home: self.home.clone(),
            start: self.start,
            base: sc(&self.base),
            overrides: self.overrides.iter().map(|(&k, v)| (k, sc(v))).collect(),
        };
        x.normalize();
        x
    }

    /// The action of `g^a` for the topological generator `g` of `Z_p`.
    pub fn act(&self, a: u64) -> EvSpecElement {
        let base = self.home.minf().action().pow(a).apply(&self.base);
        let overrides = self
            .overrides
            .iter()
            .map(|(&k, v)| (k, self.home.level(k).action().pow(a).apply(v)))
            .collect();
        let mut x = EvSpecElement { home: self.home.clone(), start: self.start, base, overrides };
        x.normalize();
        x
    }

    /// Splits `x ∈ ⨅_n M` into its tail from `n + 1` on and its entry at `n`.
    pub fn split_first(&self) -> (EvSpecElement, Vec<Rational>) {
        let n = self.start;
        let head = self.value_at(n).expect("start level");
        let mut overrides = self.overrides.clone();
        overrides.remove(&n);
        let tail = EvSpecElement {
            home: self.home.clone(),
            start: n + 1,
            base: self.base.clone(),
            overrides,
        };
        (tail, head)
    }

    /// Inverse of [`EvSpecElement::split_first`].
    pub fn join_first(tail: &EvSpecElement, head: Vec<Rational>) -> Result<EvSpecElement> {
        if tail.start == 0 {
            return Err(Error::OutOfRange { index: 0, max: 0 });
        }
        let mut overrides = tail.overrides.clone();
        overrides.insert(tail.start - 1, head);
        EvSpecElement::new(tail.home.clone(), tail.start - 1, tail.base.clone(), overrides)
    }

    /// Whether `g^{p^n}` fixes the element.
    pub fn is_fixed_by(&self, n: u32) -> bool {
        self.act(pow_u64(self.home.p(), n)) == *self
    }
}

/// Dimensions of the `p^n Z_p`-fixed points of `⨅_start M`: the part coming
/// from `M_∞`, and the fixed dimension of each level `k ≥ start` (zero below).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedDescriptor {
    pub start: u32,
    pub inf_dim: usize,
    pub level_dims: NatSeq,
}

/// Both sides of `(⨅_n M)^{p^n Z_p} ≅ (⨅_{n+1} M)^{p^n Z_p} ⊕ M_n`.
///
/// The matching sends the `M_∞` part and each level `k > n` of the left side
/// to the same slot on the right, and level `n` to the extra summand `M_n`.
/// [`EvSpecElement::split_first`] and [`EvSpecElement::join_first`] realize
/// it on elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedSplit {
    pub n: u32,
    pub lhs: FixedDescriptor,
    pub rhs: FixedDescriptor,
    pub extra_dim: usize,
}

impl FixedSplit {
    /// Checks that the matching preserves dimensions slot by slot.
    pub fn is_consistent(&self) -> bool {
        let n = self.n as usize;
        let horizon = self.lhs.level_dims.stable_from().max(self.rhs.level_dims.stable_from()) + 1;
        self.lhs.inf_dim == self.rhs.inf_dim
            && self.lhs.level_dims.get(n) == self.extra_dim as u64
            && self.rhs.level_dims.get(n) == 0
            && (n + 1..=horizon.max(n + 1))
                .all(|k| self.lhs.level_dims.get(k) == self.rhs.level_dims.get(k))
            && self.lhs.level_dims.tail() == self.rhs.level_dims.tail()
    }
}

fn fixed_descriptor(m: &RigidObject, start: u32, n: u32) -> Result<FixedDescriptor> {
    let s = m.stab();
    let inf_dim = m.minf().fixed_points(n.min(s))?.dim();
    let horizon = s.max(start);
    let fixed_at = |k: u32| -> Result<u64> {
        if k < start {
            return Ok(0);
        }
        Ok(m.level(k).fixed_points(n.min(k))?.dim() as u64)
    };
    let prefix = (0..horizon).map(fixed_at).collect::<Result<Vec<_>>>()?;
    let tail = fixed_at(horizon)?;
    Ok(FixedDescriptor { start, inf_dim, level_dims: NatSeq::new(prefix, tail) })
}

pub fn evspec_fixed_split(m: &RigidObject, n: u32) -> Result<FixedSplit> {
    let lhs = fixed_descriptor(m, n, n)?;
    let rhs = fixed_descriptor(m, n + 1, n)?;
    Ok(FixedSplit { n, lhs, rhs, extra_dim: m.level_dim(n) })
}
