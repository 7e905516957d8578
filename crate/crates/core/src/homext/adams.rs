use std::collections::BTreeMap;

use serde::Serialize;

use crate::amodel::RigidObject;
use crate::error::{ensure_same_prime, Result};
use crate::homext::{ext1, hom_space, ExtDescriptor, HomDescriptor};

/// A graded object of the algebraic model with finite support and zero
/// differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRigid {
    p: u64,
    entries: BTreeMap<i64, RigidObject>,
}

impl GradedRigid {
    pub fn new(p: u64) -> Self {
        GradedRigid { p, entries: BTreeMap::new() }
    }

    /// A single object placed in one degree.
    pub fn concentrated(obj: RigidObject, degree: i64) -> Self {
        let mut g = GradedRigid::new(obj.p());
        g.entries.insert(degree, obj);
        g
    }

    /// Puts `obj` in `degree`, adding it to whatever is there.
    pub fn insert(&mut self, degree: i64, obj: RigidObject) -> Result<()> {
        ensure_same_prime(self.p, obj.p())?;
        let sum = match self.entries.get(&degree) {
            Some(old) => old.direct_sum(&obj)?,
            None => obj,
        };
        if sum.is_zero() {
            self.entries.remove(&degree);
        } else {
            self.entries.insert(degree, sum);
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn get(&self, degree: i64) -> Option<&RigidObject> {
        self.entries.get(&degree)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    /// The suspension: degree `i` moves to `i + 1`.
    pub fn shift(&self, by: i64) -> GradedRigid {
        GradedRigid { p: self.p, entries: self.entries.iter().map(|(&d, m)| (d + by, m.clone())).collect() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomTerm {
    pub source_degree: i64,
    pub target_degree: i64,
    pub hom: HomDescriptor,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtTerm {
    pub source_degree: i64,
    pub target_degree: i64,
    pub ext: ExtDescriptor,
}

/// The two outer terms of `0 → Ext(π ΣX, π Y) → [X, Y]_d → Hom(π X, π Y)_d → 0`.
#[derive(Clone, Debug, Serialize)]
pub struct AdamsMaps {
    pub degree: i64,
    pub hom: Vec<HomTerm>,
    pub ext: Vec<ExtTerm>,
}

impl AdamsMaps {
    /// Whether the maps group vanishes.
    pub fn is_zero(&self) -> bool {
        self.hom.iter().all(|t| t.hom.is_zero()) && self.ext.iter().all(|t| t.ext.is_zero())
    }

    /// Whether the group is all Hom, with no extension part.
    pub fn is_pure_hom(&self) -> bool {
        self.ext.iter().all(|t| t.ext.is_zero())
    }
}

/// Hom and `Ext¹` terms of degree `d` maps `X → Y` over every pair of
/// supported degrees: `Hom(X_i, Y_{i+d})` and `Ext¹(X_i, Y_{i+d+1})`.
pub fn adams_maps(x: &GradedRigid, y: &GradedRigid, d: i64) -> Result<AdamsMaps> {
    ensure_same_prime(x.p, y.p)?;
    let mut hom = Vec::new();
    let mut ext = Vec::new();
    for (&i, xi) in &x.entries {
        if let Some(yj) = y.get(i + d) {
            hom.push(HomTerm { source_degree: i, target_degree: i + d, hom: hom_space(xi, yj)? });
        }
        if let Some(yj) = y.get(i + d + 1) {
            ext.push(ExtTerm { source_degree: i, target_degree: i + d + 1, ext: ext1(xi, yj)? });
        }
    }
    Ok(AdamsMaps { degree: d, hom, ext })
}
