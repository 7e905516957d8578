use serde::{Deserialize, Serialize};

use crate::amodel::object::{RigidObject, RigidObjectJson};
use crate::cyclic::CyclicModule;
use crate::error::{ensure_same_prime, Error, Result};
use crate::linalg::{RatMatrix, Rational, Subspace};

/// An eventually constant morphism: explicit maps below `stab`, the map `φ`
/// on templates from `stab` on, and `finf` at `∞`, subject to
/// `c_target · finf = φ · c_source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RigidMorphismJson", into = "RigidMorphismJson")]
pub struct RigidMorphism {
    source: RigidObject,
    target: RigidObject,
    stab: u32,
    level_maps: Vec<RatMatrix>,
    stable: RatMatrix,
    infinity: RatMatrix,
}

impl RigidMorphism {
    pub fn new(
        source: RigidObject,
        target: RigidObject,
        level_maps: Vec<RatMatrix>,
        stable: RatMatrix,
        infinity: RatMatrix,
    ) -> Result<Self> {
        let stab = level_maps.len() as u32;
        let f = RigidMorphism { source, target, stab, level_maps, stable, infinity };
        f.validate()?;
        Ok(f.canonical())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMorphism(msg));
        ensure_same_prime(self.source.p(), self.target.p())?;
        if self.stab < self.source.stab() || self.stab < self.target.stab() {
            return bad(format!(
                "stab {} below the stabs {} and {} of the objects",
                self.stab,
                self.source.stab(),
                self.target.stab()
            ));
        }
        let check = |src: &CyclicModule, tgt: &CyclicModule, x: &RatMatrix, what: &str| {
            if x.rows() != tgt.dim() || x.cols() != src.dim() {
                return Err(Error::InvalidMorphism(format!(
                    "{what} is {}x{}, expected {}x{}",
                    x.rows(),
                    x.cols(),
                    tgt.dim(),
                    src.dim()
                )));
            }
            if !src.is_equivariant_map(tgt, x) {
                return Err(Error::InvalidMorphism(format!("{what} is not equivariant")));
            }
            Ok(())
        };
        for (k, f) in self.level_maps.iter().enumerate() {
            let k = k as u32;
            check(&self.source.level(k), &self.target.level(k), f, &format!("level map {k}"))?;
        }
        check(self.source.template(), self.target.template(), &self.stable, "stable map")?;
        check(self.source.minf(), self.target.minf(), &self.infinity, "map at infinity")?;
        let lhs = self.target.structure_map() * &self.infinity;
        let rhs = &self.stable * self.source.structure_map();
        if lhs != rhs {
            return bad("not compatible with the structure maps".into());
        }
        Ok(())
    }

    pub fn zero(source: &RigidObject, target: &RigidObject) -> Result<Self> {
        ensure_same_prime(source.p(), target.p())?;
        let m = source.stab().max(target.stab());
        let level_maps =
            (0..m).map(|k| RatMatrix::zeros(target.level_dim(k), source.level_dim(k))).collect();
        let f = RigidMorphism {
            source: source.clone(),
            target: target.clone(),
            stab: m,
            level_maps,
            stable: RatMatrix::zeros(target.template().dim(), source.template().dim()),
            infinity: RatMatrix::zeros(target.minf().dim(), source.minf().dim()),
        };
        Ok(f.canonical())
    }

    pub fn identity(m: &RigidObject) -> Self {
        RigidMorphism {
            source: m.clone(),
            target: m.clone(),
            stab: m.stab(),
            level_maps: m.levels().iter().map(|l| RatMatrix::identity(l.dim())).collect(),
            stable: RatMatrix::identity(m.template().dim()),
            infinity: RatMatrix::identity(m.minf().dim()),
        }
    }

    pub fn source(&self) -> &RigidObject {
        &self.source
    }

    pub fn target(&self) -> &RigidObject {
        &self.target
    }

    pub fn stab(&self) -> u32 {
        self.stab
    }

    pub fn level_maps(&self) -> &[RatMatrix] {
        &self.level_maps
    }

    pub fn stable_map(&self) -> &RatMatrix {
        &self.stable
    }

    pub fn infinity_map(&self) -> &RatMatrix {
        &self.infinity
    }

    /// The map `M_k → N_k`.
    pub fn map_at(&self, k: u32) -> &RatMatrix {
        if k < self.stab {
            &self.level_maps[k as usize]
        } else {
            &self.stable
        }
    }

    fn raise(&self, m: u32) -> RigidMorphism {
        let mut out = self.clone();
        while out.stab < m {
            out.level_maps.push(self.stable.clone());
            out.stab += 1;
        }
        out
    }

    /// Drops trailing level maps that agree with the stable map.
    pub fn canonical(&self) -> RigidMorphism {
        let mut out = self.clone();
        let floor = self.source.stab().max(self.target.stab());
        while out.stab > floor && out.level_maps.last() == Some(&out.stable) {
            out.level_maps.pop();
            out.stab -= 1;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.level_maps.iter().all(RatMatrix::is_zero)
            && self.stable.is_zero()
            && self.infinity.is_zero()
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RigidMorphism) -> Result<RigidMorphism> {
        if g.target != self.source {
            return Err(Error::InvalidMorphism("composition: target(g) != source(f)".into()));
        }
        let m = self.stab.max(g.stab);
        let (f, g) = (self.raise(m), g.raise(m));
        let out = RigidMorphism {
            source: g.source.clone(),
            target: f.target.clone(),
            stab: m,
            level_maps: f.level_maps.iter().zip(&g.level_maps).map(|(a, b)| a * b).collect(),
            stable: &f.stable * &g.stable,
            infinity: &f.infinity * &g.infinity,
        };
        debug_assert!(out.validate().is_ok());
        Ok(out.canonical())
    }

    pub fn add(&self, g: &RigidMorphism) -> Result<RigidMorphism> {
        if self.source != g.source || self.target != g.target {
            return Err(Error::InvalidMorphism("sum of maps between different objects".into()));
        }
        let m = self.stab.max(g.stab);
        let (f, g) = (self.raise(m), g.raise(m));
        let out = RigidMorphism {
            source: f.source.clone(),
            target: f.target.clone(),
            stab: m,
            level_maps: f.level_maps.iter().zip(&g.level_maps).map(|(a, b)| a + b).collect(),
            stable: &f.stable + &g.stable,
            infinity: &f.infinity + &g.infinity,
        };
        Ok(out.canonical())
    }

    pub fn scale(&self, s: &Rational) -> RigidMorphism {
        let out = RigidMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            stab: self.stab,
            level_maps: self.level_maps.iter().map(|a| a.scale(s)).collect(),
            stable: self.stable.scale(s),
            infinity: self.infinity.scale(s),
        };
        out.canonical()
    }

    /// The kernel with its inclusion into the source.
    pub fn kernel(&self) -> Result<(RigidObject, RigidMorphism)> {
        let m = self.stab;
        let src = self.source.raise_stab(m);
        let mut levels = Vec::with_capacity(m as usize);
        let mut incl = Vec::with_capacity(m as usize);
        for (k, f) in self.level_maps.iter().enumerate() {
            let (module, i) = sub_with_inclusion(&src.levels()[k], &f.kernel())?;
            levels.push(module);
            incl.push(i);
        }
        let ker_t = self.stable.kernel();
        let (template, incl_t) = sub_with_inclusion(src.template(), &ker_t)?;
        let (minf, incl_inf) = sub_with_inclusion(src.minf(), &self.infinity.kernel())?;
        let c = coordinates_matrix(&ker_t, &(src.structure_map() * &incl_inf));
        let k = RigidObject::new(src.p(), levels, template, minf, c)?;
        let inclusion = RigidMorphism::new(k.clone(), self.source.clone(), incl, incl_t, incl_inf)?;
        Ok((k, inclusion))
    }

    /// The cokernel with the projection from the target.
    pub fn cokernel(&self) -> Result<(RigidObject, RigidMorphism)> {
        let m = self.stab;
        let tgt = self.target.raise_stab(m);
        let mut levels = Vec::with_capacity(m as usize);
        let mut proj = Vec::with_capacity(m as usize);
        for (k, f) in self.level_maps.iter().enumerate() {
            let (module, q, _) = tgt.levels()[k].quotient(&f.column_space())?;
            levels.push(module);
            proj.push(q);
        }
        let (template, q_t, _) = tgt.template().quotient(&self.stable.column_space())?;
        let (minf, q_inf, section) = tgt.minf().quotient(&self.infinity.column_space())?;
        let c = &(&q_t * tgt.structure_map()) * &section;
        let q = RigidObject::new(tgt.p(), levels, template, minf, c)?;
        let projection = RigidMorphism::new(self.target.clone(), q.clone(), proj, q_t, q_inf)?;
        Ok((q, projection))
    }

    /// The image with its inclusion into the target.
    pub fn image(&self) -> Result<(RigidObject, RigidMorphism)> {
        let m = self.stab;
        let tgt = self.target.raise_stab(m);
        let mut levels = Vec::with_capacity(m as usize);
        let mut incl = Vec::with_capacity(m as usize);
        for (k, f) in self.level_maps.iter().enumerate() {
            let (module, i) = sub_with_inclusion(&tgt.levels()[k], &f.column_space())?;
            levels.push(module);
            incl.push(i);
        }
        let im_t = self.stable.column_space();
        let (template, incl_t) = sub_with_inclusion(tgt.template(), &im_t)?;
        let (minf, incl_inf) = sub_with_inclusion(tgt.minf(), &self.infinity.column_space())?;
        let c = coordinates_matrix(&im_t, &(tgt.structure_map() * &incl_inf));
        let im = RigidObject::new(tgt.p(), levels, template, minf, c)?;
        let inclusion = RigidMorphism::new(im.clone(), self.target.clone(), incl, incl_t, incl_inf)?;
        Ok((im, inclusion))
    }

    /// Whether every component map is invertible.
    pub fn is_isomorphism(&self) -> bool {
        let inv = |x: &RatMatrix| x.is_square() && x.inverse().is_some();
        self.level_maps.iter().all(inv) && inv(&self.stable) && inv(&self.infinity)
    }
}

fn sub_with_inclusion(m: &CyclicModule, sub: &Subspace) -> Result<(CyclicModule, RatMatrix)> {
    Ok((m.submodule(sub)?, sub.basis_columns()))
}

/// Coordinates, in the stored basis of `sub`, of each column of `x`.
fn coordinates_matrix(sub: &Subspace, x: &RatMatrix) -> RatMatrix {
    let cols: Vec<Vec<Rational>> = x
        .columns()
        .iter()
        .map(|v| sub.coordinates(v).expect("column lies in the subspace"))
        .collect();
    RatMatrix::from_columns(sub.dim(), &cols)
}

#[derive(Clone, Serialize, Deserialize)]
struct RigidMorphismJson {
    source: RigidObjectJson,
    target: RigidObjectJson,
    stab: u32,
    level_maps: Vec<Vec<Vec<String>>>,
    stable: Vec<Vec<String>>,
    infinity: Vec<Vec<String>>,
}

impl From<RigidMorphism> for RigidMorphismJson {
    fn from(f: RigidMorphism) -> Self {
        RigidMorphismJson {
            source: f.source.into(),
            target: f.target.into(),
            stab: f.stab,
            level_maps: f.level_maps.iter().map(RatMatrix::to_string_rows).collect(),
            stable: f.stable.to_string_rows(),
            infinity: f.infinity.to_string_rows(),
        }
    }
}

impl TryFrom<RigidMorphismJson> for RigidMorphism {
    type Error = Error;

    fn try_from(j: RigidMorphismJson) -> Result<Self> {
        let source = RigidObject::try_from(j.source)?;
        let target = RigidObject::try_from(j.target)?;
        if j.level_maps.len() != j.stab as usize {
            return Err(Error::Malformed(format!(
                "{} level maps for stab {}",
                j.level_maps.len(),
                j.stab
            )));
        }
        let level_maps = j
            .level_maps
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let k = k as u32;
                RatMatrix::from_string_rows(target.level_dim(k), source.level_dim(k), rows)
            })
            .collect::<Result<_>>()?;
        let stable = RatMatrix::from_string_rows(
            target.template().dim(),
            source.template().dim(),
            &j.stable,
        )?;
        let infinity =
            RatMatrix::from_string_rows(target.minf().dim(), source.minf().dim(), &j.infinity)?;
        RigidMorphism::new(source, target, level_maps, stable, infinity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amodel::object::GeneratorKind::{self, A, E, L};
    use crate::linalg::rat;

    fn gen(p: u64, kind: GeneratorKind, n: u32) -> RigidObject {
        RigidObject::generator(p, kind, n).unwrap()
    }

    fn u_to_l0() -> RigidMorphism {
        let u = gen(2, A, 0);
        let l = gen(2, L, 0);
        RigidMorphism::new(u, l, vec![], RatMatrix::zeros(0, 1), RatMatrix::identity(1)).unwrap()
    }

    #[test]
    fn kernel_of_u_to_l0() {
        let (k, incl) = u_to_l0().kernel().unwrap();
        assert_eq!(k.stab(), 0);
        assert_eq!(k.level_dim(0), 1);
        assert_eq!(k.level_dim(7), 1);
        assert_eq!(k.template().dim(), 1);
        assert_eq!(k.minf().dim(), 0);
        assert_eq!(k.structure_map().rows(), 1);
        assert_eq!(k.structure_map().cols(), 0);
        assert!(incl.stable_map().is_identity());
        let (c, _) = u_to_l0().cokernel().unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn kernel_of_zero_and_cokernel_of_identity() {
        let m = gen(3, A, 1).direct_sum(&gen(3, E, 0)).unwrap();
        let n = gen(3, L, 2);
        let (k, incl) = RigidMorphism::zero(&m, &n).unwrap().kernel().unwrap();
        assert_eq!(k, m);
        assert!(incl.is_isomorphism());
        let (c, _) = RigidMorphism::identity(&m).cokernel().unwrap();
        assert!(c.is_zero());
        assert_eq!(c, RigidObject::zero(3).unwrap());
    }

    #[test]
    fn rejects_incompatible_maps() {
        let u = gen(2, A, 0);
        let l = gen(2, L, 0);
        // φ: Q → 0 is forced; finf = 1 from L(0) to U would need c_U·1 = 0.
        let err = RigidMorphism::new(l, u, vec![], RatMatrix::zeros(1, 0), RatMatrix::identity(1));
        assert!(matches!(err, Err(Error::InvalidMorphism(_))));
    }

    #[test]
    fn composition_and_sums() {
        let f = u_to_l0();
        let id_u = RigidMorphism::identity(f.source());
        assert_eq!(f.compose(&id_u).unwrap(), f);
        let two = f.add(&f).unwrap();
        assert_eq!(two, f.scale(&rat(2)));
        assert!(f.add(&f.scale(&rat(-1))).unwrap().is_zero());
        assert!(id_u.compose(&f).is_err());
    }

    #[test]
    fn level_deviation_survives_and_canonicalizes() {
        // The idempotent of A(Z_p) supported at level 0, as a map U → U.
        let u = gen(2, A, 0);
        let e0 = RigidMorphism::new(
            u.clone(),
            u.clone(),
            vec![RatMatrix::identity(1)],
            RatMatrix::zeros(1, 1),
            RatMatrix::zeros(1, 1),
        )
        .unwrap();
        assert_eq!(e0.stab(), 1);
        let (k, _) = e0.kernel().unwrap();
        assert_eq!(k.level_dim(0), 0);
        assert_eq!(k.level_dim(1), 1);
        assert_eq!(k.minf().dim(), 1);
        let (im, _) = e0.image().unwrap();
        assert_eq!(im, gen(2, E, 0));
        let id = RigidMorphism::identity(&u);
        let raised = id.raise(3);
        assert_eq!(raised.canonical(), id);
    }

    #[test]
    fn json_round_trip() {
        let f = u_to_l0();
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["infinity"], serde_json::json!([["1"]]));
        let back: RigidMorphism = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }
}
