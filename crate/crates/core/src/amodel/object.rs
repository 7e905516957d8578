use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclic::{pow_u64, CyclicModule};
use crate::error::{ensure_prime, ensure_same_prime, Error, Result};
use crate::linalg::RatMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    A,
    E,
    L,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeneratorKind::A => "A",
            GeneratorKind::E => "E",
            GeneratorKind::L => "L",
        };
        f.write_str(s)
    }
}

/// An object of the algebraic model whose structure map is the germ of a
/// constant map.
///
/// Levels `0..stab` are stored explicitly. From `stab` on every level is the
/// template `T` viewed over the larger quotient, and the structure map sends
/// `m ∈ M_∞` to the germ of the constant sequence `c(m)`.
///
/// Every constructor returns the canonical form, in which the last explicit
/// level differs from the template or the template does not factor through a
/// smaller quotient. Structural equality is therefore meaningful.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RigidObjectJson", into = "RigidObjectJson")]
pub struct RigidObject {
    p: u64,
    stab: u32,
    levels: Vec<CyclicModule>,
    template: CyclicModule,
    minf: CyclicModule,
    c: RatMatrix,
}

impl RigidObject {
    /// Validates the data and returns it in canonical form. The stab is
    /// `levels.len()`.
    pub fn new(
        p: u64,
        levels: Vec<CyclicModule>,
        template: CyclicModule,
        minf: CyclicModule,
        c: RatMatrix,
    ) -> Result<Self> {
        let obj = Self::raw(p, levels, template, minf, c);
        obj.validate()?;
        Ok(obj.canonical())
    }

    fn raw(
        p: u64,
        levels: Vec<CyclicModule>,
        template: CyclicModule,
        minf: CyclicModule,
        c: RatMatrix,
    ) -> Self {
        let stab = levels.len() as u32;
        RigidObject { p, stab, levels, template, minf, c }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_prime(self.p)?;
        let bad = |msg: String| Err(Error::InvalidObject(msg));
        if self.levels.len() != self.stab as usize {
            return bad(format!("{} levels stored for stab {}", self.levels.len(), self.stab));
        }
        let check = |m: &CyclicModule, level: u32, what: &str| -> Result<()> {
            ensure_same_prime(self.p, m.p())?;
            if m.level() != level {
                return Err(Error::InvalidObject(format!(
                    "{what} is over Z/p^{} instead of Z/p^{level}",
                    m.level()
                )));
            }
            if !m.action().pow(pow_u64(self.p, level)).is_identity() {
                return Err(Error::InvalidObject(format!("{what}: action order too large")));
            }
            Ok(())
        };
        for (k, m) in self.levels.iter().enumerate() {
            check(m, k as u32, &format!("level {k}"))?;
        }
        check(&self.template, self.stab, "template")?;
        check(&self.minf, self.stab, "M_inf")?;
        if self.c.rows() != self.template.dim() || self.c.cols() != self.minf.dim() {
            return bad(format!(
                "structure map is {}x{}, expected {}x{}",
                self.c.rows(),
                self.c.cols(),
                self.template.dim(),
                self.minf.dim()
            ));
        }
        if !self.minf.is_equivariant_map(&self.template, &self.c) {
            return bad("structure map is not equivariant".into());
        }
        Ok(())
    }

    pub fn generator(p: u64, kind: GeneratorKind, n: u32) -> Result<Self> {
        ensure_prime(p)?;
        let zeros = |count: u32| (0..count).map(|k| CyclicModule::zero(p, k)).collect::<Vec<_>>();
        let reg = CyclicModule::regular(p, n)?;
        let d = reg.dim();
        let obj = match kind {
            GeneratorKind::A => Self::raw(p, zeros(n), reg.clone(), reg, RatMatrix::identity(d)),
            GeneratorKind::E => {
                let mut levels = zeros(n);
                levels.push(reg);
                Self::raw(
                    p,
                    levels,
                    CyclicModule::zero(p, n + 1),
                    CyclicModule::zero(p, n + 1),
                    RatMatrix::zeros(0, 0),
                )
            }
            GeneratorKind::L => {
                Self::raw(p, zeros(n), CyclicModule::zero(p, n), reg, RatMatrix::zeros(0, d))
            }
        };
        debug_assert!(obj.validate().is_ok());
        Ok(obj.canonical())
    }

    /// The unit `U = A(0)`.
    pub fn unit(p: u64) -> Result<Self> {
        Self::generator(p, GeneratorKind::A, 0)
    }

    pub fn zero(p: u64) -> Result<Self> {
        ensure_prime(p)?;
        Ok(Self::raw(
            p,
            vec![],
            CyclicModule::zero(p, 0),
            CyclicModule::zero(p, 0),
            RatMatrix::zeros(0, 0),
        ))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn stab(&self) -> u32 {
        self.stab
    }

    /// The explicitly stored levels `M_0..M_{stab-1}`.
    pub fn levels(&self) -> &[CyclicModule] {
        &self.levels
    }

    pub fn template(&self) -> &CyclicModule {
        &self.template
    }

    pub fn minf(&self) -> &CyclicModule {
        &self.minf
    }

    pub fn structure_map(&self) -> &RatMatrix {
        &self.c
    }

    /// The module `M_k` over `Z/p^k`.
    pub fn level(&self, k: u32) -> CyclicModule {
        if k < self.stab {
            self.levels[k as usize].clone()
        } else {
            self.template.inflate(k).expect("inflation to a larger level")
        }
    }

    pub fn level_dim(&self, k: u32) -> usize {
        if k < self.stab {
            self.levels[k as usize].dim()
        } else {
            self.template.dim()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.template.dim() == 0 && self.minf.dim() == 0 && self.levels.iter().all(|m| m.dim() == 0)
    }

    /// The same object with levels stored explicitly up to `m` (no-op when
    /// `m <= stab`). Not canonical.
    pub(crate) fn raise_stab(&self, m: u32) -> RigidObject {
        if m <= self.stab {
            return self.clone();
        }
        let mut levels = self.levels.clone();
        levels.extend((self.stab..m).map(|k| self.level(k)));
        RigidObject {
            p: self.p,
            stab: m,
            levels,
            template: self.template.inflate(m).unwrap(),
            minf: self.minf.inflate(m).unwrap(),
            c: self.c.clone(),
        }
    }

    pub fn canonical(&self) -> RigidObject {
        let mut out = self.clone();
        while out.stab > 0 {
            let k = out.stab - 1;
            let last = &out.levels[k as usize];
            if last.action() != out.template.action() {
                break;
            }
            let (Ok(t), Ok(minf)) = (out.template.deflate(k), out.minf.deflate(k)) else {
                break;
            };
            out.levels.pop();
            out.template = t;
            out.minf = minf;
            out.stab = k;
        }
        out
    }

    fn combine(
        &self,
        other: &RigidObject,
        module_op: impl Fn(&CyclicModule, &CyclicModule) -> Result<CyclicModule>,
        map_op: impl Fn(&RatMatrix, &RatMatrix) -> RatMatrix,
    ) -> Result<RigidObject> {
        ensure_same_prime(self.p, other.p)?;
        let s = self.stab.max(other.stab);
        let a = self.raise_stab(s);
        let b = other.raise_stab(s);
        let levels = a.levels.iter().zip(&b.levels).map(|(x, y)| module_op(x, y)).collect::<Result<_>>()?;
        let out = Self::raw(
            self.p,
            levels,
            module_op(&a.template, &b.template)?,
            module_op(&a.minf, &b.minf)?,
            map_op(&a.c, &b.c),
        );
        debug_assert!(out.validate().is_ok());
        Ok(out.canonical())
    }

    pub fn direct_sum(&self, other: &RigidObject) -> Result<RigidObject> {
        self.combine(other, CyclicModule::direct_sum, RatMatrix::block_diag)
    }

    /// Levelwise tensor product over `Q` with the diagonal action; the
    /// structure map is `c_M ⊗ c_N`.
    pub fn tensor(&self, other: &RigidObject) -> Result<RigidObject> {
        self.combine(other, CyclicModule::tensor, RatMatrix::kron)
    }

    /// Restriction to the subgroup `p^n Z_p`: level `j` of the result is
    /// `M_{n+j}` with the generator `g^{p^n}`.
    pub fn restrict(&self, n: u32) -> RigidObject {
        let s = self.stab.saturating_sub(n);
        let levels = (0..s).map(|j| self.level(n + j).restrict_to_subgroup(n)).collect();
        let out = Self::raw(
            self.p,
            levels,
            self.template.restrict_to_subgroup(n),
            self.minf.restrict_to_subgroup(n),
            self.c.clone(),
        );
        debug_assert!(out.validate().is_ok());
        out.canonical()
    }

    /// The object with levels `M_0..M_{n-1}` and constant value `M_n` from
    /// level `n` on, including at `∞`, with the diagonal structure map.
    pub fn inflate_finite(m: &FiniteLevelObject) -> RigidObject {
        let n = m.n as usize;
        let top = m.levels[n].clone();
        let d = top.dim();
        let out = Self::raw(m.p, m.levels[..n].to_vec(), top.clone(), top, RatMatrix::identity(d));
        debug_assert!(out.validate().is_ok());
        out.canonical()
    }

    /// Sum of `copies` copies of `self`.
    pub fn multiple(&self, copies: usize) -> Result<RigidObject> {
        let mut acc = RigidObject::zero(self.p)?;
        for _ in 0..copies {
            acc = acc.direct_sum(self)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for RigidObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.levels.iter().map(|m| m.dim().to_string()).collect();
        write!(
            f,
            "p={} stab={} levels=[{}] T={} M_inf={} rank(c)={}",
            self.p,
            self.stab,
            dims.join(", "),
            self.template.dim(),
            self.minf.dim(),
            self.c.rank()
        )
    }
}

/// An object of the algebraic model for the finite group `Z/p^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLevelObject {
    p: u64,
    n: u32,
    levels: Vec<CyclicModule>,
}

impl FiniteLevelObject {
    /// `levels` holds `M_0..M_n`, so its length is `n + 1`.
    pub fn new(p: u64, levels: Vec<CyclicModule>) -> Result<Self> {
        ensure_prime(p)?;
        if levels.is_empty() {
            return Err(Error::InvalidObject("a finite-level object needs at least M_0".into()));
        }
        for (k, m) in levels.iter().enumerate() {
            ensure_same_prime(p, m.p())?;
            if m.level() != k as u32 {
                return Err(Error::InvalidObject(format!(
                    "level {k} is over Z/p^{}",
                    m.level()
                )));
            }
        }
        let n = levels.len() as u32 - 1;
        Ok(FiniteLevelObject { p, n, levels })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn levels(&self) -> &[CyclicModule] {
        &self.levels
    }
}

#[derive(Clone, Serialize, Deserialize)]
pub(crate) struct RigidObjectJson {
    p: u64,
    stab: u32,
    levels: Vec<Vec<Vec<String>>>,
    template: Vec<Vec<String>>,
    minf: Vec<Vec<String>>,
    c: Vec<Vec<String>>,
}

impl From<RigidObject> for RigidObjectJson {
    fn from(m: RigidObject) -> Self {
        RigidObjectJson {
            p: m.p,
            stab: m.stab,
            levels: m.levels.iter().map(|l| l.action().to_string_rows()).collect(),
            template: m.template.action().to_string_rows(),
            minf: m.minf.action().to_string_rows(),
            c: m.c.to_string_rows(),
        }
    }
}

impl TryFrom<RigidObjectJson> for RigidObject {
    type Error = Error;

    fn try_from(j: RigidObjectJson) -> Result<Self> {
        ensure_prime(j.p)?;
        if j.levels.len() != j.stab as usize {
            return Err(Error::Malformed(format!("{} levels for stab {}", j.levels.len(), j.stab)));
        }
        let module = |rows: &[Vec<String>], level: u32| -> Result<CyclicModule> {
            let n = rows.len();
            CyclicModule::new(j.p, level, RatMatrix::from_string_rows(n, n, rows)?)
        };
        let levels =
            j.levels.iter().enumerate().map(|(k, l)| module(l, k as u32)).collect::<Result<_>>()?;
        let template = module(&j.template, j.stab)?;
        let minf = module(&j.minf, j.stab)?;
        let c = RatMatrix::from_string_rows(template.dim(), minf.dim(), &j.c)?;
        RigidObject::new(j.p, levels, template, minf, c)
    }
}
