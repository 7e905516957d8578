use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::amodel::{RigidMorphism, RigidObject};
use crate::cyclic::{equivariant_hom_basis, CyclicModule};
use crate::error::{ensure_same_prime, Error, Result};
use crate::linalg::{pullback_of_maps, RatMatrix, Rational};
use crate::natseq::NatSeq;

/// The shape of `Hom(M, N)` relative to a stab `s`.
///
/// Write `C ⊆ T_M` for the submodule spanned by the image of the structure
/// map and `C′` for an equivariant complement. A morphism is then a stable
/// pair `(g, ψ)` with `g: M_∞ → N_∞`, `ψ: C → T_N` and `c_N g = ψ c_M`, plus
/// finitely many deviations (the whole level map below `s`, its restriction
/// to `C` from `s` on), plus an arbitrary sequence of maps `C′ → T_N` from
/// `s` on. The last part is a full product, so only its per-level dimension
/// is recorded.
#[derive(Clone, Debug)]
pub struct HomDescriptor {
    pub stable_dim: usize,
    pub dev_dims: NatSeq,
    pub free_dims: NatSeq,
    basis: HomBasis,
}

#[derive(Clone, Debug)]
struct HomBasis {
    source: RigidObject,
    target: RigidObject,
    stab: u32,
    c_module: CyclicModule,
    complement_module: CyclicModule,
    proj_c: RatMatrix,
    proj_complement: RatMatrix,
    stable: Vec<RigidMorphism>,
}

impl PartialEq for HomDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.stable_dim == other.stable_dim
            && self.dev_dims == other.dev_dims
            && self.free_dims == other.free_dims
    }
}

impl Serialize for HomDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HomDescriptor", 3)?;
        st.serialize_field("stable", &self.stable_dim)?;
        st.serialize_field("dev", &self.dev_dims)?;
        st.serialize_field("free", &self.free_dims)?;
        st.end()
    }
}

impl HomDescriptor {
    pub fn source(&self) -> &RigidObject {
        &self.basis.source
    }

    pub fn target(&self) -> &RigidObject {
        &self.basis.target
    }

    /// The stab `s` the slots refer to.
    pub fn stab(&self) -> u32 {
        self.basis.stab
    }

    pub fn is_zero(&self) -> bool {
        self.stable_dim == 0 && self.dev_dims.is_zero() && self.free_dims.is_zero()
    }

    /// `dim Hom_{Z/p^k}(M_k, N_k)`, the sum of the deviation and free slots.
    pub fn level_dim(&self, k: u32) -> u64 {
        self.dev_dims.get(k as usize) + self.free_dims.get(k as usize)
    }

    /// Morphisms spanning the stable slot. Their level maps below the stab
    /// vanish and their stable map is zero on `C′`.
    pub fn stable_generators(&self) -> &[RigidMorphism] {
        &self.basis.stable
    }

    /// Morphisms spanning the deviation slot at level `k`: zero except at
    /// level `k`.
    pub fn deviation_generators(&self, k: u32) -> Result<Vec<RigidMorphism>> {
        let b = &self.basis;
        if k < b.stab {
            let maps = equivariant_hom_basis(&b.source.level(k), &b.target.level(k))?;
            maps.into_iter().map(|h| self.single_level(k, h)).collect()
        } else {
            let maps = equivariant_hom_basis(&b.c_module, b.target.template())?;
            maps.into_iter().map(|h| self.single_level(k, &h * &b.proj_c)).collect()
        }
    }

    /// Morphisms spanning the free slot at level `k`: zero except at level
    /// `k`, where they vanish on `C`.
    pub fn free_generators(&self, k: u32) -> Result<Vec<RigidMorphism>> {
        let b = &self.basis;
        if k < b.stab {
            return Ok(Vec::new());
        }
        let maps = equivariant_hom_basis(&b.complement_module, b.target.template())?;
        maps.into_iter().map(|h| self.single_level(k, &h * &b.proj_complement)).collect()
    }

    fn single_level(&self, k: u32, h: RatMatrix) -> Result<RigidMorphism> {
        let b = &self.basis;
        let mut level_maps: Vec<RatMatrix> = (0..=k)
            .map(|j| RatMatrix::zeros(b.target.level_dim(j), b.source.level_dim(j)))
            .collect();
        level_maps[k as usize] = h;
        let stab = b.stab.max(k + 1);
        level_maps.extend((k + 1..stab).map(|j| {
            RatMatrix::zeros(b.target.level_dim(j), b.source.level_dim(j))
        }));
        RigidMorphism::new(
            b.source.clone(),
            b.target.clone(),
            level_maps,
            RatMatrix::zeros(b.target.template().dim(), b.source.template().dim()),
            RatMatrix::zeros(b.target.minf().dim(), b.source.minf().dim()),
        )
    }
}

pub fn hom_space(m: &RigidObject, n: &RigidObject) -> Result<HomDescriptor> {
    hom_space_at(m, n, m.stab().max(n.stab()))
}

/// [`hom_space`] with the slots taken relative to a stab `s` at least the
/// stabs of both objects.
pub fn hom_space_at(m: &RigidObject, n: &RigidObject, s: u32) -> Result<HomDescriptor> {
    ensure_same_prime(m.p(), n.p())?;
    if s < m.stab() || s < n.stab() {
        return Err(Error::OutOfRange { index: s as u64, max: m.stab().max(n.stab()) as u64 });
    }
    let t_m = m.template().inflate(s)?;
    let t_n = n.template().inflate(s)?;
    let minf_m = m.minf().inflate(s)?;
    let minf_n = n.minf().inflate(s)?;
    let c_m = m.structure_map();
    let c_n = n.structure_map();

    let c_span = c_m.column_space();
    let complement = t_m.complement_submodule(&c_span)?;
    let c_module = t_m.submodule(&c_span)?;
    let complement_module = t_m.submodule(&complement)?;
    let change = c_span.basis_columns().hstack(&complement.basis_columns())?;
    let inv = change.inverse().expect("C and its complement span T");
    let dc = c_span.dim();
    let proj_c = inv.select_rows(&(0..dc).collect::<Vec<_>>());
    let proj_complement = inv.select_rows(&(dc..t_m.dim()).collect::<Vec<_>>());

    // Stable pairs: c_N g = ψ c'_M with c'_M the structure map into C.
    let c_into_c = &proj_c * c_m;
    let gs = equivariant_hom_basis(&minf_m, &minf_n)?;
    let psis = equivariant_hom_basis(&c_module, &t_n)?;
    let height = t_n.dim() * minf_m.dim();
    let lhs: Vec<Vec<Rational>> = gs.iter().map(|g| (c_n * g).flatten()).collect();
    let rhs: Vec<Vec<Rational>> = psis.iter().map(|psi| (psi * &c_into_c).flatten()).collect();
    let pairs =
        pullback_of_maps(&RatMatrix::from_columns(height, &lhs), &RatMatrix::from_columns(height, &rhs))?;
    let mut stable = Vec::with_capacity(pairs.dim());
    for v in pairs.basis_vectors() {
        let g = combine(&gs, &v[..gs.len()], minf_n.dim(), minf_m.dim());
        let psi = combine(&psis, &v[gs.len()..], t_n.dim(), dc);
        let phi = &psi * &proj_c;
        let level_maps =
            (0..s).map(|k| RatMatrix::zeros(n.level_dim(k), m.level_dim(k))).collect();
        stable.push(RigidMorphism::new(m.clone(), n.clone(), level_maps, phi, g)?);
    }

    let dev_tail = c_module.character().hom_dim(&t_n.character()) as u64;
    let free_tail = complement_module.character().hom_dim(&t_n.character()) as u64;
    let dev_dims = NatSeq::from_fn(s as usize, dev_tail, |k| {
        let k = k as u32;
        m.level(k).character().hom_dim(&n.level(k).character()) as u64
    });
    let free_dims = NatSeq::new(vec![0; s as usize], free_tail);

    Ok(HomDescriptor {
        stable_dim: pairs.dim(),
        dev_dims,
        free_dims,
        basis: HomBasis {
            source: m.clone(),
            target: n.clone(),
            stab: s,
            c_module,
            complement_module,
            proj_c,
            proj_complement,
            stable,
        },
    })
}

fn combine(basis: &[RatMatrix], coeffs: &[Rational], rows: usize, cols: usize) -> RatMatrix {
    let mut acc = RatMatrix::zeros(rows, cols);
    for (b, a) in basis.iter().zip(coeffs) {
        if !num_traits::Zero::is_zero(a) {
            acc = &acc + &b.scale(a);
        }
    }
    acc
}
