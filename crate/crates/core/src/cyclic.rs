//! Rational representations of the cyclic groups `Z/p^k`.
//!
//! A module is stored as the matrix by which a fixed generator acts. Over `Q`
//! such a module splits into isotypic pieces indexed by `j = 0..=k`, the piece
//! `j` being the kernel of the cyclotomic polynomial `Φ_{p^j}` evaluated at the
//! action. Each piece is a vector space over `Q(ζ_{p^j})`, which is what makes
//! the hom and isomorphism constructions below finite and explicit.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_prime, ensure_same_prime, Error, Result};
use crate::linalg::{EchelonBasis, RatMatrix, Rational, Subspace};

pub fn pow_u64(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("p-power overflow")
}

/// `φ(p^j)`, the degree of the `p^j`-th cyclotomic polynomial.
pub fn totient_prime_power(p: u64, j: u32) -> u64 {
    if j == 0 {
        1
    } else {
        pow_u64(p, j - 1) * (p - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicModule {
    p: u64,
    level: u32,
    action: RatMatrix,
}

/// Dimensions of the fixed points under each subgroup `p^j Z/p^k`, `j = 0..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalCharacter {
    pub p: u64,
    pub level: u32,
    pub fixed_dims: Vec<usize>,
}

impl RationalCharacter {
    /// Dimensions of the isotypic pieces `j = 0..=level`.
    pub fn isotypic_dims(&self) -> Vec<usize> {
        let f = &self.fixed_dims;
        (0..f.len()).map(|j| if j == 0 { f[0] } else { f[j] - f[j - 1] }).collect()
    }

    /// Number of simple summands of each isotypic type.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.isotypic_dims()
            .iter()
            .enumerate()
            .map(|(j, &d)| d / totient_prime_power(self.p, j as u32) as usize)
            .collect()
    }

    pub fn dim(&self) -> usize {
        *self.fixed_dims.last().unwrap()
    }

    pub fn inflate(&self, level: u32) -> RationalCharacter {
        assert!(level >= self.level);
        let mut fixed_dims = self.fixed_dims.clone();
        fixed_dims.resize(level as usize + 1, self.dim());
        RationalCharacter { p: self.p, level, fixed_dims }
    }

    pub fn add(&self, other: &RationalCharacter) -> RationalCharacter {
        let level = self.level.max(other.level);
        let (a, b) = (self.inflate(level), other.inflate(level));
        RationalCharacter {
            p: self.p,
            level,
            fixed_dims: a.fixed_dims.iter().zip(&b.fixed_dims).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, n: usize) -> RationalCharacter {
        RationalCharacter {
            p: self.p,
            level: self.level,
            fixed_dims: self.fixed_dims.iter().map(|x| x * n).collect(),
        }
    }

    /// `dim Hom(M, N)` for modules with these characters.
    pub fn hom_dim(&self, other: &RationalCharacter) -> usize {
        let level = self.level.max(other.level);
        let (a, b) = (self.inflate(level), other.inflate(level));
        a.multiplicities()
            .iter()
            .zip(b.multiplicities())
            .enumerate()
            .map(|(j, (m, n))| m * n * totient_prime_power(self.p, j as u32) as usize)
            .sum()
    }
}

/// One cyclic summand `Q(ζ_{p^j})·v` inside an isotypic piece, with its Krylov
/// basis `v, Av, …, A^{φ-1}v`.
#[derive(Clone, Debug)]
pub(crate) struct KrylovBlock {
    pub component: u32,
    pub vectors: Vec<Vec<Rational>>,
}

impl KrylovBlock {
    fn generator(&self) -> &[Rational] {
        &self.vectors[0]
    }
}

impl CyclicModule {
    pub fn new(p: u64, level: u32, action: RatMatrix) -> Result<Self> {
        ensure_prime(p)?;
        if !action.is_square() {
            return Err(Error::InvalidModule("action matrix is not square".into()));
        }
        let m = CyclicModule { p, level, action };
        if !m.action.pow(m.order()).is_identity() {
            return Err(Error::InvalidModule(format!(
                "action does not have order dividing {}^{}",
                p, level
            )));
        }
        Ok(m)
    }

    pub fn zero(p: u64, level: u32) -> Self {
        CyclicModule { p, level, action: RatMatrix::zeros(0, 0) }
    }

    pub fn trivial(p: u64, level: u32, dim: usize) -> Self {
        CyclicModule { p, level, action: RatMatrix::identity(dim) }
    }

    /// The permutation module `Q[Z/p^k]`, the generator acting by `e_i ↦ e_{i+1}`.
    pub fn regular(p: u64, k: u32) -> Result<Self> {
        ensure_prime(p)?;
        let n = pow_u64(p, k) as usize;
        let perm: Vec<usize> = (0..n).map(|j| (j + 1) % n).collect();
        Ok(CyclicModule { p, level: k, action: RatMatrix::permutation(&perm) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn order(&self) -> u64 {
        pow_u64(self.p, self.level)
    }

    pub fn dim(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &RatMatrix {
        &self.action
    }

    /// Smallest level through which the action factors.
    pub fn minimal_level(&self) -> u32 {
        (0..=self.level)
            .find(|&l| self.action.pow(pow_u64(self.p, l)).is_identity())
            .unwrap_or(self.level)
    }

    /// The same matrix viewed over the larger group `Z/p^{level}`.
    pub fn inflate(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::InvalidModule(format!(
                "cannot inflate from level {} down to {}",
                self.level, level
            )));
        }
        Ok(CyclicModule { p: self.p, level, action: self.action.clone() })
    }

    /// Reinterprets the action at a lower level; fails unless it factors through it.
    pub fn deflate(&self, level: u32) -> Result<Self> {
        CyclicModule::new(self.p, level, self.action.clone())
    }

    /// Restriction to the subgroup generated by `g^{p^n}`, relabelled as `Z/p^{k-n}`.
    pub fn restrict_to_subgroup(&self, n: u32) -> Self {
        CyclicModule {
            p: self.p,
            level: self.level.saturating_sub(n),
            action: self.action.pow(pow_u64(self.p, n)),
        }
    }

    fn common_level(&self, other: &CyclicModule) -> Result<(CyclicModule, CyclicModule)> {
        ensure_same_prime(self.p, other.p)?;
        let level = self.level.max(other.level);
        Ok((self.inflate(level)?, other.inflate(level)?))
    }

    pub fn direct_sum(&self, other: &CyclicModule) -> Result<Self> {
        let (a, b) = self.common_level(other)?;
        Ok(CyclicModule { p: a.p, level: a.level, action: a.action.block_diag(&b.action) })
    }

    /// Tensor product over `Q` with the diagonal action.
    pub fn tensor(&self, other: &CyclicModule) -> Result<Self> {
        let (a, b) = self.common_level(other)?;
        Ok(CyclicModule { p: a.p, level: a.level, action: a.action.kron(&b.action) })
    }

    fn check_subgroup_index(&self, j: u32) -> Result<()> {
        if j > self.level {
            Err(Error::OutOfRange { index: j as u64, max: self.level as u64 })
        } else {
            Ok(())
        }
    }

    /// Vectors fixed by the subgroup `p^j Z/p^k`, i.e. by `g^{p^j}`.
    pub fn fixed_points(&self, j: u32) -> Result<Subspace> {
        self.check_subgroup_index(j)?;
        let g = self.action.pow(pow_u64(self.p, j));
        Ok((&g - &RatMatrix::identity(self.dim())).kernel())
    }

    /// The averaging idempotent onto `fixed_points(j)`:
    /// `p^{-(k-j)} Σ_i g^{i p^j}`.
    pub fn average(&self, j: u32) -> Result<RatMatrix> {
        self.check_subgroup_index(j)?;
        let step = self.action.pow(pow_u64(self.p, j));
        let count = pow_u64(self.p, self.level - j);
        let mut term = RatMatrix::identity(self.dim());
        let mut sum = RatMatrix::zeros(self.dim(), self.dim());
        for _ in 0..count {
            sum = &sum + &term;
            term = &term * &step;
        }
        Ok(sum.scale(&Rational::new(1.into(), count.into())))
    }

    pub fn character(&self) -> RationalCharacter {
        let fixed_dims = (0..=self.level).map(|j| self.fixed_points(j).unwrap().dim()).collect();
        RationalCharacter { p: self.p, level: self.level, fixed_dims }
    }

    /// `Φ_{p^j}(A)`; its kernel is the isotypic piece `j`.
    fn cyclotomic_at_action(&self, j: u32) -> RatMatrix {
        let n = self.dim();
        if j == 0 {
            return &self.action - &RatMatrix::identity(n);
        }
        let step = self.action.pow(pow_u64(self.p, j - 1));
        let mut term = RatMatrix::identity(n);
        let mut sum = RatMatrix::zeros(n, n);
        for _ in 0..self.p {
            sum = &sum + &term;
            term = &term * &step;
        }
        sum
    }

    pub fn isotypic_component(&self, j: u32) -> Result<Subspace> {
        self.check_subgroup_index(j)?;
        Ok(self.cyclotomic_at_action(j).kernel())
    }

    fn krylov_block(&self, component: u32, v: &[Rational]) -> KrylovBlock {
        let len = totient_prime_power(self.p, component) as usize;
        let mut vectors = Vec::with_capacity(len);
        let mut cur = v.to_vec();
        for i in 0..len {
            if i > 0 {
                cur = self.action.apply(&cur);
            }
            vectors.push(cur.clone());
        }
        KrylovBlock { component, vectors }
    }

    /// Greedily adds Krylov blocks generated by `candidates` (all in piece
    /// `component`) that are independent of `span`.
    fn extend_blocks(
        &self,
        component: u32,
        span: &mut EchelonBasis,
        candidates: &[Vec<Rational>],
    ) -> Vec<KrylovBlock> {
        let mut blocks = Vec::new();
        for v in candidates {
            if span.contains(v) {
                continue;
            }
            let block = self.krylov_block(component, v);
            for w in &block.vectors {
                let fresh = span.insert(w);
                assert!(fresh, "Krylov block not independent: not a Q(ζ)-subspace");
            }
            blocks.push(block);
        }
        blocks
    }

    /// Decomposition into cyclic summands, ordered by isotypic piece.
    pub(crate) fn cyclic_decomposition(&self) -> Vec<KrylovBlock> {
        let mut span = EchelonBasis::new(self.dim());
        let mut blocks = Vec::new();
        for j in 0..=self.level {
            let comp = self.isotypic_component(j).unwrap();
            blocks.extend(self.extend_blocks(j, &mut span, &comp.basis_vectors()));
        }
        debug_assert_eq!(span.len(), self.dim());
        blocks
    }

    /// The submodule on a stable subspace, with the action in the subspace's
    /// stored basis.
    pub fn submodule(&self, sub: &Subspace) -> Result<CyclicModule> {
        let b = sub.basis_columns();
        let ab = &self.action * &b;
        let columns = ab.columns();
        let mut action = RatMatrix::zeros(sub.dim(), sub.dim());
        for (j, col) in columns.iter().enumerate() {
            let coords = sub
                .coordinates(col)
                .ok_or_else(|| Error::InvalidModule("subspace is not stable under the action".into()))?;
            for (i, x) in coords.into_iter().enumerate() {
                action.set(i, j, x);
            }
        }
        Ok(CyclicModule { p: self.p, level: self.level, action })
    }

    /// The quotient by a stable subspace, with the projection onto it and a
    /// linear section of that projection.
    pub fn quotient(&self, sub: &Subspace) -> Result<(CyclicModule, RatMatrix, RatMatrix)> {
        let q = sub.basis_columns().cokernel_projection();
        let (_, pivots) = q.rref_with_pivots();
        let mut section = RatMatrix::zeros(self.dim(), q.rows());
        for (i, &c) in pivots.iter().enumerate() {
            section.set(c, i, Rational::one());
        }
        let action = &(&q * &self.action) * &section;
        if &q * &self.action != &action * &q {
            return Err(Error::InvalidModule("subspace is not stable under the action".into()));
        }
        Ok((CyclicModule { p: self.p, level: self.level, action }, q, section))
    }

    pub fn is_equivariant_map(&self, target: &CyclicModule, x: &RatMatrix) -> bool {
        x.rows() == target.dim()
            && x.cols() == self.dim()
            && &target.action * x == x * &self.action
    }

    /// Complement of a submodule that is itself a submodule.
    pub fn complement_submodule(&self, sub: &Subspace) -> Result<Subspace> {
        self.submodule(sub)?;
        let mut span = EchelonBasis::new(self.dim());
        let mut complement = Vec::new();
        for j in 0..=self.level {
            let comp = self.isotypic_component(j)?;
            let inside = sub.intersection(&comp);
            self.extend_blocks(j, &mut span, &inside.basis_vectors());
            for block in self.extend_blocks(j, &mut span, &comp.basis_vectors()) {
                complement.extend(block.vectors);
            }
        }
        Ok(Subspace::from_vectors(self.dim(), &complement))
    }
}

fn block_matrix(dim: usize, blocks: &[KrylovBlock]) -> RatMatrix {
    let cols: Vec<Vec<Rational>> = blocks.iter().flat_map(|b| b.vectors.iter().cloned()).collect();
    RatMatrix::from_columns(dim, &cols)
}

/// Basis of `Hom_{Z/p^k}(M, N)`, both modules viewed over the larger group.
///
/// Each cyclic summand `Q(ζ)·v` of `M` may be sent to any vector `w` of the
/// matching isotypic piece of `N`; the resulting maps `A^i v ↦ B^i w` run
/// over a basis as `v` ranges over summands and `w` over a basis of the piece.
pub fn equivariant_hom_basis(m: &CyclicModule, n: &CyclicModule) -> Result<Vec<RatMatrix>> {
    let (m, n) = m.common_level(n)?;
    if m.dim() == 0 || n.dim() == 0 {
        return Ok(Vec::new());
    }
    let blocks = m.cyclic_decomposition();
    let k_inv = block_matrix(m.dim(), &blocks).inverse().expect("cyclic basis is a basis");
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for b in &blocks {
        offsets.push(acc);
        acc += b.vectors.len();
    }
    let mut basis = Vec::new();
    for j in 0..=m.level {
        let targets = n.isotypic_component(j)?.basis_vectors();
        if targets.is_empty() {
            continue;
        }
        for (bi, block) in blocks.iter().enumerate().filter(|(_, b)| b.component == j) {
            for w in &targets {
                let images = n.krylov_block(j, w).vectors;
                let mut y = RatMatrix::zeros(n.dim(), m.dim());
                for (l, img) in images.iter().enumerate() {
                    for (r, x) in img.iter().enumerate() {
                        if !x.is_zero() {
                            y.set(r, offsets[bi] + l, x.clone());
                        }
                    }
                }
                debug_assert_eq!(block.vectors.len(), images.len());
                basis.push(&y * &k_inv);
            }
        }
    }
    Ok(basis)
}

/// Subspace of the space of `dim N × dim M` matrices (flattened row-major)
/// spanned by the equivariant maps.
pub fn equivariant_hom_space(m: &CyclicModule, n: &CyclicModule) -> Result<Subspace> {
    let basis = equivariant_hom_basis(m, n)?;
    let vs: Vec<_> = basis.iter().map(RatMatrix::flatten).collect();
    Ok(Subspace::from_vectors(m.dim() * n.dim(), &vs))
}

/// An explicit equivariant isomorphism, when the characters agree.
pub fn module_isomorphism(m: &CyclicModule, n: &CyclicModule) -> Result<Option<RatMatrix>> {
    let (m, n) = m.common_level(n)?;
    if m.character() != n.character() {
        return Ok(None);
    }
    let km = block_matrix(m.dim(), &m.cyclic_decomposition());
    let kn = block_matrix(n.dim(), &n.cyclic_decomposition());
    let x = &kn * &km.inverse().expect("cyclic basis is a basis");
    debug_assert!(m.is_equivariant_map(&n, &x));
    Ok(Some(x))
}

/// Per-piece counts of a cyclic basis adapted to an equivariant map
/// `c: S → T`: summands of `S` mapped isomorphically, summands of `ker c`,
/// and summands of `T` outside the image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MapSignature(pub Vec<(u32, usize, usize, usize)>);

/// Bases of source and target in which `c` is a block identity on the first
/// summands of each piece and zero elsewhere.
pub(crate) fn adapted_bases(
    source: &CyclicModule,
    target: &CyclicModule,
    c: &RatMatrix,
) -> (RatMatrix, RatMatrix, MapSignature) {
    let mut src_span = EchelonBasis::new(source.dim());
    let mut tgt_span = EchelonBasis::new(target.dim());
    let mut src_cols = Vec::new();
    let mut tgt_cols = Vec::new();
    let mut sig = Vec::new();
    let kernel = c.kernel();
    for j in 0..=source.level {
        let comp = source.isotypic_component(j).unwrap();
        let ker_part = kernel.intersection(&comp);
        let ker_blocks = source.extend_blocks(j, &mut src_span, &ker_part.basis_vectors());
        let free_blocks = source.extend_blocks(j, &mut src_span, &comp.basis_vectors());
        let images: Vec<Vec<Rational>> =
            free_blocks.iter().map(|b| c.apply(b.generator())).collect();
        let image_blocks = target.extend_blocks(j, &mut tgt_span, &images);
        assert_eq!(image_blocks.len(), free_blocks.len(), "c must be injective off its kernel");
        let tcomp = target.isotypic_component(j).unwrap();
        let extra_blocks = target.extend_blocks(j, &mut tgt_span, &tcomp.basis_vectors());
        sig.push((j, free_blocks.len(), ker_blocks.len(), extra_blocks.len()));
        for b in free_blocks.into_iter().chain(ker_blocks) {
            src_cols.extend(b.vectors);
        }
        for b in image_blocks.into_iter().chain(extra_blocks) {
            tgt_cols.extend(b.vectors);
        }
    }
    (
        RatMatrix::from_columns(source.dim(), &src_cols),
        RatMatrix::from_columns(target.dim(), &tgt_cols),
        MapSignature(sig),
    )
}
