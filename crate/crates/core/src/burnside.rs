//! Rational Burnside rings of `Z/p^n` and of `Z_p`.
//!
//! `A(Z_p)` is the ring of eventually constant rational sequences indexed by
//! the open subgroups `p^k Z_p`; the value at the trivial subgroup is the
//! eventual value. `A(Z/p^n)` is kept in the orbit basis `[Z/p^n / p^a]` and
//! compared with sequences through the marks homomorphism.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclic::pow_u64;
use crate::error::{ensure_prime, ensure_same_prime, Error, Result};
use crate::linalg::{parse_rational, rat, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "EvSeqJson", into = "EvSeqJson")]
pub struct EvSeq {
    p: u64,
    prefix: Vec<Rational>,
    tail: Rational,
}

#[derive(Serialize, Deserialize)]
struct EvSeqJson {
    p: u64,
    prefix: Vec<String>,
    tail: String,
}

impl From<EvSeq> for EvSeqJson {
    fn from(a: EvSeq) -> Self {
        EvSeqJson {
            p: a.p,
            prefix: a.prefix.iter().map(ToString::to_string).collect(),
            tail: a.tail.to_string(),
        }
    }
}

impl TryFrom<EvSeqJson> for EvSeq {
    type Error = Error;
    fn try_from(j: EvSeqJson) -> Result<Self> {
        let prefix = j.prefix.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        EvSeq::new(j.p, prefix, parse_rational(&j.tail)?)
    }
}

impl fmt::Debug for EvSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EvSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for x in &self.prefix {
            write!(f, "{x}, ")?;
        }
        write!(f, "tail {})", self.tail)
    }
}

impl EvSeq {
    pub fn new(p: u64, mut prefix: Vec<Rational>, tail: Rational) -> Result<Self> {
        ensure_prime(p)?;
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        Ok(EvSeq { p, prefix, tail })
    }

    pub fn constant(p: u64, x: Rational) -> Result<Self> {
        EvSeq::new(p, vec![], x)
    }

    pub fn zero(p: u64) -> Result<Self> {
        EvSeq::constant(p, Rational::zero())
    }

    pub fn one(p: u64) -> Result<Self> {
        EvSeq::constant(p, Rational::one())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn tail(&self) -> &Rational {
        &self.tail
    }

    /// First index from which the sequence is constant.
    pub fn stable_from(&self) -> usize {
        self.prefix.len()
    }

    /// Value at the subgroup `p^k Z_p`.
    pub fn get(&self, k: usize) -> &Rational {
        self.prefix.get(k).unwrap_or(&self.tail)
    }

    fn zip_with(&self, other: &EvSeq, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<EvSeq> {
        ensure_same_prime(self.p, other.p)?;
        let len = self.prefix.len().max(other.prefix.len());
        let prefix = (0..len).map(|k| f(self.get(k), other.get(k))).collect();
        EvSeq::new(self.p, prefix, f(&self.tail, &other.tail))
    }

    pub fn add(&self, other: &EvSeq) -> Result<EvSeq> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &EvSeq) -> Result<EvSeq> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &EvSeq) -> Result<EvSeq> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: &Rational) -> EvSeq {
        EvSeq::new(self.p, self.prefix.iter().map(|x| x * s).collect(), &self.tail * s).unwrap()
    }

    /// The indicator of the subgroup `p^n Z_p`.
    pub fn idempotent_e(p: u64, n: usize) -> Result<EvSeq> {
        let mut prefix = vec![Rational::zero(); n + 1];
        prefix[n] = Rational::one();
        EvSeq::new(p, prefix, Rational::zero())
    }

    /// `1 - Σ_{i<n} e_i`: zero below `n`, one from `n` on.
    pub fn idempotent_f(p: u64, n: usize) -> Result<EvSeq> {
        EvSeq::new(p, vec![Rational::zero(); n], Rational::one())
    }

    /// Restriction along `p^n Z_p ⊂ Z_p`: `(a_0, a_1, …) ↦ (a_n, a_{n+1}, …)`.
    pub fn truncate(&self, n: usize) -> EvSeq {
        let prefix = self.prefix.iter().skip(n).cloned().collect();
        EvSeq::new(self.p, prefix, self.tail.clone()).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.tail.is_zero()
    }
}

/// The two legs of the pullback `A(Z_p) = Q ×_{tails} ∏_n Q`: the value at the
/// trivial subgroup, and the full sequence (finitely presented as its values up
/// to `horizon`, constant afterwards).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackDecomposition {
    pub p: u64,
    pub at_trivial: Rational,
    pub sequence: Vec<Rational>,
    pub sequence_after: Rational,
    /// Index from which the sequence agrees with the constant germ of `at_trivial`.
    pub germ_agrees_from: usize,
}

impl PullbackDecomposition {
    pub fn of(a: &EvSeq) -> PullbackDecomposition {
        let horizon = a.stable_from() + 1;
        let sequence: Vec<Rational> = (0..horizon).map(|k| a.get(k).clone()).collect();
        PullbackDecomposition {
            p: a.p,
            at_trivial: a.tail.clone(),
            sequence_after: a.tail.clone(),
            germ_agrees_from: a.stable_from(),
            sequence,
        }
    }

    /// Both legs must have the same image in `colim_k ∏_{n ≥ k} Q`.
    pub fn is_compatible(&self) -> bool {
        self.sequence_after == self.at_trivial
            && self.sequence.iter().skip(self.germ_agrees_from).all(|x| *x == self.at_trivial)
    }

    pub fn reconstruct(&self) -> Result<EvSeq> {
        if !self.is_compatible() {
            return Err(Error::Malformed("pullback legs disagree in tails".into()));
        }
        EvSeq::new(self.p, self.sequence.clone(), self.at_trivial.clone())
    }
}

/// An element of the rational Burnside ring of `Z/p^n` in the orbit basis
/// `[Z/p^n / p^a Z/p^n]`, `a = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteBurnsideElt {
    p: u64,
    n: u32,
    coeffs: Vec<Rational>,
}

impl FiniteBurnsideElt {
    pub fn new(p: u64, n: u32, coeffs: Vec<Rational>) -> Result<Self> {
        ensure_prime(p)?;
        if coeffs.len() != n as usize + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for A(Z/{p}^{n})",
                coeffs.len()
            )));
        }
        Ok(FiniteBurnsideElt { p, n, coeffs })
    }

    /// The orbit `Z/p^n / p^a`, which has `p^a` points.
    pub fn orbit(p: u64, n: u32, a: u32) -> Result<Self> {
        if a > n {
            return Err(Error::OutOfRange { index: a as u64, max: n as u64 });
        }
        let mut coeffs = vec![Rational::zero(); n as usize + 1];
        coeffs[a as usize] = Rational::one();
        FiniteBurnsideElt::new(p, n, coeffs)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn check_compatible(&self, other: &FiniteBurnsideElt) -> Result<()> {
        ensure_same_prime(self.p, other.p)?;
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "Burnside levels differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FiniteBurnsideElt) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        FiniteBurnsideElt::new(self.p, self.n, coeffs)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        FiniteBurnsideElt { p: self.p, n: self.n, coeffs: self.coeffs.iter().map(|x| x * s).collect() }
    }

    /// Product of finite `Z/p^n`-sets, using
    /// `[p^a] · [p^b] = p^{min(a,b)} [p^{max(a,b)}]`.
    pub fn mul(&self, other: &FiniteBurnsideElt) -> Result<Self> {
        self.check_compatible(other)?;
        let mut coeffs = vec![Rational::zero(); self.n as usize + 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let mult = rat(pow_u64(self.p, a.min(b) as u32) as i64);
                coeffs[a.max(b)] += x * y * mult;
            }
        }
        FiniteBurnsideElt::new(self.p, self.n, coeffs)
    }

    /// Fixed-point counts under each subgroup `p^j Z/p^n`, `j = 0..=n`.
    pub fn marks(&self) -> Vec<Rational> {
        (0..=self.n as usize)
            .map(|j| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .take(j + 1)
                    .fold(Rational::zero(), |acc, (a, x)| acc + x * rat(pow_u64(self.p, a as u32) as i64))
            })
            .collect()
    }

    /// Inverse of [`marks`](Self::marks); the marks matrix is triangular.
    pub fn from_marks(p: u64, marks: &[Rational]) -> Result<Self> {
        if marks.is_empty() {
            return Err(Error::DimensionMismatch("empty marks vector".into()));
        }
        let n = marks.len() as u32 - 1;
        let coeffs = (0..marks.len())
            .map(|j| {
                let diff = if j == 0 { marks[0].clone() } else { &marks[j] - &marks[j - 1] };
                diff / rat(pow_u64(p, j as u32) as i64)
            })
            .collect();
        FiniteBurnsideElt::new(p, n, coeffs)
    }

    /// Image in `A(Z_p)`: marks `(m_0, …, m_n)` become `(m_0, …, m_{n-1}, tail m_n)`.
    pub fn colim_embed(&self) -> EvSeq {
        let mut marks = self.marks();
        let tail = marks.pop().unwrap();
        EvSeq::new(self.p, marks, tail).unwrap()
    }

    /// Inflation along `Z/p^{n+1} → Z/p^n`, which keeps each orbit type.
    pub fn inflate(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(Rational::zero());
        FiniteBurnsideElt { p: self.p, n: self.n + 1, coeffs }
    }

    /// The idempotent `e_n` of `A(Z/p^{n+1})` written as `p^{-n}[p^n] - p^{-n-1}[p^{n+1}]`.
    pub fn grothendieck_e(p: u64, n: u32) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); n as usize + 2];
        coeffs[n as usize] = Rational::new(1.into(), pow_u64(p, n).into());
        coeffs[n as usize + 1] = -Rational::new(1.into(), pow_u64(p, n + 1).into());
        FiniteBurnsideElt::new(p, n + 1, coeffs)
    }
}
