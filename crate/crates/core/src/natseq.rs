use std::fmt;

use serde::{Deserialize, Serialize};

/// An eventually constant sequence of dimensions, indexed by level.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "NatSeqJson", into = "NatSeqJson")]
pub struct NatSeq {
    prefix: Vec<u64>,
    tail: u64,
}

#[derive(Serialize, Deserialize)]
struct NatSeqJson {
    prefix: Vec<u64>,
    tail: u64,
}

impl From<NatSeqJson> for NatSeq {
    fn from(j: NatSeqJson) -> Self {
        NatSeq::new(j.prefix, j.tail)
    }
}

impl From<NatSeq> for NatSeqJson {
    fn from(s: NatSeq) -> Self {
        NatSeqJson { prefix: s.prefix, tail: s.tail }
    }
}

impl fmt::Debug for NatSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NatSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for x in &self.prefix {
            write!(f, "{x}, ")?;
        }
        write!(f, "tail {})", self.tail)
    }
}

impl NatSeq {
    pub fn new(mut prefix: Vec<u64>, tail: u64) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        NatSeq { prefix, tail }
    }

    pub fn constant(x: u64) -> Self {
        NatSeq { prefix: vec![], tail: x }
    }

    /// Values `f(0), …, f(len-1)` followed by a constant `tail`.
    pub fn from_fn(len: usize, tail: u64, f: impl Fn(usize) -> u64) -> Self {
        NatSeq::new((0..len).map(f).collect(), tail)
    }

    pub fn get(&self, k: usize) -> u64 {
        self.prefix.get(k).copied().unwrap_or(self.tail)
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> u64 {
        self.tail
    }

    pub fn stable_from(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.tail == 0
    }

    pub fn add(&self, other: &NatSeq) -> NatSeq {
        let len = self.prefix.len().max(other.prefix.len());
        NatSeq::from_fn(len, self.tail + other.tail, |k| self.get(k) + other.get(k))
    }

    /// Sum of the values over the first `n` levels.
    pub fn partial_sum(&self, n: usize) -> u64 {
        (0..n).map(|k| self.get(k)).sum()
    }
}
