use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer partition with trailing zeros removed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

/// Frobenius coordinates `(α₁ … α_d | β₁ … β_d)`: arm and leg lengths along
/// the main diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frobenius {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl Frobenius {
    /// `♭(λ) = Σ (βⱼ + 1)`.
    pub fn flat(&self) -> u32 {
        self.beta.iter().map(|b| b + 1).sum()
    }
}

impl Partition {
    /// Accepts any weakly decreasing list; trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `λⱼ` (1-based), zero beyond the length.
    pub fn part(&self, j: usize) -> u32 {
        self.0.get(j - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        let parts = (1..=first).map(|i| self.0.iter().filter(|&&p| p >= i).count() as u32).collect();
        Partition(parts)
    }

    pub fn frobenius(&self) -> Frobenius {
        let conj = self.conjugate();
        let d = self.0.iter().enumerate().filter(|(i, &p)| p as usize > *i).count();
        let alpha = (0..d).map(|i| self.0[i] - i as u32 - 1).collect();
        let beta = (0..d).map(|i| conj.0[i] - i as u32 - 1).collect();
        Frobenius { alpha, beta }
    }

    /// The parts padded with zeros to length `m`; `None` if longer than `m`.
    pub fn padded(&self, m: usize) -> Option<Vec<u32>> {
        if self.0.len() > m {
            return None;
        }
        let mut v = self.0.clone();
        v.resize(m, 0);
        Some(v)
    }

    /// The strictly decreasing shifted parts `ℓⱼ = λⱼ − j + M`.
    pub fn shifted(&self, m: usize) -> Option<Vec<u32>> {
        self.padded(m)
            .map(|p| p.iter().enumerate().map(|(j, l)| l + (m - 1 - j) as u32).collect())
    }

    /// All partitions with `|λ| ≤ max_size` and at most `max_len` parts,
    /// ordered by size and then lexicographically.
    pub fn all_up_to(max_size: u32, max_len: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        for n in 0..=max_size {
            out.extend(Self::of_size(n, max_len));
        }
        out
    }

    /// Partitions of exactly `n` with at most `max_len` parts, lexicographic.
    pub fn of_size(n: u32, max_len: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fill(n, n, max_len, &mut current, &mut out);
        out.sort();
        out
    }
}

fn fill(remaining: u32, max_part: u32, slots: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    if slots == 0 {
        return;
    }
    for p in (1..=max_part.min(remaining)).rev() {
        current.push(p);
        fill(remaining - p, p, slots - 1, current, out);
        current.pop();
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}
