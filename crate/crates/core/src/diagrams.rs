//! Strict Young diagrams whose shifted parts `λⱼ − j + M` are all even, and
//! the closed-form counts of those with `λ₁ ≤ λ₁ᵐᵃˣ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::schur::Partition;

/// The parity rule for `M` rows: row `j` (1-based) must have
/// `λⱼ ≡ j − M (mod 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstraintClass {
    pub m: usize,
}

impl ConstraintClass {
    pub fn new(m: usize) -> Self {
        ConstraintClass { m }
    }

    /// Required parity of `λⱼ` (0 even, 1 odd).
    pub fn row_parity(&self, j: usize) -> u32 {
        ((j + self.m) % 2) as u32
    }

    /// Smallest admissible `λⱼ`, attained by `(M−1, M−2, …, 0)`.
    pub fn row_minimum(&self, j: usize) -> u32 {
        (self.m - j) as u32
    }
}

/// True when `λ` padded to `M` rows is strict and every `λⱼ − j + M` is even.
pub fn parity_admissible(lambda: &Partition, m: usize) -> bool {
    let Some(parts) = lambda.padded(m) else {
        return false;
    };
    let class = ConstraintClass::new(m);
    let strict = parts.windows(2).all(|w| w[0] > w[1]);
    strict && parts.iter().enumerate().all(|(i, &l)| l % 2 == class.row_parity(i + 1))
}

/// Every admissible diagram with `λ₁ ≤ lambda1_max`, in lexicographic order.
pub fn enumerate_admissible(m: usize, lambda1_max: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let class = ConstraintClass::new(m);
    let mut rows = Vec::with_capacity(m);
    fill(&class, 1, lambda1_max, &mut rows, &mut out);
    out.sort();
    out
}

fn fill(class: &ConstraintClass, j: usize, upper: u32, rows: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if j > class.m {
        out.push(Partition::new(rows.clone()).expect("strictly decreasing"));
        return;
    }
    let mut l = class.row_minimum(j);
    while l <= upper {
        if l % 2 == class.row_parity(j) {
            rows.push(l);
            if l > 0 || j == class.m {
                fill(class, j + 1, l.saturating_sub(1), rows, out);
            }
            rows.pop();
        }
        l += 1;
    }
}

/// The nested sum
/// `Σ_{k₁=M−1}^{λ} Σ_{k₂=M−2}^{k₁} ⋯ Σ_{k_{M−1}=1}^{k_{M−2}} (k_{M−1}+1)/2`
/// where each `k_j` runs over the parity class of row `j`. With no sums
/// (`M = 1`) it is the bare summand at `k₀ = 1`, namely 1.
pub fn nested_sum(m: usize, lambda1_max: u32) -> u128 {
    if m <= 1 {
        return 1;
    }
    let class = ConstraintClass::new(m);
    let top = lambda1_max as usize;
    // inner[k] = value of the sums over k_{j+1} … given k_j = k.
    let mut inner: Vec<u128> = (0..=top).map(|k| (k as u128 + 1) / 2).collect();
    for j in (1..m - 1).rev() {
        let lo = class.row_minimum(j + 1) as usize;
        let parity = class.row_parity(j + 1) as usize;
        let mut next = vec![0u128; top + 1];
        let mut running = 0u128;
        for k in 0..=top {
            if k >= lo && k % 2 == parity {
                running += inner[k];
            }
            next[k] = running;
        }
        inner = next;
    }
    let lo = class.row_minimum(1) as usize;
    let parity = class.row_parity(1) as usize;
    (lo..=top).filter(|k| k % 2 == parity).map(|k| inner[k]).sum()
}

/// Closed-form count for `M ∈ {1, 2, 3}` and the nested sum for `M ≥ 4`.
/// Each formula assumes a parity of `λ₁ᵐᵃˣ`; other values are rejected.
pub fn count_closed(m: usize, lambda1_max: u32) -> Result<u128> {
    let l = lambda1_max as u128;
    let need = |even: bool| {
        if (lambda1_max % 2 == 0) == even {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "the M = {m} count needs an {} λ₁ᵐᵃˣ, got {lambda1_max}",
                if even { "even" } else { "odd" }
            )))
        }
    };
    match m {
        0 => Err(Error::Domain("M must be at least 1".into())),
        1 => need(true).map(|_| (l + 2) / 2),
        2 => need(false).map(|_| (l + 1) * (l + 3) / 8),
        3 => need(true).map(|_| l * (l * l + 6 * l + 8) / 48),
        _ => Ok(nested_sum(m, lambda1_max)),
    }
}

/// One row of a count table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub m: usize,
    pub lambda1_max: u32,
    pub enumerated: u128,
    pub closed_form: Option<u128>,
    pub matches: bool,
}

/// Compares enumeration with the closed form for every `λ₁ᵐᵃˣ ≤ lambda1_max`
/// that lies in the formula's domain.
pub fn count_table(m: usize, lambda1_max: u32) -> Vec<CountRow> {
    let all = enumerate_admissible(m, lambda1_max);
    (m.saturating_sub(1) as u32..=lambda1_max)
        .filter_map(|lmax| {
            let closed = count_closed(m, lmax).ok()?;
            let enumerated = all.iter().filter(|p| p.part(1) <= lmax).count() as u128;
            Some(CountRow { m, lambda1_max: lmax, enumerated, closed_form: Some(closed), matches: closed == enumerated })
        })
        .collect()
}
