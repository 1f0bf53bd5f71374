//! Integer partitions with all parts at least 2.
//!
//! These index the Harary–Sachs family `H_k`: graphs on `k` vertices whose
//! components are single edges (parts equal to 2) or cycles (parts `b ≥ 3`).

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

/// A partition stored as `(part size, multiplicity)` pairs, sizes strictly
/// decreasing, every size at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<(usize, usize)>,
    total: usize,
}

impl Partition {
    /// The empty partition of 0.
    pub fn empty() -> Self {
        Partition { parts: Vec::new(), total: 0 }
    }

    /// Builds a partition from a list of parts in any order.
    ///
    /// Returns `None` if some part is smaller than 2.
    pub fn from_parts(parts: &[usize]) -> Option<Self> {
        if parts.iter().any(|&b| b < 2) {
            return None;
        }
        let mut sorted = parts.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut grouped: Vec<(usize, usize)> = Vec::new();
        for b in sorted {
            match grouped.last_mut() {
                Some((size, mult)) if *size == b => *mult += 1,
                _ => grouped.push((b, 1)),
            }
        }
        Some(Partition { total: parts.iter().sum(), parts: grouped })
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn groups(&self) -> &[(usize, usize)] {
        &self.parts
    }

    /// Parts in decreasing order, repeated by multiplicity.
    pub fn parts(&self) -> Vec<usize> {
        self.parts
            .iter()
            .flat_map(|&(b, m)| std::iter::repeat_n(b, m))
            .collect()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of parts equal to 2.
    pub fn twos(&self) -> usize {
        self.parts
            .iter()
            .find(|&&(b, _)| b == 2)
            .map_or(0, |&(_, m)| m)
    }

    /// Number of parts of size at least 3.
    pub fn cycles(&self) -> usize {
        self.len() - self.twos()
    }

    /// `η(λ) = Π b_i^{m_i} · m_i!`.
    pub fn eta(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &(b, m) in &self.parts {
            for j in 1..=m {
                acc *= b;
                acc *= j;
            }
        }
        acc
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.parts().iter().map(usize::to_string).collect();
        f.write_str(&parts.join("+"))
    }
}

/// All partitions of `k` with every part at least 2, in decreasing
/// lexicographic order of their part lists.
pub fn enumerate_min2_partitions(k: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::from_parts(prefix).expect("parts are at least 2"));
            return;
        }
        for b in (2..=max_part.min(remaining)).rev() {
            // a remainder of 1 can never be completed
            if remaining - b == 1 {
                continue;
            }
            prefix.push(b);
            rec(remaining - b, b, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// `Λ(k; i, j)`: partitions of `k` into exactly `j` parts, all at least 2,
/// exactly `i` of which equal 2.
pub fn lambda_filter(k: usize, i: usize, j: usize) -> Vec<Partition> {
    enumerate_min2_partitions(k)
        .into_iter()
        .filter(|p| p.len() == j && p.twos() == i)
        .collect()
}

/// One member of `H_k` together with its Harary–Sachs data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HsTerm {
    pub partition: Partition,
    /// Number of components.
    pub c: usize,
    /// Number of cycle components.
    pub z: usize,
    pub eta: BigInt,
    /// `(−1)^c`.
    pub sign: i8,
}

impl HsTerm {
    pub fn new(partition: Partition) -> Self {
        let c = partition.len();
        let z = partition.cycles();
        HsTerm {
            eta: partition.eta(),
            sign: if c.is_multiple_of(2) { 1 } else { -1 },
            partition,
            c,
            z,
        }
    }

    /// Vertex count `k` of the graph `H`.
    pub fn total(&self) -> usize {
        self.partition.total()
    }

    /// `|E(H)| = k − c + z`.
    pub fn edge_count(&self) -> usize {
        self.total() - self.c + self.z
    }
}

/// The family `H_k`, one term per partition of `k` into parts ≥ 2.
pub fn hs_family(k: usize) -> Vec<HsTerm> {
    enumerate_min2_partitions(k).into_iter().map(HsTerm::new).collect()
}
