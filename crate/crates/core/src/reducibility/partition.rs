use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("index {index} is outside 1..={n}")]
    OutOfRange { index: usize, n: usize },
    #[error("index {0} appears more than once")]
    Duplicate(usize),
    #[error("the P block must not be empty")]
    EmptyP,
    #[error("the A block needs at least two indices, got {0}")]
    ShortA(usize),
    #[error("blocks cover {covered} of {n} indices")]
    Incomplete { covered: usize, n: usize },
    #[error("invalid index list `{0}`")]
    Syntax(String),
    #[error("need 1 <= l < k <= n with k - l >= 2, got l = {l}, k = {k}, n = {n}")]
    Contiguous { l: usize, k: usize, n: usize },
}

/// Assignment of the variable indices `1..=n` to the three roles of a
/// nested composition `F = f(x_P, g(x_A, x_S), x_S)`.
///
/// Blocks are stored sorted; the checks are symmetric within each block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RolePartition {
    n: usize,
    #[serde(rename = "P")]
    p: Vec<usize>,
    #[serde(rename = "A")]
    a: Vec<usize>,
    #[serde(rename = "S")]
    s: Vec<usize>,
}

impl RolePartition {
    /// `S` becomes every index not in `P` or `A`.
    pub fn new(n: usize, p: &[usize], a: &[usize]) -> Result<Self, PartitionError> {
        let mut used = vec![false; n + 1];
        for &i in p.iter().chain(a) {
            if i == 0 || i > n {
                return Err(PartitionError::OutOfRange { index: i, n });
            }
            if used[i] {
                return Err(PartitionError::Duplicate(i));
            }
            used[i] = true;
        }
        let s: Vec<usize> = (1..=n).filter(|&i| !used[i]).collect();
        Self::with_blocks(n, p, a, &s)
    }

    /// Explicit blocks, which must cover `1..=n` exactly once.
    pub fn with_blocks(
        n: usize,
        p: &[usize],
        a: &[usize],
        s: &[usize],
    ) -> Result<Self, PartitionError> {
        let covered = p.len() + a.len() + s.len();
        if covered != n {
            return Err(PartitionError::Incomplete { covered, n });
        }
        let mut seen = vec![false; n + 1];
        for &i in p.iter().chain(a).chain(s) {
            if i == 0 || i > n {
                return Err(PartitionError::OutOfRange { index: i, n });
            }
            if seen[i] {
                return Err(PartitionError::Duplicate(i));
            }
            seen[i] = true;
        }
        if p.is_empty() {
            return Err(PartitionError::EmptyP);
        }
        if a.len() < 2 {
            return Err(PartitionError::ShortA(a.len()));
        }
        let sorted = |v: &[usize]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v
        };
        Ok(RolePartition {
            n,
            p: sorted(p),
            a: sorted(a),
            s: sorted(s),
        })
    }

    /// Contiguous roles `P = 1..=l`, `A = l+1..=k`, `S = k+1..=n`.
    pub fn contiguous(n: usize, l: usize, k: usize) -> Result<Self, PartitionError> {
        if !(l >= 1 && k >= l + 2 && k <= n) {
            return Err(PartitionError::Contiguous { l, k, n });
        }
        let p: Vec<usize> = (1..=l).collect();
        let a: Vec<usize> = (l + 1..=k).collect();
        let s: Vec<usize> = (k + 1..=n).collect();
        Self::with_blocks(n, &p, &a, &s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    /// `l = |P|`.
    pub fn l(&self) -> usize {
        self.p.len()
    }

    /// `k = |P| + |A|`.
    pub fn k(&self) -> usize {
        self.p.len() + self.a.len()
    }

    /// Unordered pairs `a < b` from the A block.
    pub fn a_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.a
            .iter()
            .enumerate()
            .flat_map(move |(i, &x)| self.a[i + 1..].iter().map(move |&y| (x, y)))
    }

    /// Every admissible partition of `1..=n` with `1 <= |P| <= l_max` and
    /// `|A| >= 2`, in a fixed order.
    pub fn enumerate(n: usize, l_max: usize) -> Vec<RolePartition> {
        let mut out = Vec::new();
        let full = 1u32 << n;
        let members = |mask: u32| -> Vec<usize> {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| i + 1)
                .collect()
        };
        for a_mask in 1..full {
            if a_mask.count_ones() < 2 {
                continue;
            }
            let rest = (full - 1) & !a_mask;
            // nonempty submasks of the remaining indices
            let mut p_mask = rest;
            while p_mask != 0 {
                if p_mask.count_ones() as usize <= l_max {
                    let s_mask = rest & !p_mask;
                    out.push(RolePartition {
                        n,
                        p: members(p_mask),
                        a: members(a_mask),
                        s: members(s_mask),
                    });
                }
                p_mask = (p_mask - 1) & rest;
            }
        }
        out.sort_by(|x, y| (x.l(), x.k(), &x.p, &x.a).cmp(&(y.l(), y.k(), &y.p, &y.a)));
        out
    }
}

impl fmt::Display for RolePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| {
            v.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "P={{{}}} A={{{}}} S={{{}}}",
            list(&self.p),
            list(&self.a),
            list(&self.s)
        )
    }
}

/// Parse a comma-separated list of positive indices such as `2,3`.
/// An empty or blank string is the empty list.
pub fn parse_index_list(text: &str) -> Result<Vec<usize>, PartitionError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| PartitionError::Syntax(text.to_string()))
        })
        .collect()
}
