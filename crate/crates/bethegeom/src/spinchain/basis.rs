use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Subset of sites {1..n} carrying e_1 ("spin up").
///
/// On the full 2^n space, site i corresponds to bit n - i of the integer
/// index, so site 1 is the most significant bit and the all-e_0 vacuum is
/// index 0. Within a weight-k block, subsets are listed lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinBasisIndex {
    p: Vec<usize>,
}

impl SpinBasisIndex {
    pub fn new(p: Vec<usize>, n: usize) -> Result<Self> {
        let ok = p.iter().all(|&i| (1..=n).contains(&i)) && p.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::IndexOutOfRange(format!(
                "{p:?} is not a strictly increasing subset of 1..={n}"
            )));
        }
        Ok(Self { p })
    }

    pub fn empty() -> Self {
        Self { p: Vec::new() }
    }

    pub fn sites(&self) -> &[usize] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.p.binary_search(&site).is_ok()
    }

    pub fn full_index(&self, n: usize) -> usize {
        self.p.iter().fold(0, |acc, &i| acc | (1 << (n - i)))
    }

    pub fn from_full_index(b: usize, n: usize) -> Self {
        Self {
            p: (1..=n).filter(|&i| b >> (n - i) & 1 == 1).collect(),
        }
    }
}

/// k-subsets of 1..=n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

pub fn block_basis(n: usize, k: usize) -> Vec<SpinBasisIndex> {
    combinations(n, k).into_iter().map(|p| SpinBasisIndex { p }).collect()
}

/// Full-space indices of the weight-k block, in block order.
pub fn block_indices(n: usize, k: usize) -> Vec<usize> {
    block_basis(n, k).iter().map(|s| s.full_index(n)).collect()
}

pub fn full_basis(n: usize) -> Vec<SpinBasisIndex> {
    (0..1usize << n)
        .map(|b| SpinBasisIndex::from_full_index(b, n))
        .collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
