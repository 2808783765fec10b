use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simply-laced Cartan matrix with a Coxeter ordering of the nodes.
///
/// Nodes are labelled 1..=r in the public API; `ordering` lists them in
/// the order that decides which neighbours count as "before" and "after".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CartanRaw", into = "CartanRaw")]
pub struct CartanData {
    matrix: Vec<Vec<i64>>,
    ordering: Vec<usize>,
    position: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CartanRaw {
    matrix: Vec<Vec<i64>>,
    ordering: Vec<usize>,
}

impl TryFrom<CartanRaw> for CartanData {
    type Error = Error;
    fn try_from(raw: CartanRaw) -> Result<Self> {
        Self::new(raw.matrix, raw.ordering)
    }
}

impl From<CartanData> for CartanRaw {
    fn from(c: CartanData) -> Self {
        Self {
            matrix: c.matrix,
            ordering: c.ordering,
        }
    }
}

impl CartanData {
    pub fn new(matrix: Vec<Vec<i64>>, ordering: Vec<usize>) -> Result<Self> {
        let r = matrix.len();
        if r == 0 {
            return Err(Error::InvalidSpec("empty Cartan matrix".into()));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != r {
                return Err(Error::InvalidSpec(format!("row {} has length {}", i + 1, row.len())));
            }
            if row[i] != 2 {
                return Err(Error::InvalidSpec(format!("a_{0}{0} = {1}", i + 1, row[i])));
            }
            for j in 0..r {
                if i != j && (row[j] > 0 || row[j] != matrix[j][i]) {
                    return Err(Error::InvalidSpec(format!(
                        "a_{}{} = {} breaks the simply-laced conditions",
                        i + 1,
                        j + 1,
                        row[j]
                    )));
                }
            }
        }
        let mut sorted = ordering.clone();
        sorted.sort_unstable();
        if sorted != (1..=r).collect::<Vec<_>>() {
            return Err(Error::InvalidSpec(format!(
                "{ordering:?} is not a permutation of 1..={r}"
            )));
        }
        let mut position = vec![0; r];
        for (pos, &node) in ordering.iter().enumerate() {
            position[node - 1] = pos;
        }
        Ok(Self {
            matrix,
            ordering,
            position,
        })
    }

    /// A_r with the natural ordering.
    pub fn a_type(r: usize) -> Result<Self> {
        let matrix = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        Self::new(matrix, (1..=r).collect())
    }

    pub fn with_ordering(&self, ordering: Vec<usize>) -> Result<Self> {
        Self::new(self.matrix.clone(), ordering)
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    /// a_ij with 0-based indices.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    /// Whether node j comes after node i in the ordering (0-based).
    pub fn after(&self, j: usize, i: usize) -> bool {
        self.position[j] > self.position[i]
    }

    /// Nodes adjacent to i (0-based), with the multiplicity -a_ji.
    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        (0..self.rank())
            .filter(move |&j| j != i && self.matrix[j][i] != 0)
            .map(move |j| (j, (-self.matrix[j][i]) as u32))
    }
}
