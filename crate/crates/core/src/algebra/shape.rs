use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Block sizes `[n_1, …, n_k]` of the algebra `M_{n_1} ⊕ … ⊕ M_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct AlgebraShape {
    block_dims: Vec<usize>,
}

impl AlgebraShape {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidShape("at least one block is required".into()));
        }
        if let Some(pos) = block_dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidShape(format!("block {pos} has dimension 0")));
        }
        Ok(AlgebraShape { block_dims })
    }

    /// The full matrix algebra `M_n`.
    pub fn full(n: usize) -> Self {
        Self::new(vec![n]).expect("positive dimension")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn block_count(&self) -> usize {
        self.block_dims.len()
    }

    /// Complex dimension of the algebra, which is also that of its dual: `Σ n_i²`.
    pub fn dual_dimension(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    /// Largest block size.
    pub fn max_block(&self) -> usize {
        *self.block_dims.iter().max().expect("non-empty")
    }
}

impl TryFrom<Vec<usize>> for AlgebraShape {
    type Error = Error;

    fn try_from(value: Vec<usize>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<AlgebraShape> for Vec<usize> {
    fn from(value: AlgebraShape) -> Self {
        value.block_dims
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.block_dims.iter().map(|n| format!("M{n}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Accepts `M2+M3`, `M2⊕M3`, `2+3` and `2,3`.
impl FromStr for AlgebraShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .split(['+', ',', '⊕'])
            .map(|part| {
                let p = part.trim();
                let p = p.strip_prefix('M').or_else(|| p.strip_prefix('m')).unwrap_or(p);
                p.parse::<usize>()
                    .map_err(|_| Error::InvalidShape(format!("cannot parse block `{part}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dims)
    }
}
