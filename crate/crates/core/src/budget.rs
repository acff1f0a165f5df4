use crate::error::{Error, Result};

/// Resource limits for enumerations and backtracking searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of simplices any single construction may produce.
    pub max_simplices: usize,
    /// Maximum number of assignment attempts in a single search.
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_simplices: 1_000_000,
            max_nodes: 200_000_000,
        }
    }
}

impl Budget {
    /// A budget whose node limit scales with the simplex limit.
    pub fn with_simplices(max_simplices: usize) -> Self {
        Budget {
            max_simplices,
            max_nodes: (max_simplices as u64).saturating_mul(200),
        }
    }

    pub fn check_simplices(&self, count: usize, what: &str) -> Result<()> {
        if count > self.max_simplices {
            return Err(Error::Budget {
                what: what.to_string(),
                limit: self.max_simplices as u64,
            });
        }
        Ok(())
    }

    pub(crate) fn nodes_exceeded(&self, what: &str) -> Error {
        Error::Budget {
            what: what.to_string(),
            limit: self.max_nodes,
        }
    }
}
