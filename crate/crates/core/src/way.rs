use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FillError, Result};
use crate::medial_axis::MedialAxis;

/// Distribution of discs over the pieces of a medial axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Way {
    pub counts: Vec<usize>,
}

impl Way {
    pub fn empty(k: usize) -> Self {
        Self { counts: vec![0; k] }
    }

    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Copy with one more disc on `piece`.
    pub fn with_added(&self, piece: usize) -> Self {
        let mut w = self.clone();
        w.counts[piece] += 1;
        w
    }

    /// Checks the piece count and that junctions hold at most one disc.
    pub fn validate(&self, m: &MedialAxis) -> Result<()> {
        if self.counts.len() != m.num_pieces() {
            return Err(FillError::InvalidSolution(format!(
                "way has {} entries but the axis has {} pieces",
                self.counts.len(),
                m.num_pieces()
            )));
        }
        for (p, &c) in self.counts.iter().enumerate() {
            if m.is_junction(p) && c > 1 {
                return Err(FillError::InvalidSolution(format!(
                    "junction piece {p} holds {c} discs"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Way {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
