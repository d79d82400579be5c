//! Uniform radial grid `x_i = i * L / N`, `i = 0..=N`.

use crate::error::{Result, SkyrmeError};

pub const MIN_INTERVALS: usize = 16;
pub const DEFAULT_LENGTH: f64 = 16.0;
pub const DEFAULT_INTERVALS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    length: f64,
    intervals: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            length: DEFAULT_LENGTH,
            intervals: DEFAULT_INTERVALS,
        }
    }
}

impl Grid {
    pub fn new(length: f64, intervals: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(SkyrmeError::InvalidParameter {
                name: "L",
                reason: format!("domain length must be positive and finite, got {length}"),
            });
        }
        if intervals < MIN_INTERVALS {
            return Err(SkyrmeError::InvalidParameter {
                name: "N",
                reason: format!("need at least {MIN_INTERVALS} intervals, got {intervals}"),
            });
        }
        Ok(Grid { length, intervals })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of intervals `N`; the grid has `N + 1` nodes.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.intervals as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        // i * L / N rather than i * h keeps the last node exactly at L.
        i as f64 * self.length / self.intervals as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    /// Grid with twice as many intervals over the same domain.
    pub fn refined(&self) -> Grid {
        Grid {
            length: self.length,
            intervals: 2 * self.intervals,
        }
    }

    pub fn check_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(SkyrmeError::IncompatibleGrid(format!(
                "L={} N={} vs L={} N={}",
                self.length, self.intervals, other.length, other.intervals
            )))
        }
    }
}
