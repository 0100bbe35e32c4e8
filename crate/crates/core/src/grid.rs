use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SqueezeError};

/// Uniform grid including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(SqueezeError::EmptyRange);
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(SqueezeError::InvalidConfig(format!(
                "range endpoints must be finite: {start}:{stop}"
            )));
        }
        Ok(Self { start, stop, steps })
    }

    /// Single-point grid.
    pub fn point(value: f64) -> Self {
        Self { start: value, stop: value, steps: 1 }
    }

    pub fn len(&self) -> usize {
        self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps == 0
    }

    pub fn spacing(&self) -> f64 {
        if self.steps < 2 {
            0.0
        } else {
            (self.stop - self.start) / (self.steps - 1) as f64
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.stop
        } else {
            self.start + i as f64 * self.spacing()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

impl FromStr for Grid {
    type Err = SqueezeError;

    /// Parses `start:stop:steps`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || SqueezeError::InvalidConfig(format!("range must be start:stop:steps, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
        Grid::new(start, stop, steps)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.steps)
    }
}
