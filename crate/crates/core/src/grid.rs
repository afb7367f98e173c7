use crate::error::{Error, Result};

/// Uniform frequency grid in units of the torsional frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        FrequencyGrid {
            min: -4.0,
            max: 4.0,
            n: 2001,
        }
    }
}

impl FrequencyGrid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        let g = FrequencyGrid { min, max, n };
        g.validate()?;
        Ok(g)
    }

    /// Grid used by the two-mode figures.
    pub fn positive() -> Self {
        FrequencyGrid {
            min: 0.0,
            max: 2.0,
            n: 2001,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::invalid("detection.omega_min/max", "must be finite"));
        }
        if self.n == 0 {
            return Err(Error::invalid("detection.n_omega", "must be at least 1"));
        }
        if self.n > 1 && self.min >= self.max {
            return Err(Error::invalid("detection.omega_min_over_omega_m", "must be below omega_max"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| if i + 1 == self.n { self.max } else { self.min + step * i as f64 })
            .collect()
    }
}
