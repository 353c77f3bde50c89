use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Inclusive range `start:stop:step`: the points `start + k step` lying
/// below `stop + step / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidGrid("range bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        if stop < start {
            return Err(Error::InvalidGrid(format!("empty range {start}:{stop}")));
        }
        Ok(GridRange { start, stop, step })
    }

    pub fn single(x: f64) -> Result<Self> {
        Self::new(x, x, 1.0)
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 0.5 - 1e-9).ceil() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid points, computed as `start + k * step`.
    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

impl FromStr for GridRange {
    type Err = Error;

    /// Accepts `start:stop:step` or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidGrid(format!("`{t}` is not a number")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Self::single(parse(x)?),
            [a, b, c] => Self::new(parse(a)?, parse(b)?, parse(c)?),
            _ => Err(Error::InvalidGrid(format!(
                "`{s}` is not of the form start:stop:step"
            ))),
        }
    }
}

impl fmt::Display for GridRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_inclusive_endpoints() {
        let g: GridRange = "0:3:0.05".parse().unwrap();
        assert_eq!(g.len(), 61);
        let v = g.values();
        assert_eq!(v[0], 0.0);
        assert!((v[60] - 3.0).abs() < 1e-12);
        assert_eq!("0:6:0.02".parse::<GridRange>().unwrap().len(), 301);
        // stop not on the lattice: 0, 0.4, 0.8 (1.2 is beyond half a step)
        assert_eq!("0:1:0.4".parse::<GridRange>().unwrap().len(), 3);
    }

    #[test]
    fn single_point() {
        let g: GridRange = "2".parse().unwrap();
        assert_eq!(g.values(), vec![2.0]);
        assert_eq!("2:2:0.1".parse::<GridRange>().unwrap().values(), vec![2.0]);
    }

    #[test]
    fn rejects_invalid() {
        assert!("0:1:0".parse::<GridRange>().is_err());
        assert!("0:1:-1".parse::<GridRange>().is_err());
        assert!("1:0:0.1".parse::<GridRange>().is_err());
        assert!("0:1".parse::<GridRange>().is_err());
        assert!("a:1:0.1".parse::<GridRange>().is_err());
        assert!("0:inf:0.1".parse::<GridRange>().is_err());
    }
}
