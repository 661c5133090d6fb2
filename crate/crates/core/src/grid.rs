//! Sweep axes.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Checks that an axis is non-empty, finite and strictly monotone in either
/// direction.
pub fn validate_axis(values: &[f64], axis: &'static str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyGrid { axis });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonMonotoneGrid { axis });
    }
    if values.len() > 1 {
        let increasing = values[1] > values[0];
        let ok = values
            .windows(2)
            .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] });
        if !ok {
            return Err(Error::NonMonotoneGrid { axis });
        }
    }
    Ok(())
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![start],
        n => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_endpoints() {
        let g = linspace(-1.0, 2.0, 7);
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[6], 2.0);
        assert!(validate_axis(&g, "x").is_ok());
    }

    #[test]
    fn rejects_bad_axes() {
        assert_eq!(validate_axis(&[], "x"), Err(Error::EmptyGrid { axis: "x" }));
        assert!(validate_axis(&[0.0, 1.0, 1.0], "x").is_err());
        assert!(validate_axis(&[0.0, f64::NAN], "x").is_err());
        assert!(validate_axis(&[3.0, 2.0, 1.0], "x").is_ok());
        assert!(validate_axis(&[5.0], "x").is_ok());
    }
}
