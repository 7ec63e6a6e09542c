use crate::error::{Error, Result};

/// Result of a simple least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// `1 - SS_res / SS_tot`, clamped to `[0, 1]`. Defined as 1 when `y` is
    /// constant (the fit is then exact).
    pub r_squared: f64,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares on centred sums.
pub fn ols(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    assert_eq!(x.len(), y.len(), "ols: x and y lengths differ");
    if x.len() < 2 {
        return Err(Error::Range {
            needed: 2,
            got: x.len(),
        });
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let (dx, dy) = (xi - mean_x, yi - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let spread = x.iter().fold(0.0f64, |acc, &xi| acc.max((xi - mean_x).abs()));
    if sxx == 0.0 || spread <= 1e-12 * mean_x.abs().max(1.0) {
        return Err(Error::Singular("all abscissas are identical".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| (yi - intercept - slope * xi).powi(2))
        .sum();
    let r_squared = if syy <= f64::EPSILON * mean_y.abs().max(1.0) * n {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let fit = ols(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_line_matches_normal_equations() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [2.1, 3.9, 6.2, 7.8, 10.1];
        let fit = ols(&x, &y).unwrap();
        // normal equations solved by hand: slope = (n Sxy - Sx Sy) / (n Sxx - Sx^2)
        let (n, sx, sy) = (5.0, 15.0, 30.1);
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let sxx: f64 = x.iter().map(|a| a * a).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((fit.slope - slope).abs() < 1e-12);
        assert!(fit.r_squared > 0.99 && fit.r_squared < 1.0);
    }

    #[test]
    fn singular_and_short_inputs() {
        assert!(matches!(ols(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]), Err(Error::Singular(_))));
        assert!(matches!(ols(&[1.0], &[1.0]), Err(Error::Range { .. })));
    }
}
