//! Least-squares polynomial fits in `ħ` and log–log slopes.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

/// Largest acceptable condition number of the (rescaled) design matrix.
pub const MAX_CONDITION: f64 = 1e8;

/// A fitted polynomial `y(ħ) ≈ Σ_j a_j ħ^j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyFit {
    /// Coefficients `a_0, a_1, …`.
    pub coeffs: Vec<Complex64>,
    /// Standard errors of the coefficients (zero for an exactly determined fit).
    pub stderr: Vec<f64>,
    /// Root-mean-square residual of the fit.
    pub rms: f64,
    /// Condition number of the design matrix, with `ħ` rescaled to `[0, 1]`.
    pub condition: f64,
}

/// Fits `ys` against a polynomial of the given degree in `hs`.
///
/// The abscissae are rescaled by their maximum before solving, so the
/// reported condition number measures how clustered the levels are rather
/// than how small `ħ` is.
///
/// ```
/// use curveops::symbol::fit::fit_polynomial;
/// use num_complex::Complex64;
/// let hs = [0.01, 0.005, 0.0025];
/// let ys: Vec<Complex64> = hs.iter().map(|h| Complex64::new(1.0 + h + h * h, 0.0)).collect();
/// let fit = fit_polynomial(&hs, &ys, 2).unwrap();
/// assert!((fit.coeffs[0].re - 1.0).abs() < 1e-9);
/// assert!((fit.coeffs[1].re - 1.0).abs() < 1e-6);
/// ```
pub fn fit_polynomial(hs: &[f64], ys: &[Complex64], degree: usize) -> Result<PolyFit> {
    let m = hs.len();
    let p = degree + 1;
    if ys.len() != m {
        return Err(Error::Fit(format!("{m} abscissae but {} values", ys.len())));
    }
    if m < p {
        return Err(Error::Fit(format!(
            "{m} samples cannot determine a degree-{degree} polynomial"
        )));
    }
    let scale = hs.iter().fold(0.0f64, |a, &h| a.max(h.abs()));
    if scale == 0.0 {
        return Err(Error::Fit("all abscissae vanish".into()));
    }
    let a = DMatrix::from_fn(m, p, |i, j| (hs[i] / scale).powi(j as i32));
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::Fit(format!(
            "levels too clustered (condition number {condition:.3e})"
        )));
    }
    let re = DVector::from_iterator(m, ys.iter().map(|y| y.re));
    let im = DVector::from_iterator(m, ys.iter().map(|y| y.im));
    let solve = |b: &DVector<f64>| -> Result<DVector<f64>> {
        svd.solve(b, 0.0).map_err(|e| Error::Fit(e.to_string()))
    };
    let (xr, xi) = (solve(&re)?, solve(&im)?);
    let rr = &a * &xr - &re;
    let ri = &a * &xi - &im;
    let sse = rr.norm_squared() + ri.norm_squared();
    let rms = (sse / m as f64).sqrt();
    // Covariance σ²(AᵀA)⁻¹ = σ² V Σ⁻² Vᵀ.
    let sigma2 = if m > p { sse / (m - p) as f64 } else { 0.0 };
    let vt = svd.v_t.as_ref().ok_or_else(|| Error::Fit("SVD failed".into()))?;
    let stderr = (0..p)
        .map(|j| {
            let var: f64 = (0..p)
                .map(|s| (vt[(s, j)] / svd.singular_values[s]).powi(2))
                .sum();
            (sigma2 * var).sqrt() / scale.powi(j as i32)
        })
        .collect();
    let coeffs = (0..p)
        .map(|j| Complex64::new(xr[j], xi[j]) / scale.powi(j as i32))
        .collect();
    Ok(PolyFit {
        coeffs,
        stderr,
        rms,
        condition,
    })
}

/// Least-squares slope of `log y` against `log x`, over the points with
/// `y > floor`.  `None` when fewer than two such points remain.
pub fn loglog_slope(xs: &[f64], ys: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > floor)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_quadratic() {
        let hs = [0.01, 0.005, 0.0025];
        let ys: Vec<Complex64> = hs
            .iter()
            .map(|h| Complex64::new(1.0 + h + h * h, -2.0 * h))
            .collect();
        let f = fit_polynomial(&hs, &ys, 2).unwrap();
        assert!((f.coeffs[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((f.coeffs[1] - Complex64::new(1.0, -2.0)).norm() < 1e-9);
        assert!(f.rms < 1e-14);
    }

    #[test]
    fn rejects_clustered_levels() {
        let hs = [0.01, 0.01 + 1e-12, 0.01 - 1e-12];
        let ys = vec![Complex64::new(1.0, 0.0); 3];
        assert!(matches!(fit_polynomial(&hs, &ys, 2), Err(Error::Fit(_))));
    }

    #[test]
    fn rejects_underdetermined() {
        assert!(fit_polynomial(&[0.1, 0.2], &[Complex64::default(); 2], 2).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [0.1, 0.05, 0.02, 0.01];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x * x).collect();
        assert!((loglog_slope(&xs, &ys, 0.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(loglog_slope(&xs, &ys, 1.0).is_none());
    }
}
