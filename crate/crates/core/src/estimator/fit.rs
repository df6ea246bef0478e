use serde::Serialize;

use crate::error::{Error, Result};

/// Least-squares line through `(ln n, ln value)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    #[serde(skip)]
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some(p) = points.iter().find(|(n, v)| !(*n > 0.0 && *v > 0.0)) {
        return Err(Error::DegenerateFit(format!("non-positive point {p:?}")));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all sizes are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ExponentFit { points: points.to_vec(), slope, intercept, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_lines() {
        let f = fit_exponent(&[(10.0, 10.0), (100.0, 100.0), (1000.0, 1000.0)]).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
        assert!(f.intercept.abs() < 1e-12);
        let f = fit_exponent(&[(10.0, 3.0), (100.0, 3.0), (1000.0, 3.0)]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(fit_exponent(&[(10.0, 1.0), (10.0, 2.0), (10.0, 3.0)]), Err(Error::DegenerateFit(_))));
        assert!(fit_exponent(&[(10.0, 1.0), (20.0, 2.0)]).is_err());
        assert!(fit_exponent(&[(10.0, 1.0), (20.0, 0.0), (30.0, 1.0)]).is_err());
    }
}
