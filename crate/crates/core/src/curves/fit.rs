use serde::{Deserialize, Serialize};

use super::PolygonalCurve;
use crate::domain::{vec, DomainKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub exponent: f64,
    /// Two standard errors of the slope.
    pub half_width: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Least-squares slope of `ln y` against `ln t` over the final
/// `tail_fraction` of the samples.
pub fn fit_growth_exponent(t: &[f64], y: &[f64], tail_fraction: f64) -> Result<GrowthFit> {
    if t.len() != y.len() {
        return Err(Error::Fit(format!("{} times but {} values", t.len(), y.len())));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::OutOfRange {
            what: "tail_fraction",
            value: tail_fraction,
            min: 0.0,
            max: 1.0,
        });
    }
    let n = ((t.len() as f64) * tail_fraction).ceil() as usize;
    if n < 10 {
        return Err(Error::InsufficientData(format!("{n} tail points, at least 10 needed")));
    }
    let start = t.len() - n;
    let (tt, yy) = (&t[start..], &y[start..]);
    if let Some(k) = (0..n).find(|&k| !(tt[k] > 0.0 && yy[k] > 0.0)) {
        return Err(Error::Fit(format!(
            "nonpositive sample (t = {}, y = {}) at index {}",
            tt[k],
            yy[k],
            start + k
        )));
    }
    // Offsets from the first sample keep a constant series exactly flat.
    let (x0, z0) = (tt[0].ln(), yy[0].ln());
    let xs: Vec<f64> = tt.iter().map(|v| v.ln() - x0).collect();
    let zs: Vec<f64> = yy.iter().map(|v| v.ln() - z0).collect();
    let nf = n as f64;
    let xm = xs.iter().sum::<f64>() / nf;
    let zm = zs.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all tail times are equal".into()));
    }
    let sxz: f64 = xs.iter().zip(&zs).map(|(x, z)| (x - xm) * (z - zm)).sum();
    let slope = sxz / sxx;
    let ssr: f64 = xs
        .iter()
        .zip(&zs)
        .map(|(x, z)| (z - zm - slope * (x - xm)).powi(2))
        .sum();
    let se = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(GrowthFit {
        exponent: slope,
        half_width: 2.0 * se,
        intercept: z0 + zm - slope * (x0 + xm),
        points: n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayFit {
    pub origin: Vec<f64>,
    pub direction: Vec<f64>,
    /// Vertex arclengths and the distance of each vertex from the ray.
    pub t: Vec<f64>,
    pub residual: Vec<f64>,
    /// Growth exponent of the residuals over the fit window; `None` when
    /// the residuals vanish there.
    pub fit: Option<GrowthFit>,
}

/// Ray from the curve's start through its end, with the distance of every
/// vertex from that ray. `window` restricts the growth fit to a range of
/// arclengths (default: the final half of the samples).
pub fn asymptotic_ray_fit(curve: &PolygonalCurve, window: Option<(f64, f64)>) -> Result<RayFit> {
    if !matches!(curve.domain().kind(), DomainKind::Euclidean { .. }) {
        return Err(Error::Unsupported("ray fitting needs a Euclidean space".into()));
    }
    let verts = curve.vertices();
    let origin = verts[0].coords().to_vec();
    let chord = vec::sub(verts.last().unwrap().coords(), &origin);
    let direction = vec::normalize(&chord)
        .filter(|_| vec::norm(&chord) > 0.0)
        .ok_or_else(|| Error::Fit("curve returns to its start; no chord direction".into()))?;
    let residual: Vec<f64> = verts
        .iter()
        .map(|p| {
            let w = vec::sub(p.coords(), &origin);
            let along = vec::dot(&w, &direction).max(0.0);
            vec::norm(&vec::axpy(&w, -along, &direction))
        })
        .collect();
    let t = curve.cumulative().to_vec();
    let (ft, fr): (Vec<f64>, Vec<f64>) = match window {
        Some((lo, hi)) => t
            .iter()
            .zip(&residual)
            .filter(|(s, _)| **s >= lo && **s <= hi)
            .map(|(s, r)| (*s, *r))
            .unzip(),
        None => {
            let start = t.len() / 2;
            (t[start..].to_vec(), residual[start..].to_vec())
        }
    };
    let fit = if fr.iter().all(|r| *r <= 0.0) {
        None
    } else {
        Some(fit_growth_exponent(&ft, &fr, 1.0)?)
    };
    Ok(RayFit {
        origin,
        direction,
        t,
        residual,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_series() {
        let t: Vec<f64> = (1..=1000).map(|k| k as f64).collect();
        let y: Vec<f64> = t.iter().map(|v| v.sqrt()).collect();
        let fit = fit_growth_exponent(&t, &y, 0.5).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-12);
        assert!(fit.half_width < 1e-10);
        assert_eq!(fit.points, 500);
    }

    #[test]
    fn constant_series_is_flat() {
        let t: Vec<f64> = (1..=50).map(|k| k as f64 * 0.37).collect();
        let y = vec![3.3; 50];
        assert_eq!(fit_growth_exponent(&t, &y, 0.5).unwrap().exponent, 0.0);
    }

    #[test]
    fn fit_errors() {
        let t: Vec<f64> = (1..=50).map(|k| k as f64).collect();
        let mut y = t.clone();
        y[40] = 0.0;
        assert!(matches!(fit_growth_exponent(&t, &y, 0.5), Err(Error::Fit(_))));
        assert!(matches!(
            fit_growth_exponent(&t[..15], &t[..15], 0.5),
            Err(Error::InsufficientData(_))
        ));
        assert!(fit_growth_exponent(&t, &t, 0.0).is_err());
    }
}
