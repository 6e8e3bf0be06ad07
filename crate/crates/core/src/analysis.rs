//! Unweighted least-squares fits for the excitation and survival laws, and the
//! `t/T₁` collapse diagnostic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Survival values below this are dropped from log-space fits.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `y = λ x²`
    QuadraticOrigin,
    /// `ln y = intercept - rate · x`
    Exponential,
    /// `y = slope · x + intercept`
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    /// λ for [`FitModel::QuadraticOrigin`]; the log-space slope (= -rate) for
    /// [`FitModel::Exponential`].
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination, clamped to [0, 1]. Log space for
    /// exponential fits.
    pub r_squared: f64,
    pub residual_max: f64,
    pub points_used: usize,
    pub points_dropped: usize,
}

impl FitResult {
    pub fn lambda(&self) -> f64 {
        self.slope
    }

    /// Decay rate of an exponential fit.
    pub fn rate(&self) -> f64 {
        -self.slope
    }

    pub fn predict(&self, x: f64) -> f64 {
        match self.model {
            FitModel::QuadraticOrigin => self.slope * x * x,
            FitModel::Exponential => (self.intercept + self.slope * x).exp(),
            FitModel::Linear => self.slope * x + self.intercept,
        }
    }
}

fn check_lengths(x: &[f64], y: &[f64], min: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Fit(format!("length mismatch ({} vs {})", x.len(), y.len())));
    }
    if x.len() < min {
        return Err(Error::Fit(format!("need at least {min} points, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Fit("non-finite data".into()));
    }
    Ok(())
}

fn goodness(y: &[f64], fitted: impl Iterator<Item = f64>) -> (f64, f64) {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let mut ss_res = 0.0;
    let mut worst = 0.0f64;
    for (yi, fi) in y.iter().zip(fitted) {
        let r = yi - fi;
        ss_res += r * r;
        worst = worst.max(r.abs());
    }
    let ss_tot: f64 = y.iter().map(|yi| (yi - mean).powi(2)).sum();
    let scale: f64 = y.iter().map(|yi| yi * yi).sum();
    let r2 = if ss_tot <= f64::EPSILON * scale {
        if ss_res <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    (r2.clamp(0.0, 1.0), worst)
}

/// `λ = Σ x² y / Σ x⁴`.
pub fn fit_quadratic_origin(x: &[f64], y: &[f64]) -> Result<FitResult> {
    check_lengths(x, y, 3)?;
    let s4: f64 = x.iter().map(|v| v.powi(4)).sum();
    if s4 == 0.0 {
        return Err(Error::Fit("all abscissae are zero".into()));
    }
    let lambda = x.iter().zip(y).map(|(a, b)| a * a * b).sum::<f64>() / s4;
    let (r_squared, residual_max) = goodness(y, x.iter().map(|a| lambda * a * a));
    Ok(FitResult {
        model: FitModel::QuadraticOrigin,
        slope: lambda,
        intercept: 0.0,
        r_squared,
        residual_max,
        points_used: x.len(),
        points_dropped: 0,
    })
}

/// Ordinary least squares line.
pub fn fit_linear(x: &[f64], y: &[f64]) -> Result<FitResult> {
    check_lengths(x, y, 2)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("abscissae are all equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let (r_squared, residual_max) = goodness(y, x.iter().map(|a| slope * a + intercept));
    Ok(FitResult {
        model: FitModel::Linear,
        slope,
        intercept,
        r_squared,
        residual_max,
        points_used: x.len(),
        points_dropped: 0,
    })
}

/// Linear fit of `ln y` against `x`. Values in `(0, LOG_FLOOR)` are dropped
/// and counted; non-positive values are an error.
pub fn fit_exponential(x: &[f64], y: &[f64]) -> Result<FitResult> {
    check_lengths(x, y, 2)?;
    if let Some(bad) = y.iter().find(|&&v| v <= 0.0) {
        return Err(Error::Fit(format!("non-positive value {bad} in exponential fit")));
    }
    let (kept_x, kept_ln): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(_, &v)| v >= LOG_FLOOR)
        .map(|(&a, &v)| (a, v.ln()))
        .unzip();
    let dropped = x.len() - kept_x.len();
    let mut fit = fit_linear(&kept_x, &kept_ln)?;
    fit.model = FitModel::Exponential;
    fit.points_dropped = dropped;
    Ok(fit)
}

/// A survival curve sampled at measurement events.
pub trait DecayCurve {
    fn event_times(&self) -> &[f64];
    fn survival(&self) -> &[f64];
}

impl<C: DecayCurve + ?Sized> DecayCurve for &C {
    fn event_times(&self) -> &[f64] {
        (**self).event_times()
    }

    fn survival(&self) -> &[f64] {
        (**self).survival()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseReport {
    /// `(T₁, fit)` with the rate expressed per unit of `t/T₁`.
    pub fits: Vec<(f64, FitResult)>,
    /// max rate / min rate; 1 when all rates coincide.
    pub ratio: f64,
}

impl CollapseReport {
    pub fn rates(&self) -> Vec<f64> {
        self.fits.iter().map(|(_, f)| f.rate()).collect()
    }
}

/// Fits each curve against `t/T₁` and compares the resulting decay rates.
pub fn collapse_slopes<C: DecayCurve>(series: &[(f64, C)]) -> Result<CollapseReport> {
    if series.len() < 2 {
        return Err(Error::Fit("collapse needs at least two periods".into()));
    }
    let mut fits = Vec::with_capacity(series.len());
    for (t1, curve) in series {
        if !(*t1 > 0.0) {
            return Err(Error::Fit(format!("non-positive period {t1}")));
        }
        let scaled: Vec<f64> = curve.event_times().iter().map(|t| t / t1).collect();
        fits.push((*t1, fit_exponential(&scaled, curve.survival())?));
    }
    let rates: Vec<f64> = fits.iter().map(|(_, f)| f.rate()).collect();
    let max = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio = if max == min { 1.0 } else { max / min };
    Ok(CollapseReport { fits, ratio })
}
