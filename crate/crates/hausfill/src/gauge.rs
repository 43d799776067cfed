//! Hausdorff functions (gauges), the premeasure they induce, and the
//! ratio-based order checks on them.
//!
//! A gauge `h` is a non-decreasing function with `h(t) > 0` for `t > 0`.
//! Together with a cap `Θ` it induces the premeasure
//! `ξ(U) = min{h(diam U), h(Θ)}`, `ξ(∅) = 0`, which is what every cover
//! estimate in [`crate::cover`] sums.
//!
//! Two asymptotic questions about gauges are answered by sampling a dyadic
//! grid `t = Θ·2^{-k}`:
//!
//! - *finite order*: is `h(3t)/h(t)` bounded as `t → 0`?
//! - *ordering* `g ≺ h`: does `h(t)/g(t) → 0`?
//!
//! True limits are not computable from samples, so verdicts are trend-based
//! and `Inconclusive` is a first-class outcome.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance for double comparisons throughout the crate.
pub const TOL: f64 = 1e-12;

/// Diameter argument of the premeasure: either the empty set or a
/// non-negative diameter. A one-point set has `Of(0.0)`, which is distinct
/// from `Empty` whenever `h(0) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Diam {
    Empty,
    Of(f64),
}

/// An evaluable gauge with cap `Θ` and a human-readable label.
///
/// Gauges are closures plus metadata; there is no symbolic layer. All
/// operations only ever need point evaluation.
#[derive(Clone)]
pub struct HausdorffFunction {
    label: String,
    cap: f64,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for HausdorffFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HausdorffFunction")
            .field("label", &self.label)
            .field("cap", &self.cap)
            .finish()
    }
}

impl HausdorffFunction {
    /// Wrap an arbitrary evaluable gauge. `cap` is the Θ of the induced
    /// premeasure and must be positive with `h(Θ)` finite.
    pub fn new<F>(label: impl Into<String>, cap: f64, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(cap > 0.0) {
            return Err(Error::InvalidInput(format!(
                "cap Θ must be positive, got {cap}"
            )));
        }
        let h = Self {
            label: label.into(),
            cap,
            eval: Arc::new(eval),
        };
        if !h.eval(cap).is_finite() {
            return Err(Error::InvalidGauge(format!(
                "h(Θ) = h({cap}) is not finite"
            )));
        }
        Ok(h)
    }

    /// The power gauge `h(t) = t^s`. Θ = 1.
    pub fn power(s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidInput(format!(
                "power exponent must be positive, got {s}"
            )));
        }
        Self::new(format!("power:{s}"), 1.0, move |t| t.powf(s))
    }

    /// The three-piece dimension gauge
    ///
    /// ```text
    /// h(x) = 0                    x = 0
    ///        x^t · log(1/x^{t/2}) 0 < x ≤ e^{-2/t}
    ///        e^{-2}               x > e^{-2/t}
    /// ```
    ///
    /// continuous at the junction `x = e^{-2/t}`, of finite order, and
    /// sitting strictly between `x^{t'}` and `x^t` in the ≺ order for every
    /// `0 < t' < t`.
    pub fn dimension_function(t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::InvalidInput(format!(
                "dimension function parameter must be positive, got {t}"
            )));
        }
        let junction = (-2.0 / t).exp();
        Self::new(format!("dimfun:{t}"), 1.0, move |x| {
            if x == 0.0 {
                0.0
            } else if x <= junction {
                // log(1/x^{t/2}) = (t/2)·ln(1/x)
                x.powf(t) * (t / 2.0) * (1.0 / x).ln()
            } else {
                (-2.0f64).exp()
            }
        })
    }

    /// `h(t) = exp(-1/t)` with `h(0) = 0`: a valid gauge that is *not* of
    /// finite order (the ratio `h(3t)/h(t) = exp(2/(3t))` diverges).
    pub fn exp_inv() -> Self {
        Self::new("exp-inv", 1.0, |t| {
            if t == 0.0 {
                0.0
            } else {
                (-1.0 / t).exp()
            }
        })
        .expect("exp-inv is a valid gauge")
    }

    /// Resolve a registry string: `power:s`, `dimfun:t`, or `exp-inv`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        if spec == "exp-inv" {
            return Ok(Self::exp_inv());
        }
        if let Some(s) = spec.strip_prefix("power:") {
            let s: f64 = s
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad power exponent in {spec:?}")))?;
            return Self::power(s);
        }
        if let Some(t) = spec.strip_prefix("dimfun:") {
            let t: f64 = t
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad dimfun parameter in {spec:?}")))?;
            return Self::dimension_function(t);
        }
        Err(Error::InvalidInput(format!(
            "unknown gauge {spec:?} (expected power:s, dimfun:t, or exp-inv)"
        )))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The cap Θ of the induced premeasure.
    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// Point evaluation `h(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// The induced premeasure `ξ`: 0 for the empty set, otherwise
    /// `min{h(d), h(Θ)}`.
    pub fn premeasure(&self, d: Diam) -> Result<f64> {
        match d {
            Diam::Empty => Ok(0.0),
            Diam::Of(d) => {
                if !(d >= 0.0) {
                    return Err(Error::InvalidInput(format!("negative diameter {d}")));
                }
                Ok(self.eval(d).min(self.eval(self.cap)))
            }
        }
    }
}

/// Outcome of the finite-order check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrderVerdict {
    FiniteOrder,
    NotFiniteOrder,
    Inconclusive,
}

/// Supremum of the sampled ratios, or a flag when the samples overflow /
/// clearly diverge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SupRatio {
    Finite(f64),
    UnboundedTrend,
}

/// Report of [`finite_order_check`].
#[derive(Debug, Clone, Serialize)]
pub struct FiniteOrderReport {
    pub gauge: String,
    /// (t, h(3t)/h(t)) samples on the dyadic grid, coarse to fine.
    pub ratio_samples: Vec<(f64, f64)>,
    pub sup_ratio: SupRatio,
    pub verdict: OrderVerdict,
}

// A trailing-half max more than this factor above the leading-half max is
// treated as growth; more than DIVERGENCE_FACTOR as divergence.
const STABLE_FACTOR: f64 = 1.5;
const DIVERGENCE_FACTOR: f64 = 10.0;

/// Sample `h(3t)/h(t)` on `t = Θ·2^{-k}`, `k = 1..levels`, stopping at
/// `t_min`, and classify the trend.
///
/// `FiniteOrder` requires every ratio finite and no growth trend over the
/// final half of the grid (trailing-half max within [`STABLE_FACTOR`] of the
/// leading-half max). Overflowing ratios or growth beyond
/// [`DIVERGENCE_FACTOR`] give `NotFiniteOrder`; anything in between is
/// `Inconclusive`.
pub fn finite_order_check(
    h: &HausdorffFunction,
    t_min: f64,
    levels: usize,
) -> Result<FiniteOrderReport> {
    if !(t_min > 0.0) {
        return Err(Error::InvalidInput(format!(
            "t_min must be positive, got {t_min}"
        )));
    }
    if levels < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 levels, got {levels}"
        )));
    }

    let mut samples = Vec::new();
    for k in 1..=levels {
        let t = h.cap() * 0.5f64.powi(k as i32);
        if t < t_min {
            break;
        }
        let num = h.eval(3.0 * t);
        let den = h.eval(t);
        if den == 0.0 || !den.is_finite() {
            return Err(Error::InvalidGauge(format!(
                "{} evaluates to {den} at t = {t} > 0",
                h.label()
            )));
        }
        samples.push((t, num / den));
    }
    if samples.len() < 4 {
        return Err(Error::InvalidInput(
            "t_min leaves fewer than 4 dyadic samples".into(),
        ));
    }

    let ratios: Vec<f64> = samples.iter().map(|&(_, r)| r).collect();
    let any_nonfinite = ratios.iter().any(|r| !r.is_finite());
    let sup = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let half = ratios.len() / 2;
    let lead_max = ratios[..half]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let tail_max = ratios[half..]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);

    let (sup_ratio, verdict) = if any_nonfinite {
        (SupRatio::UnboundedTrend, OrderVerdict::NotFiniteOrder)
    } else {
        let growth = tail_max / lead_max;
        if growth <= STABLE_FACTOR {
            (SupRatio::Finite(sup), OrderVerdict::FiniteOrder)
        } else if growth > DIVERGENCE_FACTOR {
            (SupRatio::UnboundedTrend, OrderVerdict::NotFiniteOrder)
        } else {
            (SupRatio::Finite(sup), OrderVerdict::Inconclusive)
        }
    };

    Ok(FiniteOrderReport {
        gauge: h.label().to_string(),
        ratio_samples: samples,
        sup_ratio,
        verdict,
    })
}

/// Outcome of the ≺ check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrecedesVerdict {
    Precedes,
    NotPrecedes,
    Inconclusive,
}

/// Report of [`precedes`].
#[derive(Debug, Clone, Serialize)]
pub struct PrecedesReport {
    pub coarse: String,
    pub fine: String,
    /// (t, h(t)/g(t)) samples, coarse to fine.
    pub ratio_samples: Vec<(f64, f64)>,
    pub verdict: PrecedesVerdict,
}

// Trend verdicts need at least this many grid points.
const MIN_TREND_POINTS: usize = 16;
// The ratio must shrink by at least this factor over the final half.
const DECREASE_FACTOR: f64 = 1.5;
// A final-half net change within this factor counts as "no decrease".
const FLAT_FACTOR: f64 = 1.05;

/// Check `g ≺ h`, i.e. `h(t)/g(t) → 0` as `t → 0`, by sampling the dyadic
/// grid `t = Θ·2^{-k}`, `k = 1..levels`, with `Θ = min(caps)`.
///
/// `Precedes` requires the ratio to decrease monotonically over the final
/// half of the grid and to shrink there by at least [`DECREASE_FACTOR`].
/// A flat or growing tail gives `NotPrecedes`; a decrease too slow to call
/// gives `Inconclusive`, as does a grid shorter than [`MIN_TREND_POINTS`].
pub fn precedes(
    g: &HausdorffFunction,
    h: &HausdorffFunction,
    levels: usize,
) -> Result<PrecedesReport> {
    if levels < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 levels, got {levels}"
        )));
    }
    let cap = g.cap().min(h.cap());
    let mut samples = Vec::with_capacity(levels);
    for k in 1..=levels {
        let t = cap * 0.5f64.powi(k as i32);
        let den = g.eval(t);
        if den == 0.0 || !den.is_finite() {
            return Err(Error::InvalidGauge(format!(
                "{} evaluates to {den} at t = {t} > 0",
                g.label()
            )));
        }
        samples.push((t, h.eval(t) / den));
    }

    let verdict = if samples.len() < MIN_TREND_POINTS {
        PrecedesVerdict::Inconclusive
    } else {
        let ratios: Vec<f64> = samples.iter().map(|&(_, r)| r).collect();
        let tail = &ratios[ratios.len() / 2..];
        let monotone_down = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + TOL));
        let first = tail[0];
        let last = *tail.last().expect("tail is non-empty");
        if monotone_down && last > 0.0 && first / last >= DECREASE_FACTOR {
            PrecedesVerdict::Precedes
        } else if monotone_down && last == 0.0 && first > 0.0 {
            // underflowed all the way to zero: decisive
            PrecedesVerdict::Precedes
        } else if last * FLAT_FACTOR >= first {
            PrecedesVerdict::NotPrecedes
        } else {
            PrecedesVerdict::Inconclusive
        }
    };

    Ok(PrecedesReport {
        coarse: g.label().to_string(),
        fine: h.label().to_string(),
        ratio_samples: samples,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn premeasure_cases() {
        let h = HausdorffFunction::power(2.0).unwrap();
        assert_eq!(h.premeasure(Diam::Empty).unwrap(), 0.0);
        assert!((h.premeasure(Diam::Of(0.5)).unwrap() - 0.25).abs() < TOL);

        // cap case: h(t) = t with Θ = 0.1 clamps a large diameter to h(Θ)
        let capped = HausdorffFunction::new("power:1@0.1", 0.1, |t| t).unwrap();
        assert!((capped.premeasure(Diam::Of(5.0)).unwrap() - 0.1).abs() < TOL);

        assert!(matches!(
            h.premeasure(Diam::Of(-1.0)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn power_ratios_are_exactly_three_to_the_s() {
        for s in [0.5, 1.0, 2.0] {
            let h = HausdorffFunction::power(s).unwrap();
            let rep = finite_order_check(&h, 1e-9, 20).unwrap();
            assert_eq!(rep.verdict, OrderVerdict::FiniteOrder);
            let expected = 3.0f64.powf(s);
            for &(_, r) in &rep.ratio_samples {
                assert!((r - expected).abs() < TOL, "s={s}: ratio {r} vs {expected}");
            }
        }
    }

    #[test]
    fn dimension_function_values() {
        let h = HausdorffFunction::dimension_function(1.0).unwrap();
        let junction = (-2.0f64).exp();
        assert!((h.eval(junction) - junction).abs() < TOL);
        assert_eq!(h.eval(0.0), 0.0);
        // monotone non-decreasing on the dyadic grid
        let mut prev = f64::NEG_INFINITY;
        for k in (1..=20).rev() {
            let v = h.eval(0.5f64.powi(k));
            assert!(v >= prev - TOL, "not monotone at 2^-{k}");
            prev = v;
        }
        assert!(matches!(
            HausdorffFunction::dimension_function(0.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn dimension_function_is_finite_order() {
        for t in [0.5, 1.0, 2.0] {
            let h = HausdorffFunction::dimension_function(t).unwrap();
            let rep = finite_order_check(&h, 1e-9, 20).unwrap();
            assert_eq!(rep.verdict, OrderVerdict::FiniteOrder, "t = {t}");
        }
    }

    #[test]
    fn exp_inv_is_not_finite_order() {
        // ratio is exp(2/(3t)), which explodes; keep t_min above the f64
        // underflow of h itself.
        let h = HausdorffFunction::exp_inv();
        let rep = finite_order_check(&h, 1e-3, 9).unwrap();
        assert_eq!(rep.verdict, OrderVerdict::NotFiniteOrder);
        assert_eq!(rep.sup_ratio, SupRatio::UnboundedTrend);
        for &(t, r) in rep.ratio_samples.iter().take(6) {
            let expected = (2.0 / (3.0 * t)).exp();
            assert!((r / expected - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_gauge_is_rejected() {
        let h = HausdorffFunction::new("clipped", 1.0, |t| (t - 0.4).max(0.0)).unwrap();
        assert!(matches!(
            finite_order_check(&h, 1e-9, 8),
            Err(Error::InvalidGauge(_))
        ));
        let g = HausdorffFunction::power(1.0).unwrap();
        assert!(matches!(precedes(&h, &g, 16), Err(Error::InvalidGauge(_))));
    }

    #[test]
    fn precedes_basics() {
        let g = HausdorffFunction::power(1.0).unwrap();
        let h = HausdorffFunction::power(2.0).unwrap();
        assert_eq!(
            precedes(&g, &h, 24).unwrap().verdict,
            PrecedesVerdict::Precedes
        );
        assert_eq!(
            precedes(&g, &g, 24).unwrap().verdict,
            PrecedesVerdict::NotPrecedes
        );
        assert_eq!(
            precedes(&h, &g, 24).unwrap().verdict,
            PrecedesVerdict::NotPrecedes
        );
    }

    #[test]
    fn dimension_function_sits_between_powers() {
        let lo = HausdorffFunction::power(0.5).unwrap();
        let d = HausdorffFunction::dimension_function(1.0).unwrap();
        let hi = HausdorffFunction::power(1.0).unwrap();
        assert_eq!(
            precedes(&lo, &d, 24).unwrap().verdict,
            PrecedesVerdict::Precedes
        );
        assert_eq!(
            precedes(&d, &hi, 24).unwrap().verdict,
            PrecedesVerdict::Precedes
        );
        assert_eq!(
            precedes(&d, &lo, 24).unwrap().verdict,
            PrecedesVerdict::NotPrecedes
        );
        assert_eq!(
            precedes(&hi, &d, 24).unwrap().verdict,
            PrecedesVerdict::NotPrecedes
        );
    }

    #[test]
    fn registry_strings() {
        assert_eq!(
            HausdorffFunction::from_spec("power:0.5").unwrap().label(),
            "power:0.5"
        );
        assert_eq!(
            HausdorffFunction::from_spec("dimfun:2").unwrap().label(),
            "dimfun:2"
        );
        assert_eq!(
            HausdorffFunction::from_spec("exp-inv").unwrap().label(),
            "exp-inv"
        );
        assert!(HausdorffFunction::from_spec("nope").is_err());
    }
}
