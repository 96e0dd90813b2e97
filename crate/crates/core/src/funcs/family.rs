//! Parametric scale functions z(t) and weight functions w(t).

use std::fmt;

use crate::error::{Error, Result};

/// Scale function z(t) entering the kernel (z(t) - z(τ))^{-α}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaleFamily {
    /// z(t) = t
    Identity,
    /// z(t) = t^p, p > 0
    Power { p: f64 },
    /// z(t) = a + b t, a >= 0, b > 0
    Linear { a: f64, b: f64 },
    /// z(t) = e^{ct} - 1 + offset, c > 0, offset >= 0
    Exp { c: f64, offset: f64 },
}

/// Weight function w(t) multiplying the solution inside and outside the integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFamily {
    /// w(t) = 1
    One,
    /// w(t) = e^{ct}
    Exp { c: f64 },
    /// w(t) = (1 + t)^p
    Power { p: f64 },
}

impl ScaleFamily {
    /// Rejects parameters outside the family's admissible range.
    pub fn check_params(&self) -> Result<()> {
        let ok = match *self {
            ScaleFamily::Identity => true,
            ScaleFamily::Power { p } => p.is_finite() && p > 0.0,
            ScaleFamily::Linear { a, b } => a.is_finite() && b.is_finite() && a >= 0.0 && b > 0.0,
            ScaleFamily::Exp { c, offset } => c.is_finite() && offset.is_finite() && c > 0.0 && offset >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "scale family {self} has inadmissible parameters"
            )))
        }
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            ScaleFamily::Identity => t,
            ScaleFamily::Power { p } => t.powf(p),
            ScaleFamily::Linear { a, b } => a + b * t,
            ScaleFamily::Exp { c, offset } => (c * t).exp_m1() + offset,
        }
    }

    /// z(from + by) - z(from), free of cancellation when `by` is small
    /// relative to `from`.
    #[inline]
    pub fn increment(&self, from: f64, by: f64) -> f64 {
        match *self {
            ScaleFamily::Identity => by,
            ScaleFamily::Linear { b, .. } => b * by,
            ScaleFamily::Power { p } => {
                if by < from {
                    from.powf(p) * (p * (by / from).ln_1p()).exp_m1()
                } else {
                    (from + by).powf(p) - from.powf(p)
                }
            }
            ScaleFamily::Exp { c, .. } => (c * from).exp() * (c * by).exp_m1(),
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ScaleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ScaleFamily::Identity => write!(f, "z(t)=t"),
            ScaleFamily::Power { p } => write!(f, "z(t)=t^{p}"),
            ScaleFamily::Linear { a, b } => write!(f, "z(t)={a}+{b}t"),
            ScaleFamily::Exp { c, offset } => write!(f, "z(t)=exp({c}t)-1+{offset}"),
        }
    }
}

impl WeightFamily {
    pub fn check_params(&self) -> Result<()> {
        let ok = match *self {
            WeightFamily::One => true,
            WeightFamily::Exp { c } => c.is_finite(),
            WeightFamily::Power { p } => p.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "weight family {self} has inadmissible parameters"
            )))
        }
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            WeightFamily::One => 1.0,
            WeightFamily::Exp { c } => (c * t).exp(),
            WeightFamily::Power { p } => (1.0 + t).powf(p),
        }
    }

    /// w'(t)
    #[inline]
    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            WeightFamily::One => 0.0,
            WeightFamily::Exp { c } => c * (c * t).exp(),
            WeightFamily::Power { p } => p * (1.0 + t).powf(p - 1.0),
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            WeightFamily::One => write!(f, "w(t)=1"),
            WeightFamily::Exp { c } => write!(f, "w(t)=exp({c}t)"),
            WeightFamily::Power { p } => write!(f, "w(t)=(1+t)^{p}"),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time argument must be finite, got {t}")))
    }
}

pub fn eval_scale(z: &ScaleFamily, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(z.value(t))
}

pub fn eval_weight(w: &WeightFamily, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(w.value(t))
}

/// Outcome of [`validate_pair`] when no hard condition fails.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub samples: usize,
    pub scale_increasing: bool,
    pub scale_nonnegative: bool,
    pub weight_positive: bool,
    /// Soft condition: the positivity guarantee for the history
    /// coefficients assumes it, the scheme runs without it.
    pub weight_nondecreasing: bool,
    pub warnings: Vec<String>,
}

/// Checks a (z, w) pair on the 2M + 1 points kT/(2M).
///
/// Hard conditions (z strictly increasing, z(0) >= 0, w > 0) produce an
/// error naming the first violation; a decreasing weight only adds a warning.
pub fn validate_pair(
    z: &ScaleFamily,
    w: &WeightFamily,
    horizon: f64,
    steps: usize,
) -> Result<ValidationReport> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "horizon T must be positive, got {horizon}"
        )));
    }
    if steps < 1 {
        return Err(Error::InvalidParameter("time steps M must be at least 1".into()));
    }
    z.check_params()?;
    w.check_params()?;

    let samples = 2 * steps + 1;
    let at = |k: usize| horizon * k as f64 / (2 * steps) as f64;

    let z0 = z.value(0.0);
    if !(z0 >= 0.0) {
        return Err(Error::Validation {
            condition: "z(0) >= 0",
            at: 0.0,
        });
    }

    let mut prev_z = z0;
    let mut prev_w = w.value(0.0);
    if !(prev_w > 0.0) {
        return Err(Error::Validation {
            condition: "w(t) > 0",
            at: 0.0,
        });
    }
    let mut weight_nondecreasing = true;
    let mut warnings = Vec::new();
    for k in 1..samples {
        let t = at(k);
        let zk = z.value(t);
        if !(zk > prev_z) {
            return Err(Error::Validation {
                condition: "z strictly increasing",
                at: t,
            });
        }
        let wk = w.value(t);
        if !(wk > 0.0) {
            return Err(Error::Validation {
                condition: "w(t) > 0",
                at: t,
            });
        }
        if wk < prev_w && weight_nondecreasing {
            weight_nondecreasing = false;
            warnings.push(format!(
                "w not increasing at t = {t}: coefficient positivity is not guaranteed"
            ));
        }
        prev_z = zk;
        prev_w = wk;
    }

    Ok(ValidationReport {
        samples,
        scale_increasing: true,
        scale_nonnegative: true,
        weight_positive: true,
        weight_nondecreasing,
        warnings,
    })
}
