//! Holomorphic functions reduced to the one thing the solution family
//! consumes: exact derivative vectors at a point.

use crate::error::{Error, Result};
use crate::jets::Cx;
use serde::{Deserialize, Serialize};

const SERIES_TERM_CAP: usize = 10_000;
const SERIES_REL_CUTOFF: f64 = 1e-17;

/// A holomorphic function F with closed-form derivatives of every order.
///
/// `Exp`, `Sin`, `Cos` carry a frequency: the function is e.g.
/// sin(scale·z). `PowerSeries` is Σ a_s (z - center)^s on the open disk
/// |z - center| < radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HolomorphicFn {
    Polynomial { coefficients: Vec<Cx> },
    Exp { scale: Cx },
    Sin { scale: Cx },
    Cos { scale: Cx },
    PowerSeries {
        center: Cx,
        coefficients: Vec<Cx>,
        radius: f64,
    },
}

impl HolomorphicFn {
    /// Polynomial with ascending-degree coefficients; trailing zeros are
    /// normalized away.
    pub fn polynomial(mut coefficients: Vec<Cx>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidConfig(
                "polynomial needs at least one coefficient".into(),
            ));
        }
        for c in &coefficients {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        while coefficients.len() > 1 && coefficients.last() == Some(&Cx::ZERO) {
            coefficients.pop();
        }
        Ok(HolomorphicFn::Polynomial { coefficients })
    }

    pub fn power_series(center: Cx, coefficients: Vec<Cx>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidConfig("power series radius must be > 0".into()));
        }
        if coefficients.is_empty() {
            return Err(Error::InvalidConfig(
                "power series needs at least one coefficient".into(),
            ));
        }
        Ok(HolomorphicFn::PowerSeries {
            center,
            coefficients,
            radius,
        })
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, HolomorphicFn::Polynomial { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            HolomorphicFn::Polynomial { .. } => "polynomial",
            HolomorphicFn::Exp { .. } => "exp",
            HolomorphicFn::Sin { .. } => "sin",
            HolomorphicFn::Cos { .. } => "cos",
            HolomorphicFn::PowerSeries { .. } => "power_series",
        }
    }

    /// True iff `derivatives` is defined at `z0`. Polynomial, Exp, Sin,
    /// Cos are entire; PowerSeries requires |z0 - center| < radius.
    pub fn in_domain(&self, z0: Cx) -> bool {
        match self {
            HolomorphicFn::PowerSeries { center, radius, .. } => (z0 - center).norm() < *radius,
            _ => true,
        }
    }

    /// Returns [F(z0), F'(z0), ..., F^(count-1)(z0)].
    pub fn derivatives(&self, z0: Cx, count: usize) -> Result<Vec<Cx>> {
        if !self.in_domain(z0) {
            return Err(Error::OutOfDomain(format!(
                "{} undefined at {}",
                self.kind_name(),
                z0
            )));
        }
        let mut out = Vec::with_capacity(count);
        match self {
            HolomorphicFn::Polynomial { coefficients } => {
                for j in 0..count {
                    out.push(poly_derivative(coefficients, z0, j));
                }
            }
            HolomorphicFn::Exp { scale } => {
                let base = (scale * z0).exp();
                let mut factor = Cx::ONE;
                for _ in 0..count {
                    out.push(factor * base);
                    factor *= scale;
                }
            }
            HolomorphicFn::Sin { scale } => {
                let (s, c) = ((scale * z0).sin(), (scale * z0).cos());
                let cycle = [s, c, -s, -c];
                let mut factor = Cx::ONE;
                for j in 0..count {
                    out.push(factor * cycle[j % 4]);
                    factor *= scale;
                }
            }
            HolomorphicFn::Cos { scale } => {
                let (s, c) = ((scale * z0).sin(), (scale * z0).cos());
                let cycle = [c, -s, -c, s];
                let mut factor = Cx::ONE;
                for j in 0..count {
                    out.push(factor * cycle[j % 4]);
                    factor *= scale;
                }
            }
            HolomorphicFn::PowerSeries {
                center,
                coefficients,
                ..
            } => {
                let w = z0 - center;
                for j in 0..count {
                    out.push(series_derivative(coefficients, w, j)?);
                }
            }
        }
        Ok(out)
    }
}

/// j-th derivative of Σ c_d z^d at z0 via falling factorials.
fn poly_derivative(coefficients: &[Cx], z0: Cx, j: usize) -> Cx {
    let mut sum = Cx::ZERO;
    for (d, c) in coefficients.iter().enumerate().skip(j) {
        let mut fall = 1.0f64;
        for t in 0..j {
            fall *= (d - t) as f64;
        }
        sum += c * fall * z0.powu((d - j) as u32);
    }
    sum
}

/// j-th derivative of Σ a_s w^s summed term by term, stopping once a term
/// drops below 1e-17 relative to the partial sum; hitting the term cap is
/// a convergence error.
fn series_derivative(coefficients: &[Cx], w: Cx, j: usize) -> Result<Cx> {
    let mut sum = Cx::ZERO;
    let mut w_pow = Cx::ONE;
    for (idx, s) in (j..coefficients.len()).enumerate() {
        if idx >= SERIES_TERM_CAP {
            return Err(Error::ConvergenceCap(SERIES_TERM_CAP));
        }
        let mut fall = 1.0f64;
        for t in 0..j {
            fall *= (s - t) as f64;
        }
        let term = coefficients[s] * fall * w_pow;
        sum += term;
        if term.norm() > 0.0 && term.norm() < SERIES_REL_CUTOFF * sum.norm() {
            break;
        }
        w_pow *= w;
    }
    Ok(sum)
}
