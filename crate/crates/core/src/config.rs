//! Experiment configuration, read from one JSON document.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::exact::QuadScalar;
use crate::group::{Side, ThetaSpec, TorusGroup, TorusWord};
use crate::tree::{window_lines, NerveWindow};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaConfig {
    /// Tangent of the half angle; rational `cos` and `sin`.
    HalfTangent { t: String },
    /// Explicit `cos`, `sin` in `Q(sqrt d)`, e.g. `"1/2*sqrt(2)"`.
    Explicit { cos: String, sin: String, d: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub max_vertices: usize,
    pub max_itinerary: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_vertices: 200_000,
            max_itinerary: 64,
        }
    }
}

/// Joint lines meeting the base blocks: shadow feet within `rho` of `v_a`,
/// heights within `betas` times the factor's `beta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowConfig {
    pub rho: i64,
    pub betas: i64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig { rho: 1, betas: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub p_minus: i64,
    pub q_minus: i64,
    pub p_plus: i64,
    pub q_plus: i64,
    pub theta: ThetaConfig,
    pub ball_radius: i64,
    pub joint_depth: usize,
    pub epsilon_geo: f64,
    pub caps: Caps,
    pub window: WindowConfig,
    /// Random samples per sampled check.
    pub samples: usize,
    pub seed: u64,
    /// Test hook: shift one joint line so that it crosses `gamma_0`.
    pub fault_injection: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            p_minus: 2,
            q_minus: 3,
            p_plus: 2,
            q_plus: 5,
            theta: ThetaConfig::HalfTangent { t: "1/2".into() },
            ball_radius: 4,
            joint_depth: 3,
            epsilon_geo: 1e-9,
            caps: Caps::default(),
            window: WindowConfig::default(),
            samples: 20,
            seed: 1,
            fault_injection: false,
        }
    }
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig {
        field: field.into(),
        reason: reason.into(),
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| invalid("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn theta_spec(&self) -> Result<ThetaSpec> {
        match &self.theta {
            ThetaConfig::HalfTangent { t } => {
                let t: BigRational = t
                    .trim()
                    .parse()
                    .map_err(|_| invalid("theta.t", format!("not a rational number: {t:?}")))?;
                ThetaSpec::from_half_tangent(&t)
            }
            ThetaConfig::Explicit { cos, sin, d } => {
                let parse = |field: &str, s: &str| -> Result<QuadScalar> {
                    s.parse::<QuadScalar>()
                        .map_err(|e| invalid(field, format!("{s:?}: {e}")))
                };
                ThetaSpec::new(parse("theta.cos", cos)?, parse("theta.sin", sin)?, *d)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (side, p, q) in [("minus", self.p_minus, self.q_minus), ("plus", self.p_plus, self.q_plus)] {
            if p < 2 || q < 2 {
                return Err(invalid(&format!("p_{side}/q_{side}"), format!("need p, q >= 2, got ({p}, {q})")));
            }
            if let Err(Error::NotCoprime { p, q }) = TorusGroup::new(p, q) {
                return Err(invalid(&format!("p_{side}/q_{side}"), format!("({p}, {q}) are not coprime")));
            }
        }
        self.theta_spec()?;
        if self.ball_radius < 0 {
            return Err(invalid("ball_radius", "must be >= 0"));
        }
        if self.joint_depth == 0 {
            return Err(invalid("joint_depth", "must be >= 1"));
        }
        if !(self.epsilon_geo > 0.0 && self.epsilon_geo < 1.0) {
            return Err(invalid("epsilon_geo", "must lie in (0, 1)"));
        }
        if self.window.rho < 0 || self.window.betas < 1 {
            return Err(invalid("window", "need rho >= 0 and betas >= 1"));
        }
        if self.caps.max_vertices == 0 || self.caps.max_itinerary == 0 {
            return Err(invalid("caps", "caps must be positive"));
        }
        Ok(())
    }

    pub fn complex(&self) -> Result<Complex> {
        self.validate()?;
        Complex::new((self.p_minus, self.q_minus), (self.p_plus, self.q_plus), &self.theta_spec()?)
    }

    /// Window lines of both factors.
    pub fn windows(&self, cx: &Complex) -> Result<[Vec<TorusWord>; 2]> {
        let win = |side: Side| {
            let f = cx.factor(side);
            window_lines(
                f,
                &NerveWindow {
                    rho: self.window.rho,
                    height: &f.beta * &QuadScalar::from_int(self.window.betas),
                },
            )
        };
        Ok([win(Side::Minus)?, win(Side::Plus)?])
    }

    /// Applies `CAT0KNOT_MAX_MB`, at roughly 4 KiB per enumerated vertex.
    pub fn apply_memory_cap(&mut self, max_mb: Option<usize>) {
        if let Some(mb) = max_mb {
            let cap = (mb * 1024 / 4).max(1);
            self.caps.max_vertices = self.caps.max_vertices.min(cap);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_rejections() {
        let cfg = Config::from_json("{}").unwrap();
        let cx = cfg.complex().unwrap();
        assert_eq!(cx.cos(), &QuadScalar::from_ratio(3, 5));
        let bad = Config::from_json(r#"{"p_minus": 2, "q_minus": 2}"#).unwrap_err();
        assert!(matches!(bad, Error::InvalidConfig { ref field, .. } if field == "p_minus/q_minus"));
        let bad = Config::from_json(r#"{"theta": {"cos": "1", "sin": "0", "d": 1}}"#).unwrap_err();
        assert!(matches!(bad, Error::InvalidConfig { ref field, .. } if field == "theta"));
        let q = Config::from_json(r#"{"theta": {"cos": "1/2*sqrt(2)", "sin": "1/2*sqrt(2)", "d": 2}}"#);
        assert!(q.is_ok(), "{q:?}");
        assert!(Config::from_json(r#"{"radius": 3}"#).is_err());
    }
}
