//! The single JSON document that drives every command. Complex numbers
//! travel as `[re, im]` pairs; unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::characteristic::{Branch, Mode, SpectralParams};
use crate::error::{Error, Result};
use crate::holo::HolomorphicFn;
use crate::jets::Cx;
use crate::solutions::GridSpec;
use crate::verify::FdConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CxPair(pub f64, pub f64);

impl CxPair {
    pub fn to_cx(self) -> Result<Cx> {
        if self.0.is_finite() && self.1.is_finite() {
            Ok(Cx::new(self.0, self.1))
        } else {
            Err(Error::NonFinite)
        }
    }
}

impl From<Cx> for CxPair {
    fn from(c: Cx) -> Self {
        CxPair(c.re, c.im)
    }
}

fn to_cx_vec(v: &[CxPair]) -> Result<Vec<Cx>> {
    v.iter().map(|p| p.to_cx()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub n: usize,
    pub k: Vec<CxPair>,
    pub m: Vec<CxPair>,
    pub branch: i8,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free_g: Option<Vec<CxPair>>,
}

impl AlgebraSection {
    pub fn to_params(&self) -> Result<SpectralParams> {
        let branch = Branch::try_from(self.branch).map_err(Error::InvalidConfig)?;
        let params = SpectralParams {
            n: self.n,
            k: to_cx_vec(&self.k)?,
            m: to_cx_vec(&self.m)?,
            branch,
            mode: self.mode,
            free_g: self.free_g.as_deref().map(to_cx_vec).transpose()?,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSection {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<CxPair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<CxPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<CxPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

impl FunctionSection {
    pub fn to_fn(&self) -> Result<HolomorphicFn> {
        let scale = || -> Result<Cx> {
            self.scale
                .ok_or_else(|| Error::InvalidConfig(format!("function kind {} needs a scale", self.kind)))?
                .to_cx()
        };
        match self.kind.as_str() {
            "polynomial" => {
                let coeffs = self.coefficients.as_deref().ok_or_else(|| {
                    Error::InvalidConfig("polynomial needs coefficients".into())
                })?;
                HolomorphicFn::polynomial(to_cx_vec(coeffs)?)
            }
            "exp" => Ok(HolomorphicFn::Exp { scale: scale()? }),
            "sin" => Ok(HolomorphicFn::Sin { scale: scale()? }),
            "cos" => Ok(HolomorphicFn::Cos { scale: scale()? }),
            "power_series" => {
                let coeffs = self.coefficients.as_deref().ok_or_else(|| {
                    Error::InvalidConfig("power_series needs coefficients".into())
                })?;
                let center = self
                    .center
                    .ok_or_else(|| Error::InvalidConfig("power_series needs a center".into()))?
                    .to_cx()?;
                let radius = self
                    .radius
                    .ok_or_else(|| Error::InvalidConfig("power_series needs a radius".into()))?;
                HolomorphicFn::power_series(center, to_cx_vec(coeffs)?, radius)
            }
            other => Err(Error::InvalidConfig(format!("unknown function kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_range: Option<[usize; 2]>,
}

impl SolutionSection {
    /// Inclusive list of requested indices.
    pub fn indices(&self) -> Result<Vec<usize>> {
        match (self.k_index, self.k_range) {
            (Some(k), None) => Ok(vec![k]),
            (None, Some([lo, hi])) if lo <= hi => Ok((lo..=hi).collect()),
            (None, Some(_)) => Err(Error::InvalidConfig("k_range must be [lo, hi] with lo <= hi".into())),
            (Some(_), Some(_)) => Err(Error::InvalidConfig(
                "give either k_index or k_range, not both".into(),
            )),
            (None, None) => Err(Error::InvalidConfig("solution needs k_index or k_range".into())),
        }
    }

    pub fn single_index(&self) -> Result<usize> {
        match (self.k_index, self.k_range) {
            (Some(k), None) => Ok(k),
            _ => Err(Error::InvalidConfig("this command needs a single k_index".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default = "default_levels")]
    pub richardson_levels: u32,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_h() -> f64 {
    1e-2
}

fn default_levels() -> u32 {
    2
}

fn default_tolerance() -> f64 {
    1e-4
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection {
            h: default_h(),
            richardson_levels: default_levels(),
            tolerance: default_tolerance(),
        }
    }
}

impl VerifySection {
    pub fn fd_config(&self) -> FdConfig {
        FdConfig {
            h: self.h,
            richardson_levels: self.richardson_levels,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            format: OutputFormat::Csv,
            path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algebra: AlgebraSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn function(&self) -> Result<&FunctionSection> {
        self.function
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("config needs a function section".into()))
    }

    pub fn solution(&self) -> Result<&SolutionSection> {
        self.solution
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("config needs a solution section".into()))
    }

    pub fn grid(&self) -> Result<&GridSpec> {
        self.grid
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("config needs a grid section".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "algebra": {
            "n": 2,
            "k": [[1.0, 0.0], [0.0, 0.0]],
            "m": [[0.0, 0.0], [0.0, 0.0]],
            "branch": 1,
            "mode": "biharmonic",
            "free_g": [[0.0, 0.0], [1.0, 0.0]]
        },
        "function": { "kind": "polynomial", "coefficients": [[0,0],[0,0],[0,0],[1,0]] },
        "solution": { "k_index": 1 },
        "grid": { "min": [0,0,0], "max": [1,1,1], "steps": [3,3,3] },
        "verify": { "h": 0.01, "richardson_levels": 2, "tolerance": 1e-4 },
        "output": { "format": "csv" }
    }"#;

    #[test]
    fn round_trip_is_identity() {
        let cfg = RunConfig::from_json(SAMPLE).unwrap();
        let text = cfg.to_json();
        let again = RunConfig::from_json(&text).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(text, again.to_json());
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = SAMPLE.replace("\"branch\": 1,", "\"branch\": 1, \"bogus\": 2,");
        assert!(RunConfig::from_json(&bad).is_err());
    }

    #[test]
    fn sections_materialize() {
        let cfg = RunConfig::from_json(SAMPLE).unwrap();
        let params = cfg.algebra.to_params().unwrap();
        assert_eq!(params.n, 2);
        let f = cfg.function().unwrap().to_fn().unwrap();
        assert!(f.is_polynomial());
        assert_eq!(cfg.solution().unwrap().indices().unwrap(), vec![1]);
    }

    #[test]
    fn bad_branch_rejected() {
        let bad = SAMPLE.replace("\"branch\": 1", "\"branch\": 3");
        let cfg = RunConfig::from_json(&bad).unwrap();
        assert!(cfg.algebra.to_params().is_err());
    }

    #[test]
    fn k_selector_exclusive() {
        let s = SolutionSection { k_index: Some(1), k_range: Some([0, 2]) };
        assert!(s.indices().is_err());
        let s = SolutionSection { k_index: None, k_range: Some([0, 2]) };
        assert_eq!(s.indices().unwrap(), vec![0, 1, 2]);
    }
}
