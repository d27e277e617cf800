//! Domain specs in JSON.
//!
//! ```json
//! {"name": "ball", "kind": "ball", "params": {"n": 2, "radius": 1.0},
//!  "epsilon": 1.0, "gleason_point": [[0.0, 0.0], [0.0, 0.0]]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. `gleason_point` is optional and
//! defaults to the origin.

use serde::{Deserialize, Serialize};

use crate::cvec::{CVec, C64};
use crate::error::{GleasonError, Result};

use super::domain::{Domain, DomainKind, RealTerm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub name: String,
    pub kind: String,
    #[serde(default)]
    pub params: serde_json::Value,
    pub epsilon: f64,
    #[serde(default)]
    pub gleason_point: Option<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BallParams {
    #[serde(default = "two")]
    n: usize,
    #[serde(default)]
    center: Option<Vec<[f64; 2]>>,
    #[serde(default = "one")]
    radius: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EllipsoidParams {
    weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GrangeParams {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnulusParams {
    inner: f64,
    outer: f64,
    disc: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomParams {
    n: usize,
    terms: Vec<RealTerm>,
    /// 2n real intervals `[lo, hi]` in the order x_1, y_1, x_2, ...
    bbox: Vec<[f64; 2]>,
    #[serde(default)]
    seed: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    convex: bool,
}

fn two() -> usize {
    2
}

fn one() -> f64 {
    1.0
}

fn point(p: &[[f64; 2]]) -> CVec {
    p.iter().map(|[re, im]| C64::new(*re, *im)).collect()
}

fn params<T: for<'de> Deserialize<'de>>(kind: &str, v: &serde_json::Value) -> Result<T> {
    let v = if v.is_null() {
        serde_json::Value::Object(Default::default())
    } else {
        v.clone()
    };
    serde_json::from_value(v)
        .map_err(|e| GleasonError::InvalidInput(format!("params of kind `{kind}`: {e}")))
}

impl DomainSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| GleasonError::InvalidInput(format!("domain spec: {e}")))
    }

    pub fn build(&self) -> Result<Domain> {
        let d = match self.kind.as_str() {
            "ball" => {
                let p: BallParams = params(&self.kind, &self.params)?;
                let center = p.center.as_deref().map(point).unwrap_or_else(|| vec![C64::new(0.0, 0.0); p.n]);
                if center.len() != p.n {
                    return Err(GleasonError::DimensionMismatch {
                        expected: p.n,
                        got: center.len(),
                    });
                }
                if !(p.radius > 0.0) {
                    return Err(GleasonError::InvalidInput("ball radius must be positive".into()));
                }
                let bbox = center
                    .iter()
                    .flat_map(|c| {
                        let h = 1.02 * p.radius;
                        [(c.re - h, c.re + h), (c.im - h, c.im + h)]
                    })
                    .collect();
                Domain::new(
                    self.name.clone(),
                    DomainKind::Ball {
                        center: center.clone(),
                        radius: p.radius,
                    },
                    p.n,
                    self.epsilon,
                    bbox,
                    center,
                    true,
                )?
            }
            "ellipsoid" => {
                let p: EllipsoidParams = params(&self.kind, &self.params)?;
                Domain::ellipsoid(&p.weights)?.with_epsilon(self.epsilon)?
            }
            "grange" => {
                let _: GrangeParams = params(&self.kind, &self.params)?;
                Domain::grange(self.epsilon)?
            }
            "annulus_product" => {
                let p: AnnulusParams = params(&self.kind, &self.params)?;
                Domain::annulus_product(p.inner, p.outer, p.disc)?.with_epsilon(self.epsilon)?
            }
            "custom_polynomial_r" => {
                let p: CustomParams = params(&self.kind, &self.params)?;
                if p.terms.iter().any(|t| t.pow.len() != 2 * p.n) {
                    return Err(GleasonError::InvalidInput(format!(
                        "custom_polynomial_r: every term needs {} exponents",
                        2 * p.n
                    )));
                }
                let seed = p.seed.as_deref().map(point).unwrap_or_else(|| vec![C64::new(0.0, 0.0); p.n]);
                Domain::new(
                    self.name.clone(),
                    DomainKind::CustomPolynomial { terms: p.terms },
                    p.n,
                    self.epsilon,
                    p.bbox.iter().map(|[lo, hi]| (*lo, *hi)).collect(),
                    seed,
                    p.convex,
                )?
            }
            other => {
                return Err(GleasonError::InvalidInput(format!(
                    "unknown domain kind `{other}` (expected ball, ellipsoid, grange, annulus_product, custom_polynomial_r)"
                )))
            }
        };
        let d = d.with_name(self.name.clone());
        match &self.gleason_point {
            Some(p) => {
                if p.len() != d.dim() {
                    return Err(GleasonError::DimensionMismatch {
                        expected: d.dim(),
                        got: p.len(),
                    });
                }
                let d = d.recentered(&point(p))?;
                d.require_origin_interior()?;
                Ok(d)
            }
            None => {
                d.require_origin_interior()?;
                Ok(d)
            }
        }
    }
}

/// Parses and builds a domain from a JSON spec.
pub fn load_domain(text: &str) -> Result<Domain> {
    DomainSpec::from_json(text)?.build()
}
