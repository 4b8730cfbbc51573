use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Failure;
use crate::geometry::BodyDescription;

/// A body given inline or as a path to a body description file, resolved
/// relative to the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BodyRef {
    Inline(BodyDescription),
    Path(PathBuf),
}

impl BodyRef {
    pub fn resolve(&self, base_dir: &Path) -> Result<BodyDescription, Failure> {
        match self {
            Self::Inline(d) => Ok(d.clone()),
            Self::Path(p) => {
                let path = if p.is_absolute() { p.clone() } else { base_dir.join(p) };
                let text = fs::read_to_string(&path)
                    .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| {
                    Failure::Validation(format!(
                        "{}:{}:{}: {e}",
                        path.display(),
                        e.line(),
                        e.column()
                    ))
                })
            }
        }
    }
}

fn default_directions() -> usize {
    64
}

fn default_eq1_rays() -> usize {
    32
}

fn default_eq1_t() -> f64 {
    2.0
}

fn default_t_factor() -> f64 {
    100.0
}

fn default_maps() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "lowercase", deny_unknown_fields)]
pub enum ExperimentConfig {
    Theorem6 {
        body: BodyRef,
        beta: f64,
        t_grid: Vec<f64>,
        #[serde(default = "default_eq1_rays")]
        eq1_rays: usize,
        #[serde(default = "default_eq1_t")]
        eq1_t: f64,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    Prop7 {
        body: BodyRef,
        t_grid: Vec<f64>,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    Prop4 {
        body: BodyRef,
        beta: f64,
        t_grid: Vec<f64>,
        #[serde(default = "default_directions")]
        directions: usize,
    },
    Lemma5 {
        gamma: f64,
        beta: f64,
        alpha_grid: Vec<f64>,
    },
    Covariance {
        body: BodyRef,
        beta: f64,
        #[serde(default = "default_t_factor")]
        t_factor: f64,
        #[serde(default = "default_maps")]
        maps: usize,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    Theorem8 {
        body: BodyRef,
        delta_grid: Vec<f64>,
        #[serde(default)]
        tolerance: Option<f64>,
    },
}

impl ExperimentConfig {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Theorem6 { .. } => "theorem6",
            Self::Prop7 { .. } => "prop7",
            Self::Prop4 { .. } => "prop4",
            Self::Lemma5 { .. } => "lemma5",
            Self::Covariance { .. } => "covariance",
            Self::Theorem8 { .. } => "theorem8",
        }
    }

    pub fn body(&self) -> Option<&BodyRef> {
        match self {
            Self::Theorem6 { body, .. }
            | Self::Prop7 { body, .. }
            | Self::Prop4 { body, .. }
            | Self::Covariance { body, .. }
            | Self::Theorem8 { body, .. } => Some(body),
            Self::Lemma5 { .. } => None,
        }
    }

    /// Default pass tolerance on the relative error, where one applies.
    pub fn tolerance(&self) -> Option<f64> {
        match self {
            Self::Theorem6 { tolerance, .. } => Some(tolerance.unwrap_or(0.02)),
            Self::Prop7 { tolerance, .. } => Some(tolerance.unwrap_or(0.05)),
            Self::Covariance { tolerance, .. } => Some(tolerance.unwrap_or(1e-6)),
            Self::Theorem8 { tolerance, .. } => Some(tolerance.unwrap_or(0.02)),
            Self::Prop4 { .. } | Self::Lemma5 { .. } => None,
        }
    }

    /// Shape checks that need no numerics.
    pub fn validate(&self) -> Result<(), Failure> {
        let bad = |msg: String| Err(Failure::Validation(format!("{}: {msg}", self.name())));
        if let Some(tol) = self.tolerance() {
            if !(tol > 0.0) {
                return bad(format!("tolerance must be positive, got {tol}"));
            }
        }
        match self {
            Self::Theorem6 { beta, t_grid, .. } => {
                finite("beta", *beta)?;
                grid("t_grid", t_grid, 4, Order::Increasing)
            }
            Self::Prop7 { t_grid, .. } => grid("t_grid", t_grid, 4, Order::Increasing),
            Self::Prop4 { beta, t_grid, directions, .. } => {
                finite("beta", *beta)?;
                if *directions == 0 {
                    return bad("directions must be positive".into());
                }
                grid("t_grid", t_grid, 1, Order::Any)
            }
            Self::Lemma5 { gamma, beta, alpha_grid } => {
                finite("gamma", *gamma)?;
                finite("beta", *beta)?;
                grid("alpha_grid", alpha_grid, 1, Order::Increasing)?;
                if alpha_grid.iter().any(|&a| a >= 1.0) {
                    return bad("alpha values must lie in (0, 1)".into());
                }
                Ok(())
            }
            Self::Covariance { beta, t_factor, maps, .. } => {
                finite("beta", *beta)?;
                if !(*t_factor >= 1.0) {
                    return bad(format!("t_factor must be at least 1, got {t_factor}"));
                }
                if *maps == 0 {
                    return bad("maps must be positive".into());
                }
                Ok(())
            }
            Self::Theorem8 { delta_grid, .. } => grid("delta_grid", delta_grid, 4, Order::Decreasing),
        }
    }
}

fn finite(name: &str, x: f64) -> Result<(), Failure> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{name} must be finite")))
    }
}

enum Order {
    Increasing,
    Decreasing,
    Any,
}

fn grid(name: &str, values: &[f64], min_len: usize, order: Order) -> Result<(), Failure> {
    if values.len() < min_len {
        return Err(Failure::Validation(format!(
            "{name} needs at least {min_len} values, got {}",
            values.len()
        )));
    }
    if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Failure::Validation(format!("{name} values must be positive and finite")));
    }
    let ok = match order {
        Order::Increasing => values.windows(2).all(|w| w[1] > w[0]),
        Order::Decreasing => values.windows(2).all(|w| w[1] < w[0]),
        Order::Any => true,
    };
    if !ok {
        return Err(Failure::Validation(format!("{name} must be strictly monotone")));
    }
    Ok(())
}

/// Reads one config or an array of them.
pub fn load(path: &Path) -> Result<Vec<ExperimentConfig>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let anchored = |e: serde_json::Error| {
        Failure::Validation(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
    };
    let configs = if text.trim_start().starts_with('[') {
        serde_json::from_str::<Vec<ExperimentConfig>>(&text).map_err(anchored)?
    } else {
        vec![serde_json::from_str::<ExperimentConfig>(&text).map_err(anchored)?]
    };
    if configs.is_empty() {
        return Err(Failure::Validation(format!("{}: no experiments", path.display())));
    }
    for c in &configs {
        c.validate()?;
    }
    Ok(configs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inline_and_path_bodies() {
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"theorem6","body":{"kind":"ball","dim":2,"radius":1},
                "beta":3,"t_grid":[100,1000,1e4,1e5]}"#,
        )
        .unwrap();
        assert_eq!(c.name(), "theorem6");
        assert_eq!(c.tolerance(), Some(0.02));
        assert!(matches!(c.body(), Some(BodyRef::Inline(_))));
        c.validate().unwrap();

        let c: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"theorem8","body":"bodies/disc.json","delta_grid":[1e-2,1e-3,1e-4,1e-5]}"#,
        )
        .unwrap();
        assert_eq!(c.body(), Some(&BodyRef::Path("bodies/disc.json".into())));
    }

    #[test]
    fn rejects_unknown_fields_and_bad_grids() {
        assert!(serde_json::from_str::<ExperimentConfig>(
            r#"{"experiment":"lemma5","gamma":1,"beta":4,"alpha_grid":[0.5],"extra":1}"#
        )
        .is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"experiment":"theorem7"}"#).is_err());
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"theorem8","body":{"kind":"ball","dim":2,"radius":1},"delta_grid":[1e-5,1e-4,1e-3,1e-2]}"#,
        )
        .unwrap();
        assert!(c.validate().is_err());
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"lemma5","gamma":1,"beta":4,"alpha_grid":[0.5,1.0]}"#,
        )
        .unwrap();
        assert!(c.validate().is_err());
    }
}
