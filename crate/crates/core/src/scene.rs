//! Serializable scene description: warp, wind, window and tolerances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{WarpFunction, WarpKind};
use crate::scalar::Interval;
use crate::zermelo::WindSpec;

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct WarpParams {
    /// Sample radii of a table warp.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<f64>>,
    /// Sample values of a table warp.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpConfig {
    pub kind: WarpKind,
    #[serde(default)]
    pub params: WarpParams,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AKind {
    Zero,
    Constant,
    BoundedOdd,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct AParams {
    /// Value of a constant `A`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Amplitude of the bounded odd profile; defaults to `1/√2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amp: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindConfig {
    #[serde(rename = "A_kind")]
    pub a_kind: AKind,
    #[serde(rename = "A_params", default)]
    pub a_params: AParams,
    #[serde(rename = "B", default)]
    pub b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub ode_tol: f64,
    pub quad_tol: f64,
    pub root_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ode_tol: 1e-10,
            quad_tol: 1e-12,
            root_tol: 1e-12,
        }
    }
}

/// Field tested as a Killing field by the `killing` suite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KillingField {
    /// `B ∂θ` of the scene
    Rotation,
    /// `c sin θ ∂r`, which is not Killing
    SinThetaRadial { c: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    pub warp: WarpConfig,
    pub wind: WindConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub killing_field: Option<KillingField>,
}

impl SceneConfig {
    /// `exp_gauss` with the bounded odd `A` and `B = 0.3`.
    pub fn example() -> Self {
        Self {
            warp: WarpConfig {
                kind: WarpKind::ExpGauss,
                params: WarpParams::default(),
            },
            wind: WindConfig {
                a_kind: AKind::BoundedOdd,
                a_params: AParams::default(),
                b: 0.3,
            },
            window: Some([-10.0, 10.0]),
            tolerances: Tolerances::default(),
            killing_field: None,
        }
    }

    pub fn build(&self) -> Result<Scene> {
        let warp = match self.warp.kind {
            WarpKind::ExpGauss => WarpFunction::exp_gauss(),
            WarpKind::Sech => WarpFunction::sech(),
            WarpKind::SqrtPoly => WarpFunction::sqrt_poly(),
            WarpKind::Table => {
                let (r, m) = match (&self.warp.params.r, &self.warp.params.m) {
                    (Some(r), Some(m)) => (r.clone(), m.clone()),
                    _ => return Err(Error::InvalidInput("table warp needs params.r and params.m".into())),
                };
                WarpFunction::table(r, m)?
            }
            WarpKind::Custom => return Err(Error::InvalidInput("custom warps cannot be configured from a file".into())),
        };
        let warp = match self.window {
            Some([lo, hi]) => {
                if !(lo < hi) {
                    return Err(Error::InvalidInput(format!("empty window [{lo}, {hi}]")));
                }
                let w = warp.window();
                if self.warp.kind == WarpKind::Table && (lo < w.lo || hi > w.hi) {
                    return Err(Error::InvalidInput("window exceeds the table's sample range".into()));
                }
                warp.with_window(Interval::new(lo, hi))
            }
            None => warp,
        };
        warp.check_positive(512)?;
        let b = self.wind.b;
        let wind = match self.wind.a_kind {
            AKind::Zero => WindSpec::constant(0.0, b),
            AKind::Constant => WindSpec::constant(self.wind.a_params.value.unwrap_or(0.0), b),
            AKind::BoundedOdd => {
                WindSpec::bounded_odd(self.wind.a_params.amp.unwrap_or(WindSpec::<f64>::catalog_amp()), b)
            }
        };
        wind.check_admissible(&warp, warp.window(), 512)?;
        Ok(Scene {
            warp,
            wind,
            tolerances: self.tolerances,
            killing_field: self.killing_field.unwrap_or(KillingField::Rotation),
        })
    }
}

/// A validated scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub warp: WarpFunction<f64>,
    pub wind: WindSpec<f64>,
    pub tolerances: Tolerances,
    pub killing_field: KillingField,
}

impl Scene {
    pub fn window(&self) -> Interval<f64> {
        self.warp.window()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_round_trips() {
        let c = SceneConfig::example();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"A_kind\":\"bounded_odd\""));
        let back: SceneConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(back.build().is_ok());
    }

    #[test]
    fn minimal_json() {
        let c: SceneConfig =
            serde_json::from_str(r#"{"warp":{"kind":"sech"},"wind":{"A_kind":"constant","A_params":{"value":0.5},"B":0.1}}"#)
                .unwrap();
        let s = c.build().unwrap();
        assert_eq!(s.wind.a(3.0), 0.5);
        assert_eq!(s.window(), Interval::new(-10.0, 10.0));
    }

    #[test]
    fn inadmissible_wind_is_rejected_with_radius() {
        let mut c = SceneConfig::example();
        c.wind.b = 1.5;
        match c.build().unwrap_err() {
            Error::WindTooStrong { r, .. } => assert!(r.is_finite()),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn table_scene() {
        let r: Vec<f64> = (0..=40).map(|i| -4.0 + 0.2 * i as f64).collect();
        let m: Vec<f64> = r.iter().map(|x| 1.0 / x.cosh()).collect();
        let c = SceneConfig {
            warp: WarpConfig {
                kind: WarpKind::Table,
                params: WarpParams { r: Some(r), m: Some(m) },
            },
            wind: WindConfig {
                a_kind: AKind::Zero,
                a_params: AParams::default(),
                b: 0.2,
            },
            window: None,
            tolerances: Tolerances::default(),
            killing_field: Some(KillingField::SinThetaRadial { c: 0.5 }),
        };
        let s = serde_json::to_string(&c).unwrap();
        let back: SceneConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let w = back.build().unwrap().window();
        assert!((w.lo + 4.0).abs() < 1e-12 && (w.hi - 4.0).abs() < 1e-12);
    }
}
