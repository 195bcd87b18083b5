//! Numerical checks of the navigation, Killing and deformation statements,
//! gathered into a JSON-serializable report.

mod curvature;
mod euler_lagrange;
mod hamilton;
mod suites;

pub use curvature::{
    curvature_ratio, spray, spray_difference, spray_difference_christoffel, spray_difference_alt, CurvatureRatio,
};
pub use euler_lagrange::{ElSample, EulerLagrange};
pub use hamilton::{
    dual_norm_by_indicatrix, killing_residual_h, legendre_dual_norm, lie_bracket, momentum, poisson_bracket,
    CotangentPoint, Field, Hamiltonian,
};
pub use suites::run_suite;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported, never failing.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The statement being checked, in words.
    pub paper_ref: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes iff `measured <= tol`.
    pub fn bound(name: &str, statement: &str, measured: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            paper_ref: statement.into(),
            status: if measured <= tol { Status::Pass } else { Status::Fail },
            measured,
            tolerance: Some(tol),
            detail: None,
        }
    }

    /// Passes iff `measured > threshold`.
    pub fn exceeds(name: &str, statement: &str, measured: f64, threshold: f64) -> Self {
        Self {
            status: if measured > threshold { Status::Pass } else { Status::Fail },
            ..Self::bound(name, statement, measured, threshold)
        }
    }

    pub fn info(name: &str, statement: &str, measured: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            paper_ref: statement.into(),
            status: Status::Info,
            measured,
            tolerance: None,
            detail: Some(detail),
        }
    }

    /// A check that could not be evaluated.
    pub fn error(name: &str, statement: &str, err: impl fmt::Display) -> Self {
        Self {
            name: name.into(),
            paper_ref: statement.into(),
            status: Status::Fail,
            measured: f64::NAN,
            tolerance: None,
            detail: Some(err.to_string()),
        }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    /// No failing checks.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Zermelo,
    Killing,
    Curvature,
    Clairaut,
    Deform,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Zermelo, Suite::Killing, Suite::Curvature, Suite::Clairaut, Suite::Deform];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Zermelo => "zermelo",
            Suite::Killing => "killing",
            Suite::Curvature => "curvature",
            Suite::Clairaut => "clairaut",
            Suite::Deform => "deform",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Suite::All]
            .into_iter()
            .chain(Suite::EACH)
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?} (all|zermelo|killing|curvature|clairaut|deform)"))
    }
}
