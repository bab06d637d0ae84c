//! Structured global and local meshes and their superposition.
//!
//! Both meshes are cubes `[lo, hi]^3` divided into equal cubic elements.
//! Locating a physical point in the global mesh is an explicit affine
//! computation per axis; no Newton iteration is needed.

mod axis;
mod model;
mod structured;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use axis::StructuredAxis;
pub use model::{Case, SuperposedModel};
pub use structured::{build_global, build_local, GlobalMesh, LocalMesh, MeshSummary, StructuredMesh};

use crate::error::Error;

/// Basis family and polynomial order of a mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BasisFamily {
    Lagrange(usize),
    BSpline(usize),
}

impl BasisFamily {
    pub fn order(self) -> usize {
        match self {
            BasisFamily::Lagrange(p) | BasisFamily::BSpline(p) => p,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisFamily::Lagrange(_) => "lagrange",
            BasisFamily::BSpline(_) => "bspline",
        }
    }

    pub fn is_bspline(self) -> bool {
        matches!(self, BasisFamily::BSpline(_))
    }
}

impl fmt::Display for BasisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name(), self.order())
    }
}

impl FromStr for BasisFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Config(format!("expected `lagrange:<p>` or `bspline:<p>`, got `{s}`"));
        let (name, order) = s.split_once(':').ok_or_else(bad)?;
        let order: usize = order.trim().parse().map_err(|_| bad())?;
        match name.trim().to_ascii_lowercase().as_str() {
            "lagrange" => Ok(BasisFamily::Lagrange(order)),
            "bspline" | "b-spline" => Ok(BasisFamily::BSpline(order)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for BasisFamily {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<BasisFamily> for String {
    fn from(f: BasisFamily) -> String {
        f.to_string()
    }
}
