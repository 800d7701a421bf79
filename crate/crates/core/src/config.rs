//! JSON descriptions of maps and potentials.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::maps::{Interval, SmoothIntervalMap};
use crate::potentials::{HoelderPart, SingularPotential, SingularTerm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Chebyshev,
    Logistic { a: f64 },
    /// Ascending coefficients on `[lo, hi]`.
    Polynomial { coeffs: Vec<f64>, domain: [f64; 2] },
}

impl MapSpec {
    pub fn build(&self) -> Result<SmoothIntervalMap> {
        match self {
            MapSpec::Chebyshev => Ok(SmoothIntervalMap::chebyshev()),
            MapSpec::Logistic { a } => SmoothIntervalMap::logistic(*a),
            MapSpec::Polynomial { coeffs, domain } => {
                SmoothIntervalMap::polynomial(coeffs.clone(), Interval::new(domain[0], domain[1]))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Constant { value: f64 },
    Polynomial { coeffs: Vec<f64> },
    /// `−t·log|Df|`, quadratic family only.
    Geometric { t: f64 },
    Custom {
        hoelder: HoelderPart,
        #[serde(default)]
        singular: Vec<SingularTerm>,
    },
}

impl PotentialSpec {
    pub fn build(&self, map: &SmoothIntervalMap) -> Result<SingularPotential> {
        match self {
            PotentialSpec::Zero => Ok(SingularPotential::zero()),
            PotentialSpec::Constant { value } => Ok(SingularPotential::constant(*value)),
            PotentialSpec::Polynomial { coeffs } => Ok(SingularPotential::polynomial(coeffs.clone())),
            PotentialSpec::Geometric { t } => SingularPotential::geometric(map, *t),
            PotentialSpec::Custom { hoelder, singular } => {
                SingularPotential::new(map, hoelder.clone(), singular.clone())
            }
        }
    }
}
