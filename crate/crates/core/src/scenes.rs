//! The example surfaces with their quadrature settings.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::curves::{lemniscate_lift, LiftSign};
use crate::error::{HeisError, Result};
use crate::integrate::StokesQuadrature;
use crate::quadrature::QuadratureSpec;
use crate::surfaces::{lift_cylinder, periodic_torus_major, revolve_curve, torus_leaf, vertical_halfplane, ParamSurface};

/// Height of the lemniscate cylinder.
pub const SIGMA_HEIGHT: f64 = 1.0 / 3.0;
/// Revolution angle of the torus band.
pub const BAND_ANGLE: f64 = PI / 12.0;
/// The band revolves the closed leaf of the torus with `n = 2`.
pub const BAND_TORUS_N: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StokesScene {
    HalfPlane,
    SigmaCylinder,
    Band,
}

impl StokesScene {
    pub const ALL: [StokesScene; 3] = [StokesScene::HalfPlane, StokesScene::SigmaCylinder, StokesScene::Band];

    pub fn name(self) -> &'static str {
        match self {
            StokesScene::HalfPlane => "halfplane",
            StokesScene::SigmaCylinder => "sigma-cylinder",
            StokesScene::Band => "band",
        }
    }

    pub fn surface(self) -> Result<ParamSurface> {
        match self {
            StokesScene::HalfPlane => Ok(vertical_halfplane()),
            StokesScene::SigmaCylinder => sigma_cylinder(SIGMA_HEIGHT),
            StokesScene::Band => torus_band(BAND_TORUS_N, BAND_ANGLE),
        }
    }

    /// Surface panels `[u, v]`.
    pub fn panels(self) -> [usize; 2] {
        match self {
            StokesScene::HalfPlane => [64, 64],
            StokesScene::SigmaCylinder => [256, 16],
            StokesScene::Band => [384, 16],
        }
    }

    pub fn quadrature(self) -> StokesQuadrature {
        let [u, v] = self.panels();
        StokesQuadrature {
            surface: QuadratureSpec::surface_default().with_panels(u, v),
            curve: QuadratureSpec::curve_default(),
        }
    }
}

impl fmt::Display for StokesScene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StokesScene {
    type Err = HeisError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| HeisError::InvalidParameter(format!("unknown stokes scene {s:?}")))
    }
}

/// Cylinder of height `h` over the horizontal lemniscate lift.
pub fn sigma_cylinder(height: f64) -> Result<ParamSurface> {
    lift_cylinder(&lemniscate_lift(LiftSign::Plus), height)
}

/// The closed characteristic leaf of the torus `r = 1, R = sqrt(1 + n^(2/3))`
/// through `(0, 0)`, revolved by `phi_max`.
pub fn torus_band(n: u32, phi_max: f64) -> Result<ParamSurface> {
    let big = periodic_torus_major(1.0, n);
    let turns = if n % 2 == 0 { n / 2 } else { n };
    revolve_curve(&torus_leaf(big, 1.0, (0.0, 0.0), turns)?, phi_max)
}
