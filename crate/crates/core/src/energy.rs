//! Static masses and the dynamic Hamiltonian.
//!
//! All energies are in units of `pi F_pi / e`.

use std::fmt;
use std::str::FromStr;

use crate::dynamics::{FieldState, Model};
use crate::error::{Result, SkyrmeError};
use crate::grid::Grid;
use crate::lattice::Lattice;
use crate::model::ModelParams;
use crate::quadrature::{derivative, simpson};

/// How the angular factor in the quartic mass term is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum M4Reading {
    /// Factor 1: the bracket is `k^2 + 1`, and `k = 1` reduces to the hedgehog.
    #[default]
    Unit,
    /// Factor `sin^2 theta` on the `k^2` part, whose polar integral is 4/3 instead of 2.
    SinSquared,
}

impl M4Reading {
    pub fn tag(self) -> &'static str {
        match self {
            M4Reading::Unit => "unit",
            M4Reading::SinSquared => "sin-squared",
        }
    }
}

impl fmt::Display for M4Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for M4Reading {
    type Err = SkyrmeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(M4Reading::Unit),
            "sin-squared" => Ok(M4Reading::SinSquared),
            other => Err(SkyrmeError::Validation(format!(
                "unknown m4_reading `{other}` (expected unit or sin-squared)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassBreakdown {
    pub m2: f64,
    pub m4: f64,
    pub total: f64,
    pub k: u32,
}

impl MassBreakdown {
    pub fn evaluate(grid: &Grid, values: &[f64], k: u32, reading: M4Reading) -> Result<Self> {
        let m2 = mass_m2(grid, values, k)?;
        let m4 = mass_m4_with(grid, values, k, reading)?;
        Ok(MassBreakdown {
            m2,
            m4,
            total: m2 + m4,
            k,
        })
    }
}

fn check_profile(grid: &Grid, values: &[f64]) -> Result<()> {
    if values.len() != grid.len() {
        return Err(SkyrmeError::InvalidProfile(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    let turns = values[0] / std::f64::consts::PI;
    if (turns - turns.round()).abs() > 1e-12 {
        return Err(SkyrmeError::InvalidProfile(format!(
            "F(0) = {} is not a multiple of pi",
            values[0]
        )));
    }
    Ok(())
}

/// Quadratic mass term `1/2 integral (x^2 F'^2 + (k^2+1) sin^2 F) dx`.
pub fn mass_m2(grid: &Grid, values: &[f64], k: u32) -> Result<f64> {
    check_profile(grid, values)?;
    let h = grid.spacing();
    let c = (k * k + 1) as f64;
    let d = derivative(values, h);
    let density: Vec<f64> = values
        .iter()
        .zip(&d)
        .enumerate()
        .map(|(i, (f, df))| {
            let x = grid.x(i);
            0.5 * (x * x * df * df + c * f.sin().powi(2))
        })
        .collect();
    Ok(simpson(&density, h))
}

/// Quartic mass term with the primary reading.
pub fn mass_m4(grid: &Grid, values: &[f64], k: u32) -> Result<f64> {
    mass_m4_with(grid, values, k, M4Reading::Unit)
}

/// Quartic mass term `integral (A F'^2 sin^2 F + B sin^4 F / x^2) dx` with
/// `A = 2(k^2+1)`, `B = 2k^2` for [`M4Reading::Unit`] and
/// `A = (4/3)k^2 + 2`, `B = 2k^2` for [`M4Reading::SinSquared`].
pub fn mass_m4_with(grid: &Grid, values: &[f64], k: u32, reading: M4Reading) -> Result<f64> {
    check_profile(grid, values)?;
    let h = grid.spacing();
    let k_sq = (k * k) as f64;
    let a = match reading {
        M4Reading::Unit => 2.0 * (k_sq + 1.0),
        M4Reading::SinSquared => 4.0 / 3.0 * k_sq + 2.0,
    };
    let b = 2.0 * k_sq;
    let d = derivative(values, h);
    let density: Vec<f64> = values
        .iter()
        .zip(&d)
        .enumerate()
        .map(|(i, (f, df))| {
            let x = grid.x(i);
            let sin_sq = f.sin().powi(2);
            // sin^4F / x^2 ~ F'(0)^4 x^2 vanishes at the origin.
            let tail = if x > 0.0 {
                b * sin_sq * sin_sq / (x * x)
            } else {
                0.0
            };
            a * df * df * sin_sq + tail
        })
        .collect();
    Ok(simpson(&density, h))
}

/// Energy of a field state, consistent with the discrete equations of motion:
/// `2h sum_i w_i [W_i (Fdot_i^2 + D_i^2) + V_i]` with the fourth-order lattice
/// derivative `D`. This is the quantity conserved by the evolution.
pub fn hamiltonian(state: &FieldState, model: Model, params: &ModelParams) -> f64 {
    Lattice::new(&state.grid).energy(
        &model.lagrangian(params),
        &state.grid,
        &state.f,
        &state.fdot,
    )
}

/// Continuum energy `2 integral (W (Fdot^2 + F'^2) + V) dx` by Simpson's rule with
/// fourth-order derivatives, the same quadrature used for the static masses.
pub fn hamiltonian_simpson(state: &FieldState, model: Model, params: &ModelParams) -> f64 {
    let lag = model.lagrangian(params);
    let grid = &state.grid;
    let h = grid.spacing();
    let d = derivative(&state.f, h);
    let density: Vec<f64> = (0..grid.len())
        .map(|i| {
            let x = grid.x(i);
            let f = state.f[i];
            2.0 * (lag.inertia(x, f) * (state.fdot[i].powi(2) + d[i] * d[i]) + lag.potential(x, f))
        })
        .collect();
    simpson(&density, h)
}
