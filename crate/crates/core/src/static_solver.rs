//! Static boundary-value problem `F(0) = n pi`, `F(L) = 0`.
//!
//! A shooting pass on the origin coefficient provides the initial guess, and a
//! damped Newton relaxation on the grid then solves the discrete equations.
//! When shooting cannot bracket a root the relaxation starts from the kink
//! profile instead.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SkyrmeError};
use crate::grid::Grid;
use crate::io::{fmt_f64, DataTable};
use crate::lattice::{self, Lattice};
use crate::model::{
    kink_derivatives, kink_profile, residual_second_derivative_coefficient, sb_source,
    static_residual, ModelParams, SbVariant, StaticEquationSpec,
};

/// Accepted profiles must have a max interior residual below this.
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;
/// |F(L)| allowed by the profile invariant.
pub const BOUNDARY_TOLERANCE: f64 = 1e-3;

const NEWTON_TOLERANCE: f64 = 1e-10;
const NEWTON_MAX_ITERATIONS: usize = 100;
const SHOOT_SUBSTEPS: usize = 8;
const SHOOT_START: f64 = 1e-3;

/// How the continuous static equation is turned into grid equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Discretization {
    /// Central differences for `F'` and `F''` plugged into [`static_residual`].
    Collocation,
    /// Gradient of the lattice energy used by the time evolution; its zeros are
    /// exact equilibria of the evolution scheme.
    Variational,
}

impl Discretization {
    pub fn tag(self) -> &'static str {
        match self {
            Discretization::Collocation => "collocation",
            Discretization::Variational => "variational",
        }
    }
}

impl Discretization {
    /// Half-width of the stencil coupling neighbouring unknowns.
    fn bandwidth(self) -> usize {
        match self {
            Discretization::Collocation => 2,
            Discretization::Variational => lattice::BANDWIDTH,
        }
    }
}

impl fmt::Display for Discretization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Discretization {
    type Err = SkyrmeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "collocation" => Ok(Discretization::Collocation),
            "variational" => Ok(Discretization::Variational),
            other => Err(SkyrmeError::Validation(format!(
                "unknown discretization `{other}`"
            ))),
        }
    }
}

/// Radial profile on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub spec: StaticEquationSpec,
    pub discretization: Discretization,
    /// Max interior residual of `discretization` on `values`.
    pub residual_norm: f64,
    /// Newton iterations spent producing this profile (0 for analytic profiles).
    pub iterations: usize,
}

impl Profile {
    /// Wrap existing node values, checking the boundary data and computing the
    /// residual norm.
    pub fn from_values(
        grid: Grid,
        values: Vec<f64>,
        spec: StaticEquationSpec,
        discretization: Discretization,
        params: &ModelParams,
    ) -> Result<Profile> {
        check_boundaries(&grid, &values, &spec)?;
        let residual = discrete_residual(&spec, &grid, &values, params, discretization);
        Ok(Profile {
            grid,
            residual_norm: max_abs(&residual),
            values,
            spec,
            discretization,
            iterations: 0,
        })
    }

    /// Kink-like profile `4 n arctan(exp(-x))` sampled on the grid.
    pub fn kink(grid: Grid, spec: StaticEquationSpec, params: &ModelParams) -> Result<Profile> {
        let mut values = grid
            .nodes()
            .into_iter()
            .map(|x| kink_profile(x, spec.n()))
            .collect::<Result<Vec<_>>>()?;
        values[0] = spec.origin_value();
        Profile::from_values(grid, values, spec, Discretization::Collocation, params)
    }

    pub fn is_accepted(&self) -> bool {
        self.residual_norm < RESIDUAL_TOLERANCE
    }

    /// Indices `i` with `F(x_{i+1}) > F(x_i)`.
    pub fn monotonicity_violations(&self) -> Vec<usize> {
        self.values
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0])
            .map(|(i, _)| i)
            .collect()
    }

    /// Two-column `(x, F)` table with a header recording spec and residual.
    pub fn to_table(&self) -> DataTable {
        let mut t = DataTable::new("static profile", &["x", "F"])
            .with_meta("k", self.spec.k())
            .with_meta("n", self.spec.n())
            .with_meta("sb", self.spec.sb())
            .with_meta("sixth_order", self.spec.is_sixth_order())
            .with_meta("discretization", self.discretization)
            .with_meta("L", fmt_f64(self.grid.length()))
            .with_meta("N", self.grid.intervals())
            .with_meta("residual_norm", fmt_f64(self.residual_norm))
            .with_meta("iterations", self.iterations);
        for (i, v) in self.values.iter().enumerate() {
            t.push_numeric_row(&[self.grid.x(i), *v]);
        }
        t
    }

    pub fn from_table(table: &DataTable) -> Result<Profile> {
        let parse_u32 = |key: &str| -> Result<u32> {
            table.require_meta(key)?.parse().map_err(|_| {
                SkyrmeError::Validation(format!("profile header `{key}` is not an integer"))
            })
        };
        let k = parse_u32("k")?;
        let n = parse_u32("n")?;
        let sb: SbVariant = table.require_meta("sb")?.parse()?;
        let sixth = table.require_meta("sixth_order")? == "true";
        let spec = if sixth {
            StaticEquationSpec::sixth_order(n, sb)
        } else {
            StaticEquationSpec::new(k, n, sb)?
        };
        let intervals: usize = table
            .require_meta("N")?
            .parse()
            .map_err(|_| SkyrmeError::Validation("profile header `N` is not an integer".into()))?;
        let grid = Grid::new(table.meta_f64("L")?, intervals)?;
        let values = table.column_f64("F")?;
        if values.len() != grid.len() {
            return Err(SkyrmeError::Validation(format!(
                "profile has {} rows, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Profile {
            grid,
            values,
            spec,
            discretization: table.require_meta("discretization")?.parse()?,
            residual_norm: table.meta_f64("residual_norm")?,
            iterations: parse_u32("iterations")? as usize,
        })
    }
}

fn check_boundaries(grid: &Grid, values: &[f64], spec: &StaticEquationSpec) -> Result<()> {
    if values.len() != grid.len() {
        return Err(SkyrmeError::InvalidProfile(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    if values[0] != spec.origin_value() {
        return Err(SkyrmeError::InvalidProfile(format!(
            "F(0) = {} but the winding requires {}",
            values[0],
            spec.origin_value()
        )));
    }
    let end = values[grid.intervals()];
    if !(end.abs() <= BOUNDARY_TOLERANCE) {
        return Err(SkyrmeError::InvalidProfile(format!(
            "|F(L)| = {:.3e} exceeds {BOUNDARY_TOLERANCE:e}",
            end.abs()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(SkyrmeError::InvalidProfile("non-finite value".into()));
    }
    Ok(())
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Residual of the grid equations at the interior nodes `1..N` (length `N - 1`).
pub fn discrete_residual(
    spec: &StaticEquationSpec,
    grid: &Grid,
    values: &[f64],
    params: &ModelParams,
    discretization: Discretization,
) -> Vec<f64> {
    match discretization {
        Discretization::Collocation => collocation_residual(spec, grid, values, params),
        Discretization::Variational => variational_residual(spec, grid, values, params),
    }
}

fn collocation_residual(
    spec: &StaticEquationSpec,
    grid: &Grid,
    values: &[f64],
    params: &ModelParams,
) -> Vec<f64> {
    let h = grid.spacing();
    let n = grid.intervals();
    (1..n)
        .map(|i| {
            let v = values;
            if i == 1 && spec.origin_exponent() != 1.0 {
                return v[1] - origin_layer_value(spec, params, grid.x(1), grid.x(2), v[2]);
            }
            let (d1, d2) = if i == 1 || i == n - 1 {
                (
                    (v[i + 1] - v[i - 1]) / (2.0 * h),
                    (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h),
                )
            } else {
                (
                    (8.0 * (v[i + 1] - v[i - 1]) - (v[i + 2] - v[i - 2])) / (12.0 * h),
                    (16.0 * (v[i + 1] + v[i - 1]) - (v[i + 2] + v[i - 2]) - 30.0 * v[i])
                        / (12.0 * h * h),
                )
            };
            static_residual(spec, grid.x(i), v[i], d1, d2, params).expect("interior node has x > 0")
        })
        .collect()
}

/// Half the lattice force of [`crate::lattice`] at the interior nodes.
fn variational_residual(
    spec: &StaticEquationSpec,
    grid: &Grid,
    values: &[f64],
    params: &ModelParams,
) -> Vec<f64> {
    let mut g = vec![0.0; grid.len()];
    Lattice::new(grid).force(&spec.lagrangian(params), grid, values, &mut g);
    g[1..grid.intervals()].iter().map(|v| 0.5 * v).collect()
}

/// Solve the static equation with central-difference collocation.
pub fn solve_static(
    spec: &StaticEquationSpec,
    grid: &Grid,
    params: &ModelParams,
    init: Option<&Profile>,
) -> Result<Profile> {
    solve_static_with(spec, grid, params, init, Discretization::Collocation)
}

pub fn solve_static_with(
    spec: &StaticEquationSpec,
    grid: &Grid,
    params: &ModelParams,
    init: Option<&Profile>,
    discretization: Discretization,
) -> Result<Profile> {
    let guess = match init {
        Some(p) => {
            grid.check_same(&p.grid)?;
            check_boundaries(grid, &p.values, spec)?;
            p.values.clone()
        }
        None if spec.n() == 0 => vec![0.0; grid.len()],
        None => match shooting_guess(spec, grid, params) {
            Some(values) => values,
            None => kink_guess(spec, grid)?,
        },
    };
    let relaxed = relax(spec, grid, params, discretization, guess);
    let (values, iterations) = match relaxed {
        Ok(ok) => ok,
        Err(err) if init.is_none() && spec.n() > 0 => {
            // Shooting may land on a branch Newton cannot polish; retry from the kink.
            relax(spec, grid, params, discretization, kink_guess(spec, grid)?).map_err(|_| err)?
        }
        Err(err) => return Err(err),
    };
    let mut profile = Profile::from_values(*grid, values, *spec, discretization, params)?;
    profile.iterations = iterations;
    Ok(profile)
}

fn kink_guess(spec: &StaticEquationSpec, grid: &Grid) -> Result<Vec<f64>> {
    let l = grid.length();
    let tail = kink_profile(l, spec.n())?;
    let mut v = grid
        .nodes()
        .into_iter()
        .map(|x| kink_profile(x, spec.n()).map(|f| f - tail * x / l))
        .collect::<Result<Vec<_>>>()?;
    v[0] = spec.origin_value();
    *v.last_mut().expect("grid has nodes") = 0.0;
    Ok(v)
}

/// Damped Newton on the interior unknowns. Returns node values and iteration count.
fn relax(
    spec: &StaticEquationSpec,
    grid: &Grid,
    params: &ModelParams,
    discretization: Discretization,
    mut values: Vec<f64>,
) -> Result<(Vec<f64>, usize)> {
    let residual = |v: &[f64]| discrete_residual(spec, grid, v, params, discretization);
    let norm2 = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>();
    let mut r = residual(&values);
    let mut best = max_abs(&r);
    for iteration in 0..NEWTON_MAX_ITERATIONS {
        let current = max_abs(&r);
        best = best.min(current);
        if current < NEWTON_TOLERANCE {
            return Ok((values, iteration));
        }
        let jac = banded_jacobian(&residual, &values, &r, discretization.bandwidth());
        let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
        let step = jac.solve(&rhs)?;
        let base_norm = norm2(&r);
        let mut lambda = 1.0;
        let mut accepted = None;
        while lambda >= 1.0 / 1024.0 {
            let mut trial = values.clone();
            for (t, s) in trial[1..grid.intervals()].iter_mut().zip(&step) {
                *t += lambda * s;
            }
            let tr = residual(&trial);
            let tn = norm2(&tr);
            if tn.is_finite() && tn < (1.0 - 1e-4 * lambda) * base_norm {
                accepted = Some((trial, tr));
                break;
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((v, tr)) => {
                values = v;
                r = tr;
            }
            None => {
                // No descent: accept if already within the profile tolerance.
                if current < RESIDUAL_TOLERANCE {
                    return Ok((values, iteration));
                }
                return Err(SkyrmeError::SolverFailure {
                    iterations: iteration,
                    best_residual: best,
                });
            }
        }
    }
    let current = max_abs(&r);
    if current < RESIDUAL_TOLERANCE {
        Ok((values, NEWTON_MAX_ITERATIONS))
    } else {
        Err(SkyrmeError::SolverFailure {
            iterations: NEWTON_MAX_ITERATIONS,
            best_residual: best.min(current),
        })
    }
}

/// Square band matrix with equal lower and upper bandwidth; row `i` stores
/// columns `i - bw ..= i + bw`.
#[derive(Debug, Clone)]
pub(crate) struct Banded {
    pub bw: usize,
    pub rows: Vec<Vec<f64>>,
}

impl Banded {
    pub fn zeros(size: usize, bw: usize) -> Self {
        Banded {
            bw,
            rows: vec![vec![0.0; 2 * bw + 1]; size],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.bw < i || j > i + self.bw {
            0.0
        } else {
            self.rows[i][j + self.bw - i]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let bw = self.bw;
        self.rows[i][j + bw - i] = v;
    }

    /// Gaussian elimination without pivoting (the upper fill stays in the band).
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = self.rows.len();
        let bw = self.bw;
        let mut a = self.clone();
        let mut x = rhs.to_vec();
        let scale = (0..m)
            .fold(0.0f64, |s, i| s.max(self.get(i, i).abs()))
            .max(1e-300);
        for k in 0..m {
            let pivot = a.get(k, k);
            if !(pivot.abs() > 1e-14 * scale) || !pivot.is_finite() {
                return Err(SkyrmeError::DegenerateSolve { row: k, pivot });
            }
            for i in k + 1..(k + bw + 1).min(m) {
                let factor = a.get(i, k) / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in k..(k + bw + 1).min(m) {
                    let v = a.get(i, j) - factor * a.get(k, j);
                    a.set(i, j, v);
                }
                x[i] -= factor * x[k];
            }
        }
        for k in (0..m).rev() {
            let mut v = x[k];
            for j in k + 1..(k + bw + 1).min(m) {
                v -= a.get(k, j) * x[j];
            }
            x[k] = v / a.get(k, k);
        }
        Ok(x)
    }
}

/// Band Jacobian of a residual whose row `r` depends on unknowns within `bw`
/// of `r`, by central differences with `2 bw + 1` interleaved perturbations.
pub(crate) fn banded_jacobian(
    residual: &dyn Fn(&[f64]) -> Vec<f64>,
    values: &[f64],
    base: &[f64],
    bw: usize,
) -> Banded {
    let m = base.len();
    let colors = 2 * bw + 1;
    let mut jac = Banded::zeros(m, bw);
    for color in 0..colors {
        let cols: Vec<usize> = (color..m).step_by(colors).collect();
        let steps: Vec<f64> = cols
            .iter()
            .map(|&c| 1e-6 * values[c + 1].abs().max(1.0))
            .collect();
        let mut plus = values.to_vec();
        let mut minus = values.to_vec();
        for (&c, &s) in cols.iter().zip(&steps) {
            plus[c + 1] += s;
            minus[c + 1] -= s;
        }
        let rp = residual(&plus);
        let rm = residual(&minus);
        for (&c, &s) in cols.iter().zip(&steps) {
            for row in c.saturating_sub(bw)..(c + bw + 1).min(m) {
                jac.set(row, c, (rp[row] - rm[row]) / (2.0 * s));
            }
        }
    }
    jac
}

/// Outward RK4 integration from the origin series `F = n pi + s x^p`, recording
/// `F` at each (increasing) target. Stops early on divergence; the flag reports
/// whether every target was reached.
fn integrate_from_origin(
    spec: &StaticEquationSpec,
    params: &ModelParams,
    coefficient: f64,
    targets: &[f64],
    max_step: f64,
) -> (Vec<f64>, bool) {
    let p = spec.origin_exponent();
    let f0 = spec.origin_value();
    let limit = f0.abs() + 4.0 * std::f64::consts::PI;
    let accel = |x: f64, f: f64, df: f64| {
        let r0 = static_residual(spec, x, f, df, 0.0, params).unwrap_or(f64::NAN);
        -r0 / residual_second_derivative_coefficient(spec, x, f, params)
    };
    let rk4 = |x: f64, y: (f64, f64), dx: f64| {
        let (k1f, k1d) = (y.1, accel(x, y.0, y.1));
        let (k2f, k2d) = (
            y.1 + 0.5 * dx * k1d,
            accel(x + 0.5 * dx, y.0 + 0.5 * dx * k1f, y.1 + 0.5 * dx * k1d),
        );
        let (k3f, k3d) = (
            y.1 + 0.5 * dx * k2d,
            accel(x + 0.5 * dx, y.0 + 0.5 * dx * k2f, y.1 + 0.5 * dx * k2d),
        );
        let (k4f, k4d) = (
            y.1 + dx * k3d,
            accel(x + dx, y.0 + dx * k3f, y.1 + dx * k3d),
        );
        (
            y.0 + dx / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f),
            y.1 + dx / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d),
        )
    };

    let mut x = SHOOT_START * max_step;
    let mut y = (
        f0 + coefficient * x.powf(p),
        coefficient * p * x.powf(p - 1.0),
    );
    let mut values = Vec::with_capacity(targets.len());
    for &target in targets {
        // Geometric steps near the origin, uniform steps elsewhere.
        while x < target {
            let dx = (target - x).min(max_step.min(0.25 * x));
            let dx = if target - x - dx < 1e-12 * max_step {
                target - x
            } else {
                dx
            };
            y = rk4(x, y, dx);
            x = if dx == target - x { target } else { x + dx };
            if !(y.0.is_finite() && y.1.is_finite()) || y.0.abs() > limit {
                values.push(y.0);
                return (values, false);
            }
        }
        values.push(y.0);
    }
    (values, true)
}

fn shoot(
    spec: &StaticEquationSpec,
    grid: &Grid,
    params: &ModelParams,
    coefficient: f64,
) -> (Vec<f64>, bool) {
    let targets: Vec<f64> = (1..=grid.intervals()).map(|i| grid.x(i)).collect();
    let (tail, complete) = integrate_from_origin(
        spec,
        params,
        coefficient,
        &targets,
        grid.spacing() / SHOOT_SUBSTEPS as f64,
    );
    let mut values = vec![spec.origin_value()];
    values.extend(tail);
    (values, complete)
}

/// Origin layer: the solution through `(x2, F2)` that leaves the origin as
/// `n pi + s x^p`, evaluated at `x1`. Used as the first-node equation because
/// central differences cannot resolve the non-analytic start when `p` is not
/// an integer.
fn origin_layer_value(
    spec: &StaticEquationSpec,
    params: &ModelParams,
    x1: f64,
    x2: f64,
    f2: f64,
) -> f64 {
    let p = spec.origin_exponent();
    let f0 = spec.origin_value();
    let step = x1 / 32.0;
    let end = |s: f64| {
        let (v, ok) = integrate_from_origin(spec, params, s, &[x1, x2], step);
        if ok {
            (v[0], v[1])
        } else {
            (f64::NAN, f64::NAN)
        }
    };
    let mut s0 = (f2 - f0) / x2.powf(p);
    let mut e0 = end(s0).1 - f2;
    let mut s1 = s0 * (1.0 + 1e-3) + 1e-9;
    let mut last = end(s1);
    let mut e1 = last.1 - f2;
    for _ in 0..60 {
        if e1 == 0.0 || !e1.is_finite() || e1 == e0 {
            break;
        }
        let s2 = s1 - e1 * (s1 - s0) / (e1 - e0);
        s0 = s1;
        e0 = e1;
        s1 = s2;
        last = end(s1);
        e1 = last.1 - f2;
        if (s1 - s0).abs() <= 1e-15 * s1.abs() {
            break;
        }
    }
    last.0
}

/// End value used to bracket roots; diverged shots report their escape direction.
fn shot_end(
    spec: &StaticEquationSpec,
    grid: &Grid,
    params: &ModelParams,
    s: f64,
) -> (f64, Vec<f64>, bool) {
    let (values, complete) = shoot(spec, grid, params, s);
    let last = *values.last().expect("at least the origin");
    let end = if complete {
        last
    } else if last.is_nan() {
        f64::NAN
    } else {
        last.signum() * 1e3
    };
    (end, values, complete)
}

fn shooting_guess(
    spec: &StaticEquationSpec,
    grid: &Grid,
    params: &ModelParams,
) -> Option<Vec<f64>> {
    let scan: Vec<f64> = (0..=60)
        .map(|i| -(10f64).powf(-3.0 + 5.0 * i as f64 / 60.0))
        .collect();
    let ends: Vec<f64> = scan
        .iter()
        .map(|&s| shot_end(spec, grid, params, s).0)
        .collect();

    let mut candidates = Vec::new();
    for w in 0..scan.len() - 1 {
        let (fa, fb) = (ends[w], ends[w + 1]);
        if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
            continue;
        }
        if let Some(values) = refine_bracket(spec, grid, params, (scan[w], fa), (scan[w + 1], fb)) {
            candidates.push(values);
        }
    }
    // Several roots: keep the branch closest to the kink profile.
    let kink: Vec<f64> = grid
        .nodes()
        .into_iter()
        .map(|x| kink_profile(x, spec.n()).unwrap_or(0.0))
        .collect();
    candidates
        .into_iter()
        .map(|mut v| {
            *v.last_mut().expect("grid has nodes") = 0.0;
            let dist = v
                .iter()
                .zip(&kink)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            (dist, v)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, v)| v)
}

/// Secant refinement safeguarded by bisection (Illinois variant).
fn refine_bracket(
    spec: &StaticEquationSpec,
    grid: &Grid,
    params: &ModelParams,
    mut a: (f64, f64),
    mut b: (f64, f64),
) -> Option<Vec<f64>> {
    let mut side = 0i8;
    for _ in 0..200 {
        let s = (a.0 * b.1 - b.0 * a.1) / (b.1 - a.1);
        let s = if s.is_finite() && s > a.0.min(b.0) && s < a.0.max(b.0) {
            s
        } else {
            0.5 * (a.0 + b.0)
        };
        let (fs, values, complete) = shot_end(spec, grid, params, s);
        if !fs.is_finite() {
            return None;
        }
        if complete && fs.abs() < 1e-9 {
            return Some(values);
        }
        if (b.0 - a.0).abs() < 1e-15 * a.0.abs().max(b.0.abs()) {
            // Bracket collapsed onto a divergence jump, not a root.
            return if complete && fs.abs() < BOUNDARY_TOLERANCE {
                Some(values)
            } else {
                None
            };
        }
        if fs.signum() == a.1.signum() {
            a = (s, fs);
            if side == -1 {
                b.1 *= 0.5;
            }
            side = -1;
        } else {
            b = (s, fs);
            if side == 1 {
                a.1 *= 0.5;
            }
            side = 1;
        }
    }
    None
}

/// Largest node-wise change between the solution on `grid` and on the grid with
/// twice as many intervals, compared at the shared nodes.
pub fn refinement_change(
    spec: &StaticEquationSpec,
    grid: &Grid,
    params: &ModelParams,
    discretization: Discretization,
) -> Result<f64> {
    let coarse = solve_static_with(spec, grid, params, None, discretization)?;
    let fine = solve_static_with(spec, &grid.refined(), params, None, discretization)?;
    Ok(coarse
        .values
        .iter()
        .enumerate()
        .fold(0.0f64, |m, (i, v)| m.max((v - fine.values[2 * i]).abs())))
}

/// One row of the kink-versus-source comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkComparisonRow {
    pub x: f64,
    /// Hedgehog left-hand side on the analytic kink (closed-form derivatives).
    pub lhs_kink: f64,
    pub rhs_pionmass: f64,
    pub rhs_modified: f64,
}

pub fn kink_comparison(grid: &Grid, params: &ModelParams) -> Result<Vec<KinkComparisonRow>> {
    let hedgehog = StaticEquationSpec::new(1, 1, SbVariant::None)?;
    (1..grid.len())
        .map(|i| {
            let x = grid.x(i);
            let (f, d1, d2) = kink_derivatives(x, 1)?;
            Ok(KinkComparisonRow {
                x,
                lhs_kink: static_residual(&hedgehog, x, f, d1, d2, params)?,
                rhs_pionmass: sb_source(SbVariant::PionMass, x, f, params),
                rhs_modified: sb_source(SbVariant::Modified, x, f, params),
            })
        })
        .collect()
}

/// Discrete L2 mismatch norms `(||lhs - rhs_modified||, ||lhs - rhs_pionmass||)`
/// over rows with `x` in `[x_min, x_max]`.
pub fn kink_mismatch_norms(
    rows: &[KinkComparisonRow],
    x_min: f64,
    x_max: f64,
    h: f64,
) -> (f64, f64) {
    let (mut modified, mut pionmass) = (0.0, 0.0);
    for r in rows.iter().filter(|r| r.x >= x_min && r.x <= x_max) {
        modified += (r.lhs_kink - r.rhs_modified).powi(2);
        pionmass += (r.lhs_kink - r.rhs_pionmass).powi(2);
    }
    ((h * modified).sqrt(), (h * pionmass).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: u32, sb: SbVariant) -> StaticEquationSpec {
        StaticEquationSpec::new(k, 1, sb).unwrap()
    }

    #[test]
    fn hedgehog_minimizes_below_kink() {
        use crate::energy::M4Reading;
        use crate::energy::MassBreakdown;
        let p = ModelParams::default();
        let grid = Grid::default();
        let prof = solve_static(&spec(1, SbVariant::None), &grid, &p, None).unwrap();
        assert!(prof.is_accepted(), "residual {}", prof.residual_norm);
        assert_eq!(prof.values[0], std::f64::consts::PI);
        assert!(prof.monotonicity_violations().is_empty());
        let solved = MassBreakdown::evaluate(&grid, &prof.values, 1, M4Reading::Unit).unwrap();
        let kink: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&x| kink_profile(x, 1).unwrap())
            .collect();
        let trial = MassBreakdown::evaluate(&grid, &kink, 1, M4Reading::Unit).unwrap();
        assert!(solved.total < trial.total);
        // Scaling balance of a stationary point: M2 = M4.
        assert!((solved.m2 - solved.m4).abs() / solved.total < 0.01);
        let slope = (prof.values[1] - prof.values[0]) / grid.spacing();
        assert!((slope + 1.01).abs() < 0.02, "F'(0) ~ {slope}");
    }

    #[test]
    fn vacuum_is_returned_unchanged() {
        let p = ModelParams::default();
        let grid = Grid::default();
        for sb in [SbVariant::None, SbVariant::PionMass, SbVariant::Modified] {
            let s = StaticEquationSpec::new(2, 0, sb).unwrap();
            let vac = Profile::from_values(
                grid,
                vec![0.0; grid.len()],
                s,
                Discretization::Collocation,
                &p,
            )
            .unwrap();
            let out = solve_static(&s, &grid, &p, Some(&vac)).unwrap();
            assert_eq!(out.values, vac.values);
            assert_eq!(out.iterations, 0);
        }
    }

    #[test]
    fn resolving_a_solution_is_idempotent() {
        let p = ModelParams::default();
        let grid = Grid::default();
        for s in [spec(1, SbVariant::Modified), spec(2, SbVariant::PionMass)] {
            let first = solve_static(&s, &grid, &p, None).unwrap();
            let again = solve_static(&s, &grid, &p, Some(&first)).unwrap();
            assert!(again.iterations <= 2);
            let diff = first
                .values
                .iter()
                .zip(&again.values)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(diff < 1e-9);
        }
    }

    #[test]
    fn twisty_profile_leaves_origin_flat() {
        // For k = 2 the profile behaves like pi - s x^1.79 at the origin.
        let p = ModelParams::default();
        let grid = Grid::new(16.0, 2048).unwrap();
        let prof = solve_static(&spec(2, SbVariant::Modified), &grid, &p, None).unwrap();
        assert!(prof.is_accepted());
        let (f1, f2) = (prof.values[1], prof.values[2]);
        let exponent = ((std::f64::consts::PI - f2) / (std::f64::consts::PI - f1)).log2();
        assert!((exponent - 1.79).abs() < 0.15, "exponent {exponent}");
    }

    #[test]
    fn variational_discretization_converges() {
        let p = ModelParams::default();
        let grid = Grid::default();
        for s in [
            spec(1, SbVariant::Modified),
            StaticEquationSpec::sixth_order(1, SbVariant::Modified),
        ] {
            let prof = solve_static_with(&s, &grid, &p, None, Discretization::Variational).unwrap();
            assert!(prof.residual_norm < 1e-9);
            let colloc = solve_static(&s, &grid, &p, None).unwrap();
            let diff = prof
                .values
                .iter()
                .zip(&colloc.values)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(diff < 5e-3, "discretizations differ by {diff}");
        }
    }

    #[test]
    fn invalid_init_rejected() {
        let p = ModelParams::default();
        let grid = Grid::default();
        let s = spec(1, SbVariant::None);
        let bad = Profile {
            grid,
            values: vec![1.0; grid.len()],
            spec: s,
            discretization: Discretization::Collocation,
            residual_norm: 0.0,
            iterations: 0,
        };
        let err = solve_static(&s, &grid, &p, Some(&bad)).unwrap_err();
        assert_eq!(err.category(), "invalid-profile");
    }

    #[test]
    fn degenerate_band_detected() {
        let mut t = Banded::zeros(2, 1);
        t.set(0, 0, 1.0);
        t.set(0, 1, 1.0);
        t.set(1, 0, 1.0);
        t.set(1, 1, 1.0);
        assert_eq!(
            t.solve(&[1.0, 1.0]).unwrap_err().category(),
            "degenerate-solve"
        );
    }

    #[test]
    fn band_solver_matches_dense_result() {
        let m = 7;
        let mut t = Banded::zeros(m, 2);
        for i in 0..m {
            for j in i.saturating_sub(2)..(i + 3).min(m) {
                let v = if i == j {
                    6.0
                } else {
                    1.0 / (1.0 + i as f64 + 2.0 * j as f64)
                };
                t.set(i, j, v);
            }
        }
        let truth: Vec<f64> = (0..m).map(|i| (i as f64).sin()).collect();
        let rhs: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|j| t.get(i, j) * truth[j]).sum())
            .collect();
        let x = t.solve(&rhs).unwrap();
        for (a, b) in x.iter().zip(&truth) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn kink_comparison_structure() {
        let p = ModelParams::default();
        let grid = Grid::default();
        let rows = kink_comparison(&grid, &p).unwrap();
        assert_eq!(rows.len(), grid.intervals());
        for r in &rows {
            if r.rhs_pionmass != 0.0 {
                assert!((r.rhs_modified / r.rhs_pionmass - 3.5e-7).abs() < 1e-18);
            }
        }
        let last = rows.last().unwrap();
        assert!(last.lhs_kink.abs() < 1e-4);
    }

    #[test]
    fn profile_table_round_trip() {
        let p = ModelParams::default();
        let prof = solve_static(&spec(2, SbVariant::PionMass), &Grid::default(), &p, None).unwrap();
        let text = prof.to_table().render();
        let back = Profile::from_table(&DataTable::parse(&text).unwrap()).unwrap();
        assert_eq!(back, prof);
    }
}
