//! Time evolution of the hedgehog profile.
//!
//! The field is evolved with classical RK4 on the lattice equations of motion
//! obtained from the discretized Lagrangian
//! `2h sum_i w_i (W_i Fdot_i^2 - W_i D_i^2 - V_i)` with a fourth-order
//! derivative `D_i`, so the lattice [`hamiltonian`](crate::energy::hamiltonian)
//! is conserved up to the RK4 truncation error.

use std::fmt;
use std::str::FromStr;

use crate::energy::hamiltonian;
use crate::error::{Result, SkyrmeError};
use crate::grid::Grid;
use crate::lattice::Lattice;
use crate::model::{
    derive_dimensionless, ModelParams, PhysicalConstants, RadialLagrangian, SbVariant,
    StaticEquationSpec,
};
use crate::static_solver::{solve_static_with, Discretization, Profile};

/// `max |F|` beyond which a run is treated as diverged.
pub const BLOW_UP_THRESHOLD: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Skyrme model with the modified symmetry-breaking term.
    Quartic,
    /// Same, plus the sixth-order term with coupling `gamma6`.
    Sixth,
}

impl Model {
    pub fn tag(self) -> &'static str {
        match self {
            Model::Quartic => "quartic",
            Model::Sixth => "sixth",
        }
    }

    /// Radial Lagrangian driving the evolution; the symmetry breaking is always
    /// the epsilon-scaled pion mass term.
    pub fn lagrangian(self, params: &ModelParams) -> RadialLagrangian {
        let gamma6 = match self {
            Model::Quartic => 0.0,
            Model::Sixth => params.gamma6(),
        };
        RadialLagrangian::hedgehog(gamma6, SbVariant::Modified.coefficient(params))
    }

    /// Static equation whose solutions are equilibria of this model.
    pub fn static_spec(self, n: u32) -> StaticEquationSpec {
        match self {
            Model::Quartic => {
                StaticEquationSpec::new(1, n, SbVariant::Modified).expect("k = 1 is a valid twist")
            }
            Model::Sixth => StaticEquationSpec::sixth_order(n, SbVariant::Modified),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Model {
    type Err = SkyrmeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quartic" => Ok(Model::Quartic),
            "sixth" => Ok(Model::Sixth),
            other => Err(SkyrmeError::Validation(format!(
                "unknown model `{other}` (expected quartic or sixth)"
            ))),
        }
    }
}

/// `(F, Fdot)` on the grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub grid: Grid,
    pub f: Vec<f64>,
    pub fdot: Vec<f64>,
    pub t: f64,
}

impl FieldState {
    pub fn at_rest(grid: Grid, f: Vec<f64>) -> Self {
        let n = f.len();
        FieldState {
            grid,
            f,
            fdot: vec![0.0; n],
            t: 0.0,
        }
    }

    pub fn max_abs_f(&self) -> f64 {
        self.f.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Base profile plus `A sin(j pi x / L)`, at rest.
pub fn init_perturbed(base: &Profile, j: usize, amplitude: f64) -> Result<FieldState> {
    let n = base.grid.intervals();
    if j == 0 || j >= n {
        return Err(SkyrmeError::InvalidMode { j, max: n - 1 });
    }
    let mut f = base.values.clone();
    for (i, v) in f.iter_mut().enumerate().take(n).skip(1) {
        *v += amplitude * sine_index(j * i, n);
    }
    Ok(FieldState::at_rest(base.grid, f))
}

/// `sin(pi m / n)` reduced so node multiples of `pi` are exactly zero.
pub(crate) fn sine_index(m: usize, n: usize) -> f64 {
    let r = m % (2 * n);
    if r == 0 || r == n {
        0.0
    } else {
        (std::f64::consts::PI * r as f64 / n as f64).sin()
    }
}

fn acceleration(model: Model, state: &FieldState, params: &ModelParams) -> Vec<f64> {
    let mut out = vec![0.0; state.f.len()];
    Lattice::new(&state.grid).acceleration(
        &model.lagrangian(params),
        &state.grid,
        &state.f,
        &state.fdot,
        &mut out,
    );
    out
}

/// Per-node `Fddot` of the quartic model (zero at the pinned boundary nodes).
pub fn acceleration_quartic(state: &FieldState, params: &ModelParams) -> Vec<f64> {
    acceleration(Model::Quartic, state, params)
}

/// Per-node `Fddot` of the sixth-order model; identical to
/// [`acceleration_quartic`] when `gamma6 = 0`.
pub fn acceleration_sixth(state: &FieldState, params: &ModelParams) -> Vec<f64> {
    acceleration(Model::Sixth, state, params)
}

/// Continuum equation of motion solved for `Fddot` at a single point:
/// `Fddot = F'' + [W_x F' + (W_F/2)(F'^2 - Fdot^2) - V_F/2] / W`.
pub fn acceleration_pointwise(
    model: Model,
    x: f64,
    f: f64,
    df: f64,
    d2f: f64,
    fdot: f64,
    params: &ModelParams,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(SkyrmeError::SingularPoint { x });
    }
    let lag = model.lagrangian(params);
    let w = lag.inertia(x, f);
    Ok(d2f
        + (lag.inertia_dx(x, f) * df + 0.5 * lag.inertia_df(x, f) * (df * df - fdot * fdot)
            - 0.5 * lag.potential_df(x, f))
            / w)
}

/// Static profile that is an exact equilibrium of the lattice evolution.
///
/// The sixth-order coupling is switched on in stages, each solve starting from
/// the previous profile.
pub fn equilibrium_profile(
    model: Model,
    n: u32,
    grid: &Grid,
    params: &ModelParams,
) -> Result<Profile> {
    let quartic = solve_static_with(
        &Model::Quartic.static_spec(n),
        grid,
        params,
        None,
        Discretization::Variational,
    )?;
    if model == Model::Quartic || params.gamma6() == 0.0 || n == 0 {
        return Ok(Profile {
            spec: model.static_spec(n),
            ..quartic
        });
    }
    let spec = model.static_spec(n);
    let mut current = Profile { spec, ..quartic };
    let stages = 5;
    let mut iterations = 0;
    for stage in 1..=stages {
        let scaled = if stage == stages {
            *params
        } else {
            derive_dimensionless(&PhysicalConstants {
                eps6_sq: params.eps6_sq() * stage as f64 / stages as f64,
                ..*params.constants()
            })?
        };
        current = solve_static_with(
            &spec,
            grid,
            &scaled,
            Some(&current),
            Discretization::Variational,
        )?;
        iterations += current.iterations;
    }
    current.iterations = iterations;
    Ok(current)
}

fn check_finite(previous: &FieldState, next: &FieldState) -> Result<()> {
    let max_abs = next.max_abs_f();
    let finite = next.f.iter().chain(&next.fdot).all(|v| v.is_finite());
    if !finite || max_abs > BLOW_UP_THRESHOLD {
        return Err(SkyrmeError::BlowUp {
            t: next.t,
            max_abs,
            snapshot: Some(Box::new(previous.clone())),
        });
    }
    Ok(())
}

/// One classical RK4 step; boundary nodes are carried through unchanged.
pub fn step_rk4(
    state: &FieldState,
    dt: f64,
    model: Model,
    params: &ModelParams,
) -> Result<FieldState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SkyrmeError::InvalidParameter {
            name: "dt",
            reason: format!("time step must be positive, got {dt}"),
        });
    }
    let mut stepper = Stepper::new(model, params, &state.grid);
    let mut next = state.clone();
    stepper.step(&mut next, dt);
    next.t = state.t + dt;
    check_finite(state, &next)?;
    Ok(next)
}

/// RK4 with preallocated stage buffers.
struct Stepper {
    lag: RadialLagrangian,
    grid: Grid,
    k_f: [Vec<f64>; 4],
    k_v: [Vec<f64>; 4],
    tmp_f: Vec<f64>,
    tmp_v: Vec<f64>,
    lattice: Lattice,
}

impl Stepper {
    fn new(model: Model, params: &ModelParams, grid: &Grid) -> Self {
        let m = grid.len();
        Stepper {
            lag: model.lagrangian(params),
            grid: *grid,
            k_f: std::array::from_fn(|_| vec![0.0; m]),
            k_v: std::array::from_fn(|_| vec![0.0; m]),
            tmp_f: vec![0.0; m],
            tmp_v: vec![0.0; m],
            lattice: Lattice::new(grid),
        }
    }

    /// Advances `state.f` and `state.fdot` in place (time is left to the caller).
    fn step(&mut self, state: &mut FieldState, dt: f64) {
        let n = self.grid.intervals();
        let weights = [0.5 * dt, 0.5 * dt, dt];
        for stage in 0..4 {
            if stage == 0 {
                self.tmp_f.copy_from_slice(&state.f);
                self.tmp_v.copy_from_slice(&state.fdot);
            } else {
                let c = weights[stage - 1];
                for i in 1..n {
                    self.tmp_f[i] = state.f[i] + c * self.k_f[stage - 1][i];
                    self.tmp_v[i] = state.fdot[i] + c * self.k_v[stage - 1][i];
                }
            }
            self.k_f[stage].copy_from_slice(&self.tmp_v);
            self.k_f[stage][0] = 0.0;
            self.k_f[stage][n] = 0.0;
            self.lattice.acceleration(
                &self.lag,
                &self.grid,
                &self.tmp_f,
                &self.tmp_v,
                &mut self.k_v[stage],
            );
        }
        let c = dt / 6.0;
        for i in 1..n {
            state.f[i] +=
                c * (self.k_f[0][i] + 2.0 * self.k_f[1][i] + 2.0 * self.k_f[2][i] + self.k_f[3][i]);
            state.fdot[i] +=
                c * (self.k_v[0][i] + 2.0 * self.k_v[1][i] + 2.0 * self.k_v[2][i] + self.k_v[3][i]);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub model: Model,
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub perturb_mode: usize,
    pub perturb_amp: f64,
    pub base_profile: Profile,
    /// Steps between dense samples kept for mode histories (0 disables sampling).
    pub sample_interval: usize,
    /// Steps between energy log entries.
    pub energy_interval: usize,
}

impl EvolutionConfig {
    pub const DEFAULT_SNAPSHOTS: [f64; 5] = [0.0, 100.0, 200.0, 300.0, 500.0];

    pub fn new(model: Model, base_profile: Profile) -> Self {
        EvolutionConfig {
            model,
            dt: 1e-3,
            t_end: 500.0,
            snapshot_times: Self::DEFAULT_SNAPSHOTS.to_vec(),
            perturb_mode: 16,
            perturb_amp: 0.1,
            base_profile,
            sample_interval: 500,
            energy_interval: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |name, reason: String| Err(SkyrmeError::InvalidParameter { name, reason });
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return invalid("dt", format!("must be positive, got {}", self.dt));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return invalid("t_end", format!("must be non-negative, got {}", self.t_end));
        }
        if let Some(t) = self
            .snapshot_times
            .iter()
            .find(|t| !(**t >= 0.0 && **t <= self.t_end))
        {
            return invalid("snapshots", format!("time {t} outside [0, {}]", self.t_end));
        }
        if self.snapshot_times.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("snapshots", "times must be strictly increasing".into());
        }
        let n = self.base_profile.grid.intervals();
        if self.perturb_mode == 0 || self.perturb_mode >= n {
            return Err(SkyrmeError::InvalidMode {
                j: self.perturb_mode,
                max: n - 1,
            });
        }
        if !self.perturb_amp.is_finite() {
            return invalid("A", "amplitude must be finite".into());
        }
        if self.energy_interval == 0 || self.energy_interval > 100 {
            return invalid("energy_interval", "must be between 1 and 100 steps".into());
        }
        Ok(())
    }

    /// Step index of time `t`: the first step with `step * dt >= t`.
    pub fn step_at(&self, t: f64) -> usize {
        let s = t / self.dt;
        let r = s.round();
        if (s - r).abs() <= 1e-9 * r.max(1.0) {
            r as usize
        } else {
            s.ceil() as usize
        }
    }

    pub fn total_steps(&self) -> usize {
        self.step_at(self.t_end)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<FieldState>,
    /// States every `sample_interval` steps, starting at `t = 0`.
    pub samples: Vec<FieldState>,
    pub energy_log: Vec<(f64, f64)>,
    pub config: EvolutionConfig,
}

impl Trajectory {
    /// Largest relative deviation of the logged energy from its initial value
    /// over `t <= t_max`.
    pub fn relative_energy_drift(&self, t_max: f64) -> f64 {
        let Some(&(_, e0)) = self.energy_log.first() else {
            return 0.0;
        };
        self.energy_log
            .iter()
            .filter(|(t, _)| *t <= t_max + 1e-9)
            .fold(0.0f64, |m, (_, e)| m.max((e - e0).abs() / e0.abs()))
    }
}

/// Integrate from the perturbed base profile to `t_end` with fixed `dt`.
pub fn evolve(config: &EvolutionConfig, params: &ModelParams) -> Result<Trajectory> {
    config.validate()?;
    let initial = init_perturbed(
        &config.base_profile,
        config.perturb_mode,
        config.perturb_amp,
    )?;
    evolve_from(initial, config, params)
}

/// Same as [`evolve`] but starting from an arbitrary state (its `t` is kept).
pub fn evolve_from(
    initial: FieldState,
    config: &EvolutionConfig,
    params: &ModelParams,
) -> Result<Trajectory> {
    config.validate()?;
    config.base_profile.grid.check_same(&initial.grid)?;
    let total = config.total_steps();
    let snapshot_steps: Vec<usize> = config
        .snapshot_times
        .iter()
        .map(|&t| config.step_at(t))
        .collect();
    let t0 = initial.t;
    let mut state = initial;
    let mut stepper = Stepper::new(config.model, params, &state.grid);
    let mut snapshots = Vec::with_capacity(snapshot_steps.len());
    let mut samples = Vec::new();
    let mut energy_log = Vec::new();
    let mut next_snapshot = 0;
    let mut previous = state.clone();

    for step in 0..=total {
        if step > 0 {
            previous.clone_from(&state);
            stepper.step(&mut state, config.dt);
            state.t = t0 + step as f64 * config.dt;
            check_finite(&previous, &state)?;
        }
        while next_snapshot < snapshot_steps.len() && snapshot_steps[next_snapshot] <= step {
            snapshots.push(state.clone());
            next_snapshot += 1;
        }
        if config.sample_interval > 0 && step % config.sample_interval == 0 {
            samples.push(state.clone());
        }
        if step % config.energy_interval == 0 || step == total {
            energy_log.push((state.t, hamiltonian(&state, config.model, params)));
        }
    }
    Ok(Trajectory {
        snapshots,
        samples,
        energy_log,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params_without_sixth() -> ModelParams {
        crate::model::derive_dimensionless(&PhysicalConstants {
            eps6_sq: 0.0,
            ..Default::default()
        })
        .unwrap()
    }

    fn base(model: Model) -> Profile {
        equilibrium_profile(model, 1, &Grid::default(), &ModelParams::default()).unwrap()
    }

    fn short_config(model: Model, t_end: f64) -> EvolutionConfig {
        EvolutionConfig {
            t_end,
            snapshot_times: vec![0.0, t_end],
            ..EvolutionConfig::new(model, base(model))
        }
    }

    #[test]
    fn pointwise_accelerations_match_symbolic_values() {
        let p = ModelParams::default();
        let q = acceleration_pointwise(Model::Quartic, 2.0, 1.0, -0.5, 0.3, 0.1, &p).unwrap();
        assert_relative_eq!(q, 0.022676072675222982, max_relative = 1e-12);
        let s = acceleration_pointwise(Model::Sixth, 2.0, 1.0, -0.5, 0.3, 0.1, &p).unwrap();
        assert_relative_eq!(s, 0.12974924497993031, max_relative = 1e-12);
        assert!(acceleration_pointwise(Model::Quartic, 0.0, 1.0, 0.0, 0.0, 0.0, &p).is_err());
    }

    #[test]
    fn vacuum_does_not_accelerate() {
        let g = Grid::default();
        let state = FieldState::at_rest(g, vec![0.0; g.len()]);
        let p = ModelParams::default();
        assert!(acceleration_quartic(&state, &p).iter().all(|a| *a == 0.0));
        assert!(acceleration_sixth(&state, &p).iter().all(|a| *a == 0.0));
    }

    #[test]
    fn equilibria_do_not_accelerate() {
        let p = ModelParams::default();
        for (model, acc) in [
            (
                Model::Quartic,
                acceleration_quartic as fn(&FieldState, &ModelParams) -> Vec<f64>,
            ),
            (Model::Sixth, acceleration_sixth),
        ] {
            let b = base(model);
            let state = FieldState::at_rest(b.grid, b.values.clone());
            let worst = acc(&state, &p).iter().fold(0.0f64, |m, a| m.max(a.abs()));
            assert!(worst < 1e-8, "{model}: {worst}");
        }
    }

    #[test]
    fn lattice_matches_continuum_on_smooth_fields() {
        let g = Grid::new(16.0, 1024).unwrap();
        let p = ModelParams::default();
        let f: Vec<f64> = g
            .nodes()
            .iter()
            .map(|&x| crate::model::kink_profile(x, 1).unwrap())
            .collect();
        let fdot: Vec<f64> = g
            .nodes()
            .iter()
            .map(|&x| 0.2 * (x * std::f64::consts::PI / 16.0).sin())
            .collect();
        let state = FieldState {
            grid: g,
            f,
            fdot,
            t: 0.0,
        };
        for model in [Model::Quartic, Model::Sixth] {
            let lattice = acceleration(model, &state, &p);
            for i in [64, 160, 400] {
                let x = g.x(i);
                let (f, d1, d2) = crate::model::kink_derivatives(x, 1).unwrap();
                let exact = acceleration_pointwise(model, x, f, d1, d2, state.fdot[i], &p).unwrap();
                assert!(
                    (lattice[i] - exact).abs() < 1e-3,
                    "{model} x={x}: {} vs {exact}",
                    lattice[i]
                );
            }
        }
    }

    #[test]
    fn sixth_reduces_to_quartic_bitwise() {
        let p = params_without_sixth();
        let b = base(Model::Quartic);
        let mut state = init_perturbed(&b, 16, 0.1).unwrap();
        for i in 1..b.grid.intervals() {
            state.fdot[i] = 0.01 * (i as f64).cos();
        }
        assert_eq!(
            acceleration_quartic(&state, &p),
            acceleration_sixth(&state, &p)
        );
    }

    #[test]
    fn perturbation_modes() {
        let b = base(Model::Quartic);
        let same = init_perturbed(&b, 16, 0.0).unwrap();
        assert_eq!(same.f, b.values);
        assert!(same.fdot.iter().all(|v| *v == 0.0));
        assert_eq!(
            init_perturbed(&b, 128, 0.1).unwrap_err().category(),
            "invalid-mode"
        );
        assert_eq!(
            init_perturbed(&b, 0, 0.1).unwrap_err().category(),
            "invalid-mode"
        );
        let s = init_perturbed(&b, 16, 0.1).unwrap();
        assert_eq!(s.f[0], b.values[0]);
        assert_eq!(s.f[128], b.values[128]);
    }

    #[test]
    fn static_state_is_a_fixed_point() {
        let p = ModelParams::default();
        let b = base(Model::Quartic);
        let s0 = FieldState::at_rest(b.grid, b.values.clone());
        let s1 = step_rk4(&s0, 1e-2, Model::Quartic, &p).unwrap();
        let diff =
            s0.f.iter()
                .zip(&s1.f)
                .fold(0.0f64, |m, (a, c)| m.max((a - c).abs()));
        assert!(diff < 1e-8);
        assert_eq!(s1.f[0], s0.f[0]);
        assert_eq!(s1.f[128], s0.f[128]);
        assert_eq!(s1.fdot[0], 0.0);
        assert!(step_rk4(&s0, 0.0, Model::Quartic, &p).is_err());
    }

    #[test]
    fn rk4_local_error_is_fifth_order() {
        let p = ModelParams::default();
        let b = base(Model::Quartic);
        let s0 = init_perturbed(&b, 16, 0.1).unwrap();
        let local_error = |dt: f64| {
            let full = step_rk4(&s0, dt, Model::Quartic, &p).unwrap();
            let half = step_rk4(
                &step_rk4(&s0, 0.5 * dt, Model::Quartic, &p).unwrap(),
                0.5 * dt,
                Model::Quartic,
                &p,
            )
            .unwrap();
            full.f
                .iter()
                .chain(&full.fdot)
                .zip(half.f.iter().chain(&half.fdot))
                .fold(0.0f64, |m, (a, c)| m.max((a - c).abs()))
        };
        let ratio = local_error(1e-2) / local_error(5e-3);
        assert!(
            (ratio.log2() - 5.0).abs() < 0.5,
            "observed order {}",
            ratio.log2()
        );
    }

    #[test]
    fn blow_up_is_reported_with_snapshot() {
        let p = ModelParams::default();
        let g = Grid::default();
        let mut f = vec![0.0; g.len()];
        f[64] = 2e3;
        let state = FieldState::at_rest(g, f);
        match step_rk4(&state, 1e-3, Model::Quartic, &p).unwrap_err() {
            SkyrmeError::BlowUp { snapshot, .. } => assert_eq!(*snapshot.unwrap(), state),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_length_run_has_single_snapshot() {
        let p = ModelParams::default();
        let cfg = EvolutionConfig {
            t_end: 0.0,
            snapshot_times: vec![0.0],
            ..EvolutionConfig::new(Model::Quartic, base(Model::Quartic))
        };
        let traj = evolve(&cfg, &p).unwrap();
        assert_eq!(traj.snapshots.len(), 1);
        assert_eq!(
            traj.snapshots[0],
            init_perturbed(&cfg.base_profile, 16, 0.1).unwrap()
        );
        assert_eq!(traj.energy_log.len(), 1);
    }

    #[test]
    fn snapshots_land_on_first_step_past_request() {
        let p = ModelParams::default();
        let cfg = EvolutionConfig {
            dt: 0.03,
            t_end: 0.1,
            snapshot_times: vec![0.0, 0.05, 0.1],
            ..EvolutionConfig::new(Model::Quartic, base(Model::Quartic))
        };
        let traj = evolve(&cfg, &p).unwrap();
        let times: Vec<f64> = traj.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(times.len(), 3);
        assert_relative_eq!(times[1], 0.06, max_relative = 1e-12);
        assert_relative_eq!(times[2], 0.12, max_relative = 1e-12);
    }

    #[test]
    fn invalid_configs_rejected() {
        let b = base(Model::Quartic);
        let mut cfg = EvolutionConfig::new(Model::Quartic, b);
        cfg.t_end = 100.0;
        assert!(cfg.validate().is_err(), "snapshot at 500 beyond t_end");
        cfg.snapshot_times = vec![0.0, 50.0];
        cfg.validate().unwrap();
        cfg.dt = -1.0;
        assert!(cfg.validate().is_err());
        cfg.dt = 1e-3;
        cfg.perturb_mode = 128;
        assert_eq!(cfg.validate().unwrap_err().category(), "invalid-mode");
    }

    #[test]
    fn short_runs_conserve_energy() {
        let p = ModelParams::default();
        for model in [Model::Quartic, Model::Sixth] {
            let traj = evolve(&short_config(model, 5.0), &p).unwrap();
            assert!(traj.relative_energy_drift(5.0) < 1e-6, "{model}");
        }
    }

    #[test]
    fn time_reversal_returns_initial_field() {
        let p = ModelParams::default();
        let cfg = short_config(Model::Quartic, 5.0);
        let forward = evolve(&cfg, &p).unwrap();
        let mut turned = forward.snapshots.last().unwrap().clone();
        turned.fdot.iter_mut().for_each(|v| *v = -*v);
        let back = evolve_from(turned, &cfg, &p).unwrap();
        let end = back.snapshots.last().unwrap();
        let start = &forward.snapshots[0];
        let diff = end
            .f
            .iter()
            .zip(&start.f)
            .fold(0.0f64, |m, (a, c)| m.max((a - c).abs()));
        assert!(diff < 1e-6, "{diff}");
        assert_relative_eq!(end.t, 10.0, max_relative = 1e-12);
    }

    #[test]
    fn halving_dt_changes_little() {
        let p = ModelParams::default();
        let cfg = short_config(Model::Quartic, 10.0);
        let coarse = evolve(&cfg, &p).unwrap();
        let fine = evolve(&EvolutionConfig { dt: 5e-4, ..cfg }, &p).unwrap();
        let (a, b) = (
            coarse.snapshots.last().unwrap(),
            fine.snapshots.last().unwrap(),
        );
        let diff =
            a.f.iter()
                .zip(&b.f)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(diff < 1e-6, "{diff}");
    }

    #[test]
    fn sixth_trajectory_reduces_to_quartic_bitwise() {
        let p = params_without_sixth();
        let b = equilibrium_profile(Model::Quartic, 1, &Grid::default(), &p).unwrap();
        let cfg = EvolutionConfig {
            t_end: 2.0,
            snapshot_times: vec![0.0, 1.0, 2.0],
            ..EvolutionConfig::new(Model::Quartic, b)
        };
        let q = evolve(&cfg, &p).unwrap();
        let s = evolve(
            &EvolutionConfig {
                model: Model::Sixth,
                ..cfg
            },
            &p,
        )
        .unwrap();
        assert_eq!(q.snapshots, s.snapshots);
        assert_eq!(q.energy_log, s.energy_log);
    }
}
