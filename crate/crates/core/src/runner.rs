//! Command execution and data-file emission.
//!
//! Every command writes plain-text tables (see [`crate::io`]) under the
//! configured output directory. Data files contain no timestamps, so identical
//! configurations produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{Command, RunConfig};
use crate::dynamics::{
    equilibrium_profile, evolve, EvolutionConfig, FieldState, Model, Trajectory,
};
use crate::energy::{M4Reading, MassBreakdown};
use crate::error::{Result, SkyrmeError};
use crate::grid::Grid;
use crate::io::{fmt_f64, DataTable};
use crate::model::{kink_profile, ModelParams, SbVariant, StaticEquationSpec};
use crate::spectral::{broadband_series, broadband_table, mode_amplitudes, spectra, ModeHistory};
use crate::static_solver::{
    kink_comparison, kink_mismatch_norms, solve_static, KinkComparisonRow, Profile,
};

/// Files written by a command plus human-readable summary lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

impl RunReport {
    fn write(&mut self, table: &DataTable, path: PathBuf) -> Result<()> {
        table
            .write(&path)
            .map_err(|e| e.annotate(format!("writing {}", path.display())))?;
        self.files.push(path);
        Ok(())
    }
}

pub fn run(config: &RunConfig) -> Result<RunReport> {
    fs::create_dir_all(&config.out)
        .map_err(|e| SkyrmeError::from(e).annotate(format!("creating {}", config.out.display())))?;
    match config.command {
        Command::Static => run_static(config),
        Command::MassTable => run_mass_table(config),
        Command::CompareKink => run_compare_kink(config),
        Command::Evolve => run_evolution_suite(config),
        Command::Spectrum => run_spectrum(config),
    }
}

fn with_echo(mut table: DataTable, config: &RunConfig) -> DataTable {
    for (k, v) in config.echo() {
        table.push_meta(&format!("config.{k}"), v);
    }
    table
}

fn static_spec(config: &RunConfig) -> Result<StaticEquationSpec> {
    match config.model {
        Model::Sixth if config.k != 1 => Err(SkyrmeError::Validation(
            "the sixth-order model is only available for k = 1".into(),
        )),
        Model::Sixth => Ok(StaticEquationSpec::sixth_order(config.n, config.variant)),
        Model::Quartic => StaticEquationSpec::new(config.k, config.n, config.variant),
    }
}

fn solve(spec: &StaticEquationSpec, grid: &Grid, params: &ModelParams) -> Result<Profile> {
    if spec.n() == 0 {
        let vacuum = Profile::from_values(
            *grid,
            vec![0.0; grid.len()],
            *spec,
            crate::static_solver::Discretization::Collocation,
            params,
        )?;
        return solve_static(spec, grid, params, Some(&vacuum));
    }
    solve_static(spec, grid, params, None)
}

/// Solve the configured static equation; also reports the change under `N -> 2N`.
pub fn run_static(config: &RunConfig) -> Result<RunReport> {
    let spec = static_spec(config)?;
    let profile = solve(&spec, &config.grid, &config.params)
        .map_err(|e| e.annotate(format!("solving {spec}")))?;
    let fine = solve(&spec, &config.grid.refined(), &config.params)
        .map_err(|e| e.annotate(format!("solving {spec} on the refined grid")))?;
    let change = profile
        .values
        .iter()
        .enumerate()
        .fold(0.0f64, |m, (i, v)| m.max((v - fine.values[2 * i]).abs()));
    let masses =
        MassBreakdown::evaluate(&profile.grid, &profile.values, spec.k(), config.m4_reading)?;

    let mut table = profile.to_table();
    table.push_meta("refinement_change", fmt_f64(change));
    table.push_meta("m2", fmt_f64(masses.m2));
    table.push_meta("m4", fmt_f64(masses.m4));
    let table = with_echo(table, config);

    let mut report = RunReport::default();
    let name = format!(
        "profile_k{}_n{}_{}{}.dat",
        spec.k(),
        spec.n(),
        spec.sb(),
        if spec.is_sixth_order() { "_sixth" } else { "" }
    );
    report.write(&table, config.out.join(name))?;
    report.summary.push(format!(
        "{spec}: residual {:.3e}, {} iterations, refinement change {:.3e}, mass {:.4}",
        profile.residual_norm, profile.iterations, change, masses.total
    ));
    let violations = profile.monotonicity_violations();
    if !violations.is_empty() {
        report.summary.push(format!(
            "warning: profile increases after nodes {violations:?}"
        ));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassRow {
    pub case: &'static str,
    pub k: u32,
    pub n: u32,
    pub variant: SbVariant,
    /// `kink` or `solved`.
    pub source: &'static str,
    pub masses: MassBreakdown,
}

struct MassCase {
    case: &'static str,
    k: u32,
    n: u32,
    variant: SbVariant,
    solved: bool,
}

const MASS_CASES: [MassCase; 4] = [
    MassCase {
        case: "a",
        k: 1,
        n: 2,
        variant: SbVariant::None,
        solved: false,
    },
    MassCase {
        case: "b",
        k: 2,
        n: 1,
        variant: SbVariant::None,
        solved: false,
    },
    MassCase {
        case: "c",
        k: 2,
        n: 1,
        variant: SbVariant::PionMass,
        solved: true,
    },
    MassCase {
        case: "d",
        k: 2,
        n: 1,
        variant: SbVariant::Modified,
        solved: true,
    },
];

fn mass_row(
    case: &MassCase,
    grid: &Grid,
    params: &ModelParams,
    reading: M4Reading,
) -> Result<MassRow> {
    let values = if case.solved {
        let spec = StaticEquationSpec::new(case.k, case.n, case.variant)?;
        solve_static(&spec, grid, params, None)?.values
    } else {
        grid.nodes()
            .into_iter()
            .map(|x| kink_profile(x, case.n))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(MassRow {
        case: case.case,
        k: case.k,
        n: case.n,
        variant: case.variant,
        source: if case.solved { "solved" } else { "kink" },
        masses: MassBreakdown::evaluate(grid, &values, case.k, reading)?,
    })
}

/// Cases a-d, evaluated concurrently and returned in order.
pub fn mass_table(grid: &Grid, params: &ModelParams, reading: M4Reading) -> Result<Vec<MassRow>> {
    let results: Vec<Result<MassRow>> = std::thread::scope(|scope| {
        let handles: Vec<_> = MASS_CASES
            .iter()
            .map(|case| scope.spawn(move || mass_row(case, grid, params, reading)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("mass-table worker panicked"))
            .collect()
    });
    results
        .into_iter()
        .zip(&MASS_CASES)
        .map(|(r, case)| r.map_err(|e| e.annotate(format!("mass-table case {}", case.case))))
        .collect()
}

pub fn mass_table_data(rows: &[MassRow], reading: M4Reading) -> DataTable {
    let mut t = DataTable::new(
        "B=2 masses in units of pi F_pi / e",
        &["case", "k", "n", "variant", "source", "m2", "m4", "total"],
    )
    .with_meta("m4_reading", reading);
    for r in rows {
        t.push_row(vec![
            r.case.to_string(),
            r.k.to_string(),
            r.n.to_string(),
            r.variant.to_string(),
            r.source.to_string(),
            fmt_f64(r.masses.m2),
            fmt_f64(r.masses.m4),
            fmt_f64(r.masses.total),
        ]);
    }
    t
}

pub fn run_mass_table(config: &RunConfig) -> Result<RunReport> {
    let rows = mass_table(&config.grid, &config.params, config.m4_reading)?;
    let table = with_echo(mass_table_data(&rows, config.m4_reading), config);
    let mut report = RunReport::default();
    report.write(
        &table,
        config
            .out
            .join(format!("mass_table_{}.dat", config.m4_reading)),
    )?;
    for r in &rows {
        report.summary.push(format!(
            "{}: k={} n={} {} ({}) total {:.3} (m2 {:.3}, m4 {:.3})",
            r.case, r.k, r.n, r.variant, r.source, r.masses.total, r.masses.m2, r.masses.m4
        ));
    }
    Ok(report)
}

pub fn kink_comparison_data(rows: &[KinkComparisonRow], grid: &Grid) -> DataTable {
    let (modified, pionmass) = kink_mismatch_norms(rows, 0.5, grid.length(), grid.spacing());
    let mut t = DataTable::new(
        "kink residual comparison",
        &["x", "lhs_kink", "rhs_pionmass", "rhs_modified"],
    )
    .with_meta("norm_lhs_minus_modified", fmt_f64(modified))
    .with_meta("norm_lhs_minus_pionmass", fmt_f64(pionmass));
    for r in rows {
        t.push_numeric_row(&[r.x, r.lhs_kink, r.rhs_pionmass, r.rhs_modified]);
    }
    t
}

pub fn run_compare_kink(config: &RunConfig) -> Result<RunReport> {
    let rows = kink_comparison(&config.grid, &config.params)?;
    let table = with_echo(kink_comparison_data(&rows, &config.grid), config);
    let (modified, pionmass) =
        kink_mismatch_norms(&rows, 0.5, config.grid.length(), config.grid.spacing());
    let mut report = RunReport::default();
    report.write(&table, config.out.join("kink_comparison.dat"))?;
    report.summary.push(format!(
        "||lhs - rhs_modified|| = {modified:.6}, ||lhs - rhs_pionmass|| = {pionmass:.6}"
    ));
    Ok(report)
}

/// In-memory results of an evolution run.
#[derive(Debug, Clone)]
pub struct EvolutionOutput {
    pub base: Profile,
    pub trajectory: Trajectory,
    pub histories: Vec<ModeHistory>,
    /// `(t, sum_{j != perturbed} |A_j|)` for every dense sample.
    pub broadband: Vec<(f64, f64)>,
}

pub fn evolution_config(config: &RunConfig, base: Profile) -> EvolutionConfig {
    EvolutionConfig {
        dt: config.dt,
        t_end: config.t_end,
        snapshot_times: config.snapshots.clone(),
        perturb_mode: config.j,
        perturb_amp: config.amplitude,
        sample_interval: config.sample_interval,
        ..EvolutionConfig::new(config.model, base)
    }
}

/// Solve the equilibrium, perturb, evolve and decompose, without writing files.
pub fn evolution_suite(config: &RunConfig) -> Result<EvolutionOutput> {
    let base = equilibrium_profile(config.model, config.n, &config.grid, &config.params)
        .map_err(|e| e.annotate("solving the base profile"))?;
    let trajectory = evolve(&evolution_config(config, base.clone()), &config.params)?;
    finish_suite(config, base, trajectory)
}

fn finish_suite(
    config: &RunConfig,
    base: Profile,
    trajectory: Trajectory,
) -> Result<EvolutionOutput> {
    let all = spectra(&trajectory, &base)?;
    let histories = config
        .modes
        .iter()
        .map(|&j| ModeHistory {
            j,
            series: all.iter().map(|s| (s.t, s.amplitudes[j - 1])).collect(),
        })
        .collect();
    Ok(EvolutionOutput {
        broadband: broadband_series(&all, config.j),
        base,
        trajectory,
        histories,
    })
}

pub fn run_tag(config: &RunConfig) -> String {
    format!(
        "{}_j{}_A{}_dt{}",
        config.model, config.j, config.amplitude, config.dt
    )
}

fn snapshot_table(
    state: &FieldState,
    base: &Profile,
    requested: f64,
    config: &RunConfig,
) -> DataTable {
    let mut t = DataTable::new("field snapshot", &["x", "F", "dF", "Fdot"])
        .with_meta("t", fmt_f64(state.t))
        .with_meta("t_requested", requested)
        .with_meta("L", fmt_f64(state.grid.length()))
        .with_meta("N", state.grid.intervals());
    for i in 0..state.grid.len() {
        t.push_numeric_row(&[
            state.grid.x(i),
            state.f[i],
            state.f[i] - base.values[i],
            state.fdot[i],
        ]);
    }
    with_echo(t, config)
}

struct Manifest {
    path: PathBuf,
    lines: Vec<String>,
}

impl Manifest {
    fn record(&mut self, line: String) -> Result<()> {
        self.lines.push(line);
        fs::write(&self.path, self.lines.join("\n") + "\n")?;
        Ok(())
    }
}

/// Full evolution suite: base profile, snapshots, energy log, mode histories
/// and the broadband series. A manifest lists every completed step, so partial
/// outputs remain interpretable after a failure.
pub fn run_evolution_suite(config: &RunConfig) -> Result<RunReport> {
    let tag = run_tag(config);
    let mut manifest = Manifest {
        path: config.out.join(format!("manifest_{tag}.txt")),
        lines: vec![format!("# evolution run {tag}")],
    };
    let mut report = RunReport::default();

    let base = match equilibrium_profile(config.model, config.n, &config.grid, &config.params) {
        Ok(b) => b,
        Err(e) => {
            manifest.record(format!("failed base_profile: {e}"))?;
            return Err(e.annotate("solving the base profile"));
        }
    };
    report.write(
        &with_echo(base.to_table(), config),
        config.out.join(format!("base_{tag}.dat")),
    )?;
    manifest.record(format!(
        "done base_profile residual={:.3e}",
        base.residual_norm
    ))?;

    let trajectory = match evolve(&evolution_config(config, base.clone()), &config.params) {
        Ok(t) => t,
        Err(e) => {
            if let SkyrmeError::BlowUp {
                snapshot: Some(state),
                ..
            } = &e
            {
                let path = config.out.join(format!("blowup_{tag}.dat"));
                report.write(&snapshot_table(state, &base, state.t, config), path)?;
            }
            manifest.record(format!("failed evolve: {e}"))?;
            return Err(e);
        }
    };
    manifest.record(format!(
        "done evolve steps={}",
        trajectory.config.total_steps()
    ))?;

    for (state, requested) in trajectory.snapshots.iter().zip(&config.snapshots) {
        let path = config.out.join(format!("snapshot_{tag}_t{requested}.dat"));
        report.write(&snapshot_table(state, &base, *requested, config), path)?;
    }
    let mut energy = DataTable::new("energy log", &["t", "H"]);
    for &(t, h) in &trajectory.energy_log {
        energy.push_numeric_row(&[t, h]);
    }
    report.write(
        &with_echo(energy, config),
        config.out.join(format!("energy_{tag}.dat")),
    )?;
    manifest.record(format!(
        "done snapshots count={}",
        trajectory.snapshots.len()
    ))?;

    let output = finish_suite(config, base, trajectory)?;
    for h in &output.histories {
        report.write(
            &with_echo(h.to_table(), config),
            config.out.join(format!("mode_{tag}_m{}.dat", h.j)),
        )?;
    }
    report.write(
        &with_echo(broadband_table(&output.broadband, config.j), config),
        config.out.join(format!("broadband_{tag}.dat")),
    )?;
    manifest.record(format!("done mode_histories modes={:?}", config.modes))?;

    report.files.push(manifest.path.clone());
    report.summary.push(format!(
        "{tag}: {} snapshots, relative energy drift {:.3e}",
        output.trajectory.snapshots.len(),
        output.trajectory.relative_energy_drift(config.t_end)
    ));
    Ok(report)
}

/// Sine spectrum of the `dF` column of a snapshot file.
pub fn run_spectrum(config: &RunConfig) -> Result<RunReport> {
    let input = config.input.as_ref().ok_or_else(|| {
        SkyrmeError::Validation("spectrum needs `input` (a snapshot file)".into())
    })?;
    let snapshot =
        DataTable::read(input).map_err(|e| e.annotate(format!("reading {}", input.display())))?;
    let grid = Grid::new(snapshot.meta_f64("L")?, snapshot.meta_f64("N")? as usize)?;
    let delta = snapshot.column_f64("dF")?;
    if delta.len() != grid.len() {
        return Err(SkyrmeError::IncompatibleGrid(format!(
            "{} rows for a grid of {} nodes",
            delta.len(),
            grid.len()
        )));
    }
    let spectrum = mode_amplitudes(&delta, &grid)?;
    let t = snapshot.meta_f64("t")?;
    let mut table = DataTable::new("sine spectrum", &["j", "A"]).with_meta("t", fmt_f64(t));
    for (idx, a) in spectrum.amplitudes.iter().enumerate() {
        table.push_row(vec![(idx + 1).to_string(), fmt_f64(*a)]);
    }
    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("snapshot");
    let mut report = RunReport::default();
    report.write(&table, config.out.join(format!("spectrum_{stem}.dat")))?;
    let (j_max, a_max) =
        spectrum
            .amplitudes
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (i, a)| {
                if a.abs() > best.1 {
                    (i + 1, a.abs())
                } else {
                    best
                }
            });
    report.summary.push(format!(
        "t = {t}: largest mode j={j_max} with |A| = {a_max:.4e}"
    ));
    Ok(report)
}

/// Reads back any file written by this module.
pub fn read_table(path: &Path) -> Result<DataTable> {
    DataTable::read(path)
}
