//! Run configuration: `key = value` documents overridden by command-line flags.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::dynamics::Model;
use crate::energy::M4Reading;
use crate::error::{Result, SkyrmeError};
use crate::grid::{Grid, DEFAULT_INTERVALS, DEFAULT_LENGTH};
use crate::model::{derive_dimensionless, ModelParams, PhysicalConstants, SbVariant};

pub const KEYS: [&str; 21] = [
    "L",
    "N",
    "dt",
    "t_end",
    "j",
    "A",
    "model",
    "variant",
    "k",
    "n",
    "out",
    "m_pi",
    "e",
    "F_pi",
    "epsilon",
    "eps6_sq",
    "snapshots",
    "modes",
    "sample_interval",
    "m4_reading",
    "input",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Static,
    MassTable,
    CompareKink,
    Evolve,
    Spectrum,
}

impl Command {
    pub fn tag(self) -> &'static str {
        match self {
            Command::Static => "static",
            Command::MassTable => "mass-table",
            Command::CompareKink => "compare-kink",
            Command::Evolve => "evolve",
            Command::Spectrum => "spectrum",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Command {
    type Err = SkyrmeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(Command::Static),
            "mass-table" => Ok(Command::MassTable),
            "compare-kink" => Ok(Command::CompareKink),
            "evolve" => Ok(Command::Evolve),
            "spectrum" => Ok(Command::Spectrum),
            other => Err(SkyrmeError::Validation(format!(
                "unknown command `{other}`"
            ))),
        }
    }
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub grid: Grid,
    pub dt: f64,
    pub t_end: f64,
    pub j: usize,
    pub amplitude: f64,
    pub model: Model,
    pub variant: SbVariant,
    pub k: u32,
    pub n: u32,
    pub out: PathBuf,
    pub params: ModelParams,
    pub snapshots: Vec<f64>,
    pub modes: Vec<usize>,
    pub sample_interval: usize,
    pub m4_reading: M4Reading,
    pub input: Option<PathBuf>,
}

impl RunConfig {
    pub fn defaults(command: Command) -> RunConfig {
        parse_config(command, "", &[]).expect("defaults are valid")
    }

    /// `key = value` lines reproducing this configuration.
    pub fn echo(&self) -> Vec<(String, String)> {
        let c = self.params.constants();
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut out = vec![
            ("L".to_string(), self.grid.length().to_string()),
            ("N".into(), self.grid.intervals().to_string()),
            ("dt".into(), self.dt.to_string()),
            ("t_end".into(), self.t_end.to_string()),
            ("j".into(), self.j.to_string()),
            ("A".into(), self.amplitude.to_string()),
            ("model".into(), self.model.to_string()),
            ("variant".into(), self.variant.to_string()),
            ("k".into(), self.k.to_string()),
            ("n".into(), self.n.to_string()),
            ("m_pi".into(), c.m_pi.to_string()),
            ("e".into(), c.e.to_string()),
            ("F_pi".into(), c.f_pi.to_string()),
            ("epsilon".into(), c.epsilon.to_string()),
            ("eps6_sq".into(), c.eps6_sq.to_string()),
            ("snapshots".into(), list(&self.snapshots)),
            (
                "modes".into(),
                self.modes
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("sample_interval".into(), self.sample_interval.to_string()),
            ("m4_reading".into(), self.m4_reading.to_string()),
        ];
        if let Some(input) = &self.input {
            out.push(("input".into(), input.display().to_string()));
        }
        out
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str, line: Option<usize>) -> Result<T> {
    raw.parse().map_err(|_| {
        let message = format!("`{key}`: cannot parse `{raw}`");
        match line {
            Some(line) => SkyrmeError::Parse { line, message },
            None => SkyrmeError::Validation(message),
        }
    })
}

fn parse_list<T: FromStr>(key: &str, raw: &str, line: Option<usize>) -> Result<Vec<T>> {
    if raw.trim().is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|item| parse_value(key, item.trim(), line))
        .collect()
}

#[derive(Default)]
struct Raw {
    values: Vec<(String, String, Option<usize>)>,
}

impl Raw {
    fn set(&mut self, key: &str, value: &str, line: Option<usize>) -> Result<()> {
        if !KEYS.contains(&key) {
            let message = format!("unknown key `{key}`");
            return Err(match line {
                Some(line) => SkyrmeError::Parse { line, message },
                None => SkyrmeError::Validation(message),
            });
        }
        self.values.retain(|(k, _, _)| k != key);
        self.values.push((key.to_string(), value.to_string(), line));
        Ok(())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.values.iter().find(|(k, _, _)| k == key) {
            Some((_, v, line)) => parse_value(key, v, *line).map(Some),
            None => Ok(None),
        }
    }

    fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.values.iter().find(|(k, _, _)| k == key) {
            Some((_, v, line)) => parse_list(key, v, *line).map(Some),
            None => Ok(None),
        }
    }
}

fn invalid(constraint: String) -> SkyrmeError {
    SkyrmeError::Validation(constraint)
}

/// Parse a configuration document and apply flag overrides (flags win).
///
/// Document lines are `key = value`; `#` starts a comment. Lists are comma
/// separated. Everything is validated before returning.
pub fn parse_config(command: Command, text: &str, flags: &[(String, String)]) -> Result<RunConfig> {
    let mut raw = Raw::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| SkyrmeError::Parse {
            line: line_no,
            message: format!("expected `key = value`, found `{content}`"),
        })?;
        raw.set(key.trim(), value.trim(), Some(line_no))?;
    }
    for (key, value) in flags {
        raw.set(key, value, None)?;
    }

    let length = raw.get("L")?.unwrap_or(DEFAULT_LENGTH);
    let intervals = raw.get("N")?.unwrap_or(DEFAULT_INTERVALS);
    let grid = Grid::new(length, intervals).map_err(|e| invalid(format!("grid: {e}")))?;

    let model: Model = raw.get("model")?.unwrap_or(Model::Quartic);
    let dt: f64 = raw.get("dt")?.unwrap_or(1e-3);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("dt must be > 0, got {dt}")));
    }
    let default_t_end = match model {
        Model::Quartic => 500.0,
        Model::Sixth => 300.0,
    };
    let t_end: f64 = raw.get("t_end")?.unwrap_or(default_t_end);
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(invalid(format!("t_end must be >= 0, got {t_end}")));
    }
    let max_mode = intervals - 1;
    let j: usize = raw.get("j")?.unwrap_or(16);
    if j == 0 || j > max_mode {
        return Err(invalid(format!("j must be in 1..={max_mode}, got {j}")));
    }
    let amplitude: f64 = raw.get("A")?.unwrap_or(0.1);
    if !amplitude.is_finite() {
        return Err(invalid("A must be finite".into()));
    }
    let k: u32 = raw.get("k")?.unwrap_or(1);
    if k == 0 {
        return Err(invalid("k must be >= 1".into()));
    }
    let n: u32 = raw.get("n")?.unwrap_or(1);
    if n > 4 {
        return Err(invalid(format!("n must be in 0..=4, got {n}")));
    }
    let defaults = PhysicalConstants::default();
    let constants = PhysicalConstants {
        m_pi: raw.get("m_pi")?.unwrap_or(defaults.m_pi),
        e: raw.get("e")?.unwrap_or(defaults.e),
        f_pi: raw.get("F_pi")?.unwrap_or(defaults.f_pi),
        epsilon: raw.get("epsilon")?.unwrap_or(defaults.epsilon),
        eps6_sq: raw.get("eps6_sq")?.unwrap_or(defaults.eps6_sq),
    };
    let params = derive_dimensionless(&constants).map_err(|e| invalid(e.to_string()))?;

    let snapshots = match raw.get_list::<f64>("snapshots")? {
        Some(list) => {
            if let Some(t) = list.iter().find(|t| !(**t >= 0.0 && **t <= t_end)) {
                return Err(invalid(format!(
                    "snapshot time {t} outside [0, t_end = {t_end}]"
                )));
            }
            if list.windows(2).any(|w| w[1] <= w[0]) {
                return Err(invalid("snapshot times must be strictly increasing".into()));
            }
            list
        }
        None => {
            let defaults: &[f64] = match model {
                Model::Quartic => &[0.0, 100.0, 200.0, 300.0, 500.0],
                Model::Sixth => &[0.0, 100.0, 200.0, 300.0],
            };
            defaults.iter().copied().filter(|t| *t <= t_end).collect()
        }
    };
    let modes = match raw.get_list::<usize>("modes")? {
        Some(list) => list,
        None => match model {
            Model::Quartic => vec![8, 16, 32],
            Model::Sixth => vec![8, 16, 64, 127],
        }
        .into_iter()
        .filter(|&m| m <= max_mode)
        .collect(),
    };
    if let Some(m) = modes.iter().find(|&&m| m == 0 || m > max_mode) {
        return Err(invalid(format!("mode {m} outside 1..={max_mode}")));
    }
    let sample_interval: usize = raw.get("sample_interval")?.unwrap_or(500);
    if sample_interval == 0 {
        return Err(invalid("sample_interval must be >= 1 step".into()));
    }

    Ok(RunConfig {
        command,
        grid,
        dt,
        t_end,
        j,
        amplitude,
        model,
        variant: raw.get("variant")?.unwrap_or(SbVariant::None),
        k,
        n,
        out: raw
            .get::<PathBuf>("out")?
            .unwrap_or_else(|| PathBuf::from("out")),
        params,
        snapshots,
        modes,
        sample_interval,
        m4_reading: raw.get("m4_reading")?.unwrap_or_default(),
        input: raw.get("input")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flag(k: &str, v: &str) -> (String, String) {
        (k.to_string(), v.to_string())
    }

    #[test]
    fn empty_input_gives_defaults() {
        let c = parse_config(Command::Evolve, "", &[]).unwrap();
        assert_eq!(c.grid, Grid::default());
        assert_eq!((c.j, c.amplitude, c.dt, c.t_end), (16, 0.1, 1e-3, 500.0));
        assert_eq!(c.params, ModelParams::default());
        assert_eq!(c.snapshots, vec![0.0, 100.0, 200.0, 300.0, 500.0]);
        assert_eq!(c.modes, vec![8, 16, 32]);
        assert_eq!(c.model, Model::Quartic);
    }

    #[test]
    fn sixth_model_defaults() {
        let c = parse_config(Command::Evolve, "model = sixth\n", &[]).unwrap();
        assert_eq!(c.t_end, 300.0);
        assert_eq!(c.snapshots, vec![0.0, 100.0, 200.0, 300.0]);
        assert_eq!(c.modes, vec![8, 16, 64, 127]);
    }

    #[test]
    fn flags_override_file() {
        let c = parse_config(Command::Static, "N=64\n", &[flag("N", "128")]).unwrap();
        assert_eq!(c.grid.intervals(), 128);
        let c = parse_config(Command::Static, "N = 64 # coarse\n", &[]).unwrap();
        assert_eq!(c.grid.intervals(), 64);
    }

    #[test]
    fn mode_range_enforced() {
        let err = parse_config(Command::Evolve, "j=200\n", &[]).unwrap_err();
        assert_eq!(err.category(), "validation");
        assert!(err.to_string().contains("1..=127"));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        match parse_config(Command::Static, "L = 16\n\nthis is wrong\n", &[]).unwrap_err() {
            SkyrmeError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_config(Command::Static, "N = many\n", &[]).unwrap_err() {
            SkyrmeError::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        assert_eq!(
            parse_config(Command::Static, "seed = 4\n", &[])
                .unwrap_err()
                .category(),
            "parse"
        );
        assert_eq!(
            parse_config(Command::Static, "", &[flag("seed", "4")])
                .unwrap_err()
                .category(),
            "validation"
        );
    }

    #[test]
    fn zero_length_run_keeps_initial_snapshot_only() {
        let c = parse_config(Command::Evolve, "t_end = 0\n", &[]).unwrap();
        assert_eq!(c.snapshots, vec![0.0]);
        assert!(parse_config(Command::Evolve, "t_end = 10\nsnapshots = 0, 20\n", &[]).is_err());
    }

    #[test]
    fn invalid_values_rejected() {
        for doc in [
            "N = 8",
            "L = -1",
            "dt = 0",
            "k = 0",
            "e = 0",
            "sample_interval = 0",
            "modes = 0,3",
        ] {
            assert_eq!(
                parse_config(Command::Evolve, doc, &[])
                    .unwrap_err()
                    .category(),
                "validation",
                "{doc}"
            );
        }
    }

    #[test]
    fn echo_round_trips() {
        let c = parse_config(
            Command::Evolve,
            "model = sixth\nA = 0.05\nmodes = 3,4\n",
            &[],
        )
        .unwrap();
        let doc: String = c
            .echo()
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        assert_eq!(parse_config(Command::Evolve, &doc, &[]).unwrap(), c);
    }
}
