//! Sine-mode decomposition of fluctuations `dF = F - F_static`.
//!
//! On a grid of `N` intervals the modes `sin(j pi i / N)`, `j = 1..N-1`, are
//! orthogonal over the interior nodes, so
//! `A_j = (2/N) sum_{i=1}^{N-1} dF_i sin(j pi i / N)` inverts
//! `dF_i = sum_j A_j sin(j pi i / N)` exactly.

use crate::dynamics::{sine_index, FieldState, Trajectory};
use crate::error::{Result, SkyrmeError};
use crate::grid::Grid;
use crate::io::{fmt_f64, DataTable};
use crate::static_solver::Profile;

/// Boundary values of a fluctuation must vanish to this tolerance.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    pub t: f64,
    /// `amplitudes[j - 1] = A_j` for `j = 1..N-1`.
    pub amplitudes: Vec<f64>,
}

impl ModeSpectrum {
    pub fn amplitude(&self, j: usize) -> Result<f64> {
        if j == 0 || j > self.amplitudes.len() {
            return Err(SkyrmeError::InvalidMode {
                j,
                max: self.amplitudes.len(),
            });
        }
        Ok(self.amplitudes[j - 1])
    }

    /// `sum_{j != excluded} |A_j|`.
    pub fn broadband(&self, excluded: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx + 1 != excluded)
            .map(|(_, a)| a.abs())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeHistory {
    pub j: usize,
    pub series: Vec<(f64, f64)>,
}

impl ModeHistory {
    /// Mean of `|A_j|` over samples with `t` in `[t0, t1]`.
    pub fn mean_abs(&self, t0: f64, t1: f64) -> f64 {
        window_mean(self.series.iter().copied(), t0, t1)
    }

    pub fn to_table(&self) -> DataTable {
        let mut t = DataTable::new("mode history", &["t", "A"]).with_meta("j", self.j);
        for &(time, a) in &self.series {
            t.push_numeric_row(&[time, a]);
        }
        t
    }
}

pub(crate) fn window_mean(series: impl Iterator<Item = (f64, f64)>, t0: f64, t1: f64) -> f64 {
    let (sum, count) = series
        .filter(|(t, _)| *t >= t0 - 1e-9 && *t <= t1 + 1e-9)
        .fold((0.0, 0usize), |(s, c), (_, a)| (s + a.abs(), c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

/// Table of `sin(pi m / N)` for `m = 0..2N`.
#[derive(Debug, Clone)]
pub struct SineBasis {
    n: usize,
    table: Vec<f64>,
}

impl SineBasis {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.intervals();
        SineBasis {
            n,
            table: (0..2 * n).map(|m| sine_index(m, n)).collect(),
        }
    }

    #[inline]
    fn sin(&self, j: usize, i: usize) -> f64 {
        self.table[(j * i) % (2 * self.n)]
    }

    pub fn forward(&self, delta: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if delta.len() != n + 1 {
            return Err(SkyrmeError::IncompatibleGrid(format!(
                "{} values for a grid of {} nodes",
                delta.len(),
                n + 1
            )));
        }
        let edge = delta[0].abs().max(delta[n].abs());
        if !(edge <= BOUNDARY_TOLERANCE) {
            return Err(SkyrmeError::InvalidFluctuation { value: edge });
        }
        let scale = 2.0 / n as f64;
        Ok((1..n)
            .map(|j| scale * (1..n).map(|i| delta[i] * self.sin(j, i)).sum::<f64>())
            .collect())
    }

    pub fn inverse(&self, amplitudes: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n + 1];
        for (i, v) in out.iter_mut().enumerate().take(n).skip(1) {
            *v = amplitudes
                .iter()
                .enumerate()
                .map(|(idx, a)| a * self.sin(idx + 1, i))
                .sum();
        }
        out
    }
}

pub fn mode_amplitudes(delta: &[f64], grid: &Grid) -> Result<ModeSpectrum> {
    Ok(ModeSpectrum {
        t: 0.0,
        amplitudes: SineBasis::new(grid).forward(delta)?,
    })
}

/// Node values of `sum_j A_j sin(j pi x / L)`; zero at both ends.
pub fn reconstruct(spectrum: &ModeSpectrum, grid: &Grid) -> Result<Vec<f64>> {
    if spectrum.amplitudes.len() + 1 != grid.intervals() {
        return Err(SkyrmeError::IncompatibleGrid(format!(
            "{} amplitudes for a grid of {} intervals",
            spectrum.amplitudes.len(),
            grid.intervals()
        )));
    }
    Ok(SineBasis::new(grid).inverse(&spectrum.amplitudes))
}

/// Spectrum of `state.f - base` stamped with the state's time.
pub fn spectrum_of(state: &FieldState, base: &Profile) -> Result<ModeSpectrum> {
    state.grid.check_same(&base.grid)?;
    let delta: Vec<f64> = state
        .f
        .iter()
        .zip(&base.values)
        .map(|(f, b)| f - b)
        .collect();
    Ok(ModeSpectrum {
        t: state.t,
        amplitudes: SineBasis::new(&base.grid).forward(&delta)?,
    })
}

/// Spectra of every dense sample of the trajectory.
pub fn spectra(trajectory: &Trajectory, base: &Profile) -> Result<Vec<ModeSpectrum>> {
    let basis = SineBasis::new(&base.grid);
    trajectory
        .samples
        .iter()
        .map(|s| {
            s.grid.check_same(&base.grid)?;
            let delta: Vec<f64> = s.f.iter().zip(&base.values).map(|(f, b)| f - b).collect();
            Ok(ModeSpectrum {
                t: s.t,
                amplitudes: basis.forward(&delta)?,
            })
        })
        .collect()
}

/// `A_j(t)` series for the requested modes, one entry per dense sample.
pub fn mode_history(
    trajectory: &Trajectory,
    base: &Profile,
    modes: &[usize],
) -> Result<Vec<ModeHistory>> {
    if modes.is_empty() {
        return Ok(Vec::new());
    }
    let max = base.grid.intervals() - 1;
    if let Some(&j) = modes.iter().find(|&&j| j == 0 || j > max) {
        return Err(SkyrmeError::InvalidMode { j, max });
    }
    let all = spectra(trajectory, base)?;
    Ok(modes
        .iter()
        .map(|&j| ModeHistory {
            j,
            series: all.iter().map(|s| (s.t, s.amplitudes[j - 1])).collect(),
        })
        .collect())
}

/// `(t, sum_{j != excluded} |A_j|)` for each spectrum.
pub fn broadband_series(spectra: &[ModeSpectrum], excluded: usize) -> Vec<(f64, f64)> {
    spectra
        .iter()
        .map(|s| (s.t, s.broadband(excluded)))
        .collect()
}

pub fn broadband_table(series: &[(f64, f64)], excluded: usize) -> DataTable {
    let mut t = DataTable::new("broadband amplitude", &["t", "sum_abs_A"])
        .with_meta("excluded_mode", excluded);
    for &(time, b) in series {
        t.push_row(vec![fmt_f64(time), fmt_f64(b)]);
    }
    t
}
