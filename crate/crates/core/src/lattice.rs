//! Fourth-order lattice energy shared by the time evolution and the
//! variational static discretization.
//!
//! `E = 2h [sum_i w_i (W_i Fdot_i^2 + V_i) + sum_m W(x_m, P_m) Q_m^2]` where nodes
//! run over `1..=N` with weights 1 except `w_N = 1/2`, and `m` over the cell
//! midpoints `x_m = (m + 1/2) h`. `Q_m` is the staggered fourth-order derivative
//! and `P_m` the four-point interpolated field. Beyond both ends the field is
//! continued oddly about its boundary value. The origin node carries no energy
//! since `W` and `V` vanish there.

use crate::grid::Grid;
use crate::model::RadialLagrangian;

/// First column, `24h`-scaled derivative weights and `16`-scaled interpolation
/// weights for midpoint `m`.
fn stencil(m: usize, n: usize) -> (usize, [f64; 4], [f64; 4]) {
    if m == 0 {
        (0, [-25.0, 26.0, -1.0, 0.0], [7.0, 10.0, -1.0, 0.0])
    } else if m + 1 == n {
        (n - 3, [0.0, 1.0, -26.0, 25.0], [0.0, -1.0, 10.0, 7.0])
    } else {
        (m - 1, [1.0, -27.0, 27.0, -1.0], [-1.0, 9.0, 9.0, -1.0])
    }
}

fn weight(i: usize, n: usize) -> f64 {
    if i == n {
        0.5
    } else {
        1.0
    }
}

/// Widest coupling between two rows of the lattice force.
pub(crate) const BANDWIDTH: usize = 3;

/// Reusable buffers for [`Lattice::force`].
#[derive(Debug, Clone)]
pub(crate) struct Lattice {
    q: Vec<f64>,
    p: Vec<f64>,
    grad: Vec<f64>,
    w: Vec<f64>,
    wf: Vec<f64>,
}

impl Lattice {
    pub(crate) fn new(grid: &Grid) -> Self {
        let m = grid.len();
        Lattice {
            q: vec![0.0; m - 1],
            p: vec![0.0; m - 1],
            grad: vec![0.0; m],
            w: vec![0.0; m],
            wf: vec![0.0; m],
        }
    }

    fn midpoints(&mut self, grid: &Grid, f: &[f64]) {
        let n = grid.intervals();
        let scale = 1.0 / (24.0 * grid.spacing());
        for m in 0..n {
            let (start, dq, dp) = stencil(m, n);
            let cols = &f[start..start + 4];
            self.q[m] = scale * dq.iter().zip(cols).map(|(c, v)| c * v).sum::<f64>();
            self.p[m] = dp.iter().zip(cols).map(|(c, v)| c * v).sum::<f64>() / 16.0;
        }
    }

    /// `G_k = -dE_pot/dF_k / (2h)` at interior nodes; boundary entries are zero.
    /// The equation of motion is `2 W_k Fddot_k + W_F,k Fdot_k^2 = G_k`.
    pub(crate) fn force(
        &mut self,
        lag: &RadialLagrangian,
        grid: &Grid,
        f: &[f64],
        out: &mut [f64],
    ) {
        let n = grid.intervals();
        let h = grid.spacing();
        let scale = 1.0 / (24.0 * h);
        self.midpoints(grid, f);
        self.grad.iter_mut().for_each(|v| *v = 0.0);
        for m in 0..n {
            let x = (m as f64 + 0.5) * h;
            let q = self.q[m];
            let via_q = 2.0 * lag.inertia(x, self.p[m]) * q * scale;
            let via_p = lag.inertia_df(x, self.p[m]) * q * q / 16.0;
            let (start, dq, dp) = stencil(m, n);
            for c in 0..4 {
                self.grad[start + c] += via_q * dq[c] + via_p * dp[c];
            }
        }
        out[0] = 0.0;
        out[n] = 0.0;
        for k in 1..n {
            let (w, wf, vf) = lag.node_terms(grid.x(k), f[k]);
            self.w[k] = w;
            self.wf[k] = wf;
            out[k] = -self.grad[k] - vf;
        }
    }

    /// Accelerations from [`Lattice::force`]; boundary entries are zero.
    pub(crate) fn acceleration(
        &mut self,
        lag: &RadialLagrangian,
        grid: &Grid,
        f: &[f64],
        fdot: &[f64],
        out: &mut [f64],
    ) {
        self.force(lag, grid, f, out);
        for k in 1..grid.intervals() {
            out[k] = (out[k] - self.wf[k] * fdot[k] * fdot[k]) / (2.0 * self.w[k]);
        }
    }

    pub(crate) fn energy(
        &mut self,
        lag: &RadialLagrangian,
        grid: &Grid,
        f: &[f64],
        fdot: &[f64],
    ) -> f64 {
        let n = grid.intervals();
        let h = grid.spacing();
        self.midpoints(grid, f);
        let nodes: f64 = (1..=n)
            .map(|i| {
                let x = grid.x(i);
                weight(i, n) * (lag.inertia(x, f[i]) * fdot[i] * fdot[i] + lag.potential(x, f[i]))
            })
            .sum();
        let links: f64 = (0..n)
            .map(|m| lag.inertia((m as f64 + 0.5) * h, self.p[m]) * self.q[m] * self.q[m])
            .sum();
        2.0 * h * (nodes + links)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_stencils_are_fourth_order() {
        let n = 16;
        let grid = Grid::new(2.0, n).unwrap();
        let poly = |x: f64| 0.3 + x - 0.7 * x * x + 0.2 * x.powi(3);
        let dpoly = |x: f64| 1.0 - 1.4 * x + 0.6 * x * x;
        let f: Vec<f64> = grid.nodes().into_iter().map(poly).collect();
        let mut lattice = Lattice::new(&grid);
        lattice.midpoints(&grid, &f);
        for m in 1..n - 1 {
            let x = (m as f64 + 0.5) * grid.spacing();
            assert!((lattice.q[m] - dpoly(x)).abs() < 1e-12, "midpoint {m}");
            assert!((lattice.p[m] - poly(x)).abs() < 1e-12, "midpoint {m}");
        }
    }

    #[test]
    fn end_cells_use_odd_continuation() {
        let n = 16;
        let grid = Grid::new(2.0, n).unwrap();
        let h = grid.spacing();
        for (center, m) in [(0.0, 0), (2.0, n - 1)] {
            let odd = |x: f64| 0.7 + 0.5 * (x - center) - 0.3 * (x - center).powi(3);
            let f: Vec<f64> = grid.nodes().into_iter().map(odd).collect();
            let mut lattice = Lattice::new(&grid);
            lattice.midpoints(&grid, &f);
            let x = (m as f64 + 0.5) * h;
            let s = x - center;
            assert!(
                (lattice.q[m] - (0.5 - 0.9 * s * s)).abs() < 1e-12,
                "midpoint {m}"
            );
            assert!((lattice.p[m] - odd(x)).abs() < 1e-12, "midpoint {m}");
        }
    }

    #[test]
    fn sawtooth_is_not_a_zero_mode() {
        let grid = Grid::new(4.0, 32).unwrap();
        let f: Vec<f64> = (0..grid.len())
            .map(|i| if i % 2 == 0 { 0.0 } else { 1e-3 })
            .collect();
        let mut lattice = Lattice::new(&grid);
        lattice.midpoints(&grid, &f);
        assert!(lattice.q.iter().all(|q| q.abs() > 1e-3));
    }

    #[test]
    fn force_is_the_energy_gradient() {
        let grid = Grid::new(8.0, 32).unwrap();
        let lag = RadialLagrangian::hedgehog(8.4, 1e-3);
        let f: Vec<f64> = grid
            .nodes()
            .into_iter()
            .map(|x| 4.0 * (-x).exp().atan() + 0.05 * (x * (8.0 - x)).sin())
            .collect();
        let zero = vec![0.0; grid.len()];
        let mut lattice = Lattice::new(&grid);
        let mut g = vec![0.0; grid.len()];
        lattice.force(&lag, &grid, &f, &mut g);
        let h = grid.spacing();
        for k in 1..grid.intervals() {
            let step = 1e-6;
            let (mut up, mut down) = (f.clone(), f.clone());
            up[k] += step;
            down[k] -= step;
            let de = (lattice.energy(&lag, &grid, &up, &zero)
                - lattice.energy(&lag, &grid, &down, &zero))
                / (2.0 * step);
            let expected = -de / (2.0 * h);
            assert!(
                (expected - g[k]).abs() < 1e-6 * (1.0 + g[k].abs()),
                "node {k}: {expected} vs {}",
                g[k]
            );
        }
    }
}
