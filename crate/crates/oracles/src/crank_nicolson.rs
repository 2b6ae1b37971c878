//! Crank–Nicolson integration of iħ∂ψ/∂t = −(ħ²/2m)∂²ψ/∂x² + V(x)ψ on a
//! uniform grid with ψ = 0 at both ends.

use num_complex::Complex64;

/// Uniform grid on `[left, right]`, boundary nodes excluded from the unknowns.
#[derive(Debug, Clone)]
pub struct Grid {
    pub left: f64,
    pub dx: f64,
    /// interior node count
    pub nodes: usize,
}

impl Grid {
    pub fn new(left: f64, right: f64, dx: f64) -> Self {
        let nodes = ((right - left) / dx).round() as usize - 1;
        Self { left, dx, nodes }
    }

    pub fn x(&self, j: usize) -> f64 {
        self.left + (j + 1) as f64 * self.dx
    }

    /// Interior node nearest to `x`.
    pub fn index_of(&self, x: f64) -> usize {
        (((x - self.left) / self.dx).round() as usize).saturating_sub(1)
    }
}

pub struct CrankNicolson {
    grid: Grid,
    /// off-diagonal of the implicit operator (constant)
    off: Complex64,
    /// diagonal of the explicit operator
    explicit_diag: Vec<Complex64>,
    /// forward-elimination multipliers and pivots of the implicit operator
    pivots: Vec<Complex64>,
}

impl CrankNicolson {
    /// `kinetic` is ħ²/2m in eV·nm², `hbar` in eV·ps, `dt` in ps.
    pub fn new(grid: Grid, potential: impl Fn(f64) -> f64, kinetic: f64, hbar: f64, dt: f64) -> Self {
        let i = Complex64::i();
        let r = kinetic / (grid.dx * grid.dx);
        let alpha = i * dt / (2.0 * hbar);
        let v: Vec<f64> = (0..grid.nodes).map(|j| potential(grid.x(j))).collect();
        let implicit_diag: Vec<Complex64> = v.iter().map(|&v| 1.0 + alpha * (2.0 * r + v)).collect();
        let explicit_diag = v.iter().map(|&v| 1.0 - alpha * (2.0 * r + v)).collect();
        let off = -alpha * r;
        let mut pivots = Vec::with_capacity(grid.nodes);
        pivots.push(implicit_diag[0]);
        for j in 1..grid.nodes {
            let prev = pivots[j - 1];
            pivots.push(implicit_diag[j] - off * off / prev);
        }
        Self {
            grid,
            off,
            explicit_diag,
            pivots,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// One step in place; `scratch` must have the grid's node count.
    pub fn step(&self, psi: &mut [Complex64], scratch: &mut [Complex64]) {
        let n = psi.len();
        let b = -self.off;
        for j in 0..n {
            let mut rhs = self.explicit_diag[j] * psi[j];
            if j > 0 {
                rhs += b * psi[j - 1];
            }
            if j + 1 < n {
                rhs += b * psi[j + 1];
            }
            scratch[j] = rhs;
        }
        // Thomas algorithm with the precomputed pivots
        for j in 1..n {
            let m = self.off / self.pivots[j - 1];
            let prev = scratch[j - 1];
            scratch[j] -= m * prev;
        }
        psi[n - 1] = scratch[n - 1] / self.pivots[n - 1];
        for j in (0..n - 1).rev() {
            psi[j] = (scratch[j] - self.off * psi[j + 1]) / self.pivots[j];
        }
    }

    /// Evolves `initial` to each of the (increasing) `times` and samples the
    /// wave function at the node nearest `x`.
    pub fn sample(
        &self,
        initial: impl Fn(f64) -> Complex64,
        x: f64,
        times: &[f64],
        dt: f64,
    ) -> Vec<Complex64> {
        let mut psi: Vec<Complex64> = (0..self.grid.nodes).map(|j| initial(self.grid.x(j))).collect();
        let mut scratch = vec![Complex64::default(); psi.len()];
        let probe = self.grid.index_of(x);
        let mut now = 0.0;
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            let steps = ((t - now) / dt).round() as usize;
            for _ in 0..steps {
                self.step(&mut psi, &mut scratch);
            }
            now += steps as f64 * dt;
            out.push(psi[probe]);
        }
        out
    }
}
