//! Uniform node-centred grids on square boxes and the scalar fields sampled on them.

use crate::error::{Error, Result};

/// Side of a one-dimensional profile or half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Uniform grid with `nodes` points per axis, spacing `h` and lower corner `origin`.
///
/// In two dimensions nodes are stored row-major with the first coordinate as the slow index,
/// so node `(i, j)` lives at `i * nodes + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    nodes: usize,
    h: f64,
    origin: [f64; 2],
}

impl Grid {
    pub fn new(dim: usize, nodes: usize, h: f64, origin: [f64; 2]) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidInput(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidInput(format!("grid spacing must be positive, got {h}")));
        }
        if nodes < 3 {
            return Err(Error::InvalidInput(format!("need at least 3 nodes per axis, got {nodes}")));
        }
        Ok(Self { dim, nodes, h, origin })
    }

    /// Grid on `[-half_width, half_width]^dim`. The width must be an integer multiple of `h`.
    pub fn centered(dim: usize, half_width: f64, h: f64) -> Result<Self> {
        let cells = 2.0 * half_width / h;
        let rounded = cells.round();
        if !(half_width > 0.0) || (cells - rounded).abs() > 1e-6 * rounded.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "domain width {} is not a multiple of h = {h}",
                2.0 * half_width
            )));
        }
        Self::new(dim, rounded as usize + 1, h, [-half_width; 2])
    }

    /// One-dimensional grid on `[start, start + cells * h]`.
    pub fn interval(start: f64, cells: usize, h: f64) -> Result<Self> {
        Self::new(1, cells + 1, h, [start, 0.0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nodes per axis.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.nodes.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinate of the `i`-th node along `axis`.
    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + i as f64 * self.h
    }

    pub fn upper(&self, axis: usize) -> f64 {
        self.coord(axis, self.nodes - 1)
    }

    /// Position of node `k`; the second entry is unused in one dimension.
    pub fn point(&self, k: usize) -> [f64; 2] {
        match self.dim {
            1 => [self.coord(0, k), 0.0],
            _ => [self.coord(0, k / self.nodes), self.coord(1, k % self.nodes)],
        }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        match self.dim {
            1 => i,
            _ => i * self.nodes + j,
        }
    }

    pub fn is_boundary(&self, k: usize) -> bool {
        let last = self.nodes - 1;
        match self.dim {
            1 => k == 0 || k == last,
            _ => {
                let (i, j) = (k / self.nodes, k % self.nodes);
                i == 0 || j == 0 || i == last || j == last
            }
        }
    }

    /// Interior nodes with a boundary neighbour.
    pub fn is_near_boundary(&self, k: usize) -> bool {
        if self.is_boundary(k) {
            return false;
        }
        let last = self.nodes - 2;
        match self.dim {
            1 => k == 1 || k == last,
            _ => {
                let (i, j) = (k / self.nodes, k % self.nodes);
                i == 1 || j == 1 || i == last || j == last
            }
        }
    }

    /// Volume element `h^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    /// Index of the node at `x` if `x` is a grid point (to within `1e-9 h`).
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        if x.len() != self.dim {
            return None;
        }
        let mut idx = [0usize; 2];
        for axis in 0..self.dim {
            let s = (x[axis] - self.origin[axis]) / self.h;
            let r = s.round();
            if (s - r).abs() > 1e-9 || r < 0.0 || r as usize >= self.nodes {
                return None;
            }
            idx[axis] = r as usize;
        }
        Some(self.index(idx[0], idx[1]))
    }

    /// Node index of the axis line through the grid centre (two dimensions), used for
    /// one-dimensional profiles of planar fields.
    pub fn center_row(&self) -> usize {
        self.nodes / 2
    }
}

/// Scalar field sampled on the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: f64::NAN, node: k });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let values = vec![0.0; grid.len()];
        Self { grid, values }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let dim = grid.dim();
        let values = (0..grid.len()).map(|k| f(&grid.point(k)[..dim])).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Values along the first axis through the grid centre (the whole field in one dimension).
    pub fn profile(&self) -> Vec<f64> {
        match self.grid.dim() {
            1 => self.values.clone(),
            _ => {
                let n = self.grid.nodes();
                let j = self.grid.center_row();
                (0..n).map(|i| self.values[i * n + j]).collect()
            }
        }
    }

    /// Linear (1D) or bilinear (2D) interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: &[f64]) -> Option<f64> {
        let g = &self.grid;
        let n = g.nodes();
        let mut base = [0usize; 2];
        let mut frac = [0.0; 2];
        for axis in 0..g.dim() {
            let s = (x[axis] - g.origin()[axis]) / g.h();
            if s < -1e-9 || s > (n - 1) as f64 + 1e-9 {
                return None;
            }
            let s = s.clamp(0.0, (n - 1) as f64);
            let i = (s.floor() as usize).min(n - 2);
            base[axis] = i;
            frac[axis] = s - i as f64;
        }
        let v = &self.values;
        Some(match g.dim() {
            1 => v[base[0]] * (1.0 - frac[0]) + v[base[0] + 1] * frac[0],
            _ => {
                let (i, j) = (base[0], base[1]);
                let (fx, fy) = (frac[0], frac[1]);
                v[i * n + j] * (1.0 - fx) * (1.0 - fy)
                    + v[(i + 1) * n + j] * fx * (1.0 - fy)
                    + v[i * n + j + 1] * (1.0 - fx) * fy
                    + v[(i + 1) * n + j + 1] * fx * fy
            }
        })
    }

    /// Trapezoid-rule integral over the whole grid.
    pub fn integral(&self) -> f64 {
        let g = &self.grid;
        let n = g.nodes();
        let w = |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let sum: f64 = match g.dim() {
            1 => self.values.iter().enumerate().map(|(i, v)| w(i) * v).sum(),
            _ => self
                .values
                .iter()
                .enumerate()
                .map(|(k, v)| w(k / n) * w(k % n) * v)
                .sum(),
        };
        sum * g.cell_volume()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_grid_geometry() {
        let g = Grid::centered(1, 2.0, 0.5).unwrap();
        assert_eq!(g.nodes(), 9);
        assert_eq!(g.coord(0, 0), -2.0);
        assert_eq!(g.upper(0), 2.0);
        assert_eq!(g.locate(&[0.0]), Some(4));
        assert_eq!(g.locate(&[0.25]), None);
        assert!(Grid::centered(1, 1.0, 0.3).is_err());
    }

    #[test]
    fn boundary_classification_2d() {
        let g = Grid::centered(2, 1.0, 0.5).unwrap();
        assert_eq!(g.len(), 25);
        assert!(g.is_boundary(0));
        assert!(g.is_boundary(g.index(2, 4)));
        assert!(!g.is_boundary(g.index(2, 2)));
        assert!(g.is_near_boundary(g.index(1, 2)));
        assert!(!g.is_near_boundary(g.index(2, 2)));
    }

    #[test]
    fn trapezoid_of_constant() {
        let g = Grid::centered(1, 3.0, 0.1).unwrap();
        let f = GridFunction::from_fn(g, |_| 0.25);
        assert!((f.integral() - 1.5).abs() < 1e-12);
        let g2 = Grid::centered(2, 1.0, 0.25).unwrap();
        let f2 = GridFunction::from_fn(g2, |_| 2.0);
        assert!((f2.integral() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn bilinear_reproduces_linear_fields() {
        let g = Grid::centered(2, 1.0, 0.25).unwrap();
        let f = GridFunction::from_fn(g, |x| 1.0 + 2.0 * x[0] - x[1]);
        let v = f.interpolate(&[0.1, -0.37]).unwrap();
        assert!((v - (1.0 + 0.2 + 0.37)).abs() < 1e-12);
        assert!(f.interpolate(&[1.5, 0.0]).is_none());
    }
}
