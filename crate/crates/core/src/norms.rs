//! L2 and H1-seminorm errors of piecewise-linear approximations against the
//! exact solution.
//!
//! Integration runs cell by cell over the approximation's own breakpoints, so
//! no quadrature cell straddles a kink. Each cell is split into
//! `subdivisions_per_cell` equal pieces to resolve the boundary layer of the
//! exact solution, and every piece uses a Gauss–Legendre rule. Cells are
//! summed in ascending order, which keeps results bit-reproducible.

use crate::error::{Error, Result};
use crate::exact::{exact_derivative, exact_solution};
use crate::piecewise::{Cell, PiecewiseLinear};
use crate::quadrature::gauss_legendre;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    points_per_cell: usize,
    subdivisions_per_cell: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            points_per_cell: 5,
            subdivisions_per_cell: 50,
        }
    }
}

impl QuadratureConfig {
    pub fn new(points_per_cell: usize, subdivisions_per_cell: usize) -> Result<Self> {
        if !(1..=10).contains(&points_per_cell) {
            return Err(Error::InvalidParameter(format!(
                "points_per_cell must be in 1..=10, got {points_per_cell}"
            )));
        }
        if subdivisions_per_cell == 0 {
            return Err(Error::InvalidParameter(
                "subdivisions_per_cell must be at least 1".into(),
            ));
        }
        Ok(Self {
            points_per_cell,
            subdivisions_per_cell,
        })
    }

    pub fn points_per_cell(&self) -> usize {
        self.points_per_cell
    }

    pub fn subdivisions_per_cell(&self) -> usize {
        self.subdivisions_per_cell
    }

    /// `(point, weight)` pairs on `[0, 1]`.
    fn unit_rule<T: Real>(&self) -> Vec<(T, T)> {
        gauss_legendre(self.points_per_cell)
            .into_iter()
            .map(|(x, w)| (T::lit(0.5 * (x + 1.0)), T::lit(0.5 * w)))
            .collect()
    }
}

/// Integrates `g(x, cell)` over `[0, 1]` on the breakpoint mesh `cells`.
fn integrate<T: Real>(
    cells: impl Iterator<Item = (T, T)>,
    q: &QuadratureConfig,
    mut g: impl FnMut(T, usize) -> T,
) -> T {
    let rule = q.unit_rule::<T>();
    let subs = T::from_index(q.subdivisions_per_cell);
    let mut total = T::zero();
    for (c, (a, b)) in cells.enumerate() {
        let width = (b - a) / subs;
        for s in 0..q.subdivisions_per_cell {
            let left = a + (b - a) * T::from_index(s) / subs;
            let mut piece = T::zero();
            for &(t, w) in &rule {
                piece += w * g(left + width * t, c);
            }
            total += piece * width;
        }
    }
    total
}

fn cells_of<T: Real>(f: &PiecewiseLinear<T>) -> (Vec<Cell<T>>, impl Iterator<Item = (T, T)> + '_) {
    let cells: Vec<Cell<T>> = (0..f.cell_count()).map(|c| f.cell(c)).collect();
    let bounds = f.breakpoints().windows(2).map(|w| (w[0], w[1]));
    (cells, bounds)
}

/// `||f - u||_{L2(0,1)}`.
pub fn l2_error<T: Real>(f: &PiecewiseLinear<T>, eps: T, q: &QuadratureConfig) -> T {
    let (cells, bounds) = cells_of(f);
    integrate(bounds, q, |x, c| {
        let e = cells[c].eval(x) - exact_solution(eps, x);
        e * e
    })
    .sqrt()
}

/// `|f - u|_{H1(0,1)} = ||f' - u'||_{L2(0,1)}` (seminorm).
pub fn h1_error<T: Real>(f: &PiecewiseLinear<T>, eps: T, q: &QuadratureConfig) -> T {
    let (cells, bounds) = cells_of(f);
    integrate(bounds, q, |x, c| {
        let e = cells[c].slope - exact_derivative(eps, x);
        e * e
    })
    .sqrt()
}

/// `||f - g||_{L2(0,1)}` on the union of both breakpoint sets.
pub fn l2_distance<T: Real>(
    f: &PiecewiseLinear<T>,
    g: &PiecewiseLinear<T>,
    q: &QuadratureConfig,
) -> T {
    let mut merged: Vec<T> = f
        .breakpoints()
        .iter()
        .chain(g.breakpoints())
        .copied()
        .collect();
    merged.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    merged.dedup();
    let bounds = merged.windows(2).map(|w| (w[0], w[1]));
    // cells of the merged mesh are generally not cells of f or g, so both are
    // evaluated by lookup
    integrate(bounds, q, |x, _| {
        let e = f.eval(x) - g.eval(x);
        e * e
    })
    .sqrt()
}

/// `|f(x) - g(x)|` at each sample point.
pub fn abs_diff<T: Real>(f: &PiecewiseLinear<T>, g: &PiecewiseLinear<T>, xs: &[T]) -> Vec<T> {
    xs.iter().map(|&x| (f.eval(x) - g.eval(x)).abs()).collect()
}
