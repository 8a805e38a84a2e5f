use crate::error::{Error, Result};
use crate::scalar::Real;

/// Continuous piecewise-linear function on `[0, 1]`, stored as its values at
/// strictly increasing breakpoints `0 = t_0 < ... < t_m = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> PiecewiseLinear<T> {
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::SizeMismatch {
                expected: breakpoints.len(),
                found: values.len(),
            });
        }
        if breakpoints.len() < 2 {
            return Err(Error::InvalidNodes(
                "a piecewise-linear function needs at least 2 breakpoints".into(),
            ));
        }
        if breakpoints[0] != T::zero() || breakpoints[breakpoints.len() - 1] != T::one() {
            return Err(Error::InvalidNodes("breakpoints must cover [0, 1]".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidNodes(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    /// Samples `f` at the given breakpoints.
    pub fn sample(breakpoints: Vec<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let values = breakpoints.iter().map(|&x| f(x)).collect();
        Self::new(breakpoints, values)
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn cell_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Endpoints, values and slope of cell `c`.
    pub fn cell(&self, c: usize) -> Cell<T> {
        let (a, b) = (self.breakpoints[c], self.breakpoints[c + 1]);
        let (fa, fb) = (self.values[c], self.values[c + 1]);
        Cell {
            a,
            b,
            fa,
            slope: (fb - fa) / (b - a),
        }
    }

    fn locate(&self, x: T) -> usize {
        let k = self.breakpoints.partition_point(|&t| t <= x);
        k.clamp(1, self.cell_count()) - 1
    }

    /// Linear interpolation. Points outside `[0, 1]` are extrapolated from the
    /// end cells.
    pub fn eval(&self, x: T) -> T {
        self.cell(self.locate(x)).eval(x)
    }

    /// One-sided slope used for the H1 seminorm; at a breakpoint the slope of
    /// the cell to the right is returned.
    pub fn slope(&self, x: T) -> T {
        self.cell(self.locate(x)).slope
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell<T> {
    pub a: T,
    pub b: T,
    pub fa: T,
    pub slope: T,
}

impl<T: Real> Cell<T> {
    #[inline]
    pub fn eval(&self, x: T) -> T {
        self.fa + self.slope * (x - self.a)
    }
}
