//! The shallow ReLU network `F(x) = W3 . relu(W2 x + b2)` with `3(N-1)`
//! hidden neurons, its finite-element-mimicking parameters, and exact
//! piecewise-linear extraction.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::fem::NodalFunction;
use crate::mesh::Partition;
use crate::piecewise::PiecewiseLinear;
use crate::scalar::Real;

/// Kinks closer than this are merged when extracting breakpoints.
pub const BREAKPOINT_DEDUP_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn relu<T: Real>(z: T) -> T {
    if z > T::zero() {
        z
    } else {
        T::zero()
    }
}

/// Hidden weights `w2`, hidden biases `b2` and output weights `w3` of a
/// network sized for a partition with `n` elements. Neuron `3(i-1) + m`
/// (m = 0, 1, 2) is the `m`-th neuron of hat block `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams<T> {
    n: usize,
    w2: Vec<T>,
    b2: Vec<T>,
    w3: Vec<T>,
}

impl<T: Real> NetworkParams<T> {
    pub fn new(n: usize, w2: Vec<T>, b2: Vec<T>, w3: Vec<T>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidMesh(n));
        }
        let expected = 3 * (n - 1);
        for len in [w2.len(), b2.len(), w3.len()] {
            if len != expected {
                return Err(Error::SizeMismatch {
                    expected,
                    found: len,
                });
            }
        }
        Ok(Self { n, w2, b2, w3 })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        let k = 3 * n.saturating_sub(1);
        Self::new(
            n,
            vec![T::zero(); k],
            vec![T::zero(); k],
            vec![T::zero(); k],
        )
    }

    /// The `N` of the partition this network was sized for.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Hidden layer width `3(N-1)`.
    pub fn neurons(&self) -> usize {
        self.w3.len()
    }

    /// Total parameter count `9(N-1)`.
    pub fn len(&self) -> usize {
        3 * self.neurons()
    }

    pub fn is_empty(&self) -> bool {
        self.w3.is_empty()
    }

    pub fn w2(&self) -> &[T] {
        &self.w2
    }

    pub fn b2(&self) -> &[T] {
        &self.b2
    }

    pub fn w3(&self) -> &[T] {
        &self.w3
    }

    pub fn w2_mut(&mut self) -> &mut [T] {
        &mut self.w2
    }

    pub fn b2_mut(&mut self) -> &mut [T] {
        &mut self.b2
    }

    pub fn w3_mut(&mut self) -> &mut [T] {
        &mut self.w3
    }

    /// All parameters in the order `w2, b2, w3`.
    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.w2.iter().chain(&self.b2).chain(&self.w3)
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }

    /// `||w2||^2 + ||b2||^2 + ||w3||^2`.
    pub fn squared_norm(&self) -> T {
        self.iter().map(|&v| v * v).sum()
    }

    pub(crate) fn check_partition(&self, p: &Partition<T>) -> Result<()> {
        if self.n != p.n() {
            return Err(Error::PartitionMismatch {
                expected: p.n(),
                found: self.n,
            });
        }
        Ok(())
    }

    /// `F(x) = sum_k w3_k relu(w2_k x + b2_k)`.
    pub fn eval(&self, x: T) -> T {
        self.w2
            .iter()
            .zip(&self.b2)
            .zip(&self.w3)
            .fold(T::zero(), |acc, ((&w, &b), &v)| acc + v * relu(w * x + b))
    }

    /// Replaces neuron `k` by `(alpha w2_k, alpha b2_k, w3_k / alpha)`, which
    /// leaves the response unchanged for `alpha > 0`.
    pub fn rescale_neuron(&mut self, k: usize, alpha: T) {
        self.w2[k] *= alpha;
        self.b2[k] *= alpha;
        self.w3[k] /= alpha;
    }

    /// Sorted kinks `-b2_k / w2_k` inside `[0, 1]`, merged within
    /// [`BREAKPOINT_DEDUP_TOL`], with 0 and 1 always present.
    pub fn breakpoints(&self) -> Vec<T> {
        let tol = T::lit(BREAKPOINT_DEDUP_TOL);
        let mut kinks: Vec<T> = self
            .w2
            .iter()
            .zip(&self.b2)
            .filter(|(w, _)| **w != T::zero())
            .map(|(&w, &b)| -b / w)
            .filter(|t| *t >= T::zero() && *t <= T::one())
            .collect();
        kinks.sort_by(|a, b| a.partial_cmp(b).expect("finite kinks"));
        let mut out = vec![T::zero()];
        for t in kinks {
            let last = *out.last().expect("non-empty");
            if t - last > tol && T::one() - t > tol {
                out.push(t);
            }
        }
        out.push(T::one());
        out
    }

    /// The network response as an exact piecewise-linear function.
    pub fn to_piecewise_linear(&self) -> PiecewiseLinear<T> {
        PiecewiseLinear::sample(self.breakpoints(), |x| self.eval(x))
            .expect("breakpoints are strictly increasing and cover [0, 1]")
    }
}

pub fn eval_network<T: Real>(params: &NetworkParams<T>, x: T) -> T {
    params.eval(x)
}

pub fn network_breakpoints<T: Real>(params: &NetworkParams<T>) -> Vec<T> {
    params.breakpoints()
}

pub fn to_piecewise_linear<T: Real>(params: &NetworkParams<T>) -> PiecewiseLinear<T> {
    params.to_piecewise_linear()
}

/// The three neurons that represent the hat function of interior node `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HatBlock<T> {
    pub w2: [T; 3],
    pub b2: [T; 3],
    pub w3: [T; 3],
}

/// `phi_i(x) = relu((x - x_{i-1})/h_{i-1}) - relu((x - x_i)(1/h_{i-1} + 1/h_i))
/// + relu((x - x_{i+1})/h_i)`.
pub fn hat_decomposition<T: Real>(p: &Partition<T>, i: usize) -> Result<HatBlock<T>> {
    p.check_interior(i)?;
    let (il, ir) = (p.h(i - 1).recip(), p.h(i).recip());
    let mid = il + ir;
    Ok(HatBlock {
        w2: [il, mid, ir],
        b2: [-p.node(i - 1) * il, -p.node(i) * mid, -p.node(i + 1) * ir],
        w3: [T::one(), -T::one(), T::one()],
    })
}

/// Hidden layer with every hat block of `p`; output weights are zero.
pub fn hat_hidden_layer<T: Real>(p: &Partition<T>) -> NetworkParams<T> {
    let mut params = NetworkParams::zeros(p.n()).expect("partition has N >= 2");
    for i in 1..p.n() {
        let block = hat_decomposition(p, i).expect("interior index");
        let base = 3 * (i - 1);
        params.w2[base..base + 3].copy_from_slice(&block.w2);
        params.b2[base..base + 3].copy_from_slice(&block.b2);
    }
    params
}

/// Network whose response equals the finite element function `nodal`.
pub fn build_mimic_network<T: Real>(
    p: &Partition<T>,
    nodal: &NodalFunction<T>,
) -> Result<NetworkParams<T>> {
    if nodal.partition() != p {
        return Err(Error::PartitionMismatch {
            expected: p.n(),
            found: nodal.partition().n(),
        });
    }
    let mut params = hat_hidden_layer(p);
    for (block, &u) in nodal.values().iter().enumerate() {
        let base = 3 * block;
        params.w3[base] = u;
        params.w3[base + 1] = -u;
        params.w3[base + 2] = u;
    }
    Ok(params)
}

fn fmt_value<T: Real>(v: T) -> String {
    format!("{:.16e}", v.to_f64_lossy())
}

/// Writes the plain-text model format:
///
/// ```text
/// n <N>
/// W2
/// <3(N-1) values, one per line>
/// B2
/// ...
/// W3
/// ...
/// ```
///
/// Values carry 17 significant digits, enough for a bit-exact round trip.
pub fn write_model<T: Real, W: Write>(params: &NetworkParams<T>, mut out: W) -> Result<()> {
    writeln!(out, "n {}", params.n)?;
    for (name, values) in [("W2", &params.w2), ("B2", &params.b2), ("W3", &params.w3)] {
        writeln!(out, "{name}")?;
        for &v in values.iter() {
            writeln!(out, "{}", fmt_value(v))?;
        }
    }
    Ok(())
}

pub fn model_to_string<T: Real>(params: &NetworkParams<T>) -> String {
    let mut buf = Vec::new();
    write_model(params, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("model text is ASCII")
}

pub fn read_model<T: Real, R: BufRead>(input: R) -> Result<NetworkParams<T>> {
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));

    let (lineno, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty model file".into()))?;
    let header = header?;
    let n: usize = header
        .trim()
        .strip_prefix("n ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| parse_err(lineno, format!("expected `n <N>`, found `{header}`")))?;
    if n < 2 {
        return Err(parse_err(lineno, format!("N must be at least 2, got {n}")));
    }
    let k = 3 * (n - 1);

    let mut sections: Vec<Vec<T>> = Vec::with_capacity(3);
    for name in ["W2", "B2", "W3"] {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| parse_err(lineno, format!("missing section {name}")))?;
        let line = line?;
        if line.trim() != name {
            return Err(parse_err(
                lineno,
                format!("expected section header {name}, found `{line}`"),
            ));
        }
        let mut values = Vec::with_capacity(k);
        for _ in 0..k {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| parse_err(lineno, format!("section {name} is truncated")))?;
            let line = line?;
            let v: f64 = line
                .trim()
                .parse()
                .map_err(|e| parse_err(lineno, format!("bad value `{line}`: {e}")))?;
            values.push(T::lit(v));
        }
        sections.push(values);
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(parse_err(lineno, "trailing data after W3".into()));
    }
    let w3 = sections.pop().expect("three sections");
    let b2 = sections.pop().expect("three sections");
    let w2 = sections.pop().expect("three sections");
    NetworkParams::new(n, w2, b2, w3)
}

pub fn model_from_str<T: Real>(text: &str) -> Result<NetworkParams<T>> {
    read_model(text.as_bytes())
}
