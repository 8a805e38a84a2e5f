//! Discrete-residual cost functions and their backpropagated gradients.
//!
//! With `F_j = F(x_j)` the network values at the mesh nodes, the residual of
//! interior node `i` is
//!
//! ```text
//! r_i = eps [-F_{i-1}/h_{i-1} + (1/h_{i-1} + 1/h_i) F_i - F_{i+1}/h_i] + conv_i - (h_{i-1} + h_i)/2
//! ```
//!
//! with `conv_i = (F_{i+1} - F_{i-1})/2` for Galerkin and `F_i - F_{i-1}` for
//! SUPG, i.e. row `i` of the assembled system applied to the nodal values.
//! The cost is `sum r_i^2 + F(0)^2 + F(1)^2 + beta |theta|^2` where `theta`
//! collects every weight and bias. Its minimum (zero) is attained by the
//! network that mimics the corresponding finite element solution.

use crate::error::{Error, Result};
use crate::fem::{check_eps, stencil};
use crate::mesh::Partition;
use crate::network::{relu, NetworkParams};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostKind {
    Galerkin,
    Supg,
}

impl CostKind {
    pub fn name(self) -> &'static str {
        match self {
            CostKind::Galerkin => "galerkin",
            CostKind::Supg => "supg",
        }
    }
}

impl std::fmt::Display for CostKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CostKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "galerkin" | "fem" => Ok(CostKind::Galerkin),
            "supg" => Ok(CostKind::Supg),
            other => Err(Error::InvalidParameter(format!(
                "unknown cost kind `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport<T> {
    pub residuals: Vec<T>,
    /// `(F(0)^2, F(1)^2)`.
    pub boundary_penalties: (T, T),
    pub regularization: T,
    pub total: T,
}

/// Per-parameter freeze flags, laid out like [`NetworkParams`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreezeMask {
    pub w2: Vec<bool>,
    pub b2: Vec<bool>,
    pub w3: Vec<bool>,
}

impl FreezeMask {
    /// Nothing frozen.
    pub fn none(neurons: usize) -> Self {
        Self {
            w2: vec![false; neurons],
            b2: vec![false; neurons],
            w3: vec![false; neurons],
        }
    }

    /// Hidden layer (`w2`, `b2`) frozen, output weights trainable.
    pub fn hidden_layer(neurons: usize) -> Self {
        Self {
            w2: vec![true; neurons],
            b2: vec![true; neurons],
            w3: vec![false; neurons],
        }
    }

    pub fn neurons(&self) -> usize {
        self.w3.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &bool> {
        self.w2.iter().chain(&self.b2).chain(&self.w3)
    }

    fn check<T>(&self, params: &NetworkParams<T>) -> Result<()>
    where
        T: Real,
    {
        let k = params.neurons();
        for len in [self.w2.len(), self.b2.len(), self.w3.len()] {
            if len != k {
                return Err(Error::SizeMismatch {
                    expected: k,
                    found: len,
                });
            }
        }
        Ok(())
    }

    fn hidden_fully_frozen(&self) -> bool {
        self.w2.iter().chain(&self.b2).all(|&f| f)
    }
}

/// Gradient of the cost, aligned with the parameter layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamGradient<T> {
    pub w2: Vec<T>,
    pub b2: Vec<T>,
    pub w3: Vec<T>,
}

impl<T: Real> ParamGradient<T> {
    pub fn zeros(neurons: usize) -> Self {
        Self {
            w2: vec![T::zero(); neurons],
            b2: vec![T::zero(); neurons],
            w3: vec![T::zero(); neurons],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.w2.iter().chain(&self.b2).chain(&self.w3)
    }

    pub fn max_abs(&self) -> T {
        self.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    fn fill_zero(&mut self) {
        for v in self.w2.iter_mut().chain(&mut self.b2).chain(&mut self.w3) {
            *v = T::zero();
        }
    }
}

/// A cost function bound to a partition, `eps`, kind and `beta`. Holds the
/// stencil rows so that repeated evaluation during training allocates nothing.
#[derive(Debug, Clone)]
pub struct CostFunction<T> {
    kind: CostKind,
    eps: T,
    beta: T,
    nodes: Vec<T>,
    rows: Vec<[T; 3]>,
    loads: Vec<T>,
}

/// Scratch buffers for [`CostFunction::value_and_gradient`].
#[derive(Debug, Clone, Default)]
pub struct Workspace<T> {
    activations: Vec<T>,
    node_values: Vec<T>,
    node_sensitivity: Vec<T>,
    residuals: Vec<T>,
}

impl<T: Real> CostFunction<T> {
    pub fn new(p: &Partition<T>, eps: T, kind: CostKind, beta: T) -> Result<Self> {
        check_eps(eps)?;
        if !(beta >= T::zero()) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta must be nonnegative, got {beta}"
            )));
        }
        let (rows, loads) = (1..p.n()).map(|i| stencil(p, eps, kind, i)).unzip();
        Ok(Self {
            kind,
            eps,
            beta,
            nodes: p.nodes().to_vec(),
            rows,
            loads,
        })
    }

    pub fn kind(&self) -> CostKind {
        self.kind
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Number of elements of the underlying partition.
    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    fn check(&self, params: &NetworkParams<T>) -> Result<()> {
        if params.n() != self.n() {
            return Err(Error::PartitionMismatch {
                expected: self.n(),
                found: params.n(),
            });
        }
        Ok(())
    }

    /// `F(x_j)` at every node.
    pub fn node_values(&self, params: &NetworkParams<T>) -> Result<Vec<T>> {
        self.check(params)?;
        Ok(self.nodes.iter().map(|&x| params.eval(x)).collect())
    }

    fn residuals_from(&self, f: &[T], out: &mut Vec<T>) {
        out.clear();
        out.extend(
            self.rows
                .iter()
                .zip(&self.loads)
                .enumerate()
                .map(|(r, (row, &load))| {
                    row[0] * f[r] + row[1] * f[r + 1] + row[2] * f[r + 2] - load
                }),
        );
    }

    pub fn residuals(&self, params: &NetworkParams<T>) -> Result<Vec<T>> {
        let f = self.node_values(params)?;
        let mut r = Vec::with_capacity(self.rows.len());
        self.residuals_from(&f, &mut r);
        Ok(r)
    }

    pub fn report(&self, params: &NetworkParams<T>) -> Result<CostReport<T>> {
        let f = self.node_values(params)?;
        let mut residuals = Vec::with_capacity(self.rows.len());
        self.residuals_from(&f, &mut residuals);
        let f0 = f[0];
        let f1 = f[f.len() - 1];
        let boundary_penalties = (f0 * f0, f1 * f1);
        let regularization = self.beta * params.squared_norm();
        let total = residuals.iter().map(|&r| r * r).sum::<T>()
            + boundary_penalties.0
            + boundary_penalties.1
            + regularization;
        Ok(CostReport {
            residuals,
            boundary_penalties,
            regularization,
            total,
        })
    }

    pub fn value(&self, params: &NetworkParams<T>) -> Result<T> {
        Ok(self.report(params)?.total)
    }

    /// Cost value and gradient in one forward/backward sweep over the nodes.
    /// Frozen entries of the gradient are exactly zero. The ReLU derivative at
    /// a zero preactivation is taken as 0.
    pub fn value_and_gradient(
        &self,
        params: &NetworkParams<T>,
        mask: Option<&FreezeMask>,
        ws: &mut Workspace<T>,
        grad: &mut ParamGradient<T>,
    ) -> Result<T> {
        self.check(params)?;
        let k = params.neurons();
        if let Some(mask) = mask {
            mask.check(params)?;
        }
        for len in [grad.w2.len(), grad.b2.len(), grad.w3.len()] {
            if len != k {
                return Err(Error::SizeMismatch {
                    expected: k,
                    found: len,
                });
            }
        }
        let nn = self.nodes.len();
        let (w2, b2, w3) = (params.w2(), params.b2(), params.w3());

        // forward
        ws.activations.resize(nn * k, T::zero());
        ws.node_values.resize(nn, T::zero());
        for (j, &x) in self.nodes.iter().enumerate() {
            let act = &mut ws.activations[j * k..(j + 1) * k];
            let mut f = T::zero();
            for m in 0..k {
                let a = relu(w2[m] * x + b2[m]);
                act[m] = a;
                f += w3[m] * a;
            }
            ws.node_values[j] = f;
        }
        self.residuals_from(&ws.node_values, &mut ws.residuals);
        let f0 = ws.node_values[0];
        let f1 = ws.node_values[nn - 1];
        let sq_norm = params.squared_norm();
        let total = ws.residuals.iter().map(|&r| r * r).sum::<T>()
            + f0 * f0
            + f1 * f1
            + self.beta * sq_norm;

        // dCost/dF_j
        let two = T::lit(2.0);
        ws.node_sensitivity.clear();
        ws.node_sensitivity.resize(nn, T::zero());
        for (r, (row, &res)) in self.rows.iter().zip(&ws.residuals).enumerate() {
            let s = two * res;
            ws.node_sensitivity[r] += s * row[0];
            ws.node_sensitivity[r + 1] += s * row[1];
            ws.node_sensitivity[r + 2] += s * row[2];
        }
        ws.node_sensitivity[0] += two * f0;
        ws.node_sensitivity[nn - 1] += two * f1;

        // backward
        grad.fill_zero();
        let hidden = !mask.is_some_and(FreezeMask::hidden_fully_frozen);
        for (j, &x) in self.nodes.iter().enumerate() {
            let d = ws.node_sensitivity[j];
            if d == T::zero() {
                continue;
            }
            let act = &ws.activations[j * k..(j + 1) * k];
            for m in 0..k {
                let a = act[m];
                grad.w3[m] += d * a;
                if hidden && a > T::zero() {
                    let t = d * w3[m];
                    grad.b2[m] += t;
                    grad.w2[m] += t * x;
                }
            }
        }
        if self.beta != T::zero() {
            let tb = two * self.beta;
            for (g, &v) in grad.w2.iter_mut().zip(w2) {
                *g += tb * v;
            }
            for (g, &v) in grad.b2.iter_mut().zip(b2) {
                *g += tb * v;
            }
            for (g, &v) in grad.w3.iter_mut().zip(w3) {
                *g += tb * v;
            }
        }
        if let Some(mask) = mask {
            for (g, &frozen) in grad.w2.iter_mut().zip(&mask.w2) {
                if frozen {
                    *g = T::zero();
                }
            }
            for (g, &frozen) in grad.b2.iter_mut().zip(&mask.b2) {
                if frozen {
                    *g = T::zero();
                }
            }
            for (g, &frozen) in grad.w3.iter_mut().zip(&mask.w3) {
                if frozen {
                    *g = T::zero();
                }
            }
        }
        Ok(total)
    }

    pub fn gradient(
        &self,
        params: &NetworkParams<T>,
        mask: Option<&FreezeMask>,
    ) -> Result<ParamGradient<T>> {
        let mut grad = ParamGradient::zeros(params.neurons());
        self.value_and_gradient(params, mask, &mut Workspace::default(), &mut grad)?;
        Ok(grad)
    }
}

pub fn residuals<T: Real>(
    params: &NetworkParams<T>,
    p: &Partition<T>,
    eps: T,
    kind: CostKind,
) -> Result<Vec<T>> {
    params.check_partition(p)?;
    CostFunction::new(p, eps, kind, T::zero())?.residuals(params)
}

pub fn cost<T: Real>(
    params: &NetworkParams<T>,
    p: &Partition<T>,
    eps: T,
    kind: CostKind,
    beta: T,
) -> Result<CostReport<T>> {
    params.check_partition(p)?;
    CostFunction::new(p, eps, kind, beta)?.report(params)
}

pub fn cost_gradient<T: Real>(
    params: &NetworkParams<T>,
    p: &Partition<T>,
    eps: T,
    kind: CostKind,
    beta: T,
    mask: &FreezeMask,
) -> Result<ParamGradient<T>> {
    params.check_partition(p)?;
    CostFunction::new(p, eps, kind, beta)?.gradient(params, Some(mask))
}
