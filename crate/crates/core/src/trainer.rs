//! Full-batch gradient descent under the three initialization/freezing
//! regimes, with a recorded cost and L2-error history.

use std::io::Write;

use crate::cost::{CostFunction, CostKind, FreezeMask, ParamGradient, Workspace};
use crate::error::{Error, Result};
use crate::mesh::Partition;
use crate::network::{hat_hidden_layer, NetworkParams};
use crate::norms::{l2_error, QuadratureConfig};
use crate::rng::SplitMix64;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Every weight and bias random and trainable.
    AllFree,
    /// Hidden layer initialized with the hat blocks, output weights random,
    /// everything trainable.
    FeInitFree,
    /// Hidden layer fixed to the hat blocks, only the output weights train.
    FeInitFrozen,
}

impl Regime {
    /// Short CLI name (`r1`, `r2`, `r3`).
    pub fn code(self) -> &'static str {
        match self {
            Regime::AllFree => "r1",
            Regime::FeInitFree => "r2",
            Regime::FeInitFrozen => "r3",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r1" | "all-free" => Ok(Regime::AllFree),
            "r2" | "fe-init-free" => Ok(Regime::FeInitFree),
            "r3" | "fe-init-frozen" => Ok(Regime::FeInitFrozen),
            other => Err(Error::InvalidParameter(format!("unknown regime `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig<T> {
    pub n: usize,
    pub eps: T,
    pub kind: CostKind,
    pub regime: Regime,
    pub eta: T,
    pub n_iter: usize,
    pub beta: T,
    pub seed: u64,
    pub record_every: usize,
}

impl<T: Real> TrainConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidMesh(self.n));
        }
        let invalid = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.eps > T::zero()) || !self.eps.is_finite() {
            return invalid(format!("eps must be positive, got {}", self.eps));
        }
        if !(self.eta > T::zero()) || !self.eta.is_finite() {
            return invalid(format!("eta must be positive, got {}", self.eta));
        }
        if !(self.beta >= T::zero()) || !self.beta.is_finite() {
            return invalid(format!("beta must be nonnegative, got {}", self.beta));
        }
        if self.n_iter == 0 {
            return invalid("n_iter must be at least 1".into());
        }
        if self.record_every == 0 {
            return invalid("record_every must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingTrace<T> {
    pub iterations: Vec<usize>,
    pub cost_values: Vec<T>,
    pub l2_errors: Vec<T>,
}

impl<T: Real> TrainingTrace<T> {
    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    fn push(&mut self, iteration: usize, cost: T, l2: T) {
        self.iterations.push(iteration);
        self.cost_values.push(cost);
        self.l2_errors.push(l2);
    }

    pub fn final_cost(&self) -> Option<T> {
        self.cost_values.last().copied()
    }

    /// CSV with header `iter,cost,l2_error` and 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "iter,cost,l2_error")?;
        for ((it, c), e) in self
            .iterations
            .iter()
            .zip(&self.cost_values)
            .zip(&self.l2_errors)
        {
            writeln!(
                out,
                "{it},{:.16e},{:.16e}",
                c.to_f64_lossy(),
                e.to_f64_lossy()
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Initial parameters and freeze mask for `cfg.regime`. Random values are
/// uniform on `[-1, 1)` drawn from SplitMix64 seeded with `cfg.seed`, in the
/// order `w2`, `b2`, `w3` (only `w3` is drawn when the hidden layer comes from
/// the hat blocks).
pub fn init_params<T: Real>(
    cfg: &TrainConfig<T>,
    p: &Partition<T>,
) -> Result<(NetworkParams<T>, FreezeMask)> {
    if p.n() != cfg.n {
        return Err(Error::PartitionMismatch {
            expected: cfg.n,
            found: p.n(),
        });
    }
    let mut rng = SplitMix64::new(cfg.seed);
    let mut draw = |xs: &mut [T]| {
        for v in xs {
            *v = T::lit(rng.next_symmetric());
        }
    };
    let (mut params, mask) = match cfg.regime {
        Regime::AllFree => {
            let mut params = NetworkParams::zeros(p.n())?;
            draw(params.w2_mut());
            draw(params.b2_mut());
            let k = params.neurons();
            (params, FreezeMask::none(k))
        }
        Regime::FeInitFree => {
            let params = hat_hidden_layer(p);
            let k = params.neurons();
            (params, FreezeMask::none(k))
        }
        Regime::FeInitFrozen => {
            let params = hat_hidden_layer(p);
            let k = params.neurons();
            (params, FreezeMask::hidden_layer(k))
        }
    };
    draw(params.w3_mut());
    Ok((params, mask))
}

/// Runs `cfg.n_iter` steps of `theta <- theta - eta * grad` on the unfrozen
/// parameters. Cost and L2 error are recorded at iteration 0, every
/// `record_every` iterations, and at the final iteration.
pub fn train_run<T: Real>(cfg: &TrainConfig<T>) -> Result<(NetworkParams<T>, TrainingTrace<T>)> {
    train_run_with(cfg, &QuadratureConfig::default())
}

pub fn train_run_with<T: Real>(
    cfg: &TrainConfig<T>,
    quad: &QuadratureConfig,
) -> Result<(NetworkParams<T>, TrainingTrace<T>)> {
    cfg.validate()?;
    let p = Partition::uniform(cfg.n)?;
    let (mut params, mask) = init_params(cfg, &p)?;
    let cost = CostFunction::new(&p, cfg.eps, cfg.kind, cfg.beta)?;
    let mut ws = Workspace::default();
    let mut grad = ParamGradient::zeros(params.neurons());
    let mut trace = TrainingTrace::default();
    let l2 = |params: &NetworkParams<T>| l2_error(&params.to_piecewise_linear(), cfg.eps, quad);

    for it in 0..=cfg.n_iter {
        let value = cost.value_and_gradient(&params, Some(&mask), &mut ws, &mut grad)?;
        if !value.is_finite() {
            return Err(Error::Divergence { iteration: it });
        }
        if it % cfg.record_every == 0 || it == cfg.n_iter {
            trace.push(it, value, l2(&params));
        }
        if it == cfg.n_iter {
            break;
        }
        step(&mut params, &grad, &mask, cfg.eta);
        if !params.is_finite() {
            return Err(Error::Divergence { iteration: it + 1 });
        }
    }
    Ok((params, trace))
}

fn step<T: Real>(
    params: &mut NetworkParams<T>,
    grad: &ParamGradient<T>,
    mask: &FreezeMask,
    eta: T,
) {
    let update = |xs: &mut [T], gs: &[T], frozen: &[bool]| {
        for ((x, &g), &f) in xs.iter_mut().zip(gs).zip(frozen) {
            if !f {
                *x -= eta * g;
            }
        }
    };
    update(params.w2_mut(), &grad.w2, &mask.w2);
    update(params.b2_mut(), &grad.b2, &mask.b2);
    update(params.w3_mut(), &grad.w3, &mask.w3);
}
