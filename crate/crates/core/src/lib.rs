//! Can a ReLU network learn a finite element solution?
//!
//! A three-layer network `F(x) = W3 . relu(W2 x + b2)` with `3(N-1)` hidden
//! neurons can represent every continuous piecewise-linear function on a
//! partition of `[0, 1]`, in particular the linear finite element (or SUPG)
//! approximation of
//!
//! ```text
//! -eps u'' + u' = 1 on (0, 1),   u(0) = u(1) = 0.
//! ```
//!
//! This crate builds the deterministic discretizations, the network that
//! mimics them, the nodal-residual cost whose minimum is that network, its
//! exact gradient, a gradient-descent trainer, and error norms against the
//! closed-form solution.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below are what the command-line harness uses.

// `!(x > 0)` is deliberate throughout: NaN must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cost;
pub mod error;
pub mod exact;
pub mod fem;
pub mod mesh;
pub mod network;
pub mod norms;
pub mod piecewise;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod trainer;

pub use cost::{
    cost, cost_gradient, residuals, CostFunction, CostKind, CostReport, FreezeMask, ParamGradient,
};
pub use error::{Error, Result};
pub use exact::{exact_derivative, exact_solution};
pub use fem::{
    assemble_galerkin, assemble_supg, solve_tridiagonal, thomas_solve, NodalFunction,
    TridiagonalSystem,
};
pub use mesh::{hat_basis_eval, uniform_partition, Partition};
pub use network::{
    build_mimic_network, eval_network, hat_decomposition, hat_hidden_layer, network_breakpoints,
    read_model, to_piecewise_linear, write_model, HatBlock, NetworkParams,
};
pub use norms::{abs_diff, h1_error, l2_distance, l2_error, QuadratureConfig};
pub use piecewise::PiecewiseLinear;
pub use scalar::Real;
pub use trainer::{init_params, train_run, train_run_with, Regime, TrainConfig, TrainingTrace};

pub type Partition64 = Partition<f64>;
pub type Partition32 = Partition<f32>;
pub type TridiagonalSystem64 = TridiagonalSystem<f64>;
pub type NodalFunction64 = NodalFunction<f64>;
pub type NetworkParams64 = NetworkParams<f64>;
pub type NetworkParams32 = NetworkParams<f32>;
pub type PiecewiseLinear64 = PiecewiseLinear<f64>;
pub type CostReport64 = CostReport<f64>;
pub type TrainConfig64 = TrainConfig<f64>;
pub type TrainingTrace64 = TrainingTrace<f64>;
