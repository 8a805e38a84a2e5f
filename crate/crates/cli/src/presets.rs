//! Named experiment configurations.

use femlearn_core::{CostKind, Regime, TrainConfig64};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_RECORD_EVERY: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPreset {
    pub name: &'static str,
    pub summary: &'static str,
    pub config: TrainConfig64,
}

#[allow(clippy::too_many_arguments)]
const fn preset(
    name: &'static str,
    summary: &'static str,
    regime: Regime,
    kind: CostKind,
    eps: f64,
    n: usize,
    n_iter: usize,
    eta: f64,
    beta: f64,
) -> ExperimentPreset {
    ExperimentPreset {
        name,
        summary,
        config: TrainConfig64 {
            n,
            eps,
            kind,
            regime,
            eta,
            n_iter,
            beta,
            seed: DEFAULT_SEED,
            record_every: DEFAULT_RECORD_EVERY,
        },
    }
}

use CostKind::{Galerkin, Supg};
use Regime::{AllFree, FeInitFree, FeInitFrozen};

#[rustfmt::skip]
pub const PRESETS: [ExperimentPreset; 10] = [
    preset("fig1", "all parameters random, regularized, stalls away from the minimum", AllFree, Galerkin, 0.1, 40, 10_000, 1e-4, 1e-4),
    preset("fig2", "hat-initialized hidden layer, all trainable", FeInitFree, Galerkin, 0.1, 20, 300_000, 1e-6, 0.0),
    preset("fig4a", "hat-initialized hidden layer, all trainable", FeInitFree, Galerkin, 0.1, 40, 500_000, 1e-7, 0.0),
    preset("fig4b", "hat-initialized hidden layer, all trainable", FeInitFree, Galerkin, 0.1, 100, 300_000, 1e-8, 0.0),
    preset("fig5", "hat hidden layer frozen, output weights only", FeInitFrozen, Galerkin, 0.1, 20, 200_000, 1e-6, 0.0),
    preset("fig7", "convection dominated, hat-initialized, all trainable", FeInitFree, Supg, 0.001, 20, 1_000_000, 1e-6, 0.0),
    preset("figA7a", "convection dominated, hat-initialized, all trainable", FeInitFree, Supg, 0.001, 40, 1_000_000, 1e-7, 0.0),
    preset("figA7b", "convection dominated, hat-initialized, all trainable", FeInitFree, Supg, 0.001, 100, 1_000_000, 1e-8, 0.0),
    preset("fig8", "convection dominated, hat hidden layer frozen", FeInitFrozen, Supg, 0.001, 40, 2_000_000, 1e-7, 0.0),
    preset("fig9", "convection dominated, hat hidden layer frozen", FeInitFrozen, Supg, 0.001, 100, 400_000, 1e-9, 0.0),
];

pub fn find(name: &str) -> Option<&'static ExperimentPreset> {
    PRESETS.iter().find(|p| p.name.eq_ignore_ascii_case(name))
}
