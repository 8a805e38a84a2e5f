use femlearn_core::network::model_from_str;
use femlearn_core::network::model_to_string;
use femlearn_core::{
    build_mimic_network, cost, h1_error, l2_error, train_run, CostKind, NetworkParams, Partition,
    QuadratureConfig, Regime, TrainConfig, TridiagonalSystem,
};

fn config(regime: Regime, kind: CostKind, n_iter: usize) -> TrainConfig<f64> {
    TrainConfig {
        n: 20,
        eps: if kind == CostKind::Supg { 0.001 } else { 0.1 },
        kind,
        regime,
        eta: 1e-6,
        n_iter,
        beta: 0.0,
        seed: 7,
        record_every: 100,
    }
}

#[test]
fn identical_configs_give_identical_runs() {
    for regime in [Regime::AllFree, Regime::FeInitFree, Regime::FeInitFrozen] {
        let cfg = config(regime, CostKind::Galerkin, 500);
        let (a, ta) = train_run(&cfg).unwrap();
        let (b, tb) = train_run(&cfg).unwrap();
        assert_eq!(a, b, "{regime}");
        assert_eq!(ta, tb, "{regime}");
        assert_eq!(ta.to_csv_string(), tb.to_csv_string());
    }
}

#[test]
fn frozen_hidden_layer_keeps_breakpoints_on_the_mesh() {
    let p = Partition::<f64>::uniform(20).unwrap();
    for kind in [CostKind::Galerkin, CostKind::Supg] {
        for n_iter in [1, 100, 2_000] {
            let (params, _) = train_run(&config(Regime::FeInitFrozen, kind, n_iter)).unwrap();
            for t in params.breakpoints() {
                let on_mesh = p.nodes().iter().any(|x| (x - t).abs() < 1e-12);
                assert!(on_mesh, "{kind}: breakpoint {t} off the mesh");
            }
            assert_eq!(params.eval(0.0), 0.0, "{kind}");
        }
    }
}

#[test]
fn training_lowers_the_cost() {
    for kind in [CostKind::Galerkin, CostKind::Supg] {
        for regime in [Regime::FeInitFree, Regime::FeInitFrozen] {
            let (_, trace) = train_run(&config(regime, kind, 5_000)).unwrap();
            let first = trace.cost_values[0];
            let last = trace.final_cost().unwrap();
            assert!(last <= first, "{kind} {regime}: {first} -> {last}");
        }
    }
}

#[test]
fn mimic_network_reproduces_every_discrete_solution() {
    let q = QuadratureConfig::default();
    for eps in [0.1, 0.001] {
        for n in [20, 40, 100] {
            for kind in [CostKind::Galerkin, CostKind::Supg] {
                let p = Partition::<f64>::uniform(n).unwrap();
                let fe = TridiagonalSystem::assemble(&p, eps, kind)
                    .unwrap()
                    .solve()
                    .unwrap();
                let net = build_mimic_network(&p, &fe).unwrap();
                let fe_pl = fe.to_piecewise_linear();
                let worst = (0..=5_000)
                    .map(|j| j as f64 / 5_000.0)
                    .map(|x| (net.eval(x) - fe_pl.eval(x)).abs())
                    .fold(0.0, f64::max);
                assert!(worst < 1e-12, "eps={eps} N={n} {kind}: {worst:e}");

                let res = cost(&net, &p, eps, kind, 0.0).unwrap();
                assert!(
                    res.total < 1e-20,
                    "eps={eps} N={n} {kind}: cost {:e}",
                    res.total
                );

                let nn = net.to_piecewise_linear();
                let dl2 = (l2_error(&nn, eps, &q) - l2_error(&fe_pl, eps, &q)).abs();
                let dh1 = (h1_error(&nn, eps, &q) - h1_error(&fe_pl, eps, &q)).abs();
                assert!(
                    dl2 < 1e-10 && dh1 < 1e-8,
                    "eps={eps} N={n} {kind}: {dl2:e} {dh1:e}"
                );
            }
        }
    }
}

#[test]
fn trained_model_survives_a_text_round_trip() {
    let (params, _) = train_run(&config(Regime::AllFree, CostKind::Galerkin, 50)).unwrap();
    let text = model_to_string(&params);
    let back: NetworkParams<f64> = model_from_str(&text).unwrap();
    assert_eq!(params, back);
}
