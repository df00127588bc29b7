use proptest::prelude::*;
use tsbandit::simulator::{run_ensemble, run_monte_carlo, run_single};
use tsbandit::{ArmLaw, ArmModel, BanditInstance, DelayModel, PolicyKind, RunConfig};

fn bernoulli(means: &[f64]) -> BanditInstance {
    BanditInstance::bernoulli(means).unwrap()
}

#[test]
fn uniform_random_regret_matches_closed_form() {
    let inst = bernoulli(&[0.7, 0.5, 0.2]);
    let cfg = RunConfig::new(2000, 1, PolicyKind::UniformRandom);
    let s = run_monte_carlo(&cfg, &inst, 400, 1).unwrap();
    let want = 2000.0 * (0.0 + 0.2 + 0.5) / 3.0;
    let c = s.last();
    assert!(
        (c.mean_regret - want).abs() <= 3.0 * c.stderr.unwrap(),
        "{} vs {want}",
        c.mean_regret
    );
}

#[test]
fn standard_error_shrinks_like_root_n() {
    let inst = bernoulli(&[0.6, 0.4]);
    let cfg = RunConfig::new(300, 2, PolicyKind::UniformRandom);
    let small = run_monte_carlo(&cfg, &inst, 200, 1).unwrap().last().stderr.unwrap();
    let large = run_monte_carlo(&cfg, &inst, 3200, 1).unwrap().last().stderr.unwrap();
    let ratio = small / large;
    assert!((3.0..5.3).contains(&ratio), "SE ratio {ratio}, expected about 4");
}

#[test]
fn duplicating_the_best_arm_does_not_hurt() {
    let cfg = RunConfig::new(2000, 3, PolicyKind::Thompson);
    let a = run_monte_carlo(&cfg, &bernoulli(&[0.5, 0.4]), 400, 1).unwrap();
    let b = run_monte_carlo(&cfg, &bernoulli(&[0.5, 0.4, 0.5]), 400, 1).unwrap();
    let (a, b) = (a.last(), b.last());
    let se = (a.stderr.unwrap().powi(2) + b.stderr.unwrap().powi(2)).sqrt();
    assert!(
        b.mean_regret <= a.mean_regret + 3.0 * se,
        "{} vs {}",
        b.mean_regret,
        a.mean_regret
    );
}

#[test]
fn binarized_rewards_behave_like_bernoulli() {
    let cfg = RunConfig::new(2000, 4, PolicyKind::Thompson);
    let plain = run_monte_carlo(&cfg, &bernoulli(&[0.5, 0.4]), 400, 1).unwrap();
    let uniform = BanditInstance::new(vec![
        ArmModel::new(ArmLaw::Uniform { lo: 0.0, hi: 1.0 }).unwrap(),
        ArmModel::new(ArmLaw::Discrete {
            values: vec![0.0, 0.8],
            probs: vec![0.5, 0.5],
        })
        .unwrap(),
    ])
    .unwrap();
    let mut cfg2 = cfg.clone();
    cfg2.seed = 44;
    let general = run_monte_carlo(&cfg2, &uniform, 400, 1).unwrap();
    let (a, b) = (plain.last(), general.last());
    for arm in 0..2 {
        let se = (a.plays_stderr[arm].unwrap().powi(2) + b.plays_stderr[arm].unwrap().powi(2)).sqrt();
        assert!((a.mean_plays[arm] - b.mean_plays[arm]).abs() <= 3.0 * se, "arm {arm}");
    }
}

#[test]
fn thompson_beats_uniform_random() {
    let inst = bernoulli(&[0.6, 0.4]);
    let ts = run_monte_carlo(&RunConfig::new(5000, 5, PolicyKind::Thompson), &inst, 50, 1).unwrap();
    let ucb = run_monte_carlo(&RunConfig::new(5000, 5, PolicyKind::Ucb1), &inst, 50, 1).unwrap();
    let rnd = run_monte_carlo(&RunConfig::new(5000, 5, PolicyKind::UniformRandom), &inst, 50, 1).unwrap();
    assert!(ts.last().mean_regret < ucb.last().mean_regret);
    assert!(ucb.last().mean_regret < rnd.last().mean_regret);
}

#[test]
fn batched_feedback_lands_at_batch_boundaries() {
    let inst = bernoulli(&[0.5, 0.4]);
    let cfg = RunConfig::new(1003, 6, PolicyKind::Thompson).with_delay(DelayModel::Batch(10));
    let trace = run_single(&cfg, &inst).unwrap();
    assert_eq!(trace.undelivered, 3);
    let posterior = trace.posterior.unwrap();
    let seen: u64 = (0..2).map(|a| posterior.observations(a)).sum();
    assert_eq!(seen, 1000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn regret_accounting_invariants(
        seed in any::<u64>(),
        means in proptest::collection::vec(0.0f64..=1.0, 2..6),
        horizon in 1u64..400,
        policy in prop_oneof![Just(PolicyKind::Thompson), Just(PolicyKind::Ucb1), Just(PolicyKind::UniformRandom)],
        delay in prop_oneof![Just(DelayModel::None), (0u64..20).prop_map(DelayModel::Fixed), (1u64..20).prop_map(DelayModel::Batch)],
    ) {
        let inst = bernoulli(&means);
        let cps: Vec<u64> = [horizon / 4, horizon / 2, horizon].into_iter().filter(|&t| t > 0).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let cfg = RunConfig::new(horizon, seed, policy).with_checkpoints(cps).with_delay(delay);
        let trace = run_single(&cfg, &inst).unwrap();
        let mut prev = 0.0;
        for c in &trace.checkpoints {
            prop_assert_eq!(c.plays.iter().sum::<u64>(), c.t);
            let from_plays: f64 = c.plays.iter().zip(inst.gaps()).map(|(&k, g)| k as f64 * g).sum();
            prop_assert!((c.regret - from_plays).abs() < 1e-9);
            prop_assert!(c.regret >= prev);
            prev = c.regret;
        }
        prop_assert_eq!(run_single(&cfg, &inst).unwrap(), trace);
    }

    #[test]
    fn ensembles_ignore_worker_count(seed in any::<u64>(), workers in 2usize..9) {
        let inst = bernoulli(&[0.5, 0.45, 0.3]);
        let cfg = RunConfig::new(200, seed, PolicyKind::Thompson).with_checkpoints(vec![20, 200]).with_diagnostics(true);
        prop_assert_eq!(run_ensemble(&cfg, &inst, 12, 1).unwrap(), run_ensemble(&cfg, &inst, 12, workers).unwrap());
    }
}
