use cende::objective::{Counted, Rastrigin, Sphere};
use cende::{run_cende_dobl, run_de_baseline, Bounds, Execution, OptimizerConfig};
use proptest::prelude::*;

fn config(dim: usize, pop: usize, budget: usize, seed: u64) -> OptimizerConfig {
    let mut cfg = OptimizerConfig::new(Bounds::uniform(dim, -5.0, 5.0).unwrap(), seed);
    cfg.population_size = pop;
    cfg.max_evaluations = budget;
    cfg
}

#[test]
fn parallel_matches_sequential() {
    let mut seq = config(12, 20, 3000, 11);
    seq.execution = Execution::Sequential;
    let mut par = seq.clone();
    par.execution = Execution::Parallel;
    let a = run_cende_dobl(&Rastrigin(12), &seq).unwrap();
    let b = run_cende_dobl(&Rastrigin(12), &par).unwrap();
    assert_eq!(a.best_fitness_by_generation, b.best_fitness_by_generation);
    assert_eq!(a.final_best.position(), b.final_best.position());
}

#[test]
fn ablation_reproduces_baseline() {
    let cfg = config(8, 16, 2000, 5);
    let a = run_cende_dobl(&Sphere(8), &cfg.clone().ablated()).unwrap();
    let b = run_de_baseline(&Sphere(8), &cfg).unwrap();
    assert_eq!(a.best_fitness_by_generation, b.best_fitness_by_generation);
    assert_eq!(b.jump_count + b.centroid_injection_count, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn same_seed_same_trace(seed in any::<u64>(), dim in 1usize..8) {
        let cfg = config(dim, 8, 400, seed);
        let a = run_cende_dobl(&Sphere(dim), &cfg).unwrap();
        let b = run_cende_dobl(&Sphere(dim), &cfg).unwrap();
        prop_assert_eq!(a.best_fitness_by_generation, b.best_fitness_by_generation);
        prop_assert_eq!(a.final_best.position(), b.final_best.position());
    }

    #[test]
    fn budget_and_monotone_best(seed in any::<u64>(), dim in 1usize..6, pop in 4usize..12, extra in 0usize..500) {
        let obj = Counted::new(Rastrigin(dim));
        let budget = pop + extra;
        let cfg = config(dim, pop, budget, seed);
        let trace = run_cende_dobl(&obj, &cfg).unwrap();
        prop_assert!(obj.calls() <= budget);
        prop_assert_eq!(obj.calls(), trace.evaluations_used);
        for w in trace.best_fitness_by_generation.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        prop_assert!(trace.jump_count + trace.centroid_injection_count <= trace.generations);
    }
}
