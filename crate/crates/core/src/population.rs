//! Individuals, populations, box bounds and evaluation-budget accounting.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::objective::Objective;
use crate::seed::Rng;

/// Smallest population that can supply three distinct donors besides the target.
pub const MIN_POPULATION: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for (dim, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            // also rejects NaN
            if !(lo <= hi) {
                return Err(Error::InvalidBounds {
                    dim,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same `[lower, upper]` interval in every one of `dim` dimensions.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }
}

/// What to do with coordinates that leave the box after variation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepairPolicy {
    #[default]
    Clamp,
    Reflect,
    None,
}

impl RepairPolicy {
    pub fn apply(self, x: &mut [f64], bounds: &Bounds) {
        match self {
            RepairPolicy::None => {}
            RepairPolicy::Clamp => {
                for ((v, &lo), &hi) in x.iter_mut().zip(bounds.lower()).zip(bounds.upper()) {
                    *v = v.clamp(lo, hi);
                }
            }
            RepairPolicy::Reflect => {
                for ((v, &lo), &hi) in x.iter_mut().zip(bounds.lower()).zip(bounds.upper()) {
                    *v = reflect(*v, lo, hi);
                }
            }
        }
    }
}

fn reflect(v: f64, lo: f64, hi: f64) -> f64 {
    if (lo..=hi).contains(&v) {
        return v;
    }
    let width = hi - lo;
    if width == 0.0 || !v.is_finite() {
        return v.clamp(lo, hi);
    }
    // fold onto a triangle wave of period 2 * width
    let t = (v - lo).rem_euclid(2.0 * width);
    let t = if t > width { 2.0 * width - t } else { t };
    (lo + t).clamp(lo, hi)
}

/// A search point with a cached objective value.
///
/// Every mutable access to the position drops the cached fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    position: Vec<f64>,
    fitness: Option<f64>,
}

impl Individual {
    pub fn new(position: Vec<f64>) -> Self {
        Self {
            position,
            fitness: None,
        }
    }

    pub(crate) fn evaluated(position: Vec<f64>, fitness: f64) -> Self {
        Self {
            position,
            fitness: Some(fitness),
        }
    }

    pub fn position(&self) -> &[f64] {
        &self.position
    }

    pub fn into_position(self) -> Vec<f64> {
        self.position
    }

    pub fn fitness(&self) -> Option<f64> {
        self.fitness
    }

    pub fn is_evaluated(&self) -> bool {
        self.fitness.is_some()
    }

    pub fn set_position(&mut self, position: Vec<f64>) {
        self.position = position;
        self.fitness = None;
    }

    pub fn position_mut(&mut self) -> &mut [f64] {
        self.fitness = None;
        &mut self.position
    }

    /// Evaluates unconditionally and refreshes the cache.
    pub fn evaluate_with<O: Objective + ?Sized>(&mut self, obj: &O) -> f64 {
        let f = obj.evaluate(&self.position);
        self.fitness = Some(f);
        f
    }

    pub(crate) fn set_fitness(&mut self, f: f64) {
        self.fitness = Some(f);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
    bounds: Bounds,
    generation: usize,
}

impl Population {
    pub fn new(members: Vec<Individual>, bounds: Bounds) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        let d = bounds.dim();
        if let Some(bad) = members.iter().find(|m| m.position.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.position.len(),
            });
        }
        Ok(Self {
            members,
            bounds,
            generation: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub(crate) fn advance_generation(&mut self) {
        self.generation += 1;
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn members_mut(&mut self) -> &mut [Individual] {
        &mut self.members
    }

    pub fn member(&self, index: usize) -> &Individual {
        &self.members[index]
    }

    pub(crate) fn replace_members(&mut self, members: Vec<Individual>) {
        debug_assert_eq!(members.len(), self.members.len());
        self.members = members;
    }

    pub fn is_evaluated(&self) -> bool {
        self.members.iter().all(Individual::is_evaluated)
    }

    pub fn fitnesses(&self) -> Result<Vec<f64>> {
        self.members
            .iter()
            .enumerate()
            .map(|(index, m)| m.fitness.ok_or(Error::Unevaluated { index }))
            .collect()
    }

    /// Member indices sorted ascending by fitness; ties keep index order.
    pub fn ranked_indices(&self) -> Result<Vec<usize>> {
        let fit = self.fitnesses()?;
        Ok(rank_order(&fit))
    }

    /// Index of the lowest-fitness member (lowest index on ties).
    pub fn best_index(&self) -> Result<usize> {
        let fit = self.fitnesses()?;
        Ok(argmin(&fit))
    }
}

/// Indices sorted ascending by value, stable on ties.
pub(crate) fn rank_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

pub(crate) fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if v.total_cmp(&values[best]).is_lt() {
            best = i;
        }
    }
    best
}

/// Counts objective evaluations against a hard cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvaluationBudget {
    used: usize,
    max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetStatus {
    Completed,
    /// The cap was hit before all requested evaluations ran.
    Exhausted,
}

impl EvaluationBudget {
    pub fn new(max: usize) -> Self {
        Self { used: 0, max }
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn remaining(&self) -> usize {
        self.max - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.max
    }

    /// Evaluates as long a prefix of `positions` as the budget allows.
    ///
    /// Returns one fitness per evaluated position; the caller decides what to
    /// do with the unevaluated tail.
    pub fn evaluate_prefix<O, P>(&mut self, obj: &O, positions: &[P], exec: Execution) -> Vec<f64>
    where
        O: Objective + ?Sized,
        P: AsRef<[f64]> + Sync,
    {
        let grant = positions.len().min(self.remaining());
        let out = exec.map(&positions[..grant], |p| obj.evaluate(p.as_ref()));
        self.used += grant;
        out
    }

    /// Charges a single evaluation, or returns `None` when the cap is reached.
    pub fn evaluate_one<O: Objective + ?Sized>(&mut self, obj: &O, position: &[f64]) -> Option<f64> {
        if self.is_exhausted() {
            return None;
        }
        self.used += 1;
        Some(obj.evaluate(position))
    }
}

/// Samples `size` members uniformly inside `bounds`.
pub fn init_population(dim: usize, size: usize, bounds: &Bounds, rng: &mut Rng) -> Result<Population> {
    if dim == 0 {
        return Err(Error::config("dimensionality must be positive"));
    }
    if bounds.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bounds.dim(),
        });
    }
    if size < MIN_POPULATION {
        return Err(Error::PopulationTooSmall {
            size,
            min: MIN_POPULATION,
        });
    }
    let members = (0..size)
        .map(|_| {
            let pos = bounds
                .lower()
                .iter()
                .zip(bounds.upper())
                .map(|(&lo, &hi)| (lo + rng.random::<f64>() * (hi - lo)).min(hi))
                .collect();
            Individual::new(pos)
        })
        .collect();
    Population::new(members, bounds.clone())
}

/// Fills every missing fitness cache, in member order, until the budget runs out.
pub fn evaluate_population<O: Objective + ?Sized>(
    pop: &mut Population,
    obj: &O,
    budget: &mut EvaluationBudget,
    exec: Execution,
) -> Result<BudgetStatus> {
    if obj.dimension() != pop.dim() {
        return Err(Error::DimensionMismatch {
            expected: pop.dim(),
            found: obj.dimension(),
        });
    }
    let pending: Vec<usize> = (0..pop.len())
        .filter(|&i| !pop.members[i].is_evaluated())
        .collect();
    let positions: Vec<&[f64]> = pending.iter().map(|&i| pop.members[i].position()).collect();
    let values = budget.evaluate_prefix(obj, &positions, exec);
    for (&i, f) in pending.iter().zip(&values) {
        pop.members[i].set_fitness(*f);
    }
    Ok(if values.len() < pending.len() {
        BudgetStatus::Exhausted
    } else {
        BudgetStatus::Completed
    })
}

/// The `k` lowest-fitness members, ascending, ties by lower index.
pub fn best_k(pop: &Population, k: usize) -> Result<Vec<Individual>> {
    if k > pop.len() {
        return Err(Error::SelectionTooLarge {
            requested: k,
            available: pop.len(),
        });
    }
    let order = pop.ranked_indices()?;
    Ok(order[..k].iter().map(|&i| pop.members[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{Counted, FnObjective, Sphere};
    use crate::seed::rng_from_seed;
    use proptest::prelude::*;

    fn pop_with_fitness(fit: &[f64]) -> Population {
        let members = fit
            .iter()
            .enumerate()
            .map(|(i, &f)| Individual::evaluated(vec![i as f64], f))
            .collect();
        Population::new(members, Bounds::uniform(1, -100.0, 100.0).unwrap()).unwrap()
    }

    #[test]
    fn bounds_reject_inverted_and_mismatched() {
        assert!(matches!(
            Bounds::new(vec![1.0], vec![0.0]),
            Err(Error::InvalidBounds { .. })
        ));
        assert!(matches!(
            Bounds::new(vec![0.0, 0.0], vec![1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn init_within_bounds() {
        let b = Bounds::uniform(2, -1.0, 1.0).unwrap();
        let pop = init_population(2, 5, &b, &mut rng_from_seed(42)).unwrap();
        assert_eq!(pop.len(), 5);
        assert!(pop.members().iter().all(|m| b.contains(m.position())));
        assert!(!pop.is_evaluated());
    }

    #[test]
    fn init_degenerate_interval() {
        let b = Bounds::uniform(1, 0.5, 0.5).unwrap();
        let pop = init_population(1, 4, &b, &mut rng_from_seed(1)).unwrap();
        assert!(pop.members().iter().all(|m| m.position() == [0.5]));
    }

    #[test]
    fn init_iris_sized() {
        let b = Bounds::uniform(43, -1.0, 1.0).unwrap();
        let pop = init_population(43, 50, &b, &mut rng_from_seed(3)).unwrap();
        assert_eq!(pop.len(), 50);
        assert_eq!(pop.dim(), 43);
    }

    #[test]
    fn init_errors() {
        let b = Bounds::uniform(2, -1.0, 1.0).unwrap();
        assert!(matches!(
            init_population(3, 10, &b, &mut rng_from_seed(0)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            init_population(2, 3, &b, &mut rng_from_seed(0)),
            Err(Error::PopulationTooSmall { size: 3, min: 4 })
        ));
    }

    #[test]
    fn evaluation_counts_and_is_idempotent() {
        let b = Bounds::uniform(3, -1.0, 1.0).unwrap();
        let mut pop = init_population(3, 50, &b, &mut rng_from_seed(9)).unwrap();
        let obj = Counted::new(Sphere(3));
        let mut budget = EvaluationBudget::new(25_000);
        let st = evaluate_population(&mut pop, &obj, &mut budget, Execution::Sequential).unwrap();
        assert_eq!(st, BudgetStatus::Completed);
        assert_eq!(budget.used(), 50);
        let st = evaluate_population(&mut pop, &obj, &mut budget, Execution::Parallel).unwrap();
        assert_eq!(st, BudgetStatus::Completed);
        assert_eq!(budget.used(), 50);
        assert_eq!(obj.calls(), 50);
    }

    #[test]
    fn evaluation_stops_at_budget() {
        let b = Bounds::uniform(2, -1.0, 1.0).unwrap();
        let mut pop = init_population(2, 10, &b, &mut rng_from_seed(9)).unwrap();
        let mut budget = EvaluationBudget::new(4);
        let st = evaluate_population(&mut pop, &Sphere(2), &mut budget, Execution::Sequential).unwrap();
        assert_eq!(st, BudgetStatus::Exhausted);
        assert_eq!(budget.used(), 4);
        assert_eq!(pop.members().iter().filter(|m| m.is_evaluated()).count(), 4);
        // prefix in member order
        assert!(pop.members()[..4].iter().all(Individual::is_evaluated));
    }

    #[test]
    fn sphere_zero_at_origin() {
        let members = vec![
            Individual::new(vec![0.0, 0.0]),
            Individual::new(vec![1.0, 0.0]),
            Individual::new(vec![0.0, 1.0]),
            Individual::new(vec![1.0, 1.0]),
        ];
        let mut pop = Population::new(members, Bounds::uniform(2, -1.0, 1.0).unwrap()).unwrap();
        let mut budget = EvaluationBudget::new(10);
        evaluate_population(&mut pop, &Sphere(2), &mut budget, Execution::Sequential).unwrap();
        assert_eq!(pop.member(0).fitness(), Some(0.0));
    }

    #[test]
    fn position_write_invalidates_cache() {
        let mut ind = Individual::new(vec![1.0]);
        ind.evaluate_with(&Sphere(1));
        assert!(ind.is_evaluated());
        ind.position_mut()[0] = 2.0;
        assert!(!ind.is_evaluated());
        ind.evaluate_with(&Sphere(1));
        ind.set_position(vec![3.0]);
        assert_eq!(ind.fitness(), None);
    }

    #[test]
    fn best_k_sorts() {
        let pop = pop_with_fitness(&[3.0, 1.0, 2.0]);
        let best = best_k(&pop, 2).unwrap();
        let f: Vec<f64> = best.iter().map(|m| m.fitness().unwrap()).collect();
        assert_eq!(f, vec![1.0, 2.0]);
    }

    #[test]
    fn best_k_ties_by_index() {
        let pop = pop_with_fitness(&[7.0; 5]);
        let best = best_k(&pop, 3).unwrap();
        let pos: Vec<f64> = best.iter().map(|m| m.position()[0]).collect();
        assert_eq!(pos, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn best_k_matches_bruteforce_sort() {
        use rand::Rng as _;
        let mut rng = rng_from_seed(2024);
        // coarse values force plenty of ties
        let fit: Vec<f64> = (0..50).map(|_| rng.random_range(0..12) as f64).collect();
        let pop = pop_with_fitness(&fit);
        let got: Vec<f64> = best_k(&pop, 50)
            .unwrap()
            .iter()
            .map(|m| m.position()[0])
            .collect();

        // selection-sort oracle: repeatedly take the smallest unused, first wins ties
        let mut used = vec![false; fit.len()];
        let mut want = Vec::new();
        for _ in 0..fit.len() {
            let mut pick = None;
            for i in 0..fit.len() {
                if used[i] {
                    continue;
                }
                match pick {
                    None => pick = Some(i),
                    Some(p) if fit[i] < fit[p] => pick = Some(i),
                    _ => {}
                }
            }
            let p = pick.unwrap();
            used[p] = true;
            want.push(p as f64);
        }
        assert_eq!(got, want);
    }

    #[test]
    fn best_k_errors() {
        let pop = pop_with_fitness(&[1.0, 2.0]);
        assert!(matches!(best_k(&pop, 3), Err(Error::SelectionTooLarge { .. })));
        let b = Bounds::uniform(1, 0.0, 1.0).unwrap();
        let pop = Population::new(vec![Individual::new(vec![0.5])], b).unwrap();
        assert!(matches!(best_k(&pop, 1), Err(Error::Unevaluated { index: 0 })));
    }

    #[test]
    fn reflect_folds_back() {
        assert_eq!(reflect(1.5, 0.0, 1.0), 0.5);
        assert_eq!(reflect(-0.25, 0.0, 1.0), 0.25);
        assert_eq!(reflect(2.5, 0.0, 1.0), 0.5);
        assert_eq!(reflect(0.3, 0.0, 1.0), 0.3);
        assert_eq!(reflect(4.0, 1.0, 1.0), 1.0);
    }

    proptest! {
        #[test]
        fn init_always_inside(seed in any::<u64>(), lo in -10.0f64..0.0, w in 0.0f64..5.0, d in 1usize..8) {
            let b = Bounds::uniform(d, lo, lo + w).unwrap();
            let pop = init_population(d, 6, &b, &mut rng_from_seed(seed)).unwrap();
            prop_assert!(pop.members().iter().all(|m| b.contains(m.position())));
        }

        #[test]
        fn best_k_is_a_permutation(fit in proptest::collection::vec(-5i32..5, 4..40)) {
            let fit: Vec<f64> = fit.into_iter().map(f64::from).collect();
            let pop = pop_with_fitness(&fit);
            let mut ids: Vec<usize> = best_k(&pop, fit.len()).unwrap()
                .iter().map(|m| m.position()[0] as usize).collect();
            ids.sort_unstable();
            prop_assert_eq!(ids, (0..fit.len()).collect::<Vec<_>>());
        }

        #[test]
        fn repair_lands_inside(x in proptest::collection::vec(-50.0f64..50.0, 1..10), reflect in any::<bool>()) {
            let b = Bounds::uniform(x.len(), -1.0, 2.0).unwrap();
            let mut y = x.clone();
            let policy = if reflect { RepairPolicy::Reflect } else { RepairPolicy::Clamp };
            policy.apply(&mut y, &b);
            prop_assert!(b.contains(&y));
        }
    }

    #[test]
    fn fn_objective_dimension() {
        let f = FnObjective::new(3, |x: &[f64]| x[0]);
        assert_eq!(f.dimension(), 3);
    }
}
