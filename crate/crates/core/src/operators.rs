//! Differential-evolution variation and selection operators.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::{Individual, Population, RepairPolicy, MIN_POPULATION};
use crate::seed::Rng;

/// Scaling factor `f` and crossover rate `cr`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeParams {
    pub f: f64,
    pub cr: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self { f: 0.5, cr: 0.9 }
    }
}

impl DeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.f > 0.0 && self.f <= 2.0) {
            return Err(Error::config(format!("scaling factor {} not in (0, 2]", self.f)));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::config(format!("crossover rate {} not in [0, 1]", self.cr)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationStrategy {
    /// `x_r1 + F (x_r2 - x_r3)`
    Rand1,
    /// `x_i + F (x_best - x_i) + F (x_r2 - x_r3)`
    #[default]
    LocalToBest1,
}

/// Draws `K` distinct indices from `0..n`, none equal to `exclude`.
///
/// Rejection sampling; the draw sequence is part of the reproducibility
/// contract, so keep the order of `random_range` calls stable.
pub fn distinct_donors<const K: usize>(n: usize, exclude: usize, rng: &mut Rng) -> Result<[usize; K]> {
    if n < K + 1 {
        return Err(Error::PopulationTooSmall { size: n, min: K + 1 });
    }
    let mut out = [0usize; K];
    for k in 0..K {
        loop {
            let r = rng.random_range(0..n);
            if r != exclude && !out[..k].contains(&r) {
                out[k] = r;
                break;
            }
        }
    }
    Ok(out)
}

pub fn rand1(base: &[f64], a: &[f64], b: &[f64], f: f64) -> Vec<f64> {
    base.iter()
        .zip(a.iter().zip(b))
        .map(|(&x, (&p, &q))| x + f * (p - q))
        .collect()
}

pub fn local_to_best1(current: &[f64], best: &[f64], a: &[f64], b: &[f64], f: f64) -> Vec<f64> {
    current
        .iter()
        .zip(best)
        .zip(a.iter().zip(b))
        .map(|((&x, &xb), (&p, &q))| x + f * (xb - x) + f * (p - q))
        .collect()
}

fn check_population(pop: &Population, target: usize) -> Result<()> {
    if pop.len() < MIN_POPULATION {
        return Err(Error::PopulationTooSmall {
            size: pop.len(),
            min: MIN_POPULATION,
        });
    }
    if target >= pop.len() {
        return Err(Error::SelectionTooLarge {
            requested: target + 1,
            available: pop.len(),
        });
    }
    Ok(())
}

/// DE/rand/1 mutant for `target`, repaired into the population bounds.
pub fn mutate_rand1(
    pop: &Population,
    target: usize,
    params: &DeParams,
    repair: RepairPolicy,
    rng: &mut Rng,
) -> Result<Vec<f64>> {
    check_population(pop, target)?;
    let [r1, r2, r3] = distinct_donors::<3>(pop.len(), target, rng)?;
    let m = pop.members();
    let mut v = rand1(m[r1].position(), m[r2].position(), m[r3].position(), params.f);
    repair.apply(&mut v, pop.bounds());
    Ok(v)
}

/// DE/local-to-best/1 mutant for `target`, repaired into the population bounds.
pub fn mutate_local_to_best1(
    pop: &Population,
    target: usize,
    best: &Individual,
    params: &DeParams,
    repair: RepairPolicy,
    rng: &mut Rng,
) -> Result<Vec<f64>> {
    check_population(pop, target)?;
    if best.position().len() != pop.dim() {
        return Err(Error::DimensionMismatch {
            expected: pop.dim(),
            found: best.position().len(),
        });
    }
    let [r2, r3] = distinct_donors::<2>(pop.len(), target, rng)?;
    let m = pop.members();
    let mut v = local_to_best1(
        m[target].position(),
        best.position(),
        m[r2].position(),
        m[r3].position(),
        params.f,
    );
    repair.apply(&mut v, pop.bounds());
    Ok(v)
}

/// Binomial crossover. One uniform draw per coordinate, preceded by the
/// forced index `j_rand`.
pub fn crossover_binomial(target: &[f64], mutant: &[f64], cr: f64, rng: &mut Rng) -> Result<Vec<f64>> {
    if target.len() != mutant.len() {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            found: mutant.len(),
        });
    }
    if target.is_empty() {
        return Ok(Vec::new());
    }
    let j_rand = rng.random_range(0..target.len());
    Ok(target
        .iter()
        .zip(mutant)
        .enumerate()
        .map(|(j, (&x, &v))| {
            let r: f64 = rng.random();
            if r <= cr || j == j_rand {
                v
            } else {
                x
            }
        })
        .collect())
}

/// Keeps the trial only if it is strictly better.
pub fn select_greedy(target: Individual, trial: Individual) -> Result<Individual> {
    let ft = target.fitness().ok_or(Error::Unevaluated { index: 0 })?;
    let fu = trial.fitness().ok_or(Error::Unevaluated { index: 1 })?;
    Ok(if fu < ft { trial } else { target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::Bounds;
    use crate::seed::rng_from_seed;
    use proptest::prelude::*;

    fn line_pop(xs: &[f64]) -> Population {
        let members = xs.iter().map(|&x| Individual::new(vec![x])).collect();
        Population::new(members, Bounds::uniform(1, -100.0, 100.0).unwrap()).unwrap()
    }

    #[test]
    fn rand1_arithmetic() {
        assert_eq!(rand1(&[1.0], &[2.0], &[2.0], 0.5), vec![1.0]);
        assert_eq!(rand1(&[0.0], &[4.0], &[2.0], 0.5), vec![1.0]);
        assert_eq!(rand1(&[0.3, -2.0], &[9.0, 1.0], &[4.0, 7.0], 0.0), vec![0.3, -2.0]);
    }

    #[test]
    fn local_to_best_arithmetic() {
        assert_eq!(local_to_best1(&[0.0], &[2.0], &[1.0], &[-1.0], 0.5), vec![2.0]);
        let x = [0.7, -0.2, 3.0];
        assert_eq!(local_to_best1(&x, &x, &[5.0, 5.0, 5.0], &[5.0, 5.0, 5.0], 0.8), x.to_vec());
    }

    #[test]
    fn mutate_with_f_zero_returns_a_donor() {
        let pop = line_pop(&[10.0, 20.0, 30.0, 40.0, 50.0]);
        let params = DeParams { f: 0.0, cr: 0.9 };
        for seed in 0..20 {
            let v = mutate_rand1(&pop, 0, &params, RepairPolicy::None, &mut rng_from_seed(seed)).unwrap();
            assert!([20.0, 30.0, 40.0, 50.0].contains(&v[0]));
        }
    }

    #[test]
    fn mutation_needs_four_members() {
        let pop = line_pop(&[1.0, 2.0, 3.0]);
        let err = mutate_rand1(&pop, 0, &DeParams::default(), RepairPolicy::Clamp, &mut rng_from_seed(0));
        assert!(matches!(err, Err(Error::PopulationTooSmall { .. })));
    }

    #[test]
    fn donors_are_distinct_and_exclude_target() {
        let mut rng = rng_from_seed(5);
        for t in 0..4 {
            for _ in 0..200 {
                let d = distinct_donors::<3>(4, t, &mut rng).unwrap();
                assert!(!d.contains(&t));
                assert!(d[0] != d[1] && d[1] != d[2] && d[0] != d[2]);
            }
        }
    }

    #[test]
    fn mutant_is_clamped() {
        let members = vec![
            Individual::new(vec![1.0]),
            Individual::new(vec![1.0]),
            Individual::new(vec![1.0]),
            Individual::new(vec![-1.0]),
        ];
        let pop = Population::new(members, Bounds::uniform(1, -1.0, 1.0).unwrap()).unwrap();
        let params = DeParams { f: 2.0, cr: 1.0 };
        for seed in 0..30 {
            let v = mutate_rand1(&pop, 0, &params, RepairPolicy::Clamp, &mut rng_from_seed(seed)).unwrap();
            assert!((-1.0..=1.0).contains(&v[0]));
        }
    }

    #[test]
    fn crossover_extremes() {
        let t = vec![0.0; 8];
        let m = vec![1.0; 8];
        let mut rng = rng_from_seed(11);
        assert_eq!(crossover_binomial(&t, &m, 1.0, &mut rng).unwrap(), m);
        let u = crossover_binomial(&t, &m, 0.0, &mut rng).unwrap();
        assert_eq!(u.iter().filter(|&&x| x == 1.0).count(), 1);
        for cr in [0.0, 0.3, 1.0] {
            assert_eq!(crossover_binomial(&[5.0], &[6.0], cr, &mut rng).unwrap(), vec![6.0]);
        }
        assert!(crossover_binomial(&[1.0, 2.0], &[1.0], 0.5, &mut rng).is_err());
    }

    #[test]
    fn crossover_mixing_rate() {
        let d = 1000;
        let t = vec![0.0; d];
        let m = vec![1.0; d];
        let mut rng = rng_from_seed(77);
        let trials = 50;
        let mut taken = 0usize;
        for _ in 0..trials {
            let u = crossover_binomial(&t, &m, 0.5, &mut rng).unwrap();
            taken += u.iter().filter(|&&x| x == 1.0).count();
        }
        let frac = taken as f64 / (trials * d) as f64;
        assert!((frac - 0.5).abs() <= 0.05, "fraction {frac}");
    }

    #[test]
    fn greedy_selection_rules() {
        let x = |f| Individual::evaluated(vec![0.0], f);
        let u = |f| Individual::evaluated(vec![1.0], f);
        assert_eq!(select_greedy(x(2.0), u(1.0)).unwrap().position(), &[1.0]);
        assert_eq!(select_greedy(x(2.0), u(2.0)).unwrap().position(), &[0.0]);
        assert_eq!(select_greedy(x(2.0), u(3.0)).unwrap().position(), &[0.0]);
        assert!(select_greedy(Individual::new(vec![0.0]), u(1.0)).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(DeParams::default().validate().is_ok());
        assert!(DeParams { f: 0.0, cr: 0.5 }.validate().is_err());
        assert!(DeParams { f: 2.5, cr: 0.5 }.validate().is_err());
        assert!(DeParams { f: 0.5, cr: 1.1 }.validate().is_err());
    }

    proptest! {
        #[test]
        fn crossover_coordinates_come_from_parents(
            seed in any::<u64>(),
            cr in 0.0f64..=1.0,
            pairs in proptest::collection::vec((-5.0f64..5.0, 10.0f64..20.0), 1..30),
        ) {
            let (t, m): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let u = crossover_binomial(&t, &m, cr, &mut rng_from_seed(seed)).unwrap();
            let mut from_mutant = 0;
            for j in 0..u.len() {
                prop_assert!(u[j] == t[j] || u[j] == m[j]);
                if u[j] == m[j] { from_mutant += 1; }
            }
            prop_assert!(from_mutant >= 1);
        }
    }
}
