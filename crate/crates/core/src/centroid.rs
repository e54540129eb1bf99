//! Centroid-of-best injection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::population::{BudgetStatus, EvaluationBudget, Individual, Population};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InjectionSlot {
    /// The last member index.
    #[default]
    Last,
    /// The highest-fitness member; among equals, the one ranked last.
    Worst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CentroidConfig {
    pub count: usize,
    pub slot: InjectionSlot,
}

impl Default for CentroidConfig {
    fn default() -> Self {
        Self {
            count: 3,
            slot: InjectionSlot::Last,
        }
    }
}

impl CentroidConfig {
    pub fn new(count: usize) -> Self {
        Self {
            count,
            slot: InjectionSlot::Last,
        }
    }

    pub fn validate(&self, population_size: usize) -> Result<()> {
        if self.count == 0 || self.count > population_size {
            return Err(Error::config(format!(
                "centroid count {} not in [1, {population_size}]",
                self.count
            )));
        }
        Ok(())
    }
}

/// Coordinate-wise mean of the `cfg.count` lowest-fitness members.
pub fn centroid_of_best(pop: &Population, cfg: &CentroidConfig) -> Result<Vec<f64>> {
    cfg.validate(pop.len())?;
    let order = pop.ranked_indices()?;
    let mut sum = vec![0.0; pop.dim()];
    for &i in &order[..cfg.count] {
        for (s, &x) in sum.iter_mut().zip(pop.member(i).position()) {
            *s += x;
        }
    }
    let n = cfg.count as f64;
    Ok(sum.into_iter().map(|s| s / n).collect())
}

/// Evaluates the centroid (one budgeted call) and writes it into the
/// configured slot. Skipped when the budget is already spent.
pub fn inject_centroid<O: Objective + ?Sized>(
    pop: &mut Population,
    cfg: &CentroidConfig,
    obj: &O,
    budget: &mut EvaluationBudget,
) -> Result<BudgetStatus> {
    let centre = centroid_of_best(pop, cfg)?;
    let Some(f) = budget.evaluate_one(obj, &centre) else {
        return Ok(BudgetStatus::Exhausted);
    };
    let slot = match cfg.slot {
        InjectionSlot::Last => pop.len() - 1,
        InjectionSlot::Worst => *pop.ranked_indices()?.last().expect("non-empty"),
    };
    pop.members_mut()[slot] = Individual::evaluated(centre, f);
    Ok(BudgetStatus::Completed)
}
