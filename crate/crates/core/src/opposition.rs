//! Opposition-based learning: opposite and quasi-opposite points, the
//! population-level opposition step, and population-derived (dynamic) bounds.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::objective::Objective;
use crate::population::{
    evaluate_population, rank_order, Bounds, BudgetStatus, EvaluationBudget, Individual, Population,
};
use crate::seed::Rng;

/// Largest jumping rate accepted by [`OppositionConfig::new`].
pub const MAX_JUMPING_RATE: f64 = 0.4;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OppositionMode {
    #[default]
    Quasi,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OppositionConfig {
    jumping_rate: f64,
    mode: OppositionMode,
    capped: bool,
}

impl Default for OppositionConfig {
    fn default() -> Self {
        Self {
            jumping_rate: 0.3,
            mode: OppositionMode::Quasi,
            capped: true,
        }
    }
}

impl OppositionConfig {
    pub fn new(jumping_rate: f64, mode: OppositionMode) -> Result<Self> {
        let cfg = Self {
            jumping_rate,
            mode,
            capped: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Accepts any rate in `[0, 1]`, bypassing the usual 0.4 ceiling.
    pub fn uncapped(jumping_rate: f64, mode: OppositionMode) -> Result<Self> {
        let cfg = Self {
            jumping_rate,
            mode,
            capped: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn jumping_rate(&self) -> f64 {
        self.jumping_rate
    }

    pub fn mode(&self) -> OppositionMode {
        self.mode
    }

    pub fn validate(&self) -> Result<()> {
        let hi = if self.capped { MAX_JUMPING_RATE } else { 1.0 };
        if !(0.0..=hi).contains(&self.jumping_rate) {
            return Err(Error::config(format!(
                "jumping rate {} not in [0, {hi}]",
                self.jumping_rate
            )));
        }
        Ok(())
    }
}

fn check_interval(x: f64, a: f64, b: f64) -> Result<()> {
    if !(a <= b) {
        return Err(Error::InvalidBounds {
            dim: 0,
            lower: a,
            upper: b,
        });
    }
    if !(a <= x && x <= b) {
        return Err(Error::OutOfRange {
            value: x,
            lower: a,
            upper: b,
        });
    }
    Ok(())
}

pub fn opposite(x: f64, a: f64, b: f64) -> Result<f64> {
    check_interval(x, a, b)?;
    Ok(a + b - x)
}

/// Uniform draw between the interval centre and the opposite of `x`.
pub fn quasi_opposite(x: f64, a: f64, b: f64, rng: &mut Rng) -> Result<f64> {
    check_interval(x, a, b)?;
    Ok(quasi_unchecked(x, a, b, rng))
}

fn quasi_unchecked(x: f64, a: f64, b: f64, rng: &mut Rng) -> f64 {
    let c = (a + b) / 2.0;
    let o = a + b - x;
    let (lo, hi) = if o < c { (o, c) } else { (c, o) };
    let u: f64 = rng.random();
    (lo + u * (hi - lo)).clamp(lo, hi).clamp(a, b)
}

/// Per-dimension min and max over the population's positions.
pub fn dynamic_bounds(pop: &Population) -> Result<Bounds> {
    let first = pop.members().first().ok_or(Error::EmptyPopulation)?;
    let mut lower = first.position().to_vec();
    let mut upper = lower.clone();
    for m in &pop.members()[1..] {
        for (j, &v) in m.position().iter().enumerate() {
            lower[j] = lower[j].min(v);
            upper[j] = upper[j].max(v);
        }
    }
    Bounds::new(lower, upper)
}

/// Opposite population of `pop` within `bounds`, one draw per coordinate in
/// member-major order. Coordinates outside `bounds` are clamped first.
pub fn opposite_population(pop: &Population, bounds: &Bounds, mode: OppositionMode, rng: &mut Rng) -> Result<Vec<Vec<f64>>> {
    if bounds.dim() != pop.dim() {
        return Err(Error::DimensionMismatch {
            expected: pop.dim(),
            found: bounds.dim(),
        });
    }
    Ok(pop
        .members()
        .iter()
        .map(|m| {
            m.position()
                .iter()
                .zip(bounds.lower().iter().zip(bounds.upper()))
                .map(|(&x, (&a, &b))| {
                    let x = x.clamp(a, b);
                    match mode {
                        OppositionMode::Quasi => quasi_unchecked(x, a, b, rng),
                        OppositionMode::Plain => a + b - x,
                    }
                })
                .collect()
        })
        .collect())
}

/// Replaces `pop` with the best `N_P` members of `pop` plus its opposite.
///
/// Opposite evaluations are charged to `budget`. When the budget runs out only
/// the evaluated prefix of the opposite population competes. Survivors keep
/// union order (current members first), so a fully dominated side drops out
/// without reordering the other.
pub fn obl_select<O: Objective + ?Sized>(
    pop: &mut Population,
    bounds: &Bounds,
    mode: OppositionMode,
    obj: &O,
    budget: &mut EvaluationBudget,
    exec: Execution,
    rng: &mut Rng,
) -> Result<BudgetStatus> {
    if evaluate_population(pop, obj, budget, exec)? == BudgetStatus::Exhausted {
        return Ok(BudgetStatus::Exhausted);
    }
    let opp = opposite_population(pop, bounds, mode, rng)?;
    let opp_fit = budget.evaluate_prefix(obj, &opp, exec);
    let status = if opp_fit.len() < opp.len() {
        BudgetStatus::Exhausted
    } else {
        BudgetStatus::Completed
    };

    let n = pop.len();
    let mut union_fit = pop.fitnesses()?;
    union_fit.extend_from_slice(&opp_fit);
    let mut chosen: Vec<usize> = rank_order(&union_fit)[..n].to_vec();
    chosen.sort_unstable();

    let mut opp_iter: Vec<Option<Vec<f64>>> = opp.into_iter().map(Some).collect();
    let old = pop.members().to_vec();
    let next = chosen
        .into_iter()
        .map(|i| {
            if i < n {
                old[i].clone()
            } else {
                let pos = opp_iter[i - n].take().expect("each opposite chosen once");
                Individual::evaluated(pos, union_fit[i])
            }
        })
        .collect();
    pop.replace_members(next);
    Ok(status)
}
