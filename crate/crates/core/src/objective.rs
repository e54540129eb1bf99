//! The objective contract plus a few analytic test functions.

use std::sync::atomic::{AtomicUsize, Ordering};

/// A deterministic scalar objective, minimized.
///
/// Implementations must be shareable across threads: independent runs and
/// batch evaluation may call `evaluate` concurrently.
pub trait Objective: Sync {
    fn dimension(&self) -> usize;

    fn evaluate(&self, position: &[f64]) -> f64;
}

impl<O: Objective + ?Sized> Objective for &O {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn evaluate(&self, position: &[f64]) -> f64 {
        (**self).evaluate(position)
    }
}

/// Adapts a closure into an [`Objective`].
pub struct FnObjective<F> {
    dimension: usize,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(dimension: usize, f: F) -> Self {
        Self { dimension, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&self, position: &[f64]) -> f64 {
        (self.f)(position)
    }
}

/// Wraps an objective and counts every call, independently of any budget.
pub struct Counted<O> {
    inner: O,
    calls: AtomicUsize,
}

impl<O: Objective> Counted<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: Objective> Objective for Counted<O> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn evaluate(&self, position: &[f64]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.evaluate(position)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Sphere(pub usize);

impl Objective for Sphere {
    fn dimension(&self) -> usize {
        self.0
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Rastrigin(pub usize);

impl Objective for Rastrigin {
    fn dimension(&self) -> usize {
        self.0
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        let tau = std::f64::consts::TAU;
        10.0 * x.len() as f64
            + x.iter()
                .map(|v| v * v - 10.0 * (tau * v).cos())
                .sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Rosenbrock(pub usize);

impl Objective for Rosenbrock {
    fn dimension(&self) -> usize {
        self.0
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        x.windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum()
    }
}
