use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rng::hash_unit;

/// Default convergence tolerance: agreement to twelve decimal places.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

pub type Objective = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Additive noise applied on top of the objective.
///
/// `Hashed` adds a uniform `[0, 1)` term keyed by the position's bit pattern,
/// so the value is different for every distinct evaluated point while runs
/// stay reproducible and independent of thread scheduling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    None,
    Hashed { seed: u64 },
}

impl Noise {
    fn sample(&self, position: &[f64]) -> f64 {
        match *self {
            Noise::None => 0.0,
            Noise::Hashed { seed } => hash_unit(seed, position.iter().map(|x| x.to_bits())),
        }
    }
}

#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub dimension: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub known_min: f64,
    pub tolerance: f64,
    pub stochastic: bool,
    pub noise: Noise,
    objective: Objective,
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        known_min: f64,
        objective: Objective,
    ) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::Config("problem dimension must be positive".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if let Some(k) = (0..lower.len()).find(|&k| !(lower[k] < upper[k])) {
            return Err(Error::Config(format!(
                "bounds at coordinate {k} are empty: [{}, {}]",
                lower[k], upper[k]
            )));
        }
        Ok(Self {
            name: name.into(),
            dimension: lower.len(),
            lower,
            upper,
            known_min,
            tolerance: DEFAULT_TOLERANCE,
            stochastic: false,
            noise: Noise::None,
            objective,
        })
    }

    /// Box `[lo, hi]^dimension`.
    pub fn cube(
        name: impl Into<String>,
        dimension: usize,
        lo: f64,
        hi: f64,
        known_min: f64,
        objective: Objective,
    ) -> Result<Self> {
        Self::new(
            name,
            vec![lo; dimension],
            vec![hi; dimension],
            known_min,
            objective,
        )
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be > 0, got {tolerance}"
            )));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn with_noise(mut self, noise: Noise) -> Self {
        self.stochastic = noise != Noise::None;
        self.noise = noise;
        self
    }

    /// Objective value at `position`, noise included.
    pub fn evaluate(&self, position: &[f64]) -> Result<f64> {
        self.check_position(position)?;
        Ok((self.objective)(position) + self.noise.sample(position))
    }

    /// Objective value with the noise term suppressed.
    pub fn evaluate_noiseless(&self, position: &[f64]) -> Result<f64> {
        self.check_position(position)?;
        Ok((self.objective)(position))
    }

    fn check_position(&self, position: &[f64]) -> Result<()> {
        if position.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: position.len(),
            });
        }
        if let Some((index, &value)) = position.iter().enumerate().find(|(_, x)| !x.is_finite()) {
            return Err(Error::NonFiniteCoordinate { index, value });
        }
        Ok(())
    }

    pub fn contains(&self, position: &[f64]) -> bool {
        position.len() == self.dimension
            && position
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Projects `position` onto the box in place.
    pub fn clamp_in_place(&self, position: &mut [f64]) {
        for ((x, lo), hi) in position.iter_mut().zip(&self.lower).zip(&self.upper) {
            *x = x.max(*lo).min(*hi);
        }
    }

    /// Convergence test against the known minimum: the best value found may
    /// exceed `known_min` by at most `tolerance`.
    pub fn reached(&self, fitness: f64, tolerance: f64) -> bool {
        fitness - self.known_min <= tolerance
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("known_min", &self.known_min)
            .field("tolerance", &self.tolerance)
            .field("stochastic", &self.stochastic)
            .finish_non_exhaustive()
    }
}

/// Projection of `position` onto the problem's box.
pub fn clamp_to_bounds(position: &[f64], problem: &Problem) -> Vec<f64> {
    let mut out = position.to_vec();
    problem.clamp_in_place(&mut out);
    out
}

/// Exact shared evaluation counter.
#[derive(Debug, Default)]
pub struct EvalCounter(AtomicU64);

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn evaluate(&self, problem: &Problem, position: &[f64]) -> Result<f64> {
        let value = problem.evaluate(position)?;
        self.0.fetch_add(1, Ordering::Relaxed);
        Ok(value)
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}
