//! The 26-function benchmark catalog.
//!
//! Definitions follow the classic unconstrained suite used for GA, DE, PSO,
//! BA, PBA and SOS comparisons. Every coordinate shares one interval per
//! problem. Known minima for the Michalewicz, Shubert and six-hump camel
//! entries are stored at the printed precision (five significant digits), so
//! those entries use a looser convergence tolerance.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Noise, Objective, Problem};

/// Tolerance for entries whose optimum is irrational.
pub const PRINTED_MIN_TOLERANCE: f64 = 1e-4;

/// Michalewicz steepness.
pub const MICHALEWICZ_M: i32 = 10;

pub const CATALOG_LEN: usize = 26;

#[derive(Debug, Clone)]
pub struct BenchmarkEntry {
    pub index: usize,
    pub problem: Problem,
    pub minimizer_hint: Option<Vec<f64>>,
}

/// Problem lookup key: catalog index or case-insensitive name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProblemSelector {
    Index(usize),
    Name(String),
}

impl From<usize> for ProblemSelector {
    fn from(i: usize) -> Self {
        ProblemSelector::Index(i)
    }
}

impl From<&str> for ProblemSelector {
    fn from(s: &str) -> Self {
        s.parse()
            .unwrap_or_else(|_| ProblemSelector::Name(s.to_string()))
    }
}

impl FromStr for ProblemSelector {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        Ok(match s.parse::<usize>() {
            Ok(i) => ProblemSelector::Index(i),
            Err(_) => ProblemSelector::Name(s.to_string()),
        })
    }
}

impl fmt::Display for ProblemSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSelector::Index(i) => write!(f, "{i}"),
            ProblemSelector::Name(n) => f.write_str(n),
        }
    }
}

/// Machine-readable catalog row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub index: usize,
    pub name: String,
    pub dimension: usize,
    pub lower: f64,
    pub upper: f64,
    pub known_min: f64,
    pub tolerance: f64,
    pub stochastic: bool,
}

struct Spec {
    name: &'static str,
    dimension: usize,
    lo: f64,
    hi: f64,
    known_min: f64,
    objective: fn(&[f64]) -> f64,
}

#[rustfmt::skip]
const SPECS: [Spec; CATALOG_LEN] = [
    Spec { name: "Beale", dimension: 2, lo: -4.5, hi: 4.5, known_min: 0.0, objective: beale },
    Spec { name: "Easom", dimension: 2, lo: -100.0, hi: 100.0, known_min: -1.0, objective: easom },
    Spec { name: "Matyas", dimension: 2, lo: -10.0, hi: 10.0, known_min: 0.0, objective: matyas },
    Spec { name: "Bohachevsky1", dimension: 2, lo: -100.0, hi: 100.0, known_min: 0.0, objective: bohachevsky1 },
    Spec { name: "Booth", dimension: 2, lo: -10.0, hi: 10.0, known_min: 0.0, objective: booth },
    Spec { name: "Michalewicz2", dimension: 2, lo: 0.0, hi: PI, known_min: -1.8013, objective: michalewicz },
    Spec { name: "Schaffer", dimension: 2, lo: -100.0, hi: 100.0, known_min: 0.0, objective: schaffer },
    Spec { name: "SixHumpCamelBack", dimension: 2, lo: -5.0, hi: 5.0, known_min: -1.03163, objective: six_hump_camel_back },
    Spec { name: "Bohachevsky2", dimension: 2, lo: -100.0, hi: 100.0, known_min: 0.0, objective: bohachevsky2 },
    Spec { name: "Bohachevsky3", dimension: 2, lo: -100.0, hi: 100.0, known_min: 0.0, objective: bohachevsky3 },
    Spec { name: "Shubert", dimension: 2, lo: -10.0, hi: 10.0, known_min: -186.73, objective: shubert },
    Spec { name: "Colville", dimension: 4, lo: -10.0, hi: 10.0, known_min: 0.0, objective: colville },
    Spec { name: "Michalewicz5", dimension: 5, lo: 0.0, hi: PI, known_min: -4.6877, objective: michalewicz },
    Spec { name: "Zakharov", dimension: 10, lo: -5.0, hi: 10.0, known_min: 0.0, objective: zakharov },
    Spec { name: "Michalewicz10", dimension: 10, lo: 0.0, hi: PI, known_min: -9.6602, objective: michalewicz },
    Spec { name: "Step", dimension: 30, lo: -100.0, hi: 100.0, known_min: 0.0, objective: step },
    Spec { name: "Sphere", dimension: 30, lo: -100.0, hi: 100.0, known_min: 0.0, objective: sphere },
    Spec { name: "SumSquares", dimension: 30, lo: -10.0, hi: 10.0, known_min: 0.0, objective: sum_squares },
    Spec { name: "Quartic", dimension: 30, lo: -1.28, hi: 1.28, known_min: 0.0, objective: quartic },
    Spec { name: "Schwefel2.22", dimension: 30, lo: -10.0, hi: 10.0, known_min: 0.0, objective: schwefel_2_22 },
    Spec { name: "Schwefel1.2", dimension: 30, lo: -100.0, hi: 100.0, known_min: 0.0, objective: schwefel_1_2 },
    Spec { name: "Rosenbrock", dimension: 30, lo: -30.0, hi: 30.0, known_min: 0.0, objective: rosenbrock },
    Spec { name: "DixonPrice", dimension: 30, lo: -10.0, hi: 10.0, known_min: 0.0, objective: dixon_price },
    Spec { name: "Rastrigin", dimension: 30, lo: -5.12, hi: 5.12, known_min: 0.0, objective: rastrigin },
    Spec { name: "Griewank", dimension: 30, lo: -600.0, hi: 600.0, known_min: 0.0, objective: griewank },
    Spec { name: "Ackley", dimension: 30, lo: -32.0, hi: 32.0, known_min: 0.0, objective: ackley },
];

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

fn valid_names() -> String {
    SPECS.iter().map(|s| s.name).collect::<Vec<_>>().join(", ")
}

fn resolve(selector: &ProblemSelector) -> Result<usize> {
    let found = match selector {
        ProblemSelector::Index(i) => (1..=CATALOG_LEN).contains(i).then_some(*i),
        ProblemSelector::Name(name) => {
            let key = normalize(name);
            SPECS
                .iter()
                .position(|s| normalize(s.name) == key)
                .map(|p| p + 1)
        }
    };
    found.ok_or_else(|| Error::UnknownProblem {
        query: selector.to_string(),
        valid: valid_names(),
    })
}

fn minimizer_hint(index: usize, dimension: usize) -> Option<Vec<f64>> {
    match index {
        1 => Some(vec![3.0, 0.5]),
        2 => Some(vec![PI, PI]),
        5 => Some(vec![1.0, 3.0]),
        12 | 22 => Some(vec![1.0; dimension]),
        23 => Some(dixon_price_minimizer(dimension)),
        6 | 8 | 11 | 13 | 15 => None,
        _ => Some(vec![0.0; dimension]),
    }
}

/// `x_k = 2^(-(2^k - 2) / 2^k)` for `k = 1..=dimension`.
pub fn dixon_price_minimizer(dimension: usize) -> Vec<f64> {
    (1..=dimension as i32)
        .map(|k| {
            let p = 2f64.powi(k);
            2f64.powf(-(p - 2.0) / p)
        })
        .collect()
}

pub fn make_problem(selector: impl Into<ProblemSelector>) -> Result<BenchmarkEntry> {
    let index = resolve(&selector.into())?;
    let spec = &SPECS[index - 1];
    let objective: Objective = Arc::new(spec.objective);
    let mut problem = Problem::cube(
        spec.name,
        spec.dimension,
        spec.lo,
        spec.hi,
        spec.known_min,
        objective,
    )?;
    if matches!(index, 2 | 6 | 8 | 11 | 13 | 15) {
        problem = problem.with_tolerance(PRINTED_MIN_TOLERANCE)?;
    }
    if index == 19 {
        problem = problem.with_noise(Noise::Hashed { seed: 19 });
    }
    Ok(BenchmarkEntry {
        index,
        minimizer_hint: minimizer_hint(index, spec.dimension),
        problem,
    })
}

pub fn list_problems() -> Vec<BenchmarkEntry> {
    (1..=CATALOG_LEN)
        .map(|i| make_problem(i).expect("catalog index in range"))
        .collect()
}

pub fn catalog() -> Vec<CatalogRow> {
    list_problems()
        .into_iter()
        .map(|e| CatalogRow {
            index: e.index,
            name: e.problem.name.clone(),
            dimension: e.problem.dimension,
            lower: e.problem.lower[0],
            upper: e.problem.upper[0],
            known_min: e.problem.known_min,
            tolerance: e.problem.tolerance,
            stochastic: e.problem.stochastic,
        })
        .collect()
}

pub fn beale(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    (1.5 - a + a * b).powi(2) + (2.25 - a + a * b * b).powi(2) + (2.625 - a + a * b.powi(3)).powi(2)
}

pub fn easom(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    -a.cos() * b.cos() * (-(a - PI).powi(2) - (b - PI).powi(2)).exp()
}

pub fn matyas(x: &[f64]) -> f64 {
    0.26 * (x[0] * x[0] + x[1] * x[1]) - 0.48 * x[0] * x[1]
}

pub fn bohachevsky1(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    a * a + 2.0 * b * b - 0.3 * (3.0 * PI * a).cos() - 0.4 * (4.0 * PI * b).cos() + 0.7
}

pub fn bohachevsky2(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    a * a + 2.0 * b * b - 0.3 * (3.0 * PI * a).cos() * (4.0 * PI * b).cos() + 0.3
}

pub fn bohachevsky3(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    a * a + 2.0 * b * b - 0.3 * (3.0 * PI * a + 4.0 * PI * b).cos() + 0.3
}

pub fn booth(x: &[f64]) -> f64 {
    (x[0] + 2.0 * x[1] - 7.0).powi(2) + (2.0 * x[0] + x[1] - 5.0).powi(2)
}

pub fn michalewicz(x: &[f64]) -> f64 {
    -x.iter()
        .enumerate()
        .map(|(i, &v)| v.sin() * ((i + 1) as f64 * v * v / PI).sin().powi(2 * MICHALEWICZ_M))
        .sum::<f64>()
}

pub fn schaffer(x: &[f64]) -> f64 {
    let r2 = x[0] * x[0] + x[1] * x[1];
    0.5 + (r2.sqrt().sin().powi(2) - 0.5) / (1.0 + 0.001 * r2).powi(2)
}

pub fn six_hump_camel_back(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    4.0 * a * a - 2.1 * a.powi(4) + a.powi(6) / 3.0 + a * b - 4.0 * b * b + 4.0 * b.powi(4)
}

pub fn shubert(x: &[f64]) -> f64 {
    let term = |v: f64| -> f64 {
        (1..=5)
            .map(|i| {
                let i = i as f64;
                i * ((i + 1.0) * v + i).cos()
            })
            .sum()
    };
    term(x[0]) * term(x[1])
}

pub fn colville(x: &[f64]) -> f64 {
    let (a, b, c, d) = (x[0], x[1], x[2], x[3]);
    100.0 * (a * a - b).powi(2)
        + (a - 1.0).powi(2)
        + (c - 1.0).powi(2)
        + 90.0 * (c * c - d).powi(2)
        + 10.1 * ((b - 1.0).powi(2) + (d - 1.0).powi(2))
        + 19.8 * (b - 1.0) * (d - 1.0)
}

pub fn zakharov(x: &[f64]) -> f64 {
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let lin: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
        .sum();
    sq + lin.powi(2) + lin.powi(4)
}

pub fn step(x: &[f64]) -> f64 {
    x.iter().map(|v| (v + 0.5).floor().powi(2)).sum()
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn sum_squares(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (i + 1) as f64 * v * v)
        .sum()
}

/// Polynomial part of Quartic; the uniform noise term is applied by the
/// problem's noise hook.
pub fn quartic(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (i + 1) as f64 * v.powi(4))
        .sum()
}

pub fn schwefel_2_22(x: &[f64]) -> f64 {
    let s: f64 = x.iter().map(|v| v.abs()).sum();
    let p: f64 = x.iter().map(|v| v.abs()).product();
    s + p
}

pub fn schwefel_1_2(x: &[f64]) -> f64 {
    let mut prefix = 0.0;
    x.iter()
        .map(|v| {
            prefix += v;
            prefix * prefix
        })
        .sum()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

pub fn dixon_price(x: &[f64]) -> f64 {
    (x[0] - 1.0).powi(2)
        + x.windows(2)
            .enumerate()
            .map(|(k, w)| (k + 2) as f64 * (2.0 * w[1] * w[1] - w[0]).powi(2))
            .sum::<f64>()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

pub fn griewank(x: &[f64]) -> f64 {
    let s: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let p: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    s - p + 1.0
}

pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}
