//! Row shapes and growth rates of large de Bruijn triangles, compared with
//! the spectral solution.
//!
//! Row `k` is embedded as the step function equal to its `j`-th entry on
//! `[(j-1)/k, j/k)`. Scaled by `lambda^k / (k-1)!` it tends to `c u_l(t)`
//! along rows `k = mn + l`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::spectral::{self, EigenSolution, SpectralProblem};
use crate::triangle::{build_debruijn, ExactTriangle};
use crate::updown::UpDownPeriod;

/// Grid used for sup-norm comparisons.
pub const REPORT_GRID: usize = 2001;
/// Allowed relative increase between consecutive errors in a report.
pub const MONOTONE_SLACK: f64 = 0.10;

/// Natural log of `|x|`, exact to double precision for any size.
pub fn ln_big(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let x = x.abs();
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigInt = &x >> shift;
    top.to_f64().expect("64 bits").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Piecewise constant function on `[0, 1]`: `values[j]` on `[j/k, (j+1)/k)`,
/// with the last value also taken at `t = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    pub values: Vec<f64>,
}

impl StepFunction {
    pub fn value_at(&self, t: f64) -> f64 {
        let k = self.values.len();
        let j = ((t * k as f64).floor().max(0.0) as usize).min(k - 1);
        self.values[j]
    }

    pub fn sample(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&t| self.value_at(t)).collect()
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// How a row is scaled before comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RowScale {
    /// Multiply row `k` by `lambda^k / (k-1)!`.
    Lambda(f64),
    /// Divide by the row's own maximum.
    Sup,
}

/// Embeds an exact row as a scaled step function. All scaling happens in log
/// space, so rows far beyond `f64` range are fine.
pub fn scale_row(row: &[BigInt], scale: RowScale) -> Result<StepFunction> {
    if row.is_empty() {
        return Err(Error::InvalidInput("empty row".into()));
    }
    let k = row.len();
    let logs: Vec<f64> = row.iter().map(ln_big).collect();
    let shift = match scale {
        RowScale::Lambda(lambda) => {
            if lambda.is_nan() || lambda <= 0.0 {
                return Err(Error::InvalidInput(format!("lambda must be positive, got {lambda}")));
            }
            k as f64 * lambda.ln() - ln_factorial(k - 1)
        }
        RowScale::Sup => {
            let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if top == f64::NEG_INFINITY {
                return Err(Error::InvalidInput("row is identically zero".into()));
            }
            -top
        }
    };
    let values = row
        .iter()
        .zip(&logs)
        .map(|(x, &lx)| {
            let v = (lx + shift).exp();
            if x.is_negative() {
                -v
            } else {
                v
            }
        })
        .collect();
    Ok(StepFunction { values })
}

fn row_index(m: usize, n: usize, phase: usize) -> Result<usize> {
    if phase >= m {
        return Err(Error::OutOfRange {
            index: phase,
            reason: format!("phase must be below the period length {m}"),
        });
    }
    let k = m * n + phase;
    if k == 0 {
        return Err(Error::InvalidInput("row 0 does not exist".into()));
    }
    Ok(k)
}

/// Row `mn + l` of the de Bruijn triangle as a scaled step function.
pub fn normalized_row(period: &UpDownPeriod, n: usize, phase: usize, scale: RowScale) -> Result<StepFunction> {
    let k = row_index(period.len(), n, phase)?;
    let triangle = build_debruijn(period, k)?;
    scale_row(triangle.row(k), scale)
}

/// One line of a convergence report.
#[derive(Clone, Debug, PartialEq)]
pub struct RowError {
    pub row: usize,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub lambda: f64,
    pub phase: usize,
    pub rows: Vec<RowError>,
}

impl ConvergenceReport {
    /// Errors never grow by more than the slack between consecutive rows.
    pub fn is_monotone(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].error <= w[0].error * (1.0 + MONOTONE_SLACK))
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].error < w[0].error)
    }
}

/// Sup-norm distance on `grid` between a shape-normalized row and `u`.
pub fn shape_error(row: &[BigInt], sol: &EigenSolution, grid: &[f64]) -> Result<f64> {
    let step = scale_row(row, RowScale::Sup)?;
    Ok(grid
        .iter()
        .map(|&t| (step.value_at(t) - sol.value_at(t)).abs())
        .fold(0.0, f64::max))
}

/// Shape errors of the requested rows against `u_l`. Every row must be
/// congruent to `l` modulo `m`.
pub fn convergence_report(period: &UpDownPeriod, phase: usize, rows: &[usize]) -> Result<ConvergenceReport> {
    let m = period.len();
    if phase >= m {
        return Err(Error::OutOfRange {
            index: phase,
            reason: format!("phase must be below the period length {m}"),
        });
    }
    if let Some(&bad) = rows.iter().find(|&&k| k == 0 || k % m != phase) {
        return Err(Error::InvalidInput(format!(
            "row {bad} is not congruent to phase {phase} modulo {m}"
        )));
    }
    let sol = spectral::solve(period, phase, 2)?;
    let top = rows.iter().copied().max().unwrap_or(1);
    let triangle = build_debruijn(period, top)?;
    let grid: Vec<f64> = (0..REPORT_GRID).map(|j| j as f64 / (REPORT_GRID - 1) as f64).collect();
    let rows = rows
        .iter()
        .map(|&k| {
            Ok(RowError {
                row: k,
                error: shape_error(triangle.row(k), &sol, &grid)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConvergenceReport {
        lambda: sol.lambda,
        phase,
        rows,
    })
}

/// `max_j #_{k,j} lambda^k / (k-1)!` for `k = mn + l`.
pub fn growth_constant(period: &UpDownPeriod, phase: usize, n: usize) -> Result<f64> {
    let k = row_index(period.len(), n, phase)?;
    let lambda = spectral::find_lambda(&SpectralProblem::new(period, phase)?, spectral::ROOT_TOL)?;
    let triangle = build_debruijn(period, k)?;
    Ok(scale_row(triangle.row(k), RowScale::Lambda(lambda))?.sup())
}

/// Growth constant estimates for several `n`, sharing one triangle.
pub fn growth_constants(period: &UpDownPeriod, phase: usize, ns: &[usize]) -> Result<Vec<f64>> {
    let lambda = spectral::find_lambda(&SpectralProblem::new(period, phase)?, spectral::ROOT_TOL)?;
    let rows = ns
        .iter()
        .map(|&n| row_index(period.len(), n, phase))
        .collect::<Result<Vec<_>>>()?;
    let triangle = build_debruijn(period, rows.iter().copied().max().unwrap_or(1))?;
    rows.iter()
        .map(|&k| Ok(scale_row(triangle.row(k), RowScale::Lambda(lambda))?.sup()))
        .collect()
}

/// `#_n` for `n = 1 ..= n_max`, as row sums.
pub fn total_counts(period: &UpDownPeriod, n_max: usize) -> Result<Vec<BigInt>> {
    let triangle: ExactTriangle = build_debruijn(period, n_max)?;
    Ok((1..=n_max).map(|n| triangle.row_sum(n)).collect())
}

/// `#_n / (c n! lambda^-(n+1))`. Tends to 1 when `#_n ~ c n! lambda^-(n+1)`.
pub fn law_ratio(total: &BigInt, n: usize, c: f64, lambda: f64) -> f64 {
    (ln_big(total) + (n as f64 + 1.0) * lambda.ln() - c.ln() - ln_factorial(n)).exp()
}

/// `law_ratio` at each requested `n`.
pub fn total_growth_check(period: &UpDownPeriod, c: f64, lambda: f64, ns: &[usize]) -> Result<Vec<(usize, f64)>> {
    if ns.contains(&0) {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let totals = total_counts(period, ns.iter().copied().max().unwrap_or(1))?;
    Ok(ns.iter().map(|&n| (n, law_ratio(&totals[n - 1], n, c, lambda))).collect())
}
