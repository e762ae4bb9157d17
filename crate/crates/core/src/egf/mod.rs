//! Exponential generating functions of signed periodic de Bruijn triangles.
//!
//! For a normalized period with zeros `i_1 < ... < i_r = m`, write
//! `I = (0, i_1, ..., i_{r-1})`. The left edge of the signed triangle has
//! EGF `f = det Mbar / det M`, where `M[a][b] = phi_{m, (I_a - I_b) mod m}`
//! and `Mbar` is `M` with its first row replaced by ones. The whole
//! triangle is then `e^y f(x + y)`.

mod matrix;
mod series;

pub use matrix::{series_det, SeriesMatrix};
pub use series::{max_abs_coeff, RationalRepr, SeriesRepr, TruncatedEGF};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::triangle::{ExactTriangle, Side, SystemName};
use crate::updown::UpDownPeriod;

pub const DEFAULT_ORDER: usize = 24;

/// Olivier function `phi_{m,i}(t) = sum_j t^{jm+i} / (jm+i)!`. As an EGF its
/// coefficients are 1 at `k = i (mod m)` and 0 elsewhere.
pub fn olivier(m: usize, i: usize, order: usize) -> Result<TruncatedEGF> {
    if m == 0 {
        return Err(Error::InvalidInput("Olivier order m must be at least 1".into()));
    }
    if i >= m {
        return Err(Error::OutOfRange {
            index: i,
            reason: format!("Olivier index must be below m = {m}"),
        });
    }
    Ok(TruncatedEGF::new(
        (0..=order)
            .map(|k| if k % m == i { BigRational::one() } else { BigRational::zero() })
            .collect(),
    ))
}

fn phi(m: usize, index: i64, order: usize) -> TruncatedEGF {
    olivier(m, index.rem_euclid(m as i64) as usize, order).expect("index reduced mod m")
}

/// `(0, i_1, ..., i_{r-1})`: row/column labels of `M`.
pub fn zero_labels(period: &UpDownPeriod) -> Vec<usize> {
    let zeros = period.zeros();
    std::iter::once(0).chain(zeros[..zeros.len() - 1].iter().copied()).collect()
}

/// The `r x r` matrix `M^P`.
pub fn matrix_m(period: &UpDownPeriod, order: usize) -> Result<SeriesMatrix> {
    period.ensure_normalized()?;
    let m = period.len();
    let labels = zero_labels(period);
    let entries = labels
        .iter()
        .map(|&a| {
            labels
                .iter()
                .map(|&b| phi(m, a as i64 - b as i64, order))
                .collect()
        })
        .collect();
    SeriesMatrix::new(entries)
}

/// `M^P` with its first row replaced by ones.
pub fn matrix_mbar(period: &UpDownPeriod, order: usize) -> Result<SeriesMatrix> {
    let m = matrix_m(period, order)?;
    let ones = vec![TruncatedEGF::one(order); m.dim()];
    m.with_row(0, ones)
}

/// Full `m x m` circulant `C[a][b] = phi_{m, (a - b) mod m}` linking the
/// `m`-sections of the left edge to those of the right edge.
pub fn circulant(m: usize, order: usize) -> Result<SeriesMatrix> {
    let entries = (0..m)
        .map(|a| (0..m).map(|b| phi(m, a as i64 - b as i64, order)).collect())
        .collect();
    SeriesMatrix::new(entries)
}

/// The `m`-section `t^i f_i(t^m)` of a series: keeps coefficients with
/// `k = i (mod m)`.
pub fn section(f: &TruncatedEGF, m: usize, i: usize) -> TruncatedEGF {
    TruncatedEGF::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % m == i { c.clone() } else { BigRational::zero() })
            .collect(),
    )
}

/// EGF of the left edge of the signed de Bruijn triangle.
pub fn theorem1_f(period: &UpDownPeriod, order: usize) -> Result<TruncatedEGF> {
    let m = matrix_m(period, order)?;
    let mbar = matrix_mbar(period, order)?;
    // det M(0) = 1 since M(0) is the identity
    mbar.det().try_div(&m.det())
}

/// First row of `Mtilde`: entry for label `j` is
/// `eps_{j+1} + sum_{i=1}^{m-1} eps_{i+1} phi_{m, (i - j) mod m}`.
fn psi_row(period: &UpDownPeriod, order: usize) -> Vec<TruncatedEGF> {
    let m = period.len();
    zero_labels(period)
        .into_iter()
        .map(|j| {
            let base = BigRational::from_integer(BigInt::from(period.sign(j + 1)));
            (1..m).fold(TruncatedEGF::constant(base, order), |acc, i| {
                let term = phi(m, i as i64 - j as i64, order);
                if period.sign(i + 1) > 0 {
                    &acc + &term
                } else {
                    &acc - &term
                }
            })
        })
        .collect()
}

/// `(Mtilde, M)` for the total count. Periods with an odd number of zeros are
/// first doubled to length `2m`.
pub fn corollary1_matrices(period: &UpDownPeriod, order: usize) -> Result<(SeriesMatrix, SeriesMatrix)> {
    period.ensure_normalized()?;
    let work = if period.zero_count() % 2 == 1 {
        period.doubled()
    } else {
        period.clone()
    };
    let m = matrix_m(&work, order)?;
    let tilde = m.with_row(0, psi_row(&work, order))?;
    Ok((tilde, m))
}

/// EGF of the total counts `#_n^P`: `det Mtilde / det M`. The constant term
/// is 1 (the empty permutation, counted once).
pub fn corollary1_total(period: &UpDownPeriod, order: usize) -> Result<TruncatedEGF> {
    let (tilde, m) = corollary1_matrices(period, order)?;
    tilde.det().try_div(&m.det())
}

/// Expands `e^y f(x + y)` into triangle entries
/// `t(i,j) = sum_{s=0}^{j-1} C(j-1, s) c_{i-j+s}` for `1 <= j <= i <= rows`.
pub fn expand_bivariate(f: &TruncatedEGF, rows: usize) -> Result<Vec<Vec<BigRational>>> {
    if rows == 0 || f.order() + 1 < rows {
        return Err(Error::InvalidInput(format!(
            "{rows} rows need a series of order at least {}, got {}",
            rows.saturating_sub(1),
            f.order()
        )));
    }
    let c = f.coeffs();
    Ok((1..=rows)
        .map(|i| {
            (1..=i)
                .map(|j| {
                    let mut binom = BigInt::one();
                    let mut acc = BigRational::zero();
                    for s in 0..j {
                        acc += BigRational::from_integer(binom.clone()) * &c[i - j + s];
                        binom = binom * BigInt::from(j - 1 - s) / BigInt::from(s + 1);
                    }
                    acc
                })
                .collect()
        })
        .collect())
}

/// EGF of an integer edge: coefficient `k` is the entry of row `k + 1`.
pub fn edge_series(triangle: &ExactTriangle, side: Side, order: usize) -> Result<TruncatedEGF> {
    if triangle.len() < order + 1 {
        return Err(Error::InvalidInput(format!(
            "order {order} needs {} rows, triangle has {}",
            order + 1,
            triangle.len()
        )));
    }
    Ok(TruncatedEGF::from_integers(
        triangle.edge(side).into_iter().take(order + 1),
    ))
}

/// Restrictions of a bivariate closed form `F(x, y)` to the two sides of its
/// triangle: `left(t) = F(t, 0)`, `right(t) = F(0, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRestrictions {
    pub left: TruncatedEGF,
    pub right: TruncatedEGF,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ClosedForm {
    Single(EdgeRestrictions),
    Pair {
        left: EdgeRestrictions,
        right: EdgeRestrictions,
    },
}

impl ClosedForm {
    /// Restrictions keyed like [`NamedSystem::triangles`](crate::NamedSystem::triangles).
    pub fn labelled(&self) -> Vec<(&'static str, &EdgeRestrictions)> {
        match self {
            ClosedForm::Single(r) => vec![("main", r)],
            ClosedForm::Pair { left, right } => vec![("L", left), ("R", right)],
        }
    }
}

/// Published closed forms, restricted to both sides:
///
/// | system | `F(x, y)` |
/// |---|---|
/// | entringer | `e^y / cosh(x+y)` |
/// | genocchi | `2(x+y) e^y / (e^{x+y} + 1)` |
/// | arnold-beta L, R | `e^{-2x-y} / cosh 2(x+y)`, `e^{-x} / cosh 2(x+y)` |
/// | arnold-b L, R | `-e^y sinh(x+y) / cosh 2(x+y)`, `e^{-x} cosh(x+y) / cosh 2(x+y)` |
/// | arnold-d L, R | `e^y (1 - cosh(x+y)) / cosh 2(x+y)`, `e^{x+2y} (1 - cosh(x+y)) / cosh 2(x+y)` |
pub fn closed_form(name: SystemName, order: usize) -> Result<ClosedForm> {
    let exp = |a: i64| TruncatedEGF::exp_scaled(&BigRational::from_integer(BigInt::from(a)), order);
    let one = TruncatedEGF::one(order);
    let cosh1 = TruncatedEGF::cosh_scaled(1, order);
    let sinh1 = TruncatedEGF::sinh_scaled(1, order);
    let cosh2 = TruncatedEGF::cosh_scaled(2, order);
    let over_cosh2 = |num: TruncatedEGF| num.try_div(&cosh2);

    Ok(match name {
        SystemName::Entringer => ClosedForm::Single(EdgeRestrictions {
            left: one.try_div(&cosh1)?,
            right: exp(1).try_div(&cosh1)?,
        }),
        SystemName::Genocchi => {
            let two_t = TruncatedEGF::variable(order).scale(&BigRational::from_integer(BigInt::from(2)));
            let denom = &exp(1) + &one;
            ClosedForm::Single(EdgeRestrictions {
                left: two_t.try_div(&denom)?,
                right: (&two_t * &exp(1)).try_div(&denom)?,
            })
        }
        SystemName::ArnoldBeta => ClosedForm::Pair {
            left: EdgeRestrictions {
                left: over_cosh2(exp(-2))?,
                right: over_cosh2(exp(-1))?,
            },
            right: EdgeRestrictions {
                left: over_cosh2(exp(-1))?,
                right: over_cosh2(one.clone())?,
            },
        },
        SystemName::ArnoldB => ClosedForm::Pair {
            left: EdgeRestrictions {
                left: over_cosh2(-&sinh1)?,
                right: over_cosh2(-&(&exp(1) * &sinh1))?,
            },
            right: EdgeRestrictions {
                left: over_cosh2(&exp(-1) * &cosh1)?,
                right: over_cosh2(cosh1.clone())?,
            },
        },
        SystemName::ArnoldD => {
            let bump = &one - &cosh1;
            ClosedForm::Pair {
                left: EdgeRestrictions {
                    left: over_cosh2(bump.clone())?,
                    right: over_cosh2(&exp(1) * &bump)?,
                },
                right: EdgeRestrictions {
                    left: over_cosh2(&exp(1) * &bump)?,
                    right: over_cosh2(&exp(2) * &bump)?,
                },
            }
        }
    })
}

/// True when `right = e^t * left` exactly to the common order.
pub fn seidel_ratio_holds(left: &TruncatedEGF, right: &TruncatedEGF) -> bool {
    let order = left.order().min(right.order());
    &TruncatedEGF::exp(order) * &left.truncate(order) == right.truncate(order)
}
