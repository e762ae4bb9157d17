//! Exact de Bruijn and Seidel triangles.
//!
//! Rows and columns are 1-based in the public API: `entry(i, j)` with
//! `1 <= j <= i`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::updown::UpDownPeriod;

/// Which neighbour-sum recurrence filled a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// `t(i,j) = t(i,j-1) + t(i-1,j-1)`, started from `t(i,1)`.
    LeftToRight,
    /// `t(i,j) = t(i,j+1) + t(i-1,j)`, started from `t(i,i)`.
    RightToLeft,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Source of up-down bits `p_1, p_2, ...` for building triangles.
pub trait Shape {
    /// `p_i` for `i >= 1`, or `None` past the end of a finite prefix.
    fn bit(&self, i: usize) -> Option<u8>;
}

impl Shape for UpDownPeriod {
    fn bit(&self, i: usize) -> Option<u8> {
        Some(self.bit_at(i))
    }
}

/// A finite, non-periodic up-down sequence, used for oracle comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePrefix(pub Vec<u8>);

impl Shape for FinitePrefix {
    fn bit(&self, i: usize) -> Option<u8> {
        i.checked_sub(1).and_then(|k| self.0.get(k).copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactTriangle {
    rows: Vec<Vec<BigInt>>,
    directions: Vec<Direction>,
}

impl ExactTriangle {
    /// Assembles a triangle from explicit rows, checking only the shape
    /// (row `i` has `i` entries).
    pub fn from_rows(rows: Vec<Vec<BigInt>>, directions: Vec<Direction>) -> Result<Self> {
        if rows.len() != directions.len() {
            return Err(Error::InvalidInput(format!(
                "{} rows but {} directions",
                rows.len(),
                directions.len()
            )));
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != k + 1 {
                return Err(Error::InvalidInput(format!(
                    "row {} has {} entries",
                    k + 1,
                    row.len()
                )));
            }
        }
        Ok(ExactTriangle { rows, directions })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// Row `i` (1-based).
    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i - 1]
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i - 1][j - 1]
    }

    pub fn row_sum(&self, i: usize) -> BigInt {
        self.row(i).iter().sum()
    }

    /// Left edge `t(i,1)` or right edge `t(i,i)` for every row.
    pub fn edge(&self, side: Side) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|row| match side {
                Side::Left => row[0].clone(),
                Side::Right => row[row.len() - 1].clone(),
            })
            .collect()
    }

    /// Reflection in the vertical axis.
    pub fn mirror(&self) -> ExactTriangle {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().rev().cloned().collect())
            .collect();
        let directions = self
            .directions
            .iter()
            .enumerate()
            .map(|(k, d)| match (k, d) {
                (0, d) => *d,
                (_, Direction::LeftToRight) => Direction::RightToLeft,
                (_, Direction::RightToLeft) => Direction::LeftToRight,
            })
            .collect();
        ExactTriangle { rows, directions }
    }

    /// Multiplies row `i` by `signs(i)`.
    pub fn with_row_signs(&self, signs: impl Fn(usize) -> i8) -> ExactTriangle {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(k, r)| {
                if signs(k + 1) < 0 {
                    r.iter().map(|x| -x).collect()
                } else {
                    r.clone()
                }
            })
            .collect();
        ExactTriangle {
            rows,
            directions: vec![Direction::LeftToRight; self.len()],
        }
    }

    /// True when every row obeys the recurrence recorded in `directions`.
    pub fn satisfies_recurrence(&self) -> bool {
        (2..=self.len()).all(|i| {
            let row = self.row(i);
            let prev = self.row(i - 1);
            match self.directions[i - 1] {
                Direction::LeftToRight => (1..i).all(|j| row[j] == &row[j - 1] + &prev[j - 1]),
                Direction::RightToLeft => (0..i - 1).all(|j| row[j] == &row[j + 1] + &prev[j]),
            }
        })
    }

    /// True when every row obeys `t(i,j) = t(i,j-1) + t(i-1,j-1)`.
    pub fn is_seidel(&self) -> bool {
        (2..=self.len()).all(|i| {
            let row = self.row(i);
            let prev = self.row(i - 1);
            (1..i).all(|j| row[j] == &row[j - 1] + &prev[j - 1])
        })
    }
}

impl fmt::Display for ExactTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

fn fill_left_to_right(start: BigInt, prev: &[BigInt]) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(prev.len() + 1);
    row.push(start);
    for p in prev {
        let next = row.last().unwrap() + p;
        row.push(next);
    }
    row
}

fn fill_right_to_left(end: BigInt, prev: &[BigInt]) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); prev.len() + 1];
    row[prev.len()] = end;
    for j in (0..prev.len()).rev() {
        row[j] = &row[j + 1] + &prev[j];
    }
    row
}

/// Counts `#_{i,j}` of permutations of length `i` with the given shape and
/// last entry `j`.
pub fn build_debruijn<S: Shape + ?Sized>(shape: &S, n_rows: usize) -> Result<ExactTriangle> {
    if n_rows == 0 {
        return Err(Error::InvalidInput("a triangle needs at least one row".into()));
    }
    let mut rows = vec![vec![BigInt::one()]];
    let mut directions = vec![Direction::LeftToRight];
    for i in 2..=n_rows {
        let bit = shape.bit(i - 1).ok_or(Error::PrefixTooShort {
            row: i,
            needed: i - 1,
            available: i - 2,
        })?;
        let prev = &rows[i - 2];
        let (row, dir) = if bit == 1 {
            (fill_left_to_right(BigInt::zero(), prev), Direction::LeftToRight)
        } else {
            (fill_right_to_left(BigInt::zero(), prev), Direction::RightToLeft)
        };
        rows.push(row);
        directions.push(dir);
    }
    Ok(ExactTriangle { rows, directions })
}

/// The signed de Bruijn triangle: row `i` multiplied by `eps_i`.
pub fn build_signed(period: &UpDownPeriod, n_rows: usize) -> Result<ExactTriangle> {
    Ok(build_debruijn(period, n_rows)?.with_row_signs(|i| period.sign(i)))
}

type BoundaryRule = dyn Fn(usize, &[Vec<BigInt>]) -> Option<BigInt> + Send + Sync;

/// Boundary data for a Seidel triangle: the `(1,1)` seed and a rule giving
/// `t(i,1)` from the rows already built.
pub struct SeidelBoundary {
    seed: BigInt,
    rule: Box<BoundaryRule>,
}

impl fmt::Debug for SeidelBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeidelBoundary").field("seed", &self.seed).finish_non_exhaustive()
    }
}

impl SeidelBoundary {
    pub fn new<F>(seed: impl Into<BigInt>, rule: F) -> Self
    where
        F: Fn(usize, &[Vec<BigInt>]) -> Option<BigInt> + Send + Sync + 'static,
    {
        SeidelBoundary {
            seed: seed.into(),
            rule: Box::new(rule),
        }
    }

    /// Start value that makes row `i` end at `target`, given the previous row.
    pub fn start_for_end(target: &BigInt, prev: &[BigInt]) -> BigInt {
        target - prev.iter().sum::<BigInt>()
    }

    /// Signed de Bruijn boundary: rows after an ascent start at 0, rows after
    /// a descent end at 0.
    pub fn signed_debruijn(period: &UpDownPeriod) -> Self {
        let period = period.clone();
        SeidelBoundary::new(1, move |i, rows| {
            let prev = rows.last()?;
            Some(if period.bit_at(i - 1) == 1 {
                BigInt::zero()
            } else {
                Self::start_for_end(&BigInt::zero(), prev)
            })
        })
    }

    /// Signed Genocchi triangle: `g(2,2) = 1`, `g(2k,2k) = 0` for `k >= 2`,
    /// `g(2k+1,1) + g(2k+1,2k+1) = 0` (which forces `g(1,1) = 0`).
    pub fn genocchi() -> Self {
        SeidelBoundary::new(0, |i, rows| {
            let prev = rows.last()?;
            let total: BigInt = prev.iter().sum();
            if i % 2 == 0 {
                let target = if i == 2 { BigInt::one() } else { BigInt::zero() };
                Some(target - total)
            } else {
                // 2 s + total = 0
                let (q, r) = (-total).div_rem(&BigInt::from(2));
                r.is_zero().then_some(q)
            }
        })
    }
}

/// Generic Seidel triangle; every row is filled left to right.
pub fn build_seidel(boundary: &SeidelBoundary, n_rows: usize) -> Result<ExactTriangle> {
    if n_rows == 0 {
        return Err(Error::InvalidInput("a triangle needs at least one row".into()));
    }
    let mut rows = vec![vec![boundary.seed.clone()]];
    for i in 2..=n_rows {
        let start = (boundary.rule)(i, &rows).ok_or_else(|| Error::BoundaryRule {
            row: i,
            reason: "rule returned no start value".into(),
        })?;
        let row = fill_left_to_right(start, &rows[i - 2]);
        rows.push(row);
    }
    let directions = vec![Direction::LeftToRight; n_rows];
    Ok(ExactTriangle { rows, directions })
}

/// Named triangle systems with periodic boundary conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemName {
    Entringer,
    Genocchi,
    ArnoldBeta,
    ArnoldB,
    ArnoldD,
}

impl SystemName {
    pub const ALL: [SystemName; 5] = [
        SystemName::Entringer,
        SystemName::Genocchi,
        SystemName::ArnoldBeta,
        SystemName::ArnoldB,
        SystemName::ArnoldD,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SystemName::Entringer => "entringer",
            SystemName::Genocchi => "genocchi",
            SystemName::ArnoldBeta => "arnold-beta",
            SystemName::ArnoldB => "arnold-b",
            SystemName::ArnoldD => "arnold-d",
        }
    }

    pub fn is_pair(&self) -> bool {
        matches!(
            self,
            SystemName::ArnoldBeta | SystemName::ArnoldB | SystemName::ArnoldD
        )
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SystemName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// A named system: one Seidel triangle or a coupled `(L, R)` pair. All
/// triangles are the signed versions, so every row obeys the Seidel relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedSystem {
    Single {
        name: SystemName,
        triangle: ExactTriangle,
    },
    Pair {
        name: SystemName,
        left: ExactTriangle,
        right: ExactTriangle,
    },
}

impl NamedSystem {
    pub fn name(&self) -> SystemName {
        match self {
            NamedSystem::Single { name, .. } | NamedSystem::Pair { name, .. } => *name,
        }
    }

    /// Every triangle in the system, labelled `"main"`, `"L"` or `"R"`.
    pub fn triangles(&self) -> Vec<(&'static str, &ExactTriangle)> {
        match self {
            NamedSystem::Single { triangle, .. } => vec![("main", triangle)],
            NamedSystem::Pair { left, right, .. } => vec![("L", left), ("R", right)],
        }
    }
}

/// What pins down the unknown start of `L` in a coupled row.
#[derive(Clone, Copy, Debug)]
enum PairConstraint {
    /// `L(i,1) = 0`.
    LeftStartZero,
    /// `R(i,i) = 0`, with `R(i,1) = L(i,i)`.
    RightEndZero,
}

struct PairRule {
    left_seed: i64,
    right_seed: i64,
    constraint: fn(usize) -> PairConstraint,
}

fn pair_rule(name: SystemName) -> PairRule {
    match name {
        // beta^L_{2k+1,1} = 0 (k >= 1), beta^L_{1,1} = 1, beta^L_{k,k} = beta^R_{k,1},
        // beta^R_{2k,2k} = 0
        SystemName::ArnoldBeta => PairRule {
            left_seed: 1,
            right_seed: 1,
            constraint: |i| {
                if i % 2 == 1 {
                    PairConstraint::LeftStartZero
                } else {
                    PairConstraint::RightEndZero
                }
            },
        },
        // b^L_{2k+1,1} = 0 (k >= 0), b^L_{k,k} = b^R_{k,1} (k >= 2), b^R_{1,1} = 1,
        // b^R_{2k,2k} = 0
        SystemName::ArnoldB => PairRule {
            left_seed: 0,
            right_seed: 1,
            constraint: |i| {
                if i % 2 == 1 {
                    PairConstraint::LeftStartZero
                } else {
                    PairConstraint::RightEndZero
                }
            },
        },
        // d^L_{2k,1} = 0, d^L_{k,k} = d^R_{k,1} (k >= 2), d^R_{2k+1,2k+1} = 0 (k >= 1),
        // d^R_{1,1} = 1; d^L_{1,1} is not constrained and taken as 0
        SystemName::ArnoldD => PairRule {
            left_seed: 0,
            right_seed: 1,
            constraint: |i| {
                if i % 2 == 0 {
                    PairConstraint::LeftStartZero
                } else {
                    PairConstraint::RightEndZero
                }
            },
        },
        _ => unreachable!("not a coupled system"),
    }
}

/// Builds `L` row `i`, copies its last entry to the start of `R` row `i`,
/// then builds `R` row `i`.
fn build_pair(name: SystemName, n_rows: usize) -> (ExactTriangle, ExactTriangle) {
    let rule = pair_rule(name);
    let mut left = vec![vec![BigInt::from(rule.left_seed)]];
    let mut right = vec![vec![BigInt::from(rule.right_seed)]];
    for i in 2..=n_rows {
        let prev_l = &left[i - 2];
        let prev_r = &right[i - 2];
        let start = match (rule.constraint)(i) {
            PairConstraint::LeftStartZero => BigInt::zero(),
            PairConstraint::RightEndZero => {
                // R(i,i) = L(i,1) + sum(L_{i-1}) + sum(R_{i-1})
                -(prev_l.iter().sum::<BigInt>() + prev_r.iter().sum::<BigInt>())
            }
        };
        let l_row = fill_left_to_right(start, prev_l);
        let r_row = fill_left_to_right(l_row[i - 1].clone(), prev_r);
        left.push(l_row);
        right.push(r_row);
    }
    let dirs = vec![Direction::LeftToRight; n_rows];
    (
        ExactTriangle {
            rows: left,
            directions: dirs.clone(),
        },
        ExactTriangle {
            rows: right,
            directions: dirs,
        },
    )
}

pub fn build_named(name: SystemName, n_rows: usize) -> Result<NamedSystem> {
    if n_rows == 0 {
        return Err(Error::InvalidInput("a triangle needs at least one row".into()));
    }
    Ok(match name {
        SystemName::Entringer => NamedSystem::Single {
            name,
            triangle: build_signed(&UpDownPeriod::new(vec![1, 0])?, n_rows)?,
        },
        SystemName::Genocchi => NamedSystem::Single {
            name,
            triangle: build_seidel(&SeidelBoundary::genocchi(), n_rows)?,
        },
        _ => {
            let (left, right) = build_pair(name, n_rows);
            NamedSystem::Pair { name, left, right }
        }
    })
}

/// Left or right edge of a triangle.
pub fn edge(triangle: &ExactTriangle, side: Side) -> Vec<BigInt> {
    triangle.edge(side)
}

/// True when every entry is nonnegative.
pub fn is_nonnegative(triangle: &ExactTriangle) -> bool {
    triangle.rows().iter().flatten().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> UpDownPeriod {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn entringer_first_rows() {
        let t = build_debruijn(&p("10"), 5).unwrap();
        assert_eq!(t.row(1), ints(&[1]));
        assert_eq!(t.row(2), ints(&[0, 1]));
        assert_eq!(t.row(3), ints(&[1, 1, 0]));
        assert_eq!(t.row(4), ints(&[0, 1, 2, 2]));
        assert_eq!(t.row(5), ints(&[5, 5, 4, 2, 0]));
        assert_eq!(t.directions()[2], Direction::RightToLeft);
        assert!(t.satisfies_recurrence());
        assert!(is_nonnegative(&t));
    }

    #[test]
    fn single_row() {
        for s in ["10", "1100", "00"] {
            assert_eq!(build_debruijn(&p(s), 1).unwrap().rows(), &[ints(&[1])]);
        }
        assert!(build_debruijn(&p("10"), 0).is_err());
    }

    #[test]
    fn right_edge_vanishes_after_descent() {
        let q = p("11010");
        let t = build_debruijn(&q, 12).unwrap();
        for i in 2..=12 {
            if q.bit_at(i - 1) == 0 {
                assert!(t.entry(i, i).is_zero());
            } else {
                assert!(t.entry(i, 1).is_zero());
            }
        }
    }

    #[test]
    fn signed_entringer() {
        let t = build_signed(&p("10"), 5).unwrap();
        let plain = build_debruijn(&p("10"), 5).unwrap();
        let neg: Vec<BigInt> = plain.row(4).iter().map(|x| -x).collect();
        assert_eq!(t.row(4), &neg[..]);
        assert_eq!(t.edge(Side::Left), ints(&[1, 0, -1, 0, 5]));
        assert!(t.is_seidel());
    }

    #[test]
    fn signed_matches_seidel_boundary() {
        for s in ["10", "1100", "110", "100", "10110", "00"] {
            let q = p(s);
            let a = build_signed(&q, 12).unwrap();
            let b = build_seidel(&SeidelBoundary::signed_debruijn(&q), 12).unwrap();
            assert_eq!(a.rows(), b.rows(), "period {s}");
        }
    }

    #[test]
    fn seidel_zero_start() {
        let b = SeidelBoundary::new(1, |_, _| Some(BigInt::zero()));
        let t = build_seidel(&b, 5).unwrap();
        assert!(t.edge(Side::Left)[1..].iter().all(|x| x.is_zero()));
        // a rule that gives up is reported
        let bad = SeidelBoundary::new(1, |i, _| (i < 4).then(BigInt::zero));
        assert!(matches!(
            build_seidel(&bad, 6),
            Err(Error::BoundaryRule { row: 4, .. })
        ));
    }

    #[test]
    fn finite_prefix_must_cover_rows() {
        let prefix = FinitePrefix(vec![1, 0, 0]);
        assert!(build_debruijn(&prefix, 4).is_ok());
        assert!(matches!(
            build_debruijn(&prefix, 5),
            Err(Error::PrefixTooShort { row: 5, .. })
        ));
    }

    #[test]
    fn reflection_mirrors_complement() {
        for s in ["01", "0011", "011", "01001", "11"] {
            let raw = p(s);
            let t = build_debruijn(&raw, 9).unwrap();
            let c = build_debruijn(&raw.complement(), 9).unwrap();
            assert_eq!(t.rows(), c.mirror().rows(), "period {s}");
        }
    }

    #[test]
    fn genocchi_boundaries() {
        let NamedSystem::Single { triangle: g, .. } = build_named(SystemName::Genocchi, 9).unwrap() else {
            panic!("genocchi is a single triangle");
        };
        assert_eq!(g.entry(2, 2), &BigInt::one());
        assert_eq!(g.entry(1, 1), &BigInt::zero());
        for k in 2..=4 {
            assert!(g.entry(2 * k, 2 * k).is_zero());
        }
        for k in 0..=4 {
            let i = 2 * k + 1;
            assert!((g.entry(i, 1) + g.entry(i, i)).is_zero());
        }
        // signed Genocchi numbers on the left edge
        assert_eq!(g.edge(Side::Left), ints(&[0, 1, -1, 0, 1, 0, -3, 0, 17]));
    }

    #[test]
    fn arnold_pairs_obey_their_boundaries() {
        let sys = build_named(SystemName::ArnoldBeta, 10).unwrap();
        let NamedSystem::Pair { left, right, .. } = &sys else { panic!() };
        assert_eq!(left.entry(1, 1), &BigInt::one());
        for k in 1..=10 {
            assert_eq!(left.entry(k, k), right.entry(k, 1));
        }
        for k in 1..=4 {
            assert!(left.entry(2 * k + 1, 1).is_zero());
            assert!(right.entry(2 * k, 2 * k).is_zero());
        }

        let NamedSystem::Pair { left, right, .. } = build_named(SystemName::ArnoldB, 10).unwrap() else { panic!() };
        assert_eq!(right.entry(1, 1), &BigInt::one());
        for k in 2..=10 {
            assert_eq!(left.entry(k, k), right.entry(k, 1));
        }
        for k in 0..=4 {
            assert!(left.entry(2 * k + 1, 1).is_zero());
        }
        for k in 1..=5 {
            assert!(right.entry(2 * k, 2 * k).is_zero());
        }

        let NamedSystem::Pair { left, right, .. } = build_named(SystemName::ArnoldD, 10).unwrap() else { panic!() };
        assert_eq!(right.entry(1, 1), &BigInt::one());
        for k in 2..=10 {
            assert_eq!(left.entry(k, k), right.entry(k, 1));
        }
        for k in 1..=5 {
            assert!(left.entry(2 * k, 1).is_zero());
        }
        for k in 1..=4 {
            assert!(right.entry(2 * k + 1, 2 * k + 1).is_zero());
        }
        assert!(left.is_seidel() && right.is_seidel());
    }

    #[test]
    fn named_parsing() {
        assert_eq!("arnold-d".parse::<SystemName>().unwrap(), SystemName::ArnoldD);
        assert!(matches!("arnold-x".parse::<SystemName>(), Err(Error::UnknownName(_))));
        let beta = build_named(SystemName::ArnoldBeta, 1).unwrap();
        let NamedSystem::Pair { left, .. } = beta else { panic!() };
        assert_eq!(left.entry(1, 1), &BigInt::one());
    }

    #[test]
    fn from_rows_round_trip() {
        let t = build_debruijn(&p("1100"), 7).unwrap();
        let back = ExactTriangle::from_rows(t.rows().to_vec(), t.directions().to_vec()).unwrap();
        assert!(back.satisfies_recurrence());
        assert!(ExactTriangle::from_rows(vec![ints(&[1, 2])], vec![Direction::LeftToRight]).is_err());
    }
}
