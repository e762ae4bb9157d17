//! The two-point spectral problem behind the row asymptotics.
//!
//! For a period of length `m` with `r` zeros and a phase `l`, the first
//! eigenpair of
//!
//! ```text
//! u^(m) = (-1)^r lambda^m u  on [0, 1],
//! u^(i)(a_i) = 0             for i = 0 .. m-1,
//! ```
//!
//! with `a_i = 0` when `p_{m+l-i-1} = 1` and `a_i = 1` otherwise, describes
//! the shape of row `mn + l` as `n` grows. Solutions are combinations of
//! `exp(rho_k t)` with `rho_k = lambda xi omega^k`, `xi = exp(i pi r / m)` and
//! `omega = exp(2 pi i / m)`.
//!
//! The same eigenvalue is reached a second way: the period's composite
//! integration operator is discretized on `n` points and its spectral radius
//! `mu` gives `lambda ~ mu^(-1/m)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::updown::UpDownPeriod;

/// Grid step for the root scan.
pub const SCAN_STEP: f64 = 0.05;
/// Default root tolerance.
pub const ROOT_TOL: f64 = 1e-12;
/// A null space is called degenerate when the second smallest singular value
/// is below this fraction of the largest.
pub const DEGENERACY_RATIO: f64 = 1e-6;

/// Which endpoint a boundary condition lives at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Zero,
    One,
}

impl Endpoint {
    fn position(self) -> f64 {
        match self {
            Endpoint::Zero => 0.0,
            Endpoint::One => 1.0,
        }
    }
}

/// A period together with a phase `0 <= l < m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralProblem {
    period: UpDownPeriod,
    phase: usize,
    endpoints: Vec<Endpoint>,
}

impl SpectralProblem {
    pub fn new(period: &UpDownPeriod, phase: usize) -> Result<Self> {
        let m = period.len();
        if phase >= m {
            return Err(Error::OutOfRange {
                index: phase,
                reason: format!("phase must be below the period length {m}"),
            });
        }
        let endpoints = (0..m)
            .map(|i| {
                if period.bit_at(m + phase - i - 1) == 1 {
                    Endpoint::Zero
                } else {
                    Endpoint::One
                }
            })
            .collect();
        Ok(SpectralProblem {
            period: period.clone(),
            phase,
            endpoints,
        })
    }

    pub fn period(&self) -> &UpDownPeriod {
        &self.period
    }

    pub fn phase(&self) -> usize {
        self.phase
    }

    /// `endpoints()[i]` is where `u^(i)` vanishes.
    pub fn endpoints(&self) -> &[Endpoint] {
        &self.endpoints
    }

    pub fn m(&self) -> usize {
        self.period.len()
    }

    pub fn r(&self) -> usize {
        self.period.zero_count()
    }

    /// `xi = exp(i pi r / m)`, a fixed root of `xi^m = (-1)^r`.
    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI * self.r() as f64 / self.m() as f64)
    }

    /// Characteristic exponents `rho_k = lambda xi omega^k`.
    pub fn exponents(&self, lambda: f64) -> Vec<Complex64> {
        let m = self.m();
        let xi = self.xi();
        (0..m)
            .map(|k| lambda * xi * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
            .collect()
    }
}

/// Row `i` is `rho_k^i exp(rho_k a_i)` over `k`.
pub fn boundary_matrix(prob: &SpectralProblem, lambda: f64) -> DMatrix<Complex64> {
    let rho = prob.exponents(lambda);
    let m = prob.m();
    DMatrix::from_fn(m, m, |i, k| rho[k].powu(i as u32) * (rho[k] * prob.endpoints[i].position()).exp())
}

fn vandermonde(rho: &[Complex64]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for k in 0..rho.len() {
        for kk in k + 1..rho.len() {
            v *= rho[kk] - rho[k];
        }
    }
    v
}

/// `det B / prod_{k<k'} (rho_k' - rho_k)`. Tends to 1 as `lambda -> 0` and is
/// real for real `lambda`.
pub fn normalized_det(prob: &SpectralProblem, lambda: f64) -> Complex64 {
    boundary_matrix(prob, lambda).determinant() / vandermonde(&prob.exponents(lambda))
}

/// `|normalized_det|`.
pub fn char_value(prob: &SpectralProblem, lambda: f64) -> f64 {
    normalized_det(prob, lambda).norm()
}

fn signed_char(prob: &SpectralProblem, lambda: f64) -> f64 {
    normalized_det(prob, lambda).re
}

/// Smallest positive root of a scalar function, scanning `(0, ceiling]` at
/// `step`. Sign changes are refined by the Illinois method; local minima of
/// `|f|` that touch zero without crossing it are refined by golden section.
fn first_root(f: impl Fn(f64) -> f64, step: f64, ceiling: f64, tol: f64) -> std::result::Result<f64, String> {
    let mut a = step;
    let mut fa = f(a);
    let mut prev: Option<(f64, f64)> = None;
    let mut smallest = (a, fa.abs());
    while a < ceiling {
        let b = (a + step).min(ceiling);
        let fb = f(b);
        if fa == 0.0 {
            return Ok(a);
        }
        if fa.signum() != fb.signum() {
            return Ok(illinois(&f, a, b, fa, fb, tol));
        }
        // a touching minimum at `a`
        if let Some((p, fp)) = prev {
            if fa.abs() < fp.abs() && fa.abs() <= fb.abs() {
                let g = |x: f64| f(x).abs();
                let x = golden_min(g, p, b, tol);
                let scale = fp.abs().max(fb.abs()).max(1.0);
                if g(x) <= 1e-9 * scale {
                    return Ok(x);
                }
            }
        }
        if fb.abs() < smallest.1 {
            smallest = (b, fb.abs());
        }
        prev = Some((a, fa));
        a = b;
        fa = fb;
    }
    Err(format!(
        "no sign change or touching zero; smallest |value| {:.3e} at {:.3}",
        smallest.1, smallest.0
    ))
}

fn illinois(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> f64 {
    let mut side = 0i8;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c);
        if fc == 0.0 || (b - a).abs() < tol {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa /= 2.0;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb /= 2.0;
            }
            side = 1;
        }
        if (b - a).abs() < tol {
            break;
        }
    }
    (a * fb - b * fa) / (fb - fa)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// First eigenvalue: the smallest `lambda > 0` where the boundary matrix is
/// singular, searched on `(0, 4m]`.
pub fn find_lambda(prob: &SpectralProblem, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let ceiling = 4.0 * prob.m() as f64;
    first_root(|x| signed_char(prob, x), SCAN_STEP, ceiling, tol)
        .map_err(|diagnostics| Error::SearchFailure { ceiling, diagnostics })
}

/// Normalized first eigenfunction sampled on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSolution {
    pub lambda: f64,
    pub xi: Complex64,
    /// `u(t) = Re sum_k coeffs[k] exp(rho_k t)`.
    pub coeffs: Vec<Complex64>,
    pub grid: Vec<f64>,
    pub samples: Vec<f64>,
    /// Largest imaginary part on the grid after rotation, relative to max u.
    pub imag_residue: f64,
    /// `|B c| / |c|`.
    pub null_residual: f64,
    pub exponents: Vec<Complex64>,
}

impl EigenSolution {
    fn complex_value(&self, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&self.exponents)
            .map(|(c, rho)| c * (rho * t).exp())
            .sum()
    }

    pub fn value_at(&self, t: f64) -> f64 {
        self.complex_value(t).re
    }

    /// Smallest sample; positivity means this is not below `-tolerance`.
    pub fn min_sample(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Null vector of the boundary matrix at `lambda`, rotated to a real function
/// with maximum 1.
pub fn eigenfunction(prob: &SpectralProblem, lambda: f64, grid_size: usize) -> Result<EigenSolution> {
    if grid_size < 2 {
        return Err(Error::InvalidInput("grid needs at least 2 points".into()));
    }
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::InvalidInput(format!("lambda must be positive, got {lambda}")));
    }
    let b = boundary_matrix(prob, lambda);
    let m = prob.m();
    let svd = b.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]));
    let largest = svd.singular_values[order[m - 1]];
    if m > 1 {
        let ratio = svd.singular_values[order[1]] / largest;
        if ratio < DEGENERACY_RATIO {
            return Err(Error::Degenerate { lambda, ratio });
        }
    }
    let null: DVector<Complex64> = v_t.row(order[0]).adjoint();
    let null_residual = (&b * &null).norm() / null.norm();

    let grid: Vec<f64> = (0..grid_size).map(|j| j as f64 / (grid_size - 1) as f64).collect();
    let exponents = prob.exponents(lambda);
    let mut sol = EigenSolution {
        lambda,
        xi: prob.xi(),
        coeffs: null.iter().copied().collect(),
        grid,
        samples: Vec::new(),
        imag_residue: 0.0,
        null_residual,
        exponents,
    };
    let raw: Vec<Complex64> = sol.grid.iter().map(|&t| sol.complex_value(t)).collect();

    // rotate so that sum z^2 is real and positive: the most nearly real phase
    let theta = raw.iter().map(|z| z * z).sum::<Complex64>().arg() / 2.0;
    let mut rot = Complex64::from_polar(1.0, -theta);
    let peak = raw
        .iter()
        .map(|z| (z * rot).re)
        .max_by(|x, y| x.abs().total_cmp(&y.abs()))
        .unwrap_or(0.0);
    if peak == 0.0 {
        return Err(Error::Degenerate { lambda, ratio: 0.0 });
    }
    if peak < 0.0 {
        rot = -rot;
    }
    let rotated: Vec<Complex64> = raw.iter().map(|z| z * rot).collect();
    let max = rotated.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let scale = rot / max;
    sol.coeffs.iter_mut().for_each(|c| *c *= scale);
    sol.samples = rotated.iter().map(|z| z.re / max).collect();
    sol.imag_residue = rotated.iter().map(|z| (z.im / max).abs()).fold(0.0, f64::max);
    Ok(sol)
}

/// `find_lambda` followed by `eigenfunction`.
pub fn solve(period: &UpDownPeriod, phase: usize, grid_size: usize) -> Result<EigenSolution> {
    let prob = SpectralProblem::new(period, phase)?;
    let lambda = find_lambda(&prob, ROOT_TOL)?;
    eigenfunction(&prob, lambda, grid_size)
}

/// One period of discretized integration operators, as a dense `n x n`
/// matrix with nonnegative entries.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscretizedOperator {
    pub matrix: DMatrix<f64>,
    pub period_len: usize,
}

/// `S^0_n`: lower triangular ones (diagonal included) over `n`, the
/// quadrature of `int_0^x`.
pub fn s0(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if j <= i { 1.0 / n as f64 } else { 0.0 })
}

/// `S^1_n = J/n - S^0_n`, the quadrature of `int_x^1`.
pub fn s1(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if j > i { 1.0 / n as f64 } else { 0.0 })
}

/// Composite operator for phase `l`: factors for `p_l, p_{l+1}, ...,
/// p_{l+m-1}` are applied in that order, `S^0` for an ascent and `S^1` for a
/// descent. Its dominant eigenvector approximates `u_l`.
pub fn discretize_phase(period: &UpDownPeriod, phase: usize, n: usize) -> Result<DiscretizedOperator> {
    let m = period.len();
    if n < m {
        return Err(Error::InvalidInput(format!("grid size {n} is below the period length {m}")));
    }
    if phase >= m {
        return Err(Error::OutOfRange {
            index: phase,
            reason: format!("phase must be below the period length {m}"),
        });
    }
    let (lo, hi) = (s0(n), s1(n));
    let mut matrix = DMatrix::identity(n, n);
    for step in 0..m {
        let factor = if period.bit_at(phase + step) == 1 { &lo } else { &hi };
        matrix = factor * matrix;
    }
    Ok(DiscretizedOperator { matrix, period_len: m })
}

/// Composite operator with factors in period order `p_1 .. p_m`.
pub fn discretize(period: &UpDownPeriod, n: usize) -> Result<DiscretizedOperator> {
    discretize_phase(period, 1 % period.len(), n)
}

/// Transfer from row `k` of the de Bruijn triangle to row `k + 1` through the
/// strict kernel: `k * T * row_k = row_{k+1}`. Row `k + 1` is built from
/// `p_k`.
pub fn row_transfer(period: &UpDownPeriod, k: usize) -> Result<DMatrix<f64>> {
    if k == 0 {
        return Err(Error::InvalidInput("rows are numbered from 1".into()));
    }
    let ascent = period.bit_at(k) == 1;
    let w = 1.0 / k as f64;
    Ok(DMatrix::from_fn(k + 1, k, |j, jj| {
        let hit = if ascent { jj < j } else { jj >= j };
        if hit {
            w
        } else {
            0.0
        }
    }))
}

/// Dominant eigenpair from power iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerResult {
    pub mu: f64,
    /// Nonnegative, sup norm 1.
    pub vector: DVector<f64>,
    pub iterations: usize,
}

pub const POWER_CAP: usize = 100_000;

pub fn power_iterate(op: &DiscretizedOperator, tol: f64) -> Result<PowerResult> {
    let n = op.matrix.nrows();
    if op.matrix.iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidInput("operator has negative entries".into()));
    }
    let mut v = DVector::from_element(n, 1.0);
    let mut mu = 0.0;
    for it in 1..=POWER_CAP {
        let w = &op.matrix * &v;
        let next_mu = w.amax();
        if next_mu == 0.0 {
            return Err(Error::NonConvergence("operator annihilates the start vector".into()));
        }
        let next = w / next_mu;
        let moved = (&next - &v).amax();
        v = next;
        if (next_mu - mu).abs() <= tol * next_mu && moved <= tol.sqrt() {
            return Ok(PowerResult {
                mu: next_mu,
                vector: v,
                iterations: it,
            });
        }
        mu = next_mu;
    }
    Err(Error::NonConvergence(format!("power iteration hit the cap of {POWER_CAP} steps")))
}

impl DiscretizedOperator {
    /// `mu^(-1/m)` from power iteration.
    pub fn lambda_estimate(&self, tol: f64) -> Result<f64> {
        let res = power_iterate(self, tol)?;
        Ok(res.mu.powf(-1.0 / self.period_len as f64))
    }
}

/// `phi_{m,j}(z) = (1/m) sum_k omega^{-jk} exp(omega^k z)`.
pub fn olivier_numeric(m: usize, j: usize, z: Complex64) -> Complex64 {
    (0..m)
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / m as f64;
            Complex64::from_polar(1.0, -angle * j as f64) * (Complex64::from_polar(1.0, angle) * z).exp()
        })
        .sum::<Complex64>()
        / m as f64
}

/// `det M^P(z)` from numerically summed Olivier functions.
pub fn det_m_numeric(period: &UpDownPeriod, z: Complex64) -> Result<Complex64> {
    period.ensure_normalized()?;
    let m = period.len();
    let labels = crate::egf::zero_labels(period);
    let r = labels.len();
    let mat = DMatrix::from_fn(r, r, |a, b| {
        let idx = (labels[a] as i64 - labels[b] as i64).rem_euclid(m as i64) as usize;
        olivier_numeric(m, idx, z)
    });
    Ok(mat.determinant())
}

/// Smallest `t > 0` where `det M^P(xi t)` vanishes, located by golden section
/// on its modulus.
pub fn det_m_root(period: &UpDownPeriod, tol: f64) -> Result<f64> {
    let prob = SpectralProblem::new(period, 0)?;
    let xi = prob.xi();
    period.ensure_normalized()?;
    let ceiling = 4.0 * period.len() as f64;
    let g = |t: f64| det_m_numeric(period, xi * t).map(|d| d.norm()).unwrap_or(f64::NAN);
    let mut t = SCAN_STEP;
    let (mut g_prev, mut g_cur) = (f64::INFINITY, g(t));
    while t < ceiling {
        let g_next = g(t + SCAN_STEP);
        if g_cur <= g_prev && g_cur <= g_next {
            let x = golden_min(g, t - SCAN_STEP, t + SCAN_STEP, tol);
            if g(x) <= 1e-9 * g_prev.min(g_next).max(1.0) {
                return Ok(x);
            }
        }
        g_prev = g_cur;
        g_cur = g_next;
        t += SCAN_STEP;
    }
    Err(Error::SearchFailure {
        ceiling,
        diagnostics: "no zero of |det M(xi t)| on the scan grid".into(),
    })
}
