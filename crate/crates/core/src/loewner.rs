//! Chordal Loewner evolution in the upper half-plane with piecewise
//! constant driving.
//!
//! One step of capacity `dt` at driving value `u` is the vertical slit map
//! `g(z) = u + √((z - u)² + 4 dt)`, which removes the segment from `u` to
//! `u + 2i√dt`. Its inverse `f(w) = u + √((w - u)² - 4 dt)` grows that slit.
//! Tracing composes inverses; unzipping a curve composes forward maps.

use num_complex::Complex64;
use rand::{Rng, RngExt};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, ContinuousCDF, DiscreteCDF, Normal};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoewnerError {
    #[error("driving sample is malformed: {0}")]
    BadSample(&'static str),
    #[error("step {0} left the half-plane")]
    StepTooLarge(usize),
    #[error("curve point {0} maps onto the real line")]
    NonPositiveIncrement(usize),
    #[error("not enough data: {0}")]
    InsufficientData(&'static str),
}

/// Driving values `U(t_k)` at increasing capacity times, starting `(0, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrivingSample {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl DrivingSample {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self, LoewnerError> {
        if times.len() != values.len() || times.is_empty() {
            return Err(LoewnerError::BadSample("times and values must be nonempty and equally long"));
        }
        if times[0] != 0.0 || values[0] != 0.0 {
            return Err(LoewnerError::BadSample("must start at (0, 0)"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LoewnerError::BadSample("times must increase strictly"));
        }
        if values.iter().chain(&times).any(|v| !v.is_finite()) {
            return Err(LoewnerError::BadSample("non-finite entry"));
        }
        Ok(Self { times, values })
    }

    /// Uniform grid `k·dt`, `k = 0..=n`, from values `U_1..U_n`.
    pub fn uniform(dt: f64, values: impl IntoIterator<Item = f64>) -> Result<Self, LoewnerError> {
        let values: Vec<f64> = std::iter::once(0.0).chain(values).collect();
        let times = (0..values.len()).map(|k| k as f64 * dt).collect();
        Self::new(times, values)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().expect("nonempty")
    }

    /// Linear interpolation; `None` past the last time.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        if !(0.0..=self.t_max()).contains(&t) {
            return None;
        }
        let k = self.times.partition_point(|&s| s < t);
        if k == 0 {
            return Some(self.values[0]);
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let (u0, u1) = (self.values[k - 1], self.values[k]);
        Some(u0 + (u1 - u0) * (t - t0) / (t1 - t0))
    }

    /// Steps `(u_k, dt_k)` with the right-end driving value on each interval.
    fn steps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (1..self.len()).map(|k| (self.values[k], self.times[k] - self.times[k - 1]))
    }

    /// This sample followed by `other` shifted to start where this one ends.
    pub fn concat(&self, other: &DrivingSample) -> DrivingSample {
        let (t0, u0) = (self.t_max(), *self.values.last().expect("nonempty"));
        let mut out = self.clone();
        out.times.extend(other.times[1..].iter().map(|t| t + t0));
        out.values.extend(other.values[1..].iter().map(|u| u + u0));
        out
    }

    /// `λ^{-1/2} U(λ t)` on the knots `t_k / λ`.
    pub fn rescaled(&self, lambda: f64) -> DrivingSample {
        DrivingSample {
            times: self.times.iter().map(|t| t / lambda).collect(),
            values: self.values.iter().map(|u| u / lambda.sqrt()).collect(),
        }
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "U"])?;
        for (t, u) in self.times.iter().zip(&self.values) {
            out.serialize((t, u))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// A planar polyline; `half_plane` marks curves living in the closed upper
/// half-plane and starting at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveR2 {
    pub points: Vec<Complex64>,
    pub half_plane: bool,
}

impl CurveR2 {
    pub fn new(points: Vec<Complex64>) -> Self {
        Self { points, half_plane: true }
    }

    pub fn translated(&self, by: Complex64) -> Self {
        Self { points: self.points.iter().map(|p| p + by).collect(), half_plane: self.half_plane }
    }

    pub fn xy(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|p| [p.re, p.im]).collect()
    }
}

/// Square root on the branch with nonnegative imaginary part; on the real
/// line the sign follows `side`, so real points keep their side of the slit.
#[inline]
fn upper_sqrt(s: Complex64, side: Complex64) -> Complex64 {
    let (a, b) = (s.re, s.im);
    let m = (a * a + b * b).sqrt();
    if a >= 0.0 {
        let x = ((m + a) / 2.0).sqrt();
        if x == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let y = b / (2.0 * x);
        if b < 0.0 || (b == 0.0 && side.re < 0.0) { Complex64::new(-x, -y) } else { Complex64::new(x, y) }
    } else {
        let y = ((m - a) / 2.0).sqrt();
        Complex64::new(b / (2.0 * y), y)
    }
}

/// Forward slit map `g`.
#[inline]
pub fn slit_map(z: Complex64, u: f64, dt: f64) -> Complex64 {
    let a = z - u;
    u + upper_sqrt(a * a + 4.0 * dt, a)
}

/// Inverse slit map `f = g⁻¹`.
#[inline]
pub fn slit_inverse(w: Complex64, u: f64, dt: f64) -> Complex64 {
    let a = w - u;
    u + upper_sqrt(a * a - 4.0 * dt, a)
}

/// `g(z) - z` without cancellation for large `|z|`.
#[inline]
fn slit_displacement(z: Complex64, u: f64, dt: f64) -> Complex64 {
    let a = z - u;
    let r = upper_sqrt(a * a + 4.0 * dt, a);
    4.0 * dt / (r + a)
}

/// Tip positions `γ(t_k)` of the Loewner chain driven by `d`, including the
/// starting point `U(0)`.
pub fn forward_trace(d: &DrivingSample) -> Result<CurveR2, LoewnerError> {
    let steps: Vec<(f64, f64)> = d.steps().collect();
    let mut points = Vec::with_capacity(steps.len() + 1);
    points.push(Complex64::new(d.values[0], 0.0));
    for n in 0..steps.len() {
        let mut w = Complex64::new(steps[n].0, 0.0);
        for &(u, dt) in steps[..=n].iter().rev() {
            w = slit_inverse(w, u, dt);
        }
        if !w.is_finite() || w.im < -1e-9 * (1.0 + w.norm()) {
            return Err(LoewnerError::StepTooLarge(n + 1));
        }
        points.push(w);
    }
    Ok(CurveR2::new(points))
}

/// Incremental vertical-slit zipper: each pushed point is sent through the
/// maps collected so far and contributes one slit step.
#[derive(Debug, Clone, Default)]
pub struct Zipper {
    steps: Vec<(f64, f64)>,
    time: f64,
}

impl Zipper {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the next curve point (in coordinates where the curve starts at
    /// the origin) and returns the new `(t, U_t)`.
    pub fn push(&mut self, p: Complex64) -> Result<(f64, f64), LoewnerError> {
        let mut z = p;
        for &(u, dt) in &self.steps {
            z = slit_map(z, u, dt);
        }
        if !(z.im > 0.0) || !z.is_finite() {
            return Err(LoewnerError::NonPositiveIncrement(self.steps.len() + 1));
        }
        let dt = z.im * z.im / 4.0;
        self.steps.push((z.re, dt));
        self.time += dt;
        Ok((self.time, z.re))
    }

    /// Capacity reached so far.
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn driving(&self) -> DrivingSample {
        let mut times = vec![0.0];
        let mut values = vec![0.0];
        let mut t = 0.0;
        for &(u, dt) in &self.steps {
            t += dt;
            // increments below the resolution of `t` collapse onto one knot
            if t > times[times.len() - 1] {
                times.push(t);
                values.push(u);
            } else {
                *values.last_mut().expect("nonempty") = u;
            }
        }
        DrivingSample { times, values }
    }
}

/// Slit steps `(u_k, dt_k)` whose composed inverse maps trace the curve.
/// The first point is taken as the starting point on the real line.
fn unzip(c: &CurveR2) -> Result<Vec<(f64, f64)>, LoewnerError> {
    let Some(first) = c.points.first() else {
        return Err(LoewnerError::InsufficientData("empty curve"));
    };
    let mut z = Zipper::new();
    for &p in &c.points[1..] {
        z.push(p - first.re)?;
    }
    Ok(z.steps.into_iter().map(|(u, dt)| (u + first.re, dt)).collect())
}

/// The driving function of a curve from its starting point, one knot per
/// curve point.
pub fn extract_driving(c: &CurveR2) -> Result<DrivingSample, LoewnerError> {
    let steps = unzip(c)?;
    let start = c.points[0].re;
    let mut times = vec![0.0];
    let mut values = vec![0.0];
    let mut t = 0.0;
    for (u, dt) in steps {
        t += dt;
        times.push(t);
        values.push(u - start);
    }
    DrivingSample::new(times, values)
}

/// Half-plane capacity of a curve, read from `z (G(z) - z) / 2` at a large
/// imaginary `z` where `G` is the composed unzipping map.
pub fn capacity(c: &CurveR2) -> Result<f64, LoewnerError> {
    let steps = unzip(c)?;
    let scale = c.points.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let z0 = Complex64::new(0.0, 1e6 * scale);
    let mut z = z0;
    let mut shift = Complex64::new(0.0, 0.0);
    for (u, dt) in steps {
        let d = slit_displacement(z, u, dt);
        shift += d;
        z += d;
    }
    Ok((z0 * shift).re / 2.0)
}

/// The time at which `z` is swallowed under the chain driven by `d`, by RK4
/// integration of `∂t g = 2 / (g - U)` between the knots of the linearly
/// interpolated driving, with step sizes shrinking near the singularity.
/// A point counts as swallowed once `|g - U|` drops below `1e-4 √t_max`. `None` when `z` survives to the end of the sample.
pub fn swallowing_time(z: Complex64, d: &DrivingSample) -> Option<f64> {
    let t_end = d.t_max();
    let h_max = t_end / (4 * d.len()).max(256) as f64;
    let eps = 1e-4 * t_end.sqrt().max(1e-12);
    let u = |t: f64| d.value_at(t.min(t_end)).expect("time in range");
    let rhs = |t: f64, g: Complex64| 2.0 / (g - u(t));
    let mut t = 0.0;
    let mut g = z;
    while t < t_end {
        let gap = (g - u(t)).norm();
        if gap < eps {
            return Some(t + gap * gap / 4.0);
        }
        let knot = d.times[d.times.partition_point(|&s| s <= t).min(d.len() - 1)];
        let h = (0.02 * gap * gap).min(h_max).min(knot - t);
        let k1 = rhs(t, g);
        let k2 = rhs(t + h / 2.0, g + k1 * (h / 2.0));
        let k3 = rhs(t + h / 2.0, g + k2 * (h / 2.0));
        let k4 = rhs(t + h, g + k3 * h);
        g += (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
        t += h;
    }
    None
}

/// `U_t = √κ B_t` on a uniform grid of `n` steps up to `t_max`.
pub fn brownian_driving<R: Rng>(kappa: f64, t_max: f64, n: usize, rng: &mut R) -> DrivingSample {
    let dt = t_max / n as f64;
    let sd = (kappa * dt).sqrt();
    let mut u = 0.0;
    let values: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            u += sd * z;
            u
        })
        .collect();
    DrivingSample::uniform(dt, values).expect("well formed")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaEstimate {
    pub kappa_hat: f64,
    /// Percentile bootstrap interval at `level`.
    pub confidence: (f64, f64),
    pub level: f64,
    pub n_paths: usize,
    pub t_max: f64,
    pub method: String,
}

const BOOTSTRAP_ROUNDS: usize = 1000;

/// Values at the grid times, one row per sample that reaches the last grid
/// time.
fn grid_values(samples: &[DrivingSample], grid: &[f64]) -> Result<Vec<Vec<f64>>, LoewnerError> {
    if grid.is_empty() || grid.iter().any(|&t| t <= 0.0) {
        return Err(LoewnerError::InsufficientData("grid must hold positive times"));
    }
    let t_max = grid.iter().copied().fold(0.0, f64::max);
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .filter(|s| s.t_max() >= t_max)
        .map(|s| grid.iter().map(|&t| s.value_at(t).expect("within range")).collect())
        .collect();
    if rows.len() < 2 {
        return Err(LoewnerError::InsufficientData("fewer than two samples reach the end of the grid"));
    }
    Ok(rows)
}

/// Through-origin least-squares slope of per-time sample variance.
fn variance_slope(rows: &[Vec<f64>], pick: impl Iterator<Item = usize> + Clone, grid: &[f64]) -> f64 {
    let n = pick.clone().count() as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for (j, &t) in grid.iter().enumerate() {
        let mean = pick.clone().map(|i| rows[i][j]).sum::<f64>() / n;
        let var = pick.clone().map(|i| (rows[i][j] - mean).powi(2)).sum::<f64>() / (n - 1.0);
        num += t * var;
        den += t * t;
    }
    num / den
}

/// `κ̂ = Σ t_j V_j / Σ t_j²` where `V_j` is the sample variance of `U(t_j)`;
/// a 95% percentile bootstrap over paths gives the interval. The bootstrap
/// draws come from a fixed-seed stream so the estimate is reproducible.
pub fn estimate_kappa(samples: &[DrivingSample], grid: &[f64]) -> Result<KappaEstimate, LoewnerError> {
    let rows = grid_values(samples, grid)?;
    let n = rows.len();
    let kappa_hat = variance_slope(&rows, 0..n, grid);
    let mut rng = crate::rng::stream(0x006b_6170_7061, 0);
    let mut boot: Vec<f64> = (0..BOOTSTRAP_ROUNDS)
        .map(|_| {
            let pick: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            variance_slope(&rows, pick.iter().copied(), grid)
        })
        .collect();
    boot.sort_by(f64::total_cmp);
    let lo = boot[(0.025 * BOOTSTRAP_ROUNDS as f64) as usize].min(kappa_hat);
    let hi = boot[(0.975 * BOOTSTRAP_ROUNDS as f64) as usize - 1].max(kappa_hat);
    Ok(KappaEstimate {
        kappa_hat,
        confidence: (lo, hi),
        level: 0.95,
        n_paths: n,
        t_max: grid.iter().copied().fold(0.0, f64::max),
        method: format!("least-squares slope of Var U(t) through the origin; percentile bootstrap over paths, {BOOTSTRAP_ROUNDS} rounds"),
    })
}

/// Statistics for the increments of one dyadic lag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagReport {
    /// Lag in grid steps.
    pub lag: usize,
    pub count: usize,
    pub mean: f64,
    /// Sample variance divided by the lag's duration.
    pub variance_rate: f64,
    /// Two-sided z-test of zero mean.
    pub mean_p: f64,
    /// Early versus late half of the time range, equal variance.
    pub stationarity_p: f64,
    /// Variance rate at this lag against lag one, on disjoint halves of the
    /// samples. Absent for lag one.
    pub scaling_p: Option<f64>,
    /// Uncentred correlation of consecutive increments within a sample.
    pub autocorrelation: f64,
    pub independence_p: f64,
    pub jarque_bera: f64,
    pub normality_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementReport {
    pub lags: Vec<LagReport>,
}

impl IncrementReport {
    /// Every reported p-value.
    pub fn p_values(&self) -> Vec<f64> {
        self.lags
            .iter()
            .flat_map(|l| [Some(l.mean_p), Some(l.stationarity_p), l.scaling_p, Some(l.independence_p), Some(l.normality_p)])
            .flatten()
            .collect()
    }

    pub fn normality_and_independence_p(&self) -> Vec<f64> {
        self.lags.iter().flat_map(|l| [l.normality_p, l.independence_p]).collect()
    }

    /// Largest number of rejections at level `alpha` that `count` independent
    /// true-null tests exceed with probability at most 1%.
    pub fn false_positive_budget(count: usize, alpha: f64) -> usize {
        if count == 0 {
            return 0;
        }
        let b = Binomial::new(alpha, count as u64).expect("valid binomial");
        (0..=count).find(|&k| 1.0 - b.cdf(k as u64) <= 0.01).unwrap_or(count)
    }
}

fn two_sided(z: f64) -> f64 {
    let n = Normal::standard();
    (2.0 * (1.0 - n.cdf(z.abs()))).clamp(0.0, 1.0)
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sample comparison of variances by the normal approximation to the
/// log variance ratio, `Var log s² ≈ 2 / (n - 1)`.
fn variance_ratio_p(v1: f64, n1: usize, v2: f64, n2: usize) -> f64 {
    if v1 == 0.0 && v2 == 0.0 {
        return 1.0;
    }
    if v1 <= 0.0 || v2 <= 0.0 {
        return 0.0;
    }
    let se = (2.0 / (n1 as f64 - 1.0) + 2.0 / (n2 as f64 - 1.0)).sqrt();
    two_sided((v1 / v2).ln() / se)
}

/// Increment tests over dyadic lags of the grid. The grid must be uniform,
/// `t_j = j·h` for `j = 1..=m`; increments start from `U(0) = 0`.
pub fn increment_tests(samples: &[DrivingSample], grid: &[f64]) -> Result<IncrementReport, LoewnerError> {
    let rows = grid_values(samples, grid)?;
    let m = grid.len();
    let h = grid[0];
    if grid.iter().enumerate().any(|(j, &t)| (t - (j + 1) as f64 * h).abs() > 1e-9 * t) {
        return Err(LoewnerError::InsufficientData("grid must be uniform starting at its spacing"));
    }
    if m < 4 {
        return Err(LoewnerError::InsufficientData("grid needs at least four points"));
    }
    let at = |row: &Vec<f64>, j: usize| if j == 0 { 0.0 } else { row[j - 1] };
    // per sample, per window increments
    let windows = |lag: usize, which: &dyn Fn(usize) -> bool| -> Vec<Vec<f64>> {
        rows.iter()
            .enumerate()
            .filter(|(i, _)| which(*i))
            .map(|(_, row)| (0..m / lag).map(|k| at(row, (k + 1) * lag) - at(row, k * lag)).collect())
            .collect()
    };
    let all = |_: usize| true;
    let (_, base_var_odd) = mean_var(&windows(1, &|i| i % 2 == 1).concat());
    let n_odd = windows(1, &|i| i % 2 == 1).concat().len();

    let mut lags = Vec::new();
    let mut lag = 1;
    while m / lag >= 2 {
        let per_sample = windows(lag, &all);
        let flat: Vec<f64> = per_sample.concat();
        let count = flat.len();
        let (mean, var) = mean_var(&flat);
        let duration = lag as f64 * h;
        let mean_p = if var > 0.0 { two_sided(mean / (var / count as f64).sqrt()) } else if mean == 0.0 { 1.0 } else { 0.0 };

        let half = (m / lag) / 2;
        let early: Vec<f64> = per_sample.iter().flat_map(|w| w[..half].to_vec()).collect();
        let late: Vec<f64> = per_sample.iter().flat_map(|w| w[half..].to_vec()).collect();
        let stationarity_p = variance_ratio_p(mean_var(&early).1, early.len(), mean_var(&late).1, late.len());

        let scaling_p = (lag > 1).then(|| {
            let even: Vec<f64> = windows(lag, &|i| i % 2 == 0).concat();
            variance_ratio_p(mean_var(&even).1 / lag as f64, even.len(), base_var_odd, n_odd)
        });

        let (mut sab, mut saa, mut sbb, mut pairs) = (0.0, 0.0, 0.0, 0usize);
        for w in &per_sample {
            for p in w.windows(2) {
                sab += p[0] * p[1];
                saa += p[0] * p[0];
                sbb += p[1] * p[1];
                pairs += 1;
            }
        }
        let autocorrelation = if saa > 0.0 && sbb > 0.0 { sab / (saa * sbb).sqrt() } else { 0.0 };
        let independence_p = two_sided(autocorrelation * (pairs as f64).sqrt());

        let (jarque_bera, normality_p) = if var > 0.0 {
            let sd = var.sqrt();
            let nf = count as f64;
            let skew = flat.iter().map(|x| ((x - mean) / sd).powi(3)).sum::<f64>() / nf;
            let kurt = flat.iter().map(|x| ((x - mean) / sd).powi(4)).sum::<f64>() / nf;
            let jb = nf / 6.0 * (skew * skew + (kurt - 3.0).powi(2) / 4.0);
            (jb, (-jb / 2.0).exp())
        } else {
            (f64::INFINITY, 0.0)
        };

        lags.push(LagReport {
            lag,
            count,
            mean,
            variance_rate: var / duration,
            mean_p,
            stationarity_p,
            scaling_p,
            autocorrelation,
            independence_p,
            jarque_bera,
            normality_p,
        });
        lag *= 2;
    }
    Ok(IncrementReport { lags })
}
