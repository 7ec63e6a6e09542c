//! Degree distributions and power-law fits of the form `P(k) ~ c k^-lambda`.
//!
//! The main route is ordinary least squares on a log-binned PMF in
//! log10-log10 space over an automatically detected linear range. A
//! discrete maximum-likelihood estimate of the exponent is provided as an
//! independent cross-check.
//!
//! Log binning treats an integer degree `k` as covering `[k, k + 1)`. Bin
//! `i` holds the degrees in `[base^i, base^(i+1))`, clipped to the observed
//! degree range; its mass is divided by the number of integer degrees it
//! covers and it is plotted at the geometric mean of its clipped edges.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DegreeSequence;
use crate::regression::ols;
use crate::zeta::hurwitz_zeta;

pub const DEFAULT_BIN_BASE: f64 = 2.0;

/// Minimum share of total mass that must lie at or above an automatically
/// selected `k_min`.
pub const AUTO_MIN_MASS_FRACTION: f64 = 0.25;
/// Minimum number of points an automatically selected range must keep.
pub const AUTO_MIN_POINTS: usize = 3;
pub const MLE_MIN_SAMPLES: usize = 50;

/// One point of a distribution. `width` is the number of integer degrees the
/// point stands for: 1 for raw points, the bin width for binned ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistPoint {
    pub k: f64,
    pub p: f64,
    pub width: f64,
}

impl DistPoint {
    pub fn mass(&self) -> f64 {
        self.p * self.width
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTable {
    points: Vec<DistPoint>,
    bin_base: Option<f64>,
    sample_size: usize,
}

impl DistributionTable {
    /// Unbinned table from `(k, p)` pairs. Zero-mass points are dropped.
    ///
    /// Masses need not be normalised: fixtures built from fitted
    /// coefficients carry the amplitude `c` directly.
    pub fn from_points<I>(points: I, sample_size: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut out: Vec<DistPoint> = Vec::new();
        for (k, p) in points {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::Parameter(format!("abscissa must be positive and finite (got {k})")));
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::Parameter(format!("mass must be non-negative and finite (got {p})")));
            }
            if let Some(last) = out.last() {
                if k <= last.k {
                    return Err(Error::Parameter(format!(
                        "abscissas must be strictly increasing ({} then {k})",
                        last.k
                    )));
                }
            }
            if p > 0.0 {
                out.push(DistPoint { k, p, width: 1.0 });
            }
        }
        Ok(Self {
            points: out,
            bin_base: None,
            sample_size,
        })
    }

    pub fn points(&self) -> &[DistPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_binned(&self) -> bool {
        self.bin_base.is_some()
    }

    pub fn bin_base(&self) -> Option<f64> {
        self.bin_base
    }

    /// Node count the table was built from, including degree-0 nodes.
    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    pub fn total_mass(&self) -> f64 {
        self.points.iter().map(DistPoint::mass).sum()
    }

    /// Copy with every mass multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for pt in &mut out.points {
            pt.p *= factor;
        }
        out
    }

    /// Two-column `k<TAB>p` rows for external plotting.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        for pt in &self.points {
            writeln!(out, "{}\t{:e}", pt.k, pt.p)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `p(k) = count(k) / node_count` over observed `k > 0`.
pub fn empirical_pmf(degs: &DegreeSequence) -> Result<DistributionTable> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in degs.degrees().iter().filter(|&&d| d > 0) {
        *counts.entry(d).or_insert(0) += 1;
    }
    if counts.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let n = degs.len() as f64;
    let points = counts
        .into_iter()
        .map(|(k, c)| DistPoint {
            k: k as f64,
            p: c as f64 / n,
            width: 1.0,
        })
        .collect();
    Ok(DistributionTable {
        points,
        bin_base: None,
        sample_size: degs.len(),
    })
}

struct Binning {
    ln_base: f64,
    base: f64,
}

impl Binning {
    fn index(&self, k: u64) -> i64 {
        let kf = k as f64;
        let mut i = (kf.ln() / self.ln_base).floor() as i64;
        while self.edge(i + 1) <= kf * (1.0 + 1e-12) {
            i += 1;
        }
        while i > 0 && self.edge(i) > kf * (1.0 + 1e-12) {
            i -= 1;
        }
        i
    }

    fn edge(&self, i: i64) -> f64 {
        self.base.powi(i as i32)
    }

    /// Smallest integer degree assigned to bin `i`.
    fn first_degree(&self, i: i64) -> u64 {
        let mut c = (self.edge(i) * (1.0 - 1e-12)).ceil().max(1.0) as u64;
        while self.index(c) < i {
            c += 1;
        }
        while c > 1 && self.index(c - 1) >= i {
            c -= 1;
        }
        c
    }
}

/// Aggregates an unbinned integer-degree table into geometric bins.
pub fn log_bin(dist: &DistributionTable, base: f64) -> Result<DistributionTable> {
    if !(base.is_finite() && base > 1.0) {
        return Err(Error::Parameter(format!("bin base must exceed 1 (got {base})")));
    }
    if dist.is_binned() {
        return Err(Error::Parameter("distribution is already binned".into()));
    }
    if dist.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let mut degrees = Vec::with_capacity(dist.len());
    for pt in dist.points() {
        if pt.k.fract() != 0.0 {
            return Err(Error::Parameter(format!(
                "log binning expects integer degrees (got {})",
                pt.k
            )));
        }
        degrees.push(pt.k as u64);
    }
    let lowest = degrees[0];
    let highest = *degrees.last().unwrap();
    let binning = Binning {
        ln_base: base.ln(),
        base,
    };

    let mut bins: BTreeMap<i64, f64> = BTreeMap::new();
    for (pt, &k) in dist.points().iter().zip(&degrees) {
        *bins.entry(binning.index(k)).or_insert(0.0) += pt.mass();
    }
    let points = bins
        .into_iter()
        .map(|(i, mass)| {
            let lo = binning.first_degree(i).max(lowest);
            let hi = (binning.first_degree(i + 1) - 1).min(highest);
            let width = (hi - lo + 1) as f64;
            DistPoint {
                k: (lo as f64 * (hi + 1) as f64).sqrt(),
                p: mass / width,
                width,
            }
        })
        .collect();
    Ok(DistributionTable {
        points,
        bin_base: Some(base),
        sample_size: dist.sample_size,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RangeStrategy {
    /// Scan candidate lower bounds and keep the best log-log R².
    Auto,
    Fixed(f64),
}

/// Picks the lower bound of the power-law range.
///
/// `Auto` tries every point abscissa as `k_min`, fits the points at or above
/// it, and returns the candidate with the highest R² among those keeping at
/// least [`AUTO_MIN_POINTS`] points and [`AUTO_MIN_MASS_FRACTION`] of the
/// total mass. Ties go to the smaller `k_min`.
pub fn select_linear_range(dist: &DistributionTable, strategy: RangeStrategy) -> Result<f64> {
    if dist.len() < 4 {
        return Err(Error::Range {
            needed: 4,
            got: dist.len(),
        });
    }
    let k_min = match strategy {
        RangeStrategy::Fixed(k) => k,
        RangeStrategy::Auto => {
            let pts = dist.points();
            let (lx, ly) = log_coords(pts);
            let total = dist.total_mass();
            let mut mass_above = total;
            let mut best: Option<(f64, f64)> = None;
            for j in 0..pts.len() {
                if j > 0 {
                    mass_above -= pts[j - 1].mass();
                }
                if pts.len() - j < AUTO_MIN_POINTS
                    || mass_above < AUTO_MIN_MASS_FRACTION * total * (1.0 - 1e-12)
                {
                    break;
                }
                let r2 = match ols(&lx[j..], &ly[j..]) {
                    Ok(fit) => fit.r_squared,
                    Err(_) => continue,
                };
                if best.is_none_or(|(b, _)| r2 > b + 1e-12) {
                    best = Some((r2, pts[j].k));
                }
            }
            best.map(|(_, k)| k).unwrap_or(pts[0].k)
        }
    };
    Ok(k_min)
}

fn log_coords(pts: &[DistPoint]) -> (Vec<f64>, Vec<f64>) {
    pts.iter().map(|pt| (pt.k.log10(), pt.p.log10())).unzip()
}

/// Power-law coefficients over a fitted range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub c: f64,
    pub lambda: f64,
    pub r_squared: f64,
    /// Smallest abscissa used by the fit.
    pub k_min: f64,
    /// Largest abscissa used by the fit.
    pub k_max: f64,
    pub n_points: usize,
}

/// OLS of `log10 p` on `log10 k` over points with `k_min <= k <= k_max`.
/// Returns `lambda = -slope` and `c = 10^intercept`.
pub fn fit_ols_loglog(dist: &DistributionTable, k_min: f64, k_max: f64) -> Result<PowerLawFit> {
    let lo = k_min * (1.0 - 1e-12);
    let hi = k_max * (1.0 + 1e-12);
    let in_range: Vec<DistPoint> = dist
        .points()
        .iter()
        .copied()
        .filter(|pt| pt.k >= lo && pt.k <= hi)
        .collect();
    if in_range.len() < 2 {
        return Err(Error::Range {
            needed: 2,
            got: in_range.len(),
        });
    }
    let (lx, ly) = log_coords(&in_range);
    let fit = ols(&lx, &ly)?;
    Ok(PowerLawFit {
        c: 10f64.powf(fit.intercept),
        lambda: -fit.slope,
        r_squared: fit.r_squared,
        k_min: in_range[0].k,
        k_max: in_range[in_range.len() - 1].k,
        n_points: in_range.len(),
    })
}

/// `select_linear_range` followed by a fit over everything above `k_min`.
pub fn fit_auto(dist: &DistributionTable, strategy: RangeStrategy) -> Result<PowerLawFit> {
    let k_min = select_linear_range(dist, strategy)?;
    fit_ols_loglog(dist, k_min, f64::INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MleFit {
    pub lambda: f64,
    pub k_min: usize,
    /// Samples at or above `k_min`.
    pub n_tail: usize,
    pub log_likelihood: f64,
}

impl MleFit {
    /// Normalising amplitude `1 / zeta(lambda, k_min)` of the fitted law.
    pub fn amplitude(&self) -> f64 {
        1.0 / hurwitz_zeta(self.lambda, self.k_min as f64)
    }
}

const MLE_LOWER: f64 = 1.0 + 1e-9;
const MLE_UPPER: f64 = 50.0;

/// Discrete power-law MLE on degrees `>= k_min`.
///
/// Maximises `-lambda * sum(ln k) - n ln zeta(lambda, k_min)` by golden
/// section search; the log-likelihood is concave in `lambda`.
pub fn fit_mle_discrete(degs: &DegreeSequence, k_min: usize) -> Result<MleFit> {
    if k_min == 0 {
        return Err(Error::Parameter("k_min must be at least 1".into()));
    }
    let tail: Vec<usize> = degs.degrees().iter().copied().filter(|&d| d >= k_min).collect();
    if tail.len() < MLE_MIN_SAMPLES {
        return Err(Error::SampleSize {
            needed: MLE_MIN_SAMPLES,
            got: tail.len(),
        });
    }
    if tail.iter().all(|&d| d == tail[0]) {
        return Err(Error::Divergence(format!(
            "all {} samples equal {}",
            tail.len(),
            tail[0]
        )));
    }
    let n = tail.len() as f64;
    let sum_ln: f64 = tail.iter().map(|&d| (d as f64).ln()).sum();
    let q = k_min as f64;
    let loglik = |lambda: f64| -lambda * sum_ln - n * hurwitz_zeta(lambda, q).ln();

    let lambda = golden_section_max(loglik, MLE_LOWER, MLE_UPPER, 1e-9);
    if lambda > MLE_UPPER - 1e-3 {
        return Err(Error::Divergence(format!(
            "likelihood still increasing at lambda = {MLE_UPPER}"
        )));
    }
    Ok(MleFit {
        lambda,
        k_min,
        n_tail: tail.len(),
        log_likelihood: loglik(lambda),
    })
}

fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
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
    0.5 * (a + b)
}

/// Serialised fit summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub network: String,
    pub c: f64,
    pub lambda: f64,
    pub r2: Option<f64>,
    pub k_min: f64,
    pub k_max: f64,
    pub n_points: usize,
    pub method: String,
}

impl FitRecord {
    pub fn from_ols(network: &str, fit: &PowerLawFit) -> Self {
        Self {
            network: network.to_owned(),
            c: fit.c,
            lambda: fit.lambda,
            r2: Some(fit.r_squared),
            k_min: fit.k_min,
            k_max: fit.k_max,
            n_points: fit.n_points,
            method: "ols-loglog".into(),
        }
    }

    pub fn from_mle(network: &str, fit: &MleFit, k_max: usize) -> Self {
        Self {
            network: network.to_owned(),
            c: fit.amplitude(),
            lambda: fit.lambda,
            r2: None,
            k_min: fit.k_min as f64,
            k_max: k_max as f64,
            n_points: fit.n_tail,
            method: "mle-discrete".into(),
        }
    }

    /// Tab-separated `network c lambda R²` row, e.g. `net 2E+07 1.531 0.913`.
    pub fn table_row(&self) -> String {
        let r2 = self.r2.map_or_else(|| "-".to_owned(), |r| format!("{r:.3}"));
        format!("{}\t{}\t{:.3}\t{}", self.network, format_sci(self.c), self.lambda, r2)
    }
}

/// One-significant-digit scientific notation with a signed two-digit
/// exponent, e.g. `9E+06`.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let s = format!("{x:.0e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}
