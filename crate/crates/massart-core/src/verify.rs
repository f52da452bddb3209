//! Executable checks for the quantitative bounds behind the learner: the
//! closed-form contraction inequality of the default schedule, the band-mass
//! bracket, the disagreement tail outside a band, the in-band hinge and
//! error bounds, and the empirical generalization gap. Monte-Carlo checks
//! are one-sided at a 3-sigma tolerance and every outcome carries its
//! numeric margin, not just a pass flag.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    band_mass_bounds, disagreement_outside_band_bound, dot, sample_in_band, sample_unit_ball,
    sample_unit_sphere, Band, UnitVector,
};
use crate::learn::{paper_tau_ratio, Schedule, PAPER_INITIAL_ANGLE_SCALE, PAPER_LAMBDA};
use crate::loss::{hinge, RunningMean};
use crate::noise::{clean_labels, Label, LabeledExample, MassartInstance};
use crate::seeds;
use crate::solver::{minimize_hinge_in_ball, SolverOptions};

/// Coefficient of `tau / b` in the in-band error bound of one round.
pub const ERR_TAU_COEFF: f64 = 0.757941;
/// Coefficient of `sqrt(1 - beta) * b / tau` in the in-band error bound.
pub const ERR_NOISE_COEFF: f64 = 3.303;
/// Additive optimization/generalization slack term of the in-band bound.
pub const ERR_GEN_TERM: f64 = 3.28e-6;

/// Coefficient of `tau / b` bounding the target's expected hinge loss on the
/// clean in-band distribution: `0.5463 * 2^0.285329`, about `0.665769`.
pub fn target_hinge_coeff() -> f64 {
    0.5463 * 2f64.powf(0.285329)
}

/// Coefficient of `sqrt(1 - beta) * b / tau` bounding the clean-vs-noisy
/// hinge gap in the band: `1.092 * sqrt(2)`.
pub fn noise_gap_coeff() -> f64 {
    1.092 * 2f64.sqrt()
}

/// One executed check: the measured statistic, the bound it is held to, the
/// Monte-Carlo standard error (zero for closed-form checks), and the margin
/// by which it passed or failed.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheckOutcome {
    pub name: String,
    pub statistic: f64,
    pub bound: f64,
    pub sigma: f64,
    /// Distance to the nearest failing boundary; negative when failing.
    pub margin: f64,
    pub pass: bool,
}

impl CheckOutcome {
    /// One-sided Monte-Carlo check: `statistic <= bound + 3 sigma`.
    fn one_sided(name: String, statistic: f64, bound: f64, sigma: f64) -> Self {
        let margin = bound + 3.0 * sigma - statistic;
        Self {
            name,
            statistic,
            bound,
            sigma,
            margin,
            pass: margin >= 0.0,
        }
    }
}

/// Left-hand side of the contraction inequality at the published constants,
/// in its simplified `d > 20` form:
/// `5.88133 (2 sqrt(2.50306) (3.6e-6)^(1/4) + 3.28e-6) sqrt(21/20) + 0.167935`.
pub fn contraction_lhs() -> f64 {
    5.88133 * (2.0 * paper_tau_ratio() + ERR_GEN_TERM) * (21f64 / 20.0).sqrt() + 0.167935
}

/// The pre-simplification contraction expression, for sensitivity analysis
/// around the published constants:
/// `(0.757941 r + 3.303 sqrt(1-beta)/r + 3.28e-6) c sqrt(2 pi (d+1)/d)
///  + 2 exp(-c^2 (d-2) / (2d))` with `r` the tau-to-band ratio.
pub fn contraction_lhs_full(c: f64, d: usize, beta: f64, tau_ratio: f64) -> f64 {
    let d = d as f64;
    let in_band =
        ERR_TAU_COEFF * tau_ratio + ERR_NOISE_COEFF * (1.0 - beta).sqrt() / tau_ratio + ERR_GEN_TERM;
    in_band * c * (2.0 * PI * (d + 1.0) / d).sqrt() + 2.0 * (-c * c * (d - 2.0) / (2.0 * d)).exp()
}

/// Evaluate the contraction inequality: the simplified left-hand side must
/// equal `0.998573` within `1e-4` and stay below `1 - lambda`.
pub fn check_contraction_inequality() -> CheckOutcome {
    let lhs = contraction_lhs();
    let reference = 0.998573;
    let margin = (1e-4 - (lhs - reference).abs()).min(1.0 - PAPER_LAMBDA - lhs);
    CheckOutcome {
        name: String::from("contraction_inequality"),
        statistic: lhs,
        bound: reference,
        sigma: 0.0,
        margin,
        pass: margin >= 0.0,
    }
}

/// First-round band geometry used by the in-band checks.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoundParams {
    /// Hypothesis-ball radius.
    pub alpha: f64,
    /// Band half-width.
    pub band: f64,
    /// Margin scale.
    pub tau: f64,
    /// Labeled examples for the round's solve.
    pub labels: usize,
}

impl RoundParams {
    /// Parameters of round `k` of a schedule.
    pub fn from_schedule(schedule: &Schedule, k: usize) -> Self {
        Self {
            alpha: schedule.alpha(k),
            band: schedule.band_half_width(k),
            tau: schedule.tau(k),
            labels: schedule.labels_for_round(k),
        }
    }

    /// First-round geometry at the published constants for dimension `d`.
    pub fn paper_first_round(d: usize, c_band: f64, tau_ratio: f64, labels: usize) -> Self {
        let alpha = PAPER_INITIAL_ANGLE_SCALE * PI;
        let band = c_band * alpha / (d as f64).sqrt();
        Self {
            alpha,
            band,
            tau: tau_ratio * band,
            labels,
        }
    }
}

/// Check the bound on the target's expected hinge loss over the clean
/// distribution in the band centered on the target (the worst placement):
/// Monte-Carlo mean of `max(0, 1 - |w* . x| / tau)` against
/// `target_hinge_coeff() * tau / b`.
pub fn check_target_hinge_in_band<R: Rng + ?Sized>(
    d: usize,
    c_band: f64,
    tau_ratio: f64,
    n: u64,
    rng: &mut R,
) -> Result<CheckOutcome> {
    if n == 0 {
        return Err(Error::Domain("sample count must be positive"));
    }
    let params = RoundParams::paper_first_round(d, c_band, tau_ratio, 0);
    let target = UnitVector::axis(d, 0)?;
    let band = Band::new(target.clone(), params.band.min(1.0))?;
    let mut acc = RunningMean::default();
    for _ in 0..n {
        let (x, _) = sample_in_band(&band, rng)?;
        let clean = Label::from_sign(target.dot(x.coords()));
        acc.push(hinge(target.coords(), &x, clean, params.tau));
    }
    let est = acc.estimate();
    Ok(CheckOutcome::one_sided(
        format!("target_hinge_in_band[d={d}]"),
        est.estimate,
        target_hinge_coeff() * tau_ratio,
        est.std_err,
    ))
}

/// Check the clean-vs-noisy hinge gap in the band: the worst absolute gap
/// over `candidates` random feasible hypotheses (a sampling of the
/// for-all-w quantifier) against `noise_gap_coeff() * sqrt(1-beta) * b/tau`.
///
/// The adversary flips at the maximal rate `(1 - beta) / 2` everywhere in
/// the band; the flip probability is integrated analytically per point, so
/// the estimator has no label-draw variance.
pub fn check_noise_hinge_gap<R: Rng + ?Sized>(
    d: usize,
    beta: f64,
    c_band: f64,
    tau_ratio: f64,
    candidates: usize,
    n: u64,
    rng: &mut R,
) -> Result<CheckOutcome> {
    if n == 0 || candidates == 0 {
        return Err(Error::Domain("sample and candidate counts must be positive"));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain("beta must lie in (0, 1]"));
    }
    let params = RoundParams::paper_first_round(d, c_band, tau_ratio, 0);
    let target = UnitVector::axis(d, 0)?;
    let band = Band::new(target.clone(), params.band.min(1.0))?;
    let max_flip = (1.0 - beta) / 2.0;

    // Feasible hypotheses: uniform in the ball of radius alpha around the
    // target (the round's constraint set).
    let mut ws: Vec<Vec<f64>> = Vec::with_capacity(candidates);
    for _ in 0..candidates {
        let dir = sample_unit_sphere(d, rng)?;
        let r = params.alpha * rng.random::<f64>().powf(1.0 / d as f64);
        ws.push(
            target
                .coords()
                .iter()
                .zip(dir.coords())
                .map(|(t, u)| t + r * u)
                .collect(),
        );
    }

    let mut accs: Vec<RunningMean> = alloc::vec![RunningMean::default(); candidates];
    for _ in 0..n {
        let (x, _) = sample_in_band(&band, rng)?;
        let y = Label::from_sign(target.dot(x.coords())).signum();
        for (w, acc) in ws.iter().zip(accs.iter_mut()) {
            // Flipping the label changes the hinge by a function of the
            // signed margin alone.
            let u = y * dot(w, x.coords()) / params.tau;
            let diff = if u > 1.0 {
                1.0 + u
            } else if u < -1.0 {
                u - 1.0
            } else {
                2.0 * u
            };
            acc.push(max_flip * diff);
        }
    }
    let (statistic, sigma) = accs
        .iter()
        .map(|acc| {
            let e = acc.estimate();
            (e.estimate.abs(), e.std_err)
        })
        .fold((0.0, 0.0), |best, cur| if cur.0 > best.0 { cur } else { best });
    Ok(CheckOutcome::one_sided(
        format!("noise_hinge_gap[d={d},beta={beta}]"),
        statistic,
        noise_gap_coeff() * (1.0 - beta).sqrt() / tau_ratio,
        sigma,
    ))
}

/// Run one full round against the maximal-rate in-band adversary (band
/// sample, constrained hinge solve, normalization) and check the fitted
/// hypothesis' clean 0/1 error on the band distribution against
/// `0.757941 tau/b + 3.303 sqrt(1-beta) b/tau + 3.28e-6`.
pub fn check_round_error_in_band<R: Rng + ?Sized>(
    d: usize,
    beta: f64,
    params: &RoundParams,
    n: u64,
    solver: &SolverOptions,
    rng: &mut R,
) -> Result<CheckOutcome> {
    if n == 0 {
        return Err(Error::Domain("sample count must be positive"));
    }
    if params.labels == 0 {
        return Err(Error::EmptySample);
    }
    let target = UnitVector::axis(d, 0)?;
    let instance = MassartInstance::rcn(target.clone(), (1.0 - beta) / 2.0)?;
    let band = Band::new(target.clone(), params.band.min(1.0))?;

    let mut working = Vec::with_capacity(params.labels);
    for _ in 0..params.labels {
        let (point, _) = sample_in_band(&band, rng)?;
        let label = instance.label(&point, rng);
        working.push(LabeledExample { point, label });
    }
    let fit = minimize_hinge_in_ball(&working, params.tau, target.coords(), params.alpha, solver)?;
    let w_k = UnitVector::normalized(fit.v)?;

    let mut acc = RunningMean::default();
    for _ in 0..n {
        let (x, _) = sample_in_band(&band, rng)?;
        let disagree = Label::from_sign(w_k.dot(x.coords()))
            != Label::from_sign(target.dot(x.coords()));
        acc.push(if disagree { 1.0 } else { 0.0 });
    }
    let est = acc.estimate();
    let ratio = params.tau / params.band;
    let bound =
        ERR_TAU_COEFF * ratio + ERR_NOISE_COEFF * (1.0 - beta).sqrt() / ratio + ERR_GEN_TERM;
    Ok(CheckOutcome::one_sided(
        format!("round_error_in_band[d={d},beta={beta},m={}]", params.labels),
        est.estimate,
        bound,
        est.std_err,
    ))
}

/// Check the band-mass bracket on a grid: the exact integral must sit inside
/// its closed-form bracket for every `(d, c)` pair.
pub fn check_band_mass_bracket(dims: &[usize], c_limits: &[f64]) -> Result<Vec<CheckOutcome>> {
    let mut outcomes = Vec::with_capacity(dims.len() * c_limits.len());
    for &d in dims {
        for &c in c_limits {
            let reach = c / (d as f64).sqrt();
            let mass = band_mass_bounds(d, -reach, reach, c)?;
            let margin = (mass.exact - mass.lower).min(mass.upper - mass.exact);
            outcomes.push(CheckOutcome {
                name: format!("band_mass_bracket[d={d},c={c}]"),
                statistic: mass.exact,
                bound: mass.upper,
                sigma: 0.0,
                margin,
                pass: margin >= 0.0,
            });
        }
    }
    Ok(outcomes)
}

/// One-sided Monte-Carlo check of the disagreement tail outside the band:
/// the frequency of points where two hypotheses at angle `alpha` disagree
/// while `|u . x| > c alpha / sqrt(d)` must not exceed
/// `alpha/pi * exp(-c^2 (d-2) / (2d))` (the bound is not claimed tight).
pub fn check_disagreement_tail<R: Rng + ?Sized>(
    d: usize,
    alpha: f64,
    c: f64,
    n: u64,
    rng: &mut R,
) -> Result<CheckOutcome> {
    if n == 0 {
        return Err(Error::Domain("sample count must be positive"));
    }
    let bound = disagreement_outside_band_bound(d, alpha, c)?;
    let u = UnitVector::axis(d, 0)?;
    let v = UnitVector::planar(d, alpha)?;
    let threshold = c * alpha / (d as f64).sqrt();
    let mut acc = RunningMean::default();
    for _ in 0..n {
        let x = sample_unit_ball(d, rng)?;
        let mu = u.dot(x.coords());
        let hit = mu.abs() > threshold
            && Label::from_sign(mu) != Label::from_sign(v.dot(x.coords()));
        acc.push(if hit { 1.0 } else { 0.0 });
    }
    let est = acc.estimate();
    Ok(CheckOutcome::one_sided(
        format!("disagreement_tail[d={d},alpha={alpha},c={c}]"),
        est.estimate,
        bound,
        est.std_err,
    ))
}

/// Report of the empirical generalization check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneralizationReport {
    pub dimension: usize,
    pub sample_size: usize,
    pub probes: usize,
    pub kappa: f64,
    /// Per-trial sup deviation between empirical and population hinge loss
    /// (noisy and cleaned labels), over the probe hypotheses.
    pub sup_deviations: Vec<f64>,
    pub worst: f64,
    pub pass_fraction: f64,
    pub pass: bool,
}

/// Empirical generalization of the in-band hinge loss: for each trial, draw
/// a working set of `m` labeled band points under random classification
/// noise, and measure the sup over `probes` random feasible hypotheses of
/// the deviation between empirical and population hinge loss, with both the
/// drawn labels and the cleaned labels. Passes when at least 95% of trials
/// stay within `kappa`.
///
/// The population values are themselves estimated with an independent
/// 400k-point stream whose flip probability is integrated analytically, so
/// their noise is negligible against the default `kappa = 0.05`.
pub fn check_generalization<R: Rng + ?Sized>(
    d: usize,
    m: usize,
    probes: usize,
    trials: usize,
    kappa: f64,
    rng: &mut R,
) -> Result<GeneralizationReport> {
    if m == 0 || probes == 0 || trials == 0 {
        return Err(Error::Domain("m, probes, and trials must be positive"));
    }
    const TRUE_STREAM: u64 = 400_000;
    let eta = 0.2;
    let alpha = PI / 8.0;
    let c_band = 1.5;
    let tau_ratio = 0.5;
    let band_width = (c_band * alpha / (d as f64).sqrt()).min(1.0);
    let tau = tau_ratio * band_width;
    let target = UnitVector::axis(d, 0)?;
    let instance = MassartInstance::rcn(target.clone(), eta)?;
    let band = Band::new(target.clone(), band_width)?;

    let mut sup_deviations = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut ws: Vec<Vec<f64>> = Vec::with_capacity(probes);
        for _ in 0..probes {
            let dir = sample_unit_sphere(d, rng)?;
            let r = alpha * rng.random::<f64>().powf(1.0 / d as f64);
            ws.push(
                target
                    .coords()
                    .iter()
                    .zip(dir.coords())
                    .map(|(t, u)| t + r * u)
                    .collect(),
            );
        }

        let mut working = Vec::with_capacity(m);
        for _ in 0..m {
            let (point, _) = sample_in_band(&band, rng)?;
            let label = instance.label(&point, rng);
            working.push(LabeledExample { point, label });
        }
        let cleaned = clean_labels(&working, &target);

        let mut emp_noisy = alloc::vec![0.0; probes];
        let mut emp_clean = alloc::vec![0.0; probes];
        for (noisy_ex, clean_ex) in working.iter().zip(&cleaned) {
            for (i, w) in ws.iter().enumerate() {
                emp_noisy[i] += hinge(w, &noisy_ex.point, noisy_ex.label, tau);
                emp_clean[i] += hinge(w, &clean_ex.point, clean_ex.label, tau);
            }
        }

        let mut true_noisy = alloc::vec![0.0; probes];
        let mut true_clean = alloc::vec![0.0; probes];
        for _ in 0..TRUE_STREAM {
            let (x, _) = sample_in_band(&band, rng)?;
            let clean = Label::from_sign(target.dot(x.coords()));
            for (i, w) in ws.iter().enumerate() {
                let h_clean = hinge(w, &x, clean, tau);
                let h_flip = hinge(w, &x, clean.flipped(), tau);
                true_clean[i] += h_clean;
                true_noisy[i] += (1.0 - eta) * h_clean + eta * h_flip;
            }
        }

        let mut sup = 0.0f64;
        for i in 0..probes {
            let dev_noisy = (emp_noisy[i] / m as f64 - true_noisy[i] / TRUE_STREAM as f64).abs();
            let dev_clean = (emp_clean[i] / m as f64 - true_clean[i] / TRUE_STREAM as f64).abs();
            sup = sup.max(dev_noisy).max(dev_clean);
        }
        sup_deviations.push(sup);
    }

    let worst = sup_deviations.iter().cloned().fold(0.0, f64::max);
    let pass_fraction =
        sup_deviations.iter().filter(|&&s| s <= kappa).count() as f64 / trials as f64;
    Ok(GeneralizationReport {
        dimension: d,
        sample_size: m,
        probes,
        kappa,
        sup_deviations,
        worst,
        pass_fraction,
        pass: pass_fraction >= 0.95,
    })
}

/// The full default check suite at Monte-Carlo size `n`, on independent
/// substreams of `seed`. The grids follow the analysis: the band bracket on
/// `d in {5, 10, 25, 100} x c in {0.3, 1, 2.3463}`, the disagreement tail
/// at `(d=22, alpha=0.1216, c=2.3463)`, and the in-band checks at `d = 25`
/// with the published constants.
pub fn run_default_suite(n: u64, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut outcomes = Vec::new();
    outcomes.push(check_contraction_inequality());
    outcomes.extend(check_band_mass_bracket(
        &[5, 10, 25, 100],
        &[0.3, 1.0, PAPER_C_BAND_REF],
    )?);
    let mut rng = seeds::substream(seed, 1);
    outcomes.push(check_disagreement_tail(22, 0.1216, PAPER_C_BAND_REF, n, &mut rng)?);
    let mut rng = seeds::substream(seed, 2);
    outcomes.push(check_target_hinge_in_band(
        25,
        PAPER_C_BAND_REF,
        paper_tau_ratio(),
        n,
        &mut rng,
    )?);
    let near_one = 1.0 - crate::learn::PAPER_BETA_SLACK;
    let mut rng = seeds::substream(seed, 3);
    outcomes.push(check_noise_hinge_gap(
        25,
        near_one,
        PAPER_C_BAND_REF,
        paper_tau_ratio(),
        100,
        n / 10,
        &mut rng,
    )?);
    let mut rng = seeds::substream(seed, 4);
    outcomes.push(check_noise_hinge_gap(
        25,
        0.99,
        PAPER_C_BAND_REF,
        paper_tau_ratio(),
        100,
        n / 10,
        &mut rng,
    )?);
    let params = RoundParams::paper_first_round(25, PAPER_C_BAND_REF, paper_tau_ratio(), 4_000);
    let mut rng = seeds::substream(seed, 5);
    outcomes.push(check_round_error_in_band(
        25,
        near_one,
        &params,
        n,
        &SolverOptions::default(),
        &mut rng,
    )?);
    let mut rng = seeds::substream(seed, 6);
    outcomes.push(check_round_error_in_band(
        25,
        1.0,
        &params,
        n,
        &SolverOptions::default(),
        &mut rng,
    )?);
    Ok(outcomes)
}

const PAPER_C_BAND_REF: f64 = crate::learn::PAPER_C_BAND;
