//! The learners: the margin-based active learner (band-localized hinge
//! minimization over a shrinking hypothesis ball), the averaging learner,
//! and one-shot hinge minimization over the unit ball, together with
//! schedule construction and label accounting.

use alloc::vec::Vec;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::geometry::{angle, norm, sample_unit_ball, BallPoint, UnitVector, REJECTION_CAP};
use crate::noise::{Label, LabeledExample, MassartInstance};
use crate::solver::{minimize_hinge_in_ball, HingeFit, SolverOptions};

/// Contraction rate of the guaranteed schedule.
pub const PAPER_LAMBDA: f64 = 1e-6;
/// Initial angle scale of the guaranteed schedule (`alpha_1 = scale * pi`).
pub const PAPER_INITIAL_ANGLE_SCALE: f64 = 0.038709;
/// Band-width constant of the guaranteed schedule (`b = c alpha / sqrt(d)`).
pub const PAPER_C_BAND: f64 = 2.3463;
/// Noise bound the guaranteed schedule tolerates (`beta > 1 - this`).
pub const PAPER_BETA_SLACK: f64 = 3.6e-6;

/// Margin-to-band ratio of the guaranteed schedule:
/// `sqrt(2.50306) * (3.6e-6)^(1/4)`, approximately `0.0689146`.
pub fn paper_tau_ratio() -> f64 {
    2.50306f64.sqrt() * PAPER_BETA_SLACK.powf(0.25)
}

/// Per-round labeled sample sizes.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SamplePolicy {
    /// `m_k = ceil(m_scale * d * (d + ln((k + k^2) / delta)))`, the shape the
    /// per-round union bound asks for.
    PerRound { m_scale: f64, delta: f64 },
    /// The same count every round.
    Fixed(usize),
}

/// Number of rounds needed to contract the error below `epsilon` at rate
/// `lambda`: `ceil(ln(1/epsilon) / ln(1/(1-lambda)))`.
pub fn rounds_needed(epsilon: f64, lambda: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain("epsilon must lie in (0, 1)"));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Domain("lambda must lie in (0, 1)"));
    }
    Ok(((1.0 / epsilon).ln() / (1.0 / (1.0 - lambda)).ln()).ceil() as usize)
}

/// Per-round parameters of the margin-based learner: shrinking hypothesis
/// radii `alpha_k = scale * pi * (1 - lambda)^(k-1)`, band half-widths
/// `b_{k-1} = c_band * alpha_k / sqrt(d)`, margin scales
/// `tau_k = tau_ratio * b_{k-1}`, and the labeled sample counts.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Schedule {
    d: usize,
    lambda: f64,
    initial_angle_scale: f64,
    c_band: f64,
    tau_ratio: f64,
    rounds: usize,
    samples: SamplePolicy,
}

impl Schedule {
    /// The schedule at its published constants: `lambda = 1e-6`,
    /// `alpha_1 = 0.038709 pi`, `c_band = 2.3463`, and the tau ratio of
    /// [`paper_tau_ratio`]. Its guarantee regime needs `d > 20`; at desk
    /// scale it is mainly useful for constant verification and single-round
    /// experiments (about `1e6 ln(1/epsilon)` rounds would be required
    /// end-to-end).
    pub fn paper(d: usize, epsilon: f64, delta: f64, m_scale: f64) -> Result<Self> {
        if d <= 20 {
            return Err(Error::Domain("the guaranteed schedule requires d > 20"));
        }
        Self::validated(
            d,
            PAPER_LAMBDA,
            PAPER_INITIAL_ANGLE_SCALE,
            PAPER_C_BAND,
            paper_tau_ratio(),
            epsilon,
            delta,
            m_scale,
        )
    }

    /// Desk-scale schedule of the same shape with caller-chosen constants
    /// and `alpha_1 = pi` (no initializer needed). Not covered by the formal
    /// guarantee; defaults `lambda = 0.5`, `c_band = 1.5`,
    /// `tau_ratio = 0.5`, `m_scale = 5` are the experiment settings.
    pub fn practical(
        d: usize,
        epsilon: f64,
        delta: f64,
        lambda: f64,
        c_band: f64,
        tau_ratio: f64,
        m_scale: f64,
    ) -> Result<Self> {
        Self::validated(d, lambda, 1.0, c_band, tau_ratio, epsilon, delta, m_scale)
    }

    #[allow(clippy::too_many_arguments)]
    fn validated(
        d: usize,
        lambda: f64,
        initial_angle_scale: f64,
        c_band: f64,
        tau_ratio: f64,
        epsilon: f64,
        delta: f64,
        m_scale: f64,
    ) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain("delta must lie in (0, 1)"));
        }
        if !(initial_angle_scale > 0.0 && initial_angle_scale <= 1.0) {
            return Err(Error::Domain("initial angle scale must lie in (0, 1]"));
        }
        if c_band <= 0.0 || tau_ratio <= 0.0 || m_scale <= 0.0 {
            return Err(Error::Domain("schedule constants must be positive"));
        }
        let rounds = rounds_needed(epsilon, lambda)?;
        Ok(Self {
            d,
            lambda,
            initial_angle_scale,
            c_band,
            tau_ratio,
            rounds,
            samples: SamplePolicy::PerRound { m_scale, delta },
        })
    }

    /// Replace the per-round sample policy.
    pub fn with_samples(mut self, samples: SamplePolicy) -> Self {
        self.samples = samples;
        self
    }

    /// Override the round count (e.g. for single-round experiments).
    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds;
        self
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn c_band(&self) -> f64 {
        self.c_band
    }

    pub fn tau_ratio(&self) -> f64 {
        self.tau_ratio
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Hypothesis-ball radius of round `k` (1-based).
    pub fn alpha(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        self.initial_angle_scale
            * core::f64::consts::PI
            * (1.0 - self.lambda).powi(k as i32 - 1)
    }

    /// Band half-width used to fill the working set of round `k`. May exceed
    /// 1 for small `d`; the learner clamps it to the whole ball.
    pub fn band_half_width(&self, k: usize) -> f64 {
        self.c_band * self.alpha(k) / (self.d as f64).sqrt()
    }

    /// Margin scale of round `k`.
    pub fn tau(&self, k: usize) -> f64 {
        self.tau_ratio * self.band_half_width(k)
    }

    /// Labeled examples requested in round `k`.
    pub fn labels_for_round(&self, k: usize) -> usize {
        match &self.samples {
            SamplePolicy::PerRound { m_scale, delta } => {
                let k = k as f64;
                let d = self.d as f64;
                (m_scale * d * (d + ((k + k * k) / delta).ln())).ceil() as usize
            }
            SamplePolicy::Fixed(m) => *m,
        }
    }

    /// Total labels over all rounds.
    pub fn total_labels(&self) -> u64 {
        (1..=self.rounds).map(|k| self.labels_for_round(k) as u64).sum()
    }
}

/// Sampling access to a data-generating process: unlabeled draws are free,
/// labels are queried explicitly (the active-learning accounting).
pub trait LabeledOracle {
    fn dim(&self) -> usize;
    fn draw_point(&self, rng: &mut dyn RngCore) -> BallPoint;
    fn query_label(&self, x: &BallPoint, rng: &mut dyn RngCore) -> Label;
    /// Target direction, when the oracle is willing to disclose it for
    /// reporting (angles in run reports).
    fn target(&self) -> Option<&UnitVector> {
        None
    }
}

impl LabeledOracle for MassartInstance {
    fn dim(&self) -> usize {
        self.dim()
    }

    fn draw_point(&self, rng: &mut dyn RngCore) -> BallPoint {
        sample_unit_ball(self.dim(), rng).expect("instance dimension is at least 2")
    }

    fn query_label(&self, x: &BallPoint, rng: &mut dyn RngCore) -> Label {
        self.label(x, rng)
    }

    fn target(&self) -> Option<&UnitVector> {
        Some(self.target())
    }
}

/// One round of a learning run. Label and draw counts are cumulative, so
/// they are non-decreasing across rounds.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoundRecord {
    pub round: usize,
    /// Angle of the round's hypothesis to the target, when the oracle
    /// discloses it.
    pub angle_to_target: Option<f64>,
    /// Labels queried up to and including this round.
    pub labels: u64,
    /// Unlabeled draws (accepted and rejected) up to and including this round.
    pub unlabeled: u64,
    /// Empirical hinge loss attained by the round's solve.
    pub hinge: f64,
    /// False when the solve was flagged (iteration budget exhausted while
    /// still improving, or a degenerate near-zero minimizer).
    pub converged: bool,
}

/// Full record of a margin-based learning run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunReport {
    pub final_w: UnitVector,
    pub rounds: Vec<RoundRecord>,
    pub total_labels: u64,
    pub total_unlabeled: u64,
}

impl RunReport {
    /// True when any round was flagged.
    pub fn flagged(&self) -> bool {
        self.rounds.iter().any(|r| !r.converged)
    }

    /// Final angle to the target, when it was disclosed.
    pub fn final_angle(&self) -> Option<f64> {
        self.rounds.last().and_then(|r| r.angle_to_target)
    }
}

/// Run the margin-based active learner.
///
/// Each round `k` fills a working set with `m_k` labeled examples drawn from
/// the oracle conditioned on the band `|w_{k-1} . x| < b_{k-1}` (labels are
/// queried only for accepted points), minimizes the empirical `tau_k`-hinge
/// loss over `{ v : ||v - w_{k-1}|| <= alpha_k }`, and normalizes the
/// minimizer into the next hypothesis. Band widths above 1 degenerate to
/// unconditioned draws, so a one-round schedule with `alpha >= pi` reduces
/// to one-shot hinge minimization.
///
/// The intended contract on `w0` is `angle(w0, target) <= alpha_1`; it is
/// not checkable here and initializers are responsible for it.
///
/// Determinism: one RNG stream drives the run; each round consumes its
/// band samples first and then one `u64` as the solver seed. A near-zero
/// minimizer keeps the previous hypothesis and flags the round.
pub fn margin_based_learn<R: Rng>(
    oracle: &dyn LabeledOracle,
    schedule: &Schedule,
    w0: &UnitVector,
    solver: &SolverOptions,
    rng: &mut R,
) -> Result<RunReport> {
    let d = schedule.dim();
    if oracle.dim() != d {
        return Err(Error::DimensionMismatch(oracle.dim(), d));
    }
    if w0.dim() != d {
        return Err(Error::DimensionMismatch(w0.dim(), d));
    }

    let mut w = w0.clone();
    let mut rounds = Vec::with_capacity(schedule.rounds());
    let mut labels = 0u64;
    let mut unlabeled = 0u64;
    let mut working = Vec::new();

    for k in 1..=schedule.rounds() {
        let alpha = schedule.alpha(k);
        let band = schedule.band_half_width(k).min(1.0);
        let tau = schedule.tau(k);
        let m = schedule.labels_for_round(k);

        working.clear();
        working.reserve(m);
        while working.len() < m {
            let mut attempts = 0u64;
            let point = loop {
                let x = oracle.draw_point(&mut *rng);
                unlabeled += 1;
                attempts += 1;
                if w.dot(x.coords()).abs() < band {
                    break x;
                }
                if attempts >= REJECTION_CAP {
                    return Err(Error::PathologicalBand(REJECTION_CAP));
                }
            };
            let label = oracle.query_label(&point, &mut *rng);
            labels += 1;
            working.push(LabeledExample { point, label });
        }

        let opts = SolverOptions {
            seed: rng.random::<u64>(),
            ..solver.clone()
        };
        let fit: HingeFit = minimize_hinge_in_ball(&working, tau, w.coords(), alpha, &opts)?;
        let mut converged = fit.converged;
        if norm(&fit.v) < 1e-9 {
            // Degenerate minimizer; keep the previous hypothesis.
            converged = false;
        } else {
            w = UnitVector::normalized(fit.v)?;
        }
        let angle_to_target = match oracle.target() {
            Some(t) => Some(angle(&w, t)?),
            None => None,
        };
        rounds.push(RoundRecord {
            round: k,
            angle_to_target,
            labels,
            unlabeled,
            hinge: fit.achieved,
            converged,
        });
    }

    Ok(RunReport {
        final_w: w,
        rounds,
        total_labels: labels,
        total_unlabeled: unlabeled,
    })
}

/// The averaging learner: the (unnormalized) mean of `y x` over the sample.
pub fn average_learner(sample: &[LabeledExample]) -> Result<Vec<f64>> {
    let first = sample.first().ok_or(Error::EmptySample)?;
    let d = first.point.dim();
    let mut mean = alloc::vec![0.0; d];
    for ex in sample {
        if ex.point.dim() != d {
            return Err(Error::DimensionMismatch(ex.point.dim(), d));
        }
        let y = ex.label.signum();
        for (m, c) in mean.iter_mut().zip(ex.point.coords()) {
            *m += y * c;
        }
    }
    for m in mean.iter_mut() {
        *m /= sample.len() as f64;
    }
    Ok(mean)
}

/// Normalized averaging learner over `m` fresh labeled draws; a pluggable
/// stand-in for an initialization routine (under symmetric or near-symmetric
/// noise its drift stays within the first hypothesis ball).
pub fn average_initializer<R: Rng>(
    oracle: &dyn LabeledOracle,
    m: usize,
    rng: &mut R,
) -> Result<UnitVector> {
    if m == 0 {
        return Err(Error::EmptySample);
    }
    let sample: Vec<LabeledExample> = (0..m)
        .map(|_| {
            let point = oracle.draw_point(&mut *rng);
            let label = oracle.query_label(&point, &mut *rng);
            LabeledExample { point, label }
        })
        .collect();
    UnitVector::normalized(average_learner(&sample)?)
}

/// Result of one-shot hinge minimization over the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct OneShotFit {
    /// The raw (not normalized) minimizer.
    pub minimizer: Vec<f64>,
    /// Normalized direction; `None` when the minimizer is (numerically) the
    /// zero vector.
    pub direction: Option<UnitVector>,
    pub achieved: f64,
    pub converged: bool,
}

/// Minimize the empirical `tau`-hinge loss over the whole unit ball
/// (centered at the origin) and normalize the minimizer.
pub fn one_shot_hinge(
    sample: &[LabeledExample],
    tau: f64,
    opts: &SolverOptions,
) -> Result<OneShotFit> {
    let first = sample.first().ok_or(Error::EmptySample)?;
    let d = first.point.dim();
    let origin = alloc::vec![0.0; d];
    let fit = minimize_hinge_in_ball(sample, tau, &origin, 1.0, opts)?;
    let direction = if norm(&fit.v) < 1e-9 {
        None
    } else {
        Some(UnitVector::normalized(fit.v.clone())?)
    };
    Ok(OneShotFit {
        minimizer: fit.v,
        direction,
        achieved: fit.achieved,
        converged: fit.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds;
    use alloc::vec;
    use core::f64::consts::PI;

    #[test]
    fn paper_schedule_constants() {
        let s = Schedule::paper(25, 0.5, 0.1, 5.0).unwrap();
        assert!((s.tau_ratio() - 0.068914602458671).abs() < 1e-14);
        assert!((s.alpha(2) / s.alpha(1) - (1.0 - 1e-6)).abs() < 1e-12);
        assert_eq!(s.rounds(), 693_147);
        assert!((s.alpha(1) - 0.038709 * PI).abs() < 1e-12);
        // b ~ 1/sqrt(d) at fixed round.
        let s49 = Schedule::paper(100, 0.5, 0.1, 5.0).unwrap();
        let ratio = s.band_half_width(1) / s49.band_half_width(1);
        assert!((ratio - (100f64 / 25.0).sqrt()).abs() < 1e-12);
        assert!(Schedule::paper(20, 0.5, 0.1, 5.0).is_err());
    }

    #[test]
    fn practical_schedule_shape() {
        let s = Schedule::practical(5, 2f64.powi(-10), 0.1, 0.5, 1.5, 0.5, 5.0).unwrap();
        assert_eq!(s.rounds(), 10);
        assert!((s.alpha(1) - PI).abs() < 1e-15);
        for k in 1..10 {
            assert!((s.alpha(k + 1) / s.alpha(k) - 0.5).abs() < 1e-12);
        }
        assert!((s.tau(3) - 0.5 * s.band_half_width(3)).abs() < 1e-15);
    }

    #[test]
    fn sample_policy_counts() {
        let s = Schedule::practical(5, 0.05, 0.1, 0.5, 1.5, 0.5, 5.0).unwrap();
        for k in 1..=s.rounds() {
            let k_f = k as f64;
            let expected =
                (5.0 * 5.0 * (5.0 + ((k_f + k_f * k_f) / 0.1).ln())).ceil() as usize;
            assert_eq!(s.labels_for_round(k), expected);
        }
        let fixed = s.clone().with_samples(SamplePolicy::Fixed(77));
        assert_eq!(fixed.labels_for_round(3), 77);
        assert_eq!(fixed.total_labels(), 77 * fixed.rounds() as u64);
    }

    #[test]
    fn rounds_needed_values() {
        assert_eq!(rounds_needed(0.5, 1e-6).unwrap(), 693_147);
        assert_eq!(rounds_needed(2f64.powi(-10), 0.5).unwrap(), 10);
        assert!(rounds_needed(1.0, 0.5).is_err());
        assert!(rounds_needed(0.5, 0.0).is_err());
    }

    #[test]
    fn average_learner_values() {
        let e1 = LabeledExample {
            point: BallPoint::new(vec![1.0, 0.0]).unwrap(),
            label: Label::Plus,
        };
        let neg = LabeledExample {
            point: BallPoint::new(vec![-1.0, 0.0]).unwrap(),
            label: Label::Minus,
        };
        assert_eq!(average_learner(&[e1.clone()]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(average_learner(&[e1, neg]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(average_learner(&[]), Err(Error::EmptySample));
    }

    #[test]
    fn average_initializer_noiseless_accuracy() {
        let mut rng = seeds::rng(40);
        let target = UnitVector::normalized(vec![0.6, -0.8]).unwrap();
        let inst = MassartInstance::noiseless(target.clone());
        let w0 = average_initializer(&inst, 20_000, &mut rng).unwrap();
        assert!(angle(&w0, &target).unwrap() < 0.05);
    }

    #[test]
    fn average_initializer_rcn_stays_aligned() {
        let mut rng = seeds::rng(41);
        let target = UnitVector::axis(2, 0).unwrap();
        let inst = MassartInstance::rcn(target.clone(), 0.1).unwrap();
        let w0 = average_initializer(&inst, 100_000, &mut rng).unwrap();
        assert!(angle(&w0, &target).unwrap() < 0.1);
    }

    #[test]
    fn margin_learner_is_deterministic_and_accounts_labels() {
        let target = UnitVector::axis(3, 0).unwrap();
        let inst = MassartInstance::rcn(target, 0.1).unwrap();
        let schedule = Schedule::practical(3, 0.2, 0.2, 0.5, 1.5, 0.5, 2.0).unwrap();
        let w0 = UnitVector::axis(3, 1).unwrap();
        let run = |seed: u64| {
            let mut rng = seeds::rng(seed);
            margin_based_learn(&inst, &schedule, &w0, &SolverOptions::default(), &mut rng)
                .unwrap()
        };
        let a = run(5);
        let b = run(5);
        assert_eq!(a, b);
        let c = run(6);
        assert_ne!(a.final_w, c.final_w);

        let expected: u64 = (1..=schedule.rounds())
            .map(|k| schedule.labels_for_round(k) as u64)
            .sum();
        assert_eq!(a.total_labels, expected);
        // Cumulative counters are non-decreasing and end at the totals.
        let mut prev = (0u64, 0u64);
        for r in &a.rounds {
            assert!(r.labels >= prev.0 && r.unlabeled >= prev.1);
            prev = (r.labels, r.unlabeled);
            let angle = r.angle_to_target.unwrap();
            assert!((0.0..=PI).contains(&angle));
        }
        assert_eq!(prev.0, a.total_labels);
        assert_eq!(prev.1, a.total_unlabeled);
        assert!(a.total_unlabeled >= a.total_labels);
    }

    #[test]
    fn margin_learner_converges_noiseless_smoke() {
        let target = UnitVector::normalized(vec![0.5, 0.5, -0.70710678]).unwrap();
        let inst = MassartInstance::noiseless(target.clone());
        let schedule = Schedule::practical(3, 0.1, 0.1, 0.5, 1.5, 0.5, 5.0).unwrap();
        let w0 = UnitVector::axis(3, 2).unwrap();
        let mut rng = seeds::rng(42);
        let report =
            margin_based_learn(&inst, &schedule, &w0, &SolverOptions::default(), &mut rng)
                .unwrap();
        assert!(report.final_angle().unwrap() <= PI * 0.1);
        assert!(!report.flagged());
    }

    /// Noiseless oracle whose marginal avoids a margin strip around the
    /// target's boundary, so zero hinge loss is attainable.
    struct MarginOracle {
        inst: MassartInstance,
        margin: f64,
    }

    impl LabeledOracle for MarginOracle {
        fn dim(&self) -> usize {
            self.inst.dim()
        }

        fn draw_point(&self, rng: &mut dyn RngCore) -> BallPoint {
            loop {
                let x = self.inst.draw_point(rng);
                if self.inst.target().dot(x.coords()).abs() >= self.margin {
                    return x;
                }
            }
        }

        fn query_label(&self, x: &BallPoint, rng: &mut dyn RngCore) -> Label {
            self.inst.query_label(x, rng)
        }

        fn target(&self) -> Option<&UnitVector> {
            Some(self.inst.target())
        }
    }

    #[test]
    fn degenerate_single_round_matches_one_shot() {
        // One round, band covering the whole ball, hypothesis radius >= pi:
        // the round degenerates to one-shot hinge minimization, up to the
        // round's larger feasible set (radius pi around w0 instead of the
        // unit ball). On a 0.25-margin sample with tau = 0.15 both reach
        // zero loss; any zero-loss direction separates the sample with
        // positive margin, which confines both outputs to the version-space
        // cone of half-angle arcsin(0.25) around the target.
        let margin = 0.25;
        let target = UnitVector::axis(2, 0).unwrap();
        let oracle = MarginOracle {
            inst: MassartInstance::noiseless(target.clone()),
            margin,
        };
        let tau_ratio = 0.15 * 2f64.sqrt() / PI;
        let schedule = Schedule::practical(2, 0.6, 0.1, 0.5, 1.0, tau_ratio, 8.0)
            .unwrap()
            .with_samples(SamplePolicy::Fixed(200));
        assert_eq!(schedule.rounds(), 1);
        assert!(schedule.band_half_width(1) > 1.0);
        assert!(schedule.alpha(1) >= PI);
        let tau = schedule.tau(1);
        assert!((tau - 0.15).abs() < 1e-12);

        let w0 = UnitVector::axis(2, 1).unwrap();
        let opts = SolverOptions::default();
        let mut rng = seeds::rng(43);
        let report = margin_based_learn(&oracle, &schedule, &w0, &opts, &mut rng).unwrap();

        // Rebuild the identical working set: same seed, same draw order.
        let mut rng = seeds::rng(43);
        let sample: Vec<LabeledExample> = (0..200)
            .map(|_| {
                let point = oracle.draw_point(&mut rng);
                let label = oracle.query_label(&point, &mut rng);
                LabeledExample { point, label }
            })
            .collect();
        let one_shot = one_shot_hinge(&sample, tau, &opts).unwrap();

        assert!(report.rounds[0].hinge <= one_shot.achieved + 2.0 * opts.suboptimality + 1e-9);
        assert!(report.rounds[0].hinge <= 1e-6);
        assert!(one_shot.achieved <= 1e-6);
        let cone = margin.asin() + 0.02;
        let dir = one_shot.direction.unwrap();
        assert!(angle(&report.final_w, &target).unwrap() < cone);
        assert!(angle(&dir, &target).unwrap() < cone);
        assert!(angle(&report.final_w, &dir).unwrap() < 2.0 * cone);
    }

    #[test]
    fn one_shot_separates_margin_sample() {
        let mut rng = seeds::rng(44);
        let target = UnitVector::axis(3, 0).unwrap();
        let oracle = MarginOracle {
            inst: MassartInstance::noiseless(target.clone()),
            margin: 0.25,
        };
        let sample: Vec<LabeledExample> = (0..150)
            .map(|_| {
                let point = oracle.draw_point(&mut rng);
                let label = oracle.query_label(&point, &mut rng);
                LabeledExample { point, label }
            })
            .collect();
        let fit = one_shot_hinge(&sample, 0.2, &SolverOptions::default()).unwrap();
        // Margins exceed tau, so the loss reaches zero and the direction
        // classifies every point correctly.
        assert!(fit.achieved <= 1e-6);
        let dir = fit.direction.unwrap();
        assert_eq!(
            crate::loss::empirical_01(dir.coords(), &sample).unwrap(),
            0.0
        );
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let inst = MassartInstance::rcn(UnitVector::axis(3, 0).unwrap(), 0.1).unwrap();
        let schedule = Schedule::practical(4, 0.2, 0.2, 0.5, 1.5, 0.5, 2.0).unwrap();
        let w0 = UnitVector::axis(4, 0).unwrap();
        let mut rng = seeds::rng(45);
        assert!(matches!(
            margin_based_learn(&inst, &schedule, &w0, &SolverOptions::default(), &mut rng),
            Err(Error::DimensionMismatch(3, 4))
        ));
    }
}
