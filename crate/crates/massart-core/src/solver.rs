//! Constrained empirical hinge minimization: projected subgradient descent
//! over the Euclidean ball `{ v : ||v - center|| <= radius }`, with
//! geometrically decaying normalized steps, per-stage iterate averaging, an
//! incumbent (best-so-far) rule, and seeded random restarts.

use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{dot, norm};
use crate::noise::LabeledExample;
use crate::seeds;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverOptions {
    /// Subgradient iterations per restart.
    pub max_iters: usize,
    /// Additive suboptimality target; also the stagnation threshold for the
    /// convergence flag.
    pub suboptimality: f64,
    /// Number of starts: the constraint center first, then random feasible
    /// points. The best objective wins, ties by restart index.
    pub restarts: usize,
    /// First step length as a fraction of the constraint radius.
    pub initial_step: f64,
    /// Step multiplier applied between stages.
    pub step_decay: f64,
    /// Iterations per stage; each stage also evaluates its iterate average.
    pub steps_per_stage: usize,
    /// Seed for the restart points.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iters: 6_000,
            suboptimality: 1e-6,
            restarts: 5,
            initial_step: 1.0,
            step_decay: 0.7,
            steps_per_stage: 100,
            seed: 0,
        }
    }
}

/// Result of a constrained hinge minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct HingeFit {
    /// The incumbent vector; always feasible.
    pub v: Vec<f64>,
    /// Empirical hinge loss of `v`.
    pub achieved: f64,
    /// False when the iteration budget ran out while the objective was still
    /// improving by more than the suboptimality target per stage.
    pub converged: bool,
}

/// Euclidean projection onto `{ v : ||v - center|| <= radius }`.
pub fn project_to_ball(v: &[f64], center: &[f64], radius: f64) -> Vec<f64> {
    debug_assert_eq!(v.len(), center.len());
    let diff: Vec<f64> = v.iter().zip(center).map(|(a, b)| a - b).collect();
    let dist = norm(&diff);
    if dist <= radius {
        return v.to_vec();
    }
    let scale = radius / dist;
    center
        .iter()
        .zip(&diff)
        .map(|(c, d)| c + d * scale)
        .collect()
}

/// Examples pre-scaled to `y x / tau`, so the hinge at `v` is
/// `max(0, 1 - v . p)` per row.
struct Prepared {
    rows: Vec<f64>,
    d: usize,
    m: usize,
}

impl Prepared {
    fn new(sample: &[LabeledExample], tau: f64, d: usize) -> Self {
        let mut rows = Vec::with_capacity(sample.len() * d);
        for ex in sample {
            let s = ex.label.signum() / tau;
            rows.extend(ex.point.coords().iter().map(|c| c * s));
        }
        Self {
            rows,
            d,
            m: sample.len(),
        }
    }

    /// Objective and (negated-margin) subgradient in one pass. At the hinge
    /// kink the subgradient contribution is taken as zero.
    fn eval(&self, v: &[f64], grad: &mut [f64]) -> f64 {
        grad.fill(0.0);
        let mut total = 0.0;
        for row in self.rows.chunks_exact(self.d) {
            let margin = 1.0 - dot(v, row);
            if margin > 0.0 {
                total += margin;
                for (g, r) in grad.iter_mut().zip(row) {
                    *g -= r;
                }
            }
        }
        let inv = 1.0 / self.m as f64;
        for g in grad.iter_mut() {
            *g *= inv;
        }
        total * inv
    }

    fn objective(&self, v: &[f64]) -> f64 {
        let total: f64 = self
            .rows
            .chunks_exact(self.d)
            .map(|row| (1.0 - dot(v, row)).max(0.0))
            .sum();
        total / self.m as f64
    }
}

struct RunOutcome {
    v: Vec<f64>,
    achieved: f64,
    stagnated: bool,
}

fn run_start(prep: &Prepared, start: Vec<f64>, center: &[f64], radius: f64, opts: &SolverOptions) -> RunOutcome {
    let d = prep.d;
    let mut v = project_to_ball(&start, center, radius);
    let mut grad = vec![0.0; d];
    let mut best_v = v.clone();
    let mut best_f = prep.objective(&v);
    let mut stage_sum = vec![0.0; d];
    let mut stage_n = 0usize;
    let mut best_at_stage_start = best_f;
    let mut last_stage_gain = f64::INFINITY;
    let steps_per_stage = opts.steps_per_stage.max(1);

    for it in 0..opts.max_iters {
        if best_f == 0.0 {
            break;
        }
        let stage = it / steps_per_stage;
        let step = radius * opts.initial_step * opts.step_decay.powi(stage as i32);
        let f = prep.eval(&v, &mut grad);
        if f < best_f {
            best_f = f;
            best_v.copy_from_slice(&v);
        }
        let g_norm = norm(&grad);
        if g_norm == 0.0 {
            // Zero subgradient of a convex function: global minimizer.
            break;
        }
        let scale = step / g_norm;
        for (vi, gi) in v.iter_mut().zip(&grad) {
            *vi -= scale * gi;
        }
        v = project_to_ball(&v, center, radius);
        for (s, vi) in stage_sum.iter_mut().zip(&v) {
            *s += vi;
        }
        stage_n += 1;
        if stage_n == steps_per_stage {
            // Averaged iterate of the stage; adopt if it beats the incumbent.
            let avg: Vec<f64> = stage_sum.iter().map(|s| s / stage_n as f64).collect();
            let avg = project_to_ball(&avg, center, radius);
            let f_avg = prep.objective(&avg);
            if f_avg < best_f {
                best_f = f_avg;
                best_v.copy_from_slice(&avg);
            }
            last_stage_gain = best_at_stage_start - best_f;
            best_at_stage_start = best_f;
            stage_sum.fill(0.0);
            stage_n = 0;
        }
    }
    let f = prep.objective(&v);
    if f < best_f {
        best_f = f;
        best_v = v;
    }
    RunOutcome {
        v: best_v,
        achieved: best_f,
        stagnated: best_f == 0.0 || last_stage_gain <= opts.suboptimality,
    }
}

/// Minimize the empirical `tau`-hinge loss of `sample` over the ball
/// `{ v : ||v - center|| <= radius }`.
///
/// The returned vector is feasible; `achieved` is its empirical hinge loss.
/// The minimizer is deterministic in (`sample`, options): restarts draw their
/// start points from substreams of `opts.seed` and merge by lowest objective,
/// ties broken by restart index.
pub fn minimize_hinge_in_ball(
    sample: &[LabeledExample],
    tau: f64,
    center: &[f64],
    radius: f64,
    opts: &SolverOptions,
) -> Result<HingeFit> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if tau <= 0.0 {
        return Err(Error::Domain("hinge scale tau must be positive"));
    }
    if radius <= 0.0 {
        return Err(Error::Domain("constraint radius must be positive"));
    }
    let d = center.len();
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    for ex in sample {
        if ex.point.dim() != d {
            return Err(Error::DimensionMismatch(ex.point.dim(), d));
        }
    }

    let prep = Prepared::new(sample, tau, d);
    let mut best: Option<RunOutcome> = None;
    for restart in 0..opts.restarts.max(1) {
        let start = if restart == 0 {
            center.to_vec()
        } else {
            let mut rng = seeds::substream(opts.seed, restart as u64);
            let dir = crate::geometry::sample_unit_sphere(d, &mut rng)?;
            let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
            center
                .iter()
                .zip(dir.coords())
                .map(|(c, u)| c + r * u)
                .collect()
        };
        let outcome = run_start(&prep, start, center, radius, opts);
        let better = match &best {
            None => true,
            Some(b) => outcome.achieved < b.achieved,
        };
        if better {
            let done = outcome.achieved == 0.0;
            best = Some(outcome);
            if done {
                break;
            }
        }
    }
    let best = best.expect("at least one restart");
    Ok(HingeFit {
        v: best.v,
        achieved: best.achieved,
        converged: best.stagnated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_unit_ball, BallPoint, UnitVector};
    use crate::loss::empirical_hinge;
    use crate::noise::Label;
    use crate::seeds;

    fn labeled(coords: Vec<f64>, label: Label) -> LabeledExample {
        LabeledExample {
            point: BallPoint::new(coords).unwrap(),
            label,
        }
    }

    #[test]
    fn projection_basics() {
        let center = [1.0, 0.0];
        let inside = project_to_ball(&[1.2, 0.1], &center, 0.5);
        assert_eq!(inside, vec![1.2, 0.1]);
        // A point at distance 2r projects to distance r.
        let outside = project_to_ball(&[2.0, 0.0], &center, 0.5);
        assert!((outside[0] - 1.5).abs() < 1e-15);
        let twice = project_to_ball(&outside, &center, 0.5);
        assert_eq!(outside, twice);
    }

    #[test]
    fn projection_non_expansive() {
        let mut rng = seeds::rng(20);
        let center = [0.2, -0.3, 0.5];
        for _ in 0..500 {
            let a: Vec<f64> = (0..3).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            let b: Vec<f64> = (0..3).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            let pa = project_to_ball(&a, &center, 0.7);
            let pb = project_to_ball(&b, &center, 0.7);
            let before: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
            let after: f64 = pa.iter().zip(&pb).map(|(x, y)| (x - y) * (x - y)).sum();
            assert!(after <= before + 1e-12);
        }
    }

    #[test]
    fn separable_by_center_returns_center() {
        // Margins at least tau * (1 + radius): the center already has zero
        // loss, so it is returned exactly.
        let sample = vec![
            labeled(vec![0.9, 0.0], Label::Plus),
            labeled(vec![-0.8, 0.1], Label::Minus),
            labeled(vec![0.7, -0.3], Label::Plus),
        ];
        let center = [1.0, 0.0];
        let fit =
            minimize_hinge_in_ball(&sample, 0.3, &center, 0.25, &SolverOptions::default())
                .unwrap();
        assert_eq!(fit.v, center.to_vec());
        assert_eq!(fit.achieved, 0.0);
        assert!(fit.converged);
    }

    #[test]
    fn objective_is_convex_along_segments() {
        let mut rng = seeds::rng(21);
        let sample: Vec<LabeledExample> = (0..40)
            .map(|_| {
                let point = sample_unit_ball(2, &mut rng).unwrap();
                let label = Label::from_sign(rng.random::<f64>() - 0.4);
                LabeledExample { point, label }
            })
            .collect();
        for _ in 0..200 {
            let a: Vec<f64> = (0..2).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let b: Vec<f64> = (0..2).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let fa = empirical_hinge(&a, &sample, 0.4).unwrap();
            let fb = empirical_hinge(&b, &sample, 0.4).unwrap();
            let fm = empirical_hinge(&mid, &sample, 0.4).unwrap();
            assert!(fm <= 0.5 * (fa + fb) + 1e-12);
        }
    }

    #[test]
    fn solution_is_feasible_and_deterministic() {
        let mut rng = seeds::rng(22);
        let target = UnitVector::axis(3, 0).unwrap();
        let sample: Vec<LabeledExample> = (0..60)
            .map(|_| {
                let point = sample_unit_ball(3, &mut rng).unwrap();
                let label = Label::from_sign(target.dot(point.coords()));
                let label = if rng.random::<f64>() < 0.15 { label.flipped() } else { label };
                LabeledExample { point, label }
            })
            .collect();
        let opts = SolverOptions {
            seed: 9,
            ..SolverOptions::default()
        };
        let center = [0.8, 0.6, 0.0];
        let fit1 = minimize_hinge_in_ball(&sample, 0.2, &center, 0.5, &opts).unwrap();
        let fit2 = minimize_hinge_in_ball(&sample, 0.2, &center, 0.5, &opts).unwrap();
        assert_eq!(fit1, fit2);
        let dist: f64 = fit1
            .v
            .iter()
            .zip(&center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(dist <= 0.5 + 1e-9);
        assert!(fit1.achieved <= empirical_hinge(&center, &sample, 0.2).unwrap() + 1e-12);
    }

    #[test]
    fn more_iterations_never_hurt() {
        let mut rng = seeds::rng(23);
        let sample: Vec<LabeledExample> = (0..50)
            .map(|_| {
                let point = sample_unit_ball(2, &mut rng).unwrap();
                let label = Label::from_sign(rng.random::<f64>() - 0.5);
                LabeledExample { point, label }
            })
            .collect();
        let short = SolverOptions {
            max_iters: 300,
            ..SolverOptions::default()
        };
        let long = SolverOptions::default();
        let center = [1.0, 0.0];
        let f_short = minimize_hinge_in_ball(&sample, 0.5, &center, 1.0, &short)
            .unwrap()
            .achieved;
        let f_long = minimize_hinge_in_ball(&sample, 0.5, &center, 1.0, &long)
            .unwrap()
            .achieved;
        assert!(f_long <= f_short + 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let sample = vec![labeled(vec![0.5, 0.0], Label::Plus)];
        let opts = SolverOptions::default();
        assert!(minimize_hinge_in_ball(&[], 1.0, &[1.0, 0.0], 1.0, &opts).is_err());
        assert!(minimize_hinge_in_ball(&sample, 0.0, &[1.0, 0.0], 1.0, &opts).is_err());
        assert!(minimize_hinge_in_ball(&sample, 1.0, &[1.0, 0.0], 0.0, &opts).is_err());
        assert!(minimize_hinge_in_ball(&sample, 1.0, &[1.0, 0.0, 0.0], 1.0, &opts).is_err());
    }

    #[test]
    fn beats_coarse_grid_on_small_instances() {
        // Smoke-test the solver against a coarse polar grid; the acceptance
        // suite runs the dense version.
        for seed in 0..5u64 {
            let mut rng = seeds::rng(100 + seed);
            let target = UnitVector::axis(2, 0).unwrap();
            let sample: Vec<LabeledExample> = (0..50)
                .map(|_| {
                    let point = sample_unit_ball(2, &mut rng).unwrap();
                    let mut label = Label::from_sign(target.dot(point.coords()));
                    if rng.random::<f64>() < 0.2 {
                        label = label.flipped();
                    }
                    LabeledExample { point, label }
                })
                .collect();
            let center = [0.9396926207859084, 0.3420201433256687];
            let radius = 0.6;
            let tau = 0.3;
            let opts = SolverOptions {
                seed,
                ..SolverOptions::default()
            };
            let fit = minimize_hinge_in_ball(&sample, tau, &center, radius, &opts).unwrap();
            let mut grid_best = f64::INFINITY;
            for ir in 0..=60 {
                let r = radius * ir as f64 / 60.0;
                for ia in 0..240 {
                    let a = 2.0 * core::f64::consts::PI * ia as f64 / 240.0;
                    let v = [center[0] + r * a.cos(), center[1] + r * a.sin()];
                    let f = empirical_hinge(&v, &sample, tau).unwrap();
                    if f < grid_best {
                        grid_best = f;
                    }
                }
            }
            assert!(
                fit.achieved <= grid_best + 5e-3,
                "solver {} vs grid {}",
                fit.achieved,
                grid_best
            );
        }
    }
}
