//! Normalized hinge loss, empirical 0/1 error, and the angle-based and
//! Monte-Carlo excess-error measures for the uniform-ball marginal.

use core::f64::consts::PI;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{angle, ball_point_raw, dot, BallPoint, UnitVector};
use crate::noise::{Label, LabeledExample, MassartInstance};

/// Margin-normalized hinge loss `max(0, 1 - y (w . x) / tau)`.
///
/// `w` need not be unit length; the constrained minimization searches over
/// non-normalized vectors. Requires `tau > 0`.
pub fn hinge(w: &[f64], x: &BallPoint, y: Label, tau: f64) -> f64 {
    debug_assert!(tau > 0.0);
    (1.0 - y.signum() * dot(w, x.coords()) / tau).max(0.0)
}

/// Mean hinge loss over a nonempty sample.
pub fn empirical_hinge(w: &[f64], sample: &[LabeledExample], tau: f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if tau <= 0.0 {
        return Err(Error::Domain("hinge scale tau must be positive"));
    }
    let total: f64 = sample.iter().map(|ex| hinge(w, &ex.point, ex.label, tau)).sum();
    Ok(total / sample.len() as f64)
}

/// Fraction of a nonempty sample misclassified by `sign(w . x)`, with
/// `sign(0) = +1`.
pub fn empirical_01(w: &[f64], sample: &[LabeledExample]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let wrong = sample
        .iter()
        .filter(|ex| Label::from_sign(dot(w, ex.point.coords())) != ex.label)
        .count();
    Ok(wrong as f64 / sample.len() as f64)
}

/// Error of `w` against the target's clean labels under the uniform-ball
/// marginal: `angle(w, target) / pi`.
pub fn true_error_uniform(w: &UnitVector, target: &UnitVector) -> Result<f64> {
    Ok(angle(w, target)? / PI)
}

/// A Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McEstimate {
    pub estimate: f64,
    pub std_err: f64,
}

/// Streaming mean/standard-error accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct RunningMean {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl RunningMean {
    pub fn push(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub fn estimate(&self) -> McEstimate {
        let n = self.n.max(1) as f64;
        let mean = self.sum / n;
        let var = (self.sum_sq / n - mean * mean).max(0.0);
        McEstimate {
            estimate: mean,
            std_err: (var / n).sqrt(),
        }
    }
}

/// Monte-Carlo estimate of the excess error of `w` over the instance's
/// target.
///
/// Uses the identity that under bounded noise the excess error equals the
/// disagreement mass weighted by `1 - 2 flip(x)`, so the flip probability is
/// integrated analytically instead of differencing two noisy error
/// estimates; for `w = target` the estimate is exactly zero.
pub fn excess_error_mc<R: Rng + ?Sized>(
    w: &UnitVector,
    instance: &MassartInstance,
    n: u64,
    rng: &mut R,
) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::Domain("sample count must be positive"));
    }
    let d = instance.dim();
    if w.dim() != d {
        return Err(Error::DimensionMismatch(w.dim(), d));
    }
    let target = instance.target();
    let mut acc = RunningMean::default();
    for _ in 0..n {
        let coords = ball_point_raw(d, rng);
        let disagree = Label::from_sign(dot(w.coords(), &coords))
            != Label::from_sign(dot(target.coords(), &coords));
        let v = if disagree {
            let x = BallPoint::new_unchecked(coords);
            1.0 - 2.0 * instance.flip_prob(&x)
        } else {
            0.0
        };
        acc.push(v);
    }
    Ok(acc.estimate())
}
