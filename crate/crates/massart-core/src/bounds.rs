//! Closed-form analytics for the two negative results: the drift angle of
//! the averaging learner under the quadrant adversary, and the planar wedge
//! construction on which one-shot hinge minimization is inconsistent
//! (per-region hinge integrals, noise thresholds, and the loss gap between
//! the off-target direction and the target).

use core::f64::consts::PI;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{ball_point_raw, dot, BallPoint};
use crate::loss::{hinge, McEstimate, RunningMean};
use crate::noise::{region_of, Label, MassartInstance, WedgeRegion};
use crate::quad::adaptive_simpson_split;

/// Angle between the expectation of the averaging learner's output and the
/// target under the quadrant adversary: `arctan((1 - beta) / (1 + beta))`.
pub fn average_drift_angle(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain("beta must lie in (0, 1]"));
    }
    Ok(((1.0 - beta) / (1.0 + beta)).atan())
}

/// Lower bounds on the excess error the averaging learner incurs under the
/// quadrant adversary.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AverageExcessBound {
    /// `beta * arctan((1 - beta) / (1 + beta)) / pi`: the drift angle pushed
    /// through the angle-to-excess inequality. This is the exact excess here
    /// because the whole disagreement region is noisy.
    pub angle_form: f64,
    /// `beta (1 - beta) / (2 pi)`, the weaker closed form obtained from
    /// `arctan x >= x / (1 + x)`.
    pub closed_form: f64,
}

/// Both forms of the averaging lower bound. `closed_form <= angle_form`
/// for every admissible `beta`.
pub fn average_excess_lower(beta: f64) -> Result<AverageExcessBound> {
    let angle = average_drift_angle(beta)?;
    Ok(AverageExcessBound {
        angle_form: beta * angle / PI,
        closed_form: beta * (1.0 - beta) / (2.0 * PI),
    })
}

/// Expected hinge-loss contributions of the wedge construction's regions,
/// for the target direction at margin scale `tau`.
///
/// Angles are measured from the target's decision boundary, and each value
/// covers one of the region's two antipodal wedges, so the full-ball loss of
/// the target assembles as `2 (eta (flipped A + flipped B) + (1 - eta)
/// (clean A + clean B) + clean D)` with A/B/D the disagreement, near-off,
/// and near-target regions. Clean values integrate
/// `max(0, 1 - (z/tau) sin phi) z / pi` over the wedge, flipped values the
/// same with `+`; flipped integrands have no kink and use the antiderivative
/// directly, clean ones fall back to quadrature once `tau < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HingeAreas {
    pub disagree_clean: f64,
    pub disagree_flipped: f64,
    pub near_off_clean: f64,
    pub near_off_flipped: f64,
    pub near_target_clean: f64,
    pub near_target_flipped: f64,
    /// The double wedge of half-angle `alpha / 2` around the target axis; it
    /// overlaps the near-off region and carries the identities
    /// `flipped A + flipped B - flipped D = flipped axis` (same for clean).
    pub axis_clean: f64,
    pub axis_flipped: f64,
    /// Chord-capped triangle bound on `axis_clean`: exact when
    /// `tau <= cos(alpha / 2)`, a strict upper bound for larger `tau < 1`.
    pub axis_cap_clean: f64,
}

/// `integral_0^1 max(0, 1 - (z / tau) sin(phi)) z dz`, the radial hinge
/// integral at boundary angle `phi`.
fn radial_clean(phi: f64, tau: f64) -> f64 {
    let s = phi.sin();
    if s <= tau {
        0.5 - s / (3.0 * tau)
    } else {
        // The hinge hits zero at z = tau / sin(phi) inside the ball.
        let t = tau / s;
        t * t / 6.0
    }
}

fn flipped_wedge(phi1: f64, phi2: f64, tau: f64) -> f64 {
    ((phi2 - phi1) / 2.0 + (phi1.cos() - phi2.cos()) / (3.0 * tau)) / PI
}

fn clean_wedge(phi1: f64, phi2: f64, tau: f64) -> f64 {
    if tau >= 1.0 {
        return ((phi2 - phi1) / 2.0 - (phi1.cos() - phi2.cos()) / (3.0 * tau)) / PI;
    }
    // Split at the radial integral's kink angles so each piece is smooth.
    let kink = tau.asin();
    let mut points = [phi1, phi2, phi2, phi2];
    let mut n = 1;
    for k in [kink, PI - kink] {
        if phi1 < k && k < phi2 {
            points[n] = k;
            n += 1;
        }
    }
    points[n] = phi2;
    adaptive_simpson_split(|phi| radial_clean(phi, tau), &points[..=n], 1e-10) / PI
}

/// Closed-form (and, for `tau < 1`, quadrature) values of all region
/// contributions. Requires `alpha` in `(0, pi/3)` and `tau > 0`.
pub fn hinge_areas(alpha: f64, tau: f64) -> Result<HingeAreas> {
    if !(alpha > 0.0 && alpha < PI / 3.0) {
        return Err(Error::Domain("wedge angle must lie in (0, pi/3)"));
    }
    if tau <= 0.0 {
        return Err(Error::Domain("hinge scale tau must be positive"));
    }
    let mid = (PI + alpha) / 2.0;
    let near = (PI - alpha) / 2.0;
    Ok(HingeAreas {
        disagree_clean: clean_wedge(0.0, alpha, tau),
        disagree_flipped: flipped_wedge(0.0, alpha, tau),
        near_off_clean: clean_wedge(alpha, mid, tau),
        near_off_flipped: flipped_wedge(alpha, mid, tau),
        near_target_clean: clean_wedge(0.0, near, tau),
        near_target_flipped: flipped_wedge(0.0, near, tau),
        axis_clean: 2.0 * clean_wedge(near, PI / 2.0, tau),
        axis_flipped: 2.0 * flipped_wedge(near, PI / 2.0, tau),
        axis_cap_clean: tau * tau * (alpha / 2.0).tan() / (3.0 * PI),
    })
}

/// Noise threshold for margin scales `tau >= 1`: the flip probability above
/// which the off-target direction has strictly smaller expected hinge loss
/// than the target. `(1 - cos(alpha)) / (1 - cos(alpha) + 2 sin(alpha/2))`,
/// increasing in `alpha` and vanishing as `alpha -> 0`.
pub fn noise_threshold_wide(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= PI / 3.0) {
        return Err(Error::Domain("wedge angle must lie in (0, pi/3]"));
    }
    let vers = 1.0 - alpha.cos();
    Ok(vers / (vers + 2.0 * (alpha / 2.0).sin()))
}

/// Noise threshold for margin scales `tau < 1`, via the chord-capped
/// triangle bound on the axis region's clean loss:
/// `(2/3)(1 - cos a) / ((2/3)(1 - cos a) + (2/3) sin(a/2) + a tau / 2 -
/// (tau^3 / 3) tan(a/2))`. Non-increasing in `tau` on `(0, 1]`, so checking
/// it at the smallest margin scale of interest covers all larger ones.
pub fn noise_threshold_narrow(alpha: f64, tau: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < PI / 3.0) {
        return Err(Error::Domain("wedge angle must lie in (0, pi/3)"));
    }
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::Domain("narrow threshold requires tau in (0, 1]"));
    }
    let vers = 2.0 / 3.0 * (1.0 - alpha.cos());
    let denom = vers + 2.0 / 3.0 * (alpha / 2.0).sin() + alpha * tau / 2.0
        - tau.powi(3) / 3.0 * (alpha / 2.0).tan();
    if denom <= 0.0 {
        return Err(Error::Domain("threshold denominator must be positive"));
    }
    Ok(vers / denom)
}

/// Expected hinge-loss gap `L(off-target) - L(target)` on the wedge
/// distribution with flip rate `eta`:
/// `2 ((1 - eta) (flipped A - clean A) - eta (flipped axis - clean axis))`.
/// Negative exactly when `eta` exceeds the noise threshold.
pub fn hinge_gap(alpha: f64, eta: f64, tau: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&eta) {
        return Err(Error::Domain("flip rate must lie in [0, 1/2)"));
    }
    let areas = hinge_areas(alpha, tau)?;
    let disagree = areas.disagree_flipped - areas.disagree_clean;
    let axis = areas.axis_flipped - areas.axis_clean;
    Ok(2.0 * ((1.0 - eta) * disagree - eta * axis))
}

/// Closed-form report for one wedge configuration, as emitted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HingeGapReport {
    pub alpha: f64,
    pub eta: f64,
    pub tau: f64,
    pub areas: HingeAreas,
    /// Exact gap from the area values.
    pub gap: f64,
    /// Threshold applying to margin scales >= 1.
    pub threshold_wide: f64,
    /// Threshold at `min(tau, 1)`; by monotonicity it covers `[tau, 1]`.
    pub threshold_narrow: f64,
    /// True when `eta` clears the threshold for this `tau`, which proves the
    /// gap negative through the closed forms alone (for `tau < 1` the
    /// triangle cap makes this one-sided: certification implies a negative
    /// gap, not conversely).
    pub certified_negative: bool,
}

pub fn gap_report(alpha: f64, eta: f64, tau: f64) -> Result<HingeGapReport> {
    let areas = hinge_areas(alpha, tau)?;
    let gap = hinge_gap(alpha, eta, tau)?;
    let threshold_wide = noise_threshold_wide(alpha)?;
    let threshold_narrow = noise_threshold_narrow(alpha, tau.min(1.0))?;
    let certified_negative = if tau >= 1.0 {
        eta > threshold_wide
    } else {
        eta > threshold_narrow
    };
    Ok(HingeGapReport {
        alpha,
        eta,
        tau,
        areas,
        gap,
        threshold_wide,
        threshold_narrow,
        certified_negative,
    })
}

/// A wedge angle defeating hinge minimization: returns an `alpha` such that
/// both noise thresholds stay below `eta0 / 2`, so the wedge distribution
/// with flip rate `eta0` makes every margin scale `tau >= tau0` prefer the
/// off-target direction.
///
/// Bisection on `alpha` with relative tolerance `1e-6`; both thresholds
/// vanish as `alpha -> 0`, so the search always terminates with a verified
/// angle.
pub fn inconsistency_angle(tau0: f64, eta0: f64) -> Result<f64> {
    if tau0 <= 0.0 {
        return Err(Error::Domain("margin scale tau0 must be positive"));
    }
    if !(eta0 > 0.0 && eta0 < 0.5) {
        return Err(Error::Domain("noise bound eta0 must lie in (0, 1/2)"));
    }
    let passes = |alpha: f64| -> Result<bool> {
        if noise_threshold_wide(alpha)? >= eta0 / 2.0 {
            return Ok(false);
        }
        if tau0 < 1.0 && noise_threshold_narrow(alpha, tau0)? >= eta0 / 2.0 {
            return Ok(false);
        }
        Ok(true)
    };
    let mut hi = PI / 3.0 * (1.0 - 1e-12);
    if passes(hi)? {
        return Ok(hi);
    }
    let mut lo = 1e-9;
    if !passes(lo)? {
        return Err(Error::Domain("no admissible wedge angle found"));
    }
    while hi - lo > 1e-6 * lo {
        let mid = 0.5 * (lo + hi);
        if passes(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Monte-Carlo counterpart of [`hinge_areas`] plus the realized loss gap,
/// estimated by sampling the wedge distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WedgeHingeMc {
    pub alpha: f64,
    pub eta: f64,
    pub tau: f64,
    pub samples: u64,
    pub disagree_clean: McEstimate,
    pub disagree_flipped: McEstimate,
    pub near_off_clean: McEstimate,
    pub near_off_flipped: McEstimate,
    pub near_target_clean: McEstimate,
    pub near_target_flipped: McEstimate,
    pub axis_clean: McEstimate,
    pub axis_flipped: McEstimate,
    /// Expected hinge loss of the target under the drawn (noisy) labels.
    pub target_loss: McEstimate,
    /// Expected hinge loss of the off-target direction under drawn labels.
    pub off_loss: McEstimate,
    /// Paired estimate of `off_loss - target_loss`.
    pub gap: McEstimate,
}

/// Estimate every region's clean and label-flipped hinge contribution of the
/// target (per wedge, matching [`hinge_areas`]) and the realized loss gap,
/// with `n` samples of the wedge distribution.
pub fn mc_hinge_by_region<R: Rng + ?Sized>(
    alpha: f64,
    eta: f64,
    tau: f64,
    n: u64,
    rng: &mut R,
) -> Result<WedgeHingeMc> {
    if n == 0 {
        return Err(Error::Domain("sample count must be positive"));
    }
    let instance = MassartInstance::wedge(alpha, eta)?;
    let target = [1.0, 0.0];
    let off = [alpha.cos(), alpha.sin()];

    let mut clean_acc = [RunningMean::default(); 4];
    let mut flipped_acc = [RunningMean::default(); 4];
    let mut target_loss = RunningMean::default();
    let mut off_loss = RunningMean::default();
    let mut gap = RunningMean::default();
    for _ in 0..n {
        let x = BallPoint::new_unchecked(ball_point_raw(2, rng));
        let clean = Label::from_sign(dot(&target, x.coords()));
        // Halved: each region estimate covers one of its two wedges.
        let h_clean = hinge(&target, &x, clean, tau) / 2.0;
        let h_flipped = hinge(&target, &x, clean.flipped(), tau) / 2.0;
        let (region, in_axis) = region_of(alpha, &x)?;
        let slot = match region {
            WedgeRegion::Disagree => 0,
            WedgeRegion::NearOff => 1,
            WedgeRegion::NearTarget => 2,
        };
        for i in 0..4 {
            let hit = if i < 3 { i == slot } else { in_axis };
            clean_acc[i].push(if hit { h_clean } else { 0.0 });
            flipped_acc[i].push(if hit { h_flipped } else { 0.0 });
        }
        let y = instance.label(&x, rng);
        let ht = hinge(&target, &x, y, tau);
        let ho = hinge(&off, &x, y, tau);
        target_loss.push(ht);
        off_loss.push(ho);
        gap.push(ho - ht);
    }
    Ok(WedgeHingeMc {
        alpha,
        eta,
        tau,
        samples: n,
        disagree_clean: clean_acc[0].estimate(),
        disagree_flipped: flipped_acc[0].estimate(),
        near_off_clean: clean_acc[1].estimate(),
        near_off_flipped: flipped_acc[1].estimate(),
        near_target_clean: clean_acc[2].estimate(),
        near_target_flipped: flipped_acc[2].estimate(),
        axis_clean: clean_acc[3].estimate(),
        axis_flipped: flipped_acc[3].estimate(),
        target_loss: target_loss.estimate(),
        off_loss: off_loss.estimate(),
        gap: gap.estimate(),
    })
}
