//! Bounded-noise label oracles: the general interface plus the specific
//! adversaries used by the experiments (random classification noise, the
//! quadrant construction that defeats averaging, and the planar wedge
//! distribution on which one-shot hinge minimization is inconsistent).

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{BallPoint, UnitVector};

/// A binary label. The convention `sign(0) = +1` is applied everywhere a
/// label is derived from a margin, so oracles, losses, and learners agree on
/// the measure-zero boundary set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Label {
    Minus,
    Plus,
}

impl Label {
    /// Label of the halfspace margin `v`, with `sign(0) = +1`.
    pub fn from_sign(v: f64) -> Self {
        if v >= 0.0 {
            Label::Plus
        } else {
            Label::Minus
        }
    }

    pub fn signum(self) -> f64 {
        match self {
            Label::Plus => 1.0,
            Label::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::Plus => Label::Minus,
            Label::Minus => Label::Plus,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Plus => write!(f, "+1"),
            Label::Minus => write!(f, "-1"),
        }
    }
}

/// A point of the unit ball together with its (possibly noisy) label.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LabeledExample {
    pub point: BallPoint,
    pub label: Label,
}

/// Per-point flip probability of an instance.
enum FlipRule {
    /// Random classification noise: every point flips with the same rate.
    Constant(f64),
    /// Flip at `rate` exactly where `x1 * x2 < 0`, else keep the label.
    Quadrant { rate: f64 },
    /// Planar wedge construction: labels are deterministic on the agreement
    /// wedges nearer the target's boundary and flip at `rate` everywhere
    /// else. `alpha` is the angle of the off-target hypothesis.
    Wedge { alpha: f64, rate: f64 },
    /// Arbitrary user-supplied rule; the bound `rate <= (1 - beta) / 2` is
    /// enforced by sampling via [`MassartInstance::validate_flip_bound`].
    Custom(Box<dyn Fn(&BallPoint) -> f64 + Send + Sync>),
}

impl fmt::Debug for FlipRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlipRule::Constant(r) => write!(f, "Constant({r})"),
            FlipRule::Quadrant { rate } => write!(f, "Quadrant {{ rate: {rate} }}"),
            FlipRule::Wedge { alpha, rate } => {
                write!(f, "Wedge {{ alpha: {alpha}, rate: {rate} }}")
            }
            FlipRule::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// A complete data-generating process: target halfspace `w*`, noise bound
/// `beta`, and a flip-probability rule with `flip(x) <= (1 - beta) / 2`.
///
/// Labels are `sign(w* . x)` flipped independently with probability
/// `flip(x)`, so the conditional label probabilities always separate by at
/// least `beta` and `w*` stays Bayes optimal.
#[derive(Debug)]
pub struct MassartInstance {
    target: UnitVector,
    beta: f64,
    flip: FlipRule,
}

impl MassartInstance {
    /// Random classification noise: flip every label with probability `eta`.
    pub fn rcn(target: UnitVector, eta: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&eta) {
            return Err(Error::Domain("rcn rate must lie in [0, 1/2)"));
        }
        Ok(Self {
            target,
            beta: 1.0 - 2.0 * eta,
            flip: FlipRule::Constant(eta),
        })
    }

    /// The noise-free instance (`beta = 1`).
    pub fn noiseless(target: UnitVector) -> Self {
        Self {
            target,
            beta: 1.0,
            flip: FlipRule::Constant(0.0),
        }
    }

    /// Planar adversary for the averaging learner: target `e1`, flips at the
    /// maximal rate `(1 - beta) / 2` exactly on the two quadrants where
    /// `x1 * x2 < 0`.
    pub fn quadrant(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::Domain("quadrant adversary requires beta in (0, 1]"));
        }
        Ok(Self {
            target: UnitVector::axis(2, 0).expect("d=2 axis"),
            beta,
            flip: FlipRule::Quadrant {
                rate: (1.0 - beta) / 2.0,
            },
        })
    }

    /// Planar wedge distribution: target `e1`, off-target hypothesis at polar
    /// angle `alpha` (counter-clockwise). Labels are deterministic on the
    /// agreement wedges nearer the target's boundary and flip with
    /// probability `eta` everywhere else.
    pub fn wedge(alpha: f64, eta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < PI / 3.0) {
            return Err(Error::Domain("wedge angle must lie in (0, pi/3)"));
        }
        if !(0.0..0.5).contains(&eta) {
            return Err(Error::Domain("wedge rate must lie in [0, 1/2)"));
        }
        Ok(Self {
            target: UnitVector::axis(2, 0).expect("d=2 axis"),
            beta: 1.0 - 2.0 * eta,
            flip: FlipRule::Wedge { alpha, rate: eta },
        })
    }

    /// Custom flip rule. The caller asserts `flip(x) <= (1 - beta) / 2`;
    /// check it with [`MassartInstance::validate_flip_bound`].
    pub fn custom<F>(target: UnitVector, beta: f64, flip: F) -> Result<Self>
    where
        F: Fn(&BallPoint) -> f64 + Send + Sync + 'static,
    {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::Domain("noise bound beta must lie in (0, 1]"));
        }
        Ok(Self {
            target,
            beta,
            flip: FlipRule::Custom(Box::new(flip)),
        })
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    pub fn target(&self) -> &UnitVector {
        &self.target
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Maximal flip probability `(1 - beta) / 2`.
    pub fn max_flip(&self) -> f64 {
        (1.0 - self.beta) / 2.0
    }

    /// Flip probability at `x`.
    pub fn flip_prob(&self, x: &BallPoint) -> f64 {
        match &self.flip {
            FlipRule::Constant(r) => *r,
            FlipRule::Quadrant { rate } => {
                let c = x.coords();
                if c[0] * c[1] < 0.0 {
                    *rate
                } else {
                    0.0
                }
            }
            FlipRule::Wedge { alpha, rate } => {
                if wedge_is_deterministic(*alpha, x) {
                    0.0
                } else {
                    *rate
                }
            }
            FlipRule::Custom(f) => f(x),
        }
    }

    /// The noise-free label `sign(w* . x)`.
    pub fn clean_label(&self, x: &BallPoint) -> Label {
        Label::from_sign(self.target.dot(x.coords()))
    }

    /// Draw a label: the clean label, flipped with probability `flip_prob(x)`.
    pub fn label<R: Rng + ?Sized>(&self, x: &BallPoint, rng: &mut R) -> Label {
        let clean = self.clean_label(x);
        let p = self.flip_prob(x);
        if p > 0.0 && rng.random::<f64>() < p {
            clean.flipped()
        } else {
            clean
        }
    }

    /// Spot-check `flip(x) <= (1 - beta) / 2` on `n` uniform ball points.
    pub fn validate_flip_bound<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<()> {
        let bound = self.max_flip() + 1e-12;
        for _ in 0..n {
            let x = crate::geometry::sample_unit_ball(self.dim(), rng)?;
            let p = self.flip_prob(&x);
            if !(0.0..=bound).contains(&p) {
                return Err(Error::Domain(
                    "flip probability exceeds (1 - beta) / 2 on a sampled point",
                ));
            }
        }
        Ok(())
    }
}

/// Replace every label by the target's clean label `sign(w* . x)`.
pub fn clean_labels(sample: &[LabeledExample], target: &UnitVector) -> Vec<LabeledExample> {
    sample
        .iter()
        .map(|ex| LabeledExample {
            point: ex.point.clone(),
            label: Label::from_sign(target.dot(ex.point.coords())),
        })
        .collect()
}

/// Wedge-construction region of a planar point, for target `e1` and the
/// off-target hypothesis at polar angle `alpha` counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum WedgeRegion {
    /// The two wedges where the target and off-target hypotheses disagree
    /// (adjacent to both decision boundaries).
    Disagree,
    /// Agreement points nearer the off-target boundary; labels are noisy here.
    NearOff,
    /// Agreement points nearer the target boundary; labels are deterministic
    /// here.
    NearTarget,
}

fn polar_angle(x: &BallPoint) -> Result<f64> {
    let c = x.coords();
    if c[0] == 0.0 && c[1] == 0.0 {
        return Err(Error::AmbiguousRegion);
    }
    let mut phi = c[1].atan2(c[0]);
    if phi < 0.0 {
        phi += 2.0 * PI;
    }
    Ok(phi)
}

fn wedge_is_deterministic(alpha: f64, x: &BallPoint) -> bool {
    match polar_angle(x) {
        // Orientation fixed counter-clockwise: deterministic labels on polar
        // angles (alpha/2, pi/2) and (pi + alpha/2, 3 pi/2) from the target.
        Ok(phi) => {
            (alpha / 2.0..PI / 2.0).contains(&phi)
                || (PI + alpha / 2.0..1.5 * PI).contains(&phi)
        }
        // The origin has measure zero; treat it as noisy.
        Err(_) => false,
    }
}

/// Classify a planar point into the wedge-construction partition, plus a flag
/// for the double wedge of half-angle `alpha/2` around the target axis (the
/// region whose hinge mass the threshold identities are expressed with; it
/// overlaps [`WedgeRegion::NearOff`] rather than forming a fourth cell).
///
/// Requires `d = 2` and `alpha` in `(0, pi/3)`; the origin is rejected.
pub fn region_of(alpha: f64, x: &BallPoint) -> Result<(WedgeRegion, bool)> {
    if x.dim() != 2 {
        return Err(Error::DimensionMismatch(x.dim(), 2));
    }
    if !(alpha > 0.0 && alpha < PI / 3.0) {
        return Err(Error::Domain("wedge angle must lie in (0, pi/3)"));
    }
    let phi = polar_angle(x)?;
    let half = PI / 2.0;
    let region = if (half..half + alpha).contains(&phi) || (1.5 * PI..1.5 * PI + alpha).contains(&phi)
    {
        WedgeRegion::Disagree
    } else if (alpha / 2.0..half).contains(&phi) || (PI + alpha / 2.0..1.5 * PI).contains(&phi) {
        WedgeRegion::NearTarget
    } else {
        WedgeRegion::NearOff
    };
    // Angular distance to the target axis (polar angle 0 or pi).
    let axis_dist = (phi.min(2.0 * PI - phi)).min((phi - PI).abs());
    Ok((region, axis_dist <= alpha / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_unit_ball;
    use crate::seeds;
    use alloc::vec;

    fn planar_point(phi: f64, r: f64) -> BallPoint {
        BallPoint::new(vec![r * phi.cos(), r * phi.sin()]).unwrap()
    }

    #[test]
    fn sign_zero_is_plus() {
        assert_eq!(Label::from_sign(0.0), Label::Plus);
        assert_eq!(Label::from_sign(-0.0), Label::Plus);
        assert_eq!(Label::from_sign(-1e-300), Label::Minus);
    }

    #[test]
    fn rcn_beta_relation() {
        let e1 = UnitVector::axis(2, 0).unwrap();
        assert_eq!(MassartInstance::rcn(e1.clone(), 0.0).unwrap().beta(), 1.0);
        assert_eq!(MassartInstance::rcn(e1.clone(), 0.25).unwrap().beta(), 0.5);
        let nearly = MassartInstance::rcn(e1.clone(), 0.4999).unwrap();
        assert!((nearly.beta() - 0.0002).abs() < 1e-12);
        assert!(MassartInstance::rcn(e1, 0.5).is_err());
    }

    #[test]
    fn noiseless_labels_are_clean() {
        let mut rng = seeds::rng(3);
        let inst = MassartInstance::noiseless(UnitVector::axis(3, 0).unwrap());
        for _ in 0..200 {
            let x = sample_unit_ball(3, &mut rng).unwrap();
            assert_eq!(inst.label(&x, &mut rng), inst.clean_label(&x));
        }
    }

    #[test]
    fn quadrant_flip_probabilities() {
        let inst = MassartInstance::quadrant(0.5).unwrap();
        let noisy = BallPoint::new(vec![0.5, -0.5]).unwrap();
        let quiet = BallPoint::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(inst.flip_prob(&noisy), 0.25);
        assert_eq!(inst.flip_prob(&quiet), 0.0);
        assert!(MassartInstance::quadrant(0.0).is_err());
        assert!(MassartInstance::quadrant(1.5).is_err());
        // beta = 1 is noiseless.
        let clean = MassartInstance::quadrant(1.0).unwrap();
        assert_eq!(clean.flip_prob(&noisy), 0.0);
    }

    #[test]
    fn quadrant_labels_deterministic_on_agreement_quadrants() {
        let mut rng = seeds::rng(4);
        let inst = MassartInstance::quadrant(0.5).unwrap();
        for _ in 0..300 {
            let x = sample_unit_ball(2, &mut rng).unwrap();
            if x.coords()[0] * x.coords()[1] > 0.0 {
                assert_eq!(inst.label(&x, &mut rng), inst.clean_label(&x));
            }
        }
    }

    #[test]
    fn wedge_flip_probabilities() {
        let alpha = PI / 6.0;
        let inst = MassartInstance::wedge(alpha, 0.1).unwrap();
        // Deterministic on the agreement wedge nearer the target boundary.
        assert_eq!(inst.flip_prob(&planar_point(PI / 4.0, 0.5)), 0.0);
        // Noisy near the target axis.
        assert_eq!(inst.flip_prob(&planar_point(PI / 24.0, 0.5)), 0.1);
        // Noisy on the disagreement wedge.
        assert_eq!(inst.flip_prob(&planar_point(PI / 2.0 + alpha / 2.0, 0.5)), 0.1);
        // eta = 0 is noiseless everywhere regardless of alpha.
        let clean = MassartInstance::wedge(alpha, 0.0).unwrap();
        assert_eq!(clean.flip_prob(&planar_point(PI / 24.0, 0.5)), 0.0);
        assert!(MassartInstance::wedge(PI / 2.0, 0.1).is_err());
        assert!(MassartInstance::wedge(alpha, 0.5).is_err());
    }

    #[test]
    fn regions_match_construction_geometry() {
        let alpha = PI / 6.0;
        // Agreement wedge nearer the target boundary.
        assert_eq!(
            region_of(alpha, &planar_point(PI / 4.0, 0.5)).unwrap(),
            (WedgeRegion::NearTarget, false)
        );
        // Near the target axis: agreement nearer the off-target boundary and
        // inside the axis wedge.
        assert_eq!(
            region_of(alpha, &planar_point(PI / 24.0, 0.5)).unwrap(),
            (WedgeRegion::NearOff, true)
        );
        // Disagreement wedge, just past the target boundary.
        assert_eq!(
            region_of(alpha, &planar_point(PI / 2.0 + PI / 24.0, 0.5)).unwrap(),
            (WedgeRegion::Disagree, false)
        );
        // Mirror image below the axis.
        assert_eq!(
            region_of(alpha, &planar_point(1.5 * PI + PI / 24.0, 0.5)).unwrap(),
            (WedgeRegion::Disagree, false)
        );
        // Around the negative target axis.
        assert_eq!(
            region_of(alpha, &planar_point(PI + PI / 24.0, 0.5)).unwrap(),
            (WedgeRegion::NearOff, true)
        );
        let origin = BallPoint::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(region_of(alpha, &origin), Err(Error::AmbiguousRegion));
    }

    #[test]
    fn regions_partition_and_flip_rule_agrees() {
        // The noisy set is exactly the complement of NearTarget, and the
        // axis wedge sits inside NearOff for every admissible alpha.
        let mut rng = seeds::rng(5);
        for &alpha in &[0.05, PI / 6.0, PI / 3.0 - 1e-3] {
            let inst = MassartInstance::wedge(alpha, 0.3).unwrap();
            for _ in 0..2_000 {
                let x = sample_unit_ball(2, &mut rng).unwrap();
                let (region, in_axis_wedge) = region_of(alpha, &x).unwrap();
                let expected = if region == WedgeRegion::NearTarget {
                    0.0
                } else {
                    0.3
                };
                assert_eq!(inst.flip_prob(&x), expected);
                if in_axis_wedge {
                    assert_eq!(region, WedgeRegion::NearOff);
                }
            }
        }
    }

    #[test]
    fn clean_labels_restores_flips() {
        let mut rng = seeds::rng(6);
        let target = UnitVector::axis(2, 0).unwrap();
        let inst = MassartInstance::rcn(target.clone(), 0.3).unwrap();
        let sample: Vec<LabeledExample> = (0..2_000)
            .map(|_| {
                let point = sample_unit_ball(2, &mut rng).unwrap();
                let label = inst.label(&point, &mut rng);
                LabeledExample { point, label }
            })
            .collect();
        let cleaned = clean_labels(&sample, &target);
        for ex in &cleaned {
            assert_eq!(ex.label, Label::from_sign(target.dot(ex.point.coords())));
        }
        // Cleaning a clean sample is the identity.
        assert_eq!(clean_labels(&cleaned, &target), cleaned);
        // Roughly 30% of labels change.
        let changed = sample
            .iter()
            .zip(&cleaned)
            .filter(|(a, b)| a.label != b.label)
            .count();
        let sigma = (0.3f64 * 0.7 / 2_000.0).sqrt();
        assert!((changed as f64 / 2_000.0 - 0.3).abs() < 3.0 * sigma + 0.01);
    }

    #[test]
    fn custom_rule_bound_validation() {
        let mut rng = seeds::rng(7);
        let target = UnitVector::axis(2, 0).unwrap();
        let ok = MassartInstance::custom(target.clone(), 0.5, |x| {
            0.25 * x.coords()[0].abs()
        })
        .unwrap();
        assert!(ok.validate_flip_bound(10_000, &mut rng).is_ok());
        let bad = MassartInstance::custom(target, 0.9, |_| 0.3).unwrap();
        assert!(bad.validate_flip_bound(10_000, &mut rng).is_err());
    }

    #[test]
    fn same_seed_same_labels() {
        let inst = MassartInstance::rcn(UnitVector::axis(2, 0).unwrap(), 0.2).unwrap();
        let draw = |seed| {
            let mut rng = seeds::rng(seed);
            (0..100)
                .map(|_| {
                    let x = sample_unit_ball(2, &mut rng).unwrap();
                    inst.label(&x, &mut rng)
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
    }
}
