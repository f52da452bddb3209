//! Vectors, the unit ball, and bands: the sampling and closed-form mass
//! computations everything else is built on.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

/// Norm slack accepted when validating a unit vector.
pub const UNIT_NORM_TOL: f64 = 1e-9;
/// Norm slack accepted when validating a ball point.
pub const BALL_NORM_TOL: f64 = 1e-12;
/// Rejection sampling gives up after this many proposals.
pub const REJECTION_CAP: u64 = 1_000_000_000;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A direction in `R^d` (`d >= 2`) with Euclidean norm 1: a halfspace
/// hypothesis or target.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    /// Wrap coordinates that are already unit length (within [`UNIT_NORM_TOL`]).
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidDimension(coords.len()));
        }
        if (norm(&coords) - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::Domain("unit vector norm must be 1 within 1e-9"));
        }
        Ok(Self { coords })
    }

    /// Normalize arbitrary coordinates to unit length.
    pub fn normalized(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidDimension(coords.len()));
        }
        let n = norm(&coords);
        if n < 1e-12 {
            return Err(Error::ZeroVector);
        }
        let coords = coords.into_iter().map(|c| c / n).collect();
        Ok(Self { coords })
    }

    /// The `i`-th standard basis vector in `R^d`.
    pub fn axis(d: usize, i: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if i >= d {
            return Err(Error::Domain("axis index out of range"));
        }
        let mut coords = vec![0.0; d];
        coords[i] = 1.0;
        Ok(Self { coords })
    }

    /// Unit vector in the `e1`-`e2` plane at polar angle `phi` from `e1`.
    pub fn planar(d: usize, phi: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let mut coords = vec![0.0; d];
        coords[0] = phi.cos();
        coords[1] = phi.sin();
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.coords, other)
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// A point of the closed unit ball in `R^d`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BallPoint {
    coords: Vec<f64>,
}

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if norm(&coords) > 1.0 + BALL_NORM_TOL {
            return Err(Error::Domain("ball point norm must be <= 1"));
        }
        Ok(Self { coords })
    }

    /// Skip the norm check; for sampler-internal use where the invariant
    /// holds by construction.
    pub(crate) fn new_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(norm(&coords) <= 1.0 + BALL_NORM_TOL);
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }
}

impl AsRef<[f64]> for BallPoint {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// The margin region `{ x : |center . x| <= half_width }` around a
/// hypothesis' decision boundary.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Band {
    center: UnitVector,
    half_width: f64,
}

impl Band {
    pub fn new(center: UnitVector, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width <= 1.0) {
            return Err(Error::Domain("band half width must lie in (0, 1]"));
        }
        Ok(Self { center, half_width })
    }

    pub fn center(&self) -> &UnitVector {
        &self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn contains(&self, x: &BallPoint) -> bool {
        self.center.dot(x.coords()).abs() < self.half_width
    }
}

/// Angle between two unit vectors, in `[0, pi]`.
///
/// The inner product is clamped to `[-1, 1]` before `acos`, so nearly
/// parallel vectors do not produce NaN.
pub fn angle(u: &UnitVector, v: &UnitVector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    Ok(dot(u.coords(), v.coords()).clamp(-1.0, 1.0).acos())
}

/// Isotropic unit direction in `R^d`.
pub fn sample_unit_sphere<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<UnitVector> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    loop {
        let coords: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&coords);
        // A zero Gaussian vector has probability zero; retry on underflow.
        if n > 1e-300 {
            return Ok(UnitVector {
                coords: coords.into_iter().map(|c| c / n).collect(),
            });
        }
    }
}

pub(crate) fn ball_point_raw<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut coords: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&coords);
        if n <= 1e-300 {
            continue;
        }
        // Radius r with P(R <= r) = r^d makes the point uniform in the ball.
        let r: f64 = rng.random::<f64>().powf(1.0 / d as f64);
        for c in coords.iter_mut() {
            *c *= r / n;
        }
        return coords;
    }
}

/// Uniform sample from the `d`-dimensional unit ball: isotropic Gaussian
/// direction times a `U^(1/d)` radius.
pub fn sample_unit_ball<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<BallPoint> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(BallPoint::new_unchecked(ball_point_raw(d, rng)))
}

/// Rejection-sample a uniform ball point conditioned on the band.
///
/// Returns the accepted point and the number of proposals that were rejected
/// before acceptance (the unlabeled-draw overhead of band conditioning).
/// Gives up with [`Error::PathologicalBand`] after [`REJECTION_CAP`] draws.
pub fn sample_in_band<R: Rng + ?Sized>(band: &Band, rng: &mut R) -> Result<(BallPoint, u64)> {
    let d = band.center.dim();
    let mut rejected = 0u64;
    loop {
        let coords = ball_point_raw(d, rng);
        if dot(band.center.coords(), &coords).abs() < band.half_width {
            return Ok((BallPoint::new_unchecked(coords), rejected));
        }
        rejected += 1;
        if rejected >= REJECTION_CAP {
            return Err(Error::PathologicalBand(REJECTION_CAP));
        }
    }
}

/// Ratio of unit-ball volumes `V_{d-1} / V_d = Gamma(d/2 + 1) / (sqrt(pi) *
/// Gamma((d+1)/2))`, computed via log-gamma.
pub fn volume_ratio(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let d = d as f64;
    let log_ratio = libm::lgamma(d / 2.0 + 1.0) - libm::lgamma((d + 1.0) / 2.0);
    Ok(log_ratio.exp() / PI.sqrt())
}

/// Bracket and exact value for the uniform-ball mass of `{ x : u.x in [a, b] }`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BandMass {
    /// `|b - a| * 2^(-c_limit) * V_{d-1}/V_d`
    pub lower: f64,
    /// `|b - a| * V_{d-1}/V_d`
    pub upper: f64,
    /// `V_{d-1}/V_d * integral_a^b (1 - z^2)^((d-1)/2) dz`
    pub exact: f64,
}

/// Closed-form bracket (and quadrature value) for the probability mass of a
/// band at offsets `[a, b]`, valid for `a, b` within `c_limit / sqrt(d)` of
/// the origin and `c_limit < d/2`.
pub fn band_mass_bounds(d: usize, a: f64, b: f64, c_limit: f64) -> Result<BandMass> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if !(c_limit > 0.0 && c_limit < d as f64 / 2.0) {
        return Err(Error::Domain("band bracket requires 0 < c_limit < d/2"));
    }
    let reach = c_limit / (d as f64).sqrt();
    if a > b || a < -reach - 1e-15 || b > reach + 1e-15 {
        return Err(Error::Domain(
            "band offsets must satisfy -c_limit/sqrt(d) <= a <= b <= c_limit/sqrt(d)",
        ));
    }
    let ratio = volume_ratio(d)?;
    let width = b - a;
    let exponent = (d as f64 - 1.0) / 2.0;
    let exact = ratio * adaptive_simpson(|z| (1.0 - z * z).powf(exponent), a, b, 1e-10);
    Ok(BandMass {
        lower: width * (-c_limit).exp2() * ratio,
        upper: width * ratio,
        exact,
    })
}

/// Tail bound on the probability that two hypotheses at angle `alpha`
/// disagree on a point *outside* the band of half-width `c * alpha / sqrt(d)`
/// around the first: `alpha/pi * exp(-c^2 (d-2) / (2d))`.
pub fn disagreement_outside_band_bound(d: usize, alpha: f64, c: f64) -> Result<f64> {
    if d <= 2 {
        return Err(Error::InvalidDimension(d));
    }
    if !(0.0..PI / 2.0).contains(&alpha) {
        return Err(Error::Domain("alpha must lie in [0, pi/2)"));
    }
    if c < 1.0 {
        return Err(Error::Domain("band scale c must be at least 1"));
    }
    let d = d as f64;
    Ok(alpha / PI * (-c * c * (d - 2.0) / (2.0 * d)).exp())
}
