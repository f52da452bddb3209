//! Adaptive Simpson quadrature for the one-dimensional integrals that back
//! the band-mass and hinge-area computations.

use alloc::vec::Vec;

const MAX_DEPTH: u32 = 60;

fn simpson(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width / 6.0 * (fa + 4.0 * fm + fb)
}

fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        // Richardson extrapolation of the two half-interval estimates.
        left + right + delta / 15.0
    } else {
        recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The integrand must be finite on the whole interval. `a > b` yields the
/// signed integral.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    recurse(&f, a, m, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

/// Integrate across a sorted list of breakpoints, so integrands with isolated
/// kinks converge at the smooth-integrand rate on each piece.
pub fn adaptive_simpson_split<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: f64) -> f64 {
    let pieces: Vec<(f64, f64)> = points.windows(2).map(|w| (w[0], w[1])).collect();
    let per_piece = tol / pieces.len().max(1) as f64;
    pieces
        .iter()
        .map(|&(a, b)| adaptive_simpson(&f, a, b, per_piece))
        .sum()
}
