//! Derivative-free scalar minimization.

use crate::error::{input, Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8; // (√5 - 1)/2

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search on `[lo, hi]` until the bracket shrinks below
/// `rel_tol·(hi - lo)`. The function is assumed unimodal on the bracket.
pub fn golden_section(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rel_tol: f64) -> Result<Minimum> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(input(format!("invalid bracket [{lo}, {hi}]")));
    }
    let width = hi - lo;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let (fc0, fd0) = (fc, fd);
    let mut descended = false;
    while b - a > rel_tol * width {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if fc != fc0 || fd != fd0 {
            descended = true;
        }
    }
    if !descended && fc0 == fd0 {
        return Err(Error::FlatFunction { lo, hi });
    }
    let (x, value) = if fc < fd { (c, fc) } else { (d, fd) };
    Ok(Minimum { x, value })
}

/// Minimizer of a resolution-vs-time curve on `bracket`, to 1e-8 of the bracket width.
pub fn optimal_time_numeric(f: impl Fn(f64) -> f64, bracket: (f64, f64)) -> Result<f64> {
    golden_section(f, bracket.0, bracket.1, 1e-8).map(|m| m.x)
}

/// Searches `(0, 10·t_guess]`; when the minimizer lands on the right edge the
/// bracket is widened ten-fold once.
pub fn minimize_near(f: impl Fn(f64) -> f64, t_guess: f64) -> Result<Minimum> {
    if !(t_guess.is_finite() && t_guess > 0.0) {
        return Err(input(format!("time scale must be positive, got {t_guess}")));
    }
    let mut hi = 10.0 * t_guess;
    for attempt in 0..2 {
        let m = golden_section(&f, hi * 1e-12, hi, 1e-10)?;
        if attempt == 1 || hi - m.x > 1e-6 * hi {
            return Ok(m);
        }
        hi *= 10.0;
    }
    unreachable!()
}

/// Scans `points` log-spaced abscissae on `[lo, hi]` and refines the best
/// sample by golden section between its neighbours.
pub fn minimize_log_grid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Result<Minimum> {
    if !(lo > 0.0 && hi > lo && points >= 3) {
        return Err(input("log grid needs 0 < lo < hi and at least three points"));
    }
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|k| lo * (ratio * k as f64).exp()).collect();
    let (best, _) = xs
        .iter()
        .map(|&x| f(x))
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::FlatFunction { lo, hi })?;
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(points - 1)];
    golden_section(f, a, b, 1e-12)
}
