//! Exact and approximate periodicity of the normalized limit dynamics.
//!
//! The predicted vertex vectors repeat with period 2q exactly when the
//! phase advance arg z is a rational multiple pi p / q of pi; after 2q
//! steps the basis has shifted by a whole relabeling (offset q mod n).
//! For irrational multiples, continued-fraction convergents of
//! |arg z| / pi supply near-periods whose phase deviations shrink like
//! the Dirichlet bound 1/q^2.

use crate::error::Result;
use crate::harmonic::rotation_number;
use crate::polygon::IterationTrace;
use std::f64::consts::PI;

/// Tolerance for declaring arg z / pi exactly rational.
pub const EXACT_RATIONALITY_TOL: f64 = 1e-12;

/// Continued-fraction terms stop once the fractional part drops below
/// this floor.
const CF_FRACTION_FLOOR: f64 = 1e-12;

/// A rational approximation p/q produced by the convergent machinery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalApprox {
    pub p: i64,
    /// Strictly positive denominator; gcd(|p|, q) = 1 for convergents.
    pub q: i64,
    /// p / q as a float.
    pub value: f64,
    /// |target - p/q|.
    pub error: f64,
}

/// An exactly periodic phase: period 2q with witness p/q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactPeriod {
    pub period: u64,
    pub p: i64,
    pub q: i64,
}

/// A near-period candidate from one convergent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearPeriod {
    pub period: u64,
    /// Residual phase |2q arg z - 2p pi|.
    pub deviation: f64,
}

/// An empirically detected trace period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalPeriod {
    pub period: usize,
    /// Max vertex distance over the compared tail pairs.
    pub distance: f64,
    /// Cyclic relabeling offset: snapshot k+period vertex i matches
    /// snapshot k vertex (i + offset) mod n.
    pub offset: usize,
}

/// Full periodicity summary for one configuration.
#[derive(Debug, Clone)]
pub struct PeriodReport {
    pub exact: Option<ExactPeriod>,
    pub near: Vec<NearPeriod>,
    pub empirical: Option<EmpiricalPeriod>,
}

/// Regular continued-fraction terms of x, truncated at `max_terms` or
/// when the fractional part falls below 1e-12.
pub fn continued_fraction(x: f64, max_terms: usize) -> Vec<i64> {
    assert!(x.is_finite() && max_terms >= 1);
    let mut terms = Vec::new();
    let mut value = x;
    for _ in 0..max_terms {
        let a = value.floor();
        terms.push(a as i64);
        let frac = value - a;
        if frac < CF_FRACTION_FLOOR {
            break;
        }
        value = 1.0 / frac;
    }
    terms
}

/// Convergents p_m / q_m of a term sequence, in order of ascending q.
/// Stops early if the integer recurrence would overflow.
pub fn convergents(terms: &[i64]) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(terms.len());
    // (h_{-2}, h_{-1}) and (k_{-2}, k_{-1}) of the standard recurrence.
    let (mut p_prev2, mut p_prev1) = (0i64, 1i64);
    let (mut q_prev2, mut q_prev1) = (1i64, 0i64);
    for &a in terms {
        let p = match a.checked_mul(p_prev1).and_then(|x| x.checked_add(p_prev2)) {
            Some(p) => p,
            None => break,
        };
        let q = match a.checked_mul(q_prev1).and_then(|x| x.checked_add(q_prev2)) {
            Some(q) => q,
            None => break,
        };
        out.push((p, q));
        p_prev2 = p_prev1;
        p_prev1 = p;
        q_prev2 = q_prev1;
        q_prev1 = q;
    }
    out
}

/// Smallest-q convergent p/q of phi/pi with error at most `tol` and
/// q <= q_max; absent when no convergent qualifies.
pub fn rational_multiple_of_pi(phi: f64, q_max: i64, tol: f64) -> Option<RationalApprox> {
    assert!(q_max >= 1 && tol > 0.0);
    let target = phi / PI;
    for (p, q) in convergents(&continued_fraction(target, 64)) {
        if q > q_max {
            break;
        }
        let value = p as f64 / q as f64;
        let error = (target - value).abs();
        if error <= tol {
            return Some(RationalApprox { p, q, value, error });
        }
    }
    None
}

/// Exact period 2q of a raw phase advance, when phase/pi is rational
/// with denominator at most q_max.
pub fn exact_period_of_phase(phase: f64, q_max: i64) -> Option<ExactPeriod> {
    // The sign of the phase only flips traversal direction.
    rational_multiple_of_pi(phase.abs(), q_max, EXACT_RATIONALITY_TOL).map(|ra| ExactPeriod {
        period: 2 * ra.q as u64,
        p: ra.p,
        q: ra.q,
    })
}

/// Exact period of the uniform scheme's predicted dynamics, if any.
pub fn exact_period(n: usize, xi: f64, q_max: i64) -> Result<Option<ExactPeriod>> {
    let rn = rotation_number(n, xi)?;
    Ok(exact_period_of_phase(rn.phase, q_max))
}

/// Near-period candidates for a raw phase, one per convergent of
/// |phase|/pi, in ascending q. Deviations decrease strictly along the
/// list (until the rationality floor).
pub fn near_periods_of_phase(phase: f64, q_max: i64) -> Vec<NearPeriod> {
    assert!(q_max >= 1);
    let target = phase.abs() / PI;
    convergents(&continued_fraction(target, 64))
        .into_iter()
        .take_while(|&(_, q)| q <= q_max)
        .map(|(p, q)| NearPeriod {
            period: 2 * q as u64,
            deviation: (2.0 * q as f64 * phase.abs() - 2.0 * p as f64 * PI).abs(),
        })
        .collect()
}

/// Near-period candidates for a uniform scheme.
pub fn near_periods(n: usize, xi: f64, q_max: i64) -> Result<Vec<NearPeriod>> {
    let rn = rotation_number(n, xi)?;
    Ok(near_periods_of_phase(rn.phase, q_max))
}

/// Smallest trace period up to cyclic vertex relabeling.
///
/// Scans candidate periods in ascending order; for each, compares up to
/// period+1 consecutive snapshot pairs at the tail of the trace, all with
/// one consistent relabeling offset. A candidate matches when the largest
/// per-vertex distance over all compared pairs stays within `tol`.
pub fn empirical_period(trace: &IterationTrace, tol: f64) -> Option<EmpiricalPeriod> {
    let m = trace.len();
    if m < 3 {
        return None;
    }
    for period in 1..m {
        let k_hi = m - 1 - period;
        let k_lo = k_hi.saturating_sub(period);
        let (offset, mut distance) = best_shift(trace, k_hi, k_hi + period)?;
        if distance > tol {
            continue;
        }
        let mut ok = true;
        for k in k_lo..k_hi {
            let d = shift_distance(trace, k, k + period, offset);
            if d > tol {
                ok = false;
                break;
            }
            distance = distance.max(d);
        }
        if ok {
            return Some(EmpiricalPeriod { period, distance, offset });
        }
    }
    None
}

/// Offset minimizing the max vertex distance between snapshots a and b.
fn best_shift(trace: &IterationTrace, a: usize, b: usize) -> Option<(usize, f64)> {
    let n = trace.snapshot(a).n();
    (0..n)
        .map(|s| (s, shift_distance(trace, a, b, s)))
        .min_by(|x, y| x.1.partial_cmp(&y.1).expect("finite distances"))
}

/// Max vertex distance between snapshot b and snapshot a relabeled by
/// `shift`: vertex i of b against vertex (i + shift) mod n of a.
fn shift_distance(trace: &IterationTrace, a: usize, b: usize, shift: usize) -> f64 {
    let pa = trace.snapshot(a);
    let pb = trace.snapshot(b);
    let n = pa.n();
    (0..n)
        .map(|i| {
            let j = (i + shift) % n;
            let dx = pb.xs()[i] - pa.xs()[j];
            let dy = pb.ys()[i] - pa.ys()[j];
            dx.hypot(dy)
        })
        .fold(0.0, f64::max)
}

/// Exact, near, and (when a trace is supplied) empirical periodicity in
/// one bundle.
pub fn period_report(
    n: usize,
    xi: f64,
    q_max: i64,
    trace: Option<&IterationTrace>,
    empirical_tol: f64,
) -> Result<PeriodReport> {
    Ok(PeriodReport {
        exact: exact_period(n, xi, q_max)?,
        near: near_periods(n, xi, q_max)?,
        empirical: trace.and_then(|t| empirical_period(t, empirical_tol)),
    })
}
