use super::{DeltaPoly, SpectrumError};

const SCAN_STEP: f64 = 1e-4;
const TOLERANCE: f64 = 1e-9;

/// A bracketed sign change of `s·poly(δ) - (1-δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignChange {
    pub lo: f64,
    pub hi: f64,
    /// True when the sign goes from negative to positive.
    pub rising: bool,
}

fn gap(poly: &DeltaPoly, scale: f64, d: f64) -> f64 {
    scale * poly.eval(d) - (1.0 - d)
}

/// Sign changes on the grid `lo + k·step` strictly inside `(lo, hi)`.
pub fn sign_changes(poly: &DeltaPoly, scale: f64, lo: f64, hi: f64, step: f64) -> Vec<SignChange> {
    let mut out = Vec::new();
    let mut last: Option<(f64, bool)> = None;
    let mut k = 1u64;
    loop {
        let d = lo + k as f64 * step;
        if d >= hi - step * 1e-6 {
            break;
        }
        k += 1;
        let g = gap(poly, scale, d);
        if g == 0.0 || g.is_nan() {
            continue;
        }
        let pos = g > 0.0;
        if let Some((prev_d, prev_pos)) = last {
            if prev_pos != pos {
                out.push(SignChange { lo: prev_d, hi: d, rising: pos });
            }
        }
        last = Some((d, pos));
    }
    out
}

/// Root of `s·poly(δ) = 1-δ` at which the map `δ ↦ 1 - s·poly(δ)` stops
/// decreasing its argument: the unique crossing where the gap goes from
/// positive to negative on the `1e-4` scan grid of `(0,1)`.
pub fn solve_threshold(poly: &DeltaPoly, scale: f64) -> Result<f64, SpectrumError> {
    solve_threshold_in(poly, scale, 0.0, 1.0)
}

pub fn solve_threshold_in(poly: &DeltaPoly, scale: f64, lo: f64, hi: f64) -> Result<f64, SpectrumError> {
    if !(0.0..1.0).contains(&lo) || !(lo < hi && hi <= 1.0) {
        return Err(SpectrumError::Argument(format!("bad interval ({lo}, {hi})")));
    }
    let falling: Vec<SignChange> =
        sign_changes(poly, scale, lo, hi, SCAN_STEP).into_iter().filter(|c| !c.rising).collect();
    match falling.as_slice() {
        [] => Err(SpectrumError::NoCrossing),
        [c] => {
            let (mut a, mut b) = (c.lo, c.hi);
            while b - a > TOLERANCE {
                let m = 0.5 * (a + b);
                if gap(poly, scale, m) > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            Ok(0.5 * (a + b))
        }
        many => Err(SpectrumError::MultipleCrossings(many.len())),
    }
}

/// `δ0, δ1, ..., δ_steps` under `δ ↦ 1 - s·poly(δ)`.
pub fn iterate_map(poly: &DeltaPoly, scale: f64, delta0: f64, steps: usize) -> Result<Vec<f64>, SpectrumError> {
    if !(delta0 > 0.0 && delta0 < 1.0) {
        return Err(SpectrumError::Argument(format!("start {delta0} not in (0,1)")));
    }
    let mut out = vec![delta0];
    let mut d = delta0;
    for step in 1..=steps {
        d = 1.0 - scale * poly.eval(d);
        if !(0.0..=1.0).contains(&d) {
            return Err(SpectrumError::LeftUnitInterval { step, value: d });
        }
        out.push(d);
    }
    Ok(out)
}

/// Whether `δ ↦ 1 - s·poly(δ)` is nondecreasing across the grid of `(0,1)`.
pub fn monotone_scan(poly: &DeltaPoly, scale: f64, step: f64) -> Result<bool, SpectrumError> {
    if !(step > 0.0 && step <= 1e-3) {
        return Err(SpectrumError::Argument(format!("grid step {step} outside (0, 1e-3]")));
    }
    let map = |d: f64| 1.0 - scale * poly.eval(d);
    let mut prev = map(step);
    let mut k = 2u64;
    loop {
        let d = k as f64 * step;
        if d >= 1.0 - step * 1e-6 {
            return Ok(true);
        }
        let cur = map(d);
        if cur < prev {
            return Ok(false);
        }
        prev = cur;
        k += 1;
    }
}
