//! Approximation error of the pruned QFT.
//!
//! Target digit `l` of the circuit carries the bracket with fraction length
//! `L = l + 1`, i.e. the phase `0.x_l x_{l-1} ... x_0` in base `q`. Pruning at
//! keep depth `d` removes the controlled phases of the `m = max(0, L - d)`
//! least significant digits `x_0 .. x_{m-1}`, which shifts the `|1>`
//! component of that digit by `2*pi*(sum_k x_k q^k) / q^L`.

use std::f64::consts::PI;

use crate::circuit::{apply_circuit, build_qft_circuit, KeepDepth};
use crate::error::{QftError, Result};
use crate::numerics::{index_to_digits, register_size, Complex, StateVector};

/// Largest allowed circular distance between a simulated phase deviation and
/// the one predicted from the dropped gates.
const PHASE_CONSISTENCY_TOL: f64 = 1e-9;

fn check_radix(q: usize) -> Result<()> {
    if q < 2 {
        return Err(QftError::InvalidRadix(q));
    }
    Ok(())
}

fn error_angle(q: usize, l: u32) -> f64 {
    2.0 * PI * (q - 1) as f64 / (q as f64).powi(l as i32)
}

/// `exp(-2*pi*i*(q-1)/q^l)`, the worst-case factor of a single omitted
/// controlled phase.
pub fn phase_error_factor(q: usize, l: u32) -> Result<Complex> {
    check_radix(q)?;
    if l == 0 {
        return Err(QftError::InvalidDigits(0));
    }
    Ok(Complex::new(0.0, -error_angle(q, l)).exp())
}

/// Partial Taylor sum `sum_{k < terms} z^k / k!` of the factor above.
pub fn phase_error_series(q: usize, l: u32, terms: usize) -> Result<Complex> {
    check_radix(q)?;
    if l == 0 {
        return Err(QftError::InvalidDigits(0));
    }
    if terms == 0 {
        return Err(QftError::InvalidIterations);
    }
    let z = Complex::new(0.0, -error_angle(q, l));
    let mut term = Complex::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..terms {
        term = term * z / k as f64;
        sum += term;
    }
    Ok(sum)
}

/// `cos(theta) - i sin(theta)` with `theta = 2*pi*(q-1)/q^l`.
pub fn phase_error_trig(q: usize, l: u32) -> Result<Complex> {
    check_radix(q)?;
    if l == 0 {
        return Err(QftError::InvalidDigits(0));
    }
    let theta = error_angle(q, l);
    Ok(Complex::new(theta.cos(), -theta.sin()))
}

fn check_bound_args(q: usize, len: usize, m: usize) -> Result<()> {
    check_radix(q)?;
    if m > len {
        return Err(QftError::DroppedExceedsLength { m, len });
    }
    Ok(())
}

/// `2*pi*m*q^m*(q-1) / q^L`.
pub fn bound_coppersmith(q: usize, len: usize, m: usize) -> Result<f64> {
    check_bound_args(q, len, m)?;
    let qf = q as f64;
    Ok(2.0 * PI * m as f64 * (q - 1) as f64 / qf.powi((len - m) as i32))
}

/// `2*pi*(q^m - 1) / q^L`, from the closed form of the dropped digit sum.
pub fn bound_new(q: usize, len: usize, m: usize) -> Result<f64> {
    check_bound_args(q, len, m)?;
    let qf = q as f64;
    Ok(2.0 * PI * (qf.powi(m as i32) - 1.0) / qf.powi(len as i32))
}

/// `2*pi / q^(L-m)`, the radix-only limit that `bound_new` stays under.
pub fn bound_limit(q: usize, len: usize, m: usize) -> Result<f64> {
    check_bound_args(q, len, m)?;
    Ok(2.0 * PI / (q as f64).powi((len - m) as i32))
}

fn check_scan_args(q: usize, n: usize, target_digit: usize) -> Result<usize> {
    check_radix(q)?;
    if n == 0 {
        return Err(QftError::InvalidDigits(n));
    }
    if target_digit >= n {
        return Err(QftError::IndexOutOfRange {
            index: target_digit,
            size: n,
        });
    }
    register_size(q, n)
}

/// Integer numerator `sum_{k<m} x_k q^k` of the dropped phase for one bracket.
fn dropped_numerator(q: usize, digits: &[usize], m: usize) -> u128 {
    digits[..m]
        .iter()
        .rev()
        .fold(0u128, |acc, &d| acc * q as u128 + d as u128)
}

fn dropped_phase(q: usize, len: usize, numerator: u128) -> f64 {
    2.0 * PI * numerator as f64 / (q as f64).powi(len as i32)
}

/// Phase lost on the `|1>` component of `target_digit` for input `x`, taken
/// directly from the exponents of the omitted controlled phases.
pub fn bracket_phase_deviation(
    q: usize,
    n: usize,
    keep_depth: KeepDepth,
    target_digit: usize,
    x: usize,
) -> Result<f64> {
    let size = check_scan_args(q, n, target_digit)?;
    if x >= size {
        return Err(QftError::IndexOutOfRange { index: x, size });
    }
    let len = target_digit + 1;
    let m = keep_depth.dropped_count(len);
    let digits = index_to_digits(x, q, n);
    Ok(dropped_phase(q, len, dropped_numerator(q, &digits, m)))
}

/// Input whose `m` dropped digits all equal `q - 1`; every other digit is 0.
pub fn tightness_witness(q: usize, n: usize, m: usize) -> Result<usize> {
    check_radix(q)?;
    if m > n {
        return Err(QftError::DroppedExceedsLength { m, len: n });
    }
    Ok(register_size(q, m)? - 1)
}

fn wrap_phase(phase: f64) -> f64 {
    let wrapped = phase.rem_euclid(2.0 * PI);
    if wrapped > PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct BracketMax {
    t1: f64,
    any_t: f64,
}

/// Simulates the exact and pruned circuits on every basis input and returns,
/// per circuit target digit, the largest dropped phase. Every simulated
/// deviation is checked against the dropped-gate exponent.
fn scan_brackets(q: usize, n: usize, keep_depth: KeepDepth) -> Result<Vec<BracketMax>> {
    let size = check_scan_args(q, n, 0)?;
    let exact = build_qft_circuit(q, n, KeepDepth::Unbounded)?;
    let pruned = build_qft_circuit(q, n, keep_depth)?;
    let mut maxima = vec![BracketMax::default(); n];
    let strides: Vec<usize> = (0..n).map(|p| q.pow(p as u32)).collect();
    for x in 0..size {
        let input = StateVector::basis(q, n, x)?;
        let e = apply_circuit(&exact, &input)?;
        let a = apply_circuit(&pruned, &input)?;
        let (e, a) = (e.amplitudes(), a.amplitudes());
        let digits = index_to_digits(x, q, n);
        for (l, max) in maxima.iter_mut().enumerate() {
            let len = l + 1;
            let numerator = dropped_numerator(q, &digits, keep_depth.dropped_count(len));
            // Target digit l ends up at output position n-1-l after reversal.
            let stride = strides[n - 1 - l];
            for t in 1..q {
                let predicted = dropped_phase(q, len, numerator * t as u128);
                let idx = t * stride;
                let ratio = e[idx] * e[0].conj() * (a[idx] * a[0].conj()).conj();
                let simulated = ratio.arg();
                let gap = wrap_phase(simulated + predicted).abs();
                if gap > PHASE_CONSISTENCY_TOL {
                    return Err(QftError::PhaseMismatch(format!(
                        "q={q} n={n} depth={keep_depth} target={l} x={x} t={t}: \
                         simulated {simulated}, predicted {predicted}"
                    )));
                }
                if t == 1 {
                    max.t1 = max.t1.max(predicted);
                }
                max.any_t = max.any_t.max(predicted);
            }
        }
    }
    Ok(maxima)
}

/// Largest phase error on the `|1>` component of `target_digit`, over all
/// `q^n` basis inputs.
pub fn measure_bracket_phase_error(
    q: usize,
    n: usize,
    keep_depth: KeepDepth,
    target_digit: usize,
) -> Result<f64> {
    check_scan_args(q, n, target_digit)?;
    Ok(scan_brackets(q, n, keep_depth)?[target_digit].t1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub radix: usize,
    pub digits: usize,
    pub target_digit: usize,
    pub fraction_length: usize,
    pub dropped_count: usize,
    /// Measured on the target's `|1>` component, in radians.
    pub measured_phase_error: f64,
    /// Measured over every component `|t>`, `t in [1, q)`.
    pub measured_max_t: f64,
    pub bound_new: f64,
    pub bound_coppersmith: f64,
}

impl BoundRow {
    /// Bound values at or above pi can be exceeded by a wrapped phase, so
    /// such rows are reported but not checked.
    pub fn phase_wrap_flagged(&self) -> bool {
        self.bound_new >= PI
    }

    pub fn bound_limit(&self) -> f64 {
        2.0 * PI / (self.radix as f64).powi((self.fraction_length - self.dropped_count) as i32)
    }

    /// Ratio of the two bounds; `None` when nothing was dropped.
    pub fn bound_ratio(&self) -> Option<f64> {
        (self.dropped_count > 0).then(|| self.bound_coppersmith / self.bound_new)
    }

    pub fn satisfies_bounds(&self) -> bool {
        if self.dropped_count == 0 {
            return self.measured_phase_error == 0.0
                && self.bound_new == 0.0
                && self.bound_coppersmith == 0.0;
        }
        self.measured_phase_error <= self.bound_new && self.bound_new <= self.bound_coppersmith
    }
}

/// One row per circuit target digit, sorted by target digit.
pub fn approximation_report(q: usize, n: usize, keep_depth: KeepDepth) -> Result<Vec<BoundRow>> {
    let maxima = scan_brackets(q, n, keep_depth)?;
    maxima
        .into_iter()
        .enumerate()
        .map(|(l, max)| {
            let len = l + 1;
            let m = keep_depth.dropped_count(len);
            Ok(BoundRow {
                radix: q,
                digits: n,
                target_digit: l,
                fraction_length: len,
                dropped_count: m,
                measured_phase_error: max.t1,
                measured_max_t: max.any_t,
                bound_new: bound_new(q, len, m)?,
                bound_coppersmith: bound_coppersmith(q, len, m)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityMetrics {
    pub radix: usize,
    pub digits: usize,
    /// `(q/2)^n`: states of `n` radix-`q` digits relative to `n` qubits.
    pub state_space_ratio: f64,
    /// `log2(q)`: qubits replaced by one radix-`q` digit.
    pub qudit_savings_factor: f64,
}

pub fn capacity_metrics(q: usize, n: usize) -> Result<CapacityMetrics> {
    check_radix(q)?;
    if n == 0 {
        return Err(QftError::InvalidDigits(n));
    }
    Ok(CapacityMetrics {
        radix: q,
        digits: n,
        state_space_ratio: (q as f64 / 2.0).powi(n as i32),
        qudit_savings_factor: (q as f64).log2(),
    })
}

/// Register sizing for one radix at a fixed state-space target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadixComparisonRow {
    pub radix: usize,
    pub digits: usize,
    pub state_space: u128,
    pub gate_count: usize,
    pub state_space_ratio: f64,
    pub qudit_savings_factor: f64,
}

/// Compares `n` radix-`q` digits with the fewest qubits covering the same
/// `q^n` states. The binary row comes first.
pub fn compare_radix(q: usize, n: usize) -> Result<Vec<RadixComparisonRow>> {
    check_radix(q)?;
    if n == 0 {
        return Err(QftError::InvalidDigits(n));
    }
    let target = u32::try_from(n)
        .ok()
        .and_then(|d| (q as u128).checked_pow(d))
        .ok_or(QftError::Overflow {
            radix: q,
            digits: n,
        })?;
    let mut qubits = 0usize;
    while 1u128.checked_shl(qubits as u32).is_some_and(|s| s < target) {
        qubits += 1;
    }
    let row = |radix: usize, digits: usize, state_space: u128| -> Result<RadixComparisonRow> {
        let metrics = capacity_metrics(radix, digits)?;
        Ok(RadixComparisonRow {
            radix,
            digits,
            state_space,
            gate_count: digits * (digits + 1) / 2,
            state_space_ratio: metrics.state_space_ratio,
            qudit_savings_factor: metrics.qudit_savings_factor,
        })
    };
    Ok(vec![
        row(2, qubits.max(1), 1u128 << qubits.max(1))?,
        row(q, n, target)?,
    ])
}
