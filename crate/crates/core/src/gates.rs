//! Gate matrices: roots of unity, Walsh-Hadamard, Chrestenson, phase shift
//! and the two-qudit controlled phase.
//!
//! All Fourier-type phases use the negative exponent `exp(-2*pi*i*.../...)`;
//! the positive-sign transforms are the adjoints.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{QftError, Result};
use crate::numerics::{Complex, ComplexMatrix};

/// The primitive root `exp(-2*pi*i/q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOfUnity {
    radix: usize,
    value: Complex,
}

impl RootOfUnity {
    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn value(&self) -> Complex {
        self.value
    }

    /// `value^k`, reduced modulo `q` before evaluation. Quarter turns are
    /// returned exactly.
    pub fn pow(&self, k: usize) -> Complex {
        let k = k % self.radix;
        if (4 * k).is_multiple_of(self.radix) {
            return match 4 * k / self.radix {
                0 => Complex::new(1.0, 0.0),
                1 => Complex::new(0.0, -1.0),
                2 => Complex::new(-1.0, 0.0),
                _ => Complex::new(0.0, 1.0),
            };
        }
        Complex::from_polar(1.0, -2.0 * PI * k as f64 / self.radix as f64)
    }
}

pub fn root_of_unity(q: usize) -> Result<RootOfUnity> {
    if q < 2 {
        return Err(QftError::InvalidRadix(q));
    }
    let root = RootOfUnity {
        radix: q,
        value: Complex::new(1.0, 0.0),
    };
    Ok(RootOfUnity {
        value: root.pow(1),
        ..root
    })
}

pub fn walsh_hadamard_gate() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(2, 2, |r, c| {
        if r == 1 && c == 1 {
            Complex::new(-s, 0.0)
        } else {
            Complex::new(s, 0.0)
        }
    })
}

/// The `q x q` Chrestenson gate, entry `(j, k) = a^(j*k) / sqrt(q)`.
pub fn chrestenson_gate(q: usize) -> Result<ComplexMatrix> {
    let root = root_of_unity(q)?;
    let norm = (1.0 / q as f64).sqrt();
    Ok(ComplexMatrix::from_fn(q, q, |j, k| root.pow(j * k) * norm))
}

/// `diag(1, exp(i*alpha))`.
pub fn phase_shift_gate(alpha: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[Complex::new(1.0, 0.0), Complex::from_polar(1.0, alpha)])
}

/// Phase acquired by a controlled-phase basis state with control value `c`
/// and target value `t`: `exp(-2*pi*i*c*t / q^denom_exp)`.
pub fn controlled_phase(q: usize, denom_exp: u32, control: usize, target: usize) -> Complex {
    // Reduce the numerator modulo q^denom_exp when it fits, keeping the angle
    // small for accuracy.
    let modulus = q.checked_pow(denom_exp);
    let numerator = match modulus {
        Some(m) => ((control * target) % m) as f64 / m as f64,
        None => (control * target) as f64 / (q as f64).powi(denom_exp as i32),
    };
    Complex::from_polar(1.0, -2.0 * PI * numerator)
}

/// Two-qudit diagonal gate; compound index `c*q + t` with the control as the
/// most significant digit.
pub fn controlled_phase_matrix(q: usize, denom_exp: u32) -> Result<ComplexMatrix> {
    if q < 2 {
        return Err(QftError::InvalidRadix(q));
    }
    if denom_exp < 1 {
        return Err(QftError::InvalidDenominator {
            got: denom_exp,
            min: 1,
        });
    }
    let diag: Vec<Complex> = (0..q * q)
        .map(|i| controlled_phase(q, denom_exp, i / q, i % q))
        .collect();
    Ok(ComplexMatrix::diagonal(&diag))
}
