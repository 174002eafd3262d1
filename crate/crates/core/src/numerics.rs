//! Dense complex linear algebra used by the gate library, the simulator and
//! the verification routines.
//!
//! Matrices are stored row-major. Register indices are little-endian in the
//! digits: `i = sum_j x_j * q^j`, so in a Kronecker product the left factor
//! addresses the most significant digit.

use num_complex::Complex64;

use crate::error::{QftError, Result};

pub type Complex = Complex64;

/// Tolerance for the unit-norm condition of a state vector.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Default iteration count for [`ComplexMatrix::spectral_norm`].
pub const DEFAULT_POWER_ITERATIONS: usize = 200;

/// `q^n`, rejecting overflow.
pub fn register_size(radix: usize, digits: usize) -> Result<usize> {
    u32::try_from(digits)
        .ok()
        .and_then(|d| radix.checked_pow(d))
        .ok_or(QftError::Overflow { radix, digits })
}

/// Base-`radix` digits of `index`, least significant first.
pub fn index_to_digits(index: usize, radix: usize, digits: usize) -> Vec<usize> {
    let mut rest = index;
    (0..digits)
        .map(|_| {
            let d = rest % radix;
            rest /= radix;
            d
        })
        .collect()
}

/// Inverse of [`index_to_digits`].
pub fn digits_to_index(digits: &[usize], radix: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * radix + d)
}

fn check_finite(entries: &[Complex]) -> Result<()> {
    match entries
        .iter()
        .position(|c| !(c.re.is_finite() && c.im.is_finite()))
    {
        Some(pos) => Err(QftError::NonFinite(pos)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(QftError::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(QftError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        check_finite(&entries)?;
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from a closure over `(row, col)`.
    ///
    /// Panics if `f` yields a non-finite entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self::new(rows, cols, entries).expect("from_fn produced an invalid matrix")
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |r, c| {
            if r == c {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
    }

    pub fn diagonal(diag: &[Complex]) -> Self {
        let dim = diag.len();
        Self::from_fn(dim, dim, |r, c| {
            if r == c {
                diag[r]
            } else {
                Complex::new(0.0, 0.0)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        self.rows
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Complex] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Complex> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(QftError::DimensionMismatch(
                "columns have differing lengths".into(),
            ));
        }
        let mut entries = vec![Complex::new(0.0, 0.0); rows * cols];
        for (c, column) in columns.iter().enumerate() {
            for (r, &v) in column.iter().enumerate() {
                entries[r * cols + c] = v;
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&v| v * factor).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    /// Kronecker product. Block `(i, j)` of the result is `self[i][j] * other`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        for m in [self, other] {
            if !m.is_square() {
                return Err(QftError::NotSquare {
                    rows: m.rows,
                    cols: m.cols,
                });
            }
        }
        let (da, db) = (self.dim(), other.dim());
        Ok(Self::from_fn(da * db, da * db, |r, c| {
            self.get(r / db, c / db) * other.get(r % db, c % db)
        }))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(QftError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = vec![Complex::new(0.0, 0.0); self.rows * other.cols];
        for r in 0..self.rows {
            let out = &mut entries[r * other.cols..(r + 1) * other.cols];
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for (o, &b) in out.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Self::new(self.rows, other.cols, entries)
    }

    pub fn mul_vec(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if v.len() != self.cols {
            return Err(QftError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Largest entry magnitude of `self * self^dagger - I`, or `None` for a
    /// non-square matrix.
    pub fn unitarity_residual(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let product = self
            .matmul(&self.adjoint())
            .expect("square matrix times its adjoint");
        product.max_entry_distance(&Self::identity(self.dim())).ok()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual().is_some_and(|r| r <= tol)
    }

    pub fn max_entry_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest singular value by power iteration on `A^dagger A`, starting
    /// from the uniform vector `1/sqrt(dim)`.
    pub fn spectral_norm(&self, iterations: usize) -> Result<f64> {
        if !self.is_square() {
            return Err(QftError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if iterations == 0 {
            return Err(QftError::InvalidIterations);
        }
        let dim = self.dim();
        let gram = self.adjoint().matmul(self)?;
        let mut v = vec![Complex::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
        for _ in 0..iterations {
            let w = gram.mul_vec(&v)?;
            let norm = vector_norm(&w);
            if norm == 0.0 {
                return Ok(0.0);
            }
            v = w.into_iter().map(|c| c / norm).collect();
        }
        Ok(vector_norm(&self.mul_vec(&v)?))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(QftError::DimensionMismatch(format!(
                "{}x{} versus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

pub fn vector_norm(v: &[Complex]) -> f64 {
    v.iter().map(Complex::norm_sqr).sum::<f64>().sqrt()
}

/// Amplitudes of an `n`-digit register over radix `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    radix: usize,
    digits: usize,
    amplitudes: Vec<Complex>,
}

impl StateVector {
    pub fn new(radix: usize, digits: usize, amplitudes: Vec<Complex>) -> Result<Self> {
        if radix < 2 {
            return Err(QftError::InvalidRadix(radix));
        }
        if digits == 0 {
            return Err(QftError::InvalidDigits(digits));
        }
        let size = register_size(radix, digits)?;
        if amplitudes.len() != size {
            return Err(QftError::DimensionMismatch(format!(
                "{} amplitudes for a register of size {size}",
                amplitudes.len()
            )));
        }
        check_finite(&amplitudes)?;
        let norm_sqr: f64 = amplitudes.iter().map(Complex::norm_sqr).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(QftError::NormViolation(norm_sqr));
        }
        Ok(Self {
            radix,
            digits,
            amplitudes,
        })
    }

    /// The computational basis state `|index>`.
    pub fn basis(radix: usize, digits: usize, index: usize) -> Result<Self> {
        if radix < 2 {
            return Err(QftError::InvalidRadix(radix));
        }
        let size = register_size(radix, digits)?;
        if index >= size {
            return Err(QftError::IndexOutOfRange { index, size });
        }
        let mut amplitudes = vec![Complex::new(0.0, 0.0); size];
        amplitudes[index] = Complex::new(1.0, 0.0);
        Self::new(radix, digits, amplitudes)
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vector_norm(&self.amplitudes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn ch3_numerator() -> ComplexMatrix {
        let a = Complex::from_polar(1.0, -2.0 * PI / 3.0);
        let one = c(1.0, 0.0);
        ComplexMatrix::new(3, 3, vec![one, one, one, one, a, a * a, one, a * a, a]).unwrap()
    }

    fn sample_4x4() -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |r, k| {
            c(
                (r * 7 + k * 3) as f64 * 0.37 - 1.1,
                (r as f64 - k as f64).sin(),
            )
        })
    }

    #[test]
    fn adjoint_of_ch_numerator_conjugates_roots() {
        let a = Complex::from_polar(1.0, -2.0 * PI / 3.0);
        let one = c(1.0, 0.0);
        let expected = ComplexMatrix::new(
            3,
            3,
            vec![one, one, one, one, a.conj(), a, one, a, a.conj()],
        )
        .unwrap();
        let adj = ch3_numerator().adjoint();
        assert!(adj.max_entry_distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn adjoint_identity_and_involution() {
        let id = ComplexMatrix::identity(5);
        assert_eq!(id.adjoint(), id);
        let m = sample_4x4();
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn adjoint_transposes_dimensions() {
        let m = ComplexMatrix::from_fn(2, 3, |r, k| c(r as f64, k as f64));
        let adj = m.adjoint();
        assert_eq!((adj.rows(), adj.cols()), (3, 2));
        assert_eq!(adj.get(2, 1), c(1.0, -2.0));
    }

    #[test]
    fn kron_of_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_left_factor_is_most_significant() {
        let w = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)],
        )
        .unwrap();
        let i2 = ComplexMatrix::identity(2);
        let k = w.kron(&i2).unwrap();
        // index 2 = digit 1 set in the most significant (left) position
        assert_eq!(k.get(0, 2), c(2.0, 0.0));
        assert_eq!(k.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn kron_hadamards_on_zero_is_uniform() {
        let s = FRAC_1_SQRT_2;
        let w2 =
            ComplexMatrix::new(2, 2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]).unwrap();
        let out = w2
            .kron(&w2)
            .unwrap()
            .mul_vec(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        for v in out {
            assert!((v - c(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn kron_rejects_non_square() {
        let m = ComplexMatrix::from_fn(2, 3, |_, _| c(1.0, 0.0));
        let err = m.kron(&ComplexMatrix::identity(2)).unwrap_err();
        assert_eq!(err, QftError::NotSquare { rows: 2, cols: 3 });
    }

    #[test]
    fn kron_is_associative() {
        let a = sample_4x4();
        let b = ch3_numerator();
        let cm = ComplexMatrix::identity(2).scale(c(0.0, 1.0));
        let left = a.kron(&b).unwrap().kron(&cm).unwrap();
        let right = a.kron(&b.kron(&cm).unwrap()).unwrap();
        assert!(left.max_entry_distance(&right).unwrap() <= 1e-12);
    }

    #[test]
    fn matmul_identity_and_mismatch() {
        let m = sample_4x4();
        assert_eq!(m.matmul(&ComplexMatrix::identity(4)).unwrap(), m);
        assert!(matches!(
            m.matmul(&ComplexMatrix::identity(3)),
            Err(QftError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn ch_times_adjoint_is_identity() {
        let ch = ch3_numerator().scale(c(1.0 / 3f64.sqrt(), 0.0));
        let prod = ch.matmul(&ch.adjoint()).unwrap();
        assert!(
            prod.max_entry_distance(&ComplexMatrix::identity(3))
                .unwrap()
                <= 1e-12
        );
    }

    #[test]
    fn unitarity_checks() {
        assert!(ComplexMatrix::identity(6).is_unitary(1e-12));
        let ones = ComplexMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        assert!(!ones.is_unitary(1e-10));
        // A * A^dagger = 2 * ones, so the residual is |2 - 1| on the diagonal.
        assert_eq!(ones.unitarity_residual(), Some(2.0));
        let rect = ComplexMatrix::from_fn(2, 3, |_, _| c(1.0, 0.0));
        assert!(!rect.is_unitary(1.0));
    }

    #[test]
    fn distance_basics() {
        let m = sample_4x4();
        assert_eq!(m.max_entry_distance(&m).unwrap(), 0.0);
        let shifted = m
            .sub(&ComplexMatrix::identity(4).scale(c(0.0, 3.0)))
            .unwrap();
        assert!((m.max_entry_distance(&shifted).unwrap() - 3.0).abs() < 1e-15);
        assert!(matches!(
            ch3_numerator().max_entry_distance(&ComplexMatrix::identity(2)),
            Err(QftError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn spectral_norm_of_scaled_identities() {
        let n4 = ComplexMatrix::identity(4).spectral_norm(200).unwrap();
        assert!((n4 - 1.0).abs() < 1e-9);
        let n3 = ComplexMatrix::identity(3)
            .scale(c(2.0, 0.0))
            .spectral_norm(DEFAULT_POWER_ITERATIONS)
            .unwrap();
        assert!((n3 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn spectral_norm_rejects_bad_input() {
        assert_eq!(
            ComplexMatrix::identity(2).spectral_norm(0),
            Err(QftError::InvalidIterations)
        );
        assert!(ComplexMatrix::from_fn(2, 3, |_, _| c(1.0, 0.0))
            .spectral_norm(10)
            .is_err());
    }

    #[test]
    fn constructor_rejects_non_finite_and_bad_length() {
        assert_eq!(
            ComplexMatrix::new(1, 2, vec![c(0.0, 0.0), c(f64::NAN, 0.0)]),
            Err(QftError::NonFinite(1))
        );
        assert!(ComplexMatrix::new(2, 2, vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn state_vector_validation() {
        let s = StateVector::basis(3, 2, 5).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.amplitudes()[5], c(1.0, 0.0));
        assert!(matches!(
            StateVector::new(2, 1, vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(QftError::NormViolation(_))
        ));
        assert!(matches!(
            StateVector::new(2, 2, vec![c(1.0, 0.0)]),
            Err(QftError::DimensionMismatch(_))
        ));
        assert_eq!(StateVector::basis(1, 2, 0), Err(QftError::InvalidRadix(1)));
        assert!(StateVector::basis(2, 2, 4).is_err());
    }

    #[test]
    fn digit_round_trip() {
        assert_eq!(index_to_digits(5, 3, 2), vec![2, 1]);
        assert_eq!(digits_to_index(&[2, 1], 3), 5);
        for i in 0..81 {
            assert_eq!(digits_to_index(&index_to_digits(i, 3, 4), 3), i);
        }
    }
}
