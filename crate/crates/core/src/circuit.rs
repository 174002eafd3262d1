//! Circuit IR over a register of `n` radix-`q` digits, the exact and pruned
//! QFT builders, reference transform matrices and a state-vector simulator.
//!
//! Digit 0 is the least significant. The QFT builder processes targets from
//! digit `n - 1` down to 0, so every control digit still holds its input
//! value when its controlled phase fires. The output digit order is reversed,
//! which the circuit records as a final index permutation.

use std::fmt;

use crate::error::{QftError, Result};
use crate::gates::{chrestenson_gate, controlled_phase, root_of_unity};
use crate::numerics::{register_size, Complex, ComplexMatrix, StateVector};

/// Largest register dimension for which full matrices are built by default.
pub const DEFAULT_DIM_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateOp {
    ChrestensonOn {
        target: usize,
    },
    /// Basis state with control value `c` and target value `t` picks up
    /// `exp(-2*pi*i*c*t / q^denom_exp)`.
    ControlledPhase {
        control: usize,
        target: usize,
        denom_exp: u32,
    },
}

impl GateOp {
    pub fn target(&self) -> usize {
        match *self {
            GateOp::ChrestensonOn { target } | GateOp::ControlledPhase { target, .. } => target,
        }
    }

    pub fn is_chrestenson(&self) -> bool {
        matches!(self, GateOp::ChrestensonOn { .. })
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateOp::ChrestensonOn { target } => write!(f, "CH[{target}]"),
            GateOp::ControlledPhase {
                control,
                target,
                denom_exp,
            } => write!(f, "R[{control}->{target}, q^{denom_exp}]"),
        }
    }
}

/// Pruning knob for the approximate QFT: a controlled phase with denominator
/// exponent `s` is kept iff `s <= depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeepDepth {
    #[default]
    Unbounded,
    Limit(usize),
}

impl KeepDepth {
    pub fn limit(depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(QftError::InvalidKeepDepth(depth));
        }
        Ok(KeepDepth::Limit(depth))
    }

    pub fn keeps(&self, denom_exp: u32) -> bool {
        match *self {
            KeepDepth::Unbounded => true,
            KeepDepth::Limit(d) => denom_exp as usize <= d,
        }
    }

    /// Number of least significant digits whose controlled phases are
    /// dropped from the bracket of fraction length `len`.
    pub fn dropped_count(&self, len: usize) -> usize {
        match *self {
            KeepDepth::Unbounded => 0,
            KeepDepth::Limit(d) => len.saturating_sub(d),
        }
    }
}

impl fmt::Display for KeepDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeepDepth::Unbounded => f.write_str("unbounded"),
            KeepDepth::Limit(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    radix: usize,
    digits: usize,
    ops: Vec<GateOp>,
    reverse_output_digits: bool,
}

impl Circuit {
    pub fn new(
        radix: usize,
        digits: usize,
        ops: Vec<GateOp>,
        reverse_output_digits: bool,
    ) -> Result<Self> {
        check_register(radix, digits)?;
        for op in &ops {
            match *op {
                GateOp::ChrestensonOn { target } => {
                    if target >= digits {
                        return Err(QftError::InvalidGate(format!(
                            "{op}: target out of range for {digits} digits"
                        )));
                    }
                }
                GateOp::ControlledPhase {
                    control,
                    target,
                    denom_exp,
                } => {
                    if control >= digits || target >= digits {
                        return Err(QftError::InvalidGate(format!(
                            "{op}: digit out of range for {digits} digits"
                        )));
                    }
                    if control == target {
                        return Err(QftError::InvalidGate(format!(
                            "{op}: control equals target"
                        )));
                    }
                    if denom_exp < 2 {
                        return Err(QftError::InvalidDenominator {
                            got: denom_exp,
                            min: 2,
                        });
                    }
                }
            }
        }
        Ok(Self {
            radix,
            digits,
            ops,
            reverse_output_digits,
        })
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn gate_count(&self) -> usize {
        self.ops.len()
    }

    pub fn chrestenson_count(&self) -> usize {
        self.ops.iter().filter(|op| op.is_chrestenson()).count()
    }

    pub fn reverse_output_digits(&self) -> bool {
        self.reverse_output_digits
    }

    pub fn dimension(&self) -> usize {
        register_size(self.radix, self.digits).expect("validated at construction")
    }
}

fn check_register(radix: usize, digits: usize) -> Result<usize> {
    if radix < 2 {
        return Err(QftError::InvalidRadix(radix));
    }
    if digits == 0 {
        return Err(QftError::InvalidDigits(digits));
    }
    register_size(radix, digits)
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(QftError::DimensionCapExceeded { dim, cap });
    }
    Ok(())
}

/// The (possibly pruned) QFT circuit over `q^n` elements.
pub fn build_qft_circuit(q: usize, n: usize, keep_depth: KeepDepth) -> Result<Circuit> {
    check_register(q, n)?;
    if let KeepDepth::Limit(0) = keep_depth {
        return Err(QftError::InvalidKeepDepth(0));
    }
    let mut ops = Vec::with_capacity(n * (n + 1) / 2);
    for target in (0..n).rev() {
        ops.push(GateOp::ChrestensonOn { target });
        for control in (0..target).rev() {
            let denom_exp = (target - control + 1) as u32;
            if keep_depth.keeps(denom_exp) {
                ops.push(GateOp::ControlledPhase {
                    control,
                    target,
                    denom_exp,
                });
            }
        }
    }
    Circuit::new(q, n, ops, true)
}

/// `n` parallel Chrestenson gates: the transform over `(Z_q)^n`.
pub fn build_walsh_hadamard_transform_circuit(q: usize, n: usize) -> Result<Circuit> {
    check_register(q, n)?;
    let ops = (0..n)
        .map(|target| GateOp::ChrestensonOn { target })
        .collect();
    Circuit::new(q, n, ops, false)
}

/// Entry `(y, x) = exp(-2*pi*i*x*y/t) / sqrt(t)`.
pub fn dft_matrix(t: usize) -> Result<ComplexMatrix> {
    let root = root_of_unity(t)?;
    let norm = (1.0 / t as f64).sqrt();
    let table: Vec<Complex> = (0..t).map(|k| root.pow(k) * norm).collect();
    // x*y reduced mod t keeps the angle exact for large t
    Ok(ComplexMatrix::from_fn(t, t, |y, x| {
        table[((x as u128 * y as u128) % t as u128) as usize]
    }))
}

/// `n`-fold Kronecker power of the Chrestenson gate.
pub fn chrestenson_transform_matrix(q: usize, n: usize, dim_cap: usize) -> Result<ComplexMatrix> {
    let dim = check_register(q, n)?;
    check_cap(dim, dim_cap)?;
    let ch = chrestenson_gate(q)?;
    let mut acc = ch.clone();
    for _ in 1..n {
        acc = acc.kron(&ch)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let size = mapping.len();
        let mut seen = vec![false; size];
        for &m in &mapping {
            if m >= size || seen[m] {
                return Err(QftError::InvalidGate(format!(
                    "mapping is not a bijection on [0, {size})"
                )));
            }
            seen[m] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(size: usize) -> Self {
        Self {
            mapping: (0..size).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.mapping.len()
    }

    pub fn map(&self, index: usize) -> usize {
        self.mapping[index]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            mapping: other.mapping.iter().map(|&i| self.mapping[i]).collect(),
        }
    }

    /// Moves the value at position `i` to position `map(i)`.
    pub fn apply<T: Copy>(&self, values: &[T]) -> Vec<T> {
        let mut out = values.to_vec();
        for (i, &v) in values.iter().enumerate() {
            out[self.mapping[i]] = v;
        }
        out
    }
}

/// Maps the index with digits `(x_{n-1}, ..., x_0)` to the index with digits
/// `(x_0, ..., x_{n-1})`.
pub fn digit_reversal_perm(q: usize, n: usize) -> Result<Permutation> {
    let size = check_register(q, n)?;
    let mapping = (0..size)
        .map(|i| {
            let mut rest = i;
            let mut rev = 0;
            for _ in 0..n {
                rev = rev * q + rest % q;
                rest /= q;
            }
            rev
        })
        .collect();
    Ok(Permutation { mapping })
}

fn apply_chrestenson(
    amps: &mut [Complex],
    q: usize,
    stride: usize,
    gate: &ComplexMatrix,
    scratch: &mut Vec<Complex>,
) {
    let block = stride * q;
    for base in (0..amps.len()).step_by(block) {
        let chunk = &mut amps[base..base + block];
        scratch.clear();
        scratch.extend_from_slice(chunk);
        for (j, dst) in chunk.chunks_exact_mut(stride).enumerate() {
            dst.fill(Complex::new(0.0, 0.0));
            for (&g, src) in gate.row(j).iter().zip(scratch.chunks_exact(stride)) {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += g * s;
                }
            }
        }
    }
}

/// Index = outer + d_hi * hi_stride + mid + d_lo * lo_stride + inner; only
/// entries with both digits nonzero pick up a phase, `table[d_hi * d_lo]`.
fn apply_controlled_phase(
    amps: &mut [Complex],
    q: usize,
    lo_stride: usize,
    hi_stride: usize,
    table: &[Complex],
) {
    for outer in (0..amps.len()).step_by(hi_stride * q) {
        for d_hi in 1..q {
            for mid in (0..hi_stride).step_by(lo_stride * q) {
                for d_lo in 1..q {
                    let phase = table[d_hi * d_lo];
                    let start = outer + d_hi * hi_stride + mid + d_lo * lo_stride;
                    for amp in &mut amps[start..start + lo_stride] {
                        *amp *= phase;
                    }
                }
            }
        }
    }
}

enum Step {
    Chrestenson {
        stride: usize,
    },
    Phase {
        lo_stride: usize,
        hi_stride: usize,
        table: Vec<Complex>,
    },
}

/// A circuit with its gate matrix, phase tables and output permutation
/// precomputed, for repeated simulation.
struct Program {
    radix: usize,
    digits: usize,
    gate: ComplexMatrix,
    steps: Vec<Step>,
    reversal: Option<Permutation>,
}

impl Program {
    fn new(circuit: &Circuit) -> Result<Self> {
        let q = circuit.radix();
        let steps = circuit
            .ops()
            .iter()
            .map(|op| match *op {
                GateOp::ChrestensonOn { target } => Step::Chrestenson {
                    stride: q.pow(target as u32),
                },
                GateOp::ControlledPhase {
                    control,
                    target,
                    denom_exp,
                } => Step::Phase {
                    lo_stride: q.pow(control.min(target) as u32),
                    hi_stride: q.pow(control.max(target) as u32),
                    table: (0..(q - 1) * (q - 1) + 1)
                        .map(|ct| controlled_phase(q, denom_exp, ct, 1))
                        .collect(),
                },
            })
            .collect();
        let reversal = if circuit.reverse_output_digits() {
            Some(digit_reversal_perm(q, circuit.digits())?)
        } else {
            None
        };
        Ok(Self {
            radix: q,
            digits: circuit.digits(),
            gate: chrestenson_gate(q)?,
            steps,
            reversal,
        })
    }

    fn run(&self, amps: &mut [Complex], scratch: &mut Vec<Complex>) -> Vec<Complex> {
        for step in &self.steps {
            match step {
                Step::Chrestenson { stride } => {
                    apply_chrestenson(amps, self.radix, *stride, &self.gate, scratch)
                }
                Step::Phase {
                    lo_stride,
                    hi_stride,
                    table,
                } => apply_controlled_phase(amps, self.radix, *lo_stride, *hi_stride, table),
            }
        }
        match &self.reversal {
            Some(p) => p.apply(amps),
            None => amps.to_vec(),
        }
    }
}

/// Runs the circuit gate by gate on `state`, then applies the output digit
/// reversal if the circuit requests it.
pub fn apply_circuit(circuit: &Circuit, state: &StateVector) -> Result<StateVector> {
    if state.radix() != circuit.radix() || state.digits() != circuit.digits() {
        return Err(QftError::DimensionMismatch(format!(
            "state is {}^{} but circuit is {}^{}",
            state.radix(),
            state.digits(),
            circuit.radix(),
            circuit.digits()
        )));
    }
    let program = Program::new(circuit)?;
    let mut amps = state.amplitudes().to_vec();
    let out = program.run(&mut amps, &mut Vec::new());
    StateVector::new(program.radix, program.digits, out)
}

/// Compiles the circuit into its unitary by simulating every basis state.
pub fn circuit_to_matrix(circuit: &Circuit, dim_cap: usize) -> Result<ComplexMatrix> {
    let dim = circuit.dimension();
    check_cap(dim, dim_cap)?;
    let program = Program::new(circuit)?;
    let mut entries = vec![Complex::new(0.0, 0.0); dim * dim];
    let mut amps = vec![Complex::new(0.0, 0.0); dim];
    let mut scratch = Vec::new();
    for x in 0..dim {
        amps.fill(Complex::new(0.0, 0.0));
        amps[x] = Complex::new(1.0, 0.0);
        let column = program.run(&mut amps, &mut scratch);
        for (y, amp) in column.into_iter().enumerate() {
            entries[y * dim + x] = amp;
        }
    }
    ComplexMatrix::new(dim, dim, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_digit_qft_is_chrestenson() {
        let c = build_qft_circuit(3, 1, KeepDepth::Unbounded).unwrap();
        assert_eq!(c.ops(), &[GateOp::ChrestensonOn { target: 0 }]);
        let m = circuit_to_matrix(&c, DEFAULT_DIM_CAP).unwrap();
        assert!(m.max_entry_distance(&chrestenson_gate(3).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn gate_lists() {
        let exact = build_qft_circuit(3, 3, KeepDepth::Unbounded).unwrap();
        assert_eq!(exact.gate_count(), 6);
        let pruned = build_qft_circuit(3, 3, KeepDepth::limit(2).unwrap()).unwrap();
        assert_eq!(
            pruned.ops(),
            &[
                GateOp::ChrestensonOn { target: 2 },
                GateOp::ControlledPhase {
                    control: 1,
                    target: 2,
                    denom_exp: 2
                },
                GateOp::ChrestensonOn { target: 1 },
                GateOp::ControlledPhase {
                    control: 0,
                    target: 1,
                    denom_exp: 2
                },
                GateOp::ChrestensonOn { target: 0 },
            ]
        );
        let dropped: Vec<_> = exact
            .ops()
            .iter()
            .filter(|op| !pruned.ops().contains(op))
            .collect();
        assert_eq!(
            dropped,
            vec![&GateOp::ControlledPhase {
                control: 0,
                target: 2,
                denom_exp: 3
            }]
        );
    }

    #[test]
    fn builder_rejects_bad_parameters() {
        assert_eq!(
            build_qft_circuit(1, 3, KeepDepth::Unbounded),
            Err(QftError::InvalidRadix(1))
        );
        assert_eq!(
            build_qft_circuit(2, 0, KeepDepth::Unbounded),
            Err(QftError::InvalidDigits(0))
        );
        assert_eq!(
            build_qft_circuit(2, 3, KeepDepth::Limit(0)),
            Err(QftError::InvalidKeepDepth(0))
        );
        assert_eq!(KeepDepth::limit(0), Err(QftError::InvalidKeepDepth(0)));
        assert!(build_walsh_hadamard_transform_circuit(1, 2).is_err());
    }

    #[test]
    fn circuit_validation() {
        let bad = [
            GateOp::ChrestensonOn { target: 3 },
            GateOp::ControlledPhase {
                control: 1,
                target: 1,
                denom_exp: 2,
            },
            GateOp::ControlledPhase {
                control: 0,
                target: 5,
                denom_exp: 2,
            },
        ];
        for op in bad {
            assert!(matches!(
                Circuit::new(2, 3, vec![op], false),
                Err(QftError::InvalidGate(_))
            ));
        }
        assert!(matches!(
            Circuit::new(
                2,
                3,
                vec![GateOp::ControlledPhase {
                    control: 0,
                    target: 1,
                    denom_exp: 1
                }],
                false
            ),
            Err(QftError::InvalidDenominator { got: 1, min: 2 })
        ));
    }

    #[test]
    fn walsh_hadamard_circuit() {
        let c = build_walsh_hadamard_transform_circuit(2, 3).unwrap();
        assert_eq!(c.gate_count(), 3);
        assert_eq!(c.chrestenson_count(), 3);
        assert!(!c.reverse_output_digits());
        // single digit: the reversal is the identity, so the matrices agree
        for q in 2..=5 {
            let wht = circuit_to_matrix(&build_walsh_hadamard_transform_circuit(q, 1).unwrap(), 64)
                .unwrap();
            let qft =
                circuit_to_matrix(&build_qft_circuit(q, 1, KeepDepth::Unbounded).unwrap(), 64)
                    .unwrap();
            assert_eq!(wht, qft);
        }
    }

    #[test]
    fn compiled_walsh_hadamard_is_kron_power() {
        let ch = chrestenson_gate(3).unwrap();
        let m =
            circuit_to_matrix(&build_walsh_hadamard_transform_circuit(3, 2).unwrap(), 81).unwrap();
        assert!(m.max_entry_distance(&ch.kron(&ch).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn dft_small_cases() {
        let w2 = crate::gates::walsh_hadamard_gate();
        assert!(dft_matrix(2).unwrap().max_entry_distance(&w2).unwrap() < 1e-15);
        let ch = chrestenson_gate(3).unwrap();
        assert!(dft_matrix(3).unwrap().max_entry_distance(&ch).unwrap() < 1e-15);
        let d9 = dft_matrix(9).unwrap();
        for x in 0..9 {
            let expected = Complex::from_polar(1.0 / 3.0, -2.0 * PI * x as f64 / 9.0);
            assert!((d9.get(1, x) - expected).norm() < 1e-15);
        }
        assert!(dft_matrix(1).is_err());
    }

    #[test]
    fn chrestenson_transform_entries() {
        let ch1 = chrestenson_transform_matrix(3, 1, 4096).unwrap();
        assert_eq!(ch1, chrestenson_gate(3).unwrap());
        let w = chrestenson_transform_matrix(2, 2, 4096).unwrap();
        assert!((w.get(3, 3) - Complex::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(
            chrestenson_transform_matrix(3, 8, 4096),
            Err(QftError::DimensionCapExceeded {
                dim: 6561,
                cap: 4096
            })
        );
    }

    #[test]
    fn digit_reversal() {
        assert_eq!(digit_reversal_perm(5, 1).unwrap(), Permutation::identity(5));
        let p = digit_reversal_perm(3, 2).unwrap();
        assert_eq!(p.map(5), 7);
        for (q, n) in [(2, 5), (3, 3), (4, 2), (5, 3)] {
            let p = digit_reversal_perm(q, n).unwrap();
            assert_eq!(p.compose(&p), Permutation::identity(p.size()));
            assert!(Permutation::new(p.mapping().to_vec()).is_ok());
        }
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn simulator_on_basis_states() {
        let s = 1.0 / 2f64.sqrt();
        let wh = build_walsh_hadamard_transform_circuit(2, 1).unwrap();
        let out = apply_circuit(&wh, &StateVector::basis(2, 1, 0).unwrap()).unwrap();
        for a in out.amplitudes() {
            assert!((a - Complex::new(s, 0.0)).norm() < 1e-15);
        }

        let ch = build_walsh_hadamard_transform_circuit(3, 1).unwrap();
        let out = apply_circuit(&ch, &StateVector::basis(3, 1, 1).unwrap()).unwrap();
        let a = root_of_unity(3).unwrap().value();
        let expected = [Complex::new(1.0, 0.0), a, a * a];
        for (got, want) in out.amplitudes().iter().zip(expected) {
            assert!((got - want / 3f64.sqrt()).norm() < 1e-15);
        }

        let qft = build_qft_circuit(3, 2, KeepDepth::Unbounded).unwrap();
        let d9 = dft_matrix(9).unwrap();
        for x in 0..9 {
            let out = apply_circuit(&qft, &StateVector::basis(3, 2, x).unwrap()).unwrap();
            for (y, amp) in out.amplitudes().iter().enumerate() {
                assert!((amp - d9.get(y, x)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn simulator_rejects_shape_mismatch() {
        let c = build_qft_circuit(3, 2, KeepDepth::Unbounded).unwrap();
        assert!(matches!(
            apply_circuit(&c, &StateVector::basis(2, 2, 0).unwrap()),
            Err(QftError::DimensionMismatch(_))
        ));
        assert!(matches!(
            apply_circuit(&c, &StateVector::basis(3, 3, 0).unwrap()),
            Err(QftError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn empty_circuit_compiles_to_identity() {
        let c = Circuit::new(3, 2, vec![], false).unwrap();
        assert_eq!(
            circuit_to_matrix(&c, DEFAULT_DIM_CAP).unwrap(),
            ComplexMatrix::identity(9)
        );
        let big = Circuit::new(2, 13, vec![], false).unwrap();
        assert_eq!(
            circuit_to_matrix(&big, DEFAULT_DIM_CAP),
            Err(QftError::DimensionCapExceeded {
                dim: 8192,
                cap: 4096
            })
        );
    }

    #[test]
    fn keep_depth_dropped_count() {
        assert_eq!(KeepDepth::Unbounded.dropped_count(7), 0);
        assert_eq!(KeepDepth::Limit(2).dropped_count(3), 1);
        assert_eq!(KeepDepth::Limit(5).dropped_count(3), 0);
        assert_eq!(KeepDepth::Limit(1).dropped_count(4), 3);
    }
}
