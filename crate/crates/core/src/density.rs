//! Three-qubit density matrices and subsystem operations.
//!
//! Qubit 1 is the leftmost tensor factor: basis index `b1*4 + b2*2 + b3`, so
//! the computational basis runs |000⟩, |001⟩, …, |111⟩.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, ZERO};

pub const NUM_QUBITS: usize = 3;
pub const DIM: usize = 8;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = -1e-10;

/// Outcome of [`validate_density`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub dimension: (usize, usize),
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    pub passed: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{} matrix, hermiticity deviation {:.3e}, trace deviation {:.3e}, min eigenvalue {:.3e} ({})",
            self.dimension.0,
            self.dimension.1,
            self.hermiticity_deviation,
            self.trace_deviation,
            self.min_eigenvalue,
            if self.passed { "pass" } else { "fail" }
        )
    }
}

/// Checks the three density-matrix invariants on an 8x8 matrix: Hermitian to
/// 1e-12, unit trace to 1e-12 and no eigenvalue below -1e-10.
pub fn validate_density(m: &ComplexMatrix) -> ValidationReport {
    let dimension = (m.rows(), m.cols());
    if dimension != (DIM, DIM) {
        return ValidationReport {
            dimension,
            hermiticity_deviation: f64::INFINITY,
            trace_deviation: f64::INFINITY,
            min_eigenvalue: f64::NEG_INFINITY,
            passed: false,
        };
    }
    let hermiticity_deviation = m.hermiticity_deviation();
    let tr = m.trace();
    let trace_deviation = (tr - Complex64::new(1.0, 0.0)).norm();
    let hermitian_part = &(m + &m.adjoint()).scale_real(0.5);
    let min_eigenvalue = hermitian_eigenvalues(hermitian_part)
        .map(|ev| ev[0])
        .unwrap_or(f64::NEG_INFINITY);
    let passed = hermiticity_deviation <= HERMITIAN_TOL
        && trace_deviation <= TRACE_TOL
        && min_eigenvalue >= POSITIVITY_TOL;
    ValidationReport {
        dimension,
        hermiticity_deviation,
        trace_deviation,
        min_eigenvalue,
        passed,
    }
}

/// A validated three-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix3Q {
    matrix: ComplexMatrix,
}

impl DensityMatrix3Q {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let report = validate_density(&matrix);
        if !report.passed {
            return Err(Error::InvalidDensity(report));
        }
        Ok(Self { matrix })
    }

    /// Skips validation. Callers must already hold a physical state.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (DIM, DIM));
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        crate::linalg::purity(&self.matrix).expect("8x8 is square")
    }

    /// True when `Tr ρ² = 1` within `tol`.
    pub fn is_pure(&self, tol: f64) -> bool {
        (1.0 - self.purity()).abs() <= tol
    }

    /// `Tr(ρ O)` for an 8x8 operator.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        self.matrix.trace_product(op)
    }

    /// Probability `⟨v|ρ|v⟩` of a normalized 8-vector.
    pub fn probability(&self, v: &[Complex64]) -> f64 {
        self.matrix.expectation(v).expect("8-vector").re
    }

    /// `Σ_k w_k ρ_k` for weights summing to one; the result is validated.
    pub fn convex_mixture(parts: &[(f64, &DensityMatrix3Q)]) -> Result<Self> {
        let mut acc = ComplexMatrix::zeros(DIM, DIM);
        for (w, rho) in parts {
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Self::new(acc)
    }
}

fn check_qubit_set(set: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &q in set {
        if q == 0 || q > n || seen[q - 1] {
            return Err(Error::InvalidSubsystem(set.to_vec()));
        }
        seen[q - 1] = true;
    }
    if set.is_empty() || set.len() >= n {
        return Err(Error::InvalidSubsystem(set.to_vec()));
    }
    Ok(())
}

/// Bit of qubit `q` (1-based) inside an `n`-qubit basis index.
fn bit(index: usize, q: usize, n: usize) -> usize {
    (index >> (n - q)) & 1
}

/// Partial trace over the 1-based qubits in `discard` of a `2^n`-dimensional
/// operator. Kept qubits retain their relative order.
pub fn partial_trace_qubits(m: &ComplexMatrix, n: usize, discard: &[usize]) -> Result<ComplexMatrix> {
    let dim = 1usize << n;
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::Dimension(format!(
            "expected {dim}x{dim} operator for {n} qubits, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    check_qubit_set(discard, n)?;
    let keep: Vec<usize> = (1..=n).filter(|q| !discard.contains(q)).collect();
    let kdim = 1usize << keep.len();
    let sub_index = |index: usize, qubits: &[usize]| -> usize {
        qubits
            .iter()
            .fold(0, |acc, &q| (acc << 1) | bit(index, q, n))
    };
    let mut out = ComplexMatrix::zeros(kdim, kdim);
    for r in 0..dim {
        let r_env = sub_index(r, discard);
        let r_sys = sub_index(r, &keep);
        for c in 0..dim {
            if sub_index(c, discard) != r_env {
                continue;
            }
            out[(r_sys, sub_index(c, &keep))] += m[(r, c)];
        }
    }
    Ok(out)
}

/// Reduced state after tracing out the 1-based qubits in `discard`.
pub fn partial_trace(rho: &DensityMatrix3Q, discard: &[usize]) -> Result<ComplexMatrix> {
    partial_trace_qubits(&rho.matrix, NUM_QUBITS, discard)
}

/// Lifts a `2^k` operator acting on the ordered 1-based `targets` to the full
/// `2^n` space (identity elsewhere).
pub fn embed_operator(op: &ComplexMatrix, n: usize, targets: &[usize]) -> Result<ComplexMatrix> {
    let k = targets.len();
    if op.rows() != 1 << k || op.cols() != 1 << k {
        return Err(Error::Dimension(format!(
            "operator of size {}x{} cannot act on {k} qubits",
            op.rows(),
            op.cols()
        )));
    }
    let mut seen = vec![false; n];
    for &q in targets {
        if q == 0 || q > n || seen[q - 1] {
            return Err(Error::InvalidSubsystem(targets.to_vec()));
        }
        seen[q - 1] = true;
    }
    let rest: Vec<usize> = (1..=n).filter(|q| !targets.contains(q)).collect();
    let dim = 1usize << n;
    let sub = |index: usize, qubits: &[usize]| -> usize {
        qubits
            .iter()
            .fold(0, |acc, &q| (acc << 1) | bit(index, q, n))
    };
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            if sub(r, &rest) == sub(c, &rest) {
                out[(r, c)] = op[(sub(r, targets), sub(c, targets))];
            }
        }
    }
    Ok(out)
}

/// Relabels qubits: new qubit `i` (1-based) is old qubit `perm[i-1]`.
pub fn permute_qubits(rho: &DensityMatrix3Q, perm: [usize; 3]) -> Result<DensityMatrix3Q> {
    let mut sorted = perm;
    sorted.sort_unstable();
    if sorted != [1, 2, 3] {
        return Err(Error::InvalidSubsystem(perm.to_vec()));
    }
    let map = |new_index: usize| -> usize {
        // bit for old qubit perm[i] comes from new qubit i
        let mut old = 0;
        for (i, &old_q) in perm.iter().enumerate() {
            old |= bit(new_index, i + 1, NUM_QUBITS) << (NUM_QUBITS - old_q);
        }
        old
    };
    let mut out = ComplexMatrix::zeros(DIM, DIM);
    for r in 0..DIM {
        for c in 0..DIM {
            out[(r, c)] = rho.matrix[(map(r), map(c))];
        }
    }
    Ok(DensityMatrix3Q::new_unchecked(out))
}

/// Computational basis vector for a bit string like `"010"`.
pub fn basis_ket(bits: &str) -> Vec<Complex64> {
    let index = usize::from_str_radix(bits, 2).expect("binary string");
    let mut v = vec![ZERO; 1 << bits.len()];
    v[index] = Complex64::new(1.0, 0.0);
    v
}
