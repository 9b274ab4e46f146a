use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense density matrix over up to a handful of qubits, row-major in the
/// computational basis with qubit `k` at bit `k` of the index.
///
/// The chains checked here never exceed 6 qubits (a 64x64 matrix), so there
/// is no sparse machinery; every operation is written directly against the
/// channel definitions so it can serve as an independent reference for the
/// closed-form model.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Projector onto the two-qubit target Bell state `(|00> + |11>)/sqrt(2)`.
    pub fn bell_pair() -> Self {
        let mut dm = DensityMatrix::zeros(2);
        let half = Complex64::new(0.5, 0.0);
        for (row, col) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            dm.set(row, col, half);
        }
        dm
    }

    fn zeros(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        DensityMatrix {
            num_qubits,
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest `|rho[r,c] - conj(rho[c,r])|` over all entries.
    pub fn hermiticity_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for row in 0..self.dim {
            for col in 0..self.dim {
                worst = worst.max((self.get(row, col) - self.get(col, row).conj()).norm());
            }
        }
        worst
    }

    /// Tensor product appending `other`'s qubits above this matrix's
    /// (`other`'s qubit 0 becomes qubit `self.num_qubits`).
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut out = DensityMatrix::zeros(self.num_qubits + other.num_qubits);
        for hi_row in 0..other.dim {
            for hi_col in 0..other.dim {
                let factor = other.get(hi_row, hi_col);
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for lo_row in 0..self.dim {
                    for lo_col in 0..self.dim {
                        out.set(
                            hi_row * self.dim + lo_row,
                            hi_col * self.dim + lo_col,
                            factor * self.get(lo_row, lo_col),
                        );
                    }
                }
            }
        }
        out
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Phase-damping of one qubit held in memory for `time_s`:
    /// `rho -> (1 - p) rho + p Z rho Z` with `p = (1 - exp(-t/T_dp)) / 2`.
    ///
    /// Entries whose row and column disagree on the qubit's bit scale by
    /// `1 - 2p`; everything else is untouched, so trace and Hermiticity are
    /// preserved exactly.
    pub fn apply_dephasing(&mut self, qubit: usize, time_s: f64, dephasing_time_s: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        if time_s.is_nan() || time_s < 0.0 {
            return Err(Error::invalid(
                "time_s",
                format!("must be non-negative (got {time_s})"),
            ));
        }
        if dephasing_time_s.is_nan() || dephasing_time_s <= 0.0 {
            return Err(Error::invalid(
                "dephasing_time_s",
                format!("must be positive (got {dephasing_time_s})"),
            ));
        }
        let flip_prob = (1.0 - (-time_s / dephasing_time_s).exp()) / 2.0;
        let scale = 1.0 - 2.0 * flip_prob;
        let mask = 1usize << qubit;
        for row in 0..self.dim {
            for col in 0..self.dim {
                if (row & mask) != (col & mask) {
                    self.data[row * self.dim + col] *= scale;
                }
            }
        }
        Ok(())
    }

    /// Two-qubit depolarizing channel modelling an imperfect Bell-state
    /// measurement: `lambda rho + (1 - lambda)/4 (tr_{i,j} rho) (x) 1_{i,j}`.
    pub fn apply_depolarizing_2q(&mut self, qubits: (usize, usize), lambda_bsm: f64) -> Result<()> {
        let (i, j) = qubits;
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        if i == j {
            return Err(Error::invalid("qubits", "depolarizing targets must be distinct".to_string()));
        }
        if !(0.0..=1.0).contains(&lambda_bsm) {
            return Err(Error::invalid(
                "lambda_bsm",
                format!("must lie in [0, 1] (got {lambda_bsm})"),
            ));
        }

        let reduced = self.partial_trace_pair(i, j);
        let mask_i = 1usize << i;
        let mask_j = 1usize << j;
        let mixed_weight = (1.0 - lambda_bsm) / 4.0;
        for row in 0..self.dim {
            for col in 0..self.dim {
                let mut value = lambda_bsm * self.get(row, col);
                if (row & mask_i) == (col & mask_i) && (row & mask_j) == (col & mask_j) {
                    value += mixed_weight
                        * reduced.get(strip_pair_bits(row, i, j), strip_pair_bits(col, i, j));
                }
                self.set(row, col, value);
            }
        }
        Ok(())
    }

    /// Partial trace over qubits `i` and `j`, keeping the remaining qubits
    /// in their original relative order.
    fn partial_trace_pair(&self, i: usize, j: usize) -> DensityMatrix {
        let mut out = DensityMatrix::zeros(self.num_qubits - 2);
        for row in 0..out.dim {
            for col in 0..out.dim {
                let mut sum = Complex64::new(0.0, 0.0);
                for bi in 0..2usize {
                    for bj in 0..2usize {
                        sum += self.get(
                            insert_pair_bits(row, i, bi, j, bj),
                            insert_pair_bits(col, i, bi, j, bj),
                        );
                    }
                }
                out.set(row, col, sum);
            }
        }
        out
    }

    /// Ideal Bell-state measurement on qubits `i` and `j` with the target
    /// outcome: project onto the Bell state, trace the measured qubits out,
    /// and renormalize to unit trace (other outcomes are locally correctable,
    /// so this branch carries the fidelity statistics).
    pub fn bsm_project(&self, qubits: (usize, usize)) -> Result<DensityMatrix> {
        let (i, j) = qubits;
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        if i == j {
            return Err(Error::invalid("qubits", "measurement targets must be distinct".to_string()));
        }

        let mut out = DensityMatrix::zeros(self.num_qubits - 2);
        for row in 0..out.dim {
            for col in 0..out.dim {
                let mut sum = Complex64::new(0.0, 0.0);
                // <bell| rho |bell> over the measured pair: bits (0,0) and (1,1)
                for row_bit in 0..2usize {
                    for col_bit in 0..2usize {
                        sum += self.get(
                            insert_pair_bits(row, i, row_bit, j, row_bit),
                            insert_pair_bits(col, i, col_bit, j, col_bit),
                        );
                    }
                }
                out.set(row, col, 0.5 * sum);
            }
        }

        let norm = out.trace().re;
        if norm <= 1e-15 {
            return Err(Error::DegenerateProjection);
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        for value in &mut out.data {
            *value *= inv;
        }
        Ok(out)
    }

    /// Overlap with the two-qubit target Bell state.
    pub fn fidelity_phi_plus(&self) -> Result<f64> {
        if self.num_qubits != 2 {
            return Err(Error::LengthMismatch {
                what: "fidelity target register",
                expected: 2,
                actual: self.num_qubits,
            });
        }
        Ok(0.5 * (self.get(0, 0) + self.get(0, 3) + self.get(3, 0) + self.get(3, 3)).re)
    }
}

/// Remove bits `i` and `j` from `index`, compacting the rest.
fn strip_pair_bits(index: usize, i: usize, j: usize) -> usize {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let low = index & ((1 << lo) - 1);
    let mid = (index >> (lo + 1)) & ((1 << (hi - lo - 1)) - 1);
    let high = index >> (hi + 1);
    low | (mid << lo) | (high << (hi - 1))
}

/// Insert bit values `bi` at position `i` and `bj` at position `j` into a
/// compact index over the remaining qubits.
fn insert_pair_bits(compact: usize, i: usize, bi: usize, j: usize, bj: usize) -> usize {
    let (lo, lo_bit, hi, hi_bit) = if i < j { (i, bi, j, bj) } else { (j, bj, i, bi) };
    let low = compact & ((1 << lo) - 1);
    let mid = (compact >> lo) & ((1 << (hi - lo - 1)) - 1);
    let high = compact >> (hi - 1);
    low | (lo_bit << lo) | (mid << (lo + 1)) | (hi_bit << hi) | (high << (hi + 1))
}
