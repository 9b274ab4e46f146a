use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense pure-state amplitude vector, qubit `k` at bit `k` of the index.
/// Used for the multipartite swap checks, which stay noiseless.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    data: Vec<Complex64>,
}

impl Statevector {
    /// `(|0...0> + |1...1>)/sqrt(2)` on `n` qubits; `ghz(2)` is the Bell pair.
    pub fn ghz(num_qubits: usize) -> Self {
        assert!(num_qubits >= 1);
        let dim = 1usize << num_qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim];
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        data[0] = amp;
        data[dim - 1] = amp;
        Statevector { num_qubits, data }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Tensor product appending `other`'s qubits above this state's.
    pub fn tensor(&self, other: &Statevector) -> Statevector {
        let dim = self.data.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * other.data.len()];
        for (hi, &amp_hi) in other.data.iter().enumerate() {
            for (lo, &amp_lo) in self.data.iter().enumerate() {
                data[hi * dim + lo] = amp_hi * amp_lo;
            }
        }
        Statevector {
            num_qubits: self.num_qubits + other.num_qubits,
            data,
        }
    }

    /// Project qubits `i` and `j` onto the target Bell state, dropping them
    /// from the register; returns the renormalized state and the outcome
    /// probability.
    pub fn project_bell_pair(&self, qubits: (usize, usize)) -> Result<(Statevector, f64)> {
        let (i, j) = qubits;
        for qubit in [i, j] {
            if qubit >= self.num_qubits {
                return Err(Error::QubitIndex {
                    index: qubit,
                    num_qubits: self.num_qubits,
                });
            }
        }
        if i == j {
            return Err(Error::invalid("qubits", "projection targets must be distinct".to_string()));
        }

        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let out_qubits = self.num_qubits - 2;
        let mut data = vec![Complex64::new(0.0, 0.0); 1usize << out_qubits];
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for (compact, amp) in data.iter_mut().enumerate() {
            let base = insert_two_zero_bits(compact, lo, hi);
            *amp = inv_sqrt2 * (self.data[base] + self.data[base | (1 << lo) | (1 << hi)]);
        }

        let prob: f64 = data.iter().map(|a| a.norm_sqr()).sum();
        if prob <= 1e-15 {
            return Err(Error::DegenerateProjection);
        }
        let scale = Complex64::new(1.0 / prob.sqrt(), 0.0);
        for amp in &mut data {
            *amp *= scale;
        }
        Ok((
            Statevector {
                num_qubits: out_qubits,
                data,
            },
            prob,
        ))
    }

    pub fn overlap(&self, other: &Statevector) -> Complex64 {
        debug_assert_eq!(self.num_qubits, other.num_qubits);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Spread a compact index over the full register, leaving zero bits at
/// positions `lo < hi`.
fn insert_two_zero_bits(compact: usize, lo: usize, hi: usize) -> usize {
    let low = compact & ((1 << lo) - 1);
    let mid = (compact >> lo) & ((1 << (hi - lo - 1)) - 1);
    let high = compact >> (hi - 1);
    low | (mid << (lo + 1)) | (high << (hi + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_is_normalized() {
        for n in 1..=12 {
            let state = Statevector::ghz(n);
            assert!((state.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_projection_of_two_bell_pairs() {
        // two Bell pairs, swap the middle qubits: outcome probability 1/4,
        // result is again a Bell pair
        let joint = Statevector::ghz(2).tensor(&Statevector::ghz(2));
        let (projected, prob) = joint.project_bell_pair((1, 2)).unwrap();
        assert!((prob - 0.25).abs() < 1e-12);
        let overlap = projected.overlap(&Statevector::ghz(2)).norm_sqr();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_rejects_bad_targets() {
        let state = Statevector::ghz(3);
        assert!(state.project_bell_pair((0, 0)).is_err());
        assert!(state.project_bell_pair((0, 7)).is_err());
    }
}
