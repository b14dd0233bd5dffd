//! Gray-mapped square QAM baseline with an exact soft demapper.
//!
//! Each axis carries `log2(M)/2` bits on a Gray-labelled PAM ladder. The
//! first half of a symbol's bits selects the in-phase level, the second half
//! the quadrature level. Constellations have unit average energy.

use num_complex::Complex64;

use crate::codec::{clamp_llr, LLR_CLAMP};
use crate::error::{Error, Result};

/// Square Gray QAM constellation.
#[derive(Debug, Clone)]
pub struct Qam {
    m: usize,
    bits_per_axis: usize,
    /// Amplitude of each level index, ascending.
    levels: Vec<f64>,
    /// Gray label of each level index.
    labels: Vec<usize>,
}

impl Qam {
    pub fn new(m: usize) -> Result<Self> {
        if !matches!(m, 4 | 16 | 64 | 256 | 1024) {
            return Err(Error::UnsupportedQam(m));
        }
        let bits = m.trailing_zeros() as usize;
        let bits_per_axis = bits / 2;
        let side = 1usize << bits_per_axis;
        let d = (3.0 / (2.0 * (m as f64 - 1.0))).sqrt();
        let levels = (0..side)
            .map(|i| (2.0 * i as f64 - (side as f64 - 1.0)) * d)
            .collect();
        let labels = (0..side).map(|i| i ^ (i >> 1)).collect();
        Ok(Self {
            m,
            bits_per_axis,
            levels,
            labels,
        })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn bits_per_symbol(&self) -> usize {
        2 * self.bits_per_axis
    }

    /// Symbols needed for `n_bits`, padding the last symbol with zeros.
    pub fn symbols_for(&self, n_bits: usize) -> usize {
        n_bits.div_ceil(self.bits_per_symbol())
    }

    fn axis_level(&self, bits: &[u8]) -> f64 {
        let label = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let idx = self
            .labels
            .iter()
            .position(|&g| g == label)
            .expect("every label is used");
        self.levels[idx]
    }

    /// Maps bits to symbols, zero-padding a partial final symbol.
    pub fn modulate(&self, bits: &[u8]) -> Vec<Complex64> {
        let bps = self.bits_per_symbol();
        let b = self.bits_per_axis;
        let mut padded = bits.to_vec();
        padded.resize(self.symbols_for(bits.len()) * bps, 0);
        padded
            .chunks(bps)
            .map(|chunk| Complex64::new(self.axis_level(&chunk[..b]), self.axis_level(&chunk[b..])))
            .collect()
    }

    /// Exact bit LLRs (`log p(0)/p(1)`) for `n_bits` bits carried by the
    /// received symbols; `sigma2` is the noise variance per real dimension.
    pub fn demap(&self, received: &[Complex64], n_bits: usize, sigma2: f64) -> Result<Vec<f64>> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidVariance(sigma2));
        }
        if received.len() != self.symbols_for(n_bits) {
            return Err(Error::LengthMismatch {
                expected: self.symbols_for(n_bits),
                actual: received.len(),
            });
        }
        let b = self.bits_per_axis;
        let mut out = Vec::with_capacity(received.len() * 2 * b);
        let mut metrics = vec![0.0; self.levels.len()];
        for y in received {
            for v in [y.re, y.im] {
                for (mv, &a) in metrics.iter_mut().zip(&self.levels) {
                    *mv = -(v - a) * (v - a) / (2.0 * sigma2);
                }
                for bit in 0..b {
                    let shift = b - 1 - bit;
                    let mut acc = [f64::NEG_INFINITY; 2];
                    for (idx, &mv) in metrics.iter().enumerate() {
                        let which = (self.labels[idx] >> shift) & 1;
                        acc[which] = log_sum(acc[which], mv);
                    }
                    out.push(clamp_llr(acc[0] - acc[1]));
                }
            }
        }
        // Zero padding is known to the receiver.
        for llr in out.iter_mut().skip(n_bits) {
            *llr = LLR_CLAMP;
        }
        out.truncate(n_bits);
        Ok(out)
    }

    /// Nearest-point hard decisions.
    pub fn hard_demap(&self, received: &[Complex64], n_bits: usize) -> Vec<u8> {
        let b = self.bits_per_axis;
        let mut out = Vec::with_capacity(received.len() * 2 * b);
        for y in received {
            for v in [y.re, y.im] {
                let idx = self
                    .levels
                    .iter()
                    .enumerate()
                    .min_by(|a, c| (v - a.1).abs().total_cmp(&(v - c.1).abs()))
                    .map(|(i, _)| i)
                    .expect("non-empty ladder");
                let label = self.labels[idx];
                out.extend((0..b).rev().map(|s| ((label >> s) & 1) as u8));
            }
        }
        out.truncate(n_bits);
        out
    }

    /// Nearest-neighbour approximation of the uncoded Gray bit error rate at
    /// `es_n0` (linear).
    pub fn approx_ber(&self, es_n0: f64) -> f64 {
        let m = self.m as f64;
        let k = self.bits_per_symbol() as f64;
        4.0 / k * (1.0 - 1.0 / m.sqrt()) * q_function((3.0 * es_n0 / (m - 1.0)).sqrt())
    }
}

fn log_sum(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
}

pub fn qam_transmit(code_bits: &[u8], m: usize) -> Result<Vec<Complex64>> {
    Ok(Qam::new(m)?.modulate(code_bits))
}

pub fn qam_demap(received: &[Complex64], m: usize, n_bits: usize, sigma2: f64) -> Result<Vec<f64>> {
    Qam::new(m)?.demap(received, n_bits, sigma2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::hard_bit;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_energy_and_gray_neighbours() {
        for m in [16, 64, 256] {
            let q = Qam::new(m).unwrap();
            let side = 1usize << q.bits_per_axis;
            let bits_all: Vec<u8> = (0..m)
                .flat_map(|s| (0..q.bits_per_symbol()).rev().map(move |b| ((s >> b) & 1) as u8))
                .collect();
            let syms = q.modulate(&bits_all);
            let e: f64 = syms.iter().map(|s| s.norm_sqr()).sum::<f64>() / m as f64;
            assert!((e - 1.0).abs() < 1e-12);
            for i in 1..side {
                assert_eq!((q.labels[i] ^ q.labels[i - 1]).count_ones(), 1);
            }
        }
        assert!(Qam::new(32).is_err());
    }

    #[test]
    fn padding_for_64qam() {
        let q = Qam::new(64).unwrap();
        assert_eq!(q.symbols_for(4096), 683);
        let syms = q.modulate(&vec![1u8; 4096]);
        assert_eq!(syms.len(), 683);
        let llr = q.demap(&syms, 4096, 0.01).unwrap();
        assert_eq!(llr.len(), 4096);
    }

    #[test]
    fn noiseless_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for m in [64, 256] {
            let q = Qam::new(m).unwrap();
            let bits: Vec<u8> = (0..4096).map(|_| rng.random_range(0..2u8)).collect();
            let syms = q.modulate(&bits);
            assert_eq!(q.hard_demap(&syms, 4096), bits);
            let llr = q.demap(&syms, 4096, 1e-3).unwrap();
            let hard: Vec<u8> = llr.iter().map(|&v| hard_bit(v)).collect();
            assert_eq!(hard, bits);
        }
    }

    #[test]
    fn soft_sign_matches_hard_at_high_snr() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let q = Qam::new(64).unwrap();
        let sigma2 = 1e-3;
        for _ in 0..500 {
            let y = Complex64::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2));
            let soft = q.demap(&[y], 6, sigma2).unwrap();
            let hard = q.hard_demap(&[y], 6);
            // MSB of each axis.
            for pos in [0, 3] {
                if soft[pos].abs() > 1e-6 {
                    assert_eq!(hard_bit(soft[pos]), hard[pos]);
                }
            }
        }
    }

    #[test]
    fn q_function_values() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
        for (x, want) in [(1.0, 0.158_655_253_931_457_07), (4.0, 3.167_124_183_311_986e-5)] {
            assert!((q_function(x) - want).abs() / want < 1e-9);
        }
    }
}
