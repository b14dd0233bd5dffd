//! Turbo-structure OvTDM transmitter and the two iterative receivers.
//!
//! The product codeword is sent twice: interleaved by `pi1` and overlap
//! encoded on the in-phase branch, interleaved by `pi2` and overlap encoded
//! on the quadrature branch. The receivers run one BCJR detector per branch
//! and exchange extrinsic LLRs in code order.
//!
//! Scheme A involves the product decoder in every global iteration: both
//! detectors receive the product decoder's extrinsic as part of their prior.
//! Scheme B iterates the two detectors alone and hands the combined result to
//! the product decoder once. Only extrinsic values cross module boundaries.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{bpsk, clamp_llr, hard_bit, ovtdm_encode, BcjrDecoder, SymbolSequence};
use crate::error::{Error, Result};
use crate::tpc::{self, info_bits, info_decisions, tpc_encode, FbbaConfig, TpcDecoder};
use crate::waveform::TapVector;

/// Coded bits per frame.
pub const FRAME_BITS: usize = tpc::N * tpc::N;
/// Information bits per frame.
pub const INFO_BITS: usize = tpc::K * tpc::K;

/// A pair of interleavers. `interleave(x)[j] == x[pi[j]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleaverPair {
    pub pi1: Vec<usize>,
    pub pi2: Vec<usize>,
    pub seed: u64,
}

fn random_permutation(len: usize, seed: u64, tag: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag);
    let mut p: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = rng.random_range(0..=i as u64) as usize;
        p.swap(i, j);
    }
    p
}

/// Two independent pseudorandom permutations derived from `seed`.
pub fn make_interleaver_pair(length: usize, seed: u64) -> Result<InterleaverPair> {
    if length < 2 {
        return Err(Error::Config(format!("interleaver length {length} < 2")));
    }
    let pi1 = random_permutation(length, seed, 1);
    let mut pi2 = random_permutation(length, seed, 2);
    let mut tag = 3;
    while pi2 == pi1 {
        pi2 = random_permutation(length, seed, tag);
        tag += 1;
    }
    Ok(InterleaverPair { pi1, pi2, seed })
}

pub fn interleave<T: Copy>(x: &[T], pi: &[usize]) -> Vec<T> {
    pi.iter().map(|&p| x[p]).collect()
}

pub fn deinterleave<T: Copy + Default>(y: &[T], pi: &[usize]) -> Vec<T> {
    let mut x = vec![T::default(); y.len()];
    for (j, &p) in pi.iter().enumerate() {
        x[p] = y[j];
    }
    x
}

/// Complex overlapped frame: in-phase branch in the real part.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFrame {
    pub samples: Vec<Complex64>,
    /// Symbols per branch.
    pub l: usize,
    pub k: usize,
}

/// Encodes 57 x 57 information bits into a complex overlapped frame.
pub fn transmit(info: &[u8], taps: &TapVector, il: &InterleaverPair) -> Result<ComplexFrame> {
    let code = tpc_encode(info)?.to_bits();
    transmit_codeword(&code, taps, il)
}

/// Transmits an already encoded block (row-major product codeword).
pub fn transmit_codeword(code: &[u8], taps: &TapVector, il: &InterleaverPair) -> Result<ComplexFrame> {
    if il.pi1.len() != code.len() || il.pi2.len() != code.len() {
        return Err(Error::LengthMismatch {
            expected: code.len(),
            actual: il.pi1.len(),
        });
    }
    let branch = |pi: &[usize]| -> Result<Vec<f64>> {
        let x = SymbolSequence::from_bits(&interleave(code, pi))?;
        Ok(ovtdm_encode(&x, taps).samples)
    };
    let i = branch(&il.pi1)?;
    let q = branch(&il.pi2)?;
    let samples = i
        .into_iter()
        .zip(q)
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    Ok(ComplexFrame {
        samples,
        l: code.len(),
        k: taps.k(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Product decoder inside every global iteration.
    A,
    /// Detector-only iterations, then one hand-off to the product decoder.
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverConfig {
    pub scheme: Scheme,
    /// Scheme A global iterations.
    pub global_iterations: usize,
    /// Scheme B detector iterations before the product decoder.
    pub ovtdm_iterations: usize,
    pub fbba: FbbaConfig,
    pub llr_clamp: f64,
}

impl Default for ReceiverConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::A,
            global_iterations: 6,
            ovtdm_iterations: 5,
            fbba: FbbaConfig::default(),
            llr_clamp: crate::codec::LLR_CLAMP,
        }
    }
}

impl ReceiverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.global_iterations == 0 || self.ovtdm_iterations == 0 {
            return Err(Error::Config("iteration counts must be at least 1".into()));
        }
        if !(self.llr_clamp > 0.0 && self.llr_clamp.is_finite()) {
            return Err(Error::Config("llr clamp must be positive".into()));
        }
        self.fbba.validate()
    }
}

/// Per-iteration error counts, filled when the transmitted codeword is known.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Code-domain bit error rate of the total LLR after each iteration.
    pub code_ber: Vec<f64>,
    /// Information bit errors after each iteration.
    pub info_errors: Vec<usize>,
}

/// Stateful receiver; one frame at a time.
#[derive(Debug, Clone)]
pub struct Receiver {
    cfg: ReceiverConfig,
    il: InterleaverPair,
    bcjr: BcjrDecoder,
    tpc: TpcDecoder,
}

impl Receiver {
    pub fn new(taps: &TapVector, il: InterleaverPair, cfg: ReceiverConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            il,
            bcjr: BcjrDecoder::new(taps),
            tpc: TpcDecoder::new(),
        })
    }

    pub fn config(&self) -> &ReceiverConfig {
        &self.cfg
    }

    pub fn interleavers(&self) -> &InterleaverPair {
        &self.il
    }

    fn clamp(&self, v: f64) -> f64 {
        v.clamp(-self.cfg.llr_clamp, self.cfg.llr_clamp)
    }

    /// Runs one detector with a code-order prior, returning its code-order
    /// extrinsic.
    fn detect(&mut self, branch: &[f64], prior_code: &[f64], pi: &[usize], sigma2: f64) -> Result<Vec<f64>> {
        let mu: Vec<f64> = interleave(prior_code, pi)
            .into_iter()
            .map(|v| self.clamp(v))
            .collect();
        let out = self.bcjr.decode(branch, &mu, sigma2)?;
        Ok(deinterleave(&out.extrinsic, pi))
    }

    /// Decodes a noisy frame. `known` is the transmitted row-major codeword,
    /// used only to fill diagnostics.
    pub fn receive(
        &mut self,
        frame: &[Complex64],
        sigma2: f64,
        known: Option<&[u8]>,
    ) -> Result<(Vec<u8>, Diagnostics)> {
        let l = self.il.pi1.len();
        let expected = l + self.bcjr.trellis().k() - 1;
        if frame.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: frame.len(),
            });
        }
        if l != FRAME_BITS {
            return Err(Error::Config(format!("frame holds {l} bits, expected {FRAME_BITS}")));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidVariance(sigma2));
        }
        let re: Vec<f64> = frame.iter().map(|c| c.re).collect();
        let im: Vec<f64> = frame.iter().map(|c| c.im).collect();
        let known_info = known.map(info_bits);
        let mut diag = Diagnostics::default();
        let record = |total: &[f64], diag: &mut Diagnostics| {
            if let (Some(code), Some(info)) = (known, known_info.as_ref()) {
                let errs = total
                    .iter()
                    .zip(code)
                    .filter(|(&v, &b)| hard_bit(v) != b)
                    .count();
                diag.code_ber.push(errs as f64 / code.len() as f64);
                let ierrs = info_decisions(total)
                    .iter()
                    .zip(info)
                    .filter(|(a, b)| a != b)
                    .count();
                diag.info_errors.push(ierrs);
            }
        };

        let pi1 = self.il.pi1.clone();
        let pi2 = self.il.pi2.clone();
        let mut e_i = vec![0.0; l];
        let mut e_q = vec![0.0; l];
        match self.cfg.scheme {
            Scheme::A => {
                let mut e_tpc = vec![0.0; l];
                let mut total = vec![0.0; l];
                for g in 0..self.cfg.global_iterations {
                    let prior: Vec<f64> = e_q.iter().zip(&e_tpc).map(|(a, b)| a + b).collect();
                    e_i = self.detect(&re, &prior, &pi1, sigma2)?;
                    let prior: Vec<f64> = e_i.iter().zip(&e_tpc).map(|(a, b)| a + b).collect();
                    e_q = self.detect(&im, &prior, &pi2, sigma2)?;
                    let channel: Vec<f64> = e_i.iter().zip(&e_q).map(|(a, b)| a + b).collect();
                    let ext = self.tpc.run(&channel, &self.cfg.fbba, 1, 2 * g);
                    e_tpc = ext.total().into_iter().map(clamp_llr).collect();
                    total = channel.iter().zip(&e_tpc).map(|(a, b)| a + b).collect();
                    record(&total, &mut diag);
                }
                Ok((info_decisions(&total), diag))
            }
            Scheme::B => {
                for _ in 0..self.cfg.ovtdm_iterations {
                    e_i = self.detect(&re, &e_q, &pi1, sigma2)?;
                    e_q = self.detect(&im, &e_i, &pi2, sigma2)?;
                    let channel: Vec<f64> = e_i.iter().zip(&e_q).map(|(a, b)| a + b).collect();
                    record(&channel, &mut diag);
                }
                let channel: Vec<f64> = e_i.iter().zip(&e_q).map(|(a, b)| a + b).collect();
                if self.cfg.fbba.tpc_iterations == 0 {
                    return Ok((info_decisions(&channel), diag));
                }
                let (soft, info) = self.tpc.decode(&channel, &self.cfg.fbba)?;
                record(&soft, &mut diag);
                Ok((info, diag))
            }
        }
    }
}

/// Hard decisions of a code-order LLR vector.
pub fn hard_decisions(llr: &[f64]) -> Vec<u8> {
    llr.iter().map(|&v| hard_bit(v)).collect()
}

/// Mean energy per complex sample of a frame.
pub fn mean_energy(frame: &ComplexFrame) -> f64 {
    frame.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() / frame.samples.len() as f64
}

/// BPSK amplitudes of a bit slice.
pub fn bpsk_symbols(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| bpsk(b)).collect()
}
