//! OvTDM encoding (tapped convolution) and soft-in soft-out detection.
//!
//! The overlapped stream is a full convolution of BPSK symbols with the
//! waveform taps, so it has a trellis with `2^(k-1)` states holding the
//! last `k-1` inputs. The detector runs the exact log-domain BCJR
//! recursions over that trellis, including the `k-1` input-free tail
//! samples at the end of the frame.

use crate::error::{Error, Result};
use crate::waveform::TapVector;

/// Magnitude limit applied to LLRs leaving a decoder.
pub const LLR_CLAMP: f64 = 50.0;

/// BPSK mapping: bit 0 -> +1, bit 1 -> -1.
#[inline]
pub fn bpsk(bit: u8) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Hard decision under the LLR convention `log p(+1)/p(-1)`.
#[inline]
pub fn hard_bit(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

#[inline]
pub fn clamp_llr(v: f64) -> f64 {
    v.clamp(-LLR_CLAMP, LLR_CLAMP)
}

/// BPSK amplitudes, every element exactly +1 or -1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSequence(Vec<f64>);

impl SymbolSequence {
    pub fn new(symbols: Vec<f64>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyInput);
        }
        if symbols.iter().any(|&s| s != 1.0 && s != -1.0) {
            return Err(Error::Config("symbols must be +1 or -1".into()));
        }
        Ok(Self(symbols))
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Self::new(bits.iter().map(|&b| bpsk(b)).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One real branch of an overlapped frame: `L + k - 1` samples, the last
/// `k - 1` of which carry no new input.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSequence {
    pub samples: Vec<f64>,
    pub n_tail: usize,
}

impl SampleSequence {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Number of input symbols that produced the sequence.
    pub fn n_symbols(&self) -> usize {
        self.samples.len() - self.n_tail
    }
}

/// Full convolution of the symbols with the taps.
pub fn ovtdm_encode(x: &SymbolSequence, taps: &TapVector) -> SampleSequence {
    let h = taps.taps();
    let k = h.len();
    let xs = x.as_slice();
    let mut samples = vec![0.0; xs.len() + k - 1];
    for (i, &xi) in xs.iter().enumerate() {
        for (j, &hj) in h.iter().enumerate() {
            samples[i + j] += xi * hj;
        }
    }
    SampleSequence {
        samples,
        n_tail: k - 1,
    }
}

/// Trellis of the overlap encoder.
///
/// State bit `i` holds the bit sent `i + 1` steps ago. Transitions shift the
/// new bit in at position 0.
#[derive(Debug, Clone)]
pub struct Trellis {
    taps: Vec<f64>,
    num_states: usize,
    mask: usize,
}

/// One trellis edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub from: usize,
    pub bit: u8,
    pub to: usize,
    pub output: f64,
}

impl Trellis {
    pub fn new(taps: &TapVector) -> Self {
        let k = taps.k();
        let num_states = 1usize << (k - 1);
        Self {
            taps: taps.taps().to_vec(),
            num_states,
            mask: num_states - 1,
        }
    }

    pub fn k(&self) -> usize {
        self.taps.len()
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    #[inline]
    pub fn next_state(&self, state: usize, bit: u8) -> usize {
        ((state << 1) | bit as usize) & self.mask
    }

    /// Output of a branch with the full window of `k` symbols present.
    pub fn output(&self, state: usize, bit: u8) -> f64 {
        self.windowed_output(state, Some(bit), 0, self.k() - 1)
    }

    /// Branch output where only history depths `lo..=hi` hold real symbols
    /// (depth 0 is the current input, present iff `bit` is `Some`).
    fn windowed_output(&self, state: usize, bit: Option<u8>, lo: usize, hi: usize) -> f64 {
        let mut y = match bit {
            Some(b) if lo == 0 => self.taps[0] * bpsk(b),
            _ => 0.0,
        };
        for depth in lo.max(1)..=hi {
            let b = ((state >> (depth - 1)) & 1) as u8;
            y += self.taps[depth] * bpsk(b);
        }
        y
    }

    pub fn branches(&self) -> Vec<Branch> {
        (0..self.num_states)
            .flat_map(|s| {
                [0u8, 1].map(|b| Branch {
                    from: s,
                    bit: b,
                    to: self.next_state(s, b),
                    output: self.output(s, b),
                })
            })
            .collect()
    }

    /// Range of history depths that hold transmitted symbols at step `t` of
    /// a frame with `l` inputs.
    fn valid_depths(&self, t: usize, l: usize) -> (usize, usize) {
        let lo = (t + 1).saturating_sub(l);
        let hi = t.min(self.k() - 1);
        (lo, hi)
    }

    /// Per-step output table `[state * 2 + bit]`.
    fn step_table(&self, t: usize, l: usize, out: &mut Vec<f64>) {
        let (lo, hi) = self.valid_depths(t, l);
        out.clear();
        for s in 0..self.num_states {
            for b in [0u8, 1] {
                let input = (t < l).then_some(b);
                out.push(self.windowed_output(s, input, lo, hi));
            }
        }
    }

    /// Drives the trellis from the empty start state through the frame and
    /// its input-free tail.
    pub fn drive(&self, bits: &[u8]) -> Vec<f64> {
        let l = bits.len();
        let n = l + self.k() - 1;
        let mut state = 0usize;
        let mut out = Vec::with_capacity(n);
        for t in 0..n {
            let (lo, hi) = self.valid_depths(t, l);
            let input = bits.get(t).copied();
            out.push(self.windowed_output(state, input, lo, hi));
            state = self.next_state(state, input.unwrap_or(0));
        }
        out
    }
}

pub fn build_trellis(taps: &TapVector) -> Trellis {
    Trellis::new(taps)
}

#[inline]
fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Output of one BCJR run.
#[derive(Debug, Clone, PartialEq)]
pub struct SisoOutput {
    /// A-posteriori LLRs.
    pub lambda: Vec<f64>,
    /// Extrinsic LLRs, `lambda - mu`.
    pub extrinsic: Vec<f64>,
}

/// Log-MAP detector for one overlapped branch. Holds scratch buffers, so an
/// instance serves one frame at a time.
#[derive(Debug, Clone)]
pub struct BcjrDecoder {
    trellis: Trellis,
    full_table: Vec<f64>,
    table: Vec<f64>,
    gamma: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl BcjrDecoder {
    pub fn new(taps: &TapVector) -> Self {
        let trellis = Trellis::new(taps);
        let mut full_table = Vec::new();
        let k = trellis.k();
        // Any step with the whole window populated.
        trellis.step_table(k - 1, k, &mut full_table);
        Self {
            trellis,
            full_table,
            table: Vec::new(),
            gamma: Vec::new(),
            alpha: Vec::new(),
            beta: Vec::new(),
        }
    }

    pub fn trellis(&self) -> &Trellis {
        &self.trellis
    }

    /// Computes posterior and extrinsic LLRs for the `L = r.len() - k + 1`
    /// inputs given the received samples, priors `mu` and per-dimension
    /// noise variance `sigma2`.
    pub fn decode(&mut self, r: &[f64], mu: &[f64], sigma2: f64) -> Result<SisoOutput> {
        let k = self.trellis.k();
        let ns = self.trellis.num_states();
        let l = mu.len();
        if l == 0 {
            return Err(Error::EmptyInput);
        }
        if r.len() != l + k - 1 {
            return Err(Error::LengthMismatch {
                expected: l + k - 1,
                actual: r.len(),
            });
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidVariance(sigma2));
        }
        let n = r.len();
        let inv2s = 0.5 / sigma2;

        // Branch metrics, indexed [t][state * 2 + bit].
        let width = 2 * ns;
        self.gamma.clear();
        self.gamma.resize(n * width, f64::NEG_INFINITY);
        for t in 0..n {
            let full = t + 1 >= k && t < l;
            if !full {
                self.trellis.step_table(t, l, &mut self.table);
            }
            let table = if full { &self.full_table } else { &self.table };
            let g = &mut self.gamma[t * width..(t + 1) * width];
            if t < l {
                let half_mu = 0.5 * mu[t];
                for (idx, (gv, &y)) in g.iter_mut().zip(table.iter()).enumerate() {
                    let d = r[t] - y;
                    let prior = if idx & 1 == 0 { half_mu } else { -half_mu };
                    *gv = prior - d * d * inv2s;
                }
            } else {
                // Tail: no input, only the zero-bit shift edge exists.
                for s in 0..ns {
                    let d = r[t] - table[2 * s];
                    g[2 * s] = -d * d * inv2s;
                }
            }
        }

        // Forward recursion from the empty start state.
        self.alpha.clear();
        self.alpha.resize((n + 1) * ns, f64::NEG_INFINITY);
        self.alpha[0] = 0.0;
        for t in 0..n {
            let (cur, next) = self.alpha[t * ns..(t + 2) * ns].split_at_mut(ns);
            let g = &self.gamma[t * width..(t + 1) * width];
            for s in 0..ns {
                let a = cur[s];
                if a == f64::NEG_INFINITY {
                    continue;
                }
                for b in 0..2u8 {
                    let gv = g[2 * s + b as usize];
                    if gv == f64::NEG_INFINITY {
                        continue;
                    }
                    let to = self.trellis.next_state(s, b);
                    next[to] = log_add(next[to], a + gv);
                }
            }
            let peak = next.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            next.iter_mut().for_each(|v| *v -= peak);
        }

        // Backward recursion; the tail drives every path to state 0.
        self.beta.clear();
        self.beta.resize((n + 1) * ns, f64::NEG_INFINITY);
        self.beta[n * ns] = 0.0;
        for t in (0..n).rev() {
            let (cur, next) = self.beta[t * ns..(t + 2) * ns].split_at_mut(ns);
            let g = &self.gamma[t * width..(t + 1) * width];
            for s in 0..ns {
                let mut acc = f64::NEG_INFINITY;
                for b in 0..2u8 {
                    let gv = g[2 * s + b as usize];
                    let bn = next[self.trellis.next_state(s, b)];
                    if gv == f64::NEG_INFINITY || bn == f64::NEG_INFINITY {
                        continue;
                    }
                    acc = log_add(acc, gv + bn);
                }
                cur[s] = acc;
            }
            let peak = cur.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if peak.is_finite() {
                cur.iter_mut().for_each(|v| *v -= peak);
            }
        }

        let mut lambda = Vec::with_capacity(l);
        let mut extrinsic = Vec::with_capacity(l);
        for t in 0..l {
            let a = &self.alpha[t * ns..(t + 1) * ns];
            let bn = &self.beta[(t + 1) * ns..(t + 2) * ns];
            let g = &self.gamma[t * width..(t + 1) * width];
            let mut acc = [f64::NEG_INFINITY; 2];
            for s in 0..ns {
                if a[s] == f64::NEG_INFINITY {
                    continue;
                }
                for b in 0..2u8 {
                    let m = a[s] + g[2 * s + b as usize] + bn[self.trellis.next_state(s, b)];
                    acc[b as usize] = log_add(acc[b as usize], m);
                }
            }
            let e = clamp_llr(acc[0] - acc[1] - mu[t]);
            extrinsic.push(e);
            lambda.push(mu[t] + e);
        }
        Ok(SisoOutput { lambda, extrinsic })
    }
}

/// One-shot BCJR detection; see [`BcjrDecoder::decode`].
pub fn bcjr_decode(
    r: &SampleSequence,
    taps: &TapVector,
    mu: &[f64],
    sigma2: f64,
) -> Result<SisoOutput> {
    BcjrDecoder::new(taps).decode(&r.samples, mu, sigma2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{chebyshev_taps, load_taps, rect_taps};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
        (0..n).map(|_| rng.random_range(0..2u8)).collect()
    }

    fn direct_sum(x: &[f64], h: &[f64]) -> Vec<f64> {
        let n = x.len() + h.len() - 1;
        (0..n)
            .map(|t| {
                (0..x.len())
                    .filter(|&i| t >= i && t - i < h.len())
                    .map(|i| x[i] * h[t - i])
                    .sum()
            })
            .collect()
    }

    /// Exact posterior LLRs by enumerating every input sequence.
    fn brute_force_llr(r: &[f64], h: &[f64], mu: &[f64], sigma2: f64) -> Vec<f64> {
        let l = mu.len();
        let mut acc = vec![[f64::NEG_INFINITY; 2]; l];
        for word in 0..(1usize << l) {
            let bits: Vec<u8> = (0..l).map(|i| ((word >> i) & 1) as u8).collect();
            let x: Vec<f64> = bits.iter().map(|&b| bpsk(b)).collect();
            let y = direct_sum(&x, h);
            let ll: f64 = r.iter().zip(&y).map(|(a, b)| -(a - b).powi(2) / (2.0 * sigma2)).sum();
            let prior: f64 = x.iter().zip(mu).map(|(xi, m)| xi * m / 2.0).sum();
            for t in 0..l {
                let slot = &mut acc[t][bits[t] as usize];
                *slot = log_add(*slot, ll + prior);
            }
        }
        acc.iter().map(|a| a[0] - a[1]).collect()
    }

    #[test]
    fn encode_examples() {
        let x = SymbolSequence::new(vec![1.0]).unwrap();
        let y = ovtdm_encode(&x, &rect_taps(1).unwrap());
        assert_eq!(y.samples, vec![1.0]);
        assert_eq!(y.n_tail, 0);

        // Unnormalized rect [1, 1] is sqrt(2) times the unit-energy taps.
        let x = SymbolSequence::from_bits(&[0, 0, 1]).unwrap();
        let y = ovtdm_encode(&x, &rect_taps(2).unwrap());
        let scaled: Vec<f64> = y.samples.iter().map(|v| v * 2f64.sqrt()).collect();
        for (a, b) in scaled.iter().zip([1.0, 2.0, 0.0, -1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(SymbolSequence::new(vec![]).is_err());
        assert!(SymbolSequence::new(vec![0.5]).is_err());
    }

    #[test]
    fn encode_matches_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let taps = chebyshev_taps(6, 80.0).unwrap();
        let bits = random_bits(&mut rng, 64);
        let x = SymbolSequence::from_bits(&bits).unwrap();
        let y = ovtdm_encode(&x, &taps);
        let oracle = direct_sum(x.as_slice(), taps.taps());
        assert_eq!(y.len(), 64 + 5);
        for (a, b) in y.samples.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn trellis_shape() {
        let t1 = build_trellis(&rect_taps(1).unwrap());
        assert_eq!(t1.num_states(), 1);
        let br = t1.branches();
        assert_eq!(br.len(), 2);
        assert_eq!(br[0].output, 1.0);
        assert_eq!(br[1].output, -1.0);
        assert!(br.iter().all(|b| b.to == 0));

        let t3 = build_trellis(&chebyshev_taps(3, 80.0).unwrap());
        assert_eq!(t3.num_states(), 4);
        let br = t3.branches();
        assert_eq!(br.len(), 8);
        for s in 0..4 {
            assert_eq!(br.iter().filter(|b| b.from == s).count(), 2);
            assert_eq!(br.iter().filter(|b| b.to == s).count(), 2);
        }
    }

    #[test]
    fn trellis_output_is_window_inner_product() {
        let taps = load_taps(&[0.3, -1.2, 0.7, 2.0]).unwrap();
        let tr = build_trellis(&taps);
        for br in tr.branches() {
            let window = [
                bpsk(br.bit),
                bpsk((br.from & 1) as u8),
                bpsk(((br.from >> 1) & 1) as u8),
                bpsk(((br.from >> 2) & 1) as u8),
            ];
            let ip: f64 = window.iter().zip(taps.taps()).map(|(a, b)| a * b).sum();
            assert!((ip - br.output).abs() < 1e-12);
        }
    }

    #[test]
    fn trellis_paths_reproduce_encoder() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in [1, 2, 4, 6] {
            let taps = chebyshev_taps(k, 80.0).unwrap();
            for len in [1, 3, 20] {
                let bits = random_bits(&mut rng, len);
                let enc = ovtdm_encode(&SymbolSequence::from_bits(&bits).unwrap(), &taps);
                let driven = build_trellis(&taps).drive(&bits);
                assert_eq!(driven.len(), enc.len());
                for (a, b) in driven.iter().zip(&enc.samples) {
                    assert!((a - b).abs() < 1e-12, "k={k} len={len}");
                }
            }
        }
    }

    #[test]
    fn k1_is_memoryless_bpsk() {
        let taps = rect_taps(1).unwrap();
        let r = SampleSequence {
            samples: vec![0.3, -1.1, 2.0],
            n_tail: 0,
        };
        let out = bcjr_decode(&r, &taps, &[0.0; 3], 0.7).unwrap();
        for (lam, rv) in out.lambda.iter().zip(&r.samples) {
            assert!((lam - 2.0 * rv / 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_brute_force_with_priors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..30 {
            let k = 1 + trial % 4;
            let l = 4 + trial % 5;
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
            let Ok(taps) = load_taps(&raw) else { continue };
            let bits = random_bits(&mut rng, l);
            let enc = ovtdm_encode(&SymbolSequence::from_bits(&bits).unwrap(), &taps);
            let sigma2: f64 = rng.random_range(0.2..1.5);
            let r: Vec<f64> = enc
                .samples
                .iter()
                .map(|v| v + sigma2.sqrt() * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let mu: Vec<f64> = (0..l).map(|_| rng.random_range(-3.0..3.0)).collect();
            let out = BcjrDecoder::new(&taps).decode(&r, &mu, sigma2).unwrap();
            let oracle = brute_force_llr(&r, taps.taps(), &mu, sigma2);
            for (a, b) in out.lambda.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-9, "trial {trial}: {a} vs {b}");
            }
            for t in 0..l {
                assert!((out.extrinsic[t] + mu[t] - out.lambda[t]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn noiseless_recovers_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in 1..=6 {
            let taps = chebyshev_taps(k, 80.0).unwrap();
            let bits = random_bits(&mut rng, 32);
            let enc = ovtdm_encode(&SymbolSequence::from_bits(&bits).unwrap(), &taps);
            let out = bcjr_decode(&enc, &taps, &[0.0; 32], 1e-4).unwrap();
            let hard: Vec<u8> = out.lambda.iter().map(|&v| hard_bit(v)).collect();
            assert_eq!(hard, bits, "k={k}");
            assert!(out.extrinsic.iter().all(|v| v.abs() <= LLR_CLAMP));
        }
    }

    #[test]
    fn tail_samples_matter() {
        let taps = chebyshev_taps(4, 80.0).unwrap();
        let bits = [0u8, 1, 1, 0, 1, 0];
        let enc = ovtdm_encode(&SymbolSequence::from_bits(&bits).unwrap(), &taps);
        let mut dec = BcjrDecoder::new(&taps);
        let base = dec.decode(&enc.samples, &[0.0; 6], 1.0).unwrap();
        let mut altered = enc.samples.clone();
        *altered.last_mut().unwrap() += 1.5;
        let moved = dec.decode(&altered, &[0.0; 6], 1.0).unwrap();
        assert_eq!(moved.lambda.len(), 6);
        assert!((moved.lambda[5] - base.lambda[5]).abs() > 1e-3);
    }

    #[test]
    fn rejects_bad_arguments() {
        let taps = rect_taps(3).unwrap();
        let mut dec = BcjrDecoder::new(&taps);
        assert!(matches!(
            dec.decode(&[0.0; 5], &[0.0; 4], 1.0),
            Err(Error::LengthMismatch { expected: 6, actual: 5 })
        ));
        assert_eq!(
            dec.decode(&[0.0; 6], &[0.0; 4], 0.0),
            Err(Error::InvalidVariance(0.0))
        );
        assert_eq!(dec.decode(&[0.0; 2], &[], 1.0), Err(Error::EmptyInput));
    }
}
