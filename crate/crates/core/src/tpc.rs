//! Squared product code over the extended BCH(64,57) component code and
//! its iterative soft decoder.
//!
//! Each component word is decoded with an ordered-reliability list decoder:
//! positions are sorted by reliability, the check matrix is brought to
//! systematic form over the sorted order so the most reliable independent
//! positions carry the information, and a candidate list is built by
//! flipping subsets of the least reliable information positions and
//! re-encoding. Soft outputs come from the metric gap between the best
//! candidate and the best candidate disagreeing at each position.

use crate::bch::ComponentCode;
use crate::codec::{bpsk, clamp_llr, hard_bit};
use crate::error::{Error, Result};
use crate::gf2::{low_mask, reencode_mask, systematize_rows};

/// Side of the squared product block.
pub const N: usize = 64;
/// Information side of the squared product block.
pub const K: usize = 57;
/// Code rate `(57/64)^2`.
pub const RATE: f64 = (K * K) as f64 / (N * N) as f64;

pub const MAX_FLIP_BITS: usize = 8;

/// Component decoder parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct FbbaConfig {
    /// Number of flip positions; the candidate list holds `2^q` words.
    pub q: usize,
    /// Full (row + column) iterations.
    pub tpc_iterations: usize,
    /// Extrinsic scale per half-iteration.
    pub alpha_schedule: Vec<f64>,
    /// Reliability given to positions with no competing candidate, per
    /// half-iteration.
    pub beta_schedule: Vec<f64>,
}

impl Default for FbbaConfig {
    fn default() -> Self {
        Self {
            q: 5,
            tpc_iterations: 4,
            alpha_schedule: vec![0.5, 0.5, 0.6, 0.6, 0.7, 0.7, 0.8, 0.8],
            beta_schedule: vec![0.2, 0.4, 0.6, 0.8, 1.0, 1.0, 1.0, 1.0],
        }
    }
}

impl FbbaConfig {
    /// Zero iterations is accepted and means the product decoder is bypassed.
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_FLIP_BITS).contains(&self.q) {
            return Err(Error::Config(format!(
                "flip count q must be in 1..={MAX_FLIP_BITS}, got {}",
                self.q
            )));
        }
        let need = (2 * self.tpc_iterations).max(1);
        for (name, sched) in [("alpha", &self.alpha_schedule), ("beta", &self.beta_schedule)] {
            if sched.len() < need {
                return Err(Error::Config(format!(
                    "{name} schedule needs at least {need} entries, has {}",
                    sched.len()
                )));
            }
            if sched.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::Config(format!("{name} schedule has invalid entries")));
            }
        }
        Ok(())
    }

    /// Schedules entries past the end repeat the last value.
    pub fn alpha(&self, half_iter: usize) -> f64 {
        sched_at(&self.alpha_schedule, half_iter)
    }

    pub fn beta(&self, half_iter: usize) -> f64 {
        sched_at(&self.beta_schedule, half_iter)
    }

    /// Configuration for inputs scaled by `factor`: the fallback magnitudes
    /// scale with the LLRs, the dimensionless extrinsic weights do not.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            beta_schedule: self.beta_schedule.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }
}

fn sched_at(s: &[f64], i: usize) -> f64 {
    s.get(i).or(s.last()).copied().unwrap_or(1.0)
}

/// One list entry, stored in the sorted (systematic) position order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub word: u64,
    /// Metric relative to the re-encoded hard decision.
    pub metric: f64,
    /// Generation index; 0 is the re-encoded hard decision.
    pub index: usize,
}

/// Candidates sorted ascending by metric, ties by generation index, plus the
/// position order they are expressed in.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateList {
    pub candidates: Vec<Candidate>,
    /// Position `j` of a candidate word is original position `perm[j]`.
    pub perm: Vec<usize>,
}

impl CandidateList {
    pub fn best(&self) -> &Candidate {
        &self.candidates[0]
    }

    /// The candidate generated from the unflipped hard decision.
    pub fn base(&self) -> &Candidate {
        self.candidates
            .iter()
            .find(|c| c.index == 0)
            .expect("base candidate present")
    }

    /// Un-permutes a word into original position order.
    pub fn to_original(&self, word: u64) -> u64 {
        self.perm
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &p)| acc | (((word >> j) & 1) << p))
    }
}

/// Result of decoding one component word.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentOutput {
    /// Scaled, clamped extrinsic LLRs in original position order.
    pub extrinsic: Vec<f64>,
    /// Best candidate in original position order.
    pub hard: u64,
}

/// List-based soft-in soft-out decoder for one component code.
#[derive(Debug, Clone)]
pub struct FbbaDecoder {
    code: ComponentCode,
    order: Vec<usize>,
    rows: Vec<u64>,
    sorted_llr: Vec<f64>,
}

impl FbbaDecoder {
    pub fn new(code: ComponentCode) -> Self {
        Self {
            order: Vec::with_capacity(code.n()),
            rows: Vec::with_capacity(code.redundancy()),
            sorted_llr: Vec::with_capacity(code.n()),
            code,
        }
    }

    pub fn code(&self) -> &ComponentCode {
        &self.code
    }

    /// Builds the ordered candidate list for input LLRs `l`.
    pub fn candidates(&mut self, l: &[f64], q: usize) -> CandidateList {
        let n = self.code.n();
        let k = self.code.k();
        assert_eq!(l.len(), n, "component input length");
        let q = q.min(k);

        // Most reliable first; stable so equal magnitudes keep index order.
        self.order.clear();
        self.order.extend(0..n);
        self.order
            .sort_by(|&a, &b| l[b].abs().total_cmp(&l[a].abs()));

        self.rows.clear();
        self.rows.resize(self.code.redundancy(), 0);
        let cols = self.code.check_columns();
        for (j, &p) in self.order.iter().enumerate() {
            let c = cols[p];
            for (i, row) in self.rows.iter_mut().enumerate() {
                *row |= ((c >> i) & 1) << j;
            }
        }
        let mut perm = self.order.clone();
        systematize_rows(&mut self.rows, n, &mut perm, |_, _| {})
            .expect("component check matrix has full row rank");

        self.sorted_llr.clear();
        self.sorted_llr.extend(perm.iter().map(|&p| l[p]));
        let hard_info = self
            .sorted_llr
            .iter()
            .take(k)
            .enumerate()
            .fold(0u64, |acc, (j, &v)| acc | ((hard_bit(v) as u64) << j));
        let base = reencode_mask(hard_info, &self.rows, k);

        // Flipping info position f toggles the codeword by its re-encoding.
        let deltas: Vec<u64> = (k - q..k)
            .map(|f| reencode_mask(1u64 << f, &self.rows, k))
            .collect();
        let mut candidates: Vec<Candidate> = (0..1usize << q)
            .map(|index| {
                let toggle = deltas
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| (index >> b) & 1 == 1)
                    .fold(0u64, |acc, (_, d)| acc ^ d);
                Candidate {
                    word: base ^ toggle,
                    metric: self.relative_metric(base, toggle),
                    index,
                }
            })
            .collect();
        candidates.sort_by(|a, b| a.metric.total_cmp(&b.metric).then(a.index.cmp(&b.index)));
        CandidateList { candidates, perm }
    }

    /// `-sum log p(l_j | c_j) / p(l_j | base_j)` under the Gaussian model,
    /// which reduces to signed reliabilities over the toggled positions.
    fn relative_metric(&self, base: u64, toggle: u64) -> f64 {
        let mut z = 0.0;
        let mut t = toggle;
        while t != 0 {
            let j = t.trailing_zeros() as usize;
            let lj = self.sorted_llr[j];
            z += if (base >> j) & 1 == 0 { lj } else { -lj };
            t &= t - 1;
        }
        z
    }

    /// Decodes one component word.
    pub fn decode(&mut self, l: &[f64], q: usize, alpha: f64, beta: f64) -> ComponentOutput {
        let n = self.code.n();
        let list = self.candidates(l, q);
        let best = *list.best();
        let mut competitor = [f64::INFINITY; 64];
        for c in &list.candidates[1..] {
            let mut diff = (c.word ^ best.word) & low_mask(n);
            while diff != 0 {
                let j = diff.trailing_zeros() as usize;
                if c.metric < competitor[j] {
                    competitor[j] = c.metric;
                }
                diff &= diff - 1;
            }
        }
        let mut extrinsic = vec![0.0; n];
        for j in 0..n {
            let sign = bpsk(((best.word >> j) & 1) as u8);
            let w = if competitor[j].is_finite() {
                let rho = sign * (competitor[j] - best.metric);
                rho - self.sorted_llr[j]
            } else {
                beta * sign
            };
            extrinsic[list.perm[j]] = clamp_llr(alpha * w);
        }
        ComponentOutput {
            extrinsic,
            hard: list.to_original(best.word),
        }
    }
}

/// Decodes one extended BCH(64,57) word with the schedules of `cfg` at
/// half-iteration `half_iter_index`.
pub fn fbba_component_decode(
    l: &[f64],
    cfg: &FbbaConfig,
    half_iter_index: usize,
) -> Result<ComponentOutput> {
    if l.len() != N {
        return Err(Error::LengthMismatch {
            expected: N,
            actual: l.len(),
        });
    }
    if l.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("non-finite LLR".into()));
    }
    let mut dec = FbbaDecoder::new(ComponentCode::ebch64());
    Ok(dec.decode(
        l,
        cfg.q,
        cfg.alpha(half_iter_index),
        cfg.beta(half_iter_index),
    ))
}

/// Hard 64 x 64 product codeword, one `u64` per row (bit `c` is column `c`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductBlock {
    pub rows: Vec<u64>,
}

impl ProductBlock {
    pub fn get(&self, r: usize, c: usize) -> u8 {
        ((self.rows[r] >> c) & 1) as u8
    }

    pub fn column(&self, c: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (r, &row)| acc | (((row >> c) & 1) << r))
    }

    /// Row-major bits.
    pub fn to_bits(&self) -> Vec<u8> {
        (0..N * N).map(|i| self.get(i / N, i % N)).collect()
    }

    pub fn is_valid(&self, code: &ComponentCode) -> bool {
        self.rows.len() == N
            && self.rows.iter().all(|&r| code.is_codeword(r))
            && (0..N).all(|c| code.is_codeword(self.column(c)))
    }
}

fn check_info(info: &[u8]) -> Result<()> {
    if info.len() != K * K {
        return Err(Error::LengthMismatch {
            expected: K * K,
            actual: info.len(),
        });
    }
    if info.iter().any(|&b| b > 1) {
        return Err(Error::Config("info bits must be 0 or 1".into()));
    }
    Ok(())
}

fn info_row(info: &[u8], r: usize) -> u64 {
    (0..K).fold(0, |acc, c| acc | ((info[r * K + c] as u64) << c))
}

/// Encodes a row-major 57 x 57 bit matrix: rows first, then columns.
pub fn tpc_encode(info: &[u8]) -> Result<ProductBlock> {
    check_info(info)?;
    let code = ComponentCode::ebch64();
    let mut rows = vec![0u64; N];
    for (r, row) in rows.iter_mut().enumerate().take(K) {
        *row = code.encode_mask(info_row(info, r));
    }
    let mut block = ProductBlock { rows };
    for c in 0..N {
        let col = code.encode_mask(block.column(c));
        for r in K..N {
            block.rows[r] |= ((col >> r) & 1) << c;
        }
    }
    Ok(block)
}

/// Same code, columns encoded first.
pub fn tpc_encode_columns_first(info: &[u8]) -> Result<ProductBlock> {
    check_info(info)?;
    let code = ComponentCode::ebch64();
    let mut cols = vec![0u64; N];
    for (c, col) in cols.iter_mut().enumerate().take(K) {
        let msg = (0..K).fold(0u64, |acc, r| acc | ((info[r * K + c] as u64) << r));
        *col = code.encode_mask(msg);
    }
    let mut rows = vec![0u64; N];
    for (r, row) in rows.iter_mut().enumerate() {
        let msg = (0..K).fold(0u64, |acc, c| acc | (((cols[c] >> r) & 1) << c));
        *row = code.encode_mask(msg);
    }
    Ok(ProductBlock { rows })
}

/// Row and column extrinsics from a run of the product decoder.
#[derive(Debug, Clone)]
pub struct TpcExtrinsic {
    pub row: Vec<f64>,
    pub col: Vec<f64>,
}

impl TpcExtrinsic {
    /// Sum of both extrinsics, row-major.
    pub fn total(&self) -> Vec<f64> {
        self.row.iter().zip(&self.col).map(|(a, b)| a + b).collect()
    }
}

/// Iterative row/column decoder for the squared product code.
#[derive(Debug, Clone)]
pub struct TpcDecoder {
    component: FbbaDecoder,
    buf: Vec<f64>,
}

impl Default for TpcDecoder {
    fn default() -> Self {
        Self::new()
    }
}

impl TpcDecoder {
    pub fn new() -> Self {
        Self {
            component: FbbaDecoder::new(ComponentCode::ebch64()),
            buf: vec![0.0; N],
        }
    }

    /// Runs `iterations` full iterations on row-major channel LLRs, using
    /// schedule entries from `first_half` on. Each half-iteration sees the
    /// channel LLRs plus the other dimension's latest extrinsic.
    pub fn run(
        &mut self,
        channel: &[f64],
        cfg: &FbbaConfig,
        iterations: usize,
        first_half: usize,
    ) -> TpcExtrinsic {
        assert_eq!(channel.len(), N * N);
        let mut row_ext = vec![0.0; N * N];
        let mut col_ext = vec![0.0; N * N];
        for it in 0..iterations {
            let half = first_half + 2 * it;
            let (alpha, beta) = (cfg.alpha(half), cfg.beta(half));
            for r in 0..N {
                for c in 0..N {
                    self.buf[c] = channel[r * N + c] + col_ext[r * N + c];
                }
                let out = self.component.decode(&self.buf, cfg.q, alpha, beta);
                row_ext[r * N..(r + 1) * N].copy_from_slice(&out.extrinsic);
            }
            let (alpha, beta) = (cfg.alpha(half + 1), cfg.beta(half + 1));
            for c in 0..N {
                for r in 0..N {
                    self.buf[r] = channel[r * N + c] + row_ext[r * N + c];
                }
                let out = self.component.decode(&self.buf, cfg.q, alpha, beta);
                for r in 0..N {
                    col_ext[r * N + c] = out.extrinsic[r];
                }
            }
        }
        TpcExtrinsic {
            row: row_ext,
            col: col_ext,
        }
    }

    /// Full decode: soft output and the 57 x 57 information decisions.
    pub fn decode(&mut self, soft_in: &[f64], cfg: &FbbaConfig) -> Result<(Vec<f64>, Vec<u8>)> {
        if soft_in.len() != N * N {
            return Err(Error::LengthMismatch {
                expected: N * N,
                actual: soft_in.len(),
            });
        }
        if soft_in.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("non-finite LLR".into()));
        }
        cfg.validate()?;
        let ext = self.run(soft_in, cfg, cfg.tpc_iterations, 0);
        let soft_out: Vec<f64> = soft_in
            .iter()
            .zip(ext.row.iter().zip(&ext.col))
            .map(|(ch, (r, c))| ch + r + c)
            .collect();
        let info = info_decisions(&soft_out);
        Ok((soft_out, info))
    }
}

/// Hard decisions on the 57 x 57 systematic corner of a row-major block.
pub fn info_decisions(block: &[f64]) -> Vec<u8> {
    (0..K * K)
        .map(|i| hard_bit(block[(i / K) * N + i % K]))
        .collect()
}

/// Extracts the information corner of a row-major bit block.
pub fn info_bits(block_bits: &[u8]) -> Vec<u8> {
    (0..K * K).map(|i| block_bits[(i / K) * N + i % K]).collect()
}

pub fn tpc_decode(soft_in: &[f64], cfg: &FbbaConfig) -> Result<(Vec<f64>, Vec<u8>)> {
    TpcDecoder::new().decode(soft_in, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_info(rng: &mut ChaCha8Rng) -> Vec<u8> {
        (0..K * K).map(|_| rng.random_range(0..2u8)).collect()
    }

    fn noisy_llrs(rng: &mut ChaCha8Rng, bits: &[u8], sigma: f64) -> Vec<f64> {
        bits.iter()
            .map(|&b| {
                let r = bpsk(b) + sigma * rng.sample::<f64, _>(StandardNormal);
                2.0 * r / (sigma * sigma)
            })
            .collect()
    }

    #[test]
    fn rate_matches_reported_value() {
        assert!((RATE - 0.793_212_890_625).abs() < 1e-15);
        assert_eq!(format!("{RATE:.4}"), "0.7932");
    }

    #[test]
    fn config_validation() {
        assert!(FbbaConfig::default().validate().is_ok());
        let bad_q = FbbaConfig {
            q: 0,
            ..FbbaConfig::default()
        };
        assert!(bad_q.validate().is_err());
        let short = FbbaConfig {
            tpc_iterations: 5,
            ..FbbaConfig::default()
        };
        assert!(short.validate().is_err());
        assert_eq!(FbbaConfig::default().alpha(20), 0.8);
    }

    #[test]
    fn encode_zero_and_commutes() {
        let zero = tpc_encode(&vec![0; K * K]).unwrap();
        assert!(zero.rows.iter().all(|&r| r == 0));
        let code = ComponentCode::ebch64();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let info = random_info(&mut rng);
            let a = tpc_encode(&info).unwrap();
            assert_eq!(a, tpc_encode_columns_first(&info).unwrap());
            assert!(a.is_valid(&code));
            assert_eq!(info_bits(&a.to_bits()), info);
        }
        assert!(tpc_encode(&[0; 10]).is_err());
    }

    #[test]
    fn base_candidate_has_zero_metric_and_list_is_sorted() {
        let code = ComponentCode::ebch64();
        let mut dec = FbbaDecoder::new(code.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let l: Vec<f64> = (0..64).map(|_| rng.random_range(-4.0..4.0)).collect();
            let list = dec.candidates(&l, 5);
            assert_eq!(list.candidates.len(), 32);
            assert_eq!(list.base().metric, 0.0);
            assert!(list
                .candidates
                .windows(2)
                .all(|w| w[0].metric <= w[1].metric));
            for c in &list.candidates {
                assert!(code.is_codeword(list.to_original(c.word)));
            }
        }
    }

    #[test]
    fn strong_input_returns_codeword() {
        let code = ComponentCode::ebch64();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let cfg = FbbaConfig::default();
        for _ in 0..50 {
            let c = code.encode_mask(rng.random::<u64>());
            let l: Vec<f64> = (0..64).map(|j| 20.0 * bpsk(((c >> j) & 1) as u8)).collect();
            let out = fbba_component_decode(&l, &cfg, 0).unwrap();
            assert_eq!(out.hard, c);
            for j in 0..64 {
                assert!(out.extrinsic[j] * l[j] > 0.0);
            }
        }
        assert!(fbba_component_decode(&[0.0; 63], &cfg, 0).is_err());
    }

    #[test]
    fn soft_output_matches_euclidean_form() {
        let code = ComponentCode::ebch64();
        let mut dec = FbbaDecoder::new(code);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let l: Vec<f64> = (0..64).map(|_| rng.random_range(-3.0..3.0)).collect();
            let list = dec.candidates(&l, 4);
            let out = dec.decode(&l, 4, 1.0, 0.5);
            let words: Vec<u64> = list
                .candidates
                .iter()
                .map(|c| list.to_original(c.word))
                .collect();
            let dist = |w: u64| -> f64 {
                (0..64)
                    .map(|j| (l[j] - bpsk(((w >> j) & 1) as u8)).powi(2))
                    .sum()
            };
            let best = words[0];
            assert_eq!(out.hard, best);
            for j in 0..64 {
                let bj = (best >> j) & 1;
                let opp = words
                    .iter()
                    .filter(|&&w| (w >> j) & 1 != bj)
                    .map(|&w| dist(w))
                    .fold(f64::INFINITY, f64::min);
                let sign = bpsk(bj as u8);
                let expected = if opp.is_finite() {
                    sign * (opp - dist(best)) / 4.0 - l[j]
                } else {
                    0.5 * sign
                };
                assert!((out.extrinsic[j] - clamp_llr(expected)).abs() < 1e-9);
                if opp.is_finite() {
                    assert!((out.extrinsic[j] + l[j]) * sign >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn noiseless_block_decodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let info = random_info(&mut rng);
        let block = tpc_encode(&info).unwrap();
        let soft: Vec<f64> = block.to_bits().iter().map(|&b| 8.0 * bpsk(b)).collect();
        let cfg = FbbaConfig {
            tpc_iterations: 1,
            ..FbbaConfig::default()
        };
        let (out, hard) = tpc_decode(&soft, &cfg).unwrap();
        assert_eq!(hard, info);
        assert!(out.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn corrects_channel_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let info = random_info(&mut rng);
        let block = tpc_encode(&info).unwrap().to_bits();
        // Eb/N0 = 3.5 dB at rate 0.7932.
        let ebn0 = 10f64.powf(0.35);
        let sigma = (1.0 / (2.0 * RATE * ebn0)).sqrt();
        let llr = noisy_llrs(&mut rng, &block, sigma);
        let raw_errors = info_decisions(&llr)
            .iter()
            .zip(&info)
            .filter(|(a, b)| a != b)
            .count();
        let (_, hard) = tpc_decode(&llr, &FbbaConfig::default()).unwrap();
        let errors = hard.iter().zip(&info).filter(|(a, b)| a != b).count();
        assert!(raw_errors > 20, "{raw_errors}");
        assert_eq!(errors, 0);
    }

    #[test]
    fn hard_output_invariant_under_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let info = random_info(&mut rng);
        let block = tpc_encode(&info).unwrap().to_bits();
        let llr = noisy_llrs(&mut rng, &block, 0.75);
        let cfg = FbbaConfig::default();
        let (_, a) = tpc_decode(&llr, &cfg).unwrap();
        let scaled: Vec<f64> = llr.iter().map(|v| v * 0.37).collect();
        let (_, b) = tpc_decode(&scaled, &cfg.scaled(0.37)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn full_list_on_small_code_is_ml() {
        let code = ComponentCode::hamming8();
        let book: Vec<u64> = (0..16).map(|m| code.encode_mask(m)).collect();
        let mut dec = FbbaDecoder::new(code);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..2000 {
            let sent = book[rng.random_range(0..16)];
            let bits: Vec<u8> = (0..8).map(|j| ((sent >> j) & 1) as u8).collect();
            let l = noisy_llrs(&mut rng, &bits, 0.9);
            let corr = |c: u64| (0..8).map(|j| bpsk(((c >> j) & 1) as u8) * l[j]).sum::<f64>();
            let ml = *book.iter().max_by(|a, b| corr(**a).total_cmp(&corr(**b))).unwrap();
            let list = dec.candidates(&l, 4);
            assert_eq!(list.candidates.len(), 16);
            assert_eq!(dec.decode(&l, 4, 0.5, 0.5).hard, ml);
        }
    }
}
