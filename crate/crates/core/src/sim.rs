//! Monte Carlo BER harness: AWGN channel, Eb/N0 bookkeeping, sweeps, CSV.
//!
//! Every frame draws its information bits and its noise from child streams
//! keyed by (master seed, point index, frame index), so results do not depend
//! on how frames are spread over worker threads. Within a point, frames are
//! decoded in parallel batches and then tallied in frame order; the tally
//! stops at the first frame after which a stopping rule holds.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::codec::{bpsk, hard_bit, ovtdm_encode, BcjrDecoder, SymbolSequence};
use crate::error::{Error, Result};
use crate::link::{make_interleaver_pair, transmit, Receiver, ReceiverConfig, FRAME_BITS, INFO_BITS};
use crate::qam::Qam;
use crate::tpc::{self, TpcDecoder};
use crate::waveform::{chebyshev_taps, load_taps_file, rect_taps, TapVector, DEFAULT_ATTENUATION_DB};

/// Frames decoded per parallel batch, per worker thread.
const BATCH_PER_THREAD: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    TurboA,
    TurboB,
    QamTpc,
    /// Uncoded overlapped BPSK on one real branch.
    OvtdmSingle,
    Bpsk,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::TurboA => "turbo-ovtdm-a",
            SchemeKind::TurboB => "turbo-ovtdm-b",
            SchemeKind::QamTpc => "qam-tpc",
            SchemeKind::OvtdmSingle => "ovtdm-single",
            SchemeKind::Bpsk => "bpsk",
        }
    }

    pub fn is_turbo(self) -> bool {
        matches!(self, SchemeKind::TurboA | SchemeKind::TurboB)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "turbo-ovtdm-a" => SchemeKind::TurboA,
            "turbo-ovtdm-b" => SchemeKind::TurboB,
            "qam-tpc" => SchemeKind::QamTpc,
            "ovtdm-single" => SchemeKind::OvtdmSingle,
            "bpsk" | "bpsk-uncoded" => SchemeKind::Bpsk,
            other => return Err(Error::Config(format!("unknown scheme '{other}'"))),
        })
    }
}

/// Where the overlap taps come from.
#[derive(Debug, Clone, PartialEq)]
pub enum WaveformSpec {
    Chebyshev80,
    Rect,
    File(PathBuf),
}

impl WaveformSpec {
    pub fn resolve(&self, k: usize) -> Result<TapVector> {
        match self {
            WaveformSpec::Chebyshev80 => chebyshev_taps(k, DEFAULT_ATTENUATION_DB),
            WaveformSpec::Rect => rect_taps(k),
            WaveformSpec::File(path) => {
                let taps = load_taps_file(path)?;
                if taps.k() != k {
                    return Err(Error::Config(format!(
                        "waveform file has {} taps but k = {k}",
                        taps.k()
                    )));
                }
                Ok(taps)
            }
        }
    }
}

impl FromStr for WaveformSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chebyshev80" => Ok(WaveformSpec::Chebyshev80),
            "rect" => Ok(WaveformSpec::Rect),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(WaveformSpec::File(PathBuf::from(p))),
                _ => Err(Error::Config(format!("unknown waveform '{s}'"))),
            },
        }
    }
}

/// Eb/N0 grid in dB, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EbN0Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl EbN0Range {
    pub fn single(db: f64) -> Self {
        Self {
            start: db,
            stop: db,
            step: 1.0,
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let ok = self.start.is_finite() && self.stop.is_finite() && self.step.is_finite();
        if !ok || self.step <= 0.0 || self.stop < self.start {
            return Err(Error::Config(format!(
                "bad Eb/N0 range {}:{}:{}",
                self.start, self.stop, self.step
            )));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        // Rounded so that 0.1-style steps print cleanly.
        Ok((0..n)
            .map(|i| ((self.start + i as f64 * self.step) * 1e9).round() / 1e9)
            .collect())
    }
}

impl FromStr for EbN0Range {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad number '{t}' in Eb/N0 range")))
        };
        let r = match parts.as_slice() {
            [a] => EbN0Range::single(num(a)?),
            [a, b, c] => EbN0Range {
                start: num(a)?,
                stop: num(b)?,
                step: num(c)?,
            },
            _ => return Err(Error::Config(format!("Eb/N0 range must be start:stop:step, got '{s}'"))),
        };
        r.points()?;
        Ok(r)
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub scheme: SchemeKind,
    pub k: usize,
    /// QAM order, used by `qam-tpc` only.
    pub m: usize,
    pub ebn0: EbN0Range,
    pub max_frames: u64,
    pub min_bit_errors: u64,
    pub max_info_bits: u64,
    pub seed: u64,
    pub receiver: ReceiverConfig,
    pub waveform: WaveformSpec,
    /// When false the channel adds no noise.
    pub noise: bool,
    /// When false `wall_seconds` is written as 0 so output is byte-stable.
    pub record_timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            scheme: SchemeKind::TurboA,
            k: 6,
            m: 64,
            ebn0: EbN0Range {
                start: 4.0,
                stop: 7.0,
                step: 0.2,
            },
            max_frames: 100_000,
            min_bit_errors: 200,
            max_info_bits: 50_000_000,
            seed: 1,
            receiver: ReceiverConfig::default(),
            waveform: WaveformSpec::Chebyshev80,
            noise: true,
            record_timing: true,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.ebn0.points()?;
        if self.max_frames == 0 || self.min_bit_errors == 0 || self.max_info_bits == 0 {
            return Err(Error::Config("stopping rules must be positive".into()));
        }
        if self.k == 0 || self.k > 16 {
            return Err(Error::InvalidK(self.k));
        }
        if self.scheme == SchemeKind::QamTpc {
            Qam::new(self.m)?;
        }
        self.receiver.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub scheme: SchemeKind,
    pub k: usize,
    pub m: usize,
    pub ebn0_db: f64,
    pub frames: u64,
    pub info_bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub seed: u64,
    pub wall_seconds: f64,
}

pub const CSV_HEADER: &str =
    "scheme,k,m,ebn0_db,frames,info_bits,bit_errors,frame_errors,ber,fer,seed,wall_seconds";

impl BerRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{:.3}",
            self.scheme,
            self.k,
            self.m,
            self.ebn0_db,
            self.frames,
            self.info_bits,
            self.bit_errors,
            self.frame_errors,
            self.ber,
            self.fer,
            self.seed,
            self.wall_seconds
        )
    }
}

pub fn write_csv<W: Write>(mut out: W, records: &[BerRecord]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    writeln!(out, "{CSV_HEADER}").map_err(io)?;
    for r in records {
        writeln!(out, "{}", r.csv_row()).map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn to_csv_string(records: &[BerRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child stream seed for a (master, point, frame, purpose) tuple.
pub fn child_seed(master: u64, point: u64, frame: u64, purpose: u64) -> u64 {
    let mut h = splitmix(master);
    for v in [point, frame, purpose] {
        h = splitmix(h ^ v);
    }
    h
}

/// Adds zero-mean Gaussian noise of variance `sigma2` to each real dimension.
pub fn awgn_add(frame: &[Complex64], sigma2: f64, stream_seed: u64) -> Result<Vec<Complex64>> {
    if sigma2 < 0.0 || !sigma2.is_finite() {
        return Err(Error::InvalidVariance(sigma2));
    }
    if sigma2 == 0.0 {
        return Ok(frame.to_vec());
    }
    let sd = sigma2.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed);
    Ok(frame
        .iter()
        .map(|c| {
            let nr: f64 = rng.sample(StandardNormal);
            let ni: f64 = rng.sample(StandardNormal);
            c + Complex64::new(sd * nr, sd * ni)
        })
        .collect())
}

/// Analytic transmitted energy per frame. Each frame carries `INFO_BITS`
/// information bits; unit-energy taps and constellations make every symbol
/// worth one unit.
pub fn frame_energy(scheme: SchemeKind, m: usize) -> Result<f64> {
    Ok(match scheme {
        // Every code bit goes out once per branch.
        SchemeKind::TurboA | SchemeKind::TurboB => 2.0 * FRAME_BITS as f64,
        SchemeKind::QamTpc => {
            let q = Qam::new(m)?;
            FRAME_BITS as f64 / q.bits_per_symbol() as f64
        }
        SchemeKind::OvtdmSingle | SchemeKind::Bpsk => INFO_BITS as f64,
    })
}

pub fn energy_per_bit(scheme: SchemeKind, m: usize) -> Result<f64> {
    Ok(frame_energy(scheme, m)? / INFO_BITS as f64)
}

/// Noise variance per real dimension for a given Eb/N0.
pub fn ebn0_to_sigma2(ebn0_db: f64, scheme: SchemeKind, k: usize, m: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    if !ebn0_db.is_finite() {
        return Err(Error::Config(format!("Eb/N0 must be finite, got {ebn0_db}")));
    }
    let eb = energy_per_bit(scheme, m)?;
    Ok(eb / 10f64.powf(ebn0_db / 10.0) / 2.0)
}

/// Information bits per transmitted (overlapped or QAM) symbol.
pub fn symbol_efficiency(scheme: SchemeKind, k: usize, m: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    Ok(match scheme {
        SchemeKind::TurboA | SchemeKind::TurboB => tpc::RATE * k as f64,
        SchemeKind::QamTpc => Qam::new(m)?.bits_per_symbol() as f64 * tpc::RATE,
        SchemeKind::OvtdmSingle => k as f64,
        SchemeKind::Bpsk => 1.0,
    })
}

/// Minimum Eb/N0 in dB at which capacity reaches `eta` bits per complex use.
pub fn shannon_limit_ebn0(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::Config(format!("efficiency must be positive, got {eta}")));
    }
    Ok(10.0 * ((eta * std::f64::consts::LN_2).exp_m1() / eta).log10())
}

/// Product code rate rounded to four decimals, as rates are usually quoted.
pub fn quoted_rate() -> f64 {
    (tpc::RATE * 1e4).round() / 1e4
}

/// Efficiency computed from the quoted rate instead of the exact one.
pub fn quoted_symbol_efficiency(scheme: SchemeKind, k: usize, m: usize) -> Result<f64> {
    Ok(symbol_efficiency(scheme, k, m)? / tpc::RATE * quoted_rate())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyRow {
    pub scheme: SchemeKind,
    pub k: usize,
    pub m: usize,
    pub eta: f64,
    pub eta_quoted: f64,
    /// Shannon-limit Eb/N0 at `eta_quoted`.
    pub shannon_ebn0_db: f64,
}

/// The paired OvTDM / QAM configurations.
pub fn efficiency_table() -> Vec<EfficiencyRow> {
    [
        (SchemeKind::TurboA, 6, 0),
        (SchemeKind::QamTpc, 0, 64),
        (SchemeKind::TurboA, 8, 0),
        (SchemeKind::QamTpc, 0, 256),
    ]
    .iter()
    .map(|&(scheme, k, m)| {
        let eta = symbol_efficiency(scheme, k.max(1), m).expect("valid table row");
        let eta_quoted = quoted_symbol_efficiency(scheme, k.max(1), m).expect("valid table row");
        EfficiencyRow {
            scheme,
            k,
            m,
            eta,
            eta_quoted,
            shannon_ebn0_db: shannon_limit_ebn0(eta_quoted).expect("positive efficiency"),
        }
    })
    .collect()
}

pub fn efficiency_table_csv() -> String {
    let mut s = format!(
        "# tpc rate {} (quoted {:.4})\nscheme,k,m,eta,eta_quoted,shannon_ebn0_db\n",
        tpc::RATE,
        quoted_rate()
    );
    for r in efficiency_table() {
        let name = if r.scheme.is_turbo() { "turbo-ovtdm" } else { r.scheme.name() };
        s.push_str(&format!(
            "{name},{},{},{:.6},{:.4},{:.4}\n",
            r.k, r.m, r.eta, r.eta_quoted, r.shannon_ebn0_db
        ));
    }
    s
}

#[derive(Debug, Clone, Copy, Default)]
struct FrameOutcome {
    bits: u64,
    errors: u64,
}

/// Per-thread link state for one sweep.
#[derive(Clone)]
enum Link {
    Turbo { taps: TapVector, rx: Box<Receiver> },
    Qam { qam: Qam, tpc: TpcDecoder, fbba: tpc::FbbaConfig },
    Single { taps: TapVector, bcjr: BcjrDecoder },
    Bpsk,
}

impl Link {
    fn new(cfg: &SweepConfig) -> Result<Self> {
        Ok(match cfg.scheme {
            SchemeKind::TurboA | SchemeKind::TurboB => {
                let taps = cfg.waveform.resolve(cfg.k)?;
                let il = make_interleaver_pair(FRAME_BITS, cfg.seed)?;
                let mut rc = cfg.receiver.clone();
                rc.scheme = if cfg.scheme == SchemeKind::TurboA {
                    crate::link::Scheme::A
                } else {
                    crate::link::Scheme::B
                };
                let rx = Receiver::new(&taps, il, rc)?;
                Link::Turbo {
                    taps,
                    rx: Box::new(rx),
                }
            }
            SchemeKind::QamTpc => Link::Qam {
                qam: Qam::new(cfg.m)?,
                tpc: TpcDecoder::new(),
                fbba: cfg.receiver.fbba.clone(),
            },
            SchemeKind::OvtdmSingle => {
                let taps = cfg.waveform.resolve(cfg.k)?;
                let bcjr = BcjrDecoder::new(&taps);
                Link::Single { taps, bcjr }
            }
            SchemeKind::Bpsk => Link::Bpsk,
        })
    }

    fn run_frame(&mut self, info: &[u8], sigma2: f64, noise_seed: u64) -> Result<Vec<u8>> {
        // The decoders need a positive variance even on a noiseless channel.
        let rx_sigma2 = sigma2.max(1e-6);
        match self {
            Link::Turbo { taps, rx } => {
                let frame = transmit(info, taps, rx.interleavers())?;
                let y = awgn_add(&frame.samples, sigma2, noise_seed)?;
                Ok(rx.receive(&y, rx_sigma2, None)?.0)
            }
            Link::Qam { qam, tpc, fbba } => {
                let code = tpc::tpc_encode(info)?.to_bits();
                let x = qam.modulate(&code);
                let y = awgn_add(&x, sigma2, noise_seed)?;
                let llr = qam.demap(&y, code.len(), rx_sigma2)?;
                if fbba.tpc_iterations == 0 {
                    return Ok(tpc::info_decisions(&llr));
                }
                Ok(tpc.decode(&llr, fbba)?.1)
            }
            Link::Single { taps, bcjr } => {
                let x = SymbolSequence::from_bits(info)?;
                let s = ovtdm_encode(&x, taps);
                let frame: Vec<Complex64> = s.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                let y = awgn_add(&frame, sigma2, noise_seed)?;
                let r: Vec<f64> = y.iter().map(|c| c.re).collect();
                let out = bcjr.decode(&r, &vec![0.0; info.len()], rx_sigma2)?;
                Ok(out.lambda.iter().map(|&v| hard_bit(v)).collect())
            }
            Link::Bpsk => {
                let x: Vec<Complex64> = info.iter().map(|&b| Complex64::new(bpsk(b), 0.0)).collect();
                let y = awgn_add(&x, sigma2, noise_seed)?;
                Ok(y.iter().map(|c| hard_bit(c.re)).collect())
            }
        }
    }
}

/// Random information bits of one frame.
pub fn frame_info_bits(seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..INFO_BITS).map(|_| rng.random_range(0..2u8)).collect()
}

const PURPOSE_INFO: u64 = 1;
const PURPOSE_NOISE: u64 = 2;

fn simulate_frame(link: &mut Link, cfg: &SweepConfig, point: u64, frame: u64, sigma2: f64) -> Result<FrameOutcome> {
    let info = frame_info_bits(child_seed(cfg.seed, point, frame, PURPOSE_INFO));
    let noise_seed = child_seed(cfg.seed, point, frame, PURPOSE_NOISE);
    let decoded = link.run_frame(&info, sigma2, noise_seed)?;
    let errors = decoded.iter().zip(&info).filter(|(a, b)| a != b).count() as u64;
    Ok(FrameOutcome {
        bits: info.len() as u64,
        errors,
    })
}

/// Runs the sweep, one record per Eb/N0 point in ascending order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<BerRecord>> {
    cfg.validate()?;
    let proto = Link::new(cfg)?;
    let mut records = Vec::new();
    for (p, &ebn0_db) in cfg.ebn0.points()?.iter().enumerate() {
        let started = Instant::now();
        let sigma2 = if cfg.noise {
            ebn0_to_sigma2(ebn0_db, cfg.scheme, cfg.k, cfg.m)?
        } else {
            0.0
        };
        let (mut frames, mut bits, mut errors, mut frame_errors) = (0u64, 0u64, 0u64, 0u64);
        let done = |frames: u64, bits: u64, errors: u64| {
            errors >= cfg.min_bit_errors || bits >= cfg.max_info_bits || frames >= cfg.max_frames
        };
        'point: while !done(frames, bits, errors) {
            let first = frames;
            let batch = BATCH_PER_THREAD * rayon::current_num_threads().max(1);
            let count = batch.min((cfg.max_frames - frames) as usize) as u64;
            let outcomes: Vec<Result<FrameOutcome>> = (first..first + count)
                .into_par_iter()
                .map_init(
                    || proto.clone(),
                    |link, f| simulate_frame(link, cfg, p as u64, f, sigma2),
                )
                .collect();
            for o in outcomes {
                let o = o?;
                frames += 1;
                bits += o.bits;
                errors += o.errors;
                frame_errors += u64::from(o.errors > 0);
                if done(frames, bits, errors) {
                    break 'point;
                }
            }
        }
        let wall_seconds = if cfg.record_timing {
            started.elapsed().as_secs_f64()
        } else {
            0.0
        };
        records.push(BerRecord {
            scheme: cfg.scheme,
            k: cfg.k,
            m: if cfg.scheme == SchemeKind::QamTpc { cfg.m } else { 0 },
            ebn0_db,
            frames,
            info_bits: bits,
            bit_errors: errors,
            frame_errors,
            ber: errors as f64 / bits as f64,
            fer: frame_errors as f64 / frames as f64,
            seed: cfg.seed,
            wall_seconds,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::mean_energy;
    use crate::qam::q_function;

    fn quick(scheme: SchemeKind, ebn0: &str) -> SweepConfig {
        SweepConfig {
            scheme,
            k: 1,
            ebn0: ebn0.parse().unwrap(),
            record_timing: false,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn noiseless_awgn_is_identity() {
        let x: Vec<Complex64> = (0..50).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        assert_eq!(awgn_add(&x, 0.0, 3).unwrap(), x);
        assert!(awgn_add(&x, -1.0, 3).is_err());
    }

    #[test]
    fn awgn_variance_and_repeatability() {
        let x = vec![Complex64::new(0.0, 0.0); 1_000_000];
        let sigma2 = 0.37;
        let y = awgn_add(&x, sigma2, 11).unwrap();
        let n = y.len() as f64;
        let var_re = y.iter().map(|c| c.re * c.re).sum::<f64>() / n;
        let var_im = y.iter().map(|c| c.im * c.im).sum::<f64>() / n;
        assert!((var_re / sigma2 - 1.0).abs() < 0.01);
        assert!((var_im / sigma2 - 1.0).abs() < 0.01);
        assert_eq!(awgn_add(&x[..100], sigma2, 11).unwrap(), y[..100].to_vec());
        assert_ne!(awgn_add(&x[..100], sigma2, 12).unwrap(), y[..100].to_vec());
    }

    #[test]
    fn sigma2_mapping() {
        let s = ebn0_to_sigma2(0.0, SchemeKind::Bpsk, 1, 0).unwrap();
        assert!((s - 0.5).abs() < 1e-15);
        for db in [8.0, 10.5, 12.0] {
            let s = ebn0_to_sigma2(db, SchemeKind::QamTpc, 1, 64).unwrap();
            let es_n0_db = 10.0 * (1.0 / (2.0 * s)).log10();
            let want = db + 10.0 * (6.0 * tpc::RATE).log10();
            assert!((es_n0_db - want).abs() < 1e-12);
        }
        let eb = energy_per_bit(SchemeKind::TurboA, 0).unwrap();
        assert!((eb - 8192.0 / 3249.0).abs() < 1e-15);
        assert!(ebn0_to_sigma2(1.0, SchemeKind::QamTpc, 1, 32).is_err());
    }

    #[test]
    fn turbo_energy_matches_accounting() {
        let taps = chebyshev_taps(6, DEFAULT_ATTENUATION_DB).unwrap();
        let il = make_interleaver_pair(FRAME_BITS, 5).unwrap();
        let mut total = 0.0;
        let frames = 20;
        for f in 0..frames {
            let info = frame_info_bits(child_seed(9, 0, f, PURPOSE_INFO));
            let frame = transmit(&info, &taps, &il).unwrap();
            total += mean_energy(&frame) * frame.samples.len() as f64;
        }
        let per_bit = total / (frames as f64 * INFO_BITS as f64);
        let eb = energy_per_bit(SchemeKind::TurboA, 0).unwrap();
        assert!((per_bit / eb - 1.0).abs() < 0.01, "{per_bit} vs {eb}");
    }

    #[test]
    fn efficiency_values() {
        let e6 = symbol_efficiency(SchemeKind::TurboA, 6, 0).unwrap();
        let e8 = symbol_efficiency(SchemeKind::TurboB, 8, 0).unwrap();
        assert!((e6 - 4.759_277_343_75).abs() < 1e-12);
        assert!((e8 - 6.345_703_125).abs() < 1e-12);
        assert_eq!(e6, symbol_efficiency(SchemeKind::QamTpc, 6, 64).unwrap());
        assert_eq!(e8, symbol_efficiency(SchemeKind::QamTpc, 8, 256).unwrap());
        assert_eq!(format!("{:.4}", quoted_rate()), "0.7932");
        let table = efficiency_table();
        let quoted: Vec<String> = table.iter().map(|r| format!("{:.4}", r.eta_quoted)).collect();
        assert_eq!(quoted, ["4.7592", "4.7592", "6.3456", "6.3456"]);
        assert!(efficiency_table_csv().contains("turbo-ovtdm,6,0,4.759277,4.7592,7.3879"));
    }

    #[test]
    fn shannon_limit_values() {
        assert!(shannon_limit_ebn0(1.0).unwrap().abs() < 1e-12);
        let near_zero = shannon_limit_ebn0(1e-9).unwrap();
        assert!((near_zero - 10.0 * std::f64::consts::LN_2.log10()).abs() < 1e-6);
        // High-precision reference values.
        assert!((shannon_limit_ebn0(4.7592).unwrap() - 7.387_874_362_768_467).abs() < 1e-12);
        assert!((shannon_limit_ebn0(6.3456).unwrap() - 11.023_698_089_967_542).abs() < 1e-12);
        assert!(shannon_limit_ebn0(0.0).is_err());
    }

    #[test]
    fn range_parsing() {
        let r: EbN0Range = "4:5:0.1".parse().unwrap();
        let p = r.points().unwrap();
        assert_eq!(p.len(), 11);
        assert_eq!(p[3], 4.3);
        assert_eq!("6.5".parse::<EbN0Range>().unwrap().points().unwrap(), vec![6.5]);
        assert!("5:4:1".parse::<EbN0Range>().is_err());
        assert!("4:5:0".parse::<EbN0Range>().is_err());
        assert!("4:5".parse::<EbN0Range>().is_err());
    }

    #[test]
    fn noise_off_gives_no_errors() {
        for scheme in [SchemeKind::Bpsk, SchemeKind::OvtdmSingle, SchemeKind::QamTpc] {
            let mut cfg = quick(scheme, "0:2:1");
            cfg.noise = false;
            cfg.max_frames = 3;
            for r in run_sweep(&cfg).unwrap() {
                assert_eq!(r.bit_errors, 0);
                assert_eq!(r.frames, 3);
            }
        }
    }

    #[test]
    fn bpsk_matches_closed_form() {
        let mut cfg = quick(SchemeKind::Bpsk, "9.6");
        cfg.min_bit_errors = 200;
        let r = &run_sweep(&cfg).unwrap()[0];
        let p = q_function((2.0 * 10f64.powf(0.96)).sqrt());
        let sd = (p * (1.0 - p) / r.info_bits as f64).sqrt();
        assert!((r.ber - p).abs() < 3.0 * sd, "ber {} vs {p}", r.ber);
        assert!(r.bit_errors >= 200);
    }

    #[test]
    fn bpsk_ber_decreases() {
        let cfg = quick(SchemeKind::Bpsk, "0:6:2");
        let recs = run_sweep(&cfg).unwrap();
        for w in recs.windows(2) {
            assert!(w[1].ber < w[0].ber);
        }
    }

    #[test]
    fn stopping_rules_hold() {
        let mut cfg = quick(SchemeKind::Bpsk, "2:8:3");
        cfg.max_frames = 40;
        cfg.max_info_bits = 60_000;
        for r in run_sweep(&cfg).unwrap() {
            assert!(
                r.bit_errors >= cfg.min_bit_errors
                    || r.info_bits >= cfg.max_info_bits
                    || r.frames >= cfg.max_frames
            );
            assert_eq!(r.ber, r.bit_errors as f64 / r.info_bits as f64);
        }
    }

    #[test]
    fn identical_seeds_identical_csv() {
        let mut cfg = quick(SchemeKind::OvtdmSingle, "2:4:1");
        cfg.k = 3;
        let a = to_csv_string(&run_sweep(&cfg).unwrap());
        let b = to_csv_string(&run_sweep(&cfg).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
        cfg.seed += 1;
        assert_ne!(a, to_csv_string(&run_sweep(&cfg).unwrap()));
    }

    #[test]
    fn parse_names() {
        assert_eq!("turbo-ovtdm-a".parse::<SchemeKind>().unwrap(), SchemeKind::TurboA);
        assert_eq!("bpsk".parse::<SchemeKind>().unwrap(), SchemeKind::Bpsk);
        assert!("ldpc".parse::<SchemeKind>().is_err());
        assert_eq!(
            "file:/tmp/x.txt".parse::<WaveformSpec>().unwrap(),
            WaveformSpec::File("/tmp/x.txt".into())
        );
        assert!("file:".parse::<WaveformSpec>().is_err());
    }
}
