//! Discrete multiplexing waveforms.
//!
//! A waveform is represented by its `k` symbol-spaced samples, one per
//! shift interval, scaled to unit energy. Each received sample of an
//! overlapped stream is then the tap-weighted sum of exactly `k` symbols.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};

/// Default sidelobe attenuation of the Chebyshev waveform.
pub const DEFAULT_ATTENUATION_DB: f64 = 80.0;

const ENERGY_TOL: f64 = 1e-12;

/// Unit-energy overlap taps.
#[derive(Debug, Clone, PartialEq)]
pub struct TapVector {
    taps: Vec<f64>,
    label: String,
}

impl TapVector {
    fn normalized(raw: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidWaveform("non-finite tap".into()));
        }
        let energy: f64 = raw.iter().map(|v| v * v).sum();
        if energy == 0.0 {
            return Err(Error::InvalidWaveform("all taps are zero".into()));
        }
        let scale = energy.sqrt().recip();
        let taps = raw.into_iter().map(|v| v * scale).collect();
        Ok(Self {
            taps,
            label: label.into(),
        })
    }

    /// Overlap coefficient (number of taps).
    pub fn k(&self) -> usize {
        self.taps.len()
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|v| v * v).sum()
    }

    /// Checks the type invariants; constructors guarantee them.
    pub fn is_valid(&self) -> bool {
        !self.taps.is_empty()
            && self.taps.iter().all(|v| v.is_finite())
            && (self.energy() - 1.0).abs() <= ENERGY_TOL
    }
}

/// Dolph-Chebyshev window of length `k` with `attenuation_db` sidelobe
/// suppression, normalized to unit energy.
pub fn chebyshev_taps(k: usize, attenuation_db: f64) -> Result<TapVector> {
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    if !attenuation_db.is_finite() || attenuation_db <= 0.0 {
        return Err(Error::InvalidWaveform(format!(
            "attenuation must be positive and finite, got {attenuation_db}"
        )));
    }
    let mut w = dolph_chebyshev(k, attenuation_db);
    // The window is symmetric in exact arithmetic; mirror to make it bitwise so.
    for i in 0..k / 2 {
        let avg = 0.5 * (w[i] + w[k - 1 - i]);
        w[i] = avg;
        w[k - 1 - i] = avg;
    }
    TapVector::normalized(w, format!("chebyshev{attenuation_db}"))
}

/// Frequency-sampled Chebyshev polynomial followed by an inverse DFT.
fn dolph_chebyshev(m: usize, attenuation_db: f64) -> Vec<f64> {
    if m == 1 {
        return vec![1.0];
    }
    let order = (m - 1) as f64;
    let ripple = 10f64.powf(attenuation_db.abs() / 20.0);
    let beta = (ripple.acosh() / order).cosh();
    let cheb = |x: f64| -> f64 {
        if x > 1.0 {
            (order * x.acosh()).cosh()
        } else if x < -1.0 {
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            sign * (order * (-x).acosh()).cosh()
        } else {
            (order * x.acos()).cos()
        }
    };
    let mf = m as f64;
    // Real part of the forward DFT of the sampled response.
    let dft_re = |spectrum: &[(f64, f64)], n: usize| -> f64 {
        spectrum
            .iter()
            .enumerate()
            .map(|(k, &(re, im))| {
                let ang = -2.0 * PI * (k * n) as f64 / mf;
                re * ang.cos() - im * ang.sin()
            })
            .sum()
    };
    let mut w: Vec<f64>;
    if m % 2 == 1 {
        let spectrum: Vec<(f64, f64)> = (0..m)
            .map(|k| (cheb(beta * (PI * k as f64 / mf).cos()), 0.0))
            .collect();
        let half = m.div_ceil(2);
        let tail: Vec<f64> = (0..half).map(|n| dft_re(&spectrum, n)).collect();
        w = tail[1..].iter().rev().copied().collect();
        w.extend_from_slice(&tail);
    } else {
        let spectrum: Vec<(f64, f64)> = (0..m)
            .map(|k| {
                let p = cheb(beta * (PI * k as f64 / mf).cos());
                let ph = PI * k as f64 / mf;
                (p * ph.cos(), p * ph.sin())
            })
            .collect();
        let half = m / 2 + 1;
        let tail: Vec<f64> = (0..half).map(|n| dft_re(&spectrum, n)).collect();
        w = tail[1..half].iter().rev().copied().collect();
        w.extend_from_slice(&tail[1..half]);
    }
    let peak = w.iter().cloned().fold(f64::MIN, f64::max);
    w.iter_mut().for_each(|v| *v /= peak);
    w
}

/// Rectangular waveform: all taps equal `1/sqrt(k)`.
pub fn rect_taps(k: usize) -> Result<TapVector> {
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    TapVector::normalized(vec![1.0; k], "rect")
}

/// Custom waveform, scaled to unit energy.
pub fn load_taps(source: &[f64]) -> Result<TapVector> {
    TapVector::normalized(source.to_vec(), "custom")
}

/// Parses one value per line; blank lines and `#` comments are skipped.
pub fn parse_taps(text: &str) -> Result<TapVector> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let v: f64 = content.parse().map_err(|_| {
            Error::InvalidWaveform(format!("line {}: cannot parse {content:?}", lineno + 1))
        })?;
        values.push(v);
    }
    load_taps(&values)
}

pub fn load_taps_file(path: &Path) -> Result<TapVector> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
    parse_taps(&text)
}
