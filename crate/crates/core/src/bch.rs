//! Extended cyclic Hamming-type component codes.
//!
//! The product code uses the extended BCH(64,57) code: the single-error
//! correcting (63,57) BCH code generated by `x^6 + x + 1`, plus an overall
//! even-parity bit, for minimum distance 4. The extended Hamming (8,4) code
//! built the same way from `x^3 + x + 1` is small enough to enumerate and
//! serves as a test bed for the soft decoder.
//!
//! Layout of a codeword: `k` message bits first, then the `m` cyclic parity
//! bits, then the overall parity bit.

use crate::error::{Error, Result};
use crate::gf2::{low_mask, parity, BinaryWord, Gf2Matrix};

/// `x^6 + x + 1`.
pub const EBCH_GENERATOR: u64 = 0b100_0011;
/// `x^3 + x + 1`.
pub const HAMMING8_GENERATOR: u64 = 0b1011;

/// Binary linear block code of length at most 64 given by its check matrix.
#[derive(Debug, Clone)]
pub struct ComponentCode {
    n: usize,
    k: usize,
    degree: usize,
    generator: u64,
    h: Gf2Matrix,
    h_cols: Vec<u64>,
}

impl ComponentCode {
    /// Extended code of the cyclic Hamming code generated by the primitive
    /// polynomial `generator` of degree `m`: length `2^m`, dimension `2^m - 1 - m`.
    pub fn extended_hamming(generator: u64, m: usize) -> Result<Self> {
        if !(2..=6).contains(&m) || generator >> m != 1 || generator & 1 == 0 {
            return Err(Error::Config(format!(
                "generator {generator:#b} is not a degree-{m} polynomial with constant term"
            )));
        }
        let nc = (1usize << m) - 1;
        if polynomial_order(generator, m) != nc {
            return Err(Error::Config(format!("{generator:#b} is not primitive")));
        }
        let n = nc + 1;
        let k = nc - m;
        // Column of position j is alpha^(nc - 1 - j), plus the overall parity row.
        let powers = alpha_powers(generator, m, nc);
        let h_cols: Vec<u64> = (0..n)
            .map(|j| {
                let alpha = if j < nc { powers[nc - 1 - j] } else { 0 };
                alpha | (1 << m)
            })
            .collect();
        let h = Gf2Matrix::from_columns(&h_cols, m + 1)?;
        Ok(Self {
            n,
            k,
            degree: m,
            generator,
            h,
            h_cols,
        })
    }

    /// The extended BCH(64,57) code.
    pub fn ebch64() -> Self {
        Self::extended_hamming(EBCH_GENERATOR, 6).expect("x^6+x+1 is primitive")
    }

    /// The extended Hamming (8,4) code.
    pub fn hamming8() -> Self {
        Self::extended_hamming(HAMMING8_GENERATOR, 3).expect("x^3+x+1 is primitive")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of check rows, `n - k`.
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn check_matrix(&self) -> &Gf2Matrix {
        &self.h
    }

    /// Column bitmasks of the check matrix.
    pub fn check_columns(&self) -> &[u64] {
        &self.h_cols
    }

    pub fn is_codeword(&self, word: u64) -> bool {
        self.h.syndrome(word) == 0
    }

    /// Systematic encoding of a message mask (`k` low bits).
    pub fn encode_mask(&self, msg: u64) -> u64 {
        let m = self.degree;
        let msg = msg & low_mask(self.k);
        let g_low = self.generator & low_mask(m);
        let mut rem = 0u64;
        // Message bit i is the coefficient of x^(nc - 1 - i).
        for i in 0..self.k {
            let fb = ((msg >> i) & 1) ^ ((rem >> (m - 1)) & 1);
            rem = (rem << 1) & low_mask(m);
            if fb == 1 {
                rem ^= g_low;
            }
        }
        let mut word = msg;
        for d in 0..m {
            // Remainder coefficient of x^d sits at position nc - 1 - d.
            let pos = self.n - 2 - d;
            word |= ((rem >> d) & 1) << pos;
        }
        word | (parity(word) << (self.n - 1))
    }

    pub fn encode(&self, msg: &BinaryWord) -> Result<BinaryWord> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: msg.len(),
            });
        }
        Ok(BinaryWord::from_mask(self.encode_mask(msg.mask()), self.n))
    }

    pub fn encode_bits(&self, msg: &[u8]) -> Result<Vec<u8>> {
        Ok(self.encode(&BinaryWord::from_bits(msg)?)?.to_bits())
    }
}

/// Encodes a 57-bit message into an extended BCH(64,57) codeword.
pub fn ebch_encode(msg: &[u8]) -> Result<Vec<u8>> {
    thread_local! {
        static CODE: ComponentCode = ComponentCode::ebch64();
    }
    CODE.with(|c| c.encode_bits(msg))
}

/// The 7 x 64 check matrix of the extended BCH(64,57) code.
pub fn check_matrix() -> Gf2Matrix {
    ComponentCode::ebch64().check_matrix().clone()
}

/// Multiplicative order of `x` modulo `generator` (degree `m`), or 0 if it
/// exceeds `2^m - 1`.
pub fn polynomial_order(generator: u64, m: usize) -> usize {
    let top = 1u64 << m;
    let mut v = 1u64;
    for e in 1..=(1usize << m) {
        v <<= 1;
        if v & top != 0 {
            v ^= generator;
        }
        if v == 1 {
            return e;
        }
    }
    0
}

fn alpha_powers(generator: u64, m: usize, count: usize) -> Vec<u64> {
    let top = 1u64 << m;
    let mut out = Vec::with_capacity(count);
    let mut v = 1u64;
    for _ in 0..count {
        out.push(v);
        v <<= 1;
        if v & top != 0 {
            v ^= generator;
        }
    }
    out
}
