//! Binary matrices and words packed into `u64` rows (at most 64 columns).

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_COLS: usize = 64;

/// Binary word of up to 64 bits; bit `j` of the mask is position `j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryWord {
    bits: u64,
    len: usize,
}

impl BinaryWord {
    pub fn from_mask(bits: u64, len: usize) -> Self {
        assert!(len <= MAX_COLS);
        let mask = low_mask(len);
        Self {
            bits: bits & mask,
            len,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_mask(0, len)
    }

    /// Accepts `0`/`1` entries; anything else is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.len() > MAX_COLS {
            return Err(Error::LengthMismatch {
                expected: MAX_COLS,
                actual: bits.len(),
            });
        }
        let mut mask = 0u64;
        for (j, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => mask |= 1 << j,
                _ => return Err(Error::Config(format!("bit value {b} at position {j}"))),
            }
        }
        Ok(Self {
            bits: mask,
            len: bits.len(),
        })
    }

    pub fn mask(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, j: usize) -> u8 {
        ((self.bits >> j) & 1) as u8
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|j| self.get(j)).collect()
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|j| if self.get(j) == 1 { '1' } else { '0' })
            .collect();
        write!(f, "BinaryWord({s})")
    }
}

#[inline]
pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

#[inline]
pub(crate) fn parity(v: u64) -> u64 {
    (v.count_ones() & 1) as u64
}

/// Dense GF(2) matrix, one `u64` per row.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: Vec<u64>,
    cols: usize,
    rank: usize,
}

impl Gf2Matrix {
    pub fn from_rows(rows: Vec<u64>, cols: usize) -> Result<Self> {
        if cols == 0 || cols > MAX_COLS {
            return Err(Error::Config(format!("unsupported column count {cols}")));
        }
        let mask = low_mask(cols);
        if rows.iter().any(|&r| r & !mask != 0) {
            return Err(Error::Config("row has bits beyond the column count".into()));
        }
        let rank = rank_of(&rows);
        Ok(Self { rows, cols, rank })
    }

    /// Builds a matrix from column bitmasks (bit `i` of `columns[j]` is entry `(i, j)`).
    pub fn from_columns(columns: &[u64], n_rows: usize) -> Result<Self> {
        let mut rows = vec![0u64; n_rows];
        for (j, &c) in columns.iter().enumerate() {
            for (i, row) in rows.iter_mut().enumerate() {
                *row |= ((c >> i) & 1) << j;
            }
        }
        Self::from_rows(rows, columns.len())
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        ((self.rows[r] >> c) & 1) as u8
    }

    pub fn column(&self, c: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (((r >> c) & 1) << i))
    }

    /// `H * w^T` as a bitmask over rows.
    pub fn syndrome(&self, w: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (parity(r & w) << i))
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.cols)?;
        let cols: Vec<u64> = perm.iter().map(|&p| self.column(p)).collect();
        Self::from_columns(&cols, self.n_rows())
    }

    /// True when the last `rows` columns form an identity matrix, row `i`
    /// owning column `cols - rows + i`.
    pub fn is_systematic(&self) -> bool {
        let m = self.rows.len();
        if m > self.cols {
            return false;
        }
        let base = self.cols - m;
        let zone = low_mask(self.cols) & !low_mask(base);
        self.rows
            .iter()
            .enumerate()
            .all(|(i, &r)| r & zone == 1u64 << (base + i))
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} rank {}", self.rows.len(), self.cols, self.rank)?;
        for &r in &self.rows {
            let s: String = (0..self.cols)
                .map(|j| if (r >> j) & 1 == 1 { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

fn rank_of(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

pub fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Config("not a permutation".into()));
        }
    }
    Ok(())
}

/// A check matrix brought to systematic form over a reordered set of positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Systematized {
    /// Identity on the last `n - k` columns.
    pub h_sys: Gf2Matrix,
    /// Position `j` of the systematic order is original position `perm[j]`.
    pub perm: Vec<usize>,
    /// Column swaps `(pivot_position, replacement_position)` forced by
    /// dependent columns, in the order they were applied.
    pub swaps: Vec<(usize, usize)>,
}

/// Gauss-Jordan elimination of a column-permuted check matrix.
///
/// Pivots are taken from the last column backwards. When the column at a
/// pivot position is dependent on the pivots already chosen, it is swapped
/// with the nearest earlier column that is independent.
pub fn gauss_jordan_systematize(h_permuted: &Gf2Matrix, perm: &[usize]) -> Result<Systematized> {
    let n = h_permuted.n_cols();
    check_permutation(perm, n)?;
    let m = h_permuted.n_rows();
    if m > n {
        return Err(Error::RankDeficient {
            rank: h_permuted.rank(),
            needed: m,
        });
    }
    let mut rows = h_permuted.rows.clone();
    let mut perm = perm.to_vec();
    let mut swaps = Vec::new();
    systematize_rows(&mut rows, n, &mut perm, |p, q| swaps.push((p, q))).ok_or(
        Error::RankDeficient {
            rank: h_permuted.rank(),
            needed: m,
        },
    )?;
    let h_sys = Gf2Matrix::from_rows(rows, n)?;
    Ok(Systematized { h_sys, perm, swaps })
}

/// In-place core of [`gauss_jordan_systematize`]; `None` on rank deficiency.
pub(crate) fn systematize_rows(
    rows: &mut [u64],
    n: usize,
    perm: &mut [usize],
    mut on_swap: impl FnMut(usize, usize),
) -> Option<()> {
    let m = rows.len();
    for r in (0..m).rev() {
        let p = n - m + r;
        // Rows r+1..m already own pivots.
        let holds = |rows: &[u64], col: usize| rows[..=r].iter().position(|&v| (v >> col) & 1 == 1);
        let mut pivot = holds(rows, p);
        if pivot.is_none() {
            let q = (0..p).rev().find(|&q| holds(rows, q).is_some())?;
            for row in rows.iter_mut() {
                *row = swap_bits(*row, p, q);
            }
            perm.swap(p, q);
            on_swap(p, q);
            pivot = holds(rows, p);
        }
        rows.swap(pivot?, r);
        let pivot_row = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && (*row >> p) & 1 == 1 {
                *row ^= pivot_row;
            }
        }
    }
    Some(())
}

#[inline]
fn swap_bits(v: u64, a: usize, b: usize) -> u64 {
    let x = ((v >> a) ^ (v >> b)) & 1;
    v ^ ((x << a) | (x << b))
}

/// Completes the parity positions of a systematic check matrix: `info`
/// fills positions `0..k` and the result satisfies `h_sys * c^T == 0`.
pub fn sys_reencode(info: &BinaryWord, h_sys: &Gf2Matrix) -> Result<BinaryWord> {
    if !h_sys.is_systematic() {
        return Err(Error::NotSystematic);
    }
    let n = h_sys.n_cols();
    let k = n - h_sys.n_rows();
    if info.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            actual: info.len(),
        });
    }
    Ok(BinaryWord::from_mask(
        reencode_mask(info.mask(), h_sys.rows(), k),
        n,
    ))
}

/// Unchecked core of [`sys_reencode`].
#[inline]
pub(crate) fn reencode_mask(info: u64, rows: &[u64], k: usize) -> u64 {
    let info = info & low_mask(k);
    rows.iter()
        .enumerate()
        .fold(info, |acc, (i, &r)| acc | (parity(r & info) << (k + i)))
}
