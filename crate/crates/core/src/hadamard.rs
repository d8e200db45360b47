//! Sylvester-Hadamard matrices and the tensor-product row family used by
//! the bit-encoding gadgets.
//!
//! `HadamardMatrix` entries are never stored: row `i`, column `j`
//! (1-indexed) is `(-1)^popcount((i-1) & (j-1))`, which reproduces the
//! Sylvester doubling `[[H, H], [H, -H]]` with an all-ones first row and
//! column. The derived family takes all tensor products `H_i (x) H_j` for
//! `2 <= i, j <= 2^k`: each such row sums to zero, and distinct rows are
//! orthogonal because `<u (x) v, w (x) z> = <u, w> * <v, z>`.

use crate::error::{Error, Result};

/// Largest supported `k`; order 2^12 = 4096 keeps materialized rows cheap.
pub const MAX_K: u32 = 12;

/// Implicit Sylvester-Hadamard matrix of order `2^k`.
#[derive(Debug, Clone, Copy)]
pub struct HadamardMatrix {
    k: u32,
    order: usize,
}

impl HadamardMatrix {
    pub fn new(k: u32) -> Result<Self> {
        if k > MAX_K {
            return Err(Error::SizeCap {
                what: "Hadamard order exponent",
                cap: MAX_K as usize,
                got: k as usize,
            });
        }
        Ok(HadamardMatrix { k, order: 1 << k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry at 1-indexed `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> i8 {
        debug_assert!((1..=self.order).contains(&row));
        debug_assert!((1..=self.order).contains(&col));
        let bits = ((row - 1) & (col - 1)).count_ones();
        if bits % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Materialized 1-indexed row.
    pub fn row(&self, row: usize) -> Result<Vec<i8>> {
        if !(1..=self.order).contains(&row) {
            return Err(Error::InvalidInput(format!(
                "row {row} out of range 1..={}",
                self.order
            )));
        }
        Ok((1..=self.order).map(|c| self.entry(row, c)).collect())
    }
}

/// One row of the tensor family: the materialized entries plus the two
/// Hadamard factor rows it was built from.
#[derive(Debug, Clone)]
pub struct EncodingRow {
    pub entries: Vec<i8>,
    pub h_a: Vec<i8>,
    pub h_b: Vec<i8>,
}

/// The family `{ H_i (x) H_j : 2 <= i, j <= 2^k }` over `2^(2k)` columns.
///
/// Rows are 1-indexed `1..=(2^k - 1)^2` in row-major `(i, j)` order.
/// Column `(a-1) * 2^k + (b-1)` (0-indexed) holds `H_i[a] * H_j[b]` for
/// 1-indexed `a, b`.
#[derive(Debug, Clone, Copy)]
pub struct EncodingMatrix {
    h: HadamardMatrix,
    side: usize, // 2^k - 1 distinct factor rows per axis
}

impl EncodingMatrix {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput(
                "tensor family needs k >= 1 (no zero-sum rows at order 2)".into(),
            ));
        }
        let h = HadamardMatrix::new(k)?;
        Ok(EncodingMatrix {
            h,
            side: h.order() - 1,
        })
    }

    pub fn k(&self) -> u32 {
        self.h.k()
    }

    pub fn rows(&self) -> usize {
        self.side * self.side
    }

    pub fn columns(&self) -> usize {
        self.h.order() * self.h.order()
    }

    /// Map row index `t` (1-indexed) to its Hadamard factor pair `(i, j)`,
    /// both in `2..=2^k`, row-major in `i` then `j`.
    pub fn row_index_pair(&self, t: usize) -> Result<(usize, usize)> {
        if !(1..=self.rows()).contains(&t) {
            return Err(Error::InvalidInput(format!(
                "row {t} out of range 1..={}",
                self.rows()
            )));
        }
        let i = 2 + (t - 1) / self.side;
        let j = 2 + (t - 1) % self.side;
        Ok((i, j))
    }

    /// Materialize row `t` along with its factors.
    pub fn row(&self, t: usize) -> Result<EncodingRow> {
        let (i, j) = self.row_index_pair(t)?;
        let h_a = self.h.row(i)?;
        let h_b = self.h.row(j)?;
        let order = self.h.order();
        let mut entries = Vec::with_capacity(order * order);
        for &ea in &h_a {
            for &eb in &h_b {
                entries.push(ea * eb);
            }
        }
        Ok(EncodingRow { entries, h_a, h_b })
    }
}

/// Exact integer inner product of two sign rows.
pub fn dot(a: &[i8], b: &[i8]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x as i64 * y as i64).sum()
}
