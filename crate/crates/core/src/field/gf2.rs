use rand_core::RngCore;

use super::{CoeffVector, FieldError, FieldSpec, RowSpace};

/// Reduced row-echelon basis over GF(2) with rows packed into `u64` words.
///
/// Column `c` lives in bit `c % 64` of word `c / 64`. The row whose pivot is
/// column `c` is stored in slot `c` of a `dim x words` table, so elimination
/// finds rows without any lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Basis {
    dim: usize,
    words: usize,
    rank: usize,
    /// Bit set for every pivot column.
    pivot_mask: Vec<u64>,
    /// Slot `c` (words `c * words ..`) holds the row with pivot `c`; other
    /// slots are zero.
    table: Vec<u64>,
}

#[inline]
fn bit(row: &[u64], col: usize) -> bool {
    row[col / 64] >> (col % 64) & 1 == 1
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

fn lowest_set_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

/// Set bits of a word slice as column indices, ascending.
fn columns(mask: &[u64]) -> impl Iterator<Item = usize> + '_ {
    mask.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let c = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                c
            })
        })
    })
}

impl Gf2Basis {
    /// Pivot columns, ascending.
    pub fn pivots(&self) -> Vec<usize> {
        columns(&self.pivot_mask).collect()
    }

    #[inline]
    fn slot(&self, c: usize) -> &[u64] {
        &self.table[c * self.words..(c + 1) * self.words]
    }

    #[cfg(debug_assertions)]
    fn check_new_row(&self, p: usize) {
        let row = self.slot(p);
        debug_assert_eq!(lowest_set_bit(row), Some(p), "pivot must be the lowest bit");
        for c in columns(&self.pivot_mask) {
            if c != p {
                debug_assert!(!bit(self.slot(c), p), "new pivot column not cleared");
                debug_assert!(!bit(row, c), "new row not reduced");
            }
        }
    }
}

impl RowSpace for Gf2Basis {
    type Row = Vec<u64>;

    fn empty(field: FieldSpec, dim: usize) -> Result<Self, FieldError> {
        if field.q() != 2 {
            return Err(FieldError::NotBinary(field.q()));
        }
        let words = dim.div_ceil(64);
        Ok(Self { dim, words, rank: 0, pivot_mask: vec![0; words], table: vec![0; dim * words] })
    }

    fn field(&self) -> FieldSpec {
        FieldSpec { q: 2 }
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn zero_row(&self) -> Vec<u64> {
        vec![0; self.words]
    }

    fn row_from_coeffs(&self, v: &CoeffVector) -> Result<Vec<u64>, FieldError> {
        if v.dim() != self.dim {
            return Err(FieldError::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        let mut row = self.zero_row();
        for (c, &e) in v.entries().iter().enumerate() {
            match e {
                0 => {}
                1 => row[c / 64] |= 1 << (c % 64),
                entry => return Err(FieldError::EntryOutOfRange { entry, q: 2 }),
            }
        }
        Ok(row)
    }

    fn row_to_coeffs(&self, row: &Vec<u64>) -> CoeffVector {
        CoeffVector((0..self.dim).map(|c| u32::from(bit(row, c))).collect())
    }

    fn row_is_zero(row: &Vec<u64>) -> bool {
        row.iter().all(|&w| w == 0)
    }

    fn random_combination_into<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
        out: &mut Vec<u64>,
    ) -> Result<(), FieldError> {
        if self.rank == 0 {
            return Err(FieldError::EmptyBasis);
        }
        out.clear();
        out.resize(self.words, 0);
        if self.rank == self.dim {
            // A uniform combination of a full basis is a uniform vector.
            for w in out.iter_mut() {
                *w = rng.next_u64();
            }
            if !self.dim.is_multiple_of(64) {
                out[self.words - 1] &= (1u64 << (self.dim % 64)) - 1;
            }
            return Ok(());
        }
        // One fair coin per basis row: the coin of the row with pivot `c` is
        // bit `c % 64` of the word drawn for mask word `c / 64`.
        for w in 0..self.words {
            if self.pivot_mask[w] == 0 {
                continue;
            }
            let mut coins = rng.next_u64() & self.pivot_mask[w];
            while coins != 0 {
                let c = w * 64 + coins.trailing_zeros() as usize;
                coins &= coins - 1;
                xor_into(&mut out[w..], &self.slot(c)[w..]);
            }
        }
        Ok(())
    }

    fn reduce(&self, row: &mut Vec<u64>) {
        // Basis rows are zero on every other pivot column, so the pivot bits
        // of each word can be read once, before that word is modified.
        let words = self.words;
        for w in 0..words {
            let mut hits = row[w] & self.pivot_mask[w];
            while hits != 0 {
                let c = w * 64 + hits.trailing_zeros() as usize;
                hits &= hits - 1;
                xor_into(&mut row[w..], &self.table[c * words + w..(c + 1) * words]);
            }
        }
    }

    fn insert_reduced(&mut self, row: &Vec<u64>) {
        let p = lowest_set_bit(row).expect("insert_reduced: zero row");
        let (pw, words) = (p / 64, self.words);
        let pivots: Vec<usize> = columns(&self.pivot_mask).collect();
        for c in pivots {
            let slot = &mut self.table[c * words..(c + 1) * words];
            if bit(slot, p) {
                xor_into(&mut slot[pw..], &row[pw..]);
            }
        }
        self.table[p * words..(p + 1) * words].copy_from_slice(row);
        self.pivot_mask[pw] |= 1 << (p % 64);
        self.rank += 1;
        #[cfg(debug_assertions)]
        self.check_new_row(p);
    }

    fn basis_rows(&self) -> Vec<CoeffVector> {
        columns(&self.pivot_mask).map(|c| self.row_to_coeffs(&self.slot(c).to_vec())).collect()
    }

    fn is_reduced_echelon(&self) -> bool {
        let pivots = self.pivots();
        if pivots.len() != self.rank || self.rank > self.dim {
            return false;
        }
        (0..self.dim).all(|c| {
            let row = self.slot(c);
            if !bit(&self.pivot_mask, c) {
                return row.iter().all(|&w| w == 0);
            }
            // Lowest bit at `c`, and no other pivot column set.
            lowest_set_bit(row) == Some(c)
                && row
                    .iter()
                    .zip(&self.pivot_mask)
                    .enumerate()
                    .all(|(w, (r, m))| r & m == if w == c / 64 { 1 << (c % 64) } else { 0 })
        })
    }

    fn same_rows(&self, other: &Self) -> bool {
        self.pivot_mask == other.pivot_mask && self.table == other.table
    }

    fn rows_escape(&self, receiver: &Self) -> bool {
        // Every leading position of a subspace is a pivot of its RREF, so a
        // sender pivot missing from the receiver settles the question.
        if self.pivot_mask.iter().zip(&receiver.pivot_mask).any(|(s, r)| s & !r != 0) {
            return true;
        }
        let mut scratch = receiver.zero_row();
        columns(&self.pivot_mask).any(|c| {
            scratch.copy_from_slice(self.slot(c));
            receiver.reduce(&mut scratch);
            !Self::row_is_zero(&scratch)
        })
    }
}
