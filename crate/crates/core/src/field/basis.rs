use rand_core::RngCore;

use super::{CoeffVector, FieldError, FieldSpec, RowSpace};
use crate::rng::uniform_below;

/// Reduced row-echelon basis over any prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    field: FieldSpec,
    dim: usize,
    /// Rows sorted by pivot column; each row is `dim` entries long.
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `dst += c * src` over the columns `from..`.
    #[inline]
    fn axpy(field: FieldSpec, dst: &mut [u32], c: u32, src: &[u32], from: usize) {
        let q = u64::from(field.q());
        let c = u64::from(c);
        for (d, &s) in dst[from..].iter_mut().zip(&src[from..]) {
            if s != 0 {
                *d = ((u64::from(*d) + c * u64::from(s)) % q) as u32;
            }
        }
    }

    #[cfg(debug_assertions)]
    fn check_new_row(&self, at: usize) {
        let p = self.pivots[at];
        debug_assert_eq!(self.rows[at][p], 1, "pivot entry must be 1");
        for (i, row) in self.rows.iter().enumerate() {
            if i != at {
                debug_assert_eq!(row[p], 0, "new pivot column not cleared");
                debug_assert_eq!(self.rows[at][self.pivots[i]], 0, "new row not reduced");
            }
        }
        debug_assert!(self.pivots.windows(2).all(|w| w[0] < w[1]));
    }
}

impl RowSpace for SubspaceBasis {
    type Row = Vec<u32>;

    fn empty(field: FieldSpec, dim: usize) -> Result<Self, FieldError> {
        Ok(Self { field, dim, rows: Vec::new(), pivots: Vec::new() })
    }

    fn field(&self) -> FieldSpec {
        self.field
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn zero_row(&self) -> Vec<u32> {
        vec![0; self.dim]
    }

    fn row_from_coeffs(&self, v: &CoeffVector) -> Result<Vec<u32>, FieldError> {
        if v.dim() != self.dim {
            return Err(FieldError::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        if let Some(&entry) = v.entries().iter().find(|&&e| e >= self.field.q()) {
            return Err(FieldError::EntryOutOfRange { entry, q: self.field.q() });
        }
        Ok(v.entries().to_vec())
    }

    fn row_to_coeffs(&self, row: &Vec<u32>) -> CoeffVector {
        CoeffVector(row.clone())
    }

    fn row_is_zero(row: &Vec<u32>) -> bool {
        row.iter().all(|&e| e == 0)
    }

    fn random_combination_into<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
        out: &mut Vec<u32>,
    ) -> Result<(), FieldError> {
        if self.rows.is_empty() {
            return Err(FieldError::EmptyBasis);
        }
        out.clear();
        out.resize(self.dim, 0);
        if self.rows.len() == self.dim {
            // A uniform combination of a full basis is a uniform vector.
            for e in out.iter_mut() {
                *e = uniform_below(rng, self.field.q());
            }
            return Ok(());
        }
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = uniform_below(rng, self.field.q());
            if c != 0 {
                Self::axpy(self.field, out, c, row, p);
            }
        }
        Ok(())
    }

    fn reduce(&self, row: &mut Vec<u32>) {
        for (basis_row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = row[p];
            if c != 0 {
                let neg = self.field.q() - c;
                Self::axpy(self.field, row, neg, basis_row, p);
            }
        }
    }

    fn insert_reduced(&mut self, row: &Vec<u32>) {
        let p = row.iter().position(|&e| e != 0).expect("insert_reduced: zero row");
        let scale = self.field.inv(row[p]).expect("nonzero pivot");
        let new_row: Vec<u32> = row.iter().map(|&e| self.field.mul(e, scale)).collect();
        for existing in &mut self.rows {
            let c = existing[p];
            if c != 0 {
                let neg = self.field.q() - c;
                Self::axpy(self.field, existing, neg, &new_row, p);
            }
        }
        let at = self.pivots.partition_point(|&x| x < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, new_row);
        #[cfg(debug_assertions)]
        self.check_new_row(at);
    }

    fn basis_rows(&self) -> Vec<CoeffVector> {
        self.rows.iter().cloned().map(CoeffVector).collect()
    }

    fn is_reduced_echelon(&self) -> bool {
        if self.rows.len() != self.pivots.len() || self.rows.len() > self.dim {
            return false;
        }
        if !self.pivots.windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        self.rows.iter().zip(&self.pivots).enumerate().all(|(i, (row, &p))| {
            row.len() == self.dim
                && row[..p].iter().all(|&e| e == 0)
                && row[p] == 1
                && self.rows.iter().enumerate().all(|(j, other)| j == i || other[p] == 0)
        })
    }

    fn same_rows(&self, other: &Self) -> bool {
        self.pivots == other.pivots && self.rows == other.rows
    }

    fn rows_escape(&self, receiver: &Self) -> bool {
        // Every leading position of a subspace is a pivot of its RREF, so a
        // sender pivot missing from the receiver settles the question.
        if self.pivots.iter().any(|p| receiver.pivots.binary_search(p).is_err()) {
            return true;
        }
        let mut scratch = Vec::with_capacity(self.dim);
        self.rows.iter().any(|row| {
            scratch.clear();
            scratch.extend_from_slice(row);
            receiver.reduce(&mut scratch);
            !Self::row_is_zero(&scratch)
        })
    }
}
