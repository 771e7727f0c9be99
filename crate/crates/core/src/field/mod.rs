//! Prime-field arithmetic and the per-node subspace state.
//!
//! Every node stores the coefficient vectors of the equations it has learned
//! as a basis in reduced row-echelon form. Two interchangeable
//! implementations exist behind [`RowSpace`]:
//!
//! * [`SubspaceBasis`]: any prime `q`, one `u32` per coefficient.
//! * [`Gf2Basis`]: `q = 2` only, rows packed into 64-bit words and reduced with XOR.
//!
//! Both keep the same canonical form, so they report identical ranks and
//! insertion outcomes for identical inputs.

mod basis;
mod gf2;

pub use basis::SubspaceBasis;
pub use gf2::Gf2Basis;

use rand_core::RngCore;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("q must be prime (got {0})")]
    NotPrime(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coefficient {entry} is not an element of GF({q})")]
    EntryOutOfRange { entry: u32, q: u32 },
    #[error("cannot draw a combination from an empty basis")]
    EmptyBasis,
    #[error("the GF(2) basis requires q = 2 (got {0})")]
    NotBinary(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// A prime field `GF(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    q: u32,
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let q = u64::from(q);
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn new(q: u32) -> Result<Self, FieldError> {
        if is_prime(q) {
            Ok(Self { q })
        } else {
            Err(FieldError::NotPrime(q))
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        ((u64::from(a) + u64::from(b)) % u64::from(self.q)) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        ((u64::from(a) + u64::from(self.q - b)) % u64::from(self.q)) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        ((u64::from(a) * u64::from(b)) % u64::from(self.q)) as u32
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a.is_multiple_of(self.q) {
            return Err(FieldError::ZeroInverse);
        }
        let (mut r0, mut r1) = (i64::from(self.q), i64::from(a % self.q));
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        Ok(t0.rem_euclid(i64::from(self.q)) as u32)
    }
}

/// Coefficient part of a message: one field element per initial value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffVector(Vec<u32>);

impl CoeffVector {
    /// Checks every entry against the field.
    pub fn new(entries: Vec<u32>, field: FieldSpec) -> Result<Self, FieldError> {
        if let Some(&entry) = entries.iter().find(|&&e| e >= field.q()) {
            return Err(FieldError::EntryOutOfRange { entry, q: field.q() });
        }
        Ok(Self(entries))
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }
}

/// Outcome of [`RowSpace::reduce_and_insert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Insertion {
    pub inserted: bool,
    pub new_rank: usize,
}

/// A subspace of `GF(q)^dim` kept in reduced row-echelon form.
///
/// `Row` is the implementation's native vector type. The simulator works on
/// native rows; [`CoeffVector`] is the portable interchange form.
pub trait RowSpace: Clone + Send + Sync + Sized {
    type Row: Clone + Send;

    /// The zero subspace.
    fn empty(field: FieldSpec, dim: usize) -> Result<Self, FieldError>;
    fn field(&self) -> FieldSpec;
    fn dim(&self) -> usize;
    fn rank(&self) -> usize;

    fn zero_row(&self) -> Self::Row;
    fn row_from_coeffs(&self, v: &CoeffVector) -> Result<Self::Row, FieldError>;
    fn row_to_coeffs(&self, row: &Self::Row) -> CoeffVector;
    fn row_is_zero(row: &Self::Row) -> bool;

    /// Writes `sum_i c_i * row_i` into `out`, each `c_i` uniform on `GF(q)`.
    fn random_combination_into<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
        out: &mut Self::Row,
    ) -> Result<(), FieldError>;

    /// Eliminates every pivot column from `row`. The result is zero iff
    /// `row` was in the span.
    fn reduce(&self, row: &mut Self::Row);

    /// Appends a row that [`RowSpace::reduce`] already left nonzero.
    fn insert_reduced(&mut self, row: &Self::Row);

    /// Basis rows in pivot order.
    fn basis_rows(&self) -> Vec<CoeffVector>;

    /// Full structural check of the echelon invariant.
    fn is_reduced_echelon(&self) -> bool;

    /// Row-by-row equality; RREF is canonical, so this is subspace equality.
    fn same_rows(&self, other: &Self) -> bool;

    /// The `i`-th node's initial state: `span{e_i}`.
    fn unit(field: FieldSpec, dim: usize, i: usize) -> Result<Self, FieldError> {
        let mut basis = Self::empty(field, dim)?;
        let e = CoeffVector::unit(dim, i);
        basis.reduce_and_insert(&e)?;
        Ok(basis)
    }

    fn random_combination<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<CoeffVector, FieldError> {
        let mut row = self.zero_row();
        self.random_combination_into(rng, &mut row)?;
        Ok(self.row_to_coeffs(&row))
    }

    /// Inserts `v` iff it is independent of the stored rows.
    fn reduce_and_insert(&mut self, v: &CoeffVector) -> Result<Insertion, FieldError> {
        let mut row = self.row_from_coeffs(v)?;
        Ok(self.reduce_and_insert_row(&mut row))
    }

    /// Native-row form of [`RowSpace::reduce_and_insert`]; `row` is left reduced.
    fn reduce_and_insert_row(&mut self, row: &mut Self::Row) -> Insertion {
        self.reduce(row);
        let inserted = !Self::row_is_zero(row);
        if inserted {
            self.insert_reduced(row);
        }
        Insertion { inserted, new_rank: self.rank() }
    }

    fn contains(&self, v: &CoeffVector) -> Result<bool, FieldError> {
        let mut row = self.row_from_coeffs(v)?;
        self.reduce(&mut row);
        Ok(Self::row_is_zero(&row))
    }

    /// `true` iff this subspace is not contained in `receiver`'s.
    ///
    /// Works on scratch copies; neither basis is modified.
    fn is_helpful(&self, receiver: &Self) -> Result<bool, FieldError> {
        if self.dim() != receiver.dim() {
            return Err(FieldError::DimensionMismatch {
                expected: receiver.dim(),
                found: self.dim(),
            });
        }
        if receiver.rank() == receiver.dim() || self.rank() == 0 {
            return Ok(false);
        }
        if self.rank() > receiver.rank() {
            return Ok(true);
        }
        if self.rank() == receiver.rank() {
            return Ok(!self.same_rows(receiver));
        }
        Ok(self.rows_escape(receiver))
    }

    /// Whether some basis row of `self` is outside `receiver`'s span.
    fn rows_escape(&self, receiver: &Self) -> bool;
}

/// Wire size of one message in bits: `ceil(r log2 q) + ceil(n log2 q)`.
///
/// The two terms are rounded up separately (payload block and coefficient
/// block are each packed into whole bits).
pub fn message_size_bits(n: u64, field: FieldSpec, r: u64) -> Result<u64, FieldError> {
    if n == 0 || r == 0 {
        return Err(FieldError::InvalidParameter("n and r must be at least 1"));
    }
    Ok(ceil_log2_pow(field.q(), r) + ceil_log2_pow(field.q(), n))
}

/// `ceil(k * log2 q)`, i.e. the least `b` with `2^b >= q^k`.
fn ceil_log2_pow(q: u32, k: u64) -> u64 {
    let estimate = libm::ceil(k as f64 * libm::log2(f64::from(q))) as u64;
    // Correct float rounding when q^k is small enough to evaluate exactly.
    let exact = u32::try_from(k).ok().and_then(|k| u128::from(q).checked_pow(k));
    match exact {
        Some(qk) => {
            let mut b = estimate.saturating_sub(1);
            while b < 128 && (1u128 << b) < qk {
                b += 1;
            }
            b
        }
        None => estimate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_q() {
        assert_eq!(FieldSpec::new(4), Err(FieldError::NotPrime(4)));
        assert_eq!(FieldSpec::new(1), Err(FieldError::NotPrime(1)));
        assert_eq!(FieldSpec::new(0), Err(FieldError::NotPrime(0)));
        assert!(FieldSpec::new(2).is_ok());
        assert!(FieldSpec::new(65_521).is_ok());
    }

    #[test]
    fn binary_arithmetic() {
        let f = FieldSpec::new(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
        assert_eq!(f.inv(1), Ok(1));
    }

    #[test]
    fn inverse_mod_five() {
        let f = FieldSpec::new(5).unwrap();
        assert_eq!(f.inv(2), Ok(3));
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.inv(0), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn every_nonzero_element_inverts() {
        for q in [2u32, 3, 5, 7, 11, 13, 101, 257] {
            let f = FieldSpec::new(q).unwrap();
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn sub_is_add_inverse() {
        let f = FieldSpec::new(7).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(f.add(f.sub(a, b), b), a);
            }
        }
    }

    #[test]
    fn coeff_vector_rejects_out_of_range() {
        let f = FieldSpec::new(3).unwrap();
        assert!(CoeffVector::new(vec![0, 1, 2], f).is_ok());
        assert_eq!(
            CoeffVector::new(vec![0, 3], f),
            Err(FieldError::EntryOutOfRange { entry: 3, q: 3 })
        );
    }

    #[test]
    fn message_sizes() {
        let two = FieldSpec::new(2).unwrap();
        let three = FieldSpec::new(3).unwrap();
        assert_eq!(message_size_bits(10, two, 8), Ok(18));
        assert_eq!(message_size_bits(1, two, 1), Ok(2));
        // ceil(2 log2 3) = ceil(3.17) = 4, ceil(4 log2 3) = ceil(6.34) = 7
        assert_eq!(message_size_bits(4, three, 2), Ok(11));
        assert!(message_size_bits(0, two, 1).is_err());
    }

    #[test]
    fn ceil_log2_pow_matches_integer_search() {
        for q in [2u32, 3, 5, 7, 31] {
            for k in 1..20u64 {
                let qk = u128::from(q).pow(k as u32);
                let expected = (0..128u64).find(|&b| (1u128 << b) >= qk).unwrap();
                assert_eq!(ceil_log2_pow(q, k), expected, "q={q} k={k}");
            }
        }
    }
}
