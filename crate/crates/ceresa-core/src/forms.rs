//! Symmetric 6x6 forms over the degree-two monomial basis
//! e0^2, e1^2, e2^2, e0e1, e0e2, e1e2.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, Rational};
use crate::multilinear::Mat;

/// The fixed basis order used for every 6x6 form in this crate:
/// squares first, then the mixed products in lexicographic order.
pub const S2_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

/// Index of the basis monomial containing `a` and `b` (order-insensitive).
pub fn pair_index(a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (0, 2) => 4,
        (1, 2) => 5,
        _ => panic!("pair index out of range: ({a},{b})"),
    }
}

/// A symmetric bilinear form on the degree-two basis above, with exact
/// rational entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricForm6 {
    entries: Mat<Rational>,
}

impl SymmetricForm6 {
    pub fn zero() -> Self {
        SymmetricForm6 {
            entries: Mat::zeros(6, 6),
        }
    }

    /// Wrap a 6x6 matrix; errors unless it is exactly symmetric.
    pub fn new(entries: Mat<Rational>) -> Result<Self> {
        assert_eq!((entries.rows(), entries.cols()), (6, 6));
        for i in 0..6 {
            for j in 0..i {
                if entries.get(i, j) != entries.get(j, i) {
                    return Err(Error::AsymmetricForm);
                }
            }
        }
        Ok(SymmetricForm6 { entries })
    }

    /// Wrap without the symmetry check (for forms built symmetric by
    /// construction).
    pub(crate) fn new_unchecked(entries: Mat<Rational>) -> Self {
        SymmetricForm6 { entries }
    }

    pub fn matrix(&self) -> &Mat<Rational> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.entries.get(i, j)
    }

    /// Entry at the pair of degree-two monomials {a,b}, {c,d}.
    pub fn at(&self, ab: (usize, usize), cd: (usize, usize)) -> &Rational {
        self.entries.get(pair_index(ab.0, ab.1), pair_index(cd.0, cd.1))
    }

    pub fn rank(&self) -> usize {
        self.entries.rank()
    }

    pub fn det(&self) -> Rational {
        self.entries.det()
    }

    pub fn add(&self, other: &SymmetricForm6) -> SymmetricForm6 {
        SymmetricForm6 {
            entries: self.entries.add(&other.entries),
        }
    }

    pub fn sub(&self, other: &SymmetricForm6) -> SymmetricForm6 {
        SymmetricForm6 {
            entries: self.entries.sub(&other.entries),
        }
    }

    pub fn scale(&self, s: &Rational) -> SymmetricForm6 {
        SymmetricForm6 {
            entries: self.entries.scale(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    /// True when the entry at ((a,b),(c,d)) depends only on the multiset
    /// {a,b,c,d}; such forms are exactly the degree-four symmetric tensors.
    pub fn is_multiset_determined(&self) -> bool {
        for (u, &(a, b)) in S2_PAIRS.iter().enumerate() {
            for (v, &(c, d)) in S2_PAIRS.iter().enumerate() {
                let m = self.entries.get(u, v);
                if self.at((a, c), (b, d)) != m || self.at((a, d), (b, c)) != m {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.entries.to_string_rows()
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<Self> {
        if rows.len() != 6 || rows.iter().any(|r| r.len() != 6) {
            return Err(Error::DimensionMismatch("expected a 6x6 matrix".into()));
        }
        let mut m = Mat::zeros(6, 6);
        for (i, row) in rows.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                m.set(i, j, parse_rational(s)?);
            }
        }
        SymmetricForm6::new(m)
    }
}

impl Serialize for SymmetricForm6 {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let mut st = serializer.serialize_struct("SymmetricForm6", 3)?;
        st.serialize_field("matrix", &self.to_string_rows())?;
        st.serialize_field("rank", &self.rank())?;
        st.serialize_field("det", &format_rational(&self.det()))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_int;

    #[test]
    fn asymmetric_rejected() {
        let mut m = Mat::zeros(6, 6);
        m.set(0, 1, rat_int(1));
        assert!(matches!(SymmetricForm6::new(m), Err(Error::AsymmetricForm)));
    }

    #[test]
    fn pair_index_covers_basis() {
        for (i, &(a, b)) in S2_PAIRS.iter().enumerate() {
            assert_eq!(pair_index(a, b), i);
            assert_eq!(pair_index(b, a), i);
        }
    }
}
