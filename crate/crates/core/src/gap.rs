//! Symmetric coefficient boxes realizing the GAPs `A_m(Λ)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::json;
use crate::numberfield::{FieldError, IntElement};

/// The unique `root` with `root^n ≤ m < (root+1)^n`.
///
/// # Panics
///
/// If `m` is negative or `n` is zero.
pub fn integer_nth_root(m: &BigInt, n: u32) -> BigInt {
    assert!(!m.is_negative(), "integer_nth_root of a negative number");
    assert!(n >= 1, "integer_nth_root with n = 0");
    if m.is_zero() || n == 1 {
        return m.clone();
    }
    // root < 2^(bits/n + 1)
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one() << (m.bits() / u64::from(n) + 1);
    while lo < hi {
        let mid: BigInt = (&lo + &hi + 1u32) >> 1;
        if mid.pow(n) <= *m {
            lo = mid;
        } else {
            hi = mid - 1u32;
        }
    }
    lo
}

/// Coefficient vectors with every `|a_i| ≤ h`; cardinality `(2h+1)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GapBox {
    n: usize,
    h: BigInt,
}

impl Serialize for GapBox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GapBox", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("h", &json::int_to_value(&self.h))?;
        st.serialize_field("cardinality", &json::int_to_value(&self.cardinality()))?;
        st.end()
    }
}

impl GapBox {
    /// # Panics
    ///
    /// If `h` is negative or `n` is zero.
    pub fn new(n: usize, h: BigInt) -> Self {
        assert!(n >= 1, "box dimension must be positive");
        assert!(!h.is_negative(), "box half-width must be non-negative");
        Self { n, h }
    }

    /// The box whose side `2h+1` is the largest odd number not exceeding `m^{1/n}`
    /// (rounded down), i.e. `h = ⌊⌊m^{1/n}⌋ / 2⌋`.
    pub fn for_size(m: &BigInt, n: usize) -> Self {
        let root = integer_nth_root(m, n as u32);
        Self::new(n, root / 2)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> &BigInt {
        &self.h
    }

    /// `2h + 1`.
    pub fn side(&self) -> BigInt {
        &self.h * 2 + 1
    }

    pub fn cardinality(&self) -> BigInt {
        self.side().pow(self.n as u32)
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<bool, FieldError> {
        if x.len() != self.n {
            return Err(FieldError::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok(x.iter().all(|a| a.abs() <= self.h))
    }

    pub fn contains_element(&self, x: &IntElement) -> Result<bool, FieldError> {
        self.contains(x.coords())
    }

    /// The `index`-th vector in lexicographic order, counting from
    /// `(−h, …, −h)`. `index` must be below the cardinality.
    pub fn element_at(&self, index: &BigInt) -> Vec<BigInt> {
        debug_assert!(!index.is_negative() && *index < self.cardinality());
        let side = self.side();
        let mut rest = index.clone();
        let mut coords = vec![BigInt::zero(); self.n];
        for slot in coords.iter_mut().rev() {
            let (q, r) = rest.div_rem(&side);
            *slot = r - &self.h;
            rest = q;
        }
        coords
    }

    /// All vectors in lexicographic order.
    pub fn iter(&self) -> BoxIter {
        BoxIter::starting_at(self, BigInt::zero())
    }

    /// The vectors with lexicographic index in `start..`.
    pub fn iter_from(&self, start: &BigInt) -> BoxIter {
        BoxIter::starting_at(self, start.clone())
    }
}

/// Odometer over a [`GapBox`], last coordinate fastest.
#[derive(Clone, Debug)]
pub struct BoxIter {
    h: BigInt,
    next: Option<Vec<BigInt>>,
}

impl BoxIter {
    fn starting_at(b: &GapBox, start: BigInt) -> Self {
        let next = (start < b.cardinality()).then(|| b.element_at(&start));
        Self { h: b.h.clone(), next }
    }
}

impl Iterator for BoxIter {
    type Item = Vec<BigInt>;

    fn next(&mut self) -> Option<Vec<BigInt>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut advanced = false;
        for slot in succ.iter_mut().rev() {
            if *slot < self.h {
                *slot += 1u32;
                advanced = true;
                break;
            }
            *slot = -self.h.clone();
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn nth_root_examples() {
        assert_eq!(integer_nth_root(&b(5184), 2), b(72));
        assert_eq!(integer_nth_root(&b(0), 3), b(0));
        assert_eq!(integer_nth_root(&b(26), 3), b(2));
        assert_eq!(integer_nth_root(&b(27), 3), b(3));
        assert_eq!(integer_nth_root(&b(1), 5), b(1));
        assert_eq!(integer_nth_root(&b(17), 1), b(17));
    }

    #[test]
    fn box_for_size_examples() {
        let x = GapBox::for_size(&b(9), 2);
        assert_eq!((x.half_width(), x.cardinality()), (&b(1), b(9)));
        let y = GapBox::for_size(&b(1), 3);
        assert_eq!((y.half_width(), y.cardinality()), (&b(0), b(1)));
        let z = GapBox::for_size(&b(5184), 2);
        assert_eq!((z.half_width(), z.cardinality()), (&b(36), b(5329)));
    }

    #[test]
    fn enumerate_examples() {
        let single: Vec<_> = GapBox::new(2, b(0)).iter().collect();
        assert_eq!(single, vec![vec![b(0), b(0)]]);
        let line: Vec<_> = GapBox::new(1, b(1)).iter().collect();
        assert_eq!(line, vec![vec![b(-1)], vec![b(0)], vec![b(1)]]);
        let square: Vec<_> = GapBox::new(2, b(1)).iter().collect();
        assert_eq!(square.len(), 9);
        assert_eq!(square[0], vec![b(-1), b(-1)]);
        assert_eq!(square[1], vec![b(-1), b(0)]);
        assert_eq!(square[8], vec![b(1), b(1)]);
    }

    #[test]
    fn contains_examples() {
        let bx = GapBox::new(2, b(36));
        assert!(bx.contains(&[b(36), b(-36)]).unwrap());
        assert!(!bx.contains(&[b(37), b(0)]).unwrap());
        assert!(bx.contains(&[b(1)]).is_err());
    }

    #[test]
    fn enumerate_matches_contains_exhaustively() {
        for n in 1..=3usize {
            for h in 0..=3i64 {
                let bx = GapBox::new(n, b(h));
                let listed: Vec<_> = bx.iter().collect();
                assert_eq!(BigInt::from(listed.len()), bx.cardinality());
                assert!(listed.iter().all(|v| bx.contains(v).unwrap()));
                let distinct: HashSet<_> = listed.iter().cloned().collect();
                assert_eq!(distinct.len(), listed.len());
                // every vector of the surrounding (h+1)-box that `contains` accepts was listed
                let outer = GapBox::new(n, b(h + 1));
                let accepted = outer.iter().filter(|v| bx.contains(v).unwrap()).count();
                assert_eq!(accepted, listed.len());
                // lexicographic order
                assert!(listed.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn iter_from_and_element_at_agree() {
        let bx = GapBox::new(3, b(2));
        let all: Vec<_> = bx.iter().collect();
        for (i, v) in all.iter().enumerate() {
            assert_eq!(&bx.element_at(&BigInt::from(i)), v);
        }
        let tail: Vec<_> = bx.iter_from(&b(100)).collect();
        assert_eq!(tail, all[100..].to_vec());
        assert_eq!(bx.iter_from(&b(125)).count(), 0);
    }

    #[test]
    fn serializes_with_cardinality() {
        let bx = GapBox::new(2, b(36));
        assert_eq!(
            serde_json::to_string(&bx).unwrap(),
            r#"{"n":2,"h":36,"cardinality":5329}"#
        );
    }
}
