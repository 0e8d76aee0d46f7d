use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::FieldError;

/// A field element with integer coordinates in the basis of its table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntElement {
    coords: Vec<BigInt>,
}

/// A field element with rational coordinates.
///
/// `BigRational` keeps every coordinate reduced with a positive denominator, so
/// derived equality and hashing compare values, not representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatElement {
    coords: Vec<BigRational>,
}

fn check_dims(a: usize, b: usize) -> Result<(), FieldError> {
    if a == b {
        Ok(())
    } else {
        Err(FieldError::DimensionMismatch { expected: a, found: b })
    }
}

impl IntElement {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![BigInt::zero(); n])
    }

    /// The basis vector `λ_{index+1}`.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut e = Self::zero(n);
        e.coords[index] = BigInt::one();
        e
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::new(
            self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::new(
            self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn to_rat(&self) -> RatElement {
        RatElement::new(
            self.coords
                .iter()
                .map(|a| BigRational::from_integer(a.clone()))
                .collect(),
        )
    }
}

impl RatElement {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self { coords }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![BigRational::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::new(
            self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::new(
            self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|a| -a).collect())
    }

    /// Lossless conversion back to integer coordinates; `None` if any
    /// denominator is not 1.
    pub fn to_int(&self) -> Option<IntElement> {
        self.coords
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntElement::new)
    }
}

impl From<IntElement> for RatElement {
    fn from(x: IntElement) -> Self {
        x.to_rat()
    }
}

fn write_coords<T: fmt::Display>(f: &mut fmt::Formatter<'_>, coords: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, c) in coords.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, ")")
}

impl fmt::Display for IntElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.coords)
    }
}

impl fmt::Display for RatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.coords)
    }
}
