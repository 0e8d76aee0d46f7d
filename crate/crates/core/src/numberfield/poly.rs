use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::FieldError;

/// A monic integer polynomial `c_0 + c_1 x + … + x^n` with `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPolynomial {
    coefficients: Vec<BigInt>,
}

impl MinimalPolynomial {
    /// Coefficients in ascending order of degree.
    pub fn new(coefficients: Vec<BigInt>) -> Result<Self, FieldError> {
        if coefficients.len() < 2 {
            return Err(FieldError::DegreeTooSmall);
        }
        if !coefficients.last().is_some_and(One::is_one) {
            return Err(FieldError::NotMonic);
        }
        Ok(Self { coefficients })
    }

    pub fn from_i64s(coefficients: &[i64]) -> Result<Self, FieldError> {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    fn derivative_f64(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, c)| acc * x + i as f64 * c.to_f64().unwrap_or(f64::NAN))
    }

    /// `Σ |c_i| |x|^i`, the natural scale against which a residual is judged.
    pub fn magnitude_f64(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x.abs() + c.to_f64().unwrap_or(f64::NAN).abs())
    }

    /// A few Newton steps from `x`. Stops early once the step stalls.
    pub fn polish_root(&self, mut x: f64) -> f64 {
        for _ in 0..32 {
            let d = self.derivative_f64(x);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let next = x - self.eval_f64(x) / d;
            if !next.is_finite() {
                break;
            }
            if next == x {
                break;
            }
            x = next;
        }
        x
    }

    /// Coordinates of `x^e mod p` in the power basis `1, x, …, x^{n-1}`,
    /// for every `e` in `0..count`.
    pub fn reduced_powers(&self, count: usize) -> Vec<Vec<BigInt>> {
        let n = self.degree();
        let mut out = Vec::with_capacity(count);
        let mut cur = vec![BigInt::zero(); n];
        cur[0] = BigInt::one();
        for _ in 0..count {
            out.push(cur.clone());
            // multiply by x, then fold x^n back using x^n = -(c_0 + … + c_{n-1} x^{n-1})
            let top = cur.pop().unwrap_or_default();
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (slot, c) in cur.iter_mut().zip(&self.coefficients) {
                    *slot -= &top * c;
                }
            }
        }
        out
    }
}
