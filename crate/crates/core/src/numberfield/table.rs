use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::bareiss;
use super::{FieldError, IntElement, MinimalPolynomial, RatElement};

/// Residual tolerance for a supplied approximate root, relative to the
/// polynomial's magnitude at that point.
pub const ROOT_TOLERANCE: f64 = 1e-6;

/// Relative tolerance for the real embedding being multiplicative.
pub const EMBEDDING_TOLERANCE: f64 = 1e-9;

/// Multiplication table of a nice basis `λ_1, …, λ_n`:
/// `λ_i λ_j = Σ_k c(i,j,k) λ_k` with integer `c`.
///
/// Indices are zero-based throughout the API.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTable {
    n: usize,
    c: Vec<BigInt>,
    unity: IntElement,
    embedding: Vec<f64>,
    terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq)]
struct Term {
    i: usize,
    j: usize,
    k: usize,
    c: BigInt,
}

/// Outcome of a single niceness check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn pass() -> Self {
        Self { passed: true, detail: None }
    }

    fn fail(detail: String) -> Self {
        Self { passed: false, detail: Some(detail) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub symmetry: CheckOutcome,
    pub associativity: CheckOutcome,
    pub unity: CheckOutcome,
    pub embedding: CheckOutcome,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.symmetry.passed && self.associativity.passed && self.unity.passed && self.embedding.passed
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            ("symmetry", &self.symmetry),
            ("associativity", &self.associativity),
            ("unity", &self.unity),
            ("embedding", &self.embedding),
        ]
        .into_iter()
        .filter(|(_, c)| !c.passed)
        .map(|(name, _)| name)
        .collect()
    }
}

impl StructureTable {
    /// Builds a table from raw parts. Only shapes are checked here; use
    /// [`StructureTable::validate`] for the algebraic laws.
    pub fn from_parts(
        c: Vec<Vec<Vec<BigInt>>>,
        unity: IntElement,
        embedding: Vec<f64>,
    ) -> Result<Self, FieldError> {
        let n = c.len();
        if n == 0 {
            return Err(FieldError::EmptyTable);
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for plane in c {
            if plane.len() != n {
                return Err(FieldError::MalformedTable(format!(
                    "expected {n} rows per plane, found {}",
                    plane.len()
                )));
            }
            for row in plane {
                if row.len() != n {
                    return Err(FieldError::MalformedTable(format!(
                        "expected {n} entries per row, found {}",
                        row.len()
                    )));
                }
                flat.extend(row);
            }
        }
        if unity.dim() != n {
            return Err(FieldError::DimensionMismatch { expected: n, found: unity.dim() });
        }
        if embedding.len() != n {
            return Err(FieldError::DimensionMismatch { expected: n, found: embedding.len() });
        }
        if embedding.iter().any(|e| !e.is_finite()) {
            return Err(FieldError::MalformedTable("embedding must be finite".into()));
        }
        Ok(Self::from_flat(n, flat, unity, embedding))
    }

    fn from_flat(n: usize, c: Vec<BigInt>, unity: IntElement, embedding: Vec<f64>) -> Self {
        let mut terms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = &c[(i * n + j) * n + k];
                    if !v.is_zero() {
                        terms.push(Term { i, j, k, c: v.clone() });
                    }
                }
            }
        }
        Self { n, c, unity, embedding, terms }
    }

    /// The table of `ℚ` with basis `{1}`.
    pub fn rational() -> Self {
        Self::from_flat(1, vec![BigInt::one()], IntElement::from_i64s(&[1]), vec![1.0])
    }

    /// Power basis `1, α, …, α^{n-1}` for a root `α` of `p`.
    ///
    /// `alpha_approx` must make `p` vanish to within [`ROOT_TOLERANCE`]; it is
    /// then refined by Newton's method before being used as the embedding.
    pub fn power_basis(p: &MinimalPolynomial, alpha_approx: f64) -> Result<Self, FieldError> {
        let n = p.degree();
        if !alpha_approx.is_finite() {
            return Err(FieldError::NotARoot { alpha: alpha_approx, residual: f64::NAN });
        }
        let residual = p.eval_f64(alpha_approx).abs();
        if residual > ROOT_TOLERANCE * p.magnitude_f64(alpha_approx).max(1.0) {
            return Err(FieldError::NotARoot { alpha: alpha_approx, residual });
        }
        let alpha = p.polish_root(alpha_approx);

        let powers = p.reduced_powers(2 * n - 1);
        let mut c = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                c.extend(powers[i + j].iter().cloned());
            }
        }
        let embedding = (0..n).map(|i| alpha.powi(i as i32)).collect();
        Ok(Self::from_flat(n, c, IntElement::basis(n, 0), embedding))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `c(i, j, k)`, the `λ_k` coordinate of `λ_i λ_j`.
    pub fn entry(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.c[(i * self.n + j) * self.n + k]
    }

    pub fn entries(&self) -> Vec<Vec<Vec<BigInt>>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| (0..self.n).map(|k| self.entry(i, j, k).clone()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn unity(&self) -> &IntElement {
        &self.unity
    }

    pub fn embedding(&self) -> &[f64] {
        &self.embedding
    }

    /// Largest absolute structure constant.
    pub fn c_lambda(&self) -> BigInt {
        self.c.iter().map(|v| v.abs()).max().unwrap_or_default()
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport {
            symmetry: self.check_symmetry(),
            associativity: self.check_associativity(),
            unity: self.check_unity(),
            embedding: self.check_embedding(),
        }
    }

    fn check_symmetry(&self) -> CheckOutcome {
        for i in 0..self.n {
            for j in i + 1..self.n {
                for k in 0..self.n {
                    if self.entry(i, j, k) != self.entry(j, i, k) {
                        return CheckOutcome::fail(format!(
                            "c({i},{j},{k}) = {} but c({j},{i},{k}) = {}",
                            self.entry(i, j, k),
                            self.entry(j, i, k)
                        ));
                    }
                }
            }
        }
        CheckOutcome::pass()
    }

    fn check_associativity(&self) -> CheckOutcome {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let left: BigInt = (0..n)
                            .map(|l| self.entry(i, j, l) * self.entry(l, k, m))
                            .sum();
                        let right: BigInt = (0..n)
                            .map(|l| self.entry(j, k, l) * self.entry(i, l, m))
                            .sum();
                        if left != right {
                            return CheckOutcome::fail(format!(
                                "(λ{i}λ{j})λ{k} and λ{i}(λ{j}λ{k}) differ at coordinate {m}"
                            ));
                        }
                    }
                }
            }
        }
        CheckOutcome::pass()
    }

    fn check_unity(&self) -> CheckOutcome {
        for j in 0..self.n {
            let e = IntElement::basis(self.n, j);
            match self.mul(&self.unity, &e) {
                Ok(p) if p == e => {}
                Ok(p) => {
                    return CheckOutcome::fail(format!("unity · λ{j} = {p}, expected {e}"));
                }
                Err(err) => return CheckOutcome::fail(err.to_string()),
            }
        }
        CheckOutcome::pass()
    }

    fn check_embedding(&self) -> CheckOutcome {
        let n = self.n;
        let unity = self.embed(&self.unity);
        if (unity - 1.0).abs() > EMBEDDING_TOLERANCE {
            return CheckOutcome::fail(format!("unity embeds to {unity}, expected 1"));
        }
        for i in 0..n {
            for j in 0..n {
                let direct = self.embedding[i] * self.embedding[j];
                let via_table: f64 = (0..n)
                    .map(|k| self.entry(i, j, k).to_f64().unwrap_or(f64::NAN) * self.embedding[k])
                    .sum();
                let close = (direct - via_table).abs() <= EMBEDDING_TOLERANCE * direct.abs().max(1.0);
                if !close {
                    return CheckOutcome::fail(format!(
                        "embed(λ{i})·embed(λ{j}) = {direct} but the table gives {via_table}"
                    ));
                }
            }
        }
        CheckOutcome::pass()
    }

    fn check_dim(&self, found: usize) -> Result<(), FieldError> {
        if found == self.n {
            Ok(())
        } else {
            Err(FieldError::DimensionMismatch { expected: self.n, found })
        }
    }

    pub fn mul(&self, x: &IntElement, y: &IntElement) -> Result<IntElement, FieldError> {
        self.check_dim(x.dim())?;
        self.check_dim(y.dim())?;
        let (xs, ys) = (x.coords(), y.coords());
        let mut out = vec![BigInt::zero(); self.n];
        for t in &self.terms {
            if xs[t.i].is_zero() || ys[t.j].is_zero() {
                continue;
            }
            out[t.k] += &t.c * &xs[t.i] * &ys[t.j];
        }
        Ok(IntElement::new(out))
    }

    /// `m·x + b`, exact. This is the hot path of line verification.
    pub fn mul_add(&self, m: &IntElement, x: &IntElement, b: &IntElement) -> Result<IntElement, FieldError> {
        self.check_dim(b.dim())?;
        let mut out = self.mul(m, x)?.into_coords();
        for (slot, bk) in out.iter_mut().zip(b.coords()) {
            *slot += bk;
        }
        Ok(IntElement::new(out))
    }

    pub fn mul_rat(&self, x: &RatElement, y: &RatElement) -> Result<RatElement, FieldError> {
        self.check_dim(x.dim())?;
        self.check_dim(y.dim())?;
        let (xs, ys) = (x.coords(), y.coords());
        let mut out = vec![BigRational::zero(); self.n];
        for t in &self.terms {
            if xs[t.i].is_zero() || ys[t.j].is_zero() {
                continue;
            }
            out[t.k] += BigRational::from_integer(t.c.clone()) * &xs[t.i] * &ys[t.j];
        }
        Ok(RatElement::new(out))
    }

    /// Matrix of `y ↦ x·y`; column `j` holds the coordinates of `x·λ_j`.
    pub fn representation_matrix(&self, x: &RatElement) -> Result<Vec<Vec<BigRational>>, FieldError> {
        self.check_dim(x.dim())?;
        let mut m = vec![vec![BigRational::zero(); self.n]; self.n];
        for t in &self.terms {
            let xi = &x.coords()[t.i];
            if xi.is_zero() {
                continue;
            }
            m[t.k][t.j] += BigRational::from_integer(t.c.clone()) * xi;
        }
        Ok(m)
    }

    /// Multiplicative inverse, by solving `rep(x)·z = unity` exactly.
    pub fn invert(&self, x: &RatElement) -> Result<RatElement, FieldError> {
        self.check_dim(x.dim())?;
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let m = self.representation_matrix(x)?;
        let rhs = self.unity.to_rat();
        bareiss::solve_rational(&m, rhs.coords())
            .map(RatElement::new)
            .ok_or(FieldError::NotAField)
    }

    pub fn div(&self, x: &RatElement, y: &RatElement) -> Result<RatElement, FieldError> {
        self.mul_rat(x, &self.invert(y)?)
    }

    pub fn embed(&self, x: &IntElement) -> f64 {
        x.coords()
            .iter()
            .zip(&self.embedding)
            .map(|(a, e)| a.to_f64().unwrap_or(f64::NAN) * e)
            .sum()
    }

    pub fn embed_rat(&self, x: &RatElement) -> f64 {
        x.coords()
            .iter()
            .zip(&self.embedding)
            .map(|(a, e)| a.to_f64().unwrap_or(f64::NAN) * e)
            .sum()
    }

    /// Replaces the embedding; used to build deliberately inconsistent tables.
    pub fn with_embedding(&self, embedding: Vec<f64>) -> Result<Self, FieldError> {
        self.check_dim(embedding.len())?;
        Ok(Self { embedding, ..self.clone() })
    }
}
