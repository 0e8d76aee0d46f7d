//! The unbalanced GAP-grid construction: parameters, the point grid, and the
//! line family `y = m·x + b`.
//!
//! With `X` the half-width-`h_x` box and `Y` the half-width-`h_y` box, every
//! line whose slope lies in the `h_m` box and intercept in the `h_b` box meets
//! `X × Y` in exactly `|X|` points, provided
//!
//! ```text
//! n² · C_Λ · h_m · h_x + h_b ≤ h_y
//! ```
//!
//! since each coordinate of `m·x` is a sum of `n²` terms `m_i x_j c(i,j,k)`.
//! [`derive_params`] checks that inequality before anything is enumerated.

mod registry;

pub use registry::{
    classic_construction, ClassicKind, Construction, ConstructionRegistry, ConstructionRequest,
    ConstructionStrategy, ElekesUnbalanced, ErdosBalanced, GuthSilierBalanced, NiceBasisUnbalanced,
};

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gap::{integer_nth_root, BoxIter, GapBox};
use crate::json;
use crate::numberfield::{BasisSpec, FieldError, IntElement, SpecError, StructureTable};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("N and r must be positive (N = {n_points}, r = {r})")]
    NonPositive { n_points: BigInt, r: BigInt },
    #[error("hypothesis violated: r = {r} exceeds sqrt(N) for N = {n_points}")]
    HypothesisViolation { n_points: BigInt, r: BigInt },
    #[error("parameters too small: slope box size N/((n²C)^n r²) = {slope_size} < 1")]
    ParametersTooSmall { slope_size: BigInt },
    #[error("internal consistency failure: richness condition fails with margin {margin}")]
    RichnessCondition { margin: BigInt },
    #[error("{0} is not square-free")]
    NotSquareFree(i64),
    #[error("x² − {0} has no real root generating a field; need a square-free k ≥ 2")]
    NoRealField(i64),
    #[error("this construction needs a basis spec")]
    MissingBasis,
    #[error("unknown construction {0:?}")]
    UnknownStrategy(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A line `y = slope·x + intercept` with slope and intercept in the field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub slope: IntElement,
    pub intercept: IntElement,
}

impl Serialize for Line {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Line", 2)?;
        st.serialize_field("slope", &json_coords(self.slope.coords()))?;
        st.serialize_field("intercept", &json_coords(self.intercept.coords()))?;
        st.end()
    }
}

pub(crate) fn json_coords(coords: &[BigInt]) -> Vec<serde_json::Value> {
    coords.iter().map(json::int_to_value).collect()
}

/// `line.slope · x + line.intercept`.
pub fn evaluate_line_at(line: &Line, x: &IntElement, table: &StructureTable) -> Result<IntElement, FieldError> {
    table.mul_add(&line.slope, x, &line.intercept)
}

/// The implicit point set `X × Y` with `X`, `Y` GAP boxes in the same field.
#[derive(Clone, Debug)]
pub struct PointGrid {
    pub table: Arc<StructureTable>,
    pub x_box: GapBox,
    pub y_box: GapBox,
}

impl PointGrid {
    pub fn point_count(&self) -> BigInt {
        self.x_box.cardinality() * self.y_box.cardinality()
    }

    pub fn contains(&self, x: &IntElement, y: &IntElement) -> Result<bool, FieldError> {
        Ok(self.x_box.contains_element(x)? && self.y_box.contains_element(y)?)
    }

    /// Points in x-major lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = (IntElement, IntElement)> + '_ {
        self.x_box.iter().flat_map(move |x| {
            let x = IntElement::new(x);
            self.y_box.iter().map(move |y| (x.clone(), IntElement::new(y)))
        })
    }
}

/// Everything needed to generate and check one instance of the construction.
#[derive(Clone, Debug)]
pub struct ConstructionParams {
    pub n_points: BigInt,
    pub r: BigInt,
    pub basis: BasisSpec,
    pub table: Arc<StructureTable>,
    pub c_lambda: BigInt,
    pub x_box: GapBox,
    pub y_box: GapBox,
    pub slope_box: GapBox,
    pub intercept_box: GapBox,
    pub guaranteed_lines: BigInt,
    pub paper_lines: BigInt,
}

fn check_hypothesis(n_points: &BigInt, r: &BigInt) -> Result<(), ConstructionError> {
    if !n_points.is_positive() || !r.is_positive() {
        return Err(ConstructionError::NonPositive { n_points: n_points.clone(), r: r.clone() });
    }
    if r * r > *n_points {
        return Err(ConstructionError::HypothesisViolation { n_points: n_points.clone(), r: r.clone() });
    }
    Ok(())
}

/// `⌊N² / ((2n²C)^n r³)⌋`, the line count the analytic argument promises.
pub fn paper_line_count(n_points: &BigInt, r: &BigInt, n: usize, c_lambda: &BigInt) -> BigInt {
    let denom = (BigInt::from(2 * n * n) * c_lambda).pow(n as u32) * r.pow(3);
    n_points * n_points / denom
}

/// `1 / (2n²C)^n`.
pub fn paper_constant(n: usize, c_lambda: &BigInt) -> BigRational {
    BigRational::new(BigInt::one(), (BigInt::from(2 * n * n) * c_lambda).pow(n as u32))
}

/// Derives box half-widths for target size `N` and richness `r` over `table`,
/// and certifies the richness condition.
pub fn derive_params(
    n_points: &BigInt,
    r: &BigInt,
    basis: BasisSpec,
    table: Arc<StructureTable>,
) -> Result<ConstructionParams, ConstructionError> {
    check_hypothesis(n_points, r)?;
    let n = table.dim();
    let c_lambda = table.c_lambda();
    let n_sq_c = BigInt::from(n * n) * &c_lambda;

    let slope_size = n_points / (n_sq_c.pow(n as u32) * r * r);
    if slope_size < BigInt::one() {
        return Err(ConstructionError::ParametersTooSmall { slope_size });
    }
    let intercept_size = n_points / (BigInt::from(2).pow(n as u32) * r);

    let params = ConstructionParams::from_boxes(
        n_points.clone(),
        r.clone(),
        basis,
        table,
        GapBox::for_size(r, n),
        GapBox::for_size(&(n_points / r), n),
        GapBox::for_size(&slope_size, n),
        GapBox::for_size(&intercept_size, n),
    );
    let margin = params.richness_margin();
    if margin.is_negative() {
        return Err(ConstructionError::RichnessCondition { margin });
    }
    Ok(params)
}

impl ConstructionParams {
    #[allow(clippy::too_many_arguments)]
    fn from_boxes(
        n_points: BigInt,
        r: BigInt,
        basis: BasisSpec,
        table: Arc<StructureTable>,
        x_box: GapBox,
        y_box: GapBox,
        slope_box: GapBox,
        intercept_box: GapBox,
    ) -> Self {
        let n = table.dim();
        let c_lambda = table.c_lambda();
        let guaranteed_lines = slope_box.cardinality() * intercept_box.cardinality();
        let paper_lines = paper_line_count(&n_points, &r, n, &c_lambda);
        Self {
            n_points,
            r,
            basis,
            table,
            c_lambda,
            x_box,
            y_box,
            slope_box,
            intercept_box,
            guaranteed_lines,
            paper_lines,
        }
    }

    /// Rebuilds parameters from explicit half-widths, skipping the richness
    /// certificate. Verification of such parameters may legitimately fail.
    pub fn from_record(record: &ParamsRecord) -> Result<Self, ConstructionError> {
        check_hypothesis(&record.n_points, &record.r)?;
        let table = Arc::new(record.basis.build()?);
        let n = table.dim();
        for h in [&record.h_x, &record.h_y, &record.h_m, &record.h_b] {
            if h.is_negative() {
                return Err(ConstructionError::Field(FieldError::MalformedTable(
                    "negative half-width".into(),
                )));
            }
        }
        Ok(Self::from_boxes(
            record.n_points.clone(),
            record.r.clone(),
            record.basis.clone(),
            table,
            GapBox::new(n, record.h_x.clone()),
            GapBox::new(n, record.h_y.clone()),
            GapBox::new(n, record.h_m.clone()),
            GapBox::new(n, record.h_b.clone()),
        ))
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    /// `h_y − n²·C·h_m·h_x − h_b`; non-negative means every line is fully rich.
    pub fn richness_margin(&self) -> BigInt {
        let n = self.dim();
        self.y_box.half_width()
            - BigInt::from(n * n)
                * &self.c_lambda
                * self.slope_box.half_width()
                * self.x_box.half_width()
            - self.intercept_box.half_width()
    }

    /// Points on every constructed line: `(2h_x+1)^n`.
    pub fn achieved_richness(&self) -> BigInt {
        self.x_box.cardinality()
    }

    pub fn below_target(&self) -> bool {
        self.achieved_richness() < self.r
    }

    /// A single zero slope only.
    pub fn degenerate(&self) -> bool {
        self.slope_box.half_width().is_zero()
    }

    pub fn paper_constant(&self) -> BigRational {
        paper_constant(self.dim(), &self.c_lambda)
    }

    pub fn grid(&self) -> PointGrid {
        PointGrid { table: self.table.clone(), x_box: self.x_box.clone(), y_box: self.y_box.clone() }
    }

    pub fn lines(&self) -> LineFamily {
        LineFamily { slope_box: self.slope_box.clone(), intercept_box: self.intercept_box.clone() }
    }

    pub fn record(&self) -> ParamsRecord {
        ParamsRecord {
            basis: self.basis.clone(),
            n_points: self.n_points.clone(),
            r: self.r.clone(),
            h_x: self.x_box.half_width().clone(),
            h_y: self.y_box.half_width().clone(),
            h_m: self.slope_box.half_width().clone(),
            h_b: self.intercept_box.half_width().clone(),
        }
    }

    pub fn report(&self, construction: &str) -> ParamsReport {
        let ratio = if self.paper_lines.is_zero() {
            None
        } else {
            Some(BigRational::new(self.guaranteed_lines.clone(), self.paper_lines.clone()))
        };
        ParamsReport {
            construction: construction.to_string(),
            n: self.dim(),
            c_lambda: self.c_lambda.clone(),
            record: self.record(),
            x_box: self.x_box.clone(),
            y_box: self.y_box.clone(),
            slope_box: self.slope_box.clone(),
            intercept_box: self.intercept_box.clone(),
            point_count: self.grid().point_count(),
            achieved_richness: self.achieved_richness(),
            below_target: self.below_target(),
            guaranteed_lines: self.guaranteed_lines.clone(),
            paper_lines: self.paper_lines.clone(),
            lines_ratio: ratio.map(|q| json::rat_to_string(&q)),
            paper_constant: json::rat_to_string(&self.paper_constant()),
            richness_margin: self.richness_margin(),
            degenerate: self.degenerate(),
        }
    }
}

/// The minimal persisted form of [`ConstructionParams`]: basis, `N`, `r` and
/// the four half-widths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub basis: BasisSpec,
    #[serde(rename = "N", with = "json::bigint")]
    pub n_points: BigInt,
    #[serde(with = "json::bigint")]
    pub r: BigInt,
    #[serde(with = "json::bigint")]
    pub h_x: BigInt,
    #[serde(with = "json::bigint")]
    pub h_y: BigInt,
    #[serde(with = "json::bigint")]
    pub h_m: BigInt,
    #[serde(with = "json::bigint")]
    pub h_b: BigInt,
}

/// JSON report of a derived parameter set. Reading it back with
/// [`ParamsRecord`] ignores the derived fields.
#[derive(Clone, Debug, Serialize)]
pub struct ParamsReport {
    pub construction: String,
    pub n: usize,
    #[serde(with = "json::bigint")]
    pub c_lambda: BigInt,
    #[serde(flatten)]
    pub record: ParamsRecord,
    pub x_box: GapBox,
    pub y_box: GapBox,
    pub slope_box: GapBox,
    pub intercept_box: GapBox,
    #[serde(with = "json::bigint")]
    pub point_count: BigInt,
    #[serde(with = "json::bigint")]
    pub achieved_richness: BigInt,
    pub below_target: bool,
    #[serde(with = "json::bigint")]
    pub guaranteed_lines: BigInt,
    #[serde(with = "json::bigint")]
    pub paper_lines: BigInt,
    pub lines_ratio: Option<String>,
    pub paper_constant: String,
    #[serde(with = "json::bigint")]
    pub richness_margin: BigInt,
    pub degenerate: bool,
}

/// All lines with slope in one box and intercept in another, slope-major
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct LineFamily {
    pub slope_box: GapBox,
    pub intercept_box: GapBox,
}

impl LineFamily {
    pub fn len(&self) -> BigInt {
        self.slope_box.cardinality() * self.intercept_box.cardinality()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn line_at(&self, index: &BigInt) -> Line {
        let per_slope = self.intercept_box.cardinality();
        let (s, b) = num_integer::Integer::div_rem(index, &per_slope);
        Line {
            slope: IntElement::new(self.slope_box.element_at(&s)),
            intercept: IntElement::new(self.intercept_box.element_at(&b)),
        }
    }

    pub fn iter(&self) -> LineIter {
        self.iter_from(&BigInt::zero())
    }

    /// Lines with index in `start..`.
    pub fn iter_from(&self, start: &BigInt) -> LineIter {
        let per_slope = self.intercept_box.cardinality();
        let (s, b) = num_integer::Integer::div_rem(start, &per_slope);
        let mut slopes = self.slope_box.iter_from(&s);
        let current = slopes.next().map(IntElement::new);
        LineIter {
            intercept_box: self.intercept_box.clone(),
            slopes,
            intercepts: self.intercept_box.iter_from(&b),
            current,
        }
    }
}

pub struct LineIter {
    intercept_box: GapBox,
    slopes: BoxIter,
    intercepts: BoxIter,
    current: Option<IntElement>,
}

impl Iterator for LineIter {
    type Item = Line;

    fn next(&mut self) -> Option<Line> {
        loop {
            let slope = self.current.as_ref()?;
            if let Some(b) = self.intercepts.next() {
                return Some(Line { slope: slope.clone(), intercept: IntElement::new(b) });
            }
            self.current = self.slopes.next().map(IntElement::new);
            self.intercepts = self.intercept_box.iter();
        }
    }
}

/// `m^{1/n}` when `m` is a perfect `n`-th power.
pub fn exact_root(m: &BigInt, n: usize) -> Option<BigInt> {
    let root = integer_nth_root(m, n as u32);
    (root.pow(n as u32) == *m).then_some(root)
}
