//! Exact richness verification of constructed line families, and the
//! independent pair-based oracle.
//!
//! A line `y = m·x + b` meets the grid at `x` exactly when `m·x + b` lands in
//! the y-box. Equality in the field is equality of coordinate vectors and box
//! membership is an integer comparison, so nothing here uses floating point.

mod oracle;

pub use oracle::{
    count_incidences, count_incidences_point_major, line_through, materialize, rich_lines_oracle,
    CanonicalLine, RatPoint, ORACLE_POINT_LIMIT,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::construction::{ConstructionParams, Line};
use crate::json;
use crate::numberfield::{FieldError, IntElement};

/// Seed for sampled verification when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x005e_ed0f_11e5;

/// Sample size used when a family is too large to enumerate and no size was
/// requested.
pub const DEFAULT_SAMPLE: u64 = 100_000;

/// Families up to this many lines are enumerated in full by default.
pub const FULL_VERIFY_LIMIT: u64 = 10_000_000;

const CHUNK: u64 = 2048;

#[derive(Debug, Error)]
pub enum IncidenceError {
    #[error(
        "construction violation: line #{index} y = {}·x + {} has {count} grid points, expected {expected}",
        .line.slope, .line.intercept
    )]
    ConstructionViolation { index: BigInt, line: Box<Line>, count: BigInt, expected: BigInt },
    #[error("degenerate pair: the two points coincide")]
    DegeneratePair,
    #[error("point #{0} repeats an earlier point")]
    DuplicatePoint(usize),
    #[error("{points} points exceed the oracle limit of {limit}")]
    TooLargeForOracle { points: BigInt, limit: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Grid points on `line`: the `x` in the x-box whose image lies in the y-box.
pub fn count_points_on_line(line: &Line, params: &ConstructionParams) -> Result<BigInt, IncidenceError> {
    let xs: Vec<IntElement> = params.x_box.iter().map(IntElement::new).collect();
    Ok(BigInt::from(count_on_line(line, &xs, params)?))
}

fn count_on_line(line: &Line, xs: &[IntElement], params: &ConstructionParams) -> Result<u64, IncidenceError> {
    let mut count = 0;
    for x in xs {
        let y = params.table.mul_add(&line.slope, x, &line.intercept)?;
        if params.y_box.contains_element(&y)? {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Check this many uniformly drawn lines instead of the whole family.
    pub sample: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Full,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RichnessReport {
    pub mode: VerifyMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(with = "json::bigint")]
    pub lines_total: BigInt,
    pub lines_checked: u64,
    pub min_points_on_line: u64,
    pub max_points_on_line: u64,
    #[serde(with = "json::rational")]
    pub mean_points_on_line: BigRational,
    #[serde(with = "json::bigint")]
    pub target_r: BigInt,
    #[serde(with = "json::bigint")]
    pub expected_points_on_line: BigInt,
    pub lines_meeting_target: u64,
    #[serde(with = "json::bigint")]
    pub incidences_checked: BigInt,
    /// Rich lines in the family (extrapolated when sampled) times `r³ / N²`.
    #[serde(with = "json::rational")]
    pub achieved_constant: BigRational,
    #[serde(with = "json::rational")]
    pub paper_constant: BigRational,
    pub achieved_at_least_paper: bool,
}

#[derive(Clone, Debug)]
struct Tally {
    checked: u64,
    min: u64,
    max: u64,
    sum: u64,
    meeting: u64,
    violation: Option<(BigInt, Line, u64)>,
}

impl Tally {
    fn empty() -> Self {
        Self { checked: 0, min: u64::MAX, max: 0, sum: 0, meeting: 0, violation: None }
    }

    fn record(&mut self, index: BigInt, line: Line, count: u64, expected: u64, target: u64) {
        self.checked += 1;
        self.min = self.min.min(count);
        self.max = self.max.max(count);
        self.sum += count;
        if count >= target {
            self.meeting += 1;
        }
        if count != expected && self.violation.is_none() {
            self.violation = Some((index, line, count));
        }
    }

    /// Associative and commutative; keeps the lowest-index violation.
    fn merge(mut self, other: Self) -> Self {
        self.checked += other.checked;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
        self.sum += other.sum;
        self.meeting += other.meeting;
        self.violation = match (self.violation, other.violation) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Checks that every constructed line (or a seeded uniform sample of them)
/// meets the grid in exactly `(2h_x+1)^n` points.
///
/// The result does not depend on the rayon pool size.
pub fn verify_construction(
    params: &ConstructionParams,
    options: &VerifyOptions,
) -> Result<RichnessReport, IncidenceError> {
    let family = params.lines();
    let total = family.len();
    let xs: Vec<IntElement> = params.x_box.iter().map(IntElement::new).collect();
    let expected = params.achieved_richness();
    // A line can never hold more points than |X|, and |X| is enumerated above.
    let expected_u64 = expected.to_u64().unwrap_or(u64::MAX);
    let target = params.r.to_u64().unwrap_or(u64::MAX);

    let sample = match options.sample {
        Some(k) => Some(k),
        None if total > BigInt::from(FULL_VERIFY_LIMIT) => Some(DEFAULT_SAMPLE),
        None => None,
    };

    let check = |index: BigInt, line: Line| -> Result<Tally, IncidenceError> {
        let mut t = Tally::empty();
        let c = count_on_line(&line, &xs, params)?;
        t.record(index, line, c, expected_u64, target);
        Ok(t)
    };

    let (tally, mode, seed) = match sample {
        None => {
            let total_u64 = total.to_u64().expect("full verification below FULL_VERIFY_LIMIT");
            let chunks = total_u64.div_ceil(CHUNK);
            let tally = (0..chunks)
                .into_par_iter()
                .map(|c| -> Result<Tally, IncidenceError> {
                    let start = c * CHUNK;
                    let len = CHUNK.min(total_u64 - start);
                    let mut t = Tally::empty();
                    for (off, line) in family.iter_from(&BigInt::from(start)).take(len as usize).enumerate() {
                        let count = count_on_line(&line, &xs, params)?;
                        t.record(BigInt::from(start + off as u64), line, count, expected_u64, target);
                    }
                    Ok(t)
                })
                .try_reduce(Tally::empty, |a, b| Ok(a.merge(b)))?;
            (tally, VerifyMode::Full, None)
        }
        Some(k) => {
            let seed = options.seed.unwrap_or(DEFAULT_SEED);
            let indices = sample_indices(&total, k, seed);
            let tally = indices
                .into_par_iter()
                .map(|i| {
                    let line = family.line_at(&i);
                    check(i, line)
                })
                .try_reduce(Tally::empty, |a, b| Ok(a.merge(b)))?;
            (tally, VerifyMode::Sampled, Some(seed))
        }
    };

    if let Some((index, line, count)) = tally.violation {
        return Err(IncidenceError::ConstructionViolation {
            index,
            line: Box::new(line),
            count: BigInt::from(count),
            expected,
        });
    }

    let checked = tally.checked;
    let mean = if checked == 0 {
        BigRational::zero()
    } else {
        BigRational::new(tally.sum.into(), checked.into())
    };
    let rich_lines = if checked == 0 {
        BigRational::zero()
    } else {
        BigRational::new(&total * BigInt::from(tally.meeting), BigInt::from(checked))
    };
    let achieved =
        rich_lines * BigRational::new(params.r.pow(3), &params.n_points * &params.n_points);
    let paper = params.paper_constant();
    Ok(RichnessReport {
        mode,
        seed,
        lines_total: total,
        lines_checked: checked,
        min_points_on_line: if checked == 0 { 0 } else { tally.min },
        max_points_on_line: tally.max,
        mean_points_on_line: mean,
        target_r: params.r.clone(),
        expected_points_on_line: expected,
        lines_meeting_target: tally.meeting,
        incidences_checked: BigInt::from(tally.sum),
        achieved_at_least_paper: achieved >= paper,
        achieved_constant: achieved,
        paper_constant: paper,
    })
}

/// `k` indices drawn uniformly (with replacement) from `0..total`, in draw
/// order. Depends only on `(total, k, seed)`.
pub fn sample_indices(total: &BigInt, k: u64, seed: u64) -> Vec<BigInt> {
    use num_bigint::RandBigInt;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = BigInt::zero();
    (0..k).map(|_| rng.gen_bigint_range(&zero, total)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::derive_params;
    use crate::gap::GapBox;
    use crate::numberfield::{BasisSpec, StructureTable};
    use std::sync::Arc;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn elekes() -> ConstructionParams {
        derive_params(&b(16), &b(2), BasisSpec::rational(), Arc::new(StructureTable::rational())).unwrap()
    }

    fn flagship() -> ConstructionParams {
        let spec = BasisSpec::quadratic(2);
        let t = Arc::new(spec.build().unwrap());
        derive_params(&b(46656), &b(9), spec, t).unwrap()
    }

    #[test]
    fn count_examples() {
        let p = elekes();
        let line = Line { slope: IntElement::from_i64s(&[2]), intercept: IntElement::from_i64s(&[2]) };
        assert_eq!(count_points_on_line(&line, &p).unwrap(), b(3));
        let zero = Line { slope: IntElement::from_i64s(&[0]), intercept: IntElement::from_i64s(&[0]) };
        assert_eq!(count_points_on_line(&zero, &p).unwrap(), b(3));
        let steep = Line { slope: IntElement::from_i64s(&[5]), intercept: IntElement::from_i64s(&[0]) };
        assert_eq!(count_points_on_line(&steep, &p).unwrap(), b(1));

        let f = flagship();
        let line = f.lines().line_at(&b(777));
        assert_eq!(count_points_on_line(&line, &f).unwrap(), b(9));
        let zero2 = Line { slope: IntElement::zero(2), intercept: IntElement::zero(2) };
        assert_eq!(count_points_on_line(&zero2, &f).unwrap(), b(9));
    }

    #[test]
    fn verify_elekes() {
        let r = verify_construction(&elekes(), &VerifyOptions::default()).unwrap();
        assert_eq!(r.mode, VerifyMode::Full);
        assert_eq!(r.lines_checked, 25);
        assert_eq!((r.min_points_on_line, r.max_points_on_line), (3, 3));
        assert_eq!(r.lines_meeting_target, 25);
        assert_eq!(r.incidences_checked, b(75));
        assert_eq!(r.achieved_constant, q(25, 32));
        assert_eq!(r.paper_constant, q(1, 2));
    }

    #[test]
    fn verify_flagship() {
        let r = verify_construction(&flagship(), &VerifyOptions::default()).unwrap();
        assert_eq!(r.lines_checked, 12321);
        assert_eq!((r.min_points_on_line, r.max_points_on_line), (9, 9));
        assert_eq!(r.achieved_constant, q(12321, 2985984));
        assert_eq!(r.paper_constant, q(1, 256));
        assert!(r.achieved_at_least_paper);
    }

    #[test]
    fn lowered_y_box_is_a_violation() {
        let mut p = elekes();
        p.y_box = GapBox::new(1, b(3));
        match verify_construction(&p, &VerifyOptions::default()) {
            Err(IncidenceError::ConstructionViolation { index, line, count, expected }) => {
                // first line in order: slope −2, intercept −2; y ∈ {0, −2, −4}
                assert_eq!(index, b(0));
                assert_eq!(line.slope, IntElement::from_i64s(&[-2]));
                assert_eq!(count, b(2));
                assert_eq!(expected, b(3));
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn sampled_is_reproducible() {
        let p = flagship();
        let opts = VerifyOptions { sample: Some(500), seed: Some(7) };
        let a = verify_construction(&p, &opts).unwrap();
        let c = verify_construction(&p, &opts).unwrap();
        assert_eq!(a, c);
        assert_eq!(a.mode, VerifyMode::Sampled);
        assert_eq!(a.lines_checked, 500);
        assert_eq!(a.seed, Some(7));
        assert_eq!(sample_indices(&b(1000), 20, 3), sample_indices(&b(1000), 20, 3));
        assert!(sample_indices(&b(10), 1000, 1).iter().all(|i| *i >= b(0) && *i < b(10)));
    }

    #[test]
    fn worker_count_does_not_change_report() {
        let p = flagship();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| verify_construction(&p, &VerifyOptions::default()).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
