//! Brute-force rich-line detection over explicit point sets.
//!
//! Every pair of points spans a line; lines are keyed by an exact canonical
//! form so that pairs on the same line collide. Quadratic in the point count,
//! guarded by [`ORACLE_POINT_LIMIT`].

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use super::IncidenceError;
use crate::construction::{Line, PointGrid};
use crate::numberfield::{IntElement, RatElement, StructureTable};

/// Largest point set the quadratic oracle accepts.
pub const ORACLE_POINT_LIMIT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint {
    pub x: RatElement,
    pub y: RatElement,
}

impl RatPoint {
    pub fn new(x: RatElement, y: RatElement) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: &IntElement, y: &IntElement) -> Self {
        Self { x: x.to_rat(), y: y.to_rat() }
    }
}

/// A line in a form unique to the line: `x = x0`, or `y = slope·x + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalLine {
    Vertical { x0: RatElement },
    Sloped { slope: RatElement, intercept: RatElement },
}

impl CanonicalLine {
    pub fn from_line(line: &Line) -> Self {
        CanonicalLine::Sloped { slope: line.slope.to_rat(), intercept: line.intercept.to_rat() }
    }

    pub fn contains(&self, p: &RatPoint, table: &StructureTable) -> Result<bool, IncidenceError> {
        Ok(match self {
            CanonicalLine::Vertical { x0 } => *x0 == p.x,
            CanonicalLine::Sloped { slope, intercept } => {
                table.mul_rat(slope, &p.x)?.add(intercept)? == p.y
            }
        })
    }
}

/// Slope of `pq`, or `None` for a vertical pair.
fn direction(p: &RatPoint, q: &RatPoint, table: &StructureTable) -> Result<Option<RatElement>, IncidenceError> {
    let dx = q.x.sub(&p.x)?;
    if dx.is_zero() {
        return Ok(None);
    }
    Ok(Some(table.div(&q.y.sub(&p.y)?, &dx)?))
}

fn line_from(p: &RatPoint, dir: Option<RatElement>, table: &StructureTable) -> Result<CanonicalLine, IncidenceError> {
    Ok(match dir {
        None => CanonicalLine::Vertical { x0: p.x.clone() },
        Some(slope) => {
            let intercept = p.y.sub(&table.mul_rat(&slope, &p.x)?)?;
            CanonicalLine::Sloped { slope, intercept }
        }
    })
}

/// The line through two distinct points.
pub fn line_through(p: &RatPoint, q: &RatPoint, table: &StructureTable) -> Result<CanonicalLine, IncidenceError> {
    if p == q {
        return Err(IncidenceError::DegeneratePair);
    }
    let dir = direction(p, q, table)?;
    line_from(p, dir, table)
}

fn check_guard(count: usize) -> Result<(), IncidenceError> {
    if count > ORACLE_POINT_LIMIT {
        Err(IncidenceError::TooLargeForOracle { points: BigInt::from(count), limit: ORACLE_POINT_LIMIT })
    } else {
        Ok(())
    }
}

/// Materializes a grid for the oracle, refusing grids above the guard.
pub fn materialize(grid: &PointGrid) -> Result<Vec<RatPoint>, IncidenceError> {
    let count = grid.point_count();
    if count > BigInt::from(ORACLE_POINT_LIMIT) {
        return Err(IncidenceError::TooLargeForOracle { points: count, limit: ORACLE_POINT_LIMIT });
    }
    Ok(grid.points().map(|(x, y)| RatPoint::from_ints(&x, &y)).collect())
}

/// Slope key over integer points: `dy·dx⁻¹` as an integer vector over a
/// positive denominator, reduced by their common gcd. Equal keys ⇔ equal slopes.
type SlopeKey = Option<(Vec<BigInt>, BigInt)>;

/// `dx⁻¹ = w / d` with `w` integral and `d > 0`.
fn scaled_inverse(dx: &IntElement, table: &StructureTable) -> Result<(IntElement, BigInt), IncidenceError> {
    let inv = table.invert(&dx.to_rat())?;
    let d = inv.coords().iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let w = inv.coords().iter().map(|q| q.numer() * (&d / q.denom())).collect();
    Ok((IntElement::new(w), d))
}

fn slope_key(dy: &IntElement, inv: &(IntElement, BigInt), table: &StructureTable) -> Result<SlopeKey, IncidenceError> {
    let mut num = table.mul(dy, &inv.0)?.into_coords();
    let mut den = inv.1.clone();
    let g = num.iter().fold(den.clone(), |acc, v| acc.gcd(v));
    if !g.is_one() {
        for v in num.iter_mut() {
            *v /= &g;
        }
        den /= &g;
    }
    Ok(Some((num, den)))
}

/// Clears all denominators with one common factor. Scaling both axes by the
/// same constant maps lines to lines and preserves incidences.
fn integer_points(points: &[RatPoint]) -> Vec<(IntElement, IntElement)> {
    let scale = points
        .iter()
        .flat_map(|p| p.x.coords().iter().chain(p.y.coords()))
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let lift = |e: &RatElement| {
        IntElement::new(e.coords().iter().map(|q| q.numer() * (&scale / q.denom())).collect())
    };
    points.iter().map(|p| (lift(&p.x), lift(&p.y))).collect()
}

/// Every line containing at least `r` of `points`, with its exact point count.
///
/// Each line is reported once, from the lowest-indexed point on it: for point
/// `i` the other points are grouped by direction, and a group containing an
/// index below `i` belongs to a line already reported.
pub fn rich_lines_oracle(
    points: &[RatPoint],
    r: usize,
    table: &StructureTable,
) -> Result<BTreeMap<CanonicalLine, usize>, IncidenceError> {
    check_guard(points.len())?;
    let mut seen = HashSet::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if !seen.insert(p) {
            return Err(IncidenceError::DuplicatePoint(i));
        }
    }
    let ints = integer_points(points);

    let per_point: Vec<Vec<(CanonicalLine, usize)>> = (0..points.len())
        .into_par_iter()
        .map(|i| -> Result<_, IncidenceError> {
            let (px, py) = &ints[i];
            let mut inverses: HashMap<IntElement, (IntElement, BigInt)> = HashMap::new();
            // slope -> (points other than p, any of them before p, a representative)
            let mut groups: HashMap<SlopeKey, (usize, bool, usize)> = HashMap::new();
            for (j, (qx, qy)) in ints.iter().enumerate() {
                if j == i {
                    continue;
                }
                let dx = qx.sub(px)?;
                let key = if dx.is_zero() {
                    None
                } else {
                    let dy = qy.sub(py)?;
                    if !inverses.contains_key(&dx) {
                        let inv = scaled_inverse(&dx, table)?;
                        inverses.insert(dx.clone(), inv);
                    }
                    slope_key(&dy, &inverses[&dx], table)?
                };
                let entry = groups.entry(key).or_insert((0, false, j));
                entry.0 += 1;
                entry.1 |= j < i;
            }
            let mut out = Vec::new();
            for (others, claimed, rep) in groups.into_values() {
                if !claimed && others + 1 >= r {
                    out.push((line_through(&points[i], &points[rep], table)?, others + 1));
                }
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;

    Ok(per_point.into_iter().flatten().collect())
}

/// `Σ_lines |points ∩ line|`, iterating lines in the outer loop.
pub fn count_incidences(
    points: &[RatPoint],
    lines: &[CanonicalLine],
    table: &StructureTable,
) -> Result<BigInt, IncidenceError> {
    check_guard(points.len())?;
    let total = lines
        .par_iter()
        .map(|l| -> Result<u64, IncidenceError> {
            let mut c = 0u64;
            for p in points {
                if l.contains(p, table)? {
                    c += 1;
                }
            }
            Ok(c)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(BigInt::from(total))
}

/// Same count as [`count_incidences`], iterating points in the outer loop.
pub fn count_incidences_point_major(
    points: &[RatPoint],
    lines: &[CanonicalLine],
    table: &StructureTable,
) -> Result<BigInt, IncidenceError> {
    check_guard(points.len())?;
    let mut total = 0u64;
    for p in points {
        for l in lines {
            if l.contains(p, table)? {
                total += 1;
            }
        }
    }
    Ok(BigInt::from(total))
}
