//! Named construction strategies, selected at runtime.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{check_hypothesis, derive_params, ConstructionError, ConstructionParams, PointGrid};
use crate::gap::{integer_nth_root, GapBox};
use crate::numberfield::BasisSpec;

/// Inputs shared by every strategy. Strategies ignore what they do not use.
#[derive(Clone, Debug)]
pub struct ConstructionRequest {
    pub n_points: BigInt,
    pub r: BigInt,
    pub basis: Option<BasisSpec>,
    /// Radicand for the quadratic balanced grid.
    pub k: Option<i64>,
}

impl ConstructionRequest {
    pub fn new(n_points: impl Into<BigInt>, r: impl Into<BigInt>) -> Self {
        Self { n_points: n_points.into(), r: r.into(), basis: None, k: None }
    }

    pub fn with_basis(mut self, basis: BasisSpec) -> Self {
        self.basis = Some(basis);
        self
    }

    pub fn with_k(mut self, k: i64) -> Self {
        self.k = Some(k);
        self
    }
}

/// A built point grid, plus the line family when the strategy guarantees one.
#[derive(Clone, Debug)]
pub struct Construction {
    pub strategy: String,
    pub basis: BasisSpec,
    pub grid: PointGrid,
    pub params: Option<ConstructionParams>,
}

pub trait ConstructionStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, request: &ConstructionRequest) -> Result<Construction, ConstructionError>;
}

/// `A_r(Λ) × A_{N/r}(Λ)` over a user-supplied nice basis.
pub struct NiceBasisUnbalanced;

/// The `n = 1` case: `A_r({1}) × A_{N/r}({1})`.
pub struct ElekesUnbalanced;

/// `A_{√N}({1}) × A_{√N}({1})`; points only.
pub struct ErdosBalanced;

/// `A_{√N}({1,√k}) × A_{√N}({1,√k})`; points only.
pub struct GuthSilierBalanced;

fn unbalanced(name: &str, basis: BasisSpec, request: &ConstructionRequest) -> Result<Construction, ConstructionError> {
    let table = Arc::new(basis.build()?);
    let params = derive_params(&request.n_points, &request.r, basis.clone(), table)?;
    Ok(Construction { strategy: name.to_string(), basis, grid: params.grid(), params: Some(params) })
}

fn balanced(
    name: &str,
    basis: BasisSpec,
    request: &ConstructionRequest,
) -> Result<Construction, ConstructionError> {
    check_hypothesis(&request.n_points, &request.r)?;
    let table = Arc::new(basis.build()?);
    let side = integer_nth_root(&request.n_points, 2);
    let bx = GapBox::for_size(&side, table.dim());
    Ok(Construction {
        strategy: name.to_string(),
        basis,
        grid: PointGrid { table, x_box: bx.clone(), y_box: bx },
        params: None,
    })
}

impl ConstructionStrategy for NiceBasisUnbalanced {
    fn name(&self) -> &'static str {
        "nice-basis"
    }

    fn summary(&self) -> &'static str {
        "unbalanced GAP grid over a nice basis, with its guaranteed rich line family"
    }

    fn build(&self, request: &ConstructionRequest) -> Result<Construction, ConstructionError> {
        let basis = request.basis.clone().ok_or(ConstructionError::MissingBasis)?;
        unbalanced(self.name(), basis, request)
    }
}

impl ConstructionStrategy for ElekesUnbalanced {
    fn name(&self) -> &'static str {
        "elekes"
    }

    fn summary(&self) -> &'static str {
        "unbalanced integer grid r × N/r with its rich line family"
    }

    fn build(&self, request: &ConstructionRequest) -> Result<Construction, ConstructionError> {
        unbalanced(self.name(), BasisSpec::rational(), request)
    }
}

impl ConstructionStrategy for ErdosBalanced {
    fn name(&self) -> &'static str {
        "erdos"
    }

    fn summary(&self) -> &'static str {
        "balanced integer grid √N × √N (points only)"
    }

    fn build(&self, request: &ConstructionRequest) -> Result<Construction, ConstructionError> {
        balanced(self.name(), BasisSpec::rational(), request)
    }
}

/// Trial division; adequate for the radicands a desk-scale run uses.
pub fn is_square_free(k: i64) -> bool {
    let mut m = k.unsigned_abs();
    if m == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        if m.is_multiple_of(p) {
            m /= p;
        }
        p += 1;
    }
    true
}

impl ConstructionStrategy for GuthSilierBalanced {
    fn name(&self) -> &'static str {
        "guth-silier"
    }

    fn summary(&self) -> &'static str {
        "balanced grid over {1, √k} for square-free k (points only)"
    }

    fn build(&self, request: &ConstructionRequest) -> Result<Construction, ConstructionError> {
        let k = request.k.unwrap_or(2);
        if !is_square_free(k) {
            return Err(ConstructionError::NotSquareFree(k));
        }
        if k < 2 {
            return Err(ConstructionError::NoRealField(k));
        }
        balanced(self.name(), BasisSpec::quadratic(k), request)
    }
}

/// Strategies keyed by name, iterated in name order.
pub struct ConstructionRegistry {
    strategies: BTreeMap<&'static str, Box<dyn ConstructionStrategy>>,
}

impl Default for ConstructionRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl ConstructionRegistry {
    pub fn empty() -> Self {
        Self { strategies: BTreeMap::new() }
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(NiceBasisUnbalanced));
        reg.register(Box::new(ElekesUnbalanced));
        reg.register(Box::new(ErdosBalanced));
        reg.register(Box::new(GuthSilierBalanced));
        reg
    }

    /// Returns the strategy previously registered under the same name, if any.
    pub fn register(&mut self, strategy: Box<dyn ConstructionStrategy>) -> Option<Box<dyn ConstructionStrategy>> {
        self.strategies.insert(strategy.name(), strategy)
    }

    pub fn get(&self, name: &str) -> Option<&dyn ConstructionStrategy> {
        self.strategies.get(name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn ConstructionStrategy> {
        self.strategies.values().map(|s| s.as_ref())
    }

    pub fn build(&self, name: &str, request: &ConstructionRequest) -> Result<Construction, ConstructionError> {
        self.get(name)
            .ok_or_else(|| ConstructionError::UnknownStrategy(name.to_string()))?
            .build(request)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicKind {
    ErdosBalanced,
    ElekesUnbalanced,
    GuthSilier(i64),
}

/// The three classic comparison grids, without going through a registry.
pub fn classic_construction(
    kind: ClassicKind,
    n_points: &BigInt,
    r: &BigInt,
) -> Result<Construction, ConstructionError> {
    let request = ConstructionRequest::new(n_points.clone(), r.clone());
    match kind {
        ClassicKind::ErdosBalanced => ErdosBalanced.build(&request),
        ClassicKind::ElekesUnbalanced => ElekesUnbalanced.build(&request),
        ClassicKind::GuthSilier(k) => GuthSilierBalanced.build(&request.with_k(k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::StructureTable;

    fn rational_table() -> Arc<StructureTable> {
        Arc::new(StructureTable::rational())
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn elekes_matches_rational_nice_basis() {
        for (n_points, r) in [(16, 2), (100, 3), (1000, 7), (4096, 16), (12345, 10)] {
            let elekes = classic_construction(ClassicKind::ElekesUnbalanced, &b(n_points), &b(r))
                .unwrap()
                .params
                .unwrap();
            let direct = derive_params(&b(n_points), &b(r), BasisSpec::rational(), rational_table()).unwrap();
            assert_eq!(elekes.record(), direct.record());
            assert_eq!(elekes.guaranteed_lines, direct.guaranteed_lines);
        }
    }

    #[test]
    fn erdos_balanced_grid() {
        let c = classic_construction(ClassicKind::ErdosBalanced, &b(25), &b(5)).unwrap();
        assert_eq!(c.grid.table.dim(), 1);
        assert_eq!(c.grid.x_box.half_width(), &b(2));
        assert_eq!(c.grid.y_box.half_width(), &b(2));
        assert_eq!(c.grid.point_count(), b(25));
        assert!(c.params.is_none());
    }

    #[test]
    fn guth_silier_grid() {
        let c = classic_construction(ClassicKind::GuthSilier(3), &b(625), &b(5)).unwrap();
        // √625 = 25, 25^{1/2} = 5, h = 2: (5²)² points
        assert_eq!(c.grid.table.dim(), 2);
        assert_eq!(c.grid.x_box.half_width(), &b(2));
        assert_eq!(c.grid.point_count(), b(625));
    }

    #[test]
    fn guth_silier_rejects_bad_radicands() {
        assert!(matches!(
            classic_construction(ClassicKind::GuthSilier(4), &b(625), &b(5)),
            Err(ConstructionError::NotSquareFree(4))
        ));
        assert!(matches!(
            classic_construction(ClassicKind::GuthSilier(-1), &b(625), &b(5)),
            Err(ConstructionError::NoRealField(-1))
        ));
        assert!(matches!(
            classic_construction(ClassicKind::GuthSilier(1), &b(625), &b(5)),
            Err(ConstructionError::NoRealField(1))
        ));
    }

    #[test]
    fn balanced_checks_hypothesis() {
        assert!(matches!(
            classic_construction(ClassicKind::ErdosBalanced, &b(100), &b(11)),
            Err(ConstructionError::HypothesisViolation { .. })
        ));
    }

    #[test]
    fn square_free() {
        let sf: Vec<i64> = (1..=30).filter(|&k| is_square_free(k)).collect();
        assert_eq!(sf, vec![1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30]);
        assert!(!is_square_free(0));
        assert!(is_square_free(-7));
    }

    #[test]
    fn registry_lookup() {
        let reg = ConstructionRegistry::with_builtins();
        assert_eq!(reg.names().collect::<Vec<_>>(), vec!["elekes", "erdos", "guth-silier", "nice-basis"]);
        assert!(matches!(
            reg.build("nope", &ConstructionRequest::new(16, 2)),
            Err(ConstructionError::UnknownStrategy(_))
        ));
        assert!(matches!(
            reg.build("nice-basis", &ConstructionRequest::new(16, 2)),
            Err(ConstructionError::MissingBasis)
        ));
        let c = reg
            .build("nice-basis", &ConstructionRequest::new(46656, 9).with_basis(BasisSpec::quadratic(2)))
            .unwrap();
        assert_eq!(c.params.unwrap().guaranteed_lines, b(12321));
    }

    struct Fixed;

    impl ConstructionStrategy for Fixed {
        fn name(&self) -> &'static str {
            "elekes"
        }
        fn summary(&self) -> &'static str {
            "replacement"
        }
        fn build(&self, request: &ConstructionRequest) -> Result<Construction, ConstructionError> {
            ErdosBalanced.build(request)
        }
    }

    #[test]
    fn register_replaces_by_name() {
        let mut reg = ConstructionRegistry::with_builtins();
        let old = reg.register(Box::new(Fixed)).unwrap();
        assert_eq!(old.summary(), ElekesUnbalanced.summary());
        assert_eq!(reg.get("elekes").unwrap().summary(), "replacement");
    }
}
