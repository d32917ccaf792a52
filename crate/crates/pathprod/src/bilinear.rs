//! Sparse structure-constant tables for degree-shifted bilinear
//! operations (ring products, intersection products, scenario pairings).
//!
//! A table of shift `s` sends a pair of basis symbols of degrees (d, e)
//! to a homogeneous value of degree d + e + s. Two completeness modes:
//!
//! * `Total` — absent entries mean zero (the usual sparse convention for
//!   fully expanded products);
//! * `Partial` — only the stored rows are known; looking up anything
//!   else is an `InsufficientData` error, never a silent zero.
//!
//! Every table may also carry a `max_reliable_degree`: results that
//! would land above it are refused with a truncation error.
//!
//! The negative-degree, window, and completeness rules apply to *absent*
//! entries only; a stored entry is always returned as-is. For validated
//! tables the two orders agree, but it keeps deliberately planted
//! inconsistencies ([`BilinearTable::insert_raw`]) observable.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{EngineError, Result};
use crate::graded::{spaces_match, GradedElement, GradedSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    Total,
    Partial,
}

#[derive(Clone, Debug)]
pub struct BilinearTable {
    name: String,
    left: Arc<GradedSpace>,
    right: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    shift: i64,
    completeness: Completeness,
    max_reliable_degree: Option<i64>,
    entries: BTreeMap<(usize, usize), GradedElement>,
}

impl BilinearTable {
    pub fn new(
        name: impl Into<String>,
        left: &Arc<GradedSpace>,
        right: &Arc<GradedSpace>,
        target: &Arc<GradedSpace>,
        shift: i64,
        completeness: Completeness,
        max_reliable_degree: Option<i64>,
    ) -> BilinearTable {
        BilinearTable {
            name: name.into(),
            left: Arc::clone(left),
            right: Arc::clone(right),
            target: Arc::clone(target),
            shift,
            completeness,
            max_reliable_degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn left(&self) -> &Arc<GradedSpace> {
        &self.left
    }

    pub fn right(&self) -> &Arc<GradedSpace> {
        &self.right
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    pub fn max_reliable_degree(&self) -> Option<i64> {
        self.max_reliable_degree
    }

    /// Store `left[i] · right[j] = value`, validating that the value is
    /// homogeneous of degree `deg(i) + deg(j) + shift` (or zero).
    pub fn insert(&mut self, i: usize, j: usize, value: GradedElement) -> Result<()> {
        if !spaces_match(&self.target, value.space()) {
            return Err(EngineError::SpaceMismatch {
                expected: self.target.name().to_string(),
                got: value.space().name().to_string(),
            });
        }
        let want = self.left.degree_of(i) + self.right.degree_of(j) + self.shift;
        if let Some(got) = value.degree()? {
            if got != want {
                return Err(EngineError::Validation(format!(
                    "table '{}': entry ({}, {}) has degree {got}, expected {want}",
                    self.name,
                    self.left.symbol(i).name,
                    self.right.symbol(j).name,
                )));
            }
        }
        self.entries.insert((i, j), value);
        Ok(())
    }

    /// Store an entry with no validation at all.
    ///
    /// Escape hatch for fault-injection tests that deliberately plant
    /// inconsistent structure constants; normal construction goes through
    /// [`BilinearTable::insert`].
    pub fn insert_raw(&mut self, i: usize, j: usize, value: GradedElement) {
        self.entries.insert((i, j), value);
    }

    /// The stored value on a basis pair. An explicit entry always wins
    /// (so planted faults are visible); for absent entries:
    /// * negative result degree is genuinely zero;
    /// * degrees above the reliable window are an error;
    /// * otherwise the default is zero (`Total`) or an error (`Partial`).
    pub fn apply_basis(&self, i: usize, j: usize) -> Result<GradedElement> {
        if let Some(v) = self.entries.get(&(i, j)) {
            return Ok(v.clone());
        }
        let d = self.left.degree_of(i) + self.right.degree_of(j) + self.shift;
        if d < 0 {
            return Ok(GradedElement::zero(&self.target));
        }
        if let Some(w) = self.max_reliable_degree {
            if d > w {
                return Err(EngineError::TruncationExceeded {
                    degree: d,
                    window: w,
                    context: format!("table '{}'", self.name),
                });
            }
        }
        match self.completeness {
            Completeness::Total => Ok(GradedElement::zero(&self.target)),
            Completeness::Partial => Err(EngineError::InsufficientData(format!(
                "table '{}' has no entry for ({}, {})",
                self.name,
                self.left.symbol(i).name,
                self.right.symbol(j).name,
            ))),
        }
    }

    /// Bilinear extension to whole elements.
    pub fn apply(&self, u: &GradedElement, v: &GradedElement) -> Result<GradedElement> {
        if !spaces_match(&self.left, u.space()) {
            return Err(EngineError::SpaceMismatch {
                expected: self.left.name().to_string(),
                got: u.space().name().to_string(),
            });
        }
        if !spaces_match(&self.right, v.space()) {
            return Err(EngineError::SpaceMismatch {
                expected: self.right.name().to_string(),
                got: v.space().name().to_string(),
            });
        }
        let mut out = GradedElement::zero(&self.target);
        for (i, a) in u.terms() {
            for (j, b) in v.terms() {
                let val = self.apply_basis(i, j)?;
                if val.is_zero() {
                    continue;
                }
                let c = a.mul(b);
                out = out.add(&val.scale(&c))?;
            }
        }
        Ok(out)
    }

    /// All stored nonzero entries, keyed by basis indices (sorted).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GradedElement)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// Whether a value is stored for this basis pair (a stored zero counts;
    /// on partial tables this is what separates "known" from "missing").
    pub fn has_entry(&self, i: usize, j: usize) -> bool {
        self.entries.contains_key(&(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::BasisSymbol;
    use crate::scalar::Field;
    use proptest::prelude::*;

    fn setup() -> (Arc<GradedSpace>, BilinearTable) {
        let f = Field::Rationals;
        let s = GradedSpace::new(
            "R",
            f,
            vec![
                BasisSymbol::new("1", 0),
                BasisSymbol::new("a", 2),
                BasisSymbol::new("a^2", 4),
            ],
            Some(4),
        )
        .unwrap();
        let mut t = BilinearTable::new("mul", &s, &s, &s, 0, Completeness::Total, Some(4));
        for i in 0..3 {
            for j in 0..3 {
                if i + j < 3 {
                    t.insert(i, j, GradedElement::basis(&s, i + j)).unwrap();
                }
            }
        }
        (s, t)
    }

    #[test]
    fn degree_validation_on_insert() {
        let (s, mut t) = setup();
        // a * a must land in degree 4; planting degree 2 is rejected.
        assert!(t.insert(1, 1, GradedElement::basis(&s, 1)).is_err());
        assert!(t.insert(1, 1, GradedElement::basis(&s, 2)).is_ok());
        // insert_raw bypasses the check by design.
        t.insert_raw(1, 1, GradedElement::basis(&s, 1));
    }

    #[test]
    fn truncation_overflow_is_an_error_not_zero() {
        let (s, t) = setup();
        let a2 = GradedElement::basis(&s, 2);
        let err = t.apply(&a2, &a2).unwrap_err();
        assert!(matches!(
            err,
            EngineError::TruncationExceeded { degree: 8, .. }
        ));
    }

    #[test]
    fn partial_tables_refuse_unknown_rows() {
        let f = Field::Rationals;
        let s = GradedSpace::new(
            "V",
            f,
            vec![BasisSymbol::new("p", 0), BasisSymbol::new("q", 1)],
            None,
        )
        .unwrap();
        let mut t = BilinearTable::new("partial", &s, &s, &s, 0, Completeness::Partial, None);
        t.insert(0, 0, GradedElement::basis(&s, 0)).unwrap();
        assert!(t.apply_basis(0, 0).is_ok());
        assert!(matches!(
            t.apply_basis(0, 1),
            Err(EngineError::InsufficientData(_))
        ));
        // A stored zero row is fine and distinct from "missing".
        t.insert(1, 1, GradedElement::zero(&s)).unwrap();
        assert!(t.apply_basis(1, 1).unwrap().is_zero());
    }

    #[test]
    fn negative_result_degree_is_zero() {
        let f = Field::Rationals;
        let s = GradedSpace::new(
            "H",
            f,
            vec![BasisSymbol::new("[pt]", 0), BasisSymbol::new("[M]", 3)],
            None,
        )
        .unwrap();
        // Shift -3 mimics an intersection product on a 3-manifold.
        let t = BilinearTable::new("cap", &s, &s, &s, -3, Completeness::Partial, None);
        // [pt] . [pt] has degree -3 < 0: zero without consulting the table,
        // even though the table is partial and empty.
        assert!(t.apply_basis(0, 0).unwrap().is_zero());
    }

    proptest! {
        /// apply agrees with expanding by bilinearity term by term.
        #[test]
        fn bilinearity(c1 in -4i64..4, c2 in -4i64..4, d1 in -4i64..4, d2 in -4i64..4) {
            let (s, t) = setup();
            let f = Field::Rationals;
            let one = GradedElement::basis(&s, 0);
            let a = GradedElement::basis(&s, 1);
            let u = one.scale(&f.integer(c1)).add(&a.scale(&f.integer(c2))).unwrap();
            let v = one.scale(&f.integer(d1)).add(&a.scale(&f.integer(d2))).unwrap();
            let lhs = t.apply(&u, &v).unwrap();
            let mut rhs = GradedElement::zero(&s);
            for (i, ci) in u.terms() {
                for (j, cj) in v.terms() {
                    rhs = rhs.add(&t.apply_basis(i, j).unwrap().scale(&ci.mul(cj))).unwrap();
                }
            }
            prop_assert_eq!(lhs, rhs);
        }
    }
}
