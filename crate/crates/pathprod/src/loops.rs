//! Based and free loop space homology.
//!
//! `LoopSpaceModel` is the Pontryagin ring H_*(ΩK; F) given by a ring
//! presentation (typically a truncated polynomial ring, since based loop
//! homology of a simply-connected compact group is polynomial on even
//! generators).
//!
//! `FreeLoopModel` is H_*(ΛG; F) with its loop product. For a Lie group
//! the multiplication trivializes ΛG ≅ G × ΩG, the homology is
//! H_*(G) ⊗ H_*(ΩG), and the loop product is
//!
//! ```text
//! (a⊗u) ∧ (b⊗v) = (-1)^{|u|(n+|b|)} (a ∩ b) ⊗ (u ⋆ v),
//! ```
//!
//! a product of degree -n whose unit is [G]⊗1. The sign is forced by
//! asking that the unit be two-sided and that the wrong-way map of
//! ΩG ↪ ΛG — here (a⊗u) ↦ ⟨a, [G]⟩·u — be a ring map into the
//! Pontryagin ring. A `declared` model instead carries an explicit
//! (possibly partial) product table and explicit wrong-way images, and
//! refuses to answer where data is missing.
//!
//! Center computations use the graded (Koszul-signed) commutator
//! z⋆x - (-1)^{|z||x|} x⋆z; constraints whose products fall outside a
//! truncated ring's reliable window are skipped, so answers are "central
//! as far as the window can see".

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::bilinear::{BilinearTable, Completeness};
use crate::error::{EngineError, Result};
use crate::graded::{
    spaces_match, tensor_space_trunc, BasisSymbol, GradedElement, GradedSpace, TensorSpace,
};
use crate::linalg::Matrix;
use crate::manifold::ManifoldModel;
use crate::presentation::{expand_presentation, ExpandedRing, RingPresentation};
use crate::scalar::{Field, Scalar};

/// Pontryagin ring of a based loop space.
#[derive(Debug)]
pub struct LoopSpaceModel {
    name: String,
    ring: ExpandedRing,
    even_only: bool,
}

impl LoopSpaceModel {
    /// `assert_even` makes construction fail if any basis class has odd
    /// degree (models that claim evenness should not silently drift).
    pub fn build(
        name: impl Into<String>,
        field: Field,
        presentation: &RingPresentation,
        assert_even: bool,
    ) -> Result<Arc<LoopSpaceModel>> {
        let name = name.into();
        let ring = expand_presentation(name.clone(), field, presentation)?;
        let even_only = ring.space.symbols().iter().all(|s| s.degree % 2 == 0);
        if assert_even && !even_only {
            let odd = ring
                .space
                .symbols()
                .iter()
                .find(|s| s.degree % 2 != 0)
                .expect("an odd class exists");
            return Err(EngineError::Validation(format!(
                "loop model '{name}' asserted even degrees but '{}' has degree {}",
                odd.name, odd.degree
            )));
        }
        Ok(Arc::new(LoopSpaceModel {
            name,
            ring,
            even_only,
        }))
    }

    /// Wrap an already-expanded ring without re-validating its axioms.
    /// Intended for fault-injection tests that perturb a structure
    /// constant and check that downstream property checks notice.
    pub fn from_ring(name: impl Into<String>, ring: ExpandedRing) -> Arc<LoopSpaceModel> {
        let even_only = ring.space.symbols().iter().all(|s| s.degree % 2 == 0);
        Arc::new(LoopSpaceModel {
            name: name.into(),
            ring,
            even_only,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.ring.space.field()
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.ring.space
    }

    pub fn ring(&self) -> &ExpandedRing {
        &self.ring
    }

    pub fn even_only(&self) -> bool {
        self.even_only
    }

    pub fn unit(&self) -> GradedElement {
        self.ring.unit()
    }

    /// The Pontryagin product u ⋆ v.
    pub fn pontryagin(&self, u: &GradedElement, v: &GradedElement) -> Result<GradedElement> {
        self.ring.mul(u, v)
    }
}

/// Degreewise graded center of a ring, up to `up_to`: in each degree d,
/// the classes z with z⋆x = (-1)^{|z||x|} x⋆z for every basis class x
/// whose products with degree-d classes stay inside the ring's reliable
/// window (out-of-window constraints are skipped, not assumed).
pub fn graded_center(ring: &ExpandedRing, up_to: i64) -> Result<Vec<(i64, Vec<GradedElement>)>> {
    let space = &ring.space;
    let field = space.field();
    let mut out = Vec::new();
    for d in 0..=up_to.min(space.max_degree()) {
        let zs = space.indices_in_degree(d);
        if zs.is_empty() {
            continue;
        }
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        'xloop: for x in 0..space.dim() {
            let sign = field.sign(d * space.degree_of(x));
            let mut cols: Vec<GradedElement> = Vec::with_capacity(zs.len());
            for &z in &zs {
                let ze = GradedElement::basis(space, z);
                let xe = GradedElement::basis(space, x);
                let zx = match ring.mul(&ze, &xe) {
                    Ok(v) => v,
                    Err(EngineError::TruncationExceeded { .. }) => continue 'xloop,
                    Err(e) => return Err(e),
                };
                let xz = match ring.mul(&xe, &ze) {
                    Ok(v) => v,
                    Err(EngineError::TruncationExceeded { .. }) => continue 'xloop,
                    Err(e) => return Err(e),
                };
                cols.push(zx.sub(&xz.scale(&sign))?);
            }
            let mut coords: BTreeSet<usize> = BTreeSet::new();
            for c in &cols {
                for (i, _) in c.terms() {
                    coords.insert(i);
                }
            }
            for ci in coords {
                rows.push(cols.iter().map(|c| c.coefficient(ci)).collect());
            }
        }
        let mut m = Matrix::zero(field, rows.len().max(1), zs.len());
        for (ri, row) in rows.iter().enumerate() {
            for (ci, v) in row.iter().enumerate() {
                m.set(ri, ci, v.clone());
            }
        }
        let center = m
            .kernel_basis()
            .into_iter()
            .map(|k| {
                let mut e = GradedElement::zero(space);
                for (ci, &z) in zs.iter().enumerate() {
                    e.add_term(z, k[ci].clone());
                }
                e
            })
            .collect();
        out.push((d, center));
    }
    Ok(out)
}

/// Whether a homogeneous element graded-commutes with every basis class
/// reachable inside the window. Zero is central; inhomogeneous input is
/// an error.
pub fn is_in_graded_center(ring: &ExpandedRing, z: &GradedElement) -> Result<bool> {
    let space = &ring.space;
    if !spaces_match(space, z.space()) {
        return Err(EngineError::SpaceMismatch {
            expected: space.name().to_string(),
            got: z.space().name().to_string(),
        });
    }
    let d = match z.degree()? {
        None => return Ok(true),
        Some(d) => d,
    };
    let field = space.field();
    for x in 0..space.dim() {
        let xe = GradedElement::basis(space, x);
        let zx = match ring.mul(z, &xe) {
            Ok(v) => v,
            Err(EngineError::TruncationExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        let xz = match ring.mul(&xe, z) {
            Ok(v) => v,
            Err(EngineError::TruncationExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        if zx != xz.scale(&field.sign(d * space.degree_of(x))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Input for a free loop model with explicitly declared structure.
#[derive(Clone, Debug)]
pub struct DeclaredFreeLoopSpec {
    pub classes: Vec<(String, i64)>,
    /// Name of the loop-product unit (its degree must equal `dim_shift`).
    pub unit: String,
    pub truncation: Option<i64>,
    /// Degree drop of both the loop product and the wrong-way map
    /// (the dimension of the underlying manifold).
    pub dim_shift: i64,
    pub products: Vec<(String, String, Vec<(String, Scalar)>)>,
    /// Wrong-way images in the based model; classes with no declared
    /// image yield `InsufficientData` when asked for.
    pub gysin_images: Vec<(String, Vec<(String, Scalar)>)>,
}

#[derive(Debug)]
enum FreeLoopInner {
    LieGroup {
        group: Arc<ManifoldModel>,
        lambda: TensorSpace,
    },
    Declared {
        space: Arc<GradedSpace>,
        product: BilinearTable,
        gysin: BTreeMap<usize, GradedElement>,
        dim_shift: i64,
        unit_index: usize,
    },
}

/// Homology of a free loop space with its loop product.
#[derive(Debug)]
pub struct FreeLoopModel {
    name: String,
    based: Arc<LoopSpaceModel>,
    inner: FreeLoopInner,
}

impl FreeLoopModel {
    /// H_*(ΛG) ≅ H_*(G) ⊗ H_*(ΩG) for a Lie group, with the signed loop
    /// product computed from the intersection and Pontryagin products.
    pub fn lie_group(
        name: impl Into<String>,
        group: &Arc<ManifoldModel>,
        based: &Arc<LoopSpaceModel>,
    ) -> Result<Arc<FreeLoopModel>> {
        let name = name.into();
        if !group.is_lie_group() {
            return Err(EngineError::Validation(format!(
                "free loop model '{name}': '{}' is not marked as a Lie group, so the \
                 product trivialization H(G)⊗H(ΩG) does not apply",
                group.name()
            )));
        }
        if group.field() != based.field() {
            return Err(EngineError::FieldMismatch(
                format!("{:?}", group.field()),
                format!("{:?}", based.field()),
            ));
        }
        let lambda = tensor_space_trunc(
            name.clone(),
            &[Arc::clone(group.homology()), Arc::clone(based.space())],
            based.space().truncation().map(|w| w + group.dim()),
        )?;
        Ok(Arc::new(FreeLoopModel {
            name,
            based: Arc::clone(based),
            inner: FreeLoopInner::LieGroup {
                group: Arc::clone(group),
                lambda,
            },
        }))
    }

    /// A free loop model given by explicit classes, a (possibly partial)
    /// product table and declared wrong-way images.
    pub fn declared(
        name: impl Into<String>,
        based: &Arc<LoopSpaceModel>,
        spec: &DeclaredFreeLoopSpec,
    ) -> Result<Arc<FreeLoopModel>> {
        let name = name.into();
        let field = based.field();
        let symbols: Vec<BasisSymbol> = spec
            .classes
            .iter()
            .map(|(n, d)| BasisSymbol::new(n.clone(), *d))
            .collect();
        let space = GradedSpace::new(name.clone(), field, symbols, spec.truncation)?;
        let unit_index = space.index_of(&spec.unit)?;
        if space.degree_of(unit_index) != spec.dim_shift {
            return Err(EngineError::Validation(format!(
                "free loop model '{name}': unit '{}' has degree {}, expected {} \
                 (the product drops degree by {})",
                spec.unit,
                space.degree_of(unit_index),
                spec.dim_shift,
                spec.dim_shift
            )));
        }
        let mut product = BilinearTable::new(
            format!("{name}.loop_product"),
            &space,
            &space,
            &space,
            -spec.dim_shift,
            Completeness::Partial,
            spec.truncation,
        );
        for (l, r, val) in &spec.products {
            let (i, j) = (space.index_of(l)?, space.index_of(r)?);
            let parts: Vec<(&str, Scalar)> =
                val.iter().map(|(n, c)| (n.as_str(), c.clone())).collect();
            product.insert(i, j, GradedElement::from_named(&space, &parts)?)?;
        }
        // Unit rows are forced; fill the gaps and reject contradictions.
        for i in 0..space.dim() {
            let b = GradedElement::basis(&space, i);
            for (l, r) in [(unit_index, i), (i, unit_index)] {
                if product.has_entry(l, r) {
                    if product.apply_basis(l, r)? != b {
                        return Err(EngineError::Validation(format!(
                            "free loop model '{name}': declared product breaks the unit law \
                             on '{}'",
                            space.symbol(i).name
                        )));
                    }
                } else {
                    product.insert(l, r, b.clone())?;
                }
            }
        }
        let mut gysin = BTreeMap::new();
        for (cls, img) in &spec.gysin_images {
            let i = space.index_of(cls)?;
            let parts: Vec<(&str, Scalar)> =
                img.iter().map(|(n, c)| (n.as_str(), c.clone())).collect();
            let e = GradedElement::from_named(based.space(), &parts)?;
            if let Some(d) = e.degree()? {
                if d != space.degree_of(i) - spec.dim_shift {
                    return Err(EngineError::Validation(format!(
                        "free loop model '{name}': wrong-way image of '{cls}' has degree {d}, \
                         expected {}",
                        space.degree_of(i) - spec.dim_shift
                    )));
                }
            }
            gysin.insert(i, e);
        }
        Ok(Arc::new(FreeLoopModel {
            name,
            based: Arc::clone(based),
            inner: FreeLoopInner::Declared {
                space,
                product,
                gysin,
                dim_shift: spec.dim_shift,
                unit_index,
            },
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn based(&self) -> &Arc<LoopSpaceModel> {
        &self.based
    }

    pub fn field(&self) -> Field {
        self.based.field()
    }

    /// The Lie group underlying a `lie_group` model.
    pub fn group(&self) -> Option<&Arc<ManifoldModel>> {
        match &self.inner {
            FreeLoopInner::LieGroup { group, .. } => Some(group),
            FreeLoopInner::Declared { .. } => None,
        }
    }

    /// Degree drop of the loop product (= dim of the underlying manifold).
    pub fn dim_shift(&self) -> i64 {
        match &self.inner {
            FreeLoopInner::LieGroup { group, .. } => group.dim(),
            FreeLoopInner::Declared { dim_shift, .. } => *dim_shift,
        }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        match &self.inner {
            FreeLoopInner::LieGroup { lambda, .. } => lambda.space(),
            FreeLoopInner::Declared { space, .. } => space,
        }
    }

    /// The tensor factorization H(G)⊗H(ΩG) of a `lie_group` model.
    pub fn tensor_structure(&self) -> Option<&TensorSpace> {
        match &self.inner {
            FreeLoopInner::LieGroup { lambda, .. } => Some(lambda),
            FreeLoopInner::Declared { .. } => None,
        }
    }

    pub fn loop_unit(&self) -> GradedElement {
        match &self.inner {
            FreeLoopInner::LieGroup { group, lambda } => {
                let idx = lambda
                    .combine(&[group.fundamental_index(), self.based.ring().unit_index])
                    .expect("[G]⊗1 is always inside the window");
                GradedElement::basis(lambda.space(), idx)
            }
            FreeLoopInner::Declared {
                space, unit_index, ..
            } => GradedElement::basis(space, *unit_index),
        }
    }

    /// The loop (Chas–Sullivan) product, degree -dim_shift.
    pub fn loop_product(&self, x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
        match &self.inner {
            FreeLoopInner::Declared { product, .. } => product.apply(x, y),
            FreeLoopInner::LieGroup { group, lambda } => {
                for e in [x, y] {
                    if !spaces_match(lambda.space(), e.space()) {
                        return Err(EngineError::SpaceMismatch {
                            expected: lambda.space().name().to_string(),
                            got: e.space().name().to_string(),
                        });
                    }
                }
                let field = self.field();
                let n = group.dim();
                let mut out = GradedElement::zero(lambda.space());
                for (ix, cx) in x.terms() {
                    let tx = lambda.split(ix);
                    let (a, u) = (tx[0], tx[1]);
                    for (iy, cy) in y.terms() {
                        let ty = lambda.split(iy);
                        let (b, v) = (ty[0], ty[1]);
                        let du = self.based.space().degree_of(u);
                        let db = group.homology().degree_of(b);
                        let sign = field.sign(du * (n + db));
                        let cap = group.intersection_table().apply_basis(a, b)?;
                        if cap.is_zero() {
                            continue;
                        }
                        let star = self.based.ring().mul(
                            &GradedElement::basis(self.based.space(), u),
                            &GradedElement::basis(self.based.space(), v),
                        )?;
                        let scale = cx.mul(cy).mul(&sign);
                        for (gi, gc) in cap.terms() {
                            for (oi, oc) in star.terms() {
                                out.add_term(lambda.combine(&[gi, oi])?, scale.mul(gc).mul(oc));
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// The wrong-way map of ΩG ↪ ΛG, landing in the Pontryagin ring.
    /// On a Lie-group model this reads off the fundamental-class
    /// component: (a⊗u) ↦ ⟨a, [G]⟩·u.
    pub fn gysin_to_based(&self, x: &GradedElement) -> Result<GradedElement> {
        if !spaces_match(self.space(), x.space()) {
            return Err(EngineError::SpaceMismatch {
                expected: self.space().name().to_string(),
                got: x.space().name().to_string(),
            });
        }
        let mut out = GradedElement::zero(self.based.space());
        match &self.inner {
            FreeLoopInner::LieGroup { group, lambda } => {
                for (i, c) in x.terms() {
                    let t = lambda.split(i);
                    if t[0] == group.fundamental_index() {
                        out.add_term(t[1], c.clone());
                    }
                }
            }
            FreeLoopInner::Declared { space, gysin, .. } => {
                for (i, c) in x.terms() {
                    let img = gysin.get(&i).ok_or_else(|| {
                        EngineError::InsufficientData(format!(
                            "free loop model '{}': no wrong-way image declared for '{}'",
                            self.name,
                            space.symbol(i).name
                        ))
                    })?;
                    out = out.add(&img.scale(c))?;
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::ManifoldSpec;

    fn q() -> Field {
        Field::Rationals
    }

    fn omega(gens: Vec<(&str, i64)>, trunc: i64) -> Arc<LoopSpaceModel> {
        let pres = RingPresentation::polynomial(
            gens.into_iter().map(|(n, d)| (n.to_string(), d)).collect(),
            trunc,
        );
        LoopSpaceModel::build("omega", q(), &pres, false).unwrap()
    }

    fn su2() -> Arc<ManifoldModel> {
        ManifoldModel::build(
            q(),
            &ManifoldSpec {
                name: "su2".into(),
                dim: 3,
                lie_group: true,
                cohomology: RingPresentation::exterior(vec![("x3".into(), 3)]),
                point_class: None,
                fundamental_class: None,
            },
        )
        .unwrap()
    }

    fn su3() -> Arc<ManifoldModel> {
        ManifoldModel::build(
            q(),
            &ManifoldSpec {
                name: "su3".into(),
                dim: 8,
                lie_group: true,
                cohomology: RingPresentation::exterior(vec![("x3".into(), 3), ("x5".into(), 5)]),
                point_class: None,
                fundamental_class: None,
            },
        )
        .unwrap()
    }

    fn lam(m: &FreeLoopModel, g: &str, o: &str) -> GradedElement {
        let t = m.tensor_structure().unwrap();
        let gi = m.group().unwrap().homology().index_of(g).unwrap();
        let oi = m.based().space().index_of(o).unwrap();
        GradedElement::basis(t.space(), t.combine(&[gi, oi]).unwrap())
    }

    #[test]
    fn pontryagin_ring_of_based_loops_on_s3() {
        let o = omega(vec![("b2", 2)], 12);
        // dims 1,0,1,0,... up to the window
        assert_eq!(
            o.space().dims_up_to(12),
            vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]
        );
        let b = GradedElement::basis(o.space(), o.space().index_of("b2").unwrap());
        let b2 = o.pontryagin(&b, &b).unwrap();
        assert_eq!(
            b2,
            GradedElement::basis(o.space(), o.space().index_of("b2^2").unwrap())
        );
        // beyond the window: loud failure, not silent zero
        let top = GradedElement::basis(o.space(), o.space().index_of("b2^6").unwrap());
        assert!(matches!(
            o.pontryagin(&top, &b).unwrap_err(),
            EngineError::TruncationExceeded { .. }
        ));
    }

    #[test]
    fn even_assertion() {
        let pres = RingPresentation::polynomial(vec![("a".into(), 1)], 6);
        assert!(LoopSpaceModel::build("x", q(), &pres, true).is_err());
        let o = omega(vec![("b2", 2)], 6);
        assert!(o.even_only());
    }

    #[test]
    fn center_of_one_odd_generator_is_even_powers() {
        // Q[a], |a| odd: a^k ⋆ a^l = a^{k+l} strictly, but the graded
        // commutator 2a^{k+1} kills the odd powers from the center.
        for (deg, trunc, up_to) in [(1i64, 10i64, 8i64), (3, 24, 18), (5, 30, 20)] {
            let pres = RingPresentation::polynomial(vec![("a".into(), deg)], trunc);
            let ring = expand_presentation("poly", q(), &pres).unwrap();
            for (d, basis) in graded_center(&ring, up_to).unwrap() {
                let power = d / deg;
                let expected = if power % 2 == 0 { 1 } else { 0 };
                assert_eq!(basis.len(), expected, "degree {d} for |a|={deg}");
                for z in basis {
                    assert!(is_in_graded_center(&ring, &z).unwrap());
                }
            }
        }
    }

    #[test]
    fn even_polynomial_ring_is_its_own_center() {
        let o = omega(vec![("b2", 2), ("b4", 4)], 10);
        for (d, basis) in graded_center(o.ring(), 8).unwrap() {
            assert_eq!(basis.len(), o.space().dim_in_degree(d), "degree {d}");
        }
    }

    #[test]
    fn membership_check_matches_center() {
        let pres = RingPresentation::polynomial(vec![("a".into(), 3)], 24);
        let ring = expand_presentation("poly", q(), &pres).unwrap();
        let a = GradedElement::basis(&ring.space, ring.space.index_of("a").unwrap());
        let a2 = GradedElement::basis(&ring.space, ring.space.index_of("a^2").unwrap());
        assert!(!is_in_graded_center(&ring, &a).unwrap());
        assert!(is_in_graded_center(&ring, &a2).unwrap());
        assert!(is_in_graded_center(&ring, &GradedElement::zero(&ring.space)).unwrap());
    }

    #[test]
    fn loop_product_on_free_loops_of_s3() {
        // H(ΛS³) ≅ Λ(E)⊗Q[U] with E = [e]⊗1 (E∧E = 0) and U = [su2]⊗b2.
        let g = su2();
        let o = omega(vec![("b2", 2)], 12);
        let l = FreeLoopModel::lie_group("lambda", &g, &o).unwrap();
        let unit = l.loop_unit();
        assert_eq!(l.loop_product(&unit, &unit).unwrap(), unit);

        let e = lam(&l, "[e]", "1");
        let u = lam(&l, "[su2]", "b2");
        assert!(l.loop_product(&e, &e).unwrap().is_zero());
        assert_eq!(l.loop_product(&u, &u).unwrap(), lam(&l, "[su2]", "b2^2"));
        let eu = l.loop_product(&e, &u).unwrap();
        assert_eq!(eu, lam(&l, "[e]", "b2"));
        assert_eq!(l.loop_product(&u, &e).unwrap(), eu);
        // unit acts on both sides everywhere
        for i in 0..l.space().dim() {
            let x = GradedElement::basis(l.space(), i);
            if l.space().degree_of(i) + 3 > 12 + 3 {
                continue;
            }
            assert_eq!(l.loop_product(&unit, &x).unwrap(), x);
            assert_eq!(l.loop_product(&x, &unit).unwrap(), x);
        }
    }

    #[test]
    fn loop_product_is_shifted_commutative_and_associative() {
        let g = su3();
        let pres = RingPresentation::polynomial(vec![("b2".into(), 2), ("b4".into(), 4)], 8);
        let o = LoopSpaceModel::build("omega", q(), &pres, true).unwrap();
        let l = FreeLoopModel::lie_group("lambda", &g, &o).unwrap();
        let n = l.dim_shift();
        let field = q();
        let dim = l.space().dim();
        for i in 0..dim {
            for j in 0..dim {
                let x = GradedElement::basis(l.space(), i);
                let y = GradedElement::basis(l.space(), j);
                let (Ok(xy), Ok(yx)) = (l.loop_product(&x, &y), l.loop_product(&y, &x)) else {
                    continue;
                };
                let s = field.sign((l.space().degree_of(i) - n) * (l.space().degree_of(j) - n));
                assert_eq!(xy, yx.scale(&s), "pair ({i},{j})");
                for k in 0..dim {
                    let z = GradedElement::basis(l.space(), k);
                    let (Ok(l1), Ok(r1)) = (
                        l.loop_product(&xy, &z),
                        l.loop_product(&y, &z)
                            .and_then(|yz| l.loop_product(&x, &yz)),
                    ) else {
                        continue;
                    };
                    assert_eq!(l1, r1, "triple ({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn wrong_way_map_is_a_ring_morphism() {
        let g = su2();
        let o = omega(vec![("b2", 2)], 12);
        let l = FreeLoopModel::lie_group("lambda", &g, &o).unwrap();
        assert_eq!(l.gysin_to_based(&l.loop_unit()).unwrap(), o.unit());
        let dim = l.space().dim();
        for i in 0..dim {
            for j in 0..dim {
                let x = GradedElement::basis(l.space(), i);
                let y = GradedElement::basis(l.space(), j);
                let Ok(xy) = l.loop_product(&x, &y) else {
                    continue;
                };
                let lhs = l.gysin_to_based(&xy).unwrap();
                let rhs = o
                    .pontryagin(
                        &l.gysin_to_based(&x).unwrap(),
                        &l.gysin_to_based(&y).unwrap(),
                    )
                    .unwrap();
                assert_eq!(lhs, rhs, "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn declared_model_partial_semantics() {
        let o = omega(vec![("b2", 2)], 6);
        let spec = DeclaredFreeLoopSpec {
            classes: vec![
                ("E".into(), 0),
                ("W".into(), 2),
                ("T".into(), 3),
                ("U".into(), 5),
            ],
            unit: "T".into(),
            truncation: Some(8),
            dim_shift: 3,
            products: vec![
                ("U".into(), "E".into(), vec![("W".into(), q().integer(2))]),
                ("W".into(), "U".into(), vec![]),
            ],
            gysin_images: vec![
                ("T".into(), vec![("1".into(), q().one())]),
                ("E".into(), vec![]),
            ],
        };
        let l = FreeLoopModel::declared("decl", &o, &spec).unwrap();
        let e = GradedElement::basis(l.space(), l.space().index_of("E").unwrap());
        let w = GradedElement::basis(l.space(), l.space().index_of("W").unwrap());
        let t = l.loop_unit();
        let u = GradedElement::basis(l.space(), l.space().index_of("U").unwrap());
        assert_eq!(l.loop_product(&u, &e).unwrap(), w.scale(&q().integer(2)));
        // declared-zero is an answer; a missing pair is not
        assert!(l.loop_product(&w, &u).unwrap().is_zero());
        assert!(matches!(
            l.loop_product(&u, &w).unwrap_err(),
            EngineError::InsufficientData(_)
        ));
        // negative result degree needs no data at all
        assert!(l.loop_product(&e, &e).unwrap().is_zero());
        // auto-filled unit rows
        assert_eq!(l.loop_product(&t, &u).unwrap(), u);
        // declared wrong-way images; U has none
        assert_eq!(l.gysin_to_based(&t).unwrap(), o.unit());
        assert!(l.gysin_to_based(&e).unwrap().is_zero());
        assert!(matches!(
            l.gysin_to_based(&u).unwrap_err(),
            EngineError::InsufficientData(_)
        ));
    }

    #[test]
    fn declared_unit_contradiction_is_rejected() {
        let o = omega(vec![("b2", 2)], 6);
        let spec = DeclaredFreeLoopSpec {
            classes: vec![("T".into(), 3), ("U".into(), 5)],
            unit: "T".into(),
            truncation: Some(8),
            dim_shift: 3,
            products: vec![("T".into(), "U".into(), vec![("U".into(), q().integer(2))])],
            gysin_images: vec![],
        };
        let err = FreeLoopModel::declared("decl", &o, &spec).unwrap_err();
        assert!(err.to_string().contains("unit law"), "{err}");
    }

    #[test]
    fn lie_group_model_requires_a_lie_group() {
        let s2 = ManifoldModel::build(
            q(),
            &ManifoldSpec {
                name: "s2".into(),
                dim: 2,
                lie_group: false,
                cohomology: RingPresentation::exterior(vec![("v2".into(), 2)]),
                point_class: None,
                fundamental_class: None,
            },
        )
        .unwrap();
        let o = omega(vec![("b2", 2)], 6);
        assert!(FreeLoopModel::lie_group("bad", &s2, &o).is_err());
    }
}
