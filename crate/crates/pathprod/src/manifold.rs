//! Homology models of closed oriented manifolds.
//!
//! A model is built from a finite graded-commutative cohomology ring.
//! The homology basis in degree d is the vector-space dual of the
//! degree-d cohomology monomial basis and inherits its names, except for
//! the two distinguished classes: the degree-0 class (`[e]` on Lie
//! groups, `[pt]` otherwise) and the fundamental class `[<name>]`.
//!
//! Poincaré duality is the pairing against the fundamental class:
//! PD(m) = Σ_v ε_top(v ∪ m) · v*, where ε_top reads off the top-monomial
//! coefficient. The intersection product is transported through it with
//! no extra sign,
//!
//! ```text
//! a ∩ b = PD(PD⁻¹ a ∪ PD⁻¹ b),
//! ```
//!
//! which makes the fundamental class the unit and gives the shifted
//! graded commutativity a ∩ b = (-1)^{(n-|a|)(n-|b|)} b ∩ a for free.
//! The β form is the point-class coefficient of a ∩ b in complementary
//! degrees, and the diagonal class is assembled from the inverse of the
//! β matrix degree by degree (and checked to be a two-sided μ_β unit).

use std::sync::Arc;

use crate::bilinear::{BilinearTable, Completeness};
use crate::error::{EngineError, Result};
use crate::graded::{tensor_space, BasisSymbol, GradedElement, GradedSpace, TensorSpace};
use crate::linalg::Matrix;
use crate::presentation::{expand_presentation, ExpandedRing, RingPresentation};
use crate::scalar::{Field, Scalar};

/// Input data for a manifold model.
#[derive(Clone, Debug)]
pub struct ManifoldSpec {
    pub name: String,
    pub dim: i64,
    pub lie_group: bool,
    pub cohomology: RingPresentation,
    /// Name override for the degree-0 homology class.
    pub point_class: Option<String>,
    /// Name override for the fundamental class.
    pub fundamental_class: Option<String>,
}

#[derive(Debug)]
pub struct ManifoldModel {
    name: String,
    dim: i64,
    lie_group: bool,
    presentation: RingPresentation,
    cohomology: ExpandedRing,
    homology: Arc<GradedSpace>,
    pair: TensorSpace,
    intersection: BilinearTable,
    pd: Vec<GradedElement>,
    pd_inv: Vec<GradedElement>,
    diagonal: GradedElement,
    point_index: usize,
    fundamental_index: usize,
}

impl ManifoldModel {
    pub fn build(field: Field, spec: &ManifoldSpec) -> Result<Arc<ManifoldModel>> {
        let name = spec.name.clone();
        let n = spec.dim;
        if n < 0 {
            return Err(EngineError::Validation(format!(
                "manifold '{name}': negative dimension {n}"
            )));
        }
        let cohomology = expand_presentation(format!("{name}.coh"), field, &spec.cohomology)?;
        if cohomology.product.max_reliable_degree().is_some() {
            return Err(EngineError::Validation(format!(
                "manifold '{name}': cohomology must be finite and untruncated"
            )));
        }
        let coh = &cohomology.space;

        // Closed oriented n-manifold sanity: connected, one-dimensional
        // top degree n, symmetric Betti numbers.
        if coh.max_degree() != n || coh.dim_in_degree(n) != 1 {
            return Err(EngineError::Validation(format!(
                "manifold '{name}': cohomology top degree must be {n} and one-dimensional"
            )));
        }
        for d in 0..=n {
            if coh.dim_in_degree(d) != coh.dim_in_degree(n - d) {
                return Err(EngineError::Validation(format!(
                    "manifold '{name}': Betti numbers are not Poincaré-symmetric in degree {d}"
                )));
            }
        }
        // Cup products on a manifold must be graded-commutative; monomial
        // presentations guarantee it, explicit tables are checked here.
        for i in 0..coh.dim() {
            for j in 0..coh.dim() {
                let (di, dj) = (coh.degree_of(i), coh.degree_of(j));
                let x = GradedElement::basis(coh, i);
                let y = GradedElement::basis(coh, j);
                let xy = cohomology.mul(&x, &y)?;
                let yx = cohomology.mul(&y, &x)?;
                if xy != yx.scale(&field.sign(di * dj)) {
                    return Err(EngineError::Validation(format!(
                        "manifold '{name}': cup product is not graded-commutative on ({}, {})",
                        coh.symbol(i).name,
                        coh.symbol(j).name
                    )));
                }
            }
        }

        // Homology: the degree-wise dual basis, index-aligned with the
        // cohomology monomials.
        let point_name = spec.point_class.clone().unwrap_or_else(|| {
            if spec.lie_group {
                "[e]".into()
            } else {
                "[pt]".into()
            }
        });
        let fundamental_name = spec
            .fundamental_class
            .clone()
            .unwrap_or_else(|| format!("[{name}]"));
        let symbols: Vec<BasisSymbol> = coh
            .symbols()
            .iter()
            .map(|s| {
                let nm = if s.degree == 0 && n == 0 {
                    point_name.clone()
                } else if s.degree == 0 {
                    point_name.clone()
                } else if s.degree == n {
                    fundamental_name.clone()
                } else {
                    s.name.clone()
                };
                BasisSymbol::new(nm, s.degree)
            })
            .collect();
        let homology = GradedSpace::new(format!("H({name})"), field, symbols, None)?;
        let point_index = homology.index_of(&point_name)?;
        let fundamental_index = if n == 0 {
            point_index
        } else {
            homology.index_of(&fundamental_name)?
        };
        let top_coh = coh
            .indices_in_degree(n)
            .pop()
            .expect("top degree is one-dimensional");

        // PD on the monomial basis.
        let eps_top = |x: &GradedElement| x.coefficient(top_coh);
        let mut pd: Vec<GradedElement> = Vec::with_capacity(coh.dim());
        for i in 0..coh.dim() {
            let d = coh.degree_of(i);
            let mi = GradedElement::basis(coh, i);
            let mut img = GradedElement::zero(&homology);
            for v in coh.indices_in_degree(n - d) {
                let cup = cohomology.mul(&GradedElement::basis(coh, v), &mi)?;
                img.add_term(v, eps_top(&cup));
            }
            pd.push(img);
        }

        // Invert PD degree by degree (rows: homology in degree n-d,
        // columns: cohomology in degree d).
        let mut pd_inv: Vec<GradedElement> = vec![GradedElement::zero(coh); coh.dim()];
        for d in 0..=n {
            let cols = coh.indices_in_degree(d);
            let rows = homology.indices_in_degree(n - d);
            if cols.is_empty() {
                continue;
            }
            let mut m = Matrix::zero(field, rows.len(), cols.len());
            for (cj, &ci) in cols.iter().enumerate() {
                for (rj, &hi) in rows.iter().enumerate() {
                    m.set(rj, cj, pd[ci].coefficient(hi));
                }
            }
            let inv = m.inverse().map_err(|_| {
                EngineError::DegeneratePairing(format!(
                    "manifold '{name}': Poincaré pairing is degenerate in degree {d}"
                ))
            })?;
            for (rj, &hi) in rows.iter().enumerate() {
                let mut img = GradedElement::zero(coh);
                for (cj, &ci) in cols.iter().enumerate() {
                    img.add_term(ci, inv.get(cj, rj).clone());
                }
                pd_inv[hi] = img;
            }
        }

        // Intersection structure constants through PD.
        let mut intersection = BilinearTable::new(
            format!("{name}.intersection"),
            &homology,
            &homology,
            &homology,
            -n,
            Completeness::Total,
            None,
        );
        for i in 0..homology.dim() {
            for j in 0..homology.dim() {
                let cup = cohomology.mul(&pd_inv[i], &pd_inv[j])?;
                let mut val = GradedElement::zero(&homology);
                for (ci, c) in cup.terms() {
                    val = val.add(&pd[ci].scale(c))?;
                }
                if !val.is_zero() {
                    intersection.insert(i, j, val)?;
                }
            }
        }

        let pair = tensor_space(
            format!("H({name})⊗H({name})"),
            &[Arc::clone(&homology), Arc::clone(&homology)],
        )?;
        let diagonal = GradedElement::zero(pair.space());

        let mut model = ManifoldModel {
            name,
            dim: n,
            lie_group: spec.lie_group,
            presentation: spec.cohomology.clone(),
            cohomology,
            homology,
            pair,
            intersection,
            pd,
            pd_inv,
            diagonal,
            point_index,
            fundamental_index,
        };
        model.diagonal = model.build_diagonal()?;
        model.assert_diagonal_is_unit()?;
        Ok(Arc::new(model))
    }

    /// Dual-basis diagonal: in each degree split (d, n-d), the inverse of
    /// the β matrix glues the two dual bases into Σ_i a_i ⊗ b_i.
    fn build_diagonal(&self) -> Result<GradedElement> {
        let field = self.field();
        let n = self.dim;
        let mut diag = GradedElement::zero(self.pair.space());
        for d in 0..=n {
            let es = self.homology.indices_in_degree(d);
            let fs = self.homology.indices_in_degree(n - d);
            if es.is_empty() {
                continue;
            }
            let mut m = Matrix::zero(field, es.len(), fs.len());
            for (si, &e) in es.iter().enumerate() {
                for (ti, &f) in fs.iter().enumerate() {
                    m.set(si, ti, self.beta_basis(e, f)?);
                }
            }
            let inv = m.inverse().map_err(|_| {
                EngineError::DegeneratePairing(format!(
                    "manifold '{}': β form is degenerate on H_{d} × H_{}",
                    self.name,
                    n - d
                ))
            })?;
            for (ti, &f) in fs.iter().enumerate() {
                for (si, &e) in es.iter().enumerate() {
                    diag.add_term(self.pair.combine(&[f, e])?, inv.get(ti, si).clone());
                }
            }
        }
        Ok(diag)
    }

    fn assert_diagonal_is_unit(&self) -> Result<()> {
        for i in 0..self.pair.space().dim() {
            let x = GradedElement::basis(self.pair.space(), i);
            let left = self.mu_beta(&self.diagonal, &x)?;
            let right = self.mu_beta(&x, &self.diagonal)?;
            if left != x || right != x {
                return Err(EngineError::DegeneratePairing(format!(
                    "manifold '{}': diagonal class fails to be a two-sided unit on {}",
                    self.name,
                    self.pair.space().symbol(i).name
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn is_lie_group(&self) -> bool {
        self.lie_group
    }

    pub fn field(&self) -> Field {
        self.homology.field()
    }

    /// The presentation the cohomology ring was expanded from.
    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    pub fn cohomology(&self) -> &ExpandedRing {
        &self.cohomology
    }

    pub fn homology(&self) -> &Arc<GradedSpace> {
        &self.homology
    }

    /// H ⊗ H, the home of the diagonal class and μ_β.
    pub fn pair_space(&self) -> &TensorSpace {
        &self.pair
    }

    pub fn intersection_table(&self) -> &BilinearTable {
        &self.intersection
    }

    pub fn point_class(&self) -> GradedElement {
        GradedElement::basis(&self.homology, self.point_index)
    }

    pub fn point_index(&self) -> usize {
        self.point_index
    }

    pub fn fundamental_class(&self) -> GradedElement {
        GradedElement::basis(&self.homology, self.fundamental_index)
    }

    pub fn fundamental_index(&self) -> usize {
        self.fundamental_index
    }

    /// PD: H^d → H_{n-d} (capping against the fundamental class).
    pub fn poincare_dual(&self, x: &GradedElement) -> Result<GradedElement> {
        if !crate::graded::spaces_match(&self.cohomology.space, x.space()) {
            return Err(EngineError::SpaceMismatch {
                expected: self.cohomology.space.name().to_string(),
                got: x.space().name().to_string(),
            });
        }
        let mut out = GradedElement::zero(&self.homology);
        for (i, c) in x.terms() {
            out = out.add(&self.pd[i].scale(c))?;
        }
        Ok(out)
    }

    /// PD⁻¹: H_e → H^{n-e}.
    pub fn poincare_dual_inverse(&self, a: &GradedElement) -> Result<GradedElement> {
        if !crate::graded::spaces_match(&self.homology, a.space()) {
            return Err(EngineError::SpaceMismatch {
                expected: self.homology.name().to_string(),
                got: a.space().name().to_string(),
            });
        }
        let mut out = GradedElement::zero(&self.cohomology.space);
        for (i, c) in a.terms() {
            out = out.add(&self.pd_inv[i].scale(c))?;
        }
        Ok(out)
    }

    /// a ∩ b = PD(PD⁻¹a ∪ PD⁻¹b), degree |a| + |b| - n.
    pub fn intersection_product(
        &self,
        a: &GradedElement,
        b: &GradedElement,
    ) -> Result<GradedElement> {
        self.intersection.apply(a, b)
    }

    /// β(x ⊗ y): the point-class coefficient of x ∩ y, nonzero only when
    /// the degrees are complementary.
    pub fn beta_form(&self, x: &GradedElement, y: &GradedElement) -> Result<Scalar> {
        let mut acc = self.field().zero();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                let s = self.beta_basis(i, j)?;
                if !s.is_zero() {
                    acc = acc.add(&s.mul(a).mul(b));
                }
            }
        }
        Ok(acc)
    }

    /// β on a pair of homology basis indices.
    pub fn beta_basis(&self, i: usize, j: usize) -> Result<Scalar> {
        if self.homology.degree_of(i) + self.homology.degree_of(j) != self.dim {
            return Ok(self.field().zero());
        }
        Ok(self
            .intersection
            .apply_basis(i, j)?
            .coefficient(self.point_index))
    }

    /// The diagonal class Σ_i a_i ⊗ b_i ∈ (H ⊗ H)_n; the two-sided unit
    /// of μ_β (asserted at construction).
    pub fn diagonal_class(&self) -> &GradedElement {
        &self.diagonal
    }

    /// μ_β((a⊗b) ⊗ (c⊗d)) = β(b⊗c) · a⊗d on H ⊗ H.
    pub fn mu_beta(&self, u: &GradedElement, v: &GradedElement) -> Result<GradedElement> {
        for (e, nm) in [(u, "left"), (v, "right")] {
            if !crate::graded::spaces_match(self.pair.space(), e.space()) {
                return Err(EngineError::SpaceMismatch {
                    expected: format!("{} ({nm} argument)", self.pair.space().name()),
                    got: e.space().name().to_string(),
                });
            }
        }
        let mut out = GradedElement::zero(self.pair.space());
        for (iu, cu) in u.terms() {
            let t = self.pair.split(iu);
            let (a, b) = (t[0], t[1]);
            for (iv, cv) in v.terms() {
                let s = self.pair.split(iv);
                let (c, d) = (s[0], s[1]);
                let beta = self.beta_basis(b, c)?;
                if beta.is_zero() {
                    continue;
                }
                out.add_term(self.pair.combine(&[a, d])?, cu.mul(cv).mul(&beta));
            }
        }
        Ok(out)
    }
}

/// A map of manifolds f: N → M, carried as the cohomology pullback
/// f^*: H^*(M) → H^*(N) (a degree-preserving ring map, validated on the
/// full monomial basis at construction).
#[derive(Debug)]
pub struct ManifoldMap {
    name: String,
    source: Arc<ManifoldModel>,
    target: Arc<ManifoldModel>,
    pullback: Vec<GradedElement>,
}

impl ManifoldMap {
    /// Build from images of the target's ring generators (each a linear
    /// combination in the source cohomology); monomials extend
    /// multiplicatively in declaration order.
    pub fn from_generator_images(
        name: impl Into<String>,
        source: &Arc<ManifoldModel>,
        target: &Arc<ManifoldModel>,
        generator_images: &[(String, GradedElement)],
        target_presentation: &RingPresentation,
    ) -> Result<ManifoldMap> {
        let name = name.into();
        let tcoh = &target.cohomology.space;
        let scoh = &source.cohomology.space;
        let mut gen_image: Vec<Option<GradedElement>> = vec![None; tcoh.dim()];
        for (g, img) in generator_images {
            let gi = tcoh.index_of(g)?;
            if !crate::graded::spaces_match(scoh, img.space()) {
                return Err(EngineError::SpaceMismatch {
                    expected: scoh.name().to_string(),
                    got: img.space().name().to_string(),
                });
            }
            if let Some(d) = img.degree()? {
                if d != tcoh.degree_of(gi) {
                    return Err(EngineError::Validation(format!(
                        "map '{name}': image of '{g}' has degree {d}, expected {}",
                        tcoh.degree_of(gi)
                    )));
                }
            }
            gen_image[gi] = Some(img.clone());
        }
        for (g, _) in &target_presentation.generators {
            let gi = tcoh.index_of(g)?;
            if gen_image[gi].is_none() {
                return Err(EngineError::Validation(format!(
                    "map '{name}': no image given for generator '{g}'"
                )));
            }
        }

        // Expand to the full monomial basis: φ(g1^{e1}···) = Πφ(gi)^{ei}.
        let mut pullback: Vec<GradedElement> = Vec::with_capacity(tcoh.dim());
        for i in 0..tcoh.dim() {
            let img = pullback_of_monomial(
                &target_presentation.generators,
                &tcoh.symbol(i).name,
                &gen_image,
                tcoh,
                source,
            )?;
            pullback.push(img);
        }
        let map = ManifoldMap {
            name,
            source: Arc::clone(source),
            target: Arc::clone(target),
            pullback,
        };
        map.validate_ring_map()?;
        Ok(map)
    }

    fn validate_ring_map(&self) -> Result<()> {
        let tcoh = &self.target.cohomology;
        let one_src = self.source.cohomology.unit();
        if self.pullback[tcoh.unit_index] != one_src {
            return Err(EngineError::Validation(format!(
                "map '{}': pullback does not preserve the unit",
                self.name
            )));
        }
        for i in 0..tcoh.space.dim() {
            for j in 0..tcoh.space.dim() {
                let prod = tcoh.mul(
                    &GradedElement::basis(&tcoh.space, i),
                    &GradedElement::basis(&tcoh.space, j),
                )?;
                let lhs = self.pullback_of(&prod)?;
                let rhs = self
                    .source
                    .cohomology
                    .mul(&self.pullback[i], &self.pullback[j])?;
                if lhs != rhs {
                    return Err(EngineError::Validation(format!(
                        "map '{}': pullback is not a ring map on ({}, {})",
                        self.name,
                        tcoh.space.symbol(i).name,
                        tcoh.space.symbol(j).name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<ManifoldModel> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ManifoldModel> {
        &self.target
    }

    /// f^* extended linearly to cohomology elements of the target.
    pub fn pullback_of(&self, x: &GradedElement) -> Result<GradedElement> {
        let mut out = GradedElement::zero(&self.source.cohomology.space);
        for (i, c) in x.terms() {
            out = out.add(&self.pullback[i].scale(c))?;
        }
        Ok(out)
    }

    /// The wrong-way (Gysin) map PD_N ∘ f^* ∘ PD_M⁻¹ : H_*(M) → H_{*-(n-k)}(N).
    /// It sends the fundamental class to the fundamental class and kills
    /// anything a trivial pullback cannot see.
    pub fn gysin(&self, a: &GradedElement) -> Result<GradedElement> {
        let x = self.target.poincare_dual_inverse(a)?;
        let y = self.pullback_of(&x)?;
        self.source.poincare_dual(&y)
    }
}

fn pullback_of_monomial(
    generators: &[(String, i64)],
    monomial: &str,
    gen_image: &[Option<GradedElement>],
    tcoh: &Arc<GradedSpace>,
    source: &Arc<ManifoldModel>,
) -> Result<GradedElement> {
    let ring = &source.cohomology;
    if monomial == "1" {
        return Ok(ring.unit());
    }
    let mut acc = ring.unit();
    for part in monomial.split('*') {
        let (gname, exp) = match part.split_once('^') {
            Some((g, e)) => (
                g,
                e.parse::<u32>().map_err(|_| {
                    EngineError::Validation(format!("bad monomial name '{monomial}'"))
                })?,
            ),
            None => (part, 1),
        };
        if !generators.iter().any(|(g, _)| g == gname) {
            return Err(EngineError::Validation(format!(
                "monomial '{monomial}' uses unknown generator '{gname}'"
            )));
        }
        let gi = tcoh.index_of(gname)?;
        let img = gen_image[gi]
            .as_ref()
            .ok_or_else(|| EngineError::Validation(format!("no image for generator '{gname}'")))?;
        for _ in 0..exp {
            acc = ring.mul(&acc, img)?;
        }
    }
    Ok(acc)
}
