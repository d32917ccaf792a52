//! Paths in a compact Lie group G with endpoints in a subgroup K.
//!
//! Unlike the null-homotopic situation, the path space P_K G of a
//! genuine subgroup K ⊂ G does not split as K × K × ΩG; instead the
//! evaluation maps give homotopy equivalences
//!
//! ```text
//! P_{Ke}G ≃ K × ΩG,   P_{eK}G ≃ K × ΩG,   P_K G ≃ K × P_{eK}G,
//! ```
//!
//! and the path product and the action of free loop classes factor
//! through these splittings:
//!
//! ```text
//! (a ⊗ X′) ∧ (b ⊗ Y′) = φ_*( (a ∩ b) ⊗ concat_*(X′ ⊗ Y′) )
//! A · (b ⊗ x)          = (-1)^{|u|(k+|b|)} (i_!(α) ∩ b) ⊗ (u ▷ x)
//!                                         for A = α ⊗ u in H(G)⊗H(ΩG)
//! ```
//!
//! where ∩ is the intersection product of K, i_! the wrong-way map of
//! K ↪ G, concat_* concatenation P_{Ke}G × P_{eK}G → P_K G, u ▷ x the
//! concatenation action of based loops, and φ the translation action of
//! K on P_K G. The homotopy equivalences determine only a handful of
//! structure constants of concat_*, ▷ and φ_* — exactly the unit rows,
//! plus one pinned concatenation value
//!
//! ```text
//! concat(𝒮 ⊗ [ω₀]) = ι_*𝒮 = [K]⊗[ω₀] + c·e₃
//! ```
//!
//! whose second coefficient c is genuinely undetermined. The tables here
//! store nothing beyond that: any other request fails loudly with an
//! "insufficient scenario data" error instead of inventing a value, and
//! every claimed identity is verified at c = 0 and c = 1 (the values
//! are degree-1 polynomials in c, so two points prove c-independence).
//!
//! The point of the setup: for K = SU(2) ⊂ G = SU(n) the class
//! Σ = Σ′⊗[ω₀], with Σ′ the unique monomial of degree n²−4, satisfies
//! Σ·(X∧Y) ≠ 0 while X∧(Σ·Y) = 0, so the path product does not make the
//! homology an algebra over the free loop ring — and replacing the
//! subgroup embedding by a null-homotopic one changes the module
//! structure while keeping all graded dimensions.

use std::sync::Arc;

use crate::bilinear::{BilinearTable, Completeness};
use crate::error::{EngineError, Result};
use crate::graded::{spaces_match, tensor_space_trunc, GradedElement, GradedSpace, TensorSpace};
use crate::loops::{FreeLoopModel, LoopSpaceModel};
use crate::manifold::{ManifoldMap, ManifoldModel, ManifoldSpec};
use crate::presentation::RingPresentation;
use crate::report::Report;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingKind {
    /// The standard block inclusion SU(2) ⊂ SU(n).
    Subgroup,
    /// An embedding that contracts in G: the pullback vanishes in
    /// positive degrees, so every positive-degree wrong-way image is 0.
    NullHomotopic,
}

/// The path space P_K G of a subgroup pair, with its minimal-data
/// product and action tables.
#[derive(Clone)]
pub struct SubgroupScenario {
    name: String,
    kind: EmbeddingKind,
    window: i64,
    group: Arc<ManifoldModel>,
    subgroup: Arc<ManifoldModel>,
    inclusion: Arc<ManifoldMap>,
    omega: Arc<LoopSpaceModel>,
    free_loop: Arc<FreeLoopModel>,
    pke: TensorSpace,
    pek: TensorSpace,
    total: TensorSpace,
    sigma: GradedElement,
    s_class: GradedElement,
    x_endpoint: GradedElement,
    y_endpoint: GradedElement,
    y_path: GradedElement,
    /// ι_*𝒮 = iota_base + c·iota_dir.
    iota_base: GradedElement,
    iota_dir: GradedElement,
    c: Scalar,
    iota_s: GradedElement,
    concat: BilinearTable,
    phi: BilinearTable,
    omega_act: BilinearTable,
    /// A private copy of K's intersection table, so fault-injection
    /// tests can perturb it without touching the shared manifold model.
    k_intersection: BilinearTable,
}

/// Build the SU(2) ⊂ SU(n) scenario. H(SU(n)) is exterior on degrees
/// 3, 5, …, 2n−1; H(ΩSU(n)) polynomial on degrees 2, 4, …, 2n−2 within
/// the window; Σ′ is the unique homology monomial of degree n²−4.
pub fn build_sun_scenario(
    field: Field,
    n: i64,
    kind: EmbeddingKind,
    window: i64,
) -> Result<SubgroupScenario> {
    if n < 3 {
        return Err(EngineError::InvalidInput(format!(
            "the subgroup scenario needs n >= 3 (SU(2) is not a proper block of SU({n}))"
        )));
    }
    let name = format!(
        "su2-in-su{n}{}",
        match kind {
            EmbeddingKind::Subgroup => "",
            EmbeddingKind::NullHomotopic => " (null-homotopic)",
        }
    );

    let subgroup = ManifoldModel::build(
        field,
        &ManifoldSpec {
            name: "su2".into(),
            dim: 3,
            lie_group: true,
            cohomology: RingPresentation::exterior(vec![("x3".into(), 3)]),
            point_class: None,
            fundamental_class: None,
        },
    )?;
    let g_pres = RingPresentation::exterior(
        (2..=n)
            .map(|j| (format!("x{}", 2 * j - 1), 2 * j - 1))
            .collect(),
    );
    let group = ManifoldModel::build(
        field,
        &ManifoldSpec {
            name: format!("su{n}"),
            dim: n * n - 1,
            lie_group: true,
            cohomology: g_pres.clone(),
            point_class: None,
            fundamental_class: None,
        },
    )?;

    let kcoh = &subgroup.cohomology().space;
    let x3_image = GradedElement::basis(kcoh, kcoh.index_of("x3")?);
    let images: Vec<(String, GradedElement)> = (2..=n)
        .map(|j| {
            let gen = format!("x{}", 2 * j - 1);
            let img = match kind {
                EmbeddingKind::Subgroup if j == 2 => x3_image.clone(),
                _ => GradedElement::zero(kcoh),
            };
            (gen, img)
        })
        .collect();
    let inclusion = Arc::new(ManifoldMap::from_generator_images(
        format!("su2->su{n}"),
        &subgroup,
        &group,
        &images,
        &g_pres,
    )?);

    let omega = LoopSpaceModel::build(
        format!("omega-su{n}"),
        field,
        &RingPresentation::polynomial(
            (1..n).map(|j| (format!("b{}", 2 * j), 2 * j)).collect(),
            window,
        ),
        true,
    )?;
    let free_loop = FreeLoopModel::lie_group(format!("lambda-su{n}"), &group, &omega)?;

    let khom = subgroup.homology();
    let pke = tensor_space_trunc(
        format!("{name}.PKe"),
        &[khom.clone(), omega.space().clone()],
        Some(window + 3),
    )?;
    let pek = tensor_space_trunc(
        format!("{name}.PeK"),
        &[khom.clone(), omega.space().clone()],
        Some(window + 3),
    )?;
    let total = tensor_space_trunc(
        format!("{name}.total"),
        &[khom.clone(), pek.space().clone()],
        Some(window + 6),
    )?;

    // The odd homology of ΩG vanishes, so H_3(P_{eK}G) is spanned by
    // [K]⊗[ω₀] alone; the undetermined part of ι_*𝒮 is one coefficient.
    if pek.space().dim_in_degree(3) != 1 {
        return Err(EngineError::Validation(format!(
            "scenario '{name}': H_3 of the endpoint path space should be one-dimensional"
        )));
    }

    let e_k = subgroup.point_index();
    let fund_k = subgroup.fundamental_index();
    let unit_om = omega.ring().unit_index;

    let sigma_degree = n * n - 4;
    let sigma_candidates = group.homology().indices_in_degree(sigma_degree);
    let [sigma_prime] = sigma_candidates.as_slice() else {
        return Err(EngineError::Validation(format!(
            "scenario '{name}': expected a unique monomial in degree {sigma_degree}, found {}",
            sigma_candidates.len()
        )));
    };
    let lambda = free_loop
        .tensor_structure()
        .expect("a Lie-group free loop model is a tensor product");
    let sigma = GradedElement::basis(free_loop.space(), lambda.combine(&[*sigma_prime, unit_om])?);

    let s_class = GradedElement::basis(pke.space(), pke.combine(&[fund_k, unit_om])?);
    let x_endpoint = GradedElement::basis(khom, fund_k);
    let y_endpoint = GradedElement::basis(khom, e_k);
    let omega0_pek = pek.combine(&[e_k, unit_om])?;
    let y_path = GradedElement::basis(pek.space(), omega0_pek);

    let mut iota_base = GradedElement::zero(total.space());
    iota_base.add_term(total.combine(&[fund_k, omega0_pek])?, field.one());
    let mut iota_dir = GradedElement::zero(total.space());
    iota_dir.add_term(
        total.combine(&[e_k, pek.combine(&[fund_k, unit_om])?])?,
        field.one(),
    );
    let c = field.zero();
    let iota_s = iota_base.add(&iota_dir.scale(&c))?;

    // concat_*: the constant path class concatenates as the identity
    // (landing in the [e] slice of the total space), and the 𝒮 row is
    // pinned to ι_*𝒮. Nothing else is known.
    let mut concat = BilinearTable::new(
        format!("{name}.concat"),
        pke.space(),
        pek.space(),
        total.space(),
        0,
        Completeness::Partial,
        Some(window + 6),
    );
    let omega0_pke = pke.combine(&[e_k, unit_om])?;
    for y in 0..pek.space().dim() {
        let mut v = GradedElement::zero(total.space());
        v.add_term(total.combine(&[e_k, y])?, field.one());
        concat.insert(omega0_pke, y, v)?;
    }
    concat.insert(pke.combine(&[fund_k, unit_om])?, omega0_pek, iota_s.clone())?;

    // φ_*: only the unit of K is known to act, as the identity.
    let mut phi = BilinearTable::new(
        format!("{name}.phi"),
        khom,
        total.space(),
        total.space(),
        0,
        Completeness::Partial,
        Some(window + 6),
    );
    for z in 0..total.space().dim() {
        phi.insert(e_k, z, GradedElement::basis(total.space(), z))?;
    }

    // ▷: only the constant loop is known to act, as the identity.
    let mut omega_act = BilinearTable::new(
        format!("{name}.loop-action"),
        omega.space(),
        pek.space(),
        pek.space(),
        0,
        Completeness::Partial,
        Some(window + 3),
    );
    for y in 0..pek.space().dim() {
        omega_act.insert(unit_om, y, GradedElement::basis(pek.space(), y))?;
    }

    let k_intersection = subgroup.intersection_table().clone();

    Ok(SubgroupScenario {
        name,
        kind,
        window,
        group,
        subgroup,
        inclusion,
        omega,
        free_loop,
        pke,
        pek,
        total,
        sigma,
        s_class,
        x_endpoint,
        y_endpoint,
        y_path,
        iota_base,
        iota_dir,
        c,
        iota_s,
        concat,
        phi,
        omega_act,
        k_intersection,
    })
}

impl SubgroupScenario {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn group(&self) -> &Arc<ManifoldModel> {
        &self.group
    }

    pub fn subgroup(&self) -> &Arc<ManifoldModel> {
        &self.subgroup
    }

    pub fn free_loop(&self) -> &Arc<FreeLoopModel> {
        &self.free_loop
    }

    /// H(P_K G) = H(K) ⊗ H(P_{eK}G).
    pub fn total(&self) -> &TensorSpace {
        &self.total
    }

    /// Σ = Σ′ ⊗ [ω₀] in the free loop model of G.
    pub fn sigma(&self) -> &GradedElement {
        &self.sigma
    }

    /// 𝒮 ∈ H_3(P_{Ke}G), the class over the fundamental class of K.
    pub fn s_class(&self) -> &GradedElement {
        &self.s_class
    }

    /// ι_*𝒮 at the current value of c.
    pub fn iota_s(&self) -> &GradedElement {
        &self.iota_s
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    /// The same scenario with the undetermined coefficient set to `c`.
    /// Injected faults survive: only ι_*𝒮 and its concat row change.
    pub fn with_c(&self, c: Scalar) -> Result<SubgroupScenario> {
        let mut out = self.clone();
        out.iota_s = out.iota_base.add(&out.iota_dir.scale(&c))?;
        out.c = c;
        let e_k = out.subgroup.point_index();
        let fund_k = out.subgroup.fundamental_index();
        let unit_om = out.omega.ring().unit_index;
        out.concat.insert_raw(
            out.pke.combine(&[fund_k, unit_om])?,
            out.pek.combine(&[e_k, unit_om])?,
            out.iota_s.clone(),
        );
        Ok(out)
    }

    /// Y = [e] ⊗ [ω₀], the degree-0 class of the total space.
    pub fn y_class(&self) -> Result<GradedElement> {
        self.embed(&self.y_endpoint, &self.y_path)
    }

    /// X ∧ Y via the product formula.
    pub fn x_product_y(&self) -> Result<GradedElement> {
        self.path_product(
            &self.x_endpoint,
            &self.s_class,
            &self.y_endpoint,
            &self.y_path,
        )
    }

    /// b ⊗ Y′ as an element of the total space.
    pub fn embed(&self, b: &GradedElement, yp: &GradedElement) -> Result<GradedElement> {
        let mut out = GradedElement::zero(self.total.space());
        for (ib, cb) in b.terms() {
            for (iy, cy) in yp.terms() {
                out.add_term(self.total.combine(&[ib, iy])?, cb.mul(cy));
            }
        }
        Ok(out)
    }

    /// Perturb one structure constant of the private intersection table.
    /// Downstream checks are expected to notice; see the fault-injection
    /// tests and the c-independence line of the counterexample report.
    pub fn inject_intersection_fault(&mut self, left: usize, right: usize, value: GradedElement) {
        self.k_intersection.insert_raw(left, right, value);
    }

    /// (a ⊗ X′) ∧ (b ⊗ Y′) = φ_*((a ∩ b) ⊗ concat_*(X′ ⊗ Y′)).
    ///
    /// A vanishing intersection a ∩ b short-circuits to zero before any
    /// table lookup, so only genuinely contributing terms can raise an
    /// insufficient-data error.
    pub fn path_product(
        &self,
        a: &GradedElement,
        xp: &GradedElement,
        b: &GradedElement,
        yp: &GradedElement,
    ) -> Result<GradedElement> {
        self.expect(self.subgroup.homology(), a, "left endpoint class")?;
        self.expect(self.pke.space(), xp, "left path class")?;
        self.expect(self.subgroup.homology(), b, "right endpoint class")?;
        self.expect(self.pek.space(), yp, "right path class")?;
        let mut out = GradedElement::zero(self.total.space());
        for (ib, cb) in b.terms() {
            let inter = self
                .k_intersection
                .apply(a, &GradedElement::basis(self.subgroup.homology(), ib))?;
            if inter.is_zero() {
                continue;
            }
            for (ix, cx) in xp.terms() {
                for (iy, cy) in yp.terms() {
                    let con = self.concat.apply_basis(ix, iy)?;
                    let coeff = cb.mul(cx).mul(cy);
                    for (iv, cv) in inter.terms() {
                        for (ic, cc) in con.terms() {
                            let moved = self.phi.apply_basis(iv, ic)?;
                            let c2 = coeff.mul(cv).mul(cc);
                            for (im, cm) in moved.terms() {
                                out.add_term(im, c2.mul(cm));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Bilinear extension of the product against a total-space class in
    /// endpoint form (used for X ∧ (Σ·Y), whose right factor is computed,
    /// not given in factored form).
    pub fn path_product_total(
        &self,
        a: &GradedElement,
        xp: &GradedElement,
        z: &GradedElement,
    ) -> Result<GradedElement> {
        self.expect(self.total.space(), z, "right total class")?;
        let mut out = GradedElement::zero(self.total.space());
        for (iz, cz) in z.terms() {
            let &[b, y] = self.total.split(iz) else {
                unreachable!("total space is a pair tensor")
            };
            let part = self.path_product(
                a,
                xp,
                &GradedElement::basis(self.subgroup.homology(), b),
                &GradedElement::basis(self.pek.space(), y),
            )?;
            out = out.add(&part.scale(cz))?;
        }
        Ok(out)
    }

    /// A · Z for a free loop class A = Σ α⊗u and a total class
    /// Z = Σ b⊗x:  (-1)^{|u|(k+|b|)} (i_!(α) ∩ b) ⊗ (u ▷ x).
    pub fn module_action(&self, cap_a: &GradedElement, z: &GradedElement) -> Result<GradedElement> {
        self.expect(self.free_loop.space(), cap_a, "free loop class")?;
        self.expect(self.total.space(), z, "total class")?;
        let field = self.subgroup.field();
        let lambda = self
            .free_loop
            .tensor_structure()
            .expect("a Lie-group free loop model is a tensor product");
        let khom = self.subgroup.homology();
        let k = self.subgroup.dim();
        let mut out = GradedElement::zero(self.total.space());
        for (ia, ca) in cap_a.terms() {
            let &[alpha, u] = lambda.split(ia) else {
                unreachable!("Lie-group free loop space is a pair tensor")
            };
            let shriek = self
                .inclusion
                .gysin(&GradedElement::basis(self.group.homology(), alpha))?;
            if shriek.is_zero() {
                continue;
            }
            let du = self.omega.space().degree_of(u);
            for (iz, cz) in z.terms() {
                let &[b, x] = self.total.split(iz) else {
                    unreachable!("total space is a pair tensor")
                };
                let inter = self
                    .k_intersection
                    .apply(&shriek, &GradedElement::basis(khom, b))?;
                if inter.is_zero() {
                    continue;
                }
                let acted = self.omega_act.apply_basis(u, x)?;
                let coeff = ca.mul(cz).mul(&field.sign(du * (k + khom.degree_of(b))));
                for (iv, cv) in inter.terms() {
                    for (iw, cw) in acted.terms() {
                        out.add_term(self.total.combine(&[iv, iw])?, coeff.mul(cv).mul(cw));
                    }
                }
            }
        }
        Ok(out)
    }

    fn expect(&self, space: &Arc<GradedSpace>, e: &GradedElement, what: &str) -> Result<()> {
        if !spaces_match(space, e.space()) {
            return Err(EngineError::SpaceMismatch {
                expected: format!("{} ({what})", space.name()),
                got: e.space().name().to_string(),
            });
        }
        Ok(())
    }
}

/// Check the four relations that defeat the algebra structure, each at
/// c = 0 and c = 1:
///
/// 1. X∧Y = ±ι_*𝒮
/// 2. Σ·(ι_*𝒮) = ±Y ≠ 0
/// 3. Σ·Y = 0
/// 4. Σ·(X∧Y) ≠ 0  while  X∧(Σ·Y) = 0
///
/// plus a final line asserting that the values of 2–4 do not depend on
/// the undetermined coefficient c. Nonvanishing is always tested as
/// "≠ 0", never as a particular sign.
pub fn verify_counterexample(scenario: &SubgroupScenario) -> Result<Report> {
    if scenario.kind() != EmbeddingKind::Subgroup {
        return Err(EngineError::Validation(format!(
            "scenario '{}' does not model a genuine subgroup; the counterexample \
             relations are about the subgroup embedding",
            scenario.name()
        )));
    }
    let field = scenario.subgroup.field();
    let mut report = Report::new(
        format!("{}: path product vs. loop action", scenario.name()),
        Some(scenario.window()),
    );

    struct Evaluation {
        c: &'static str,
        xy: GradedElement,
        sigma_iota: GradedElement,
        sigma_y: GradedElement,
        sigma_xy: GradedElement,
        x_sigma_y: GradedElement,
        iota: GradedElement,
        y: GradedElement,
    }
    let mut evals = Vec::new();
    for (label, value) in [("0", field.zero()), ("1", field.one())] {
        let s = scenario.with_c(value)?;
        let y = s.y_class()?;
        let xy = s.x_product_y()?;
        let sigma_y = s.module_action(&s.sigma, &y)?;
        evals.push(Evaluation {
            c: label,
            sigma_iota: s.module_action(&s.sigma, &s.iota_s)?,
            sigma_xy: s.module_action(&s.sigma, &xy)?,
            x_sigma_y: s.path_product_total(&s.x_endpoint, &s.s_class, &sigma_y)?,
            iota: s.iota_s.clone(),
            xy,
            sigma_y,
            y,
        })
    }

    let mut relation = |name: &str, ok: &dyn Fn(&Evaluation) -> (bool, String)| {
        let mut verdicts = Vec::new();
        for e in &evals {
            let (holds, detail) = ok(e);
            verdicts.push((e.c, holds, detail));
        }
        let all = verdicts.iter().all(|(_, h, _)| *h);
        let detail = verdicts
            .iter()
            .map(|(c, _, d)| format!("c={c}: {d}"))
            .collect::<Vec<_>>()
            .join("; ");
        report.verdict(name, all, detail);
    };

    relation("X∧Y = ±ι_*𝒮", &|e| {
        let plus = e.xy == e.iota;
        let minus = e.xy == e.iota.neg();
        (
            plus || minus,
            if plus {
                "X∧Y = +ι_*𝒮".to_string()
            } else if minus {
                "X∧Y = -ι_*𝒮".to_string()
            } else {
                format!("X∧Y = {}", e.xy)
            },
        )
    });
    relation("Σ·(ι_*𝒮) = ±Y ≠ 0", &|e| {
        let matches_y = e.sigma_iota == e.y || e.sigma_iota == e.y.neg();
        (
            matches_y && !e.sigma_iota.is_zero(),
            format!("Σ·(ι_*𝒮) = {}", e.sigma_iota),
        )
    });
    relation("Σ·Y = 0", &|e| {
        (e.sigma_y.is_zero(), format!("Σ·Y = {}", e.sigma_y))
    });
    relation("Σ·(X∧Y) ≠ 0", &|e| {
        (!e.sigma_xy.is_zero(), format!("Σ·(X∧Y) = {}", e.sigma_xy))
    });
    relation("X∧(Σ·Y) = 0", &|e| {
        (e.x_sigma_y.is_zero(), format!("X∧(Σ·Y) = {}", e.x_sigma_y))
    });

    let projections: [(&str, fn(&Evaluation) -> &GradedElement); 4] = [
        ("Σ·(ι_*𝒮)", |e| &e.sigma_iota),
        ("Σ·Y", |e| &e.sigma_y),
        ("Σ·(X∧Y)", |e| &e.sigma_xy),
        ("X∧(Σ·Y)", |e| &e.x_sigma_y),
    ];
    let dependent: Vec<&str> = projections
        .iter()
        .filter(|(_, get)| get(&evals[0]) != get(&evals[1]))
        .map(|(name, _)| *name)
        .collect();
    report.verdict(
        "c_independence",
        dependent.is_empty(),
        if dependent.is_empty() {
            "all action values agree at c = 0 and c = 1".to_string()
        } else {
            format!("value depends on c: {}", dependent.join(", "))
        },
    );

    Ok(report)
}

/// Compare the subgroup and null-homotopic embeddings of SU(2) in SU(n)
/// as modules over the free loop homology: graded dimensions agree, but
/// Σ annihilates everything in the null-homotopic model and not in the
/// subgroup one — and a module isomorphism preserves annihilators.
pub fn distinguish_module_structures(field: Field, n: i64, window: i64) -> Result<Report> {
    let sub = build_sun_scenario(field, n, EmbeddingKind::Subgroup, window)?;
    let null = build_sun_scenario(field, n, EmbeddingKind::NullHomotopic, window)?;
    let mut report = Report::new(
        format!("module structures on paths in SU({n}) with endpoints in SU(2)"),
        Some(window),
    );

    let dims_sub = sub.total().space().dims_up_to(window);
    let dims_null = null.total().space().dims_up_to(window);
    report.verdict(
        "graded_dimensions_agree",
        dims_sub == dims_null,
        format!("both models have dimensions {dims_sub:?}"),
    );

    let total = null.total().space();
    let annihilated = (|| -> Result<Option<String>> {
        for i in total.print_order() {
            if total.degree_of(i) > window {
                continue;
            }
            let z = GradedElement::basis(total, i);
            let az = null.module_action(&null.sigma, &z)?;
            if !az.is_zero() {
                return Ok(Some(format!(
                    "Σ·{} = {az} in the null-homotopic model",
                    total.symbol(i).name
                )));
            }
        }
        Ok(None)
    })();
    match annihilated {
        Ok(None) => report.pass(
            "sigma_annihilates_null_model",
            format!(
                "Σ·z = 0 for all {} basis classes (wrong-way image of Σ′ vanishes)",
                total.dim()
            ),
        ),
        Ok(Some(w)) => report.fail("sigma_annihilates_null_model", w),
        Err(e) => report.fail(
            "sigma_annihilates_null_model",
            format!("internal error: {e}"),
        ),
    }

    let witness = sub.with_c(field.zero())?;
    match witness.module_action(&witness.sigma, &witness.iota_s) {
        Ok(v) if !v.is_zero() => report.pass(
            "sigma_acts_nontrivially_on_subgroup_model",
            format!("Σ·(ι_*𝒮) = {v} ≠ 0"),
        ),
        Ok(_) => report.fail("sigma_acts_nontrivially_on_subgroup_model", "Σ·(ι_*𝒮) = 0"),
        Err(e) => report.fail(
            "sigma_acts_nontrivially_on_subgroup_model",
            format!("internal error: {e}"),
        ),
    }

    report.info(
        "conclusion",
        "a module isomorphism preserves the annihilator of Σ, so the two \
         structures are not isomorphic even though every graded dimension matches",
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::CheckStatus;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn sigma_prime_is_the_unique_expected_monomial() {
        let s3 = build_sun_scenario(q(), 3, EmbeddingKind::Subgroup, 16).unwrap();
        let lam = s3.free_loop.tensor_structure().unwrap();
        let (idx, _) = s3.sigma().terms().next().unwrap();
        let t = lam.split(idx);
        assert_eq!(s3.group.homology().symbol(t[0]).name, "x5");
        assert_eq!(s3.sigma().degree().unwrap(), Some(5));

        let s4 = build_sun_scenario(q(), 4, EmbeddingKind::Subgroup, 16).unwrap();
        let lam = s4.free_loop.tensor_structure().unwrap();
        let (idx, _) = s4.sigma().terms().next().unwrap();
        let t = lam.split(idx);
        assert_eq!(s4.group.homology().symbol(t[0]).name, "x5*x7");
        assert_eq!(s4.sigma().degree().unwrap(), Some(12));
    }

    #[test]
    fn frozen_relation_values_at_nonzero_c() {
        let s = build_sun_scenario(q(), 3, EmbeddingKind::Subgroup, 16)
            .unwrap()
            .with_c(q().one())
            .unwrap();
        // the product convention is strictly unital, so X∧Y comes out as
        // +ι_*𝒮 on the nose ...
        assert_eq!(s.x_product_y().unwrap(), *s.iota_s());
        // ... and the c-term of Σ·(ι_*𝒮) dies on [e]∩[e] = 0, leaving
        // exactly -Y (i_! of the degree-5 monomial is -[e])
        let y = s.y_class().unwrap();
        assert_eq!(s.module_action(s.sigma(), s.iota_s()).unwrap(), y.neg());
        assert!(s.module_action(s.sigma(), &y).unwrap().is_zero());
    }

    #[test]
    fn unit_of_the_loop_ring_acts_as_identity() {
        let s = build_sun_scenario(q(), 3, EmbeddingKind::Subgroup, 12).unwrap();
        let unit = s.free_loop.loop_unit();
        let total = s.total().space();
        for i in total.print_order() {
            let z = GradedElement::basis(total, i);
            assert_eq!(s.module_action(&unit, &z).unwrap(), z);
        }
        // same in the null-homotopic model: i_![G] = [K] either way
        let nh = build_sun_scenario(q(), 3, EmbeddingKind::NullHomotopic, 12).unwrap();
        let unit = nh.free_loop.loop_unit();
        let z = GradedElement::basis(nh.total().space(), 0);
        assert_eq!(nh.module_action(&unit, &z).unwrap(), z);
    }

    #[test]
    fn counterexample_report_for_small_ranks() {
        for n in 3..=5 {
            let s = build_sun_scenario(q(), n, EmbeddingKind::Subgroup, 12).unwrap();
            let r = verify_counterexample(&s).unwrap();
            assert!(r.passed(), "n = {n}:\n{}", r.render_text());
            let text = r.render_text();
            assert!(text.contains("Σ·(X∧Y) ≠ 0"));
            assert!(text.contains("X∧(Σ·Y) = 0"));
        }
    }

    #[test]
    fn verify_requires_the_subgroup_kind() {
        let nh = build_sun_scenario(q(), 3, EmbeddingKind::NullHomotopic, 10).unwrap();
        assert!(verify_counterexample(&nh).is_err());
        assert!(build_sun_scenario(q(), 2, EmbeddingKind::Subgroup, 10).is_err());
    }

    #[test]
    fn unpinned_structure_constants_error_loudly() {
        let s = build_sun_scenario(q(), 3, EmbeddingKind::Subgroup, 12).unwrap();
        // X∧X needs φ of the fundamental class: not pinned
        let err = s
            .path_product(&s.x_endpoint, &s.s_class, &s.x_endpoint, &s.y_path)
            .unwrap_err();
        assert!(matches!(err, EngineError::InsufficientData(_)), "{err}");
        // concatenating 𝒮 with anything but the constant path: not pinned
        let om = s.omega.space();
        let b2 = GradedElement::basis(
            s.pek.space(),
            s.pek
                .combine(&[s.subgroup.point_index(), om.index_of("b2").unwrap()])
                .unwrap(),
        );
        let err = s
            .path_product(&s.x_endpoint, &s.s_class, &s.y_endpoint, &b2)
            .unwrap_err();
        assert!(matches!(err, EngineError::InsufficientData(_)), "{err}");
        // ... while a vanishing intersection short-circuits before the
        // missing-table error can fire
        assert!(s
            .path_product(&s.y_endpoint, &s.s_class, &s.y_endpoint, &b2)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn injected_intersection_fault_breaks_c_independence() {
        let mut s = build_sun_scenario(q(), 3, EmbeddingKind::Subgroup, 12).unwrap();
        let e = s.subgroup.point_index();
        let bad = GradedElement::basis(s.subgroup.homology(), e);
        s.inject_intersection_fault(e, e, bad);
        let r = verify_counterexample(&s).unwrap();
        assert!(!r.passed());
        let line = r.find("c_independence").unwrap();
        assert_eq!(line.status, CheckStatus::Fail);
        assert!(line.detail.contains("Σ·(ι_*𝒮)"), "{}", line.detail);
    }

    #[test]
    fn distinguishing_report_for_both_small_ranks() {
        for n in [3, 4] {
            let r = distinguish_module_structures(q(), n, 14).unwrap();
            assert!(r.passed(), "n = {n}:\n{}", r.render_text());
            assert_eq!(
                r.find("graded_dimensions_agree").unwrap().status,
                CheckStatus::Pass
            );
            assert_eq!(
                r.find("sigma_annihilates_null_model").unwrap().status,
                CheckStatus::Pass
            );
        }
    }

    #[test]
    fn graded_dimensions_match_the_product_model() {
        // the total space has the dimensions of H(K)⊗H(K)⊗H(Ω), the
        // model used for the null-homotopic splitting
        let s = build_sun_scenario(q(), 3, EmbeddingKind::Subgroup, 14).unwrap();
        let khom = s.subgroup.homology();
        let reference = tensor_space_trunc(
            "reference",
            &[khom.clone(), khom.clone(), s.omega.space().clone()],
            Some(20),
        )
        .unwrap();
        assert_eq!(
            s.total().space().dims_up_to(14),
            reference.space().dims_up_to(14)
        );
    }
}
