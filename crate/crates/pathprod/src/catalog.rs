//! JSON catalogs of named models.
//!
//! A catalog is a UTF-8 JSON file declaring manifolds, loop spaces, free
//! loop models, manifold maps and path-space scenarios by name. Loading
//! is strict: every entry is built (and therefore validated — ring
//! axioms, duality, ring-map property) immediately, in file order, and
//! the first failure aborts the load naming the offending entry and
//! axiom. Cross-references may only point at entries declared earlier in
//! the file; all names share one namespace.
//!
//! Scalars are written as strings (`"1"`, `"-2/3"`, a decimal residue
//! over a prime field) so values survive serialization bit-exactly.
//! Polynomial presentations may omit `truncation`, in which case they
//! inherit the window the catalog is loaded with.
//!
//! A built-in catalog (spheres, SU(2), SU(3), their loop spaces and the
//! standard scenarios) is embedded in the binary; see
//! [`Catalog::builtin`].

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{EngineError, Result};
use crate::graded::{GradedElement, GradedSpace};
use crate::liegroup::{build_sun_scenario, EmbeddingKind, SubgroupScenario};
use crate::loops::{DeclaredFreeLoopSpec, FreeLoopModel, LoopSpaceModel};
use crate::manifold::{ManifoldMap, ManifoldModel, ManifoldSpec};
use crate::presentation::{ExplicitData, RingPresentation};
use crate::scalar::{Field, Scalar};
use crate::stringtop::PathSpaceModel;

/// The embedded default catalog.
pub const BUILTIN_CATALOG_JSON: &str = include_str!("builtin_catalog.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    Manifold,
    LoopSpace,
    FreeLoop,
    Map,
    Scenario,
}

impl std::fmt::Display for EntryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EntryKind::Manifold => "manifold",
            EntryKind::LoopSpace => "loop_space",
            EntryKind::FreeLoop => "free_loop",
            EntryKind::Map => "map",
            EntryKind::Scenario => "scenario",
        })
    }
}

/// A fully built scenario entry.
#[derive(Clone)]
pub enum ScenarioModel {
    /// Paths in an ambient space with endpoints in a null-homotopic
    /// submanifold, modeled by a triple tensor space.
    PathPair(Arc<PathSpaceModel>),
    /// The SU(2) ⊂ SU(n) subgroup scenario.
    Counterexample(SubgroupScenario),
}

/// A validated, fully built set of named models sharing one coefficient
/// field and one degree window.
pub struct Catalog {
    name: String,
    field: Field,
    window: i64,
    order: Vec<(String, EntryKind)>,
    manifolds: BTreeMap<String, Arc<ManifoldModel>>,
    loop_spaces: BTreeMap<String, Arc<LoopSpaceModel>>,
    free_loops: BTreeMap<String, Arc<FreeLoopModel>>,
    maps: BTreeMap<String, Arc<ManifoldMap>>,
    scenarios: BTreeMap<String, ScenarioModel>,
}

impl std::fmt::Debug for Catalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Catalog")
            .field("name", &self.name)
            .field("field", &self.field)
            .field("window", &self.window)
            .field("entries", &self.order)
            .finish()
    }
}

// ---------------------------------------------------------------------
// JSON schema (scalars and names as strings; resolved during the build).
// ---------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    field: Option<FieldSpec>,
    #[serde(default)]
    entries: Vec<EntrySpec>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Named(String),
    Prime { prime: u64 },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum EntrySpec {
    Manifold {
        name: String,
        dim: i64,
        #[serde(default)]
        lie_group: bool,
        cohomology: PresentationSpec,
        #[serde(default)]
        point_class: Option<String>,
        #[serde(default)]
        fundamental_class: Option<String>,
    },
    LoopSpace {
        name: String,
        ring: PresentationSpec,
        #[serde(default)]
        even_homology: bool,
    },
    FreeLoop {
        name: String,
        based: String,
        #[serde(default)]
        group: Option<String>,
        #[serde(default)]
        declared: Option<DeclaredSpecJson>,
    },
    Map {
        name: String,
        source: String,
        target: String,
        generator_images: Vec<(String, Vec<(String, String)>)>,
    },
    Scenario {
        name: String,
        #[serde(default)]
        path_pair: Option<PathPairSpec>,
        #[serde(default)]
        sun_counterexample: Option<SunSpec>,
    },
}

impl EntrySpec {
    fn name(&self) -> &str {
        match self {
            EntrySpec::Manifold { name, .. }
            | EntrySpec::LoopSpace { name, .. }
            | EntrySpec::FreeLoop { name, .. }
            | EntrySpec::Map { name, .. }
            | EntrySpec::Scenario { name, .. } => name,
        }
    }

    fn kind(&self) -> EntryKind {
        match self {
            EntrySpec::Manifold { .. } => EntryKind::Manifold,
            EntrySpec::LoopSpace { .. } => EntryKind::LoopSpace,
            EntrySpec::FreeLoop { .. } => EntryKind::FreeLoop,
            EntrySpec::Map { .. } => EntryKind::Map,
            EntrySpec::Scenario { .. } => EntryKind::Scenario,
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum PresentationSpec {
    Exterior {
        generators: Vec<(String, i64)>,
    },
    Polynomial {
        generators: Vec<(String, i64)>,
        #[serde(default)]
        truncation: Option<i64>,
    },
    Explicit {
        basis: Vec<(String, i64)>,
        unit: String,
        #[serde(default)]
        products: Vec<(String, String, Vec<(String, String)>)>,
        #[serde(default)]
        truncation: Option<i64>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeclaredSpecJson {
    classes: Vec<(String, i64)>,
    unit: String,
    #[serde(default)]
    truncation: Option<i64>,
    dim_shift: i64,
    #[serde(default)]
    products: Vec<(String, String, Vec<(String, String)>)>,
    #[serde(default)]
    gysin_images: Vec<(String, Vec<(String, String)>)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PathPairSpec {
    submanifold: String,
    free_loop: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SunSpec {
    n: i64,
    embedding: String,
}

// ---------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------

impl Catalog {
    /// The embedded catalog, expanded against `window`.
    pub fn builtin(window: i64) -> Result<Catalog> {
        Catalog::from_json("builtin", BUILTIN_CATALOG_JSON, window)
    }

    pub fn load_path(path: &Path, window: i64) -> Result<Catalog> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            EngineError::Catalog(format!("cannot read catalog '{}': {e}", path.display()))
        })?;
        Catalog::from_json(&path.display().to_string(), &text, window)
    }

    pub fn from_json(name: &str, text: &str, window: i64) -> Result<Catalog> {
        let file: CatalogFile = serde_json::from_str(text)
            .map_err(|e| EngineError::Catalog(format!("catalog '{name}': {e}")))?;
        let field = match file.field {
            None => Field::Rationals,
            Some(FieldSpec::Named(s)) if s == "rationals" => Field::Rationals,
            Some(FieldSpec::Named(s)) => {
                return Err(EngineError::Catalog(format!(
                    "catalog '{name}': unknown field '{s}' (use \"rationals\" or {{\"prime\": p}})"
                )));
            }
            Some(FieldSpec::Prime { prime }) => Field::prime(prime)?,
        };
        let mut catalog = Catalog {
            name: name.to_string(),
            field,
            window,
            order: Vec::new(),
            manifolds: BTreeMap::new(),
            loop_spaces: BTreeMap::new(),
            free_loops: BTreeMap::new(),
            maps: BTreeMap::new(),
            scenarios: BTreeMap::new(),
        };
        for entry in &file.entries {
            let entry_name = entry.name().to_string();
            let kind = entry.kind();
            if catalog.order.iter().any(|(n, _)| *n == entry_name) {
                return Err(EngineError::Catalog(format!(
                    "catalog '{name}': duplicate entry name '{entry_name}'"
                )));
            }
            catalog
                .build_entry(entry)
                .map_err(|e| EngineError::Catalog(format!("entry '{entry_name}' ({kind}): {e}")))?;
            catalog.order.push((entry_name, kind));
        }
        Ok(catalog)
    }

    fn build_entry(&mut self, entry: &EntrySpec) -> Result<()> {
        match entry {
            EntrySpec::Manifold {
                name,
                dim,
                lie_group,
                cohomology,
                point_class,
                fundamental_class,
            } => {
                let spec = ManifoldSpec {
                    name: name.clone(),
                    dim: *dim,
                    lie_group: *lie_group,
                    cohomology: self.presentation(cohomology)?,
                    point_class: point_class.clone(),
                    fundamental_class: fundamental_class.clone(),
                };
                let model = ManifoldModel::build(self.field, &spec)?;
                self.manifolds.insert(name.clone(), model);
            }
            EntrySpec::LoopSpace {
                name,
                ring,
                even_homology,
            } => {
                let model = LoopSpaceModel::build(
                    name.clone(),
                    self.field,
                    &self.presentation(ring)?,
                    *even_homology,
                )?;
                self.loop_spaces.insert(name.clone(), model);
            }
            EntrySpec::FreeLoop {
                name,
                based,
                group,
                declared,
            } => {
                let based = self.loop_space(based)?.clone();
                let model = match (group, declared) {
                    (Some(group), None) => {
                        FreeLoopModel::lie_group(name.clone(), self.manifold(group)?, &based)?
                    }
                    (None, Some(decl)) => {
                        let spec = DeclaredFreeLoopSpec {
                            classes: decl.classes.clone(),
                            unit: decl.unit.clone(),
                            truncation: decl.truncation,
                            dim_shift: decl.dim_shift,
                            products: self.scalar_rows(&decl.products)?,
                            gysin_images: decl
                                .gysin_images
                                .iter()
                                .map(|(class, image)| {
                                    Ok((class.clone(), self.scalar_pairs(image)?))
                                })
                                .collect::<Result<Vec<_>>>()?,
                        };
                        FreeLoopModel::declared(name.clone(), &based, &spec)?
                    }
                    _ => {
                        return Err(EngineError::Catalog(
                            "a free_loop entry needs exactly one of 'group' (Lie-group \
                             tensor model) or 'declared' (explicit class table)"
                                .into(),
                        ));
                    }
                };
                self.free_loops.insert(name.clone(), model);
            }
            EntrySpec::Map {
                name,
                source,
                target,
                generator_images,
            } => {
                let source_model = self.manifold(source)?.clone();
                let target_model = self.manifold(target)?.clone();
                let coh = &source_model.cohomology().space;
                let images: Vec<(String, GradedElement)> = generator_images
                    .iter()
                    .map(|(generator, image)| Ok((generator.clone(), self.element(coh, image)?)))
                    .collect::<Result<Vec<_>>>()?;
                let map = ManifoldMap::from_generator_images(
                    name.clone(),
                    &source_model,
                    &target_model,
                    &images,
                    target_model.presentation(),
                )?;
                self.maps.insert(name.clone(), Arc::new(map));
            }
            EntrySpec::Scenario {
                name,
                path_pair,
                sun_counterexample,
            } => {
                let model = match (path_pair, sun_counterexample) {
                    (Some(pair), None) => ScenarioModel::PathPair(PathSpaceModel::new(
                        name.clone(),
                        self.manifold(&pair.submanifold)?,
                        self.free_loop(&pair.free_loop)?,
                    )?),
                    (None, Some(sun)) => {
                        let kind = match sun.embedding.as_str() {
                            "subgroup" => EmbeddingKind::Subgroup,
                            "null_homotopic" => EmbeddingKind::NullHomotopic,
                            other => {
                                return Err(EngineError::Catalog(format!(
                                    "unknown embedding '{other}' (use \"subgroup\" or \
                                     \"null_homotopic\")"
                                )));
                            }
                        };
                        ScenarioModel::Counterexample(build_sun_scenario(
                            self.field,
                            sun.n,
                            kind,
                            self.window,
                        )?)
                    }
                    _ => {
                        return Err(EngineError::Catalog(
                            "a scenario entry needs exactly one of 'path_pair' or \
                             'sun_counterexample'"
                                .into(),
                        ));
                    }
                };
                self.scenarios.insert(name.clone(), model);
            }
        }
        Ok(())
    }

    fn presentation(&self, spec: &PresentationSpec) -> Result<RingPresentation> {
        Ok(match spec {
            PresentationSpec::Exterior { generators } => {
                RingPresentation::exterior(generators.clone())
            }
            PresentationSpec::Polynomial {
                generators,
                truncation,
            } => {
                RingPresentation::polynomial(generators.clone(), truncation.unwrap_or(self.window))
            }
            PresentationSpec::Explicit {
                basis,
                unit,
                products,
                truncation,
            } => RingPresentation::explicit(
                ExplicitData {
                    basis: basis.clone(),
                    unit: unit.clone(),
                    products: self.scalar_rows(products)?,
                },
                *truncation,
            ),
        })
    }

    fn scalar_pairs(&self, pairs: &[(String, String)]) -> Result<Vec<(String, Scalar)>> {
        pairs
            .iter()
            .map(|(name, coeff)| Ok((name.clone(), self.field.parse(coeff)?)))
            .collect()
    }

    fn scalar_rows(
        &self,
        rows: &[(String, String, Vec<(String, String)>)],
    ) -> Result<Vec<(String, String, Vec<(String, Scalar)>)>> {
        rows.iter()
            .map(|(l, r, value)| Ok((l.clone(), r.clone(), self.scalar_pairs(value)?)))
            .collect()
    }

    fn element(
        &self,
        space: &Arc<GradedSpace>,
        pairs: &[(String, String)],
    ) -> Result<GradedElement> {
        let mut out = GradedElement::zero(space);
        for (name, coeff) in pairs {
            out.add_term(space.index_of(name)?, self.field.parse(coeff)?);
        }
        Ok(out)
    }

    // -----------------------------------------------------------------
    // Accessors
    // -----------------------------------------------------------------

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Entries in declaration order.
    pub fn entries(&self) -> &[(String, EntryKind)] {
        &self.order
    }

    pub fn kind_of(&self, name: &str) -> Option<EntryKind> {
        self.order.iter().find(|(n, _)| n == name).map(|(_, k)| *k)
    }

    pub fn manifold(&self, name: &str) -> Result<&Arc<ManifoldModel>> {
        self.manifolds
            .get(name)
            .ok_or_else(|| self.missing(EntryKind::Manifold, name))
    }

    pub fn loop_space(&self, name: &str) -> Result<&Arc<LoopSpaceModel>> {
        self.loop_spaces
            .get(name)
            .ok_or_else(|| self.missing(EntryKind::LoopSpace, name))
    }

    pub fn free_loop(&self, name: &str) -> Result<&Arc<FreeLoopModel>> {
        self.free_loops
            .get(name)
            .ok_or_else(|| self.missing(EntryKind::FreeLoop, name))
    }

    pub fn map(&self, name: &str) -> Result<&Arc<ManifoldMap>> {
        self.maps
            .get(name)
            .ok_or_else(|| self.missing(EntryKind::Map, name))
    }

    pub fn scenario(&self, name: &str) -> Result<&ScenarioModel> {
        self.scenarios
            .get(name)
            .ok_or_else(|| self.missing(EntryKind::Scenario, name))
    }

    fn missing(&self, kind: EntryKind, name: &str) -> EngineError {
        let available: Vec<&str> = self
            .order
            .iter()
            .filter(|(_, k)| *k == kind)
            .map(|(n, _)| n.as_str())
            .collect();
        EngineError::Catalog(format!(
            "catalog '{}' has no {kind} named '{name}'; available: [{}]{}",
            self.name,
            available.join(", "),
            match self.kind_of(name) {
                Some(other) => format!(" ('{name}' is a {other})"),
                None => String::new(),
            }
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_loads_clean() {
        let cat = Catalog::builtin(24).unwrap();
        assert_eq!(cat.field(), Field::Rationals);
        for name in ["pt", "s1", "s2", "s3", "s4", "s6", "su2", "su3"] {
            assert!(cat.manifold(name).is_ok(), "missing manifold {name}");
        }
        for name in ["omega-s2", "omega-s3", "omega-s4", "omega-su2", "omega-su3"] {
            assert!(cat.loop_space(name).is_ok(), "missing loop space {name}");
        }
        for name in [
            "lambda-s2",
            "lambda-s3",
            "lambda-s4",
            "lambda-s6",
            "lambda-su2",
            "lambda-su3",
        ] {
            assert!(cat.free_loop(name).is_ok(), "missing free loop {name}");
        }
        assert!(cat.map("su2-su3").is_ok());
        assert!(matches!(
            cat.scenario("s4-s3").unwrap(),
            ScenarioModel::PathPair(_)
        ));
        assert!(matches!(
            cat.scenario("su2-in-su3").unwrap(),
            ScenarioModel::Counterexample(_)
        ));
        assert_eq!(cat.kind_of("su3"), Some(EntryKind::Manifold));
        assert_eq!(cat.kind_of("nope"), None);
    }

    #[test]
    fn empty_catalogs_are_valid() {
        for text in ["{}", r#"{"entries": []}"#] {
            let cat = Catalog::from_json("empty", text, 10).unwrap();
            assert!(cat.entries().is_empty());
        }
    }

    #[test]
    fn parse_and_reference_errors_name_the_problem() {
        let err = Catalog::from_json("bad", "{ not json", 10).unwrap_err();
        assert!(matches!(err, EngineError::Catalog(_)), "{err}");

        // dangling reference
        let text = r#"{"entries": [
            {"kind": "free_loop", "name": "l", "based": "missing", "group": "also-missing"}
        ]}"#;
        let err = Catalog::from_json("bad", text, 10).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("entry 'l'"), "{msg}");
        assert!(msg.contains("missing"), "{msg}");

        // duplicate names share one namespace across kinds
        let text = r#"{"entries": [
            {"kind": "manifold", "name": "x", "dim": 0,
             "cohomology": {"kind": "exterior", "generators": []}},
            {"kind": "loop_space", "name": "x",
             "ring": {"kind": "polynomial", "generators": []}}
        ]}"#;
        let err = Catalog::from_json("bad", text, 10).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");

        // typos in field names are load errors, not silently ignored
        let text = r#"{"entries": [
            {"kind": "manifold", "name": "x", "dim": 0, "lie": true,
             "cohomology": {"kind": "exterior", "generators": []}}
        ]}"#;
        assert!(Catalog::from_json("bad", text, 10).is_err());
    }

    #[test]
    fn non_associative_explicit_table_is_rejected_naming_the_triple() {
        // e*e = f, f*e = g, e*f = 0: (e*e)*e = g but e*(e*e) = 0
        let text = r#"{"entries": [
            {"kind": "loop_space", "name": "broken",
             "ring": {"kind": "explicit",
                      "basis": [["1", 0], ["e", 2], ["f", 4], ["g", 6]],
                      "unit": "1",
                      "products": [
                        ["1", "1", [["1", "1"]]],
                        ["1", "e", [["e", "1"]]], ["e", "1", [["e", "1"]]],
                        ["1", "f", [["f", "1"]]], ["f", "1", [["f", "1"]]],
                        ["1", "g", [["g", "1"]]], ["g", "1", [["g", "1"]]],
                        ["e", "e", [["f", "1"]]],
                        ["f", "e", [["g", "1"]]]
                      ]}}
        ]}"#;
        let err = Catalog::from_json("bad", text, 10).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("associativity"), "{msg}");
        assert!(msg.contains("e, e, e"), "{msg}");
    }

    #[test]
    fn scalars_parse_exactly_and_bad_scalars_fail() {
        let text = r#"{"entries": [
            {"kind": "loop_space", "name": "om",
             "ring": {"kind": "polynomial", "generators": [["b", 2]]}},
            {"kind": "free_loop", "name": "lam", "based": "om",
             "declared": {
                "classes": [["[m]", 3], ["v", 5]],
                "unit": "[m]", "dim_shift": 3,
                "products": [["v", "v", []]],
                "gysin_images": [["v", [["b", "-2/3"]]]]
             }}
        ]}"#;
        let cat = Catalog::from_json("ok", text, 12).unwrap();
        let lam = cat.free_loop("lam").unwrap();
        let v = GradedElement::basis(lam.space(), lam.space().index_of("v").unwrap());
        let img = lam.gysin_to_based(&v).unwrap();
        let b = cat.loop_space("om").unwrap();
        assert_eq!(
            img.coefficient(b.space().index_of("b").unwrap()),
            Field::Rationals.parse("-2/3").unwrap()
        );

        let bad = text.replace("-2/3", "1/0");
        let err = Catalog::from_json("bad", &bad, 12).unwrap_err();
        assert!(err.to_string().contains("zero denominator"), "{err}");
    }

    #[test]
    fn prime_field_catalogs_work_and_odd_polynomial_over_f2_fails() {
        let text = r#"{"field": {"prime": 7}, "entries": [
            {"kind": "manifold", "name": "m", "dim": 3, "lie_group": true,
             "cohomology": {"kind": "exterior", "generators": [["x3", 3]]}}
        ]}"#;
        let cat = Catalog::from_json("f7", text, 10).unwrap();
        assert_eq!(cat.field(), Field::Prime(7));

        let text = r#"{"field": {"prime": 2}, "entries": [
            {"kind": "loop_space", "name": "om",
             "ring": {"kind": "polynomial", "generators": [["a1", 1]]}}
        ]}"#;
        let err = Catalog::from_json("f2", text, 10).unwrap_err();
        assert!(err.to_string().contains("not supported over F2"), "{err}");

        let err = Catalog::from_json("bad", r#"{"field": {"prime": 6}}"#, 10).unwrap_err();
        assert!(err.to_string().contains("not prime"), "{err}");
    }

    #[test]
    fn window_inheritance_for_polynomial_rings() {
        let text = r#"{"entries": [
            {"kind": "loop_space", "name": "om",
             "ring": {"kind": "polynomial", "generators": [["b", 2]]}}
        ]}"#;
        let cat = Catalog::from_json("w", text, 8).unwrap();
        let om = cat.loop_space("om").unwrap();
        // b^4 (degree 8) is in the window, b^5 is not
        assert!(om.space().index_of("b^4").is_ok());
        assert!(om.space().index_of("b^5").is_err());
    }

    #[test]
    fn scenario_entries_must_pick_exactly_one_model() {
        let text = r#"{"entries": [
            {"kind": "scenario", "name": "s"}
        ]}"#;
        let err = Catalog::from_json("bad", text, 10).unwrap_err();
        assert!(err.to_string().contains("exactly one"), "{err}");

        let text = r#"{"entries": [
            {"kind": "scenario", "name": "s",
             "sun_counterexample": {"n": 3, "embedding": "sideways"}}
        ]}"#;
        let err = Catalog::from_json("bad", text, 10).unwrap_err();
        assert!(err.to_string().contains("sideways"), "{err}");
    }
}
