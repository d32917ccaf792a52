//! Entry-level check dispatch: given a catalog entry name, run the
//! validation suite appropriate to its kind and return the reports.
//! The CLI `check` subcommand and the C API both route through here.

use std::sync::Arc;

use crate::catalog::{Catalog, EntryKind, ScenarioModel};
use crate::error::{EngineError, Result};
use crate::graded::GradedElement;
use crate::liegroup::{verify_counterexample, EmbeddingKind};
use crate::manifold::ManifoldMap;
use crate::report::Report;
use crate::stringtop::{
    check_algebra_over_loops, check_augmentation, check_module, check_path_ring, check_ring,
};

/// Run every check that applies to the named entry. Manifolds, loop
/// spaces and free-loop models get the ring-axiom suite for their
/// product; maps get the pullback/wrong-way suite; path-pair scenarios
/// get the full product/augmentation/module/algebra battery; subgroup
/// scenarios get the counterexample relations.
pub fn run_entry_checks(catalog: &Catalog, model: &str, window: i64) -> Result<Vec<Report>> {
    let kind = catalog.kind_of(model).ok_or_else(|| {
        EngineError::Catalog(format!(
            "catalog '{}' has no entry named '{model}'",
            catalog.name()
        ))
    })?;
    Ok(match kind {
        EntryKind::Manifold => {
            let m = catalog.manifold(model)?;
            vec![check_ring(
                format!("intersection ring of {}", m.name()),
                window,
                m.homology(),
                &m.fundamental_class(),
                -m.dim(),
                |u, v| m.intersection_product(u, v),
            )]
        }
        EntryKind::LoopSpace => {
            let l = catalog.loop_space(model)?;
            vec![check_ring(
                format!("Pontryagin ring of {}", l.name()),
                window,
                l.space(),
                &l.unit(),
                0,
                |u, v| l.pontryagin(u, v),
            )]
        }
        EntryKind::FreeLoop => {
            let f = catalog.free_loop(model)?;
            vec![check_ring(
                format!("loop product on {}", f.name()),
                window,
                f.space(),
                &f.loop_unit(),
                -f.dim_shift(),
                |u, v| f.loop_product(u, v),
            )]
        }
        EntryKind::Map => {
            let map = catalog.map(model)?;
            vec![check_map(map, window)]
        }
        EntryKind::Scenario => match catalog.scenario(model)? {
            ScenarioModel::PathPair(m) => vec![
                check_path_ring(m, window),
                check_augmentation(m, window),
                check_module(m, window),
                check_algebra_over_loops(m, window),
            ],
            ScenarioModel::Counterexample(s) => match s.kind() {
                EmbeddingKind::Subgroup => vec![verify_counterexample(s)?],
                EmbeddingKind::NullHomotopic => {
                    return Err(EngineError::InvalidInput(format!(
                        "'{model}' models a null-homotopic embedding; the counterexample \
                         relations need the subgroup kind — use `distinguish` to compare \
                         the two module structures"
                    )));
                }
            },
        },
    })
}

/// Re-verify the ring-homomorphism property of a pullback on every basis
/// pair, and check the wrong-way map's degree bookkeeping on the basis.
pub fn check_map(map: &Arc<ManifoldMap>, window: i64) -> Report {
    let mut report = Report::new(
        format!(
            "{}: {} -> {}",
            map.name(),
            map.source().name(),
            map.target().name()
        ),
        Some(window),
    );
    let tc = &map.target().cohomology().space;
    let multiplicative = (|| -> Result<Option<String>> {
        for i in 0..tc.dim() {
            for j in 0..tc.dim() {
                let x = GradedElement::basis(tc, i);
                let y = GradedElement::basis(tc, j);
                let cup = map.target().cohomology().mul(&x, &y)?;
                let lhs = map.pullback_of(&cup)?;
                let rhs = map
                    .source()
                    .cohomology()
                    .mul(&map.pullback_of(&x)?, &map.pullback_of(&y)?)?;
                if lhs != rhs {
                    return Ok(Some(format!(
                        "pullback breaks multiplicativity on ({}, {}): got {lhs}, expected {rhs}",
                        tc.symbol(i).name,
                        tc.symbol(j).name
                    )));
                }
            }
        }
        Ok(None)
    })();
    match multiplicative {
        Ok(None) => report.pass(
            "pullback_is_ring_homomorphism",
            format!("verified on all {0}x{0} cohomology basis pairs", tc.dim()),
        ),
        Ok(Some(w)) => report.fail("pullback_is_ring_homomorphism", w),
        Err(e) => report.fail(
            "pullback_is_ring_homomorphism",
            format!("internal error: {e}"),
        ),
    }

    let codim = map.target().dim() - map.source().dim();
    let th = map.target().homology();
    let gysin_ok = (|| -> Result<Option<String>> {
        for i in 0..th.dim() {
            let image = map.gysin(&GradedElement::basis(th, i))?;
            if let Some(d) = image.degree()? {
                if d != th.degree_of(i) - codim {
                    return Ok(Some(format!(
                        "wrong-way image of {} has degree {d}, expected {}",
                        th.symbol(i).name,
                        th.degree_of(i) - codim
                    )));
                }
            }
        }
        Ok(None)
    })();
    match gysin_ok {
        Ok(None) => report.pass(
            "wrong_way_map_drops_codimension",
            format!(
                "degree shift -{codim} verified on all {} basis classes",
                th.dim()
            ),
        ),
        Ok(Some(w)) => report.fail("wrong_way_map_drops_codimension", w),
        Err(e) => report.fail(
            "wrong_way_map_drops_codimension",
            format!("internal error: {e}"),
        ),
    }
    report
}
