//! Command-line front end: catalog loading, command dispatch, and
//! deterministic report/table emission.
//!
//! Exit codes: 0 — all checks passed; 1 — a mathematical property check
//! failed; 2 — input or usage error (bad flags, unreadable catalog,
//! failed load-time validation, unknown names).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pathprod::catalog::{Catalog, EntryKind, ScenarioModel};
use pathprod::error::{EngineError, Result};
use pathprod::graded::{GradedElement, GradedSpace};
use pathprod::liegroup::{
    build_sun_scenario, distinguish_module_structures, verify_counterexample, EmbeddingKind,
};
use pathprod::linalg::Matrix;
use pathprod::presentation::ExpandedRing;
use pathprod::report::Report;
use pathprod::stringtop::{check_generators, PathSpaceModel};

#[derive(Parser)]
#[command(
    name = "pathprod",
    version,
    about = "Exact string-topology products on path and loop spaces",
    long_about = "Computes intersection, Pontryagin, path and loop products over exact \
                  coefficients, and checks the ring/module identities they satisfy. \
                  Models come from a JSON catalog (see --catalog); every result is \
                  quantified over a degree window."
)]
struct Cli {
    /// Catalog JSON path (default: $PATHPROD_CATALOG, else the built-in catalog)
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,

    /// Emit JSON instead of aligned text
    #[arg(long, global = true)]
    json: bool,

    /// Degree window: infinite models are expanded up to this total degree
    /// and all checks are quantified within it
    #[arg(long, global = true, default_value_t = 24)]
    max_degree: i64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a product's multiplication table on the basis
    Table {
        /// Which product to tabulate
        #[arg(long, value_enum)]
        op: TableOp,
        /// Manifold entry (for intersection and mu_beta)
        #[arg(long)]
        manifold: Option<String>,
        /// Loop-space entry (for pontryagin)
        #[arg(long = "loop")]
        loop_space: Option<String>,
        /// Free-loop entry (for loop_product)
        #[arg(long)]
        free_loop: Option<String>,
    },
    /// Run the validation suite appropriate to a catalog entry
    Check {
        /// Entry name (manifold, loop_space, free_loop, map or scenario)
        #[arg(long)]
        model: String,
    },
    /// Verify the SU(2) ⊂ SU(n) counterexample relations
    Counterexample {
        /// Rank parameter: the ambient group is SU(n), n ≥ 3
        #[arg(long)]
        n: i64,
    },
    /// Compare the subgroup and null-homotopic module structures on SU(n)
    Distinguish {
        /// Rank parameter: the ambient group is SU(n), n ≥ 3
        #[arg(long)]
        n: i64,
    },
    /// Compare the Poincaré series of two models degree by degree
    Series {
        /// First model name
        #[arg(long)]
        a: String,
        /// Second model name
        #[arg(long)]
        b: String,
    },
    /// Check that the endpoint classes generate a path model as a module
    Generators {
        /// A path-pair scenario entry
        #[arg(long)]
        model: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableOp {
    /// Intersection product on manifold homology
    #[value(name = "intersection")]
    Intersection,
    /// Endpoint product on H(N)⊗H(N)
    #[value(name = "mu_beta")]
    MuBeta,
    /// Concatenation product on based-loop homology
    #[value(name = "pontryagin")]
    Pontryagin,
    /// Loop product on free-loop homology
    #[value(name = "loop_product")]
    LoopProduct,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(cli: &Cli) -> Result<Catalog> {
    match cli
        .catalog
        .clone()
        .or_else(|| std::env::var_os("PATHPROD_CATALOG").map(PathBuf::from))
    {
        Some(path) => Catalog::load_path(&path, cli.max_degree),
        None => Catalog::builtin(cli.max_degree),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let catalog = load(cli)?;
    let window = cli.max_degree;
    match &cli.command {
        Command::Table {
            op,
            manifold,
            loop_space,
            free_loop,
        } => {
            let table = build_table(&catalog, *op, manifold, loop_space, free_loop, window)?;
            print_output(cli, &table.to_json(), &table.render_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { model } => {
            let reports = run_check(&catalog, model, window)?;
            emit_reports(cli, &reports)
        }
        Command::Counterexample { n } => {
            let scenario =
                build_sun_scenario(catalog.field(), *n, EmbeddingKind::Subgroup, window)?;
            let report = verify_counterexample(&scenario)?;
            emit_reports(cli, &[report])
        }
        Command::Distinguish { n } => {
            let report = distinguish_module_structures(catalog.field(), *n, window)?;
            emit_reports(cli, &[report])
        }
        Command::Series { a, b } => {
            let series = compare_series(&catalog, a, b, window)?;
            print_output(cli, &series.to_json(), &series.render_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Generators { model } => {
            let report = run_generators(&catalog, model, window)?;
            emit_reports(cli, &[report])
        }
    }
}

/// Write to stdout, tolerating a consumer that closes the pipe early
/// (e.g. `pathprod ... | head`); any other write failure is fatal.
fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write output: {e}");
            std::process::exit(2);
        }
    }
}

fn print_output(cli: &Cli, json: &serde_json::Value, text: &str) {
    if cli.json {
        let rendered = serde_json::to_string_pretty(json).expect("report serialization");
        write_stdout(&format!("{rendered}\n"));
    } else {
        write_stdout(text);
    }
}

fn emit_reports(cli: &Cli, reports: &[Report]) -> Result<ExitCode> {
    if cli.json {
        let values: Vec<serde_json::Value> = reports.iter().map(Report::to_json).collect();
        let payload = if values.len() == 1 {
            values.into_iter().next().expect("one report")
        } else {
            serde_json::Value::Array(values)
        };
        let rendered = serde_json::to_string_pretty(&payload).expect("report serialization");
        write_stdout(&format!("{rendered}\n"));
    } else {
        let texts: Vec<String> = reports.iter().map(Report::render_text).collect();
        write_stdout(&texts.join("\n"));
    }
    if reports.iter().all(Report::passed) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}

// ---------------------------------------------------------------------
// table
// ---------------------------------------------------------------------

struct ProductTable {
    subject: String,
    op: &'static str,
    window: i64,
    basis: Vec<String>,
    /// Row-major cell strings; window-limited cells are "-" (result
    /// beyond the window) or "?" (structure constant not carried by a
    /// partial model).
    cells: Vec<Vec<String>>,
}

impl ProductTable {
    fn render_text(&self) -> String {
        let mut out = format!(
            "== {} on {} (window <= {}) ==\n",
            self.op, self.subject, self.window
        );
        let head_width = self
            .basis
            .iter()
            .map(|b| b.chars().count())
            .max()
            .unwrap_or(1);
        let mut col_widths: Vec<usize> = self.basis.iter().map(|b| b.chars().count()).collect();
        for row in &self.cells {
            for (j, cell) in row.iter().enumerate() {
                col_widths[j] = col_widths[j].max(cell.chars().count());
            }
        }
        let pad = |s: &str, w: usize| {
            let len = s.chars().count();
            format!("{s}{}", " ".repeat(w.saturating_sub(len)))
        };
        out.push_str(&pad("", head_width));
        for (j, b) in self.basis.iter().enumerate() {
            out.push_str("  ");
            out.push_str(&pad(b, col_widths[j]));
        }
        out.push('\n');
        for (i, row) in self.cells.iter().enumerate() {
            out.push_str(&pad(&self.basis[i], head_width));
            for (j, cell) in row.iter().enumerate() {
                out.push_str("  ");
                out.push_str(&pad(cell, col_widths[j]));
            }
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "op": self.op,
            "subject": self.subject,
            "window": self.window,
            "basis": self.basis,
            "cells": self.cells,
        })
    }
}

fn build_table(
    catalog: &Catalog,
    op: TableOp,
    manifold: &Option<String>,
    loop_space: &Option<String>,
    free_loop: &Option<String>,
    window: i64,
) -> Result<ProductTable> {
    let need = |opt: &Option<String>, flag: &str, op_name: &str| -> Result<String> {
        opt.clone().ok_or_else(|| {
            EngineError::InvalidInput(format!("--op {op_name} needs --{flag} <name>"))
        })
    };
    match op {
        TableOp::Intersection => {
            let m = catalog.manifold(&need(manifold, "manifold", "intersection")?)?;
            tabulate(
                m.name().to_string(),
                "intersection product",
                window,
                m.homology(),
                |u, v| m.intersection_product(u, v),
            )
        }
        TableOp::MuBeta => {
            let m = catalog.manifold(&need(manifold, "manifold", "mu_beta")?)?;
            tabulate(
                m.name().to_string(),
                "endpoint product mu_beta",
                window,
                m.pair_space().space(),
                |u, v| m.mu_beta(u, v),
            )
        }
        TableOp::Pontryagin => {
            let l = catalog.loop_space(&need(loop_space, "loop", "pontryagin")?)?;
            tabulate(
                l.name().to_string(),
                "Pontryagin product",
                window,
                l.space(),
                |u, v| l.pontryagin(u, v),
            )
        }
        TableOp::LoopProduct => {
            let f = catalog.free_loop(&need(free_loop, "free-loop", "loop_product")?)?;
            tabulate(
                f.name().to_string(),
                "loop product",
                window,
                f.space(),
                |u, v| f.loop_product(u, v),
            )
        }
    }
}

fn tabulate(
    subject: String,
    op: &'static str,
    window: i64,
    space: &Arc<GradedSpace>,
    mul: impl Fn(&GradedElement, &GradedElement) -> Result<GradedElement>,
) -> Result<ProductTable> {
    let basis: Vec<usize> = space
        .print_order()
        .into_iter()
        .filter(|&i| space.degree_of(i) <= window)
        .collect();
    let mut cells = Vec::with_capacity(basis.len());
    for &i in &basis {
        let u = GradedElement::basis(space, i);
        let mut row = Vec::with_capacity(basis.len());
        for &j in &basis {
            let v = GradedElement::basis(space, j);
            row.push(match mul(&u, &v) {
                Ok(value) => value.to_string(),
                Err(EngineError::TruncationExceeded { .. }) => "-".to_string(),
                Err(EngineError::InsufficientData(_)) => "?".to_string(),
                Err(e) => return Err(e),
            });
        }
        cells.push(row);
    }
    Ok(ProductTable {
        subject,
        op,
        window,
        basis: basis
            .iter()
            .map(|&i| space.symbol(i).name.clone())
            .collect(),
        cells,
    })
}

// ---------------------------------------------------------------------
// check
// ---------------------------------------------------------------------

fn run_check(catalog: &Catalog, model: &str, window: i64) -> Result<Vec<Report>> {
    pathprod::checks::run_entry_checks(catalog, model, window)
}

// ---------------------------------------------------------------------
// series
// ---------------------------------------------------------------------

struct SeriesComparison {
    a: String,
    b: String,
    window: i64,
    dims_a: Vec<usize>,
    dims_b: Vec<usize>,
}

impl SeriesComparison {
    fn agree(&self) -> bool {
        self.dims_a == self.dims_b
    }

    fn render_text(&self) -> String {
        let mut out = format!("== Poincaré series (window <= {}) ==\n", self.window);
        let wa = self.a.chars().count().max(6);
        let wb = self.b.chars().count().max(6);
        out.push_str(&format!("degree  {:<wa$}  {:<wb$}\n", self.a, self.b));
        for d in 0..=self.window as usize {
            out.push_str(&format!(
                "{d:<6}  {:<wa$}  {:<wb$}\n",
                self.dims_a[d], self.dims_b[d]
            ));
        }
        out.push_str(&format!(
            "series agree within the window: {}\n",
            if self.agree() { "yes" } else { "no" }
        ));
        out
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "a": self.a,
            "b": self.b,
            "window": self.window,
            "dims_a": self.dims_a,
            "dims_b": self.dims_b,
            "agree": self.agree(),
        })
    }
}

fn resolve_space(catalog: &Catalog, name: &str) -> Result<Arc<GradedSpace>> {
    let kind = catalog.kind_of(name).ok_or_else(|| {
        EngineError::Catalog(format!(
            "catalog '{}' has no entry named '{name}'",
            catalog.name()
        ))
    })?;
    Ok(match kind {
        EntryKind::Manifold => Arc::clone(catalog.manifold(name)?.homology()),
        EntryKind::LoopSpace => Arc::clone(catalog.loop_space(name)?.space()),
        EntryKind::FreeLoop => Arc::clone(catalog.free_loop(name)?.space()),
        EntryKind::Scenario => match catalog.scenario(name)? {
            ScenarioModel::PathPair(m) => Arc::clone(m.space().space()),
            ScenarioModel::Counterexample(s) => Arc::clone(s.total().space()),
        },
        EntryKind::Map => {
            return Err(EngineError::InvalidInput(format!(
                "'{name}' is a map; series are compared between graded spaces"
            )));
        }
    })
}

fn compare_series(catalog: &Catalog, a: &str, b: &str, window: i64) -> Result<SeriesComparison> {
    let sa = resolve_space(catalog, a)?;
    let sb = resolve_space(catalog, b)?;
    Ok(SeriesComparison {
        a: a.to_string(),
        b: b.to_string(),
        window,
        dims_a: sa.dims_up_to(window),
        dims_b: sb.dims_up_to(window),
    })
}

// ---------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------

/// Positive-degree basis classes of `ring` (within the window) that are
/// not spanned by products of positive-degree classes.
fn indecomposables(ring: &ExpandedRing, window: i64) -> Result<Vec<usize>> {
    let space = &ring.space;
    let field = space.field();
    let top = ring
        .product
        .max_reliable_degree()
        .map_or(window, |w| w.min(window));
    let mut out = Vec::new();
    for d in 1..=top {
        let cols = space.indices_in_degree(d);
        if cols.is_empty() {
            continue;
        }
        let col_pos: BTreeMap<usize, usize> =
            cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut products: Vec<GradedElement> = Vec::new();
        for e in 1..d {
            for &i in &space.indices_in_degree(e) {
                for &j in &space.indices_in_degree(d - e) {
                    let p = ring.product.apply_basis(i, j)?;
                    if !p.is_zero() {
                        products.push(p);
                    }
                }
            }
        }
        let fill = |m: &mut Matrix, row: usize, e: &GradedElement| {
            for (i, c) in e.terms() {
                m.set(row, col_pos[&i], c.clone());
            }
        };
        let mut base = Matrix::zero(field, products.len(), cols.len());
        for (r, p) in products.iter().enumerate() {
            fill(&mut base, r, p);
        }
        let base_rank = base.rank();
        for &c in &cols {
            let mut m = Matrix::zero(field, products.len() + 1, cols.len());
            for (r, p) in products.iter().enumerate() {
                fill(&mut m, r, p);
            }
            fill(&mut m, products.len(), &GradedElement::basis(space, c));
            if m.rank() > base_rank {
                out.push(c);
            }
        }
    }
    Ok(out)
}

fn run_generators(catalog: &Catalog, model: &str, window: i64) -> Result<Report> {
    let ScenarioModel::PathPair(path) = catalog.scenario(model)? else {
        return Err(EngineError::InvalidInput(format!(
            "'{model}' is not a path-pair scenario; generation is checked for path models"
        )));
    };
    generators_report(path, window)
}

fn generators_report(path: &Arc<PathSpaceModel>, window: i64) -> Result<Report> {
    let based = path.free_loop().based();
    let unit_idx = based.ring().unit_index;
    let mut loop_classes = vec![unit_idx];
    loop_classes.extend(indecomposables(based.ring(), window)?);

    let set_names: Vec<String> = loop_classes
        .iter()
        .map(|&i| based.space().symbol(i).name.clone())
        .collect();
    let mut report = Report::new(
        format!("{}: module generation by endpoint classes", path.name()),
        Some(window),
    );
    report.info(
        "generating_set",
        format!(
            "classes a⊗b⊗l for endpoint classes a, b and l in {{{}}}",
            set_names.join(", ")
        ),
    );

    let full = check_generators(
        path,
        &path.endpoint_generators(&loop_classes)?,
        "the endpoint classes",
        window,
    );
    let spans = full
        .find("spans_every_degree")
        .expect("generation check emits its span line");
    report.line(
        spans.name.clone(),
        spans.status.clone(),
        spans.detail.clone(),
    );

    let unit_only = check_generators(
        path,
        &path.endpoint_generators(&[unit_idx])?,
        "the constant-loop endpoint classes",
        window,
    );
    report.info(
        "unit_only_subset",
        match unit_only.find("spans_every_degree") {
            Some(line) if line.status == pathprod::report::CheckStatus::Pass => {
                "the constant-loop classes alone already generate".to_string()
            }
            Some(line) => format!(
                "the constant-loop classes alone do not generate ({})",
                line.detail
            ),
            None => "internal error: generation check emitted no span line".to_string(),
        },
    );
    Ok(report)
}
