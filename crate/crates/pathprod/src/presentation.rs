//! Ring presentations and their expansion into concrete bases with
//! structure-constant tables.
//!
//! Three kinds are supported:
//!
//! * `exterior` — free graded-commutative algebra on generators that
//!   square to zero (monomials are squarefree words);
//! * `polynomial` — monomial basis with products by exponent addition
//!   and no Koszul signs. With all generators in even degree this is the
//!   usual graded-commutative polynomial ring; a single odd generator
//!   gives the free strictly non-commutative one-generator algebra
//!   (needed for based loop spaces of even spheres), which is only
//!   meaningful away from characteristic 2;
//! * `explicit` — a full structure-constant table, validated for unit
//!   and associativity laws at expansion time.
//!
//! Truncated expansions carry their window as the product table's
//! reliable degree: products that would escape the window error out.

use std::sync::Arc;

use crate::bilinear::{BilinearTable, Completeness};
use crate::error::{EngineError, Result};
use crate::graded::{BasisSymbol, GradedElement, GradedSpace};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Exterior,
    Polynomial,
    Explicit,
}

#[derive(Clone, Debug)]
pub struct RingPresentation {
    pub kind: RingKind,
    pub generators: Vec<(String, i64)>,
    pub truncation: Option<i64>,
    pub explicit: Option<ExplicitData>,
}

/// Raw structure constants for an `explicit` presentation. Products not
/// listed are zero; the degree-0 basis must be exactly the unit.
#[derive(Clone, Debug)]
pub struct ExplicitData {
    pub basis: Vec<(String, i64)>,
    pub unit: String,
    pub products: Vec<(String, String, Vec<(String, Scalar)>)>,
}

impl RingPresentation {
    pub fn exterior(generators: Vec<(String, i64)>) -> RingPresentation {
        RingPresentation {
            kind: RingKind::Exterior,
            generators,
            truncation: None,
            explicit: None,
        }
    }

    pub fn polynomial(generators: Vec<(String, i64)>, truncation: i64) -> RingPresentation {
        RingPresentation {
            kind: RingKind::Polynomial,
            generators,
            truncation: Some(truncation),
            explicit: None,
        }
    }

    pub fn explicit(data: ExplicitData, truncation: Option<i64>) -> RingPresentation {
        RingPresentation {
            kind: RingKind::Explicit,
            generators: Vec::new(),
            truncation,
            explicit: Some(data),
        }
    }
}

/// A presentation expanded to a basis, a product table and a unit.
#[derive(Clone, Debug)]
pub struct ExpandedRing {
    pub space: Arc<GradedSpace>,
    pub product: BilinearTable,
    pub unit_index: usize,
}

impl ExpandedRing {
    pub fn unit(&self) -> GradedElement {
        GradedElement::basis(&self.space, self.unit_index)
    }

    pub fn mul(&self, u: &GradedElement, v: &GradedElement) -> Result<GradedElement> {
        self.product.apply(u, v)
    }

    /// Augmentation: the coefficient on the degree-zero unit monomial.
    pub fn augmentation(&self, x: &GradedElement) -> Scalar {
        x.coefficient(self.unit_index)
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }
}

/// Monomial bookkeeping shared by the exterior and polynomial expansions.
struct Monomial {
    exponents: Vec<u32>,
    degree: i64,
}

impl Monomial {
    fn name(&self, generators: &[(String, i64)]) -> String {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    generators[i].0.clone()
                } else {
                    format!("{}^{}", generators[i].0, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

pub fn expand_presentation(
    name: impl Into<String>,
    field: Field,
    pres: &RingPresentation,
) -> Result<ExpandedRing> {
    let name = name.into();
    match pres.kind {
        RingKind::Exterior => expand_monomial(&name, field, pres, true),
        RingKind::Polynomial => {
            if !pres.generators.is_empty() && pres.truncation.is_none() {
                return Err(EngineError::Validation(format!(
                    "ring '{name}': polynomial presentations need a finite truncation"
                )));
            }
            if field.characteristic() == 2 && pres.generators.iter().any(|&(_, d)| d % 2 == 1) {
                return Err(EngineError::Validation(format!(
                    "ring '{name}': odd polynomial generators are not supported over F2"
                )));
            }
            expand_monomial(&name, field, pres, false)
        }
        RingKind::Explicit => expand_explicit(&name, field, pres),
    }
}

fn expand_monomial(
    name: &str,
    field: Field,
    pres: &RingPresentation,
    exterior: bool,
) -> Result<ExpandedRing> {
    let gens = &pres.generators;
    for (g, d) in gens {
        if *d < 1 {
            return Err(EngineError::Validation(format!(
                "ring '{name}': generator '{g}' must have positive degree, got {d}"
            )));
        }
    }
    let trunc = pres.truncation;

    // Enumerate monomials within the window by depth-first search over
    // exponent vectors, then sort by (degree, exponents) for a stable
    // graded order.
    let mut monomials: Vec<Monomial> = Vec::new();
    let mut expo = vec![0u32; gens.len()];
    enumerate(gens, exterior, trunc, 0, 0, &mut expo, &mut monomials);
    monomials.sort_by(|a, b| (a.degree, &a.exponents).cmp(&(b.degree, &b.exponents)));

    let symbols: Vec<BasisSymbol> = monomials
        .iter()
        .map(|m| BasisSymbol::new(m.name(gens), m.degree))
        .collect();
    let space = GradedSpace::new(name, field, symbols, trunc)?;
    let unit_index = space.index_of("1")?;

    let mut table = BilinearTable::new(
        format!("{name}.product"),
        &space,
        &space,
        &space,
        0,
        Completeness::Total,
        trunc,
    );
    for (i, a) in monomials.iter().enumerate() {
        for (j, b) in monomials.iter().enumerate() {
            if let Some(t) = trunc {
                if a.degree + b.degree > t {
                    continue;
                }
            }
            let value = if exterior {
                exterior_product(field, gens, a, b)
            } else {
                Some((
                    a.exponents
                        .iter()
                        .zip(&b.exponents)
                        .map(|(&x, &y)| x + y)
                        .collect::<Vec<u32>>(),
                    field.one(),
                ))
            };
            let Some((exps, coeff)) = value else {
                continue;
            };
            let prod = Monomial {
                degree: a.degree + b.degree,
                exponents: exps,
            };
            let idx = space.index_of(&prod.name(gens))?;
            table.insert(i, j, GradedElement::basis(&space, idx).scale(&coeff))?;
        }
    }
    Ok(ExpandedRing {
        space,
        product: table,
        unit_index,
    })
}

fn enumerate(
    gens: &[(String, i64)],
    exterior: bool,
    trunc: Option<i64>,
    pos: usize,
    degree: i64,
    expo: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if pos == gens.len() {
        out.push(Monomial {
            exponents: expo.clone(),
            degree,
        });
        return;
    }
    let d = gens[pos].1;
    let max_e = if exterior {
        1
    } else {
        match trunc {
            Some(t) => ((t - degree) / d).max(0) as u32,
            None => 0,
        }
    };
    for e in 0..=max_e {
        let nd = degree + e as i64 * d;
        if let Some(t) = trunc {
            if nd > t {
                break;
            }
        }
        expo[pos] = e;
        enumerate(gens, exterior, trunc, pos + 1, nd, expo, out);
    }
    expo[pos] = 0;
}

/// Product of two squarefree monomials: `None` when a generator repeats,
/// otherwise the merged exponents with the Koszul sign of the shuffle.
fn exterior_product(
    field: Field,
    gens: &[(String, i64)],
    a: &Monomial,
    b: &Monomial,
) -> Option<(Vec<u32>, Scalar)> {
    let mut exps = Vec::with_capacity(gens.len());
    for (x, y) in a.exponents.iter().zip(&b.exponents) {
        if *x + *y > 1 {
            return None;
        }
        exps.push(x + y);
    }
    // Sign of sorting the concatenation (a-generators, b-generators):
    // each pair i in a, j in b with i > j transposes past each other.
    let mut exp_sum = 0i64;
    for (i, &xi) in a.exponents.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in b.exponents.iter().enumerate() {
            if yj == 0 || i <= j {
                continue;
            }
            exp_sum += gens[i].1 * gens[j].1;
        }
    }
    Some((exps, field.sign(exp_sum)))
}

fn expand_explicit(name: &str, field: Field, pres: &RingPresentation) -> Result<ExpandedRing> {
    let data = pres
        .explicit
        .as_ref()
        .ok_or_else(|| EngineError::Validation(format!("ring '{name}': missing explicit data")))?;
    let symbols: Vec<BasisSymbol> = data
        .basis
        .iter()
        .map(|(n, d)| BasisSymbol::new(n.clone(), *d))
        .collect();
    let space = GradedSpace::new(name, field, symbols, pres.truncation)?;
    let unit_index = space.index_of(&data.unit)?;
    if space.degree_of(unit_index) != 0 {
        return Err(EngineError::Validation(format!(
            "ring '{name}': unit '{}' must have degree 0",
            data.unit
        )));
    }
    if space.dim_in_degree(0) != 1 {
        return Err(EngineError::Validation(format!(
            "ring '{name}': degree 0 must be spanned by the unit alone"
        )));
    }

    let mut table = BilinearTable::new(
        format!("{name}.product"),
        &space,
        &space,
        &space,
        0,
        Completeness::Total,
        pres.truncation,
    );
    for (l, r, value) in &data.products {
        let i = space.index_of(l)?;
        let j = space.index_of(r)?;
        let mut v = GradedElement::zero(&space);
        for (sym, c) in value {
            v.add_term(space.index_of(sym)?, c.clone());
        }
        table.insert(i, j, v)?;
    }
    let ring = ExpandedRing {
        space,
        product: table,
        unit_index,
    };
    validate_ring_axioms(name, &ring)?;
    Ok(ring)
}

/// Unit laws and associativity on every basis triple whose intermediate
/// and final products stay inside the reliable window. Used for explicit
/// tables at load time.
pub fn validate_ring_axioms(name: &str, ring: &ExpandedRing) -> Result<()> {
    let space = &ring.space;
    let unit = ring.unit();
    for i in 0..space.dim() {
        let x = GradedElement::basis(space, i);
        let lu = ring.mul(&unit, &x)?;
        let ru = ring.mul(&x, &unit)?;
        if lu != x || ru != x {
            return Err(EngineError::Validation(format!(
                "ring '{name}': '{}' fails the unit law",
                space.symbol(i).name
            )));
        }
    }
    let window = ring.product.max_reliable_degree();
    for i in 0..space.dim() {
        for j in 0..space.dim() {
            for k in 0..space.dim() {
                let total = space.degree_of(i) + space.degree_of(j) + space.degree_of(k);
                if window.is_some_and(|w| total > w) {
                    continue;
                }
                let x = GradedElement::basis(space, i);
                let y = GradedElement::basis(space, j);
                let z = GradedElement::basis(space, k);
                let lhs = ring.mul(&ring.mul(&x, &y)?, &z)?;
                let rhs = ring.mul(&x, &ring.mul(&y, &z)?)?;
                if lhs != rhs {
                    return Err(EngineError::Validation(format!(
                        "ring '{name}': associativity fails on ({}, {}, {}): ({})*{} = {} but {}*({}) = {}",
                        space.symbol(i).name,
                        space.symbol(j).name,
                        space.symbol(k).name,
                        space.symbol(i).name,
                        space.symbol(j).name,
                        lhs,
                        space.symbol(i).name,
                        space.symbol(j).name,
                        rhs,
                    )));
                }
            }
        }
    }
    Ok(())
}
