//! Graded vector spaces with named bases, their elements, and tensor
//! products.
//!
//! A `GradedSpace` is a finite ordered basis of named, non-negatively
//! graded symbols, optionally truncated above a degree window. Elements
//! are sparse exact linear combinations in canonical form: zero
//! coefficients are never stored, so two elements are equal iff their
//! term maps are equal. All models in the engine are immutable once
//! built and shared through `Arc`, which keeps every operation safe to
//! run data-parallel.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{EngineError, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSymbol {
    pub name: String,
    pub degree: i64,
}

impl BasisSymbol {
    pub fn new(name: impl Into<String>, degree: i64) -> BasisSymbol {
        BasisSymbol {
            name: name.into(),
            degree,
        }
    }
}

#[derive(Debug)]
pub struct GradedSpace {
    name: String,
    field: Field,
    symbols: Vec<BasisSymbol>,
    truncation: Option<i64>,
    by_name: HashMap<String, usize>,
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.field == other.field
            && self.truncation == other.truncation
            && self.symbols == other.symbols
    }
}

impl GradedSpace {
    pub fn new(
        name: impl Into<String>,
        field: Field,
        symbols: Vec<BasisSymbol>,
        truncation: Option<i64>,
    ) -> Result<Arc<GradedSpace>> {
        let name = name.into();
        let mut by_name = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if s.degree < 0 {
                return Err(EngineError::Validation(format!(
                    "space '{name}': symbol '{}' has negative degree {}",
                    s.name, s.degree
                )));
            }
            if let Some(t) = truncation {
                if s.degree > t {
                    return Err(EngineError::Validation(format!(
                        "space '{name}': symbol '{}' of degree {} exceeds truncation {t}",
                        s.name, s.degree
                    )));
                }
            }
            if by_name.insert(s.name.clone(), i).is_some() {
                return Err(EngineError::Validation(format!(
                    "space '{name}': duplicate basis symbol '{}'",
                    s.name
                )));
            }
        }
        Ok(Arc::new(GradedSpace {
            name,
            field,
            symbols,
            truncation,
            by_name,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn truncation(&self) -> Option<i64> {
        self.truncation
    }

    pub fn symbols(&self) -> &[BasisSymbol] {
        &self.symbols
    }

    pub fn symbol(&self, idx: usize) -> &BasisSymbol {
        &self.symbols[idx]
    }

    pub fn degree_of(&self, idx: usize) -> i64 {
        self.symbols[idx].degree
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| EngineError::UnknownSymbol {
                symbol: name.to_string(),
                space: self.name.clone(),
            })
    }

    pub fn indices_in_degree(&self, d: i64) -> Vec<usize> {
        (0..self.symbols.len())
            .filter(|&i| self.symbols[i].degree == d)
            .collect()
    }

    pub fn dim_in_degree(&self, d: i64) -> usize {
        self.indices_in_degree(d).len()
    }

    /// Dimensions (dim_0, dim_1, ..., dim_window).
    pub fn dims_up_to(&self, window: i64) -> Vec<usize> {
        let mut dims = vec![0usize; (window.max(0) as usize) + 1];
        for s in &self.symbols {
            if s.degree <= window {
                dims[s.degree as usize] += 1;
            }
        }
        dims
    }

    pub fn max_degree(&self) -> i64 {
        self.symbols.iter().map(|s| s.degree).max().unwrap_or(0)
    }

    /// Basis indices sorted by (degree, name): the canonical print order.
    pub fn print_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.symbols.len()).collect();
        idx.sort_by(|&a, &b| {
            (self.symbols[a].degree, &self.symbols[a].name)
                .cmp(&(self.symbols[b].degree, &self.symbols[b].name))
        });
        idx
    }
}

pub fn spaces_match(a: &Arc<GradedSpace>, b: &Arc<GradedSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn ensure_same_space(a: &Arc<GradedSpace>, b: &Arc<GradedSpace>) -> Result<()> {
    if spaces_match(a, b) {
        Ok(())
    } else {
        Err(EngineError::SpaceMismatch {
            expected: a.name().to_string(),
            got: b.name().to_string(),
        })
    }
}

/// A sparse element of a graded space, in canonical form (no stored zeros).
#[derive(Clone, Debug)]
pub struct GradedElement {
    space: Arc<GradedSpace>,
    terms: BTreeMap<usize, Scalar>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        spaces_match(&self.space, &other.space) && self.terms == other.terms
    }
}

impl GradedElement {
    pub fn zero(space: &Arc<GradedSpace>) -> GradedElement {
        GradedElement {
            space: Arc::clone(space),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(space: &Arc<GradedSpace>, idx: usize) -> GradedElement {
        debug_assert!(idx < space.dim());
        let mut terms = BTreeMap::new();
        terms.insert(idx, space.field().one());
        GradedElement {
            space: Arc::clone(space),
            terms,
        }
    }

    pub fn from_named(space: &Arc<GradedSpace>, parts: &[(&str, Scalar)]) -> Result<GradedElement> {
        let mut e = GradedElement::zero(space);
        for (name, c) in parts {
            let idx = space.index_of(name)?;
            e.add_term(idx, c.clone());
        }
        Ok(e)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn coefficient(&self, idx: usize) -> Scalar {
        self.terms
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| self.space.field().zero())
    }

    /// Add `c * basis[idx]`, keeping canonical form.
    pub fn add_term(&mut self, idx: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &GradedElement) -> Result<GradedElement> {
        ensure_same_space(&self.space, &other.space)?;
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedElement) -> Result<GradedElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedElement {
        self.scale(&self.space.field().integer(-1))
    }

    pub fn scale(&self, c: &Scalar) -> GradedElement {
        if c.is_zero() {
            return GradedElement::zero(&self.space);
        }
        GradedElement {
            space: Arc::clone(&self.space),
            terms: self.terms.iter().map(|(&i, v)| (i, v.mul(c))).collect(),
        }
    }

    /// Degree of a homogeneous element: `Ok(None)` for zero, an error if
    /// terms sit in more than one degree.
    pub fn degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for (i, _) in self.terms() {
            let d = self.space.degree_of(i);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(EngineError::NonHomogeneous(format!(
                        "{self} has terms in degrees {e} and {d}"
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_ok()
    }

    /// The component of `self` in one degree.
    pub fn component(&self, d: i64) -> GradedElement {
        GradedElement {
            space: Arc::clone(&self.space),
            terms: self
                .terms
                .iter()
                .filter(|(&i, _)| self.space.degree_of(i) == d)
                .map(|(&i, c)| (i, c.clone()))
                .collect(),
        }
    }

    /// Coefficient vector over the full basis (for linear algebra).
    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut v = vec![self.space.field().zero(); self.space.dim()];
        for (i, c) in self.terms() {
            v[i] = c.clone();
        }
        v
    }
}

impl fmt::Display for GradedElement {
    /// Terms sorted by (degree, name): the canonical print order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<usize> = self.terms.keys().copied().collect();
        keys.sort_by(|&a, &b| {
            (self.space.degree_of(a), &self.space.symbol(a).name)
                .cmp(&(self.space.degree_of(b), &self.space.symbol(b).name))
        });
        for (pos, i) in keys.iter().enumerate() {
            let c = &self.terms[i];
            let name = &self.space.symbol(*i).name;
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if pos == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag == "1" {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
        }
        Ok(())
    }
}

/// Koszul sign (-1)^{|u||v|} for two homogeneous degrees.
pub fn koszul_sign(field: Field, du: i64, dv: i64) -> Scalar {
    field.sign(du * dv)
}

/// A graded tensor product with bookkeeping to map between flat basis
/// indices and per-factor index tuples. Basis symbols are named by
/// joining factor symbol names with `⊗`; the flat order is lexicographic
/// in the factor indices.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    space: Arc<GradedSpace>,
    factors: Vec<Arc<GradedSpace>>,
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

/// Tensor product with the inherited truncation: the minimum of the
/// factors' policies, applied to total degree (untruncated factors do
/// not constrain).
pub fn tensor_space(name: impl Into<String>, factors: &[Arc<GradedSpace>]) -> Result<TensorSpace> {
    let trunc = factors.iter().filter_map(|f| f.truncation()).min();
    tensor_space_trunc(name, factors, trunc)
}

/// Tensor product with an explicit truncation window for the total degree.
pub fn tensor_space_trunc(
    name: impl Into<String>,
    factors: &[Arc<GradedSpace>],
    truncation: Option<i64>,
) -> Result<TensorSpace> {
    if factors.is_empty() {
        return Err(EngineError::InvalidInput(
            "tensor product needs at least one factor".into(),
        ));
    }
    let field = factors[0].field();
    for f in factors {
        if f.field() != field {
            return Err(EngineError::FieldMismatch(
                field.to_string(),
                f.field().to_string(),
            ));
        }
    }
    let mut symbols = Vec::new();
    let mut tuples = Vec::new();
    let mut index = HashMap::new();
    let mut tuple = vec![0usize; factors.len()];
    'outer: loop {
        let degree: i64 = tuple
            .iter()
            .zip(factors)
            .map(|(&i, f)| f.degree_of(i))
            .sum();
        if truncation.map_or(true, |t| degree <= t) {
            let name = tuple
                .iter()
                .zip(factors)
                .map(|(&i, f)| f.symbol(i).name.clone())
                .collect::<Vec<_>>()
                .join("⊗");
            index.insert(tuple.clone(), symbols.len());
            tuples.push(tuple.clone());
            symbols.push(BasisSymbol::new(name, degree));
        }
        // Advance the mixed-radix counter (last factor fastest).
        for pos in (0..factors.len()).rev() {
            tuple[pos] += 1;
            if tuple[pos] < factors[pos].dim() {
                continue 'outer;
            }
            tuple[pos] = 0;
        }
        break;
    }
    let space = GradedSpace::new(name, field, symbols, truncation)?;
    Ok(TensorSpace {
        space,
        factors: factors.to_vec(),
        tuples,
        index,
    })
}

impl TensorSpace {
    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn factors(&self) -> &[Arc<GradedSpace>] {
        &self.factors
    }

    pub fn split(&self, flat: usize) -> &[usize] {
        &self.tuples[flat]
    }

    /// Flat index of a factor-index tuple; a truncation error if the tuple
    /// was cut from the window (never a silent zero).
    pub fn combine(&self, tuple: &[usize]) -> Result<usize> {
        if let Some(&i) = self.index.get(tuple) {
            return Ok(i);
        }
        let degree: i64 = tuple
            .iter()
            .zip(&self.factors)
            .map(|(&i, f)| f.degree_of(i))
            .sum();
        Err(EngineError::TruncationExceeded {
            degree,
            window: self.space.truncation().unwrap_or(-1),
            context: format!("tensor space '{}'", self.space.name()),
        })
    }

    /// u_1 ⊗ ... ⊗ u_n as an element of this tensor space.
    pub fn tensor_elements(&self, parts: &[&GradedElement]) -> Result<GradedElement> {
        if parts.len() != self.factors.len() {
            return Err(EngineError::InvalidInput(format!(
                "tensor of {} parts into a {}-factor space",
                parts.len(),
                self.factors.len()
            )));
        }
        for (p, f) in parts.iter().zip(&self.factors) {
            ensure_same_space(f, p.space())?;
        }
        let mut out = GradedElement::zero(&self.space);
        let mut stack: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), self.space.field().one())];
        for p in parts {
            let mut next = Vec::new();
            for (tuple, coeff) in &stack {
                for (i, c) in p.terms() {
                    let mut t = tuple.clone();
                    t.push(i);
                    next.push((t, coeff.mul(c)));
                }
            }
            stack = next;
        }
        for (tuple, coeff) in stack {
            out.add_term(self.combine(&tuple)?, coeff);
        }
        Ok(out)
    }
}

/// The signed braiding A⊗B → B⊗A: u⊗v ↦ (-1)^{|u||v|} v⊗u, extended
/// linearly. `from` must be a 2-factor tensor space and `to` the same
/// factors swapped.
pub fn swap_tensor(
    x: &GradedElement,
    from: &TensorSpace,
    to: &TensorSpace,
) -> Result<GradedElement> {
    ensure_same_space(from.space(), x.space())?;
    if from.factors.len() != 2
        || to.factors.len() != 2
        || !spaces_match(&from.factors[0], &to.factors[1])
        || !spaces_match(&from.factors[1], &to.factors[0])
    {
        return Err(EngineError::InvalidInput(
            "swap_tensor needs two-factor spaces with swapped factors".into(),
        ));
    }
    let field = x.space().field();
    let mut out = GradedElement::zero(to.space());
    for (flat, c) in x.terms() {
        let t = from.split(flat);
        let (i, j) = (t[0], t[1]);
        let du = from.factors[0].degree_of(i);
        let dv = from.factors[1].degree_of(j);
        let sign = koszul_sign(field, du, dv);
        out.add_term(to.combine(&[j, i])?, c.mul(&sign));
    }
    Ok(out)
}

/// Koszul swap of a decomposable pair: (-1)^{|u||v|} v⊗u as an element of
/// the swapped tensor space.
pub fn koszul_swap(
    u: &GradedElement,
    v: &GradedElement,
    target: &TensorSpace,
) -> Result<GradedElement> {
    let du = u.degree()?.unwrap_or(0);
    let dv = v.degree()?.unwrap_or(0);
    let sign = koszul_sign(u.space().field(), du, dv);
    Ok(target.tensor_elements(&[v, u])?.scale(&sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qspace(name: &str, degs: &[(&str, i64)], trunc: Option<i64>) -> Arc<GradedSpace> {
        GradedSpace::new(
            name,
            Field::Rationals,
            degs.iter().map(|&(n, d)| BasisSymbol::new(n, d)).collect(),
            trunc,
        )
        .unwrap()
    }

    #[test]
    fn space_validation() {
        assert!(GradedSpace::new(
            "bad",
            Field::Rationals,
            vec![BasisSymbol::new("x", -1)],
            None
        )
        .is_err());
        assert!(GradedSpace::new(
            "bad",
            Field::Rationals,
            vec![BasisSymbol::new("x", 1), BasisSymbol::new("x", 2)],
            None
        )
        .is_err());
        assert!(GradedSpace::new(
            "bad",
            Field::Rationals,
            vec![BasisSymbol::new("x", 9)],
            Some(8)
        )
        .is_err());
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let s = qspace("V", &[("a", 1), ("b", 1)], None);
        let a = GradedElement::basis(&s, 0);
        let e = a.add(&a.neg()).unwrap();
        assert!(e.is_zero());
        assert_eq!(e, GradedElement::zero(&s));
        // x + x = 2x keeps one term.
        let two = a.add(&a).unwrap();
        assert_eq!(two.terms().count(), 1);
        assert_eq!(two.coefficient(0), Field::Rationals.integer(2));
    }

    #[test]
    fn degree_queries() {
        let s = qspace("V", &[("a", 1), ("b", 2)], None);
        let a = GradedElement::basis(&s, 0);
        let b = GradedElement::basis(&s, 1);
        assert_eq!(a.degree().unwrap(), Some(1));
        assert_eq!(GradedElement::zero(&s).degree().unwrap(), None);
        assert!(a.add(&b).unwrap().degree().is_err());
    }

    #[test]
    fn space_mismatch_is_an_error() {
        let s = qspace("V", &[("a", 1)], None);
        let t = qspace("W", &[("a", 1)], None);
        let a = GradedElement::basis(&s, 0);
        let b = GradedElement::basis(&t, 0);
        assert!(matches!(a.add(&b), Err(EngineError::SpaceMismatch { .. })));
    }

    /// Oracle: the dimension sequence of A⊗B is the convolution of the
    /// dimension sequences, i.e. the product of Poincaré polynomials.
    fn convolve(a: &[usize], b: &[usize], upto: usize) -> Vec<usize> {
        let mut out = vec![0usize; upto + 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j <= upto {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }

    #[test]
    fn tensor_dims_match_poincare_convolution() {
        // dims (1,0,0,1) ⊗ dims (1,0,0,1) = (1,0,0,2,0,0,1)
        let s = qspace("H", &[("1", 0), ("x", 3)], None);
        let t = tensor_space("H⊗H", &[Arc::clone(&s), Arc::clone(&s)]).unwrap();
        assert_eq!(t.space().dims_up_to(6), vec![1, 0, 0, 2, 0, 0, 1]);

        let a = qspace("A", &[("1", 0), ("u", 2), ("v", 2), ("w", 5)], None);
        let b = qspace("B", &[("1", 0), ("t", 1), ("s", 3)], None);
        let t2 = tensor_space("A⊗B", &[Arc::clone(&a), Arc::clone(&b)]).unwrap();
        let oracle = convolve(&a.dims_up_to(7), &b.dims_up_to(7), 7);
        assert_eq!(t2.space().dims_up_to(7), oracle);
    }

    #[test]
    fn tensor_truncation_is_min_of_policies() {
        let a = qspace("A", &[("1", 0), ("u", 2)], None);
        let b = qspace("B", &[("1", 0), ("t", 3)], Some(10));
        let t = tensor_space("A⊗B", &[Arc::clone(&a), Arc::clone(&b)]).unwrap();
        assert_eq!(t.space().truncation(), Some(10));

        let c = qspace("C", &[("1", 0), ("t", 3)], Some(4));
        let t2 = tensor_space("A⊗C", &[Arc::clone(&a), Arc::clone(&c)]).unwrap();
        assert_eq!(t2.space().truncation(), Some(4));
        // degree 2 + 3 = 5 > 4 is cut; asking for it is an error, not zero.
        assert!(matches!(
            t2.combine(&[1, 1]),
            Err(EngineError::TruncationExceeded { .. })
        ));
    }

    #[test]
    fn tensor_of_elements_multiplies_coefficients() {
        let s = qspace("V", &[("a", 1), ("b", 2)], None);
        let t = tensor_space("V⊗V", &[Arc::clone(&s), Arc::clone(&s)]).unwrap();
        let f = Field::Rationals;
        let u = GradedElement::from_named(&s, &[("a", f.integer(2)), ("b", f.integer(3))]).unwrap();
        let v = GradedElement::from_named(&s, &[("b", f.parse("1/2").unwrap())]).unwrap();
        let uv = t.tensor_elements(&[&u, &v]).unwrap();
        assert_eq!(uv.coefficient(t.combine(&[0, 1]).unwrap()), f.integer(1));
        assert_eq!(
            uv.coefficient(t.combine(&[1, 1]).unwrap()),
            f.parse("3/2").unwrap()
        );
    }

    #[test]
    fn koszul_swap_signs() {
        let s = qspace("V", &[("u", 1), ("v", 1), ("w", 2)], None);
        let vv = tensor_space("V⊗V", &[Arc::clone(&s), Arc::clone(&s)]).unwrap();
        let u = GradedElement::basis(&s, 0);
        let v = GradedElement::basis(&s, 1);
        let w = GradedElement::basis(&s, 2);
        // |u| = |v| = 1: odd * odd swap picks up a minus sign.
        let swapped = koszul_swap(&u, &v, &vv).unwrap();
        let vu = vv.tensor_elements(&[&v, &u]).unwrap();
        assert_eq!(swapped, vu.neg());
        // even degree commutes without sign
        let swapped = koszul_swap(&u, &w, &vv).unwrap();
        assert_eq!(swapped, vv.tensor_elements(&[&w, &u]).unwrap());
    }

    proptest! {
        /// The braiding is an involution on arbitrary (non-homogeneous)
        /// 2-tensors.
        #[test]
        fn swap_tensor_involution(coeffs in proptest::collection::vec(-5i64..5, 9)) {
            let s = qspace("V", &[("u", 1), ("v", 2), ("w", 3)], None);
            let ab = tensor_space("V⊗V", &[Arc::clone(&s), Arc::clone(&s)]).unwrap();
            let f = Field::Rationals;
            let mut x = GradedElement::zero(ab.space());
            for (i, &c) in coeffs.iter().enumerate() {
                x.add_term(i, f.integer(c));
            }
            let once = swap_tensor(&x, &ab, &ab).unwrap();
            let twice = swap_tensor(&once, &ab, &ab).unwrap();
            prop_assert_eq!(twice, x);
        }

        /// Koszul sign is symmetric and multiplicative in each argument's
        /// parity.
        #[test]
        fn koszul_sign_parity(a in 0i64..40, b in 0i64..40) {
            let f = Field::Rationals;
            prop_assert_eq!(koszul_sign(f, a, b), koszul_sign(f, b, a));
            let expect = if a % 2 == 1 && b % 2 == 1 { f.integer(-1) } else { f.one() };
            prop_assert_eq!(koszul_sign(f, a, b), expect);
        }
    }
}
