//! The commutative algebra `D(X)`: finite linear combinations of the
//! characteristic functions `1_μ`, `μ ∈ W ∪ E⁰`, with a canonical
//! disjoint-support normal form.
//!
//! Basis indices are paths; a trivial path at `v` stands for `1_v`. The
//! identifications `1_{ab⁻¹} = 1_a` and `1_{b⁻¹} = 1_{r(b)}` are applied
//! at construction, so exactly one representative per function is stored.
//!
//! Zero testing refines an element onto a common-depth partition basis:
//! on a finite graph those basis functions have pairwise disjoint nonempty
//! supports, so an element vanishes exactly when all refined coefficients
//! do. The stored normal form is the minimal-depth one: after pruning,
//! full sibling families with equal coefficients are merged back into
//! their parent index.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{partition_basis, Graph, PointDescriptor, Path, VertexId};
use crate::scalar::Field;
use crate::words::{invert, Form, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("point {0} is not in the domain of the requested map")]
    PointNotInDomain(String),
}

/// An element of `D(X)` in canonical normal form: nonzero coefficients on
/// pairwise prefix-incomparable indices, at minimal depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagElement<F: Field> {
    field: F,
    terms: BTreeMap<Path, F::Elem>,
}

impl<F: Field> DiagElement<F> {
    pub fn zero(field: F) -> Self {
        DiagElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    /// Build from raw terms; normalizes.
    pub fn from_terms(
        g: &Graph,
        field: F,
        terms: impl IntoIterator<Item = (Path, F::Elem)>,
    ) -> Self {
        let mut el = DiagElement {
            field: field.clone(),
            terms: BTreeMap::new(),
        };
        for (idx, c) in terms {
            let entry = el
                .terms
                .entry(idx)
                .or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        el.normalize(g);
        el
    }

    /// `1_μ` for a single path index.
    pub fn basis(g: &Graph, field: F, index: Path) -> Self {
        let one = field.one();
        DiagElement::from_terms(g, field, [(index, one)])
    }

    /// `1_v`.
    pub fn vertex(g: &Graph, field: F, v: VertexId) -> Self {
        DiagElement::basis(g, field, Path::trivial(v))
    }

    /// The unit `Σ_v 1_v` of `D(X)` (graphs are finite).
    pub fn unit(g: &Graph, field: F) -> Self {
        let one = field.one();
        DiagElement::from_terms(
            g,
            field,
            g.vertices().map(|v| (Path::trivial(v), one.clone())),
        )
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &F::Elem)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn max_index_len(&self) -> usize {
        self.terms.keys().map(|p| p.len()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        // canonical form: zero iff no terms survive normalization
        self.terms.is_empty()
    }

    /// Rewrite on the depth-`L` partition basis (no sibling merging).
    /// Requires `L ≥` the maximal index length.
    pub fn refine_to_depth(&self, g: &Graph, depth: usize) -> Self {
        assert!(
            depth >= self.max_index_len(),
            "refinement depth below maximal index length"
        );
        let mut terms: BTreeMap<Path, F::Elem> = BTreeMap::new();
        for (idx, c) in &self.terms {
            let pieces = if idx.len() == depth {
                vec![idx.clone()]
            } else {
                partition_basis(g, idx, depth - idx.len())
            };
            for piece in pieces {
                let entry = terms.entry(piece).or_insert_with(|| self.field.zero());
                *entry = self.field.add(entry, c);
            }
        }
        terms.retain(|_, c| !self.field.is_zero(c));
        DiagElement {
            field: self.field.clone(),
            terms,
        }
    }

    fn normalize(&mut self, g: &Graph) {
        self.terms.retain(|_, c| !self.field.is_zero(c));
        if self.terms.is_empty() {
            return;
        }
        let depth = self.max_index_len();
        let mut refined = if depth == 0 {
            std::mem::take(&mut self.terms)
        } else {
            self.refine_to_depth(g, depth).terms
        };
        // Merge full sibling families with equal coefficients back into
        // their parent, repeatedly, to reach minimal depth.
        loop {
            let mut merged = false;
            let mut by_parent: BTreeMap<Path, Vec<(Path, F::Elem)>> = BTreeMap::new();
            for (idx, c) in &refined {
                if idx.len() >= 1 {
                    let parent = idx.prefix(g, idx.len() - 1);
                    by_parent
                        .entry(parent)
                        .or_default()
                        .push((idx.clone(), c.clone()));
                }
            }
            for (parent, children) in by_parent {
                let out = g.out_edges(parent.range(g));
                if out.len() != children.len() || out.is_empty() {
                    continue;
                }
                let coeff = children[0].1.clone();
                if !children.iter().all(|(_, c)| *c == coeff) {
                    continue;
                }
                for (child, _) in &children {
                    refined.remove(child);
                }
                refined.insert(parent, coeff);
                merged = true;
            }
            if !merged {
                break;
            }
        }
        self.terms = refined;
    }

    /// Pointwise product, per the intersection rules for the sets `X_μ`:
    /// `1_μ·1_ν` is the longer index if one is a prefix of the other
    /// (a vertex acting as a trivial prefix), and zero otherwise.
    pub fn mul(&self, g: &Graph, other: &Self) -> Self {
        let mut terms: BTreeMap<Path, F::Elem> = BTreeMap::new();
        for (mu, c) in &self.terms {
            for (nu, d) in &other.terms {
                let idx = if mu.is_prefix_of(nu) {
                    nu.clone()
                } else if nu.is_prefix_of(mu) {
                    mu.clone()
                } else {
                    continue;
                };
                let prod = self.field.mul(c, d);
                let entry = terms.entry(idx).or_insert_with(|| self.field.zero());
                *entry = self.field.add(entry, &prod);
            }
        }
        DiagElement::from_terms(g, self.field.clone(), terms)
    }

    /// `λ·self + μ·other`.
    pub fn add_scale(&self, g: &Graph, lambda: &F::Elem, other: &Self, mu: &F::Elem) -> Self {
        let mut terms: Vec<(Path, F::Elem)> = Vec::new();
        for (idx, c) in &self.terms {
            terms.push((idx.clone(), self.field.mul(lambda, c)));
        }
        for (idx, c) in &other.terms {
            terms.push((idx.clone(), self.field.mul(mu, c)));
        }
        DiagElement::from_terms(g, self.field.clone(), terms)
    }

    pub fn add(&self, g: &Graph, other: &Self) -> Self {
        self.add_scale(g, &self.field.one(), other, &self.field.one())
    }

    pub fn sub(&self, g: &Graph, other: &Self) -> Self {
        self.add_scale(g, &self.field.one(), other, &self.field.neg(&self.field.one()))
    }

    pub fn scale(&self, scalar: &F::Elem) -> Self {
        if self.field.is_zero(scalar) {
            return DiagElement::zero(self.field.clone());
        }
        DiagElement {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(idx, c)| (idx.clone(), self.field.mul(scalar, c)))
                .collect(),
        }
    }

    /// Value of the function at a boundary point.
    pub fn evaluate_at_point(&self, pt: &PointDescriptor) -> F::Elem {
        let mut acc = self.field.zero();
        for (idx, c) in &self.terms {
            let matches = if idx.is_trivial() {
                pt.source() == idx.source()
            } else {
                pt.has_path_prefix(idx)
            };
            if matches {
                acc = self.field.add(&acc, c);
            }
        }
        acc
    }

    /// Membership in the ideal `D_p = 1_p·D_0`: true iff `1_p·x = x`.
    pub fn in_domain(&self, g: &Graph, p: &Form) -> Result<bool, DiagError> {
        let ind = indicator(g, self.field.clone(), p)?;
        Ok(ind.mul(g, self) == *self)
    }

    /// Canonical printing: `1/2*[e] + 1*[e f] + 1*[v2]`.
    pub fn render(&self, g: &Graph) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(idx, c)| format!("{}*[{}]", self.field.format(c), idx.render(g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The characteristic function of `X_c`: `1_a` for positive and mixed
/// shapes (since `X_{ab⁻¹} = X_a`), `1_{r(b)}` for inverse shapes, and the
/// unit of `D(X)` for the neutral element.
pub fn indicator<F: Field>(g: &Graph, field: F, c: &Form) -> Result<DiagElement<F>, DiagError> {
    match c {
        Form::Neutral => Ok(DiagElement::unit(g, field)),
        Form::Proper { a, .. } => Ok(DiagElement::basis(g, field, a.clone())),
        Form::Null(_) => Err(DiagError::Word(WordError::NullForm(c.render(g)))),
    }
}

/// The set-level partial action: `θ_p` strips the prefix `b` and prepends
/// `a`, for `p = ab⁻¹` in unified form. Defined on `ξ ∈ X_{p⁻¹}`.
pub fn theta_apply(
    g: &Graph,
    p: &Form,
    xi: &PointDescriptor,
) -> Result<PointDescriptor, DiagError> {
    match p {
        Form::Null(_) => Err(DiagError::Word(WordError::NullForm(p.render(g)))),
        Form::Neutral => Ok(xi.clone()),
        Form::Proper { a, b } => {
            let p_inv = invert(g, p).expect("proper form inverts");
            if !point_in_set(g, xi, &p_inv) {
                return Err(DiagError::PointNotInDomain(xi.render(g)));
            }
            let stripped = xi
                .strip(g, b.len())
                .ok_or_else(|| DiagError::PointNotInDomain(xi.render(g)))?;
            stripped
                .prepend(g, a)
                .ok_or_else(|| DiagError::PointNotInDomain(xi.render(g)))
        }
    }
}

/// Is `ξ ∈ X_c`? For `c = ab⁻¹` this is the prefix condition on `a`
/// (`X_{ab⁻¹} = X_a`), with the sink conventions for trivial `a`.
pub fn point_in_set(g: &Graph, xi: &PointDescriptor, c: &Form) -> bool {
    match c {
        Form::Neutral => true,
        Form::Null(_) => false,
        Form::Proper { a, b } => {
            if a.is_trivial() {
                xi.source() == b.range(g)
            } else {
                xi.has_path_prefix(a)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::graph::enumerate_points;
    use crate::scalar::Rationals;
    use crate::words::{classify, parse_word};

    fn form(g: &Graph, s: &str) -> Form {
        classify(g, &parse_word(g, s).unwrap())
    }

    fn path(g: &Graph, s: &str) -> Path {
        let names: Vec<&str> = s.split_whitespace().collect();
        Path::from_edge_names(g, &names).unwrap().unwrap()
    }

    fn basis(g: &Graph, s: &str) -> DiagElement<Rationals> {
        DiagElement::basis(g, Rationals, path(g, s))
    }

    #[test]
    fn indicator_examples() {
        let r2 = catalog::r2();
        let m = form(&r2, "e f~");
        assert_eq!(indicator(&r2, Rationals, &m).unwrap(), basis(&r2, "e"));

        let a2 = catalog::a2();
        let neg_e = form(&a2, "e~");
        let v2 = a2.vertex_by_name("v2").unwrap();
        assert_eq!(
            indicator(&a2, Rationals, &neg_e).unwrap(),
            DiagElement::vertex(&a2, Rationals, v2)
        );
        assert!(indicator(&a2, Rationals, &form(&a2, "e~ e~")).is_err());
    }

    #[test]
    fn unit_is_sum_of_vertices() {
        let a2 = catalog::a2();
        let unit = indicator(&a2, Rationals, &Form::Neutral).unwrap();
        assert_eq!(unit.term_count(), 2);
    }

    #[test]
    fn mul_prefix_rule() {
        let r2 = catalog::r2();
        assert_eq!(basis(&r2, "e").mul(&r2, &basis(&r2, "e f")), basis(&r2, "e f"));
        assert!(basis(&r2, "e").mul(&r2, &basis(&r2, "f")).is_zero());
        let v = r2.vertex_by_name("v").unwrap();
        let one_v = DiagElement::vertex(&r2, Rationals, v);
        assert_eq!(one_v.mul(&r2, &basis(&r2, "e")), basis(&r2, "e"));
    }

    #[test]
    fn refine_examples() {
        let r2 = catalog::r2();
        let v = r2.vertex_by_name("v").unwrap();
        let one_v = DiagElement::vertex(&r2, Rationals, v);
        let refined = one_v.refine_to_depth(&r2, 1);
        assert_eq!(refined, basis(&r2, "e").add(&r2, &basis(&r2, "f")).refine_to_depth(&r2, 1));
        let e2 = basis(&r2, "e").refine_to_depth(&r2, 2);
        assert_eq!(e2, basis(&r2, "e e").add(&r2, &basis(&r2, "e f")).refine_to_depth(&r2, 2));

        let a2 = catalog::a2();
        let v2 = a2.vertex_by_name("v2").unwrap();
        let one_v2 = DiagElement::vertex(&a2, Rationals, v2);
        assert_eq!(one_v2.refine_to_depth(&a2, 3), one_v2);
    }

    #[test]
    fn normal_form_merges_full_sibling_families() {
        let r2 = catalog::r2();
        let v = r2.vertex_by_name("v").unwrap();
        let sum = basis(&r2, "e").add(&r2, &basis(&r2, "f"));
        assert_eq!(sum, DiagElement::vertex(&r2, Rationals, v));
    }

    #[test]
    fn is_zero_examples() {
        let r2 = catalog::r2();
        let v = r2.vertex_by_name("v").unwrap();
        let one_v = DiagElement::vertex(&r2, Rationals, v);
        let diff = one_v
            .sub(&r2, &basis(&r2, "e"))
            .sub(&r2, &basis(&r2, "f"));
        assert!(diff.is_zero());
        assert!(basis(&r2, "e").sub(&r2, &basis(&r2, "e")).is_zero());
        let partial = one_v.sub(&r2, &basis(&r2, "e"));
        assert!(!partial.is_zero());
        // witnessed at the point f^∞
        let pts = enumerate_points(&r2, 2);
        assert!(pts.iter().any(|pt| {
            Rationals.is_zero(&partial.evaluate_at_point(pt)) == false
        }));
    }

    #[test]
    fn theta_examples() {
        let r2 = catalog::r2();
        let f_inf = PointDescriptor::EventuallyPeriodic {
            prefix: Path::trivial(r2.vertex_by_name("v").unwrap()),
            cycle: path(&r2, "f"),
        }
        .normalize(&r2);
        let e = form(&r2, "e");
        let shifted = theta_apply(&r2, &e, &f_inf).unwrap();
        assert_eq!(shifted.render(&r2), "e (f)^inf");
        let e_inv = form(&r2, "e~");
        assert_eq!(theta_apply(&r2, &e_inv, &shifted).unwrap(), f_inf);

        let a2 = catalog::a2();
        let v2 = a2.vertex_by_name("v2").unwrap();
        let e = form(&a2, "e");
        let moved = theta_apply(&a2, &e, &PointDescriptor::SinkVertex(v2)).unwrap();
        assert_eq!(moved, PointDescriptor::FiniteToSink(path(&a2, "e")));
        // domain violation
        assert!(theta_apply(&a2, &e, &moved).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let r2 = catalog::r2();
        let v = r2.vertex_by_name("v").unwrap();
        let e_pt = PointDescriptor::EventuallyPeriodic {
            prefix: path(&r2, "e"),
            cycle: path(&r2, "f"),
        }
        .normalize(&r2);
        assert_eq!(basis(&r2, "e").evaluate_at_point(&e_pt), Rationals.one());
        let e_inf = PointDescriptor::EventuallyPeriodic {
            prefix: Path::trivial(v),
            cycle: path(&r2, "e"),
        }
        .normalize(&r2);
        assert_eq!(
            basis(&r2, "e f").evaluate_at_point(&e_inf),
            Rationals.zero()
        );
        let two = Rationals.from_int(2);
        let three = Rationals.from_int(3);
        let lin = basis(&r2, "e")
            .scale(&two)
            .add(&r2, &basis(&r2, "f").scale(&three));
        let f_inf = PointDescriptor::EventuallyPeriodic {
            prefix: Path::trivial(v),
            cycle: path(&r2, "f"),
        }
        .normalize(&r2);
        assert_eq!(lin.evaluate_at_point(&f_inf), three);
    }

    #[test]
    fn in_domain_examples() {
        let r2 = catalog::r2();
        let e = form(&r2, "e");
        assert!(basis(&r2, "e f").in_domain(&r2, &e).unwrap());
        assert!(!basis(&r2, "f").in_domain(&r2, &e).unwrap());
        assert!(basis(&r2, "f").in_domain(&r2, &Form::Neutral).unwrap());
    }

    #[test]
    fn refine_preserves_evaluation() {
        for (_, g) in catalog::all() {
            for depth in 1..=3usize {
                for idx in crate::graph::paths_up_to(&g, depth.min(2)) {
                    let x = DiagElement::basis(&g, Rationals, idx);
                    let refined = x.refine_to_depth(&g, depth.max(x.max_index_len()));
                    for pt in enumerate_points(&g, 2 * depth) {
                        assert_eq!(
                            x.evaluate_at_point(&pt),
                            refined.evaluate_at_point(&pt)
                        );
                    }
                }
            }
        }
    }
}
