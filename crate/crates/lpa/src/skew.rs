//! The partial skew group ring `D(X) ⋊_α 𝔽`: finite formal sums
//! `Σ a_p δ_p` with `a_p ∈ D_p`, multiplied by the fiber rule
//! `(a_p δ_p)(b_q δ_q) = α_p(α_{p⁻¹}(a_p)·b_q) δ_{pq}`, together with the
//! involution and the ℤ-grading by `|p| = m − n`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diag::{indicator, DiagElement, DiagError};
use crate::graph::{Graph, Path};
use crate::scalar::Field;
use crate::words::{compose, grade, invert, Form, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkewError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Diag(#[from] DiagError),
    #[error("coefficient is not in the domain ideal: {0}")]
    DomainViolation(String),
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
}

/// The partial action on coefficients: `α_p : D_{p⁻¹} → D_p`. For
/// `p = ab⁻¹` in unified form this is prefix replacement: refine `f` until
/// every index extends `b`, then substitute the prefix `b` by `a`.
/// Agrees with `f ∘ θ_{p⁻¹}` pointwise.
pub fn alpha_apply<F: Field>(
    g: &Graph,
    p: &Form,
    f: &DiagElement<F>,
) -> Result<DiagElement<F>, SkewError> {
    let (a, b) = match p {
        Form::Null(_) => return Err(WordError::NullForm(p.render(g)).into()),
        Form::Neutral => return Ok(f.clone()),
        Form::Proper { a, b } => (a, b),
    };
    if f.is_zero() {
        return Ok(f.clone());
    }
    let depth = b.len().max(f.max_index_len());
    let refined = f.refine_to_depth(g, depth);
    let field = f.field().clone();
    let mut terms: Vec<(Path, F::Elem)> = Vec::new();
    for (idx, c) in refined.terms() {
        let tail = if b.is_trivial() {
            if idx.source() != b.range(g) && !(idx.is_trivial() && idx.source() == b.source()) {
                return Err(SkewError::DomainViolation(format!(
                    "index [{}] lies outside X_{{{}}}",
                    idx.render(g),
                    invert(g, p).unwrap().render(g)
                )));
            }
            idx.clone()
        } else {
            match idx.strip_prefix(g, b) {
                Some(tail) => tail,
                None => {
                    return Err(SkewError::DomainViolation(format!(
                        "index [{}] lies outside X_{{{}}}",
                        idx.render(g),
                        invert(g, p).unwrap().render(g)
                    )))
                }
            }
        };
        let new_idx = if tail.is_trivial() {
            if a.is_trivial() {
                Path::trivial(a.source())
            } else {
                a.clone()
            }
        } else if a.is_trivial() {
            tail
        } else {
            a.compose(g, &tail).expect("r(a) = r(b) = s(tail)")
        };
        terms.push((new_idx, c.clone()));
    }
    Ok(DiagElement::from_terms(g, field, terms))
}

/// An element of `D(X) ⋊_α 𝔽`: a finite fiber map from non-null forms to
/// nonzero coefficients `a_p ∈ D_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewElement<F: Field> {
    field: F,
    fibers: BTreeMap<Form, DiagElement<F>>,
}

impl<F: Field> SkewElement<F> {
    pub fn zero(field: F) -> Self {
        SkewElement {
            field,
            fibers: BTreeMap::new(),
        }
    }

    /// A single fiber `a δ_p`; checks `a ∈ D_p`.
    pub fn monomial(g: &Graph, p: Form, a: DiagElement<F>) -> Result<Self, SkewError> {
        if p.is_null() {
            return Err(WordError::NullForm(p.render(g)).into());
        }
        if !a.in_domain(g, &p)? {
            return Err(SkewError::DomainViolation(format!(
                "{} is not in D_{{{}}}",
                a.render(g),
                p.render(g)
            )));
        }
        let field = a.field().clone();
        let mut fibers = BTreeMap::new();
        if !a.is_zero() {
            fibers.insert(p, a);
        }
        Ok(SkewElement { field, fibers })
    }

    /// `1_p δ_p`, the canonical partial isometry at `p`.
    pub fn indicator_delta(g: &Graph, field: F, p: &Form) -> Result<Self, SkewError> {
        let a = indicator(g, field, p)?;
        SkewElement::monomial(g, p.clone(), a)
    }

    /// `x δ_0` for `x ∈ D(X)`.
    pub fn from_diag(g: &Graph, x: DiagElement<F>) -> Self {
        let field = x.field().clone();
        let mut fibers = BTreeMap::new();
        if !x.is_zero() {
            fibers.insert(Form::Neutral, x);
        }
        let _ = g;
        SkewElement { field, fibers }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn fibers(&self) -> impl Iterator<Item = (&Form, &DiagElement<F>)> {
        self.fibers.iter()
    }

    pub fn fiber(&self, p: &Form) -> Option<&DiagElement<F>> {
        self.fibers.get(p)
    }

    pub fn fiber_count(&self) -> usize {
        self.fibers.len()
    }

    pub fn is_zero(&self) -> bool {
        self.fibers.is_empty()
    }

    /// Keys other than the neutral one.
    pub fn non_neutral_keys(&self) -> Vec<Form> {
        self.fibers
            .keys()
            .filter(|p| !p.is_neutral())
            .cloned()
            .collect()
    }

    pub fn mul(&self, g: &Graph, other: &Self) -> Result<Self, SkewError> {
        let mut fibers: BTreeMap<Form, DiagElement<F>> = BTreeMap::new();
        for (p, a_p) in &self.fibers {
            let p_inv = invert(g, p)?;
            let pulled = alpha_apply(g, &p_inv, a_p)?;
            for (q, b_q) in &other.fibers {
                let prod = pulled.mul(g, b_q);
                if prod.is_zero() {
                    continue;
                }
                let pq = compose(g, p, q)?;
                if pq.is_null() {
                    // mathematically impossible for a nonzero product
                    return Err(SkewError::InternalAssertion(format!(
                        "nonzero coefficient on null composite {} · {}",
                        p.render(g),
                        q.render(g)
                    )));
                }
                let pushed = alpha_apply(g, p, &prod)?;
                match fibers.remove(&pq) {
                    Some(existing) => {
                        let sum = existing.add(g, &pushed);
                        if !sum.is_zero() {
                            fibers.insert(pq, sum);
                        }
                    }
                    None => {
                        if !pushed.is_zero() {
                            fibers.insert(pq, pushed);
                        }
                    }
                }
            }
        }
        Ok(SkewElement {
            field: self.field.clone(),
            fibers,
        })
    }

    /// `λ·self + μ·other`, fiberwise.
    pub fn add_scale(
        &self,
        g: &Graph,
        lambda: &F::Elem,
        other: &Self,
        mu: &F::Elem,
    ) -> Self {
        let mut fibers: BTreeMap<Form, DiagElement<F>> = BTreeMap::new();
        for (p, a) in &self.fibers {
            let scaled = a.scale(lambda);
            if !scaled.is_zero() {
                fibers.insert(p.clone(), scaled);
            }
        }
        for (p, b) in &other.fibers {
            let scaled = b.scale(mu);
            if scaled.is_zero() {
                continue;
            }
            match fibers.remove(p) {
                Some(existing) => {
                    let sum = existing.add(g, &scaled);
                    if !sum.is_zero() {
                        fibers.insert(p.clone(), sum);
                    }
                }
                None => {
                    fibers.insert(p.clone(), scaled);
                }
            }
        }
        SkewElement {
            field: self.field.clone(),
            fibers,
        }
    }

    pub fn add(&self, g: &Graph, other: &Self) -> Self {
        self.add_scale(g, &self.field.one(), other, &self.field.one())
    }

    pub fn sub(&self, g: &Graph, other: &Self) -> Self {
        self.add_scale(
            g,
            &self.field.one(),
            other,
            &self.field.neg(&self.field.one()),
        )
    }

    pub fn scale(&self, g: &Graph, scalar: &F::Elem) -> Self {
        self.add_scale(g, scalar, &SkewElement::zero(self.field.clone()), scalar)
    }

    /// The involution: `(a_p δ_p)* = α_{p⁻¹}(a_p) δ_{p⁻¹}`.
    pub fn star(&self, g: &Graph) -> Result<Self, SkewError> {
        let mut fibers = BTreeMap::new();
        for (p, a_p) in &self.fibers {
            let p_inv = invert(g, p)?;
            let coeff = alpha_apply(g, &p_inv, a_p)?;
            fibers.insert(p_inv, coeff);
        }
        Ok(SkewElement {
            field: self.field.clone(),
            fibers,
        })
    }

    /// Split into homogeneous components by grading degree.
    pub fn grade_decompose(&self, g: &Graph) -> BTreeMap<i64, SkewElement<F>> {
        let _ = g;
        let mut out: BTreeMap<i64, SkewElement<F>> = BTreeMap::new();
        for (p, a_p) in &self.fibers {
            let z = grade(p).expect("fiber keys are non-null");
            out.entry(z)
                .or_insert_with(|| SkewElement::zero(self.field.clone()))
                .fibers
                .insert(p.clone(), a_p.clone());
        }
        out
    }

    /// Canonical printing: fibers sorted by (grade, word), e.g.
    /// `[1*[v]]·δ(0) + [1*[e]]·δ(e f~)`.
    pub fn render(&self, g: &Graph) -> String {
        if self.fibers.is_empty() {
            return "0".to_string();
        }
        self.fibers
            .iter()
            .map(|(p, a)| format!("[{}]·δ({})", a.render(g), p.render(g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Parse the canonical printed form back into an element. Inside an index
/// bracket a single token is resolved as an edge first, then as a vertex.
pub fn parse_element<F: Field>(
    g: &Graph,
    field: F,
    text: &str,
) -> Result<SkewElement<F>, String> {
    let text = text.trim();
    if text == "0" {
        return Ok(SkewElement::zero(field));
    }
    let mut acc = SkewElement::zero(field.clone());
    for chunk in text.split(" + [") {
        let chunk = chunk.strip_prefix('[').unwrap_or(chunk);
        let (diag_part, word_part) = chunk
            .rsplit_once("]·δ(")
            .ok_or_else(|| format!("malformed fiber `{chunk}`"))?;
        let word_part = word_part
            .strip_suffix(')')
            .ok_or_else(|| format!("malformed delta in `{chunk}`"))?;
        let form = if word_part == "0" {
            Form::Neutral
        } else {
            let letters =
                crate::words::parse_word(g, word_part).map_err(|e| e.to_string())?;
            crate::words::classify(g, &letters)
        };
        let mut terms: Vec<(Path, F::Elem)> = Vec::new();
        for term in diag_part.split(" + ") {
            let (coeff_s, idx_s) = term
                .split_once("*[")
                .ok_or_else(|| format!("malformed term `{term}`"))?;
            let idx_s = idx_s
                .strip_suffix(']')
                .ok_or_else(|| format!("malformed index in `{term}`"))?;
            let coeff = field.parse(coeff_s.trim()).map_err(|e| e.to_string())?;
            let tokens: Vec<&str> = idx_s.split_whitespace().collect();
            let idx = if tokens.len() == 1 && g.edge_by_name(tokens[0]).is_err() {
                Path::trivial(g.vertex_by_name(tokens[0]).map_err(|e| e.to_string())?)
            } else {
                Path::from_edge_names(g, &tokens)
                    .map_err(|e| e.to_string())?
                    .ok_or_else(|| format!("`{idx_s}` is not a path"))?
            };
            terms.push((idx, coeff));
        }
        let coeff = DiagElement::from_terms(g, field.clone(), terms);
        let fiber = SkewElement::monomial(g, form, coeff).map_err(|e| e.to_string())?;
        acc = acc.add(g, &fiber);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Rationals;
    use crate::words::{classify, parse_word};

    fn form(g: &Graph, s: &str) -> Form {
        classify(g, &parse_word(g, s).unwrap())
    }

    fn ind_delta(g: &Graph, s: &str) -> SkewElement<Rationals> {
        let f = if s == "0" {
            Form::Neutral
        } else {
            form(g, s)
        };
        SkewElement::indicator_delta(g, Rationals, &f).unwrap()
    }

    fn basis(g: &Graph, s: &str) -> DiagElement<Rationals> {
        let names: Vec<&str> = s.split_whitespace().collect();
        DiagElement::basis(
            g,
            Rationals,
            Path::from_edge_names(g, &names).unwrap().unwrap(),
        )
    }

    #[test]
    fn alpha_examples() {
        let r2 = catalog::r2();
        let v = r2.vertex_by_name("v").unwrap();
        let e = form(&r2, "e");
        // α_e(1_{r(e)}) = 1_e
        let one_v = DiagElement::vertex(&r2, Rationals, v);
        assert_eq!(alpha_apply(&r2, &e, &one_v).unwrap(), basis(&r2, "e"));
        // α_{e⁻¹}(1_{ef}) = 1_f
        let e_inv = form(&r2, "e~");
        assert_eq!(
            alpha_apply(&r2, &e_inv, &basis(&r2, "e f")).unwrap(),
            basis(&r2, "f")
        );
        // α_p(0) = 0
        assert!(alpha_apply(&r2, &e, &DiagElement::zero(Rationals))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn alpha_domain_violation() {
        let r2 = catalog::r2();
        let e_inv = form(&r2, "e~");
        // 1_f is not in D_e, the domain of α_{e⁻¹}
        assert!(matches!(
            alpha_apply(&r2, &e_inv, &basis(&r2, "f")),
            Err(SkewError::DomainViolation(_))
        ));
    }

    #[test]
    fn mul_examples() {
        let r2 = catalog::r2();
        // (1_{e⁻¹} δ_{e⁻¹})(1_e δ_e) = 1_{r(e)} δ_0
        let prod = ind_delta(&r2, "e~").mul(&r2, &ind_delta(&r2, "e")).unwrap();
        let v = r2.vertex_by_name("v").unwrap();
        let expected = SkewElement::from_diag(&r2, DiagElement::vertex(&r2, Rationals, v));
        assert_eq!(prod, expected);
        // (1_e δ_e)(1_f δ_f) = 1_{ef} δ_{ef}
        let prod = ind_delta(&r2, "e").mul(&r2, &ind_delta(&r2, "f")).unwrap();
        assert_eq!(prod, ind_delta(&r2, "e f"));
        // (1_{e⁻¹} δ_{e⁻¹})(1_f δ_f) = 0 for e ≠ f
        let prod = ind_delta(&r2, "e~").mul(&r2, &ind_delta(&r2, "f")).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn add_scale_examples() {
        let r2 = catalog::r2();
        let x = ind_delta(&r2, "e");
        let one = Rationals.one();
        let neg = Rationals.neg(&one);
        assert!(x.add_scale(&r2, &one, &x, &neg).is_zero());
        let y = ind_delta(&r2, "f");
        assert_eq!(x.add_scale(&r2, &one, &y, &one).fiber_count(), 2);
        let zero = Rationals.zero();
        assert!(x.add_scale(&r2, &zero, &y, &zero).is_zero());
    }

    #[test]
    fn star_examples() {
        let r2 = catalog::r2();
        let e_star = ind_delta(&r2, "e").star(&r2).unwrap();
        assert_eq!(e_star, ind_delta(&r2, "e~"));
        let v = r2.vertex_by_name("v").unwrap();
        let x0 = SkewElement::from_diag(&r2, DiagElement::vertex(&r2, Rationals, v));
        assert_eq!(x0.star(&r2).unwrap(), x0);
        // star(φ(e f*)) = φ(f e*)
        let ef_star = ind_delta(&r2, "e f~").star(&r2).unwrap();
        assert_eq!(ef_star, ind_delta(&r2, "f e~"));
    }

    #[test]
    fn grade_decompose_examples() {
        let r2 = catalog::r2();
        let x = ind_delta(&r2, "e");
        let comps = x.grade_decompose(&r2);
        assert_eq!(comps.len(), 1);
        assert!(comps.contains_key(&1));

        let mixed = ind_delta(&r2, "e f~");
        let comps = mixed.grade_decompose(&r2);
        assert_eq!(comps.keys().collect::<Vec<_>>(), vec![&0]);

        let v = r2.vertex_by_name("v").unwrap();
        let both = SkewElement::from_diag(&r2, DiagElement::vertex(&r2, Rationals, v))
            .add(&r2, &x);
        let comps = both.grade_decompose(&r2);
        assert_eq!(comps.keys().collect::<Vec<_>>(), vec![&0, &1]);
        // components sum back
        let mut sum = SkewElement::zero(Rationals);
        for c in comps.values() {
            sum = sum.add(&r2, c);
        }
        assert_eq!(sum, both);
    }

    #[test]
    fn render_and_parse_round_trip() {
        let r2 = catalog::r2();
        let v = r2.vertex_by_name("v").unwrap();
        let x = SkewElement::from_diag(&r2, DiagElement::vertex(&r2, Rationals, v))
            .add(&r2, &ind_delta(&r2, "e f~"));
        let text = x.render(&r2);
        assert_eq!(text, "[1*[v]]·δ(0) + [1*[e]]·δ(e f~)");
        let back = parse_element(&r2, Rationals, &text).unwrap();
        assert_eq!(back, x);
        assert!(parse_element::<Rationals>(&r2, Rationals, "0")
            .unwrap()
            .is_zero());
    }
}
