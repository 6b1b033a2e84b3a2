//! The invariant suite behind `lpa check`: a battery of exact symbolic
//! identities, each cross-validated against an independent oracle in
//! [`oracle`], run on a given graph with a given seed.

use crate::diag::{indicator, theta_apply, DiagElement};
use crate::front::check_ck_relations;
use crate::graph::{enumerate_points, paths_up_to, Graph, Path};
use crate::sample::{random_diag, random_skew, rng_from_seed};
use crate::scalar::Field;
use crate::skew::{alpha_apply, SkewElement};
use crate::words::{compose, enumerate_forms, invert, Form};

/// Independent reference implementations, deliberately written from the
/// definitions rather than the engine's data structures.
pub mod oracle {
    use std::collections::BTreeSet;

    use crate::diag::DiagElement;
    use crate::graph::{enumerate_points, paths_up_to, Graph, Path, VertexId};
    use crate::scalar::Field;
    use crate::words::Form;

    /// The cylinder-set intersection table, by case analysis on the unified
    /// shapes. Returns the characteristic function of `X_p ∩ X_q`.
    pub fn expected_intersection<F: Field>(
        g: &Graph,
        field: F,
        p: &Form,
        q: &Form,
    ) -> Option<DiagElement<F>> {
        let ind = |f: &Form| crate::diag::indicator(g, field.clone(), f).ok();
        match (p, q) {
            (Form::Null(_), _) | (_, Form::Null(_)) => None,
            (Form::Neutral, other) | (other, Form::Neutral) => ind(other),
            (Form::Proper { a, b }, Form::Proper { a: c, b: d }) => {
                match (a.is_trivial(), c.is_trivial()) {
                    // row 1: X_{b⁻¹} ∩ X_{d⁻¹}
                    (true, true) => {
                        if b.range(g) == d.range(g) {
                            ind(p)
                        } else {
                            Some(DiagElement::zero(field))
                        }
                    }
                    // row 2: X_{b⁻¹} ∩ X_{cd⁻¹}
                    (true, false) => {
                        if b.range(g) == c.source() {
                            ind(q)
                        } else {
                            Some(DiagElement::zero(field))
                        }
                    }
                    (false, true) => {
                        if d.range(g) == a.source() {
                            ind(p)
                        } else {
                            Some(DiagElement::zero(field))
                        }
                    }
                    // row 3: X_{ab⁻¹} ∩ X_{cd⁻¹}
                    (false, false) => {
                        if c.is_prefix_of(a) {
                            ind(p)
                        } else if a.is_prefix_of(c) {
                            ind(q)
                        } else {
                            Some(DiagElement::zero(field))
                        }
                    }
                }
            }
        }
    }

    /// Condition (L) from the definition: every closed path of length up
    /// to `|E⁰|` (enough to cover every simple cycle) has an exit edge.
    pub fn brute_condition_l(g: &Graph) -> bool {
        for p in paths_up_to(g, g.vertex_count()) {
            if p.range(g) != p.source() {
                continue;
            }
            let has_exit = p.edges().iter().any(|&b_i| {
                g.out_edges(g.src(b_i)).iter().any(|&t| t != b_i)
            });
            if !has_exit {
                return false;
            }
        }
        true
    }

    /// All hereditary and saturated vertex subsets, by testing every one
    /// of the 2^|E⁰| candidates against the raw definitions.
    pub fn brute_hs_subsets(g: &Graph) -> Vec<BTreeSet<VertexId>> {
        let vertices: Vec<VertexId> = g.vertices().collect();
        let mut out = Vec::new();
        for mask in 0u64..(1 << vertices.len()) {
            let set: BTreeSet<VertexId> = vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            let hereditary = set
                .iter()
                .all(|&v| g.out_edges(v).iter().all(|&e| set.contains(&g.dst(e))));
            let saturated = g.vertices().all(|v| {
                let out_edges = g.out_edges(v);
                out_edges.is_empty()
                    || !out_edges.iter().all(|&e| set.contains(&g.dst(e)))
                    || set.contains(&v)
            });
            if hereditary && saturated {
                out.push(set);
            }
        }
        out.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
        out
    }

    /// Zero test by exhaustive evaluation on boundary points of bounded
    /// description size.
    pub fn zero_by_evaluation<F: Field>(
        g: &Graph,
        x: &DiagElement<F>,
        max_size: usize,
    ) -> bool {
        let field = x.field().clone();
        enumerate_points(g, max_size)
            .iter()
            .all(|pt| field.is_zero(&x.evaluate_at_point(pt)))
    }

    /// `Σ_{sinks w} n_w²`, straight from path counting.
    pub fn dimension_formula(g: &Graph) -> usize {
        let mut paths: Vec<Path> = g.vertices().map(Path::trivial).collect();
        paths.extend(paths_up_to(g, g.vertex_count()));
        g.vertices()
            .filter(|&v| g.out_edges(v).is_empty())
            .map(|w| {
                let n = paths.iter().filter(|p| p.range(g) == w).count();
                n * n
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Run the whole battery on one graph. Word/depth bounds are kept small
/// so the suite stays interactive even on dense graphs.
pub fn run_all<F: Field>(g: &Graph, field: F, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(ck_relations(g, field.clone()));
    out.push(intersection_table(g, field.clone(), 2));
    out.push(alpha_identity(g, field.clone(), 2));
    out.push(ring_axioms(g, field.clone(), seed, 50));
    out.push(star_properties(g, field.clone(), seed, 25));
    out.push(grading(g, field.clone(), seed, 25));
    out.push(theta_alpha_consistency(g, field.clone(), 2, 4));
    out.push(zero_test_agreement(g, field.clone(), seed, 100, 2));
    out.push(condition_l_against_oracle(g));
    out.push(hs_subsets_against_oracle(g));
    out
}

pub fn ck_relations<F: Field>(g: &Graph, field: F) -> Check {
    match check_ck_relations(g, field) {
        Ok(violations) if violations.is_empty() => {
            check("ck-relations", true, "all defining relations hold".to_string())
        }
        Ok(violations) => check(
            "ck-relations",
            false,
            format!("{}: {}", violations[0].relation, violations[0].detail),
        ),
        Err(e) => check("ck-relations", false, e.to_string()),
    }
}

/// All rows of the cylinder-set intersection table, vertex rows included.
pub fn intersection_table<F: Field>(g: &Graph, field: F, max_len: usize) -> Check {
    let forms = enumerate_forms(g, max_len);
    let mut cases = 0usize;
    for p in &forms {
        for q in &forms {
            let lhs = match (indicator(g, field.clone(), p), indicator(g, field.clone(), q)) {
                (Ok(a), Ok(b)) => a.mul(g, &b),
                _ => continue,
            };
            let rhs = match oracle::expected_intersection(g, field.clone(), p, q) {
                Some(r) => r,
                None => continue,
            };
            cases += 1;
            if lhs != rhs {
                return check(
                    "intersections",
                    false,
                    format!(
                        "1_{{{}}}·1_{{{}}} = {} but table says {}",
                        p.render(g),
                        q.render(g),
                        lhs.render(g),
                        rhs.render(g)
                    ),
                );
            }
        }
        // row 4/5: vertex against form
        for v in g.vertices() {
            let lhs = DiagElement::vertex(g, field.clone(), v)
                .mul(g, &indicator(g, field.clone(), p).expect("admissible form"));
            let expected = match p {
                Form::Neutral => DiagElement::vertex(g, field.clone(), v),
                Form::Proper { a, b } => {
                    let hit = if a.is_trivial() {
                        b.range(g) == v
                    } else {
                        a.source() == v
                    };
                    if hit {
                        indicator(g, field.clone(), p).expect("admissible form")
                    } else {
                        DiagElement::zero(field.clone())
                    }
                }
                Form::Null(_) => continue,
            };
            cases += 1;
            if lhs != expected {
                return check(
                    "intersections",
                    false,
                    format!(
                        "1_{{{}}}·1_{{{}}} disagrees with the vertex row",
                        g.vertex_name(v),
                        p.render(g)
                    ),
                );
            }
        }
    }
    check("intersections", true, format!("{cases} table rows verified"))
}

/// The composition identity `α_p(1_{p⁻¹}1_q) = 1_p1_{pq}` for admissible p, q.
pub fn alpha_identity<F: Field>(g: &Graph, field: F, max_len: usize) -> Check {
    let forms = enumerate_forms(g, max_len);
    let mut cases = 0usize;
    for p in &forms {
        let p_inv = invert(g, p).expect("admissible forms invert");
        for q in &forms {
            let lhs_arg = indicator(g, field.clone(), &p_inv)
                .expect("inverse is admissible")
                .mul(g, &indicator(g, field.clone(), q).expect("admissible"));
            let lhs = match alpha_apply(g, p, &lhs_arg) {
                Ok(v) => v,
                Err(e) => {
                    return check(
                        "alpha-identity",
                        false,
                        format!("α_{{{}}} failed on 1_{{{}⁻¹}}1_{{{}}}: {e}", p.render(g), p.render(g), q.render(g)),
                    )
                }
            };
            let pq = compose(g, p, q).expect("composition is defined on admissible words");
            let rhs = match indicator(g, field.clone(), &pq) {
                Ok(ind) => indicator(g, field.clone(), p)
                    .expect("admissible")
                    .mul(g, &ind),
                // X_{pq} = ∅ for null composites
                Err(_) => DiagElement::zero(field.clone()),
            };
            cases += 1;
            if lhs != rhs {
                return check(
                    "alpha-identity",
                    false,
                    format!(
                        "α_{{{}}}(1_{{p⁻¹}}1_{{{}}}) = {} ≠ {}",
                        p.render(g),
                        q.render(g),
                        lhs.render(g),
                        rhs.render(g)
                    ),
                );
            }
        }
    }
    check("alpha-identity", true, format!("{cases} identities verified"))
}

/// Associativity and distributivity of the skew product.
pub fn ring_axioms<F: Field>(g: &Graph, field: F, seed: u64, trials: usize) -> Check {
    let mut rng = rng_from_seed(seed ^ 0xa550c1a7);
    for i in 0..trials {
        let x = random_skew(&mut rng, g, field.clone(), 2, 2);
        let y = random_skew(&mut rng, g, field.clone(), 2, 2);
        let z = random_skew(&mut rng, g, field.clone(), 2, 2);
        let assoc_ok = (|| -> Result<bool, crate::skew::SkewError> {
            let lhs = x.mul(g, &y)?.mul(g, &z)?;
            let rhs = x.mul(g, &y.mul(g, &z)?)?;
            Ok(lhs == rhs)
        })();
        let dist_ok = (|| -> Result<bool, crate::skew::SkewError> {
            let lhs = x.mul(g, &y.add(g, &z))?;
            let rhs = x.mul(g, &y)?.add(g, &x.mul(g, &z)?);
            Ok(lhs == rhs)
        })();
        match (assoc_ok, dist_ok) {
            (Ok(true), Ok(true)) => {}
            other => {
                return check(
                    "ring-axioms",
                    false,
                    format!("trial {i}: associativity/distributivity broke: {other:?}"),
                )
            }
        }
    }
    check("ring-axioms", true, format!("{trials} random triples verified"))
}

/// The involution: anti-multiplicative and involutive.
pub fn star_properties<F: Field>(g: &Graph, field: F, seed: u64, trials: usize) -> Check {
    let mut rng = rng_from_seed(seed ^ 0x57a2);
    for i in 0..trials {
        let x = random_skew(&mut rng, g, field.clone(), 2, 2);
        let y = random_skew(&mut rng, g, field.clone(), 2, 2);
        let ok = (|| -> Result<bool, crate::skew::SkewError> {
            let anti = x.mul(g, &y)?.star(g)? == y.star(g)?.mul(g, &x.star(g)?)?;
            let invol = x.star(g)?.star(g)? == x;
            Ok(anti && invol)
        })();
        if !matches!(ok, Ok(true)) {
            return check("star", false, format!("trial {i}: involution law broke"));
        }
    }
    check("star", true, format!("{trials} random pairs verified"))
}

/// Grading: homogeneous components multiply additively and decompositions
/// sum back to the element.
pub fn grading<F: Field>(g: &Graph, field: F, seed: u64, trials: usize) -> Check {
    let mut rng = rng_from_seed(seed ^ 0x96ad);
    for i in 0..trials {
        let x = random_skew(&mut rng, g, field.clone(), 3, 2);
        let y = random_skew(&mut rng, g, field.clone(), 3, 2);
        let xd = x.grade_decompose(g);
        let yd = y.grade_decompose(g);
        let mut x_sum = SkewElement::zero(field.clone());
        for part in xd.values() {
            x_sum = x_sum.add(g, part);
        }
        if x_sum != x {
            return check("grading", false, format!("trial {i}: components do not sum back"));
        }
        for (zx, px) in &xd {
            for (zy, py) in &yd {
                let prod = match px.mul(g, py) {
                    Ok(p) => p,
                    Err(e) => return check("grading", false, format!("trial {i}: {e}")),
                };
                let decomp = prod.grade_decompose(g);
                if decomp.keys().any(|&k| k != zx + zy) {
                    return check(
                        "grading",
                        false,
                        format!("trial {i}: A_{zx}·A_{zy} leaked outside A_{}", zx + zy),
                    );
                }
            }
        }
    }
    check("grading", true, format!("{trials} homogeneous pairs verified"))
}

/// `α_p(f) = f ∘ θ_{p⁻¹}` pointwise, on exhaustive small enumerations.
pub fn theta_alpha_consistency<F: Field>(
    g: &Graph,
    field: F,
    max_len: usize,
    max_point_size: usize,
) -> Check {
    let points = enumerate_points(g, max_point_size);
    let mut bases: Vec<Path> = g.vertices().map(Path::trivial).collect();
    bases.extend(paths_up_to(g, max_len));
    let mut cases = 0usize;
    for p in enumerate_forms(g, max_len) {
        if p.is_neutral() {
            continue;
        }
        let p_inv = invert(g, &p).expect("admissible forms invert");
        for mu in &bases {
            let f = indicator(g, field.clone(), &p_inv)
                .expect("admissible")
                .mul(g, &DiagElement::basis(g, field.clone(), mu.clone()));
            let image = match alpha_apply(g, &p, &f) {
                Ok(v) => v,
                Err(e) => {
                    return check(
                        "theta-alpha",
                        false,
                        format!("α_{{{}}} failed on a domain element: {e}", p.render(g)),
                    )
                }
            };
            for xi in &points {
                if !crate::diag::point_in_set(g, xi, &p) {
                    continue;
                }
                let pulled = match theta_apply(g, &p_inv, xi) {
                    Ok(eta) => eta,
                    Err(e) => {
                        return check(
                            "theta-alpha",
                            false,
                            format!("θ_{{{}}} failed on {}: {e}", p_inv.render(g), xi.render(g)),
                        )
                    }
                };
                cases += 1;
                if image.evaluate_at_point(xi) != f.evaluate_at_point(&pulled) {
                    return check(
                        "theta-alpha",
                        false,
                        format!(
                            "α_{{{}}}(1_{{p⁻¹}}1_{{{}}}) disagrees with f∘θ at {}",
                            p.render(g),
                            mu.render(g),
                            xi.render(g)
                        ),
                    );
                }
            }
        }
    }
    check("theta-alpha", true, format!("{cases} point evaluations verified"))
}

/// The canonical zero test against exhaustive point evaluation.
pub fn zero_test_agreement<F: Field>(
    g: &Graph,
    field: F,
    seed: u64,
    trials: usize,
    depth: usize,
) -> Check {
    let mut rng = rng_from_seed(seed ^ 0x2e20);
    for i in 0..trials {
        let x = random_diag(&mut rng, g, field.clone(), 4, depth);
        let by_eval = oracle::zero_by_evaluation(g, &x, 2 * depth);
        if x.is_zero() != by_eval {
            return check(
                "zero-test",
                false,
                format!(
                    "trial {i}: is_zero = {} but evaluation says {} for {}",
                    x.is_zero(),
                    by_eval,
                    x.render(g)
                ),
            );
        }
    }
    check("zero-test", true, format!("{trials} random elements verified"))
}

pub fn condition_l_against_oracle(g: &Graph) -> Check {
    let engine = crate::graph::condition_l(g).holds;
    let brute = oracle::brute_condition_l(g);
    check(
        "condition-l",
        engine == brute,
        format!("engine = {engine}, oracle = {brute}"),
    )
}

pub fn hs_subsets_against_oracle(g: &Graph) -> Check {
    match crate::graph::enumerate_hs_subsets(g, usize::MAX) {
        Ok(engine) => {
            let brute = oracle::brute_hs_subsets(g);
            check(
                "hs-subsets",
                engine == brute,
                format!("{} subsets on both sides", engine.len()),
            )
        }
        Err(e) => check("hs-subsets", false, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::{PrimeField, Rationals};

    #[test]
    fn full_battery_passes_on_catalog() {
        for (name, g) in catalog::all() {
            for c in run_all(&g, Rationals, 42) {
                assert!(c.passed, "{name}/{}: {}", c.name, c.detail);
            }
        }
    }

    #[test]
    fn battery_passes_in_characteristic_p() {
        let g = catalog::r2();
        let f5 = PrimeField::new(5).unwrap();
        for c in run_all(&g, f5, 42) {
            assert!(c.passed, "gf5/{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn brute_oracles_match_catalog_expectations() {
        assert!(oracle::brute_condition_l(&catalog::r2()));
        assert!(!oracle::brute_condition_l(&catalog::single_loop()));
        let t = catalog::t_graph();
        let subsets = oracle::brute_hs_subsets(&t);
        let w = t.vertex_by_name("w").unwrap();
        assert!(subsets.iter().any(|s| s.len() == 1 && s.contains(&w)));
        assert_eq!(oracle::dimension_formula(&catalog::a2()), 4);
        assert_eq!(oracle::dimension_formula(&catalog::a3()), 9);
    }
}
