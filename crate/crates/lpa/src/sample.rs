//! Seeded random generators for the property suites. Everything here is
//! deterministic in the seed, so failures reproduce exactly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diag::{indicator, DiagElement};
use crate::graph::{Graph, Path};
use crate::scalar::Field;
use crate::skew::SkewElement;
use crate::words::{enumerate_forms, Form};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random graph with 1..=max_vertices vertices and up to max_edges
/// edges, endpoints uniform.
pub fn random_graph(rng: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize) -> Graph {
    let nv = rng.gen_range(1..=max_vertices);
    let vertices: Vec<String> = (1..=nv).map(|i| format!("v{i}")).collect();
    let ne = rng.gen_range(0..=max_edges);
    let edges: Vec<(String, String, String)> = (1..=ne)
        .map(|i| {
            let s = rng.gen_range(0..nv);
            let d = rng.gen_range(0..nv);
            (
                format!("e{i}"),
                vertices[s].clone(),
                vertices[d].clone(),
            )
        })
        .collect();
    let vrefs: Vec<&str> = vertices.iter().map(|s| s.as_str()).collect();
    let erefs: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(n, s, d)| (n.as_str(), s.as_str(), d.as_str()))
        .collect();
    Graph::from_parts(&vrefs, &erefs).expect("generated names are unique and endpoints exist")
}

/// A random acyclic graph: edges only run from lower-numbered vertices to
/// strictly higher-numbered ones.
pub fn random_acyclic_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> Graph {
    let nv = rng.gen_range(1..=max_vertices);
    let vertices: Vec<String> = (1..=nv).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    let mut k = 0;
    for s in 0..nv {
        for d in (s + 1)..nv {
            // up to two parallel edges per admissible pair
            for _ in 0..rng.gen_range(0..=2) {
                k += 1;
                edges.push((format!("e{k}"), vertices[s].clone(), vertices[d].clone()));
            }
        }
    }
    let vrefs: Vec<&str> = vertices.iter().map(|s| s.as_str()).collect();
    let erefs: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(n, s, d)| (n.as_str(), s.as_str(), d.as_str()))
        .collect();
    Graph::from_parts(&vrefs, &erefs).expect("generated names are unique and endpoints exist")
}

/// A random nonzero scalar with small numerator.
pub fn random_scalar<F: Field>(rng: &mut ChaCha8Rng, field: &F) -> F::Elem {
    loop {
        let n = rng.gen_range(-3i64..=3);
        if n == 0 {
            continue;
        }
        let s = field.from_int(n);
        if !field.is_zero(&s) {
            return s;
        }
    }
}

/// A random diagonal element: up to `max_terms` indices of length up to
/// `depth` (including vertices), with small integer coefficients that may
/// be zero, so cancellations occur.
pub fn random_diag<F: Field>(
    rng: &mut ChaCha8Rng,
    g: &Graph,
    field: F,
    max_terms: usize,
    depth: usize,
) -> DiagElement<F> {
    let mut indices: Vec<Path> = g.vertices().map(Path::trivial).collect();
    indices.extend(crate::graph::paths_up_to(g, depth));
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(0..=max_terms) {
        let idx = indices.choose(rng).expect("at least one vertex").clone();
        let c = field.from_int(rng.gen_range(-2i64..=2));
        terms.push((idx, c));
    }
    DiagElement::from_terms(g, field, terms)
}

/// A random admissible (non-null, possibly neutral) form of word length
/// up to `max_len`.
pub fn random_form(rng: &mut ChaCha8Rng, g: &Graph, max_len: usize) -> Form {
    let forms = enumerate_forms(g, max_len);
    forms.choose(rng).cloned().unwrap_or(Form::Neutral)
}

/// A random skew-ring element with up to `max_fibers` fibers, each
/// coefficient forced into its domain ideal by cutting with 1_p.
pub fn random_skew<F: Field>(
    rng: &mut ChaCha8Rng,
    g: &Graph,
    field: F,
    max_fibers: usize,
    depth: usize,
) -> SkewElement<F> {
    let forms = enumerate_forms(g, depth);
    let mut acc = SkewElement::zero(field.clone());
    for _ in 0..rng.gen_range(0..=max_fibers) {
        let Some(p) = forms.choose(rng).cloned() else {
            break;
        };
        let cut = indicator(g, field.clone(), &p).expect("enumerated forms are admissible");
        let coeff = cut.mul(g, &random_diag(rng, g, field.clone(), 3, depth));
        if coeff.is_zero() {
            continue;
        }
        let mono = SkewElement::monomial(g, p, coeff).expect("coefficient was cut into D_p");
        acc = acc.add(g, &mono);
    }
    acc
}

/// Like [`random_skew`] but guaranteed nonzero (retries with fresh draws).
pub fn random_nonzero_skew<F: Field>(
    rng: &mut ChaCha8Rng,
    g: &Graph,
    field: F,
    max_fibers: usize,
    depth: usize,
) -> SkewElement<F> {
    loop {
        let x = random_skew(rng, g, field.clone(), max_fibers.max(1), depth);
        if !x.is_zero() {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Rationals;

    #[test]
    fn generators_are_deterministic_in_seed() {
        let g = catalog::r2();
        let a = random_skew(&mut rng_from_seed(7), &g, Rationals, 3, 2);
        let b = random_skew(&mut rng_from_seed(7), &g, Rationals, 3, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn random_acyclic_graphs_are_acyclic() {
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let g = random_acyclic_graph(&mut rng, 5);
            assert!(crate::graph::is_acyclic(&g));
        }
    }

    #[test]
    fn random_graphs_respect_bounds() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let g = random_graph(&mut rng, 6, 10);
            assert!(g.vertex_count() >= 1 && g.vertex_count() <= 6);
            assert!(g.edge_count() <= 10);
        }
    }
}
