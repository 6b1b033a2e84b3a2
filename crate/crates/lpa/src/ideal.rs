//! Constructive ideal theory: the reduction of a nonzero element to the
//! zero fiber, vertex-projection extraction, hereditary/saturated
//! propagation, and the simplicity criteria. Every operation emits a
//! replayable [`Certificate`].

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;
use thiserror::Error;

use crate::diag::DiagElement;
use crate::graph::{
    condition_l, enumerate_hs_subsets, is_acyclic, partition_basis, paths_ending_at, paths_up_to,
    ConditionLVerdict, EdgeId, Graph, GraphError, Path, VertexId,
};
use crate::scalar::{Field, FieldError};
use crate::skew::{parse_element, SkewElement, SkewError};
use crate::words::{enumerate_forms, Form};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdealError {
    #[error("condition (L) fails: cycle `{0}` has no exit")]
    ConditionLViolated(String),
    #[error("input element is zero")]
    ZeroInput,
    #[error("simplicity criteria not met: {0}")]
    CriteriaNotMet(String),
    #[error("graph is not acyclic: cycle `{0}`")]
    CycleFound(String),
    #[error("step assertion failed: {0}")]
    StepAssertion(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One multiplier chain: the source element with an ordered list of
/// one-sided multiplications.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<F: Field> {
    pub source: SkewElement<F>,
    pub steps: Vec<(Side, SkewElement<F>)>,
}

impl<F: Field> Chain<F> {
    pub fn replay(&self, g: &Graph) -> Result<SkewElement<F>, SkewError> {
        let mut acc = self.source.clone();
        for (side, m) in &self.steps {
            acc = match side {
                Side::Left => m.mul(g, &acc)?,
                Side::Right => acc.mul(g, m)?,
            };
        }
        Ok(acc)
    }
}

/// A verifiable witness that `claimed_result` lies in the two-sided ideal
/// generated by the chain sources. Most operations emit a single chain;
/// saturation steps sum one chain per out-edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<F: Field> {
    pub chains: Vec<Chain<F>>,
    pub claimed_result: SkewElement<F>,
}

impl<F: Field> Certificate<F> {
    pub fn single(source: SkewElement<F>, steps: Vec<(Side, SkewElement<F>)>, result: SkewElement<F>) -> Self {
        Certificate {
            chains: vec![Chain { source, steps }],
            claimed_result: result,
        }
    }

    /// Multiply the certified element on one side, in place: the same
    /// multiplier distributes over every chain of the sum.
    pub fn push_step(&mut self, g: &Graph, side: Side, m: &SkewElement<F>) -> Result<(), SkewError> {
        for chain in &mut self.chains {
            chain.steps.push((side, m.clone()));
        }
        self.claimed_result = match side {
            Side::Left => m.mul(g, &self.claimed_result)?,
            Side::Right => self.claimed_result.mul(g, m)?,
        };
        Ok(())
    }
}

/// Replay every chain, sum, and compare with the claim; a nonzero claim is
/// also required. `false` is data, not an error.
pub fn verify_certificate<F: Field>(g: &Graph, cert: &Certificate<F>) -> bool {
    if cert.claimed_result.is_zero() {
        return false;
    }
    let mut total = SkewElement::zero(cert.claimed_result.field().clone());
    for chain in &cert.chains {
        match chain.replay(g) {
            Ok(v) => total = total.add(g, &v),
            Err(_) => return false,
        }
    }
    total == cert.claimed_result
}

pub fn certificate_to_json<F: Field>(g: &Graph, cert: &Certificate<F>) -> serde_json::Value {
    let chain_json = |chain: &Chain<F>| {
        json!({
            "source": chain.source.render(g),
            "steps": chain
                .steps
                .iter()
                .map(|(side, m)| {
                    json!({
                        "side": match side { Side::Left => "L", Side::Right => "R" },
                        "mul": m.render(g),
                    })
                })
                .collect::<Vec<_>>(),
        })
    };
    if cert.chains.len() == 1 {
        let mut obj = chain_json(&cert.chains[0]);
        obj["result"] = json!(cert.claimed_result.render(g));
        obj
    } else {
        json!({
            "chains": cert.chains.iter().map(chain_json).collect::<Vec<_>>(),
            "result": cert.claimed_result.render(g),
        })
    }
}

pub fn certificate_from_json<F: Field>(
    g: &Graph,
    field: F,
    value: &serde_json::Value,
) -> Result<Certificate<F>, String> {
    let parse = |v: &serde_json::Value, what: &str| -> Result<SkewElement<F>, String> {
        let text = v
            .as_str()
            .ok_or_else(|| format!("certificate field `{what}` is not a string"))?;
        parse_element(g, field.clone(), text).map_err(|e| format!("{what}: {e}"))
    };
    let chain_from = |v: &serde_json::Value| -> Result<Chain<F>, String> {
        let source = parse(&v["source"], "source")?;
        let steps_json = v["steps"]
            .as_array()
            .ok_or_else(|| "certificate `steps` is not an array".to_string())?;
        let mut steps = Vec::new();
        for s in steps_json {
            let side = match s["side"].as_str() {
                Some("L") => Side::Left,
                Some("R") => Side::Right,
                other => return Err(format!("bad step side {other:?}")),
            };
            steps.push((side, parse(&s["mul"], "mul")?));
        }
        Ok(Chain { source, steps })
    };
    let chains = match value.get("chains") {
        Some(arr) => arr
            .as_array()
            .ok_or_else(|| "`chains` is not an array".to_string())?
            .iter()
            .map(chain_from)
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![chain_from(value)?],
    };
    let claimed_result = parse(&value["result"], "result")?;
    Ok(Certificate {
        chains,
        claimed_result,
    })
}

fn condition_l_or_err(g: &Graph) -> Result<(), IdealError> {
    let verdict = condition_l(g);
    if verdict.holds {
        Ok(())
    } else {
        let w = verdict.witness.expect("failing verdict carries a witness");
        Err(IdealError::ConditionLViolated(w.render(g)))
    }
}

/// Exit-witness search: given a closed path `b` and a nonzero
/// `x_b ∈ D_b`, find `m ≥ 1` and a deviating continuation `t` (some
/// `t_i ≠ b_i`, `|t| ≤ |b|`) with `x_b·1_{bᵐt} ≠ 0`. Returns
/// `(m, t, bᵐt)`. Such a witness always exists when every cycle has an
/// exit: either some power of `b` kills `x_b` and the mass must sit on a
/// deviation, or no power does and an exit edge supplies one.
///
/// Strategy: take the largest `m` (up to a depth-dominating bound, grown
/// a little on demand) for which `x_b·1_{bᵐ} ≠ 0` and scan the
/// depth-`|b|` partition of `X_{bᵐ}` for a surviving deviation.
pub fn find_cycle_deviation<F: Field>(
    g: &Graph,
    b: &Path,
    x_b: &DiagElement<F>,
) -> Result<(usize, Path, Path), IdealError> {
    if !b.is_closed(g) {
        return Err(IdealError::Precondition(format!(
            "`{}` is not a closed path",
            b.render(g)
        )));
    }
    if x_b.is_zero() {
        return Err(IdealError::ZeroInput);
    }
    if !x_b.in_domain(g, &Form::pos(g, b.clone())).map_err(SkewError::from)? {
        return Err(IdealError::Precondition(format!(
            "coefficient is not supported on X_{{{}}}",
            b.render(g)
        )));
    }
    let field = x_b.field().clone();
    let base = {
        let d = x_b.max_index_len();
        std::cmp::max(1, (d + b.len() - 1) / b.len())
    };
    let mut upper = base;
    let limit = base + b.len() + 1;
    loop {
        // largest power whose indicator still meets x_b
        let mut chosen = None;
        for m in (1..=upper).rev() {
            let power = b.repeat(g, m).expect("b is closed");
            let hit = x_b.mul(g, &DiagElement::basis(g, field.clone(), power.clone()));
            if !hit.is_zero() {
                chosen = Some((m, power));
                break;
            }
        }
        let (m, power) = match chosen {
            Some(p) => p,
            None => unreachable!("x_b·1_b = x_b ≠ 0 since x_b ∈ D_b"),
        };
        for cell in partition_basis(g, &power, b.len()) {
            let t = cell.strip_prefix(g, &power).expect("cell extends its root");
            if t.is_trivial() {
                continue; // the root itself can only appear at a sink, and s(b) is not one
            }
            let deviates = t.edges() != &b.edges()[..t.len()];
            if !deviates {
                continue;
            }
            let hit = x_b.mul(g, &DiagElement::basis(g, field.clone(), cell.clone()));
            if !hit.is_zero() {
                return Ok((m, t, cell));
            }
        }
        if upper < limit {
            upper += 1;
        } else {
            return Err(IdealError::ConditionLViolated(b.render(g)));
        }
    }
}

fn neg_part_len(p: &Form) -> usize {
    p.parts().map(|(_, b)| b.len()).unwrap_or(0)
}

/// Fiber reduction: turn any nonzero element into a nonzero element
/// supported on the zero fiber, recording every multiplier.
pub fn ideal_reduce<F: Field>(
    g: &Graph,
    x: &SkewElement<F>,
) -> Result<Certificate<F>, IdealError> {
    condition_l_or_err(g)?;
    if x.is_zero() {
        return Err(IdealError::ZeroInput);
    }
    let field = x.field().clone();
    let mut cert = Certificate::single(x.clone(), Vec::new(), x.clone());

    // Step 1: right-multiply by 1_{b_m}δ_{b_m} with |b_m| maximal among
    // the negative parts, so that only positive and neutral keys survive.
    let b_m = cert
        .claimed_result
        .fibers()
        .map(|(p, _)| p)
        .filter(|p| neg_part_len(p) > 0)
        .max_by(|p, q| {
            neg_part_len(p)
                .cmp(&neg_part_len(q))
                .then_with(|| q.parts().unwrap().1.cmp(p.parts().unwrap().1).reverse())
        })
        .map(|p| p.parts().unwrap().1.clone());
    if let Some(b_m) = b_m {
        let mult = SkewElement::indicator_delta(g, field.clone(), &Form::pos(g, b_m))?;
        cert.push_step(g, Side::Right, &mult)?;
        if cert.claimed_result.is_zero() {
            return Err(IdealError::StepAssertion(
                "step 1 annihilated the element".to_string(),
            ));
        }
    }
    if cert
        .claimed_result
        .fibers()
        .any(|(p, _)| neg_part_len(p) > 0)
    {
        return Err(IdealError::StepAssertion(
            "negative keys survive step 1".to_string(),
        ));
    }

    // Step 2: push the mass onto closed paths at one vertex and make the
    // zero fiber nonzero (pulling once if needed).
    let longest = cert
        .claimed_result
        .non_neutral_keys()
        .into_iter()
        .map(|p| p.parts().unwrap().0.clone())
        .max();
    if let Some(c_n) = longest {
        let w = c_n.range(g);
        let v = c_n.source();
        let left = SkewElement::from_diag(g, DiagElement::basis(g, field.clone(), c_n));
        cert.push_step(g, Side::Left, &left)?;
        let right = SkewElement::from_diag(g, DiagElement::vertex(g, field.clone(), w));
        cert.push_step(g, Side::Right, &right)?;
        let left_v = SkewElement::from_diag(g, DiagElement::vertex(g, field.clone(), v));
        cert.push_step(g, Side::Left, &left_v)?;
        if cert.claimed_result.is_zero() {
            return Err(IdealError::StepAssertion(
                "step 2 annihilated the element".to_string(),
            ));
        }
        let neutral_dead = cert
            .claimed_result
            .fiber(&Form::Neutral)
            .map(|f| f.is_zero())
            .unwrap_or(true);
        if neutral_dead {
            let c = cert
                .claimed_result
                .non_neutral_keys()
                .into_iter()
                .map(|p| p.parts().unwrap().0.clone())
                .min()
                .expect("a nonzero element with a dead zero fiber has other keys");
            let pull = SkewElement::indicator_delta(g, field.clone(), &Form::neg(g, c))?;
            cert.push_step(g, Side::Left, &pull)?;
            let still_dead = cert
                .claimed_result
                .fiber(&Form::Neutral)
                .map(|f| f.is_zero())
                .unwrap_or(true);
            if still_dead {
                return Err(IdealError::StepAssertion(
                    "pull failed to populate the zero fiber".to_string(),
                ));
            }
        }
        assert_step2_shape(g, &cert.claimed_result)?;
    }

    // Step 3: repeatedly kill the longest closed-path key, strictly
    // shrinking the number of non-neutral fibers.
    loop {
        let keys = cert.claimed_result.non_neutral_keys();
        if keys.is_empty() {
            break;
        }
        let before = keys.len();
        let b = keys
            .iter()
            .map(|p| p.parts().unwrap().0.clone())
            .max()
            .unwrap();
        let x_b = cert
            .claimed_result
            .fiber(&Form::pos(g, b.clone()))
            .expect("longest key has a fiber")
            .clone();
        let (m, t, _witness) = find_cycle_deviation(g, &b, &x_b)?;
        let b_m = b.repeat(g, m).expect("b is closed");
        let b_m1_t = b
            .repeat(g, m - 1)
            .expect("b is closed")
            .compose(g, &t)
            .expect("t starts at s(b)");
        let left = SkewElement::from_diag(g, DiagElement::basis(g, field.clone(), b_m));
        cert.push_step(g, Side::Left, &left)?;
        let right = SkewElement::from_diag(g, DiagElement::basis(g, field.clone(), b_m1_t));
        cert.push_step(g, Side::Right, &right)?;
        if cert.claimed_result.is_zero() {
            return Err(IdealError::StepAssertion(
                "step 3 annihilated the element".to_string(),
            ));
        }
        let neutral_dead = cert
            .claimed_result
            .fiber(&Form::Neutral)
            .map(|f| f.is_zero())
            .unwrap_or(true);
        if neutral_dead {
            let c = cert
                .claimed_result
                .non_neutral_keys()
                .into_iter()
                .map(|p| p.parts().unwrap().0.clone())
                .min()
                .expect("nonzero element");
            let pull = SkewElement::indicator_delta(g, field.clone(), &Form::neg(g, c))?;
            cert.push_step(g, Side::Left, &pull)?;
        }
        let after = cert.claimed_result.non_neutral_keys().len();
        if after >= before {
            return Err(IdealError::StepAssertion(format!(
                "step 3 did not shrink the fiber count ({before} -> {after})"
            )));
        }
    }

    if cert.claimed_result.fiber_count() != 1
        || cert.claimed_result.fiber(&Form::Neutral).is_none()
    {
        return Err(IdealError::StepAssertion(
            "reduction did not end on the zero fiber".to_string(),
        ));
    }
    Ok(cert)
}

/// The step-2 postcondition: all surviving keys are closed paths at one
/// vertex forming a prefix chain.
fn assert_step2_shape<F: Field>(g: &Graph, x: &SkewElement<F>) -> Result<(), IdealError> {
    let mut paths: Vec<Path> = x
        .non_neutral_keys()
        .into_iter()
        .map(|p| p.parts().unwrap().0.clone())
        .collect();
    paths.sort();
    for p in &paths {
        if !p.is_closed(g) {
            return Err(IdealError::StepAssertion(format!(
                "key `{}` is not closed after step 2",
                p.render(g)
            )));
        }
    }
    for pair in paths.windows(2) {
        if pair[0].source() != pair[1].source() || !pair[0].is_prefix_of(&pair[1]) {
            return Err(IdealError::StepAssertion(format!(
                "keys `{}`, `{}` do not form a prefix chain",
                pair[0].render(g),
                pair[1].render(g)
            )));
        }
    }
    Ok(())
}

/// From any nonzero element, manufacture `scalar·1_vδ_0` for some vertex
/// `v`: reduce to the zero fiber, cut with a partition cell on which the
/// coefficient collapses to a scalar, then conjugate down to the range
/// vertex.
pub fn extract_vertex_projection<F: Field>(
    g: &Graph,
    x: &SkewElement<F>,
) -> Result<(VertexId, Certificate<F>), IdealError> {
    let mut cert = ideal_reduce(g, x)?;
    let field = x.field().clone();
    let x0 = cert
        .claimed_result
        .fiber(&Form::Neutral)
        .expect("reduction ends on the zero fiber")
        .clone();
    let v = g
        .vertices()
        .find(|&v| !DiagElement::vertex(g, field.clone(), v).mul(g, &x0).is_zero())
        .expect("a nonzero diagonal element meets some vertex");
    let m = x0.max_index_len();
    if g.is_sink(v) || m == 0 {
        let left = SkewElement::from_diag(g, DiagElement::vertex(g, field.clone(), v));
        cert.push_step(g, Side::Left, &left)?;
        let expected_shape = DiagElement::vertex(g, field.clone(), v);
        let got = cert
            .claimed_result
            .fiber(&Form::Neutral)
            .cloned()
            .unwrap_or_else(|| DiagElement::zero(field.clone()));
        let scalar = scalar_multiple_of(g, &got, &expected_shape)
            .ok_or_else(|| IdealError::StepAssertion("vertex cut did not collapse to a scalar".to_string()))?;
        let _ = scalar;
        return Ok((v, cert));
    }
    let mut found = None;
    for c in partition_basis(g, &Path::trivial(v), m) {
        let cut = DiagElement::basis(g, field.clone(), c.clone()).mul(g, &x0);
        if !cut.is_zero() {
            let sigma = scalar_multiple_of(g, &cut, &DiagElement::basis(g, field.clone(), c.clone()))
                .ok_or_else(|| {
                    IdealError::StepAssertion(format!(
                        "1_{{{}}}·x₀ did not collapse to a scalar multiple",
                        c.render(g)
                    ))
                })?;
            found = Some((c, sigma));
            break;
        }
    }
    let (c, _sigma) = found.expect("the partition of X_v refines 1_v·x₀ ≠ 0");
    let left = SkewElement::from_diag(g, DiagElement::basis(g, field.clone(), c.clone()));
    cert.push_step(g, Side::Left, &left)?;
    let conj_l = SkewElement::indicator_delta(g, field.clone(), &Form::neg(g, c.clone()))?;
    cert.push_step(g, Side::Left, &conj_l)?;
    let conj_r = SkewElement::indicator_delta(g, field.clone(), &Form::pos(g, c.clone()))?;
    cert.push_step(g, Side::Right, &conj_r)?;
    let v_out = c.range(g);
    let shape = DiagElement::vertex(g, field.clone(), v_out);
    let got = cert
        .claimed_result
        .fiber(&Form::Neutral)
        .cloned()
        .unwrap_or_else(|| DiagElement::zero(field.clone()));
    if cert.claimed_result.fiber_count() != 1 || scalar_multiple_of(g, &got, &shape).is_none() {
        return Err(IdealError::StepAssertion(
            "conjugation did not produce a vertex projection".to_string(),
        ));
    }
    Ok((v_out, cert))
}

/// If `x = σ·y` for a single scalar σ ≠ 0, return σ.
fn scalar_multiple_of<F: Field>(
    g: &Graph,
    x: &DiagElement<F>,
    y: &DiagElement<F>,
) -> Option<F::Elem> {
    if x.is_zero() || y.is_zero() {
        return None;
    }
    let (_, first) = x.terms().next()?;
    let sigma = first.clone();
    let scaled = y.scale(&sigma);
    if &scaled == x {
        let _ = g;
        Some(sigma)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Hereditary(EdgeId),
    Saturation,
}

/// Move a certified vertex projection along an edge (hereditary) or
/// assemble one from all out-neighbors (saturation).
/// The returned certificate's sources are the projections it consumes.
pub fn propagate_projection<F: Field>(
    g: &Graph,
    field: F,
    v: VertexId,
    direction: Direction,
) -> Result<Certificate<F>, IdealError> {
    match direction {
        Direction::Hereditary(e) => {
            if g.src(e) != v {
                return Err(IdealError::Precondition(format!(
                    "edge `{}` does not start at `{}`",
                    g.edge_name(e),
                    g.vertex_name(v)
                )));
            }
            let source = SkewElement::from_diag(g, DiagElement::vertex(g, field.clone(), v));
            let mut cert = Certificate::single(source.clone(), Vec::new(), source);
            let fwd = SkewElement::indicator_delta(g, field.clone(), &Form::edge(g, e))?;
            cert.push_step(g, Side::Right, &fwd)?;
            let edge_path = Path::from_edges(g, &[e]).expect("edge path");
            let back = SkewElement::indicator_delta(g, field.clone(), &Form::neg(g, edge_path))?;
            cert.push_step(g, Side::Left, &back)?;
            let want = SkewElement::from_diag(g, DiagElement::vertex(g, field.clone(), g.dst(e)));
            if cert.claimed_result != want {
                return Err(IdealError::StepAssertion(
                    "hereditary move missed the target projection".to_string(),
                ));
            }
            Ok(cert)
        }
        Direction::Saturation => {
            let out = g.out_edges(v);
            if out.is_empty() {
                return Err(IdealError::Precondition(format!(
                    "`{}` is a sink; saturation needs an emitter",
                    g.vertex_name(v)
                )));
            }
            let mut chains = Vec::new();
            for &e in out {
                let r = g.dst(e);
                let source = SkewElement::from_diag(g, DiagElement::vertex(g, field.clone(), r));
                let fwd = SkewElement::indicator_delta(g, field.clone(), &Form::edge(g, e))?;
                let edge_path = Path::from_edges(g, &[e]).expect("edge path");
                let back =
                    SkewElement::indicator_delta(g, field.clone(), &Form::neg(g, edge_path))?;
                chains.push(Chain {
                    source,
                    steps: vec![(Side::Left, fwd), (Side::Right, back)],
                });
            }
            let claimed = SkewElement::from_diag(g, DiagElement::vertex(g, field.clone(), v));
            let cert = Certificate {
                chains,
                claimed_result: claimed,
            };
            if !verify_certificate(g, &cert) {
                return Err(IdealError::StepAssertion(
                    "saturation sum missed the vertex projection".to_string(),
                ));
            }
            Ok(cert)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityReport {
    pub condition_l: ConditionLVerdict,
    pub hs_subsets: Vec<BTreeSet<VertexId>>,
    pub criteria_met: bool,
}

/// The enumeration cap on hereditary-saturated subsets, overridable via
/// the `LPA_HS_CAP` environment variable.
pub fn default_hs_cap() -> usize {
    std::env::var("LPA_HS_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(16)
}

/// Simplicity holds when condition (L) holds and the only hereditary
/// saturated subsets are trivial.
pub fn simplicity_report(g: &Graph) -> Result<SimplicityReport, IdealError> {
    let verdict = condition_l(g);
    let subsets = enumerate_hs_subsets(g, default_hs_cap())?;
    let full: BTreeSet<VertexId> = g.vertices().collect();
    let trivial_only =
        subsets.len() == 2 && subsets[0].is_empty() && subsets[1] == full;
    let criteria_met = verdict.holds && trivial_only;
    Ok(SimplicityReport {
        condition_l: verdict,
        hs_subsets: subsets,
        criteria_met,
    })
}

/// One spanning-record row: a basis monomial with the certified vertex
/// projection that reproduces it by left multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanEntry<F: Field> {
    pub element: SkewElement<F>,
    pub vertex: VertexId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplicityDemo<F: Field> {
    pub certificates: BTreeMap<VertexId, Certificate<F>>,
    pub spanning: Vec<SpanEntry<F>>,
}

/// The simplicity demonstration pipeline: extract one vertex projection
/// from `x`, push it to every vertex through hereditary and saturation
/// moves, and record how the certified projections reach every basis
/// monomial `1_p1_qδ_q` up to the given word depth.
pub fn demonstrate_simplicity<F: Field>(
    g: &Graph,
    x: &SkewElement<F>,
    depth: usize,
) -> Result<SimplicityDemo<F>, IdealError> {
    let report = simplicity_report(g)?;
    if !report.criteria_met {
        let why = if !report.condition_l.holds {
            format!(
                "cycle `{}` has no exit",
                report.condition_l.witness.as_ref().unwrap().render(g)
            )
        } else {
            let nontrivial = report
                .hs_subsets
                .iter()
                .find(|s| !s.is_empty() && s.len() != g.vertex_count())
                .expect("criteria fail with (L) holding means a nontrivial subset");
            format!(
                "nontrivial hereditary saturated subset {{{}}}",
                nontrivial
                    .iter()
                    .map(|&v| g.vertex_name(v))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        };
        return Err(IdealError::CriteriaNotMet(why));
    }
    if x.is_zero() {
        return Err(IdealError::ZeroInput);
    }
    let field = x.field().clone();
    let (v0, mut cert) = extract_vertex_projection(g, x)?;
    // normalize the scalar so the claim is exactly 1_{v0}δ_0
    let sigma = cert
        .claimed_result
        .fiber(&Form::Neutral)
        .and_then(|f| f.terms().next().map(|(_, c)| c.clone()))
        .expect("extraction claims a scalar projection");
    let sigma_inv = field.inv(&sigma)?;
    let normalizer = SkewElement::from_diag(
        g,
        DiagElement::vertex(g, field.clone(), v0).scale(&sigma_inv),
    );
    cert.push_step(g, Side::Left, &normalizer)?;

    let mut certs: BTreeMap<VertexId, Certificate<F>> = BTreeMap::new();
    certs.insert(v0, cert);
    loop {
        let mut progressed = false;
        // hereditary: push certified projections forward along edges
        let known: Vec<VertexId> = certs.keys().copied().collect();
        for v in known {
            for &e in g.out_edges(v) {
                let r = g.dst(e);
                if certs.contains_key(&r) {
                    continue;
                }
                let mut moved = certs[&v].clone();
                let fwd = SkewElement::indicator_delta(g, field.clone(), &Form::edge(g, e))?;
                moved.push_step(g, Side::Right, &fwd)?;
                let edge_path = Path::from_edges(g, &[e]).expect("edge path");
                let back =
                    SkewElement::indicator_delta(g, field.clone(), &Form::neg(g, edge_path))?;
                moved.push_step(g, Side::Left, &back)?;
                certs.insert(r, moved);
                progressed = true;
            }
        }
        // saturation: assemble an emitter from fully certified targets
        for v in g.vertices() {
            if certs.contains_key(&v) || g.is_sink(v) {
                continue;
            }
            if !g.out_edges(v).iter().all(|&e| certs.contains_key(&g.dst(e))) {
                continue;
            }
            let mut chains = Vec::new();
            for &e in g.out_edges(v) {
                let inner = &certs[&g.dst(e)];
                let fwd = SkewElement::indicator_delta(g, field.clone(), &Form::edge(g, e))?;
                let edge_path = Path::from_edges(g, &[e]).expect("edge path");
                let back =
                    SkewElement::indicator_delta(g, field.clone(), &Form::neg(g, edge_path))?;
                for chain in &inner.chains {
                    let mut steps = chain.steps.clone();
                    steps.push((Side::Left, fwd.clone()));
                    steps.push((Side::Right, back.clone()));
                    chains.push(Chain {
                        source: chain.source.clone(),
                        steps,
                    });
                }
            }
            let claimed = SkewElement::from_diag(g, DiagElement::vertex(g, field.clone(), v));
            let cert = Certificate {
                chains,
                claimed_result: claimed,
            };
            if !verify_certificate(g, &cert) {
                return Err(IdealError::StepAssertion(format!(
                    "saturation at `{}` failed verification",
                    g.vertex_name(v)
                )));
            }
            certs.insert(v, cert);
            progressed = true;
        }
        if certs.len() == g.vertex_count() {
            break;
        }
        if !progressed {
            return Err(IdealError::StepAssertion(
                "projection propagation stalled before covering all vertices".to_string(),
            ));
        }
    }

    // spanning record: every basis monomial is recovered from a certified
    // projection by left multiplication
    let mut spanning = Vec::new();
    for q in enumerate_forms(g, depth) {
        for p in paths_up_to(g, depth) {
            let coeff = DiagElement::basis(g, field.clone(), p.clone())
                .mul(g, &crate::diag::indicator(g, field.clone(), &q).map_err(SkewError::from)?);
            if coeff.is_zero() {
                continue;
            }
            let element = SkewElement::monomial(g, q.clone(), coeff)?;
            let v = p.source();
            let proj = SkewElement::from_diag(g, DiagElement::vertex(g, field.clone(), v));
            let reproduced = proj.mul(g, &element)?;
            if reproduced != element {
                return Err(IdealError::StepAssertion(format!(
                    "projection at `{}` does not absorb `{}`",
                    g.vertex_name(v),
                    element.render(g)
                )));
            }
            spanning.push(SpanEntry { element, vertex: v });
        }
    }
    Ok(SimplicityDemo {
        certificates: certs,
        spanning,
    })
}

/// Exact rank of a list of coefficient vectors, by Gaussian elimination.
fn rank<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    let mut col = 0;
    while col < cols && rank < rows.len() {
        let pivot = (rank..rows.len()).find(|&r| !field.is_zero(&rows[r][col]));
        let Some(pivot) = pivot else {
            col += 1;
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field
            .inv(&rows[rank][col])
            .expect("pivot is nonzero");
        for c in col..cols {
            rows[rank][c] = field.mul(&rows[rank][c], &inv);
        }
        for r in 0..rows.len() {
            if r != rank && !field.is_zero(&rows[r][col]) {
                let factor = rows[r][col].clone();
                for c in col..cols {
                    let sub = field.mul(&rows[rank][c], &factor);
                    rows[r][c] = field.sub(&rows[r][c], &sub);
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Brute-force dimension of the image of φ for an acyclic graph: the rank
/// of the span of all monomials `ab*` with `r(a) = r(b)`, in coordinates
/// on a common refined basis. For an acyclic graph this equals
/// `Σ_{sinks w} n_w²` with `n_w` the number of paths ending at `w`.
pub fn acyclic_dimension(g: &Graph) -> Result<usize, IdealError> {
    if !is_acyclic(g) {
        let cycle = crate::graph::simple_cycles(g)
            .into_iter()
            .next()
            .expect("a non-acyclic graph has a simple cycle");
        return Err(IdealError::CycleFound(cycle.render(g)));
    }
    let field = crate::scalar::Rationals;
    let max_len = g.vertex_count(); // acyclic paths never repeat a vertex
    let mut paths: Vec<Path> = g.vertices().map(Path::trivial).collect();
    paths.extend(paths_up_to(g, max_len));
    let mut images = Vec::new();
    for a in &paths {
        for b in &paths {
            if a.range(g) != b.range(g) {
                continue;
            }
            let pos: SkewElement<crate::scalar::Rationals> = if a.is_trivial() {
                SkewElement::from_diag(g, DiagElement::vertex(g, field, a.source()))
            } else {
                SkewElement::indicator_delta(g, field, &Form::pos(g, a.clone()))?
            };
            let neg = if b.is_trivial() {
                SkewElement::from_diag(g, DiagElement::vertex(g, field, b.source()))
            } else {
                SkewElement::indicator_delta(g, field, &Form::neg(g, b.clone()))?
            };
            let image = pos.mul(g, &neg)?;
            if !image.is_zero() {
                images.push(image);
            }
        }
    }
    // global coordinates: (form, index refined to a common depth)
    let depth = images
        .iter()
        .flat_map(|x| x.fibers().map(|(_, d)| d.max_index_len()))
        .max()
        .unwrap_or(0);
    let mut columns: BTreeMap<(Form, Path), usize> = BTreeMap::new();
    let mut refined_images = Vec::new();
    for x in &images {
        let mut coords = Vec::new();
        for (p, d) in x.fibers() {
            let refined = d.refine_to_depth(g, depth);
            for (idx, c) in refined.terms() {
                let key = (p.clone(), idx.clone());
                let next = columns.len();
                let col = *columns.entry(key).or_insert(next);
                coords.push((col, c.clone()));
            }
        }
        refined_images.push(coords);
    }
    let width = columns.len();
    let rows: Vec<Vec<num::BigRational>> = refined_images
        .into_iter()
        .map(|coords| {
            let mut row = vec![Field::zero(&field); width];
            for (col, c) in coords {
                row[col] = c;
            }
            row
        })
        .collect();
    Ok(rank(&field, rows))
}

/// The closed-form value `Σ_{sinks w} n_w²`, used as the oracle against
/// the rank computation.
pub fn acyclic_dimension_formula(g: &Graph) -> Result<usize, IdealError> {
    if !is_acyclic(g) {
        let cycle = crate::graph::simple_cycles(g)
            .into_iter()
            .next()
            .expect("a non-acyclic graph has a simple cycle");
        return Err(IdealError::CycleFound(cycle.render(g)));
    }
    let counts = paths_ending_at(g);
    Ok(g.sinks()
        .into_iter()
        .map(|w| {
            let n = counts.get(&w).copied().unwrap_or(1);
            n * n
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::front::phi_of_text;
    use crate::scalar::Rationals;

    fn basis_diag(g: &Graph, names: &[&str]) -> DiagElement<Rationals> {
        let path = Path::from_edge_names(g, names).unwrap().unwrap();
        DiagElement::basis(g, Rationals, path)
    }

    #[test]
    fn deviation_search_on_t_graph() {
        let t = catalog::t_graph();
        let b = Path::from_edge_names(&t, &["g"]).unwrap().unwrap();
        let x_b = basis_diag(&t, &["g"]);
        let (m, tee, witness) = find_cycle_deviation(&t, &b, &x_b).unwrap();
        assert_eq!(m, 1);
        assert_eq!(tee.render(&t), "h");
        assert_eq!(witness.render(&t), "g h");
        // oracle: the found witness really survives
        assert!(!x_b
            .mul(&t, &DiagElement::basis(&t, Rationals, witness))
            .is_zero());
    }

    #[test]
    fn deviation_search_scans_past_killed_powers() {
        let t = catalog::t_graph();
        let b = Path::from_edge_names(&t, &["g"]).unwrap().unwrap();
        let x_b = basis_diag(&t, &["g"]).sub(&t, &basis_diag(&t, &["g", "g"]));
        // x_b·1_{gg} = 0, so the search must deviate at m = 1
        assert!(x_b
            .mul(&t, &basis_diag(&t, &["g", "g"]))
            .is_zero());
        let (m, tee, _) = find_cycle_deviation(&t, &b, &x_b).unwrap();
        assert_eq!((m, tee.render(&t)), (1, "h".to_string()));
    }

    #[test]
    fn deviation_search_fails_without_condition_l() {
        let g = catalog::single_loop();
        let b = Path::from_edge_names(&g, &["g"]).unwrap().unwrap();
        let x_b = basis_diag(&g, &["g"]);
        assert!(matches!(
            find_cycle_deviation(&g, &b, &x_b),
            Err(IdealError::ConditionLViolated(_))
        ));
    }

    #[test]
    fn reduce_monomial_to_zero_fiber() {
        let r2 = catalog::r2();
        let x = phi_of_text(&r2, Rationals, "e").unwrap();
        let cert = ideal_reduce(&r2, &x).unwrap();
        assert!(verify_certificate(&r2, &cert));
        assert_eq!(cert.claimed_result.render(&r2), "[1*[v]]·δ(0)");
    }

    #[test]
    fn reduce_identity_on_zero_fiber_input() {
        let r2 = catalog::r2();
        let x = phi_of_text(&r2, Rationals, "v").unwrap();
        let cert = ideal_reduce(&r2, &x).unwrap();
        assert!(cert.chains[0].steps.is_empty());
        assert_eq!(cert.claimed_result, x);
    }

    #[test]
    fn reduce_mixed_monomial() {
        let r2 = catalog::r2();
        let x = phi_of_text(&r2, Rationals, "e f*").unwrap();
        let cert = ideal_reduce(&r2, &x).unwrap();
        assert!(verify_certificate(&r2, &cert));
        assert_eq!(cert.claimed_result.render(&r2), "[1*[v]]·δ(0)");
        // step 1 multiplies by 1_fδ_f on the right
        let first = &cert.chains[0].steps[0];
        assert_eq!(first.0, Side::Right);
        assert_eq!(first.1.render(&r2), "[1*[f]]·δ(f)");
    }

    #[test]
    fn reduce_rejects_zero_and_condition_l_failures() {
        let r2 = catalog::r2();
        assert!(matches!(
            ideal_reduce(&r2, &SkewElement::zero(Rationals)),
            Err(IdealError::ZeroInput)
        ));
        let sl = catalog::single_loop();
        let x = phi_of_text(&sl, Rationals, "g").unwrap();
        assert!(matches!(
            ideal_reduce(&sl, &x),
            Err(IdealError::ConditionLViolated(_))
        ));
    }

    #[test]
    fn extract_on_neutral_inputs() {
        let r2 = catalog::r2();
        let v = r2.vertex_by_name("v").unwrap();
        // x₀ = 1_e: conjugate through c = e
        let x = SkewElement::from_diag(&r2, basis_diag(&r2, &["e"]));
        let (got, cert) = extract_vertex_projection(&r2, &x).unwrap();
        assert_eq!(got, v);
        assert!(verify_certificate(&r2, &cert));
        assert_eq!(cert.claimed_result.render(&r2), "[1*[v]]·δ(0)");

        // sink branch on A2
        let a2 = catalog::a2();
        let v2 = a2.vertex_by_name("v2").unwrap();
        let x = SkewElement::from_diag(
            &a2,
            DiagElement::vertex(&a2, Rationals, v2),
        );
        let (got, cert) = extract_vertex_projection(&a2, &x).unwrap();
        assert_eq!(got, v2);
        assert!(verify_certificate(&a2, &cert));
        assert_eq!(cert.claimed_result.render(&a2), "[1*[v2]]·δ(0)");

        // depth-2 scan: x₀ = 1_e − 1_{ef}
        let r2 = catalog::r2();
        let x0 = basis_diag(&r2, &["e"]).sub(&r2, &basis_diag(&r2, &["e", "f"]));
        let x = SkewElement::from_diag(&r2, x0);
        let (got, cert) = extract_vertex_projection(&r2, &x).unwrap();
        assert_eq!(got, v);
        assert!(verify_certificate(&r2, &cert));
        assert_eq!(cert.claimed_result.render(&r2), "[1*[v]]·δ(0)");
    }

    #[test]
    fn propagate_hereditary_and_saturation_on_a2() {
        let a2 = catalog::a2();
        let v1 = a2.vertex_by_name("v1").unwrap();
        let e = a2.edge_by_name("e").unwrap();
        let cert = propagate_projection(&a2, Rationals, v1, Direction::Hereditary(e)).unwrap();
        assert!(verify_certificate(&a2, &cert));
        assert_eq!(cert.claimed_result.render(&a2), "[1*[v2]]·δ(0)");

        let cert = propagate_projection(&a2, Rationals, v1, Direction::Saturation).unwrap();
        assert!(verify_certificate(&a2, &cert));
        assert_eq!(cert.claimed_result.render(&a2), "[1*[v1]]·δ(0)");
    }

    #[test]
    fn saturation_on_r2_merges_loops() {
        let r2 = catalog::r2();
        let v = r2.vertex_by_name("v").unwrap();
        let cert = propagate_projection(&r2, Rationals, v, Direction::Saturation).unwrap();
        assert_eq!(cert.chains.len(), 2);
        assert!(verify_certificate(&r2, &cert));
        assert_eq!(cert.claimed_result.render(&r2), "[1*[v]]·δ(0)");
    }

    #[test]
    fn simplicity_reports_on_catalog() {
        let report = simplicity_report(&catalog::r2()).unwrap();
        assert!(report.criteria_met);

        let report = simplicity_report(&catalog::single_loop()).unwrap();
        assert!(!report.criteria_met);
        assert!(!report.condition_l.holds);
        assert!(report.condition_l.witness.is_some());

        let t = catalog::t_graph();
        let report = simplicity_report(&t).unwrap();
        assert!(!report.criteria_met);
        let w = t.vertex_by_name("w").unwrap();
        assert!(report.hs_subsets.iter().any(|s| s.len() == 1 && s.contains(&w)));
    }

    #[test]
    fn demonstrate_simplicity_on_r2() {
        let r2 = catalog::r2();
        let x = phi_of_text(&r2, Rationals, "e").unwrap();
        let demo = demonstrate_simplicity(&r2, &x, 2).unwrap();
        assert_eq!(demo.certificates.len(), 1);
        for cert in demo.certificates.values() {
            assert!(verify_certificate(&r2, cert));
        }
        assert!(!demo.spanning.is_empty());
    }

    #[test]
    fn demonstrate_simplicity_on_a2_covers_both_vertices() {
        let a2 = catalog::a2();
        let x = phi_of_text(&a2, Rationals, "e").unwrap();
        let demo = demonstrate_simplicity(&a2, &x, 1).unwrap();
        assert_eq!(demo.certificates.len(), 2);
        for (v, cert) in &demo.certificates {
            assert!(verify_certificate(&a2, cert));
            assert_eq!(
                cert.claimed_result.render(&a2),
                format!("[1*[{}]]·δ(0)", a2.vertex_name(*v))
            );
        }
    }

    #[test]
    fn demonstrate_simplicity_refuses_single_loop() {
        let sl = catalog::single_loop();
        let x = phi_of_text(&sl, Rationals, "g").unwrap();
        assert!(matches!(
            demonstrate_simplicity(&sl, &x, 2),
            Err(IdealError::CriteriaNotMet(_))
        ));
    }

    #[test]
    fn verify_rejects_tampered_certificates() {
        let r2 = catalog::r2();
        let x = phi_of_text(&r2, Rationals, "e f*").unwrap();
        let mut cert = ideal_reduce(&r2, &x).unwrap();
        assert!(verify_certificate(&r2, &cert));
        // alter one multiplier
        let bogus = phi_of_text(&r2, Rationals, "e").unwrap();
        cert.chains[0].steps[0].1 = bogus;
        assert!(!verify_certificate(&r2, &cert));
    }

    #[test]
    fn identity_certificate_verifies() {
        let r2 = catalog::r2();
        let x = phi_of_text(&r2, Rationals, "v").unwrap();
        let cert = Certificate::single(x.clone(), Vec::new(), x);
        assert!(verify_certificate(&r2, &cert));
    }

    #[test]
    fn certificate_json_round_trip() {
        let r2 = catalog::r2();
        let x = phi_of_text(&r2, Rationals, "e f*").unwrap();
        let cert = ideal_reduce(&r2, &x).unwrap();
        let j = certificate_to_json(&r2, &cert);
        assert!(j.get("source").is_some());
        let back = certificate_from_json(&r2, Rationals, &j).unwrap();
        assert!(verify_certificate(&r2, &back));
        assert_eq!(back.claimed_result, cert.claimed_result);
    }

    #[test]
    fn multi_chain_json_round_trip() {
        let r2 = catalog::r2();
        let v = r2.vertex_by_name("v").unwrap();
        let cert = propagate_projection(&r2, Rationals, v, Direction::Saturation).unwrap();
        let j = certificate_to_json(&r2, &cert);
        assert!(j.get("chains").is_some());
        let back = certificate_from_json(&r2, Rationals, &j).unwrap();
        assert!(verify_certificate(&r2, &back));
    }

    #[test]
    fn dimensions_of_acyclic_catalog() {
        assert_eq!(acyclic_dimension(&catalog::a2()).unwrap(), 4);
        assert_eq!(acyclic_dimension(&catalog::a3()).unwrap(), 9);
        let point = Graph::from_parts(&["v"], &[]).unwrap();
        assert_eq!(acyclic_dimension(&point).unwrap(), 1);
        // oracle agreement
        assert_eq!(acyclic_dimension_formula(&catalog::a2()).unwrap(), 4);
        assert_eq!(acyclic_dimension_formula(&catalog::a3()).unwrap(), 9);
        assert_eq!(acyclic_dimension_formula(&point).unwrap(), 1);
    }

    #[test]
    fn dimension_rejects_cycles() {
        assert!(matches!(
            acyclic_dimension(&catalog::r2()),
            Err(IdealError::CycleFound(_))
        ));
    }
}
