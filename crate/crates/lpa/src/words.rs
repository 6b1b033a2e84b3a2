//! Reduced words of the free group on the edge set, classified into the
//! admissible shapes: the neutral element, a positive path `a`, an inverse
//! path `b⁻¹`, a mixed word `ab⁻¹` with `r(a) = r(b)`, or the null class
//! whose associated point set is empty.

use std::cmp::Ordering;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, Path};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("operation applied to a null word `{0}`")]
    NullForm(String),
}

/// A single group letter: an edge or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub edge: EdgeId,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(edge: EdgeId) -> Letter {
        Letter { edge, inverse: false }
    }
    pub fn inv(edge: EdgeId) -> Letter {
        Letter { edge, inverse: true }
    }
    pub fn inverted(self) -> Letter {
        Letter {
            edge: self.edge,
            inverse: !self.inverse,
        }
    }
}

/// Free reduction: cancel adjacent `x x⁻¹` and `x⁻¹ x`.
pub fn reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverted()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// A reduced free-group word classified by shape. Every non-neutral
/// admissible form is stored as a pair `(a, b)` of paths with
/// `r(a) = r(b)`, at most one of them trivial: `a` covers positive words,
/// `b⁻¹` inverse words, and `ab⁻¹` the mixed shape. `Null` retains its
/// reduced word for diagnostics; its point set is empty and the algebra
/// treats it as carrying the zero ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Form {
    Neutral,
    Proper { a: Path, b: Path },
    Null(Vec<Letter>),
}

impl Form {
    pub fn pos(g: &Graph, a: Path) -> Form {
        assert!(!a.is_trivial());
        let b = Path::trivial(a.range(g));
        Form::Proper { a, b }
    }

    pub fn neg(g: &Graph, b: Path) -> Form {
        assert!(!b.is_trivial());
        let a = Path::trivial(b.range(g));
        Form::Proper { a, b }
    }

    pub fn mixed(g: &Graph, a: Path, b: Path) -> Option<Form> {
        if a.is_trivial() && b.is_trivial() {
            return None;
        }
        if a.range(g) != b.range(g) {
            return None;
        }
        if let (Some(&la), Some(&lb)) = (a.edges().last(), b.edges().last()) {
            if la == lb {
                return None; // not reduced
            }
        }
        Some(Form::Proper { a, b })
    }

    pub fn edge(g: &Graph, e: EdgeId) -> Form {
        Form::pos(
            g,
            Path::from_edges(g, &[e]).expect("single edge is a path"),
        )
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Form::Null(_))
    }

    pub fn is_neutral(&self) -> bool {
        matches!(self, Form::Neutral)
    }

    /// The unified path pair; `None` for neutral and null forms.
    pub fn parts(&self) -> Option<(&Path, &Path)> {
        match self {
            Form::Proper { a, b } => Some((a, b)),
            _ => None,
        }
    }

    /// The underlying reduced word.
    pub fn word(&self) -> Vec<Letter> {
        match self {
            Form::Neutral => Vec::new(),
            Form::Null(w) => w.clone(),
            Form::Proper { a, b } => {
                let mut w: Vec<Letter> = a.edges().iter().map(|&e| Letter::pos(e)).collect();
                w.extend(b.edges().iter().rev().map(|&e| Letter::inv(e)));
                w
            }
        }
    }

    pub fn render(&self, g: &Graph) -> String {
        let word = self.word();
        if word.is_empty() {
            return "0".to_string();
        }
        word.iter()
            .map(|l| {
                if l.inverse {
                    format!("{}~", g.edge_name(l.edge))
                } else {
                    g.edge_name(l.edge).to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

// Deterministic key order for skew-ring fibers: by grading degree, then
// lexicographically on the reduced word. Null forms sort last; they never
// appear as fiber keys.
impl Ord for Form {
    fn cmp(&self, other: &Self) -> Ordering {
        let rank = |f: &Form| matches!(f, Form::Null(_)) as u8;
        rank(self)
            .cmp(&rank(other))
            .then_with(|| grade(self).unwrap_or(0).cmp(&grade(other).unwrap_or(0)))
            .then_with(|| self.word().cmp(&other.word()))
    }
}

impl PartialOrd for Form {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Free reduction followed by shape classification.
pub fn classify(g: &Graph, word: &[Letter]) -> Form {
    let reduced = reduce(word);
    if reduced.is_empty() {
        return Form::Neutral;
    }
    // admissible words are positives followed by inverses
    let split = reduced.iter().position(|l| l.inverse).unwrap_or(reduced.len());
    if reduced[split..].iter().any(|l| !l.inverse) {
        return Form::Null(reduced);
    }
    let pos_edges: Vec<EdgeId> = reduced[..split].iter().map(|l| l.edge).collect();
    let neg_edges: Vec<EdgeId> = reduced[split..].iter().rev().map(|l| l.edge).collect();
    let a = if pos_edges.is_empty() {
        None
    } else {
        match Path::from_edges(g, &pos_edges) {
            Some(p) => Some(p),
            None => return Form::Null(reduced),
        }
    };
    let b = if neg_edges.is_empty() {
        None
    } else {
        match Path::from_edges(g, &neg_edges) {
            Some(p) => Some(p),
            None => return Form::Null(reduced),
        }
    };
    match (a, b) {
        (Some(a), Some(b)) => match Form::mixed(g, a, b) {
            Some(f) => f,
            None => Form::Null(reduced),
        },
        (Some(a), None) => Form::pos(g, a),
        (None, Some(b)) => Form::neg(g, b),
        (None, None) => unreachable!("reduced word is nonempty"),
    }
}

/// The group product; `Null` is a legal return value.
pub fn compose(g: &Graph, p: &Form, q: &Form) -> Result<Form, WordError> {
    require_non_null(g, p)?;
    require_non_null(g, q)?;
    let mut w = p.word();
    w.extend(q.word());
    Ok(classify(g, &w))
}

pub fn invert(g: &Graph, p: &Form) -> Result<Form, WordError> {
    require_non_null(g, p)?;
    Ok(match p {
        Form::Neutral => Form::Neutral,
        Form::Proper { a, b } => Form::Proper {
            a: b.clone(),
            b: a.clone(),
        },
        Form::Null(_) => unreachable!(),
    })
}

/// The grading degree `|p| = m − n`: generators minus inverses.
pub fn grade(p: &Form) -> Result<i64, WordError> {
    match p {
        Form::Neutral => Ok(0),
        Form::Proper { a, b } => Ok(a.len() as i64 - b.len() as i64),
        Form::Null(w) => Err(WordError::NullForm(format!("{w:?}"))),
    }
}

fn require_non_null(g: &Graph, p: &Form) -> Result<(), WordError> {
    if p.is_null() {
        Err(WordError::NullForm(p.render(g)))
    } else {
        Ok(())
    }
}

/// Parse the CLI word grammar: edge ids juxtaposed, inverse marked by a
/// postfix `~`, e.g. `e f~` for `ef⁻¹`.
pub fn parse_word(g: &Graph, text: &str) -> Result<Vec<Letter>, WordError> {
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        let (name, inverse) = match token.strip_suffix('~') {
            Some(base) => (base, true),
            None => (token, false),
        };
        let edge = g.edge_by_name(name)?;
        out.push(Letter { edge, inverse });
    }
    Ok(out)
}

/// All non-null forms of reduced word length ≤ `max_len`, canonical order.
/// Built from path pairs `(a, b)` with a common range.
pub fn enumerate_forms(g: &Graph, max_len: usize) -> Vec<Form> {
    let mut out = vec![Form::Neutral];
    let mut halves: Vec<Option<Path>> = vec![None];
    for p in crate::graph::paths_up_to(g, max_len) {
        halves.push(Some(p));
    }
    for a in &halves {
        for b in &halves {
            let total = a.as_ref().map_or(0, |p| p.len()) + b.as_ref().map_or(0, |p| p.len());
            if total == 0 || total > max_len {
                continue;
            }
            let form = match (a, b) {
                (Some(a), Some(b)) => Form::mixed(g, a.clone(), b.clone()),
                (Some(a), None) => Some(Form::pos(g, a.clone())),
                (None, Some(b)) => Some(Form::neg(g, b.clone())),
                (None, None) => None,
            };
            if let Some(f) = form {
                out.push(f);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
