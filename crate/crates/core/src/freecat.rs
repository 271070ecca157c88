//! Graphs, free categories and their linearizations, generating-graph
//! checks, and matrix graphs over a graded generator set.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Elem, FinAbGroup, Ring, Subgroup};
use crate::trackcat::{Comp, HomotopyCategory, TrackCategory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeCatError {
    #[error("edge {edge} has endpoint {vertex} outside 0..{vertices}")]
    Endpoint {
        edge: usize,
        vertex: usize,
        vertices: usize,
    },
    #[error("words are not composable: {0} ends at {1}, {2} starts at {3}")]
    NotComposable(String, usize, String, usize),
    #[error("combinations live in different hom sets or rings")]
    Mismatch,
    #[error("entry ({row},{col}) needs degree {needed}, generator {generator} has degree {found}")]
    DegreeMismatch {
        row: usize,
        col: usize,
        generator: String,
        needed: i64,
        found: i64,
    },
    #[error("lift of edge {0} is not a 0-cell of the right hom")]
    BadLift(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    vertices: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<Edge>) -> Result<Self, FreeCatError> {
        for (i, e) in edges.iter().enumerate() {
            for v in [e.source, e.target] {
                if v >= vertices {
                    return Err(FreeCatError::Endpoint {
                        edge: i,
                        vertex: v,
                        vertices,
                    });
                }
            }
        }
        Ok(Graph { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// All words `a -> b` of length at most `max_len`, in word order.
    pub fn words(&self, a: usize, b: usize, max_len: usize) -> Vec<Word> {
        let mut out = vec![];
        let mut layer = vec![Word::identity(a)];
        for _ in 0..=max_len {
            out.extend(layer.iter().filter(|w| w.target == b).cloned());
            let mut next = vec![];
            for w in &layer {
                for (i, e) in self.edges.iter().enumerate() {
                    if e.source == w.target {
                        let mut edges = w.edges.clone();
                        edges.push(i);
                        next.push(Word {
                            source: a,
                            target: e.target,
                            edges,
                        });
                    }
                }
            }
            layer = next;
        }
        out.sort();
        out
    }
}

/// A path in a graph. Edges are listed in the order they are traversed,
/// so `edges[0]` starts at `source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub source: usize,
    pub target: usize,
    pub edges: Vec<usize>,
}

impl Word {
    pub fn identity(a: usize) -> Self {
        Word {
            source: a,
            target: a,
            edges: vec![],
        }
    }

    pub fn edge(g: &Graph, e: usize) -> Self {
        Word {
            source: g.edges[e].source,
            target: g.edges[e].target,
            edges: vec![e],
        }
    }

    pub fn from_edges(g: &Graph, source: usize, edges: Vec<usize>) -> Result<Self, FreeCatError> {
        let mut at = source;
        for &e in &edges {
            if g.edges[e].source != at {
                return Err(FreeCatError::NotComposable(
                    format!("path to {at}"),
                    at,
                    g.edges[e].name.clone(),
                    g.edges[e].source,
                ));
            }
            at = g.edges[e].target;
        }
        Ok(Word {
            source,
            target: at,
            edges,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_identity(&self) -> bool {
        self.edges.is_empty()
    }

    /// `self ∘ w`: first `w`, then `self`.
    pub fn after(&self, w: &Word) -> Result<Word, FreeCatError> {
        if w.target != self.source {
            return Err(FreeCatError::NotComposable(
                format!("{w}"),
                w.target,
                format!("{self}"),
                self.source,
            ));
        }
        let mut edges = w.edges.clone();
        edges.extend(&self.edges);
        Ok(Word {
            source: w.source,
            target: self.target,
            edges,
        })
    }

    pub fn display<'g>(&'g self, g: &'g Graph) -> impl fmt::Display + 'g {
        struct D<'g>(&'g Word, &'g Graph);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.edges.is_empty() {
                    return write!(f, "1_{}", self.0.source);
                }
                // written as a composite: last edge leftmost
                let names: Vec<_> = self.0.edges.iter().rev().map(|&e| self.1.edges[e].name.as_str()).collect();
                write!(f, "{}", names.join("·"))
            }
        }
        D(self, g)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}{:?}", self.source, self.target, self.edges)
    }
}

/// Length first, then lexicographic on edge ids, then endpoints.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges
            .len()
            .cmp(&other.edges.len())
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.source.cmp(&other.source))
            .then_with(|| self.target.cmp(&other.target))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A linear combination of parallel words, kept in normal form: reduced
/// nonzero coefficients, terms sorted by word order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinComb {
    pub ring: Ring,
    pub source: usize,
    pub target: usize,
    terms: Vec<(Word, i64)>,
}

impl LinComb {
    pub fn zero(ring: Ring, source: usize, target: usize) -> Self {
        LinComb {
            ring,
            source,
            target,
            terms: vec![],
        }
    }

    pub fn word(ring: Ring, w: Word) -> Self {
        Self::from_terms(ring, w.source, w.target, vec![(w, 1)])
    }

    /// Normalizes arbitrary terms. Panics if a word is not parallel to
    /// `source -> target`.
    pub fn from_terms(ring: Ring, source: usize, target: usize, terms: Vec<(Word, i64)>) -> Self {
        let mut terms: Vec<(Word, i64)> = terms;
        assert!(
            terms.iter().all(|(w, _)| w.source == source && w.target == target),
            "terms are not parallel to {source}->{target}"
        );
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Word, i64)> = vec![];
        for (w, c) in terms {
            match out.last_mut() {
                Some((v, d)) if *v == w => *d = ring.reduce(*d + c),
                _ => out.push((w, ring.reduce(c))),
            }
        }
        out.retain(|(_, c)| *c != 0);
        LinComb {
            ring,
            source,
            target,
            terms: out,
        }
    }

    pub fn terms(&self) -> &[(Word, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.terms.iter().map(|(w, _)| w.len()).max().unwrap_or(0)
    }

    fn check_parallel(&self, other: &Self) -> Result<(), FreeCatError> {
        if self.ring != other.ring || self.source != other.source || self.target != other.target {
            return Err(FreeCatError::Mismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, FreeCatError> {
        self.check_parallel(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::from_terms(self.ring, self.source, self.target, terms))
    }

    pub fn scale(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect();
        Self::from_terms(self.ring, self.source, self.target, terms)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FreeCatError> {
        self.add(&other.neg())
    }

    /// Bilinear extension of `self ∘ x`.
    pub fn after(&self, x: &Self) -> Result<Self, FreeCatError> {
        if self.ring != x.ring || x.target != self.source {
            return Err(FreeCatError::Mismatch);
        }
        let mut terms = vec![];
        for (v, c) in &self.terms {
            for (w, d) in &x.terms {
                terms.push((v.after(w)?, c * d));
            }
        }
        Ok(Self::from_terms(self.ring, x.source, self.target, terms))
    }
}

/// Free category on a graph with hom sets `R·Mon(E)`.
#[derive(Clone, Debug)]
pub struct Linearized {
    pub graph: Graph,
    pub ring: Ring,
}

impl Linearized {
    pub fn new(graph: Graph, ring: Ring) -> Self {
        Linearized { graph, ring }
    }

    pub fn identity(&self, a: usize) -> LinComb {
        LinComb::word(self.ring, Word::identity(a))
    }

    pub fn edge(&self, e: usize) -> LinComb {
        LinComb::word(self.ring, Word::edge(&self.graph, e))
    }

    pub fn compose(&self, y: &LinComb, x: &LinComb) -> Result<LinComb, FreeCatError> {
        y.after(x)
    }

    /// Every combination `a -> b` of words of length at most `max_len`
    /// with coefficients in `coeffs`. Intended for small cases only.
    pub fn combinations(&self, a: usize, b: usize, max_len: usize, coeffs: &[i64]) -> Vec<LinComb> {
        let words = self.graph.words(a, b, max_len);
        let mut out = vec![LinComb::zero(self.ring, a, b)];
        for w in words {
            let mut next = vec![];
            for x in &out {
                for &c in coeffs {
                    let mut terms = x.terms.clone();
                    terms.push((w.clone(), c));
                    next.push(LinComb::from_terms(self.ring, a, b, terms));
                }
            }
            out = next;
        }
        out.sort_by(|x, y| x.terms.cmp(&y.terms));
        out.dedup();
        out
    }
}

/// Generating-graph verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Generating {
    Yes { saturated_at: usize },
    No { source: usize, target: usize, unreached: Elem },
    Indeterminate { max_len: usize },
}

/// Does the linear functor `R·Mon(E) -> H0 T` given by the classes of
/// `lifts` hit every class? Spans of images of words of length `≤ L` are
/// grown one edge at a time until they stop changing.
pub fn check_generating(
    t: &dyn TrackCategory,
    graph: &Graph,
    lifts: &[Elem],
    max_len: usize,
) -> Result<Generating, FreeCatError> {
    let h = HomotopyCategory::new(t);
    let n = t.num_objects();
    let mut classes = vec![];
    for (i, e) in graph.edges().iter().enumerate() {
        if lifts.len() <= i || !t.hom(e.source, e.target).c0().contains(&lifts[i]) {
            return Err(FreeCatError::BadLift(e.name.clone()));
        }
        classes.push(h.class_of(e.source, e.target, &lifts[i]));
    }
    let span = |a: usize, b: usize, gens: &[Elem]| -> Subgroup {
        let g: &FinAbGroup = h.classes(a, b);
        Subgroup::generated(g, gens.iter().map(|v| v.iter().map(|&c| c as i128).collect()).collect())
    };
    // gens[a][b]: generators of the span of word images a -> b
    let mut gens: Vec<Vec<Vec<Elem>>> = vec![vec![vec![]; n]; n];
    for a in 0..n {
        gens[a][a].push(h.class_of(a, a, &t.unit(a)));
    }
    let mut orders: Vec<Vec<u128>> = (0..n)
        .map(|a| (0..n).map(|b| span(a, b, &gens[a][b]).group.order()).collect())
        .collect();
    for step in 1..=max_len + 1 {
        let mut next = gens.clone();
        for a in 0..n {
            for b in 0..n {
                for g in &gens[a][b] {
                    for (i, e) in graph.edges().iter().enumerate().filter(|(_, e)| e.source == b) {
                        next[a][e.target].push(h.compose(Comp::new(a, b, e.target), &classes[i], g));
                    }
                }
            }
        }
        let mut grew = false;
        for a in 0..n {
            for b in 0..n {
                let s = span(a, b, &next[a][b]);
                // keep a small generating set
                next[a][b] = (0..s.group.rank())
                    .map(|k| s.embedding.apply(&s.group.generator(k)))
                    .collect();
                let o = s.group.order();
                grew |= o != orders[a][b];
                orders[a][b] = o;
            }
        }
        gens = next;
        if !grew {
            for a in 0..n {
                for b in 0..n {
                    let s = span(a, b, &gens[a][b]);
                    if s.group.order() != h.classes(a, b).order() {
                        let unreached = h
                            .classes(a, b)
                            .enumerate()
                            .expect("finite homotopy classes")
                            .find(|x| s.coords_of(x).is_none())
                            .expect("proper subgroup misses an element");
                        return Ok(Generating::No {
                            source: a,
                            target: b,
                            unreached,
                        });
                    }
                }
            }
            return Ok(Generating::Yes { saturated_at: step - 1 });
        }
    }
    Ok(Generating::Indeterminate { max_len })
}

/// A generator of a graded algebra, used to build matrix graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedGenerator {
    pub name: String,
    pub degree: i64,
}

/// One summand `sh^{shift} rep(generator) ∘ proj_column` of a coordinate
/// of a lifted matrix edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftTerm {
    pub generator: usize,
    pub shift: i64,
    pub column: usize,
}

/// Row `i` lists the summands of the `i`-th coordinate map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftTemplate {
    pub rows: Vec<Vec<LiftTerm>>,
}

/// Where a lift template is realized.
pub trait MatrixTarget {
    type Map;
    /// The chosen representative of `generator` shifted by `shift`.
    fn generator(&self, generator: usize, shift: i64) -> Self::Map;
    /// Projection of the product `source` onto factor `j`.
    fn projection(&self, source: &[i64], j: usize) -> Self::Map;
    fn compose(&self, after: &Self::Map, before: &Self::Map) -> Self::Map;
    fn add(&self, x: &Self::Map, y: &Self::Map) -> Self::Map;
    fn zero(&self, source: &[i64], target: i64) -> Self::Map;
    /// The map into the product `target` with the given coordinates.
    fn tuple(&self, source: &[i64], target: &[i64], coords: Vec<Self::Map>) -> Self::Map;
}

impl LiftTemplate {
    pub fn realize<M: MatrixTarget>(&self, m: &M, source: &[i64], target: &[i64]) -> M::Map {
        let coords = self
            .rows
            .iter()
            .zip(target)
            .map(|(row, &ni)| {
                row.iter().fold(m.zero(source, ni), |acc, term| {
                    let g = m.generator(term.generator, term.shift);
                    let f = m.compose(&g, &m.projection(source, term.column));
                    m.add(&acc, &f)
                })
            })
            .collect();
        m.tuple(source, target, coords)
    }
}

/// An edge `∏_j Σ^{m_j} -> ∏_i Σ^{n_i}` given by a matrix of generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixEdge {
    pub source: usize,
    pub target: usize,
    /// `entries[i][j]` is a generator index.
    pub entries: Vec<Vec<usize>>,
    pub lift: LiftTemplate,
}

/// Checks degrees and builds the lift template of one matrix edge.
pub fn matrix_edge(
    gens: &[GradedGenerator],
    vertices: &[Vec<i64>],
    source: usize,
    target: usize,
    entries: Vec<Vec<usize>>,
) -> Result<MatrixEdge, FreeCatError> {
    let (ms, ns) = (&vertices[source], &vertices[target]);
    if entries.len() != ns.len() || entries.iter().any(|r| r.len() != ms.len()) {
        return Err(FreeCatError::DegreeMismatch {
            row: entries.len(),
            col: entries.first().map_or(0, |r| r.len()),
            generator: "<shape>".into(),
            needed: ns.len() as i64,
            found: ms.len() as i64,
        });
    }
    let mut rows = vec![];
    for (i, row) in entries.iter().enumerate() {
        let mut terms = vec![];
        for (j, &g) in row.iter().enumerate() {
            let needed = ns[i] - ms[j];
            if gens[g].degree != needed {
                return Err(FreeCatError::DegreeMismatch {
                    row: i,
                    col: j,
                    generator: gens[g].name.clone(),
                    needed,
                    found: gens[g].degree,
                });
            }
            terms.push(LiftTerm {
                generator: g,
                shift: ms[j],
                column: j,
            });
        }
        rows.push(terms);
    }
    Ok(MatrixEdge {
        source,
        target,
        entries,
        lift: LiftTemplate { rows },
    })
}

/// The graph on the given vertices (tuples of shifts) whose edges are all
/// matrices of generators with matching degrees.
pub fn matrix_graph(
    gens: &[GradedGenerator],
    vertices: &[Vec<i64>],
) -> Result<(Graph, Vec<MatrixEdge>), FreeCatError> {
    let mut edges = vec![];
    let mut medges = vec![];
    for (s, ms) in vertices.iter().enumerate() {
        for (t, ns) in vertices.iter().enumerate() {
            if ms.is_empty() || ns.is_empty() {
                continue;
            }
            // candidates per entry, then their product
            let cands: Vec<Vec<usize>> = ns
                .iter()
                .flat_map(|&n| {
                    ms.iter().map(move |&m| {
                        gens.iter()
                            .enumerate()
                            .filter(|(_, g)| g.degree == n - m)
                            .map(|(k, _)| k)
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            if cands.iter().any(|c| c.is_empty()) {
                continue;
            }
            for flat in cands.iter().map(|c| c.iter().copied()).multi_cartesian_product() {
                let entries: Vec<Vec<usize>> = flat.chunks(ms.len()).map(|r| r.to_vec()).collect();
                let me = matrix_edge(gens, vertices, s, t, entries)?;
                let name = format!(
                    "[{}]",
                    me.entries
                        .iter()
                        .map(|r| r.iter().map(|&g| gens[g].name.as_str()).join(" "))
                        .join("; ")
                );
                edges.push(Edge {
                    name,
                    source: s,
                    target: t,
                });
                medges.push(me);
            }
        }
    }
    Ok((Graph::new(vertices.len(), edges)?, medges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_graph() -> Graph {
        Graph::new(
            1,
            vec![Edge {
                name: "e".into(),
                source: 0,
                target: 0,
            }],
        )
        .unwrap()
    }

    #[test]
    fn one_loop_gives_free_monoid() {
        let g = loop_graph();
        let ws = g.words(0, 0, 3);
        assert_eq!(ws.len(), 4);
        assert_eq!(ws[3].edges, vec![0, 0, 0]);
    }

    #[test]
    fn torsion_kills_products() {
        let l = Linearized::new(loop_graph(), Ring::modular(4).unwrap());
        let two_e = l.edge(0).scale(2);
        assert!(l.compose(&two_e, &two_e).unwrap().is_zero());
    }

    #[test]
    fn bad_endpoint_rejected() {
        let e = Edge {
            name: "e".into(),
            source: 0,
            target: 2,
        };
        assert!(Graph::new(2, vec![e]).is_err());
    }

    #[test]
    fn degree_mismatch() {
        let gens = vec![GradedGenerator {
            name: "a".into(),
            degree: 1,
        }];
        let vs = vec![vec![0], vec![2]];
        assert!(matches!(
            matrix_edge(&gens, &vs, 0, 1, vec![vec![0]]),
            Err(FreeCatError::DegreeMismatch { needed: 2, .. })
        ));
    }

    #[test]
    fn empty_generator_set_has_no_edges() {
        let (g, _) = matrix_graph(&[], &[vec![0], vec![1]]).unwrap();
        assert!(g.edges().is_empty());
    }
}
