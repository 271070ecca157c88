//! Pseudo-functors out of a linearized free category, the coherence
//! checker, and the explicit constructions over `ℤ/p²` and over `ℤ`.
//!
//! Objects are mapped identically: the vertices of the graph are the
//! objects of the target. `Γ(x, y)` is the track `(sx)(sy) ⇒ s(xy)` for
//! `x` after `y`, stored as its Moore part; its base is `s(xy)`.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Elem, FinAbGroup, Ring};
use crate::freecat::{check_generating, FreeCatError, Generating, Graph, LinComb, Linearized, Word};
use crate::groupoid::Track;
use crate::laws::{expect_eq, run_laws, Budget, Law, LawResult, Mode, Report, Witness};
use crate::linearity::{gamma_int, gamma_track, iterated_gamma, LinearitySystem};
use crate::trackcat::{Comp, TrackCategory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PseudoError {
    #[error("graph has {graph} vertices but the target has {target} objects")]
    Objects { graph: usize, target: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Hom({from},{to})_0 has a summand of order {order}, not killed by p = {p}")]
    Torsion {
        from: usize,
        to: usize,
        order: u64,
        p: u64,
    },
    #[error("graph does not generate the homotopy category: {0:?}")]
    Generating(Generating),
    #[error(transparent)]
    FreeCat(#[from] FreeCatError),
    #[error("{which} fails {law}: {detail}")]
    Condition {
        which: String,
        law: String,
        detail: String,
    },
}

/// A pseudo-functor `(s, Γ)` from a linearized free category to a track
/// category, identity on objects.
pub trait PseudoFunctor: Send + Sync {
    fn source(&self) -> &Linearized;
    fn target(&self) -> &dyn TrackCategory;
    fn s(&self, x: &LinComb) -> Elem;
    /// Moore part of `Γ(x, y): (sx)(sy) ⇒ s(xy)`.
    fn gamma(&self, x: &LinComb, y: &LinComb) -> Elem;

    fn gamma_track(&self, x: &LinComb, y: &LinComb) -> Track {
        let xy = x.after(y).expect("composable");
        Track::new(self.gamma(x, y), self.s(&xy))
    }
}

/// Which coefficient ring the source is linearized over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "snake_case")]
pub enum Variant {
    /// `ℤ/p²`, acting on a `p`-torsion target through `F_p`.
    Padic { p: u64 },
    Integral,
}

impl Variant {
    pub fn ring(&self) -> Ring {
        match self {
            Variant::Padic { p } => Ring::Modular(p * p),
            Variant::Integral => Ring::Integers,
        }
    }
}

/// Knobs that must not change the result; used by the independence probes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Multiple of `p²` added to every scalar lift (p-adic case only).
    pub lift_offset: i64,
    /// Expand the summands of the right factor in reverse order.
    pub reverse_terms: bool,
}

/// The pseudo-functor determined by lifts of the edges and linearity
/// tracks: left linear in `x`, trivial on pairs of words, and expanded
/// over the summands of `y` through the linearity tracks.
pub struct BuiltPseudo<'a> {
    t: &'a dyn TrackCategory,
    l: &'a dyn LinearitySystem,
    lin: Linearized,
    lifts: Vec<Elem>,
    variant: Variant,
    options: BuildOptions,
    s_words: Mutex<HashMap<Word, Elem>>,
    gamma_words: Mutex<HashMap<(Word, LinComb), Elem>>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn check_common(
    t: &dyn TrackCategory,
    graph: &Graph,
    lifts: &[Elem],
    max_len: usize,
) -> Result<(), PseudoError> {
    if graph.vertices() != t.num_objects() {
        return Err(PseudoError::Objects {
            graph: graph.vertices(),
            target: t.num_objects(),
        });
    }
    match check_generating(t, graph, lifts, max_len)? {
        Generating::Yes { .. } => Ok(()),
        other => Err(PseudoError::Generating(other)),
    }
}

/// Builds `(s, Γ)` on `ℤ/p²·Mon(E)`. Every 0-cell group of `t` must be
/// killed by `p` and `E` must generate `H0 t` (searched up to `max_len`).
pub fn build_pseudo_padic<'a>(
    t: &'a dyn TrackCategory,
    l: &'a dyn LinearitySystem,
    graph: Graph,
    lifts: Vec<Elem>,
    p: u64,
    options: BuildOptions,
    max_len: usize,
) -> Result<BuiltPseudo<'a>, PseudoError> {
    if !is_prime(p) {
        return Err(PseudoError::NotPrime(p));
    }
    let n = t.num_objects();
    for a in 0..n.min(graph.vertices()) {
        for b in 0..n.min(graph.vertices()) {
            if let Some(&order) = t.hom(a, b).c0().orders().iter().find(|&&o| !p.is_multiple_of(o)) {
                return Err(PseudoError::Torsion {
                    from: a,
                    to: b,
                    order,
                    p,
                });
            }
        }
    }
    check_common(t, &graph, &lifts, max_len)?;
    Ok(BuiltPseudo::new(t, l, graph, lifts, Variant::Padic { p }, options))
}

/// Builds `(s, Γ)` on `ℤ·Mon(E)`; negative multiples go through `Γ(-1)`.
pub fn build_pseudo_integral<'a>(
    t: &'a dyn TrackCategory,
    l: &'a dyn LinearitySystem,
    graph: Graph,
    lifts: Vec<Elem>,
    options: BuildOptions,
    max_len: usize,
) -> Result<BuiltPseudo<'a>, PseudoError> {
    check_common(t, &graph, &lifts, max_len)?;
    Ok(BuiltPseudo::new(t, l, graph, lifts, Variant::Integral, options))
}

impl<'a> BuiltPseudo<'a> {
    fn new(
        t: &'a dyn TrackCategory,
        l: &'a dyn LinearitySystem,
        graph: Graph,
        lifts: Vec<Elem>,
        variant: Variant,
        options: BuildOptions,
    ) -> Self {
        BuiltPseudo {
            t,
            l,
            lin: Linearized::new(graph, variant.ring()),
            lifts,
            variant,
            options,
            s_words: Mutex::new(HashMap::new()),
            gamma_words: Mutex::new(HashMap::new()),
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn linearity(&self) -> &dyn LinearitySystem {
        self.l
    }

    pub fn lifts(&self) -> &[Elem] {
        &self.lifts
    }

    /// The integer standing in for a coefficient of the source ring.
    pub fn lift(&self, c: i64) -> i64 {
        match self.variant {
            Variant::Padic { p } => {
                let q = (p * p) as i64;
                c.rem_euclid(q) + self.options.lift_offset * q
            }
            Variant::Integral => c,
        }
    }

    /// `s` of a word: the composite of the edge lifts.
    pub fn s_word(&self, w: &Word) -> Elem {
        if let Some(v) = self.s_words.lock().expect("cache").get(w) {
            return v.clone();
        }
        let g = &self.lin.graph;
        let mut acc = self.t.unit(w.source);
        for &e in &w.edges {
            let edge = g.edge(e);
            acc = self
                .t
                .mu0(Comp::new(w.source, edge.source, edge.target), &self.lifts[e], &acc);
        }
        self.s_words.lock().expect("cache").insert(w.clone(), acc.clone());
        acc
    }

    /// `Γ(w, Σ d_j y_j)` for a word `w` and summands taken as given,
    /// without normalizing the right factor.
    pub fn gamma_word_terms(&self, w: &Word, source: usize, terms: &[(Word, i64)]) -> Elem {
        let c = Comp::new(source, w.source, w.target);
        let g1 = self.t.hom(source, w.target).c1();
        if terms.is_empty() {
            return g1.zero();
        }
        let mut terms = terms.to_vec();
        if self.options.reverse_terms {
            terms.reverse();
        }
        let sw = self.s_word(w);
        let hom0 = self.t.hom(source, w.source).c0();
        let scaled: Vec<Elem> = terms
            .iter()
            .map(|(y, d)| hom0.scale(self.lift(*d), &self.s_word(y)))
            .collect();
        let mut m = iterated_gamma(self.t, self.l, c, &sw, &scaled).moore;
        for (y, d) in &terms {
            let n = self.lift(*d);
            if n == 1 {
                continue;
            }
            let gi = gamma_int(self.t, self.l, w.source, w.target, &sw, n);
            m = g1.add(&m, &self.t.rwhisk(c, &gi.moore, &self.s_word(y)));
        }
        m
    }

    fn gamma_word(&self, w: &Word, y: &LinComb) -> Elem {
        let key = (w.clone(), y.clone());
        if let Some(v) = self.gamma_words.lock().expect("cache").get(&key) {
            return v.clone();
        }
        let v = self.gamma_word_terms(w, y.source, y.terms());
        self.gamma_words.lock().expect("cache").insert(key, v.clone());
        v
    }

    /// `Γ(Σ c_i x_i, Σ d_j y_j)` with both sides given as raw summands.
    pub fn gamma_terms(&self, xs: &[(Word, i64)], source: usize, target: usize, ys: &[(Word, i64)]) -> Elem {
        let g1 = self.t.hom(source, target).c1();
        xs.iter().fold(g1.zero(), |acc, (w, c)| {
            g1.add(&acc, &g1.scale(self.lift(*c), &self.gamma_word_terms(w, source, ys)))
        })
    }
}

impl PseudoFunctor for BuiltPseudo<'_> {
    fn source(&self) -> &Linearized {
        &self.lin
    }

    fn target(&self) -> &dyn TrackCategory {
        self.t
    }

    fn s(&self, x: &LinComb) -> Elem {
        let g0 = self.t.hom(x.source, x.target).c0();
        x.terms().iter().fold(g0.zero(), |acc, (w, c)| {
            g0.add(&acc, &g0.scale(self.lift(*c), &self.s_word(w)))
        })
    }

    fn gamma(&self, x: &LinComb, y: &LinComb) -> Elem {
        let g1 = self.t.hom(y.source, x.target).c1();
        x.terms().iter().fold(g1.zero(), |acc, (w, c)| {
            g1.add(&acc, &g1.scale(self.lift(*c), &self.gamma_word(w, y)))
        })
    }
}

/// `s` from edge lifts extended linearly, `Γ ≡ 0`. A pseudo-functor
/// exactly when the target composes bilinearly on the image.
pub struct StrictPseudo<'a> {
    pub t: &'a dyn TrackCategory,
    pub lin: Linearized,
    pub lifts: Vec<Elem>,
}

impl PseudoFunctor for StrictPseudo<'_> {
    fn source(&self) -> &Linearized {
        &self.lin
    }

    fn target(&self) -> &dyn TrackCategory {
        self.t
    }

    fn s(&self, x: &LinComb) -> Elem {
        let g0 = self.t.hom(x.source, x.target).c0();
        let g = &self.lin.graph;
        x.terms().iter().fold(g0.zero(), |acc, (w, c)| {
            let mut v = self.t.unit(w.source);
            for &e in &w.edges {
                let edge = g.edge(e);
                v = self.t.mu0(Comp::new(w.source, edge.source, edge.target), &self.lifts[e], &v);
            }
            g0.add(&acc, &g0.scale(*c, &v))
        })
    }

    fn gamma(&self, x: &LinComb, y: &LinComb) -> Elem {
        self.t.hom(y.source, x.target).c1().zero()
    }
}

/// `inner` with `Γ(x, y)` shifted by `delta` at one pair.
pub struct Perturbed<P> {
    pub inner: P,
    pub x: LinComb,
    pub y: LinComb,
    pub delta: Elem,
}

impl<P: PseudoFunctor> PseudoFunctor for Perturbed<P> {
    fn source(&self) -> &Linearized {
        self.inner.source()
    }

    fn target(&self) -> &dyn TrackCategory {
        self.inner.target()
    }

    fn s(&self, x: &LinComb) -> Elem {
        self.inner.s(x)
    }

    fn gamma(&self, x: &LinComb, y: &LinComb) -> Elem {
        let v = self.inner.gamma(x, y);
        if *x == self.x && *y == self.y {
            return self.target().hom(y.source, x.target).c1().add(&v, &self.delta);
        }
        v
    }
}

/// Finite sets of source morphisms on which checks run: every combination
/// of words of length `≤ max_len` with coefficients in `coeffs`.
#[derive(Clone, Debug)]
pub struct Bounded {
    pub max_len: usize,
    pub coeffs: Vec<i64>,
    homs: Vec<Vec<Vec<LinComb>>>,
}

impl Bounded {
    pub fn new(lin: &Linearized, max_len: usize, coeffs: Vec<i64>) -> Self {
        let n = lin.graph.vertices();
        let homs = (0..n)
            .map(|a| (0..n).map(|b| lin.combinations(a, b, max_len, &coeffs)).collect())
            .collect();
        Bounded { max_len, coeffs, homs }
    }

    /// All residues of the ring for `ℤ/m`, `-2..=2` for `ℤ`.
    pub fn default_for(lin: &Linearized, max_len: usize) -> Self {
        let coeffs = match lin.ring {
            Ring::Modular(m) => (0..m as i64).collect(),
            Ring::Integers => (-2..=2).collect(),
        };
        Self::new(lin, max_len, coeffs)
    }

    pub fn hom(&self, a: usize, b: usize) -> &[LinComb] {
        &self.homs[a][b]
    }

    fn index_group(&self, a: usize, b: usize) -> FinAbGroup {
        FinAbGroup::cyclic(self.homs[a][b].len() as u64)
    }

    fn at(&self, a: usize, b: usize, e: &Elem) -> &LinComb {
        &self.homs[a][b][e[0] as usize]
    }
}

fn pasting_sides(p: &dyn PseudoFunctor, x: &LinComb, y: &LinComb, z: &LinComb) -> (Elem, Elem) {
    let t = p.target();
    let (a, b, c, d) = (z.source, y.source, x.source, x.target);
    let g1 = t.hom(a, d).c1();
    let xy = x.after(y).expect("composable");
    let yz = y.after(z).expect("composable");
    let lhs = g1.add(
        &p.gamma(&xy, z),
        &t.rwhisk(Comp::new(a, b, d), &p.gamma(x, y), &p.s(z)),
    );
    let inner = Track::new(p.gamma(y, z), p.s(&yz));
    let rhs = g1.add(
        &p.gamma(x, &yz),
        &t.lwhisk(Comp::new(a, c, d), &p.s(x), &inner),
    );
    (lhs, rhs)
}

/// Boundary, unit, pointedness and pasting laws on bounded morphisms.
/// Pasting triples are checked exhaustively when their number fits the
/// budget, using precomputed tables, and sampled otherwise.
pub fn check_coherence(p: &dyn PseudoFunctor, bounded: &Bounded, budget: &Budget) -> Report {
    let t = p.target();
    let lin = p.source();
    let n = lin.graph.vertices();
    let mut laws: Vec<Law<'_>> = vec![];
    laws.push(Law::new(
        "pseudo.boundary",
        3,
        |o| Some(vec![bounded.index_group(o[1], o[2]), bounded.index_group(o[0], o[1])]),
        |o, e| {
            let (x, y) = (bounded.at(o[1], o[2], &e[0]), bounded.at(o[0], o[1], &e[1]));
            let xy = x.after(y).map_err(|e| e.to_string())?;
            let g0 = t.hom(o[0], o[2]).c0();
            let want = g0.sub(&t.mu0(Comp::new(o[0], o[1], o[2]), &p.s(x), &p.s(y)), &p.s(&xy));
            expect_eq(t.hom(o[0], o[2]).boundary(&p.gamma(x, y)), want, "∂Γ(x,y)")
        },
    ));
    laws.push(Law::new(
        "pseudo.unit.s",
        1,
        |_| Some(vec![]),
        |o, _| expect_eq(p.s(&lin.identity(o[0])), t.unit(o[0]), "s(1)"),
    ));
    laws.push(Law::new(
        "pseudo.unit.left",
        2,
        |o| Some(vec![bounded.index_group(o[0], o[1])]),
        |o, e| {
            let x = bounded.at(o[0], o[1], &e[0]);
            let g = p.gamma(&lin.identity(o[1]), x);
            expect_eq(t.hom(o[0], o[1]).c1().is_zero(&g), true, "Γ(1,x) = id")
        },
    ));
    laws.push(Law::new(
        "pseudo.unit.right",
        2,
        |o| Some(vec![bounded.index_group(o[0], o[1])]),
        |o, e| {
            let x = bounded.at(o[0], o[1], &e[0]);
            let g = p.gamma(x, &lin.identity(o[0]));
            expect_eq(t.hom(o[0], o[1]).c1().is_zero(&g), true, "Γ(x,1) = id")
        },
    ));
    laws.push(Law::new(
        "pseudo.pointed",
        3,
        |o| Some(vec![bounded.index_group(o[1], o[2]), bounded.index_group(o[0], o[1])]),
        |o, e| {
            let (x, y) = (bounded.at(o[1], o[2], &e[0]), bounded.at(o[0], o[1], &e[1]));
            let ring = lin.ring;
            let g1 = t.hom(o[0], o[2]).c1();
            expect_eq(t.hom(o[0], o[2]).c0().is_zero(&p.s(&LinComb::zero(ring, o[0], o[2]))), true, "s(0) = 0")?;
            expect_eq(g1.is_zero(&p.gamma(x, &LinComb::zero(ring, o[0], o[1]))), true, "Γ(x,0) = id")?;
            expect_eq(g1.is_zero(&p.gamma(&LinComb::zero(ring, o[1], o[2]), y)), true, "Γ(0,y) = id")
        },
    ));
    let mut report = run_laws(&laws, n, budget);
    report.push(check_pasting(p, bounded, budget));
    report
}

fn pasting_total(bounded: &Bounded, n: usize) -> u128 {
    let mut total = 0u128;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    total += (bounded.hom(c, d).len() * bounded.hom(b, c).len() * bounded.hom(a, b).len()) as u128;
                }
            }
        }
    }
    total
}

fn check_pasting(p: &dyn PseudoFunctor, bounded: &Bounded, budget: &Budget) -> LawResult {
    let n = p.source().graph.vertices();
    let name = "pseudo.pasting";
    let fail = |objects: Vec<usize>, ids: [usize; 3], x: &LinComb, y: &LinComb, z: &LinComb, lhs: Elem, rhs: Elem, cases: u64, mode: Mode| {
        let g = &p.source().graph;
        let show = |l: &LinComb| {
            l.terms()
                .iter()
                .map(|(w, c)| format!("{c}·{}", w.display(g)))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        LawResult {
            law: name.into(),
            passed: false,
            cases,
            mode,
            seed: budget.seed,
            witness: Some(Witness {
                law: name.into(),
                objects,
                elements: ids.iter().map(|&i| vec![i as i64]).collect(),
                detail: format!(
                    "x = {}, y = {}, z = {}: {lhs:?} != {rhs:?}",
                    show(x),
                    show(y),
                    show(z)
                ),
            }),
        }
    };
    if pasting_total(bounded, n) <= budget.exhaustive_limit {
        let mut cases = 0u64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let r = exhaustive_block(p, bounded, [a, b, c, d]);
                        cases += r.0;
                        if let Some((ids, lhs, rhs)) = r.1 {
                            let (x, y, z) = (
                                &bounded.hom(c, d)[ids[0]],
                                &bounded.hom(b, c)[ids[1]],
                                &bounded.hom(a, b)[ids[2]],
                            );
                            return fail(vec![a, b, c, d], ids, x, y, z, lhs, rhs, cases, Mode::Exhaustive);
                        }
                    }
                }
            }
        }
        return LawResult {
            law: name.into(),
            passed: true,
            cases,
            mode: Mode::Exhaustive,
            seed: budget.seed,
            witness: None,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x7061_7374);
    let mut cases = 0u64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let (xs, ys, zs) = (bounded.hom(c, d), bounded.hom(b, c), bounded.hom(a, b));
                    for _ in 0..budget.samples {
                        let ids = [
                            rng.gen_range(0..xs.len()),
                            rng.gen_range(0..ys.len()),
                            rng.gen_range(0..zs.len()),
                        ];
                        let (x, y, z) = (&xs[ids[0]], &ys[ids[1]], &zs[ids[2]]);
                        cases += 1;
                        let (lhs, rhs) = pasting_sides(p, x, y, z);
                        if lhs != rhs {
                            return fail(vec![a, b, c, d], ids, x, y, z, lhs, rhs, cases, Mode::Sampled);
                        }
                    }
                }
            }
        }
    }
    LawResult {
        law: name.into(),
        passed: true,
        cases,
        mode: Mode::Sampled,
        seed: budget.seed,
        witness: None,
    }
}

/// Interns parallel combinations and keeps their values in a flat table.
struct Interner {
    ids: HashMap<LinComb, usize>,
    items: Vec<LinComb>,
}

impl Interner {
    fn new() -> Self {
        Interner {
            ids: HashMap::new(),
            items: vec![],
        }
    }

    fn id(&mut self, x: LinComb) -> usize {
        if let Some(&i) = self.ids.get(&x) {
            return i;
        }
        self.items.push(x.clone());
        self.ids.insert(x, self.items.len() - 1);
        self.items.len() - 1
    }
}

type Failure = ([usize; 3], Elem, Elem);

/// All triples `x: c->d`, `y: b->c`, `z: a->b` of bounded morphisms.
fn exhaustive_block(p: &dyn PseudoFunctor, bounded: &Bounded, [a, b, c, d]: [usize; 4]) -> (u64, Option<Failure>) {
    let t = p.target();
    let (xs, ys, zs) = (bounded.hom(c, d), bounded.hom(b, c), bounded.hom(a, b));
    if xs.is_empty() || ys.is_empty() || zs.is_empty() {
        return (0, None);
    }
    let g1 = t.hom(a, d).c1();
    let r = g1.rank();
    // products x·y (b->d) and y·z (a->c), interned
    let mut xy_int = Interner::new();
    let xy: Vec<usize> = xs
        .iter()
        .flat_map(|x| ys.iter().map(move |y| (x, y)))
        .map(|(x, y)| xy_int.id(x.after(y).expect("composable")))
        .collect();
    let mut yz_int = Interner::new();
    let yz: Vec<usize> = ys
        .iter()
        .flat_map(|y| zs.iter().map(move |z| (y, z)))
        .map(|(y, z)| yz_int.id(y.after(z).expect("composable")))
        .collect();
    let sx: Vec<Elem> = xs.iter().map(|x| p.s(x)).collect();
    let sz: Vec<Elem> = zs.iter().map(|z| p.s(z)).collect();
    let s_yz: Vec<Elem> = yz_int.items.iter().map(|v| p.s(v)).collect();
    let g_xy: Vec<Elem> = xs
        .iter()
        .flat_map(|x| ys.iter().map(move |y| (x, y)))
        .map(|(x, y)| p.gamma(x, y))
        .collect();
    let g_yz: Vec<Elem> = ys
        .iter()
        .flat_map(|y| zs.iter().map(move |z| (y, z)))
        .map(|(y, z)| p.gamma(y, z))
        .collect();
    // Γ(u, z) for interned u = xy, Γ(x, v) for interned v = yz
    let mut g_uz = vec![0i64; xy_int.items.len() * zs.len() * r];
    for (u, uv) in xy_int.items.iter().enumerate() {
        for (k, z) in zs.iter().enumerate() {
            let base = (u * zs.len() + k) * r;
            g_uz[base..base + r].copy_from_slice(&p.gamma(uv, z));
        }
    }
    let mut g_xv = vec![0i64; xs.len() * yz_int.items.len() * r];
    for (i, x) in xs.iter().enumerate() {
        for (v, vv) in yz_int.items.iter().enumerate() {
            let base = (i * yz_int.items.len() + v) * r;
            g_xv[base..base + r].copy_from_slice(&p.gamma(x, vv));
        }
    }
    let (nx, ny, nz, nv) = (xs.len(), ys.len(), zs.len(), yz_int.items.len());
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(nx);
    let chunk = nx.div_ceil(threads);
    let first: Option<Failure> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                let (g_uz, g_xv, xy, yz, sx, sz, s_yz, g_xy, g_yz) =
                    (&g_uz, &g_xv, &xy, &yz, &sx, &sz, &s_yz, &g_xy, &g_yz);
                scope.spawn(move || -> Option<Failure> {
                    for i in k * chunk..((k + 1) * chunk).min(nx) {
                        for j in 0..ny {
                            let u = xy[i * ny + j];
                            for l in 0..nz {
                                let v = yz[j * nz + l];
                                let lhs = g1.add(
                                    &g_uz[(u * nz + l) * r..(u * nz + l + 1) * r],
                                    &t.rwhisk(Comp::new(a, b, d), &g_xy[i * ny + j], &sz[l]),
                                );
                                let inner = Track::new(g_yz[j * nz + l].clone(), s_yz[v].clone());
                                let rhs = g1.add(
                                    &g_xv[(i * nv + v) * r..(i * nv + v + 1) * r],
                                    &t.lwhisk(Comp::new(a, c, d), &sx[i], &inner),
                                );
                                if lhs != rhs {
                                    return Some(([i, j, l], lhs, rhs));
                                }
                            }
                        }
                    }
                    None
                })
            })
            .collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("worker"))
            .min_by_key(|f| f.0)
    });
    ((nx * ny * nz) as u64, first)
}

/// Outcome of comparing two pseudo-functors on bounded morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Uniqueness {
    Equal { compared: u64 },
    Diverges { what: String, x: LinComb, y: Option<LinComb> },
}

/// First place where `p` and `q` differ: `s` on bounded morphisms, then
/// `Γ` on bounded composable pairs, in enumeration order.
pub fn first_divergence(p: &dyn PseudoFunctor, q: &dyn PseudoFunctor, bounded: &Bounded) -> Uniqueness {
    let n = p.source().graph.vertices();
    let mut compared = 0u64;
    for a in 0..n {
        for b in 0..n {
            for x in bounded.hom(a, b) {
                compared += 1;
                if p.s(x) != q.s(x) {
                    return Uniqueness::Diverges {
                        what: "s".into(),
                        x: x.clone(),
                        y: None,
                    };
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for x in bounded.hom(b, c) {
                    for y in bounded.hom(a, b) {
                        compared += 1;
                        if p.gamma(x, y) != q.gamma(x, y) {
                            return Uniqueness::Diverges {
                                what: "gamma".into(),
                                x: x.clone(),
                                y: Some(y.clone()),
                            };
                        }
                    }
                }
            }
        }
    }
    Uniqueness::Equal { compared }
}

/// The three characterizing conditions: `Γ` additive in `x`, trivial when
/// `y` is a word, and right-linearized through the linearity tracks.
pub fn condition_laws<'a>(
    p: &'a dyn PseudoFunctor,
    l: &'a dyn LinearitySystem,
    bounded: &'a Bounded,
) -> Vec<Law<'a>> {
    let t = p.target();
    let pair_groups = move |o: &[usize]| {
        Some(vec![
            bounded.index_group(o[1], o[2]),
            bounded.index_group(o[1], o[2]),
            bounded.index_group(o[0], o[1]),
        ])
    };
    vec![
        Law::new("condition.left_linear", 3, pair_groups, move |o, e| {
            let (x, x2, y) = (
                bounded.at(o[1], o[2], &e[0]),
                bounded.at(o[1], o[2], &e[1]),
                bounded.at(o[0], o[1], &e[2]),
            );
            let g1 = t.hom(o[0], o[2]).c1();
            let sum = x.add(x2).map_err(|e| e.to_string())?;
            expect_eq(p.gamma(&sum, y), g1.add(&p.gamma(x, y), &p.gamma(x2, y)), "Γ(x+x',y)")
        }),
        Law::new(
            "condition.words",
            3,
            move |o| {
                let words = p.source().graph.words(o[0], o[1], bounded.max_len);
                Some(vec![bounded.index_group(o[1], o[2]), FinAbGroup::cyclic(words.len().max(1) as u64)])
            },
            move |o, e| {
                let words = p.source().graph.words(o[0], o[1], bounded.max_len);
                let Some(w) = words.get(e[1][0] as usize) else {
                    return Ok(());
                };
                let x = bounded.at(o[1], o[2], &e[0]);
                let y = LinComb::word(p.source().ring, w.clone());
                expect_eq(t.hom(o[0], o[2]).c1().is_zero(&p.gamma(x, &y)), true, "Γ(x,w) = id")
            },
        ),
        Law::new(
            "condition.right_linearization",
            3,
            move |o| {
                Some(vec![
                    bounded.index_group(o[1], o[2]),
                    bounded.index_group(o[0], o[1]),
                    bounded.index_group(o[0], o[1]),
                ])
            },
            move |o, e| {
                let (x, y, z) = (
                    bounded.at(o[1], o[2], &e[0]),
                    bounded.at(o[0], o[1], &e[1]),
                    bounded.at(o[0], o[1], &e[2]),
                );
                let c = Comp::new(o[0], o[1], o[2]);
                let g1 = t.hom(o[0], o[2]).c1();
                let yz = y.add(z).map_err(|e| e.to_string())?;
                let lin = gamma_track(t, l, c, &p.s(x), &p.s(y), &p.s(z)).moore;
                let rhs = g1.add(&g1.add(&p.gamma(x, y), &p.gamma(x, z)), &lin);
                expect_eq(p.gamma(x, &yz), rhs, "Γ(x,y+z)")
            },
        ),
    ]
}

/// Checks that both pseudo-functors satisfy the characterizing conditions,
/// then compares them on bounded morphisms.
pub fn uniqueness_probe(
    p: &dyn PseudoFunctor,
    q: &dyn PseudoFunctor,
    l: &dyn LinearitySystem,
    bounded: &Bounded,
    budget: &Budget,
) -> Result<Uniqueness, PseudoError> {
    for (which, f) in [("first", p), ("second", q)] {
        let report = run_laws(&condition_laws(f, l, bounded), f.source().graph.vertices(), budget);
        let failure = report.failures().next().map(|bad| PseudoError::Condition {
            which: which.into(),
            law: bad.law.clone(),
            detail: bad.witness.as_ref().map(|w| w.detail.clone()).unwrap_or_default(),
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(first_divergence(p, q, bounded))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{bilinear_pair, tc};
    use crate::freecat::Edge;
    use crate::linearity::IdentityGamma;

    fn tc_graph() -> Graph {
        Graph::new(
            1,
            vec![Edge {
                name: "x".into(),
                source: 0,
                target: 0,
            }],
        )
        .unwrap()
    }

    #[test]
    fn words_have_trivial_gamma() {
        let (t, l) = tc();
        let p = build_pseudo_padic(&t, &l, tc_graph(), vec![vec![0, 1]], 2, BuildOptions::default(), 4).unwrap();
        let x = p.source().edge(0);
        let xx = x.after(&x).unwrap();
        assert_eq!(p.gamma(&x, &xx), vec![0]);
        assert_eq!(p.s(&xx), vec![0, 0]);
        // Γ(x, 1 + 1) picks up the twist
        let two = p.source().identity(0).scale(2);
        assert_eq!(p.s(&two), vec![0, 0]);
    }

    #[test]
    fn torsion_and_object_checks() {
        let (t, l) = tc();
        assert!(matches!(
            build_pseudo_padic(&t, &l, tc_graph(), vec![vec![0, 1]], 3, BuildOptions::default(), 4),
            Err(PseudoError::Torsion { .. })
        ));
        let g2 = Graph::new(2, vec![]).unwrap();
        assert!(matches!(
            build_pseudo_padic(&t, &l, g2, vec![], 2, BuildOptions::default(), 4),
            Err(PseudoError::Objects { .. })
        ));
        let empty = Graph::new(1, vec![]).unwrap();
        assert!(matches!(
            build_pseudo_padic(&t, &l, empty, vec![], 2, BuildOptions::default(), 4),
            Err(PseudoError::Generating(Generating::No { .. }))
        ));
    }

    #[test]
    fn strict_functor_on_bilinear_pair_is_coherent() {
        let t = bilinear_pair();
        let g = Graph::new(
            2,
            vec![
                Edge { name: "e".into(), source: 0, target: 0 },
                Edge { name: "f".into(), source: 0, target: 1 },
            ],
        )
        .unwrap();
        let lin = Linearized::new(g, Ring::Modular(2));
        let p = StrictPseudo {
            t: &t,
            lin: lin.clone(),
            lifts: vec![vec![0, 1], vec![1, 0]],
        };
        let b = Bounded::default_for(&lin, 2);
        let r = check_coherence(&p, &b, &Budget::default());
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let q = build_pseudo_padic(&t, &IdentityGamma, lin.graph.clone(), p.lifts.clone(), 2, BuildOptions::default(), 4)
            .unwrap();
        assert_eq!(first_divergence(&p, &q, &b), Uniqueness::Equal { compared: first_count(&b, 2) });
    }

    fn first_count(b: &Bounded, n: usize) -> u64 {
        let mut k = 0;
        for a in 0..n {
            for c in 0..n {
                k += b.hom(a, c).len() as u64;
                for m in 0..n {
                    k += (b.hom(a, c).len() * b.hom(m, a).len()) as u64;
                }
            }
        }
        k
    }
}
