//! The relaxation `S̃` of a bilinear source: formal linear combinations of
//! composable words of letters, each letter a basis element of a hom, so
//! that `[f + g] = [f] + [g]` holds by rewriting letters over the basis.
//! Only words up to a length bound are materialized.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AbHom, Elem, FinAbGroup, Homology, Subgroup, TruncComplex1};
use crate::freecat::LinComb;
use crate::groupoid::Track;
use crate::laws::{expect_eq, Budget, Law, Report};
use crate::pseudo::PseudoFunctor;
use crate::trackcat::{dk_compare_complexes, right_linearity_probe, Comp, HomComplexes, HomMaps, TrackCategory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelaxError {
    #[error("word bound {0} is below 2; composites of letters must fit")]
    BoundTooSmall(usize),
    #[error("source is not bilinear: {0}")]
    NotBilinear(String),
    #[error("Hom({0},{1}) of the relaxation has {2} words, above the limit {3}")]
    TooLarge(usize, usize, usize, usize),
}

/// A source that can be relaxed: finitely many basis letters per hom,
/// bilinear composition, and a complex in which 2-cells between
/// evaluated composites live.
pub trait RelaxSource: Sync {
    type Cell: Clone + fmt::Debug;
    fn num_objects(&self) -> usize;
    fn modulus(&self) -> u64;
    fn letters(&self, a: usize, b: usize) -> Vec<Self::Cell>;
    fn letter_name(&self, a: usize, b: usize, k: usize) -> String;
    fn identity(&self, a: usize) -> Self::Cell;
    fn compose(&self, c: Comp, y: &Self::Cell, x: &Self::Cell) -> Self::Cell;
    /// The track category holding the 2-cells, and the evaluation of a
    /// 0-cell into it. Evaluation must be linear.
    fn cells(&self) -> &dyn TrackCategory;
    fn eval(&self, a: usize, b: usize, x: &Self::Cell) -> Elem;
    /// Coordinates over the letters, if `x` lies in their span.
    fn coords(&self, a: usize, b: usize, x: &Self::Cell) -> Option<Vec<i64>>;
    fn bilinear(&self) -> Result<(), String> {
        Ok(())
    }
}

/// A locally linear pseudo-functor out of a relaxable source, identity on
/// objects.
pub trait RelaxPseudo: Sync {
    type Cell;
    fn target(&self) -> &dyn TrackCategory;
    fn f0(&self, a: usize, b: usize, x: &Self::Cell) -> Elem;
    /// On Moore elements of the source's 2-cells.
    fn f1(&self, a: usize, b: usize, r: &[i64]) -> Elem;
    /// Moore part of `F(y)F(x) ⇒ F(yx)`.
    fn gamma(&self, c: Comp, y: &Self::Cell, x: &Self::Cell) -> Elem;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub source: usize,
    pub target: usize,
    pub index: usize,
}

/// Letters in traversal order: `letters[0]` is applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LetterWord {
    pub source: usize,
    pub target: usize,
    pub letters: Vec<Letter>,
}

impl LetterWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// `S̃` up to the word bound, with the evaluation `Q̃` into the cells of
/// the source. `Hom_0` is free on words over `ℤ/M`; `Hom_1` is the group of
/// pairs `(r, u)` with `∂r = Q̃u`, and `d(r, u) = u`.
pub struct Relaxation<'s, S: RelaxSource> {
    src: &'s S,
    bound: usize,
    letters: Vec<Vec<Vec<S::Cell>>>,
    words: Vec<Vec<Vec<LetterWord>>>,
    index: HashMap<LetterWord, usize>,
    values: Vec<Vec<Vec<S::Cell>>>,
    homs: Vec<Vec<TruncComplex1>>,
    kernels: Vec<Vec<Subgroup>>,
}

pub const WORD_LIMIT: usize = 4096;

impl<'s, S: RelaxSource> Relaxation<'s, S> {
    pub fn new(src: &'s S, bound: usize) -> Result<Self, RelaxError> {
        if bound < 2 {
            return Err(RelaxError::BoundTooSmall(bound));
        }
        src.bilinear().map_err(RelaxError::NotBilinear)?;
        let n = src.num_objects();
        let letters: Vec<Vec<Vec<S::Cell>>> = (0..n)
            .map(|a| (0..n).map(|b| src.letters(a, b)).collect())
            .collect();
        // words by length, extending on the left
        let mut words: Vec<Vec<Vec<LetterWord>>> = vec![vec![vec![]; n]; n];
        let mut values: Vec<Vec<Vec<S::Cell>>> = vec![vec![vec![]; n]; n];
        let mut frontier: Vec<(LetterWord, S::Cell)> = (0..n)
            .map(|a| {
                (
                    LetterWord {
                        source: a,
                        target: a,
                        letters: vec![],
                    },
                    src.identity(a),
                )
            })
            .collect();
        for len in 0..=bound {
            let mut next = vec![];
            for (w, v) in frontier {
                words[w.source][w.target].push(w.clone());
                values[w.source][w.target].push(v.clone());
                if words[w.source][w.target].len() > WORD_LIMIT {
                    return Err(RelaxError::TooLarge(w.source, w.target, words[w.source][w.target].len(), WORD_LIMIT));
                }
                if len == bound {
                    continue;
                }
                for c in 0..n {
                    for (k, l) in letters[w.target][c].iter().enumerate() {
                        let mut lw = w.letters.clone();
                        lw.push(Letter {
                            source: w.target,
                            target: c,
                            index: k,
                        });
                        let val = src.compose(Comp::new(w.source, w.target, c), l, &v);
                        next.push((
                            LetterWord {
                                source: w.source,
                                target: c,
                                letters: lw,
                            },
                            val,
                        ));
                    }
                }
            }
            frontier = next;
        }
        let mut index = HashMap::new();
        for row in &words {
            for ws in row {
                for (i, w) in ws.iter().enumerate() {
                    index.insert(w.clone(), i);
                }
            }
        }
        let m = src.modulus();
        let r = src.cells();
        let mut homs = vec![];
        let mut kernels = vec![];
        for a in 0..n {
            let mut hrow = vec![];
            let mut krow = vec![];
            for b in 0..n {
                let cells = r.hom(a, b);
                let nw = words[a][b].len();
                let c0 = FinAbGroup::elementary(m, nw);
                let (r1, r0) = (cells.c1(), cells.c0());
                let ambient = r1.direct_sum(&c0);
                let mut cols: Vec<Elem> = (0..r1.rank()).map(|j| cells.boundary(&r1.generator(j))).collect();
                cols.extend(values[a][b].iter().map(|v| r0.neg(&src.eval(a, b, v))));
                let matrix: Vec<Vec<i64>> = (0..r0.rank())
                    .map(|i| cols.iter().map(|col| col[i]).collect())
                    .collect();
                let phi = AbHom::new(ambient, r0.clone(), matrix).expect("shape");
                let ker = phi.kernel();
                let emb = ker.embedding.matrix();
                let d: Vec<Vec<i64>> = (0..nw).map(|w| emb[r1.rank() + w].clone()).collect();
                hrow.push(TruncComplex1::from_matrix(ker.group.clone(), c0, d).expect("projection"));
                krow.push(ker);
            }
            homs.push(hrow);
            kernels.push(krow);
        }
        Ok(Relaxation {
            src,
            bound,
            letters,
            words,
            index,
            values,
            homs,
            kernels,
        })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn source(&self) -> &'s S {
        self.src
    }

    pub fn words(&self, a: usize, b: usize) -> &[LetterWord] {
        &self.words[a][b]
    }

    pub fn word_index(&self, w: &LetterWord) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn display(&self, w: &LetterWord) -> String {
        if w.letters.is_empty() {
            return format!("∅_{}", w.source);
        }
        w.letters
            .iter()
            .rev()
            .map(|l| format!("[{}]", self.src.letter_name(l.source, l.target, l.index)))
            .collect::<Vec<_>>()
            .join("")
    }

    /// `(r, u)` of a 1-cell given in coordinates of `Hom_1`.
    pub fn split1(&self, a: usize, b: usize, v: &[i64]) -> (Elem, Elem) {
        let full = self.kernels[a][b].embedding.apply(v);
        let k = self.src.cells().hom(a, b).c1().rank();
        (full[..k].to_vec(), full[k..].to_vec())
    }

    /// Coordinates of `(r, u)` in `Hom_1`, if `∂r = Q̃u`.
    pub fn join1(&self, a: usize, b: usize, r: &[i64], u: &[i64]) -> Option<Elem> {
        let mut full = r.to_vec();
        full.extend_from_slice(u);
        self.kernels[a][b].coords_of(&full)
    }

    /// The element of `Hom_0` with coefficient `1` on a single word.
    pub fn word_elem(&self, w: &LetterWord) -> Elem {
        let mut u = self.homs[w.source][w.target].c0().zero();
        u[self.index[w]] = 1;
        u
    }

    /// `Q̃`: evaluation, and projection `(r, u) ↦ r` on 1-cells.
    pub fn q_maps(&self) -> HomMaps {
        let n = self.src.num_objects();
        let r = self.src.cells();
        HomMaps {
            objects: (0..n).collect(),
            maps: (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            let h = &self.homs[a][b];
                            let r0 = r.hom(a, b).c0();
                            let cols: Vec<Elem> = self.values[a][b].iter().map(|v| self.src.eval(a, b, v)).collect();
                            let f0 = AbHom::new(
                                h.c0().clone(),
                                r0.clone(),
                                (0..r0.rank()).map(|i| cols.iter().map(|c| c[i]).collect()).collect(),
                            )
                            .expect("shape");
                            let f1 = AbHom::from_fn(h.c1(), r.hom(a, b).c1(), |v| self.split1(a, b, v).0)
                                .expect("projection");
                            (f0, f1)
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// `P̃` on 0-cells: rewrite over the letters, one-letter words.
    pub fn p0(&self, a: usize, b: usize, x: &S::Cell) -> Option<Elem> {
        let coords = self.src.coords(a, b, x)?;
        let mut u = self.homs[a][b].c0().zero();
        for (k, c) in coords.iter().enumerate() {
            let w = LetterWord {
                source: a,
                target: b,
                letters: vec![Letter {
                    source: a,
                    target: b,
                    index: k,
                }],
            };
            u[self.index[&w]] = c.rem_euclid(self.src.modulus() as i64);
        }
        Some(u)
    }

    /// `Γ_w: G̃(w) ⇒ F(Q̃w)` for a word, built from the last letter down.
    fn gamma_word<F: RelaxPseudo<Cell = S::Cell>>(&self, f: &F, w: &LetterWord) -> Elem {
        let t = f.target();
        let g1 = t.hom(w.source, w.target).c1();
        if w.letters.len() <= 1 {
            return g1.zero();
        }
        let (last, rest) = w.letters.split_last().expect("nonempty");
        let prefix = LetterWord {
            source: w.source,
            target: last.source,
            letters: rest.to_vec(),
        };
        let pv = &self.values[prefix.source][prefix.target][self.index[&prefix]];
        let lv = &self.letters[last.source][last.target][last.index];
        let c = Comp::new(w.source, last.source, last.target);
        let inner = Track::new(self.gamma_word(f, &prefix), f.f0(prefix.source, prefix.target, pv));
        g1.add(
            &f.gamma(c, lv, pv),
            &t.lwhisk(c, &f.f0(last.source, last.target, lv), &inner),
        )
    }

    /// `G̃`: letters go to their images, words to composites; a 1-cell
    /// `(r, u)` goes to `F(r) + Σ u_w Γ_w`.
    pub fn g_tilde<F: RelaxPseudo<Cell = S::Cell>>(&self, f: &F) -> Gtilde {
        let t = f.target();
        let n = self.src.num_objects();
        let mut g0s = vec![];
        let mut gammas = vec![];
        let mut maps = vec![];
        for a in 0..n {
            let (mut r0, mut r1, mut rm) = (vec![], vec![], vec![]);
            for b in 0..n {
                let h = &self.homs[a][b];
                let th = t.hom(a, b);
                let vals: Vec<Elem> = self.words[a][b].iter().map(|w| self.g_word(f, w)).collect();
                let gam: Vec<Elem> = self.words[a][b].iter().map(|w| self.gamma_word(f, w)).collect();
                let f0 = AbHom::new(
                    h.c0().clone(),
                    th.c0().clone(),
                    (0..th.c0().rank()).map(|i| vals.iter().map(|c| c[i]).collect()).collect(),
                )
                .expect("shape");
                let f1 = AbHom::from_fn(h.c1(), th.c1(), |v| {
                    let (r, u) = self.split1(a, b, v);
                    let base = f.f1(a, b, &r);
                    u.iter().zip(&gam).fold(base, |acc, (&k, g)| th.c1().add(&acc, &th.c1().scale(k, g)))
                })
                .expect("linear");
                r0.push(vals);
                r1.push(gam);
                rm.push((f0, f1));
            }
            g0s.push(r0);
            gammas.push(r1);
            maps.push(rm);
        }
        Gtilde {
            values: g0s,
            gammas,
            maps: HomMaps {
                objects: (0..n).collect(),
                maps,
            },
        }
    }

    fn g_word<F: RelaxPseudo<Cell = S::Cell>>(&self, f: &F, w: &LetterWord) -> Elem {
        let t = f.target();
        let mut acc = t.unit(w.source);
        for l in &w.letters {
            let lv = &self.letters[l.source][l.target][l.index];
            acc = t.mu0(Comp::new(w.source, l.source, l.target), &f.f0(l.source, l.target, lv), &acc);
        }
        acc
    }

    fn concat(&self, v: &LetterWord, w: &LetterWord) -> LetterWord {
        let mut letters = w.letters.clone();
        letters.extend(v.letters.iter().copied());
        LetterWord {
            source: w.source,
            target: v.target,
            letters,
        }
    }
}

/// `G̃` with its values on words and the tracks `Γ_w`.
pub struct Gtilde {
    pub values: Vec<Vec<Vec<Elem>>>,
    pub gammas: Vec<Vec<Vec<Elem>>>,
    pub maps: HomMaps,
}

impl<S: RelaxSource> HomComplexes for Relaxation<'_, S> {
    fn num_objects(&self) -> usize {
        self.src.num_objects()
    }

    fn hom(&self, a: usize, b: usize) -> &TruncComplex1 {
        &self.homs[a][b]
    }

    /// Concatenation, extended bilinearly. Panics if a composite word is
    /// longer than the bound.
    fn compose0(&self, c: Comp, y: &[i64], x: &[i64]) -> Elem {
        let g = self.homs[c.a][c.c].c0();
        let mut out = g.zero();
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0 {
                continue;
            }
            for (j, &xj) in x.iter().enumerate() {
                if xj == 0 {
                    continue;
                }
                let w = self.concat(&self.words[c.b][c.c][i], &self.words[c.a][c.b][j]);
                let k = *self
                    .index
                    .get(&w)
                    .unwrap_or_else(|| panic!("composite of length {} exceeds the word bound {}", w.len(), self.bound));
                out[k] += yi * xj;
            }
        }
        g.reduce(out)
    }

    /// A representative supported on words of length at most one.
    fn representative(&self, a: usize, b: usize, h: &Homology, class: &[i64]) -> Elem {
        let long = h.lift0(class);
        let cells = self.src.cells().hom(a, b);
        let short: Vec<usize> = (0..self.words[a][b].len())
            .filter(|&i| self.words[a][b][i].len() <= 1)
            .collect();
        let r0 = cells.c0();
        let eps = |i: usize| self.src.eval(a, b, &self.values[a][b][i]);
        let target = long
            .iter()
            .enumerate()
            .fold(r0.zero(), |acc, (i, &k)| r0.add(&acc, &r0.scale(k, &eps(i))));
        let mut cols: Vec<Elem> = short.iter().map(|&i| eps(i)).collect();
        cols.extend((0..cells.c1().rank()).map(|j| cells.boundary(&cells.c1().generator(j))));
        let src = FinAbGroup::elementary(self.src.modulus(), short.len()).direct_sum(cells.c1());
        let phi = AbHom::new(
            src,
            r0.clone(),
            (0..r0.rank()).map(|i| cols.iter().map(|c| c[i]).collect()).collect(),
        )
        .expect("shape");
        let Some(sol) = phi.solve_preimage(&target) else {
            return long;
        };
        let mut u = self.homs[a][b].c0().zero();
        for (k, &i) in short.iter().enumerate() {
            u[i] = sol[k];
        }
        u
    }
}

/// A finite track category relaxed over the generators of its 0-cells.
pub struct TableSource<'t> {
    pub t: &'t dyn TrackCategory,
    pub names: Option<Vec<Vec<Vec<String>>>>,
}

impl RelaxSource for TableSource<'_> {
    type Cell = Elem;

    fn num_objects(&self) -> usize {
        self.t.num_objects()
    }

    fn modulus(&self) -> u64 {
        let n = self.t.num_objects();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .fold(1, |m, (a, b)| crate::algebra::lcm(m, self.t.hom(a, b).c0().exponent()))
    }

    fn letters(&self, a: usize, b: usize) -> Vec<Elem> {
        let g = self.t.hom(a, b).c0();
        (0..g.rank()).map(|k| g.generator(k)).collect()
    }

    fn letter_name(&self, a: usize, b: usize, k: usize) -> String {
        self.names
            .as_ref()
            .and_then(|n| n[a][b].get(k).cloned())
            .unwrap_or_else(|| format!("g{k}:{a}>{b}"))
    }

    fn identity(&self, a: usize) -> Elem {
        self.t.unit(a)
    }

    fn compose(&self, c: Comp, y: &Elem, x: &Elem) -> Elem {
        self.t.mu0(c, y, x)
    }

    fn cells(&self) -> &dyn TrackCategory {
        self.t
    }

    fn eval(&self, _: usize, _: usize, x: &Elem) -> Elem {
        x.clone()
    }

    fn coords(&self, _: usize, _: usize, x: &Elem) -> Option<Vec<i64>> {
        Some(x.clone())
    }

    fn bilinear(&self) -> Result<(), String> {
        let r = right_linearity_probe(self.t, &Budget::default());
        let failure = r.failures().next().map(|f| f.witness.as_ref().map(|w| w.detail.clone()).unwrap_or_default());
        match failure {
            None => Ok(()),
            Some(d) => Err(d),
        }
    }
}

/// One summand `Γ(y, x) ⊇ (yᵀ B x)·track` of a bilinear form pseudo-functor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTerm {
    pub comp: Comp,
    /// Rows index generators of `Hom(c.b, c.c)_0`, columns those of `Hom(c.a, c.b)_0`.
    pub matrix: Vec<Vec<i64>>,
    /// A cycle in `Hom(c.a, c.c)_1`.
    pub track: Elem,
}

/// The identity of a track category made into a pseudo-functor by a
/// bilinear `Γ`.
pub struct TableForm<'t> {
    pub t: &'t dyn TrackCategory,
    pub terms: Vec<FormTerm>,
}

impl TableForm<'_> {
    pub fn gamma_at(&self, c: Comp, y: &[i64], x: &[i64]) -> Elem {
        let g1 = self.t.hom(c.a, c.c).c1();
        self.terms.iter().filter(|f| f.comp == c).fold(g1.zero(), |acc, f| {
            let k: i64 = f
                .matrix
                .iter()
                .zip(y)
                .map(|(row, &yi)| yi * row.iter().zip(x).map(|(b, xj)| b * xj).sum::<i64>())
                .sum();
            g1.add(&acc, &g1.scale(k, &f.track))
        })
    }

    /// Boundary, units and pasting on all of the (finite) source.
    pub fn laws(&self) -> Vec<Law<'_>> {
        let t = self.t;
        let h0 = move |a: usize, b: usize| t.hom(a, b).c0().clone();
        vec![
            Law::new(
                "form.boundary",
                3,
                move |o| Some(vec![h0(o[1], o[2]), h0(o[0], o[1])]),
                move |o, e| {
                    let c = Comp::new(o[0], o[1], o[2]);
                    let z = t.hom(c.a, c.c).c0().zero();
                    expect_eq(t.hom(c.a, c.c).boundary(&self.gamma_at(c, &e[0], &e[1])), z, "∂Γ")
                },
            ),
            Law::new(
                "form.units",
                2,
                move |o| Some(vec![h0(o[0], o[1])]),
                move |o, e| {
                    let g1 = t.hom(o[0], o[1]).c1();
                    expect_eq(g1.is_zero(&self.gamma_at(Comp::new(o[0], o[1], o[1]), &t.unit(o[1]), &e[0])), true, "Γ(1,x)")?;
                    expect_eq(g1.is_zero(&self.gamma_at(Comp::new(o[0], o[0], o[1]), &e[0], &t.unit(o[0]))), true, "Γ(x,1)")
                },
            ),
            Law::new(
                "form.pasting",
                4,
                move |o| Some(vec![h0(o[2], o[3]), h0(o[1], o[2]), h0(o[0], o[1])]),
                move |o, e| {
                    let (x, y, z) = (&e[0], &e[1], &e[2]);
                    let g1 = t.hom(o[0], o[3]).c1();
                    let xy = t.mu0(Comp::new(o[1], o[2], o[3]), x, y);
                    let yz = t.mu0(Comp::new(o[0], o[1], o[2]), y, z);
                    let lhs = g1.add(
                        &self.gamma_at(Comp::new(o[0], o[1], o[3]), &xy, z),
                        &t.rwhisk(Comp::new(o[0], o[1], o[3]), &self.gamma_at(Comp::new(o[1], o[2], o[3]), x, y), z),
                    );
                    let inner = Track::new(self.gamma_at(Comp::new(o[0], o[1], o[2]), y, z), yz.clone());
                    let rhs = g1.add(
                        &self.gamma_at(Comp::new(o[0], o[2], o[3]), x, &yz),
                        &t.lwhisk(Comp::new(o[0], o[2], o[3]), x, &inner),
                    );
                    expect_eq(lhs, rhs, "pasting")
                },
            ),
        ]
    }
}

impl RelaxPseudo for TableForm<'_> {
    type Cell = Elem;

    fn target(&self) -> &dyn TrackCategory {
        self.t
    }

    fn f0(&self, _: usize, _: usize, x: &Elem) -> Elem {
        x.clone()
    }

    fn f1(&self, _: usize, _: usize, r: &[i64]) -> Elem {
        r.to_vec()
    }

    fn gamma(&self, c: Comp, y: &Elem, x: &Elem) -> Elem {
        self.gamma_at(c, y, x)
    }
}

/// `𝔹₀` relaxed over words of the generating graph up to a length bound;
/// 2-cells live in the target of the pseudo-functor.
pub struct BSource<'p> {
    pub p: &'p dyn PseudoFunctor,
    pub letter_bound: usize,
}

impl RelaxSource for BSource<'_> {
    type Cell = LinComb;

    fn num_objects(&self) -> usize {
        self.p.source().graph.vertices()
    }

    fn modulus(&self) -> u64 {
        self.p.source().ring.modulus().unwrap_or_else(|| {
            let t = self.p.target();
            let n = t.num_objects();
            (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .fold(1, |m, (a, b)| {
                    crate::algebra::lcm(crate::algebra::lcm(m, t.hom(a, b).c0().exponent()), t.hom(a, b).c1().exponent())
                })
        })
    }

    fn letters(&self, a: usize, b: usize) -> Vec<LinComb> {
        let lin = self.p.source();
        lin.graph
            .words(a, b, self.letter_bound)
            .into_iter()
            .map(|w| LinComb::word(lin.ring, w))
            .collect()
    }

    fn letter_name(&self, a: usize, b: usize, k: usize) -> String {
        let g = &self.p.source().graph;
        format!("{}", g.words(a, b, self.letter_bound)[k].display(g))
    }

    fn identity(&self, a: usize) -> LinComb {
        self.p.source().identity(a)
    }

    fn compose(&self, _: Comp, y: &LinComb, x: &LinComb) -> LinComb {
        y.after(x).expect("composable")
    }

    fn cells(&self) -> &dyn TrackCategory {
        self.p.target()
    }

    fn eval(&self, _: usize, _: usize, x: &LinComb) -> Elem {
        self.p.s(x)
    }

    fn coords(&self, a: usize, b: usize, x: &LinComb) -> Option<Vec<i64>> {
        let words = self.p.source().graph.words(a, b, self.letter_bound);
        let mut out = vec![0; words.len()];
        for (w, c) in x.terms() {
            out[words.iter().position(|v| v == w)?] = *c;
        }
        Some(out)
    }
}

/// `(s, Γ)` read as a pseudo-functor `𝔹₀ -> T`; on 2-cells it is `σ`.
pub struct BPseudo<'p> {
    pub p: &'p dyn PseudoFunctor,
}

impl RelaxPseudo for BPseudo<'_> {
    type Cell = LinComb;

    fn target(&self) -> &dyn TrackCategory {
        self.p.target()
    }

    fn f0(&self, _: usize, _: usize, x: &LinComb) -> Elem {
        self.p.s(x)
    }

    fn f1(&self, _: usize, _: usize, r: &[i64]) -> Elem {
        r.to_vec()
    }

    fn gamma(&self, _: Comp, y: &LinComb, x: &LinComb) -> Elem {
        self.p.gamma(y, x)
    }
}

/// `Γ(y, x) = y_f·x_e·t` on the two-object pair: the only composable
/// pair of non-identity generators is `f ∘ e`.
pub fn pair_form(t: &dyn TrackCategory) -> TableForm<'_> {
    TableForm {
        t,
        terms: vec![FormTerm {
            comp: Comp::new(0, 0, 1),
            matrix: vec![vec![0, 1], vec![0, 0]],
            track: vec![1],
        }],
    }
}

impl<'s, 't> Relaxation<'s, TableSource<'t>> {
    /// `P̃` on a 1-cell `a`: the pair `(a, P̃∂a)`.
    pub fn p1(&self, a: usize, b: usize, r: &[i64]) -> Option<Elem> {
        let d = self.src.t.hom(a, b).boundary(r);
        self.join1(a, b, r, &self.p0(a, b, &d)?)
    }

    /// `Q̃P̃ = id`, `G̃P̃ = F` on cells and on `Γ`, `G̃` strict on words, and
    /// Dwyer–Kan verdicts for `Q̃` and `G̃`.
    pub fn zigzag_report(&self, f: &TableForm<'_>) -> Report {
        let t = self.src.t;
        let n = t.num_objects();
        let q = self.q_maps();
        let g = self.g_tilde(f);
        let mut report = Report::default();
        let all = |grp: &FinAbGroup| grp.enumerate_bounded(1 << 16).map(|it| it.collect::<Vec<_>>()).unwrap_or_default();
        let (mut sec0, mut sec1, mut gp0, mut gp1) = (Ok(()), Ok(()), Ok(()), Ok(()));
        for a in 0..n {
            for b in 0..n {
                let h = t.hom(a, b);
                for x in all(h.c0()) {
                    let px = self.p0(a, b, &x).expect("table cells have coordinates");
                    if sec0.is_ok() {
                        sec0 = expect_eq(q.maps[a][b].0.apply(&px), x.clone(), &format!("Q̃P̃ on {x:?}"));
                    }
                    if gp0.is_ok() {
                        gp0 = expect_eq(g.maps.maps[a][b].0.apply(&px), f.f0(a, b, &x), &format!("G̃P̃ on {x:?}"));
                    }
                }
                for r in all(h.c1()) {
                    let Some(pr) = self.p1(a, b, &r) else {
                        sec1 = Err(format!("P̃ undefined on track {r:?}"));
                        continue;
                    };
                    if sec1.is_ok() {
                        sec1 = expect_eq(q.maps[a][b].1.apply(&pr), r.clone(), &format!("Q̃P̃ on track {r:?}"));
                    }
                    if gp1.is_ok() {
                        gp1 = expect_eq(g.maps.maps[a][b].1.apply(&pr), f.f1(a, b, &r), &format!("G̃P̃ on track {r:?}"));
                    }
                }
            }
        }
        report.record_result("zigzag.section.cells", sec0);
        report.record_result("zigzag.section.tracks", sec1);
        report.record_result("zigzag.gp.cells", gp0);
        report.record_result("zigzag.gp.tracks", gp1);

        let mut gam = Ok(());
        'outer: for c in crate::laws::object_tuples(n, 3) {
            let c = Comp::new(c[0], c[1], c[2]);
            for y in all(t.hom(c.b, c.c).c0()) {
                for x in all(t.hom(c.a, c.b).c0()) {
                    let (py, px) = (self.p0(c.b, c.c, &y).expect("coords"), self.p0(c.a, c.b, &x).expect("coords"));
                    let pyx = self.p0(c.a, c.c, &t.mu0(c, &y, &x)).expect("coords");
                    let c0 = self.homs[c.a][c.c].c0();
                    let u = c0.sub(&self.compose0(c, &py, &px), &pyx);
                    let zero = t.hom(c.a, c.c).c1().zero();
                    let Some(v) = self.join1(c.a, c.c, &zero, &u) else {
                        gam = Err(format!("P̃y·P̃x − P̃(yx) has nonzero evaluation for y = {y:?}, x = {x:?}"));
                        break 'outer;
                    };
                    gam = expect_eq(g.maps.maps[c.a][c.c].1.apply(&v), f.gamma(c, &y, &x), &format!("y = {y:?}, x = {x:?}"));
                    if gam.is_err() {
                        break 'outer;
                    }
                }
            }
        }
        report.record_result("zigzag.gp.gamma", gam);

        let mut strict = Ok(());
        'words: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for v in &self.words[b][c] {
                        for w in &self.words[a][b] {
                            if v.len() + w.len() > self.bound {
                                continue;
                            }
                            let vw = self.concat(v, w);
                            let lhs = g.values[a][c][self.index[&vw]].clone();
                            let rhs = t.mu0(
                                Comp::new(a, b, c),
                                &g.values[b][c][self.index[v]],
                                &g.values[a][b][self.index[w]],
                            );
                            strict = expect_eq(lhs, rhs, &format!("{} after {}", self.display(v), self.display(w)));
                            if strict.is_err() {
                                break 'words;
                            }
                        }
                    }
                }
            }
        }
        report.record_result("zigzag.g.strict", strict);

        for (name, map) in [("zigzag.dk.q", &q), ("zigzag.dk.g", &g.maps)] {
            match dk_compare_complexes(map, self, t) {
                Ok(v) => report.record_result(name, if v.equivalence { Ok(()) } else { Err(v.failures.join("; ")) }),
                Err(e) => report.record_result(name, Err(e.to_string())),
            }
        }
        report
    }
}
