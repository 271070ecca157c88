//! Three-fold Toda brackets in finite track categories, Massey products in
//! 1-truncated DG-categories, and their transfer along `𝔹 -> T`.
//! Everything is computed by exhaustive enumeration over class fibres.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Elem, FinAbGroup, DEFAULT_ENUM_BOUND};
use crate::freecat::LinComb;
use crate::groupoid::{DenormGroupoid, Track};
use crate::pseudo::Bounded;
use crate::strictify::{BOne, StrictB};
use crate::trackcat::{Comp, HomotopyCategory, TrackCategory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("objects {0:?} out of range")]
    Objects([usize; 4]),
    #[error("class {which} is not an element of H0({from},{to})")]
    Class { which: usize, from: usize, to: usize },
    #[error("y{0}y{1} is nonzero in H0")]
    Vanishing(usize, usize),
    #[error("{0} has no nullhomotopy although its class vanishes")]
    NoNullhomotopy(String),
    #[error("not pointed: {0}")]
    NotPointed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Classes `y1: o1 -> o0`, `y2: o2 -> o1`, `y3: o3 -> o2` in `H0`, given
/// in the coordinates of the target track category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketProblem {
    pub objects: [usize; 4],
    pub classes: [Elem; 3],
}

impl BracketProblem {
    fn hom(&self, i: usize) -> (usize, usize) {
        (self.objects[i + 1], self.objects[i])
    }

    fn c12(&self) -> Comp {
        let o = self.objects;
        Comp::new(o[2], o[1], o[0])
    }

    fn c23(&self) -> Comp {
        let o = self.objects;
        Comp::new(o[3], o[2], o[1])
    }

    /// `(x1x2) x3`, where the nullhomotopy of `x1x2` is whiskered.
    fn c12_3(&self) -> Comp {
        let o = self.objects;
        Comp::new(o[3], o[2], o[0])
    }

    fn c1_23(&self) -> Comp {
        let o = self.objects;
        Comp::new(o[3], o[1], o[0])
    }

    /// Checks ranges, class shapes and the vanishing conditions.
    pub fn validate(&self, h: &HomotopyCategory<'_>, n: usize) -> Result<(), BracketError> {
        if self.objects.iter().any(|&o| o >= n) {
            return Err(BracketError::Objects(self.objects));
        }
        for i in 0..3 {
            let (a, b) = self.hom(i);
            let g = h.classes(a, b);
            if self.classes[i].len() != g.rank() || g.reduce(self.classes[i].clone()) != self.classes[i] {
                return Err(BracketError::Class {
                    which: i + 1,
                    from: a,
                    to: b,
                });
            }
        }
        let o = self.objects;
        if !h.classes(o[2], o[0]).is_zero(&h.compose(self.c12(), &self.classes[0], &self.classes[1])) {
            return Err(BracketError::Vanishing(1, 2));
        }
        if !h.classes(o[3], o[1]).is_zero(&h.compose(self.c23(), &self.classes[1], &self.classes[2])) {
            return Err(BracketError::Vanishing(2, 3));
        }
        Ok(())
    }
}

/// A 1-truncated DG-category with enumerable class fibres. Classes are
/// reported in the coordinates of `homotopy()`.
pub trait DgCategory: Sync {
    type Zero: Clone + fmt::Debug + Serialize + Sync;
    type One: Clone + fmt::Debug + Serialize + Sync;
    fn num_objects(&self) -> usize;
    fn homotopy(&self) -> &HomotopyCategory<'_>;
    fn fibre(&self, a: usize, b: usize, class: &[i64]) -> Result<Vec<Self::Zero>, BracketError>;
    fn compose0(&self, c: Comp, y: &Self::Zero, x: &Self::Zero) -> Self::Zero;
    /// All `α` with `dα = x`.
    fn nullhomotopies(&self, a: usize, b: usize, x: &Self::Zero) -> Result<Vec<Self::One>, BracketError>;
    /// `α ⊗ x`.
    fn right(&self, c: Comp, alpha: &Self::One, x: &Self::Zero) -> Self::One;
    /// `y ⊗ α`.
    fn left(&self, c: Comp, y: &Self::Zero, alpha: &Self::One) -> Self::One;
    fn sub1(&self, a: usize, b: usize, u: &Self::One, v: &Self::One) -> Self::One;
    /// The `H1` class of a cycle.
    fn class1(&self, a: usize, b: usize, z: &Self::One) -> Elem;
    /// Cycles lifting the generators of `H1`.
    fn h1_lifts(&self, a: usize, b: usize) -> Vec<Self::One>;
}

/// A track category read as a DG-category through its Moore complexes.
pub struct MooreDg<'t> {
    t: &'t dyn TrackCategory,
    h: HomotopyCategory<'t>,
}

impl<'t> MooreDg<'t> {
    pub fn new(t: &'t dyn TrackCategory) -> Self {
        MooreDg {
            t,
            h: HomotopyCategory::new(t),
        }
    }
}

fn cycles_of(h: &HomotopyCategory<'_>, a: usize, b: usize) -> Result<Vec<Elem>, BracketError> {
    let hom = h.homology(a, b);
    let mut out = vec![];
    for c in hom.h1.enumerate_bounded(DEFAULT_ENUM_BOUND)? {
        out.push(hom.embed1(&c));
    }
    Ok(out)
}

/// `x + ∂C1`, in enumeration order of `C1`.
fn fibre_of(t: &dyn TrackCategory, h: &HomotopyCategory<'_>, a: usize, b: usize, class: &[i64]) -> Result<Vec<Elem>, BracketError> {
    let hom = t.hom(a, b);
    let x0 = h.lift(a, b, class);
    let set: BTreeSet<Elem> = hom
        .c1()
        .enumerate_bounded(DEFAULT_ENUM_BOUND)?
        .map(|r| hom.c0().add(&x0, &hom.boundary(&r)))
        .collect();
    Ok(set.into_iter().collect())
}

impl DgCategory for MooreDg<'_> {
    type Zero = Elem;
    type One = Elem;

    fn num_objects(&self) -> usize {
        self.t.num_objects()
    }

    fn homotopy(&self) -> &HomotopyCategory<'_> {
        &self.h
    }

    fn fibre(&self, a: usize, b: usize, class: &[i64]) -> Result<Vec<Elem>, BracketError> {
        fibre_of(self.t, &self.h, a, b, class)
    }

    fn compose0(&self, c: Comp, y: &Elem, x: &Elem) -> Elem {
        self.t.mu0(c, y, x)
    }

    fn nullhomotopies(&self, a: usize, b: usize, x: &Elem) -> Result<Vec<Elem>, BracketError> {
        let hom = self.t.hom(a, b);
        let a0 = hom.d().solve_preimage(x).ok_or_else(|| BracketError::NoNullhomotopy(format!("{x:?}")))?;
        Ok(cycles_of(&self.h, a, b)?.iter().map(|z| hom.c1().add(&a0, z)).collect())
    }

    fn right(&self, c: Comp, alpha: &Elem, x: &Elem) -> Elem {
        self.t.rwhisk(c, alpha, x)
    }

    fn left(&self, c: Comp, y: &Elem, alpha: &Elem) -> Elem {
        let base = self.t.hom(c.a, c.b).c0().zero();
        self.t.lwhisk(c, y, &Track::new(alpha.clone(), base))
    }

    fn sub1(&self, a: usize, b: usize, u: &Elem, v: &Elem) -> Elem {
        self.t.hom(a, b).c1().sub(u, v)
    }

    fn class1(&self, a: usize, b: usize, z: &Elem) -> Elem {
        self.h.homology(a, b).class1(z).expect("a cycle")
    }

    fn h1_lifts(&self, a: usize, b: usize) -> Vec<Elem> {
        let hom = self.h.homology(a, b);
        (0..hom.h1.rank()).map(|j| hom.embed1(&hom.h1.generator(j))).collect()
    }
}

/// `𝔹` over bounded maps; classes are read through `σ` in the target.
pub struct BoundedB<'b, 'p> {
    b: &'b StrictB<'p>,
    bounded: &'b Bounded,
    h: HomotopyCategory<'p>,
}

impl<'b, 'p> BoundedB<'b, 'p> {
    pub fn new(b: &'b StrictB<'p>, bounded: &'b Bounded) -> Self {
        BoundedB {
            b,
            bounded,
            h: HomotopyCategory::new(b.pseudo().target()),
        }
    }

    pub fn strict(&self) -> &StrictB<'p> {
        self.b
    }
}

impl DgCategory for BoundedB<'_, '_> {
    type Zero = LinComb;
    type One = BOne;

    fn num_objects(&self) -> usize {
        self.b.pseudo().source().graph.vertices()
    }

    fn homotopy(&self) -> &HomotopyCategory<'_> {
        &self.h
    }

    fn fibre(&self, a: usize, b: usize, class: &[i64]) -> Result<Vec<LinComb>, BracketError> {
        let p = self.b.pseudo();
        Ok(self
            .bounded
            .hom(a, b)
            .iter()
            .filter(|x| self.h.class_of(a, b, &p.s(x)) == class)
            .cloned()
            .collect())
    }

    fn compose0(&self, _: Comp, y: &LinComb, x: &LinComb) -> LinComb {
        self.b.compose0(y, x)
    }

    fn nullhomotopies(&self, a: usize, b: usize, x: &LinComb) -> Result<Vec<BOne>, BracketError> {
        let t = self.b.pseudo().target();
        let hom = t.hom(a, b);
        let sx = self.b.pseudo().s(x);
        let a0 = hom.d().solve_preimage(&sx).ok_or_else(|| BracketError::NoNullhomotopy(format!("{x:?}")))?;
        Ok(cycles_of(&self.h, a, b)?
            .iter()
            .map(|z| BOne {
                a: hom.c1().add(&a0, z),
                x: x.clone(),
            })
            .collect())
    }

    fn right(&self, _: Comp, alpha: &BOne, x: &LinComb) -> BOne {
        self.b.act_right(alpha, x)
    }

    fn left(&self, _: Comp, y: &LinComb, alpha: &BOne) -> BOne {
        self.b.act_left(y, alpha)
    }

    fn sub1(&self, _: usize, _: usize, u: &BOne, v: &BOne) -> BOne {
        self.b.sub(u, v)
    }

    fn class1(&self, a: usize, b: usize, z: &BOne) -> Elem {
        debug_assert!(z.x.is_zero());
        self.h.homology(a, b).class1(&self.b.sigma(z)).expect("a cycle")
    }

    fn h1_lifts(&self, a: usize, b: usize) -> Vec<BOne> {
        let hom = self.h.homology(a, b);
        let zero = self.b.zero(a, b);
        (0..hom.h1.rank())
            .map(|j| BOne {
                a: hom.embed1(&hom.h1.generator(j)),
                x: zero.x.clone(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketElement {
    pub class: Elem,
    /// `x1, x2, x3, a, b` of the first tuple reaching the class.
    pub witness: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bracket {
    pub problem: BracketProblem,
    pub elements: Vec<BracketElement>,
    /// `x1·H1(o3,o1) + H1(o2,o0)·x3`, enumerated.
    pub indeterminacy: Vec<Elem>,
    /// Whether the elements form one coset of the indeterminacy.
    pub coset: bool,
    pub tuples: u64,
}

impl Bracket {
    pub fn classes(&self) -> BTreeSet<Elem> {
        self.elements.iter().map(|e| e.class.clone()).collect()
    }
}

fn witness<Z: Serialize, O: Serialize>(x: [&Z; 3], a: &O, b: &O) -> serde_json::Value {
    serde_json::json!({"x1": x[0], "x2": x[1], "x3": x[2], "a": a, "b": b})
}

fn span(g: &FinAbGroup, gens: &[Elem]) -> BTreeSet<Elem> {
    let mut set = BTreeSet::from([g.zero()]);
    let mut frontier = vec![g.zero()];
    while let Some(v) = frontier.pop() {
        for s in gens {
            let w = g.add(&v, s);
            if set.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    set
}

fn finish(problem: &BracketProblem, found: BTreeMap<Elem, serde_json::Value>, indeterminacy: BTreeSet<Elem>, g: &FinAbGroup, tuples: u64) -> Bracket {
    let coset = match found.keys().next() {
        None => false,
        Some(v) => {
            let shifted: BTreeSet<Elem> = indeterminacy.iter().map(|i| g.add(v, i)).collect();
            shifted.iter().eq(found.keys())
        }
    };
    Bracket {
        problem: problem.clone(),
        elements: found
            .into_iter()
            .map(|(class, witness)| BracketElement { class, witness })
            .collect(),
        indeterminacy: indeterminacy.into_iter().collect(),
        coset,
        tuples,
    }
}

/// Fibres and nullhomotopies for a validated problem, as shared input of
/// both bracket computations.
struct Fibres<Z> {
    x: [Vec<Z>; 3],
}

fn fibres<D: DgCategory>(d: &D, problem: &BracketProblem) -> Result<Fibres<D::Zero>, BracketError> {
    problem.validate(d.homotopy(), d.num_objects())?;
    let f = |i: usize| {
        let (a, b) = problem.hom(i);
        d.fibre(a, b, &problem.classes[i])
    };
    Ok(Fibres { x: [f(0)?, f(1)?, f(2)?] })
}

/// `⟨y1, y2, y3⟩` as the set of classes of `a x3 − x1 b` with `∂a = x1x2`,
/// `∂b = x2x3`, over all representatives and all `a`, `b`.
pub fn massey_product<D: DgCategory>(d: &D, problem: &BracketProblem) -> Result<Bracket, BracketError> {
    let fib = fibres(d, problem)?;
    let o = problem.objects;
    let mut found = BTreeMap::new();
    let mut tuples = 0u64;
    for x2 in &fib.x[1] {
        for x1 in &fib.x[0] {
            let x12 = d.compose0(problem.c12(), x1, x2);
            let as_ = d.nullhomotopies(o[2], o[0], &x12)?;
            for x3 in &fib.x[2] {
                let x23 = d.compose0(problem.c23(), x2, x3);
                let bs = d.nullhomotopies(o[3], o[1], &x23)?;
                for a in &as_ {
                    let ax3 = d.right(problem.c12_3(), a, x3);
                    for b in &bs {
                        tuples += 1;
                        let v = d.sub1(o[3], o[0], &ax3, &d.left(problem.c1_23(), x1, b));
                        let class = d.class1(o[3], o[0], &v);
                        found.entry(class).or_insert_with(|| witness([x1, x2, x3], a, b));
                    }
                }
            }
        }
    }
    let g = d.homotopy().homology(o[3], o[0]).h1.clone();
    let (x1, x3) = (&fib.x[0][0], &fib.x[2][0]);
    let mut gens: Vec<Elem> = d
        .h1_lifts(o[3], o[1])
        .iter()
        .map(|c| d.class1(o[3], o[0], &d.left(problem.c1_23(), x1, c)))
        .collect();
    gens.extend(
        d.h1_lifts(o[2], o[0])
            .iter()
            .map(|c| d.class1(o[3], o[0], &d.right(problem.c12_3(), c, x3))),
    );
    Ok(finish(problem, found, span(&g, &gens), &g, tuples))
}

/// `⟨y1, y2, y3⟩` in a track category: classes of the loops
/// `(a x3) □ (x1 b)^⊟` at `0`, built with the track calculus of
/// `Hom(o3, o0)`.
pub fn toda_bracket(t: &dyn TrackCategory, problem: &BracketProblem) -> Result<Bracket, BracketError> {
    let h = HomotopyCategory::new(t);
    problem.validate(&h, t.num_objects())?;
    let o = problem.objects;
    let fib: Vec<Vec<Elem>> = (0..3)
        .map(|i| {
            let (a, b) = problem.hom(i);
            fibre_of(t, &h, a, b, &problem.classes[i])
        })
        .collect::<Result<_, _>>()?;
    let groupoid = DenormGroupoid::new(t.hom(o[3], o[0]).clone());
    let z30 = t.hom(o[3], o[0]).c0().zero();
    let z20 = t.hom(o[2], o[0]).c0().zero();
    let z31 = t.hom(o[3], o[1]).c0().zero();
    let nulls = |a: usize, b: usize, x: &Elem| -> Result<Vec<Track>, BracketError> {
        let hom = t.hom(a, b);
        let m0 = hom.d().solve_preimage(x).ok_or_else(|| BracketError::NoNullhomotopy(format!("{x:?}")))?;
        Ok(cycles_of(&h, a, b)?
            .iter()
            .map(|z| Track::new(hom.c1().add(&m0, z), hom.c0().zero()))
            .collect())
    };
    let mut found = BTreeMap::new();
    let mut tuples = 0u64;
    for x2 in &fib[1] {
        for x1 in &fib[0] {
            let x12 = t.mu0(problem.c12(), x1, x2);
            let as_ = nulls(o[2], o[0], &x12)?;
            for x3 in &fib[2] {
                let x23 = t.mu0(problem.c23(), x2, x3);
                let bs = nulls(o[3], o[1], &x23)?;
                for a in &as_ {
                    debug_assert_eq!(a.base, z20);
                    // a x3: x1x2x3 ⇒ 0
                    let ax3 = Track::new(t.rwhisk(problem.c12_3(), &a.moore, x3), z30.clone());
                    for b in &bs {
                        debug_assert_eq!(b.base, z31);
                        tuples += 1;
                        let x1b = Track::new(t.lwhisk(problem.c1_23(), x1, b), z30.clone());
                        let loop_ = groupoid
                            .compose(&ax3, &groupoid.invert(&x1b))
                            .expect("both tracks start at x1x2x3");
                        let class = h.homology(o[3], o[0]).class1(&loop_.moore).expect("a loop at 0");
                        found
                            .entry(class)
                            .or_insert_with(|| witness([x1, x2, x3], &a.moore, &b.moore));
                    }
                }
            }
        }
    }
    let g = h.homology(o[3], o[0]).h1.clone();
    let dg = MooreDg::new(t);
    let (x1, x3) = (&fib[0][0], &fib[2][0]);
    let mut gens: Vec<Elem> = dg
        .h1_lifts(o[3], o[1])
        .iter()
        .map(|c| dg.class1(o[3], o[0], &dg.left(problem.c1_23(), x1, c)))
        .collect();
    gens.extend(
        dg.h1_lifts(o[2], o[0])
            .iter()
            .map(|c| dg.class1(o[3], o[0], &dg.right(problem.c12_3(), c, x3))),
    );
    Ok(finish(problem, found, span(&g, &gens), &g, tuples))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub problem: BracketProblem,
    /// Tuples `(x, a, b)` on which `s(a x3 □ (x1 b)^⊟) = a'(s x3) □ ((s x1) b')^⊟`.
    pub representatives_checked: u64,
    pub representative_failure: Option<String>,
    /// `σ⟨y1,y2,y3⟩ ⊆ ⟨σy1,σy2,σy3⟩`.
    pub inclusion: bool,
    /// Whether `σ` is an isomorphism on `H0` and `H1` of the homs involved.
    pub iso: bool,
    /// Set equality, decided only under the iso hypothesis.
    pub equality: Option<bool>,
    pub source: Vec<Elem>,
    pub target: Vec<Elem>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.representative_failure.is_none() && self.inclusion && self.equality != Some(false)
    }
}

/// Checks `s(0) = 0` and `Γ(x, 0) = Γ(0, y) = 0` on bounded maps.
pub fn check_pointed(b: &StrictB<'_>, bounded: &Bounded) -> Result<(), BracketError> {
    let p = b.pseudo();
    let lin = p.source();
    let t = p.target();
    let n = lin.graph.vertices();
    for a in 0..n {
        for c in 0..n {
            let zero = b.zero(a, c).x;
            if !t.hom(a, c).c0().is_zero(&p.s(&zero)) {
                return Err(BracketError::NotPointed(format!("s(0) ≠ 0 on Hom({a},{c})")));
            }
        }
    }
    for c in crate::laws::object_tuples(n, 3) {
        let g1 = t.hom(c[0], c[2]).c1();
        let (zy, zx) = (b.zero(c[1], c[2]).x, b.zero(c[0], c[1]).x);
        for x in bounded.hom(c[0], c[1]) {
            if !g1.is_zero(&p.gamma(&zy, x)) {
                return Err(BracketError::NotPointed(format!("Γ(0, {x:?}) ≠ 0")));
            }
        }
        for y in bounded.hom(c[1], c[2]) {
            if !g1.is_zero(&p.gamma(y, &zx)) {
                return Err(BracketError::NotPointed(format!("Γ({y:?}, 0) ≠ 0")));
            }
        }
    }
    Ok(())
}

/// The transfer of Massey products in `𝔹` to Toda brackets in `T` along
/// `(s, Γ)` with `σ` on tracks.
pub fn transfer_check(d: &BoundedB<'_, '_>, problem: &BracketProblem, sigma_iso: bool) -> Result<TransferReport, BracketError> {
    let b = d.strict();
    let p = b.pseudo();
    let t = p.target();
    check_pointed(b, d.bounded)?;
    let fib = fibres(d, problem)?;
    let o = problem.objects;
    let g30 = t.hom(o[3], o[0]).c1();
    let mut checked = 0u64;
    let mut failure = None;
    'outer: for x1 in &fib.x[0] {
        for x2 in &fib.x[1] {
            let x12 = b.compose0(x1, x2);
            let s1 = p.s(x1);
            let g12 = p.gamma(x1, x2);
            for x3 in &fib.x[2] {
                let x23 = b.compose0(x2, x3);
                let s3 = p.s(x3);
                let g23 = p.gamma(x2, x3);
                for alpha in d.nullhomotopies(o[2], o[0], &x12)? {
                    for beta in d.nullhomotopies(o[3], o[1], &x23)? {
                        checked += 1;
                        let m = b.sub(&b.act_right(&alpha, x3), &b.act_left(x1, &beta));
                        let lhs = b.sigma(&m);
                        let a1 = t.hom(o[2], o[0]).c1().add(&alpha.a, &g12);
                        let b1 = t.hom(o[3], o[1]).c1().add(&beta.a, &g23);
                        let zero31 = t.hom(o[3], o[1]).c0().zero();
                        let rhs = g30.sub(
                            &t.rwhisk(problem.c12_3(), &a1, &s3),
                            &t.lwhisk(problem.c1_23(), &s1, &Track::new(b1, zero31)),
                        );
                        if lhs != rhs {
                            failure = Some(format!(
                                "x1 = {x1:?}, x2 = {x2:?}, x3 = {x3:?}, a = {:?}, b = {:?}: {lhs:?} != {rhs:?}",
                                alpha.a, beta.a
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    let source = massey_product(d, problem)?.classes();
    let target = toda_bracket(t, problem)?.classes();
    Ok(TransferReport {
        problem: problem.clone(),
        representatives_checked: checked,
        representative_failure: failure,
        inclusion: source.is_subset(&target),
        iso: sigma_iso,
        equality: sigma_iso.then(|| source == target),
        source: source.into_iter().collect(),
        target: target.into_iter().collect(),
    })
}

/// Problems with random objects and random classes subject to the
/// vanishing conditions; `None` if no object quadruple admits one.
pub fn random_problem(h: &HomotopyCategory<'_>, n: usize, rng: &mut impl Rng) -> Option<BracketProblem> {
    let classes = |a: usize, b: usize| -> Vec<Elem> {
        h.classes(a, b)
            .enumerate_bounded(DEFAULT_ENUM_BOUND)
            .map(|it| it.collect())
            .unwrap_or_default()
    };
    for _ in 0..64 {
        let objects = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
        let o = objects;
        let c2 = classes(o[2], o[1]);
        let y2 = c2.choose(rng)?.clone();
        let c1: Vec<Elem> = classes(o[1], o[0])
            .into_iter()
            .filter(|y1| h.classes(o[2], o[0]).is_zero(&h.compose(Comp::new(o[2], o[1], o[0]), y1, &y2)))
            .collect();
        let c3: Vec<Elem> = classes(o[3], o[2])
            .into_iter()
            .filter(|y3| h.classes(o[3], o[1]).is_zero(&h.compose(Comp::new(o[3], o[2], o[1]), &y2, y3)))
            .collect();
        if let (Some(y1), Some(y3)) = (c1.choose(rng), c3.choose(rng)) {
            return Some(BracketProblem {
                objects,
                classes: [y1.clone(), y2, y3.clone()],
            });
        }
    }
    None
}

pub fn random_problems(h: &HomotopyCategory<'_>, n: usize, count: usize, seed: u64) -> Vec<BracketProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).filter_map(|_| random_problem(h, n, &mut rng)).collect()
}
