//! Linearity tracks `Γ_a^{x,y}: a(x+y) ⇒ ax + ay`, their seven equations,
//! iterated tracks and the integer family `Γ(n)_a`.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AbHom, ChainMap, Elem, FinAbGroup};
use crate::groupoid::Track;
use crate::laws::{expect_eq, run_laws, Budget, Law, Report};
use crate::trackcat::{Comp, TrackCategory};

/// A choice of linearity tracks, stored by Moore parts.
///
/// `gamma(c, a, x, y)` is the Moore part of `Γ_a^{x,y}` for
/// `x, y: c.a -> c.b` and `a: c.b -> c.c`; its base is `ax + ay`.
pub trait LinearitySystem: Send + Sync {
    fn name(&self) -> String;
    fn gamma(&self, t: &dyn TrackCategory, c: Comp, a: &[i64], x: &[i64], y: &[i64]) -> Elem;
    /// Whether the system is defined for maps with these endpoints.
    fn defined(&self, _c: Comp) -> bool {
        true
    }
}

impl<L: LinearitySystem + ?Sized> LinearitySystem for Box<L> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn gamma(&self, t: &dyn TrackCategory, c: Comp, a: &[i64], x: &[i64], y: &[i64]) -> Elem {
        (**self).gamma(t, c, a, x, y)
    }
    fn defined(&self, c: Comp) -> bool {
        (**self).defined(c)
    }
}

/// `Γ = id` everywhere; valid exactly for bilinear instances.
#[derive(Clone, Debug, Default)]
pub struct IdentityGamma;

impl LinearitySystem for IdentityGamma {
    fn name(&self) -> String {
        "identity".into()
    }
    fn gamma(&self, t: &dyn TrackCategory, c: Comp, _: &[i64], _: &[i64], _: &[i64]) -> Elem {
        t.hom(c.a, c.c).c1().zero()
    }
}

/// Extensional table; entries not listed are zero.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TableGamma {
    pub entries: HashMap<(Comp, Elem, Elem, Elem), Elem>,
}

impl LinearitySystem for TableGamma {
    fn name(&self) -> String {
        "table".into()
    }
    fn gamma(&self, t: &dyn TrackCategory, c: Comp, a: &[i64], x: &[i64], y: &[i64]) -> Elem {
        self.entries
            .get(&(c, a.to_vec(), x.to_vec(), y.to_vec()))
            .cloned()
            .unwrap_or_else(|| t.hom(c.a, c.c).c1().zero())
    }
}

/// Wraps a system and adds `delta` to one entry.
pub struct MutatedGamma<L> {
    pub inner: L,
    pub at: (Comp, Elem, Elem, Elem),
    pub delta: Elem,
}

impl<L: LinearitySystem> LinearitySystem for MutatedGamma<L> {
    fn name(&self) -> String {
        format!("{}+mutation", self.inner.name())
    }
    fn gamma(&self, t: &dyn TrackCategory, c: Comp, a: &[i64], x: &[i64], y: &[i64]) -> Elem {
        let g = self.inner.gamma(t, c, a, x, y);
        if (c, a, x, y) == (self.at.0, &self.at.1[..], &self.at.2[..], &self.at.3[..]) {
            t.hom(c.a, c.c).c1().add(&g, &self.delta)
        } else {
            g
        }
    }
    fn defined(&self, c: Comp) -> bool {
        self.inner.defined(c)
    }
}

/// The linearity track as a full track.
pub fn gamma_track(
    t: &dyn TrackCategory,
    l: &dyn LinearitySystem,
    c: Comp,
    a: &[i64],
    x: &[i64],
    y: &[i64],
) -> Track {
    let g0 = t.hom(c.a, c.c).c0();
    Track::new(
        l.gamma(t, c, a, x, y),
        g0.add(&t.mu0(c, a, x), &t.mu0(c, a, y)),
    )
}

fn h0(t: &dyn TrackCategory, a: usize, b: usize) -> FinAbGroup {
    t.hom(a, b).c0().clone()
}

fn h1(t: &dyn TrackCategory, a: usize, b: usize) -> FinAbGroup {
    t.hom(a, b).c1().clone()
}

pub const EQUATIONS: [&str; 7] = [
    "eq1.precomposition",
    "eq2.postcomposition",
    "eq3.symmetry",
    "eq4.left_linearity",
    "eq5.associativity",
    "eq6.naturality_in_xy",
    "eq7.naturality_in_a",
];

/// The boundary condition, the seven equations and the two derived
/// unit/zero identities.
pub fn linearity_laws<'a>(t: &'a dyn TrackCategory, l: &'a dyn LinearitySystem) -> Vec<Law<'a>> {
    let def3 = move |o: &[usize]| l.defined(Comp::new(o[0], o[1], o[2]));
    let mut laws = Vec::new();
    laws.push(Law::new(
        "boundary",
        3,
        move |o| {
            def3(o).then(|| vec![h0(t, o[1], o[2]), h0(t, o[0], o[1]), h0(t, o[0], o[1])])
        },
        move |o, e| {
            let c = Comp::new(o[0], o[1], o[2]);
            let (a, x, y) = (&e[0], &e[1], &e[2]);
            let g0 = t.hom(c.a, c.c).c0();
            let sum = t.hom(c.a, c.b).c0().add(x, y);
            let expect = g0.sub(&t.mu0(c, a, &sum), &g0.add(&t.mu0(c, a, x), &t.mu0(c, a, y)));
            expect_eq(t.hom(c.a, c.c).boundary(&l.gamma(t, c, a, x, y)), expect, "∂Γ")
        },
    ));
    // (1) Γ_a^{xz,yz} = Γ_a^{x,y} z, objects d -> a -> b -> c
    laws.push(Law::new(
        EQUATIONS[0],
        4,
        move |o| {
            (l.defined(Comp::new(o[1], o[2], o[3])) && l.defined(Comp::new(o[0], o[2], o[3])))
                .then(|| {
                    vec![
                        h0(t, o[2], o[3]),
                        h0(t, o[1], o[2]),
                        h0(t, o[1], o[2]),
                        h0(t, o[0], o[1]),
                    ]
                })
        },
        move |o, e| {
            let (a, x, y, z) = (&e[0], &e[1], &e[2], &e[3]);
            let c_inner = Comp::new(o[1], o[2], o[3]);
            let c_pre = Comp::new(o[0], o[1], o[2]);
            let c_outer = Comp::new(o[0], o[2], o[3]);
            let (xz, yz) = (t.mu0(c_pre, x, z), t.mu0(c_pre, y, z));
            let lhs = gamma_track(t, l, c_outer, a, &xz, &yz);
            let g = gamma_track(t, l, c_inner, a, x, y);
            let rhs = t.whisker_right(Comp::new(o[0], o[1], o[3]), &g, z);
            expect_eq(lhs, rhs, "Γ_a^{xz,yz} vs Γ_a^{x,y} z")
        },
    ));
    // (2) Γ_{ba}^{x,y} = Γ_b^{ax,ay} □ bΓ_a^{x,y}, objects A -> B -> C -> D
    laws.push(Law::new(
        EQUATIONS[1],
        4,
        move |o| {
            (l.defined(Comp::new(o[0], o[1], o[2]))
                && l.defined(Comp::new(o[0], o[2], o[3]))
                && l.defined(Comp::new(o[0], o[1], o[3])))
            .then(|| {
                vec![
                    h0(t, o[2], o[3]),
                    h0(t, o[1], o[2]),
                    h0(t, o[0], o[1]),
                    h0(t, o[0], o[1]),
                ]
            })
        },
        move |o, e| {
            let (b, a, x, y) = (&e[0], &e[1], &e[2], &e[3]);
            let (oa, ob, oc, od) = (o[0], o[1], o[2], o[3]);
            let ba = t.mu0(Comp::new(ob, oc, od), b, a);
            let lhs = gamma_track(t, l, Comp::new(oa, ob, od), &ba, x, y);
            let ga = gamma_track(t, l, Comp::new(oa, ob, oc), a, x, y);
            let bga = t.whisker_left(Comp::new(oa, oc, od), b, &ga);
            let cx = Comp::new(oa, ob, oc);
            let gb = gamma_track(
                t,
                l,
                Comp::new(oa, oc, od),
                b,
                &t.mu0(cx, a, x),
                &t.mu0(cx, a, y),
            );
            let rhs = t
                .groupoid(oa, od)
                .compose(&gb, &bga)
                .map_err(|e| e.to_string())?;
            expect_eq(lhs, rhs, "Γ_{ba}^{x,y} vs Γ_b^{ax,ay} □ bΓ_a^{x,y}")
        },
    ));
    laws.push(Law::new(
        EQUATIONS[2],
        3,
        move |o| {
            def3(o).then(|| vec![h0(t, o[1], o[2]), h0(t, o[0], o[1]), h0(t, o[0], o[1])])
        },
        move |o, e| {
            let c = Comp::new(o[0], o[1], o[2]);
            let (a, x, y) = (&e[0], &e[1], &e[2]);
            expect_eq(
                gamma_track(t, l, c, a, x, y),
                gamma_track(t, l, c, a, y, x),
                "Γ_a^{x,y} vs Γ_a^{y,x}",
            )
        },
    ));
    laws.push(Law::new(
        EQUATIONS[3],
        3,
        move |o| {
            def3(o).then(|| {
                vec![
                    h0(t, o[1], o[2]),
                    h0(t, o[1], o[2]),
                    h0(t, o[0], o[1]),
                    h0(t, o[0], o[1]),
                ]
            })
        },
        move |o, e| {
            let c = Comp::new(o[0], o[1], o[2]);
            let (a, a2, x, y) = (&e[0], &e[1], &e[2], &e[3]);
            let sum = t.hom(c.b, c.c).c0().add(a, a2);
            let g = t.groupoid(c.a, c.c);
            let rhs = g.add(&gamma_track(t, l, c, a, x, y), &gamma_track(t, l, c, a2, x, y));
            expect_eq(gamma_track(t, l, c, &sum, x, y), rhs, "Γ_{a+a'} vs Γ_a + Γ_{a'}")
        },
    ));
    laws.push(Law::new(
        EQUATIONS[4],
        3,
        move |o| {
            def3(o).then(|| {
                vec![
                    h0(t, o[1], o[2]),
                    h0(t, o[0], o[1]),
                    h0(t, o[0], o[1]),
                    h0(t, o[0], o[1]),
                ]
            })
        },
        move |o, e| {
            let c = Comp::new(o[0], o[1], o[2]);
            let (a, x, y, z) = (&e[0], &e[1], &e[2], &e[3]);
            let s = t.hom(c.a, c.b).c0();
            let g = t.groupoid(c.a, c.c);
            let id = |v: &Elem| g.identity(&t.mu0(c, a, v));
            let lhs = g
                .compose(
                    &g.add(&gamma_track(t, l, c, a, x, y), &id(z)),
                    &gamma_track(t, l, c, a, &s.add(x, y), z),
                )
                .map_err(|e| e.to_string())?;
            let rhs = g
                .compose(
                    &g.add(&id(x), &gamma_track(t, l, c, a, y, z)),
                    &gamma_track(t, l, c, a, x, &s.add(y, z)),
                )
                .map_err(|e| e.to_string())?;
            expect_eq(lhs, rhs, "(Γ^{x,y}+az)□Γ^{x+y,z} vs (ax+Γ^{y,z})□Γ^{x,y+z}")
        },
    ));
    // (6) G: x ⇒ x', H: y ⇒ y' given as Moore parts with targets x', y'
    laws.push(Law::new(
        EQUATIONS[5],
        3,
        move |o| {
            def3(o).then(|| {
                vec![
                    h0(t, o[1], o[2]),
                    h1(t, o[0], o[1]),
                    h0(t, o[0], o[1]),
                    h1(t, o[0], o[1]),
                    h0(t, o[0], o[1]),
                ]
            })
        },
        move |o, e| {
            let c = Comp::new(o[0], o[1], o[2]);
            let a = &e[0];
            let gab = t.groupoid(c.a, c.b);
            let gac = t.groupoid(c.a, c.c);
            let big_g = Track::new(e[1].clone(), e[2].clone());
            let big_h = Track::new(e[3].clone(), e[4].clone());
            let (x, y) = (gab.source(&big_g), gab.source(&big_h));
            let (x2, y2) = (e[2].clone(), e[4].clone());
            let lhs = gac
                .compose(
                    &gac.add(&t.whisker_left(c, a, &big_g), &t.whisker_left(c, a, &big_h)),
                    &gamma_track(t, l, c, a, &x, &y),
                )
                .map_err(|e| e.to_string())?;
            let rhs = gac
                .compose(
                    &gamma_track(t, l, c, a, &x2, &y2),
                    &t.whisker_left(c, a, &gab.add(&big_g, &big_h)),
                )
                .map_err(|e| e.to_string())?;
            expect_eq(lhs, rhs, "(aG+aH)□Γ_a^{x,y} vs Γ_a^{x',y'}□a(G+H)")
        },
    ));
    // (7) α: a ⇒ a' given by Moore part and target a'
    laws.push(Law::new(
        EQUATIONS[6],
        3,
        move |o| {
            def3(o).then(|| {
                vec![
                    h1(t, o[1], o[2]),
                    h0(t, o[1], o[2]),
                    h0(t, o[0], o[1]),
                    h0(t, o[0], o[1]),
                ]
            })
        },
        move |o, e| {
            let c = Comp::new(o[0], o[1], o[2]);
            let gbc = t.groupoid(c.b, c.c);
            let gac = t.groupoid(c.a, c.c);
            let alpha = Track::new(e[0].clone(), e[1].clone());
            let (a, a2) = (gbc.source(&alpha), e[1].clone());
            let (x, y) = (&e[2], &e[3]);
            let sum = t.hom(c.a, c.b).c0().add(x, y);
            let lhs = gac
                .compose(
                    &gac.add(&t.whisker_right(c, &alpha, x), &t.whisker_right(c, &alpha, y)),
                    &gamma_track(t, l, c, &a, x, y),
                )
                .map_err(|e| e.to_string())?;
            let rhs = gac
                .compose(
                    &gamma_track(t, l, c, &a2, x, y),
                    &t.whisker_right(c, &alpha, &sum),
                )
                .map_err(|e| e.to_string())?;
            expect_eq(lhs, rhs, "(αx+αy)□Γ_a^{x,y} vs Γ_{a'}^{x,y}□α(x+y)")
        },
    ));
    laws.push(Law::new(
        "derived.unit",
        2,
        move |o| {
            l.defined(Comp::new(o[0], o[1], o[1]))
                .then(|| vec![h0(t, o[0], o[1]), h0(t, o[0], o[1])])
        },
        move |o, e| {
            let c = Comp::new(o[0], o[1], o[1]);
            let g = l.gamma(t, c, &t.unit(o[1]), &e[0], &e[1]);
            expect_eq(g, t.hom(o[0], o[1]).c1().zero(), "Γ_1^{x,y}")
        },
    ));
    laws.push(Law::new(
        "derived.zero",
        3,
        move |o| def3(o).then(|| vec![h0(t, o[1], o[2]), h0(t, o[0], o[1])]),
        move |o, e| {
            let c = Comp::new(o[0], o[1], o[2]);
            let zero = t.hom(c.a, c.b).c0().zero();
            let g = l.gamma(t, c, &e[0], &e[1], &zero);
            expect_eq(g, t.hom(c.a, c.c).c1().zero(), "Γ_a^{x,0}")
        },
    ));
    laws
}

pub fn verify_linearity(t: &dyn TrackCategory, l: &dyn LinearitySystem, budget: &Budget) -> Report {
    run_laws(&linearity_laws(t, l), t.num_objects(), budget)
}

/// `Γ_a^{x1,...,xn}: a(x1+...+xn) ⇒ ax1+...+axn`, built left to right.
pub fn iterated_gamma(
    t: &dyn TrackCategory,
    l: &dyn LinearitySystem,
    c: Comp,
    a: &[i64],
    xs: &[Elem],
) -> Track {
    assert!(!xs.is_empty(), "iterated linearity track needs at least one map");
    let s = t.hom(c.a, c.b).c0();
    let g = t.groupoid(c.a, c.c);
    let mut acc = g.identity(&t.mu0(c, a, &xs[0]));
    let mut sum = xs[0].clone();
    for x in &xs[1..] {
        let step = gamma_track(t, l, c, a, &sum, x);
        let widened = g.add(&acc, &g.identity(&t.mu0(c, a, x)));
        acc = g
            .compose(&widened, &step)
            .expect("iterated linearity tracks compose");
        sum = s.add(&sum, x);
    }
    acc
}

/// A bracketing of a sum: a leaf is an index into the summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bracketing {
    Leaf(usize),
    Node(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    /// Every binary bracketing of the given leaf sequence.
    pub fn all(leaves: &[usize]) -> Vec<Bracketing> {
        if leaves.len() == 1 {
            return vec![Bracketing::Leaf(leaves[0])];
        }
        let mut out = vec![];
        for k in 1..leaves.len() {
            for l in Bracketing::all(&leaves[..k]) {
                for r in Bracketing::all(&leaves[k..]) {
                    out.push(Bracketing::Node(Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        out
    }
}

/// The track `a(Σ x_i) ⇒ Σ a x_i` obtained by breaking the sum along `b`.
/// Returns the track and the sum of the summands it covers.
pub fn bracketed_gamma(
    t: &dyn TrackCategory,
    l: &dyn LinearitySystem,
    c: Comp,
    a: &[i64],
    xs: &[Elem],
    b: &Bracketing,
) -> (Track, Elem) {
    let g = t.groupoid(c.a, c.c);
    match b {
        Bracketing::Leaf(i) => (g.identity(&t.mu0(c, a, &xs[*i])), xs[*i].clone()),
        Bracketing::Node(lb, rb) => {
            let (tl, sl) = bracketed_gamma(t, l, c, a, xs, lb);
            let (tr, sr) = bracketed_gamma(t, l, c, a, xs, rb);
            let step = gamma_track(t, l, c, a, &sl, &sr);
            let track = g
                .compose(&g.add(&tl, &tr), &step)
                .expect("bracketed linearity tracks compose");
            (track, t.hom(c.a, c.b).c0().add(&sl, &sr))
        }
    }
}

/// `Γ(n)_a: a(n·1) ⇒ n·a` for `a: src -> tgt` and any integer `n`.
/// `Γ(0)_a` is the identity track at `0`.
pub fn gamma_int(
    t: &dyn TrackCategory,
    l: &dyn LinearitySystem,
    src: usize,
    tgt: usize,
    a: &[i64],
    n: i64,
) -> Track {
    let c = Comp::new(src, src, tgt);
    let e = t.hom(src, src).c0();
    let one = t.unit(src);
    let g = t.groupoid(src, tgt);
    match n {
        0 => g.identity(&t.hom(src, tgt).c0().zero()),
        n if n > 0 => iterated_gamma(t, l, c, a, &vec![one; n as usize]),
        -1 => {
            let minus = e.neg(&one);
            let gm = gamma_track(t, l, c, a, &one, &minus);
            let shifted = g.add(&gm, &g.neg(&g.identity(a)));
            g.invert(&shifted)
        }
        n => {
            let m = -n;
            let gm1 = gamma_int(t, l, src, tgt, a, -1);
            let m_one = e.scale(m, &one);
            let first = t.whisker_right(c, &gm1, &m_one);
            let second = g.neg(&gamma_int(t, l, src, tgt, a, m));
            g.compose(&second, &first)
                .expect("negative linearity tracks compose")
        }
    }
}

/// Break-sum invariance for up to `max_terms` summands, over all
/// bracketings and orderings; the identities for `Γ(mn)`, `Γ(-m)` and
/// `Γ(m+n)` for `|m|, |n| ≤ max_mult`; and, given `p` annihilating every
/// map, `Γ(p²k) = id` at `0`.
pub fn iterated_laws<'a>(
    t: &'a dyn TrackCategory,
    l: &'a dyn LinearitySystem,
    max_terms: usize,
    max_mult: i64,
    p: Option<i64>,
) -> Vec<Law<'a>> {
    let hom0 = move |a: usize, b: usize| t.hom(a, b).c0().clone();
    let mut laws = vec![Law::new(
        "iterated.break_sum",
        3,
        move |o| {
            let c = Comp::new(o[0], o[1], o[2]);
            if !l.defined(c) {
                return None;
            }
            let mut gs = vec![hom0(o[1], o[2])];
            gs.extend(std::iter::repeat_n(hom0(o[0], o[1]), max_terms));
            Some(gs)
        },
        move |o, e| {
            let c = Comp::new(o[0], o[1], o[2]);
            let (a, xs) = (&e[0], &e[1..]);
            for n in 2..=xs.len() {
                let want = iterated_gamma(t, l, c, a, &xs[..n]);
                for perm in (0..n).permutations(n) {
                    for b in Bracketing::all(&perm) {
                        let (got, _) = bracketed_gamma(t, l, c, a, xs, &b);
                        expect_eq(&got, &want, &format!("{b:?} of {n} terms"))?;
                    }
                }
            }
            Ok(())
        },
    )];
    let range: Vec<i64> = (-max_mult..=max_mult).collect();
    laws.push(Law::new(
        "iterated.gamma_mn",
        2,
        move |o| Some(vec![hom0(o[0], o[1])]),
        move |o, e| {
            let (src, tgt, a) = (o[0], o[1], &e[0]);
            let g = t.groupoid(src, tgt);
            for m in 1..=max_mult {
                for n in 1..=max_mult {
                    let n_one = t.hom(src, src).c0().scale(n, &t.unit(src));
                    let m_one = t.hom(tgt, tgt).c0().scale(m, &t.unit(tgt));
                    let first = t.whisker_right(Comp::new(src, src, tgt), &gamma_int(t, l, src, tgt, a, m), &n_one);
                    let second = t.whisker_left(Comp::new(src, tgt, tgt), &m_one, &gamma_int(t, l, src, tgt, a, n));
                    let rhs = g.compose(&second, &first).map_err(|e| format!("{e:?}"))?;
                    expect_eq(gamma_int(t, l, src, tgt, a, m * n), rhs, &format!("Γ({m}·{n})"))?;
                }
            }
            Ok(())
        },
    ));
    laws.push(Law::new(
        "iterated.gamma_neg",
        2,
        move |o| Some(vec![hom0(o[0], o[1])]),
        move |o, e| {
            let (src, tgt, a) = (o[0], o[1], &e[0]);
            let g = t.groupoid(src, tgt);
            let e0 = t.hom(src, src).c0();
            let minus = e0.neg(&t.unit(src));
            let gm1 = gamma_int(t, l, src, tgt, a, -1);
            for m in 1..=max_mult {
                let other = g
                    .compose(
                        &(1..m).fold(gm1.clone(), |acc, _| g.add(&acc, &gm1)),
                        &iterated_gamma(t, l, Comp::new(src, src, tgt), a, &vec![minus.clone(); m as usize]),
                    )
                    .map_err(|e| format!("{e:?}"))?;
                expect_eq(gamma_int(t, l, src, tgt, a, -m), other, &format!("Γ(-{m})"))?;
            }
            Ok(())
        },
    ));
    laws.push(Law::new(
        "iterated.gamma_sum",
        2,
        move |o| Some(vec![hom0(o[0], o[1])]),
        move |o, e| {
            let (src, tgt, a) = (o[0], o[1], &e[0]);
            let g = t.groupoid(src, tgt);
            let e0 = t.hom(src, src).c0();
            for &m in &range {
                for &n in &range {
                    let (mo, no) = (e0.scale(m, &t.unit(src)), e0.scale(n, &t.unit(src)));
                    let split = gamma_track(t, l, Comp::new(src, src, tgt), a, &mo, &no);
                    let both = g.add(&gamma_int(t, l, src, tgt, a, m), &gamma_int(t, l, src, tgt, a, n));
                    let rhs = g.compose(&both, &split).map_err(|e| format!("{e:?}"))?;
                    expect_eq(gamma_int(t, l, src, tgt, a, m + n), rhs, &format!("Γ({m}+{n})"))?;
                }
            }
            Ok(())
        },
    ));
    if let Some(p) = p {
        laws.push(Law::new(
            "iterated.gamma_p2",
            2,
            move |o| Some(vec![hom0(o[0], o[1])]),
            move |o, e| {
                let (src, tgt, a) = (o[0], o[1], &e[0]);
                let g = t.groupoid(src, tgt);
                let id0 = g.identity(&t.hom(src, tgt).c0().zero());
                for k in [1, 2, -1] {
                    expect_eq(gamma_int(t, l, src, tgt, a, k * p * p), id0.clone(), &format!("Γ({})", k * p * p))?;
                }
                Ok(())
            },
        ));
    }
    laws
}

/// The smallest prime `p` with `p·x = 0` for every map, if there is one.
pub fn annihilating_prime(t: &dyn TrackCategory) -> Option<i64> {
    let n = t.num_objects();
    let e = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .fold(1, |m, (a, b)| crate::algebra::lcm(m, t.hom(a, b).c0().exponent()));
    (e > 1 && crate::fixtures::is_prime(e)).then_some(e as i64)
}

pub fn verify_iterated(t: &dyn TrackCategory, l: &dyn LinearitySystem, budget: &Budget) -> Report {
    run_laws(&iterated_laws(t, l, 4, 3, annihilating_prime(t)), t.num_objects(), budget)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinearityError {
    #[error("object {0} has no designated square A×A")]
    NoProduct(usize),
    #[error("restriction along the inclusions is not an equivalence for Hom({square},{target}): H0 iso {h0}, H1 iso {h1}")]
    NotEquivalence {
        square: usize,
        target: usize,
        h0: bool,
        h1: bool,
    },
    #[error("no track satisfies the defining conditions for a = {0:?}")]
    NoSolution(Elem),
    #[error("hom group of order {0} too large to enumerate")]
    TooLarge(u128),
}

/// A designated square `A × A` with inclusions and projections.
#[derive(Clone, Debug)]
pub struct Square {
    pub obj: usize,
    pub i1: Elem,
    pub i2: Elem,
    pub p1: Elem,
    pub p2: Elem,
}

pub trait WeakSquares {
    fn square(&self, a: usize) -> Option<Square>;
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CanonicalEntry {
    pub moore: Elem,
    /// Number of Moore solutions; the lexicographically least is kept.
    pub multiplicity: u128,
}

/// Linearity tracks obtained from squares: `Γ_a` is a track
/// `a(p1+p2) ⇒ a p1 + a p2` restricting to identities along `i1`, `i2`,
/// and `Γ_a^{x,y} = Γ_a ⊗ (x,y)`.
pub struct CanonicalGamma {
    squares: HashMap<usize, Square>,
    entries: HashMap<(usize, usize, Elem), CanonicalEntry>,
}

impl CanonicalGamma {
    pub fn entry(&self, src: usize, tgt: usize, a: &[i64]) -> Option<&CanonicalEntry> {
        self.entries.get(&(src, tgt, a.to_vec()))
    }

    pub fn max_multiplicity(&self) -> u128 {
        self.entries.values().map(|e| e.multiplicity).max().unwrap_or(1)
    }
}

/// `(x, y) := i1 x + i2 y: X -> A×A`
pub fn pair(t: &dyn TrackCategory, sq: &Square, x_src: usize, a: usize, x: &[i64], y: &[i64]) -> Elem {
    let c = Comp::new(x_src, a, sq.obj);
    t.hom(x_src, sq.obj)
        .c0()
        .add(&t.mu0(c, &sq.i1, x), &t.mu0(c, &sq.i2, y))
}

/// Solves for `Γ_a` for one `a: A -> B`.
pub fn canonical_gamma(
    t: &dyn TrackCategory,
    squares: &dyn WeakSquares,
    src: usize,
    tgt: usize,
    a: &[i64],
) -> Result<CanonicalEntry, LinearityError> {
    let sq = squares.square(src).ok_or(LinearityError::NoProduct(src))?;
    let hs = t.hom(sq.obj, tgt);
    let hr = t.hom(src, tgt);
    let ci = Comp::new(src, sq.obj, tgt);
    // Φ(g) = (∂g, g i1, g i2)
    let target = hs.c0().direct_sum(hr.c1()).direct_sum(hr.c1());
    let phi = AbHom::from_fn(hs.c1(), &target, |g| {
        let mut v = hs.boundary(g);
        v.extend(t.rwhisk(ci, g, &sq.i1));
        v.extend(t.rwhisk(ci, g, &sq.i2));
        v
    })
    .expect("restriction is additive");
    let cp = Comp::new(sq.obj, src, tgt);
    let psum = t.hom(sq.obj, src).c0().add(&sq.p1, &sq.p2);
    let g0 = hs.c0();
    let d = g0.sub(
        &t.mu0(cp, a, &psum),
        &g0.add(&t.mu0(cp, a, &sq.p1), &t.mu0(cp, a, &sq.p2)),
    );
    let mut rhs = d;
    rhs.extend(hr.c1().zero());
    rhs.extend(hr.c1().zero());
    let base = phi
        .solve_preimage(&rhs)
        .ok_or_else(|| LinearityError::NoSolution(a.to_vec()))?;
    let kernel = phi.kernel();
    let multiplicity = kernel.group.order();
    let moore = if multiplicity == 1 {
        base
    } else {
        let elems = kernel
            .elements(1 << 20)
            .map_err(|_| LinearityError::TooLarge(multiplicity))?;
        elems
            .iter()
            .map(|k| hs.c1().add(&base, k))
            .min()
            .expect("kernel is nonempty")
    };
    Ok(CanonicalEntry {
        moore,
        multiplicity,
    })
}

/// Checks that restriction along `(i1, i2)` is an equivalence of
/// hom-groupoids `Hom(A×A, B) -> Hom(A,B) × Hom(A,B)`.
pub fn restriction_is_equivalence(
    t: &dyn TrackCategory,
    sq: &Square,
    src: usize,
    tgt: usize,
) -> Result<(), LinearityError> {
    let hs = t.hom(sq.obj, tgt);
    let hr = t.hom(src, tgt);
    let ci = Comp::new(src, sq.obj, tgt);
    let c1 = hr.c1().direct_sum(hr.c1());
    let c0 = hr.c0().direct_sum(hr.c0());
    let n1 = hr.c1().rank();
    let d = AbHom::from_fn(&c1, &c0, |v| {
        let mut w = hr.boundary(&v[..n1]);
        w.extend(hr.boundary(&v[n1..]));
        w
    })
    .expect("boundary of a product");
    let prod = crate::algebra::TruncComplex1::new(d);
    let f0 = AbHom::from_fn(hs.c0(), &c0, |x| {
        let mut w = t.mu0(ci, x, &sq.i1);
        w.extend(t.mu0(ci, x, &sq.i2));
        w
    })
    .expect("restriction is additive");
    let f1 = AbHom::from_fn(hs.c1(), &c1, |h| {
        let mut w = t.rwhisk(ci, h, &sq.i1);
        w.extend(t.rwhisk(ci, h, &sq.i2));
        w
    })
    .expect("restriction is additive");
    let cm = ChainMap::new(hs.clone(), prod, f0, f1).expect("restriction is a chain map");
    let (h0, h1) = cm.is_quasi_iso();
    if h0 && h1 {
        Ok(())
    } else {
        Err(LinearityError::NotEquivalence {
            square: sq.obj,
            target: tgt,
            h0,
            h1,
        })
    }
}

/// Canonical tracks for every `a: A -> B` where `A` has a square, after
/// checking the equivalence precondition.
pub fn canonical_system(
    t: &dyn TrackCategory,
    squares: &dyn WeakSquares,
    bound: u128,
) -> Result<CanonicalGamma, LinearityError> {
    let n = t.num_objects();
    let mut sqs = HashMap::new();
    let mut entries = HashMap::new();
    for src in 0..n {
        let Some(sq) = squares.square(src) else { continue };
        for tgt in 0..n {
            restriction_is_equivalence(t, &sq, src, tgt)?;
            let g = t.hom(src, tgt).c0();
            let elems = g
                .enumerate_bounded(bound)
                .map_err(|_| LinearityError::TooLarge(g.order()))?;
            for a in elems {
                let e = canonical_gamma(t, squares, src, tgt, &a)?;
                entries.insert((src, tgt, a), e);
            }
        }
        sqs.insert(src, sq);
    }
    Ok(CanonicalGamma {
        squares: sqs,
        entries,
    })
}

impl LinearitySystem for CanonicalGamma {
    fn name(&self) -> String {
        "canonical".into()
    }
    fn gamma(&self, t: &dyn TrackCategory, c: Comp, a: &[i64], x: &[i64], y: &[i64]) -> Elem {
        let sq = &self.squares[&c.b];
        let g = &self.entries[&(c.b, c.c, a.to_vec())].moore;
        let p = pair(t, sq, c.a, c.b, x, y);
        t.rwhisk(Comp::new(c.a, sq.obj, c.c), g, &p)
    }
    fn defined(&self, c: Comp) -> bool {
        self.squares.contains_key(&c.b)
    }
}
