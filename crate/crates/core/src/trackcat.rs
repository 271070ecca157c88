//! Finite track categories with abelian hom-groupoids, stored through their
//! Moore complexes, together with the axiom checker and DK comparison.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AbHom, ChainMap, Elem, FinAbGroup, Homology, TruncComplex1};
use crate::groupoid::{Composability, DenormGroupoid, Track};
use crate::laws::{expect_eq, run_laws, Budget, Law, Report};

/// Objects of a composable pair: `x: a -> b`, `y: b -> c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Comp {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl Comp {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        Comp { a, b, c }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrackCatError {
    #[error("two tracks have total degree 2; use pointwise_compose")]
    DegreeTwo,
    #[error(transparent)]
    Composability(#[from] Composability),
    #[error("the two factorizations of a pointwise composite differ: {0:?} vs {1:?}")]
    Interchange(Track, Track),
    #[error("hom map {from}->{to} is not a chain map: {detail}")]
    NotChainMap {
        from: usize,
        to: usize,
        detail: String,
    },
    #[error("object map has length {got}, expected {expected}")]
    ObjectMap { expected: usize, got: usize },
}

/// A cell of degree 0 (a map) or 1 (a track).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Map(Elem),
    Track(Track),
}

/// A finite track category whose hom-groupoids are abelian group objects.
///
/// `hom(a, b)` is the Moore complex of maps `a -> b`. Composition of
/// `y: b -> c` after `x: a -> b` is `mu0(Comp{a,b,c}, y, x)`.
pub trait TrackCategory: Send + Sync {
    fn name(&self) -> String;
    fn num_objects(&self) -> usize;
    fn object_label(&self, a: usize) -> String {
        a.to_string()
    }
    fn hom(&self, a: usize, b: usize) -> &TruncComplex1;
    fn mu0(&self, c: Comp, y: &[i64], x: &[i64]) -> Elem;
    /// Moore part of `α ⊗ x` for `α` with Moore part `h`.
    fn rwhisk(&self, c: Comp, h: &[i64], x: &[i64]) -> Elem;
    /// Moore part of `y ⊗ α`.
    fn lwhisk(&self, c: Comp, y: &[i64], t: &Track) -> Elem;
    fn unit(&self, a: usize) -> Elem;

    fn groupoid(&self, a: usize, b: usize) -> DenormGroupoid {
        DenormGroupoid::new(self.hom(a, b).clone())
    }

    /// `α ⊗ x`
    fn whisker_right(&self, c: Comp, alpha: &Track, x: &[i64]) -> Track {
        Track::new(self.rwhisk(c, &alpha.moore, x), self.mu0(c, &alpha.base, x))
    }

    /// `y ⊗ α`
    fn whisker_left(&self, c: Comp, y: &[i64], alpha: &Track) -> Track {
        Track::new(self.lwhisk(c, y, alpha), self.mu0(c, y, &alpha.base))
    }

    fn otimes(&self, c: Comp, u: &Cell, v: &Cell) -> Result<Cell, TrackCatError> {
        match (u, v) {
            (Cell::Map(y), Cell::Map(x)) => Ok(Cell::Map(self.mu0(c, y, x))),
            (Cell::Track(a), Cell::Map(x)) => Ok(Cell::Track(self.whisker_right(c, a, x))),
            (Cell::Map(y), Cell::Track(b)) => Ok(Cell::Track(self.whisker_left(c, y, b))),
            (Cell::Track(_), Cell::Track(_)) => Err(TrackCatError::DegreeTwo),
        }
    }

    /// Both factorizations of `αβ`, `(α ⊗ δ1β) □ (δ0α ⊗ β)` and
    /// `(δ1α ⊗ β) □ (α ⊗ δ0β)`.
    fn factorizations(
        &self,
        c: Comp,
        alpha: &Track,
        beta: &Track,
    ) -> Result<(Track, Track), TrackCatError> {
        let g_bc = self.groupoid(c.b, c.c);
        let g_ab = self.groupoid(c.a, c.b);
        let g_ac = self.groupoid(c.a, c.c);
        let (s_a, t_a) = (g_bc.source(alpha), g_bc.target(alpha));
        let (s_b, t_b) = (g_ab.source(beta), g_ab.target(beta));
        let first = g_ac.compose(
            &self.whisker_right(c, alpha, &t_b),
            &self.whisker_left(c, &s_a, beta),
        )?;
        let second = g_ac.compose(
            &self.whisker_left(c, &t_a, beta),
            &self.whisker_right(c, alpha, &s_b),
        )?;
        Ok((first, second))
    }

    fn pointwise_compose(
        &self,
        c: Comp,
        alpha: &Track,
        beta: &Track,
    ) -> Result<Track, TrackCatError> {
        let (f, g) = self.factorizations(c, alpha, beta)?;
        if f != g {
            return Err(TrackCatError::Interchange(f, g));
        }
        Ok(f)
    }
}

impl<T: TrackCategory + ?Sized> TrackCategory for &T {
    fn name(&self) -> String {
        (**self).name()
    }
    fn num_objects(&self) -> usize {
        (**self).num_objects()
    }
    fn object_label(&self, a: usize) -> String {
        (**self).object_label(a)
    }
    fn hom(&self, a: usize, b: usize) -> &TruncComplex1 {
        (**self).hom(a, b)
    }
    fn mu0(&self, c: Comp, y: &[i64], x: &[i64]) -> Elem {
        (**self).mu0(c, y, x)
    }
    fn rwhisk(&self, c: Comp, h: &[i64], x: &[i64]) -> Elem {
        (**self).rwhisk(c, h, x)
    }
    fn lwhisk(&self, c: Comp, y: &[i64], t: &Track) -> Elem {
        (**self).lwhisk(c, y, t)
    }
    fn unit(&self, a: usize) -> Elem {
        (**self).unit(a)
    }
}

fn hom0(t: &dyn TrackCategory, a: usize, b: usize) -> FinAbGroup {
    t.hom(a, b).c0().clone()
}

fn hom1(t: &dyn TrackCategory, a: usize, b: usize) -> FinAbGroup {
    t.hom(a, b).c1().clone()
}

fn comp3(o: &[usize]) -> Comp {
    Comp::new(o[0], o[1], o[2])
}

fn split_track(t: &dyn TrackCategory, a: usize, b: usize, v: &[i64]) -> Track {
    let n1 = t.hom(a, b).c1().rank();
    Track::new(v[..n1].to_vec(), v[n1..].to_vec())
}

fn tracks_group(t: &dyn TrackCategory, a: usize, b: usize) -> FinAbGroup {
    hom1(t, a, b).direct_sum(&hom0(t, a, b))
}

/// All laws of a pointed, left-linear track category with abelian
/// hom-groupoids, phrased on Moore parts.
pub fn axiom_laws<'a>(t: &'a dyn TrackCategory) -> Vec<Law<'a>> {
    let mut laws = Vec::new();

    laws.push(Law::new(
        "pointed.mu0",
        3,
        move |o| Some(vec![hom0(t, o[1], o[2]), hom0(t, o[0], o[1])]),
        move |o, e| {
            let c = comp3(o);
            let zero = t.hom(c.a, c.c).c0().zero();
            let zx = t.mu0(c, &t.hom(c.b, c.c).c0().zero(), &e[1]);
            let yz = t.mu0(c, &e[0], &t.hom(c.a, c.b).c0().zero());
            expect_eq(zx, zero.clone(), "0x")?;
            expect_eq(yz, zero, "y0")
        },
    ));
    laws.push(Law::new(
        "pointed.whisker",
        3,
        move |o| Some(vec![hom0(t, o[1], o[2]), hom0(t, o[0], o[1])]),
        move |o, e| {
            let c = comp3(o);
            let zero = t.hom(c.a, c.c).c1().zero();
            let r = t.rwhisk(c, &t.hom(c.b, c.c).c1().zero(), &e[1]);
            let zt = Track::new(t.hom(c.a, c.b).c1().zero(), t.hom(c.a, c.b).c0().zero());
            let l = t.lwhisk(c, &e[0], &zt);
            expect_eq(r, zero.clone(), "rwhisk(0, x)")?;
            expect_eq(l, zero, "lwhisk(y, 0)")
        },
    ));
    laws.push(Law::new(
        "unit",
        2,
        move |o| Some(vec![hom0(t, o[0], o[1])]),
        move |o, e| {
            let (a, b) = (o[0], o[1]);
            let x = &e[0];
            expect_eq(t.mu0(Comp::new(a, b, b), &t.unit(b), x), x.clone(), "1x")?;
            expect_eq(t.mu0(Comp::new(a, a, b), x, &t.unit(a)), x.clone(), "x1")
        },
    ));
    laws.push(Law::new(
        "unit.whisker",
        2,
        move |o| Some(vec![tracks_group(t, o[0], o[1])]),
        move |o, e| {
            let (a, b) = (o[0], o[1]);
            let al = split_track(t, a, b, &e[0]);
            let r = t.rwhisk(Comp::new(a, a, b), &al.moore, &t.unit(a));
            let l = t.lwhisk(Comp::new(a, b, b), &t.unit(b), &al);
            expect_eq(r, al.moore.clone(), "α ⊗ 1")?;
            expect_eq(l, al.moore, "1 ⊗ α")
        },
    ));
    laws.push(Law::new(
        "associativity",
        4,
        move |o| {
            Some(vec![
                hom0(t, o[2], o[3]),
                hom0(t, o[1], o[2]),
                hom0(t, o[0], o[1]),
            ])
        },
        move |o, e| {
            let (z, y, x) = (&e[0], &e[1], &e[2]);
            let zy = t.mu0(Comp::new(o[1], o[2], o[3]), z, y);
            let yx = t.mu0(Comp::new(o[0], o[1], o[2]), y, x);
            let lhs = t.mu0(Comp::new(o[0], o[1], o[3]), &zy, x);
            let rhs = t.mu0(Comp::new(o[0], o[2], o[3]), z, &yx);
            expect_eq(lhs, rhs, "(zy)x vs z(yx)")
        },
    ));
    laws.push(Law::new(
        "associativity.whisker",
        4,
        move |o| {
            Some(vec![
                hom0(t, o[2], o[3]),
                hom0(t, o[1], o[2]),
                hom0(t, o[0], o[1]),
                tracks_group(t, o[2], o[3]),
                tracks_group(t, o[1], o[2]),
                tracks_group(t, o[0], o[1]),
            ])
        },
        move |o, e| {
            let (z, y, x) = (&e[0], &e[1], &e[2]);
            let (a, b, c, d) = (o[0], o[1], o[2], o[3]);
            let al = split_track(t, c, d, &e[3]);
            let be = split_track(t, b, c, &e[4]);
            let ga = split_track(t, a, b, &e[5]);
            // (α ⊗ y) ⊗ x = α ⊗ (yx)
            let ay = t.whisker_right(Comp::new(b, c, d), &al, y);
            let lhs = t.rwhisk(Comp::new(a, b, d), &ay.moore, x);
            let rhs = t.rwhisk(Comp::new(a, c, d), &al.moore, &t.mu0(Comp::new(a, b, c), y, x));
            expect_eq(lhs, rhs, "(α⊗y)⊗x vs α⊗(yx)")?;
            // z ⊗ (y ⊗ γ) = (zy) ⊗ γ
            let yg = t.whisker_left(Comp::new(a, b, c), y, &ga);
            let lhs = t.lwhisk(Comp::new(a, c, d), z, &yg);
            let rhs = t.lwhisk(Comp::new(a, b, d), &t.mu0(Comp::new(b, c, d), z, y), &ga);
            expect_eq(lhs, rhs, "z⊗(y⊗γ) vs (zy)⊗γ")?;
            // (z ⊗ β) ⊗ x = z ⊗ (β ⊗ x)
            let zb = t.whisker_left(Comp::new(b, c, d), z, &be);
            let lhs = t.rwhisk(Comp::new(a, b, d), &zb.moore, x);
            let bx = t.whisker_right(Comp::new(a, b, c), &be, x);
            let rhs = t.lwhisk(Comp::new(a, c, d), z, &bx);
            expect_eq(lhs, rhs, "(z⊗β)⊗x vs z⊗(β⊗x)")
        },
    ));
    laws.push(Law::new(
        "left_linearity",
        3,
        move |o| {
            Some(vec![
                hom0(t, o[1], o[2]),
                hom0(t, o[1], o[2]),
                hom0(t, o[0], o[1]),
            ])
        },
        move |o, e| {
            let c = comp3(o);
            let g = t.hom(c.a, c.c).c0();
            let sum = t.hom(c.b, c.c).c0().add(&e[0], &e[1]);
            let lhs = t.mu0(c, &sum, &e[2]);
            let rhs = g.add(&t.mu0(c, &e[0], &e[2]), &t.mu0(c, &e[1], &e[2]));
            expect_eq(lhs, rhs, "(y+y')x vs yx+y'x")
        },
    ));
    laws.push(Law::new(
        "rwhisk.additive",
        3,
        move |o| {
            Some(vec![
                hom1(t, o[1], o[2]),
                hom1(t, o[1], o[2]),
                hom0(t, o[0], o[1]),
            ])
        },
        move |o, e| {
            let c = comp3(o);
            let g = t.hom(c.a, c.c).c1();
            let sum = t.hom(c.b, c.c).c1().add(&e[0], &e[1]);
            let lhs = t.rwhisk(c, &sum, &e[2]);
            let rhs = g.add(&t.rwhisk(c, &e[0], &e[2]), &t.rwhisk(c, &e[1], &e[2]));
            expect_eq(lhs, rhs, "(h+h')x vs hx+h'x")
        },
    ));
    laws.push(Law::new(
        "lwhisk.additive",
        3,
        move |o| {
            Some(vec![
                hom0(t, o[1], o[2]),
                hom0(t, o[1], o[2]),
                tracks_group(t, o[0], o[1]),
            ])
        },
        move |o, e| {
            let c = comp3(o);
            let g = t.hom(c.a, c.c).c1();
            let al = split_track(t, c.a, c.b, &e[2]);
            let sum = t.hom(c.b, c.c).c0().add(&e[0], &e[1]);
            let lhs = t.lwhisk(c, &sum, &al);
            let rhs = g.add(&t.lwhisk(c, &e[0], &al), &t.lwhisk(c, &e[1], &al));
            expect_eq(lhs, rhs, "(y+y')⊗α vs y⊗α+y'⊗α")
        },
    ));
    laws.push(Law::new(
        "boundary.rwhisk",
        3,
        move |o| Some(vec![hom1(t, o[1], o[2]), hom0(t, o[0], o[1])]),
        move |o, e| {
            let c = comp3(o);
            let lhs = t.hom(c.a, c.c).boundary(&t.rwhisk(c, &e[0], &e[1]));
            let rhs = t.mu0(c, &t.hom(c.b, c.c).boundary(&e[0]), &e[1]);
            expect_eq(lhs, rhs, "∂(h⊗x) vs (∂h)x")
        },
    ));
    laws.push(Law::new(
        "boundary.lwhisk",
        3,
        move |o| Some(vec![hom0(t, o[1], o[2]), tracks_group(t, o[0], o[1])]),
        move |o, e| {
            let c = comp3(o);
            let y = &e[0];
            let al = split_track(t, c.a, c.b, &e[1]);
            let g_ab = t.groupoid(c.a, c.b);
            let lhs = t.hom(c.a, c.c).boundary(&t.lwhisk(c, y, &al));
            let rhs = t
                .hom(c.a, c.c)
                .c0()
                .sub(&t.mu0(c, y, &g_ab.source(&al)), &t.mu0(c, y, &al.base));
            expect_eq(lhs, rhs, "∂(y⊗α) vs y δ0α − y δ1α")
        },
    ));
    laws.push(Law::new(
        "lwhisk.functorial",
        3,
        move |o| {
            Some(vec![
                hom0(t, o[1], o[2]),
                tracks_group(t, o[0], o[1]),
                hom1(t, o[0], o[1]),
            ])
        },
        move |o, e| {
            let c = comp3(o);
            let y = &e[0];
            let al = split_track(t, c.a, c.b, &e[1]);
            let g_ab = t.groupoid(c.a, c.b);
            let be = Track::new(e[2].clone(), g_ab.source(&al));
            let comp = g_ab.compose(&al, &be).map_err(|e| e.to_string())?;
            let lhs = t.lwhisk(c, y, &comp);
            let rhs = t
                .hom(c.a, c.c)
                .c1()
                .add(&t.lwhisk(c, y, &al), &t.lwhisk(c, y, &be));
            expect_eq(lhs, rhs, "y⊗(α□β) vs y⊗α + y⊗β")
        },
    ));
    laws.push(Law::new(
        "interchange",
        3,
        move |o| Some(vec![tracks_group(t, o[1], o[2]), tracks_group(t, o[0], o[1])]),
        move |o, e| {
            let c = comp3(o);
            let al = split_track(t, c.b, c.c, &e[0]);
            let be = split_track(t, c.a, c.b, &e[1]);
            let (f, g) = t.factorizations(c, &al, &be).map_err(|e| e.to_string())?;
            expect_eq(f, g, "pointwise factorizations")
        },
    ));
    laws
}

pub fn axiom_check(t: &dyn TrackCategory, budget: &Budget) -> Report {
    run_laws(&axiom_laws(t), t.num_objects(), budget)
}

/// `a(x+y) = ax + ay`; holds in bilinear instances and fails in left-only ones.
pub fn right_linearity_law<'a>(t: &'a dyn TrackCategory) -> Law<'a> {
    Law::new(
        "right_linearity",
        3,
        move |o| {
            Some(vec![
                hom0(t, o[1], o[2]),
                hom0(t, o[0], o[1]),
                hom0(t, o[0], o[1]),
            ])
        },
        move |o, e| {
            let c = comp3(o);
            let g = t.hom(c.a, c.c).c0();
            let sum = t.hom(c.a, c.b).c0().add(&e[1], &e[2]);
            let lhs = t.mu0(c, &e[0], &sum);
            let rhs = g.add(&t.mu0(c, &e[0], &e[1]), &t.mu0(c, &e[0], &e[2]));
            expect_eq(lhs, rhs, "a(x+y) vs ax+ay")
        },
    )
}

/// Optional probes that do not count towards validity.
pub fn right_linearity_probe(t: &dyn TrackCategory, budget: &Budget) -> Report {
    run_laws(&[right_linearity_law(t)], t.num_objects(), budget)
}

/// Classes of maps with the composition induced on `H0`.
pub struct HomotopyCategory<'a> {
    t: &'a dyn TrackCategory,
    homology: Vec<Vec<Homology>>,
}

impl<'a> HomotopyCategory<'a> {
    pub fn new(t: &'a dyn TrackCategory) -> Self {
        let n = t.num_objects();
        let homology = (0..n)
            .map(|a| (0..n).map(|b| t.hom(a, b).homology()).collect())
            .collect();
        HomotopyCategory { t, homology }
    }

    pub fn homology(&self, a: usize, b: usize) -> &Homology {
        &self.homology[a][b]
    }

    pub fn classes(&self, a: usize, b: usize) -> &FinAbGroup {
        &self.homology[a][b].h0
    }

    pub fn class_of(&self, a: usize, b: usize, x: &[i64]) -> Elem {
        self.homology[a][b].class0(x)
    }

    pub fn lift(&self, a: usize, b: usize, class: &[i64]) -> Elem {
        self.homology[a][b].lift0(class)
    }

    pub fn compose(&self, c: Comp, y: &[i64], x: &[i64]) -> Elem {
        let ry = self.lift(c.b, c.c, y);
        let rx = self.lift(c.a, c.b, x);
        self.class_of(c.a, c.c, &self.t.mu0(c, &ry, &rx))
    }

    /// Composition is independent of representatives and bilinear on classes.
    pub fn laws(&self) -> Vec<Law<'_>> {
        let t = self.t;
        vec![
            Law::new(
                "homotopy.well_defined",
                3,
                move |o| {
                    Some(vec![
                        hom0(t, o[1], o[2]),
                        hom0(t, o[0], o[1]),
                        hom1(t, o[1], o[2]),
                        hom1(t, o[0], o[1]),
                    ])
                },
                move |o, e| {
                    let c = comp3(o);
                    let y2 = t.hom(c.b, c.c).c0().add(&e[0], &t.hom(c.b, c.c).boundary(&e[2]));
                    let x2 = t.hom(c.a, c.b).c0().add(&e[1], &t.hom(c.a, c.b).boundary(&e[3]));
                    let lhs = self.class_of(c.a, c.c, &t.mu0(c, &e[0], &e[1]));
                    let rhs = self.class_of(c.a, c.c, &t.mu0(c, &y2, &x2));
                    expect_eq(lhs, rhs, "class of yx under ∂-perturbation")
                },
            ),
            Law::new(
                "homotopy.bilinear",
                3,
                move |o| {
                    Some(vec![
                        self.classes(o[1], o[2]).clone(),
                        self.classes(o[0], o[1]).clone(),
                        self.classes(o[0], o[1]).clone(),
                    ])
                },
                move |o, e| {
                    let c = comp3(o);
                    let h = self.classes(c.a, c.c);
                    let sum = self.classes(c.a, c.b).add(&e[1], &e[2]);
                    let lhs = self.compose(c, &e[0], &sum);
                    let rhs = h.add(&self.compose(c, &e[0], &e[1]), &self.compose(c, &e[0], &e[2]));
                    expect_eq(lhs, rhs, "[a][x+y] vs [a][x]+[a][y]")
                },
            ),
        ]
    }
}

/// A functor given on objects and, per hom, by maps of Moore complexes.
pub struct HomMaps {
    pub objects: Vec<usize>,
    /// `maps[a][b] = (f0, f1)` for `Hom(a,b) -> Hom(F a, F b)`.
    pub maps: Vec<Vec<(AbHom, AbHom)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomVerdict {
    pub source: usize,
    pub target: usize,
    pub h0_iso: bool,
    pub h1_iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DkVerdict {
    pub equivalence: bool,
    pub essentially_surjective: bool,
    pub functorial_on_h0: bool,
    pub homs: Vec<HomVerdict>,
    pub failures: Vec<String>,
}

/// Hom complexes with composition of 0-cells: what a Dwyer–Kan comparison
/// needs from the source of a functor.
pub trait HomComplexes {
    fn num_objects(&self) -> usize;
    fn hom(&self, a: usize, b: usize) -> &TruncComplex1;
    fn compose0(&self, c: Comp, y: &[i64], x: &[i64]) -> Elem;
    /// A representative of an `H0` class, used to test composition.
    fn representative(&self, a: usize, b: usize, h: &Homology, class: &[i64]) -> Elem {
        let _ = (a, b);
        h.lift0(class)
    }
}

/// A track category seen through its hom complexes.
pub struct AsComplexes<'a>(pub &'a dyn TrackCategory);

impl HomComplexes for AsComplexes<'_> {
    fn num_objects(&self) -> usize {
        self.0.num_objects()
    }
    fn hom(&self, a: usize, b: usize) -> &TruncComplex1 {
        self.0.hom(a, b)
    }
    fn compose0(&self, c: Comp, y: &[i64], x: &[i64]) -> Elem {
        self.0.mu0(c, y, x)
    }
}

/// Decides whether the functor is a Dwyer–Kan equivalence: every hom map a
/// quasi-isomorphism, the induced functor on homotopy categories
/// compatible with composition and essentially surjective.
pub fn dk_compare(
    map: &HomMaps,
    s: &dyn TrackCategory,
    t: &dyn TrackCategory,
) -> Result<DkVerdict, TrackCatError> {
    dk_compare_complexes(map, &AsComplexes(s), t)
}

pub fn dk_compare_complexes(
    map: &HomMaps,
    s: &dyn HomComplexes,
    t: &dyn TrackCategory,
) -> Result<DkVerdict, TrackCatError> {
    let n = s.num_objects();
    if map.objects.len() != n {
        return Err(TrackCatError::ObjectMap {
            expected: n,
            got: map.objects.len(),
        });
    }
    let hs: Vec<Vec<Homology>> = (0..n)
        .map(|a| (0..n).map(|b| s.hom(a, b).homology()).collect())
        .collect();
    let ht = HomotopyCategory::new(t);
    let mut chains = vec![];
    for a in 0..n {
        let mut row = vec![];
        for b in 0..n {
            let (f0, f1) = &map.maps[a][b];
            let cm = ChainMap::new(
                s.hom(a, b).clone(),
                t.hom(map.objects[a], map.objects[b]).clone(),
                f0.clone(),
                f1.clone(),
            )
            .map_err(|e| TrackCatError::NotChainMap {
                from: a,
                to: b,
                detail: e.to_string(),
            })?;
            row.push(cm);
        }
        chains.push(row);
    }
    let mut homs = vec![];
    let mut failures = vec![];
    for a in 0..n {
        for b in 0..n {
            let cm = &chains[a][b];
            let (fa, fb) = (map.objects[a], map.objects[b]);
            let h0 = cm.induced_h0(&hs[a][b], ht.homology(fa, fb)).is_iso();
            let h1 = cm.induced_h1(&hs[a][b], ht.homology(fa, fb)).is_iso();
            if !h0 {
                failures.push(format!("H0 of hom {a}->{b} not preserved"));
            }
            if !h1 {
                failures.push(format!("H1 of hom {a}->{b} not preserved"));
            }
            homs.push(HomVerdict {
                source: a,
                target: b,
                h0_iso: h0,
                h1_iso: h1,
            });
        }
    }
    // compatibility with composition on generators of the class groups
    let mut functorial = true;
    'outer: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let cs = Comp::new(a, b, c);
                let ct = Comp::new(map.objects[a], map.objects[b], map.objects[c]);
                let gy = &hs[b][c].h0;
                let gx = &hs[a][b].h0;
                for i in 0..gy.rank() {
                    for j in 0..gx.rank() {
                        let y = s.representative(b, c, &hs[b][c], &gy.generator(i));
                        let x = s.representative(a, b, &hs[a][b], &gx.generator(j));
                        let lhs = chains[a][c].f0.apply(&s.compose0(cs, &y, &x));
                        let rhs = t.mu0(ct, &chains[b][c].f0.apply(&y), &chains[a][b].f0.apply(&x));
                        if ht.class_of(ct.a, ct.c, &lhs) != ht.class_of(ct.a, ct.c, &rhs) {
                            functorial = false;
                            failures.push(format!("composition not preserved on {a}->{b}->{c}"));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    let ess = essentially_surjective(&map.objects, &ht);
    if !ess {
        failures.push("some object of the target is not reached up to isomorphism".into());
    }
    Ok(DkVerdict {
        equivalence: failures.is_empty(),
        essentially_surjective: ess,
        functorial_on_h0: functorial,
        homs,
        failures,
    })
}

fn essentially_surjective(objects: &[usize], ht: &HomotopyCategory<'_>) -> bool {
    let n = ht.t.num_objects();
    (0..n).all(|y| {
        objects.iter().any(|&x| x == y || isomorphic(ht, x, y))
    })
}

/// Searches `H0(x,y) × H0(y,x)` for mutually inverse classes.
fn isomorphic(ht: &HomotopyCategory<'_>, x: usize, y: usize) -> bool {
    let (gxy, gyx) = (ht.classes(x, y), ht.classes(y, x));
    let id_x = ht.class_of(x, x, &ht.t.unit(x));
    let id_y = ht.class_of(y, y, &ht.t.unit(y));
    let Ok(fs) = gxy.enumerate() else { return false };
    for f in fs {
        let Ok(gs) = gyx.enumerate() else { return false };
        for g in gs {
            if ht.compose(Comp::new(x, y, x), &g, &f) == id_x
                && ht.compose(Comp::new(y, x, y), &f, &g) == id_y
            {
                return true;
            }
        }
    }
    false
}

/// The identity functor as hom maps.
pub fn identity_maps(t: &dyn TrackCategory) -> HomMaps {
    let n = t.num_objects();
    HomMaps {
        objects: (0..n).collect(),
        maps: (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (
                            AbHom::identity(t.hom(a, b).c0()),
                            AbHom::identity(t.hom(a, b).c1()),
                        )
                    })
                    .collect()
            })
            .collect(),
    }
}
