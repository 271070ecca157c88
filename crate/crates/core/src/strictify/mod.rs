//! The action attached to a pseudo-functor, the 1-truncated DG-category
//! `𝔹` it defines, the relaxation zigzag and the end-to-end pipeline.

mod pipeline;
mod relax;

pub use pipeline::{strictify_pipeline, Dossier, PipelineOptions, ZigzagVerdicts};
pub use relax::{
    pair_form, BPseudo, BSource, FormTerm, Gtilde, Letter, LetterWord, RelaxError, RelaxPseudo, RelaxSource, Relaxation,
    TableForm, TableSource, WORD_LIMIT,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Elem, FinAbGroup};
use crate::freecat::LinComb;
use crate::groupoid::Track;
use crate::laws::{expect_eq, run_laws, Budget, Law, Report};
use crate::pseudo::{Bounded, PseudoFunctor};
use crate::trackcat::{Comp, HomotopyCategory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrictifyError {
    #[error("assumption {assumption} fails: {detail}")]
    Assumption { assumption: String, detail: String },
    #[error("maps {0} and {1} are not composable")]
    NotComposable(String, String),
    #[error("({a:?}, {x:?}) is not in the pullback: ∂a = {boundary:?}, s(x) = {sx:?}")]
    NotInPullback {
        a: Elem,
        x: LinComb,
        boundary: Elem,
        sx: Elem,
    },
    #[error(transparent)]
    Relax(#[from] RelaxError),
}

/// A degree-one element `(a, x)` of `𝔹`: a Moore element `a` with
/// `∂a = s(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BOne {
    pub a: Elem,
    pub x: LinComb,
}

/// `𝔹` over a pseudo-functor into a left linear track category: degree 0
/// is the source of the pseudo-functor, degree 1 the pullback of `s`
/// along `∂`.
pub struct StrictB<'p> {
    p: &'p dyn PseudoFunctor,
}

impl<'p> StrictB<'p> {
    pub fn new(p: &'p dyn PseudoFunctor) -> Self {
        StrictB { p }
    }

    pub fn pseudo(&self) -> &'p dyn PseudoFunctor {
        self.p
    }

    pub fn cell(&self, a: Elem, x: LinComb) -> Result<BOne, StrictifyError> {
        let hom = self.p.target().hom(x.source, x.target);
        let (boundary, sx) = (hom.boundary(&a), self.p.s(&x));
        if boundary != sx {
            return Err(StrictifyError::NotInPullback { a, x, boundary, sx });
        }
        Ok(BOne { a, x })
    }

    pub fn is_cell(&self, alpha: &BOne) -> bool {
        let hom = self.p.target().hom(alpha.x.source, alpha.x.target);
        hom.c1().contains(&alpha.a) && hom.boundary(&alpha.a) == self.p.s(&alpha.x)
    }

    pub fn d(&self, alpha: &BOne) -> LinComb {
        alpha.x.clone()
    }

    /// `σ`: the Moore element itself.
    pub fn sigma(&self, alpha: &BOne) -> Elem {
        alpha.a.clone()
    }

    pub fn zero(&self, a: usize, b: usize) -> BOne {
        BOne {
            a: self.p.target().hom(a, b).c1().zero(),
            x: LinComb::zero(self.p.source().ring, a, b),
        }
    }

    pub fn add(&self, u: &BOne, v: &BOne) -> BOne {
        let g1 = self.p.target().hom(u.x.source, u.x.target).c1();
        BOne {
            a: g1.add(&u.a, &v.a),
            x: u.x.add(&v.x).expect("parallel cells"),
        }
    }

    pub fn neg(&self, u: &BOne) -> BOne {
        let g1 = self.p.target().hom(u.x.source, u.x.target).c1();
        BOne {
            a: g1.neg(&u.a),
            x: u.x.neg(),
        }
    }

    pub fn sub(&self, u: &BOne, v: &BOne) -> BOne {
        self.add(u, &self.neg(v))
    }

    /// `y ∙ a`: the Moore part of `(sy ⊗ a) □ Γ(y, x)⁻`.
    pub fn bullet_left(&self, y: &LinComb, alpha: &BOne) -> Elem {
        let t = self.p.target();
        let x = &alpha.x;
        let c = Comp::new(x.source, x.target, y.target);
        let g1 = t.hom(c.a, c.c).c1();
        let zero = t.hom(c.a, c.b).c0().zero();
        let whisk = t.lwhisk(c, &self.p.s(y), &Track::new(alpha.a.clone(), zero));
        g1.sub(&whisk, &self.p.gamma(y, x))
    }

    /// `a ∙ y`: the Moore part of `(a ⊗ sy) □ Γ(x, y)⁻`.
    pub fn bullet_right(&self, alpha: &BOne, y: &LinComb) -> Elem {
        let t = self.p.target();
        let x = &alpha.x;
        let c = Comp::new(y.source, y.target, x.target);
        let g1 = t.hom(c.a, c.c).c1();
        g1.sub(&t.rwhisk(c, &alpha.a, &self.p.s(y)), &self.p.gamma(x, y))
    }

    pub fn act_left(&self, y: &LinComb, alpha: &BOne) -> BOne {
        BOne {
            a: self.bullet_left(y, alpha),
            x: y.after(&alpha.x).expect("composable"),
        }
    }

    pub fn act_right(&self, alpha: &BOne, y: &LinComb) -> BOne {
        BOne {
            a: self.bullet_right(alpha, y),
            x: alpha.x.after(y).expect("composable"),
        }
    }

    pub fn compose0(&self, y: &LinComb, x: &LinComb) -> LinComb {
        y.after(x).expect("composable")
    }

    /// All degree-one elements over bounded degree-zero maps.
    pub fn cells(&self, bounded: &Bounded) -> BoundedCells {
        let t = self.p.target();
        let n = self.p.source().graph.vertices();
        let mut homs = vec![vec![vec![]; n]; n];
        for a in 0..n {
            for b in 0..n {
                let hom = t.hom(a, b);
                let cycles = hom
                    .d()
                    .kernel()
                    .elements(u128::MAX)
                    .expect("finite cycle group");
                let h = hom.homology();
                for x in bounded.hom(a, b) {
                    let sx = self.p.s(x);
                    if !h.h0.is_zero(&h.class0(&sx)) {
                        continue;
                    }
                    let a0 = hom.d().solve_preimage(&sx).expect("boundary has a preimage");
                    for z in &cycles {
                        homs[a][b].push(BOne {
                            a: hom.c1().add(&a0, z),
                            x: x.clone(),
                        });
                    }
                }
            }
        }
        BoundedCells { homs }
    }

    /// The DG laws of `𝔹` on bounded inputs: the pullback condition for
    /// both actions, three associativity clauses, units, the Leibniz rule,
    /// additivity of `s` and all four bilinearity clauses.
    pub fn laws<'a>(&'a self, bounded: &'a Bounded, cells: &'a BoundedCells) -> Vec<Law<'a>> {
        let lin = self.p.source();
        let m = move |a: usize, b: usize| FinAbGroup::cyclic(bounded.hom(a, b).len() as u64);
        let c = move |a: usize, b: usize| {
            let k = cells.homs[a][b].len();
            (k > 0).then(|| FinAbGroup::cyclic(k as u64))
        };
        let mx = move |a: usize, b: usize, e: &Elem| &bounded.hom(a, b)[e[0] as usize];
        let cx = move |a: usize, b: usize, e: &Elem| &cells.homs[a][b][e[0] as usize];
        let valid = move |what: &str, v: &BOne| -> Result<(), String> {
            if self.is_cell(v) {
                Ok(())
            } else {
                Err(format!("{what} leaves the pullback: {v:?}"))
            }
        };
        vec![
            Law::new(
                "b.pullback",
                3,
                move |o| Some(vec![c(o[0], o[1])?, m(o[1], o[2]), c(o[1], o[2])?, m(o[0], o[1])]),
                move |o, e| {
                    valid("y ⊗ α", &self.act_left(mx(o[1], o[2], &e[1]), cx(o[0], o[1], &e[0])))?;
                    valid("α ⊗ y", &self.act_right(cx(o[1], o[2], &e[2]), mx(o[0], o[1], &e[3])))
                },
            ),
            Law::new(
                "b.assoc.right",
                4,
                move |o| Some(vec![c(o[2], o[3])?, m(o[1], o[2]), m(o[0], o[1])]),
                move |o, e| {
                    let (al, y, z) = (cx(o[2], o[3], &e[0]), mx(o[1], o[2], &e[1]), mx(o[0], o[1], &e[2]));
                    let lhs = self.act_right(&self.act_right(al, y), z);
                    let rhs = self.act_right(al, &self.compose0(y, z));
                    expect_eq(lhs, rhs, "(α⊗y)⊗z vs α⊗(yz)")
                },
            ),
            Law::new(
                "b.assoc.middle",
                4,
                move |o| Some(vec![m(o[2], o[3]), c(o[1], o[2])?, m(o[0], o[1])]),
                move |o, e| {
                    let (y, al, z) = (mx(o[2], o[3], &e[0]), cx(o[1], o[2], &e[1]), mx(o[0], o[1], &e[2]));
                    let lhs = self.act_right(&self.act_left(y, al), z);
                    let rhs = self.act_left(y, &self.act_right(al, z));
                    expect_eq(lhs, rhs, "(y⊗α)⊗z vs y⊗(α⊗z)")
                },
            ),
            Law::new(
                "b.assoc.left",
                4,
                move |o| Some(vec![m(o[2], o[3]), m(o[1], o[2]), c(o[0], o[1])?]),
                move |o, e| {
                    let (y, z, al) = (mx(o[2], o[3], &e[0]), mx(o[1], o[2], &e[1]), cx(o[0], o[1], &e[2]));
                    let lhs = self.act_left(y, &self.act_left(z, al));
                    let rhs = self.act_left(&self.compose0(y, z), al);
                    expect_eq(lhs, rhs, "y⊗(z⊗α) vs (yz)⊗α")
                },
            ),
            Law::new(
                "b.unit",
                2,
                move |o| Some(vec![c(o[0], o[1])?]),
                move |o, e| {
                    let al = cx(o[0], o[1], &e[0]);
                    expect_eq(&self.act_left(&lin.identity(o[1]), al), al, "1⊗α")?;
                    expect_eq(&self.act_right(al, &lin.identity(o[0])), al, "α⊗1")
                },
            ),
            Law::new(
                "b.leibniz",
                3,
                move |o| Some(vec![c(o[1], o[2])?, c(o[0], o[1])?]),
                move |o, e| {
                    let (al, be) = (cx(o[1], o[2], &e[0]), cx(o[0], o[1], &e[1]));
                    let lhs = self.act_left(&self.d(al), be);
                    let rhs = self.act_right(al, &self.d(be));
                    expect_eq(lhs, rhs, "d(α)⊗β vs α⊗d(β)")
                },
            ),
            Law::new(
                "b.s_additive",
                2,
                move |o| Some(vec![m(o[0], o[1]), m(o[0], o[1])]),
                move |o, e| {
                    let (x, y) = (mx(o[0], o[1], &e[0]), mx(o[0], o[1], &e[1]));
                    let g0 = self.p.target().hom(o[0], o[1]).c0();
                    let sum = x.add(y).map_err(|e| e.to_string())?;
                    expect_eq(self.p.s(&sum), g0.add(&self.p.s(x), &self.p.s(y)), "s(x+y)")
                },
            ),
            Law::new(
                "b.bilinear.cells_right",
                3,
                move |o| Some(vec![c(o[1], o[2])?, c(o[1], o[2])?, m(o[0], o[1])]),
                move |o, e| {
                    let (al, be, y) = (cx(o[1], o[2], &e[0]), cx(o[1], o[2], &e[1]), mx(o[0], o[1], &e[2]));
                    let lhs = self.act_right(&self.add(al, be), y);
                    let rhs = self.add(&self.act_right(al, y), &self.act_right(be, y));
                    expect_eq(lhs, rhs, "(α+β)⊗y")
                },
            ),
            Law::new(
                "b.right_linear",
                3,
                move |o| Some(vec![c(o[1], o[2])?, m(o[0], o[1]), m(o[0], o[1])]),
                move |o, e| {
                    let (al, y, z) = (cx(o[1], o[2], &e[0]), mx(o[0], o[1], &e[1]), mx(o[0], o[1], &e[2]));
                    let sum = y.add(z).map_err(|e| e.to_string())?;
                    let lhs = self.act_right(al, &sum);
                    let rhs = self.add(&self.act_right(al, y), &self.act_right(al, z));
                    expect_eq(lhs, rhs, "α⊗(y+z)")
                },
            ),
            Law::new(
                "b.bilinear.cells_left",
                3,
                move |o| Some(vec![m(o[1], o[2]), c(o[0], o[1])?, c(o[0], o[1])?]),
                move |o, e| {
                    let (y, al, be) = (mx(o[1], o[2], &e[0]), cx(o[0], o[1], &e[1]), cx(o[0], o[1], &e[2]));
                    let lhs = self.act_left(y, &self.add(al, be));
                    let rhs = self.add(&self.act_left(y, al), &self.act_left(y, be));
                    expect_eq(lhs, rhs, "y⊗(α+β)")
                },
            ),
            Law::new(
                "b.bilinear.maps_left",
                3,
                move |o| Some(vec![m(o[1], o[2]), m(o[1], o[2]), c(o[0], o[1])?]),
                move |o, e| {
                    let (y, z, al) = (mx(o[1], o[2], &e[0]), mx(o[1], o[2], &e[1]), cx(o[0], o[1], &e[2]));
                    let sum = y.add(z).map_err(|e| e.to_string())?;
                    let lhs = self.act_left(&sum, al);
                    let rhs = self.add(&self.act_left(y, al), &self.act_left(z, al));
                    expect_eq(lhs, rhs, "(y+z)⊗α")
                },
            ),
        ]
    }

    /// `σ` on homology. `H1`: cycles of `𝔹` are `(a, 0)` with `∂a = 0`,
    /// sent to `a`. `H0`: classes hit and kernel checked by enumeration
    /// over bounded maps.
    pub fn sigma_verdict(&self, bounded: &Bounded) -> SigmaVerdict {
        let t = self.p.target();
        let h = HomotopyCategory::new(t);
        let n = self.p.source().graph.vertices();
        let mut homs = vec![];
        for a in 0..n {
            for b in 0..n {
                let hom = t.hom(a, b);
                let cycles = hom.d().kernel();
                // every (z, 0) with z a cycle is a cell, and these are all
                // the cycles of 𝔹
                let zero = LinComb::zero(self.p.source().ring, a, b);
                let h1_iso = cycles
                    .elements(u128::MAX)
                    .expect("finite")
                    .into_iter()
                    .all(|z| self.is_cell(&BOne { a: z, x: zero.clone() }));
                let classes = h.classes(a, b);
                let mut hit: Vec<Elem> = vec![];
                let mut first: Vec<(Elem, &LinComb)> = vec![];
                let mut h0_injective = true;
                for x in bounded.hom(a, b) {
                    let cl = h.class_of(a, b, &self.p.s(x));
                    match first.iter().find(|(k, _)| *k == cl) {
                        Some((_, x0)) => {
                            let diff = x.sub(x0).expect("parallel");
                            if !h.classes(a, b).is_zero(&h.class_of(a, b, &self.p.s(&diff))) {
                                h0_injective = false;
                            }
                        }
                        None => {
                            first.push((cl.clone(), x));
                            hit.push(cl);
                        }
                    }
                }
                homs.push(SigmaHom {
                    source: a,
                    target: b,
                    h1_order: cycles.group.order(),
                    h1_iso,
                    h0_order: classes.order(),
                    h0_hit: hit.len() as u128,
                    h0_injective,
                });
            }
        }
        SigmaVerdict {
            h1_iso: homs.iter().all(|h| h.h1_iso),
            h0_iso: homs.iter().all(|h| h.h0_injective && h.h0_hit == h.h0_order),
            homs,
        }
    }
}

/// Degree-one elements of `𝔹`, per hom, over bounded maps.
#[derive(Clone, Debug)]
pub struct BoundedCells {
    pub homs: Vec<Vec<Vec<BOne>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaHom {
    pub source: usize,
    pub target: usize,
    pub h1_order: u128,
    pub h1_iso: bool,
    pub h0_order: u128,
    /// Classes of `H0 T` reached by bounded maps.
    pub h0_hit: u128,
    pub h0_injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaVerdict {
    pub h1_iso: bool,
    pub h0_iso: bool,
    pub homs: Vec<SigmaHom>,
}

/// `𝔹` with its law report and `σ` verdict.
pub struct BuiltB<'p> {
    pub b: StrictB<'p>,
    pub report: Report,
    pub sigma: SigmaVerdict,
}

/// Assembles `𝔹` and checks it. Refuses if `s` is not additive on bounded
/// maps; law failures are reported, not refused.
pub fn build_b<'p>(p: &'p dyn PseudoFunctor, bounded: &Bounded, budget: &Budget) -> Result<BuiltB<'p>, StrictifyError> {
    let b = StrictB::new(p);
    let cells = b.cells(bounded);
    let n = p.source().graph.vertices();
    let laws = b.laws(bounded, &cells);
    let additive = laws.iter().find(|l| l.name == "b.s_additive").expect("law present");
    let r = crate::laws::run_law(additive, n, budget);
    if let Some(w) = r.witness {
        return Err(StrictifyError::Assumption {
            assumption: "s locally linear".into(),
            detail: w.detail,
        });
    }
    let report = run_laws(&laws, n, budget);
    let sigma = b.sigma_verdict(bounded);
    drop(laws);
    Ok(BuiltB { b, report, sigma })
}
