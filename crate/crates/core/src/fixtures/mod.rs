//! Shipped instance families: bilinear tables, twisted linearity tracks,
//! the quadratic model, and file loading.

mod dg;
pub mod io;
mod quadratic;

pub use dg::{hom_complex, DgTable, ProductKind, Products};
pub use quadratic::{QuadraticGamma, QuadraticModel};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Elem};
use crate::groupoid::Track;
use crate::laws::{Budget, Report};
use crate::linearity::{verify_linearity, IdentityGamma, LinearitySystem};
use crate::trackcat::{axiom_check, Comp, TrackCategory};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("bad parameter: {0}")]
    Parameter(String),
    #[error("{kind:?} entry ({left},{right}) at {comp:?}: {detail}")]
    Entry {
        kind: ProductKind,
        comp: Comp,
        left: usize,
        right: usize,
        detail: String,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("instance fails law {law}: {detail}")]
    Invalid {
        law: String,
        detail: String,
        report: Box<Report>,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error on {path}: {detail}")]
    Io { path: String, detail: String },
}

fn first_failure(report: Report) -> Result<(), FixtureError> {
    let Some(f) = report.failures().next() else {
        return Ok(());
    };
    let law = f.law.clone();
    let detail = f.witness.as_ref().map(|w| w.detail.clone()).unwrap_or_default();
    Err(FixtureError::Invalid {
        law,
        detail,
        report: Box::new(report),
    })
}

/// One summand `ε(a) κ(y) κ(z) · t` of a twist cocycle on the maps with
/// the given endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistTerm {
    pub comp: Comp,
    /// Functional on generators of `Hom(c.b, c.c)_0`.
    pub epsilon: Vec<i64>,
    /// Functional on generators of `Hom(c.a, c.b)_0`.
    pub kappa: Vec<i64>,
    /// A cycle in `Hom(c.a, c.c)_1`.
    pub track: Elem,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDatum {
    pub terms: Vec<TwistTerm>,
}

fn pairing(f: &[i64], x: &[i64]) -> i64 {
    f.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Linearity tracks `Γ_a^{y,z} = Σ ε(a) κ(y) κ(z) t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistGamma {
    pub datum: TwistDatum,
}

impl LinearitySystem for TwistGamma {
    fn name(&self) -> String {
        "twist".into()
    }
    fn gamma(&self, t: &dyn TrackCategory, c: Comp, a: &[i64], x: &[i64], y: &[i64]) -> Elem {
        let g = t.hom(c.a, c.c).c1();
        self.datum
            .terms
            .iter()
            .filter(|term| term.comp == c)
            .fold(g.zero(), |acc, term| {
                let k = pairing(&term.epsilon, a) * pairing(&term.kappa, x) * pairing(&term.kappa, y);
                g.add(&acc, &g.scale(k, &term.track))
            })
    }
}

/// The table as a track category with identity linearity tracks, after
/// checking every law exhaustively within `budget`.
pub fn fixture_denorm(b: DgTable, budget: &Budget) -> Result<(DgTable, IdentityGamma), FixtureError> {
    first_failure(axiom_check(&b, budget))?;
    first_failure(verify_linearity(&b, &IdentityGamma, budget))?;
    Ok((b, IdentityGamma))
}

/// A bilinear table with twisted linearity tracks; the datum is accepted
/// only if the seven equations hold.
pub fn fixture_twisted(
    base: DgTable,
    datum: TwistDatum,
    budget: &Budget,
) -> Result<(DgTable, TwistGamma), FixtureError> {
    for term in &datum.terms {
        let c = term.comp;
        let n = base.num_objects();
        if c.a >= n || c.b >= n || c.c >= n {
            return Err(FixtureError::Shape(format!("twist term on missing objects {c:?}")));
        }
        let ok = term.epsilon.len() == base.hom(c.b, c.c).c0().rank()
            && term.kappa.len() == base.hom(c.a, c.b).c0().rank()
            && base.hom(c.a, c.c).c1().contains(&term.track);
        if !ok {
            return Err(FixtureError::Shape(format!("twist term at {c:?} has wrong sizes")));
        }
    }
    first_failure(axiom_check(&base, budget))?;
    let gamma = TwistGamma { datum };
    first_failure(verify_linearity(&base, &gamma, budget))?;
    Ok((base, gamma))
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// The quadratic model over `F_p` with its closed-form linearity tracks.
pub fn fixture_quadratic(
    p: u64,
    max_rank: usize,
) -> Result<(QuadraticModel, QuadraticGamma), FixtureError> {
    if !is_prime(p) {
        return Err(FixtureError::Parameter(format!("{p} is not prime")));
    }
    let model = QuadraticModel::new(p, max_rank)?;
    Ok((model.clone(), QuadraticGamma { model }))
}

/// One object, `Hom_0 = F2{1, x}` with `x² = 0`, `Hom_1 = F2{t}` with
/// `∂ = 0` and all products with `t` zero.
pub fn tc_base() -> DgTable {
    let hom = hom_complex(2, 1, 2, vec![vec![0], vec![0]]).expect("valid complex");
    DgTable::new("Tc", vec!["*".into()], vec![vec![hom]], vec![0]).expect("valid table")
}

/// `ε` = coefficient of `x`, `κ` = coefficient of `1`.
pub fn tc_datum() -> TwistDatum {
    TwistDatum {
        terms: vec![TwistTerm {
            comp: Comp::new(0, 0, 0),
            epsilon: vec![0, 1],
            kappa: vec![1, 0],
            track: vec![1],
        }],
    }
}

pub fn tc() -> (DgTable, TwistGamma) {
    (tc_base(), TwistGamma { datum: tc_datum() })
}

/// One object over `F2`: `Hom_0 = {1, x, u}`, `Hom_1 = {a, t}`, `∂a = u`,
/// `x·x = u`, `a ⊗ x = t`, all other non-unit products zero.
pub fn m2() -> DgTable {
    let hom = hom_complex(2, 2, 3, vec![vec![0, 0], vec![0, 0], vec![1, 0]]).expect("valid complex");
    let mut t = DgTable::new("M2", vec!["*".into()], vec![vec![hom]], vec![0]).expect("valid table");
    let c = Comp::new(0, 0, 0);
    t.set(ProductKind::Mu0, c, 1, 1, vec![0, 0, 1]).expect("x·x = u");
    t.set(ProductKind::Rwhisk, c, 0, 1, vec![0, 1]).expect("a⊗x = t");
    t
}

/// Two objects `A`, `B` over `F2`: `Hom(A,A)_0 = {1, e}` with `e² = 0`,
/// `Hom(A,B)_0 = {f, g}` with `fe = g`, `Hom(A,B)_1 = {t}` with `∂t = 0`.
pub fn bilinear_pair() -> DgTable {
    let aa = hom_complex(2, 0, 2, vec![vec![], vec![]]).expect("valid");
    let bb = hom_complex(2, 0, 1, vec![vec![]]).expect("valid");
    let ab = hom_complex(2, 1, 2, vec![vec![0], vec![0]]).expect("valid");
    let ba = hom_complex(2, 0, 0, vec![]).expect("valid");
    let mut t = DgTable::new(
        "Pair",
        vec!["A".into(), "B".into()],
        vec![vec![aa, ab], vec![ba, bb]],
        vec![0, 0],
    )
    .expect("valid table");
    t.set(ProductKind::Mu0, Comp::new(0, 0, 1), 0, 1, vec![0, 1])
        .expect("fe = g");
    t
}

/// Which structure map a mutation corrupts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    Lwhisk,
    Rwhisk,
    Mu0,
}

/// An instance with one entry of one structure map shifted by `delta`.
pub struct Mutated<T> {
    pub inner: T,
    pub which: Mutation,
    pub comp: Comp,
    pub left: Elem,
    pub right: Track,
    pub delta: Elem,
}

impl<T: TrackCategory> TrackCategory for Mutated<T> {
    fn name(&self) -> String {
        format!("{}+mutation", self.inner.name())
    }
    fn num_objects(&self) -> usize {
        self.inner.num_objects()
    }
    fn hom(&self, a: usize, b: usize) -> &crate::algebra::TruncComplex1 {
        self.inner.hom(a, b)
    }
    fn mu0(&self, c: Comp, y: &[i64], x: &[i64]) -> Elem {
        let v = self.inner.mu0(c, y, x);
        if self.which == Mutation::Mu0 && c == self.comp && y == self.left && x == self.right.base {
            return self.inner.hom(c.a, c.c).c0().add(&v, &self.delta);
        }
        v
    }
    fn rwhisk(&self, c: Comp, h: &[i64], x: &[i64]) -> Elem {
        let v = self.inner.rwhisk(c, h, x);
        if self.which == Mutation::Rwhisk && c == self.comp && h == self.left && x == self.right.base {
            return self.inner.hom(c.a, c.c).c1().add(&v, &self.delta);
        }
        v
    }
    fn lwhisk(&self, c: Comp, y: &[i64], t: &Track) -> Elem {
        let v = self.inner.lwhisk(c, y, t);
        if self.which == Mutation::Lwhisk && c == self.comp && y == self.left && *t == self.right {
            return self.inner.hom(c.a, c.c).c1().add(&v, &self.delta);
        }
        v
    }
    fn unit(&self, a: usize) -> Elem {
        self.inner.unit(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_tables_pass_axioms() {
        for t in [tc_base(), m2(), bilinear_pair()] {
            let r = axiom_check(&t, &Budget::default());
            assert!(r.passed(), "{}: {:?}", t.name, r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn tc_twist_is_valid() {
        let (t, g) = fixture_twisted(tc_base(), tc_datum(), &Budget::default()).unwrap();
        let c = Comp::new(0, 0, 0);
        assert_eq!(g.gamma(&t, c, &[0, 1], &[1, 0], &[1, 0]), vec![1]);
        assert_eq!(g.gamma(&t, c, &[1, 0], &[1, 0], &[1, 0]), vec![0]);
    }

    #[test]
    fn non_prime_rejected() {
        assert!(fixture_quadratic(4, 1).is_err());
        assert!(fixture_quadratic(2, 3).is_err());
    }
}
