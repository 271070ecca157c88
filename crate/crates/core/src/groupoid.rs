//! Tracks in the groupoid attached to a length-one complex.
//!
//! A track is stored as a Moore pair `(m, b)` and runs `∂m + b ⇒ b`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Elem, FinAbGroup, Homology, TruncComplex1};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Track {
    pub moore: Elem,
    pub base: Elem,
}

impl Track {
    pub fn new(moore: Elem, base: Elem) -> Self {
        Track { moore, base }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("tracks are not composable: source of the second track is {second_source:?}, target of the first is {first_target:?}")]
pub struct Composability {
    /// δ1 of the track applied first (the right operand of `□`).
    pub first_target: Elem,
    /// δ0 of the track applied second (the left operand of `□`).
    pub second_source: Elem,
}

/// The groupoid whose objects are `c0` and whose tracks are `c1 ⊕ c0`.
#[derive(Clone, Debug)]
pub struct DenormGroupoid {
    complex: TruncComplex1,
}

impl DenormGroupoid {
    pub fn new(complex: TruncComplex1) -> Self {
        DenormGroupoid { complex }
    }

    pub fn complex(&self) -> &TruncComplex1 {
        &self.complex
    }

    pub fn source(&self, a: &Track) -> Elem {
        self.complex
            .c0()
            .add(&self.complex.boundary(&a.moore), &a.base)
    }

    pub fn target(&self, a: &Track) -> Elem {
        a.base.clone()
    }

    pub fn identity(&self, x: &[i64]) -> Track {
        Track::new(self.complex.c1().zero(), x.to_vec())
    }

    /// `a □ b`: first `b`, then `a`.
    pub fn compose(&self, a: &Track, b: &Track) -> Result<Track, Composability> {
        let src_a = self.source(a);
        if b.base != src_a {
            return Err(Composability {
                first_target: b.base.clone(),
                second_source: src_a,
            });
        }
        Ok(Track::new(
            self.complex.c1().add(&a.moore, &b.moore),
            a.base.clone(),
        ))
    }

    pub fn invert(&self, a: &Track) -> Track {
        Track::new(self.complex.c1().neg(&a.moore), self.source(a))
    }

    /// Pointwise sum, the group structure on tracks.
    pub fn add(&self, a: &Track, b: &Track) -> Track {
        Track::new(
            self.complex.c1().add(&a.moore, &b.moore),
            self.complex.c0().add(&a.base, &b.base),
        )
    }

    pub fn neg(&self, a: &Track) -> Track {
        Track::new(
            self.complex.c1().neg(&a.moore),
            self.complex.c0().neg(&a.base),
        )
    }

    /// All tracks, refusing when `|c1|·|c0|` exceeds `bound`.
    pub fn tracks(&self, bound: u128) -> Result<Vec<Track>, crate::algebra::AlgebraError> {
        let g = self.complex.c1().direct_sum(self.complex.c0());
        let n1 = self.complex.c1().rank();
        Ok(g
            .enumerate_bounded(bound)?
            .map(|v| Track::new(v[..n1].to_vec(), v[n1..].to_vec()))
            .collect())
    }

    /// The Moore complex: tracks ending at zero with `∂ = δ0`.
    pub fn moore(&self) -> TruncComplex1 {
        let c1 = self.complex.c1().clone();
        let c0 = self.complex.c0().clone();
        let d = crate::algebra::AbHom::from_fn(&c1, &c0, |m| {
            self.source(&Track::new(m.clone(), c0.zero()))
        })
        .expect("source map is a homomorphism");
        TruncComplex1::new(d)
    }

    /// `(π0, π1)` with structure maps, via homology.
    pub fn pi(&self) -> Homology {
        self.complex.homology()
    }

    pub fn pi_orders(&self) -> (FinAbGroup, FinAbGroup) {
        let h = self.pi();
        (h.h0, h.h1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubling() -> DenormGroupoid {
        DenormGroupoid::new(
            TruncComplex1::from_matrix(FinAbGroup::cyclic(4), FinAbGroup::cyclic(4), vec![vec![2]])
                .unwrap(),
        )
    }

    #[test]
    fn compose_example() {
        let g = doubling();
        let a = Track::new(vec![1], vec![0]);
        let b = Track::new(vec![1], vec![2]);
        assert_eq!(g.compose(&a, &b).unwrap(), Track::new(vec![2], vec![0]));
        let bad = Track::new(vec![2], vec![1]);
        let err = g.compose(&a, &bad).unwrap_err();
        assert_eq!(err.first_target, vec![1]);
        assert_eq!(err.second_source, vec![2]);
    }

    #[test]
    fn inverse_example() {
        let g = doubling();
        let a = Track::new(vec![1], vec![0]);
        assert_eq!(g.invert(&a), Track::new(vec![3], vec![2]));
        let id = g.compose(&a, &g.invert(&a)).unwrap();
        assert_eq!(id, g.identity(&[0]));
    }

    #[test]
    fn identity_is_neutral() {
        let g = doubling();
        let b = Track::new(vec![3], vec![1]);
        let id = g.identity(&g.target(&b));
        assert_eq!(g.compose(&id, &b).unwrap(), b);
        let id0 = g.identity(&g.source(&b));
        assert_eq!(g.compose(&b, &id0).unwrap(), b);
    }
}
