use serde::{Deserialize, Serialize};

use super::group::{AbHom, Elem, FinAbGroup};
use super::AlgebraError;

/// A chain complex `c1 --d--> c0` of finite abelian groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncComplex1 {
    d: AbHom,
}

impl TruncComplex1 {
    pub fn new(d: AbHom) -> Self {
        TruncComplex1 { d }
    }

    pub fn from_matrix(
        c1: FinAbGroup,
        c0: FinAbGroup,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self, AlgebraError> {
        Ok(TruncComplex1 {
            d: AbHom::new(c1, c0, matrix)?,
        })
    }

    /// `0 -> g`
    pub fn discrete(g: FinAbGroup) -> Self {
        TruncComplex1 {
            d: AbHom::zero(FinAbGroup::trivial(), g),
        }
    }

    pub fn c1(&self) -> &FinAbGroup {
        self.d.source()
    }

    pub fn c0(&self) -> &FinAbGroup {
        self.d.target()
    }

    pub fn d(&self) -> &AbHom {
        &self.d
    }

    pub fn boundary(&self, x: &[i64]) -> Elem {
        self.d.apply(x)
    }

    pub fn homology(&self) -> Homology {
        let coker = self.d.cokernel();
        let c0 = self.c0();
        let proj_matrix: Vec<Vec<i64>> = coker
            .coords
            .iter()
            .zip(coker.group.orders())
            .map(|(row, &e)| row.iter().map(|&a| a.rem_euclid(e as i128) as i64).collect())
            .collect();
        let projection = AbHom::new(c0.clone(), coker.group.clone(), proj_matrix)
            .expect("cokernel projection is a homomorphism");
        let lifts = coker.lifts.iter().map(|l| c0.reduce_wide(l)).collect();
        let ker = self.d.kernel();
        Homology {
            h0: coker.group,
            projection,
            lifts,
            h1: ker.group,
            embedding: ker.embedding,
        }
    }
}

/// `H0 = coker d` with its projection and `H1 = ker d` with its embedding.
#[derive(Clone, Debug)]
pub struct Homology {
    pub h0: FinAbGroup,
    pub projection: AbHom,
    lifts: Vec<Elem>,
    pub h1: FinAbGroup,
    pub embedding: AbHom,
}

impl Homology {
    pub fn class0(&self, x: &[i64]) -> Elem {
        self.projection.apply(x)
    }

    /// A representative in `c0` of the given `H0` class.
    pub fn lift0(&self, class: &[i64]) -> Elem {
        let c0 = self.projection.source();
        class
            .iter()
            .zip(&self.lifts)
            .fold(c0.zero(), |acc, (&k, l)| c0.add(&acc, &c0.scale(k, l)))
    }

    /// `H1` coordinates of a cycle, `None` if `z` is not a cycle.
    pub fn class1(&self, z: &[i64]) -> Option<Elem> {
        self.embedding.solve_preimage(z)
    }

    pub fn embed1(&self, class: &[i64]) -> Elem {
        self.embedding.apply(class)
    }
}

/// A chain map between length-one complexes.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: TruncComplex1,
    pub target: TruncComplex1,
    pub f0: AbHom,
    pub f1: AbHom,
}

impl ChainMap {
    /// Checks shapes and the square `d' f1 = f0 d` on generators of `c1`.
    pub fn new(
        source: TruncComplex1,
        target: TruncComplex1,
        f0: AbHom,
        f1: AbHom,
    ) -> Result<Self, AlgebraError> {
        if f0.source() != source.c0() || f0.target() != target.c0() {
            return Err(AlgebraError::NotChainMap("degree-0 map has wrong endpoints".into()));
        }
        if f1.source() != source.c1() || f1.target() != target.c1() {
            return Err(AlgebraError::NotChainMap("degree-1 map has wrong endpoints".into()));
        }
        for j in 0..source.c1().rank() {
            let g = source.c1().generator(j);
            let lhs = target.boundary(&f1.apply(&g));
            let rhs = f0.apply(&source.boundary(&g));
            if lhs != rhs {
                return Err(AlgebraError::NotChainMap(format!(
                    "square fails on generator {j}: d f1 = {lhs:?}, f0 d = {rhs:?}"
                )));
            }
        }
        Ok(ChainMap {
            source,
            target,
            f0,
            f1,
        })
    }

    pub fn identity(c: &TruncComplex1) -> Self {
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            f0: AbHom::identity(c.c0()),
            f1: AbHom::identity(c.c1()),
        }
    }

    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap, AlgebraError> {
        ChainMap::new(
            inner.source.clone(),
            self.target.clone(),
            self.f0.compose(&inner.f0)?,
            self.f1.compose(&inner.f1)?,
        )
    }

    pub fn induced_h0(&self, hs: &Homology, ht: &Homology) -> AbHom {
        AbHom::from_fn(&hs.h0, &ht.h0, |c| ht.class0(&self.f0.apply(&hs.lift0(c))))
            .expect("induced map on H0 is a homomorphism")
    }

    pub fn induced_h1(&self, hs: &Homology, ht: &Homology) -> AbHom {
        AbHom::from_fn(&hs.h1, &ht.h1, |c| {
            ht.class1(&self.f1.apply(&hs.embed1(c)))
                .expect("chain maps send cycles to cycles")
        })
        .expect("induced map on H1 is a homomorphism")
    }

    /// Whether the map induces isomorphisms on `H0` and `H1`.
    pub fn is_quasi_iso(&self) -> (bool, bool) {
        let hs = self.source.homology();
        let ht = self.target.homology();
        (
            self.induced_h0(&hs, &ht).is_iso(),
            self.induced_h1(&hs, &ht).is_iso(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubling() -> TruncComplex1 {
        TruncComplex1::from_matrix(FinAbGroup::cyclic(4), FinAbGroup::cyclic(4), vec![vec![2]])
            .unwrap()
    }

    #[test]
    fn doubling_on_z4() {
        let h = doubling().homology();
        assert_eq!(h.h0.order(), 2);
        assert_eq!(h.h1.order(), 2);
        assert_eq!(h.class0(&[1]), vec![1]);
        assert_eq!(h.class0(&[2]), vec![0]);
        assert_eq!(h.embed1(&[1]), vec![2]);
    }

    #[test]
    fn discrete_complex() {
        let g = FinAbGroup::new(vec![2, 3]).unwrap();
        let h = TruncComplex1::discrete(g.clone()).homology();
        assert_eq!(h.h0.order(), 6);
        assert_eq!(h.h1.order(), 1);
    }

    #[test]
    fn sum_map_on_klein_group() {
        let c = TruncComplex1::from_matrix(
            FinAbGroup::elementary(2, 2),
            FinAbGroup::cyclic(2),
            vec![vec![1, 1]],
        )
        .unwrap();
        let h = c.homology();
        assert_eq!(h.h0.order(), 1);
        assert_eq!(h.h1.order(), 2);
        // oracle: enumerate cycles
        let cycles: Vec<_> = c.c1().enumerate().unwrap().filter(|x| c.boundary(x) == vec![0]).collect();
        assert_eq!(cycles, vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(h.embed1(&[1]), vec![1, 1]);
    }

    #[test]
    fn non_chain_map_is_rejected() {
        let c = doubling();
        let z = TruncComplex1::discrete(FinAbGroup::cyclic(4));
        let f0 = AbHom::identity(&FinAbGroup::cyclic(4));
        let f1 = AbHom::zero(FinAbGroup::cyclic(4), FinAbGroup::trivial());
        assert!(ChainMap::new(c.clone(), z.clone(), f0.clone(), f1).is_err());
        let ok = ChainMap::new(z, c, f0, AbHom::zero(FinAbGroup::trivial(), FinAbGroup::cyclic(4)));
        assert!(ok.is_ok());
    }
}
