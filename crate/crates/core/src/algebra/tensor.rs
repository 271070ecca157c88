use super::complex::{ChainMap, TruncComplex1};
use super::group::{gcd, AbHom, FinAbGroup, Quotient, Ring};
use super::AlgebraError;

/// `G ⊗ H` with generators indexed `(i, j) -> i * rank(H) + j`.
pub fn tensor_groups(g: &FinAbGroup, h: &FinAbGroup) -> FinAbGroup {
    let orders = g
        .orders()
        .iter()
        .flat_map(|&d| h.orders().iter().map(move |&e| gcd(d, e)))
        .collect();
    FinAbGroup::new(orders).expect("gcd of positive orders is positive")
}

/// `f ⊗ g` between tensor groups.
pub fn tensor_hom(f: &AbHom, g: &AbHom) -> AbHom {
    let (fm, gm) = (f.matrix(), g.matrix());
    let (ns, ms) = (f.source().rank(), g.source().rank());
    let (nt, mt) = (f.target().rank(), g.target().rank());
    let mut matrix = vec![vec![0i64; ns * ms]; nt * mt];
    for k in 0..nt {
        for l in 0..mt {
            for i in 0..ns {
                for j in 0..ms {
                    matrix[k * mt + l][i * ms + j] = fm[k][i] * gm[l][j];
                }
            }
        }
    }
    AbHom::new(
        tensor_groups(f.source(), g.source()),
        tensor_groups(f.target(), g.target()),
        matrix,
    )
    .expect("tensor product of homomorphisms is a homomorphism")
}

/// Block-diagonal map `A ⊕ B -> C ⊕ D`.
fn direct_sum_hom(a: &AbHom, b: &AbHom) -> AbHom {
    let src = a.source().direct_sum(b.source());
    let tgt = a.target().direct_sum(b.target());
    let (n1, m1) = (a.source().rank(), a.target().rank());
    let mut matrix = vec![vec![0i64; src.rank()]; tgt.rank()];
    for (i, row) in a.matrix().iter().enumerate() {
        matrix[i][..n1].copy_from_slice(row);
    }
    for (i, row) in b.matrix().iter().enumerate() {
        matrix[m1 + i][n1..].copy_from_slice(row);
    }
    AbHom::new(src, tgt, matrix).expect("direct sum of homomorphisms")
}

/// The good truncation `tr_1(M ⊗ N)` with the data needed to map into it.
#[derive(Clone, Debug)]
pub struct TruncTensor {
    pub complex: TruncComplex1,
    /// `M1⊗N0 ⊕ M0⊗N1` before dividing out the image of `M1⊗N1`.
    pub pre1: FinAbGroup,
    quotient: Quotient,
}

impl TruncTensor {
    /// Class in the degree-1 part of an element of `pre1`.
    pub fn class1(&self, x: &[i64]) -> Vec<i64> {
        let wide: Vec<i128> = x.iter().map(|&c| c as i128).collect();
        self.quotient.class_of(&wide)
    }

    fn lift1(&self, i: usize) -> Vec<i64> {
        self.pre1.reduce_wide(&self.quotient.lifts[i])
    }
}

fn check_ring(c: &TruncComplex1, ring: &Ring) -> Result<(), AlgebraError> {
    for &d in c.c0().orders().iter().chain(c.c1().orders()) {
        if !ring.acts_on(d) {
            return Err(AlgebraError::RingMismatch(format!(
                "component Z/{d} is not a {ring}-module"
            )));
        }
    }
    Ok(())
}

pub fn truncated_tensor(
    m: &TruncComplex1,
    n: &TruncComplex1,
    ring: &Ring,
) -> Result<TruncTensor, AlgebraError> {
    check_ring(m, ring)?;
    check_ring(n, ring)?;
    let deg0 = tensor_groups(m.c0(), n.c0());
    let deg2 = tensor_groups(m.c1(), n.c1());
    let id_m0 = AbHom::identity(m.c0());
    let id_m1 = AbHom::identity(m.c1());
    let id_n0 = AbHom::identity(n.c0());
    let id_n1 = AbHom::identity(n.c1());

    // d2(a⊗b) = ∂a⊗b − a⊗∂b
    let first = tensor_hom(m.d(), &id_n1);
    let second = tensor_hom(&id_m1, n.d());
    let pre1 = first.target().direct_sum(second.target());
    let d2 = AbHom::from_fn(&deg2, &pre1, |x| {
        let mut v = first.apply(x);
        v.extend(second.target().neg(&second.apply(x)));
        v
    })?;
    let coker = d2.cokernel();

    // d1 on pre1: (a⊗y, x⊗b) ↦ ∂a⊗y + x⊗∂b
    let d1_pre = {
        let left = tensor_hom(m.d(), &id_n0);
        let right = tensor_hom(&id_m0, n.d());
        let split = left.source().rank();
        AbHom::from_fn(&pre1, &deg0, |x| {
            deg0.add(&left.apply(&x[..split]), &right.apply(&x[split..]))
        })?
    };
    let lifts: Vec<Vec<i64>> = coker.lifts.iter().map(|l| pre1.reduce_wide(l)).collect();
    let d1 = AbHom::from_fn(&coker.group, &deg0, |c| {
        let v = c
            .iter()
            .zip(&lifts)
            .fold(pre1.zero(), |acc, (&k, l)| pre1.add(&acc, &pre1.scale(k, l)));
        d1_pre.apply(&v)
    })?;
    Ok(TruncTensor {
        complex: TruncComplex1::new(d1),
        pre1,
        quotient: coker,
    })
}

/// `f ⊗ g` as a chain map between truncated tensor products.
pub fn tensor_map(
    f: &ChainMap,
    g: &ChainMap,
    src: &TruncTensor,
    tgt: &TruncTensor,
) -> Result<ChainMap, AlgebraError> {
    let f0 = tensor_hom(&f.f0, &g.f0);
    let pre = direct_sum_hom(&tensor_hom(&f.f1, &g.f0), &tensor_hom(&f.f0, &g.f1));
    let f1 = AbHom::from_fn(src.complex.c1(), tgt.complex.c1(), |c| {
        let v = c.iter().enumerate().fold(src.pre1.zero(), |acc, (i, &k)| {
            src.pre1.add(&acc, &src.pre1.scale(k, &src.lift1(i)))
        });
        tgt.class1(&pre.apply(&v))
    })?;
    ChainMap::new(src.complex.clone(), tgt.complex.clone(), f0, f1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FinAbGroup {
        FinAbGroup::cyclic(2)
    }

    #[test]
    fn discrete_tensor() {
        let m = TruncComplex1::discrete(z2());
        let t = truncated_tensor(&m, &m, &Ring::Modular(2)).unwrap();
        assert_eq!(t.complex.c0().order(), 2);
        assert_eq!(t.complex.c1().order(), 1);
    }

    #[test]
    fn zero_differential_tensor() {
        let m = TruncComplex1::from_matrix(z2(), z2(), vec![vec![0]]).unwrap();
        let n = TruncComplex1::discrete(z2());
        let t = truncated_tensor(&m, &n, &Ring::Modular(2)).unwrap();
        assert_eq!(t.complex.c1().order(), 2);
        assert!(t.complex.d().is_zero());
        let t2 = truncated_tensor(&m, &m, &Ring::Modular(2)).unwrap();
        assert_eq!(t2.complex.c1().orders(), &[2, 2]);
    }

    #[test]
    fn ring_mismatch() {
        let m = TruncComplex1::discrete(FinAbGroup::cyclic(4));
        assert!(truncated_tensor(&m, &m, &Ring::Modular(2)).is_err());
    }

    #[test]
    fn tensor_groups_gcd() {
        let g = FinAbGroup::new(vec![4, 6]).unwrap();
        let h = FinAbGroup::cyclic(6);
        assert_eq!(tensor_groups(&g, &h).orders(), &[2, 6]);
    }
}
