use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, Elem, FinAbGroup, TruncComplex1};
use crate::groupoid::Track;
use crate::trackcat::{Comp, TrackCategory};

use super::FixtureError;

/// Structure constants of a bilinear product: `table[i][j]` is the product
/// of generator `i` of the left factor with generator `j` of the right.
pub type Products = Vec<Vec<Elem>>;

/// A finite 1-truncated DG-category given by bilinear structure constants,
/// viewed as a track category through denormalization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgTable {
    pub name: String,
    pub objects: Vec<String>,
    homs: Vec<Vec<TruncComplex1>>,
    /// Generator index of the unit in each endo-hom.
    units: Vec<usize>,
    /// Indexed by `Comp`: degree 0 × degree 0.
    m00: Vec<Products>,
    /// degree 1 × degree 0
    m10: Vec<Products>,
    /// degree 0 × degree 1
    m01: Vec<Products>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    Mu0,
    Rwhisk,
    Lwhisk,
}

impl DgTable {
    /// All products zero except those with units, which act as identities.
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        homs: Vec<Vec<TruncComplex1>>,
        units: Vec<usize>,
    ) -> Result<Self, FixtureError> {
        let n = objects.len();
        if homs.len() != n || homs.iter().any(|r| r.len() != n) || units.len() != n {
            return Err(FixtureError::Shape("hom matrix or unit list has the wrong size".into()));
        }
        for (a, &u) in units.iter().enumerate() {
            if u >= homs[a][a].c0().rank() {
                return Err(FixtureError::Shape(format!("unit generator {u} of object {a} out of range")));
            }
        }
        let mut t = DgTable {
            name: name.into(),
            objects,
            homs,
            units,
            m00: vec![],
            m10: vec![],
            m01: vec![],
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hbc, hab, hac) = (&t.homs[b][c], &t.homs[a][b], &t.homs[a][c]);
                    t.m00.push(vec![vec![hac.c0().zero(); hab.c0().rank()]; hbc.c0().rank()]);
                    t.m10.push(vec![vec![hac.c1().zero(); hab.c0().rank()]; hbc.c1().rank()]);
                    t.m01.push(vec![vec![hac.c1().zero(); hab.c1().rank()]; hbc.c0().rank()]);
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let hab = t.homs[a][b].clone();
                let (ua, ub) = (t.units[a], t.units[b]);
                let (abb, aab) = (t.idx(Comp::new(a, b, b)), t.idx(Comp::new(a, a, b)));
                for j in 0..hab.c0().rank() {
                    let g = hab.c0().generator(j);
                    t.m00[abb][ub][j] = g.clone();
                    t.m00[aab][j][ua] = g;
                }
                for j in 0..hab.c1().rank() {
                    let g = hab.c1().generator(j);
                    t.m01[abb][ub][j] = g.clone();
                    t.m10[aab][j][ua] = g;
                }
            }
        }
        Ok(t)
    }

    fn idx(&self, c: Comp) -> usize {
        let n = self.objects.len();
        (c.a * n + c.b) * n + c.c
    }

    pub fn unit_generator(&self, a: usize) -> usize {
        self.units[a]
    }

    pub fn homs(&self) -> &Vec<Vec<TruncComplex1>> {
        &self.homs
    }

    pub fn table(&self, kind: ProductKind, c: Comp) -> &Products {
        let i = self.idx(c);
        match kind {
            ProductKind::Mu0 => &self.m00[i],
            ProductKind::Rwhisk => &self.m10[i],
            ProductKind::Lwhisk => &self.m01[i],
        }
    }

    /// Sets the product of generator `i` (left) and `j` (right).
    pub fn set(
        &mut self,
        kind: ProductKind,
        c: Comp,
        i: usize,
        j: usize,
        value: Elem,
    ) -> Result<(), FixtureError> {
        let (left, right, target) = self.groups(kind, c);
        if i >= left.rank() || j >= right.rank() {
            return Err(FixtureError::Entry {
                kind,
                comp: c,
                left: i,
                right: j,
                detail: "generator index out of range".into(),
            });
        }
        if !target.contains(&value) {
            return Err(FixtureError::Entry {
                kind,
                comp: c,
                left: i,
                right: j,
                detail: format!("value {value:?} is not a reduced element of {target}"),
            });
        }
        // the product must be killed by the order of either factor
        let k = crate::algebra::gcd(left.orders()[i], right.orders()[j]) as i64;
        if !target.is_zero(&target.scale(k, &value)) {
            return Err(FixtureError::Entry {
                kind,
                comp: c,
                left: i,
                right: j,
                detail: format!("value {value:?} is not annihilated by {k}"),
            });
        }
        let ix = self.idx(c);
        match kind {
            ProductKind::Mu0 => self.m00[ix][i][j] = value,
            ProductKind::Rwhisk => self.m10[ix][i][j] = value,
            ProductKind::Lwhisk => self.m01[ix][i][j] = value,
        }
        Ok(())
    }

    fn groups(&self, kind: ProductKind, c: Comp) -> (FinAbGroup, FinAbGroup, FinAbGroup) {
        let (hbc, hab, hac) = (&self.homs[c.b][c.c], &self.homs[c.a][c.b], &self.homs[c.a][c.c]);
        match kind {
            ProductKind::Mu0 => (hbc.c0().clone(), hab.c0().clone(), hac.c0().clone()),
            ProductKind::Rwhisk => (hbc.c1().clone(), hab.c0().clone(), hac.c1().clone()),
            ProductKind::Lwhisk => (hbc.c0().clone(), hab.c1().clone(), hac.c1().clone()),
        }
    }

    fn bilinear(&self, kind: ProductKind, c: Comp, y: &[i64], x: &[i64]) -> Elem {
        let table = self.table(kind, c);
        let hac = &self.homs[c.a][c.c];
        let target = match kind {
            ProductKind::Mu0 => hac.c0(),
            ProductKind::Rwhisk | ProductKind::Lwhisk => hac.c1(),
        };
        let mut acc = vec![0i128; target.rank()];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0 {
                continue;
            }
            for (j, &xj) in x.iter().enumerate() {
                if xj == 0 {
                    continue;
                }
                let coeff = yi as i128 * xj as i128;
                for (k, &v) in table[i][j].iter().enumerate() {
                    acc[k] += coeff * v as i128;
                }
            }
        }
        target.reduce_wide(&acc)
    }

    /// Every nonzero structure constant, for serialization.
    pub fn entries(&self) -> Vec<(ProductKind, Comp, usize, usize, Elem)> {
        let n = self.objects.len();
        let mut out = vec![];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let comp = Comp::new(a, b, c);
                    for kind in [ProductKind::Mu0, ProductKind::Rwhisk, ProductKind::Lwhisk] {
                        for (i, row) in self.table(kind, comp).iter().enumerate() {
                            for (j, v) in row.iter().enumerate() {
                                if v.iter().any(|&x| x != 0) {
                                    out.push((kind, comp, i, j, v.clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl TrackCategory for DgTable {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn num_objects(&self) -> usize {
        self.objects.len()
    }
    fn object_label(&self, a: usize) -> String {
        self.objects[a].clone()
    }
    fn hom(&self, a: usize, b: usize) -> &TruncComplex1 {
        &self.homs[a][b]
    }
    fn mu0(&self, c: Comp, y: &[i64], x: &[i64]) -> Elem {
        self.bilinear(ProductKind::Mu0, c, y, x)
    }
    fn rwhisk(&self, c: Comp, h: &[i64], x: &[i64]) -> Elem {
        self.bilinear(ProductKind::Rwhisk, c, h, x)
    }
    fn lwhisk(&self, c: Comp, y: &[i64], t: &Track) -> Elem {
        self.bilinear(ProductKind::Lwhisk, c, y, &t.moore)
    }
    fn unit(&self, a: usize) -> Elem {
        self.homs[a][a].c0().generator(self.units[a])
    }
}

/// Hom complex over `Z/m` with the given ranks and differential.
pub fn hom_complex(
    modulus: u64,
    rank1: usize,
    rank0: usize,
    d: Vec<Vec<i64>>,
) -> Result<TruncComplex1, AlgebraError> {
    TruncComplex1::from_matrix(
        FinAbGroup::elementary(modulus, rank1),
        FinAbGroup::elementary(modulus, rank0),
        d,
    )
}
