//! Pairs `(A, q)` of a matrix and a pointed function over `Z/N`, composed
//! by `(B, r)(A, q) = (BA, Bq + rA)`. Composition is additive on the left
//! but not on the right.

use crate::algebra::{Elem, FinAbGroup, TruncComplex1};
use crate::groupoid::Track;
use crate::linearity::{LinearitySystem, Square, WeakSquares};
use crate::trackcat::{Comp, TrackCategory};

use super::FixtureError;

#[derive(Clone, Debug)]
pub struct QuadraticModel {
    modulus: u64,
    max_rank: usize,
    homs: Vec<Vec<TruncComplex1>>,
}

impl QuadraticModel {
    /// Objects are the ranks `1..=max_rank`; object `i` has rank `i + 1`.
    pub fn new(modulus: u64, max_rank: usize) -> Result<Self, FixtureError> {
        if modulus < 2 {
            return Err(FixtureError::Parameter(format!("modulus {modulus} < 2")));
        }
        if max_rank == 0 || max_rank > 2 {
            return Err(FixtureError::Parameter(format!(
                "max_rank {max_rank} outside 1..=2"
            )));
        }
        let mut m = QuadraticModel {
            modulus,
            max_rank,
            homs: vec![],
        };
        m.homs = (0..max_rank)
            .map(|a| (0..max_rank).map(|b| m.build_hom(a + 1, b + 1)).collect())
            .collect();
        Ok(m)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    pub fn rank(&self, obj: usize) -> usize {
        obj + 1
    }

    fn points(&self, m: usize) -> usize {
        (self.modulus as usize).pow(m as u32) - 1
    }

    fn build_hom(&self, m: usize, n: usize) -> TruncComplex1 {
        let f = n * self.points(m);
        let c0 = FinAbGroup::elementary(self.modulus, n * m + f);
        let c1 = FinAbGroup::elementary(self.modulus, f);
        let d = (0..n * m + f)
            .map(|i| (0..f).map(|j| i64::from(i == n * m + j)).collect())
            .collect();
        TruncComplex1::from_matrix(c1, c0, d).expect("inclusion of the function part")
    }

    /// Index of a nonzero vector among the nonzero vectors in lex order.
    fn point_index(&self, v: &[i64]) -> Option<usize> {
        let mut k = 0usize;
        for &c in v {
            k = k * self.modulus as usize + c as usize;
        }
        (k != 0).then(|| k - 1)
    }

    fn point(&self, m: usize, k: usize) -> Elem {
        FinAbGroup::elementary(self.modulus, m).element_at(k as u128 + 1)
    }

    fn reduce(&self, v: i64) -> i64 {
        v.rem_euclid(self.modulus as i64)
    }

    /// Splits a 0-cell of `Hom(m, n)` into its matrix (row-major) and function part.
    pub fn split<'e>(&self, m: usize, n: usize, x: &'e [i64]) -> (&'e [i64], &'e [i64]) {
        x.split_at(n * m)
    }

    fn mat_vec(&self, a: &[i64], n: usize, m: usize, v: &[i64]) -> Elem {
        (0..n)
            .map(|i| self.reduce((0..m).map(|j| a[i * m + j] * v[j]).sum()))
            .collect()
    }

    fn mat_mul(&self, b: &[i64], p: usize, n: usize, a: &[i64], m: usize) -> Elem {
        let mut out = vec![0; p * m];
        for i in 0..p {
            for j in 0..m {
                out[i * m + j] = self.reduce((0..n).map(|k| b[i * n + k] * a[k * m + j]).sum());
            }
        }
        out
    }

    /// Value at `v` of a pointed function `F^m -> F^n` stored by values.
    fn eval(&self, f: &[i64], n: usize, v: &[i64]) -> Elem {
        match self.point_index(v) {
            None => vec![0; n],
            Some(k) => f[k * n..(k + 1) * n].to_vec(),
        }
    }

    /// Tabulates `v ↦ g(v)` over the nonzero points of `F^m`.
    fn tabulate(&self, m: usize, g: impl Fn(&[i64]) -> Elem) -> Elem {
        (0..self.points(m)).flat_map(|k| g(&self.point(m, k))).collect()
    }

    pub fn matrix_element(&self, m: usize, n: usize, entries: &[i64], function: &[i64]) -> Elem {
        debug_assert_eq!(entries.len(), n * m);
        debug_assert_eq!(function.len(), n * self.points(m));
        let mut v: Elem = entries.iter().map(|&c| self.reduce(c)).collect();
        v.extend(function.iter().map(|&c| self.reduce(c)));
        v
    }

    /// The closed-form linearity track `r(A+A') − rA − rA'`.
    pub fn gamma_closed_form(&self, c: Comp, a: &[i64], x: &[i64], y: &[i64]) -> Elem {
        let (m, n, p) = (self.rank(c.a), self.rank(c.b), self.rank(c.c));
        let (_, r) = self.split(n, p, a);
        let (ax, _) = self.split(m, n, x);
        let (ay, _) = self.split(m, n, y);
        self.tabulate(m, |v| {
            let u = self.mat_vec(ax, n, m, v);
            let w = self.mat_vec(ay, n, m, v);
            let s: Elem = u.iter().zip(&w).map(|(a, b)| self.reduce(a + b)).collect();
            let (rs, ru, rw) = (self.eval(r, p, &s), self.eval(r, p, &u), self.eval(r, p, &w));
            (0..p).map(|i| self.reduce(rs[i] - ru[i] - rw[i])).collect()
        })
    }

    /// `(E_ij, 0)` in `Hom(m, n)`.
    pub fn elementary(&self, src: usize, tgt: usize, i: usize, j: usize) -> Elem {
        let (m, n) = (self.rank(src), self.rank(tgt));
        let mut e = vec![0; n * m];
        e[i * m + j] = 1;
        self.matrix_element(m, n, &e, &vec![0; n * self.points(m)])
    }

    /// `(I, r)` on rank `m` with the function part given.
    pub fn with_function(&self, src: usize, tgt: usize, mat: &[i64], f: impl Fn(&[i64]) -> Elem) -> Elem {
        let m = self.rank(src);
        let fv = self.tabulate(m, f);
        let n = self.rank(tgt);
        self.matrix_element(m, n, mat, &fv)
    }
}

impl TrackCategory for QuadraticModel {
    fn name(&self) -> String {
        format!("Q{}[rank<={}]", self.modulus, self.max_rank)
    }
    fn num_objects(&self) -> usize {
        self.max_rank
    }
    fn object_label(&self, a: usize) -> String {
        format!("F^{}", a + 1)
    }
    fn hom(&self, a: usize, b: usize) -> &TruncComplex1 {
        &self.homs[a][b]
    }
    fn mu0(&self, c: Comp, y: &[i64], x: &[i64]) -> Elem {
        let (m, n, p) = (self.rank(c.a), self.rank(c.b), self.rank(c.c));
        let (bm, r) = self.split(n, p, y);
        let (am, q) = self.split(m, n, x);
        let mut out = self.mat_mul(bm, p, n, am, m);
        out.extend(self.tabulate(m, |v| {
            let bq = self.mat_vec(bm, p, n, &self.eval(q, n, v));
            let ra = self.eval(r, p, &self.mat_vec(am, n, m, v));
            bq.iter().zip(&ra).map(|(a, b)| self.reduce(a + b)).collect()
        }));
        out
    }
    fn rwhisk(&self, c: Comp, h: &[i64], x: &[i64]) -> Elem {
        let (m, n, p) = (self.rank(c.a), self.rank(c.b), self.rank(c.c));
        let (am, _) = self.split(m, n, x);
        self.tabulate(m, |v| self.eval(h, p, &self.mat_vec(am, n, m, v)))
    }
    fn lwhisk(&self, c: Comp, y: &[i64], t: &Track) -> Elem {
        let (m, n, p) = (self.rank(c.a), self.rank(c.b), self.rank(c.c));
        let (bm, _) = self.split(n, p, y);
        self.tabulate(m, |v| self.mat_vec(bm, p, n, &self.eval(&t.moore, n, v)))
    }
    fn unit(&self, a: usize) -> Elem {
        let m = self.rank(a);
        let id: Vec<i64> = (0..m * m).map(|k| i64::from(k / m == k % m)).collect();
        self.matrix_element(m, m, &id, &vec![0; m * self.points(m)])
    }
}

impl WeakSquares for QuadraticModel {
    fn square(&self, a: usize) -> Option<Square> {
        let m = self.rank(a);
        if 2 * m > self.max_rank {
            return None;
        }
        let obj = 2 * m - 1;
        let zero_f = |k: usize| vec![0; k];
        // i1 = [I; 0], i2 = [0; I] as 2m×m; p1 = [I 0], p2 = [0 I] as m×2m
        let inc = |off: usize| {
            let mut e = vec![0; 2 * m * m];
            for k in 0..m {
                e[(k + off) * m + k] = 1;
            }
            self.matrix_element(m, 2 * m, &e, &zero_f(2 * m * self.points(m)))
        };
        let proj = |off: usize| {
            let mut e = vec![0; m * 2 * m];
            for k in 0..m {
                e[k * 2 * m + k + off] = 1;
            }
            self.matrix_element(2 * m, m, &e, &zero_f(m * self.points(2 * m)))
        };
        Some(Square {
            obj,
            i1: inc(0),
            i2: inc(m),
            p1: proj(0),
            p2: proj(m),
        })
    }
}

/// The closed-form linearity tracks shipped with [`QuadraticModel`].
#[derive(Clone, Debug)]
pub struct QuadraticGamma {
    pub model: QuadraticModel,
}

impl LinearitySystem for QuadraticGamma {
    fn name(&self) -> String {
        "quadratic".into()
    }
    fn gamma(&self, _t: &dyn TrackCategory, c: Comp, a: &[i64], x: &[i64], y: &[i64]) -> Elem {
        self.model.gamma_closed_form(c, a, x, y)
    }
}
