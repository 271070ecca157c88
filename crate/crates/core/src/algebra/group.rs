use serde::{Deserialize, Serialize};

use super::snf::{self, IMat};
use super::AlgebraError;

/// Dense residue vector; component `i` lives in `Z/d_i`.
pub type Elem = Vec<i64>;

/// Default refusal bound for [`FinAbGroup::enumerate`].
pub const DEFAULT_ENUM_BOUND: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Modular(u64),
}

impl Ring {
    pub fn modular(m: u64) -> Result<Ring, AlgebraError> {
        if m < 2 {
            return Err(AlgebraError::BadModulus(m));
        }
        Ok(Ring::Modular(m))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Ring::Integers => None,
            Ring::Modular(m) => Some(*m),
        }
    }

    pub fn reduce(&self, c: i64) -> i64 {
        match self {
            Ring::Integers => c,
            Ring::Modular(m) => c.rem_euclid(*m as i64),
        }
    }

    /// The quotient map `self -> target`, defined when the target modulus
    /// divides ours (or we are the integers).
    pub fn project(&self, c: i64, target: &Ring) -> Result<i64, AlgebraError> {
        match (self, target) {
            (_, Ring::Integers) if matches!(self, Ring::Integers) => Ok(c),
            (Ring::Integers, Ring::Modular(n)) => Ok(c.rem_euclid(*n as i64)),
            (Ring::Modular(m), Ring::Modular(n)) if m % n == 0 => Ok(c.rem_euclid(*n as i64)),
            _ => Err(AlgebraError::RingMismatch(format!("no quotient map {self} -> {target}"))),
        }
    }

    /// Whether a cyclic group `Z/d` is a module over this ring.
    pub fn acts_on(&self, d: u64) -> bool {
        match self {
            Ring::Integers => true,
            Ring::Modular(m) => m % d == 0,
        }
    }
}

impl std::fmt::Display for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Modular(m) => write!(f, "Z/{m}"),
        }
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// The finite abelian group `Z/d_1 + ... + Z/d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    orders: Vec<u64>,
}

impl FinAbGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self, AlgebraError> {
        if let Some(i) = orders.iter().position(|&d| d == 0) {
            return Err(AlgebraError::InfiniteComponent(i));
        }
        Ok(FinAbGroup { orders })
    }

    pub fn trivial() -> Self {
        FinAbGroup { orders: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("cyclic order must be positive")
    }

    /// `n` copies of `Z/d`.
    pub fn elementary(d: u64, n: usize) -> Self {
        Self::new(vec![d; n]).expect("order must be positive")
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Group order, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        self.orders
            .iter()
            .fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &d| lcm(acc, d))
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        FinAbGroup { orders }
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.orders.len()]
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn generator(&self, i: usize) -> Elem {
        let mut x = self.zero();
        x[i] = 1;
        self.reduce(x)
    }

    pub fn reduce(&self, mut x: Elem) -> Elem {
        for (c, &d) in x.iter_mut().zip(&self.orders) {
            *c = c.rem_euclid(d as i64);
        }
        x
    }

    pub fn reduce_wide(&self, x: &[i128]) -> Elem {
        x.iter()
            .zip(&self.orders)
            .map(|(&c, &d)| c.rem_euclid(d as i128) as i64)
            .collect()
    }

    /// Whether `x` is a canonical element of this group.
    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.orders.len()
            && x.iter().zip(&self.orders).all(|(&c, &d)| c >= 0 && (c as u64) < d)
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Elem {
        debug_assert_eq!(x.len(), self.rank());
        debug_assert_eq!(y.len(), self.rank());
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), &d)| (a + b).rem_euclid(d as i64))
            .collect()
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Elem {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), &d)| (a - b).rem_euclid(d as i64))
            .collect()
    }

    pub fn neg(&self, x: &[i64]) -> Elem {
        x.iter()
            .zip(&self.orders)
            .map(|(a, &d)| (-a).rem_euclid(d as i64))
            .collect()
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Elem {
        x.iter()
            .zip(&self.orders)
            .map(|(a, &d)| {
                let d = d as i128;
                ((k as i128 % d) * (*a as i128)).rem_euclid(d) as i64
            })
            .collect()
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Elem>>(&self, items: I) -> Elem {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Additive order of `x`.
    pub fn element_order(&self, x: &[i64]) -> u64 {
        x.iter().zip(&self.orders).fold(1, |acc, (&c, &d)| {
            let c = c.rem_euclid(d as i64) as u64;
            lcm(acc, d / gcd(c, d))
        })
    }

    /// All elements in lexicographic residue order, refusing groups larger
    /// than [`DEFAULT_ENUM_BOUND`].
    pub fn enumerate(&self) -> Result<Elements, AlgebraError> {
        self.enumerate_bounded(DEFAULT_ENUM_BOUND)
    }

    pub fn enumerate_bounded(&self, bound: u128) -> Result<Elements, AlgebraError> {
        let order = self.order();
        if order > bound {
            return Err(AlgebraError::TooLarge { order, bound });
        }
        Ok(Elements {
            orders: self.orders.clone(),
            next: Some(self.zero()),
        })
    }

    /// Element with index `k` in the lexicographic enumeration.
    pub fn element_at(&self, mut k: u128) -> Elem {
        let mut x = self.zero();
        for (c, &d) in x.iter_mut().zip(&self.orders).rev() {
            *c = (k % d as u128) as i64;
            k /= d as u128;
        }
        x
    }
}

impl std::fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.orders.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Iterator over all elements of a finite abelian group, last component fastest.
pub struct Elements {
    orders: Vec<u64>,
    next: Option<Elem>,
}

impl Iterator for Elements {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            succ[i] += 1;
            if (succ[i] as u64) < self.orders[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// Homomorphism of finite abelian groups given by an integer matrix
/// (rows index target components, columns index source components).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: Vec<Vec<i64>>,
}

impl AbHom {
    pub fn new(
        source: FinAbGroup,
        target: FinAbGroup,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self, AlgebraError> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(AlgebraError::Shape {
                expected: (target.rank(), source.rank()),
                got: (matrix.len(), matrix.first().map_or(0, |r| r.len())),
            });
        }
        let mut reduced = matrix;
        for (i, row) in reduced.iter_mut().enumerate() {
            let e = target.orders[i] as i128;
            for (j, a) in row.iter_mut().enumerate() {
                let d = source.orders[j] as i128;
                if (*a as i128 * d).rem_euclid(e) != 0 {
                    return Err(AlgebraError::Incompatible {
                        row: i,
                        col: j,
                        entry: *a,
                        source_order: d as u64,
                        target_order: e as u64,
                    });
                }
                *a = (*a as i128).rem_euclid(e) as i64;
            }
        }
        Ok(AbHom {
            source,
            target,
            matrix: reduced,
        })
    }

    pub fn zero(source: FinAbGroup, target: FinAbGroup) -> Self {
        let matrix = vec![vec![0; source.rank()]; target.rank()];
        AbHom {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        let n = g.rank();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j && g.orders[i] > 1)).collect())
            .collect();
        AbHom {
            source: g.clone(),
            target: g.clone(),
            matrix,
        }
    }

    /// Builds the matrix by evaluating an additive map on generators.
    pub fn from_fn(
        source: &FinAbGroup,
        target: &FinAbGroup,
        f: impl Fn(&Elem) -> Elem,
    ) -> Result<Self, AlgebraError> {
        let mut matrix = vec![vec![0; source.rank()]; target.rank()];
        for j in 0..source.rank() {
            let img = target.reduce(f(&source.generator(j)));
            for (i, v) in img.into_iter().enumerate() {
                matrix[i][j] = v;
            }
        }
        Self::new(source.clone(), target.clone(), matrix)
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply(&self, x: &[i64]) -> Elem {
        debug_assert_eq!(x.len(), self.source.rank());
        self.matrix
            .iter()
            .zip(&self.target.orders)
            .map(|(row, &e)| {
                let s: i128 = row
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum();
                s.rem_euclid(e as i128) as i64
            })
            .collect()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &AbHom) -> Result<AbHom, AlgebraError> {
        if other.target != self.source {
            return Err(AlgebraError::NotComposable);
        }
        AbHom::from_fn(&other.source, &self.target, |x| self.apply(&other.apply(x)))
    }

    pub fn add(&self, other: &AbHom) -> Result<AbHom, AlgebraError> {
        if self.source != other.source || self.target != other.target {
            return Err(AlgebraError::NotComposable);
        }
        AbHom::from_fn(&self.source, &self.target, |x| {
            self.target.add(&self.apply(x), &other.apply(x))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&a| a == 0)
    }

    /// Integer relation matrix `[A | diag(e)]` whose integer kernel describes
    /// solutions of `A x ≡ y (mod e)`.
    fn relation_matrix(&self) -> IMat {
        let m = self.target.rank();
        let n = self.source.rank();
        (0..m)
            .map(|i| {
                let mut row: Vec<i128> = self.matrix[i].iter().map(|&a| a as i128).collect();
                row.extend((0..m).map(|k| if k == i { self.target.orders[i] as i128 } else { 0 }));
                debug_assert_eq!(row.len(), n + m);
                row
            })
            .collect()
    }

    /// Some `x` with `self(x) = y`, or `None` when `y` is not in the image.
    pub fn solve_preimage(&self, y: &[i64]) -> Option<Elem> {
        let m = self.target.rank();
        let n = self.source.rank();
        if m == 0 {
            return Some(self.source.zero());
        }
        let rel = self.relation_matrix();
        let s = snf::smith(&rel, m, n + m);
        let yw: Vec<i128> = y.iter().map(|&c| c as i128).collect();
        let w = snf::mat_vec(&s.u, &yw);
        let mut sol = vec![0i128; n + m];
        for (i, &wi) in w.iter().enumerate() {
            let d = s.diag.get(i).copied().unwrap_or(0);
            if d == 0 {
                if wi != 0 {
                    return None;
                }
            } else {
                if wi % d != 0 {
                    return None;
                }
                sol[i] = wi / d;
            }
        }
        let full = snf::mat_vec(&s.v, &sol);
        let x = self.source.reduce_wide(&full[..n]);
        debug_assert_eq!(self.apply(&x), self.target.reduce(y.to_vec()));
        Some(x)
    }

    /// The kernel as an abstract group with its embedding into the source.
    pub fn kernel(&self) -> Subgroup {
        let m = self.target.rank();
        let n = self.source.rank();
        // integer lattice {x : A x ∈ e Z^m}
        let gens: Vec<Vec<i128>> = if m == 0 {
            (0..n)
                .map(|j| (0..n).map(|k| i128::from(j == k)).collect())
                .collect()
        } else {
            let rel = self.relation_matrix();
            let s = snf::smith(&rel, m, n + m);
            let r = s.rank();
            (r..n + m)
                .map(|k| snf::column(&s.v, k)[..n].to_vec())
                .collect()
        };
        Subgroup::generated(&self.source, gens)
    }

    /// The cokernel with its projection and a section on generators.
    pub fn cokernel(&self) -> Quotient {
        let m = self.target.rank();
        let rel = self.relation_matrix();
        Quotient::of_relations(m, rel)
    }

    pub fn image_order(&self) -> u128 {
        self.source.order() / self.kernel().group.order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.order() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.order() == 1
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// `Z^k / R Z^r` in Smith coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FinAbGroup,
    /// Row `i`: integer functional giving coordinate `i` of the class of a vector.
    pub coords: Vec<Vec<i128>>,
    /// Representative (in `Z^k`) of generator `i`.
    pub lifts: Vec<Vec<i128>>,
}

impl Quotient {
    /// Quotient of `Z^k` by the column span of `rel` (`k` rows). The span
    /// must have full rank, i.e. the quotient is finite.
    pub fn of_relations(k: usize, rel: IMat) -> Quotient {
        if k == 0 {
            return Quotient {
                group: FinAbGroup::trivial(),
                coords: vec![],
                lifts: vec![],
            };
        }
        let cols = rel.first().map_or(0, |r| r.len());
        let s = snf::smith(&rel, k, cols);
        let mut orders = Vec::new();
        let mut coords = Vec::new();
        let mut lifts = Vec::new();
        for i in 0..k {
            let d = s.diag.get(i).copied().unwrap_or(0);
            assert!(d != 0, "quotient is infinite: relation lattice has rank < {k}");
            if d == 1 {
                continue;
            }
            orders.push(d as u64);
            coords.push(s.u[i].clone());
            lifts.push(snf::column(&s.u_inv, i));
        }
        Quotient {
            group: FinAbGroup { orders },
            coords,
            lifts,
        }
    }

    pub fn class_of(&self, x: &[i128]) -> Elem {
        let c = snf::mat_vec(&self.coords, x);
        self.group.reduce_wide(&c)
    }
}

/// A subgroup presented abstractly, with its embedding.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FinAbGroup,
    pub embedding: AbHom,
}

impl Subgroup {
    /// Subgroup of `ambient` generated by the integer vectors `gens`.
    pub fn generated(ambient: &FinAbGroup, gens: Vec<Vec<i128>>) -> Subgroup {
        let n = ambient.rank();
        let k = gens.len();
        // relations: c ∈ Z^k with G c ∈ D Z^n
        let rel_cols: Vec<Vec<i128>> = if n == 0 {
            (0..k)
                .map(|j| (0..k).map(|i| i128::from(i == j)).collect())
                .collect()
        } else {
            let big: IMat = (0..n)
                .map(|i| {
                    let mut row: Vec<i128> = gens.iter().map(|g| g[i]).collect();
                    row.extend((0..n).map(|t| if t == i { ambient.orders[i] as i128 } else { 0 }));
                    row
                })
                .collect();
            let s = snf::smith(&big, n, k + n);
            let r = s.rank();
            (r..k + n)
                .map(|c| snf::column(&s.v, c)[..k].to_vec())
                .collect()
        };
        let rel: IMat = (0..k)
            .map(|i| rel_cols.iter().map(|c| c[i]).collect())
            .collect();
        let q = Quotient::of_relations(k, rel);
        let images: Vec<Elem> = q
            .lifts
            .iter()
            .map(|l| {
                let v: Vec<i128> = (0..n)
                    .map(|i| gens.iter().zip(l).map(|(g, c)| g[i] * c).sum())
                    .collect();
                ambient.reduce_wide(&v)
            })
            .collect();
        let matrix = (0..n)
            .map(|i| images.iter().map(|img| img[i]).collect())
            .collect();
        let embedding = AbHom::new(q.group.clone(), ambient.clone(), matrix)
            .expect("subgroup embedding is compatible");
        Subgroup {
            group: q.group,
            embedding,
        }
    }

    /// Coordinates of an ambient element lying in the subgroup.
    pub fn coords_of(&self, x: &[i64]) -> Option<Elem> {
        self.embedding.solve_preimage(x)
    }

    /// All ambient elements of the subgroup.
    pub fn elements(&self, bound: u128) -> Result<Vec<Elem>, AlgebraError> {
        Ok(self
            .group
            .enumerate_bounded(bound)?
            .map(|c| self.embedding.apply(&c))
            .collect())
    }
}
