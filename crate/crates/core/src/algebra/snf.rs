//! Smith normal form over the integers with explicit unimodular transforms.
//!
//! For an `r x c` integer matrix `M` this computes `U`, `U^-1` and `V` with
//! `U * M * V = D`, where `D` is diagonal with non-negative entries and
//! `D[i][i] | D[i+1][i+1]`. Every kernel, cokernel and preimage query in the
//! crate goes through this one routine.

pub type IMat = Vec<Vec<i128>>;

#[derive(Clone, Debug)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal of `D`, length `min(rows, cols)`.
    pub diag: Vec<i128>,
    pub u: IMat,
    pub u_inv: IMat,
    pub v: IMat,
}

impl Smith {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|&&d| d != 0).count()
    }
}

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_vec(m: &IMat, x: &[i128]) -> Vec<i128> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn column(m: &IMat, j: usize) -> Vec<i128> {
    m.iter().map(|row| row[j]).collect()
}

fn swap_rows(m: &mut IMat, a: usize, b: usize) {
    m.swap(a, b);
}

fn swap_cols(m: &mut IMat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row[dst] += c * row[src]
fn add_row(m: &mut IMat, dst: usize, src: usize, c: i128) {
    if c == 0 {
        return;
    }
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(src_row) {
        *d += c * s;
    }
}

/// col[dst] += c * col[src]
fn add_col(m: &mut IMat, dst: usize, src: usize, c: i128) {
    if c == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[dst] += c * row[src];
    }
}

struct Work {
    m: IMat,
    u: IMat,
    u_inv: IMat,
    v: IMat,
}

impl Work {
    fn row_swap(&mut self, a: usize, b: usize) {
        swap_rows(&mut self.m, a, b);
        swap_rows(&mut self.u, a, b);
        swap_cols(&mut self.u_inv, a, b);
    }
    fn col_swap(&mut self, a: usize, b: usize) {
        swap_cols(&mut self.m, a, b);
        swap_cols(&mut self.v, a, b);
    }
    fn row_add(&mut self, dst: usize, src: usize, c: i128) {
        add_row(&mut self.m, dst, src, c);
        add_row(&mut self.u, dst, src, c);
        add_col(&mut self.u_inv, src, dst, -c);
    }
    fn col_add(&mut self, dst: usize, src: usize, c: i128) {
        add_col(&mut self.m, dst, src, c);
        add_col(&mut self.v, dst, src, c);
    }
    fn row_negate(&mut self, r: usize) {
        for x in self.m[r].iter_mut() {
            *x = -*x;
        }
        for x in self.u[r].iter_mut() {
            *x = -*x;
        }
        for row in self.u_inv.iter_mut() {
            row[r] = -row[r];
        }
    }
}

pub fn smith(matrix: &IMat, rows: usize, cols: usize) -> Smith {
    debug_assert!(matrix.len() == rows && matrix.iter().all(|r| r.len() == cols));
    let mut w = Work {
        m: matrix.clone(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
    };
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize, i128)> = None;
        for i in t..rows {
            for j in t..cols {
                let a = w.m[i][j].abs();
                if a != 0 && best.is_none_or(|(_, _, b)| a < b) {
                    best = Some((i, j, a));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        loop {
            let mut moved = false;
            for i in t + 1..rows {
                if w.m[i][t] != 0 {
                    let q = w.m[i][t].div_euclid(w.m[t][t]);
                    w.row_add(i, t, -q);
                    if w.m[i][t] != 0 {
                        w.row_swap(t, i);
                        moved = true;
                    }
                }
            }
            for j in t + 1..cols {
                if w.m[t][j] != 0 {
                    let q = w.m[t][j].div_euclid(w.m[t][t]);
                    w.col_add(j, t, -q);
                    if w.m[t][j] != 0 {
                        w.col_swap(t, j);
                        moved = true;
                    }
                }
            }
            if moved {
                continue;
            }
            let p = w.m[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| w.m[i][j] % p != 0));
            match bad {
                Some(i) => w.row_add(t, i, 1),
                None => break,
            }
        }
        if w.m[t][t] < 0 {
            w.row_negate(t);
        }
        t += 1;
    }
    let diag = (0..n).map(|i| w.m[i][i]).collect();
    Smith {
        rows,
        cols,
        diag,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &IMat, b: &IMat) -> IMat {
        let n = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().enumerate().map(|(k, x)| x * b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn check(m: IMat) {
        let (r, c) = (m.len(), m[0].len());
        let s = smith(&m, r, c);
        let d = mul(&mul(&s.u, &m), &s.v);
        for i in 0..r {
            for j in 0..c {
                let expect = if i == j { s.diag[i] } else { 0 };
                assert_eq!(d[i][j], expect, "U M V not diagonal at ({i},{j})");
            }
        }
        assert_eq!(mul(&s.u, &s.u_inv), identity(r));
        for w in s.diag.windows(2) {
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0);
            } else {
                assert_eq!(w[1], 0);
            }
        }
    }

    #[test]
    fn small_matrices() {
        check(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        check(vec![vec![0, 0], vec![0, 0]]);
        check(vec![vec![4, 6]]);
        check(vec![vec![2], vec![3]]);
        check(vec![vec![6, 0], vec![0, 4]]);
    }

    #[test]
    fn invariant_factors() {
        let s = smith(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3, 3);
        assert_eq!(s.diag, vec![2, 6, 12]);
        let s = smith(&vec![vec![6, 0], vec![0, 4]], 2, 2);
        assert_eq!(s.diag, vec![2, 12]);
    }
}
