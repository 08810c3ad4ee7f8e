//! Dense exact linear algebra over the rationals, plus integer Smith and
//! Hermite normal forms.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

/// Row-major dense matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `len`).
    pub fn from_cols(len: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Matrix::zeros(len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), len);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j) - f * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.clone().rref().len()
    }

    /// Basis of the right kernel {v : A v = 0}.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f);
                }
                v
            })
            .collect()
    }

    /// Some solution x of A x = b, if one exists.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Q::zero(), |acc, j| acc + self.get(i, j) * v[j]))
            .collect()
    }
}

/// Indices of a maximal subset of `candidates` that stays linearly
/// independent modulo the span of `base`.
pub fn extend_basis(len: usize, base: &[Vec<Q>], candidates: &[Vec<Q>]) -> Vec<usize> {
    let mut rows: Vec<Vec<Q>> = base.to_vec();
    let mut rank = rank_of(len, &rows);
    let mut chosen = Vec::new();
    for (k, c) in candidates.iter().enumerate() {
        rows.push(c.clone());
        let r = rank_of(len, &rows);
        if r > rank {
            rank = r;
            chosen.push(k);
        } else {
            rows.pop();
        }
    }
    chosen
}

/// Rank of a list of vectors of length `len`.
pub fn rank_of(len: usize, vecs: &[Vec<Q>]) -> usize {
    if vecs.is_empty() || len == 0 {
        return 0;
    }
    Matrix::from_rows(vecs).rank()
}

/// Smith normal form `u * a * v = d` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    /// Diagonal entries, non-negative, each dividing the next.
    pub diag: Vec<i64>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn smith_normal_form(a: &[Vec<i64>]) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut d: Vec<Vec<i64>> = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // pick smallest nonzero entry in the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..m {
            let f = fdiv(d[i][t], d[t][t]);
            if f != 0 {
                for j in 0..n {
                    d[i][j] -= f * d[t][j];
                }
                for j in 0..m {
                    u[i][j] -= f * u[t][j];
                }
            }
            if d[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..n {
            let f = fdiv(d[t][j], d[t][t]);
            if f != 0 {
                for i in 0..m {
                    d[i][j] -= f * d[i][t];
                }
                for i in 0..n {
                    v[i][j] -= f * v[i][t];
                }
            }
            if d[t][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility: pivot must divide the rest of the block
        let mut bad = None;
        'scan: for i in t + 1..m {
            for j in t + 1..n {
                if d[i][j] % d[t][t] != 0 {
                    bad = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = bad {
            for j in 0..n {
                d[t][j] += d[i][j];
            }
            for j in 0..m {
                u[t][j] += u[i][j];
            }
            continue;
        }
        if d[t][t] < 0 {
            for j in 0..n {
                d[t][j] = -d[t][j];
            }
            for j in 0..m {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }
    let diag = (0..m.min(n)).map(|i| d[i][i]).collect();
    Smith { diag, u, v }
}

/// Row-style Hermite normal form: echelon rows spanning the same lattice,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped.
pub fn hermite_normal_form(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = a.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let n = rows.first().map_or(0, |r| r.len());
    let mut out: Vec<Vec<i64>> = Vec::new();
    for c in 0..n {
        // gcd-combine all rows with nonzero entry in column c
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).expect("nonempty");
            for &i in &nz {
                if i != p {
                    let f = fdiv(rows[i][c], rows[p][c]);
                    let prow = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(prow) {
                        *x -= f * y;
                    }
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&i| rows[i][c] != 0) {
            let mut r = rows.remove(p);
            if r[c] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(r);
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
    }
    // reduce above pivots
    for k in 0..out.len() {
        let c = out[k].iter().position(|&x| x != 0).expect("nonzero row");
        let pv = out[k][c];
        for i in 0..k {
            let f = fdiv(out[i][c], pv);
            if f != 0 {
                let prow = out[k].clone();
                for (x, y) in out[i].iter_mut().zip(prow) {
                    *x -= f * y;
                }
            }
        }
    }
    out
}

fn fdiv(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

pub fn is_unit_or_zero(x: &Q) -> bool {
    x.is_zero() || x.abs() == Q::one()
}
