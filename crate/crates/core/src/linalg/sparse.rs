//! Sparse fraction-free elimination over the integers.
//!
//! Rational rows are scaled to primitive integer rows; elimination keeps rows
//! primitive by dividing out the content after every step.

use super::{Matrix, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type SparseRow = Vec<(usize, Rational)>;
type IntRow = Vec<(usize, BigInt)>;

pub fn rows_of(m: &Matrix) -> Vec<SparseRow> {
    (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect()
        })
        .collect()
}

fn to_int_row(row: &[(usize, Rational)]) -> IntRow {
    let mut sorted: Vec<&(usize, Rational)> = row.iter().filter(|(_, v)| !v.is_zero()).collect();
    sorted.sort_by_key(|(c, _)| *c);
    let l = sorted.iter().fold(BigInt::one(), |l, (_, v)| l.lcm(v.denom()));
    let mut out: IntRow = Vec::with_capacity(sorted.len());
    for (c, v) in sorted {
        let x = v.numer() * (&l / v.denom());
        match out.last_mut() {
            Some((lc, lv)) if *lc == *c => *lv += x,
            _ => out.push((*c, x)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `a*row - b*piv`, both sorted by column.
fn combine(row: &IntRow, a: &BigInt, piv: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = piv.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, a * &row[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(b * &piv[j].1)));
            j += 1;
        } else {
            let v = a * &row[i].1 - b * &piv[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form built incrementally.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<IntRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivot_row: vec![None; ncols], rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn reduce(&self, mut row: IntRow) -> IntRow {
        let mut pos = 0;
        while pos < row.len() {
            let col = row[pos].0;
            match self.pivot_row[col] {
                Some(p) => {
                    let piv = &self.rows[p];
                    let a = piv[0].1.clone();
                    let b = row[pos].1.clone();
                    let g = a.gcd(&b);
                    let (a, b) = (&a / &g, &b / &g);
                    let tail = row.split_off(pos);
                    let reduced = combine(&tail, &a, piv, &b);
                    let head_len = row.len();
                    if !a.is_one() {
                        for (_, v) in row.iter_mut() {
                            *v *= &a;
                        }
                    }
                    row.extend(reduced);
                    make_primitive(&mut row);
                    pos = head_len;
                }
                None => pos += 1,
            }
        }
        row
    }

    /// Inserts a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: &[(usize, Rational)]) -> bool {
        let r = to_int_row(row);
        self.insert_int(r)
    }

    fn insert_int(&mut self, r: IntRow) -> bool {
        let r = self.reduce(r);
        let Some(&(col, _)) = r.first() else {
            return false;
        };
        self.pivot_row[col] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn contains(&self, row: &[(usize, Rational)]) -> bool {
        self.reduce(to_int_row(row)).is_empty()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    /// Basis of {v : row·v = 0 for every inserted row}.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|&c| self.pivot_row[c].is_none()).collect();
        let mut pivots: Vec<(usize, usize)> = (0..self.ncols)
            .filter_map(|c| self.pivot_row[c].map(|r| (c, r)))
            .collect();
        pivots.sort_by(|a, b| b.0.cmp(&a.0));
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.ncols];
                x[f] = Rational::one();
                for &(c, r) in &pivots {
                    let row = &self.rows[r];
                    let mut s = Rational::zero();
                    for (cc, v) in &row[1..] {
                        if !x[*cc].is_zero() {
                            s += &x[*cc] * Rational::from_integer(v.clone());
                        }
                    }
                    if !s.is_zero() {
                        x[c] = -s / Rational::from_integer(row[0].1.clone());
                    }
                }
                x
            })
            .collect()
    }
}

pub fn rank(ncols: usize, rows: &[SparseRow]) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn kernel(ncols: usize, rows: &[SparseRow]) -> Vec<Vec<Rational>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.kernel()
}

/// Solves `rows · v = rhs` exactly; `None` when inconsistent.
pub fn solve(ncols: usize, rows: &[SparseRow], rhs: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(rows.len(), rhs.len());
    // augmented column ncols carries -rhs; a kernel vector with last coordinate 1 solves it
    let mut e = Echelon::new(ncols + 1);
    for (r, b) in rows.iter().zip(rhs) {
        let mut row = r.clone();
        if !b.is_zero() {
            row.push((ncols, -b.clone()));
        }
        e.insert(&row);
    }
    if e.pivot_row[ncols].is_some() {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols + 1];
    x[ncols] = Rational::one();
    let mut pivots: Vec<(usize, usize)> =
        (0..ncols).filter_map(|c| e.pivot_row[c].map(|r| (c, r))).collect();
    pivots.sort_by(|a, b| b.0.cmp(&a.0));
    for (c, r) in pivots {
        let row = &e.rows[r];
        let mut s = Rational::zero();
        for (cc, v) in &row[1..] {
            if !x[*cc].is_zero() {
                s += &x[*cc] * Rational::from_integer(v.clone());
            }
        }
        x[c] = -s / Rational::from_integer(row[0].1.clone());
    }
    x.truncate(ncols);
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, int};

    fn dense_rank(m: &Matrix) -> usize {
        m.rref().1.len()
    }

    #[test]
    fn agrees_with_dense_rref() {
        let m = Matrix::from_rows(vec![
            vec![int(2), int(0), frac(1, 3), int(0), int(5)],
            vec![int(0), int(0), int(1), int(1), int(0)],
            vec![int(4), int(0), frac(5, 3), int(2), int(10)],
            vec![int(0), int(7), int(0), int(0), int(0)],
        ]);
        assert_eq!(rank(5, &rows_of(&m)), dense_rank(&m));
        let k = kernel(5, &rows_of(&m));
        assert_eq!(k.len(), 5 - dense_rank(&m));
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inhomogeneous_solve() {
        let m = Matrix::from_i64(&[&[1, 1], &[1, -1]]);
        let x = solve(2, &rows_of(&m), &[int(3), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        let s = Matrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(solve(2, &rows_of(&s), &[int(1), int(3)]).is_none());
    }
}
