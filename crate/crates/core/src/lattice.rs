//! Small integer-matrix reductions: Smith normal form with the column
//! transform, and the index of a row lattice in `Z^n`.

use num_integer::Integer;

use crate::error::{Error, Result};

/// `S = U A V` diagonal with `d_1 | d_2 | ...`. Only the column side is kept:
/// `v` and its inverse `v_inv`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<i128>,
    pub v: Vec<Vec<i128>>,
    pub v_inv: Vec<Vec<i128>>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn overflow() -> Error {
    Error::OutOfScale("integer overflow in lattice reduction".into())
}

struct Work {
    a: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
    v_inv: Vec<Vec<i128>>,
}

impl Work {
    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// col_j -= q col_i.
    fn col_sub(&mut self, j: usize, i: usize, q: i128) -> Result<()> {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row[j] = q
                .checked_mul(row[i])
                .and_then(|x| row[j].checked_sub(x))
                .ok_or_else(overflow)?;
        }
        // The inverse transform adds q row_j to row_i.
        let (ri, rj) = if i < j {
            let (lo, hi) = self.v_inv.split_at_mut(j);
            (&mut lo[i], &hi[0])
        } else {
            let (lo, hi) = self.v_inv.split_at_mut(i);
            (&mut hi[0], &lo[j])
        };
        for (x, y) in ri.iter_mut().zip(rj.iter()) {
            *x = q.checked_mul(*y).and_then(|z| x.checked_add(z)).ok_or_else(overflow)?;
        }
        Ok(())
    }

    fn negate_col(&mut self, i: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row[i] = -row[i];
        }
        for x in self.v_inv[i].iter_mut() {
            *x = -*x;
        }
    }

    /// row_j -= q row_i.
    fn row_sub(&mut self, j: usize, i: usize, q: i128) -> Result<()> {
        let src = self.a[i].clone();
        for (x, y) in self.a[j].iter_mut().zip(src) {
            *x = q.checked_mul(y).and_then(|z| x.checked_sub(z)).ok_or_else(overflow)?;
        }
        Ok(())
    }

    fn row_add(&mut self, j: usize, i: usize) -> Result<()> {
        self.row_sub(j, i, -1)
    }
}

/// Smith normal form of an `n x m` integer matrix.
pub fn smith(a: &[Vec<i128>], m: usize) -> Result<Smith> {
    let n = a.len();
    let mut w = Work {
        a: a.to_vec(),
        v: identity(m),
        v_inv: identity(m),
    };
    let mut diagonal = Vec::new();
    for t in 0..n.min(m) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..m {
                    let x = w.a[i][j];
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                diagonal.resize(n.min(m), 0);
                return finish(w, diagonal);
            };
            w.a.swap(t, bi);
            w.swap_cols(t, bj);
            let pivot = w.a[t][t];
            let mut dirty = false;
            for i in t + 1..n {
                let q = Integer::div_floor(&w.a[i][t], &pivot);
                if q != 0 {
                    w.row_sub(i, t, q)?;
                }
                dirty |= w.a[i][t] != 0;
            }
            for j in t + 1..m {
                let q = Integer::div_floor(&w.a[t][j], &pivot);
                if q != 0 {
                    w.col_sub(j, t, q)?;
                }
                dirty |= w.a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..m).any(|j| w.a[i][j] % pivot != 0));
            match bad {
                Some(i) => w.row_add(t, i)?,
                None => break,
            }
        }
        if w.a[t][t] < 0 {
            w.negate_col(t);
        }
        diagonal.push(w.a[t][t]);
    }
    finish(w, diagonal)
}

fn finish(w: Work, diagonal: Vec<i128>) -> Result<Smith> {
    Ok(Smith {
        diagonal,
        v: w.v,
        v_inv: w.v_inv,
    })
}

/// Index of the lattice spanned by `rows` in `Z^m`, or `None` if it has
/// rank `< m`. Columns are eliminated in the order given by `column_order`.
pub fn lattice_index(rows: &[Vec<i64>], m: usize, column_order: &[usize]) -> Result<Option<u128>> {
    let mut pool: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .filter(|r: &Vec<i128>| r.iter().any(|&x| x != 0))
        .collect();
    let mut index: u128 = 1;
    for &c in column_order.iter().take(m) {
        loop {
            let mut nz: Vec<usize> = (0..pool.len()).filter(|&i| pool[i][c] != 0).collect();
            if nz.is_empty() {
                return Ok(None);
            }
            if nz.len() == 1 {
                let row = pool.swap_remove(nz[0]);
                index = index.checked_mul(row[c].unsigned_abs()).ok_or_else(overflow)?;
                break;
            }
            nz.sort_by_key(|&i| pool[i][c].abs());
            let p = nz[0];
            let pivot_row = pool[p].clone();
            let pivot = pivot_row[c];
            for &i in &nz[1..] {
                let q = Integer::div_floor(&pool[i][c], &pivot);
                for (x, y) in pool[i].iter_mut().zip(&pivot_row) {
                    *x = q.checked_mul(*y).and_then(|z| x.checked_sub(z)).ok_or_else(overflow)?;
                }
            }
            pool.retain(|r| r.iter().any(|&x| x != 0));
        }
    }
    Ok(Some(index))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let m = b[0].len();
        a.iter()
            .map(|r| {
                (0..m)
                    .map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn smith_of_small_matrices() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&a, 3).unwrap();
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        assert_eq!(mul(&s.v, &s.v_inv), identity(3));
        let t = smith(&[vec![4, 0], vec![0, 6]], 2).unwrap();
        assert_eq!(t.diagonal, vec![2, 12]);
        assert_eq!(mul(&t.v, &t.v_inv), identity(2));
    }

    #[test]
    fn index_of_row_lattices() {
        let rows = vec![vec![2, 0], vec![0, 3], vec![4, 3]];
        assert_eq!(lattice_index(&rows, 2, &[0, 1]).unwrap(), Some(6));
        assert_eq!(lattice_index(&rows, 2, &[1, 0]).unwrap(), Some(6));
        assert_eq!(lattice_index(&[vec![1, 1], vec![2, 2]], 2, &[0, 1]).unwrap(), None);
        assert_eq!(lattice_index(&[vec![3, 1], vec![1, 2]], 2, &[0, 1]).unwrap(), Some(5));
    }
}
