//! Exact dense linear algebra over the rationals.

use crate::rational::Rational;

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    if n == 0 {
        return Rational::ONE;
    }
    assert!(matrix.iter().all(|row| row.len() == n), "matrix must be square");
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let mut sign = Rational::ONE;
    let mut prev = Rational::ONE;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&p| !a[p][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return Rational::ZERO,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = &num / &prev;
            }
            a[i][k] = Rational::ZERO;
        }
        prev = a[k][k].clone();
    }
    &sign * &a[n - 1][n - 1]
}

/// Reduced row echelon form: the nonzero rows and their pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of `{x : A x = 0}` for the reduced matrix `A`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::ZERO; self.cols];
                v[f] = Rational::ONE;
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -&row[f];
                }
                v
            })
            .collect()
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &(&c * r);
                    }
                }
            }
        }
        v.iter().all(Rational::is_zero)
    }
}

pub fn row_reduce(mut rows: Vec<Vec<Rational>>, cols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].recip().expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, pr) in row.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *x -= &(&f * pr);
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    rows.truncate(rank);
    Echelon { rows, pivots, cols }
}

pub fn rank(rows: Vec<Vec<Rational>>, cols: usize) -> usize {
    row_reduce(rows, cols).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(bareiss_determinant(&m(&[&[10, -5], &[-5, 7]])), Rational::from_int(45));
        assert_eq!(bareiss_determinant(&m(&[&[0, 1], &[1, 0]])), Rational::from_int(-1));
        assert_eq!(bareiss_determinant(&m(&[&[1, 2], &[2, 4]])), Rational::ZERO);
        assert_eq!(
            bareiss_determinant(&m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])),
            Rational::from_int(4)
        );
    }

    #[test]
    fn nullspace_and_membership() {
        let e = row_reduce(m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]), 3);
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(e.contains(&m(&[&[1, 3, 4]])[0]));
        assert!(!e.contains(&m(&[&[0, 0, 1]])[0]));
    }
}
