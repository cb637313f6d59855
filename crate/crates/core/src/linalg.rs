//! Dense linear algebra over a [`Field`].

use crate::scalar::{Field, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduced row-echelon form with zero rows removed, plus pivot columns.
pub fn rref(_field: Field, rows: &[Vec<Scalar>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(field: Field, rows: &[Vec<Scalar>], ncols: usize) -> usize {
    rref(field, rows, ncols).1.len()
}

/// Residual of `v` after reduction by an RREF basis; zero iff `v` is in the span.
pub fn reduce(v: &[Scalar], basis: &[Vec<Scalar>], pivots: &[usize]) -> Vec<Scalar> {
    let mut w = v.to_vec();
    for (row, &p) in basis.iter().zip(pivots) {
        if w[p].is_zero() {
            continue;
        }
        let f = w[p].clone();
        for (x, y) in w.iter_mut().zip(row) {
            *x = &*x - &(&f * y);
        }
    }
    w
}

pub fn in_span(v: &[Scalar], basis: &[Vec<Scalar>], pivots: &[usize]) -> bool {
    reduce(v, basis, pivots).iter().all(Scalar::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(f: Field, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(f, x)).collect()
    }

    #[test]
    fn rref_is_canonical() {
        let f = Field::Rationals;
        let a = vec![row(f, &[2, 4, 0]), row(f, &[1, 2, 1])];
        let b = vec![row(f, &[3, 6, 1]), row(f, &[0, 0, 5])];
        assert_eq!(rref(f, &a, 3), rref(f, &b, 3));
        assert_eq!(rref(f, &a, 3).1, vec![0, 2]);
    }

    #[test]
    fn span_membership_mod_p() {
        let f = Field::Prime(3);
        let (b, p) = rref(f, &[row(f, &[1, 1, 0]), row(f, &[0, 1, 1])], 3);
        assert!(in_span(&row(f, &[1, 2, 1]), &b, &p));
        assert!(!in_span(&row(f, &[0, 0, 1]), &b, &p));
        assert_eq!(rank(f, &[row(f, &[1, 2]), row(f, &[2, 1])], 2), 1);
    }
}
