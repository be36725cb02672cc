//! Small dense exact linear algebra over ℚ.

use num_traits::{One, Zero};

use crate::rational::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn from_int(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&v| crate::rational::q(v)).collect())
        .collect()
}

pub fn det(m: &Matrix) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            a.swap(piv, col);
            sign = -sign;
        }
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    (0..n).fold(sign, |acc, i| acc * &a[i][i])
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &Matrix, v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve `A x = b` for a possibly overdetermined system; `Err(rank)` when
/// the solution is not unique, `Ok(None)` when inconsistent.
pub fn solve_unique(a: &Matrix, b: &[Q]) -> Result<Option<Vec<Q>>, usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(piv, rank);
        let p = aug[rank][col].clone();
        for v in aug[rank].iter_mut() {
            *v /= &p;
        }
        for r in 0..rows {
            if r == rank || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            for c in col..=cols {
                let v = &f * &aug[rank][c];
                aug[r][c] -= v;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rank < cols {
        return Err(rank);
    }
    if aug[rank..].iter().any(|r| !r[cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn det_and_inverse() {
        let m = from_int(&[vec![0, -1], vec![1, -1]]);
        assert_eq!(det(&m), q(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, from_int(&[vec![-1, 1], vec![-1, 0]]));
        assert!(inverse(&from_int(&[vec![1, 2], vec![2, 4]])).is_none());
    }

    #[test]
    fn overdetermined_solve() {
        let a = from_int(&[vec![1, 1], vec![0, 1], vec![2, 1]]);
        let b = [q(3), q(1), q(5)];
        assert_eq!(solve_unique(&a, &b), Ok(Some(vec![q(2), q(1)])));
        let bad = [q(3), q(1), q(6)];
        assert_eq!(solve_unique(&a, &bad), Ok(None));
        assert_eq!(solve_unique(&from_int(&[vec![1, 1]]), &[q(1)]), Err(1));
    }
}
