//! Exact rational linear algebra: ranks, null spaces and a small simplex
//! feasibility solver.

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Reduces `rows` to reduced row echelon form in place and returns the pivot
/// columns.
pub fn rref(rows: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (head, tail) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&mut a[i], &b[0])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&mut b[0], &a[r])
                };
                for (x, y) in head.iter_mut().zip(tail.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of an integer matrix.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let Some(ncols) = rows.first().map(|r| r.len()) else {
        return 0;
    };
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    rref(&mut m, ncols).len()
}

/// A basis of `{x : M x = 0}` for an integer matrix with `ncols` columns.
pub fn nullspace(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// A linear feasibility problem over non-negative rational variables.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub nvars: usize,
    /// Rows `a · x = b`.
    pub eq: Vec<(Vec<Q>, Q)>,
    /// Rows `a · x ≥ b`.
    pub ge: Vec<(Vec<Q>, Q)>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> LinearSystem {
        LinearSystem { nvars, eq: Vec::new(), ge: Vec::new() }
    }

    /// Returns a non-negative solution, or `None` when the system is infeasible.
    pub fn solve(&self) -> Option<Vec<Q>> {
        feasible(self)
    }
}

/// Phase-one simplex with Bland's rule.
fn feasible(sys: &LinearSystem) -> Option<Vec<Q>> {
    let n = sys.nvars;
    let nslack = sys.ge.len();
    let rows: Vec<(Vec<Q>, Q)> = sys
        .eq
        .iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.resize(n + nslack, Q::zero());
            (r, b.clone())
        })
        .chain(sys.ge.iter().enumerate().map(|(k, (a, b))| {
            let mut r = a.clone();
            r.resize(n + nslack, Q::zero());
            r[n + k] = -Q::one();
            (r, b.clone())
        }))
        .collect();
    let m = rows.len();
    let nv = n + nslack;
    let total = nv + m;
    // Tableau rows: coefficients over structural+slack+artificial, then rhs.
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m + 1);
    for (i, (a, b)) in rows.iter().enumerate() {
        let neg = b.is_negative();
        let mut row: Vec<Q> = a.iter().map(|x| if neg { -x.clone() } else { x.clone() }).collect();
        row.resize(total + 1, Q::zero());
        row[nv + i] = Q::one();
        row[total] = if neg { -b.clone() } else { b.clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();
    // Objective: minimise sum of artificials, expressed as reduced costs.
    let mut obj = vec![Q::zero(); total + 1];
    for row in &t {
        for (j, x) in row.iter().enumerate() {
            if j < nv || j == total {
                obj[j] = &obj[j] - x;
            }
        }
    }
    while let Some(enter) = (0..total).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][total] / &t[i][enter];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((pr, _)) = leave else {
            break;
        };
        let inv = t[pr][enter].recip();
        for x in t[pr].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, y) in obj.iter_mut().zip(pivot_row.iter()) {
                *x = &*x - &f * y;
            }
        }
        basis[pr] = enter;
    }
    if !obj[total].is_zero() {
        return None;
    }
    let mut x = vec![Q::zero(); nv];
    for (i, &b) in basis.iter().enumerate() {
        if b < nv {
            x[b] = t[i][total].clone();
        }
    }
    x.truncate(n);
    Some(x)
}

/// Scales a non-negative rational vector to the smallest integer multiple.
pub fn to_integers(v: &[Q]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = num::integer::lcm(l, x.denom().clone());
    }
    v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]), 2);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = vec![vec![1, -1, 0, 0], vec![0, 1, -1, 0]];
        let ns = nullspace(&m, 4);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &m {
                let s: Q = row.iter().zip(&v).map(|(&a, b)| q(a) * b).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn simplex_feasibility() {
        let mut s = LinearSystem::new(2);
        s.eq.push((vec![q(1), q(1)], q(3)));
        s.ge.push((vec![q(1), q(-1)], q(1)));
        let x = s.solve().unwrap();
        assert_eq!(&x[0] + &x[1], q(3));
        assert!(&x[0] - &x[1] >= q(1));

        let mut s = LinearSystem::new(1);
        s.eq.push((vec![q(1)], q(-1)));
        assert!(s.solve().is_none());
    }

    #[test]
    fn weight_search_shape() {
        // w_a - w_b >= 1, w_c - w_a - w_x >= 1, all >= 1
        let mut s = LinearSystem::new(3);
        s.ge.push((vec![q(1), q(-1), q(0)], q(1)));
        s.ge.push((vec![q(-1), q(0), q(1)], q(2)));
        for i in 0..3 {
            let mut r = vec![q(0); 3];
            r[i] = q(1);
            s.ge.push((r, q(1)));
        }
        let x = s.solve().unwrap();
        let w = to_integers(&x);
        assert!(w[0] > w[1] && w[2] > w[0]);
    }
}
