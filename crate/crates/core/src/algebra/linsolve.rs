//! Exact Gaussian elimination over Q.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Row-reduce in place; returns the pivot columns.
fn reduce(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(a: &[Vec<BigRational>]) -> usize {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rows = a.to_vec();
    reduce(&mut rows, ncols).len()
}

/// Solve `a * x = b` column by column for every right-hand side in `b`.
/// `a` may be overdetermined but must have full column rank and the system
/// must be consistent.
pub fn solve_exact(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!("{} equations, {} right-hand rows", a.len(), b.len())));
    }
    let n = a.first().map_or(0, |r| r.len());
    let k = b.first().map_or(0, |r| r.len());
    let mut rows: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b.iter())
        .map(|(ra, rb)| ra.iter().chain(rb.iter()).cloned().collect())
        .collect();
    let pivots = reduce(&mut rows, n);
    if pivots.len() < n {
        return Err(Error::SingularMatrix);
    }
    for row in &rows[n..] {
        if row[n..].iter().any(|x| !x.is_zero()) {
            return Err(Error::Inconsistent);
        }
    }
    Ok(rows[..n].iter().map(|row| row[n..n + k].to_vec()).collect())
}
