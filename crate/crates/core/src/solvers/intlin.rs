//! Integer linear systems `A·y = b` by diagonalization with unimodular row
//! and column operations (Smith form without the divisibility chain).

use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::Precondition("integer overflow in linear elimination".into())
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or_else(overflow)
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or_else(overflow)
}

/// `row[i] -= q·row[t]` over a matrix given as rows.
fn row_op(m: &mut [Vec<i128>], i: usize, t: usize, q: i128) -> Result<()> {
    for j in 0..m[i].len() {
        m[i][j] = sub(m[i][j], mul(q, m[t][j])?)?;
    }
    Ok(())
}

fn col_op(m: &mut [Vec<i128>], j: usize, t: usize, q: i128) -> Result<()> {
    for row in m.iter_mut() {
        row[j] = sub(row[j], mul(q, row[t])?)?;
    }
    Ok(())
}

/// An integer solution of `a·y = b`, or `None` when there is none.
/// Fails only on `i128` overflow.
pub fn solve_integer_system(a: &[Vec<i128>], b: &[i128]) -> Result<Option<Vec<i128>>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let mut rhs: Vec<Vec<i128>> = b.iter().map(|&x| vec![x]).collect();
    let mut v: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the remaining block becomes the pivot
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].unsigned_abs());
            let Some((pi, pj)) = pivot else { break };
            m.swap(t, pi);
            rhs.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    row_op(&mut m, i, t, q)?;
                    row_op(&mut rhs, i, t, q)?;
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    col_op(&mut m, j, t, q)?;
                    col_op(&mut v, j, t, q)?;
                }
                clean &= m[t][j] == 0;
            }
            if clean {
                rank = t + 1;
                break;
            }
        }
        if rank <= t {
            break;
        }
    }
    let mut w = vec![0i128; cols];
    for t in 0..rows {
        let r = rhs[t][0];
        if t < rank {
            if r % m[t][t] != 0 {
                return Ok(None);
            }
            w[t] = r / m[t][t];
        } else if r != 0 {
            return Ok(None);
        }
    }
    let mut y = vec![0i128; cols];
    for (i, yi) in y.iter_mut().enumerate() {
        for (j, &wj) in w.iter().enumerate() {
            *yi = yi.checked_add(mul(v[i][j], wj)?).ok_or_else(overflow)?;
        }
    }
    Ok(Some(y))
}
