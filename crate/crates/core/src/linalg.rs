//! Exact Gaussian elimination over a [`Field`].

use crate::exactalg::Field;

/// Row-reduced echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("pivot is nonzero");
        for v in m[row].iter_mut().skip(col) {
            *v = v.mul(&inv);
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row).skip(col) {
                if !pv.is_zero() {
                    *v = v.sub(&f.mul(pv));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// A basis of `{x : m x = 0}`, one vector per free column, each with a 1 in
/// its free column; ordered by free column.
pub fn nullspace<F: Field>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = a[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Some `x` with `m x = b`, if the system is consistent.
pub fn solve<F: Field>(m: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<F>> = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = a[r][cols].clone();
    }
    Some(x)
}

/// Solves `m x = b` for every column `b` of `rhs` with a single elimination;
/// `None` if any system is inconsistent.
pub fn solve_many<F: Field>(m: &[Vec<F>], rhs: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend(rhs.iter().map(|b| b[i].clone()));
            r
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.last().is_some_and(|&p| p >= cols) {
        return None;
    }
    let rank = pivots.len();
    if a[rank..]
        .iter()
        .any(|row| row[cols..].iter().any(|x| !x.is_zero()))
    {
        return None;
    }
    Some(
        (0..rhs.len())
            .map(|t| {
                let mut x = vec![F::zero(); cols];
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = a[r][cols + t].clone();
                }
                x
            })
            .collect(),
    )
}
