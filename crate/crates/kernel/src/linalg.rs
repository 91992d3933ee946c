//! Exact dense linear algebra over the scalar field: rank and linear solve
//! with deterministic pivoting, so downstream reports never depend on
//! iteration order.

use crate::scalar::{QMode, Scalar};

/// Rank of the row span. Pivot selection is first-nonzero in order, which is
/// deterministic for a fixed row list.
pub fn rank(mut rows: Vec<Vec<Scalar>>, mode: QMode) -> usize {
    let _ = mode;
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut r = 0usize;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let pivot = (r..nrows).find(|&i| !rows[i][col].is_zero());
        let Some(p) = pivot else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inv();
        for j in col..ncols {
            rows[r][j] = rows[r][j].mul(&inv);
        }
        let (pivot_row, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &pivot_row[r];
        for row in rest {
            if !row[col].is_zero() {
                let factor = row[col].clone();
                for j in col..ncols {
                    let t = pivot_row[j].mul(&factor);
                    row[j] = row[j].sub(&t);
                }
            }
        }
        r += 1;
    }
    r
}

/// Solve sum_i x_i * columns[i] = target. Returns None when the target is
/// outside the span. When the columns are linearly independent the solution
/// is the unique coordinate vector.
pub fn solve(columns: &[Vec<Scalar>], target: &[Scalar], mode: QMode) -> Option<Vec<Scalar>> {
    let k = columns.len();
    let m = target.len();
    for c in columns {
        assert_eq!(c.len(), m, "column length mismatch");
    }
    if k == 0 {
        return if target.iter().all(|t| t.is_zero()) { Some(vec![]) } else { None };
    }
    // Augmented matrix, rows indexed by coordinate, k+1 columns.
    let mut a: Vec<Vec<Scalar>> = (0..m)
        .map(|i| {
            let mut row: Vec<Scalar> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for col in 0..k {
        let pivot = (r..m).find(|&i| !a[i][col].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        let inv = a[r][col].inv();
        for j in col..=k {
            a[r][j] = a[r][j].mul(&inv);
        }
        for i in 0..m {
            if i != r && !a[i][col].is_zero() {
                let factor = a[i][col].clone();
                for j in col..=k {
                    let t = a[r][j].mul(&factor);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == m {
            break;
        }
    }
    // Inconsistent when a zeroed row has nonzero target entry.
    for row in a.iter().skip(r) {
        if !row[k].is_zero() {
            return None;
        }
    }
    let mut x = vec![Scalar::zero(mode); k];
    for (i, &col) in pivot_cols.iter().enumerate() {
        x[col] = a[i][k].clone();
    }
    // Free columns get zero; verify the candidate actually reproduces the
    // target (guards the underdetermined case).
    for i in 0..m {
        let mut acc = Scalar::zero(mode);
        for (j, c) in columns.iter().enumerate() {
            if !x[j].is_zero() {
                acc = acc.add(&x[j].mul(&c[i]));
            }
        }
        if acc != target[i] {
            return None;
        }
    }
    Some(x)
}
