#![allow(dead_code)]

/// Solves the normal equations by Gaussian elimination with partial pivoting
/// and returns (coefficients, diagonal of the inverse).
pub fn oracle_ols(y: &[f64], x: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = y.len();
    let p = x.len() + 1;
    let design = |i: usize, a: usize| if a == 0 { 1.0 } else { x[a - 1][i] };
    // augmented [X'X | X'y | I]
    let w = p + 1 + p;
    let mut m = vec![vec![0.0; w]; p];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().take(p).enumerate() {
            *cell = (0..n).map(|i| design(i, a) * design(i, b)).sum();
        }
        row[p] = (0..n).map(|i| design(i, a) * y[i]).sum();
        row[p + 1 + a] = 1.0;
    }
    for col in 0..p {
        let piv = (col..p).max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs())).unwrap();
        m.swap(col, piv);
        let d = m[col][col];
        for v in m[col].iter_mut() {
            *v /= d;
        }
        for r in 0..p {
            if r != col {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    ((0..p).map(|a| m[a][p]).collect(), (0..p).map(|a| m[a][p + 1 + a]).collect())
}
