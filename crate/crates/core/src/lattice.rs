//! Integer kernels of small integer matrices.

/// A Z-basis of `{z ∈ Z^n : Σ_j z_j·columns[j] = 0}`.
///
/// Column reduction with a unimodular transform: the columns of the transform
/// that end up multiplying zero columns span the integer kernel.
pub fn integer_kernel_basis(rows: usize, columns: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = columns.len();
    let mut m: Vec<Vec<i128>> = columns
        .iter()
        .map(|c| c.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| i128::from(i == j)).collect())
        .collect();
    let mut pivot = 0;
    for row in 0..rows {
        if pivot == n {
            break;
        }
        loop {
            // smallest nonzero |entry| in this row among columns pivot..
            let best = (pivot..n)
                .filter(|&j| m[j][row] != 0)
                .min_by_key(|&j| m[j][row].abs());
            let Some(b) = best else { break };
            m.swap(pivot, b);
            u.swap(pivot, b);
            let p = m[pivot][row];
            let mut done = true;
            for j in pivot + 1..n {
                let q = m[j][row] / p;
                if q != 0 {
                    let (head, tail) = m.split_at_mut(j);
                    for (x, y) in tail[0].iter_mut().zip(&head[pivot]).take(rows) {
                        *x -= q * y;
                    }
                    let (head, tail) = u.split_at_mut(j);
                    for (x, y) in tail[0].iter_mut().zip(&head[pivot]).take(n) {
                        *x -= q * y;
                    }
                }
                if m[j][row] != 0 {
                    done = false;
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
    }
    u[pivot..]
        .iter()
        .map(|c| c.iter().map(|&x| i64::try_from(x).expect("kernel entry fits in i64")).collect())
        .collect()
}
