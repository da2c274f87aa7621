//! Cyclic Jacobi eigen-solver for small dense symmetric matrices.
//!
//! Reference solver for checking the production eigen-routines. It shares no
//! code with the library and computes the whole spectrum.

/// Eigenvalues in ascending order and matching unit eigenvectors
/// (`vectors[k]` belongs to `values[k]`).
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

pub fn jacobi_eigen(rows: &[Vec<f64>]) -> Eigen {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    for i in 0..n {
        for j in 0..i {
            assert!((a[i][j] - a[j][i]).abs() < 1e-14, "matrix must be symmetric");
        }
    }
    // columns of v are eigenvectors
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A ← Jᵀ A J
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x][x].total_cmp(&a[y][y]));
    Eigen {
        values: order.iter().map(|&k| a[k][k]).collect(),
        vectors: order
            .iter()
            .map(|&k| (0..n).map(|i| v[i][k]).collect())
            .collect(),
    }
}

/// Dominant eigenpair with the eigenvector signed to have a nonnegative sum.
pub fn dominant(rows: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let e = jacobi_eigen(rows);
    let k = e.values.len() - 1;
    let mut vec = e.vectors[k].clone();
    if vec.iter().sum::<f64>() < 0.0 {
        vec.iter_mut().for_each(|x| *x = -*x);
    }
    (e.values[k], vec)
}
