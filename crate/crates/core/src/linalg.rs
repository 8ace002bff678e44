//! Dense symmetric eigensolver and the pseudoinverse built on it.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative eigenvalue cutoff used by [`pseudoinverse`].
pub const PINV_RCOND: f64 = 1e-10;

const SYMMETRY_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    /// Column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    /// `Q diag(f(λ)) Qᵀ`.
    pub fn apply_spectral<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<f64> {
        let q = &self.eigenvectors;
        let mut scaled = q.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let fk = f(lam);
            scaled.column_mut(k).scale_mut(fk);
        }
        &scaled * q.transpose()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.apply_spectral(|l| l)
    }
}

fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NumericalInput(format!(
            "matrix is {}x{}, expected square",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalInput("matrix has non-finite entries".into()));
    }
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let (x, y) = (a[(i, j)], a[(j, i)]);
            if (x - y).abs() > SYMMETRY_TOL * x.abs().max(y.abs()).max(1.0) {
                return Err(Error::NumericalInput(format!(
                    "matrix is not symmetric at ({i}, {j}): {x} vs {y}"
                )));
            }
        }
    }
    Ok(())
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> Result<SpectralDecomposition> {
    check_symmetric(a)?;
    let n = a.nrows();
    let mut m = (a + a.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = m.norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>();
        let off = (2.0 * off).sqrt();
        if off <= 1e-14 * norm || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let g = 100.0 * apq.abs();
                if m[(p, p)].abs() + g == m[(p, p)].abs() && m[(q, q)].abs() + g == m[(q, q)].abs() {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                m[(p, p)] -= t * apq;
                m[(q, q)] += t * apq;
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let g = m[(k, p)];
                        let h = m[(k, q)];
                        let kp = c * g - s * h;
                        let kq = s * g + c * h;
                        m[(k, p)] = kp;
                        m[(p, k)] = kp;
                        m[(k, q)] = kq;
                        m[(q, k)] = kq;
                    }
                    let g = v[(k, p)];
                    let h = v[(k, q)];
                    v[(k, p)] = c * g - s * h;
                    v[(k, q)] = s * g + c * h;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| m[(i, i)]));
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Result<DVector<f64>> {
    symmetric_eigen(a).map(|d| d.eigenvalues)
}

/// Moore–Penrose pseudoinverse of a symmetric matrix.
///
/// Eigenvalues with `|λ| <= PINV_RCOND * max|λ|` are treated as zero.
pub fn pseudoinverse(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let decomp = symmetric_eigen(a)?;
    let max_abs = decomp.eigenvalues.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    let cutoff = PINV_RCOND * max_abs;
    let inv = decomp.apply_spectral(|l| if l.abs() > cutoff && l != 0.0 { 1.0 / l } else { 0.0 });
    Ok((&inv + inv.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn random_symmetric(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        (&m + m.transpose()) * 0.5
    }

    fn residual_ok(a: &DMatrix<f64>, d: &SpectralDecomposition) {
        let res = (a - d.reconstruct()).norm();
        assert!(res <= 1e-8 * a.norm().max(1.0), "residual {res}");
        let q = &d.eigenvectors;
        let gram = q.transpose() * q - DMatrix::<f64>::identity(q.nrows(), q.nrows());
        assert!(gram.amax() <= 1e-8, "orthogonality {}", gram.amax());
        for w in d.eigenvalues.as_slice().windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn identity_spectrum() {
        let d = symmetric_eigen(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(d.eigenvalues.as_slice(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_sorted() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![5.0, -2.0, 0.0]));
        let d = symmetric_eigen(&a).unwrap();
        assert_eq!(d.eigenvalues.as_slice(), &[-2.0, 0.0, 5.0]);
    }

    #[test]
    fn complete_graph_laplacian_spectrum() {
        let l = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, -1.0, -1.0, 2.0, -1.0, -1.0, -1.0, 2.0]);
        let d = symmetric_eigen(&l).unwrap();
        assert_abs_diff_eq!(d.eigenvalues[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.eigenvalues[1], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.eigenvalues[2], 3.0, epsilon = 1e-12);
        residual_ok(&l, &d);
    }

    #[test]
    fn random_matrices_meet_residual_contract() {
        for (n, seed) in [(1, 0), (2, 1), (7, 2), (30, 3), (50, 4)] {
            let a = random_symmetric(n, seed);
            let d = symmetric_eigen(&a).unwrap();
            residual_ok(&a, &d);
            let trace = a.trace();
            assert!((d.eigenvalues.sum() - trace).abs() <= 1e-8 * trace.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_bad_input() {
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(symmetric_eigen(&asym), Err(Error::NumericalInput(_))));
        let nan = DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, f64::NAN, 1.0]);
        assert!(matches!(symmetric_eigen(&nan), Err(Error::NumericalInput(_))));
        let rect = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(symmetric_eigen(&rect), Err(Error::NumericalInput(_))));
    }

    #[test]
    fn pseudoinverse_examples() {
        let id = DMatrix::<f64>::identity(3, 3);
        assert_abs_diff_eq!(pseudoinverse(&id).unwrap(), id, epsilon = 1e-14);
        let z = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(pseudoinverse(&z).unwrap(), z);
        // single-edge Laplacian: eigenvalue 2 on (1,-1)/sqrt(2)
        let l = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let expected = DMatrix::from_row_slice(2, 2, &[0.25, -0.25, -0.25, 0.25]);
        assert_abs_diff_eq!(pseudoinverse(&l).unwrap(), expected, epsilon = 1e-14);
    }

    #[test]
    fn pseudoinverse_moore_penrose_identity() {
        let b = random_symmetric(12, 9);
        // rank-deficient PSD matrix
        let cols = b.columns(0, 5).into_owned();
        let a = &cols * cols.transpose();
        let p = pseudoinverse(&a).unwrap();
        let err = (&a * &p * &a - &a).norm();
        assert!(err <= 1e-7 * a.norm());
        assert_abs_diff_eq!(p.clone(), p.transpose(), epsilon = 0.0);
    }
}
