use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::covariance::{build_covariance, CovarianceKind, CovarianceSpec};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
enum Form {
    Diagonal(Vec<f64>),
    /// a·I + b·J
    EqualCorr {
        a: f64,
        b: f64,
    },
    Dense(DMatrix<f64>),
}

/// Symmetric positive semidefinite square root Γ of Σ, so that Γ·Γ = Σ.
///
/// Samples are generated as Γx* + μ. Structured covariances keep a compact
/// form so that mixing a row costs O(p) instead of O(p²).
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMatrix {
    p: usize,
    form: Form,
    source: CovarianceSpec,
}

impl MixingMatrix {
    pub fn from_covariance(sigma: &CovarianceSpec) -> Result<Self> {
        let p = sigma.p();
        let form = match sigma.kind() {
            CovarianceKind::Identity => Form::Diagonal(vec![1.0; p]),
            CovarianceKind::Diagonal(s) => Form::Diagonal(s.iter().map(|v| v.sqrt()).collect()),
            CovarianceKind::EqualCorr { rho } => {
                // Σ = (1-ρ)(I - J/p) + (1+(p-1)ρ) J/p, two orthogonal projectors.
                let pf = p as f64;
                let a = (1.0 - rho).sqrt();
                let b = ((1.0 + (pf - 1.0) * rho).sqrt() - a) / pf;
                Form::EqualCorr { a, b }
            }
            CovarianceKind::Ar1 { .. } | CovarianceKind::Explicit(_) => {
                Form::Dense(symmetric_sqrt(build_covariance(sigma)))
            }
        };
        Ok(Self {
            p,
            form,
            source: sigma.clone(),
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn source(&self) -> &CovarianceSpec {
        &self.source
    }

    pub fn is_identity(&self) -> bool {
        matches!(&self.form, Form::Diagonal(d) if d.iter().all(|&v| v == 1.0))
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let p = self.p;
        match &self.form {
            Form::Diagonal(d) => DMatrix::from_diagonal(&DVector::from_column_slice(d)),
            Form::EqualCorr { a, b } => {
                DMatrix::from_fn(p, p, |i, j| if i == j { a + b } else { *b })
            }
            Form::Dense(g) => g.clone(),
        }
    }

    /// Γv.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        assert_eq!(v.len(), self.p, "vector length must equal p");
        match &self.form {
            Form::Diagonal(d) => {
                DVector::from_iterator(self.p, v.iter().zip(d).map(|(x, g)| x * g))
            }
            Form::EqualCorr { a, b } => {
                let shift = b * v.sum();
                v.map(|x| a * x + shift)
            }
            Form::Dense(g) => g * v,
        }
    }

    /// Replaces every row x of `rows` by Γx.
    pub fn apply_rows(&self, rows: &mut DMatrix<f64>) {
        assert_eq!(rows.ncols(), self.p, "row length must equal p");
        match &self.form {
            Form::Diagonal(d) => {
                if d.iter().all(|&v| v == 1.0) {
                    return;
                }
                for (mut col, g) in rows.column_iter_mut().zip(d) {
                    col *= *g;
                }
            }
            Form::EqualCorr { a, b } => {
                let sums: Vec<f64> = rows.row_iter().map(|r| r.sum()).collect();
                for mut col in rows.column_iter_mut() {
                    for (x, s) in col.iter_mut().zip(&sums) {
                        *x = a * *x + b * s;
                    }
                }
            }
            // Γ is symmetric, so XΓ' = XΓ.
            Form::Dense(g) => *rows = &*rows * g,
        }
    }

    /// 𝟏'Γ³δ.
    pub fn ones_cubed_dot(&self, delta: &DVector<f64>) -> f64 {
        self.apply(&self.apply(&self.apply(delta))).sum()
    }
}

/// V·diag(√λ)·V' from the symmetric eigendecomposition; tiny negative
/// eigenvalues from rounding are clamped to zero.
fn symmetric_sqrt(m: DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m);
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let v = &eig.eigenvectors;
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * roots[j]);
    let g = scaled * v.transpose();
    (&g + g.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frobenius_rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn check_square(sigma: &CovarianceSpec) {
        let g = MixingMatrix::from_covariance(sigma).unwrap();
        let m = g.matrix();
        assert_eq!(m, m.transpose());
        let s = build_covariance(sigma);
        assert!(frobenius_rel(&(&m * &m), &s) <= 1e-8, "{:?}", sigma.kind());
    }

    #[test]
    fn squares_reproduce_sigma() {
        for p in [1, 3, 40, 200] {
            check_square(&CovarianceSpec::identity(p).unwrap());
            check_square(&CovarianceSpec::equal_corr(p, 0.9).unwrap());
            check_square(&CovarianceSpec::ar1(p, 0.5).unwrap());
            check_square(&CovarianceSpec::ar1(p, -0.9).unwrap());
            check_square(
                &CovarianceSpec::diagonal((0..p).map(|l| 1.0 + l as f64).collect()).unwrap(),
            );
        }
    }

    #[test]
    fn row_application_matches_matrix() {
        let p = 6;
        let x = DMatrix::from_fn(4, p, |i, j| (i * p + j) as f64 * 0.1 - 1.0);
        for sigma in [
            CovarianceSpec::equal_corr(p, 0.4).unwrap(),
            CovarianceSpec::ar1(p, 0.7).unwrap(),
            CovarianceSpec::diagonal(vec![4.0; p]).unwrap(),
        ] {
            let g = MixingMatrix::from_covariance(&sigma).unwrap();
            let mut rows = x.clone();
            g.apply_rows(&mut rows);
            let expected = &x * g.matrix().transpose();
            assert!((rows - expected).amax() < 1e-12);
        }
    }

    #[test]
    fn cube_term_for_diagonal() {
        let sigma = CovarianceSpec::diagonal(vec![4.0, 9.0]).unwrap();
        let g = MixingMatrix::from_covariance(&sigma).unwrap();
        let delta = DVector::from_vec(vec![1.0, 2.0]);
        // σ^{3/2}: 8 and 27
        assert!((g.ones_cubed_dot(&delta) - (8.0 + 54.0)).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_explicit_square(values in proptest::collection::vec(-1.0f64..1.0, 64)) {
            let b = DMatrix::from_iterator(8, 8, values.into_iter());
            let s = &b * b.transpose() + DMatrix::identity(8, 8) * 0.1;
            let s = (&s + s.transpose()) * 0.5;
            let sigma = CovarianceSpec::explicit(s.clone()).unwrap();
            let g = MixingMatrix::from_covariance(&sigma).unwrap().matrix();
            prop_assert_eq!(&g, &g.transpose());
            prop_assert!(frobenius_rel(&(&g * &g), &s) <= 1e-8);
        }
    }
}
