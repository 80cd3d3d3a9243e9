use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::{Error, Result};

/// Matrices whose estimated condition number exceeds this are rejected.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub enum CovarianceKind {
    Identity,
    /// Unit diagonal, every off-diagonal entry equal to `rho`.
    EqualCorr {
        rho: f64,
    },
    /// Unit diagonal, entry `(l, l')` equal to `rho^|l - l'|`.
    Ar1 {
        rho: f64,
    },
    Diagonal(Vec<f64>),
    Explicit(DMatrix<f64>),
}

/// Symbolic description of a common covariance matrix Σ.
///
/// Construction validates the parameters, so every value of this type
/// describes a symmetric positive definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSpec {
    kind: CovarianceKind,
    p: usize,
}

fn check_dim(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::Domain("dimension p must be at least 1".into()));
    }
    Ok(())
}

impl CovarianceSpec {
    pub fn identity(p: usize) -> Result<Self> {
        check_dim(p)?;
        Ok(Self {
            kind: CovarianceKind::Identity,
            p,
        })
    }

    pub fn equal_corr(p: usize, rho: f64) -> Result<Self> {
        check_dim(p)?;
        let lower = if p > 1 {
            -1.0 / (p as f64 - 1.0)
        } else {
            f64::NEG_INFINITY
        };
        if !rho.is_finite() || rho <= lower || rho >= 1.0 {
            return Err(Error::Domain(format!(
                "equal-correlation rho = {rho} must lie in ({lower}, 1) for p = {p}"
            )));
        }
        Ok(Self {
            kind: CovarianceKind::EqualCorr { rho },
            p,
        })
    }

    pub fn ar1(p: usize, rho: f64) -> Result<Self> {
        check_dim(p)?;
        if !rho.is_finite() || rho.abs() >= 1.0 {
            return Err(Error::Domain(format!(
                "autoregressive rho = {rho} must lie in (-1, 1)"
            )));
        }
        Ok(Self {
            kind: CovarianceKind::Ar1 { rho },
            p,
        })
    }

    pub fn diagonal(sigmas: Vec<f64>) -> Result<Self> {
        check_dim(sigmas.len())?;
        if let Some((l, s)) = sigmas
            .iter()
            .enumerate()
            .find(|(_, s)| !(s.is_finite() && **s > 0.0))
        {
            return Err(Error::Domain(format!(
                "diagonal variance {l} is {s}; all variances must be positive"
            )));
        }
        Ok(Self {
            p: sigmas.len(),
            kind: CovarianceKind::Diagonal(sigmas),
        })
    }

    /// Accepts a symmetric positive definite matrix. Asymmetry up to a
    /// relative 1e-12 is removed by averaging with the transpose.
    pub fn explicit(matrix: DMatrix<f64>) -> Result<Self> {
        let p = matrix.nrows();
        check_dim(p)?;
        if matrix.ncols() != p {
            return Err(Error::Structure(format!(
                "covariance must be square, got {}x{}",
                p,
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Structure("covariance has non-finite entries".into()));
        }
        let scale = matrix.amax().max(f64::MIN_POSITIVE);
        for i in 0..p {
            for j in 0..i {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::Structure(format!(
                        "covariance is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let symmetric = (&matrix + matrix.transpose()) * 0.5;
        if symmetric.clone().cholesky().is_none() {
            return Err(Error::Structure(
                "covariance is not positive definite".into(),
            ));
        }
        Ok(Self {
            kind: CovarianceKind::Explicit(symmetric),
            p,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn kind(&self) -> &CovarianceKind {
        &self.kind
    }

    /// Σ = I, whatever the kind that produced it.
    pub fn is_identity(&self) -> bool {
        match &self.kind {
            CovarianceKind::Identity => true,
            CovarianceKind::EqualCorr { rho } | CovarianceKind::Ar1 { rho } => *rho == 0.0,
            CovarianceKind::Diagonal(s) => s.iter().all(|&v| v == 1.0),
            CovarianceKind::Explicit(m) => *m == DMatrix::identity(self.p, self.p),
        }
    }

    /// Σv without materializing Σ for the structured kinds.
    pub fn mul_vec(&self, v: &DVector<f64>) -> DVector<f64> {
        assert_eq!(v.len(), self.p, "vector length must equal p");
        match &self.kind {
            CovarianceKind::Identity => v.clone(),
            CovarianceKind::EqualCorr { rho } => {
                let total = v.sum();
                v.map(|x| (1.0 - rho) * x + rho * total)
            }
            CovarianceKind::Ar1 { .. } | CovarianceKind::Explicit(_) => build_covariance(self) * v,
            CovarianceKind::Diagonal(s) => {
                DVector::from_iterator(self.p, v.iter().zip(s).map(|(x, s)| x * s))
            }
        }
    }

    /// Σ⁻¹v using the closed forms where they exist.
    pub fn solve(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        if v.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                found: v.len(),
            });
        }
        self.check_conditioning()?;
        let p = self.p;
        Ok(match &self.kind {
            CovarianceKind::Identity => v.clone(),
            CovarianceKind::EqualCorr { rho } => {
                let c = rho / (1.0 + (p as f64 - 1.0) * rho);
                let total = v.sum();
                v.map(|x| (x - c * total) / (1.0 - rho))
            }
            CovarianceKind::Ar1 { rho } => {
                if p == 1 {
                    return Ok(v.clone());
                }
                let r2 = rho * rho;
                let scale = 1.0 / (1.0 - r2);
                DVector::from_fn(p, |l, _| {
                    let d = if l == 0 || l == p - 1 { 1.0 } else { 1.0 + r2 };
                    let mut acc = d * v[l];
                    if l > 0 {
                        acc -= rho * v[l - 1];
                    }
                    if l + 1 < p {
                        acc -= rho * v[l + 1];
                    }
                    acc * scale
                })
            }
            CovarianceKind::Diagonal(s) => {
                DVector::from_iterator(p, v.iter().zip(s).map(|(x, s)| x / s))
            }
            CovarianceKind::Explicit(m) => {
                let chol = m.clone().cholesky().ok_or_else(|| {
                    Error::Singularity("explicit covariance failed to factorize".into())
                })?;
                chol.solve(v)
            }
        })
    }

    /// Ratio of extreme eigenvalues, in closed form for the structured kinds.
    pub fn condition_estimate(&self) -> f64 {
        let p = self.p as f64;
        match &self.kind {
            CovarianceKind::Identity => 1.0,
            CovarianceKind::EqualCorr { rho } => {
                let big = 1.0 + (p - 1.0) * rho;
                let small = 1.0 - rho;
                big.max(small) / big.min(small)
            }
            CovarianceKind::Ar1 { rho } => {
                // Spectrum of the AR(1) correlation lies within the spectral
                // density range [(1-|ρ|)/(1+|ρ|), (1+|ρ|)/(1-|ρ|)].
                let r = rho.abs();
                ((1.0 + r) / (1.0 - r)).powi(2)
            }
            CovarianceKind::Diagonal(s) => {
                let max = s.iter().cloned().fold(f64::MIN, f64::max);
                let min = s.iter().cloned().fold(f64::MAX, f64::min);
                max / min
            }
            CovarianceKind::Explicit(m) => {
                let eig = SymmetricEigen::new(m.clone()).eigenvalues;
                let max = eig.max();
                let min = eig.min();
                if min <= 0.0 {
                    f64::INFINITY
                } else {
                    max / min
                }
            }
        }
    }

    fn check_conditioning(&self) -> Result<()> {
        let estimate = self.condition_estimate();
        if !(estimate <= CONDITION_LIMIT) {
            return Err(Error::Conditioning {
                estimate,
                limit: CONDITION_LIMIT,
                context: "covariance matrix".into(),
            });
        }
        Ok(())
    }

    /// tr(Σ²).
    pub fn trace_of_square(&self) -> f64 {
        let p = self.p;
        match &self.kind {
            CovarianceKind::Identity => p as f64,
            CovarianceKind::EqualCorr { rho } => p as f64 + (p * (p - 1)) as f64 * rho * rho,
            CovarianceKind::Ar1 { rho } => {
                let r2 = rho * rho;
                let mut total = p as f64;
                let mut power = 1.0;
                for k in 1..p {
                    power *= r2;
                    total += 2.0 * (p - k) as f64 * power;
                }
                total
            }
            CovarianceKind::Diagonal(s) => s.iter().map(|v| v * v).sum(),
            CovarianceKind::Explicit(m) => m.iter().map(|v| v * v).sum(),
        }
    }
}

/// Materializes Σ. The result is exactly symmetric.
pub fn build_covariance(spec: &CovarianceSpec) -> DMatrix<f64> {
    let p = spec.p;
    match &spec.kind {
        CovarianceKind::Identity => DMatrix::identity(p, p),
        CovarianceKind::EqualCorr { rho } => {
            DMatrix::from_fn(p, p, |i, j| if i == j { 1.0 } else { *rho })
        }
        CovarianceKind::Ar1 { rho } => {
            let powers: Vec<f64> = (0..p).map(|k| rho.powi(k as i32)).collect();
            DMatrix::from_fn(p, p, |i, j| powers[i.abs_diff(j)])
        }
        CovarianceKind::Diagonal(s) => DMatrix::from_diagonal(&DVector::from_column_slice(s)),
        CovarianceKind::Explicit(m) => m.clone(),
    }
}

/// Σ⁻¹, in closed form for every kind except `Explicit`.
pub fn inverse_covariance(spec: &CovarianceSpec) -> Result<DMatrix<f64>> {
    spec.check_conditioning()?;
    let p = spec.p;
    Ok(match &spec.kind {
        CovarianceKind::Identity => DMatrix::identity(p, p),
        CovarianceKind::EqualCorr { rho } => {
            // Sherman-Morrison: (1/(1-ρ)) [I - ρ/(1+(p-1)ρ) J]
            let c = rho / (1.0 + (p as f64 - 1.0) * rho);
            let s = 1.0 / (1.0 - rho);
            DMatrix::from_fn(p, p, |i, j| if i == j { s * (1.0 - c) } else { -s * c })
        }
        CovarianceKind::Ar1 { rho } => {
            if p == 1 {
                return Ok(DMatrix::identity(1, 1));
            }
            let s = 1.0 / (1.0 - rho * rho);
            DMatrix::from_fn(p, p, |i, j| {
                if i == j {
                    if i == 0 || i == p - 1 {
                        s
                    } else {
                        s * (1.0 + rho * rho)
                    }
                } else if i.abs_diff(j) == 1 {
                    -s * rho
                } else {
                    0.0
                }
            })
        }
        CovarianceKind::Diagonal(s) => {
            DMatrix::from_diagonal(&DVector::from_iterator(p, s.iter().map(|v| 1.0 / v)))
        }
        CovarianceKind::Explicit(m) => {
            let chol = m.clone().cholesky().ok_or_else(|| {
                Error::Singularity("explicit covariance failed to factorize".into())
            })?;
            let inv = chol.inverse();
            (&inv + inv.transpose()) * 0.5
        }
    })
}

/// β² such that uniform draws on (e/2, 3e/2) with e = Δ_L/β have expected
/// Mahalanobis norm equal to Δ_L².
pub fn beta_squared(spec: &CovarianceSpec) -> Result<f64> {
    let p = spec.p;
    if p < 2 {
        return Err(Error::Domain("beta calibration needs p >= 2".into()));
    }
    let pf = p as f64;
    let value = match &spec.kind {
        CovarianceKind::EqualCorr { rho } => {
            let rho = *rho;
            pf * (pf * rho - 14.0 * rho + 13.0) / (12.0 * (1.0 - rho + pf * rho) * (1.0 - rho))
        }
        CovarianceKind::Ar1 { rho } => {
            let rho = *rho;
            (pf * (24.0 * rho - 13.0 * rho * rho - 13.0) - 24.0 * rho + 26.0 * rho * rho)
                / (12.0 * (rho * rho - 1.0))
        }
        _ if spec.is_identity() => 13.0 * pf / 12.0,
        CovarianceKind::Diagonal(_) => {
            return Err(Error::UnsupportedCalibration(
                "a diagonal covariance with non-unit variances".into(),
            ))
        }
        _ => {
            return Err(Error::UnsupportedCalibration(
                "an explicit covariance matrix".into(),
            ))
        }
    };
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::Domain(format!("beta^2 evaluated to {value}")));
    }
    Ok(value)
}

/// Δ² = δ'Σ⁻¹δ.
pub fn mahalanobis(delta: &DVector<f64>, sigma: &CovarianceSpec) -> Result<f64> {
    let solved = sigma.solve(delta)?;
    Ok(delta.dot(&solved).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn max_rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).amax() / b.amax()
    }

    #[test]
    fn identity_is_identity() {
        let s = CovarianceSpec::identity(3).unwrap();
        assert_eq!(build_covariance(&s), DMatrix::identity(3, 3));
        assert_eq!(
            inverse_covariance(&CovarianceSpec::identity(5).unwrap()).unwrap(),
            DMatrix::identity(5, 5)
        );
    }

    #[test]
    fn equal_corr_two_by_two() {
        let s = CovarianceSpec::equal_corr(2, 0.5).unwrap();
        assert_eq!(
            build_covariance(&s),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0])
        );
        let inv = inverse_covariance(&s).unwrap();
        let expected =
            DMatrix::from_row_slice(2, 2, &[4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0]);
        assert!(max_rel_err(&inv, &expected) < 1e-14);
    }

    #[test]
    fn ar1_three_by_three() {
        let s = CovarianceSpec::ar1(3, 0.5).unwrap();
        let expected =
            DMatrix::from_row_slice(3, 3, &[1.0, 0.5, 0.25, 0.5, 1.0, 0.5, 0.25, 0.5, 1.0]);
        assert_eq!(build_covariance(&s), expected);
    }

    #[test]
    fn parameter_ranges_enforced() {
        assert!(CovarianceSpec::equal_corr(5, -0.25).is_err());
        assert!(CovarianceSpec::equal_corr(5, -0.2499).is_ok());
        assert!(CovarianceSpec::equal_corr(5, 1.0).is_err());
        assert!(CovarianceSpec::ar1(5, -1.0).is_err());
        assert!(CovarianceSpec::diagonal(vec![1.0, 0.0]).is_err());
        assert!(CovarianceSpec::identity(0).is_err());
    }

    #[test]
    fn explicit_rejects_indefinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            CovarianceSpec::explicit(m),
            Err(Error::Structure(_))
        ));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.2, 1.0]);
        assert!(matches!(
            CovarianceSpec::explicit(asym),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn ill_conditioned_inverse_rejected() {
        let s = CovarianceSpec::diagonal(vec![1.0, 1e-13]).unwrap();
        assert!(matches!(
            inverse_covariance(&s),
            Err(Error::Conditioning { .. })
        ));
        let delta = DVector::from_vec(vec![1.0, 1.0]);
        assert!(mahalanobis(&delta, &s).is_err());
    }

    #[test]
    fn closed_form_inverses_match_numeric() {
        for p in [1usize, 2, 7, 50, 200] {
            let specs = [
                CovarianceSpec::equal_corr(p, 0.3).unwrap(),
                CovarianceSpec::equal_corr(p, -0.5 / (p as f64)).unwrap(),
                CovarianceSpec::ar1(p, 0.8).unwrap(),
                CovarianceSpec::ar1(p, -0.4).unwrap(),
                CovarianceSpec::diagonal((0..p).map(|l| 0.5 + l as f64 / p as f64).collect())
                    .unwrap(),
                CovarianceSpec::identity(p).unwrap(),
            ];
            for s in &specs {
                let closed = inverse_covariance(s).unwrap();
                let numeric = build_covariance(s).try_inverse().unwrap();
                assert!(
                    max_rel_err(&closed, &numeric) < 1e-10,
                    "{:?} p={p}",
                    s.kind()
                );
                let product = &closed * build_covariance(s);
                assert!((product - DMatrix::identity(p, p)).amax() < 1e-10);
            }
        }
    }

    #[test]
    fn solve_and_mul_agree_with_dense() {
        let p = 17;
        let v = DVector::from_fn(p, |i, _| (i as f64).sin() + 0.3);
        for s in [
            CovarianceSpec::equal_corr(p, 0.6).unwrap(),
            CovarianceSpec::ar1(p, 0.7).unwrap(),
            CovarianceSpec::diagonal(vec![2.0; p]).unwrap(),
        ] {
            let dense = build_covariance(&s);
            assert_relative_eq!(s.mul_vec(&v), &dense * &v, max_relative = 1e-12);
            let via_inv = inverse_covariance(&s).unwrap() * &v;
            assert_relative_eq!(s.solve(&v).unwrap(), via_inv, max_relative = 1e-10);
            let tr = (&dense * &dense).trace();
            assert_relative_eq!(s.trace_of_square(), tr, max_relative = 1e-12);
        }
    }

    #[test]
    fn beta_squared_at_rho_zero() {
        let p = 125;
        let eq = beta_squared(&CovarianceSpec::equal_corr(p, 0.0).unwrap()).unwrap();
        let ar = beta_squared(&CovarianceSpec::ar1(p, 0.0).unwrap()).unwrap();
        let id = beta_squared(&CovarianceSpec::identity(p).unwrap()).unwrap();
        let expected = 13.0 * 125.0 / 12.0;
        assert!((eq - expected).abs() < 1e-12);
        assert!((ar - expected).abs() < 1e-12);
        assert!((id - expected).abs() < 1e-12);
        assert!((expected - 135.4167).abs() < 1e-4);
    }

    #[test]
    fn beta_squared_unsupported_kinds() {
        let d = CovarianceSpec::diagonal(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            beta_squared(&d),
            Err(Error::UnsupportedCalibration(_))
        ));
        let unit = CovarianceSpec::diagonal(vec![1.0; 3]).unwrap();
        assert!(beta_squared(&unit).is_ok());
    }

    #[test]
    fn mahalanobis_examples() {
        let id = CovarianceSpec::identity(20).unwrap();
        assert_eq!(mahalanobis(&DVector::zeros(20), &id).unwrap(), 0.0);
        let delta = DVector::from_fn(20, |i, _| if i < 10 { 1.0 } else { 0.0 });
        assert_eq!(mahalanobis(&delta, &id).unwrap(), 10.0);
        let eq = CovarianceSpec::equal_corr(2, 0.5).unwrap();
        let d = mahalanobis(&DVector::from_vec(vec![1.0, 1.0]), &eq).unwrap();
        assert_relative_eq!(d, 4.0 / 3.0, max_relative = 1e-14);
    }

    fn random_spd(values: &[f64], p: usize) -> DMatrix<f64> {
        let b = DMatrix::from_iterator(p, p, values.iter().cloned());
        &b * b.transpose() + DMatrix::identity(p, p) * 0.5
    }

    proptest! {
        #[test]
        fn build_is_exactly_symmetric(p in 1usize..40, rho in -0.95f64..0.95) {
            let s = CovarianceSpec::ar1(p, rho).unwrap();
            let m = build_covariance(&s);
            prop_assert_eq!(&m, &m.transpose());
            let lo = if p > 1 { -1.0 / (p as f64 - 1.0) } else { -0.95 };
            let r = lo + (rho + 0.95) / 1.9 * (0.95 - lo);
            if let Ok(e) = CovarianceSpec::equal_corr(p, r) {
                let m = build_covariance(&e);
                prop_assert_eq!(&m, &m.transpose());
            }
        }

        #[test]
        fn mahalanobis_affine_invariant(
            sv in proptest::collection::vec(-1.0f64..1.0, 25),
            tv in proptest::collection::vec(-1.0f64..1.0, 25),
            dv in proptest::collection::vec(-2.0f64..2.0, 5),
        ) {
            let p = 5;
            let sigma = random_spd(&sv, p);
            let t = DMatrix::from_iterator(p, p, tv.iter().cloned()) + DMatrix::identity(p, p) * 2.0;
            prop_assume!(t.determinant().abs() > 1e-3);
            let delta = DVector::from_vec(dv);
            let base = mahalanobis(&delta, &CovarianceSpec::explicit(sigma.clone()).unwrap()).unwrap();
            let ts = &t * &sigma * t.transpose();
            let ts = (&ts + ts.transpose()) * 0.5;
            let moved = mahalanobis(&(&t * &delta), &CovarianceSpec::explicit(ts).unwrap()).unwrap();
            prop_assert!((base - moved).abs() <= 1e-8 * base.max(1.0));
        }
    }
}
