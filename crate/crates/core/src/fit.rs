//! Estimation: implicit, non-response, rotational and standard least squares,
//! alias matrices, closed-form bivariate solutions, univariate non-response
//! analysis and the α↔β conversion.

use crate::data::{Dataset, MultiDataset};
use crate::error::{Error, Result};
use crate::linalg::{cramer_2x2, solve, solve_normal, Matrix, SINGULAR_RTOL};
use crate::model::{design_matrix, evaluate_term, Lhs, ModelSpec};
use crate::scalar::Scalar;
use crate::term::Term;

/// Which coefficient-of-determination formula a fit reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum R2Formula {
    /// `(b'X'Y - n ybar^2) / (Y'Y - n ybar^2)`.
    Centered,
    /// `a'W'1 / n`, unity on the left.
    NonResponse,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitKind {
    NonResponse,
    Rotation { pivot: usize },
    /// Observed `y` regressed on `x` terms.
    Response,
    /// Response column regressed on explanatory columns.
    Standard,
}

/// Output of every least-squares fitter.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<T> {
    pub kind: FitKind,
    /// `None` for [`FitKind::Standard`], whose columns are named rather than terms.
    pub spec: Option<ModelSpec>,
    pub lhs_label: String,
    /// Design column labels, `"1"` for the intercept.
    pub column_labels: Vec<String>,
    pub intercept: bool,
    /// Coefficients in design-column order (intercept first when present).
    pub coeffs: Vec<T>,
    pub target: Vec<T>,
    pub fitted: Vec<T>,
    /// `target - W coeffs`.
    pub residuals: Vec<T>,
    pub r2_formula: R2Formula,
    pub r_squared: T,
    /// `n` for non-response fits, `Y'Y - n ybar^2` otherwise.
    pub sst: T,
    /// `a'W'1` for non-response fits, `b'X'Y - n ybar^2` otherwise.
    pub ssr: T,
    /// Sum of squared residuals.
    pub sse: T,
    /// `sse / (n - m)`; NaN when `n == m`.
    pub sigma2_hat: T,
    pub cov: Matrix<T>,
    pub std_errors: Vec<T>,
    pub t_stats: Vec<T>,
    /// Overall F for intercept models with at least one slope.
    pub f_stat: Option<T>,
    pub n: usize,
}

impl<T: Scalar> FitResult<T> {
    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, label: &str) -> Option<T> {
        self.column_labels.iter().position(|l| l == label).map(|i| self.coeffs[i])
    }

    pub fn is_exact(&self) -> bool {
        self.sse == T::zero()
    }
}

struct Layout {
    kind: FitKind,
    spec: Option<ModelSpec>,
    lhs_label: String,
    column_labels: Vec<String>,
    intercept: bool,
}

fn fit_design<T: Scalar>(w: &Matrix<T>, target: Vec<T>, layout: Layout) -> Result<FitResult<T>> {
    let (n, m) = (w.rows(), w.cols());
    let r2_formula = match layout.kind {
        FitKind::NonResponse => R2Formula::NonResponse,
        _ => R2Formula::Centered,
    };
    if r2_formula == R2Formula::Centered && target.iter().all(|&v| v == target[0]) {
        return Err(Error::ZeroVariance);
    }
    let sol = solve_normal(w, &target)?;
    let coeffs = sol.coeffs;
    let fitted = w.mul_vec(&coeffs);
    let residuals: Vec<T> = target.iter().zip(&fitted).map(|(&t, &f)| t - f).collect();
    let sse: T = residuals.iter().map(|&r| r * r).sum();

    let nf = T::from_usize(n).unwrap();
    let explained: T = coeffs.iter().zip(w.t_mul_vec(&target)).map(|(&c, b)| c * b).sum();
    let (sst, ssr) = match r2_formula {
        R2Formula::NonResponse => (nf, explained),
        R2Formula::Centered => {
            let tt: T = target.iter().map(|&v| v * v).sum();
            let mean = target.iter().copied().sum::<T>() / nf;
            let correction = nf * mean * mean;
            (tt - correction, explained - correction)
        }
    };
    if !(sst > T::zero()) {
        return Err(Error::ZeroVariance);
    }
    let r_squared = ssr / sst;

    let sigma2_hat = if n > m {
        sse / T::from_usize(n - m).unwrap()
    } else {
        T::nan()
    };
    let cov = sol.gram_inverse.scale(sigma2_hat);
    let std_errors: Vec<T> = cov.diagonal().into_iter().map(T::sqrt).collect();
    let t_stats = coeffs.iter().zip(&std_errors).map(|(&c, &s)| c / s).collect();
    let f_stat = (layout.intercept && m > 1 && r2_formula == R2Formula::Centered)
        .then(|| (ssr / T::from_usize(m - 1).unwrap()) / sigma2_hat);

    Ok(FitResult {
        kind: layout.kind,
        spec: layout.spec,
        lhs_label: layout.lhs_label,
        column_labels: layout.column_labels,
        intercept: layout.intercept,
        coeffs,
        target,
        fitted,
        residuals,
        r2_formula,
        r_squared,
        sst,
        ssr,
        sse,
        sigma2_hat,
        cov,
        std_errors,
        t_stats,
        f_stat,
        n,
    })
}

/// Fits `g = h(θ)` for any additive [`ModelSpec`] by least squares on its design.
pub fn fit_implicit<T: Scalar>(d: &Dataset<T>, spec: &ModelSpec) -> Result<FitResult<T>> {
    let (w, target) = design_matrix(d, spec)?;
    let kind = match spec.lhs() {
        Lhs::Unity => FitKind::NonResponse,
        Lhs::Term(pivot) => FitKind::Rotation { pivot },
        Lhs::Response => FitKind::Response,
    };
    let layout = Layout {
        kind,
        spec: Some(spec.clone()),
        lhs_label: spec.lhs_label(),
        column_labels: spec.column_labels(),
        intercept: spec.intercept(),
    };
    fit_design(&w, target, layout)
}

/// Non-response analysis: `1 = Σ α_k T_k`, no intercept.
pub fn fit_nonresponse<T: Scalar>(d: &Dataset<T>, terms: &[Term]) -> Result<FitResult<T>> {
    fit_implicit(d, &ModelSpec::nonresponse(terms.to_vec())?)
}

/// Rotational analysis for one pivot: `T_pivot = α_0 + Σ_{k≠pivot} α_k T_k`.
pub fn fit_rotation<T: Scalar>(d: &Dataset<T>, terms: &[Term], pivot: usize) -> Result<FitResult<T>> {
    fit_implicit(d, &ModelSpec::rotation(terms.to_vec(), pivot)?)
}

/// Every rotation of `terms`, in term order. Per-pivot failures (singular
/// designs, constant pivots) are returned in their slot; only undefined term
/// evaluations and too-small samples abort the whole run.
pub fn fit_all_rotations<T: Scalar>(
    d: &Dataset<T>,
    terms: &[Term],
) -> Result<Vec<Result<FitResult<T>>>> {
    // Validate the term list once; rotation specs below cannot fail.
    ModelSpec::rotation(terms.to_vec(), 0)?;
    for term in terms {
        evaluate_term(d, term)?;
    }
    if d.n() < terms.len() {
        return Err(Error::Underdetermined { rows: d.n(), cols: terms.len() });
    }
    Ok((0..terms.len()).map(|pivot| fit_rotation(d, terms, pivot)).collect())
}

/// Alias matrix `(X1'X1)^-1 X1'X2`.
pub fn alias_matrix<T: Scalar>(x1: &Matrix<T>, x2: &Matrix<T>) -> Result<Matrix<T>> {
    assert_eq!(x1.rows(), x2.rows(), "alias blocks need the same row count");
    if x1.rows() < x1.cols() {
        return Err(Error::Underdetermined { rows: x1.rows(), cols: x1.cols() });
    }
    solve(&x1.gram(), &x1.t_mul(x2))
}

/// Ordinary multiple regression of the response on `[1 | explanatory]`.
pub fn fit_standard<T: Scalar>(d: &MultiDataset<T>) -> Result<FitResult<T>> {
    let n = d.n();
    let mut columns = vec![vec![T::one(); n]];
    columns.extend(d.explanatory().iter().cloned());
    if n < columns.len() {
        return Err(Error::Underdetermined { rows: n, cols: columns.len() });
    }
    let mut labels = vec!["1".to_string()];
    labels.extend(d.column_names().iter().cloned());
    let layout = Layout {
        kind: FitKind::Standard,
        spec: None,
        lhs_label: "y".into(),
        column_labels: labels,
        intercept: true,
    };
    fit_design(&Matrix::from_columns(&columns), d.response().to_vec(), layout)
}

fn sums<T: Scalar>(x: &[T], y: &[T]) -> (T, T, T, T, T) {
    let mut s = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        s.0 = s.0 + a;
        s.1 = s.1 + b;
        s.2 = s.2 + a * a;
        s.3 = s.3 + a * b;
        s.4 = s.4 + b * b;
    }
    s
}

/// Simple linear regression `y = b0 + b1 x` by the closed-form ratio.
pub fn slr_closed<T: Scalar>(x: &[T], y: &[T]) -> Result<(T, T)> {
    assert_eq!(x.len(), y.len(), "x and y lengths differ");
    let n = x.len();
    if n < 2 {
        return Err(Error::Underdetermined { rows: n, cols: 2 });
    }
    let nf = T::from_usize(n).unwrap();
    let (sx, sy, sxx, sxy, _) = sums(x, y);
    let delta = nf * sxx - sx * sx;
    if !(delta.abs() > T::lit(SINGULAR_RTOL) * nf * sxx) {
        return Err(Error::SingularSystem { pivot: 1 });
    }
    let b1 = (nf * sxy - sx * sy) / delta;
    let b0 = sy / nf - b1 * sx / nf;
    Ok((b0, b1))
}

/// Two-term non-response fit `1 = a1 x + a2 y` by Cramer's rule on the 2x2 Gram system.
pub fn nra2_closed<T: Scalar>(x: &[T], y: &[T]) -> Result<(T, T)> {
    assert_eq!(x.len(), y.len(), "x and y lengths differ");
    let (sx, sy, sxx, sxy, syy) = sums(x, y);
    let [a1, a2] = cramer_2x2([[sxx, sxy], [sxy, syy]], [sx, sy])?;
    Ok((a1, a2))
}

/// Univariate non-response model `1 = α y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnivariateNra<T> {
    /// `Σy / Σy²`.
    pub alpha: T,
    /// Self-weighting mean `Σy² / Σy`; `None` when `Σy = 0`.
    pub mu_hat: Option<T>,
    /// `(Σy)² / (n Σy²)`.
    pub r2: T,
}

impl<T: Scalar> UnivariateNra<T> {
    pub fn mean(&self) -> Result<T> {
        self.mu_hat.ok_or(Error::MeanUndefined)
    }
}

pub fn univariate_nra<T: Scalar>(y: &[T]) -> Result<UnivariateNra<T>> {
    if y.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let s: T = y.iter().copied().sum();
    let s2: T = y.iter().map(|&v| v * v).sum();
    if s2 == T::zero() {
        return Err(Error::ZeroVariance);
    }
    let nf = T::from_usize(y.len()).unwrap();
    Ok(UnivariateNra {
        alpha: s / s2,
        mu_hat: (s != T::zero()).then(|| s2 / s),
        r2: s * s / (nf * s2),
    })
}

/// Maps `1 = α0 y + Σ αi xi` to `y = β0 + Σ βi xi`: `β0 = 1/α0`, `βi = -αi/α0`.
pub fn beta_from_alpha<T: Scalar>(alpha: &[T]) -> Result<Vec<T>> {
    invert_explicit(alpha)
}

/// Inverse of [`beta_from_alpha`]: `α0 = 1/β0`, `αi = -βi/β0`.
pub fn alpha_from_beta<T: Scalar>(beta: &[T]) -> Result<Vec<T>> {
    invert_explicit(beta)
}

// Both directions share the same involutive map.
fn invert_explicit<T: Scalar>(v: &[T]) -> Result<Vec<T>> {
    let head = *v.first().ok_or(Error::ConversionUndefined)?;
    if head == T::zero() || !head.is_finite() {
        return Err(Error::ConversionUndefined);
    }
    let mut out = Vec::with_capacity(v.len());
    out.push(T::one() / head);
    out.extend(v[1..].iter().map(|&c| -c / head));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_terms;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
    }

    fn fixture() -> Dataset<f64> {
        Dataset::from_points(&[(1.0, 0.0), (0.0, 1.0), (0.5, 0.5)]).unwrap()
    }

    #[test]
    fn implicit_unity_fixture() {
        let spec = ModelSpec::nonresponse(vec![Term::X, Term::Y]).unwrap();
        let f = fit_implicit(&fixture(), &spec).unwrap();
        assert_close(f.coeffs[0], 1.0, 1e-14);
        assert_close(f.coeffs[1], 1.0, 1e-14);
        for r in &f.residuals {
            assert!(r.abs() < 1e-14);
        }
        assert_close(f.r_squared, 1.0, 1e-14);
        assert_eq!(f.r2_formula, R2Formula::NonResponse);
        assert!(f.f_stat.is_none());
    }

    #[test]
    fn implicit_exact_line() {
        let d = Dataset::from_points(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0), (3.0, 7.0)]).unwrap();
        let spec = ModelSpec::new(Lhs::Response, vec![Term::X], true).unwrap();
        let f = fit_implicit(&d, &spec).unwrap();
        assert_close(f.coeffs[0], 1.0, 1e-12);
        assert_close(f.coeffs[1], 2.0, 1e-12);
        assert_close(f.r_squared, 1.0, 1e-12);
        assert_eq!(f.kind, FitKind::Response);
    }

    #[test]
    fn implicit_underdetermined() {
        let d = Dataset::from_points(&[(1.0, 2.0), (2.0, 5.0)]).unwrap();
        let spec = ModelSpec::nonresponse(parse_terms("x,y,xy").unwrap()).unwrap();
        assert_eq!(fit_implicit(&d, &spec), Err(Error::Underdetermined { rows: 2, cols: 3 }));
    }

    #[test]
    fn nonresponse_unit_circle() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let d = Dataset::from_points(&[(1.0, 0.0), (0.0, 1.0), (h, h)]).unwrap();
        let f = fit_nonresponse(&d, &[Term::X2, Term::Y2]).unwrap();
        assert_close(f.coeffs[0], 1.0, 1e-12);
        assert_close(f.coeffs[1], 1.0, 1e-12);
        assert_close(f.r_squared, 1.0, 1e-12);
    }

    #[test]
    fn nonresponse_radius_two_circle() {
        let s = std::f64::consts::SQRT_2;
        let d = Dataset::from_points(&[
            (2.0, 0.0),
            (-2.0, 0.0),
            (0.0, 2.0),
            (0.0, -2.0),
            (s, s),
            (s, -s),
        ])
        .unwrap();
        let f = fit_nonresponse(&d, &Term::conic_set()).unwrap();
        let expected = [0.0, 0.0, 0.0, 0.25, 0.25];
        for (c, e) in f.coeffs.iter().zip(expected) {
            assert!((c - e).abs() < 1e-12, "{:?}", f.coeffs);
        }
    }

    #[test]
    fn nonresponse_eq12_matches_residuals() {
        let d = Dataset::from_points(&[(1.0, 2.0), (2.0, 2.5), (3.0, 4.5), (4.0, 4.0), (5.0, 6.5)])
            .unwrap();
        let f = fit_nonresponse(&d, &[Term::X, Term::Y]).unwrap();
        // SST = n = SSR + SSE for the uncentered unity regression.
        assert_close(f.r_squared, 1.0 - f.sse / 5.0, 1e-12);
        let (w, _) = design_matrix(&d, f.spec.as_ref().unwrap()).unwrap();
        let direct: f64 = f.coeffs.iter().zip(w.t_mul_vec(&[1.0; 5])).map(|(a, b)| a * b).sum();
        assert_close(f.r_squared, direct / 5.0, 1e-14);
    }

    #[test]
    fn rotation_exact() {
        let d = Dataset::from_points(&[(1.0_f64, 2.0), (2.0, 4.0), (3.0, 6.0)]).unwrap();
        let f = fit_rotation(&d, &parse_terms("x,y,xy").unwrap(), 1).unwrap();
        assert_eq!(f.lhs_label, "y");
        assert_eq!(f.column_labels, vec!["1", "x", "xy"]);
        for r in &f.residuals {
            assert!(r.abs() < 1e-12);
        }
        assert_close(f.r_squared, 1.0, 1e-12);
        assert_close(f.coeffs[1], 2.0, 1e-10);
    }

    #[test]
    fn rotation_constant_column_is_singular() {
        let d = Dataset::from_points(&[(1.0, 3.0), (2.0, 3.0), (4.0, 3.0)]).unwrap();
        assert!(matches!(
            fit_rotation(&d, &[Term::X, Term::Y], 0),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn all_rotations_isolates_failures() {
        let d = Dataset::from_points(&[(1.0, 3.0), (2.0, 3.0), (4.0, 3.0), (5.0, 3.0)]).unwrap();
        let fits = fit_all_rotations(&d, &[Term::X, Term::Y, Term::X2]).unwrap();
        assert_eq!(fits.len(), 3);
        assert!(fits[0].is_err());
        assert_eq!(fits[1], Err(Error::ZeroVariance));
        assert!(fits[2].is_err());

        let d = Dataset::from_points(&[(1.0, 3.0), (2.0, 1.0), (4.0, 3.5), (5.0, 2.0)]).unwrap();
        let fits = fit_all_rotations(&d, &[Term::X, Term::Y]).unwrap();
        assert!(fits.iter().all(Result::is_ok));

        let bad = Dataset::from_points(&[(1.0, 3.0), (-2.0, 1.0), (4.0, 3.5)]).unwrap();
        assert!(matches!(
            fit_all_rotations(&bad, &[Term::X, Term::new(0.5, 0.0)]),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn alias_projection_onto_constant() {
        let x = vec![1.0, 4.0, 2.5, -3.0];
        let x1 = Matrix::from_columns(&[vec![1.0; 4]]);
        let x2 = Matrix::from_columns(&[x.clone()]);
        let a = alias_matrix(&x1, &x2).unwrap();
        assert_close(a[(0, 0)], x.iter().sum::<f64>() / 4.0, 1e-15);
    }

    #[test]
    fn alias_of_included_column_is_unit_vector() {
        let c0 = vec![1.0_f64; 4];
        let c1 = vec![0.5, 1.5, -2.0, 3.0];
        let c2 = vec![2.0, 0.0, 1.0, 7.0];
        let x1 = Matrix::from_columns(&[c0, c1.clone(), c2]);
        let a = alias_matrix(&x1, &Matrix::from_columns(&[c1])).unwrap();
        assert!(a[(0, 0)].abs() < 1e-12);
        assert_close(a[(1, 0)], 1.0, 1e-12);
        assert!(a[(2, 0)].abs() < 1e-12);
    }

    #[test]
    fn standard_hand_fixture() {
        let d = MultiDataset::new(vec![0.0, 1.0, 1.0], vec![vec![0.0, 1.0, 2.0]], vec!["x".into()])
            .unwrap();
        let f = fit_standard(&d).unwrap();
        assert_close(f.coeffs[0], 1.0 / 6.0, 1e-14);
        assert_close(f.coeffs[1], 0.5, 1e-14);
        assert_close(f.sst, 2.0 / 3.0, 1e-14);
        assert_close(f.sse, 1.0 / 6.0, 1e-14);
        assert_close(f.r_squared, 0.75, 1e-14);
        // Eq-8 form against the residual route.
        assert_close(f.r_squared, 1.0 - f.sse / f.sst, 1e-12);
        assert!(f.f_stat.is_some());
    }

    #[test]
    fn standard_exact_plane() {
        let x1 = vec![0.0, 1.0, 2.0, 0.5, 3.0];
        let x2 = vec![1.0, -1.0, 0.0, 2.0, 1.5];
        let y: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| 1.0 + 2.0 * a - b).collect();
        let d = MultiDataset::new(y, vec![x1, x2], vec!["x1".into(), "x2".into()]).unwrap();
        let f = fit_standard(&d).unwrap();
        assert_close(f.r_squared, 1.0, 1e-12);
        assert!(f.sse < 1e-20);
        assert_close(f.coeffs[2], -1.0, 1e-12);
    }

    #[test]
    fn standard_constant_response() {
        let d = MultiDataset::new(vec![2.0; 3], vec![vec![0.0, 1.0, 2.0]], vec!["x".into()]).unwrap();
        assert_eq!(fit_standard(&d), Err(Error::ZeroVariance));
    }

    #[test]
    fn slr_cases() {
        assert_eq!(slr_closed(&[0.0, 1.0], &[1.0, 3.0]).unwrap(), (1.0, 2.0));
        let (b0, b1) = slr_closed(&[0.0, 1.0, 2.0], &[0.0, 1.0, 1.0]).unwrap();
        assert_close(b0, 1.0 / 6.0, 1e-15);
        assert_close(b1, 0.5, 1e-15);
        assert!(matches!(slr_closed(&[5.0; 3], &[1.0, 2.0, 3.0]), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn nra2_cases() {
        let (a1, a2) = nra2_closed(&[1.0, 0.0, 0.5], &[0.0, 1.0, 0.5]).unwrap();
        assert_close(a1, 1.0, 1e-15);
        assert_close(a2, 1.0, 1e-15);
        assert_eq!(nra2_closed(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), (1.0, 1.0));
        let x = [0.3, 1.7, 2.9, 4.1];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        assert!(matches!(nra2_closed(&x, &y), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn univariate_cases() {
        let u = univariate_nra(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((u.alpha, u.mean().unwrap(), u.r2), (1.0, 1.0, 1.0));
        let u = univariate_nra(&[1.0, 2.0, 3.0]).unwrap();
        assert_close(u.alpha, 3.0 / 7.0, 1e-15);
        assert_close(u.mean().unwrap(), 7.0 / 3.0, 1e-15);
        assert_close(u.r2, 6.0 / 7.0, 1e-15);
        let u = univariate_nra(&[-1.0, 1.0]).unwrap();
        assert_eq!(u.mean(), Err(Error::MeanUndefined));
        assert_eq!((u.alpha, u.r2), (0.0, 0.0));
        assert_eq!(univariate_nra(&[0.0, 0.0]), Err(Error::ZeroVariance));
    }

    #[test]
    fn conversion_cases() {
        assert_eq!(beta_from_alpha(&[1.0, -2.0]).unwrap(), vec![1.0, 2.0]);
        let beta = vec![5.0, -3.0];
        let back = beta_from_alpha(&alpha_from_beta(&beta).unwrap()).unwrap();
        for (b, e) in back.iter().zip(&beta) {
            assert_close(*b, *e, 1e-15);
        }
        assert_eq!(beta_from_alpha(&[0.0, 1.0]), Err(Error::ConversionUndefined));
        assert_eq!(alpha_from_beta::<f64>(&[]), Err(Error::ConversionUndefined));
    }

    #[test]
    fn f32_fit() {
        let d = Dataset::from_points(&[(1.0_f32, 0.0), (0.0, 1.0), (0.5, 0.5)]).unwrap();
        let f = fit_nonresponse(&d, &[Term::X, Term::Y]).unwrap();
        assert!((f.coeffs[0] - 1.0).abs() < 1e-5);
    }
}
