//! Implicit regression.
//!
//! Least-squares fitting of relations `g(x, y) = h(x, y | θ)` where no
//! variable need be the response:
//!
//! * **non-response analysis**: unity on the left, `1 = Σ α_k T_k(x, y)`;
//! * **rotational analysis**: each term `T_j` in turn regressed on the others
//!   plus an intercept (equivalently, alias matrices);
//! * **standard regression** as the special case of a designated response.
//!
//! Terms are monomials `x^a y^b`. Fits report coefficients, residuals, R²,
//! covariance and t/F statistics. The [`diagnostics`] module measures model
//! quality through the triangle formed by SST, SSM and SSE (degree of
//! separation θ_T, θ_M, height and Ratio), and [`conic`] inverts second-order
//! fits and recovers ellipse geometry.
//!
//! All numerics are generic over [`Scalar`] (`f32`, `f64`); the `*64`
//! aliases below fix the scalar to `f64`.
//!
//! ```
//! use implicit_regression::{fit_nonresponse, Dataset, Term};
//!
//! let d = Dataset::<f64>::from_points(&[(1.0, 0.0), (0.0, 1.0), (0.5, 0.5)]).unwrap();
//! let fit = fit_nonresponse(&d, &[Term::X, Term::Y]).unwrap();
//! assert!((fit.coeffs[0] - 1.0).abs() < 1e-12);
//! assert!((fit.r_squared - 1.0).abs() < 1e-12);
//! ```

pub mod conic;
pub mod data;
pub mod diagnostics;
pub mod error;
pub mod fit;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod simulate;
pub mod term;

pub use conic::{
    classify_conic, conic_geometry, fit_conic, invert_rotation_linear, rotation_alpha, solve_for_x,
    solve_for_y, ConicClass, ConicCoeffs, EllipseGeometry, InvertFor,
};
pub use data::{load_csv, load_csv_multi, read_csv, read_csv_column, read_csv_multi, Dataset, MultiDataset};
pub use diagnostics::{
    cross_term, nra2_stationarity, ols_orthogonality_check, pinwheel_data, reconstruct_conic,
    separation_bivariate, separation_conic, separation_univariate, LineForm, OrthogonalityCheck, Pinwheel,
    PinwheelLine, Reconstruction, SeparationAngles, SeparationDiagnostics, Stationarity,
};
pub use error::{Error, Result};
pub use fit::{
    alias_matrix, alpha_from_beta, beta_from_alpha, fit_all_rotations, fit_implicit, fit_nonresponse,
    fit_rotation, fit_standard, nra2_closed, slr_closed, univariate_nra, FitKind, FitResult, R2Formula,
    UnivariateNra,
};
pub use linalg::{cramer_2x2, solve_normal, Matrix, NormalSolution};
pub use model::{design_matrix, Lhs, ModelSpec};
pub use scalar::Scalar;
pub use simulate::{generate, GeneratorKind, GeneratorSpec, Generated, SeededRng};
pub use term::{parse_terms, Term};

pub type Matrix64 = Matrix<f64>;
pub type Dataset64 = Dataset<f64>;
pub type MultiDataset64 = MultiDataset<f64>;
pub type FitResult64 = FitResult<f64>;
pub type ConicCoeffs64 = ConicCoeffs<f64>;
pub type SeparationDiagnostics64 = SeparationDiagnostics<f64>;
pub type Pinwheel64 = Pinwheel<f64>;

pub type Matrix32 = Matrix<f32>;
pub type Dataset32 = Dataset<f32>;
pub type FitResult32 = FitResult<f32>;
