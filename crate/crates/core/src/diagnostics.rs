//! Degree-of-separation diagnostics, stationarity checks for the two-term
//! non-response line, and the three-line pin-wheel comparison.
//!
//! With `T = y - ȳ`, `M = ŷ - ȳ` and `E = y - ŷ`, the sums of squares
//! `SST = |T|²`, `SSM = |M|²`, `SSE = |E|²` form a triangle. `θ_T` is the
//! angle opposite `SST`, `θ_M` the angle opposite `SSM`.

use crate::conic::{nearest_root, solve_for_x, solve_for_y, ConicCoeffs, TOL_DENOM};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::fit::{fit_rotation, nra2_closed, FitResult};
use crate::scalar::Scalar;
use crate::term::Term;

/// Slack allowed on law-of-cosines arguments before they count as a violation.
pub const TRIANGLE_SLACK: f64 = 1e-9;

/// Sums of squares below `PERFECT_FIT_EPS * epsilon * SST` are treated as zero.
pub const PERFECT_FIT_EPS: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationAngles<T> {
    /// Degrees; 90 for intercept least squares.
    pub theta_t: T,
    pub theta_m: T,
    /// Remaining triangle angle, `180 - θ_T - θ_M`.
    pub theta_e: T,
    /// `Ê sin θ_M`.
    pub height: T,
    /// `√(SST/SSM) sin θ_M`.
    pub ratio: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationDiagnostics<T> {
    pub sst: T,
    pub ssm: T,
    pub sse: T,
    /// `√(SSE/n)`.
    pub e_hat: T,
    /// `None` marks a perfect fit: SSE or SSM is zero and the angles are undefined.
    pub angles: Option<SeparationAngles<T>>,
    pub n: usize,
}

impl<T: Scalar> SeparationDiagnostics<T> {
    pub fn is_perfect_fit(&self) -> bool {
        self.angles.is_none()
    }

    pub fn theta_t(&self) -> Option<T> {
        self.angles.map(|a| a.theta_t)
    }

    pub fn from_sums(sst: T, ssm: T, sse: T, n: usize) -> Result<Self> {
        if !(sst > T::zero()) {
            return Err(Error::ZeroVariance);
        }
        let e_hat = (sse / T::from_usize(n).unwrap()).sqrt();
        let zero = T::lit(PERFECT_FIT_EPS) * T::epsilon() * sst;
        let angles = if sse <= zero || ssm <= zero {
            None
        } else {
            let two = T::lit(2.0);
            let theta_t = law_of_cosines(ssm + sse - sst, two * (ssm * sse).sqrt())?;
            let theta_m = law_of_cosines(sst + sse - ssm, two * (sst * sse).sqrt())?;
            let sin_m = theta_m.to_radians().sin();
            Some(SeparationAngles {
                theta_t,
                theta_m,
                theta_e: T::lit(180.0) - theta_t - theta_m,
                height: e_hat * sin_m,
                ratio: (sst / ssm).sqrt() * sin_m,
            })
        };
        Ok(SeparationDiagnostics { sst, ssm, sse, e_hat, angles, n })
    }
}

/// `acos(num/den)` in degrees, clamping only within [`TRIANGLE_SLACK`].
fn law_of_cosines<T: Scalar>(num: T, den: T) -> Result<T> {
    let arg = num / den;
    let slack = T::one() + T::lit(TRIANGLE_SLACK);
    if !(arg.abs() <= slack) {
        return Err(Error::TriangleViolation { arg: arg.as_f64() });
    }
    Ok(arg.max(-T::one()).min(T::one()).acos().to_degrees())
}

fn mean<T: Scalar>(v: &[T]) -> T {
    v.iter().copied().sum::<T>() / T::from_usize(v.len()).unwrap()
}

fn sums_of_squares<T: Scalar>(obs: &[T], est: &[T]) -> (T, T, T) {
    let m = mean(obs);
    let mut s = (T::zero(), T::zero(), T::zero());
    for (&y, &f) in obs.iter().zip(est) {
        s.0 = s.0 + (y - m) * (y - m);
        s.1 = s.1 + (f - m) * (f - m);
        s.2 = s.2 + (f - y) * (f - y);
    }
    s
}

fn check_lengths(n: usize, others: &[usize]) -> Result<()> {
    if others.iter().any(|&k| k != n) {
        return Err(Error::LengthMismatch("observations and estimates differ in length".into()));
    }
    if n < 2 {
        return Err(Error::Underdetermined { rows: n, cols: 2 });
    }
    Ok(())
}

pub fn separation_univariate<T: Scalar>(y: &[T], y_hat: &[T]) -> Result<SeparationDiagnostics<T>> {
    check_lengths(y.len(), &[y_hat.len()])?;
    let (sst, ssm, sse) = sums_of_squares(y, y_hat);
    SeparationDiagnostics::from_sums(sst, ssm, sse, y.len())
}

/// Pooled x and y sums of squares.
pub fn separation_bivariate<T: Scalar>(
    x: &[T],
    x_hat: &[T],
    y: &[T],
    y_hat: &[T],
) -> Result<SeparationDiagnostics<T>> {
    check_lengths(x.len(), &[x_hat.len(), y.len(), y_hat.len()])?;
    let (tx, mx, ex) = sums_of_squares(x, x_hat);
    let (ty, my, ey) = sums_of_squares(y, y_hat);
    SeparationDiagnostics::from_sums(tx + ty, mx + my, ex + ey, x.len())
}

/// `Σ M_i E_i` with `M = ŷ - ȳ`, `E = y - ŷ`; `SST = SSM + SSE + 2 Σ M_i E_i`.
pub fn cross_term<T: Scalar>(y: &[T], y_hat: &[T]) -> T {
    let m = mean(y);
    y.iter().zip(y_hat).map(|(&o, &f)| (f - m) * (o - f)).sum()
}

/// Estimates of `(x, y)` recovered from a conic by nearest-root inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction<T> {
    pub x_hat: Vec<T>,
    pub y_hat: Vec<T>,
    /// Coordinates with no real root at the observation; those estimates fall
    /// back to the coordinate's sample mean.
    pub unreconstructed: usize,
}

pub fn reconstruct_conic<T: Scalar>(c: &ConicCoeffs<T>, d: &Dataset<T>) -> Reconstruction<T> {
    let (mx, my) = (mean(d.x()), mean(d.y()));
    let mut unreconstructed = 0;
    let mut pick = |roots: Result<Vec<T>>, observed: T, fallback: T| {
        match roots.ok().and_then(|r| nearest_root(&r, observed)) {
            Some(v) => v,
            None => {
                unreconstructed += 1;
                fallback
            }
        }
    };
    let mut x_hat = Vec::with_capacity(d.n());
    let mut y_hat = Vec::with_capacity(d.n());
    for (x, y) in d.points() {
        y_hat.push(pick(solve_for_y(c, x), y, my));
        x_hat.push(pick(solve_for_x(c, y), x, mx));
    }
    Reconstruction { x_hat, y_hat, unreconstructed }
}

/// Bivariate separation of a conic fit, with its reconstruction tally.
pub fn separation_conic<T: Scalar>(
    c: &ConicCoeffs<T>,
    d: &Dataset<T>,
) -> Result<(SeparationDiagnostics<T>, Reconstruction<T>)> {
    let r = reconstruct_conic(c, d);
    let s = separation_bivariate(d.x(), &r.x_hat, d.y(), &r.y_hat)?;
    Ok((s, r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityCheck<T> {
    /// `|SST - SSM - SSE| / max(1, SST)`.
    pub gap: T,
    pub theta_t: T,
}

/// Checks `SST = SSM + SSE` and `θ_T = 90°` for an intercept least-squares fit.
pub fn ols_orthogonality_check<T: Scalar>(fit: &FitResult<T>) -> Result<OrthogonalityCheck<T>> {
    if !fit.intercept {
        return Err(Error::InterceptRequired);
    }
    let s = separation_univariate(&fit.target, &fit.fitted)?;
    let theta_t = s.theta_t().ok_or(Error::PerfectFit)?;
    let gap = (s.sst - s.ssm - s.sse).abs() / s.sst.max(T::one());
    Ok(OrthogonalityCheck { gap, theta_t })
}

/// Stationarity of the two-term non-response line `1 = a1 x + a2 y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stationarity<T> {
    /// `a1 Σx² + a2 Σxy - Σx`.
    pub gap_x: T,
    /// `a1 Σxy + a2 Σy² - Σy`.
    pub gap_y: T,
    /// `Σ(a1 x_i + a2 y_i)`, equal to `n R²`.
    pub span: T,
    /// `n γ - (γ1 Σx + γ2 Σy)` with `γ = 1/|a|`, `γk = ak γ`.
    pub gap_distance: T,
    /// `span / n`.
    pub r_squared: T,
}

pub fn nra2_stationarity<T: Scalar>(d: &Dataset<T>, a1: T, a2: T) -> Stationarity<T> {
    let mut s = [T::zero(); 5];
    for (x, y) in d.points() {
        s[0] = s[0] + x;
        s[1] = s[1] + y;
        s[2] = s[2] + x * x;
        s[3] = s[3] + x * y;
        s[4] = s[4] + y * y;
    }
    let [sx, sy, sxx, sxy, syy] = s;
    let nf = T::from_usize(d.n()).unwrap();
    let span = a1 * sx + a2 * sy;
    let gamma = T::one() / (a1 * a1 + a2 * a2).sqrt();
    Stationarity {
        gap_x: a1 * sxx + a2 * sxy - sx,
        gap_y: a1 * sxy + a2 * syy - sy,
        span,
        gap_distance: nf * gamma - (a1 * gamma * sx + a2 * gamma * sy),
        r_squared: span / nf,
    }
}

/// A fitted line expressed for plotting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineForm<T> {
    /// `y = slope x + intercept`.
    Sloped { slope: T, intercept: T },
    /// `x = at`.
    Vertical { at: T },
}

impl<T: Scalar> LineForm<T> {
    /// Direction angle in degrees within `(-90, 90]`.
    pub fn angle(&self) -> T {
        match *self {
            LineForm::Sloped { slope, .. } => slope.atan().to_degrees(),
            LineForm::Vertical { .. } => T::lit(90.0),
        }
    }

    fn sloped_or_vertical(slope_num: T, slope_den: T, intercept_num: T, vertical_at: T) -> Self {
        if slope_den.abs() <= T::lit(TOL_DENOM) * slope_num.abs().max(T::one()) {
            LineForm::Vertical { at: vertical_at }
        } else {
            LineForm::Sloped { slope: slope_num / slope_den, intercept: intercept_num / slope_den }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PinwheelLine<T> {
    pub label: &'static str,
    /// Coefficients as fitted: `(a0, a1)` for the rotations, `(a1, a2)` for the non-response line.
    pub coeffs: [T; 2],
    pub line: LineForm<T>,
}

/// The rotations `y = a0 + a1 x`, `x = c0 + c1 y` and the non-response line
/// `1 = a1 x + a2 y`, fitted to the same data.
#[derive(Debug, Clone, PartialEq)]
pub struct Pinwheel<T> {
    pub lines: [PinwheelLine<T>; 3],
}

impl<T: Scalar> Pinwheel<T> {
    /// Smallest angle between line directions, in degrees within `[0, 90]`.
    pub fn separation(&self, i: usize, j: usize) -> T {
        let d = (self.lines[i].line.angle() - self.lines[j].line.angle()).abs();
        d.min(T::lit(180.0) - d)
    }

    pub fn pairwise_separations(&self) -> [T; 3] {
        [self.separation(0, 1), self.separation(0, 2), self.separation(1, 2)]
    }

    pub fn max_separation(&self) -> T {
        self.pairwise_separations().into_iter().fold(T::zero(), T::max)
    }
}

pub fn pinwheel_data<T: Scalar>(d: &Dataset<T>) -> Result<Pinwheel<T>> {
    let terms = [Term::X, Term::Y];
    let y_on_x = fit_rotation(d, &terms, 1)?;
    let x_on_y = fit_rotation(d, &terms, 0)?;
    let (a1, a2) = nra2_closed(d.x(), d.y())?;

    let (b0, b1) = (y_on_x.coeffs[0], y_on_x.coeffs[1]);
    let (c0, c1) = (x_on_y.coeffs[0], x_on_y.coeffs[1]);
    Ok(Pinwheel {
        lines: [
            PinwheelLine {
                label: "rotation y~x",
                coeffs: [b0, b1],
                line: LineForm::Sloped { slope: b1, intercept: b0 },
            },
            PinwheelLine {
                label: "rotation x~y",
                coeffs: [c0, c1],
                // y = (x - c0) / c1
                line: LineForm::sloped_or_vertical(T::one(), c1, -c0, c0),
            },
            PinwheelLine {
                label: "non-response",
                coeffs: [a1, a2],
                // y = (1 - a1 x) / a2
                line: LineForm::sloped_or_vertical(-a1, a2, T::one(), T::one() / a1),
            },
        ],
    })
}
