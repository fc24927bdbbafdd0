//! Second-order non-response relations `1 = a1 x + a2 y + a3 xy + a4 x² + a5 y²`:
//! inversion for either variable, classification and ellipse geometry.
//! Also the rational inversion of the rotation `y = α0 + α1 x + α2 xy`.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::fit::{fit_nonresponse, FitKind, FitResult};
use crate::linalg::cramer_2x2;
use crate::scalar::{max_abs, Scalar};
use crate::term::Term;

/// Absolute tolerance on scale-normalized coefficients for double roots and
/// conic classification.
pub const TOL_DISC: f64 = 1e-10;
/// Denominator magnitude below which a rational inversion has a pole.
pub const TOL_DENOM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicCoeffs<T> {
    pub a1: T,
    pub a2: T,
    pub a3: T,
    pub a4: T,
    pub a5: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicClass {
    Circle,
    Ellipse,
    Parabola,
    Hyperbola,
    DegenerateOrLine,
}

impl ConicClass {
    pub fn name(self) -> &'static str {
        match self {
            ConicClass::Circle => "circle",
            ConicClass::Ellipse => "ellipse",
            ConicClass::Parabola => "parabola",
            ConicClass::Hyperbola => "hyperbola",
            ConicClass::DegenerateOrLine => "degenerate-or-line",
        }
    }
}

/// Centre, semi-axes (major first) and major-axis angle in radians, in `(-π/2, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseGeometry<T> {
    pub center: (T, T),
    pub semi_axes: (T, T),
    pub rotation: T,
}

impl<T: Scalar> EllipseGeometry<T> {
    /// Point at parameter `t` on the parametric form.
    pub fn point(&self, t: T) -> (T, T) {
        let (s, c) = self.rotation.sin_cos();
        let (u, v) = (self.semi_axes.0 * t.cos(), self.semi_axes.1 * t.sin());
        (self.center.0 + c * u - s * v, self.center.1 + s * u + c * v)
    }
}

impl<T: Scalar> ConicCoeffs<T> {
    pub fn new(a1: T, a2: T, a3: T, a4: T, a5: T) -> Self {
        ConicCoeffs { a1, a2, a3, a4, a5 }
    }

    pub fn from_slice(c: &[T]) -> Result<Self> {
        match *c {
            [a1, a2, a3, a4, a5] => Ok(Self::new(a1, a2, a3, a4, a5)),
            _ => Err(Error::InvalidModel(format!("conic needs 5 coefficients, got {}", c.len()))),
        }
    }

    /// Reads the coefficients of a non-response fit on exactly the terms
    /// `{x, y, xy, x², y²}` (any order).
    pub fn from_fit(fit: &FitResult<T>) -> Result<Self> {
        let spec = fit.spec.as_ref().filter(|_| fit.kind == FitKind::NonResponse);
        let terms = spec.map(|s| s.terms()).unwrap_or(&[]);
        let set = Term::conic_set();
        if terms.len() != 5 || !set.iter().all(|t| terms.contains(t)) {
            return Err(Error::InvalidModel("not a five-term conic non-response fit".into()));
        }
        let get = |t: Term| fit.coeffs[terms.iter().position(|u| *u == t).unwrap()];
        Ok(Self::new(get(Term::X), get(Term::Y), get(Term::XY), get(Term::X2), get(Term::Y2)))
    }

    pub fn as_array(&self) -> [T; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a5]
    }

    /// Swaps the roles of x and y.
    pub fn transposed(&self) -> Self {
        Self::new(self.a2, self.a1, self.a3, self.a5, self.a4)
    }

    fn scale(&self) -> T {
        max_abs(&self.as_array())
    }

    /// `a1 x + a2 y + a3 xy + a4 x² + a5 y² - 1`.
    pub fn residual(&self, x: T, y: T) -> T {
        self.a1 * x + self.a2 * y + self.a3 * x * y + self.a4 * x * x + self.a5 * y * y - T::one()
    }
}

/// Real roots, ascending, of `a5 y² + (a2 + a3 x) y + (a1 x + a4 x² - 1) = 0`.
/// Falls back to the linear solve when `a5` vanishes.
pub fn solve_for_y<T: Scalar>(c: &ConicCoeffs<T>, x: T) -> Result<Vec<T>> {
    let s = c.scale();
    if s == T::zero() {
        return Err(Error::NoSolutionAtPoint { at: x.as_f64() });
    }
    let qa = c.a5 / s;
    let qb = (c.a2 + c.a3 * x) / s;
    let qc = (c.a1 * x + c.a4 * x * x - T::one()) / s;
    let tol = T::lit(TOL_DISC);
    if qa.abs() <= tol {
        if qb.abs() <= T::lit(TOL_DENOM) {
            return Err(Error::NoSolutionAtPoint { at: x.as_f64() });
        }
        return Ok(vec![-qc / qb]);
    }
    let disc = qb * qb - T::lit(4.0) * qa * qc;
    if disc < -tol {
        return Ok(Vec::new());
    }
    let two = T::lit(2.0);
    if disc <= T::zero() {
        return Ok(vec![-qb / (two * qa)]);
    }
    // Cancellation-free pair: q = -(b + sign(b) √disc) / 2, roots q/a and c/q.
    let sq = disc.sqrt();
    let q = if qb < T::zero() { (-qb + sq) / two } else { -(qb + sq) / two };
    let (r1, r2) = if q == T::zero() {
        (sq / (two * qa), -sq / (two * qa))
    } else {
        (q / qa, qc / q)
    };
    Ok(if r1 <= r2 { vec![r1, r2] } else { vec![r2, r1] })
}

/// Real roots, ascending, of `a4 x² + (a1 + a3 y) x + (a2 y + a5 y² - 1) = 0`.
pub fn solve_for_x<T: Scalar>(c: &ConicCoeffs<T>, y: T) -> Result<Vec<T>> {
    solve_for_y(&c.transposed(), y)
}

/// Root closest to `observed`; ties go to the smaller root.
pub fn nearest_root<T: Scalar>(roots: &[T], observed: T) -> Option<T> {
    roots.iter().copied().fold(None, |best, r| match best {
        Some(b) if (b - observed).abs() <= (r - observed).abs() => Some(b),
        _ => Some(r),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvertFor {
    /// Evaluate `y = (α0 + α1 x) / (1 - α2 x)` at a given x.
    Y,
    /// Evaluate `x = (y - α0) / (α1 + α2 y)` at a given y.
    X,
}

/// Rational inversion of the rotation `y = α0 + α1 x + α2 xy`.
pub fn invert_rotation_linear<T: Scalar>(alpha: [T; 3], at: T, which: InvertFor) -> Result<T> {
    let [a0, a1, a2] = alpha;
    let (num, den) = match which {
        InvertFor::Y => (a0 + a1 * at, T::one() - a2 * at),
        InvertFor::X => (at - a0, a1 + a2 * at),
    };
    if den.abs() < T::lit(TOL_DENOM) {
        return Err(Error::PoleAtPoint { at: at.as_f64() });
    }
    Ok(num / den)
}

/// Pulls `(α0, α1, α2)` from a rotation fit of `y` on `{1, x, xy}`.
pub fn rotation_alpha<T: Scalar>(fit: &FitResult<T>) -> Result<[T; 3]> {
    let ok = matches!(fit.kind, FitKind::Rotation { .. })
        && fit.lhs_label == "y"
        && fit.column_labels == ["1", "x", "xy"];
    if !ok {
        return Err(Error::InvalidModel("expected the rotation y = a0 + a1 x + a2 xy".into()));
    }
    Ok([fit.coeffs[0], fit.coeffs[1], fit.coeffs[2]])
}

pub fn classify_conic<T: Scalar>(c: &ConicCoeffs<T>) -> ConicClass {
    let s = c.scale();
    let tol = T::lit(TOL_DISC);
    if s == T::zero() {
        return ConicClass::DegenerateOrLine;
    }
    let (a3, a4, a5) = (c.a3 / s, c.a4 / s, c.a5 / s);
    if a3.abs() <= tol && a4.abs() <= tol && a5.abs() <= tol {
        return ConicClass::DegenerateOrLine;
    }
    let d = a3 * a3 - T::lit(4.0) * a4 * a5;
    if d < -tol {
        let round = a3.abs() <= tol && (a4 - a5).abs() <= tol * a4.abs().max(a5.abs());
        if round {
            ConicClass::Circle
        } else {
            ConicClass::Ellipse
        }
    } else if d <= tol {
        ConicClass::Parabola
    } else {
        ConicClass::Hyperbola
    }
}

/// Centre, axes and orientation of a real ellipse (or circle).
pub fn conic_geometry<T: Scalar>(c: &ConicCoeffs<T>) -> Result<EllipseGeometry<T>> {
    if !matches!(classify_conic(c), ConicClass::Circle | ConicClass::Ellipse) {
        return Err(Error::NotAnEllipse);
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    // Gradient of the quadratic form vanishes at the centre.
    let [cx, cy] = cramer_2x2([[two * c.a4, c.a3], [c.a3, two * c.a5]], [-c.a1, -c.a2])
        .map_err(|_| Error::NotAnEllipse)?;
    let (mut p, mut q, mut r) = (c.a4, c.a3 * half, c.a5);
    // Centred form: u' M u = k with k = 1 + c' M c.
    let mut k = T::one() + p * cx * cx + two * q * cx * cy + r * cy * cy;
    if p + r < T::zero() {
        p = -p;
        q = -q;
        r = -r;
        k = -k;
    }
    if !(k > T::zero()) {
        return Err(Error::NotAnEllipse);
    }
    let mean = (p + r) * half;
    let spread = (((p - r) * half).powi(2) + q * q).sqrt();
    let (lo, hi) = (mean - spread, mean + spread);
    if !(lo > T::zero()) {
        return Err(Error::NotAnEllipse);
    }
    let major = (k / lo).sqrt();
    let minor = (k / hi).sqrt();
    let rotation = if spread <= T::lit(TOL_DISC) * mean {
        T::zero()
    } else {
        // Eigenvector of the smaller eigenvalue lies along the major axis.
        let hi_angle = half * (two * q).atan2(p - r);
        let pi = T::lit(std::f64::consts::PI);
        let mut a = hi_angle + pi * half;
        while a > pi * half {
            a = a - pi;
        }
        while a <= -pi * half {
            a = a + pi;
        }
        a
    };
    Ok(EllipseGeometry { center: (cx, cy), semi_axes: (major, minor), rotation })
}

/// Five-term conic non-response fit. A singular design on at least five
/// distinct points means the data satisfy a conic with zero constant term,
/// which has no `... = 1` form; that case is reported as `NotRepresentable`.
pub fn fit_conic<T: Scalar>(d: &Dataset<T>) -> Result<(FitResult<T>, ConicCoeffs<T>)> {
    match fit_nonresponse(d, &Term::conic_set()) {
        Ok(fit) => {
            let c = ConicCoeffs::from_fit(&fit)?;
            Ok((fit, c))
        }
        Err(Error::SingularSystem { .. }) if d.distinct_points() >= 5 => Err(Error::NotRepresentable),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_circle() -> ConicCoeffs<f64> {
        ConicCoeffs::<f64>::new(0.0, 0.0, 0.0, 1.0, 1.0)
    }

    #[test]
    fn circle_roots() {
        assert_eq!(solve_for_y(&unit_circle(), 0.0).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(solve_for_y(&unit_circle(), 1.0).unwrap(), vec![0.0]);
        assert!(solve_for_y(&unit_circle(), 2.0).unwrap().is_empty());
        assert_eq!(solve_for_x(&unit_circle(), 0.0).unwrap(), vec![-1.0, 1.0]);
        assert!(solve_for_x(&unit_circle(), 3.0).unwrap().is_empty());
    }

    #[test]
    fn near_tangent_snaps_to_double_root() {
        let x = 1.0 + 1e-12;
        assert_eq!(solve_for_y(&unit_circle(), x).unwrap().len(), 1);
    }

    #[test]
    fn line_inversion() {
        let line = ConicCoeffs::<f64>::new(1.0, 1.0, 0.0, 0.0, 0.0);
        assert_eq!(solve_for_x(&line, 0.25).unwrap(), vec![0.75]);
        assert_eq!(solve_for_y(&line, 0.25).unwrap(), vec![0.75]);
        let vertical = ConicCoeffs::<f64>::new(1.0, 0.0, 0.0, 0.0, 0.0);
        assert!(matches!(solve_for_y(&vertical, 1.0), Err(Error::NoSolutionAtPoint { .. })));
    }

    #[test]
    fn nearest_root_ties_go_low() {
        assert_eq!(nearest_root(&[-1.0, 1.0], 0.0), Some(-1.0));
        assert_eq!(nearest_root(&[-1.0, 1.0], 0.2), Some(1.0));
        assert_eq!(nearest_root::<f64>(&[], 0.2), None);
    }

    #[test]
    fn rational_inversion() {
        assert_eq!(invert_rotation_linear([1.0, 2.0, 0.0], 3.0, InvertFor::Y).unwrap(), 7.0);
        assert!(matches!(
            invert_rotation_linear([0.0, 0.0, 1.0], 1.0, InvertFor::Y),
            Err(Error::PoleAtPoint { .. })
        ));
        let y = invert_rotation_linear([1.0, 1.0, 1.0], 0.5, InvertFor::Y).unwrap();
        assert_eq!(y, 3.0);
        assert_eq!(invert_rotation_linear([1.0, 1.0, 1.0], y, InvertFor::X).unwrap(), 0.5);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_conic(&ConicCoeffs::<f64>::new(0.0, 0.0, 0.0, 0.25, 0.25)), ConicClass::Circle);
        assert_eq!(classify_conic(&ConicCoeffs::<f64>::new(0.0, 0.0, 0.0, 0.25, 1.0)), ConicClass::Ellipse);
        assert_eq!(classify_conic(&ConicCoeffs::<f64>::new(0.0, 0.0, 1.0, 0.0, 0.0)), ConicClass::Hyperbola);
        assert_eq!(classify_conic(&ConicCoeffs::<f64>::new(0.0, 1.0, 0.0, -1.0, 0.0)), ConicClass::Parabola);
        assert_eq!(
            classify_conic(&ConicCoeffs::<f64>::new(1.0, 1.0, 0.0, 0.0, 0.0)),
            ConicClass::DegenerateOrLine
        );
    }

    #[test]
    fn circle_geometry() {
        let g = conic_geometry(&ConicCoeffs::<f64>::new(0.0, 0.0, 0.0, 0.25, 0.25)).unwrap();
        assert_eq!(g.center, (0.0, 0.0));
        assert!((g.semi_axes.0 - 2.0).abs() < 1e-12 && (g.semi_axes.1 - 2.0).abs() < 1e-12);
        assert_eq!(g.rotation, 0.0);
    }

    #[test]
    fn axis_aligned_ellipse_geometry() {
        let g = conic_geometry(&ConicCoeffs::<f64>::new(0.0, 0.0, 0.0, 0.25, 1.0)).unwrap();
        assert!(g.center.0.abs() < 1e-15 && g.center.1.abs() < 1e-15);
        assert!((g.semi_axes.0 - 2.0).abs() < 1e-12);
        assert!((g.semi_axes.1 - 1.0).abs() < 1e-12);
        assert!(g.rotation.abs() < 1e-12);

        let tall = conic_geometry(&ConicCoeffs::<f64>::new(0.0, 0.0, 0.0, 1.0, 0.25)).unwrap();
        assert!((tall.rotation - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn shifted_circle_geometry() {
        // (x-1)² + y² = 4  =>  x² - 2x + y² = 3  =>  1 = -2/3 x + 1/3 x² + 1/3 y².
        let c = ConicCoeffs::<f64>::new(-2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0, 1.0 / 3.0);
        let g = conic_geometry(&c).unwrap();
        assert!((g.center.0 - 1.0).abs() < 1e-12 && g.center.1.abs() < 1e-12);
        assert!((g.semi_axes.0 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_ellipses_rejected() {
        assert_eq!(conic_geometry(&ConicCoeffs::<f64>::new(0.0, 0.0, 1.0, 0.0, 0.0)), Err(Error::NotAnEllipse));
        // x² + y² = -1 has no real points.
        assert_eq!(
            conic_geometry(&ConicCoeffs::<f64>::new(0.0, 0.0, 0.0, -1.0, -1.0)),
            Err(Error::NotAnEllipse)
        );
    }

    #[test]
    fn negative_definite_form_with_real_points() {
        // 1 = 4x - x² - y² is the circle (x-2)² + y² = 3.
        let g = conic_geometry(&ConicCoeffs::<f64>::new(4.0, 0.0, 0.0, -1.0, -1.0)).unwrap();
        assert!((g.center.0 - 2.0).abs() < 1e-12);
        assert!((g.semi_axes.0 - 3.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn conic_through_origin_not_representable() {
        // (x-3)² + (y-4)² = 25 passes through the origin.
        let pts: Vec<(f64, f64)> = (0..8)
            .map(|k| {
                let t = 0.3 + k as f64 * 0.7;
                (3.0 + 5.0 * t.cos(), 4.0 + 5.0 * t.sin())
            })
            .collect();
        let d = Dataset::from_points(&pts).unwrap();
        assert_eq!(fit_conic(&d).unwrap_err(), Error::NotRepresentable);
    }
}
