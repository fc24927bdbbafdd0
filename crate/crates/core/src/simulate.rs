//! Seeded synthetic data.
//!
//! Random stream: ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64(seed)`).
//! A uniform deviate on `[0, 1)` is the top 53 bits of `next_u64()` times
//! `2^-53`. Normal deviates use the Box–Muller transform on two uniforms
//! `u1, u2`: `r = √(-2 ln(1 - u1))`, returning `r cos(2π u2)` and then the
//! cached `r sin(2π u2)` on the next call. Geometric kinds draw the curve
//! parameter first, then x-noise, then y-noise, point by point.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Deterministic uniform/normal stream.
#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { inner: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal deviate.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    /// `y = b0 + b1 x` with x uniform on `[x_min, x_max)`.
    Line { b0: f64, b1: f64, x_min: f64, x_max: f64 },
    /// Angle uniform on `[0, 2π)`.
    Circle { cx: f64, cy: f64, r: f64 },
    /// Semi-axes `ax`, `ay` before rotating by `rot` radians.
    Ellipse { cx: f64, cy: f64, ax: f64, ay: f64, rot: f64 },
    ConstantNormal { mu: f64, sigma: f64 },
    Uniform { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    /// Per-coordinate normal noise for the geometric kinds.
    pub noise_sigma: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generated<T> {
    Points(Dataset<T>),
    Values(Vec<T>),
}

impl<T: Scalar> Generated<T> {
    pub fn into_points(self) -> Result<Dataset<T>> {
        match self {
            Generated::Points(d) => Ok(d),
            Generated::Values(_) => Err(Error::InvalidSpec("generator yields values, not points".into())),
        }
    }

    pub fn into_values(self) -> Result<Vec<T>> {
        match self {
            Generated::Values(v) => Ok(v),
            Generated::Points(_) => Err(Error::InvalidSpec("generator yields points, not values".into())),
        }
    }
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, noise_sigma: f64, seed: u64) -> Self {
        GeneratorSpec { kind, n, noise_sigma, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        let params: Vec<f64> = match self.kind {
            GeneratorKind::Line { b0, b1, x_min, x_max } => vec![b0, b1, x_min, x_max],
            GeneratorKind::Circle { cx, cy, r } => vec![cx, cy, r],
            GeneratorKind::Ellipse { cx, cy, ax, ay, rot } => vec![cx, cy, ax, ay, rot],
            GeneratorKind::ConstantNormal { mu, sigma } => vec![mu, sigma],
            GeneratorKind::Uniform { a, b } => vec![a, b],
        };
        if params.iter().any(|v| !v.is_finite()) || !self.noise_sigma.is_finite() {
            return bad("parameters must be finite");
        }
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if self.noise_sigma < 0.0 {
            return bad("noise_sigma must be non-negative");
        }
        match self.kind {
            GeneratorKind::Line { x_min, x_max, .. } if !(x_min < x_max) => bad("x_min must be below x_max"),
            GeneratorKind::Circle { r, .. } if !(r > 0.0) => bad("radius must be positive"),
            GeneratorKind::Ellipse { ax, ay, .. } if !(ax > 0.0 && ay > 0.0) => {
                bad("semi-axes must be positive")
            }
            GeneratorKind::ConstantNormal { sigma, .. } if sigma < 0.0 => bad("sigma must be non-negative"),
            GeneratorKind::Uniform { a, b } if !(a < b) => bad("a must be below b"),
            _ => Ok(()),
        }
    }
}

pub fn generate<T: Scalar>(spec: &GeneratorSpec) -> Result<Generated<T>> {
    spec.validate()?;
    let mut rng = SeededRng::new(spec.seed);
    let n = spec.n;
    let noise = spec.noise_sigma;
    let tau = std::f64::consts::TAU;
    let points = |rng: &mut SeededRng, curve: &dyn Fn(f64) -> (f64, f64), lo: f64, hi: f64| {
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let (px, py) = curve(rng.uniform_in(lo, hi));
            let dx = noise * rng.normal();
            let dy = noise * rng.normal();
            x.push(T::lit(px + dx));
            y.push(T::lit(py + dy));
        }
        Dataset::new(x, y).map(Generated::Points)
    };
    match spec.kind {
        GeneratorKind::Line { b0, b1, x_min, x_max } => {
            points(&mut rng, &|x| (x, b0 + b1 * x), x_min, x_max)
        }
        GeneratorKind::Circle { cx, cy, r } => {
            points(&mut rng, &|t| (cx + r * t.cos(), cy + r * t.sin()), 0.0, tau)
        }
        GeneratorKind::Ellipse { cx, cy, ax, ay, rot } => {
            let (s, c) = rot.sin_cos();
            points(
                &mut rng,
                &|t| {
                    let (u, v) = (ax * t.cos(), ay * t.sin());
                    (cx + c * u - s * v, cy + s * u + c * v)
                },
                0.0,
                tau,
            )
        }
        GeneratorKind::ConstantNormal { mu, sigma } => Ok(Generated::Values(
            (0..n).map(|_| T::lit(mu + sigma * rng.normal())).collect(),
        )),
        GeneratorKind::Uniform { a, b } => Ok(Generated::Values(
            (0..n).map(|_| T::lit(rng.uniform_in(a, b))).collect(),
        )),
    }
}
