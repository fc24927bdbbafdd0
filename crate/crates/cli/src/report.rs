//! Serializable report and its text renderer.

use std::fmt::Write as _;

use implicit_regression::{
    ConicClass, EllipseGeometry, Error, FitKind, FitResult, Pinwheel, R2Formula, SeparationDiagnostics,
};
use serde::{Deserialize, Serialize};

/// Non-finite values serialize as `null`.
fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub model: Option<ModelDescription>,
    pub n: Option<usize>,
    pub coefficients: Vec<Coefficient>,
    pub r_squared: Option<RSquared>,
    pub sums_of_squares: Option<SumsOfSquares>,
    pub sigma2_hat: Option<f64>,
    pub f_stat: Option<f64>,
    pub self_weighting_mean: Option<f64>,
    pub conic: Option<ConicReport>,
    pub separation: Option<SeparationReport>,
    pub pinwheel: Option<PinwheelReport>,
    pub conversion: Option<ConversionReport>,
    pub warnings: Vec<String>,
    pub error: Option<ReportError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescription {
    pub kind: String,
    pub lhs: String,
    pub terms: Vec<String>,
    pub intercept: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub label: String,
    pub estimate: f64,
    pub std_error: Option<f64>,
    pub t_stat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RSquared {
    pub value: f64,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumsOfSquares {
    pub sst: f64,
    pub ssr: f64,
    pub sse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicReport {
    pub class: String,
    pub geometry: Option<Geometry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub center: [f64; 2],
    pub semi_axes: [f64; 2],
    pub rotation_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub sst: f64,
    pub ssm: f64,
    pub sse: f64,
    pub e_hat: f64,
    pub n: usize,
    pub perfect_fit: bool,
    pub angles: Option<Angles>,
    pub unreconstructed: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    pub theta_t: f64,
    pub theta_m: f64,
    pub theta_e: f64,
    pub height: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinwheelReport {
    pub lines: Vec<PinwheelLineReport>,
    /// Pairs (0,1), (0,2), (1,2), degrees.
    pub separations: [f64; 3],
    pub max_separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinwheelLineReport {
    pub label: String,
    pub coeffs: [f64; 2],
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub vertical_at: Option<f64>,
    pub angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConversionReport {
    pub from: String,
    pub to: String,
    pub input: Vec<f64>,
    pub output: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportError {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    use Error::*;
    match e {
        NamedColumnMissing(_) | Parse { .. } | EmptyDataset | LengthMismatch(_) | NonFinite { .. }
        | TermSyntax(_) | DuplicateTerm(_) | InvalidModel(_) | InvalidSpec(_) | Io(_)
        | InterceptRequired => 2,
        Underdetermined { .. } | SingularSystem { .. } | ZeroVariance | MeanUndefined
        | ConversionUndefined | NotAnEllipse | NotRepresentable | PerfectFit => 3,
        Domain { .. } | NoSolutionAtPoint { .. } | PoleAtPoint { .. } => 4,
        TriangleViolation { .. } => 5,
    }
}

pub fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

impl ReportError {
    pub fn from_error(e: &Error) -> Self {
        ReportError { kind: error_kind(e), message: e.to_string(), exit_code: exit_code(e) }
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), ..Default::default() }
    }

    pub fn failed(command: &str, e: &Error) -> Self {
        Report { error: Some(ReportError::from_error(e)), ..Report::new(command) }
    }

    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, |e| e.exit_code)
    }

    pub fn with_fit(mut self, fit: &FitResult<f64>) -> Self {
        let kind = match fit.kind {
            FitKind::NonResponse => "nonresponse",
            FitKind::Rotation { .. } => "rotation",
            FitKind::Response => "response",
            FitKind::Standard => "standard",
        };
        let terms = match &fit.spec {
            Some(spec) => spec.rhs_terms().iter().map(|t| t.to_string()).collect(),
            None => fit.column_labels.iter().filter(|l| *l != "1").cloned().collect(),
        };
        self.model = Some(ModelDescription {
            kind: kind.into(),
            lhs: fit.lhs_label.clone(),
            terms,
            intercept: fit.intercept,
        });
        self.n = Some(fit.n);
        self.coefficients = fit
            .column_labels
            .iter()
            .enumerate()
            .map(|(i, label)| Coefficient {
                label: label.clone(),
                estimate: fit.coeffs[i],
                std_error: finite(fit.std_errors[i]),
                t_stat: finite(fit.t_stats[i]),
            })
            .collect();
        let formula = match fit.r2_formula {
            R2Formula::Centered => "Eq8-centered",
            R2Formula::NonResponse => "Eq12-nonresponse",
        };
        self.r_squared = Some(RSquared { value: fit.r_squared, formula: formula.into() });
        self.sums_of_squares = Some(SumsOfSquares { sst: fit.sst, ssr: fit.ssr, sse: fit.sse });
        self.sigma2_hat = finite(fit.sigma2_hat);
        self.f_stat = fit.f_stat.and_then(finite);
        self
    }

    pub fn set_conic(&mut self, class: ConicClass, geometry: Option<EllipseGeometry<f64>>) {
        self.conic = Some(ConicReport {
            class: class.name().into(),
            geometry: geometry.map(|g| Geometry {
                center: [g.center.0, g.center.1],
                semi_axes: [g.semi_axes.0, g.semi_axes.1],
                rotation_deg: g.rotation.to_degrees(),
            }),
        });
    }

    pub fn set_separation(&mut self, s: &SeparationDiagnostics<f64>, unreconstructed: Option<usize>) {
        if s.is_perfect_fit() {
            self.warnings.push("PerfectFit: separation angles are undefined".into());
        }
        if let Some(u) = unreconstructed.filter(|&u| u > 0) {
            self.warnings.push(format!("{u} coordinates had no real root and use the sample mean"));
        }
        self.separation = Some(SeparationReport {
            sst: s.sst,
            ssm: s.ssm,
            sse: s.sse,
            e_hat: s.e_hat,
            n: s.n,
            perfect_fit: s.is_perfect_fit(),
            angles: s.angles.map(|a| Angles {
                theta_t: a.theta_t,
                theta_m: a.theta_m,
                theta_e: a.theta_e,
                height: a.height,
                ratio: a.ratio,
            }),
            unreconstructed,
        });
    }

    pub fn set_pinwheel(&mut self, p: &Pinwheel<f64>) {
        use implicit_regression::LineForm;
        let lines = p
            .lines
            .iter()
            .map(|l| {
                let (slope, intercept, vertical_at) = match l.line {
                    LineForm::Sloped { slope, intercept } => (Some(slope), Some(intercept), None),
                    LineForm::Vertical { at } => (None, None, Some(at)),
                };
                PinwheelLineReport {
                    label: l.label.into(),
                    coeffs: l.coeffs,
                    slope,
                    intercept,
                    vertical_at,
                    angle_deg: l.line.angle(),
                }
            })
            .collect();
        self.pinwheel = Some(PinwheelReport {
            lines,
            separations: p.pairwise_separations(),
            max_separation: p.max_separation(),
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error [{}]: {}", e.kind, e.message);
            return s;
        }
        if let Some(m) = &self.model {
            let _ = writeln!(
                s,
                "model: {} ({} ~ {}{})",
                m.kind,
                m.lhs,
                if m.intercept { "1 + " } else { "" },
                m.terms.join(" + ")
            );
        }
        if let Some(n) = self.n {
            let _ = writeln!(s, "n: {n}");
        }
        if !self.coefficients.is_empty() {
            let _ = writeln!(s, "{:<14} {:>16} {:>14} {:>12}", "term", "estimate", "std.error", "t");
            for c in &self.coefficients {
                let _ = writeln!(
                    s,
                    "{:<14} {:>16.8} {:>14} {:>12}",
                    c.label,
                    c.estimate,
                    opt(c.std_error),
                    opt(c.t_stat)
                );
            }
        }
        if let Some(r) = &self.r_squared {
            let _ = writeln!(s, "R^2: {:.6} [{}]", r.value, r.formula);
        }
        if let Some(q) = &self.sums_of_squares {
            let _ = writeln!(s, "SST: {:.6}  SSR: {:.6}  SSE: {:.6}", q.sst, q.ssr, q.sse);
        }
        if let Some(v) = self.sigma2_hat {
            let _ = writeln!(s, "sigma^2: {v:.6}");
        }
        if let Some(v) = self.f_stat {
            let _ = writeln!(s, "F: {v:.6}");
        }
        if let Some(v) = self.self_weighting_mean {
            let _ = writeln!(s, "self-weighting mean: {v:.6}");
        }
        if let Some(c) = &self.conic {
            let _ = writeln!(s, "conic: {}", c.class);
            if let Some(g) = &c.geometry {
                let _ = writeln!(
                    s,
                    "  center ({:.6}, {:.6})  semi-axes ({:.6}, {:.6})  rotation {:.4} deg",
                    g.center[0], g.center[1], g.semi_axes[0], g.semi_axes[1], g.rotation_deg
                );
            }
        }
        if let Some(p) = &self.separation {
            let _ = writeln!(s, "separation: SST {:.6}  SSM {:.6}  SSE {:.6}  E {:.6}", p.sst, p.ssm, p.sse, p.e_hat);
            match &p.angles {
                Some(a) => {
                    let _ = writeln!(
                        s,
                        "  theta_T {:.4}  theta_M {:.4}  theta_E {:.4}  height {:.6}  ratio {:.6}",
                        a.theta_t, a.theta_m, a.theta_e, a.height, a.ratio
                    );
                }
                None => {
                    let _ = writeln!(s, "  perfect fit: angles undefined");
                }
            }
            if let Some(u) = p.unreconstructed {
                let _ = writeln!(s, "  unreconstructed: {u}");
            }
        }
        if let Some(p) = &self.pinwheel {
            let _ = writeln!(s, "pinwheel:");
            for l in &p.lines {
                let form = match (l.slope, l.intercept, l.vertical_at) {
                    (Some(m), Some(b), _) => format!("y = {b:.6} + {m:.6} x"),
                    (_, _, Some(at)) => format!("x = {at:.6}"),
                    _ => "-".into(),
                };
                let _ = writeln!(s, "  {:<10} {:<36} angle {:.4}", l.label, form, l.angle_deg);
            }
            let [a, b, c] = p.separations;
            let _ = writeln!(s, "  separations {a:.4} {b:.4} {c:.4}  max {:.4}", p.max_separation);
        }
        if let Some(c) = &self.conversion {
            let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.10}")).collect::<Vec<_>>().join(", ");
            let _ = writeln!(s, "{} [{}] -> {} [{}]", c.from, fmt(&c.input), c.to, fmt(&c.output));
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}
