//! Subcommand bodies. Each returns a finished [`Report`]; failures are carried
//! in the report's `error` field.

use std::collections::BTreeMap;
use std::io::Write;

use implicit_regression::{
    alpha_from_beta, beta_from_alpha, classify_conic, conic_geometry, fit_all_rotations, fit_nonresponse,
    fit_rotation, fit_standard, generate, load_csv, load_csv_multi, parse_terms, pinwheel_data, read_csv_column,
    separation_conic, separation_univariate, univariate_nra, ConicClass, ConicCoeffs, Dataset, Error, FitResult,
    Generated, GeneratorKind, GeneratorSpec, Result, Term,
};

use crate::report::{ConversionReport, Coefficient, ModelDescription, RSquared, Report};
use crate::{Coeffs, ConvertArgs, FitArgs, SimulateArgs};

#[derive(Debug, Clone, PartialEq)]
enum Model {
    NonResponse,
    Rotation(Term),
    Standard,
    Univariate,
}

fn parse_model(s: &str) -> Result<Model> {
    match s.trim() {
        "nonresponse" => Ok(Model::NonResponse),
        "standard" => Ok(Model::Standard),
        "univariate" => Ok(Model::Univariate),
        other => match other.strip_prefix("rotation:") {
            Some(term) => Ok(Model::Rotation(term.trim().parse()?)),
            None => Err(Error::InvalidModel(format!("unknown model `{other}`"))),
        },
    }
}

fn is_xy_pair(terms: &[Term]) -> bool {
    terms.len() == 2 && terms.contains(&Term::X) && terms.contains(&Term::Y)
}

/// Conic coefficients of a non-response fit whose terms all belong to the
/// conic set; absent terms are zero.
fn conic_of(fit: &FitResult<f64>, terms: &[Term]) -> Option<ConicCoeffs<f64>> {
    let set = Term::conic_set();
    if !terms.iter().all(|t| set.contains(t)) {
        return None;
    }
    let mut a = [0.0; 5];
    for (t, &c) in terms.iter().zip(&fit.coeffs) {
        a[set.iter().position(|s| s == t).unwrap()] = c;
    }
    Some(ConicCoeffs::from_slice(&a).unwrap())
}

struct Fitted {
    fit: FitResult<f64>,
    terms: Vec<Term>,
    data: Option<Dataset<f64>>,
}

fn load_xy(a: &FitArgs) -> Result<Dataset<f64>> {
    load_csv(&a.input, &a.x_col, &a.y_col)
}

fn run_fit(a: &FitArgs, model: &Model) -> Result<Fitted> {
    match model {
        Model::Standard => {
            let m = load_csv_multi(&a.input, &a.y_col, a.columns.as_deref())?;
            Ok(Fitted { fit: fit_standard(&m)?, terms: Vec::new(), data: None })
        }
        Model::NonResponse => {
            let terms = parse_terms(&a.terms)?;
            let d = load_xy(a)?;
            let fit = fit_nonresponse(&d, &terms).map_err(|e| match e {
                Error::SingularSystem { .. } if terms.len() == 5 && conic_of_terms(&terms) && d.distinct_points() >= 5 => {
                    Error::NotRepresentable
                }
                e => e,
            })?;
            Ok(Fitted { fit, terms, data: Some(d) })
        }
        Model::Rotation(pivot) => {
            let terms = parse_terms(&a.terms)?;
            let k = terms.iter().position(|t| t == pivot).ok_or_else(|| {
                Error::InvalidModel(format!("rotation pivot `{pivot}` is not in the term list"))
            })?;
            let d = load_xy(a)?;
            Ok(Fitted { fit: fit_rotation(&d, &terms, k)?, terms, data: Some(d) })
        }
        Model::Univariate => unreachable!("handled by the caller"),
    }
}

fn conic_of_terms(terms: &[Term]) -> bool {
    let set = Term::conic_set();
    terms.iter().all(|t| set.contains(t))
}

fn univariate_report(a: &FitArgs) -> Result<Report> {
    let y: Vec<f64> = read_csv_column(std::fs::File::open(&a.input)?, &a.y_col)?;
    let u = univariate_nra(&y)?;
    let mut r = Report::new("fit");
    r.model = Some(ModelDescription {
        kind: "univariate".into(),
        lhs: "1".into(),
        terms: vec![a.y_col.clone()],
        intercept: false,
    });
    r.n = Some(y.len());
    r.coefficients =
        vec![Coefficient { label: a.y_col.clone(), estimate: u.alpha, std_error: None, t_stat: None }];
    r.r_squared = Some(RSquared { value: u.r2, formula: "Eq14-univariate".into() });
    r.self_weighting_mean = u.mu_hat;
    if u.mu_hat.is_none() {
        r.warnings.push(format!("MeanUndefined: {}", Error::MeanUndefined));
    }
    Ok(r)
}

fn attach_conic(r: &mut Report, f: &Fitted) {
    if !matches!(f.fit.kind, implicit_regression::FitKind::NonResponse) {
        return;
    }
    if let Some(c) = conic_of(&f.fit, &f.terms) {
        let class = classify_conic(&c);
        let geometry = matches!(class, ConicClass::Circle | ConicClass::Ellipse)
            .then(|| conic_geometry(&c).ok())
            .flatten();
        r.set_conic(class, geometry);
    }
}

fn fit_report(a: &FitArgs, command: &str) -> Result<Report> {
    let model = parse_model(&a.model)?;
    if model == Model::Univariate {
        let mut r = univariate_report(a)?;
        r.command = command.into();
        return Ok(r);
    }
    let f = run_fit(a, &model)?;
    let mut r = Report::new(command).with_fit(&f.fit);
    attach_conic(&mut r, &f);
    Ok(r)
}

pub fn fit(a: &FitArgs) -> Report {
    fit_report(a, "fit").unwrap_or_else(|e| Report::failed("fit", &e))
}

pub fn rotate_all(a: &FitArgs) -> std::result::Result<Vec<Report>, Report> {
    let go = || -> Result<Vec<Report>> {
        let terms = parse_terms(&a.terms)?;
        let d = load_xy(a)?;
        Ok(fit_all_rotations(&d, &terms)?
            .into_iter()
            .enumerate()
            .map(|(pivot, res)| match res {
                Ok(fit) => Report::new("rotate-all").with_fit(&fit),
                Err(e) => Report {
                    model: Some(ModelDescription {
                        kind: "rotation".into(),
                        lhs: terms[pivot].to_string(),
                        terms: terms.iter().enumerate().filter(|&(k, _)| k != pivot).map(|(_, t)| t.to_string()).collect(),
                        intercept: true,
                    }),
                    ..Report::failed("rotate-all", &e)
                },
            })
            .collect())
    };
    go().map_err(|e| Report::failed("rotate-all", &e))
}

fn diagnose_report(a: &FitArgs) -> Result<Report> {
    let model = parse_model(&a.model)?;
    if model == Model::Univariate {
        return Err(Error::InvalidModel(
            "diagnose needs a nonresponse, rotation or standard model".into(),
        ));
    }
    let f = run_fit(a, &model)?;
    let mut r = Report::new("diagnose").with_fit(&f.fit);
    attach_conic(&mut r, &f);

    let separation = match model {
        Model::NonResponse => match (conic_of(&f.fit, &f.terms), &f.data) {
            (Some(c), Some(d)) => Some(separation_conic(&c, d).map(|(s, rec)| (s, Some(rec.unreconstructed)))),
            _ => {
                r.warnings.push("separation is only defined for conic non-response terms".into());
                None
            }
        },
        _ => Some(separation_univariate(&f.fit.target, &f.fit.fitted).map(|s| (s, None))),
    };
    match separation {
        Some(Ok((s, unreconstructed))) => r.set_separation(&s, unreconstructed),
        Some(Err(e @ (Error::ZeroVariance | Error::PerfectFit))) => {
            r.warnings.push(format!("{}: {e}", crate::report::error_kind(&e)));
        }
        Some(Err(e)) => return Err(e),
        None => {}
    }

    if let (true, Some(d)) = (is_xy_pair(&f.terms), &f.data) {
        match pinwheel_data(d) {
            Ok(p) => r.set_pinwheel(&p),
            Err(e) => r.warnings.push(format!("pinwheel unavailable: {e}")),
        }
    }
    Ok(r)
}

pub fn diagnose(a: &FitArgs) -> Report {
    diagnose_report(a).unwrap_or_else(|e| Report::failed("diagnose", &e))
}

pub fn convert(a: &ConvertArgs) -> Report {
    let (from, to, out) = match a.from {
        Coeffs::Alpha => ("alpha", "beta", beta_from_alpha(&a.coeffs)),
        Coeffs::Beta => ("beta", "alpha", alpha_from_beta(&a.coeffs)),
    };
    match out {
        Ok(output) => Report {
            conversion: Some(ConversionReport {
                from: from.into(),
                to: to.into(),
                input: a.coeffs.clone(),
                output,
            }),
            ..Report::new("convert")
        },
        Err(e) => Report::failed("convert", &e),
    }
}

fn parse_params(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::InvalidSpec(format!("expected key=value, got `{pair}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("`{v}` is not a number")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn generator_kind(kind: &str, params: &str) -> Result<GeneratorKind> {
    let mut p = parse_params(params)?;
    let mut take = |key: &str, default: f64| p.remove(key).unwrap_or(default);
    let kind = match kind {
        "line" => GeneratorKind::Line {
            b0: take("b0", 0.0),
            b1: take("b1", 1.0),
            x_min: take("x_min", 0.0),
            x_max: take("x_max", 1.0),
        },
        "circle" => GeneratorKind::Circle { cx: take("cx", 0.0), cy: take("cy", 0.0), r: take("r", 1.0) },
        "ellipse" => GeneratorKind::Ellipse {
            cx: take("cx", 0.0),
            cy: take("cy", 0.0),
            ax: take("ax", 2.0),
            ay: take("ay", 1.0),
            rot: take("rot", 0.0),
        },
        "normal" => GeneratorKind::ConstantNormal { mu: take("mu", 0.0), sigma: take("sigma", 1.0) },
        "uniform" => GeneratorKind::Uniform { a: take("a", 0.0), b: take("b", 1.0) },
        other => return Err(Error::InvalidSpec(format!("unknown generator `{other}`"))),
    };
    if let Some(extra) = p.keys().next() {
        return Err(Error::InvalidSpec(format!("unknown parameter `{extra}`")));
    }
    Ok(kind)
}

fn write_values<W: Write>(values: &[f64], mut w: W) -> Result<()> {
    writeln!(w, "y")?;
    for v in values {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

fn simulate_inner(a: &SimulateArgs) -> Result<()> {
    let spec = GeneratorSpec::new(generator_kind(&a.kind, &a.params)?, a.n, a.noise, a.seed);
    let mut buf = Vec::new();
    match generate::<f64>(&spec)? {
        Generated::Points(d) => d.write_csv(&mut buf)?,
        Generated::Values(v) => write_values(&v, &mut buf)?,
    }
    match &a.out_file {
        Some(path) => std::fs::write(path, buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

pub fn simulate(a: &SimulateArgs) -> i32 {
    match simulate_inner(a) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("implreg: {e}");
            crate::report::exit_code(&e)
        }
    }
}
