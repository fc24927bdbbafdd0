//! Model specifications and design-matrix construction.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::term::{format_terms, Term};

/// What sits on the left-hand side of an implicit model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lhs {
    /// `1 = Σ α_k T_k` (non-response analysis).
    Unity,
    /// Term `j` of the term list is rotated into the response slot.
    Term(usize),
    /// The observed `y` column is the response; right-hand terms must be free of `y`.
    Response,
}

/// A validated model: a term list, the left-hand side, and an intercept flag.
///
/// For `Lhs::Term(j)` the term list still contains the pivot at index `j`;
/// [`ModelSpec::rhs_terms`] excludes it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    lhs: Lhs,
    terms: Vec<Term>,
    intercept: bool,
}

impl ModelSpec {
    pub fn new(lhs: Lhs, terms: Vec<Term>, intercept: bool) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if terms[..i].contains(t) {
                return Err(Error::DuplicateTerm(t.label()));
            }
        }
        match lhs {
            Lhs::Unity if intercept => {
                return Err(Error::InvalidModel(
                    "non-response models have no intercept".into(),
                ))
            }
            Lhs::Term(j) if j >= terms.len() => {
                return Err(Error::InvalidModel(format!(
                    "pivot {j} out of range for {} terms",
                    terms.len()
                )))
            }
            Lhs::Response if terms.iter().any(|t| t.y_exp != 0.0) => {
                return Err(Error::InvalidModel(
                    "response models cannot use y on the right-hand side".into(),
                ))
            }
            _ => {}
        }
        if intercept && terms.iter().any(Term::is_one) {
            return Err(Error::InvalidModel("constant term duplicates the intercept".into()));
        }
        let spec = ModelSpec { lhs, terms, intercept };
        if spec.rhs_terms().is_empty() {
            return Err(Error::InvalidModel("no right-hand-side terms".into()));
        }
        Ok(spec)
    }

    /// `1 = Σ α_k T_k`.
    pub fn nonresponse(terms: Vec<Term>) -> Result<Self> {
        Self::new(Lhs::Unity, terms, false)
    }

    /// `T_pivot = α_0 + Σ_{k≠pivot} α_k T_k`.
    pub fn rotation(terms: Vec<Term>, pivot: usize) -> Result<Self> {
        Self::new(Lhs::Term(pivot), terms, true)
    }

    pub fn lhs(&self) -> Lhs {
        self.lhs
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn intercept(&self) -> bool {
        self.intercept
    }

    pub fn pivot(&self) -> Option<Term> {
        match self.lhs {
            Lhs::Term(j) => Some(self.terms[j]),
            _ => None,
        }
    }

    pub fn rhs_terms(&self) -> Vec<Term> {
        match self.lhs {
            Lhs::Term(j) => self
                .terms
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, t)| *t)
                .collect(),
            _ => self.terms.clone(),
        }
    }

    /// Number of design columns, intercept included.
    pub fn n_columns(&self) -> usize {
        self.rhs_terms().len() + usize::from(self.intercept)
    }

    pub fn lhs_label(&self) -> String {
        match self.lhs {
            Lhs::Unity => "1".into(),
            Lhs::Term(j) => self.terms[j].label(),
            Lhs::Response => "y".into(),
        }
    }

    /// Column labels in design order; the intercept is labelled `1`.
    pub fn column_labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.intercept {
            out.push("1".to_string());
        }
        out.extend(self.rhs_terms().iter().map(Term::label));
        out
    }

    pub fn describe(&self) -> String {
        let mut rhs = self.column_labels();
        if rhs.first().map(String::as_str) == Some("1") {
            rhs[0] = "a0".into();
        }
        format!("{} = f({}) [terms: {}]", self.lhs_label(), rhs.join(", "), format_terms(&self.terms))
    }
}

/// Evaluates one term on every observation.
pub fn evaluate_term<T: Scalar>(d: &Dataset<T>, term: &Term) -> Result<Vec<T>> {
    d.points()
        .enumerate()
        .map(|(i, (x, y))| {
            term.eval(x, y).ok_or_else(|| Error::Domain { row: i + 1, term: term.label() })
        })
        .collect()
}

/// Builds the design matrix `W` (intercept column first when present) and the
/// target vector `t` for a model.
pub fn design_matrix<T: Scalar>(d: &Dataset<T>, spec: &ModelSpec) -> Result<(Matrix<T>, Vec<T>)> {
    let n = d.n();
    let rhs = spec.rhs_terms();
    let mut columns: Vec<Vec<T>> = Vec::with_capacity(spec.n_columns());
    if spec.intercept() {
        columns.push(vec![T::one(); n]);
    }
    for term in &rhs {
        columns.push(evaluate_term(d, term)?);
    }
    let target = match spec.lhs() {
        Lhs::Unity => vec![T::one(); n],
        Lhs::Term(j) => evaluate_term(d, &spec.terms()[j])?,
        Lhs::Response => d.y().to_vec(),
    };
    if n < columns.len() {
        return Err(Error::Underdetermined { rows: n, cols: columns.len() });
    }
    Ok((Matrix::from_columns(&columns), target))
}
