//! Expected value, dependency penalties and overall value of a selection.

use crate::dependency_graph::InfluenceMatrix;
use crate::error::{Error, Result};
use crate::scalar::{sum, Scalar};
use std::io::{Read, Write};

#[derive(Debug, Clone, PartialEq)]
pub struct Requirement<T> {
    pub id: String,
    pub name: String,
    pub cost: T,
    pub value: T,
    /// Share of users who select the requirement.
    pub probability: T,
}

impl<T: Scalar> Requirement<T> {
    pub fn new(id: impl Into<String>, cost: T, value: T, probability: T) -> Result<Self> {
        let id = id.into();
        let r = Requirement {
            name: id.clone(),
            id,
            cost,
            value,
            probability,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cost < T::zero() || self.value < T::zero() {
            return Err(Error::invalid(format!("`{}` has a negative cost or value", self.id)));
        }
        if self.probability < T::zero() || self.probability > T::one() {
            return Err(Error::invalid(format!(
                "`{}` has probability {} outside [0, 1]",
                self.id, self.probability
            )));
        }
        Ok(())
    }

    pub fn expected_value(&self) -> T {
        self.probability * self.value
    }

    pub fn convert<U: Scalar>(&self) -> Requirement<U> {
        Requirement {
            id: self.id.clone(),
            name: self.name.clone(),
            cost: U::from_f64_lossy(self.cost.as_f64()),
            value: U::from_f64_lossy(self.value.as_f64()),
            probability: U::from_f64_lossy(self.probability.as_f64()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionEvaluation<T> {
    pub selection: Vec<bool>,
    pub theta: Vec<T>,
    pub av: T,
    pub ev: T,
    pub ov: T,
}

/// θ_i = max over j ≠ i of `(|I_ij| + (1 - 2x_j) I_ij) / 2`: the strongest positive
/// influence left out or negative influence brought in. Reported for every `i`.
pub fn penalties<T: Scalar>(inf: &InfluenceMatrix<T>, x: &[bool]) -> Result<Vec<T>> {
    let n = inf.len();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| penalty_term(inf.influence(i, j), x[j]))
                .fold(T::zero(), T::max_of)
        })
        .collect())
}

/// `(|I| + (1 - 2x) I) / 2`.
pub fn penalty_term<T: Scalar>(influence: T, selected: bool) -> T {
    let sign = if selected { -T::one() } else { T::one() };
    (influence.abs() + sign * influence).half()
}

pub fn evaluate_selection<T: Scalar>(
    reqs: &[Requirement<T>],
    inf: &InfluenceMatrix<T>,
    x: &[bool],
) -> Result<SelectionEvaluation<T>> {
    if reqs.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: reqs.len(),
            found: x.len(),
        });
    }
    let theta = penalties(inf, x)?;
    let chosen = || reqs.iter().zip(x).filter(|(_, &s)| s).map(|(r, _)| r);
    let av = sum(chosen().map(|r| r.value));
    let ev = sum(chosen().map(|r| r.expected_value()));
    let ov = sum(
        reqs.iter()
            .zip(x)
            .zip(&theta)
            .filter(|((_, &s), _)| s)
            .map(|((r, _), &t)| (T::one() - t) * r.expected_value()),
    );
    Ok(SelectionEvaluation {
        selection: x.to_vec(),
        theta,
        av,
        ev,
        ov,
    })
}

/// Reads `id,name,cost,value,probability` rows; a header row is expected.
pub fn load_requirements<R: Read>(source: R) -> Result<Vec<Requirement<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut out: Vec<Requirement<f64>> = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 5 {
            return Err(Error::format(line, 1, format!("expected 5 fields, found {}", rec.len())));
        }
        let num = |c: usize| {
            rec[c]
                .parse::<f64>()
                .map_err(|_| Error::format(line, c + 1, format!("`{}` is not a number", &rec[c])))
        };
        let id = rec[0].to_string();
        if id.is_empty() {
            return Err(Error::format(line, 1, "empty requirement id"));
        }
        if out.iter().any(|r| r.id == id) {
            return Err(Error::DuplicateId(id));
        }
        let r = Requirement {
            id,
            name: rec[1].to_string(),
            cost: num(2)?,
            value: num(3)?,
            probability: num(4)?,
        };
        let column = if r.cost < 0.0 {
            3
        } else if r.value < 0.0 {
            4
        } else {
            5
        };
        r.validate().map_err(|e| Error::format(line, column, e.to_string()))?;
        out.push(r);
    }
    if out.is_empty() {
        return Err(Error::format(1, 1, "no requirements"));
    }
    Ok(out)
}

pub fn write_requirements<T: Scalar, W: Write>(reqs: &[Requirement<T>], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["id", "name", "cost", "value", "probability"])?;
    for r in reqs {
        w.write_record([
            r.id.clone(),
            r.name.clone(),
            r.cost.as_f64().to_string(),
            r.value.as_f64().to_string(),
            r.probability.as_f64().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
