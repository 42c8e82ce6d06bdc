use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{Read, Write};

/// One typed precedence record over requirement indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Precedence {
    /// `source` can only be selected together with `target`.
    RequiresAll { source: usize, target: usize },
    /// `source` needs at least one of `targets`.
    RequiresAny { source: usize, targets: Vec<usize> },
    /// `a` and `b` are never selected together.
    Conflicts { a: usize, b: usize },
    /// Exactly one member is selected.
    ExactlyOne { members: Vec<usize> },
}

impl Precedence {
    fn indices(&self) -> Vec<usize> {
        match self {
            Precedence::RequiresAll { source, target } => vec![*source, *target],
            Precedence::RequiresAny { source, targets } => {
                std::iter::once(*source).chain(targets.iter().copied()).collect()
            }
            Precedence::Conflicts { a, b } => vec![*a, *b],
            Precedence::ExactlyOne { members } => members.clone(),
        }
    }

    pub fn is_satisfied(&self, x: &[bool]) -> bool {
        match self {
            Precedence::RequiresAll { source, target } => !x[*source] || x[*target],
            Precedence::RequiresAny { source, targets } => {
                !x[*source] || targets.iter().any(|&t| x[t])
            }
            Precedence::Conflicts { a, b } => !(x[*a] && x[*b]),
            Precedence::ExactlyOne { members } => members.iter().filter(|&&m| x[m]).count() == 1,
        }
    }

    /// Pairwise records this constraint contributes to PDL, and how many are negative.
    fn pair_counts(&self) -> (usize, usize) {
        match self {
            Precedence::RequiresAll { .. } => (1, 0),
            Precedence::Conflicts { .. } => (1, 1),
            Precedence::RequiresAny { targets, .. } => (targets.len(), 0),
            Precedence::ExactlyOne { members } => {
                let pairs = members.len() * (members.len() - 1) / 2;
                (pairs, pairs)
            }
        }
    }
}

/// Requires/conflicts structure over the requirements.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecedenceGraph {
    ids: Vec<String>,
    constraints: Vec<Precedence>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
    #[serde(default)]
    targets: Vec<String>,
}

impl PrecedenceGraph {
    pub fn new(ids: Vec<String>) -> Self {
        PrecedenceGraph {
            ids,
            constraints: Vec::new(),
        }
    }

    pub fn with_size(n: usize) -> Self {
        PrecedenceGraph::new((1..=n).map(|i| format!("r{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn constraints(&self) -> &[Precedence] {
        &self.constraints
    }

    pub fn add(&mut self, c: Precedence) -> Result<()> {
        let n = self.len();
        if let Some(&bad) = c.indices().iter().find(|&&i| i >= n) {
            return Err(Error::invalid(format!("requirement index {bad} out of range for {n}")));
        }
        match &c {
            Precedence::RequiresAll { source, target } if source == target => {
                return Err(Error::invalid("a requirement cannot require itself"));
            }
            Precedence::Conflicts { a, b } if a == b => {
                return Err(Error::invalid("a requirement cannot conflict with itself"));
            }
            Precedence::RequiresAny { targets, .. } if targets.is_empty() => {
                return Err(Error::invalid("requires_any needs at least one target"));
            }
            Precedence::ExactlyOne { members } if members.len() < 2 => {
                return Err(Error::invalid("exactly_one needs at least two members"));
            }
            _ => {}
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Whether the selection `x` violates no record.
    pub fn is_satisfied(&self, x: &[bool]) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    /// Precedence dependency level and negative share. NPDL is `None` without records.
    pub fn pdl_npdl<T: Scalar>(&self) -> Result<(T, Option<T>)> {
        let n = self.len();
        if n < 2 {
            return Err(Error::invalid("PDL needs at least two requirements"));
        }
        let (k, j) = self
            .constraints
            .iter()
            .map(Precedence::pair_counts)
            .fold((0, 0), |(k, j), (a, b)| (k + a, j + b));
        let pdl = T::from_usize_lossy(k) / T::from_usize_lossy(n * (n - 1));
        let npdl = (k > 0).then(|| T::from_usize_lossy(j) / T::from_usize_lossy(k));
        Ok((pdl, npdl))
    }

    /// Reads the JSON array form, resolving ids against `ids`.
    pub fn from_json<R: Read>(source: R, ids: &[String]) -> Result<Self> {
        let records: Vec<Record> = serde_json::from_reader(source)?;
        let lookup: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let find = |id: &str| {
            lookup
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownId(id.to_string()))
        };
        let mut g = PrecedenceGraph::new(ids.to_vec());
        for (pos, r) in records.iter().enumerate() {
            let at = |e: Error| Error::invalid(format!("constraint #{}: {e}", pos + 1));
            let targets = r
                .targets
                .iter()
                .map(|t| find(t))
                .collect::<Result<Vec<_>>>()
                .map_err(at)?;
            let source = r.source.as_deref().map(find).transpose().map_err(at)?;
            let need_source = || source.ok_or_else(|| at(Error::invalid("missing `source`")));
            let built: Vec<Precedence> = match r.kind.as_str() {
                "requires_all" => {
                    let s = need_source()?;
                    targets
                        .iter()
                        .map(|&t| Precedence::RequiresAll { source: s, target: t })
                        .collect()
                }
                "requires_any" => vec![Precedence::RequiresAny {
                    source: need_source()?,
                    targets,
                }],
                "conflicts" => {
                    let s = need_source()?;
                    targets.iter().map(|&t| Precedence::Conflicts { a: s, b: t }).collect()
                }
                "exactly_one" => vec![Precedence::ExactlyOne {
                    members: source.into_iter().chain(targets).collect(),
                }],
                other => return Err(at(Error::invalid(format!("unknown type `{other}`")))),
            };
            if built.is_empty() {
                return Err(at(Error::invalid("no targets")));
            }
            for c in built {
                g.add(c).map_err(at)?;
            }
        }
        Ok(g)
    }

    pub fn to_json<W: Write>(&self, sink: W) -> Result<()> {
        let id = |i: usize| self.ids[i].clone();
        let records: Vec<Record> = self
            .constraints
            .iter()
            .map(|c| match c {
                Precedence::RequiresAll { source, target } => Record {
                    kind: "requires_all".into(),
                    source: Some(id(*source)),
                    targets: vec![id(*target)],
                },
                Precedence::RequiresAny { source, targets } => Record {
                    kind: "requires_any".into(),
                    source: Some(id(*source)),
                    targets: targets.iter().map(|&t| id(t)).collect(),
                },
                Precedence::Conflicts { a, b } => Record {
                    kind: "conflicts".into(),
                    source: Some(id(*a)),
                    targets: vec![id(*b)],
                },
                Precedence::ExactlyOne { members } => Record {
                    kind: "exactly_one".into(),
                    source: Some(id(members[0])),
                    targets: members[1..].iter().map(|&t| id(t)).collect(),
                },
            })
            .collect();
        serde_json::to_writer_pretty(sink, &records)?;
        Ok(())
    }
}
