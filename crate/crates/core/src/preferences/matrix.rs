use crate::error::{Error, Result};
use std::collections::HashSet;
use std::io::{Read, Write};

/// Binary requirements × users selection records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceMatrix {
    requirement_ids: Vec<String>,
    user_ids: Vec<String>,
    // row-major, one row per requirement
    cells: Vec<u8>,
}

impl PreferenceMatrix {
    pub fn new(
        requirement_ids: Vec<String>,
        user_ids: Vec<String>,
        rows: Vec<Vec<u8>>,
    ) -> Result<Self> {
        let n = requirement_ids.len();
        let k = user_ids.len();
        if n == 0 {
            return Err(Error::invalid("preference matrix needs at least one requirement"));
        }
        if k == 0 {
            return Err(Error::invalid("preference matrix needs at least one user"));
        }
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        ensure_unique(&requirement_ids)?;
        ensure_unique(&user_ids)?;
        let mut cells = Vec::with_capacity(n * k);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: row.len(),
                });
            }
            if let Some(t) = row.iter().position(|&c| c > 1) {
                return Err(Error::invalid(format!(
                    "cell ({}, {}) = {} is not binary",
                    requirement_ids[i], user_ids[t], row[t]
                )));
            }
            cells.extend(row);
        }
        Ok(Self {
            requirement_ids,
            user_ids,
            cells,
        })
    }

    /// Builds a matrix with generated ids `r1..rn` and `u1..uk`.
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        Self::new(
            (1..=n).map(|i| format!("r{i}")).collect(),
            (1..=k).map(|t| format!("u{t}")).collect(),
            rows,
        )
    }

    pub fn requirements(&self) -> usize {
        self.requirement_ids.len()
    }

    pub fn users(&self) -> usize {
        self.user_ids.len()
    }

    pub fn requirement_ids(&self) -> &[String] {
        &self.requirement_ids
    }

    pub fn user_ids(&self) -> &[String] {
        &self.user_ids
    }

    #[inline]
    pub fn get(&self, requirement: usize, user: usize) -> bool {
        self.cells[requirement * self.users() + user] == 1
    }

    #[inline]
    pub fn row(&self, requirement: usize) -> &[u8] {
        let k = self.users();
        &self.cells[requirement * k..(requirement + 1) * k]
    }

    pub fn row_sum(&self, requirement: usize) -> usize {
        self.row(requirement).iter().map(|&c| c as usize).sum()
    }

    /// Requirements chosen by every user or by none.
    pub fn degenerate_rows(&self) -> Vec<usize> {
        (0..self.requirements())
            .filter(|&i| {
                let s = self.row_sum(i);
                s == 0 || s == self.users()
            })
            .collect()
    }

    /// Copy without the rows in `drop` (indices into the current matrix).
    pub fn without_rows(&self, drop: &[usize]) -> Result<Self> {
        let keep: Vec<usize> = (0..self.requirements())
            .filter(|i| !drop.contains(i))
            .collect();
        Self::new(
            keep.iter().map(|&i| self.requirement_ids[i].clone()).collect(),
            self.user_ids.clone(),
            keep.iter().map(|&i| self.row(i).to_vec()).collect(),
        )
    }

    /// Reorders the user columns: column `t` of the result is column `order[t]` of `self`.
    pub fn permute_users(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.users() {
            return Err(Error::DimensionMismatch {
                expected: self.users(),
                found: order.len(),
            });
        }
        Self::new(
            self.requirement_ids.clone(),
            order.iter().map(|&t| self.user_ids[t].clone()).collect(),
            (0..self.requirements())
                .map(|i| order.iter().map(|&t| self.row(i)[t]).collect())
                .collect(),
        )
    }

    /// Reorders the requirement rows: row `i` of the result is row `order[i]` of `self`.
    pub fn permute_requirements(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.requirements() {
            return Err(Error::DimensionMismatch {
                expected: self.requirements(),
                found: order.len(),
            });
        }
        Self::new(
            order.iter().map(|&i| self.requirement_ids[i].clone()).collect(),
            self.user_ids.clone(),
            order.iter().map(|&i| self.row(i).to_vec()).collect(),
        )
    }

    /// Writes `req_id,u1,u2,...` followed by one 0/1 row per requirement.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        let mut header = Vec::with_capacity(self.users() + 1);
        header.push("req_id".to_string());
        header.extend(self.user_ids.iter().cloned());
        w.write_record(&header)?;
        for i in 0..self.requirements() {
            let mut rec = Vec::with_capacity(self.users() + 1);
            rec.push(self.requirement_ids[i].clone());
            rec.extend(self.row(i).iter().map(|c| c.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn ensure_unique(ids: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    Ok(())
}

fn parse_cell(raw: &str) -> Option<u8> {
    match raw {
        "0" => Some(0),
        "1" => Some(1),
        _ => None,
    }
}

/// Reads a preference matrix from CSV.
///
/// The first column holds requirement ids and the remaining columns 0/1 cells.
/// A first row whose first data cell is not binary is taken as a header of user
/// ids. Lines starting with `#` are ignored.
pub fn load_preference_matrix<R: Read>(source: R) -> Result<PreferenceMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source);

    let mut user_ids: Option<Vec<String>> = None;
    let mut requirement_ids = Vec::new();
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut width: Option<usize> = None;

    for (index, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(index + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() < 2 {
            return Err(Error::format(line, 2, "row has no preference cells"));
        }
        let is_first = user_ids.is_none() && rows.is_empty();
        if is_first && parse_cell(&record[1]).is_none() {
            user_ids = Some(record.iter().skip(1).map(str::to_string).collect());
            width = Some(record.len());
            continue;
        }
        match width {
            Some(w) if w != record.len() => {
                return Err(Error::format(
                    line,
                    w.min(record.len()) + 1,
                    format!("expected {} fields, found {}", w, record.len()),
                ));
            }
            None => width = Some(record.len()),
            _ => {}
        }
        let id = record[0].to_string();
        if id.is_empty() {
            return Err(Error::format(line, 1, "empty requirement id"));
        }
        let mut row = Vec::with_capacity(record.len() - 1);
        for (c, raw) in record.iter().enumerate().skip(1) {
            match parse_cell(raw) {
                Some(v) => row.push(v),
                None => {
                    return Err(Error::format(
                        line,
                        c + 1,
                        format!("cell `{raw}` is not 0 or 1"),
                    ))
                }
            }
        }
        if requirement_ids.contains(&id) {
            return Err(Error::DuplicateId(id));
        }
        requirement_ids.push(id);
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(Error::format(1, 1, "no preference rows"));
    }
    let k = rows[0].len();
    let user_ids = user_ids.unwrap_or_else(|| (1..=k).map(|t| format!("u{t}")).collect());
    PreferenceMatrix::new(requirement_ids, user_ids, rows)
}
