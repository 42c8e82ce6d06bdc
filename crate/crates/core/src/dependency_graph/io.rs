use super::closure::InfluenceMatrix;
use super::vdg::{Quality, ValueDependencyGraph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::io::{Read, Write};

/// Reads `from,to,strength,quality` rows. A leading `from,to,...` header is skipped.
///
/// With `ids` given, endpoints must name those requirements; otherwise nodes are
/// collected in order of first appearance.
pub fn load_vdg_csv<R: Read>(source: R, ids: Option<&[String]>) -> Result<ValueDependencyGraph<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 4 {
            return Err(Error::format(line, 1, format!("expected 4 fields, found {}", rec.len())));
        }
        if rows.is_empty() && rec[0].eq_ignore_ascii_case("from") {
            continue;
        }
        let strength: f64 = rec[2]
            .parse()
            .map_err(|_| Error::format(line, 3, format!("`{}` is not a number", &rec[2])))?;
        let quality = match Quality::parse(&rec[3]) {
            Some(q @ (Quality::Positive | Quality::Negative)) => q,
            _ => return Err(Error::format(line, 4, format!("quality `{}` is not + or -", &rec[3]))),
        };
        rows.push((line, rec[0].to_string(), rec[1].to_string(), strength, quality));
    }
    let names: Vec<String> = match ids {
        Some(ids) => ids.to_vec(),
        None => {
            let mut names: Vec<String> = Vec::new();
            for (_, a, b, _, _) in &rows {
                for x in [a, b] {
                    if !names.contains(x) {
                        names.push(x.clone());
                    }
                }
            }
            names
        }
    };
    let mut g = ValueDependencyGraph::new(names)?;
    for (line, a, b, s, q) in rows {
        let i = g.index_of(&a).ok_or_else(|| Error::format(line, 1, format!("unknown requirement `{a}`")))?;
        let j = g.index_of(&b).ok_or_else(|| Error::format(line, 2, format!("unknown requirement `{b}`")))?;
        if g.edge(i, j).is_some() {
            return Err(Error::format(line, 1, format!("duplicate edge {a} -> {b}")));
        }
        g.add_edge(i, j, s, q).map_err(|e| Error::format(line, 3, e.to_string()))?;
    }
    Ok(g)
}

pub fn write_vdg_csv<T: Scalar, W: Write>(g: &ValueDependencyGraph<T>, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["from", "to", "strength", "quality"])?;
    for (i, j, e) in g.edges() {
        w.write_record([
            g.ids()[i].as_str(),
            g.ids()[j].as_str(),
            &e.strength.as_f64().to_string(),
            e.quality.symbol(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Square matrix of net influences, one row per requirement.
pub fn write_influence_csv<T: Scalar, W: Write>(m: &InfluenceMatrix<T>, ids: &[String], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["req_id".to_string()];
    header.extend(ids.iter().cloned());
    w.write_record(&header)?;
    for (i, id) in ids.iter().enumerate() {
        let mut row = vec![id.clone()];
        row.extend((0..m.len()).map(|j| m.influence(i, j).as_f64().to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Long form `from,to,pos,neg,influence` for pairs with any propagated strength.
pub fn write_influence_long<T: Scalar, W: Write>(m: &InfluenceMatrix<T>, ids: &[String], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["from", "to", "pos", "neg", "influence"])?;
    for i in 0..m.len() {
        for j in 0..m.len() {
            let (p, q) = (m.pos(i, j), m.neg(i, j));
            if p == T::zero() && q == T::zero() {
                continue;
            }
            w.write_record([
                ids[i].clone(),
                ids[j].clone(),
                p.as_f64().to_string(),
                q.as_f64().to_string(),
                m.influence(i, j).as_f64().to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads the square form written by [`write_influence_csv`] as net influences.
pub fn load_influence_csv<R: Read>(source: R) -> Result<(Vec<String>, InfluenceMatrix<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        ids.push(rec[0].to_string());
        let row = rec
            .iter()
            .skip(1)
            .enumerate()
            .map(|(c, v)| {
                v.parse::<f64>()
                    .map_err(|_| Error::format(line, c + 2, format!("`{v}` is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let m = InfluenceMatrix::from_influence(&rows)?;
    Ok((ids, m))
}
