use super::model::{LinearModel, Sense, VarKind};
use crate::error::Result;
use crate::scalar::Scalar;
use std::io::{BufWriter, Write};

const TERMS_PER_LINE: usize = 8;

/// Writes the model in CPLEX LP format.
pub fn export_lp<T: Scalar, W: Write>(m: &LinearModel<T>, sink: W) -> Result<()> {
    let mut w = BufWriter::new(sink);
    let names: Vec<String> = m.variables.iter().map(|v| sanitize(&v.name)).collect();
    writeln!(w, "\\ {} model, {} variables, {} rows", m.meta.kind, names.len(), m.constraints.len())?;
    writeln!(
        w,
        "{}",
        match m.sense {
            Sense::Maximize => "Maximize",
            Sense::Minimize => "Minimize",
        }
    )?;
    write!(w, " obj:")?;
    write_terms(&mut w, &m.objective, &names)?;
    writeln!(w)?;
    writeln!(w, "Subject To")?;
    for c in &m.constraints {
        write!(w, " {}:", sanitize(&c.name))?;
        write_terms(&mut w, &c.terms, &names)?;
        writeln!(w, " {} {}", c.relation.symbol(), number(c.rhs))?;
    }
    writeln!(w, "Bounds")?;
    for (v, name) in m.variables.iter().zip(&names) {
        if v.kind == VarKind::Continuous {
            writeln!(w, " {} <= {} <= {}", number(v.lower), name, number(v.upper))?;
        }
    }
    let binaries: Vec<&String> = m
        .variables
        .iter()
        .zip(&names)
        .filter(|(v, _)| v.kind == VarKind::Binary)
        .map(|(_, n)| n)
        .collect();
    if !binaries.is_empty() {
        writeln!(w, "Binary")?;
        for chunk in binaries.chunks(TERMS_PER_LINE) {
            let line: Vec<&str> = chunk.iter().map(|s| s.as_str()).collect();
            writeln!(w, " {}", line.join(" "))?;
        }
    }
    writeln!(w, "End")?;
    w.flush()?;
    Ok(())
}

pub fn lp_string<T: Scalar>(m: &LinearModel<T>) -> String {
    let mut buf = Vec::new();
    export_lp(m, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("LP text is ASCII")
}

fn write_terms<T: Scalar, W: Write>(w: &mut W, terms: &[(usize, T)], names: &[String]) -> Result<()> {
    let nonzero: Vec<&(usize, T)> = terms.iter().filter(|(_, c)| *c != T::zero()).collect();
    if nonzero.is_empty() {
        // LP rows need at least one term
        write!(w, " 0 {}", names.first().map_or("x", |s| s.as_str()))?;
        return Ok(());
    }
    for (k, &&(v, c)) in nonzero.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            write!(w, "\n   ")?;
        }
        let (sign, mag) = if c < T::zero() { ("-", -c) } else { ("+", c) };
        if k == 0 && sign == "+" {
            write!(w, " {} {}", number(mag), names[v])?;
        } else {
            write!(w, " {} {} {}", sign, number(mag), names[v])?;
        }
    }
    Ok(())
}

fn number<T: Scalar>(v: T) -> String {
    let f = v.as_f64();
    if f == f.trunc() && f.abs() < 1e15 {
        format!("{}", f as i64)
    } else {
        format!("{f}")
    }
}

/// LP names: letters, digits and `_ . !`, not starting with a digit, `.` or `e`.
fn sanitize(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "_.!".contains(c) { c } else { '_' })
        .collect();
    let first = s.chars().next().unwrap_or('0');
    if first.is_ascii_digit() || first == '.' || first == 'e' || first == 'E' {
        s.insert(0, '_');
    }
    s
}
