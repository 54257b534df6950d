//! Plain-text certificate dumps: a header `operator level n`, one
//! `ones_mask zeros_mask` line per family member, then the matrix as CSV.

use std::fmt::Write;

use crate::combinatorics::{Cylinder, IndexFamily};
use crate::error::{Error, Result};
use crate::symmat::SymMatrix;

use super::lasserre::LasCertificate;
use super::sa_plus::SaPlusCertificate;

/// Operator tag written in the header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertOperator {
    SaPlus,
    Las,
}

impl CertOperator {
    pub fn as_str(self) -> &'static str {
        match self {
            CertOperator::SaPlus => "sa-plus",
            CertOperator::Las => "las",
        }
    }
}

/// Parsed certificate file.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateDump {
    pub operator: CertOperator,
    pub level: usize,
    pub n: usize,
    /// `(ones, zeros)` masks in matrix order.
    pub members: Vec<(u32, u32)>,
    pub y: SymMatrix,
}

impl CertificateDump {
    /// Fails unless the listed members are exactly `fam` in order.
    pub fn expect_family(&self, fam: &IndexFamily) -> Result<()> {
        let ok = fam.len() == self.members.len()
            && fam.iter().zip(&self.members).all(|(c, &(o, z))| c.ones().0 == o && c.zeros().0 == z);
        if ok {
            Ok(())
        } else {
            Err(Error::Parse { line: 2, msg: "index family does not match operator, level and n".into() })
        }
    }
}

fn dump(op: CertOperator, level: usize, n: usize, members: &[Cylinder], y: &SymMatrix) -> String {
    let mut out = format!("{} {level} {n}\n", op.as_str());
    for c in members {
        let _ = writeln!(out, "{} {}", c.ones().0, c.zeros().0);
    }
    out.push_str(&y.to_csv());
    out
}

pub fn dump_sa_plus(cert: &SaPlusCertificate) -> String {
    dump(CertOperator::SaPlus, cert.level, cert.n, cert.family.members(), &cert.y)
}

pub fn dump_las(cert: &LasCertificate) -> String {
    dump(CertOperator::Las, cert.level, cert.n, cert.family.members(), &cert.y)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_certificate(text: &str) -> Result<CertificateDump> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [op, level, n] = head[..] else {
        return Err(parse_err(1, "header must be `operator level n`"));
    };
    let operator = match op {
        "sa-plus" => CertOperator::SaPlus,
        "las" => CertOperator::Las,
        other => return Err(parse_err(1, format!("unknown operator `{other}`"))),
    };
    let level = level.parse().map_err(|_| parse_err(1, "level is not an integer"))?;
    let n = n.parse().map_err(|_| parse_err(1, "n is not an integer"))?;
    let mut members = Vec::new();
    let mut csv = String::new();
    let mut first_csv = None;
    for (no, line) in lines {
        if first_csv.is_some() || line.contains([',', '.', 'e', 'E']) {
            first_csv.get_or_insert(no + 1);
            csv.push_str(line);
            csv.push('\n');
            continue;
        }
        let parts: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(no + 1, e.to_string()))?;
        let [o, z] = parts[..] else {
            return Err(parse_err(no + 1, "family line must be `ones_mask zeros_mask`"));
        };
        members.push((o, z));
    }
    let y = SymMatrix::from_csv(&csv).map_err(|e| match e {
        Error::Parse { line, msg } => parse_err(line + first_csv.unwrap_or(1) - 1, msg),
        other => other,
    })?;
    if y.dim() != members.len() {
        return Err(Error::DimensionMismatch { expected: members.len(), actual: y.dim() });
    }
    Ok(CertificateDump { operator, level, n, members, y })
}
