//! Plain-text, CSV and fixed-point renderings of blocks, tables and brackets.
//!
//! Every rendering except `float` parses back to the exact values it came from.

use std::fmt;
use std::str::FromStr;

use crate::chain::angmom::{Chain3Brackets, Chain3Key, Chain3Row};
use crate::chain::isospin::{Chain2Brackets, Chain2Key, Chain2Row};
use crate::chain::BracketSet;
use crate::error::{Error, Result};
use crate::exact::RadicalSum;
use crate::halfint::HalfInt;
use crate::racah::{Column, Conventions, CouplingKey, IsoscalarBlock};
use crate::so4::{So4Irrep, So4Weight};
use crate::so5::WeightState;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
    Float { digits: u32 },
}

impl Format {
    /// Largest supported `float` precision.
    pub const MAX_DIGITS: u32 = 30;

    pub fn parse_with_digits(name: &str, digits: u32) -> Result<Format> {
        match name {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "float" if digits <= Self::MAX_DIGITS => Ok(Format::Float { digits }),
            "float" => Err(Error::Parse(format!("at most {} digits supported", Self::MAX_DIGITS))),
            _ => Err(Error::Parse(format!("unknown format {name:?}"))),
        }
    }
}

/// A titled grid of string cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub title: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn is_value_column(name: &str) -> bool {
    name == "value" || name.starts_with("rho")
}

impl Table {
    fn new(title: Option<String>, header: &[&str]) -> Table {
        Table { title, header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.header.iter().position(|h| h == name).ok_or_else(|| Error::Parse(format!("missing column {name:?}")))
    }

    fn value_columns(&self) -> Vec<usize> {
        (0..self.header.len()).filter(|&i| is_value_column(&self.header[i])).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn parse_csv(text: &str) -> Result<Table> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| Error::Parse(e.to_string()))?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(|e| Error::Parse(e.to_string()))?.iter().map(String::from).collect());
        }
        Ok(Table { title: None, header, rows })
    }

    pub fn to_text(&self) -> String {
        let mut width: Vec<usize> = self.header.iter().map(String::len).collect();
        for r in &self.rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        if let Some(t) = &self.title {
            out.push_str(&format!("# {t}\n"));
        }
        for r in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = r.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Table> {
        let mut title = None;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let mut header = None;
        for l in lines.by_ref() {
            if let Some(t) = l.strip_prefix("# ") {
                title = Some(t.to_string());
            } else {
                header = Some(l.split_whitespace().map(String::from).collect::<Vec<_>>());
                break;
            }
        }
        let header = header.ok_or_else(|| Error::Parse("empty table".into()))?;
        let rows: Vec<Vec<String>> = lines.map(|l| l.split_whitespace().map(String::from).collect()).collect();
        if let Some(bad) = rows.iter().find(|r| r.len() != header.len()) {
            return Err(Error::Parse(format!("row has {} cells, header has {}", bad.len(), header.len())));
        }
        Ok(Table { title, header, rows })
    }

    /// Replace every exact value cell by its correctly rounded decimal.
    pub fn to_float(&self, digits: u32) -> Result<Table> {
        let cols = self.value_columns();
        let mut t = self.clone();
        for r in &mut t.rows {
            for &c in &cols {
                r[c] = r[c].parse::<RadicalSum>()?.to_decimal(digits);
            }
        }
        Ok(t)
    }

    /// Render as text, CSV or fixed-point text. JSON is handled by the store records.
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Text => Ok(self.to_text()),
            Format::Csv => Ok(self.to_csv()),
            Format::Float { digits } => Ok(self.to_float(digits)?.to_text()),
            Format::Json => Err(Error::Parse("tables have no json rendering".into())),
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("value serializes");
    s.push('\n');
    s
}

fn rho_headers(n: usize) -> Vec<String> {
    (1..=n).map(|r| format!("rho{r}")).collect()
}

fn cell<T: FromStr<Err = Error>>(t: &Table, row: &[String], name: &str) -> Result<T> {
    row[t.column(name)?].parse()
}

fn count_cell(t: &Table, row: &[String], name: &str) -> Result<usize> {
    row[t.column(name)?].parse().map_err(|_| Error::Parse(format!("bad count in column {name:?}")))
}

fn rho_values(t: &Table, row: &[String]) -> Result<Vec<RadicalSum>> {
    t.value_columns().into_iter().map(|c| row[c].parse()).collect()
}

pub fn block_table(b: &IsoscalarBlock) -> Table {
    let mut t = Table::new(Some(b.key.to_string()), &["x1y1", "x2y2", "xy"]);
    t.header.extend(rho_headers(b.multiplicity()));
    for (i, c) in b.columns.iter().enumerate() {
        let mut r = vec![c.x1y1.to_string(), c.x2y2.to_string(), c.xy.to_string()];
        r.extend(b.values.iter().map(|v| v[i].to_string()));
        t.rows.push(r);
    }
    t
}

/// Rebuild a block; the key comes from the title when `key` is `None`.
pub fn block_from_table(t: &Table, key: Option<CouplingKey>) -> Result<IsoscalarBlock> {
    let key = match (key, &t.title) {
        (Some(k), _) => k,
        (None, Some(title)) => title.parse()?,
        (None, None) => return Err(Error::Parse("block table without a coupling key".into())),
    };
    let n = t.value_columns().len();
    let mut columns = Vec::new();
    let mut values = vec![Vec::new(); n];
    for r in &t.rows {
        columns.push(Column { x1y1: cell(t, r, "x1y1")?, x2y2: cell(t, r, "x2y2")?, xy: cell(t, r, "xy")? });
        for (v, x) in values.iter_mut().zip(rho_values(t, r)?) {
            v.push(x);
        }
    }
    Ok(IsoscalarBlock { key, columns, values, conventions: Conventions::default() })
}

/// Isospin table in the layout `ms1, ms2, ms, t1, t2, t, rho1, ...`.
///
/// `kappa` columns appear only when some label needs one.
pub fn chain2_table(title: Option<String>, rows: &[Chain2Row], multiplicity: usize) -> Table {
    let kappas = rows.iter().any(|r| [r.k1, r.k2, r.k].iter().any(|k| k.kappa > 1));
    let mut t = Table::new(title, &["ms1", "ms2", "ms", "t1", "t2", "t"]);
    if kappas {
        t.header.extend(["kappa1", "kappa2", "kappa"].map(String::from));
    }
    t.header.extend(rho_headers(multiplicity));
    for r in rows {
        let mut c: Vec<String> =
            [r.k1.ms, r.k2.ms, r.k.ms, r.k1.t, r.k2.t, r.k.t].iter().map(HalfInt::to_string).collect();
        if kappas {
            c.extend([r.k1.kappa, r.k2.kappa, r.k.kappa].map(|k| k.to_string()));
        }
        c.extend(r.values.iter().map(RadicalSum::to_string));
        t.rows.push(c);
    }
    t
}

pub fn chain2_from_table(t: &Table) -> Result<Vec<Chain2Row>> {
    let has_kappa = t.column("kappa").is_ok();
    let key = |r: &[String], ms: &str, tt: &str, kappa: &str| -> Result<Chain2Key> {
        let kappa = if has_kappa { count_cell(t, r, kappa)? } else { 1 };
        Ok(Chain2Key { ms: cell(t, r, ms)?, t: cell(t, r, tt)?, kappa })
    };
    t.rows
        .iter()
        .map(|r| {
            Ok(Chain2Row {
                k1: key(r, "ms1", "t1", "kappa1")?,
                k2: key(r, "ms2", "t2", "kappa2")?,
                k: key(r, "ms", "t", "kappa")?,
                values: rho_values(t, r)?,
            })
        })
        .collect()
}

pub fn chain3_table(title: Option<String>, rows: &[Chain3Row], multiplicity: usize) -> Table {
    let mut t = Table::new(title, &["l1", "alpha1", "l2", "alpha2", "l", "alpha"]);
    t.header.extend(rho_headers(multiplicity));
    for r in rows {
        let mut c = Vec::new();
        for k in [r.k1, r.k2, r.k] {
            c.push(k.l.to_string());
            c.push(k.alpha.to_string());
        }
        c.extend(r.values.iter().map(RadicalSum::to_string));
        t.rows.push(c);
    }
    t
}

pub fn chain3_from_table(t: &Table) -> Result<Vec<Chain3Row>> {
    let key = |r: &[String], l: &str, a: &str| -> Result<Chain3Key> {
        Ok(Chain3Key { l: cell(t, r, l)?, alpha: count_cell(t, r, a)? })
    };
    t.rows
        .iter()
        .map(|r| {
            Ok(Chain3Row {
                k1: key(r, "l1", "alpha1")?,
                k2: key(r, "l2", "alpha2")?,
                k: key(r, "l", "alpha")?,
                values: rho_values(t, r)?,
            })
        })
        .collect()
}

fn bracket_rows<K: Ord + Clone>(t: &mut Table, b: &BracketSet<K>, label: impl Fn(&K) -> Vec<String>) {
    for rec in b.records() {
        for (s, v) in &rec.components {
            let mut c = label(&rec.label);
            c.extend([rec.m.to_string(), s.xy.to_string(), s.w.mx.to_string(), s.w.my.to_string(), v.to_string()]);
            t.rows.push(c);
        }
    }
}

/// One line per nonzero component `<(XY) M_X M_Y | chain state>`.
pub fn chain2_brackets_table(b: &Chain2Brackets) -> Table {
    let mut t = Table::new(
        Some(format!("isospin brackets of {}", b.irrep)),
        &["ms", "t", "kappa", "mt", "xy", "mx", "my", "value"],
    );
    bracket_rows(&mut t, b, |k| vec![k.ms.to_string(), k.t.to_string(), k.kappa.to_string()]);
    t
}

pub fn chain3_brackets_table(b: &Chain3Brackets) -> Table {
    let mut t = Table::new(
        Some(format!("angular-momentum brackets of {}", b.irrep)),
        &["l", "alpha", "ml", "xy", "mx", "my", "value"],
    );
    bracket_rows(&mut t, b, |k| vec![k.l.to_string(), k.alpha.to_string()]);
    t
}

/// Parse one bracket line back into its weight state and value.
pub fn bracket_component(t: &Table, row: &[String]) -> Result<(WeightState, RadicalSum)> {
    let xy: So4Irrep = cell(t, row, "xy")?;
    let w = So4Weight::new(cell(t, row, "mx")?, cell(t, row, "my")?);
    Ok((WeightState { xy, w }, cell(t, row, "value")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::racah::solve_isoscalars;
    use crate::so5::So5Irrep;

    fn g(r: i32, s: i32) -> So5Irrep {
        So5Irrep::from_twice(r, s)
    }

    #[test]
    fn block_round_trips() {
        let b = solve_isoscalars(g(2, 0), g(2, 1), g(2, 1)).unwrap();
        let t = block_table(&b);
        assert_eq!(block_from_table(&Table::parse_text(&t.to_text()).unwrap(), None).unwrap(), b);
        assert_eq!(block_from_table(&Table::parse_csv(&t.to_csv()).unwrap(), Some(b.key)).unwrap(), b);
    }

    #[test]
    fn small_block_text() {
        let b = solve_isoscalars(g(1, 1), g(1, 0), g(1, 0)).unwrap();
        let text = block_table(&b).to_text();
        assert!(text.starts_with("# (1/2,1/2) x (1/2,0) -> (1/2,0)\n"));
        assert_eq!(text.lines().count(), 6);
        let values: Vec<&str> = text.lines().skip(2).map(|l| l.split_whitespace().last().unwrap()).collect();
        assert_eq!(values, ["-sqrt(1/5)", "-sqrt(4/5)", "+sqrt(1/5)", "+sqrt(4/5)"]);
    }

    #[test]
    fn float_rendering() {
        let b = solve_isoscalars(g(1, 1), g(1, 0), g(1, 0)).unwrap();
        let t = block_table(&b).to_float(6).unwrap();
        assert_eq!(t.rows[0][3], "-0.447214");
        assert_eq!(t.rows[1][3], "-0.894427");
        assert!(Format::parse_with_digits("float", 31).is_err());
    }

    #[test]
    fn text_rejects_ragged_rows() {
        assert!(Table::parse_text("a b\n1\n").is_err());
    }
}
