//! Plain-text and CSV rendering.

use fairsack_core::construct::{factorization_sack, OrderedFactorization};
use fairsack_core::enumerate::{ordered_factorizations, EnumerationResult};

/// How factorizations are printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Separator {
    #[default]
    Dot,
    Ascii,
}

pub fn factorization(a: &OrderedFactorization, sep: Separator) -> String {
    match sep {
        Separator::Dot => a.to_string(),
        Separator::Ascii => a.to_ascii(),
    }
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let last = row.len().saturating_sub(1);
        for (c, cell) in row.iter().enumerate() {
            if c == last {
                out.push_str(cell);
            } else {
                out.push_str(&format!("{cell:<w$}  ", w = widths[c]));
            }
        }
        out.push('\n');
    }
    out
}

fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// One row per ordered factorization of `tplus1` with its factorization sack.
pub fn table_rows(tplus1: u64, sep: Separator) -> Vec<Vec<String>> {
    ordered_factorizations(tplus1)
        .iter()
        .map(|a| vec![factorization(a, sep), factorization_sack(a).to_string()])
        .collect()
}

pub fn table_text(tplus1: u64, sep: Separator) -> String {
    aligned(&table_rows(tplus1, sep))
}

pub fn table_csv(tplus1: u64, sep: Separator) -> String {
    csv_rows(&["a", "sack"], &table_rows(tplus1, sep))
}

fn enumeration_rows(r: &EnumerationResult, sep: Separator) -> Vec<Vec<String>> {
    r.sacks
        .iter()
        .map(|s| {
            vec![factorization(&s.factorization, sep), s.partition.to_string(), s.sack.to_string()]
        })
        .collect()
}

fn summary(r: &EnumerationResult, oracle: Option<bool>) -> String {
    match oracle {
        None => format!("count: {}", r.sacks.len()),
        Some(ok) => {
            format!("count: {}, oracle: {}", r.sacks.len(), if ok { "agree" } else { "disagree" })
        }
    }
}

pub fn enumeration_text(r: &EnumerationResult, oracle: Option<bool>, sep: Separator) -> String {
    let mut out = aligned(&enumeration_rows(r, sep));
    out.push_str(&summary(r, oracle));
    out.push('\n');
    out
}

pub fn enumeration_csv(r: &EnumerationResult, sep: Separator) -> String {
    csv_rows(&["a", "blocks", "sack"], &enumeration_rows(r, sep))
}
