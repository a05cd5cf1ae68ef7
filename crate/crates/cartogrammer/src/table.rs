//! CSV datasets: the first column holds region ids, every further column is
//! one dataset named `Name` or `Name (unit)`. Empty cells are missing data.

use std::collections::HashSet;

use cartogram_core::Dataset;

use crate::error::{Error, Result};

/// Splits a header like `GDP (€)` into name and unit.
pub fn split_header(header: &str) -> (String, String) {
    let h = header.trim();
    if let Some(stripped) = h.strip_suffix(')') {
        if let Some(open) = stripped.rfind('(') {
            let name = stripped[..open].trim();
            if !name.is_empty() {
                return (name.to_string(), stripped[open + 1..].trim().to_string());
            }
        }
    }
    (h.to_string(), String::new())
}

/// Plain decimal: digits with at most one decimal point, optional leading minus.
fn is_plain_decimal(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    let mut dots = 0;
    let mut digits = 0;
    for c in body.chars() {
        match c {
            '0'..='9' => digits += 1,
            '.' => dots += 1,
            _ => return false,
        }
    }
    digits > 0 && dots <= 1
}

pub fn parse_csv(text: &str) -> Result<Vec<Dataset>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.len() < 2 {
        return Err(Error::NoValueColumns);
    }
    let columns: Vec<(String, String)> = headers.iter().skip(1).map(split_header).collect();
    let mut entries: Vec<Vec<(String, Option<f64>)>> = vec![Vec::new(); columns.len()];
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let id = record.get(0).unwrap_or("").to_string();
        if id.is_empty() {
            return Err(Error::EmptyRowId { line });
        }
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateRow { line, id });
        }
        for (c, cell) in record.iter().skip(1).enumerate() {
            let value = if cell.is_empty() {
                None
            } else if !is_plain_decimal(cell) {
                return Err(Error::NonNumeric {
                    line,
                    column: columns[c].0.clone(),
                    id,
                    cell: cell.to_string(),
                });
            } else if cell.starts_with('-') && cell.chars().any(|ch| ('1'..='9').contains(&ch)) {
                return Err(Error::NegativeValue {
                    line,
                    column: columns[c].0.clone(),
                    id,
                    cell: cell.to_string(),
                });
            } else {
                // plain decimals always parse; "-0" becomes 0
                Some(cell.parse::<f64>().map(|v| v.abs()).unwrap_or(0.0))
            };
            entries[c].push((id.clone(), value));
        }
    }
    columns
        .into_iter()
        .zip(entries)
        .map(|((name, unit), e)| Ok(Dataset::new(name, unit, e)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_column() {
        let d = parse_csv("id,Population\nA,10\nB,30").unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].name(), "Population");
        assert_eq!(d[0].unit(), "");
        assert_eq!(d[0].get("A"), Some(Some(10.0)));
        assert_eq!(d[0].get("B"), Some(Some(30.0)));
    }

    #[test]
    fn units_and_missing_cells() {
        let d = parse_csv("id,GDP (€),Workers (persons)\nWI,94000000000,\nNO,57000000000,7900\n")
            .unwrap();
        assert_eq!(d[0].unit(), "€");
        assert_eq!(d[1].name(), "Workers");
        assert_eq!(d[1].get("WI"), Some(None));
    }

    #[test]
    fn headers() {
        assert_eq!(split_header("GDP (€)"), ("GDP".into(), "€".into()));
        assert_eq!(
            split_header("Day nursery workers (persons)"),
            ("Day nursery workers".into(), "persons".into())
        );
        assert_eq!(split_header("Plain"), ("Plain".into(), "".into()));
        assert_eq!(split_header("(odd)"), ("(odd)".into(), "".into()));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_csv("id,X\nA,-5"),
            Err(Error::NegativeValue { .. })
        ));
        let e = parse_csv("id,X\nA,-5").unwrap_err().to_string();
        assert!(e.contains("negative value"), "{e}");
        assert!(matches!(
            parse_csv("id,X\nA,1\nA,2"),
            Err(Error::DuplicateRow { .. })
        ));
        assert!(matches!(
            parse_csv("id,X\nA,abc"),
            Err(Error::NonNumeric { .. })
        ));
        assert!(matches!(
            parse_csv("id,X\nA,\"1,000\""),
            Err(Error::NonNumeric { .. })
        ));
        assert!(matches!(
            parse_csv("id,X\nA,1e5"),
            Err(Error::NonNumeric { .. })
        ));
        assert!(matches!(
            parse_csv("id,X\nA,NaN"),
            Err(Error::NonNumeric { .. })
        ));
        assert!(matches!(parse_csv("id\nA"), Err(Error::NoValueColumns)));
        assert!(matches!(
            parse_csv("id,X\n,1"),
            Err(Error::EmptyRowId { .. })
        ));
    }
}
