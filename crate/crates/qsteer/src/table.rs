//! Column tables written as RFC-4180 CSV or JSON.

use serde::Serialize;

/// One table cell. Floats are written to CSV with 17 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Float(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Square real matrix with row and column labels.
    pub fn matrix(labels: &[String], m: &[Vec<f64>]) -> Self {
        let mut cols = vec![String::new()];
        cols.extend(labels.iter().cloned());
        let mut t = Table {
            columns: cols,
            rows: Vec::new(),
        };
        for (label, row) in labels.iter().zip(m) {
            let mut cells = vec![Cell::Text(label.clone())];
            cells.extend(row.iter().map(|&x| Cell::Float(x)));
            t.rows.push(cells);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        // Writing to memory cannot fail.
        w.write_record(&self.columns).expect("in-memory csv");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_formatting() {
        let mut t = Table::new(&["target", "J", "n", "ok"]);
        t.push(vec!["qubit(1.2,0.3)".into(), 0.1.into(), 3usize.into(), true.into()]);
        t.push(vec!["+".into(), 1.0.into(), 0usize.into(), false.into()]);
        let text = t.to_csv();
        assert_eq!(
            text,
            "target,J,n,ok\r\n\"qubit(1.2,0.3)\",1.0000000000000001e-1,3,true\r\n+,1.0000000000000000e0,0,false\r\n"
        );
        let back: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn seventeen_digits_roundtrip() {
        for x in [std::f64::consts::PI, 1.0 / 3.0, -2.5e-300, 0.0, 123456789.123] {
            let s = Cell::Float(x).csv();
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        }
    }

    #[test]
    fn matrix_table() {
        let t = Table::matrix(&["I".into(), "Z".into()], &[vec![1.0, 0.0], vec![0.0, 0.5]]);
        assert_eq!(t.columns, vec!["", "I", "Z"]);
        assert_eq!(t.rows[1][0], Cell::Text("Z".into()));
    }
}
