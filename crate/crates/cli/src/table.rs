//! Tabular output with one shared float formatter.
//!
//! Every floating value leaves the program as `{:.16e}` — 17 significant
//! decimal digits, enough for a bit-exact f64 round trip — so identical
//! configurations produce byte-identical files.

/// 17-significant-digit scientific formatting, round-trip safe for f64.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Copy, Debug)]
pub enum Cell {
    F(f64),
    I(i64),
    B(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::F(x) => fmt_f(x),
            Cell::I(k) => k.to_string(),
            Cell::B(b) => b.to_string(),
        }
    }

    /// JSON literal; floats keep the 17-digit formatting (valid JSON numbers).
    fn json(&self) -> String {
        self.csv()
    }
}

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: Vec<S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of objects, keys in header order (serde_json would sort keys,
    /// losing the declared column order, and reformat the floats).
    pub fn to_json(&self) -> String {
        let mut out = String::from("[\n");
        for (i, row) in self.rows.iter().enumerate() {
            let fields: Vec<String> = self
                .header
                .iter()
                .zip(row)
                .map(|(name, cell)| format!("\"{name}\": {}", cell.json()))
                .collect();
            out.push_str("  {");
            out.push_str(&fields.join(", "));
            out.push('}');
            if i + 1 < self.rows.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("]\n");
        out
    }
}
