//! CSV result tables with a `#`-prefixed metadata preamble.

use std::io::{self, Write};

/// Significant digits written for every value.
pub const SIG_DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Free text written above the header, one `# ` line per text line.
    pub metadata: String,
}

/// Formats `x` rounded to [`SIG_DIGITS`] significant digits, shortest form.
pub fn format_value(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("valid float");
    format!("{rounded:?}")
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>, metadata: impl Into<String>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            metadata: metadata.into(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for line in self.metadata.lines() {
            if line.is_empty() {
                writeln!(out, "#")?;
            } else {
                writeln!(out, "# {line}")?;
            }
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| format_value(x)))?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn parse_csv(text: &str) -> Result<Self, String> {
        let mut metadata = String::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            body_start += line.len();
            let rest = rest.trim_end_matches(['\n', '\r']);
            metadata.push_str(rest.strip_prefix(' ').unwrap_or(rest));
            metadata.push('\n');
        }
        let mut reader = csv::Reader::from_reader(&text.as_bytes()[body_start..]);
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| e.to_string())?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| e.to_string())?;
            let row = record
                .iter()
                .map(|v| v.parse::<f64>().map_err(|e| format!("bad value {v:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != columns.len() {
                return Err(format!("row has {} fields, header has {}", row.len(), columns.len()));
            }
            rows.push(row);
        }
        Ok(Self {
            columns,
            rows,
            metadata,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_value(2.013_636_202_208_275), "2.0136362");
        assert_eq!(format_value(1.0), "1.0");
        assert_eq!(format_value(-0.000123456789123), "-0.000123456789");
        assert_eq!(format_value(1e-20), "1e-20");
        assert_eq!(format_value(f64::INFINITY), "inf");
    }

    #[test]
    fn round_trip() {
        let mut t = ResultTable::new(["time", "T"], "[experiment]\nkind = \"steady\"\n\nnote\n");
        t.push(vec![0.0, 2.5]);
        t.push(vec![10.0, 1.23456789]);
        let text = t.to_csv_string();
        assert!(text.starts_with("# [experiment]\n# kind = \"steady\"\n#\n# note\ntime,T\n"), "{text}");
        assert_eq!(ResultTable::parse_csv(&text).unwrap(), t);
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn ragged_rows_rejected() {
        ResultTable::new(["a", "b"], "").push(vec![1.0]);
    }
}
