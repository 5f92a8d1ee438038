//! Rectangular curve output and its CSV rendering.
//!
//! CSV schema: first line is the comma-separated column names (units are
//! suffixed into the names, e.g. `avg_rate_exact_bpcu`), data rows follow
//! with 17-significant-digit scientific notation, and `# key = value`
//! metadata trailer lines close the file. UTF-8, LF line endings, no locale
//! dependence.

/// Named, rectangular numeric table plus reproducibility metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveOutput {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// (key, value) pairs; at minimum scenario hash, seed, and tool version.
    pub metadata: Vec<(String, String)>,
}

impl CurveOutput {
    pub fn new(columns: Vec<String>) -> Self {
        let mut names = std::collections::HashSet::new();
        for c in &columns {
            assert!(names.insert(c.clone()), "duplicate column name {c}");
        }
        Self { columns, rows: Vec::new(), metadata: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn add_metadata(&mut self, key: &str, value: impl std::fmt::Display) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    /// Renders the CSV document.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                first = false;
                out.push_str(&format_full(*v));
            }
            out.push('\n');
        }
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out
    }
}

/// 17 significant digits, scientific notation, `.` decimal separator.
pub fn format_full(v: f64) -> String {
    format!("{v:.16e}")
}

/// FNV-1a 64-bit hash; stable fingerprint for scenario + command inputs.
pub fn fnv1a(data: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in data.as_bytes() {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
