use std::fmt::Write as _;

/// One evaluated `(function, parameters)` combination.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub function_id: String,
    pub params: Vec<(&'static str, f64)>,
    pub ratio: f64,
}

/// Ratios of one inequality over a corpus, with the attained maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    /// Run-level parameters, e.g. `gamma` or `p_max`.
    pub params: Vec<(String, String)>,
    pub rows: Vec<ReportRow>,
    /// Ids of functions left out under the `0/0` convention.
    pub excluded: Vec<String>,
    pub max_ratio: f64,
    pub argmax: Option<String>,
    /// Set when the parameters lie outside the inequality's hypotheses.
    pub exploratory: bool,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, params: Vec<(String, String)>) -> Self {
        InequalityReport {
            name: name.into(),
            params,
            rows: Vec::new(),
            excluded: Vec::new(),
            max_ratio: 0.0,
            argmax: None,
            exploratory: false,
        }
    }

    pub fn push(&mut self, row: ReportRow) {
        if self.argmax.is_none() || row.ratio > self.max_ratio {
            self.max_ratio = row.ratio;
            self.argmax = Some(row.function_id.clone());
        }
        self.rows.push(row);
    }

    pub fn exclude(&mut self, id: impl Into<String>) {
        self.excluded.push(id.into());
    }

    /// Maximum ratio over the rows whose parameter `key` equals `value`.
    pub fn max_where(&self, key: &str, value: f64) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.params.iter().any(|(k, v)| *k == key && *v == value))
            .map(|r| r.ratio)
            .reduce(f64::max)
    }

    /// `function_id,<param columns>,ratio`, one row per combination.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("function_id");
        if let Some(first) = self.rows.first() {
            for (k, _) in &first.params {
                out.push(',');
                out.push_str(k);
            }
        }
        out.push_str(",ratio\n");
        for row in &self.rows {
            out.push_str(&row.function_id);
            for (_, v) in &row.params {
                let _ = write!(out, ",{}", format_number(*v));
            }
            let _ = writeln!(out, ",{}", format_number(row.ratio));
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut s = format!("== {} ==\n", self.name);
        for (k, v) in &self.params {
            let _ = writeln!(s, "{k:>12} = {v}");
        }
        let _ = writeln!(s, "{:>12} = {}", "rows", self.rows.len());
        let _ = writeln!(s, "{:>12} = {}", "excluded", self.excluded.len());
        let _ = writeln!(s, "{:>12} = {}", "max ratio", format_number(self.max_ratio));
        let _ = writeln!(
            s,
            "{:>12} = {}",
            "attained by",
            self.argmax.as_deref().unwrap_or("-")
        );
        if self.exploratory {
            s.push_str("   (exploratory: parameters outside the inequality's hypotheses)\n");
        }
        s
    }
}

/// 17 significant digits, dot decimal separator.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}
