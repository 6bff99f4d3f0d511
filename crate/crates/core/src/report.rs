//! Tabular reports rendered as JSON, CSV or Markdown. Every cell is text;
//! numbers are exact rationals printed as `p/q`.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Some(Self::Json),
            "csv" => Some(Self::Csv),
            "md" | "markdown" => Some(Self::Markdown),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational section, no check performed.
    Info,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Info => "info",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub label: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub title: String,
    /// Header of the label column.
    pub key: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl Section {
    pub fn new(title: impl Into<String>, key: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            title: title.into(),
            key: key.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            verdict: Verdict::Info,
            failures: Vec::new(),
        }
    }

    pub fn row(&mut self, label: impl Into<String>, values: Vec<String>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(Row {
            label: label.into(),
            values,
        });
    }

    /// Records a failure and marks the section failed.
    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
        self.verdict = Verdict::Fail;
    }

    /// Pass unless a failure was recorded.
    pub fn checked(mut self) -> Self {
        if self.failures.is_empty() {
            self.verdict = Verdict::Pass;
        }
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> Vec<String> {
        self.sections
            .iter()
            .flat_map(|s| s.failures.iter().map(move |f| format!("{}: {f}", s.title)))
            .collect()
    }

    pub fn render(&self, format: Format) -> String {
        render(self, format)
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(report).expect("report serializes"),
        Format::Csv => render_csv(report),
        Format::Markdown => render_markdown(report),
    }
}

fn render_csv(report: &Report) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(["section", "row", "column", "value"])
        .expect("in-memory write");
    for s in &report.sections {
        for r in &s.rows {
            for (c, v) in s.columns.iter().zip(&r.values) {
                w.write_record([s.title.as_str(), &r.label, c, v])
                    .expect("in-memory write");
            }
        }
        for f in &s.failures {
            w.write_record([s.title.as_str(), "", "failure", f])
                .expect("in-memory write");
        }
        w.write_record([s.title.as_str(), "", "verdict", s.verdict.as_str()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn render_markdown(report: &Report) -> String {
    let mut out = String::new();
    for (i, s) in report.sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("## {}\n\n", s.title));
        if !s.rows.is_empty() {
            let header: Vec<String> = std::iter::once(&s.key)
                .chain(&s.columns)
                .map(|c| md_cell(c))
                .collect();
            out.push_str(&format!("| {} |\n", header.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for r in &s.rows {
                let cells: Vec<String> = std::iter::once(&r.label)
                    .chain(&r.values)
                    .map(|c| md_cell(c))
                    .collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            out.push('\n');
        }
        for f in &s.failures {
            out.push_str(&format!("- FAIL: {f}\n"));
        }
        out.push_str(&format!("Verdict: {}\n", s.verdict));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut s = Section::new("Curvature", "Algebra", &["R", "Ric"]);
        s.row("L6,12", vec!["R ≠ 0".into(), "0".into()]);
        s.row("L6,1", vec!["R = 0".into(), "0".into()]);
        let mut r = Report::new();
        r.push(s.checked());
        r
    }

    #[test]
    fn empty_json() {
        assert_eq!(Report::new().render(Format::Json), r#"{"sections":[]}"#);
    }

    #[test]
    fn json_keeps_column_order() {
        let v: serde_json::Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["sections"][0]["columns"], serde_json::json!(["R", "Ric"]));
        assert_eq!(v["sections"][0]["rows"][0]["values"][0], "R ≠ 0");
        assert_eq!(v["sections"][0]["verdict"], "pass");
    }

    #[test]
    fn csv_quotes_commas() {
        let csv = sample().render(Format::Csv);
        assert!(csv.starts_with("section,row,column,value\n"));
        assert!(csv.contains("Curvature,\"L6,12\",R,R ≠ 0\n"));
        assert!(csv.ends_with("Curvature,,verdict,pass\n"));
    }

    #[test]
    fn markdown_table() {
        let md = sample().render(Format::Markdown);
        assert!(md.contains("| Algebra | R | Ric |\n|---|---|---|\n| L6,12 | R ≠ 0 | 0 |\n"));
    }

    #[test]
    fn failures_fail_the_report() {
        let mut r = sample();
        let mut s = Section::new("Lemmas", "Id", &[]);
        s.fail("L6_13_eq");
        r.push(s.checked());
        assert!(!r.passed());
        assert_eq!(r.failures(), vec!["Lemmas: L6_13_eq".to_string()]);
        assert!(r.render(Format::Markdown).contains("- FAIL: L6_13_eq"));
    }

    #[test]
    fn rendering_is_stable() {
        let r = sample();
        for f in [Format::Json, Format::Csv, Format::Markdown] {
            assert_eq!(r.render(f), r.render(f));
        }
    }
}
