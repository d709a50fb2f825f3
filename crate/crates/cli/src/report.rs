//! Suite reports: `<suite>.txt` for people, `<suite>.results.jsonl` for
//! tools. Each JSON line has the fields `suite`, `case_id`, `verdict`,
//! `detail` in that order; `verdict` is `pass` or `fail`.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub suite: String,
    pub case_id: String,
    pub verdict: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    /// Free-form lines printed after the header of the text report.
    pub notes: Vec<String>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(suite: &str) -> Report {
        Report {
            suite: suite.to_string(),
            notes: Vec::new(),
            records: Vec::new(),
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn check(&mut self, case_id: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.records.push(Record {
            suite: self.suite.clone(),
            case_id: case_id.into(),
            verdict: if ok { "pass" } else { "fail" },
            detail: detail.into(),
        });
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.verdict == "fail").count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn headline(&self) -> String {
        format!(
            "{}: {} ({} checks, {} failed)",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.records.len(),
            self.failures()
        )
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.headline()).unwrap();
        for n in &self.notes {
            writeln!(out, "{n}").unwrap();
        }
        for r in &self.records {
            writeln!(out, "{} {} {}", r.verdict, r.case_id, r.detail).unwrap();
        }
        out
    }

    pub fn render_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    /// Writes both files and returns their paths.
    pub fn write(&self, dir: &Path) -> io::Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let text = dir.join(format!("{}.txt", self.suite));
        let jsonl = dir.join(format!("{}.results.jsonl", self.suite));
        std::fs::write(&text, self.render_text())?;
        std::fs::write(&jsonl, self.render_jsonl())?;
        Ok((text, jsonl))
    }
}
