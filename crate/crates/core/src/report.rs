//! Line-oriented check reports.
//!
//! Every verifier in the crate produces a [`CheckReport`]: a machine-diffable
//! list of `PASS|FAIL <check-id> <key>=<value>...` lines. Failures carry
//! their witnesses as fields; a report passes iff it recorded no failure.

use std::fmt;

/// How many failure witnesses a report keeps verbatim. Failures beyond the
/// cap are still counted.
const MAX_WITNESSES: usize = 12;

#[derive(Debug, Clone)]
pub struct ReportLine {
    pub pass: bool,
    pub id: String,
    pub fields: Vec<(String, String)>,
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.pass { "PASS" } else { "FAIL" }, self.id)?;
        for (k, v) in &self.fields {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// Accumulator for one named check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    id: String,
    checked: u64,
    failures: u64,
    witnesses: Vec<ReportLine>,
    info: Vec<(String, String)>,
}

impl CheckReport {
    pub fn new(id: impl Into<String>) -> Self {
        CheckReport {
            id: id.into(),
            checked: 0,
            failures: 0,
            witnesses: Vec::new(),
            info: Vec::new(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Records `n` successful case checks.
    pub fn ok(&mut self, n: u64) {
        self.checked += n;
    }

    /// Records a failed case with its witness fields.
    pub fn fail(&mut self, fields: Vec<(String, String)>) {
        self.checked += 1;
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(ReportLine {
                pass: false,
                id: self.id.clone(),
                fields,
            });
        }
    }

    /// Attaches a summary field (e.g. an empirically measured constant).
    pub fn note(&mut self, key: impl Into<String>, value: impl ToString) {
        self.info.push((key.into(), value.to_string()));
    }

    pub fn pass(&self) -> bool {
        self.failures == 0
    }

    pub fn checked(&self) -> u64 {
        self.checked
    }

    pub fn failures(&self) -> u64 {
        self.failures
    }

    pub fn info(&self) -> &[(String, String)] {
        &self.info
    }

    /// Folds another report's outcome into this one, keeping its witnesses.
    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failures += other.failures;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        self.info.extend(other.info);
    }

    /// All lines: witnesses first, then the one-line summary.
    pub fn lines(&self) -> Vec<ReportLine> {
        let mut out = self.witnesses.clone();
        let mut fields = vec![
            ("checked".to_string(), self.checked.to_string()),
            ("failures".to_string(), self.failures.to_string()),
        ];
        fields.extend(self.info.clone());
        out.push(ReportLine {
            pass: self.pass(),
            id: self.id.clone(),
            fields,
        });
        out
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
