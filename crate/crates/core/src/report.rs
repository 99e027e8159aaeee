use std::fmt;

/// Outcome of a verification pass: how many checks ran and which failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub location: String,
    pub detail: String,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checked: 0, violations: Vec::new() }
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, location: impl Into<String>, detail: impl Into<String>) {
        self.checked += 1;
        self.violations.push(Violation { location: location.into(), detail: detail.into() });
    }

    /// Records a check that passes iff `ok`.
    pub fn expect(&mut self, ok: bool, location: impl Into<String>, detail: impl FnOnce() -> String) {
        if ok {
            self.pass();
        } else {
            self.fail(location, detail());
        }
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    pub fn sort(&mut self) {
        self.violations.sort();
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "{}: OK", self.title);
        }
        write!(f, "{}: FAILED ({} of {} checks)", self.title, self.violations.len(), self.checked)?;
        for v in &self.violations {
            write!(f, "\n  {}: {}", v.location, v.detail)?;
        }
        Ok(())
    }
}
