use std::time::Instant;

use serde::Serialize;

pub const REPORT_VERSION: u32 = 1;

/// Outcome of one verification. `pass` holds exactly when `residual < tol`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub report_version: u32,
    pub check: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub witness: Vec<String>,
    pub ms: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<CheckReport>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, residual: f64, tol: f64) -> Self {
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        CheckReport {
            report_version: REPORT_VERSION,
            check: check.into(),
            residual,
            tol,
            pass: residual < tol,
            witness: vec![],
            ms: 0.0,
            parts: vec![],
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness.push(w.into());
        self
    }

    /// Aggregate: residual is the worst part, pass requires every part to pass.
    pub fn aggregate(check: impl Into<String>, tol: f64, parts: Vec<CheckReport>) -> Self {
        let residual = parts.iter().map(|p| p.residual).fold(0.0, f64::max);
        let mut r = CheckReport::new(check, residual, tol);
        r.pass = parts.iter().all(|p| p.pass);
        if let Some(worst) = parts
            .iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
        {
            r.witness = std::iter::once(worst.check.clone())
                .chain(worst.witness.iter().cloned())
                .collect();
        }
        r.ms = parts.iter().map(|p| p.ms).sum();
        r.parts = parts;
        r
    }

    /// Leaf reports, depth first; a report without parts is its own leaf.
    pub fn leaves(&self) -> Vec<CheckReport> {
        if self.parts.is_empty() {
            return vec![self.clone()];
        }
        self.parts.iter().flat_map(|p| p.leaves()).collect()
    }

    pub fn line(&self) -> String {
        format!(
            "{:<44} {}  residual {:.3e}  tol {:.1e}{}",
            self.check,
            if self.pass { "PASS" } else { "FAIL" },
            self.residual,
            self.tol,
            if self.witness.is_empty() {
                String::new()
            } else {
                format!("  [{}]", self.witness.join(", "))
            }
        )
    }
}

/// Tracks the worst residual seen together with its witness.
#[derive(Default, Clone, Debug)]
pub struct Worst {
    pub residual: f64,
    pub witness: Option<String>,
}

impl Worst {
    pub fn see(&mut self, r: f64, witness: impl FnOnce() -> String) {
        let r = if r.is_nan() { f64::INFINITY } else { r };
        if self.witness.is_none() || r > self.residual {
            self.residual = r;
            self.witness = Some(witness());
        }
    }

    pub fn report(self, check: &str, tol: f64) -> CheckReport {
        let mut r = CheckReport::new(check, self.residual, tol);
        if let Some(w) = self.witness {
            r.witness.push(w);
        }
        r
    }
}

/// Run `f` and stamp the elapsed wall time on its report.
pub fn timed(f: impl FnOnce() -> CheckReport) -> CheckReport {
    let t = Instant::now();
    let mut r = f();
    let ms = t.elapsed().as_secs_f64() * 1e3;
    if r.parts.is_empty() || r.ms == 0.0 {
        r.ms = ms;
    }
    r
}
