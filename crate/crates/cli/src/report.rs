use std::fmt::Write as _;

use serde::Serialize;
use skewcat_core::check::Check;
use skewcat_core::lincat::json::{ActionDoc, CategoryDoc};
use skewcat_core::verify::Section;

/// Echo of the job that produced a report.
#[derive(Clone, Debug, Serialize)]
pub struct CommandEcho {
    pub subcommand: String,
    pub input: String,
    pub field: String,
    pub max_degree: usize,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub classes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transversal: Option<Vec<String>>,
}

/// One row of a dimension table. `class` is `"all"` for the whole complex.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub degree: usize,
    pub class: String,
    pub variant: String,
    /// Dimension of the (co)chain space; absent for quantities with no complex behind them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_complex: Option<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub title: String,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Construction {
    pub category: CategoryDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDoc>,
    pub hom_dims: Vec<Vec<usize>>,
}

/// Deterministic for a given job: no timings, no thread counts.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: CommandEcho,
    pub validation: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<Construction>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<Section>,
    pub passed: bool,
}

impl Report {
    pub(crate) fn new(command: CommandEcho) -> Self {
        Report {
            command,
            validation: Vec::new(),
            tables: Vec::new(),
            construction: None,
            checks: Vec::new(),
            sections: Vec::new(),
            passed: true,
        }
    }

    pub(crate) fn finish(mut self) -> Self {
        self.passed = self
            .validation
            .iter()
            .chain(&self.checks)
            .chain(self.sections.iter().flat_map(|s| &s.checks))
            .all(|c| c.passed);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Human-readable summary for standard output.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let c = &self.command;
        let _ = writeln!(out, "skewcat {} {} (field {}, max degree {})", c.subcommand, c.input, c.field, c.max_degree);
        render_checks(&mut out, "validation", &self.validation);
        if let Some(k) = &self.construction {
            let _ = writeln!(
                out,
                "\nconstructed category: {} objects, {} basis morphisms",
                k.category.objects.len(),
                k.category.morphisms.len()
            );
            for (name, row) in k.category.objects.iter().zip(&k.hom_dims) {
                let _ = writeln!(out, "  hom({name}, −): {row:?}");
            }
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n{}", t.title);
            let _ = writeln!(out, "  {:>3}  {:<14} {:<22} {:>10} {:>6}", "n", "class", "variant", "dim cells", "dim");
            for r in &t.rows {
                let cells = r.dim_complex.map_or("-".to_string(), |d| d.to_string());
                let _ = writeln!(out, "  {:>3}  {:<14} {:<22} {:>10} {:>6}", r.degree, r.class, r.variant, cells, r.dim);
            }
        }
        render_checks(&mut out, "checks", &self.checks);
        for s in &self.sections {
            let _ = writeln!(out, "\n[{}]", s.name);
            for d in &s.dims {
                let _ = writeln!(out, "  {:<32} {:?}", d.name, d.dims);
            }
            render_checks(&mut out, "", &s.checks);
        }
        let _ = writeln!(out, "\n{}", if self.passed { "ALL CHECKS PASSED" } else { "VERIFICATION FAILED" });
        out
    }
}

fn render_checks(out: &mut String, title: &str, checks: &[Check]) {
    if checks.is_empty() {
        return;
    }
    if !title.is_empty() {
        let _ = writeln!(out, "\n{title}");
    }
    for c in checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        let _ = write!(out, "  [{mark}] {}", c.name);
        if let Some(w) = &c.witness {
            let _ = write!(out, " — {w}");
        }
        out.push('\n');
    }
}
