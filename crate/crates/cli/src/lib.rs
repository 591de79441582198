//! Front end for `skewcat`: reads one JSON document, runs a subcommand and produces a
//! deterministic [`Report`].

pub mod input;
pub mod report;

use std::path::PathBuf;

use skewcat_core::check::Check;
use skewcat_core::cohomology::{self, build_cochain_complex, cochain_g_action, invariants};
use skewcat_core::constructions::{
    compare_quotient_with_transversal, matrix_category, quotient_category, skew, transversal_subcategory,
};
use skewcat_core::group::{orbits_transversal, Transversal};
use skewcat_core::hochschild::{self, build_chain_complex, chain_g_action, coinvariants, DEFAULT_BUDGET};
use skewcat_core::lincat::json::{action_to_doc, category_to_doc};
use skewcat_core::lincat::{validate_category, validate_grading, GradedLinCat};
use skewcat_core::linalg::Field;
use skewcat_core::verify::{self, require_coprime, Options};
use skewcat_core::Error;
use thiserror::Error as ThisError;

pub use input::{InputDoc, Loaded};
pub use report::{CommandEcho, Construction, Report, Row, Table};

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 1 for a failed verification, 2 for bad input, 3 for an exceeded budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => 3,
            CliError::Core(Error::ClassLeak(_) | Error::NotFullyFaithful(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Skew,
    Mg,
    Quotient,
    Hh,
    Hhc,
    Oracle,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Skew => "skew",
            Command::Mg => "mg",
            Command::Quotient => "quotient",
            Command::Hh => "hh",
            Command::Hhc => "hhc",
            Command::Oracle => "oracle",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Coinvariants,
    Invariants,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub input: PathBuf,
    /// Overrides the document's field.
    pub field: Option<Field>,
    pub max_degree: usize,
    pub classes: bool,
    pub variant: Option<Variant>,
    pub transversal: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub budget: usize,
    pub samples: usize,
    pub seed: u64,
}

impl JobSpec {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        let o = Options::default();
        JobSpec {
            command,
            input: input.into(),
            field: None,
            max_degree: o.n_max,
            classes: false,
            variant: None,
            transversal: None,
            out: None,
            threads: None,
            budget: DEFAULT_BUDGET,
            samples: o.samples,
            seed: o.seed,
        }
    }

    fn options(&self) -> Options {
        Options {
            n_max: self.max_degree,
            budget: self.budget,
            samples: self.samples,
            seed: self.seed,
        }
    }
}

/// Reads the input and runs the job, on a dedicated pool when `threads` is set.
pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let doc = InputDoc::from_path(&job.input)?;
    match job.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            pool.install(|| run_doc(job, &doc))
        }
        None => run_doc(job, &doc),
    }
}

/// Runs a job on an already parsed document.
pub fn run_doc(job: &JobSpec, doc: &InputDoc) -> Result<Report, CliError> {
    let loaded = Loaded::new(doc, job.field)?;
    let mut report = Report::new(CommandEcho {
        subcommand: job.command.name().into(),
        input: job.input.display().to_string(),
        field: loaded.field.to_string(),
        max_degree: job.max_degree,
        classes: job.classes,
        variant: job.variant.map(|v| format!("{v:?}").to_lowercase()),
        transversal: job.transversal.clone(),
    });
    report.validation = validation_checks(&loaded);
    if !skewcat_core::check::all_passed(&report.validation) {
        return Ok(report.finish());
    }
    let (c, a) = (&loaded.cat, &loaded.action);
    let o = job.options();
    match job.command {
        Command::Validate => {}
        Command::Skew => {
            let sk = skew(c, a)?;
            report.checks.push(Check::from_witness(
                "skew category axioms",
                validate_category(sk.cat()).err().map(|e| e.to_string()),
            ));
            report.checks.push(Check::from_witness(
                "skew category grading",
                validate_grading(&sk.graded).err().map(|e| e.to_string()),
            ));
            report.construction = Some(construction(&sk.graded, None));
        }
        Command::Mg => {
            let m = matrix_category(c, a)?;
            report.checks.push(Check::equal("G acts freely on M_G(C)", m.action.on_objects().is_free(), true));
            report.checks.push(Check::equal("L fully faithful", m.functor_l.is_fully_faithful(), true));
            report.checks.push(Check::equal("L dense", m.functor_l.is_dense(), true));
            let mut k = construction(&GradedLinCat::trivially(m.cat.clone(), loaded.group.clone()), None);
            k.category = category_to_doc(&m.cat, None);
            k.action = Some(action_to_doc(&m.cat, &m.action));
            report.construction = Some(k);
        }
        Command::Quotient => {
            let t = transversal_or_default(&loaded, job)?;
            let sk = skew(c, a)?;
            let q = quotient_category(c, a, &t)?;
            let tr = transversal_subcategory(&sk, a, &t)?;
            report.checks.extend(tr.iso_checks.clone());
            report.checks.push(compare_quotient_with_transversal(&q, &tr, &sk));
            report.construction = Some(construction(&q.graded, None));
        }
        Command::Hh => report.tables = homology_tables(&loaded, job, o)?,
        Command::Hhc => report.tables = cohomology_tables(&loaded, job, o)?,
        Command::Oracle => {
            let s = verify::oracle(c, o)?;
            let pick = |k: &str| s.dims.iter().find(|d| d.name == k).map(|d| d.dims.clone()).unwrap_or_default();
            let rows = |cat: Vec<usize>, alg: Vec<usize>| -> Vec<Row> {
                (0..=o.n_max)
                    .flat_map(|n| {
                        [("category", cat[n]), ("algebra a(C)", alg[n])].map(|(v, d)| Row {
                            degree: n,
                            class: "all".into(),
                            variant: v.into(),
                            dim_complex: None,
                            dim: d,
                        })
                    })
                    .collect()
            };
            report.tables.push(Table {
                title: "HH_n: category vs algebra".into(),
                rows: rows(pick("HH_n(C)"), pick("HH_n(a(C))")),
            });
            report.tables.push(Table {
                title: "HH^n: category vs algebra".into(),
                rows: rows(pick("HH^n(C)"), pick("HH^n(a(C))")),
            });
            report.sections.push(s);
        }
        Command::Verify => {
            let t = loaded.transversal(job.transversal.as_deref())?;
            report.sections = verify::verify_all(c, a, t.as_ref(), o)?;
            if let Some(b) = loaded.graded() {
                let mut s = verify::class_decomposition(&b?, o)?;
                s.name = "class decomposition (input grading)".into();
                report.sections.push(s);
            }
        }
    }
    Ok(report.finish())
}

fn validation_checks(l: &Loaded) -> Vec<Check> {
    let res = |r: skewcat_core::Result<()>| r.err().map(|e| e.to_string());
    let mut checks = vec![
        Check::from_witness("group axioms", res(l.group.validate())),
        Check::from_witness("category axioms", res(validate_category(&l.cat))),
        Check::from_witness("action axioms", res(skewcat_core::lincat::validate_action(&l.cat, &l.action))),
    ];
    if let Some(b) = l.graded() {
        checks.push(Check::from_witness("grading", res(b.and_then(|b| validate_grading(&b)))));
    }
    checks
}

fn construction(b: &GradedLinCat, action: Option<skewcat_core::lincat::json::ActionDoc>) -> Construction {
    Construction {
        category: category_to_doc(&b.cat, Some((&b.group, &b.degrees))),
        action,
        hom_dims: b.cat.hom_dims(),
    }
}

fn transversal_or_default(l: &Loaded, job: &JobSpec) -> Result<Transversal, CliError> {
    Ok(match l.transversal(job.transversal.as_deref())? {
        Some(t) => t,
        None => orbits_transversal(l.action.on_objects(), None).0,
    })
}

/// The graded category whose classes `--classes` refers to: the input grading when the
/// document carries degrees, the skew category otherwise.
fn class_source(l: &Loaded) -> skewcat_core::Result<(GradedLinCat, &'static str)> {
    match l.graded() {
        Some(b) => Ok((b?, "input grading")),
        None => Ok((skew(&l.cat, &l.action)?.graded, "skew category C[G]")),
    }
}

fn rows(class: &str, variant: &str, cells: Option<&[usize]>, dims: &[usize]) -> Vec<Row> {
    dims.iter()
        .enumerate()
        .map(|(n, &d)| Row {
            degree: n,
            class: class.into(),
            variant: variant.into(),
            dim_complex: cells.map(|c| c[n]),
            dim: d,
        })
        .collect()
}

fn homology_tables(l: &Loaded, job: &JobSpec, o: Options) -> Result<Vec<Table>, CliError> {
    if job.variant == Some(Variant::Invariants) {
        return Err(CliError::Usage("--invariants applies to hhc; hh takes --coinvariants".into()));
    }
    let cx = build_chain_complex(&l.cat, o.n_max, o.budget)?;
    let mut tables = vec![Table {
        title: "HH_n(C)".into(),
        rows: rows("all", "full", Some(&cx.dims()), &cx.homology_dims()),
    }];
    if job.classes {
        let (b, source) = class_source(l)?;
        let bx = build_chain_complex(&b.cat, o.n_max, o.budget)?;
        let mut t = Table {
            title: format!("HH_n by conjugacy class ({source})"),
            rows: Vec::new(),
        };
        for (cl, sub) in hochschild::class_decomposition(&bx, &b)? {
            t.rows.extend(rows(&cl.label(&b.group), "class", Some(&sub.dims()), &sub.homology_dims()));
        }
        tables.push(t);
    }
    if job.variant == Some(Variant::Coinvariants) {
        require_coprime(l.field, l.group.order())?;
        let co = coinvariants(&cx, &chain_g_action(&l.action, &cx)?)?;
        let mut t = Table {
            title: "coinvariants".into(),
            rows: rows("all", "H_n(C_G)", Some(&co.chain_dims), &co.homology),
        };
        t.rows.extend(rows("all", "(HH_n)_G", None, &co.homology_coinvariants));
        tables.push(t);
    }
    Ok(tables)
}

fn cohomology_tables(l: &Loaded, job: &JobSpec, o: Options) -> Result<Vec<Table>, CliError> {
    if job.variant == Some(Variant::Coinvariants) {
        return Err(CliError::Usage("--coinvariants applies to hh; hhc takes --invariants".into()));
    }
    let cc = build_cochain_complex(&l.cat, o.n_max, o.budget)?;
    let mut tables = vec![Table {
        title: "HH^n(C)".into(),
        rows: rows("all", "full", Some(&cc.dims()), &cc.cohomology_dims()),
    }];
    if job.classes {
        let (b, source) = class_source(l)?;
        let bc = build_cochain_complex(&b.cat, o.n_max, o.budget)?;
        let mut t = Table {
            title: format!("HH^n by conjugacy class ({source})"),
            rows: Vec::new(),
        };
        for (cl, sub) in cohomology::class_decomposition(&bc, &b)? {
            t.rows.extend(rows(&cl.label(&b.group), "class", Some(&sub.dims()), &sub.cohomology_dims()));
        }
        tables.push(t);
    }
    if job.variant == Some(Variant::Invariants) {
        require_coprime(l.field, l.group.order())?;
        let inv = invariants(&cc, &cochain_g_action(&l.cat, &l.action, &cc)?)?;
        let mut t = Table {
            title: "invariants".into(),
            rows: rows("all", "H^n((C^•)^G)", Some(&inv.cochain_dims), &inv.cohomology),
        };
        t.rows.extend(rows("all", "(HH^n)^G", None, &inv.cohomology_invariants));
        tables.push(t);
    }
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let budget = CliError::Core(Error::BudgetExceeded {
            what: "x".into(),
            needed: 2,
            budget: 1,
        });
        assert_eq!(budget.exit_code(), 3);
        assert_eq!(CliError::Core(Error::ClassLeak("x".into())).exit_code(), 1);
        assert_eq!(CliError::Core(Error::NonFreeAction("x".into())).exit_code(), 2);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }
}
