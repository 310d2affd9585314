//! Schema-versioned run report and its JSON and markdown renderings.

use std::fmt::Write as _;

use biharm_core::calculus::HomogeneityCheck;
use biharm_core::jetoracle::{OracleReport, SharpConstantResult};
use biharm_core::paramcheck::exponent::LinearCertificate;
use biharm_core::paramcheck::{
    CoefficientCheck, ExponentCheck, FormulaCheck, NCertificates, PdReport,
};
use biharm_core::radial::ScanSummary;
use biharm_core::registry::{MasterDerivation, VerificationReport};
use serde::Serialize;

use crate::config::{Format, RunConfig};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One mandatory check; the run passes iff all of them do.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentitySection {
    pub verified: usize,
    pub total: usize,
    pub reports: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub onshell_pass: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub combination: Option<MasterDerivation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamsSection {
    pub formulas: Vec<FormulaCheck>,
    pub endpoint_values: Vec<FormulaCheck>,
    pub certified_n: [i64; 2],
    pub certificates: Vec<NCertificates>,
    pub exponent_identity: FormulaCheck,
    pub middle_inequality: LinearCertificate,
    pub exponents: Vec<ExponentCheck>,
    pub coefficients: Vec<CoefficientCheck>,
    pub estimate_forms: Vec<HomogeneityCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSection {
    pub reports: Vec<OracleReport>,
    pub sharp_constant: Vec<SharpConstantResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RadialSection {
    pub scans: Vec<ScanSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dumped: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub engine_version: String,
    pub command: String,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pd_scan: Option<PdReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radial: Option<RadialSection>,
    pub checks: Vec<Check>,
    /// Observations that do not affect the status.
    pub notes: Vec<String>,
    pub errors: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            engine_version: biharm_core::ENGINE_VERSION.to_string(),
            command: config.command.clone(),
            config,
            identities: None,
            params: None,
            pd_scan: None,
            oracle: None,
            radial: None,
            checks: Vec::new(),
            notes: Vec::new(),
            errors: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records a computation error as a failed check.
    pub fn error(&mut self, name: &str, e: impl std::fmt::Display) {
        self.errors.push(format!("{name}: {e}"));
        self.check(name, false, format!("error: {e}"));
    }

    pub fn finalize(&mut self) {
        let ok = self.errors.is_empty() && self.checks.iter().all(|c| c.passed);
        self.status = if ok { Status::Pass } else { Status::Fail };
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Markdown => markdown(report),
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn markdown(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# biharm report: `{}`\n", r.command);
    let _ = writeln!(
        s,
        "- status: **{}**\n- engine: {}\n- schema: {}\n",
        if r.passed() { "pass" } else { "fail" },
        r.engine_version,
        r.schema_version
    );
    s.push_str("## Checks\n\n| check | result | detail |\n|---|---|---|\n");
    for c in &r.checks {
        let _ = writeln!(
            s,
            "| {} | {} | {} |",
            cell(&c.name),
            mark(c.passed),
            cell(&c.detail)
        );
    }
    if let Some(id) = &r.identities {
        let _ = writeln!(
            s,
            "\n## Identities ({}/{} verified zero)\n",
            id.verified, id.total
        );
        s.push_str("| id | anchor | mode | status | residual terms |\n|---|---|---|---|---|\n");
        for v in &id.reports {
            let _ = writeln!(
                s,
                "| {} | {} | {:?} | {:?} | {} |",
                v.id,
                cell(&v.anchor),
                v.mode,
                v.status,
                cell(&v.residual_terms.join("; "))
            );
        }
        if let Some(c) = &id.combination {
            let _ = writeln!(
                s,
                "\nMaster combination: c1 = `{}`, c2 = `{}` ({})",
                c.c1,
                c.c2,
                mark(c.passed())
            );
        }
    }
    if let Some(p) = &r.params {
        s.push_str("\n## Parameter algebra\n\n| formula | result | residual |\n|---|---|---|\n");
        for f in p
            .formulas
            .iter()
            .chain(&p.endpoint_values)
            .chain([&p.exponent_identity])
        {
            let _ = writeln!(
                s,
                "| {} | {} | `{}` |",
                cell(&f.name),
                mark(f.holds),
                cell(&f.residual)
            );
        }
        let bad: Vec<String> = p
            .certificates
            .iter()
            .filter(|c| !c.all_positive())
            .map(|c| c.n.to_string())
            .collect();
        let _ = writeln!(
            s,
            "\nSturm certificates for n in [{}, {}]: {}",
            p.certified_n[0],
            p.certified_n[1],
            if bad.is_empty() {
                "all positive".to_string()
            } else {
                format!("failing n = {}", bad.join(", "))
            }
        );
        let chain_bad = p.exponents.iter().filter(|e| !e.chain_holds()).count();
        let _ = writeln!(
            s,
            "Exponent chain: {} of {} grid points fail",
            chain_bad,
            p.exponents.len()
        );
    }
    if let Some(pd) = &r.pd_scan {
        let _ = writeln!(
            s,
            "\n## Definiteness scan\n\nn in [{}, {}], {} points, agreement {:.6}, min λ = {:e}",
            pd.n_min, pd.n_max, pd.total_points, pd.agreement_fraction, pd.min_lambda
        );
    }
    if let Some(o) = &r.oracle {
        s.push_str("\n## Numeric oracle\n\n| id | anchor | evaluations | max residual | result |\n|---|---|---|---|---|\n");
        for v in &o.reports {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {:e} | {} |",
                v.id,
                cell(&v.anchor),
                v.evaluations,
                v.max_residual,
                mark(v.passed)
            );
        }
        s.push_str("\n| n | sharp constant | n/(n-1) | below 4/3 |\n|---|---|---|---|\n");
        for c in &o.sharp_constant {
            let _ = writeln!(
                s,
                "| {} | {:.9} | {:.9} | {} |",
                c.n, c.minimum, c.candidate, c.below_four_thirds
            );
        }
    }
    if let Some(rad) = &r.radial {
        s.push_str("\n## Radial shooting\n\n| n | α | cells | survived | u ≤ 0 | Δu > 0 | blow-up |\n|---|---|---|---|---|---|---|\n");
        for sc in &rad.scans {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {} |",
                sc.n,
                sc.alpha,
                sc.total,
                sc.survived,
                sc.positivity_violated,
                sc.subharmonicity_violated,
                sc.blow_up
            );
        }
    }
    if !r.notes.is_empty() {
        s.push_str("\n## Notes\n\n");
        for n in &r.notes {
            let _ = writeln!(s, "- {}", cell(n));
        }
    }
    if !r.errors.is_empty() {
        s.push_str("\n## Errors\n\n");
        for e in &r.errors {
            let _ = writeln!(s, "- {}", cell(e));
        }
    }
    s
}
