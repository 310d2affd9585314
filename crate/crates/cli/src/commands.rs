//! One function per subcommand; each fills its section of the report and
//! adds its checks. Nothing here stops at the first failure.

use std::path::Path;

use biharm_core::calculus::subharmonic_estimate_forms;
use biharm_core::exec::Exec;
use biharm_core::jetoracle::{numeric_check_all, sharp_constant_search, OracleConfig};
use biharm_core::paramcheck::exponent::{
    coefficient_grid, exponent_grid, exponent_identity, middle_inequality,
};
use biharm_core::paramcheck::{
    certify_range, check_endpoint_values, check_minor_formulas, numeric_pd_scan,
};
use biharm_core::radial::{
    lin_grid, log_grid, scan_shooting, shoot, write_trajectory_csv, Tolerances,
};
use biharm_core::registry::{derive_master_weights, Identity, Registry};

use crate::config::RunConfig;
use crate::report::{IdentitySection, OracleSection, ParamsSection, RadialSection, Report};

fn exec(cfg: &RunConfig) -> Exec {
    if cfg.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn failing_list(xs: impl Iterator<Item = (String, bool)>) -> String {
    let bad: Vec<String> = xs.filter(|(_, ok)| !ok).map(|(id, _)| id).collect();
    if bad.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", bad.join(", "))
    }
}

pub fn verify(cfg: &RunConfig, reg: &Registry, report: &mut Report) {
    let mut reports = match reg.verify(&cfg.ids, cfg.mode, exec(cfg)) {
        Ok(r) => r,
        Err(e) => return report.error("identity suite", e),
    };
    let mut onshell = if cfg.ids.is_empty() && cfg.mode.is_none() {
        reg.verify_onshell_pass(exec(cfg))
    } else {
        Vec::new()
    };
    if cfg.reproducible {
        reports
            .iter_mut()
            .chain(onshell.iter_mut())
            .for_each(|r| r.millis = 0);
    }
    let verified = reports.iter().filter(|r| r.passed()).count();
    report.check(
        "identity suite",
        verified == reports.len(),
        format!(
            "{verified}/{} verified zero{}",
            reports.len(),
            failing_list(reports.iter().map(|r| (r.id.clone(), r.passed())))
        ),
    );
    if !onshell.is_empty() {
        let ok = onshell.iter().filter(|r| r.passed()).count();
        report.check(
            "on-shell pass",
            ok == onshell.len(),
            format!(
                "{ok}/{} stay zero with the equation imposed{}",
                onshell.len(),
                failing_list(onshell.iter().map(|r| (r.id.clone(), r.passed())))
            ),
        );
    }
    let mut combination = None;
    if cfg.ids.is_empty() {
        match derive_master_weights(reg) {
            Ok(d) => {
                report.check(
                    "combination recovery",
                    d.passed(),
                    format!("c1 = {}, c2 = {}", d.c1, d.c2),
                );
                combination = Some(d);
            }
            Err(e) => report.error("combination recovery", e),
        }
    }
    report.identities = Some(IdentitySection {
        verified,
        total: reports.len(),
        reports,
        onshell_pass: onshell,
        combination,
    });
}

pub fn params(cfg: &RunConfig, report: &mut Report) {
    let formulas = match check_minor_formulas() {
        Ok(f) => f,
        Err(e) => return report.error("matrix factorizations", e),
    };
    let failing = |fs: &[biharm_core::paramcheck::FormulaCheck]| {
        failing_list(fs.iter().map(|f| (f.name.clone(), f.holds)))
    };
    report.check(
        "matrix factorizations",
        formulas.iter().all(|f| f.holds),
        format!("{} exact identities{}", formulas.len(), failing(&formulas)),
    );
    let endpoints = check_endpoint_values();
    report.check(
        "endpoint values",
        endpoints.iter().all(|f| f.holds),
        format!(
            "{} displayed values{}",
            endpoints.len(),
            failing(&endpoints)
        ),
    );
    let certificates = match certify_range(5, cfg.n_max, exec(cfg)) {
        Ok(c) => c,
        Err(e) => return report.error("positivity certificates", e),
    };
    report.check(
        "positivity certificates",
        certificates.iter().all(|c| c.all_positive()),
        format!(
            "f1, f3, A11, 2x2 minor, det A for n in [5, {}]{}",
            cfg.n_max,
            failing_list(
                certificates
                    .iter()
                    .map(|c| (format!("n={}", c.n), c.all_positive()))
            )
        ),
    );
    let ident = exponent_identity();
    report.check("exponent identity", ident.holds, ident.name.clone());
    let middle = match middle_inequality() {
        Ok(m) => m,
        Err(e) => return report.error("exponent chain", e),
    };
    let exponents = match exponent_grid(5, cfg.exponent_n_max, cfg.exponent_grid) {
        Ok(e) => e,
        Err(e) => return report.error("exponent chain", e),
    };
    let mut bad_n: Vec<i64> = exponents
        .iter()
        .filter(|e| !e.chain_holds())
        .map(|e| e.n)
        .collect();
    bad_n.dedup();
    let bad_points = exponents.iter().filter(|e| !e.chain_holds()).count();
    report.check(
        "exponent chain",
        bad_points == 0,
        format!(
            "{} of {} exact grid points fail{}",
            bad_points,
            exponents.len(),
            if bad_n.is_empty() {
                String::new()
            } else {
                format!(" (n = {:?})", bad_n)
            }
        ),
    );
    let mut coefficients = Vec::new();
    for n in 5..=cfg.exponent_n_max {
        match coefficient_grid(n, cfg.coefficient_grid) {
            Ok(c) => coefficients.extend(c),
            Err(e) => return report.error("auxiliary coefficient", e),
        }
    }
    report.check(
        "auxiliary coefficient",
        coefficients.iter().all(|c| c.positive),
        format!(
            "a(1+2a)(2-(n-4)a) > 0 at {} exact points",
            coefficients.len()
        ),
    );
    let estimate_forms = subharmonic_estimate_forms();
    for f in estimate_forms.iter().filter(|f| !f.homogeneous) {
        report.notes.push(format!(
            "subharmonicity estimate used as `{}` mixes u-weights {:?}; the monitor implements `{}`",
            f.form, f.weights, estimate_forms[0].form
        ));
    }
    report.params = Some(ParamsSection {
        formulas,
        endpoint_values: endpoints,
        certified_n: [5, cfg.n_max],
        certificates,
        exponent_identity: ident,
        middle_inequality: middle,
        exponents,
        coefficients,
        estimate_forms,
    });
}

pub fn scan_pd(cfg: &RunConfig, report: &mut Report) {
    match numeric_pd_scan(cfg.pd_n_min, cfg.pd_n_max, cfg.pd_grid, exec(cfg)) {
        Ok(pd) => {
            report.check(
                "definiteness scan",
                pd.agreement_fraction == 1.0 && pd.all_positive,
                format!(
                    "{} points, sign agreement {}, min λ = {:e}",
                    pd.total_points, pd.agreement_fraction, pd.min_lambda
                ),
            );
            report.pd_scan = Some(pd);
        }
        Err(e) => report.error("definiteness scan", e),
    }
}

pub fn oracle(cfg: &RunConfig, reg: &Registry, report: &mut Report) {
    let oc = OracleConfig {
        seed: cfg.seed,
        samples: cfg.samples,
        dims: cfg.dims.clone(),
        tol: cfg.tol,
        points: cfg.points.clone(),
        replay_dir: cfg.replay_dir.clone(),
    };
    let ids: Vec<&Identity> = reg
        .identities()
        .iter()
        .filter(|i| cfg.ids.is_empty() || cfg.ids.contains(&i.id))
        .collect();
    let reports = numeric_check_all(&ids, &oc, exec(cfg));
    let ok = reports.iter().filter(|r| r.passed).count();
    report.check(
        "oracle agreement",
        ok == reports.len(),
        format!(
            "{ok}/{} within {:e} at {} jets per dimension{}",
            reports.len(),
            cfg.tol,
            cfg.samples,
            failing_list(reports.iter().map(|r| (r.id.clone(), r.passed)))
        ),
    );
    for r in &reports {
        if let Some(e) = &r.error {
            report.errors.push(format!("oracle {}: {e}", r.id));
        }
    }
    let mut sharp = Vec::new();
    for &n in &cfg.sharp_dims {
        match sharp_constant_search(n, cfg.sharp_iterations, cfg.seed) {
            Ok(s) => sharp.push(s),
            Err(e) => report.error("sharp constant", e),
        }
    }
    if !sharp.is_empty() {
        let worst = sharp
            .iter()
            .map(|s| s.gap_to_candidate.abs())
            .fold(0.0, f64::max);
        report.check(
            "sharp constant",
            worst <= 1e-6,
            format!("min |E|²|v|²/|Ev|² matches n/(n-1) within {worst:e}"),
        );
        let below: Vec<String> = sharp
            .iter()
            .filter(|s| s.below_four_thirds)
            .map(|s| s.n.to_string())
            .collect();
        if !below.is_empty() {
            report.notes.push(format!(
                "sharp trace-free constant is below the cited 4/3 for n = {}",
                below.join(", ")
            ));
        }
    }
    report.oracle = Some(OracleSection {
        reports,
        sharp_constant: sharp,
    });
}

pub fn radial(cfg: &RunConfig, report: &mut Report) {
    let tol = Tolerances::default();
    let u0s = log_grid(cfg.u0_range.0, cfg.u0_range.1, cfg.grid_u0);
    let v0s = lin_grid(cfg.v0_range.0, cfg.v0_range.1, cfg.grid_v0);
    let mut scans = Vec::new();
    let mut dumped = Vec::new();
    for &(n, alpha) in &cfg.radial_cases {
        let s = scan_shooting(n, alpha, &u0s, &v0s, cfg.rmax, &tol, exec(cfg));
        report.check(
            &format!("radial scan n={n} alpha={alpha}"),
            s.all_terminated(),
            format!(
                "{} cells, survival fraction {}, {} failed",
                s.total, s.survival_fraction, s.failed
            ),
        );
        let positive_z = s
            .cells
            .iter()
            .filter(|c| c.z_max.is_some_and(|z| z > 0.0))
            .count();
        if positive_z > 0 {
            report.notes.push(format!(
                "n={n} alpha={alpha}: Z_{{2/(n-4)}} > 0 somewhere on {positive_z} trajectories (local, out of hypothesis)"
            ));
        }
        for c in s.cells.iter().filter(|c| c.boundary) {
            report.notes.push(format!(
                "n={n} alpha={alpha}: cell ({}, {}) lies near a verdict boundary",
                c.u0, c.v0
            ));
        }
        if let Some(dir) = &cfg.dump_trajectories {
            if let Err(e) = dump(dir, n, alpha, &u0s, &v0s, cfg.rmax, &tol, &mut dumped) {
                report.error("trajectory dump", e);
            }
        }
        scans.push(s);
    }
    report.radial = Some(RadialSection { scans, dumped });
}

#[allow(clippy::too_many_arguments)]
fn dump(
    dir: &Path,
    n: usize,
    alpha: f64,
    u0s: &[f64],
    v0s: &[f64],
    rmax: f64,
    tol: &Tolerances,
    dumped: &mut Vec<String>,
) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    for (i, &u0) in u0s.iter().enumerate() {
        for (j, &v0) in v0s.iter().enumerate() {
            let r = shoot(n, alpha, u0, v0, rmax, tol).map_err(|e| e.to_string())?;
            let path = dir.join(format!("traj_n{n}_a{alpha}_u{i}_v{j}.csv"));
            write_trajectory_csv(&r, &path).map_err(|e| e.to_string())?;
            dumped.push(path.display().to_string());
        }
    }
    Ok(())
}
