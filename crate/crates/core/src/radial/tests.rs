use super::*;

fn run(n: usize, alpha: f64, u0: f64, v0: f64) -> ShootingResult {
    shoot(n, alpha, u0, v0, 50.0, &Tolerances::default()).unwrap()
}

#[test]
fn zero_laplacian_start_turns_subharmonic_at_once() {
    let r = run(6, 2.0, 1.0, 0.0);
    assert_eq!(r.verdict, Verdict::SubharmonicityViolated);
    assert!(r.r_end < 1e-5);
}

#[test]
fn constant_data_cannot_persist() {
    // p = q = 0 would need Δ²u = 0, but u₀^α > 0 forces q' > 0.
    let y = series_start(6, 2.0, 1.0, 0.0, 1e-3);
    assert!(y[3] > 0.0 && y[2] > 0.0);
    assert_eq!(y[1], 0.0);
}

#[test]
fn reference_cell_terminates() {
    let r = run(6, 2.0, 1.0, -1.0);
    assert!(!r.verdict.survived(), "{:?}", r.verdict);
    assert!(r.r_end < 50.0);
    let z = check_z_estimate(&r, None).unwrap();
    assert!(z.max_z.is_finite());
    assert_eq!(z.a, 1.0);
    // Z diverges as u -> 0+ with p != 0
    assert!(z.positive);
    let first = z.first_positive_r.unwrap();
    assert!(first > 0.0 && first < r.r_end);
}

#[test]
fn checkpoints_are_monotone() {
    let r = run(8, 2.0, 2.0, -3.0);
    assert!(r.checkpoints.windows(2).all(|w| w[0].r < w[1].r));
    assert_eq!(r.checkpoints.last().unwrap().r, r.r_end);
}

#[test]
fn series_start_is_symmetric() {
    for (u0, v0) in [(1.0, -1.0), (0.3, -7.0), (5.0, -0.2)] {
        let r0 = 1e-6;
        let y = series_start(7, 2.5, u0, v0, r0);
        assert!((y[1] / r0 - v0 / 7.0).abs() < 1e-8);
        let s = RadialState::from(r0, &y);
        // u'' → v₀/n at the center
        assert!((s.u_rr(7) - v0 / 7.0).abs() < 1e-8);
    }
}

#[test]
fn halving_tolerance_moves_termination_radius_little() {
    let coarse = run(6, 2.0, 1.0, -1.0);
    let fine = shoot(
        6,
        2.0,
        1.0,
        -1.0,
        50.0,
        &Tolerances {
            rtol: 5e-11,
            atol: 5e-11,
            ..Tolerances::default()
        },
    )
    .unwrap();
    assert_eq!(coarse.verdict, fine.verdict);
    let rel = (coarse.r_end - fine.r_end).abs() / fine.r_end;
    assert!(rel < 1e-6, "{rel:e}");
}

#[test]
fn verdicts_are_stable_off_the_boundary() {
    let u0s = log_grid(0.1, 10.0, 5);
    let v0s = lin_grid(-10.0, 0.0, 5);
    for &u0 in &u0s {
        for &v0 in &v0s {
            let a = run(6, 2.0, u0, v0);
            if a.margin < 1e-6 {
                continue;
            }
            for (du, dv) in [(1e-9, 0.0), (0.0, -1e-9)] {
                let b = run(6, 2.0, u0 + du, v0 + dv);
                assert_eq!(a.verdict, b.verdict, "({u0}, {v0})");
            }
        }
    }
}

#[test]
fn scan_has_no_survivors() {
    let s = scan_shooting(
        6,
        2.0,
        &log_grid(0.1, 10.0, 4),
        &lin_grid(-10.0, 0.0, 4),
        50.0,
        &Tolerances::default(),
        Exec::Parallel,
    );
    assert_eq!(s.total, 16);
    assert!(s.all_terminated());
    assert_eq!(s.survival_fraction, 0.0);
    assert_eq!(
        s.positivity_violated + s.subharmonicity_violated + s.blow_up,
        16
    );
    // u₀ major order
    assert_eq!(
        (s.cells[1].u0, s.cells[4].u0),
        (s.cells[0].u0, s.cells[5].u0)
    );
}

#[test]
fn empty_grid_gives_empty_table() {
    let s = scan_shooting(
        6,
        2.0,
        &[],
        &[-1.0],
        50.0,
        &Tolerances::default(),
        Exec::Sequential,
    );
    assert!(s.cells.is_empty());
    assert_eq!(s.survival_fraction, 0.0);
}

#[test]
fn bad_cells_do_not_stop_the_scan() {
    let s = scan_shooting(
        6,
        2.0,
        &[1.0],
        &[-1.0, 0.5],
        50.0,
        &Tolerances::default(),
        Exec::Sequential,
    );
    assert_eq!(s.failed, 1);
    assert!(s.cells[1].error.is_some());
    assert!(s.cells[0].verdict.is_some());
}

#[test]
fn parameter_checks() {
    let t = Tolerances::default();
    assert!(shoot(4, 2.0, 1.0, -1.0, 50.0, &t).is_err());
    assert!(shoot(6, 1.0, 1.0, -1.0, 50.0, &t).is_err());
    assert!(shoot(6, 2.0, 0.0, -1.0, 50.0, &t).is_err());
    assert!(shoot(6, 2.0, 1.0, 1.0, 50.0, &t).is_err());
    let over = Tolerances {
        allow_positive_v0: true,
        ..Tolerances::default()
    };
    let r = shoot(6, 2.0, 1.0, 1.0, 50.0, &over).unwrap();
    assert!(r.out_of_hypothesis);
    assert_eq!(r.verdict, Verdict::SubharmonicityViolated);
}

#[test]
fn z_monitor_on_flat_gradient_window() {
    let mk = |r: f64, p: f64, v: f64| RadialState {
        r,
        u: 1.0,
        p,
        v,
        q: 0.0,
    };
    let mut res = run(6, 2.0, 1.0, -1.0);
    res.checkpoints = vec![mk(0.1, 0.0, -0.5), mk(0.2, 0.0, -0.25)];
    let z = check_z_estimate(&res, None).unwrap();
    assert!(z.max_z < 0.0 && !z.positive);
    assert_eq!(z.at_r, 0.2);
    // a = 0 reduces to v/u, nonpositive on the window
    let z0 = check_z_estimate(&run(6, 2.0, 1.0, -1.0), Some(0.0)).unwrap();
    assert!(z0.max_z <= 0.0);
    res.checkpoints = vec![mk(0.1, 0.0, 0.5)];
    assert_eq!(check_z_estimate(&res, None), Err(Error::EmptyWindow));
}

#[test]
fn trajectory_csv_has_header_and_rows() {
    let r = run(6, 2.0, 1.0, -1.0);
    let path = std::env::temp_dir().join(format!("traj-{}.csv", std::process::id()));
    write_trajectory_csv(&r, &path).unwrap();
    let body = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("r,u,p,v,q,Z"));
    assert_eq!(lines.count(), r.checkpoints.len());
}
