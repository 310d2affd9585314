use super::*;
use crate::symcore::builders::*;
use crate::symcore::ps;

fn status(reg: &Registry, id: &str) -> VerificationReport {
    verify_identity(reg.get(id).unwrap())
}

#[test]
fn divergence_of_e_is_exact() {
    let r = status(&Registry::printed(), "I3");
    assert!(r.passed(), "{:?}", r.residual_terms);
}

#[test]
fn master_identity_is_exact() {
    let r = status(&Registry::printed(), "I12");
    assert!(r.passed(), "{:?}", r.residual_terms);
}

#[test]
fn perturbed_a33_leaves_a_residual() {
    let reg = Registry::printed();
    let i12 = reg.get("I12").unwrap();
    let k = i12.rhs.iter().position(|t| t.label == "|∇u|⁶/u⁴").unwrap();
    let r = verify_identity(&i12.perturbed(k, &ps("1")));
    assert_eq!(r.status, Status::Residual);
    assert_eq!(r.residual_count, 1);
}

#[test]
fn displayed_errata_and_corrections() {
    let reg = Registry::with_corrections();
    for id in ["I14", "I15"] {
        assert_eq!(status(&reg, id).status, Status::Residual, "{id}");
    }
    for id in ["I14c", "I15c"] {
        let r = status(&reg, id);
        assert!(r.passed(), "{id}: {:?}", r.residual_terms);
    }
}

#[test]
fn catalog_shape() {
    let list = list_registry();
    assert_eq!(list.len(), 15);
    let mut ids: Vec<_> = list.iter().map(|e| e.id.clone()).collect();
    ids.dedup();
    assert_eq!(ids.len(), 15);
    assert!(list.iter().all(|e| !e.anchor.is_empty()));
}

#[test]
fn unknown_id_is_rejected() {
    let reg = Registry::printed();
    let err = reg.verify(&["I99".to_string()], None, Exec::Sequential);
    assert!(matches!(err, Err(Error::UnknownName(_))));
}

#[test]
fn duplicate_basis_is_singular() {
    let b = vec![lap(), lap()];
    assert!(matches!(
        solve_combination(&lap(), &b),
        Err(Error::SingularSystem(_))
    ));
}

#[test]
fn zero_target_has_zero_weights() {
    let w = solve_combination(&Expr::zero(0), &[lap(), grad_sq()]).unwrap();
    assert!(w.iter().all(|c| c.is_zero()));
}

#[test]
fn missing_monomial_is_named() {
    let err = solve_combination(&bilap(), &[lap()]).unwrap_err();
    match err {
        Error::NoCombination(m) => assert!(m.contains("LLu"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn master_weights_recovered() {
    let d = derive_master_weights(&Registry::printed()).unwrap();
    assert!(d.c1_matches && d.c2_matches, "{} {}", d.c1, d.c2);
    assert!(d.bracket_matches);
    assert!(d.rhs_residual.is_empty(), "{:?}", d.rhs_residual);
}
