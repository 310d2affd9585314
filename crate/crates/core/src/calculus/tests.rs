use super::*;
use crate::symcore::ps;

const FREE: SubstitutionMode = SubstitutionMode::Free;

fn ev(src: &str) -> ParamScalar {
    ps(src)
}

#[test]
fn gradient_of_gradient_norm() {
    let got = grad(&grad_sq(), FREE).unwrap();
    let want = hess().contract(&du(), &[(1, 0)]).unwrap().scale(&ev("2"));
    assert_eq!(got, want);
}

#[test]
fn gradient_product_rule() {
    let e = lap().mul_u_pow(1);
    let got = grad(&e, FREE).unwrap();
    let want = sum(
        1,
        &[
            (ev("1"), prod(&[&lap(), &du()])),
            (ev("1"), dlap().mul_u_pow(1)),
        ],
    );
    assert_eq!(got, want);
}

#[test]
fn gradient_of_z_a_matches_four_term_display() {
    let a = ev("a");
    let got = grad(&z_a(&a), FREE).unwrap();
    let hdu = hess().contract(&du(), &[(1, 0)]).unwrap();
    let want = sum(
        1,
        &[
            (ev("-1"), prod(&[&lap(), &du()]).mul_u_pow(-2)),
            (ev("1"), dlap().mul_u_pow(-1)),
            (ev("-2*a"), prod(&[&grad_sq(), &du()]).mul_u_pow(-3)),
            (ev("2*a"), hdu.mul_u_pow(-2)),
        ],
    );
    assert_eq!(got, want);
}

#[test]
fn divergence_of_gradient_is_laplacian() {
    let f = WeightedVectorField::new(ParamScalar::zero(), du()).unwrap();
    assert_eq!(divergence(&f, FREE).unwrap(), lap());
}

#[test]
fn divergence_of_hessian_carries_ricci() {
    // div(u_ij) = (Δu)_j + R_jm u^m
    let got = div(&hess(), FREE).unwrap();
    let want = dlap()
        .add(&ric().contract(&du(), &[(1, 0)]).unwrap())
        .unwrap();
    assert_eq!(got, want);
}

#[test]
fn raw_divergence_of_e_matches_display_and_its_named_form() {
    let b = b_formal();
    let got = div(&e_def(&b), FREE).unwrap();
    let hdu = hess().contract(&du(), &[(1, 0)]).unwrap();
    let display = sum(
        1,
        &[
            (ev("(n-1)/n"), dlap()),
            (ev("1"), ric().contract(&du(), &[(1, 0)]).unwrap()),
            (ev("b"), prod(&[&lap(), &du()]).mul_u_pow(-1)),
            (ev("(n-2)/n*b"), hdu.mul_u_pow(-1)),
            (ev("-(n-1)/n*b"), prod(&[&grad_sq(), &du()]).mul_u_pow(-2)),
        ],
    );
    assert_eq!(got, display);
    let named = substitute_defs(&display, Direction::Forward, &b).unwrap();
    let e_j = e_tensor().contract(&du(), &[(1, 0)]).unwrap().mul_u_pow(-1);
    let want = sum(
        1,
        &[
            (ev("(n-2)/n*b"), e_j),
            (ev("(n-1)/n"), f_vec()),
            (ev("1"), ric().contract(&du(), &[(1, 0)]).unwrap()),
        ],
    );
    assert_eq!(named, want);
}

#[test]
fn forward_image_of_hessian_traces_to_laplacian() {
    let b = b_formal();
    let fwd = substitute_defs(&hess(), Direction::Forward, &b).unwrap();
    assert_eq!(fwd.trace().unwrap(), lap());
    assert!(e_def(&b).trace().unwrap().is_zero());
}

#[test]
fn forward_backward_round_trip() {
    let b = b_formal();
    let e = sum(
        0,
        &[
            (ev("1"), hess().dot(&hess()).unwrap()),
            (ev("n"), prod(&[&bilap(), &lap()]).mul_u_pow(-1)),
            (ev("3"), dlap().dot(&du()).unwrap()),
        ],
    );
    let fwd = substitute_defs(&e, Direction::Forward, &b).unwrap();
    assert!(!fwd.contains(FactorKind::Hess));
    assert_eq!(substitute_defs(&fwd, Direction::Backward, &b).unwrap(), e);
}

#[test]
fn special_b_kills_laplacian_squared_term_in_grad_g() {
    let b = b_formal();
    let gg = grad_named(&g_scalar(), SubstitutionMode::OnShell, &b).unwrap();
    let key = prod(&[&lap(), &lap(), &du()]).mul_u_pow(-2);
    let (m, _) = key.terms().next().unwrap();
    let c = gg.coefficient(m);
    assert_eq!(c, ev("-(n+2)/n*b*((n+4)/n*(1+2*b)+alpha)"));
    let special = c.substitute(crate::symcore::Var::B, &b_special()).unwrap();
    assert!(special.is_zero());
}

#[test]
fn out_of_range_derivatives_are_errors() {
    assert!(matches!(grad(&dlap(), FREE), Err(Error::OrderOverflow(_))));
    assert!(matches!(grad(&bilap(), FREE), Err(Error::OrderOverflow(_))));
    assert!(grad(&bilap(), SubstitutionMode::OnShell).is_ok());
    let ricci = ric()
        .contract(&du(), &[(1, 0)])
        .unwrap()
        .dot(&du())
        .unwrap();
    assert!(matches!(
        grad(&ricci, FREE),
        Err(Error::UnsupportedCurvature(_))
    ));
    assert!(matches!(
        grad(&g_scalar(), FREE),
        Err(Error::UnexpandedNamed(_))
    ));
}

#[test]
fn divergence_is_linear() {
    let v1 = prod(&[&lap(), &du()]);
    let v2 = hess().contract(&du(), &[(1, 0)]).unwrap().mul_u_pow(-1);
    let c = ev("alpha/(n+4)");
    let combo = Expr::combine(&v1, &c, &v2, &ev("3")).unwrap();
    let lhs = div(&combo, FREE).unwrap();
    let rhs = Expr::combine(
        &div(&v1, FREE).unwrap(),
        &c,
        &div(&v2, FREE).unwrap(),
        &ev("3"),
    )
    .unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn estimate_forms_differ_in_homogeneity() {
    let f = subharmonic_estimate_forms();
    assert_eq!(f[0].weights, vec![1]);
    assert!(f[0].homogeneous);
    assert_eq!(f[1].weights, vec![0, 1]);
    assert!(!f[1].homogeneous);
}
