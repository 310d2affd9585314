use biharm_core::calculus::{divergence, SubstitutionMode, WeightedVectorField};
use biharm_core::symcore::builders::*;
use biharm_core::symcore::poly::NVARS;
use biharm_core::symcore::{Expr, Factor, FactorKind, ParamScalar, Slot, TensorMonomial, Var};
use num_rational::BigRational;
use proptest::prelude::*;

const KINDS: [FactorKind; 10] = [
    FactorKind::Du,
    FactorKind::Hess,
    FactorKind::D3u,
    FactorKind::Lap,
    FactorKind::DLap,
    FactorKind::BiLap,
    FactorKind::Ric,
    FactorKind::Metric,
    FactorKind::E,
    FactorKind::F,
];

/// Raw material for a monomial: factor kinds, `u` power, free-slot count
/// and a seed for pairing the remaining slots.
fn monomial() -> impl Strategy<Value = TensorMonomial> {
    (
        prop::collection::vec(0..KINDS.len(), 1..=6),
        -3i32..=3,
        0usize..=2,
        any::<u64>(),
    )
        .prop_filter_map("slot count", |(kinds, u_pow, free, seed)| {
            let kinds: Vec<FactorKind> = kinds.into_iter().map(|k| KINDS[k]).collect();
            let total: usize = kinds.iter().map(|k| k.arity()).sum();
            if total > 14 || free > total || !(total - free).is_multiple_of(2) {
                return None;
            }
            let order = permutation(total, seed);
            let mut slots = vec![Slot::Free(0); total];
            for (pos, &s) in order.iter().enumerate() {
                slots[s] = if pos < free {
                    Slot::Free(pos as u8)
                } else {
                    Slot::Dummy(((pos - free) / 2) as u16)
                };
            }
            let mut it = slots.into_iter();
            let factors = kinds
                .iter()
                .map(|&k| Factor::new(k, &it.by_ref().take(k.arity()).collect::<Vec<_>>()))
                .collect();
            Some(TensorMonomial::new(u_pow, factors))
        })
}

/// Deterministic Fisher-Yates driven by a splitmix stream.
fn permutation(n: usize, mut seed: u64) -> Vec<usize> {
    let mut next = move || {
        seed = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = seed;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, (next() % (i as u64 + 1)) as usize);
    }
    p
}

/// Same tensor, different presentation: dummies renamed, factors
/// reordered, symmetric slots swapped.
fn relabel(m: &TensorMonomial, seed: u64) -> TensorMonomial {
    let dummies = m
        .factors()
        .iter()
        .flat_map(|f| f.slots.iter())
        .filter(|s| matches!(s, Slot::Dummy(_)))
        .count()
        / 2;
    let rename = permutation(dummies, seed);
    let mut factors: Vec<Factor> = m
        .factors()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut slots: Vec<Slot> = f
                .slots
                .iter()
                .map(|s| match s {
                    Slot::Dummy(d) => Slot::Dummy(rename[*d as usize] as u16 + 7),
                    s => *s,
                })
                .collect();
            let flip = (seed >> (i % 60)) & 1 == 1;
            match f.kind {
                FactorKind::Hess | FactorKind::Ric | FactorKind::Metric | FactorKind::E if flip => {
                    slots.swap(0, 1)
                }
                FactorKind::D3u if flip => slots.swap(1, 2),
                _ => {}
            }
            Factor::new(f.kind, &slots)
        })
        .collect();
    let order = permutation(factors.len(), seed.rotate_left(17));
    let mut shuffled = Vec::with_capacity(factors.len());
    for &i in &order {
        shuffled.push(std::mem::replace(
            &mut factors[i],
            Factor::new(FactorKind::Lap, &[]),
        ));
    }
    TensorMonomial::new(m.u_pow(), shuffled)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn canonical_form_ignores_presentation(m in monomial(), seed in any::<u64>()) {
        let a = m.canonicalize();
        let b = relabel(&m, seed).canonicalize();
        match (&a, &b) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(x, y);
                prop_assert_eq!(x.to_string(), y.to_string());
                prop_assert_eq!(&x.canonicalize().unwrap(), x);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }
}

/// Rational functions of `(n, α, a, b)` built from small pieces.
fn scalar() -> impl Strategy<Value = ParamScalar> {
    let leaf = prop_oneof![
        (-4i64..=4).prop_map(ParamScalar::int),
        (0..NVARS).prop_map(|i| ParamScalar::var(Var::ALL[i])),
        ((-3i64..=3), (1i64..=4)).prop_map(|(p, q)| ParamScalar::ratio(p, q)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        (inner.clone(), inner, 0u8..4).prop_map(|(x, y, op)| match op {
            0 => &x + &y,
            1 => &x - &y,
            2 => &x * &y,
            _ => x.checked_div(&y).unwrap_or(x),
        })
    })
}

fn point() -> impl Strategy<Value = [BigRational; NVARS]> {
    prop::array::uniform4(
        ((-40i64..=40), (1i64..=9)).prop_map(|(p, q)| BigRational::new(p.into(), q.into())),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn equality_agrees_with_evaluation(x in scalar(), y in scalar(), pt in point()) {
        let (ex, ey) = match (x.eval(&pt), y.eval(&pt)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Ok(()),
        };
        if x == y {
            prop_assert_eq!(&ex, &ey);
        }
        if ex != ey {
            prop_assert_ne!(&x, &y);
        }
        prop_assert_eq!((&x - &y).is_zero(), x == y);
        // a rewritten but equal form is recognised
        let rewritten = &(&(&x * &y) + &x) - &(&y * &x);
        prop_assert_eq!(&rewritten, &x);
        prop_assert_eq!((&x + &y).eval(&pt).unwrap(), &ex + &ey);
        prop_assert_eq!((&x * &y).eval(&pt).unwrap(), &ex * &ey);
        if let Ok(q) = x.checked_div(&y) {
            if let (Ok(v), false) = (q.eval(&pt), num_traits::Zero::is_zero(&ey)) {
                prop_assert_eq!(v, &ex / &ey);
            }
        }
    }

    #[test]
    fn coefficient_ring_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_zero());
        prop_assert!((&x * &ParamScalar::zero()).is_zero());
    }
}

/// Small vector fields in the raw jet symbols.
fn vector_field() -> impl Strategy<Value = Expr> {
    let atoms = || {
        vec![
            du(),
            dlap(),
            prod(&[&lap(), &du()]),
            prod(&[&grad_sq(), &du()]),
            hess().contract(&du(), &[(1, 0)]).unwrap(),
            prod(&[&hess().trace().unwrap(), &dlap()]),
        ]
    };
    prop::collection::vec((0usize..6, -2i32..=2, scalar()), 1..=4).prop_map(move |parts| {
        let atoms = atoms();
        let parts: Vec<(ParamScalar, Expr)> = parts
            .into_iter()
            .map(|(i, k, c)| (c, atoms[i].mul_u_pow(k)))
            .collect();
        sum(1, &parts)
    })
}

fn weighted(w: &ParamScalar, v: &Expr) -> Expr {
    divergence(
        &WeightedVectorField::new(w.clone(), v.clone()).unwrap(),
        SubstitutionMode::Free,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn expressions_form_a_module(x in vector_field(), y in vector_field(), z in vector_field(), c in scalar()) {
        let one = ParamScalar::one();
        let xy_z = Expr::combine(&Expr::combine(&x, &one, &y, &one).unwrap(), &one, &z, &one).unwrap();
        let x_yz = Expr::combine(&x, &one, &Expr::combine(&y, &one, &z, &one).unwrap(), &one).unwrap();
        prop_assert_eq!(&xy_z, &x_yz);
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert!(x.scale(&ParamScalar::zero()).is_empty());
        prop_assert!(x.sub(&x).unwrap().is_empty());
        prop_assert_eq!(x.add(&y).unwrap().scale(&c), x.scale(&c).add(&y.scale(&c)).unwrap());
    }

    #[test]
    fn weighted_divergence_is_linear_and_shifts_weight(
        v in vector_field(),
        w in vector_field(),
        c in scalar(),
        w1 in scalar(),
        w2 in scalar(),
        k in -2i32..=2,
    ) {
        // linearity over coefficients
        prop_assert_eq!(weighted(&w1, &v.scale(&c)), weighted(&w1, &v).scale(&c));
        prop_assert_eq!(
            weighted(&w1, &v.add(&w).unwrap()),
            weighted(&w1, &v).add(&weighted(&w1, &w)).unwrap()
        );
        // u^{-(w1+w2)} div(u^{w1+w2} V) = u^{-w1} div(u^{w1} V) + w2 <∇u, V>/u
        let split = Expr::combine(
            &weighted(&w1, &v),
            &ParamScalar::one(),
            &v.dot(&du()).unwrap().mul_u_pow(-1),
            &w2,
        )
        .unwrap();
        prop_assert_eq!(weighted(&(&w1 + &w2), &v), split);
        // moving u^k between the weight and the field
        let kk = ParamScalar::int(k as i64);
        prop_assert_eq!(weighted(&w1, &v.mul_u_pow(k)), weighted(&(&w1 + &kk), &v).mul_u_pow(k));
    }
}
