use fibercoh::fiber::{Fiber, FiberPoint};
use fibercoh::groebner::{ideal_contains, ideal_gb, ideal_nf};
use fibercoh::hilbert::HilbertSeries;
use fibercoh::localcohom::LocalCohomology;
use fibercoh::ratmap::{differences, stable_limit};
use fibercoh::script::Script;
use fibercoh::strands::presentation_strand_dim;
use fibercoh::{Coeff, Degree, ModulePresentation, Poly, Ring, RingDescriptor};
use proptest::prelude::*;

fn xyz() -> Ring {
    Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1), ("z", 1)])).unwrap()
}

fn over_t() -> Ring {
    Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1)]).over_params(&["t"])).unwrap()
}

/// Terms `(coefficient, exponents)` of a small polynomial in three variables.
fn terms() -> impl Strategy<Value = Vec<(i64, [u32; 3])>> {
    prop::collection::vec((-3i64..=3, prop::array::uniform3(0u32..=2)), 1..=4)
}

fn build(r: &Ring, ts: &[(i64, [u32; 3])]) -> Poly {
    let mut p = Poly::zero(r);
    for (c, e) in ts {
        let mut m = Poly::from_int(r, *c);
        for (i, &k) in e.iter().enumerate().take(r.r()) {
            m = m.mul(&Poly::var(r, i).pow(k));
        }
        p = p.add(&m);
    }
    p
}

/// Homogeneous generator: a monomial, or a binomial of one degree.
fn homogeneous_gen() -> impl Strategy<Value = ([u32; 3], Option<(i64, [u32; 3])>)> {
    (prop::array::uniform3(0u32..=2), prop::option::of((1i64..=3, prop::array::uniform3(0u32..=2))))
}

fn build_gen(r: &Ring, (a, b): &([u32; 3], Option<(i64, [u32; 3])>)) -> Option<Poly> {
    let mono = |e: &[u32; 3]| build(r, &[(1, *e)]);
    let deg = |e: &[u32; 3]| e.iter().sum::<u32>();
    if deg(a) == 0 {
        return None;
    }
    Some(match b {
        Some((c, e)) if deg(e) == deg(a) && e != a => mono(a).sub(&mono(e).scale(&Coeff::from_int(*c))),
        _ => mono(a),
    })
}

fn gens_strategy() -> impl Strategy<Value = Vec<([u32; 3], Option<(i64, [u32; 3])>)>> {
    prop::collection::vec(homogeneous_gen(), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in terms(), b in terms(), c in terms()) {
        let r = xyz();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn groebner_basis_is_canonical(gs in prop::collection::vec(terms(), 1..=3)) {
        let r = xyz();
        let gens: Vec<Poly> = gs.iter().map(|t| build(&r, t)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let gb = ideal_gb(&r, &gens);
        for g in &gens {
            prop_assert!(ideal_contains(&gb, g));
            prop_assert!(ideal_nf(&gb, g).is_zero());
        }
        prop_assert_eq!(ideal_gb(&r, &gb), gb);
    }

    #[test]
    fn hilbert_function_matches_strand_rank(gs in gens_strategy()) {
        let r = xyz();
        let gens: Vec<Poly> = gs.iter().filter_map(|g| build_gen(&r, g)).collect();
        prop_assume!(!gens.is_empty());
        let hs = HilbertSeries::of_ideal(&r, &gens).unwrap();
        let m = ModulePresentation::quotient(&r, &gens).unwrap();
        for n in 0..=6 {
            prop_assert_eq!(hs.value(n), presentation_strand_dim(&m, Degree(n, 0)) as i128, "degree {}", n);
        }
    }

    #[test]
    fn local_duality_routes_agree(gs in gens_strategy()) {
        let r = xyz();
        let gens: Vec<Poly> = gs.iter().filter_map(|g| build_gen(&r, g)).collect();
        prop_assume!(!gens.is_empty());
        let m = ModulePresentation::quotient(&r, &gens).unwrap();
        let f = Fiber::new(&r, FiberPoint::Closed(vec![])).unwrap();
        let mut lc = LocalCohomology::new(&m, &f).unwrap();
        let w = lc.default_window(1);
        let a = lc.table_a(&w);
        let b = lc.table_b(&w).unwrap();
        let dims = |t: &fibercoh::localcohom::CohomologyTable| t.rows.iter().map(|x| (x.i, x.degree.clone(), x.dim)).collect::<Vec<_>>();
        prop_assert_eq!(dims(&a), dims(&b));
    }

    #[test]
    fn fiber_evaluation_is_multiplicative(a in terms(), b in terms(), t in -5i64..=5) {
        let r = over_t();
        let lift = |ts: &[(i64, [u32; 3])]| {
            // third exponent becomes a power of t
            ts.iter().fold(Poly::zero(&r), |acc, (c, e)| {
                let m = r.parse_poly(&format!("{c}*x^{}*y^{}*t^{}", e[0], e[1], e[2])).unwrap();
                acc.add(&m)
            })
        };
        let (a, b) = (lift(&a), lift(&b));
        let f = Fiber::new(&r, FiberPoint::at_ints(&r, &[t])).unwrap();
        prop_assert_eq!(f.poly(&a.mul(&b)), f.poly(&a).mul(&f.poly(&b)));
        prop_assert_eq!(f.poly(&a.add(&b)), f.poly(&a).add(&f.poly(&b)));
    }

    #[test]
    fn finite_differences_recover_leading_coefficient(
        c in 1i128..=9, r in 0usize..=3, lower in prop::collection::vec(-20i128..=20, 3)
    ) {
        let seq: Vec<i128> = (0..8i128)
            .map(|n| c * n.pow(r as u32) + lower.iter().enumerate().take(r).map(|(i, b)| b * n.pow(i as u32)).sum::<i128>())
            .collect();
        let fact: i128 = (1..=r as i128).product();
        prop_assert_eq!(stable_limit(&differences(&seq, r)), Some(c * fact));
    }

    #[test]
    fn script_format_round_trips(
        nvars in 1usize..=3,
        gs in prop::collection::vec(terms(), 1..=2),
        point in -4i64..=4,
        cmds in prop::collection::vec(0usize..5, 0..=4),
    ) {
        let names = ["x", "y", "z"];
        let vars: Vec<String> = names[..nvars].iter().map(|v| format!("{v}:1")).collect();
        let r = Ring::new(&RingDescriptor::standard(&names[..nvars].iter().map(|v| (*v, 1)).collect::<Vec<_>>()).over_params(&["t"])).unwrap();
        let gens: Vec<String> = gs.iter().map(|t| build(&r, t)).filter(|p| !p.is_zero()).map(|p| p.to_string()).collect();
        prop_assume!(!gens.is_empty());
        let mut text = format!(
            "ring R base poly(QQ, t) vars {};\nideal I = ({});\nmodule M = quotient I;\nfiber p = point(t={point});\n",
            vars.join(", "),
            gens.join(", ")
        );
        for c in cmds {
            text += match c {
                0 => "cmd localcoh M window [-2, 2] at p;\n",
                1 => "cmd loci M;\n",
                2 => "cmd specialize I power 2 at p;\n",
                3 => "cmd betti M at p;\n",
                _ => "cmd harness M index 0 degrees [0] over [p] random 2;\n",
            };
        }
        let s = Script::parse(&text).unwrap();
        let printed = s.to_string();
        let again = Script::parse(&printed).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(again.to_string(), printed);
    }
}
