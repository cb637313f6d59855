use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quotfib::census::{census, CensusOptions};
use quotfib::chart_eqs::{chart_points_ff, generate_invariance_equations, ChartSpec};
use quotfib::exec::Execution;
use quotfib::modules::{chart_transition, classify_type, cyclic_kernel, ModuleElement, SubmoduleBasis};
use quotfib::poly::var_names;
use quotfib::projective::{adjugate_compose_check, order_along_line, DivisorLedger, ProjectiveMap};
use quotfib::stable_pairs::{apply_deg3_automorphism, apply_edge_automorphism, invariant, random_form, random_matrix};
use quotfib::{parse_poly, Field, Monomial, MultiPoly, Scalar, TruncatedPoly};

const Q: Field = Field::Rationals;

fn xyz() -> Vec<String> {
    var_names(&["x", "y", "z"])
}

fn poly_strategy(field: Field) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -9i64..10), 0..6).prop_map(move |terms| {
        MultiPoly::from_terms(
            &xyz(),
            field,
            terms.into_iter().map(|((a, b, c), k)| (Monomial(vec![a, b, c]), Scalar::from_int(field, k))),
        )
    })
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-40i64..40, 1i64..20).prop_map(|(n, d)| Scalar::from_ratio(Q, &BigInt::from(n), &BigInt::from(d)).unwrap())
}

fn truncated(field: Field, n: usize) -> impl Strategy<Value = TruncatedPoly> {
    prop::collection::vec(-5i64..6, n).prop_map(move |c| TruncatedPoly::from_ints(field, n, &c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prime_field_axioms(a in 0i64..101, b in 0i64..101, c in 0i64..101) {
        let f = Field::Prime(101);
        let (a, b, c) = (Scalar::from_int(f, a), Scalar::from_int(f, b), Scalar::from_int(f, c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn rational_inverse(a in rational()) {
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn polynomial_ring_axioms(a in poly_strategy(Q), b in poly_strategy(Q), c in poly_strategy(Q)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn print_then_parse_is_identity(a in poly_strategy(Q), p in poly_strategy(Field::Prime(7))) {
        prop_assert_eq!(parse_poly(&a.to_string(), &xyz(), Q).unwrap(), a);
        prop_assert_eq!(parse_poly(&p.to_string(), &xyz(), Field::Prime(7)).unwrap(), p);
    }

    #[test]
    fn exact_division_recovers_factor(a in poly_strategy(Q), b in poly_strategy(Q)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_divide(&b).unwrap(), Some(a));
    }

    #[test]
    fn multiplicity_is_additive(a in poly_strategy(Q), b in poly_strategy(Q), k in 0u32..3) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let prime = parse_poly("x - y", &xyz(), Q).unwrap();
        let ma = a.multiplicity_along(&prime).unwrap();
        let mb = b.multiplicity_along(&prime).unwrap();
        let ab = &(&a * &b) * &prime.pow(k);
        prop_assert_eq!(ab.multiplicity_along(&prime).unwrap(), ma + mb + k);
    }

    #[test]
    fn leibniz_rule(a in poly_strategy(Q), b in poly_strategy(Q)) {
        let d = |p: &MultiPoly| p.partial_derivative("y").unwrap();
        prop_assert_eq!(d(&(&a * &b)), &(&d(&a) * &b) + &(&a * &d(&b)));
    }

    #[test]
    fn truncated_inverse(p in truncated(Q, 5)) {
        prop_assume!(p.is_unit());
        let inv = p.invert().unwrap();
        prop_assert_eq!(p.mul(&inv).unwrap(), TruncatedPoly::one(Q, 5));
        prop_assert_eq!(inv.invert().unwrap(), p);
    }

    #[test]
    fn truncated_ring_laws(a in truncated(Field::Prime(5), 4), b in truncated(Field::Prime(5), 4), c in truncated(Field::Prime(5), 4)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.shift(), a.mul(&TruncatedPoly::t_power(Field::Prime(5), 4, 1)).unwrap());
    }

    #[test]
    fn transition_is_an_involution(m1 in rational(), rest in prop::collection::vec(rational(), 1..4)) {
        prop_assume!(!m1.is_zero());
        let mut m = vec![m1];
        m.extend(rest);
        let l = chart_transition(&m).unwrap();
        prop_assert_eq!(chart_transition(&l).unwrap(), m);
    }

    #[test]
    fn kernel_generator_is_annihilated(e in truncated(Field::Prime(5), 3), h in truncated(Field::Prime(5), 3)) {
        prop_assume!(e.is_unit() || h.is_unit());
        let (g, basis) = cyclic_kernel(&e, &h).unwrap();
        let c = g.components();
        prop_assert!(c[0].mul(&e).unwrap().add(&c[1].mul(&h).unwrap()).unwrap().is_zero());
        prop_assert_eq!(basis.dim(), 3);
    }

    #[test]
    fn module_type_ignores_generators(
        a in truncated(Field::Prime(3), 3), b in truncated(Field::Prime(3), 3),
        c in truncated(Field::Prime(3), 3), d in truncated(Field::Prime(3), 3),
        s in 1i64..3,
    ) {
        let f = Field::Prime(3);
        let g1 = ModuleElement::new(vec![a.clone(), b.clone()]).unwrap();
        let g2 = ModuleElement::new(vec![c.clone(), d.clone()]).unwrap();
        let sc = Scalar::from_int(f, s);
        // (g1 + s·g2, g2) generates the same submodule
        let h1 = ModuleElement::new(vec![a.add(&c.scale(&sc)).unwrap(), b.add(&d.scale(&sc)).unwrap()]).unwrap();
        let s1 = SubmoduleBasis::generated_by(3, 2, f, &[g1, g2.clone()]).unwrap();
        let s2 = SubmoduleBasis::generated_by(3, 2, f, &[g2, h1]).unwrap();
        prop_assert_eq!(&s1, &s2);
        let t = classify_type(&s1);
        prop_assert_eq!(t.size(), s1.dim());
        prop_assert!(t.parts() <= 2);
    }

    #[test]
    fn edge_invariant_survives_automorphisms(seed in any::<u64>(), g1 in 1i64..5, shear in 0i64..5) {
        let f5 = Field::Prime(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(f5, &[1, 0, 0], 3, &mut rng);
        if let Ok(inv) = invariant(&m) {
            let s = |v: i64| Scalar::from_int(f5, v);
            let g2 = vec![vec![s(1), s(shear)], vec![s(0), s(2)]];
            let phi = vec![random_form(f5, 1, &mut rng), random_form(f5, 1, &mut rng)];
            let t = apply_edge_automorphism(&m, &s(g1), &g2, &phi).unwrap();
            prop_assert_eq!(invariant(&t).unwrap(), inv);
        }
    }

    #[test]
    fn deg3_invariant_survives_automorphisms(seed in any::<u64>(), g1 in 1i64..7, g2 in 1i64..7) {
        let f7 = Field::Prime(7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(f7, &[2, 1], 2, &mut rng);
        if let Ok(inv) = invariant(&m) {
            let l = random_form(f7, 1, &mut rng);
            let t = apply_deg3_automorphism(&m, &Scalar::from_int(f7, g1), &Scalar::from_int(f7, g2), &l).unwrap();
            prop_assert_eq!(invariant(&t).unwrap(), inv);
        }
    }

    #[test]
    fn adjugate_identity_on_random_matrices(seed in any::<u64>(), d0 in 0u32..3, d1 in 0u32..3) {
        let f5 = Field::Prime(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = vec![
            vec![random_form(f5, d0, &mut rng), random_form(f5, d0, &mut rng)],
            vec![random_form(f5, d1, &mut rng), random_form(f5, d1, &mut rng)],
        ];
        prop_assert!(adjugate_compose_check(&m).unwrap().pass);
    }
}

#[test]
fn census_is_independent_of_scheduling() {
    let base = census(3, 2, 3, &CensusOptions { shards: 1, execution: Execution::Sequential, ..CensusOptions::default() }).unwrap();
    for shards in [2, 5, 16] {
        for execution in [Execution::Sequential, Execution::Parallel] {
            let r = census(3, 2, 3, &CensusOptions { shards, execution, ..CensusOptions::default() }).unwrap();
            assert_eq!(r, base);
        }
    }
}

#[test]
fn chart_points_give_invariant_subspaces_in_the_chart() {
    let f2 = Field::Prime(2);
    let chart = ChartSpec::standard(3).unwrap();
    let sys = generate_invariance_equations(&chart, Q).unwrap();
    for p in chart_points_ff(&sys, 2).unwrap() {
        let vals: Vec<Scalar> = p.iter().map(|&v| Scalar::from_int(f2, v as i64)).collect();
        let s = chart.subspace_at(f2, &vals).expect("chart solutions are t-invariant");
        assert!(chart.contains(&s));
    }
}

/// Random 𝔽_q points on a candidate prime: the pulled-back hyperplane
/// vanishes to at least the claimed order along every line through them.
#[test]
fn pullback_orders_hold_along_random_lines() {
    use rand::Rng;
    let q = 7u32;
    let f = Field::Prime(q);
    let phi = ProjectiveMap::phi_standard();
    let ledger = DivisorLedger::standard();
    let table = quotfib::projective::phi_pullback_table(&phi, &ledger).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (h, pb) in &table {
        let eq = ledger.get(h).unwrap().equation.clone().unwrap();
        let pulled = phi.pull_back(&eq).unwrap().to_field(f).unwrap();
        for (name, k) in pb.divisor.terms() {
            for _ in 0..100 {
                let mut p: Vec<u32> = (0..4).map(|_| rng.gen_range(0..q)).collect();
                match name {
                    "G" => {
                        p[0] = rng.gen_range(1..q);
                        let inv = quotfib::Scalar::from_int(f, p[0] as i64).inv().unwrap().prime_value().unwrap();
                        p[2] = p[1] * p[1] % q * inv % q;
                    }
                    _ => p[name[2..].parse::<usize>().unwrap() - 1] = 0,
                }
                let dir: Vec<u32> = (0..4).map(|_| rng.gen_range(0..q)).collect();
                if let Some(ord) = order_along_line(&pulled, &p, &dir).unwrap() {
                    assert!(ord >= k as u32, "{h}: order {ord} < {k} along {name} at {p:?}");
                }
            }
        }
    }
}

#[test]
fn divisor_degree_is_additive() {
    let ledger = DivisorLedger::standard();
    let mut a = quotfib::projective::DivisorSum::single("A_1", 2);
    let b = quotfib::projective::DivisorSum::single("G", 3);
    let da = ledger.degree(&a).unwrap();
    let db = ledger.degree(&b).unwrap();
    a.add_sum(&b);
    assert_eq!(ledger.degree(&a).unwrap(), da + db);
}
