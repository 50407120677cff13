use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use liyorke::lp::{apply_tf, finite_window_atoms, orbit_norms, orbit_norms_oracle, SimpleFunction};
use liyorke::measure::{expansion_constants, preimage_set, set_measure};
use liyorke::shift::{window_max_product, window_max_product_oracle, ShiftRule, WeightedShift};
use liyorke::spec_file::{export_spec, parse_spec};
use liyorke::system::{AtomicSystem, Space, Table};
use liyorke::verdict::{CriterionId, Status};
use liyorke::{decide::decide, gallery, Atom, AtomSet, Exponent, ExtendedWeight, Rational, Scalar};

type Q = Rational;

fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![Just(Exponent::ONE), Just(Exponent::TWO)]
}

fn gallery_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(gallery::entries().iter().map(|e| e.name).collect::<Vec<_>>())
}

/// A finite table: measures in (0, 8], arbitrary self-map.
fn table() -> impl Strategy<Value = AtomicSystem<Q>> {
    (1usize..=8).prop_flat_map(|n| {
        prop::collection::vec(((1i64..=8, 1i64..=4), 0..n as i64), n).prop_map(|rows| {
            let entries = rows
                .iter()
                .enumerate()
                .map(|(i, &((a, b), img))| (Atom::Point(i as i64), (ExtendedWeight::Finite(q(a, b)), Atom::Point(img))))
                .collect();
            AtomicSystem::new("table", Space::Table(Table::new(entries, BTreeSet::new()).unwrap()))
        })
    })
}

/// Coefficients for up to five atoms drawn from the finite window.
fn coefficients() -> impl Strategy<Value = Vec<(usize, i64, i64)>> {
    prop::collection::vec((0usize..64, -9i64..=9, 1i64..=4), 1..=5)
}

fn vector(sys: &AtomicSystem<Q>, coeffs: &[(usize, i64, i64)], p: Exponent) -> SimpleFunction<Q> {
    let pool = finite_window_atoms(sys, 4);
    let values: BTreeMap<Atom, Q> = coeffs.iter().map(|&(i, n, d)| (pool[i % pool.len()], q(n, d))).collect();
    SimpleFunction::new(sys, values, p).unwrap()
}

fn ly(sys: &AtomicSystem<Q>, h: u64) -> BTreeMap<CriterionId, Status> {
    decide(sys, h)
        .unwrap()
        .into_iter()
        .filter(|(c, _)| CriterionId::LY.contains(c))
        .map(|(c, v)| (c, v.status))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn orbit_norms_agree_with_iteration(name in gallery_name(), coeffs in coefficients(), p in exponent(), h in 0u64..=40) {
        let sys = gallery::build(name).unwrap();
        let phi = vector(&sys, &coeffs, p);
        prop_assert_eq!(orbit_norms(&sys, &phi, h).unwrap(), orbit_norms_oracle(&sys, &phi, h).unwrap());
    }

    #[test]
    fn composition_is_linear(name in gallery_name(), a in coefficients(), b in coefficients(), k in -5i64..=5) {
        let sys = gallery::build(name).unwrap();
        let (phi, psi) = (vector(&sys, &a, Exponent::ONE), vector(&sys, &b, Exponent::ONE));
        let k = q(k, 3);
        // T(kφ − ψ) = k·Tφ − Tψ
        let lhs = apply_tf(&sys, &phi.scale(&k).sub(&psi).unwrap()).unwrap();
        let rhs = apply_tf(&sys, &phi).unwrap().scale(&k).sub(&apply_tf(&sys, &psi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn indicator_norm_is_preimage_measure(name in gallery_name(), picks in prop::collection::vec(0usize..64, 1..=4), k in 0u64..=30, p in exponent()) {
        let sys = gallery::build(name).unwrap();
        let pool = finite_window_atoms(&sys, 4);
        let b: Vec<Atom> = picks.iter().map(|&i| pool[i % pool.len()]).collect::<BTreeSet<_>>().into_iter().collect();
        let mut phi = SimpleFunction::indicator(&sys, &b, p).unwrap();
        for _ in 0..k {
            phi = apply_tf(&sys, &phi).unwrap();
        }
        let set: AtomSet = b.iter().copied().collect();
        let want = set_measure(&sys, &preimage_set(&sys, &set, k).unwrap()).unwrap();
        prop_assert_eq!(phi.norm_p(&sys).unwrap(), want);
    }

    #[test]
    fn composition_norm_bounded_by_expansion(sys in table(), coeffs in coefficients(), p in exponent()) {
        // ‖φ∘f‖^p ≤ ‖φ‖^p / c because every fiber has mass at most μ(y)/c
        let c = expansion_constants(&sys, 0).unwrap().c_lower.into_finite().unwrap();
        let phi = vector(&sys, &coeffs, p);
        let before = phi.norm_p(&sys).unwrap().into_finite().unwrap();
        let after = apply_tf(&sys, &phi).unwrap().norm_p(&sys).unwrap().into_finite().unwrap();
        prop_assert!(after * c <= before);
    }

    #[test]
    fn ly6_and_ly7_agree(sys in table()) {
        let st = ly(&sys, 32);
        prop_assert_eq!(st[&CriterionId::Ly6], st[&CriterionId::Ly7]);
    }

    #[test]
    fn decided_cells_survive_longer_horizons(sys in table(), h in 2u64..=16) {
        let short = ly(&sys, h);
        let long = ly(&sys, 2 * h);
        for (c, s) in &short {
            if s.is_decided() {
                prop_assert_eq!(long[c], *s, "{} changed between H = {} and {}", c, h, 2 * h);
            }
        }
    }

    #[test]
    fn linear_product_scan_matches_oracle(
        left in prop::collection::vec((1i64..=3, 1i64..=3), 1..=3),
        window in prop::collection::vec((1i64..=3, 1i64..=3), 0..=4),
        start in -4i64..=4,
        right in prop::collection::vec((1i64..=3, 1i64..=3), 1..=3),
        radius in 0i64..=40,
    ) {
        let w = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| q(n, d)).collect::<Vec<_>>();
        let rule = ShiftRule::Periodic { left: w(&left), window: w(&window), start, right: w(&right) };
        let shift = WeightedShift::new(rule, Exponent::ONE).unwrap();
        prop_assert_eq!(window_max_product(&shift, radius), window_max_product_oracle(&shift, radius));
    }

    #[test]
    fn spec_export_round_trips(sys in table()) {
        let text = export_spec(&sys, None);
        let back = parse_spec::<Q>(&text).unwrap();
        prop_assert_eq!(&back.system.space, &sys.space);
        prop_assert_eq!(export_spec(&back.system, None), text);
    }
}

#[test]
fn gallery_ly6_ly7_and_horizons() {
    for e in gallery::entries() {
        let sys = (e.build)();
        let short = ly(&sys, 16);
        let long = ly(&sys, 64);
        assert_eq!(long[&CriterionId::Ly6], long[&CriterionId::Ly7], "{}", e.name);
        for (c, s) in &short {
            if s.is_decided() {
                assert_eq!(long[c], *s, "{}: {c}", e.name);
            }
        }
    }
}
