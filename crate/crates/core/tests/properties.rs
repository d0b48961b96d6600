use edist_core::gen::{gen_gauge, gen_instance, gen_raw_kappa, GenProfile, KappaKind, MapKind};
use edist_core::hyperspace::{
    all_subsets, check_theorem13, check_theorem13_reduced, dkappa, hausdorff, xi,
};
use edist_core::mt::{check_all, check_statement, scale_to_unit};
use edist_core::solver::{
    check_s3, check_s4, check_s5, coincidence_points, default_max_iter, fixed_points, iterate,
    OrbitOutcome, SelfMap, TheoremId,
};
use edist_core::spaces::{
    check_tau1, check_zero_structure, classify, sequence_oracle_tau3, shortest_path_closure, Axiom,
};
use edist_core::{DistanceFunction, FiniteMetricSpace, FiniteSubset, SquareMatrix};
use proptest::prelude::*;

/// Matrices on the 2⁻⁶ grid with plenty of zeros.
fn kappa_strategy(max_n: usize) -> impl Strategy<Value = DistanceFunction> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop_oneof![2 => Just(0u32), 3 => 1u32..=128], n * n).prop_map(
            move |cells| {
                let m = SquareMatrix::from_fn(n, |i, j| cells[i * n + j] as f64 / 64.0);
                DistanceFunction::new(m).unwrap()
            },
        )
    })
}

fn e0_strategy(max_n: usize) -> impl Strategy<Value = DistanceFunction> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(16u32..=80, n * n).prop_map(move |cells| {
            let w = SquareMatrix::from_fn(n, |i, j| cells[i * n + j] as f64 / 64.0);
            DistanceFunction::new(shortest_path_closure(&w)).unwrap()
        })
    })
}

fn naive_tau1(k: &DistanceFunction) -> bool {
    let n = k.len();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| k.get(x, z) <= k.get(x, y) + k.get(y, z))))
}

fn subset_from_mask(mask: u64) -> FiniteSubset {
    FiniteSubset::from_mask(mask).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tau3_implies_tau4prime(k in kappa_strategy(6)) {
        let z = check_zero_structure(&k);
        if z.tau3.is_pass() {
            prop_assert!(z.tau4prime.is_pass());
        }
    }

    #[test]
    fn tau1_matches_naive_triple_loop(k in kappa_strategy(6)) {
        prop_assert_eq!(check_tau1(&k).is_pass(), naive_tau1(&k));
    }

    #[test]
    fn witnesses_reproduce(k in kappa_strategy(5)) {
        let report = classify(&k);
        for axiom in [Axiom::Tau1, Axiom::Tau3, Axiom::Tau4, Axiom::Tau4prime, Axiom::ZeroDiagonal] {
            if let Some(w) = report.get(axiom).and_then(|v| v.witness()) {
                prop_assert!(w.reproduces(k.matrix()), "{:?} {:?}", axiom, w);
            }
        }
    }

    #[test]
    fn oracle_agrees_with_zero_structure(k in kappa_strategy(4)) {
        let coords: Vec<f64> = (0..k.len()).map(|i| i as f64).collect();
        let space = FiniteMetricSpace::on_line(&coords).unwrap();
        let oracle = sequence_oracle_tau3(&space, &k, 4).unwrap();
        prop_assert_eq!(oracle.is_fail(), check_zero_structure(&k).tau3.is_fail());
    }

    #[test]
    fn e0_distances_vanish_only_on_diagonal(k in e0_strategy(6)) {
        prop_assert!(classify(&k).passes(Axiom::IsE0Distance));
        for x in 0..k.len() {
            for y in 0..k.len() {
                prop_assert_eq!(k.get(x, y) == 0.0, x == y);
            }
        }
    }

    #[test]
    fn excess_is_monotone(k in e0_strategy(5), a in 1u64..32, extra in 0u64..32, b in 1u64..32, more in 0u64..32) {
        let n = k.len();
        let full = (1u64 << n) - 1;
        let (a, b) = (a & full, b & full);
        prop_assume!(a != 0 && b != 0);
        let (sa, sa2) = (subset_from_mask(a), subset_from_mask(a | (extra & full)));
        let (sb, sb2) = (subset_from_mask(b), subset_from_mask(b | (more & full)));
        prop_assert!(xi(&k, &sa, &sb) <= xi(&k, &sa2, &sb));
        prop_assert!(xi(&k, &sa, &sb2) <= xi(&k, &sa, &sb));
    }

    #[test]
    fn reduced_hyperspace_check_matches_literal(k in e0_strategy(5)) {
        let lit = check_theorem13(&k, &all_subsets(k.len())).unwrap();
        let red = check_theorem13_reduced(&k).unwrap();
        prop_assert!(lit.all_pass());
        prop_assert_eq!(lit.all_pass(), red.all_pass());
    }

    #[test]
    fn hausdorff_is_dkappa_of_the_metric(seed in any::<u64>(), n in 2usize..7) {
        let p = GenProfile::new(seed, n);
        let space = edist_core::gen::gen_space(&p).unwrap();
        let k = space.as_distance();
        let subsets = all_subsets(n);
        for a in &subsets {
            for b in &subsets {
                prop_assert_eq!(dkappa(&k, a, b).to_bits(), hausdorff(&space, a, b).to_bits());
            }
        }
    }

    #[test]
    fn mt_statements_agree(seed in any::<u64>(), mt in any::<bool>(), lambda in prop::sample::select(vec![0.5, 1.0, 2.0, 3.0, 4.0])) {
        let mu = gen_gauge(seed, lambda, mt);
        let report = check_all(&mu);
        prop_assert!(report.consistent());
        prop_assert_eq!(report.all_pass(), mt);
        let unit = scale_to_unit(&mu);
        prop_assert_eq!(check_statement(&unit, 1).unwrap().is_pass(), check_statement(&mu, 1).unwrap().is_pass());
    }

    #[test]
    fn s4_fixed_points_are_coincidence_points(seed in any::<u64>(), n in 3usize..12) {
        let p = GenProfile::new(seed, n).target(TheoremId::T23);
        if let Ok(inst) = gen_instance(&p) {
            let phi = inst.phi.as_ref().unwrap();
            prop_assert!(check_s4(phi, &inst.map).is_pass());
            let cop = coincidence_points(phi, &inst.map);
            for v in fixed_points(&inst.map) {
                prop_assert!(cop.contains(&v));
            }
        }
    }

    #[test]
    fn s5_without_l_implies_s3(seed in any::<u64>(), n in 2usize..10, map in prop::sample::select(MapKind::ALL.to_vec())) {
        let inst = gen_instance(&GenProfile::new(seed, n).map(map)).unwrap();
        let mu = inst.mu.as_ref().unwrap();
        let phi = SelfMap::new((0..n).map(|x| (x * 7 + seed as usize) % n).collect()).unwrap();
        if check_s5(&inst.kappa, &inst.map, &phi, mu, 0.0).is_pass() {
            prop_assert!(check_s3(&inst.kappa, &inst.map, mu).is_pass());
        }
    }

    #[test]
    fn greedy_orbits_terminate_under_s3(seed in any::<u64>(), n in 2usize..16, kind in prop::sample::select(vec![KappaKind::Metric, KappaKind::AsymmetricClosure])) {
        let inst = gen_instance(&GenProfile::new(seed, n).kappa(kind).target(TheoremId::T22)).unwrap();
        for x0 in 0..n {
            let tr = iterate(&inst.kappa, &inst.map, x0, default_max_iter(n)).unwrap();
            prop_assert!(matches!(tr.outcome, OrbitOutcome::FixedPoint(_)));
            prop_assert!(tr.steps() <= n * n + 1);
            prop_assert_eq!(*tr.cauchy_bound.last().unwrap(), 0.0);
        }
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), n in 2usize..20) {
        let p = GenProfile::new(seed, n).kappa(KappaKind::AsymmetricClosure).target(TheoremId::T24);
        prop_assert_eq!(gen_instance(&p).ok(), gen_instance(&p).ok());
    }

    #[test]
    fn raw_kappas_classify_without_panicking(seed in any::<u64>(), n in 1usize..9) {
        let k = gen_raw_kappa(seed, n);
        let r = classify(&k);
        prop_assert_eq!(r.passes(Axiom::IsE0Distance), r.passes(Axiom::IsEDistance) && r.passes(Axiom::ZeroDiagonal));
    }
}

#[test]
fn line_space_fixture() {
    let s = FiniteMetricSpace::on_line(&[0.0, 1.0, 3.0]).unwrap();
    let k = s.as_distance();
    let a = FiniteSubset::new([0, 1]).unwrap();
    let b = FiniteSubset::singleton(2);
    assert_eq!(dkappa(&k, &a, &b), 3.0);
    assert_eq!(hausdorff(&s, &a, &b), 3.0);
}
