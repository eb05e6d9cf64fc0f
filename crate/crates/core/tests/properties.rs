//! Invariants checked on random fields, conics and groups.

use arcflock::flock::projection::{default_projection_point, kappa, kappa_inv, project_conic_via_points};
use arcflock::mathon::composition_trace;
use arcflock::search::{linear_solutions, meeting_base_conics, scan_solutions};
use arcflock::{
    additive_to_geometric, arc_to_flock, build_trace_system, close_set, compose, conics_disjoint,
    denniston_closure, flock_to_arc, geometric_to_additive, plane_compose, project_arc,
    project_conic_to_plane, singular_plane, solve_trace_system, verify_arc, Conic, Field, Gf, GroupSpec,
    Plane3,
};
use proptest::prelude::*;

fn conic_in(f: &Field, a: u32, b: u32, l: u32) -> Option<Conic> {
    let mask = f.q() - 1;
    Conic::new(f, Gf(a & mask), Gf(b & mask), Gf(l & mask)).ok()
}

fn conic_pair() -> impl Strategy<Value = (Field, Conic, Conic)> {
    (3u32..=5, any::<[u32; 6]>()).prop_filter_map("degenerate or equal lambda", |(h, r)| {
        let f = Field::new(h).unwrap();
        let c1 = conic_in(&f, r[0], r[1], r[2])?;
        let c2 = conic_in(&f, r[3], r[4], r[5])?;
        (c1.lambda != c2.lambda).then_some((f, c1, c2))
    })
}

fn disjoint_pair() -> impl Strategy<Value = (Field, Conic, Conic)> {
    conic_pair().prop_filter("conics meet", |(f, c1, c2)| conics_disjoint(f, c1, c2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_an_involution((f, c1, c2) in conic_pair()) {
        if let Ok(c3) = compose(&f, &c1, &c2) {
            prop_assert_eq!(compose(&f, &c3, &c1).unwrap(), c2);
            prop_assert_eq!(compose(&f, &c3, &c2).unwrap(), c1);
        }
    }

    #[test]
    fn trace_one_iff_disjoint((f, c1, c2) in conic_pair()) {
        let t = composition_trace(&f, &c1, &c2).unwrap();
        prop_assert_eq!(t == 1, conics_disjoint(&f, &c1, &c2));
    }

    #[test]
    fn degree_four_closure_is_a_maximal_arc((f, c1, c2) in disjoint_pair()) {
        let m = denniston_closure(&f, &c1, &c2).unwrap();
        prop_assert_eq!(m.degree(), 4);
        let report = verify_arc(&m);
        prop_assert!(report.verdict);
        prop_assert_eq!(report.size, 3 * f.q() as usize + 4);
        prop_assert!(m.is_denniston_type());
    }

    #[test]
    fn arc_flock_round_trip((f, c1, c2) in disjoint_pair()) {
        let m = denniston_closure(&f, &c1, &c2).unwrap();
        let flock = arc_to_flock(&m);
        prop_assert!(flock.verify().verdict);
        prop_assert!(flock.classify().additive);
        prop_assert_eq!(flock_to_arc(&flock).unwrap(), m);
    }

    #[test]
    fn projection_chain_lands_on_the_additive_flock((f, c1, c2) in disjoint_pair()) {
        let m = denniston_closure(&f, &c1, &c2).unwrap();
        let projected = project_arc(&m, &default_projection_point(&f)).unwrap();
        prop_assert!(projected.verify().verdict);
        let additive = geometric_to_additive(&projected).unwrap();
        prop_assert_eq!(additive.plane_set(), arc_to_flock(&m).plane_set());
        let back = additive_to_geometric(&additive).unwrap();
        prop_assert_eq!(back.plane_set(), projected.plane_set());
    }

    #[test]
    fn fast_projection_matches_point_projection((f, c1, _c2) in conic_pair()) {
        let p = default_projection_point(&f);
        let fast = project_conic_to_plane(&f, &c1, &p).unwrap();
        prop_assert_eq!(fast.plane, project_conic_via_points(&f, &c1, &p).unwrap());
    }

    #[test]
    fn plane_composition_follows_conic_composition((f, c1, c2) in disjoint_pair()) {
        let p = default_projection_point(&f);
        let v = project_conic_to_plane(&f, &c1, &p).unwrap();
        let w = project_conic_to_plane(&f, &c2, &p).unwrap();
        let c3 = compose(&f, &c1, &c2).unwrap();
        prop_assert_eq!(plane_compose(&f, &v, &w).unwrap(), project_conic_to_plane(&f, &c3, &p).unwrap());
        let s = singular_plane(&f, &v, &w).unwrap();
        prop_assert!(arcflock::projective::incident(&f, &p, &s));
    }

    #[test]
    fn kappa_round_trip(h in 1u32..=8, c in any::<[u32; 4]>()) {
        let f = Field::new(h).unwrap();
        let mask = f.q() - 1;
        let coords = c.map(|x| x & mask);
        prop_assume!(coords.iter().any(|&x| x != 0));
        let v = Plane3::from_ints(&f, coords).unwrap();
        prop_assert_eq!(kappa_inv(&f, &kappa(&f, &v)), v);
    }

    #[test]
    fn closure_of_disjoint_seed_verifies((f, c1, c2) in disjoint_pair(), extra in any::<[u32; 3]>()) {
        let Some(c3) = conic_in(&f, extra[0], extra[1], extra[2]) else { return Ok(()) };
        if let Ok(m) = close_set(&f, &[c1, c2, c3]) {
            prop_assert!(m.degree().is_power_of_two());
            prop_assert!(verify_arc(&m).verdict);
        }
    }
}

fn group_spec() -> impl Strategy<Value = (Field, GroupSpec)> {
    (3u32..=6, 1usize..=2, any::<[u32; 3]>()).prop_filter_map("bad group", |(h, k, r)| {
        let f = Field::new(h).unwrap();
        let mask = f.q() - 1;
        let mut gens = vec![Gf(1)];
        gens.extend(r[..k - 1].iter().map(|&x| Gf(x & mask)));
        GroupSpec::new(&f, &gens, Gf(r[2] & mask)).ok().map(|s| (f, s))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scan_and_elimination_agree((f, spec) in group_spec()) {
        let sys = build_trace_system(&f, &spec).unwrap();
        prop_assert_eq!(scan_solutions(&sys), linear_solutions(&sys));
        let sol = solve_trace_system(&sys).unwrap();
        prop_assert_eq!(sol.prefilter.len(), sol.valid.len() + sol.removed);
    }

    #[test]
    fn trace_conditions_describe_disjointness((f, spec) in group_spec(), pick in any::<u32>()) {
        let sys = build_trace_system(&f, &spec).unwrap();
        let rho = Gf(pick % (f.q() - 1) + 1);
        let mu = f.inv(rho).unwrap();
        let meets = meeting_base_conics(&f, &spec, rho).unwrap();
        prop_assert_eq!(sys.holds_for_mu(mu), meets.is_empty());
    }
}
