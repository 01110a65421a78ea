mod common;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;

use common::*;
use origami_veech::covers::{
    build_dp, build_w, classify_flavors, dp_flavor, dp_square, origami_from_cocycle, solve_cocycle,
    solve_cocycle_with_order, verify_theorem, w_left_multiplication, Flavor,
};
use origami_veech::modular::{in_gamma_uu, MatMod, ModularError, TorsionConfig};
use origami_veech::orbit::act_word;
use origami_veech::{orbit, veech_action, veech_generators, CosetAction, MatZ, Origami, Permutation};

fn cfg(n: u64, p: i64, q: i64) -> TorsionConfig {
    TorsionConfig::new(n, p, q).unwrap()
}

fn key_set(o: &Origami) -> BTreeSet<Vec<u8>> {
    orbit(o).keys().map(<[u8]>::to_vec).collect()
}

fn valid_configs(n: u64) -> Vec<TorsionConfig> {
    (0..n as i64)
        .flat_map(|p| (0..n as i64).map(move |q| (p, q)))
        .filter_map(|(p, q)| TorsionConfig::new(n, p, q).ok())
        .collect()
}

#[test]
fn quaternion_origami() {
    let w = build_w();
    assert_eq!(w.degree(), 8);
    assert_eq!(w.genus(), 3);
    assert_eq!(oracle_genus(&w), 3);
    assert_eq!(oracle_zero_orders(&w), vec![1, 1, 1, 1]);
    assert_eq!(w.stratum().zero_orders, vec![1, 1, 1, 1]);

    let tr = brute_translations(&w);
    assert_eq!(tr.len(), 8);
    let involutions: Vec<&Permutation> = tr.iter().filter(|t| !t.is_identity() && t.pow(2).is_identity()).collect();
    assert_eq!(involutions.len(), 1);
    // deck group acts by left multiplication
    let mut left: Vec<Permutation> = (0..8).map(w_left_multiplication).collect();
    let mut fast = w.translations();
    left.sort();
    fast.sort();
    assert_eq!(left, fast);

    let lifts = w.minus_one_lifts();
    assert_eq!(lifts.len(), 8);
    assert!(lifts.iter().all(|l| l.total_fixed == 4));
    assert_eq!(lifts.iter().filter(|l| l.fixed_vertices == l.total_fixed).count(), 2);

    // quotient by the center {±1} and by all of Q
    let center = [w_left_multiplication(0), w_left_multiplication(1)];
    let half = w.quotient_by_translations(&center).unwrap();
    assert_eq!((half.degree(), half.genus()), (4, 1));
    let full = w.quotient_by_translations(&left).unwrap();
    assert_eq!(full.degree(), 1);
    assert!(full.is_isomorphic(&Origami::torus()));

    assert_eq!(orbit(&w).len(), 1);
    let eight_cycle = Origami::new(Permutation::cycle(8), Permutation::cycle(8)).unwrap();
    assert!(!w.is_isomorphic(&eight_cycle));
}

/// Grid point `(a, b)` of every cone point, read off the lower-left corners
/// of the squares meeting there.
fn branch_points(o: &Origami, n: usize) -> Vec<[u64; 2]> {
    let mut out: Vec<[u64; 2]> = cone_point_squares(o)
        .into_iter()
        .map(|squares| {
            let grid: BTreeSet<[u64; 2]> = squares.iter().map(|&i| [(i % n) as u64, (i / n % n) as u64]).collect();
            assert_eq!(grid.len(), 1, "a cone point sits over a single grid vertex");
            *grid.iter().next().unwrap()
        })
        .collect();
    out.sort_unstable();
    out
}

#[test]
fn dp_examples() {
    let c = cfg(3, 1, 0);
    let o = build_dp(&c, Flavor::new(0, 0)).unwrap();
    assert_eq!(o.degree(), 18);
    assert_eq!(oracle_genus(&o), 3);
    let classes = corner_classes(&o);
    // two regular preimages over each of the five unbranched grid points
    assert_eq!(classes.len(), 14);
    assert_eq!(classes.iter().filter(|k| k.len() == 4).count(), 10);
    assert_eq!(classes.iter().filter(|k| k.len() == 8).count(), 4);
    let mut want = c.points().to_vec();
    want.sort_unstable();
    assert_eq!(branch_points(&o, 3), want);
    assert_eq!(want, vec![[0, 1], [0, 2], [1, 0], [2, 0]]);
    assert_eq!(propagated_translations(&o).len(), 2);
    let totals: Vec<usize> = o.minus_one_lifts().iter().map(|l| l.total_fixed).collect();
    assert_eq!(totals, vec![4, 4]);

    let o = build_dp(&cfg(5, 1, 0), Flavor::new(0, 0)).unwrap();
    assert_eq!(o.degree(), 50);
    assert_eq!(oracle_genus(&o), 3);
    assert_eq!(oracle_zero_orders(&o), vec![1, 1, 1, 1]);
}

#[test]
fn cocycles_satisfy_their_constraints() {
    let c = cfg(3, 1, 0);
    let k = solve_cocycle(&c, Flavor::new(1, 1)).unwrap();
    assert!(k.satisfies(&c, Flavor::new(1, 1)));
    let row: u8 = (0..3).map(|a| k.x(a, 0)).sum::<u8>() % 2;
    let col: u8 = (0..3).map(|b| k.y(0, b)).sum::<u8>() % 2;
    assert_eq!((row, col), (1, 1));

    // check the vertex constraint directly
    for n in [3usize, 5] {
        for c in valid_configs(n as u64) {
            for f in Flavor::ALL {
                let k = solve_cocycle(&c, f).unwrap();
                for a in 0..n {
                    for b in 0..n {
                        let (am, bm) = ((a + n - 1) % n, (b + n - 1) % n);
                        let sum = k.x(am, bm) + k.y(a, bm) + k.x(am, b) + k.y(am, bm);
                        let mult = c.multiplicity([a as u64, b as u64]) as u8;
                        assert_eq!(sum % 2, mult % 2, "{c} {f:?} ({a},{b})");
                    }
                }
            }
        }
    }
}

#[test]
fn pivot_order_does_not_change_the_cover() {
    let c = cfg(5, 1, 1);
    let f = Flavor::new(0, 0);
    let base = origami_from_cocycle(&solve_cocycle(&c, f).unwrap()).unwrap();
    let mut r = rng(17);
    let mut distinct = 0;
    for _ in 0..20 {
        let mut order: Vec<usize> = (0..50).collect();
        order.shuffle(&mut r);
        let k = solve_cocycle_with_order(&c, f, &order).unwrap();
        assert!(k.satisfies(&c, f));
        let o = origami_from_cocycle(&k).unwrap();
        distinct += usize::from(o != base);
        assert!(o.is_isomorphic(&base));
    }
    let reversed: Vec<usize> = (0..50).rev().collect();
    let o = origami_from_cocycle(&solve_cocycle_with_order(&c, f, &reversed).unwrap()).unwrap();
    assert!(o.is_isomorphic(&base));
    assert!(distinct > 0, "all pivot orders gave the same cocycle");
}

#[test]
fn every_cover_has_the_right_shape() {
    for n in 3..=9u64 {
        let configs = valid_configs(n);
        // odd n are checked exhaustively, even n on a few configurations
        let sample: Vec<&TorsionConfig> = if n % 2 == 1 { configs.iter().collect() } else { configs.iter().take(3).collect() };
        for c in sample {
            let mut want = c.points().to_vec();
            want.sort_unstable();
            want.dedup();
            for f in Flavor::ALL {
                let Ok(o) = build_dp(c, f) else {
                    assert!(n % 2 == 0, "{c} {f:?}");
                    continue;
                };
                assert_eq!(o.degree(), 2 * (n * n) as usize);
                if n % 2 == 1 {
                    assert_eq!(o.genus(), 3, "{c}");
                    assert_eq!(o.commutator().cycle_type().iter().filter(|&&l| l == 2).count(), 4);
                    assert_eq!(branch_points(&o, n as usize), want, "{c} {f:?}");
                }
            }
        }
    }
}

#[test]
fn exactly_one_hyperelliptic_flavor() {
    for n in [3u64, 5, 7] {
        for c in valid_configs(n) {
            let reports = classify_flavors(&c).unwrap();
            let hyper: Vec<_> = reports.iter().filter(|r| r.hyperelliptic).collect();
            assert_eq!(hyper.len(), 1, "{c}");
            assert_eq!(hyper[0].lift_totals, vec![8, 0]);
            for r in reports.iter().filter(|r| !r.hyperelliptic) {
                assert_eq!(r.lift_totals, vec![4, 4], "{c}");
            }
        }
    }
    let reports = classify_flavors(&cfg(5, 1, 1)).unwrap();
    assert_eq!(reports.iter().filter(|r| r.lift_totals == vec![8, 0]).count(), 1);
}

#[test]
fn hyperellipticity_is_constant_on_orbits() {
    for c in valid_configs(3) {
        for f in Flavor::ALL {
            let o = build_dp(&c, f).unwrap();
            let hyper = o.minus_one_lifts().iter().any(|l| l.total_fixed == 8);
            for node in &orbit(&o).nodes {
                let h = node.origami.minus_one_lifts().iter().any(|l| l.total_fixed == 8);
                assert_eq!(h, hyper, "{c} {f:?}");
            }
        }
    }
}

fn rotation_mod(m: &MatZ, n: u64) -> bool {
    let r = MatMod::reduce(m, n);
    let (i, s) = (MatMod::identity(n), MatMod::s(n));
    [i, i.neg(), s, s.neg()].contains(&r)
}

#[test]
fn veech_generators_lie_in_the_expected_groups() {
    for c in [cfg(3, 1, 0), cfg(3, 1, 1), cfg(5, 1, 0), cfg(5, 1, 1), cfg(7, 1, 0)] {
        let o = build_dp(&c, dp_flavor(&c).unwrap()).unwrap();
        for m in veech_generators(&veech_action(&o)) {
            let parity = (m.a + m.c).rem_euclid(2) == 1 && (m.b + m.d).rem_euclid(2) == 1;
            assert!(parity && in_gamma_uu(&m), "{c}: {m}");
            assert!(rotation_mod(&m, c.n()), "{c}: {m}");
        }
    }
}

// Γ(b) = w Γ(a) w⁻¹ where w moves a to b in the orbit of a
fn conjugate_stabilizers(a: &Origami, b: &Origami) -> (bool, bool) {
    let graph = orbit(a);
    let action = graph.action();
    let target = b.canonical_key();
    let j = graph.nodes.iter().position(|node| node.key == target).expect("same orbit");
    let w = action.transversal()[j].matrix();
    let (ga, gb): (CosetAction, CosetAction) = (veech_action(a), veech_action(b));
    let conj = gb.stabilizer_generators().iter().all(|m| ga.contains(&(w.inverse() * *m * w)))
        && ga.stabilizer_generators().iter().all(|m| gb.contains(&(w * *m * w.inverse())));
    (conj, same_stabilizer(&ga, &gb))
}

#[test]
fn non_hyperelliptic_flavors_share_an_orbit_with_conjugate_stabilizers() {
    for c in [cfg(3, 1, 0), cfg(5, 1, 1)] {
        let dp = dp_flavor(&c).unwrap();
        let reports = classify_flavors(&c).unwrap();
        let others: Vec<Flavor> = Flavor::ALL
            .into_iter()
            .filter(|f| !reports.iter().any(|r| r.flavor == f.label() && r.hyperelliptic))
            .collect();
        assert_eq!(others.len(), 3);
        let covers: Vec<Origami> = others.iter().map(|&f| build_dp(&c, f).unwrap()).collect();
        let keys = key_set(&covers[0]);
        for (f, o) in others.iter().zip(&covers) {
            assert_eq!(key_set(o), keys);
            let reference = build_dp(&c, dp).unwrap();
            let (conj, equal) = conjugate_stabilizers(&reference, o);
            assert!(conj, "{c} {f:?}");
            assert_eq!(equal, *f == dp, "{c} {f:?}");
        }
    }
}

#[test]
fn covers_of_the_two_three_torsion_configurations() {
    let a = build_dp(&cfg(3, 1, 0), dp_flavor(&cfg(3, 1, 0)).unwrap()).unwrap();
    let b = build_dp(&cfg(3, 1, 1), dp_flavor(&cfg(3, 1, 1)).unwrap()).unwrap();
    assert!(a.isomorphism_to(&b).is_none());
    assert_ne!(a.canonical_key(), b.canonical_key());
    assert_eq!(key_set(&a), key_set(&b));
    let c = cfg(3, 1, 0);
    assert!(!build_dp(&c, Flavor::new(1, 0)).unwrap().is_isomorphic(&build_dp(&c, Flavor::new(0, 1)).unwrap()));
}

#[test]
fn theorem_reports() {
    for (c, index) in [(cfg(3, 1, 0), 18), (cfg(5, 1, 1), 90), (cfg(7, 1, 0), 252)] {
        let r = verify_theorem(&c).unwrap();
        assert!(r.pass, "{c}");
        assert_eq!((r.computed_index, r.predicted_index), (index, index));
        assert!(r.pointed_equivalent && r.contains_minus_identity && r.excludes_t);
        assert!(r.non_hyperelliptic_same_orbit);
        // the three non-hyperelliptic flavors are not pairwise equal as pointed actions
        assert!(!r.non_hyperelliptic_pointed_equivalent);
        let hyper = r.flavor_reports.iter().find(|f| f.hyperelliptic).unwrap();
        assert_eq!(hyper.veech_index, Some(index / 3));
    }
    assert!(matches!(
        verify_theorem(&cfg(5, 1, 2)),
        Err(origami_veech::covers::CoverError::Modular(ModularError::NotGeneralPosition))
    ));
    assert!(matches!(
        verify_theorem(&cfg(4, 1, 0)),
        Err(origami_veech::covers::CoverError::Modular(ModularError::NotOdd(4)))
    ));
}

/// Non-general configurations: regression values.
#[test]
fn degenerate_configuration_regression() {
    let c = cfg(5, 1, 2);
    let reports = classify_flavors(&c).unwrap();
    for r in &reports {
        let o = build_dp(&c, Flavor::parse(&r.flavor).unwrap()).unwrap();
        let index = orbit(&o).len();
        assert_eq!(index, if r.hyperelliptic { 6 } else { 18 }, "{}", r.flavor);
    }
}

#[test]
fn square_indexing() {
    assert_eq!(dp_square(3, 0, 0, 0), 0);
    assert_eq!(dp_square(3, 3, 0, 0), 0);
    assert_eq!(dp_square(3, 1, 2, 1), 9 + 6 + 1);
    let o = build_dp(&cfg(3, 1, 0), Flavor::new(0, 0)).unwrap();
    // moving right n times along row 0 returns to the base sheet for flavor 00
    let mut i = 0;
    for _ in 0..3 {
        i = o.sigma_x().apply(i);
    }
    assert_eq!(i, 0);
    let w = act_word(&origami_veech::decompose_word(&MatZ::S), &o);
    assert_eq!(w.degree(), 18);
}
