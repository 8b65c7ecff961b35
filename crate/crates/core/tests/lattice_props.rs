//! Lattice laws of the exponent square, checked against brute force over a finite grid.

use num_rational::Ratio;
use parlat_core::exponent::{EnrichedExponent, Exponent};
use parlat_core::space::{is_multiplicable, mult_multiplier, space_dual, space_join, space_leq, space_meet, SpacePoint};
use proptest::prelude::*;

const DEN: i64 = 6;

fn grid_exponent() -> impl Strategy<Value = Exponent> {
    (0..=DEN).prop_map(|k| Exponent::from_reciprocal(Ratio::new(k, DEN)).unwrap())
}

fn point() -> impl Strategy<Value = SpacePoint> {
    (grid_exponent(), grid_exponent()).prop_map(|(p, q)| SpacePoint::square(p.into(), q.into()))
}

fn all_points() -> Vec<SpacePoint> {
    let es: Vec<Exponent> = (0..=DEN).map(|k| Exponent::from_reciprocal(Ratio::new(k, DEN)).unwrap()).collect();
    es.iter().flat_map(|&p| es.iter().map(move |&q| SpacePoint::square(p.into(), q.into()))).collect()
}

/// Inclusion from p-values: `L^(p,q) ⊆ L^(p',q')` iff `p ≥ p'` and `q ≤ q'`, with ∞ largest.
fn included(a: &SpacePoint, b: &SpacePoint) -> bool {
    let pv = |e: EnrichedExponent| e.base.p_value().map_or(f64::INFINITY, |r| *r.numer() as f64 / *r.denom() as f64);
    pv(a.local()) >= pv(b.local()) && pv(a.global().unwrap()) <= pv(b.global().unwrap())
}

proptest! {
    #[test]
    fn order_matches_p_values(a in point(), b in point()) {
        prop_assert_eq!(space_leq(&a, &b).unwrap(), included(&a, &b));
    }

    #[test]
    fn meet_and_join_are_bounds(a in point(), b in point()) {
        let (m, j) = (space_meet(&a, &b).unwrap(), space_join(&a, &b).unwrap());
        prop_assert!(included(&m, &a) && included(&m, &b));
        prop_assert!(included(&a, &j) && included(&b, &j));
        for c in all_points() {
            if included(&c, &a) && included(&c, &b) {
                prop_assert!(included(&c, &m));
            }
            if included(&a, &c) && included(&b, &c) {
                prop_assert!(included(&j, &c));
            }
        }
    }

    #[test]
    fn duality_reverses_order(a in point(), b in point()) {
        prop_assert_eq!(space_dual(&space_dual(&a)), a);
        let interior = |x: &SpacePoint| x.local().base != Exponent::ONE && x.global().unwrap().base != Exponent::ONE;
        if interior(&a) && interior(&b) {
            prop_assert_eq!(space_leq(&a, &b).unwrap(), space_leq(&space_dual(&b), &space_dual(&a)).unwrap());
        }
    }

    #[test]
    fn multipliers_close_after_two_steps(a in point()) {
        let m = mult_multiplier(&a);
        prop_assert_eq!(mult_multiplier(&mult_multiplier(&m)), m);
        // a ⊆ MM a on intersections L^p ∩ L^q (p ≥ q) and the multiplier chain
        if a.local() <= a.global().unwrap() || a.is_on_multiplier_chain() {
            prop_assert!(space_leq(&a, &mult_multiplier(&m)).unwrap());
        }
    }

    #[test]
    fn multiplicability_is_symmetric(a in point(), b in point()) {
        prop_assert_eq!(is_multiplicable(&a, &b).unwrap(), is_multiplicable(&b, &a).unwrap());
    }

    #[test]
    fn conjugation_is_an_involution(e in grid_exponent()) {
        prop_assert_eq!(e.conjugate().conjugate(), e);
        prop_assert_eq!(e.reciprocal() + e.conjugate().reciprocal(), Ratio::from_integer(1));
    }
}
