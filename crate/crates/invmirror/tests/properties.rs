use proptest::prelude::*;

use invmirror::algebra::{sign_rectify, GridSigns};
use invmirror::aside::ACycle;
use invmirror::export::{format_fraction, parse_fraction, parse_window};
use invmirror::grading::{GradingGroup, GroupElement};
use invmirror::linalg::Q;
use invmirror::mf::BasicLabel;
use invmirror::Family;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Loop), Just(Family::Chain), Just(Family::Bp)]
}

proptest! {
    #[test]
    fn fraction_round_trip(n in -1_000_000i128..1_000_000, d in 1i128..1_000_000) {
        let x = Q::new(n, d);
        prop_assert_eq!(parse_fraction(&format_fraction(x)).unwrap(), x);
    }

    #[test]
    fn window_accepts_exactly_spans_containing_zero(lo in -300i32..50, hi in -50i32..300, sep in prop_oneof![Just(":"), Just(".."), Just(",")]) {
        let ok = lo <= 0 && hi >= 0 && hi - lo <= 200;
        let r = parse_window(&format!("{lo}{sep}{hi}"));
        prop_assert_eq!(r.is_ok(), ok);
        if ok {
            prop_assert_eq!(r.unwrap(), (lo, hi));
        }
    }

    #[test]
    fn rectified_grids_commute(w in 1usize..8, h in 1usize..8, seed in any::<u64>()) {
        let g = GridSigns::seeded(w, h, seed);
        let r = sign_rectify(&g);
        prop_assert!(r.commutes());
        prop_assert!(r.composition_table().values().all(|&s| s == 1));
        // arrows out of the bottom row and the first column are untouched
        prop_assert_eq!(&r.v, &g.v);
        for i in 0..w.saturating_sub(1) {
            prop_assert_eq!(r.h[i][0], g.h[i][0]);
        }
    }

    #[test]
    fn reduction_is_canonical(f in family(), p in 2u32..7, q in 2u32..7, x in -20i64..20, y in -20i64..20, c in -5i64..5, k in -3i64..3) {
        let g = GradingGroup::new(f, p, q).unwrap();
        let e = GroupElement::new(x, y, c);
        let r = g.reduce(e);
        prop_assert_eq!(g.reduce(r), r);
        prop_assert!(g.equal(e, r));
        prop_assert_eq!(g.weight(e), g.weight(r));
        // adding a relation does not change the class
        let rel = g.relations[0];
        let shifted = GroupElement::new(x + k * rel[0], y + k * rel[1], c + k * rel[2]);
        prop_assert_eq!(g.reduce(shifted), r);
    }

    #[test]
    fn labels_round_trip(i in 0u32..50, j in 0u32..50, kind in 0usize..4) {
        let b = [BasicLabel::K0(i, j), BasicLabel::Kx(i), BasicLabel::Ky(j), BasicLabel::Kf][kind];
        prop_assert_eq!(b.to_string().parse::<BasicLabel>().unwrap(), b);
        let a = [ACycle::V0(i, j), ACycle::Vyf(i), ACycle::Vxf(j), ACycle::Vxy][kind];
        prop_assert_eq!(a.to_string().parse::<ACycle>().unwrap(), a);
    }
}
