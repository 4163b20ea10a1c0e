//! Randomized properties over toric surfaces and small lattices.

mod common;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{nef, pairing, random_toric_surface};
use logsurf::birational;
use logsurf::mmp::{self, MmpMode, MmpOptions};
use logsurf::positivity::{self, ZariskiOutcome};
use logsurf::rational::{self, frac};
use logsurf::{GramMatrix, QVec};

fn toric(seed: u64, blowups: usize) -> logsurf::LogSurface {
    random_toric_surface(&mut ChaCha8Rng::seed_from_u64(seed), blowups)
}

fn class(coords: &[i64], n: usize) -> QVec {
    QVec::from_ints(&coords[..n])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_round_trip_through_text(n in -1000i64..1000, d in 1i64..1000) {
        let q = frac(n, d);
        prop_assert_eq!(rational::parse(&rational::format(&q)), Some(q));
    }

    #[test]
    fn generated_surfaces_are_valid(seed in any::<u64>()) {
        let s = toric(seed, 5);
        prop_assert!(s.validate().is_empty(), "{:?}", s.validate());
    }

    #[test]
    fn zariski_parts_are_consistent(seed in any::<u64>(), coords in prop::collection::vec(-4i64..=4, 6)) {
        let s = toric(seed, 5);
        let d = class(&coords, s.rank());
        match positivity::zariski(&s, &d) {
            ZariskiOutcome::Decomposition(z) => {
                prop_assert_eq!(&z.positive + &z.negative_class(&s), d.clone());
                prop_assert!(nef(&s, &z.positive));
                for (id, c) in &z.negative {
                    prop_assert!(c.is_positive());
                    let curve = &s.curve(id).unwrap().class;
                    prop_assert!(pairing(s.gram(), &z.positive, curve).is_zero());
                }
                prop_assert!(s.is_pseudo_effective(&d));
            }
            ZariskiOutcome::NotPseudoEffective(_) => prop_assert!(!s.is_pseudo_effective(&d)),
        }
    }

    #[test]
    fn nef_classes_decompose_trivially(seed in any::<u64>(), coords in prop::collection::vec(-4i64..=4, 6)) {
        let s = toric(seed, 5);
        let d = class(&coords, s.rank());
        prop_assume!(nef(&s, &d));
        let ZariskiOutcome::Decomposition(z) = positivity::zariski(&s, &d) else {
            return Err(TestCaseError::fail("nef class rejected"));
        };
        prop_assert_eq!(z.positive, d);
        prop_assert!(z.negative.is_empty());
    }

    #[test]
    fn blow_up_then_contract_restores_the_lattice(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let s = toric(seed, 4);
        let c = &s.curves[pick.index(s.curves.len())];
        let b = birational::blow_up_named(&s, &[(c.id.as_str(), 1)], "new").unwrap();
        prop_assert_eq!(b.rank(), s.rank() + 1);
        let back = birational::contract(&b, &["new"], true).unwrap();
        prop_assert_eq!(back.target.gram(), s.gram());
        prop_assert_eq!(back.target.canonical(), s.canonical());
        prop_assert_eq!(&back.target.curves, &s.curves);
    }

    #[test]
    fn quotient_lift_is_a_section(seed in any::<u64>(), coords in prop::collection::vec(-4i64..=4, 6)) {
        let s = toric(seed, 5);
        let negative: Vec<usize> = (0..s.curves.len())
            .filter(|&i| pairing(s.gram(), &s.curves[i].class, &s.curves[i].class).is_negative())
            .take(1)
            .collect();
        prop_assume!(!negative.is_empty());
        let e = s.curves[negative[0]].class.clone();
        let p = logsurf::QuotientProjection::new(s.gram(), vec![e.clone()]).unwrap();
        let y = class(&coords, s.rank() - 1);
        let lifted = p.lift(&y);
        prop_assert_eq!(p.pushforward(&lifted), y);
        prop_assert!(pairing(s.gram(), &lifted, &e).is_zero());
    }

    #[test]
    fn mmp_runs_are_deterministic(seed in any::<u64>()) {
        let s = toric(seed, 5);
        for mode in [MmpMode::QFactorial, MmpMode::LogCanonical] {
            let opts = MmpOptions { mode, strict_extremal: false };
            let a = mmp::run_mmp(&s, opts).unwrap();
            let b = mmp::run_mmp(&s, opts).unwrap();
            prop_assert_eq!(logsurf::files::write_report(&a), logsurf::files::write_report(&b));
            prop_assert!(common::check_run(&s, &a).is_ok());
        }
    }

    #[test]
    fn congruence_preserves_signature(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut diag = vec![1i64];
        diag.extend(std::iter::repeat_n(-1, n - 1));
        let g = GramMatrix::diagonal(&diag);
        let u = common::random_unimodular(&mut rng, n);
        let c = g.congruent(&u).unwrap();
        prop_assert_eq!(c.signature().unwrap(), g.signature().unwrap());
        prop_assert_eq!(c.determinant().abs(), g.determinant().abs());
    }
}
