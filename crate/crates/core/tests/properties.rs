use num_traits::{One, Zero};
use proptest::prelude::*;

use ncomplements::adjunction::{direct, inverse, AdjunctionConstants};
use ncomplements::dim1::{has_n_complement, has_r_complement, CurvePair};
use ncomplements::hyperstandard::{gamma_contains, gamma_enumerate_below, low_approximation, HyperstandardSpec};
use ncomplements::indices::{solve, IndexProblem, SymbolicVector};
use ncomplements::rounding::{check_n_complement_condition1, rdn, MultiplicityVector};
use ncomplements::suites::{run_suite, SuiteName};
use ncomplements::{ExactScalar, Rat, Rat64};

fn to_big(x: &Rat64) -> Rat {
    Rat::from_frac(*x.numer(), *x.denom())
}

fn small() -> impl Strategy<Value = Rat64> {
    (-60i64..=60, 1i64..=30).prop_map(|(p, d)| Rat64::new(p, d))
}

fn unit() -> impl Strategy<Value = Rat64> {
    (1i64..=24).prop_flat_map(|d| (0..=d).prop_map(move |p| Rat64::new(p, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn word_and_big_rationals_agree(x in small(), n in 1u64..40) {
        prop_assert_eq!(to_big(&rdn(&x, n)), rdn(&to_big(&x), n));
    }

    #[test]
    fn word_sized_hyperstandard_agrees(
        r in proptest::collection::vec(unit(), 0..3),
        n in proptest::collection::btree_set(1u64..5, 0..3),
        b in unit(),
    ) {
        let small = HyperstandardSpec::<Rat64>::new(r.clone(), n.clone(), false).unwrap();
        let big = HyperstandardSpec::<Rat>::new(r.iter().map(to_big), n, false).unwrap();
        prop_assert_eq!(gamma_contains(&small, &b), gamma_contains(&big, &to_big(&b)));
        if b < Rat64::one() {
            prop_assert_eq!(
                to_big(&low_approximation(&small, &b).unwrap()),
                low_approximation(&big, &to_big(&b)).unwrap()
            );
        }
    }

    /// Finite below every `1 − ε`, so only 1 can accumulate.
    #[test]
    fn enumerations_are_finite_and_bounded(
        n in proptest::collection::btree_set(1u64..6, 0..3),
        k in 1i64..40,
    ) {
        let spec = HyperstandardSpec::<Rat>::standard(n, false);
        let eps = Rat::from_frac(1, k);
        let xs = gamma_enumerate_below(&spec, &eps).unwrap();
        prop_assert!(xs.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(xs.iter().all(|x| *x <= Rat::one() - eps.clone() && !(x < &Rat::zero())));
        prop_assert!(xs.iter().all(|x| gamma_contains(&spec, x)));
    }

    #[test]
    fn adjunction_is_rational_affine(r in unit(), l in 1u64..6, b in small(), t in unit()) {
        let c = AdjunctionConstants::new(to_big(&r), l).unwrap();
        let b = to_big(&b);
        let b2 = b.clone() + Rat::one();
        let t = to_big(&t);
        // affine: direct((1−t)b + t·b2) = (1−t)direct(b) + t·direct(b2)
        let mix = (Rat::one() - t.clone()) * b.clone() + t.clone() * b2.clone();
        prop_assert_eq!(
            direct(&c, &mix),
            (Rat::one() - t.clone()) * direct(&c, &b) + t * direct(&c, &b2)
        );
        prop_assert!(direct(&c, &b) < direct(&c, &b2));
        prop_assert_eq!(inverse(&c, &direct(&c, &b)), b);
    }

    /// For `n` divisible by every denominator, an `n`-complement exists iff an
    /// ℝ-complement does.
    #[test]
    fn divisible_indices_match_real_complements(vals in proptest::collection::vec(unit(), 0..6), k in 1u64..4) {
        let b = MultiplicityVector::from_entries(
            vals.iter().enumerate().map(|(i, v)| (format!("P{i}"), to_big(v))),
        ).unwrap();
        let pair = CurvePair::rational(b).unwrap();
        let n = vals.iter().fold(1u64, |a, v| num_integer::lcm(a, *v.denom() as u64)) * k;
        prop_assert_eq!(has_n_complement(&pair, n, &Rat::from_int(2)), has_r_complement(&pair));
        if has_r_complement(&pair) {
            // B itself rounds to B on the lattice
            prop_assert!(check_n_complement_condition1(&pair.b, &pair.b, n));
        }
    }
}

#[test]
fn solutions_are_reproducible() {
    for v in ["sqrt2: (1); rat: (-1)", "sqrt2: (1, 0); sqrt3: (0, 1)", "sqrt5: (1, 2); rat: (0, 1/3)"] {
        let p = IndexProblem {
            divisor: 2,
            eps: Rat::from_frac(1, 10),
            v: SymbolicVector::parse(v).unwrap(),
            e: None,
        };
        assert_eq!(solve(&p, 2000), solve(&p, 2000), "{v}");
    }
}

#[test]
fn suites_reproduce_per_seed() {
    for name in SuiteName::ALL {
        for seed in [1, 2] {
            let a = run_suite(name, seed, 50);
            assert!(a.passed, "{name} seed {seed}: {:?}", a.counterexample);
            assert_eq!(a, run_suite(name, seed, 50));
        }
    }
}
