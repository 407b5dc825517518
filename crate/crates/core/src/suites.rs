//! Seeded randomized property suites.
//!
//! Each suite draws exact rational instances from a `ChaCha8` stream and stops
//! at the first violated property, reporting it verbatim. Reports depend only
//! on `(suite, seed, iterations)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adjunction::{
    direct, inverse, inverse_inequality_check, inverse_rdn_monotonicity, main_inequality_check,
    n_phi_inequality_check, transport_hyperstandard, AdjunctionConstants,
};
use crate::dim1::{
    classify, construct_n_complement, default_filtration, has_n_complement, has_r_complement,
    verify_complement, CurvePair, TypeTag,
};
use crate::hyperstandard::{
    as_hyperstandard, gamma_contains, gamma_enumerate_upto, low_approximation, HyperstandardSpec,
};
use crate::rounding::{check_n_complement_condition1, floor_scaled, limit_check, rdn, MultiplicityVector};
use crate::scalar::ExactScalar;
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Inequalities,
    Hyperstandard,
    Adjunction,
    Dim1Tables,
}

impl SuiteName {
    pub const ALL: [SuiteName; 4] = [
        SuiteName::Inequalities,
        SuiteName::Hyperstandard,
        SuiteName::Adjunction,
        SuiteName::Dim1Tables,
    ];
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuiteName::Inequalities => "inequalities",
            SuiteName::Hyperstandard => "hyperstandard",
            SuiteName::Adjunction => "adjunction",
            SuiteName::Dim1Tables => "dim1-tables",
        })
    }
}

impl FromStr for SuiteName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.to_string() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub seed: u64,
    pub iterations: u64,
    pub passed: bool,
    /// Number of instances checked per property.
    pub checks: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<String>,
}

struct Runner {
    checks: BTreeMap<String, u64>,
    failure: Option<String>,
    table: Vec<String>,
}

impl Runner {
    fn new() -> Self {
        Self {
            checks: BTreeMap::new(),
            failure: None,
            table: Vec::new(),
        }
    }

    /// Records one instance of `name`; returns `false` once anything failed.
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) -> bool {
        if self.failure.is_some() {
            return false;
        }
        *self.checks.entry(name.to_string()).or_default() += 1;
        if !ok {
            self.failure = Some(format!("{name}: {}", detail()));
        }
        ok
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

pub fn run_suite(name: SuiteName, seed: u64, iterations: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = Runner::new();
    match name {
        SuiteName::Inequalities => inequalities(&mut rng, &mut run, iterations),
        SuiteName::Hyperstandard => hyperstandard(&mut rng, &mut run, iterations),
        SuiteName::Adjunction => adjunction(&mut rng, &mut run, iterations),
        SuiteName::Dim1Tables => dim1_tables(&mut rng, &mut run, iterations),
    }
    SuiteReport {
        suite: name,
        seed,
        iterations,
        passed: run.failure.is_none(),
        checks: run.checks,
        counterexample: run.failure,
        table: run.table,
    }
}

fn q(a: i64, b: i64) -> Rat {
    Rat::from_frac(a, b)
}

/// `p/d` with `d ≤ max_den` and `|p/d| ≤ span`.
fn rat(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> Rat {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(-span * d..=span * d), d)
}

/// A rational in `[0, 1]`.
fn unit(rng: &mut ChaCha8Rng, max_den: i64) -> Rat {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(0..=d), d)
}

fn fl(x: &Rat) -> Rat {
    x.floor()
}

fn inequalities(rng: &mut ChaCha8Rng, run: &mut Runner, iterations: u64) {
    let one = Rat::one();
    for _ in 0..iterations {
        let a = rat(rng, 5, 40);
        let b = rat(rng, 5, 40);
        let s = fl(&(a.clone() + b.clone()));
        run.check("floor_sum_upper", s <= fl(&a) + fl(&b) + one.clone(), || {
            format!("a = {a}, b = {b}")
        });
        run.check("floor_sum_lower", s >= fl(&a) + fl(&b), || format!("a = {a}, b = {b}"));

        let k = rng.gen_range(1..=6usize);
        let ds: Vec<Rat> = (0..k).map(|_| rat(rng, 3, 30)).collect();
        let sum: Rat = ds.iter().cloned().sum();
        let sum_fl: Rat = ds.iter().map(fl).sum();
        let kk = Rat::from_u64(k as u64);
        run.check("floor_nsum_upper", fl(&sum) <= kk.clone() - one.clone() + sum_fl.clone(), || {
            format!("d = {ds:?}")
        });
        run.check("floor_nsum_lower", fl(&sum) >= sum_fl, || format!("d = {ds:?}"));

        let n = rng.gen_range(1..=30u64);
        let nn = Rat::from_u64(n);
        let d = rat(rng, 3, 30);
        let nd = fl(&(nn.clone() * d.clone()));
        run.check("floor_multiple_upper", nd <= nn.clone() - one.clone() + nn.clone() * fl(&d), || {
            format!("n = {n}, d = {d}")
        });
        run.check("floor_multiple_lower", nd >= nn.clone() * fl(&d), || format!("n = {n}, d = {d}"));

        // r < 1 and s·r ∈ ℤ
        let r = loop {
            let r = rat(rng, 3, 30);
            if r < one {
                break r;
            }
        };
        let s = if r.is_zero() {
            rat(rng, 20, 30)
        } else {
            Rat::from_int(rng.gen_range(-40..=40)) / r.clone()
        };
        run.check(
            "floor_shift_upper",
            fl(&((s.clone() + one.clone()) * r.clone())) <= s.clone() * r.clone(),
            || format!("r = {r}, s = {s}"),
        );

        let l = rng.gen_range(1..=5usize);
        let ds: Vec<Rat> = (0..l).map(|_| rat(rng, 2, 30)).collect();
        let ll = Rat::from_u64(l as u64);
        let lhs = one.clone() - ll.clone() + ds.iter().map(|d| floor_scaled(d, n)).sum::<Rat>();
        let rhs = floor_scaled(&(one.clone() - ll + ds.iter().cloned().sum::<Rat>()), n);
        run.check("rounded_sum_upper", lhs >= rhs, || format!("n = {n}, d = {ds:?}"));

        // n·r ∈ ℤ, r ≤ 1
        let rr = q(rng.gen_range(-3 * n as i64..=n as i64), n as i64);
        let l = rng.gen_range(1..=6u64);
        let dd = rat(rng, 2, 30);
        run.check(
            "main_inequality",
            main_inequality_check(n, l, &dd, &rr) == Ok(true),
            || format!("n = {n}, l = {l}, d = {dd}, r = {rr}"),
        );

        // I | n, l/I ∈ [0,1), |b − l/I| < 1/(I(n+1))
        let i = rng.gen_range(1..=12i64);
        let n_i = (i * rng.gen_range(1..=6)) as u64;
        let li = q(rng.gen_range(0..i), i);
        let width = one.clone() / Rat::from_int(i * (n_i as i64 + 1));
        let delta = width * q(rng.gen_range(0..100), 100);
        let b = if rng.gen_bool(0.5) || li.is_zero() {
            li.clone() + delta.clone()
        } else {
            li.clone() - delta.clone()
        };
        run.check(
            "rounding_near_lattice",
            floor_scaled(&b, n_i) == li && floor_scaled(&li, n_i) == li,
            || format!("I = {i}, n = {n_i}, l/I = {li}, b = {b}"),
        );

        let delta = q(rng.gen_range(1..100), 100) / Rat::from_u64(n + 1);
        let b = one.clone() - delta;
        run.check("rounding_near_one", floor_scaled(&b, n) == one, || {
            format!("n = {n}, b = {b}")
        });

        // b_n = m/n, ε = n·|b − b_n|; each case drawn with its premise holding
        type Relation = fn(&Rat, &Rat) -> bool;
        let cases: [(&str, Relation, Relation); 3] = [
            ("rounding_vs_lattice_le", |b, e| *e < Rat::one() - b.clone(), |bp, bn| bp <= bn),
            ("rounding_vs_lattice_ge", |b, e| e <= b, |bp, bn| bp >= bn),
            ("rounding_vs_lattice_eq", |b, e| *e < b.clone().min(Rat::one() - b.clone()), |bp, bn| bp == bn),
        ];
        for (name, premise, claim) in cases {
            // n = 1 never satisfies the third premise, so n is redrawn too
            let (n, b, bn, eps) = loop {
                let n = rng.gen_range(1..=30u64);
                let nn = Rat::from_u64(n);
                let b = rat(rng, 1, 40);
                let m = (b.clone() * nn.clone()).round() + Rat::from_int(rng.gen_range(-1..=1));
                let bn = m / nn.clone();
                let eps = (b.clone() - bn.clone()).abs() * nn;
                if premise(&b, &eps) {
                    break (n, b, bn, eps);
                }
            };
            let bp = floor_scaled(&b, n);
            run.check(name, claim(&bp, &bn), || {
                format!("n = {n}, b = {b}, b_n = {bn}, eps = {eps}")
            });
        }

        let d = q(rng.gen_range(-3 * n as i64..n as i64), n as i64);
        let fd = floor_scaled(&d, n);
        run.check(
            "rounding_on_lattice",
            fd <= d && ((fd == d) == !d.is_negative()),
            || format!("n = {n}, d = {d}"),
        );

        let b = rat(rng, 2, 40);
        let c = rat(rng, 3, 10);
        let ns = [n, 2 * n, 7 * n];
        let lim = limit_check(&b, &c, &ns);
        let ok = lim.iter().zip(ns).all(|(x, k)| {
            (x.clone() - b.clone()).abs() < (one.clone() + (c.clone() * b.clone()).abs()) / Rat::from_u64(k)
        });
        run.check("rounding_limit", ok, || format!("b = {b}, c = {c}, n = {ns:?}"));

        if run.failed() {
            return;
        }
    }
}

/// `|ℜ| ≤ 4` with denominators at most 6, `|N| ≤ 3` from `1..=6`.
pub fn random_spec(rng: &mut ChaCha8Rng) -> HyperstandardSpec<Rat> {
    let r: Vec<Rat> = (0..rng.gen_range(0..=3)).map(|_| unit(rng, 6)).collect();
    let n: Vec<u64> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(1..=6)).collect();
    HyperstandardSpec::new(r, n, false).expect("valid spec")
}

fn hyperstandard(rng: &mut ChaCha8Rng, run: &mut Runner, iterations: u64) {
    let cut = q(63, 64);
    let abridged = HyperstandardSpec::<Rat>::standard([1, 2], true);
    let expected = [q(0, 1), q(1, 3), q(1, 2), q(2, 3), q(5, 6), q(1, 1)];
    let got: Vec<Rat> = gamma_enumerate_upto(&abridged, &q(5, 6))
        .into_iter()
        .chain(gamma_contains(&abridged, &Rat::one()).then(Rat::one))
        .collect();
    run.check("abridged_gamma_12", got == expected, || format!("got {got:?}"));

    for _ in 0..iterations {
        let spec = random_spec(rng);
        let gamma = gamma_enumerate_upto(&spec, &cut);
        let r_prime = as_hyperstandard(&spec);
        let phi = HyperstandardSpec::new(r_prime.iter().cloned(), [], false).expect("ℜ′ ⊂ [0,1]");
        let phi_enum = gamma_enumerate_upto(&phi, &cut);
        if !run.check("gamma_equals_phi_r_prime", gamma == phi_enum, || {
            format!("spec = {spec:?}")
        }) {
            return;
        }
        let bigger = HyperstandardSpec::new(
            spec.r_set().iter().cloned().chain([unit(rng, 6)]),
            spec.n_set().iter().copied().chain([rng.gen_range(1..=6)]),
            false,
        )
        .expect("valid spec");
        let big_enum: BTreeSet<Rat> = gamma_enumerate_upto(&bigger, &cut).into_iter().collect();
        run.check("monotone_enumeration", gamma.iter().all(|g| big_enum.contains(g)), || {
            format!("spec = {spec:?}, bigger = {bigger:?}")
        });

        let d = rng.gen_range(1..=40);
        let b = q(rng.gen_range(0..d), d);
        let low = low_approximation(&spec, &b).expect("b ∈ [0,1]");
        let low_big = low_approximation(&bigger, &b).expect("b ∈ [0,1]");
        let gap_free = gamma.iter().all(|g| *g <= low || *g > b);
        run.check(
            "low_approximation",
            low <= b && gamma_contains(&spec, &low) && gap_free,
            || format!("spec = {spec:?}, b = {b}, low = {low}"),
        );
        run.check(
            "low_approximation_idempotent",
            low_approximation(&spec, &low).as_ref() == Ok(&low),
            || format!("spec = {spec:?}, b = {b}"),
        );
        run.check("low_approximation_monotone", low <= low_big, || {
            format!("spec = {spec:?}, bigger = {bigger:?}, b = {b}")
        });

        // B⁺ ∈ ℤ/n ∩ [0,1], n ∈ N, B⁺ ≥ B_N ⇒ condition (1)
        if let Some(&n) = spec.n_set().iter().next() {
            let nn = Rat::from_u64(n);
            let bs: Vec<Rat> = (0..rng.gen_range(1..=4)).map(|_| unit(rng, 30)).collect();
            let mut b_vec = MultiplicityVector::new();
            let mut plus = MultiplicityVector::new();
            for (i, bi) in bs.iter().enumerate() {
                let low = low_approximation(&spec, bi).expect("b ∈ [0,1]");
                let least = (low * nn.clone()).ceil() / nn.clone();
                let extra = q(rng.gen_range(0..=2), n as i64);
                let v = (least + extra).min(Rat::one());
                b_vec.push(format!("P{i}"), bi.clone()).expect("distinct");
                plus.push(format!("P{i}"), v).expect("distinct");
            }
            run.check(
                "low_approximation_complement",
                check_n_complement_condition1(&b_vec, &plus, n),
                || format!("spec = {spec:?}, n = {n}, B = {b_vec}, B⁺ = {plus}"),
            );
        }
        if run.failed() {
            return;
        }
    }
}

fn adjunction(rng: &mut ChaCha8Rng, run: &mut Runner, iterations: u64) {
    let one = Rat::one();
    for _ in 0..iterations {
        let r = unit(rng, 8);
        let l = rng.gen_range(1..=5u64);
        let c = AdjunctionConstants::new(r.clone(), l).expect("r ≤ 1");

        let b = rat(rng, 2, 30);
        let d = rat(rng, 2, 30);
        run.check(
            "inverse_direct_identity",
            inverse(&c, &direct(&c, &b)) == b && direct(&c, &inverse(&c, &d)) == d,
            || format!("r = {r}, l = {l}, b = {b}, d = {d}"),
        );
        let db = direct(&c, &b);
        run.check("lc_transport", (b <= r) == (db <= one) && (b < r) == (db < one), || {
            format!("r = {r}, l = {l}, b = {b}")
        });

        // b ∈ Γ(N, Φ(ℜ)), b ≤ r ⇒ direct(b) ∈ Γ(N, Φ(ℜ′))
        let rs: Vec<Rat> = (0..rng.gen_range(0..=2)).map(|_| unit(rng, 4)).collect();
        let ns: Vec<u64> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(1..=4u64)).collect();
        let spec = HyperstandardSpec::new(rs, ns, false)
        .expect("valid spec");
        let r_pp = BTreeSet::from([one.clone(), r.clone()]);
        let r_prime = transport_hyperstandard(&r_pp, spec.r_set()).expect("inputs in [0,1]");
        let image_spec = spec.with_r(r_prime.iter().cloned()).expect("ℜ′ ⊂ [0,1]");
        let members: Vec<Rat> = gamma_enumerate_upto(&spec, &q(7, 8))
            .into_iter()
            .filter(|x| *x <= r)
            .collect();
        if !members.is_empty() {
            let bm = members[rng.gen_range(0..members.len())].clone();
            let dm = direct(&c, &bm);
            run.check("membership_transport", gamma_contains(&image_spec, &dm), || {
                format!("spec = {spec:?}, r = {r}, l = {l}, b = {bm}, d = {dm}")
            });
        }

        // b_{1,n_Φ} ≤ inverse(d′)
        let n = rng.gen_range(1..=6u64);
        let b1 = r.clone() * unit(rng, 12);
        let floor_d = low_approximation(&image_spec.with_n([n]), &direct(&c, &b1)).expect("d ∈ [0,1]");
        let d_prime = (floor_d + unit(rng, 12) * q(1, 4)).min(one.clone());
        let verdict = n_phi_inequality_check(&c, n, &b1, &d_prime, &spec, &image_spec);
        run.check("n_phi_inequality", verdict == Ok(true), || {
            format!("spec = {spec:?}, r = {r}, l = {l}, n = {n}, b1 = {b1}, d′ = {d_prime}, got {verdict:?}")
        });

        // n·r ∈ ℤ variants
        let rn = q(rng.gen_range(-2 * n as i64..=n as i64), n as i64);
        let cn = AdjunctionConstants::new(rn.clone(), l).expect("r ≤ 1");
        let dn = rat(rng, 1, 30).min(one.clone());
        let mono = inverse_rdn_monotonicity(&cn, n, &dn);
        run.check("inverse_rdn_monotonicity", matches!(&mono, Ok((a, b)) if a <= b), || {
            format!("r = {rn}, l = {l}, n = {n}, d = {dn}")
        });
        let lower = rdn(&dn, n);
        if lower <= one {
            let steps = ((one.clone() - lower.clone()) * Rat::from_u64(n)).to_integer();
            let k = rng.gen_range(0..=steps.try_into().unwrap_or(0i64));
            let d_plus = lower + q(k, n as i64);
            run.check(
                "inverse_inequality",
                inverse_inequality_check(&cn, n, &dn, &d_plus) == Ok(true),
                || format!("r = {rn}, l = {l}, n = {n}, d = {dn}, d⁺ = {d_plus}"),
            );
        }
        if run.failed() {
            return;
        }
    }
}

fn mv(vals: &[Rat]) -> MultiplicityVector<Rat> {
    MultiplicityVector::from_entries(
        vals.iter()
            .enumerate()
            .map(|(i, v)| (format!("P{}", i + 1), v.clone())),
    )
    .expect("distinct labels")
}

struct Case {
    name: &'static str,
    b: Vec<Rat>,
    tag: TypeTag,
    indices: Vec<u64>,
    /// Approximation at the deciding level, if pinned down.
    approximation: Option<Vec<Rat>>,
    n: u64,
    /// The pair is its own `n`-complement.
    own: bool,
}

fn golden_cases() -> Vec<Case> {
    let h = q(1, 2);
    vec![
        Case {
            name: "lc: P1 + 1/2 P2 + 1/2 P3",
            b: vec![q(1, 1), h.clone(), h.clone()],
            tag: TypeTag::Lc,
            indices: vec![2],
            approximation: Some(vec![q(1, 1), h.clone(), h.clone()]),
            n: 2,
            own: true,
        },
        Case {
            name: "lc: P1 + 1/3 P2",
            b: vec![q(1, 1), q(1, 3)],
            tag: TypeTag::Lc,
            indices: vec![1],
            approximation: Some(vec![q(1, 1), q(0, 1)]),
            n: 1,
            own: false,
        },
        Case {
            name: "generic: B1 = 0",
            b: vec![q(2, 5)],
            tag: TypeTag::Generic,
            indices: vec![1],
            approximation: Some(vec![q(0, 1)]),
            n: 1,
            own: false,
        },
        Case {
            name: "generic: B1 = 1/2 P1",
            b: vec![q(3, 5), q(3, 10)],
            tag: TypeTag::Generic,
            indices: vec![1],
            approximation: Some(vec![h.clone(), q(0, 1)]),
            n: 1,
            own: false,
        },
        Case {
            name: "generic: B1 = 1/2 P1 + 1/2 P2",
            b: vec![q(7, 10), q(3, 5), q(1, 5)],
            tag: TypeTag::Generic,
            indices: vec![1],
            approximation: Some(vec![h.clone(), h.clone(), q(0, 1)]),
            n: 1,
            own: false,
        },
        Case {
            name: "semiexceptional: B12 = 1/2 P1 + 1/2 P2 + 1/2 P3",
            b: vec![q(3, 5), q(11, 20), h.clone(), q(1, 5)],
            tag: TypeTag::Semiexceptional,
            indices: vec![2],
            approximation: Some(vec![h.clone(), h.clone(), h.clone(), q(0, 1)]),
            n: 2,
            own: false,
        },
        Case {
            name: "semiexceptional: B12 = 2/3 P1 + 1/2 P2 + 1/2 P3",
            b: vec![q(7, 10), q(11, 20), h.clone()],
            tag: TypeTag::Semiexceptional,
            indices: vec![2],
            approximation: Some(vec![q(2, 3), h.clone(), h.clone()]),
            n: 2,
            own: false,
        },
        Case {
            name: "semiexceptional: B12 = 5/6 P1 + 1/2 P2 + 1/2 P3",
            b: vec![q(17, 20), q(11, 20), h.clone()],
            tag: TypeTag::Semiexceptional,
            indices: vec![2],
            approximation: Some(vec![q(5, 6), h.clone(), h.clone()]),
            n: 2,
            own: false,
        },
        Case {
            name: "four halves",
            b: vec![h.clone(); 4],
            tag: TypeTag::Exceptional,
            indices: vec![2],
            approximation: Some(vec![h.clone(); 4]),
            n: 2,
            own: true,
        },
        Case {
            name: "2/3 P1 + 1/2 P2 + 1/2 P3 + 1/3 P4",
            b: vec![q(2, 3), h.clone(), h.clone(), q(1, 3)],
            tag: TypeTag::Exceptional,
            indices: vec![4, 6],
            approximation: None,
            n: 6,
            own: true,
        },
    ]
}

fn random_boundary(rng: &mut ChaCha8Rng) -> Vec<Rat> {
    let k = rng.gen_range(0..=6usize);
    (0..k).map(|_| unit(rng, 12)).collect()
}

fn rational(vals: &[Rat]) -> CurvePair<Rat> {
    CurvePair::rational(mv(vals)).expect("boundary")
}

fn dim1_tables(rng: &mut ChaCha8Rng, run: &mut Runner, iterations: u64) {
    let two = Rat::from_int(2);
    let filtration = default_filtration::<Rat>();
    for case in golden_cases() {
        let pair = CurvePair::rational(mv(&case.b)).expect("boundary");
        let class = match classify(&pair, &filtration) {
            Ok(c) => c,
            Err(e) => {
                run.check(case.name, false, || e.to_string());
                return;
            }
        };
        let last = class.levels.last().expect("nonempty");
        let approx_ok = case
            .approximation
            .as_ref()
            .is_none_or(|a| last.approximation.sorted_values() == *a);
        let built = construct_n_complement(&pair, case.n);
        let built_ok = match &built {
            Ok(r) => {
                verify_complement(&pair.b, &r.b_plus, case.n, Some(&two)).is_ok()
                    && (!case.own || r.b_plus == pair.b)
            }
            Err(_) => false,
        };
        let ok = class.type_tag == case.tag && class.indices == case.indices && approx_ok && built_ok;
        run.table.push(format!(
            "{} | {} | B_N = {} | indices {:?} | n = {} | B⁺ = {}",
            case.name,
            class.type_tag,
            last.approximation,
            class.indices,
            case.n,
            built
                .as_ref()
                .map(|r| r.b_plus.to_string())
                .unwrap_or_else(|e| e.to_string()),
        ));
        if !run.check(case.name, ok, || {
            format!("got {} {:?} at B_N = {}", class.type_tag, class.indices, last.approximation)
        }) {
            return;
        }
    }

    for _ in 0..iterations {
        // resample until the premise holds; B = 0 always has one
        let (vals, n) = (0..64)
            .map(|_| (random_boundary(rng), rng.gen_range(1..=12u64)))
            .find(|(v, n)| has_n_complement(&rational(v), *n, &two))
            .unwrap_or((Vec::new(), 1));
        let pair = rational(&vals);
        let r = construct_n_complement(&pair, n);
        let sound = matches!(&r, Ok(r) if verify_complement(&pair.b, &r.b_plus, n, Some(&two)).is_ok());
        run.check("complement_soundness", sound, || format!("B = {}, n = {n}", pair.b));

        // B′ ≤ B keeps the complement
        let smaller: Vec<Rat> = vals.iter().map(|v| v.clone() * unit(rng, 6)).collect();
        let p2 = rational(&smaller);
        let transfers = has_n_complement(&p2, n, &two)
            && matches!(&r, Ok(r) if check_n_complement_condition1(&p2.b, &r.b_plus, n));
        run.check("monotone_transfer", transfers, || {
            format!("B = {}, B′ = {}, n = {n}", pair.b, p2.b)
        });

        let vals = (0..64)
            .map(|_| random_boundary(rng))
            .find(|v| has_r_complement(&rational(v)))
            .unwrap_or_default();
        let pair = rational(&vals);
        let class = classify(&pair, &filtration);
        run.check(
            "bounded_index",
            matches!(&class, Ok(c) if !c.indices.is_empty()),
            || format!("B = {}, got {class:?}", pair.b),
        );
        let ok = match &class {
            Ok(c) => c.indices.iter().all(|&m| {
                let approx = CurvePair::rational(c.levels.last().expect("nonempty").approximation.clone())
                    .expect("boundary");
                has_n_complement(&pair, m, &two)
                    && matches!(construct_n_complement(&approx, m),
                        Ok(r) if check_n_complement_condition1(&pair.b, &r.b_plus, m))
            }),
            Err(_) => false,
        };
        run.check("low_approximation_transfer", ok, || format!("B = {}", pair.b));

        // sufficiently divisible n: n-complement ⟺ ℝ-complement
        let lcm = vals
            .iter()
            .fold(1u64, |acc, v| num_integer::lcm(acc, v.denom().try_into().unwrap_or(1)));
        let m = lcm * rng.gen_range(1..=3u64);
        run.check(
            "divisible_limit",
            has_n_complement(&pair, m, &two) == has_r_complement(&pair),
            || format!("B = {}, n = {m}", pair.b),
        );
        if run.failed() {
            return;
        }
    }
}
