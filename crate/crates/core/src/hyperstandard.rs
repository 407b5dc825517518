//! Hyperstandard multiplicity sets `Φ(ℜ)` and their enlargements `Γ(N, Φ)`.
//!
//! An element of `Γ(N, Φ)` has the form
//!
//! ```text
//! b = 1 − r/l + (1/l)·Σₙ mₙ/(n+1),   r ∈ ℜ, l ≥ 1, mₙ ≥ 0, b ≤ 1.
//! ```
//!
//! Writing `S = Σ mₙ/(n+1)` and `g = r − S`, the constraint `b ≤ 1` is `g ≥ 0`
//! and `b = 1 − g/l`. Below any level `1 − ε` only `l ≤ g/ε` contribute, which
//! makes every truncation finite and effectively enumerable.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rounding::MultiplicityVector;
use crate::scalar::{serde_scalar_vec, ExactScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperstandardError {
    #[error("ℜ must lie in [0,1], got {0}")]
    ROutOfRange(String),
    #[error("index set N must contain positive integers only")]
    ZeroIndex,
    #[error("multiplicity {0} is outside [0,1]")]
    OutOfRange(String),
    #[error("Γ(N,Φ) has no largest element below 1 (N is empty and 0 ∉ ℜ)")]
    NoLargest,
    #[error("eps must be positive")]
    NonPositiveEps,
}

/// Presentation `(ℜ, N)` of `Γ(N, Φ(ℜ))`.
///
/// `abridged_l1` restricts to `l = 1`, the variant used for the small
/// filtration sets on curves (e.g. `Γ({1,2}) = {0, 1/3, 1/2, 2/3, 5/6, 1}`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct HyperstandardSpec<T: ExactScalar> {
    #[serde(rename = "R", with = "serde_scalar_vec")]
    r: BTreeSet<T>,
    #[serde(rename = "N", default)]
    n: BTreeSet<u64>,
    #[serde(rename = "abridged", default)]
    abridged_l1: bool,
}

impl<T: ExactScalar> HyperstandardSpec<T> {
    /// Builds a presentation; `1` is added to `ℜ` when missing.
    pub fn new(
        r: impl IntoIterator<Item = T>,
        n: impl IntoIterator<Item = u64>,
        abridged_l1: bool,
    ) -> Result<Self, HyperstandardError> {
        let mut r: BTreeSet<T> = r.into_iter().collect();
        if let Some(bad) = r.iter().find(|x| x.is_negative() || **x > T::one()) {
            return Err(HyperstandardError::ROutOfRange(bad.to_string()));
        }
        r.insert(T::one());
        let n: BTreeSet<u64> = n.into_iter().collect();
        if n.contains(&0) {
            return Err(HyperstandardError::ZeroIndex);
        }
        Ok(Self { r, n, abridged_l1 })
    }

    /// `Γ(N) = Γ(N, Φ({1}))`.
    pub fn standard(n: impl IntoIterator<Item = u64>, abridged_l1: bool) -> Self {
        Self::new([T::one()], n, abridged_l1).expect("valid presentation")
    }

    /// Re-validates after deserialization (serde bypasses [`Self::new`]).
    pub fn normalized(self) -> Result<Self, HyperstandardError> {
        Self::new(self.r, self.n, self.abridged_l1)
    }

    pub fn r_set(&self) -> &BTreeSet<T> {
        &self.r
    }

    pub fn n_set(&self) -> &BTreeSet<u64> {
        &self.n
    }

    pub fn abridged(&self) -> bool {
        self.abridged_l1
    }

    pub fn with_n(&self, n: impl IntoIterator<Item = u64>) -> Self {
        Self {
            r: self.r.clone(),
            n: n.into_iter().collect(),
            abridged_l1: self.abridged_l1,
        }
    }

    pub fn with_r(&self, r: impl IntoIterator<Item = T>) -> Result<Self, HyperstandardError> {
        Self::new(r, self.n.iter().copied(), self.abridged_l1)
    }

    fn max_r(&self) -> T {
        self.r.iter().next_back().cloned().unwrap_or_else(T::one)
    }

    /// `(r, r − S)` for every `r ∈ ℜ` and correction sum `S ≤ r`.
    fn gaps(&self) -> Vec<(T, T)> {
        let sums = correction_sums(&self.n, &self.max_r());
        let mut out = Vec::new();
        for r in &self.r {
            for s in sums.iter().take_while(|s| *s <= r) {
                out.push((r.clone(), r.clone() - s.clone()));
            }
        }
        out
    }
}

/// All sums `Σ_{n∈N} mₙ/(n+1) ≤ bound` with `mₙ ≥ 0`, sorted.
pub fn correction_sums<T: ExactScalar>(n_set: &BTreeSet<u64>, bound: &T) -> BTreeSet<T> {
    let mut acc = BTreeSet::from([T::zero()]);
    for &n in n_set {
        let step = T::one() / T::from_u64(n + 1);
        let mut next = BTreeSet::new();
        for s in &acc {
            let mut x = s.clone();
            while x <= *bound {
                next.insert(x.clone());
                x = x + step.clone();
            }
        }
        acc = next;
    }
    acc
}

/// Membership `b ∈ Γ(N, Φ) ∩ [0,1]`.
pub fn gamma_contains<T: ExactScalar>(spec: &HyperstandardSpec<T>, b: &T) -> bool {
    if b.is_negative() || *b > T::one() {
        return false;
    }
    let one = T::one();
    let gaps = spec.gaps();
    if b.is_one() {
        return gaps.iter().any(|(_, g)| g.is_zero());
    }
    let co = one - b.clone();
    gaps.iter().any(|(_, g)| {
        if g.is_zero() {
            return false;
        }
        let l = g.clone() / co.clone();
        l.is_integral() && l >= T::one() && (!spec.abridged_l1 || l.is_one())
    })
}

/// `Γ(N, Φ) ∩ [0, upper]` for `upper < 1`, ascending.
pub fn gamma_enumerate_upto<T: ExactScalar>(spec: &HyperstandardSpec<T>, upper: &T) -> Vec<T> {
    assert!(*upper < T::one(), "truncation must stay below the accumulation point 1");
    if upper.is_negative() {
        return Vec::new();
    }
    let co = T::one() - upper.clone();
    let mut out = BTreeSet::new();
    for (_, g) in spec.gaps() {
        if g.is_zero() {
            continue;
        }
        let l_max = (g.clone() / co.clone()).floor_val();
        let l_max = if spec.abridged_l1 { l_max.min(T::one()) } else { l_max };
        let mut l = T::one();
        while l <= l_max {
            out.insert(T::one() - g.clone() / l.clone());
            l = l + T::one();
        }
    }
    out.into_iter().collect()
}

/// `Γ(N, Φ) ∩ [0, 1 − ε]`, ascending. For `ε ≥ 1` this is `{0}`.
pub fn gamma_enumerate_below<T: ExactScalar>(
    spec: &HyperstandardSpec<T>,
    eps: &T,
) -> Result<Vec<T>, HyperstandardError> {
    if !eps.is_positive() {
        return Err(HyperstandardError::NonPositiveEps);
    }
    let upper = T::one() - eps.clone();
    if !upper.is_positive() {
        return Ok(vec![T::zero()]);
    }
    Ok(gamma_enumerate_upto(spec, &upper))
}

/// Best low approximation `b_{N_Φ}`: the largest element of `Γ(N, Φ)` not above `b`.
pub fn low_approximation<T: ExactScalar>(
    spec: &HyperstandardSpec<T>,
    b: &T,
) -> Result<T, HyperstandardError> {
    if b.is_negative() || *b > T::one() {
        return Err(HyperstandardError::OutOfRange(b.to_string()));
    }
    let gaps = spec.gaps();
    if b.is_one() {
        return if gaps.iter().any(|(_, g)| g.is_zero()) {
            Ok(T::one())
        } else {
            Err(HyperstandardError::NoLargest)
        };
    }
    let co = T::one() - b.clone();
    let best = gaps
        .iter()
        .filter(|(_, g)| g.is_positive())
        .filter_map(|(_, g)| {
            // largest admissible l maximizes 1 − g/l
            let l = (g.clone() / co.clone()).floor_val();
            let l = if spec.abridged_l1 { l.min(T::one()) } else { l };
            (l >= T::one()).then(|| T::one() - g.clone() / l)
        })
        .max();
    // 0 = 1 − 1/1 is always present since 1 ∈ ℜ.
    Ok(best.unwrap_or_else(T::zero))
}

/// Entrywise low approximation of a boundary.
pub fn low_approximation_vector<T: ExactScalar>(
    spec: &HyperstandardSpec<T>,
    b: &MultiplicityVector<T>,
) -> Result<MultiplicityVector<T>, HyperstandardError> {
    let mut out = MultiplicityVector::new();
    for (l, v) in b.entries() {
        out.push(l.clone(), low_approximation(spec, v)?)
            .expect("labels already distinct");
    }
    Ok(out)
}

/// `ℜ′ = {r − Σ mₙ/(n+1) ≥ 0}` with `Γ(N, Φ(ℜ)) = Φ(ℜ′)`.
pub fn as_hyperstandard<T: ExactScalar>(spec: &HyperstandardSpec<T>) -> BTreeSet<T> {
    spec.gaps().into_iter().map(|(_, g)| g).collect()
}

/// `ℜ̄ ∪ {0}` where `ℜ̄ = {r₀ − Σᵢ(1 − rᵢ)} ∩ [0,1]`, so that `Φ̃ = Φ(ℜ̄ ∪ {0})`.
///
/// An empty `ℜ` is read as `{1}`.
pub fn tilde_set<T: ExactScalar>(r: &BTreeSet<T>) -> Result<BTreeSet<T>, HyperstandardError> {
    if let Some(bad) = r.iter().find(|x| x.is_negative() || **x > T::one()) {
        return Err(HyperstandardError::ROutOfRange(bad.to_string()));
    }
    let mut base = r.clone();
    base.insert(T::one());
    let defects: BTreeSet<T> = base
        .iter()
        .map(|x| T::one() - x.clone())
        .filter(|d| d.is_positive())
        .collect();
    // multiset sums of defects up to 1
    let mut sums = BTreeSet::from([T::zero()]);
    let mut frontier = vec![T::zero()];
    while let Some(s) = frontier.pop() {
        for d in &defects {
            let t = s.clone() + d.clone();
            if t <= T::one() && sums.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    let mut out = BTreeSet::from([T::zero()]);
    for r0 in &base {
        for s in sums.iter().take_while(|s| *s <= r0) {
            out.insert(r0.clone() - s.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rounding::check_n_complement_condition1;
    use crate::Rat;
    #[allow(unused_imports)]
    use num_traits::{One, Signed, Zero};
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rat {
        Rat::from_frac(p, d)
    }

    fn qs(v: &[(i64, i64)]) -> Vec<Rat> {
        v.iter().map(|&(p, d)| q(p, d)).collect()
    }

    /// Brute force over the defining formula: r ∈ ℜ, l ≤ l_max, mₙ ≤ m_max.
    fn brute(spec: &HyperstandardSpec<Rat>, upper: &Rat, l_max: i64, m_max: i64) -> BTreeSet<Rat> {
        let ns: Vec<u64> = spec.n_set().iter().copied().collect();
        let mut sums = vec![q(0, 1)];
        for &n in &ns {
            sums = sums
                .iter()
                .flat_map(|s| (0..=m_max).map(move |m| s.clone() + q(m, n as i64 + 1)))
                .collect();
        }
        let mut out = BTreeSet::new();
        for r in spec.r_set() {
            let ls = if spec.abridged() { 1 } else { l_max };
            for l in 1..=ls {
                for s in &sums {
                    let b = q(1, 1) - r.clone() / q(l, 1) + s.clone() / q(l, 1);
                    if b <= *upper && !b.is_negative() {
                        out.insert(b);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn abridged_small_filtration_set() {
        let spec = HyperstandardSpec::<Rat>::standard([1, 2], true);
        let got: BTreeSet<Rat> = gamma_enumerate_upto(&spec, &q(99, 100)).into_iter().collect();
        let mut expect: BTreeSet<Rat> = qs(&[(0, 1), (1, 3), (1, 2), (2, 3), (5, 6)]).into_iter().collect();
        assert_eq!(got, expect);
        assert!(gamma_contains(&spec, &q(1, 1)));
        expect.insert(q(1, 1));
        for p in 0..=60 {
            let b = q(p, 60);
            assert_eq!(gamma_contains(&spec, &b), expect.contains(&b), "b = {b}");
        }
        let g1 = HyperstandardSpec::<Rat>::standard([1], true);
        let got: Vec<Rat> = gamma_enumerate_upto(&g1, &q(99, 100));
        assert_eq!(got, qs(&[(0, 1), (1, 2)]));
        assert!(gamma_contains(&g1, &q(1, 1)));
    }

    #[test]
    fn standard_set_membership() {
        let spec = HyperstandardSpec::<Rat>::standard([], false);
        for b in qs(&[(0, 1), (1, 2), (2, 3), (3, 4)]) {
            assert!(gamma_contains(&spec, &b));
        }
        assert!(!gamma_contains(&spec, &q(2, 5)));
        // 1 ∉ Φ({1}) and there is no largest element below 1
        assert!(!gamma_contains(&spec, &q(1, 1)));
        assert_eq!(low_approximation(&spec, &q(1, 1)), Err(HyperstandardError::NoLargest));
        // any nonempty N puts 1 back
        assert!(gamma_contains(&HyperstandardSpec::<Rat>::standard([5], false), &q(1, 1)));
    }

    #[test]
    fn enumerate_below_examples() {
        let spec = HyperstandardSpec::<Rat>::standard([], false);
        assert_eq!(
            gamma_enumerate_below(&spec, &q(1, 4)).unwrap(),
            qs(&[(0, 1), (1, 2), (2, 3), (3, 4)])
        );
        assert_eq!(gamma_enumerate_below(&spec, &q(3, 2)).unwrap(), vec![q(0, 1)]);
        let full = HyperstandardSpec::<Rat>::standard([1, 2], false);
        assert_eq!(
            gamma_enumerate_below(&full, &q(1, 4)).unwrap(),
            qs(&[(0, 1), (1, 3), (1, 2), (2, 3), (3, 4)])
        );
        assert_eq!(
            gamma_enumerate_below(&full, &q(0, 1)),
            Err(HyperstandardError::NonPositiveEps)
        );
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let specs = [
            HyperstandardSpec::new(qs(&[(1, 2)]), [1, 3], false).unwrap(),
            HyperstandardSpec::new(qs(&[(1, 3), (3, 4)]), [2], false).unwrap(),
            HyperstandardSpec::new(qs(&[(0, 1), (2, 5)]), [], false).unwrap(),
            HyperstandardSpec::new(qs(&[(1, 2)]), [1, 2, 4], true).unwrap(),
        ];
        let upper = q(7, 8);
        for spec in &specs {
            let got: BTreeSet<Rat> = gamma_enumerate_upto(spec, &upper).into_iter().collect();
            // l ≤ 8 and mₙ ≤ 5 suffice below 7/8
            assert_eq!(got, brute(spec, &upper, 8, 5), "{spec:?}");
        }
    }

    #[test]
    fn low_approximation_examples() {
        let spec = HyperstandardSpec::<Rat>::standard([2], false);
        assert_eq!(low_approximation(&spec, &q(3, 10)).unwrap(), q(0, 1));
        assert_eq!(low_approximation(&spec, &q(1, 3)).unwrap(), q(1, 3));
        assert_eq!(low_approximation(&spec, &q(1, 1)).unwrap(), q(1, 1));
        let g = HyperstandardSpec::<Rat>::standard([1, 2], true);
        assert_eq!(low_approximation(&g, &q(7, 10)).unwrap(), q(2, 3));
        assert_eq!(low_approximation(&g, &q(99, 100)).unwrap(), q(5, 6));
        assert!(matches!(
            low_approximation(&g, &q(11, 10)),
            Err(HyperstandardError::OutOfRange(_))
        ));
    }

    #[test]
    fn as_hyperstandard_examples() {
        let spec = HyperstandardSpec::<Rat>::standard([1], false);
        assert_eq!(as_hyperstandard(&spec), qs(&[(0, 1), (1, 2), (1, 1)]).into_iter().collect());
        let spec = HyperstandardSpec::new(qs(&[(1, 3)]), [], false).unwrap();
        assert_eq!(as_hyperstandard(&spec), spec.r_set().clone());
    }

    #[test]
    fn as_hyperstandard_presents_gamma() {
        let spec = HyperstandardSpec::new(qs(&[(1, 2), (2, 3)]), [1, 2], false).unwrap();
        let phi = HyperstandardSpec::new(as_hyperstandard(&spec), [], false).unwrap();
        for k in 1..6 {
            let eps = q(1, 1 << k);
            assert_eq!(
                gamma_enumerate_below(&spec, &eps).unwrap(),
                gamma_enumerate_below(&phi, &eps).unwrap()
            );
        }
    }

    #[test]
    fn tilde_examples() {
        let one: BTreeSet<Rat> = [q(1, 1)].into();
        assert_eq!(tilde_set(&one).unwrap(), qs(&[(0, 1), (1, 1)]).into_iter().collect());
        assert_eq!(tilde_set(&BTreeSet::new()).unwrap(), tilde_set(&one).unwrap());
        let r: BTreeSet<Rat> = qs(&[(1, 1), (1, 2)]).into_iter().collect();
        let t = tilde_set(&r).unwrap();
        assert_eq!(t, qs(&[(0, 1), (1, 2), (1, 1)]).into_iter().collect());
        assert_eq!(tilde_set(&t).unwrap(), t);
        let r: BTreeSet<Rat> = qs(&[(3, 4), (2, 3)]).into_iter().collect();
        let t = tilde_set(&r).unwrap();
        assert_eq!(tilde_set(&t).unwrap(), t);
    }

    /// Γ̃ straight from its definition: {1 − 1/l + Σ (lᵢ/l) bᵢ ≤ 1} ∪ {1}, truncated.
    fn tilde_gamma_brute(base: &[Rat], upper: &Rat, l_max: i64) -> BTreeSet<Rat> {
        // Σ lᵢ bᵢ over positive bᵢ; the total stays ≤ 1
        let pos: Vec<Rat> = base.iter().filter(|b| b.is_positive()).cloned().collect();
        let mut out = BTreeSet::new();
        for l in 1..=l_max {
            let cap = q(1, 1);
            let mut sums = BTreeSet::from([q(0, 1)]);
            let mut frontier = vec![q(0, 1)];
            while let Some(s) = frontier.pop() {
                for b in &pos {
                    let t = s.clone() + b.clone();
                    if t <= cap && sums.insert(t.clone()) {
                        frontier.push(t);
                    }
                }
            }
            for s in sums {
                let v = q(1, 1) - q(1, l) + s / q(l, 1);
                if v <= *upper {
                    out.insert(v);
                }
            }
        }
        out
    }

    #[test]
    fn tilde_presents_adjunction_closure() {
        for (r, n) in [
            (qs(&[(1, 2)]), vec![]),
            (qs(&[(2, 3)]), vec![1]),
            (qs(&[(1, 2), (3, 4)]), vec![2]),
        ] {
            let spec = HyperstandardSpec::new(r.clone(), n.clone(), false).unwrap();
            let upper = q(5, 6);
            let gamma_full = gamma_enumerate_upto(&spec, &(q(1, 1) - q(1, 64)));
            let brute = tilde_gamma_brute(&gamma_full, &upper, 6);
            let tspec = HyperstandardSpec::new(tilde_set(spec.r_set()).unwrap(), n, false).unwrap();
            let via_tilde: BTreeSet<Rat> = gamma_enumerate_upto(&tspec, &upper).into_iter().collect();
            assert_eq!(via_tilde, brute, "ℜ = {r:?}");
        }
    }

    #[test]
    fn presentation_independence() {
        // Φ({1, 1/2}) = Φ({1, 1/2, 1/4, 1/3})
        let a = HyperstandardSpec::new(qs(&[(1, 2)]), [1, 3], false).unwrap();
        let b = HyperstandardSpec::new(qs(&[(1, 2), (1, 4), (1, 3)]), [1, 3], false).unwrap();
        for k in 1..7 {
            let eps = q(1, 1 << k);
            assert_eq!(
                gamma_enumerate_below(&a, &eps).unwrap(),
                gamma_enumerate_below(&b, &eps).unwrap()
            );
        }
    }

    fn small_unit() -> impl Strategy<Value = Rat> {
        (0i64..=12, 1i64..=12).prop_filter_map("in [0,1]", |(p, d)| (p <= d).then(|| q(p, d)))
    }

    fn spec_strategy() -> impl Strategy<Value = HyperstandardSpec<Rat>> {
        (
            proptest::collection::vec(small_unit(), 0..3),
            proptest::collection::btree_set(1u64..5, 0..3),
            any::<bool>(),
        )
            .prop_map(|(r, n, ab)| HyperstandardSpec::new(r, n, ab).unwrap())
    }

    proptest! {
        #[test]
        fn low_approximation_is_largest_member_below(spec in spec_strategy(), b in small_unit()) {
            prop_assume!(b < q(1, 1));
            let a = low_approximation(&spec, &b).unwrap();
            prop_assert!(a <= b);
            prop_assert!(gamma_contains(&spec, &a));
            prop_assert_eq!(low_approximation(&spec, &a).unwrap(), a.clone());
            let members = gamma_enumerate_upto(&spec, &b);
            prop_assert_eq!(members.last().cloned(), Some(a));
        }

        #[test]
        fn monotone_in_presentation(
            spec in spec_strategy(),
            extra_r in proptest::collection::vec(small_unit(), 0..2),
            extra_n in proptest::collection::btree_set(1u64..5, 0..2),
            b in small_unit(),
        ) {
            prop_assume!(!spec.abridged() && b < q(1, 1));
            let bigger = HyperstandardSpec::new(
                spec.r_set().iter().cloned().chain(extra_r),
                spec.n_set().iter().copied().chain(extra_n),
                false,
            ).unwrap();
            prop_assert!(low_approximation(&spec, &b).unwrap() <= low_approximation(&bigger, &b).unwrap());
            let small: BTreeSet<Rat> = gamma_enumerate_upto(&spec, &q(7, 8)).into_iter().collect();
            let large: BTreeSet<Rat> = gamma_enumerate_upto(&bigger, &q(7, 8)).into_iter().collect();
            prop_assert!(small.is_subset(&large));
        }

        #[test]
        fn lattice_complement_over_low_approximation(
            spec in spec_strategy(),
            bs in proptest::collection::vec(small_unit(), 1..5),
            lift in proptest::collection::vec(0u64..4, 1..5),
        ) {
            prop_assume!(!spec.n_set().is_empty());
            let n = *spec.n_set().iter().next().unwrap();
            let b = MultiplicityVector::from_entries(
                bs.iter().enumerate().map(|(i, v)| (format!("P{i}"), v.clone()))).unwrap();
            let approx = low_approximation_vector(&spec, &b).unwrap();
            // B⁺ ∈ ℤ/n ∩ [0,1] with B⁺ ≥ B_{N_Φ}
            let nn = Rat::from_u64(n);
            let b_plus = approx.map(|a| a.clone());
            let b_plus = MultiplicityVector::from_entries(b_plus.entries().iter().zip(lift.iter().cycle()).map(|((l, a), k)| {
                let m = (a.clone() * nn.clone()).ceil_val() + Rat::from_u64(*k);
                (l.clone(), (m / nn.clone()).min(q(1, 1)))
            })).unwrap();
            prop_assert!(check_n_complement_condition1(&b, &b_plus, n));
        }
    }

    #[test]
    fn spec_serde_shape() {
        let spec = HyperstandardSpec::new(qs(&[(1, 2)]), [1, 2], true).unwrap();
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"R":["1/2","1"],"N":[1,2],"abridged":true}"#);
        let back: HyperstandardSpec<Rat> = serde_json::from_str(r#"{"R":["0.5"],"N":[2,1],"abridged":true}"#).unwrap();
        assert_eq!(back.normalized().unwrap(), spec);
    }
}
