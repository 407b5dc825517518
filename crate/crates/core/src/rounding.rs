//! The rounding operator `⌈x⌉ₙ` and the multiplicity-level complement predicates.
//!
//! `⌈x⌉ₙ` is `1` at `x = 1` and `⌊(n+1)x⌋/n` everywhere else. The exception is
//! pointwise: values arbitrarily close to 1 take the generic branch.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::ExactScalar;

/// `⌊(n+1)x⌋/n` without the `x = 1` exception.
pub fn floor_scaled<T: ExactScalar>(x: &T, n: u64) -> T {
    (x.clone() * T::from_u64(n + 1)).floor_val() / T::from_u64(n)
}

/// The rounding operator `⌈x⌉ₙ`.
pub fn rdn<T: ExactScalar>(x: &T, n: u64) -> T {
    assert!(n > 0, "complementary index must be positive");
    if x.is_one() {
        T::one()
    } else {
        floor_scaled(x, n)
    }
}

/// Lower bound a complementing multiplicity must reach over `d`.
pub fn required_multiplicity<T: ExactScalar>(d: &T, n: u64) -> T {
    rdn(d, n)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VectorError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
}

/// Multiplicities of a divisor indexed by prime-divisor labels.
///
/// Labels absent from the vector carry multiplicity zero.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiplicityVector<T> {
    entries: Vec<(String, T)>,
}

impl<T: ExactScalar> MultiplicityVector<T> {
    pub fn new() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn from_entries<L, I>(entries: I) -> Result<Self, VectorError>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, T)>,
    {
        let mut v = Self::new();
        for (label, value) in entries {
            v.push(label, value)?;
        }
        Ok(v)
    }

    pub fn push(&mut self, label: impl Into<String>, value: T) -> Result<(), VectorError> {
        let label = label.into();
        if self.entries.iter().any(|(l, _)| *l == label) {
            return Err(VectorError::DuplicateLabel(label));
        }
        self.entries.push((label, value));
        Ok(())
    }

    pub fn get(&self, label: &str) -> T {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(T::zero)
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.entries.iter().any(|(l, _)| l == label)
    }

    pub fn entries(&self) -> &[(String, T)] {
        &self.entries
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> T {
        self.values().fold(T::zero(), |acc, v| acc + v.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.values().all(|v| v.is_zero())
    }

    pub fn is_boundary(&self) -> bool {
        self.values().all(|v| !v.is_negative() && *v <= T::one())
    }

    /// Every entry lies in `ℤ/n`.
    pub fn in_lattice(&self, n: u64) -> bool {
        self.values().all(|v| v.in_lattice(n))
    }

    pub fn map(&self, mut f: impl FnMut(&T) -> T) -> Self {
        Self {
            entries: self.entries.iter().map(|(l, v)| (l.clone(), f(v))).collect(),
        }
    }

    /// Union of the label sets of `self` and `other`, in first-seen order.
    pub fn label_union<'a>(&'a self, other: &'a Self) -> Vec<&'a str> {
        let mut seen = BTreeSet::new();
        self.labels()
            .chain(other.labels())
            .filter(|l| seen.insert(*l))
            .collect()
    }

    /// Entrywise `self ≤ other` (absent labels read as zero).
    pub fn le(&self, other: &Self) -> bool {
        self.label_union(other)
            .into_iter()
            .all(|l| self.get(l) <= other.get(l))
    }

    /// Maximal absolute value norm of `self − other`.
    pub fn sup_distance(&self, other: &Self) -> T {
        self.label_union(other)
            .into_iter()
            .map(|l| (self.get(l) - other.get(l)).abs())
            .max()
            .unwrap_or_else(T::zero)
    }

    /// Values sorted in decreasing order.
    pub fn sorted_values(&self) -> Vec<T> {
        let mut v: Vec<T> = self.values().cloned().collect();
        v.sort_by(|a, b| b.cmp(a));
        v
    }
}

impl<T: ExactScalar> Default for MultiplicityVector<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: ExactScalar> fmt::Debug for MultiplicityVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: ExactScalar> fmt::Display for MultiplicityVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (l, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}:{v}")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    label: String,
    value: String,
}

impl<T: ExactScalar> Serialize for MultiplicityVector<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr: Vec<EntryRepr> = self
            .entries
            .iter()
            .map(|(l, v)| EntryRepr {
                label: l.clone(),
                value: v.to_string(),
            })
            .collect();
        repr.serialize(s)
    }
}

impl<'de, T: ExactScalar> Deserialize<'de> for MultiplicityVector<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = Vec::<EntryRepr>::deserialize(d)?;
        let mut v = Self::new();
        for e in repr {
            let value = T::parse_exact(&e.value).map_err(D::Error::custom)?;
            v.push(e.label, value).map_err(D::Error::custom)?;
        }
        Ok(v)
    }
}

/// Applies `⌈·⌉ₙ` entrywise.
pub fn rdn_vector<T: ExactScalar>(d: &MultiplicityVector<T>, n: u64) -> MultiplicityVector<T> {
    d.map(|x| rdn(x, n))
}

/// Condition (1) of an `n`-complement at the level of multiplicities:
/// `d⁺ ≥ 1` where `d = 1` and `d⁺ ≥ ⌊(n+1)d⌋/n` elsewhere.
pub fn check_n_complement_condition1<T: ExactScalar>(
    b: &MultiplicityVector<T>,
    b_plus: &MultiplicityVector<T>,
    n: u64,
) -> bool {
    b.label_union(b_plus)
        .into_iter()
        .all(|l| b_plus.get(l) >= rdn(&b.get(l), n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("n·D is not integral at `{label}` (d = {value})")]
    NonIntegral { label: String, value: String },
    #[error("positive multiplicity {value} at `{label}` is below mu = {mu}")]
    SmallPositiveEntry {
        label: String,
        value: String,
        mu: String,
    },
    #[error("‖D − B‖ = {distance} is not below mu/(n+1) = {bound}")]
    DistanceTooLarge { distance: String, bound: String },
    #[error("B is not a boundary at `{label}` (b = {value})")]
    NotBoundary { label: String, value: String },
    #[error("mu must be positive")]
    NonPositiveMu,
}

/// Smallest `m/n ∈ [0,1]` with `m/n ≥ x`, if any.
fn least_admissible<T: ExactScalar>(x: &T, n: u64) -> Option<T> {
    let nn = T::from_u64(n);
    let m = (x.clone() * nn.clone()).ceil_val();
    let v = if m.is_negative() { T::zero() } else { m / nn };
    (v <= T::one()).then_some(v)
}

/// Decides whether every `B⁺ ⊂ ℤ/n ∩ [0,1]` satisfying condition (1) against `B`
/// also satisfies it against `D`.
///
/// The decision runs per prime divisor. Where `d ≤ b` the requirement over `D`
/// is dominated by the one over `B` by monotonicity of the floor; where `d > b`
/// the least admissible `b⁺` over `b` is compared with `⌈d⌉ₙ` directly.
pub fn inverse_stability_transfer<T: ExactScalar>(
    b: &MultiplicityVector<T>,
    d: &MultiplicityVector<T>,
    n: u64,
    mu: &T,
) -> Result<bool, StabilityError> {
    if !mu.is_positive() {
        return Err(StabilityError::NonPositiveMu);
    }
    for (label, value) in b.entries() {
        if value.is_negative() || *value > T::one() {
            return Err(StabilityError::NotBoundary {
                label: label.clone(),
                value: value.to_string(),
            });
        }
    }
    for (label, value) in d.entries() {
        if !value.in_lattice(n) {
            return Err(StabilityError::NonIntegral {
                label: label.clone(),
                value: value.to_string(),
            });
        }
        if value.is_positive() && value < mu {
            return Err(StabilityError::SmallPositiveEntry {
                label: label.clone(),
                value: value.to_string(),
                mu: mu.to_string(),
            });
        }
    }
    let bound = mu.clone() / T::from_u64(n + 1);
    let distance = b.sup_distance(d);
    if distance >= bound {
        return Err(StabilityError::DistanceTooLarge {
            distance: distance.to_string(),
            bound: bound.to_string(),
        });
    }

    let labels = b.label_union(d);
    // An empty family of B⁺ makes the transfer vacuous.
    let mut least = Vec::with_capacity(labels.len());
    for l in &labels {
        match least_admissible(&rdn(&b.get(l), n), n) {
            Some(v) => least.push(v),
            None => return Ok(true),
        }
    }
    Ok(labels.iter().zip(least).all(|(l, b_plus)| {
        let bv = b.get(l);
        let dv = d.get(l);
        let need = rdn(&dv, n);
        if dv <= bv && bv < T::one() {
            // d < 1 here, so ⌈d⌉ₙ ≤ ⌈b⌉ₙ ≤ b⁺.
            true
        } else {
            b_plus >= need
        }
    }))
}

/// `⌊(n+c)b⌋/n` for each `n`; converges to `b` as `n` grows.
pub fn limit_check<T: ExactScalar>(b: &T, c: &T, ns: &[u64]) -> Vec<T> {
    ns.iter()
        .map(|&n| {
            let nn = T::from_u64(n);
            ((nn.clone() + c.clone()) * b.clone()).floor_val() / nn
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    #[allow(unused_imports)]
    use num_traits::{One, Signed, Zero};
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rat {
        Rat::from_frac(p, d)
    }

    fn mv(entries: &[(&str, Rat)]) -> MultiplicityVector<Rat> {
        MultiplicityVector::from_entries(entries.iter().cloned()).unwrap()
    }

    #[test]
    fn rdn_examples() {
        assert_eq!(rdn(&q(1, 2), 1), q(1, 1));
        for n in 1..10 {
            assert_eq!(rdn(&q(1, 1), n), q(1, 1));
            assert_eq!(rdn(&q(0, 1), n), q(0, 1));
        }
        // ⌊99/50⌋/2 = 1/2 < 33/50
        assert_eq!(rdn(&q(33, 50), 2), q(1, 2));
    }

    #[test]
    fn rdn_exception_is_pointwise() {
        // 2/3 is not 1, so the generic branch applies: ⌊3·2/3⌋/2 = 1.
        assert_eq!(rdn(&q(2, 3), 2), q(1, 1));
        // Just below 1, ⌊(n+1)x⌋/n can exceed 1 is impossible but can reach 1.
        assert_eq!(rdn(&q(99, 100), 3), q(1, 1));
        assert_eq!(rdn(&q(7, 10), 1), q(1, 1));
    }

    #[test]
    fn rdn_vector_examples() {
        let d = mv(&[("P", q(1, 1)), ("Q", q(1, 2))]);
        assert_eq!(rdn_vector(&d, 1), mv(&[("P", q(1, 1)), ("Q", q(1, 1))]));
        let z = mv(&[("A", q(0, 1)), ("B", q(0, 1))]);
        assert_eq!(rdn_vector(&z, 5), z);
        assert_eq!(rdn_vector(&mv(&[("P", q(2, 3))]), 2), mv(&[("P", q(1, 1))]));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let err = MultiplicityVector::from_entries([("P", q(1, 2)), ("P", q(1, 3))]).unwrap_err();
        assert_eq!(err, VectorError::DuplicateLabel("P".into()));
    }

    #[test]
    fn condition1_examples() {
        let b = mv(&[("P", q(1, 2))]);
        let bp = mv(&[("P", q(1, 3))]);
        assert!(!check_n_complement_condition1(&b, &bp, 2));
        let own = mv(&[("P", q(1, 1)), ("Q", q(1, 2)), ("R", q(0, 1))]);
        assert!(check_n_complement_condition1(&own, &own, 2));
        // missing labels read as zero on either side
        let b = mv(&[("P", q(1, 4))]);
        let bp = mv(&[("Q", q(1, 1))]);
        assert!(!check_n_complement_condition1(&b, &bp, 4));
        assert!(check_n_complement_condition1(&b, &bp, 2));
    }

    fn exhaustive_transfer(b: &MultiplicityVector<Rat>, d: &MultiplicityVector<Rat>, n: u64) -> bool {
        // Enumerate every B⁺ ⊂ ℤ/n ∩ [0,1] on the union of labels.
        let labels: Vec<String> = b.label_union(d).into_iter().map(String::from).collect();
        let k = labels.len();
        let total = (n + 1).pow(k as u32);
        (0..total).all(|mut code| {
            let mut bp = MultiplicityVector::new();
            for l in &labels {
                bp.push(l.clone(), q((code % (n + 1)) as i64, n as i64)).unwrap();
                code /= n + 1;
            }
            !check_n_complement_condition1(b, &bp, n) || check_n_complement_condition1(d, &bp, n)
        })
    }

    #[test]
    fn inverse_stability_examples() {
        let b = mv(&[("P", q(49, 100))]);
        let d = mv(&[("P", q(1, 2))]);
        assert_eq!(inverse_stability_transfer(&b, &d, 2, &q(1, 2)), Ok(true));
        assert!(exhaustive_transfer(&b, &d, 2));

        let b = mv(&[("P", q(1, 2)), ("Q", q(1, 1))]);
        assert_eq!(inverse_stability_transfer(&b, &b, 2, &q(1, 2)), Ok(true));

        // mu > 1 forces D = 0.
        let b = mv(&[("P", q(1, 10)), ("Q", q(1, 1000))]);
        let zero = mv(&[("P", q(0, 1))]);
        assert_eq!(inverse_stability_transfer(&b, &zero, 3, &q(3, 2)), Ok(true));
    }

    #[test]
    fn inverse_stability_preconditions() {
        let b = mv(&[("P", q(1, 2))]);
        assert!(matches!(
            inverse_stability_transfer(&b, &mv(&[("P", q(1, 3))]), 2, &q(1, 3)),
            Err(StabilityError::NonIntegral { .. })
        ));
        assert!(matches!(
            inverse_stability_transfer(&b, &mv(&[("P", q(1, 2))]), 2, &q(3, 4)),
            Err(StabilityError::SmallPositiveEntry { .. })
        ));
        assert!(matches!(
            inverse_stability_transfer(&mv(&[("P", q(1, 5))]), &mv(&[("P", q(1, 2))]), 2, &q(1, 2)),
            Err(StabilityError::DistanceTooLarge { .. })
        ));
        assert!(matches!(
            inverse_stability_transfer(&mv(&[("P", q(3, 2))]), &mv(&[("P", q(1, 1))]), 2, &q(1, 2)),
            Err(StabilityError::NotBoundary { .. })
        ));
    }

    #[test]
    fn limit_check_examples() {
        assert_eq!(limit_check(&q(1, 3), &q(1, 1), &[3]), vec![q(1, 3)]);
        assert_eq!(
            limit_check(&q(1, 2), &q(1, 1), &[1, 2, 4, 8]),
            vec![q(1, 1), q(1, 2), q(1, 2), q(1, 2)]
        );
        assert!(limit_check(&q(0, 1), &q(5, 7), &[1, 2, 3, 100])
            .iter()
            .all(|x| x.is_zero()));
    }

    fn rat() -> impl Strategy<Value = Rat> {
        (-60i64..60, 1i64..24).prop_map(|(p, d)| q(p, d))
    }

    fn unit() -> impl Strategy<Value = Rat> {
        (0i64..=24, 1i64..=24).prop_filter_map("in [0,1]", |(p, d)| (p <= d).then(|| q(p, d)))
    }

    proptest! {
        #[test]
        fn transfer_matches_exhaustive(
            n in 1u64..5,
            bs in proptest::collection::vec(unit(), 1..3),
            shifts in proptest::collection::vec(-2i64..=2, 1..3),
            mu_num in 1i64..8,
        ) {
            let mu = q(mu_num, 6);
            let b = MultiplicityVector::from_entries(
                bs.iter().enumerate().map(|(i, v)| (format!("P{i}"), v.clone()))).unwrap();
            // D: nearest point of ℤ/n, nudged by the shift
            let d = MultiplicityVector::from_entries(bs.iter().zip(shifts.iter().cycle()).enumerate().map(|(i, (v, s))| {
                let nn = Rat::from_u64(n);
                let m = (v.clone() * nn.clone()).round() + Rat::from_int(*s);
                (format!("P{i}"), m / nn)
            })).unwrap();
            if let Ok(decided) = inverse_stability_transfer(&b, &d, n, &mu) {
                prop_assert_eq!(decided, exhaustive_transfer(&b, &d, n));
                // under the hypotheses the transfer always holds
                prop_assert!(decided);
            }
        }

        #[test]
        fn limit_error_bound(b in rat(), c in rat(), n in 1u64..500) {
            let got = limit_check(&b, &c, &[n]).pop().unwrap();
            let bound = (Rat::from_int(1) + (c * b.clone()).abs()) / Rat::from_u64(n);
            prop_assert!((got - b).abs() < bound);
        }

        #[test]
        fn condition1_monotone_in_b(
            n in 1u64..7,
            pairs in proptest::collection::vec((unit(), unit()), 1..5),
            plus in proptest::collection::vec(0u64..=6, 1..5),
        ) {
            let lo = MultiplicityVector::from_entries(pairs.iter().enumerate()
                .map(|(i, (a, b))| (format!("P{i}"), a.clone().min(b.clone())))).unwrap();
            let hi = MultiplicityVector::from_entries(pairs.iter().enumerate()
                .map(|(i, (a, b))| (format!("P{i}"), a.clone().max(b.clone())))).unwrap();
            let bp = MultiplicityVector::from_entries(plus.iter().enumerate()
                .map(|(i, m)| (format!("P{i}"), q((*m).min(n) as i64, n as i64)))).unwrap();
            if check_n_complement_condition1(&hi, &bp, n) {
                prop_assert!(check_n_complement_condition1(&lo, &bp, n));
            }
        }

        #[test]
        fn own_complement_on_lattice(n in 1u64..9, ms in proptest::collection::vec(0u64..=8, 0..6)) {
            let b = MultiplicityVector::from_entries(ms.iter().enumerate()
                .map(|(i, m)| (format!("P{i}"), q((*m).min(n) as i64, n as i64)))).unwrap();
            prop_assert!(check_n_complement_condition1(&b, &b, n));
        }
    }

    #[test]
    fn serde_shape() {
        let v = mv(&[("P", q(1, 2)), ("Q", q(1, 1))]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[{"label":"P","value":"1/2"},{"label":"Q","value":"1"}]"#);
        let back: MultiplicityVector<Rat> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let dup = r#"[{"label":"P","value":"1/2"},{"label":"P","value":"0.3"}]"#;
        assert!(serde_json::from_str::<MultiplicityVector<Rat>>(dup).is_err());
    }
}
