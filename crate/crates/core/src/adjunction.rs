//! The affine correspondence between multiplicities on a total space (`b`)
//! and on a base (`d`) with adjunction constants `(r, l)`:
//!
//! ```text
//! d = 1 − r/l + b/l        b = r − l + l·d
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperstandard::{low_approximation, HyperstandardError, HyperstandardSpec};
use crate::rounding::{floor_scaled, rdn};
use crate::scalar::{serde_scalar, ExactScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdjunctionError {
    #[error("adjunction constant r = {0} exceeds 1")]
    RAboveOne(String),
    #[error("adjunction constant l must be positive")]
    ZeroL,
    #[error("n·r = {0} is not an integer")]
    NonIntegralNr(String),
    #[error("d = {0} exceeds 1")]
    DAboveOne(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Hyperstandard(#[from] HyperstandardError),
}

/// Adjunction constants `(r, l)` with `r ≤ 1` and `l ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AdjunctionConstants<T: ExactScalar> {
    #[serde(with = "serde_scalar")]
    r: T,
    l: u64,
}

impl<T: ExactScalar> AdjunctionConstants<T> {
    pub fn new(r: T, l: u64) -> Result<Self, AdjunctionError> {
        if r > T::one() {
            return Err(AdjunctionError::RAboveOne(r.to_string()));
        }
        if l == 0 {
            return Err(AdjunctionError::ZeroL);
        }
        Ok(Self { r, l })
    }

    pub fn validated(self) -> Result<Self, AdjunctionError> {
        Self::new(self.r, self.l)
    }

    pub fn r(&self) -> &T {
        &self.r
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    fn l_scalar(&self) -> T {
        T::from_u64(self.l)
    }
}

/// `d = 1 − r/l + b/l`.
pub fn direct<T: ExactScalar>(c: &AdjunctionConstants<T>, b: &T) -> T {
    T::one() + (b.clone() - c.r.clone()) / c.l_scalar()
}

/// `b = r − l + l·d`.
pub fn inverse<T: ExactScalar>(c: &AdjunctionConstants<T>, d: &T) -> T {
    c.r.clone() + c.l_scalar() * (d.clone() - T::one())
}

/// `ℜ′ = {r′ − l(1 − r) ≥ 0 : r ∈ ℜ″, r′ ∈ ℜ, l ≥ 1}`.
///
/// Direct images of `Γ(N, Φ(ℜ))` under constants `(r, l)` with `r ∈ ℜ″`
/// (restricted to `b ≤ r`) land in `Γ(N, Φ(ℜ′))`.
pub fn transport_hyperstandard<T: ExactScalar>(
    r_pp: &BTreeSet<T>,
    r: &BTreeSet<T>,
) -> Result<BTreeSet<T>, AdjunctionError> {
    for x in r_pp.iter().chain(r.iter()) {
        if x.is_negative() || *x > T::one() {
            return Err(AdjunctionError::Precondition(format!("{x} is outside [0,1]")));
        }
    }
    let mut out = BTreeSet::new();
    for rr in r_pp {
        let defect = T::one() - rr.clone();
        for rp in r {
            if defect.is_zero() {
                out.insert(rp.clone());
                continue;
            }
            let mut v = rp.clone() - defect.clone();
            while !v.is_negative() {
                out.insert(v.clone());
                v = v - defect.clone();
            }
        }
    }
    Ok(out)
}

/// Direct images `{1 − r/l + b/l : r ∈ ℜ″, l ≥ 1, b ∈ G, b ≤ r}` of a finite
/// truncation `G`, cut at `1 − ε`. Finite for every `ε > 0`.
pub fn direct_image_below<T: ExactScalar>(r_pp: &BTreeSet<T>, g: &[T], eps: &T) -> Vec<T> {
    assert!(eps.is_positive());
    let mut out = BTreeSet::new();
    for r in r_pp {
        for b in g.iter().filter(|b| *b <= r) {
            let gap = r.clone() - b.clone();
            if gap.is_zero() {
                continue;
            }
            // 1 − gap/l ≤ 1 − ε  ⟺  l ≤ gap/ε
            let l_max = (gap.clone() / eps.clone()).floor_val();
            let mut l = T::one();
            while l <= l_max {
                out.insert(T::one() - gap.clone() / l.clone());
                l = l + T::one();
            }
        }
    }
    out.into_iter().collect()
}

/// Checks `b_{1,n_Φ} ≤ b′` where `b′ = inverse(d′)`, given `0 ≤ b₁ ≤ r` and
/// `d′ ≥ (d₁)_{n_Φ′}` with `d₁ = direct(b₁)`.
///
/// `phi` and `phi_prime` supply `ℜ` and `ℜ′`; their index sets are replaced by
/// `{n}`. `ℜ′` must contain the transport of `ℜ` along `{1, r}`.
pub fn n_phi_inequality_check<T: ExactScalar>(
    c: &AdjunctionConstants<T>,
    n: u64,
    b1: &T,
    d_prime: &T,
    phi: &HyperstandardSpec<T>,
    phi_prime: &HyperstandardSpec<T>,
) -> Result<bool, AdjunctionError> {
    if n == 0 {
        return Err(AdjunctionError::Precondition("n must be positive".into()));
    }
    if b1.is_negative() || *b1 > c.r {
        return Err(AdjunctionError::Precondition(format!(
            "b1 = {b1} must lie in [0, r = {}]",
            c.r
        )));
    }
    let r_pp = BTreeSet::from([T::one(), c.r.clone()]);
    let needed = transport_hyperstandard(&r_pp, phi.r_set())?;
    if !needed.is_subset(phi_prime.r_set()) {
        return Err(AdjunctionError::Precondition(
            "ℜ′ does not contain the transport of ℜ".into(),
        ));
    }
    let phi_n = phi.with_n([n]);
    let phi_prime_n = phi_prime.with_n([n]);
    let d1 = direct(c, b1);
    let floor_d = low_approximation(&phi_prime_n, &d1)?;
    if *d_prime < floor_d {
        return Err(AdjunctionError::Precondition(format!(
            "d′ = {d_prime} is below (d₁)_(n_Φ′) = {floor_d}"
        )));
    }
    let b1_approx = low_approximation(&phi_n, b1)?;
    Ok(b1_approx <= inverse(c, d_prime))
}

fn check_main_pre<T: ExactScalar>(n: u64, r: &T) -> Result<(), AdjunctionError> {
    if n == 0 {
        return Err(AdjunctionError::Precondition("n must be positive".into()));
    }
    if *r > T::one() {
        return Err(AdjunctionError::RAboveOne(r.to_string()));
    }
    if !r.in_lattice(n) {
        return Err(AdjunctionError::NonIntegralNr(
            (r.clone() * T::from_u64(n)).to_string(),
        ));
    }
    Ok(())
}

/// `r − l + l⌊(n+1)d⌋/n ≥ ⌊(n+1)(r − l + l·d)⌋/n` for `n·r ∈ ℤ`, `r ≤ 1`.
pub fn main_inequality_check<T: ExactScalar>(
    n: u64,
    l: u64,
    d: &T,
    r: &T,
) -> Result<bool, AdjunctionError> {
    check_main_pre(n, r)?;
    if l == 0 {
        return Err(AdjunctionError::ZeroL);
    }
    let ll = T::from_u64(l);
    let lhs = r.clone() - ll.clone() + ll.clone() * floor_scaled(d, n);
    let rhs = floor_scaled(&(r.clone() - ll.clone() + ll * d.clone()), n);
    Ok(lhs >= rhs)
}

/// `(⌈b⌉ₙ, b^{[n]})` where `b = inverse(d)` and `b^{[n]} = inverse(⌈d⌉ₙ)`;
/// the first never exceeds the second.
pub fn inverse_rdn_monotonicity<T: ExactScalar>(
    c: &AdjunctionConstants<T>,
    n: u64,
    d: &T,
) -> Result<(T, T), AdjunctionError> {
    check_main_pre(n, &c.r)?;
    if *d > T::one() {
        return Err(AdjunctionError::DAboveOne(d.to_string()));
    }
    let b = inverse(c, d);
    let b_n = inverse(c, &rdn(d, n));
    Ok((rdn(&b, n), b_n))
}

/// For `⌈d⌉ₙ ≤ d⁺ ≤ 1`: returns whether `⌈b⌉ₙ ≤ b⁺ ≤ r ≤ 1` with `b⁺ = inverse(d⁺)`.
pub fn inverse_inequality_check<T: ExactScalar>(
    c: &AdjunctionConstants<T>,
    n: u64,
    d: &T,
    d_plus: &T,
) -> Result<bool, AdjunctionError> {
    check_main_pre(n, &c.r)?;
    if *d_plus > T::one() || *d_plus < rdn(d, n) {
        return Err(AdjunctionError::Precondition(format!(
            "d⁺ = {d_plus} must lie in [⌈d⌉ₙ, 1]"
        )));
    }
    let b_plus = inverse(c, d_plus);
    let b = inverse(c, d);
    Ok(rdn(&b, n) <= b_plus && b_plus <= c.r && c.r <= T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperstandard::{gamma_contains, gamma_enumerate_upto};
    use crate::Rat;
    #[allow(unused_imports)]
    use num_traits::{One, Signed, Zero};
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rat {
        Rat::from_frac(p, d)
    }

    fn c(r: Rat, l: u64) -> AdjunctionConstants<Rat> {
        AdjunctionConstants::new(r, l).unwrap()
    }

    #[test]
    fn direct_and_inverse_examples() {
        let k = c(q(1, 2), 2);
        assert_eq!(direct(&k, &q(1, 2)), q(1, 1));
        assert_eq!(direct(&k, &q(0, 1)), q(3, 4));
        assert_eq!(inverse(&k, &q(3, 4)), q(0, 1));
        assert_eq!(inverse(&k, &q(1, 1)), q(1, 2));
        let id = c(q(1, 1), 1);
        for x in [q(-3, 7), q(0, 1), q(5, 9), q(2, 1)] {
            assert_eq!(direct(&id, &x), x);
            assert_eq!(inverse(&id, &x), x);
        }
    }

    #[test]
    fn constants_validated() {
        assert_eq!(
            AdjunctionConstants::new(q(3, 2), 1),
            Err(AdjunctionError::RAboveOne("3/2".into()))
        );
        assert_eq!(AdjunctionConstants::new(q(1, 2), 0), Err(AdjunctionError::ZeroL));
        let k: AdjunctionConstants<Rat> = serde_json::from_str(r#"{"r":"1/2","l":3}"#).unwrap();
        assert_eq!(k, c(q(1, 2), 3));
        assert_eq!(serde_json::to_string(&k).unwrap(), r#"{"r":"1/2","l":3}"#);
    }

    #[test]
    fn transport_examples() {
        let one: BTreeSet<Rat> = [q(1, 1)].into();
        let r: BTreeSet<Rat> = [q(1, 1), q(1, 3)].into();
        assert_eq!(transport_hyperstandard(&one, &r).unwrap(), r);
        let half: BTreeSet<Rat> = [q(1, 1), q(1, 2)].into();
        assert_eq!(
            transport_hyperstandard(&half, &half).unwrap(),
            [q(0, 1), q(1, 2), q(1, 1)].into()
        );
    }

    #[test]
    fn membership_transport_example() {
        let spec = HyperstandardSpec::<Rat>::standard([2], false);
        let k = c(q(1, 2), 3);
        let rp = transport_hyperstandard(&[q(1, 1), q(1, 2)].into(), spec.r_set()).unwrap();
        let target = spec.with_r(rp).unwrap();
        for b in gamma_enumerate_upto(&spec, &q(1, 2)) {
            assert!(gamma_contains(&target, &direct(&k, &b)), "b = {b}");
        }
    }

    #[test]
    fn n_phi_examples() {
        let phi = HyperstandardSpec::<Rat>::standard([], false);
        let k = c(q(1, 2), 1);
        let rp = transport_hyperstandard(&[q(1, 1), q(1, 2)].into(), phi.r_set()).unwrap();
        let phi_p = phi.with_r(rp).unwrap();
        // d₁ = 1 − 1/2 + 1/3 = 5/6
        assert_eq!(direct(&k, &q(1, 3)), q(5, 6));
        assert_eq!(n_phi_inequality_check(&k, 2, &q(1, 3), &q(5, 6), &phi, &phi_p), Ok(true));
        assert_eq!(n_phi_inequality_check(&k, 2, &q(1, 2), &q(1, 1), &phi, &phi_p), Ok(true));
        assert!(matches!(
            n_phi_inequality_check(&k, 2, &q(3, 4), &q(1, 1), &phi, &phi_p),
            Err(AdjunctionError::Precondition(_))
        ));
        // ℜ′ too small
        assert!(matches!(
            n_phi_inequality_check(&k, 2, &q(1, 3), &q(5, 6), &phi, &phi),
            Err(AdjunctionError::Precondition(_))
        ));
    }

    #[test]
    fn main_inequality_examples() {
        assert_eq!(main_inequality_check(2, 1, &q(1, 2), &q(1, 1)), Ok(true));
        // equality case: both sides 1/2
        let lhs = q(1, 1) - q(1, 1) + floor_scaled(&q(1, 2), 2);
        assert_eq!(lhs, q(1, 2));
        assert_eq!(floor_scaled(&q(1, 2), 2), q(1, 2));
        for d in -3..3 {
            assert_eq!(main_inequality_check(3, 2, &q(d, 1), &q(2, 3)), Ok(true));
        }
        assert!(matches!(
            main_inequality_check(2, 1, &q(1, 2), &q(1, 3)),
            Err(AdjunctionError::NonIntegralNr(_))
        ));
        assert!(matches!(
            main_inequality_check(2, 1, &q(1, 2), &q(3, 2)),
            Err(AdjunctionError::RAboveOne(_))
        ));
    }

    #[test]
    fn inverse_rdn_examples() {
        let k = c(q(1, 2), 2);
        // d = 1, r < 1: b = b^[n] = r and ⌈r⌉ₙ ≤ r
        assert_eq!(inverse_rdn_monotonicity(&k, 2, &q(1, 1)), Ok((q(1, 2), q(1, 2))));
        let k1 = c(q(1, 1), 3);
        assert_eq!(inverse_rdn_monotonicity(&k1, 4, &q(1, 1)), Ok((q(1, 1), q(1, 1))));
        let (lo, hi) = inverse_rdn_monotonicity(&k, 2, &q(3, 4)).unwrap();
        assert_eq!(lo, q(0, 1));
        assert_eq!(hi, inverse(&k, &rdn(&q(3, 4), 2)));
        assert!(lo <= hi);
        assert!(matches!(
            inverse_rdn_monotonicity(&k, 2, &q(5, 4)),
            Err(AdjunctionError::DAboveOne(_))
        ));
    }

    #[test]
    fn direct_image_is_finite_and_dcc_shaped() {
        let spec = HyperstandardSpec::<Rat>::standard([1], false);
        let g = gamma_enumerate_upto(&spec, &q(15, 16));
        let r_pp: BTreeSet<Rat> = [q(1, 1), q(1, 2), q(3, 4)].into();
        let mut prev = 0;
        for k in 1..6 {
            let eps = q(1, 1 << k);
            let img = direct_image_below(&r_pp, &g, &eps);
            assert!(img.iter().all(|x| *x <= q(1, 1) - eps.clone() && !x.is_negative()));
            assert!(img.len() >= prev);
            prev = img.len();
        }
    }

    fn rat() -> impl Strategy<Value = Rat> {
        (-40i64..40, 1i64..16).prop_map(|(p, d)| q(p, d))
    }

    fn r_le_one() -> impl Strategy<Value = Rat> {
        (-20i64..=12, 1i64..=12).prop_filter_map("r ≤ 1", |(p, d)| (p <= d).then(|| q(p, d)))
    }

    proptest! {
        #[test]
        fn bijective_and_increasing(r in r_le_one(), l in 1u64..9, x in rat(), y in rat()) {
            let k = c(r.clone(), l);
            prop_assert_eq!(inverse(&k, &direct(&k, &x)), x.clone());
            prop_assert_eq!(direct(&k, &inverse(&k, &x)), x.clone());
            prop_assert_eq!(x < y, direct(&k, &x) < direct(&k, &y));
            // lc transport
            prop_assert_eq!(x <= r, direct(&k, &x) <= q(1, 1));
            prop_assert_eq!(x < r, direct(&k, &x) < q(1, 1));
            if !x.is_negative() && x <= r {
                let d = direct(&k, &x);
                prop_assert!(!d.is_negative() && d <= q(1, 1));
            }
        }

        #[test]
        fn main_inequality_holds(n in 1u64..12, l in 1u64..6, d in rat(), m in -24i64..=12) {
            let r = q(m, n as i64);
            prop_assume!(r <= q(1, 1));
            prop_assert_eq!(main_inequality_check(n, l, &d, &r), Ok(true));
        }

        #[test]
        fn inverse_inequality_holds(n in 1u64..10, l in 1u64..5, m in -10i64..=10, d in rat(), extra in 0i64..6) {
            let r = q(m, n as i64);
            prop_assume!(r <= q(1, 1) && d <= q(1, 1));
            let k = c(r, l);
            let (lo, hi) = inverse_rdn_monotonicity(&k, n, &d).unwrap();
            prop_assert!(lo <= hi);
            let d_plus = (rdn(&d, n) + q(extra, n as i64)).min(q(1, 1));
            prop_assert_eq!(inverse_inequality_check(&k, n, &d, &d_plus), Ok(true));
        }
    }
}
