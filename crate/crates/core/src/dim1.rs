//! Complements on curves.
//!
//! On `ℙ¹` a boundary `B = Σ bᵢPᵢ` has an `ℝ`-complement iff `Σ bᵢ ≤ 2`, and an
//! `n`-complement iff `Σ′ ⌊(n+1)bᵢ⌋/n ≤ 2 − l` where `l = #{bᵢ = 1}` and `Σ′`
//! runs over `bᵢ < 1`. The complement adds `Δ/n` for a reduced `Δ` of general
//! points, represented here by fresh labels.
//!
//! On a genus 1 curve only `B = 0` has a complement (`B⁺ = 0`); a local germ
//! always has one (`B⁺ = ⌈B⌉ₙ`).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperstandard::{low_approximation_vector, HyperstandardError, HyperstandardSpec};
use crate::rounding::{check_n_complement_condition1, floor_scaled, rdn, MultiplicityVector};
use crate::scalar::ExactScalar;
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Dim1Error {
    #[error("multiplicity {value} at `{label}` is outside [0,1]")]
    NotBoundary { label: String, value: String },
    #[error("the pair has no ℝ-complement")]
    NoRComplement,
    #[error("the pair has no {n}-complement")]
    NoComplement { n: u64 },
    #[error("operation needs a rational curve, got {0}")]
    WrongKind(CurveKind),
    #[error("index n must be positive")]
    ZeroIndex,
    #[error("invalid F: {0}")]
    InvalidF(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial has degree {degree}, expected 2n = {expected}")]
    WrongDegree { degree: usize, expected: u64 },
    #[error("factor {factor} has multiplicity {multiplicity} > n = {n}")]
    ExcessiveMultiplicity {
        factor: String,
        multiplicity: u64,
        n: u64,
    },
    #[error("constructed B⁺ failed verification: {0}")]
    Unsound(String),
    #[error(transparent)]
    Hyperstandard(#[from] HyperstandardError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Rational,
    Genus1,
    LocalGerm,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Rational => "rational",
            CurveKind::Genus1 => "genus1",
            CurveKind::LocalGerm => "local_germ",
        })
    }
}

/// A curve with a boundary `B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CurvePair<T: ExactScalar> {
    pub kind: CurveKind,
    #[serde(rename = "B")]
    pub b: MultiplicityVector<T>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_scalar_vec")]
    pub poly: Option<Vec<T>>,
}

mod opt_scalar_vec {
    use crate::scalar::ExactScalar;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<T: ExactScalar, S: Serializer>(v: &Option<Vec<T>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|x| x.iter().map(ToString::to_string).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, T: ExactScalar, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<T>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|raw| {
                raw.iter()
                    .map(|x| T::parse_exact(x).map_err(D::Error::custom))
                    .collect()
            })
            .transpose()
    }
}

impl<T: ExactScalar> CurvePair<T> {
    pub fn new(kind: CurveKind, b: MultiplicityVector<T>) -> Result<Self, Dim1Error> {
        Self { kind, b, poly: None }.validated()
    }

    pub fn rational(b: MultiplicityVector<T>) -> Result<Self, Dim1Error> {
        Self::new(CurveKind::Rational, b)
    }

    pub fn validated(self) -> Result<Self, Dim1Error> {
        for (label, value) in self.b.entries() {
            if value.is_negative() || *value > T::one() {
                return Err(Dim1Error::NotBoundary {
                    label: label.clone(),
                    value: value.to_string(),
                });
            }
        }
        Ok(self)
    }

    fn reduced_count(&self) -> usize {
        self.b.values().filter(|v| v.is_one()).count()
    }
}

/// Type of a pair on `ℙ¹`, read off the sorted multiplicities `b₁ ≥ b₂ ≥ …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeTag {
    /// `b₁ = 1`.
    Lc,
    /// All `bᵢ < 1` and `Σ_{i≥2} bᵢ < 1`.
    Generic,
    /// Type `(0,0)`: all `bᵢ < 1` and `Σ_{i≥2} bᵢ = 1`.
    Semiexceptional,
    /// Type `(−1,−)`: all `bᵢ < 1` and `Σ_{i≥2} bᵢ > 1`.
    Exceptional,
}

impl TypeTag {
    pub fn of<T: ExactScalar>(b: &MultiplicityVector<T>) -> Self {
        let v = b.sorted_values();
        if v.first().is_some_and(|x| x.is_one()) {
            return TypeTag::Lc;
        }
        let tail = v.iter().skip(1).fold(T::zero(), |a, x| a + x.clone());
        match tail.cmp(&T::one()) {
            std::cmp::Ordering::Less => TypeTag::Generic,
            std::cmp::Ordering::Equal => TypeTag::Semiexceptional,
            std::cmp::Ordering::Greater => TypeTag::Exceptional,
        }
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeTag::Lc => "lc",
            TypeTag::Generic => "generic",
            TypeTag::Semiexceptional => "semiexceptional (0,0)",
            TypeTag::Exceptional => "exceptional (-1,-)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ComplementResult<T: ExactScalar> {
    pub exists: bool,
    #[serde(rename = "Bplus")]
    pub b_plus: MultiplicityVector<T>,
    pub n: u64,
    pub type_tag: Option<TypeTag>,
    /// Labels of the added general points `Δ`.
    pub fresh: Vec<String>,
}

/// `Σ bᵢ ≤ 2` on `ℙ¹`; `B = 0` on a genus 1 curve; always for a germ.
pub fn has_r_complement<T: ExactScalar>(p: &CurvePair<T>) -> bool {
    match p.kind {
        CurveKind::Rational => p.b.total() <= T::from_int(2),
        CurveKind::Genus1 => p.b.is_zero(),
        CurveKind::LocalGerm => true,
    }
}

/// `Σ′ ⌊(n+1)bᵢ⌋/n ≤ c − l` with `l = #{bᵢ = 1}`; `c = 2` on `ℙ¹` and
/// `c = d + 1` for general hyperplanes in `ℙ^d`.
pub fn has_n_complement<T: ExactScalar>(p: &CurvePair<T>, n: u64, c: &T) -> bool {
    assert!(n > 0, "index must be positive");
    match p.kind {
        CurveKind::Rational => {
            let l = T::from_u64(p.reduced_count() as u64);
            if l > *c {
                return false;
            }
            let s = p
                .b
                .values()
                .filter(|v| !v.is_one())
                .fold(T::zero(), |a, v| a + floor_scaled(v, n));
            s <= c.clone() - l
        }
        CurveKind::Genus1 => p.b.is_zero(),
        CurveKind::LocalGerm => true,
    }
}

fn fresh_labels<T: ExactScalar>(b: &MultiplicityVector<T>, count: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    let mut i = 1usize;
    while out.len() < count {
        let l = format!("Δ{i}");
        if !b.contains_label(&l) {
            out.push(l);
        }
        i += 1;
    }
    out
}

/// Checks condition (1), `n·B⁺ ∈ ℤ`, `B⁺ ≤ 1` and `Σ B⁺ = degree`.
pub fn verify_complement<T: ExactScalar>(
    b: &MultiplicityVector<T>,
    b_plus: &MultiplicityVector<T>,
    n: u64,
    degree: Option<&T>,
) -> Result<(), String> {
    if !check_n_complement_condition1(b, b_plus, n) {
        return Err("condition (1) fails".into());
    }
    if !b_plus.in_lattice(n) {
        return Err(format!("n·B⁺ is not integral for n = {n}"));
    }
    if !b_plus.is_boundary() {
        return Err("B⁺ is not a boundary".into());
    }
    if let Some(d) = degree {
        let t = b_plus.total();
        if t != *d {
            return Err(format!("Σ B⁺ = {t}, expected {d}"));
        }
    }
    Ok(())
}

/// `B⁺ = Σ′ ⌊(n+1)bᵢ⌋/n Pᵢ + Σ″ Pᵢ + Δ/n` on `ℙ¹`, with `Δ` of
/// `2n − ln − Σ′⌊(n+1)bᵢ⌋` fresh points.
pub fn construct_n_complement<T: ExactScalar>(
    p: &CurvePair<T>,
    n: u64,
) -> Result<ComplementResult<T>, Dim1Error> {
    if n == 0 {
        return Err(Dim1Error::ZeroIndex);
    }
    if !has_n_complement(p, n, &T::from_int(2)) {
        return Err(Dim1Error::NoComplement { n });
    }
    let (b_plus, fresh, degree) = match p.kind {
        CurveKind::Rational => {
            let mut b_plus = p.b.map(|v| rdn(v, n));
            let nn = T::from_u64(n);
            let used = b_plus.total() * nn.clone();
            let missing = T::from_int(2) * nn.clone() - used;
            let count = (0..=2 * n)
                .find(|&k| T::from_u64(k) == missing)
                .ok_or_else(|| Dim1Error::Unsound(format!("Δ has {missing} points")))?;
            let fresh = fresh_labels(&p.b, count as usize);
            for l in &fresh {
                b_plus
                    .push(l.clone(), T::one() / nn.clone())
                    .expect("fresh label");
            }
            (b_plus, fresh, Some(T::from_int(2)))
        }
        CurveKind::Genus1 => (p.b.clone(), Vec::new(), Some(T::zero())),
        CurveKind::LocalGerm => (p.b.map(|v| rdn(v, n)), Vec::new(), None),
    };
    verify_complement(&p.b, &b_plus, n, degree.as_ref()).map_err(Dim1Error::Unsound)?;
    Ok(ComplementResult {
        exists: true,
        b_plus,
        n,
        type_tag: (p.kind == CurveKind::Rational).then(|| TypeTag::of(&p.b)),
        fresh,
    })
}

/// The filtration replayed by [`classify`] by default: `Γ({1})`, `Γ({1,2})`
/// and `Γ({3,4,6})`, each with `ℜ = {1}` and only `l = 1`.
pub fn default_filtration<T: ExactScalar>() -> Vec<HyperstandardSpec<T>> {
    vec![
        HyperstandardSpec::standard([1], true),
        HyperstandardSpec::standard([1, 2], true),
        HyperstandardSpec::standard([3, 4, 6], true),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ClassifyLevel<T: ExactScalar> {
    #[serde(rename = "N")]
    pub n_set: Vec<u64>,
    /// `B_N`, entries sorted by decreasing multiplicity.
    pub approximation: MultiplicityVector<T>,
    pub type_tag: TypeTag,
    /// `n ∈ N` for which `B_N` has an `n`-complement.
    pub indices: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Classification<T: ExactScalar> {
    pub type_tag: TypeTag,
    pub indices: Vec<u64>,
    pub levels: Vec<ClassifyLevel<T>>,
}

fn sorted_desc<T: ExactScalar>(b: &MultiplicityVector<T>) -> MultiplicityVector<T> {
    let mut e: Vec<(String, T)> = b.entries().to_vec();
    e.sort_by(|x, y| y.1.cmp(&x.1));
    MultiplicityVector::from_entries(e).expect("labels already distinct")
}

/// Walks the filtration computing low approximations `B_N` of `B`. Stops at the
/// first level whose approximation is generic or admits an `n`-complement with
/// `n ∈ N`; such a complement is one of `B` as well. The tag is the type of
/// the last approximation computed.
pub fn classify<T: ExactScalar>(
    p: &CurvePair<T>,
    filtration: &[HyperstandardSpec<T>],
) -> Result<Classification<T>, Dim1Error> {
    if p.kind != CurveKind::Rational {
        return Err(Dim1Error::WrongKind(p.kind));
    }
    if !has_r_complement(p) {
        return Err(Dim1Error::NoRComplement);
    }
    if filtration.is_empty() {
        return Err(Dim1Error::InvalidArgument("empty filtration".into()));
    }
    let two = T::from_int(2);
    let mut levels = Vec::new();
    for spec in filtration {
        let approx = sorted_desc(&low_approximation_vector(spec, &p.b)?);
        let tag = TypeTag::of(&approx);
        let pair = CurvePair {
            kind: CurveKind::Rational,
            b: approx.clone(),
            poly: None,
        };
        let indices: Vec<u64> = spec
            .n_set()
            .iter()
            .copied()
            .filter(|&n| has_n_complement(&pair, n, &two))
            .collect();
        let done = tag == TypeTag::Generic || !indices.is_empty();
        levels.push(ClassifyLevel {
            n_set: spec.n_set().iter().copied().collect(),
            approximation: approx,
            type_tag: tag,
            indices,
        });
        if done {
            break;
        }
    }
    let last = levels.last().expect("nonempty filtration");
    Ok(Classification {
        type_tag: last.type_tag,
        indices: last.indices.clone(),
        levels,
    })
}

/// `max{t ≥ 0 : B + tF has an ℝ-complement}`.
pub fn rct_threshold<T: ExactScalar>(
    p: &CurvePair<T>,
    f: &MultiplicityVector<T>,
) -> Result<T, Dim1Error> {
    if !has_r_complement(p) {
        return Err(Dim1Error::NoRComplement);
    }
    if f.values().any(|v| v.is_negative()) {
        return Err(Dim1Error::InvalidF("entries must be nonnegative".into()));
    }
    let total_f = f.total();
    if total_f.is_zero() {
        return Err(Dim1Error::InvalidF("F must be nonzero".into()));
    }
    if p.kind == CurveKind::Genus1 {
        return Ok(T::zero());
    }
    let mut t: Option<T> = None;
    let mut bound = |x: T| {
        t = Some(match t.take() {
            Some(y) => y.min(x),
            None => x,
        })
    };
    for l in p.b.label_union(f) {
        let fi = f.get(l);
        if fi.is_positive() {
            bound((T::one() - p.b.get(l)) / fi);
        }
    }
    if p.kind == CurveKind::Rational {
        bound((T::from_int(2) - p.b.total()) / total_f);
    }
    Ok(t.expect("F has a positive entry"))
}

/// `(1 − b)/f`, the lc threshold of `tF` at a smooth point of multiplicity `b`.
pub fn lct_smooth_point<T: ExactScalar>(b: &T, f: &T) -> Result<T, Dim1Error> {
    if b.is_negative() || *b > T::one() {
        return Err(Dim1Error::InvalidArgument(format!("b = {b} is outside [0,1]")));
    }
    if !f.is_positive() {
        return Err(Dim1Error::InvalidArgument(format!("f = {f} must be positive")));
    }
    Ok((T::one() - b.clone()) / f.clone())
}

/// An irreducible factor of `f` over `ℚ`, as a primitive integer polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub degree: u64,
    pub multiplicity: u64,
}

/// `B⁺ = (f)₀/n` keyed by irreducible factors of `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialComplement {
    pub n: u64,
    #[serde(rename = "Bplus")]
    pub b_plus: MultiplicityVector<Rat>,
    pub factors: Vec<Factor>,
}

impl PolynomialComplement {
    /// `Σ deg(g)·mult(g)`; a factor of degree `d` is `d` geometric points.
    pub fn geometric_total(&self) -> Rat {
        self.factors
            .iter()
            .map(|f| {
                Rat::from_u64(f.degree) * self.b_plus.get(&f.label)
            })
            .sum()
    }
}

/// Accepts `f` of degree `2n` whose roots all have multiplicity `≤ n`.
pub fn polynomial_complement(f: &[Rat], n: u64) -> Result<PolynomialComplement, Dim1Error> {
    if n == 0 {
        return Err(Dim1Error::ZeroIndex);
    }
    let f = poly::trim(f.to_vec());
    if f.is_empty() {
        return Err(Dim1Error::ZeroPolynomial);
    }
    let degree = f.len() - 1;
    if degree as u64 != 2 * n {
        return Err(Dim1Error::WrongDegree {
            degree,
            expected: 2 * n,
        });
    }
    let mut factors = Vec::new();
    for (mult, part) in poly::square_free(&f) {
        for g in poly::irreducible_factors(&poly::primitive(&part)) {
            factors.push(Factor {
                label: poly::format(&g),
                degree: (g.len() - 1) as u64,
                multiplicity: mult,
            });
        }
    }
    factors.sort_by(|a, b| (a.degree, &a.label).cmp(&(b.degree, &b.label)));
    if let Some(bad) = factors.iter().find(|g| g.multiplicity > n) {
        return Err(Dim1Error::ExcessiveMultiplicity {
            factor: bad.label.clone(),
            multiplicity: bad.multiplicity,
            n,
        });
    }
    let b_plus = MultiplicityVector::from_entries(
        factors
            .iter()
            .map(|g| (g.label.clone(), Rat::new(g.multiplicity.into(), n.into()))),
    )
    .expect("irreducible factors are distinct");
    Ok(PolynomialComplement { n, b_plus, factors })
}

/// Univariate polynomials as coefficient vectors, constant term first.
mod poly {
    use super::*;

    pub type QPoly = Vec<Rat>;
    pub type ZPoly = Vec<BigInt>;

    pub fn trim<C: Zero>(mut p: Vec<C>) -> Vec<C> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    fn derivative(p: &QPoly) -> QPoly {
        trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * Rat::from_u64(i as u64))
                .collect(),
        )
    }

    /// `(q, r)` with `a = q·b + r`.
    pub fn div_rem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
        let mut r = trim(a.clone());
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![Rat::zero(); r.len() - db];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r[r.len() - 1].clone() / lead.clone();
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] = r[shift + i].clone() - c.clone() * bc.clone();
            }
            q[shift] = c;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    fn monic(p: &QPoly) -> QPoly {
        let lead = p.last().expect("nonzero").clone();
        p.iter().map(|c| c.clone() / lead.clone()).collect()
    }

    fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
        while !b.is_empty() {
            let (_, r) = div_rem(&a, &b);
            a = b;
            b = r;
        }
        monic(&a)
    }

    /// Yun's square-free decomposition: `(k, a_k)` with `f = c·∏ a_k^k`.
    pub fn square_free(f: &QPoly) -> Vec<(u64, QPoly)> {
        let mut out = Vec::new();
        let f = monic(f);
        if f.len() == 1 {
            return out;
        }
        let df = derivative(&f);
        let a0 = gcd(&f, &df);
        let mut b = div_rem(&f, &a0).0;
        let mut c = div_rem(&df, &a0).0;
        let mut d = sub(&c, &derivative(&b));
        let mut k = 1u64;
        while b.len() > 1 {
            let a = gcd(&b, &d);
            if a.len() > 1 {
                out.push((k, a.clone()));
            }
            b = div_rem(&b, &a).0;
            c = div_rem(&d, &a).0;
            d = sub(&c, &derivative(&b));
            k += 1;
        }
        out
    }

    fn sub(a: &QPoly, b: &QPoly) -> QPoly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    a.get(i).cloned().unwrap_or_else(Rat::zero)
                        - b.get(i).cloned().unwrap_or_else(Rat::zero)
                })
                .collect(),
        )
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive(p: &QPoly) -> ZPoly {
        let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: ZPoly = p
            .iter()
            .map(|c| (c.clone() * Rat::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(Signed::is_negative) {
            g = -g;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    fn to_q(p: &ZPoly) -> QPoly {
        p.iter().map(|c| Rat::from_integer(c.clone())).collect()
    }

    fn eval(p: &ZPoly, x: &BigInt) -> BigInt {
        p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    fn divisors(m: &BigInt) -> Vec<BigInt> {
        let m = m.abs();
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= m {
            if (&m % &d).is_zero() {
                let e = &m / &d;
                if e != d {
                    large.push(e);
                }
                small.push(d.clone());
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        small
    }

    /// Exact quotient `g / h` over `ℤ`, if any.
    fn exact_div(g: &ZPoly, h: &ZPoly) -> Option<ZPoly> {
        let (q, r) = div_rem(&to_q(g), &to_q(h));
        if !r.is_empty() || !q.iter().all(|c| c.is_integer()) {
            return None;
        }
        Some(q.iter().map(|c| c.to_integer()).collect())
    }

    /// Lagrange interpolation through `(xᵢ, yᵢ)`.
    fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> QPoly {
        let mut out = vec![Rat::zero(); xs.len()];
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            let mut basis: QPoly = vec![Rat::one()];
            let mut den = Rat::one();
            for (j, xj) in xs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![Rat::zero(); basis.len() + 1];
                for (k, c) in basis.iter().enumerate() {
                    next[k + 1] = next[k + 1].clone() + c.clone();
                    next[k] = next[k].clone() - c.clone() * Rat::from_integer(xj.clone());
                }
                basis = next;
                den *= Rat::from_integer(xi - xj);
            }
            let scale = Rat::from_integer(yi.clone()) / den;
            for (k, c) in basis.into_iter().enumerate() {
                out[k] = out[k].clone() + c * scale.clone();
            }
        }
        trim(out)
    }

    fn rational_root_factor(g: &ZPoly) -> Option<ZPoly> {
        if g[0].is_zero() {
            return Some(vec![BigInt::zero(), BigInt::one()]);
        }
        let lead = g.last().expect("nonconstant");
        for q in divisors(lead) {
            for p in divisors(&g[0]) {
                for p in [p.clone(), -p] {
                    if !p.gcd(&q).is_one() {
                        continue;
                    }
                    // q·x − p vanishes at p/q
                    let h = vec![-p.clone(), q.clone()];
                    if exact_div(g, &h).is_some() {
                        return Some(h);
                    }
                }
            }
        }
        None
    }

    /// Kronecker's method: a factor of degree `d` is determined by its values
    /// at `d + 1` points, each a divisor of the value of `g` there.
    fn kronecker_factor(g: &ZPoly) -> Option<ZPoly> {
        let deg = g.len() - 1;
        for d in 2..=deg / 2 {
            let mut xs = Vec::new();
            let mut k = 0i64;
            while xs.len() < d + 1 {
                let x = BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
                if !eval(g, &x).is_zero() {
                    xs.push(x);
                }
                k += 1;
            }
            let choices: Vec<Vec<BigInt>> = xs
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let ds = divisors(&eval(g, x));
                    if i == 0 {
                        ds
                    } else {
                        ds.iter().flat_map(|v| [v.clone(), -v.clone()]).collect()
                    }
                })
                .collect();
            let mut idx = vec![0usize; choices.len()];
            loop {
                let ys: Vec<BigInt> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
                let h = interpolate(&xs, &ys);
                if h.len() == d + 1 && h.iter().all(|c| c.is_integer()) {
                    let hz = primitive(&h);
                    if exact_div(g, &hz).is_some() {
                        return Some(hz);
                    }
                }
                let mut i = 0;
                loop {
                    if i == idx.len() {
                        break;
                    }
                    idx[i] += 1;
                    if idx[i] < choices[i].len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == idx.len() {
                    break;
                }
            }
        }
        None
    }

    /// Irreducible factors over `ℚ` of a square-free primitive `g`.
    pub fn irreducible_factors(g: &ZPoly) -> Vec<ZPoly> {
        let mut out = Vec::new();
        let mut stack = vec![g.clone()];
        while let Some(h) = stack.pop() {
            if h.len() <= 2 {
                if h.len() == 2 {
                    out.push(h);
                }
                continue;
            }
            match rational_root_factor(&h).or_else(|| kronecker_factor(&h)) {
                Some(a) => {
                    let b = primitive(&to_q(&exact_div(&h, &a).expect("factor divides")));
                    stack.push(a);
                    stack.push(b);
                }
                None => out.push(h),
            }
        }
        out
    }

    /// `x^2 - 2`, `2x + 1`, `x`.
    pub fn format(p: &ZPoly) -> String {
        let mut s = String::new();
        for (i, c) in p.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if s.is_empty() {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let coeff = if mag.is_one() && i > 0 { String::new() } else { mag.to_string() };
            s.push_str(&coeff);
            match i {
                0 => {}
                1 => s.push('x'),
                _ => s.push_str(&format!("x^{i}")),
            }
        }
        s
    }

}
