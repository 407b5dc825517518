//! Complementary indices with simultaneous approximation.
//!
//! Given `v ∈ ℝ^l`, a divisor `I` and `ε > 0`, find `n` with `I | n` and a
//! rational `v_n` in the rational affine span `⟨v⟩` such that `n·v_n ∈ ℤ^l` and
//! `‖v_n − v‖ < ε/n`. With a direction `e` also `‖(v_n − v)/‖v_n − v‖ − e‖ < ε`.
//! All norms are max-norms.
//!
//! Irrational coordinates are `ℚ`-linear combinations of named symbols, each
//! with an interval enclosure. Symbols named `sqrtK` get an automatic enclosure
//! of `√K`, refined on demand; other symbols need an explicit enclosure.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{serde_scalar, serde_scalar_vec, ExactScalar};
use crate::Rat;

const START_PRECISION: u32 = 48;
const MAX_PRECISION: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("cannot parse symbolic vector: {0}")]
    Parse(String),
    #[error("no certified index up to n = {budget} ({tried} indices tried, last n = {last_n})")]
    BudgetExhausted { budget: u64, tried: u64, last_n: u64 },
    #[error("no lattice points n·x ∈ ℤ^l in the span for any of the {tried} indices tried")]
    EmptyLattice { tried: u64 },
    #[error("enclosures too wide to decide {0}; supply tighter symbol enclosures")]
    EnclosureTooWide(String),
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rat {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.lo.clone() + o.lo.clone(), self.hi.clone() + o.hi.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.lo.clone() - o.hi.clone(), self.hi.clone() - o.lo.clone())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let a = self.lo.clone() * c.clone();
        let b = self.hi.clone() * c.clone();
        if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Self::new(-self.hi.clone(), -self.lo.clone())
        } else {
            Self::new(Rat::zero(), self.hi.clone().max(-self.lo.clone()))
        }
    }

    /// Enclosure of `max(x, y)`.
    pub fn max(&self, o: &Self) -> Self {
        Self::new(
            self.lo.clone().max(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
        )
    }

    /// Enclosure of `x / y`; `None` if `y` may vanish.
    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.contains(&Rat::zero()) {
            return None;
        }
        let cands = [
            self.lo.clone() / o.lo.clone(),
            self.lo.clone() / o.hi.clone(),
            self.hi.clone() / o.lo.clone(),
            self.hi.clone() / o.hi.clone(),
        ];
        let lo = cands.iter().min().cloned()?;
        let hi = cands.iter().max().cloned()?;
        Some(Self::new(lo, hi))
    }

    /// `Some(true)` if certainly `< t`, `Some(false)` if certainly `≥ t`.
    fn lt(&self, t: &Rat) -> Option<bool> {
        if self.hi < *t {
            Some(true)
        } else if self.lo >= *t {
            Some(false)
        } else {
            None
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.lo.to_string(), self.hi.to_string()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (lo, hi) = <(String, String)>::deserialize(d)?;
        let lo = Rat::parse_exact(&lo).map_err(D::Error::custom)?;
        let hi = Rat::parse_exact(&hi).map_err(D::Error::custom)?;
        if lo > hi {
            return Err(D::Error::custom("interval endpoints out of order"));
        }
        Ok(Self { lo, hi })
    }
}

/// `√k` to `prec` binary digits.
pub fn sqrt_enclosure(k: u64, prec: u32) -> Interval {
    let scaled = BigInt::from(k) << (2 * prec as usize);
    let s = scaled.sqrt();
    let den = BigInt::one() << prec as usize;
    if &s * &s == scaled {
        Interval::point(Rat::new(s, den))
    } else {
        Interval::new(Rat::new(s.clone(), den.clone()), Rat::new(s + 1, den))
    }
}

fn sqrt_radicand(name: &str) -> Option<u64> {
    let digits = name.strip_prefix("sqrt")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

mod serde_rat_rows {
    use super::Rat;
    use crate::scalar::ExactScalar;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|r| {
                r.iter()
                    .map(|x| Rat::parse_exact(x).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// One irrational term `ξ · a` of a symbolic vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolTerm {
    pub name: String,
    #[serde(with = "serde_scalar_vec")]
    pub coeffs: Vec<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enclosure: Option<Interval>,
}

impl SymbolTerm {
    fn enclosure_at(&self, prec: u32) -> Interval {
        match (&self.enclosure, sqrt_radicand(&self.name)) {
            (Some(iv), _) => iv.clone(),
            (None, Some(k)) => sqrt_enclosure(k, prec),
            (None, None) => unreachable!("validated on construction"),
        }
    }

    fn refinable(&self) -> bool {
        self.enclosure.is_none()
    }
}

/// `v = a⁰ + Σⱼ ξⱼ aʲ` with rational `aʲ` and symbols `ξⱼ` that are assumed
/// `ℚ`-linearly independent together with 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicVector {
    #[serde(with = "serde_scalar_vec")]
    rational: Vec<Rat>,
    #[serde(default)]
    symbols: Vec<SymbolTerm>,
}

impl SymbolicVector {
    pub fn new(rational: Vec<Rat>, symbols: Vec<SymbolTerm>) -> Result<Self, IndexError> {
        Self { rational, symbols }.validated()
    }

    pub fn rational_only(rational: Vec<Rat>) -> Self {
        Self {
            rational,
            symbols: Vec::new(),
        }
    }

    pub fn validated(self) -> Result<Self, IndexError> {
        let l = self.rational.len();
        if l == 0 {
            return Err(IndexError::InvalidProblem("vector has dimension 0".into()));
        }
        for (i, t) in self.symbols.iter().enumerate() {
            if t.name == "rat" {
                return Err(IndexError::InvalidProblem("`rat` is reserved".into()));
            }
            if self.symbols[..i].iter().any(|o| o.name == t.name) {
                return Err(IndexError::InvalidProblem(format!(
                    "symbol `{}` declared twice",
                    t.name
                )));
            }
            if t.coeffs.len() != l {
                return Err(IndexError::InvalidProblem(format!(
                    "symbol `{}` has {} coefficients, expected {l}",
                    t.name,
                    t.coeffs.len()
                )));
            }
            if t.enclosure.is_none() && sqrt_radicand(&t.name).is_none() {
                return Err(IndexError::InvalidProblem(format!(
                    "symbol `{}` needs an enclosure",
                    t.name
                )));
            }
        }
        Ok(self)
    }

    /// Parses `name: (c1, ..., cl); name[lo, hi]: (...); rat: (...)`.
    ///
    /// `rat` is the rational part and defaults to zero. A bracket gives an
    /// explicit enclosure; `sqrtK` needs none.
    pub fn parse(s: &str) -> Result<Self, IndexError> {
        let mut rational = None;
        let mut symbols = Vec::new();
        for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let (head, body) = item
                .split_once(':')
                .ok_or_else(|| IndexError::Parse(format!("missing `:` in `{item}`")))?;
            let coeffs = parse_tuple(body.trim())?;
            let head = head.trim();
            let (name, enclosure) = match head.split_once('[') {
                Some((name, rest)) => {
                    let inner = rest
                        .strip_suffix(']')
                        .ok_or_else(|| IndexError::Parse(format!("unclosed `[` in `{head}`")))?;
                    let (lo, hi) = inner
                        .split_once(',')
                        .ok_or_else(|| IndexError::Parse(format!("enclosure `{inner}` needs lo, hi")))?;
                    let lo = parse_rat(lo)?;
                    let hi = parse_rat(hi)?;
                    if lo > hi {
                        return Err(IndexError::Parse(format!("empty enclosure in `{head}`")));
                    }
                    (name.trim(), Some(Interval::new(lo, hi)))
                }
                None => (head, None),
            };
            if name.is_empty() {
                return Err(IndexError::Parse(format!("missing name in `{item}`")));
            }
            if name == "rat" {
                if rational.replace(coeffs).is_some() {
                    return Err(IndexError::Parse("`rat` given twice".into()));
                }
            } else {
                symbols.push(SymbolTerm {
                    name: name.to_string(),
                    coeffs,
                    enclosure,
                });
            }
        }
        let l = rational
            .as_ref()
            .map(Vec::len)
            .or_else(|| symbols.first().map(|t| t.coeffs.len()))
            .ok_or_else(|| IndexError::Parse("empty vector".into()))?;
        let rational = rational.unwrap_or_else(|| vec![Rat::zero(); l]);
        Self::new(rational, symbols)
    }

    pub fn dim(&self) -> usize {
        self.rational.len()
    }

    pub fn rational_part(&self) -> &[Rat] {
        &self.rational
    }

    pub fn symbols(&self) -> &[SymbolTerm] {
        &self.symbols
    }

    pub fn is_rational(&self) -> bool {
        self.symbols
            .iter()
            .all(|t| t.coeffs.iter().all(Zero::is_zero))
    }

    fn refinable(&self) -> bool {
        self.symbols.iter().any(SymbolTerm::refinable)
    }

    /// Coordinate enclosures at `prec` binary digits.
    pub fn eval(&self, prec: u32) -> Vec<Interval> {
        let encl: Vec<Interval> = self.symbols.iter().map(|t| t.enclosure_at(prec)).collect();
        (0..self.dim())
            .map(|i| {
                self.symbols
                    .iter()
                    .zip(&encl)
                    .fold(Interval::point(self.rational[i].clone()), |acc, (t, e)| {
                        acc.add(&e.scale(&t.coeffs[i]))
                    })
            })
            .collect()
    }
}

fn parse_rat(s: &str) -> Result<Rat, IndexError> {
    Rat::parse_exact(s).map_err(|e| IndexError::Parse(e.to_string()))
}

fn parse_tuple(s: &str) -> Result<Vec<Rat>, IndexError> {
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| IndexError::Parse(format!("expected `(c1, ..., cl)`, got `{s}`")))?;
    inner.split(',').map(parse_rat).collect()
}

/// Row echelon form (reduced) of rational rows; returns nonzero rows and pivots.
fn rref(mut rows: Vec<Vec<Rat>>, width: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Rational affine subspace `p + span{w_k}` in reduced form: the `w_k` are in
/// reduced row echelon form and `p` vanishes at their pivot coordinates, so two
/// equal subspaces have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSpan {
    #[serde(with = "serde_scalar_vec")]
    pub basepoint: Vec<Rat>,
    #[serde(with = "serde_rat_rows")]
    pub directions: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
}

impl AffineSpan {
    pub fn ambient_dim(&self) -> usize {
        self.basepoint.len()
    }

    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    /// Reduces `x` against the directions; zero iff `x` is a direction vector.
    fn residual(&self, x: &[Rat]) -> Vec<Rat> {
        let mut y = x.to_vec();
        for (w, &p) in self.directions.iter().zip(&self.pivots) {
            let f = y[p].clone();
            if !f.is_zero() {
                for (yj, wj) in y.iter_mut().zip(w) {
                    *yj = yj.clone() - f.clone() * wj.clone();
                }
            }
        }
        y
    }

    pub fn contains_direction(&self, x: &[Rat]) -> bool {
        x.len() == self.ambient_dim() && self.residual(x).iter().all(Zero::is_zero)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        if x.len() != self.ambient_dim() {
            return false;
        }
        let d: Vec<Rat> = x
            .iter()
            .zip(&self.basepoint)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        self.contains_direction(&d)
    }

    /// `p + Σ t_k w_k`.
    fn point(&self, t: &[Rat]) -> Vec<Rat> {
        let mut x = self.basepoint.clone();
        for (w, tk) in self.directions.iter().zip(t) {
            for (xj, wj) in x.iter_mut().zip(w) {
                *xj = xj.clone() + tk.clone() * wj.clone();
            }
        }
        x
    }
}

/// The smallest rational affine subspace containing `v`.
pub fn rational_span(v: &SymbolicVector) -> AffineSpan {
    let l = v.dim();
    let rows: Vec<Vec<Rat>> = v.symbols.iter().map(|t| t.coeffs.clone()).collect();
    let (directions, pivots) = rref(rows, l);
    let mut span = AffineSpan {
        basepoint: vec![Rat::zero(); l],
        directions,
        pivots,
    };
    span.basepoint = span.residual(&v.rational);
    span
}

fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Column operations `M·U = H` with `U` unimodular and `H` in column echelon
/// form; returns `(H, U, pivot rows)` where column `i` of `H` pivots at row `rows[i]`.
fn column_echelon(m: &[Vec<BigInt>], cols: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<usize>) {
    let mut h = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut pivot_rows = Vec::new();
    let mut col = 0;
    for i in 0..h.len() {
        if col == cols {
            break;
        }
        for j in col + 1..cols {
            if h[i][j].is_zero() {
                continue;
            }
            let a = h[i][col].clone();
            let b = h[i][j].clone();
            let eg = a.extended_gcd(&b);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (p, q) = (-(&b / &g), &a / &g);
            for mat in [&mut h, &mut u] {
                for row in mat.iter_mut() {
                    let x = row[col].clone();
                    let y = row[j].clone();
                    row[col] = &s * &x + &t * &y;
                    row[j] = &p * &x + &q * &y;
                }
            }
        }
        if !h[i][col].is_zero() {
            if h[i][col].is_negative() {
                for mat in [&mut h, &mut u] {
                    for row in mat.iter_mut() {
                        row[col] = -row[col].clone();
                    }
                }
            }
            pivot_rows.push(i);
            col += 1;
        }
    }
    (h, u, pivot_rows)
}

/// `{x ∈ span : n·x ∈ ℤ^l}` as `offset + Σ ℤ·generators`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDescription {
    pub n: u64,
    pub empty: bool,
    #[serde(with = "serde_scalar_vec")]
    pub offset: Vec<Rat>,
    #[serde(with = "serde_rat_rows")]
    pub generators: Vec<Vec<Rat>>,
}

impl LatticeDescription {
    pub fn contains(&self, span: &AffineSpan, x: &[Rat]) -> bool {
        !self.empty && span.contains(x) && x.iter().all(|c| c.in_lattice(self.n))
    }
}

/// Points of the span with coordinates in `ℤ/n`.
///
/// With `x = p + Σ (u_k/n) w_k` the pivot coordinates are `u_k/n`, so
/// `n·x ∈ ℤ^l` becomes a system of congruences on `u ∈ ℤ^k`, solved by
/// integer column reduction. The generators are in Hermite normal form in
/// `u`-coordinates and the offset is reduced against them.
pub fn lattice_points_in_span(span: &AffineSpan, n: u64) -> LatticeDescription {
    assert!(n > 0, "index must be positive");
    let l = span.ambient_dim();
    let k = span.dimension();
    let nn = Rat::from_u64(n);
    let free: Vec<usize> = (0..l).filter(|j| !span.pivots.contains(j)).collect();
    let m = free.len();
    // rows: D_j·w_{·,j}·u + D_j·z_j = −D_j·n·p_j
    let mut mat = vec![vec![BigInt::zero(); k + m]; m];
    let mut rhs = vec![BigInt::zero(); m];
    for (row, &j) in free.iter().enumerate() {
        let np = span.basepoint[j].clone() * nn.clone();
        let dj = lcm_denominators(
            std::iter::once(&np).chain(span.directions.iter().map(|w| &w[j])),
        );
        let djr = Rat::from_integer(dj.clone());
        for (c, w) in span.directions.iter().enumerate() {
            mat[row][c] = (w[j].clone() * djr.clone()).to_integer();
        }
        mat[row][k + row] = dj;
        rhs[row] = -(np * djr).to_integer();
    }
    let (h, u, pivot_rows) = column_echelon(&mat, k + m);
    let mut y = vec![BigInt::zero(); k + m];
    let mut solvable = true;
    for (c, &i) in pivot_rows.iter().enumerate() {
        let acc: BigInt = (0..c).map(|j| &h[i][j] * &y[j]).sum();
        let res = &rhs[i] - acc;
        let (q, r) = res.div_rem(&h[i][c]);
        if !r.is_zero() {
            solvable = false;
            break;
        }
        y[c] = q;
    }
    if solvable {
        solvable = (0..m).all(|i| (0..k + m).map(|j| &h[i][j] * &y[j]).sum::<BigInt>() == rhs[i]);
    }
    if !solvable {
        return LatticeDescription {
            n,
            empty: true,
            offset: Vec::new(),
            generators: Vec::new(),
        };
    }
    let full: Vec<BigInt> = (0..k + m)
        .map(|i| (0..k + m).map(|j| &u[i][j] * &y[j]).sum())
        .collect();
    let mut u0: Vec<BigInt> = full[..k].to_vec();
    // kernel columns projected to u-coordinates, as columns of a k×k basis
    let kernel_cols: Vec<usize> = (pivot_rows.len()..k + m).collect();
    let basis: Vec<Vec<BigInt>> = (0..k)
        .map(|i| kernel_cols.iter().map(|&c| u[i][c].clone()).collect())
        .collect();
    let (mut hb, _, _) = column_echelon(&basis, kernel_cols.len());
    for i in 0..k {
        let d = hb[i][i].clone();
        for j in 0..i {
            let f = floor_div(&hb[i][j], &d);
            if !f.is_zero() {
                for row in hb.iter_mut() {
                    row[j] = &row[j] - &f * &row[i];
                }
            }
        }
    }
    for i in 0..k {
        let f = floor_div(&u0[i], &hb[i][i]);
        if !f.is_zero() {
            for (r, ur) in u0.iter_mut().enumerate() {
                *ur = &*ur - &f * &hb[r][i];
            }
        }
    }
    let to_t = |v: &[BigInt]| -> Vec<Rat> {
        v.iter().map(|x| Rat::new(x.clone(), BigInt::from(n))).collect()
    };
    let offset = span.point(&to_t(&u0));
    let zero_span = AffineSpan {
        basepoint: vec![Rat::zero(); l],
        ..span.clone()
    };
    let generators = (0..k)
        .map(|c| {
            let col: Vec<BigInt> = (0..k).map(|r| hb[r][c].clone()).collect();
            zero_span.point(&to_t(&col))
        })
        .collect();
    LatticeDescription {
        n,
        empty: false,
        offset,
        generators,
    }
}

/// Data `(I, ε, v, e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexProblem {
    #[serde(rename = "I")]
    pub divisor: u64,
    #[serde(with = "serde_scalar")]
    pub eps: Rat,
    pub v: SymbolicVector,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rat_vec")]
    pub e: Option<Vec<Rat>>,
}

mod opt_rat_vec {
    use super::Rat;
    use crate::scalar::ExactScalar;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rat>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|x| x.iter().map(ToString::to_string).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rat>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|raw| {
                raw.iter()
                    .map(|x| Rat::parse_exact(x).map_err(D::Error::custom))
                    .collect()
            })
            .transpose()
    }
}

impl IndexProblem {
    /// Checks well-formedness; returns `e` scaled to max-norm 1.
    fn prepare(&self, span: &AffineSpan) -> Result<Option<Vec<Rat>>, IndexError> {
        if self.divisor == 0 {
            return Err(IndexError::InvalidProblem("I must be positive".into()));
        }
        if !self.eps.is_positive() {
            return Err(IndexError::InvalidProblem("eps must be positive".into()));
        }
        let Some(e) = &self.e else { return Ok(None) };
        if self.v.is_rational() {
            return Err(IndexError::InvalidProblem(
                "a rational v admits no direction e".into(),
            ));
        }
        if e.len() != self.v.dim() {
            return Err(IndexError::InvalidProblem(format!(
                "e has {} coordinates, expected {}",
                e.len(),
                self.v.dim()
            )));
        }
        let norm = e.iter().map(Signed::abs).max().unwrap_or_else(Rat::zero);
        if norm.is_zero() {
            return Err(IndexError::InvalidProblem("e must be nonzero".into()));
        }
        if !span.contains_direction(e) {
            return Err(IndexError::InvalidProblem(
                "e is not a direction of the rational span of v".into(),
            ));
        }
        Ok(Some(e.iter().map(|x| x.clone() / norm.clone()).collect()))
    }
}

/// Interval witnesses for the four conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    /// `n = I·q`.
    pub q: u64,
    /// `n·v_n`.
    #[serde(with = "serde_scalar_vec")]
    pub scaled: Vec<Rat>,
    /// Encloses `‖v_n − v‖`; its upper end is below `bound = ε/n`.
    pub distance: Interval,
    #[serde(with = "serde_scalar")]
    pub bound: Rat,
    /// Encloses `‖(v_n − v)/‖v_n − v‖ − e‖`; its upper end is below `ε`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction_deviation: Option<Interval>,
    pub precision_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSolution {
    pub n: u64,
    #[serde(with = "serde_scalar_vec")]
    pub v_n: Vec<Rat>,
    pub certificates: Certificates,
}

struct Measure {
    distance: Interval,
    deviation: Option<Interval>,
}

fn measure(x: &[Rat], coords: &[Interval], e: Option<&[Rat]>) -> Measure {
    let diffs: Vec<Interval> = x
        .iter()
        .zip(coords)
        .map(|(a, c)| Interval::point(a.clone()).sub(c))
        .collect();
    let distance = diffs
        .iter()
        .map(Interval::abs)
        .reduce(|a, b| a.max(&b))
        .expect("positive dimension");
    let deviation = e.map(|e| {
        let mut dev: Option<Interval> = None;
        for (d, ej) in diffs.iter().zip(e) {
            // an enclosure that may contain 0 gives an unbounded quotient
            let Some(w) = d.div(&distance) else {
                return Interval::new(Rat::zero(), Rat::from_int(2) + ej.abs());
            };
            let a = w.sub(&Interval::point(ej.clone())).abs();
            dev = Some(match dev {
                Some(p) => p.max(&a),
                None => a,
            });
        }
        dev.expect("positive dimension")
    });
    Measure {
        distance,
        deviation,
    }
}

fn verdict(m: &Measure, bound: &Rat, eps: &Rat) -> Option<bool> {
    let near = m.distance.lt(bound)?;
    if !near {
        return Some(false);
    }
    match &m.deviation {
        None => Some(true),
        Some(_) if m.distance.is_point() && m.distance.lo.is_zero() => Some(false),
        Some(dev) => dev.lt(eps),
    }
}

/// Decides whether `x` qualifies, refining enclosures as needed.
fn certify(
    v: &SymbolicVector,
    x: &[Rat],
    bound: &Rat,
    eps: &Rat,
    e: Option<&[Rat]>,
    start: u32,
) -> Result<(bool, Measure, u32), IndexError> {
    let mut prec = start;
    loop {
        let m = measure(x, &v.eval(prec), e);
        if let Some(ok) = verdict(&m, bound, eps) {
            return Ok((ok, m, prec));
        }
        if !v.refinable() || prec >= MAX_PRECISION {
            return Err(IndexError::EnclosureTooWide(format!(
                "candidate ({}) against bound {bound}",
                join(x)
            )));
        }
        prec *= 2;
    }
}

fn join(x: &[Rat]) -> String {
    x.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Orders two qualified candidates by distance to `v`; unresolved ties are `Equal`.
fn compare_distance(v: &SymbolicVector, a: &[Rat], b: &[Rat], start: u32) -> Ordering {
    let mut prec = start;
    loop {
        let coords = v.eval(prec);
        let da = measure(a, &coords, None).distance;
        let db = measure(b, &coords, None).distance;
        if da.hi < db.lo {
            return Ordering::Less;
        }
        if db.hi < da.lo {
            return Ordering::Greater;
        }
        if (da.is_point() && db.is_point()) || !v.refinable() || prec >= MAX_PRECISION {
            return Ordering::Equal;
        }
        prec *= 2;
    }
}

fn integer_range(lo: &Rat, hi: &Rat) -> (BigInt, BigInt) {
    (lo.ceil().to_integer(), hi.floor().to_integer())
}

/// Lexicographic enumeration of the integer box `∏ [lo_k, hi_k]`.
fn for_each_in_box(
    ranges: &[(BigInt, BigInt)],
    f: &mut dyn FnMut(&[BigInt]) -> Result<(), IndexError>,
) -> Result<(), IndexError> {
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Ok(());
    }
    let mut cur: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    loop {
        f(&cur)?;
        let mut i = ranges.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                for j in i + 1..ranges.len() {
                    cur[j] = ranges[j].0.clone();
                }
                break;
            }
        }
    }
}

/// Smallest `n = I·q ≤ budget` admitting a certified `v_n`, with the nearest
/// such `v_n` (ties broken lexicographically in the span's pivot coordinates).
///
/// Candidates at each `n` are the points of `(ℤ/n)^l ∩ ⟨v⟩` whose pivot
/// coordinates lie within `ε/n` of those of `v`; this box is exhaustive since
/// the max-norm bounds every coordinate.
pub fn solve(problem: &IndexProblem, budget: u64) -> Result<IndexSolution, IndexError> {
    let v = problem.v.clone().validated()?;
    let span = rational_span(&v);
    let e = problem.prepare(&span)?;
    let eps = &problem.eps;
    let coords0 = v.eval(START_PRECISION);
    let pivot_encl: Vec<Interval> = span.pivots.iter().map(|&p| coords0[p].clone()).collect();

    let mut tried = 0u64;
    let mut last_n = 0u64;
    let mut saw_lattice = false;
    let mut q = 1u64;
    while let Some(n) = problem.divisor.checked_mul(q).filter(|&n| n <= budget) {
        tried += 1;
        last_n = n;
        let nn = Rat::from_u64(n);
        let bound = eps.clone() / nn.clone();
        if !saw_lattice {
            saw_lattice = !lattice_points_in_span(&span, n).empty;
        }
        let ranges: Vec<(BigInt, BigInt)> = pivot_encl
            .iter()
            .map(|t| {
                integer_range(
                    &(t.lo.clone() * nn.clone() - eps.clone()),
                    &(t.hi.clone() * nn.clone() + eps.clone()),
                )
            })
            .collect();
        let mut best: Option<(Vec<Rat>, Measure, u32)> = None;
        for_each_in_box(&ranges, &mut |u| {
            let t: Vec<Rat> = u.iter().map(|x| Rat::new(x.clone(), BigInt::from(n))).collect();
            let x = span.point(&t);
            if !x.iter().all(|c| c.in_lattice(n)) {
                return Ok(());
            }
            let (ok, m, prec) = certify(&v, &x, &bound, eps, e.as_deref(), START_PRECISION)?;
            if !ok {
                return Ok(());
            }
            let better = match &best {
                None => true,
                Some((b, _, _)) => compare_distance(&v, &x, b, START_PRECISION) == Ordering::Less,
            };
            if better {
                best = Some((x, m, prec));
            }
            Ok(())
        })?;
        if let Some((v_n, m, prec)) = best {
            let scaled = v_n.iter().map(|c| c.clone() * nn.clone()).collect();
            return Ok(IndexSolution {
                n,
                v_n,
                certificates: Certificates {
                    q,
                    scaled,
                    distance: m.distance,
                    bound,
                    direction_deviation: m.deviation,
                    precision_bits: prec,
                },
            });
        }
        q += 1;
    }
    if saw_lattice {
        Err(IndexError::BudgetExhausted {
            budget,
            tried,
            last_n,
        })
    } else {
        Err(IndexError::EmptyLattice { tried })
    }
}

/// Re-checks a solution from scratch: divisibility, integrality, membership
/// in `⟨v⟩`, the approximation bound and, if `e` is given, the direction bound.
pub fn verify(problem: &IndexProblem, sol: &IndexSolution) -> Result<(), String> {
    let v = &problem.v;
    if sol.n == 0 || !sol.n.is_multiple_of(problem.divisor) {
        return Err(format!("I = {} does not divide n = {}", problem.divisor, sol.n));
    }
    if sol.v_n.len() != v.dim() {
        return Err("dimension mismatch".into());
    }
    if let Some(c) = sol.v_n.iter().find(|c| !c.in_lattice(sol.n)) {
        return Err(format!("n·{c} is not an integer"));
    }
    let span = rational_span(v);
    if !span.contains(&sol.v_n) {
        return Err("v_n is outside the rational span of v".into());
    }
    let e = problem.prepare(&span).map_err(|e| e.to_string())?;
    let bound = problem.eps.clone() / Rat::from_u64(sol.n);
    let mut prec = START_PRECISION;
    loop {
        let coords = v.eval(prec);
        let mut dist = Rat::zero();
        let mut dist_lo = Rat::zero();
        let mut diffs = Vec::with_capacity(coords.len());
        for (a, c) in sol.v_n.iter().zip(&coords) {
            let lo = a.clone() - c.hi.clone();
            let hi = a.clone() - c.lo.clone();
            let mag_hi = lo.abs().max(hi.abs());
            let mag_lo = if lo.is_positive() {
                lo.clone()
            } else if hi.is_negative() {
                -hi.clone()
            } else {
                Rat::zero()
            };
            dist = dist.max(mag_hi);
            dist_lo = dist_lo.max(mag_lo);
            diffs.push((lo, hi));
        }
        let mut settled = dist < bound;
        if settled {
            if let Some(e) = &e {
                settled = dist_lo.is_positive()
                    && diffs.iter().zip(e).all(|((lo, hi), ej)| {
                        // (v_n − v)_j / ‖v_n − v‖ over all admissible values
                        let q = [
                            lo.clone() / dist_lo.clone(),
                            lo.clone() / dist.clone(),
                            hi.clone() / dist_lo.clone(),
                            hi.clone() / dist.clone(),
                        ];
                        q.iter().all(|w| (w.clone() - ej.clone()).abs() < problem.eps)
                    });
            }
        }
        if settled {
            return Ok(());
        }
        if !v.refinable() || prec >= MAX_PRECISION {
            return Err("conditions could not be certified".into());
        }
        prec *= 2;
    }
}
