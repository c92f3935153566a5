//! Truncated skew power series and Laurent series.
//!
//! An element is stored as `x^{-v} · f` where `v ≥ 0` is the shift and `f` is a
//! power series known modulo monomials of total degree `≥ N` (the precision).
//! Every product of generators is brought to normal order `x_1^{a_1}⋯x_n^{a_n}`
//! with the scalar `ε^{ordering_exponent}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::coeff::{CoeffField, Scalar, ScalarRepr};
use crate::commutation::{CommutationData, Exponent};
use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;

/// J-adic truncation order. `Finite(N)` means terms of total degree `≥ N` are
/// unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Precision {
    Finite(u64),
    Infinite,
}

impl Precision {
    fn admits(self, degree: i64) -> bool {
        match self {
            Precision::Finite(n) => degree < n as i64,
            Precision::Infinite => true,
        }
    }

    fn raise(self, by: i64) -> Precision {
        match self {
            Precision::Finite(n) => Precision::Finite((n as i64 + by) as u64),
            Precision::Infinite => Precision::Infinite,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Finite(n) => write!(f, "{n}"),
            Precision::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Precision {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Precision::Finite(n) => serializer.serialize_u64(*n),
            Precision::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Precision {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(0) => Err(de::Error::custom("precision must be positive")),
            Raw::Num(n) => Ok(Precision::Finite(n)),
            Raw::Str(s) if s == "inf" => Ok(Precision::Infinite),
            Raw::Str(s) => Err(de::Error::custom(format!("invalid precision {s:?}"))),
        }
    }
}

/// An element `x^{-shift} · Σ c_s x^s + O(J^precision)` of `R` or `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewSeries {
    shift: Exponent,
    terms: BTreeMap<Exponent, Scalar>,
    precision: Precision,
}

impl SkewSeries {
    pub fn shift(&self) -> &Exponent {
        &self.shift
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// No known nonzero terms (the element vanishes up to its precision).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.shift.is_zero() && self.precision == Precision::Infinite
    }

    /// Exponents of the element itself, i.e. `s - shift` for each stored `s`.
    pub fn support(&self) -> impl Iterator<Item = Exponent> + '_ {
        self.terms.keys().map(|s| s.sub(&self.shift))
    }
}

/// On-disk form of a series, keys in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub precision: Precision,
    pub shift: Vec<i64>,
    pub terms: Vec<TermFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub coeff: ScalarRepr,
    pub exp: Vec<i64>,
}

/// Arithmetic context: commutation data plus the coefficient field realizing `ε`.
#[derive(Debug, Clone)]
pub struct SeriesRing {
    cd: CommutationData,
    field: CoeffField,
}

impl SeriesRing {
    pub fn new(cd: CommutationData, field: CoeffField) -> Result<Self> {
        if field.ell() != cd.ell() {
            return Err(Error::FieldConfig(format!(
                "field root of unity has order {} but commutation data uses ell = {}",
                field.ell(),
                cd.ell()
            )));
        }
        Ok(SeriesRing { cd, field })
    }

    pub fn cd(&self) -> &CommutationData {
        &self.cd
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.cd.n()
    }

    fn check(&self, f: &SkewSeries) -> Result<()> {
        if f.shift.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: f.shift.len() });
        }
        Ok(())
    }

    fn eps(&self, e: i64) -> Scalar {
        self.field.root_power(e)
    }

    fn ord(&self, s: &Exponent, t: &Exponent) -> i64 {
        self.cd.ordering_exponent(s, t).expect("dimensions checked") as i64
    }

    fn sigma(&self, s: &Exponent, t: &Exponent) -> i64 {
        self.cd.sigma_exponent(s, t).expect("dimensions checked") as i64
    }

    /// Builds a series, merging duplicate exponents, pruning zeros and dropping
    /// terms at or beyond the precision.
    pub fn from_terms(
        &self,
        shift: Exponent,
        terms: impl IntoIterator<Item = (Exponent, Scalar)>,
        precision: Precision,
    ) -> Result<SkewSeries> {
        if shift.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: shift.len() });
        }
        if !shift.is_non_negative() {
            return Err(Error::InvalidSeries(format!("shift {shift} has a negative entry")));
        }
        let mut map: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (s, c) in terms {
            if s.len() != self.n() {
                return Err(Error::DimensionMismatch { expected: self.n(), found: s.len() });
            }
            if !s.is_non_negative() {
                return Err(Error::InvalidSeries(format!(
                    "term exponent {s} has a negative entry; use the shift for Laurent terms"
                )));
            }
            if !precision.admits(s.degree()) {
                continue;
            }
            accumulate(&self.field, &mut map, s, c);
        }
        Ok(SkewSeries { shift, terms: map, precision })
    }

    pub fn zero(&self, precision: Precision) -> SkewSeries {
        SkewSeries { shift: Exponent::zero(self.n()), terms: BTreeMap::new(), precision }
    }

    pub fn constant(&self, c: Scalar) -> SkewSeries {
        let mut terms = BTreeMap::new();
        if !self.field.is_zero(&c) {
            terms.insert(Exponent::zero(self.n()), c);
        }
        SkewSeries { shift: Exponent::zero(self.n()), terms, precision: Precision::Infinite }
    }

    pub fn one(&self) -> SkewSeries {
        self.constant(self.field.one())
    }

    /// The generator `x_i` (0-based index).
    pub fn variable(&self, i: usize) -> SkewSeries {
        self.monomial(&Exponent::unit(self.n(), i), self.field.one())
    }

    /// `c · x^e` for any `e ∈ Z^n`, exactly.
    pub fn monomial(&self, e: &Exponent, c: Scalar) -> SkewSeries {
        assert_eq!(e.len(), self.n(), "dimension mismatch");
        let w = e.neg().componentwise_max(&Exponent::zero(self.n()));
        let p = e.componentwise_max(&Exponent::zero(self.n()));
        // x^{-w} x^p = ε^{ord(-w, p)} x^e
        let c = self.field.mul(&c, &self.eps(-self.ord(&w.neg(), &p)));
        let mut terms = BTreeMap::new();
        if !self.field.is_zero(&c) {
            terms.insert(p, c);
        }
        SkewSeries { shift: w, terms, precision: Precision::Infinite }
    }

    /// Re-expresses `f` with a larger shift `u ≥ f.shift`, returning the new
    /// power-series part and its precision.
    fn aligned(&self, f: &SkewSeries, u: &Exponent) -> (BTreeMap<Exponent, Scalar>, Precision) {
        let v = &f.shift;
        if u == v {
            return (f.terms.clone(), f.precision);
        }
        let d = u.sub(v);
        // x^{-v} = ε^{-ord(-u, d)} x^{-u} x^{d}
        let base = -self.ord(&u.neg(), &d);
        let terms = f
            .terms
            .iter()
            .map(|(s, c)| {
                let e = base + self.ord(&d, s);
                (s.add(&d), self.field.mul(c, &self.eps(e)))
            })
            .collect();
        (terms, f.precision.raise(d.degree()))
    }

    pub fn add(&self, f: &SkewSeries, g: &SkewSeries) -> Result<SkewSeries> {
        self.check(f)?;
        self.check(g)?;
        let u = f.shift.componentwise_max(&g.shift);
        let (mut a, pa) = self.aligned(f, &u);
        let (b, pb) = self.aligned(g, &u);
        let precision = pa.min(pb);
        for (s, c) in b {
            accumulate(&self.field, &mut a, s, c);
        }
        a.retain(|s, _| precision.admits(s.degree()));
        Ok(SkewSeries { shift: u, terms: a, precision })
    }

    pub fn scale(&self, c: &Scalar, f: &SkewSeries) -> SkewSeries {
        let terms = if self.field.is_zero(c) {
            BTreeMap::new()
        } else {
            f.terms.iter().map(|(s, d)| (s.clone(), self.field.mul(c, d))).collect()
        };
        SkewSeries { shift: f.shift.clone(), terms, precision: f.precision }
    }

    pub fn neg(&self, f: &SkewSeries) -> SkewSeries {
        self.scale(&self.field.from_i64(-1), f)
    }

    pub fn sub(&self, f: &SkewSeries, g: &SkewSeries) -> Result<SkewSeries> {
        self.add(f, &self.neg(g))
    }

    /// Drops every term of the power-series part of degree `≥ n`.
    pub fn truncate(&self, f: &SkewSeries, n: u64) -> SkewSeries {
        let precision = f.precision.min(Precision::Finite(n));
        let terms = f
            .terms
            .iter()
            .filter(|(s, _)| precision.admits(s.degree()))
            .map(|(s, c)| (s.clone(), c.clone()))
            .collect();
        SkewSeries { shift: f.shift.clone(), terms, precision }
    }

    /// Product `f · g`.
    ///
    /// With `f = x^{-v} a` and `g = x^{-w} b`, moving `x^{-w}` left past `a`
    /// twists each term by `σ(s, -w)`, and `x^{-v} x^{-w} = ε^{ord(-v,-w)} x^{-(v+w)}`.
    pub fn mul(&self, f: &SkewSeries, g: &SkewSeries) -> Result<SkewSeries> {
        self.check(f)?;
        self.check(g)?;
        let (v, w) = (&f.shift, &g.shift);
        let precision = f.precision.min(g.precision);
        let w_neg = w.neg();
        let front = self.ord(&v.neg(), &w_neg);
        let twisted: Vec<(&Exponent, &Scalar, i64)> = f
            .terms
            .iter()
            .map(|(s, c)| {
                let twist = if w.is_zero() { 0 } else { self.sigma(s, &w_neg) };
                (s, c, front + twist)
            })
            .collect();
        let mut out: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (s, c, e) in &twisted {
            for (t, d) in &g.terms {
                let st = s.add(t);
                if !precision.admits(st.degree()) {
                    continue;
                }
                let k = self.field.mul(&self.field.mul(c, d), &self.eps(e + self.ord(s, t)));
                accumulate(&self.field, &mut out, st, k);
            }
        }
        Ok(SkewSeries { shift: v.add(w), terms: out, precision })
    }

    /// Two-sided inverse modulo `J^target`.
    ///
    /// The power-series part must either have a nonzero constant term or, when
    /// known exactly, be a monomial times such a series.
    pub fn invert(&self, f: &SkewSeries, target: u64) -> Result<SkewSeries> {
        self.check(f)?;
        if target == 0 {
            return Err(Error::InvalidSeries("target precision must be positive".into()));
        }
        if f.terms.is_empty() {
            return Err(Error::NotInvertible("series vanishes to its precision".into()));
        }
        let n = self.n();
        let zero = Exponent::zero(n);
        // a = x^{u} · b up to a root of unity, with b(0) ≠ 0
        let u = if f.terms.contains_key(&zero) {
            zero.clone()
        } else if f.precision == Precision::Infinite {
            let u = f.terms.keys().skip(1).fold(f.terms.keys().next().unwrap().clone(), |acc, s| acc.componentwise_min(s));
            if !f.terms.contains_key(&u) {
                return Err(Error::NotInvertible(format!(
                    "lowest part is not a single monomial times a unit (monomial gcd {u} is not in the support)"
                )));
            }
            u
        } else {
            return Err(Error::NotInvertible(
                "zero constant term; a monomial factor cannot be split off a truncated series".into(),
            ));
        };
        let u_neg = u.neg();
        let b: BTreeMap<Exponent, Scalar> = f
            .terms
            .iter()
            .map(|(s, c)| (s.sub(&u), self.field.mul(c, &self.eps(self.ord(&u_neg, s)))))
            .collect();
        let b = SkewSeries { shift: zero.clone(), terms: b, precision: f.precision };

        let n_eff = match b.precision.min(Precision::Finite(target)) {
            Precision::Finite(k) => k,
            Precision::Infinite => unreachable!(),
        };
        let c0 = b.terms[&zero].clone();
        let c0_inv = self.field.inv(&c0)?;
        // b = c0 (1 - e) with e(0) = 0, so b^{-1} = (Σ_{k<N} e^k) c0^{-1}
        let normalized = self.scale(&c0_inv, &b);
        let e = self.sub(&self.one(), &normalized)?;
        let e = self.truncate(&e, n_eff);
        let one = self.truncate(&self.one(), n_eff);
        let mut geom = one.clone();
        for _ in 1..n_eff {
            geom = self.add(&one, &self.mul(&e, &geom)?)?;
        }
        let b_inv = self.scale(&c0_inv, &geom);

        // f^{-1} = b^{-1} x^{-u} (x^{-v})^{-1} = b^{-1} ε^{ord(-u,v) - ord(-v,v)} x^{v-u}
        let v = &f.shift;
        let k = self.ord(&u_neg, v) - self.ord(&v.neg(), v);
        let tail = self.monomial(&v.sub(&u), self.eps(k));
        self.mul(&b_inv, &tail)
    }

    /// Whether every monomial of `f` is central, i.e. every support exponent
    /// lies in `S`.
    pub fn is_central(&self, f: &SkewSeries) -> Result<bool> {
        self.check(f)?;
        for s in f.support() {
            if !self.cd.is_central_exponent(&s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `f - g` has no known nonzero term.
    pub fn same_element(&self, f: &SkewSeries, g: &SkewSeries) -> Result<bool> {
        Ok(self.sub(f, g)?.is_zero())
    }

    pub fn to_file(&self, f: &SkewSeries) -> SeriesFile {
        SeriesFile {
            precision: f.precision,
            shift: f.shift.0.clone(),
            terms: f
                .terms
                .iter()
                .map(|(s, c)| TermFile { coeff: self.field.encode(c), exp: s.0.clone() })
                .collect(),
        }
    }

    pub fn from_file(&self, file: &SeriesFile) -> Result<SkewSeries> {
        let terms = file
            .terms
            .iter()
            .map(|t| Ok((Exponent(t.exp.clone()), self.field.decode(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        for (s, _) in &terms {
            if s.len() == self.n() && s.is_non_negative() && !file.precision.admits(s.degree()) {
                return Err(Error::InvalidSeries(format!(
                    "term {s} has degree {} at or beyond precision {}",
                    s.degree(),
                    file.precision
                )));
            }
        }
        self.from_terms(Exponent(file.shift.clone()), terms, file.precision)
    }

    pub fn display<'a>(&'a self, f: &'a SkewSeries) -> SeriesDisplay<'a> {
        SeriesDisplay { ring: self, series: f }
    }
}

fn accumulate(field: &CoeffField, map: &mut BTreeMap<Exponent, Scalar>, s: Exponent, c: Scalar) {
    use std::collections::btree_map::Entry;
    match map.entry(s) {
        Entry::Vacant(slot) => {
            if !field.is_zero(&c) {
                slot.insert(c);
            }
        }
        Entry::Occupied(mut slot) => {
            let sum = field.add(slot.get(), &c);
            if field.is_zero(&sum) {
                slot.remove();
            } else {
                *slot.get_mut() = sum;
            }
        }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, s: &Exponent) -> fmt::Result {
    let mut first = true;
    for (i, &k) in s.0.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        match k {
            1 => write!(f, "x{}", i + 1)?,
            k => write!(f, "x{}^{k}", i + 1)?,
        }
    }
    if first {
        write!(f, "1")?;
    }
    Ok(())
}

pub struct SeriesDisplay<'a> {
    ring: &'a SeriesRing,
    series: &'a SkewSeries,
}

impl fmt::Display for SeriesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.ring.field();
        let s = self.series;
        if !s.shift.is_zero() {
            write!(f, "x^-{} * (", s.shift)?;
        }
        if s.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in s.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if field.is_one(c) {
                write_monomial(f, e)?;
            } else if e.is_zero() {
                write!(f, "{}", field.display(c))?;
            } else {
                write!(f, "{}*", field.display(c))?;
                write_monomial(f, e)?;
            }
        }
        if let Precision::Finite(n) = s.precision {
            write!(f, " + O(J^{n})")?;
        }
        if !s.shift.is_zero() {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Coordinates of a central exponent `s` in a basis of `S`, together with the
/// root-of-unity exponent `γ` in `x^s = ε^γ · z_1^{m_1}⋯z_n^{m_n}`, where
/// `z_i = x^{b_i}`.
pub fn central_coordinates(
    cd: &CommutationData,
    s: &Exponent,
    basis: &LatticeBasis,
) -> Result<(Vec<i64>, u64)> {
    if s.len() != cd.n() || basis.dim() != cd.n() {
        return Err(Error::DimensionMismatch { expected: cd.n(), found: s.len() });
    }
    let Some(m) = basis.coordinates(s.as_slice()) else {
        return Err(if cd.is_central_exponent(s)? {
            Error::BasisInconsistency(format!("central exponent {s} is not in the span of the basis"))
        } else {
            Error::NotCentral(s.0.clone())
        });
    };
    let ell = cd.ell() as i128;
    // (x^b)^m = ε^{ord(b,b)·m(m-1)/2} x^{mb} for every m ∈ Z
    let mut acc_exp = Exponent::zero(cd.n());
    let mut acc: i128 = 0;
    for (row, &mi) in basis.rows().iter().zip(&m) {
        let b = Exponent(row.clone());
        let power = cd.ordering_exponent(&b, &b)? as i128 * ((mi as i128 * (mi as i128 - 1)) / 2);
        let mb = b.scale(mi);
        acc += power + cd.ordering_exponent(&acc_exp, &mb)? as i128;
        acc_exp = acc_exp.add(&mb);
    }
    debug_assert_eq!(&acc_exp, s);
    Ok((m, (-acc).rem_euclid(ell) as u64))
}
