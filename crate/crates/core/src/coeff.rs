//! Exact coefficient fields containing a primitive `ell`-th root of unity `ε`.
//!
//! Two backends share one interface:
//!
//! - the cyclotomic field `Q(ζ_ell)`, elements stored as rational coordinates
//!   in the power basis `1, ζ, …, ζ^{φ(ell)-1}` modulo `Φ_ell`;
//! - a prime field `F_p` with `ell | p - 1`, where `ε = g^{(p-1)/ell}` for the
//!   smallest primitive root `g`.
//!
//! A [`CoeffField`] is the context object; [`Scalar`] values are plain data and
//! only meaningful together with the field that produced them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which backend realizes the coefficient field. This is the `coeff_field`
/// object of the config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldKind {
    #[default]
    Cyclotomic,
    Prime { p: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub ell: u64,
}

impl FieldSpec {
    pub fn cyclotomic(ell: u64) -> Self {
        FieldSpec { kind: FieldKind::Cyclotomic, ell }
    }

    pub fn prime(p: u64, ell: u64) -> Self {
        FieldSpec { kind: FieldKind::Prime { p }, ell }
    }
}

/// An element of the coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Coordinates in the power basis of `Q(ζ_ell)`, always of length `φ(ell)`.
    Cyclotomic(Vec<BigRational>),
    /// Residue in `[0, p)`.
    Prime(u64),
}

/// Wire encoding of a scalar: an array of rational strings (cyclotomic) or a
/// decimal residue string (prime).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Cyclotomic(Vec<String>),
    Prime(String),
}

/// Coefficients of `Φ_ell`, lowest degree first.
///
/// Computed by exact division of `x^ell - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(ell: u64) -> Vec<BigInt> {
    assert!(ell >= 1, "cyclotomic polynomial of order 0");
    let ell_us = ell as usize;
    let mut num = vec![BigInt::zero(); ell_us + 1];
    num[0] = BigInt::from(-1);
    num[ell_us] = BigInt::one();
    for d in 1..ell {
        if ell.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

#[derive(Debug, Clone)]
enum Backend {
    Cyclotomic {
        /// `Φ_ell` with rational coefficients, lowest degree first (monic).
        modulus: Vec<BigRational>,
    },
    Prime {
        p: u64,
        generator: u64,
    },
}

/// Exact field arithmetic context.
#[derive(Debug, Clone)]
pub struct CoeffField {
    spec: FieldSpec,
    backend: Backend,
    /// `ε^e` for `e` in `[0, ell)`.
    powers: Vec<Scalar>,
}

impl CoeffField {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        if spec.ell == 0 {
            return Err(Error::FieldConfig("ell must be positive".into()));
        }
        let backend = match spec.kind {
            FieldKind::Cyclotomic => Backend::Cyclotomic {
                modulus: cyclotomic_polynomial(spec.ell)
                    .into_iter()
                    .map(BigRational::from_integer)
                    .collect(),
            },
            FieldKind::Prime { p } => {
                if !is_prime(p) {
                    return Err(Error::FieldConfig(format!("p = {p} is not prime")));
                }
                if (p - 1) % spec.ell != 0 {
                    return Err(Error::FieldConfig(format!(
                        "ell = {} does not divide p - 1 = {}; F_{p} has no primitive ell-th root of unity",
                        spec.ell,
                        p - 1
                    )));
                }
                let g = smallest_primitive_root(p);
                Backend::Prime { p, generator: pow_mod(g, (p - 1) / spec.ell, p) }
            }
        };
        let mut field = CoeffField { spec, backend, powers: Vec::new() };
        field.powers = (0..spec.ell).map(|e| field.compute_root_power(e)).collect();
        Ok(field)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn ell(&self) -> u64 {
        self.spec.ell
    }

    /// `φ(ell)` for the cyclotomic backend, 1 for prime fields.
    pub fn degree(&self) -> usize {
        match &self.backend {
            Backend::Cyclotomic { modulus } => modulus.len() - 1,
            Backend::Prime { .. } => 1,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.backend {
            Backend::Cyclotomic { .. } => 0,
            Backend::Prime { p, .. } => p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match &self.backend {
            Backend::Cyclotomic { .. } => Scalar::Cyclotomic(vec![BigRational::zero(); self.degree()]),
            Backend::Prime { .. } => Scalar::Prime(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match &self.backend {
            Backend::Cyclotomic { .. } => {
                let mut c = vec![BigRational::zero(); self.degree()];
                c[0] = BigRational::from_integer(BigInt::from(v));
                Scalar::Cyclotomic(c)
            }
            Backend::Prime { p, .. } => Scalar::Prime(v.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn from_rational(&self, v: BigRational) -> Result<Scalar> {
        match &self.backend {
            Backend::Cyclotomic { .. } => {
                let mut c = vec![BigRational::zero(); self.degree()];
                c[0] = v;
                Ok(Scalar::Cyclotomic(c))
            }
            Backend::Prime { p, .. } => {
                let num = bigint_mod(v.numer(), *p);
                let den = bigint_mod(v.denom(), *p);
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Prime(mul_mod(num, pow_mod(den, p - 2, *p), *p)))
            }
        }
    }

    /// `ε^e`; depends only on `e mod ell`.
    pub fn root_power(&self, e: i64) -> Scalar {
        let r = e.rem_euclid(self.spec.ell as i64) as usize;
        self.powers[r].clone()
    }

    fn compute_root_power(&self, e: u64) -> Scalar {
        match &self.backend {
            Backend::Cyclotomic { modulus } => {
                let mut c = vec![BigRational::zero(); e as usize + 1];
                c[e as usize] = BigRational::one();
                Scalar::Cyclotomic(reduce(c, modulus))
            }
            Backend::Prime { p, generator } => Scalar::Prime(pow_mod(*generator, e, *p)),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Cyclotomic(c) => c.iter().all(Zero::is_zero),
            Scalar::Prime(r) => *r == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, &self.backend) {
            (Scalar::Cyclotomic(x), Scalar::Cyclotomic(y), Backend::Cyclotomic { .. }) => {
                Scalar::Cyclotomic(x.iter().zip(y).map(|(u, v)| u + v).collect())
            }
            (Scalar::Prime(x), Scalar::Prime(y), Backend::Prime { p, .. }) => {
                Scalar::Prime(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (a, &self.backend) {
            (Scalar::Cyclotomic(x), Backend::Cyclotomic { .. }) => {
                Scalar::Cyclotomic(x.iter().map(|u| -u).collect())
            }
            (Scalar::Prime(x), Backend::Prime { p, .. }) => Scalar::Prime((p - x) % p),
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, &self.backend) {
            (Scalar::Cyclotomic(x), Scalar::Cyclotomic(y), Backend::Cyclotomic { modulus }) => {
                let mut prod = vec![BigRational::zero(); x.len() + y.len() - 1];
                for (i, u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        if !v.is_zero() {
                            prod[i + j] += u * v;
                        }
                    }
                }
                Scalar::Cyclotomic(reduce(prod, modulus))
            }
            (Scalar::Prime(x), Scalar::Prime(y), Backend::Prime { p, .. }) => {
                Scalar::Prime(mul_mod(*x, *y, *p))
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (a, &self.backend) {
            (Scalar::Cyclotomic(x), Backend::Cyclotomic { modulus }) => {
                Scalar::Cyclotomic(poly_inverse_mod(x, modulus))
            }
            (Scalar::Prime(x), Backend::Prime { p, .. }) => Scalar::Prime(pow_mod(*x, p - 2, *p)),
            _ => panic!("scalar does not belong to this field"),
        })
    }

    pub fn encode(&self, a: &Scalar) -> ScalarRepr {
        match a {
            Scalar::Cyclotomic(c) => ScalarRepr::Cyclotomic(c.iter().map(|q| q.to_string()).collect()),
            Scalar::Prime(r) => ScalarRepr::Prime(r.to_string()),
        }
    }

    pub fn decode(&self, repr: &ScalarRepr) -> Result<Scalar> {
        match (repr, &self.backend) {
            (ScalarRepr::Cyclotomic(parts), Backend::Cyclotomic { .. }) => {
                if parts.len() != self.degree() {
                    return Err(Error::FieldConfig(format!(
                        "cyclotomic scalar needs {} power-basis coordinates, got {}",
                        self.degree(),
                        parts.len()
                    )));
                }
                let coords = parts
                    .iter()
                    .map(|s| {
                        s.trim()
                            .parse::<BigRational>()
                            .map_err(|e| Error::FieldConfig(format!("bad rational {s:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Scalar::Cyclotomic(coords))
            }
            (ScalarRepr::Prime(s), Backend::Prime { p, .. }) => {
                let r: u64 = s
                    .trim()
                    .parse()
                    .map_err(|e| Error::FieldConfig(format!("bad residue {s:?}: {e}")))?;
                if r >= *p {
                    return Err(Error::FieldConfig(format!("residue {r} not reduced mod {p}")));
                }
                Ok(Scalar::Prime(r))
            }
            (ScalarRepr::Cyclotomic(_), Backend::Prime { .. }) => {
                Err(Error::FieldConfig("expected a residue string for a prime field".into()))
            }
            (ScalarRepr::Prime(_), Backend::Cyclotomic { .. }) => {
                Err(Error::FieldConfig("expected an array of rationals for a cyclotomic field".into()))
            }
        }
    }

    pub fn display<'a>(&'a self, a: &'a Scalar) -> ScalarDisplay<'a> {
        ScalarDisplay { scalar: a }
    }
}

pub struct ScalarDisplay<'a> {
    scalar: &'a Scalar,
}

impl fmt::Display for ScalarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.scalar {
            Scalar::Prime(r) => write!(f, "{r}"),
            Scalar::Cyclotomic(c) => {
                let nonzero: Vec<(usize, &BigRational)> =
                    c.iter().enumerate().filter(|(_, q)| !q.is_zero()).collect();
                if nonzero.is_empty() {
                    return write!(f, "0");
                }
                if nonzero.len() > 1 {
                    write!(f, "(")?;
                }
                for (k, (i, q)) in nonzero.iter().enumerate() {
                    let neg = q.is_negative();
                    if k > 0 {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    } else if neg {
                        write!(f, "-")?;
                    }
                    let a = q.abs();
                    match (*i, a.is_one()) {
                        (0, _) => write!(f, "{a}")?,
                        (_, true) => {}
                        (_, false) => write!(f, "{a}*")?,
                    }
                    match *i {
                        0 => {}
                        1 => write!(f, "ζ")?,
                        i => write!(f, "ζ^{i}")?,
                    }
                }
                if nonzero.len() > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Reduce a rational polynomial modulo a monic modulus, returning exactly
/// `deg(modulus)` coordinates.
fn reduce(mut c: Vec<BigRational>, modulus: &[BigRational]) -> Vec<BigRational> {
    let d = modulus.len() - 1;
    for i in (d..c.len()).rev() {
        let top = std::mem::take(&mut c[i]);
        if top.is_zero() {
            continue;
        }
        for (j, mj) in modulus.iter().enumerate().take(d) {
            c[i - d + j] -= &top * mj;
        }
    }
    c.resize(d, BigRational::zero());
    c
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - 1 - db;
        let c = rem.last().unwrap() / lead;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, u) in a.iter().enumerate() {
        for (j, v) in b.iter().enumerate() {
            out[i + j] += u * v;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, u) in a.iter().enumerate() {
        out[i] += u;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] -= v;
    }
    trim(&mut out);
    out
}

/// Inverse of a nonzero `a` modulo the irreducible `modulus`, by the extended
/// Euclidean algorithm over `Q[x]`.
fn poly_inverse_mod(a: &[BigRational], modulus: &[BigRational]) -> Vec<BigRational> {
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0: Vec<BigRational> = Vec::new();
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while r1.len() > 1 {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r1 is a nonzero constant because the modulus is irreducible
    let c = r1[0].clone();
    let scaled: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
    reduce(scaled, modulus)
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let m = v.mod_floor(&BigInt::from(p));
    m.try_into().expect("residue fits in u64")
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Smallest positive primitive root of the prime `p`, by trial.
pub fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_degree_is_totient() {
        let totient = |n: u64| (1..=n).filter(|k| k.gcd(&n) == 1).count();
        for ell in 1..=30u64 {
            assert_eq!(cyclotomic_polynomial(ell).len() - 1, totient(ell), "ell = {ell}");
        }
    }

    #[test]
    fn order_two_root_is_minus_one() {
        let f = CoeffField::new(FieldSpec::cyclotomic(2)).unwrap();
        assert_eq!(f.root_power(1), f.from_i64(-1));
        assert_eq!(f.root_power(0), f.one());
    }

    #[test]
    fn prime_root_power_matches_search() {
        // oracle: smallest primitive root of 13 by exhaustive order computation
        let order = |g: u64| (1..13u64).find(|&k| pow_mod(g, k, 13) == 1).unwrap();
        let g = (2..13u64).find(|&g| order(g) == 12).unwrap();
        let eps = pow_mod(g, 3, 13);
        assert_eq!(order(eps), 4);
        let f = CoeffField::new(FieldSpec::prime(13, 4)).unwrap();
        assert_eq!(f.root_power(1), Scalar::Prime(eps));
        assert_eq!(f.root_power(2), Scalar::Prime(12));
        assert_eq!(f.root_power(0), f.one());
    }

    #[test]
    fn zeta_times_inverse_power_is_one() {
        for ell in 1..=12u64 {
            let f = CoeffField::new(FieldSpec::cyclotomic(ell)).unwrap();
            let z = f.root_power(1);
            assert_eq!(f.mul(&z, &f.root_power(ell as i64 - 1)), f.one());
        }
    }

    #[test]
    fn zeta_squared_is_minus_one_for_ell_four() {
        let f = CoeffField::new(FieldSpec::cyclotomic(4)).unwrap();
        let z = f.root_power(1);
        assert_eq!(f.mul(&z, &z), f.from_i64(-1));
        assert_eq!(f.inv(&f.one()).unwrap(), f.one());
    }

    #[test]
    fn zeta_has_exact_order() {
        for ell in 1..=15u64 {
            let f = CoeffField::new(FieldSpec::cyclotomic(ell)).unwrap();
            let z = f.root_power(1);
            let mut acc = f.one();
            for m in 1..=ell {
                acc = f.mul(&acc, &z);
                assert_eq!(f.is_one(&acc), m == ell, "ell = {ell}, m = {m}");
            }
        }
    }

    #[test]
    fn invalid_prime_specs_are_rejected() {
        assert!(matches!(CoeffField::new(FieldSpec::prime(13, 5)), Err(Error::FieldConfig(_))));
        assert!(matches!(CoeffField::new(FieldSpec::prime(15, 2)), Err(Error::FieldConfig(_))));
        assert!(CoeffField::new(FieldSpec::cyclotomic(0)).is_err());
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = CoeffField::new(FieldSpec::cyclotomic(5)).unwrap();
        assert_eq!(f.inv(&f.zero()), Err(Error::DivisionByZero));
        let g = CoeffField::new(FieldSpec::prime(11, 5)).unwrap();
        assert_eq!(g.inv(&g.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn smallest_primitive_roots() {
        assert_eq!(smallest_primitive_root(7), 3);
        assert_eq!(smallest_primitive_root(13), 2);
        assert_eq!(smallest_primitive_root(41), 6);
    }

    #[test]
    fn encoding_round_trip() {
        let f = CoeffField::new(FieldSpec::cyclotomic(5)).unwrap();
        let a = f.add(&f.root_power(4), &f.from_rational(BigRational::new(3.into(), (-2).into())).unwrap());
        let repr = f.encode(&a);
        assert_eq!(
            serde_json::to_string(&repr).unwrap(),
            r#"["-5/2","-1","-1","-1"]"#
        );
        assert_eq!(f.decode(&repr).unwrap(), a);
        let g = CoeffField::new(FieldSpec::prime(13, 4)).unwrap();
        assert_eq!(serde_json::to_string(&g.encode(&g.root_power(1))).unwrap(), r#""8""#);
        assert!(g.decode(&ScalarRepr::Prime("13".into())).is_err());
        assert!(f.decode(&ScalarRepr::Cyclotomic(vec!["1".into()])).is_err());
    }

    #[test]
    fn display_forms() {
        let f = CoeffField::new(FieldSpec::cyclotomic(6)).unwrap();
        assert_eq!(f.display(&f.root_power(1)).to_string(), "ζ");
        assert_eq!(f.display(&f.root_power(2)).to_string(), "(-1 + ζ)");
        assert_eq!(f.display(&f.from_i64(-3)).to_string(), "-3");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn random_cyclotomic(ell: u64) -> impl Strategy<Value = (CoeffField, Scalar)> {
            let f = CoeffField::new(FieldSpec::cyclotomic(ell)).unwrap();
            let d = f.degree();
            prop::collection::vec((-20i64..20, 1i64..6), d).prop_map(move |coords| {
                let s = Scalar::Cyclotomic(
                    coords.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect(),
                );
                (f.clone(), s)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn cyclotomic_inverse_is_exact((f, a) in (1u64..=16).prop_flat_map(random_cyclotomic)) {
                prop_assume!(!f.is_zero(&a));
                let b = f.inv(&a).unwrap();
                prop_assert_eq!(f.mul(&a, &b), f.one());
            }

            #[test]
            fn prime_inverse_is_exact(a in 1u64..97) {
                let f = CoeffField::new(FieldSpec::prime(97, 8)).unwrap();
                let b = f.inv(&Scalar::Prime(a)).unwrap();
                prop_assert_eq!(f.mul(&Scalar::Prime(a), &b), f.one());
            }

            #[test]
            fn root_powers_are_additive(e in -50i64..50, g in -50i64..50, ell in 1u64..=12) {
                let f = CoeffField::new(FieldSpec::cyclotomic(ell)).unwrap();
                prop_assert_eq!(f.mul(&f.root_power(e), &f.root_power(g)), f.root_power(e + g));
                prop_assert_eq!(f.root_power(e), f.root_power(e.rem_euclid(ell as i64)));
            }

            /// Equality checks on sums of root powers agree between backends.
            #[test]
            fn backends_agree_on_root_power_identities(
                lhs in prop::collection::vec(0i64..12, 1..5),
                rhs in prop::collection::vec(0i64..12, 1..5),
            ) {
                // ell = 4 inside Q(ζ_4) and a prime field large enough that
                // short sums cannot collide modulo p
                let cyc = CoeffField::new(FieldSpec::cyclotomic(4)).unwrap();
                let fp = CoeffField::new(FieldSpec::prime(1_000_000_009, 4)).unwrap();
                let eval = |f: &CoeffField, es: &[i64]| {
                    es.iter().fold(f.zero(), |acc, &e| f.add(&acc, &f.root_power(e)))
                };
                let c = eval(&cyc, &lhs) == eval(&cyc, &rhs);
                let p = eval(&fp, &lhs) == eval(&fp, &rhs);
                prop_assert_eq!(c, p);
            }
        }
    }
}
