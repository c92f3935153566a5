//! Commutation data `(n, ell, H)` with `q_ij = ε^{h_ij}`, and the exponent-level
//! bicharacter and normal-ordering scalars derived from it.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent vector `s ∈ Z^n` indexing the monomial `x^s = x_1^{s_1}⋯x_n^{s_n}`.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(pub Vec<i64>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Exponent(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_non_negative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Exponent {
        Exponent(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Exponent {
        Exponent(self.0.iter().map(|a| k * a).collect())
    }

    pub fn componentwise_max(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn componentwise_min(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Exponent {
    fn from(v: Vec<i64>) -> Self {
        Exponent(v)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Validated commutation data. Entries of `h` are stored reduced into `[0, ell)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationData {
    n: usize,
    ell: u64,
    h: Vec<Vec<i64>>,
}

impl CommutationData {
    /// Validate and reduce a presentation. Returns the data together with any
    /// non-fatal warnings.
    pub fn validate(n: usize, ell: u64, h: &[Vec<i64>]) -> Result<(Self, Vec<String>)> {
        if n == 0 {
            return Err(Error::InvalidCommutation("n must be positive".into()));
        }
        if ell == 0 {
            return Err(Error::InvalidCommutation("ell must be positive".into()));
        }
        if h.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: h.len() });
        }
        if let Some(row) = h.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        let m = ell as i64;
        let reduced: Vec<Vec<i64>> =
            h.iter().map(|row| row.iter().map(|x| x.rem_euclid(m)).collect()).collect();
        for i in 0..n {
            if reduced[i][i] != 0 {
                return Err(Error::InvalidCommutation(format!(
                    "q_{i}{i} ≠ 1 (h[{i}][{i}] = {} is not 0 mod {ell})",
                    h[i][i],
                    i = i + 1
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (reduced[i][j] + reduced[j][i]) % m != 0 {
                    return Err(Error::InvalidCommutation(format!(
                        "q_{a}{b} ≠ q_{b}{a}^-1 (h[{a}][{b}] + h[{b}][{a}] = {} is not 0 mod {ell})",
                        h[i][j] + h[j][i],
                        a = i + 1,
                        b = j + 1
                    )));
                }
            }
        }
        let mut warnings = Vec::new();
        let g = reduced.iter().flatten().fold(m, |acc, &x| acc.gcd(&x));
        if g > 1 {
            warnings.push(format!(
                "non-minimal presentation: gcd(ell, h_ij) = {g}; the q_ij generate a group of order {}",
                m / g
            ));
        }
        Ok((CommutationData { n, ell, h: reduced }, warnings))
    }

    /// The commutative case `H = 0`.
    pub fn trivial(n: usize, ell: u64) -> Self {
        CommutationData { n, ell, h: vec![vec![0; n]; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn h(&self) -> &[Vec<i64>] {
        &self.h
    }

    /// `(n, c·ell, c·H)`: the same relations presented with a non-primitive root.
    pub fn scaled(&self, c: u64) -> Self {
        assert!(c >= 1);
        let ci = c as i64;
        CommutationData {
            n: self.n,
            ell: self.ell * c,
            h: self.h.iter().map(|row| row.iter().map(|x| x * ci).collect()).collect(),
        }
    }

    fn check_len(&self, s: &Exponent) -> Result<()> {
        if s.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: s.len() });
        }
        Ok(())
    }

    fn reduce(&self, acc: i128) -> u64 {
        acc.rem_euclid(self.ell as i128) as u64
    }

    /// `Σ_{i,j} h_ij s_i t_j mod ell`, so that `σ(s,t) = ε^{result}` and
    /// `x^s x^t = σ(s,t) x^t x^s`.
    pub fn sigma_exponent(&self, s: &Exponent, t: &Exponent) -> Result<u64> {
        self.check_len(s)?;
        self.check_len(t)?;
        let mut acc: i128 = 0;
        for i in 0..self.n {
            if s.0[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                acc += self.h[i][j] as i128 * s.0[i] as i128 * t.0[j] as i128;
            }
        }
        Ok(self.reduce(acc))
    }

    /// `Σ_{i>j} h_ij s_i t_j mod ell`: the normal-ordered product is
    /// `x^s · x^t = ε^{result} · x^{s+t}`.
    pub fn ordering_exponent(&self, s: &Exponent, t: &Exponent) -> Result<u64> {
        self.check_len(s)?;
        self.check_len(t)?;
        let mut acc: i128 = 0;
        for i in 0..self.n {
            if s.0[i] == 0 {
                continue;
            }
            for j in 0..i {
                acc += self.h[i][j] as i128 * s.0[i] as i128 * t.0[j] as i128;
            }
        }
        Ok(self.reduce(acc))
    }

    /// Whether `x^s` is central, i.e. `σ(s, e_j) = 1` for every generator.
    pub fn is_central_exponent(&self, s: &Exponent) -> Result<bool> {
        self.check_len(s)?;
        let m = self.ell as i128;
        Ok((0..self.n).all(|j| {
            let acc: i128 = (0..self.n).map(|i| self.h[i][j] as i128 * s.0[i] as i128).sum();
            acc.rem_euclid(m) == 0
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn anticommuting_triple() -> CommutationData {
        let h = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        CommutationData::validate(3, 2, &h).unwrap().0
    }

    fn quantum_plane(ell: u64) -> CommutationData {
        let h = vec![vec![0, 1], vec![ell as i64 - 1, 0]];
        CommutationData::validate(2, ell, &h).unwrap().0
    }

    fn e(v: &[i64]) -> Exponent {
        Exponent(v.to_vec())
    }

    #[test]
    fn accepts_minus_one() {
        let (cd, warnings) = CommutationData::validate(2, 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(cd.h(), &[vec![0, 1], vec![1, 0]]);
        assert!(warnings.is_empty());
    }

    #[test]
    fn rejects_nonzero_diagonal() {
        let err = CommutationData::validate(2, 2, &[vec![1, 1], vec![1, 0]]).unwrap_err();
        assert!(err.to_string().contains("q_11 ≠ 1"), "{err}");
    }

    #[test]
    fn rejects_non_antisymmetric() {
        let err = CommutationData::validate(2, 4, &[vec![0, 1], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, Error::InvalidCommutation(_)));
        assert!(err.to_string().contains("q_12"), "{err}");
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            CommutationData::validate(2, 2, &[vec![0, 1]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            CommutationData::validate(2, 2, &[vec![0, 1], vec![1]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(CommutationData::validate(0, 2, &[]).is_err());
        assert!(CommutationData::validate(1, 0, &[vec![0]]).is_err());
    }

    #[test]
    fn entries_are_reduced() {
        let (cd, _) = CommutationData::validate(2, 3, &[vec![0, -1], vec![4, 3]]).unwrap();
        assert_eq!(cd.h(), &[vec![0, 2], vec![1, 0]]);
    }

    #[test]
    fn warns_on_non_minimal_presentation() {
        let (_, w) = CommutationData::validate(2, 4, &[vec![0, 2], vec![2, 0]]).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("gcd(ell, h_ij) = 2"));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(quantum_plane(5).sigma_exponent(&e(&[1, 0]), &e(&[0, 1])).unwrap(), 1);
        assert_eq!(anticommuting_triple().sigma_exponent(&e(&[1, 1, 1]), &e(&[1, 0, 0])).unwrap(), 0);
        assert_eq!(anticommuting_triple().sigma_exponent(&e(&[3, -2, 5]), &e(&[3, -2, 5])).unwrap(), 0);
        assert!(matches!(
            anticommuting_triple().sigma_exponent(&e(&[1, 0]), &e(&[1, 0, 0])),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn ordering_examples() {
        let cd = quantum_plane(2);
        assert_eq!(cd.ordering_exponent(&e(&[0, 1]), &e(&[1, 0])).unwrap(), 1);
        assert_eq!(cd.ordering_exponent(&e(&[1, 0]), &e(&[0, 1])).unwrap(), 0);
        assert_eq!(anticommuting_triple().ordering_exponent(&e(&[4, 1, -3]), &e(&[0, 0, 0])).unwrap(), 0);
        assert_eq!(anticommuting_triple().ordering_exponent(&e(&[1, 1, 1]), &e(&[1, 1, 1])).unwrap(), 1);
    }

    #[test]
    fn central_exponents() {
        let cd = anticommuting_triple();
        assert!(cd.is_central_exponent(&e(&[1, 1, 3])).unwrap());
        assert!(cd.is_central_exponent(&e(&[2, 0, -2])).unwrap());
        assert!(!cd.is_central_exponent(&e(&[1, 0, 0])).unwrap());
    }

    #[test]
    fn exponent_order_is_graded_lex() {
        let mut v = vec![e(&[0, 2]), e(&[1, 0]), e(&[0, 0]), e(&[1, 1]), e(&[0, 1]), e(&[2, 0])];
        v.sort();
        assert_eq!(v, vec![e(&[0, 0]), e(&[0, 1]), e(&[1, 0]), e(&[0, 2]), e(&[1, 1]), e(&[2, 0])]);
    }

    fn random_cd() -> impl Strategy<Value = CommutationData> {
        (1usize..=4, 1u64..=12).prop_flat_map(|(n, ell)| {
            prop::collection::vec(0..ell as i64, n * n).prop_map(move |raw| {
                let mut h = vec![vec![0i64; n]; n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        h[i][j] = raw[i * n + j];
                        h[j][i] = -raw[i * n + j];
                    }
                }
                CommutationData::validate(n, ell, &h).unwrap().0
            })
        })
    }

    fn cd_with_vectors(k: usize) -> impl Strategy<Value = (CommutationData, Vec<Exponent>)> {
        random_cd().prop_flat_map(move |cd| {
            let n = cd.n();
            let vs = prop::collection::vec(prop::collection::vec(-20i64..20, n).prop_map(Exponent), k);
            (Just(cd), vs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn sigma_is_bilinear((cd, v) in cd_with_vectors(3)) {
            let (s, s2, t) = (&v[0], &v[1], &v[2]);
            let ell = cd.ell();
            let lhs = cd.sigma_exponent(&s.add(s2), t).unwrap();
            let rhs = (cd.sigma_exponent(s, t).unwrap() + cd.sigma_exponent(s2, t).unwrap()) % ell;
            prop_assert_eq!(lhs, rhs);
            let lhs = cd.sigma_exponent(t, &s.add(s2)).unwrap();
            let rhs = (cd.sigma_exponent(t, s).unwrap() + cd.sigma_exponent(t, s2).unwrap()) % ell;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn sigma_is_alternating((cd, v) in cd_with_vectors(1)) {
            prop_assert_eq!(cd.sigma_exponent(&v[0], &v[0]).unwrap(), 0);
        }

        #[test]
        fn sigma_is_ordering_commutator((cd, v) in cd_with_vectors(2)) {
            let (s, t) = (&v[0], &v[1]);
            let ell = cd.ell();
            let diff = (cd.ordering_exponent(s, t).unwrap() + ell - cd.ordering_exponent(t, s).unwrap()) % ell;
            prop_assert_eq!(cd.sigma_exponent(s, t).unwrap(), diff);
        }

        #[test]
        fn scaling_multiplies_sigma((cd, v) in cd_with_vectors(2), c in 1u64..=4) {
            let scaled = cd.scaled(c);
            prop_assert_eq!(
                scaled.sigma_exponent(&v[0], &v[1]).unwrap(),
                c * cd.sigma_exponent(&v[0], &v[1]).unwrap()
            );
        }
    }
}
