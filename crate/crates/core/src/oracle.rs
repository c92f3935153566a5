//! Brute-force verifiers.
//!
//! Everything here enumerates directly from the commutation data and never calls
//! into [`crate::lattice`]; results are compared against the lattice path in
//! tests, the acceptance suite and the `oracle` / `verify` CLI commands.

use std::collections::{BTreeSet, HashSet};

use crate::commutation::{CommutationData, Exponent};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const BUDGET_ENV: &str = "QTORUS_ORACLE_BUDGET";

/// Maximum number of points an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// Reads `QTORUS_ORACLE_BUDGET`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v.trim().parse().map(Budget).map_err(|e| Error::Config {
                location: BUDGET_ENV.into(),
                message: format!("{v:?}: {e}"),
            }),
            Err(_) => Ok(Budget::default()),
        }
    }

    fn check(self, required: u128) -> Result<()> {
        if required > self.0 as u128 {
            return Err(Error::OracleTooLarge { required, budget: self.0 });
        }
        Ok(())
    }
}

/// Calls `visit` on every point of `Π [lo_i, hi_i]`.
fn for_each_in_box(lo: &[i64], hi: &[i64], mut visit: impl FnMut(&[i64])) {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        visit(&cur);
        let mut k = 0;
        loop {
            if k == cur.len() {
                return;
            }
            if cur[k] < hi[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = lo[k];
            k += 1;
        }
    }
}

fn box_size(lo: &[i64], hi: &[i64]) -> u128 {
    lo.iter().zip(hi).map(|(l, h)| (h - l + 1).max(0) as u128).product()
}

fn is_central(cd: &CommutationData, s: &[i64]) -> bool {
    let s = Exponent(s.to_vec());
    (0..cd.n()).all(|j| cd.sigma_exponent(&s, &Exponent::unit(cd.n(), j)).unwrap() == 0)
}

/// `|H · (Z/ellZ)^n|` by enumerating every residue vector.
pub fn brute_image_cardinality(cd: &CommutationData, budget: Budget) -> Result<u64> {
    let n = cd.n();
    let ell = cd.ell() as i64;
    budget.check((ell as u128).saturating_pow(n as u32))?;
    let h = cd.h();
    let mut images: HashSet<Vec<i64>> = HashSet::new();
    for_each_in_box(&vec![0; n], &vec![ell - 1; n], |s| {
        let img: Vec<i64> =
            (0..n).map(|i| (0..n).map(|j| h[i][j] * s[j]).sum::<i64>().rem_euclid(ell)).collect();
        images.insert(img);
    });
    Ok(images.len() as u64)
}

/// All `s ∈ [-r, r]^n` whose monomial commutes with every generator.
pub fn brute_central_support(cd: &CommutationData, radius: u64, budget: Budget) -> Result<BTreeSet<Exponent>> {
    let n = cd.n();
    let r = radius as i64;
    let (lo, hi) = (vec![-r; n], vec![r; n]);
    budget.check(box_size(&lo, &hi))?;
    let mut out = BTreeSet::new();
    for_each_in_box(&lo, &hi, |s| {
        if is_central(cd, s) {
            out.insert(Exponent(s.to_vec()));
        }
    });
    Ok(out)
}

/// Least `m` in `1..=ell` with `m e_i` central, for each `i`.
pub fn brute_axis_multiples(cd: &CommutationData) -> Vec<u64> {
    let n = cd.n();
    (0..n)
        .map(|i| {
            (1..=cd.ell())
                .find(|&m| {
                    let mut s = vec![0; n];
                    s[i] = m as i64;
                    is_central(cd, &s)
                })
                .expect("ell e_i is always central")
        })
        .collect()
}

/// Whether the only central point of `Π [0, λ_i)` is the origin, i.e. whether
/// the central sublattice is exactly `diag(λ) Z^n`.
pub fn brute_diagonal_check(cd: &CommutationData, budget: Budget) -> Result<bool> {
    let lambdas = brute_axis_multiples(cd);
    let lo = vec![0; cd.n()];
    let hi: Vec<i64> = lambdas.iter().map(|&l| l as i64 - 1).collect();
    budget.check(box_size(&lo, &hi))?;
    let mut only_origin = true;
    for_each_in_box(&lo, &hi, |s| {
        if only_origin && s.iter().any(|&x| x != 0) && is_central(cd, s) {
            only_origin = false;
        }
    });
    Ok(only_origin)
}

/// A word in the generators and their inverses: `(index, ±1)` per letter.
pub type Word = Vec<(usize, i64)>;

/// The letters of the normal-ordered monomial `x^s`.
pub fn monomial_word(s: &Exponent) -> Word {
    s.0.iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n((i, k.signum()), k.unsigned_abs() as usize))
        .collect()
}

/// Normal-orders a word by adjacent swaps, one letter at a time.
///
/// Returns the exponent vector and the exponent `e` with
/// `word = ε^e · x_1^{a_1}⋯x_n^{a_n}`.
pub fn normal_order_word(cd: &CommutationData, word: &[(usize, i64)]) -> (Exponent, u64) {
    let h = cd.h();
    let mut w = word.to_vec();
    let mut scalar: i128 = 0;
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 1..w.len() {
            let (a, alpha) = w[k - 1];
            let (b, beta) = w[k];
            if a > b {
                // x_a^α x_b^β = q_ab^{αβ} x_b^β x_a^α
                scalar += h[a][b] as i128 * (alpha * beta) as i128;
                w.swap(k - 1, k);
                swapped = true;
            }
        }
    }
    let mut e = vec![0; cd.n()];
    for (i, sign) in w {
        e[i] += sign;
    }
    (Exponent(e), scalar.rem_euclid(cd.ell() as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(n: usize, ell: u64, h: &[Vec<i64>]) -> CommutationData {
        CommutationData::validate(n, ell, h).unwrap().0
    }

    fn anticommuting_triple() -> CommutationData {
        cd(3, 2, &[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]])
    }

    fn quantum_plane(ell: u64) -> CommutationData {
        cd(2, ell, &[vec![0, 1], vec![-1, 0]])
    }

    #[test]
    fn image_counts() {
        let b = Budget::default();
        assert_eq!(brute_image_cardinality(&CommutationData::trivial(2, 3), b).unwrap(), 1);
        assert_eq!(brute_image_cardinality(&anticommuting_triple(), b).unwrap(), 4);
        assert_eq!(brute_image_cardinality(&quantum_plane(2), b).unwrap(), 4);
        assert_eq!(brute_image_cardinality(&quantum_plane(5), b).unwrap(), 25);
    }

    #[test]
    fn central_support_counts() {
        let b = Budget::default();
        let all = brute_central_support(&CommutationData::trivial(2, 4), 2, b).unwrap();
        assert_eq!(all.len(), 25);
        // evens in [-2,2]: 3 per axis, odds: 2 per axis, so 3^3 + 2^3
        let pts = brute_central_support(&anticommuting_triple(), 2, b).unwrap();
        assert_eq!(pts.len(), 35);
        assert!(pts.iter().all(|s| s.0.iter().all(|x| (x - s.0[0]) % 2 == 0)));
        assert!(pts.contains(&Exponent(vec![1, 1, -1])));
        let pts = brute_central_support(&quantum_plane(3), 3, b).unwrap();
        assert_eq!(pts.len(), 9);
        assert!(pts.iter().all(|s| s.0.iter().all(|x| x % 3 == 0)));
    }

    #[test]
    fn diagonal_checks() {
        let b = Budget::default();
        assert!(brute_diagonal_check(&CommutationData::trivial(3, 2), b).unwrap());
        assert!(!brute_diagonal_check(&anticommuting_triple(), b).unwrap());
        for ell in 2..=6 {
            assert!(brute_diagonal_check(&quantum_plane(ell), b).unwrap());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let small = Budget(10);
        assert_eq!(brute_image_cardinality(&anticommuting_triple(), small).unwrap(), 4);
        assert!(matches!(
            brute_image_cardinality(&anticommuting_triple(), Budget(4)),
            Err(Error::OracleTooLarge { required: 8, budget: 4 })
        ));
        assert!(matches!(
            brute_central_support(&anticommuting_triple(), 2, small),
            Err(Error::OracleTooLarge { required: 125, budget: 10 })
        ));
    }

    #[test]
    fn letterwise_ordering() {
        let c = anticommuting_triple();
        let w = [monomial_word(&Exponent(vec![1, 1, 1])), monomial_word(&Exponent(vec![1, 1, 1]))].concat();
        assert_eq!(normal_order_word(&c, &w), (Exponent(vec![2, 2, 2]), 1));
        let q = quantum_plane(2);
        assert_eq!(normal_order_word(&q, &[(1, 1), (0, 1)]), (Exponent(vec![1, 1]), 1));
        assert_eq!(normal_order_word(&q, &[(0, 1), (1, 1)]), (Exponent(vec![1, 1]), 0));
    }
}
