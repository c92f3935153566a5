//! Randomized invariant suite shared by the `verify` command and the test
//! targets.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::coeff::{CoeffField, FieldKind, FieldSpec, Scalar};
use crate::commutation::{CommutationData, Exponent};
use crate::error::{Error, Result};
use crate::lattice::{self, LatticeBasis};
use crate::oracle::{self, Budget, Word};
use crate::report::Config;
use crate::series::{central_coordinates, Precision, SeriesRing, SkewSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
}

impl CheckOutcome {
    fn from_result(name: &str, r: Result<()>) -> Self {
        let status = match r {
            Ok(()) => Status::Pass,
            Err(Error::OracleTooLarge { required, budget }) => {
                Status::Skipped(format!("enumeration needs {required} points, budget is {budget}"))
            }
            Err(e) => Status::Fail(e.to_string()),
        };
        CheckOutcome { name: name.into(), status }
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, Status::Fail(_))
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Pass => write!(f, "PASS {}", self.name),
            Status::Fail(why) => write!(f, "FAIL {}: {why}", self.name),
            Status::Skipped(why) => write!(f, "SKIP {}: {why}", self.name),
        }
    }
}

fn fail(msg: String) -> Result<()> {
    Err(Error::Consistency(msg))
}

// ---- random generators ----

/// A valid commutation matrix with `n ≤ max_n`, `ell ≤ max_ell`. Lower
/// entries are stored as either `-h_ij` or `ell - h_ij`.
#[allow(clippy::needless_range_loop)]
pub fn random_config(rng: &mut impl Rng, max_n: usize, max_ell: u64) -> Config {
    let n = rng.gen_range(1..=max_n);
    let ell = rng.gen_range(1..=max_ell);
    let mut h = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(0..ell as i64);
            h[i][j] = v;
            h[j][i] = if rng.gen_bool(0.5) { -v } else { (ell as i64 - v) % ell as i64 };
        }
    }
    Config::new(n, ell, h)
}

pub fn random_exponent(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Exponent {
    Exponent((0..n).map(|_| rng.gen_range(lo..=hi)).collect())
}

/// Small-height field element; cyclotomic coordinates are in `(1/2)Z`.
pub fn random_scalar(field: &CoeffField, rng: &mut impl Rng) -> Scalar {
    match field.spec().kind {
        FieldKind::Prime { p } => Scalar::Prime(rng.gen_range(0..p)),
        FieldKind::Cyclotomic => {
            let mut acc = field.zero();
            for k in 0..field.degree() {
                let num = rng.gen_range(-3i64..=3);
                let den = if rng.gen_bool(0.2) { 2 } else { 1 };
                let c = field
                    .from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
                    .expect("cyclotomic fields accept every rational");
                acc = field.add(&acc, &field.mul(&c, &field.root_power(k as i64)));
            }
            acc
        }
    }
}

fn random_nonzero_scalar(field: &CoeffField, rng: &mut impl Rng) -> Scalar {
    loop {
        let c = random_scalar(field, rng);
        if !field.is_zero(&c) {
            return c;
        }
    }
}

/// A truncated series with up to `max_terms` terms of degree below
/// `precision` and shift entries in `0..=max_shift`.
pub fn random_series(
    ring: &SeriesRing,
    rng: &mut impl Rng,
    max_terms: usize,
    precision: u64,
    max_shift: i64,
) -> SkewSeries {
    let n = ring.n();
    let shift = random_exponent(rng, n, 0, max_shift);
    let count = rng.gen_range(0..=max_terms);
    let terms: Vec<(Exponent, Scalar)> = (0..count)
        .map(|_| {
            let deg = rng.gen_range(0..precision) as i64;
            (random_exponent_of_degree(rng, n, deg), random_scalar(ring.field(), rng))
        })
        .collect();
    ring.from_terms(shift, terms, Precision::Finite(precision)).expect("generated series is well formed")
}

/// Like [`random_series`] but with a nonzero constant term.
pub fn random_unit(ring: &SeriesRing, rng: &mut impl Rng, max_terms: usize, precision: u64, max_shift: i64) -> SkewSeries {
    let f = random_series(ring, rng, max_terms, precision, max_shift);
    let zero = Exponent::zero(ring.n());
    let mut terms: Vec<(Exponent, Scalar)> = f.terms().iter().map(|(s, c)| (s.clone(), c.clone())).collect();
    terms.retain(|(s, _)| s != &zero);
    terms.push((zero, random_nonzero_scalar(ring.field(), rng)));
    ring.from_terms(f.shift().clone(), terms, f.precision()).expect("generated series is well formed")
}

fn random_exponent_of_degree(rng: &mut impl Rng, n: usize, deg: i64) -> Exponent {
    let mut e = vec![0i64; n];
    for _ in 0..deg {
        e[rng.gen_range(0..n)] += 1;
    }
    Exponent(e)
}

/// A matrix with entries in `[-bound, bound]`.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

// ---- individual checks ----

/// `U M V = D`, `U` and `V` unimodular, `D` diagonal with `d_1 | d_2 | …`.
pub fn check_snf(m: &[Vec<i64>]) -> Result<()> {
    let snf = lattice::smith_normal_form(m);
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let prod = lattice::mat_mul(&lattice::mat_mul(&snf.u, &lattice::to_big(m)), &snf.v);
    if prod != snf.d {
        return fail(format!("U·M·V ≠ D for {m:?}"));
    }
    for (name, t) in [("U", &snf.u), ("V", &snf.v)] {
        if !lattice::determinant(t).abs().is_one() {
            return fail(format!("{name} is not unimodular for {m:?}"));
        }
    }
    for i in 0..rows {
        for j in 0..cols {
            if i != j && !snf.d[i][j].is_zero() {
                return fail(format!("D has an off-diagonal entry at ({i},{j}) for {m:?}"));
            }
        }
    }
    let diag = snf.diagonal();
    if diag.iter().any(|d| d.is_negative()) {
        return fail(format!("D has a negative entry for {m:?}"));
    }
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        if !ok {
            return fail(format!("divisibility chain broken ({} ∤ {}) for {m:?}", w[0], w[1]));
        }
    }
    Ok(())
}

/// `d² = h`, `|det S| = h`, every basis row central, SNF contract on `H`.
pub fn check_structure(cd: &CommutationData) -> Result<()> {
    check_snf(cd.h())?;
    let basis = lattice::kernel_lattice(cd);
    let h = lattice::image_cardinality(cd);
    let d = lattice::pi_degree(cd)?;
    if d * d != h {
        return fail(format!("pi_degree² = {} ≠ h = {h}", d * d));
    }
    let det = lattice::determinant(&lattice::to_big(basis.rows()));
    if det.magnitude() != &BigUint::from(h) {
        return fail(format!("|det S| = {} ≠ h = {h}", det.magnitude()));
    }
    for row in basis.rows() {
        if !cd.is_central_exponent(&Exponent(row.clone()))? {
            return fail(format!("basis row {row:?} is not central"));
        }
    }
    Ok(())
}

/// `h` and `S` are unchanged under `(ell, H) → (c·ell, c·H)`.
pub fn check_scaling(cd: &CommutationData, factors: &[u64]) -> Result<()> {
    let h = lattice::image_cardinality(cd);
    let basis = lattice::kernel_lattice(cd);
    for &c in factors {
        let scaled = cd.scaled(c);
        let hs = lattice::image_cardinality(&scaled);
        if hs != h {
            return fail(format!("h changes under scaling by {c}: {h} → {hs}"));
        }
        let bs = lattice::kernel_lattice(&scaled);
        if bs != basis {
            return fail(format!("S changes under scaling by {c}: {:?} → {:?}", basis.rows(), bs.rows()));
        }
        if lattice::positive_diagonal_decision(&scaled).is_positive_diagonal
            != lattice::positive_diagonal_decision(cd).is_positive_diagonal
        {
            return fail(format!("verdict changes under scaling by {c}"));
        }
    }
    Ok(())
}

pub fn check_image_oracle(cd: &CommutationData, budget: Budget) -> Result<()> {
    let brute = oracle::brute_image_cardinality(cd, budget)?;
    let fast = lattice::image_cardinality(cd);
    if brute != fast {
        return fail(format!("image cardinality: oracle {brute}, lattice {fast}"));
    }
    Ok(())
}

pub fn check_diagonal_oracle(cd: &CommutationData, budget: Budget) -> Result<()> {
    let brute = oracle::brute_diagonal_check(cd, budget)?;
    let verdict = lattice::positive_diagonal_decision(cd);
    if brute != verdict.is_positive_diagonal {
        return fail(format!("positive diagonal: oracle {brute}, lattice {}", verdict.is_positive_diagonal));
    }
    let lambdas = oracle::brute_axis_multiples(cd);
    if lambdas != verdict.lambdas {
        return fail(format!("axis multiples: oracle {lambdas:?}, lattice {:?}", verdict.lambdas));
    }
    Ok(())
}

/// Pointwise agreement of oracle centrality and lattice membership on
/// `[-radius, radius]^n`. Returns the number of points compared.
pub fn check_kernel_box(cd: &CommutationData, radius: u64, budget: Budget) -> Result<u64> {
    let central = oracle::brute_central_support(cd, radius, budget)?;
    let basis = lattice::kernel_lattice(cd);
    let n = cd.n();
    let r = radius as i64;
    let mut count = 0u64;
    let mut cur = vec![-r; n];
    loop {
        count += 1;
        let in_lattice = basis.contains(&cur);
        let in_oracle = central.contains(&Exponent(cur.clone()));
        if in_lattice != in_oracle {
            return Err(Error::Consistency(format!(
                "{cur:?}: oracle says central = {in_oracle}, lattice membership = {in_lattice}"
            )));
        }
        let mut k = 0;
        while k < n && cur[k] == r {
            cur[k] = -r;
            k += 1;
        }
        if k == n {
            break;
        }
        cur[k] += 1;
    }
    Ok(count)
}

/// `x^s x^t = ε^{σ(s,t)} x^t x^s` through series multiplication.
pub fn check_commutation_law(ring: &SeriesRing, s: &Exponent, t: &Exponent) -> Result<()> {
    let f = ring.field();
    let xs = ring.monomial(s, f.one());
    let xt = ring.monomial(t, f.one());
    let lhs = ring.mul(&xs, &xt)?;
    let sigma = ring.cd().sigma_exponent(s, t)? as i64;
    let rhs = ring.scale(&f.root_power(sigma), &ring.mul(&xt, &xs)?);
    if !ring.same_element(&lhs, &rhs)? {
        return fail(format!("commutation law fails for s = {s}, t = {t}"));
    }
    Ok(())
}

/// Associativity and both distributive laws.
pub fn check_ring_axioms(ring: &SeriesRing, a: &SkewSeries, b: &SkewSeries, c: &SkewSeries) -> Result<()> {
    let ab_c = ring.mul(&ring.mul(a, b)?, c)?;
    let a_bc = ring.mul(a, &ring.mul(b, c)?)?;
    if !ring.same_element(&ab_c, &a_bc)? {
        return fail(format!("(ab)c ≠ a(bc) for a = {}, b = {}, c = {}", ring.display(a), ring.display(b), ring.display(c)));
    }
    let left = ring.mul(a, &ring.add(b, c)?)?;
    let left2 = ring.add(&ring.mul(a, b)?, &ring.mul(a, c)?)?;
    if !ring.same_element(&left, &left2)? {
        return fail(format!("a(b+c) ≠ ab+ac for a = {}, b = {}, c = {}", ring.display(a), ring.display(b), ring.display(c)));
    }
    let right = ring.mul(&ring.add(a, b)?, c)?;
    let right2 = ring.add(&ring.mul(a, c)?, &ring.mul(b, c)?)?;
    if !ring.same_element(&right, &right2)? {
        return fail(format!("(a+b)c ≠ ac+bc for a = {}, b = {}, c = {}", ring.display(a), ring.display(b), ring.display(c)));
    }
    Ok(())
}

/// `f · f^{-1} ≡ 1 ≡ f^{-1} · f mod J^target`.
pub fn check_inverse(ring: &SeriesRing, f: &SkewSeries, target: u64) -> Result<()> {
    let inv = ring.invert(f, target)?;
    let one = ring.truncate(&ring.one(), target);
    for (side, prod) in [("f·f⁻¹", ring.mul(f, &inv)?), ("f⁻¹·f", ring.mul(&inv, f)?)] {
        let prod = ring.truncate(&prod, target);
        if !ring.same_element(&prod, &one)? {
            return fail(format!("{side} ≢ 1 mod J^{target} for f = {}: got {}", ring.display(f), ring.display(&prod)));
        }
    }
    Ok(())
}

fn inverse_word(w: &Word) -> Word {
    w.iter().rev().map(|&(i, e)| (i, -e)).collect()
}

/// For `s = Σ m_i b_i`: the coordinates are `m`, and `x^s = ε^γ z^m` both by
/// series multiplication and by letterwise normal ordering.
pub fn check_central_coordinates(ring: &SeriesRing, basis: &LatticeBasis, m: &[i64]) -> Result<()> {
    let cd = ring.cd();
    let n = cd.n();
    let f = ring.field();
    let mut s = Exponent::zero(n);
    for (row, &mi) in basis.rows().iter().zip(m) {
        s = s.add(&Exponent(row.clone()).scale(mi));
    }
    let (coords, gamma) = central_coordinates(cd, &s, basis)?;
    if coords != m {
        return fail(format!("coordinates of {s}: expected {m:?}, got {coords:?}"));
    }

    let mut word: Word = Vec::new();
    let mut product = ring.one();
    for (row, &mi) in basis.rows().iter().zip(m) {
        let b = Exponent(row.clone());
        let z = ring.monomial(&b, f.one());
        let (factor, letters) = if mi >= 0 {
            (z, oracle::monomial_word(&b))
        } else {
            (ring.invert(&z, 1)?, inverse_word(&oracle::monomial_word(&b)))
        };
        for _ in 0..mi.unsigned_abs() {
            product = ring.mul(&product, &factor)?;
            word.extend_from_slice(&letters);
        }
    }
    let expected = ring.scale(&f.root_power(gamma as i64), &product);
    let xs = ring.monomial(&s, f.one());
    if !ring.same_element(&xs, &expected)? {
        return fail(format!("x^{s} ≠ ε^{gamma} z^{m:?} under series multiplication"));
    }
    let (t, e) = oracle::normal_order_word(cd, &word);
    if t != s || (gamma + e) % cd.ell() != 0 {
        return fail(format!("normal ordering gives ε^{e} x^{t}, expected ε^-{gamma} x^{s}"));
    }
    Ok(())
}

// ---- suite ----

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub budget: Budget,
    pub box_radius: Option<u64>,
    pub monomial_pairs: usize,
    pub triples: usize,
    pub inverses: usize,
    pub precision: u64,
    pub coordinate_samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            budget: Budget::default(),
            box_radius: None,
            monomial_pairs: 200,
            triples: 40,
            inverses: 20,
            precision: 6,
            coordinate_samples: 30,
        }
    }
}

/// Runs every check on one config. A config that fails validation yields an
/// error rather than outcomes.
pub fn run_suite(config: &Config, rng: &mut impl Rng, opts: &SuiteOptions) -> Result<Vec<CheckOutcome>> {
    let (cd, _) = config.commutation()?;
    let ring = SeriesRing::new(cd.clone(), config.field()?)?;
    let n = cd.n();
    let radius = opts.box_radius.unwrap_or(cd.ell());
    let mut out = vec![
        CheckOutcome::from_result("structure (d² = h = |det S|, S central, SNF contract)", check_structure(&cd)),
        CheckOutcome::from_result("scaling invariance (×2, ×3)", check_scaling(&cd, &[2, 3])),
        CheckOutcome::from_result("image cardinality vs oracle", check_image_oracle(&cd, opts.budget)),
        CheckOutcome::from_result("positive-diagonal verdict vs oracle", check_diagonal_oracle(&cd, opts.budget)),
        CheckOutcome::from_result(
            &format!("kernel membership vs oracle on box radius {radius}"),
            check_kernel_box(&cd, radius, opts.budget).map(|_| ()),
        ),
    ];

    let law = (0..opts.monomial_pairs).try_for_each(|_| {
        let s = random_exponent(rng, n, -4, 4);
        let t = random_exponent(rng, n, -4, 4);
        check_commutation_law(&ring, &s, &t)
    });
    out.push(CheckOutcome::from_result(&format!("commutation law on {} monomial pairs", opts.monomial_pairs), law));

    let axioms = (0..opts.triples).try_for_each(|_| {
        let a = random_series(&ring, rng, 4, opts.precision, 1);
        let b = random_series(&ring, rng, 4, opts.precision, 1);
        let c = random_series(&ring, rng, 4, opts.precision, 1);
        check_ring_axioms(&ring, &a, &b, &c)
    });
    out.push(CheckOutcome::from_result(
        &format!("associativity and distributivity on {} triples (precision {})", opts.triples, opts.precision),
        axioms,
    ));

    let inverses = (0..opts.inverses).try_for_each(|_| {
        let f = random_unit(&ring, rng, 4, opts.precision, 1);
        check_inverse(&ring, &f, opts.precision)
    });
    out.push(CheckOutcome::from_result(
        &format!("two-sided inverses mod J^{} on {} units", opts.precision, opts.inverses),
        inverses,
    ));

    let basis = lattice::kernel_lattice(&cd);
    let coords = (0..opts.coordinate_samples).try_for_each(|_| {
        let m: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        check_central_coordinates(&ring, &basis, &m)
    });
    out.push(CheckOutcome::from_result(
        &format!("central coordinates on {} lattice points", opts.coordinate_samples),
        coords,
    ));
    Ok(out)
}

/// Field used when a check needs a ring but only commutation data is at hand.
pub fn default_ring(cd: &CommutationData) -> Result<SeriesRing> {
    SeriesRing::new(cd.clone(), CoeffField::new(FieldSpec::cyclotomic(cd.ell()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn suite_passes_on_small_configs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let opts = SuiteOptions { monomial_pairs: 30, triples: 5, inverses: 5, coordinate_samples: 10, ..Default::default() };
        for h in [
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        ] {
            let config = Config::new(h.len(), 2, h);
            for o in run_suite(&config, &mut rng, &opts).unwrap() {
                assert_eq!(o.status, Status::Pass, "{o}");
            }
        }
    }

    #[test]
    fn budget_skips_instead_of_failing() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let opts = SuiteOptions {
            budget: Budget(3),
            monomial_pairs: 1,
            triples: 1,
            inverses: 1,
            coordinate_samples: 1,
            ..Default::default()
        };
        let out = run_suite(&Config::new(2, 2, vec![vec![0, 1], vec![1, 0]]), &mut rng, &opts).unwrap();
        assert!(out.iter().any(|o| matches!(o.status, Status::Skipped(_))));
        assert!(out.iter().all(|o| !o.failed()));
    }

    #[test]
    fn snf_check_accepts_degenerate_shapes() {
        check_snf(&[vec![0, 0], vec![0, 0]]).unwrap();
        check_snf(&[vec![4, 6, 10]]).unwrap();
        check_snf(&[vec![2], vec![3]]).unwrap();
    }

    #[test]
    fn random_configs_validate() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let c = random_config(&mut rng, 3, 8);
            c.commutation().unwrap();
        }
    }
}
