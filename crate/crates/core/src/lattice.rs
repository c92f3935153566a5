//! Integer linear algebra over `Z` and `Z/ellZ`: Smith and Hermite normal forms,
//! the central sublattice `S = {s : H s ≡ 0 mod ell}`, the image cardinality
//! `h = [Z^n : S]`, the PI degree `√h`, and the positive-diagonal decision.
//!
//! Inputs and the final lattice basis are small `i64` matrices. Elimination runs
//! over `BigInt` because the unimodular transforms of a Smith reduction grow
//! quickly even for 5×5 inputs with single-digit entries.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::commutation::{CommutationData, Exponent};
use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;
pub type BigMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn big_identity(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn to_big(m: &[Vec<i64>]) -> BigMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> BigMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "incompatible shapes");
            (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect()
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, non-negative,
/// `d_1 | d_2 | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: BigMatrix,
    pub d: BigMatrix,
    pub v: BigMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// `row[dst] -= q * row[src]`
fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (src_row, dst_row) = if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    };
    for (d, s) in dst_row.iter_mut().zip(src_row) {
        *d -= q * s;
    }
}

/// `col[dst] -= q * col[src]`
fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = &row[src] * q;
        row[dst] -= s;
    }
}

fn negate_row(m: &mut [Vec<BigInt>], r: usize) {
    for x in m[r].iter_mut() {
        *x = -&*x;
    }
}

/// Smith normal form of a (possibly rectangular) integer matrix.
///
/// Pivoting picks the nonzero entry of smallest absolute value in the remaining
/// block, scanning rows first and breaking ties by lowest index.
pub fn smith_normal_form(m: &[Vec<i64>]) -> SnfResult {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = to_big(m);
    let mut u = big_identity(rows);
    let mut v = big_identity(cols);
    let minus_one = -BigInt::one();

    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = &a[i][t] / &p;
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = &a[t][j] / &p;
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &p).is_zero()));
            match offender {
                Some(i) => {
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
    }
    SnfResult { u, d: a, v }
}

/// Row Hermite normal form: upper triangular (echelon), positive pivots, entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form_big(m: &[Vec<BigInt>]) -> BigMatrix {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()).then(i.cmp(&j)));
            let Some(best) = best else {
                break;
            };
            a.swap(r, best);
            let p = a[r][c].clone();
            let mut clean = true;
            for i in r + 1..rows {
                let q = &a[i][c] / &p;
                row_axpy(&mut a, i, r, &q);
                clean &= a[i][c].is_zero();
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            negate_row(&mut a, r);
        }
        let p = a[r][c].clone();
        for i in 0..r {
            let q = a[i][c].div_floor(&p);
            row_axpy(&mut a, i, r, &q);
        }
        r += 1;
    }
    a.truncate(r);
    a
}

pub fn hermite_normal_form(m: &[Vec<i64>]) -> IntMatrix {
    from_big(&hermite_normal_form_big(&to_big(m))).expect("HNF entries are bounded by the input")
}

fn from_big(m: &[Vec<BigInt>]) -> Result<IntMatrix> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    x.to_i64()
                        .ok_or_else(|| Error::BasisInconsistency(format!("entry {x} exceeds i64")))
                })
                .collect()
        })
        .collect()
}

/// A `Z`-basis of the central sublattice `S`, stored in row Hermite normal form.
///
/// Since `ell·e_i ∈ S` for every `i`, `S` has full rank and the basis is square
/// upper triangular with positive diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: IntMatrix,
}

impl LatticeBasis {
    /// Builds the HNF basis of the lattice spanned by `generators`, which must
    /// have full rank.
    pub fn from_generators(generators: &[Vec<i64>]) -> Result<Self> {
        Self::from_big_generators(&to_big(generators))
    }

    fn from_big_generators(generators: &[Vec<BigInt>]) -> Result<Self> {
        let n = generators.first().map_or(0, Vec::len);
        let rows = from_big(&hermite_normal_form_big(generators))?;
        if rows.len() != n {
            return Err(Error::BasisInconsistency(format!(
                "generators span a lattice of rank {} < {n}",
                rows.len()
            )));
        }
        Ok(LatticeBasis { rows })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `[Z^n : S]`, the product of the HNF pivots.
    pub fn index(&self) -> u64 {
        (0..self.dim()).map(|i| self.rows[i][i] as u64).product()
    }

    /// The unique integer `m` with `s = Σ m_i b_i`, or `None` if `s ∉ S`.
    pub fn coordinates(&self, s: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(s.len(), self.dim(), "dimension mismatch");
        let mut rest = s.to_vec();
        let mut m = Vec::with_capacity(self.dim());
        for (k, row) in self.rows.iter().enumerate() {
            let p = row[k];
            if rest[k] % p != 0 {
                return None;
            }
            let q = rest[k] / p;
            for (x, b) in rest.iter_mut().zip(row) {
                *x -= q * b;
            }
            m.push(q);
        }
        Some(m)
    }

    pub fn contains(&self, s: &[i64]) -> bool {
        self.coordinates(s).is_some()
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| (i == j) == (x != 0)))
    }
}

/// Outcome of the positive-diagonal test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalVerdict {
    pub is_positive_diagonal: bool,
    /// Least positive `λ_i` with `λ_i e_i ∈ S`.
    pub lambdas: Vec<u64>,
    /// A basis row of `S` outside `diag(λ)·Z^n`; present iff the verdict is false.
    pub witness: Option<Exponent>,
}

/// The moduli `ell / gcd(d_i, ell)` attached to the Smith diagonal of `H`.
fn kernel_moduli(cd: &CommutationData, snf: &SnfResult) -> Vec<u64> {
    let ell = BigInt::from(cd.ell());
    snf.diagonal()
        .iter()
        .map(|d| (&ell / d.gcd(&ell)).to_u64().expect("modulus divides ell"))
        .collect()
}

/// HNF basis of `S = {s ∈ Z^n : H s ≡ 0 mod ell}`.
///
/// With `U H V = D`, the substitution `s = V y` turns the congruence into
/// `d_i y_i ≡ 0 mod ell`, so `S = V · diag(ell / gcd(d_i, ell)) · Z^n`.
pub fn kernel_lattice(cd: &CommutationData) -> LatticeBasis {
    let snf = smith_normal_form(cd.h());
    let moduli = kernel_moduli(cd, &snf);
    let n = cd.n();
    let generators: BigMatrix =
        (0..n).map(|i| (0..n).map(|k| &snf.v[k][i] * moduli[i]).collect()).collect();
    LatticeBasis::from_big_generators(&generators).expect("kernel of H mod ell has full rank")
}

/// Cardinality `h` of the image of `H: Z^n → (Z/ellZ)^n`.
pub fn image_cardinality(cd: &CommutationData) -> u64 {
    let snf = smith_normal_form(cd.h());
    kernel_moduli(cd, &snf).iter().product()
}

/// PI degree `d = √h`. A non-square `h` is reported as a consistency error.
pub fn pi_degree(cd: &CommutationData) -> Result<u64> {
    let h = image_cardinality(cd);
    let d = h.sqrt();
    if d * d != h {
        return Err(Error::Consistency(format!("image cardinality {h} is not a perfect square")));
    }
    Ok(d)
}

/// `λ_i = ell / gcd(ell, h_1i, …, h_ni)`, the least `m > 0` with `m e_i ∈ S`.
pub fn minimal_axis_multiples(cd: &CommutationData) -> Vec<u64> {
    let ell = cd.ell() as i64;
    let h = cd.h();
    (0..cd.n())
        .map(|i| {
            let g = (0..cd.n()).fold(ell, |acc, j| acc.gcd(&h[j][i]));
            (ell / g) as u64
        })
        .collect()
}

/// Decides whether `S` admits a positive diagonal basis.
///
/// `diag(λ)·Z^n` always sits inside `S`; a positive diagonal basis exists iff the
/// two coincide, i.e. iff `Π λ_i = [Z^n : S]`.
pub fn positive_diagonal_decision(cd: &CommutationData) -> DiagonalVerdict {
    let basis = kernel_lattice(cd);
    decide_with_basis(cd, &basis)
}

pub fn decide_with_basis(cd: &CommutationData, basis: &LatticeBasis) -> DiagonalVerdict {
    let lambdas = minimal_axis_multiples(cd);
    let product: u64 = lambdas.iter().product();
    let is_positive_diagonal = product == basis.index();
    let witness = if is_positive_diagonal {
        None
    } else {
        basis
            .rows()
            .iter()
            .find(|row| row.iter().zip(&lambdas).any(|(&x, &l)| x % l as i64 != 0))
            .map(|row| Exponent(row.clone()))
    };
    DiagonalVerdict { is_positive_diagonal, lambdas, witness }
}
