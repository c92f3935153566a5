//! Config ingestion and the structure report: PI degree, central sublattice,
//! positive-diagonal verdict, center descriptions and UFR flags.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coeff::{CoeffField, FieldKind, FieldSpec};
use crate::commutation::{CommutationData, Exponent};
use crate::error::{Error, Result};
use crate::lattice::{self, LatticeBasis};
use crate::series::SeriesRing;

/// Input file: `{"n": int, "ell": int, "h": [[int]], "coeff_field": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub n: usize,
    pub ell: u64,
    pub h: Vec<Vec<i64>>,
    #[serde(default)]
    pub coeff_field: FieldKind,
    /// Free-form note carried by corpus files; ignored by the analysis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl Config {
    pub fn new(n: usize, ell: u64, h: Vec<Vec<i64>>) -> Self {
        Config { n, ell, h, coeff_field: FieldKind::Cyclotomic, description: None }
    }

    pub fn from_json(text: &str, location: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config {
            location: format!("{location}:{}:{}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn commutation(&self) -> Result<(CommutationData, Vec<String>)> {
        CommutationData::validate(self.n, self.ell, &self.h)
    }

    pub fn field(&self) -> Result<CoeffField> {
        CoeffField::new(FieldSpec { kind: self.coeff_field, ell: self.ell })
    }

    pub fn ring(&self) -> Result<SeriesRing> {
        let (cd, _) = self.commutation()?;
        SeriesRing::new(cd, self.field()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub coeff_field: FieldKind,
    pub ell: u64,
    pub h: Vec<Vec<i64>>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CenterDescription {
    /// `k[[z_1^{±1}, …, z_n^{±1}]]` with `z_i = x^{generators[i]}`.
    LaurentSeries { generators: Vec<Vec<i64>> },
    /// `k[[z_1, …, z_n]]` with `z_i = x^{generators[i]}`.
    PowerSeries { generators: Vec<Vec<i64>> },
    UnknownForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AzumayaLabel {
    pub degree: u64,
    pub status: String,
}

pub const AZUMAYA_STATUS: &str = "theorem-derived, not verified";

/// Full analysis of one commutation matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureReport {
    pub input: InputEcho,
    pub pi_degree: u64,
    pub image_cardinality: u64,
    pub s_basis: Vec<Vec<i64>>,
    pub lambdas: Vec<u64>,
    pub positive_diagonal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<i64>>,
    #[serde(rename = "center_of_L")]
    pub center_of_l: CenterDescription,
    #[serde(rename = "center_of_R")]
    pub center_of_r: CenterDescription,
    pub azumaya: AzumayaLabel,
    #[serde(rename = "ufr_L")]
    pub ufr_l: bool,
    #[serde(rename = "ufr_R")]
    pub ufr_r: bool,
    pub warnings: Vec<String>,
}

pub const CRITERION_NOT_MET: &str = "criterion not met: the central sublattice has no positive diagonal basis, \
so no closed description of the centers is available and the UFR flags only record that the sufficient condition fails";

/// Runs validation, lattice analysis and the internal cross-checks.
pub fn analyze(config: &Config) -> Result<StructureReport> {
    let (cd, mut warnings) = config.commutation()?;
    // the field is not needed for the lattice data but an unusable field spec
    // is still a config error
    config.field()?;

    let basis = lattice::kernel_lattice(&cd);
    let h = lattice::image_cardinality(&cd);
    let d = lattice::pi_degree(&cd)?;
    cross_check(&cd, &basis, h, d)?;
    let verdict = lattice::decide_with_basis(&cd, &basis);

    let positive = verdict.is_positive_diagonal;
    let (center_of_l, center_of_r) = if positive {
        let generators: Vec<Vec<i64>> = basis.rows().to_vec();
        (
            CenterDescription::LaurentSeries { generators: generators.clone() },
            CenterDescription::PowerSeries { generators },
        )
    } else {
        warnings.push(CRITERION_NOT_MET.to_string());
        (CenterDescription::UnknownForm, CenterDescription::UnknownForm)
    };

    Ok(StructureReport {
        input: InputEcho { coeff_field: config.coeff_field, ell: cd.ell(), h: config.h.clone(), n: cd.n() },
        pi_degree: d,
        image_cardinality: h,
        s_basis: basis.rows().to_vec(),
        lambdas: verdict.lambdas,
        positive_diagonal: positive,
        witness: verdict.witness.map(|w| w.0),
        center_of_l,
        center_of_r,
        azumaya: AzumayaLabel { degree: d, status: AZUMAYA_STATUS.into() },
        ufr_l: positive,
        ufr_r: positive,
        warnings,
    })
}

fn cross_check(cd: &CommutationData, basis: &LatticeBasis, h: u64, d: u64) -> Result<()> {
    if d * d != h {
        return Err(Error::Consistency(format!("pi_degree^2 = {} but h = {h}", d * d)));
    }
    for row in basis.rows() {
        if !cd.is_central_exponent(&Exponent(row.clone()))? {
            return Err(Error::Consistency(format!("basis row {row:?} is not central")));
        }
    }
    let det = lattice::determinant(&lattice::to_big(basis.rows()));
    if det.magnitude() != &num_bigint::BigUint::from(h) {
        return Err(Error::Consistency(format!("|det S basis| = {} but h = {h}", det.magnitude())));
    }
    Ok(())
}

impl StructureReport {
    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config {
            location: format!("report:{}:{}", e.line(), e.column()),
            message: e.to_string(),
        })
    }
}

fn fmt_monomial(e: &[i64]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn fmt_center(c: &CenterDescription) -> String {
    match c {
        CenterDescription::LaurentSeries { generators } => {
            let g: Vec<String> = generators
                .iter()
                .map(|b| {
                    let m = fmt_monomial(b);
                    if m.contains(['^', '*']) { format!("({m})^±1") } else { format!("{m}^±1") }
                })
                .collect();
            format!("Laurent series ring k[[{}]]", g.join(", "))
        }
        CenterDescription::PowerSeries { generators } => {
            let g: Vec<String> = generators.iter().map(|b| fmt_monomial(b)).collect();
            format!("power series ring k[[{}]]", g.join(", "))
        }
        CenterDescription::UnknownForm => "unknown form".into(),
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}, ell = {}", self.input.n, self.input.ell)?;
        writeln!(f, "H = {:?}", self.input.h)?;
        writeln!(f, "image cardinality h = {}", self.image_cardinality)?;
        writeln!(f, "PI degree d = {}", self.pi_degree)?;
        writeln!(f, "central sublattice S (HNF rows):")?;
        for row in &self.s_basis {
            writeln!(f, "  {row:?}")?;
        }
        writeln!(f, "axis multiples λ = {:?}", self.lambdas)?;
        write!(f, "positive diagonal basis: {}", if self.positive_diagonal { "yes" } else { "no" })?;
        match &self.witness {
            Some(w) => writeln!(f, " (witness {w:?})")?,
            None => writeln!(f)?,
        }
        writeln!(f, "Z(L): {}", fmt_center(&self.center_of_l))?;
        writeln!(f, "Z(R): {}", fmt_center(&self.center_of_r))?;
        writeln!(f, "L Azumaya of degree {} ({})", self.azumaya.degree, self.azumaya.status)?;
        let ufr = |b: bool| if b { "yes" } else { "criterion not met" };
        writeln!(f, "L is a UFR: {}", ufr(self.ufr_l))?;
        writeln!(f, "R is a UFR: {}", ufr(self.ufr_r))?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}
