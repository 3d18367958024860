//! JSON design configuration.
//!
//! Complex numbers are `[re, im]` pairs. Group elements are referenced by
//! index or by label (`"g^2"`, `"tg"` for dihedral groups). Vectors are
//! either explicit arrays, a delta at an element (`{"delta": "g"}`, for
//! representations whose dimension equals the group order), or seeded
//! Gaussian draws (`{"random": 3}`).

use std::path::Path;

use finite_sampling::linalg::c;
use finite_sampling::{CMatrix, CVector, FiniteGroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Deserialize;

use crate::error::{CliError, Stage};

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { m: usize },
    Dihedral { m: usize },
    Cayley { table: Vec<Vec<usize>>, labels: Option<Vec<String>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepKind {
    Regular,
    CyclicShift,
    Explicit { matrices: Vec<Vec<Vec<[f64; 2]>>> },
}

#[derive(Debug, Clone, Deserialize)]
pub struct RepSpec {
    #[serde(flatten)]
    pub kind: RepKind,
    /// Conjugate by a Haar-like unitary drawn from this seed.
    #[serde(default)]
    pub conjugate_seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum VectorSpec {
    Values(Vec<[f64; 2]>),
    Delta { delta: ElementRef },
    Random { random: u64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum HamiltonianSpec {
    /// Group average of a seeded random Hermitian matrix.
    Symmetrized { symmetrize_random: u64 },
    /// Used as given; refused unless it commutes with the representation.
    Explicit { matrix: Vec<Vec<[f64; 2]>> },
}

/// Overrides for the CLI's own pass/fail thresholds.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub reconstruction: Option<f64>,
    pub interpolation: Option<f64>,
    pub left_inverse: Option<f64>,
    pub dynamics: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    #[serde(default)]
    pub id: Option<String>,
    pub group: GroupSpec,
    pub representation: RepSpec,
    pub generator: VectorSpec,
    pub systems: Vec<VectorSpec>,
    pub k_generators: Vec<ElementRef>,
    #[serde(default)]
    pub h_generators: Option<Vec<ElementRef>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub state: Option<VectorSpec>,
    #[serde(default)]
    pub hamiltonian: Option<HamiltonianSpec>,
    #[serde(default)]
    pub times: Option<Vec<f64>>,
}

impl DesignConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(Stage::Parse, e))
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(Stage::Parse, format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn design_id(&self) -> &str {
        self.id.as_deref().unwrap_or("design")
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, CliError> {
        let g = match self {
            GroupSpec::Cyclic { m } => FiniteGroup::cyclic(*m),
            GroupSpec::Dihedral { m } => FiniteGroup::dihedral(*m),
            GroupSpec::Cayley { table, labels } => FiniteGroup::from_cayley_table(table.clone(), labels.clone()),
        };
        g.map_err(|e| CliError::config(Stage::Group, e))
    }
}

impl ElementRef {
    pub fn resolve(&self, g: &FiniteGroup) -> Result<usize, CliError> {
        match self {
            ElementRef::Index(i) => g.check_element(*i),
            ElementRef::Label(s) => g.element(s),
        }
        .map_err(|e| CliError::config(Stage::Group, e))
    }

    /// Parses a command-line token: a non-negative integer or a label.
    pub fn parse(token: &str) -> Self {
        match token.trim().parse::<usize>() {
            Ok(i) => ElementRef::Index(i),
            Err(_) => ElementRef::Label(token.trim().to_string()),
        }
    }
}

pub fn resolve_all(refs: &[ElementRef], g: &FiniteGroup) -> Result<Vec<usize>, CliError> {
    refs.iter().map(|r| r.resolve(g)).collect()
}

pub fn gaussian_vector(dim: usize, rng: &mut ChaCha8Rng) -> CVector {
    CVector::from_fn(dim, |_, _| c(StandardNormal.sample(rng), StandardNormal.sample(rng)))
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(StandardNormal.sample(rng), StandardNormal.sample(rng)))
}

/// `Q` from the QR factorisation of a complex Gaussian matrix.
pub fn haar_unitary(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gaussian_matrix(dim, dim, &mut rng).qr().q()
}

impl VectorSpec {
    pub fn build(&self, g: &FiniteGroup, dim: usize, stage: Stage) -> Result<CVector, CliError> {
        match self {
            VectorSpec::Values(v) => {
                if v.len() != dim {
                    return Err(CliError::config(stage, format!("vector has length {}, expected {dim}", v.len())));
                }
                Ok(CVector::from_iterator(dim, v.iter().map(|p| c(p[0], p[1]))))
            }
            VectorSpec::Delta { delta } => {
                if dim != g.order() {
                    return Err(CliError::config(
                        stage,
                        format!("delta vectors need dimension |G| = {}, representation has {dim}", g.order()),
                    ));
                }
                let mut v = CVector::zeros(dim);
                v[delta.resolve(g)?] = c(1.0, 0.0);
                Ok(v)
            }
            VectorSpec::Random { random } => Ok(gaussian_vector(dim, &mut ChaCha8Rng::seed_from_u64(*random))),
        }
    }
}

pub fn matrix_from_pairs(rows: &[Vec<[f64; 2]>], stage: Stage) -> Result<CMatrix, CliError> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return Err(CliError::config(stage, "matrix rows have different lengths"));
    }
    Ok(CMatrix::from_fn(n, m, |i, j| c(rows[i][j][0], rows[i][j][1])))
}
