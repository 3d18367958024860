//! Numerical thresholds shared by every module.
//!
//! | constant                 | used for                                              |
//! |--------------------------|-------------------------------------------------------|
//! | [`EPS`]                  | rank cutoffs (`max(m,n) * EPS * sigma_max`)           |
//! | [`REP_IDENTITY`]         | `U(e) = I`, entrywise                                 |
//! | [`REP_CHECK`]            | homomorphism / unitarity, Frobenius, times `d`        |
//! | [`STATIONARITY`]         | stationarity inner-product equalities                 |
//! | [`HERMITIAN_INPUT`]      | Hermitian inputs (`H0`, propagator argument)          |
//! | [`HERMITIAN_OUTPUT`]     | Hermitian commutant invariant                         |
//! | [`COMMUTATOR`]           | `[U(g), H] = 0`, Frobenius, times `d`                 |
//! | [`SEED_CHECK`]           | caller supplied seed `S R = [I 0]`                    |
//! | [`LEFT_INVERSE`]         | `S R = [I 0]`, `S~ R = I`, `M R = I` (Frobenius)      |
//! | [`INTERPOLATION`]        | Kronecker pattern of `L_j c_j'(tau_n)`                |
//! | [`RECONSTRUCTION`]       | relative reconstruction error `|x^ - x| / |x|`        |
//! | [`UNITARY_INPUT`]        | unitarity of conjugating matrices                     |
//! | [`ILL_CONDITIONED_RATIO`]| sigma_min within this factor of the cutoff            |

pub const EPS: f64 = f64::EPSILON;
pub const REP_IDENTITY: f64 = 1e-12;
pub const REP_CHECK: f64 = 1e-10;
pub const STATIONARITY: f64 = 1e-9;
pub const HERMITIAN_INPUT: f64 = 1e-10;
pub const HERMITIAN_OUTPUT: f64 = 1e-12;
pub const COMMUTATOR: f64 = 1e-10;
pub const SEED_CHECK: f64 = 1e-8;
pub const LEFT_INVERSE: f64 = 1e-9;
pub const INTERPOLATION: f64 = 1e-8;
pub const RECONSTRUCTION: f64 = 1e-9;
pub const UNITARY_INPUT: f64 = 1e-10;
pub const ILL_CONDITIONED_RATIO: f64 = 10.0;

/// Singular values at or below this are treated as zero for an `m x n` matrix.
pub fn rank_cutoff(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * EPS * sigma_max
}
