//! Pure states of a two-subsystem (u, v) composite and their reduced
//! density operators.
//!
//! A pure state is stored as its coefficient matrix `d`: the amplitude of
//! basis vector `i` of subsystem u paired with basis vector `j` of subsystem
//! v. Tracing out either side, diagonalizing the surviving operator, and
//! pairing the eigenvectors across the cut yields the Schmidt decomposition;
//! every entanglement measure here is a function of its eigenvalue list.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    complete_orthonormal_columns, hermitian_eig, vector_norm, Complex64, ComplexMatrix,
};

/// Allowed deviation of the state norm from 1.
pub const STATE_NORM_TOL: f64 = 1e-10;

/// Hermiticity and unit-trace tolerance for density operators.
pub const DENSITY_TOL: f64 = 1e-10;

/// Reduced-operator eigenvalues may undershoot zero by at most this much.
pub const DENSITY_EIGENVALUE_FLOOR: f64 = -1e-10;

/// Schmidt eigenvalues in `[SCHMIDT_LAMBDA_FLOOR, 0)` are clamped to zero;
/// anything more negative is a numerical failure.
pub const SCHMIDT_LAMBDA_FLOOR: f64 = -1e-12;

/// Default threshold separating genuine Schmidt modes from numerical noise.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// States loaded from JSON may deviate from unit norm by at most this much
/// before renormalization.
pub const JSON_NORM_TOL: f64 = 1e-6;

/// A normalized pure state of the composite system.
#[derive(Debug, Clone, PartialEq)]
pub struct PureBipartiteState {
    d: ComplexMatrix,
}

impl PureBipartiteState {
    /// Wraps a coefficient matrix, requiring unit norm within
    /// [`STATE_NORM_TOL`].
    pub fn new(d: ComplexMatrix) -> Result<Self> {
        let norm_sqr: f64 = d.entries().iter().map(|z| z.norm_sqr()).sum();
        let deviation = (norm_sqr - 1.0).abs();
        if deviation > STATE_NORM_TOL {
            return Err(Error::NotNormalized {
                deviation,
                tol: STATE_NORM_TOL,
            });
        }
        Ok(Self { d })
    }

    /// Scales an arbitrary nonzero coefficient matrix to unit norm.
    pub fn from_unnormalized(d: ComplexMatrix) -> Result<Self> {
        let norm: f64 = d
            .entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm <= 0.0 {
            return Err(Error::NonPositive {
                name: "state norm",
                got: norm,
            });
        }
        let scaled = d.scale(Complex64::new(1.0 / norm, 0.0));
        Ok(Self { d: scaled })
    }

    pub fn dim_u(&self) -> usize {
        self.d.rows()
    }

    pub fn dim_v(&self) -> usize {
        self.d.cols()
    }

    /// The coefficient matrix `d_{ij}`.
    pub fn coefficients(&self) -> &ComplexMatrix {
        &self.d
    }
}

/// A density operator: Hermitian, unit trace, non-negative.
///
/// Hermiticity and the trace are enforced at construction; non-negativity is
/// a spectral statement and is certified whenever [`DensityOperator::spectrum`]
/// runs (constructing the spectrum of an operator with an eigenvalue below
/// [`DENSITY_EIGENVALUE_FLOOR`] fails).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let deviation = matrix.hermiticity_deviation();
        if deviation > DENSITY_TOL {
            return Err(Error::NotHermitian {
                deviation,
                tol: DENSITY_TOL,
            });
        }
        let trace = matrix.trace()?;
        let trace_dev = (trace - Complex64::new(1.0, 0.0)).norm();
        if trace_dev > DENSITY_TOL {
            return Err(Error::TraceNotOne {
                deviation: trace_dev,
                tol: DENSITY_TOL,
            });
        }
        Ok(Self { matrix })
    }

    /// For operators produced by partial traces of valid states, whose
    /// invariants hold by construction.
    pub(crate) fn from_reduction(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.hermiticity_deviation() <= DENSITY_TOL);
        debug_assert!(
            (matrix.trace().expect("square by construction") - Complex64::new(1.0, 0.0)).norm()
                <= DENSITY_TOL
        );
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues in descending order.
    ///
    /// Fails if any eigenvalue sits below [`DENSITY_EIGENVALUE_FLOOR`]: that
    /// would mean the operator is not a valid state within tolerance.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let eig = hermitian_eig(&self.matrix, DENSITY_TOL)?;
        if let Some(&worst) = eig
            .eigenvalues
            .iter()
            .min_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"))
        {
            if worst < DENSITY_EIGENVALUE_FLOOR {
                return Err(Error::NegativeEigenvalue {
                    value: worst,
                    tol: DENSITY_EIGENVALUE_FLOOR.abs(),
                });
            }
        }
        Ok(eig.eigenvalues)
    }
}

/// Density operator of subsystem u: `rho_u[i][k] = sum_j d[i][j] conj(d[k][j])`.
pub fn reduce_u(state: &PureBipartiteState) -> DensityOperator {
    let d = state.coefficients();
    let (m, n) = (d.rows(), d.cols());
    let mut rho = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        for k in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += d.get(i, j) * d.get(k, j).conj();
            }
            rho.set(i, k, acc);
        }
    }
    DensityOperator::from_reduction(rho)
}

/// Density operator of subsystem v: `rho_v[l][j] = sum_i conj(d[i][l]) d[i][j]`.
pub fn reduce_v(state: &PureBipartiteState) -> DensityOperator {
    let d = state.coefficients();
    let (m, n) = (d.rows(), d.cols());
    let mut rho = ComplexMatrix::zeros(n, n);
    for l in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..m {
                acc += d.get(i, l).conj() * d.get(i, j);
            }
            rho.set(l, j, acc);
        }
    }
    DensityOperator::from_reduction(rho)
}

/// Expectation value `tr(a * rho)` of an observable on one subsystem.
pub fn expectation(rho: &DensityOperator, a: &ComplexMatrix) -> Result<Complex64> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != rho.dim() {
        return Err(Error::DimensionMismatch {
            op: "expectation",
            left: format!("{}x{}", a.rows(), a.cols()),
            right: format!("{}x{}", rho.dim(), rho.dim()),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..a.rows() {
        for n in 0..a.cols() {
            acc += a.get(m, n) * rho.matrix().get(n, m);
        }
    }
    Ok(acc)
}

/// The Schmidt decomposition of a pure bipartite state.
///
/// `lambdas` is the common spectrum of both reduced density operators in
/// descending order, truncated to `min(dim_u, dim_v)` entries (everything
/// beyond that is exactly zero in exact arithmetic). `u_basis` and `v_basis`
/// hold the paired orthonormal mode vectors as columns; `rank` counts the
/// eigenvalues above the tolerance the decomposition was computed with.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub lambdas: Vec<f64>,
    pub u_basis: ComplexMatrix,
    pub v_basis: ComplexMatrix,
    pub rank: usize,
}

impl SchmidtDecomposition {
    /// Rebuilds the coefficient matrix `sum_l sqrt(lambda_l) u_l conj(v_l)`
    /// for consistency checks.
    ///
    /// Only the `rank` retained modes contribute. Columns past the rank hold
    /// basis-completion vectors with no pairing relation, so including their
    /// (noise-level) eigenvalues would inject sqrt-amplified garbage terms.
    pub fn reassemble(&self) -> ComplexMatrix {
        let m = self.u_basis.rows();
        let n = self.v_basis.rows();
        let mut d = ComplexMatrix::zeros(m, n);
        for (l, &lambda) in self.lambdas.iter().enumerate().take(self.rank) {
            let c = lambda.max(0.0).sqrt();
            if c == 0.0 {
                continue;
            }
            for i in 0..m {
                for j in 0..n {
                    let add = self.u_basis.get(i, l) * self.v_basis.get(j, l).conj() * c;
                    d.set(i, j, d.get(i, j) + add);
                }
            }
        }
        d
    }

    pub fn entanglement_report(&self) -> EntanglementReport {
        EntanglementReport::from_lambdas(&self.lambdas, self.rank)
    }
}

/// Schmidt decomposition via the reduced density operator of subsystem u.
///
/// The u modes are the eigenvectors of `reduce_u(state)`; each v mode is
/// obtained from the pairing `v[j][l] = sum_k conj(d[k][j]) u[k][l]`, whose
/// norm is exactly `sqrt(lambda_l)`, so normalizing it keeps the two bases
/// consistently matched without a second eigensolve. Modes with eigenvalue
/// at or below `tol` have no well-defined partner and are completed into an
/// orthonormal basis instead.
pub fn schmidt(state: &PureBipartiteState, tol: f64) -> Result<SchmidtDecomposition> {
    let d = state.coefficients();
    let (m, n) = (d.rows(), d.cols());
    let rho_u = reduce_u(state);
    let eig = hermitian_eig(rho_u.matrix(), DENSITY_TOL)?;

    let keep = m.min(n);
    let mut lambdas = Vec::with_capacity(keep);
    for (l, &raw) in eig.eigenvalues.iter().enumerate() {
        if raw < SCHMIDT_LAMBDA_FLOOR {
            return Err(Error::NegativeEigenvalue {
                value: raw,
                tol: SCHMIDT_LAMBDA_FLOOR.abs(),
            });
        }
        if l < keep {
            lambdas.push(raw.max(0.0));
        }
    }

    let mut u_basis = ComplexMatrix::zeros(m, keep);
    for l in 0..keep {
        let col = eig.eigenvectors.col(l);
        u_basis.set_col(l, &col);
    }

    let rank = lambdas.iter().filter(|&&l| l > tol).count();
    let mut v_basis = ComplexMatrix::zeros(n, keep);
    for l in 0..rank {
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for (j, slot) in col.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..m {
                acc += d.get(k, j).conj() * eig.eigenvectors.get(k, l);
            }
            *slot = acc;
        }
        let norm = vector_norm(&col);
        for z in &mut col {
            *z /= norm;
        }
        v_basis.set_col(l, &col);
    }
    complete_orthonormal_columns(&mut v_basis, rank)?;

    Ok(SchmidtDecomposition {
        lambdas,
        u_basis,
        v_basis,
        rank,
    })
}

/// True when the state factorizes into a single product term.
pub fn is_product(state: &PureBipartiteState, tol: f64) -> Result<bool> {
    Ok(schmidt(state, tol)?.rank == 1)
}

/// Scalar entanglement measures of a Schmidt spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub schmidt_rank: usize,
    /// `sum lambda^2`; 1 exactly for product states.
    pub purity: f64,
    /// `-sum lambda ln lambda` with `0 ln 0 = 0`.
    pub entropy: f64,
    /// `1 / purity`: the effective number of participating modes.
    pub participation: f64,
}

impl EntanglementReport {
    pub fn from_lambdas(lambdas: &[f64], rank: usize) -> Self {
        let purity: f64 = lambdas.iter().map(|&l| l * l).sum();
        let entropy: f64 = -lambdas
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * l.ln())
            .sum::<f64>();
        Self {
            schmidt_rank: rank,
            purity,
            entropy,
            participation: 1.0 / purity,
        }
    }
}

/// Schmidt decomposition plus the scalar measures in one call.
pub fn entanglement_report(state: &PureBipartiteState, tol: f64) -> Result<EntanglementReport> {
    Ok(schmidt(state, tol)?.entanglement_report())
}

/// Deterministic pseudo-random state: complex standard-normal coefficients
/// from a counter-based generator, normalized. The same seed always yields
/// the same state.
pub fn random_state(dim_u: usize, dim_v: usize, seed: u64) -> Result<PureBipartiteState> {
    if dim_u == 0 || dim_v == 0 {
        return Err(Error::EmptyMatrix {
            rows: dim_u,
            cols: dim_v,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(dim_u * dim_v);
    for _ in 0..dim_u * dim_v {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        entries.push(Complex64::new(re, im));
    }
    let d = ComplexMatrix::new(dim_u, dim_v, entries)?;
    PureBipartiteState::from_unnormalized(d)
}

/// On-disk representation of a pure state: dimensions plus row-major real
/// and imaginary parts.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub dim_u: usize,
    pub dim_v: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Parses a state from its JSON form.
///
/// The payload is rejected unless its norm is within [`JSON_NORM_TOL`] of 1;
/// inside that window the coefficients are renormalized exactly, and a
/// warning describing the adjustment is returned when the deviation was
/// beyond [`STATE_NORM_TOL`].
pub fn state_from_json(text: &str) -> Result<(PureBipartiteState, Option<String>)> {
    let raw: StateJson =
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if raw.dim_u == 0 || raw.dim_v == 0 {
        return Err(Error::EmptyMatrix {
            rows: raw.dim_u,
            cols: raw.dim_v,
        });
    }
    let expected = raw.dim_u * raw.dim_v;
    if raw.re.len() != expected || raw.im.len() != expected {
        return Err(Error::BadEntryCount {
            got: raw.re.len().max(raw.im.len()),
            expected,
        });
    }
    let entries: Vec<Complex64> = raw
        .re
        .iter()
        .zip(raw.im.iter())
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    let d = ComplexMatrix::new(raw.dim_u, raw.dim_v, entries)?;
    let norm: f64 = d
        .entries()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let deviation = (norm - 1.0).abs();
    if deviation > JSON_NORM_TOL {
        return Err(Error::NotNormalized {
            deviation,
            tol: JSON_NORM_TOL,
        });
    }
    let state = PureBipartiteState::from_unnormalized(d)?;
    let warning = if deviation > STATE_NORM_TOL {
        Some(format!(
            "input state norm deviated from 1 by {deviation:.3e}; coefficients were renormalized"
        ))
    } else {
        None
    };
    Ok((state, warning))
}

/// Serializes a state to its JSON form.
pub fn state_to_json(state: &PureBipartiteState) -> String {
    let d = state.coefficients();
    let raw = StateJson {
        dim_u: d.rows(),
        dim_v: d.cols(),
        re: d.entries().iter().map(|z| z.re).collect(),
        im: d.entries().iter().map(|z| z.im).collect(),
    };
    serde_json::to_string_pretty(&raw).expect("plain numeric struct serializes")
}
