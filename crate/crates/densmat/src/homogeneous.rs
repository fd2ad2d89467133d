//! Translation-invariant states on a periodic one-dimensional lattice.
//!
//! A homogeneous state is fully described by its two-point correlation
//! C(s) at the lattice separations s_m = m * dx. The density operator it
//! generates is circulant, so plane waves diagonalize it and the whole
//! spectrum comes from a discrete Fourier transform of the correlation
//! table: lambda(k_n) = dx * sum_m C(s_m) exp(-i k_n s_m) on the momentum
//! grid k_n = 2 pi n / L, n in {-N/2, ..., N/2 - 1}.
//!
//! The grid is symmetric only for even N, which is why odd site counts are
//! rejected outright.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::Complex64;

/// Tolerance on the Hermiticity of a correlation table, C(-s) = conj(C(s)).
pub const CORRELATION_HERMITICITY_TOL: f64 = 1e-10;

/// Tolerance on the unit-trace condition L * C(0) = 1.
pub const CORRELATION_TRACE_TOL: f64 = 1e-10;

/// Spectral weights must sum to 1 within this tolerance.
pub const SPECTRUM_SUM_TOL: f64 = 1e-9;

/// Spectral weights may undershoot zero by at most this much.
pub const SPECTRUM_FLOOR: f64 = -1e-10;

/// Largest tolerated imaginary residue when a weight should be real.
pub const IMAG_RESIDUAL_TOL: f64 = 1e-10;

/// Variance estimates may undershoot zero by at most this much.
pub const VARIANCE_FLOOR: f64 = -1e-12;

/// Width, in grid points, of the zone-edge band checked for stray weight.
pub const EDGE_BAND_WIDTH: usize = 10;

/// Weight inside the zone-edge band above which continuum-fidelity claims
/// get a precision warning.
pub const EDGE_MASS_TOL: f64 = 1e-8;

/// Highest supported moment order.
pub const MAX_MOMENT_ORDER: usize = 4;

/// A translation-invariant state on N sites of a ring of circumference L,
/// held as its correlation table `corr[m] = C(m * dx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousState {
    n_sites: usize,
    box_length: f64,
    corr: Vec<Complex64>,
}

impl HomogeneousState {
    /// Validates and wraps a correlation table.
    ///
    /// Requirements, each with its own error: at least two sites, an even
    /// site count, a positive box, Hermiticity `corr[(N - m) % N] =
    /// conj(corr[m])`, and unit trace `L * C(0) = 1`.
    pub fn from_correlation(corr: Vec<Complex64>, box_length: f64) -> Result<Self> {
        let n = corr.len();
        if n < 2 {
            return Err(Error::TooFewSites { got: n, min: 2 });
        }
        if !n.is_multiple_of(2) {
            return Err(Error::OddSiteCount { got: n });
        }
        if !box_length.is_finite() || box_length <= 0.0 {
            return Err(Error::NonPositive {
                name: "box_length",
                got: box_length,
            });
        }
        if corr.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "correlation table",
            });
        }
        for m in 0..n {
            let partner = (n - m) % n;
            let deviation = (corr[partner] - corr[m].conj()).norm();
            if deviation > CORRELATION_HERMITICITY_TOL {
                return Err(Error::CorrelationNotHermitian { deviation, lag: m });
            }
        }
        let trace = Complex::new(corr[0].re * box_length, corr[0].im * box_length);
        let trace_dev = (trace - Complex::new(1.0, 0.0)).norm();
        if trace_dev > CORRELATION_TRACE_TOL {
            return Err(Error::CorrelationTrace {
                deviation: trace_dev,
            });
        }
        Ok(Self {
            n_sites: n,
            box_length,
            corr,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Lattice spacing L / N.
    pub fn dx(&self) -> f64 {
        self.box_length / self.n_sites as f64
    }

    /// The correlation table C(s_m), m = 0..N.
    pub fn corr(&self) -> &[Complex64] {
        &self.corr
    }
}

/// Momentum occupation numbers of a homogeneous state: the eigenvalues of
/// its density operator, labeled by the momentum grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDistribution {
    k_values: Vec<f64>,
    lambdas: Vec<f64>,
    hbar: f64,
}

impl SpectralDistribution {
    /// Wraps a (momentum grid, weight) table, enforcing non-negative weights
    /// (within [`SPECTRUM_FLOOR`]) that sum to 1 (within
    /// [`SPECTRUM_SUM_TOL`]).
    pub fn from_parts(k_values: Vec<f64>, lambdas: Vec<f64>, hbar: f64) -> Result<Self> {
        if k_values.len() != lambdas.len() {
            return Err(Error::BadEntryCount {
                got: lambdas.len(),
                expected: k_values.len(),
            });
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::NonPositive {
                name: "hbar",
                got: hbar,
            });
        }
        if k_values.iter().chain(lambdas.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "spectral distribution",
            });
        }
        if let Some(&worst) = lambdas
            .iter()
            .min_by(|a, b| a.partial_cmp(b).expect("finite weights"))
        {
            if worst < SPECTRUM_FLOOR {
                return Err(Error::NegativeEigenvalue {
                    value: worst,
                    tol: SPECTRUM_FLOOR.abs(),
                });
            }
        }
        let sum: f64 = lambdas.iter().sum();
        let deviation = (sum - 1.0).abs();
        if deviation > SPECTRUM_SUM_TOL {
            return Err(Error::SpectrumSum {
                deviation,
                tol: SPECTRUM_SUM_TOL,
            });
        }
        Ok(Self {
            k_values,
            lambdas,
            hbar,
        })
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn k_values(&self) -> &[f64] {
        &self.k_values
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `sum_n (hbar k_n)^order lambda_n` for orders up to
    /// [`MAX_MOMENT_ORDER`].
    pub fn momentum_moment(&self, order: usize) -> Result<f64> {
        if order > MAX_MOMENT_ORDER {
            return Err(Error::BadMomentOrder {
                got: order,
                max: MAX_MOMENT_ORDER,
            });
        }
        Ok(self
            .k_values
            .iter()
            .zip(self.lambdas.iter())
            .map(|(&k, &l)| (self.hbar * k).powi(order as i32) * l)
            .sum())
    }

    /// Momentum standard deviation `sqrt(<p^2> - <p>^2)`.
    pub fn occupation_stddev(&self) -> Result<f64> {
        let m1 = self.momentum_moment(1)?;
        let m2 = self.momentum_moment(2)?;
        let variance = m2 - m1 * m1;
        if variance < VARIANCE_FLOOR {
            return Err(Error::NegativeVariance { value: variance });
        }
        Ok(variance.max(0.0).sqrt())
    }

    /// `sum lambda^2`: 1 exactly when a single momentum mode carries all the
    /// weight.
    pub fn purity(&self) -> f64 {
        self.lambdas.iter().map(|&l| l * l).sum()
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (1.0 - self.purity()).abs() <= tol
    }

    /// Spectrum displaced by `shift` grid units: a cyclic permutation of the
    /// weights over the fixed momentum grid. Total weight and purity are
    /// unchanged by construction.
    pub fn boost(&self, shift: i64) -> Self {
        let n = self.lambdas.len() as i64;
        let lambdas = (0..n)
            .map(|g| {
                let src = (g - shift).rem_euclid(n) as usize;
                self.lambdas[src]
            })
            .collect();
        Self {
            k_values: self.k_values.clone(),
            lambdas,
            hbar: self.hbar,
        }
    }

    /// Weight within [`EDGE_BAND_WIDTH`] grid points of either zone edge.
    /// Operations that claim continuum fidelity are only reliable when this
    /// is below [`EDGE_MASS_TOL`].
    pub fn zone_edge_mass(&self) -> f64 {
        let n = self.lambdas.len();
        let w = EDGE_BAND_WIDTH.min(n / 2);
        let mut acc = 0.0;
        for g in 0..w {
            acc += self.lambdas[g];
            acc += self.lambdas[n - 1 - g];
        }
        acc
    }
}

/// Momentum grid k_n = 2 pi n / L with n from -N/2 to N/2 - 1, ascending.
pub fn momentum_grid(n_sites: usize, box_length: f64) -> Vec<f64> {
    let half = (n_sites / 2) as i64;
    (0..n_sites as i64)
        .map(|g| 2.0 * std::f64::consts::PI * (g - half) as f64 / box_length)
        .collect()
}

/// Diagonalizes a homogeneous state: one Fourier sum per momentum bin,
/// `lambda(k_n) = dx * sum_m C(s_m) exp(-i k_n s_m)`.
///
/// Fails with a numerical error if any weight keeps an imaginary residue
/// beyond [`IMAG_RESIDUAL_TOL`], if a weight is negative beyond
/// [`SPECTRUM_FLOOR`], or if the weights do not sum to 1 within
/// [`SPECTRUM_SUM_TOL`]; a Hermitian, unit-trace correlation table keeps
/// all three residues at rounding level.
pub fn spectrum(state: &HomogeneousState, hbar: f64) -> Result<SpectralDistribution> {
    if !hbar.is_finite() || hbar <= 0.0 {
        return Err(Error::NonPositive {
            name: "hbar",
            got: hbar,
        });
    }
    let n = state.n_sites() as i64;
    let dx = state.dx();
    let half = n / 2;
    let mut lambdas = Vec::with_capacity(state.n_sites());
    for g in 0..n {
        let mode = g - half;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &c) in state.corr().iter().enumerate() {
            // Reduce the phase index modulo N before touching floating
            // point, so large mode*m products cannot degrade the angle.
            let t = (mode * m as i64).rem_euclid(n);
            let angle = -2.0 * std::f64::consts::PI * t as f64 / n as f64;
            acc += c * Complex64::new(angle.cos(), angle.sin());
        }
        let lambda = acc * dx;
        if lambda.im.abs() > IMAG_RESIDUAL_TOL {
            return Err(Error::ImaginaryResidual {
                residual: lambda.im.abs(),
                tol: IMAG_RESIDUAL_TOL,
            });
        }
        lambdas.push(lambda.re);
    }
    SpectralDistribution::from_parts(momentum_grid(state.n_sites(), state.box_length()), lambdas, hbar)
}
