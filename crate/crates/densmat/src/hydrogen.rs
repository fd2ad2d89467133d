//! Closed-form hydrogen ground-state correlation and momentum structure.
//!
//! An electron-proton pair bound in the 1s state and drifting freely with
//! total momentum `P` is the one system where everything the rest of this
//! crate computes numerically exists in closed form. Tracing out the proton
//! leaves the electron in a homogeneous mixed state: its position-space
//! autocorrelation is [`autocorrelation_1s`], the matching volume-scaled
//! momentum occupation is [`rho_tilde_int`], the laboratory-frame momentum
//! density is [`f_lab`], and the momentum spread is exactly `hbar / a0`
//! regardless of `P`. The module exposes those formulas together with
//! quadrature companions that recompute each claim from scratch, so the
//! analytic layer can be cross-checked against the lattice layer and against
//! itself.
//!
//! A note on the occupation denominator: [`rho_tilde_int`] uses
//! `(1 + (a0 k)^2)^4`. The fourth power is not adjustable. It is forced by
//! the unit-trace condition (the momentum integral of the occupation must be
//! exactly 1) and independently by the Fourier transform of the
//! position-space autocorrelation; with a first-power denominator the trace
//! integral diverges linearly in the momentum cutoff. A regression test pins
//! both facts down.
//!
//! Internals run in scaled units (`hbar = a0 = 1`); unit conversions happen
//! only at the public interface. This keeps every quadrature on an O(1)
//! integrand and away from catastrophic exponent ranges.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::homogeneous::SpectralDistribution;
use crate::quad;

/// CODATA proton-electron mass ratio used by [`HydrogenParams::default`].
pub const PROTON_ELECTRON_MASS_RATIO: f64 = 1836.15267;

/// Central moments beyond this order have divergent continuum integrals
/// (the integrand falls off only one power faster than `1/p`), so the moment
/// interfaces refuse them rather than return cutoff-dependent numbers.
pub const MAX_CENTRAL_MOMENT_ORDER: usize = 4;

/// Minimum bin count accepted by [`radial_spectrum_export`].
pub const MIN_RADIAL_BINS: usize = 16;

/// Tail mass above which [`radial_spectrum_export`] attaches a precision
/// warning to its output.
pub const RADIAL_TAIL_WARN: f64 = 1e-3;

/// Absolute tolerance for the outer integral of nested moment quadratures.
const OUTER_QUAD_TOL: f64 = 1e-10;

/// Absolute tolerance for the inner angular integral of nested quadratures.
const INNER_QUAD_TOL: f64 = 1e-13;

/// Absolute tolerance for the cutoff tail-mass estimate.
const TAIL_QUAD_TOL: f64 = 1e-12;

/// Physical parameters of the bound pair.
///
/// All four scalars must be positive; the total momentum only has to be
/// finite. [`HydrogenParams::default`] gives scaled units (`a0 = hbar = m_e =
/// 1`) with the physical proton-electron mass ratio and a pair at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenParams {
    /// Bohr radius, the correlation length of the pair.
    pub a0: f64,
    /// Reduced Planck constant.
    pub hbar: f64,
    /// Electron mass.
    pub m_e: f64,
    /// Proton mass.
    pub m_p: f64,
    /// Total momentum of the pair in the laboratory frame.
    pub total_momentum: [f64; 3],
}

impl Default for HydrogenParams {
    fn default() -> Self {
        Self {
            a0: 1.0,
            hbar: 1.0,
            m_e: 1.0,
            m_p: PROTON_ELECTRON_MASS_RATIO,
            total_momentum: [0.0; 3],
        }
    }
}

impl HydrogenParams {
    /// Validating constructor. Rejects non-positive scales and masses and a
    /// non-finite total momentum.
    pub fn new(
        a0: f64,
        hbar: f64,
        m_e: f64,
        m_p: f64,
        total_momentum: [f64; 3],
    ) -> Result<Self> {
        for (name, value) in [("a0", a0), ("hbar", hbar), ("m_e", m_e), ("m_p", m_p)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::NonPositive { name, got: value });
            }
        }
        if total_momentum.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                context: "total momentum",
            });
        }
        Ok(Self {
            a0,
            hbar,
            m_e,
            m_p,
            total_momentum,
        })
    }

    /// Total mass of the pair.
    pub fn total_mass(&self) -> f64 {
        self.m_e + self.m_p
    }

    /// Reduced mass, satisfying `1/m_r = 1/m_e + 1/m_p`.
    pub fn reduced_mass(&self) -> f64 {
        self.m_e * self.m_p / self.total_mass()
    }

    /// Electron's share of the total mass, `m_e / (m_e + m_p)`.
    pub fn electron_fraction(&self) -> f64 {
        self.m_e / self.total_mass()
    }

    /// Momentum the electron inherits from the drifting pair,
    /// `(m_e / M) P`. The laboratory-frame density is the intrinsic density
    /// rigidly shifted by this vector.
    pub fn electron_drift(&self) -> [f64; 3] {
        let f = self.electron_fraction();
        [
            f * self.total_momentum[0],
            f * self.total_momentum[1],
            f * self.total_momentum[2],
        ]
    }
}

/// Ground-state radial wavefunction `exp(-r/a0) / sqrt(pi a0^3)`.
pub fn psi_1s(r: f64, a0: f64) -> f64 {
    assert!(r >= 0.0, "radius must be non-negative, got {r}");
    assert!(a0 > 0.0, "Bohr radius must be positive, got {a0}");
    (-r / a0).exp() / (PI * a0.powi(3)).sqrt()
}

/// Overlap of two ground-state orbitals displaced by `s`.
///
/// This is the autocorrelation `integral of psi(|y + s|) psi(|y|) d^3 y`,
/// which is also the reduced electron correlation function of the pair:
/// `exp(-s/a0) (1 + s/a0 + s^2/(3 a0^2))`. The tests confirm the closed form
/// against a two-center quadrature oracle before anything downstream trusts
/// it.
pub fn autocorrelation_1s(s: f64, a0: f64) -> f64 {
    assert!(s >= 0.0, "separation must be non-negative, got {s}");
    assert!(a0 > 0.0, "Bohr radius must be positive, got {a0}");
    let x = s / a0;
    (-x).exp() * (1.0 + x + x * x / 3.0)
}

/// Volume-scaled momentum occupation `64 pi a0^3 / (1 + (a0 k)^2)^4`.
///
/// The box volume cancels against the mode density in every observable, so
/// only this product is exposed. See the module docs for why the denominator
/// exponent is 4 and cannot be anything else.
pub fn rho_tilde_int(k: f64, a0: f64) -> f64 {
    assert!(k >= 0.0, "wavenumber must be non-negative, got {k}");
    assert!(a0 > 0.0, "Bohr radius must be positive, got {a0}");
    let x = a0 * k;
    64.0 * PI * a0.powi(3) / (1.0 + x * x).powi(4)
}

/// Intrinsic momentum-space probability density,
/// `rho_tilde_int(p / hbar) / (2 pi hbar)^3`.
///
/// Normalized so `4 pi * integral of f_int(p) p^2 dp = 1`.
pub fn f_int(p: f64, a0: f64, hbar: f64) -> f64 {
    assert!(hbar > 0.0, "hbar must be positive, got {hbar}");
    rho_tilde_int(p / hbar, a0) / (2.0 * PI * hbar).powi(3)
}

/// Laboratory-frame momentum density: the intrinsic density evaluated at
/// `|p - (m_e / M) P|`. A rigid shift, so every central moment matches the
/// intrinsic ones.
pub fn f_lab(p: [f64; 3], params: &HydrogenParams) -> f64 {
    let drift = params.electron_drift();
    let dx = p[0] - drift[0];
    let dy = p[1] - drift[1];
    let dz = p[2] - drift[2];
    f_int(
        (dx * dx + dy * dy + dz * dz).sqrt(),
        params.a0,
        params.hbar,
    )
}

/// Momentum spread of the pair, `hbar / a0` in closed form.
///
/// [`delta_p_quadrature`] recomputes the same number from the density itself.
pub fn delta_p(params: &HydrogenParams) -> f64 {
    params.hbar / params.a0
}

/// Momentum spread recomputed as the square root of the second central
/// moment of [`f_lab`], by nested quadrature. Agrees with [`delta_p`] to
/// quadrature accuracy at any total momentum.
pub fn delta_p_quadrature(params: &HydrogenParams) -> Result<f64> {
    Ok(lab_frame_central_moment(params, 2)?.sqrt())
}

/// Mean momentum vector of [`f_lab`] by quadrature.
///
/// The component along the drift axis is integrated numerically; transverse
/// components vanish identically by axial symmetry. Expected value is
/// `(m_e / M) P`.
pub fn mean_momentum(params: &HydrogenParams) -> Result<[f64; 3]> {
    let drift = params.electron_drift();
    let drift_norm =
        (drift[0] * drift[0] + drift[1] * drift[1] + drift[2] * drift[2]).sqrt();
    if drift_norm == 0.0 {
        // Isotropic density: the angular integral of the mean is zero by
        // symmetry, no axis to integrate along.
        return Ok([0.0; 3]);
    }
    let scale = params.hbar / params.a0;
    let mean_axial = lab_mean_scaled(drift_norm / scale)? * scale;
    Ok([
        drift[0] / drift_norm * mean_axial,
        drift[1] / drift_norm * mean_axial,
        drift[2] / drift_norm * mean_axial,
    ])
}

/// Central moment `<|p - <p>|^order>` of [`f_lab`] by nested quadrature,
/// centered on the quadrature mean rather than the closed-form drift so the
/// whole computation stays an independent check.
///
/// Orders run from 1 to [`MAX_CENTRAL_MOMENT_ORDER`]; the result is
/// independent of the total momentum because the laboratory density is a
/// rigid shift of the intrinsic one.
pub fn lab_frame_central_moment(params: &HydrogenParams, order: usize) -> Result<f64> {
    if order == 0 || order > MAX_CENTRAL_MOMENT_ORDER {
        return Err(Error::BadMomentOrder {
            got: order,
            max: MAX_CENTRAL_MOMENT_ORDER,
        });
    }
    let scale = params.hbar / params.a0;
    let drift = params.electron_drift();
    let q = (drift[0] * drift[0] + drift[1] * drift[1] + drift[2] * drift[2]).sqrt()
        / scale;
    let center = if q == 0.0 { 0.0 } else { lab_mean_scaled(q)? };
    let moment = lab_frame_integral(q, |u, mu| {
        let d2 = u * u + center * center - 2.0 * u * center * mu;
        d2.max(0.0).sqrt().powi(order as i32)
    })?;
    Ok(moment * scale.powi(order as i32))
}

/// Dimensionless intrinsic density `g(u) = 8 / (pi^2 (1 + u^2)^4)`, with
/// `4 pi * integral of g(u) u^2 du = 1`.
fn scaled_density(u: f64) -> f64 {
    8.0 / (PI * PI * (1.0 + u * u).powi(4))
}

/// Axial mean `<u mu>` of the scaled density shifted by `q` along the axis.
fn lab_mean_scaled(q: f64) -> Result<f64> {
    lab_frame_integral(q, |u, mu| u * mu)
}

/// Weighted integral `2 pi * int du u^2 int dmu h(u, mu) g(|u - q e_z|)` of
/// the shifted scaled density over momentum space, in spherical coordinates
/// about the drift axis. Inner angular integrals that fail to converge
/// poison the outer integrand with NaN, which the outer adaptive pass then
/// reports as a quadrature failure instead of returning a silently wrong
/// number.
fn lab_frame_integral<H>(q: f64, h: H) -> Result<f64>
where
    H: Fn(f64, f64) -> f64,
{
    let outer = |u: f64| -> f64 {
        let inner = quad::integrate(
            |mu: f64| {
                let shifted = (u * u + q * q - 2.0 * u * q * mu).max(0.0).sqrt();
                h(u, mu) * scaled_density(shifted)
            },
            -1.0,
            1.0,
            INNER_QUAD_TOL,
        );
        match inner {
            Ok(value) => 2.0 * PI * u * u * value,
            Err(_) => f64::NAN,
        }
    };
    quad::integrate_half_line(outer, OUTER_QUAD_TOL)
}

/// Occupation mass beyond the cutoff `k_max`, as a fraction of the unit
/// trace. Dimensionless: depends only on `a0 * k_max`.
fn tail_mass_beyond(a0: f64, k_max: f64) -> Result<f64> {
    let x_max = a0 * k_max;
    quad::integrate_half_line(
        |t| {
            let x = x_max + t;
            32.0 / PI * x * x / (1.0 + x * x).powi(4)
        },
        TAIL_QUAD_TOL,
    )
}

/// One midpoint-rule shell of the discretized radial occupation.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRow {
    /// Shell wavenumber, the midpoint of the bin.
    pub k: f64,
    /// Volume-scaled occupation [`rho_tilde_int`] at `k`.
    pub omega_rho: f64,
    /// Momentum density [`f_int`] at `p = hbar k`.
    pub f_p: f64,
    /// Radial measure `4 pi k^2 dk / (2 pi)^3`; `weight * omega_rho` is the
    /// shell's share of the unit trace.
    pub weight: f64,
}

/// Discretized radial occupation table produced by
/// [`radial_spectrum_export`].
///
/// Weighted sums over the rows approximate the continuum momentum moments to
/// midpoint-rule accuracy (second order in the bin width). `trace` is the
/// order-0 sum, `tail_mass` the occupation mass the cutoff left out, and
/// `warning` is populated when that loss is large enough to matter.
#[derive(Debug, Clone)]
pub struct RadialSpectrumTable {
    pub rows: Vec<RadialRow>,
    /// Sum of `weight * omega_rho` over the rows; approaches `1 - tail_mass`
    /// quadratically in the bin width.
    pub trace: f64,
    /// Exact occupation mass beyond the cutoff, by quadrature.
    pub tail_mass: f64,
    /// Precision warning when `tail_mass` exceeds [`RADIAL_TAIL_WARN`].
    pub warning: Option<String>,
    /// Planck constant the momenta are measured with.
    pub hbar: f64,
}

impl RadialSpectrumTable {
    /// Weighted momentum moment `sum of weight * omega_rho * (hbar k)^order`
    /// over the shells. Order 0 reproduces `trace`; order 2 approximates
    /// `(hbar / a0)^2`. Orders above [`MAX_CENTRAL_MOMENT_ORDER`] are
    /// rejected because their continuum counterparts diverge.
    pub fn weighted_moment(&self, order: usize) -> Result<f64> {
        if order > MAX_CENTRAL_MOMENT_ORDER {
            return Err(Error::BadMomentOrder {
                got: order,
                max: MAX_CENTRAL_MOMENT_ORDER,
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.weight * row.omega_rho * (self.hbar * row.k).powi(order as i32))
            .sum())
    }

    /// Bridge into the discrete spectral tooling: mirror each shell onto
    /// `+k` and `-k` with half its mass, then renormalize so the weights sum
    /// to exactly 1.
    ///
    /// Splitting the shells evenly preserves every even moment and zeroes
    /// the odd ones, which is exact for this isotropic density. The
    /// renormalization redistributes the (small) trace deficit uniformly, so
    /// moments of the result carry a relative error on the order of
    /// `tail_mass` plus the midpoint discretization error.
    pub fn to_signed_spectrum(&self) -> Result<SpectralDistribution> {
        let n = self.rows.len();
        let mut k_values = Vec::with_capacity(2 * n);
        let mut lambdas = Vec::with_capacity(2 * n);
        for row in self.rows.iter().rev() {
            k_values.push(-row.k);
            lambdas.push(0.5 * row.weight * row.omega_rho);
        }
        for row in &self.rows {
            k_values.push(row.k);
            lambdas.push(0.5 * row.weight * row.omega_rho);
        }
        let total: f64 = lambdas.iter().sum();
        for lambda in &mut lambdas {
            *lambda /= total;
        }
        SpectralDistribution::from_parts(k_values, lambdas, self.hbar)
    }
}

/// Discretize the radial occupation onto `n_bins` midpoint shells covering
/// `[0, k_max]`.
///
/// Requires `k_max > 0` and at least [`MIN_RADIAL_BINS`] bins. When the
/// cutoff leaves more than [`RADIAL_TAIL_WARN`] of the occupation outside
/// the table, the result carries a warning rather than an error: the table
/// is still exactly what was asked for, it just cannot reproduce continuum
/// moments to full precision.
pub fn radial_spectrum_export(
    params: &HydrogenParams,
    k_max: f64,
    n_bins: usize,
) -> Result<RadialSpectrumTable> {
    if !k_max.is_finite() || k_max <= 0.0 {
        return Err(Error::NonPositive {
            name: "k_max",
            got: k_max,
        });
    }
    if n_bins < MIN_RADIAL_BINS {
        return Err(Error::TooFewBins {
            got: n_bins,
            min: MIN_RADIAL_BINS,
        });
    }
    let dk = k_max / n_bins as f64;
    let mut rows = Vec::with_capacity(n_bins);
    let mut trace = 0.0;
    for i in 0..n_bins {
        let k = (i as f64 + 0.5) * dk;
        let omega_rho = rho_tilde_int(k, params.a0);
        let f_p = f_int(params.hbar * k, params.a0, params.hbar);
        let weight = 4.0 * PI * k * k * dk / (2.0 * PI).powi(3);
        trace += weight * omega_rho;
        rows.push(RadialRow {
            k,
            omega_rho,
            f_p,
            weight,
        });
    }
    let tail_mass = tail_mass_beyond(params.a0, k_max)?;
    let warning = (tail_mass > RADIAL_TAIL_WARN).then(|| {
        format!(
            "cutoff k_max = {k_max:.6e} leaves {tail_mass:.3e} of the occupation \
             mass outside the table; moments computed from it will be biased low"
        )
    });
    Ok(RadialSpectrumTable {
        rows,
        trace,
        tail_mass,
        warning,
        hbar: params.hbar,
    })
}
