//! Adaptive one-dimensional quadrature.
//!
//! A 21-point Gauss-Kronrod rule with recursive bisection, plus a tangent
//! substitution for integrals over `[0, inf)`. The embedded 10-point Gauss
//! rule supplies the error estimate, with the usual conservative rescaling
//! against the variation of the integrand on the panel.

// The node and weight tables keep their full published precision even where
// it exceeds what an f64 can resolve.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

/// Positive Kronrod abscissae for the 21-point rule; the final entry is the
/// center node.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Weights of the embedded 10-point Gauss rule.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const MAX_DEPTH: usize = 60;

/// One Gauss-Kronrod panel: returns (value, error estimate, estimate of the
/// integral of |f|).
#[allow(clippy::needless_range_loop)]
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let half_abs = half.abs();

    let fc = f(center);
    let mut fv1 = [0.0f64; 10];
    let mut fv2 = [0.0f64; 10];
    let mut resg = 0.0;
    let mut resk = fc * WGK[10];
    let mut resabs = resk.abs();
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let absc = half * XGK[jtw];
        let f1 = f(center - absc);
        let f2 = f(center + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        let fsum = f1 + f2;
        resg += WG[j] * fsum;
        resk += WGK[jtw] * fsum;
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let absc = half * XGK[jtwm1];
        let f1 = f(center - absc);
        let f2 = f(center + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += WGK[jtwm1] * (f1 + f2);
        resabs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = resk * 0.5;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = resk * half;
    resabs *= half_abs;
    resasc *= half_abs;
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let round = 50.0 * f64::EPSILON * resabs;
    if round > err {
        err = round;
    }
    (value, err, resabs)
}

/// Recursive bisection with a halving tolerance budget. Returns the panel
/// value together with the accumulated error estimate and |f| mass, so the
/// caller can certify the total honestly.
fn adaptive_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> Result<(f64, f64, f64)> {
    let (value, err, resabs) = gk21(f, a, b);
    // A panel whose error estimate sits at the roundoff floor cannot be
    // improved by splitting, only made more expensive; accept it and let
    // the top-level budget check decide whether the sum is good enough.
    if err <= tol || err <= 100.0 * f64::EPSILON * resabs {
        return Ok((value, err, resabs));
    }
    if depth == 0 {
        return Err(Error::QuadratureNoConvergence { err, tol });
    }
    let mid = 0.5 * (a + b);
    if !(a < mid && mid < b) {
        // The panel cannot be split further in floating point.
        return Err(Error::QuadratureNoConvergence { err, tol });
    }
    let left = adaptive_rec(f, a, mid, 0.5 * tol, depth - 1)?;
    let right = adaptive_rec(f, mid, b, 0.5 * tol, depth - 1)?;
    Ok((
        left.0 + right.0,
        left.1 + right.1,
        left.2 + right.2,
    ))
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    assert!(tol > 0.0, "quadrature tolerance must be positive");
    if a == b {
        return Ok(0.0);
    }
    let (value, err, _) = adaptive_rec(&f, a, b, tol, MAX_DEPTH)?;
    if err <= tol {
        Ok(value)
    } else {
        Err(Error::QuadratureNoConvergence { err, tol })
    }
}

/// Integrates `f` over `[0, inf)` to absolute tolerance `tol`.
///
/// Uses `x = tan(theta)`, which maps the half line onto `[0, pi/2)` and
/// turns algebraic tails into smooth integrands; the integrand must decay
/// fast enough that `f(x) * x^2 -> 0`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    integrate(
        |theta| {
            let t = theta.tan();
            f(t) * (1.0 + t * t)
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        tol,
    )
}
