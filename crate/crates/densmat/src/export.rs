//! Deterministic text export and re-import.
//!
//! Everything the command-line front end writes flows through here: C-style
//! scientific formatting with signed two-digit exponents, header-first CSV,
//! and parsers that re-validate on the way back in, so a file this module
//! wrote is evidence of a valid object and not just of a successful write.
//! No timestamps, locales, or map iteration orders are involved anywhere;
//! identical inputs produce byte-identical text.

use crate::error::{Error, Result};
use crate::homogeneous::SpectralDistribution;
use crate::hydrogen::{RadialRow, RadialSpectrumTable};
use crate::lattice::ScanRow;

/// Tolerance for consistency checks on re-parsed derived columns
/// (cumulative sums, density estimates). Covers the rounding of the 12
/// fractional digits the writer keeps.
const REPARSE_TOL: f64 = 1e-9;

/// Format a float the way C's `%.12e` does: twelve fractional digits and an
/// exponent that always carries a sign and at least two digits.
pub fn format_sci(value: f64) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    let raw = format!("{value:.12e}");
    let (mantissa, exponent) = raw
        .split_once('e')
        .expect("float formatting always yields an exponent");
    let exp: i32 = exponent
        .parse()
        .expect("float exponent is a valid integer");
    format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
}

fn parse_field_f64(field: &str, line_no: usize) -> Result<f64> {
    let value: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Csv(format!("line {line_no}: bad number {field:?}")))?;
    if !value.is_finite() {
        return Err(Error::Csv(format!(
            "line {line_no}: non-finite number {field:?}"
        )));
    }
    Ok(value)
}

fn parse_field_usize(field: &str, line_no: usize) -> Result<usize> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Csv(format!("line {line_no}: bad count {field:?}")))
}

/// Split one CSV record into exactly `expected` fields.
fn split_record(line: &str, expected: usize, line_no: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != expected {
        return Err(Error::Csv(format!(
            "line {line_no}: expected {expected} fields, got {}",
            fields.len()
        )));
    }
    Ok(fields)
}

/// Iterate the non-header records of a CSV document, validating the header.
fn records<'t>(text: &'t str, header: &str) -> Result<Vec<(usize, &'t str)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim_end() == header => {}
        Some((_, first)) => {
            return Err(Error::Csv(format!(
                "expected header {header:?}, got {first:?}"
            )))
        }
        None => return Err(Error::Csv("empty document".into())),
    }
    let body: Vec<(usize, &str)> = lines
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    if body.is_empty() {
        return Err(Error::Csv("no data rows".into()));
    }
    Ok(body)
}

const SCHMIDT_HEADER: &str = "index,lambda,cumulative";
const SPECTRUM_HEADER: &str = "k,lambda,f_p";
const RADIAL_HEADER: &str = "k,omega_rho,f_p,weight";
const SCAN_HEADER: &str = "decay,rank,purity,entropy,delta_p,regime_flag";

/// Render a Schmidt spectrum as `index,lambda,cumulative` rows.
pub fn schmidt_csv(lambdas: &[f64]) -> String {
    let mut out = String::from(SCHMIDT_HEADER);
    out.push('\n');
    let mut cumulative = 0.0;
    for (index, &lambda) in lambdas.iter().enumerate() {
        cumulative += lambda;
        out.push_str(&format!(
            "{index},{},{}\n",
            format_sci(lambda),
            format_sci(cumulative)
        ));
    }
    out
}

/// Parse and re-validate a Schmidt spectrum document: contiguous indices,
/// non-increasing weights, a cumulative column that is the running sum, and
/// a total of 1.
pub fn parse_schmidt_csv(text: &str) -> Result<Vec<f64>> {
    let mut lambdas = Vec::new();
    let mut running = 0.0;
    for (line_no, line) in records(text, SCHMIDT_HEADER)? {
        let fields = split_record(line, 3, line_no)?;
        let index = parse_field_usize(fields[0], line_no)?;
        if index != lambdas.len() {
            return Err(Error::Csv(format!(
                "line {line_no}: index {index} out of order"
            )));
        }
        let lambda = parse_field_f64(fields[1], line_no)?;
        let cumulative = parse_field_f64(fields[2], line_no)?;
        if let Some(&prev) = lambdas.last() {
            if lambda > prev + REPARSE_TOL {
                return Err(Error::Csv(format!(
                    "line {line_no}: weights not sorted descending"
                )));
            }
        }
        running += lambda;
        if (cumulative - running).abs() > REPARSE_TOL {
            return Err(Error::Csv(format!(
                "line {line_no}: cumulative column inconsistent with running sum"
            )));
        }
        lambdas.push(lambda);
    }
    if (running - 1.0).abs() > REPARSE_TOL {
        return Err(Error::Csv(format!(
            "weights sum to {running}, expected 1"
        )));
    }
    Ok(lambdas)
}

/// Render a spectral distribution as `k,lambda,f_p` rows, where
/// `f_p = lambda / (hbar dk)` estimates the continuum momentum density.
pub fn spectrum_csv(spec: &SpectralDistribution) -> String {
    let k = spec.k_values();
    let dk = k[1] - k[0];
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for (&k, &lambda) in k.iter().zip(spec.lambdas()) {
        let f_p = lambda / (spec.hbar() * dk);
        out.push_str(&format!(
            "{},{},{}\n",
            format_sci(k),
            format_sci(lambda),
            format_sci(f_p)
        ));
    }
    out
}

/// Parse a spectrum document back into a [`SpectralDistribution`],
/// re-running the constructor validation and checking the density column
/// against the weights.
pub fn parse_spectrum_csv(text: &str, hbar: f64) -> Result<SpectralDistribution> {
    let mut k_values = Vec::new();
    let mut lambdas = Vec::new();
    let mut densities = Vec::new();
    for (line_no, line) in records(text, SPECTRUM_HEADER)? {
        let fields = split_record(line, 3, line_no)?;
        k_values.push(parse_field_f64(fields[0], line_no)?);
        lambdas.push(parse_field_f64(fields[1], line_no)?);
        densities.push(parse_field_f64(fields[2], line_no)?);
    }
    if k_values.len() < 2 {
        return Err(Error::Csv("spectrum needs at least two rows".into()));
    }
    let dk = k_values[1] - k_values[0];
    if dk <= 0.0 {
        return Err(Error::Csv("wavenumber column not increasing".into()));
    }
    for (i, (&lambda, &f_p)) in lambdas.iter().zip(&densities).enumerate() {
        let expected = lambda / (hbar * dk);
        if (f_p - expected).abs() > REPARSE_TOL * expected.abs().max(1.0) {
            return Err(Error::Csv(format!(
                "row {i}: density column inconsistent with weights"
            )));
        }
    }
    SpectralDistribution::from_parts(k_values, lambdas, hbar)
}

/// Render a radial occupation table as `k,omega_rho,f_p,weight` rows.
pub fn radial_csv(table: &RadialSpectrumTable) -> String {
    let mut out = String::from(RADIAL_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_sci(row.k),
            format_sci(row.omega_rho),
            format_sci(row.f_p),
            format_sci(row.weight)
        ));
    }
    out
}

/// Parse a radial table document back into its rows, checking that the
/// wavenumbers increase and every weight is positive.
pub fn parse_radial_csv(text: &str) -> Result<Vec<RadialRow>> {
    let mut rows: Vec<RadialRow> = Vec::new();
    for (line_no, line) in records(text, RADIAL_HEADER)? {
        let fields = split_record(line, 4, line_no)?;
        let row = RadialRow {
            k: parse_field_f64(fields[0], line_no)?,
            omega_rho: parse_field_f64(fields[1], line_no)?,
            f_p: parse_field_f64(fields[2], line_no)?,
            weight: parse_field_f64(fields[3], line_no)?,
        };
        if let Some(prev) = rows.last() {
            if row.k <= prev.k {
                return Err(Error::Csv(format!(
                    "line {line_no}: wavenumber column not increasing"
                )));
            }
        }
        if row.weight <= 0.0 || row.omega_rho < 0.0 {
            return Err(Error::Csv(format!(
                "line {line_no}: non-positive measure"
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Render scan results as `decay,rank,purity,entropy,delta_p,regime_flag`
/// rows; the regime flag is 1 inside the well-resolved window, 0 outside.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_sci(row.decay),
            row.schmidt_rank,
            format_sci(row.purity),
            format_sci(row.entropy),
            format_sci(row.delta_p),
            i32::from(row.in_regime)
        ));
    }
    out
}

/// Parse a scan document back into rows.
pub fn parse_scan_csv(text: &str) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for (line_no, line) in records(text, SCAN_HEADER)? {
        let fields = split_record(line, 6, line_no)?;
        let regime = match fields[5].trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::Csv(format!(
                    "line {line_no}: regime flag must be 0 or 1, got {other:?}"
                )))
            }
        };
        rows.push(ScanRow {
            decay: parse_field_f64(fields[0], line_no)?,
            schmidt_rank: parse_field_usize(fields[1], line_no)?,
            purity: parse_field_f64(fields[2], line_no)?,
            entropy: parse_field_f64(fields[3], line_no)?,
            delta_p: parse_field_f64(fields[4], line_no)?,
            in_regime: regime,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homogeneous::momentum_grid;
    use crate::hydrogen::{radial_spectrum_export, HydrogenParams};
    use crate::lattice::entanglement_vs_decay_scan;
    use approx::assert_relative_eq;

    #[test]
    fn scientific_format_matches_c_printf() {
        assert_eq!(format_sci(0.0), "0.000000000000e+00");
        assert_eq!(format_sci(1.0), "1.000000000000e+00");
        assert_eq!(format_sci(-0.5), "-5.000000000000e-01");
        assert_eq!(format_sci(3.141592653589793e-5), "3.141592653590e-05");
        assert_eq!(format_sci(-6.02214076e23), "-6.022140760000e+23");
        assert_eq!(format_sci(1e100), "1.000000000000e+100");
        assert_eq!(format_sci(9.999999999999e-100), "9.999999999999e-100");
    }

    #[test]
    fn schmidt_round_trip() {
        let lambdas = [0.7, 0.2, 0.1];
        let text = schmidt_csv(&lambdas);
        assert!(text.starts_with("index,lambda,cumulative\n"));
        let parsed = parse_schmidt_csv(&text).unwrap();
        assert_eq!(parsed.len(), 3);
        for (a, b) in parsed.iter().zip(&lambdas) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn schmidt_rejects_tampering() {
        let good = schmidt_csv(&[0.6, 0.4]);

        let reordered = good.replace("0,6.000000000000e-01", "1,6.000000000000e-01");
        assert!(matches!(parse_schmidt_csv(&reordered), Err(Error::Csv(_))));

        let broken_sum = schmidt_csv(&[0.6, 0.3]);
        assert!(matches!(parse_schmidt_csv(&broken_sum), Err(Error::Csv(_))));

        let bad_cumulative = good.replace(
            "1,4.000000000000e-01,1.000000000000e+00",
            "1,4.000000000000e-01,9.000000000000e-01",
        );
        assert!(matches!(
            parse_schmidt_csv(&bad_cumulative),
            Err(Error::Csv(_))
        ));

        assert!(matches!(parse_schmidt_csv(""), Err(Error::Csv(_))));
        assert!(matches!(
            parse_schmidt_csv("wrong,header,row\n0,1.0,1.0\n"),
            Err(Error::Csv(_))
        ));
    }

    #[test]
    fn spectrum_round_trip() {
        let k = momentum_grid(8, 10.0);
        let lambdas = vec![0.05, 0.1, 0.15, 0.3, 0.2, 0.1, 0.05, 0.05];
        let spec = SpectralDistribution::from_parts(k, lambdas, 2.0).unwrap();
        let text = spectrum_csv(&spec);
        let back = parse_spectrum_csv(&text, 2.0).unwrap();
        assert_eq!(back.len(), spec.len());
        for (a, b) in back.lambdas().iter().zip(spec.lambdas()) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
        for (a, b) in back.k_values().iter().zip(spec.k_values()) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn spectrum_rejects_inconsistent_density() {
        let k = momentum_grid(8, 10.0);
        let lambdas = vec![0.125; 8];
        let spec = SpectralDistribution::from_parts(k, lambdas, 1.0).unwrap();
        let text = spectrum_csv(&spec);
        // Densities were written for hbar = 1; reading with hbar = 2 breaks
        // the consistency between columns.
        assert!(matches!(
            parse_spectrum_csv(&text, 2.0),
            Err(Error::Csv(_))
        ));
    }

    #[test]
    fn radial_round_trip() {
        let params = HydrogenParams::default();
        let table = radial_spectrum_export(&params, 5.0, 32).unwrap();
        let text = radial_csv(&table);
        let rows = parse_radial_csv(&text).unwrap();
        assert_eq!(rows.len(), 32);
        for (a, b) in rows.iter().zip(&table.rows) {
            assert_relative_eq!(a.k, b.k, max_relative = 1e-12);
            assert_relative_eq!(a.omega_rho, b.omega_rho, max_relative = 1e-12);
            assert_relative_eq!(a.f_p, b.f_p, max_relative = 1e-12);
            assert_relative_eq!(a.weight, b.weight, max_relative = 1e-12);
        }

        let shuffled = text.replace("\n1.", "\n0.");
        assert!(parse_radial_csv(&shuffled).is_err());
    }

    #[test]
    fn scan_round_trip() {
        // Window of validity is [4 dx, L/8] = [1, 2] here, so the two decay
        // values land one outside and one inside and both flags appear.
        let rows = entanglement_vs_decay_scan(64, 16.0, &[0.8, 1.5], 1e-12).unwrap();
        assert!(!rows[0].in_regime);
        assert!(rows[1].in_regime);
        let text = scan_csv(&rows);
        let back = parse_scan_csv(&text).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in back.iter().zip(&rows) {
            assert_eq!(a.schmidt_rank, b.schmidt_rank);
            assert_eq!(a.in_regime, b.in_regime);
            assert_relative_eq!(a.delta_p, b.delta_p, max_relative = 1e-12);
            assert_relative_eq!(a.entropy, b.entropy, max_relative = 1e-12);
        }

        let bad_flag = text.replace(",1\n", ",2\n");
        assert_ne!(bad_flag, text);
        assert!(matches!(parse_scan_csv(&bad_flag), Err(Error::Csv(_))));
    }
}
