//! Command-line front end for the density-operator toolkit.
//!
//! Three subcommands cover the library's workflows:
//!
//! - `schmidt` ingests a pure bipartite state from JSON and emits its
//!   Schmidt spectrum as CSV plus an entanglement summary as JSON;
//! - `hydrogen` tabulates the radial momentum distribution of the
//!   exponentially correlated pair and reports its spread and mean;
//! - `lattice` builds the periodic two-particle analog and either emits the
//!   full momentum spectrum (single decay length) with a cross-validation
//!   report, or a scan table over several decay lengths.
//!
//! Output is deterministic byte for byte: identical arguments produce
//! identical files. Every float is rendered in `%.12e` form, both in CSV
//! and inside JSON summaries, and every summary carries `format_version`.
//! Exit codes: 0 success, 2 validation error (arguments, files, broken
//! invariants), 3 numerical failure (non-convergence, spoiled spectra).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use densmat::bipartite::{self, DEFAULT_RANK_TOL};
use densmat::hydrogen::{self, HydrogenParams, PROTON_ELECTRON_MASS_RATIO};
use densmat::{export, homogeneous, lattice, Error};

/// Upper bound every user-supplied tolerance must respect.
const MAX_TOL: f64 = 1e-3;

#[derive(Parser)]
#[command(
    name = "densmat",
    version,
    about = "Entanglement spectra and momentum distributions of correlated pairs",
    long_about = "Analyze pure bipartite quantum states: Schmidt spectra from JSON \
                  input, the momentum distribution of an exponentially correlated \
                  continuum pair, and its periodic lattice analog.\n\n\
                  All numeric output uses the %.12e format. Tolerances passed via \
                  --tol must lie in (0, 1e-3]. Exit codes: 0 success, 2 validation \
                  error, 3 numerical failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schmidt-analyze a pure bipartite state read from a JSON file
    Schmidt(SchmidtArgs),
    /// Radial momentum distribution of the correlated continuum pair
    Hydrogen(HydrogenArgs),
    /// Periodic two-particle lattice: full spectrum or decay scan
    Lattice(LatticeArgs),
}

#[derive(Args)]
struct SchmidtArgs {
    /// Input state: JSON with fields dim_u, dim_v, re, im (row-major)
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Spectrum CSV (index,lambda,cumulative); "-" writes to stdout
    #[arg(long, default_value = "-", value_name = "FILE")]
    out: PathBuf,
    /// JSON summary (rank, purity, entropy, participation); "-" for stdout
    #[arg(long, default_value = "-", value_name = "FILE")]
    summary: PathBuf,
    /// Rank tolerance: weights at or below it do not count toward the
    /// Schmidt rank; must lie in (0, 1e-3]
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    tol: f64,
}

#[derive(Args)]
struct HydrogenArgs {
    /// Correlation length of the pair (the 1s Bohr radius)
    #[arg(long, default_value_t = 1.0)]
    a0: f64,
    /// Planck constant the momenta are measured with
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Heavy-to-light mass ratio; the light mass is fixed to 1
    #[arg(long, default_value_t = PROTON_ELECTRON_MASS_RATIO)]
    mass_ratio: f64,
    /// Total pair momentum, three comma-separated components
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0,0,0",
        value_name = "PX,PY,PZ",
        allow_hyphen_values = true
    )]
    momentum: Vec<f64>,
    /// Radial cutoff for the exported table (same units as 1/a0); a short
    /// cutoff is allowed but earns a precision warning in the summary
    #[arg(long, default_value_t = 20.0)]
    k_max: f64,
    /// Number of radial shells in the exported table (at least 16)
    #[arg(long, default_value_t = 256)]
    n_bins: usize,
    /// Radial table CSV (k,omega_rho,f_p,weight); "-" writes to stdout
    #[arg(long, default_value = "-", value_name = "FILE")]
    out: PathBuf,
    /// JSON summary (delta_p, trace, mean momentum); "-" for stdout
    #[arg(long, default_value = "-", value_name = "FILE")]
    summary: PathBuf,
}

#[derive(Args)]
struct LatticeArgs {
    /// Number of sites per particle (even, between 8 and 1024)
    #[arg(long, default_value_t = 64)]
    n_sites: usize,
    /// Periodic box length
    #[arg(long, default_value_t = 40.0)]
    box_length: f64,
    /// Correlation decay length; several comma-separated values switch to
    /// scan mode (one CSV row per value, resting pair)
    #[arg(long, value_delimiter = ',', required = true, value_name = "A[,A...]")]
    decay: Vec<f64>,
    /// Center-of-mass momentum index in units of 2 pi / box_length; must be
    /// commensurate with the mass split (single-decay mode only)
    #[arg(long, default_value_t = 0)]
    com_index: i64,
    /// Heavy-to-light mass ratio of the pair
    #[arg(long, default_value_t = 1.0)]
    mass_ratio: f64,
    /// Rank tolerance for the Schmidt count; must lie in (0, 1e-3]
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    tol: f64,
    /// Data CSV: spectrum (k,lambda,f_p) or scan table; "-" for stdout
    #[arg(long, default_value = "-", value_name = "FILE")]
    out: PathBuf,
    /// JSON summary; "-" writes to stdout
    #[arg(long, default_value = "-", value_name = "FILE")]
    summary: PathBuf,
}

/// A failed run: what to print and which exit code to report.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_numerical() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

/// JSON summary builder with a fixed field order and `%.12e` floats, so the
/// output is deterministic and matches the CSV number format.
struct Summary {
    fields: Vec<(&'static str, String)>,
}

impl Summary {
    fn new(command: &'static str) -> Self {
        let mut s = Self { fields: Vec::new() };
        s.raw("format_version", "1".to_string());
        s.text("command", command);
        s
    }

    fn raw(&mut self, key: &'static str, rendered: String) {
        self.fields.push((key, rendered));
    }

    fn int(&mut self, key: &'static str, value: impl Into<i128>) {
        self.raw(key, value.into().to_string());
    }

    fn num(&mut self, key: &'static str, value: f64) {
        self.raw(key, export::format_sci(value));
    }

    fn text(&mut self, key: &'static str, value: &str) {
        self.raw(key, serde_json::to_string(value).expect("strings serialize"));
    }

    fn num_array(&mut self, key: &'static str, values: &[f64]) {
        let body: Vec<String> = values.iter().map(|&v| export::format_sci(v)).collect();
        self.raw(key, format!("[{}]", body.join(", ")));
    }

    fn warnings(&mut self, warnings: &[String]) {
        let body: Vec<String> = warnings
            .iter()
            .map(|w| serde_json::to_string(w).expect("strings serialize"))
            .collect();
        self.raw("warnings", format!("[{}]", body.join(", ")));
    }

    fn finish(&self) -> String {
        let mut out = String::from("{\n");
        for (i, (key, value)) in self.fields.iter().enumerate() {
            out.push_str("  \"");
            out.push_str(key);
            out.push_str("\": ");
            out.push_str(value);
            out.push_str(if i + 1 == self.fields.len() { "\n" } else { ",\n" });
        }
        out.push_str("}\n");
        out
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if !(tol > 0.0 && tol <= MAX_TOL) {
        return Err(Failure::validation(format!(
            "rank tolerance {tol:e} must lie in (0, {MAX_TOL:e}]"
        )));
    }
    Ok(())
}

/// Write `content` to the path, with `-` standing for stdout.
fn write_output(target: &Path, content: &str) -> Result<(), Failure> {
    if target == Path::new("-") {
        std::io::stdout()
            .lock()
            .write_all(content.as_bytes())
            .map_err(|e| Failure::validation(format!("cannot write to stdout: {e}")))
    } else {
        fs::write(target, content)
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", target.display())))
    }
}

fn run_schmidt(args: &SchmidtArgs) -> Result<(), Failure> {
    check_tol(args.tol)?;
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", args.input.display())))?;
    let (state, norm_warning) = bipartite::state_from_json(&text)?;
    let sd = bipartite::schmidt(&state, args.tol)?;
    let report = sd.entanglement_report();

    write_output(&args.out, &export::schmidt_csv(&sd.lambdas))?;

    let mut summary = Summary::new("schmidt");
    summary.int("dim_u", state.dim_u() as i128);
    summary.int("dim_v", state.dim_v() as i128);
    summary.int("rank", report.schmidt_rank as i128);
    summary.num("purity", report.purity);
    summary.num("entropy", report.entropy);
    summary.num("participation", report.participation);
    let warnings: Vec<String> = norm_warning.into_iter().collect();
    summary.warnings(&warnings);
    write_output(&args.summary, &summary.finish())
}

fn run_hydrogen(args: &HydrogenArgs) -> Result<(), Failure> {
    if args.momentum.len() != 3 {
        return Err(Failure::validation(format!(
            "--momentum needs exactly three components, got {}",
            args.momentum.len()
        )));
    }
    let momentum = [args.momentum[0], args.momentum[1], args.momentum[2]];
    let params = HydrogenParams::new(args.a0, args.hbar, 1.0, args.mass_ratio, momentum)?;

    let table = hydrogen::radial_spectrum_export(&params, args.k_max, args.n_bins)?;
    write_output(&args.out, &export::radial_csv(&table))?;

    let spread = hydrogen::delta_p_quadrature(&params)?;
    let mean = hydrogen::mean_momentum(&params)?;

    let mut summary = Summary::new("hydrogen");
    summary.num("a0", args.a0);
    summary.num("hbar", args.hbar);
    summary.num("mass_ratio", args.mass_ratio);
    summary.num_array("total_momentum", &momentum);
    summary.num("k_max", args.k_max);
    summary.int("n_bins", args.n_bins as i128);
    summary.num("delta_p", spread);
    summary.num("delta_p_closed_form", hydrogen::delta_p(&params));
    summary.num_array("mean_momentum", &mean);
    summary.num("trace", table.trace);
    summary.num("tail_mass", table.tail_mass);
    let warnings: Vec<String> = table.warning.clone().into_iter().collect();
    summary.warnings(&warnings);
    write_output(&args.summary, &summary.finish())
}

/// Largest gap between the two eigenvalue routes, compared as descending
/// multisets.
fn max_spectral_deviation(schmidt_lambdas: &[f64], spectral_lambdas: &[f64]) -> f64 {
    let mut a = schmidt_lambdas.to_vec();
    let mut b = spectral_lambdas.to_vec();
    a.sort_by(|x, y| y.partial_cmp(x).expect("finite weights"));
    b.sort_by(|x, y| y.partial_cmp(x).expect("finite weights"));
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn run_lattice(args: &LatticeArgs) -> Result<(), Failure> {
    check_tol(args.tol)?;
    if let [decay] = args.decay[..] {
        let state = lattice::build_state(
            args.n_sites,
            args.box_length,
            decay,
            args.com_index,
            args.mass_ratio,
        )?;
        let corr = lattice::reduced_electron_correlation(&state)?;
        let spectrum = homogeneous::spectrum(&corr, 1.0)?;
        write_output(&args.out, &export::spectrum_csv(&spectrum))?;

        let sd = bipartite::schmidt(state.state(), args.tol)?;
        let report = sd.entanglement_report();
        let deviation = max_spectral_deviation(&sd.lambdas, spectrum.lambdas());

        let mut summary = Summary::new("lattice");
        summary.text("mode", "spectrum");
        summary.int("n_sites", args.n_sites as i128);
        summary.num("box_length", args.box_length);
        summary.num("decay", decay);
        summary.int("com_index", args.com_index);
        summary.num("mass_ratio", args.mass_ratio);
        summary.int("rank", report.schmidt_rank as i128);
        summary.num("purity", report.purity);
        summary.num("entropy", report.entropy);
        summary.num("delta_p", spectrum.occupation_stddev()?);
        summary.num("max_spectral_deviation", deviation);
        summary.warnings(&[]);
        write_output(&args.summary, &summary.finish())
    } else {
        let mut warnings = Vec::new();
        if args.com_index != 0 {
            warnings.push(format!(
                "scan mode analyzes the resting pair; --com-index {} was ignored",
                args.com_index
            ));
        }
        let rows =
            lattice::entanglement_vs_decay_scan(args.n_sites, args.box_length, &args.decay, args.tol)?;
        write_output(&args.out, &export::scan_csv(&rows))?;

        let in_regime = rows.iter().filter(|r| r.in_regime).count();
        let mut summary = Summary::new("lattice");
        summary.text("mode", "scan");
        summary.int("n_sites", args.n_sites as i128);
        summary.num("box_length", args.box_length);
        summary.num_array("decays", &args.decay);
        summary.int("rows", rows.len() as i128);
        summary.int("rows_in_regime", in_regime as i128);
        summary.warnings(&warnings);
        write_output(&args.summary, &summary.finish())
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Schmidt(args) => run_schmidt(args),
        Command::Hydrogen(args) => run_hydrogen(args),
        Command::Lattice(args) => run_lattice(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_codes_follow_the_error_taxonomy() {
        let validation = Failure::from(Error::OddSiteCount { got: 15 });
        assert_eq!(validation.code, 2);
        let numerical = Failure::from(Error::QuadratureNoConvergence { err: 1.0, tol: 0.5 });
        assert_eq!(numerical.code, 3);
    }

    #[test]
    fn tolerance_window_is_half_open() {
        assert!(check_tol(1e-3).is_ok());
        assert!(check_tol(1e-12).is_ok());
        assert!(check_tol(0.0).is_err());
        assert!(check_tol(-1e-6).is_err());
        assert!(check_tol(2e-3).is_err());
        assert!(check_tol(f64::NAN).is_err());
    }

    #[test]
    fn summary_is_valid_json_with_stable_field_order() {
        let mut summary = Summary::new("schmidt");
        summary.int("rank", 2);
        summary.num("purity", 0.5);
        summary.warnings(&["watch out".to_string()]);
        let text = summary.finish();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["format_version"], 1);
        assert_eq!(value["command"], "schmidt");
        assert_eq!(value["rank"], 2);
        assert_eq!(value["purity"].as_f64().unwrap(), 0.5);
        assert_eq!(value["warnings"][0], "watch out");
        let keys: Vec<usize> = ["format_version", "command", "rank", "purity", "warnings"]
            .iter()
            .map(|k| text.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn spectral_deviation_compares_multisets() {
        let dev = max_spectral_deviation(&[0.25, 0.75], &[0.75, 0.2501]);
        assert!((dev - 1e-4).abs() < 1e-12);
    }
}
