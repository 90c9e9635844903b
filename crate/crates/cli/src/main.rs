//! Command-line front end for the sphaural toolkit: simulate and encode
//! plane-wave scenes on a rigid spherical array, re-express coefficient
//! files between convention rows, render them binaurally through sampled
//! transfer-function sets, and run seeded self checks.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid data, 3 self-check
//! tolerance failure.

mod formats;
mod selftest;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use sphaural::hrtf::{encode_hrtf_for_convention, synth_hrtf};
use sphaural::render::{convert_convention, render};
use sphaural::sh::{make_gauss_grid, MAX_ORDER};
use sphaural::sphere::{simulate_surface_pressure, sma_encode};
use sphaural::{
    BinauralOutput, CoeffKind, Complex64, ConventionSystem, Ear, PlaneWave, PlaneWaveScene,
    RadialFilterSpec, ShCoefficients, SphereSpec,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sphaural",
    version,
    about = "Spherical-array binaural rendering toolkit",
    long_about = "Simulates plane-wave scenes on a rigid spherical microphone array, encodes \
                  them into spherical-harmonic sound-field coefficients under one of five \
                  published convention rows, converts coefficient files between rows, and \
                  renders them binaurally through sampled ear transfer functions.\n\n\
                  Directions live in a right-handed frame: x forward, y left, z up; \
                  colatitude is measured from +z and angles are radians."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scene on a rigid spherical array and encode the sound field
    Encode {
        /// Scene description JSON: frequencies_hz plus waves with
        /// colatitude_rad, azimuth_rad, reference, and one re,im amplitude
        /// pair per frequency
        scene: PathBuf,
        /// Convention row (1-5) the coefficients are produced under
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        row: u8,
        /// Expansion order of the encoded field
        #[arg(long, default_value_t = 4)]
        order: u32,
        /// Quadrature grid order of the simulated array (default: order + 8)
        #[arg(long)]
        grid_order: Option<u32>,
        /// Array radius in meters
        #[arg(long, default_value_t = 0.05)]
        radius_m: f64,
        /// Speed of sound in meters per second
        #[arg(long, default_value_t = 343.0)]
        speed_of_sound: f64,
        /// Radial filter gain cap in dB
        #[arg(long, default_value_t = 40.0)]
        max_gain_db: f64,
        /// Output coefficient file
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a coefficient file through a transfer-function set to CSV
    Render {
        /// Coefficient file written by encode or convert
        coefficients: PathBuf,
        /// Sampled transfer-function set covering a quadrature grid
        hrtf: PathBuf,
        /// Convention row to expand the transfer functions under
        /// (default: the row of the coefficient file)
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        row: Option<u8>,
        /// Transfer-function expansion order (default: the smaller of the
        /// coefficient order and the grid exactness)
        #[arg(long)]
        order: Option<u32>,
        /// Output CSV file, spectra in the negative-exponent transform
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-express a coefficient file under another convention row
    Convert {
        /// Coefficient file to convert
        coefficients: PathBuf,
        /// Target convention row (1-5)
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        row: u8,
        /// Output coefficient file
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a reproducible band-limited transfer-function set
    SynthHrtf {
        /// Seed for the coefficient generator
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Band limit of the generated set
        #[arg(long, default_value_t = 4)]
        order: u32,
        /// Quadrature grid order to sample on (default: same as --order)
        #[arg(long)]
        grid_order: Option<u32>,
        /// Comma-separated frequency list in Hz
        #[arg(long, value_delimiter = ',', required = true)]
        frequencies: Vec<f64>,
        /// Output transfer-function file
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the seeded pipeline-vs-oracle checks and report max deviations
    Selftest {
        /// Seed all fixtures are derived from
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Expansion order the checks run at
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=16))]
        order: u32,
        /// Also print per-item detail lines
        #[arg(short, long, action = clap::ArgAction::Count)]
        verbose: u8,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Encode { scene, row, order, grid_order, radius_m, speed_of_sound, max_gain_db, out } => {
            let scene_data = formats::load_scene(&scene)?;
            let sys = ConventionSystem::from_row(row).expect("row is range checked");
            let sphere =
                SphereSpec::new(radius_m, speed_of_sound).map_err(|e| e.to_string())?;
            let grid = make_gauss_grid(grid_order.unwrap_or_else(|| (order + 8).min(MAX_ORDER)))
                .map_err(|e| e.to_string())?;
            let filter = RadialFilterSpec::new(max_gain_db).map_err(|e| e.to_string())?;
            let mut field =
                ShCoefficients::zeros(CoeffKind::Breve, sys, order, scene_data.frequencies_hz)
                    .map_err(|e| e.to_string())?;
            for bin in 0..field.num_bins() {
                let freq = field.frequencies_hz()[bin];
                if freq == 0.0 {
                    // The static bin carries no radial information; it stays
                    // zero-filled.
                    continue;
                }
                let waves = scene_data
                    .waves
                    .iter()
                    .map(|w| PlaneWave::new(w.amplitudes[bin], w.incidence))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())?;
                let bin_scene = PlaneWaveScene::new(waves).map_err(|e| e.to_string())?;
                let pressure =
                    simulate_surface_pressure(&bin_scene, &sphere, &grid, &sys, &[freq])
                        .map_err(|e| e.to_string())?;
                let encoded =
                    sma_encode(&pressure, &sys, order, &filter).map_err(|e| e.to_string())?;
                field.bin_mut(bin).copy_from_slice(encoded.bin(0));
            }
            formats::write_coefficients(&out, &field)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Render { coefficients, hrtf, row, order, out } => {
            let field = formats::read_coefficients(&coefficients)?;
            let set = formats::read_hrtf(&hrtf)?;
            let sys = match row {
                Some(r) => ConventionSystem::from_row(r).expect("row is range checked"),
                None => field.convention,
            };
            let count = set.directions().len();
            let q = (0..=MAX_ORDER)
                .find(|q| (q + 1) as usize * (2 * q + 1) as usize == count)
                .ok_or_else(|| {
                    format!(
                        "{}: {count} directions do not form a (Q+1) x (2Q+1) quadrature layout",
                        hrtf.display()
                    )
                })?;
            let grid = make_gauss_grid(q).map_err(|e| e.to_string())?;
            let n = order.unwrap_or_else(|| field.max_order().min(q));
            let encoded = encode_hrtf_for_convention(&set, &grid, &sys, n)
                .map_err(|e| format!("{}: {e}", hrtf.display()))?;
            // Static bins carry no transfer function; they pass through as
            // zero rows while the audible band is rendered against the set.
            let freqs = field.frequencies_hz().to_vec();
            let band: Vec<usize> = (0..freqs.len()).filter(|&i| freqs[i] != 0.0).collect();
            let zero = Complex64::new(0.0, 0.0);
            let mut left = vec![zero; freqs.len()];
            let mut right = vec![zero; freqs.len()];
            if !band.is_empty() {
                let band_freqs = band.iter().map(|&i| freqs[i]).collect();
                let mut sub = ShCoefficients::zeros(
                    field.kind,
                    field.convention,
                    field.max_order(),
                    band_freqs,
                )
                .map_err(|e| e.to_string())?;
                for (j, &i) in band.iter().enumerate() {
                    sub.bin_mut(j).copy_from_slice(field.bin(i));
                }
                let rendered = render(&sub, &encoded).map_err(|e| e.to_string())?;
                for (j, &i) in band.iter().enumerate() {
                    left[i] = rendered.ear(Ear::Left)[j];
                    right[i] = rendered.ear(Ear::Right)[j];
                }
            }
            let output =
                BinauralOutput::new(field.convention.fourier_sign, freqs, left, right);
            formats::write_binaural_csv(&out, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Convert { coefficients, row, out } => {
            let field = formats::read_coefficients(&coefficients)?;
            let target = ConventionSystem::from_row(row).expect("row is range checked");
            let converted = convert_convention(&field, &target).map_err(|e| e.to_string())?;
            formats::write_coefficients(&out, &converted)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SynthHrtf { seed, order, grid_order, frequencies, out } => {
            let grid =
                make_gauss_grid(grid_order.unwrap_or(order)).map_err(|e| e.to_string())?;
            let synthetic =
                synth_hrtf(seed, order, &frequencies, &grid).map_err(|e| e.to_string())?;
            formats::write_hrtf(&out, &synthetic.set)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { seed, order, verbose } => {
            println!("selftest seed {seed} order {order}");
            let checks = selftest::run(seed, order);
            let mut all_passed = true;
            for check in &checks {
                let verdict = if check.passed() { "pass" } else { "FAIL" };
                println!(
                    "check {}: max deviation {:.3e} (tolerance {:e}) {verdict}",
                    check.name, check.worst, check.tol
                );
                if verbose > 0 {
                    for line in &check.detail {
                        println!("{line}");
                    }
                }
                all_passed &= check.passed();
            }
            if all_passed {
                println!("selftest passed");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("selftest failed");
                Ok(ExitCode::from(3))
            }
        }
    }
}
