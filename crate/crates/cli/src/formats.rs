//! The text formats the tool reads and writes: coefficient dumps, sampled
//! transfer-function sets, binaural response CSV, and the scene description
//! JSON. Everything is plain UTF-8 with no timestamps, so re-running a
//! command reproduces its output byte for byte.

use num_complex::Complex64;
use serde::Deserialize;
use sphaural::hrtf::HrtfSet;
use sphaural::sh::{acn, num_coeffs};
use sphaural::{
    BinauralOutput, CoeffKind, ConventionSystem, Direction, DirectionReference, Ear,
    ShCoefficients, ShFlavor,
};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

fn read_text(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Coefficient dump: four header lines (flavor, kind, convention row, order)
/// followed by one `frequency n m re im` row per coefficient, frequencies in
/// file order, ACN order within each frequency block.
pub fn write_coefficients(path: &Path, coeffs: &ShCoefficients) -> Result<(), String> {
    let row = coeffs
        .convention
        .row_id()
        .ok_or("only the five named convention rows can be written to a file")?;
    let mut text = String::new();
    let _ = writeln!(text, "flavor: {}", coeffs.convention.flavor);
    let _ = writeln!(text, "kind: {}", coeffs.kind);
    let _ = writeln!(text, "convention: row{row}");
    let _ = writeln!(text, "order: {}", coeffs.max_order());
    for (bin, &freq) in coeffs.frequencies_hz().iter().enumerate() {
        for n in 0..=coeffs.max_order() {
            for m in -(n as i32)..=n as i32 {
                let v = coeffs.at(bin, n, m);
                let _ = writeln!(text, "{freq} {n} {m} {} {}", v.re, v.im);
            }
        }
    }
    write_text(path, &text)
}

fn header_value<'a>(line: &'a str, key: &str, path: &Path) -> Result<&'a str, String> {
    let rest = line
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| format!("{}: expected a `{key}:` header line, got {line:?}", path.display()))?;
    Ok(rest.trim())
}

fn parse_flavor(label: &str, path: &Path) -> Result<ShFlavor, String> {
    match label {
        "complex_gd" => Ok(ShFlavor::ComplexGd),
        "complex_williams" => Ok(ShFlavor::ComplexWilliams),
        "real_n3d" => Ok(ShFlavor::RealN3d),
        other => Err(format!("{}: unknown basis flavor {other:?}", path.display())),
    }
}

fn parse_finite(token: &str, what: &str, line_no: usize, path: &Path) -> Result<f64, String> {
    let v: f64 = token
        .parse()
        .map_err(|_| format!("{} line {line_no}: {what} {token:?} is not a number", path.display()))?;
    if !v.is_finite() {
        return Err(format!("{} line {line_no}: {what} must be finite", path.display()));
    }
    Ok(v)
}

pub fn read_coefficients(path: &Path) -> Result<ShCoefficients, String> {
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut header = |key: &str| -> Result<String, String> {
        let (_, line) = lines
            .next()
            .ok_or_else(|| format!("{}: file ends before the `{key}:` header", path.display()))?;
        Ok(header_value(line.trim(), key, path)?.to_owned())
    };
    let flavor = parse_flavor(&header("flavor")?, path)?;
    let kind = match header("kind")?.as_str() {
        "breve" => CoeffKind::Breve,
        "ring" => CoeffKind::Ring,
        other => return Err(format!("{}: unknown coefficient kind {other:?}", path.display())),
    };
    let convention_label = header("convention")?;
    let row: u8 = convention_label
        .strip_prefix("row")
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| {
            format!("{}: convention must be row1..row5, got {convention_label:?}", path.display())
        })?;
    let sys = ConventionSystem::from_row(row)
        .ok_or_else(|| format!("{}: convention must be row1..row5, got row{row}", path.display()))?;
    if sys.flavor != flavor {
        return Err(format!(
            "{}: flavor {flavor} does not match convention row{row} (which uses {})",
            path.display(),
            sys.flavor
        ));
    }
    let order: u32 = header("order")?
        .parse()
        .map_err(|_| format!("{}: order must be a non-negative integer", path.display()))?;

    let stride = num_coeffs(order);
    let mut frequencies: Vec<f64> = Vec::new();
    let mut bins: Vec<Vec<Option<Complex64>>> = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(format!(
                "{} line {line_no}: expected `frequency n m re im`, got {} fields",
                path.display(),
                fields.len()
            ));
        }
        let freq = parse_finite(fields[0], "frequency", line_no, path)?;
        let n: u32 = fields[1].parse().map_err(|_| {
            format!("{} line {line_no}: order {:?} is not a non-negative integer", path.display(), fields[1])
        })?;
        let m: i32 = fields[2].parse().map_err(|_| {
            format!("{} line {line_no}: degree {:?} is not an integer", path.display(), fields[2])
        })?;
        if n > order || m.unsigned_abs() > n {
            return Err(format!(
                "{} line {line_no}: index ({n}, {m}) is outside an order-{order} expansion",
                path.display()
            ));
        }
        let re = parse_finite(fields[3], "value", line_no, path)?;
        let im = parse_finite(fields[4], "value", line_no, path)?;
        if frequencies.last().map(|f| f.to_bits()) != Some(freq.to_bits()) {
            if frequencies.iter().any(|f| f.to_bits() == freq.to_bits()) {
                return Err(format!(
                    "{} line {line_no}: frequency {freq} appears in two separate blocks",
                    path.display()
                ));
            }
            frequencies.push(freq);
            bins.push(vec![None; stride]);
        }
        let slot = &mut bins.last_mut().unwrap()[acn(n, m)];
        if slot.is_some() {
            return Err(format!(
                "{} line {line_no}: duplicate entry for index ({n}, {m})",
                path.display()
            ));
        }
        *slot = Some(Complex64::new(re, im));
    }
    if frequencies.is_empty() {
        return Err(format!("{}: file lists no frequency rows", path.display()));
    }
    let mut out = ShCoefficients::zeros(kind, sys, order, frequencies)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    for (bin, values) in bins.iter().enumerate() {
        for (i, v) in values.iter().enumerate() {
            match v {
                Some(v) => out.bin_mut(bin)[i] = *v,
                None => {
                    return Err(format!(
                        "{}: frequency {} is missing coefficient entries",
                        path.display(),
                        out.frequencies_hz()[bin]
                    ))
                }
            }
        }
    }
    Ok(out)
}

/// Sampled transfer-function set: a `reference:` line, a `frequencies:`
/// line, then one whitespace-separated record per direction per ear:
/// `colatitude azimuth L|R re,im re,im ...` with one complex pair per
/// frequency. Angles are radians.
pub fn write_hrtf(path: &Path, set: &HrtfSet) -> Result<(), String> {
    let mut text = String::from("reference: incidence\n");
    text.push_str("frequencies: ");
    for (i, f) in set.frequencies_hz().iter().enumerate() {
        if i > 0 {
            text.push(',');
        }
        let _ = write!(text, "{f}");
    }
    text.push('\n');
    for (row, dir) in set.directions().iter().enumerate() {
        for ear in Ear::BOTH {
            let tag = match ear {
                Ear::Left => 'L',
                Ear::Right => 'R',
            };
            let _ = write!(text, "{} {} {tag}", dir.colatitude(), dir.azimuth());
            for bin in 0..set.num_bins() {
                let v = set.response(ear, row, bin);
                let _ = write!(text, " {},{}", v.re, v.im);
            }
            text.push('\n');
        }
    }
    write_text(path, &text)
}

pub fn read_hrtf(path: &Path) -> Result<HrtfSet, String> {
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, ref_line) = lines
        .next()
        .ok_or_else(|| format!("{}: file ends before the `reference:` header", path.display()))?;
    let reference = match header_value(ref_line.trim(), "reference", path)? {
        "incidence" => DirectionReference::Incidence,
        "propagation" => DirectionReference::Propagation,
        other => {
            return Err(format!(
                "{}: reference must be incidence or propagation, got {other:?}",
                path.display()
            ))
        }
    };
    let (freq_idx, freq_line) = lines
        .next()
        .ok_or_else(|| format!("{}: file ends before the `frequencies:` header", path.display()))?;
    let freq_value = header_value(freq_line.trim(), "frequencies", path)?;
    let frequencies: Vec<f64> = if freq_value.is_empty() {
        Vec::new()
    } else {
        freq_value
            .split(',')
            .map(|t| parse_finite(t.trim(), "frequency", freq_idx + 1, path))
            .collect::<Result<_, _>>()?
    };
    let num_bins = frequencies.len();

    // Directions keyed by the exact bits of the parsed angles, in first
    // appearance order; each must carry exactly one record per ear.
    let mut keys: Vec<(u64, u64)> = Vec::new();
    let mut directions: Vec<Direction> = Vec::new();
    let mut per_ear: [Vec<Option<Vec<Complex64>>>; 2] = [Vec::new(), Vec::new()];
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() != 3 + num_bins {
            return Err(format!(
                "{} line {line_no}: expected `colatitude azimuth L|R` plus {num_bins} complex entries, got {} fields",
                path.display(),
                fields.len()
            ));
        }
        let colatitude = parse_finite(fields[0], "colatitude", line_no, path)?;
        let azimuth = parse_finite(fields[1], "azimuth", line_no, path)?;
        let ear_slot = match fields[2] {
            "L" => 0usize,
            "R" => 1,
            other => {
                return Err(format!(
                    "{} line {line_no}: ear must be L or R, got {other:?}",
                    path.display()
                ))
            }
        };
        let mut spectrum = Vec::with_capacity(num_bins);
        for token in &fields[3..] {
            let (re, im) = token.split_once(',').ok_or_else(|| {
                format!("{} line {line_no}: complex entries are written re,im", path.display())
            })?;
            spectrum.push(Complex64::new(
                parse_finite(re, "value", line_no, path)?,
                parse_finite(im, "value", line_no, path)?,
            ));
        }
        let key = (colatitude.to_bits(), azimuth.to_bits());
        let row = match keys.iter().position(|&k| k == key) {
            Some(row) => row,
            None => {
                let parsed = Direction::new(colatitude, azimuth)
                    .map_err(|e| format!("{} line {line_no}: {e}", path.display()))?;
                // The set is stored by where the sound comes from; a file in
                // propagation coordinates points the other way.
                let incidence = match reference {
                    DirectionReference::Incidence => parsed,
                    DirectionReference::Propagation => parsed.antipode(),
                };
                keys.push(key);
                directions.push(incidence);
                per_ear[0].push(None);
                per_ear[1].push(None);
                keys.len() - 1
            }
        };
        if per_ear[ear_slot][row].is_some() {
            return Err(format!(
                "{} line {line_no}: duplicate record for this direction and ear",
                path.display()
            ));
        }
        per_ear[ear_slot][row] = Some(spectrum);
    }
    let mut left = Vec::with_capacity(directions.len() * num_bins);
    let mut right = Vec::with_capacity(directions.len() * num_bins);
    for (row, dir) in directions.iter().enumerate() {
        for (slot, out) in [(&per_ear[0], &mut left), (&per_ear[1], &mut right)] {
            match &slot[row] {
                Some(spectrum) => out.extend_from_slice(spectrum),
                None => {
                    return Err(format!(
                        "{}: direction ({}, {}) is missing one ear's record",
                        path.display(),
                        dir.colatitude(),
                        dir.azimuth()
                    ))
                }
            }
        }
    }
    HrtfSet::new(directions, frequencies, left, right)
        .map_err(|e| format!("{}: {e}", path.display()))
}

/// Binaural response CSV, always expressed in the negative-exponent
/// transform so files from different conventions are directly comparable.
pub fn write_binaural_csv(path: &Path, output: &BinauralOutput) -> Result<(), String> {
    let common = output.in_common_sign();
    let mut text = String::from("frequency_hz,L_re,L_im,R_re,R_im\n");
    for (bin, &freq) in common.frequencies_hz().iter().enumerate() {
        let l = common.ear(Ear::Left)[bin];
        let r = common.ear(Ear::Right)[bin];
        let _ = writeln!(text, "{freq},{},{},{},{}", l.re, l.im, r.re, r.im);
    }
    write_text(path, &text)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    frequencies_hz: Vec<f64>,
    waves: Vec<WaveEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WaveEntry {
    colatitude_rad: f64,
    azimuth_rad: f64,
    reference: ReferenceTag,
    amplitude: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum ReferenceTag {
    Incidence,
    Propagation,
}

/// A validated scene: incidence directions with one complex amplitude per
/// frequency bin, amplitudes read as negative-exponent spectra.
pub struct SceneData {
    pub frequencies_hz: Vec<f64>,
    pub waves: Vec<SceneWave>,
}

pub struct SceneWave {
    pub incidence: Direction,
    pub amplitudes: Vec<Complex64>,
}

pub fn load_scene(path: &Path) -> Result<SceneData, String> {
    let text = read_text(path)?;
    let file: SceneFile =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if file.waves.is_empty() {
        return Err("scene has no waves".to_owned());
    }
    if file.frequencies_hz.is_empty() {
        return Err(format!("{}: frequencies_hz must not be empty", path.display()));
    }
    for (i, f) in file.frequencies_hz.iter().enumerate() {
        if !f.is_finite() || *f < 0.0 {
            return Err(format!(
                "{}: frequencies_hz[{i}] must be a finite non-negative number",
                path.display()
            ));
        }
    }
    let num_bins = file.frequencies_hz.len();
    let mut waves = Vec::with_capacity(file.waves.len());
    for (i, entry) in file.waves.iter().enumerate() {
        if entry.amplitude.len() != num_bins {
            return Err(format!(
                "{}: waves[{i}].amplitude has {} entries, expected one per frequency ({num_bins})",
                path.display(),
                entry.amplitude.len()
            ));
        }
        for (j, pair) in entry.amplitude.iter().enumerate() {
            if !pair[0].is_finite() || !pair[1].is_finite() {
                return Err(format!(
                    "{}: waves[{i}].amplitude[{j}] must be finite",
                    path.display()
                ));
            }
        }
        let parsed = Direction::new(entry.colatitude_rad, entry.azimuth_rad)
            .map_err(|e| format!("{}: waves[{i}]: {e}", path.display()))?;
        let incidence = match entry.reference {
            ReferenceTag::Incidence => parsed,
            ReferenceTag::Propagation => parsed.antipode(),
        };
        let amplitudes = entry.amplitude.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        waves.push(SceneWave { incidence, amplitudes });
    }
    Ok(SceneData { frequencies_hz: file.frequencies_hz, waves })
}
