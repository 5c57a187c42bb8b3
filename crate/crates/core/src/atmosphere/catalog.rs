use std::fs;
use std::path::{Path, PathBuf};

use super::gas::{molar_mass, Gas};
use crate::constants::SPEED_OF_LIGHT_CM;
use crate::{Error, Result};

/// Characters per catalog record.
pub const RECORD_LENGTH: usize = 160;

// 1-based inclusive column spans of the consumed fields.
const MOLECULE: (usize, usize) = (1, 2);
const ISOTOPOLOGUE: (usize, usize) = (3, 3);
const WAVENUMBER: (usize, usize) = (4, 15);
const INTENSITY: (usize, usize) = (16, 25);
const GAMMA_AIR: (usize, usize) = (36, 40);
const GAMMA_SELF: (usize, usize) = (41, 45);
const LOWER_ENERGY: (usize, usize) = (46, 55);
const N_AIR: (usize, usize) = (56, 59);
const DELTA_AIR: (usize, usize) = (60, 67);

/// One catalog transition. Spectroscopic quantities keep catalog units
/// (cm⁻¹, cm⁻¹/atm, cm⁻¹/(molecule·cm⁻²)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub molecule_id: u8,
    pub isotopologue: u8,
    /// Line center ν0, cm⁻¹.
    pub wavenumber: f64,
    /// S_ref at 296 K.
    pub intensity: f64,
    pub gamma_air: f64,
    pub gamma_self: f64,
    /// E″, cm⁻¹.
    pub lower_energy: f64,
    pub n_air: f64,
    pub delta_air: f64,
    /// kg/mol.
    pub molar_mass: f64,
}

impl SpectralLine {
    /// Line center f0 in Hz.
    pub fn frequency(&self) -> f64 {
        self.wavenumber * SPEED_OF_LIGHT_CM
    }

    pub fn gas(&self) -> Option<Gas> {
        Gas::from_molecule_id(self.molecule_id)
    }
}

fn span(record: &str, (start, end): (usize, usize)) -> &str {
    &record[start - 1..end]
}

fn field_error(record: usize, (start, end): (usize, usize), message: impl Into<String>) -> Error {
    Error::Field { record, start, end, message: message.into() }
}

fn number(record_text: &str, record: usize, cols: (usize, usize), name: &str) -> Result<f64> {
    let raw = span(record_text, cols).trim();
    raw.replace(['D', 'd'], "E")
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| field_error(record, cols, format!("cannot parse {name} from `{raw}`")))
}

fn isotopologue_code(c: char) -> Option<u8> {
    match c {
        '1'..='9' => Some(c as u8 - b'0'),
        '0' => Some(10),
        'A' => Some(11),
        'B' => Some(12),
        _ => None,
    }
}

fn isotopologue_char(n: u8) -> Option<char> {
    match n {
        1..=9 => Some((b'0' + n) as char),
        10 => Some('0'),
        11 => Some('A'),
        12 => Some('B'),
        _ => None,
    }
}

/// Parses one 160-column record. `record` is the 1-based record number used
/// in error messages.
pub fn parse_par_record(line: &str, record: usize) -> Result<SpectralLine> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    if !line.is_ascii() {
        return Err(Error::Format { record, message: "record contains non-ASCII characters".into() });
    }
    if line.len() != RECORD_LENGTH {
        return Err(Error::Format {
            record,
            message: format!("expected {RECORD_LENGTH} characters, found {}", line.len()),
        });
    }

    let mol_raw = span(line, MOLECULE).trim();
    let molecule_id: u8 = mol_raw
        .parse()
        .map_err(|_| field_error(record, MOLECULE, format!("cannot parse molecule id from `{mol_raw}`")))?;
    let iso_char = span(line, ISOTOPOLOGUE).chars().next().unwrap_or(' ');
    let isotopologue = isotopologue_code(iso_char)
        .ok_or_else(|| field_error(record, ISOTOPOLOGUE, format!("invalid isotopologue code `{iso_char}`")))?;
    let molar_mass = molar_mass(molecule_id, isotopologue).ok_or_else(|| {
        field_error(
            record,
            ISOTOPOLOGUE,
            format!("no molar mass for molecule {molecule_id} isotopologue {isotopologue}"),
        )
    })?;

    let wavenumber = number(line, record, WAVENUMBER, "line center")?;
    let intensity = number(line, record, INTENSITY, "intensity")?;
    let gamma_air = number(line, record, GAMMA_AIR, "air half-width")?;
    let gamma_self = number(line, record, GAMMA_SELF, "self half-width")?;
    let lower_energy = number(line, record, LOWER_ENERGY, "lower-state energy")?;
    let n_air = number(line, record, N_AIR, "temperature exponent")?;
    let delta_air = number(line, record, DELTA_AIR, "pressure shift")?;

    if !(wavenumber > 0.0) {
        return Err(field_error(record, WAVENUMBER, "line center must be positive"));
    }
    if intensity < 0.0 {
        return Err(field_error(record, INTENSITY, "intensity must be non-negative"));
    }
    if !(gamma_air > 0.0) {
        return Err(field_error(record, GAMMA_AIR, "air half-width must be positive"));
    }
    if gamma_self < 0.0 {
        return Err(field_error(record, GAMMA_SELF, "self half-width must be non-negative"));
    }
    if lower_energy < 0.0 {
        return Err(field_error(record, LOWER_ENERGY, "lower-state energy must be non-negative"));
    }

    Ok(SpectralLine {
        molecule_id,
        isotopologue,
        wavenumber,
        intensity,
        gamma_air,
        gamma_self,
        lower_energy,
        n_air,
        delta_air,
        molar_mass,
    })
}

/// Parses every non-blank record of a catalog file.
pub fn parse_par(text: &str) -> Result<Vec<SpectralLine>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_par_record(l, i + 1))
        .collect()
}

/// Fortran `Fw.d`: drops the leading zero when the value would not fit.
fn fixed(value: f64, width: usize, decimals: usize) -> Option<String> {
    let mut s = format!("{value:.decimals$}");
    if s.len() > width {
        if let Some(rest) = s.strip_prefix("0.") {
            s = format!(".{rest}");
        } else if let Some(rest) = s.strip_prefix("-0.") {
            s = format!("-.{rest}");
        }
    }
    (s.len() <= width).then(|| format!("{s:>width$}"))
}

/// Fortran `E10.3`, e.g. ` 1.234E-22`.
fn sci(value: f64) -> Option<String> {
    let s = format!("{value:.3e}");
    let (mantissa, exp) = s.split_once('e')?;
    let exp: i32 = exp.parse().ok()?;
    let sign = if exp < 0 { '-' } else { '+' };
    let out = format!("{mantissa}E{sign}{:02}", exp.abs());
    (out.len() <= 10).then(|| format!("{out:>10}"))
}

/// Writes the consumed fields of `line` back to a 160-column record.
/// Unconsumed columns are blank.
pub fn format_par_record(line: &SpectralLine) -> Result<String> {
    let too_wide = |what: &str| Error::domain(format!("{what} does not fit its catalog column"));
    let iso = isotopologue_char(line.isotopologue).ok_or_else(|| too_wide("isotopologue"))?;
    if line.molecule_id > 99 {
        return Err(too_wide("molecule id"));
    }
    let mut out = String::with_capacity(RECORD_LENGTH);
    out.push_str(&format!("{:>2}", line.molecule_id));
    out.push(iso);
    out.push_str(&fixed(line.wavenumber, 12, 6).ok_or_else(|| too_wide("line center"))?);
    out.push_str(&sci(line.intensity).ok_or_else(|| too_wide("intensity"))?);
    out.push_str(&" ".repeat(10));
    out.push_str(&fixed(line.gamma_air, 5, 4).ok_or_else(|| too_wide("air half-width"))?);
    out.push_str(&fixed(line.gamma_self, 5, 3).ok_or_else(|| too_wide("self half-width"))?);
    out.push_str(&fixed(line.lower_energy, 10, 4).ok_or_else(|| too_wide("lower-state energy"))?);
    out.push_str(&fixed(line.n_air, 4, 2).ok_or_else(|| too_wide("temperature exponent"))?);
    out.push_str(&fixed(line.delta_air, 8, 6).ok_or_else(|| too_wide("pressure shift"))?);
    out.push_str(&" ".repeat(RECORD_LENGTH - out.len()));
    Ok(out)
}

/// Catalog shipped with the crate. Its lines are a small synthetic set with
/// realistic positions and rough strengths, meant for tests and demos.
pub fn bundled_catalog_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("catalog")
}

pub fn catalog_path(dir: &Path, gas: Gas) -> PathBuf {
    dir.join(format!("{}.par", gas.formula()))
}

/// Reads `<dir>/<GAS>.par` for each gas. All missing files are reported
/// together.
pub fn load_catalog(dir: &Path, gases: &[Gas]) -> Result<Vec<SpectralLine>> {
    let paths: Vec<PathBuf> = gases.iter().map(|&g| catalog_path(dir, g)).collect();
    let missing: Vec<PathBuf> = paths.iter().filter(|p| !p.is_file()).cloned().collect();
    if !missing.is_empty() {
        return Err(Error::MissingCatalog(missing));
    }
    let mut lines = Vec::new();
    for path in paths {
        let text = fs::read_to_string(&path).map_err(|source| Error::Io { path: path.clone(), source })?;
        let name = path.display();
        let parsed = parse_par(&text).map_err(|e| match e {
            Error::Format { record, message } => Error::Format { record, message: format!("{name}: {message}") },
            Error::Field { record, start, end, message } => {
                Error::Field { record, start, end, message: format!("{name}: {message}") }
            }
            other => other,
        })?;
        lines.extend(parsed);
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crafted() -> String {
        let mut s = String::from(" 11    7.500000 1.234E-22 5.000E-03.07120.350  100.00000.75-.001234");
        s.push_str(&" ".repeat(RECORD_LENGTH - s.len()));
        s
    }

    #[test]
    fn crafted_fields() {
        let l = parse_par_record(&crafted(), 1).unwrap();
        assert_eq!((l.molecule_id, l.isotopologue), (1, 1));
        assert_eq!(l.wavenumber, 7.5);
        assert_eq!(l.intensity, 1.234e-22);
        assert_eq!(l.gamma_air, 0.0712);
        assert_eq!(l.gamma_self, 0.35);
        assert_eq!(l.lower_energy, 100.0);
        assert_eq!(l.n_air, 0.75);
        assert_eq!(l.delta_air, -0.001234);
        assert!((l.frequency() - 224.844_343_5e9).abs() < 1.0);
    }

    #[test]
    fn round_trip_spans() {
        let rec = crafted();
        let out = format_par_record(&parse_par_record(&rec, 1).unwrap()).unwrap();
        assert_eq!(out.len(), RECORD_LENGTH);
        for cols in [MOLECULE, ISOTOPOLOGUE, WAVENUMBER, INTENSITY, GAMMA_AIR, GAMMA_SELF, LOWER_ENERGY, N_AIR, DELTA_AIR] {
            assert_eq!(span(&rec, cols), span(&out, cols), "columns {cols:?}");
        }
    }

    #[test]
    fn length_guard() {
        let rec = crafted();
        match parse_par_record(&rec[..159], 7) {
            Err(Error::Format { record: 7, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_par_record(&format!("{rec} "), 1).is_err());
        assert!(parse_par_record(&format!("{rec}\r"), 1).is_ok());
    }

    #[test]
    fn bad_field_names_columns() {
        let mut rec = crafted();
        rec.replace_range(15..25, "  garbage ");
        match parse_par_record(&rec, 3) {
            Err(Error::Field { record: 3, start: 16, end: 25, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn isotopologue_letters() {
        let mut rec = crafted();
        rec.replace_range(0..3, " 20");
        assert_eq!(parse_par_record(&rec, 1).unwrap().isotopologue, 10);
        rec.replace_range(0..3, " 1A");
        assert!(matches!(parse_par_record(&rec, 1), Err(Error::Field { start: 3, .. })));
    }

    #[test]
    fn whole_file_skips_blank_lines() {
        let text = format!("{}\n\n{}\n", crafted(), crafted());
        assert_eq!(parse_par(&text).unwrap().len(), 2);
        let bad = format!("{}\nshort\n", crafted());
        assert!(matches!(parse_par(&bad), Err(Error::Format { record: 2, .. })));
    }

    #[test]
    fn missing_files_listed() {
        let dir = tempfile::tempdir().unwrap();
        match load_catalog(dir.path(), &[Gas::H2O, Gas::CO]) {
            Err(Error::MissingCatalog(paths)) => assert_eq!(paths.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bundled_catalog_parses() {
        let lines = load_catalog(&bundled_catalog_dir(), &Gas::ALL).unwrap();
        assert!(lines.iter().any(|l| l.molecule_id == 1));
    }
}
