use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Gases with catalog support, numbered as in the catalog molecule column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gas {
    H2O,
    CO2,
    O3,
    N2O,
    CO,
    CH4,
    O2,
    NO,
    SO2,
    NH3,
    N2,
}

impl Gas {
    pub const ALL: [Gas; 11] = [
        Gas::H2O,
        Gas::CO2,
        Gas::O3,
        Gas::N2O,
        Gas::CO,
        Gas::CH4,
        Gas::O2,
        Gas::NO,
        Gas::SO2,
        Gas::NH3,
        Gas::N2,
    ];

    pub fn molecule_id(self) -> u8 {
        match self {
            Gas::H2O => 1,
            Gas::CO2 => 2,
            Gas::O3 => 3,
            Gas::N2O => 4,
            Gas::CO => 5,
            Gas::CH4 => 6,
            Gas::O2 => 7,
            Gas::NO => 8,
            Gas::SO2 => 9,
            Gas::NH3 => 11,
            Gas::N2 => 22,
        }
    }

    pub fn from_molecule_id(id: u8) -> Option<Gas> {
        Gas::ALL.into_iter().find(|g| g.molecule_id() == id)
    }

    pub fn formula(self) -> &'static str {
        match self {
            Gas::H2O => "H2O",
            Gas::CO2 => "CO2",
            Gas::O3 => "O3",
            Gas::N2O => "N2O",
            Gas::CO => "CO",
            Gas::CH4 => "CH4",
            Gas::O2 => "O2",
            Gas::NO => "NO",
            Gas::SO2 => "SO2",
            Gas::NH3 => "NH3",
            Gas::N2 => "N2",
        }
    }

    /// Exponent m in Q(296)/Q(T) ≈ (296/T)^m: 1 for linear molecules,
    /// 1.5 for the rest.
    pub fn partition_exponent(self) -> f64 {
        match self {
            Gas::CO2 | Gas::N2O | Gas::CO | Gas::O2 | Gas::NO | Gas::N2 => 1.0,
            Gas::H2O | Gas::O3 | Gas::CH4 | Gas::SO2 | Gas::NH3 => 1.5,
        }
    }
}

impl fmt::Display for Gas {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.formula())
    }
}

impl FromStr for Gas {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gas> {
        Gas::ALL
            .into_iter()
            .find(|g| g.formula().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown gas `{}`", s.trim())))
    }
}

/// Isotopologue molar masses, g/mol, indexed by catalog isotopologue number.
fn isotopologue_masses(gas: Gas) -> &'static [f64] {
    match gas {
        Gas::H2O => &[18.010565, 20.014811, 19.014780, 19.016740, 21.020985, 20.020956, 20.022915],
        Gas::CO2 => &[
            43.989830, 44.993185, 45.994076, 44.994045, 46.997431, 45.997400, 47.998322, 46.998291,
            45.998262, 49.001675,
        ],
        Gas::O3 => &[47.984745, 49.988991, 49.988991, 48.988960, 48.988960],
        Gas::N2O => &[44.001062, 44.998096, 44.998096, 46.005308, 45.005278],
        Gas::CO => &[27.994915, 28.998270, 29.999161, 28.999130, 31.002516, 30.002485],
        Gas::CH4 => &[16.031300, 17.034655, 17.037475, 18.034690],
        Gas::O2 => &[31.989830, 33.994076, 32.994045],
        Gas::NO => &[29.997989, 30.995023, 32.002234],
        Gas::SO2 => &[63.961901, 65.957695],
        Gas::NH3 => &[17.026549, 18.023583],
        Gas::N2 => &[28.006148, 29.003182],
    }
}

/// Molar mass in kg/mol for catalog `(molecule, isotopologue)` numbers.
pub fn molar_mass(molecule_id: u8, isotopologue: u8) -> Option<f64> {
    let gas = Gas::from_molecule_id(molecule_id)?;
    let idx = usize::from(isotopologue).checked_sub(1)?;
    isotopologue_masses(gas).get(idx).map(|g| g * 1e-3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for g in Gas::ALL {
            assert_eq!(Gas::from_molecule_id(g.molecule_id()), Some(g));
            assert_eq!(g.formula().parse::<Gas>().unwrap(), g);
        }
        assert_eq!(Gas::from_molecule_id(10), None);
    }

    #[test]
    fn masses() {
        assert!((molar_mass(2, 1).unwrap() - 0.04398983).abs() < 1e-10);
        assert!((molar_mass(2, 10).unwrap() - 0.049001675).abs() < 1e-10);
        assert_eq!(molar_mass(1, 0), None);
        assert_eq!(molar_mass(9, 3), None);
    }
}
