//! Physical scale attachment: the ground energy `E0 = -Z^2 (mu/m_e) Ry` and
//! linear conversions between the supported energy units.
//!
//! All spectral quantities in this crate are dimensionless ratios `E/E0`;
//! this module is the only place a physical constant appears.

use crate::error::{Error, Result};

/// Version tag of the embedded constant table.
pub const CONSTANTS_VERSION: &str = "codata-2018";

/// Rydberg constant for infinite nuclear mass, in cm^-1.
pub const RYDBERG_INF_WAVENUMBER: f64 = 109_737.315_681_60;

/// Rydberg unit of energy, in eV.
pub const RYDBERG_ENERGY_EV: f64 = 13.605_693_122_994;

/// Proton-electron mass ratio.
pub const PROTON_ELECTRON_MASS_RATIO: f64 = 1836.152_673_43;

/// Deuteron-electron mass ratio.
pub const DEUTERON_ELECTRON_MASS_RATIO: f64 = 3670.482_967_88;

/// Units an energy can be reported in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyUnit {
    /// Dimensionless ratio `E/E0` (positive for bound levels).
    RatioOfGround,
    ElectronVolt,
    /// Wavenumber `E/(hc)` in cm^-1.
    Wavenumber,
    Rydberg,
}

impl EnergyUnit {
    /// Flag spelling used by the command line.
    pub fn token(&self) -> &'static str {
        match self {
            EnergyUnit::RatioOfGround => "e0",
            EnergyUnit::ElectronVolt => "ev",
            EnergyUnit::Wavenumber => "cm-1",
            EnergyUnit::Rydberg => "ry",
        }
    }

    /// Human-readable column label.
    pub fn label(&self) -> &'static str {
        match self {
            EnergyUnit::RatioOfGround => "E/E0",
            EnergyUnit::ElectronVolt => "eV",
            EnergyUnit::Wavenumber => "cm^-1",
            EnergyUnit::Rydberg => "Ry",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "e0" => Ok(EnergyUnit::RatioOfGround),
            "ev" => Ok(EnergyUnit::ElectronVolt),
            "cm-1" => Ok(EnergyUnit::Wavenumber),
            "ry" => Ok(EnergyUnit::Rydberg),
            other => Err(Error::ParameterDomain(format!(
                "unknown energy unit '{other}' (expected e0, ev, cm-1 or ry)"
            ))),
        }
    }
}

/// Reduced-mass handling for the electron-nucleus pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReducedMass {
    Hydrogen,
    Deuterium,
    InfiniteNucleus,
    /// Explicit `mu/m_e` in (0, 1].
    ExplicitRatio(f64),
}

impl ReducedMass {
    /// `mu/m_e`.
    pub fn factor(&self) -> Result<f64> {
        match self {
            ReducedMass::Hydrogen => {
                Ok(PROTON_ELECTRON_MASS_RATIO / (PROTON_ELECTRON_MASS_RATIO + 1.0))
            }
            ReducedMass::Deuterium => {
                Ok(DEUTERON_ELECTRON_MASS_RATIO / (DEUTERON_ELECTRON_MASS_RATIO + 1.0))
            }
            ReducedMass::InfiniteNucleus => Ok(1.0),
            ReducedMass::ExplicitRatio(r) => {
                if r.is_finite() && *r > 0.0 && *r <= 1.0 {
                    Ok(*r)
                } else {
                    Err(Error::ParameterDomain(format!(
                        "reduced mass ratio must lie in (0, 1], got {r}"
                    )))
                }
            }
        }
    }

    /// Flag spelling used by the command line.
    pub fn token(&self) -> String {
        match self {
            ReducedMass::Hydrogen => "h".into(),
            ReducedMass::Deuterium => "d".into(),
            ReducedMass::InfiniteNucleus => "inf".into(),
            ReducedMass::ExplicitRatio(r) => format!("ratio:{r}"),
        }
    }

    /// Syntax only; range checking happens in [`ReducedMass::factor`] so an
    /// out-of-range ratio surfaces as a domain error, not a usage error.
    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "h" => Ok(ReducedMass::Hydrogen),
            "d" => Ok(ReducedMass::Deuterium),
            "inf" => Ok(ReducedMass::InfiniteNucleus),
            other => other
                .strip_prefix("ratio:")
                .and_then(|r| r.parse::<f64>().ok())
                .map(ReducedMass::ExplicitRatio)
                .ok_or_else(|| {
                    Error::ParameterDomain(format!(
                        "unknown mass token '{other}' (expected h, d, inf or ratio:<f>)"
                    ))
                }),
        }
    }
}

/// Which one-electron atom the ratios are scaled to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomConfig {
    pub z: u32,
    pub reduced_mass: ReducedMass,
}

impl AtomConfig {
    pub fn new(z: u32, reduced_mass: ReducedMass) -> Result<Self> {
        if z == 0 {
            return Err(Error::ParameterDomain("nuclear charge must be >= 1".into()));
        }
        reduced_mass.factor()?;
        Ok(AtomConfig { z, reduced_mass })
    }

    pub fn hydrogen() -> Self {
        AtomConfig {
            z: 1,
            reduced_mass: ReducedMass::Hydrogen,
        }
    }

    /// `E0` in Rydberg units: `-Z^2 mu/m_e`.
    fn ground_rydberg(&self) -> Result<f64> {
        if self.z == 0 {
            return Err(Error::ParameterDomain("nuclear charge must be >= 1".into()));
        }
        Ok(-((self.z * self.z) as f64) * self.reduced_mass.factor()?)
    }
}

impl Default for AtomConfig {
    fn default() -> Self {
        AtomConfig::hydrogen()
    }
}

/// The ground energy `E0` expressed in `unit` (by definition 1 in ratio
/// units; exactly -1 Ry for Z = 1 at infinite nuclear mass).
pub fn ground_energy(config: &AtomConfig, unit: EnergyUnit) -> Result<f64> {
    convert(1.0, EnergyUnit::RatioOfGround, unit, config)
}

/// Exact linear conversion between energy units through the constant table.
pub fn convert(value: f64, from: EnergyUnit, to: EnergyUnit, config: &AtomConfig) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::ParameterDomain(format!(
            "cannot convert non-finite energy {value}"
        )));
    }
    if from == to {
        return Ok(value);
    }
    let rydberg = match from {
        EnergyUnit::RatioOfGround => value * config.ground_rydberg()?,
        EnergyUnit::ElectronVolt => value / RYDBERG_ENERGY_EV,
        EnergyUnit::Wavenumber => value / RYDBERG_INF_WAVENUMBER,
        EnergyUnit::Rydberg => value,
    };
    Ok(match to {
        EnergyUnit::RatioOfGround => rydberg / config.ground_rydberg()?,
        EnergyUnit::ElectronVolt => rydberg * RYDBERG_ENERGY_EV,
        EnergyUnit::Wavenumber => rydberg * RYDBERG_INF_WAVENUMBER,
        EnergyUnit::Rydberg => rydberg,
    })
}

/// One row of the embedded constant table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConstantEntry {
    pub name: &'static str,
    pub value: f64,
    pub unit: &'static str,
    pub description: &'static str,
}

/// The embedded constants, for reporting.
pub fn constants_table() -> Vec<ConstantEntry> {
    vec![
        ConstantEntry {
            name: "rydberg_constant_infinite_mass",
            value: RYDBERG_INF_WAVENUMBER,
            unit: "cm^-1",
            description: "Rydberg constant for infinite nuclear mass",
        },
        ConstantEntry {
            name: "rydberg_energy",
            value: RYDBERG_ENERGY_EV,
            unit: "eV",
            description: "Rydberg unit of energy",
        },
        ConstantEntry {
            name: "proton_electron_mass_ratio",
            value: PROTON_ELECTRON_MASS_RATIO,
            unit: "dimensionless",
            description: "m_p / m_e",
        },
        ConstantEntry {
            name: "deuteron_electron_mass_ratio",
            value: DEUTERON_ELECTRON_MASS_RATIO,
            unit: "dimensionless",
            description: "m_d / m_e",
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hydrogen_ground_state_wavenumber() {
        let e0 = ground_energy(&AtomConfig::hydrogen(), EnergyUnit::Wavenumber).unwrap();
        assert_relative_eq!(e0, -109_677.5834028032, max_relative = 1e-12);
    }

    #[test]
    fn infinite_mass_ground_state_is_one_rydberg() {
        let config = AtomConfig::new(1, ReducedMass::InfiniteNucleus).unwrap();
        assert_eq!(ground_energy(&config, EnergyUnit::Rydberg).unwrap(), -1.0);
        assert_relative_eq!(
            ground_energy(&config, EnergyUnit::ElectronVolt).unwrap(),
            -RYDBERG_ENERGY_EV,
            epsilon = 0.0
        );
    }

    #[test]
    fn deuterium_ground_state_wavenumber() {
        let config = AtomConfig::new(1, ReducedMass::Deuterium).unwrap();
        let e0 = ground_energy(&config, EnergyUnit::Wavenumber).unwrap();
        assert_relative_eq!(e0, -109_707.42658320525, max_relative = 1e-12);
    }

    #[test]
    fn charge_scales_quadratically() {
        let z2 = AtomConfig::new(2, ReducedMass::InfiniteNucleus).unwrap();
        assert_eq!(ground_energy(&z2, EnergyUnit::Rydberg).unwrap(), -4.0);
    }

    #[test]
    fn quarter_ratio_in_wavenumbers() {
        let v = convert(
            0.25,
            EnergyUnit::RatioOfGround,
            EnergyUnit::Wavenumber,
            &AtomConfig::hydrogen(),
        )
        .unwrap();
        assert_relative_eq!(v, -27_419.39585070080, max_relative = 1e-12);
    }

    #[test]
    fn electron_volt_per_wavenumber() {
        let v = convert(
            1.0,
            EnergyUnit::Wavenumber,
            EnergyUnit::ElectronVolt,
            &AtomConfig::hydrogen(),
        )
        .unwrap();
        assert_relative_eq!(v, 1.2398419843319814e-4, max_relative = 1e-12);
    }

    #[test]
    fn invalid_configurations_rejected() {
        assert!(AtomConfig::new(0, ReducedMass::Hydrogen).is_err());
        assert!(AtomConfig::new(1, ReducedMass::ExplicitRatio(0.0)).is_err());
        assert!(AtomConfig::new(1, ReducedMass::ExplicitRatio(1.5)).is_err());
        assert!(AtomConfig::new(1, ReducedMass::ExplicitRatio(f64::NAN)).is_err());
        assert!(AtomConfig::new(1, ReducedMass::ExplicitRatio(0.999)).is_ok());
    }

    #[test]
    fn unit_tokens_round_trip() {
        for unit in [
            EnergyUnit::RatioOfGround,
            EnergyUnit::ElectronVolt,
            EnergyUnit::Wavenumber,
            EnergyUnit::Rydberg,
        ] {
            assert_eq!(EnergyUnit::parse(unit.token()).unwrap(), unit);
        }
        assert!(EnergyUnit::parse("kev").is_err());
    }

    #[test]
    fn mass_tokens_round_trip() {
        for mass in [
            ReducedMass::Hydrogen,
            ReducedMass::Deuterium,
            ReducedMass::InfiniteNucleus,
            ReducedMass::ExplicitRatio(0.25),
        ] {
            assert_eq!(ReducedMass::parse(&mass.token()).unwrap(), mass);
        }
        // Syntactically fine, physically out of range: caught by factor().
        assert!(ReducedMass::parse("ratio:2.0").unwrap().factor().is_err());
        assert!(ReducedMass::parse("muon").is_err());
    }

    proptest::proptest! {
        #[test]
        fn conversions_round_trip(
            value in -1.0e6f64..1.0e6,
            from in 0usize..4,
            to in 0usize..4,
            z in 1u32..5,
        ) {
            let units = [
                EnergyUnit::RatioOfGround,
                EnergyUnit::ElectronVolt,
                EnergyUnit::Wavenumber,
                EnergyUnit::Rydberg,
            ];
            let config = AtomConfig::new(z, ReducedMass::Hydrogen).unwrap();
            let there = convert(value, units[from], units[to], &config).unwrap();
            let back = convert(there, units[to], units[from], &config).unwrap();
            let scale = value.abs().max(1e-300);
            proptest::prop_assert!((back - value).abs() <= 1e-12 * scale);
        }
    }
}
