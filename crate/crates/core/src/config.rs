//! TOML configuration files holding one [`SystemParams`].
//!
//! Keys are exactly the field names of [`SystemParams`], all in SI units:
//!
//! | key                | unit  |
//! |--------------------|-------|
//! | `cavity_length`    | m     |
//! | `laser_wavelength` | m     |
//! | `mirror_mass`      | kg    |
//! | `mech_freq`        | rad/s |
//! | `mech_damping`     | rad/s |
//! | `cavity_decay`     | rad/s |
//! | `input_power`      | W     |
//! | `bare_detuning`    | rad/s |
//! | `opa_gain`         | rad/s |
//! | `opa_phase`        | rad   |
//! | `kerr_coeff`       | s^-1  |
//! | `bath_temperature` | K     |
//!
//! Every key is required and unknown keys are rejected.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::units::{ParamError, SystemParams};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    Invalid(#[from] ParamError),
}

pub fn from_toml_str(text: &str) -> Result<SystemParams, ConfigError> {
    let params: SystemParams =
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))?;
    Ok(params.validated()?)
}

pub fn to_toml_string(params: &SystemParams) -> String {
    toml::to_string(params).expect("SystemParams serializes to TOML")
}

pub fn load(path: &Path) -> Result<SystemParams, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_toml_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unknown_key_is_named() {
        let mut text = to_toml_string(&SystemParams::reference());
        text.push_str("kerr_coef = 0.1\n");
        let err = from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("kerr_coef"), "{err}");
    }

    #[test]
    fn missing_key_is_an_error() {
        let text: String = to_toml_string(&SystemParams::reference())
            .lines()
            .filter(|l| !l.starts_with("opa_gain"))
            .map(|l| format!("{l}\n"))
            .collect();
        let err = from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("opa_gain"), "{err}");
    }

    #[test]
    fn invalid_values_are_rejected() {
        let p = SystemParams { cavity_decay: -1.0, ..SystemParams::reference() };
        let err = from_toml_str(&to_toml_string(&p)).unwrap_err();
        assert!(matches!(err, ConfigError::Invalid(_)));
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_identical(
            l in 1e-6f64..1.0, lam in 1e-7f64..1e-5, m in 1e-15f64..1e-6,
            wm in 1e3f64..1e10, gm in 0.0f64..1e4, k in 1e3f64..1e9,
            p in 1e-9f64..1.0, d0 in -1e9f64..1e9, g in 0.0f64..1e9,
            th in 0.0f64..6.283, chi in 0.0f64..1.0, t in 0.0f64..10.0,
        ) {
            let params = SystemParams {
                cavity_length: l, laser_wavelength: lam, mirror_mass: m, mech_freq: wm,
                mech_damping: gm, cavity_decay: k, input_power: p, bare_detuning: d0,
                opa_gain: g, opa_phase: th, kerr_coeff: chi, bath_temperature: t,
            }.validated().unwrap();
            let back = from_toml_str(&to_toml_string(&params)).unwrap();
            prop_assert_eq!(back, params);
            for (a, b) in [(back.bare_detuning, params.bare_detuning), (back.opa_phase, params.opa_phase)] {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
