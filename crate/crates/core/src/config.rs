//! Flat `key = value` TOML configuration covering the encoder and the
//! fabrication settings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoder::{ConfigError, EncoderConfig};
use crate::mesher::{FabricationConfig, VesselMeshError};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Config {
    pub encoder: EncoderConfig,
    pub fabrication: FabricationConfig,
    /// Keys absent from the file, sorted.
    pub defaulted: Vec<String>,
}

#[derive(Debug, Error)]
pub enum ConfigFileError {
    #[error("invalid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("{0}")]
    Encoder(#[from] ConfigError),
    #[error("{0}")]
    Fabrication(#[from] VesselMeshError),
    #[error("invalid setting: {0}")]
    Json(#[from] serde_json::Error),
}

fn keys_of<T: Serialize>(value: &T) -> BTreeSet<String> {
    match toml::Value::try_from(value) {
        Ok(toml::Value::Table(t)) => t.keys().cloned().collect(),
        _ => BTreeSet::new(),
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigFileError> {
        let table: toml::Table = text.parse()?;
        let encoder_keys = keys_of(&EncoderConfig::default());
        let fab_keys = keys_of(&FabricationConfig::default());
        let mut encoder = toml::Table::new();
        let mut fabrication = toml::Table::new();
        for (key, value) in table {
            if encoder_keys.contains(&key) {
                encoder.insert(key, value);
            } else if fab_keys.contains(&key) {
                fabrication.insert(key, value);
            } else {
                return Err(ConfigFileError::UnknownKey(key));
            }
        }
        let defaulted = encoder_keys
            .iter()
            .filter(|k| !encoder.contains_key(*k))
            .chain(fab_keys.iter().filter(|k| !fabrication.contains_key(*k)))
            .cloned()
            .collect::<BTreeSet<String>>()
            .into_iter()
            .collect();
        let config = Self {
            encoder: toml::Value::Table(encoder).try_into()?,
            fabrication: toml::Value::Table(fabrication).try_into()?,
            defaulted,
        };
        config.encoder.validate()?;
        config.fabrication.validate()?;
        Ok(config)
    }

    /// All defaults, every key reported as defaulted.
    pub fn defaults() -> Self {
        Self::parse("").expect("defaults are valid")
    }

    /// Inverse of [`Config::snapshot`].
    pub fn from_snapshot(
        map: &serde_json::Map<String, serde_json::Value>,
        defaulted: Vec<String>,
    ) -> Result<Self, ConfigFileError> {
        let encoder_keys = keys_of(&EncoderConfig::default());
        let fab_keys = keys_of(&FabricationConfig::default());
        let mut encoder = serde_json::Map::new();
        let mut fabrication = serde_json::Map::new();
        for (key, value) in map {
            if encoder_keys.contains(key) {
                encoder.insert(key.clone(), value.clone());
            } else if fab_keys.contains(key) {
                fabrication.insert(key.clone(), value.clone());
            } else {
                return Err(ConfigFileError::UnknownKey(key.clone()));
            }
        }
        let config = Self {
            encoder: serde_json::from_value(encoder.into())?,
            fabrication: serde_json::from_value(fabrication.into())?,
            defaulted,
        };
        config.encoder.validate()?;
        config.fabrication.validate()?;
        Ok(config)
    }

    /// Every setting as one flat JSON object.
    pub fn snapshot(&self) -> serde_json::Map<String, serde_json::Value> {
        let mut map = serde_json::Map::new();
        for part in [
            serde_json::to_value(&self.encoder).expect("serializable"),
            serde_json::to_value(&self.fabrication).expect("serializable"),
        ] {
            if let serde_json::Value::Object(m) = part {
                map.extend(m);
            }
        }
        map
    }
}
