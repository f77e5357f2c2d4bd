//! Scenario files: TOML schema, lookup order, hashing, event logs.

use std::collections::BTreeMap;
use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use dercost_core::distributions::{
    build_distribution, DistributionSpec, ExtremeValueParams, HypergeometricParams,
};
use dercost_core::{DischargeEvent, DiscreteDistribution, EquipmentScenario, FinancialParams};

use crate::CliError;

/// Name that resolves even when no scenario file exists on disk.
pub const BUILTIN_NAME: &str = "dig_table1";
const BUILTIN_TOML: &str = include_str!("../../../scenarios/dig_table1.toml");

/// Directory searched for `<name>` / `<name>.toml` before the built-in.
pub const SEED_DIR_VAR: &str = "DERCOST_SEED_DIR";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum ScenarioKind {
    Generator,
    Battery,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquipmentTable {
    pub capital_cost: f64,
    #[serde(default)]
    pub salvage_value: f64,
    #[serde(default)]
    pub replacement_cost: Option<f64>,
    pub economic_life: f64,
    pub annual_usage: f64,
    pub project_years: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinancialTable {
    pub nominal_interest: f64,
    pub inflation: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistTable {
    Hypergeometric {
        population: u64,
        trait_count: u64,
        sample: u64,
        k_min: u64,
        k_max: u64,
        values: Vec<f64>,
    },
    ExtremeValue {
        location: f64,
        scale: f64,
        indices: Vec<f64>,
        values: Vec<f64>,
    },
    Discrete {
        values: Vec<f64>,
        probabilities: Vec<f64>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub gate_tolerance: Option<f64>,
    #[serde(default)]
    pub year: Option<u32>,
    #[serde(default)]
    pub present_value: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatteryTable {
    pub rated_cycle_life: f64,
    pub rated_dod: f64,
    pub rated_capacity: f64,
    pub u0: f64,
    pub u1: f64,
    #[serde(default)]
    pub event_log: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub kind: ScenarioKind,
    #[serde(default)]
    pub meta: Meta,
    pub equipment: EquipmentTable,
    pub financial: FinancialTable,
    #[serde(default)]
    pub lifetime_dist: Option<DistTable>,
    #[serde(default)]
    pub usage_dist: Option<DistTable>,
    #[serde(default)]
    pub options: Options,
    #[serde(default)]
    pub battery: Option<BatteryTable>,
}

/// A parsed scenario plus the validated core inputs built from it.
pub struct LoadedScenario {
    pub file: ScenarioFile,
    pub equipment: EquipmentScenario,
    pub financial: FinancialParams,
    /// SHA-256 of the raw scenario bytes, lowercase hex.
    pub hash: String,
    /// Where the scenario came from, for report headers.
    pub label: String,
    /// Directory for resolving relative companion files, when on disk.
    pub dir: Option<PathBuf>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

fn read_file(path: &Path) -> Result<(String, String, Option<PathBuf>), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Io(format!("cannot read {}: {err}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf);
    Ok((text, path.display().to_string(), dir))
}

/// Lookup order: literal path, then `$DERCOST_SEED_DIR`, then the built-in.
fn resolve(name: &str) -> Result<(String, String, Option<PathBuf>), CliError> {
    let literal = Path::new(name);
    if literal.is_file() {
        return read_file(literal);
    }
    if let Ok(seed_dir) = env::var(SEED_DIR_VAR) {
        let mut candidates = vec![Path::new(&seed_dir).join(name)];
        if literal.extension().is_none() {
            candidates.push(Path::new(&seed_dir).join(format!("{name}.toml")));
        }
        for candidate in candidates {
            if candidate.is_file() {
                return read_file(&candidate);
            }
        }
    }
    if name == BUILTIN_NAME {
        return Ok((
            BUILTIN_TOML.to_string(),
            format!("{BUILTIN_NAME} (built-in)"),
            None,
        ));
    }
    Err(CliError::Io(format!(
        "scenario `{name}` is neither a file, a name under ${SEED_DIR_VAR}, nor the built-in `{BUILTIN_NAME}`"
    )))
}

impl LoadedScenario {
    pub fn load(name: &str) -> Result<Self, CliError> {
        let (text, label, dir) = resolve(name)?;
        let hash = sha256_hex(text.as_bytes());
        let file: ScenarioFile = toml::from_str(&text)
            .map_err(|err| CliError::Validation(format!("{label}: {err}")))?;

        let eq = &file.equipment;
        let equipment = EquipmentScenario {
            capital_cost: eq.capital_cost,
            salvage_value: eq.salvage_value,
            replacement_cost: eq.replacement_cost,
            economic_life: eq.economic_life,
            annual_usage: eq.annual_usage,
            project_years: eq.project_years,
        };
        equipment.validate()?;
        let financial = FinancialParams::new(file.financial.nominal_interest, file.financial.inflation)?;

        Ok(LoadedScenario {
            file,
            equipment,
            financial,
            hash,
            label,
            dir,
        })
    }

    pub fn lifetime_distribution(&self) -> Result<DiscreteDistribution, CliError> {
        match &self.file.lifetime_dist {
            Some(table) => build(table),
            None => Err(CliError::Validation(
                "scenario has no [lifetime_dist] table".to_string(),
            )),
        }
    }

    pub fn usage_distribution(&self) -> Result<DiscreteDistribution, CliError> {
        match &self.file.usage_dist {
            Some(table) => build(table),
            None => Err(CliError::Validation(
                "scenario has no [usage_dist] table".to_string(),
            )),
        }
    }

    /// Resolves a companion file named by the scenario, relative to it.
    pub fn companion_path(&self, name: &str) -> Result<PathBuf, CliError> {
        let raw = Path::new(name);
        if raw.is_absolute() {
            return Ok(raw.to_path_buf());
        }
        match &self.dir {
            Some(dir) => Ok(dir.join(raw)),
            None => Err(CliError::Validation(format!(
                "companion file `{name}` is relative but the scenario is built-in; pass a scenario file on disk"
            ))),
        }
    }
}

fn build(table: &DistTable) -> Result<DiscreteDistribution, CliError> {
    let spec = match table {
        DistTable::Hypergeometric {
            population,
            trait_count,
            sample,
            k_min,
            k_max,
            values,
        } => DistributionSpec::Hypergeometric(HypergeometricParams {
            population: *population,
            trait_count: *trait_count,
            sample: *sample,
            k_min: *k_min,
            k_max: *k_max,
            values: values.clone(),
        }),
        DistTable::ExtremeValue {
            location,
            scale,
            indices,
            values,
        } => DistributionSpec::ExtremeValue(ExtremeValueParams {
            location: *location,
            scale: *scale,
            indices: indices.clone(),
            values: values.clone(),
        }),
        DistTable::Discrete {
            values,
            probabilities,
        } => {
            if values.len() != probabilities.len() {
                return Err(CliError::Validation(format!(
                    "discrete distribution has {} values but {} probabilities",
                    values.len(),
                    probabilities.len()
                )));
            }
            DistributionSpec::Explicit(
                values
                    .iter()
                    .copied()
                    .zip(probabilities.iter().copied())
                    .collect(),
            )
        }
    };
    Ok(build_distribution(&spec)?)
}

#[derive(Debug, Deserialize)]
struct EventRow {
    timestamp: String,
    discharged_ah: f64,
    capacity_ah: f64,
    dod: f64,
}

/// Reads a discharge log and groups events by the timestamp's year prefix.
pub fn load_event_log(path: &Path) -> Result<Vec<(String, Vec<DischargeEvent>)>, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|err| CliError::Io(format!("cannot read event log {}: {err}", path.display())))?;
    let mut by_year: BTreeMap<String, Vec<DischargeEvent>> = BTreeMap::new();
    for (index, row) in reader.deserialize::<EventRow>().enumerate() {
        let row = row.map_err(|err| {
            CliError::Validation(format!("event log row {}: {err}", index + 1))
        })?;
        let year = row.timestamp.get(..4).unwrap_or("");
        if year.len() != 4 || !year.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CliError::Validation(format!(
                "event log row {}: timestamp `{}` does not start with a 4-digit year",
                index + 1,
                row.timestamp
            )));
        }
        let event = DischargeEvent {
            discharged: row.discharged_ah,
            capacity: row.capacity_ah,
            dod: row.dod,
        };
        event.validate()?;
        by_year.entry(year.to_string()).or_default().push(event);
    }
    if by_year.is_empty() {
        return Err(CliError::Validation(format!(
            "event log {} has no data rows",
            path.display()
        )));
    }
    Ok(by_year.into_iter().collect())
}
