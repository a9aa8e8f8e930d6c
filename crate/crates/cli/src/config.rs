//! JSON run configuration: strict schema, explicit defaults, and the
//! conversions into the library's domain types.

use serde::Deserialize;

use qtherm::{DegeneracyPolicy, Grid1D, PotentialSpec, UnitSystem};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub units: UnitsConfig,
    pub potential: PotentialConfig,
    pub grid: GridConfig,
    /// How many eigenpairs the solver produces.
    pub levels: usize,
    #[serde(default)]
    pub degeneracy_policy: PolicyConfig,
    #[serde(default)]
    pub temperatures: Vec<f64>,
    /// (upper, lower) level index pairs for the shift table.
    #[serde(default)]
    pub transitions: Vec<[usize; 2]>,
    #[serde(default)]
    pub evolution: Option<EvolutionConfig>,
    #[serde(default)]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(tag = "system", rename_all = "snake_case", deny_unknown_fields)]
pub enum UnitsConfig {
    #[default]
    Natural,
    Explicit {
        hbar: f64,
        k_b: f64,
        mass: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    Harmonic {
        /// Defaults to the unit system's mass.
        mass: Option<f64>,
        omega: f64,
        #[serde(default)]
        offset: f64,
    },
    InfiniteWell {
        width: f64,
        #[serde(default)]
        offset: f64,
    },
    Tabulated {
        values: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicyConfig {
    #[default]
    AllOnes,
    Explicit {
        table: Vec<u32>,
    },
    Cluster {
        tolerance: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub components: Vec<ComponentConfig>,
    pub times: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub level: usize,
    #[serde(default = "one")]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<String>,
    #[serde(default)]
    pub format: Option<FormatConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FormatConfig {
    Csv,
    Report,
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut deserializer = serde_json::Deserializer::from_str(text);
    let config: RunConfig = serde_path_to_error::deserialize(&mut deserializer)
        .map_err(|e| CliError::Config(format!("{}: {}", e.path(), e.inner())))?;
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));

        if let UnitsConfig::Explicit { hbar, k_b, mass } = self.units {
            for (name, v) in [("units.hbar", hbar), ("units.k_b", k_b), ("units.mass", mass)] {
                if !(v.is_finite() && v > 0.0) {
                    return fail(format!("{name}: must be a positive number, got {v}"));
                }
            }
        }

        if !(self.grid.x_min.is_finite() && self.grid.x_max.is_finite()) {
            return fail("grid: bounds must be finite".into());
        }
        if self.grid.x_max <= self.grid.x_min {
            return fail(format!(
                "grid.x_max: must exceed x_min, got [{}, {}]",
                self.grid.x_min, self.grid.x_max
            ));
        }
        if self.grid.n_points < 3 {
            return fail(format!(
                "grid.n_points: need at least 3 points, got {}",
                self.grid.n_points
            ));
        }

        match &self.potential {
            PotentialConfig::Harmonic { mass, omega, offset } => {
                if let Some(m) = mass {
                    if !(m.is_finite() && *m > 0.0) {
                        return fail(format!("potential.mass: must be positive, got {m}"));
                    }
                }
                if !(omega.is_finite() && *omega > 0.0) {
                    return fail(format!("potential.omega: must be positive, got {omega}"));
                }
                if !offset.is_finite() {
                    return fail(format!("potential.offset: must be finite, got {offset}"));
                }
            }
            PotentialConfig::InfiniteWell { width, offset } => {
                if !(width.is_finite() && *width > 0.0) {
                    return fail(format!("potential.width: must be positive, got {width}"));
                }
                if !offset.is_finite() {
                    return fail(format!("potential.offset: must be finite, got {offset}"));
                }
            }
            PotentialConfig::Tabulated { values, offset } => {
                if values.len() != self.grid.n_points {
                    return fail(format!(
                        "potential.values: {} samples for a {}-point grid",
                        values.len(),
                        self.grid.n_points
                    ));
                }
                if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
                    return fail(format!("potential.values: non-finite entry {bad}"));
                }
                if !offset.is_finite() {
                    return fail(format!("potential.offset: must be finite, got {offset}"));
                }
            }
        }

        if self.levels == 0 {
            return fail("levels: must be at least 1".into());
        }
        if self.levels > self.grid.n_points.saturating_sub(2) {
            return fail(format!(
                "levels: {} exceeds the {} interior grid points",
                self.levels,
                self.grid.n_points.saturating_sub(2)
            ));
        }

        match &self.degeneracy_policy {
            PolicyConfig::AllOnes => {}
            PolicyConfig::Explicit { table } => {
                if table.len() != self.levels {
                    return fail(format!(
                        "degeneracy_policy.table: {} entries for {} levels",
                        table.len(),
                        self.levels
                    ));
                }
                if let Some(pos) = table.iter().position(|&g| g == 0) {
                    return fail(format!("degeneracy_policy.table[{pos}]: degeneracy must be at least 1"));
                }
            }
            PolicyConfig::Cluster { tolerance } => {
                if !(tolerance.is_finite() && *tolerance > 0.0) {
                    return fail(format!(
                        "degeneracy_policy.tolerance: must be positive, got {tolerance}"
                    ));
                }
            }
        }

        for (i, t) in self.temperatures.iter().enumerate() {
            if !(t.is_finite() && *t >= 0.0) {
                return fail(format!("temperatures[{i}]: must be a finite non-negative number, got {t}"));
            }
        }

        for (k, pair) in self.transitions.iter().enumerate() {
            for index in pair {
                if *index >= self.levels {
                    return fail(format!(
                        "transitions[{k}]: level index {index} out of range (levels = {})",
                        self.levels
                    ));
                }
            }
        }

        if let Some(evolution) = &self.evolution {
            if evolution.components.is_empty() {
                return fail("evolution.components: at least one component required".into());
            }
            for (k, c) in evolution.components.iter().enumerate() {
                if c.level >= self.levels {
                    return fail(format!(
                        "evolution.components[{k}].level: index {} out of range (levels = {})",
                        c.level, self.levels
                    ));
                }
                if !(c.re.is_finite() && c.im.is_finite()) {
                    return fail(format!("evolution.components[{k}]: coefficient must be finite"));
                }
            }
            if evolution.times.is_empty() {
                return fail("evolution.times: at least one sample time required".into());
            }
            if let Some(bad) = evolution.times.iter().find(|t| !t.is_finite()) {
                return fail(format!("evolution.times: non-finite entry {bad}"));
            }
        }

        Ok(())
    }

    pub fn units(&self) -> Result<UnitSystem, CliError> {
        Ok(match self.units {
            UnitsConfig::Natural => UnitSystem::natural(),
            UnitsConfig::Explicit { hbar, k_b, mass } => UnitSystem::new(hbar, k_b, mass)?,
        })
    }

    pub fn grid(&self) -> Result<Grid1D, CliError> {
        Ok(Grid1D::new(self.grid.x_min, self.grid.x_max, self.grid.n_points)?)
    }

    pub fn potential_spec(&self, units: &UnitSystem) -> Result<PotentialSpec, CliError> {
        let spec = match &self.potential {
            PotentialConfig::Harmonic { mass, omega, offset } => {
                let mass = mass.unwrap_or_else(|| units.mass_default());
                PotentialSpec::harmonic(mass, *omega)?.with_offset(*offset)?
            }
            PotentialConfig::InfiniteWell { width, offset } => {
                PotentialSpec::infinite_well(*width)?.with_offset(*offset)?
            }
            PotentialConfig::Tabulated { values, offset } => {
                PotentialSpec::tabulated(values.clone())?.with_offset(*offset)?
            }
        };
        Ok(spec)
    }

    /// Mass of the particle in the kinetic term.
    pub fn particle_mass(&self, units: &UnitSystem) -> f64 {
        match &self.potential {
            PotentialConfig::Harmonic { mass, .. } => mass.unwrap_or_else(|| units.mass_default()),
            _ => units.mass_default(),
        }
    }

    pub fn degeneracy_policy(&self) -> DegeneracyPolicy {
        match &self.degeneracy_policy {
            PolicyConfig::AllOnes => DegeneracyPolicy::AllOnes,
            PolicyConfig::Explicit { table } => DegeneracyPolicy::Explicit(table.clone()),
            PolicyConfig::Cluster { tolerance } => DegeneracyPolicy::Cluster {
                tolerance: *tolerance,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_fills_defaults() {
        let cfg = parse_config(
            r#"{
                "potential": {"kind": "harmonic", "omega": 2.0},
                "grid": {"x_min": -5.0, "x_max": 5.0, "n_points": 101},
                "levels": 3
            }"#,
        )
        .unwrap();
        assert!(matches!(cfg.units, UnitsConfig::Natural));
        assert!(matches!(cfg.degeneracy_policy, PolicyConfig::AllOnes));
        assert!(cfg.temperatures.is_empty());
        assert!(cfg.transitions.is_empty());
        let units = cfg.units().unwrap();
        assert_eq!(cfg.particle_mass(&units), 1.0);
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_path() {
        let err = parse_config(
            r#"{
                "potential": {"kind": "harmonic", "omega": 2.0, "omga": 1.0},
                "grid": {"x_min": -5.0, "x_max": 5.0, "n_points": 101},
                "levels": 3
            }"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("potential"), "{msg}");
        assert!(msg.contains("omga"), "{msg}");
    }

    #[test]
    fn schema_violations_name_the_field() {
        let err = parse_config(
            r#"{
                "potential": {"kind": "harmonic", "omega": 2.0},
                "grid": {"x_min": -5.0, "x_max": 5.0, "n_points": 101},
                "levels": 3,
                "temperatures": [0.5, -2.0]
            }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("temperatures[1]"), "{err}");
    }

    #[test]
    fn tabulated_length_must_match_the_grid() {
        let err = parse_config(
            r#"{
                "potential": {"kind": "tabulated", "values": [0.0, 1.0]},
                "grid": {"x_min": 0.0, "x_max": 1.0, "n_points": 11},
                "levels": 2
            }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("potential.values"), "{err}");
    }

    #[test]
    fn transition_indices_are_checked_against_levels() {
        let err = parse_config(
            r#"{
                "potential": {"kind": "harmonic", "omega": 1.0},
                "grid": {"x_min": -5.0, "x_max": 5.0, "n_points": 101},
                "levels": 3,
                "transitions": [[5, 0]]
            }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("transitions[0]"), "{err}");
    }

    #[test]
    fn explicit_degeneracy_table_must_cover_every_level() {
        let err = parse_config(
            r#"{
                "potential": {"kind": "harmonic", "omega": 1.0},
                "grid": {"x_min": -5.0, "x_max": 5.0, "n_points": 101},
                "levels": 3,
                "degeneracy_policy": {"policy": "explicit", "table": [1, 4]}
            }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("degeneracy_policy.table"), "{err}");
    }
}
