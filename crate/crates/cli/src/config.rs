//! Job configuration: a single JSON document per invocation, with CLI flags
//! overriding individual fields. Validation happens up front so every later
//! failure can be attributed to numerics rather than malformed input.

use serde::Deserialize;
use std::path::Path;

use modflow_core::flow::{SymmetricRegion, TwoIntervalCone};
use modflow_core::{CircleArc, NInterval};

use crate::error::{config_err, CliError, CliResult};

/// Region described either as explicit line intervals or as a symmetric
/// n-interval (the n-th roots of a circle arc). Exactly one of the two forms
/// may be present; commands state which forms they accept.
#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct SymmetricSpec {
    pub n: usize,
    /// Base arc as (start, end) angles in radians, counterclockwise.
    pub arc: [f64; 2],
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

impl Range {
    fn new(from: f64, to: f64, count: usize) -> Self {
        Range { from, to, count }
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.to - self.from) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.to
                } else {
                    self.from + step * i as f64
                }
            })
            .collect()
    }

    fn validate(&self, what: &str) -> CliResult<()> {
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(CliError::Config(format!(
                "{what} range must have finite from < to, got ({}, {})",
                self.from, self.to
            )));
        }
        if self.count < 2 {
            return Err(CliError::Config(format!(
                "{what} resolution must be at least 2, got {}",
                self.count
            )));
        }
        Ok(())
    }
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct FlowGrid {
    pub points_per_component: usize,
    pub t: Range,
}

impl Default for FlowGrid {
    fn default() -> Self {
        FlowGrid {
            points_per_component: 5,
            t: Range::new(-2.0, 2.0, 21),
        }
    }
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct OrbitGrid {
    pub s: Range,
}

impl Default for OrbitGrid {
    fn default() -> Self {
        OrbitGrid {
            s: Range::new(-1.0, 1.0, 201),
        }
    }
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct MixingGrid {
    pub t: Range,
    pub steps_per_unit: usize,
}

impl Default for MixingGrid {
    fn default() -> Self {
        MixingGrid {
            t: Range::new(-2.0, 2.0, 41),
            steps_per_unit: modflow_core::tol::MIXING_STEPS_PER_UNIT,
        }
    }
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct ThermoGrid {
    /// Cells along the right lightray coordinate u.
    pub nu: usize,
    /// Cells along the left lightray coordinate v.
    pub nv: usize,
    pub boost_points: usize,
}

impl Default for ThermoGrid {
    fn default() -> Self {
        ThermoGrid {
            nu: 200,
            nv: 200,
            boost_points: 101,
        }
    }
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct KmsGrid {
    pub pairs: usize,
}

impl Default for KmsGrid {
    fn default() -> Self {
        KmsGrid { pairs: 100 }
    }
}

#[derive(Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields, default)]
pub struct Grids {
    pub flow: FlowGrid,
    pub orbit: OrbitGrid,
    pub mixing: MixingGrid,
    pub thermo: ThermoGrid,
    pub kms: KmsGrid,
}

#[derive(Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub format: Option<String>,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct JobConfig {
    /// Line-side region: list of [a, b] component intervals.
    pub intervals: Option<Vec<[f64; 2]>>,
    /// Circle-side region: n-th roots of a base arc.
    pub symmetric: Option<SymmetricSpec>,
    pub central_charge: f64,
    pub epsilon: f64,
    /// Regulator sweep for the kms command; defaults to [1e-3, 1e-6].
    pub epsilons: Option<Vec<f64>>,
    /// RNG seed for the kms command's point draws.
    pub seed: u64,
    /// Zoom factor for the orbit command's u_zoom column.
    pub zoom: f64,
    /// Explicit flow seed points (line coordinates); defaults to evenly
    /// placed interior points of every component.
    pub seeds: Option<Vec<f64>>,
    /// Base point (line coordinate) selecting the mixing flow line.
    pub base_point: Option<f64>,
    /// Orbit start as a Minkowski point [t, x]; defaults to the cone center.
    pub orbit_start: Option<[f64; 2]>,
    /// Lightray point [u, v] for the charge-splitting command.
    pub point: Option<[f64; 2]>,
    pub grids: Grids,
    pub output: OutputSpec,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            intervals: None,
            symmetric: None,
            central_charge: 1.0,
            epsilon: 1e-6,
            epsilons: None,
            seed: 0,
            zoom: 100.0,
            seeds: None,
            base_point: None,
            orbit_start: None,
            point: None,
            grids: Grids::default(),
            output: OutputSpec::default(),
        }
    }
}

/// The validated region forms a command can work with.
pub enum Region {
    Line(NInterval),
    Circle(SymmetricRegion),
}

impl JobConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: JobConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(CliError::Config(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        if let Some(eps) = &self.epsilons {
            if eps.is_empty() || eps.iter().any(|&e| !(e.is_finite() && e > 0.0)) {
                return Err(CliError::Config(
                    "epsilons must be a non-empty list of positive finite values".to_string(),
                ));
            }
        }
        if !(self.zoom.is_finite() && self.zoom != 0.0) {
            return Err(CliError::Config(format!(
                "zoom must be finite and nonzero, got {}",
                self.zoom
            )));
        }
        if !self.central_charge.is_finite() {
            return Err(CliError::Config(
                "central_charge must be finite".to_string(),
            ));
        }
        if self.intervals.is_some() && self.symmetric.is_some() {
            return Err(CliError::Config(
                "give either intervals or symmetric, not both".to_string(),
            ));
        }
        if self.grids.flow.points_per_component == 0 {
            return Err(CliError::Config(
                "flow points_per_component must be at least 1".to_string(),
            ));
        }
        if self.grids.mixing.steps_per_unit == 0 {
            return Err(CliError::Config(
                "mixing steps_per_unit must be at least 1".to_string(),
            ));
        }
        if self.grids.kms.pairs == 0 {
            return Err(CliError::Config("kms pairs must be at least 1".to_string()));
        }
        self.grids.flow.t.validate("flow t")?;
        self.grids.orbit.s.validate("orbit s")?;
        self.grids.mixing.t.validate("mixing t")?;
        for (what, v) in [
            ("thermo nu", self.grids.thermo.nu),
            ("thermo nv", self.grids.thermo.nv),
            ("thermo boost_points", self.grids.thermo.boost_points),
        ] {
            if v < 2 {
                return Err(CliError::Config(format!(
                    "{what} resolution must be at least 2, got {v}"
                )));
            }
        }
        // Eagerly validate the region forms so bad geometry is a config error.
        if self.intervals.is_some() {
            self.line_region()?;
        }
        if self.symmetric.is_some() {
            self.circle_region()?;
        }
        Ok(())
    }

    pub fn line_region(&self) -> CliResult<NInterval> {
        let pairs = self.intervals.as_ref().ok_or_else(|| {
            CliError::Config("this command needs an intervals region".to_string())
        })?;
        let pairs: Vec<(f64, f64)> = pairs.iter().map(|p| (p[0], p[1])).collect();
        NInterval::from_pairs(&pairs).map_err(config_err)
    }

    pub fn output_path(&self) -> Option<&str> {
        self.output.path.as_deref()
    }

    pub fn output_format(&self) -> Option<&str> {
        self.output.format.as_deref()
    }

    pub fn circle_region(&self) -> CliResult<SymmetricRegion> {
        let spec = self
            .symmetric
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs a symmetric region".to_string()))?;
        let arc = CircleArc::new(spec.arc[0], spec.arc[1]).map_err(config_err)?;
        SymmetricRegion::new(arc, spec.n).map_err(config_err)
    }

    /// Region in whichever form the config provides.
    pub fn region(&self) -> CliResult<Region> {
        if self.symmetric.is_some() {
            Ok(Region::Circle(self.circle_region()?))
        } else {
            Ok(Region::Line(self.line_region()?))
        }
    }

    /// Double-cone view of a two-component region; the cone commands accept
    /// explicit intervals only (the lightray picture lives on the line).
    pub fn cone(&self) -> CliResult<TwoIntervalCone> {
        let region = self.line_region()?;
        if region.n() != 2 {
            return Err(CliError::Config(format!(
                "a double cone needs exactly 2 intervals, got {}",
                region.n()
            )));
        }
        let c = region.components();
        TwoIntervalCone::new(c[1].lo(), c[1].hi(), c[0].lo(), c[0].hi()).map_err(config_err)
    }
}
