//! Flat `key = value` run configuration.
//!
//! A run is assembled from up to four layers, later layers overriding
//! earlier ones: a named preset, a config file, per-key command-line flags,
//! and repeatable `--set key=value` overrides.  Keys are flat and typed;
//! boundary units are the ones people quote (eV, Angstrom^3 in 4 pi eps0
//! units, u, nm, km/s) and everything is converted to SI here, in one
//! place, against the pinned constants table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use qrf_core::atomresponse::{AtomParams, SpectralMode};
use qrf_core::constants::ev_to_rad_s;
use qrf_core::material::Material;
use qrf_core::observables::Scenario;

/// Every config key with its meaning; the single reference list behind
/// `--help`, the documentation, and unknown-key errors.
pub const CONFIG_KEYS: &[(&str, &str)] = &[
    ("atom_volume_a3", "polarizability volume (4 pi eps0 Angstrom^3)"),
    ("atom_transition_ev", "dipole transition energy (eV)"),
    ("atom_mass_u", "atomic mass (u)"),
    ("material", "surface response model: drude | ohmic"),
    ("omega_p_ev", "Drude plasma energy (eV)"),
    ("gamma_mev", "Drude damping energy (meV)"),
    ("rho_ohm_m", "Ohmic resistivity (Ohm m)"),
    ("r_re", "Ohmic real reflection plateau (dimensionless)"),
    ("za_nm", "atom-surface distance (nm)"),
    ("v_km_s", "drift velocity (km/s)"),
    ("mode", "spectral closure: ness | lte"),
    ("backaction", "surface back-action in the dressing: on | off"),
    ("evaluation", "pipeline: full | asymptotic (low-velocity closed forms)"),
    ("sweep_axis", "swept quantity: v | za"),
    ("sweep_values", "comma-separated sweep points (km/s or nm)"),
    ("sweep_log_min", "log-spaced sweep start (km/s or nm)"),
    ("sweep_log_max", "log-spaced sweep end (km/s or nm)"),
    ("sweep_log_count", "log-spaced sweep point count"),
    ("output", "CSV output path (stdout when absent)"),
];

/// One rendered line per key, for help text.
pub fn key_reference() -> String {
    let mut out = String::new();
    for (key, doc) in CONFIG_KEYS {
        let _ = writeln!(out, "  {key:<18} {doc}");
    }
    out
}

/// An untyped key-value layer stack; `build` turns it into a typed run.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    map: BTreeMap<&'static str, String>,
}

impl RawConfig {
    /// Named starting points.
    ///
    /// `rb-au-fig2`: rubidium (47.28 Angstrom^3, 1.3 eV, 86.9 u) above a
    /// Drude gold surface (9 eV plasma energy, 35 meV damping) at 5 nm,
    /// velocity log-swept 1-300 km/s.
    ///
    /// `li-na`: lithium (24.33 Angstrom^3, 1.85 eV, 7.02 u) above an ideal
    /// Ohmic mirror (8e-7 Ohm m, unit real reflection) at 5 nm, 10 km/s.
    pub fn preset(name: &str) -> Result<RawConfig> {
        let mut cfg = RawConfig::default();
        match name {
            "rb-au-fig2" => {
                for (k, v) in [
                    ("atom_volume_a3", "47.28"),
                    ("atom_transition_ev", "1.3"),
                    ("atom_mass_u", "86.9"),
                    ("material", "drude"),
                    ("omega_p_ev", "9.0"),
                    ("gamma_mev", "35.0"),
                    ("za_nm", "5.0"),
                    ("v_km_s", "10.0"),
                    ("mode", "ness"),
                    ("backaction", "on"),
                    ("evaluation", "full"),
                    ("sweep_axis", "v"),
                    ("sweep_log_min", "1.0"),
                    ("sweep_log_max", "300.0"),
                    ("sweep_log_count", "25"),
                ] {
                    cfg.set(k, v)?;
                }
            }
            "li-na" => {
                for (k, v) in [
                    ("atom_volume_a3", "24.33"),
                    ("atom_transition_ev", "1.85"),
                    ("atom_mass_u", "7.02"),
                    ("material", "ohmic"),
                    ("rho_ohm_m", "8.0e-7"),
                    ("r_re", "1.0"),
                    ("za_nm", "5.0"),
                    ("v_km_s", "10.0"),
                    ("mode", "ness"),
                    ("backaction", "on"),
                    ("evaluation", "full"),
                    ("sweep_axis", "v"),
                    ("sweep_values", "10.0"),
                ] {
                    cfg.set(k, v)?;
                }
            }
            other => bail!("unknown preset '{other}' (known: rb-au-fig2, li-na)"),
        }
        Ok(cfg)
    }

    /// Parse a flat config file: one `key = value` per line, `#` comments.
    pub fn from_file(path: &Path) -> Result<RawConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        let mut cfg = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key = value", path.display(), lineno + 1))?;
            cfg.set(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(cfg)
    }

    /// Set one key, rejecting unknown names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let canonical = CONFIG_KEYS
            .iter()
            .map(|(k, _)| *k)
            .find(|k| *k == key)
            .ok_or_else(|| anyhow!("unknown config key '{key}'; known keys:\n{}", key_reference()))?;
        self.map.insert(canonical, value.to_string());
        Ok(())
    }

    /// Apply a `key=value` override string.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("override '{pair}' is not of the form key=value"))?;
        self.set(key.trim(), value.trim())
    }

    /// Overlay another layer on top of this one.
    pub fn overlay(&mut self, upper: &RawConfig) {
        for (k, v) in &upper.map {
            self.map.insert(k, v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| anyhow!("missing config key '{key}'"))
    }

    fn f64(&self, key: &str) -> Result<f64> {
        let raw = self.require(key)?;
        let value: f64 = raw
            .parse()
            .map_err(|_| anyhow!("key '{key}': '{raw}' is not a number"))?;
        if !value.is_finite() {
            bail!("key '{key}': value must be finite");
        }
        Ok(value)
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let value = self.f64(key)?;
        if value <= 0.0 {
            bail!("key '{key}': value must be positive");
        }
        Ok(value)
    }
}

/// Which pipeline evaluates a sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    /// Full spectrum + momentum quadrature.
    Full,
    /// Low-velocity closed forms (leading order in the coupling).
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    V,
    Za,
}

/// A validated, unit-converted run: base scenario plus the sweep plan.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub scenario: Scenario,
    pub evaluation: Evaluation,
    pub sweep_axis: SweepAxis,
    /// Sweep points in SI units (m/s or m), deduplicated, order preserved.
    pub sweep: Vec<f64>,
    pub output: Option<PathBuf>,
}

/// Turn the merged layers into a typed run, validating every key.
pub fn build(raw: &RawConfig) -> Result<RunSpec> {
    let atom = AtomParams::from_atomic_units(
        raw.positive("atom_volume_a3")?,
        raw.positive("atom_transition_ev")?,
        raw.positive("atom_mass_u")?,
    )
    .map_err(|e| anyhow!("atom parameters: {e}"))?;

    let material = match raw.require("material")? {
        "drude" => Material::drude(
            ev_to_rad_s(raw.positive("omega_p_ev")?),
            ev_to_rad_s(raw.positive("gamma_mev")? * 1.0e-3),
        )
        .map_err(|e| anyhow!("key 'omega_p_ev'/'gamma_mev': {e}"))?,
        "ohmic" => Material::ohmic_ideal(
            raw.positive("rho_ohm_m")?,
            // the plateau defaults to a perfect mirror
            match raw.get("r_re") {
                Some(_) => raw.positive("r_re")?,
                None => 1.0,
            },
        )
        .map_err(|e| anyhow!("key 'rho_ohm_m'/'r_re': {e}"))?,
        other => bail!("key 'material': '{other}' is not drude | ohmic"),
    };

    let za = raw.positive("za_nm")? * 1.0e-9;
    let v = raw.f64("v_km_s")? * 1.0e3;
    let mut scenario =
        Scenario::new(atom, material, za, v).map_err(|e| anyhow!("scenario: {e}"))?;

    scenario.mode = match raw.get("mode").unwrap_or("ness") {
        "ness" => SpectralMode::Ness,
        "lte" => SpectralMode::Lte,
        other => bail!("key 'mode': '{other}' is not ness | lte"),
    };
    scenario.config.response.backaction = match raw.get("backaction").unwrap_or("on") {
        "on" => true,
        "off" => false,
        other => bail!("key 'backaction': '{other}' is not on | off"),
    };

    let evaluation = match raw.get("evaluation").unwrap_or("full") {
        "full" => Evaluation::Full,
        "asymptotic" => Evaluation::Asymptotic,
        other => bail!("key 'evaluation': '{other}' is not full | asymptotic"),
    };
    if evaluation == Evaluation::Asymptotic && scenario.mode == SpectralMode::Lte {
        bail!(
            "key 'evaluation': the asymptotic closed forms describe the steady state; \
             use mode = ness with them"
        );
    }

    let sweep_axis = match raw.get("sweep_axis").unwrap_or("v") {
        "v" => SweepAxis::V,
        "za" => SweepAxis::Za,
        other => bail!("key 'sweep_axis': '{other}' is not v | za"),
    };

    // boundary units of the swept quantity
    let unit = match sweep_axis {
        SweepAxis::V => 1.0e3,
        SweepAxis::Za => 1.0e-9,
    };
    let mut sweep: Vec<f64> = Vec::new();
    if let Some(list) = raw.get("sweep_values") {
        for part in list.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let value: f64 = part
                .parse()
                .map_err(|_| anyhow!("key 'sweep_values': '{part}' is not a number"))?;
            if !(value.is_finite() && value > 0.0) {
                bail!("key 'sweep_values': points must be positive and finite");
            }
            sweep.push(value * unit);
        }
    } else if raw.get("sweep_log_min").is_some() {
        let lo = raw.positive("sweep_log_min")?;
        let hi = raw.positive("sweep_log_max")?;
        let n = raw
            .require("sweep_log_count")?
            .parse::<usize>()
            .map_err(|_| anyhow!("key 'sweep_log_count': not a count"))?;
        if n < 2 || hi <= lo {
            bail!("key 'sweep_log_min/max/count': need at least two points with max > min");
        }
        let step = (hi / lo).ln() / (n - 1) as f64;
        for i in 0..n {
            sweep.push(lo * (step * i as f64).exp() * unit);
        }
    }
    // deduplicate, preserving first occurrence
    let mut seen = Vec::new();
    sweep.retain(|x| {
        if seen.iter().any(|s: &f64| s == x) {
            false
        } else {
            seen.push(*x);
            true
        }
    });
    if sweep.is_empty() {
        bail!("key 'sweep_values': the sweep is empty; give sweep_values or sweep_log_min/max/count");
    }

    let output = raw.get("output").map(PathBuf::from);

    Ok(RunSpec {
        scenario,
        evaluation,
        sweep_axis,
        sweep,
        output,
    })
}
