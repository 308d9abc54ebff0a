//! Resolved parameters: built-in defaults, then the config file, then
//! positional `key=value` arguments, then `--flags`.
//!
//! The config file is plain text with one `key = value` per line; `#` starts
//! a comment and blank lines are ignored. Keys are case-insensitive and `-`
//! and `_` are interchangeable, so `grid-levels`, `GRID_LEVELS` and
//! `grid_levels` name the same setting. Unknown keys are errors.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::CliError;

/// A setting with its default and one-line description.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

const fn key(name: &'static str, default: &'static str, help: &'static str) -> Key {
    Key { name, default, help }
}

/// Every setting the CLI knows, with its default.
///
/// | key | default | meaning |
/// |-----|---------|---------|
/// | `measure` | `lebesgue` | measure spec |
/// | `space` | `h2` | `opnorm` space, `h2` or `dalpha:<α>` |
/// | `n` | `1024` | truncation `N`; `opnorm` and `hilbert` take a comma list |
/// | `k` | `5` | counterexample truncation `K` |
/// | `depth` | `16` | Carleson box depth |
/// | `tol` | `1e-10` | power-iteration relative tolerance |
/// | `max_iter` | `100000` | power-iteration cap |
/// | `seed` | `0` | RNG seed |
/// | `samples` | `100` | identity-check sample count |
/// | `degree` | `32` | pairing-probe polynomial degree |
/// | `trials` | `200` | pairing-probe trials |
/// | `s_list` | `-0.75,-0.5,-0.25,0,0.5,1` | family-scan exponents |
/// | `grid_levels` | `40` | clustered radii `1 − 2^{−j/2}`, `j ≤ J` |
/// | `grid_angles` | `256` | rays of the sampling grid |
/// | `grid_uniform` | `64` | extra equispaced radii |
/// | `max_radius` | `none` | drop grid radii above this |
/// | `quad_radial` | `256` | Gauss–Legendre radial nodes |
/// | `quad_angular` | `512` | trapezoid angular nodes |
/// | `panel_order` | `24` | nodes per geometric radial panel |
/// | `panel_depth` | `96` | geometric radial panels |
/// | `threshold` | `2` | moment-decay threshold on `(n + 1) μ[n]` |
/// | `format` | `json` | `json` or `csv` |
/// | `output` | `-` | output path, `-` for stdout |
///
/// `experiment family-scan` uses `N = 262144` and `experiment hilbert` uses
/// `N = 16,64,256,1024,2048` unless `n` is set explicitly.
pub const KEYS: &[Key] = &[
    key("measure", "lebesgue", "measure spec"),
    key("space", "h2", "operator-norm space: h2 or dalpha:<alpha>"),
    key("n", "1024", "truncation N (comma list for opnorm and hilbert)"),
    key("k", "5", "counterexample truncation K"),
    key("depth", "16", "Carleson box depth"),
    key("tol", "1e-10", "power-iteration relative tolerance"),
    key("max_iter", "100000", "power-iteration cap"),
    key("seed", "0", "RNG seed"),
    key("samples", "100", "identity-check sample count"),
    key("degree", "32", "pairing-probe polynomial degree"),
    key("trials", "200", "pairing-probe trials"),
    key("s_list", "-0.75,-0.5,-0.25,0,0.5,1", "family-scan exponents"),
    key("grid_levels", "40", "clustered radii 1 - 2^(-j/2), j <= J"),
    key("grid_angles", "256", "rays of the sampling grid"),
    key("grid_uniform", "64", "extra equispaced radii"),
    key("max_radius", "none", "drop grid radii above this"),
    key("quad_radial", "256", "Gauss-Legendre radial nodes"),
    key("quad_angular", "512", "trapezoid angular nodes"),
    key("panel_order", "24", "nodes per geometric radial panel"),
    key("panel_depth", "96", "geometric radial panels"),
    key("threshold", "2", "moment-decay threshold on (n+1) mu[n]"),
    key("format", "json", "json or csv"),
    key("output", "-", "output path, - for stdout"),
];

pub const FAMILY_SCAN_N: &str = "262144";
pub const HILBERT_N: &str = "16,64,256,1024,2048";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Default,
    File,
    Argument,
}

#[derive(Debug, Clone)]
pub struct Settings {
    values: BTreeMap<&'static str, (String, Origin)>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            values: KEYS.iter().map(|k| (k.name, (k.default.to_owned(), Origin::Default))).collect(),
        }
    }
}

/// Canonical name of `raw`, if it is a known key.
pub fn canonical(raw: &str) -> Option<&'static str> {
    let norm = raw.trim().to_ascii_lowercase().replace('-', "_");
    KEYS.iter().find(|k| k.name == norm).map(|k| k.name)
}

impl Settings {
    pub fn set(&mut self, raw_key: &str, value: &str, origin: Origin) -> Result<(), CliError> {
        let name = canonical(raw_key).ok_or_else(|| CliError::Usage(format!("unknown setting `{raw_key}`")))?;
        self.values.insert(name, (value.trim().to_owned(), origin));
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Config {
                path: path.display().to_string(),
                line: i + 1,
                message,
            };
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            self.set(k, v, Origin::File).map_err(|e| err(e.to_string()))?;
        }
        Ok(())
    }

    pub fn raw(&self, name: &str) -> &str {
        &self.values[name].0
    }

    pub fn origin(&self, name: &str) -> Origin {
        self.values[name].1
    }

    fn parse<T: std::str::FromStr>(&self, name: &'static str, what: &str) -> Result<T, CliError> {
        self.raw(name).parse().map_err(|_| CliError::Param {
            field: name,
            reason: format!("`{}` is not {what}", self.raw(name)),
        })
    }

    pub fn count(&self, name: &'static str) -> Result<usize, CliError> {
        self.parse(name, "a non-negative integer")
    }

    pub fn integer(&self, name: &'static str) -> Result<u64, CliError> {
        self.parse(name, "a non-negative integer")
    }

    pub fn real(&self, name: &'static str) -> Result<f64, CliError> {
        let v: f64 = self.parse(name, "a number")?;
        if !v.is_finite() {
            return Err(CliError::Param {
                field: name,
                reason: "must be finite".into(),
            });
        }
        Ok(v)
    }

    /// `None` for the literal `none`.
    pub fn optional_real(&self, name: &'static str) -> Result<Option<f64>, CliError> {
        if self.raw(name) == "none" {
            Ok(None)
        } else {
            self.real(name).map(Some)
        }
    }

    pub fn count_list(&self, name: &'static str) -> Result<Vec<usize>, CliError> {
        list(name, self.raw(name), "a non-negative integer")
    }

    pub fn real_list(&self, name: &'static str) -> Result<Vec<f64>, CliError> {
        list(name, self.raw(name), "a number")
    }
}

fn list<T: std::str::FromStr>(field: &'static str, raw: &str, what: &str) -> Result<Vec<T>, CliError> {
    raw.split(',')
        .map(|item| {
            item.trim().parse().map_err(|_| CliError::Param {
                field,
                reason: format!("`{}` is not {what}", item.trim()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_unique_and_defaults_parse() {
        let s = Settings::default();
        assert_eq!(s.values.len(), KEYS.len());
        assert_eq!(s.count("n").unwrap(), 1024);
        assert_eq!(s.real("tol").unwrap(), 1e-10);
        assert_eq!(s.optional_real("max_radius").unwrap(), None);
        assert_eq!(s.real_list("s_list").unwrap(), vec![-0.75, -0.5, -0.25, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn key_spelling_is_normalised() {
        assert_eq!(canonical("GRID-LEVELS"), Some("grid_levels"));
        assert_eq!(canonical("N"), Some("n"));
        assert_eq!(canonical("levels"), None);
    }

    #[test]
    fn bad_values_name_the_field() {
        let mut s = Settings::default();
        s.set("depth", "deep", Origin::Argument).unwrap();
        let err = s.count("depth").unwrap_err();
        assert!(err.to_string().contains("depth"), "{err}");
    }

    #[test]
    fn config_file_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hml.conf");
        std::fs::write(&path, "# comment\n\nn = 64   # trailing\nGrid-Angles=32\n").unwrap();
        let mut s = Settings::default();
        s.load_file(&path).unwrap();
        assert_eq!(s.raw("n"), "64");
        assert_eq!(s.origin("n"), Origin::File);
        assert_eq!(s.raw("grid_angles"), "32");

        std::fs::write(&path, "n = 64\nbogus = 1\n").unwrap();
        match Settings::default().load_file(&path) {
            Err(CliError::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
