//! `hml`: measures, criteria, operator norms and experiments from the
//! command line, reported as JSON or CSV.
//!
//! ```text
//! hml moments    [MEASURE] [key=value ...] [--flags]
//! hml criterion  <condition2|carleson-kernel|carleson-box|box4|moment-decay> [MEASURE] ...
//! hml opnorm     [MEASURE] [SPACE] ...
//! hml experiment <identity|counterexample|family-scan|hilbert|pairing> [MEASURE] ...
//! ```
//!
//! Settings resolve in four layers, later ones winning: the defaults in
//! [`settings::KEYS`], the config file named by `--config` or `HML_CONFIG`,
//! positional `key=value` arguments, and `--key value` flags. Every report
//! echoes the settings it used together with an `argv` that reproduces it.
//!
//! Exit codes: 0 success, 1 a failed experiment assertion (the report is
//! still written), 2 usage, parse or parameter errors, 3 power iteration
//! that did not converge (an error document is written instead of a report).

pub mod commands;
pub mod error;
pub mod output;
pub mod settings;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Arg, ArgAction, ArgMatches, Command};
use serde_json::{json, Map, Value};

use crate::commands::Subcommand;
pub use crate::error::CliError;
use crate::output::{Body, Document, Format};
use crate::settings::{Origin, Settings, FAMILY_SCAN_N, HILBERT_N, KEYS};

fn cli() -> Command {
    let mut root = Command::new("hml")
        .about("Hankel measures on the Hardy space: moments, criteria, operator norms, experiments")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("config")
                .long("config")
                .global(true)
                .value_name("PATH")
                .help("config file of key = value lines (default: $HML_CONFIG)"),
        );
    for key in KEYS {
        root = root.arg(
            Arg::new(key.name)
                .long(key.name.replace('_', "-"))
                .global(true)
                .value_name("VALUE")
                .allow_hyphen_values(true)
                .help(format!("{} [default: {}]", key.help, key.default)),
        );
    }
    let positional = |help: &'static str| {
        Arg::new("args")
            .num_args(0..)
            .action(ArgAction::Append)
            .value_name("ARGS")
            .help(help)
    };
    root.subcommand(
        Command::new("moments")
            .about("Moments mu[n] and (n + 1) mu[n] for n = 0..=N")
            .arg(positional("[MEASURE] then key=value settings")),
    )
    .subcommand(
        Command::new("criterion")
            .about("A boundedness criterion with its plot-ready profile")
            .arg(positional("<NAME> [MEASURE] then key=value settings")),
    )
    .subcommand(
        Command::new("opnorm")
            .about("Operator norm of finite Hankel sections on h2 or dalpha:<a>")
            .arg(positional("[MEASURE] [SPACE] then key=value settings")),
    )
    .subcommand(
        Command::new("experiment")
            .about("A named experiment with pass/fail assertions")
            .arg(positional("<NAME> [MEASURE] then key=value settings")),
    )
}

/// A fully resolved command line.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub subcommand: Subcommand,
    /// Criterion or experiment name.
    pub target: Option<String>,
    pub settings: Settings,
}

/// `key=value` where the key is made of letters, `-` and `_` only.
fn as_setting(token: &str) -> Option<(&str, &str)> {
    let (k, v) = token.split_once('=')?;
    let plain = !k.is_empty() && k.bytes().all(|b| b.is_ascii_alphabetic() || b == b'-' || b == b'_');
    plain.then_some((k, v))
}

impl Invocation {
    /// Parses `argv` (including the program name). `env_config` is the value
    /// of `HML_CONFIG`, if set.
    pub fn parse<I, T>(argv: I, env_config: Option<OsString>) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let matches = cli().try_get_matches_from(argv)?;
        let (name, sub) = matches.subcommand().expect("subcommand is required");
        let subcommand = match name {
            "moments" => Subcommand::Moments,
            "criterion" => Subcommand::Criterion,
            "opnorm" => Subcommand::Opnorm,
            _ => Subcommand::Experiment,
        };
        Self::resolve(subcommand, sub, env_config).map_err(|e| cli().error(clap::error::ErrorKind::InvalidValue, e))
    }

    fn resolve(subcommand: Subcommand, m: &ArgMatches, env_config: Option<OsString>) -> Result<Self, CliError> {
        let mut settings = Settings::default();
        let config = m.get_one::<String>("config").map(PathBuf::from).or(env_config.map(PathBuf::from));
        if let Some(path) = config {
            settings.load_file(&path)?;
        }

        let mut positional = Vec::new();
        for token in m.get_many::<String>("args").into_iter().flatten() {
            match as_setting(token) {
                Some((k, v)) => settings.set(k, v, Origin::Argument)?,
                None => positional.push(token.as_str()),
            }
        }
        let mut positional = positional.into_iter();
        let target = match subcommand {
            Subcommand::Criterion | Subcommand::Experiment => positional.next().map(str::to_owned),
            _ => None,
        };
        commands::check_target(subcommand, target.as_deref())?;
        let slots: &[&str] = match subcommand {
            Subcommand::Opnorm => &["measure", "space"],
            _ => &["measure"],
        };
        for slot in slots {
            if let Some(value) = positional.next() {
                settings.set(slot, value, Origin::Argument)?;
            }
        }
        if let Some(extra) = positional.next() {
            return Err(CliError::Usage(format!("unexpected argument `{extra}`")));
        }

        for key in KEYS {
            if let Some(v) = m.get_one::<String>(key.name) {
                settings.set(key.name, v, Origin::Argument)?;
            }
        }
        if subcommand == Subcommand::Experiment && settings.origin("n") == Origin::Default {
            match target.as_deref() {
                Some("family-scan") => settings.set("n", FAMILY_SCAN_N, Origin::Default)?,
                Some("hilbert") => settings.set("n", HILBERT_N, Origin::Default)?,
                _ => {}
            }
        }
        settings.raw("format").parse::<Format>().map_err(|reason| CliError::Param {
            field: "format",
            reason,
        })?;
        Ok(Self {
            subcommand,
            target,
            settings,
        })
    }

    pub fn format(&self) -> Format {
        self.settings.raw("format").parse().expect("validated in resolve")
    }

    /// Where the report goes; `None` for stdout.
    pub fn output(&self) -> Option<PathBuf> {
        match self.settings.raw("output") {
            "-" => None,
            path => Some(PathBuf::from(path)),
        }
    }

    /// The command echo: resolved settings and an equivalent `argv`.
    pub fn echo(&self) -> Value {
        let keys = commands::relevant_keys(self.subcommand, self.target.as_deref());
        let mut resolved = Map::new();
        let mut argv = vec![self.subcommand.name().to_owned()];
        argv.extend(self.target.clone());
        for key in keys {
            let value = self.settings.raw(key).to_owned();
            argv.push(format!("--{}", key.replace('_', "-")));
            argv.push(value.clone());
            resolved.insert(key.to_owned(), value.into());
        }
        json!({
            "subcommand": self.subcommand.name(),
            "target": self.target,
            "settings": resolved,
            "argv": argv,
        })
    }

    /// Runs the command. Non-convergence becomes an error document; every
    /// other failure is returned.
    pub fn execute(&self) -> Result<(Document, i32), CliError> {
        let command = self.echo();
        match commands::run(self.subcommand, self.target.as_deref(), &self.settings) {
            Ok(outcome) => {
                let provenance = outcome.provenance.iter().map(provenance_name).collect();
                let code = if outcome.passed { 0 } else { 1 };
                let doc = Document {
                    command,
                    provenance,
                    body: Body::Payload(outcome.payload),
                };
                Ok((doc, code))
            }
            Err(CliError::Core(err @ hankel_lab::Error::NotConverged { iterations, residual })) => {
                let doc = Document {
                    command,
                    provenance: vec![provenance_name(&hankel_lab::harness::Provenance::Iteration)],
                    body: Body::Error(json!({
                        "kind": "not-converged",
                        "message": err.to_string(),
                        "iterations": iterations,
                        "residual": residual,
                    })),
                };
                Ok((doc, 3))
            }
            Err(e) => Err(e),
        }
    }
}

fn provenance_name(p: &hankel_lab::harness::Provenance) -> String {
    serde_json::to_value(p)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .expect("provenance serializes to a string")
}

/// Parses, runs and writes the report; returns the exit code.
pub fn run<I, T>(argv: I, env_config: Option<OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let invocation = match Invocation::parse(argv, env_config) {
        Ok(inv) => inv,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return e.exit_code();
        }
    };
    let result = invocation.execute().and_then(|(doc, code)| {
        let text = doc.render(invocation.format());
        match invocation.output() {
            Some(path) => std::fs::write(path, text)?,
            None => stdout.write_all(text.as_bytes())?,
        }
        Ok(code)
    });
    match result {
        Ok(code) => {
            if code == 3 {
                let _ = writeln!(stderr, "hml: power iteration did not converge");
            } else if code == 1 {
                let _ = writeln!(stderr, "hml: experiment assertions failed");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "hml: {e}");
            e.exit_code()
        }
    }
}
