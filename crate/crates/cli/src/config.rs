//! Parameter sources and global run settings.

use std::fs;
use std::path::{Path, PathBuf};

use filippov_core::sampling::random_params;
use filippov_core::{ModelParams, ParamValues};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum ParamSource {
    Preset(String),
    File(PathBuf),
    /// Random draw, for property-test drivers.
    Random(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: ParamSource,
    pub params: ModelParams,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub seed: Option<u64>,
}

/// Flag values as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct ConfigFlags {
    pub preset: Option<String>,
    pub params: Option<PathBuf>,
    pub set: Vec<String>,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub seed: Option<u64>,
}

/// Resolves the parameter source and applies `--set` overrides in order.
///
/// Exactly one of `--preset` / `--params` may be given; with neither, `--seed`
/// draws a random parameter set.
pub fn load_config(flags: &ConfigFlags) -> CliResult<RunConfig> {
    let (source, base) = match (&flags.preset, &flags.params, flags.seed) {
        (Some(_), Some(_), _) => {
            return Err(CliError::Config(
                "--preset and --params are mutually exclusive".into(),
            ))
        }
        (Some(name), None, _) => {
            let p = ModelParams::preset(name).ok_or_else(|| {
                CliError::Config(format!("unknown preset `{name}` (expected A1 or A2)"))
            })?;
            (ParamSource::Preset(name.to_ascii_uppercase()), p)
        }
        (None, Some(path), _) => (ParamSource::File(path.clone()), read_params(path)?),
        (None, None, Some(seed)) => (
            ParamSource::Random(seed),
            random_params(&mut ChaCha8Rng::seed_from_u64(seed)),
        ),
        (None, None, None) => {
            return Err(CliError::Config(
                "no parameter source: give --preset, --params or --seed".into(),
            ))
        }
    };
    let mut params = base;
    for assignment in &flags.set {
        let (key, value) = parse_assignment(assignment)?;
        params = params
            .with(key, value)
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    if flags.svg && flags.out.is_none() {
        return Err(CliError::Config(
            "--svg needs --out to name the figure file".into(),
        ));
    }
    Ok(RunConfig {
        source,
        params,
        out: flags.out.clone(),
        svg: flags.svg,
        seed: flags.seed,
    })
}

fn parse_assignment(s: &str) -> CliResult<(&str, f64)> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got `{s}`")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("--set {key}: `{value}` is not a number")))?;
    Ok((key.trim(), value))
}

pub fn read_params(path: &Path) -> CliResult<ModelParams> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    params_from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn params_from_json(text: &str) -> Result<ModelParams, String> {
    let values: ParamValues = serde_json::from_str(text).map_err(|e| e.to_string())?;
    ModelParams::new(values).map_err(|e| e.to_string())
}

pub fn params_to_json(params: &ModelParams) -> String {
    serde_json::to_string_pretty(params).expect("parameters always serialize")
}

/// Parses `a,b` into a range with `a < b`.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `min,max`, got `{s}`"))?;
    let a: f64 = a
        .trim()
        .parse()
        .map_err(|_| format!("`{a}` is not a number"))?;
    let b: f64 = b
        .trim()
        .parse()
        .map_err(|_| format!("`{b}` is not a number"))?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(format!("range `{s}` must be finite with min < max"));
    }
    Ok((a, b))
}

/// Parses `NX` or `NXxNY`.
pub fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{t}` is not a count"))
    };
    match s.split_once(['x', 'X', ',']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset(name: &str) -> ConfigFlags {
        ConfigFlags {
            preset: Some(name.into()),
            ..Default::default()
        }
    }

    #[test]
    fn presets_resolve_verbatim() {
        let a1 = load_config(&preset("A1")).unwrap().params.values();
        assert_eq!(
            [a1.r1, a1.k1, a1.m, a1.p, a1.b, a1.q1, a1.effort, a1.r2, a1.k2, a1.e, a1.q2],
            [0.9, 2.0, 0.2, 0.6, 0.4, 0.2, 1.0, 0.8, 1.5, 0.6, 0.1]
        );
        let a2 = load_config(&preset("a2")).unwrap().params.values();
        assert_eq!(
            [a2.r1, a2.k1, a2.m, a2.p, a2.b, a2.q1, a2.effort, a2.r2, a2.k2, a2.e, a2.q2],
            [2.3, 9.0, 0.15, 0.2, 0.04, 0.1, 1.0, 1.2, 7.0, 0.5, 0.2]
        );
    }

    #[test]
    fn overrides_apply_in_order() {
        let flags = ConfigFlags {
            set: vec!["S=0.7".into(), "S = 0.1".into()],
            ..preset("A1")
        };
        let cfg = load_config(&flags).unwrap();
        let want = ModelParams::preset_a1().with_threshold(0.1).unwrap();
        assert_eq!(cfg.params, want);
    }

    #[test]
    fn bad_flags_are_config_errors() {
        for flags in [
            preset("A3"),
            ConfigFlags {
                set: vec!["S".into()],
                ..preset("A1")
            },
            ConfigFlags {
                set: vec!["zz=1".into()],
                ..preset("A1")
            },
            ConfigFlags {
                set: vec!["m=1.5".into()],
                ..preset("A1")
            },
            ConfigFlags {
                params: Some("x.json".into()),
                ..preset("A1")
            },
            ConfigFlags {
                svg: true,
                ..preset("A1")
            },
            ConfigFlags::default(),
        ] {
            assert_eq!(load_config(&flags).unwrap_err().exit_code(), 2, "{flags:?}");
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let p = ModelParams::preset_a1().with("p", 0.1 + 0.2).unwrap();
        assert_eq!(params_from_json(&params_to_json(&p)).unwrap(), p);
        let err = params_from_json(r#"{"r1": 1}"#).unwrap_err();
        assert!(err.contains("missing field"), "{err}");
    }

    #[test]
    fn parses_ranges_and_resolutions() {
        assert_eq!(parse_range("0.05, 0.8").unwrap(), (0.05, 0.8));
        assert!(parse_range("1,0").is_err());
        assert_eq!(parse_resolution("200").unwrap(), (200, 200));
        assert_eq!(parse_resolution("30x40").unwrap(), (30, 40));
    }
}
