use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

pub const SETTINGS: &[&str] = &[
    "fundamental",
    "fundamental-bounded",
    "concave",
    "concave-bounded",
    "adversary",
    "adversary-bounded",
    "deviation",
    "ccc-maxmin",
    "ccc-minmax",
    "robust",
];

/// A problem with the supplied configuration. `line` points into the config
/// file when the problem came from there.
#[derive(Debug)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }

    fn at(line: Option<usize>, message: impl Into<String>) -> Self {
        ConfigError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config error at line {l}: {}", self.message),
            None => write!(f, "config error: {}", self.message),
        }
    }
}

/// Scenario flags. Every flag is optional so that a config file can supply
/// it; flags win over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Flat key = value TOML file with any of the options below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub setting: Option<String>,
    /// `karate` or a path to a whitespace-separated edge list.
    #[arg(long)]
    pub dataset: Option<String>,
    #[arg(long)]
    pub kg: Option<f64>,
    #[arg(long)]
    pub kb: Option<f64>,
    /// Concavity parameter of the concave settings.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long = "eps-l")]
    pub eps_l: Option<f64>,
    #[arg(long = "eps-o")]
    pub eps_o: Option<f64>,
    /// Extra-weight mass per node for generated weights.
    #[arg(long)]
    pub s: Option<f64>,
    /// Use the weighted-class scheme with this alpha instead of generated weights.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cap every per-node investment at one unit.
    #[arg(long)]
    pub bounded: bool,
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "tau-max")]
    pub tau_max: Option<usize>,
    /// CSV `node,x_bar,y_bar` of desired investments for the deviation setting.
    #[arg(long)]
    pub desired: Option<PathBuf>,
}

/// Fully resolved configuration, echoed into every report.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Config {
    pub setting: String,
    pub dataset: String,
    pub kg: f64,
    pub kb: f64,
    pub t: f64,
    pub eps_l: f64,
    pub eps_o: f64,
    pub s: f64,
    pub alpha: Option<f64>,
    pub seed: u64,
    pub bounded: bool,
    pub out_dir: String,
    pub tol: f64,
    pub tau_max: usize,
    pub desired: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            setting: String::new(),
            dataset: "karate".into(),
            kg: 5.0,
            kb: 5.0,
            t: 2.0,
            eps_l: 0.0,
            eps_o: 0.0,
            s: 0.5,
            alpha: None,
            seed: 42,
            bounded: false,
            out_dir: ".".into(),
            tol: 1e-4,
            tau_max: 100,
            desired: None,
        }
    }
}

impl Config {
    /// Setting name with any `-bounded` suffix folded into `bounded`.
    pub fn base_setting(&self) -> (&str, bool) {
        match self.setting.strip_suffix("-bounded") {
            Some(base) => (base, true),
            None => (self.setting.as_str(), self.bounded),
        }
    }
}

fn key_line(text: &str, key: &str) -> Option<usize> {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            l.strip_prefix(key)
                .map(|rest| rest.trim_start().starts_with('='))
                .unwrap_or(false)
        })
        .map(|i| i + 1)
}

fn byte_line(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn apply_file(cfg: &mut Config, text: &str, base: &Path) -> Result<(), ConfigError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| {
        ConfigError::at(
            e.span().map(|s| byte_line(text, s.start)),
            e.message().trim().to_string(),
        )
    })?;
    for (key, value) in &table {
        let line = key_line(text, key);
        let err = |what: &str| ConfigError::at(line, format!("`{key}` must be {what}"));
        let num = || match value {
            toml::Value::Float(f) => Ok(*f),
            toml::Value::Integer(i) => Ok(*i as f64),
            _ => Err(err("a number")),
        };
        let string = || {
            value
                .as_str()
                .map(str::to_string)
                .ok_or_else(|| err("a string"))
        };
        let boolean = || value.as_bool().ok_or_else(|| err("a boolean"));
        let count = || {
            value
                .as_integer()
                .filter(|i| *i >= 0)
                .map(|i| i as u64)
                .ok_or_else(|| err("a nonnegative integer"))
        };
        let path = |p: String| -> String {
            let pb = Path::new(&p);
            if p == "karate" || pb.is_absolute() {
                p
            } else {
                base.join(pb).to_string_lossy().into_owned()
            }
        };
        match key.replace('_', "-").as_str() {
            "setting" => cfg.setting = string()?,
            "dataset" => cfg.dataset = path(string()?),
            "kg" => cfg.kg = num()?,
            "kb" => cfg.kb = num()?,
            "t" => cfg.t = num()?,
            "eps-l" => cfg.eps_l = num()?,
            "eps-o" => cfg.eps_o = num()?,
            "s" => cfg.s = num()?,
            "alpha" => cfg.alpha = Some(num()?),
            "seed" => cfg.seed = count()?,
            "bounded" => cfg.bounded = boolean()?,
            "out-dir" => cfg.out_dir = path(string()?),
            "tol" => cfg.tol = num()?,
            "tau-max" => cfg.tau_max = count()? as usize,
            "desired" => cfg.desired = Some(path(string()?)),
            _ => return Err(ConfigError::at(line, format!("unknown key `{key}`"))),
        }
    }
    Ok(())
}

/// Merges defaults, the optional config file and the flags, then validates.
/// `default_setting` fills in a missing setting; without one a setting is
/// required only when `need_setting` is set.
pub fn resolve(
    args: &ScenarioArgs,
    default_setting: Option<&str>,
    need_setting: bool,
) -> Result<Config, ConfigError> {
    let mut cfg = Config::default();
    if let Some(p) = &args.config {
        let text = std::fs::read_to_string(p)
            .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", p.display())))?;
        let base = p.parent().unwrap_or(Path::new("."));
        apply_file(&mut cfg, &text, base)?;
    }
    if let Some(v) = &args.setting {
        cfg.setting = v.clone();
    }
    if let Some(v) = &args.dataset {
        cfg.dataset = v.clone();
    }
    cfg.bounded |= args.bounded;
    macro_rules! take {
        ($($f:ident),*) => { $( if let Some(v) = args.$f { cfg.$f = v; } )* };
    }
    take!(kg, kb, t, eps_l, eps_o, s, seed, tol, tau_max);
    if args.alpha.is_some() {
        cfg.alpha = args.alpha;
    }
    if let Some(v) = &args.out_dir {
        cfg.out_dir = v.to_string_lossy().into_owned();
    }
    if let Some(v) = &args.desired {
        cfg.desired = Some(v.to_string_lossy().into_owned());
    }
    if cfg.setting.is_empty() {
        if let Some(d) = default_setting {
            cfg.setting = d.to_string();
        }
    }
    validate(&cfg, need_setting)?;
    Ok(cfg)
}

fn validate(cfg: &Config, need_setting: bool) -> Result<(), ConfigError> {
    if need_setting && !SETTINGS.contains(&cfg.setting.as_str()) {
        return Err(ConfigError::new(if cfg.setting.is_empty() {
            format!("missing setting; expected one of {}", SETTINGS.join(", "))
        } else {
            format!(
                "unknown setting `{}`; expected one of {}",
                cfg.setting,
                SETTINGS.join(", ")
            )
        }));
    }
    let check = |ok: bool, msg: &str| {
        if ok {
            Ok(())
        } else {
            Err(ConfigError::new(msg))
        }
    };
    check(
        cfg.kg >= 0.0 && cfg.kg.is_finite(),
        "kg must be a nonnegative number",
    )?;
    check(
        cfg.kb >= 0.0 && cfg.kb.is_finite(),
        "kb must be a nonnegative number",
    )?;
    check(cfg.t.is_finite(), "t must be finite")?;
    check(
        cfg.eps_l >= 0.0 && cfg.eps_l.is_finite(),
        "eps-l must be nonnegative",
    )?;
    check(
        cfg.eps_o >= 0.0 && cfg.eps_o.is_finite(),
        "eps-o must be nonnegative",
    )?;
    check(cfg.s > 0.0 && cfg.s < 1.0, "s must lie in (0, 1)")?;
    check(
        cfg.alpha.is_none_or(|a| a > 0.0 && a.is_finite()),
        "alpha must be positive",
    )?;
    check(
        cfg.tol >= 0.0 && cfg.tol.is_finite(),
        "tol must be nonnegative",
    )?;
    check(cfg.tau_max >= 1, "tau-max must be at least 1")?;
    Ok(())
}
