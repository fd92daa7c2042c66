//! Run configuration: an optional `key = value` file overridden by command-line flags.
//!
//! ```text
//! # comments start with '#'
//! type = A2
//! trunc = 4
//! window = 2
//! eps_cap = 5
//! level_cap = 2
//! serre_cap = 1
//! passes = 2000000
//! seed = 7
//! samples = 50
//! suite = all
//! allow_at_cap = false
//! ```

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("config line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub affine_type: String,
    pub trunc: usize,
    pub window: i64,
    pub eps_cap: i64,
    pub level_cap: u32,
    pub serre_cap: u32,
    pub passes: usize,
    pub seed: u64,
    pub samples: usize,
    pub suite: String,
    pub allow_at_cap: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            affine_type: "A2".into(),
            trunc: 4,
            window: 2,
            eps_cap: 5,
            level_cap: 2,
            serre_cap: 1,
            passes: 2_000_000,
            seed: 20_240_531,
            samples: 50,
            suite: "all".into(),
            allow_at_cap: false,
        }
    }
}

/// Values given on the command line; `None` keeps the file or default value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub affine_type: Option<String>,
    pub trunc: Option<usize>,
    pub window: Option<i64>,
    pub eps_cap: Option<i64>,
    pub level_cap: Option<u32>,
    pub serre_cap: Option<u32>,
    pub passes: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub suite: Option<String>,
    pub allow_at_cap: bool,
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError::Line { line, msg: format!("bad value `{v}` for `{key}`") })
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut c = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(ConfigError::Line { line, msg: "expected `key = value`".into() });
            };
            let (k, v) = (k.trim(), v.trim());
            match k {
                "type" => c.affine_type = v.to_string(),
                "trunc" => c.trunc = parse_value(line, k, v)?,
                "window" => c.window = parse_value(line, k, v)?,
                "eps_cap" => c.eps_cap = parse_value(line, k, v)?,
                "level_cap" => c.level_cap = parse_value(line, k, v)?,
                "serre_cap" => c.serre_cap = parse_value(line, k, v)?,
                "passes" => c.passes = parse_value(line, k, v)?,
                "seed" => c.seed = parse_value(line, k, v)?,
                "samples" => c.samples = parse_value(line, k, v)?,
                "suite" => c.suite = v.to_string(),
                "allow_at_cap" => c.allow_at_cap = parse_value(line, k, v)?,
                _ => return Err(ConfigError::Line { line, msg: format!("unknown key `{k}`") }),
            }
        }
        Ok(c)
    }

    pub fn load(path: Option<&Path>, o: &Overrides) -> Result<Config, ConfigError> {
        let mut c = match path {
            Some(p) => Config::parse(&std::fs::read_to_string(p)?)?,
            None => Config::default(),
        };
        if let Some(v) = &o.affine_type {
            c.affine_type = v.clone();
        }
        if let Some(v) = o.trunc {
            c.trunc = v;
        }
        if let Some(v) = o.window {
            c.window = v;
        }
        if let Some(v) = o.eps_cap {
            c.eps_cap = v;
        }
        if let Some(v) = o.level_cap {
            c.level_cap = v;
        }
        if let Some(v) = o.serre_cap {
            c.serre_cap = v;
        }
        if let Some(v) = o.passes {
            c.passes = v;
        }
        if let Some(v) = o.seed {
            c.seed = v;
        }
        if let Some(v) = o.samples {
            c.samples = v;
        }
        if let Some(v) = &o.suite {
            c.suite = v.clone();
        }
        c.allow_at_cap |= o.allow_at_cap;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trunc < 2 {
            return Err(ConfigError::Invalid("trunc must be at least 2".into()));
        }
        if self.window <= 0 || self.eps_cap <= 0 || self.level_cap == 0 || self.passes == 0 || self.samples == 0 {
            return Err(ConfigError::Invalid("caps must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let c = Config::parse("# run\ntype = C2\ntrunc=3\nallow_at_cap = true\n").unwrap();
        assert_eq!((c.affine_type.as_str(), c.trunc, c.allow_at_cap), ("C2", 3, true));
        assert!(matches!(Config::parse("trunc = x"), Err(ConfigError::Line { line: 1, .. })));
        assert!(matches!(Config::parse("\nfoo = 1"), Err(ConfigError::Line { line: 2, .. })));
        let o = Overrides { trunc: Some(1), ..Default::default() };
        assert!(Config::load(None, &o).is_err());
    }
}
