//! Run configuration: a raw `key=value` store with a fixed key order, and
//! its validated, typed form.

use maxrep::representations::FuchsianPreset;
use maxrep::sp::WeightFunctional;
use maxrep::{Error, Result};
use nalgebra::Matrix2;
use std::collections::BTreeMap;

pub const SUBCOMMANDS: [&str; 8] = ["identities", "positivity", "gromov", "entropy", "manhattan", "shadow", "ahlfors", "limitcurve"];

/// Every accepted key with its default, in echo order.
pub const KEYS: [(&str, &str); 16] = [
    ("subcommand", ""),
    ("n", "2"),
    ("preset", "modular"),
    ("rep", "rho_d"),
    ("p1", ""),
    ("p2", ""),
    ("L", "10"),
    ("R", "2"),
    ("functional", "alpha,omega_hat,dX"),
    ("window", "auto"),
    ("seed", "1"),
    ("tol", "1e-7"),
    ("trials", "200"),
    ("size", "5"),
    ("count", "64"),
    ("out", ""),
];

const MAX_TRIALS: usize = 1_000_000;

/// Unvalidated settings, keyed by name. Values keep their input spelling so
/// the echo reproduces the input.
#[derive(Debug, Clone, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<&'static str, String>,
}

fn canonical_key(key: &str) -> Result<&'static str> {
    KEYS.iter()
        .map(|(k, _)| *k)
        .find(|k| *k == key)
        .ok_or_else(|| Error::Config(format!("unknown key '{key}'")))
}

impl Default for RawConfig {
    fn default() -> Self {
        RawConfig { values: KEYS.iter().map(|(k, v)| (*k, v.to_string())).collect() }
    }
}

impl RawConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let k = canonical_key(key)?;
        self.values.insert(k, value.trim().to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    /// Applies a `key=value` file. Blank lines and lines starting with `#`
    /// are skipped; a key may appear once.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        let mut seen = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
            let k = canonical_key(k.trim())?;
            if seen.contains(&k) {
                return Err(Error::Config(format!("line {}: duplicate key '{k}'", i + 1)));
            }
            seen.push(k);
            self.set(k, v)?;
        }
        Ok(())
    }

    /// One `key=value` line per key, in the fixed key order. The result is
    /// itself a valid config file.
    pub fn echo(&self) -> String {
        KEYS.iter().map(|(k, _)| format!("{k}={}\n", self.get(k))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Diagonal,
    Interleaved,
}

/// Validated settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: String,
    pub n: usize,
    pub preset: FuchsianPreset,
    pub rep: RepKind,
    pub p1: Option<FuchsianPreset>,
    pub p2: Option<FuchsianPreset>,
    pub l: usize,
    pub r: f64,
    pub functionals: Vec<WeightFunctional>,
    pub window: Option<(f64, f64)>,
    pub seed: u64,
    pub tol: f64,
    pub trials: usize,
    pub size: usize,
    pub count: usize,
    pub out: Option<String>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

fn parse_floats(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| parse_num::<f64>(key, x.trim())).collect()
}

/// `modular`, `fricke:x,y[,z]`, `schottky:t` or `conjugated:a,b,c,d:BASE`.
/// With two Fricke traces the larger root of the Markov equation is used.
pub fn parse_preset(v: &str) -> Result<FuchsianPreset> {
    let (name, args) = v.split_once(':').unwrap_or((v, ""));
    match name {
        "modular" if args.is_empty() => Ok(FuchsianPreset::modular()),
        "fricke" => match parse_floats("preset", args)?.as_slice() {
            [x, y] => FuchsianPreset::fricke_from_xy(*x, *y, true),
            [x, y, z] => FuchsianPreset::fricke(*x, *y, *z),
            _ => Err(Error::Config("fricke needs two or three traces".into())),
        },
        "schottky" => match parse_floats("preset", args)?.as_slice() {
            [t] => FuchsianPreset::schottky(*t),
            _ => Err(Error::Config("schottky needs one trace".into())),
        },
        "conjugated" => {
            let (h, base) = args
                .split_once(':')
                .ok_or_else(|| Error::Config("conjugated needs a,b,c,d:BASE".into()))?;
            match parse_floats("preset", h)?.as_slice() {
                [a, b, c, d] => FuchsianPreset::conjugated(&parse_preset(base)?, Matrix2::new(*a, *b, *c, *d)),
                _ => Err(Error::Config("conjugator needs four entries".into())),
            }
        }
        _ => Err(Error::Config(format!("unknown preset '{v}'"))),
    }
}

fn optional_preset(v: &str) -> Result<Option<FuchsianPreset>> {
    if v.is_empty() {
        Ok(None)
    } else {
        parse_preset(v).map(Some)
    }
}

fn parse_window(v: &str) -> Result<Option<(f64, f64)>> {
    if v == "auto" {
        return Ok(None);
    }
    let (a, b) = v
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("window: expected Tmin:Tmax or auto, got '{v}'")))?;
    let (a, b): (f64, f64) = (parse_num("window", a)?, parse_num("window", b)?);
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Config(format!("window: need finite Tmin < Tmax, got '{v}'")));
    }
    Ok(Some((a, b)))
}

impl RunConfig {
    pub fn validate(raw: &RawConfig) -> Result<Self> {
        let subcommand = raw.get("subcommand").to_string();
        if !SUBCOMMANDS.contains(&subcommand.as_str()) {
            return Err(Error::Config(format!(
                "subcommand must be one of {}, got '{subcommand}'",
                SUBCOMMANDS.join(", ")
            )));
        }
        let n: usize = parse_num("n", raw.get("n"))?;
        if n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        let rep = match raw.get("rep") {
            "rho_d" => RepKind::Diagonal,
            "rho_12" => RepKind::Interleaved,
            other => return Err(Error::Config(format!("rep must be rho_d or rho_12, got '{other}'"))),
        };
        let r: f64 = parse_num("R", raw.get("R"))?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Config("R must be positive".into()));
        }
        let functionals = raw
            .get("functional")
            .split(',')
            .map(|s| WeightFunctional::parse(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        if functionals.is_empty() || functionals.len() > maxrep::entropy::MAX_FUNCTIONALS {
            return Err(Error::Config(format!(
                "between 1 and {} functionals are allowed",
                maxrep::entropy::MAX_FUNCTIONALS
            )));
        }
        let tol: f64 = parse_num("tol", raw.get("tol"))?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Config("tol must be positive".into()));
        }
        let trials: usize = parse_num("trials", raw.get("trials"))?;
        if trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if trials > MAX_TRIALS {
            return Err(Error::ResourceLimit(format!("trials are capped at {MAX_TRIALS}")));
        }
        let size: usize = parse_num("size", raw.get("size"))?;
        if size < 3 {
            return Err(Error::Config("size must be at least 3".into()));
        }
        let count: usize = parse_num("count", raw.get("count"))?;
        let out = raw.get("out");
        Ok(RunConfig {
            subcommand,
            n,
            preset: parse_preset(raw.get("preset"))?,
            rep,
            p1: optional_preset(raw.get("p1"))?,
            p2: optional_preset(raw.get("p2"))?,
            l: parse_num("L", raw.get("L"))?,
            r,
            functionals,
            window: parse_window(raw.get("window"))?,
            seed: parse_num("seed", raw.get("seed"))?,
            tol,
            trials,
            size,
            count,
            out: (!out.is_empty()).then(|| out.to_string()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_is_a_fixed_point() {
        let mut raw = RawConfig::default();
        raw.set("subcommand", "entropy").unwrap();
        raw.set("preset", "fricke:3,3,3").unwrap();
        let mut again = RawConfig::default();
        again.apply_file(&raw.echo()).unwrap();
        assert_eq!(again.echo(), raw.echo());
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected() {
        let mut raw = RawConfig::default();
        assert!(matches!(raw.apply_file("colour=blue"), Err(Error::Config(_))));
        assert!(matches!(raw.apply_file("n=2\nn=3"), Err(Error::Config(_))));
        assert!(matches!(raw.apply_file("just text"), Err(Error::Config(_))));
    }

    #[test]
    fn preset_syntax() {
        assert_eq!(parse_preset("modular").unwrap().name(), "modular");
        assert!(parse_preset("fricke:3,3,3").is_ok());
        let two = parse_preset("fricke:5,3").unwrap();
        assert!(two.name().starts_with("fricke:5,3,12.21"));
        assert!(parse_preset("schottky:6").is_ok());
        assert!(parse_preset("conjugated:2,1,1,1:modular").is_ok());
        assert!(parse_preset("conjugated:2,1,1,1:fricke:3,3,3").is_ok());
        assert!(parse_preset("schottky:2").is_err());
        assert!(parse_preset("fricke:3,3,4").is_err());
        assert!(parse_preset("hexagon").is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(parse_window("auto").unwrap(), None);
        assert_eq!(parse_window("1.5:4").unwrap(), Some((1.5, 4.0)));
        assert!(parse_window("4:1").is_err());
        assert!(parse_window("4").is_err());
    }
}
