//! Flat `key=value` experiment configuration.

use hbie::nystrom::Formulation;
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub geometry: Option<String>,
    pub formulation: Option<Formulation>,
    pub k: Vec<f64>,
    pub ppw: Vec<f64>,
    pub n: Vec<usize>,
    pub eta: Option<f64>,
    pub p: Option<usize>,
    /// incidence angle in radians
    pub angle: Option<f64>,
    pub modes: Option<usize>,
    pub reference_ppw: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    /// xmin, xmax, ymin, ymax
    pub grid: Vec<f64>,
    pub grid_n: Option<usize>,
    pub out: Option<PathBuf>,
}

pub const KEYS: [&str; 15] =
    ["geometry", "formulation", "k", "ppw", "n", "eta", "p", "angle", "modes", "reference_ppw", "tol", "seed", "grid", "grid_n", "out"];

/// Reals accept a trailing "*sqrt2" (the diamond wavenumbers) and "pi".
fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (base, factor) = match s.strip_suffix("*sqrt2") {
        Some(b) => (b.trim(), std::f64::consts::SQRT_2),
        None => (s, 1.0),
    };
    let v = match base {
        "pi" => std::f64::consts::PI,
        "-pi" => -std::f64::consts::PI,
        _ => base.parse::<f64>().map_err(|_| format!("'{s}' is not a number"))?,
    };
    if !v.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(v * factor)
}

fn parse_count(s: &str) -> Result<usize, String> {
    s.trim().parse::<usize>().map_err(|_| format!("'{}' is not a non-negative integer", s.trim()))
}

/// Splits a comma list, returning each item with its offset in `value`.
fn items(value: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for part in value.split(',') {
        let lead = part.len() - part.trim_start().len();
        out.push((start + lead, part));
        start += part.len() + 1;
    }
    out
}

fn list<T>(value: &str, col: usize, line: usize, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, ConfigError> {
    items(value)
        .into_iter()
        .map(|(off, s)| f(s).map_err(|message| ConfigError { line, column: col + off, message }))
        .collect()
}

impl ExperimentConfig {
    /// Sets one key; `col` is the 1-based column of the value for errors.
    pub fn set(&mut self, key: &str, value: &str, line: usize, col: usize) -> Result<(), ConfigError> {
        let err = |message: String| ConfigError { line, column: col, message };
        let one_real = |v: &str| parse_real(v).map_err(err);
        let one_count = |v: &str| parse_count(v).map_err(err);
        match key {
            "geometry" => self.geometry = Some(value.trim().to_string()),
            "formulation" => self.formulation = Some(value.trim().parse().map_err(|e: hbie::error::HbieError| err(e.to_string()))?),
            "k" => self.k = list(value, col, line, parse_real)?,
            "ppw" => self.ppw = list(value, col, line, parse_real)?,
            "n" => self.n = list(value, col, line, parse_count)?,
            "eta" => self.eta = Some(one_real(value)?),
            "p" => self.p = Some(one_count(value)?),
            "angle" => self.angle = Some(one_real(value)?),
            "modes" => self.modes = Some(one_count(value)?),
            "reference_ppw" => self.reference_ppw = Some(one_real(value)?),
            "tol" => self.tol = Some(one_real(value)?),
            "seed" => self.seed = Some(value.trim().parse().map_err(|_| err(format!("'{}' is not a seed", value.trim())))?),
            "grid" => {
                let g = list(value, col, line, parse_real)?;
                if g.len() != 4 {
                    return Err(err(format!("grid needs xmin,xmax,ymin,ymax, got {} values", g.len())));
                }
                self.grid = g;
            }
            "grid_n" => self.grid_n = Some(one_count(value)?),
            "out" => self.out = Some(PathBuf::from(value.trim())),
            _ => {
                return Err(ConfigError {
                    line,
                    column: 1,
                    message: format!("unknown key '{key}' (known: {})", KEYS.join(", ")),
                })
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let Some(eq) = body.find('=') else {
                let column = body.len() - body.trim_start().len() + 1;
                return Err(ConfigError { line, column, message: "expected key=value".into() });
            };
            let key = body[..eq].trim();
            if key.is_empty() {
                return Err(ConfigError { line, column: eq + 1, message: "missing key before '='".into() });
            }
            let value = &body[eq + 1..];
            let lead = value.len() - value.trim_start().len();
            cfg.set(key, value.trim(), line, eq + 2 + lead)?;
        }
        Ok(cfg)
    }

    /// One `key=value` per set field, in the fixed key order.
    pub fn canonical(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let mut put = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                out.push_str(&format!("{key}={v}\n"));
            }
        };
        put("geometry", self.geometry.clone());
        put("formulation", self.formulation.map(|f| f.to_string()));
        put("k", (!self.k.is_empty()).then(|| join(&self.k)));
        put("ppw", (!self.ppw.is_empty()).then(|| join(&self.ppw)));
        put("n", (!self.n.is_empty()).then(|| self.n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")));
        put("eta", self.eta.map(|x| format!("{x:?}")));
        put("p", self.p.map(|x| x.to_string()));
        put("angle", self.angle.map(|x| format!("{x:?}")));
        put("modes", self.modes.map(|x| x.to_string()));
        put("reference_ppw", self.reference_ppw.map(|x| format!("{x:?}")));
        put("tol", self.tol.map(|x| format!("{x:?}")));
        put("seed", self.seed.map(|x| x.to_string()));
        put("grid", (!self.grid.is_empty()).then(|| join(&self.grid)));
        put("grid_n", self.grid_n.map(|x| x.to_string()));
        put("out", self.out.as_ref().map(|p| p.display().to_string()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_comments() {
        let c = ExperimentConfig::parse("# sweep\ngeometry = diamonds\nk=10*sqrt2, 20*sqrt2\nppw=2.4,3.6 # inline\n").unwrap();
        assert_eq!(c.geometry.as_deref(), Some("diamonds"));
        assert_eq!(c.k, vec![10.0 * std::f64::consts::SQRT_2, 20.0 * std::f64::consts::SQRT_2]);
        assert_eq!(c.ppw, vec![2.4, 3.6]);
    }

    #[test]
    fn error_positions() {
        let e = ExperimentConfig::parse("k=1\nppw=2.4, x3\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));
        let e = ExperimentConfig::parse("\n\n  nonsense\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = ExperimentConfig::parse("colour=red").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = ExperimentConfig::parse("formulation=dirichlet-B").unwrap_err();
        assert_eq!((e.line, e.column), (1, 13));
    }

    #[test]
    fn canonical_round_trip() {
        let c = ExperimentConfig::parse("ppw=6,12\nk=0.1,20*sqrt2\ngeometry=star\nformulation=neumann-Breg\nangle=-pi\ngrid=-3,3,-2,2\nseed=7\n").unwrap();
        let text = c.canonical();
        assert_eq!(ExperimentConfig::parse(&text).unwrap(), c);
        assert_eq!(ExperimentConfig::parse(&text).unwrap().canonical(), text);
        assert!(text.starts_with("geometry=star\nformulation=neumann-Breg\nk="));
    }
}
