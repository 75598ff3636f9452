//! Flat `key = value` run configuration.

use std::fmt::Write as _;
use std::path::Path;

use hexwave::{LatticeConfig, Normalization};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x2_min: f64,
    pub x2_max: f64,
    pub nx1: usize,
    pub nx2: usize,
    pub t: f64,
}

impl Grid {
    /// Sample coordinates along one axis, endpoints included.
    pub fn axis(min: f64, max: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega: f64,
    pub k1: f64,
    pub k2: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub beta0: f64,
    pub q: u32,
    pub mu: f64,
    pub c: f64,
    pub sigma: [f64; 2],
    pub order: u32,
    pub grid: Grid,
    pub normalization: Normalization,
}

impl Default for RunConfig {
    /// The square lattice of the first figure.
    fn default() -> Self {
        let k = std::f64::consts::FRAC_1_SQRT_2;
        RunConfig {
            omega: 1.0,
            k1: k,
            k2: k,
            tau1: 1.0,
            tau2: 1.0,
            beta0: 2.0,
            q: 1,
            mu: -0.3,
            c: 0.0,
            sigma: [0.0, 0.0],
            order: 2,
            grid: Grid {
                x1_min: -10.0,
                x1_max: 10.0,
                x2_min: -10.0,
                x2_max: 10.0,
                nx1: 81,
                nx2: 81,
                t: std::f64::consts::PI / 20.0,
            },
            normalization: Normalization::Reference,
        }
    }
}

const KEYS: [&str; 20] = [
    "omega", "k1", "k2", "tau1", "tau2", "beta0", "q", "mu", "C", "sigma1", "sigma2", "order",
    "x1_min", "x1_max", "x2_min", "x2_max", "nx1", "nx2", "t", "normalization",
];

fn parse_num<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("line {line}: bad value for {key}: {value:?}")))
}

impl RunConfig {
    pub fn lattice(&self) -> LatticeConfig {
        LatticeConfig {
            omega: self.omega,
            k1: self.k1,
            k2: self.k2,
            tau1: self.tau1,
            tau2: self.tau2,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {line_no}: expected key = value")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::Usage(format!("line {line_no}: unknown key {key:?}")));
            }
            if seen.contains(&key) {
                return Err(CliError::Usage(format!("line {line_no}: duplicate key {key:?}")));
            }
            seen.push(key);
            let f = |v| parse_num::<f64>(key, v, line_no);
            match key {
                "omega" => cfg.omega = f(value)?,
                "k1" => cfg.k1 = f(value)?,
                "k2" => cfg.k2 = f(value)?,
                "tau1" => cfg.tau1 = f(value)?,
                "tau2" => cfg.tau2 = f(value)?,
                "beta0" => cfg.beta0 = f(value)?,
                "q" => cfg.q = parse_num(key, value, line_no)?,
                "mu" => cfg.mu = f(value)?,
                "C" => cfg.c = f(value)?,
                "sigma1" => cfg.sigma[0] = f(value)?,
                "sigma2" => cfg.sigma[1] = f(value)?,
                "order" => cfg.order = parse_num(key, value, line_no)?,
                "x1_min" => cfg.grid.x1_min = f(value)?,
                "x1_max" => cfg.grid.x1_max = f(value)?,
                "x2_min" => cfg.grid.x2_min = f(value)?,
                "x2_max" => cfg.grid.x2_max = f(value)?,
                "nx1" => cfg.grid.nx1 = parse_num(key, value, line_no)?,
                "nx2" => cfg.grid.nx2 = parse_num(key, value, line_no)?,
                "t" => cfg.grid.t = f(value)?,
                "normalization" => {
                    cfg.normalization = match value {
                        "reference" => Normalization::Reference,
                        "consistent" => Normalization::Consistent,
                        _ => {
                            return Err(CliError::Usage(format!(
                                "line {line_no}: normalization must be reference or consistent"
                            )))
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Usage-level checks; the lattice and branch point are validated by
    /// the library.
    pub fn validate(&self) -> Result<(), CliError> {
        self.validate_usage()?;
        self.lattice()
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Checks everything except the lattice parameters.
    pub fn validate_usage(&self) -> Result<(), CliError> {
        if self.grid.nx1 < 2 || self.grid.nx2 < 2 {
            return Err(CliError::Usage("grid counts must be at least 2".into()));
        }
        if !matches!(self.order, 1 | 2) {
            return Err(CliError::Usage(format!("order must be 1 or 2, got {}", self.order)));
        }
        if self.q == 0 {
            return Err(CliError::Usage("q must be at least 1".into()));
        }
        Ok(())
    }

    /// Text form that [`RunConfig::parse`] reads back to an identical value.
    pub fn to_text(&self) -> String {
        let g = &self.grid;
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("omega", format!("{:?}", self.omega));
        put("k1", format!("{:?}", self.k1));
        put("k2", format!("{:?}", self.k2));
        put("tau1", format!("{:?}", self.tau1));
        put("tau2", format!("{:?}", self.tau2));
        put("beta0", format!("{:?}", self.beta0));
        put("q", self.q.to_string());
        put("mu", format!("{:?}", self.mu));
        put("C", format!("{:?}", self.c));
        put("sigma1", format!("{:?}", self.sigma[0]));
        put("sigma2", format!("{:?}", self.sigma[1]));
        put("order", self.order.to_string());
        put("x1_min", format!("{:?}", g.x1_min));
        put("x1_max", format!("{:?}", g.x1_max));
        put("x2_min", format!("{:?}", g.x2_min));
        put("x2_max", format!("{:?}", g.x2_max));
        put("nx1", g.nx1.to_string());
        put("nx2", g.nx2.to_string());
        put("t", format!("{:?}", g.t));
        put("normalization", self.normalization.name().to_string());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut cfg = RunConfig::default();
        cfg.mu = -0.012345678901234567;
        cfg.sigma = [0.1, -2.5e-7];
        cfg.normalization = Normalization::Consistent;
        let back = RunConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_text(), cfg.to_text());
    }

    #[test]
    fn comments_and_errors() {
        let cfg = RunConfig::parse("# header\nmu = -0.1  # trailing\n\n").unwrap();
        assert_eq!(cfg.mu, -0.1);
        assert!(RunConfig::parse("bogus = 1").is_err());
        assert!(RunConfig::parse("mu = 1\nmu = 2").is_err());
        assert!(RunConfig::parse("nx1 = 1").is_err());
        assert!(RunConfig::parse("k1 = -1").is_err());
        assert!(RunConfig::parse("order = 3").is_err());
    }

    #[test]
    fn axis_includes_endpoints() {
        assert_eq!(Grid::axis(-1.0, 1.0, 3), vec![-1.0, 0.0, 1.0]);
    }
}
