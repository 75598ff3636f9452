//! JSON summaries with 17 significant digits and CSV grid export.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use hexwave::lattice::LatticeConfig;
use hexwave::spectral::evaluate;
use hexwave::SpectralField;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::config::Grid;
use crate::error::CliError;

/// Compact JSON with every float written as `d.dddddddddddddddde±x`.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            // Adding zero maps -0.0 to 0.0.
            write!(writer, "{:.16e}", value + 0.0)
        } else {
            writer.write_all(b"null")
        }
    }
}

pub fn to_json(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("serializing a json value cannot fail");
    String::from_utf8(buf).expect("json output is utf-8")
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// CSV of `(x1, x2, eta, v1, v2)` at time `grid.t`, `x2` in the outer loop.
pub fn grid_csv(field: &SpectralField, cfg: &LatticeConfig, grid: &Grid) -> String {
    let xs1 = Grid::axis(grid.x1_min, grid.x1_max, grid.nx1);
    let xs2 = Grid::axis(grid.x2_min, grid.x2_max, grid.nx2);
    let mut out = String::from("x1,x2,eta,v1,v2\n");
    for &x2 in &xs2 {
        for &x1 in &xs1 {
            let [eta, v1, v2] = evaluate(field, cfg, x1, x2, grid.t);
            out.push_str(&format!(
                "{x1:.16e},{x2:.16e},{eta:.16e},{v1:.16e},{v2:.16e}\n"
            ));
        }
    }
    out
}

pub fn export_grid(
    path: &Path,
    field: &SpectralField,
    cfg: &LatticeConfig,
    grid: &Grid,
) -> Result<(), CliError> {
    write_file(path, &grid_csv(field, cfg, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hexwave::linop::constant_element;
    use serde_json::json;

    fn small_grid() -> Grid {
        Grid {
            x1_min: 0.0,
            x1_max: 1.0,
            x2_min: 0.0,
            x2_max: 1.0,
            nx1: 2,
            nx2: 2,
            t: 0.3,
        }
    }

    fn cfg() -> LatticeConfig {
        LatticeConfig::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn zero_field_grid() {
        let csv = grid_csv(&SpectralField::zero(), &cfg(), &small_grid());
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "x1,x2,eta,v1,v2");
        assert_eq!(lines.len(), 5);
        for l in &lines[1..] {
            assert!(l.split(',').skip(2).all(|v| v.parse::<f64>().unwrap() == 0.0));
        }
        // x2 is the slow index.
        assert!(lines[2].starts_with("1.0000000000000000e0,0.0000000000000000e0"));
    }

    #[test]
    fn constant_field_grid() {
        let csv = grid_csv(&(&constant_element() * 0.25), &cfg(), &small_grid());
        for l in csv.lines().skip(1) {
            let eta: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
            assert_eq!(eta, 0.25);
        }
    }

    #[test]
    fn floats_carry_seventeen_digits() {
        let s = to_json(&json!({"x": 0.1, "n": 3, "bad": f64::NAN}));
        assert_eq!(s, r#"{"bad":null,"n":3,"x":1.0000000000000001e-1}"#);
    }
}
