//! Parser for the flat key-value sweep spec format.
//!
//! One `key = value` pair per line, `#` starts a comment, lists are
//! comma-separated, and float lists accept the shorthand
//! `logrange(start,stop,count)` for log-spaced grids.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::SweepSpec;
use crate::model::{DEFAULT_ATTENUATION_LENGTH_KM, DEFAULT_FIBER_SPEED_M_PER_S};
use crate::protocols::{Accounting, ProtocolKind};

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_MASTER_SEED: u64 = 0xBE11;

impl SweepSpec {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        SweepSpec::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = SweepSpec {
            protocols: vec![ProtocolKind::Parallel, ProtocolKind::Sequential],
            node_values: Vec::new(),
            dephasing_values_s: Vec::new(),
            bsm_values: vec![1.0],
            total_length_km: 0.0,
            attenuation_length_km: DEFAULT_ATTENUATION_LENGTH_KM,
            fiber_speed_m_per_s: DEFAULT_FIBER_SPEED_M_PER_S,
            trials: DEFAULT_TRIALS,
            master_seed: DEFAULT_MASTER_SEED,
            accounting: Accounting::default(),
        };
        let mut seen = HashSet::new();
        let mut found_nodes = false;
        let mut found_dephasing = false;
        let mut found_length = false;

        for (index, raw_line) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = match raw_line.find('#') {
                Some(at) => &raw_line[..at],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::SpecParse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::SpecParse {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
            match key {
                "protocols" => {
                    spec.protocols = value
                        .split(',')
                        .map(|item| {
                            item.parse::<ProtocolKind>().map_err(|e| Error::SpecParse {
                                line: line_no,
                                message: format!("field `protocols`: {e}"),
                            })
                        })
                        .collect::<Result<_>>()?;
                }
                "nodes" => {
                    spec.node_values = parse_list(value, line_no, "nodes", |item| {
                        item.parse::<u32>().map_err(|e| e.to_string())
                    })?;
                    found_nodes = true;
                }
                "t_dp_seconds" => {
                    spec.dephasing_values_s = parse_float_list(value, line_no, "t_dp_seconds")?;
                    found_dephasing = true;
                }
                "lambda_bsm" => {
                    spec.bsm_values = parse_float_list(value, line_no, "lambda_bsm")?;
                }
                "length_km" => {
                    spec.total_length_km = parse_scalar(value, line_no, "length_km")?;
                    found_length = true;
                }
                "attenuation_km" => {
                    spec.attenuation_length_km = parse_scalar(value, line_no, "attenuation_km")?;
                }
                "fiber_speed_m_per_s" => {
                    spec.fiber_speed_m_per_s = parse_scalar(value, line_no, "fiber_speed_m_per_s")?;
                }
                "trials" => {
                    spec.trials = value.parse::<u64>().map_err(|e| Error::SpecParse {
                        line: line_no,
                        message: format!("field `trials`: {e}"),
                    })?;
                }
                "seed" => {
                    spec.master_seed = value.parse::<u64>().map_err(|e| Error::SpecParse {
                        line: line_no,
                        message: format!("field `seed`: {e}"),
                    })?;
                }
                "accounting" => {
                    spec.accounting = value.parse::<Accounting>().map_err(|e| Error::SpecParse {
                        line: line_no,
                        message: format!("field `accounting`: {e}"),
                    })?;
                }
                other => {
                    return Err(Error::SpecParse {
                        line: line_no,
                        message: format!("unknown key `{other}`"),
                    });
                }
            }
        }

        for (found, field) in [
            (found_nodes, "nodes"),
            (found_dephasing, "t_dp_seconds"),
            (found_length, "length_km"),
        ] {
            if !found {
                return Err(Error::SpecParse {
                    line: 0,
                    message: format!("missing required key `{field}`"),
                });
            }
        }

        spec.validate()?;
        Ok(spec)
    }
}

fn parse_list<T>(
    value: &str,
    line: usize,
    field: &str,
    parse: impl Fn(&str) -> std::result::Result<T, String>,
) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|item| !item.is_empty())
        .map(|item| {
            parse(item).map_err(|e| Error::SpecParse {
                line,
                message: format!("field `{field}`: bad value `{item}`: {e}"),
            })
        })
        .collect()
}

fn parse_scalar(value: &str, line: usize, field: &str) -> Result<f64> {
    value.parse::<f64>().map_err(|e| Error::SpecParse {
        line,
        message: format!("field `{field}`: {e}"),
    })
}

fn parse_float_list(value: &str, line: usize, field: &str) -> Result<Vec<f64>> {
    let trimmed = value.trim();
    if let Some(args) = trimmed
        .strip_prefix("logrange(")
        .and_then(|rest| rest.strip_suffix(')'))
    {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::SpecParse {
                line,
                message: format!("field `{field}`: logrange takes (start, stop, count)"),
            });
        }
        let start = parse_scalar(parts[0], line, field)?;
        let stop = parse_scalar(parts[1], line, field)?;
        let count = parts[2].parse::<usize>().map_err(|e| Error::SpecParse {
            line,
            message: format!("field `{field}`: logrange count: {e}"),
        })?;
        if start.is_nan() || start <= 0.0 || stop.is_nan() || stop <= 0.0 || count < 2 {
            return Err(Error::SpecParse {
                line,
                message: format!(
                    "field `{field}`: logrange needs positive endpoints and count >= 2"
                ),
            });
        }
        let ratio = stop / start;
        let mut points: Vec<f64> = (0..count)
            .map(|i| start * ratio.powf(i as f64 / (count - 1) as f64))
            .collect();
        points[count - 1] = stop;
        return Ok(points);
    }
    parse_list(trimmed, line, field, |item| {
        item.parse::<f64>().map_err(|e| e.to_string())
    })
}
