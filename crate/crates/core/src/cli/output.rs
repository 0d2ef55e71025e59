// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Result files: comma-separated tables with a `#` header naming every
//! column and its unit, and whitespace-separated plot data derived from
//! them.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

/// Round-trip exact formatting (17 significant digits).
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// A table ready to be written as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<(String, String)>,
    rows: Vec<Vec<String>>,
}

impl Table {
    /// `columns` are `(name, unit)` pairs; use `"1"` for dimensionless.
    pub fn new(columns: &[(&str, &str)]) -> Self {
        Self {
            columns: columns.iter().map(|(n, u)| (n.to_string(), u.to_string())).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn push_values(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| num(v)).collect());
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let header: Vec<String> = self.columns.iter().map(|(n, u)| format!("{n} [{u}]")).collect();
        let mut out = format!("# {}\n", header.join(","));
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// Plot series derived from each result table: `(table, series, columns)`.
const PLOT_SERIES: &[(&str, &str, &[&str])] = &[
    ("propagate.csv", "propagate_entropy.dat", &["t", "linear_entropy"]),
    ("propagate.csv", "propagate_moments.dat", &["t", "mean_x", "mean_p", "var_x", "var_p"]),
    ("sieve_landscape.csv", "sieve_landscape.dat", &["s", "value"]),
    ("average_rates.csv", "average_rates.dat", &["n", "rate_averaged", "rate_qome_fit"]),
    ("cp_spectrum.csv", "cp_spectrum.dat", &["index", "eigenvalue"]),
];

fn column_index(header: &str, name: &str) -> Option<usize> {
    header
        .trim_start_matches('#')
        .split(',')
        .position(|c| c.split_whitespace().next() == Some(name))
}

/// Write gnuplot-ready `.dat` files for every result table found in `dir`.
/// Fails with `NotFound` if there is none.
pub fn emit_plotdata(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (table, series, cols) in PLOT_SERIES {
        let path = dir.join(table);
        if !path.exists() {
            continue;
        }
        let text = std::fs::read_to_string(&path)?;
        let mut lines = text.lines();
        let header = lines
            .next()
            .filter(|h| h.starts_with('#'))
            .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, format!("{table}: missing header")))?;
        let idx: Vec<usize> = cols
            .iter()
            .map(|c| {
                column_index(header, c).ok_or_else(|| {
                    io::Error::new(io::ErrorKind::InvalidData, format!("{table}: no column `{c}`"))
                })
            })
            .collect::<io::Result<_>>()?;
        let full_header = header.trim_start_matches('#').split(',').map(str::trim).collect::<Vec<_>>();
        let mut out = String::new();
        let names: Vec<&str> = idx.iter().map(|&i| full_header[i]).collect();
        writeln!(out, "# {}", names.join("  ")).expect("string write");
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            let picked: Vec<&str> = idx.iter().map(|&i| fields[i]).collect();
            writeln!(out, "{}", picked.join(" ")).expect("string write");
        }
        let target = dir.join(series);
        std::fs::write(&target, out)?;
        written.push(target);
    }
    if written.is_empty() {
        return Err(io::Error::new(
            io::ErrorKind::NotFound,
            format!("no result tables in {}", dir.display()),
        ));
    }
    Ok(written)
}
