//! CSV and run-summary writers.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a CSV
//! read back in reproduces the exact f64 bits and two runs of the same
//! problem produce byte-identical files.

use reynolds_core::{Grid1D, Grid2D};
use std::fmt::Write as _;
use std::path::Path;

/// Pressure table for a line problem: `index_i,x,p,active`, one row per
/// node.  A node is flagged active exactly when its written pressure is
/// positive.
pub fn csv_1d(grid: Grid1D, values: &[f64]) -> String {
    let mut out = String::from("index_i,x,p,active\n");
    for (i, &p) in values.iter().enumerate() {
        let _ = writeln!(out, "{},{},{},{}", i, grid.x(i), p, p > 0.0);
    }
    out
}

/// Pressure table for a rectangle problem: `index_i,index_j,x,y,p,active`,
/// row-major with `index_i` varying fastest.
pub fn csv_2d(grid: Grid2D, values: &[f64]) -> String {
    let mut out = String::from("index_i,index_j,x,y,p,active\n");
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let p = values[grid.idx(i, j)];
            let _ = writeln!(out, "{},{},{},{},{},{}", i, j, grid.x(i), grid.y(j), p, p > 0.0);
        }
    }
    out
}

/// Write a file, creating parent directories as needed.
pub fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_csv_is_exact_and_flags_active_nodes() {
        let grid = Grid1D::new(4, -1.0, 1.0).unwrap();
        let csv = csv_1d(grid, &[0.0, 2.5, 0.125, 0.0]);
        let expected = "index_i,x,p,active\n\
                        0,-1,0,false\n\
                        1,0,2.5,true\n\
                        2,1,0.125,true\n\
                        3,2,0,false\n";
        assert_eq!(csv, expected);
    }

    #[test]
    fn rect_csv_orders_rows_with_i_fastest() {
        let grid = Grid2D::new(3, 3, 0.0, 0.0, 0.5, 0.5).unwrap();
        let mut values = vec![0.0; 9];
        values[grid.idx(1, 1)] = 1.0;
        let csv = csv_2d(grid, &values);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "index_i,index_j,x,y,p,active");
        assert_eq!(lines[1], "0,0,0,0,0,false");
        assert_eq!(lines[2], "1,0,0.5,0,0,false");
        assert_eq!(lines[5], "1,1,0.5,0.5,1,true");
        assert_eq!(lines.len(), 10);
    }
}
