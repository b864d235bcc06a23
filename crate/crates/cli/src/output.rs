//! CSV tables and plot scripts, written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// 12 significant digits, locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, header: &str) -> String {
        let mut out = String::from(header);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let mut file = fs::File::create(&tmp).map_err(io(&tmp))?;
    file.write_all(contents.as_bytes()).map_err(io(&tmp))?;
    file.sync_all().map_err(io(&tmp))?;
    fs::rename(&tmp, &target).map_err(io(&target))?;
    Ok(target)
}

/// One plotted line: CSV file, 1-based y column (x is column 1), legend label.
pub struct Series {
    pub file: String,
    pub column: usize,
    pub label: String,
}

/// Gnuplot script drawing every series against the first CSV column.
pub fn gnuplot_script(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[Series],
    xrange: Option<(f64, f64)>,
) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile commentschars '#'\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set title '{title}'\nset xlabel '{xlabel}'\nset ylabel '{ylabel}'\n"));
    if let Some((lo, hi)) = xrange {
        s.push_str(&format!("set xrange [{lo}:{hi}]\n"));
    }
    let lines: Vec<String> = series
        .iter()
        .map(|l| format!("'{}' using 1:{} with lines title '{}'", l.file, l.column, l.label))
        .collect();
    s.push_str(&format!("plot {}\n", lines.join(", \\\n     ")));
    s
}
