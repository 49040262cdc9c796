use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use nneten::{Error, Result};

/// One series per non-empty line, comma separated; `#` lines are comments.
pub fn read_series_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(c, f)| {
                f.trim().parse::<f64>().map_err(|e| Error::Parse {
                    row: i + 1,
                    column: c + 1,
                    message: format!("{}: {e}", path.display()),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        out.push(row);
    }
    if out.is_empty() {
        return Err(Error::Format(format!("{} holds no series", path.display())));
    }
    Ok(out)
}

pub fn format_series_csv(series: &[Vec<f64>]) -> String {
    let mut s = String::new();
    for row in series {
        let fields: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::Io {
            path: parent.to_path_buf(),
            source: e,
        })?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(contents)
        .and_then(|_| w.flush())
        .map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
}

/// Writes `body` after a `# ...` provenance line.
pub fn write_with_header(path: &Path, header: &str, body: &[u8]) -> Result<()> {
    let mut bytes = format!("# {header}\n").into_bytes();
    bytes.extend_from_slice(body);
    write_file(path, &bytes)
}
