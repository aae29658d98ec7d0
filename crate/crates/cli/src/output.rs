//! Report and table writers. Files appear only once fully written.

use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use slosh::scalar::sig12;

/// Writes via a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let result = (|| {
        let mut w = BufWriter::new(File::create(&tmp)?);
        fill(&mut w)?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()
    })();
    match result {
        Ok(()) => std::fs::rename(&tmp, path),
        Err(e) => {
            let _ = std::fs::remove_file(&tmp);
            Err(e)
        }
    }
}

/// Flat `key=value` block, in insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(&mut self, key: impl Into<String>, v: impl Display) -> &mut Self {
        self.lines.push((key.into(), v.to_string()));
        self
    }

    pub fn num(&mut self, key: impl Into<String>, v: f64) -> &mut Self {
        self.text(key, sig12(v))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|l| l.0 == key).map(|l| l.1.as_str())
    }

    pub fn write_to(&self, w: &mut dyn Write) -> io::Result<()> {
        for (k, v) in &self.lines {
            writeln!(w, "{k}={v}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        write_atomic(path, |w| self.write_to(w))
    }
}

/// CSV field for an optional number; empty when absent.
pub fn opt_num(v: Option<f64>) -> String {
    v.map(sig12).unwrap_or_default()
}
