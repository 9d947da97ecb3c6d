use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::de::DeserializeOwned;
use soscert::datagen::{entry_from_line, DatasetEntry};

use crate::Failure;

/// Records that parsed, plus one message per line that did not.
pub struct Parsed<T> {
    pub records: Vec<T>,
    pub errors: Vec<String>,
}

fn read_lines<T>(path: &Path, parse: impl Fn(&str) -> Result<T, String>) -> Result<Parsed<T>, Failure> {
    let file = File::open(path).map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse(&line) {
            Ok(r) => records.push(r),
            Err(e) => errors.push(format!("{}:{}: {e}", path.display(), i + 1)),
        }
    }
    Ok(Parsed { records, errors })
}

pub fn read_entries(path: &Path) -> Result<Parsed<DatasetEntry>, Failure> {
    read_lines(path, |l| entry_from_line(l).map_err(|e| e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<Parsed<T>, Failure> {
    read_lines(path, |l| serde_json::from_str(l).map_err(|e| e.to_string()))
}

pub fn report_errors(errors: &[String]) {
    for e in errors {
        eprintln!("parse error: {e}");
    }
}
