//! Checkpoint rows and their CSV form.
//!
//! Columns: `run_id, model, d, alpha, trial, j, max_degree, f_1..f_K`, with a
//! mandatory header. Wall-clock time is kept on the record but not written, so
//! files are byte-identical across runs and thread counts.

use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckpointRecord {
    pub run_id: String,
    pub model: String,
    /// Candidates per step at this checkpoint.
    pub d: u32,
    pub alpha: f64,
    pub trial: u64,
    pub j: u64,
    pub max_degree: u32,
    /// `F(1..=K)`.
    pub f: Vec<u64>,
    /// Time spent since the previous checkpoint of the same trial.
    #[serde(skip)]
    pub elapsed_ns: u64,
}

const FIXED_COLUMNS: [&str; 7] = ["run_id", "model", "d", "alpha", "trial", "j", "max_degree"];

/// Writes `records` with a header sized to the first record's `F`.
pub fn write_csv<W: Write>(out: W, records: &[CheckpointRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let kmax = records.first().map_or(0, |r| r.f.len());
    let mut header: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend((1..=kmax).map(|k| format!("f_{k}")));
    w.write_record(&header)?;
    let mut row = Vec::with_capacity(header.len());
    for r in records {
        row.clear();
        row.push(r.run_id.clone());
        row.push(r.model.clone());
        row.push(r.d.to_string());
        row.push(r.alpha.to_string());
        row.push(r.trial.to_string());
        row.push(r.j.to_string());
        row.push(r.max_degree.to_string());
        row.extend(r.f.iter().map(u64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, records: &[CheckpointRecord]) -> Result<(), Error> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    write_csv(std::io::BufWriter::new(file), records).map_err(|source| Error::Csv {
        path: path.to_owned(),
        source,
    })
}

/// Parses records written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<CheckpointRecord>, Error> {
    let mut reader = csv::Reader::from_reader(input);
    let csv_err = |source| Error::Csv {
        path: "<input>".into(),
        source,
    };
    let header = reader.headers().map_err(csv_err)?.clone();
    if header.len() < FIXED_COLUMNS.len() || header.iter().zip(FIXED_COLUMNS).any(|(a, b)| a != b) {
        return Err(Error::Record {
            line: 1,
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let kmax = header.len() - FIXED_COLUMNS.len();
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_err)?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |field: &str| Error::Record {
            line,
            message: format!("bad {field}"),
        };
        if row.len() != header.len() {
            return Err(Error::Record {
                line,
                message: format!("expected {} columns, found {}", header.len(), row.len()),
            });
        }
        let f = (0..kmax)
            .map(|i| row[FIXED_COLUMNS.len() + i].parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad("f column"))?;
        out.push(CheckpointRecord {
            run_id: row[0].to_owned(),
            model: row[1].to_owned(),
            d: row[2].parse().map_err(|_| bad("d"))?,
            alpha: row[3].parse().map_err(|_| bad("alpha"))?,
            trial: row[4].parse().map_err(|_| bad("trial"))?,
            j: row[5].parse().map_err(|_| bad("j"))?,
            max_degree: row[6].parse().map_err(|_| bad("max_degree"))?,
            f,
            elapsed_ns: 0,
        });
    }
    Ok(out)
}

pub fn read_csv_file(path: &Path) -> Result<Vec<CheckpointRecord>, Error> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    read_csv(std::io::BufReader::new(file)).map_err(|e| match e {
        Error::Csv { source, .. } => Error::Csv {
            path: path.to_owned(),
            source,
        },
        other => other,
    })
}
