use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    /// Plain matrix text (`gen` only).
    Text,
}

pub struct Sink {
    format: Format,
    out: Box<dyn Write>,
}

impl Sink {
    pub fn open(format: Format, path: Option<&PathBuf>) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink { format, out })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    /// JSON document, or CSV rows when the format asks for them.
    pub fn emit<T: Serialize, R: Serialize>(&mut self, doc: &T, rows: &[R]) -> Result<(), String> {
        match self.format {
            Format::Json => self.json(doc),
            Format::Csv => self.csv(rows),
            Format::Text => Err("--format text is only supported by gen".into()),
        }
    }

    pub fn json<T: Serialize>(&mut self, doc: &T) -> Result<(), String> {
        serde_json::to_writer_pretty(&mut self.out, doc).map_err(|e| e.to_string())?;
        writeln!(self.out).map_err(|e| e.to_string())?;
        self.out.flush().map_err(|e| e.to_string())
    }

    pub fn csv<R: Serialize>(&mut self, rows: &[R]) -> Result<(), String> {
        let mut w = csv::Writer::from_writer(&mut self.out);
        for row in rows {
            w.serialize(row).map_err(|e| e.to_string())?;
        }
        w.flush().map_err(|e| e.to_string())
    }

    pub fn text(&mut self, s: &str) -> Result<(), String> {
        self.out.write_all(s.as_bytes()).map_err(|e| e.to_string())?;
        self.out.flush().map_err(|e| e.to_string())
    }
}
