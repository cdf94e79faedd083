//! `n,re,im` CSV exchange format: one row per index, ascending from 0, no
//! gaps, 17 significant digits so doubles survive the round trip.

use super::{OneSidedSequence, SequenceOrigin};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

pub fn write_csv_to<W: Write>(seq: &OneSidedSequence, count: u64, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "re", "im"])?;
    for n in 0..count {
        let v = seq.eval(n);
        w.write_record([n.to_string(), format!("{:.16e}", v.re), format!("{:.16e}", v.im)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(seq: &OneSidedSequence, count: u64, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv_to(seq, count, std::io::BufWriter::new(file))
}

pub fn read_csv_from<R: Read>(input: R, source: &str) -> Result<OneSidedSequence> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["n", "re", "im"] {
        return Err(Error::Csv(format!(
            "expected header n,re,im, found {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut values = Vec::new();
    for (row, record) in r.records().enumerate() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let n: u64 = field(0)
            .parse()
            .map_err(|_| Error::Csv(format!("row {row}: bad index {:?}", field(0))))?;
        if n != row as u64 {
            return Err(Error::Csv(format!(
                "row {row}: index {n} breaks the ascending, gap-free order"
            )));
        }
        let parse = |i: usize| -> Result<f64> {
            let x: f64 = field(i)
                .parse()
                .map_err(|_| Error::Csv(format!("row {row}: bad number {:?}", field(i))))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::Csv(format!("row {row}: non-finite value")))
            }
        };
        values.push(Complex64::new(parse(1)?, parse(2)?));
    }
    Ok(OneSidedSequence::from_values(
        values,
        SequenceOrigin::Imported {
            source: source.to_string(),
        },
    ))
}

pub fn read_csv(path: &Path) -> Result<OneSidedSequence> {
    let file = std::fs::File::open(path)?;
    read_csv_from(std::io::BufReader::new(file), &path.display().to_string())
}
