//! CSV trace files, one row per iteration.

use std::io::{Read, Write};

use bargain_core::{Point, TraceRecord};
use thiserror::Error;

use crate::format::fmt_g17;

pub const HEADER: [&str; 8] = ["n", "x", "y", "z", "w", "tx", "ty", "diam"];

#[derive(Debug, Error)]
pub enum TraceFileError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("bad header {0:?}")]
    Header(Vec<String>),
    #[error("row {row}: {message}")]
    Field { row: usize, message: String },
}

pub fn write_trace<W: Write>(out: W, rows: &[TraceRecord]) -> Result<(), TraceFileError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        let mut record = vec![r.n.to_string()];
        record.extend(
            [r.x, r.y, r.z, r.w, r.threat.x, r.threat.y, r.diam]
                .into_iter()
                .map(fmt_g17),
        );
        w.write_record(&record)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRecord>, TraceFileError> {
    let mut r = csv::ReaderBuilder::new().from_reader(input);
    let header = r.headers()?;
    if header.iter().ne(HEADER) {
        return Err(TraceFileError::Header(
            header.iter().map(str::to_string).collect(),
        ));
    }
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let bad = |message: String| TraceFileError::Field {
            row: i + 1,
            message,
        };
        let n = record[0]
            .parse::<usize>()
            .map_err(|e| bad(format!("n: {e}")))?;
        let mut v = [0.0; 7];
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = record[k + 1]
                .parse::<f64>()
                .map_err(|e| bad(format!("{}: {e}", HEADER[k + 1])))?;
        }
        rows.push(TraceRecord {
            n,
            x: v[0],
            y: v[1],
            z: v[2],
            w: v[3],
            threat: Point::new(v[4], v[5]),
            diam: v[6],
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<TraceRecord> {
        vec![
            TraceRecord {
                n: 0,
                x: 0.0,
                y: 1.0,
                z: 1.0,
                w: 0.0,
                threat: Point::new(0.5, 0.5),
                diam: std::f64::consts::SQRT_2,
            },
            TraceRecord {
                n: 1,
                x: 0.1,
                y: 1.0 / 3.0,
                z: 0.7,
                w: 1e-300,
                threat: Point::new(0.4, 0.1 + 0.2),
                diam: 0.0,
            },
        ]
    }

    #[test]
    fn layout() {
        let mut buf = Vec::new();
        write_trace(&mut buf, &rows()[..1]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,x,y,z,w,tx,ty,diam\n0,0,1,1,0,0.5,0.5,1.4142135623730951\n"
        );
    }

    #[test]
    fn round_trip() {
        let mut buf = Vec::new();
        write_trace(&mut buf, &rows()).unwrap();
        assert_eq!(read_trace(buf.as_slice()).unwrap(), rows());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(
            read_trace("n,x,y\n0,1,2\n".as_bytes()),
            Err(TraceFileError::Header(_))
        ));
        assert!(matches!(
            read_trace("n,x,y,z,w,tx,ty,diam\n0,1,2,3,4,5,six,7\n".as_bytes()),
            Err(TraceFileError::Field { row: 1, .. })
        ));
    }
}
