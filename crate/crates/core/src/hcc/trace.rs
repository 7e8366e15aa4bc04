use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Best-so-far curve of one run plus the FE counts where phases begin.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    /// `(fes consumed, best value so far)`, non-increasing in value.
    pub samples: Vec<(usize, f64)>,
    /// `(phase name, fes at its start)`.
    pub phase_marks: Vec<(String, usize)>,
    pub wall_time: f64,
}

#[derive(Serialize, Deserialize)]
struct SampleRow {
    fes: usize,
    best_so_far: f64,
}

#[derive(Serialize, Deserialize)]
struct PhaseRow {
    phase: String,
    fes: usize,
}

impl RunTrace {
    pub fn final_fes(&self) -> usize {
        self.samples.last().map_or(0, |s| s.0)
    }

    pub fn final_best(&self) -> f64 {
        self.samples.last().map_or(f64::INFINITY, |s| s.1)
    }

    /// Best value after `fes` evaluations; infinite before the first sample.
    pub fn best_at(&self, fes: usize) -> f64 {
        match self.samples.partition_point(|s| s.0 <= fes) {
            0 => f64::INFINITY,
            k => self.samples[k - 1].1,
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.samples
            .windows(2)
            .all(|w| w[0].0 <= w[1].0 && w[1].1 <= w[0].1)
    }

    /// Writes `fes,best_so_far`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
        for &(fes, best_so_far) in &self.samples {
            w.serialize(SampleRow { fes, best_so_far })?;
        }
        if self.samples.is_empty() {
            w.write_record(["fes", "best_so_far"])?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Writes `phase,fes`.
    pub fn write_phases_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
        for (phase, fes) in &self.phase_marks {
            w.serialize(PhaseRow {
                phase: phase.clone(),
                fes: *fes,
            })?;
        }
        if self.phase_marks.is_empty() {
            w.write_record(["phase", "fes"])?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<Vec<(usize, f64)>> {
        let mut r = csv::Reader::from_path(path).map_err(|e| csv_io(path, e))?;
        r.deserialize::<SampleRow>()
            .map(|row| row.map(|s| (s.fes, s.best_so_far)).map_err(Error::from))
            .collect()
    }

    pub fn read_phases_csv(path: &Path) -> Result<Vec<(String, usize)>> {
        let mut r = csv::Reader::from_path(path).map_err(|e| csv_io(path, e))?;
        r.deserialize::<PhaseRow>()
            .map(|row| row.map(|p| (p.phase, p.fes)).map_err(Error::from))
            .collect()
    }
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        }
    } else {
        Error::Csv(e)
    }
}
