use std::fmt::Write as _;

use serde::Serialize;

/// One watched vertex after `iteration` vertices have been processed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub vertex: usize,
    pub potential: f64,
    pub entropy: f64,
    /// Colors pinned high (the only bad set for graphs).
    pub bad_hi: usize,
    pub bad_lo: usize,
}

/// Diagnostics time series for a watch-set, plus the final set sizes of
/// every vertex.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunTrace {
    pub watch: Vec<usize>,
    pub rows: Vec<TraceRow>,
    pub final_sizes: Vec<usize>,
}

impl RunTrace {
    pub fn new(watch: Vec<usize>) -> Self {
        Self {
            watch,
            ..Self::default()
        }
    }

    pub fn initial_rows(&self) -> impl Iterator<Item = &TraceRow> {
        self.rows.iter().filter(|r| r.iteration == 0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,vertex,P,Q,bad_hi,bad_lo\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.iteration, r.vertex, r.potential, r.entropy, r.bad_hi, r.bad_lo
            );
        }
        out
    }
}
