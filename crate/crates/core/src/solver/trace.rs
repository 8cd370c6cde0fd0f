use std::fmt::Write;

/// One iteration's objective, constraint gaps and the penalty it ran with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub objective: f64,
    pub r_recon: f64,
    pub r_u: f64,
    pub r_a: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTrace {
    pub rows: Vec<TraceRow>,
}

pub const TRACE_HEADER: &str = "iteration,objective,r_recon,r_u,r_a,mu";

impl ConvergenceTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// CSV with a header line. Floats use shortest round-trip formatting, so
    /// two identical runs give byte-identical output.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:e},{:e},{:e},{:e},{:e}",
                r.iteration, r.objective, r.r_recon, r.r_u, r.r_a, r.mu
            );
        }
        out
    }
}
