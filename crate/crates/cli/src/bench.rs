//! Run records, CSV output and per-class summaries.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use agp_core::geometry::fmt_rat;
use agp_core::instances::parse_polygon;
use agp_core::solver::{solve, Solution, SolverConfig, Status};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

pub const COLUMNS: [&str; 16] = [
    "schema_version",
    "instance",
    "class",
    "n",
    "config",
    "status",
    "lower_bound",
    "upper_bound",
    "iterations",
    "candidates",
    "witnesses",
    "wall_ms",
    "visibility_ms",
    "arrangement_ms",
    "set_cover_ms",
    "error",
];

/// Short stable digest of every solver setting.
pub fn config_digest(cfg: &SolverConfig) -> String {
    let h = Sha256::digest(format!("{cfg:?}").as_bytes());
    h.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

/// Instance class: the file stem up to the first `-` or `_`.
pub fn class_of(id: &str) -> String {
    id.split(['-', '_', '.']).next().unwrap_or(id).to_string()
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub instance: String,
    pub class: String,
    pub n: Option<usize>,
    pub config: String,
    pub solution: Result<Solution, String>,
}

impl RunRecord {
    pub fn optimal(&self) -> bool {
        matches!(&self.solution, Ok(s) if s.status == Status::ProvenOptimal)
    }

    fn fields(&self, timings: bool) -> Vec<String> {
        let ms = |d: Duration| format!("{:.3}", d.as_secs_f64() * 1000.0);
        let mut f = vec![
            SCHEMA_VERSION.to_string(),
            self.instance.clone(),
            self.class.clone(),
            self.n.map(|n| n.to_string()).unwrap_or_default(),
            self.config.clone(),
        ];
        match &self.solution {
            Ok(s) => {
                f.push(s.status.to_string());
                f.push(fmt_rat(&s.lower_bound));
                f.push(fmt_rat(&s.upper_bound));
                f.push(s.iterations.to_string());
                f.push(s.candidates.last().copied().unwrap_or(0).to_string());
                f.push(s.witnesses.last().copied().unwrap_or(0).to_string());
                let t = &s.timings;
                for d in [t.total, t.visibility, t.arrangement, t.set_cover] {
                    f.push(if timings { ms(d) } else { String::new() });
                }
                f.push(String::new());
            }
            Err(e) => {
                f.push("Error".to_string());
                f.extend(std::iter::repeat_n(String::new(), 9));
                f.push(e.clone());
            }
        }
        f
    }
}

pub fn write_csv<W: Write>(out: W, records: &[RunRecord], timings: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in records {
        w.write_record(r.fields(timings))?;
    }
    w.flush()?;
    Ok(())
}

/// Solves one instance file; failures become error rows.
pub fn run_file(path: &Path, cfg: &SolverConfig) -> RunRecord {
    let instance = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut rec = RunRecord {
        class: class_of(&stem),
        instance,
        n: None,
        config: config_digest(cfg),
        solution: Err(String::new()),
    };
    let poly = match std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|t| parse_polygon(&t).map_err(|e| e.to_string()))
    {
        Ok(p) => p,
        Err(e) => {
            rec.solution = Err(e);
            return rec;
        }
    };
    rec.n = Some(poly.n());
    rec.solution = solve(&poly, cfg).map_err(|e| e.to_string());
    rec
}

/// Solves every file in `paths` in parallel, keeping input order.
pub fn run_all(paths: &[std::path::PathBuf], cfg: &SolverConfig) -> Vec<RunRecord> {
    paths.par_iter().map(|p| run_file(p, cfg)).collect()
}

/// Optimality rate per class and size.
pub fn summary(records: &[RunRecord]) -> String {
    let mut groups: BTreeMap<(String, usize), (usize, usize, usize)> = BTreeMap::new();
    for r in records {
        let g = groups.entry((r.class.clone(), r.n.unwrap_or(0))).or_default();
        g.0 += 1;
        if r.optimal() {
            g.1 += 1;
        }
        if r.solution.is_err() {
            g.2 += 1;
        }
    }
    let mut s = format!("{:<12} {:>6} {:>6} {:>8} {:>7} {:>8}\n", "class", "n", "runs", "optimal", "failed", "rate");
    for ((class, n), (runs, opt, failed)) in groups {
        s.push_str(&format!(
            "{:<12} {:>6} {:>6} {:>8} {:>7} {:>7.1}%\n",
            class,
            n,
            runs,
            opt,
            failed,
            100.0 * opt as f64 / runs as f64
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(class_of("simple-100-3"), "simple");
        assert_eq!(class_of("comb_4"), "comb");
        assert_eq!(class_of("square"), "square");
    }

    #[test]
    fn digest_tracks_config() {
        let a = config_digest(&SolverConfig::default());
        assert_eq!(a.len(), 12);
        assert_eq!(a, config_digest(&SolverConfig::default()));
        assert_ne!(a, config_digest(&SolverConfig::vertex()));
    }

    #[test]
    fn error_rows_keep_width() {
        let r = RunRecord {
            instance: "x".into(),
            class: "x".into(),
            n: None,
            config: "c".into(),
            solution: Err("bad".into()),
        };
        assert_eq!(r.fields(false).len(), COLUMNS.len());
    }
}
