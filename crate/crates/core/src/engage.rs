//! Engagement rate and a log-log regression benchmark between pages.
//!
//! The raw engagement rate `interactions / likes` assumes interactions grow
//! linearly with audience size. The benchmark instead regresses
//! `log10(interactions)` on `log10(likes)` and ranks each page by its
//! residual, i.e. how far it sits above or below pages of the same size.

use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::ols;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngagementRecord {
    pub bpo_id: String,
    pub interactions: u64,
    pub likes: u64,
}

pub fn engagement_rate(rec: &EngagementRecord) -> Result<f64> {
    if rec.likes == 0 {
        return Err(Error::Domain(format!("`{}` has zero likes", rec.bpo_id)));
    }
    Ok(rec.interactions as f64 / rec.likes as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogBenchmark {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
    /// Observed minus predicted `log10(interactions)`.
    pub residual_per_bpo: BTreeMap<String, f64>,
    /// Records left out of the fit because they had no interactions.
    pub excluded: usize,
}

impl LogBenchmark {
    pub fn predict_log_interactions(&self, likes: u64) -> f64 {
        self.intercept + self.slope * (likes as f64).log10()
    }
}

pub const MIN_BENCHMARK_RECORDS: usize = 3;

/// Fits `log10(interactions) = intercept + slope * log10(likes)`.
///
/// Records with zero interactions are excluded (and counted). At least
/// [`MIN_BENCHMARK_RECORDS`] records must remain.
pub fn fit_log_benchmark(records: &[EngagementRecord]) -> Result<LogBenchmark> {
    let mut ids = HashSet::new();
    for rec in records {
        if rec.likes == 0 {
            return Err(Error::Domain(format!("`{}` has zero likes", rec.bpo_id)));
        }
        if !ids.insert(rec.bpo_id.as_str()) {
            return Err(Error::DuplicateId(rec.bpo_id.clone()));
        }
    }
    let usable: Vec<&EngagementRecord> = records.iter().filter(|r| r.interactions > 0).collect();
    if usable.len() < MIN_BENCHMARK_RECORDS {
        return Err(Error::SampleSize {
            needed: MIN_BENCHMARK_RECORDS,
            got: usable.len(),
        });
    }
    let x: Vec<f64> = usable.iter().map(|r| (r.likes as f64).log10()).collect();
    let y: Vec<f64> = usable.iter().map(|r| (r.interactions as f64).log10()).collect();
    let fit = ols(&x, &y).map_err(|e| match e {
        Error::Singular(_) => Error::Singular("all records have the same like count".into()),
        other => other,
    })?;
    let residual_per_bpo = usable
        .iter()
        .zip(x.iter().zip(&y))
        .map(|(r, (&xi, &yi))| (r.bpo_id.clone(), yi - fit.predict(xi)))
        .collect();
    Ok(LogBenchmark {
        intercept: fit.intercept,
        slope: fit.slope,
        r_squared: fit.r_squared,
        residual_per_bpo,
        excluded: records.len() - usable.len(),
    })
}

/// Pages by descending residual (over-performers first), ties by id.
pub fn benchmark_rank(bench: &LogBenchmark) -> Vec<(String, f64)> {
    let mut ranked: Vec<(String, f64)> = bench
        .residual_per_bpo
        .iter()
        .map(|(id, &r)| (id.clone(), r))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}

/// Reads `bpo_id,interactions,likes` CSV.
pub fn read_records<R: Read>(reader: R) -> Result<Vec<EngagementRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["bpo_id", "interactions", "likes"] {
        return Err(Error::Parse {
            line: 1,
            message: "expected header `bpo_id,interactions,likes`".into(),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize().enumerate() {
        out.push(row.map_err(|e: csv::Error| Error::Parse {
            line: i + 2,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct ReportRow<'a> {
    bpo_id: &'a str,
    er: f64,
    residual: Option<f64>,
    rank: Option<usize>,
}

/// Writes `bpo_id,er,residual,rank` in input order. Records excluded from
/// the fit have empty residual and rank cells.
pub fn write_report<W: Write>(records: &[EngagementRecord], bench: &LogBenchmark, out: W) -> Result<()> {
    let ranks: BTreeMap<String, usize> = benchmark_rank(bench)
        .into_iter()
        .enumerate()
        .map(|(i, (id, _))| (id, i + 1))
        .collect();
    let mut wtr = csv::Writer::from_writer(out);
    for rec in records {
        wtr.serialize(ReportRow {
            bpo_id: &rec.bpo_id,
            er: engagement_rate(rec)?,
            residual: bench.residual_per_bpo.get(&rec.bpo_id).copied(),
            rank: ranks.get(&rec.bpo_id).copied(),
        })?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, interactions: u64, likes: u64) -> EngagementRecord {
        EngagementRecord {
            bpo_id: id.into(),
            interactions,
            likes,
        }
    }

    #[test]
    fn rate_is_plain_ratio() {
        assert_eq!(engagement_rate(&rec("a", 50, 1000)).unwrap(), 0.05);
        assert_eq!(engagement_rate(&rec("a", 0, 10)).unwrap(), 0.0);
        assert_eq!(engagement_rate(&rec("a", 77, 77)).unwrap(), 1.0);
        assert!(matches!(engagement_rate(&rec("a", 1, 0)), Err(Error::Domain(_))));
    }

    #[test]
    fn needs_three_usable_records() {
        let two = [rec("a", 10, 100), rec("b", 20, 1000)];
        assert!(matches!(fit_log_benchmark(&two), Err(Error::SampleSize { needed: 3, got: 2 })));
        let with_zero = [rec("a", 10, 100), rec("b", 20, 1000), rec("c", 0, 50)];
        assert!(fit_log_benchmark(&with_zero).is_err());
    }

    #[test]
    fn equal_likes_is_singular() {
        let same = [rec("a", 10, 100), rec("b", 20, 100), rec("c", 5, 100)];
        assert!(matches!(fit_log_benchmark(&same), Err(Error::Singular(_))));
    }

    #[test]
    fn duplicates_are_rejected() {
        let dup = [rec("a", 10, 100), rec("a", 20, 1000), rec("c", 5, 10)];
        assert!(matches!(fit_log_benchmark(&dup), Err(Error::DuplicateId(_))));
    }

    #[test]
    fn zero_interactions_are_excluded_and_counted() {
        let rows = [rec("a", 10, 100), rec("b", 0, 500), rec("c", 30, 1000), rec("d", 4, 20)];
        let bench = fit_log_benchmark(&rows).unwrap();
        assert_eq!(bench.excluded, 1);
        assert!(!bench.residual_per_bpo.contains_key("b"));
        let sum: f64 = bench.residual_per_bpo.values().sum();
        assert!(sum.abs() < 1e-9);
    }

    #[test]
    fn ranking_orders_by_residual_then_id() {
        let bench = LogBenchmark {
            intercept: 0.0,
            slope: 1.0,
            r_squared: 1.0,
            residual_per_bpo: [("low", -0.3), ("high", 0.3), ("b", 0.0), ("a", 0.0)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            excluded: 0,
        };
        let order: Vec<String> = benchmark_rank(&bench).into_iter().map(|(id, _)| id).collect();
        assert_eq!(order, ["high", "a", "b", "low"]);

        let single = LogBenchmark {
            residual_per_bpo: [("only".to_string(), 0.0)].into_iter().collect(),
            ..bench
        };
        assert_eq!(benchmark_rank(&single)[0].0, "only");
    }

    #[test]
    fn csv_round_trip() {
        let text = "bpo_id,interactions,likes\na,10,100\nb,0,40\nc,300,10000\nd,7,30\n";
        let rows = read_records(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 4);
        let bench = fit_log_benchmark(&rows).unwrap();
        let mut out = Vec::new();
        write_report(&rows, &bench, &mut out).unwrap();
        let out = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "bpo_id,er,residual,rank");
        assert_eq!(lines[2], "b,0.0,,");
        assert_eq!(lines.len(), 5);
        assert!(read_records("id,x,y\n1,2,3\n".as_bytes()).is_err());
        assert!(matches!(
            read_records("bpo_id,interactions,likes\na,-1,5\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
