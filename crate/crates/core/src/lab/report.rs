//! Deterministic report bundle: CSV tables, per-program data series and a
//! plain-text summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::countest::{estimate_weighted, Estimate, PathWeight};

use super::stats::{correlate, correlate_size, group_by_bucket, strength};
use super::{AnalysisRow, TimeMetric};

/// File name to contents. Series files live under `series/`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Report {
    pub files: BTreeMap<String, String>,
}

impl Report {
    pub fn text(&self) -> &str {
        self.files
            .get("report.txt")
            .map(String::as_str)
            .unwrap_or("")
    }

    pub fn write_to(&self, dir: &Path) -> std::io::Result<()> {
        for (name, body) in &self.files {
            let path = dir.join(name);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, body)?;
        }
        Ok(())
    }
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn f6(x: f64) -> String {
    format!("{:.6}", x)
}

fn opt(x: Option<f64>) -> String {
    x.map(f6).unwrap_or_default()
}

pub fn write_rows_csv(rows: &[AnalysisRow]) -> String {
    csv_text(
        &[
            "program", "n", "input", "source", "path_len", "mems", "time_ms", "steps", "bucket",
        ],
        rows.iter()
            .map(|r| {
                vec![
                    r.program.clone(),
                    r.n.to_string(),
                    r.input.clone(),
                    r.source.to_string(),
                    r.path_len.to_string(),
                    r.mems.to_string(),
                    opt(r.time_ms),
                    r.steps.map(|s| s.to_string()).unwrap_or_default(),
                    r.bucket.label().to_string(),
                ]
            })
            .collect(),
    )
}

/// Per-path weights: `function,path,delta,pind`.
pub fn write_estimates_csv(estimates: &[(String, Estimate)]) -> String {
    let mut rows = Vec::new();
    for (f, e) in estimates {
        for p in &e.per_path {
            rows.push(vec![
                f.clone(),
                p.path_id.to_string(),
                p.delta.to_string(),
                p.pind.to_string(),
            ]);
        }
    }
    csv_text(&["function", "path", "delta", "pind"], rows)
}

pub fn read_estimates_csv(text: &str) -> Result<Vec<(String, Estimate)>, String> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers = rd.headers().map_err(|e| e.to_string())?.clone();
    if headers.iter().collect::<Vec<_>>() != ["function", "path", "delta", "pind"] {
        return Err("expected header `function,path,delta,pind`".into());
    }
    let mut grouped: Vec<(String, Vec<PathWeight>)> = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let bad = || format!("row {}: bad number", i + 2);
        let f = row.get(0).unwrap_or("").to_string();
        let w = PathWeight {
            path_id: row.get(1).unwrap_or("").parse().map_err(|_| bad())?,
            delta: row.get(2).unwrap_or("").parse().map_err(|_| bad())?,
            pind: row.get(3).unwrap_or("").parse().map_err(|_| bad())?,
        };
        match grouped.last_mut() {
            Some((g, ws)) if *g == f => ws.push(w),
            _ => grouped.push((f, vec![w])),
        }
    }
    grouped
        .into_iter()
        .map(|(f, ws)| {
            estimate_weighted(ws)
                .map(|e| (f.clone(), e))
                .map_err(|e| format!("{}: {}", f, e))
        })
        .collect()
}

/// Programs in order of first appearance.
fn programs(rows: &[AnalysisRow]) -> Vec<&str> {
    let mut out: Vec<&str> = Vec::new();
    for r in rows {
        if !out.contains(&r.program.as_str()) {
            out.push(&r.program);
        }
    }
    out
}

pub fn report(
    rows: &[AnalysisRow],
    estimates: &[(String, Estimate)],
    metric: TimeMetric,
) -> Report {
    let mut files = BTreeMap::new();
    let mut txt = String::new();
    let _ = writeln!(txt, "mems report");
    let _ = writeln!(txt, "rows: {}  time metric: {}", rows.len(), metric);

    files.insert("rows.csv".to_string(), write_rows_csv(rows));

    let _ = writeln!(txt, "\nPaths");
    let _ = writeln!(
        txt,
        "{:<12} {:>10} {:<16} {:>12} {:>12} {:>14}",
        "program", "row", "input", "len", "mems", metric
    );
    let progs = programs(rows);
    for p in &progs {
        for (i, r) in rows.iter().filter(|r| r.program == *p).enumerate() {
            let _ = writeln!(
                txt,
                "{:<12} {:>10} {:<16} {:>12} {:>12} {:>14}",
                p,
                format!("path_{}", i),
                r.input,
                r.path_len,
                r.mems,
                r.time(metric).map(f6).unwrap_or_else(|| "-".into())
            );
        }
    }

    let mut corr_rows = Vec::new();
    let _ = writeln!(txt, "\nCorrelation between mems and {}", metric);
    let _ = writeln!(
        txt,
        "{:<12} {:>6} {:>10} {:<12} {:>10}",
        "program", "rows", "r", "strength", "r(n)"
    );
    let all: Vec<&AnalysisRow> = rows.iter().collect();
    let groups: Vec<(String, Vec<&AnalysisRow>)> = progs
        .iter()
        .map(|p| {
            (
                p.to_string(),
                rows.iter().filter(|r| r.program == *p).collect(),
            )
        })
        .chain(std::iter::once(("(all)".to_string(), all)))
        .collect();
    for (name, group) in &groups {
        if group.is_empty() {
            continue;
        }
        let r = correlate(group, metric).ok();
        let rn = correlate_size(group, metric).ok();
        let label = r.map(strength).unwrap_or("n/a");
        let _ = writeln!(
            txt,
            "{:<12} {:>6} {:>10} {:<12} {:>10}",
            name,
            group.len(),
            r.map(f6).unwrap_or_else(|| "-".into()),
            label,
            rn.map(f6).unwrap_or_else(|| "-".into())
        );
        corr_rows.push(vec![
            name.clone(),
            group.len().to_string(),
            opt(r),
            label.to_string(),
            opt(rn),
        ]);
    }
    files.insert(
        "correlations.csv".to_string(),
        csv_text(
            &["program", "rows", "r_mems_time", "strength", "r_n_time"],
            corr_rows,
        ),
    );

    let mut bucket_rows = Vec::new();
    let _ = writeln!(txt, "\nBuckets by mems");
    let _ = writeln!(
        txt,
        "{:<10} {:>6} {:>9} {:>14} {:>14} {:>14}",
        "bucket", "rows", "programs", "mean len", "mean mems", "mean time"
    );
    for (b, group) in group_by_bucket(rows) {
        let n = group.len() as f64;
        let mean = |f: &dyn Fn(&AnalysisRow) -> f64| group.iter().map(|r| f(r)).sum::<f64>() / n;
        let times: Vec<f64> = group.iter().filter_map(|r| r.time(metric)).collect();
        let mean_time = (times.len() == group.len()).then(|| times.iter().sum::<f64>() / n);
        let mut names: Vec<&str> = group.iter().map(|r| r.program.as_str()).collect();
        names.dedup();
        names.sort_unstable();
        names.dedup();
        let (ml, mm) = (mean(&|r| r.path_len as f64), mean(&|r| r.mems as f64));
        let _ = writeln!(
            txt,
            "{:<10} {:>6} {:>9} {:>14} {:>14} {:>14}",
            b.label(),
            group.len(),
            names.len(),
            f6(ml),
            f6(mm),
            mean_time.map(f6).unwrap_or_else(|| "-".into())
        );
        bucket_rows.push(vec![
            b.label().to_string(),
            group.len().to_string(),
            names.join(" "),
            f6(ml),
            f6(mm),
            opt(mean_time),
        ]);
    }
    files.insert(
        "buckets.csv".to_string(),
        csv_text(
            &[
                "bucket",
                "rows",
                "programs",
                "mean_path_len",
                "mean_mems",
                "mean_time",
            ],
            bucket_rows,
        ),
    );

    for p in &progs {
        let series = rows
            .iter()
            .filter(|r| r.program == *p)
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.path_len.to_string(),
                    r.mems.to_string(),
                    opt(r.time(metric)),
                ]
            })
            .collect();
        files.insert(
            format!("series/{}.csv", p),
            csv_text(&["n", "path_len", "mems", "time"], series),
        );
    }

    if !estimates.is_empty() {
        let _ = writeln!(txt, "\nEstimated mems");
        let mut est_rows = Vec::new();
        for (f, e) in estimates {
            let _ = writeln!(
                txt,
                "{:<12} {} over {} paths",
                f,
                e.render(),
                e.per_path.len()
            );
            est_rows.push(vec![
                f.clone(),
                e.per_path.len().to_string(),
                e.total_weight.to_string(),
                e.weighted_sum.to_string(),
                e.fraction_text(),
                e.decimal(6),
            ]);
        }
        files.insert(
            "estimates.csv".to_string(),
            csv_text(
                &[
                    "function",
                    "paths",
                    "total_weight",
                    "weighted_sum",
                    "fraction",
                    "value",
                ],
                est_rows,
            ),
        );
    }

    files.insert("report.txt".to_string(), txt);
    Report { files }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::countest::estimate_performance;
    use crate::dynexec::Source;
    use crate::lab::Bucket;

    fn row(program: &str, n: i64, mems: u64, steps: u64) -> AnalysisRow {
        AnalysisRow {
            program: program.into(),
            n,
            input: n.to_string(),
            source: Source::Interpreter,
            path_len: 2 * n as u64,
            mems,
            time_ms: None,
            steps: Some(steps),
            bucket: Bucket::of(mems),
        }
    }

    #[test]
    fn empty_rows_give_header_only_csv() {
        let r = report(&[], &[], TimeMetric::Steps);
        assert_eq!(
            r.files["rows.csv"],
            "program,n,input,source,path_len,mems,time_ms,steps,bucket\n"
        );
        assert_eq!(
            r.files["buckets.csv"],
            "bucket,rows,programs,mean_path_len,mean_mems,mean_time\n"
        );
        assert!(!r.files.contains_key("estimates.csv"));
    }

    #[test]
    fn golden_bundle() {
        let rows = vec![
            row("a", 1, 10, 20),
            row("a", 2, 20, 40),
            row("b", 3, 5000, 7),
        ];
        let est = vec![(
            "f".to_string(),
            estimate_performance(&[(60, 3), (20, 2)]).unwrap(),
        )];
        let r = report(&rows, &est, TimeMetric::Steps);
        assert_eq!(
            r.files["correlations.csv"],
            "program,rows,r_mems_time,strength,r_n_time\n\
             a,2,1.000000,Very strong,1.000000\n\
             b,1,,n/a,\n\
             (all),3,-0.797777,Strong,-0.391018\n"
        );
        assert_eq!(
            r.files["buckets.csv"],
            "bucket,rows,programs,mean_path_len,mean_mems,mean_time\n\
             <1K,2,a,3.000000,15.000000,30.000000\n\
             1K-10K,1,b,6.000000,5000.000000,7.000000\n"
        );
        assert_eq!(
            r.files["series/a.csv"],
            "n,path_len,mems,time\n1,2,10,20.000000\n2,4,20,40.000000\n"
        );
        assert_eq!(
            r.files["estimates.csv"],
            "function,paths,total_weight,weighted_sum,fraction,value\nf,2,80,220,220/80,2.75\n"
        );
        assert!(r.text().contains("f            220/80 = 2.75 over 2 paths"));
        assert_eq!(report(&rows, &est, TimeMetric::Steps), r);
    }

    #[test]
    fn estimates_round_trip() {
        let est = vec![
            (
                "f".to_string(),
                estimate_performance(&[(60, 3), (20, 2)]).unwrap(),
            ),
            ("g".to_string(), estimate_performance(&[(1, 7)]).unwrap()),
        ];
        let text = write_estimates_csv(&est);
        assert_eq!(read_estimates_csv(&text).unwrap(), est);
    }
}
