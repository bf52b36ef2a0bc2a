//! Solve output in text and JSON form, built from a solver result's
//! metadata.

use std::fmt::Write as _;

use serde::Serialize;

use ap3::SolveResult;

#[derive(Serialize)]
pub struct SolveReport {
    pub algorithm: String,
    pub instance: String,
    pub n: usize,
    pub params: Params,
    pub cost: i64,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_cost: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub muscle: Option<MuscleSummary>,
    /// Wall-clock timings; the only fields that vary between identical runs.
    pub seconds: Seconds,
}

#[derive(Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Serialize)]
pub struct MuscleSummary {
    pub triples: usize,
    pub reduction_ratio: f64,
}

#[derive(Serialize)]
pub struct Seconds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<f64>,
    pub total: f64,
}

impl SolveReport {
    pub fn build(algorithm: &str, instance: &str, n: usize, result: &SolveResult) -> Self {
        let meta = |key: &str| result.metadata.get(key);
        let parse_usize = |key: &str| meta(key).and_then(|v| v.parse::<usize>().ok());
        let parse_f64 = |key: &str| meta(key).and_then(|v| v.parse::<f64>().ok());

        let muscle = parse_usize("muscle_triples").map(|triples| MuscleSummary {
            triples,
            reduction_ratio: parse_f64("muscle_ratio").unwrap_or(0.0),
        });

        Self {
            algorithm: algorithm.to_string(),
            instance: instance.to_string(),
            n,
            params: Params {
                k: parse_usize("k"),
                width: parse_usize("width"),
                seed: meta("seed").and_then(|v| v.parse().ok()),
            },
            cost: result.cost,
            p: result.assignment.p().to_vec(),
            q: result.assignment.q().to_vec(),
            upper_cost: meta("upper_cost").and_then(|v| v.parse().ok()),
            muscle,
            seconds: Seconds {
                sampling: parse_f64("sampling_secs"),
                search: parse_f64("search_secs"),
                total: result.elapsed.as_secs_f64(),
            },
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "algorithm: {}", self.algorithm);
        let _ = writeln!(out, "instance: {}", self.instance);
        let _ = writeln!(out, "n: {}", self.n);
        if let Some(k) = self.params.k {
            let _ = writeln!(out, "k: {k}");
        }
        if let Some(w) = self.params.width {
            let _ = writeln!(out, "width: {w}");
        }
        if let Some(s) = self.params.seed {
            let _ = writeln!(out, "seed: {s}");
        }
        let _ = writeln!(out, "cost: {}", self.cost);
        let _ = writeln!(out, "p: {}", join(&self.p));
        let _ = writeln!(out, "q: {}", join(&self.q));
        if let Some(u) = self.upper_cost {
            let _ = writeln!(out, "upper_cost: {u}");
        }
        if let Some(m) = &self.muscle {
            let _ = writeln!(
                out,
                "muscle: {} triples ({:.4} of the cube)",
                m.triples, m.reduction_ratio
            );
        }
        if let Some(s) = self.seconds.sampling {
            let _ = writeln!(out, "sampling_seconds: {s:.3}");
        }
        if let Some(s) = self.seconds.search {
            let _ = writeln!(out, "search_seconds: {s:.3}");
        }
        let _ = writeln!(out, "total_seconds: {:.3}", self.seconds.total);
        out
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
