//! Aligned-column text renderings of the harness reports.

use std::fmt::Write;

use super::curve::CurveReport;
use super::cv::EvalReport;
use super::stats::{Comparison, SignificanceResult};
use crate::solver::Status;

fn status_name(s: Option<Status>) -> &'static str {
    match s {
        Some(Status::Optimal) => "optimal",
        Some(Status::TimeLimitBest) => "time_limit_best",
        Some(Status::HeuristicBest) => "heuristic_best",
        None => "-",
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

pub fn render_eval_report(r: &EvalReport) -> String {
    let mut out = String::new();
    writeln!(out, "user {}  method {}  k {}  seed {}", r.user_id, r.method, r.k, r.seed).unwrap();
    writeln!(
        out,
        "{:>4} {:>6} {:>5} {:>8} {:>8} {:>12} {:>16}",
        "fold", "train", "test", "mae", "mae_raw", "objective", "status"
    )
    .unwrap();
    for f in &r.folds {
        writeln!(
            out,
            "{:>4} {:>6} {:>5} {:>8.4} {:>8.4} {:>12} {:>16}",
            f.fold,
            f.train_size,
            f.test_size,
            f.error,
            f.error_raw,
            f.training_objective.as_deref().unwrap_or("-"),
            status_name(f.status)
        )
        .unwrap();
    }
    writeln!(out, "mean {:>20.4} {:>8.4}", r.mean_error, r.mean_error_raw).unwrap();
    out
}

pub fn render_curve_report(r: &CurveReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "method {}  users {}  k {}  seed {}  nested {}",
        r.method,
        r.users.len(),
        r.k,
        r.seed,
        r.nested
    )
    .unwrap();
    writeln!(out, "{:>6} {:>8} {:>8}", "size", "mae", "mae_raw").unwrap();
    for p in &r.points {
        writeln!(out, "{:>6} {:>8.4} {:>8.4}", p.size, p.mean_error, p.mean_error_raw).unwrap();
    }
    out
}

pub fn render_significance(r: &SignificanceResult) -> String {
    let mut out = String::new();
    writeln!(out, "{:<14} {:>12} {:>12}", "", "a", "b").unwrap();
    writeln!(out, "{:<14} {:>12} {:>12}", "n", r.n_a, r.n_b).unwrap();
    writeln!(out, "{:<14} {:>12.6} {:>12.6}", "mean", r.mean_a, r.mean_b).unwrap();
    writeln!(out, "{:<14} {:>12.6} {:>12.6}", "variance", r.var_a, r.var_b).unwrap();
    writeln!(out, "{:<14} {:>12}", "F", opt(r.f_statistic)).unwrap();
    writeln!(out, "{:<14} {:>12}", "F p-value", opt(r.f_p_value)).unwrap();
    let test = if r.welch_used { "Welch t" } else { "pooled t" };
    writeln!(out, "{:<14} {:>12}", test, opt(r.t_statistic)).unwrap();
    writeln!(out, "{:<14} {:>12}", "df", opt(r.t_df)).unwrap();
    writeln!(out, "{:<14} {:>12.6}", "t p-value", r.t_p_value).unwrap();
    writeln!(out, "{:<14} {:>12}", format!("alpha {}", r.alpha), if r.significant { "significant" } else { "not significant" })
        .unwrap();
    out
}

pub fn render_comparison(c: &Comparison) -> String {
    let mut out = String::new();
    writeln!(out, "{} vs {}  alpha {}", c.method_a, c.method_b, c.alpha).unwrap();
    writeln!(
        out,
        "{:<12} {:>8} {:>8} {:>10} {:>10} {:>10} {:>6} {:>4}",
        "user", "mean_a", "mean_b", "F p", "t", "t p", "welch", "sig"
    )
    .unwrap();
    for t in &c.tests {
        let r = &t.result;
        writeln!(
            out,
            "{:<12} {:>8.4} {:>8.4} {:>10} {:>10} {:>10.6} {:>6} {:>4}",
            t.user_id.as_deref().unwrap_or("(pooled)"),
            r.mean_a,
            r.mean_b,
            opt(r.f_p_value),
            opt(r.t_statistic),
            r.t_p_value,
            if r.welch_used { "yes" } else { "no" },
            if r.significant { "yes" } else { "no" }
        )
        .unwrap();
    }
    out
}
