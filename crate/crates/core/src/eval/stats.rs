//! Two-sample comparison of per-fold errors: an F-test for equal variances
//! decides between pooled Student's t and Welch's t.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use super::cv::EvalReport;
use super::mean;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    pub n_a: usize,
    pub n_b: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    /// `var_a / var_b`; `None` when undefined or infinite.
    pub f_statistic: Option<f64>,
    pub f_p_value: Option<f64>,
    /// `None` when both samples are constant with different means.
    pub t_statistic: Option<f64>,
    pub t_df: Option<f64>,
    pub t_p_value: f64,
    pub welch_used: bool,
    pub alpha: f64,
    pub significant: bool,
}

fn sample_variance(xs: &[f64], m: f64) -> f64 {
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Two-sided F-test p-value for `f` with `(d1, d2)` degrees of freedom.
pub(crate) fn f_test(f: f64, d1: f64, d2: f64) -> f64 {
    let dist = FisherSnedecor::new(d1, d2).expect("positive degrees of freedom");
    (2.0 * dist.cdf(f).min(dist.sf(f))).min(1.0)
}

/// Two-sided t-test p-value.
pub(crate) fn t_test(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

/// Pooled two-sample t statistic and its degrees of freedom.
pub(crate) fn pooled_t(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let sp2 = ((na - 1.0) * sample_variance(a, ma) + (nb - 1.0) * sample_variance(b, mb)) / (na + nb - 2.0);
    ((ma - mb) / (sp2 * (1.0 / na + 1.0 / nb)).sqrt(), na + nb - 2.0)
}

/// Welch's t statistic and the Welch-Satterthwaite degrees of freedom.
pub(crate) fn welch_t(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let (qa, qb) = (sample_variance(a, ma) / na, sample_variance(b, mb) / nb);
    let df = (qa + qb).powi(2) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    ((ma - mb) / (qa + qb).sqrt(), df)
}

/// Unpaired comparison of two error samples at level `alpha`.
///
/// When both samples are constant the t statistic is degenerate: equal
/// means give `t = 0, p = 1`; different means give no statistic and `p = 0`.
pub fn compare_methods(a: &[f64], b: &[f64], alpha: f64) -> Result<SignificanceResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::domain(format!(
            "each sample needs at least 2 values, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha {alpha} outside (0, 1)")));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::domain("samples must be finite"));
    }
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (sample_variance(a, ma), sample_variance(b, mb));
    let (d1, d2) = ((a.len() - 1) as f64, (b.len() - 1) as f64);

    let mut result = SignificanceResult {
        n_a: a.len(),
        n_b: b.len(),
        mean_a: ma,
        mean_b: mb,
        var_a: va,
        var_b: vb,
        f_statistic: None,
        f_p_value: None,
        t_statistic: None,
        t_df: None,
        t_p_value: 0.0,
        welch_used: false,
        alpha,
        significant: false,
    };

    if va == 0.0 && vb == 0.0 {
        if ma == mb {
            result.t_statistic = Some(0.0);
            result.t_p_value = 1.0;
        } else {
            result.significant = true;
        }
        return Ok(result);
    }

    // one constant sample: the ratio is 0 or infinite and equality is rejected
    let f_p = if vb == 0.0 {
        0.0
    } else {
        let f = va / vb;
        result.f_statistic = Some(f);
        f_test(f, d1, d2)
    };
    result.f_p_value = Some(f_p);
    result.welch_used = f_p < alpha;
    let (t, df) = if result.welch_used { welch_t(a, b) } else { pooled_t(a, b) };
    result.t_statistic = Some(t);
    result.t_df = Some(df);
    result.t_p_value = t_test(t, df);
    result.significant = result.t_p_value < alpha;
    Ok(result)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    /// All folds of all users form one sample per method.
    #[default]
    Pooled,
    /// One test per user.
    PerUser,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserComparison {
    /// `None` for the pooled test.
    pub user_id: Option<String>,
    pub result: SignificanceResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub method_a: String,
    pub method_b: String,
    pub aggregation: Aggregation,
    pub alpha: f64,
    pub tests: Vec<UserComparison>,
}

/// Compares two methods evaluated on the same users. Reports are matched by
/// user id.
pub fn compare_reports(
    a: &[EvalReport],
    b: &[EvalReport],
    alpha: f64,
    aggregation: Aggregation,
) -> Result<Comparison> {
    if a.is_empty() {
        return Err(Error::domain("no reports to compare"));
    }
    let label = |rs: &[EvalReport]| -> Result<String> {
        let first = &rs[0].method;
        if rs.iter().any(|r| &r.method != first) {
            return Err(Error::domain("reports on one side mix several methods"));
        }
        Ok(first.clone())
    };
    let mut pairs = Vec::with_capacity(a.len());
    for ra in a {
        let rb = b.iter().find(|r| r.user_id == ra.user_id).ok_or_else(|| {
            Error::Coverage(format!("user {:?} has no report for the second method", ra.user_id))
        })?;
        pairs.push((ra, rb));
    }
    if b.len() != a.len() {
        return Err(Error::Coverage(format!("{} reports against {}", a.len(), b.len())));
    }
    let tests = match aggregation {
        Aggregation::Pooled => {
            let ea: Vec<f64> = pairs.iter().flat_map(|(ra, _)| ra.per_fold_errors()).collect();
            let eb: Vec<f64> = pairs.iter().flat_map(|(_, rb)| rb.per_fold_errors()).collect();
            vec![UserComparison { user_id: None, result: compare_methods(&ea, &eb, alpha)? }]
        }
        Aggregation::PerUser => pairs
            .iter()
            .map(|(ra, rb)| {
                Ok(UserComparison {
                    user_id: Some(ra.user_id.clone()),
                    result: compare_methods(&ra.per_fold_errors(), &rb.per_fold_errors(), alpha)?,
                })
            })
            .collect::<Result<_>>()?,
    };
    Ok(Comparison { method_a: label(a)?, method_b: label(b)?, aggregation, alpha, tests })
}
