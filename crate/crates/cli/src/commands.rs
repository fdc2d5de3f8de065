use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hyperfit::data::{
    convert_files, generate_synthetic, load_dataset, load_predictions, render_summary_table, summarize, write_dataset,
    write_predictions, ConvertOptions, Dataset, ItemsLayout, Supervision, SyntheticConfig,
};
use hyperfit::eval::{
    compare_methods, compare_reports, derive_seed, make_folds, mean_absolute_error, predict, render_comparison,
    render_curve_report, render_eval_report, run_cross_validation, run_cross_validation_with_plan,
    run_training_curve, Aggregation, Comparison, CurveConfig, CvConfig, EvalReport, FoldMode, FoldPlan, Method,
    UserComparison,
};
use hyperfit::solver::export_milp;
use hyperfit::{distance, Budget, Error, RatingScale, Result, SolverConfig, SolverKind, UserModel, Variant};
use serde_json::{json, Value};

use crate::args::*;

/// Attribute count above which the default time budget doubles.
const LARGE_SPACE: usize = 200;

pub fn run(cli: &Cli) -> Result<String> {
    let seed = cli.seed;
    let (value, text) = match &cli.command {
        Command::Fit(a) => fit(a, seed)?,
        Command::Predict(a) => predict_cmd(a, seed)?,
        Command::Evaluate(a) => evaluate(a, seed)?,
        Command::Curve(a) => curve(a, seed)?,
        Command::Stats(a) => stats(a, seed)?,
        Command::Synth(a) => synth(a, seed)?,
        Command::Summarize(a) => summarize_cmd(a, seed)?,
        Command::ExportMilp(a) => export(a, seed, cli.format)?,
        Command::Convert(a) => convert_cmd(a, seed)?,
        Command::Folds(a) => folds(a, seed)?,
    };
    Ok(match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("json output");
            s.push('\n');
            s
        }
        Format::Text => text,
    })
}

type Output = (Value, String);

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn variant(v: VariantArg) -> Variant {
    match v {
        VariantArg::Algo1 => Variant::Binary,
        VariantArg::Algo2 => Variant::Ternary,
    }
}

fn fold_mode(m: FoldModeArg) -> FoldMode {
    match m {
        FoldModeArg::Contiguous => FoldMode::Contiguous,
        FoldModeArg::Random => FoldMode::Random,
    }
}

fn solver_config(args: &SolverArgs, n: usize, seed: u64) -> Result<SolverConfig> {
    let budgeted = args.time_ms.is_some() || args.iterations.is_some();
    let kind = match args.solver {
        SolverArg::Exact | SolverArg::Bnb => SolverKind::BranchAndBound,
        SolverArg::Local => SolverKind::LocalSearch,
        SolverArg::Brute => SolverKind::BruteForce,
    };
    if matches!(args.solver, SolverArg::Exact | SolverArg::Brute) && budgeted {
        return Err(Error::Domain("the exact and brute solvers run without a budget".into()));
    }
    if args.patience.is_some() && args.solver != SolverArg::Local {
        return Err(Error::Domain("--patience applies to the local solver only".into()));
    }
    let budget = match (args.solver, args.iterations, args.time_ms) {
        (SolverArg::Exact | SolverArg::Brute, _, _) => Budget::Unlimited,
        (_, Some(k), _) => Budget::Iterations(k),
        (_, None, Some(ms)) => Budget::millis(ms),
        (_, None, None) => Budget::millis(if n > LARGE_SPACE { 2000 } else { 1000 }),
    };
    let mut config = SolverConfig::new(kind, budget, seed);
    config.patience = args.patience;
    Ok(config)
}

fn fit(a: &FitArgs, seed: u64) -> Result<Output> {
    let data = load_dataset(&a.data)?;
    let v = variant(a.variant);
    let solver = solver_config(&a.solver, data.dim(), seed)?;
    let result = solver.solve(&data.full_instance()?, v)?;
    let value = json!({
        "command": "fit",
        "seed": seed,
        "user_id": data.user_id(),
        "algorithm": v.algorithm(),
        "solver": to_value(&solver),
        "rated_items": data.len(),
        "model": to_value(&result.model),
        "code": result.model.code(),
        "objective": result.objective.to_string(),
        "status": to_value(&result.status),
        "iterations": result.iterations,
    });
    let mut text = String::new();
    writeln!(text, "user       {}", data.user_id()).unwrap();
    writeln!(text, "algorithm  {}", v.algorithm()).unwrap();
    writeln!(text, "model      {}", result.model.code()).unwrap();
    writeln!(text, "objective  {}", result.objective).unwrap();
    writeln!(text, "status     {}", value["status"].as_str().unwrap_or("")).unwrap();
    writeln!(text, "iterations {}", result.iterations).unwrap();
    writeln!(text, "elapsed    {:.3} s", result.elapsed.as_secs_f64()).unwrap();
    writeln!(text, "seed       {seed}").unwrap();
    Ok((value, text))
}

fn predict_cmd(a: &PredictArgs, seed: u64) -> Result<Output> {
    let data = load_dataset(&a.data)?;
    let model = UserModel::from_code(variant(a.variant), &a.model)?;
    let mut rows = Vec::with_capacity(data.len());
    let mut predicted = Vec::with_capacity(data.len());
    let mut text = format!("{:<16} {:>8} {:>9} {:>6}\n", "item", "distance", "predicted", "actual");
    for (item, rating) in data.items().iter().zip(data.ratings()) {
        let level = predict(&model, item, data.space())?;
        let d = distance(item, &model)?;
        writeln!(text, "{:<16} {:>8} {:>9} {:>6}", item.id, d, level, rating.level).unwrap();
        rows.push(json!({
            "item_id": item.id,
            "distance": d,
            "predicted_level": level,
            "actual_level": rating.level,
        }));
        predicted.push(level);
    }
    let actual: Vec<usize> = data.ratings().iter().map(|r| r.level).collect();
    let mae = mean_absolute_error(&predicted, &actual, data.space().scale())?;
    writeln!(text, "mae {:.4} ({:.4} raw)", mae.levels, mae.raw).unwrap();
    let value = json!({
        "command": "predict",
        "seed": seed,
        "user_id": data.user_id(),
        "algorithm": model.variant().algorithm(),
        "code": model.code(),
        "predictions": rows,
        "mae": to_value(&mae),
    });
    Ok((value, text))
}

fn load_all(paths: &[impl AsRef<Path>]) -> Result<Vec<Dataset>> {
    paths.iter().map(load_dataset).collect()
}

fn evaluate(a: &EvaluateArgs, seed: u64) -> Result<Output> {
    let datasets = load_all(&a.data)?;
    if a.plan.is_some() && datasets.len() > 1 {
        return Err(Error::Domain("--plan needs exactly one --data".into()));
    }
    let method = match a.method {
        MethodArg::Algo1 => Method::Algo(Variant::Binary),
        MethodArg::Algo2 => Method::Algo(Variant::Ternary),
        MethodArg::Baseline => {
            let path = a.predictions.as_ref().expect("clap requires --predictions");
            let levels = datasets[0].space().levels();
            Method::Baseline {
                label: a.label.clone().expect("clap requires --label"),
                rows: load_predictions(path, levels)?,
            }
        }
    };
    let mut reports: Vec<EvalReport> = Vec::with_capacity(datasets.len());
    let mut predictions = Vec::new();
    for data in &datasets {
        let solver = solver_config(&a.solver, data.dim(), seed)?;
        let (report, rows) = match &a.plan {
            Some(path) => {
                let plan = FoldPlan::load(path)?;
                run_cross_validation_with_plan(data, &plan, &method, &solver)?
            }
            None => {
                let config = CvConfig { k: a.k, seed, fold_mode: fold_mode(a.fold_mode), solver };
                run_cross_validation(data, &method, &config)?
            }
        };
        reports.push(report);
        predictions.extend(rows);
    }
    if let Some(out) = &a.predictions_out {
        write_predictions(out, &predictions)?;
    }
    let mean = reports.iter().map(|r| r.mean_error).sum::<f64>() / reports.len() as f64;
    let text = reports.iter().map(render_eval_report).collect::<Vec<_>>().join("\n")
        + &format!("\nusers {}  mean mae {mean:.4}  seed {seed}\n", reports.len());
    let value = json!({
        "command": "evaluate",
        "seed": seed,
        "method": method.label(),
        "reports": to_value(&reports),
        "mean_error": mean,
    });
    Ok((value, text))
}

fn curve(a: &CurveArgs, seed: u64) -> Result<Output> {
    let datasets = if a.data.is_empty() {
        (0..a.users)
            .map(|u| {
                let mut config = SyntheticConfig::new(a.n, a.items, derive_seed(seed, "synthetic", u));
                config.user_id = format!("synthetic-{}", u + 1);
                config.s = a.stars;
                config.supervision = Supervision::StarRounded;
                Ok(generate_synthetic(&config)?.0)
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        load_all(&a.data)?
    };
    if datasets.is_empty() {
        return Err(Error::Domain("no users to evaluate".into()));
    }
    let sizes = match (&a.sizes, a.lmax) {
        (Some(s), _) => s.clone(),
        (None, Some(l)) => (1..=l).collect(),
        (None, None) => unreachable!("clap requires --lmax or --sizes"),
    };
    let n = datasets.iter().map(|d| d.dim()).max().unwrap_or(0);
    let config = CurveConfig {
        k: a.k,
        seed,
        fold_mode: fold_mode(a.fold_mode),
        solver: solver_config(&a.solver, n, seed)?,
        sizes,
        nested: !a.independent,
    };
    let report = run_training_curve(&datasets, variant(a.variant), &config)?;
    if let Some(path) = &a.csv {
        fs::write(path, report.to_csv()).map_err(|e| Error::Io { path: path.clone(), source: e })?;
    }
    let value = json!({
        "command": "curve",
        "seed": seed,
        "report": to_value(&report),
    });
    Ok((value, render_curve_report(&report)))
}

fn read_reports(path: &Path) -> Result<Vec<EvalReport>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
    let parse = |msg: String| Error::Parse { context: path.display().to_string(), message: msg };
    let value: Value = serde_json::from_str(&text).map_err(|e| parse(e.to_string()))?;
    let reports = value.get("reports").cloned().ok_or_else(|| parse("no `reports` field".into()))?;
    serde_json::from_value(reports).map_err(|e| parse(e.to_string()))
}

fn stats(a: &StatsArgs, seed: u64) -> Result<Output> {
    let aggregation = match a.aggregation {
        AggregationArg::Pooled => Aggregation::Pooled,
        AggregationArg::PerUser => Aggregation::PerUser,
    };
    let comparison = match (&a.a, &a.b, &a.a_errors, &a.b_errors) {
        (Some(pa), Some(pb), None, None) => {
            compare_reports(&read_reports(pa)?, &read_reports(pb)?, a.alpha, aggregation)?
        }
        (None, None, Some(ea), Some(eb)) => Comparison {
            method_a: "a".into(),
            method_b: "b".into(),
            aggregation: Aggregation::Pooled,
            alpha: a.alpha,
            tests: vec![UserComparison { user_id: None, result: compare_methods(ea, eb, a.alpha)? }],
        },
        _ => return Err(Error::Domain("give either --a and --b or --a-errors and --b-errors".into())),
    };
    let value = json!({
        "command": "stats",
        "seed": seed,
        "comparison": to_value(&comparison),
    });
    Ok((value, render_comparison(&comparison)))
}

fn synth(a: &SynthArgs, seed: u64) -> Result<Output> {
    let mut config = SyntheticConfig::new(a.n, a.items, seed);
    config.s = a.stars;
    config.variant = variant(a.variant);
    config.supervision = match a.supervision {
        SupervisionArg::DistanceExact => Supervision::DistanceExact,
        SupervisionArg::StarRounded => Supervision::StarRounded,
    };
    config.noise = a.noise;
    if let Some(u) = &a.user_id {
        config.user_id = u.clone();
    }
    let (data, planted) = generate_synthetic(&config)?;
    write_dataset(&a.out, &data)?;
    let value = json!({
        "command": "synth",
        "seed": seed,
        "out": a.out.display().to_string(),
        "user_id": data.user_id(),
        "config": to_value(&config),
        "planted": to_value(&planted),
        "planted_code": planted.code(),
    });
    let text = format!(
        "wrote {} ({} items, n = {})\nplanted {}\nseed {seed}\n",
        a.out.display(),
        data.len(),
        data.dim(),
        planted.code()
    );
    Ok((value, text))
}

fn summarize_cmd(a: &SummarizeArgs, seed: u64) -> Result<Output> {
    let datasets = load_all(&a.data)?;
    let summaries = datasets.iter().map(summarize).collect::<Result<Vec<_>>>()?;
    let value = json!({
        "command": "summarize",
        "seed": seed,
        "summaries": to_value(&summaries),
    });
    Ok((value, render_summary_table(&summaries)))
}

fn export(a: &ExportArgs, seed: u64, format: Format) -> Result<Output> {
    let data = load_dataset(&a.data)?;
    let v = variant(a.variant);
    let milp = export_milp(&data.full_instance()?, v)?;
    let text = match &a.out {
        Some(path) => {
            fs::write(path, &milp.text).map_err(|e| Error::Io { path: path.clone(), source: e })?;
            format!(
                "wrote {}: {} binary, {} continuous, {} constraints\n",
                path.display(),
                milp.summary.binary_vars,
                milp.summary.continuous_vars,
                milp.summary.constraints
            )
        }
        None if format == Format::Text => milp.text.clone(),
        None => String::new(),
    };
    let value = json!({
        "command": "export-milp",
        "seed": seed,
        "algorithm": v.algorithm(),
        "out": a.out.as_ref().map(|p| p.display().to_string()),
        "summary": to_value(&milp.summary),
        "lp": if a.out.is_none() { Value::String(milp.text) } else { Value::Null },
    });
    Ok((value, text))
}

fn parse_scale(s: &str) -> Result<RatingScale> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("half") {
        return Ok(RatingScale::half_stars());
    }
    if !s.contains(',') {
        let stars = s.parse::<usize>().map_err(|e| Error::Parse { context: "--scale".into(), message: e.to_string() })?;
        return RatingScale::whole_stars(stars);
    }
    let levels = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Parse { context: "--scale".into(), message: e.to_string() })?;
    RatingScale::new(levels)
}

fn convert_cmd(a: &ConvertArgs, seed: u64) -> Result<Output> {
    let options = ConvertOptions {
        user: a.user.clone(),
        layout: match a.layout {
            LayoutArg::Wide => ItemsLayout::Wide,
            LayoutArg::Long => ItemsLayout::Long,
        },
        cutoff: a.cutoff,
        scale: parse_scale(&a.scale)?,
        item_column: a.item_column.clone(),
        user_column: a.user_column.clone(),
        rating_column: a.rating_column.clone(),
        attribute_column: a.attribute_column.clone(),
        value_column: a.value_column.clone(),
        keep_empty_attributes: a.keep_empty,
    };
    let data = convert_files(&a.items, &a.ratings, &options)?;
    write_dataset(&a.out, &data)?;
    let value = json!({
        "command": "convert",
        "seed": seed,
        "out": a.out.display().to_string(),
        "user_id": data.user_id(),
        "attributes": data.dim(),
        "items": data.len(),
    });
    let text = format!(
        "wrote {}: user {}, {} items, {} attributes\n",
        a.out.display(),
        data.user_id(),
        data.len(),
        data.dim()
    );
    Ok((value, text))
}

fn folds(a: &FoldsArgs, seed: u64) -> Result<Output> {
    let data = load_dataset(&a.data)?;
    let plan = make_folds(&data, a.k, seed, fold_mode(a.fold_mode))?;
    plan.write(&a.out)?;
    let sizes = plan.fold_sizes();
    let value = json!({
        "command": "folds",
        "seed": seed,
        "out": a.out.display().to_string(),
        "user_id": data.user_id(),
        "k": plan.k,
        "fold_mode": to_value(&plan.mode),
        "fold_sizes": sizes,
    });
    let sizes: Vec<String> = plan.fold_sizes().iter().map(|s| s.to_string()).collect();
    let text = format!("wrote {}: {} folds of sizes {}\nseed {seed}\n", a.out.display(), plan.k, sizes.join(" "));
    Ok((value, text))
}
