//! Subcommand implementations. Each builds a [`RunReport`]; nothing here
//! prints.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use conformal_core::conformal::{
    candidate_pvalues, conformal_regress_exact, ClassificationResult, ClassificationTask, Comparison,
    RegressionTask,
};
use conformal_core::nonconformity::{classification_measure, regression_measure};
use conformal_core::ocm::{fisher_prediction, GaussianModel, GaussianPrediction};
use conformal_core::validity::{
    betting_audit, online_eval, permutation_experiment, ConformalClassifier, ConformalRegressor,
    GaussianPredictor, LedgerAggregates, RegionPredictor, RegionSize, StepOutcome, ValidityLedger,
};
use conformal_core::{Example, Label, PredictionRegion, SignificanceLevel};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::args::{
    BetArgs, Command, DataArgs, EvaluateArgs, LevelArgs, OldArgs, PermuteArgs, PredictArgs, ReplicateArgs,
    Study,
};
use crate::dataset::{ingest, Dataset, Grid, Kind, Schema};
use crate::error::{CliError, CliResult};
use crate::fixtures;
use crate::report::{Record, RunReport, StepRecord};

const WARM_UP_NOTE: &str =
    "warm-up steps issue the full label space and are excluded from error rates";

/// Runs one subcommand; `echo` is the command line to record.
pub fn run(command: &Command, echo: &str) -> CliResult<RunReport> {
    let mut report = RunReport::new(echo);
    match command {
        Command::PredictClass(a) => predict_class(a, &mut report)?,
        Command::PredictReg(a) => predict_reg(a, &mut report)?,
        Command::PredictOld(a) => predict_old(a, &mut report)?,
        Command::Fisher(a) => fisher(a, &mut report)?,
        Command::Gaussian(a) => gaussian(a, &mut report)?,
        Command::Evaluate(a) => evaluate(a, &mut report)?,
        Command::Permute(a) => permute(a, &mut report)?,
        Command::BetAudit(a) => bet_audit(a, &mut report)?,
        Command::Replicate(a) => replicate(a, &mut report)?,
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Inputs

fn schema(label_column: &Option<String>, features: &Option<Vec<String>>) -> Schema {
    Schema {
        label_column: label_column.clone(),
        features: features.clone(),
    }
}

fn load_path(path: &Path, schema: &Schema) -> CliResult<Dataset> {
    if !path.exists() {
        if let Some(d) = fixtures::load_bundled(path, schema) {
            return d;
        }
    }
    ingest(path, schema)
}

fn load(data: &DataArgs) -> CliResult<Dataset> {
    load_path(&data.data, &schema(&data.label_column, &data.features))
}

fn levels(raw: &[f64]) -> CliResult<Vec<SignificanceLevel>> {
    raw.iter()
        .map(|&e| SignificanceLevel::new(e).map_err(CliError::from))
        .collect()
}

fn grid(levels: &LevelArgs, dataset: &Dataset) -> CliResult<Option<Grid>> {
    match levels.grid {
        Some(step) if step > 0.0 && step.is_finite() => Ok(Some(Grid {
            step,
            origin: levels.grid_origin,
        })),
        Some(step) => Err(CliError::Input(format!("--grid must be positive, got {step}"))),
        None => Ok(dataset.grid),
    }
}

fn require_kind(dataset: &Dataset, kind: Kind, command: &str) -> CliResult<()> {
    if dataset.kind == kind {
        return Ok(());
    }
    let want = match kind {
        Kind::Class => "class",
        Kind::Real => "real",
    };
    Err(CliError::Input(format!(
        "{command} needs {want} labels; column `{}` holds the other kind",
        dataset.label
    )))
}

/// Old examples and the new object: `--x` against every row, or the last
/// row (label withheld) against the rest.
fn split<'a>(dataset: &'a Dataset, x: &Option<Vec<f64>>, report: &mut RunReport) -> CliResult<(&'a [Example], Vec<f64>)> {
    let arity = dataset.features.len();
    match x {
        Some(x) => {
            if x.len() != arity {
                return Err(CliError::Input(format!(
                    "--x has {} values but the dataset has {arity} feature columns ({})",
                    x.len(),
                    dataset.features.join(", ")
                )));
            }
            Ok((&dataset.examples, x.clone()))
        }
        None => {
            let (last, old) = dataset
                .examples
                .split_last()
                .ok_or_else(|| CliError::Input("dataset has no rows".into()))?;
            report.note(format!(
                "new object is the last row; its label {} is withheld",
                last.label
            ));
            Ok((old, last.object.to_vec()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Model {
    Exchangeable,
    WithinLabel,
    Gaussian,
}

const MODELS: [&str; 3] = ["exchangeable", "within-label", "gaussian"];

impl Model {
    fn parse(name: Option<&str>, default: Model) -> CliResult<Model> {
        match name {
            None => Ok(default),
            Some("exchangeable") => Ok(Model::Exchangeable),
            Some("within-label") => Ok(Model::WithinLabel),
            Some("gaussian") => Ok(Model::Gaussian),
            Some(other) => Err(CliError::Input(format!(
                "unknown model `{other}`; expected one of: {}",
                MODELS.join(", ")
            ))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Model::Exchangeable => "exchangeable",
            Model::WithinLabel => "within-label",
            Model::Gaussian => "gaussian",
        }
    }
}

fn default_regression_measure(dataset: &Dataset) -> &'static str {
    if dataset.features.is_empty() {
        "average"
    } else {
        "least-squares"
    }
}

/// The predictor a dataset is evaluated with, and the names it reports.
fn predictor(
    dataset: &Dataset,
    measure: Option<&str>,
    model: Option<&str>,
) -> CliResult<(Box<dyn RegionPredictor>, String, Model)> {
    match dataset.kind {
        Kind::Class => {
            let model = Model::parse(model, Model::Exchangeable)?;
            let name = measure.unwrap_or("knn-ratio");
            let m = classification_measure(name)?;
            let labels = dataset.classes();
            let p = match model {
                Model::Exchangeable => ConformalClassifier::new(m, labels),
                Model::WithinLabel => ConformalClassifier::within_label(m, labels),
                Model::Gaussian => {
                    return Err(CliError::Input("the gaussian model needs real labels".into()));
                }
            };
            Ok((Box::new(p), name.to_string(), model))
        }
        Kind::Real => {
            let model = Model::parse(model, Model::Exchangeable)?;
            match model {
                Model::Exchangeable => {
                    let name = measure.unwrap_or(default_regression_measure(dataset));
                    let p = ConformalRegressor {
                        measure: regression_measure(name)?,
                    };
                    Ok((Box::new(p), name.to_string(), model))
                }
                Model::Gaussian => Ok((
                    Box::new(GaussianPredictor {
                        model: GaussianModel::with_intercept(),
                    }),
                    "residual".to_string(),
                    model,
                )),
                Model::WithinLabel => Err(CliError::Input("the within-label model needs class labels".into())),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Single predictions

fn push_classification(report: &mut RunReport, subject: &str, r: &ClassificationResult) {
    for (y, p) in &r.report.candidates {
        report.push(Record::p_value(subject, y, *p));
    }
    report.push(Record::ConfidenceCredibility {
        subject: subject.into(),
        confidence: r.confidence,
        credibility: r.credibility,
    });
    for (e, labels) in &r.regions {
        report.push(Record::label_region(subject, *e, labels));
    }
    for w in &r.warnings {
        report.note(format!("{subject}: {w}"));
    }
}

fn classify(
    old: &[Example],
    object: &[f64],
    labels: &[Label],
    measure: &str,
    model: Model,
    eps: &[SignificanceLevel],
) -> CliResult<ClassificationResult> {
    let m = classification_measure(measure)?;
    let task = ClassificationTask {
        old,
        object,
        labels,
        measure: m.as_ref(),
    };
    let comparison = match model {
        Model::Exchangeable => Comparison::All,
        Model::WithinLabel => Comparison::WithinLabel,
        Model::Gaussian => return Err(CliError::Input("the gaussian model needs real labels".into())),
    };
    let (p, warnings) = candidate_pvalues(task, comparison)?;
    Ok(ClassificationResult::assemble(m.name(), p, warnings, eps))
}

fn predict_class(a: &PredictArgs, report: &mut RunReport) -> CliResult<()> {
    let dataset = load(&a.data)?;
    require_kind(&dataset, Kind::Class, "predict-class")?;
    let eps = levels(&a.levels.epsilons)?;
    let model = Model::parse(a.model.as_deref(), Model::Exchangeable)?;
    let measure = a.measure.as_deref().unwrap_or("knn-ratio");
    let (old, x) = split(&dataset, &a.x, report)?;
    let r = classify(old, &x, &dataset.classes(), measure, model, &eps)?;
    report.model = Some(model.name().into());
    report.measure = Some(measure.into());
    report.epsilons = a.levels.epsilons.clone();
    push_classification(report, measure, &r);
    Ok(())
}

fn push_gaussian(report: &mut RunReport, subject: &str, pred: &GaussianPrediction, eps: &[SignificanceLevel], grid: Option<Grid>) -> CliResult<()> {
    report.push(Record::value(subject, "center", pred.center));
    report.push(Record::value(subject, "s2", pred.s2));
    report.push(Record::value(subject, "scale", pred.scale));
    report.push(Record::value(subject, "df", f64::from(pred.df)));
    for (j, b) in pred.coefficients.iter().enumerate() {
        report.push(Record::value(subject, &format!("coefficient {j}"), *b));
    }
    for e in eps {
        report.push(Record::real_region(subject, e.epsilon(), &pred.interval(e.epsilon())?, grid));
    }
    for w in &pred.warnings {
        report.note(format!("{subject}: {w}"));
    }
    Ok(())
}

fn predict_reg(a: &PredictArgs, report: &mut RunReport) -> CliResult<()> {
    let model = Model::parse(a.model.as_deref(), Model::Exchangeable)?;
    match model {
        Model::Gaussian => return gaussian(a, report),
        Model::WithinLabel => return Err(CliError::Input("the within-label model needs class labels".into())),
        Model::Exchangeable => {}
    }
    let dataset = load(&a.data)?;
    require_kind(&dataset, Kind::Real, "predict-reg")?;
    let eps = levels(&a.levels.epsilons)?;
    let grid = grid(&a.levels, &dataset)?;
    let (old, x) = split(&dataset, &a.x, report)?;
    let name = a.measure.as_deref().unwrap_or(default_regression_measure(&dataset));
    let m = regression_measure(name)?;
    let r = conformal_regress_exact(
        RegressionTask {
            old,
            object: &x,
            measure: m.as_ref(),
        },
        &eps,
    )?;
    report.model = Some(model.name().into());
    report.measure = Some(name.into());
    report.epsilons = a.levels.epsilons.clone();
    for (e, region) in &r.regions {
        report.push(Record::real_region(name, *e, region, grid));
    }
    Ok(())
}

fn gaussian(a: &PredictArgs, report: &mut RunReport) -> CliResult<()> {
    let dataset = load(&a.data)?;
    require_kind(&dataset, Kind::Real, "gaussian")?;
    let eps = levels(&a.levels.epsilons)?;
    let grid = grid(&a.levels, &dataset)?;
    let (old, x) = split(&dataset, &a.x, report)?;
    let pred = GaussianModel::with_intercept().predict(old, &x)?;
    report.model = Some("gaussian".into());
    report.epsilons = a.levels.epsilons.clone();
    push_gaussian(report, "gaussian", &pred, &eps, grid)
}

fn predict_old(a: &OldArgs, report: &mut RunReport) -> CliResult<()> {
    let dataset = load(&a.data)?;
    require_kind(&dataset, Kind::Real, "predict-old")?;
    let eps = levels(&a.levels.epsilons)?;
    let grid = grid(&a.levels, &dataset)?;
    let name = a.measure.as_deref().unwrap_or("average");
    let m = regression_measure(name)?;
    let old: Vec<Example> = dataset.values().into_iter().map(Example::value).collect();
    let r = conformal_regress_exact(
        RegressionTask {
            old: &old,
            object: &[],
            measure: m.as_ref(),
        },
        &eps,
    )?;
    report.model = Some("exchangeable".into());
    report.measure = Some(name.into());
    report.epsilons = a.levels.epsilons.clone();
    for (e, region) in &r.regions {
        report.push(Record::real_region(name, *e, region, grid));
    }
    Ok(())
}

fn fisher(a: &OldArgs, report: &mut RunReport) -> CliResult<()> {
    let dataset = load(&a.data)?;
    require_kind(&dataset, Kind::Real, "fisher")?;
    let eps = levels(&a.levels.epsilons)?;
    let grid = grid(&a.levels, &dataset)?;
    let pred = fisher_prediction(&dataset.values())?;
    report.model = Some("gaussian".into());
    report.epsilons = a.levels.epsilons.clone();
    report.push(Record::value("fisher", "mean", pred.center));
    report.push(Record::value("fisher", "s", pred.s2.sqrt()));
    report.push(Record::value("fisher", "df", f64::from(pred.df)));
    for e in &eps {
        report.push(Record::real_region("fisher", e.epsilon(), &pred.interval(e.epsilon())?, grid));
    }
    for w in &pred.warnings {
        report.note(format!("fisher: {w}"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Streams

fn region_text(region: &PredictionRegion) -> String {
    match region {
        PredictionRegion::LabelSet(ls) => {
            let names: Vec<String> = ls.iter().map(Label::to_string).collect();
            format!("{{{}}}", names.join(", "))
        }
        PredictionRegion::Real(r) => r.render(2),
    }
}

fn aggregates_record(subject: &str, ledger: &ValidityLedger, dataset: &Dataset) -> Record {
    let per_label = if dataset.kind == Kind::Class {
        ledger
            .per_label_rates()
            .into_iter()
            .map(|(y, r)| (y.to_string(), r))
            .collect()
    } else {
        BTreeMap::new()
    };
    Record::Aggregates {
        subject: subject.into(),
        epsilon: ledger.epsilon,
        error_rate: ledger.error_rate(),
        aggregates: ledger.aggregates(),
        per_label_error_rates: per_label,
    }
}

fn step_records(ledger: &ValidityLedger) -> impl Iterator<Item = Record> + '_ {
    ledger
        .outcomes
        .iter()
        .zip(ledger.cumulative_errors())
        .map(|(o, c)| {
            Record::Step(StepRecord {
                step: o.step,
                label: o.label.to_string(),
                region: region_text(&o.region),
                hit: o.hit,
                category: format!("{:?}", o.category),
                warm_up: o.warm_up,
                cumulative_errors: c,
            })
        })
}

/// Cumulative counts per step, as plotted against the step number.
fn curve_csv(ledger: &ValidityLedger, extra: Option<(&str, &[f64])>) -> String {
    let mut out = String::from("step,errors,empty,uncertain,singleton,expected_errors");
    if let Some((name, _)) = extra {
        let _ = write!(out, ",{name}");
    }
    out.push('\n');
    let (mut errors, mut empty, mut uncertain, mut singleton, mut counted) = (0, 0, 0, 0, 0usize);
    for (i, o) in ledger.outcomes.iter().enumerate() {
        if !o.warm_up {
            counted += 1;
            errors += usize::from(o.is_error());
            match o.size {
                RegionSize::Empty => empty += 1,
                RegionSize::Uncertain => uncertain += 1,
                RegionSize::Singleton => singleton += 1,
            }
        }
        let _ = write!(
            out,
            "{},{errors},{empty},{uncertain},{singleton},{}",
            o.step,
            ledger.epsilon * counted as f64
        );
        if let Some((_, col)) = extra {
            let _ = write!(out, ",{}", col[i]);
        }
        out.push('\n');
    }
    out
}

fn write_curve(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn check_stream_level(epsilon: f64) -> CliResult<()> {
    if (0.0..=1.0).contains(&epsilon) {
        Ok(())
    } else {
        Err(CliError::Input(format!("--epsilon must lie in [0, 1], got {epsilon}")))
    }
}

fn evaluate(a: &EvaluateArgs, report: &mut RunReport) -> CliResult<()> {
    check_stream_level(a.epsilon)?;
    let dataset = load(&a.data)?;
    let (p, measure, model) = predictor(&dataset, a.measure.as_deref(), a.model.as_deref())?;
    let ledger = online_eval(&dataset.examples, p.as_ref(), a.epsilon);
    report.model = Some(model.name().into());
    report.measure = Some(measure);
    report.epsilons = vec![a.epsilon];
    report.note(WARM_UP_NOTE);
    report.push(aggregates_record(&ledger.predictor, &ledger, &dataset));
    report.records.extend(step_records(&ledger));
    for o in &ledger.outcomes {
        for w in &o.warnings {
            report.note(format!("step {}: {w}", o.step));
        }
    }
    if let Some(path) = &a.curve {
        write_curve(path, &curve_csv(&ledger, None))?;
    }
    Ok(())
}

fn permute(a: &PermuteArgs, report: &mut RunReport) -> CliResult<()> {
    let e = &a.eval;
    check_stream_level(e.epsilon)?;
    let dataset = load(&e.data)?;
    let (p, measure, model) = predictor(&dataset, e.measure.as_deref(), e.model.as_deref())?;
    let r = permutation_experiment(&dataset.examples, p.as_ref(), e.epsilon, a.trials, a.seed);
    report.seed = Some(a.seed);
    report.model = Some(model.name().into());
    report.measure = Some(measure);
    report.epsilons = vec![e.epsilon];
    report.note(WARM_UP_NOTE);
    report.push(aggregates_record("original order", &r.original, &dataset));
    for t in &r.trials {
        report.push(Record::Trial {
            trial: t.trial,
            errors: t.ledger.errors(),
            counted: t.ledger.counted_steps(),
            error_rate: t.error_rate(),
        });
    }
    if !r.trials.is_empty() {
        report.push(Record::value("trials", "mean error rate", r.mean_error_rate));
        report.push(Record::value("trials", "min error rate", r.min_error_rate));
        report.push(Record::value("trials", "max error rate", r.max_error_rate));
    }
    if let Some(path) = &e.curve {
        let n = dataset.len();
        let mut mean = vec![0.0; n];
        for t in &r.trials {
            for (m, c) in mean.iter_mut().zip(t.ledger.cumulative_errors()) {
                *m += c as f64 / r.trials.len() as f64;
            }
        }
        write_curve(path, &curve_csv(&r.original, Some(("mean_permuted_errors", &mean))))?;
    }
    Ok(())
}

fn read_errors(path: &Path) -> CliResult<Vec<bool>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for (j, tok) in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .enumerate()
        {
            out.push(match tok {
                "0" => false,
                "1" => true,
                _ => {
                    return Err(CliError::at(i + 1, j + 1, format!("`{tok}` is not 0 or 1")).in_file(path));
                }
            });
        }
    }
    Ok(out)
}

fn bet_audit(a: &BetArgs, report: &mut RunReport) -> CliResult<()> {
    let errors = match (&a.errors, &a.data) {
        (Some(path), _) => read_errors(path)?,
        (None, Some(path)) => {
            let dataset = load_path(path, &schema(&a.label_column, &a.features))?;
            let (p, measure, model) = predictor(&dataset, a.measure.as_deref(), a.model.as_deref())?;
            report.model = Some(model.name().into());
            report.measure = Some(measure);
            report.note(WARM_UP_NOTE);
            online_eval(&dataset.examples, p.as_ref(), a.epsilon).error_indicators()
        }
        (None, None) => return Err(CliError::Input("bet-audit needs --errors or --data".into())),
    };
    let t = betting_audit(&errors, a.epsilon)?;
    report.epsilons = vec![a.epsilon];
    report.push(Record::value("audit", "N", errors.len() as f64));
    report.push(Record::value("audit", "error frequency", t.frequency));
    report.push(Record::value("audit", "final capital", t.final_capital()));
    report.push(Record::flag("audit", "capital bound holds", t.bound_holds));
    report.push(Record::flag("audit", "never negative", t.never_negative));
    if let Some(d) = a.delta {
        match t.deviation_check(d) {
            Some(ok) => report.push(Record::flag("audit", &format!("capital ≥ Nδ² at δ = {d}"), ok)),
            None => report.note(format!("error frequency is below ε + {d}; large-deviation check not applicable")),
        }
    }
    for n in (0..=t.len()).rev() {
        report.push(Record::Capital {
            n,
            capital: t.capital[n],
            stake: n.checked_sub(1).map(|i| t.stakes[i]),
            slack: t.slack[n],
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Worked examples

fn replicate(a: &ReplicateArgs, report: &mut RunReport) -> CliResult<()> {
    match a.study {
        Study::Czuber => replicate_czuber(report),
        Study::IrisClass => replicate_iris_class(report),
        Study::IrisReg => replicate_iris_reg(report),
        Study::IrisResample => replicate_iris_resample(a, report),
    }
}

fn replicate_czuber(report: &mut RunReport) -> CliResult<()> {
    let d = fixtures::czuber();
    let eps = levels(&[0.05])?;
    let values = d.values();
    report.epsilons = vec![0.05];
    let pred = fisher_prediction(&values)?;
    let fisher = pred.interval(0.05)?;
    report.push(Record::value("fisher", "mean", pred.center));
    report.push(Record::value("fisher", "s", pred.s2.sqrt()));
    report.push(Record::real_region("fisher", 0.05, &fisher, d.grid));
    let old: Vec<Example> = values.iter().copied().map(Example::value).collect();
    let r = conformal_regress_exact(
        RegressionTask {
            old: &old,
            object: &[],
            measure: regression_measure("average")?.as_ref(),
        },
        &eps,
    )?;
    let conformal = &r.regions[0].1;
    report.push(Record::real_region("average", 0.05, conformal, d.grid));
    let next = fixtures::CZUBER_NEXT;
    report.push(Record::value("next", "value", next));
    report.push(Record::flag("fisher", "covers next", fisher.contains(next)));
    report.push(Record::flag("average", "covers next", conformal.contains(next)));
    Ok(())
}

const IRIS_LEVELS: [f64; 3] = [0.08, 0.05, 1.0 / 3.0];

fn replicate_iris_class(report: &mut RunReport) -> CliResult<()> {
    let d = fixtures::iris_class();
    let eps = levels(&IRIS_LEVELS)?;
    report.model = Some("exchangeable".into());
    report.epsilons = IRIS_LEVELS.to_vec();
    let (new, old) = d.examples.split_last().expect("bundled data has rows");
    report.note(format!("new object is the last row; its label {} is withheld", new.label));
    for measure in ["knn-ratio", "label-mean", "band"] {
        let r = classify(old, &new.object, &d.classes(), measure, Model::Exchangeable, &eps)?;
        push_classification(report, measure, &r);
    }
    Ok(())
}

fn replicate_iris_reg(report: &mut RunReport) -> CliResult<()> {
    let d = fixtures::iris_reg();
    let raw = [0.04, 0.08];
    let eps = levels(&raw)?;
    report.epsilons = raw.to_vec();
    let (new, old) = d.examples.split_last().expect("bundled data has rows");
    report.note(format!("new object is the last row; its label {} is withheld", new.label));
    let pred = GaussianModel::with_intercept().predict(old, &new.object)?;
    for e in &eps {
        report.push(Record::real_region("gaussian", e.epsilon(), &pred.interval(e.epsilon())?, d.grid));
    }
    for measure in ["knn-reg", "least-squares"] {
        let r = conformal_regress_exact(
            RegressionTask {
                old,
                object: &new.object,
                measure: regression_measure(measure)?.as_ref(),
            },
            &eps,
        )?;
        for (e, region) in &r.regions {
            report.push(Record::real_region(measure, *e, region, d.grid));
        }
    }
    Ok(())
}

/// Samples of 25 flowers drawn without replacement; in each, the species
/// of the 25th is predicted from the other 24.
fn replicate_iris_resample(a: &ReplicateArgs, report: &mut RunReport) -> CliResult<()> {
    let path = a
        .data
        .as_ref()
        .ok_or_else(|| CliError::Input("iris-resample needs --data with a 100-flower file".into()))?;
    let schema = Schema {
        label_column: Some(a.label_column.clone().unwrap_or_else(|| "species".into())),
        features: Some(a.features.clone().unwrap_or_else(|| vec!["sepal_length".into()])),
    };
    let d = load_path(path, &schema)?;
    require_kind(&d, Kind::Class, "iris-resample")?;
    if d.len() < 25 {
        return Err(CliError::Input(format!("iris-resample needs at least 25 rows, found {}", d.len())));
    }
    let eps = levels(&[a.epsilon])?;
    report.seed = Some(a.seed);
    report.model = Some("exchangeable".into());
    report.epsilons = vec![a.epsilon];
    for (measure, aggregates) in resample_study(&d, a.trials, a.seed, &eps)? {
        report.push(Record::Aggregates {
            subject: measure.into(),
            epsilon: a.epsilon,
            error_rate: aggregates.total_errors as f64 / aggregates.total_examples.max(1) as f64,
            aggregates,
            per_label_error_rates: BTreeMap::new(),
        });
    }
    Ok(())
}

/// The indices of resampling trial `trial`: 25 distinct rows drawn from
/// stream `trial` of a ChaCha generator seeded with `seed`.
pub fn resample_indices(n: usize, seed: u64, trial: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    sample(&mut rng, n, 25).into_vec()
}

/// Outcome aggregates of the resampling study for each classification
/// measure.
pub fn resample_study(
    d: &Dataset,
    trials: usize,
    seed: u64,
    eps: &[SignificanceLevel],
) -> CliResult<Vec<(&'static str, LedgerAggregates)>> {
    let labels = d.classes();
    let samples: Vec<Vec<Example>> = (0..trials as u64)
        .map(|t| {
            resample_indices(d.len(), seed, t)
                .into_iter()
                .map(|i| d.examples[i].clone())
                .collect()
        })
        .collect();
    ["knn-ratio", "label-mean", "band"]
        .into_iter()
        .map(|measure| {
            let p = ConformalClassifier::new(classification_measure(measure)?, labels.clone());
            let outcomes = samples
                .iter()
                .enumerate()
                .map(|(t, s)| {
                    let (new, old) = s.split_last().expect("samples have 25 rows");
                    let pred = p.predict(old, &new.object, eps[0].epsilon())?;
                    Ok(StepOutcome::new(t + 1, new.label.clone(), pred.region, pred.p_values, false, pred.warnings))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok((measure, LedgerAggregates::from_outcomes(&outcomes)))
        })
        .collect()
}
