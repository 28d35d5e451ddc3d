use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use sis_core::graph::Iri;
use sis_core::matchmaker::{
    influences_on, inputs_of, quality_criteria_of, simulations_for_output_with, MatchError, MatchMode,
};
use sis_core::planner::{
    classify, enumerate_plans, score_and_rank, sweep, sweep_values, to_dot, Aggregator, Comparison, CriterionClass,
    PlanError, PlanRequest, RankedPlan, Requirement, Verdict,
};
use sis_core::query::{execute, parse_query};
use sis_core::schema::{validate as validate_graph, SisModel};

use crate::args::{AggregatorArg, Command, Common, Format, Mode, PlanArgs, SimArgs};
use crate::error::CliError;
use crate::load::{load, read, Loaded};
use crate::render::{number, sparql_json, table, term};

/// Version stamped into every JSON document except query results.
pub const JSON_VERSION: u32 = 1;

#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            ..Output::default()
        }
    }
}

pub fn run(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Validate(common) => validate(common),
        Command::Query { query, common } => query_file(query, common),
        Command::Capabilities { output, common } => capabilities(output, common),
        Command::Inputs(args) => inputs(args),
        Command::Criteria(args) => criteria(args),
        Command::Influences(args) => influences(args),
        Command::Plan(args) => plan(args),
        Command::Whatif { plan, sweep } => whatif(plan, sweep),
    }
}

fn no_dot(common: &Common, command: &str) -> Result<(), CliError> {
    if common.format == Format::Dot {
        Err(CliError::usage(format!("--format dot is not available for {command}")))
    } else {
        Ok(())
    }
}

fn pretty(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn validate(common: &Common) -> Result<Output, CliError> {
    no_dot(common, "validate")?;
    let loaded = load(common)?;
    let violations = validate_graph(&loaded.graph);
    let errors = violations.iter().filter(|v| v.is_error()).count();
    let mut out = String::new();
    match common.format {
        Format::Json => {
            for v in &violations {
                out.push_str(&serde_json::to_string(v).expect("violations serialize"));
                out.push('\n');
            }
        }
        _ => {
            for v in &violations {
                out.push_str(&v.render(&loaded.prefixes));
                out.push('\n');
            }
            out.push_str(&format!(
                "{}, {}\n",
                plural(errors, "error"),
                plural(violations.len() - errors, "warning")
            ));
        }
    }
    Ok(Output {
        stdout: out,
        warnings: Vec::new(),
        code: u8::from(errors > 0),
    })
}

fn query_file(path: &Path, common: &Common) -> Result<Output, CliError> {
    no_dot(common, "query")?;
    let loaded = load(common)?;
    let text = read(path)?;
    let query = parse_query(&text, &loaded.prefixes).map_err(|e| CliError::usage(format!("{}:{e}", path.display())))?;
    let result = execute(&loaded.graph, &query);
    Ok(Output::ok(match common.format {
        Format::Json => pretty(&sparql_json(&result)),
        _ => {
            let rows: Vec<Vec<String>> = result
                .rows
                .iter()
                .map(|r| r.iter().map(|t| term(&loaded.prefixes, t)).collect())
                .collect();
            let header: Vec<String> = result.header.iter().map(|v| format!("?{v}")).collect();
            table(&header.iter().map(String::as_str).collect::<Vec<_>>(), &rows)
        }
    }))
}

fn match_mode(mode: Mode) -> MatchMode {
    match mode {
        Mode::Strict => MatchMode::Strict,
        Mode::TypeRelaxed => MatchMode::TypeRelaxed,
    }
}

fn capabilities(output: &str, common: &Common) -> Result<Output, CliError> {
    no_dot(common, "capabilities")?;
    let loaded = load(common)?;
    let parameter = loaded.resolve(output)?;
    let model = SisModel::from_graph(&loaded.graph);
    let matches = simulations_for_output_with(&model, &parameter, match_mode(common.match_mode));
    Ok(Output::ok(match common.format {
        Format::Json => pretty(&json!({
            "version": JSON_VERSION,
            "output": parameter,
            "matches": matches,
        })),
        _ => {
            let rows: Vec<Vec<String>> = matches
                .iter()
                .map(|m| {
                    vec![
                        loaded.compact(&m.simulation),
                        loaded.compact(&m.capability),
                        loaded.compact(&m.process),
                    ]
                })
                .collect();
            table(&["simulation", "capability", "process"], &rows)
        }
    }))
}

fn simulation(loaded: &Loaded, args: &SimArgs) -> Result<(SisModel, Iri), CliError> {
    let sim = loaded.resolve(&args.sim)?;
    Ok((SisModel::from_graph(&loaded.graph), sim))
}

fn not_a_simulation(e: MatchError, loaded: &Loaded) -> CliError {
    match e {
        MatchError::NotASimulation(iri) => CliError::usage(format!("{} is not a simulation", loaded.compact(&iri))),
    }
}

fn inputs(args: &SimArgs) -> Result<Output, CliError> {
    no_dot(&args.common, "inputs")?;
    let loaded = load(&args.common)?;
    let (model, sim) = simulation(&loaded, args)?;
    let found = inputs_of(&model, &sim).map_err(|e| not_a_simulation(e, &loaded))?;
    Ok(Output::ok(match args.common.format {
        Format::Json => pretty(&json!({
            "version": JSON_VERSION,
            "simulation": sim,
            "inputs": found,
        })),
        _ => {
            let rows: Vec<Vec<String>> = found
                .iter()
                .map(|m| {
                    vec![
                        loaded.compact(&m.parameter),
                        loaded.compact(&m.process),
                        loaded.compact(&m.capability),
                    ]
                })
                .collect();
            table(&["parameter", "process", "capability"], &rows)
        }
    }))
}

fn criteria(args: &SimArgs) -> Result<Output, CliError> {
    no_dot(&args.common, "criteria")?;
    let loaded = load(&args.common)?;
    let (model, sim) = simulation(&loaded, args)?;
    let found = quality_criteria_of(&model, &sim).map_err(|e| not_a_simulation(e, &loaded))?;
    Ok(Output::ok(match args.common.format {
        Format::Json => {
            let items: Vec<Value> = found
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "kind": c.kind,
                        "value": c.value,
                        "unit": c.unit_hint,
                    })
                })
                .collect();
            pretty(&json!({
                "version": JSON_VERSION,
                "simulation": sim,
                "criteria": items,
            }))
        }
        _ => {
            let rows: Vec<Vec<String>> = found
                .iter()
                .map(|c| {
                    let value = c
                        .instance
                        .as_ref()
                        .map(|i| term(&loaded.prefixes, &sis_core::graph::Term::Literal(i.literal.clone())))
                        .unwrap_or_default();
                    vec![
                        c.kind.as_ref().map(|k| loaded.compact(k)).unwrap_or_else(|| "-".into()),
                        value,
                        c.unit_hint.clone().unwrap_or_default(),
                        loaded.compact(&c.id),
                    ]
                })
                .collect();
            table(&["kind", "value", "unit", "criterion"], &rows)
        }
    }))
}

fn influences(args: &SimArgs) -> Result<Output, CliError> {
    no_dot(&args.common, "influences")?;
    let loaded = load(&args.common)?;
    let (model, sim) = simulation(&loaded, args)?;
    let found = influences_on(&model, &sim).map_err(|e| not_a_simulation(e, &loaded))?;
    Ok(Output::ok(match args.common.format {
        Format::Json => {
            let items: Vec<Value> = found
                .iter()
                .map(|m| {
                    let i = &m.influence;
                    json!({
                        "capability": m.capability,
                        "process": m.process,
                        "influence": i.id,
                        "kind": i.kind,
                        "source": i.source,
                        "targetElement": i.target_element,
                        "value": i.value,
                    })
                })
                .collect();
            pretty(&json!({
                "version": JSON_VERSION,
                "simulation": sim,
                "influences": items,
            }))
        }
        _ => {
            let opt = |i: &Option<Iri>| i.as_ref().map(|x| loaded.compact(x)).unwrap_or_else(|| "-".into());
            let rows: Vec<Vec<String>> = found
                .iter()
                .map(|m| {
                    vec![
                        opt(&m.influence.source),
                        m.influence.value.map(number).unwrap_or_else(|| "-".into()),
                        loaded.compact(&m.process),
                        loaded.compact(&m.influence.id),
                    ]
                })
                .collect();
            table(&["source", "value", "process", "influence"], &rows)
        }
    }))
}

fn parse_number(text: &str, what: &str) -> Result<f64, CliError> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::usage(format!("{what}: '{text}' is not a number")))
}

fn parse_requirement(loaded: &Loaded, text: &str) -> Result<(Iri, Requirement), CliError> {
    let (kind, op, value) = if let Some((k, v)) = text.split_once(">=") {
        (k, Comparison::AtLeast, v)
    } else if let Some((k, v)) = text.split_once("<=") {
        (k, Comparison::AtMost, v)
    } else {
        return Err(CliError::usage(format!(
            "--require expects KIND>=V or KIND<=V, got '{text}'"
        )));
    };
    let threshold = parse_number(value, "--require")?;
    Ok((loaded.resolve(kind)?, Requirement { op, threshold }))
}

fn parse_weight(loaded: &Loaded, text: &str) -> Result<(Iri, f64), CliError> {
    let (kind, w) = text
        .rsplit_once('=')
        .ok_or_else(|| CliError::usage(format!("--weight expects KIND=W, got '{text}'")))?;
    let w = parse_number(w, "--weight")?;
    if w < 0.0 {
        return Err(CliError::usage(format!("--weight: '{text}' is negative")));
    }
    Ok((loaded.resolve(kind)?, w))
}

fn build_request(loaded: &Loaded, args: &PlanArgs) -> Result<PlanRequest, CliError> {
    let goal = loaded.resolve(&args.goal)?;
    let known = args
        .known
        .iter()
        .filter(|k| !k.trim().is_empty())
        .map(|k| loaded.resolve(k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut request = PlanRequest::new(goal, known);
    for r in &args.requirements {
        let (kind, req) = parse_requirement(loaded, r)?;
        request = request.require(kind, req);
    }
    for w in &args.weights {
        let (kind, w) = parse_weight(loaded, w)?;
        request = request.weight(kind, w);
    }
    request.aggregator = match args.aggregator {
        AggregatorArg::InfluenceWeighted => Aggregator::InfluenceWeighted,
        AggregatorArg::WeakestLink => Aggregator::WeakestLink,
    };
    request.max_depth = args.max_depth;
    request.max_plans = args.max_plans;
    request.match_mode = match_mode(args.common.match_mode);
    Ok(request)
}

struct Planned {
    loaded: Loaded,
    model: SisModel,
    request: PlanRequest,
    plans: Vec<sis_core::planner::PlanDag>,
    warnings: Vec<String>,
    truncated: Option<sis_core::planner::Truncation>,
}

/// Enumerates plans, or renders the unreachable-goal diagnostics.
fn plan_or_unreachable(args: &PlanArgs) -> Result<Result<Planned, Output>, CliError> {
    let loaded = load(&args.common)?;
    let request = build_request(&loaded, args)?;
    let model = SisModel::from_graph(&loaded.graph);
    match enumerate_plans(&model, &request) {
        Ok(set) => {
            let warnings = set
                .truncated
                .map(|t| {
                    vec![format!(
                        "search truncated: {}",
                        serde_json::to_value(t).unwrap().as_str().unwrap()
                    )]
                })
                .unwrap_or_default();
            Ok(Ok(Planned {
                loaded,
                model,
                request,
                plans: set.plans,
                warnings,
                truncated: set.truncated,
            }))
        }
        Err(PlanError::GoalUnreachable { chain }) => {
            let stdout = match args.common.format {
                Format::Json => pretty(&json!({
                    "version": JSON_VERSION,
                    "goal": request.goal,
                    "unreachable": chain,
                    "plans": [],
                })),
                _ => {
                    let names: Vec<String> = chain.iter().map(|i| loaded.compact(i)).collect();
                    format!(
                        "goal {} is unreachable\n  blocking chain: {}\n",
                        loaded.compact(&request.goal),
                        names.join(" requires ")
                    )
                }
            };
            Ok(Err(Output {
                stdout,
                warnings: Vec::new(),
                code: 1,
            }))
        }
        Err(e) => Err(CliError::usage(e.to_string())),
    }
}

#[derive(Serialize)]
struct PlanJson<'a> {
    rank: usize,
    feasible: bool,
    #[serde(flatten)]
    ranked: &'a RankedPlan,
}

fn verdict_text(loaded: &Loaded, v: &Verdict) -> String {
    match v {
        Verdict::Feasible => "feasible".into(),
        Verdict::Violates {
            criterion,
            simulation,
            value,
            requirement,
            ..
        } => {
            let op = match requirement.op {
                Comparison::AtLeast => ">=",
                Comparison::AtMost => "<=",
            };
            format!(
                "infeasible: {} {} at {} violates {op} {}",
                loaded.compact(criterion),
                number(*value),
                loaded.compact(simulation),
                number(requirement.threshold)
            )
        }
    }
}

fn plan_table(p: &Planned, ranked: &[RankedPlan]) -> String {
    let l = &p.loaded;
    let feasible = ranked.iter().filter(|r| r.verdict.is_feasible()).count();
    let mut out = format!(
        "goal {}: {}, {} feasible\n",
        l.compact(&p.request.goal),
        plural(ranked.len(), "plan"),
        feasible
    );
    for (i, r) in ranked.iter().enumerate() {
        out.push_str(&format!(
            "\nplan {}  {}  score {}  accuracy {}\n",
            i + 1,
            verdict_text(l, &r.verdict),
            number(r.score.weighted_score),
            number(r.score.effective_accuracy)
        ));
        if r.plan.is_empty() {
            out.push_str("  goal is already known; nothing to run\n");
            continue;
        }
        for (step, &n) in r.order.iter().enumerate() {
            let node = &r.plan.nodes[n];
            out.push_str(&format!(
                "  {}. {} executes {}\n",
                step + 1,
                l.compact(&node.simulation),
                l.compact(&node.process)
            ));
        }
        if !r.score.per_criterion.is_empty() {
            let values: Vec<String> = r
                .score
                .per_criterion
                .iter()
                .map(|(k, v)| format!("{}={}", l.compact(k), number(*v)))
                .collect();
            out.push_str(&format!("  criteria: {}\n", values.join(" ")));
        }
    }
    out
}

fn collect_warnings(planned: &Planned, ranked: &[RankedPlan]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = planned.warnings.clone();
    for r in ranked {
        for w in &r.score.warnings {
            if seen.insert(w.clone()) {
                out.push(w.clone());
            }
        }
    }
    out
}

fn plan(args: &PlanArgs) -> Result<Output, CliError> {
    let p = match plan_or_unreachable(args)? {
        Ok(p) => p,
        Err(out) => return Ok(out),
    };
    let ranked = score_and_rank(&p.model, &p.plans, &p.request);
    let feasible = ranked.iter().filter(|r| r.verdict.is_feasible()).count();
    let stdout = match args.common.format {
        Format::Table => plan_table(&p, &ranked),
        Format::Dot => ranked
            .iter()
            .enumerate()
            .map(|(i, r)| to_dot(&r.plan, &p.loaded.prefixes, &format!("plan {}", i + 1)))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => {
            let plans: Vec<PlanJson> = ranked
                .iter()
                .enumerate()
                .map(|(i, r)| PlanJson {
                    rank: i + 1,
                    feasible: r.verdict.is_feasible(),
                    ranked: r,
                })
                .collect();
            pretty(&json!({
                "version": JSON_VERSION,
                "goal": p.request.goal,
                "known": p.request.known,
                "truncated": p.truncated,
                "plans": plans,
            }))
        }
    };
    Ok(Output {
        stdout,
        warnings: collect_warnings(&p, &ranked),
        code: u8::from(feasible == 0),
    })
}

fn parse_sweep(loaded: &Loaded, text: &str) -> Result<(Iri, f64, f64, f64), CliError> {
    let bad = || CliError::usage(format!("--sweep expects KIND=LO:HI:STEP, got '{text}'"));
    let (kind, range) = text.rsplit_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(bad());
    };
    let (lo, hi, step) = (
        parse_number(lo, "--sweep")?,
        parse_number(hi, "--sweep")?,
        parse_number(step, "--sweep")?,
    );
    if step <= 0.0 {
        return Err(CliError::usage(format!("--sweep: step must be positive, got {step}")));
    }
    Ok((loaded.resolve(kind)?, lo, hi, step))
}

fn whatif(args: &PlanArgs, sweep_text: &str) -> Result<Output, CliError> {
    no_dot(&args.common, "whatif")?;
    let p = match plan_or_unreachable(args)? {
        Ok(p) => p,
        Err(out) => return Ok(out),
    };
    let (kind, lo, hi, step) = parse_sweep(&p.loaded, sweep_text)?;
    let op = match p.request.classes.get(&kind).copied().unwrap_or_else(|| classify(&kind)) {
        CriterionClass::TimeLike => Comparison::AtMost,
        _ => Comparison::AtLeast,
    };
    let mut warnings = p.warnings.clone();
    if !p.model.simulations.values().any(|s| s.criterion_value(&kind).is_some()) {
        warnings.push(format!(
            "no simulation has a value for {}; the sweep filters nothing",
            p.loaded.compact(&kind)
        ));
    }
    let rows = sweep(&p.model, &p.plans, &p.request, &kind, op, &sweep_values(lo, hi, step));
    let op_text = match op {
        Comparison::AtLeast => ">=",
        Comparison::AtMost => "<=",
    };
    let stdout = match args.common.format {
        Format::Json => pretty(&json!({
            "version": JSON_VERSION,
            "goal": p.request.goal,
            "criterion": kind,
            "op": op,
            "plans": p.plans.len(),
            "rows": rows,
        })),
        _ => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format!("{op_text} {}", number(r.threshold)),
                        r.feasible.to_string(),
                        r.top
                            .as_ref()
                            .map(|t| p.loaded.compact(t))
                            .unwrap_or_else(|| "-".into()),
                        r.score.map(number).unwrap_or_else(|| "-".into()),
                    ]
                })
                .collect();
            table(&["threshold", "feasible", "top", "score"], &cells)
        }
    };
    Ok(Output {
        stdout,
        warnings,
        code: 0,
    })
}
