use anyhow::Result;
use rayon::prelude::*;

use frac_gauss_iso::extension::ExtensionField;
use frac_gauss_iso::inequality::{run_suite, DeficitReport, SetAnalysis, Suite, SuiteConfig};
use frac_gauss_iso::set_model::{asymmetry, Orientation};
use frac_gauss_iso::spectral::{asymptotic_limit, halfspace_series, perimeter_spectral};
use frac_gauss_iso::{Convention, FractionalOrder};

use crate::args::Command;
use crate::config::{parse_grid, RunConfig, UsageError};
use crate::output::{Cell, Table};

/// A finished command: its table, and whether a requested check failed.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub failed: bool,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self { table, failed: false }
    }
}

const DEFAULT_ORDERS: [f64; 1] = [0.5];
const ASYMPTOTIC_ORDERS: [f64; 3] = [0.9, 0.99, 0.999];

fn tag(convention: Convention) -> String {
    format!("convention={}", convention.name())
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Perimeter => perimeter(cfg),
        Command::Deficit => deficit(cfg),
        Command::Asymmetry => asym(cfg),
        Command::ExtensionEval { x, z } => extension_eval(cfg, x, z),
        Command::Verify { suite, n } => verify(cfg, suite, *n),
        Command::Sweep { r_grid } => sweep(cfg, r_grid),
        Command::Asymptotic { r } => asymptotic(cfg, *r),
    }
}

/// (set index, order) pairs in output order.
fn pairs(n_sets: usize, orders: &[FractionalOrder]) -> Vec<(usize, FractionalOrder)> {
    (0..n_sets)
        .flat_map(|i| orders.iter().map(move |&s| (i, s)))
        .collect()
}

fn perimeter(cfg: &RunConfig) -> Result<Outcome> {
    let sets = cfg.require_sets()?;
    let conv = cfg.convention.unwrap_or(Convention::WithConstant);
    let orders = cfg.orders_or(&DEFAULT_ORDERS);
    let mut table = Table::new(tag(conv), &["set", "s", "K", "convention", "value", "tail_bound"]);
    let rows: Vec<_> = pairs(sets.len(), &orders)
        .into_par_iter()
        .map(|(i, s)| perimeter_spectral(&sets[i].set, s, cfg.k, conv).map(|p| (i, p)))
        .collect::<std::result::Result<_, _>>()?;
    for (i, p) in rows {
        table.push(vec![
            sets[i].set.to_string().into(),
            p.s.value().into(),
            p.k.into(),
            conv.name().into(),
            p.value.into(),
            p.tail_bound.into(),
        ]);
    }
    Ok(Outcome::ok(table))
}

pub const DEFICIT_COLUMNS: [&str; 18] = [
    "set", "s", "K", "convention", "m", "p_e", "p_h", "deficit", "asym", "c", "constant", "rhs",
    "budget", "branch", "satisfied", "z0", "z1", "note",
];

pub fn deficit_row(r: &DeficitReport, k: usize, conv: Convention) -> Vec<Cell> {
    vec![
        r.set.to_string().into(),
        r.s.value().into(),
        k.into(),
        conv.name().into(),
        r.m.into(),
        r.p_e.value.into(),
        r.p_h.value.into(),
        r.deficit.into(),
        r.asym.into(),
        r.c_assumed.into(),
        r.constant.into(),
        r.rhs.into(),
        r.budget.into(),
        r.branch.name().into(),
        r.satisfied.into(),
        r.z0.into(),
        r.z1.into(),
        format!("c={} assumed; its true value is unknown", r.c_assumed).into(),
    ]
}

fn deficit(cfg: &RunConfig) -> Result<Outcome> {
    let sets = cfg.require_sets()?;
    let conv = cfg.convention.unwrap_or(Convention::WithConstant);
    let orders = cfg.orders_or(&DEFAULT_ORDERS);
    let reports: Vec<DeficitReport> = pairs(sets.len(), &orders)
        .into_par_iter()
        .map(|(i, s)| {
            let a = SetAnalysis::new(&sets[i].set, s, cfg.k, conv)?;
            DeficitReport::from_analysis(&a, cfg.params)
        })
        .collect::<std::result::Result<_, _>>()?;
    let mut table = Table::new(tag(conv), &DEFICIT_COLUMNS);
    let mut failed = false;
    for r in &reports {
        failed |= !r.satisfied;
        table.push(deficit_row(r, cfg.k, conv));
    }
    Ok(Outcome { table, failed })
}

fn asym(cfg: &RunConfig) -> Result<Outcome> {
    let sets = cfg.require_sets()?;
    let mut table = Table::new("asymmetry", &["set", "m", "asym", "halfline", "r"]);
    for e in sets {
        let a = asymmetry(&e.set)?;
        let side = match a.halfline.orientation {
            Orientation::Left => "left",
            Orientation::Right => "right",
        };
        table.push(vec![
            e.set.to_string().into(),
            e.set.measure().into(),
            a.value.into(),
            side.into(),
            a.halfline.r.into(),
        ]);
    }
    Ok(Outcome::ok(table))
}

fn extension_eval(cfg: &RunConfig, xs: &[f64], zs: &[f64]) -> Result<Outcome> {
    let sets = cfg.require_sets()?;
    let orders = cfg.orders_or(&DEFAULT_ORDERS);
    if let Some(z) = zs.iter().find(|z| !(**z >= 0.0 && z.is_finite())) {
        return Err(UsageError(format!("height z must be nonnegative, got {z}")).into());
    }
    let mut table = Table::new("extension", &["set", "s", "K", "x", "z", "value"]);
    let blocks: Vec<Vec<Vec<Cell>>> = pairs(sets.len(), &orders)
        .into_par_iter()
        .map(|(i, s)| -> Result<Vec<Vec<Cell>>> {
            let field = ExtensionField::from_set(&sets[i].set, s, cfg.k)?;
            let mut rows = Vec::new();
            for &z in zs {
                let slice = field.slice(z)?;
                for &x in xs {
                    rows.push(vec![
                        sets[i].set.to_string().into(),
                        s.value().into(),
                        cfg.k.into(),
                        x.into(),
                        z.into(),
                        slice.evaluate(x).into(),
                    ]);
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    for row in blocks.into_iter().flatten() {
        table.push(row);
    }
    Ok(Outcome::ok(table))
}

pub const VERIFY_COLUMNS: [&str; 12] = [
    "kind", "suite", "seed", "cases", "passed", "inapplicable", "failed", "blocking", "set",
    "case", "detail", "notes",
];

fn verify(cfg: &RunConfig, which: &str, n: Option<usize>) -> Result<Outcome> {
    let suites: Vec<Suite> = if which == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![which.parse::<Suite>().map_err(UsageError)?]
    };
    let suite_cfg = SuiteConfig {
        seed: cfg.seed,
        size: n,
        truncation: cfg.k,
        params: cfg.params,
        c_max: cfg.c_max,
    };
    let mut table = Table::new(
        format!("convention=with-constant, seed={}, c={}, c_max={}", cfg.seed, cfg.params.c, cfg.c_max),
        &VERIFY_COLUMNS,
    );
    let mut failed = false;
    for suite in suites {
        let o = run_suite(suite, &suite_cfg);
        failed |= !o.ok();
        let notes: Vec<String> = o.tallies.iter().map(|(k, v)| format!("{k}={v}")).collect();
        table.push(vec![
            "summary".into(),
            suite.name().into(),
            o.seed.into(),
            o.cases.into(),
            o.passed.into(),
            o.inapplicable.into(),
            o.failures.len().into(),
            o.blocking().into(),
            "".into(),
            "".into(),
            "".into(),
            notes.join(";").into(),
        ]);
        for f in &o.failures {
            table.push(vec![
                "failure".into(),
                suite.name().into(),
                o.seed.into(),
                "".into(),
                "".into(),
                "".into(),
                "".into(),
                f.blocking.into(),
                f.set.to_string().into(),
                f.case.clone().into(),
                f.detail.clone().into(),
                "".into(),
            ]);
        }
    }
    Ok(Outcome { table, failed })
}

fn sweep(cfg: &RunConfig, r_grid: &str) -> Result<Outcome> {
    let rs = parse_grid(r_grid)?;
    let conv = cfg.convention.unwrap_or(Convention::WithConstant);
    let orders = cfg.orders_or(&DEFAULT_ORDERS);
    let jobs: Vec<(f64, FractionalOrder)> = rs
        .iter()
        .flat_map(|&r| orders.iter().map(move |&s| (r, s)))
        .collect();
    let values: Vec<_> = jobs
        .par_iter()
        .map(|&(r, s)| halfspace_series(r, s, cfg.k, conv))
        .collect::<std::result::Result<_, _>>()?;
    let mut table = Table::new(tag(conv), &["r", "s", "K", "convention", "value", "tail_bound"]);
    for ((r, s), p) in jobs.iter().zip(values) {
        table.push(vec![
            (*r).into(),
            s.value().into(),
            cfg.k.into(),
            conv.name().into(),
            p.value.into(),
            p.tail_bound.into(),
        ]);
    }
    Ok(Outcome::ok(table))
}

fn asymptotic(cfg: &RunConfig, r: f64) -> Result<Outcome> {
    let conv = cfg.convention.unwrap_or(Convention::Remark);
    let orders = cfg.orders_or(&ASYMPTOTIC_ORDERS);
    let limit = asymptotic_limit(r);
    let values: Vec<_> = orders
        .par_iter()
        .map(|&s| halfspace_series(r, s, cfg.k, conv))
        .collect::<std::result::Result<_, _>>()?;
    let mut table = Table::new(
        tag(conv),
        &["r", "s", "K", "convention", "scaled", "scaled_extrapolated", "scaled_tail_bound", "limit", "ratio"],
    );
    for (s, p) in orders.iter().zip(values) {
        let w = 1.0 - s.value();
        table.push(vec![
            r.into(),
            s.value().into(),
            cfg.k.into(),
            conv.name().into(),
            (w * p.value).into(),
            (w * p.extrapolated()).into(),
            (w * p.tail_bound).into(),
            limit.into(),
            (w * p.value / limit).into(),
        ]);
    }
    Ok(Outcome::ok(table))
}
