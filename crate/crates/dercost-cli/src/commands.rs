//! Subcommand implementations: load scenario, run core, emit reports.
//!
//! Each command writes its CSV files first and prints the assembled stdout
//! report last, so files are complete even if the pipe closes early.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use dercost_core::battery as batt;
use dercost_core::{econ, risk as risk_engine, verification};
use dercost_core::{AccumulationMode, Approach, BatterySpec, CostRate, HorizonPolicy, RiskReport};

use crate::report::{emit, percent, sig6, stamp, write_csv};
use crate::scenario::{load_event_log, LoadedScenario, ScenarioKind};
use crate::{BatteryArgs, CliError, ComputeArgs, RiskArgs, VerifyArgs};

fn banner(loaded: &LoadedScenario) -> String {
    format!("scenario: {}\nsha256: {}\n", loaded.label, loaded.hash)
}

fn warn_negative_rate(loaded: &LoadedScenario) {
    let rate = loaded.financial.real_rate();
    if rate < 0.0 {
        eprintln!(
            "warning: real interest rate is negative ({}); inflation outruns the nominal rate",
            sig6(rate)
        );
    }
}

fn ensure_out_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path)
        .map_err(|err| CliError::Io(format!("cannot create {}: {err}", path.display())))
}

/// File-name-safe approach id, dots dropped.
fn slug(approach: Approach) -> &'static str {
    match approach {
        Approach::I => "I",
        Approach::II => "II",
        Approach::IIIA => "IIIA",
        Approach::IIIB => "IIIB",
    }
}

pub fn compute(args: &ComputeArgs) -> Result<(), CliError> {
    let loaded = LoadedScenario::load(&args.scenario)?;
    warn_negative_rate(&loaded);
    let scenario = &loaded.equipment;
    let financial = &loaded.financial;
    let policy = if args.fractional_years {
        HorizonPolicy::Fractional
    } else {
        HorizonPolicy::WholeYears
    };
    let only: Option<Approach> = match &args.approach {
        Some(text) => Some(text.parse()?),
        None => None,
    };

    let mut rates: Vec<CostRate> = Vec::new();
    for approach in Approach::ALL {
        if only.is_some_and(|selected| selected != approach) {
            continue;
        }
        match approach {
            Approach::I => rates.push(econ::rate_approach_i(scenario, financial, policy)?),
            Approach::II => rates.push(econ::rate_approach_ii(scenario)?),
            Approach::IIIA => rates.push(econ::rate_approach_iiia(scenario, financial)?),
            Approach::IIIB => match args.year {
                Some(year) => rates.push(econ::rate_approach_iiib(scenario, financial, year)?),
                None => {
                    for year in 0..scenario.project_years {
                        rates.push(econ::rate_approach_iiib(scenario, financial, year)?);
                    }
                }
            },
        }
    }

    let mut text = banner(&loaded);
    let _ = writeln!(text, "real interest rate: {}", sig6(financial.real_rate()));
    let _ = writeln!(
        text,
        "replacements over {} years: {}",
        scenario.project_years,
        econ::replacement_count(scenario)
    );
    let _ = writeln!(text);
    let _ = writeln!(text, "{:<10} {:>5} {:>12}", "approach", "year", "cost_rate");
    for rate in &rates {
        let year = rate.year.map_or("-".to_string(), |j| j.to_string());
        let _ = writeln!(
            text,
            "{:<10} {:>5} {:>12}",
            rate.approach.to_string(),
            year,
            sig6(rate.value)
        );
    }

    ensure_out_dir(&args.out)?;
    let rows: Vec<String> = rates
        .iter()
        .map(|rate| {
            format!(
                "{},{},{}",
                rate.approach,
                rate.year.map(|j| j.to_string()).unwrap_or_default(),
                sig6(rate.value)
            )
        })
        .collect();
    write_csv(
        &args.out.join("rates.csv"),
        &[stamp(&loaded.hash)],
        "approach,year,rate",
        &rows,
    )?;
    emit(&text);
    Ok(())
}

fn parse_horizons(text: &str) -> Result<Vec<u32>, CliError> {
    let mut horizons = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        horizons.push(
            part.parse::<u32>()
                .map_err(|err| CliError::Validation(format!("bad horizon `{part}`: {err}")))?,
        );
    }
    if horizons.is_empty() {
        return Err(CliError::Validation(
            "horizon list is empty; pass years like 4,8,12".to_string(),
        ));
    }
    Ok(horizons)
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let loaded = LoadedScenario::load(&args.scenario)?;
    warn_negative_rate(&loaded);
    let horizons: Vec<u32> = match &args.horizons {
        Some(text) => parse_horizons(text)?,
        None => verification::DEFAULT_HORIZONS.to_vec(),
    };
    let rows = verification::verification_table(&loaded.equipment, &loaded.financial, &horizons)?;

    let mut text = banner(&loaded);
    let mut current_mode: Option<AccumulationMode> = None;
    for row in &rows {
        if current_mode != Some(row.mode) {
            let _ = writeln!(text);
            let _ = writeln!(text, "{} totals vs base case:", row.mode);
            let _ = writeln!(
                text,
                "{:<6} {:<10} {:>14} {:>14}",
                "years", "approach", "total_payment", "error_vs_base"
            );
            current_mode = Some(row.mode);
        }
        let _ = writeln!(
            text,
            "{:<6} {:<10} {:>14} {:>14}",
            row.project_years,
            row.approach.to_string(),
            sig6(row.total),
            percent(row.error_vs_base)
        );
    }

    let prorated: BTreeSet<u32> = rows
        .iter()
        .filter(|row| row.prorated)
        .map(|row| row.project_years)
        .collect();
    if !prorated.is_empty() {
        let list = prorated
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(", ");
        eprintln!(
            "warning: base-case replacement cycle does not divide horizon(s) {list}; final cycle prorated"
        );
    }

    ensure_out_dir(&args.out)?;
    let csv_rows: Vec<String> = rows
        .iter()
        .map(|row| {
            format!(
                "{},{},{},{},{}",
                row.project_years,
                row.approach,
                sig6(row.total),
                sig6(row.error_vs_base),
                row.mode
            )
        })
        .collect();
    write_csv(
        &args.out.join("verification.csv"),
        &[stamp(&loaded.hash)],
        "project_years,approach,total_payment,error_vs_base,mode",
        &csv_rows,
    )?;
    emit(&text);
    Ok(())
}

pub fn risk(args: &RiskArgs) -> Result<(), CliError> {
    let loaded = LoadedScenario::load(&args.scenario)?;
    warn_negative_rate(&loaded);
    let lifetime = loaded.lifetime_distribution()?;
    let usage = loaded.usage_distribution()?;
    let year = args.year.or(loaded.file.options.year).unwrap_or(0);
    let tolerance = args
        .gate_tol
        .or(loaded.file.options.gate_tolerance)
        .unwrap_or(0.015);
    let mode = if args.pv || loaded.file.options.present_value.unwrap_or(false) {
        AccumulationMode::PresentValue
    } else {
        AccumulationMode::Nominal
    };

    let candidates = [Approach::I, Approach::IIIA, Approach::IIIB];
    let mut reports: Vec<RiskReport> = Vec::new();
    for approach in candidates {
        let surface = risk_engine::sensitivity_surface(
            approach,
            &lifetime,
            &usage,
            &loaded.equipment,
            &loaded.financial,
            year,
        )?;
        let expected_cost = risk_engine::expected_cost(&surface, &lifetime, &usage)?;
        let risk = risk_engine::risk_std(&surface, &lifetime, &usage)?;
        let gate_error =
            verification::gate_error(approach, &loaded.equipment, &loaded.financial, mode)?;
        reports.push(RiskReport {
            approach,
            expected_cost,
            risk,
            gate_error,
            gate_passed: gate_error.abs() <= tolerance,
            sensitivity: surface,
        });
    }
    let ranking = risk_engine::rank_approaches(&reports, tolerance)?;

    let mut text = banner(&loaded);
    let _ = writeln!(
        text,
        "gate: |total-payment error vs base case| <= {:.2}% on {} totals over {} years",
        tolerance * 100.0,
        mode,
        loaded.equipment.project_years
    );
    let _ = writeln!(text);
    let _ = writeln!(
        text,
        "{:<10} {:>12} {:>12} {:>12} {:>6}",
        "approach", "expected", "risk", "gate_error", "gate"
    );
    for report in &reports {
        let _ = writeln!(
            text,
            "{:<10} {:>12} {:>12} {:>12} {:>6}",
            report.approach.to_string(),
            sig6(report.expected_cost),
            sig6(report.risk),
            percent(report.gate_error),
            if report.gate_passed { "pass" } else { "fail" }
        );
    }
    let _ = writeln!(text);

    let order_text = ranking
        .order
        .iter()
        .map(Approach::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    if ranking.fell_back_to_base {
        let _ = writeln!(text, "ranking: {order_text} (base-case fallback)");
        eprintln!(
            "warning: no candidate passed the accuracy gate at tolerance {:.2}%; using the base case",
            tolerance * 100.0
        );
    } else {
        let _ = writeln!(text, "ranking: {order_text} (lowest risk first)");
    }

    let base_risk = reports[0].risk;
    let best = reports
        .iter()
        .min_by(|a, b| a.risk.total_cmp(&b.risk))
        .expect("candidate list is non-empty");
    if best.approach != Approach::I && base_risk > 0.0 {
        let _ = writeln!(
            text,
            "lowest risk: {} ({:.2}% below approach I)",
            best.approach,
            (1.0 - best.risk / base_risk) * 100.0
        );
    }
    if let Some(note) = &loaded.file.meta.note {
        let _ = writeln!(text, "note: {note}");
    }

    ensure_out_dir(&args.out)?;
    let mut comments = vec![stamp(&loaded.hash)];
    if let Some(note) = &loaded.file.meta.note {
        comments.push(format!("note: {note}"));
    }
    comments.push(format!(
        "ranking: {}",
        ranking
            .order
            .iter()
            .map(Approach::to_string)
            .collect::<Vec<_>>()
            .join(",")
    ));
    if ranking.fell_back_to_base {
        comments.push("fallback: no candidate passed the accuracy gate".to_string());
    }
    let csv_rows: Vec<String> = reports
        .iter()
        .map(|report| {
            format!(
                "{},{},{},{},{}",
                report.approach,
                sig6(report.expected_cost),
                sig6(report.risk),
                sig6(report.gate_error),
                report.gate_passed
            )
        })
        .collect();
    write_csv(
        &args.out.join("risk_report.csv"),
        &comments,
        "approach,expected_cost,risk,gate_error,gate_passed",
        &csv_rows,
    )?;

    if args.surface {
        for report in &reports {
            let surface = &report.sensitivity;
            let mut rows = Vec::new();
            for (m, lifetime_value) in surface.lifetime_values.iter().enumerate() {
                for (n, usage_value) in surface.usage_values.iter().enumerate() {
                    rows.push(format!(
                        "{},{},{}",
                        sig6(*lifetime_value),
                        sig6(*usage_value),
                        sig6(surface.cells[m][n])
                    ));
                }
            }
            write_csv(
                &args.out.join(format!("surface_{}.csv", slug(report.approach))),
                &[stamp(&loaded.hash)],
                "lifetime_h,usage_h,cost",
                &rows,
            )?;
        }
    }
    emit(&text);
    Ok(())
}

pub fn battery(args: &BatteryArgs) -> Result<(), CliError> {
    let loaded = LoadedScenario::load(&args.scenario)?;
    warn_negative_rate(&loaded);
    if !matches!(loaded.file.kind, ScenarioKind::Battery) {
        return Err(CliError::Validation(
            "battery command needs a scenario with kind = \"battery\"".to_string(),
        ));
    }
    let table = loaded
        .file
        .battery
        .as_ref()
        .ok_or_else(|| CliError::Validation("scenario has no [battery] table".to_string()))?;
    let spec = BatterySpec {
        rated_cycle_life: table.rated_cycle_life,
        rated_dod: table.rated_dod,
        rated_capacity: table.rated_capacity,
        u0: table.u0,
        u1: table.u1,
    };
    spec.validate()?;
    let charge_life = batt::charge_life(&spec)?;
    let relative_gap =
        (charge_life - loaded.equipment.economic_life).abs() / loaded.equipment.economic_life;
    if relative_gap > 1e-6 {
        eprintln!(
            "warning: [equipment] economic_life {} differs from rated charge life {}",
            sig6(loaded.equipment.economic_life),
            sig6(charge_life)
        );
    }

    let log_name = table.event_log.as_deref().ok_or_else(|| {
        CliError::Validation("scenario names no event_log to read discharges from".to_string())
    })?;
    let log_path = loaded.companion_path(log_name)?;
    let yearly = load_event_log(&log_path)?;

    let mut annual_rows: Vec<(String, usize, f64, f64)> = Vec::new();
    for (year, events) in &yearly {
        let effective = batt::annual_effective_discharge(events, &spec)?;
        let metered: f64 = events.iter().map(|event| event.discharged).sum();
        annual_rows.push((year.clone(), events.len(), metered, effective));
    }
    let mean_annual = annual_rows.iter().map(|row| row.3).sum::<f64>() / annual_rows.len() as f64;
    let year = args.year.or(loaded.file.options.year).unwrap_or(0);
    let rates =
        batt::cost_per_effective_ah(&loaded.equipment, &loaded.financial, mean_annual, year)?;

    let mut text = banner(&loaded);
    let _ = writeln!(text, "rated charge life: {} Ah", sig6(charge_life));
    let _ = writeln!(text);
    let _ = writeln!(
        text,
        "{:<6} {:>7} {:>12} {:>13}",
        "year", "events", "metered_ah", "effective_ah"
    );
    for (year_label, count, metered, effective) in &annual_rows {
        let _ = writeln!(
            text,
            "{:<6} {:>7} {:>12} {:>13}",
            year_label,
            count,
            sig6(*metered),
            sig6(*effective)
        );
    }
    let _ = writeln!(text);
    let _ = writeln!(
        text,
        "mean annual effective discharge: {} Ah",
        sig6(mean_annual)
    );
    let _ = writeln!(
        text,
        "replacements over {} years: {}",
        loaded.equipment.project_years,
        econ::replacements_for(
            loaded.equipment.project_years,
            mean_annual,
            loaded.equipment.economic_life
        )
    );
    let _ = writeln!(text, "cost per effective Ah in year {year}:");
    let _ = writeln!(text, "  lifetime basis:   {}", sig6(rates.lifetime_basis.value));
    let _ = writeln!(
        text,
        "  annual-sum basis: {}",
        sig6(rates.annual_sum_basis.value)
    );

    ensure_out_dir(&args.out)?;
    let annual_csv: Vec<String> = annual_rows
        .iter()
        .map(|(year_label, count, metered, effective)| {
            format!(
                "{year_label},{count},{},{}",
                sig6(*metered),
                sig6(*effective)
            )
        })
        .collect();
    write_csv(
        &args.out.join("battery_annual.csv"),
        &[stamp(&loaded.hash)],
        "year,events,metered_ah,effective_ah",
        &annual_csv,
    )?;
    let rate_rows = vec![
        format!("lifetime,{year},{}", sig6(rates.lifetime_basis.value)),
        format!("annual_sum,{year},{}", sig6(rates.annual_sum_basis.value)),
    ];
    write_csv(
        &args.out.join("battery_rates.csv"),
        &[stamp(&loaded.hash)],
        "basis,year,rate",
        &rate_rows,
    )?;
    emit(&text);
    Ok(())
}
