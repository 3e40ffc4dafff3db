//! Parameter sweep: flat key=value config, one CSV row per grid cell,
//! resumable through per-cell marker files.

use crate::context::{corr_err, resolve};
use crate::output::{csv_row, fmt_f, fmt_opt, SCHEMA_LINE};
use crate::{CliError, ContextArgs};
use psicorr::corr::{bound_b1, bound_b2, CorrError};
use psicorr::CorrStrategy;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub ps: Vec<u64>,
    pub ds: Vec<u64>,
    pub hs: Vec<u64>,
    pub a: u64,
    pub b: u64,
    pub min_order: u64,
    /// None means the full period R of each cell.
    pub n: Option<u64>,
    pub m: u64,
    pub delta: Option<f64>,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub sample: Option<u64>,
    pub seed: u64,
    pub fft: bool,
}

fn cfg_err(line_no: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("config line {line_no}: {msg}"))
}

fn parse_num<T: std::str::FromStr>(line_no: usize, key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| cfg_err(line_no, format!("bad value {v:?} for key {key}")))
}

/// Flat key=value lines; '#' starts a comment; repeating p, d or H
/// builds the grid axes.
pub fn parse_config(text: &str) -> Result<SweepConfig, CliError> {
    let mut cfg = SweepConfig {
        ps: vec![],
        ds: vec![],
        hs: vec![],
        a: 1,
        b: 1,
        min_order: 3,
        n: None,
        m: 2,
        delta: None,
        c1: 1.0,
        c2: 1.0,
        c3: 1.0,
        sample: None,
        seed: 0,
        fft: false,
    };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(cfg_err(line_no, format!("expected key=value, got {line:?}")));
        };
        let (key, v) = (key.trim(), value.trim());
        match key {
            "p" => cfg.ps.push(parse_num(line_no, key, v)?),
            "d" => cfg.ds.push(parse_num(line_no, key, v)?),
            "H" => cfg.hs.push(parse_num(line_no, key, v)?),
            "a" => cfg.a = parse_num(line_no, key, v)?,
            "b" => cfg.b = parse_num(line_no, key, v)?,
            "min_order" => cfg.min_order = parse_num(line_no, key, v)?,
            "N" => {
                cfg.n = if v == "full" {
                    None
                } else {
                    Some(parse_num(line_no, key, v)?)
                }
            }
            "m" => cfg.m = parse_num(line_no, key, v)?,
            "delta" => cfg.delta = Some(parse_num(line_no, key, v)?),
            "c1" => cfg.c1 = parse_num(line_no, key, v)?,
            "c2" => cfg.c2 = parse_num(line_no, key, v)?,
            "c3" => cfg.c3 = parse_num(line_no, key, v)?,
            "sample" => cfg.sample = Some(parse_num(line_no, key, v)?),
            "seed" => cfg.seed = parse_num(line_no, key, v)?,
            "strategy" => match v {
                "direct" => cfg.fft = false,
                "fft" => cfg.fft = true,
                _ => return Err(cfg_err(line_no, format!("strategy must be direct or fft, got {v:?}"))),
            },
            _ => return Err(cfg_err(line_no, format!("unknown key {key:?}"))),
        }
    }
    if cfg.ps.is_empty() {
        return Err(CliError::Config("config needs at least one p=".into()));
    }
    if cfg.hs.is_empty() {
        return Err(CliError::Config("config needs at least one H=".into()));
    }
    if cfg.ds.is_empty() {
        cfg.ds.push(2);
    }
    if cfg.fft && cfg.n.is_some() {
        return Err(CliError::Config(
            "strategy=fft is cyclic-only and requires N=full".into(),
        ));
    }
    if cfg.m < 2 {
        return Err(CliError::Config(format!("m must be >= 2, got {}", cfg.m)));
    }
    Ok(cfg)
}

#[derive(Serialize, Deserialize)]
struct CellRow {
    cell: usize,
    p: u64,
    a: u64,
    b: u64,
    px: u64,
    py: u64,
    ord_p: u64,
    d: u64,
    r: u64,
    n_terms: u64,
    h: u64,
    m: u64,
    u2: f64,
    u2_mode: String,
    um: Option<f64>,
    vm: Option<f64>,
    uv_mode: Option<String>,
    t_h: f64,
    sum_abs_corr: f64,
    b1: Option<f64>,
    ratio_b1: Option<f64>,
    b2: Option<f64>,
    ratio_b2: Option<f64>,
    exc_count: Option<u64>,
    exc_rhs: Option<f64>,
}

const HEADER: &str = "cell,p,a,b,px,py,ord_p,d,r,n_terms,h,m,u2,u2_mode,um,vm,uv_mode,t_h,sum_abs_corr,b1,ratio_b1,b2,ratio_b2,exc_count,exc_rhs";

impl CellRow {
    fn to_csv(&self) -> String {
        csv_row(&[
            self.cell.to_string(),
            self.p.to_string(),
            self.a.to_string(),
            self.b.to_string(),
            self.px.to_string(),
            self.py.to_string(),
            self.ord_p.to_string(),
            self.d.to_string(),
            self.r.to_string(),
            self.n_terms.to_string(),
            self.h.to_string(),
            self.m.to_string(),
            fmt_f(self.u2),
            self.u2_mode.clone(),
            fmt_opt(self.um),
            fmt_opt(self.vm),
            self.uv_mode.clone().unwrap_or_default(),
            fmt_f(self.t_h),
            fmt_f(self.sum_abs_corr),
            fmt_opt(self.b1),
            fmt_opt(self.ratio_b1),
            fmt_opt(self.b2),
            fmt_opt(self.ratio_b2),
            self.exc_count.map(|c| c.to_string()).unwrap_or_default(),
            fmt_opt(self.exc_rhs),
        ])
    }
}

fn soft_bound(r: Result<f64, CorrError>) -> Result<Option<f64>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(CorrError::RTooSmallForBounds { .. }) => Ok(None),
        Err(e) => Err(corr_err(e)),
    }
}

fn compute_cell(
    cfg: &SweepConfig,
    cell: usize,
    p: u64,
    d: u64,
    h: u64,
    cache: &mut HashMap<(u64, u64), psicorr::CharSeq>,
) -> Result<CellRow, CliError> {
    if !cache.contains_key(&(p, d)) {
        let args = ContextArgs {
            p,
            a: cfg.a,
            b: cfg.b,
            px: None,
            py: None,
            min_order: cfg.min_order,
            char_order: d,
            twist: 1,
        };
        cache.insert((p, d), resolve(&args)?.seq);
    }
    let seq = &cache[&(p, d)];
    let info = *seq.info();
    let r = info.r;
    let n_terms = cfg.n.unwrap_or(r);
    let strategy = if cfg.fft {
        CorrStrategy::Fft
    } else {
        CorrStrategy::Direct
    };
    let sample_spec = cfg.sample.map(|c| (c, cfg.seed));
    let shifts = seq
        .corr_all_shifts(n_terms, h, false, strategy)
        .map_err(corr_err)?;
    let sum_abs: f64 = shifts.iter().map(|s| s.norm()).sum();
    let u2 = seq.u_avg(2, h, n_terms, sample_spec).map_err(corr_err)?;
    let (um, vm, uv_mode) = if cfg.m > 2 {
        let u = seq.u_avg(cfg.m, h, n_terms, sample_spec).map_err(corr_err)?;
        let v = seq.v_avg(cfg.m, h, n_terms, sample_spec).map_err(corr_err)?;
        let mode = if u.sampled { "sampled" } else { "exhaustive" };
        (Some(u.value), Some(v.value), Some(mode.to_string()))
    } else {
        (None, None, None)
    };
    let t_h = seq.t_sum(h).map_err(corr_err)?;
    let b1 = soft_bound(bound_b1(p, r, h, cfg.c1, cfg.c2, n_terms == r))?;
    let b2 = match bound_b2(p, r, h, cfg.c3) {
        Ok(v) => v,
        Err(CorrError::RTooSmallForBounds { .. }) => None,
        Err(e) => return Err(corr_err(e)),
    };
    let (exc_count, exc_rhs) = match cfg.delta {
        None => (None, None),
        Some(dl) => {
            let (c, rhs) = seq
                .exceptional_count(n_terms, h, dl, 1.0)
                .map_err(corr_err)?;
            (Some(c), rhs)
        }
    };
    Ok(CellRow {
        cell,
        p,
        a: info.a,
        b: info.b,
        px: info.px,
        py: info.py,
        ord_p: info.ord_p,
        d,
        r,
        n_terms,
        h,
        m: cfg.m,
        u2: u2.value,
        u2_mode: if u2.sampled { "sampled" } else { "exhaustive" }.to_string(),
        um,
        vm,
        uv_mode,
        t_h,
        sum_abs_corr: sum_abs,
        b1,
        ratio_b1: b1.map(|v| sum_abs / v),
        b2,
        ratio_b2: b2.map(|v| sum_abs / v),
        exc_count,
        exc_rhs,
    })
}

pub fn cmd_sweep(config: &Path, out: &Path, json: bool) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config.display())))?;
    let cfg = parse_config(&text)?;

    // Marker directory: one JSON file per completed cell, so an
    // interrupted sweep resumes without recomputing.
    let cells_dir: PathBuf = out.with_extension("cells");
    std::fs::create_dir_all(&cells_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", cells_dir.display())))?;

    let mut grid: Vec<(u64, u64, u64)> = Vec::new();
    for &p in &cfg.ps {
        for &d in &cfg.ds {
            for &h in &cfg.hs {
                grid.push((p, d, h));
            }
        }
    }

    let mut cache = HashMap::new();
    let mut rows = Vec::with_capacity(grid.len());
    for (cell, &(p, d, h)) in grid.iter().enumerate() {
        let marker = cells_dir.join(format!("cell_{cell:04}.json"));
        if marker.exists() {
            let data = std::fs::read_to_string(&marker).map_err(|e| {
                CliError::Config(format!("cannot read {}: {e}", marker.display()))
            })?;
            let row: CellRow = serde_json::from_str(&data).map_err(|e| {
                CliError::Config(format!("corrupt marker {}: {e}", marker.display()))
            })?;
            eprintln!(
                "cell {}/{}: p={p} d={d} H={h} (resumed)",
                cell + 1,
                grid.len()
            );
            rows.push(row);
            continue;
        }
        let started = Instant::now();
        let row = compute_cell(&cfg, cell, p, d, h, &mut cache)?;
        let tmp = cells_dir.join(format!("cell_{cell:04}.json.tmp"));
        std::fs::write(&tmp, serde_json::to_string_pretty(&row).unwrap())
            .and_then(|_| std::fs::rename(&tmp, &marker))
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", marker.display())))?;
        eprintln!(
            "cell {}/{}: p={p} d={d} H={h} ({:.3}s)",
            cell + 1,
            grid.len(),
            started.elapsed().as_secs_f64()
        );
        rows.push(row);
    }

    let mut lines = vec![SCHEMA_LINE.to_string(), HEADER.to_string()];
    lines.extend(rows.iter().map(|r| r.to_csv()));
    let csv = lines.join("\n") + "\n";
    std::fs::write(out, &csv)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", out.display())))?;
    if json {
        let jpath = out.with_extension("json");
        let value = serde_json::json!({"schema": 1, "cells": rows});
        std::fs::write(&jpath, format!("{value:#}\n"))
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", jpath.display())))?;
    }
    Ok(())
}
