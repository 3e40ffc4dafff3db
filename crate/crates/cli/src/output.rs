//! CSV/JSON emission for the corr and spectrum subcommands.
//!
//! All tables start with a `# schema=1` line followed by a header row;
//! fields follow RFC 4180 quoting. Output is byte-identical for a fixed
//! configuration and seed, so timings go to stderr only.

use crate::context::{corr_err, resolve};
use crate::{CliError, ContextArgs};
use psicorr::corr::{bound_b1, bound_b2, spectrum_budget, CorrError};
use psicorr::CorrStrategy;
use serde_json::json;
use std::path::PathBuf;
use std::time::Instant;

pub const SCHEMA_LINE: &str = "# schema=1";

/// RFC 4180: quote a field when it contains a comma, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

/// Fixed-width scientific notation keeps reruns byte-identical.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

pub fn write_text(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
    }
}

fn write_json_mirror(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), CliError> {
    let text = format!("{:#}\n", value);
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let jpath = path.with_extension("json");
            std::fs::write(&jpath, text)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", jpath.display())))
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_corr(
    args: &ContextArgs,
    h: Option<u64>,
    n: Option<u64>,
    m: u64,
    delta: Option<f64>,
    sample: Option<u64>,
    seed: u64,
    fft: bool,
    conj: bool,
    out: Option<PathBuf>,
    json: bool,
) -> Result<(), CliError> {
    let started = Instant::now();
    let res = resolve(args)?;
    let seq = res.seq;
    let info = *seq.info();
    let r = info.r;
    let n_terms = n.unwrap_or(r);
    let h_max = h.unwrap_or(r);
    let strategy = if fft {
        CorrStrategy::Fft
    } else {
        CorrStrategy::Direct
    };
    let mode = if fft { "fft" } else { "direct" };
    let sample_spec = sample.map(|c| (c, seed));

    let shifts = seq
        .corr_all_shifts(n_terms, h_max, conj, strategy)
        .map_err(corr_err)?;
    let u2 = seq.u_avg(2, h_max, n_terms, sample_spec).map_err(corr_err)?;
    let (um, vm) = if m > 2 {
        let u = seq.u_avg(m, h_max, n_terms, sample_spec).map_err(corr_err)?;
        let v = seq.v_avg(m, h_max, n_terms, sample_spec).map_err(corr_err)?;
        (Some(u), Some(v))
    } else {
        (None, None)
    };
    let t_h = seq.t_sum(h_max).map_err(corr_err)?;
    let complete = n_terms == r;
    let b1 = optional_bound(bound_b1(info.p, r, h_max, 1.0, 1.0, complete))?;
    let b2 = optional_bound(bound_b2(info.p, r, h_max, 1.0))?.flatten();
    let exc = match delta {
        None => None,
        Some(dl) => Some(
            seq.exceptional_count(n_terms, h_max, dl, 1.0)
                .map_err(corr_err)?,
        ),
    };

    let cols = [
        "row", "p", "a", "b", "px", "py", "ord_p", "d", "r", "n_terms", "h", "m", "re", "im",
        "abs", "value", "mode",
    ];
    let base = vec![
        info.p.to_string(),
        info.a.to_string(),
        info.b.to_string(),
        info.px.to_string(),
        info.py.to_string(),
        info.ord_p.to_string(),
        info.d.to_string(),
        r.to_string(),
        n_terms.to_string(),
    ];
    let mut lines = vec![
        SCHEMA_LINE.to_string(),
        cols.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
    ];
    let mut row = |kind: &str, hval: &str, mval: &str, re: &str, im: &str, ab: &str, value: &str, md: &str| {
        let mut fields = vec![kind.to_string()];
        fields.extend(base.iter().cloned());
        fields.extend([hval, mval, re, im, ab, value, md].map(str::to_string));
        lines.push(csv_row(&fields));
    };

    for (i, s) in shifts.iter().enumerate() {
        row(
            "shift",
            &(i as u64 + 1).to_string(),
            "",
            &fmt_f(s.re),
            &fmt_f(s.im),
            &fmt_f(s.norm()),
            "",
            mode,
        );
    }
    let avg_mode = |sampled: bool| if sampled { "sampled" } else { "exhaustive" };
    let h_str = h_max.to_string();
    row("U", &h_str, "2", "", "", "", &fmt_f(u2.value), avg_mode(u2.sampled));
    if let (Some(u), Some(v)) = (um, vm) {
        let ms = m.to_string();
        row("U", &h_str, &ms, "", "", "", &fmt_f(u.value), avg_mode(u.sampled));
        row("V", &h_str, &ms, "", "", "", &fmt_f(v.value), avg_mode(v.sampled));
    }
    row("T", &h_str, "", "", "", "", &fmt_f(t_h), "exact");
    row(
        "bound_b1",
        &h_str,
        "",
        "",
        "",
        "",
        &fmt_opt(b1),
        if b1.is_some() { "ok" } else { "inapplicable" },
    );
    row(
        "bound_b2",
        &h_str,
        "",
        "",
        "",
        "",
        &fmt_opt(b2),
        if b2.is_some() { "ok" } else { "inapplicable" },
    );
    if let Some((count, rhs)) = exc {
        row("exceptional", &h_str, "", "", "", "", &count.to_string(), "exact");
        row(
            "exceptional_rhs",
            &h_str,
            "",
            "",
            "",
            "",
            &fmt_opt(rhs),
            if rhs.is_some() { "ok" } else { "inapplicable" },
        );
    }

    let text = lines.join("\n") + "\n";
    if json {
        let value = json!({
            "schema": 1,
            "context": context_json(&info),
            "n_terms": n_terms,
            "h_max": h_max,
            "mode": mode,
            "conj": conj,
            "shifts": shifts.iter().enumerate().map(|(i, s)| json!({
                "h": i as u64 + 1, "re": s.re, "im": s.im, "abs": s.norm(),
            })).collect::<Vec<_>>(),
            "u2": {"value": u2.value, "sampled": u2.sampled, "tuples": u2.tuples},
            "um": um.map(|u| json!({"m": m, "value": u.value, "sampled": u.sampled})),
            "vm": vm.map(|v| json!({"m": m, "value": v.value, "sampled": v.sampled})),
            "t_h": t_h,
            "bound_b1": b1,
            "bound_b2": b2,
            "exceptional": exc.map(|(c, rhs)| json!({"delta": delta, "count": c, "rhs": rhs})),
        });
        if out.is_some() {
            write_text(&out, &text)?;
        }
        write_json_mirror(&out, &value)?;
    } else {
        write_text(&out, &text)?;
    }
    eprintln!(
        "corr: R={r} N={n_terms} H={h_max} mode={mode} elapsed={:.3}s",
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

fn optional_bound<T>(r: Result<T, CorrError>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(CorrError::RTooSmallForBounds { .. }) => Ok(None),
        Err(e) => Err(corr_err(e)),
    }
}

fn context_json(info: &psicorr::SeqInfo) -> serde_json::Value {
    json!({
        "p": info.p, "a": info.a, "b": info.b,
        "px": info.px, "py": info.py,
        "ord_p": info.ord_p, "d": info.d, "r": info.r,
    })
}

pub fn cmd_spectrum(
    args: &ContextArgs,
    c3: f64,
    out: Option<PathBuf>,
    json: bool,
) -> Result<(), CliError> {
    let started = Instant::now();
    let res = resolve(args)?;
    let seq = res.seq;
    let info = *seq.info();
    let r = info.r;
    let spec = seq.spectrum();
    let budget = spectrum_budget(info.p, r, c3);
    let sum_sq: f64 = spec.iter().map(|s| s.norm_sqr()).sum();
    let expected = (r * info.d * (info.ord_p - 1)) as f64;
    let parseval_ok = (sum_sq - expected).abs() <= 1e-6 * expected.max(1.0);

    let mut lines = vec![
        SCHEMA_LINE.to_string(),
        "row,a,abs,value,expected,mode".to_string(),
    ];
    for (i, s) in spec.iter().enumerate() {
        lines.push(csv_row(&[
            "spec".into(),
            (i as u64 + 1).to_string(),
            fmt_f(s.norm()),
            String::new(),
            String::new(),
            String::new(),
        ]));
    }
    lines.push(csv_row(&[
        "budget".into(),
        String::new(),
        String::new(),
        fmt_opt(budget),
        String::new(),
        if budget.is_some() { "ok" } else { "inapplicable" }.into(),
    ]));
    lines.push(csv_row(&[
        "parseval".into(),
        String::new(),
        String::new(),
        fmt_f(sum_sq),
        fmt_f(expected),
        if parseval_ok { "ok" } else { "fail" }.into(),
    ]));
    let text = lines.join("\n") + "\n";
    if json {
        let value = json!({
            "schema": 1,
            "context": context_json(&info),
            "abs": spec.iter().map(|s| s.norm()).collect::<Vec<_>>(),
            "budget": budget,
            "parseval": {"sum_sq": sum_sq, "expected": expected, "ok": parseval_ok},
        });
        if out.is_some() {
            write_text(&out, &text)?;
        }
        write_json_mirror(&out, &value)?;
    } else {
        write_text(&out, &text)?;
    }
    eprintln!(
        "spectrum: R={r} elapsed={:.3}s",
        started.elapsed().as_secs_f64()
    );
    if parseval_ok {
        Ok(())
    } else {
        Err(CliError::Verify)
    }
}
