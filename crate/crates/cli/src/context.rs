//! Resolves command-line curve/point/character flags into a ready
//! (EdsContext, Character, CharSeq) triple.

use crate::{CliError, ContextArgs};
use psicorr::character::CharError;
use psicorr::corr::CorrError;
use psicorr::curve::{CurveError, DEFAULT_ENUM_CAP};
use psicorr::divpoly::EdsError;
use psicorr::field::FieldError;
use psicorr::{CharSeq, Character, Curve, EdsContext, PrimeField};

/// Point-enumeration cap; override with the EDS_ENUM_CAP env var when a
/// curve has more than a million points.
pub fn enum_cap() -> Result<u64, CliError> {
    match std::env::var("EDS_ENUM_CAP") {
        Err(_) => Ok(DEFAULT_ENUM_CAP),
        Ok(s) => s
            .parse::<u64>()
            .map_err(|_| CliError::Config(format!("EDS_ENUM_CAP = {s:?} is not an integer"))),
    }
}

pub struct Resolved {
    pub seq: CharSeq,
    pub group_order: u64,
}

fn field_err(e: FieldError) -> CliError {
    CliError::Config(e.to_string())
}

fn curve_err(e: CurveError) -> CliError {
    match e {
        CurveError::EnumCapExceeded { .. } => CliError::NoResult(e.to_string()),
        _ => CliError::Config(e.to_string()),
    }
}

fn eds_err(e: EdsError) -> CliError {
    CliError::Config(e.to_string())
}

fn char_err(e: CharError) -> CliError {
    CliError::Config(e.to_string())
}

/// Maps engine errors surfaced by a command body: a blown tuple budget
/// asks for a config change (add sample=), everything else is a range
/// or no-result condition.
pub fn corr_err(e: CorrError) -> CliError {
    match e {
        CorrError::TupleBudgetExceeded { .. } => CliError::Config(e.to_string()),
        _ => CliError::NoResult(e.to_string()),
    }
}

pub fn resolve(args: &ContextArgs) -> Result<Resolved, CliError> {
    let cap = enum_cap()?;
    let field = PrimeField::new(args.p).map_err(field_err)?;
    let curve = Curve::new(field, field.elem(args.a), field.elem(args.b)).map_err(curve_err)?;
    let group_order = curve.group_order(cap).map_err(curve_err)?;
    let (point, ord_p) = match (args.px, args.py) {
        (Some(x), Some(y)) => {
            let pt = curve.point(x, y).map_err(curve_err)?;
            let ord = curve.point_order(&pt, group_order);
            (pt, ord)
        }
        _ => curve
            .find_point_min_order(args.min_order, cap)
            .map_err(curve_err)?
            .ok_or_else(|| {
                CliError::NoResult(format!(
                    "no point of order >= {} on y^2 = x^3 + {}x + {} over F_{}",
                    args.min_order, args.a, args.b, args.p
                ))
            })?,
    };
    let ctx = EdsContext::new(curve, point, ord_p).map_err(eds_err)?;
    let chi =
        Character::build_twisted(field, args.char_order, args.twist).map_err(char_err)?;
    let seq = CharSeq::build(&ctx, &chi);
    Ok(Resolved { seq, group_order })
}

pub fn cmd_find(args: &ContextArgs) -> Result<(), CliError> {
    let res = resolve(args)?;
    let info = *res.seq.info();
    println!("p={} a={} b={}", info.p, info.a, info.b);
    println!("group_order={}", res.group_order);
    println!("px={} py={}", info.px, info.py);
    println!("ord_p={}", info.ord_p);
    println!("d={} twist={}", info.d, args.twist);
    println!("r={}", info.r);
    Ok(())
}
