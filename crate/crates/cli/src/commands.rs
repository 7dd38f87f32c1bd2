use std::io::Write;

use bvis_core::counting::{count_in_box, enumerate_visible, rational_box};
use bvis_core::verify::{self, Profile};
use bvis_core::visibility::{oracle_witness_parametric, witness_int, witness_rat, witness_signed};
use bvis_core::{
    density_report, inv_zeta, is_visible_int, is_visible_rat, is_visible_signed,
    zeta_euler_product, BigUint as Big, BoxSpec, Case, DensityReport, Error, ErrorKind, Exponents,
    LatticePoint, Natural, RationalExponentVector, RationalPoint, Result,
};
use serde_json::{json, Map, Value};

use crate::output::{emit, to_record, Format, ReportRow};
use crate::spec::{parse_b, parse_natural, parse_tuple, resolve_case};
use crate::Failure;

type Record = Map<String, Value>;

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn tuple(v: &Value) -> String {
    let items: Vec<String> = v
        .as_array()
        .map(|a| {
            a.iter()
                .map(|x| x.as_str().map_or_else(|| x.to_string(), str::to_string))
                .collect()
        })
        .unwrap_or_default();
    format!("({})", items.join(","))
}

fn record(v: Value) -> Record {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("records are objects"),
    }
}

fn setup(b_spec: &str, requested: Option<Case>) -> Result<(Exponents, Case)> {
    let b = parse_b(b_spec)?;
    let case = resolve_case(&b, requested)?;
    Ok((b, case))
}

fn warn_reduction(b: &Exponents, case: Case) {
    if case != Case::Integer {
        return;
    }
    if let Some(v) = b.to_rational().as_integer() {
        if v.gcd() > 1 {
            eprintln!(
                "warning: b={v} has gcd {}; visibility is unchanged by dividing it out, using b'={}",
                v.gcd(),
                v.reduced()
            );
        }
    }
}

pub fn check(
    out: &mut impl Write,
    b_spec: &str,
    requested: Option<Case>,
    point: &str,
    expanded: bool,
    oracle_limit: u64,
    format: Format,
) -> Result<(), Failure> {
    let (b, case) = setup(b_spec, requested)?;
    let coords = parse_tuple(point, "point coordinate")?;
    let mut rec = record(json!({
        "b": b.entry_strings(),
        "case": case.as_str(),
        "point": strings(&coords),
    }));
    match case {
        Case::Integer => {
            let v = b
                .to_rational()
                .as_integer()
                .expect("checked by resolve_case");
            let pt = LatticePoint::new(coords)?;
            let w = witness_int(&pt, &v)?;
            rec.insert("visible".into(), json!(w.is_none()));
            rec.insert(
                "witness".into(),
                json!(w.as_ref().map(|w| w.prime.to_string())),
            );
            rec.insert("image".into(), json!(w.as_ref().map(|w| strings(&w.image))));
            // The oracle is a brute-force search; past its budget it is skipped.
            let oracle = match oracle_witness_parametric(&pt, &v, oracle_limit) {
                Ok(img) => json!(img.map(|i| strings(&i))),
                Err(e) if e.kind() == ErrorKind::Resource => Value::Null,
                Err(e) => return Err(e.into()),
            };
            rec.insert("oracle_image".into(), oracle);
        }
        Case::Rational | Case::Signed => {
            let r = b.to_rational();
            let l = if expanded {
                RationalPoint::from_expanded(&LatticePoint::new(coords)?, &r)?
            } else {
                RationalPoint::new(coords)?
            };
            let w = if case == Case::Rational {
                witness_rat(&l, &r)?
            } else {
                witness_signed(&l, &r)?
            };
            rec.insert("base".into(), json!(strings(l.base())));
            rec.insert("expanded".into(), json!(strings(l.expanded(&r).coords())));
            rec.insert("visible".into(), json!(w.is_none()));
            rec.insert(
                "witness".into(),
                json!(w.as_ref().map(|w| w.prime.to_string())),
            );
            rec.insert("image".into(), json!(w.as_ref().map(|w| strings(&w.image))));
        }
    }
    emit(out, &[rec], format, plain_check)?;
    Ok(())
}

fn plain_check(r: &Record) -> String {
    if r["visible"].as_bool() == Some(true) {
        return "visible".into();
    }
    let mut s = format!(
        "invisible\nwitness p={}\nimage {}",
        r["witness"].as_str().unwrap_or("?"),
        tuple(&r["image"])
    );
    if let Some(o) = r.get("oracle_image").filter(|o| !o.is_null()) {
        s.push_str(&format!("\noracle image {}", tuple(o)));
    }
    s
}

/// Runs `f` with `N` as `u64` when it fits, otherwise as `BigUint`.
fn with_n<R>(n: &Big, f: impl FnOnce(&dyn NaturalInput) -> R) -> R {
    match u64::try_from(n) {
        Ok(small) => f(&small),
        Err(_) => f(n),
    }
}

/// Object-safe subset of the generic entry points.
trait NaturalInput {
    fn report(&self, b: &Exponents, case: Case) -> Result<DensityReport>;
}

impl<T: Natural> NaturalInput for T {
    fn report(&self, b: &Exponents, case: Case) -> Result<DensityReport> {
        density_report(self, b, case)
    }
}

pub fn count(
    out: &mut impl Write,
    b_spec: &str,
    requested: Option<Case>,
    n: Option<&str>,
    box_edges: Option<&str>,
    format: Format,
) -> Result<(), Failure> {
    let (b, case) = setup(b_spec, requested)?;
    warn_reduction(&b, case);
    let (edges, visible, total) = match (n, box_edges) {
        (Some(n), _) => {
            let n = parse_natural(n, "N")?;
            let r = with_n(&n, |n| n.report(&b, case))?;
            (r.box_spec.edges().to_vec(), r.visible, r.total)
        }
        (None, Some(e)) => {
            let bx = BoxSpec::new(parse_tuple(e, "box edge")?)?;
            let visible = count_in_box(&bx, &b, case)?;
            (bx.edges().to_vec(), visible, bx.total())
        }
        (None, None) => {
            return Err(Error::InvalidInput("one of --N or --box is required".into()).into())
        }
    };
    let rec = record(json!({
        "b": b.entry_strings(),
        "case": case.as_str(),
        "box": strings(&edges),
        "visible": visible.to_string(),
        "total": total.to_string(),
    }));
    emit(out, &[rec], format, |r| {
        let edges: Vec<&str> = r["box"]
            .as_array()
            .unwrap()
            .iter()
            .filter_map(Value::as_str)
            .collect();
        format!(
            "{} of {} points visible in box {}",
            r["visible"].as_str().unwrap(),
            r["total"].as_str().unwrap(),
            edges.join("x")
        )
    })?;
    Ok(())
}

pub fn density(
    out: &mut impl Write,
    b_spec: &str,
    requested: Option<Case>,
    n: &str,
    format: Format,
) -> Result<(), Failure> {
    let (b, case) = setup(b_spec, requested)?;
    warn_reduction(&b, case);
    let n = parse_natural(n, "N")?;
    let report = with_n(&n, |n| n.report(&b, case))?;
    let row = ReportRow::from(&report);
    emit(out, &[to_record(&row)], format, |_| row.plain())?;
    Ok(())
}

/// Box of the points (or base tuples) that `sieve` lists.
fn sieve_box(n: &Big, b: &Exponents, case: Case) -> Result<BoxSpec<Big>> {
    match case {
        Case::Integer => BoxSpec::cube(n.clone(), b.len()),
        Case::Rational | Case::Signed => rational_box(n, &b.to_rational()),
    }
}

fn box_to_u64(bx: &BoxSpec<Big>, limit: u64) -> Result<BoxSpec<u64>> {
    let total = bx.total();
    if total > Big::from(limit) {
        return Err(Error::Resource {
            what: "box size",
            requested: total.to_string(),
            limit: limit.to_string(),
        });
    }
    BoxSpec::new(
        bx.edges()
            .iter()
            .map(|e| u64::try_from(e).expect("edge within limit"))
            .collect(),
    )
}

pub fn sieve(
    out: &mut impl Write,
    b_spec: &str,
    requested: Option<Case>,
    n: &str,
    limit: u64,
    format: Format,
) -> Result<(), Failure> {
    let (b, case) = setup(b_spec, requested)?;
    warn_reduction(&b, case);
    let n = parse_natural(n, "N")?;
    let bx = box_to_u64(&sieve_box(&n, &b, case)?, limit)?;
    let records: Vec<Record> = match case {
        Case::Integer => {
            let v = b
                .to_rational()
                .as_integer()
                .expect("checked by resolve_case");
            // Fail on bad input before enumerating.
            is_visible_int(&LatticePoint::new(vec![1u64; v.len()])?, &v)?;
            enumerate_visible(&bx, limit, |p| {
                LatticePoint::new(p.to_vec())
                    .and_then(|pt| is_visible_int(&pt, &v))
                    .unwrap_or(false)
            })?
            .into_iter()
            .map(|p| record(json!({ "point": strings(&p) })))
            .collect()
        }
        Case::Rational | Case::Signed => {
            let r = b.to_rational();
            let pred = rational_predicate(case, &r);
            pred(&[1u64].repeat(r.len()))?;
            enumerate_visible(&bx, limit, |p| pred(p).unwrap_or(false))?
                .into_iter()
                .map(|p| {
                    let l = RationalPoint::new(p.clone()).expect("box coordinates are positive");
                    record(json!({
                        "point": strings(l.expanded(&r).coords()),
                        "base": strings(&p),
                    }))
                })
                .collect()
        }
    };
    emit(out, &records, format, |r| tuple(&r["point"]))?;
    Ok(())
}

fn rational_predicate<'a>(
    case: Case,
    r: &'a RationalExponentVector,
) -> impl Fn(&[u64]) -> Result<bool> + Sync + 'a {
    move |p: &[u64]| {
        let l = RationalPoint::new(p.to_vec())?;
        if case == Case::Rational {
            is_visible_rat(&l, r)
        } else {
            is_visible_signed(&l, r)
        }
    }
}

pub fn zeta(
    out: &mut impl Write,
    s: u32,
    tol: f64,
    prime_limit: Option<u64>,
    format: Format,
) -> Result<(), Failure> {
    let z = bvis_core::zeta(s, tol)?;
    let inv: f64 = inv_zeta(s, tol)?;
    let mut rec = record(json!({
        "s": s,
        "value": z.value,
        "upper": z.upper(),
        "tail_bound": z.tail_bound,
        "terms": z.terms,
        "inv_zeta": inv,
    }));
    if let Some(p) = prime_limit {
        let e: f64 = zeta_euler_product(s, p)?;
        rec.insert("prime_limit".into(), json!(p));
        rec.insert("euler_product".into(), json!(e));
    }
    emit(out, &[rec], format, |r| {
        let mut s = format!(
            "zeta({}) in [{:.15}, {:.15}]  ({} terms)\n1/zeta({}) = {:.15}",
            r["s"],
            r["value"].as_f64().unwrap(),
            r["upper"].as_f64().unwrap(),
            r["terms"],
            r["s"],
            r["inv_zeta"].as_f64().unwrap()
        );
        if let Some(e) = r.get("euler_product") {
            s.push_str(&format!(
                "\neuler product to {} = {:.15}",
                r["prime_limit"],
                e.as_f64().unwrap()
            ));
        }
        s
    })?;
    Ok(())
}

pub fn verify(
    out: &mut impl Write,
    profile: Profile,
    seed: u64,
    format: Format,
) -> Result<(), Failure> {
    let reports = verify::run(profile, seed);
    let failed = reports.iter().filter(|r| !r.passed).count();
    match format {
        Format::Plain => {
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            writeln!(
                out,
                "{}/{} checks passed",
                reports.len() - failed,
                reports.len()
            )?;
        }
        _ => {
            let records: Vec<Record> = reports
                .iter()
                .map(|r| {
                    record(json!({
                        "id": r.id,
                        "name": r.name,
                        "passed": r.passed,
                        "elapsed_s": r.elapsed.as_secs_f64(),
                        "detail": r.detail,
                    }))
                })
                .collect();
            emit(out, &records, format, |_| String::new())?;
        }
    }
    if failed > 0 {
        return Err(Failure::Checks(failed));
    }
    Ok(())
}
