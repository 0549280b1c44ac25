//! Single-shot computations for `nclp demo <name> --input FILE`.

use nclp::decomp::{default_epsilons, douglas_divide, epsilon_ladder, polar_left, polar_right};
use nclp::lpspace::{comultiply, holder_witness, lnorm};
use nclp::matcore::operator_norm;
use nclp::weights::{cocycle_identity_check, connes_cocycle, pushforward_weight};
use nclp::{Element, OperatorValuedWeight, Tolerances};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::io::{parse, ComplexDto, ElementDto, GradedDto, WeightDto};

pub const DEMOS: [&str; 6] = ["holder", "polar", "douglas", "comultiply", "cocycle", "pushforward"];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HolderInput {
    x: GradedDto,
    y: GradedDto,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolarInput {
    x: GradedDto,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DouglasInput {
    x: ElementDto,
    y: ElementDto,
    #[serde(default = "default_steps")]
    ladder_steps: usize,
}

fn default_steps() -> usize {
    12
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComultiplyInput {
    zeta: GradedDto,
    split: [ComplexDto; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleInput {
    mu: WeightDto,
    nu: WeightDto,
    a: ComplexDto,
    #[serde(default = "zero")]
    b: ComplexDto,
}

fn zero() -> ComplexDto {
    ComplexDto([0.0, 0.0])
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PushforwardInput {
    mu: WeightDto,
    multiplicities: Vec<Vec<usize>>,
}

fn el(x: &Element) -> Value {
    json!(ElementDto::from(x))
}

/// Runs demo `name` on the JSON document `input`.
pub fn run_demo(name: &str, input: &str) -> Result<Value, CliError> {
    let tol = Tolerances::default();
    let echo: Value = parse(input)?;
    let output = match name {
        "holder" => holder(parse(input)?, &tol)?,
        "polar" => polar(parse(input)?, &tol)?,
        "douglas" => douglas(parse(input)?, &tol)?,
        "comultiply" => comultiply_demo(parse(input)?, &tol)?,
        "cocycle" => cocycle(parse(input)?, &tol)?,
        "pushforward" => pushforward(parse(input)?, &tol)?,
        other => return Err(CliError::Parse(format!("unknown demo {other:?}; expected one of {DEMOS:?}"))),
    };
    Ok(json!({ "demo": name, "input": echo, "output": output }))
}

fn holder(inp: HolderInput, tol: &Tolerances) -> Result<Value, CliError> {
    let x = inp.x.to_graded()?;
    let y = inp.y.to_graded()?;
    let xy = x.gmul(&y)?;
    let lhs = lnorm(&xy);
    let rhs = lnorm(&x) * lnorm(&y);
    let mut out = json!({
        "product": GradedDto::from(&xy),
        "lhs": lhs,
        "rhs": rhs,
        "margin": rhs - lhs,
    });
    if !x.is_imaginary() && !x.data().is_zero() {
        let w = holder_witness(&x, y.grading(), tol)?;
        let ratio = lnorm(&x.gmul(&w)?) / (lnorm(&x) * lnorm(&w));
        out["witness"] = json!({ "y": GradedDto::from(&w), "equality_ratio": ratio });
    }
    Ok(out)
}

fn polar(inp: PolarInput, tol: &Tolerances) -> Result<Value, CliError> {
    let xi = inp.x.to_graded()?;
    let x = xi.data();
    let r = polar_right(x, tol);
    let l = polar_left(x, tol);
    let n = operator_norm(x);
    Ok(json!({
        "right": { "isometry": el(&r.isometry), "positive": el(&r.positive) },
        "left": { "isometry": el(&l.isometry), "positive": el(&l.positive) },
        "isometry_grading": ComplexDto([0.0, xi.grading().im]),
        "positive_grading": ComplexDto([xi.grading().re, 0.0]),
        "reconstruction_residual": operator_norm(&(&r.reconstruct() - x)),
        "left_reconstruction_residual": operator_norm(&(&l.reconstruct() - x)),
        "isometry_difference": operator_norm(&(&r.isometry - &l.isometry)),
        "operator_norm": n,
        "lnorm": lnorm(&xi),
    }))
}

fn douglas(inp: DouglasInput, tol: &Tolerances) -> Result<Value, CliError> {
    let x = inp.x.to_element()?;
    let y = inp.y.to_element()?;
    let div = douglas_divide(&x, &y, tol)?;
    let ladder = epsilon_ladder(&x, &y, &default_epsilons(&x, inp.ladder_steps), tol)?;
    Ok(json!({
        "quotient": el(&div.quotient),
        "minimal_c": div.minimal_c,
        "residual": div.residual,
        "ladder": { "epsilons": ladder.epsilons, "residuals": ladder.residuals, "monotone": ladder.is_monotone(tol.eq_abs) },
    }))
}

fn comultiply_demo(inp: ComultiplyInput, tol: &Tolerances) -> Result<Value, CliError> {
    let zeta = inp.zeta.to_graded()?;
    let (a, b) = (inp.split[0].to_c64(), inp.split[1].to_c64());
    let (x, y) = comultiply(&zeta, a, b, tol)?;
    let back = x.gmul(&y)?;
    Ok(json!({
        "left": GradedDto::from(&x),
        "right": GradedDto::from(&y),
        "left_norm": lnorm(&x),
        "right_norm": lnorm(&y),
        "norm_product": lnorm(&x) * lnorm(&y),
        "norm": lnorm(&zeta),
        "roundtrip_residual": lnorm(&back.sub(&zeta)?),
    }))
}

fn cocycle(inp: CocycleInput, tol: &Tolerances) -> Result<Value, CliError> {
    let mu = inp.mu.to_weight(tol)?;
    let nu = inp.nu.to_weight(tol)?;
    let (a, b) = (inp.a.to_c64(), inp.b.to_c64());
    let u = connes_cocycle(&mu, &nu, a, tol)?;
    let report = cocycle_identity_check(&mu, &nu, a, b, tol)?;
    Ok(json!({
        "cocycle": el(&u),
        "identity": { "residual": report.max_residual, "tolerance": report.tolerance, "passed": report.passed },
    }))
}

fn pushforward(inp: PushforwardInput, tol: &Tolerances) -> Result<Value, CliError> {
    let mu = inp.mu.to_weight(tol)?;
    let t = OperatorValuedWeight::from_multiplicities(mu.algebra(), &inp.multiplicities, tol)?;
    let pushed = pushforward_weight(&mu, &t, tol)?;
    Ok(json!({
        "source_block_dims": t.source().block_dims(),
        "weight": WeightDto::from(&pushed),
        "faithful": pushed.is_faithful(),
    }))
}
