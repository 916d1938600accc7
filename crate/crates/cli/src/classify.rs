use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use vortex_core::moduli::{
    bubble_criterion, classify_limit_d1, classify_stratum, BubbleSequence, D1Class,
    D1LimitInput, D1Sample, ExtReal,
};

use crate::{report, CliError};

#[derive(Deserialize)]
struct CoordsFile {
    n: usize,
    d: usize,
    coords: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct D1File {
    a: Vec<[f64; 2]>,
    b: Vec<[f64; 2]>,
    #[serde(default)]
    ratio_limit: Option<serde_json::Value>,
    #[serde(default)]
    samples: Vec<D1SampleFile>,
}

#[derive(Deserialize)]
struct D1SampleFile {
    a: Vec<[f64; 2]>,
    b: Vec<[f64; 2]>,
    w: [f64; 2],
}

fn complex_vec(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

fn pairs_of(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

/// Dispatch on the file shape: Uhlenbeck coords, d1-limit data, or a
/// bubble sequence. The verdict JSON always carries its evidence series.
pub fn run(input_file: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(input_file)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", input_file.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("classify JSON: {e}")))?;

    let output = if value.get("coords").is_some() {
        classify_coords(&text)?
    } else if value.get("a").is_some() {
        classify_d1(&text)?
    } else if value.get("samples").is_some() {
        classify_bubble(&text)?
    } else {
        return Err(CliError::input(
            "unrecognized classify input: expected 'coords', 'a'/'b', or 'samples'",
        ));
    };
    println!("{output}");
    Ok(())
}

fn classify_coords(text: &str) -> Result<String, CliError> {
    let file: CoordsFile =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("coords file: {e}")))?;
    let point = classify_stratum(file.n, file.d, &complex_vec(&file.coords))?;
    Ok(report::to_json(&serde_json::json!({
        "type": "uhlenbeck",
        "n": point.n,
        "d": point.d,
        "stratum_k": point.stratum_k,
        "primary": pairs_of(&point.primary.coords),
    })))
}

fn classify_d1(text: &str) -> Result<String, CliError> {
    let file: D1File =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("d1-limit file: {e}")))?;
    let ratio_limit = match &file.ratio_limit {
        None => None,
        Some(serde_json::Value::Number(x)) => Some(ExtReal::Finite(
            x.as_f64()
                .ok_or_else(|| CliError::input("ratio_limit is not a finite number"))?,
        )),
        Some(serde_json::Value::String(s)) if s == "inf" => Some(ExtReal::Infinite),
        Some(other) => {
            return Err(CliError::input(format!(
                "ratio_limit must be a number or \"inf\", got {other}"
            )))
        }
    };
    let input = D1LimitInput {
        a: complex_vec(&file.a),
        b: complex_vec(&file.b),
        ratio_limit,
        samples: file
            .samples
            .iter()
            .map(|s| D1Sample {
                a: complex_vec(&s.a),
                b: complex_vec(&s.b),
                w: Complex64::new(s.w[0], s.w[1]),
            })
            .collect(),
    };
    let verdict = classify_limit_d1(&input)?;
    let stratum = match verdict.class {
        D1Class::T1 => "T1",
        D1Class::T2 => "T2",
        D1Class::S => "S",
    };
    Ok(report::to_json(&serde_json::json!({
        "type": "d1_limit",
        "stratum": stratum,
        "tangent": verdict.tangent.as_deref().map(pairs_of),
        "ratio_series": verdict.ratio_series,
    })))
}

fn classify_bubble(text: &str) -> Result<String, CliError> {
    let seq = BubbleSequence::from_json(text)?;
    let rep = bubble_criterion(&seq)?;
    Ok(report::to_json(&serde_json::json!({
        "type": "bubble",
        "verdict": rep.verdict,
        "trivial_by_convention": rep.trivial_by_convention,
        "w_partition": rep.w_partition,
        "t_series": rep.t_series,
        "T_series": rep.big_t_series,
        "ratio_series": rep.ratio_series,
    })))
}
