use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;

use vortex_core::moduli::{bubble_criterion, BubbleSample, BubbleSequence, BubbleZero};
use vortex_core::poly::{normalize_cstar, NPair, NPairJson};
use vortex_core::vortex::{observables, Observables, VortexSolution};

use crate::{config, report, Cli, CliError, GridArgs};

#[derive(Deserialize)]
struct FamilyFile {
    samples: Vec<FamilySample>,
}

#[derive(Deserialize)]
struct FamilySample {
    lambda: f64,
    z: [f64; 2],
    pair: NPairJson,
}

struct Member {
    lambda: f64,
    z: Complex64,
    original: NPair,
    rescaled: NPair,
}

struct SampleOutcome {
    observables: Option<Observables>,
    h: Option<vortex_core::grid::ScalarField>,
    error: Option<String>,
}

pub fn run(cli: &Cli, family_file: &Path, grid_args: &GridArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let text = std::fs::read_to_string(family_file)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", family_file.display())))?;
    let family: FamilyFile =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("family JSON: {e}")))?;
    if family.samples.is_empty() {
        return Err(CliError::input("family lists no samples"));
    }
    let mut prev_lambda = 0.0;
    let members: Vec<Member> = family
        .samples
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            if !s.lambda.is_finite() || s.lambda <= prev_lambda {
                return Err(CliError::input(format!(
                    "sample {k}: λ must be positive and strictly increasing"
                )));
            }
            prev_lambda = s.lambda;
            let original = NPair::try_from(s.pair)?;
            let z = Complex64::new(s.z[0], s.z[1]);
            // Recentre at z_k, rescale by λ_k, and take the canonical C*
            // representative so consecutive fields are comparable.
            let rescaled = normalize_cstar(&original.zoomed(z, s.lambda)).to_pair()?;
            Ok(Member {
                lambda: s.lambda,
                z,
                original,
                rescaled,
            })
        })
        .collect::<Result<_, CliError>>()?;

    let file_cfg = config::load(cli.config.as_deref())?;
    let solver_cfg = config::resolve_solver(&file_cfg, grid_args)?;
    // One grid for the whole sweep, sized by the member closest to the
    // limit vortex.
    let last = members.last().expect("nonempty");
    let grid = config::resolve_grid(&last.rescaled, &file_cfg, grid_args)?;

    // Fan the solves out over worker threads; results merge by index.
    let outcomes: Vec<SampleOutcome> = {
        let slots: Mutex<Vec<Option<SampleOutcome>>> =
            Mutex::new((0..members.len()).map(|_| None).collect());
        let cursor = AtomicUsize::new(0);
        let jobs = cli
            .jobs
            .unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|p| p.get())
                    .unwrap_or(1)
            })
            .clamp(1, members.len());
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let k = cursor.fetch_add(1, Ordering::Relaxed);
                    if k >= members.len() {
                        break;
                    }
                    let outcome =
                        match VortexSolution::solve(&members[k].rescaled, &grid, &solver_cfg)
                            .and_then(|sol| observables(&sol).map(|obs| (sol, obs)))
                        {
                            Ok((sol, obs)) => SampleOutcome {
                                observables: Some(obs),
                                h: Some(sol.h().clone()),
                                error: None,
                            },
                            Err(e) => SampleOutcome {
                                observables: None,
                                h: None,
                                error: Some(e.to_string()),
                            },
                        };
                    slots.lock().expect("no poisoned workers")[k] = Some(outcome);
                });
            }
        });
        slots
            .into_inner()
            .expect("workers done")
            .into_iter()
            .map(|o| o.expect("every slot filled"))
            .collect()
    };

    let succeeded = outcomes.iter().filter(|o| o.error.is_none()).count();

    // Sup-norm differences of consecutive rescaled h-fields.
    let h_diffs: Vec<serde_json::Value> = outcomes
        .windows(2)
        .map(|pair| match (&pair[0].h, &pair[1].h) {
            (Some(a), Some(b)) => json!(a.max_diff(b)),
            _ => serde_json::Value::Null,
        })
        .collect();

    let bubble = match build_bubble_sequence(&members) {
        Ok(seq) => match bubble_criterion(&seq) {
            Ok(rep) => json!({
                "verdict": rep.verdict,
                "trivial_by_convention": rep.trivial_by_convention,
                "t_series": rep.t_series,
                "T_series": rep.big_t_series,
                "ratio_series": rep.ratio_series,
            }),
            Err(e) => json!({ "unavailable": e.to_string() }),
        },
        Err(e) => json!({ "unavailable": e }),
    };

    let samples: Vec<serde_json::Value> = outcomes
        .iter()
        .enumerate()
        .map(|(k, o)| {
            json!({
                "index": k,
                "lambda": members[k].lambda,
                "solved": o.error.is_none(),
                "error": o.error,
                "observables": o
                    .observables
                    .as_ref()
                    .map(|obs| serde_json::to_value(obs).expect("observables")),
            })
        })
        .collect();

    let summary = json!({
        "bubble": bubble,
        "h_consecutive_sup_diffs": h_diffs,
        "samples": samples,
    });
    let payload = report::to_json(&summary);
    report::write_atomic(&cli.out.join("sweep_summary.json"), payload.as_bytes())?;
    report::write_meta(
        &cli.out.join("sweep_summary.meta.json"),
        "sweep",
        started.elapsed().as_millis(),
    )?;
    println!("{payload}");

    if succeeded == 0 {
        return Err(CliError {
            code: 3,
            kind: "solver".into(),
            message: "every sample failed to solve".into(),
        });
    }
    Ok(())
}

/// Criterion data from the original (pre-zoom) members: per component the
/// zero list (sorted by distance from z_k for a stable abstract identity)
/// and the modulus of the leading coefficient.
fn build_bubble_sequence(members: &[Member]) -> Result<BubbleSequence, String> {
    if members.len() < 4 {
        return Err("bubble criterion needs at least 4 samples".into());
    }
    let n = members[0].original.n();
    let mut samples = Vec::with_capacity(members.len());
    for member in members {
        if member.original.n() != n {
            return Err("component count changes across samples".into());
        }
        let mut zeros = Vec::with_capacity(n);
        let mut f_abs = Vec::with_capacity(n);
        for poly in member.original.polys() {
            let leading = match poly.leading() {
                Some(c) => c,
                None => return Err("zero component: no zero set to track".into()),
            };
            let mut roots = poly.roots().map_err(|e| e.to_string())?;
            roots.sort_by(|x, y| {
                let dx = ((x - member.z).norm(), (x - member.z).arg());
                let dy = ((y - member.z).norm(), (y - member.z).arg());
                dx.partial_cmp(&dy).expect("finite roots")
            });
            zeros.push(
                roots
                    .into_iter()
                    .map(|rho| BubbleZero { rho, m: 1 })
                    .collect(),
            );
            f_abs.push(leading.norm());
        }
        samples.push(BubbleSample {
            lambda: member.lambda,
            z: member.z,
            zeros,
            f_abs,
        });
    }
    Ok(BubbleSequence { samples })
}
