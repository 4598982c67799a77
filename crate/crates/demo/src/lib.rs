//! Browser bindings. Every export takes plain numbers and strings and returns
//! a JSON document for the page to draw.

use gsign::simgen::{
    build_covariance, draw_sample, power_study, CovarianceSpec, Design, Distribution, MeanKind,
    MeanSpec, ScenarioSpec,
};
use gsign::{
    build_gram, one_sample_stat, rademacher_null, randomization_pvalue, sign_transform, DataMatrix,
    KernelSpec, ScalingKind, ScalingSpec, StreamKey, TestConfig,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

type Result<T> = std::result::Result<T, gsign::Error>;

fn kernel(degree: u32) -> Result<KernelSpec> {
    if degree <= 1 {
        Ok(KernelSpec::Linear)
    } else {
        KernelSpec::polynomial(1.0, degree)
    }
}

fn covariance(name: &str) -> Result<CovarianceSpec> {
    match name {
        "ar" => Ok(CovarianceSpec::ar()),
        "sar" => Ok(CovarianceSpec::sar()),
        other => Err(gsign::Error::InvalidArgument(format!(
            "unknown covariance '{other}'"
        ))),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(value)?)
}

#[derive(Serialize)]
struct Geometry {
    points: Vec<[f64; 2]>,
    signs: Vec<[f64; 2]>,
    active: Vec<bool>,
}

/// Draws `n` correlated 2-d points and maps them to generalized signs.
pub fn sign_geometry_json(
    n: usize,
    rho: f64,
    scaling: &str,
    threshold: f64,
    seed: u64,
) -> Result<String> {
    let kind: ScalingKind = scaling.parse()?;
    let cov = CovarianceSpec {
        rho,
        ..CovarianceSpec::ar()
    };
    let cov = build_covariance(&cov, 2)?;
    let x = draw_sample(
        Distribution::T3,
        &[0.0, 0.0],
        &cov,
        n,
        &mut StreamKey::new(seed).rng(),
    )?;
    let signs = sign_transform(&x, &ScalingSpec::new(kind, threshold)?);
    to_json(&Geometry {
        points: x.rows().map(|r| [r[0], r[1]]).collect(),
        signs: signs.rows().map(|r| [r[0], r[1]]).collect(),
        active: signs.active_mask().to_vec(),
    })
}

#[derive(Serialize)]
struct NullView {
    statistic: f64,
    p_value: f64,
    reject: bool,
    null: Vec<f64>,
}

/// Simulates one AR dataset with a dense shift `delta` and runs the
/// one-sample test, returning the observed statistic and its null sample.
#[allow(clippy::too_many_arguments)]
pub fn one_sample_json(
    n: usize,
    p: usize,
    delta: f64,
    scaling: &str,
    degree: u32,
    resamples: usize,
    seed: u64,
) -> Result<String> {
    let kind: ScalingKind = scaling.parse()?;
    let k = kernel(degree)?;
    let cov = build_covariance(&CovarianceSpec::ar(), p)?;
    let mean = MeanSpec::new(MeanKind::Dense, delta).vector(p);
    let x: DataMatrix = draw_sample(
        Distribution::T3,
        &mean,
        &cov,
        n,
        &mut StreamKey::new(seed).rng(),
    )?;
    let gram = build_gram(&sign_transform(
        &x,
        &ScalingSpec::with_default_threshold(kind, n, p),
    ));
    let statistic = one_sample_stat(&gram, &k)?;
    let null = rademacher_null(&gram, &k, resamples, seed)?;
    let result = randomization_pvalue(statistic, null, 0.05)?;
    to_json(&NullView {
        statistic,
        p_value: result.p_value,
        reject: result.reject,
        null: result.null.statistics,
    })
}

#[derive(Serialize)]
struct Curve {
    scaling: String,
    deltas: Vec<f64>,
    power: Vec<f64>,
}

/// Small one-sample power curve for each norm on the given shifts.
#[allow(clippy::too_many_arguments)]
pub fn power_curves_json(
    n: usize,
    p: usize,
    covariance_name: &str,
    mean: &str,
    deltas: &[f64],
    replications: usize,
    resamples: usize,
    seed: u64,
) -> Result<String> {
    let mean_kind = match mean {
        "sparse" => MeanKind::Sparse,
        "dense" => MeanKind::Dense,
        other => {
            return Err(gsign::Error::InvalidArgument(format!(
                "unknown mean '{other}'"
            )))
        }
    };
    let cov = covariance(covariance_name)?;
    let curves = ScalingKind::NORMS
        .into_iter()
        .map(|kind| {
            let spec = ScenarioSpec {
                distribution: Distribution::T3,
                covariance: cov,
                design: Design::OneSample {
                    n,
                    mean: MeanSpec::new(mean_kind, 0.0),
                },
                p,
                deltas: deltas.to_vec(),
                test: TestConfig {
                    resamples,
                    ..TestConfig::new(kind, KernelSpec::Linear)
                },
                replications,
                master_seed: seed,
            };
            let table = power_study(&spec, None)?;
            Ok(Curve {
                scaling: kind.to_string(),
                deltas: table.rows.iter().map(|r| r.delta).collect(),
                power: table.rows.iter().map(|r| r.randomization.power).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    to_json(&curves)
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn sign_geometry(
    n: usize,
    rho: f64,
    scaling: &str,
    threshold: f64,
    seed: u32,
) -> std::result::Result<String, JsError> {
    js(sign_geometry_json(n, rho, scaling, threshold, seed.into()))
}

#[wasm_bindgen]
pub fn one_sample(
    n: usize,
    p: usize,
    delta: f64,
    scaling: &str,
    degree: u32,
    resamples: usize,
    seed: u32,
) -> std::result::Result<String, JsError> {
    js(one_sample_json(
        n,
        p,
        delta,
        scaling,
        degree,
        resamples,
        seed.into(),
    ))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn power_curves(
    n: usize,
    p: usize,
    covariance: &str,
    mean: &str,
    deltas: Vec<f64>,
    replications: usize,
    resamples: usize,
    seed: u32,
) -> std::result::Result<String, JsError> {
    js(power_curves_json(
        n,
        p,
        covariance,
        mean,
        &deltas,
        replications,
        resamples,
        seed.into(),
    ))
}
