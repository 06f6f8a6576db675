use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use bochner::curvature::{constant_curvature, random_curvature};
use bochner::pinching::{classify, Margins, SearchOptions, Verdicts, STRICT_MARGIN};
use bochner::weitzenboeck::{bound_form, bound_negative_sym, bound_positive_sym, BoundTag, BOUND_TOL};
use bochner::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    Sphere,
    Hyperbolic,
}

impl Base {
    fn kappa(self) -> f64 {
        match self {
            Base::Sphere => 1.0,
            Base::Hyperbolic => -1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub base: Base,
    pub n: usize,
    pub eps: f64,
    pub count: usize,
    pub seed: u64,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub search: SearchOptions,
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemCheck {
    pub check: String,
    pub vacuous: bool,
    pub margin: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemRecord {
    pub seed: u64,
    pub digest: String,
    pub sec_min: f64,
    pub sec_max: f64,
    pub ric_min: f64,
    pub ric_max: f64,
    pub second_kind_min: f64,
    pub second_kind_max: f64,
    pub verdicts: Verdicts,
    pub margins: Margins,
    pub checks: Vec<ItemCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub seed: u64,
    pub check: String,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Histogram {
    pub samples: usize,
    pub min: f64,
    pub max: f64,
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub base: Base,
    pub n: usize,
    pub eps: f64,
    pub count: usize,
    pub seed: u64,
    pub restarts: usize,
    pub optimizer_tol: f64,
    pub strict_margin: f64,
    pub bound_tolerance: f64,
    /// Non-vacuous evaluations per check.
    pub hypotheses_held: BTreeMap<String, usize>,
    pub violations: Vec<Violation>,
    pub margin_histograms: BTreeMap<String, Histogram>,
    pub items: Vec<ItemRecord>,
}

const BINS: usize = 10;

fn histogram(mut xs: Vec<f64>) -> Histogram {
    xs.sort_by(f64::total_cmp);
    let (min, max) = (xs[0], xs[xs.len() - 1]);
    let width = (max - min) / BINS as f64;
    let edges: Vec<f64> = (0..=BINS).map(|b| if b == BINS { max } else { min + b as f64 * width }).collect();
    let mut counts = vec![0; BINS];
    for x in &xs {
        let b = if width > 0.0 { (((x - min) / width) as usize).min(BINS - 1) } else { 0 };
        counts[b] += 1;
    }
    Histogram { samples: xs.len(), min, max, edges, counts }
}

fn evaluate(cfg: &SweepConfig, seed: u64) -> Result<ItemRecord> {
    let base = constant_curvature(cfg.n, cfg.base.kappa())?;
    let r = random_curvature(cfg.n, seed, Some(&base), cfg.eps)?;
    let rep = classify(&r, cfg.search)?;
    let mut checks = vec![
        ItemCheck {
            check: "positive-pinch-second-kind".into(),
            vacuous: !rep.verdicts.lemma1_strict,
            margin: rep.second_kind_min,
            satisfied: !rep.verdicts.lemma1_strict || rep.second_kind_min > 0.0,
        },
        ItemCheck {
            check: "negative-pinch-second-kind".into(),
            vacuous: !rep.verdicts.lemma2_strict,
            margin: -rep.second_kind_max,
            satisfied: !rep.verdicts.lemma2_strict || rep.second_kind_max < 0.0,
        },
    ];
    let mut push = |c: bochner::weitzenboeck::BoundCheck| {
        checks.push(ItemCheck {
            check: format!("{}:{}", c.bound_tag.as_str(), c.degree),
            vacuous: c.vacuous,
            margin: c.margin,
            satisfied: c.satisfied,
        })
    };
    for &p in &cfg.p {
        push(bound_positive_sym(&r, &rep, p, BoundTag::Eq2_7)?);
        push(bound_negative_sym(&r, &rep, p)?);
    }
    for &q in &cfg.q {
        push(bound_form(&r, &rep, q)?);
    }
    Ok(ItemRecord {
        seed,
        digest: r.digest(),
        sec_min: rep.sec_min,
        sec_max: rep.sec_max,
        ric_min: rep.ric_min,
        ric_max: rep.ric_max,
        second_kind_min: rep.second_kind_min,
        second_kind_max: rep.second_kind_max,
        verdicts: rep.verdicts,
        margins: rep.margins,
        checks,
    })
}

pub fn run(cfg: &SweepConfig) -> Result<SweepSummary> {
    if cfg.count == 0 {
        return Err(Error::InvalidInput("count must be at least 1".into()));
    }
    if cfg.p.iter().any(|&p| p < 2) || cfg.q.iter().any(|&q| q == 0 || q >= cfg.n) {
        return Err(Error::Dimension(format!("need p >= 2 and 1 <= q < n = {}", cfg.n)));
    }
    let seeds: Vec<u64> = (0..cfg.count as u64).map(|i| cfg.seed.wrapping_add(i)).collect();
    let mut items = seeds.par_iter().map(|&s| evaluate(cfg, s)).collect::<Result<Vec<_>>>()?;
    items.sort_by_key(|it| it.seed);

    let mut held: BTreeMap<String, usize> = BTreeMap::new();
    let mut margins: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut violations = Vec::new();
    for it in &items {
        for c in &it.checks {
            if c.vacuous {
                continue;
            }
            *held.entry(c.check.clone()).or_default() += 1;
            margins.entry(c.check.clone()).or_default().push(c.margin);
            if !c.satisfied {
                violations.push(Violation { seed: it.seed, check: c.check.clone(), margin: c.margin });
            }
        }
    }
    Ok(SweepSummary {
        base: cfg.base,
        n: cfg.n,
        eps: cfg.eps,
        count: cfg.count,
        seed: cfg.seed,
        restarts: cfg.search.restarts,
        optimizer_tol: cfg.search.tol,
        strict_margin: STRICT_MARGIN,
        bound_tolerance: BOUND_TOL,
        hypotheses_held: held,
        violations,
        margin_histograms: margins.into_iter().map(|(k, v)| (k, histogram(v))).collect(),
        items,
    })
}
