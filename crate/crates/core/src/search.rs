//! Random prismatoid generation and parallel unfolding scans.
//!
//! Instance `k` of a run with seed `s` draws from ChaCha8 seeded with `s`
//! on stream `k`, so any instance can be replayed on its own.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{is_strictly_convex_ccw, Point2, Tolerance};
use crate::io::{to_json, LayoutJson, PrismatoidJson};
use crate::overlap::{layout_overlaps, Witness};
use crate::prismatoid::Prismatoid;
use crate::svg::{render_svg, RenderStyle};
use crate::unfold::{obtuse_turn_choice, petal_unfold_topless_report, DispatchStats, Layout, PetalChoice, PetalStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeBias {
    Generic,
    /// Height below 1% of the footprint diameter.
    NearFlat,
    /// Near-regular polygons of equal size, slightly twisted.
    DrumLike,
    /// The top is a slightly shrunk copy of the base, giving a thin band.
    Thin,
}

impl ShapeBias {
    pub const ALL: [ShapeBias; 4] = [ShapeBias::Generic, ShapeBias::NearFlat, ShapeBias::DrumLike, ShapeBias::Thin];

    pub fn name(self) -> &'static str {
        match self {
            ShapeBias::Generic => "generic",
            ShapeBias::NearFlat => "near_flat",
            ShapeBias::DrumLike => "drum_like",
            ShapeBias::Thin => "thin",
        }
    }
}

impl std::str::FromStr for ShapeBias {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ShapeBias::ALL
            .into_iter()
            .find(|b| b.name() == s.replace('-', "_"))
            .ok_or_else(|| Error::Malformed(format!("unknown shape bias {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub bias: ShapeBias,
    /// Inclusive vertex-count range of the top.
    pub n_top: (usize, usize),
    /// Inclusive vertex-count range of the base.
    pub n_base: (usize, usize),
    /// Height range as a multiple of the footprint diameter (log-uniform).
    pub z_rel: (f64, f64),
    pub max_retries: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { seed: 0, bias: ShapeBias::Generic, n_top: (3, 12), n_base: (3, 12), z_rel: (1e-3, 10.0), max_retries: 200 }
    }
}

impl GeneratorConfig {
    fn validate(&self) -> Result<()> {
        let ok = self.n_top.0 >= 3
            && self.n_base.0 >= 3
            && self.n_top.0 <= self.n_top.1
            && self.n_base.0 <= self.n_base.1
            && self.z_rel.0 > 0.0
            && self.z_rel.0 <= self.z_rel.1
            && self.z_rel.1.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Malformed(format!("invalid generator configuration {self:?}")))
        }
    }
}

/// The random stream of instance `index`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Heights `10^(-3 + k/2)` times `diameter`, `k = 0..=8`.
pub fn z_grid(diameter: f64) -> Vec<f64> {
    (0..=8).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64) * diameter).collect()
}

/// A strictly convex ccw `n`-gon: a jittered regular polygon, stretched and rotated.
pub fn random_convex_polygon<R: Rng>(rng: &mut R, n: usize, radius: f64, jitter: f64, center: Point2) -> Option<Vec<Point2>> {
    let tol = Tolerance::for_diameter(2.0 * radius);
    let step = std::f64::consts::TAU / n as f64;
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let (sx, sy) = (rng.gen_range(1.0 - jitter..=1.0 + jitter), rng.gen_range(1.0 - jitter..=1.0 + jitter));
    let rot = rng.gen_range(0.0..std::f64::consts::TAU);
    let pts: Vec<Point2> = (0..n)
        .map(|k| {
            let th = phase + step * (k as f64 + rng.gen_range(-0.4 * jitter..=0.4 * jitter));
            let r = radius * (1.0 + rng.gen_range(-0.5 * jitter..=0.5 * jitter));
            center + Point2::new(sx * r * th.cos(), sy * r * th.sin()).rotated(rot)
        })
        .collect();
    is_strictly_convex_ccw(&pts, &tol).then_some(pts)
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

fn draw<R: Rng>(rng: &mut R, cfg: &GeneratorConfig) -> Option<Prismatoid> {
    let nb = rng.gen_range(cfg.n_base.0..=cfg.n_base.1);
    let origin = Point2::default();
    let (top, base) = match cfg.bias {
        ShapeBias::Generic | ShapeBias::NearFlat => {
            let na = rng.gen_range(cfg.n_top.0..=cfg.n_top.1);
            let base = random_convex_polygon(rng, nb, 1.0, 0.6, origin)?;
            let c = Point2::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let r = rng.gen_range(0.15..1.5);
            let top = random_convex_polygon(rng, na, r, 0.6, c)?;
            (top, base)
        }
        ShapeBias::DrumLike => {
            let base = random_convex_polygon(rng, nb, 1.0, 0.06, origin)?;
            let twist = rng.gen_range(-0.8..0.8) * std::f64::consts::PI / nb as f64;
            let shrink = rng.gen_range(0.6..1.0);
            let c = Point2::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05));
            let top: Vec<Point2> = base.iter().map(|&b| c + (b * shrink).rotated(twist)).collect();
            (top, base)
        }
        ShapeBias::Thin => {
            let base = random_convex_polygon(rng, nb, 1.0, 0.6, origin)?;
            let shrink = rng.gen_range(0.85..0.98);
            let twist = rng.gen_range(-0.1..0.1);
            let top: Vec<Point2> = base.iter().map(|&b| (b * shrink).rotated(twist)).collect();
            (top, base)
        }
    };
    let diam = crate::prismatoid::footprint_diameter(&top, &base);
    let z_rel = match cfg.bias {
        ShapeBias::NearFlat => (cfg.z_rel.0.max(1e-3), cfg.z_rel.1.min(1e-2).max(cfg.z_rel.0.max(1e-3))),
        _ => cfg.z_rel,
    };
    let z = log_uniform(rng, z_rel.0, z_rel.1) * diam;
    Prismatoid::new(top, base, z).ok()
}

/// Instance `index` of the run described by `cfg`.
pub fn random_prismatoid(cfg: &GeneratorConfig, index: u64) -> Result<Prismatoid> {
    cfg.validate()?;
    let mut rng = instance_rng(cfg.seed, index);
    for _ in 0..cfg.max_retries.max(1) {
        if let Some(p) = draw(&mut rng, cfg) {
            return Ok(p);
        }
    }
    Err(Error::GenerationExhausted(cfg.max_retries))
}

/// A random perturbation of the regular octahedron, viewed as a triangular
/// prismatoid, whose lateral faces and top are nonobtuse. The base may be
/// obtuse.
pub fn random_nonobtuse_prismatoid(seed: u64, index: u64, max_retries: usize) -> Result<Prismatoid> {
    let mut rng = instance_rng(seed, index);
    for _ in 0..max_retries.max(1) {
        let mut jitter = |p: Point2, d: f64| p + Point2::new(rng.gen_range(-d..d), rng.gen_range(-d..d));
        let base: Vec<Point2> = (0..3)
            .map(|k| Point2::new(1.0, 0.0).rotated(std::f64::consts::TAU * k as f64 / 3.0))
            .map(|q| jitter(q, 0.3))
            .collect();
        let top: Vec<Point2> = (0..3)
            .map(|k| Point2::new(-1.0, 0.0).rotated(std::f64::consts::TAU * k as f64 / 3.0))
            .map(|q| jitter(q, 0.2))
            .collect();
        let z = 2f64.sqrt() * rng.gen_range(0.8..1.25);
        let Ok(p) = Prismatoid::new(top, base, z) else { continue };
        if crate::unfold::check_nonobtuse(&p, true).is_ok() {
            return Ok(p);
        }
    }
    Err(Error::GenerationExhausted(max_retries))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    /// Run the constructive topless petal unfolding.
    Constructive,
    /// Enumerate every petal unfolding and flag instances where all overlap.
    Exhaustive,
    /// Topless obtuse-angle turning; expected to fail sometimes.
    ObtuseTurn,
}

impl ScanMode {
    pub fn name(self) -> &'static str {
        match self {
            ScanMode::Constructive => "constructive",
            ScanMode::Exhaustive => "exhaustive",
            ScanMode::ObtuseTurn => "obtuse-turn",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub generator: GeneratorConfig,
    pub start: u64,
    pub count: u64,
    pub mode: ScanMode,
    /// Also run every instance at each height of [`z_grid`].
    pub z_grid: bool,
    /// Include the top face when enumerating exhaustively.
    pub include_top: bool,
    pub cap: u128,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            generator: GeneratorConfig::default(),
            start: 0,
            count: 100,
            mode: ScanMode::Constructive,
            z_grid: false,
            include_top: true,
            cap: crate::unfold::DEFAULT_PETAL_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Unfolded,
    Failed,
    Skipped,
}

/// One instance at one height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub index: u64,
    pub z: f64,
    pub status: Status,
    pub reason: Option<String>,
    pub choice: Option<String>,
    pub stats: DispatchStats,
    pub instance: PrismatoidJson,
    #[serde(skip)]
    pub layout: Option<Layout>,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub config: ScanConfig,
    pub tried: u64,
    pub unfolded: u64,
    pub failed: u64,
    pub skipped: u64,
    pub stats: DispatchStats,
    /// Failed and skipped outcomes, in index order.
    pub failures: Vec<Outcome>,
}

impl ScanSummary {
    pub fn replay_command(&self, index: u64) -> String {
        let c = &self.config;
        let mut cmd = format!(
            "patchfold search --seed {} --bias {} --start {index} --count 1 --mode {}",
            c.generator.seed,
            c.generator.bias.name(),
            c.mode.name()
        );
        if c.z_grid {
            cmd.push_str(" --z-grid");
        }
        if c.mode == ScanMode::Exhaustive {
            if !c.include_top {
                cmd.push_str(" --no-top");
            }
            cmd.push_str(&format!(" --cap {}", c.cap));
        }
        cmd
    }
}

fn outcome(p: &Prismatoid, index: u64, status: Status, reason: Option<String>) -> Outcome {
    Outcome {
        index,
        z: p.z,
        status,
        reason,
        choice: None,
        stats: DispatchStats::default(),
        instance: PrismatoidJson::from_prismatoid(p),
        layout: None,
        witnesses: Vec::new(),
    }
}

/// Run one instance under `mode`.
pub fn run_instance(p: &Prismatoid, index: u64, cfg: &ScanConfig) -> Outcome {
    match cfg.mode {
        ScanMode::Constructive => match petal_unfold_topless_report(p) {
            Ok((unf, report)) => {
                let status = if report.overlapping { Status::Failed } else { Status::Unfolded };
                let mut o = outcome(p, index, status, report.overlapping.then(|| "overlap".to_string()));
                o.choice = Some(unf.choice.to_string());
                o.stats = unf.stats;
                if report.overlapping {
                    o.layout = Some(unf.layout);
                    o.witnesses = report.witnesses;
                }
                o
            }
            Err(e) => outcome(p, index, Status::Failed, Some(e.to_string())),
        },
        ScanMode::ObtuseTurn => {
            let run = || -> Result<(PetalChoice, Layout)> {
                let s = PetalStructure::topless(p)?;
                let c = obtuse_turn_choice(&s, p.tol.eps_ang)?;
                let l = s.layout(&c)?;
                Ok((c, l))
            };
            match run() {
                Ok((c, l)) => {
                    let r = layout_overlaps(&l, &p.tol);
                    let status = if r.overlapping { Status::Failed } else { Status::Unfolded };
                    let mut o = outcome(p, index, status, r.overlapping.then(|| "overlap".to_string()));
                    o.choice = Some(c.to_string());
                    if r.overlapping {
                        o.layout = Some(l);
                        o.witnesses = r.witnesses;
                    }
                    o
                }
                Err(e) => outcome(p, index, Status::Failed, Some(e.to_string())),
            }
        }
        ScanMode::Exhaustive => {
            let s = match PetalStructure::for_prismatoid(p, cfg.include_top) {
                Ok(s) => s,
                Err(e) => return outcome(p, index, Status::Failed, Some(e.to_string())),
            };
            let choices = match s.choices(cfg.include_top, cfg.cap) {
                Ok(c) => c,
                Err(e) => return outcome(p, index, Status::Skipped, Some(e.to_string())),
            };
            let mut first: Option<(PetalChoice, Layout, Vec<Witness>)> = None;
            let mut total = 0u64;
            for c in choices {
                total += 1;
                let Ok(l) = s.layout(&c) else { continue };
                let r = layout_overlaps(&l, &p.tol);
                if !r.overlapping {
                    let mut o = outcome(p, index, Status::Unfolded, None);
                    o.choice = Some(c.to_string());
                    return o;
                }
                if first.is_none() {
                    first = Some((c, l, r.witnesses));
                }
            }
            let mut o = outcome(p, index, Status::Failed, Some(format!("all {total} petal unfoldings overlap")));
            if let Some((c, l, w)) = first {
                o.choice = Some(c.to_string());
                o.layout = Some(l);
                o.witnesses = w;
            }
            o
        }
    }
}

/// Scan `cfg.count` instances in parallel. Results are independent of the
/// number of worker threads.
pub fn scan(cfg: &ScanConfig) -> Result<ScanSummary> {
    cfg.generator.validate()?;
    let outcomes: Vec<Vec<Outcome>> = (cfg.start..cfg.start + cfg.count)
        .into_par_iter()
        .map(|index| {
            let p = match random_prismatoid(&cfg.generator, index) {
                Ok(p) => p,
                Err(e) => {
                    return vec![Outcome {
                        index,
                        z: f64::NAN,
                        status: Status::Skipped,
                        reason: Some(e.to_string()),
                        choice: None,
                        stats: DispatchStats::default(),
                        instance: PrismatoidJson { a: Vec::new(), b: Vec::new(), z: 0.0 },
                        layout: None,
                        witnesses: Vec::new(),
                    }]
                }
            };
            let heights = if cfg.z_grid { z_grid(p.diameter()) } else { vec![p.z] };
            heights
                .into_iter()
                .map(|z| match p.at_height(z) {
                    Ok(q) => run_instance(&q, index, cfg),
                    Err(e) => outcome(&p, index, Status::Skipped, Some(e.to_string())),
                })
                .collect()
        })
        .collect();
    let mut summary = ScanSummary {
        config: cfg.clone(),
        tried: 0,
        unfolded: 0,
        failed: 0,
        skipped: 0,
        stats: DispatchStats::default(),
        failures: Vec::new(),
    };
    for o in outcomes.into_iter().flatten() {
        summary.tried += 1;
        summary.stats.merge(&o.stats);
        match o.status {
            Status::Unfolded => summary.unfolded += 1,
            Status::Failed => summary.failed += 1,
            Status::Skipped => summary.skipped += 1,
        }
        if o.status != Status::Unfolded {
            summary.failures.push(o);
        }
    }
    for f in summary.failures.iter().filter(|f| f.status == Status::Failed) {
        log::warn!("instance {} at z={} failed: {:?}", f.index, f.z, f.reason);
    }
    Ok(summary)
}

/// Write `summary.json` (with a Unix timestamp) and, per failure, the
/// instance, its first failing layout and an SVG under `root/runs/<seed>/`.
/// Returns the run directory.
pub fn persist_run(root: &Path, summary: &ScanSummary) -> Result<PathBuf> {
    let dir = root.join("runs").join(summary.config.generator.seed.to_string());
    fs::create_dir_all(&dir)?;
    let mut doc = serde_json::to_value(summary)?;
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    doc["timestamp"] = now.into();
    fs::write(dir.join("summary.json"), to_json(&doc)?)?;
    for f in &summary.failures {
        let k = f.index;
        fs::write(dir.join(format!("instance_{k}.json")), to_json(&f.instance)?)?;
        if let Some(l) = &f.layout {
            let choice = f.choice.as_deref().unwrap_or("none");
            fs::write(dir.join(format!("layout_{k}_{choice}.json")), to_json(&LayoutJson::from_layout(l))?)?;
            fs::write(dir.join(format!("layout_{k}_{choice}.svg")), render_svg(l, None, &f.witnesses, &RenderStyle::default()))?;
        }
    }
    Ok(dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_reproducible() {
        let cfg = GeneratorConfig { seed: 7, ..Default::default() };
        let a = random_prismatoid(&cfg, 3).unwrap();
        let b = random_prismatoid(&cfg, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_prismatoid(&cfg, 4).unwrap());
    }

    #[test]
    fn every_bias_generates() {
        for bias in ShapeBias::ALL {
            let cfg = GeneratorConfig { seed: 1, bias, ..Default::default() };
            for k in 0..20 {
                let p = random_prismatoid(&cfg, k).unwrap();
                assert!((3..=12).contains(&p.n_top()) && (3..=12).contains(&p.n_base()));
                if bias == ShapeBias::NearFlat {
                    assert!(p.z < 0.0100001 * p.diameter());
                }
            }
        }
    }
}
