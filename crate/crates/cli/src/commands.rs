use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::{json, Value};

use patchfold::fixtures::{self, Fixture};
use patchfold::geom::{diameter2, Point2, Tolerance};
use patchfold::io::{parse_input, prismatoid_json, to_json, Input, LayoutJson, PatchJson, PolyhedronJson};
use patchfold::overlap::{layout_overlaps, OverlapReport};
use patchfold::polyhedron::{neighborhood, ConvexPatch, NeighborhoodKind};
use patchfold::prismatoid::{FaceKind, Prismatoid, VertexRef};
use patchfold::regions::{apex_track, collinearity_residual, crossing_ray_pairs};
use patchfold::search::{self, persist_run, ScanConfig, ScanMode, ShapeBias, Status};
use patchfold::svg::{render_svg, RenderStyle};
use patchfold::unfold::{
    angle_monotonicity_check, band_unfolding_with, chain_angle_facts_check, enumerate_petal_unfoldings, lateral_edge_count,
    petal_unfold_nonobtuse, petal_unfold_nonobtuse_with, petal_unfold_topless, spanning_tree_unfoldings, BandAttach, Layout,
    PetalStructure, RootFrame,
};
use patchfold::Error;

use crate::{Cli, Command, InputArgs, Mode, SearchArgs, UnfoldKind};

/// A failed command: exit code, message and an optional diagnostic dump.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub dump: Option<String>,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into(), dump: None }
    }

    /// Attach the offending input to an invariant violation.
    fn with_input(mut self, text: &str) -> Self {
        if self.code == 3 {
            let input = serde_json::from_str::<Value>(text).unwrap_or_else(|_| Value::String(text.to_string()));
            self.dump = Some(json!({ "error": self.message, "input": input }).to_string());
        }
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string(), dump: None }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::malformed(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::malformed(format!("json: {e}"))
    }
}

/// 3 for errors that valid input must never trigger, 2 for bad input.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateHinge
        | Error::HingeNotInPlane
        | Error::DegenerateAngle
        | Error::DegenerateDirection
        | Error::UnsupportedFace { .. }
        | Error::RayCrossing(..)
        | Error::NoSafeFlip { .. }
        | Error::ContainmentFailure { .. }
        | Error::OverlapDetected { .. }
        | Error::VertexNotSurrounded { .. }
        | Error::VertexNotPlaced(_)
        | Error::GenerationExhausted(_) => 3,
        _ => 2,
    }
}

type Outcome = Result<ExitCode, Failure>;

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Unfold { kind } => unfold(kind),
        Command::Verify { input, svg } => verify(&input, svg.as_deref()),
        Command::Partition { input, output, json } => partition(&input, output.as_deref(), json),
        Command::Sweep { input, z_grid } => sweep(&input, z_grid),
        Command::Fixture { name, topless } => fixture(&name, topless),
        Command::Search(args) => search_cmd(args),
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::malformed(format!("{path}: {e}")))
    }
}

/// Output sink for one or many JSON lines. A closed pipe ends the stream quietly.
struct Sink {
    out: BufWriter<io::StdoutLock<'static>>,
    closed: bool,
}

impl Sink {
    fn new() -> Self {
        Sink { out: BufWriter::new(io::stdout().lock()), closed: false }
    }

    fn line(&mut self, v: &Value) -> Result<(), Failure> {
        if self.closed {
            return Ok(());
        }
        let s = to_json(v)?;
        if writeln!(self.out, "{s}").is_err() {
            self.closed = true;
        }
        Ok(())
    }

    fn text(&mut self, s: &str) {
        if !self.closed && self.out.write_all(s.as_bytes()).is_err() {
            self.closed = true;
        }
    }
}

impl Drop for Sink {
    fn drop(&mut self) {
        let _ = self.out.flush();
    }
}

fn layout_value(l: &Layout, extra: &[(&str, Value)]) -> Result<Value, Failure> {
    let mut v = serde_json::to_value(LayoutJson::from_layout(l))?;
    for (k, x) in extra {
        v[*k] = x.clone();
    }
    Ok(v)
}

/// `base` itself for a single output, `stem_k.ext` beside it otherwise.
fn numbered(base: &Path, k: usize, many: bool) -> PathBuf {
    if !many {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("layout");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("svg");
    base.with_file_name(format!("{stem}_{k}.{ext}"))
}

fn write_svg(path: &Path, l: &Layout, report: Option<&OverlapReport>, part: Option<&patchfold::regions::AltitudePartition>) -> Result<(), Failure> {
    let w = report.map(|r| r.witnesses.as_slice()).unwrap_or(&[]);
    fs::write(path, render_svg(l, part, w, &RenderStyle::default())).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

fn layout_tol(l: &Layout) -> Tolerance {
    let pts: Vec<Point2> = l.faces.iter().flat_map(|f| f.polygon.iter().copied()).collect();
    Tolerance::from_env(diameter2(&pts).max(f64::MIN_POSITIVE))
}

fn prismatoid_only(input: Input, what: &str) -> Result<Prismatoid, Failure> {
    match input {
        Input::Prismatoid(p) => Ok(p),
        _ => Err(Failure::malformed(format!("{what} needs a prismatoid document with keys A, B, z"))),
    }
}

fn patch_of(input: Input, base_face: Option<usize>) -> Result<ConvexPatch, Failure> {
    match input {
        Input::Patch(p) => Ok(p),
        Input::Polyhedron(poly) => {
            let b = base_face.ok_or_else(|| Failure::malformed("polyhedron input needs --base-face"))?;
            Ok(neighborhood(&poly, b, NeighborhoodKind::VertexNeighborhood)?)
        }
        Input::Prismatoid(p) => {
            let faces = (0..p.hull.faces.len() + 2).filter(|&f| f != Prismatoid::TOP_FACE);
            Ok(ConvexPatch::new(p.to_polyhedron(), faces, Some(Prismatoid::BASE_FACE))?)
        }
    }
}

fn unfold(kind: UnfoldKind) -> Outcome {
    match kind {
        UnfoldKind::Petal { io, enumerate, include_top, topless: _, cap } => {
            let text = read_input(&io.input)?;
            unfold_petal(&text, &io, enumerate, include_top, cap).map_err(|f| f.with_input(&text))
        }
        UnfoldKind::Band { io, cut, all, attach } => {
            let text = read_input(&io.input)?;
            unfold_band(&text, &io, cut, all, attach).map_err(|f| f.with_input(&text))
        }
        UnfoldKind::Nonobtuse { io, include_top, enumerate } => {
            let text = read_input(&io.input)?;
            unfold_nonobtuse(&text, &io, include_top, enumerate).map_err(|f| f.with_input(&text))
        }
        UnfoldKind::Tree { io, cap } => {
            let text = read_input(&io.input)?;
            unfold_tree(&text, &io, cap).map_err(|f| f.with_input(&text))
        }
    }
}

fn stream_petals(s: &PetalStructure, include_top: bool, cap: u128, svg: Option<&Path>, tol: &Tolerance) -> Outcome {
    let mut sink = Sink::new();
    for (k, (c, l)) in enumerate_petal_unfoldings(s, include_top, cap)?.enumerate() {
        let l = l?;
        if let Some(base) = svg {
            write_svg(&numbered(base, k, true), &l, Some(&layout_overlaps(&l, tol)), None)?;
        }
        sink.line(&layout_value(&l, &[("choice", Value::String(c.to_string()))])?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn unfold_petal(text: &str, io: &InputArgs, enumerate: bool, include_top: bool, cap: u128) -> Outcome {
    let input = parse_input(text)?;
    if let Input::Prismatoid(p) = &input {
        if enumerate {
            let s = PetalStructure::for_prismatoid(p, include_top)?;
            return stream_petals(&s, include_top, cap, io.svg.as_deref(), &p.tol);
        }
        if include_top {
            return Err(Failure::malformed("placing the top needs --enumerate, or `unfold nonobtuse` for nonobtuse inputs"));
        }
        let u = petal_unfold_topless(p)?;
        log::info!("petal choice {} cases {:?}", u.choice, u.cases);
        if let Some(path) = &io.svg {
            write_svg(path, &u.layout, None, Some(&u.partition))?;
        }
        Sink::new().line(&layout_value(&u.layout, &[("choice", Value::String(u.choice.to_string()))])?)?;
        return Ok(ExitCode::SUCCESS);
    }
    let patch = patch_of(input, io.base_face)?;
    let tol = Tolerance::from_env(patch.parent.diameter());
    let s = PetalStructure::from_patch(&patch)?;
    if enumerate {
        return stream_petals(&s, include_top, cap, io.svg.as_deref(), &tol);
    }
    // First clear layout, else the first one (which `verify` will flag).
    let mut first = None;
    let mut clear = None;
    for (c, l) in enumerate_petal_unfoldings(&s, include_top, cap)? {
        let l = l?;
        let r = layout_overlaps(&l, &tol);
        if !r.overlapping {
            clear = Some((c, l, r));
            break;
        }
        if first.is_none() {
            first = Some((c, l, r));
        }
    }
    let (c, l, r) = match clear.or(first) {
        Some(x) => x,
        None => return Err(Failure::malformed("patch has no petal unfoldings")),
    };
    if r.overlapping {
        log::warn!("every petal unfolding of this patch overlaps; emitting choice {c}");
    }
    if let Some(path) = &io.svg {
        write_svg(path, &l, Some(&r), None)?;
    }
    Sink::new().line(&layout_value(&l, &[("choice", Value::String(c.to_string()))])?)?;
    Ok(ExitCode::SUCCESS)
}

fn unfold_band(text: &str, io: &InputArgs, cut: usize, all: bool, attach: Option<Vec<usize>>) -> Outcome {
    let p = prismatoid_only(parse_input(text)?, "band unfolding")?;
    let attach = match attach.as_deref() {
        Some([base_on, top_on]) => BandAttach::Explicit { base_on: *base_on, top_on: *top_on },
        Some(_) => return Err(Failure::malformed("--attach takes two face indices")),
        None => BandAttach::Adjacent,
    };
    let cuts: Vec<usize> = if all { (0..lateral_edge_count(&p)).collect() } else { vec![cut] };
    let mut sink = Sink::new();
    for (k, &c) in cuts.iter().enumerate() {
        let l = band_unfolding_with(&p, c, attach)?;
        if let Some(base) = &io.svg {
            write_svg(&numbered(base, k, all), &l, Some(&layout_overlaps(&l, &p.tol)), None)?;
        }
        sink.line(&layout_value(&l, &[("cut", json!(c))])?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn unfold_nonobtuse(text: &str, io: &InputArgs, include_top: bool, enumerate: bool) -> Outcome {
    let p = prismatoid_only(parse_input(text)?, "nonobtuse unfolding")?;
    if !enumerate {
        let l = petal_unfold_nonobtuse(&p, include_top)?;
        if let Some(path) = &io.svg {
            write_svg(path, &l, None, None)?;
        }
        Sink::new().line(&layout_value(&l, &[])?)?;
        return Ok(ExitCode::SUCCESS);
    }
    let s = PetalStructure::for_prismatoid(&p, include_top)?;
    let mut sink = Sink::new();
    for (k, c) in s.choices(include_top, patchfold::unfold::DEFAULT_PETAL_CAP)?.enumerate() {
        let l = petal_unfold_nonobtuse_with(&p, &s, &c)?;
        if let Some(base) = &io.svg {
            write_svg(&numbered(base, k, true), &l, None, None)?;
        }
        sink.line(&layout_value(&l, &[("choice", Value::String(c.to_string()))])?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn unfold_tree(text: &str, io: &InputArgs, cap: usize) -> Outcome {
    let input = parse_input(text)?;
    let structure = match &input {
        Input::Prismatoid(p) => Some(PetalStructure::topless(p)?),
        _ => None,
    };
    let patch = patch_of(input, io.base_face)?;
    let tag = |f: usize| structure.as_ref().map(|s| s.tag(f)).unwrap_or(patchfold::unfold::FaceTag::Other);
    let trees = spanning_tree_unfoldings(&patch, RootFrame::Horizontal, &tag, cap)?;
    let tol = Tolerance::from_env(patch.parent.diameter());
    let mut sink = Sink::new();
    for (k, t) in trees.iter().enumerate() {
        if let Some(base) = &io.svg {
            write_svg(&numbered(base, k, true), &t.layout, Some(&layout_overlaps(&t.layout, &tol)), None)?;
        }
        let cut_tree: Vec<[usize; 2]> = t.cut_tree.iter().map(|&(u, v)| [u, v]).collect();
        sink.line(&layout_value(&t.layout, &[("anchor", json!(t.anchor)), ("cut_tree", json!(cut_tree))])?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(input: &str, svg: Option<&Path>) -> Outcome {
    let text = read_input(input)?;
    let docs: Vec<Value> = serde_json::Deserializer::from_str(&text).into_iter::<Value>().collect::<Result<_, _>>()?;
    if docs.is_empty() {
        return Err(Failure::malformed("no layout documents in input"));
    }
    let many = docs.len() > 1;
    let mut sink = Sink::new();
    let mut any = false;
    for (k, doc) in docs.iter().enumerate() {
        let l = serde_json::from_value::<LayoutJson>(doc.clone())?.to_layout()?;
        let r = layout_overlaps(&l, &layout_tol(&l));
        any |= r.overlapping;
        if let Some(base) = svg {
            write_svg(&numbered(base, k, many), &l, Some(&r), None)?;
        }
        let pairs: Vec<[usize; 2]> = r.witnesses.iter().map(|w| [w.a, w.b]).collect();
        let mut line = json!({
            "index": k,
            "overlapping": r.overlapping,
            "pairs": pairs,
            "witnesses": serde_json::to_value(&r.witnesses)?,
            "min_clearance": r.min_clearance,
        });
        if let Some(c) = doc.get("choice").or_else(|| doc.get("cut")) {
            line["choice"] = c.clone();
        }
        sink.line(&line)?;
    }
    Ok(if any { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn partition(input: &str, output: Option<&Path>, as_json: bool) -> Outcome {
    let text = read_input(input)?;
    let run = || -> Result<String, Failure> {
        let p = prismatoid_only(parse_input(&text)?, "partition")?;
        let u = petal_unfold_topless(&p)?;
        Ok(if as_json { to_json(&u.partition)? + "\n" } else { render_svg(&u.layout, Some(&u.partition), &[], &RenderStyle::default()) })
    };
    let doc = run().map_err(|f| f.with_input(&text))?;
    match output {
        Some(path) => fs::write(path, doc).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?,
        None => Sink::new().text(&doc),
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(input: &str, grid: Option<Vec<f64>>) -> Outcome {
    let text = read_input(input)?;
    let p = prismatoid_only(parse_input(&text)?, "sweep")?;
    let grid = grid.unwrap_or_else(|| search::z_grid(p.diameter()));
    if grid.is_empty() || grid.iter().any(|z| !(z.is_finite() && *z >= 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::malformed("--z-grid must be increasing, finite and nonnegative"));
    }
    let run = || -> Result<(Value, bool), Failure> {
        let c0 = p.at_height(grid[0])?.hull.combinatorics();
        let mut combinatorics_invariant = true;
        let mut ray_crossings = 0;
        for &z in &grid {
            let q = p.at_height(z)?;
            combinatorics_invariant &= q.hull.combinatorics() == c0;
            ray_crossings += crossing_ray_pairs(&q).len();
        }
        let mut apex_residual: f64 = 0.0;
        for i in 0..p.n_base() {
            apex_residual = apex_residual.max(collinearity_residual(&apex_track(&p, i, &grid)?) / p.diameter());
        }
        let (mut triangles, mut max_cos_error, mut all_monotone) = (0, 0.0f64, true);
        for f in p.hull.faces.iter().filter(|f| f.kind == FaceKind::ATriangle) {
            let tops: Vec<Point2> = f.vertices.iter().filter_map(|v| if let VertexRef::A(j) = v { Some(p.top[*j]) } else { None }).collect();
            let b = f.vertices.iter().find_map(|v| if let VertexRef::B(i) = v { Some(p.base[*i]) } else { None });
            if let (Some(b), [a1, a2]) = (b, tops.as_slice()) {
                let r = angle_monotonicity_check(b, *a1, *a2, &grid)?;
                triangles += 1;
                max_cos_error = max_cos_error.max(r.max_cos_error);
                all_monotone &= r.monotone;
            }
        }
        let (mut chain_vertices, mut chain_violations) = (0, 0);
        for i in 0..p.n_base() {
            let r = chain_angle_facts_check(&p, i, &grid)?;
            chain_vertices += r.tracks.len();
            chain_violations += r.tracks.iter().filter(|t| !(t.class_invariant && t.monotone_to_pi)).count();
        }
        let holds = combinatorics_invariant
            && ray_crossings == 0
            && apex_residual < 1e-9
            && max_cos_error < 1e-12
            && all_monotone
            && chain_violations == 0;
        let v = json!({
            "z": grid,
            "combinatorics_invariant": combinatorics_invariant,
            "ray_crossings": ray_crossings,
            "apex_residual": apex_residual,
            "angle_monotonicity": { "triangles": triangles, "max_cos_error": max_cos_error, "monotone": all_monotone },
            "chain_facts": { "vertices": chain_vertices, "violations": chain_violations },
            "holds": holds,
        });
        Ok((v, holds))
    };
    let (v, holds) = run().map_err(|f| f.with_input(&text))?;
    Sink::new().line(&v)?;
    if holds {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure { code: 3, message: "a height-sweep property failed".into(), dump: None }.with_input(&text))
    }
}

fn fixture(name: &str, topless: bool) -> Outcome {
    let doc = match fixtures::by_name(name)? {
        Fixture::Prismatoid(p) => {
            let p = if topless { fixtures::flipped(&p)? } else { p };
            prismatoid_json(&p)?
        }
        Fixture::Polyhedron(poly, base_face) => to_json(&PatchJson {
            polyhedron: PolyhedronJson::from_polyhedron(&poly),
            base_face,
            kind: NeighborhoodKind::VertexNeighborhood,
        })?,
    };
    Sink::new().text(&(doc + "\n"));
    Ok(ExitCode::SUCCESS)
}

fn search_cmd(a: SearchArgs) -> Outcome {
    let bias: ShapeBias = a.bias.parse()?;
    if let Some(n) = a.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::malformed(format!("thread pool: {e}")))?;
    }
    let cfg = ScanConfig {
        generator: search::GeneratorConfig { seed: a.seed, bias, ..Default::default() },
        start: a.start,
        count: a.count,
        mode: match a.mode {
            Mode::Constructive => ScanMode::Constructive,
            Mode::Exhaustive => ScanMode::Exhaustive,
            Mode::ObtuseTurn => ScanMode::ObtuseTurn,
        },
        z_grid: a.z_grid,
        include_top: !a.no_top,
        cap: a.cap,
    };
    let summary = search::scan(&cfg)?;
    let mut v = serde_json::to_value(&summary)?;
    if let Some(fs) = v["failures"].as_array_mut() {
        for (f, o) in fs.iter_mut().zip(&summary.failures) {
            f["replay"] = Value::String(summary.replay_command(o.index));
        }
    }
    if let Some(root) = &a.out {
        let dir = persist_run(root, &summary)?;
        v["run_dir"] = Value::String(dir.display().to_string());
    }
    Sink::new().line(&v)?;
    let broken = summary.failures.iter().any(|f| f.status == Status::Failed);
    if broken && cfg.mode == ScanMode::Constructive {
        return Err(Failure { code: 3, message: format!("{} constructive unfoldings failed", summary.failed), dump: None });
    }
    if broken {
        log::warn!("{} instances without a clear layout in {} mode", summary.failed, cfg.mode.name());
    }
    Ok(ExitCode::SUCCESS)
}
