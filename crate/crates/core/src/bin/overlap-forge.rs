use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use overlap_forge::combinatorics::{classify_face_pairs, count_spanning_trees, CutTree, FaceId, PolyhedralGraph, SpanningTrees, VertexId};
use overlap_forge::embedding::{uniform_stress, BaseShape};
use overlap_forge::io::{read_graph, write_artifacts, Bundle, IoError, LoadedGraph};
use overlap_forge::lifting::{metric_report, verify_convex_polyhedron};
use overlap_forge::pipeline::{realize, realize_with_overlap, PipelineConfig};
use overlap_forge::unfolding::{
    critical_omega, detect_overlap_with, layout_residuals, unfold, unfolding_census, CRITICAL_OMEGA_TOL, EPS_AREA_REL,
};

const SEED_VAR: &str = "OVERLAP_FORGE_SEED";

#[derive(Parser)]
#[command(name = "overlap-forge", version, about = "Convex realizations of planar graphs with overlapping edge unfoldings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph document and report its structure.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Tutte embedding plus lifting; writes an OBJ mesh.
    Realize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `uniform`, or a JSON file of `[u, v, w]` stress triples.
        #[arg(long, default_value = "uniform")]
        weights: String,
        #[arg(long)]
        base_face: Option<FaceId>,
    },
    /// Unfold a solid along a cut tree; writes SVG and overlap JSON.
    Unfold {
        #[arg(long)]
        input: PathBuf,
        /// Cut edges as `u-v` pairs separated by commas.
        #[arg(long)]
        tree: String,
        #[arg(long)]
        root: Option<FaceId>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = EPS_AREA_REL)]
        eps: f64,
    },
    /// Full construction; exit status 0 only when overlap is certified.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Curvature bound in degrees.
        #[arg(long, default_value_t = 15.0)]
        omega_target: f64,
        #[arg(long, default_value_t = 40)]
        max_iters: u32,
        /// Overlap area tolerance relative to the total layout area.
        #[arg(long, default_value_t = EPS_AREA_REL)]
        eps: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        base_face: Option<FaceId>,
    },
    /// Count or list spanning trees.
    Trees {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        limit: Option<usize>,
        /// Unfold every tree of the bundled solid and tally the results.
        #[arg(long)]
        census: bool,
    },
    /// Curvature at which the zig-zag banks stop overlapping, in degrees.
    CriticalOmega {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        len12: f64,
        #[arg(long, default_value_t = 1.0)]
        len23: f64,
    },
}

enum Failure {
    Validation(String),
    Pipeline(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Pipeline(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Pipeline(m) | Failure::Io(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { input } => validate(&input),
        Command::Realize { input, out, weights, base_face } => realize_cmd(&input, &out, &weights, base_face),
        Command::Unfold { input, tree, root, out, eps } => unfold_cmd(&input, &tree, root, &out, eps),
        Command::Pipeline { input, out, omega_target, max_iters, eps, seed, base_face } => {
            pipeline_cmd(&input, &out, omega_target, max_iters, eps, seed, base_face)
        }
        Command::Trees { input, count_only, limit, census } => trees_cmd(&input, count_only, limit, census),
        Command::CriticalOmega { alpha, len12, len23 } => critical_cmd(alpha, len12, len23),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn validate(input: &Path) -> Outcome {
    let LoadedGraph { graph: g, solid, .. } = read_graph(input)?;
    println!("vertices: {}", g.vertex_count());
    println!("edges: {}", g.edge_count());
    println!("faces: {}", g.face_count());
    println!("triangulated: {}", g.is_triangulated());
    let class = classify_face_pairs(&g).map_err(|e| Failure::Validation(e.to_string()))?;
    println!("route: {}", class.tag());
    match count_spanning_trees(&g) {
        Ok(n) => println!("spanning trees: {n}"),
        Err(e) => println!("spanning trees: unavailable ({e})"),
    }
    if let Some(p) = solid {
        let conv = verify_convex_polyhedron(&p);
        let m = metric_report(&p);
        println!("convex: {}", conv.passed);
        println!("max planarity error: {:e}", conv.max_planarity_error);
        println!("min curvature: {:.6} deg", conv.min_curvature.to_degrees());
        println!("total curvature: {:.9} deg", m.total_curvature().to_degrees());
    }
    println!("valid");
    Ok(())
}

fn read_weights(g: &PolyhedralGraph, base: FaceId, source: &str) -> Result<Option<Vec<f64>>, Failure> {
    if source == "uniform" {
        return Ok(None);
    }
    let text = std::fs::read_to_string(source).map_err(|e| Failure::Io(format!("{source}: {e}")))?;
    let triples: Vec<(VertexId, VertexId, f64)> = serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{source}: {e}")))?;
    let mut w = uniform_stress(g, base);
    for (u, v, x) in triples {
        let e = g.edge_id(u, v).ok_or_else(|| Failure::Validation(format!("{source}: {u}-{v} is not an edge")))?;
        if w[e] == 0.0 {
            return Err(Failure::Validation(format!("{source}: {u}-{v} lies on the base face")));
        }
        w[e] = x;
    }
    Ok(Some(w))
}

fn default_base(g: &PolyhedralGraph) -> FaceId {
    (0..g.face_count()).max_by_key(|&f| (g.face(f).len(), std::cmp::Reverse(f))).unwrap_or(0)
}

fn realize_cmd(input: &Path, out: &Path, weights: &str, base_face: Option<FaceId>) -> Outcome {
    let g = read_graph(input)?.graph;
    let base = base_face.unwrap_or_else(|| default_base(&g));
    if base >= g.face_count() {
        return Err(Failure::Validation(format!("face {base} does not exist")));
    }
    let stress = read_weights(&g, base, weights)?;
    let r = realize(&g, base, stress.as_deref(), &BaseShape::default()).map_err(|e| Failure::Pipeline(e.to_string()))?;
    let files = write_artifacts(&Bundle::Solid(&r.solid), out)?;
    println!("base face: {base}");
    println!("base refined: {}", r.refined_base);
    println!("closure residual: {:e}", r.diagnostics.closure_residual);
    println!("convex: {}", verify_convex_polyhedron(&r.solid).passed);
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn parse_tree(g: &PolyhedralGraph, list: &str) -> Result<CutTree, Failure> {
    let mut edges = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = item.split_once('-').ok_or_else(|| Failure::Validation(format!("tree edge `{item}` is not of the form u-v")))?;
        let parse = |s: &str| s.trim().parse::<VertexId>().map_err(|_| Failure::Validation(format!("bad vertex `{s}` in `{item}`")));
        edges.push((parse(a)?, parse(b)?));
    }
    CutTree::new(g, edges, None).map_err(|e| Failure::Validation(e.to_string()))
}

fn unfold_cmd(input: &Path, tree: &str, root: Option<FaceId>, out: &Path, eps: f64) -> Outcome {
    let loaded = read_graph(input)?;
    let p = loaded.solid.ok_or_else(|| Failure::Validation("input has no coords3d".into()))?;
    let tree = parse_tree(p.graph(), tree)?;
    let u = unfold(&p, &tree, root).map_err(|e| Failure::Validation(e.to_string()))?;
    let report = detect_overlap_with(&u, eps);
    let res = layout_residuals(&p, &u);
    let files = write_artifacts(&Bundle::Unfolding { unfolding: &u, overlap: &report }, out)?;
    println!("overlapping: {}", report.overlapping);
    println!("witnesses: {}", report.witnesses.len());
    println!("max length error: {:e}", res.max_length_error);
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn pipeline_cmd(
    input: &Path,
    out: &Path,
    omega_target: f64,
    max_iters: u32,
    eps: f64,
    seed: Option<u64>,
    base_face: Option<FaceId>,
) -> Outcome {
    let g = read_graph(input)?.graph;
    let seed = match std::env::var(SEED_VAR) {
        Ok(s) => Some(s.trim().parse::<u64>().map_err(|_| Failure::Validation(format!("{SEED_VAR}={s} is not an integer")))?),
        Err(_) => seed,
    };
    if !(omega_target > 0.0 && omega_target < 360.0) || !(eps >= 0.0 && eps.is_finite()) {
        return Err(Failure::Validation("--omega-target must lie in (0, 360) and --eps must be finite and non-negative".into()));
    }
    let cfg = PipelineConfig { omega_target: omega_target.to_radians(), max_iters, eps, seed, base_face, ..PipelineConfig::default() };
    let cert = realize_with_overlap(&g, &cfg).map_err(|e| Failure::Pipeline(e.to_string()))?;
    let files = write_artifacts(&Bundle::Certificate(&cert), out)?;
    let top = &cert.overlap.witnesses[0];
    println!("route: {:?}", cert.route);
    if let Some(s) = &cert.selection {
        println!("z path: {:?}", s.z);
        println!("alpha: {:.6} deg", s.alpha.to_degrees());
        println!("omega1: {:.6} deg", s.omega1.to_degrees());
        println!("omega2: {:.6} deg", s.omega2.to_degrees());
    }
    println!("iterations: {}", cert.iterations);
    println!("overlap: faces {} and {}, area {:e}", top.faces[0], top.faces[1], top.area);
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn trees_cmd(input: &Path, count_only: bool, limit: Option<usize>, census: bool) -> Outcome {
    let loaded = read_graph(input)?;
    let g = &loaded.graph;
    let n = count_spanning_trees(g).map_err(|e| Failure::Validation(e.to_string()))?;
    println!("spanning trees: {n}");
    if census {
        let p = loaded.solid.as_ref().ok_or_else(|| Failure::Validation("--census needs coords3d".into()))?;
        let c = unfolding_census(p, limit).map_err(|e| Failure::Pipeline(e.to_string()))?;
        println!("unfolded: {}", c.trees);
        println!("nets: {}", c.nets);
        println!("overlapping: {}", c.overlapping);
        println!("congruence classes: {}", c.classes());
    } else if !count_only {
        for t in SpanningTrees::new(g).take(limit.unwrap_or(usize::MAX)) {
            let list: Vec<String> = t.edges().iter().map(|[u, v]| format!("{u}-{v}")).collect();
            println!("{}", list.join(","));
        }
    }
    Ok(())
}

fn critical_cmd(alpha: f64, len12: f64, len23: f64) -> Outcome {
    let w = critical_omega(alpha.to_radians(), len12, len23, CRITICAL_OMEGA_TOL).map_err(|e| Failure::Validation(e.to_string()))?;
    println!("{:.4}", w.to_degrees());
    Ok(())
}
