//! Command-line front end: `extract`, `tessellate`, `compare` and `stats`.
//!
//! Exit status is 0 on success, 2 for invalid arguments or unreadable
//! inputs, and 3 for topological errors and malformed artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::curvenet::{AxialPlane, TangentParams};
use crate::field::{load_raw, make_analytic, GridSpec, RawHeader, ScalarField};
use crate::mesh::MeshFormat;
use crate::metrics::{compare, CompareReport, DEFAULT_SEED};
use crate::patch::{PatchMode, PatchParams};
use crate::surface::{Surface, SurfaceOptions};
use crate::{Error, Result, FORMAT_VERSION};

pub const NETWORK_FILE: &str = "network.json";
pub const PATCHES_FILE: &str = "patches.json";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.jsonl";

#[derive(Debug, Parser)]
#[command(
    name = "marching-surfaces",
    version,
    about = "Smooth multi-sided patch surfaces from sampled scalar fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the curve network and patch descriptors of an isosurface.
    Extract(ExtractArgs),
    /// Triangulate stored patches into an OBJ or PLY mesh.
    Tessellate(TessellateArgs),
    /// Compare marching cubes with the G0 and G1 patch surfaces.
    Compare(CompareArgs),
    /// Summarise stored artifacts.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldKind {
    Sphere,
    Blend,
    Raw,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[arg(long, value_enum)]
    pub field: FieldKind,
    /// Isovalue; samples at or above it are Inside.
    #[arg(long, allow_hyphen_values = true)]
    pub iso: f64,
    /// Analytic parameters: `radius[,cx,cy,cz]` for sphere,
    /// `sphere_weight,hyperboloid_weight` for blend.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Vec<f64>,
    /// Raw payload for `--field raw`; the header is read from the `.json`
    /// file next to it.
    #[arg(long, required_if_eq("field", "raw"))]
    pub raw: Option<PathBuf>,
    /// Grid points per axis [default: 7,7,7 for sphere, 32,32,32 for blend].
    #[arg(long, value_parser = triple::<usize>)]
    pub dims: Option<[usize; 3]>,
    /// Grid origin [default: -3,-3,-3].
    #[arg(long, value_parser = triple::<f64>, allow_hyphen_values = true)]
    pub origin: Option<[f64; 3]>,
    /// Grid spacing [default: spans 6 units per axis].
    #[arg(long, value_parser = triple::<f64>)]
    pub spacing: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Hermite tangent length factor.
    #[arg(long, default_value_t = TangentParams::default().scale)]
    pub tangent_factor: f64,
    /// Lower bound on the angular tangent length term.
    #[arg(long, default_value_t = TangentParams::default().floor)]
    pub tangent_floor: f64,
    /// Cap on tangent length as a multiple of the shorter adjacent chord;
    /// `inf` removes the cap.
    #[arg(long, default_value_t = TangentParams::default().chord_ratio.unwrap_or(f64::INFINITY))]
    pub tangent_chord_ratio: f64,
    /// Ribbon width [default: a third of each loop's mean chord].
    #[arg(long)]
    pub ribbon_width: Option<f64>,
    /// Fraction of the footprint depth over which ribbons are ramped in.
    #[arg(long, default_value_t = PatchParams::default().s_ramp)]
    pub s_ramp: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub curves: CurveArgs,
    #[arg(long, value_enum, default_value_t = PatchMode::G1)]
    pub mode: PatchMode,
    /// Output directory for network.json, patches.json and diagnostics.jsonl.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct TessellateArgs {
    /// Patch descriptors, or a directory written by `extract`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Curve network [default: network.json next to the descriptors].
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Subdivisions per fan triangle edge.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=4096))]
    pub level: u32,
    /// Output format [default: from the output extension, else obj].
    #[arg(long, value_enum)]
    pub format: Option<MeshFormat>,
    /// Override the blend mode stored in the descriptors.
    #[arg(long, value_enum)]
    pub mode: Option<PatchMode>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub curves: CurveArgs,
    /// Tessellation level of the patch surfaces.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=4096))]
    pub level: u32,
    /// Seed for the random surface samples.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the JSON report here and print a table instead.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    /// Patch descriptors, or a directory written by `extract`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

fn triple<T: FromStr>(s: &str) -> std::result::Result<[T; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts[..] else {
        return Err(format!("expected three comma separated values, got `{s}`"));
    };
    let parse = |p: &str| p.parse::<T>().map_err(|_| format!("cannot parse `{p}`"));
    Ok([parse(a)?, parse(b)?, parse(c)?])
}

/// Exit status for an error returned by [`run`].
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Topology { .. }
        | Error::DegenerateTangent { .. }
        | Error::Format(_)
        | Error::Json(_) => 3,
        _ => 2,
    }
}

impl FieldArgs {
    pub fn grid(&self) -> Result<GridSpec> {
        let dims = self.dims.unwrap_or(match self.field {
            FieldKind::Blend => [32; 3],
            _ => [7; 3],
        });
        let origin = self.origin.unwrap_or([-3.0; 3]);
        let spacing = match self.spacing {
            Some(s) => s,
            None => {
                if dims.iter().any(|&d| d < 2) {
                    return Err(Error::InvalidGrid(format!(
                        "dims {dims:?} must be at least 2 per axis"
                    )));
                }
                dims.map(|d| 6.0 / (d - 1) as f64)
            }
        };
        GridSpec::new(dims, origin, spacing)
    }

    pub fn load(&self) -> Result<ScalarField> {
        match self.field {
            FieldKind::Raw => {
                if self.dims.is_some()
                    || self.origin.is_some()
                    || self.spacing.is_some()
                    || !self.params.is_empty()
                {
                    return Err(Error::InvalidParams {
                        field: "raw".into(),
                        reason: "the grid comes from the header; drop --dims, --origin, --spacing and --params".into(),
                    });
                }
                let path = self.raw.as_deref().expect("clap requires --raw");
                let header = RawHeader::read(&RawHeader::sidecar_path(path))?;
                load_raw(path, &header)
            }
            FieldKind::Sphere => make_analytic("sphere", &self.params, self.grid()?),
            FieldKind::Blend => make_analytic("blend", &self.params, self.grid()?),
        }
    }
}

impl CurveArgs {
    pub fn options(&self, mode: PatchMode) -> SurfaceOptions {
        SurfaceOptions {
            tangent: TangentParams {
                scale: self.tangent_factor,
                floor: self.tangent_floor,
                chord_ratio: Some(self.tangent_chord_ratio).filter(|r| *r != f64::INFINITY),
            },
            patch: PatchParams {
                mode,
                width: self.ribbon_width,
                s_ramp: self.s_ramp,
            },
        }
    }
}

fn write_file(path: &Path, data: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, data).map_err(|e| Error::io(path, e))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Descriptor and network paths for `--in` / `--network`.
fn artifact_paths(input: &Path, network: Option<&Path>) -> (PathBuf, PathBuf) {
    let (patches, dir) = if input.is_dir() {
        (input.join(PATCHES_FILE), input.to_path_buf())
    } else {
        (
            input.to_path_buf(),
            input.parent().unwrap_or(Path::new("")).to_path_buf(),
        )
    };
    let network = network.map_or_else(|| dir.join(NETWORK_FILE), Path::to_path_buf);
    (patches, network)
}

fn load_surface(input: &Path, network: Option<&Path>) -> Result<(Surface, usize, usize)> {
    let (patches, network) = artifact_paths(input, network);
    let (net_text, patch_text) = (read_file(&network)?, read_file(&patches)?);
    let surface = Surface::from_json(&net_text, &patch_text)?;
    Ok((surface, net_text.len(), patch_text.len()))
}

pub fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    let stdout = |e: std::io::Error| Error::io("<stdout>", e);
    match cli.command {
        Command::Extract(args) => {
            let field = args.field.load()?;
            let surface =
                Surface::extract(&field, args.field.iso, &args.curves.options(args.mode))?;
            fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
            write_file(&args.out.join(NETWORK_FILE), surface.network_json()?)?;
            write_file(&args.out.join(PATCHES_FILE), surface.patch_json()?)?;
            write_file(
                &args.out.join(DIAGNOSTICS_FILE),
                surface.diagnostics_jsonl()?,
            )?;
            let chains = AxialPlane::ALL.map(|p| surface.network.chains_in(p).count());
            writeln!(
                out,
                "{} control points, chains xy {} yz {} xz {}, {} patches, {} diagnostics",
                surface.network.points.len(),
                chains[0],
                chains[1],
                chains[2],
                surface.patches.len(),
                surface.diagnostics.len()
            )
            .map_err(stdout)
        }
        Command::Tessellate(args) => {
            let (mut surface, _, _) = load_surface(&args.input, args.network.as_deref())?;
            if let Some(mode) = args.mode {
                surface = surface.with_mode(mode);
            }
            let format = args.format.unwrap_or_else(|| {
                match args.out.extension().and_then(|e| e.to_str()) {
                    Some(e) if e.eq_ignore_ascii_case("ply") => MeshFormat::Ply,
                    _ => MeshFormat::Obj,
                }
            });
            let mesh = surface.tessellate(args.level as usize)?;
            mesh.write(&args.out, format)?;
            writeln!(
                out,
                "{} vertices, {} triangles",
                mesh.vertices.len(),
                mesh.triangles.len()
            )
            .map_err(stdout)
        }
        Command::Compare(args) => {
            let field = args.field.load()?;
            let opts = args.curves.options(PatchMode::G1);
            let report = compare(
                &field,
                args.field.iso,
                &opts,
                args.level as usize,
                args.seed,
            )?;
            let json = serde_json::to_string_pretty(&report)?;
            match &args.out {
                Some(path) => {
                    write_file(path, json + "\n")?;
                    write!(out, "{}", compare_table(&report)).map_err(stdout)
                }
                None => writeln!(out, "{json}").map_err(stdout),
            }
        }
        Command::Stats(args) => {
            let (surface, net_bytes, patch_bytes) =
                load_surface(&args.input, args.network.as_deref())?;
            let stats = StatsReport::new(&surface, net_bytes, patch_bytes);
            if args.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&stats)?).map_err(stdout)
            } else {
                write!(out, "{}", stats.table()).map_err(stdout)
            }
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

/// Plain-text summary of a comparison.
pub fn compare_table(r: &CompareReport) -> String {
    let mut s = format!(
        "{:<4} {:>9} {:>10} {:>12} {:>12} {:>14}\n",
        "", "vertices", "triangles", "max error", "mean error", "max angle deg"
    );
    let rows = [
        ("mc", &r.mc, None),
        ("g0", &r.g0.mesh, Some(&r.g0.continuity)),
        ("g1", &r.g1.mesh, Some(&r.g1.continuity)),
    ];
    for (name, m, c) in rows {
        s += &format!(
            "{:<4} {:>9} {:>10} {:>12} {:>12} {:>14}\n",
            name,
            m.vertices,
            m.triangles,
            fmt_opt(m.radial_error.map(|e| e.max)),
            fmt_opt(m.radial_error.map(|e| e.mean)),
            fmt_opt(c.and_then(|c| c.max_deg)),
        );
    }
    let st = &r.storage;
    s += &format!(
        "patches {} ({} diagnostics)\nstorage: network {} B + descriptors {} B vs OBJ {} B, ratio {} (binary {})\n",
        r.patches.count,
        r.patches.diagnostics,
        st.curve_network_bytes,
        st.patch_descriptor_bytes,
        st.mc_mesh_bytes,
        fmt_opt(st.ratio),
        fmt_opt(st.binary.ratio),
    );
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneStats {
    pub chains: usize,
    pub closed: usize,
    pub segments: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    #[serde(rename = "ms-version")]
    pub version: u32,
    pub grid: GridSpec,
    pub iso: f64,
    pub mode: PatchMode,
    pub control_points: usize,
    pub planes: BTreeMap<String, PlaneStats>,
    pub patches: usize,
    pub by_sides: BTreeMap<usize, usize>,
    pub network_bytes: usize,
    pub patch_bytes: usize,
}

impl StatsReport {
    pub fn new(surface: &Surface, network_bytes: usize, patch_bytes: usize) -> Self {
        let net = &surface.network;
        let planes = AxialPlane::ALL
            .into_iter()
            .map(|p| {
                let chains: Vec<_> = net.chains_in(p).collect();
                let stats = PlaneStats {
                    chains: chains.len(),
                    closed: chains.iter().filter(|c| c.closed).count(),
                    segments: chains.iter().map(|c| c.segment_count()).sum(),
                };
                (p.name().to_string(), stats)
            })
            .collect();
        let mut by_sides = BTreeMap::new();
        for p in &surface.patches {
            *by_sides.entry(p.k()).or_insert(0) += 1;
        }
        StatsReport {
            version: FORMAT_VERSION,
            grid: net.grid,
            iso: net.iso,
            mode: surface.params.mode,
            control_points: net.points.len(),
            planes,
            patches: surface.patches.len(),
            by_sides,
            network_bytes,
            patch_bytes,
        }
    }

    pub fn table(&self) -> String {
        let mut s = format!(
            "grid {:?} iso {} mode {}\ncontrol points {}\n",
            self.grid.dims,
            self.iso,
            self.mode.name(),
            self.control_points
        );
        for (name, p) in &self.planes {
            s += &format!(
                "{name}: {} chains ({} closed), {} segments\n",
                p.chains, p.closed, p.segments
            );
        }
        let sides: Vec<String> = self
            .by_sides
            .iter()
            .map(|(k, n)| format!("{k}-sided {n}"))
            .collect();
        s += &format!("patches {} ({})\n", self.patches, sides.join(", "));
        s += &format!(
            "bytes: network {} descriptors {}\n",
            self.network_bytes, self.patch_bytes
        );
        s
    }
}
