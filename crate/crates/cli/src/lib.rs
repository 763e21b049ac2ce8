//! Command-line front end: render images, compare against the ray-cast
//! reference, benchmark, and dump shadow maps.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags or flag values),
//! 2 for runtime failures (unreadable scenes, I/O).

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rbsm::bench::{self, BenchConfig, BenchResult};
use rbsm::scene::BUILTIN_SCENES;
use rbsm::{
    diff, raycast_shadow, rasterize_camera, rasterize_depth, shade_image, with_threads, Algorithm,
    DiffReport, Image, RbsmParams, Scene,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<rbsm::Error> for CliError {
    fn from(e: rbsm::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// `WIDTHxHEIGHT`, both at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution(pub u32, pub u32);

impl FromStr for Resolution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected WIDTHxHEIGHT, got `{s}`"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<u32>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| format!("invalid dimension `{v}` in `{s}`"))
        };
        Ok(Resolution(parse(w)?, parse(h)?))
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}

#[derive(Debug, Parser)]
#[command(name = "rbsm", version, about = "Shadow mapping with shadow-edge revectorization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render one visibility image per mode.
    Render(RenderArgs),
    /// Render modes plus the ray-cast reference and report differences.
    Compare(CompareArgs),
    /// Time the render passes and write a CSV.
    Bench(BenchArgs),
    /// Write the shadow map as a raw depth dump.
    DumpSm(SceneArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SceneArgs {
    /// Scene config file or `builtin:NAME` (staircase, bar-grid, fence-like).
    #[arg(long)]
    pub scene: String,
    /// Shadow-map resolution override (repeatable for `bench`).
    #[arg(long = "sm-res", value_name = "WxH")]
    pub sm_res: Vec<Resolution>,
    /// Viewport resolution override (repeatable for `bench`).
    #[arg(long = "vp-res", value_name = "WxH")]
    pub vp_res: Vec<Resolution>,
    /// Maximum edge walk length in texels.
    #[arg(long)]
    pub maxdist: Option<u32>,
    /// Shadow-test bias in normalized depth.
    #[arg(long)]
    pub bias: Option<f64>,
    /// PCF kernel size (odd); above 1 it also post-filters `rbsm_filter`.
    #[arg(long = "pcf-kernel")]
    pub pcf_kernel: Option<u32>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Algorithm to render (repeatable); defaults to the scene's own.
    #[arg(long, value_name = "MODE")]
    pub mode: Vec<Algorithm>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Algorithm to compare (repeatable, at least one).
    #[arg(long, value_name = "MODE")]
    pub mode: Vec<Algorithm>,
    /// Radius in pixels around reference shadow boundaries for the edge-band count.
    #[arg(long = "band-radius", default_value_t = 2.0)]
    pub band_radius: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Algorithm to time (repeatable); defaults to all.
    #[arg(long, value_name = "MODE")]
    pub mode: Vec<Algorithm>,
    /// Measured frames per configuration (at least 5).
    #[arg(long, default_value_t = bench::DEFAULT_FRAMES)]
    pub frames: u32,
    /// Unmeasured frames per configuration (at least 1).
    #[arg(long, default_value_t = bench::DEFAULT_WARMUP)]
    pub warmup: u32,
}

/// A loaded scene with command-line overrides applied.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub scene: Scene,
    pub params: RbsmParams,
    pub stem: String,
    pub out: PathBuf,
    pub threads: usize,
}

fn single(list: &[Resolution], flag: &str) -> Result<Option<Resolution>, CliError> {
    match list {
        [] => Ok(None),
        [r] => Ok(Some(*r)),
        _ => Err(usage(format!("--{flag} may be given only once for this command"))),
    }
}

fn scene_stem(source: &str) -> String {
    match source.strip_prefix("builtin:") {
        Some(name) => name.to_string(),
        None => Path::new(source)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scene".into()),
    }
}

/// Validates the flags, then loads the scene. Flag problems are usage errors;
/// loading problems are runtime errors.
fn prepare(args: &SceneArgs, sm: Option<Resolution>, vp: Option<Resolution>) -> Result<Prepared, CliError> {
    if let Some(name) = args.scene.strip_prefix("builtin:") {
        if !BUILTIN_SCENES.contains(&name) {
            return Err(usage(format!(
                "unknown builtin scene `{name}` (available: {})",
                BUILTIN_SCENES.join(", ")
            )));
        }
    }
    let flag_params = RbsmParams {
        maxdist: args.maxdist.unwrap_or(RbsmParams::default().maxdist),
        depth_bias: args.bias.unwrap_or(RbsmParams::default().depth_bias),
        pcf_kernel: args.pcf_kernel.unwrap_or(RbsmParams::default().pcf_kernel),
    };
    flag_params.validate().map_err(|e| usage(e.to_string()))?;

    let mut scene = Scene::load(&args.scene)
        .with_context(|| format!("cannot load scene `{}`", args.scene))?;
    if let Some(Resolution(w, h)) = sm {
        scene = scene.with_shadow_map_size(w, h)?;
    }
    if let Some(Resolution(w, h)) = vp {
        scene = scene.with_viewport(w, h)?;
    }
    let mut params = scene.params;
    if let Some(m) = args.maxdist {
        params.maxdist = m;
    }
    if let Some(b) = args.bias {
        params.depth_bias = b;
    }
    if let Some(k) = args.pcf_kernel {
        params.pcf_kernel = k;
    }
    scene.params = params;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create output directory {}", args.out.display()))?;
    Ok(Prepared {
        scene,
        params,
        stem: scene_stem(&args.scene),
        out: args.out.clone(),
        threads: args.threads,
    })
}

fn write_image(img: &Image, path: &Path) -> Result<(), CliError> {
    img.write_ppm(path)?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Renders each mode to `<out>/<scene>_<mode>.ppm`; returns the written paths.
pub fn cmd_render(args: &RenderArgs) -> Result<Vec<PathBuf>, CliError> {
    let s = &args.scene;
    let p = prepare(s, single(&s.sm_res, "sm-res")?, single(&s.vp_res, "vp-res")?)?;
    let modes = if args.mode.is_empty() {
        vec![p.scene.algorithm]
    } else {
        args.mode.clone()
    };
    let images = with_threads(p.threads, || -> rbsm::Result<Vec<Image>> {
        let (w, h) = p.scene.shadow_map_size;
        let sm = rasterize_depth(&p.scene, w, h)?;
        let gbuffer = rasterize_camera(&p.scene);
        modes
            .iter()
            .map(|&m| shade_image(&gbuffer, &sm, m, &p.params))
            .collect()
    })??;
    let mut written = Vec::new();
    for (mode, img) in modes.iter().zip(&images) {
        let path = p.out.join(format!("{}_{mode}.ppm", p.stem));
        write_image(img, &path)?;
        written.push(path);
    }
    Ok(written)
}

/// Renders each mode and the reference, writes all images plus
/// `<scene>_compare.csv`, and returns one report per mode.
pub fn cmd_compare(args: &CompareArgs) -> Result<Vec<(Algorithm, DiffReport)>, CliError> {
    if args.mode.is_empty() {
        return Err(usage("compare needs at least one --mode"));
    }
    if !(args.band_radius >= 0.0 && args.band_radius.is_finite()) {
        return Err(usage(format!("--band-radius must be >= 0, got {}", args.band_radius)));
    }
    let s = &args.scene;
    let p = prepare(s, single(&s.sm_res, "sm-res")?, single(&s.vp_res, "vp-res")?)?;
    let (oracle, images) = with_threads(p.threads, || -> rbsm::Result<_> {
        let (w, h) = p.scene.shadow_map_size;
        let sm = rasterize_depth(&p.scene, w, h)?;
        let gbuffer = rasterize_camera(&p.scene);
        let oracle = raycast_shadow(&p.scene, &gbuffer, &p.scene.light);
        let images = args
            .mode
            .iter()
            .map(|&m| shade_image(&gbuffer, &sm, m, &p.params))
            .collect::<rbsm::Result<Vec<_>>>()?;
        Ok((oracle, images))
    })??;
    write_image(&oracle, &p.out.join(format!("{}_oracle.ppm", p.stem)))?;
    let mut csv = format!("{}\n", DiffReport::CSV_HEADER);
    let mut reports = Vec::new();
    for (&mode, img) in args.mode.iter().zip(&images) {
        write_image(img, &p.out.join(format!("{}_{mode}.ppm", p.stem)))?;
        let report = diff(img, &oracle, &oracle, args.band_radius)?;
        csv.push_str(&report.csv_row(mode.name()));
        csv.push('\n');
        reports.push((mode, report));
    }
    write_text(&p.out.join(format!("{}_compare.csv", p.stem)), &csv)?;
    Ok(reports)
}

/// Runs the timing harness and writes `<scene>_bench.csv`.
pub fn cmd_bench(args: &BenchArgs) -> Result<(PathBuf, Vec<BenchResult>), CliError> {
    let s = &args.scene;
    let config = BenchConfig {
        algorithms: if args.mode.is_empty() {
            Algorithm::ALL.to_vec()
        } else {
            args.mode.clone()
        },
        sm_resolutions: Vec::new(),
        viewports: Vec::new(),
        frames: args.frames,
        warmup: args.warmup,
        threads: s.threads.max(1),
    };
    if args.frames < bench::MIN_FRAMES {
        return Err(usage(format!(
            "--frames must be at least {}, got {}",
            bench::MIN_FRAMES,
            args.frames
        )));
    }
    if args.warmup < 1 {
        return Err(usage("--warmup must be at least 1"));
    }
    if s.threads == 0 {
        return Err(usage("bench needs an explicit --threads count of at least 1"));
    }
    let p = prepare(s, None, None)?;
    let pick = |list: &[Resolution], fallback: (u32, u32)| {
        if list.is_empty() {
            vec![fallback]
        } else {
            list.iter().map(|r| (r.0, r.1)).collect()
        }
    };
    let config = BenchConfig {
        sm_resolutions: pick(&s.sm_res, p.scene.shadow_map_size),
        viewports: pick(&s.vp_res, (p.scene.camera.width, p.scene.camera.height)),
        ..config
    };
    let results = bench::run_bench(&p.scene, &config)?;
    let path = p.out.join(format!("{}_bench.csv", p.stem));
    write_text(&path, &bench::to_csv(&results))?;
    Ok((path, results))
}

/// Writes `<scene>_shadow_map.smap`.
pub fn cmd_dump_sm(args: &SceneArgs) -> Result<PathBuf, CliError> {
    let p = prepare(args, single(&args.sm_res, "sm-res")?, single(&args.vp_res, "vp-res")?)?;
    let (w, h) = p.scene.shadow_map_size;
    let sm = with_threads(p.threads, || rasterize_depth(&p.scene, w, h))??;
    let path = p.out.join(format!("{}_shadow_map.smap", p.stem));
    sm.save_dump(&path)?;
    Ok(path)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Render(a) => {
            for path in cmd_render(&a)? {
                println!("wrote {}", path.display());
            }
        }
        Command::Compare(a) => {
            for (mode, report) in cmd_compare(&a)? {
                println!("[{mode}]");
                print!("{}", report.to_key_values());
            }
        }
        Command::Bench(a) => {
            let (path, results) = cmd_bench(&a)?;
            print!("{}", bench::to_csv(&results));
            println!("wrote {}", path.display());
        }
        Command::DumpSm(a) => println!("wrote {}", cmd_dump_sm(&a)?.display()),
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
