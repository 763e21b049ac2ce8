//! Frame-time harness: per algorithm, shadow-map size and viewport.
//!
//! Algorithms are interleaved frame by frame so slow drifts of the machine
//! (thermal, background load) hit all of them alike.

use std::hash::{DefaultHasher, Hash, Hasher};
use std::time::Instant;

use crate::raster::{rasterize_camera, rasterize_depth, shade_image, Image};
use crate::rbsm::Algorithm;
use crate::scene::Scene;
use crate::{Error, Result};

pub const DEFAULT_WARMUP: u32 = 3;
pub const DEFAULT_FRAMES: u32 = 30;
pub const MIN_FRAMES: u32 = 5;

pub const CSV_HEADER: &str =
    "algorithm,sm_w,sm_h,vp_w,vp_h,threads,frames,median_ms,mean_ms,std_ms,shade_median_ms";

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub sm_resolutions: Vec<(u32, u32)>,
    pub viewports: Vec<(u32, u32)>,
    pub frames: u32,
    pub warmup: u32,
    /// Worker threads for the render passes.
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algorithms: Algorithm::ALL.to_vec(),
            sm_resolutions: vec![(1024, 1024)],
            viewports: vec![(1280, 720)],
            frames: DEFAULT_FRAMES,
            warmup: DEFAULT_WARMUP,
            threads: 1,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.frames < MIN_FRAMES {
            return Err(Error::validation(format!(
                "at least {MIN_FRAMES} measured frames are required, got {}",
                self.frames
            )));
        }
        if self.warmup < 1 {
            return Err(Error::validation("at least one warmup frame is required"));
        }
        if self.threads < 1 {
            return Err(Error::validation("thread count must be at least 1"));
        }
        if self.algorithms.is_empty() || self.sm_resolutions.is_empty() || self.viewports.is_empty() {
            return Err(Error::validation(
                "algorithms, shadow map sizes and viewports must not be empty",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub median: f64,
    pub mean: f64,
    pub std: f64,
}

impl Stats {
    /// Summary of `samples`; `std` is the sample standard deviation.
    pub fn of(samples: &[f64]) -> Stats {
        let n = samples.len();
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n == 0 {
            f64::NAN
        } else if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Stats {
            median,
            mean,
            std: var.sqrt(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchResult {
    pub algorithm: Algorithm,
    pub sm_resolution: (u32, u32),
    pub viewport: (u32, u32),
    pub threads: usize,
    /// Milliseconds per measured frame: light pass + camera pass + shading.
    pub total_ms: Vec<f64>,
    /// Milliseconds per measured frame spent in shading alone.
    pub shade_ms: Vec<f64>,
    /// [`image_checksum`] of the last frame.
    pub checksum: u64,
}

impl BenchResult {
    pub fn frames(&self) -> usize {
        self.total_ms.len()
    }

    pub fn total(&self) -> Stats {
        Stats::of(&self.total_ms)
    }

    pub fn shade(&self) -> Stats {
        Stats::of(&self.shade_ms)
    }

    pub fn csv_row(&self) -> String {
        let t = self.total();
        format!(
            "{},{},{},{},{},{},{},{:.4},{:.4},{:.4},{:.4}",
            self.algorithm,
            self.sm_resolution.0,
            self.sm_resolution.1,
            self.viewport.0,
            self.viewport.1,
            self.threads,
            self.frames(),
            t.median,
            t.mean,
            t.std,
            self.shade().median
        )
    }
}

/// Hash of an image's visibility bits and coverage.
pub fn image_checksum(img: &Image) -> u64 {
    let mut h = DefaultHasher::new();
    img.width.hash(&mut h);
    img.height.hash(&mut h);
    for v in &img.values {
        v.to_bits().hash(&mut h);
    }
    img.coverage.hash(&mut h);
    h.finish()
}

pub fn to_csv(results: &[BenchResult]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in results {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Times every (algorithm, shadow-map size, viewport) combination on `scene`.
pub fn run_bench(scene: &Scene, config: &BenchConfig) -> Result<Vec<BenchResult>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::validation(format!("cannot start worker threads: {e}")))?;
    let params = scene.params;
    let mut results = Vec::new();
    for &(sw, sh) in &config.sm_resolutions {
        for &(vw, vh) in &config.viewports {
            let variant = scene.with_viewport(vw, vh)?.with_shadow_map_size(sw, sh)?;
            let mut rows: Vec<BenchResult> = config
                .algorithms
                .iter()
                .map(|&algorithm| BenchResult {
                    algorithm,
                    sm_resolution: (sw, sh),
                    viewport: (vw, vh),
                    threads: config.threads,
                    total_ms: Vec::with_capacity(config.frames as usize),
                    shade_ms: Vec::with_capacity(config.frames as usize),
                    checksum: 0,
                })
                .collect();
            for frame in 0..config.warmup + config.frames {
                for row in rows.iter_mut() {
                    let (total, shade, img) = pool.install(|| -> Result<_> {
                        let start = Instant::now();
                        let sm = rasterize_depth(&variant, sw, sh)?;
                        let gbuffer = rasterize_camera(&variant);
                        let shade_start = Instant::now();
                        let img = shade_image(&gbuffer, &sm, row.algorithm, &params)?;
                        let end = Instant::now();
                        Ok((end - start, end - shade_start, img))
                    })?;
                    if frame >= config.warmup {
                        row.total_ms.push(total.as_secs_f64() * 1e3);
                        row.shade_ms.push(shade.as_secs_f64() * 1e3);
                        row.checksum = image_checksum(&img);
                    }
                }
            }
            results.extend(rows);
        }
    }
    Ok(results)
}
