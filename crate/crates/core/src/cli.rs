//! Command-line front end: shapes → tensors → map coefficients → files.
//!
//! Four subcommands share one flag set:
//!
//! * `gpt`      — tensor tables as `gpt.json` / `gamma.json`
//! * `map`      — map coefficients `mu.json`, boundary images `phi{N}.csv`,
//!   and per-N SVG overlays of the recovered curve on the true boundary
//! * `validate` — invariant suite as `report.json` plus a printed table
//! * `eigs`     — eigenvalues as `eigs.csv`
//!
//! Flags may also be given in a plain `key=value` config file; command-line
//! flags take precedence. All outputs are deterministic: identical resolved
//! configurations produce byte-identical files.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::conformal::{recover_coefficients, vanishing_residuals, ConformalCoefficients};
use crate::error::{Error, Result};
use crate::geometry::{make_shape, BoundaryCurve, SampledBoundary, ShapeSpec};
use crate::gpt::{compute_gpt, gamma_tables, gpt_scaling_check, GammaTable, GptTable};
use crate::potential::{assemble_np, assemble_single_layer};
use crate::spectral::np_eigendecomposition;
use crate::validate::{consistency_identity, hausdorff_distance, Check, ValidationReport};

#[derive(Parser, Debug)]
#[command(
    name = "gptmap",
    about = "Polarization tensors and exterior conformal maps of planar domains",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute polarization tensor tables and their complex combinations.
    Gpt(CommonArgs),
    /// Recover the exterior map coefficients and boundary images.
    Map(CommonArgs),
    /// Run the invariant suite for the configured shape.
    Validate(CommonArgs),
    /// Compute the boundary-operator spectrum in the energy inner product.
    Eigs(EigsArgs),
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Shape descriptor, e.g. disk:1, ellipse:2,1, star:2,0.4,3, kite,
    /// union-disks:2
    #[arg(long)]
    pub shape: Option<String>,
    /// Nodes per boundary component (even, >= 16)
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Conductivity contrast of the inclusion (>= 0, != 1)
    #[arg(long)]
    pub k: Option<f64>,
    /// Tensor order (1..=24)
    #[arg(long)]
    pub order: Option<usize>,
    /// Map truncation orders, comma separated (map command)
    #[arg(long)]
    pub truncation: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output formats, comma separated subset of json,csv,svg
    #[arg(long)]
    pub format: Option<String>,
    /// Plain key=value config file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also dump the assembled operator matrices as CSV
    #[arg(long, default_value_t = false)]
    pub dump_matrices: bool,
    /// Also dump the sampled boundary as shape.json
    #[arg(long, default_value_t = false)]
    pub dump_shape: bool,
}

#[derive(Args, Debug, Default)]
pub struct EigsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of eigenpairs to keep
    #[arg(long)]
    pub modes: Option<usize>,
}

/// Fully resolved run configuration; validated before any computation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub shape: ShapeSpec,
    pub shape_str: String,
    pub nodes: usize,
    pub k: f64,
    pub order: usize,
    pub truncation: Vec<usize>,
    pub out: PathBuf,
    pub formats: Formats,
    pub modes: usize,
    pub dump_matrices: bool,
    pub dump_shape: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Formats {
    pub json: bool,
    pub csv: bool,
    pub svg: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats {
            json: true,
            csv: true,
            svg: true,
        }
    }
}

/// Echo of the resolved configuration carried into every output file.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub shape: String,
    pub nodes: usize,
    pub k: f64,
    pub lambda: f64,
    pub order: usize,
    pub components: usize,
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "{}:{}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Config(format!("cannot parse {what} '{s}'")))
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Config(format!("cannot parse {what} '{s}'")))
}

impl RunConfig {
    /// Merge defaults, config file and flags (flags win), then validate.
    pub fn resolve(common: &CommonArgs, modes: Option<usize>) -> Result<RunConfig> {
        let file = match &common.config {
            Some(p) => parse_config_file(p)?,
            None => BTreeMap::new(),
        };
        let pick = |flag: &Option<String>, key: &str| -> Option<String> {
            flag.clone().or_else(|| file.get(key).cloned())
        };

        let shape_str = pick(&common.shape, "shape").unwrap_or_else(|| "kite".to_string());
        let shape: ShapeSpec = shape_str.parse()?;
        // reject invalid geometry parameters before any computation
        let curve = make_shape(&shape)?;
        drop(curve);

        let nodes = match common.nodes {
            Some(n) => n,
            None => match file.get("nodes") {
                Some(s) => parse_usize(s, "nodes")?,
                None => 3072,
            },
        };
        if nodes < 16 || nodes % 2 != 0 {
            return Err(Error::Config(format!(
                "nodes must be even and >= 16, got {nodes}"
            )));
        }
        let k = match common.k {
            Some(k) => k,
            None => match file.get("k") {
                Some(s) => parse_f64(s, "k")?,
                None => 0.0,
            },
        };
        if !(k >= 0.0) || (k - 1.0).abs() < 1e-14 {
            return Err(Error::Config(format!(
                "conductivity must be >= 0 and != 1, got {k}"
            )));
        }
        let truncation_str = pick(&common.truncation, "truncation").unwrap_or_else(|| "6".into());
        let mut truncation = Vec::new();
        for part in truncation_str.split(',') {
            truncation.push(parse_usize(part.trim(), "truncation order")?);
        }
        truncation.sort_unstable();
        truncation.dedup();
        if truncation.is_empty() || truncation.contains(&0) {
            return Err(Error::Config("truncation orders must be >= 1".into()));
        }
        let max_trunc = *truncation.last().unwrap();

        let order = match common.order {
            Some(o) => o,
            None => match file.get("order") {
                Some(s) => parse_usize(s, "order")?,
                None => max_trunc.max(6),
            },
        };
        if order == 0 || order > 24 {
            return Err(Error::Config(format!(
                "order must be in 1..=24, got {order}"
            )));
        }
        if order < max_trunc {
            return Err(Error::Config(format!(
                "order {order} is below the largest truncation {max_trunc}"
            )));
        }
        if order > nodes / 8 {
            return Err(Error::Config(format!(
                "order {order} needs at least {} nodes, got {nodes}",
                8 * order
            )));
        }

        let out = common
            .out
            .clone()
            .or_else(|| file.get("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));

        let formats = match pick(&common.format, "format") {
            None => Formats::default(),
            Some(s) => {
                let mut f = Formats {
                    json: false,
                    csv: false,
                    svg: false,
                };
                for part in s.split(',') {
                    match part.trim() {
                        "json" => f.json = true,
                        "csv" => f.csv = true,
                        "svg" => f.svg = true,
                        other => {
                            return Err(Error::Config(format!("unknown format '{other}'")));
                        }
                    }
                }
                f
            }
        };

        let modes = match modes {
            Some(j) => j,
            None => match file.get("modes") {
                Some(s) => parse_usize(s, "modes")?,
                None => 64,
            },
        };
        if modes > nodes / 4 {
            return Err(Error::Config(format!(
                "modes {modes} exceeds nodes/4 = {}",
                nodes / 4
            )));
        }

        Ok(RunConfig {
            shape,
            shape_str: shape.to_string(),
            nodes,
            k,
            order,
            truncation,
            out,
            formats,
            modes,
            dump_matrices: common.dump_matrices,
            dump_shape: common.dump_shape,
        })
    }

    fn provenance(&self, components: usize) -> Provenance {
        Provenance {
            shape: self.shape_str.clone(),
            nodes: self.nodes,
            k: self.k,
            lambda: (self.k + 1.0) / (2.0 * (self.k - 1.0)),
            order: self.order,
            components,
        }
    }

    fn curve(&self) -> Result<BoundaryCurve> {
        make_shape(&self.shape)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::Io {
            path: parent.display().to_string(),
            source: e,
        })?;
    }
    std::fs::write(path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::NumericalFailure(format!("json serialization failed: {e}")))?;
    text.push('\n');
    write_file(path, &text)
}

fn matrix_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn complex_rows(m: &nalgebra::DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn complex_list(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn matrix_csv(m: &nalgebra::DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", m[(i, j)]);
        }
        out.push('\n');
    }
    out
}

/// JSON document for a tensor table.
pub fn gpt_json(gpt: &GptTable, prov: &Provenance) -> serde_json::Value {
    serde_json::json!({
        "provenance": prov,
        "cc": matrix_rows(&gpt.cc),
        "cs": matrix_rows(&gpt.cs),
        "sc": matrix_rows(&gpt.sc),
        "ss": matrix_rows(&gpt.ss),
    })
}

/// JSON document for the complex tensors (complex numbers as [re, im]).
pub fn gamma_json(gamma: &GammaTable, prov: &Provenance) -> serde_json::Value {
    serde_json::json!({
        "provenance": prov,
        "gamma1": complex_rows(&gamma.gamma1),
        "gamma2": complex_rows(&gamma.gamma2),
    })
}

/// Minimal SVG overlay: the true boundary in gray, the recovered image in
/// black, y axis flipped to screen orientation.
pub fn overlay_svg(boundary: &[Complex64], image: &[Complex64], title: &str) -> String {
    let all = boundary.iter().chain(image.iter());
    let (mut xmin, mut xmax, mut ymin, mut ymax) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in all {
        xmin = xmin.min(z.re);
        xmax = xmax.max(z.re);
        ymin = ymin.min(z.im);
        ymax = ymax.max(z.im);
    }
    let span = (xmax - xmin).max(ymax - ymin).max(1e-9);
    let margin = 0.05 * span;
    let (x0, y0) = (xmin - margin, ymin - margin);
    let (w, h) = (xmax - xmin + 2.0 * margin, ymax - ymin + 2.0 * margin);
    let flip = |z: &Complex64| (z.re, y0 + h - (z.im - y0));
    let polyline = |pts: &[Complex64]| {
        let mut s = String::new();
        for p in pts.iter().chain(pts.first()) {
            let (x, y) = flip(p);
            let _ = write!(s, "{x:.6},{y:.6} ");
        }
        s.trim_end().to_string()
    };
    let stroke = 0.008 * span;
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
            "  <!-- {} -->\n",
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"#aaaaaa\" stroke-width=\"{:.6}\"/>\n",
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{:.6}\"/>\n",
            "</svg>\n"
        ),
        x0,
        y0,
        w,
        h,
        title,
        polyline(boundary),
        1.5 * stroke,
        polyline(image),
        stroke,
    )
}

fn maybe_dump_shape(config: &RunConfig, sb: &SampledBoundary) -> Result<()> {
    if config.dump_shape {
        write_json(&config.out.join("shape.json"), &sb.to_json())?;
    }
    Ok(())
}

/// `gpt` subcommand: write `gpt.json` and `gamma.json`.
pub fn cmd_gpt(config: &RunConfig) -> Result<()> {
    let sb = config.curve()?.sample(config.nodes)?;
    let gpt = compute_gpt(&sb, config.k, config.order)?;
    let gamma = gamma_tables(&gpt);
    let prov = config.provenance(sb.components);
    if config.formats.json {
        write_json(&config.out.join("gpt.json"), &gpt_json(&gpt, &prov))?;
        write_json(&config.out.join("gamma.json"), &gamma_json(&gamma, &prov))?;
    }
    if config.dump_matrices {
        let np = assemble_np(&sb)?;
        write_file(&config.out.join("np.csv"), &matrix_csv(&np.matrix))?;
        if sb.components == 1 {
            let sl = assemble_single_layer(&sb)?;
            write_file(&config.out.join("sl.csv"), &matrix_csv(&sl.matrix))?;
        }
    }
    maybe_dump_shape(config, &sb)?;
    Ok(())
}

fn boundary_csv(image: &[Complex64]) -> String {
    let mut out = String::from("theta,re,im\n");
    for (i, z) in image.iter().enumerate() {
        let t = 2.0 * std::f64::consts::PI * i as f64 / image.len() as f64;
        let _ = writeln!(out, "{t},{},{}", z.re, z.im);
    }
    out
}

/// `map` subcommand: coefficients, boundary images and overlays.
pub fn cmd_map(config: &RunConfig) -> Result<()> {
    let curve = config.curve()?;
    if curve.component_count() != 1 {
        return Err(Error::UnsupportedGeometry(
            "map recovery needs a simply connected (single-component) shape".into(),
        ));
    }
    let sb = curve.sample(config.nodes)?;
    let gpt = compute_gpt(&sb, config.k, config.order)?;
    let gamma = gamma_tables(&gpt);
    let n_max = *config.truncation.last().unwrap();
    let coeffs = recover_coefficients(&gamma, n_max)?;
    let prov = config.provenance(sb.components);

    let image_points = sb.len().max(1024);
    let mut image_info = Vec::new();
    for &n in &config.truncation {
        let truncated = coeffs.truncated(n);
        let image = truncated.boundary_image(image_points);
        let d = hausdorff_distance(&image, &sb.nodes);
        image_info.push(serde_json::json!({ "n": n, "hausdorff": d }));
        if config.formats.csv {
            write_file(&config.out.join(format!("phi{n}.csv")), &boundary_csv(&image))?;
        }
        if config.formats.svg {
            let svg = overlay_svg(
                &sb.nodes,
                &image,
                &format!("shape={} N={n} nodes={}", config.shape_str, config.nodes),
            );
            write_file(&config.out.join(format!("phi{n}.svg")), &svg)?;
        }
    }
    if config.formats.json {
        let doc = serde_json::json!({
            "provenance": prov,
            "truncation": coeffs.order,
            "c": coeffs.c,
            "mu": complex_list(&coeffs.mu),
            "b": complex_list(&coeffs.b),
            "images": image_info,
        });
        write_json(&config.out.join("mu.json"), &doc)?;
    }
    maybe_dump_shape(config, &sb)?;
    Ok(())
}

/// `validate` subcommand: run the invariant suite, write the report, return
/// whether every mandatory check passed.
pub fn cmd_validate(config: &RunConfig) -> Result<bool> {
    let curve = config.curve()?;
    let sb = curve.sample(config.nodes)?;
    let order = config.order.max(3);
    let gpt = compute_gpt(&sb, config.k, order)?;
    let gamma = gamma_tables(&gpt);
    let mut report = ValidationReport::default();

    report.push(Check::near(
        "tensor-block-symmetry",
        gpt.block_asymmetry(),
        0.0,
        1e-6,
        "self-adjointness of the solved operator",
    ));
    let g11 = gamma.g2(1, 1);
    report.push(Check::near(
        "gamma2-11-imaginary-part",
        g11.im.abs() / g11.norm().max(1e-300),
        0.0,
        1e-8,
        "cross-block symmetry",
    ));

    let (lhs, rhs) = consistency_identity(&gamma)?;
    if sb.components == 1 {
        report.push(Check::near(
            "consistency-identity",
            (lhs - rhs).norm() / (lhs.norm() + 1.0),
            0.0,
            1e-4,
            "third-order identity on simply connected domains",
        ));

        let n_max = config.truncation.last().copied().unwrap_or(6).min(order);
        let coeffs = recover_coefficients(&gamma, n_max)?;
        let residuals = vanishing_residuals(&coeffs, &gamma, order.min(6));
        let worst = residuals.iter().cloned().fold(0.0, f64::max);
        report.push(Check::near(
            "vanishing-identities",
            worst,
            0.0,
            1e-5,
            "map coefficients annihilate the conjugate tensor column",
        ));

        let image = coeffs.boundary_image(sb.len().max(1024));
        let d = hausdorff_distance(&image, &sb.nodes);
        report.push(Check::near(
            "boundary-recovery-hausdorff",
            d / sb.diameter(),
            0.0,
            0.02,
            "truncated map image approximates the boundary",
        ));

        // dilation homogeneity at a reduced node count
        let scale = 1.5;
        let m_small = (config.nodes / 2).max(16.max(8 * order));
        let g_unit = compute_gpt(&curve.sample(m_small)?, config.k, order)?;
        let g_scaled = compute_gpt(&curve.scaled(scale).sample(m_small)?, config.k, order)?;
        let scaling = gpt_scaling_check(&g_unit, &g_scaled, scale);
        report.push(Check::near(
            "scaling-homogeneity",
            scaling.max_relative_error,
            0.0,
            1e-6,
            "tensor entries scale like s^(m+n)",
        ));
    } else {
        // negative controls: the simply connected identities must fail
        report.push(Check::exceeds(
            "consistency-identity-negative-control",
            (lhs - rhs).norm(),
            5.0,
            "identity fails on multiply connected domains",
        ));
        let coeffs = crate::conformal::recover_coefficients_diagnostic(&gamma, order.min(6))?;
        let residuals = vanishing_residuals(&coeffs, &gamma, order.min(6));
        report.push(Check::exceeds(
            "vanishing-identities-negative-control",
            residuals.iter().cloned().fold(0.0, f64::max),
            1e-2,
            "identities fail on multiply connected domains",
        ));
    }

    let prov = config.provenance(sb.components);
    if config.formats.json {
        let doc = serde_json::json!({
            "provenance": prov,
            "report": report,
            "all_pass": report.all_pass(),
        });
        write_json(&config.out.join("report.json"), &doc)?;
    }
    print!("{}", report.to_table());
    maybe_dump_shape(config, &sb)?;
    Ok(report.all_pass())
}

/// `eigs` subcommand: eigenvalue CSV `(j, λ_j)`.
pub fn cmd_eigs(config: &RunConfig) -> Result<()> {
    let sb = config.curve()?.sample(config.nodes)?;
    let np = assemble_np(&sb)?;
    let sl = assemble_single_layer(&sb)?;
    let spec = np_eigendecomposition(&np, &sl, config.modes)?;
    let mut out = String::from("j,lambda\n");
    for (j, lam) in spec.eigenvalues.iter().enumerate() {
        let _ = writeln!(out, "{},{lam}", j + 1);
    }
    write_file(&config.out.join("eigs.csv"), &out)?;
    maybe_dump_shape(config, &sb)?;
    Ok(())
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Gpt(common) => RunConfig::resolve(common, None).and_then(|c| cmd_gpt(&c).map(|_| true)),
        Command::Map(common) => RunConfig::resolve(common, None).and_then(|c| cmd_map(&c).map(|_| true)),
        Command::Validate(common) => {
            RunConfig::resolve(common, None).and_then(|c| cmd_validate(&c))
        }
        Command::Eigs(args) => {
            RunConfig::resolve(&args.common, args.modes).and_then(|c| cmd_eigs(&c).map(|_| true))
        }
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("validation failed");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
