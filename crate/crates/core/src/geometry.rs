//! Parametrized closed boundary curves and quadrature-ready samplings.
//!
//! A [`BoundaryCurve`] is one or more smooth closed curves t ∈ [0,2π) → ℂ,
//! each counterclockwise, with analytic first and second derivatives.
//! [`BoundaryCurve::sample`] evaluates a uniform parameter grid and returns a
//! [`SampledBoundary`] carrying nodes, outward normals, signed curvature and
//! trapezoidal arc-length weights. For smooth closed curves the uniform
//! trapezoidal rule is spectrally accurate, which is what makes the dense
//! boundary-integral machinery downstream converge fast.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One radial Fourier mode `cos_amp*cos(freq t) + sin_amp*sin(freq t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarMode {
    pub freq: u32,
    pub cos_amp: f64,
    pub sin_amp: f64,
}

impl PolarMode {
    fn value(&self, t: f64) -> f64 {
        let a = self.freq as f64 * t;
        self.cos_amp * a.cos() + self.sin_amp * a.sin()
    }
    fn d1(&self, t: f64) -> f64 {
        let k = self.freq as f64;
        let a = k * t;
        -self.cos_amp * k * a.sin() + self.sin_amp * k * a.cos()
    }
    fn d2(&self, t: f64) -> f64 {
        let k = self.freq as f64;
        let a = k * t;
        -self.cos_amp * k * k * a.cos() - self.sin_amp * k * k * a.sin()
    }
}

/// Base parametrizations, all counterclockwise over t ∈ [0,2π).
#[derive(Debug, Clone, PartialEq)]
enum CurveKind {
    /// R e^{it}
    Circle { radius: f64 },
    /// a cos t + i b sin t
    Ellipse { a: f64, b: f64 },
    /// r(t) e^{it} with r(t) = base + Σ modes
    Polar { base: f64, modes: Vec<PolarMode> },
    /// (cos t + a2 cos 2t + a1) + i b sin t
    Kite { a1: f64, a2: f64, b: f64 },
    /// (1 + ρ(t)) (a cos t + i b sin t) with ρ(t) = Σ modes
    PerturbedEllipse { a: f64, b: f64, modes: Vec<PolarMode> },
}

impl CurveKind {
    /// Position and first two parameter derivatives at t.
    fn eval(&self, t: f64) -> (Complex64, Complex64, Complex64) {
        let eit = Complex64::new(t.cos(), t.sin());
        match self {
            CurveKind::Circle { radius } => {
                let p = radius * eit;
                (p, Complex64::i() * p, -p)
            }
            CurveKind::Ellipse { a, b } => {
                let p = Complex64::new(a * t.cos(), b * t.sin());
                let d1 = Complex64::new(-a * t.sin(), b * t.cos());
                (p, d1, -p)
            }
            CurveKind::Polar { base, modes } => {
                let r: f64 = base + modes.iter().map(|m| m.value(t)).sum::<f64>();
                let r1: f64 = modes.iter().map(|m| m.d1(t)).sum();
                let r2: f64 = modes.iter().map(|m| m.d2(t)).sum();
                let i = Complex64::i();
                let p = r * eit;
                let d1 = (r1 + i * r) * eit;
                let d2 = (r2 + 2.0 * i * r1 - r) * eit;
                (p, d1, d2)
            }
            CurveKind::Kite { a1, a2, b } => {
                let p = Complex64::new(t.cos() + a2 * (2.0 * t).cos() + a1, b * t.sin());
                let d1 = Complex64::new(-t.sin() - 2.0 * a2 * (2.0 * t).sin(), b * t.cos());
                let d2 = Complex64::new(-t.cos() - 4.0 * a2 * (2.0 * t).cos(), -b * t.sin());
                (p, d1, d2)
            }
            CurveKind::PerturbedEllipse { a, b, modes } => {
                let rho: f64 = modes.iter().map(|m| m.value(t)).sum();
                let rho1: f64 = modes.iter().map(|m| m.d1(t)).sum();
                let rho2: f64 = modes.iter().map(|m| m.d2(t)).sum();
                let q = Complex64::new(a * t.cos(), b * t.sin());
                let q1 = Complex64::new(-a * t.sin(), b * t.cos());
                let q2 = -q;
                let p = (1.0 + rho) * q;
                let d1 = rho1 * q + (1.0 + rho) * q1;
                let d2 = rho2 * q + 2.0 * rho1 * q1 + (1.0 + rho) * q2;
                (p, d1, d2)
            }
        }
    }
}

/// Similarity transform z ↦ scale·e^{iθ}·z + shift applied on top of a base curve.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Similarity {
    factor: Complex64, // scale * e^{iθ}
    shift: Complex64,
}

impl Similarity {
    fn identity() -> Self {
        Similarity {
            factor: Complex64::new(1.0, 0.0),
            shift: Complex64::new(0.0, 0.0),
        }
    }
}

/// One smooth closed component.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    kind: CurveKind,
    map: Similarity,
}

impl Component {
    /// Position and first two derivatives of the transformed curve.
    pub fn eval(&self, t: f64) -> (Complex64, Complex64, Complex64) {
        let (p, d1, d2) = self.kind.eval(t);
        (
            self.map.factor * p + self.map.shift,
            self.map.factor * d1,
            self.map.factor * d2,
        )
    }

    pub fn position(&self, t: f64) -> Complex64 {
        self.eval(t).0
    }
}

/// A closed boundary: one component for simply connected domains, several for
/// disjoint unions.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    components: Vec<Component>,
}

/// Quadrature-ready sampling of a [`BoundaryCurve`]: uniform parameter grid
/// per component, outward unit normals (tangent rotated −90°), signed
/// curvature and weights `(2π/M)·|p'(t)|`.
#[derive(Debug, Clone)]
pub struct SampledBoundary {
    pub nodes: Vec<Complex64>,
    pub normals: Vec<Complex64>,
    pub curvature: Vec<f64>,
    pub weights: Vec<f64>,
    pub component_of: Vec<usize>,
    /// Parameter values of the nodes (per component they are 2πi/M).
    pub params: Vec<f64>,
    pub components: usize,
    pub nodes_per_component: usize,
}

impl BoundaryCurve {
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Translate the whole boundary by `shift`.
    pub fn translated(&self, shift: Complex64) -> BoundaryCurve {
        self.mapped(Complex64::new(1.0, 0.0), shift)
    }

    /// Rotate the whole boundary about the origin by `angle`.
    pub fn rotated(&self, angle: f64) -> BoundaryCurve {
        self.mapped(Complex64::new(angle.cos(), angle.sin()), Complex64::new(0.0, 0.0))
    }

    /// Scale the whole boundary about the origin by `s > 0`.
    pub fn scaled(&self, s: f64) -> BoundaryCurve {
        self.mapped(Complex64::new(s, 0.0), Complex64::new(0.0, 0.0))
    }

    fn mapped(&self, factor: Complex64, shift: Complex64) -> BoundaryCurve {
        BoundaryCurve {
            components: self
                .components
                .iter()
                .map(|c| Component {
                    kind: c.kind.clone(),
                    map: Similarity {
                        factor: factor * c.map.factor,
                        shift: factor * c.map.shift + shift,
                    },
                })
                .collect(),
        }
    }

    /// Sample `nodes_per_component` uniform parameter nodes on every component.
    ///
    /// `M` must be even and at least 16 so that the periodic quadrature rules
    /// downstream are well defined.
    pub fn sample(&self, nodes_per_component: usize) -> Result<SampledBoundary> {
        let m = nodes_per_component;
        if m < 16 || m % 2 != 0 {
            return Err(Error::InvalidResolution(format!(
                "node count per component must be even and >= 16, got {m}"
            )));
        }
        let total = m * self.components.len();
        let mut sb = SampledBoundary {
            nodes: Vec::with_capacity(total),
            normals: Vec::with_capacity(total),
            curvature: Vec::with_capacity(total),
            weights: Vec::with_capacity(total),
            component_of: Vec::with_capacity(total),
            params: Vec::with_capacity(total),
            components: self.components.len(),
            nodes_per_component: m,
        };
        let h = 2.0 * PI / m as f64;
        for (ci, comp) in self.components.iter().enumerate() {
            for i in 0..m {
                let t = h * i as f64;
                let (p, d1, d2) = comp.eval(t);
                let speed = d1.norm();
                if speed <= 0.0 || !speed.is_finite() {
                    return Err(Error::InvalidShape(format!(
                        "degenerate parametrization: |p'({t})| = {speed} on component {ci}"
                    )));
                }
                // outward normal for a counterclockwise curve: tangent rotated -90deg
                let normal = -Complex64::i() * d1 / speed;
                let kappa = (d1.conj() * d2).im / (speed * speed * speed);
                sb.nodes.push(p);
                sb.normals.push(normal);
                sb.curvature.push(kappa);
                sb.weights.push(h * speed);
                sb.component_of.push(ci);
                sb.params.push(t);
            }
        }
        if self.components.len() > 1 {
            let dmin = sb.min_component_gap();
            if dmin <= 1e-12 * sb.diameter() {
                return Err(Error::InvalidShape(format!(
                    "components touch or overlap at sample resolution (min gap {dmin:.3e})"
                )));
            }
        }
        Ok(sb)
    }
}

impl SampledBoundary {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Total arc length (sum of weights).
    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Arc length of one component.
    pub fn component_perimeter(&self, component: usize) -> f64 {
        self.weights
            .iter()
            .zip(&self.component_of)
            .filter(|(_, &c)| c == component)
            .map(|(w, _)| w)
            .sum()
    }

    /// Arc-length centroid of the node set.
    pub fn centroid(&self) -> Complex64 {
        let total = self.perimeter();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| p * *w)
            .sum::<Complex64>()
            / total
    }

    /// Enclosed area by the boundary form ½∮⟨p,ν⟩ dσ (shoelace rule for the
    /// sampled curve); sums over all components.
    pub fn area(&self) -> f64 {
        0.5 * self
            .nodes
            .iter()
            .zip(self.normals.iter().zip(&self.weights))
            .map(|(p, (nu, w))| (p.conj() * nu).re * w)
            .sum::<f64>()
    }

    /// Largest node-to-node distance, a cheap diameter proxy.
    pub fn diameter(&self) -> f64 {
        let c = self.centroid();
        2.0 * self
            .nodes
            .iter()
            .map(|p| (p - c).norm())
            .fold(0.0, f64::max)
    }

    /// Minimum distance between nodes of distinct components.
    pub fn min_component_gap(&self) -> f64 {
        let mut dmin = f64::INFINITY;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if self.component_of[i] != self.component_of[j] {
                    dmin = dmin.min((self.nodes[i] - self.nodes[j]).norm());
                }
            }
        }
        dmin
    }

    /// Weighted mean `Σ wᵢ vᵢ / Σ wᵢ` of a node vector.
    pub fn weighted_mean(&self, v: &[f64]) -> f64 {
        let s: f64 = v.iter().zip(&self.weights).map(|(x, w)| x * w).sum();
        s / self.perimeter()
    }

    /// JSON value: list of components, each a list of [x, y] nodes.
    pub fn to_json(&self) -> serde_json::Value {
        let mut comps: Vec<Vec<[f64; 2]>> = vec![Vec::new(); self.components];
        for (p, &c) in self.nodes.iter().zip(&self.component_of) {
            comps[c].push([p.re, p.im]);
        }
        serde_json::json!({ "components": comps })
    }
}

/// Named shape descriptors accepted by the CLI and config files.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec {
    Disk {
        radius: f64,
        center: (f64, f64),
    },
    Ellipse {
        a: f64,
        b: f64,
        center: (f64, f64),
        rotation: f64,
    },
    /// Polar curve r(θ) = base + amplitude·cos(freq θ).
    Star {
        base: f64,
        amplitude: f64,
        freq: u32,
    },
    Kite {
        a1: f64,
        a2: f64,
        b: f64,
    },
    /// Ellipse with a radial Fourier perturbation (1+ρ(t)) scaling.
    PerturbedEllipse {
        a: f64,
        b: f64,
        modes: Vec<PolarMode>,
    },
    /// Disjoint union of disks.
    UnionDisks {
        disks: Vec<(f64, (f64, f64))>,
    },
}

impl ShapeSpec {
    /// The standard kite used throughout the examples:
    /// (cos t + 0.65 cos 2t − 0.65, 1.5 sin t).
    pub fn default_kite() -> ShapeSpec {
        ShapeSpec::Kite {
            a1: -0.65,
            a2: 0.65,
            b: 1.5,
        }
    }
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeSpec::Disk { radius, center } => {
                if *center == (0.0, 0.0) {
                    write!(f, "disk:{radius}")
                } else {
                    write!(f, "disk:{radius},{},{}", center.0, center.1)
                }
            }
            ShapeSpec::Ellipse {
                a,
                b,
                center,
                rotation,
            } => {
                if *center == (0.0, 0.0) && *rotation == 0.0 {
                    write!(f, "ellipse:{a},{b}")
                } else {
                    write!(f, "ellipse:{a},{b},{},{},{rotation}", center.0, center.1)
                }
            }
            ShapeSpec::Star {
                base,
                amplitude,
                freq,
            } => write!(f, "star:{base},{amplitude},{freq}"),
            ShapeSpec::Kite { a1, a2, b } => write!(f, "kite:{a1},{a2},{b}"),
            ShapeSpec::PerturbedEllipse { a, b, modes } => {
                write!(f, "perturbed-ellipse:{a},{b}")?;
                for m in modes {
                    write!(f, ",{},{}", m.cos_amp, m.sin_amp)?;
                }
                Ok(())
            }
            ShapeSpec::UnionDisks { disks } => {
                write!(f, "union-disks:")?;
                for (i, (r, (x, y))) in disks.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{r},{x},{y}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("cannot parse number '{p}' in shape spec")))
        })
        .collect()
}

impl FromStr for ShapeSpec {
    type Err = Error;

    /// Grammar: `name[:args]` with comma-separated numeric arguments.
    ///
    /// - `disk:R[,cx,cy]`
    /// - `ellipse:a,b[,cx,cy[,rot]]`
    /// - `star:r0,eps,p`
    /// - `kite[:a1,a2,b]`
    /// - `perturbed-ellipse:a,b,c1,s1[,c2,s2,...]`
    /// - `union-disks:d` (unit disks at (±d,0)) or `union-disks:r,x,y;r,x,y;...`
    fn from_str(s: &str) -> Result<ShapeSpec> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), a.trim()),
            None => (s.trim(), ""),
        };
        match name {
            "disk" => {
                let v = parse_floats(args)?;
                match v.len() {
                    1 => Ok(ShapeSpec::Disk {
                        radius: v[0],
                        center: (0.0, 0.0),
                    }),
                    3 => Ok(ShapeSpec::Disk {
                        radius: v[0],
                        center: (v[1], v[2]),
                    }),
                    n => Err(Error::Config(format!(
                        "disk takes 1 or 3 arguments, got {n}"
                    ))),
                }
            }
            "ellipse" => {
                let v = parse_floats(args)?;
                match v.len() {
                    2 => Ok(ShapeSpec::Ellipse {
                        a: v[0],
                        b: v[1],
                        center: (0.0, 0.0),
                        rotation: 0.0,
                    }),
                    4 => Ok(ShapeSpec::Ellipse {
                        a: v[0],
                        b: v[1],
                        center: (v[2], v[3]),
                        rotation: 0.0,
                    }),
                    5 => Ok(ShapeSpec::Ellipse {
                        a: v[0],
                        b: v[1],
                        center: (v[2], v[3]),
                        rotation: v[4],
                    }),
                    n => Err(Error::Config(format!(
                        "ellipse takes 2, 4 or 5 arguments, got {n}"
                    ))),
                }
            }
            "star" => {
                let v = parse_floats(args)?;
                if v.len() != 3 {
                    return Err(Error::Config(format!(
                        "star takes 3 arguments (r0,eps,p), got {}",
                        v.len()
                    )));
                }
                let p = v[2];
                if p <= 0.0 || p.fract() != 0.0 {
                    return Err(Error::Config(format!(
                        "star frequency must be a positive integer, got {p}"
                    )));
                }
                Ok(ShapeSpec::Star {
                    base: v[0],
                    amplitude: v[1],
                    freq: p as u32,
                })
            }
            "kite" => {
                if args.is_empty() {
                    return Ok(ShapeSpec::default_kite());
                }
                let v = parse_floats(args)?;
                if v.len() != 3 {
                    return Err(Error::Config(format!(
                        "kite takes 0 or 3 arguments (a1,a2,b), got {}",
                        v.len()
                    )));
                }
                Ok(ShapeSpec::Kite {
                    a1: v[0],
                    a2: v[1],
                    b: v[2],
                })
            }
            "perturbed-ellipse" => {
                let v = parse_floats(args)?;
                if v.len() < 4 || (v.len() - 2) % 2 != 0 {
                    return Err(Error::Config(
                        "perturbed-ellipse takes a,b followed by cos/sin amplitude pairs".into(),
                    ));
                }
                let modes = v[2..]
                    .chunks(2)
                    .enumerate()
                    .map(|(j, c)| PolarMode {
                        freq: (j + 1) as u32,
                        cos_amp: c[0],
                        sin_amp: c[1],
                    })
                    .collect();
                Ok(ShapeSpec::PerturbedEllipse {
                    a: v[0],
                    b: v[1],
                    modes,
                })
            }
            "union-disks" => {
                if !args.contains(';') {
                    let v = parse_floats(args)?;
                    if v.len() != 1 {
                        return Err(Error::Config(
                            "union-disks shorthand takes a single separation d".into(),
                        ));
                    }
                    let d = v[0];
                    return Ok(ShapeSpec::UnionDisks {
                        disks: vec![(1.0, (-d, 0.0)), (1.0, (d, 0.0))],
                    });
                }
                let mut disks = Vec::new();
                for part in args.split(';') {
                    let v = parse_floats(part)?;
                    if v.len() != 3 {
                        return Err(Error::Config(
                            "each union-disks entry is r,x,y".into(),
                        ));
                    }
                    disks.push((v[0], (v[1], v[2])));
                }
                Ok(ShapeSpec::UnionDisks { disks })
            }
            other => Err(Error::Config(format!("unknown shape '{other}'"))),
        }
    }
}

/// Build the boundary curve described by `spec`, validating its parameters.
pub fn make_shape(spec: &ShapeSpec) -> Result<BoundaryCurve> {
    let component = |kind: CurveKind, shift: Complex64, factor: Complex64| Component {
        kind,
        map: Similarity { factor, shift },
    };
    let one = Complex64::new(1.0, 0.0);
    match spec {
        ShapeSpec::Disk { radius, center } => {
            if *radius <= 0.0 {
                return Err(Error::InvalidShape(format!(
                    "disk radius must be positive, got {radius}"
                )));
            }
            Ok(BoundaryCurve {
                components: vec![component(
                    CurveKind::Circle { radius: *radius },
                    Complex64::new(center.0, center.1),
                    one,
                )],
            })
        }
        ShapeSpec::Ellipse {
            a,
            b,
            center,
            rotation,
        } => {
            if *a <= 0.0 || *b <= 0.0 {
                return Err(Error::InvalidShape(format!(
                    "ellipse axes must be positive, got a={a}, b={b}"
                )));
            }
            Ok(BoundaryCurve {
                components: vec![component(
                    CurveKind::Ellipse { a: *a, b: *b },
                    Complex64::new(center.0, center.1),
                    Complex64::new(rotation.cos(), rotation.sin()),
                )],
            })
        }
        ShapeSpec::Star {
            base,
            amplitude,
            freq,
        } => {
            if *base <= 0.0 {
                return Err(Error::InvalidShape(format!(
                    "star base radius must be positive, got {base}"
                )));
            }
            if amplitude.abs() >= *base {
                return Err(Error::InvalidShape(format!(
                    "star amplitude {amplitude} >= base radius {base}: curve self-intersects"
                )));
            }
            Ok(BoundaryCurve {
                components: vec![component(
                    CurveKind::Polar {
                        base: *base,
                        modes: vec![PolarMode {
                            freq: *freq,
                            cos_amp: *amplitude,
                            sin_amp: 0.0,
                        }],
                    },
                    Complex64::new(0.0, 0.0),
                    one,
                )],
            })
        }
        ShapeSpec::Kite { a1, a2, b } => {
            if *b <= 0.0 {
                return Err(Error::InvalidShape(format!(
                    "kite vertical axis must be positive, got {b}"
                )));
            }
            Ok(BoundaryCurve {
                components: vec![component(
                    CurveKind::Kite {
                        a1: *a1,
                        a2: *a2,
                        b: *b,
                    },
                    Complex64::new(0.0, 0.0),
                    one,
                )],
            })
        }
        ShapeSpec::PerturbedEllipse { a, b, modes } => {
            if *a <= 0.0 || *b <= 0.0 {
                return Err(Error::InvalidShape(format!(
                    "ellipse axes must be positive, got a={a}, b={b}"
                )));
            }
            // radial factor must stay positive or the curve degenerates
            let min_factor = (0..4096)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / 4096.0;
                    1.0 + modes.iter().map(|m| m.value(t)).sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min);
            if min_factor <= 0.0 {
                return Err(Error::InvalidShape(format!(
                    "radial perturbation reaches factor {min_factor:.3} <= 0: curve self-intersects"
                )));
            }
            Ok(BoundaryCurve {
                components: vec![component(
                    CurveKind::PerturbedEllipse {
                        a: *a,
                        b: *b,
                        modes: modes.clone(),
                    },
                    Complex64::new(0.0, 0.0),
                    one,
                )],
            })
        }
        ShapeSpec::UnionDisks { disks } => {
            if disks.is_empty() {
                return Err(Error::InvalidShape("union-disks needs at least one disk".into()));
            }
            let mut components = Vec::new();
            for (r, (x, y)) in disks {
                if *r <= 0.0 {
                    return Err(Error::InvalidShape(format!(
                        "disk radius must be positive, got {r}"
                    )));
                }
                components.push(component(
                    CurveKind::Circle { radius: *r },
                    Complex64::new(*x, *y),
                    one,
                ));
            }
            // pairwise disjointness of the exact disks
            for i in 0..disks.len() {
                for j in (i + 1)..disks.len() {
                    let (ri, (xi, yi)) = disks[i];
                    let (rj, (xj, yj)) = disks[j];
                    let d = ((xi - xj).powi(2) + (yi - yj).powi(2)).sqrt();
                    if d <= ri + rj {
                        return Err(Error::InvalidShape(format!(
                            "disks {i} and {j} are not disjoint (centers {d:.3} apart, radii sum {})",
                            ri + rj
                        )));
                    }
                }
            }
            Ok(BoundaryCurve { components })
        }
    }
}
