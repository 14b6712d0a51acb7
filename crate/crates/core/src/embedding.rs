//! Explicit coordinates for `A_n(a, c)` on the unit 3-sphere in 4-space.
//!
//! The antiprism is inscribed in a "cylinder" around the great circle of
//! the last two coordinates. Top vertices sit at angles `2 pi k / n` in the
//! first two coordinates, bottom vertices are offset by `pi / n`, and the
//! two rings are separated by the face-center distance `d` along the axis.
//! Faces become half-spaces `<normal, x> >= 0` of the cone over the solid,
//! which gives dihedral angles, vertex figures and a Monte Carlo volume
//! independent of the closed-form formulas.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::antiprism::{center_distance, AntiprismSpec, DihedralAngles};
use crate::error::{Error, Result};
use crate::volume::{Method, VolumeEstimate, SPHERE_VOLUME};

/// Containment slack for vertices against face half-spaces.
pub const CONTAINMENT_TOL: f64 = 1e-12;
/// Tolerance for the measured edge lengths of the embedding.
pub const METRIC_TOL: f64 = 1e-12;
/// Below this the vertices of a face are treated as spanning less than a
/// 3-dimensional subspace.
pub const RANK_TOL: f64 = 1e-10;
/// Symmetric copies of an edge must have dihedral angles this close.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Samples per independently seeded Monte Carlo stream.
pub const MC_BLOCK: u64 = 1 << 16;

type Vec4 = [f64; 4];

fn dot(u: &Vec4, v: &Vec4) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
}

fn sub(u: &Vec4, v: &Vec4) -> Vec4 {
    [u[0] - v[0], u[1] - v[1], u[2] - v[2], u[3] - v[3]]
}

fn norm(u: &Vec4) -> f64 {
    dot(u, u).sqrt()
}

fn scaled(u: &Vec4, s: f64) -> Vec4 {
    [u[0] * s, u[1] * s, u[2] * s, u[3] * s]
}

fn normalized(u: &Vec4) -> Vec4 {
    scaled(u, 1.0 / norm(u))
}

/// Angle between two unit vectors, accurate near 0 and `pi`.
fn unit_angle(u: &Vec4, v: &Vec4) -> f64 {
    2.0 * (0.5 * norm(&sub(u, v))).min(1.0).asin()
}

/// Vector orthogonal to `u`, `v` and `w`, with length equal to the 3-volume
/// of the parallelepiped they span.
fn cross3(u: &Vec4, v: &Vec4, w: &Vec4) -> Vec4 {
    let minor = |i: usize, j: usize, k: usize| {
        u[i] * (v[j] * w[k] - v[k] * w[j]) - u[j] * (v[i] * w[k] - v[k] * w[i])
            + u[k] * (v[i] * w[j] - v[j] * w[i])
    };
    [
        minor(1, 2, 3),
        -minor(0, 2, 3),
        minor(0, 1, 3),
        -minor(0, 1, 2),
    ]
}

/// Unit tangent at `p` of the great arc from `p` towards `q`.
fn tangent(p: &Vec4, q: &Vec4) -> Vec4 {
    let d = sub(q, p);
    let t = sub(&d, &scaled(p, dot(&d, p)));
    normalized(&t)
}

/// A point of the unit 3-sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPoint4([f64; 4]);

impl UnitPoint4 {
    pub const NORM_TOL: f64 = 1e-14;

    pub fn new(coords: [f64; 4]) -> Result<Self> {
        let len = norm(&coords);
        if len.is_nan() || (len - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::domain(
                "UnitPoint4::new",
                format!("norm {len} differs from 1"),
            ));
        }
        Ok(UnitPoint4(coords))
    }

    pub fn coords(&self) -> &[f64; 4] {
        &self.0
    }

    pub fn dot(&self, other: &UnitPoint4) -> f64 {
        dot(&self.0, &other.0)
    }

    /// Spherical distance.
    pub fn distance(&self, other: &UnitPoint4) -> f64 {
        unit_angle(&self.0, &other.0)
    }
}

/// A face as a cycle of vertex indices. `normal` is the inward unit normal
/// of its great 2-sphere once [`face_halfspaces`] has run.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub cycle: Vec<usize>,
    pub normal: Option<[f64; 4]>,
}

impl Face {
    fn has_edge(&self, u: usize, v: usize) -> bool {
        let len = self.cycle.len();
        (0..len).any(|i| {
            let (p, q) = (self.cycle[i], self.cycle[(i + 1) % len]);
            (p, q) == (u, v) || (p, q) == (v, u)
        })
    }
}

/// Vertices `0..n` form the top ring, `n..2n` the bottom ring.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedPolytope {
    pub n: u32,
    pub a: f64,
    pub c: f64,
    /// Distance between the face centers used for the construction.
    pub center_distance: f64,
    pub vertices: Vec<UnitPoint4>,
    pub faces: Vec<Face>,
}

impl EmbeddedPolytope {
    pub fn top(&self, k: usize) -> usize {
        k % self.n as usize
    }

    pub fn bottom(&self, k: usize) -> usize {
        self.n as usize + k % self.n as usize
    }

    fn point(&self, i: usize) -> &Vec4 {
        self.vertices[i].coords()
    }

    /// Inner product of the measured centers of the top and bottom faces
    /// (normalized vertex sums of the two rings).
    pub fn face_center_cos(&self) -> f64 {
        let n = self.n as usize;
        let center = |range: std::ops::Range<usize>| {
            let sum = range.fold([0.0; 4], |acc, i| {
                let p = self.point(i);
                [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2], acc[3] + p[3]]
            });
            normalized(&sum)
        };
        dot(&center(0..n), &center(n..2 * n))
    }

    /// Inward normals of all faces; errors if [`face_halfspaces`] has not
    /// been applied.
    pub fn normals(&self) -> Result<Vec<[f64; 4]>> {
        self.faces
            .iter()
            .map(|f| {
                f.normal.ok_or_else(|| {
                    Error::domain("EmbeddedPolytope::normals", "face normals not computed")
                })
            })
            .collect()
    }

    /// Whether the direction `x` lies in the cone over the solid.
    pub fn contains(&self, x: &[f64; 4]) -> Result<bool> {
        Ok(self.normals()?.iter().all(|nrm| dot(nrm, x) >= 0.0))
    }

    fn faces_at_edge(&self, u: usize, v: usize) -> Result<(&Face, &Face)> {
        let mut found = self.faces.iter().filter(|f| f.has_edge(u, v));
        match (found.next(), found.next(), found.next()) {
            (Some(f), Some(g), None) => Ok((f, g)),
            _ => Err(Error::Incidence(format!(
                "edge ({u}, {v}) does not bound exactly two faces"
            ))),
        }
    }

    /// Dihedral angle of the solid along the edge `(u, v)`.
    pub fn edge_dihedral(&self, u: usize, v: usize) -> Result<f64> {
        let (f, g) = self.faces_at_edge(u, v)?;
        let missing = || Error::domain("edge_dihedral", "face normals not computed");
        let nf = f.normal.ok_or_else(missing)?;
        let ng = g.normal.ok_or_else(missing)?;
        Ok(PI - unit_angle(&nf, &ng))
    }
}

/// Image of `p` under the order-`2n` mirror rotation: rotation by `pi / n`
/// in the first two coordinates followed by negation of the fourth.
pub fn mirror_rotation(n: u32, p: &[f64; 4]) -> [f64; 4] {
    let (s, c) = (PI / f64::from(n)).sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1], p[2], -p[3]]
}

/// Largest distance from the mirror-rotated image of a vertex to the
/// nearest vertex of the polytope.
pub fn symmetry_defect(poly: &EmbeddedPolytope) -> f64 {
    poly.vertices
        .iter()
        .map(|v| {
            let image = mirror_rotation(poly.n, v.coords());
            poly.vertices
                .iter()
                .map(|w| norm(&sub(&image, w.coords())))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Coordinates of `A_n(a, c)`. Requires the spec strictly inside the
/// existence region.
///
/// The axial separation of the rings is the pole angle of
/// [`center_distance`], obtained from the circumradius, apothem and lateral
/// height, so the closed-form `cos d` stays an independent check.
pub fn embed(spec: &AntiprismSpec) -> Result<EmbeddedPolytope> {
    const OP: &str = "embed";
    spec.require_interior()?;
    let frame = center_distance(spec)?;
    let n = spec.n as usize;
    let (sin_r, cos_r) = frame.circumradius.sin_cos();
    let (sin_hd, cos_hd) = (0.5 * frame.pole_angle).sin_cos();
    let step = PI / f64::from(spec.n);
    let ring = |offset: f64, axial: f64| {
        (0..n).map(move |k| {
            let (s, c) = (2.0 * k as f64 * step + offset).sin_cos();
            [sin_r * c, sin_r * s, cos_r * cos_hd, cos_r * axial]
        })
    };
    let vertices = ring(0.0, sin_hd)
        .chain(ring(step, -sin_hd))
        .map(UnitPoint4::new)
        .collect::<Result<Vec<_>>>()?;

    let mut faces = Vec::with_capacity(2 * n + 2);
    if n >= 3 {
        faces.push(Face {
            cycle: (0..n).collect(),
            normal: None,
        });
        faces.push(Face {
            cycle: (n..2 * n).rev().collect(),
            normal: None,
        });
    }
    for k in 0..n {
        let next = (k + 1) % n;
        faces.push(Face {
            cycle: vec![k, next, n + k],
            normal: None,
        });
        faces.push(Face {
            cycle: vec![n + k, n + next, next],
            normal: None,
        });
    }
    let poly = EmbeddedPolytope {
        n: spec.n,
        a: spec.a,
        c: spec.c,
        center_distance: frame.pole_angle,
        vertices,
        faces,
    };

    let bottom = poly.bottom(0);
    let checks = [
        (
            "a",
            poly.vertices[0].dot(&poly.vertices[poly.top(1)]),
            spec.a.cos(),
        ),
        (
            "c",
            poly.vertices[0].dot(&poly.vertices[bottom]),
            spec.c.cos(),
        ),
        (
            "c",
            poly.vertices[bottom].dot(&poly.vertices[poly.top(1)]),
            spec.c.cos(),
        ),
    ];
    for (name, measured, expected) in checks {
        if (measured - expected).abs() > METRIC_TOL {
            return Err(Error::Inconsistent {
                op: OP,
                detail: format!("measured cos {name} = {measured}, expected {expected}"),
            });
        }
    }
    Ok(poly)
}

/// Computes the inward normal of every face and checks that all vertices
/// lie in every half-space.
pub fn face_halfspaces(mut poly: EmbeddedPolytope) -> Result<EmbeddedPolytope> {
    const OP: &str = "face_halfspaces";
    let centroid = poly.vertices.iter().fold([0.0; 4], |acc, v| {
        let p = v.coords();
        [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2], acc[3] + p[3]]
    });
    let points: Vec<Vec4> = poly.vertices.iter().map(|v| *v.coords()).collect();
    for face in &mut poly.faces {
        let len = face.cycle.len();
        if len < 3 {
            return Err(Error::Degenerate {
                op: OP,
                detail: format!("face {:?} has fewer than 3 vertices", face.cycle),
            });
        }
        let p0 = &points[face.cycle[0]];
        let p1 = &points[face.cycle[len / 3]];
        let p2 = &points[face.cycle[2 * len / 3]];
        let raw = cross3(p0, &sub(p1, p0), &sub(p2, p0));
        let size = norm(&raw);
        if size.is_nan() || size <= RANK_TOL {
            return Err(Error::Degenerate {
                op: OP,
                detail: format!("face {:?} spans fewer than 3 dimensions", face.cycle),
            });
        }
        let mut normal = scaled(&raw, 1.0 / size);
        for &i in &face.cycle {
            let off = dot(&normal, &points[i]);
            if off.abs() > RANK_TOL {
                return Err(Error::Degenerate {
                    op: OP,
                    detail: format!(
                        "face {:?} spans 4 dimensions (vertex {i} off by {off:e})",
                        face.cycle
                    ),
                });
            }
        }
        if dot(&normal, &centroid) < 0.0 {
            normal = scaled(&normal, -1.0);
        }
        for (i, p) in points.iter().enumerate() {
            let off = dot(&normal, p);
            if off < -CONTAINMENT_TOL {
                return Err(Error::Inconsistent {
                    op: OP,
                    detail: format!(
                        "vertex {i} lies outside face {:?} by {:e}: not convex",
                        face.cycle, -off
                    ),
                });
            }
        }
        face.normal = Some(normal);
    }
    Ok(poly)
}

/// [`embed`] followed by [`face_halfspaces`].
pub fn polytope(spec: &AntiprismSpec) -> Result<EmbeddedPolytope> {
    face_halfspaces(embed(spec)?)
}

fn agree(op: &'static str, values: &[f64]) -> Result<f64> {
    let first = values[0];
    let spread = values.iter().map(|v| (v - first).abs()).fold(0.0, f64::max);
    if spread > SYMMETRY_TOL {
        return Err(Error::Inconsistent {
            op,
            detail: format!("symmetric edges differ by {spread:e}"),
        });
    }
    Ok(first)
}

/// Dihedral angles measured from the face normals, in the convention of
/// [`crate::antiprism::dihedral_angles`]: for `n = 2` the returned `a_edge`
/// is `(theta + pi) / 2` where `theta` is the dihedral angle of the
/// tetrahedron along that edge.
pub fn measured_dihedrals(poly: &EmbeddedPolytope) -> Result<DihedralAngles> {
    const OP: &str = "measured_dihedrals";
    let n = poly.n as usize;
    let mut a_edges = Vec::with_capacity(2 * n);
    let mut c_edges = Vec::with_capacity(2 * n);
    for k in 0..n {
        a_edges.push(poly.edge_dihedral(poly.top(k), poly.top(k + 1))?);
        a_edges.push(poly.edge_dihedral(poly.bottom(k), poly.bottom(k + 1))?);
        c_edges.push(poly.edge_dihedral(poly.top(k), poly.bottom(k))?);
        c_edges.push(poly.edge_dihedral(poly.bottom(k), poly.top(k + 1))?);
    }
    let a_edge = agree(OP, &a_edges)?;
    let c_edge = agree(OP, &c_edges)?;
    Ok(DihedralAngles {
        a_edge: if n == 2 { 0.5 * (a_edge + PI) } else { a_edge },
        c_edge,
    })
}

/// The link of the top vertex 0, an isosceles spherical trapezoid with
/// bases `x` (inside the n-gon face) and `z` (inside a lateral face with
/// that vertex as apex) and lateral sides `y` and `y_other`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexFigure {
    pub x: f64,
    pub y: f64,
    pub y_other: f64,
    pub z: f64,
    /// Angle at the ends of `x`, the dihedral angle along the `a` edges.
    pub a_angle: f64,
    /// Angle at the ends of `z`, the dihedral angle along the `c` edges.
    pub c_angle: f64,
}

/// Measures the vertex figure at the top vertex 0. For `n = 2` the base `x`
/// collapses to a point and `a_angle` follows the convention of
/// [`measured_dihedrals`].
pub fn vertex_figure_trapezoid(poly: &EmbeddedPolytope) -> Result<VertexFigure> {
    const OP: &str = "vertex_figure_trapezoid";
    poly.normals()?;
    let n = poly.n as usize;
    let apex = poly.point(poly.top(0));
    let dir = |i: usize| tangent(apex, poly.point(i));
    // link corners in cyclic order
    let t_next = dir(poly.top(1));
    let b_here = dir(poly.bottom(0));
    let b_prev = dir(poly.bottom(n - 1));
    let t_prev = dir(poly.top(n - 1));
    let corner = |p: &Vec4, q: &Vec4, r: &Vec4| unit_angle(&tangent(p, q), &tangent(p, r));

    let x = if n == 2 {
        0.0
    } else {
        unit_angle(&t_next, &t_prev)
    };
    let y = unit_angle(&t_next, &b_here);
    let y_other = unit_angle(&b_prev, &t_prev);
    let z = unit_angle(&b_here, &b_prev);
    let a_angle = if n == 2 {
        0.5 * (corner(&t_next, &b_prev, &b_here) + PI)
    } else {
        corner(&t_next, &t_prev, &b_here)
    };
    let c_angle = corner(&b_here, &t_next, &b_prev);
    if !(y > 0.0 && z > 0.0) {
        return Err(Error::Degenerate {
            op: OP,
            detail: format!("vertex figure collapsed: y = {y}, z = {z}"),
        });
    }
    Ok(VertexFigure {
        x,
        y,
        y_other,
        z,
        a_angle,
        c_angle,
    })
}

/// Monte Carlo sampling parameters. Samples are split into blocks of
/// [`MC_BLOCK`]; block `b` draws from the ChaCha8 stream `b` keyed by
/// `seed`, so results do not depend on how blocks are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::domain("McConfig", "samples must be >= 1"));
        }
        Ok(())
    }
}

fn block_hits(normals: &[Vec4], seed: u64, block: u64, count: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut hits = 0;
    for _ in 0..count {
        // membership in a cone does not depend on the length of x
        let x: Vec4 = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        if normals.iter().all(|nrm| dot(nrm, &x) >= 0.0) {
            hits += 1;
        }
    }
    hits
}

/// Number of uniform points of the 3-sphere, out of `cfg.samples`, inside
/// the cone `{x : <normal, x> >= 0 for all normals}`.
pub fn monte_carlo_hits(normals: &[[f64; 4]], cfg: &McConfig) -> Result<u64> {
    cfg.validate()?;
    let blocks = cfg.samples.div_ceil(MC_BLOCK);
    Ok((0..blocks)
        .into_par_iter()
        .map(|b| {
            let count = MC_BLOCK.min(cfg.samples - b * MC_BLOCK);
            block_hits(normals, cfg.seed, b, count)
        })
        .sum())
}

/// Volume of the intersection of the 3-sphere with a cone of half-spaces,
/// with one standard error as `error_bound`.
pub fn monte_carlo_cone_volume(normals: &[[f64; 4]], cfg: &McConfig) -> Result<VolumeEstimate> {
    let hits = monte_carlo_hits(normals, cfg)?;
    let total = cfg.samples as f64;
    let p = hits as f64 / total;
    Ok(VolumeEstimate {
        value: SPHERE_VOLUME * p,
        error_bound: SPHERE_VOLUME * (p * (1.0 - p) / total).sqrt(),
        method: Method::MonteCarlo,
        evaluations: cfg.samples as usize,
    })
}

/// Monte Carlo volume of an embedded polytope.
pub fn monte_carlo_volume(poly: &EmbeddedPolytope, cfg: &McConfig) -> Result<VolumeEstimate> {
    monte_carlo_cone_volume(&poly.normals()?, cfg)
}
