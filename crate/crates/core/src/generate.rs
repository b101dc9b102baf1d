//! Deterministic generators for the example graph families: Vicsek iterates,
//! graphical Sierpinski gasket iterates, and lattice boxes.
//!
//! All generators emit unit-weight connected graphs together with the
//! expected volume-growth exponent `D` and escape-rate exponent `beta`.

use std::collections::HashMap;

use crate::error::GraphError;
use crate::graph::WeightedGraph;

pub const DEFAULT_VERTEX_CAP: usize = 2_000_000;

/// Which example family to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Vicsek,
    Sierpinski,
    LatticeBox,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Vicsek => "vicsek",
            Family::Sierpinski => "sierpinski",
            Family::LatticeBox => "lattice_box",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "vicsek" => Some(Family::Vicsek),
            "sierpinski" => Some(Family::Sierpinski),
            "lattice_box" => Some(Family::LatticeBox),
            _ => None,
        }
    }
}

/// Generator request: family, iteration level (side length for lattice
/// boxes), and spatial dimension where it applies.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorSpec {
    pub family: Family,
    /// Iteration level for fractal families; side length for lattice boxes.
    pub level: usize,
    /// Spatial dimension (vicsek and lattice_box only).
    pub dimension: usize,
    pub vertex_cap: usize,
}

impl GeneratorSpec {
    pub fn new(family: Family, level: usize, dimension: usize) -> Self {
        Self {
            family,
            level,
            dimension,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// Exponents the generated family is known to satisfy in the infinite limit.
#[derive(Debug, Clone, Copy)]
pub struct ExpectedExponents {
    /// Volume-growth exponent: V(x,r) ~ r^D.
    pub growth: f64,
    /// Escape-rate exponent: mean exit time from B(x,r) ~ r^beta.
    pub escape: f64,
}

/// Generates the requested graph with its expected exponents.
pub fn generate(spec: &GeneratorSpec) -> Result<(WeightedGraph, ExpectedExponents), GraphError> {
    match spec.family {
        Family::Vicsek => {
            let g = vicsek_level_capped(spec.level, spec.dimension, spec.vertex_cap)?;
            let d = ((2u32.pow(spec.dimension as u32) + 1) as f64).log(3.0);
            Ok((
                g,
                ExpectedExponents {
                    growth: d,
                    escape: d + 1.0,
                },
            ))
        }
        Family::Sierpinski => {
            let g = sierpinski_level_capped(spec.level, spec.vertex_cap)?;
            Ok((
                g,
                ExpectedExponents {
                    growth: 3f64.log2(),
                    escape: 5f64.log2(),
                },
            ))
        }
        Family::LatticeBox => {
            let g = lattice_box_capped(spec.dimension, spec.level, spec.vertex_cap)?;
            Ok((
                g,
                ExpectedExponents {
                    growth: spec.dimension as f64,
                    escape: 2.0,
                },
            ))
        }
    }
}

/// Level-`level` Vicsek iterate in dimension `dim`: 2^dim + 1 copies of the
/// previous level glued corner-to-corner in a diagonal cross. Level 0 is a
/// single vertex; every iterate is a tree.
pub fn vicsek_level(level: usize, dim: usize) -> Result<WeightedGraph, GraphError> {
    vicsek_level_capped(level, dim, DEFAULT_VERTEX_CAP)
}

pub fn vicsek_level_capped(
    level: usize,
    dim: usize,
    cap: usize,
) -> Result<WeightedGraph, GraphError> {
    assert!(dim >= 1, "vicsek dimension must be >= 1");
    let copies = 2usize.pow(dim as u32) + 1;
    // v_1 = copies; v_{n+1} = copies * v_n - (copies - 1).
    let mut v_count = 1usize;
    for step in 0..level {
        v_count = if step == 0 {
            copies
        } else {
            v_count
                .checked_mul(copies)
                .and_then(|v| v.checked_sub(copies - 1))
                .ok_or(GraphError::CapExceeded {
                    requested: usize::MAX,
                    cap,
                })?
        };
        if v_count > cap {
            return Err(GraphError::CapExceeded {
                requested: v_count,
                cap,
            });
        }
    }

    if level == 0 {
        // A single vertex needs positive measure, so the level-0 iterate
        // carries a unit self-loop.
        return WeightedGraph::from_edges(1, &[(0, 0, 1.0)]);
    }

    // Geometric construction keyed by integer coordinates; corner gluing is
    // coordinate deduplication. Level n spans [0, 2 * 3^(n-1)]^dim.
    let mut points: Vec<Vec<i64>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // Level 1: center at (1,..,1), corners at {0,2}^dim.
    let center = vec![1i64; dim];
    points.push(center);
    for corner_bits in 0..(1u32 << dim) {
        let corner: Vec<i64> = (0..dim)
            .map(|axis| if corner_bits >> axis & 1 == 1 { 2 } else { 0 })
            .collect();
        points.push(corner);
        edges.push((0, points.len() - 1));
    }

    let mut span = 2i64;
    for _ in 1..level {
        let prev_points = points.clone();
        let prev_edges = edges.clone();
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        points.clear();
        edges.clear();
        let mut offsets: Vec<Vec<i64>> = Vec::new();
        for corner_bits in 0..(1u32 << dim) {
            offsets.push(
                (0..dim)
                    .map(|axis| {
                        if corner_bits >> axis & 1 == 1 {
                            2 * span
                        } else {
                            0
                        }
                    })
                    .collect(),
            );
        }
        offsets.push(vec![span; dim]);
        for offset in &offsets {
            let mut remap = Vec::with_capacity(prev_points.len());
            for p in &prev_points {
                let q: Vec<i64> = p.iter().zip(offset).map(|(a, b)| a + b).collect();
                let next_id = index.len();
                let id = *index.entry(q.clone()).or_insert_with(|| {
                    points.push(q);
                    next_id
                });
                remap.push(id);
            }
            for &(a, b) in &prev_edges {
                edges.push((remap[a], remap[b]));
            }
        }
        span *= 3;
    }

    let edge_list: Vec<(usize, usize, f64)> =
        edges.into_iter().map(|(a, b)| (a, b, 1.0)).collect();
    WeightedGraph::from_edges(points.len(), &edge_list)
}

/// Level-`level` graphical Sierpinski gasket: three copies of the previous
/// level glued pairwise at corner vertices. Level 0 is a triangle.
pub fn sierpinski_level(level: usize) -> Result<WeightedGraph, GraphError> {
    sierpinski_level_capped(level, DEFAULT_VERTEX_CAP)
}

pub fn sierpinski_level_capped(level: usize, cap: usize) -> Result<WeightedGraph, GraphError> {
    // v_{n+1} = 3 v_n - 3, starting at 3.
    let mut v_count = 3usize;
    for _ in 0..level {
        v_count = 3 * v_count - 3;
        if v_count > cap {
            return Err(GraphError::CapExceeded {
                requested: v_count,
                cap,
            });
        }
    }

    // Triangular coordinates (u, v) with u + v <= 2^level; corner gluing is
    // again coordinate deduplication.
    let mut points: Vec<(i64, i64)> = vec![(0, 0), (1, 0), (0, 1)];
    let mut edges: Vec<(usize, usize)> = vec![(0, 1), (1, 2), (0, 2)];
    let mut span = 1i64;
    for _ in 0..level {
        let prev_points = points.clone();
        let prev_edges = edges.clone();
        let mut index: HashMap<(i64, i64), usize> = HashMap::new();
        points.clear();
        edges.clear();
        for offset in [(0i64, 0i64), (span, 0), (0, span)] {
            let mut remap = Vec::with_capacity(prev_points.len());
            for &(u, v) in &prev_points {
                let q = (u + offset.0, v + offset.1);
                let next_id = index.len();
                let id = *index.entry(q).or_insert_with(|| {
                    points.push(q);
                    next_id
                });
                remap.push(id);
            }
            for &(a, b) in &prev_edges {
                edges.push((remap[a], remap[b]));
            }
        }
        span *= 2;
    }

    let mut edge_list: Vec<(usize, usize, f64)> =
        edges.into_iter().map(|(a, b)| (a, b, 1.0)).collect();
    edge_list.sort_by(|a, b| (a.0.min(a.1), a.0.max(a.1)).cmp(&(b.0.min(b.1), b.0.max(b.1))));
    edge_list.dedup_by_key(|e| (e.0.min(e.1), e.0.max(e.1)));
    WeightedGraph::from_edges(points.len(), &edge_list)
}

/// Nearest-neighbor unit-weight grid on {0..side-1}^dim.
pub fn lattice_box(dim: usize, side: usize) -> Result<WeightedGraph, GraphError> {
    lattice_box_capped(dim, side, DEFAULT_VERTEX_CAP)
}

pub fn lattice_box_capped(dim: usize, side: usize, cap: usize) -> Result<WeightedGraph, GraphError> {
    assert!(dim >= 1, "lattice dimension must be >= 1");
    assert!(side >= 2, "lattice side must be >= 2");
    let n = side.checked_pow(dim as u32).ok_or(GraphError::CapExceeded {
        requested: usize::MAX,
        cap,
    })?;
    if n > cap {
        return Err(GraphError::CapExceeded { requested: n, cap });
    }
    let mut edges = Vec::new();
    let mut stride = 1usize;
    for _axis in 0..dim {
        for v in 0..n {
            let coord = v / stride % side;
            if coord + 1 < side {
                edges.push((v, v + stride, 1.0));
            }
        }
        stride *= side;
    }
    WeightedGraph::from_edges(n, &edges)
}
