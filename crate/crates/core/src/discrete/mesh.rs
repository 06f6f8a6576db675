use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

pub const MAX_LEVEL: usize = 5;

/// Closed oriented triangle mesh.
#[derive(Clone, Debug)]
pub struct TriMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    /// Sorted `(a, b)` with `a < b`, in lexicographic order.
    edges: Vec<[usize; 2]>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl TriMesh {
    /// Builds a mesh and checks it is a closed surface: every edge borders
    /// exactly two triangles, traversed in opposite directions.
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let nv = vertices.len();
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (f, t) in triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= nv) {
                return Err(Error::MeshQuality(format!("triangle {f} references a missing vertex")));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::MeshQuality(format!("triangle {f} repeats a vertex")));
            }
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                if directed.insert((a, b), f).is_some() {
                    return Err(Error::MeshQuality(format!("directed edge ({a},{b}) used twice")));
                }
            }
        }
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                return Err(Error::MeshQuality(format!("edge ({a},{b}) borders only one triangle")));
            }
        }
        let mut edges: Vec<[usize; 2]> = directed.keys().filter(|(a, b)| a < b).map(|&(a, b)| [a, b]).collect();
        edges.sort_unstable();
        let edge_index = edges.iter().enumerate().map(|(i, e)| ((e[0], e[1]), i)).collect();
        Ok(Self { vertices, triangles, edges, edge_index })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Index of the undirected edge `{a, b}`.
    pub fn edge(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Largest deviation of a vertex norm from 1.
    pub fn max_radius_error(&self) -> f64 {
        self.vertices.iter().map(|v| (norm(v) - 1.0).abs()).fold(0.0, f64::max)
    }

    /// OFF text export.
    pub fn to_off(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "OFF");
        let _ = writeln!(s, "{} {} {}", self.vertices.len(), self.triangles.len(), self.edges.len());
        for v in &self.vertices {
            let _ = writeln!(s, "{:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
        }
        s
    }
}

pub(crate) fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

fn normalized(a: Vec3) -> Vec3 {
    let r = norm(&a);
    [a[0] / r, a[1] / r, a[2] / r]
}

fn icosahedron() -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let vertices = raw.into_iter().map(normalized).collect();
    let triangles = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (vertices, triangles)
}

/// Icosahedron subdivided `level` times with vertices pushed to the unit sphere.
pub fn icosphere(level: usize) -> Result<TriMesh> {
    if level > MAX_LEVEL {
        return Err(Error::Dimension(format!("icosphere level {level} exceeds {MAX_LEVEL}")));
    }
    let (mut vertices, mut triangles) = icosahedron();
    for _ in 0..level {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<Vec3>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                vertices.push(normalized([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                vertices.len() - 1
            })
        };
        for &[a, b, c] in &triangles {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        triangles = next;
    }
    TriMesh::new(vertices, triangles)
}
