//! Mesh text exports.
//!
//! The native format is line based ASCII:
//!
//! ```text
//! vertices N triangles M boundary K
//! x y                      (N rows)
//! i j k                    (M rows, counterclockwise, newest vertex first)
//! i j tag                  (K rows, tag one of left/right/bottom/top)
//! ```
//!
//! Coordinates use Rust's shortest round-trip formatting, so reading a file
//! back reproduces the mesh bit for bit and identical meshes give identical
//! bytes. The VTK export is the legacy ASCII `UNSTRUCTURED_GRID` dataset,
//! readable by ParaView and VisIt.

use std::fmt::Write as _;
use std::path::Path;

use crate::geom::Point;
use crate::{Error, Result};

use super::{BoundaryEdge, BoundaryTag, Mesh};

pub fn write_mesh_text(mesh: &Mesh) -> String {
    let mut s = String::with_capacity(48 * mesh.num_vertices() + 24 * mesh.num_triangles());
    let _ = writeln!(
        s,
        "vertices {} triangles {} boundary {}",
        mesh.num_vertices(),
        mesh.num_triangles(),
        mesh.boundary().len()
    );
    for p in mesh.vertices() {
        let _ = writeln!(s, "{:?} {:?}", p.x, p.y);
    }
    for [a, b, c] in mesh.triangles() {
        let _ = writeln!(s, "{a} {b} {c}");
    }
    for e in mesh.boundary() {
        let _ = writeln!(s, "{} {} {}", e.vertices[0], e.vertices[1], e.tag.name());
    }
    s
}

pub fn read_mesh_text(text: &str, origin: &Path) -> Result<Mesh> {
    let err = |line: usize, msg: &str| Error::Parse {
        path: origin.to_path_buf(),
        message: format!("line {}: {msg}", line + 1),
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(0, "empty file"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let counts = match words.as_slice() {
        ["vertices", n, "triangles", m, "boundary", k] => [n, m, k].map(|w| w.parse::<usize>()),
        _ => return Err(err(0, "expected 'vertices N triangles M boundary K'")),
    };
    let [n, m, k] = match counts {
        [Ok(n), Ok(m), Ok(k)] => [n, m, k],
        _ => return Err(err(0, "bad counts")),
    };
    let mut vertices = Vec::with_capacity(n);
    let mut triangles = Vec::with_capacity(m);
    let mut boundary = Vec::with_capacity(k);
    for _ in 0..n {
        let (i, l) = lines.next().ok_or_else(|| err(0, "missing vertex rows"))?;
        let v: Vec<f64> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err(i, "bad coordinate"))?;
        if v.len() != 2 {
            return Err(err(i, "expected two coordinates"));
        }
        vertices.push(Point::new(v[0], v[1]));
    }
    for _ in 0..m {
        let (i, l) = lines.next().ok_or_else(|| err(0, "missing triangle rows"))?;
        let v: Vec<usize> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err(i, "bad index"))?;
        if v.len() != 3 {
            return Err(err(i, "expected three indices"));
        }
        triangles.push([v[0], v[1], v[2]]);
    }
    for _ in 0..k {
        let (i, l) = lines.next().ok_or_else(|| err(0, "missing boundary rows"))?;
        let w: Vec<&str> = l.split_whitespace().collect();
        let parsed = match w.as_slice() {
            [a, b, tag] => match (a.parse(), b.parse(), BoundaryTag::from_name(tag)) {
                (Ok(a), Ok(b), Some(tag)) => Some(BoundaryEdge { vertices: [a, b], tag }),
                _ => None,
            },
            _ => None,
        };
        boundary.push(parsed.ok_or_else(|| err(i, "expected 'i j tag'"))?);
    }
    Mesh::from_parts(vertices, triangles, boundary)
}

/// Legacy VTK unstructured grid with optional nodal scalar fields.
pub fn write_vtk(mesh: &Mesh, point_data: &[(&str, &[f64])]) -> Result<String> {
    for (name, values) in point_data {
        if values.len() != mesh.num_vertices() {
            return Err(Error::InvalidMesh(format!(
                "field '{name}' has {} values for {} vertices",
                values.len(),
                mesh.num_vertices()
            )));
        }
    }
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\ncrackfem\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", mesh.num_vertices());
    for p in mesh.vertices() {
        let _ = writeln!(s, "{:?} {:?} 0", p.x, p.y);
    }
    let m = mesh.num_triangles();
    let _ = writeln!(s, "CELLS {m} {}", 4 * m);
    for [a, b, c] in mesh.triangles() {
        let _ = writeln!(s, "3 {a} {b} {c}");
    }
    let _ = writeln!(s, "CELL_TYPES {m}");
    for _ in 0..m {
        s.push_str("5\n");
    }
    if !point_data.is_empty() {
        let _ = writeln!(s, "POINT_DATA {}", mesh.num_vertices());
        for (name, values) in point_data {
            let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
            for v in *values {
                let _ = writeln!(s, "{v:?}");
            }
        }
    }
    Ok(s)
}
