//! Quad meshes of sampled surfaces: ASCII OBJ and binary little-endian PLY.

use std::io::Write;

use cmc_darboux_core::patch::Grid;
use cmc_darboux_core::Quaternion;

/// Vertices (imaginary parts of the samples) and quad faces on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[u32; 4]>,
    /// Whether the `y` seam is joined.
    pub welded: bool,
}

impl QuadMesh {
    /// Builds the mesh. With `weld` set on a periodic grid the last row of
    /// quads joins back to `j = 0`; otherwise the seam stays open.
    pub fn from_grid(points: &[Quaternion], grid: &Grid, weld: bool) -> Self {
        let welded = weld && grid.y_periodic;
        let vertices = points.iter().map(|q| q.vector()).collect();
        let (nx, ny) = (grid.nx, grid.ny);
        let rows = if welded { ny } else { ny - 1 };
        let mut faces = Vec::with_capacity((nx - 1) * rows);
        for i in 0..nx - 1 {
            for j in 0..rows {
                let j1 = (j + 1) % ny;
                faces.push([
                    grid.index(i, j) as u32,
                    grid.index(i + 1, j) as u32,
                    grid.index(i + 1, j1) as u32,
                    grid.index(i, j1) as u32,
                ]);
            }
        }
        Self {
            vertices,
            faces,
            welded,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.vertices.iter().flatten().all(|v| v.is_finite())
    }

    pub fn write_obj<W: Write>(&self, mut w: W, name: &str) -> std::io::Result<()> {
        writeln!(w, "o {name}")?;
        for v in &self.vertices {
            writeln!(w, "v {:.12e} {:.12e} {:.12e}", v[0], v[1], v[2])?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
        }
        w.flush()
    }

    pub fn write_ply<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(
            w,
            "ply\nformat binary_little_endian 1.0\nelement vertex {}\n\
             property double x\nproperty double y\nproperty double z\n\
             element face {}\nproperty list uchar uint vertex_indices\nend_header\n",
            self.vertices.len(),
            self.faces.len()
        )?;
        for v in &self.vertices {
            for c in v {
                w.write_all(&c.to_le_bytes())?;
            }
        }
        for f in &self.faces {
            w.write_all(&[4u8])?;
            for k in f {
                w.write_all(&k.to_le_bytes())?;
            }
        }
        w.flush()
    }
}
