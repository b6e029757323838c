//! Plain-text meshes and binary solution vectors with JSON sidecars.
//!
//! Mesh format: a header `nodes triangles boundary_edges`, then `x y` lines,
//! `i j k` lines and `i j tag` lines where `tag` is `-1` for the outer
//! boundary and the hole number otherwise.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Serialize};

use crate::error::{FemError, Result};
use crate::mesh::{BoundaryTag, TriMesh};

pub fn write_mesh(mesh: &TriMesh, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{} {} {}", mesh.nodes.len(), mesh.triangles.len(), mesh.boundary_edges.len())?;
    for p in &mesh.nodes {
        // `{:?}` prints the shortest representation that round-trips
        writeln!(w, "{:?} {:?}", p[0], p[1])?;
    }
    for t in &mesh.triangles {
        writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
    }
    for (e, tag) in &mesh.boundary_edges {
        let tag = match tag {
            BoundaryTag::OuterDirichlet => -1,
            BoundaryTag::Hole(i) => *i as i64,
        };
        writeln!(w, "{} {} {}", e[0], e[1], tag)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_mesh(path: &Path) -> Result<TriMesh> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut lines = reader.lines();
    let mut next = |what: &str| -> Result<Vec<String>> {
        let line = lines
            .next()
            .ok_or_else(|| FemError::Format(format!("missing {what} line")))??;
        Ok(line.split_whitespace().map(str::to_owned).collect())
    };
    let parse = |s: &str| -> Result<f64> { s.parse().map_err(|_| FemError::Format(format!("bad number {s:?}"))) };
    let parse_idx = |s: &str| -> Result<i64> { s.parse().map_err(|_| FemError::Format(format!("bad index {s:?}"))) };

    let header = next("header")?;
    if header.len() != 3 {
        return Err(FemError::Format("header needs three counts".into()));
    }
    let counts: Vec<usize> = header
        .iter()
        .map(|s| s.parse().map_err(|_| FemError::Format(format!("bad count {s:?}"))))
        .collect::<Result<_>>()?;
    let mut mesh = TriMesh::default();
    for _ in 0..counts[0] {
        let f = next("node")?;
        if f.len() != 2 {
            return Err(FemError::Format("node line needs two coordinates".into()));
        }
        mesh.nodes.push([parse(&f[0])?, parse(&f[1])?]);
    }
    let n = mesh.nodes.len() as i64;
    let node = |s: &str| -> Result<usize> {
        let i = parse_idx(s)?;
        if i < 0 || i >= n {
            return Err(FemError::Format(format!("node index {i} out of range")));
        }
        Ok(i as usize)
    };
    for _ in 0..counts[1] {
        let f = next("triangle")?;
        if f.len() != 3 {
            return Err(FemError::Format("triangle line needs three indices".into()));
        }
        mesh.triangles.push([node(&f[0])?, node(&f[1])?, node(&f[2])?]);
    }
    for _ in 0..counts[2] {
        let f = next("boundary")?;
        if f.len() != 3 {
            return Err(FemError::Format("boundary line needs two indices and a tag".into()));
        }
        let tag = match parse_idx(&f[2])? {
            -1 => BoundaryTag::OuterDirichlet,
            i if i >= 0 => BoundaryTag::Hole(i as usize),
            i => return Err(FemError::Format(format!("bad tag {i}"))),
        };
        mesh.boundary_edges.push(([node(&f[0])?, node(&f[1])?], tag));
    }
    Ok(mesh)
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Writes `values` to `path` as little-endian `f64` and `meta` next to it.
pub fn write_solution<M: Serialize>(path: &Path, values: &[f64], meta: &M) -> Result<()> {
    let bytes: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    fs::write(path, bytes)?;
    fs::write(sidecar(path), serde_json::to_string_pretty(meta)?)?;
    Ok(())
}

pub fn read_solution<M: DeserializeOwned>(path: &Path) -> Result<(Vec<f64>, M)> {
    let bytes = fs::read(path)?;
    if bytes.len() % 8 != 0 {
        return Err(FemError::Format(format!("{} bytes is not a whole number of f64", bytes.len())));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of eight")))
        .collect();
    let meta = serde_json::from_str(&fs::read_to_string(sidecar(path))?)?;
    Ok((values, meta))
}
