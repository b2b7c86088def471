//! Binary mesh cache keyed by (weight spec, construction parameters, level).
//!
//! Files live under `$DISKGEO_CACHE` (default: `<tmp>/diskgeo-cache`) and are
//! written atomically via a temp file + rename.

use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::mesh::{DiskMesh, MeshParams, Ring};
use crate::weight::WeightModel;
use crate::Result;

const MAGIC: u64 = 0x4447_4d45_5348_0004; // "DGMESH" + format version

pub fn cache_dir() -> PathBuf {
    match std::env::var_os("DISKGEO_CACHE") {
        Some(dir) => PathBuf::from(dir),
        None => std::env::temp_dir().join("diskgeo-cache"),
    }
}

pub fn cache_key(model: &WeightModel, params: &MeshParams) -> String {
    let mut hasher = Sha256::new();
    hasher.update(model.spec().canonical().as_bytes());
    for v in [
        model.r_max(),
        params.h0,
        params.beta,
        params.coverage,
        params.node_cap as f64,
    ] {
        hasher.update(v.to_bits().to_le_bytes());
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn file_for(key: &str, level: u32) -> PathBuf {
    cache_dir().join(format!("{key}-L{level}.mesh"))
}

pub fn load(key: &str, level: u32, params: &MeshParams) -> Option<DiskMesh> {
    read_mesh(&file_for(key, level), params).ok()
}

pub fn store(key: &str, mesh: &DiskMesh) -> Result<()> {
    let dir = cache_dir();
    std::fs::create_dir_all(&dir)?;
    let tmp = dir.join(format!(
        ".tmp-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0)
    ));
    write_mesh(&tmp, mesh)?;
    std::fs::rename(&tmp, file_for(key, mesh.level))?;
    Ok(())
}

fn write_mesh(path: &Path, mesh: &DiskMesh) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    w.write_all(&MAGIC.to_le_bytes())?;
    w.write_all(&(mesh.level as u64).to_le_bytes())?;
    w.write_all(&(mesh.rings.len() as u64).to_le_bytes())?;
    for ring in &mesh.rings {
        w.write_all(&ring.radius.to_bits().to_le_bytes())?;
        w.write_all(&ring.count.to_le_bytes())?;
    }
    write_u32s(&mut w, &mesh.ring_offset)?;
    write_u32s(&mut w, &mesh.adj_offset)?;
    write_u32s(&mut w, &mesh.adj_target)?;
    write_f32s(&mut w, &mesh.adj_tau)?;
    write_f32s(&mut w, &mesh.adj_phi)?;
    write_f64s(&mut w, &mesh.cum_tau)?;
    write_f64s(&mut w, &mesh.cum_phi)?;
    w.flush()?;
    Ok(())
}

fn read_mesh(path: &Path, params: &MeshParams) -> std::io::Result<DiskMesh> {
    let file = std::fs::File::open(path)?;
    let mut r = BufReader::new(file);
    let magic = read_u64(&mut r)?;
    if magic != MAGIC {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "mesh cache format mismatch",
        ));
    }
    let level = read_u64(&mut r)? as u32;
    let n_rings = read_u64(&mut r)? as usize;
    let mut rings = Vec::with_capacity(n_rings);
    for _ in 0..n_rings {
        let radius = f64::from_bits(read_u64(&mut r)?);
        let mut buf = [0u8; 4];
        r.read_exact(&mut buf)?;
        rings.push(Ring {
            radius,
            count: u32::from_le_bytes(buf),
        });
    }
    let ring_offset = read_u32s(&mut r)?;
    let adj_offset = read_u32s(&mut r)?;
    let adj_target = read_u32s(&mut r)?;
    let adj_tau = read_f32s(&mut r)?;
    let adj_phi = read_f32s(&mut r)?;
    let cum_tau = read_f64s(&mut r)?;
    let cum_phi = read_f64s(&mut r)?;
    Ok(DiskMesh {
        level,
        rings,
        ring_offset,
        adj_offset,
        adj_target,
        adj_tau,
        adj_phi,
        cum_tau,
        cum_phi,
        params: *params,
    })
}

fn read_u64(r: &mut impl Read) -> std::io::Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn write_u32s(w: &mut impl Write, data: &[u32]) -> std::io::Result<()> {
    w.write_all(&(data.len() as u64).to_le_bytes())?;
    for v in data {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn write_f32s(w: &mut impl Write, data: &[f32]) -> std::io::Result<()> {
    w.write_all(&(data.len() as u64).to_le_bytes())?;
    for v in data {
        w.write_all(&v.to_bits().to_le_bytes())?;
    }
    Ok(())
}

fn read_u32s(r: &mut impl Read) -> std::io::Result<Vec<u32>> {
    let n = read_u64(r)? as usize;
    let mut bytes = vec![0u8; n * 4];
    r.read_exact(&mut bytes)?;
    Ok(bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

fn write_f64s(w: &mut impl Write, data: &[f64]) -> std::io::Result<()> {
    w.write_all(&(data.len() as u64).to_le_bytes())?;
    for v in data {
        w.write_all(&v.to_bits().to_le_bytes())?;
    }
    Ok(())
}

fn read_f64s(r: &mut impl Read) -> std::io::Result<Vec<f64>> {
    let n = read_u64(r)? as usize;
    let mut bytes = vec![0u8; n * 8];
    r.read_exact(&mut bytes)?;
    Ok(bytes
        .chunks_exact(8)
        .map(|c| {
            f64::from_bits(u64::from_le_bytes([
                c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7],
            ]))
        })
        .collect())
}

fn read_f32s(r: &mut impl Read) -> std::io::Result<Vec<f32>> {
    let n = read_u64(r)? as usize;
    let mut bytes = vec![0u8; n * 4];
    r.read_exact(&mut bytes)?;
    Ok(bytes
        .chunks_exact(4)
        .map(|c| f32::from_bits(u32::from_le_bytes([c[0], c[1], c[2], c[3]])))
        .collect())
}
