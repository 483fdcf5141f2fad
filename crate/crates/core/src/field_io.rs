//! Little-endian binary dumps of structures and form fields.
//!
//! Structure file: magic `KCS1`, `u32` grid size, `u32` length plus JSON
//! provenance, then `J` at every node (16 `f64`, row-major), node-major.
//!
//! Form file: magic `KCF1`, `u32` degree, `u32` grid size, then for every node
//! its `C(4,p)` coefficients as `(re, im)` pairs of `f64`.

use std::io::{Read, Write};

use nalgebra::Matrix4;

use crate::discrete_forms::{FormField, C64};
use crate::exterior::rank;
use crate::transverse_geometry::{Provenance, StructureField};
use crate::{Error, Result};

const STRUCTURE_MAGIC: &[u8; 4] = b"KCS1";
const FORM_MAGIC: &[u8; 4] = b"KCF1";

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn expect_magic(r: &mut impl Read, magic: &[u8; 4]) -> Result<()> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    if &b != magic {
        return Err(Error::Format(format!("bad magic {:?}", String::from_utf8_lossy(&b))));
    }
    Ok(())
}

pub fn write_structure(s: &StructureField, w: &mut impl Write) -> Result<()> {
    w.write_all(STRUCTURE_MAGIC)?;
    w.write_all(&(s.n() as u32).to_le_bytes())?;
    let prov = serde_json::to_vec(s.provenance())?;
    w.write_all(&(prov.len() as u32).to_le_bytes())?;
    w.write_all(&prov)?;
    for p in 0..s.nodes() {
        let j = s.j(p);
        for r in 0..4 {
            for c in 0..4 {
                w.write_all(&j[(r, c)].to_le_bytes())?;
            }
        }
    }
    Ok(())
}

/// Reads `J` and rebuilds the metric and adapted frame, re-validating the
/// structure.
pub fn read_structure(r: &mut impl Read) -> Result<StructureField> {
    expect_magic(r, STRUCTURE_MAGIC)?;
    let n = read_u32(r)? as usize;
    let len = read_u32(r)? as usize;
    let mut prov = vec![0u8; len];
    r.read_exact(&mut prov)?;
    let provenance: Provenance = serde_json::from_slice(&prov)?;
    let nodes = n.checked_pow(4).ok_or_else(|| Error::Format("grid too large".into()))?;
    let mut js = Vec::with_capacity(nodes);
    for _ in 0..nodes {
        let mut m = Matrix4::zeros();
        for row in 0..4 {
            for col in 0..4 {
                m[(row, col)] = read_f64(r)?;
            }
        }
        js.push(m);
    }
    StructureField::from_parts(n, provenance, js)
}

pub fn write_form(a: &FormField, w: &mut impl Write) -> Result<()> {
    w.write_all(FORM_MAGIC)?;
    w.write_all(&(a.degree() as u32).to_le_bytes())?;
    w.write_all(&(a.n() as u32).to_le_bytes())?;
    for p in 0..a.nodes() {
        for c in 0..a.components() {
            let v = a.get(p, c);
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_form(r: &mut impl Read) -> Result<FormField> {
    expect_magic(r, FORM_MAGIC)?;
    let degree = read_u32(r)? as usize;
    let n = read_u32(r)? as usize;
    if degree > 4 {
        return Err(Error::Format(format!("degree {degree}")));
    }
    let mut out = FormField::zeros(degree, n);
    for p in 0..out.nodes() {
        for c in 0..rank(degree) {
            let re = read_f64(r)?;
            let im = read_f64(r)?;
            out.set(p, c, C64::new(re, im));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transverse_geometry::make_perturbed_structure;

    #[test]
    fn structure_round_trip() {
        let s = make_perturbed_structure(4, 3, 0.2, 1).unwrap();
        let mut buf = Vec::new();
        write_structure(&s, &mut buf).unwrap();
        let t = read_structure(&mut buf.as_slice()).unwrap();
        assert_eq!(t.provenance(), s.provenance());
        for p in 0..s.nodes() {
            assert_eq!(t.j(p), s.j(p));
            assert_eq!(t.g(p), s.g(p));
        }
    }

    #[test]
    fn form_round_trip_and_bad_magic() {
        let a = FormField::omega0(4).scale(C64::new(0.5, -2.0));
        let mut buf = Vec::new();
        write_form(&a, &mut buf).unwrap();
        assert_eq!(read_form(&mut buf.as_slice()).unwrap(), a);
        buf[0] = b'X';
        assert!(matches!(read_form(&mut buf.as_slice()), Err(Error::Format(_))));
    }
}
