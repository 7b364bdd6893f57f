//! File formats: "galg/1" for algebras, "pres/1" for presentations and
//! "gmap/1" for graded maps. Writers emit a canonical form — ascending
//! indices, lowest-terms "p/q" rationals, one conductor per file — so equal
//! algebras produce byte-identical files.

use crate::abgroup::{AbelianGroup, GroupElement, GroupHom};
use crate::algebra::{AlgebraBuilder, GradedAlgebra};
use crate::construct::Presentation;
use crate::isomap::GradedMap;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(String),
    #[error("field '{field}': {msg}")]
    Field { field: String, msg: String },
}

fn field_err(field: &str, msg: impl Into<String>) -> FormatError {
    FormatError::Field { field: field.into(), msg: msg.into() }
}

fn rat_to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn rat_from_string(s: &str, field: &str) -> Result<BigRational, FormatError> {
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num).map_err(|_| field_err(field, format!("bad numerator '{}'", num)))?;
        let d = BigInt::from_str(den).map_err(|_| field_err(field, format!("bad denominator '{}'", den)))?;
        if d <= BigInt::from(0) {
            return Err(field_err(field, "denominator must be positive"));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(s).map_err(|_| field_err(field, format!("bad rational '{}'", s)))?;
        Ok(BigRational::from(n))
    }
}

fn scalar_to_strings(s: &Scalar, conductor: u64) -> Vec<String> {
    s.promote(conductor).coeffs().iter().map(rat_to_string).collect()
}

fn scalar_from_strings(v: &[String], conductor: u64, field: &str) -> Result<Scalar, FormatError> {
    let want = Scalar::degree(conductor);
    if v.len() != want {
        return Err(field_err(field, format!("expected {} coefficients, got {}", want, v.len())));
    }
    let coeffs: Result<Vec<BigRational>, FormatError> =
        v.iter().map(|s| rat_from_string(s, field)).collect();
    Ok(Scalar::from_coeffs(conductor, coeffs?))
}

fn check_conductor(n: u64, field: &str) -> Result<(), FormatError> {
    if n == 0 || n % 8 != 0 {
        return Err(field_err(field, format!("conductor {} must be a positive multiple of 8", n)));
    }
    Ok(())
}

fn group_from_orders(orders: &[u64], field: &str) -> Result<AbelianGroup, FormatError> {
    if orders.is_empty() {
        return Err(field_err(field, "group must have at least one factor"));
    }
    if orders.contains(&0) {
        return Err(field_err(field, "factor orders must be >= 1"));
    }
    Ok(AbelianGroup::new(orders.to_vec()))
}

fn element_from(residues: &[u64], group: &AbelianGroup, field: &str) -> Result<GroupElement, FormatError> {
    group
        .element(residues.to_vec())
        .map_err(|_| field_err(field, format!("residues {:?} out of range", residues)))
}

// -- galg/1 ------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GalgFile {
    format: String,
    conductor: u64,
    group: Vec<u64>,
    degrees: Vec<Vec<u64>>,
    unit: Vec<Vec<String>>,
    mul: Vec<MulCell>,
}

#[derive(Serialize, Deserialize)]
struct MulCell {
    i: usize,
    j: usize,
    terms: Vec<TermDto>,
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    k: usize,
    c: Vec<String>,
}

pub fn write_algebra(alg: &GradedAlgebra) -> String {
    let n = alg.conductor();
    let dim = alg.dim();
    let mut mul = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let entry = alg.entry(i, j);
            if entry.is_empty() {
                continue;
            }
            let terms = entry
                .iter()
                .map(|(k, c)| TermDto { k: *k as usize, c: scalar_to_strings(c, n) })
                .collect();
            mul.push(MulCell { i, j, terms });
        }
    }
    let file = GalgFile {
        format: "galg/1".into(),
        conductor: n,
        group: alg.group().orders().to_vec(),
        degrees: alg.degrees().iter().map(|g| g.residues.clone()).collect(),
        unit: alg.unit().iter().map(|c| scalar_to_strings(c, n)).collect(),
        mul,
    };
    let mut s = serde_json::to_string(&file).expect("serialization cannot fail");
    s.push('\n');
    s
}

pub fn read_algebra(text: &str) -> Result<GradedAlgebra, FormatError> {
    let file: GalgFile = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    if file.format != "galg/1" {
        return Err(field_err("format", format!("expected 'galg/1', got '{}'", file.format)));
    }
    check_conductor(file.conductor, "conductor")?;
    let group = group_from_orders(&file.group, "group")?;
    if file.degrees.is_empty() {
        return Err(field_err("degrees", "algebra must have positive dimension"));
    }
    let dim = file.degrees.len();
    let degrees: Result<Vec<GroupElement>, FormatError> =
        file.degrees.iter().map(|r| element_from(r, &group, "degrees")).collect();
    let degrees = degrees?;
    if file.unit.len() != dim {
        return Err(field_err("unit", format!("expected {} coordinates, got {}", dim, file.unit.len())));
    }
    let mut builder = AlgebraBuilder::new(group, degrees, file.conductor);
    let mut seen = vec![false; dim * dim];
    for cell in &file.mul {
        if cell.i >= dim || cell.j >= dim {
            return Err(field_err("mul", format!("cell ({}, {}) out of range", cell.i, cell.j)));
        }
        if seen[cell.i * dim + cell.j] {
            return Err(field_err("mul", format!("duplicate cell ({}, {})", cell.i, cell.j)));
        }
        seen[cell.i * dim + cell.j] = true;
        let mut terms = Vec::with_capacity(cell.terms.len());
        for t in &cell.terms {
            if t.k >= dim {
                return Err(field_err("mul", format!("term index {} out of range", t.k)));
            }
            terms.push((t.k, scalar_from_strings(&t.c, file.conductor, "mul")?));
        }
        builder.set_product(cell.i, cell.j, terms);
    }
    let unit: Result<Vec<Scalar>, FormatError> =
        file.unit.iter().map(|c| scalar_from_strings(c, file.conductor, "unit")).collect();
    builder.set_unit(unit?);
    Ok(builder.build())
}

// -- pres/1 ------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PresFile {
    format: String,
    conductor: u64,
    group: Vec<u64>,
    degrees: Vec<Vec<u64>>,
    powers: Vec<u64>,
    power_scalars: Vec<Vec<String>>,
    comm: Vec<CommDto>,
}

#[derive(Serialize, Deserialize)]
struct CommDto {
    i: usize,
    j: usize,
    c: Vec<String>,
}

pub fn read_presentation(text: &str) -> Result<Presentation, FormatError> {
    let file: PresFile = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    if file.format != "pres/1" {
        return Err(field_err("format", format!("expected 'pres/1', got '{}'", file.format)));
    }
    check_conductor(file.conductor, "conductor")?;
    let group = group_from_orders(&file.group, "group")?;
    let r = file.powers.len();
    if file.degrees.len() != r || file.power_scalars.len() != r {
        return Err(field_err("powers", "degrees, powers and power_scalars must have equal length"));
    }
    let degrees: Result<Vec<GroupElement>, FormatError> =
        file.degrees.iter().map(|res| element_from(res, &group, "degrees")).collect();
    let power_scalars: Result<Vec<Scalar>, FormatError> = file
        .power_scalars
        .iter()
        .map(|c| scalar_from_strings(c, file.conductor, "power_scalars"))
        .collect();
    let one = Scalar::one(file.conductor);
    let mut comm: Vec<Vec<Scalar>> = vec![vec![one; r]; r];
    for cd in &file.comm {
        if cd.i >= r || cd.j >= r || cd.i == cd.j {
            return Err(field_err("comm", format!("bad generator pair ({}, {})", cd.i, cd.j)));
        }
        let s = scalar_from_strings(&cd.c, file.conductor, "comm")?;
        let inv = s
            .inv()
            .map_err(|_| field_err("comm", "commutation scalar must be invertible"))?;
        comm[cd.i][cd.j] = s;
        comm[cd.j][cd.i] = inv;
    }
    Ok(Presentation {
        group,
        degrees: degrees?,
        powers: file.powers,
        power_scalars: power_scalars?,
        comm,
        conductor: file.conductor,
    })
}

// -- gmap/1 ------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GmapFile {
    format: String,
    conductor: u64,
    alpha: Vec<Vec<u64>>,
    images: Vec<Vec<Vec<String>>>,
}

pub fn write_map(map: &GradedMap, conductor: u64) -> String {
    let file = GmapFile {
        format: "gmap/1".into(),
        conductor,
        alpha: map.alpha.images.iter().map(|g| g.residues.clone()).collect(),
        images: map
            .images
            .iter()
            .map(|v| v.iter().map(|c| scalar_to_strings(c, conductor)).collect())
            .collect(),
    };
    let mut s = serde_json::to_string(&file).expect("serialization cannot fail");
    s.push('\n');
    s
}

/// A map file is interpreted against concrete source and target algebras.
pub fn read_map(
    text: &str,
    source: &GradedAlgebra,
    target: &GradedAlgebra,
) -> Result<GradedMap, FormatError> {
    let file: GmapFile = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    if file.format != "gmap/1" {
        return Err(field_err("format", format!("expected 'gmap/1', got '{}'", file.format)));
    }
    check_conductor(file.conductor, "conductor")?;
    if file.alpha.len() != source.group().orders().len() {
        return Err(field_err("alpha", "one image per source group generator required"));
    }
    let images_g: Result<Vec<GroupElement>, FormatError> =
        file.alpha.iter().map(|r| element_from(r, target.group(), "alpha")).collect();
    let alpha = GroupHom::new(source.group().clone(), target.group().clone(), images_g?)
        .map_err(|e| field_err("alpha", e.to_string()))?;
    if file.images.len() != source.dim() {
        return Err(field_err("images", format!("expected {} images, got {}", source.dim(), file.images.len())));
    }
    let mut images = Vec::with_capacity(file.images.len());
    for (i, row) in file.images.iter().enumerate() {
        if row.len() != target.dim() {
            return Err(field_err("images", format!("image {} has wrong length", i)));
        }
        let v: Result<Vec<Scalar>, FormatError> =
            row.iter().map(|c| scalar_from_strings(c, file.conductor, "images")).collect();
        images.push(v?.into_iter().map(|s| s.promote(num_integer::Integer::lcm(&file.conductor, &target.conductor()))).collect());
    }
    Ok(GradedMap { alpha, images })
}
