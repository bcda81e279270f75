//! Stable JSON encodings of the public values, shared with the
//! command-line front end.
//!
//! Numbers are emitted as bare JSON integers of arbitrary size; object
//! keys are emitted in sorted order so that identical values always
//! serialise to identical bytes.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::correspondence::Correspondence;
use crate::cycle::Cycle;
use crate::error::{Error, Result};
use crate::lifting::IsoClass;
use crate::mat::Mat;
use crate::quadric::{Bits, Cell, GaloisContext, SplitQuadric};
use crate::ring::CoeffRing;

pub fn bigint_to_json(i: &BigInt) -> Value {
    let n = serde_json::from_str(&i.to_string()).expect("integer literal is a JSON number");
    Value::Number(n)
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| Error::InvalidInput(format!("expected an integer, got {n}"))),
        other => Err(Error::InvalidInput(format!("expected an integer, got {other}"))),
    }
}

fn expect_object<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::InvalidInput(format!("expected a JSON object for {what}")))
}

fn get<'v>(obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing field {key:?}")))
}

fn expect_u32(v: &Value, what: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::InvalidInput(format!("expected a small nonnegative integer for {what}")))
}

fn bits_to_json(b: &Bits) -> Value {
    Value::Array(b.to_bits().iter().map(|&x| json!(x)).collect())
}

fn bits_from_json(v: &Value) -> Result<Bits> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("expected an array of bits".into()))?;
    let bits: Vec<u8> = arr
        .iter()
        .map(|x| {
            x.as_u64()
                .filter(|&b| b <= 1)
                .map(|b| b as u8)
                .ok_or_else(|| Error::InvalidInput("bits are 0 or 1".into()))
        })
        .collect::<Result<_>>()?;
    Bits::from_bits(&bits)
}

pub fn quadric_to_json(q: &SplitQuadric) -> Value {
    json!({ "dim": q.dim(), "disc": bits_to_json(q.disc()) })
}

pub fn quadric_from_json(v: &Value) -> Result<SplitQuadric> {
    let obj = expect_object(v, "a quadric")?;
    let dim = expect_u32(get(obj, "dim")?, "dim")?;
    let disc = bits_from_json(get(obj, "disc")?)?;
    SplitQuadric::new(dim, disc)
}

pub fn galois_to_json(g: &GaloisContext) -> Value {
    json!({ "r": g.generators(), "n": g.degree_exponent() })
}

pub fn galois_from_json(v: &Value) -> Result<GaloisContext> {
    let obj = expect_object(v, "a Galois context")?;
    let r = expect_u32(get(obj, "r")?, "r")?;
    let n = expect_u32(get(obj, "n")?, "n")?;
    GaloisContext::new(r as usize, n)
}

pub fn ring_to_json(ring: &CoeffRing) -> Value {
    Value::String(ring.tag())
}

pub fn ring_from_json(v: &Value) -> Result<CoeffRing> {
    let tag = v
        .as_str()
        .ok_or_else(|| Error::InvalidInput("expected a ring tag string".into()))?;
    CoeffRing::from_tag(tag)
}

pub fn mat_to_json(m: &Mat) -> Value {
    json!({
        "ring": ring_to_json(m.ring()),
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": Value::Array(m.entries().iter().map(bigint_to_json).collect()),
    })
}

pub fn mat_from_json(v: &Value) -> Result<Mat> {
    let obj = expect_object(v, "a matrix")?;
    let ring = ring_from_json(get(obj, "ring")?)?;
    let rows = expect_u32(get(obj, "rows")?, "rows")? as usize;
    let cols = expect_u32(get(obj, "cols")?, "cols")? as usize;
    let entries = get(obj, "entries")?
        .as_array()
        .ok_or_else(|| Error::InvalidInput("entries must be an array".into()))?
        .iter()
        .map(bigint_from_json)
        .collect::<Result<Vec<_>>>()?;
    Mat::new(ring, rows, cols, entries)
}

/// Blocks are emitted as 2D arrays keyed by their dimension; all-zero
/// blocks are omitted.
pub fn correspondence_to_json(c: &Correspondence) -> Value {
    let mut blocks = Map::new();
    for i in 0..=c.top_dim() {
        let b = c.block(i);
        if b.is_zero() {
            continue;
        }
        let rows: Vec<Value> = (0..b.rows())
            .map(|r| Value::Array(b.row(r).iter().map(bigint_to_json).collect()))
            .collect();
        blocks.insert(i.to_string(), Value::Array(rows));
    }
    json!({
        "source": quadric_to_json(c.source()),
        "target": quadric_to_json(c.target()),
        "ring": ring_to_json(c.ring()),
        "blocks": Value::Object(blocks),
    })
}

pub fn correspondence_from_json(v: &Value) -> Result<Correspondence> {
    let obj = expect_object(v, "a correspondence")?;
    let source = quadric_from_json(get(obj, "source")?)?;
    let target = quadric_from_json(get(obj, "target")?)?;
    let ring = ring_from_json(get(obj, "ring")?)?;
    let mut out = Correspondence::zero(source, target, ring.clone());
    let blocks = expect_object(get(obj, "blocks")?, "blocks")?;
    for (key, rows_v) in blocks {
        let i: u32 = key
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad block dimension {key:?}")))?;
        let rows_arr = rows_v
            .as_array()
            .ok_or_else(|| Error::InvalidInput("a block is a 2D array".into()))?;
        let mut entries = Vec::new();
        let mut cols = None;
        for row in rows_arr {
            let row = row
                .as_array()
                .ok_or_else(|| Error::InvalidInput("a block is a 2D array".into()))?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(Error::InvalidInput("ragged block rows".into()))
                }
                _ => {}
            }
            for e in row {
                entries.push(bigint_from_json(e)?);
            }
        }
        let mat = Mat::new(ring.clone(), rows_arr.len(), cols.unwrap_or(0), entries)?;
        out.set_block(i, mat)?;
    }
    Ok(out)
}

pub fn cycle_to_json(x: &Cycle) -> Value {
    let mut cells = Map::new();
    for (cell, coeff) in x.coords() {
        cells.insert(cell.label(x.quadric()), bigint_to_json(coeff));
    }
    json!({ "cells": Value::Object(cells) })
}

pub fn cycle_from_json(quadric: SplitQuadric, ring: CoeffRing, v: &Value) -> Result<Cycle> {
    let obj = expect_object(v, "a cycle")?;
    let cells = expect_object(get(obj, "cells")?, "cells")?;
    let mut coords = Vec::new();
    for (label, coeff) in cells {
        let cell = Cell::from_label(label, &quadric)?;
        coords.push((cell, bigint_from_json(coeff)?));
    }
    Cycle::from_coords(quadric, ring, coords)
}

pub fn iso_class_to_json(c: &IsoClass) -> Value {
    let twists: Vec<Value> = c
        .twists
        .iter()
        .map(|(dim, mult)| json!([dim, mult]))
        .collect();
    let marker = match &c.middle_marker {
        Some((dim, disc)) => json!({ "dim": dim, "disc": bits_to_json(disc) }),
        None => Value::Null,
    };
    json!({ "twists": twists, "middle_marker": marker })
}
