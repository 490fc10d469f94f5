//! OBJ and PLY readers plus OBJ export.
//!
//! OBJ: `v x y z` and `f i j k ...` records; 1-based indices; `i/t/n`
//! attribute suffixes ignored; polygons fan-triangulated. PLY: ASCII and
//! binary-little-endian with `vertex {x, y, z}` and `face {vertex index
//! list}` elements; unknown properties are skipped.

use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::Point3;

use crate::error::MeshError;
use crate::isoline::LineSet;
use crate::mesh::MeshBuffer;

/// Supported mesh file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Ply,
}

impl MeshFormat {
    /// Guesses the format from a file extension.
    pub fn from_extension(path: &str) -> Option<MeshFormat> {
        let lower = path.to_ascii_lowercase();
        if lower.ends_with(".obj") {
            Some(MeshFormat::Obj)
        } else if lower.ends_with(".ply") {
            Some(MeshFormat::Ply)
        } else {
            None
        }
    }
}

/// Reads a triangle mesh from a byte stream in the declared format.
pub fn load_mesh<R: Read>(source: R, format: MeshFormat) -> Result<MeshBuffer, MeshError> {
    match format {
        MeshFormat::Obj => load_obj(source),
        MeshFormat::Ply => load_ply(source),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        line,
        message: message.into(),
    }
}

fn load_obj<R: Read>(source: R) -> Result<MeshBuffer, MeshError> {
    let reader = BufReader::new(source);
    let mut positions: Vec<Point3<f64>> = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let mut coord = [0.0f64; 3];
                for c in &mut coord {
                    let tok = tokens
                        .next()
                        .ok_or_else(|| parse_err(lineno, "vertex needs 3 coordinates"))?;
                    *c = tok
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("bad coordinate '{tok}'")))?;
                }
                positions.push(Point3::new(coord[0], coord[1], coord[2]));
            }
            Some("f") => {
                let mut indices: Vec<u32> = Vec::new();
                for tok in tokens {
                    let head = tok.split('/').next().unwrap_or("");
                    let idx: i64 = head
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("bad face index '{tok}'")))?;
                    if idx < 1 {
                        return Err(parse_err(lineno, format!("face index {idx} must be >= 1")));
                    }
                    let idx = (idx - 1) as usize;
                    if idx >= positions.len() {
                        return Err(MeshError::IndexOutOfRange {
                            index: idx,
                            count: positions.len(),
                        });
                    }
                    indices.push(idx as u32);
                }
                if indices.len() < 3 {
                    return Err(parse_err(lineno, "face needs at least 3 vertices"));
                }
                for k in 1..indices.len() - 1 {
                    triangles.push([indices[0], indices[k], indices[k + 1]]);
                }
            }
            // comments, normals, texture coords, groups, materials
            _ => {}
        }
    }
    MeshBuffer::new(positions, triangles)
}

/// Writes the mesh as OBJ. Positions use the shortest round-trip float
/// representation so that load -> save -> load is bit-identical.
pub fn save_obj<W: Write>(mesh: &MeshBuffer, mut out: W) -> Result<(), MeshError> {
    for p in mesh.positions() {
        writeln!(out, "v {} {} {}", p.x, p.y, p.z)?;
    }
    for tri in mesh.triangles() {
        writeln!(out, "f {} {} {}", tri[0] + 1, tri[1] + 1, tri[2] + 1)?;
    }
    Ok(())
}

/// Writes extracted polylines as OBJ `v`/`l` records.
pub fn save_lines_obj<W: Write>(lines: &LineSet, mut out: W) -> Result<(), MeshError> {
    writeln!(out, "# method: {}", lines.method.tag())?;
    let mut base = 1usize;
    for poly in &lines.polylines {
        for p in &poly.points {
            writeln!(out, "v {} {} {}", p.position.x, p.position.y, p.position.z)?;
        }
        let mut record = String::from("l");
        for k in 0..poly.points.len() {
            record.push_str(&format!(" {}", base + k));
        }
        if poly.closed {
            record.push_str(&format!(" {base}"));
        }
        writeln!(out, "{record}")?;
        base += poly.points.len();
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PlyScalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl PlyScalar {
    fn parse(name: &str) -> Option<PlyScalar> {
        Some(match name {
            "char" | "int8" => PlyScalar::I8,
            "uchar" | "uint8" => PlyScalar::U8,
            "short" | "int16" => PlyScalar::I16,
            "ushort" | "uint16" => PlyScalar::U16,
            "int" | "int32" => PlyScalar::I32,
            "uint" | "uint32" => PlyScalar::U32,
            "float" | "float32" => PlyScalar::F32,
            "double" | "float64" => PlyScalar::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            PlyScalar::I8 | PlyScalar::U8 => 1,
            PlyScalar::I16 | PlyScalar::U16 => 2,
            PlyScalar::I32 | PlyScalar::U32 | PlyScalar::F32 => 4,
            PlyScalar::F64 => 8,
        }
    }

    fn read_le(self, bytes: &[u8]) -> f64 {
        match self {
            PlyScalar::I8 => bytes[0] as i8 as f64,
            PlyScalar::U8 => bytes[0] as f64,
            PlyScalar::I16 => i16::from_le_bytes([bytes[0], bytes[1]]) as f64,
            PlyScalar::U16 => u16::from_le_bytes([bytes[0], bytes[1]]) as f64,
            PlyScalar::I32 => i32::from_le_bytes(bytes[..4].try_into().unwrap()) as f64,
            PlyScalar::U32 => u32::from_le_bytes(bytes[..4].try_into().unwrap()) as f64,
            PlyScalar::F32 => f32::from_le_bytes(bytes[..4].try_into().unwrap()) as f64,
            PlyScalar::F64 => f64::from_le_bytes(bytes[..8].try_into().unwrap()),
        }
    }
}

#[derive(Debug, Clone)]
enum PlyProperty {
    Scalar { name: String, ty: PlyScalar },
    List { name: String, count: PlyScalar, item: PlyScalar },
}

#[derive(Debug, Clone)]
struct PlyElement {
    name: String,
    count: usize,
    properties: Vec<PlyProperty>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PlyEncoding {
    Ascii,
    BinaryLittleEndian,
}

fn load_ply<R: Read>(source: R) -> Result<MeshBuffer, MeshError> {
    let mut reader = BufReader::new(source);
    let mut lineno = 0usize;
    let mut read_line = |reader: &mut BufReader<R>| -> Result<String, MeshError> {
        let mut line = String::new();
        let n = reader.read_line(&mut line)?;
        if n == 0 {
            return Err(parse_err(lineno, "unexpected end of header"));
        }
        lineno += 1;
        Ok(line.trim_end().to_string())
    };

    let magic = read_line(&mut reader)?;
    if magic.trim() != "ply" {
        return Err(parse_err(1, "missing 'ply' magic"));
    }
    let mut encoding = None;
    let mut elements: Vec<PlyElement> = Vec::new();
    loop {
        let line = read_line(&mut reader)?;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("format") => {
                encoding = match tokens.next() {
                    Some("ascii") => Some(PlyEncoding::Ascii),
                    Some("binary_little_endian") => Some(PlyEncoding::BinaryLittleEndian),
                    other => {
                        return Err(parse_err(
                            0,
                            format!("unsupported ply format {other:?}"),
                        ))
                    }
                };
            }
            Some("element") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| parse_err(0, "element needs a name"))?
                    .to_string();
                let count: usize = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(0, "element needs a count"))?;
                elements.push(PlyElement {
                    name,
                    count,
                    properties: Vec::new(),
                });
            }
            Some("property") => {
                let element = elements
                    .last_mut()
                    .ok_or_else(|| parse_err(0, "property before element"))?;
                let kind = tokens.next().ok_or_else(|| parse_err(0, "bad property"))?;
                if kind == "list" {
                    let count = PlyScalar::parse(tokens.next().unwrap_or(""))
                        .ok_or_else(|| parse_err(0, "bad list count type"))?;
                    let item = PlyScalar::parse(tokens.next().unwrap_or(""))
                        .ok_or_else(|| parse_err(0, "bad list item type"))?;
                    let name = tokens
                        .next()
                        .ok_or_else(|| parse_err(0, "list property needs a name"))?
                        .to_string();
                    element.properties.push(PlyProperty::List { name, count, item });
                } else {
                    let ty = PlyScalar::parse(kind)
                        .ok_or_else(|| parse_err(0, format!("unknown type '{kind}'")))?;
                    let name = tokens
                        .next()
                        .ok_or_else(|| parse_err(0, "property needs a name"))?
                        .to_string();
                    element.properties.push(PlyProperty::Scalar { name, ty });
                }
            }
            Some("comment") | Some("obj_info") => {}
            Some("end_header") => break,
            other => return Err(parse_err(0, format!("unexpected header token {other:?}"))),
        }
    }
    let encoding = encoding.ok_or_else(|| parse_err(0, "missing ply format line"))?;

    let mut positions: Vec<Point3<f64>> = Vec::new();
    let mut faces: Vec<Vec<u32>> = Vec::new();
    match encoding {
        PlyEncoding::Ascii => {
            let mut tokens: Vec<String> = Vec::new();
            {
                let mut body = String::new();
                reader.read_to_string(&mut body)?;
                tokens.extend(body.split_whitespace().map(|s| s.to_string()));
            }
            let mut cursor = 0usize;
            let next = |cursor: &mut usize| -> Result<f64, MeshError> {
                let tok = tokens
                    .get(*cursor)
                    .ok_or_else(|| parse_err(0, "unexpected end of ply body"))?;
                *cursor += 1;
                tok.parse()
                    .map_err(|_| parse_err(0, format!("bad ply value '{tok}'")))
            };
            for element in &elements {
                for _ in 0..element.count {
                    let mut coord = [f64::NAN; 3];
                    let mut list: Vec<f64> = Vec::new();
                    for prop in &element.properties {
                        match prop {
                            PlyProperty::Scalar { name, .. } => {
                                let value = next(&mut cursor)?;
                                match name.as_str() {
                                    "x" => coord[0] = value,
                                    "y" => coord[1] = value,
                                    "z" => coord[2] = value,
                                    _ => {}
                                }
                            }
                            PlyProperty::List { name, .. } => {
                                let n = next(&mut cursor)? as usize;
                                let mut values = Vec::with_capacity(n);
                                for _ in 0..n {
                                    values.push(next(&mut cursor)?);
                                }
                                if name.starts_with("vertex_ind") || name == "vertex_indices" {
                                    list = values;
                                }
                            }
                        }
                    }
                    store_ply_row(element, coord, list, &mut positions, &mut faces)?;
                }
            }
        }
        PlyEncoding::BinaryLittleEndian => {
            let mut body = Vec::new();
            reader.read_to_end(&mut body)?;
            let mut offset = 0usize;
            let take = |offset: &mut usize, n: usize| -> Result<&[u8], MeshError> {
                if *offset + n > body.len() {
                    return Err(parse_err(0, "unexpected end of binary ply body"));
                }
                let slice = &body[*offset..*offset + n];
                *offset += n;
                Ok(slice)
            };
            for element in &elements {
                for _ in 0..element.count {
                    let mut coord = [f64::NAN; 3];
                    let mut list: Vec<f64> = Vec::new();
                    for prop in &element.properties {
                        match prop {
                            PlyProperty::Scalar { name, ty } => {
                                let value = ty.read_le(take(&mut offset, ty.size())?);
                                match name.as_str() {
                                    "x" => coord[0] = value,
                                    "y" => coord[1] = value,
                                    "z" => coord[2] = value,
                                    _ => {}
                                }
                            }
                            PlyProperty::List { name, count, item } => {
                                let n = count.read_le(take(&mut offset, count.size())?) as usize;
                                let mut values = Vec::with_capacity(n);
                                for _ in 0..n {
                                    values.push(item.read_le(take(&mut offset, item.size())?));
                                }
                                if name.starts_with("vertex_ind") {
                                    list = values;
                                }
                            }
                        }
                    }
                    store_ply_row(element, coord, list, &mut positions, &mut faces)?;
                }
            }
        }
    }

    let mut triangles = Vec::new();
    for indices in &faces {
        if indices.len() < 3 {
            return Err(parse_err(0, "ply face with fewer than 3 vertices"));
        }
        for k in 1..indices.len() - 1 {
            triangles.push([indices[0], indices[k], indices[k + 1]]);
        }
    }
    MeshBuffer::new(positions, triangles)
}

fn store_ply_row(
    element: &PlyElement,
    coord: [f64; 3],
    list: Vec<f64>,
    positions: &mut Vec<Point3<f64>>,
    faces: &mut Vec<Vec<u32>>,
) -> Result<(), MeshError> {
    match element.name.as_str() {
        "vertex" => {
            if coord.iter().any(|c| c.is_nan()) {
                return Err(parse_err(0, "vertex element missing x/y/z"));
            }
            positions.push(Point3::new(coord[0], coord[1], coord[2]));
        }
        "face" => {
            let indices = list
                .iter()
                .map(|&v| {
                    if v < 0.0 || v.fract() != 0.0 {
                        Err(parse_err(0, format!("bad face index {v}")))
                    } else if (v as usize) >= positions.len() {
                        Err(MeshError::IndexOutOfRange {
                            index: v as usize,
                            count: positions.len(),
                        })
                    } else {
                        Ok(v as u32)
                    }
                })
                .collect::<Result<Vec<u32>, MeshError>>()?;
            faces.push(indices);
        }
        _ => {}
    }
    Ok(())
}
