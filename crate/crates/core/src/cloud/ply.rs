//! Minimal PLY reader/writer for colored point clouds.
//!
//! Supports `ascii 1.0` and `binary_little_endian 1.0`. Only the `vertex`
//! element is interpreted; other elements and unknown vertex properties are
//! skipped.

use std::fmt::Write as _;

use crate::cloud::RawPointCloud;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlyFormat {
    Ascii,
    BinaryLittleEndian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            other => return Err(Error::Ply(format!("unknown scalar type '{other}'"))),
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar { name: String, ty: Scalar },
    List { count: Scalar, item: Scalar },
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    props: Vec<Property>,
}

struct Header {
    format: PlyFormat,
    elements: Vec<Element>,
    body_offset: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    const END: &[u8] = b"end_header";
    let end = bytes.windows(END.len()).position(|w| w == END).ok_or_else(|| Error::Ply("missing end_header".into()))?;
    let mut body_offset = end + END.len();
    // the header terminator line may end in \r\n
    if bytes.get(body_offset) == Some(&b'\r') {
        body_offset += 1;
    }
    if bytes.get(body_offset) == Some(&b'\n') {
        body_offset += 1;
    }
    let text = std::str::from_utf8(&bytes[..end]).map_err(|_| Error::Ply("header is not valid UTF-8".into()))?;

    let mut lines = text.lines().map(str::trim);
    if lines.next() != Some("ply") {
        return Err(Error::Ply("missing 'ply' magic".into()));
    }

    let mut format = None;
    let mut elements: Vec<Element> = Vec::new();
    for line in lines {
        let mut tok = line.split_whitespace();
        match tok.next() {
            None | Some("comment") | Some("obj_info") => {}
            Some("format") => {
                format = Some(match (tok.next(), tok.next()) {
                    (Some("ascii"), Some("1.0")) => PlyFormat::Ascii,
                    (Some("binary_little_endian"), Some("1.0")) => PlyFormat::BinaryLittleEndian,
                    (Some(f), v) => return Err(Error::Ply(format!("unsupported format '{f} {}'", v.unwrap_or("")))),
                    _ => return Err(Error::Ply("malformed format line".into())),
                });
            }
            Some("element") => {
                let (Some(name), Some(count)) = (tok.next(), tok.next()) else {
                    return Err(Error::Ply(format!("malformed element line '{line}'")));
                };
                let count = count.parse().map_err(|_| Error::Ply(format!("bad element count in '{line}'")))?;
                elements.push(Element { name: name.to_string(), count, props: Vec::new() });
            }
            Some("property") => {
                let element = elements.last_mut().ok_or_else(|| Error::Ply("property before any element".into()))?;
                let prop = match (tok.next(), tok.next(), tok.next(), tok.next()) {
                    (Some("list"), Some(c), Some(i), Some(_name)) => {
                        Property::List { count: Scalar::parse(c)?, item: Scalar::parse(i)? }
                    }
                    (Some(ty), Some(name), None, None) => {
                        Property::Scalar { name: name.to_string(), ty: Scalar::parse(ty)? }
                    }
                    _ => return Err(Error::Ply(format!("malformed property line '{line}'"))),
                };
                element.props.push(prop);
            }
            Some(other) => return Err(Error::Ply(format!("unexpected header keyword '{other}'"))),
        }
    }

    let format = format.ok_or_else(|| Error::Ply("missing format line".into()))?;
    Ok(Header { format, elements, body_offset })
}

/// Where each required vertex property sits among the element's properties.
struct VertexLayout {
    xyz: [usize; 3],
    rgb: [usize; 3],
}

fn vertex_layout(element: &Element) -> Result<VertexLayout> {
    let find = |want: &str| {
        element
            .props
            .iter()
            .position(|p| matches!(p, Property::Scalar { name, .. } if name == want))
            .ok_or_else(|| Error::Ply(format!("missing required vertex property '{want}'")))
    };
    let layout =
        VertexLayout { xyz: [find("x")?, find("y")?, find("z")?], rgb: [find("red")?, find("green")?, find("blue")?] };
    for &i in &layout.rgb {
        if let Property::Scalar { name, ty } = &element.props[i] {
            if *ty != Scalar::U8 {
                return Err(Error::Ply(format!("color property '{name}' must be uchar")));
            }
        }
    }
    Ok(layout)
}

fn truncated(element: &Element) -> Error {
    Error::Ply(format!("element count mismatch: body ends before {} '{}' records", element.count, element.name))
}

struct BinaryCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl BinaryCursor<'_> {
    fn take(&mut self, n: usize) -> Option<&[u8]> {
        let out = self.bytes.get(self.pos..self.pos + n)?;
        self.pos += n;
        Some(out)
    }

    fn scalar(&mut self, ty: Scalar) -> Option<f64> {
        let b = self.take(ty.size())?;
        Some(match ty {
            Scalar::I8 => b[0] as i8 as f64,
            Scalar::U8 => b[0] as f64,
            Scalar::I16 => i16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::U16 => u16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::I32 => i32::from_le_bytes(b.try_into().unwrap()) as f64,
            Scalar::U32 => u32::from_le_bytes(b.try_into().unwrap()) as f64,
            Scalar::F32 => f32::from_le_bytes(b.try_into().unwrap()) as f64,
            Scalar::F64 => f64::from_le_bytes(b.try_into().unwrap()),
        })
    }
}

/// Reads one record into `values` (one slot per scalar property, lists
/// collapsed to NaN). Returns `None` on premature end of data.
trait RecordSource {
    fn record(&mut self, element: &Element, values: &mut Vec<f64>) -> Option<()>;
}

impl RecordSource for BinaryCursor<'_> {
    fn record(&mut self, element: &Element, values: &mut Vec<f64>) -> Option<()> {
        values.clear();
        for prop in &element.props {
            match *prop {
                Property::Scalar { ty, .. } => values.push(self.scalar(ty)?),
                Property::List { count, item } => {
                    let n = self.scalar(count)?;
                    if n.is_nan() || n < 0.0 {
                        return None;
                    }
                    self.take(n as usize * item.size())?;
                    values.push(f64::NAN);
                }
            }
        }
        Some(())
    }
}

struct AsciiTokens<'a> {
    tokens: std::str::SplitAsciiWhitespace<'a>,
}

impl AsciiTokens<'_> {
    fn next_number(&mut self) -> Option<f64> {
        self.tokens.next()?.parse().ok()
    }
}

impl RecordSource for AsciiTokens<'_> {
    fn record(&mut self, element: &Element, values: &mut Vec<f64>) -> Option<()> {
        values.clear();
        for prop in &element.props {
            match prop {
                Property::Scalar { .. } => values.push(self.next_number()?),
                Property::List { .. } => {
                    let n = self.next_number()?;
                    if n.is_nan() || n < 0.0 {
                        return None;
                    }
                    for _ in 0..n as usize {
                        self.next_number()?;
                    }
                    values.push(f64::NAN);
                }
            }
        }
        Some(())
    }
}

fn read_vertices(header: &Header, src: &mut dyn RecordSource) -> Result<RawPointCloud> {
    let mut values = Vec::new();
    for element in &header.elements {
        if element.name != "vertex" {
            for _ in 0..element.count {
                src.record(element, &mut values).ok_or_else(|| truncated(element))?;
            }
            continue;
        }
        let layout = vertex_layout(element)?;
        let mut points = Vec::with_capacity(element.count);
        let mut colors = Vec::with_capacity(element.count);
        for _ in 0..element.count {
            src.record(element, &mut values).ok_or_else(|| truncated(element))?;
            points.push(layout.xyz.map(|i| values[i]));
            let rgb = layout.rgb.map(|i| values[i]);
            if rgb.iter().any(|c| !(0.0..=255.0).contains(c) || c.fract() != 0.0) {
                return Err(Error::Ply(format!("color value out of range: {rgb:?}")));
            }
            colors.push(rgb.map(|c| c as u8));
        }
        return Ok(RawPointCloud { points, colors });
    }
    Err(Error::Ply("no vertex element".into()))
}

pub fn read_ply(bytes: &[u8]) -> Result<RawPointCloud> {
    let header = parse_header(bytes)?;
    let body = &bytes[header.body_offset..];
    match header.format {
        PlyFormat::BinaryLittleEndian => {
            let mut cursor = BinaryCursor { bytes: body, pos: 0 };
            read_vertices(&header, &mut cursor)
        }
        PlyFormat::Ascii => {
            let text = std::str::from_utf8(body).map_err(|_| Error::Ply("ASCII body is not valid UTF-8".into()))?;
            let mut tokens = AsciiTokens { tokens: text.split_ascii_whitespace() };
            read_vertices(&header, &mut tokens)
        }
    }
}

/// Writes positions as `double` and colors as `uchar`.
pub fn write_ply(cloud: &RawPointCloud, format: PlyFormat) -> Vec<u8> {
    let n = cloud.points.len();
    let mut header = String::from("ply\n");
    header.push_str(match format {
        PlyFormat::Ascii => "format ascii 1.0\n",
        PlyFormat::BinaryLittleEndian => "format binary_little_endian 1.0\n",
    });
    let _ = writeln!(header, "element vertex {n}");
    for axis in ["x", "y", "z"] {
        let _ = writeln!(header, "property double {axis}");
    }
    for channel in ["red", "green", "blue"] {
        let _ = writeln!(header, "property uchar {channel}");
    }
    header.push_str("end_header\n");

    let mut out = header.into_bytes();
    match format {
        PlyFormat::Ascii => {
            let mut body = String::new();
            for (p, c) in cloud.points.iter().zip(&cloud.colors) {
                let _ = writeln!(body, "{} {} {} {} {} {}", p[0], p[1], p[2], c[0], c[1], c[2]);
            }
            out.extend_from_slice(body.as_bytes());
        }
        PlyFormat::BinaryLittleEndian => {
            out.reserve(n * 27);
            for (p, c) in cloud.points.iter().zip(&cloud.colors) {
                for v in p {
                    out.extend_from_slice(&v.to_le_bytes());
                }
                out.extend_from_slice(c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_RED: &str = "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\nproperty float z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n0 0 0 255 0 0\n";

    #[test]
    fn ascii_single_vertex() {
        let cloud = read_ply(ONE_RED.as_bytes()).unwrap();
        assert_eq!(cloud.points, vec![[0.0, 0.0, 0.0]]);
        assert_eq!(cloud.colors, vec![[255, 0, 0]]);
    }

    #[test]
    fn extra_property_is_skipped() {
        let text = "ply\nformat ascii 1.0\ncomment made by hand\nelement vertex 2\nproperty double x\nproperty double y\nproperty double z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\nproperty uchar alpha\nend_header\n1 2 3 10 20 30 99\n4 5 6 40 50 60 77\n";
        let cloud = read_ply(text.as_bytes()).unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(cloud.points[1], [4.0, 5.0, 6.0]);
        assert_eq!(cloud.colors[1], [40, 50, 60]);
    }

    fn binary_header(count: usize) -> Vec<u8> {
        format!(
            "ply\nformat binary_little_endian 1.0\nelement vertex {count}\nproperty float x\nproperty float y\nproperty float z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n"
        )
        .into_bytes()
    }

    fn binary_vertex(p: [f32; 3], c: [u8; 3]) -> Vec<u8> {
        let mut out = Vec::new();
        for v in p {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&c);
        out
    }

    #[test]
    fn binary_float_vertices() {
        let mut bytes = binary_header(2);
        bytes.extend(binary_vertex([0.5, 1.0, -2.0], [1, 2, 3]));
        bytes.extend(binary_vertex([3.0, 4.0, 5.0], [4, 5, 6]));
        let cloud = read_ply(&bytes).unwrap();
        assert_eq!(cloud.points, vec![[0.5, 1.0, -2.0], [3.0, 4.0, 5.0]]);
        assert_eq!(cloud.colors, vec![[1, 2, 3], [4, 5, 6]]);
    }

    #[test]
    fn binary_truncated_body() {
        let mut bytes = binary_header(2);
        bytes.extend(binary_vertex([0.0; 3], [0; 3]));
        let err = read_ply(&bytes).unwrap_err();
        assert!(err.to_string().contains("element count mismatch"), "{err}");
    }

    #[test]
    fn ascii_truncated_body() {
        let text = ONE_RED.replace("vertex 1", "vertex 2");
        assert!(read_ply(text.as_bytes()).is_err());
    }

    #[test]
    fn big_endian_rejected() {
        let text = ONE_RED.replace("ascii", "binary_big_endian");
        let err = read_ply(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("unsupported format"), "{err}");
    }

    #[test]
    fn missing_color_property() {
        let text = ONE_RED.replace("property uchar blue\n", "").replace("255 0 0", "255 0");
        let err = read_ply(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("blue"), "{err}");
    }

    #[test]
    fn malformed_header() {
        assert!(read_ply(b"ply\nformat ascii 1.0\nelement vertex\nend_header\n").is_err());
        assert!(read_ply(b"not a ply").is_err());
        assert!(read_ply(b"plx\nformat ascii 1.0\nend_header\n").is_err());
    }

    #[test]
    fn other_elements_are_skipped() {
        let mut bytes = b"ply\nformat binary_little_endian 1.0\nelement face 1\nproperty list uchar int vertex_indices\nelement vertex 1\nproperty double x\nproperty double y\nproperty double z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n".to_vec();
        bytes.push(3);
        for i in 0..3i32 {
            bytes.extend_from_slice(&i.to_le_bytes());
        }
        for v in [7.0f64, 8.0, 9.0] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        bytes.extend_from_slice(&[9, 8, 7]);
        let cloud = read_ply(&bytes).unwrap();
        assert_eq!(cloud.points, vec![[7.0, 8.0, 9.0]]);
        assert_eq!(cloud.colors, vec![[9, 8, 7]]);
    }

    #[test]
    fn write_then_read() {
        let cloud = RawPointCloud {
            points: vec![[0.125, -3.5, 1e6], [1.0 / 3.0, 2.0, 0.0]],
            colors: vec![[0, 128, 255], [7, 7, 7]],
        };
        for format in [PlyFormat::Ascii, PlyFormat::BinaryLittleEndian] {
            let back = read_ply(&write_ply(&cloud, format)).unwrap();
            assert_eq!(back, cloud, "{format:?}");
        }
    }
}
