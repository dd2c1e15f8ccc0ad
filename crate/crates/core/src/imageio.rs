//! Netpbm (PGM/PPM) and ASCII PLY codecs.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("bad netpbm header: {0}")]
    Header(String),
    #[error("expected {expected} bytes of pixel data, found {got}")]
    Truncated { expected: usize, got: usize },
    #[error("ply: {0}")]
    Ply(String),
}

pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// One sample per pixel, row-major.
    pub samples: Vec<u16>,
}

pub fn encode_pgm8(width: usize, height: usize, px: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(px);
    out
}

/// 16-bit samples are written big-endian as netpbm requires.
pub fn encode_pgm16(width: usize, height: usize, px: &[u16]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n65535\n").into_bytes();
    for v in px {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out
}

pub fn encode_ppm(width: usize, height: usize, rgb: &[[u8; 3]]) -> Vec<u8> {
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    for p in rgb {
        out.extend_from_slice(p);
    }
    out
}

struct Header {
    magic: [u8; 2],
    width: usize,
    height: usize,
    maxval: u16,
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header, FormatError> {
    let mut pos = 0;
    let mut fields: Vec<String> = Vec::with_capacity(4);
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        if start == pos {
            return Err(FormatError::Header("unexpected end of header".into()));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    // Exactly one whitespace byte separates the header from the raster.
    pos += 1;
    let magic = fields[0].as_bytes();
    if magic.len() != 2 {
        return Err(FormatError::Header(format!("magic `{}`", fields[0])));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| FormatError::Header(format!("not a number: `{s}`")))
    };
    let maxval = num(&fields[3])?;
    if maxval == 0 || maxval > 65535 {
        return Err(FormatError::Header(format!("maxval {maxval}")));
    }
    Ok(Header {
        magic: [magic[0], magic[1]],
        width: num(&fields[1])?,
        height: num(&fields[2])?,
        maxval: maxval as u16,
        data_start: pos,
    })
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Pgm, FormatError> {
    let h = parse_header(bytes)?;
    if &h.magic != b"P5" {
        return Err(FormatError::Header("expected binary PGM (P5)".into()));
    }
    let n = h.width * h.height;
    let bpp = if h.maxval > 255 { 2 } else { 1 };
    let data = bytes.get(h.data_start..).unwrap_or(&[]);
    if data.len() < n * bpp {
        return Err(FormatError::Truncated {
            expected: n * bpp,
            got: data.len(),
        });
    }
    let samples = if bpp == 1 {
        data[..n].iter().map(|&b| b as u16).collect()
    } else {
        data[..2 * n]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect()
    };
    Ok(Pgm {
        width: h.width,
        height: h.height,
        maxval: h.maxval,
        samples,
    })
}

pub fn decode_ppm(bytes: &[u8]) -> Result<(usize, usize, Vec<[u8; 3]>), FormatError> {
    let h = parse_header(bytes)?;
    if &h.magic != b"P6" || h.maxval > 255 {
        return Err(FormatError::Header("expected 8-bit binary PPM (P6)".into()));
    }
    let n = h.width * h.height;
    let data = bytes.get(h.data_start..).unwrap_or(&[]);
    if data.len() < 3 * n {
        return Err(FormatError::Truncated {
            expected: 3 * n,
            got: data.len(),
        });
    }
    let px = data[..3 * n]
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    Ok((h.width, h.height, px))
}

pub fn encode_ply(points: &[[f64; 3]]) -> String {
    let mut s = format!(
        "ply\nformat ascii 1.0\nelement vertex {}\nproperty float x\nproperty float y\nproperty float z\nend_header\n",
        points.len()
    );
    for p in points {
        s.push_str(&format!("{} {} {}\n", p[0], p[1], p[2]));
    }
    s
}

/// Reads the x/y/z columns of an ASCII PLY vertex element. Extra vertex
/// properties are skipped.
pub fn decode_ply(text: &str) -> Result<Vec<[f64; 3]>, FormatError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("ply") {
        return Err(FormatError::Ply("missing `ply` magic".into()));
    }
    let mut count = None;
    let mut props: Vec<String> = Vec::new();
    let mut in_vertex = false;
    for line in lines.by_ref() {
        let t: Vec<&str> = line.split_whitespace().collect();
        match t.as_slice() {
            ["format", fmt, ..] if *fmt != "ascii" => {
                return Err(FormatError::Ply(format!("unsupported format `{fmt}`")))
            }
            ["element", "vertex", n] => {
                count = Some(
                    n.parse::<usize>()
                        .map_err(|_| FormatError::Ply(format!("bad vertex count `{n}`")))?,
                );
                in_vertex = true;
            }
            ["element", ..] => in_vertex = false,
            ["property", .., name] if in_vertex => props.push(name.to_string()),
            ["end_header"] => break,
            _ => {}
        }
    }
    let count = count.ok_or_else(|| FormatError::Ply("no vertex element".into()))?;
    let idx = |axis: &str| {
        props
            .iter()
            .position(|p| p == axis)
            .ok_or_else(|| FormatError::Ply(format!("missing property {axis}")))
    };
    let (ix, iy, iz) = (idx("x")?, idx("y")?, idx("z")?);
    let mut out = Vec::with_capacity(count);
    for (k, line) in lines.take(count).enumerate() {
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|v| v.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| FormatError::Ply(format!("vertex {k}: bad number")))?;
        if vals.len() < props.len() {
            return Err(FormatError::Ply(format!("vertex {k}: too few values")));
        }
        out.push([vals[ix], vals[iy], vals[iz]]);
    }
    if out.len() != count {
        return Err(FormatError::Ply(format!(
            "expected {count} vertices, found {}",
            out.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm16_round_trip() {
        let px = vec![0u16, 1, 1000, 65535, 300, 7];
        let img = decode_pgm(&encode_pgm16(3, 2, &px)).unwrap();
        assert_eq!((img.width, img.height, img.maxval), (3, 2, 65535));
        assert_eq!(img.samples, px);
    }

    #[test]
    fn pgm_with_comment() {
        let mut bytes = b"P5\n# made by hand\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[9, 200]);
        assert_eq!(decode_pgm(&bytes).unwrap().samples, vec![9, 200]);
    }

    #[test]
    fn truncated_raster() {
        let bytes = b"P5\n4 4\n255\n\x01\x02".to_vec();
        assert!(matches!(
            decode_pgm(&bytes),
            Err(FormatError::Truncated { expected: 16, got: 2 })
        ));
    }

    #[test]
    fn ply_with_extra_properties() {
        let text = "ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nproperty float y\nproperty float z\nproperty uchar red\nend_header\n1 2 3 255\n4 5 6 0\n";
        assert_eq!(decode_ply(text).unwrap(), vec![[1., 2., 3.], [4., 5., 6.]]);
        let pts = vec![[0.25, -1.5, 2.0]];
        assert_eq!(decode_ply(&encode_ply(&pts)).unwrap(), pts);
    }
}
