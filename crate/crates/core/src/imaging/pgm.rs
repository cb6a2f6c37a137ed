//! Binary PGM (`P5`, maxval 255).

use thiserror::Error;

use super::GrayImage;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("bad magic: expected `P5`")]
    Magic,
    #[error("malformed header field `{0}`")]
    Header(&'static str),
    #[error("unsupported maxval {0}: only 255 is accepted")]
    UnsupportedMaxval(u32),
    #[error("truncated payload: expected {expected} pixel bytes, found {found}")]
    Truncated { expected: usize, found: usize },
}

struct HeaderReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, field: &'static str) -> Result<u32, PgmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PgmError::Header(field))
    }
}

pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    if !bytes.starts_with(b"P5") {
        return Err(PgmError::Magic);
    }
    let mut r = HeaderReader { data: bytes, pos: 2 };
    if !r.data.get(r.pos).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(PgmError::Magic);
    }
    let cols = r.number("width")? as usize;
    let rows = r.number("height")? as usize;
    let maxval = r.number("maxval")?;
    if maxval != 255 {
        return Err(PgmError::UnsupportedMaxval(maxval));
    }
    // exactly one whitespace byte separates the header from the raster
    match r.data.get(r.pos) {
        Some(b) if b.is_ascii_whitespace() => r.pos += 1,
        _ => return Err(PgmError::Header("maxval")),
    }
    let expected = rows * cols;
    let payload = &bytes[r.pos..];
    if payload.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            found: payload.len(),
        });
    }
    Ok(GrayImage {
        rows,
        cols,
        pixels: payload[..expected].to_vec(),
    })
}

pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.cols(), img.rows()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}
