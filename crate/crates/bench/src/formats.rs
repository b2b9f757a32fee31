//! File formats: CSV vectors and binary PGM images.
//!
//! CSV: one value per line; floats use Rust's shortest round-trip `Display`,
//! so generate → load reproduces arrays bit-exactly. Complex values are
//! written as `re,im` on one line.
//!
//! PGM: binary `P5`, maxval 255, row-major. Values quantize as
//! `round(clamp(v, 0, 1) * 255)`; loading maps byte `b` to `b / 255.0`.
//! Generators that emit PGM treat the quantized grid as the ground truth so
//! the round trip is exact at the byte level.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};

pub fn write_csv_real(path: &Path, values: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(values.len() * 8);
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_csv_real(path: &Path) -> Result<Vec<f64>> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut values = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let v: f64 = trimmed
            .parse()
            .with_context(|| format!("{}:{}: invalid number '{trimmed}'", path.display(), i + 1))?;
        values.push(v);
    }
    if values.is_empty() {
        bail!("{}: no values", path.display());
    }
    Ok(values)
}

/// Interleaved re/im pairs written as `re,im` lines.
pub fn write_csv_complex(path: &Path, interleaved: &[f64]) -> Result<()> {
    if interleaved.len() % 2 != 0 {
        bail!("complex CSV needs an even number of scalars");
    }
    let mut out = String::new();
    for pair in interleaved.chunks_exact(2) {
        out.push_str(&format!("{},{}\n", pair[0], pair[1]));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_csv_complex(path: &Path) -> Result<Vec<f64>> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut values = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (re, im) = trimmed.split_once(',').with_context(|| {
            format!("{}:{}: expected 're,im'", path.display(), i + 1)
        })?;
        values.push(re.trim().parse::<f64>()?);
        values.push(im.trim().parse::<f64>()?);
    }
    Ok(values)
}

pub fn quantize_unit_to_byte(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn write_pgm(path: &Path, width: usize, height: usize, values: &[f64]) -> Result<()> {
    if values.len() != width * height {
        bail!("pgm dimensions {}x{} do not match {} values", width, height, values.len());
    }
    let mut bytes = format!("P5\n{width} {height}\n255\n").into_bytes();
    bytes.extend(values.iter().map(|&v| quantize_unit_to_byte(v)));
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(&bytes)?;
    Ok(())
}

pub fn read_pgm(path: &Path) -> Result<(usize, usize, Vec<f64>)> {
    let mut data = Vec::new();
    fs::File::open(path)
        .with_context(|| format!("opening {}", path.display()))?
        .read_to_end(&mut data)?;
    let mut pos = 0usize;
    let mut token = || -> Result<String> {
        // Skip whitespace and `#` comments.
        loop {
            while pos < data.len() && data[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < data.len() && data[pos] == b'#' {
                while pos < data.len() && data[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < data.len() && !data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            bail!("truncated PGM header");
        }
        Ok(String::from_utf8_lossy(&data[start..pos]).into_owned())
    };
    let magic = token()?;
    if magic != "P5" {
        bail!("unsupported PGM magic '{magic}' (want binary P5)");
    }
    let width: usize = token()?.parse()?;
    let height: usize = token()?.parse()?;
    let maxval: usize = token()?.parse()?;
    if maxval != 255 {
        bail!("unsupported PGM maxval {maxval} (want 255)");
    }
    pos += 1; // single whitespace after maxval
    let need = width * height;
    if data.len() < pos + need {
        bail!("truncated PGM pixel data");
    }
    let values = data[pos..pos + need].iter().map(|&b| b as f64 / 255.0).collect();
    Ok((width, height, values))
}
