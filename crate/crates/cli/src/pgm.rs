use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use antilearn_core::data::hadamard::HadamardMatrix;

use crate::error::{Error, Result};

/// Plain (P2) graymap, one pixel per entry: +1 is white, -1 is black.
pub fn write_pgm<W: Write>(h: &HadamardMatrix, mut w: W) -> io::Result<()> {
    let n = h.order();
    write!(w, "P2\n{n} {n}\n255\n")?;
    for row in h.rows() {
        let line: Vec<&str> = row
            .iter()
            .map(|&v| if v > 0 { "255" } else { "0" })
            .collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()
}

pub fn render_matrix_pgm(h: &HadamardMatrix, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_pgm(h, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use antilearn_core::data::hadamard::sylvester_hadamard;

    fn render(k: u32) -> String {
        let mut buf = Vec::new();
        write_pgm(&sylvester_hadamard(k).unwrap(), &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn order_two() {
        assert_eq!(render(1), "P2\n2 2\n255\n255 255\n255 0\n");
    }

    #[test]
    fn order_four_corner_is_white() {
        let text = render(2);
        assert!(text.starts_with("P2\n4 4\n255\n"));
        let pixels: Vec<&str> = text.lines().skip(3).collect();
        assert_eq!(pixels[3].split(' ').nth(3), Some("255"));
    }
}
