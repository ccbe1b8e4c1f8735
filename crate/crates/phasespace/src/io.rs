//! File formats: fields, density matrices, measurement records, and
//! threshold reports as UTF-8 CSV with comment headers.
//!
//! Values are written with 17 significant digits, which round-trips f64
//! bit-exactly.

use ndarray::Array2;
use num_complex::Complex64;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::decoherence::ThresholdReport;
use crate::error::{Error, Result};
use crate::field::{ChordField, WignerField};
use crate::fock::DensityMatrix;
use crate::grid::GridSpec;
use crate::measurement::MeasurementRecord;
use crate::point::PhasePoint;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::Parse {
        line,
        msg: format!("bad float {s:?}: {e}"),
    })
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|e| Error::Parse {
        line,
        msg: format!("bad integer {s:?}: {e}"),
    })
}

fn grid_header(grid: &GridSpec) -> String {
    format!(
        "# grid={},{},{},{},{},{}",
        fmt(grid.p_min()),
        fmt(grid.p_max()),
        grid.n_p(),
        fmt(grid.q_min()),
        fmt(grid.q_max()),
        grid.n_q()
    )
}

fn parse_grid(spec: &str, line: usize) -> Result<GridSpec> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 6 {
        return Err(Error::Parse {
            line,
            msg: format!("grid header needs 6 fields, got {}", parts.len()),
        });
    }
    GridSpec::new(
        parse_f64(parts[0], line)?,
        parse_f64(parts[1], line)?,
        parse_usize(parts[2], line)?,
        parse_f64(parts[3], line)?,
        parse_f64(parts[4], line)?,
        parse_usize(parts[5], line)?,
    )
}

pub fn write_wigner<W: Write>(out: &mut W, field: &WignerField) -> Result<()> {
    writeln!(out, "# hbar={}", fmt(field.hbar()))?;
    writeln!(out, "{}", grid_header(field.grid()))?;
    writeln!(out, "# kind=wigner")?;
    for row in field.values().rows() {
        let cells: Vec<String> = row.iter().map(|v| fmt(*v)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn save_wigner<P: AsRef<Path>>(path: P, field: &WignerField) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_wigner(&mut out, field)
}

struct Headers {
    hbar: Option<f64>,
    grid: Option<GridSpec>,
    kind: Option<String>,
    source: Option<(GridSpec, usize)>,
    body_start: usize,
    body: Vec<String>,
}

fn read_headers<R: Read>(input: R) -> Result<Headers> {
    let reader = BufReader::new(input);
    let mut h = Headers {
        hbar: None,
        grid: None,
        kind: None,
        source: None,
        body_start: 0,
        body: Vec::new(),
    };
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let n = idx + 1;
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("hbar=") {
                h.hbar = Some(parse_f64(v, n)?);
            } else if let Some(v) = rest.strip_prefix("grid=") {
                h.grid = Some(parse_grid(v, n)?);
            } else if let Some(v) = rest.strip_prefix("kind=") {
                h.kind = Some(v.trim().to_string());
            } else if let Some(v) = rest.strip_prefix("source-grid=") {
                let parts: Vec<&str> = v.split(',').collect();
                if parts.len() != 7 {
                    return Err(Error::Parse {
                        line: n,
                        msg: "source-grid header needs 7 fields".into(),
                    });
                }
                let grid = parse_grid(&parts[..6].join(","), n)?;
                let pad = parse_usize(parts[6], n)?;
                h.source = Some((grid, pad));
            }
        } else if !line.trim().is_empty() {
            if h.body.is_empty() {
                h.body_start = n;
            }
            h.body.push(line);
        }
    }
    Ok(h)
}

pub fn read_wigner<R: Read>(input: R) -> Result<WignerField> {
    let h = read_headers(input)?;
    let kind = h.kind.as_deref().unwrap_or("");
    if kind != "wigner" {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected kind=wigner, got {kind:?}"),
        });
    }
    let grid = h.grid.ok_or(Error::Parse {
        line: 0,
        msg: "missing grid header".into(),
    })?;
    let hbar = h.hbar.ok_or(Error::Parse {
        line: 0,
        msg: "missing hbar header".into(),
    })?;
    if h.body.len() != grid.n_p() {
        return Err(Error::Parse {
            line: h.body_start,
            msg: format!("expected {} rows, found {}", grid.n_p(), h.body.len()),
        });
    }
    let mut values = Array2::<f64>::zeros((grid.n_p(), grid.n_q()));
    for (i, row) in h.body.iter().enumerate() {
        let line = h.body_start + i;
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != grid.n_q() {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} columns, found {}", grid.n_q(), cells.len()),
            });
        }
        for (j, cell) in cells.iter().enumerate() {
            values[(i, j)] = parse_f64(cell, line)?;
        }
    }
    WignerField::new(grid, hbar, values)
}

pub fn load_wigner<P: AsRef<Path>>(path: P) -> Result<WignerField> {
    read_wigner(File::open(path)?)
}

pub fn write_chord<W: Write>(out: &mut W, field: &ChordField) -> Result<()> {
    writeln!(out, "# hbar={}", fmt(field.hbar()))?;
    writeln!(out, "{}", grid_header(field.grid()))?;
    writeln!(out, "# kind=chord")?;
    let src = field.source_grid();
    writeln!(
        out,
        "# source-grid={},{},{},{},{},{},{}",
        fmt(src.p_min()),
        fmt(src.p_max()),
        src.n_p(),
        fmt(src.q_min()),
        fmt(src.q_max()),
        src.n_q(),
        field.pad_factor()
    )?;
    for row in field.values().rows() {
        let cells: Vec<String> = row
            .iter()
            .flat_map(|z| [fmt(z.re), fmt(z.im)])
            .collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn read_chord<R: Read>(input: R) -> Result<ChordField> {
    let h = read_headers(input)?;
    if h.kind.as_deref() != Some("chord") {
        return Err(Error::Parse {
            line: 0,
            msg: "expected kind=chord".into(),
        });
    }
    let grid = h.grid.ok_or(Error::Parse {
        line: 0,
        msg: "missing grid header".into(),
    })?;
    let hbar = h.hbar.ok_or(Error::Parse {
        line: 0,
        msg: "missing hbar header".into(),
    })?;
    let (source, pad) = h.source.ok_or(Error::Parse {
        line: 0,
        msg: "missing source-grid header".into(),
    })?;
    if h.body.len() != grid.n_p() {
        return Err(Error::Parse {
            line: h.body_start,
            msg: format!("expected {} rows, found {}", grid.n_p(), h.body.len()),
        });
    }
    let mut values = Array2::<Complex64>::zeros((grid.n_p(), grid.n_q()));
    for (i, row) in h.body.iter().enumerate() {
        let line = h.body_start + i;
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 2 * grid.n_q() {
            return Err(Error::Parse {
                line,
                msg: format!(
                    "expected {} re,im cells, found {}",
                    2 * grid.n_q(),
                    cells.len()
                ),
            });
        }
        for j in 0..grid.n_q() {
            values[(i, j)] = Complex64::new(
                parse_f64(cells[2 * j], line)?,
                parse_f64(cells[2 * j + 1], line)?,
            );
        }
    }
    ChordField::new(grid, hbar, values, source, pad)
}

pub fn write_density<W: Write>(out: &mut W, rho: &DensityMatrix) -> Result<()> {
    writeln!(out, "# dim={}, hbar={}", rho.dim(), fmt(rho.hbar()))?;
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            let z = rho.matrix()[(i, j)];
            writeln!(out, "{i},{j},{},{}", fmt(z.re), fmt(z.im))?;
        }
    }
    Ok(())
}

pub fn read_density<R: Read>(input: R) -> Result<DensityMatrix> {
    let reader = BufReader::new(input);
    let mut dim: Option<usize> = None;
    let mut hbar: Option<f64> = None;
    let mut mat: Option<nalgebra::DMatrix<Complex64>> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let n = idx + 1;
        if let Some(rest) = line.strip_prefix('#') {
            for part in rest.split(',') {
                let part = part.trim();
                if let Some(v) = part.strip_prefix("dim=") {
                    dim = Some(parse_usize(v, n)?);
                } else if let Some(v) = part.strip_prefix("hbar=") {
                    hbar = Some(parse_f64(v, n)?);
                }
            }
            if let Some(d) = dim {
                mat.get_or_insert_with(|| nalgebra::DMatrix::zeros(d, d));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 4 {
            return Err(Error::Parse {
                line: n,
                msg: "expected row,col,re,im".into(),
            });
        }
        let m = mat.as_mut().ok_or(Error::Parse {
            line: n,
            msg: "entries before the dim header".into(),
        })?;
        let i = parse_usize(cells[0], n)?;
        let j = parse_usize(cells[1], n)?;
        if i >= m.nrows() || j >= m.ncols() {
            return Err(Error::Parse {
                line: n,
                msg: format!("index ({i},{j}) outside dim {}", m.nrows()),
            });
        }
        m[(i, j)] = Complex64::new(parse_f64(cells[2], n)?, parse_f64(cells[3], n)?);
    }
    let mat = mat.ok_or(Error::Parse {
        line: 0,
        msg: "missing dim header".into(),
    })?;
    let hbar = hbar.ok_or(Error::Parse {
        line: 0,
        msg: "missing hbar header".into(),
    })?;
    DensityMatrix::from_matrix(mat, hbar)
}

pub fn write_record<W: Write>(out: &mut W, record: &MeasurementRecord) -> Result<()> {
    writeln!(
        out,
        "{},{},{},{},{}",
        fmt(record.x_center.p),
        fmt(record.x_center.q),
        record.n_plus,
        record.n_minus,
        record.seed
    )?;
    Ok(())
}

pub fn read_record<R: Read>(input: R) -> Result<MeasurementRecord> {
    let reader = BufReader::new(input);
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let n = idx + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 5 {
            return Err(Error::Parse {
                line: n,
                msg: "expected X_p,X_q,n_plus,n_minus,seed".into(),
            });
        }
        return Ok(MeasurementRecord {
            x_center: PhasePoint::new(parse_f64(cells[0], n)?, parse_f64(cells[1], n)?),
            n_plus: cells[2].trim().parse().map_err(|e| Error::Parse {
                line: n,
                msg: format!("bad count: {e}"),
            })?,
            n_minus: cells[3].trim().parse().map_err(|e| Error::Parse {
                line: n,
                msg: format!("bad count: {e}"),
            })?,
            seed: cells[4].trim().parse().map_err(|e| Error::Parse {
                line: n,
                msg: format!("bad seed: {e}"),
            })?,
        });
    }
    Err(Error::Parse {
        line: 0,
        msg: "empty record file".into(),
    })
}

pub fn write_threshold_report<W: Write>(out: &mut W, report: &ThresholdReport) -> Result<()> {
    writeln!(out, "# kind=threshold-report")?;
    writeln!(out, "# epsilon={}", fmt(report.epsilon))?;
    writeln!(out, "# t_star={}", fmt(report.t_star))?;
    for (t, min_w) in &report.min_trace {
        writeln!(out, "{},{}", fmt(*t), fmt(*min_w))?;
    }
    Ok(())
}

pub fn read_threshold_report<R: Read>(input: R) -> Result<ThresholdReport> {
    let reader = BufReader::new(input);
    let mut epsilon = None;
    let mut t_star = None;
    let mut trace = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let n = idx + 1;
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("epsilon=") {
                epsilon = Some(parse_f64(v, n)?);
            } else if let Some(v) = rest.strip_prefix("t_star=") {
                t_star = Some(parse_f64(v, n)?);
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 2 {
            return Err(Error::Parse {
                line: n,
                msg: "expected t,min_w".into(),
            });
        }
        trace.push((parse_f64(cells[0], n)?, parse_f64(cells[1], n)?));
    }
    Ok(ThresholdReport {
        t_star: t_star.ok_or(Error::Parse {
            line: 0,
            msg: "missing t_star header".into(),
        })?,
        min_trace: trace,
        epsilon: epsilon.ok_or(Error::Parse {
            line: 0,
            msg: "missing epsilon header".into(),
        })?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{cat_density, DensityMatrix as Rho};
    use crate::states::{coherent_wigner, rasterize, Displacement, Parity};
    use crate::transform::wigner_to_chord;
    use proptest::prelude::*;

    const HBAR: f64 = 0.1;

    fn sample_field() -> WignerField {
        let grid = GridSpec::centered_square(2.0, 16).unwrap();
        rasterize(&grid, HBAR, |x| {
            coherent_wigner(Displacement::new(0.2, -0.3), HBAR, x)
        })
        .unwrap()
    }

    #[test]
    fn wigner_roundtrip_is_bit_exact() {
        let field = sample_field();
        let mut buf = Vec::new();
        write_wigner(&mut buf, &field).unwrap();
        let back = read_wigner(buf.as_slice()).unwrap();
        assert_eq!(field.grid(), back.grid());
        assert_eq!(field.hbar(), back.hbar());
        for (a, b) in field.values().iter().zip(back.values().iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn chord_roundtrip_is_bit_exact() {
        let chord = wigner_to_chord(&sample_field(), 2).unwrap();
        let mut buf = Vec::new();
        write_chord(&mut buf, &chord).unwrap();
        let back = read_chord(buf.as_slice()).unwrap();
        assert_eq!(chord.grid(), back.grid());
        assert_eq!(chord.source_grid(), back.source_grid());
        for (a, b) in chord.values().iter().zip(back.values().iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn density_roundtrip() {
        let rho = cat_density(Displacement::new(0.0, 0.8), Parity::Odd, 40, HBAR).unwrap();
        let mut buf = Vec::new();
        write_density(&mut buf, &rho).unwrap();
        let back: Rho = read_density(buf.as_slice()).unwrap();
        assert_eq!(rho.dim(), back.dim());
        for (a, b) in rho.matrix().iter().zip(back.matrix().iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn record_roundtrip() {
        let record = MeasurementRecord {
            x_center: PhasePoint::new(0.3, -0.2),
            n_plus: 712,
            n_minus: 288,
            seed: 99,
        };
        let mut buf = Vec::new();
        write_record(&mut buf, &record).unwrap();
        assert_eq!(read_record(buf.as_slice()).unwrap(), record);
    }

    #[test]
    fn threshold_report_roundtrip() {
        let report = ThresholdReport {
            t_star: 0.5,
            min_trace: vec![(0.0, -3.1), (0.25, -0.4), (0.5, 0.0)],
            epsilon: 1e-6,
        };
        let mut buf = Vec::new();
        write_threshold_report(&mut buf, &report).unwrap();
        let back = read_threshold_report(buf.as_slice()).unwrap();
        assert_eq!(back.t_star, report.t_star);
        assert_eq!(back.min_trace, report.min_trace);
    }

    #[test]
    fn malformed_headers_are_rejected() {
        assert!(matches!(
            read_wigner("# kind=wigner\n1.0,2.0\n".as_bytes()),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            read_wigner("# hbar=0.1\n# grid=0,1,8,0,1,8\n# kind=chord\n".as_bytes()),
            Err(Error::Parse { .. })
        ));
    }

    proptest! {
        #[test]
        fn float_formatting_roundtrips_bits(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            let parsed: f64 = fmt(v).parse().unwrap();
            prop_assert_eq!(parsed.to_bits(), v.to_bits());
        }
    }
}
