use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use blowup_core::solver::Sample;
use serde::Serialize;

pub const SERIES_HEADER: &str = "t,Q,energy,mass,poisson_res,max_grad_u,max_grad_p,dod_dev,breakdown";

pub fn write_series_csv<W: Write>(mut w: W, samples: &[Sample]) -> io::Result<()> {
    writeln!(w, "{SERIES_HEADER}")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            s.t,
            s.q,
            s.energy,
            s.mass,
            s.poisson_res,
            s.max_grad_u,
            s.max_grad_p,
            s.dod_dev,
            u8::from(s.breakdown)
        )?;
    }
    Ok(())
}

/// Final radial profile; the field column only for the plasma.
#[derive(Debug, Clone, Default)]
pub struct Profile {
    pub r: Vec<f64>,
    pub n: Vec<f64>,
    pub s: Vec<f64>,
    pub u: Vec<f64>,
    pub e_field: Option<Vec<f64>>,
}

pub fn write_profile_csv<W: Write>(mut w: W, p: &Profile) -> io::Result<()> {
    match &p.e_field {
        Some(e) => {
            writeln!(w, "r,n,s,u,E")?;
            for j in 0..p.r.len() {
                writeln!(w, "{},{},{},{},{}", p.r[j], p.n[j], p.s[j], p.u[j], e[j])?;
            }
        }
        None => {
            writeln!(w, "r,n,s,u")?;
            for j in 0..p.r.len() {
                writeln!(w, "{},{},{},{}", p.r[j], p.n[j], p.s[j], p.u[j])?;
            }
        }
    }
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut w = BufWriter::new(File::create(path)?);
    contents(&mut w)?;
    w.flush()
}
