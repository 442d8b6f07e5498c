//! Plain-text inputs.
//!
//! Operator file (`key = value`, `#` comments):
//!
//! ```text
//! e0_norm = euclidean            # or: sup | weighted_sup 1, 2, 4
//! matrix = laplacian1d n=64      # or: diag -1, -2+i | jordan lambda=-1 size=4
//!                                #     random_normal dim=16 seed=7
//! structure = tridiagonal        # optional: dense | diagonal | tridiagonal
//! ```
//!
//! Instead of `matrix`, a dense matrix may be given as repeated
//! `row = a, b, c` lines. An optional `dim = n` is checked.
//!
//! Probe file, one probe per line:
//!
//! ```text
//! exp mu=1+2i y=1,0,0      # f(t) = e^{-mu t} y
//! poly coeffs=1,-0.5 y=... # f(t) = (1 - 0.5 t) y
//! ic x=1,1,1               # f = 0, u(0) = x
//! ```
//!
//! `exp` and `poly` lines accept `x=` for the initial value (default 0);
//! `y` defaults to the all-ones vector.

use std::str::FromStr;

use nalgebra::DMatrix;
use semilab_core::cauchy::Probe;
use semilab_core::scalar::{re, ZERO};
use semilab_core::{E0Norm, Forcing, OperatorPair, Structure, C64};

use crate::error::LabError;
use crate::fixtures;

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (also with `j`).
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t = s.trim();
    let bad = || format!("invalid complex number `{s}`");
    if t.is_empty() {
        return Err(bad());
    }
    let real = |v: &str| f64::from_str(v).map_err(|_| bad());
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok(re(real(t)?));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |v: &str| match v {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        v => real(v),
    };
    match split {
        Some(k) => Ok(C64::new(real(&body[..k])?, imag(&body[k..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

/// Comma- or whitespace-separated complex numbers.
pub fn parse_list(s: &str) -> Result<Vec<C64>, String> {
    let parts: Vec<&str> = if s.contains(',') { s.split(',').collect() } else { s.split_whitespace().collect() };
    parts.into_iter().map(parse_complex).collect()
}

pub fn parse_real_list(s: &str) -> Result<Vec<f64>, String> {
    parse_list(s)?
        .into_iter()
        .map(|c| if c.im == 0.0 { Ok(c.re) } else { Err(format!("expected real numbers in `{s}`")) })
        .collect()
}

/// Either `re_min:re_max:n_re:im_min:im_max:n_im` (logarithmic in the
/// real part when `re_min > 0`, linear otherwise; linear in the imaginary
/// part) or a comma-separated list of complex numbers.
pub fn parse_mu_grid(s: &str) -> Result<Vec<C64>, String> {
    if !s.contains(':') {
        let v = parse_list(s)?;
        if v.is_empty() {
            return Err("empty mu grid".into());
        }
        return Ok(v);
    }
    let f: Vec<&str> = s.split(':').collect();
    if f.len() != 6 {
        return Err(format!("mu grid `{s}` needs six fields re_min:re_max:n_re:im_min:im_max:n_im"));
    }
    let num = |v: &str| f64::from_str(v.trim()).map_err(|_| format!("invalid number `{v}` in mu grid"));
    let count = |v: &str| match usize::from_str(v.trim()) {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("invalid count `{v}` in mu grid")),
    };
    let (r0, r1, nr, i0, i1, ni) = (num(f[0])?, num(f[1])?, count(f[2])?, num(f[3])?, num(f[4])?, count(f[5])?);
    if r1 < r0 || i1 < i0 {
        return Err("mu grid ranges must be increasing".into());
    }
    let frac = |k: usize, n: usize| if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
    let mut out = Vec::with_capacity(nr * ni);
    for a in 0..nr {
        let r = if r0 > 0.0 { r0 * (r1 / r0).powf(frac(a, nr)) } else { r0 + (r1 - r0) * frac(a, nr) };
        for b in 0..ni {
            out.push(C64::new(r, i0 + (i1 - i0) * frac(b, ni)));
        }
    }
    Ok(out)
}

/// `key = value` lines with their line numbers; blank lines and `#`
/// comments are skipped.
pub fn key_values(text: &str, path: &str) -> Result<Vec<(usize, String, String)>, LabError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(LabError::Parse { path: path.into(), line: i + 1, msg: format!("expected `key = value`, got `{line}`") });
        };
        out.push((i + 1, k.trim().to_ascii_lowercase(), v.trim().to_string()));
    }
    Ok(out)
}

/// `name=value` arguments after a leading word.
fn named_args(s: &str) -> Result<(String, Vec<(String, String)>), String> {
    let mut it = s.split_whitespace();
    let head = it.next().ok_or("missing generator name")?.to_ascii_lowercase();
    let rest = it.collect::<Vec<_>>();
    let mut args = Vec::new();
    for tok in &rest {
        let (k, v) = tok.split_once('=').ok_or_else(|| format!("expected `name=value`, got `{tok}`"))?;
        args.push((k.to_ascii_lowercase(), v.to_string()));
    }
    Ok((head, args))
}

fn arg<'a>(args: &'a [(String, String)], name: &str) -> Result<&'a str, String> {
    args.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str()).ok_or_else(|| format!("missing `{name}=`"))
}

fn arg_usize(args: &[(String, String)], name: &str) -> Result<usize, String> {
    arg(args, name)?.parse().map_err(|_| format!("`{name}` must be a nonnegative integer"))
}

fn parse_e0(v: &str) -> Result<E0Norm, String> {
    let mut it = v.splitn(2, char::is_whitespace);
    match it.next().unwrap_or("").to_ascii_lowercase().as_str() {
        "euclidean" => Ok(E0Norm::Euclidean),
        "sup" => Ok(E0Norm::Sup),
        "weighted_sup" => Ok(E0Norm::WeightedSup(parse_real_list(it.next().unwrap_or(""))?)),
        other => Err(format!("unknown e0_norm `{other}`")),
    }
}

fn parse_structure(v: &str) -> Result<Structure, String> {
    match v.to_ascii_lowercase().as_str() {
        "dense" => Ok(Structure::Dense),
        "diagonal" => Ok(Structure::Diagonal),
        "tridiagonal" => Ok(Structure::Tridiagonal),
        other => Err(format!("unknown structure `{other}`")),
    }
}

/// Builds the matrix of a generator line and its natural structure.
fn generator(v: &str) -> Result<(DMatrix<C64>, Structure), String> {
    let head = v.split_whitespace().next().unwrap_or("").to_ascii_lowercase();
    if head == "diag" {
        let d = parse_list(v[4..].trim())?;
        if d.is_empty() {
            return Err("`diag` needs at least one entry".into());
        }
        return Ok((DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)), Structure::Diagonal));
    }
    let (name, args) = named_args(v)?;
    let op = match name.as_str() {
        "laplacian1d" => OperatorPair::laplacian1d(arg_usize(&args, "n")?, E0Norm::Euclidean),
        "jordan" => OperatorPair::jordan(parse_complex(arg(&args, "lambda")?)?, arg_usize(&args, "size")?, E0Norm::Euclidean),
        "random_normal" => fixtures::random_normal(arg_usize(&args, "dim")?, arg_usize(&args, "seed")? as u64),
        other => return Err(format!("unknown matrix generator `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    Ok((op.matrix().clone(), op.structure()))
}

pub fn parse_operator(text: &str, path: &str) -> Result<OperatorPair, LabError> {
    let err = |line: usize, msg: String| LabError::Parse { path: path.into(), line, msg };
    let mut e0 = E0Norm::Euclidean;
    let mut structure = None;
    let mut dim = None;
    let mut generated = None;
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (line, key, value) in key_values(text, path)? {
        match key.as_str() {
            "e0_norm" => e0 = parse_e0(&value).map_err(|m| err(line, m))?,
            "structure" => structure = Some(parse_structure(&value).map_err(|m| err(line, m))?),
            "dim" => dim = Some((line, value.parse::<usize>().map_err(|_| err(line, "`dim` must be an integer".into()))?)),
            "matrix" => {
                if generated.is_some() {
                    return Err(err(line, "`matrix` given twice".into()));
                }
                generated = Some(generator(&value).map_err(|m| err(line, m))?);
            }
            "row" => rows.push(parse_list(&value).map_err(|m| err(line, m))?),
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
    }
    let (matrix, natural) = match (generated, rows.is_empty()) {
        (Some(_), false) => return Err(err(0, "use either `matrix` or `row` lines, not both".into())),
        (Some(g), true) => g,
        (None, false) => {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(err(0, format!("rows must form a square matrix ({n} rows)")));
            }
            (DMatrix::from_fn(n, n, |i, j| rows[i][j]), Structure::Dense)
        }
        (None, true) => return Err(err(0, "no matrix given".into())),
    };
    if let Some((line, d)) = dim {
        if d != matrix.nrows() {
            return Err(err(line, format!("dim = {d} but the matrix has dimension {}", matrix.nrows())));
        }
    }
    OperatorPair::new(matrix, e0, structure.unwrap_or(natural)).map_err(|e| err(0, e.to_string()))
}

pub fn parse_probes(text: &str, path: &str, n: usize) -> Result<Vec<Probe>, LabError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let probe = probe_line(line, n).map_err(|msg| LabError::Parse { path: path.into(), line: i + 1, msg })?;
        out.push(probe);
    }
    if out.is_empty() {
        return Err(LabError::Parse { path: path.into(), line: 0, msg: "no probes".into() });
    }
    Ok(out)
}

fn probe_line(line: &str, n: usize) -> Result<Probe, String> {
    let (kind, args) = named_args(line)?;
    let vector = |name: &str, default: C64| -> Result<Vec<C64>, String> {
        match args.iter().find(|(k, _)| k == name) {
            None => Ok(vec![default; n]),
            Some((_, v)) => {
                let x = parse_list(v)?;
                if x.len() != n {
                    return Err(format!("`{name}` has {} entries, expected {n}", x.len()));
                }
                Ok(x)
            }
        }
    };
    for (k, _) in &args {
        let known = match kind.as_str() {
            "exp" => ["mu", "y", "x"].contains(&k.as_str()),
            "poly" => ["coeffs", "y", "x"].contains(&k.as_str()),
            "ic" => k == "x",
            _ => true,
        };
        if !known {
            return Err(format!("unknown argument `{k}` for `{kind}`"));
        }
    }
    match kind.as_str() {
        "exp" => Ok(Probe::new(Forcing::exp(parse_complex(arg(&args, "mu")?)?, vector("y", re(1.0))?), vector("x", ZERO)?)),
        "poly" => {
            let coeffs = parse_list(arg(&args, "coeffs")?)?;
            Ok(Probe::new(Forcing::poly(coeffs, vector("y", re(1.0))?), vector("x", ZERO)?))
        }
        "ic" => {
            arg(&args, "x")?;
            Ok(Probe::new(Forcing::Zero, vector("x", ZERO)?))
        }
        other => Err(format!("unknown probe kind `{other}`")),
    }
}
