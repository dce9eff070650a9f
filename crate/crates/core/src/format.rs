//! Line-oriented text format for five-vectors, tensors, transforms and
//! sampled fields.
//!
//! ```text
//! kind m-field
//! basis P
//! kappa 1.0000000000000000e0
//! counts 3 3 1 1
//! origin 0.0000000000000000e0 ...
//! spacing 5.0000000000000000e-1 ...
//! labels 0 1 2 3 5
//! data
//! <one sample per line>
//! ```
//!
//! Values are row-major with the label-5 slot last. Every value is written
//! with 17 significant digits, so parsing an emitted file is bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{Matrix4, Matrix5, Vector4, Vector5};

use crate::grid::{BasisFlag, Grid};
use crate::pentaspace::Bivector5;
use crate::poincare::PoincareTransform;
use crate::stress_energy::{MTensorField, SigmaField, ThetaField};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    FiveVector,
    FiveForm,
    Bivector,
    Basis,
    Transform,
    TTensor,
    RTensor,
    MField,
    ThetaField,
    SigmaField,
    /// Four simple bivectors, 4×25 values.
    FourBasis,
    /// A five-vector basis (25 values) followed by four four-vectors
    /// against its associated four-basis (16 values).
    FourBasisComponents,
}

const KINDS: [(Kind, &str, usize); 12] = [
    (Kind::FiveVector, "five-vector", 5),
    (Kind::FiveForm, "five-form", 5),
    (Kind::Bivector, "bivector", 25),
    (Kind::Basis, "basis", 25),
    (Kind::Transform, "transform", 20),
    (Kind::TTensor, "t-tensor", 25),
    (Kind::RTensor, "r-tensor", 25),
    (Kind::MField, "m-field", 100),
    (Kind::ThetaField, "theta-field", 16),
    (Kind::SigmaField, "sigma-field", 64),
    (Kind::FourBasis, "four-basis", 100),
    (Kind::FourBasisComponents, "four-basis-components", 41),
];

impl Kind {
    pub fn as_str(self) -> &'static str {
        KINDS.iter().find(|k| k.0 == self).map(|k| k.1).expect("every kind is listed")
    }

    /// Values per sample.
    pub fn ncomp(self) -> usize {
        KINDS.iter().find(|k| k.0 == self).map(|k| k.2).expect("every kind is listed")
    }

    pub fn parse(s: &str) -> Option<Kind> {
        KINDS.iter().find(|k| k.1 == s).map(|k| k.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub kind: Kind,
    pub basis: BasisFlag,
    pub kappa: f64,
    pub grid: Grid,
    pub data: Vec<f64>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |t| (t.as_ptr() as usize - line.as_ptr() as usize + 1, t))
}

fn parse_f64(tok: &str, line: usize, col: usize) -> Result<f64> {
    tok.parse::<f64>().map_err(|_| parse_err(line, col, format!("expected a number, found `{tok}`")))
}

fn parse_reals<const N: usize>(rest: &[(usize, &str)], line: usize) -> Result<[f64; N]> {
    if rest.len() != N {
        let col = rest.get(N).or(rest.last()).map_or(1, |t| t.0);
        return Err(parse_err(line, col, format!("expected {N} values, found {}", rest.len())));
    }
    let mut out = [0.0; N];
    for (i, (col, tok)) in rest.iter().enumerate() {
        out[i] = parse_f64(tok, line, *col)?;
        if !out[i].is_finite() {
            return Err(parse_err(line, *col, "non-finite header value"));
        }
    }
    Ok(out)
}

pub fn parse(text: &str) -> Result<Document> {
    let mut kind = None;
    let mut basis = BasisFlag::O;
    let mut kappa = 1.0;
    let mut counts = None;
    let mut origin = [0.0; 4];
    let mut spacing = [1.0; 4];
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut data_line = None;
    for (ln, line) in lines.by_ref() {
        let toks: Vec<_> = tokens(line).collect();
        let Some(&(col, key)) = toks.first() else { continue };
        if key.starts_with('#') {
            continue;
        }
        let rest = &toks[1..];
        match key {
            "kind" => {
                let (c, v) = rest.first().ok_or_else(|| parse_err(ln, col, "missing kind"))?;
                kind = Some(Kind::parse(v).ok_or_else(|| parse_err(ln, *c, format!("unknown kind `{v}`")))?);
            }
            "basis" => {
                let (c, v) = rest.first().ok_or_else(|| parse_err(ln, col, "missing basis"))?;
                basis = BasisFlag::parse(v).ok_or_else(|| parse_err(ln, *c, format!("unknown basis `{v}`")))?;
            }
            "kappa" => kappa = parse_reals::<1>(rest, ln)?[0],
            "counts" => {
                let mut c = [0usize; 4];
                if rest.len() != 4 {
                    return Err(parse_err(ln, col, "counts needs 4 values"));
                }
                for (i, (cc, t)) in rest.iter().enumerate() {
                    c[i] = t.parse().map_err(|_| parse_err(ln, *cc, format!("bad count `{t}`")))?;
                }
                counts = Some(c);
            }
            "origin" => origin = parse_reals::<4>(rest, ln)?,
            "spacing" => spacing = parse_reals::<4>(rest, ln)?,
            "labels" => {
                let labels: Vec<&str> = rest.iter().map(|t| t.1).collect();
                if labels != ["0", "1", "2", "3", "5"] {
                    return Err(parse_err(ln, col, "labels must read `0 1 2 3 5`"));
                }
            }
            "data" => {
                data_line = Some(ln);
                break;
            }
            other => return Err(parse_err(ln, col, format!("unknown header key `{other}`"))),
        }
    }
    let data_ln = data_line.ok_or_else(|| parse_err(text.lines().count().max(1), 1, "missing `data` line"))?;
    let kind = kind.ok_or_else(|| parse_err(data_ln, 1, "missing `kind` header"))?;
    let counts = counts.unwrap_or([1; 4]);
    let grid = Grid::new(origin, spacing, counts).map_err(|e| parse_err(data_ln, 1, e.to_string()))?;
    let ncomp = kind.ncomp();
    let mut data = Vec::with_capacity(grid.len() * ncomp);
    let mut last_ln = data_ln;
    for (ln, line) in lines {
        last_ln = ln;
        for (col, tok) in tokens(line) {
            if tok.starts_with('#') {
                break;
            }
            let v = parse_f64(tok, ln, col)?;
            if !v.is_finite() {
                let index = data.len();
                return Err(parse_err(
                    ln,
                    col,
                    format!("non-finite value in sample {} (component {})", index / ncomp, index % ncomp),
                ));
            }
            data.push(v);
        }
    }
    let expected = grid.len() * ncomp;
    if data.len() != expected {
        return Err(parse_err(
            last_ln,
            1,
            format!("expected {expected} values ({} samples of {ncomp}), found {}", grid.len(), data.len()),
        ));
    }
    Ok(Document { kind, basis, kappa, grid, data })
}

fn push_reals(out: &mut String, key: &str, vals: &[f64]) {
    out.push_str(key);
    for v in vals {
        let _ = write!(out, " {v:.16e}");
    }
    out.push('\n');
}

pub fn emit(doc: &Document) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind {}", doc.kind.as_str());
    let _ = writeln!(out, "basis {}", doc.basis.as_str());
    push_reals(&mut out, "kappa", &[doc.kappa]);
    let c = doc.grid.counts;
    let _ = writeln!(out, "counts {} {} {} {}", c[0], c[1], c[2], c[3]);
    push_reals(&mut out, "origin", &doc.grid.origin);
    push_reals(&mut out, "spacing", &doc.grid.spacing);
    out.push_str("labels 0 1 2 3 5\ndata\n");
    let n = doc.kind.ncomp();
    for sample in doc.data.chunks(n) {
        let line: Vec<String> = sample.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_file(path: &Path) -> Result<Document> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn write_file(path: &Path, doc: &Document) -> Result<()> {
    std::fs::write(path, emit(doc))?;
    Ok(())
}

fn row_major5(m: &Matrix5<f64>) -> impl Iterator<Item = f64> + '_ {
    (0..5).flat_map(move |r| (0..5).map(move |c| m[(r, c)]))
}

fn row_major4(m: &Matrix4<f64>) -> impl Iterator<Item = f64> + '_ {
    (0..4).flat_map(move |r| (0..4).map(move |c| m[(r, c)]))
}

impl Document {
    pub fn new(kind: Kind, basis: BasisFlag, kappa: f64, grid: Grid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() * kind.ncomp() {
            return Err(Error::GridMismatch);
        }
        Ok(Document { kind, basis, kappa, grid, data })
    }

    pub fn expect_kind(&self, kind: Kind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::KindMismatch { expected: kind.as_str().into(), found: self.kind.as_str().into() })
        }
    }

    pub fn samples(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.kind.ncomp())
    }

    pub fn single(kind: Kind, basis: BasisFlag, kappa: f64, data: Vec<f64>) -> Result<Self> {
        Document::new(kind, basis, kappa, Grid::point([0.0; 4]), data)
    }

    pub fn from_vectors(kind: Kind, basis: BasisFlag, kappa: f64, grid: Grid, v: &[Vector5<f64>]) -> Result<Self> {
        Document::new(kind, basis, kappa, grid, v.iter().flat_map(|x| x.iter().copied()).collect())
    }

    /// Per-sample five-vector or five-form components.
    pub fn vectors(&self) -> Result<Vec<Vector5<f64>>> {
        if !matches!(self.kind, Kind::FiveVector | Kind::FiveForm) {
            return Err(Error::KindMismatch { expected: "five-vector".into(), found: self.kind.as_str().into() });
        }
        Ok(self.samples().map(Vector5::from_column_slice).collect())
    }

    pub fn from_matrices(kind: Kind, basis: BasisFlag, kappa: f64, grid: Grid, m: &[Matrix5<f64>]) -> Result<Self> {
        Document::new(kind, basis, kappa, grid, m.iter().flat_map(|x| row_major5(x).collect::<Vec<_>>()).collect())
    }

    /// Per-sample `5×5` matrices for the bivector, basis and parameter-tensor kinds.
    pub fn matrices(&self) -> Result<Vec<Matrix5<f64>>> {
        if self.kind.ncomp() != 25 {
            return Err(Error::KindMismatch { expected: "5x5 kind".into(), found: self.kind.as_str().into() });
        }
        Ok(self.samples().map(Matrix5::from_row_slice).collect())
    }

    pub fn from_transform(t: &PoincareTransform) -> Self {
        let mut data: Vec<f64> = row_major4(t.lambda()).collect();
        data.extend(t.offset().iter());
        Document { kind: Kind::Transform, basis: BasisFlag::O, kappa: 1.0, grid: Grid::point([0.0; 4]), data }
    }

    pub fn transform(&self) -> Result<PoincareTransform> {
        self.expect_kind(Kind::Transform)?;
        if self.grid.len() != 1 {
            return Err(Error::GridMismatch);
        }
        let lambda = Matrix4::from_row_slice(&self.data[..16]);
        PoincareTransform::new(lambda, Vector4::from_column_slice(&self.data[16..20]))
    }

    pub fn from_m_field(m: &MTensorField) -> Self {
        let data = m.values.iter().flat_map(|v| v.iter().flat_map(|x| row_major5(x).collect::<Vec<_>>())).collect();
        Document { kind: Kind::MField, basis: m.basis, kappa: m.kappa, grid: m.grid, data }
    }

    pub fn m_field(&self) -> Result<MTensorField> {
        self.expect_kind(Kind::MField)?;
        let values = self
            .samples()
            .map(|s| std::array::from_fn(|mu| Matrix5::from_row_slice(&s[mu * 25..(mu + 1) * 25])))
            .collect();
        MTensorField::new(self.grid, self.basis, self.kappa, values)
    }

    pub fn from_theta(t: &ThetaField) -> Self {
        let data = t.values.iter().flat_map(|m| row_major4(m).collect::<Vec<_>>()).collect();
        Document { kind: Kind::ThetaField, basis: BasisFlag::P, kappa: 1.0, grid: t.grid, data }
    }

    pub fn theta(&self) -> Result<ThetaField> {
        self.expect_kind(Kind::ThetaField)?;
        ThetaField::new(self.grid, self.samples().map(Matrix4::from_row_slice).collect())
    }

    pub fn from_sigma(s: &SigmaField) -> Self {
        let data = s.values.iter().flat_map(|v| v.iter().flat_map(|m| row_major4(m).collect::<Vec<_>>())).collect();
        Document { kind: Kind::SigmaField, basis: BasisFlag::P, kappa: 1.0, grid: s.grid, data }
    }

    pub fn sigma(&self) -> Result<SigmaField> {
        self.expect_kind(Kind::SigmaField)?;
        let values = self
            .samples()
            .map(|s| std::array::from_fn(|mu| Matrix4::from_row_slice(&s[mu * 16..(mu + 1) * 16])))
            .collect();
        SigmaField::new(self.grid, values)
    }

    pub fn from_four_basis(e: &[Bivector5; 4]) -> Self {
        let data = e.iter().flat_map(|b| row_major5(b.matrix()).collect::<Vec<_>>()).collect();
        Document { kind: Kind::FourBasis, basis: BasisFlag::O, kappa: 1.0, grid: Grid::point([0.0; 4]), data }
    }

    /// The four bivectors of a `four-basis` file, or those built from a
    /// `four-basis-components` file.
    pub fn four_basis(&self) -> Result<[Bivector5; 4]> {
        if self.grid.len() != 1 {
            return Err(Error::GridMismatch);
        }
        match self.kind {
            Kind::FourBasis => {
                let mut out = [Bivector5::zero(); 4];
                for (mu, o) in out.iter_mut().enumerate() {
                    *o = Bivector5::new(Matrix5::from_row_slice(&self.data[mu * 25..(mu + 1) * 25]))?;
                }
                Ok(out)
            }
            Kind::FourBasisComponents => {
                let basis = crate::bases::Basis5::new(Matrix5::from_row_slice(&self.data[..25]))?;
                let assoc = basis.associated();
                Ok(std::array::from_fn(|mu| {
                    let u = &self.data[25 + mu * 4..25 + (mu + 1) * 4];
                    (0..4).fold(Bivector5::zero(), |acc, nu| acc + assoc[nu].scaled(u[nu]))
                }))
            }
            _ => Err(Error::KindMismatch { expected: "four-basis".into(), found: self.kind.as_str().into() }),
        }
    }
}
