//! Finite-support complex vectors and the vector-space monad.
//!
//! A [`KleisliOp`] `A -> Vec B` is the column-wise description of a typed
//! complex matrix: the image of basis element `a` is column `a`.
//! [`materialize`] turns one into a dense [`CMatrix`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::label::{Label, LabelParseError};
use crate::relalg::FinBasis;

pub type Amp = Complex64;

/// Amplitudes with modulus below this are dropped from an [`AmpVec`].
pub const PRUNE_EPS: f64 = 1e-12;
/// Default tolerance for vector and matrix comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum VecError {
    #[error("label {label} is outside the basis {basis}")]
    StrayLabel { label: Label, basis: String },
    #[error("{op}: basis mismatch ({left} vs {right})")]
    BasisMismatch {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("matrix is {rows}x{cols}, not square")]
    NonSquare { rows: usize, cols: usize },
    #[error("non-finite amplitude at {0}")]
    NonFinite(Label),
    #[error("matrix dump line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Label(#[from] LabelParseError),
    #[error(transparent)]
    Rel(#[from] crate::relalg::RelError),
}

pub type Result<T> = std::result::Result<T, VecError>;

fn stray(label: &Label, basis: &FinBasis) -> VecError {
    VecError::StrayLabel {
        label: label.clone(),
        basis: basis.to_string(),
    }
}

pub(crate) fn mismatch(op: &'static str, a: &FinBasis, b: &FinBasis) -> VecError {
    VecError::BasisMismatch {
        op,
        left: a.to_string(),
        right: b.to_string(),
    }
}

/// A ket: a finite map from labels to amplitudes.
#[derive(Clone, Default, PartialEq)]
pub struct AmpVec {
    entries: BTreeMap<Label, Amp>,
}

impl AmpVec {
    pub fn zero() -> Self {
        AmpVec::default()
    }

    /// `|x⟩`.
    pub fn ret(x: Label) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(x, Amp::new(1.0, 0.0));
        AmpVec { entries }
    }

    /// Sums duplicate labels and prunes negligible entries.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, Amp)>) -> Self {
        let mut entries: BTreeMap<Label, Amp> = BTreeMap::new();
        for (l, a) in pairs {
            *entries.entry(l).or_default() += a;
        }
        let mut v = AmpVec { entries };
        v.prune();
        v
    }

    fn prune(&mut self) {
        self.entries.retain(|_, a| a.norm() >= PRUNE_EPS);
    }

    pub fn get(&self, l: &Label) -> Amp {
        self.entries.get(l).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Amp)> {
        self.entries.iter()
    }

    /// Number of nonzero entries.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.entries.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, k: Amp) -> AmpVec {
        AmpVec::from_pairs(self.entries.iter().map(|(l, a)| (l.clone(), a * k)))
    }

    pub fn add(&self, other: &AmpVec) -> AmpVec {
        AmpVec::from_pairs(
            self.entries
                .iter()
                .chain(other.entries.iter())
                .map(|(l, a)| (l.clone(), *a)),
        )
    }

    /// Sup-norm of the difference is at most `tol`.
    pub fn approx_eq(&self, other: &AmpVec, tol: f64) -> bool {
        let keys = self.entries.keys().chain(other.entries.keys());
        keys.into_iter()
            .all(|l| (self.get(l) - other.get(l)).norm() <= tol)
    }

    pub fn check_finite(&self) -> Result<()> {
        for (l, a) in &self.entries {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(VecError::NonFinite(l.clone()));
            }
        }
        Ok(())
    }

    /// One `label: amplitude` line per entry, in label order.
    pub fn dump(&self) -> String {
        self.entries
            .iter()
            .map(|(l, a)| format!("{l}: {}\n", fmt_amp(*a)))
            .collect()
    }
}

impl fmt::Debug for AmpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("AmpVec{")?;
        for (i, (l, a)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}: {}", fmt_amp(*a))?;
        }
        f.write_str("}")
    }
}

pub fn vec_equal(u: &AmpVec, v: &AmpVec, tol: f64) -> bool {
    u.approx_eq(v, tol)
}

type ApplyFn = dyn Fn(&Label) -> Result<AmpVec> + Send + Sync;

/// A typed operation `src -> Vec tgt`, given by its action on basis labels.
///
/// The apply function must be pure; materialization calls it from several
/// threads.
#[derive(Clone)]
pub struct KleisliOp {
    src: FinBasis,
    tgt: FinBasis,
    apply: Arc<ApplyFn>,
}

impl fmt::Debug for KleisliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KleisliOp {} -> {}", self.src, self.tgt)
    }
}

impl KleisliOp {
    pub fn new(
        src: &FinBasis,
        tgt: &FinBasis,
        apply: impl Fn(&Label) -> Result<AmpVec> + Send + Sync + 'static,
    ) -> Self {
        KleisliOp {
            src: src.clone(),
            tgt: tgt.clone(),
            apply: Arc::new(apply),
        }
    }

    pub fn src(&self) -> &FinBasis {
        &self.src
    }

    pub fn tgt(&self) -> &FinBasis {
        &self.tgt
    }

    pub fn apply(&self, a: &Label) -> Result<AmpVec> {
        if !self.src.contains(a) {
            return Err(stray(a, &self.src));
        }
        (self.apply)(a)
    }
}

/// The unit of the monad on `b`; materializes to the identity.
pub fn ret_op(b: &FinBasis) -> KleisliOp {
    KleisliOp::new(b, b, |a| Ok(AmpVec::ret(a.clone())))
}

/// Linear extension of `f` applied to `v`.
pub fn bind(v: &AmpVec, f: &KleisliOp) -> Result<AmpVec> {
    let mut acc: BTreeMap<Label, Amp> = BTreeMap::new();
    for (l, a) in v.iter() {
        for (m, b) in f.apply(l)?.iter() {
            *acc.entry(m.clone()).or_default() += a * b;
        }
    }
    Ok(AmpVec::from_pairs(acc))
}

/// `g • f`: first `f`, then `g`.
pub fn kleisli(g: &KleisliOp, f: &KleisliOp) -> Result<KleisliOp> {
    if f.tgt != g.src {
        return Err(mismatch("kleisli", &f.tgt, &g.src));
    }
    let (f, g) = (f.clone(), g.clone());
    Ok(KleisliOp::new(&f.src.clone(), &g.tgt.clone(), move |a| {
        bind(&f.apply(a)?, &g)
    }))
}

/// Chains operations left to right: `seq(&[f, g, h]) = h • g • f`.
pub fn seq(ops: &[&KleisliOp]) -> Result<KleisliOp> {
    let mut acc = ops[0].clone();
    for op in &ops[1..] {
        acc = kleisli(op, &acc)?;
    }
    Ok(acc)
}

/// `(f ⊗ g)(a,b) = do { x ← f a; y ← g b; ret (x,y) }`.
pub fn tensor(f: &KleisliOp, g: &KleisliOp) -> KleisliOp {
    let src = FinBasis::product(&f.src, &g.src);
    let tgt = FinBasis::product(&f.tgt, &g.tgt);
    let (f, g) = (f.clone(), g.clone());
    KleisliOp::new(&src, &tgt, move |ab| {
        let (a, b) = ab.as_pair().expect("product label");
        let x = f.apply(a)?;
        let y = g.apply(b)?;
        Ok(AmpVec::from_pairs(x.iter().flat_map(|(xl, xa)| {
            y.iter()
                .map(move |(yl, ya)| (Label::pair(xl.clone(), yl.clone()), xa * ya))
        })))
    })
}

/// `f ⊕ g` on coproduct bases.
pub fn direct_sum(f: &KleisliOp, g: &KleisliOp) -> KleisliOp {
    let src = FinBasis::coproduct(&f.src, &g.src);
    let tgt = FinBasis::coproduct(&f.tgt, &g.tgt);
    let (f, g) = (f.clone(), g.clone());
    KleisliOp::new(&src, &tgt, move |l| match l {
        Label::Inl(a) => Ok(AmpVec::from_pairs(
            f.apply(a)?.iter().map(|(x, k)| (Label::inl(x.clone()), *k)),
        )),
        Label::Inr(b) => Ok(AmpVec::from_pairs(
            g.apply(b)?.iter().map(|(x, k)| (Label::inr(x.clone()), *k)),
        )),
        _ => unreachable!("coproduct label"),
    })
}

/// Dense matrix with column `j` equal to `f(src[j])`.
pub fn materialize(f: &KleisliOp) -> Result<CMatrix> {
    let cols: Vec<AmpVec> = f
        .src
        .labels()
        .par_iter()
        .map(|a| f.apply(a))
        .collect::<Result<_>>()?;
    let mut m = CMatrix::zeros(&f.src, &f.tgt);
    for (j, col) in cols.iter().enumerate() {
        col.check_finite()?;
        for (l, a) in col.iter() {
            let i = f.tgt.index_of(l).ok_or_else(|| stray(l, &f.tgt))?;
            m.set(i, j, *a);
        }
    }
    Ok(m)
}

/// Typed dense complex matrix, rows indexed by `tgt`, columns by `src`.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    src: FinBasis,
    tgt: FinBasis,
    data: Vec<Amp>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

impl CMatrix {
    pub fn zeros(src: &FinBasis, tgt: &FinBasis) -> Self {
        CMatrix {
            src: src.clone(),
            tgt: tgt.clone(),
            data: vec![Amp::default(); src.len() * tgt.len()],
        }
    }

    pub fn identity(b: &FinBasis) -> Self {
        let mut m = CMatrix::zeros(b, b);
        for i in 0..b.len() {
            m.set(i, i, Amp::new(1.0, 0.0));
        }
        m
    }

    /// Real matrix from rows.
    pub fn from_real_rows(src: &FinBasis, tgt: &FinBasis, rows: &[Vec<f64>]) -> Self {
        assert_eq!(rows.len(), tgt.len(), "row count");
        let mut m = CMatrix::zeros(src, tgt);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), src.len(), "row width");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, Amp::new(x, 0.0));
            }
        }
        m
    }

    pub fn src(&self) -> &FinBasis {
        &self.src
    }

    pub fn tgt(&self) -> &FinBasis {
        &self.tgt
    }

    pub fn rows(&self) -> usize {
        self.tgt.len()
    }

    pub fn cols(&self) -> usize {
        self.src.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Amp {
        self.data[i * self.cols() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Amp) {
        let c = self.cols();
        self.data[i * c + j] = v;
    }

    /// The same entries under different (equal-sized) bases.
    pub fn relabel(&self, src: &FinBasis, tgt: &FinBasis) -> Self {
        assert_eq!(src.len(), self.cols());
        assert_eq!(tgt.len(), self.rows());
        CMatrix {
            src: src.clone(),
            tgt: tgt.clone(),
            data: self.data.clone(),
        }
    }

    /// `self · b`: apply `b` first.
    pub fn matmul(&self, b: &CMatrix) -> Result<CMatrix> {
        if b.tgt != self.src {
            return Err(mismatch("matmul", &b.tgt, &self.src));
        }
        let mut m = CMatrix::zeros(&b.src, &self.tgt);
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                let x = self.get(i, k);
                if x == Amp::default() {
                    continue;
                }
                for j in 0..b.cols() {
                    m.data[i * b.cols() + j] += x * b.get(k, j);
                }
            }
        }
        Ok(m)
    }

    pub fn kron(&self, b: &CMatrix) -> CMatrix {
        let src = FinBasis::product(&self.src, &b.src);
        let tgt = FinBasis::product(&self.tgt, &b.tgt);
        let mut m = CMatrix::zeros(&src, &tgt);
        let (br, bc) = (b.rows(), b.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let x = self.get(i, j);
                for k in 0..br {
                    for l in 0..bc {
                        m.set(i * br + k, j * bc + l, x * b.get(k, l));
                    }
                }
            }
        }
        m
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let mut m = CMatrix::zeros(&self.tgt, &self.src);
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.data.len(), other.data.len(), "shape");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Same bases and entries within `tol`.
    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.src == other.src && self.tgt == other.tgt && self.max_abs_diff(other) <= tol
    }

    /// `M† M = M M† = id` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        if self.rows() != self.cols() {
            return Err(VecError::NonSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let d = self.dagger();
        let left = d.matmul(self)?;
        let right = self.matmul(&d)?;
        let id_s = CMatrix::identity(&self.src);
        let id_t = CMatrix::identity(&self.tgt);
        Ok(left.max_abs_diff(&id_s) <= tol && right.max_abs_diff(&id_t) <= tol)
    }

    /// For a 0/1 permutation matrix (within `tol`), the row index of the
    /// single 1 in each column.
    pub fn as_permutation(&self, tol: f64) -> Option<Vec<usize>> {
        if self.rows() != self.cols() {
            return None;
        }
        let n = self.cols();
        let mut perm = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for j in 0..n {
            let mut hit = None;
            for i in 0..n {
                let x = self.get(i, j);
                if (x - Amp::new(1.0, 0.0)).norm() <= tol {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(i);
                } else if x.norm() > tol {
                    return None;
                }
            }
            let i = hit?;
            if std::mem::replace(&mut seen[i], true) {
                return None;
            }
            perm.push(i);
        }
        Some(perm)
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> AmpVec {
        AmpVec::from_pairs((0..self.rows()).map(|i| (self.tgt.label(i).clone(), self.get(i, j))))
    }

    pub fn apply_vec(&self, v: &AmpVec) -> Result<AmpVec> {
        bind(v, &self.to_op())
    }

    /// Wraps the matrix back as an operation, one column per source label.
    pub fn to_op(&self) -> KleisliOp {
        let cols: Arc<Vec<AmpVec>> = Arc::new((0..self.cols()).map(|j| self.column(j)).collect());
        let src = self.src.clone();
        KleisliOp::new(&self.src, &self.tgt, move |a| {
            Ok(cols[src.index_of(a).expect("checked by apply")].clone())
        })
    }

    /// Text dump: a header of column labels, then `label: a+bi ...` rows.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let head: Vec<String> = self.src.labels().iter().map(|l| l.to_string()).collect();
        out.push_str(&head.join(" "));
        out.push('\n');
        for i in 0..self.rows() {
            out.push_str(&self.tgt.label(i).to_string());
            out.push(':');
            for j in 0..self.cols() {
                out.push(' ');
                out.push_str(&fmt_amp(self.get(i, j)));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row {
            label: String,
            re: Vec<f64>,
            im: Vec<f64>,
        }
        #[derive(Serialize)]
        struct Doc {
            columns: Vec<String>,
            rows: Vec<Row>,
        }
        let doc = Doc {
            columns: self.src.labels().iter().map(|l| l.to_string()).collect(),
            rows: (0..self.rows())
                .map(|i| Row {
                    label: self.tgt.label(i).to_string(),
                    re: (0..self.cols()).map(|j| snap(self.get(i, j).re)).collect(),
                    im: (0..self.cols()).map(|j| snap(self.get(i, j).im)).collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    /// Parses the output of [`CMatrix::dump`].
    pub fn parse_dump(text: &str) -> Result<CMatrix> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or(VecError::Parse {
            line: 1,
            msg: "empty matrix file".into(),
        })?;
        let src = FinBasis::new(
            head.split_whitespace()
                .map(|t| t.parse::<Label>())
                .collect::<std::result::Result<_, _>>()?,
        )?;
        let mut row_labels = Vec::new();
        let mut rows = Vec::new();
        for (no, line) in lines {
            let err = |msg: &str| VecError::Parse {
                line: no + 1,
                msg: msg.to_string(),
            };
            let (l, rest) = line
                .rsplit_once(':')
                .ok_or_else(|| err("expected `label: entries`"))?;
            row_labels.push(l.trim().parse::<Label>()?);
            let row: Vec<Amp> = rest
                .split_whitespace()
                .map(|t| parse_amp(t).ok_or_else(|| err("bad amplitude")))
                .collect::<Result<_>>()?;
            if row.len() != src.len() {
                return Err(err("row width does not match header"));
            }
            rows.push(row);
        }
        let tgt = FinBasis::new(row_labels)?;
        let mut m = CMatrix::zeros(&src, &tgt);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, a) in row.into_iter().enumerate() {
                m.set(i, j, a);
            }
        }
        Ok(m)
    }
}

fn snap(x: f64) -> f64 {
    if x.abs() < PRUNE_EPS {
        0.0
    } else {
        x
    }
}

/// `%.12g`-style rendering. Components below the prune threshold print as 0.
pub fn fmt_real(x: f64) -> String {
    let x = snap(x);
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..12).contains(&exp) {
        let mant = strip_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `a+bi` with both parts in [`fmt_real`] form.
pub fn fmt_amp(a: Amp) -> String {
    let im = snap(a.im);
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", fmt_real(a.re), fmt_real(im.abs()))
}

/// Parses `a+bi`, `a-bi`, or a bare real.
pub fn parse_amp(s: &str) -> Option<Amp> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|re| Amp::new(re, 0.0));
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    let re: f64 = body[..cut].parse().ok()?;
    let im: f64 = body[cut..].parse().ok()?;
    Some(Amp::new(re, im))
}
