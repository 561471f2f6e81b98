//! Typed Boolean relations over finite bases.
//!
//! A [`Rel`] `R : A -> B` is stored as a `|B| x |A|` Boolean matrix, rows
//! indexed by the target and columns by the source, so `b R a` is
//! `r.get(b, a)`. Functions are relations with exactly one 1 per column.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::label::{Label, LabelParseError};

#[derive(Debug, Error)]
pub enum RelError {
    #[error("{op}: basis mismatch ({left} vs {right})")]
    BasisMismatch {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("duplicate label {0} in basis")]
    DuplicateLabel(Label),
    #[error("label {0} is not in the basis")]
    UnknownLabel(Label),
    #[error("{0}: relation is not a function")]
    NotAFunction(&'static str),
    #[error("domain has {n} elements, above the limit of {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("monoid law violated: {0}")]
    MonoidLaw(String),
    #[error("line {line}: {msg}")]
    TableSyntax { line: usize, msg: String },
    #[error(transparent)]
    Label(#[from] LabelParseError),
}

pub type Result<T> = std::result::Result<T, RelError>;

/// An ordered set of distinct labels.
#[derive(Clone)]
pub struct FinBasis {
    labels: Arc<Vec<Label>>,
    index: Arc<HashMap<Label, usize>>,
}

impl FinBasis {
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(RelError::DuplicateLabel(l.clone()));
            }
        }
        Ok(FinBasis {
            labels: Arc::new(labels),
            index: Arc::new(index),
        })
    }

    /// The two-element basis `0, 1`.
    pub fn bits() -> Self {
        Self::new(vec![Label::bit(false), Label::bit(true)]).unwrap()
    }

    /// The one-element basis `()`.
    pub fn unit() -> Self {
        Self::new(vec![Label::Unit]).unwrap()
    }

    pub fn atoms(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().map(|s| Label::atom(*s)).collect())
    }

    /// Row-major product: the left factor varies slowest.
    pub fn product(a: &FinBasis, b: &FinBasis) -> Self {
        let mut labels = Vec::with_capacity(a.len() * b.len());
        for x in a.labels() {
            for y in b.labels() {
                labels.push(Label::pair(x.clone(), y.clone()));
            }
        }
        Self::new(labels).unwrap()
    }

    /// Coproduct: every `inl` label, then every `inr` label.
    pub fn coproduct(a: &FinBasis, b: &FinBasis) -> Self {
        let labels = a
            .labels()
            .iter()
            .map(|x| Label::inl(x.clone()))
            .chain(b.labels().iter().map(|y| Label::inr(y.clone())))
            .collect();
        Self::new(labels).unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.index.contains_key(l)
    }

    pub fn require(&self, l: &Label) -> Result<usize> {
        self.index_of(l).ok_or_else(|| RelError::UnknownLabel(l.clone()))
    }
}

impl PartialEq for FinBasis {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for FinBasis {}

impl fmt::Debug for FinBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

fn mismatch(op: &'static str, a: &FinBasis, b: &FinBasis) -> RelError {
    RelError::BasisMismatch {
        op,
        left: a.to_string(),
        right: b.to_string(),
    }
}

/// A Boolean matrix typed `src -> tgt`.
#[derive(Clone, PartialEq, Eq)]
pub struct Rel {
    src: FinBasis,
    tgt: FinBasis,
    bits: Vec<bool>,
}

impl fmt::Debug for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rel {} -> {}\n{}", self.src, self.tgt, self.dump(false))
    }
}

impl Rel {
    pub fn empty(src: &FinBasis, tgt: &FinBasis) -> Self {
        Rel {
            src: src.clone(),
            tgt: tgt.clone(),
            bits: vec![false; src.len() * tgt.len()],
        }
    }

    /// Builds from rows (one per target label) of 0/1 entries.
    pub fn from_rows(src: &FinBasis, tgt: &FinBasis, rows: &[&[u8]]) -> Self {
        assert_eq!(rows.len(), tgt.len(), "row count");
        let mut r = Rel::empty(src, tgt);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), src.len(), "row width");
            for (j, &v) in row.iter().enumerate() {
                r.set(i, j, v != 0);
            }
        }
        r
    }

    pub fn from_pred(src: &FinBasis, tgt: &FinBasis, p: impl Fn(usize, usize) -> bool) -> Self {
        let mut r = Rel::empty(src, tgt);
        for b in 0..tgt.len() {
            for a in 0..src.len() {
                r.set(b, a, p(b, a));
            }
        }
        r
    }

    pub fn identity(b: &FinBasis) -> Self {
        Rel::from_pred(b, b, |i, j| i == j)
    }

    /// The graph of `f`. Fails if `f` leaves `tgt`.
    pub fn from_fn(src: &FinBasis, tgt: &FinBasis, f: impl Fn(&Label) -> Label) -> Result<Self> {
        let mut r = Rel::empty(src, tgt);
        for (a, l) in src.labels().iter().enumerate() {
            let b = tgt.require(&f(l))?;
            r.set(b, a, true);
        }
        Ok(r)
    }

    /// The graph of a function given by source-index to target-index.
    pub fn from_index_fn(src: &FinBasis, tgt: &FinBasis, f: impl Fn(usize) -> usize) -> Self {
        let mut r = Rel::empty(src, tgt);
        for a in 0..src.len() {
            r.set(f(a), a, true);
        }
        r
    }

    pub fn src(&self) -> &FinBasis {
        &self.src
    }

    pub fn tgt(&self) -> &FinBasis {
        &self.tgt
    }

    pub fn get(&self, b: usize, a: usize) -> bool {
        self.bits[b * self.src.len() + a]
    }

    pub fn set(&mut self, b: usize, a: usize, v: bool) {
        let w = self.src.len();
        self.bits[b * w + a] = v;
    }

    pub fn holds(&self, b: &Label, a: &Label) -> bool {
        match (self.tgt.index_of(b), self.src.index_of(a)) {
            (Some(i), Some(j)) => self.get(i, j),
            _ => false,
        }
    }

    /// `self ∘ s`: first `s`, then `self`.
    pub fn compose(&self, s: &Rel) -> Result<Rel> {
        if s.tgt != self.src {
            return Err(mismatch("compose", &s.tgt, &self.src));
        }
        let mid = self.src.len();
        Ok(Rel::from_pred(&s.src, &self.tgt, |c, a| {
            (0..mid).any(|b| self.get(c, b) && s.get(b, a))
        }))
    }

    pub fn converse(&self) -> Rel {
        Rel::from_pred(&self.tgt, &self.src, |a, b| self.get(b, a))
    }

    /// `R° ∘ R`, typed `src -> src`.
    pub fn kernel(&self) -> Rel {
        self.converse().compose(self).unwrap()
    }

    /// `R ∘ R°`, typed `tgt -> tgt`.
    pub fn image(&self) -> Rel {
        self.compose(&self.converse()).unwrap()
    }

    fn same_type(&self, s: &Rel, op: &'static str) -> Result<()> {
        if self.src != s.src {
            return Err(mismatch(op, &self.src, &s.src));
        }
        if self.tgt != s.tgt {
            return Err(mismatch(op, &self.tgt, &s.tgt));
        }
        Ok(())
    }

    pub fn meet(&self, s: &Rel) -> Result<Rel> {
        self.same_type(s, "meet")?;
        let mut r = self.clone();
        r.bits.iter_mut().zip(&s.bits).for_each(|(x, y)| *x &= *y);
        Ok(r)
    }

    pub fn join(&self, s: &Rel) -> Result<Rel> {
        self.same_type(s, "join")?;
        let mut r = self.clone();
        r.bits.iter_mut().zip(&s.bits).for_each(|(x, y)| *x |= *y);
        Ok(r)
    }

    /// Inclusion `self ⊆ s`.
    pub fn subset(&self, s: &Rel) -> Result<bool> {
        self.same_type(s, "subset")?;
        Ok(self.bits.iter().zip(&s.bits).all(|(x, y)| !*x || *y))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().subset(&Rel::identity(&self.src)).unwrap()
    }

    pub fn is_simple(&self) -> bool {
        self.image().subset(&Rel::identity(&self.tgt)).unwrap()
    }

    pub fn is_entire(&self) -> bool {
        Rel::identity(&self.src).subset(&self.kernel()).unwrap()
    }

    pub fn is_surjective(&self) -> bool {
        Rel::identity(&self.tgt).subset(&self.image()).unwrap()
    }

    pub fn is_function(&self) -> bool {
        self.is_simple() && self.is_entire()
    }

    pub fn is_bijection(&self) -> bool {
        self.is_function() && self.is_injective() && self.is_surjective()
    }

    /// `R ∘ R° ∘ R ⊆ R`.
    pub fn is_difunctional(&self) -> bool {
        let rrr = self.image().compose(self).unwrap();
        rrr.subset(self).unwrap()
    }

    /// For a function, the target index of each source index.
    pub fn fn_table(&self) -> Result<Vec<usize>> {
        let n = self.tgt.len();
        (0..self.src.len())
            .map(|a| {
                let mut hits = (0..n).filter(|&b| self.get(b, a));
                match (hits.next(), hits.next()) {
                    (Some(b), None) => Ok(b),
                    _ => Err(RelError::NotAFunction("fn_table")),
                }
            })
            .collect()
    }

    /// Applies a function to a label.
    pub fn apply(&self, a: &Label) -> Result<Label> {
        let j = self.src.require(a)?;
        let mut hits = (0..self.tgt.len()).filter(|&b| self.get(b, j));
        match (hits.next(), hits.next()) {
            (Some(b), None) => Ok(self.tgt.label(b).clone()),
            _ => Err(RelError::NotAFunction("apply")),
        }
    }

    /// The split `⟨R,S⟩`: `(b,c) ⟨R,S⟩ a ⇔ b R a ∧ c S a`.
    pub fn pair(&self, s: &Rel) -> Result<Rel> {
        if self.src != s.src {
            return Err(mismatch("pair", &self.src, &s.src));
        }
        let tgt = FinBasis::product(&self.tgt, &s.tgt);
        let m = s.tgt.len();
        Ok(Rel::from_pred(&self.src, &tgt, |bc, a| {
            self.get(bc / m, a) && s.get(bc % m, a)
        }))
    }

    /// The junc `[R|S]` from `src_r + src_s`.
    pub fn either(&self, s: &Rel) -> Result<Rel> {
        if self.tgt != s.tgt {
            return Err(mismatch("either", &self.tgt, &s.tgt));
        }
        let src = FinBasis::coproduct(&self.src, &s.src);
        let n = self.src.len();
        Ok(Rel::from_pred(&src, &self.tgt, |b, a| {
            if a < n {
                self.get(b, a)
            } else {
                s.get(b, a - n)
            }
        }))
    }

    /// `R + S = [inl ∘ R | inr ∘ S]`.
    pub fn sum(&self, s: &Rel) -> Rel {
        let src = FinBasis::coproduct(&self.src, &s.src);
        let tgt = FinBasis::coproduct(&self.tgt, &s.tgt);
        let (n, m) = (self.src.len(), self.tgt.len());
        Rel::from_pred(&src, &tgt, |b, a| match (b < m, a < n) {
            (true, true) => self.get(b, a),
            (false, false) => s.get(b - m, a - n),
            _ => false,
        })
    }

    /// `R × S = ⟨R ∘ fst, S ∘ snd⟩`.
    pub fn product(&self, s: &Rel) -> Rel {
        let src = FinBasis::product(&self.src, &s.src);
        let tgt = FinBasis::product(&self.tgt, &s.tgt);
        let (ns, nt) = (s.src.len(), s.tgt.len());
        Rel::from_pred(&src, &tgt, |cd, ab| {
            self.get(cd / nt, ab / ns) && s.get(cd % nt, ab % ns)
        })
    }

    /// Injectivity preorder `R ≤ S ⇔ ker S ⊆ ker R`.
    pub fn leq_injectivity(&self, s: &Rel) -> Result<bool> {
        if self.src != s.src {
            return Err(mismatch("leq_injectivity", &self.src, &s.src));
        }
        s.kernel().subset(&self.kernel())
    }

    /// Text dump: optional header of source labels, then one row per target.
    pub fn dump(&self, labels: bool) -> String {
        let mut out = String::new();
        if labels {
            let head: Vec<String> = self.src.labels().iter().map(|l| l.to_string()).collect();
            out.push_str(&head.join(" "));
            out.push('\n');
        }
        for b in 0..self.tgt.len() {
            if labels {
                out.push_str(&format!("{}: ", self.tgt.label(b)));
            }
            let row: Vec<&str> = (0..self.src.len())
                .map(|a| if self.get(b, a) { "1" } else { "0" })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn inj1(a: &FinBasis, b: &FinBasis) -> Rel {
    let tgt = FinBasis::coproduct(a, b);
    Rel::from_index_fn(a, &tgt, |i| i)
}

pub fn inj2(a: &FinBasis, b: &FinBasis) -> Rel {
    let tgt = FinBasis::coproduct(a, b);
    let n = a.len();
    Rel::from_index_fn(b, &tgt, |i| n + i)
}

pub fn fst(a: &FinBasis, b: &FinBasis) -> Rel {
    let src = FinBasis::product(a, b);
    let m = b.len();
    Rel::from_index_fn(&src, a, |i| i / m)
}

pub fn snd(a: &FinBasis, b: &FinBasis) -> Rel {
    let src = FinBasis::product(a, b);
    let m = b.len();
    Rel::from_index_fn(&src, b, |i| i % m)
}

/// The constant function into the unit basis.
pub fn bang(a: &FinBasis) -> Rel {
    Rel::from_index_fn(a, &FinBasis::unit(), |_| 0)
}

/// `γ = [⟨false,id⟩ | ⟨true,id⟩] : A + A -> B × A`.
pub fn gamma(a: &FinBasis) -> Rel {
    let src = FinBasis::coproduct(a, a);
    let tgt = FinBasis::product(&FinBasis::bits(), a);
    // index layout coincides: inl(x) at i, inr(x) at n+i; (0,x) at i, (1,x) at n+i
    Rel::from_index_fn(&src, &tgt, |i| i)
}

pub fn xor_rel() -> Rel {
    let b = FinBasis::bits();
    let bb = FinBasis::product(&b, &b);
    Rel::from_index_fn(&bb, &b, |i| (i >> 1) ^ (i & 1))
}

pub fn and_rel() -> Rel {
    let b = FinBasis::bits();
    let bb = FinBasis::product(&b, &b);
    Rel::from_index_fn(&bb, &b, |i| (i >> 1) & (i & 1))
}

pub fn not_rel() -> Rel {
    let b = FinBasis::bits();
    Rel::from_index_fn(&b, &b, |i| 1 - i)
}

/// `cnot = ⟨fst, xor⟩`.
pub fn cnot_rel() -> Rel {
    let b = FinBasis::bits();
    fst(&b, &b).pair(&xor_rel()).unwrap()
}

/// A partition of the source basis found by [`minimal_complements`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complement {
    /// Blocks of source indices, each sorted, ordered by least element.
    pub blocks: Vec<Vec<usize>>,
    /// Maps each source element to the least-index member of its block.
    pub quotient: Rel,
}

pub const DEFAULT_COMPLEMENT_LIMIT: usize = 12;

/// All coarsest partitions `E` of `f`'s source with `E ∩ ker f = id`.
///
/// Exhaustive over set partitions. Branches that put two elements with the
/// same image in one block are cut immediately, since no refinement of such
/// a partition is kept either. A kept partition is maximal exactly when every
/// pair of its blocks has overlapping images (otherwise the two could merge).
pub fn minimal_complements(f: &Rel, limit: usize) -> Result<Vec<Complement>> {
    let n = f.src().len();
    if n > limit {
        return Err(RelError::SizeLimit { n, limit });
    }
    let table = f
        .fn_table()
        .map_err(|_| RelError::NotAFunction("minimal_complements"))?;
    // compact target indices so images fit a u64 mask (at most `n` distinct)
    let mut compact: HashMap<usize, u32> = HashMap::new();
    let img: Vec<u64> = table
        .iter()
        .map(|t| {
            let next = compact.len() as u32;
            1u64 << *compact.entry(*t).or_insert(next)
        })
        .collect();

    let mut found = Vec::new();
    let mut rgs = vec![0usize; n];
    let mut masks: Vec<u64> = Vec::new();
    search(0, &img, &mut rgs, &mut masks, &mut found);

    found.sort();
    Ok(found
        .into_iter()
        .map(|rgs| {
            let nblocks = rgs.iter().max().map_or(0, |m| m + 1);
            let mut blocks = vec![Vec::new(); nblocks];
            for (i, &b) in rgs.iter().enumerate() {
                blocks[b].push(i);
            }
            let quotient = Rel::from_index_fn(f.src(), f.src(), |i| blocks[rgs[i]][0]);
            Complement { blocks, quotient }
        })
        .collect())
}

fn search(i: usize, img: &[u64], rgs: &mut [usize], masks: &mut Vec<u64>, out: &mut Vec<Vec<usize>>) {
    if i == img.len() {
        let maximal = (0..masks.len()).all(|p| (p + 1..masks.len()).all(|q| masks[p] & masks[q] != 0));
        if maximal {
            out.push(rgs.to_vec());
        }
        return;
    }
    for b in 0..masks.len() {
        if masks[b] & img[i] == 0 {
            masks[b] |= img[i];
            rgs[i] = b;
            search(i + 1, img, rgs, masks, out);
            masks[b] &= !img[i];
        }
    }
    masks.push(img[i]);
    rgs[i] = masks.len() - 1;
    search(i + 1, img, rgs, masks, out);
    masks.pop();
}

/// A finite monoid with `x · x = unit` for every `x`.
#[derive(Clone, Debug)]
pub struct MonoidSpec {
    carrier: FinBasis,
    table: Vec<usize>,
    unit: usize,
}

impl MonoidSpec {
    pub fn new(carrier: &FinBasis, op: impl Fn(&Label, &Label) -> Label, unit: &Label) -> Result<Self> {
        let n = carrier.len();
        let u = carrier.require(unit)?;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[x * n + y] = carrier.require(&op(carrier.label(x), carrier.label(y)))?;
            }
        }
        let m = MonoidSpec {
            carrier: carrier.clone(),
            table,
            unit: u,
        };
        let name = |i: usize| carrier.label(i).to_string();
        for x in 0..n {
            if m.op(u, x) != x || m.op(x, u) != x {
                return Err(RelError::MonoidLaw(format!(
                    "{} is not a unit for {}",
                    name(u),
                    name(x)
                )));
            }
            if m.op(x, x) != u {
                return Err(RelError::MonoidLaw(format!("{0}·{0} is not the unit", name(x))));
            }
            for y in 0..n {
                for z in 0..n {
                    if m.op(m.op(x, y), z) != m.op(x, m.op(y, z)) {
                        return Err(RelError::MonoidLaw(format!(
                            "not associative at ({}, {}, {})",
                            name(x),
                            name(y),
                            name(z)
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    /// `(B; xor, 0)`.
    pub fn xor() -> Self {
        let b = FinBasis::bits();
        MonoidSpec::new(
            &b,
            |x, y| Label::bit(x.as_bit().unwrap() ^ y.as_bit().unwrap()),
            &Label::bit(false),
        )
        .unwrap()
    }

    pub fn carrier(&self) -> &FinBasis {
        &self.carrier
    }

    pub fn unit(&self) -> &Label {
        self.carrier.label(self.unit)
    }

    fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.carrier.len() + y]
    }
}

/// `U f = ⟨fst, θ ∘ (f × id)⟩`, a self-inverse bijection on `A × C`.
pub fn u_construct(f: &Rel, m: &MonoidSpec) -> Result<Rel> {
    if f.tgt() != m.carrier() {
        return Err(mismatch("u_construct", f.tgt(), m.carrier()));
    }
    let table = f.fn_table().map_err(|_| RelError::NotAFunction("u_construct"))?;
    let c = m.carrier.len();
    let ac = FinBasis::product(f.src(), m.carrier());
    Ok(Rel::from_index_fn(&ac, &ac, |i| {
        let (a, x) = (i / c, i % c);
        a * c + m.op(table[a], x)
    }))
}

/// Parses a truth table with one `label -> label` line per source element.
///
/// The source basis follows line order. The target basis is the set of
/// right-hand sides in label order. Blank lines and `#` comments are skipped.
pub fn parse_truth_table(text: &str) -> Result<Rel> {
    let mut pairs = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (l, r) = line.split_once("->").ok_or_else(|| RelError::TableSyntax {
            line: no + 1,
            msg: "expected `label -> label`".into(),
        })?;
        let a: Label = l.trim().parse()?;
        let b: Label = r.trim().parse()?;
        pairs.push((a, b));
    }
    let src = FinBasis::new(pairs.iter().map(|(a, _)| a.clone()).collect())?;
    let mut outs: Vec<Label> = pairs.iter().map(|(_, b)| b.clone()).collect();
    outs.sort();
    outs.dedup();
    let tgt = FinBasis::new(outs)?;
    let mut r = Rel::empty(&src, &tgt);
    for (i, (_, b)) in pairs.iter().enumerate() {
        r.set(tgt.index_of(b).unwrap(), i, true);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> FinBasis {
        FinBasis::bits()
    }

    fn bb() -> FinBasis {
        FinBasis::product(&b(), &b())
    }

    #[test]
    fn product_is_row_major() {
        let names: Vec<String> = bb().labels().iter().map(|l| l.to_string()).collect();
        assert_eq!(names, ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
        let c = FinBasis::coproduct(&b(), &FinBasis::unit());
        assert_eq!(c.to_string(), "{inl(0) inl(1) inr(())}");
    }

    #[test]
    fn xor_kernel() {
        let k = xor_rel().kernel();
        let want = Rel::from_rows(
            &bb(),
            &bb(),
            &[&[1, 0, 0, 1], &[0, 1, 1, 0], &[0, 1, 1, 0], &[1, 0, 0, 1]],
        );
        assert_eq!(k, want);
        assert!(!xor_rel().is_injective());
        assert!(xor_rel().is_surjective());
    }

    #[test]
    fn fst_matrix_and_converse() {
        let f = fst(&b(), &b());
        assert_eq!(f.dump(false), "1 1 0 0\n0 0 1 1\n");
        assert_eq!(f.converse().dump(false), "1 0\n1 0\n0 1\n0 1\n");
    }

    #[test]
    fn compose_typechecks() {
        assert!(xor_rel().compose(&xor_rel()).is_err());
        assert!(Rel::identity(&b()).compose(&xor_rel()).is_ok());
    }

    #[test]
    fn cnot_is_bijection_and_pair() {
        let c = cnot_rel();
        assert!(c.is_bijection());
        let want = Rel::from_rows(
            &bb(),
            &bb(),
            &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]],
        );
        assert_eq!(c, want);
    }

    #[test]
    fn gamma_laws() {
        let g = gamma(&b());
        assert!(g.is_bijection());
        assert_eq!(g.compose(&g.converse()).unwrap(), Rel::identity(g.tgt()));
        let lhs = xor_rel().compose(&g).unwrap();
        let rhs = Rel::identity(&b()).either(&not_rel()).unwrap();
        assert_eq!(lhs, rhs);
        let lhs = cnot_rel().compose(&g).unwrap();
        let rhs = g.compose(&Rel::identity(&b()).sum(&not_rel())).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn difunctional_examples() {
        let m = Rel::from_rows(
            &bb(),
            &bb(),
            &[&[1, 1, 1, 0], &[1, 1, 0, 1], &[1, 0, 1, 1], &[0, 1, 1, 1]],
        );
        assert!(!m.is_difunctional());
        assert!(fst(&b(), &b()).kernel().is_difunctional());
    }

    #[test]
    fn xor_complements_are_fst_and_snd() {
        let cs = minimal_complements(&xor_rel(), DEFAULT_COMPLEMENT_LIMIT).unwrap();
        let blocks: Vec<_> = cs.iter().map(|c| c.blocks.clone()).collect();
        assert_eq!(
            blocks,
            vec![vec![vec![0, 1], vec![2, 3]], vec![vec![0, 2], vec![1, 3]]]
        );
        assert_eq!(cs[0].quotient.kernel(), fst(&b(), &b()).kernel());
        assert_eq!(cs[1].quotient.kernel(), snd(&b(), &b()).kernel());
    }

    #[test]
    fn identity_complement_is_bang() {
        let cs = minimal_complements(&Rel::identity(&bb()), 12).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].blocks, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn complement_size_limit() {
        let big = FinBasis::new((0..13).map(|i| Label::atom(i.to_string())).collect()).unwrap();
        let err = minimal_complements(&Rel::identity(&big), 12).unwrap_err();
        assert!(matches!(err, RelError::SizeLimit { n: 13, limit: 12 }));
    }

    #[test]
    fn u_construct_gives_cnot_and_ccnot() {
        let m = MonoidSpec::xor();
        assert_eq!(u_construct(&Rel::identity(&b()), &m).unwrap(), cnot_rel());
        let cc = u_construct(&and_rel(), &m).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let want = if i >= 6 && j >= 6 { i != j } else { i == j };
                assert_eq!(cc.get(i, j), want, "({i},{j})");
            }
        }
    }

    #[test]
    fn monoid_rejects_non_self_annihilating() {
        let b = b();
        let or = MonoidSpec::new(
            &b,
            |x, y| Label::bit(x.as_bit().unwrap() | y.as_bit().unwrap()),
            &Label::bit(false),
        );
        assert!(matches!(or, Err(RelError::MonoidLaw(_))));
    }

    #[test]
    fn truth_table_roundtrip() {
        let r = parse_truth_table("(0,0) -> 0\n(0,1) -> 1\n# c\n(1,0) -> 1\n(1,1) -> 0\n").unwrap();
        assert_eq!(r, xor_rel());
        assert!(parse_truth_table("(0,0) 0").is_err());
    }
}
