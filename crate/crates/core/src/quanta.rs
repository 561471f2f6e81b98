//! Folds over bit lists: the classical reversible fold, the Ψ transformer,
//! and the quantamorphism `⦇f⦈` with its matrix on a truncated list basis.
//!
//! States are labels `(xs, b)`: a list `xs` of items and a payload `b`.
//! A step `f : A × B -> Vec (C × B)` is threaded through the list from the
//! last element to the first, so
//!
//! ```text
//! ⦇f⦈ ([],   b) = ret ([], b)
//! ⦇f⦈ (h:t,  b) = do { (t',b') <- ⦇f⦈ (t,b); (h'',b'') <- f (h,b'); ret (h'':t', b'') }
//! ```

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::gates::{id, lift};
use crate::label::Label;
use crate::relalg::{self, FinBasis, Rel, RelError};
use crate::vecmonad::{direct_sum, materialize, seq, tensor, AmpVec, KleisliOp, VecError, DEFAULT_TOL};

#[derive(Debug, Error)]
pub enum QuantaError {
    #[error(transparent)]
    Vec(#[from] VecError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error("step is not unitary (tolerance {tol})")]
    NotUnitary { tol: f64 },
    #[error("step must act on {want}, got {got}")]
    StepShape { want: String, got: String },
    #[error("cons onto a list of length {len} exceeds maxlen {maxlen}")]
    Truncation { len: usize, maxlen: usize },
    #[error("step is not complemented by fst: {0} and {1} both map to {2}")]
    NotComplemented(Label, Label, Label),
    #[error("{0} is not a (list, payload) state")]
    BadState(Label),
}

pub type Result<T> = std::result::Result<T, QuantaError>;

/// Splits a `(list, payload)` label.
pub fn split_state(l: &Label) -> Result<(&[Label], &Label)> {
    l.as_pair()
        .and_then(|(xs, b)| Some((xs.as_list()?, b)))
        .ok_or_else(|| QuantaError::BadState(l.clone()))
}

pub fn state(xs: Vec<Label>, b: Label) -> Label {
    Label::pair(Label::List(xs), b)
}

/// All `(list, payload)` pairs with list length at most `maxlen`.
///
/// Order: preorder over the cons tree (a list, then everything built by
/// consing the first item onto it, then the second item, ...), with the
/// payload varying fastest. For bit items and payload at `maxlen = 2`:
/// `([],0) ([],1) ([0],0) ([0],1) ([0,0],0) ([0,0],1) ([1,0],0) ...`.
#[derive(Clone, Debug)]
pub struct ListBasis {
    maxlen: usize,
    items: FinBasis,
    payload: FinBasis,
    lists: FinBasis,
    basis: FinBasis,
}

impl ListBasis {
    pub fn new(maxlen: usize, items: &FinBasis, payload: &FinBasis) -> Self {
        fn walk(t: &[Label], maxlen: usize, items: &FinBasis, out: &mut Vec<Label>) {
            out.push(Label::List(t.to_vec()));
            if t.len() < maxlen {
                for x in items.labels() {
                    let mut xt = Vec::with_capacity(t.len() + 1);
                    xt.push(x.clone());
                    xt.extend_from_slice(t);
                    walk(&xt, maxlen, items, out);
                }
            }
        }
        let mut lists = Vec::new();
        walk(&[], maxlen, items, &mut lists);
        let lists = FinBasis::new(lists).expect("distinct lists");
        ListBasis {
            maxlen,
            items: items.clone(),
            payload: payload.clone(),
            basis: FinBasis::product(&lists, payload),
            lists,
        }
    }

    /// Bit items, bit payload.
    pub fn bits(maxlen: usize) -> Self {
        Self::new(maxlen, &FinBasis::bits(), &FinBasis::bits())
    }

    pub fn maxlen(&self) -> usize {
        self.maxlen
    }

    pub fn items(&self) -> &FinBasis {
        &self.items
    }

    pub fn payload(&self) -> &FinBasis {
        &self.payload
    }

    /// The list labels alone, in the same order.
    pub fn lists(&self) -> &FinBasis {
        &self.lists
    }

    pub fn basis(&self) -> &FinBasis {
        &self.basis
    }

    /// The same items and payload, one element shorter.
    pub fn shorter(&self) -> Self {
        assert!(self.maxlen > 0, "no shorter basis than maxlen 0");
        ListBasis::new(self.maxlen - 1, &self.items, &self.payload)
    }
}

/// The 16 states addressed by four qubits: the 14 states of
/// `ListBasis::bits(2)` followed by `([0,0,0],0)` and `([0,0,0],1)`.
pub fn pinned16() -> FinBasis {
    let mut labels = ListBasis::bits(2).basis().labels().to_vec();
    let zeros = vec![Label::bit(false); 3];
    labels.push(state(zeros.clone(), Label::bit(false)));
    labels.push(state(zeros, Label::bit(true)));
    FinBasis::new(labels).unwrap()
}

/// A step checked to be unitary on `items × payload`.
#[derive(Clone, Debug)]
pub struct StepOp {
    op: KleisliOp,
    items: FinBasis,
    payload: FinBasis,
}

impl StepOp {
    pub fn new(op: KleisliOp, items: &FinBasis, payload: &FinBasis, tol: f64) -> Result<Self> {
        let want = FinBasis::product(items, payload);
        for got in [op.src(), op.tgt()] {
            if *got != want {
                return Err(QuantaError::StepShape {
                    want: want.to_string(),
                    got: got.to_string(),
                });
            }
        }
        if !materialize(&op)?.is_unitary(tol)? {
            return Err(QuantaError::NotUnitary { tol });
        }
        Ok(StepOp {
            op,
            items: items.clone(),
            payload: payload.clone(),
        })
    }

    /// A step on `bit × bit` at the default tolerance.
    pub fn bits(op: KleisliOp) -> Result<Self> {
        let b = FinBasis::bits();
        Self::new(op, &b, &b, DEFAULT_TOL)
    }

    pub fn op(&self) -> &KleisliOp {
        &self.op
    }

    pub fn items(&self) -> &FinBasis {
        &self.items
    }

    pub fn payload(&self) -> &FinBasis {
        &self.payload
    }
}

type Memo = Mutex<HashMap<Label, AmpVec>>;

fn fold_state(f: &KleisliOp, memo: &Memo, xs: &[Label], b: &Label) -> std::result::Result<AmpVec, VecError> {
    if xs.is_empty() {
        return Ok(AmpVec::ret(state(vec![], b.clone())));
    }
    let key = state(xs.to_vec(), b.clone());
    if let Some(v) = memo.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let rest = fold_state(f, memo, &xs[1..], b)?;
    let mut out = Vec::new();
    for (tb, p) in rest.iter() {
        let (t, b1) = split_state(tb).expect("fold returns states");
        for (hb, q) in f.apply(&Label::pair(xs[0].clone(), b1.clone()))?.iter() {
            let (h, b2) = hb.as_pair().expect("step returns pairs");
            let mut ht = Vec::with_capacity(t.len() + 1);
            ht.push(h.clone());
            ht.extend_from_slice(t);
            out.push((state(ht, b2.clone()), p * q));
        }
    }
    let v = AmpVec::from_pairs(out);
    for (l, _) in v.iter() {
        let len = split_state(l).expect("fold returns states").0.len();
        assert_eq!(len, xs.len(), "fold changed a list length");
    }
    memo.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

/// The fold of any step `A × B -> Vec (C × B)`, typed `src -> tgt`.
///
/// No unitarity check; see [`quantamorphism`] for the checked form.
/// Sub-folds are memoized per operation, behind a lock.
pub fn fold_op(f: &KleisliOp, src: &FinBasis, tgt: &FinBasis) -> KleisliOp {
    let f = f.clone();
    let memo: Arc<Memo> = Arc::default();
    KleisliOp::new(src, tgt, move |l| {
        let (xs, b) = split_state(l).map_err(|_| VecError::StrayLabel {
            label: l.clone(),
            basis: "(list, payload) states".into(),
        })?;
        fold_state(&f, &memo, xs, b)
    })
}

/// `⦇f⦈` on a basis of `(list, payload)` states, e.g.
/// `ListBasis::bits(2).basis()` or [`pinned16`].
pub fn quantamorphism(f: &StepOp, basis: &FinBasis) -> KleisliOp {
    fold_op(&f.op, basis, basis)
}

/// `⦇f⦈` applied to one state, without any basis bound.
pub fn run_quanta(f: &StepOp, input: &Label) -> Result<AmpVec> {
    let (xs, b) = split_state(input)?;
    Ok(fold_state(&f.op, &Memo::default(), xs, b)?)
}

/// `cons (h, (t, b)) = (h:t, b)`, refusing to grow past `maxlen`.
pub fn cons(h: &Label, tb: &Label, maxlen: usize) -> Result<Label> {
    let (t, b) = split_state(tb)?;
    if t.len() >= maxlen {
        return Err(QuantaError::Truncation { len: t.len(), maxlen });
    }
    let mut ht = vec![h.clone()];
    ht.extend_from_slice(t);
    Ok(state(ht, b.clone()))
}

/// `α = [⟨nil,id⟩ | (cons × id) ∘ a] : B + A × (A* × B) -> A* × B`,
/// with the inner lists one shorter than `lb`.
pub fn alpha(lb: &ListBasis) -> Result<Rel> {
    let inner = lb.shorter();
    let src = FinBasis::coproduct(lb.payload(), &FinBasis::product(lb.items(), inner.basis()));
    let mut r = Rel::empty(&src, lb.basis());
    for (j, l) in src.labels().iter().enumerate() {
        let out = match l {
            Label::Inl(b) => state(vec![], (**b).clone()),
            Label::Inr(htb) => {
                let (h, tb) = htb.as_pair().unwrap();
                cons(h, tb, lb.maxlen())?
            }
            _ => unreachable!(),
        };
        r.set(lb.basis().require(&out)?, j, true);
    }
    Ok(r)
}

pub fn alpha_inv(lb: &ListBasis) -> Result<Rel> {
    Ok(alpha(lb)?.converse())
}

/// `a : A × (B × C) -> (A × B) × C`.
pub fn assoc_rel(a: &FinBasis, b: &FinBasis, c: &FinBasis) -> Rel {
    let src = FinBasis::product(a, &FinBasis::product(b, c));
    let tgt = FinBasis::product(&FinBasis::product(a, b), c);
    Rel::from_fn(&src, &tgt, |l| {
        let (x, yz) = l.as_pair().unwrap();
        let (y, z) = yz.as_pair().unwrap();
        Label::pair(Label::pair(x.clone(), y.clone()), z.clone())
    })
    .unwrap()
}

/// `xl : A × (B × C) -> B × (A × C)`.
pub fn xl_rel(a: &FinBasis, b: &FinBasis, c: &FinBasis) -> Rel {
    let src = FinBasis::product(a, &FinBasis::product(b, c));
    let tgt = FinBasis::product(b, &FinBasis::product(a, c));
    Rel::from_fn(&src, &tgt, |l| {
        let (x, yz) = l.as_pair().unwrap();
        let (y, z) = yz.as_pair().unwrap();
        Label::pair(y.clone(), Label::pair(x.clone(), z.clone()))
    })
    .unwrap()
}

/// `Ψ x = α ∘ (id ⊕ xl ∘ (id ⊗ x) ∘ xl)`, typed
/// `B + A × (A* × B) -> A* × B` with outer lists bounded by `lb`.
pub fn psi(x: &KleisliOp, lb: &ListBasis) -> Result<KleisliOp> {
    let inner = lb.shorter();
    let (items, payload, lists) = (lb.items(), lb.payload(), inner.lists());
    let swap_in = lift(&xl_rel(items, lists, payload))?;
    let swap_out = lift(&xl_rel(lists, items, payload))?;
    let body = seq(&[&swap_in, &tensor(&id(lists), x), &swap_out])?;
    let a = lift(&alpha(lb)?)?;
    Ok(seq(&[&direct_sum(&id(payload), &body), &a])?)
}

/// `⦇Q⦈ = Ψ Q ∘ (id ⊕ id ⊗ ⦇Q⦈) ∘ α°`, unrolled down to the empty list.
pub fn quantamorphism_via_psi(f: &StepOp, lb: &ListBasis) -> Result<KleisliOp> {
    if lb.maxlen() == 0 {
        return Ok(id(lb.basis()));
    }
    let inner = lb.shorter();
    let rec = quantamorphism_via_psi(f, &inner)?;
    let mid = direct_sum(&id(lb.payload()), &tensor(&id(lb.items()), &rec));
    Ok(seq(&[&lift(&alpha_inv(lb)?)?, &mid, &psi(&f.op, lb)?])?)
}

/// A classical step `f : A × B -> B` that `fst` complements, i.e.
/// `⟨fst, f⟩` is injective.
#[derive(Clone, Debug)]
pub struct Rfold {
    f: Rel,
}

impl Rfold {
    pub fn new(f: &Rel, items: &FinBasis, payload: &FinBasis) -> Result<Self> {
        let pf = relalg::fst(items, payload).pair(f)?;
        if !pf.is_injective() {
            let t = pf.fn_table()?;
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    if t[i] == t[j] {
                        let src = f.src();
                        return Err(QuantaError::NotComplemented(
                            src.label(i).clone(),
                            src.label(j).clone(),
                            pf.tgt().label(t[i]).clone(),
                        ));
                    }
                }
            }
        }
        Ok(Rfold { f: f.clone() })
    }

    /// `rfold f (a:x, b) = (a:y, f (a,b'))  where (y,b') = rfold f (x,b)`.
    pub fn run(&self, xs: &[Label], b: &Label) -> Result<(Vec<Label>, Label)> {
        let mut acc = b.clone();
        for a in xs.iter().rev() {
            acc = self.f.apply(&Label::pair(a.clone(), acc))?;
        }
        Ok((xs.to_vec(), acc))
    }

    pub fn to_rel(&self, basis: &FinBasis) -> Result<Rel> {
        let mut r = Rel::empty(basis, basis);
        for (j, l) in basis.labels().iter().enumerate() {
            let (xs, b) = split_state(l)?;
            let (ys, c) = self.run(xs, b)?;
            r.set(basis.require(&state(ys, c))?, j, true);
        }
        Ok(r)
    }
}

/// The classical fold of `f : A × B -> C × B`:
/// `⦇f⦈ (a:x, b) = (c:y, b'')  where (y,b') = ⦇f⦈ (x,b); (c,b'') = f (a,b')`.
pub fn fold_fn(f: &Rel, xs: &[Label], b: &Label) -> Result<(Vec<Label>, Label)> {
    let mut ys = Vec::with_capacity(xs.len());
    let mut acc = b.clone();
    for a in xs.iter().rev() {
        let cb = f.apply(&Label::pair(a.clone(), acc))?;
        let (c, b2) = cb.as_pair().expect("step returns pairs");
        ys.push(c.clone());
        acc = b2.clone();
    }
    ys.reverse();
    Ok((ys, acc))
}

pub fn fold_rel(f: &Rel, src: &FinBasis, tgt: &FinBasis) -> Result<Rel> {
    let mut r = Rel::empty(src, tgt);
    for (j, l) in src.labels().iter().enumerate() {
        let (xs, b) = split_state(l)?;
        let (ys, c) = fold_fn(f, xs, b)?;
        r.set(tgt.require(&state(ys, c))?, j, true);
    }
    Ok(r)
}

/// The catamorphism of `h : B + A × C -> C` on `A* × B`:
/// `⦇h⦈ ([],b) = h (inl b)`, `⦇h⦈ (a:x,b) = h (inr (a, ⦇h⦈ (x,b)))`.
pub fn cata(h: &dyn Fn(&Label) -> Result<Label>, xs: &[Label], b: &Label) -> Result<Label> {
    let mut acc = h(&Label::inl(b.clone()))?;
    for a in xs.iter().rev() {
        acc = h(&Label::inr(Label::pair(a.clone(), acc)))?;
    }
    Ok(acc)
}

pub fn cata_rel(h: &dyn Fn(&Label) -> Result<Label>, src: &FinBasis, tgt: &FinBasis) -> Result<Rel> {
    let mut r = Rel::empty(src, tgt);
    for (j, l) in src.labels().iter().enumerate() {
        let (xs, b) = split_state(l)?;
        let c = cata(h, xs, b)?;
        r.set(tgt.require(&c)?, j, true);
    }
    Ok(r)
}

/// Reads a materialized 0/1 matrix back as a relation.
pub fn classical_rel(op: &KleisliOp) -> Result<Rel> {
    let m = materialize(op)?;
    let mut r = Rel::empty(op.src(), op.tgt());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let a = m.get(i, j);
            if (a - 1.0).norm() <= DEFAULT_TOL {
                r.set(i, j, true);
            } else if a.norm() > DEFAULT_TOL {
                return Err(QuantaError::NotUnitary { tol: DEFAULT_TOL });
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::vecmonad::{Amp, CMatrix};

    fn labels(b: &FinBasis) -> Vec<String> {
        b.labels().iter().map(|l| l.to_string()).collect()
    }

    #[test]
    fn canonical_order_maxlen2() {
        let want = [
            "([],0)",
            "([],1)",
            "([0],0)",
            "([0],1)",
            "([0,0],0)",
            "([0,0],1)",
            "([1,0],0)",
            "([1,0],1)",
            "([1],0)",
            "([1],1)",
            "([0,1],0)",
            "([0,1],1)",
            "([1,1],0)",
            "([1,1],1)",
        ];
        assert_eq!(labels(ListBasis::bits(2).basis()), want);
        let p = labels(&pinned16());
        assert_eq!(&p[..14], &want);
        assert_eq!(&p[14..], ["([0,0,0],0)", "([0,0,0],1)"]);
    }

    #[test]
    fn basis_sizes() {
        for n in 0..5 {
            assert_eq!(ListBasis::bits(n).basis().len(), 2 * ((1 << (n + 1)) - 1));
        }
    }

    #[test]
    fn cnot_fold_is_parity_permutation() {
        let lb = ListBasis::bits(2);
        let q = quantamorphism(&StepOp::bits(gates::cnot()).unwrap(), lb.basis());
        let m = materialize(&q).unwrap();
        let perm = m.as_permutation(0.0).unwrap();
        let mut want: Vec<usize> = (0..14).collect();
        for (a, b) in [(6, 7), (8, 9), (10, 11)] {
            want.swap(a, b);
        }
        assert_eq!(perm, want);
    }

    #[test]
    fn empty_list_is_fixed() {
        let f = StepOp::bits(gates::bell()).unwrap();
        let s = state(vec![], Label::bit(true));
        assert_eq!(run_quanta(&f, &s).unwrap(), AmpVec::ret(s));
    }

    #[test]
    fn non_unitary_step_rejected() {
        let bb = FinBasis::product(&FinBasis::bits(), &FinBasis::bits());
        let k = gates::lift_fn(&bb, &bb, |_| Label::pair(Label::bit(false), Label::bit(false))).unwrap();
        assert!(matches!(StepOp::bits(k), Err(QuantaError::NotUnitary { .. })));
        assert!(matches!(
            StepOp::bits(gates::x()),
            Err(QuantaError::StepShape { .. })
        ));
    }

    #[test]
    fn alpha_is_bijection() {
        for n in 1..4 {
            let a = alpha(&ListBasis::bits(n)).unwrap();
            assert!(a.is_bijection());
            assert_eq!(
                a.compose(&alpha_inv(&ListBasis::bits(n)).unwrap()).unwrap(),
                Rel::identity(a.tgt())
            );
        }
    }

    #[test]
    fn cons_respects_maxlen() {
        let tb = state(vec![Label::bit(true); 2], Label::bit(false));
        assert!(matches!(
            cons(&Label::bit(false), &tb, 2),
            Err(QuantaError::Truncation { len: 2, maxlen: 2 })
        ));
        assert_eq!(
            cons(&Label::bit(false), &tb, 3).unwrap().to_string(),
            "([0,1,1],0)"
        );
    }

    #[test]
    fn xl_is_involutive() {
        let b = FinBasis::bits();
        let x = xl_rel(&b, &b, &b);
        assert_eq!(x.compose(&x).unwrap(), Rel::identity(x.src()));
    }

    #[test]
    fn psi_id_is_alpha() {
        let lb = ListBasis::bits(2);
        let p = psi(&gates::id(&FinBasis::product(lb.items(), lb.payload())), &lb).unwrap();
        assert_eq!(classical_rel(&p).unwrap(), alpha(&lb).unwrap());
    }

    #[test]
    fn fused_form_matches_recursion() {
        let lb = ListBasis::bits(2);
        for g in [gates::cnot(), gates::bell(), gates::cond()] {
            let f = StepOp::bits(g).unwrap();
            let direct = materialize(&quantamorphism(&f, lb.basis())).unwrap();
            let fused = materialize(&quantamorphism_via_psi(&f, &lb).unwrap()).unwrap();
            assert!(direct.approx_eq(&fused, 1e-12));
        }
    }

    #[test]
    fn rfold_rejects_uncomplemented_step() {
        let err = Rfold::new(&relalg::and_rel(), &FinBasis::bits(), &FinBasis::bits()).unwrap_err();
        match err {
            QuantaError::NotComplemented(a, b, _) => {
                assert_eq!((a.to_string(), b.to_string()), ("(0,0)".into(), "(0,1)".into()))
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn rfold_matches_cnot_fold() {
        let lb = ListBasis::bits(2);
        let r = Rfold::new(&relalg::xor_rel(), lb.items(), lb.payload()).unwrap();
        assert_eq!(r.run(&[], &Label::bit(true)).unwrap(), (vec![], Label::bit(true)));
        let rel = r.to_rel(lb.basis()).unwrap();
        assert!(rel.is_bijection());
        let q = quantamorphism(&StepOp::bits(gates::cnot()).unwrap(), lb.basis());
        assert_eq!(classical_rel(&q).unwrap(), rel);
    }

    #[test]
    fn quanta_of_id_is_identity() {
        let lb = ListBasis::bits(3);
        let q = quantamorphism(&StepOp::bits(gates::lookup("id").unwrap()).unwrap(), lb.basis());
        assert_eq!(materialize(&q).unwrap(), CMatrix::identity(lb.basis()));
    }

    #[test]
    fn bell_fold_entries() {
        let f = StepOp::bits(gates::bell()).unwrap();
        let v = run_quanta(&f, &"([1],0)".parse().unwrap()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v.get(&"([0],0)".parse().unwrap()) - Amp::new(s, 0.0)).norm() < 1e-15);
        assert!((v.get(&"([1],1)".parse().unwrap()) - Amp::new(-s, 0.0)).norm() < 1e-15);
        assert_eq!(v.support_len(), 2);
    }

    #[test]
    fn pinned16_cnot_materializes() {
        let q = quantamorphism(&StepOp::bits(gates::cnot()).unwrap(), &pinned16());
        let perm = materialize(&q).unwrap().as_permutation(0.0).unwrap();
        assert_eq!(perm[14], 14);
        assert_eq!(perm[15], 15);
    }
}
