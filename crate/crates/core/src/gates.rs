//! Gates and control combinators as Kleisli operations on bit bases.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::sync::Arc;

use crate::label::Label;
use crate::relalg::{self, FinBasis, MonoidSpec, Rel};
use crate::vecmonad::{
    self, direct_sum, kleisli, materialize, ret_op, seq, tensor, Amp, AmpVec, KleisliOp, VecError,
};

pub type Result<T> = std::result::Result<T, VecError>;

fn b() -> FinBasis {
    FinBasis::bits()
}

fn bb() -> FinBasis {
    FinBasis::product(&b(), &b())
}

fn bit(l: &Label) -> bool {
    l.as_bit().expect("bit label")
}

/// `f' = ret ∘ f` for a function given as a relation.
pub fn lift(f: &Rel) -> Result<KleisliOp> {
    let table = Arc::new(f.fn_table()?);
    let (src, tgt) = (f.src().clone(), f.tgt().clone());
    let t2 = tgt.clone();
    let s2 = src.clone();
    Ok(KleisliOp::new(&src, &tgt, move |a| {
        let j = s2.index_of(a).expect("checked by apply");
        Ok(AmpVec::ret(t2.label(table[j]).clone()))
    }))
}

/// Lifts a label-level function; fails if it leaves `tgt`.
pub fn lift_fn(src: &FinBasis, tgt: &FinBasis, f: impl Fn(&Label) -> Label) -> Result<KleisliOp> {
    lift(&Rel::from_fn(src, tgt, f)?)
}

pub fn id(basis: &FinBasis) -> KleisliOp {
    ret_op(basis)
}

/// The X gate.
pub fn x() -> KleisliOp {
    lift(&relalg::not_rel()).unwrap()
}

/// Hadamard: `had 0 = (|0⟩+|1⟩)/√2`, `had 1 = (|0⟩−|1⟩)/√2`.
pub fn had() -> KleisliOp {
    KleisliOp::new(&b(), &b(), |a| {
        let s = if bit(a) { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
        Ok(AmpVec::from_pairs([
            (Label::bit(false), Amp::new(FRAC_1_SQRT_2, 0.0)),
            (Label::bit(true), Amp::new(s, 0.0)),
        ]))
    })
}

/// `T = diag(1, e^{iπ/4})`.
pub fn tgate() -> KleisliOp {
    KleisliOp::new(&b(), &b(), |a| {
        let k = if bit(a) {
            Amp::from_polar(1.0, FRAC_PI_4)
        } else {
            Amp::new(1.0, 0.0)
        };
        Ok(AmpVec::from_pairs([(a.clone(), k)]))
    })
}

/// `cnot (a,b) = (a, a xor b)`.
pub fn cnot() -> KleisliOp {
    lift(&relalg::cnot_rel()).unwrap()
}

/// `ccnot ((a,b),c) = ((a,b), (a ∧ b) xor c)`.
pub fn ccnot() -> KleisliOp {
    lift(&relalg::u_construct(&relalg::and_rel(), &MonoidSpec::xor()).unwrap()).unwrap()
}

/// `bell (a,b) = do { x ← had a; ret (cnot (x,b)) }`.
pub fn bell() -> KleisliOp {
    kleisli(&cnot(), &tensor(&had(), &id(&b()))).unwrap()
}

/// `(H ⊗ id) ∘ cnot`, the inverse of [`bell`].
pub fn unbell() -> KleisliOp {
    kleisli(&tensor(&had(), &id(&b())), &cnot()).unwrap()
}

/// `a : A × (B × C) -> (A × B) × C`.
pub fn assoc(a: &FinBasis, b: &FinBasis, c: &FinBasis) -> KleisliOp {
    let src = FinBasis::product(a, &FinBasis::product(b, c));
    let tgt = FinBasis::product(&FinBasis::product(a, b), c);
    lift_fn(&src, &tgt, |l| {
        let (x, yz) = l.as_pair().unwrap();
        let (y, z) = yz.as_pair().unwrap();
        Label::pair(Label::pair(x.clone(), y.clone()), z.clone())
    })
    .unwrap()
}

/// `(unbell ⊗ id) ∘ assoc ∘ (id ⊗ bell) : B × (B × B) -> (B × B) × B`.
pub fn alice() -> KleisliOp {
    seq(&[
        &tensor(&id(&b()), &bell()),
        &assoc(&b(), &b(), &b()),
        &tensor(&unbell(), &id(&b())),
    ])
    .unwrap()
}

/// `[f|g] : A + A' -> Vec C`.
pub fn junc(f: &KleisliOp, g: &KleisliOp) -> Result<KleisliOp> {
    if f.tgt() != g.tgt() {
        return Err(vecmonad::mismatch("junc", f.tgt(), g.tgt()));
    }
    let src = FinBasis::coproduct(f.src(), g.src());
    let (f, g) = (f.clone(), g.clone());
    Ok(KleisliOp::new(&src, &f.tgt().clone(), move |l| match l {
        Label::Inl(a) => f.apply(a),
        Label::Inr(a) => g.apply(a),
        _ => unreachable!("coproduct label"),
    }))
}

/// `f ⋄ g = (id ⊗ [f|g]) ∘ ⟨fst, γ°⟩ : B × A -> B × C`.
///
/// `f` acts on the payload when the control is 0, `g` when it is 1. The
/// control is never inspected by an `if`: γ° routes the payload into the
/// left or right summand, so superposed controls stay linear.
pub fn choice(f: &KleisliOp, g: &KleisliOp) -> Result<KleisliOp> {
    if f.src() != g.src() {
        return Err(vecmonad::mismatch("choice", f.src(), g.src()));
    }
    let a = f.src().clone();
    let gamma = relalg::gamma(&a);
    let route = relalg::fst(&b(), &a).pair(&gamma.converse())?;
    seq(&[&lift(&route)?, &tensor(&id(&b()), &junc(f, g)?)])
}

/// McCarthy conditional `p → f, g`: prepare the control with `p`, then run
/// `f` where it reads 1 and `g` where it reads 0.
pub fn mccarthy(p: &KleisliOp, f: &KleisliOp, g: &KleisliOp) -> Result<KleisliOp> {
    if p.src() != &b() || p.tgt() != &b() {
        return Err(vecmonad::mismatch("mccarthy", p.src(), &b()));
    }
    let prep = tensor(p, &id(f.src()));
    seq(&[&prep, &choice(g, f)?])
}

/// `H → X, H`.
pub fn cond() -> KleisliOp {
    mccarthy(&had(), &x(), &had()).unwrap()
}

/// `cond (q,p) = do { q' ← had q; p' ← if q' then ret (¬p) else had p; ret (q',p') }`,
/// written pointwise rather than through [`mccarthy`].
pub fn cond_listing() -> KleisliOp {
    let (h, not) = (had(), x());
    KleisliOp::new(&bb(), &bb(), move |qp| {
        let (q, p) = qp.as_pair().unwrap();
        let mut out = Vec::new();
        for (q2, a) in h.apply(q)?.iter() {
            let branch = if bit(q2) { not.apply(p)? } else { h.apply(p)? };
            for (p2, c) in branch.iter() {
                out.push((Label::pair(q2.clone(), p2.clone()), a * c));
            }
        }
        Ok(AmpVec::from_pairs(out))
    })
}

/// `γ ∘ (f ⊕ g) ∘ γ°`: the same control, written as a direct sum of the
/// two branches.
pub fn choice_direct(f: &KleisliOp, g: &KleisliOp) -> Result<KleisliOp> {
    let split = lift(&relalg::gamma(f.src()).converse())?;
    let join = lift(&relalg::gamma(f.tgt()))?;
    seq(&[&split, &direct_sum(f, g), &join])
}

/// Names accepted by [`lookup`].
pub const GATE_NAMES: &[&str] = &[
    "x", "h", "t", "id", "cnot", "ccnot", "bell", "unbell", "alice", "cond",
];

/// Looks up a library gate. `id` is the identity on `bit × bit`.
pub fn lookup(name: &str) -> Option<KleisliOp> {
    Some(match name {
        "x" => x(),
        "h" => had(),
        "t" => tgate(),
        "id" => id(&bb()),
        "cnot" => cnot(),
        "ccnot" => ccnot(),
        "bell" => bell(),
        "unbell" => unbell(),
        "alice" => alice(),
        "cond" => cond(),
        _ => return None,
    })
}

/// Materializes every library gate and checks unitarity.
pub fn check_library(tol: f64) -> Result<Vec<(&'static str, bool)>> {
    GATE_NAMES
        .iter()
        .map(|&n| Ok((n, materialize(&lookup(n).unwrap())?.is_unitary(tol)?)))
        .collect()
}
