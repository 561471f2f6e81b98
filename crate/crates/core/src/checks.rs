//! Seeded property suites, one per module, behind `quantakit check`.
//!
//! Each check runs a fixed number of cases (random with a fixed seed, or
//! exhaustive) and compares the library against a direct oracle.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuitgen::{self, decompose_mcx, parse_qasm, synth_permutation, Circuit, Encoding, Gate};
use crate::gates::{self, choice, choice_direct, id, lift, mccarthy};
use crate::label::Label;
use crate::quanta::{
    self, alpha, alpha_inv, cata_rel, classical_rel, fold_op, psi, quantamorphism, quantamorphism_via_psi,
    split_state, state, ListBasis, Rfold, StepOp,
};
use crate::relalg::{
    self, fst, inj1, inj2, minimal_complements, snd, u_construct, FinBasis, MonoidSpec, Rel,
};
use crate::vecmonad::{bind, kleisli, materialize, ret_op, tensor, Amp, AmpVec, CMatrix, KleisliOp};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub const SUITES: &[&str] = &["relalg", "vecmonad", "gates", "quanta", "circuitgen"];

/// Outcome of one property over all its cases.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn cases(&self) -> usize {
        self.checks.iter().map(|c| c.cases).sum()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed() { "ok  " } else { "FAIL" };
            write!(f, "  {mark} {:<56} {:>6} cases", c.name, c.cases)?;
            if let Some(why) = &c.first_failure {
                write!(f, "  first failure: {why}")?;
            }
            writeln!(f)?;
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        writeln!(
            f,
            "{}: {}/{} checks passed, {} cases",
            self.suite,
            passed,
            self.checks.len(),
            self.cases()
        )
    }
}

/// Runs one suite by name.
pub fn run_suite(name: &str, seed: u64) -> Option<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (suite, checks) = match name {
        "relalg" => ("relalg", relalg_suite(&mut rng)),
        "vecmonad" => ("vecmonad", vecmonad_suite(&mut rng)),
        "gates" => ("gates", gates_suite(&mut rng)),
        "quanta" => ("quanta", quanta_suite(&mut rng)),
        "circuitgen" => ("circuitgen", circuitgen_suite(&mut rng)),
        _ => return None,
    };
    Some(SuiteReport { suite, checks })
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES.iter().map(|s| run_suite(s, seed).unwrap()).collect()
}

/// Random instances shared by the suites.
pub mod gen {
    use super::*;

    pub fn basis(n: usize, tag: &str) -> FinBasis {
        FinBasis::new((0..n).map(|i| Label::atom(format!("{tag}{i}"))).collect()).unwrap()
    }

    pub fn rel(src: &FinBasis, tgt: &FinBasis, rng: &mut impl Rng) -> Rel {
        let cells: Vec<bool> = (0..src.len() * tgt.len()).map(|_| rng.gen_bool(0.4)).collect();
        Rel::from_pred(src, tgt, |b, a| cells[b * src.len() + a])
    }

    pub fn func(src: &FinBasis, tgt: &FinBasis, rng: &mut impl Rng) -> Rel {
        let n = tgt.len();
        let t: Vec<usize> = (0..src.len()).map(|_| rng.gen_range(0..n)).collect();
        Rel::from_index_fn(src, tgt, |a| t[a])
    }

    pub fn amp(rng: &mut impl Rng) -> Amp {
        Amp::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    pub fn vector(b: &FinBasis, rng: &mut impl Rng) -> AmpVec {
        let mut out = Vec::new();
        for l in b.labels() {
            if rng.gen_bool(0.7) {
                out.push((l.clone(), amp(rng)));
            }
        }
        AmpVec::from_pairs(out)
    }

    pub fn matrix(src: &FinBasis, tgt: &FinBasis, rng: &mut impl Rng) -> CMatrix {
        let mut m = CMatrix::zeros(src, tgt);
        for i in 0..tgt.len() {
            for j in 0..src.len() {
                if rng.gen_bool(0.7) {
                    m.set(i, j, amp(rng));
                }
            }
        }
        m
    }

    pub fn op(src: &FinBasis, tgt: &FinBasis, rng: &mut impl Rng) -> KleisliOp {
        matrix(src, tgt, rng).to_op()
    }

    /// Gram-Schmidt on random complex columns.
    pub fn unitary(b: &FinBasis, rng: &mut impl Rng) -> CMatrix {
        let n = b.len();
        let mut cols: Vec<Vec<Amp>> = Vec::with_capacity(n);
        while cols.len() < n {
            let mut v: Vec<Amp> = (0..n).map(|_| amp(rng)).collect();
            for u in &cols {
                let dot: Amp = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                v.iter_mut().zip(u).for_each(|(y, x)| *y -= dot * x);
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                cols.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
        let mut m = CMatrix::zeros(b, b);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, *x);
            }
        }
        m
    }

    pub fn permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        p
    }

    pub fn permutation_matrix(b: &FinBasis, p: &[usize]) -> CMatrix {
        let mut m = CMatrix::zeros(b, b);
        for (j, &i) in p.iter().enumerate() {
            m.set(i, j, Amp::new(1.0, 0.0));
        }
        m
    }
}

fn bits() -> FinBasis {
    FinBasis::bits()
}

fn bb() -> FinBasis {
    FinBasis::product(&bits(), &bits())
}

/// Every function `src -> tgt`, as index tables.
fn all_functions(src: usize, tgt: usize) -> Vec<Vec<usize>> {
    let total = tgt.pow(src as u32);
    (0..total)
        .map(|mut code| {
            (0..src)
                .map(|_| {
                    let d = code % tgt;
                    code /= tgt;
                    d
                })
                .collect()
        })
        .collect()
}

/// Every relation `src -> tgt`.
fn all_relations(src: &FinBasis, tgt: &FinBasis) -> Vec<Rel> {
    let cells = src.len() * tgt.len();
    (0..1u32 << cells)
        .map(|code| Rel::from_pred(src, tgt, |b, a| code >> (b * src.len() + a) & 1 == 1))
        .collect()
}

/// Every set partition of `0..n`, as block-index vectors.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        let blocks = cur.iter().max().map_or(0, |m| m + 1);
        for b in 0..=blocks {
            cur.push(b);
            go(i + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Minimal complements straight from the definition: equivalences `E`
/// with `E ∩ ker f = id`, keeping those with no strictly larger such `E`.
pub fn naive_complements(f: &Rel) -> Vec<Rel> {
    let src = f.src();
    let n = src.len();
    let id = Rel::identity(src);
    let kf = f.kernel();
    let kept: Vec<Rel> = all_partitions(n)
        .into_iter()
        .map(|p| Rel::from_pred(src, src, |i, j| p[i] == p[j]))
        .filter(|e| e.meet(&kf).unwrap() == id)
        .collect();
    kept.iter()
        .filter(|e| !kept.iter().any(|e2| e2 != *e && e.subset(e2).unwrap()))
        .cloned()
        .collect()
}

fn relalg_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut out = Vec::new();

    let mut c = Check::new("compose matches triple-loop definition");
    for i in 0..200 {
        let (a, b, cc) = (gen::basis(5, "a"), gen::basis(5, "b"), gen::basis(5, "c"));
        let s = gen::rel(&a, &b, rng);
        let r = gen::rel(&b, &cc, rng);
        let rs = r.compose(&s).unwrap();
        let ok = (0..5).all(|z| (0..5).all(|x| rs.get(z, x) == (0..5).any(|y| r.get(z, y) && s.get(y, x))));
        c.record(ok, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("converse is an involution");
    for i in 0..100 {
        let r = gen::rel(&gen::basis(3, "a"), &gen::basis(4, "b"), rng);
        c.record(r.converse().converse() == r, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("kernel of a function is an equivalence");
    for i in 0..50 {
        let a = gen::basis(rng.gen_range(1..7), "a");
        let k = gen::func(&a, &gen::basis(3, "b"), rng).kernel();
        let id = Rel::identity(&a);
        let ok = id.subset(&k).unwrap() && k.converse() == k && k.compose(&k).unwrap().subset(&k).unwrap();
        c.record(ok, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("kernel of a split is the meet of kernels");
    for i in 0..200 {
        let a = gen::basis(4, "a");
        let r = gen::rel(&a, &gen::basis(3, "b"), rng);
        let s = gen::rel(&a, &gen::basis(2, "c"), rng);
        let lhs = r.pair(&s).unwrap().kernel();
        let ok = lhs == r.kernel().meet(&s.kernel()).unwrap() && r.pair(&r).unwrap().kernel() == r.kernel();
        c.record(ok, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("junc cancellation and sum definition");
    for i in 0..100 {
        let (a, d, b) = (gen::basis(2, "a"), gen::basis(3, "d"), gen::basis(3, "b"));
        let r = gen::rel(&a, &b, rng);
        let s = gen::rel(&d, &b, rng);
        let j = r.either(&s).unwrap();
        let ok1 = j.compose(&inj1(&a, &d)).unwrap() == r && j.compose(&inj2(&a, &d)).unwrap() == s;
        let e = gen::basis(2, "e");
        let s2 = gen::rel(&d, &e, rng);
        let sum = inj1(&b, &e)
            .compose(&r)
            .unwrap()
            .either(&inj2(&b, &e).compose(&s2).unwrap())
            .unwrap();
        c.record(ok1 && sum == r.sum(&s2), || format!("case {i}"));
    }
    out.push(c);

    // [⟨R,S⟩ | ⟨T,V⟩] = ⟨[R|T], [S|V]⟩ over every relation on 2-element bases
    let mut c = Check::new("exchange law (exhaustive, 2-element bases)");
    let (a, d, b, cc) = (
        gen::basis(2, "a"),
        gen::basis(2, "d"),
        gen::basis(2, "b"),
        gen::basis(2, "c"),
    );
    let ab = all_relations(&a, &b);
    let ac = all_relations(&a, &cc);
    let db = all_relations(&d, &b);
    let dc = all_relations(&d, &cc);
    let mut bad = None;
    let mut cases = 0;
    for r in &ab {
        for t in &db {
            let rt = r.either(t).unwrap();
            for s in &ac {
                let rs = r.pair(s).unwrap();
                for v in &dc {
                    cases += 1;
                    let lhs = rs.either(&t.pair(v).unwrap()).unwrap();
                    let rhs = rt.pair(&s.either(v).unwrap()).unwrap();
                    if lhs != rhs && bad.is_none() {
                        bad = Some(format!("{r:?} {s:?} {t:?} {v:?}"));
                    }
                }
            }
        }
    }
    c.cases = cases;
    if let Some(b) = bad {
        c.failures = 1;
        c.first_failure = Some(b);
    }
    out.push(c);

    // ⟨R,S⟩ ≤ X ⇔ R ≤ X ∧ S ≤ X, and the bounds ! ≤ f ≤ id
    let mut c = Check::new("injectivity preorder laws (exhaustive, 3-element bases)");
    let a3 = gen::basis(3, "a");
    let b3 = gen::basis(3, "b");
    let fns: Vec<Rel> = all_functions(3, 3)
        .into_iter()
        .map(|t| Rel::from_index_fn(&a3, &b3, |i| t[i]))
        .collect();
    let bang = relalg::bang(&a3);
    let ida = Rel::identity(&a3);
    for r in &fns {
        c.record(
            r.leq_injectivity(&ida).unwrap() && bang.leq_injectivity(r).unwrap(),
            || format!("bounds for {r:?}"),
        );
        for s in &fns {
            let rs = r.pair(s).unwrap();
            c.record(
                r.leq_injectivity(&rs).unwrap() && s.leq_injectivity(&rs).unwrap(),
                || format!("split upper bound {r:?} {s:?}"),
            );
            for x in &fns {
                let lhs = rs.leq_injectivity(x).unwrap();
                let rhs = r.leq_injectivity(x).unwrap() && s.leq_injectivity(x).unwrap();
                c.record(lhs == rhs, || format!("{r:?} {s:?} {x:?}"));
            }
        }
    }
    out.push(c);

    let mut c = Check::new("shunting for functions");
    for i in 0..300 {
        let (a, b, cc, d) = (
            gen::basis(rng.gen_range(2..5), "a"),
            gen::basis(rng.gen_range(2..5), "b"),
            gen::basis(rng.gen_range(2..4), "c"),
            gen::basis(rng.gen_range(2..4), "d"),
        );
        let g = gen::func(&a, &b, rng);
        let r = gen::rel(&b, &cc, rng);
        let s = gen::rel(&a, &d, rng);
        let lhs = r.compose(&g).unwrap().leq_injectivity(&s).unwrap();
        let rhs = r.leq_injectivity(&s.compose(&g.converse()).unwrap()).unwrap();
        c.record(lhs == rhs, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("difunctional iff columns equal or disjoint");
    for i in 0..300 {
        let a = gen::basis(4, "a");
        let r = if i % 3 == 0 {
            gen::func(&a, &gen::basis(3, "b"), rng).kernel()
        } else {
            gen::rel(&a, &gen::basis(4, "b"), rng)
        };
        let n = r.tgt().len();
        let col = |j: usize| (0..n).map(|k| r.get(k, j)).collect::<Vec<_>>();
        let oracle = (0..4).all(|x| {
            (0..4).all(|y| {
                let (cx, cy) = (col(x), col(y));
                cx == cy || cx.iter().zip(&cy).all(|(p, q)| !(p & q))
            })
        });
        c.record(r.is_difunctional() == oracle, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("taxonomy on functions");
    for i in 0..200 {
        let n = rng.gen_range(1..5);
        let a = gen::basis(n, "a");
        let f = if i % 2 == 0 {
            let p = gen::permutation(n, rng);
            Rel::from_index_fn(&a, &a, |j| p[j])
        } else {
            gen::func(&a, &a, rng)
        };
        let by_kernels = f.kernel() == Rel::identity(&a) && f.image() == Rel::identity(&a);
        c.record(f.is_function() && f.is_bijection() == by_kernels, || {
            format!("case {i}")
        });
    }
    out.push(c);

    let mut c = Check::new("minimal complements agree with the definition");
    let mut cases: Vec<Rel> = all_functions(4, 2)
        .into_iter()
        .map(|t| Rel::from_index_fn(&bb(), &bits(), |i| t[i]))
        .collect();
    for _ in 0..20 {
        let n = rng.gen_range(3..7);
        cases.push(gen::func(
            &gen::basis(n, "a"),
            &gen::basis(rng.gen_range(1..4), "b"),
            rng,
        ));
    }
    for f in &cases {
        let got = minimal_complements(f, relalg::DEFAULT_COMPLEMENT_LIMIT).unwrap();
        let mut got_k: Vec<Rel> = got.iter().map(|g| g.quotient.kernel()).collect();
        let mut want = naive_complements(f);
        let key = |r: &Rel| r.dump(false);
        got_k.sort_by_key(key);
        want.sort_by_key(key);
        let each_ok = got.iter().all(|g| f.pair(&g.quotient).unwrap().is_injective());
        c.record(got_k == want && each_ok, || format!("{f:?}"));
    }
    out.push(c);

    let mut c = Check::new("U f is a self-inverse bijection, all f : B×B -> B");
    let m = MonoidSpec::xor();
    for t in all_functions(4, 2) {
        let f = Rel::from_index_fn(&bb(), &bits(), |i| t[i]);
        let u = u_construct(&f, &m).unwrap();
        let ok = u.is_bijection() && u.compose(&u).unwrap() == Rel::identity(u.src());
        c.record(ok, || format!("{t:?}"));
    }
    out.push(c);

    let mut c = Check::new("snd ∘ U f ∘ ⟨id, 0⟩ = f");
    for i in 0..50 {
        let a = gen::basis(rng.gen_range(1..5), "a");
        let f = gen::func(&a, &bits(), rng);
        let u = u_construct(&f, &m).unwrap();
        let zero = Rel::from_index_fn(&a, &bits(), |_| 0);
        let inject = Rel::identity(&a).pair(&zero).unwrap();
        let got = snd(&a, &bits()).compose(&u).unwrap().compose(&inject).unwrap();
        c.record(got == f, || format!("case {i}"));
    }
    out.push(c);

    out
}

fn vecmonad_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut out = Vec::new();
    let tol = 1e-12;

    let mut left = Check::new("monad left unit");
    let mut right = Check::new("monad right unit");
    let mut assoc = Check::new("monad associativity");
    for i in 0..1000 {
        let a = gen::basis(rng.gen_range(1..5), "a");
        let b = gen::basis(rng.gen_range(1..5), "b");
        let cc = gen::basis(rng.gen_range(1..5), "c");
        let f = gen::op(&a, &b, rng);
        let g = gen::op(&b, &cc, rng);
        let x = a.label(rng.gen_range(0..a.len())).clone();
        left.record(
            bind(&AmpVec::ret(x.clone()), &f)
                .unwrap()
                .approx_eq(&f.apply(&x).unwrap(), tol),
            || format!("case {i}"),
        );
        let v = gen::vector(&a, rng);
        right.record(bind(&v, &ret_op(&a)).unwrap().approx_eq(&v, tol), || {
            format!("case {i}")
        });
        let lhs = bind(&bind(&v, &f).unwrap(), &g).unwrap();
        let rhs = bind(&v, &kleisli(&g, &f).unwrap()).unwrap();
        assoc.record(lhs.approx_eq(&rhs, tol), || format!("case {i}"));
    }
    out.extend([left, right, assoc]);

    let mut c = Check::new("materialize preserves identity and composition");
    for i in 0..200 {
        let (a, b, cc) = (gen::basis(4, "a"), gen::basis(4, "b"), gen::basis(4, "c"));
        let f = gen::op(&a, &b, rng);
        let g = gen::op(&b, &cc, rng);
        let lhs = materialize(&kleisli(&g, &f).unwrap()).unwrap();
        let rhs = materialize(&g)
            .unwrap()
            .matmul(&materialize(&f).unwrap())
            .unwrap();
        let ok = lhs.approx_eq(&rhs, 1e-12) && materialize(&ret_op(&a)).unwrap() == CMatrix::identity(&a);
        c.record(ok, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("tensor materializes to the Kronecker product");
    for i in 0..200 {
        let (a, b) = (
            gen::basis(rng.gen_range(1..4), "a"),
            gen::basis(rng.gen_range(1..4), "b"),
        );
        let (cc, d) = (
            gen::basis(rng.gen_range(1..4), "c"),
            gen::basis(rng.gen_range(1..4), "d"),
        );
        let f = gen::matrix(&a, &b, rng);
        let g = gen::matrix(&cc, &d, rng);
        let t = materialize(&tensor(&f.to_op(), &g.to_op())).unwrap();
        // entry ((i,k),(j,l)) = f[i][j] g[k][l]
        let ok = (0..b.len()).all(|i| {
            (0..d.len()).all(|k| {
                (0..a.len()).all(|j| {
                    (0..cc.len()).all(|l| {
                        let got = t.get(i * d.len() + k, j * cc.len() + l);
                        (got - f.get(i, j) * g.get(k, l)).norm() <= 1e-12
                    })
                })
            })
        });
        c.record(ok, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("unitaries closed under composition and tensor");
    for i in 0..100 {
        let a = gen::basis(rng.gen_range(1..5), "a");
        let b = gen::basis(rng.gen_range(1..4), "b");
        let u = gen::unitary(&a, rng).to_op();
        let v = gen::unitary(&a, rng).to_op();
        let w = gen::unitary(&b, rng).to_op();
        let ok = materialize(&kleisli(&u, &v).unwrap())
            .unwrap()
            .is_unitary(1e-9)
            .unwrap()
            && materialize(&tensor(&u, &w)).unwrap().is_unitary(1e-9).unwrap();
        c.record(ok, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("pruning does not change comparisons at 1e-11");
    for i in 0..200 {
        let a = gen::basis(4, "a");
        let v = gen::vector(&a, rng);
        let noise = AmpVec::from_pairs(Vec::new());
        let tiny: Vec<(Label, Amp)> = a
            .labels()
            .iter()
            .map(|l| (l.clone(), Amp::new(rng.gen_range(-1.0..1.0) * 5e-13, 0.0)))
            .collect();
        let perturbed = v.add(&AmpVec::from_pairs(tiny.clone()));
        let raw_diff = tiny.iter().map(|(_, x)| x.norm()).fold(0.0, f64::max);
        let ok = perturbed.approx_eq(&v, 1e-11) && raw_diff < 1e-11 && noise.is_zero();
        c.record(ok, || format!("case {i}"));
    }
    out.push(c);

    out
}

fn gates_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut out = Vec::new();
    let m = |op: &KleisliOp| materialize(op).unwrap();

    let mut c = Check::new("every library gate is unitary");
    for (name, ok) in gates::check_library(1e-9).unwrap() {
        c.record(ok, || name.to_string());
    }
    out.push(c);

    let mut c = Check::new("cnot as split equals cnot as choice");
    c.record(
        m(&lift(&relalg::cnot_rel()).unwrap()) == m(&choice(&id(&bits()), &gates::x()).unwrap()),
        || "cnot".into(),
    );
    out.push(c);

    let mut c = Check::new("ccnot from U(and) equals pointwise listing");
    let bbb = FinBasis::product(&bb(), &bits());
    let listing = gates::lift_fn(&bbb, &bbb, |l| {
        let (ab, cbit) = l.as_pair().unwrap();
        let (a, b) = ab.as_pair().unwrap();
        let fire = a.as_bit().unwrap() && b.as_bit().unwrap();
        Label::pair(ab.clone(), Label::bit(cbit.as_bit().unwrap() ^ fire))
    })
    .unwrap();
    c.record(m(&gates::ccnot()) == m(&listing), || "ccnot".into());
    out.push(c);

    let mut c = Check::new("choice of classical bijections is a permutation");
    let perms2: Vec<KleisliOp> = all_functions(2, 2)
        .into_iter()
        .filter(|t| t[0] != t[1])
        .map(|t| lift(&Rel::from_index_fn(&bits(), &bits(), |i| t[i])).unwrap())
        .collect();
    let perms4: Vec<KleisliOp> = (0..24)
        .map(|k| {
            let p = nth_permutation(4, k);
            lift(&Rel::from_index_fn(&bb(), &bb(), |i| p[i])).unwrap()
        })
        .collect();
    for set in [&perms2, &perms4] {
        for f in set.iter() {
            for g in set.iter() {
                let ok = m(&choice(f, g).unwrap()).as_permutation(0.0).is_some();
                c.record(ok, || format!("{f:?} {g:?}"));
            }
        }
    }
    out.push(c);

    let mut c = Check::new("choice(f,f) = id ⊗ f; choice agrees with direct-sum form");
    for i in 0..50 {
        let a = if i % 2 == 0 { bits() } else { bb() };
        let f = gen::unitary(&a, rng).to_op();
        let g = gen::unitary(&a, rng).to_op();
        let same = m(&choice(&f, &f).unwrap()).approx_eq(&m(&tensor(&id(&bits()), &f)), 1e-12);
        let direct = m(&choice(&f, &g).unwrap()).approx_eq(&m(&choice_direct(&f, &g).unwrap()), 1e-12);
        c.record(same && direct, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("McCarthy conditional of unitaries is unitary");
    for i in 0..100 {
        let p = gen::unitary(&bits(), rng).to_op();
        let f = gen::unitary(&bits(), rng).to_op();
        let g = gen::unitary(&bits(), rng).to_op();
        let mc = m(&mccarthy(&p, &f, &g).unwrap());
        let swapped =
            m(&mccarthy(&id(&bits()), &f, &g).unwrap()).approx_eq(&m(&choice(&g, &f).unwrap()), 1e-12);
        c.record(mc.is_unitary(1e-9).unwrap() && swapped, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("cond combinator equals its listing");
    c.record(
        m(&gates::cond()).approx_eq(&m(&gates::cond_listing()), 1e-12),
        || "cond".into(),
    );
    out.push(c);

    let mut c = Check::new("alice = (B†⊗I)·A·(I⊗B)");
    let bell = m(&gates::bell());
    let i2 = CMatrix::identity(&bits());
    let assoc = m(&gates::assoc(&bits(), &bits(), &bits()));
    let want = bell
        .dagger()
        .kron(&i2)
        .matmul(&assoc.matmul(&i2.kron(&bell)).unwrap())
        .unwrap();
    let got = m(&gates::alice());
    c.record(
        got.approx_eq(&want, 1e-12) && got.is_unitary(1e-9).unwrap(),
        || "alice".into(),
    );
    out.push(c);

    out
}

/// The `k`-th permutation of `0..n` in lexicographic order.
fn nth_permutation(n: usize, mut k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for i in (1..=n).rev() {
        let f: usize = (1..i).product();
        out.push(pool.remove(k / f));
        k %= f;
    }
    out
}

fn map_k_times_id(k: &Rel, src: &ListBasis, tgt: &ListBasis) -> KleisliOp {
    let k = k.clone();
    gates::lift_fn(src.basis(), tgt.basis(), move |l| {
        let (xs, b) = split_state(l).unwrap();
        state(xs.iter().map(|x| k.apply(x).unwrap()).collect(), b.clone())
    })
    .unwrap()
}

fn quanta_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut out = Vec::new();
    let lb2 = ListBasis::bits(2);
    let m = |op: &KleisliOp| materialize(op).unwrap();

    let steps: Vec<(String, KleisliOp)> = {
        let mut v: Vec<(String, KleisliOp)> = ["cnot", "bell", "unbell", "cond", "id"]
            .iter()
            .map(|n| (n.to_string(), gates::lookup(n).unwrap()))
            .collect();
        for i in 0..20 {
            v.push((format!("random unitary {i}"), gen::unitary(&bb(), rng).to_op()));
        }
        v
    };

    let mut c = Check::new("quantamorphism preserves unitarity (20 random steps)");
    for (name, f) in steps.iter().filter(|(n, _)| n.starts_with("random")) {
        let q = quantamorphism(&StepOp::bits(f.clone()).unwrap(), lb2.basis());
        c.record(m(&q).is_unitary(1e-9).unwrap(), || name.clone());
    }
    out.push(c);

    let mut c = Check::new("quantamorphism preserves list length");
    for (name, f) in &steps {
        let q = quantamorphism(&StepOp::bits(f.clone()).unwrap(), lb2.basis());
        let ok = lb2.basis().labels().iter().all(|l| {
            let n = split_state(l).unwrap().0.len();
            q.apply(l)
                .unwrap()
                .iter()
                .all(|(o, _)| split_state(o).unwrap().0.len() == n)
        });
        c.record(ok, || name.clone());
    }
    out.push(c);

    let mut c = Check::new("reflexion: quantamorphism of id is id");
    for n in 0..4 {
        let lb = ListBasis::bits(n);
        let q = quantamorphism(&StepOp::bits(id(&bb())).unwrap(), lb.basis());
        c.record(m(&q) == CMatrix::identity(lb.basis()), || format!("maxlen {n}"));
        let alpha_fn = |l: &Label| -> quanta::Result<Label> {
            match l {
                Label::Inl(b) => Ok(state(vec![], (**b).clone())),
                Label::Inr(htb) => {
                    let (h, tb) = htb.as_pair().unwrap();
                    quanta::cons(h, tb, n)
                }
                _ => unreachable!(),
            }
        };
        let r = cata_rel(&alpha_fn, lb.basis(), lb.basis()).unwrap();
        c.record(r == Rel::identity(lb.basis()), || {
            format!("classical, maxlen {n}")
        });
    }
    out.push(c);

    let mut c = Check::new("fused Ψ form equals direct recursion");
    for (name, f) in &steps {
        let step = StepOp::bits(f.clone()).unwrap();
        let direct = m(&quantamorphism(&step, lb2.basis()));
        let fused = m(&quantamorphism_via_psi(&step, &lb2).unwrap());
        c.record(direct.approx_eq(&fused, 1e-12), || name.clone());
    }
    out.push(c);

    let mut c = Check::new("Ψ id = α");
    for n in 1..4 {
        let lb = ListBasis::bits(n);
        let p = psi(&id(&bb()), &lb).unwrap();
        c.record(classical_rel(&p).unwrap() == alpha(&lb).unwrap(), || {
            format!("maxlen {n}")
        });
        let a = alpha(&lb).unwrap();
        c.record(
            a.compose(&alpha_inv(&lb).unwrap()).unwrap() == Rel::identity(lb.basis()),
            || format!("α∘α° maxlen {n}"),
        );
    }
    out.push(c);

    let mut c = Check::new("free theorems for classical k");
    for t in all_functions(2, 2) {
        let k = Rel::from_index_fn(&bits(), &bits(), |i| t[i]);
        let mapk = map_k_times_id(&k, &lb2, &lb2);
        let kx = lift(&k.product(&Rel::identity(&bits()))).unwrap();
        for (name, f) in &steps {
            let lhs = m(&kleisli(&fold_op(f, lb2.basis(), lb2.basis()), &mapk).unwrap());
            let rhs = m(&fold_op(&kleisli(f, &kx).unwrap(), lb2.basis(), lb2.basis()));
            c.record(lhs.approx_eq(&rhs, 1e-12), || format!("pre-map {t:?} {name}"));
            let lhs = m(&kleisli(&mapk, &fold_op(f, lb2.basis(), lb2.basis())).unwrap());
            let rhs = m(&fold_op(&kleisli(&kx, f).unwrap(), lb2.basis(), lb2.basis()));
            c.record(lhs.approx_eq(&rhs, 1e-12), || format!("post-map {t:?} {name}"));
        }
    }
    out.push(c);

    // ⟨⦇h1⦈, ⦇h2⦈⟩ = ⦇⟨h1 ∘ (id + id × fst), h2 ∘ (id + id × snd)⟩⦈
    let mut c = Check::new("banana split (exhaustive h1, h2 : B + B×B -> B)");
    let dom = FinBasis::coproduct(&bits(), &bb());
    let hs: Vec<Rel> = all_functions(dom.len(), 2)
        .into_iter()
        .map(|t| Rel::from_index_fn(&dom, &bits(), |i| t[i]))
        .collect();
    let cc = bb();
    let cata_of = |h: &Rel| {
        let h = h.clone();
        cata_rel(&move |l: &Label| Ok(h.apply(l)?), lb2.basis(), &bits()).unwrap()
    };
    let catas: Vec<Rel> = hs.iter().map(cata_of).collect();
    for (i, h1) in hs.iter().enumerate() {
        for (j, h2) in hs.iter().enumerate() {
            let both = |l: &Label| -> quanta::Result<Label> {
                Ok(match l {
                    Label::Inl(_) => Label::pair(h1.apply(l)?, h2.apply(l)?),
                    Label::Inr(ac) => {
                        let (a, c12) = ac.as_pair().unwrap();
                        let (c1, c2) = c12.as_pair().unwrap();
                        Label::pair(
                            h1.apply(&Label::inr(Label::pair(a.clone(), c1.clone())))?,
                            h2.apply(&Label::inr(Label::pair(a.clone(), c2.clone())))?,
                        )
                    }
                    _ => unreachable!(),
                })
            };
            let fused = cata_rel(&both, lb2.basis(), &cc).unwrap();
            c.record(catas[i].pair(&catas[j]).unwrap() == fused, || {
                format!("h1 #{i}, h2 #{j}")
            });
        }
    }
    out.push(c);

    let mut c = Check::new("fst is the fold of in");
    for n in 0..4 {
        let lb = ListBasis::bits(n);
        let into = |l: &Label| -> quanta::Result<Label> {
            Ok(match l {
                Label::Inl(_) => Label::List(vec![]),
                Label::Inr(at) => {
                    let (a, t) = at.as_pair().unwrap();
                    let mut v = vec![a.clone()];
                    v.extend_from_slice(t.as_list().unwrap());
                    Label::List(v)
                }
                _ => unreachable!(),
            })
        };
        let r = cata_rel(&into, lb.basis(), lb.lists()).unwrap();
        c.record(r == fst(lb.lists(), lb.payload()), || format!("maxlen {n}"));
    }
    out.push(c);

    let mut c = Check::new("fst-complementation promotes to the fold (exhaustive)");
    let mut complemented = 0;
    for t in all_functions(4, 2) {
        let f = Rel::from_index_fn(&bb(), &bits(), |i| t[i]);
        let Ok(r) = Rfold::new(&f, &bits(), &bits()) else {
            continue;
        };
        complemented += 1;
        for n in 1..4 {
            let lb = ListBasis::bits(n);
            let rel = r.to_rel(lb.basis()).unwrap();
            c.record(rel.is_injective(), || format!("{t:?} maxlen {n}"));
        }
    }
    c.record(complemented == 4, || {
        format!("{complemented} complemented steps, expected 4")
    });
    out.push(c);

    let mut c = Check::new("Ψ and the fold preserve injectivity (all 24 bijections)");
    for k in 0..24 {
        let p = nth_permutation(4, k);
        let x = lift(&Rel::from_index_fn(&bb(), &bb(), |i| p[i])).unwrap();
        for n in 1..3 {
            let lb = ListBasis::bits(n);
            let ps = classical_rel(&psi(&x, &lb).unwrap()).unwrap();
            c.record(ps.is_injective() && ps.is_function(), || {
                format!("Ψ {p:?} maxlen {n}")
            });
            let q = classical_rel(&quantamorphism(&StepOp::bits(x.clone()).unwrap(), lb.basis())).unwrap();
            c.record(q.is_injective() && q.is_function(), || {
                format!("fold {p:?} maxlen {n}")
            });
        }
    }
    out.push(c);

    // a° ∘ (id × snd) ∘ β = xl ∘ (snd × id) ∘ β, with β = ⟨id × fst, id × snd⟩
    let mut c = Check::new("associator/exchange identity on 3-bit basis");
    let b = bits();
    let idb = Rel::identity(&b);
    let beta = idb
        .product(&fst(&b, &b))
        .pair(&idb.product(&snd(&b, &b)))
        .unwrap();
    let lhs = quanta::assoc_rel(&b, &b, &b)
        .converse()
        .compose(&Rel::identity(&bb()).product(&snd(&b, &b)))
        .unwrap()
        .compose(&beta)
        .unwrap();
    let rhs = quanta::xl_rel(&b, &b, &b)
        .compose(&snd(&b, &b).product(&Rel::identity(&bb())))
        .unwrap()
        .compose(&beta)
        .unwrap();
    c.record(lhs == rhs, || "β form".into());
    let xl = quanta::xl_rel(&b, &b, &b);
    c.record(xl.compose(&xl).unwrap() == Rel::identity(xl.src()), || {
        "xl involutive".into()
    });
    out.push(c);

    let mut c = Check::new("rfold of xor equals the cnot fold");
    let r = Rfold::new(&relalg::xor_rel(), &b, &b).unwrap();
    for n in 0..4 {
        let lb = ListBasis::bits(n);
        let q = classical_rel(&quantamorphism(&StepOp::bits(gates::cnot()).unwrap(), lb.basis())).unwrap();
        let rel = r.to_rel(lb.basis()).unwrap();
        c.record(q == rel && rel.is_bijection(), || format!("maxlen {n}"));
    }
    out.push(c);

    out
}

fn circuitgen_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut out = Vec::new();

    let mut c = Check::new("synthesized permutations are exact, ancillas clean");
    let mut q = Check::new("QASM export parses back to the same circuit");
    for k in 1..=5usize {
        let basis = gen::basis(1 << k, "s");
        let enc = Encoding::natural(&basis).unwrap();
        for i in 0..12 {
            let p = gen::permutation(1 << k, rng);
            let mtx = gen::permutation_matrix(&basis, &p);
            let circ = synth_permutation(&mtx, &enc).unwrap();
            let ok = circuitgen::verify_permutation(&circ, &mtx, &enc).unwrap_or(false);
            c.record(ok, || format!("k={k} case {i} {p:?}"));
            let back = parse_qasm(&circ.export_qasm().unwrap()).unwrap();
            q.record(back == circ, || format!("k={k} case {i}"));
        }
    }
    out.push(c);

    let mut c = Check::new("MCX decomposition truth tables (≤6 controls)");
    for n in 0..=6usize {
        let anc = n.saturating_sub(2);
        let data = n + 1;
        let ancillas: Vec<usize> = (data..data + anc).collect();
        for pol in 0..1u32 << n {
            let controls: Vec<(usize, bool)> = (0..n).map(|i| (i, pol >> i & 1 == 1)).collect();
            let gates = decompose_mcx(&controls, n, &ancillas).unwrap();
            let only_basic = gates
                .iter()
                .all(|g| matches!(g, Gate::X(_) | Gate::CX(..) | Gate::CCX(..)));
            let circ = Circuit {
                data_qubits: data,
                ancilla_qubits: anc,
                gates,
            };
            let ok = only_basic
                && (0..1u64 << data).all(|s| {
                    let fire = controls.iter().all(|(q, p)| (s >> q & 1 == 1) == *p);
                    circ.simulate(s).ok() == Some(if fire { s ^ 1 << n } else { s })
                });
            c.record(ok, || format!("{n} controls, polarity {pol:b}"));
        }
    }
    out.push(c);

    let mut c = Check::new("peephole preserves semantics");
    for i in 0..100 {
        let k = rng.gen_range(2..5);
        let mut circ = Circuit::new(k, 0);
        for _ in 0..rng.gen_range(5..30) {
            let qs = gen::permutation(k, rng);
            let g = match rng.gen_range(0..3) {
                0 => Gate::X(qs[0]),
                1 => Gate::CX(qs[0], qs[1]),
                _ if k >= 3 => Gate::CCX(qs[0], qs[1], qs[2]),
                _ => Gate::CX(qs[1], qs[0]),
            };
            // duplicate some gates so there is something to cancel
            if rng.gen_bool(0.3) {
                circ.gates.push(g.clone());
            }
            circ.gates.push(g);
        }
        let opt = circ.peephole();
        let ok = opt.gates.len() <= circ.gates.len()
            && (0..1u64 << k).all(|s| opt.simulate(s).unwrap() == circ.simulate(s).unwrap());
        c.record(ok, || format!("case {i}"));
    }
    out.push(c);

    let mut c = Check::new("state simulation matches matrix action");
    for i in 0..40 {
        let k = rng.gen_range(1..5);
        let basis = gen::basis(1 << k, "s");
        let enc = Encoding::natural(&basis).unwrap();
        let p = gen::permutation(1 << k, rng);
        let mtx = gen::permutation_matrix(&basis, &p);
        let circ = synth_permutation(&mtx, &enc).unwrap();
        let v = gen::vector(&basis, rng);
        let want = enc.encode_vec(&mtx.apply_vec(&v).unwrap()).unwrap();
        let got = circ.simulate_state(&enc.encode_vec(&v).unwrap()).unwrap();
        c.record(got.approx_eq(&want, 1e-12), || format!("case {i}"));
    }
    // non-classical gates against the bell matrix on the natural 2-bit encoding
    let enc = Encoding::natural(&bb()).unwrap();
    let bell_m = materialize(&gates::bell()).unwrap();
    let bell_c = Circuit {
        data_qubits: 2,
        ancilla_qubits: 0,
        gates: vec![Gate::H(0), Gate::CX(0, 1)],
    };
    for i in 0..20 {
        let v = gen::vector(&bb(), rng);
        let want = enc.encode_vec(&bell_m.apply_vec(&v).unwrap()).unwrap();
        let got = bell_c.simulate_state(&enc.encode_vec(&v).unwrap()).unwrap();
        c.record(got.approx_eq(&want, 1e-12), || format!("bell case {i}"));
    }
    let tt = Circuit {
        data_qubits: 1,
        ancilla_qubits: 0,
        gates: vec![Gate::T(0), Gate::Tdg(0), Gate::H(0), Gate::H(0)],
    };
    let one = AmpVec::ret(Label::atom("1"));
    c.record(tt.simulate_state(&one).unwrap().approx_eq(&one, 1e-12), || {
        "T Tdg H H".into()
    });
    out.push(c);
    out.push(q);

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_count_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(all_partitions(n).len(), b);
        }
    }

    #[test]
    fn nth_permutation_enumerates() {
        let mut all: Vec<Vec<usize>> = (0..24).map(|k| nth_permutation(4, k)).collect();
        all.dedup();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], vec![0, 1, 2, 3]);
        assert_eq!(all[23], vec![3, 2, 1, 0]);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = gen::unitary(&gen::basis(5, "a"), &mut rng);
        assert!(u.is_unitary(1e-12).unwrap());
    }

    #[test]
    fn naive_complements_of_xor() {
        assert_eq!(naive_complements(&relalg::xor_rel()).len(), 2);
    }
}
