//! Reversible circuit synthesis for permutation matrices, simulation, and
//! OpenQASM 2.0 export.
//!
//! Bit strings are written qubit 0 first: in `0110`, qubit 0 is `0` and
//! qubit 3 is `0`. Internally a basis state is a `u64` with qubit `q` at bit
//! `q`. Data qubits are `0..k`; ancillas follow at `k..k+m`.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::label::Label;
use crate::relalg::FinBasis;
use crate::vecmonad::{Amp, AmpVec, CMatrix, DEFAULT_TOL, PRUNE_EPS};

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("general unitary synthesis is out of scope: the matrix is not a permutation")]
    OutOfScope,
    #[error("basis of {0} states is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("matrix bases do not match the encoding")]
    BasisMismatch,
    #[error("label {0} has no encoding")]
    Unencoded(Label),
    #[error("multi-controlled X with {controls} controls needs {need} ancillas, {have} available")]
    InsufficientAncillas {
        controls: usize,
        need: usize,
        have: usize,
    },
    #[error("ancillas not restored on input {input}: final state {state}")]
    DirtyAncilla { input: String, state: String },
    #[error("circuit output on {0} is not a basis state")]
    NotClassical(String),
    #[error("multi-controlled X must be decomposed before export")]
    UndecomposedMcx,
    #[error("qubit {qubit} out of range for {width} qubits")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("input {got:?} should have {want} bits")]
    Width { got: String, want: usize },
    #[error("qasm line {line}: {msg}")]
    Qasm { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, CircuitError>;

/// Renders the low `k` bits, qubit 0 first.
pub fn bits_to_string(s: u64, k: usize) -> String {
    (0..k).map(|q| if s >> q & 1 == 1 { '1' } else { '0' }).collect()
}

/// Parses a string of `0`/`1`, qubit 0 first.
pub fn parse_bits(s: &str, k: usize) -> Result<u64> {
    let bad = || CircuitError::Width {
        got: s.to_string(),
        want: k,
    };
    if s.len() != k {
        return Err(bad());
    }
    s.chars().enumerate().try_fold(0u64, |acc, (q, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << q),
        _ => Err(bad()),
    })
}

/// A bijection between basis labels and `k`-bit strings.
#[derive(Clone, Debug)]
pub struct Encoding {
    basis: FinBasis,
    k: usize,
}

impl Encoding {
    /// Index `i` of the basis gets the `k`-bit binary numeral of `i`, most
    /// significant bit on qubit 0. For [`crate::quanta::pinned16`] this gives
    /// `0000 -> ([],0)`, `0001 -> ([],1)`, ..., `1111 -> ([0,0,0],1)`.
    pub fn natural(basis: &FinBasis) -> Result<Self> {
        let n = basis.len();
        if !n.is_power_of_two() {
            return Err(CircuitError::NotPowerOfTwo(n));
        }
        Ok(Encoding {
            basis: basis.clone(),
            k: n.trailing_zeros() as usize,
        })
    }

    pub fn width(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &FinBasis {
        &self.basis
    }

    fn index_to_state(&self, i: usize) -> u64 {
        (0..self.k).fold(0, |s, q| s | (((i >> (self.k - 1 - q)) & 1) as u64) << q)
    }

    fn state_to_index(&self, s: u64) -> usize {
        (0..self.k).fold(0, |i, q| i | ((s >> q & 1) as usize) << (self.k - 1 - q))
    }

    pub fn encode(&self, l: &Label) -> Result<u64> {
        let i = self
            .basis
            .index_of(l)
            .ok_or_else(|| CircuitError::Unencoded(l.clone()))?;
        Ok(self.index_to_state(i))
    }

    pub fn decode(&self, s: u64) -> &Label {
        self.basis.label(self.state_to_index(s))
    }

    /// Rewrites a vector over basis labels as one over bit-string labels.
    pub fn encode_vec(&self, v: &AmpVec) -> Result<AmpVec> {
        let pairs = v
            .iter()
            .map(|(l, a)| Ok((Label::atom(bits_to_string(self.encode(l)?, self.k)), *a)))
            .collect::<Result<Vec<_>>>()?;
        Ok(AmpVec::from_pairs(pairs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    X(usize),
    CX(usize, usize),
    CCX(usize, usize, usize),
    H(usize),
    T(usize),
    Tdg(usize),
    /// Controls with polarity (`true` fires on 1), then the target.
    MCX(Vec<(usize, bool)>, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(t) | Gate::H(t) | Gate::T(t) | Gate::Tdg(t) => vec![*t],
            Gate::CX(c, t) => vec![*c, *t],
            Gate::CCX(a, b, t) => vec![*a, *b, *t],
            Gate::MCX(cs, t) => cs.iter().map(|c| c.0).chain([*t]).collect(),
        }
    }

    fn is_classical(&self) -> bool {
        !matches!(self, Gate::H(_) | Gate::T(_) | Gate::Tdg(_))
    }

    fn is_self_inverse(&self) -> bool {
        !matches!(self, Gate::T(_) | Gate::Tdg(_))
    }

    /// Same gate up to the order of CCX controls.
    fn same_as(&self, other: &Gate) -> bool {
        match (self, other) {
            (Gate::CCX(a, b, t), Gate::CCX(c, d, u)) => t == u && ((a, b) == (c, d) || (a, b) == (d, c)),
            _ => self == other,
        }
    }

    /// Action on a classical basis state.
    fn apply_bits(&self, s: u64) -> u64 {
        let on = |q: &usize| s >> q & 1 == 1;
        let flip = |t: &usize| s ^ 1 << t;
        match self {
            Gate::X(t) => flip(t),
            Gate::CX(c, t) if on(c) => flip(t),
            Gate::CCX(a, b, t) if on(a) && on(b) => flip(t),
            Gate::MCX(cs, t) if cs.iter().all(|(c, p)| on(c) == *p) => flip(t),
            Gate::CX(..) | Gate::CCX(..) | Gate::MCX(..) => s,
            Gate::H(_) | Gate::T(_) | Gate::Tdg(_) => unreachable!("not classical"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub data_qubits: usize,
    pub ancilla_qubits: usize,
    pub gates: Vec<Gate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub size: usize,
    #[serde(rename = "cx")]
    pub cx_count: usize,
    pub depth: usize,
}

impl Circuit {
    pub fn new(data_qubits: usize, ancilla_qubits: usize) -> Self {
        Circuit {
            data_qubits,
            ancilla_qubits,
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.data_qubits + self.ancilla_qubits
    }

    pub fn validate(&self) -> Result<()> {
        let width = self.width();
        for g in &self.gates {
            for q in g.qubits() {
                if q >= width {
                    return Err(CircuitError::QubitOutOfRange { qubit: q, width });
                }
            }
        }
        Ok(())
    }

    pub fn is_classical(&self) -> bool {
        self.gates.iter().all(Gate::is_classical)
    }

    pub fn metrics(&self) -> Metrics {
        let mut front = vec![0usize; self.width()];
        let mut depth = 0;
        for g in &self.gates {
            let qs = g.qubits();
            let level = 1 + qs.iter().map(|&q| front[q]).max().unwrap_or(0);
            for q in qs {
                front[q] = level;
            }
            depth = depth.max(level);
        }
        Metrics {
            size: self.gates.len(),
            cx_count: self.gates.iter().filter(|g| matches!(g, Gate::CX(..))).count(),
            depth,
        }
    }

    fn ancilla_mask(&self) -> u64 {
        ((1u64 << self.ancilla_qubits) - 1) << self.data_qubits
    }

    /// Runs a classical circuit on a data-qubit input; ancillas start at 0
    /// and must end at 0.
    pub fn simulate(&self, input: u64) -> Result<u64> {
        let k = self.data_qubits;
        if !self.is_classical() {
            let out = self.simulate_state(&AmpVec::ret(Label::atom(bits_to_string(input, k))))?;
            let mut it = out.iter();
            return match (it.next(), it.next()) {
                (Some((l, a)), None) if (a.norm() - 1.0).abs() <= DEFAULT_TOL => {
                    parse_bits(&l.to_string(), k)
                }
                _ => Err(CircuitError::NotClassical(bits_to_string(input, k))),
            };
        }
        let s = self.gates.iter().fold(input, |s, g| g.apply_bits(s));
        if s & self.ancilla_mask() != 0 {
            return Err(CircuitError::DirtyAncilla {
                input: bits_to_string(input, k),
                state: bits_to_string(s, self.width()),
            });
        }
        Ok(s)
    }

    /// Sparse state-vector simulation over bit-string labels of the data
    /// qubits.
    pub fn simulate_state(&self, v: &AmpVec) -> Result<AmpVec> {
        let k = self.data_qubits;
        let mut psi: HashMap<u64, Amp> = HashMap::new();
        for (l, a) in v.iter() {
            *psi.entry(parse_bits(&l.to_string(), k)?).or_default() += a;
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for g in &self.gates {
            let mut next: HashMap<u64, Amp> = HashMap::with_capacity(psi.len() * 2);
            for (&x, &a) in &psi {
                match g {
                    Gate::H(t) => {
                        let sign = if x >> t & 1 == 1 { -s } else { s };
                        *next.entry(x & !(1 << t)).or_default() += a * s;
                        *next.entry(x | 1 << t).or_default() += a * sign;
                    }
                    Gate::T(t) | Gate::Tdg(t) => {
                        let phase = if matches!(g, Gate::T(_)) { 1.0 } else { -1.0 };
                        let k = if x >> t & 1 == 1 {
                            Amp::from_polar(1.0, phase * std::f64::consts::FRAC_PI_4)
                        } else {
                            Amp::new(1.0, 0.0)
                        };
                        *next.entry(x).or_default() += a * k;
                    }
                    _ => *next.entry(g.apply_bits(x)).or_default() += a,
                }
            }
            next.retain(|_, a| a.norm() >= PRUNE_EPS);
            psi = next;
        }
        let mask = self.ancilla_mask();
        if let Some((&x, _)) = psi.iter().find(|(&x, a)| x & mask != 0 && a.norm() > DEFAULT_TOL) {
            return Err(CircuitError::DirtyAncilla {
                input: "superposition".into(),
                state: bits_to_string(x, self.width()),
            });
        }
        Ok(AmpVec::from_pairs(
            psi.into_iter()
                .map(|(x, a)| (Label::atom(bits_to_string(x, k)), a)),
        ))
    }

    /// Replaces every MCX by X/CX/CCX gates over this circuit's ancillas.
    pub fn decompose(&self) -> Result<Circuit> {
        let ancillas: Vec<usize> = (self.data_qubits..self.width()).collect();
        let mut out = Circuit::new(self.data_qubits, self.ancilla_qubits);
        for g in &self.gates {
            match g {
                Gate::MCX(cs, t) => out.gates.extend(decompose_mcx(cs, *t, &ancillas)?),
                g => out.gates.push(g.clone()),
            }
        }
        Ok(out)
    }

    /// Cancels pairs of identical self-inverse gates separated only by gates
    /// on other qubits, until nothing changes.
    pub fn peephole(&self) -> Circuit {
        let mut gates = self.gates.clone();
        loop {
            let before = gates.len();
            let mut out: Vec<Gate> = Vec::with_capacity(gates.len());
            'next: for g in gates {
                let qs = g.qubits();
                for j in (0..out.len()).rev() {
                    if g.is_self_inverse() && out[j].same_as(&g) {
                        out.remove(j);
                        continue 'next;
                    }
                    if out[j].qubits().iter().any(|q| qs.contains(q)) {
                        break;
                    }
                }
                out.push(g);
            }
            gates = out;
            if gates.len() == before {
                break;
            }
        }
        Circuit {
            gates,
            ..self.clone()
        }
    }

    /// OpenQASM 2.0 text. MCX gates must have been decomposed.
    pub fn export_qasm(&self) -> Result<String> {
        let k = self.data_qubits;
        let q = |i: &usize| {
            if *i < k {
                format!("q[{i}]")
            } else {
                format!("anc[{}]", i - k)
            }
        };
        let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        out.push_str(&format!("qreg q[{k}];\n"));
        if self.ancilla_qubits > 0 {
            out.push_str(&format!("qreg anc[{}];\n", self.ancilla_qubits));
        }
        for g in &self.gates {
            let line = match g {
                Gate::X(t) => format!("x {};", q(t)),
                Gate::H(t) => format!("h {};", q(t)),
                Gate::T(t) => format!("t {};", q(t)),
                Gate::Tdg(t) => format!("tdg {};", q(t)),
                Gate::CX(c, t) => format!("cx {},{};", q(c), q(t)),
                Gate::CCX(a, b, t) => format!("ccx {},{},{};", q(a), q(b), q(t)),
                Gate::MCX(..) => return Err(CircuitError::UndecomposedMcx),
            };
            out.push_str(&line);
            out.push('\n');
        }
        Ok(out)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::X(t) => write!(f, "X({t})"),
            Gate::H(t) => write!(f, "H({t})"),
            Gate::T(t) => write!(f, "T({t})"),
            Gate::Tdg(t) => write!(f, "Tdg({t})"),
            Gate::CX(c, t) => write!(f, "CX({c},{t})"),
            Gate::CCX(a, b, t) => write!(f, "CCX({a},{b},{t})"),
            Gate::MCX(cs, t) => {
                f.write_str("MCX(")?;
                for (c, p) in cs {
                    write!(f, "{}{c},", if *p { "" } else { "!" })?;
                }
                write!(f, "{t})")
            }
        }
    }
}

/// X/CX/CCX realization of a multi-controlled X.
///
/// Negative controls are conjugated with X. Three or more controls use a
/// Toffoli ladder over `controls - 2` ancillas, computed then uncomputed so
/// the ancillas return to their initial value.
pub fn decompose_mcx(controls: &[(usize, bool)], target: usize, ancillas: &[usize]) -> Result<Vec<Gate>> {
    let n = controls.len();
    let need = n.saturating_sub(2);
    if ancillas.len() < need {
        return Err(CircuitError::InsufficientAncillas {
            controls: n,
            need,
            have: ancillas.len(),
        });
    }
    let flips: Vec<Gate> = controls
        .iter()
        .filter(|(_, p)| !p)
        .map(|(c, _)| Gate::X(*c))
        .collect();
    let c: Vec<usize> = controls.iter().map(|(c, _)| *c).collect();
    let mut core = Vec::new();
    match n {
        0 => core.push(Gate::X(target)),
        1 => core.push(Gate::CX(c[0], target)),
        2 => core.push(Gate::CCX(c[0], c[1], target)),
        _ => {
            let mut ladder = vec![Gate::CCX(c[0], c[1], ancillas[0])];
            for i in 2..n - 1 {
                ladder.push(Gate::CCX(c[i], ancillas[i - 2], ancillas[i - 1]));
            }
            core.extend(ladder.iter().cloned());
            core.push(Gate::CCX(c[n - 1], ancillas[n - 3], target));
            core.extend(ladder.into_iter().rev());
        }
    }
    let mut out = flips.clone();
    out.extend(core);
    out.extend(flips);
    Ok(out)
}

/// Swaps basis states `a` and `b` with a Gray-code chain of MCX gates.
///
/// The chain walks from `a` to `b` flipping one differing bit at a time.
/// Each step swaps two neighbouring strings with an MCX on the flipped bit,
/// controlled by every other data qubit at its current value; the chain is
/// then walked back, so only `a` and `b` move.
fn transposition(a: u64, b: u64, k: usize) -> Vec<Gate> {
    let diff: Vec<usize> = (0..k).filter(|q| (a ^ b) >> q & 1 == 1).collect();
    let mut steps = Vec::with_capacity(diff.len());
    let mut g = a;
    for &t in &diff {
        let controls = (0..k).filter(|&q| q != t).map(|q| (q, g >> q & 1 == 1)).collect();
        steps.push(Gate::MCX(controls, t));
        g ^= 1 << t;
    }
    let mut out = steps.clone();
    out.extend(steps.into_iter().rev().skip(1));
    out
}

/// Compiles a permutation matrix, read through `enc`, into an X/CX/CCX
/// circuit. Cycles `(c0 c1 ... cL-1)` become the transpositions
/// `(c0 c1), (c0 c2), ..., (c0 cL-1)` applied in that order.
pub fn synth_permutation(m: &CMatrix, enc: &Encoding) -> Result<Circuit> {
    if m.src() != enc.basis() || m.tgt() != enc.basis() {
        return Err(CircuitError::BasisMismatch);
    }
    let perm = m.as_permutation(DEFAULT_TOL).ok_or(CircuitError::OutOfScope)?;
    let k = enc.width();
    let n = perm.len();
    let mut next = vec![0u64; n];
    for (j, &i) in perm.iter().enumerate() {
        next[enc.index_to_state(j) as usize] = enc.index_to_state(i);
    }
    let mut raw = Vec::new();
    let mut seen = vec![false; n];
    for start in 0..n as u64 {
        if seen[start as usize] || next[start as usize] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start as usize] = true;
        let mut s = next[start as usize];
        while s != start {
            seen[s as usize] = true;
            cycle.push(s);
            s = next[s as usize];
        }
        for &c in &cycle[1..] {
            raw.extend(transposition(cycle[0], c, k));
        }
    }
    let ancillas = k.saturating_sub(3);
    let c = Circuit {
        data_qubits: k,
        ancilla_qubits: ancillas,
        gates: raw,
    };
    Ok(c.decompose()?.peephole())
}

/// Simulates every basis input and returns `(input, output)` pairs.
pub fn truth_table(c: &Circuit) -> Result<Vec<(u64, u64)>> {
    (0..1u64 << c.data_qubits)
        .into_par_iter()
        .map(|s| Ok((s, c.simulate(s)?)))
        .collect()
}

/// Checks `simulate ∘ encode == encode ∘ m` on every basis state.
pub fn verify_permutation(c: &Circuit, m: &CMatrix, enc: &Encoding) -> Result<bool> {
    let perm = m.as_permutation(DEFAULT_TOL).ok_or(CircuitError::OutOfScope)?;
    let table = truth_table(c)?;
    Ok(perm.iter().enumerate().all(|(j, &i)| {
        let s = enc.index_to_state(j);
        table[s as usize].1 == enc.index_to_state(i)
    }))
}

/// Parses the subset of OpenQASM 2.0 written by [`Circuit::export_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut data = None;
    let mut anc = 0usize;
    let mut gates = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split("//").next().unwrap().trim();
        let err = |msg: &str| CircuitError::Qasm {
            line: no + 1,
            msg: msg.to_string(),
        };
        for stmt in line.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (op, args) = stmt.split_once(char::is_whitespace).unwrap_or((stmt, ""));
            let args = args.trim();
            match op {
                "OPENQASM" => {
                    if args != "2.0" {
                        return Err(err("only OpenQASM 2.0 is supported"));
                    }
                }
                "include" => {}
                "qreg" => {
                    let (name, size) = parse_reg(args).ok_or_else(|| err("bad qreg"))?;
                    match name {
                        "q" => data = Some(size),
                        "anc" => anc = size,
                        _ => return Err(err("unknown register")),
                    }
                }
                "x" | "h" | "t" | "tdg" | "cx" | "ccx" => {
                    let k = data.ok_or_else(|| err("gate before qreg q"))?;
                    let qs = args
                        .split(',')
                        .map(|a| {
                            let (name, i) = parse_reg(a.trim())?;
                            match name {
                                "q" if i < k => Some(i),
                                "anc" if i < anc => Some(k + i),
                                _ => None,
                            }
                        })
                        .collect::<Option<Vec<usize>>>()
                        .ok_or_else(|| err("bad operand"))?;
                    let g = match (op, qs.as_slice()) {
                        ("x", [t]) => Gate::X(*t),
                        ("h", [t]) => Gate::H(*t),
                        ("t", [t]) => Gate::T(*t),
                        ("tdg", [t]) => Gate::Tdg(*t),
                        ("cx", [c, t]) => Gate::CX(*c, *t),
                        ("ccx", [a, b, t]) => Gate::CCX(*a, *b, *t),
                        _ => return Err(err("wrong operand count")),
                    };
                    gates.push(g);
                }
                _ => return Err(err("unsupported statement")),
            }
        }
    }
    let c = Circuit {
        data_qubits: data.ok_or(CircuitError::Qasm {
            line: 0,
            msg: "missing qreg q".into(),
        })?,
        ancilla_qubits: anc,
        gates,
    };
    c.validate()?;
    Ok(c)
}

fn parse_reg(s: &str) -> Option<(&str, usize)> {
    let (name, rest) = s.split_once('[')?;
    let idx = rest.strip_suffix(']')?.trim().parse().ok()?;
    Some((name.trim(), idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::vecmonad::materialize;

    fn bb() -> FinBasis {
        FinBasis::product(&FinBasis::bits(), &FinBasis::bits())
    }

    #[test]
    fn bit_strings() {
        assert_eq!(parse_bits("0110", 4).unwrap(), 0b0110);
        assert_eq!(parse_bits("1000", 4).unwrap(), 1);
        assert_eq!(bits_to_string(1, 4), "1000");
        assert!(parse_bits("012", 3).is_err());
        assert!(parse_bits("01", 3).is_err());
    }

    #[test]
    fn natural_encoding_is_msb_first() {
        let e = Encoding::natural(&bb()).unwrap();
        let l: Label = "(1,0)".parse().unwrap();
        assert_eq!(bits_to_string(e.encode(&l).unwrap(), 2), "10");
        assert_eq!(e.decode(parse_bits("01", 2).unwrap()).to_string(), "(0,1)");
        assert!(Encoding::natural(&FinBasis::atoms(&["a", "b", "c"]).unwrap()).is_err());
    }

    #[test]
    fn identity_synthesizes_to_nothing() {
        let e = Encoding::natural(&bb()).unwrap();
        let c = synth_permutation(&CMatrix::identity(&bb()), &e).unwrap();
        assert!(c.gates.is_empty());
        assert_eq!(c.simulate(2).unwrap(), 2);
    }

    #[test]
    fn cnot_synthesizes_to_one_cx() {
        let e = Encoding::natural(&bb()).unwrap();
        let c = synth_permutation(&materialize(&gates::cnot()).unwrap(), &e).unwrap();
        assert_eq!(c.gates, vec![Gate::CX(0, 1)]);
    }

    #[test]
    fn hadamard_is_out_of_scope() {
        let e = Encoding::natural(&FinBasis::bits()).unwrap();
        let err = synth_permutation(&materialize(&gates::had()).unwrap(), &e).unwrap_err();
        assert!(matches!(err, CircuitError::OutOfScope));
    }

    #[test]
    fn mcx_three_controls_truth_table() {
        let cs = [(0, true), (1, false), (2, true)];
        let gates = decompose_mcx(&cs, 3, &[4]).unwrap();
        assert!(gates
            .iter()
            .all(|g| matches!(g, Gate::X(_) | Gate::CX(..) | Gate::CCX(..))));
        let c = Circuit {
            data_qubits: 4,
            ancilla_qubits: 1,
            gates,
        };
        for s in 0..16u64 {
            let fire = s & 1 == 1 && s >> 1 & 1 == 0 && s >> 2 & 1 == 1;
            assert_eq!(c.simulate(s).unwrap(), if fire { s ^ 8 } else { s });
        }
        assert!(matches!(
            decompose_mcx(&cs, 3, &[]),
            Err(CircuitError::InsufficientAncillas { need: 1, have: 0, .. })
        ));
    }

    #[test]
    fn dirty_ancilla_detected() {
        let c = Circuit {
            data_qubits: 1,
            ancilla_qubits: 1,
            gates: vec![Gate::CX(0, 1)],
        };
        assert!(matches!(c.simulate(1), Err(CircuitError::DirtyAncilla { .. })));
        assert_eq!(c.simulate(0).unwrap(), 0);
    }

    #[test]
    fn peephole_cancels_through_disjoint_gates() {
        let c = Circuit {
            data_qubits: 3,
            ancilla_qubits: 0,
            gates: vec![
                Gate::CX(0, 1),
                Gate::X(2),
                Gate::CX(0, 1),
                Gate::CCX(0, 1, 2),
                Gate::CCX(1, 0, 2),
                Gate::X(2),
            ],
        };
        assert!(c.peephole().gates.is_empty());
        let blocked = Circuit {
            data_qubits: 2,
            ancilla_qubits: 0,
            gates: vec![Gate::CX(0, 1), Gate::X(1), Gate::CX(0, 1)],
        };
        assert_eq!(blocked.peephole().gates.len(), 3);
    }

    #[test]
    fn single_cx_qasm() {
        let c = Circuit {
            data_qubits: 2,
            ancilla_qubits: 0,
            gates: vec![Gate::CX(0, 1)],
        };
        let q = c.export_qasm().unwrap();
        assert_eq!(
            q,
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncx q[0],q[1];\n"
        );
        assert_eq!(parse_qasm(&q).unwrap(), c);
    }

    #[test]
    fn mcx_export_refused() {
        let c = Circuit {
            data_qubits: 2,
            ancilla_qubits: 0,
            gates: vec![Gate::MCX(vec![(0, false)], 1)],
        };
        assert!(matches!(c.export_qasm(), Err(CircuitError::UndecomposedMcx)));
    }

    #[test]
    fn metrics_depth() {
        let c = Circuit {
            data_qubits: 3,
            ancilla_qubits: 0,
            gates: vec![Gate::X(0), Gate::X(1), Gate::CX(0, 1), Gate::X(2)],
        };
        assert_eq!(
            c.metrics(),
            Metrics {
                size: 4,
                cx_count: 1,
                depth: 2
            }
        );
        let json = serde_json::to_string(&c.metrics()).unwrap();
        assert_eq!(json, r#"{"size":4,"cx":1,"depth":2}"#);
    }

    #[test]
    fn statevector_matches_classical_path() {
        let c = Circuit {
            data_qubits: 2,
            ancilla_qubits: 0,
            gates: vec![Gate::H(0), Gate::CX(0, 1), Gate::CX(0, 1), Gate::H(0), Gate::X(1)],
        };
        assert_eq!(c.simulate(0).unwrap(), 2);
        let bell = Circuit {
            data_qubits: 2,
            ancilla_qubits: 0,
            gates: vec![Gate::H(0), Gate::CX(0, 1)],
        };
        assert!(matches!(bell.simulate(0), Err(CircuitError::NotClassical(_))));
    }
}
