use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quantakit::checks::gen;
use quantakit::circuitgen::{
    bits_to_string, parse_bits, parse_qasm, synth_permutation, verify_permutation, Circuit, Encoding, Gate,
};
use quantakit::label::Label;
use quantakit::quanta::{classical_rel, quantamorphism, split_state, ListBasis, StepOp};
use quantakit::relalg::{FinBasis, Rel};
use quantakit::vecmonad::{bind, kleisli, materialize, Amp, AmpVec, CMatrix};

fn label() -> impl Strategy<Value = Label> {
    let leaf = prop_oneof![
        "[a-z][a-z0-9_]{0,4}".prop_map(Label::atom),
        any::<bool>().prop_map(Label::bit),
        Just(Label::Unit),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Label::pair(a, b)),
            vec(inner.clone(), 0..4).prop_map(Label::List),
            inner.clone().prop_map(Label::inl),
            inner.prop_map(Label::inr),
        ]
    })
}

fn basis(n: usize, tag: &str) -> FinBasis {
    gen::basis(n, tag)
}

fn rel(src: usize, tgt: usize) -> impl Strategy<Value = Rel> {
    vec(any::<bool>(), src * tgt)
        .prop_map(move |cells| Rel::from_pred(&basis(src, "a"), &basis(tgt, "b"), |b, a| cells[b * src + a]))
}

fn matrix(src: usize, tgt: usize) -> impl Strategy<Value = CMatrix> {
    vec((-2.0..2.0f64, -2.0..2.0f64), src * tgt).prop_map(move |xs| {
        let mut m = CMatrix::zeros(&basis(src, "a"), &basis(tgt, "b"));
        for (k, (re, im)) in xs.into_iter().enumerate() {
            m.set(k / src, k % src, Amp::new(re, im));
        }
        m
    })
}

fn gate(k: usize) -> impl Strategy<Value = Gate> {
    let q = 0..k;
    prop_oneof![
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::H),
        q.clone().prop_map(Gate::T),
        q.clone().prop_map(Gate::Tdg),
        (q.clone(), q.clone())
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(|(a, b)| Gate::CX(a, b)),
        (q.clone(), q.clone(), q)
            .prop_filter("distinct", |(a, b, c)| a != b && b != c && a != c)
            .prop_map(|(a, b, c)| Gate::CCX(a, b, c)),
    ]
}

fn classical_gate(k: usize) -> impl Strategy<Value = Gate> {
    gate(k).prop_filter("classical", |g| {
        !matches!(g, Gate::H(_) | Gate::T(_) | Gate::Tdg(_))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn labels_print_and_parse_back(l in label()) {
        let text = l.to_string();
        let back: Label = text.parse().unwrap();
        prop_assert_eq!(back, l);
    }

    #[test]
    fn converse_reverses_composition(r in rel(3, 4), s in rel(2, 3)) {
        // s : a2 -> a3 relabelled as the source of r
        let s = Rel::from_pred(&basis(2, "a"), r.src(), |b, a| s.get(b, a));
        let lhs = r.compose(&s).unwrap().converse();
        let rhs = s.converse().compose(&r.converse()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn split_with_injective_side_is_injective(r in rel(3, 3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = gen::permutation(3, &mut rng);
        let inj = Rel::from_index_fn(r.src(), &basis(3, "c"), |i| p[i]);
        prop_assert!(r.pair(&inj).unwrap().is_injective());
    }

    #[test]
    fn kernel_contains_identity_iff_entire(r in rel(4, 3)) {
        let id = Rel::identity(r.src());
        prop_assert_eq!(id.subset(&r.kernel()).unwrap(), r.is_entire());
    }

    #[test]
    fn bind_is_associative(f in matrix(3, 2), g in matrix(2, 3), x in vec((-1.0..1.0f64, -1.0..1.0f64), 3)) {
        let g = g.relabel(f.tgt(), &basis(3, "c"));
        let v = AmpVec::from_pairs(
            f.src().labels().iter().cloned().zip(x.into_iter().map(|(a, b)| Amp::new(a, b))),
        );
        let (fo, go) = (f.to_op(), g.to_op());
        let lhs = bind(&bind(&v, &fo).unwrap(), &go).unwrap();
        let rhs = bind(&v, &kleisli(&go, &fo).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn kron_mixed_product(a in matrix(2, 2), b in matrix(2, 3), c in matrix(2, 2), d in matrix(3, 2)) {
        let c = c.relabel(&basis(2, "x"), a.src());
        let d = d.relabel(&basis(3, "y"), b.src());
        let a = a.relabel(a.src(), &basis(2, "z"));
        let lhs = a.kron(&b).matmul(&c.kron(&d)).unwrap();
        let rhs = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
        prop_assert!(lhs.approx_eq(&rhs, 1e-9));
    }

    #[test]
    fn matrix_dump_is_a_fixpoint(m in matrix(3, 4)) {
        let text = m.dump();
        let back = CMatrix::parse_dump(&text).unwrap();
        prop_assert_eq!(back.dump(), text);
        prop_assert!(back.approx_eq(&m, 1e-11));
    }

    #[test]
    fn bit_strings_round_trip(s in 0u64..256) {
        prop_assert_eq!(parse_bits(&bits_to_string(s, 8), 8).unwrap(), s);
    }

    #[test]
    fn qasm_round_trips(gates in vec(gate(5), 0..40), anc in 0usize..3) {
        let c = Circuit { data_qubits: 5 - anc, ancilla_qubits: anc, gates };
        prop_assert_eq!(parse_qasm(&c.export_qasm().unwrap()).unwrap(), c);
    }

    #[test]
    fn peephole_keeps_truth_table(gates in vec(classical_gate(4), 0..40)) {
        let c = Circuit { data_qubits: 4, ancilla_qubits: 0, gates };
        let p = c.peephole();
        prop_assert!(p.gates.len() <= c.gates.len());
        prop_assert_eq!(p.peephole().gates.len(), p.gates.len());
        for s in 0..16 {
            prop_assert_eq!(p.simulate(s).unwrap(), c.simulate(s).unwrap());
        }
    }

    #[test]
    fn peephole_keeps_state_action(gates in vec(gate(3), 0..25), input in 0u64..8) {
        let c = Circuit { data_qubits: 3, ancilla_qubits: 0, gates };
        let v = AmpVec::ret(Label::atom(bits_to_string(input, 3)));
        let a = c.simulate_state(&v).unwrap();
        let b = c.peephole().simulate_state(&v).unwrap();
        prop_assert!(a.approx_eq(&b, 1e-12));
        prop_assert!((a.norm() - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn synthesized_permutations_verify(seed in any::<u64>(), k in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = basis(1 << k, "s");
        let p = gen::permutation(1 << k, &mut rng);
        let m = gen::permutation_matrix(&b, &p);
        let enc = Encoding::natural(&b).unwrap();
        let c = synth_permutation(&m, &enc).unwrap();
        prop_assert!(c.is_classical());
        prop_assert_eq!(c.ancilla_qubits, k.saturating_sub(3));
        prop_assert!(verify_permutation(&c, &m, &enc).unwrap());
    }

    #[test]
    fn folds_of_classical_bijections_are_length_preserving_bijections(seed in any::<u64>(), n in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bb = FinBasis::product(&FinBasis::bits(), &FinBasis::bits());
        let p = gen::permutation(4, &mut rng);
        let step = gen::permutation_matrix(&bb, &p).to_op();
        let lb = ListBasis::bits(n);
        let q = classical_rel(&quantamorphism(&StepOp::bits(step).unwrap(), lb.basis())).unwrap();
        prop_assert!(q.is_bijection());
        for l in lb.basis().labels() {
            let out = q.apply(l).unwrap();
            prop_assert_eq!(split_state(&out).unwrap().0.len(), split_state(l).unwrap().0.len());
        }
    }

    #[test]
    fn folds_of_unitaries_are_unitary(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bb = FinBasis::product(&FinBasis::bits(), &FinBasis::bits());
        let u = gen::unitary(&bb, &mut rng).to_op();
        let lb = ListBasis::bits(2);
        let m = materialize(&quantamorphism(&StepOp::bits(u).unwrap(), lb.basis())).unwrap();
        prop_assert!(m.is_unitary(1e-9).unwrap());
    }
}
