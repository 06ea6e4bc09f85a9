mod common;

use pw_core::complex::c;
use pw_core::matchgate::{
    compose_states, contract_consecutive, mgi_check, parity_check, state_tensor_product, synthesize,
    weight2_reconstruct, MatchgateError,
};
use pw_core::oracle::interpret;
use pw_core::term::TermDiagram as T;
use pw_core::{BitWord, Complex, Tensor, Tolerance};
use rand::Rng;

/// The oracle when the diagram is narrow enough, else the Pfaffian
/// semantics of its arc diagram.
fn evaluate(d: &T) -> Tensor {
    interpret(d).unwrap_or_else(|_| pw_core::rewrite::arc_tensor(&pw_core::arc::ArcDiagram::from_term(d)))
}

fn random_state(rng: &mut rand::rngs::StdRng, max_wires: usize) -> Tensor {
    loop {
        let d = common::random_term(rng, 12, max_wires);
        if d.n_inputs() + d.n_outputs() <= max_wires {
            return interpret(&pw_core::term::state_form(&d)).unwrap();
        }
    }
}

#[test]
fn diagram_states_satisfy_the_identities() {
    let tol = Tolerance::default();
    let mut rng = common::rng(1);
    for _ in 0..300 {
        let t = random_state(&mut rng, 8);
        let r = mgi_check(&t, &tol).unwrap();
        assert!(r.passed, "residual {}", r.residual);
    }
}

#[test]
fn swap_state_fails_with_witness() {
    let tol = Tolerance::default();
    // Plain (bosonic) swap as a state on wires in2, in1, out1, out2.
    let mut t = Tensor::zeros(4);
    for x in 0..2u64 {
        for y in 0..2u64 {
            // input |x y>, output |y x>; state index rev(in)=(y,x), out=(y,x)
            let idx = (y << 3) | (x << 2) | (y << 1) | x;
            t.set(&BitWord::from_index(idx, 4), c(1.0, 0.0));
        }
    }
    let r = mgi_check(&t, &tol).unwrap();
    assert!(!r.passed);
    assert!(r.witness.is_some());
    assert!(matches!(synthesize(&t, &tol), Err(MatchgateError::NotMatchgate(_))));
}

#[test]
fn parity_matches_identities_for_three_wires_or_fewer() {
    let tol = Tolerance::default();
    let mut rng = common::rng(2);
    for _ in 0..400 {
        let n = rng.gen_range(0..=3);
        let mut t = Tensor::zeros(n);
        let mode = rng.gen_range(0..3);
        for a in BitWord::all(n) {
            let keep = match mode {
                0 => !a.parity(),
                1 => a.parity(),
                _ => rng.gen_bool(0.5),
            };
            if keep {
                t.set(&a, common::nonzero_weight(&mut rng));
            }
        }
        let parity_ok = parity_check(&t, &tol).is_some();
        assert_eq!(parity_ok, mgi_check(&t, &tol).unwrap().passed, "{t:?}");
    }
}

#[test]
fn even_four_wire_tensor_can_fail() {
    let tol = Tolerance::default();
    let mut t = Tensor::zeros(4);
    t.set(&BitWord::parse("0000").unwrap(), c(1.0, 0.0));
    t.set(&BitWord::parse("1111").unwrap(), c(1.0, 0.0));
    assert_eq!(parity_check(&t, &tol), Some(false));
    assert!(!mgi_check(&t, &tol).unwrap().passed);
}

#[test]
fn products_and_contractions_stay_matchgates() {
    let tol = Tolerance::default();
    let mut rng = common::rng(4);
    for _ in 0..100 {
        let f = random_state(&mut rng, 4);
        let g = random_state(&mut rng, 4);
        let at = rng.gen_range(0..=f.wires());
        let p = state_tensor_product(&f, &g, at).unwrap();
        assert!(mgi_check(&p, &tol).unwrap().passed);
        if p.wires() >= 2 {
            let i = rng.gen_range(1..p.wires());
            assert!(mgi_check(&contract_consecutive(&p, i).unwrap(), &tol).unwrap().passed);
        }
    }
}

#[test]
fn composition_of_states_matches_diagram_composition() {
    let tol = Tolerance::default();
    let f = T::black(1, 2);
    let g = T::tensor(T::white(c(2.0, 1.0)).unwrap(), T::x()).then(T::black(2, 1));
    let sf = interpret(&pw_core::term::state_form(&f)).unwrap();
    let sg = interpret(&pw_core::term::state_form(&g)).unwrap();
    let composed = compose_states(&sf, &sg, 2).unwrap();
    let direct = interpret(&pw_core::term::state_form(&f.then(g))).unwrap();
    assert!(composed.approx_eq(&direct, &tol));
}

#[test]
fn weight_two_determines_the_top_coefficient() {
    let tol = Tolerance::default();
    let mut rng = common::rng(6);
    for _ in 0..50 {
        let w: Vec<Complex> = (0..6).map(|_| common::nonzero_weight(&mut rng)).collect();
        let mut t = Tensor::zeros(4);
        t.set(&BitWord::zero(4), c(1.0, 0.0));
        let pairs = ["1100", "1010", "1001", "0110", "0101", "0011"];
        for (p, &x) in pairs.iter().zip(&w) {
            t.set(&BitWord::parse(p).unwrap(), x);
        }
        let r = weight2_reconstruct(&t, &tol).unwrap();
        let top = r.get(&BitWord::parse("1111").unwrap());
        let expect = w[0] * w[5] - w[1] * w[4] + w[2] * w[3];
        assert!((top - expect).norm() < 1e-12);
    }
}

#[test]
fn synthesis_round_trips() {
    let tol = Tolerance::default();
    let mut rng = common::rng(8);
    for _ in 0..200 {
        let t = random_state(&mut rng, 6);
        let d = synthesize(&t, &tol).unwrap();
        assert_eq!(d.n_inputs(), 0);
        assert!(evaluate(&d).approx_eq(&t, &tol));
    }
    let z = Tensor::zeros(3);
    assert!(evaluate(&synthesize(&z, &tol).unwrap()).approx_eq(&z, &tol));
    let mut odd = Tensor::zeros(3);
    odd.set(&BitWord::parse("100").unwrap(), c(1.0, 0.0));
    odd.set(&BitWord::parse("111").unwrap(), c(0.0, 2.0));
    assert!(evaluate(&synthesize(&odd, &tol).unwrap()).approx_eq(&odd, &tol));
}
