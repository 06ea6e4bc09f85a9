#[path = "../../core/tests/common/mod.rs"]
mod common;

use proptest::prelude::*;
use pw::{parse_diagram, parse_tensor, parse_wpg, print_diagram, print_tensor, print_wpg};
use pw_core::complex::c;
use pw_core::fkt::{matching_weight_fkt, WeightedPlaneGraph};
use pw_core::oracle::interpret;
use pw_core::rewrite::equal;
use pw_core::{Tensor, TermDiagram, Tolerance};

fn value(text: &str) -> pw_core::Complex {
    let t = interpret(&parse_diagram(text).unwrap()).unwrap();
    t.amplitudes()[0]
}

#[test]
fn printer_examples() {
    assert_eq!(print_diagram(&parse_diagram("pw 1->1 { x }").unwrap()), "pw 1 -> 1 { x }");
    let w = TermDiagram::white(c(1.0, 0.0)).unwrap();
    assert_eq!(print_diagram(&w), "pw 1 -> 1 { white(1) }");
    let d = parse_diagram("pw 1 -> 1 { white(0.5-0.5i) }").unwrap();
    assert_eq!(print_diagram(&d), "pw 1 -> 1 { white(0.5-0.5i) }");
}

#[test]
fn snake_is_the_identity() {
    let snake = parse_diagram("pw 1 -> 1 { cap, id; id, cup }").unwrap();
    let id = parse_diagram("pw 1 -> 1 { id }").unwrap();
    assert!(equal(&snake, &id, &Tolerance::default()));
    assert_eq!(interpret(&snake).unwrap(), interpret(&id).unwrap());
}

#[test]
fn parallel_edges_sum() {
    let v = value("pw 0 -> 0 { black(0,2); white(2), white(-1); black(2,0) }");
    assert!((v - c(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn complex_literals() {
    for (text, re, im) in [
        ("2", 2.0, 0.0),
        ("-1.5", -1.5, 0.0),
        ("3i", 0.0, 3.0),
        ("-2i", 0.0, -2.0),
        ("1+2i", 1.0, 2.0),
        ("1 - 2.5i", 1.0, -2.5),
        ("1e-3+1E2i", 1e-3, 100.0),
        (".5", 0.5, 0.0),
    ] {
        let d = parse_diagram(&format!("pw 0 -> 0 {{ scalar({text}) }}")).unwrap();
        let v = interpret(&d).unwrap().amplitudes()[0];
        assert_eq!(v, c(re, im), "{text}");
    }
}

#[test]
fn comments_and_whitespace_are_ignored() {
    let d = parse_diagram("# leading\npw\n1 ->1{ # after brace\n  cap , id ;\n\tid,cup # end\n}\n").unwrap();
    assert_eq!(print_diagram(&d), "pw 1 -> 1 { cap, id; id, cup }");
}

#[test]
fn generator_shorthands() {
    for (g, arity) in [
        ("id", (1, 1)),
        ("id(3)", (3, 3)),
        ("cup", (2, 0)),
        ("cap", (0, 2)),
        ("fswap", (2, 2)),
        ("x", (1, 1)),
        ("ket0", (0, 1)),
        ("ket1", (0, 1)),
        ("bra1", (1, 0)),
        ("black(2,3)", (2, 3)),
        ("white(1i)", (1, 1)),
        ("scalar(2)", (0, 0)),
    ] {
        let d = parse_diagram(&format!("pw {} -> {} {{ {g} }}", arity.0, arity.1)).unwrap();
        assert_eq!((d.n_inputs(), d.n_outputs()), arity, "{g}");
    }
}

#[test]
fn parse_errors_carry_spans_and_expectations() {
    let e = parse_diagram("pw 1 -> 1 {\n  x,\n}").unwrap_err();
    assert_eq!((e.span.start.line, e.span.start.column), (3, 1));
    assert!(e.expected.iter().any(|t| t == "`x`"));

    let e = parse_diagram("pw 1 => 1 { x }").unwrap_err();
    assert_eq!((e.span.start.line, e.span.start.column), (1, 6));

    let e = parse_diagram("pw 1 -> 1 { black(1 1) }").unwrap_err();
    assert_eq!(e.expected, vec!["`,`"]);
    assert_eq!(e.span.start.column, 21);

    let e = parse_diagram("pw 1 -> 1 { white(1+2) }").unwrap_err();
    assert_eq!(e.expected, vec!["`i`"]);

    let e = parse_diagram("pw 1 -> 1 { frob }").unwrap_err();
    assert!(e.message.contains("frob"));
    assert_eq!(e.span.start.column, 13);

    let e = parse_diagram("pw 1 -> 1 { x } extra").unwrap_err();
    assert_eq!(e.expected, vec!["end of input"]);

    let e = parse_diagram("pw 1 -> 1 { x @ }").unwrap_err();
    assert_eq!(e.span.start.column, 15);
}

#[test]
fn arity_mismatch_names_both_rows() {
    let e = parse_diagram("pw 1 -> 2 { x;\n id; cup }").unwrap_err();
    assert!(e.message.contains("row 2") && e.message.contains("row 3"), "{}", e.message);
    assert_eq!(e.span.start.line, 2);

    let e = parse_diagram("pw 2 -> 1 { x }").unwrap_err();
    assert!(e.message.contains("header"));
}

#[test]
fn tensor_json_examples() {
    let cap = parse_tensor(r#"{"wires":2,"amplitudes":[[1,0],[0,0],[0,0],[1,0]]}"#).unwrap();
    let expected = interpret(&TermDiagram::cap()).unwrap();
    assert_eq!(cap, expected);
    let zero = parse_tensor(r#"{"wires":0,"amplitudes":[[0,0]]}"#).unwrap();
    assert_eq!(zero, Tensor::scalar(c(0.0, 0.0)));
    assert_eq!(parse_tensor(&print_tensor(&cap)).unwrap(), cap);
}

#[test]
fn tensor_json_errors() {
    let e = parse_tensor(r#"{"wires":2,"amplitudes":[[1,0]]}"#).unwrap_err();
    assert!(e.message.contains("4 amplitudes"));
    let e = parse_tensor(r#"{"wires":0,"amplitudes":[[1e999,0]]}"#).unwrap_err();
    assert!(!e.message.is_empty());
    let e = parse_tensor("{\"wires\":1,\n\"amplitudes\":[[1,0],[0]]}").unwrap_err();
    assert_eq!(e.span.start.line, 2);
    assert!(parse_tensor(r#"{"wires":1}"#).is_err());
}

const SQUARE: &str = "v a\nv b\nv c\nv d\ne 1 a b 1\ne 2 b c 2\ne 3 c d 3\ne 4 d a 4\n\
                      rot a 1 4\nrot b 2 1\nrot c 3 2\nrot d 4 3\n";

#[test]
fn four_cycle_has_two_faces() {
    let f = parse_wpg(SQUARE).unwrap();
    assert_eq!(f.graph.faces().len(), 2);
    assert_eq!(f.vertex_names, ["a", "b", "c", "d"]);
    assert!((matching_weight_fkt(&f.graph).to_complex() - c(11.0, 0.0)).norm() < 1e-12);
}

#[test]
fn triangle_evaluates_to_zero() {
    let f = parse_wpg("v a\nv b\nv c\ne 1 a b 1 1\ne 2 b c 1\ne 3 c a 1\nrot a 1 3\nrot b 2 1\nrot c 3 2\n").unwrap();
    assert!(matching_weight_fkt(&f.graph).is_zero());
}

#[test]
fn wpg_errors() {
    let e = parse_wpg("v a\ne 1 a b 1\n").unwrap_err();
    assert!(e.message.contains("`b`"));
    assert_eq!((e.span.start.line, e.span.start.column), (2, 7));

    let e = parse_wpg("v a\nv b\ne 1 a b 1\nrot a 1\n").unwrap_err();
    assert!(e.message.contains("`b`") && e.message.contains("rotation"));

    let e = parse_wpg("v a\nv b\nv c\ne 1 a b 1\ne 2 a c 1\nrot a 1\nrot b 1\nrot c 2\n").unwrap_err();
    assert!(e.message.contains("1 of its 2"));

    let e = parse_wpg("v a\nv a\n").unwrap_err();
    assert!(e.message.contains("twice"));
    let e = parse_wpg("v a\nv b\ne 1 a b 1\ne 1 a b 1\n").unwrap_err();
    assert!(e.message.contains("twice"));

    let e = parse_wpg("v a\nfoo\n").unwrap_err();
    assert!(e.expected.contains(&"rot".to_string()));
    let e = parse_wpg("v a\nv b\ne 1 a b x\n").unwrap_err();
    assert_eq!(e.span.start.column, 9);
}

#[test]
fn wpg_with_loop_and_outer_face() {
    let text = "v a\nv b\ne l a a 2\ne m a b 3\nrot a l l m\nrot b m\nouter m a\n";
    let f = parse_wpg(text).unwrap();
    assert!(f.graph.outer().is_some());
    assert!((matching_weight_fkt(&f.graph).to_complex() - c(3.0, 0.0)).norm() < 1e-12);
    let again = parse_wpg(&print_wpg(&f.graph)).unwrap();
    assert_eq!(again.graph, f.graph);
}

fn random_graph(seed: u64) -> WeightedPlaneGraph {
    common::random_plane_graph(&mut common::rng(seed), 10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printing_is_a_fixed_point(seed in any::<u64>()) {
        let d = common::random_term(&mut common::rng(seed), 12, 6);
        let text = print_diagram(&d);
        let back = parse_diagram(&text).unwrap();
        prop_assert_eq!(print_diagram(&back), text);
        prop_assert_eq!((back.n_inputs(), back.n_outputs()), (d.n_inputs(), d.n_outputs()));
        let (a, b) = (interpret(&d).unwrap(), interpret(&back).unwrap());
        prop_assert!(a.approx_eq(&b, &Tolerance::new(1e-12)));
    }

    #[test]
    fn wpg_round_trip(seed in any::<u64>()) {
        let g = random_graph(seed);
        let back = parse_wpg(&print_wpg(&g)).unwrap().graph;
        prop_assert_eq!(back.rotation(), g.rotation());
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        let tol = Tolerance::new(1e-13);
        for (x, y) in back.edges().iter().zip(g.edges()) {
            prop_assert_eq!((x.0, x.1), (y.0, y.1));
            prop_assert!(tol.approx_eq(x.2, y.2));
        }
    }

    #[test]
    fn tensor_json_round_trip(seed in any::<u64>(), wires in 0usize..6) {
        let mut rng = common::rng(seed);
        let amps = (0..1usize << wires).map(|_| common::weight(&mut rng)).collect();
        let t = Tensor::new(wires, amps).unwrap();
        prop_assert_eq!(parse_tensor(&print_tensor(&t)).unwrap(), t);
    }

    #[test]
    fn garbage_never_panics(text in "[ -~\n]{0,40}") {
        let _ = parse_diagram(&text);
        let _ = parse_wpg(&text);
        let _ = parse_tensor(&text);
    }

    #[test]
    fn mutated_programs_never_panic(seed in any::<u64>(), cut in 0usize..200, insert in "[ -~]{0,3}") {
        let text = print_diagram(&common::random_term(&mut common::rng(seed), 8, 4));
        let mut at = cut.min(text.len());
        while !text.is_char_boundary(at) { at -= 1; }
        let mutated = format!("{}{}{}", &text[..at], insert, &text[at..]);
        let _ = parse_diagram(&mutated);
    }
}
