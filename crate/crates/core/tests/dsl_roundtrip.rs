mod common;

use common::random_mdag;
use mdag::{catalog, dsl, parse, serialize};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn catalog_documents_round_trip() {
    for s in catalog::all() {
        let g = parse(s.document).unwrap();
        let text = serialize(&g);
        let again = parse(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", s.id));
        assert_eq!(again, g, "{}", s.id);
        assert_eq!(serialize(&again), text, "{}", s.id);
    }
}

#[test]
fn fig4_golden() {
    let g = catalog::get("fig4").unwrap().graph();
    assert_eq!(serialize(&g), include_str!("golden/fig4.mdag"));
}

#[test]
fn random_graphs_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..500 {
        let nv = rng.random_range(2..=7);
        let g = random_mdag(&mut rng, nv, 0.35, 0.25);
        let text = serialize(&g);
        assert_eq!(parse(&text).unwrap(), g, "{text}");
    }
}

#[test]
fn crlf_and_lf_agree() {
    for s in catalog::all() {
        let crlf = s.document.replace('\n', "\r\n");
        assert_eq!(parse(&crlf).unwrap(), parse(s.document).unwrap(), "{}", s.id);
    }
}

fn check_error_position(text: &str) {
    if let Err(e) = dsl::parse(text) {
        assert!(e.line >= 1 && e.column >= 1, "{e:?}");
        let lines = text.split('\n').count().max(1);
        assert!(e.line <= lines, "{e:?} beyond {lines} lines");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,200}") {
        check_error_position(&text);
    }

    #[test]
    fn token_soup_never_panics(tokens in proptest::collection::vec(
        prop_oneof![
            Just("dag"), Just("node"), Just("target"), Just("auxiliary"), Just("status"), Just("role"),
            Just("complete"), Just("incomplete"), Just("unmeasured"), Just("exposure"), Just("outcome"),
            Just("X"), Just("Y"), Just("R"), Just("M"), Just("{"), Just("}"), Just("["), Just("]"),
            Just(":"), Just(","), Just(";"), Just("->"), Just("~"), Just("+"), Just("\"g\""), Just("\n"),
            Just("#c\n"), Just("\""), Just("-"),
        ],
        0..60,
    )) {
        check_error_position(&tokens.join(" "));
    }

    #[test]
    fn mutated_catalog_documents_never_panic(idx in 0usize..64, cuts in proptest::collection::vec((any::<usize>(), any::<u8>()), 1..6)) {
        let docs = catalog::all();
        let mut bytes = docs[idx % docs.len()].document.as_bytes().to_vec();
        for (at, b) in cuts {
            let at = at % (bytes.len() + 1);
            if b % 2 == 0 && at < bytes.len() {
                bytes.remove(at);
            } else {
                bytes.insert(at, b"{}[]:;,->~+#\"RMXY \n"[b as usize % 19]);
            }
        }
        check_error_position(&String::from_utf8_lossy(&bytes));
    }
}
