//! Regression corpus for the certification pipeline: generator sets over
//! all three fields with known verdicts, cross-checked against the
//! brute-force oracles (closure with a 10x cap for finite groups,
//! brute-force powering with cap 5000 for single-matrix order claims), with
//! witness replay and byte-level determinism.

use matfin::certify::{certify_finiteness, Verdict};
use matfin::exactnum::{Field, Scalar};
use matfin::grouporder::{self, BruteForceOutcome, OrderValue};
use matfin::SquareMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Expected {
    Finite(usize),
    Infinite,
}

struct Case {
    name: &'static str,
    gens: Vec<SquareMatrix>,
    expected: Expected,
}

fn q() -> Field {
    Field::Q
}

fn m(field: Field, rows: &[&[i64]]) -> SquareMatrix {
    SquareMatrix::from_int_rows(field, rows).expect("shape")
}

fn scalar_rows(field: Field, rows: &[&[&str]]) -> SquareMatrix {
    let parsed = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| Scalar::parse(s, &field).expect("parses"))
                .collect()
        })
        .collect();
    SquareMatrix::from_rows(field, parsed).expect("shape")
}

fn corpus() -> Vec<Case> {
    let f2 = Field::Fp(2);
    let f3 = Field::Fp(3);
    let f5 = Field::Fp(5);
    let f2t = Field::FpT(2);
    let f3t = Field::FpT(3);
    vec![
        Case {
            name: "rotation by 90 degrees",
            gens: vec![m(q(), &[&[0, -1], &[1, 0]])],
            expected: Expected::Finite(4),
        },
        Case {
            name: "rotation of order 6",
            gens: vec![m(q(), &[&[1, -1], &[1, 0]])],
            expected: Expected::Finite(6),
        },
        Case {
            name: "negated identity",
            gens: vec![m(q(), &[&[-1, 0], &[0, -1]])],
            expected: Expected::Finite(2),
        },
        Case {
            name: "coordinate swap",
            gens: vec![m(q(), &[&[0, 1], &[1, 0]])],
            expected: Expected::Finite(2),
        },
        Case {
            name: "dihedral group of the square",
            gens: vec![m(q(), &[&[0, -1], &[1, 0]]), m(q(), &[&[-1, 0], &[0, 1]])],
            expected: Expected::Finite(8),
        },
        Case {
            name: "3-cycle permutation",
            gens: vec![m(q(), &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])],
            expected: Expected::Finite(3),
        },
        Case {
            name: "signed 3x3 permutations",
            gens: vec![
                m(q(), &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]),
                m(q(), &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
                m(q(), &[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            ],
            expected: Expected::Finite(48),
        },
        Case {
            name: "companion of the 5th cyclotomic polynomial",
            gens: vec![m(
                q(),
                &[
                    &[0, 0, 0, -1],
                    &[1, 0, 0, -1],
                    &[0, 1, 0, -1],
                    &[0, 0, 1, -1],
                ],
            )],
            expected: Expected::Finite(5),
        },
        Case {
            name: "companion of the 12th cyclotomic polynomial",
            gens: vec![m(
                q(),
                &[
                    &[0, 0, 0, -1],
                    &[1, 0, 0, 0],
                    &[0, 1, 0, 1],
                    &[0, 0, 1, 0],
                ],
            )],
            expected: Expected::Finite(12),
        },
        Case {
            name: "involution with fractional entries",
            gens: vec![scalar_rows(q(), &[&["0", "2"], &["1/2", "0"]])],
            expected: Expected::Finite(2),
        },
        Case {
            name: "SL_2(F_2)",
            gens: vec![m(f2, &[&[0, 1], &[1, 0]]), m(f2, &[&[1, 1], &[0, 1]])],
            expected: Expected::Finite(6),
        },
        Case {
            name: "SL_2(F_3)",
            gens: vec![m(f3, &[&[0, -1], &[1, 0]]), m(f3, &[&[1, 1], &[0, 1]])],
            expected: Expected::Finite(24),
        },
        Case {
            name: "diagonal torus element over F_5",
            gens: vec![m(f5, &[&[2, 0], &[0, 3]])],
            expected: Expected::Finite(4),
        },
        Case {
            name: "Jordan block over F_3",
            gens: vec![m(f3, &[&[1, 1], &[0, 1]])],
            expected: Expected::Finite(3),
        },
        Case {
            name: "shear over F_2(t) with transcendental entry",
            gens: vec![scalar_rows(f2t, &[&["1", "t"], &["0", "1"]])],
            expected: Expected::Finite(2),
        },
        Case {
            name: "constant unipotent over F_3(t)",
            gens: vec![m(f3t, &[&[1, 1], &[0, 1]])],
            expected: Expected::Finite(3),
        },
        Case {
            name: "unipotent shear over Q",
            gens: vec![m(q(), &[&[1, 1], &[0, 1]])],
            expected: Expected::Infinite,
        },
        Case {
            name: "determinant 2",
            gens: vec![m(q(), &[&[2, 0], &[0, 1]])],
            expected: Expected::Infinite,
        },
        Case {
            name: "diag(2, 1/2) with non-integral trace",
            gens: vec![scalar_rows(q(), &[&["2", "0"], &["0", "1/2"]])],
            expected: Expected::Infinite,
        },
        Case {
            name: "diag(t, 1/t) over F_2(t)",
            gens: vec![scalar_rows(f2t, &[&["t", "0"], &["0", "(1)/(t)"]])],
            expected: Expected::Infinite,
        },
        Case {
            name: "golden ratio companion",
            gens: vec![m(q(), &[&[0, 1], &[1, 1]])],
            expected: Expected::Infinite,
        },
        Case {
            name: "diag(2, 3) determinant 6",
            gens: vec![m(q(), &[&[2, 0], &[0, 3]])],
            expected: Expected::Infinite,
        },
        Case {
            name: "Heisenberg generators",
            gens: vec![
                m(q(), &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
                m(q(), &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
            ],
            expected: Expected::Infinite,
        },
        Case {
            name: "rotation plus an unbounded shear",
            gens: vec![m(q(), &[&[0, -1], &[1, 0]]), m(q(), &[&[1, 2], &[0, 1]])],
            expected: Expected::Infinite,
        },
        Case {
            name: "hyperbolic diag(t, 1/(t+1)) over F_2(t)",
            gens: vec![scalar_rows(f2t, &[&["t", "0"], &["0", "(1)/(t + 1)"]])],
            expected: Expected::Infinite,
        },
        Case {
            name: "1x1 sign flip",
            gens: vec![m(q(), &[&[-1]])],
            expected: Expected::Finite(2),
        },
        Case {
            name: "1x1 doubling",
            gens: vec![m(q(), &[&[2]])],
            expected: Expected::Infinite,
        },
    ]
}

/// Verdicts match ground truth on the whole corpus; finite orders are
/// confirmed by an independent closure run at a 10x cap.
#[test]
fn corpus_verdicts_match_ground_truth() {
    let cases = corpus();
    assert!(cases.len() >= 20, "corpus must stay at 20+ generator sets");
    for case in &cases {
        let cert = certify_finiteness(&case.gens, 10_000, false)
            .unwrap_or_else(|e| panic!("{}: pipeline failed: {e}", case.name));
        match (case.expected, &cert.verdict) {
            (Expected::Finite(n), Verdict::Finite { order }) => {
                assert_eq!(*order, n, "{}: wrong order", case.name);
                // independent ground truth: closure at a 10x cap
                let oracle = grouporder::group_closure(&case.gens, 10 * n, false)
                    .expect("invertible generators");
                assert_eq!(
                    oracle.order(),
                    Some(n),
                    "{}: 10x-cap closure oracle disagrees",
                    case.name
                );
                // certificate structure: a finite verdict requires a finite
                // closure report and a finite order for every generator
                let closure = cert.closure.as_ref().expect("closure ran");
                assert!(closure.is_finite(), "{}: closure not finite", case.name);
                for (i, o) in cert.orders.iter().enumerate() {
                    let o = o.as_ref().unwrap_or_else(|| {
                        panic!("{}: generator {i} order missing", case.name)
                    });
                    assert!(
                        o.order.is_finite(),
                        "{}: generator {i} order not finite",
                        case.name
                    );
                }
                assert_eq!(
                    cert.closure_integrality,
                    Some(true),
                    "{}: closure elements must stay integral",
                    case.name
                );
            }
            (Expected::Infinite, Verdict::Infinite) => {
                let witness = cert.witness.as_ref().expect("infinite needs a witness");
                assert!(
                    witness.reverify(&case.gens).expect("replay runs"),
                    "{}: witness failed to re-verify",
                    case.name
                );
            }
            (expected, got) => {
                panic!("{}: expected {expected:?}, got {got:?}", case.name)
            }
        }
    }
}

/// Single-matrix order claims against brute-force powering: finite orders
/// agree exactly, infinite claims exceed a 5000 cap.
#[test]
fn rational_orders_match_brute_force() {
    for case in corpus() {
        for (i, g) in case.gens.iter().enumerate() {
            if g.field() != Field::Q {
                continue;
            }
            let result = grouporder::order_rational(g).expect("invertible");
            match result.order {
                OrderValue::Finite(n) => {
                    let n: u64 = n.try_into().expect("desk scale");
                    assert_eq!(
                        grouporder::brute_force_order(g, 10 * n).expect("invertible"),
                        BruteForceOutcome::Order(n),
                        "{} generator {i}: brute force disagrees",
                        case.name
                    );
                }
                OrderValue::Infinite => {
                    assert_eq!(
                        grouporder::brute_force_order(g, 5000).expect("invertible"),
                        BruteForceOutcome::CapExceeded(5000),
                        "{} generator {i}: claimed infinite but a power reached I",
                        case.name
                    );
                }
            }
        }
    }
}

/// Identical inputs produce byte-identical certificate JSON.
#[test]
fn certificates_are_deterministic() {
    for case in corpus() {
        let a = certify_finiteness(&case.gens, 10_000, true).expect("runs");
        let b = certify_finiteness(&case.gens, 10_000, true).expect("runs");
        let ja = serde_json::to_string(&a.to_json()).expect("serializable");
        let jb = serde_json::to_string(&b.to_json()).expect("serializable");
        assert_eq!(ja, jb, "{}: certificate JSON differs between runs", case.name);
    }
}

/// The finite corpus entries stay finite when certified through the
/// generator-file format (parse round trip does not perturb anything).
#[test]
fn file_format_round_trip_preserves_verdicts() {
    for case in corpus().iter().take(6) {
        let dim = case.gens[0].dim();
        let field_json = serde_json::to_value(case.gens[0].field()).expect("field");
        let generators: Vec<Vec<Vec<String>>> = case
            .gens
            .iter()
            .map(|g| {
                (0..dim)
                    .map(|i| (0..dim).map(|j| g.entry(i, j).to_string()).collect())
                    .collect()
            })
            .collect();
        let file = serde_json::json!({
            "field": field_json,
            "dim": dim,
            "generators": generators,
        });
        let parsed = matfin::certify::parse_generator_file(&file.to_string()).expect("parses");
        assert_eq!(parsed.generators, case.gens, "{}: round trip", case.name);
    }
}
