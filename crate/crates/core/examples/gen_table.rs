//! Regenerates `data/links.tsv` on stdout.
//!
//! Rational links come from four-plat closures of their Conway notation;
//! the rest from braid closures. Every entry is checked against its
//! determinant and component count before it is printed.

use khbn::linkdiag::{determinant, from_braid, from_plat, kauffman_jones, parse_pd, Diagram};
use khbn::linkdiag::rational_word;

enum Src {
    Conway(&'static [u32]),
    ConwayMirror(&'static [u32]),
    Braid(usize, &'static [i32]),
    Pd(&'static str),
}
use Src::*;

// name, source, determinant, components
const ENTRIES: &[(&str, Src, u64, usize)] = &[
    ("0_1", Pd("U"), 1, 1),
    ("3_1", Pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]"), 3, 1),
    ("4_1", Conway(&[2, 2]), 5, 1),
    ("5_1", Conway(&[5]), 5, 1),
    ("5_2", Conway(&[3, 2]), 7, 1),
    ("6_1", Conway(&[4, 2]), 9, 1),
    ("6_2", Conway(&[3, 1, 2]), 11, 1),
    ("6_3", Conway(&[2, 1, 1, 2]), 13, 1),
    ("7_1", Conway(&[7]), 7, 1),
    ("7_2", Conway(&[5, 2]), 11, 1),
    ("7_3", Conway(&[4, 3]), 13, 1),
    ("7_4", Conway(&[3, 1, 3]), 15, 1),
    ("7_5", Conway(&[3, 2, 2]), 17, 1),
    ("7_6", Conway(&[2, 2, 1, 2]), 19, 1),
    ("7_7", Conway(&[2, 1, 1, 1, 2]), 21, 1),
    ("8_1", Conway(&[6, 2]), 13, 1),
    ("8_2", Conway(&[5, 1, 2]), 17, 1),
    ("8_3", Conway(&[4, 4]), 17, 1),
    ("8_4", Conway(&[4, 1, 3]), 19, 1),
    ("8_5", Braid(3, &[1, 1, 1, -2, 1, 1, 1, -2]), 21, 1),
    ("8_6", Conway(&[3, 3, 2]), 23, 1),
    ("8_7", Conway(&[4, 1, 1, 2]), 23, 1),
    ("8_8", Conway(&[2, 3, 1, 2]), 25, 1),
    ("8_9", Conway(&[3, 1, 1, 3]), 25, 1),
    ("8_10", Braid(3, &[1, 1, 1, -2, 1, 1, -2, -2]), 27, 1),
    ("8_11", Conway(&[3, 2, 1, 2]), 27, 1),
    ("8_12", Conway(&[2, 2, 2, 2]), 29, 1),
    ("8_13", Conway(&[3, 1, 1, 1, 2]), 29, 1),
    ("8_14", Conway(&[2, 2, 1, 1, 2]), 31, 1),
    ("8_16", Braid(3, &[1, 1, -2, 1, 1, -2, 1, -2]), 35, 1),
    ("8_17", Braid(3, &[1, 1, -2, 1, -2, 1, -2, -2]), 37, 1),
    ("8_18", Braid(3, &[1, -2, 1, -2, 1, -2, 1, -2]), 45, 1),
    ("8_19", Braid(3, &[1, 2, 1, 2, 1, 2, 1, 2]), 3, 1),
    ("8_20", Braid(3, &[1, 1, 1, -2, -1, -1, -1, -2]), 9, 1),
    ("8_21", Braid(3, &[1, 1, 1, 2, -1, -1, 2, 2]), 15, 1),
    ("8_15", Braid(4, &[1, 1, -2, 1, 3, 2, 2, 2, 3]), 33, 1),
    ("0^2_1", Braid(2, &[1, -1]), 0, 2),
    ("2^2_1", Conway(&[2]), 2, 2),
    ("4^2_1", Conway(&[4]), 4, 2),
    ("5^2_1", Conway(&[2, 1, 2]), 8, 2),
    ("6^2_1", Conway(&[6]), 6, 2),
    ("6^2_2", Conway(&[3, 3]), 10, 2),
    ("6^2_3", Conway(&[2, 2, 2]), 12, 2),
    ("6^3_2", Braid(3, &[1, -2, 1, -2, 1, -2]), 16, 3),
    // alternative diagrams of the same links
    ("0_1~kink", Pd("PD[X(2,1,1,2)]"), 1, 1),
    ("0_1~twist", Braid(2, &[1]), 1, 1),
    ("0_1~stab", Braid(3, &[1, -2]), 1, 1),
    ("3_1~braid", Braid(2, &[-1, -1, -1]), 3, 1),
    ("3_1~plat", ConwayMirror(&[3]), 3, 1),
    ("3_1~r2", Braid(2, &[-1, -1, 1, -1, -1]), 3, 1),
    ("3_1~stab", Braid(3, &[-1, -1, -1, -2]), 3, 1),
    ("3_1~kink", Braid(3, &[-1, -1, -1, 2]), 3, 1),
    ("4_1~braid", Braid(3, &[1, -2, 1, -2]), 5, 1),
    ("5_1~braid", Braid(2, &[1, 1, 1, 1, 1]), 5, 1),
    ("0^2_1~r2", Braid(2, &[1, 1, -1, -1]), 0, 2),
    ("2^2_1~braid", Braid(2, &[1, 1]), 2, 2),
    ("8_19~stab", Braid(4, &[1, 2, 1, 2, 1, 2, 1, 2, 3]), 3, 1),
    ("8_19~r3", Braid(3, &[2, 1, 2, 2, 1, 2, 1, 2]), 3, 1),
];

fn build(src: &Src) -> Diagram {
    match src {
        Conway(c) => from_plat(4, &rational_word(c)).unwrap(),
        ConwayMirror(c) => from_plat(4, &rational_word(c)).unwrap().mirror(),
        Braid(n, w) => from_braid(*n, w).unwrap(),
        Pd(s) => parse_pd(s).unwrap(),
    }
}

fn main() {
    let check_only = std::env::args().any(|a| a == "--check");
    let mut bad = 0;
    println!("# name\tPD\tcomponents");
    for (name, src, det, comps) in ENTRIES {
        let d = build(src);
        let (gd, gc) = (determinant(&d), d.component_count());
        if gd != *det || gc != *comps {
            eprintln!("{name}: determinant {gd} (want {det}), components {gc} (want {comps})");
            bad += 1;
            continue;
        }
        if let Some((base, _)) = name.split_once('~') {
            let b = ENTRIES.iter().find(|e| e.0 == base).unwrap();
            let (vb, vd) = (kauffman_jones(&build(&b.1)), kauffman_jones(&d));
            if vb != vd {
                eprintln!("{name}: Jones {vd} differs from {base}: {vb} (mirror: {})", kauffman_jones(&d.mirror()) == vb);
                bad += 1;
                continue;
            }
        }
        if !check_only {
            println!("{name}\t{}\t{comps}", d.render());
        }
    }
    if bad > 0 {
        std::process::exit(1);
    }
}
