//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

mod common;

use common::{corpus, dense_homology};
use khbn::brcover::verify_theorem_main;
use khbn::homology::{euler_characteristic, homology_of, reduced_over_basepoints, verify_triangle, Bidegree};
use khbn::khcube::{build_complex, check_homogeneity, verify_d_squared};
use khbn::linkdiag::{bundled_table, kauffman_jones, Diagram, LaurentPoly};
use khbn::sseq::{verify_einfty_gr, FilteredComplex};
use khbn::{bigraded_homology, par, ModuleDecomp};
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

type Verdict = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Verdict, Option<Duration>);

/// First failing item, or a pass message.
fn all_ok<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<(), String> + Sync + Send, what: &str) -> Verdict {
    let out = par::map(items, f);
    let bad: Vec<&String> = out.iter().filter_map(|r| r.as_ref().err()).collect();
    match bad.first() {
        None => Ok(format!("{} {what}", items.len())),
        Some(e) => Err(format!("{} of {} {what} failed; first: {e}", bad.len(), items.len())),
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn named(n: usize) -> Vec<(String, Diagram)> {
    corpus().into_iter().filter(|(_, d)| d.crossing_count() <= n).collect()
}

fn c1_trefoil() -> Verdict {
    let d = bundled_table().get("trefoil_L").expect("bundled").diagram.clone();
    let m = homology_of(&d, 2, true, Some(d.effective_basepoint())).map_err(e)?;
    let want_summands: BTreeMap<Bidegree, BTreeMap<u32, usize>> =
        [((0, 1), [(2, 1)]), ((-2, -5), [(1, 1)]), ((-3, -9), [(1, 1)])]
            .into_iter()
            .map(|(b, s)| (b, s.into_iter().collect()))
            .collect();
    let want_dims: BTreeMap<Bidegree, usize> = [((0, 1), 1), ((0, -1), 1), ((-2, -5), 1), ((-3, -9), 1)].into();
    if m.summands == want_summands && m.dims == want_dims && m.u_rank() == 1 {
        Ok("F2[u]/u^2 at (0,1)->(0,-1), F2 at (-2,-5), (-3,-9)".into())
    } else {
        Err(format!("computed summands {:?}, dims {:?}, u-rank {}", m.summands, m.dims, m.u_rank()))
    }
}

fn c2_euler() -> Verdict {
    let one_plus = LaurentPoly::from_terms([(0, 1), (-2, 1)]);
    all_ok(
        &named(8),
        |(n, d)| {
            let chi = euler_characteristic(&homology_of(d, 2, false, None).map_err(e)?);
            let want = &one_plus * &kauffman_jones(d);
            (chi == want).then_some(()).ok_or(format!("{n}: chi {chi} != {want}"))
        },
        "links",
    )
}

fn c3_dsquared() -> Verdict {
    all_ok(
        &corpus(),
        |(n, d)| {
            for k in 1..=3 {
                for (red, bp) in [(false, None), (true, Some(d.effective_basepoint()))] {
                    let c = build_complex(d, k, red, bp).map_err(e)?;
                    verify_d_squared(&c).map_err(|at| format!("{n} k={k} reduced={red}: d^2 at {at:?}"))?;
                    check_homogeneity(&c).map_err(|at| format!("{n} k={k} reduced={red}: entry {at:?}"))?;
                }
            }
            Ok(())
        },
        "diagrams x 6 complexes",
    )
}

fn c4_basepoint() -> Verdict {
    let ds: Vec<_> = corpus().into_iter().filter(|(_, d)| d.arcs().len() > 1).collect();
    all_ok(
        &ds,
        |(n, d)| {
            for k in 1..=3 {
                let all = reduced_over_basepoints(d, k).map_err(e)?;
                if let Some((b, _)) = all.iter().find(|(_, m)| *m != all[0].1) {
                    return Err(format!("{n} k={k}: basepoint {b} differs from {}", all[0].0));
                }
            }
            Ok(())
        },
        "diagrams, k = 1..3, every arc",
    )
}

fn c5_splitting() -> Verdict {
    all_ok(
        &corpus(),
        |(n, d)| {
            let un = homology_of(d, 2, false, None).map_err(e)?;
            let red = homology_of(d, 2, true, Some(d.effective_basepoint())).map_err(e)?;
            (un == red.direct_sum(&red.shift_quantum(-2))).then_some(()).ok_or(n.to_string())
        },
        "diagrams",
    )
}

fn c6_triangle() -> Verdict {
    all_ok(
        &corpus(),
        |(n, d)| {
            for red in [false, true] {
                let r = verify_triangle(d, red).map_err(e)?;
                if !r.exact() {
                    return Err(format!("{n} reduced={red}: {:?}", r.failures));
                }
            }
            Ok(())
        },
        "diagrams, reduced and unreduced",
    )
}

fn c7_brcover() -> Verdict {
    let jobs: Vec<(String, Diagram, u32)> = named(8)
        .into_iter()
        .flat_map(|(n, d)| {
            let arcs = d.arcs();
            let picks = if arcs.len() > 1 { vec![arcs[0], arcs[arcs.len() / 2]] } else { arcs };
            picks.into_iter().map(move |b| (n.clone(), d.clone(), b))
        })
        .collect();
    let edges = std::sync::atomic::AtomicUsize::new(0);
    let v = all_ok(
        &jobs,
        |(n, d, b)| {
            let r = verify_theorem_main(d, *b).map_err(|x| format!("{n} basepoint {b}: {x}"))?;
            edges.fetch_add(r.edges_checked, std::sync::atomic::Ordering::Relaxed);
            Ok(())
        },
        "(link, basepoint) pairs",
    )?;
    Ok(format!("{v}, {} edge checks", edges.into_inner()))
}

fn c8_sseq() -> Verdict {
    all_ok(
        &corpus(),
        |(n, d)| {
            for k in [2, 3] {
                for (red, bp) in [(false, None), (true, Some(d.effective_basepoint()))] {
                    let c = build_complex(d, k, red, bp).map_err(e)?;
                    let m = bigraded_homology(&c).map_err(e)?;
                    verify_einfty_gr(&FilteredComplex::u_adic(&c), &m).map_err(|x| format!("{n} k={k} reduced={red}: {x}"))?;
                }
            }
            Ok(())
        },
        "diagrams, k = 2, 3",
    )
}

fn c9_reidemeister() -> Verdict {
    let table = bundled_table();
    let groups: Vec<Vec<(String, Diagram)>> = table
        .reidemeister_groups()
        .into_values()
        .filter(|g| g.len() > 1)
        .map(|g| g.into_iter().map(|t| (t.name.clone(), t.diagram.clone())).collect())
        .collect();
    let all = |d: &Diagram| -> Result<Vec<ModuleDecomp>, String> {
        let mut out = Vec::new();
        for k in 1..=3 {
            out.push(homology_of(d, k, false, None).map_err(e)?);
            out.push(homology_of(d, k, true, Some(d.effective_basepoint())).map_err(e)?);
        }
        out.push(bigraded_homology(&khbn::brcover::build_e1_complex(d, d.effective_basepoint()).map_err(e)?).map_err(e)?);
        Ok(out)
    };
    all_ok(
        &groups,
        |g| {
            let first = all(&g[0].1)?;
            for (n, d) in &g[1..] {
                let m = all(d)?;
                // E1 homology sits in cube weight; shift by the difference in n₋
                let shift = g[0].1.n_minus() as i64 - d.n_minus() as i64;
                let e1 = khbn::brcover::shift_homological(&m[6], shift);
                if m[..6] != first[..6] || e1 != first[6] {
                    return Err(format!("{n} differs from {}", g[0].0));
                }
            }
            Ok(())
        },
        "same-link groups, Kh/BN2/BN3 reduced and unreduced, E2",
    )
}

fn c10_oracle() -> Verdict {
    all_ok(
        &named(7),
        |(n, d)| {
            for k in 1..=3 {
                for red in [false, true] {
                    let sparse = homology_of(d, k, red, red.then(|| d.effective_basepoint())).map_err(e)?;
                    let dense = dense_homology(d, k, red);
                    if sparse != dense {
                        return Err(format!("{n} k={k} reduced={red}"));
                    }
                }
            }
            Ok(())
        },
        "diagrams, k = 1..3, reduced and unreduced",
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "trefoil golden table", c1_trefoil, Some(Duration::from_secs(1))),
        (2, "Euler identity", c2_euler, Some(Duration::from_secs(60))),
        (3, "d^2 = 0 and homogeneity", c3_dsquared, None),
        (4, "basepoint independence", c4_basepoint, None),
        (5, "splitting", c5_splitting, None),
        (6, "exact triangle", c6_triangle, None),
        (7, "branched-cover E2 = reduced BN2", c7_brcover, Some(Duration::from_secs(120))),
        (8, "E_inf = gr H", c8_sseq, None),
        (9, "Reidemeister pairs", c9_reidemeister, None),
        (10, "dense oracle equivalence", c10_oracle, None),
    ];
    let mut failed = 0;
    for (id, name, f, limit) in criteria {
        let t = Instant::now();
        let mut v = f();
        let took = t.elapsed();
        if let Some(l) = limit {
            if took >= l && v.is_ok() {
                v = Err(format!("took {took:.2?}, limit {l:?}"));
            }
        }
        let (tag, detail) = match &v {
            Ok(s) => ("PASS", s),
            Err(s) => ("FAIL", s),
        };
        failed += v.is_err() as usize;
        println!("criterion {id:>2} {tag} {name}: {detail} [{took:.2?}]");
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
