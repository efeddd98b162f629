//! `khbn verify <check>`.

use crate::Failure;
use clap::ValueEnum;
use khbn::brcover::verify_theorem_main;
use khbn::homology::{euler_characteristic, homology_of, reduced_over_basepoints, verify_triangle};
use khbn::khcube::{build_complex, check_homogeneity, verify_d_squared};
use khbn::linkdiag::{kauffman_jones, Diagram, LaurentPoly, LinkTable};
use khbn::sseq::{verify_einfty_gr, FilteredComplex};
use khbn::{bigraded_homology, par};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Euler,
    Triangle,
    Splitting,
    Basepoint,
    Brcover,
    Sseq,
    Reidemeister,
    Dsquared,
}

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub check: Check,
    pub pass: bool,
    pub checked: usize,
    pub failed: usize,
    pub results: Vec<CheckResult>,
}

type Outcome = Result<String, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn euler(d: &Diagram) -> Outcome {
    let m = homology_of(d, 2, false, None).map_err(err)?;
    let got = euler_characteristic(&m);
    let want = &LaurentPoly::from_terms([(0, 1), (-2, 1)]) * &kauffman_jones(d);
    if got == want {
        Ok(format!("chi = {got}"))
    } else {
        Err(format!("chi = {got}, expected {want}"))
    }
}

fn triangle(d: &Diagram) -> Outcome {
    for reduced in [false, true] {
        let r = verify_triangle(d, reduced).map_err(err)?;
        if !r.exact() {
            return Err(format!("reduced={reduced}: not exact at {:?}", r.failures));
        }
    }
    Ok("exact at every node".into())
}

fn splitting(d: &Diagram) -> Outcome {
    let un = homology_of(d, 2, false, None).map_err(err)?;
    let red = homology_of(d, 2, true, Some(d.effective_basepoint())).map_err(err)?;
    let sum = red.direct_sum(&red.shift_quantum(-2));
    if un == sum {
        Ok(format!("dim {} = 2 x {}", un.total_dim(), red.total_dim()))
    } else {
        let at = un.dims.keys().chain(sum.dims.keys()).find(|b| un.dims.get(b) != sum.dims.get(b));
        Err(format!("unreduced differs from reduced + reduced{{-2}} (first dimension mismatch {at:?})"))
    }
}

fn basepoint(d: &Diagram) -> Outcome {
    for k in [1, 2, 3] {
        let all = reduced_over_basepoints(d, k).map_err(err)?;
        if let Some((b, _)) = all.iter().find(|(_, m)| *m != all[0].1) {
            return Err(format!("k={k}: basepoint {b} differs from basepoint {}", all[0].0));
        }
    }
    Ok(format!("{} basepoints agree", d.arcs().len()))
}

fn brcover(d: &Diagram) -> Outcome {
    let arcs = d.arcs();
    let mut edges = 0;
    // two basepoints, on different arcs where possible
    let picks: Vec<u32> = if arcs.len() > 1 { vec![arcs[0], arcs[arcs.len() / 2]] } else { arcs.clone() };
    for b in picks {
        edges += verify_theorem_main(d, b).map_err(|e| format!("basepoint {b}: {e}"))?.edges_checked;
    }
    Ok(format!("{edges} edge checks, modules agree"))
}

fn sseq(d: &Diagram) -> Outcome {
    let mut out = Vec::new();
    for k in [2, 3] {
        for (reduced, bp) in [(false, None), (true, Some(d.effective_basepoint()))] {
            let c = build_complex(d, k, reduced, bp).map_err(err)?;
            let m = bigraded_homology(&c).map_err(err)?;
            let f = FilteredComplex::u_adic(&c);
            let t = verify_einfty_gr(&f, &m).map_err(|e| format!("k={k} reduced={reduced}: {e}"))?;
            out.push(format!("k={k}{}: r_stab {}", if reduced { " reduced" } else { "" }, t.r_stab));
        }
    }
    Ok(out.join("; "))
}

fn dsquared(d: &Diagram) -> Outcome {
    let mut n = 0;
    for k in [1, 2, 3] {
        for (reduced, bp) in [(false, None), (true, Some(d.effective_basepoint()))] {
            let c = build_complex(d, k, reduced, bp).map_err(err)?;
            verify_d_squared(&c).map_err(|at| format!("k={k} reduced={reduced}: d^2 != 0 at {at:?}"))?;
            check_homogeneity(&c).map_err(|at| format!("k={k} reduced={reduced}: inhomogeneous entry {at:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} complexes"))
}

/// All members of a same-link group agree, for every invariant.
fn reidemeister(group: &[(String, Diagram)]) -> Outcome {
    if group.len() < 2 {
        return Ok("single diagram".into());
    }
    let (name0, d0) = &group[0];
    for (reduced, k) in [false, true].into_iter().flat_map(|r| [1, 2, 3].map(move |k| (r, k))) {
        let m0 = homology_of(d0, k, reduced, Some(d0.effective_basepoint())).map_err(err)?;
        for (name, d) in &group[1..] {
            let m = homology_of(d, k, reduced, Some(d.effective_basepoint())).map_err(err)?;
            if m != m0 {
                return Err(format!("k={k} reduced={reduced}: {name} differs from {name0}"));
            }
        }
    }
    Ok(format!("{} diagrams agree", group.len()))
}

fn collect(check: Check, named: Vec<(String, Outcome)>) -> Summary {
    let results: Vec<CheckResult> = named
        .into_iter()
        .map(|(name, o)| match o {
            Ok(detail) => CheckResult { name, pass: true, detail },
            Err(detail) => CheckResult { name, pass: false, detail },
        })
        .collect();
    let failed = results.iter().filter(|r| !r.pass).count();
    Summary { check, pass: failed == 0, checked: results.len(), failed, results }
}

pub fn run(check: Check, entries: &[(String, Diagram)], table: &LinkTable) -> Result<Summary, Failure> {
    if check == Check::Reidemeister {
        return Ok(collect(check, reidemeister_groups(entries, table)));
    }
    let f: fn(&Diagram) -> Outcome = match check {
        Check::Euler => euler,
        Check::Triangle => triangle,
        Check::Splitting => splitting,
        Check::Basepoint => basepoint,
        Check::Brcover => brcover,
        Check::Sseq => sseq,
        Check::Dsquared => dsquared,
        Check::Reidemeister => unreachable!(),
    };
    let outcomes = par::map(entries, |(_, d)| f(d));
    Ok(collect(check, entries.iter().map(|(n, _)| n.clone()).zip(outcomes).collect()))
}

/// Groups of the table that contain one of `entries`. A diagram given
/// directly is compared with nothing and trivially passes.
fn reidemeister_groups(entries: &[(String, Diagram)], table: &LinkTable) -> Vec<(String, Outcome)> {
    let groups = table.reidemeister_groups();
    let mut jobs: Vec<(String, Vec<(String, Diagram)>)> = Vec::new();
    for (name, d) in entries {
        let base = name.split('~').next().unwrap_or(name);
        let members = match groups.get(base) {
            Some(g) => g.iter().map(|e| (e.name.clone(), e.diagram.clone())).collect(),
            None => vec![(name.clone(), d.clone())],
        };
        if jobs.iter().all(|(b, _)| b != base) {
            jobs.push((base.to_string(), members));
        }
    }
    // keep only the groups that have something to compare, unless asked for one diagram
    if entries.len() > 1 {
        jobs.retain(|(_, g)| g.len() > 1);
    }
    let outcomes = par::map(&jobs, |(_, g)| reidemeister(g));
    jobs.into_iter().map(|(b, _)| b).zip(outcomes).collect()
}
