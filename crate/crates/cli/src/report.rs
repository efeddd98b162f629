//! The JSON report, its text renderings, and the on-disk cache.

use crate::Failure;
use anyhow::Context;
use clap::ValueEnum;
use khbn::brcover::{build_e1_complex, shift_homological};
use khbn::homology::{euler_characteristic, homology_of, Bidegree};
use khbn::linkdiag::Diagram;
use khbn::sseq::PageTable;
use khbn::ModuleDecomp;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    Kh,
    Bn2,
    Bn3,
    Bnk,
    BrcoverE2,
}

impl Invariant {
    pub fn order(self, k: Option<u32>) -> Result<u32, Failure> {
        let fixed = match self {
            Invariant::Kh => Some(1),
            Invariant::Bn2 | Invariant::BrcoverE2 => Some(2),
            Invariant::Bn3 => Some(3),
            Invariant::Bnk => None,
        };
        match (fixed, k) {
            (Some(f), None) => Ok(f),
            (Some(f), Some(k)) if k == f => Ok(f),
            (Some(_), Some(k)) => Err(Failure::Input(anyhow::anyhow!("--k {k} conflicts with the chosen invariant"))),
            (None, None) => Err(Failure::Input(anyhow::anyhow!("--invariant bnk needs --k"))),
            (None, Some(k)) if (1..=khbn::ringalg::MAX_ORDER).contains(&k) => Ok(k),
            (None, Some(k)) => Err(Failure::Input(anyhow::anyhow!(
                "--k {k} out of range 1..={}",
                khbn::ringalg::MAX_ORDER
            ))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Invariant::Kh => "kh",
            Invariant::Bn2 => "bn2",
            Invariant::Bn3 => "bn3",
            Invariant::Bnk => "bnk",
            Invariant::BrcoverE2 => "brcover-e2",
        }
    }
}

/// `"i,j"`.
pub fn key((i, j): Bidegree) -> String {
    format!("{i},{j}")
}

pub fn unkey(s: &str) -> anyhow::Result<Bidegree> {
    let (i, j) = s.split_once(',').with_context(|| format!("bad bidegree key `{s}`"))?;
    Ok((i.trim().parse()?, j.trim().parse()?))
}

/// A [`ModuleDecomp`] with string keys.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub k: u32,
    pub dims: BTreeMap<String, usize>,
    /// Keyed by the top of each `u`-tower, then by tower length.
    pub summands: BTreeMap<String, BTreeMap<String, usize>>,
    pub graded: BTreeMap<String, Vec<usize>>,
}

impl From<&ModuleDecomp> for ModuleJson {
    fn from(m: &ModuleDecomp) -> Self {
        ModuleJson {
            k: m.k,
            dims: m.dims.iter().map(|(&b, &d)| (key(b), d)).collect(),
            summands: m
                .summands
                .iter()
                .map(|(&b, s)| (key(b), s.iter().map(|(l, &c)| (l.to_string(), c)).collect()))
                .collect(),
            graded: m.graded.iter().map(|(&b, g)| (key(b), g.clone())).collect(),
        }
    }
}

impl ModuleJson {
    pub fn to_module(&self) -> anyhow::Result<ModuleDecomp> {
        let mut summands = BTreeMap::new();
        for (b, s) in &self.summands {
            let mut inner = BTreeMap::new();
            for (l, &c) in s {
                inner.insert(l.parse::<u32>()?, c);
            }
            summands.insert(unkey(b)?, inner);
        }
        Ok(ModuleDecomp {
            k: self.k,
            summands,
            dims: self.dims.iter().map(|(b, &d)| Ok((unkey(b)?, d))).collect::<anyhow::Result<_>>()?,
            graded: self.graded.iter().map(|(b, g)| Ok((unkey(b)?, g.clone()))).collect::<anyhow::Result<_>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub millis: f64,
    pub cached: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub schema_version: u32,
    /// SHA-256 of the canonical form.
    pub diagram_hash: String,
    pub crossings: usize,
    pub components: usize,
    pub invariant: Invariant,
    pub k: u32,
    pub reduced: bool,
    /// In canonical labels.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub basepoint: Option<u32>,
    pub homology: ModuleJson,
    pub poincare: String,
    pub euler: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Timing>,
}

pub fn diagram_hash(d: &Diagram) -> String {
    hex::encode(Sha256::digest(d.canonical_form().as_bytes()))
}

fn cache_key(d: &Diagram, inv: Invariant, k: u32, reduced: bool, bp: Option<u32>) -> String {
    let bp = bp.map(|b| d.canonical_labels()[b as usize]);
    let tuple = format!(
        "v{SCHEMA_VERSION}|{}|{}|k={k}|reduced={reduced}|bp={}",
        d.canonical_form(),
        inv.name(),
        bp.map_or("-".to_string(), |b| b.to_string())
    );
    hex::encode(Sha256::digest(tuple.as_bytes()))
}

/// `Σ dim · tⁱ qʲ`, e.g. `t^-2q^-5+q^-1`.
pub fn poincare_string(m: &ModuleDecomp) -> String {
    let mono = |var: &str, e: i64| match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    };
    let terms: Vec<String> = m
        .dims
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(&(i, j), &d)| {
            let body = mono("t", i) + &mono("q", j);
            match (d, body.is_empty()) {
                (_, true) => d.to_string(),
                (1, false) => body,
                _ => format!("{d}{body}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn compute_module(d: &Diagram, inv: Invariant, k: u32, reduced: bool, bp: Option<u32>, force: bool) -> Result<ModuleDecomp, Failure> {
    if inv == Invariant::BrcoverE2 {
        let e1 = build_e1_complex(d, bp.expect("brcover needs a basepoint")).map_err(|e| anyhow::anyhow!(e))?;
        let m = khbn::homology::bigraded_homology(&e1).map_err(|e| anyhow::anyhow!(e))?;
        // cube weight to the usual homological grading
        return Ok(shift_homological(&m, -(d.n_minus() as i64)));
    }
    let m = if force {
        let c = khbn::khcube::build_complex_unbounded(d, k, reduced, bp).map_err(|e| anyhow::anyhow!(e))?;
        khbn::homology::bigraded_homology(&c)
    } else {
        homology_of(d, k, reduced, bp)
    };
    m.map_err(|e| Failure::Input(anyhow::anyhow!(e)))
}

#[allow(clippy::too_many_arguments)]
pub fn cached_compute(
    d: &Diagram,
    inv: Invariant,
    k: u32,
    reduced: bool,
    bp: Option<u32>,
    force: bool,
    cache_dir: Option<&Path>,
    timing: bool,
) -> Result<InvariantReport, Failure> {
    let start = Instant::now();
    let reduced = reduced || inv == Invariant::BrcoverE2;
    let path = cache_dir.map(|dir| dir.join(format!("{}.json", cache_key(d, inv, k, reduced, bp))));
    if let Some(p) = &path {
        if let Ok(text) = std::fs::read_to_string(p) {
            if let Ok(mut r) = serde_json::from_str::<InvariantReport>(&text) {
                if r.schema_version == SCHEMA_VERSION {
                    r.timing = timing.then(|| Timing { millis: start.elapsed().as_secs_f64() * 1e3, cached: true });
                    return Ok(r);
                }
            }
        }
    }
    let m = compute_module(d, inv, k, reduced, bp, force)?;
    let mut r = InvariantReport {
        schema_version: SCHEMA_VERSION,
        diagram_hash: diagram_hash(d),
        crossings: d.crossing_count(),
        components: d.component_count(),
        invariant: inv,
        k,
        reduced,
        basepoint: bp.filter(|_| reduced).map(|b| d.canonical_labels()[b as usize]),
        homology: ModuleJson::from(&m),
        poincare: poincare_string(&m),
        euler: euler_characteristic(&m).to_string(),
        timing: None,
    };
    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        let tmp = p.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(&r)? + "\n")?;
        std::fs::rename(&tmp, p)?;
    }
    r.timing = timing.then(|| Timing { millis: start.elapsed().as_secs_f64() * 1e3, cached: false });
    Ok(r)
}

impl InvariantReport {
    /// One row per bidegree, with `u`-towers drawn underneath.
    pub fn table(&self) -> String {
        let m = self.homology.to_module().expect("report built from a module");
        let mut out = String::new();
        let label = match self.invariant {
            Invariant::Kh => "Kh".to_string(),
            Invariant::BrcoverE2 => "E2 of the branched-cover cube".to_string(),
            _ => format!("BN over F2[u]/u^{}", self.k),
        };
        let _ = writeln!(out, "{}{label}, {} crossings, hash {}", if self.reduced { "reduced " } else { "" }, self.crossings, &self.diagram_hash[..12]);
        // which tower each bidegree sits in
        let mut inside: BTreeMap<Bidegree, Vec<String>> = BTreeMap::new();
        for (&(i, j), s) in &m.summands {
            for (&l, &c) in s {
                for t in 1..l as i64 {
                    let mult = if c > 1 { format!("{c}x ") } else { String::new() };
                    inside.entry((i, j - 2 * t)).or_default().push(format!("{mult}u^{t}.({i},{j})"));
                }
            }
        }
        let _ = writeln!(out, "{:>4} {:>4} {:>4}  summands", "i", "j", "dim");
        let mut rows: Vec<Bidegree> = m.dims.keys().copied().collect();
        rows.sort_by_key(|&(i, j)| (std::cmp::Reverse(i), std::cmp::Reverse(j)));
        for b in rows {
            let mut cells: Vec<String> = Vec::new();
            for (&l, &c) in m.summands.get(&b).into_iter().flatten() {
                let ring = if l == 1 { "F2".to_string() } else { format!("F2[u]/u^{l}") };
                cells.push(if c > 1 { format!("{c}x {ring}") } else { ring });
            }
            cells.extend(inside.remove(&b).unwrap_or_default());
            let _ = writeln!(out, "{:>4} {:>4} {:>4}  {}", b.0, b.1, m.dims[&b], cells.join(", "));
        }
        let towers: Vec<String> = m
            .summands
            .iter()
            .flat_map(|(&(i, j), s)| s.keys().filter(|&&l| l > 1).map(move |&l| (i, j, l)))
            .map(|(i, j, l)| {
                let chain: Vec<String> = (0..l as i64).map(|t| format!("({i},{})", j - 2 * t)).collect();
                chain.join(" --u--> ")
            })
            .collect();
        if !towers.is_empty() {
            let _ = writeln!(out, "u-towers:");
            for t in towers {
                let _ = writeln!(out, "  {t}");
            }
        }
        let _ = writeln!(out, "poincare: {}", self.poincare);
        let _ = writeln!(out, "euler: {}", self.euler);
        out
    }
}

/// Spectral-sequence dump.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SseqReport {
    pub schema_version: u32,
    pub k: u32,
    pub reduced: bool,
    /// `pages[r]`: `"s,i,w"` ↦ dim for `r = 0 ..= r_stab`.
    pub pages: Vec<BTreeMap<String, usize>>,
    pub totals: Vec<usize>,
    pub r_stab: usize,
    pub e_infinity_total: usize,
    pub einfty_matches_gr: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mismatch: Option<String>,
}

impl SseqReport {
    pub fn new(t: &PageTable, k: u32, reduced: bool, verdict: Result<(), String>) -> Self {
        let shown = &t.pages[..=t.r_stab];
        SseqReport {
            schema_version: SCHEMA_VERSION,
            k,
            reduced,
            pages: shown
                .iter()
                .map(|p| p.iter().map(|(&(s, i, w), &d)| (format!("{s},{i},{w}"), d)).collect())
                .collect(),
            totals: shown.iter().map(|p| p.values().sum()).collect(),
            r_stab: t.r_stab,
            e_infinity_total: t.total(t.pages.len() - 1),
            einfty_matches_gr: verdict.is_ok(),
            mismatch: verdict.err(),
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        for (r, p) in self.pages.iter().enumerate() {
            let _ = writeln!(out, "E_{r}: total {}", self.totals[r]);
            for (pos, d) in p {
                let _ = writeln!(out, "  (s,i,j)=({pos}) {d}");
            }
        }
        let _ = writeln!(out, "stabilises at E_{}", self.r_stab);
        let _ = writeln!(
            out,
            "E_inf vs gr H: {}",
            if self.einfty_matches_gr { "match".to_string() } else { format!("MISMATCH {}", self.mismatch.clone().unwrap_or_default()) }
        );
        out
    }
}
