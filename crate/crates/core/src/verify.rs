//! Exhaustive property suites over every poset up to isomorphism.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::degrees::{all_subsets, degree_structure};
use crate::hierarchy::{classify, oracle_level, LevelLabel};
use crate::iso::posets_up_to_iso;
use crate::poset::FinitePoset;
use crate::reduce::{wadge_reduces, ReducibilityKind};
use crate::subset::SubsetMask;
use crate::{Error, Result};

/// Largest size accepted for exhaustive poset enumeration.
pub const MAX_VERIFY_SIZE: usize = 5;

/// Unlabelled poset counts for sizes 0..=5.
pub const KNOWN_POSET_COUNTS: [usize; 6] = [1, 1, 2, 5, 16, 63];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Every degree structure over all subsets has width <= 2 and no SLO
    /// violations.
    FiniteT0VeryGood,
    /// The chain classifier agrees with the brute-force oracle.
    ClassifyOracle,
    /// Complements swap levels and reductions transfer to complements.
    Duality,
    /// Equal level labels imply Wadge equivalence; Sigma levels are strictly
    /// ordered.
    LevelCoherence,
    /// Enumeration counts match the known sequence.
    Enumeration,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::FiniteT0VeryGood,
        Suite::ClassifyOracle,
        Suite::Duality,
        Suite::LevelCoherence,
        Suite::Enumeration,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::FiniteT0VeryGood => "finite-t0-very-good",
            Suite::ClassifyOracle => "classify-oracle",
            Suite::Duality => "duality",
            Suite::LevelCoherence => "level-coherence",
            Suite::Enumeration => "enumeration",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(Suite::name).collect();
                format!("unknown suite `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// A property failure on one poset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub size: usize,
    pub covers: Vec<(String, String)>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub max_size: usize,
    /// Posets checked per size, index = size.
    pub posets_per_size: Vec<usize>,
    pub findings: Vec<Finding>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

pub fn run_suite(suite: Suite, max_size: usize) -> Result<SuiteReport> {
    if max_size > MAX_VERIFY_SIZE {
        return Err(Error::CapExceeded {
            what: "verify size bound",
            got: max_size,
            cap: MAX_VERIFY_SIZE,
        });
    }
    let mut posets_per_size = Vec::new();
    let mut findings = Vec::new();
    for n in 0..=max_size {
        let posets = posets_up_to_iso(n)?;
        posets_per_size.push(posets.len());
        if suite == Suite::Enumeration {
            if posets.len() != KNOWN_POSET_COUNTS[n] {
                findings.push(Finding {
                    size: n,
                    covers: Vec::new(),
                    detail: format!("expected {} posets, enumerated {}", KNOWN_POSET_COUNTS[n], posets.len()),
                });
            }
            continue;
        }
        let mut per_poset: Vec<Finding> = posets
            .par_iter()
            .map(|p| check_poset(suite, p))
            .collect::<Result<Vec<Vec<Finding>>>>()?
            .into_iter()
            .flatten()
            .collect();
        findings.append(&mut per_poset);
    }
    findings.sort();
    Ok(SuiteReport {
        suite,
        max_size,
        posets_per_size,
        findings,
    })
}

fn finding(p: &FinitePoset, detail: String) -> Finding {
    Finding {
        size: p.len(),
        covers: p
            .covers()
            .iter()
            .map(|&(lo, hi)| (p.label(lo).to_owned(), p.label(hi).to_owned()))
            .collect(),
        detail,
    }
}

fn subsets(p: &FinitePoset) -> Vec<SubsetMask> {
    (0..1u64 << p.len()).map(|b| SubsetMask::from_bits(p, b)).collect()
}

/// Runs one suite's checks on a single poset.
pub fn check_poset(suite: Suite, p: &FinitePoset) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    match suite {
        Suite::FiniteT0VeryGood => {
            let d = degree_structure(p, all_subsets(p, MAX_VERIFY_SIZE)?, ReducibilityKind::Wadge)?;
            if d.diagnostics.max_antichain > 2 {
                out.push(finding(p, format!("antichain of {} degrees", d.diagnostics.max_antichain)));
            }
            for &(a, b) in &d.diagnostics.slo_violations {
                out.push(finding(
                    p,
                    format!(
                        "SLO fails for {} vs {}",
                        d.representative(a).key(),
                        d.representative(b).key()
                    ),
                ));
            }
        }
        Suite::ClassifyOracle => {
            for a in subsets(p) {
                let fast = classify(p, &a)?;
                let slow = oracle_level(p, &a, p.len() + 1)?;
                if fast != slow {
                    out.push(finding(p, format!("{a}: classify {fast:?}, oracle {slow:?}")));
                }
            }
        }
        Suite::Duality => {
            let all = subsets(p);
            for a in &all {
                let l = classify(p, a)?;
                let c = classify(p, &a.complement())?;
                if c != l.dual() {
                    out.push(finding(p, format!("{a}: complement level {c:?}, expected {:?}", l.dual())));
                }
            }
            for a in &all {
                for b in &all {
                    let f = wadge_reduces(p, a, b, ReducibilityKind::Wadge)?;
                    let g = wadge_reduces(p, &a.complement(), &b.complement(), ReducibilityKind::Wadge)?;
                    if f.is_some() != g.is_some() {
                        out.push(finding(p, format!("{a} <= {b} does not transfer to complements")));
                    }
                    if let Some(f) = f {
                        if f.preimage(p, &b.complement())? != a.complement() {
                            out.push(finding(p, format!("witness for {a} <= {b} fails on complements")));
                        }
                    }
                }
            }
        }
        Suite::LevelCoherence => out.extend(level_coherence(p)?),
        Suite::Enumeration => {}
    }
    Ok(out)
}

fn level_coherence(p: &FinitePoset) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    let all = subsets(p);
    let levels = all.iter().map(|a| classify(p, a)).collect::<Result<Vec<_>>>()?;
    let reduces = |i: usize, j: usize| -> Result<bool> {
        Ok(wadge_reduces(p, &all[i], &all[j], ReducibilityKind::Wadge)?.is_some())
    };
    // Same label: compare every member against the first one with that label.
    let mut first_with: Vec<(LevelLabel, usize)> = Vec::new();
    for (i, l) in levels.iter().enumerate() {
        match first_with.iter().find(|(label, _)| *label == l.label) {
            Some(&(_, r)) => {
                if !(reduces(i, r)? && reduces(r, i)?) {
                    out.push(finding(p, format!("{} and {} share {} but are not equivalent", all[i], all[r], l.label)));
                }
            }
            None => first_with.push((l.label, i)),
        }
    }
    let sigma: Vec<(usize, usize)> = first_with
        .iter()
        .filter_map(|&(label, i)| match label {
            LevelLabel::ProperSigma(n) => Some((n, i)),
            _ => None,
        })
        .collect();
    for &(m, i) in &sigma {
        for &(n, j) in &sigma {
            if m < n && !(reduces(i, j)? && !reduces(j, i)?) {
                out.push(finding(p, format!("ProperSigma({m}) is not strictly below ProperSigma({n})")));
            }
        }
    }
    Ok(out)
}
