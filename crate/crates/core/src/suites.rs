//! The named verification suites and the generic-extension runs behind the CLI.

use serde::Serialize;
use serde_json::{json, Value};

use crate::chain::{chain_suite, default_chain_sets, generic_chain, ChainGenericConfig, ChainHierarchy, ChainScope, GenericChain};
use crate::fixtures;
use crate::fs::{check_compat_lemma, check_fs2_axioms, check_fs_axioms};
use crate::gap1::{FakeGap1Morass, MorassTree};
use crate::gap2::FakeGap2Morass;
use crate::mutate::{Mutation, MutationTarget};
use crate::report::{Check, Report};
use crate::topology::{
    antichain_contrast, default_dense_sets, generic_space, topology_suite, GenericConfig, GenericSpace, ScaleProfile,
    SuiteScope, TopologyHierarchy,
};
use crate::chain::ChainCondition;
use crate::{Error, Result};

/// Registered suites, sorted by name.
pub const SUITES: &[(&str, &str)] = &[
    ("antichain-contrast", "maximum antichains of the thinned forcings against the unthinned ones"),
    ("bar-decomposition", "bar decompositions and Lemma 2.6"),
    ("chain-5.x", "chain forcing: Lemmas 5.1-5.3, the p_β antichain, density"),
    ("compat-3.1", "Lemma 3.1 over every pair of conditions"),
    ("fs-axioms", "FS and FS₂ axioms of the topology hierarchy"),
    ("gap1-axioms", "(P0)-(P5), Lemmas 2.1 and 2.2"),
    ("gap2-axioms", "gap-2 axioms, embedding properties, Lemmas 2.4 and 2.5"),
    ("topology-4.x", "topology forcing: Lemmas 4.1-4.6 and 4.8(a)"),
];

/// Node budget for the maximum-antichain searches.
pub const ANTICHAIN_CAP: u64 = 50_000_000;

/// Largest unthinned `P` whose maximum antichain the chain suite computes.
const CHAIN_ANTICHAIN_LIMIT: usize = 500;

/// A morass read from a file.
#[derive(Clone, Debug)]
pub enum Subject {
    Gap1(FakeGap1Morass),
    Gap2(FakeGap2Morass),
}

impl Subject {
    /// A gap-2 morass carries its inner morass under `"G"`.
    pub fn from_json(s: &str) -> Result<Subject> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let parsed = if v.get("G").is_some() {
            serde_json::from_value(v).map(Subject::Gap2)
        } else {
            serde_json::from_value(v).map(Subject::Gap1)
        };
        parsed.map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        match self {
            Subject::Gap1(m) => m.to_json(),
            Subject::Gap2(m) => m.to_json(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    /// Fixture names; empty means the suite's defaults.
    pub fixtures: Vec<String>,
    /// A loaded morass with its label; replaces the fixtures.
    pub input: Option<(String, Subject)>,
    pub mutation: Option<&'static Mutation>,
    /// `B` for topology runs on an input morass.
    pub block: Option<usize>,
    /// Also run the slow parts (all pairwise checks, larger fixtures).
    pub full: bool,
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

fn unknown_suite(name: &str) -> Error {
    Error::Parse(format!("unknown suite {name:?}; registered suites: {}", suite_names().join(", ")))
}

fn tag(r: Report, label: &str, into: &mut Report) {
    for c in r.checks {
        into.push(Check { name: format!("{label}: {}", c.name), ..c });
    }
}

fn defaults(opts: &SuiteOptions, fallback: &[&str]) -> Vec<String> {
    if opts.fixtures.is_empty() {
        fallback.iter().map(|s| s.to_string()).collect()
    } else {
        opts.fixtures.clone()
    }
}

fn gap1_subjects(opts: &SuiteOptions, fallback: &[&str]) -> Result<Vec<(String, FakeGap1Morass)>> {
    let mut out = match &opts.input {
        Some((label, Subject::Gap1(m))) => vec![(label.clone(), m.clone())],
        Some((label, Subject::Gap2(_))) => {
            return Err(Error::Parse(format!("{label} is a gap-2 morass; this suite takes a gap-1 morass")))
        }
        None => {
            let names = match opts.mutation {
                Some(m) if opts.fixtures.is_empty() => vec![m.fixture.to_string()],
                _ => defaults(opts, fallback),
            };
            names.into_iter().map(|n| Ok((n.clone(), fixtures::gap1(&n)?))).collect::<Result<Vec<_>>>()?
        }
    };
    if let Some(mu) = opts.mutation {
        for (label, m) in &mut out {
            *m = mu.apply_gap1(m)?;
            label.push_str(&format!("+{}", mu.name));
        }
    }
    Ok(out)
}

fn gap2_subjects(opts: &SuiteOptions, fallback: &[&str]) -> Result<Vec<(String, FakeGap2Morass)>> {
    let mut out = match &opts.input {
        Some((label, Subject::Gap2(m))) => vec![(label.clone(), m.clone())],
        Some((label, Subject::Gap1(_))) => {
            return Err(Error::Parse(format!("{label} is a gap-1 morass; this suite takes a gap-2 morass")))
        }
        None => {
            let names = match opts.mutation {
                Some(m) if opts.fixtures.is_empty() => vec![m.fixture.to_string()],
                _ => defaults(opts, fallback),
            };
            names.into_iter().map(|n| Ok((n.clone(), fixtures::gap2(&n)?))).collect::<Result<Vec<_>>>()?
        }
    };
    if let Some(mu) = opts.mutation {
        for (label, m) in &mut out {
            *m = mu.apply_gap2(m)?;
            label.push_str(&format!("+{}", mu.name));
        }
    }
    Ok(out)
}

fn topology_subjects(opts: &SuiteOptions, fallback: &[&str]) -> Result<Vec<(String, TopologyHierarchy)>> {
    let profiles: Vec<(String, ScaleProfile)> = match &opts.input {
        Some((label, Subject::Gap2(m))) => {
            vec![(label.clone(), ScaleProfile { block: opts.block.unwrap_or(1), morass: m.clone() })]
        }
        Some((label, Subject::Gap1(_))) => {
            return Err(Error::Parse(format!("{label} is a gap-1 morass; the topology forcing needs a gap-2 morass")))
        }
        None => defaults(opts, fallback).into_iter().map(|n| Ok((n.clone(), fixtures::topology(&n)?))).collect::<Result<_>>()?,
    };
    profiles.into_iter().map(|(l, p)| Ok((l, TopologyHierarchy::build(&p)?))).collect()
}

fn chain_subjects(opts: &SuiteOptions, fallback: &[&str]) -> Result<Vec<(String, ChainHierarchy)>> {
    let morasses: Vec<(String, FakeGap1Morass)> = match &opts.input {
        Some((label, Subject::Gap1(m))) => vec![(label.clone(), m.clone())],
        Some((label, Subject::Gap2(_))) => {
            return Err(Error::Parse(format!("{label} is a gap-2 morass; the chain forcing needs a gap-1 morass")))
        }
        None => defaults(opts, fallback).into_iter().map(|n| Ok((n.clone(), fixtures::chain(&n)?))).collect::<Result<_>>()?,
    };
    morasses.into_iter().map(|(l, m)| Ok((l, ChainHierarchy::build(&m)?))).collect()
}

/// Which half of a two-forcing suite runs: `None` skips it, `Some` gives
/// the options for it.
type Half = Option<SuiteOptions>;

/// Sort the requested fixtures (or the input) into the topology and chain
/// halves of a suite that covers both forcings.
fn split_fixtures(opts: &SuiteOptions, top: &[&str], chain: &[&str]) -> Result<(Half, Half)> {
    if let Some(f) = opts.fixtures.iter().find(|f| !fixtures::TOPOLOGY_NAMES.contains(&f.as_str()) && !fixtures::CHAIN_NAMES.contains(&f.as_str())) {
        let known = [fixtures::TOPOLOGY_NAMES, fixtures::CHAIN_NAMES].concat();
        return Err(Error::Parse(format!("unknown fixture {f:?}; known: {}", known.join(", "))));
    }
    let with = |fixtures: Vec<String>, input| SuiteOptions { fixtures, input, ..opts.clone() };
    let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    Ok(match &opts.input {
        Some((_, Subject::Gap2(_))) => (Some(with(vec![], opts.input.clone())), None),
        Some((_, Subject::Gap1(_))) => (None, Some(with(vec![], opts.input.clone()))),
        None if opts.fixtures.is_empty() => (Some(with(owned(top), None)), Some(with(owned(chain), None))),
        None => {
            let pick = |known: &[&str]| {
                let v: Vec<String> = opts.fixtures.iter().filter(|f| known.contains(&f.as_str())).cloned().collect();
                (!v.is_empty()).then(|| with(v, None))
            };
            (pick(fixtures::TOPOLOGY_NAMES), pick(fixtures::CHAIN_NAMES))
        }
    })
}

/// A skipped half runs on no fixtures at all.
fn restrict(opts: &SuiteOptions, half: Half) -> SuiteOptions {
    half.unwrap_or_else(|| SuiteOptions { fixtures: vec![], input: None, ..opts.clone() })
}

/// The gap-1 validator plus the tree lemma.
pub fn gap1_report(m: &FakeGap1Morass) -> Report {
    let mut r = m.validate();
    match MorassTree::build(m) {
        Ok(t) => {
            let fails = t.failures();
            for part in ["a", "b", "c", "d"] {
                let lemma = format!("2.2({part})");
                let w = fails.iter().find(|f| f["lemma"] == lemma.as_str()).cloned();
                r.push(Check::from_failure(format!("Lemma {lemma}"), w, json!({"vertices": t.vertices().count()})));
            }
        }
        Err(e) => r.push(Check::fail("Lemma 2.2", json!({"tree": e.to_string()}))),
    }
    r
}

fn check_mutation(name: &str, opts: &SuiteOptions) -> Result<()> {
    let Some(m) = opts.mutation else { return Ok(()) };
    let ok = match m.target() {
        MutationTarget::Gap1 => name == "gap1-axioms",
        MutationTarget::Gap2 => name == "gap2-axioms" || name == "bar-decomposition",
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Parse(format!("mutation {} applies to {}, not {name}", m.name, m.suite())))
    }
}

/// Run one registered suite.  Check names carry the fixture as a prefix.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Report> {
    if !SUITES.iter().any(|s| s.0 == name) {
        return Err(unknown_suite(name));
    }
    check_mutation(name, opts)?;
    let mut rep = Report::new(name);
    match name {
        "gap1-axioms" => {
            for (l, m) in gap1_subjects(opts, fixtures::GAP1_NAMES)? {
                tag(gap1_report(&m), &l, &mut rep);
            }
        }
        "gap2-axioms" => {
            for (l, m) in gap2_subjects(opts, fixtures::GAP2_NAMES)? {
                tag(m.validate(), &l, &mut rep);
            }
        }
        "bar-decomposition" => {
            for (l, m) in gap2_subjects(opts, fixtures::GAP2_NAMES)? {
                tag(m.bar_report(), &l, &mut rep);
            }
        }
        "fs-axioms" => {
            let fb: &[&str] = if opts.full { fixtures::TOPOLOGY_NAMES } else { &["minimal-b1", "two-step-b1"] };
            for (l, h) in topology_subjects(opts, fb)? {
                tag(check_fs_axioms(&h, "FS"), &l, &mut rep);
                tag(check_fs2_axioms(&h.thinned_system(), &h.q_system()), &l, &mut rep);
            }
        }
        "compat-3.1" => {
            let (tops, chains) = split_fixtures(opts, &["minimal-b2"], &["h3"])?;
            for (l, h) in topology_subjects(&restrict(opts, tops), &[])? {
                tag(check_compat_lemma(&h)?, &l, &mut rep);
            }
            for (l, h) in chain_subjects(&restrict(opts, chains), &[])? {
                // the chain forcing's compatibility lemma is the local one
                let main = crate::chain::checks::lemma_5_2(&h)?.into_iter().next().expect("Lemma 5.2 check");
                rep.push(Check { name: format!("{l}: Lemma 3.1 (local supports)"), ..main });
            }
        }
        "topology-4.x" => {
            for (l, h) in topology_subjects(opts, &["minimal-b1", "two-step-b1"])? {
                let pairwise = opts.full || l == "minimal-b1" || opts.input.is_some();
                tag(topology_suite(&h, SuiteScope { pairwise })?, &l, &mut rep);
            }
        }
        "chain-5.x" => {
            for (l, h) in chain_subjects(opts, fixtures::CHAIN_NAMES)? {
                let antichains = opts.full || h.unthinned().len() <= CHAIN_ANTICHAIN_LIMIT;
                tag(chain_suite(&h, ChainScope { antichains, antichain_cap: ANTICHAIN_CAP })?, &l, &mut rep);
            }
        }
        "antichain-contrast" => {
            let (tops, chains) = split_fixtures(opts, &["minimal-b1"], &["small"])?;
            for (l, h) in topology_subjects(&restrict(opts, tops), &[])? {
                rep.push(Check { name: format!("{l}: topology"), ..antichain_contrast(&h, ANTICHAIN_CAP) });
            }
            for (l, h) in chain_subjects(&restrict(opts, chains), &[])? {
                rep.push(Check { name: format!("{l}: chain"), ..crate::chain::checks::antichain_contrast(&h, ANTICHAIN_CAP) });
            }
        }
        _ => unreachable!("registered above"),
    }
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Forcing {
    Topology,
    Chain,
}

/// A generic extension over one fixture.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "forcing", rename_all = "lowercase")]
pub enum Extension {
    Topology { fixture: String, seed: Option<u64>, space: GenericSpace },
    Chain { fixture: String, seed: Option<u64>, result: GenericChain },
}

impl Extension {
    pub fn report(&self) -> &Report {
        match self {
            Extension::Topology { space, .. } => &space.report,
            Extension::Chain { result, .. } => &result.report,
        }
    }
}

/// Meet the default dense sets from the empty condition.
pub fn extend(forcing: Forcing, fixture: &str, seed: Option<u64>) -> Result<Extension> {
    match forcing {
        Forcing::Topology => {
            let h = TopologyHierarchy::build(&fixtures::topology(fixture)?)?;
            let cfg = GenericConfig { start: h.rect().empty(), sets: default_dense_sets(&h), seed };
            Ok(Extension::Topology { fixture: fixture.into(), seed, space: generic_space(&h, &cfg)? })
        }
        Forcing::Chain => {
            let h = ChainHierarchy::build(&fixtures::chain(fixture)?)?;
            let cfg = ChainGenericConfig { start: ChainCondition::EMPTY, sets: default_chain_sets(&h), seed };
            Ok(Extension::Chain { fixture: fixture.into(), seed, result: generic_chain(&h, &cfg)? })
        }
    }
}
