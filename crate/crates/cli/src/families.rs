use std::fmt::Write as _;
use std::path::PathBuf;

use ecomb::cardinalities::{
    card_profile, complement_family, recover_generators, semigroup_set, validate_complete_pinf, CardinalitySet,
    PinfValidation, Recovered,
};
use ecomb::closure::{
    classify, closure_disjoint, closure_e, finite_approximable, is_accumulation_point, least_generating_set,
    Decision, FamilyDescriptor, Generator, GeneratingSet, OpTag, TheoryRef, Verdict,
};
use ecomb::model_finder::FinderCaps;
use ecomb::spectra::{check_spectrum_laws, e_spectrum, p_spectrum_disjoint, RelativeClass, SpectrumOptions};
use ecomb::{Error, Result};

use crate::commands::{Caps, Report, Status};
use crate::input;

const LISTED: u64 = 12;

fn status_of(v: &Verdict) -> Status {
    if v.is_definite() {
        Status::Definite
    } else {
        Status::Bounded
    }
}

fn decision(label: &str, d: Decision) -> Report {
    let st = status_of(&d.verdict);
    Ok((format!("{label}: {d}\n"), st))
}

fn closed(fam: &FamilyDescriptor, op: OpTag) -> Result<FamilyDescriptor> {
    if fam.languages_disjoint() {
        return closure_disjoint(fam, op);
    }
    match op {
        OpTag::E => closure_e(fam),
        OpTag::P | OpTag::Pd if fam.is_finite() => Ok(fam.clone()),
        _ => Err(Error::Unsupported(format!(
            "no exact {op}-closure for the same-language family '{}'",
            fam.name
        ))),
    }
}

/// The rule behind each kind of addition.
fn additions_report(fam: &FamilyDescriptor, out: &FamilyDescriptor, op: OpTag) -> String {
    let mut s = String::new();
    if fam.is_finite() && op != OpTag::Pdr {
        writeln!(s, "[finite-family] closure unchanged").unwrap();
    }
    let t0 = out.added_t0.minus(&fam.added_t0);
    let (t0_rule, inf_rule) = match op {
        OpTag::E => ("repeated-size", "unbounded-sizes"),
        _ => ("p-infinity-empty-language", "p-infinity-empty-language"),
    };
    if !t0.is_empty_set() {
        if t0.is_infinite() {
            writeln!(s, "[{t0_rule}] added T0(n) for n in {t0}").unwrap();
        } else {
            for n in t0.members_up_to(t0.max_finite().unwrap_or(0)) {
                writeln!(s, "[{t0_rule}] added T0({n})").unwrap();
            }
        }
    }
    if out.added_t0_inf && !fam.added_t0_inf {
        writeln!(s, "[{inf_rule}] added T0inf").unwrap();
    }
    for t in out.added.iter().skip(fam.added.len()) {
        writeln!(s, "[unary-limit] added {t}").unwrap();
    }
    s
}

fn member_list(ms: &[TheoryRef], more: bool) -> String {
    let mut parts: Vec<String> = ms.iter().map(|t| t.to_string()).collect();
    if more {
        parts.push("..".into());
    }
    parts.join(", ")
}

pub struct ClosureArgs {
    pub family: PathBuf,
    pub op: String,
    pub least: bool,
    pub classify: bool,
    pub accumulation: Option<String>,
    pub approximable: Option<String>,
    pub rank: usize,
    pub probe: usize,
    pub size: usize,
}

pub fn closure(a: &ClosureArgs, caps: Caps) -> Report {
    let fam = input::family(&a.family)?;
    let q = caps.rank(a.rank)?;
    if let Some(t) = &a.accumulation {
        let t = input::theory(t)?;
        return decision(&format!("accumulation point {t}"), is_accumulation_point(&fam, &t, q, a.probe)?);
    }
    if let Some(t) = &a.approximable {
        let t = input::theory(t)?;
        let fc = FinderCaps { max_size: caps.size(a.size)?, ..FinderCaps::default() };
        return decision(&format!("finitely approximable {t}"), finite_approximable(&t, q, a.size, fc)?);
    }
    if a.classify {
        let r = classify(&fam, a.probe)?;
        let st = if r.findings.iter().all(|f| f.verdict.is_definite()) { Status::Definite } else { Status::Bounded };
        return Ok((r.to_string(), st));
    }
    if a.least {
        return match least_generating_set(&fam, a.probe)? {
            GeneratingSet::Least { family, isolators } => {
                let ms = family.members(a.probe)?;
                let more = !family.is_finite();
                let mut out = format!("least generating set: {}\n", member_list(&ms, more));
                for (t, f) in &isolators {
                    writeln!(out, "isolating {t}: {f}").unwrap();
                }
                Ok((out, Status::Definite))
            }
            GeneratingSet::NoneExists { member, reason } => {
                Ok((format!("no least generating set: {member} {reason}\n"), Status::Definite))
            }
        };
    }
    let op: OpTag = a.op.parse()?;
    let out = closed(&fam, op)?;
    let mut text = format!("family {}\nop {op}\n", fam.name);
    text.push_str(&additions_report(&fam, &out, op));
    let added = out.additions(LISTED);
    let infinite = out.added_t0.minus(&fam.added_t0).is_infinite();
    if added.is_empty() {
        writeln!(text, "closure adds nothing").unwrap();
    } else {
        writeln!(text, "added members: {}", member_list(&added, infinite)).unwrap();
    }
    Ok((text, Status::Definite))
}

pub struct SpectrumArgs {
    pub family: PathBuf,
    pub relative: String,
    pub laws: Option<String>,
    pub p_disjoint: bool,
    pub bounded: bool,
    pub rank: usize,
    pub probe: usize,
}

pub fn spectrum(a: &SpectrumArgs, caps: Caps) -> Report {
    let fam = input::family(&a.family)?;
    let class: RelativeClass = a.relative.parse()?;
    let opts = SpectrumOptions { bounded: a.bounded, rank: caps.rank(a.rank)?, probe: a.probe };
    if let Some(cells) = &a.laws {
        let cells = cells.split(',').map(|c| c.parse()).collect::<Result<Vec<RelativeClass>>>()?;
        let r = check_spectrum_laws(&fam, &class, &cells, opts)?;
        if !r.holds() {
            return Err(Error::Invalid(format!("spectrum laws fail:\n{r}")));
        }
        let st = if r.additivity.is_some() { Status::Definite } else { Status::Bounded };
        return Ok((format!("{r}\n"), st));
    }
    let v = if a.p_disjoint { p_spectrum_disjoint(&fam, &class)? } else { e_spectrum(&fam, &class, opts)? };
    let st = if v.is_exact() { Status::Definite } else { Status::Bounded };
    let kind = if a.p_disjoint { "p-spectrum" } else { "e-spectrum" };
    Ok((format!("{kind} {v}\n"), st))
}

fn list(xs: impl IntoIterator<Item = u64>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub enum CardsetCmd {
    Gen { k: String, bound: u64, literal_union: bool },
    Recover { sample: String, bound: u64 },
    Validate { k: String, complete: bool },
    Profile { family: PathBuf, op: String },
    Complement { set: String },
}

pub fn cardset(cmd: &CardsetCmd) -> Report {
    let out = match cmd {
        CardsetCmd::Gen { k, bound, literal_union } => {
            let k = input::numbers(k)?;
            if k.is_empty() || k.contains(&0) {
                return Err(Error::Precondition("generators must be positive and nonempty".into()));
            }
            let (set, members) = if *literal_union {
                let s = CardinalitySet::Progressions(k.clone());
                let m = s.members_up_to(*bound);
                (s, m)
            } else {
                (CardinalitySet::sum_closure(k.iter().copied()), semigroup_set(&k, *bound)?)
            };
            format!("set = {set}\nmembers up to {bound}: {}\n", list(members))
        }
        CardsetCmd::Recover { sample, bound } => match recover_generators(&input::numbers(sample)?, *bound) {
            Recovered::Generators(k) => format!("K = {{{}}}\n", list(k)),
            Recovered::Inconsistent { missing } => format!("inconsistent: {missing} missing\n"),
        },
        CardsetCmd::Validate { k, complete } => match validate_complete_pinf(&input::numbers(k)?, *complete) {
            PinfValidation::Ok(Some(k0)) => format!("ok k0 = {k0}\n"),
            PinfValidation::Ok(None) => "ok\n".to_string(),
            PinfValidation::Reject { offending, k0 } => format!("reject: {offending} not in {k0}Z+\n"),
        },
        CardsetCmd::Profile { family, op } => {
            let fam = input::family(family)?;
            format!("{}\n", card_profile(&fam, op.parse()?)?)
        }
        CardsetCmd::Complement { set } => {
            let y: CardinalitySet = set.parse()?;
            let fam = complement_family(&y)?;
            let Some(Generator::EmptyLang { spectrum, .. }) = fam.source_generator() else {
                unreachable!("complement families are empty-language generators")
            };
            let mut out = format!("family spectrum {spectrum}\n");
            for op in [OpTag::P, OpTag::Pd, OpTag::Pdr] {
                writeln!(out, "cbar_{op} = {}", card_profile(&fam, op)?.cbar).unwrap();
            }
            out
        }
    };
    Ok((out, Status::Definite))
}
