use std::collections::BTreeSet;
use std::path::Path;

use ecomb::closure::{load_family, FamilyDescriptor, Limit, TheoryRef};
use ecomb::logic::{parse_formula, parse_formula_untyped, Formula};
use ecomb::model_finder::signature_of;
use ecomb::{parse_structure, Error, Result, Signature, Structure};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn structure(path: &Path) -> Result<Structure> {
    parse_structure(&read(path)?)
}

pub fn family(path: &Path) -> Result<FamilyDescriptor> {
    load_family(path)
}

/// Formula text, or the contents of a file when written `@file`.
pub fn formula_text(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(p) => Ok(read(Path::new(p))?.trim().to_string()),
        None => Ok(arg.to_string()),
    }
}

pub fn formula_for(arg: &str, sig: &Signature) -> Result<Formula> {
    parse_formula(&formula_text(arg)?, sig)
}

/// A formula with its signature read off the symbols it uses.
pub fn formula_free(arg: &str) -> Result<(Formula, Signature)> {
    let f = parse_formula_untyped(&formula_text(arg)?)?;
    let sig = signature_of(&f)?;
    Ok((f, sig))
}

/// `T0:<n>`, `T0inf`, `limit:<name>`, or a structure file.
pub fn theory(arg: &str) -> Result<TheoryRef> {
    if arg == "T0inf" {
        return Ok(TheoryRef::T0Inf);
    }
    if let Some(n) = arg.strip_prefix("T0:") {
        return n
            .parse()
            .map(TheoryRef::T0)
            .map_err(|_| Error::Invalid(format!("bad size in '{arg}'")));
    }
    if let Some(name) = arg.strip_prefix("limit:") {
        return [Limit::OmegaCube, Limit::DiscreteOrder, Limit::DenseOrder]
            .into_iter()
            .find(|l| l.name() == name)
            .map(TheoryRef::Limit)
            .ok_or_else(|| Error::Invalid(format!("unknown limit '{name}'")));
    }
    Ok(TheoryRef::Fin(structure(Path::new(arg))?))
}

pub fn numbers(arg: &str) -> Result<BTreeSet<u64>> {
    arg.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Error::Invalid(format!("'{x}' is not a number"))))
        .collect()
}

/// `x=0,y=2` assignments.
pub fn assignment(arg: &str) -> Result<Vec<(String, usize)>> {
    arg.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("'{kv}' is not var=element")))?;
            let v = v.parse().map_err(|_| Error::Invalid(format!("'{v}' is not an element")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// Type-algebra elements written as type indices `0,2` or `bot` / `top`.
pub fn type_set(arg: &str, m: usize) -> Result<BTreeSet<usize>> {
    match arg {
        "bot" | "bottom" => Ok(BTreeSet::new()),
        "top" => Ok((0..m).collect()),
        _ => Ok(numbers(arg)?.into_iter().map(|x| x as usize).collect()),
    }
}
