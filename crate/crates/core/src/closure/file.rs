use std::collections::BTreeMap;
use std::path::Path;

use super::family::{FamilyDescriptor, Generator};
use super::ops::build_prop33_family;
use super::spectrum::CardinalitySpectrum;
use super::theory::{Limit, TheoryRef};
use crate::error::{Error, Result};
use crate::structure::{parse_structure, Structure};

const SPECTRUM_HORIZON: u64 = 64;

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("family line {line}: {msg}"))
}

fn flag(v: &str, line: usize) -> Result<bool> {
    match v {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        _ => Err(bad(line, format!("expected true or false, got '{v}'"))),
    }
}

struct Params<'a> {
    line: usize,
    kv: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn new(words: &[&'a str], line: usize) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| bad(line, format!("'{w}' is not key=value")))?;
            if kv.insert(k, v).is_some() {
                return Err(bad(line, format!("key '{k}' given twice")));
            }
        }
        Ok(Params { line, kv })
    }

    fn take(&mut self, k: &str) -> Result<&'a str> {
        self.kv.remove(k).ok_or_else(|| bad(self.line, format!("missing {k}=")))
    }

    fn num(&mut self, k: &str) -> Result<usize> {
        let v = self.take(k)?;
        v.parse().map_err(|_| bad(self.line, format!("{k}={v} is not a number")))
    }

    fn flag_or(&mut self, k: &str, default: bool) -> Result<bool> {
        match self.kv.remove(k) {
            Some(v) => flag(v, self.line),
            None => Ok(default),
        }
    }

    fn finish(self) -> Result<()> {
        match self.kv.keys().next() {
            Some(k) => Err(bad(self.line, format!("unknown key '{k}'"))),
            None => Ok(()),
        }
    }
}

fn limit_named(name: &str) -> Option<Limit> {
    [Limit::OmegaCube, Limit::DiscreteOrder, Limit::DenseOrder]
        .into_iter()
        .find(|l| l.name() == name)
}

/// Reads a family file; `load` resolves structure file names.
pub fn parse_family(text: &str, load: &dyn Fn(&str) -> Result<Structure>) -> Result<FamilyDescriptor> {
    let mut name = None;
    let mut kind = None;
    let mut members = Vec::new();
    let mut generator: Option<(usize, Vec<&str>)> = None;
    let mut disjoint_decl = None;
    let mut spectrum: Option<CardinalitySpectrum> = None;
    let mut ended = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if ended {
            return Err(bad(line, "text after 'end'"));
        }
        let (head, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        let words: Vec<&str> = rest.split_whitespace().collect();
        match head {
            "family" if !rest.is_empty() => name = Some(rest.to_string()),
            "kind" => kind = Some(rest.to_string()),
            "member" => members.push(match words.as_slice() {
                ["T0", n] => TheoryRef::T0(n.parse().map_err(|_| bad(line, format!("bad size '{n}'")))?),
                ["T0inf"] => TheoryRef::T0Inf,
                ["limit", l] => TheoryRef::Limit(limit_named(l).ok_or_else(|| bad(line, format!("unknown limit '{l}'")))?),
                [file] => TheoryRef::Fin(load(file)?),
                _ => return Err(bad(line, "malformed member")),
            }),
            "generator" if !words.is_empty() => generator = Some((line, words)),
            "languages" => {
                let v = rest.strip_prefix("disjoint=").ok_or_else(|| bad(line, "expected disjoint=<bool>"))?;
                disjoint_decl = Some(flag(v, line)?);
            }
            "spectrum" => spectrum = Some(rest.parse()?),
            "end" => ended = true,
            _ => return Err(bad(line, format!("unknown directive '{head}'"))),
        }
    }
    if !ended {
        return Err(Error::Invalid("family file lacks 'end'".into()));
    }
    let name = name.ok_or_else(|| Error::Invalid("family file lacks 'family <name>'".into()))?;
    let fam = match kind.as_deref() {
        Some("explicit") => {
            if generator.is_some() {
                return Err(Error::Invalid("explicit family with a generator line".into()));
            }
            FamilyDescriptor::explicit(name, members)?
        }
        Some("generator") => {
            if !members.is_empty() {
                return Err(Error::Invalid("generator family with member lines".into()));
            }
            let (line, words) = generator.ok_or_else(|| Error::Invalid("generator family lacks 'generator'".into()))?;
            build_generator(name, words[0], Params::new(&words[1..], line)?, spectrum.take(), load)?
        }
        Some(k) => return Err(Error::Invalid(format!("unknown kind '{k}'"))),
        None => return Err(Error::Invalid("family file lacks 'kind'".into())),
    };
    if let Some(d) = disjoint_decl {
        if d != fam.languages_disjoint() {
            return Err(Error::Invalid(format!(
                "declared languages disjoint={d} but the members give {}",
                fam.languages_disjoint()
            )));
        }
    }
    if let Some(sp) = spectrum {
        if !sp.agrees_with(&fam.spectrum(), SPECTRUM_HORIZON) {
            return Err(Error::Invalid(format!("declared spectrum {sp} disagrees with {}", fam.spectrum())));
        }
    }
    Ok(fam)
}

fn build_generator(
    name: String,
    kind: &str,
    mut p: Params<'_>,
    spectrum: Option<CardinalitySpectrum>,
    load: &dyn Fn(&str) -> Result<Structure>,
) -> Result<FamilyDescriptor> {
    let line = p.line;
    let fam = match kind {
        "ncube_seq" => {
            let disjoint = p.flag_or("disjoint", false)?;
            FamilyDescriptor::generator(name, Generator::NcubeSeq { disjoint })?
        }
        "disjoint_relabel" => {
            let base = load(p.take("base")?)?;
            FamilyDescriptor::generator(name, Generator::DisjointRelabel { base })?
        }
        "empty_lang" => {
            let tagged = p.flag_or("tagged", false)?;
            let spectrum = spectrum.ok_or_else(|| bad(line, "empty_lang needs a 'spectrum' line"))?;
            p.finish()?;
            return FamilyDescriptor::generator(name, Generator::EmptyLang { spectrum, tagged });
        }
        "iilu" => {
            let n = p.num("n")?;
            let mu = p.num("mu")?;
            FamilyDescriptor::generator(name, Generator::Iilu { n, mu })?
        }
        "ek_classes" => {
            let k = p.num("k")?;
            let disjoint = p.flag_or("disjoint", false)?;
            FamilyDescriptor::generator(name, Generator::EkClasses { k, disjoint })?
        }
        "perfect" => {
            let n = p.num("n")?;
            FamilyDescriptor::generator(name, Generator::Perfect { n })?
        }
        "power_family" => {
            let (m, l, n) = (p.num("m")?, p.num("l")?, p.num("n")?);
            let mut fam = crate::spectra::power_family(m, l, n)?;
            fam.name = name;
            fam
        }
        "prop33" => {
            let base = load(p.take("base")?)?;
            let count = p.num("count")?;
            let mut fam = build_prop33_family(&base, count)?.0;
            fam.name = name;
            fam
        }
        _ => return Err(bad(line, format!("unknown generator kind '{kind}'"))),
    };
    p.finish()?;
    if let Some(sp) = spectrum {
        if !sp.agrees_with(&fam.spectrum(), SPECTRUM_HORIZON) {
            return Err(bad(line, format!("declared spectrum {sp} disagrees with {}", fam.spectrum())));
        }
    }
    Ok(fam)
}

/// Reads a family file, resolving structure files relative to it.
pub fn load_family(path: &Path) -> Result<FamilyDescriptor> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let load = move |f: &str| -> Result<Structure> {
        let p = dir.join(f);
        let text = std::fs::read_to_string(&p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
        parse_structure(&text)
    };
    parse_family(&text, &load)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types_algebra::make_ncube;

    fn no_files(f: &str) -> Result<Structure> {
        match f {
            "q2.struct" => make_ncube(2),
            _ => Err(Error::Invalid(format!("no file {f}"))),
        }
    }

    #[test]
    fn explicit_and_generator() {
        let fam = parse_family(
            "family small\nkind explicit\nmember T0 3\nmember T0inf\nmember q2.struct # square\nlanguages disjoint=true\nend\n",
            &no_files,
        )
        .unwrap();
        assert_eq!(fam.members(10).unwrap().len(), 3);
        let fam = parse_family(
            "family cubes\nkind generator\ngenerator ncube_seq disjoint=true\nlanguages disjoint=true\nspectrum 2^n:1\nend",
            &no_files,
        )
        .unwrap();
        assert!(fam.languages_disjoint());
        let fam = parse_family(
            "family fives\nkind generator\ngenerator empty_lang tagged=true\nspectrum 5:inf\nend",
            &no_files,
        )
        .unwrap();
        assert_eq!(fam.spectrum().multiplicity(5), crate::closure::Mult::Infinite);
    }

    #[test]
    fn rejects_inconsistent_metadata() {
        let cases = [
            "family x\nkind generator\ngenerator ncube_seq disjoint=false\nlanguages disjoint=true\nend",
            "family x\nkind generator\ngenerator ncube_seq\nspectrum 1,2,..:1\nend",
            "family x\nkind explicit\nmember T0 1\nmember T0 1\nend",
            "family x\nkind explicit\nmember T0 1\n",
            "family x\nkind generator\ngenerator iilu n=2\nend",
            "family x\nkind generator\ngenerator iilu n=2 mu=1 extra=3\nend",
            "family x\nkind generator\ngenerator empty_lang\nend",
            "family x\nkind explicit\nmember missing.struct\nend",
        ];
        for c in cases {
            assert!(parse_family(c, &no_files).is_err(), "{c}");
        }
    }
}
