use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ecomb::cardinalities::{chat_from_si_classes, si_relation, Selector};
use ecomb::combinators::{e_combination, p_combination, p_infty_extent, PInftySelector, PMode};
use ecomb::logic::{evaluate, rank_types_with, solution_set, Assignment, TypeCaps};
use ecomb::model_finder::{find_models, fin_spectrum, FinderCaps};
use ecomb::types_algebra::{isomorphic, rho, type_algebra, TypeSet};
use ecomb::{render_structure, Error, Result};

use crate::input;

/// Whether a report is a definite answer or bounded evidence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Definite,
    Bounded,
}

pub type Report = Result<(String, Status)>;

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub rank: usize,
    pub size: usize,
}

impl Caps {
    pub fn rank(&self, q: usize) -> Result<usize> {
        if q > self.rank {
            return Err(Error::CapExceeded(format!("rank {q} above --rank-cap {}", self.rank)));
        }
        Ok(q)
    }

    pub fn size(&self, n: usize) -> Result<usize> {
        if n > self.size {
            return Err(Error::CapExceeded(format!("size {n} above --size-cap {}", self.size)));
        }
        Ok(n)
    }
}

fn definite(s: String) -> Report {
    Ok((s, Status::Definite))
}

fn tuple_text(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn eval(structure: &Path, formula: &str, assign: Option<&str>) -> Report {
    let s = input::structure(structure)?;
    let f = input::formula_for(formula, s.sig())?;
    let free: Vec<String> = f.free_vars().into_iter().collect();
    if free.is_empty() || assign.is_some() {
        let asg: Assignment = match assign {
            Some(a) => input::assignment(a)?.into_iter().collect(),
            None => Assignment::new(),
        };
        return definite(format!("{}\n", evaluate(&s, &f, &asg)?));
    }
    let sols = solution_set(&s, &f, &free)?;
    let mut out = format!("solutions ({}): {}\n", free.join(","), sols.len());
    for t in &sols {
        writeln!(out, "{}", tuple_text(t)).unwrap();
    }
    definite(out)
}

pub fn types(structure: &Path, n: usize, rank: Option<usize>, list: bool, caps: Caps) -> Report {
    let s = input::structure(structure)?;
    let ta = type_algebra(&s, n)?;
    let m = ta.m();
    let mut out = format!("m_{n} = {m}\n");
    writeln!(out, "rho(bot,top) = {}", rho(&ta, &ta.bottom(), &ta.top())?).unwrap();
    if list {
        for (i, o) in ta.orbits.iter().enumerate() {
            writeln!(out, "t{i}: {} ({} tuples)", tuple_text(o.representative()), o.tuples.len()).unwrap();
        }
    }
    if let Some(q) = rank {
        let p = rank_types_with(&s, n, caps.rank(q)?, TypeCaps::default())?;
        writeln!(out, "rank-{q} {n}-types = {}", p.num_classes()).unwrap();
    }
    definite(out)
}

pub fn algebra(structure: &Path, n: usize, rho_args: &[String], extent: Option<&str>, elements: bool) -> Report {
    let s = input::structure(structure)?;
    let ta = type_algebra(&s, n)?;
    let m = ta.m();
    let cube = ta.cube();
    let mut out = format!("m_{n} = {m}\n");
    match ta.element_count() {
        Some(c) => writeln!(out, "|B_{n}| = 2^{m} = {c}").unwrap(),
        None => writeln!(out, "|B_{n}| = 2^{m}").unwrap(),
    }
    writeln!(out, "cube C_{m}: {} vertices, {} edges", cube.vertex_count(), cube.edge_count()).unwrap();
    if let [u, v] = rho_args {
        let u = TypeSet(input::type_set(u, m)?);
        let v = TypeSet(input::type_set(v, m)?);
        writeln!(out, "rho({}, {}) = {}", ta.label(&u), ta.label(&v), rho(&ta, &u, &v)?).unwrap();
    }
    if let Some(u) = extent {
        let u = TypeSet(input::type_set(u, m)?);
        let ext = ta.extent(&u)?;
        writeln!(out, "extent of {}: {} tuples", ta.label(&u), ext.len()).unwrap();
        for t in &ext {
            writeln!(out, "{}", tuple_text(t)).unwrap();
        }
    }
    if elements {
        for u in ta.elements()? {
            writeln!(out, "{}", ta.label(&u)).unwrap();
        }
    }
    definite(out)
}

pub fn iso(a: &Path, b: &Path) -> Report {
    let (a, b) = (input::structure(a)?, input::structure(b)?);
    match isomorphic(&a, &b)? {
        Some(map) => {
            let pairs: Vec<String> = map.iter().enumerate().map(|(i, j)| format!("{i}->{j}")).collect();
            definite(format!("isomorphic\nmap {}\n", pairs.join(" ")))
        }
        None => definite("not isomorphic\n".into()),
    }
}

fn overlap(arg: &str) -> Result<((usize, usize), (usize, usize))> {
    let bad = || Error::Invalid(format!("overlap '{arg}' is not b.e=b.e"));
    let pair = |t: &str| -> Result<(usize, usize)> {
        let (b, e) = t.split_once('.').ok_or_else(bad)?;
        Ok((b.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?))
    };
    let (l, r) = arg.split_once('=').ok_or_else(bad)?;
    Ok((pair(l)?, pair(r)?))
}

pub fn combine(mode: &str, files: &[PathBuf], overlaps: &[String], extra: Option<&PathBuf>, extent: bool) -> Report {
    let ss = files.iter().map(|p| input::structure(p)).collect::<Result<Vec<_>>>()?;
    if mode == "e" {
        if extra.is_some() || extent || !overlaps.is_empty() {
            return Err(Error::Invalid("--extra, --extent and --overlap apply to P-combinations".into()));
        }
        return definite(render_structure(&e_combination(&ss)?.base));
    }
    let pmode: PMode = match mode {
        "p" => PMode::General,
        "pd" => PMode::Disjoint,
        "pdr" => PMode::Repeat,
        _ => return Err(Error::Invalid(format!("unknown mode '{mode}' (e, p, pd, pdr)"))),
    };
    let ov = overlaps.iter().map(|o| overlap(o)).collect::<Result<Vec<_>>>()?;
    let extra = extra.map(|p| input::structure(p)).transpose()?;
    let pc = p_combination(&ss, pmode, &ov, extra.as_ref())?;
    if extent {
        definite(render_structure(&p_infty_extent(&pc)))
    } else {
        definite(render_structure(&pc.base))
    }
}

pub fn find_model(formula: &str, size: Option<usize>, spectrum: Option<usize>, all: bool, max_nodes: u64, caps: Caps) -> Report {
    let (f, sig) = input::formula_free(formula)?;
    f.require_sentence()?;
    match (size, spectrum) {
        (Some(n), None) => {
            let fc = FinderCaps { max_size: caps.size(n)?, max_nodes };
            let models = find_models(&f, &sig, n, if all { usize::MAX } else { 1 }, fc)?;
            if models.is_empty() {
                return definite(format!("no model of size {n}\n"));
            }
            let mut out = format!("{} model(s) of size {n}\n", models.len());
            for m in &models {
                out.push_str(&render_structure(m));
            }
            definite(out)
        }
        (None, Some(max)) => {
            let fc = FinderCaps { max_size: caps.size(max)?, max_nodes };
            let sp = fin_spectrum(&f, &sig, max, fc)?;
            if sp.is_empty() {
                return Ok((format!("no finite model up to {max}\n"), Status::Bounded));
            }
            let sizes: Vec<String> = sp.iter().map(|x| x.to_string()).collect();
            definite(format!("finite spectrum up to {max}: {}\n", sizes.join(",")))
        }
        _ => Err(Error::Invalid("give exactly one of --size and --spectrum".into())),
    }
}

pub fn semiisolate(structure: &Path, rank: usize, select: &str, caps: Caps) -> Report {
    let s = input::structure(structure)?;
    let selector = match select {
        "all" => Selector::All,
        "pinfty" => Selector::PInfty(PInftySelector {
            predicates: s
                .sig()
                .symbols()
                .iter()
                .filter(|x| x.arity == 1 && x.name.strip_prefix('P').is_some_and(|d| d.parse::<usize>().is_ok()))
                .map(|x| x.name.clone())
                .collect(),
        }),
        list => Selector::Elements(input::numbers(list)?.into_iter().map(|x| x as usize).collect()),
    };
    let si = si_relation(&s, &selector, caps.rank(rank)?)?;
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut out = format!("rank {rank}, {} elements, {} pairs\n", si.elements.len(), si.pairs.len());
    writeln!(out, "reflexive {}", yn(si.is_reflexive())).unwrap();
    writeln!(out, "symmetric {}", yn(si.is_symmetric())).unwrap();
    writeln!(out, "transitive {}", yn(si.is_transitive())).unwrap();
    if si.is_symmetric() {
        let classes: Vec<String> = si
            .classes()?
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        writeln!(out, "classes {}", classes.join(" ")).unwrap();
        writeln!(out, "chat from class sizes = {}", chat_from_si_classes(&si.class_sizes()?)?).unwrap();
    } else {
        for (a, b) in &si.pairs {
            writeln!(out, "{a} -> {b}").unwrap();
        }
    }
    definite(out)
}
