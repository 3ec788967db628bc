//! Colour refinement, canonical labelling and (pointed) isomorphism search.
//!
//! Colours are always renamed by the sorted order of their refinement
//! signatures, so the colouring of a structure is an isomorphism invariant and
//! colours of two structures refined jointly are directly comparable.

use crate::structure::Structure;

type Entry = (u32, Vec<usize>);

struct Incidence {
    by_elem: Vec<Vec<Entry>>,
}

impl Incidence {
    fn new(s: &Structure) -> Self {
        let mut by_elem = vec![Vec::new(); s.size()];
        for (sym, table) in s.tables().iter().enumerate() {
            for t in table {
                let mut seen = Vec::new();
                for &e in t {
                    if !seen.contains(&e) {
                        seen.push(e);
                        by_elem[e].push((sym as u32, t.clone()));
                    }
                }
            }
        }
        Incidence { by_elem }
    }
}

type Sig = (u32, Vec<(u32, u32, Vec<u32>)>);

fn signature(inc: &Incidence, colors: &[u32], v: usize) -> Sig {
    let mut parts: Vec<(u32, u32, Vec<u32>)> = inc.by_elem[v]
        .iter()
        .map(|(sym, t)| {
            let mask = t
                .iter()
                .enumerate()
                .filter(|(_, &e)| e == v)
                .fold(0u32, |m, (i, _)| m | (1 << i));
            (*sym, mask, t.iter().map(|&e| colors[e]).collect())
        })
        .collect();
    parts.sort_unstable();
    (colors[v], parts)
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Refines several colourings with a shared colour naming until stable.
fn refine_joint(incs: &[&Incidence], colors: &mut [Vec<u32>]) {
    loop {
        let before: usize = colors.iter().map(|c| distinct(c)).sum();
        let sigs: Vec<Vec<Sig>> = incs
            .iter()
            .zip(colors.iter())
            .map(|(inc, c)| (0..c.len()).map(|v| signature(inc, c, v)).collect())
            .collect();
        let mut all: Vec<&Sig> = sigs.iter().flatten().collect();
        all.sort_unstable();
        all.dedup();
        for (c, ss) in colors.iter_mut().zip(&sigs) {
            for (v, s) in ss.iter().enumerate() {
                c[v] = all.binary_search(&s).expect("present") as u32;
            }
        }
        let after: usize = colors.iter().map(|c| distinct(c)).sum();
        if after == before {
            break;
        }
    }
}

fn initial_colors(size: usize, points: &[usize]) -> Vec<u32> {
    let mut c = vec![0u32; size];
    for (i, &p) in points.iter().enumerate() {
        if c[p] == 0 {
            c[p] = i as u32 + 1;
        }
    }
    c
}

/// The non-singleton cell to branch on: smallest, ties broken by colour.
fn target_cell(colors: &[u32]) -> Option<u32> {
    let mut counts = std::collections::BTreeMap::new();
    for &c in colors {
        *counts.entry(c).or_insert(0usize) += 1;
    }
    counts
        .into_iter()
        .filter(|&(_, n)| n > 1)
        .min_by_key(|&(c, n)| (n, c))
        .map(|(c, _)| c)
}

fn transposition_is_automorphism(s: &Structure, inc: &Incidence, x: usize, y: usize) -> bool {
    let swap = |e: usize| {
        if e == x {
            y
        } else if e == y {
            x
        } else {
            e
        }
    };
    [x, y].iter().all(|&v| {
        inc.by_elem[v].iter().all(|(sym, t)| {
            let img: Vec<usize> = t.iter().map(|&e| swap(e)).collect();
            s.holds(*sym as usize, &img)
        })
    })
}

/// Sorted, relabelled tables: the encoding compared between leaves.
pub(crate) fn encode(s: &Structure, perm: &[usize]) -> Vec<u32> {
    let mut out = vec![s.size() as u32];
    for table in s.tables() {
        let mut mapped: Vec<Vec<u32>> = table
            .iter()
            .map(|t| t.iter().map(|&e| perm[e] as u32).collect())
            .collect();
        mapped.sort_unstable();
        out.push(mapped.len() as u32);
        out.extend(mapped.into_iter().flatten());
    }
    out
}

/// Canonical relabelling (old element -> new position) of `s` with the given
/// points individualized in order.
pub(crate) fn canonical_labeling(s: &Structure, points: &[usize]) -> Vec<usize> {
    let inc = Incidence::new(s);
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    canon_search(s, &inc, initial_colors(s.size(), points), points, &mut best);
    best.map(|(_, p)| p).unwrap_or_default()
}

fn canon_search(
    s: &Structure,
    inc: &Incidence,
    mut colors: Vec<u32>,
    points: &[usize],
    best: &mut Option<(Vec<u32>, Vec<usize>)>,
) {
    refine_joint(&[inc], std::slice::from_mut(&mut colors));
    match target_cell(&colors) {
        None => {
            let perm: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
            let mut code: Vec<u32> = points.iter().map(|&p| perm[p] as u32).collect();
            code.extend(encode(s, &perm));
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, perm));
            }
        }
        Some(cell) => {
            let members: Vec<usize> = (0..s.size()).filter(|&v| colors[v] == cell).collect();
            let mut reps: Vec<usize> = Vec::new();
            for &x in &members {
                if reps
                    .iter()
                    .any(|&r| transposition_is_automorphism(s, inc, r, x))
                {
                    continue;
                }
                reps.push(x);
                let mut next = colors.clone();
                next[x] = u32::MAX;
                canon_search(s, inc, next, points, best);
            }
        }
    }
}

/// Invariant of a pointed structure: equal for tuples in one automorphism orbit.
pub(crate) fn pointed_invariant(s: &Structure, points: &[usize]) -> Vec<u32> {
    let inc = Incidence::new(s);
    let mut colors = initial_colors(s.size(), points);
    refine_joint(&[&inc], std::slice::from_mut(&mut colors));
    let mut key: Vec<u32> = points.iter().map(|&p| colors[p]).collect();
    let mut sorted = colors.clone();
    sorted.sort_unstable();
    key.push(u32::MAX);
    key.extend(sorted);
    key
}

/// Searches for an isomorphism of `a` onto `b` mapping `ap` to `bp`
/// pointwise. Both structures must share the same symbol order.
pub(crate) fn find_isomorphism(
    a: &Structure,
    ap: &[usize],
    b: &Structure,
    bp: &[usize],
) -> Option<Vec<usize>> {
    if a.size() != b.size() || ap.len() != bp.len() || a.sig() != b.sig() {
        return None;
    }
    for i in 0..ap.len() {
        for j in 0..ap.len() {
            if (ap[i] == ap[j]) != (bp[i] == bp[j]) {
                return None;
            }
        }
    }
    if a.tables().iter().zip(b.tables()).any(|(x, y)| x.len() != y.len()) {
        return None;
    }
    let ia = Incidence::new(a);
    let ib = Incidence::new(b);
    iso_search(
        a,
        b,
        &ia,
        &ib,
        initial_colors(a.size(), ap),
        initial_colors(b.size(), bp),
    )
}

fn iso_search(
    a: &Structure,
    b: &Structure,
    ia: &Incidence,
    ib: &Incidence,
    ca: Vec<u32>,
    cb: Vec<u32>,
) -> Option<Vec<usize>> {
    let mut cs = [ca, cb];
    refine_joint(&[ia, ib], &mut cs);
    let [ca, cb] = cs;
    let (mut sa, mut sb) = (ca.clone(), cb.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    match target_cell(&ca) {
        None => {
            let mut pos = vec![0usize; b.size()];
            for (v, &c) in cb.iter().enumerate() {
                pos[c as usize] = v;
            }
            let map: Vec<usize> = ca.iter().map(|&c| pos[c as usize]).collect();
            is_isomorphism(a, b, &map).then_some(map)
        }
        Some(cell) => {
            let x = (0..a.size()).find(|&v| ca[v] == cell)?;
            for y in (0..b.size()).filter(|&v| cb[v] == cell) {
                let mut na = ca.clone();
                let mut nb = cb.clone();
                na[x] = u32::MAX;
                nb[y] = u32::MAX;
                if let Some(m) = iso_search(a, b, ia, ib, na, nb) {
                    return Some(m);
                }
            }
            None
        }
    }
}

/// Checks that `map` is a bijection carrying every relation of `a` onto `b`.
pub(crate) fn is_isomorphism(a: &Structure, b: &Structure, map: &[usize]) -> bool {
    if map.len() != a.size() || a.size() != b.size() {
        return false;
    }
    let mut hit = vec![false; b.size()];
    for &m in map {
        if m >= b.size() || std::mem::replace(&mut hit[m], true) {
            return false;
        }
    }
    a.tables().iter().zip(b.tables()).all(|(ta, tb)| {
        ta.len() == tb.len()
            && ta
                .iter()
                .all(|t| tb.contains(&t.iter().map(|&e| map[e]).collect::<Vec<_>>()))
    })
}
