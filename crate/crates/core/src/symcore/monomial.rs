//! Tensor monomials: a power of `u` times a product of derivative factors
//! whose index slots are either contracted in pairs or left free.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Factor symbols. The declaration order is the canonical sort order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    /// `u_i`
    Du,
    /// `u_ij`
    Hess,
    /// `u_ijk = ∇_i u_jk`; symmetric in its last two slots only.
    D3u,
    /// `Δu`
    Lap,
    /// `(Δu)_,i`
    DLap,
    /// `Δ²u`
    BiLap,
    /// `R_ij`
    Ric,
    /// `g_ij`, only kept when both slots are free.
    Metric,
    /// Trace-free tensor `E_ij`.
    E,
    /// Vector `F_i`.
    F,
    /// Scalar `G`.
    G,
}

impl FactorKind {
    pub fn arity(self) -> usize {
        use FactorKind::*;
        match self {
            Lap | BiLap | G => 0,
            Du | DLap | F => 1,
            Hess | Ric | Metric | E => 2,
            D3u => 3,
        }
    }

    /// Weight under `u -> λu`.
    pub fn homogeneity(self) -> i32 {
        match self {
            FactorKind::Ric | FactorKind::Metric => 0,
            _ => 1,
        }
    }

    pub fn symbol(self) -> &'static str {
        use FactorKind::*;
        match self {
            Du => "Du",
            Hess => "DDu",
            D3u => "DDDu",
            Lap => "Lu",
            DLap => "DLu",
            BiLap => "LLu",
            Ric => "Ric",
            Metric => "g",
            E => "E",
            F => "F",
            G => "G",
        }
    }

    pub fn is_named(self) -> bool {
        matches!(self, FactorKind::E | FactorKind::F | FactorKind::G)
    }

    fn symmetries(self) -> &'static [&'static [usize]] {
        use FactorKind::*;
        match self {
            Hess | Ric | Metric | E => &[&[0, 1], &[1, 0]],
            D3u => &[&[0, 1, 2], &[0, 2, 1]],
            Du | DLap | F => &[&[0]],
            Lap | BiLap | G => &[&[]],
        }
    }
}

/// An index slot: free (with its position among the free indices) or a
/// contracted dummy label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Free(u8),
    Dummy(u16),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub kind: FactorKind,
    pub slots: SmallVec<[Slot; 3]>,
}

impl Factor {
    pub fn new(kind: FactorKind, slots: &[Slot]) -> Self {
        Factor {
            kind,
            slots: SmallVec::from_slice(slots),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorMonomial {
    u_pow: i32,
    factors: Vec<Factor>,
}

/// One term of a reduced monomial: `n^metric_traces` times `mono`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Reduced {
    pub metric_traces: u32,
    pub mono: TensorMonomial,
}

impl TensorMonomial {
    /// The constant monomial `u^0`.
    pub fn one() -> Self {
        TensorMonomial {
            u_pow: 0,
            factors: Vec::new(),
        }
    }

    pub fn u_power(u_pow: i32) -> Self {
        TensorMonomial {
            u_pow,
            factors: Vec::new(),
        }
    }

    /// Unchecked constructor; reduce or canonicalize before comparing.
    pub fn new(u_pow: i32, factors: Vec<Factor>) -> Self {
        TensorMonomial { u_pow, factors }
    }

    /// Builds a monomial from named indices: a name used twice is
    /// contracted, a name used once is free. Free indices are ordered by
    /// name. The result is canonical.
    pub fn from_named(u_pow: i32, factors: &[(FactorKind, &[&str])]) -> Result<Self> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for (kind, names) in factors {
            if names.len() != kind.arity() {
                return Err(Error::MalformedMonomial(format!(
                    "{} takes {} indices, got {}",
                    kind.symbol(),
                    kind.arity(),
                    names.len()
                )));
            }
            for name in names.iter() {
                *counts.entry(name).or_default() += 1;
            }
        }
        let mut free_pos = BTreeMap::new();
        let mut dummy_pos = BTreeMap::new();
        for (name, &c) in &counts {
            match c {
                1 => {
                    let k = free_pos.len() as u8;
                    free_pos.insert(*name, k);
                }
                2 => {
                    let k = dummy_pos.len() as u16;
                    dummy_pos.insert(*name, k);
                }
                _ => {
                    return Err(Error::MalformedMonomial(format!(
                        "index {name} used {c} times"
                    )))
                }
            }
        }
        let built = factors
            .iter()
            .map(|(kind, names)| {
                let slots: SmallVec<[Slot; 3]> = names
                    .iter()
                    .map(|nm| match free_pos.get(nm) {
                        Some(&k) => Slot::Free(k),
                        None => Slot::Dummy(dummy_pos[nm]),
                    })
                    .collect();
                Factor { kind: *kind, slots }
            })
            .collect();
        TensorMonomial::new(u_pow, built).canonicalize()
    }

    pub fn u_pow(&self) -> i32 {
        self.u_pow
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn valence(&self) -> u8 {
        self.factors
            .iter()
            .flat_map(|f| f.slots.iter())
            .filter(|s| matches!(s, Slot::Free(_)))
            .count() as u8
    }

    /// Total weight under `u -> λu`.
    pub fn homogeneity(&self) -> i32 {
        self.u_pow
            + self
                .factors
                .iter()
                .map(|f| f.kind.homogeneity())
                .sum::<i32>()
    }

    pub fn contains(&self, kind: FactorKind) -> bool {
        self.factors.iter().any(|f| f.kind == kind)
    }

    pub fn count(&self, kind: FactorKind) -> usize {
        self.factors.iter().filter(|f| f.kind == kind).count()
    }

    pub(crate) fn max_dummy(&self) -> Option<u16> {
        max_dummy_of(&self.factors)
    }

    pub(crate) fn with_u_pow(mut self, k: i32) -> Self {
        self.u_pow += k;
        self
    }

    pub(crate) fn into_parts(self) -> (i32, Vec<Factor>) {
        (self.u_pow, self.factors)
    }

    /// Checks the slot structure: dummies appear exactly twice, free
    /// positions form `0..valence`, arities match, valence at most two.
    pub fn validate(&self) -> Result<u8> {
        let mut dummies: BTreeMap<u16, usize> = BTreeMap::new();
        let mut frees: Vec<u8> = Vec::new();
        for f in &self.factors {
            if f.slots.len() != f.kind.arity() {
                return Err(Error::MalformedMonomial(format!(
                    "{} with {} slots",
                    f.kind.symbol(),
                    f.slots.len()
                )));
            }
            for s in &f.slots {
                match s {
                    Slot::Free(k) => frees.push(*k),
                    Slot::Dummy(d) => *dummies.entry(*d).or_default() += 1,
                }
            }
        }
        if let Some((d, c)) = dummies.iter().find(|(_, &c)| c != 2) {
            return Err(Error::MalformedMonomial(format!(
                "dummy {d} occurs {c} times"
            )));
        }
        frees.sort_unstable();
        if frees.iter().enumerate().any(|(i, &k)| k as usize != i) {
            return Err(Error::MalformedMonomial(format!(
                "free slots {frees:?} are not 0..{}",
                frees.len()
            )));
        }
        if frees.len() > 2 {
            return Err(Error::MalformedMonomial(format!(
                "{} dangling slots",
                frees.len()
            )));
        }
        Ok(frees.len() as u8)
    }

    /// Canonical representative under dummy relabeling, factor reordering
    /// and the slot symmetries of each factor. Trivial traces are folded
    /// (`u_kk -> Δu`, `u_kki -> (Δu)_i`) and metric factors are absorbed.
    /// Monomials whose normal form is not a single monomial (closed metric
    /// loops, `E_kk`, contracted third derivatives needing a Ricci term)
    /// are rejected here; expressions handle them.
    pub fn canonicalize(&self) -> Result<TensorMonomial> {
        let mut out = self.reduce()?;
        match (out.len(), out.first()) {
            (1, Some(r)) if r.metric_traces == 0 => Ok(out.remove(0).mono),
            (0, _) => Err(Error::MalformedMonomial(
                "trace of the trace-free tensor vanishes".into(),
            )),
            _ => Err(Error::MalformedMonomial(
                "not a single monomial after reduction; reduce inside an expression".into(),
            )),
        }
    }

    /// Reduces to a sum of canonical monomials with multiplicities `n^k`.
    /// `u_{ik,k}` is commuted to `(Δu)_i + R_im u_m`.
    pub(crate) fn reduce(&self) -> Result<Vec<Reduced>> {
        self.validate()?;
        let mut out = Vec::new();
        let mut work = vec![(0u32, self.factors.clone())];
        'next: while let Some((mut traces, mut factors)) = work.pop() {
            let mut i = 0;
            while i < factors.len() {
                let f = &factors[i];
                let repeated = |a: usize, b: usize| {
                    matches!(f.slots[a], Slot::Dummy(_)) && f.slots[a] == f.slots[b]
                };
                match f.kind {
                    FactorKind::Metric => {
                        let (s, t) = (f.slots[0], f.slots[1]);
                        if s == t {
                            traces += 1;
                            factors.remove(i);
                            continue;
                        }
                        let (dummy, keep) = match (s, t) {
                            (Slot::Dummy(_), _) => (s, t),
                            (_, Slot::Dummy(_)) => (t, s),
                            _ => {
                                i += 1;
                                continue;
                            }
                        };
                        factors.remove(i);
                        for g in factors.iter_mut() {
                            for slot in g.slots.iter_mut() {
                                if *slot == dummy {
                                    *slot = keep;
                                }
                            }
                        }
                        i = 0;
                        continue;
                    }
                    FactorKind::Hess if repeated(0, 1) => {
                        factors[i] = Factor::new(FactorKind::Lap, &[]);
                    }
                    FactorKind::D3u if repeated(1, 2) => {
                        let d = f.slots[0];
                        factors[i] = Factor::new(FactorKind::DLap, &[d]);
                    }
                    FactorKind::D3u if repeated(0, 1) || repeated(0, 2) => {
                        let other = if repeated(0, 1) {
                            f.slots[2]
                        } else {
                            f.slots[1]
                        };
                        let fresh = Slot::Dummy(max_dummy_of(&factors).map_or(0, |d| d + 1));
                        let mut with_ric = factors.clone();
                        with_ric[i] = Factor::new(FactorKind::Ric, &[other, fresh]);
                        with_ric.push(Factor::new(FactorKind::Du, &[fresh]));
                        work.push((traces, with_ric));
                        factors[i] = Factor::new(FactorKind::DLap, &[other]);
                        i = 0;
                        continue;
                    }
                    FactorKind::E if repeated(0, 1) => continue 'next,
                    FactorKind::Ric if repeated(0, 1) => {
                        return Err(Error::UnsupportedCurvature(
                            "scalar curvature R = g^ij R_ij".into(),
                        ))
                    }
                    _ => {}
                }
                i += 1;
            }
            out.push(Reduced {
                metric_traces: traces,
                mono: canonical_form(self.u_pow, &factors),
            });
        }
        Ok(out)
    }
}

fn max_dummy_of(factors: &[Factor]) -> Option<u16> {
    factors
        .iter()
        .flat_map(|f| f.slots.iter())
        .filter_map(|s| match s {
            Slot::Dummy(d) => Some(*d),
            Slot::Free(_) => None,
        })
        .max()
}

fn canonical_form(u_pow: i32, factors: &[Factor]) -> TensorMonomial {
    // union-find over factors joined by shared dummies
    let nf = factors.len();
    let mut parent: Vec<usize> = (0..nf).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nxt = p[y];
            p[y] = r;
            y = nxt;
        }
        r
    }
    let mut first_seen: BTreeMap<u16, usize> = BTreeMap::new();
    for (i, f) in factors.iter().enumerate() {
        for s in &f.slots {
            if let Slot::Dummy(d) = s {
                if let Some(&j) = first_seen.get(d) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                } else {
                    first_seen.insert(*d, i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nf {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut comps: Vec<Vec<Factor>> = groups
        .values()
        .map(|members| {
            let fs: Vec<&Factor> = members.iter().map(|&i| &factors[i]).collect();
            canonical_component(&fs)
        })
        .collect();
    comps.sort();
    let mut out = Vec::with_capacity(nf);
    let mut offset = 0u16;
    for comp in comps {
        let mut local_max = None;
        for mut f in comp {
            for s in f.slots.iter_mut() {
                if let Slot::Dummy(d) = s {
                    local_max = Some(local_max.map_or(*d, |m: u16| m.max(*d)));
                    *d += offset;
                }
            }
            out.push(f);
        }
        if let Some(m) = local_max {
            offset += m + 1;
        }
    }
    TensorMonomial {
        u_pow,
        factors: out,
    }
}

/// Lexicographically least serialization of one connected component.
fn canonical_component(fs: &[&Factor]) -> Vec<Factor> {
    let mut order: Vec<usize> = (0..fs.len()).collect();
    order.sort_by_key(|&i| fs[i].kind);
    let kinds: Vec<FactorKind> = order.iter().map(|&i| fs[i].kind).collect();
    let mut search = Search {
        fs,
        kinds: &kinds,
        used: vec![false; fs.len()],
        labels: Vec::new(),
        current: Vec::with_capacity(fs.len()),
        best: None,
    };
    search.run(0);
    search.best.expect("component is nonempty")
}

struct Search<'a> {
    fs: &'a [&'a Factor],
    kinds: &'a [FactorKind],
    used: Vec<bool>,
    labels: Vec<(u16, u16)>,
    current: Vec<Factor>,
    best: Option<Vec<Factor>>,
}

impl Search<'_> {
    fn label(&mut self, d: u16) -> (u16, bool) {
        if let Some(&(_, l)) = self.labels.iter().find(|(r, _)| *r == d) {
            return (l, false);
        }
        let l = self.labels.len() as u16;
        self.labels.push((d, l));
        (l, true)
    }

    fn run(&mut self, pos: usize) {
        if pos == self.kinds.len() {
            if self.best.as_ref().is_none_or(|b| self.current < *b) {
                self.best = Some(self.current.clone());
            }
            return;
        }
        let kind = self.kinds[pos];
        for i in 0..self.fs.len() {
            if self.used[i] || self.fs[i].kind != kind {
                continue;
            }
            // identical raw candidates would only repeat the same subtree
            for perm in kind.symmetries() {
                let mut slots: SmallVec<[Slot; 3]> = SmallVec::new();
                let mut fresh = 0usize;
                for &p in perm.iter() {
                    match self.fs[i].slots[p] {
                        Slot::Free(k) => slots.push(Slot::Free(k)),
                        Slot::Dummy(d) => {
                            let (l, new) = self.label(d);
                            fresh += new as usize;
                            slots.push(Slot::Dummy(l));
                        }
                    }
                }
                let cand = Factor { kind, slots };
                let prune = match &self.best {
                    Some(b) => {
                        let cmp = self.current.as_slice().cmp(&b[..pos]);
                        cmp == std::cmp::Ordering::Greater
                            || (cmp == std::cmp::Ordering::Equal && cand > b[pos])
                    }
                    None => false,
                };
                if !prune {
                    self.used[i] = true;
                    self.current.push(cand);
                    self.run(pos + 1);
                    self.current.pop();
                    self.used[i] = false;
                }
                for _ in 0..fresh {
                    self.labels.pop();
                }
            }
        }
    }
}

const DUMMY_NAMES: [&str; 12] = ["k", "l", "m", "p", "q", "r", "s", "t", "v", "w", "x", "y"];
const FREE_NAMES: [&str; 2] = ["i", "j"];

fn slot_name(s: &Slot) -> String {
    match s {
        Slot::Free(k) => FREE_NAMES
            .get(*k as usize)
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("f{k}")),
        Slot::Dummy(d) => DUMMY_NAMES
            .get(*d as usize)
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("k{d}")),
    }
}

impl fmt::Display for TensorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.u_pow != 0 {
            parts.push(format!("u^{}", self.u_pow));
        }
        for fac in &self.factors {
            if fac.slots.is_empty() {
                parts.push(fac.kind.symbol().to_string());
            } else {
                let idx: Vec<String> = fac.slots.iter().map(slot_name).collect();
                parts.push(format!("{}[{}]", fac.kind.symbol(), idx.join(",")));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl Serialize for TensorMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}


#[cfg(test)]
mod commutation_tests {
    use super::FactorKind::*;
    use super::*;

    #[test]
    fn contracted_third_derivative_picks_up_ricci() {
        // u_{ik,k} u_i = (Δu)_i u_i + R_im u_m u_i
        let m = TensorMonomial::new(
            0,
            vec![
                Factor::new(D3u, &[Slot::Dummy(0), Slot::Dummy(1), Slot::Dummy(0)]),
                Factor::new(Du, &[Slot::Dummy(1)]),
            ],
        );
        let mut got: Vec<String> = m
            .reduce()
            .unwrap()
            .into_iter()
            .map(|r| r.mono.to_string())
            .collect();
        got.sort();
        assert_eq!(got, vec!["Du[k] DLu[k]", "Du[k] Du[l] Ric[k,l]"]);
    }
}
