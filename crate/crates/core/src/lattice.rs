//! Finite lattices given by their cover (Hasse) relation.
//!
//! A [`FiniteLattice`] is validated and fully analysed at construction:
//! order closure, join/meet tables, structural flags and the normal and
//! minimal join-irreducible decompositions of every element are cached.

use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::cmp::Reverse;

use crate::error::{Error, Result};

/// Dense element id inside one lattice.
pub type ElemId = usize;

/// Exhaustive minimal-decomposition search is used while `|η(x)|` stays at or
/// below this bound; larger normal decompositions fall back to the
/// maximal-element candidate.
const EXHAUSTIVE_DECOMPOSITION_LIMIT: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    fn new(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64)] }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn union_with(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn intersection(&self, other: &BitRow) -> BitRow {
        BitRow {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    fn is_subset(&self, other: &BitRow) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// Structural properties, each computed by its definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct StructureFlags {
    pub is_lattice: bool,
    pub is_distributive: bool,
    pub is_modular: bool,
    pub is_lower_semimodular: bool,
    pub is_upper_semimodular: bool,
    pub is_lower_locally_distributive: bool,
    pub is_linear: bool,
    pub is_boolean: bool,
    pub is_atomistic: bool,
    pub contains_m3: bool,
    pub contains_n5: bool,
}

/// Join-irreducible elements with their unique lower cover.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JoinIrreducibleSet {
    pub members: Vec<ElemId>,
    pub predecessor: BTreeMap<ElemId, ElemId>,
}

impl JoinIrreducibleSet {
    pub fn contains(&self, x: ElemId) -> bool {
        self.predecessor.contains_key(&x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Normal (`eta`) and minimal (`eta_star`) decompositions of one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub eta: Vec<ElemId>,
    pub eta_star: Vec<ElemId>,
}

#[derive(Clone)]
pub struct FiniteLattice {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, ElemId>,
    covers: Vec<(ElemId, ElemId)>,
    lower_covers: Vec<Vec<ElemId>>,
    upper_covers: Vec<Vec<ElemId>>,
    down: Vec<BitRow>,
    up: Vec<BitRow>,
    join_table: Option<Vec<ElemId>>,
    meet_table: Option<Vec<ElemId>>,
    bottom: ElemId,
    top: ElemId,
    linear_extension: Vec<ElemId>,
    rank: Vec<usize>,
    flags: StructureFlags,
    irreducibles: JoinIrreducibleSet,
    eta: Vec<Vec<ElemId>>,
    eta_star: Vec<Option<Vec<ElemId>>>,
}

impl std::fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("name", &self.name)
            .field("labels", &self.labels)
            .field("covers", &self.covers)
            .field("flags", &self.flags)
            .finish()
    }
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.covers == other.covers
    }
}

impl FiniteLattice {
    /// Builds and analyses a poset from element labels and `(lower, upper)`
    /// cover pairs. A poset without unique bottom and top is rejected; a
    /// bounded poset that is not a lattice is accepted with
    /// `flags().is_lattice == false`.
    pub fn build<S, P>(name: &str, labels: &[S], cover_pairs: &[(P, P)]) -> Result<Self>
    where
        S: AsRef<str>,
        P: AsRef<str>,
    {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let m = labels.len();
        let mut index = HashMap::with_capacity(m);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if m == 0 {
            return Err(Error::NoBottom);
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownLabel(s.to_string()));

        let mut covers = Vec::with_capacity(cover_pairs.len());
        let mut lower_covers = vec![Vec::new(); m];
        let mut upper_covers = vec![Vec::new(); m];
        for (lo, hi) in cover_pairs {
            let (lo, hi) = (lookup(lo.as_ref())?, lookup(hi.as_ref())?);
            if lo == hi {
                return Err(Error::SelfCover(labels[lo].clone()));
            }
            if lower_covers[hi].contains(&lo) {
                return Err(Error::NotTransitivelyReduced {
                    lower: labels[lo].clone(),
                    upper: labels[hi].clone(),
                });
            }
            covers.push((lo, hi));
            lower_covers[hi].push(lo);
            upper_covers[lo].push(hi);
        }
        for v in lower_covers.iter_mut().chain(upper_covers.iter_mut()) {
            v.sort_unstable();
        }

        // Kahn ordering, ties broken by smallest id.
        let mut indegree: Vec<usize> = lower_covers.iter().map(Vec::len).collect();
        let mut heap: BinaryHeap<Reverse<ElemId>> =
            (0..m).filter(|&i| indegree[i] == 0).map(Reverse).collect();
        let mut linear_extension = Vec::with_capacity(m);
        while let Some(Reverse(x)) = heap.pop() {
            linear_extension.push(x);
            for &u in &upper_covers[x] {
                indegree[u] -= 1;
                if indegree[u] == 0 {
                    heap.push(Reverse(u));
                }
            }
        }
        if linear_extension.len() < m {
            let stuck = (0..m).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(Error::Cycle(labels[stuck].clone()));
        }
        let mut rank = vec![0; m];
        for (r, &x) in linear_extension.iter().enumerate() {
            rank[x] = r;
        }

        let mut down = vec![BitRow::new(m); m];
        for &x in &linear_extension {
            let mut row = BitRow::new(m);
            row.insert(x);
            for &c in &lower_covers[x] {
                row.union_with(&down[c]);
            }
            down[x] = row;
        }
        for &(lo, hi) in &covers {
            let implied = lower_covers[hi]
                .iter()
                .any(|&c| c != lo && down[c].contains(lo));
            if implied {
                return Err(Error::NotTransitivelyReduced {
                    lower: labels[lo].clone(),
                    upper: labels[hi].clone(),
                });
            }
        }
        let mut up = vec![BitRow::new(m); m];
        for x in 0..m {
            for y in down[x].iter() {
                up[y].insert(x);
            }
        }

        let minimal: Vec<_> = (0..m).filter(|&i| lower_covers[i].is_empty()).collect();
        let maximal: Vec<_> = (0..m).filter(|&i| upper_covers[i].is_empty()).collect();
        if minimal.len() != 1 {
            return Err(Error::NoBottom);
        }
        if maximal.len() != 1 {
            return Err(Error::NoTop);
        }

        let mut lattice = FiniteLattice {
            name: name.to_string(),
            labels,
            index,
            covers,
            lower_covers,
            upper_covers,
            down,
            up,
            join_table: None,
            meet_table: None,
            bottom: minimal[0],
            top: maximal[0],
            linear_extension,
            rank,
            flags: StructureFlags::default(),
            irreducibles: JoinIrreducibleSet::default(),
            eta: Vec::new(),
            eta_star: Vec::new(),
        };
        lattice.join_table = lattice.bound_table(true);
        lattice.meet_table = lattice.bound_table(false);
        if lattice.join_table.is_none() || lattice.meet_table.is_none() {
            lattice.join_table = None;
            lattice.meet_table = None;
        }
        lattice.flags = lattice.compute_flags();
        lattice.irreducibles = lattice.compute_irreducibles();
        lattice.eta = (0..m)
            .map(|x| {
                lattice
                    .irreducibles
                    .members
                    .iter()
                    .copied()
                    .filter(|&j| lattice.down[x].contains(j))
                    .collect()
            })
            .collect();
        lattice.eta_star = if lattice.flags.is_lattice {
            (0..m).map(|x| lattice.compute_eta_star(x)).collect()
        } else {
            vec![None; m]
        };
        Ok(lattice)
    }

    /// Chain `labels[0] < labels[1] < ...`.
    pub fn chain<S: AsRef<str>>(name: &str, labels: &[S]) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = labels
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        Self::build(name, labels, &pairs)
    }

    /// Chain with `len` elements labelled `0..len`.
    pub fn chain_of(name: &str, len: usize) -> Result<Self> {
        let labels: Vec<String> = (0..len).map(|i| i.to_string()).collect();
        Self::chain(name, &labels)
    }

    /// Two-element chain `0 < 1`.
    pub fn boolean(name: &str) -> Self {
        Self::chain(name, &["0", "1"]).expect("2-chain is valid")
    }

    /// Three-element chain `-1 < 0 < 1`.
    pub fn ternary(name: &str) -> Self {
        Self::chain(name, &["-1", "0", "1"]).expect("3-chain is valid")
    }

    /// Subset lattice of `{1..k}`, labels like `{}`, `{1,3}`; element id is
    /// the bitmask.
    pub fn powerset(name: &str, k: usize) -> Result<Self> {
        let labels: Vec<String> = (0..1usize << k).map(|mask| set_label(mask, k)).collect();
        let mut pairs = Vec::new();
        for mask in 0..1usize << k {
            for b in 0..k {
                if mask & (1 << b) == 0 {
                    pairs.push((labels[mask].clone(), labels[mask | 1 << b].clone()));
                }
            }
        }
        Self::build(name, &labels, &pairs)
    }

    /// The 2^2 diamond `bot < a, b < top`.
    pub fn diamond(name: &str) -> Self {
        Self::build(
            name,
            &["bot", "a", "b", "top"],
            &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
        )
        .expect("diamond is valid")
    }

    pub fn m3(name: &str) -> Self {
        Self::build(
            name,
            &["bot", "a", "b", "c", "top"],
            &[
                ("bot", "a"),
                ("bot", "b"),
                ("bot", "c"),
                ("a", "top"),
                ("b", "top"),
                ("c", "top"),
            ],
        )
        .expect("M3 is valid")
    }

    /// `bot < a < c < top`, `bot < b < top`.
    pub fn n5(name: &str) -> Self {
        Self::build(
            name,
            &["bot", "a", "b", "c", "top"],
            &[("bot", "a"), ("a", "c"), ("c", "top"), ("bot", "b"), ("b", "top")],
        )
        .expect("N5 is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: ElemId) -> &str {
        &self.labels[x]
    }

    pub fn id(&self, label: &str) -> Option<ElemId> {
        self.index.get(label).copied()
    }

    pub fn covers(&self) -> &[(ElemId, ElemId)] {
        &self.covers
    }

    pub fn lower_covers(&self, x: ElemId) -> &[ElemId] {
        &self.lower_covers[x]
    }

    pub fn upper_covers(&self, x: ElemId) -> &[ElemId] {
        &self.upper_covers[x]
    }

    /// `upper` covers `lower`.
    pub fn is_cover(&self, lower: ElemId, upper: ElemId) -> bool {
        self.lower_covers[upper].binary_search(&lower).is_ok()
    }

    pub fn bottom(&self) -> ElemId {
        self.bottom
    }

    pub fn top(&self) -> ElemId {
        self.top
    }

    pub fn flags(&self) -> StructureFlags {
        self.flags
    }

    pub fn leq(&self, a: ElemId, b: ElemId) -> bool {
        self.down[b].contains(a)
    }

    pub fn lt(&self, a: ElemId, b: ElemId) -> bool {
        a != b && self.leq(a, b)
    }

    /// Elements in a deterministic linear extension of the order.
    pub fn linear_extension(&self) -> &[ElemId] {
        &self.linear_extension
    }

    /// Position of `x` in [`Self::linear_extension`].
    pub fn rank(&self, x: ElemId) -> usize {
        self.rank[x]
    }

    pub fn try_join(&self, a: ElemId, b: ElemId) -> Option<ElemId> {
        self.join_table.as_ref().map(|t| t[a * self.len() + b])
    }

    pub fn try_meet(&self, a: ElemId, b: ElemId) -> Option<ElemId> {
        self.meet_table.as_ref().map(|t| t[a * self.len() + b])
    }

    /// Panics when the poset is not a lattice.
    pub fn join(&self, a: ElemId, b: ElemId) -> ElemId {
        self.try_join(a, b).expect("join requires a lattice")
    }

    /// Panics when the poset is not a lattice.
    pub fn meet(&self, a: ElemId, b: ElemId) -> ElemId {
        self.try_meet(a, b).expect("meet requires a lattice")
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = ElemId>) -> ElemId {
        items.into_iter().fold(self.bottom, |acc, i| self.join(acc, i))
    }

    pub fn join_irreducibles(&self) -> &JoinIrreducibleSet {
        &self.irreducibles
    }

    pub fn is_join_irreducible(&self, x: ElemId) -> bool {
        self.irreducibles.contains(x)
    }

    /// The unique element covered by a join-irreducible.
    pub fn predecessor(&self, j: ElemId) -> Option<ElemId> {
        self.irreducibles.predecessor.get(&j).copied()
    }

    /// `η(x)`: all join-irreducibles below `x`, ascending by id.
    pub fn normal_decomposition(&self, x: ElemId) -> &[ElemId] {
        &self.eta[x]
    }

    /// `η*(x)`: the unique smallest set of join-irreducibles whose join is `x`.
    pub fn minimal_decomposition(&self, x: ElemId) -> Result<&[ElemId]> {
        self.eta_star[x]
            .as_deref()
            .ok_or_else(|| Error::NotLowerLocallyDistributive(self.labels[x].clone()))
    }

    pub fn decomposition(&self, x: ElemId) -> Result<Decomposition> {
        Ok(Decomposition {
            eta: self.normal_decomposition(x).to_vec(),
            eta_star: self.minimal_decomposition(x)?.to_vec(),
        })
    }

    /// `↓x` by a direct scan of the order.
    pub fn downset(&self, x: ElemId) -> Vec<ElemId> {
        self.down[x].iter().collect()
    }

    /// `↓x` rebuilt from join-irreducibles: the elements whose normal
    /// decomposition is a subset of `η(x)`.
    pub fn downset_via_decomposition(&self, x: ElemId) -> Vec<ElemId> {
        let eta_x = &self.eta[x];
        (0..self.len())
            .filter(|&y| self.eta[y].iter().all(|j| eta_x.binary_search(j).is_ok()))
            .collect()
    }

    /// `[a, b]`, ascending by id.
    pub fn interval(&self, a: ElemId, b: ElemId) -> Result<Vec<ElemId>> {
        if !self.leq(a, b) {
            return Err(Error::Order {
                lower: self.labels[a].clone(),
                upper: self.labels[b].clone(),
            });
        }
        Ok(self.up[a].intersection(&self.down[b]).iter().collect())
    }

    /// Whether `[a, b]` is isomorphic to `2^k`, `k` the number of atoms of
    /// the interval: joins of atom subsets must be pairwise distinct, cover
    /// the interval, and reflect inclusion.
    pub fn is_boolean_interval(&self, a: ElemId, b: ElemId) -> Result<bool> {
        let members = self.interval(a, b)?;
        let atoms: Vec<ElemId> = members.iter().copied().filter(|&z| self.is_cover(a, z)).collect();
        let k = atoms.len();
        if k >= usize::BITS as usize - 1 || members.len() != 1usize << k {
            return Ok(false);
        }
        let joins: Vec<ElemId> = (0..1usize << k)
            .map(|mask| {
                (0..k)
                    .filter(|&i| mask >> i & 1 == 1)
                    .fold(a, |acc, i| self.join(acc, atoms[i]))
            })
            .collect();
        let mut seen = joins.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen != members {
            return Ok(false);
        }
        for s in 0..1usize << k {
            for t in 0..1usize << k {
                if (s & !t == 0) != self.leq(joins[s], joins[t]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn bound_table(&self, join: bool) -> Option<Vec<ElemId>> {
        let m = self.len();
        let (above, order) = if join {
            (&self.up, &self.linear_extension)
        } else {
            (&self.down, &self.linear_extension)
        };
        let mut table = vec![0; m * m];
        for a in 0..m {
            for b in a..m {
                let common = above[a].intersection(&above[b]);
                // least element of `common`: lowest in the linear extension for
                // joins, highest for meets; it must dominate all of `common`.
                let candidate = if join {
                    order.iter().copied().find(|&u| common.contains(u))
                } else {
                    order.iter().rev().copied().find(|&u| common.contains(u))
                }?;
                if !common.is_subset(&above[candidate]) {
                    return None;
                }
                table[a * m + b] = candidate;
                table[b * m + a] = candidate;
            }
        }
        Some(table)
    }

    fn compute_flags(&self) -> StructureFlags {
        let m = self.len();
        let is_linear = (0..m).all(|a| (0..m).all(|b| self.leq(a, b) || self.leq(b, a)));
        if self.join_table.is_none() {
            return StructureFlags { is_linear, ..Default::default() };
        }
        let j = |a, b| self.join(a, b);
        let mt = |a, b| self.meet(a, b);

        let mut lower_sm = true;
        let mut upper_sm = true;
        for a in 0..m {
            for b in 0..m {
                let (top, bot) = (j(a, b), mt(a, b));
                if self.is_cover(a, top) && self.is_cover(b, top) && !(self.is_cover(bot, a) && self.is_cover(bot, b)) {
                    lower_sm = false;
                }
                if self.is_cover(bot, a) && self.is_cover(bot, b) && !(self.is_cover(a, top) && self.is_cover(b, top)) {
                    upper_sm = false;
                }
            }
        }

        let incomparable = |a, b| !self.leq(a, b) && !self.leq(b, a);
        let mut contains_m3 = false;
        'm3: for a in 0..m {
            for b in a + 1..m {
                if !incomparable(a, b) {
                    continue;
                }
                let (jab, mab) = (j(a, b), mt(a, b));
                for c in b + 1..m {
                    if incomparable(a, c)
                        && incomparable(b, c)
                        && j(a, c) == jab
                        && j(b, c) == jab
                        && mt(a, c) == mab
                        && mt(b, c) == mab
                    {
                        contains_m3 = true;
                        break 'm3;
                    }
                }
            }
        }
        let mut contains_n5 = false;
        'n5: for a in 0..m {
            for c in 0..m {
                if !self.lt(a, c) {
                    continue;
                }
                for b in 0..m {
                    if incomparable(a, b) && incomparable(c, b) && j(a, b) == j(c, b) && mt(a, b) == mt(c, b) {
                        contains_n5 = true;
                        break 'n5;
                    }
                }
            }
        }

        let is_distributive = (0..m).all(|x| {
            (0..m).all(|y| (0..m).all(|z| mt(x, j(y, z)) == j(mt(x, y), mt(x, z))))
        });
        let complemented = (0..m).all(|x| (0..m).any(|y| j(x, y) == self.top && mt(x, y) == self.bottom));
        let is_atomistic = (0..m)
            .filter(|&x| self.lower_covers[x].len() == 1)
            .all(|x| self.lower_covers[x][0] == self.bottom);

        StructureFlags {
            is_lattice: true,
            is_distributive,
            is_modular: !contains_n5,
            is_lower_semimodular: lower_sm,
            is_upper_semimodular: upper_sm,
            is_lower_locally_distributive: lower_sm && !contains_m3,
            is_linear,
            is_boolean: is_distributive && complemented,
            is_atomistic,
            contains_m3,
            contains_n5,
        }
    }

    fn compute_irreducibles(&self) -> JoinIrreducibleSet {
        let mut set = JoinIrreducibleSet::default();
        for x in 0..self.len() {
            if let [p] = self.lower_covers[x][..] {
                set.members.push(x);
                set.predecessor.insert(x, p);
            }
        }
        set
    }

    fn compute_eta_star(&self, x: ElemId) -> Option<Vec<ElemId>> {
        let eta = &self.eta[x];
        if x == self.bottom {
            return Some(Vec::new());
        }
        if eta.len() <= EXHAUSTIVE_DECOMPOSITION_LIMIT {
            // smallest cardinality first; unique solution required
            let n = eta.len();
            for size in 1..=n {
                let mut found: Option<Vec<ElemId>> = None;
                let mut count = 0;
                for_each_combination(n, size, |pick| {
                    let joined = self.join_all(pick.iter().map(|&p| eta[p]));
                    if joined == x {
                        count += 1;
                        if found.is_none() {
                            found = Some(pick.iter().map(|&p| eta[p]).collect());
                        }
                    }
                });
                if count > 0 {
                    return if count == 1 { found } else { None };
                }
            }
            None
        } else {
            let candidate: Vec<ElemId> = eta
                .iter()
                .copied()
                .filter(|&i| !eta.iter().any(|&k| k != i && self.leq(i, k)))
                .collect();
            let joins_to_x = self.join_all(candidate.iter().copied()) == x;
            let irredundant = (0..candidate.len()).all(|skip| {
                self.join_all(candidate.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &c)| c)) != x
            });
            (joins_to_x && irredundant && self.flags.is_lower_locally_distributive).then_some(candidate)
        }
    }
}

/// Calls `f` with every `size`-subset of `0..n` as an ascending index list.
fn for_each_combination(n: usize, size: usize, mut f: impl FnMut(&[usize])) {
    if size > n {
        return;
    }
    let mut pick: Vec<usize> = (0..size).collect();
    loop {
        f(&pick);
        let Some(i) = (0..size).rev().find(|&i| pick[i] < n - size + i) else {
            return;
        };
        pick[i] += 1;
        for k in i + 1..size {
            pick[k] = pick[k - 1] + 1;
        }
    }
}

pub(crate) fn set_label(mask: usize, k: usize) -> String {
    let members: Vec<String> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| (b + 1).to_string()).collect();
    format!("{{{}}}", members.join(","))
}
