//! Products of attribute lattices, kept virtual.
//!
//! Elements are coordinate tuples and all operations are componentwise.
//! Full enumeration happens only through [`ProductLattice::elements`] and
//! friends, which are guarded by an element limit.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{ElemId, FiniteLattice};

pub const DEFAULT_MAX_ELEMENTS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub lattice: Arc<FiniteLattice>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductElement(pub Vec<ElemId>);

impl ProductElement {
    pub fn coords(&self) -> &[ElemId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<ElemId>> for ProductElement {
    fn from(v: Vec<ElemId>) -> Self {
        ProductElement(v)
    }
}

/// A join-irreducible of the product: `(attribute, element)` with every other
/// coordinate at bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Irreducible {
    pub attribute: usize,
    pub element: ElemId,
}

/// Proof that an element lies in the admissible target set: its non-bottom
/// coordinates and, for each, the element covered by every member of the
/// coordinate's minimal decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtildeWitness {
    pub support: Vec<usize>,
    pub underline: BTreeMap<usize, ElemId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductLattice {
    attributes: Vec<Attribute>,
    max_elements: u128,
}

impl ProductLattice {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::EmptyProduct);
        }
        for a in &attributes {
            if a.lattice.len() < 2 {
                return Err(Error::SingletonAttribute(a.name.clone()));
            }
            if !a.lattice.flags().is_lattice {
                return Err(Error::NotALattice(a.name.clone()));
            }
        }
        Ok(ProductLattice { attributes, max_elements: DEFAULT_MAX_ELEMENTS })
    }

    /// `n` copies of one lattice, attributes named `1..=n`.
    pub fn power(lattice: FiniteLattice, n: usize) -> Result<Self> {
        let lattice = Arc::new(lattice);
        Self::new(
            (1..=n)
                .map(|k| Attribute { name: k.to_string(), lattice: Arc::clone(&lattice) })
                .collect(),
        )
    }

    /// `2^n` as a product of two-element chains.
    pub fn boolean(n: usize) -> Result<Self> {
        Self::power(FiniteLattice::boolean("2"), n)
    }

    /// `3^n` as a product of `-1 < 0 < 1` chains.
    pub fn ternary(n: usize) -> Result<Self> {
        Self::power(FiniteLattice::ternary("3"), n)
    }

    pub fn from_lattices(lattices: Vec<FiniteLattice>) -> Result<Self> {
        Self::new(
            lattices
                .into_iter()
                .enumerate()
                .map(|(k, l)| Attribute { name: format!("{}", k + 1), lattice: Arc::new(l) })
                .collect(),
        )
    }

    pub fn with_max_elements(mut self, limit: u128) -> Self {
        self.max_elements = limit;
        self
    }

    pub fn max_elements(&self) -> u128 {
        self.max_elements
    }

    pub fn n(&self) -> usize {
        self.attributes.len()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn lattice(&self, k: usize) -> &FiniteLattice {
        &self.attributes[k].lattice
    }

    pub fn lattices(&self) -> impl Iterator<Item = &FiniteLattice> {
        self.attributes.iter().map(|a| a.lattice.as_ref())
    }

    pub fn all_linear(&self) -> bool {
        self.lattices().all(|l| l.flags().is_linear)
    }

    pub fn all_distributive(&self) -> bool {
        self.lattices().all(|l| l.flags().is_distributive)
    }

    /// Number of elements, saturating.
    pub fn size(&self) -> u128 {
        self.lattices()
            .map(|l| l.len() as u128)
            .fold(1u128, |acc, s| acc.saturating_mul(s))
    }

    pub fn bottom(&self) -> ProductElement {
        ProductElement(self.lattices().map(|l| l.bottom()).collect())
    }

    pub fn top(&self) -> ProductElement {
        ProductElement(self.lattices().map(|l| l.top()).collect())
    }

    pub fn validate(&self, x: &ProductElement) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: x.len() });
        }
        for (k, &id) in x.coords().iter().enumerate() {
            if id >= self.lattice(k).len() {
                return Err(Error::InvalidCoordinate { attribute: k, id });
            }
        }
        Ok(())
    }

    pub fn leq(&self, x: &ProductElement, y: &ProductElement) -> Result<bool> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.leq_unchecked(x, y))
    }

    pub fn join(&self, x: &ProductElement, y: &ProductElement) -> Result<ProductElement> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.join_unchecked(x, y))
    }

    pub fn meet(&self, x: &ProductElement, y: &ProductElement) -> Result<ProductElement> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.meet_unchecked(x, y))
    }

    pub(crate) fn leq_unchecked(&self, x: &ProductElement, y: &ProductElement) -> bool {
        self.lattices().zip(x.coords().iter().zip(y.coords())).all(|(l, (&a, &b))| l.leq(a, b))
    }

    pub(crate) fn join_unchecked(&self, x: &ProductElement, y: &ProductElement) -> ProductElement {
        ProductElement(
            self.lattices().zip(x.coords().iter().zip(y.coords())).map(|(l, (&a, &b))| l.join(a, b)).collect(),
        )
    }

    pub(crate) fn meet_unchecked(&self, x: &ProductElement, y: &ProductElement) -> ProductElement {
        ProductElement(
            self.lattices().zip(x.coords().iter().zip(y.coords())).map(|(l, (&a, &b))| l.meet(a, b)).collect(),
        )
    }

    /// `h(x)`: coordinates at their attribute's top.
    pub fn height(&self, x: &ProductElement) -> usize {
        self.lattices().zip(x.coords()).filter(|(l, &c)| c == l.top()).count()
    }

    /// `k(x)`: coordinates away from their attribute's bottom.
    pub fn nonbottom_count(&self, x: &ProductElement) -> usize {
        self.lattices().zip(x.coords()).filter(|(l, &c)| c != l.bottom()).count()
    }

    pub fn is_vertex(&self, x: &ProductElement) -> bool {
        self.lattices().zip(x.coords()).all(|(l, &c)| c == l.top() || c == l.bottom())
    }

    /// Vertex completions of a partial assignment: every free coordinate runs
    /// over `{bottom, top}`. Items carry their height.
    pub fn vertices(&self, fixed: &[Option<ElemId>]) -> Result<Vertices<'_>> {
        if fixed.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: fixed.len() });
        }
        for (k, f) in fixed.iter().enumerate() {
            if let Some(id) = *f {
                if id >= self.lattice(k).len() {
                    return Err(Error::InvalidCoordinate { attribute: k, id });
                }
            }
        }
        let free: Vec<usize> = (0..self.n()).filter(|&k| fixed[k].is_none()).collect();
        if free.len() >= 64 {
            return Err(Error::Size {
                what: "vertex enumeration",
                requested: 1u128 << free.len().min(127),
                limit: 1u128 << 63,
            });
        }
        let base: Vec<ElemId> = fixed
            .iter()
            .enumerate()
            .map(|(k, f)| f.unwrap_or_else(|| self.lattice(k).bottom()))
            .collect();
        Ok(Vertices { product: self, base, free, next: 0 })
    }

    /// Join-irreducibles of the product, attribute by attribute.
    pub fn join_irreducibles(&self) -> Vec<Irreducible> {
        self.lattices()
            .enumerate()
            .flat_map(|(k, l)| {
                l.join_irreducibles().members.iter().map(move |&e| Irreducible { attribute: k, element: e })
            })
            .collect()
    }

    pub fn irreducible_point(&self, i: Irreducible) -> ProductElement {
        let mut x = self.bottom();
        x.0[i.attribute] = i.element;
        x
    }

    /// Reads a product element back as a join-irreducible, if it is one.
    pub fn as_irreducible(&self, x: &ProductElement) -> Option<Irreducible> {
        let mut found = None;
        for (k, (l, &c)) in self.lattices().zip(x.coords()).enumerate() {
            if c != l.bottom() {
                if found.is_some() || !l.is_join_irreducible(c) {
                    return None;
                }
                found = Some(Irreducible { attribute: k, element: c });
            }
        }
        found
    }

    /// `η(x)` in the product: per-coordinate normal decompositions.
    pub fn normal_decomposition(&self, x: &ProductElement) -> Vec<Irreducible> {
        self.lattices()
            .zip(x.coords())
            .enumerate()
            .flat_map(|(k, (l, &c))| {
                l.normal_decomposition(c).iter().map(move |&e| Irreducible { attribute: k, element: e })
            })
            .collect()
    }

    /// `η*(x)` in the product: per-coordinate minimal decompositions.
    pub fn minimal_decomposition(&self, x: &ProductElement) -> Result<Vec<Irreducible>> {
        let mut out = Vec::new();
        for (k, (l, &c)) in self.lattices().zip(x.coords()).enumerate() {
            out.extend(l.minimal_decomposition(c)?.iter().map(|&e| Irreducible { attribute: k, element: e }));
        }
        Ok(out)
    }

    pub fn ltilde_witness(&self, x: &ProductElement) -> Result<LtildeWitness> {
        self.validate(x)?;
        let mut support = Vec::new();
        let mut underline = BTreeMap::new();
        for (k, (l, &c)) in self.lattices().zip(x.coords()).enumerate() {
            if c == l.bottom() {
                continue;
            }
            let eta_star = l.minimal_decomposition(c).map_err(|_| Error::NotInLtilde {
                attribute: k,
                reason: format!("`{}` has no unique minimal decomposition", l.label(c)),
            })?;
            let mut common = None;
            for &i in eta_star {
                let p = l.predecessor(i).expect("decomposition members are join-irreducible");
                match common {
                    None => common = Some(p),
                    Some(q) if q == p => {}
                    Some(q) => {
                        return Err(Error::NotInLtilde {
                            attribute: k,
                            reason: format!(
                                "members of the decomposition of `{}` cover both `{}` and `{}`",
                                l.label(c),
                                l.label(q),
                                l.label(p)
                            ),
                        })
                    }
                }
            }
            support.push(k);
            underline.insert(k, common.expect("non-bottom element has a non-empty decomposition"));
        }
        Ok(LtildeWitness { support, underline })
    }

    fn check_enumerable(&self) -> Result<usize> {
        let size = self.size();
        if size > self.max_elements || size > usize::MAX as u128 {
            return Err(Error::Size { what: "product enumeration", requested: size, limit: self.max_elements });
        }
        Ok(size as usize)
    }

    /// Number of elements when enumeration is allowed.
    pub fn enumerable_size(&self) -> Result<usize> {
        self.check_enumerable()
    }

    /// Position in the lexicographic order of coordinate ranks, first
    /// attribute most significant. This order is a linear extension of the
    /// product order.
    pub fn index_of(&self, x: &ProductElement) -> usize {
        self.lattices().zip(x.coords()).fold(0usize, |acc, (l, &c)| acc * l.len() + l.rank(c))
    }

    pub fn element_at(&self, mut index: usize) -> ProductElement {
        let mut coords = vec![0; self.n()];
        for k in (0..self.n()).rev() {
            let l = self.lattice(k);
            coords[k] = l.linear_extension()[index % l.len()];
            index /= l.len();
        }
        ProductElement(coords)
    }

    /// All elements in index order.
    pub fn elements(&self) -> Result<impl Iterator<Item = ProductElement> + '_> {
        let size = self.check_enumerable()?;
        Ok((0..size).map(move |i| self.element_at(i)))
    }

    /// Elements of `[a, b]`, in index order.
    pub fn interval(&self, a: &ProductElement, b: &ProductElement) -> Result<Vec<ProductElement>> {
        self.validate(a)?;
        self.validate(b)?;
        let mut axes = Vec::with_capacity(self.n());
        for (l, (&lo, &hi)) in self.lattices().zip(a.coords().iter().zip(b.coords())) {
            let mut axis = l.interval(lo, hi)?;
            axis.sort_by_key(|&e| l.rank(e));
            axes.push(axis);
        }
        Ok(cartesian(&axes))
    }

    /// Element from per-attribute labels.
    pub fn parse_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<ProductElement> {
        if labels.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: labels.len() });
        }
        labels
            .iter()
            .zip(self.lattices())
            .map(|(s, l)| l.id(s.as_ref()).ok_or_else(|| Error::UnknownLabel(s.as_ref().to_string())))
            .collect::<Result<Vec<_>>>()
            .map(ProductElement)
    }

    pub fn labels(&self, x: &ProductElement) -> Vec<String> {
        self.lattices().zip(x.coords()).map(|(l, &c)| l.label(c).to_string()).collect()
    }

    pub fn display(&self, x: &ProductElement) -> String {
        format!("({})", self.labels(x).join(","))
    }

    /// Whether elements fit a single word at two bits per coordinate.
    pub fn packable(&self) -> bool {
        self.n() <= 32 && self.lattices().all(|l| l.len() <= 4)
    }

    pub fn pack(&self, x: &ProductElement) -> Option<u64> {
        self.packable().then(|| {
            x.coords().iter().enumerate().fold(0u64, |acc, (k, &c)| acc | (c as u64) << (2 * k))
        })
    }

    pub fn unpack(&self, word: u64) -> ProductElement {
        ProductElement((0..self.n()).map(|k| (word >> (2 * k) & 0b11) as ElemId).collect())
    }

    /// Stable FNV-1a digest of attribute names, labels and covers.
    pub fn fingerprint(&self) -> String {
        let mut text = String::new();
        for a in &self.attributes {
            text.push_str(&a.name);
            text.push('[');
            text.push_str(&a.lattice.labels().join(","));
            text.push('|');
            for &(lo, hi) in a.lattice.covers() {
                text.push_str(&format!("{lo}<{hi};"));
            }
            text.push(']');
        }
        fnv1a(text.as_bytes())
    }
}

impl fmt::Display for ProductLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .attributes
            .iter()
            .map(|a| format!("{}:{}", a.name, a.lattice.len()))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

pub(crate) fn fnv1a(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// Cartesian product of per-coordinate lists, last coordinate fastest.
pub(crate) fn cartesian(axes: &[Vec<ElemId>]) -> Vec<ProductElement> {
    let mut out = vec![Vec::with_capacity(axes.len())];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&e| {
                    let mut p = prefix.clone();
                    p.push(e);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(ProductElement).collect()
}

/// Iterator over vertex completions, see [`ProductLattice::vertices`].
pub struct Vertices<'a> {
    product: &'a ProductLattice,
    base: Vec<ElemId>,
    free: Vec<usize>,
    next: u64,
}

impl Iterator for Vertices<'_> {
    type Item = (ProductElement, usize);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= 1u64 << self.free.len() {
            return None;
        }
        let mut coords = self.base.clone();
        // the first free coordinate is the most significant bit so that the
        // enumeration follows index order
        let f = self.free.len();
        for (pos, &k) in self.free.iter().enumerate() {
            if self.next >> (f - 1 - pos) & 1 == 1 {
                coords[k] = self.product.lattice(k).top();
            }
        }
        self.next += 1;
        let x = ProductElement(coords);
        let h = self.product.height(&x);
        Some((x, h))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = ((1u64 << self.free.len()) - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Vertices<'_> {}
