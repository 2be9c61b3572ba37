//! Importance and interaction indices on product lattices.
//!
//! The index of a target `x` averages the derivative `Δ_x v` over the
//! vertex completions of the coordinates `x` leaves at bottom, with the
//! coordinates in the support of `x` pinned just below `x`. The Möbius-side
//! formula, efficiency and the recursion for linear attributes are exposed
//! as separate checks.

use std::sync::Arc;

use rayon::prelude::*;

use crate::coeff::CoefficientScheme;
use crate::derivative::{derivative_over, derivative_single};
use crate::error::{Error, Result};
use crate::lattice::{ElemId, FiniteLattice};
use crate::product::{Attribute, ProductElement, ProductLattice};
use crate::transforms::{LatticeFunction, Valuation};
use crate::value::{Rational, Scalar};

fn coefficients<T: Scalar>(values: Vec<Rational>) -> Vec<T> {
    values.iter().map(T::from_rational).collect()
}

/// `I(i)` for a join-irreducible `i` of the product.
pub fn importance<T: Scalar>(v: &impl Valuation<T>, i: &ProductElement, scheme: &CoefficientScheme) -> Result<T> {
    let domain = v.domain();
    domain.validate(i)?;
    let irr = domain.as_irreducible(i).ok_or(Error::NotJoinIrreducible)?;
    let n = domain.n();
    let pred = domain.lattice(irr.attribute).predecessor(irr.element).expect("join-irreducible has a predecessor");
    let mut fixed = vec![None; n];
    fixed[irr.attribute] = Some(pred);
    let alpha: Vec<T> = coefficients((0..n).map(|h| scheme.alpha1(h, n)).collect());
    let mut total = T::zero();
    for (y, h) in domain.vertices(&fixed)? {
        total += alpha[h].clone() * derivative_single(v, i, &y)?;
    }
    Ok(total)
}

/// `I(x)` by its defining weighted sum of derivatives.
pub fn interaction_direct<T: Scalar>(v: &impl Valuation<T>, x: &ProductElement, scheme: &CoefficientScheme) -> Result<T> {
    let domain = v.domain();
    let witness = domain.ltilde_witness(x)?;
    if witness.support.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let n = domain.n();
    let j = witness.support.len();
    let members = domain.minimal_decomposition(x)?;
    let mut fixed: Vec<Option<ElemId>> = vec![None; n];
    for (&k, &u) in &witness.underline {
        fixed[k] = Some(u);
    }
    let alpha: Vec<T> = coefficients((0..=n - j).map(|h| scheme.alpha(j, h, n)).collect());
    let mut total = T::zero();
    for (y, h) in domain.vertices(&fixed)? {
        total += alpha[h].clone() * derivative_over(v, &members, &y)?;
    }
    Ok(total)
}

/// `I(x) = Σ_{z ∈ [x, x̌]} β^{|K|}_{k(z)} m(z)` with `m` the Möbius transform
/// of `v` and `x̌` raising the coordinates outside the support to top.
/// Requires every attribute to be distributive.
pub fn interaction_mobius<T: Scalar>(m: &LatticeFunction<T>, x: &ProductElement, scheme: &CoefficientScheme) -> Result<T> {
    let domain = m.domain_arc();
    require_distributive(domain)?;
    let witness = domain.ltilde_witness(x)?;
    if witness.support.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let n = domain.n();
    let j = witness.support.len();
    let beta: Vec<T> = coefficients((0..=n).map(|c| scheme.beta(j, c, n)).collect());
    let mut upper = x.clone();
    for (k, l) in domain.lattices().enumerate() {
        if !witness.underline.contains_key(&k) {
            upper.0[k] = l.top();
        }
    }
    let mut total = T::zero();
    for z in domain.interval(x, &upper)? {
        total += beta[domain.nonbottom_count(&z)].clone() * m.get(&z).clone();
    }
    Ok(total)
}

fn require_distributive(domain: &ProductLattice) -> Result<()> {
    match domain.attributes().iter().find(|a| !a.lattice.flags().is_distributive) {
        Some(a) => Err(Error::NotDistributive(a.name.clone())),
        None => Ok(()),
    }
}

fn require_linear(domain: &ProductLattice) -> Result<()> {
    match domain.attributes().iter().find(|a| !a.lattice.flags().is_linear) {
        Some(a) => Err(Error::NotLinear(a.name.clone())),
        None => Ok(()),
    }
}

/// Two sides of an identity, with the agreement verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome<T> {
    pub lhs: T,
    pub rhs: T,
    pub pass: bool,
}

impl<T: Scalar> CheckOutcome<T> {
    fn new(lhs: T, rhs: T) -> Self {
        let pass = lhs.agrees(&rhs);
        CheckOutcome { lhs, rhs, pass }
    }
}

/// `Σ_{i ∈ J(L)} I(i)` against `v(⊤) - v(⊥)`, for products of chains.
pub fn efficiency_check<T: Scalar>(v: &impl Valuation<T>, scheme: &CoefficientScheme) -> Result<CheckOutcome<T>> {
    let domain = v.domain();
    require_linear(domain)?;
    let mut lhs = T::zero();
    for irr in domain.join_irreducibles() {
        lhs += importance(v, &domain.irreducible_point(irr), scheme)?;
    }
    let rhs = v.value(&domain.top()) - v.value(&domain.bottom());
    Ok(CheckOutcome::new(lhs, rhs))
}

/// Support of `x` with each coordinate's join-irreducible and predecessor.
fn irreducible_support(domain: &ProductLattice, x: &ProductElement) -> Result<Vec<(usize, ElemId, ElemId)>> {
    domain.validate(x)?;
    require_linear(domain)?;
    let mut support = Vec::new();
    for (k, l) in domain.lattices().enumerate() {
        let c = x.0[k];
        if c == l.bottom() {
            continue;
        }
        let p = l.predecessor(c).ok_or(Error::SupportNotIrreducible(k))?;
        support.push((k, c, p));
    }
    Ok(support)
}

/// `v` with the attributes in `frozen` removed and pinned to the
/// predecessor of the target's coordinate there.
pub struct Restricted<'a, V> {
    inner: &'a V,
    domain: ProductLattice,
    keep: Vec<usize>,
    pinned: Vec<(usize, ElemId)>,
}

impl<'a, V> Restricted<'a, V> {
    /// The target with the frozen coordinates dropped.
    pub fn project(&self, x: &ProductElement) -> ProductElement {
        ProductElement(self.keep.iter().map(|&k| x.0[k]).collect())
    }
}

impl<T, V: Valuation<T>> Valuation<T> for Restricted<'_, V> {
    fn domain(&self) -> &ProductLattice {
        &self.domain
    }

    fn value(&self, y: &ProductElement) -> T {
        let mut full = vec![0; self.inner.domain().n()];
        for (pos, &k) in self.keep.iter().enumerate() {
            full[k] = y.0[pos];
        }
        for &(k, e) in &self.pinned {
            full[k] = e;
        }
        self.inner.value(&ProductElement(full))
    }
}

/// `v` on `∏_{k∉J} L_k × {⊥, ⊤}`, the last attribute standing for the whole
/// support `J` of the target moving together between its predecessors and
/// its coordinates.
pub struct Reduced<'a, V> {
    inner: &'a V,
    domain: ProductLattice,
    keep: Vec<usize>,
    support: Vec<(usize, ElemId, ElemId)>,
}

impl<'a, V> Reduced<'a, V> {
    /// `(⊥_{N∖J}, ⊤_[x])`, the index target of the merged attribute.
    pub fn merged_target(&self) -> ProductElement {
        let mut t = self.domain.bottom();
        let last = self.domain.n() - 1;
        t.0[last] = self.domain.lattice(last).top();
        t
    }
}

impl<T, V: Valuation<T>> Valuation<T> for Reduced<'_, V> {
    fn domain(&self) -> &ProductLattice {
        &self.domain
    }

    fn value(&self, y: &ProductElement) -> T {
        let mut full = vec![0; self.inner.domain().n()];
        for (pos, &k) in self.keep.iter().enumerate() {
            full[k] = y.0[pos];
        }
        let last = self.domain.n() - 1;
        let raised = y.0[last] == self.domain.lattice(last).top();
        for &(k, i, under) in &self.support {
            full[k] = if raised { i } else { under };
        }
        self.inner.value(&ProductElement(full))
    }
}

/// Restriction of `v` to the attributes outside `frozen`, where `frozen` is
/// a subset of the support of `x`. All attributes must be chains and every
/// support coordinate of `x` join-irreducible.
pub fn restricted_function<'a, T, V: Valuation<T>>(
    v: &'a V,
    x: &ProductElement,
    frozen: &[usize],
) -> Result<Restricted<'a, V>> {
    let domain = v.domain();
    let support = irreducible_support(domain, x)?;
    let support_ids: Vec<usize> = support.iter().map(|s| s.0).collect();
    if frozen.iter().any(|k| !support_ids.contains(k)) {
        return Err(Error::InvalidSubset { subset: frozen.to_vec(), support: support_ids });
    }
    let keep: Vec<usize> = (0..domain.n()).filter(|k| !frozen.contains(k)).collect();
    let attrs: Vec<Attribute> = keep.iter().map(|&k| domain.attributes()[k].clone()).collect();
    let sub = ProductLattice::new(attrs)?.with_max_elements(domain.max_elements());
    let pinned = support.iter().filter(|s| frozen.contains(&s.0)).map(|&(k, _, p)| (k, p)).collect();
    Ok(Restricted { inner: v, domain: sub, keep, pinned })
}

/// Reduction of `v` merging the support of `x` into one two-level attribute.
pub fn reduced_function<'a, T, V: Valuation<T>>(v: &'a V, x: &ProductElement) -> Result<Reduced<'a, V>> {
    let domain = v.domain();
    let support = irreducible_support(domain, x)?;
    if support.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let keep: Vec<usize> = (0..domain.n()).filter(|k| !support.iter().any(|s| s.0 == *k)).collect();
    let mut attrs: Vec<Attribute> = keep.iter().map(|&k| domain.attributes()[k].clone()).collect();
    let merged_name = format!("[{}]", support.iter().map(|s| domain.attributes()[s.0].name.clone()).collect::<Vec<_>>().join(","));
    attrs.push(Attribute { name: merged_name.clone(), lattice: Arc::new(FiniteLattice::boolean(&merged_name)) });
    let sub = ProductLattice::new(attrs)?.with_max_elements(domain.max_elements());
    Ok(Reduced { inner: v, domain: sub, keep, support })
}

/// Both sides of the recursion
/// `I^v(x) = I^{v^[x]}(⊥, ⊤_[x]) - Σ_{∅≠K⊊J} I^{v^{N∖K}_x}(x|N∖K)`.
pub fn recursion_check<T: Scalar, V: Valuation<T>>(
    v: &V,
    x: &ProductElement,
    scheme: &CoefficientScheme,
) -> Result<CheckOutcome<T>> {
    let domain = v.domain();
    let support = irreducible_support(domain, x)?;
    if support.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let lhs = interaction_direct(v, x, scheme)?;
    let reduced = reduced_function(v, x)?;
    let mut rhs = interaction_direct(&reduced, &reduced.merged_target(), scheme)?;
    let ids: Vec<usize> = support.iter().map(|s| s.0).collect();
    let j = ids.len();
    for mask in 1u64..(1 << j) - 1 {
        let frozen: Vec<usize> = (0..j).filter(|b| mask >> b & 1 == 1).map(|b| ids[b]).collect();
        let restricted = restricted_function(v, x, &frozen)?;
        rhs -= interaction_direct(&restricted, &restricted.project(x), scheme)?;
    }
    Ok(CheckOutcome::new(lhs, rhs))
}

/// Elements that are valid interaction targets: non-bottom and in `L̃`.
pub fn ltilde_targets(domain: &ProductLattice) -> Result<Vec<ProductElement>> {
    let bottom = domain.bottom();
    Ok(domain
        .elements()?
        .filter(|x| *x != bottom && domain.ltilde_witness(x).is_ok())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Mobius,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Mobius => "mobius",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow<T> {
    pub target: ProductElement,
    pub support: Vec<usize>,
    pub direct: Option<T>,
    pub mobius: Option<T>,
    /// Set when the coalition coefficients were extended to non-linear
    /// attributes.
    pub extended: bool,
    pub skipped: Option<String>,
}

impl<T: Scalar> ReportRow<T> {
    /// `Some(agree)` when both methods produced a value.
    pub fn agreement(&self) -> Option<bool> {
        match (&self.direct, &self.mobius) {
            (Some(a), Some(b)) => Some(a.agrees(b)),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&T> {
        self.direct.as_ref().or(self.mobius.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionReport<T> {
    pub scheme: String,
    pub method: Method,
    pub lattice_fingerprint: String,
    pub function_fingerprint: Option<String>,
    pub warnings: Vec<String>,
    pub rows: Vec<ReportRow<T>>,
}

impl<T: Scalar> InteractionReport<T> {
    /// Evaluates every target, in parallel, keeping target order. The Möbius
    /// method needs `mobius` and distributive attributes; otherwise it is
    /// downgraded to the direct method with a warning.
    pub fn compute<V: Valuation<T> + Sync>(
        v: &V,
        mobius: Option<&LatticeFunction<T>>,
        targets: &[ProductElement],
        scheme: &CoefficientScheme,
        method: Method,
    ) -> Self {
        let domain = v.domain();
        let mut warnings = Vec::new();
        let mut method = method;
        if method != Method::Direct {
            if let Err(e) = require_distributive(domain) {
                warnings.push(format!("{e}; using the direct method"));
                method = Method::Direct;
            } else if mobius.is_none() {
                warnings.push("Möbius transform unavailable; using the direct method".into());
                method = Method::Direct;
            }
        }
        let linear = domain.all_linear();
        let rows = targets
            .par_iter()
            .map(|x| {
                let support = match domain.ltilde_witness(x) {
                    Ok(w) if w.support.is_empty() => return skipped(x, Error::EmptyTarget),
                    Ok(w) => w.support,
                    Err(e) => return skipped(x, e),
                };
                let direct = match method {
                    Method::Direct | Method::Both => match interaction_direct(v, x, scheme) {
                        Ok(val) => Some(val),
                        Err(e) => return skipped(x, e),
                    },
                    Method::Mobius => None,
                };
                let mob = match (method, mobius) {
                    (Method::Mobius | Method::Both, Some(m)) => match interaction_mobius(m, x, scheme) {
                        Ok(val) => Some(val),
                        Err(e) => return skipped(x, e),
                    },
                    _ => None,
                };
                ReportRow {
                    extended: !linear && support.len() > 1,
                    target: x.clone(),
                    support,
                    direct,
                    mobius: mob,
                    skipped: None,
                }
            })
            .collect();
        InteractionReport {
            scheme: scheme.name().to_string(),
            method,
            lattice_fingerprint: domain.fingerprint(),
            function_fingerprint: None,
            warnings,
            rows,
        }
    }

    /// Rows computed by both methods that disagree.
    pub fn disagreements(&self) -> usize {
        self.rows.iter().filter(|r| r.agreement() == Some(false)).count()
    }
}

fn skipped<T>(x: &ProductElement, e: Error) -> ReportRow<T> {
    ReportRow {
        target: x.clone(),
        support: Vec::new(),
        direct: None,
        mobius: None,
        extended: false,
        skipped: Some(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::mobius;
    use crate::value::{int, rat};

    fn capacity(n: usize, values: &[Rational]) -> LatticeFunction<Rational> {
        let p = Arc::new(ProductLattice::boolean(n).unwrap());
        LatticeFunction::from_fn(Arc::clone(&p), |x| {
            let mask = x.coords().iter().enumerate().filter(|(_, &c)| c == 1).fold(0, |a, (k, _)| a | 1 << k);
            values[mask].clone()
        })
        .unwrap()
    }

    #[test]
    fn complementary_pair() {
        let v = capacity(2, &[int(0), int(0), int(0), int(1)]);
        let p = v.domain_arc().clone();
        let s = CoefficientScheme::shapley();
        for label in [["1", "0"], ["0", "1"]] {
            let i = p.parse_labels(&label).unwrap();
            assert_eq!(importance(&v, &i, &s).unwrap(), rat(1, 2));
            assert_eq!(interaction_direct(&v, &i, &s).unwrap(), rat(1, 2));
        }
        assert_eq!(interaction_direct(&v, &p.top(), &s).unwrap(), int(1));
        let m = mobius(&v);
        assert_eq!(interaction_mobius(&m, &p.top(), &s).unwrap(), int(1));
        assert!(matches!(interaction_direct(&v, &p.bottom(), &s), Err(Error::EmptyTarget)));
    }

    #[test]
    fn ternary_square_indices() {
        // the four indices of the 3^2 square, each one corner difference
        let p = Arc::new(ProductLattice::ternary(2).unwrap());
        let v = LatticeFunction::from_fn(Arc::clone(&p), |x| int((x.0[0] * 3 + x.0[1] * x.0[1] * 5 + x.0[0] * x.0[1]) as i64)).unwrap();
        let at = |a: &str, b: &str| v.get(&p.parse_labels(&[a, b]).unwrap()).clone();
        let s = CoefficientScheme::shapley();
        let idx = |a: &str, b: &str| interaction_direct(&v, &p.parse_labels(&[a, b]).unwrap(), &s).unwrap();
        assert_eq!(idx("1", "1"), at("1", "1") - at("0", "1") - at("1", "0") + at("0", "0"));
        assert_eq!(idx("0", "0"), at("0", "0") - at("-1", "0") - at("0", "-1") + at("-1", "-1"));
        assert_eq!(idx("1", "0"), at("1", "0") - at("0", "0") - at("1", "-1") + at("0", "-1"));
        assert_eq!(idx("0", "1"), at("0", "1") - at("-1", "1") - at("0", "0") + at("-1", "0"));
    }

    #[test]
    fn non_distributive_mobius_rejected() {
        let p = Arc::new(ProductLattice::from_lattices(vec![FiniteLattice::m3("m3")]).unwrap());
        let v = LatticeFunction::from_fn(Arc::clone(&p), |x| int(x.0[0] as i64)).unwrap();
        let m = mobius(&v);
        let a = p.parse_labels(&["a"]).unwrap();
        assert!(matches!(interaction_mobius(&m, &a, &CoefficientScheme::shapley()), Err(Error::NotDistributive(_))));
        // the direct definition still applies
        assert_eq!(interaction_direct(&v, &a, &CoefficientScheme::shapley()).unwrap(), int(1));
    }

    #[test]
    fn restricted_and_reduced_views() {
        let values: Vec<Rational> = (0..8).map(|s| int(s * s + 1)).collect();
        let v = capacity(3, &values);
        let p = v.domain_arc().clone();
        let x = p.parse_labels(&["1", "1", "0"]).unwrap();
        let r = restricted_function(&v, &x, &[0]).unwrap();
        assert_eq!(r.domain().n(), 2);
        // v^{N∖{1}}(S) = v(S) for S ⊆ {2,3}
        for y in r.domain().elements().unwrap() {
            let full = ProductElement(vec![0, y.0[0], y.0[1]]);
            assert_eq!(r.value(&y), v.value(&full));
        }
        let red = reduced_function(&v, &x).unwrap();
        assert_eq!(red.domain().n(), 2);
        // v_[S](T ∪ [S]) = v(T ∪ S)
        for y in red.domain().elements().unwrap() {
            let full = ProductElement(vec![y.0[1], y.0[1], y.0[0]]);
            assert_eq!(red.value(&y), v.value(&full));
        }
        let none = restricted_function(&v, &x, &[]).unwrap();
        for y in p.elements().unwrap() {
            assert_eq!(none.value(&y), v.value(&y));
        }
        assert!(matches!(restricted_function(&v, &x, &[2]), Err(Error::InvalidSubset { .. })));
    }

    #[test]
    fn recursion_rejects_non_irreducible_support() {
        let p = Arc::new(ProductLattice::from_lattices(vec![FiniteLattice::diamond("d"), FiniteLattice::boolean("b")]).unwrap());
        let v = LatticeFunction::from_fn(Arc::clone(&p), |_| int(0)).unwrap();
        let x = p.top();
        assert!(matches!(recursion_check(&v, &x, &CoefficientScheme::shapley()), Err(Error::NotLinear(_))));
        let t = Arc::new(ProductLattice::ternary(2).unwrap());
        let v = LatticeFunction::from_fn(Arc::clone(&t), |_| int(0)).unwrap();
        // coordinate `1` is join-irreducible in -1 < 0 < 1, coordinate `0` too;
        // every non-bottom chain element is, so build a target on a 4-chain
        let c = Arc::new(ProductLattice::from_lattices(vec![FiniteLattice::chain_of("c", 4).unwrap()]).unwrap());
        let w = LatticeFunction::from_fn(Arc::clone(&c), |x| int(x.0[0] as i64)).unwrap();
        assert!(recursion_check(&w, &c.top(), &CoefficientScheme::shapley()).unwrap().pass);
        assert!(recursion_check(&v, &t.top(), &CoefficientScheme::banzhaf()).unwrap().pass);
    }

    #[test]
    fn report_downgrades_and_orders() {
        let p = Arc::new(ProductLattice::from_lattices(vec![FiniteLattice::m3("m3"), FiniteLattice::boolean("b")]).unwrap());
        let v = LatticeFunction::from_fn(Arc::clone(&p), |x| int((x.0[0] + 2 * x.0[1]) as i64)).unwrap();
        let targets: Vec<_> = p.elements().unwrap().collect();
        let r = InteractionReport::compute(&v, None, &targets, &CoefficientScheme::shapley(), Method::Both);
        assert_eq!(r.method, Method::Direct);
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.rows.len(), targets.len());
        assert!(r.rows[0].skipped.is_some());
        for (row, t) in r.rows.iter().zip(&targets) {
            assert_eq!(&row.target, t);
        }
        // top of M3 has no unique decomposition
        let top_row = r.rows.iter().find(|row| row.target == p.top()).unwrap();
        assert!(top_row.skipped.is_some());
    }
}
