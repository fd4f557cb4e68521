//! Single-valued maps and multifunctions between finite spaces.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::topology::{product, FinSpace};

/// Default cap on enumerated selections and submultifunctions.
pub const DEFAULT_SEARCH_CAP: u128 = 1_000_000;

/// A total function between two finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    domain: Arc<FinSpace>,
    codomain: Arc<FinSpace>,
    table: Vec<usize>,
}

/// A set-valued map between two finite spaces; values may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMap {
    domain: Arc<FinSpace>,
    codomain: Arc<FinSpace>,
    table: Vec<PointSet>,
}

/// Outcome of a pointwise check. `witness` is `None` when the check holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<W> {
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    fn pass() -> Self {
        Verdict { witness: None }
    }

    fn fail(w: W) -> Self {
        Verdict { witness: Some(w) }
    }

    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// A point together with an open of the codomain that the image of every
/// neighborhood of the point escapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenViolation {
    pub point: usize,
    pub open: PointSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    Union,
    Intersection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UscoMode {
    Usco,
    Minimal,
}

impl PointMap {
    pub fn new(domain: Arc<FinSpace>, codomain: Arc<FinSpace>, table: Vec<usize>) -> Result<PointMap> {
        if table.len() != domain.len() {
            return Err(Error::ValidationFailed(format!(
                "map table has {} entries for a domain of {} points",
                table.len(),
                domain.len()
            )));
        }
        for &y in &table {
            codomain.check_point(y)?;
        }
        Ok(PointMap {
            domain,
            codomain,
            table,
        })
    }

    pub fn from_labels<S: AsRef<str>>(
        domain: Arc<FinSpace>,
        codomain: Arc<FinSpace>,
        pairs: &[(S, S)],
    ) -> Result<PointMap> {
        let mut table = vec![usize::MAX; domain.len()];
        for (x, y) in pairs {
            let i = domain.index_of(x.as_ref())?;
            table[i] = codomain.index_of(y.as_ref())?;
        }
        if let Some(i) = table.iter().position(|&y| y == usize::MAX) {
            return Err(Error::ValidationFailed(format!(
                "map is undefined at `{}`",
                domain.label(i)
            )));
        }
        PointMap::new(domain, codomain, table)
    }

    pub fn identity(space: Arc<FinSpace>) -> PointMap {
        let n = space.len();
        PointMap {
            domain: space.clone(),
            codomain: space,
            table: (0..n).collect(),
        }
    }

    pub fn domain(&self) -> &Arc<FinSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinSpace> {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub(crate) fn image_unchecked(&self, set: &PointSet) -> PointSet {
        let mut out = self.codomain.empty_set();
        for x in set.iter() {
            out.insert(self.table[x]);
        }
        out
    }

    pub fn image(&self, set: &PointSet) -> Result<PointSet> {
        self.domain.check(set)?;
        Ok(self.image_unchecked(set))
    }

    pub fn preimage(&self, set: &PointSet) -> Result<PointSet> {
        self.codomain.check(set)?;
        Ok(self.preimage_unchecked(set))
    }

    pub(crate) fn preimage_unchecked(&self, set: &PointSet) -> PointSet {
        let mut out = self.domain.empty_set();
        for (x, &y) in self.table.iter().enumerate() {
            if set.contains(y) {
                out.insert(x);
            }
        }
        out
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        self.image_unchecked(&self.domain.full_set()).count() == self.codomain.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.len() == self.codomain.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Result<PointMap> {
        if !self.is_bijective() {
            return Err(Error::ValidationFailed("map is not a bijection".into()));
        }
        let mut table = vec![0; self.codomain.len()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Ok(PointMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            table,
        })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PointMap) -> Result<PointMap> {
        if *self.codomain != *next.domain {
            return Err(Error::SpaceMismatch);
        }
        Ok(PointMap {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            table: self.table.iter().map(|&y| next.table[y]).collect(),
        })
    }

    /// `x ↦ {f(x)}`.
    pub fn to_multimap(&self) -> MultiMap {
        MultiMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            table: self.table.iter().map(|&y| self.codomain.singleton(y)).collect(),
        }
    }

    /// Preimage of each codomain point.
    pub fn fibers(&self) -> Vec<PointSet> {
        let mut out = vec![self.domain.empty_set(); self.codomain.len()];
        for (x, &y) in self.table.iter().enumerate() {
            out[y].insert(x);
        }
        out
    }

    /// Continuity at `at` (or everywhere): `f(U_p) ⊆ U_{f(p)}`.
    pub fn is_continuous(&self, at: Option<usize>) -> Verdict<OpenViolation> {
        let check = |p: usize| {
            let target = self.codomain.min_open(self.table[p]);
            self.domain
                .min_open(p)
                .iter()
                .all(|q| target.contains(self.table[q]))
        };
        let points: Vec<usize> = match at {
            Some(p) => vec![p],
            None => (0..self.domain.len()).collect(),
        };
        for p in points {
            if !check(p) {
                return Verdict::fail(OpenViolation {
                    point: p,
                    open: self.codomain.min_open(self.table[p]).clone(),
                });
            }
        }
        Verdict::pass()
    }

    /// Continuity via preimages of every open of the codomain.
    pub fn is_continuous_by_opens(&self) -> bool {
        self.codomain
            .opens()
            .iter()
            .all(|v| self.domain.is_open(&self.preimage_unchecked(v)))
    }

    /// Whether the image of every closed set is closed.
    ///
    /// Closed sets of a finite space are unions of point closures and images
    /// commute with unions, so checking the point closures suffices.
    pub fn is_closed_map(&self) -> bool {
        (0..self.domain.len()).all(|x| {
            let img = self.image_unchecked(&self.domain.point_closure(x));
            self.codomain.is_closed(&img)
        })
    }

    /// Closedness checked against every closed set of the domain.
    pub fn is_closed_map_by_closed_sets(&self) -> bool {
        self.domain
            .closed_sets()
            .iter()
            .all(|c| self.codomain.is_closed(&self.image_unchecked(c)))
    }
}

impl MultiMap {
    pub fn new(domain: Arc<FinSpace>, codomain: Arc<FinSpace>, table: Vec<PointSet>) -> Result<MultiMap> {
        if table.len() != domain.len() {
            return Err(Error::ValidationFailed(format!(
                "multimap table has {} entries for a domain of {} points",
                table.len(),
                domain.len()
            )));
        }
        for v in &table {
            codomain.check(v)?;
        }
        Ok(MultiMap {
            domain,
            codomain,
            table,
        })
    }

    pub fn from_indices(domain: Arc<FinSpace>, codomain: Arc<FinSpace>, table: &[Vec<usize>]) -> Result<MultiMap> {
        let sets = table
            .iter()
            .map(|v| codomain.set_from_indices(v.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        MultiMap::new(domain, codomain, sets)
    }

    pub fn from_labels<S: AsRef<str>>(
        domain: Arc<FinSpace>,
        codomain: Arc<FinSpace>,
        entries: &[(S, Vec<S>)],
    ) -> Result<MultiMap> {
        let mut table = vec![codomain.empty_set(); domain.len()];
        for (x, ys) in entries {
            let i = domain.index_of(x.as_ref())?;
            table[i] = codomain.set_from_labels(ys)?;
        }
        MultiMap::new(domain, codomain, table)
    }

    pub fn domain(&self) -> &Arc<FinSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinSpace> {
        &self.codomain
    }

    pub fn table(&self) -> &[PointSet] {
        &self.table
    }

    pub fn value(&self, x: usize) -> &PointSet {
        &self.table[x]
    }

    pub fn is_nonempty(&self) -> bool {
        self.table.iter().all(|v| !v.is_empty())
    }

    pub(crate) fn image_unchecked(&self, set: &PointSet) -> PointSet {
        let mut out = self.codomain.empty_set();
        for x in set.iter() {
            out.union_with(&self.table[x]);
        }
        out
    }

    /// `F(A)`, the union of `F(x)` over `x ∈ A`.
    pub fn image(&self, set: &PointSet) -> Result<PointSet> {
        self.domain.check(set)?;
        Ok(self.image_unchecked(set))
    }

    /// `(F⁻¹(B), F⁺¹(B))`: points whose value meets `B`, and points whose
    /// value lies inside `B`.
    pub fn inverse_and_core(&self, set: &PointSet) -> Result<(PointSet, PointSet)> {
        self.codomain.check(set)?;
        let mut inv = self.domain.empty_set();
        let mut core = self.domain.empty_set();
        for (x, v) in self.table.iter().enumerate() {
            if v.intersects_unchecked(set) {
                inv.insert(x);
            }
            if v.is_subset_unchecked(set) {
                core.insert(x);
            }
        }
        Ok((inv, core))
    }

    pub fn combine(&self, other: &MultiMap, mode: CombineMode) -> Result<MultiMap> {
        if *self.domain != *other.domain || *self.codomain != *other.codomain {
            return Err(Error::SpaceMismatch);
        }
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| match mode {
                CombineMode::Union => a.union_unchecked(b),
                CombineMode::Intersection => a.intersection_unchecked(b),
            })
            .collect();
        Ok(MultiMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            table,
        })
    }

    /// `outer ∘ self`, i.e. `x ↦ outer(self(x))`.
    pub fn then(&self, outer: &MultiMap) -> Result<MultiMap> {
        if *self.codomain != *outer.domain {
            return Err(Error::SpaceMismatch);
        }
        let table = self.table.iter().map(|v| outer.image_unchecked(v)).collect();
        Ok(MultiMap {
            domain: self.domain.clone(),
            codomain: outer.codomain.clone(),
            table,
        })
    }

    /// `gr(self) ⊆ gr(other)`.
    pub fn is_submultifunction_of(&self, other: &MultiMap) -> bool {
        *self.domain == *other.domain
            && *self.codomain == *other.codomain
            && self
                .table
                .iter()
                .zip(&other.table)
                .all(|(a, b)| a.is_subset_unchecked(b))
    }

    pub fn contains_selection(&self, f: &PointMap) -> bool {
        *self.domain == *f.domain
            && *self.codomain == *f.codomain
            && f.table.iter().enumerate().all(|(x, &y)| self.table[x].contains(y))
    }

    /// Number of selections, `∏ |F(x)|`.
    pub fn selection_count(&self) -> u128 {
        self.table
            .iter()
            .map(|v| v.count() as u128)
            .fold(1u128, |acc, c| acc.saturating_mul(c))
    }

    /// Lexicographic enumeration of all selections.
    pub fn selections(&self, cap: u128) -> Result<Selections> {
        if let Some(x) = self.table.iter().position(PointSet::is_empty) {
            return Err(Error::EmptyValue(self.domain.label(x).to_string()));
        }
        let total = self.selection_count();
        if total > cap {
            return Err(Error::SearchSpaceTooLarge { size: total, cap });
        }
        Ok(Selections {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            choices: self.table.iter().map(PointSet::to_vec).collect(),
            total,
            next: 0,
        })
    }

    /// Upper semicontinuity at `at` (or everywhere).
    ///
    /// Cores are monotone in the target set, so the smallest open superset
    /// of `F(p)` is the binding constraint: `F(U_p) ⊆ ⋃_{y ∈ F(p)} U_y`.
    pub fn is_usc(&self, at: Option<usize>) -> Verdict<OpenViolation> {
        let points: Vec<usize> = match at {
            Some(p) => vec![p],
            None => (0..self.domain.len()).collect(),
        };
        for p in points {
            let hull = self.codomain.open_hull(&self.table[p]);
            let reach = self.image_unchecked(self.domain.min_open(p));
            if !reach.is_subset_unchecked(&hull) {
                return Verdict::fail(OpenViolation { point: p, open: hull });
            }
        }
        Verdict::pass()
    }

    /// Upper semicontinuity at `p` by quantifying over every open `V ⊇ F(p)`.
    pub fn is_usc_definitional(&self, p: usize) -> bool {
        self.codomain
            .opens()
            .iter()
            .filter(|v| self.table[p].is_subset_unchecked(v))
            .all(|v| {
                let (_, core) = self.inverse_and_core(v).expect("same space");
                self.domain.min_open(p).is_subset_unchecked(&core)
            })
    }

    /// Values are finite, hence compact, so usco means non-empty and u.s.c.
    pub fn is_usco(&self, mode: UscoMode, cap: u128) -> Result<bool> {
        let usco = self.is_nonempty() && self.is_usc(None).holds();
        match mode {
            UscoMode::Usco => Ok(usco),
            UscoMode::Minimal => {
                if !usco {
                    return Ok(false);
                }
                Ok(self.proper_usco_submultifunction(cap)?.is_none())
            }
        }
    }

    /// A proper non-empty submultifunction that is usco, if one exists.
    /// Exhaustive over `∏ (2^{|F(x)|} − 1)` candidates.
    pub fn proper_usco_submultifunction(&self, cap: u128) -> Result<Option<MultiMap>> {
        let options: Vec<Vec<PointSet>> = self
            .table
            .iter()
            .map(nonempty_subsets)
            .collect();
        let total = options
            .iter()
            .map(|o| o.len() as u128)
            .fold(1u128, |acc, c| acc.saturating_mul(c));
        if total > cap {
            return Err(Error::SearchSpaceTooLarge { size: total, cap });
        }
        let mut digits = vec![0usize; options.len()];
        for _ in 0..total {
            let table: Vec<PointSet> = digits.iter().zip(&options).map(|(&d, o)| o[d].clone()).collect();
            if table != self.table {
                let sub = MultiMap {
                    domain: self.domain.clone(),
                    codomain: self.codomain.clone(),
                    table,
                };
                if sub.is_usc(None).holds() {
                    return Ok(Some(sub));
                }
            }
            advance(&mut digits, &options.iter().map(Vec::len).collect::<Vec<_>>());
        }
        Ok(None)
    }

    /// Every net in a finite space has a cluster point, so every
    /// multifunction between finite spaces is subcontinuous.
    pub fn is_subcontinuous(&self) -> bool {
        true
    }

    /// `gr(F)` and its closure inside `domain × codomain`.
    pub fn graph_and_closure(&self) -> (Arc<FinSpace>, PointSet, PointSet) {
        let prod = Arc::new(product(&self.domain, &self.codomain));
        let gr = self.graph_in(&prod);
        let cl = prod.closure(&gr);
        (prod, gr, cl)
    }

    /// `gr(F)` as a subset of a product built by [`product`] from the same
    /// spaces.
    pub fn graph_in(&self, prod: &FinSpace) -> PointSet {
        let m = self.codomain.len();
        debug_assert_eq!(prod.len(), self.domain.len() * m);
        let mut gr = prod.empty_set();
        for (x, v) in self.table.iter().enumerate() {
            for y in v.iter() {
                gr.insert(x * m + y);
            }
        }
        gr
    }

    /// `gr(F)` as a subspace of the product, with its two coordinate
    /// projections.
    pub fn graph_space(&self) -> (Arc<FinSpace>, PointMap, PointMap) {
        let prod = product(&self.domain, &self.codomain);
        let gr = self.graph_in(&prod);
        let (sub, members) = prod.subspace(&gr).expect("graph lies in the product");
        let sub = Arc::new(sub.with_name(&format!("gr({})", prod.name())));
        let m = self.codomain.len();
        let px = PointMap {
            domain: sub.clone(),
            codomain: self.domain.clone(),
            table: members.iter().map(|i| i / m).collect(),
        };
        let py = PointMap {
            domain: sub,
            codomain: self.codomain.clone(),
            table: members.iter().map(|i| i % m).collect(),
        };
        (px.domain.clone(), px, py)
    }

    /// Reads a multimap off a subset of `domain × codomain`.
    pub fn from_graph(domain: Arc<FinSpace>, codomain: Arc<FinSpace>, graph: &PointSet) -> MultiMap {
        let m = codomain.len();
        let mut table = vec![codomain.empty_set(); domain.len()];
        for i in graph.iter() {
            table[i / m].insert(i % m);
        }
        MultiMap {
            domain,
            codomain,
            table,
        }
    }
}

/// `y ↦ f⁻¹({y})`, a multifunction from the codomain back to the domain.
pub fn inverse_image_multifunction(f: &PointMap) -> MultiMap {
    MultiMap {
        domain: f.codomain.clone(),
        codomain: f.domain.clone(),
        table: f.fibers(),
    }
}

fn nonempty_subsets(v: &PointSet) -> Vec<PointSet> {
    let members = v.to_vec();
    let k = members.len();
    assert!(k < 64, "value too large for subset enumeration");
    (1u64..(1u64 << k))
        .map(|mask| {
            let mut s = v.clone();
            for (bit, &m) in members.iter().enumerate() {
                if mask & (1 << bit) == 0 {
                    s.remove(m);
                }
            }
            s
        })
        .collect()
}

/// Mixed-radix increment with the last position least significant.
fn advance(digits: &mut [usize], radix: &[usize]) {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix[i] {
            return;
        }
        digits[i] = 0;
    }
}

/// All selections of a non-empty multimap in lexicographic order of their
/// tables. Any selection can be rebuilt from its index, so ranges of the
/// enumeration can be processed independently.
#[derive(Debug, Clone)]
pub struct Selections {
    domain: Arc<FinSpace>,
    codomain: Arc<FinSpace>,
    choices: Vec<Vec<usize>>,
    total: u128,
    next: u128,
}

impl Selections {
    pub fn total(&self) -> u128 {
        self.total
    }

    /// The selection at position `index` of the enumeration.
    pub fn get(&self, mut index: u128) -> Option<PointMap> {
        if index >= self.total {
            return None;
        }
        let mut table = vec![0; self.choices.len()];
        for (x, c) in self.choices.iter().enumerate().rev() {
            let k = c.len() as u128;
            table[x] = c[(index % k) as usize];
            index /= k;
        }
        Some(PointMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            table,
        })
    }
}

impl Iterator for Selections {
    type Item = PointMap;

    fn next(&mut self) -> Option<PointMap> {
        let out = self.get(self.next)?;
        self.next += 1;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2() -> Arc<FinSpace> {
        Arc::new(FinSpace::sierpinski())
    }

    fn d2() -> Arc<FinSpace> {
        Arc::new(FinSpace::discrete(2))
    }

    /// F(a)={0}, F(b)={0,1} on S2 ⇉ D2.
    fn f_ab() -> MultiMap {
        MultiMap::from_indices(s2(), d2(), &[vec![0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn image_examples() {
        let f = f_ab();
        let all = f.domain().full_set();
        assert_eq!(f.image(&all).unwrap().to_vec(), vec![0, 1]);
        assert!(f.image(&f.domain().empty_set()).unwrap().is_empty());
        let e = MultiMap::from_indices(s2(), d2(), &[vec![], vec![]]).unwrap();
        assert!(e.image(&all).unwrap().is_empty());
    }

    #[test]
    fn inverse_and_core_examples() {
        let f = f_ab();
        let (inv, core) = f.inverse_and_core(&f.codomain().singleton(0)).unwrap();
        assert_eq!(inv.to_vec(), vec![0, 1]);
        assert_eq!(core.to_vec(), vec![0]);

        let (inv, core) = f.inverse_and_core(&f.codomain().full_set()).unwrap();
        assert_eq!(inv.to_vec(), vec![0, 1]);
        assert_eq!(core.to_vec(), vec![0, 1]);

        let g = MultiMap::from_indices(s2(), d2(), &[vec![], vec![1]]).unwrap();
        let (inv, core) = g.inverse_and_core(&g.codomain().empty_set()).unwrap();
        assert!(inv.is_empty());
        assert_eq!(core.to_vec(), vec![0]);

        assert_eq!(
            f.inverse_and_core(&f.domain().full_set()).unwrap_err(),
            Error::SpaceMismatch
        );
    }

    #[test]
    fn combine_and_compose() {
        let f = PointMap::new(s2(), d2(), vec![0, 1]).unwrap();
        let g = PointMap::new(s2(), d2(), vec![1, 1]).unwrap();
        let u = f.to_multimap().combine(&g.to_multimap(), CombineMode::Union).unwrap();
        assert_eq!(u.value(0).to_vec(), vec![0, 1]);
        assert_eq!(u.value(1).to_vec(), vec![1]);

        let ff = f_ab();
        assert_eq!(ff.combine(&ff, CombineMode::Intersection).unwrap(), ff);

        // F(x) = {y1, y2}, H(y1) = {z1}, H(y2) = {z1, z2}
        let x = Arc::new(FinSpace::discrete(1));
        let y = d2();
        let z = d2();
        let big_f = MultiMap::from_indices(x, y.clone(), &[vec![0, 1]]).unwrap();
        let h = MultiMap::from_indices(y, z, &[vec![0], vec![0, 1]]).unwrap();
        assert_eq!(big_f.then(&h).unwrap().value(0).to_vec(), vec![0, 1]);
        assert_eq!(h.then(&h).unwrap().value(1).to_vec(), vec![0, 1]);
        assert_eq!(h.then(&big_f).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn selections_examples() {
        let f = f_ab();
        let sel: Vec<PointMap> = f.selections(DEFAULT_SEARCH_CAP).unwrap().collect();
        assert_eq!(sel.len(), 2);
        assert_eq!(sel[0].table(), &[0, 0]);
        assert_eq!(sel[1].table(), &[0, 1]);

        let g = PointMap::new(s2(), d2(), vec![1, 0]).unwrap();
        let sel: Vec<PointMap> = g.to_multimap().selections(DEFAULT_SEARCH_CAP).unwrap().collect();
        assert_eq!(sel, vec![g]);

        let e = MultiMap::from_indices(s2(), d2(), &[vec![0], vec![]]).unwrap();
        assert_eq!(e.selections(10).unwrap_err(), Error::EmptyValue("b".into()));
        assert!(matches!(
            f.selections(1),
            Err(Error::SearchSpaceTooLarge { size: 2, cap: 1 })
        ));
    }

    #[test]
    fn inverse_image_examples() {
        let one = Arc::new(FinSpace::discrete(1));
        let c = PointMap::new(d2(), one, vec![0, 0]).unwrap();
        assert_eq!(inverse_image_multifunction(&c).value(0).to_vec(), vec![0, 1]);

        let id = PointMap::identity(d2());
        let inv = inverse_image_multifunction(&id);
        assert_eq!(inv.value(1).to_vec(), vec![1]);

        let f = PointMap::new(s2(), d2(), vec![0, 0]).unwrap();
        let inv = inverse_image_multifunction(&f);
        assert_eq!(inv.value(0).to_vec(), vec![0, 1]);
        assert!(inv.value(1).is_empty());
    }

    #[test]
    fn continuity_examples() {
        let f = PointMap::new(s2(), d2(), vec![0, 1]).unwrap();
        let v = f.is_continuous(None);
        assert_eq!(v.witness.as_ref().map(|w| w.point), Some(1));
        assert!(f.is_continuous(Some(0)).holds());
        assert!(!f.is_continuous_by_opens());
        assert!(PointMap::identity(s2()).is_continuous(None).holds());
        let triv = Arc::new(FinSpace::indiscrete(3));
        let g = PointMap::new(s2(), triv, vec![2, 0]).unwrap();
        assert!(g.is_continuous(None).holds());
    }

    #[test]
    fn closed_map_examples() {
        let c = PointMap::new(s2(), d2(), vec![1, 1]).unwrap();
        assert!(c.is_closed_map());
        assert!(PointMap::identity(s2()).is_closed_map());
        let t = Arc::new(FinSpace::indiscrete(2));
        let f = PointMap::new(t, d2(), vec![0, 1]).unwrap();
        assert!(f.is_closed_map());
        // Constant into the Sierpinski space at the open point: {a} is not closed.
        let k = PointMap::new(d2(), s2(), vec![0, 0]).unwrap();
        assert!(!k.is_closed_map());
        assert!(!k.is_closed_map_by_closed_sets());
    }

    #[test]
    fn usc_examples() {
        assert!(f_ab().is_usc(None).holds());
        let g = MultiMap::from_indices(d2(), d2(), &[vec![0, 1], vec![1]]).unwrap();
        assert!(g.is_usc(None).holds());
        let h = MultiMap::from_indices(s2(), d2(), &[vec![0], vec![1]]).unwrap();
        let v = h.is_usc(None);
        assert_eq!(v.witness.unwrap().point, 1);
        assert!(!h.is_usc_definitional(1));
    }

    #[test]
    fn usco_examples() {
        // Usco, but the constant selection 0 is a proper usco submultifunction.
        let f = f_ab();
        assert!(f.is_usco(UscoMode::Usco, DEFAULT_SEARCH_CAP).unwrap());
        assert!(!f.is_usco(UscoMode::Minimal, DEFAULT_SEARCH_CAP).unwrap());
        let sub = f.proper_usco_submultifunction(DEFAULT_SEARCH_CAP).unwrap().unwrap();
        assert_eq!(sub.value(1).to_vec(), vec![0]);

        let c = PointMap::identity(s2()).to_multimap();
        assert!(c.is_usco(UscoMode::Minimal, DEFAULT_SEARCH_CAP).unwrap());

        let full = MultiMap::from_indices(d2(), d2(), &[vec![0, 1], vec![0, 1]]).unwrap();
        assert!(full.is_usco(UscoMode::Usco, DEFAULT_SEARCH_CAP).unwrap());
        assert!(!full.is_usco(UscoMode::Minimal, DEFAULT_SEARCH_CAP).unwrap());
        assert!(matches!(
            full.is_usco(UscoMode::Minimal, 8),
            Err(Error::SearchSpaceTooLarge { size: 9, cap: 8 })
        ));
    }

    #[test]
    fn graph_closure_examples() {
        let f = PointMap::new(s2(), d2(), vec![0, 1]).unwrap().to_multimap();
        let (prod, gr, cl) = f.graph_and_closure();
        assert_eq!(prod.labels_of(&gr), vec!["(a,0)", "(b,1)"]);
        assert_eq!(prod.labels_of(&cl), vec!["(a,0)", "(b,0)", "(b,1)"]);

        let id = PointMap::identity(d2()).to_multimap();
        let (_, gr, cl) = id.graph_and_closure();
        assert_eq!(gr, cl);

        let e = MultiMap::from_indices(s2(), d2(), &[vec![], vec![]]).unwrap();
        let (_, gr, cl) = e.graph_and_closure();
        assert!(gr.is_empty() && cl.is_empty());
    }
}
