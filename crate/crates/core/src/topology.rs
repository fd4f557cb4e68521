//! Finite topological spaces.
//!
//! A finite topology is determined by its minimal open neighborhoods
//! `U_p` (the intersection of all opens containing `p`): a set is open iff
//! it contains `U_p` for each of its points, and `V` is a neighborhood of
//! `p` iff `U_p ⊆ V`. Every quantifier over neighborhoods therefore reduces
//! to a check against `U_p`.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multifunction::PointMap;
use crate::pointset::{PointSet, SpaceId};

/// A finite topological space with opaque point labels.
#[derive(Debug, Clone)]
pub struct FinSpace {
    id: SpaceId,
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    min_open: Vec<PointSet>,
    opens: OnceLock<Vec<PointSet>>,
}

impl PartialEq for FinSpace {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.labels == other.labels && self.min_open == other.min_open
    }
}

impl Eq for FinSpace {}

/// T0, Hausdorff and regularity flags of a space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeparationFlags {
    pub t0: bool,
    pub hausdorff: bool,
    pub regular: bool,
}

fn fingerprint(labels: &[String], min_open: &[PointSet]) -> SpaceId {
    let mut h = DefaultHasher::new();
    labels.hash(&mut h);
    for u in min_open {
        u.to_vec().hash(&mut h);
    }
    SpaceId(h.finish())
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

impl FinSpace {
    /// Validates a space given by labels and an explicit list of opens.
    ///
    /// The list must already be a topology: it has to contain `∅` and the
    /// whole point set and be closed under pairwise union and intersection.
    /// Nothing is completed on the caller's behalf.
    pub fn build<S: AsRef<str>>(name: &str, points: &[S], opens: &[Vec<S>]) -> Result<FinSpace> {
        let labels: Vec<String> = points.iter().map(|s| s.as_ref().to_string()).collect();
        let index = index_labels(&labels)?;
        let n = labels.len();
        let tmp = SpaceId(0);

        let mut family: Vec<PointSet> = Vec::with_capacity(opens.len());
        let mut seen: HashSet<PointSet> = HashSet::with_capacity(opens.len());
        for o in opens {
            let mut s = PointSet::empty_in(tmp, n);
            for l in o {
                let i = *index
                    .get(l.as_ref())
                    .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))?;
                s.insert(i);
            }
            if seen.insert(s.clone()) {
                family.push(s);
            }
        }

        let empty = PointSet::empty_in(tmp, n);
        let full = PointSet::full_in(tmp, n);
        if !seen.contains(&empty) {
            return Err(Error::NotATopology("the empty set is not open".into()));
        }
        if !seen.contains(&full) {
            return Err(Error::NotATopology("the whole space is not open".into()));
        }

        let show = |s: &PointSet| -> String {
            let names: Vec<&str> = s.iter().map(|i| labels[i].as_str()).collect();
            format!("{{{}}}", names.join(","))
        };

        // Minimal opens, checking each pairwise intersection on the way.
        let mut min_open = Vec::with_capacity(n);
        for p in 0..n {
            let mut cur: Option<PointSet> = None;
            for o in family.iter().filter(|o| o.contains(p)) {
                cur = Some(match cur {
                    None => o.clone(),
                    Some(c) => {
                        let next = c.intersection_unchecked(o);
                        if !seen.contains(&next) {
                            return Err(Error::NotATopology(format!(
                                "intersection of {} and {} is not open",
                                show(&c),
                                show(o)
                            )));
                        }
                        next
                    }
                });
            }
            min_open.push(cur.expect("whole space contains every point"));
        }

        // Closure under adding minimal opens forces the family to be exactly
        // the set of all unions of minimal opens.
        for a in &family {
            for u in &min_open {
                if u.is_subset_unchecked(a) {
                    continue;
                }
                let joined = a.union_unchecked(u);
                if !seen.contains(&joined) {
                    return Err(Error::NotATopology(format!(
                        "union of {} and {} is not open",
                        show(a),
                        show(u)
                    )));
                }
            }
        }

        let id = fingerprint(&labels, &min_open);
        let min_open = min_open.into_iter().map(|u| u.rebind(id)).collect();
        let mut family: Vec<PointSet> = family.into_iter().map(|o| o.rebind(id)).collect();
        family.sort();
        Ok(FinSpace {
            id,
            name: name.to_string(),
            labels,
            index,
            min_open,
            opens: OnceLock::from(family),
        })
    }

    /// Builds the Alexandrov topology whose minimal opens are `min_open[p]`
    /// (given as index lists). Fails if the table is not consistent.
    pub fn from_min_open(name: &str, labels: Vec<String>, min_open: Vec<Vec<usize>>) -> Result<FinSpace> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        if min_open.len() != n {
            return Err(Error::NotATopology(format!(
                "{} minimal opens for {} points",
                min_open.len(),
                n
            )));
        }
        let tmp = SpaceId(0);
        let mut sets = Vec::with_capacity(n);
        for (p, members) in min_open.iter().enumerate() {
            let mut s = PointSet::empty_in(tmp, n);
            for &q in members {
                s.try_insert(q)?;
            }
            if !s.contains(p) {
                return Err(Error::NotATopology(format!(
                    "minimal open of `{}` does not contain it",
                    labels[p]
                )));
            }
            sets.push(s);
        }
        for p in 0..n {
            for q in sets[p].iter() {
                if !sets[q].is_subset_unchecked(&sets[p]) {
                    return Err(Error::NotATopology(format!(
                        "`{}` lies in the minimal open of `{}` but its own is larger",
                        labels[q], labels[p]
                    )));
                }
            }
        }
        let id = fingerprint(&labels, &sets);
        Ok(FinSpace {
            id,
            name: name.to_string(),
            labels,
            index,
            min_open: sets.into_iter().map(|s| s.rebind(id)).collect(),
            opens: OnceLock::new(),
        })
    }

    /// The Alexandrov topology of a preorder: `q ∈ U_p` iff `leq(q, p)`.
    /// `leq` must be reflexive and transitive.
    pub fn from_preorder(name: &str, labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<FinSpace> {
        let n = labels.len();
        let table = (0..n)
            .map(|p| (0..n).filter(|&q| leq(q, p)).collect())
            .collect();
        FinSpace::from_min_open(name, labels, table)
    }

    pub fn discrete(n: usize) -> FinSpace {
        Self::discrete_labeled("discrete", numeric_labels(n)).expect("distinct labels")
    }

    pub fn discrete_labeled(name: &str, labels: Vec<String>) -> Result<FinSpace> {
        let n = labels.len();
        FinSpace::from_min_open(name, labels, (0..n).map(|p| vec![p]).collect())
    }

    /// Only `∅` and the whole set are open.
    pub fn indiscrete(n: usize) -> FinSpace {
        FinSpace::from_min_open("indiscrete", numeric_labels(n), vec![(0..n).collect(); n])
            .expect("consistent table")
    }

    /// Points `a`, `b` with opens `∅`, `{a}`, `{a,b}`.
    pub fn sierpinski() -> FinSpace {
        FinSpace::from_min_open(
            "sierpinski",
            vec!["a".into(), "b".into()],
            vec![vec![0], vec![0, 1]],
        )
        .expect("consistent table")
    }

    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> FinSpace {
        self.name = name.to_string();
        self
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

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// `U_p`.
    pub fn min_open(&self, p: usize) -> &PointSet {
        &self.min_open[p]
    }

    pub fn min_opens(&self) -> &[PointSet] {
        &self.min_open
    }

    /// Every open set. Built lazily for derived spaces; exponential in the
    /// number of points for near-discrete topologies.
    pub fn opens(&self) -> &[PointSet] {
        self.opens.get_or_init(|| {
            let mut seen: HashSet<PointSet> = HashSet::new();
            let mut work = vec![self.empty_set()];
            seen.insert(self.empty_set());
            while let Some(a) = work.pop() {
                for u in &self.min_open {
                    if u.is_subset_unchecked(&a) {
                        continue;
                    }
                    let b = a.union_unchecked(u);
                    if seen.insert(b.clone()) {
                        work.push(b);
                    }
                }
            }
            let mut all: Vec<PointSet> = seen.into_iter().collect();
            all.sort();
            all
        })
    }

    /// Complements of the opens.
    pub fn closed_sets(&self) -> Vec<PointSet> {
        self.opens().iter().map(PointSet::complement).collect()
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty_in(self.id, self.len())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full_in(self.id, self.len())
    }

    pub fn singleton(&self, p: usize) -> PointSet {
        PointSet::from_indices_in(self.id, self.len(), [p])
    }

    pub fn set_from_indices<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<PointSet> {
        let mut s = self.empty_set();
        for i in indices {
            s.try_insert(i)?;
        }
        Ok(s)
    }

    pub fn set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<PointSet> {
        let mut s = self.empty_set();
        for l in labels {
            s.insert(self.index_of(l.as_ref())?);
        }
        Ok(s)
    }

    pub fn labels_of(&self, set: &PointSet) -> Vec<String> {
        set.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Fails with `SpaceMismatch` unless `set` belongs to this space.
    pub fn check(&self, set: &PointSet) -> Result<()> {
        if set.space() == self.id && set.universe() == self.len() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn check_point(&self, p: usize) -> Result<()> {
        if p < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: p,
                len: self.len(),
            })
        }
    }

    pub fn is_open(&self, set: &PointSet) -> bool {
        set.iter().all(|p| self.min_open[p].is_subset_unchecked(set))
    }

    pub fn is_closed(&self, set: &PointSet) -> bool {
        self.is_open(&set.complement())
    }

    /// Smallest open superset: the union of `U_a` over `a ∈ set`.
    pub fn open_hull(&self, set: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for a in set.iter() {
            out.union_with(&self.min_open[a]);
        }
        out
    }

    pub fn closure(&self, set: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for p in 0..self.len() {
            if self.min_open[p].intersects_unchecked(set) {
                out.insert(p);
            }
        }
        out
    }

    pub fn interior(&self, set: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for p in set.iter() {
            if self.min_open[p].is_subset_unchecked(set) {
                out.insert(p);
            }
        }
        out
    }

    /// `(cl A, int A, ∂A)`.
    pub fn closure_interior_boundary(&self, set: &PointSet) -> Result<(PointSet, PointSet, PointSet)> {
        self.check(set)?;
        let cl = self.closure(set);
        let int = self.interior(set);
        let bd = cl.difference_unchecked(&int);
        Ok((cl, int, bd))
    }

    /// `cl {p}`, i.e. all `q` with `p ∈ U_q`.
    pub fn point_closure(&self, p: usize) -> PointSet {
        let mut out = self.empty_set();
        for q in 0..self.len() {
            if self.min_open[q].contains(p) {
                out.insert(q);
            }
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.min_open.iter().all(|u| u.count() == 1)
    }

    pub fn separation_flags(&self) -> SeparationFlags {
        let n = self.len();
        let mut t0 = true;
        let mut hausdorff = true;
        for p in 0..n {
            for q in (p + 1)..n {
                if self.min_open[p] == self.min_open[q] {
                    t0 = false;
                }
                if self.min_open[p].intersects_unchecked(&self.min_open[q]) {
                    hausdorff = false;
                }
            }
        }
        // A closed set avoiding p that contains c contains cl{c}, so the
        // point closures are the binding cases.
        let mut regular = true;
        'outer: for c in 0..n {
            let cl = self.point_closure(c);
            let hull = self.open_hull(&cl);
            for p in 0..n {
                if !cl.contains(p) && self.min_open[p].intersects_unchecked(&hull) {
                    regular = false;
                    break 'outer;
                }
            }
        }
        SeparationFlags {
            t0,
            hausdorff,
            regular,
        }
    }

    pub fn is_hausdorff(&self) -> bool {
        self.separation_flags().hausdorff
    }

    /// Subspace topology on `set`, with the original index of each point.
    pub fn subspace(&self, set: &PointSet) -> Result<(FinSpace, Vec<usize>)> {
        self.check(set)?;
        let members = set.to_vec();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let labels = members.iter().map(|&p| self.labels[p].clone()).collect();
        let table = members
            .iter()
            .map(|&p| {
                self.min_open[p]
                    .iter()
                    .filter_map(|q| pos.get(&q).copied())
                    .collect()
            })
            .collect();
        let sub = FinSpace::from_min_open(&format!("{}|sub", self.name), labels, table)?;
        Ok((sub, members))
    }
}

pub(crate) fn numeric_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Product space. Point `(x, y)` has index `x * |T| + y` and minimal open
/// `U_x × U_y`.
pub fn product(s: &FinSpace, t: &FinSpace) -> FinSpace {
    let m = t.len();
    let mut labels = Vec::with_capacity(s.len() * m);
    let mut table = Vec::with_capacity(s.len() * m);
    for x in 0..s.len() {
        for y in 0..m {
            labels.push(format!("({},{})", s.label(x), t.label(y)));
            let mut u = Vec::new();
            for a in s.min_open(x).iter() {
                for b in t.min_open(y).iter() {
                    u.push(a * m + b);
                }
            }
            table.push(u);
        }
    }
    FinSpace::from_min_open(&format!("{}x{}", s.name(), t.name()), labels, table)
        .expect("product of consistent tables is consistent")
}

/// Disjoint union. Points of `s` come first and are tagged `0:`, points of
/// `t` follow and are tagged `1:`.
pub fn disjoint_union(s: &FinSpace, t: &FinSpace) -> FinSpace {
    let off = s.len();
    let mut labels: Vec<String> = s.labels().iter().map(|l| format!("0:{l}")).collect();
    labels.extend(t.labels().iter().map(|l| format!("1:{l}")));
    let mut table: Vec<Vec<usize>> = s.min_opens().iter().map(|u| u.to_vec()).collect();
    table.extend(t.min_opens().iter().map(|u| u.iter().map(|q| q + off).collect()));
    FinSpace::from_min_open(&format!("{}+{}", s.name(), t.name()), labels, table)
        .expect("sum of consistent tables is consistent")
}

/// Quotient by a partition of the points (classes given as index lists).
///
/// A set of classes is open iff its preimage is open; the minimal open of a
/// class is grown until its saturated preimage is open.
pub fn quotient_space(s: &Arc<FinSpace>, classes: &[Vec<usize>]) -> Result<(Arc<FinSpace>, PointMap)> {
    let n = s.len();
    let mut class_of = vec![usize::MAX; n];
    for (c, members) in classes.iter().enumerate() {
        if members.is_empty() {
            return Err(Error::NotAPartition(format!("class {c} is empty")));
        }
        for &p in members {
            if p >= n {
                return Err(Error::NotAPartition(format!("index {p} out of range")));
            }
            if class_of[p] != usize::MAX {
                return Err(Error::NotAPartition(format!(
                    "`{}` appears in two classes",
                    s.label(p)
                )));
            }
            class_of[p] = c;
        }
    }
    if let Some(p) = class_of.iter().position(|&c| c == usize::MAX) {
        return Err(Error::NotAPartition(format!("`{}` is in no class", s.label(p))));
    }

    let k = classes.len();
    let mut table = Vec::with_capacity(k);
    for c in 0..k {
        let mut in_set = vec![false; k];
        in_set[c] = true;
        let mut frontier = vec![c];
        while let Some(d) = frontier.pop() {
            for &p in &classes[d] {
                for q in s.min_open(p).iter() {
                    let e = class_of[q];
                    if !in_set[e] {
                        in_set[e] = true;
                        frontier.push(e);
                    }
                }
            }
        }
        table.push((0..k).filter(|&e| in_set[e]).collect());
    }
    let labels = classes
        .iter()
        .map(|members| {
            if members.len() == 1 {
                s.label(members[0]).to_string()
            } else {
                let names: Vec<&str> = members.iter().map(|&p| s.label(p)).collect();
                format!("[{}]", names.join(","))
            }
        })
        .collect();
    let q = Arc::new(FinSpace::from_min_open(&format!("{}/~", s.name()), labels, table)?);
    let proj = PointMap::new(s.clone(), q.clone(), class_of)?;
    Ok((q, proj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2() -> FinSpace {
        FinSpace::build("S2", &["a", "b"], &[vec![], vec!["a"], vec!["a", "b"]]).unwrap()
    }

    #[test]
    fn sierpinski_minimal_opens() {
        let s = s2();
        assert_eq!(s.min_open(0).to_vec(), vec![0]);
        assert_eq!(s.min_open(1).to_vec(), vec![0, 1]);
        assert_eq!(s, FinSpace::sierpinski().with_name("S2"));
    }

    #[test]
    fn missing_whole_space_rejected() {
        let err = FinSpace::build("bad", &["x", "y"], &[vec![], vec!["x"]]).unwrap_err();
        assert!(matches!(err, Error::NotATopology(_)));
    }

    #[test]
    fn missing_union_reports_pair() {
        let err = FinSpace::build(
            "bad",
            &["x", "y", "z"],
            &[vec![], vec!["x"], vec!["y"], vec!["x", "y", "z"]],
        )
        .unwrap_err();
        match err {
            Error::NotATopology(msg) => assert!(msg.contains("union"), "{msg}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn missing_intersection_reports_pair() {
        let err = FinSpace::build(
            "bad",
            &["x", "y", "z"],
            &[vec![], vec!["x", "y"], vec!["y", "z"], vec!["x", "y", "z"]],
        )
        .unwrap_err();
        match err {
            Error::NotATopology(msg) => assert!(msg.contains("intersection"), "{msg}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn duplicate_label_rejected() {
        let err = FinSpace::build("bad", &["x", "x"], &[vec![], vec!["x"]]).unwrap_err();
        assert_eq!(err, Error::DuplicateLabel("x".into()));
    }

    #[test]
    fn discrete_two_points() {
        let d = FinSpace::build("D2", &["0", "1"], &[vec![], vec!["0"], vec!["1"], vec!["0", "1"]]).unwrap();
        assert!(d.is_discrete());
        assert_eq!(d.opens().len(), 4);
    }

    #[test]
    fn closure_interior_boundary_examples() {
        let s = s2();
        let a = s.set_from_labels(&["a"]).unwrap();
        let (cl, int, bd) = s.closure_interior_boundary(&a).unwrap();
        assert_eq!(s.labels_of(&cl), vec!["a", "b"]);
        assert_eq!(s.labels_of(&int), vec!["a"]);
        assert_eq!(s.labels_of(&bd), vec!["b"]);

        let (cl, int, bd) = s.closure_interior_boundary(&s.empty_set()).unwrap();
        assert!(cl.is_empty() && int.is_empty() && bd.is_empty());

        let d = FinSpace::discrete(2);
        let (cl, int, bd) = d.closure_interior_boundary(&d.singleton(0)).unwrap();
        assert_eq!(cl.to_vec(), vec![0]);
        assert_eq!(int.to_vec(), vec![0]);
        assert!(bd.is_empty());

        assert_eq!(
            s.closure_interior_boundary(&d.singleton(0)).unwrap_err(),
            Error::SpaceMismatch
        );
    }

    #[test]
    fn separation_examples() {
        let f = s2().separation_flags();
        assert_eq!((f.t0, f.hausdorff, f.regular), (true, false, false));
        let f = FinSpace::discrete(2).separation_flags();
        assert_eq!((f.t0, f.hausdorff, f.regular), (true, true, true));
        let f = FinSpace::indiscrete(2).separation_flags();
        assert_eq!((f.t0, f.hausdorff, f.regular), (false, false, true));
    }

    #[test]
    fn quotient_examples() {
        let d2 = Arc::new(FinSpace::discrete(2));
        let (q, proj) = quotient_space(&d2, &[vec![0, 1]]).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(proj.table(), &[0, 0]);

        let s = Arc::new(s2());
        let (q, proj) = quotient_space(&s, &[vec![0], vec![1]]).unwrap();
        assert_eq!(q.min_opens(), s.min_opens().iter().map(|u| u.rebind(q.id())).collect::<Vec<_>>());
        assert_eq!(q.labels(), s.labels());
        assert_eq!(proj.table(), &[0, 1]);

        let d3 = Arc::new(FinSpace::discrete(3));
        let (q, _) = quotient_space(&d3, &[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q.is_discrete());

        assert!(matches!(
            quotient_space(&d3, &[vec![0, 1]]),
            Err(Error::NotAPartition(_))
        ));
        assert!(matches!(
            quotient_space(&d3, &[vec![0, 1], vec![1, 2]]),
            Err(Error::NotAPartition(_))
        ));
    }

    #[test]
    fn product_and_sum_examples() {
        let s = FinSpace::sierpinski();
        let d = FinSpace::discrete(2);
        let p = product(&s, &d);
        assert_eq!(p.len(), 4);
        let b0 = p.index_of("(b,0)").unwrap();
        assert_eq!(
            p.labels_of(p.min_open(b0)),
            vec!["(a,0)".to_string(), "(b,0)".to_string()]
        );

        let u = disjoint_union(&d, &d);
        assert_eq!(u.len(), 4);
        assert!(u.is_discrete());

        let one = FinSpace::discrete(1);
        let p = product(&one, &s);
        let lifted: Vec<Vec<usize>> = p.min_opens().iter().map(|u| u.to_vec()).collect();
        let orig: Vec<Vec<usize>> = s.min_opens().iter().map(|u| u.to_vec()).collect();
        assert_eq!(lifted, orig);
    }

    #[test]
    fn subspace_inherits_topology() {
        let s = FinSpace::sierpinski();
        let (sub, members) = s.subspace(&s.singleton(1)).unwrap();
        assert_eq!(members, vec![1]);
        assert_eq!(sub.len(), 1);
        assert_eq!(sub.min_open(0).to_vec(), vec![0]);
    }

    #[test]
    fn lazily_enumerated_opens_match_explicit() {
        let s = FinSpace::sierpinski();
        let opens: Vec<Vec<usize>> = s.opens().iter().map(|o| o.to_vec()).collect();
        assert_eq!(opens, vec![vec![], vec![0], vec![0, 1]]);
    }
}
