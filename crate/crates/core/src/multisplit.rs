//! Sets of extended values, the star multifunction and pre-multi-split
//! multifunctions.
//!
//! On a finite space every neighborhood of `p` contains `U_p`, so the two
//! defining conditions of a set of extended values `Z` at `p` reduce to
//!
//! * (a) `Z ⊆ cl(f(U_p))`, and
//! * (b) `f(U_p) ⊆ ⋃_{z ∈ Z} U_z`.
//!
//! The definitional versions that quantify over every open set are kept
//! alongside as oracles.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::multifunction::{MultiMap, PointMap};
use crate::pointset::PointSet;
use crate::topology::FinSpace;

/// Largest codomain for which [`ev_family`] enumerates subsets.
pub const MAX_EV_CODOMAIN: usize = 16;

/// How [`is_ev_set`] decides membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvCheck {
    /// Quantify over every open of both spaces.
    Definitional,
    /// Minimal-open characterization.
    #[default]
    Fast,
    /// Fault injection: the fast check without condition (a).
    #[doc(hidden)]
    WeakenedDropClosure,
    /// Fault injection: the fast check without condition (b).
    #[doc(hidden)]
    WeakenedDropCover,
}

/// All sets of extended values of a map at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvFamily {
    pub at: usize,
    /// `f(at)`.
    pub value: usize,
    /// Sorted by size, then lexicographically.
    pub sets: Vec<PointSet>,
    /// Inclusion-minimal members, in the same order.
    pub minimal: Vec<PointSet>,
}

impl EvFamily {
    /// `{f(p)}` is a member, i.e. `f` is continuous at the point.
    pub fn continuous_at(&self) -> bool {
        self.sets
            .iter()
            .any(|z| z.count() == 1 && z.contains(self.value))
    }

    /// Some member of at most two points contains `f(p)`.
    pub fn split_at(&self) -> bool {
        self.sets
            .iter()
            .any(|z| z.count() <= 2 && z.contains(self.value))
    }

    pub fn contains(&self, z: &PointSet) -> bool {
        self.sets.binary_search(z).is_ok()
    }
}

fn check_candidate(f: &PointMap, p: usize, z: &PointSet) -> Result<()> {
    f.domain().check_point(p)?;
    f.codomain().check(z)?;
    if z.is_empty() {
        return Err(Error::EmptyCandidate);
    }
    Ok(())
}

/// `f(U_p)`.
pub fn local_image(f: &PointMap, p: usize) -> PointSet {
    f.image_unchecked(f.domain().min_open(p))
}

/// Condition (a) via the minimal open: `Z ⊆ cl(f(U_p))`.
pub fn condition_a(f: &PointMap, p: usize, z: &PointSet) -> bool {
    z.is_subset_unchecked(&xp_set(f, p))
}

/// Condition (b) via the minimal open: `f(U_p) ⊆ ⋃_{z ∈ Z} U_z`.
pub fn condition_b(f: &PointMap, p: usize, z: &PointSet) -> bool {
    local_image(f, p).is_subset_unchecked(&f.codomain().open_hull(z))
}

/// Condition (a) as stated: for every open `U ∋ p`, every `y ∈ Z` and every
/// open `V ∋ y`, `f(U) ∩ V ≠ ∅`.
pub fn condition_a_definitional(f: &PointMap, p: usize, z: &PointSet) -> bool {
    let x = f.domain();
    let y = f.codomain();
    x.opens().iter().filter(|u| u.contains(p)).all(|u| {
        let img = f.image_unchecked(u);
        z.iter().all(|zy| {
            y.opens()
                .iter()
                .filter(|v| v.contains(zy))
                .all(|v| img.intersects_unchecked(v))
        })
    })
}

/// Condition (b) as stated: every open `V ⊇ Z` admits an open `U ∋ p` with
/// `f(U) ⊆ V`.
pub fn condition_b_definitional(f: &PointMap, p: usize, z: &PointSet) -> bool {
    let x = f.domain();
    let y = f.codomain();
    y.opens().iter().filter(|v| z.is_subset_unchecked(v)).all(|v| {
        x.opens()
            .iter()
            .any(|u| u.contains(p) && f.image_unchecked(u).is_subset_unchecked(v))
    })
}

/// Whether `Z` is a set of extended values of `f` at `p`.
pub fn is_ev_set(f: &PointMap, p: usize, z: &PointSet, strategy: EvCheck) -> Result<bool> {
    check_candidate(f, p, z)?;
    Ok(ev_unchecked(f, p, z, strategy))
}

fn ev_unchecked(f: &PointMap, p: usize, z: &PointSet, strategy: EvCheck) -> bool {
    match strategy {
        EvCheck::Definitional => {
            condition_a_definitional(f, p, z) && condition_b_definitional(f, p, z)
        }
        EvCheck::Fast => condition_a(f, p, z) && condition_b(f, p, z),
        EvCheck::WeakenedDropClosure => condition_b(f, p, z),
        EvCheck::WeakenedDropCover => condition_a(f, p, z),
    }
}

/// Every set of extended values of `f` at `p`, by exhaustive subset scan.
pub fn ev_family(f: &PointMap, p: usize) -> Result<EvFamily> {
    ev_family_with(f, p, EvCheck::Fast)
}

pub fn ev_family_with(f: &PointMap, p: usize, strategy: EvCheck) -> Result<EvFamily> {
    f.domain().check_point(p)?;
    let y = f.codomain();
    let m = y.len();
    if m > MAX_EV_CODOMAIN {
        return Err(Error::TooLarge(format!(
            "codomain has {m} points; subset enumeration is capped at {MAX_EV_CODOMAIN}"
        )));
    }
    let mut sets = Vec::new();
    for mask in 1u32..(1u32 << m) {
        let z = y
            .set_from_indices((0..m).filter(|i| mask & (1 << i) != 0))
            .expect("indices in range");
        if ev_unchecked(f, p, &z, strategy) {
            sets.push(z);
        }
    }
    sets.sort();
    let minimal = sets
        .iter()
        .filter(|z| !sets.iter().any(|w| w != *z && w.is_subset_unchecked(z)))
        .cloned()
        .collect();
    Ok(EvFamily {
        at: p,
        value: f.apply(p),
        sets,
        minimal,
    })
}

/// `X_p = cl(f(U_p))`, the intersection of `cl(f(U))` over all
/// neighborhoods `U` of `p` (attained at `U_p` by monotonicity).
pub fn xp_set(f: &PointMap, p: usize) -> PointSet {
    f.codomain().closure(&local_image(f, p))
}

/// The star multifunction `p ↦ Z_p` of a map into a Hausdorff space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarMap {
    map: MultiMap,
}

impl StarMap {
    pub fn value(&self, p: usize) -> &PointSet {
        self.map.value(p)
    }

    pub fn as_multimap(&self) -> &MultiMap {
        &self.map
    }

    pub fn into_multimap(self) -> MultiMap {
        self.map
    }
}

pub fn star(f: &PointMap) -> Result<StarMap> {
    star_with(f, EvCheck::Fast)
}

/// Builds `f*` from the extended-value family at each point, cross-checked
/// against the explicit formula `X_p`.
pub fn star_with(f: &PointMap, strategy: EvCheck) -> Result<StarMap> {
    if !f.codomain().is_hausdorff() {
        return Err(Error::NotHausdorff);
    }
    let mut table = Vec::with_capacity(f.domain().len());
    for p in 0..f.domain().len() {
        let xp = xp_set(f, p);
        if f.codomain().len() > MAX_EV_CODOMAIN {
            // Too many subsets to scan; rely on uniqueness and check X_p alone.
            if !ev_unchecked(f, p, &xp, strategy) {
                return Err(Error::InternalMismatch(format!(
                    "X_p at `{}` is not a set of extended values",
                    f.domain().label(p)
                )));
            }
            table.push(xp);
            continue;
        }
        let fam = ev_family_with(f, p, strategy)?;
        match fam.sets.as_slice() {
            [only] if *only == xp => table.push(xp),
            sets => {
                return Err(Error::InternalMismatch(format!(
                    "at `{}`: {} sets of extended values, expected exactly {:?}",
                    f.domain().label(p),
                    sets.len(),
                    f.codomain().labels_of(&xp)
                )))
            }
        }
    }
    let map = MultiMap::new(f.domain().clone(), f.codomain().clone(), table)?;
    Ok(StarMap { map })
}

/// Certificates of multi-split continuity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSplitReport {
    pub holds: bool,
    /// `(p, Z)` with `Z = f(U_p)`, one entry per checked point.
    pub certificates: Vec<(usize, PointSet)>,
}

/// Multi-split continuity at `at` or everywhere. On a finite codomain
/// `Z = f(U_p)` always certifies; it is re-checked rather than assumed.
pub fn is_multi_split(f: &PointMap, at: Option<usize>) -> Result<MultiSplitReport> {
    let points: Vec<usize> = match at {
        Some(p) => {
            f.domain().check_point(p)?;
            vec![p]
        }
        None => (0..f.domain().len()).collect(),
    };
    let mut holds = true;
    let mut certificates = Vec::with_capacity(points.len());
    for p in points {
        let z = local_image(f, p);
        holds &= ev_unchecked(f, p, &z, EvCheck::Fast);
        certificates.push((p, z));
    }
    Ok(MultiSplitReport {
        holds,
        certificates,
    })
}

/// The composite candidate `Z̃ = ⋃_{y ∈ Z^f} Z^g_y` for `g ∘ f` at `p`.
///
/// `zf` must be a set of extended values of `f` at `p` and `choose(y)` one
/// of `g` at `y` for each `y ∈ zf`.
pub fn compose_ev(
    f: &PointMap,
    g: &PointMap,
    p: usize,
    zf: &PointSet,
    choose: impl Fn(usize) -> PointSet,
) -> Result<PointSet> {
    if **f.codomain() != **g.domain() {
        return Err(Error::SpaceMismatch);
    }
    if !is_ev_set(f, p, zf, EvCheck::Fast)? {
        return Err(Error::InvalidChoice(format!(
            "{:?} is not a set of extended values of f at `{}`",
            f.codomain().labels_of(zf),
            f.domain().label(p)
        )));
    }
    let mut out = g.codomain().empty_set();
    for y in zf.iter() {
        let zy = choose(y);
        if !is_ev_set(g, y, &zy, EvCheck::Fast)? {
            return Err(Error::InvalidChoice(format!(
                "{:?} is not a set of extended values of g at `{}`",
                g.codomain().labels_of(&zy),
                g.domain().label(y)
            )));
        }
        out.union_with(&zy);
    }
    Ok(out)
}

/// Shrinks a set satisfying condition (b) at `p` to a set of extended
/// values: `Z ∩ X_p`. Any `z ∈ Z` whose `U_z` catches a point of `f(U_p)`
/// lies in `X_p`, so condition (b) survives the cut.
pub fn reduce_to_ev(f: &PointMap, p: usize, z: &PointSet) -> Result<PointSet> {
    f.domain().check_point(p)?;
    f.codomain().check(z)?;
    if !condition_b(f, p, z) {
        return Err(Error::HypothesisViolated(format!(
            "condition (b) fails at `{}`",
            f.domain().label(p)
        )));
    }
    Ok(z.intersection_unchecked(&xp_set(f, p)))
}

/// Outcome of [`is_pre_multi_split`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreMultiSplitReport {
    pub holds: bool,
    pub selections: u128,
    /// `Z = F(p)` satisfies condition (b) for every selection at every
    /// checked point.
    pub values_certify: bool,
    /// First `(selection index, point)` where `F(p)` does not certify.
    pub first_uncertified: Option<(u128, usize)>,
}

pub fn is_pre_multi_split(big_f: &MultiMap, at: Option<usize>, cap: u128) -> Result<PreMultiSplitReport> {
    if let Some(p) = at {
        big_f.domain().check_point(p)?;
    }
    let sel = big_f.selections(cap)?;
    let selections = sel.total();
    let points: Vec<usize> = match at {
        Some(p) => vec![p],
        None => (0..big_f.domain().len()).collect(),
    };
    let mut holds = true;
    let mut first_uncertified = None;
    for (k, s) in sel.enumerate() {
        for &p in &points {
            holds &= ev_unchecked(&s, p, &local_image(&s, p), EvCheck::Fast);
            if first_uncertified.is_none() && !condition_b(&s, p, big_f.value(p)) {
                first_uncertified = Some((k as u128, p));
            }
        }
    }
    Ok(PreMultiSplitReport {
        holds,
        selections,
        values_certify: first_uncertified.is_none(),
        first_uncertified,
    })
}

/// `Z̃_p = cl(F(U_p))`: the points every neighborhood of which meets
/// `F(W)` for every neighborhood `W` of `p`.
pub fn tilde_z_set(big_f: &MultiMap, p: usize) -> Result<PointSet> {
    big_f.domain().check_point(p)?;
    if let Some(x) = big_f.table().iter().position(PointSet::is_empty) {
        return Err(Error::EmptyValue(big_f.domain().label(x).to_string()));
    }
    let img = big_f.image_unchecked(big_f.domain().min_open(p));
    Ok(big_f.codomain().closure(&img))
}

/// Both sides of "continuous ⇔ multi-split continuous with closed graph",
/// computed independently.
pub fn continuity_equivalence(f: &PointMap) -> Result<(bool, bool)> {
    if !f.codomain().is_hausdorff() {
        return Err(Error::NotHausdorff);
    }
    let continuous = f.is_continuous(None).holds();
    let msc = is_multi_split(f, None)?.holds;
    let (_, gr, cl) = f.to_multimap().graph_and_closure();
    Ok((continuous, msc && gr == cl))
}

/// Fiber sizes of the first projection restricted to `cl(gr f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionReport {
    pub fibers: Vec<usize>,
    pub max_fiber: usize,
    pub within_bound: bool,
}

pub fn graph_projection_check(f: &PointMap, bound: usize) -> Result<ProjectionReport> {
    if !f.codomain().is_hausdorff() {
        return Err(Error::NotHausdorff);
    }
    let m = f.codomain().len();
    let (_, _, cl) = f.to_multimap().graph_and_closure();
    let mut fibers = vec![0usize; f.domain().len()];
    for i in cl.iter() {
        fibers[i / m] += 1;
    }
    let max_fiber = fibers.iter().copied().max().unwrap_or(0);
    Ok(ProjectionReport {
        within_bound: max_fiber <= bound,
        fibers,
        max_fiber,
    })
}

/// Structured record of an [`EvFamily`], with labels in place of indices.
pub fn ev_record(space: &FinSpace, codomain: &FinSpace, fam: &EvFamily) -> Value {
    let show = |sets: &[PointSet]| -> Vec<Vec<String>> {
        sets.iter().map(|z| codomain.labels_of(z)).collect()
    };
    json!({
        "point": space.label(fam.at),
        "sets": show(&fam.sets),
        "minimal": show(&fam.minimal),
        "continuous_at": fam.continuous_at(),
        "split_at": fam.split_at(),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::multifunction::DEFAULT_SEARCH_CAP;

    fn s2() -> Arc<FinSpace> {
        Arc::new(FinSpace::sierpinski())
    }

    fn d2() -> Arc<FinSpace> {
        Arc::new(FinSpace::discrete(2))
    }

    /// f(a)=0, f(b)=1 from S2 to D2.
    fn f_s2_d2() -> PointMap {
        PointMap::new(s2(), d2(), vec![0, 1]).unwrap()
    }

    /// g(0)=a, g(1)=b from D2 to S2.
    fn g_d2_s2() -> PointMap {
        PointMap::new(d2(), s2(), vec![0, 1]).unwrap()
    }

    fn set(s: &FinSpace, v: &[usize]) -> PointSet {
        s.set_from_indices(v.iter().copied()).unwrap()
    }

    #[test]
    fn is_ev_set_examples() {
        let f = f_s2_d2();
        let y = f.codomain().clone();
        for strat in [EvCheck::Definitional, EvCheck::Fast] {
            assert!(is_ev_set(&f, 1, &set(&y, &[0, 1]), strat).unwrap());
            assert!(!is_ev_set(&f, 1, &set(&y, &[1]), strat).unwrap());
        }
        assert!(!condition_b(&f, 1, &set(&y, &[1])));

        let g = g_d2_s2();
        let s = g.codomain().clone();
        for strat in [EvCheck::Definitional, EvCheck::Fast] {
            for z in [&[0][..], &[1], &[0, 1]] {
                assert!(is_ev_set(&g, 0, &set(&s, z), strat).unwrap());
            }
        }
        assert_eq!(
            is_ev_set(&g, 0, &s.empty_set(), EvCheck::Fast),
            Err(Error::EmptyCandidate)
        );
        assert_eq!(
            is_ev_set(&g, 0, &d2().singleton(0), EvCheck::Fast),
            Err(Error::SpaceMismatch)
        );
    }

    #[test]
    fn ev_family_examples() {
        let fam = ev_family(&f_s2_d2(), 0).unwrap();
        assert_eq!(fam.sets.iter().map(PointSet::to_vec).collect::<Vec<_>>(), vec![vec![0]]);
        assert_eq!(fam.minimal, fam.sets);

        let fam = ev_family(&g_d2_s2(), 0).unwrap();
        let sets: Vec<Vec<usize>> = fam.sets.iter().map(PointSet::to_vec).collect();
        assert_eq!(sets, vec![vec![0], vec![1], vec![0, 1]]);
        let minimal: Vec<Vec<usize>> = fam.minimal.iter().map(PointSet::to_vec).collect();
        assert_eq!(minimal, vec![vec![0], vec![1]]);

        let id = PointMap::identity(d2());
        let fam = ev_family(&id, 0).unwrap();
        assert_eq!(fam.sets.len(), 1);
        assert!(fam.continuous_at());
    }

    #[test]
    fn xp_examples() {
        assert_eq!(xp_set(&f_s2_d2(), 1).to_vec(), vec![0, 1]);
        assert_eq!(xp_set(&g_d2_s2(), 0).to_vec(), vec![0, 1]);
        let id = PointMap::identity(d2());
        assert_eq!(xp_set(&id, 1).to_vec(), vec![1]);
    }

    #[test]
    fn star_examples() {
        let st = star(&f_s2_d2()).unwrap();
        assert_eq!(st.value(0).to_vec(), vec![0]);
        assert_eq!(st.value(1).to_vec(), vec![0, 1]);

        let c = PointMap::new(s2(), d2(), vec![1, 1]).unwrap();
        assert_eq!(star(&c).unwrap().into_multimap(), c.to_multimap());

        let h = PointMap::new(d2(), d2(), vec![1, 0]).unwrap();
        assert_eq!(star(&h).unwrap().into_multimap(), h.to_multimap());

        assert_eq!(star(&g_d2_s2()).unwrap_err(), Error::NotHausdorff);
    }

    #[test]
    fn weakened_checks_break_star() {
        let f = f_s2_d2();
        assert!(matches!(
            star_with(&f, EvCheck::WeakenedDropClosure),
            Err(Error::InternalMismatch(_))
        ));
        assert!(matches!(
            star_with(&f, EvCheck::WeakenedDropCover),
            Err(Error::InternalMismatch(_))
        ));
    }

    #[test]
    fn multi_split_examples() {
        let f = f_s2_d2();
        let r = is_multi_split(&f, Some(1)).unwrap();
        assert!(r.holds);
        assert_eq!(r.certificates[0].1.to_vec(), vec![0, 1]);
        let id = PointMap::identity(d2());
        let r = is_multi_split(&id, None).unwrap();
        assert!(r.certificates.iter().all(|(p, z)| z.to_vec() == vec![*p]));
    }

    #[test]
    fn compose_examples() {
        let id = PointMap::identity(d2());
        let z = compose_ev(&id, &id, 0, &d2().singleton(0), |y| d2().singleton(y)).unwrap();
        assert_eq!(z.to_vec(), vec![0]);

        let f = f_s2_d2();
        let zf = d2().full_set();
        let z = compose_ev(&f, &id, 1, &zf, |y| d2().singleton(y)).unwrap();
        assert_eq!(z.to_vec(), vec![0, 1]);
        let gf = f.then(&id).unwrap();
        assert!(is_ev_set(&gf, 1, &z, EvCheck::Definitional).unwrap());

        let g = g_d2_s2();
        let z = compose_ev(&f, &g, 1, &zf, |y| s2().singleton(y)).unwrap();
        assert_eq!(z.to_vec(), vec![0, 1]);
        let gf = f.then(&g).unwrap();
        assert!(condition_b_definitional(&gf, 1, &z));
        let r = reduce_to_ev(&gf, 1, &z).unwrap();
        assert!(is_ev_set(&gf, 1, &r, EvCheck::Definitional).unwrap());

        let bad = compose_ev(&f, &id, 1, &zf, |_| d2().singleton(1));
        assert!(matches!(bad, Err(Error::InvalidChoice(_))));
    }

    #[test]
    fn pre_multi_split_examples() {
        let big_f = MultiMap::from_indices(s2(), d2(), &[vec![0], vec![0, 1]]).unwrap();
        let r = is_pre_multi_split(&big_f, None, DEFAULT_SEARCH_CAP).unwrap();
        assert!(r.holds && r.values_certify);
        assert_eq!(r.selections, 2);

        let id = PointMap::identity(s2()).to_multimap();
        assert!(is_pre_multi_split(&id, None, DEFAULT_SEARCH_CAP).unwrap().values_certify);

        let e = MultiMap::from_indices(s2(), d2(), &[vec![], vec![0]]).unwrap();
        assert!(matches!(is_pre_multi_split(&e, None, 10), Err(Error::EmptyValue(_))));
    }

    #[test]
    fn tilde_z_examples() {
        let big_f = MultiMap::from_indices(s2(), d2(), &[vec![0], vec![0, 1]]).unwrap();
        assert_eq!(tilde_z_set(&big_f, 1).unwrap().to_vec(), vec![0, 1]);
        let f = f_s2_d2();
        for p in 0..2 {
            assert_eq!(tilde_z_set(&f.to_multimap(), p).unwrap(), xp_set(&f, p));
        }
        let full = MultiMap::from_indices(s2(), d2(), &[vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(tilde_z_set(&full, 0).unwrap().to_vec(), vec![0, 1]);
    }

    #[test]
    fn continuity_equivalence_examples() {
        assert_eq!(continuity_equivalence(&PointMap::identity(d2())).unwrap(), (true, true));
        assert_eq!(continuity_equivalence(&f_s2_d2()).unwrap(), (false, false));
        let c = PointMap::new(s2(), d2(), vec![0, 0]).unwrap();
        assert_eq!(continuity_equivalence(&c).unwrap(), (true, true));
    }

    #[test]
    fn projection_examples() {
        let r = graph_projection_check(&f_s2_d2(), 2).unwrap();
        assert_eq!(r.fibers, vec![1, 2]);
        assert!(r.within_bound);
        let c = PointMap::new(s2(), d2(), vec![0, 0]).unwrap();
        assert_eq!(graph_projection_check(&c, 1).unwrap().fibers, vec![1, 1]);
    }

    #[test]
    fn record_field_order() {
        let f = f_s2_d2();
        let fam = ev_family(&f, 1).unwrap();
        let rec = ev_record(f.domain(), f.codomain(), &fam);
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"point":"b","sets":[["0","1"]],"minimal":[["0","1"]],"continuous_at":false,"split_at":true}"#
        );
    }
}
