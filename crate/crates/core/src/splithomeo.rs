//! Split homeomorphisms and their cut-and-reglue data.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multifunction::PointMap;
use crate::multisplit::{is_ev_set, is_multi_split, local_image, star, EvCheck};
use crate::pointset::PointSet;
use crate::topology::{disjoint_union, quotient_space, FinSpace};

/// A bijection whose inverse is multi-split continuous too.
///
/// Every map between finite spaces is multi-split continuous, so on finite
/// spaces this is bijectivity; both directions are still checked.
pub fn is_split_homeo(f: &PointMap) -> bool {
    if !f.is_bijective() {
        return false;
    }
    let inv = f.inverse().expect("bijective");
    let both = is_multi_split(f, None).map(|r| r.holds).unwrap_or(false)
        && is_multi_split(&inv, None).map(|r| r.holds).unwrap_or(false);
    debug_assert!(both, "finite maps are always multi-split continuous");
    both
}

/// A split homeomorphism `s → t`, if the spaces are split homeomorphic.
///
/// Decided by cardinality; the returned index-order bijection is then
/// verified against the definitional extended-value check in both
/// directions.
pub fn split_homeomorphic(s: &Arc<FinSpace>, t: &Arc<FinSpace>) -> Result<Option<PointMap>> {
    if s.len() != t.len() {
        return Ok(None);
    }
    let f = PointMap::new(s.clone(), t.clone(), (0..s.len()).collect())?;
    let inv = f.inverse()?;
    for g in [&f, &inv] {
        for p in 0..g.domain().len() {
            if !is_ev_set(g, p, &local_image(g, p), EvCheck::Definitional)? {
                return Err(Error::InternalMismatch(format!(
                    "f(U_p) fails the definitional check at `{}`",
                    g.domain().label(p)
                )));
            }
        }
    }
    Ok(Some(f))
}

fn require_discrete(f: &PointMap) -> Result<()> {
    if !f.domain().is_discrete() || !f.codomain().is_discrete() {
        return Err(Error::HypothesisViolated(
            "both spaces must be Hausdorff (discrete)".into(),
        ));
    }
    if !is_split_homeo(f) {
        return Err(Error::HypothesisViolated("map is not a split homeomorphism".into()));
    }
    Ok(())
}

/// `(f⁻¹)*(y0)`, computed as a star value and as a column of `gr(f*)`.
pub fn inverse_star(f: &PointMap, y0: usize) -> Result<PointSet> {
    require_discrete(f)?;
    f.codomain().check_point(y0)?;
    let direct = star(&f.inverse()?)?.value(y0).clone();
    let fs = star(f)?;
    let mut transpose = f.domain().empty_set();
    for x in 0..f.domain().len() {
        if fs.value(x).contains(y0) {
            transpose.insert(x);
        }
    }
    if direct != transpose {
        return Err(Error::InternalMismatch(format!(
            "star of the inverse gives {:?}, transpose of the star graph gives {:?}",
            f.domain().labels_of(&direct),
            f.domain().labels_of(&transpose)
        )));
    }
    Ok(direct)
}

/// `Z` with surjections `pX: Z → X`, `pY: Z → Y` and a right inverse
/// `pXinv: X → Z` of `pX`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReglueDatum {
    z: Arc<FinSpace>,
    px: PointMap,
    py: PointMap,
    pxinv: PointMap,
}

/// One flag per clause of the cut-and-reglue definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReglueReport {
    pub px_continuous: bool,
    pub py_continuous: bool,
    pub px_surjective: bool,
    pub py_surjective: bool,
    /// Always true for a finite `Z`; reported for completeness.
    pub fibers_finite: bool,
    pub px_quotient: bool,
    pub py_quotient: bool,
    pub right_inverse: bool,
    pub bijective: bool,
}

impl ReglueReport {
    pub fn passes(&self) -> bool {
        self.px_continuous
            && self.py_continuous
            && self.px_surjective
            && self.py_surjective
            && self.fibers_finite
            && self.px_quotient
            && self.py_quotient
            && self.right_inverse
            && self.bijective
    }

    fn failures(&self) -> Vec<&'static str> {
        let flags = [
            ("px_continuous", self.px_continuous),
            ("py_continuous", self.py_continuous),
            ("px_surjective", self.px_surjective),
            ("py_surjective", self.py_surjective),
            ("fibers_finite", self.fibers_finite),
            ("px_quotient", self.px_quotient),
            ("py_quotient", self.py_quotient),
            ("right_inverse", self.right_inverse),
            ("bijective", self.bijective),
        ];
        flags.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }
}

impl ReglueDatum {
    pub fn new(z: Arc<FinSpace>, px: PointMap, py: PointMap, pxinv: PointMap) -> Result<ReglueDatum> {
        if **px.domain() != *z || **py.domain() != *z || **pxinv.codomain() != *z {
            return Err(Error::SpaceMismatch);
        }
        if **pxinv.domain() != **px.codomain() {
            return Err(Error::SpaceMismatch);
        }
        Ok(ReglueDatum { z, px, py, pxinv })
    }

    pub fn z(&self) -> &Arc<FinSpace> {
        &self.z
    }

    pub fn px(&self) -> &PointMap {
        &self.px
    }

    pub fn py(&self) -> &PointMap {
        &self.py
    }

    pub fn pxinv(&self) -> &PointMap {
        &self.pxinv
    }

    pub fn x(&self) -> &Arc<FinSpace> {
        self.px.codomain()
    }

    pub fn y(&self) -> &Arc<FinSpace> {
        self.py.codomain()
    }

    /// `f = pY ∘ pXinv`.
    pub fn derived(&self) -> PointMap {
        self.pxinv.then(&self.py).expect("spaces checked on construction")
    }
}

/// Whether a surjection carries the quotient topology: the topology induced
/// on the codomain by the fibers has the same minimal opens.
fn is_quotient_map(p: &PointMap) -> bool {
    if !p.is_surjective() {
        return false;
    }
    let classes: Vec<Vec<usize>> = p.fibers().iter().map(PointSet::to_vec).collect();
    let (q, _) = quotient_space(p.domain(), &classes).expect("fibers of a surjection partition");
    (0..q.len()).all(|c| q.min_open(c).to_vec() == p.codomain().min_open(c).to_vec())
}

pub fn validate_reglue(d: &ReglueDatum) -> ReglueReport {
    let right_inverse = d
        .pxinv
        .then(&d.px)
        .map(|id| id.table().iter().enumerate().all(|(i, &j)| i == j))
        .unwrap_or(false);
    ReglueReport {
        px_continuous: d.px.is_continuous(None).holds(),
        py_continuous: d.py.is_continuous(None).holds(),
        px_surjective: d.px.is_surjective(),
        py_surjective: d.py.is_surjective(),
        fibers_finite: true,
        px_quotient: is_quotient_map(&d.px),
        py_quotient: is_quotient_map(&d.py),
        right_inverse,
        bijective: d.derived().is_bijective(),
    }
}

fn require_valid(d: &ReglueDatum) -> Result<()> {
    let r = validate_reglue(d);
    if r.passes() {
        Ok(())
    } else {
        Err(Error::ValidationFailed(format!(
            "failed clauses: {}",
            r.failures().join(", ")
        )))
    }
}

/// `Z = gr(f*)` with the coordinate projections and `x ↦ (x, f(x))`.
pub fn reglue_from_splithomeo(f: &PointMap) -> Result<ReglueDatum> {
    require_discrete(f)?;
    let (z, px, py) = star(f)?.as_multimap().graph_space();
    let table = (0..f.domain().len())
        .map(|x| z.index_of(&format!("({},{})", f.domain().label(x), f.codomain().label(f.apply(x)))))
        .collect::<Result<Vec<_>>>()?;
    let pxinv = PointMap::new(f.domain().clone(), z.clone(), table)?;
    ReglueDatum::new(z, px, py, pxinv)
}

/// `f = pY ∘ pXinv`, checked to be a split homeomorphism with right inverse
/// `pYinv = pXinv ∘ f⁻¹` of `pY`.
pub fn splithomeo_from_reglue(d: &ReglueDatum) -> Result<PointMap> {
    require_valid(d)?;
    let f = d.derived();
    if !is_split_homeo(&f) {
        return Err(Error::ValidationFailed("derived map is not a split homeomorphism".into()));
    }
    let pyinv = f.inverse()?.then(&d.pxinv)?;
    let back = pyinv.then(&d.py)?;
    if back.table().iter().enumerate().any(|(i, &j)| i != j) {
        return Err(Error::InternalMismatch("pY ∘ pYinv is not the identity".into()));
    }
    Ok(f)
}

/// The same cut read backwards: `(Z, pY, pX, pXinv ∘ f⁻¹)` witnesses
/// `Y ⇌ X` with derived map `f⁻¹`.
pub fn reglue_reverse(d: &ReglueDatum) -> Result<ReglueDatum> {
    require_valid(d)?;
    let pyinv = d.derived().inverse()?.then(&d.pxinv)?;
    ReglueDatum::new(d.z.clone(), d.py.clone(), d.px.clone(), pyinv)
}

/// Chains `d1: X ⇌ Y` (map `f`) and `d2: Y ⇌ W` (map `g`) into a datum
/// `X ⇌ W` on `Z ⊔ Z'` whose derived map is `g ∘ f`.
pub fn reglue_transitive(d1: &ReglueDatum, d2: &ReglueDatum) -> Result<ReglueDatum> {
    if **d1.y() != **d2.x() {
        return Err(Error::SpaceMismatch);
    }
    require_valid(d1)?;
    require_valid(d2)?;
    let f = d1.derived();
    // Right inverse of pY: Y → Z.
    let pyinv = f.inverse()?.then(&d1.pxinv)?;
    let (px, py, pxinv) = (&d1.px, &d1.py, &d1.pxinv);
    let (qy, qw, qyinv) = (&d2.px, &d2.py, &d2.pxinv);

    let sum = Arc::new(disjoint_union(&d1.z, &d2.z));
    let off = d1.z.len();
    let mut to_x = Vec::with_capacity(sum.len());
    let mut to_w = Vec::with_capacity(sum.len());
    for z in 0..off {
        to_x.push(px.apply(z));
        to_w.push(qw.apply(qyinv.apply(py.apply(z))));
    }
    for z in 0..d2.z.len() {
        to_x.push(px.apply(pyinv.apply(qy.apply(z))));
        to_w.push(qw.apply(z));
    }
    let pi_x = PointMap::new(sum.clone(), d1.x().clone(), to_x)?;
    let pi_w = PointMap::new(sum.clone(), d2.y().clone(), to_w)?;
    let pi_xinv = PointMap::new(d1.x().clone(), sum.clone(), pxinv.table().to_vec())?;
    let out = ReglueDatum::new(sum, pi_x, pi_w, pi_xinv)?;
    require_valid(&out)?;
    Ok(out)
}

/// `Z = X = Y` with every map the identity.
pub fn identity_datum(x: Arc<FinSpace>) -> ReglueDatum {
    let id = PointMap::identity(x.clone());
    ReglueDatum {
        z: x,
        px: id.clone(),
        py: id.clone(),
        pxinv: id,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(n: usize) -> Arc<FinSpace> {
        Arc::new(FinSpace::discrete(n))
    }

    /// Four points cut into two arcs and reglued the other way round.
    fn arc_datum() -> ReglueDatum {
        let z = disc(4);
        let x = disc(2);
        let y = disc(2);
        let px = PointMap::new(z.clone(), x.clone(), vec![0, 0, 1, 1]).unwrap();
        let py = PointMap::new(z.clone(), y, vec![0, 1, 1, 0]).unwrap();
        let pxinv = PointMap::new(x, z.clone(), vec![0, 2]).unwrap();
        ReglueDatum::new(z, px, py, pxinv).unwrap()
    }

    #[test]
    fn split_homeo_examples() {
        let tops = [
            FinSpace::indiscrete(3),
            FinSpace::discrete(3),
            FinSpace::from_preorder("chain", vec!["0".into(), "1".into(), "2".into()], |q, p| q <= p).unwrap(),
        ];
        for a in &tops {
            for b in &tops {
                let f = PointMap::new(Arc::new(a.clone()), Arc::new(b.clone()), vec![0, 1, 2]).unwrap();
                assert!(is_split_homeo(&f));
            }
        }
        let c = PointMap::new(disc(2), disc(2), vec![0, 0]).unwrap();
        assert!(!is_split_homeo(&c));
        assert!(is_split_homeo(&PointMap::identity(Arc::new(FinSpace::sierpinski()))));

        let s = Arc::new(FinSpace::sierpinski());
        assert!(split_homeomorphic(&s, &disc(2)).unwrap().is_some());
        assert!(split_homeomorphic(&s, &disc(3)).unwrap().is_none());
    }

    #[test]
    fn inverse_star_examples() {
        assert_eq!(inverse_star(&PointMap::identity(disc(2)), 0).unwrap().to_vec(), vec![0]);
        let swap = PointMap::new(disc(2), disc(2), vec![1, 0]).unwrap();
        assert_eq!(inverse_star(&swap, 0).unwrap().to_vec(), vec![1]);
        let p = PointMap::new(disc(3), disc(3), vec![2, 0, 1]).unwrap();
        for y in 0..3 {
            let x = p.inverse().unwrap().apply(y);
            assert_eq!(inverse_star(&p, y).unwrap().to_vec(), vec![x]);
        }
        let s = Arc::new(FinSpace::sierpinski());
        assert!(matches!(
            inverse_star(&PointMap::identity(s), 0),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn reglue_from_splithomeo_examples() {
        let d = reglue_from_splithomeo(&PointMap::identity(disc(2))).unwrap();
        assert!(d.px.is_bijective() && d.py.is_bijective());
        assert_eq!(d.z.labels(), &["(0,0)", "(1,1)"]);

        let p = PointMap::new(disc(3), disc(3), vec![1, 2, 0]).unwrap();
        let d = reglue_from_splithomeo(&p).unwrap();
        assert_eq!(d.z.len(), 3);
        assert_eq!(d.derived(), p);
        assert!(validate_reglue(&d).passes());
    }

    #[test]
    fn splithomeo_from_reglue_examples() {
        let d = arc_datum();
        let f = splithomeo_from_reglue(&d).unwrap();
        assert_eq!(f.table(), &[0, 1]);

        let id = identity_datum(disc(3));
        assert_eq!(splithomeo_from_reglue(&id).unwrap(), PointMap::identity(disc(3)));

        let mut bad = arc_datum();
        bad.pxinv = PointMap::new(disc(2), disc(4), vec![0, 1]).unwrap();
        assert!(matches!(splithomeo_from_reglue(&bad), Err(Error::ValidationFailed(_))));
    }

    #[test]
    fn validate_examples() {
        assert!(validate_reglue(&arc_datum()).passes());

        let mut d = arc_datum();
        d.px = PointMap::new(disc(4), disc(2), vec![0, 0, 0, 0]).unwrap();
        let r = validate_reglue(&d);
        assert!(!r.px_surjective);

        let mut d = arc_datum();
        d.pxinv = PointMap::new(disc(2), disc(4), vec![0, 1]).unwrap();
        assert!(!validate_reglue(&d).right_inverse);

        // Non-quotient continuous surjection: D2 onto S2.
        let s = Arc::new(FinSpace::sierpinski());
        let p = PointMap::new(disc(2), s.clone(), vec![0, 1]).unwrap();
        assert!(p.is_continuous(None).holds());
        assert!(!is_quotient_map(&p));
    }

    #[test]
    fn transitive_examples() {
        let id = identity_datum(disc(2));
        let t = reglue_transitive(&id, &id).unwrap();
        assert_eq!(t.z.len(), 4);
        assert_eq!(t.derived(), PointMap::identity(disc(2)));

        let d = arc_datum();
        let back = reglue_reverse(&d).unwrap();
        let t = reglue_transitive(&d, &back).unwrap();
        assert_eq!(t.derived(), PointMap::identity(disc(2)));

        let swap = PointMap::new(disc(2), disc(2), vec![1, 0]).unwrap();
        let ds = reglue_from_splithomeo(&swap).unwrap();
        let t = reglue_transitive(&d, &ds).unwrap();
        assert_eq!(t.derived(), d.derived().then(&swap).unwrap());

        assert_eq!(
            reglue_transitive(&d, &identity_datum(disc(3))).unwrap_err(),
            Error::SpaceMismatch
        );
    }
}
