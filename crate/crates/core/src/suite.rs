//! Executable property suite.
//!
//! Each registered property is checked exhaustively over every labeled
//! topology on a few points and on seeded random instances. A failing case
//! is stored with its full data (minimal-open tables and map tables) and the
//! seed that produced it, so it can be re-run with [`replay`].

use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::multifunction::{
    inverse_image_multifunction, CombineMode, MultiMap, PointMap, UscoMode, DEFAULT_SEARCH_CAP,
};
use crate::multisplit::{
    compose_ev, condition_a_definitional, condition_b, condition_b_definitional,
    continuity_equivalence, ev_family_with, graph_projection_check, is_ev_set,
    is_pre_multi_split, local_image, reduce_to_ev, star_with, tilde_z_set, xp_set, EvCheck,
};
use crate::pointset::PointSet;
use crate::splithomeo::{
    inverse_star, is_split_homeo, reglue_from_splithomeo, reglue_reverse, reglue_transitive,
    split_homeomorphic, splithomeo_from_reglue, validate_reglue, ReglueDatum,
};
use crate::topology::{numeric_labels, quotient_space, FinSpace};

/// Largest point count accepted by [`enumerate_topologies`].
pub const MAX_ENUMERATED: usize = 4;

/// Number of labeled topologies on `n` points, `n = 0..=4`.
pub const TOPOLOGY_COUNTS: [usize; 5] = [1, 1, 4, 29, 355];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random trials per property.
    pub trials: u64,
    /// Point bound for exhaustive enumeration (at most 4).
    pub exhaustive_max: usize,
    /// Extended-value check used wherever the suite exercises the fast path.
    pub ev_check: EvCheck,
    pub selection_cap: u128,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            trials: 1000,
            exhaustive_max: 3,
            ev_check: EvCheck::Fast,
            selection_cap: DEFAULT_SEARCH_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random,
    Both,
}

/// Spaces and maps of one test case.
#[derive(Debug, Clone)]
pub struct Case {
    pub spaces: Vec<Arc<FinSpace>>,
    pub maps: Vec<PointMap>,
    pub multimaps: Vec<MultiMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MapData {
    pub domain: usize,
    pub codomain: usize,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiMapData {
    pub domain: usize,
    pub codomain: usize,
    pub table: Vec<Vec<usize>>,
}

/// Serializable form of a [`Case`]; spaces are minimal-open tables over
/// points `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseData {
    pub spaces: Vec<Vec<Vec<usize>>>,
    pub maps: Vec<MapData>,
    pub multimaps: Vec<MultiMapData>,
}

impl Case {
    fn new(spaces: Vec<Arc<FinSpace>>, maps: Vec<PointMap>, multimaps: Vec<MultiMap>) -> Case {
        Case {
            spaces,
            maps,
            multimaps,
        }
    }

    pub fn to_data(&self) -> CaseData {
        let idx = |s: &Arc<FinSpace>| {
            self.spaces
                .iter()
                .position(|t| **t == **s)
                .expect("case maps act between case spaces")
        };
        CaseData {
            spaces: self
                .spaces
                .iter()
                .map(|s| s.min_opens().iter().map(PointSet::to_vec).collect())
                .collect(),
            maps: self
                .maps
                .iter()
                .map(|m| MapData {
                    domain: idx(m.domain()),
                    codomain: idx(m.codomain()),
                    table: m.table().to_vec(),
                })
                .collect(),
            multimaps: self
                .multimaps
                .iter()
                .map(|m| MultiMapData {
                    domain: idx(m.domain()),
                    codomain: idx(m.codomain()),
                    table: m.table().iter().map(PointSet::to_vec).collect(),
                })
                .collect(),
        }
    }

    pub fn from_data(data: &CaseData) -> Result<Case> {
        let spaces = data
            .spaces
            .iter()
            .map(|t| {
                FinSpace::from_min_open("case", numeric_labels(t.len()), t.clone()).map(Arc::new)
            })
            .collect::<Result<Vec<_>>>()?;
        let space = |i: usize| {
            spaces
                .get(i)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("case refers to missing space {i}")))
        };
        let maps = data
            .maps
            .iter()
            .map(|m| PointMap::new(space(m.domain)?, space(m.codomain)?, m.table.clone()))
            .collect::<Result<Vec<_>>>()?;
        let multimaps = data
            .multimaps
            .iter()
            .map(|m| MultiMap::from_indices(space(m.domain)?, space(m.codomain)?, &m.table))
            .collect::<Result<Vec<_>>>()?;
        Ok(Case {
            spaces,
            maps,
            multimaps,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FailureRecord {
    /// Seed of the random trial; `None` for exhaustive cases.
    pub seed: Option<u64>,
    pub case: CaseData,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: String,
    pub claim: String,
    pub trials: u64,
    /// Cases whose hypotheses did not hold or that exceeded a search cap.
    pub skipped: u64,
    pub failures: Vec<FailureRecord>,
    pub elapsed: Duration,
    /// Set for properties that are vacuous on finite spaces.
    pub note: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Deterministic record: everything except the elapsed time.
    pub fn record(&self) -> Value {
        json!({
            "name": self.name,
            "verdict": if self.passed() { "pass" } else { "fail" },
            "trials": self.trials,
            "skipped": self.skipped,
            "failures": self.failures,
            "note": self.note,
        })
    }
}

enum Outcome {
    Pass,
    Skip,
}

type Check = std::result::Result<Outcome, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

type Exhaustive = fn(&SuiteConfig, &mut dyn FnMut(Case));
type Generator = fn(&mut ChaCha8Rng) -> Case;
type Checker = fn(&Case, &SuiteConfig) -> Check;

struct Property {
    name: &'static str,
    claim: &'static str,
    exhaustive: Option<Exhaustive>,
    random: Option<Generator>,
    check: Checker,
    noop: Option<&'static str>,
}

// ---------------------------------------------------------------------------
// Enumeration and generation

fn build_preorder_spaces(n: usize) -> Vec<Arc<FinSpace>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (i, a) in leq.iter_mut().enumerate() {
            a[i] = true;
        }
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                leq[a][b] = true;
            }
        }
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| !leq[a][b] || (0..n).all(|c| !leq[b][c] || leq[a][c]))
        });
        if transitive {
            let name = format!("T{n}#{}", out.len());
            let s = FinSpace::from_preorder(&name, numeric_labels(n), |q, p| leq[q][p])
                .expect("preorders give consistent tables");
            out.push(Arc::new(s));
        }
    }
    out
}

/// Every labeled topology on `n` points, as the Alexandrov topologies of
/// the preorders on `0..n` (`q ∈ U_p` iff `q ≤ p`).
pub fn enumerate_topologies(n: usize) -> Result<Vec<Arc<FinSpace>>> {
    static CACHE: [OnceLock<Vec<Arc<FinSpace>>>; MAX_ENUMERATED + 1] =
        [const { OnceLock::new() }; MAX_ENUMERATED + 1];
    if n > MAX_ENUMERATED {
        return Err(Error::TooLarge(format!(
            "topology enumeration is limited to {MAX_ENUMERATED} points, got {n}"
        )));
    }
    let spaces = CACHE[n].get_or_init(|| build_preorder_spaces(n));
    debug_assert_eq!(spaces.len(), TOPOLOGY_COUNTS[n]);
    Ok(spaces.clone())
}

fn spaces_upto(max: usize) -> Vec<Arc<FinSpace>> {
    (1..=max.min(MAX_ENUMERATED))
        .flat_map(|n| enumerate_topologies(n).expect("within bound"))
        .collect()
}

fn discrete_upto(max: usize) -> Vec<Arc<FinSpace>> {
    (1..=max).map(|n| Arc::new(FinSpace::discrete(n))).collect()
}

/// All functions `0..n → 0..m` as tables, last entry varying fastest.
fn tables(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut t = vec![0usize; n];
    loop {
        out.push(t.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < m {
                break;
            }
            t[i] = 0;
        }
    }
}

fn maps_between(x: &Arc<FinSpace>, y: &Arc<FinSpace>) -> Vec<PointMap> {
    tables(x.len(), y.len())
        .into_iter()
        .map(|t| PointMap::new(x.clone(), y.clone(), t).expect("table in range"))
        .collect()
}

fn bijections(x: &Arc<FinSpace>, y: &Arc<FinSpace>) -> Vec<PointMap> {
    if x.len() != y.len() {
        return Vec::new();
    }
    maps_between(x, y).into_iter().filter(PointMap::is_bijective).collect()
}

fn multimaps_between(x: &Arc<FinSpace>, y: &Arc<FinSpace>, nonempty: bool) -> Vec<MultiMap> {
    let m = y.len();
    let values: Vec<Vec<usize>> = (if nonempty { 1 } else { 0 }..(1usize << m))
        .map(|mask| (0..m).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    tables(x.len(), values.len())
        .into_iter()
        .map(|t| {
            let rows: Vec<Vec<usize>> = t.iter().map(|&c| values[c].clone()).collect();
            MultiMap::from_indices(x.clone(), y.clone(), &rows).expect("values in range")
        })
        .collect()
}

fn subsets(space: &FinSpace) -> Vec<PointSet> {
    let n = space.len();
    (0..(1usize << n))
        .map(|mask| {
            space
                .set_from_indices((0..n).filter(|i| mask & (1 << i) != 0))
                .expect("in range")
        })
        .collect()
}

fn nonempty_subsets(space: &FinSpace) -> Vec<PointSet> {
    subsets(space).into_iter().filter(|s| !s.is_empty()).collect()
}

fn random_space_in(rng: &mut ChaCha8Rng, n: usize) -> Arc<FinSpace> {
    let mut leq = vec![vec![false; n]; n];
    for (a, row) in leq.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = a == b || rng.gen_bool(0.3);
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if leq[a][k] && leq[k][b] {
                    leq[a][b] = true;
                }
            }
        }
    }
    Arc::new(
        FinSpace::from_preorder("random", numeric_labels(n), |q, p| leq[q][p])
            .expect("closure is a preorder"),
    )
}

fn random_map_in(rng: &mut ChaCha8Rng, x: &Arc<FinSpace>, y: &Arc<FinSpace>) -> PointMap {
    let t = (0..x.len()).map(|_| rng.gen_range(0..y.len())).collect();
    PointMap::new(x.clone(), y.clone(), t).expect("in range")
}

fn random_bijection_in(rng: &mut ChaCha8Rng, x: &Arc<FinSpace>, y: &Arc<FinSpace>) -> PointMap {
    let mut t: Vec<usize> = (0..x.len()).collect();
    t.shuffle(rng);
    PointMap::new(x.clone(), y.clone(), t).expect("in range")
}

fn random_multimap_in(rng: &mut ChaCha8Rng, x: &Arc<FinSpace>, y: &Arc<FinSpace>, allow_empty: bool) -> MultiMap {
    let rows: Vec<Vec<usize>> = (0..x.len())
        .map(|_| {
            let mut v: Vec<usize> = (0..y.len()).filter(|_| rng.gen_bool(0.4)).collect();
            if v.is_empty() && !allow_empty {
                v.push(rng.gen_range(0..y.len()));
            }
            v
        })
        .collect();
    MultiMap::from_indices(x.clone(), y.clone(), &rows).expect("in range")
}

/// `G(p) = ⋃_{q ∈ U_p} F(q)` for a random non-empty `F`; always u.s.c.
fn random_usc_in(rng: &mut ChaCha8Rng, x: &Arc<FinSpace>, y: &Arc<FinSpace>) -> MultiMap {
    // Sparse seeds keep the saturated values from filling the codomain.
    let rows: Vec<Vec<usize>> = (0..x.len())
        .map(|_| {
            let k = if rng.gen_bool(0.7) { 1 } else { 2 };
            (0..k).map(|_| rng.gen_range(0..y.len())).collect()
        })
        .collect();
    let f0 = MultiMap::from_indices(x.clone(), y.clone(), &rows).expect("in range");
    let table = (0..x.len())
        .map(|p| f0.image(x.min_open(p)).expect("same space"))
        .collect();
    MultiMap::new(x.clone(), y.clone(), table).expect("same spaces")
}

fn size(rng: &mut ChaCha8Rng, max: usize) -> usize {
    rng.gen_range(1..=max)
}

fn rspace(rng: &mut ChaCha8Rng, max: usize) -> Arc<FinSpace> {
    let n = size(rng, max);
    random_space_in(rng, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Space { points: usize },
    Map { domain: usize, codomain: usize },
    MultiMap { domain: usize, codomain: usize, allow_empty: bool },
}

#[derive(Debug, Clone)]
pub enum Instance {
    Space(Arc<FinSpace>),
    Map(PointMap),
    MultiMap(MultiMap),
}

/// A random space, map or multimap; the same seed always gives the same
/// instance. Spaces are reflexive-transitive closures of random relations.
pub fn random_instance(seed: u64, shape: Shape) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match shape {
        Shape::Space { points } => Instance::Space(random_space_in(&mut rng, points)),
        Shape::Map { domain, codomain } => {
            let x = random_space_in(&mut rng, domain);
            let y = random_space_in(&mut rng, codomain);
            Instance::Map(random_map_in(&mut rng, &x, &y))
        }
        Shape::MultiMap {
            domain,
            codomain,
            allow_empty,
        } => {
            let x = random_space_in(&mut rng, domain);
            let y = random_space_in(&mut rng, codomain);
            Instance::MultiMap(random_multimap_in(&mut rng, &x, &y, allow_empty))
        }
    }
}

// ---------------------------------------------------------------------------
// Shared case builders

fn ex_maps(max: usize, emit: &mut dyn FnMut(Case)) {
    let spaces = spaces_upto(max);
    for x in &spaces {
        for y in &spaces {
            for f in maps_between(x, y) {
                emit(Case::new(vec![x.clone(), y.clone()], vec![f], vec![]));
            }
        }
    }
}

fn ex_maps_discrete(max: usize, emit: &mut dyn FnMut(Case)) {
    let xs = spaces_upto(max);
    for x in &xs {
        for y in discrete_upto(max) {
            for f in maps_between(x, &y) {
                emit(Case::new(vec![x.clone(), y.clone()], vec![f], vec![]));
            }
        }
    }
}

fn rand_map(rng: &mut ChaCha8Rng, max: usize) -> Case {
    let x = rspace(rng, max);
    let y = rspace(rng, max);
    let f = random_map_in(rng, &x, &y);
    Case::new(vec![x, y], vec![f], vec![])
}

fn rand_map_discrete(rng: &mut ChaCha8Rng, max: usize) -> Case {
    let x = rspace(rng, max);
    let y = Arc::new(FinSpace::discrete(size(rng, max)));
    let f = random_map_in(rng, &x, &y);
    Case::new(vec![x, y], vec![f], vec![])
}

fn rand_map_5(rng: &mut ChaCha8Rng) -> Case {
    rand_map(rng, 5)
}

fn rand_map_discrete_6(rng: &mut ChaCha8Rng) -> Case {
    rand_map_discrete(rng, 6)
}

fn ex_maps_cfg(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    ex_maps(cfg.exhaustive_max, emit)
}

fn ex_maps_discrete_cfg(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    ex_maps_discrete(cfg.exhaustive_max, emit)
}

// ---------------------------------------------------------------------------
// Property checks

fn set_label(s: &FinSpace, z: &PointSet) -> String {
    format!("{{{}}}", s.labels_of(z).join(","))
}

fn check_ev_agree(c: &Case, cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    let zs = nonempty_subsets(f.codomain());
    for p in 0..f.domain().len() {
        for z in &zs {
            let fast = lib(is_ev_set(f, p, z, cfg.ev_check))?;
            let def = lib(is_ev_set(f, p, z, EvCheck::Definitional))?;
            ensure!(
                fast == def,
                "p={p} Z={}: fast {fast}, definitional {def}",
                set_label(f.codomain(), z)
            );
        }
    }
    Ok(Outcome::Pass)
}

fn check_reduction(c: &Case, cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    for p in 0..f.domain().len() {
        let fam = lib(ev_family_with(f, p, cfg.ev_check))?;
        ensure!(!fam.sets.is_empty(), "p={p}: no set of extended values");
        for z in nonempty_subsets(f.codomain()) {
            if !condition_b_definitional(f, p, &z) {
                continue;
            }
            let r = lib(reduce_to_ev(f, p, &z))?;
            ensure!(
                !r.is_empty() && r.is_subset_unchecked(&z),
                "p={p} Z={}: reduction {} not a non-empty subset",
                set_label(f.codomain(), &z),
                set_label(f.codomain(), &r)
            );
            ensure!(
                lib(is_ev_set(f, p, &r, EvCheck::Definitional))?
                    && lib(is_ev_set(f, p, &r, cfg.ev_check))?,
                "p={p} Z={}: reduction {} is not a set of extended values",
                set_label(f.codomain(), &z),
                set_label(f.codomain(), &r)
            );
        }
    }
    Ok(Outcome::Pass)
}

fn check_fp_inclusion(c: &Case, cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    for p in 0..f.domain().len() {
        let fam = lib(ev_family_with(f, p, cfg.ev_check))?;
        for z in &fam.sets {
            let mut w = z.clone();
            w.insert(f.apply(p));
            ensure!(
                fam.contains(&w) && lib(is_ev_set(f, p, &w, EvCheck::Definitional))?,
                "p={p} Z={}: adding f(p) leaves the family",
                set_label(f.codomain(), z)
            );
        }
    }
    Ok(Outcome::Pass)
}

fn check_interval(c: &Case, cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    let all = nonempty_subsets(f.codomain());
    for p in 0..f.domain().len() {
        let fam = lib(ev_family_with(f, p, cfg.ev_check))?;
        for z1 in &fam.sets {
            for z2 in &fam.sets {
                let top = z1.union_unchecked(z2);
                for b in all.iter().filter(|b| z1.is_subset_unchecked(b) && b.is_subset_unchecked(&top)) {
                    ensure!(
                        fam.contains(b),
                        "p={p}: {} between {} and {} is not a member",
                        set_label(f.codomain(), b),
                        set_label(f.codomain(), z1),
                        set_label(f.codomain(), &top)
                    );
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

fn check_unique(c: &Case, cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    for p in 0..f.domain().len() {
        let fam = lib(ev_family_with(f, p, cfg.ev_check))?;
        let img = local_image(f, p);
        ensure!(fam.sets.len() == 1, "p={p}: {} members", fam.sets.len());
        ensure!(
            fam.sets[0] == img && img == xp_set(f, p),
            "p={p}: member {} differs from f(U_p) {}",
            set_label(f.codomain(), &fam.sets[0]),
            set_label(f.codomain(), &img)
        );
        ensure!(fam.sets[0].contains(f.apply(p)), "p={p}: f(p) not in Z_p");
    }
    Ok(Outcome::Pass)
}

fn ex_compose(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    let spaces = spaces_upto(cfg.exhaustive_max.min(2));
    for x in &spaces {
        for y in &spaces {
            for w in &spaces {
                for f in maps_between(x, y) {
                    for g in maps_between(y, w) {
                        emit(Case::new(vec![x.clone(), y.clone(), w.clone()], vec![f.clone(), g], vec![]));
                    }
                }
            }
        }
    }
}

fn rand_compose(rng: &mut ChaCha8Rng) -> Case {
    let x = rspace(rng, 5);
    let y = rspace(rng, 5);
    let w = rspace(rng, 5);
    let f = random_map_in(rng, &x, &y);
    let g = random_map_in(rng, &y, &w);
    Case::new(vec![x, y, w], vec![f, g], vec![])
}

/// Choice vectors over `radix`: all of them when few, otherwise a fixed
/// spread of rotations.
fn choice_vectors(radix: &[usize]) -> Vec<Vec<usize>> {
    let total = radix.iter().fold(1u64, |a, &r| a.saturating_mul(r as u64));
    if total <= 4096 {
        let mut out = Vec::new();
        let mut d = vec![0usize; radix.len()];
        for _ in 0..total {
            out.push(d.clone());
            for i in (0..d.len()).rev() {
                d[i] += 1;
                if d[i] < radix[i] {
                    break;
                }
                d[i] = 0;
            }
        }
        out
    } else {
        (0..16)
            .map(|j| radix.iter().enumerate().map(|(i, &r)| (j * (i + 1) + j / 3) % r).collect())
            .chain([radix.iter().map(|&r| r - 1).collect()])
            .collect()
    }
}

fn check_compose(c: &Case, cfg: &SuiteConfig) -> Check {
    let (f, g) = (&c.maps[0], &c.maps[1]);
    let gf = lib(f.then(g))?;
    let g_fams = (0..g.domain().len())
        .map(|y| lib(ev_family_with(g, y, cfg.ev_check)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    for p in 0..f.domain().len() {
        let fam_f = lib(ev_family_with(f, p, cfg.ev_check))?;
        for zf in &fam_f.sets {
            let ys = zf.to_vec();
            let radix: Vec<usize> = ys.iter().map(|&y| g_fams[y].sets.len()).collect();
            for choice in choice_vectors(&radix) {
                let pick = |y: usize| {
                    let i = ys.iter().position(|&v| v == y).expect("y in Z^f");
                    g_fams[y].sets[choice[i]].clone()
                };
                let zt = lib(compose_ev(f, g, p, zf, pick))?;
                ensure!(
                    condition_b_definitional(&gf, p, &zt) && condition_b(&gf, p, &zt),
                    "p={p} Z^f={}: composite {} fails condition (b)",
                    set_label(f.codomain(), zf),
                    set_label(g.codomain(), &zt)
                );
                let r = lib(reduce_to_ev(&gf, p, &zt))?;
                ensure!(
                    lib(is_ev_set(&gf, p, &r, EvCheck::Definitional))?,
                    "p={p}: reduced composite {} is not a set of extended values",
                    set_label(g.codomain(), &r)
                );
            }
        }
    }
    Ok(Outcome::Pass)
}

fn check_xp(c: &Case, _cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    let (x, y) = (f.domain(), f.codomain());
    for p in 0..x.len() {
        let mut meet = y.full_set();
        for u in x.opens().iter().filter(|u| u.contains(p)) {
            meet = meet.intersection_unchecked(&y.closure(&f.image_unchecked(u)));
        }
        let xp = xp_set(f, p);
        ensure!(xp == meet, "p={p}: X_p {} but intersection {}", set_label(y, &xp), set_label(y, &meet));
        let mut by_a = y.empty_set();
        for q in 0..y.len() {
            if condition_a_definitional(f, p, &y.singleton(q)) {
                by_a.insert(q);
            }
        }
        ensure!(xp == by_a, "p={p}: X_p {} but condition (a) points {}", set_label(y, &xp), set_label(y, &by_a));
    }
    Ok(Outcome::Pass)
}

fn star_of(c: &Case, cfg: &SuiteConfig) -> std::result::Result<MultiMap, String> {
    Ok(lib(star_with(&c.maps[0], cfg.ev_check))?.into_multimap())
}

fn check_star_usc(c: &Case, cfg: &SuiteConfig) -> Check {
    let st = star_of(c, cfg)?;
    let v = st.is_usc(None);
    ensure!(v.holds(), "f* not u.s.c. at {:?}", v.witness.map(|w| w.point));
    for p in 0..st.domain().len() {
        ensure!(st.is_usc_definitional(p), "f* fails the definitional u.s.c. check at {p}");
    }
    Ok(Outcome::Pass)
}

fn check_star_usco_closed(c: &Case, cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    let st = star_of(c, cfg)?;
    ensure!(lib(st.is_usco(UscoMode::Usco, cfg.selection_cap))?, "f* is not usco");
    let (_, gr, cl) = st.graph_and_closure();
    ensure!(gr == cl, "gr(f*) is not closed");
    for p in 0..f.domain().len() {
        ensure!(st.value(p).contains(f.apply(p)), "f(p) not in f*(p) at {p}");
    }
    Ok(Outcome::Pass)
}

fn check_graph(c: &Case, cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    let st = star_of(c, cfg)?;
    let (prod, _, cl) = f.to_multimap().graph_and_closure();
    let gr_star = st.graph_in(&prod);
    ensure!(
        cl == gr_star,
        "cl(gr f) = {} but gr(f*) = {}",
        set_label(&prod, &cl),
        set_label(&prod, &gr_star)
    );
    Ok(Outcome::Pass)
}

fn check_proj_closed(c: &Case, cfg: &SuiteConfig) -> Check {
    let st = star_of(c, cfg)?;
    let (z, px, _) = st.graph_space();
    ensure!(px.is_closed_map(), "projection from gr(f*) is not closed");
    if z.len() <= 12 {
        ensure!(px.is_closed_map_by_closed_sets(), "projection fails the closed-set oracle");
    }
    Ok(Outcome::Pass)
}

fn ex_multimaps(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case), max_codomain: usize, nonempty: bool) {
    let xs = spaces_upto(cfg.exhaustive_max);
    let ys = spaces_upto(cfg.exhaustive_max.min(max_codomain));
    for x in &xs {
        for y in &ys {
            for m in multimaps_between(x, y, nonempty) {
                emit(Case::new(vec![x.clone(), y.clone()], vec![], vec![m]));
            }
        }
    }
}

fn ex_multimaps_ne2(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    ex_multimaps(cfg, emit, 2, true)
}

fn ex_multimaps_all2(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    ex_multimaps(cfg, emit, 2, false)
}

fn rand_usc(rng: &mut ChaCha8Rng) -> Case {
    let x = rspace(rng, 4);
    let y = rspace(rng, 4);
    let m = random_usc_in(rng, &x, &y);
    Case::new(vec![x, y], vec![], vec![m])
}

fn rand_multimap(rng: &mut ChaCha8Rng) -> Case {
    let x = rspace(rng, 4);
    let y = rspace(rng, 4);
    let allow_empty = rng.gen_bool(0.2);
    let m = random_multimap_in(rng, &x, &y, allow_empty);
    Case::new(vec![x, y], vec![], vec![m])
}

fn check_finusc(c: &Case, cfg: &SuiteConfig) -> Check {
    let big_f = &c.multimaps[0];
    if !big_f.is_nonempty() || !big_f.is_usc(None).holds() {
        return Ok(Outcome::Skip);
    }
    let Ok(sel) = big_f.selections(cfg.selection_cap) else {
        return Ok(Outcome::Skip);
    };
    for (k, s) in sel.enumerate() {
        for p in 0..big_f.domain().len() {
            ensure!(condition_b(&s, p, big_f.value(p)), "selection {k}: F(p) fails condition (b) at {p}");
            if k < 16 {
                ensure!(
                    condition_b_definitional(&s, p, big_f.value(p)),
                    "selection {k}: F(p) fails the definitional condition (b) at {p}"
                );
            }
        }
    }
    Ok(Outcome::Pass)
}

fn check_tilde_z(c: &Case, cfg: &SuiteConfig) -> Check {
    let big_f = &c.multimaps[0];
    if !big_f.is_nonempty() {
        return Ok(Outcome::Skip);
    }
    let Ok(sel) = big_f.selections(cfg.selection_cap) else {
        return Ok(Outcome::Skip);
    };
    let tz: Vec<PointSet> = (0..big_f.domain().len())
        .map(|p| lib(tilde_z_set(big_f, p)))
        .collect::<std::result::Result<_, _>>()?;
    for (k, s) in sel.enumerate() {
        for (p, t) in tz.iter().enumerate() {
            ensure!(xp_set(&s, p).is_subset_unchecked(t), "selection {k}: X_p not inside Z~_p at {p}");
        }
    }
    Ok(Outcome::Pass)
}

fn check_star_pms(c: &Case, cfg: &SuiteConfig) -> Check {
    let st = star_of(c, cfg)?;
    let r = match is_pre_multi_split(&st, None, cfg.selection_cap) {
        Ok(r) => r,
        Err(Error::SearchSpaceTooLarge { .. }) => return Ok(Outcome::Skip),
        Err(e) => return Err(e.to_string()),
    };
    ensure!(r.holds && r.values_certify, "f* is not certified pre-multi-split: {r:?}");
    Ok(Outcome::Pass)
}

fn ex_minusco(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    for x in spaces_upto(cfg.exhaustive_max) {
        for y in discrete_upto(cfg.exhaustive_max.min(2)) {
            for g in multimaps_between(&x, &y, true) {
                emit(Case::new(vec![x.clone(), y.clone()], vec![], vec![g]));
            }
        }
    }
}

fn rand_minusco(rng: &mut ChaCha8Rng) -> Case {
    let x = rspace(rng, 4);
    let y = Arc::new(FinSpace::discrete(size(rng, 3)));
    let g = if rng.gen_bool(0.5) {
        let f = random_map_in(rng, &x, &y);
        crate::multisplit::star(&f).expect("discrete codomain").into_multimap()
    } else {
        random_usc_in(rng, &x, &y)
    };
    Case::new(vec![x, y], vec![], vec![g])
}

fn check_minusco(c: &Case, cfg: &SuiteConfig) -> Check {
    let g = &c.multimaps[0];
    match g.is_usco(UscoMode::Minimal, cfg.selection_cap) {
        Ok(true) => {}
        Ok(false) | Err(Error::SearchSpaceTooLarge { .. }) => return Ok(Outcome::Skip),
        Err(e) => return Err(e.to_string()),
    }
    let Ok(sel) = g.selections(cfg.selection_cap) else {
        return Ok(Outcome::Skip);
    };
    for (k, s) in sel.enumerate() {
        let st = lib(star_with(&s, cfg.ev_check))?.into_multimap();
        ensure!(st == *g, "selection {k}: f* differs from the minimal usco map");
    }
    Ok(Outcome::Pass)
}

fn check_cont_iff(c: &Case, _cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    let (cont, msc_closed) = lib(continuity_equivalence(f))?;
    ensure!(cont == msc_closed, "continuous {cont}, multi-split with closed graph {msc_closed}");
    ensure!(cont == f.is_continuous_by_opens(), "pointwise and open-set continuity disagree");
    Ok(Outcome::Pass)
}

fn check_fto(c: &Case, cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    let st = star_of(c, cfg)?;
    let r = lib(graph_projection_check(f, f.codomain().len()))?;
    ensure!(r.within_bound, "fiber of size {} exceeds |Y|", r.max_fiber);
    for p in 0..f.domain().len() {
        ensure!(
            r.fibers[p] == st.value(p).count(),
            "p={p}: fiber {} but |f*(p)| = {}",
            r.fibers[p],
            st.value(p).count()
        );
    }
    Ok(Outcome::Pass)
}

fn ex_union(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    let spaces = spaces_upto(cfg.exhaustive_max.min(2));
    for x in &spaces {
        for y in &spaces {
            let maps = maps_between(x, y);
            for f in &maps {
                for g in &maps {
                    emit(Case::new(vec![x.clone(), y.clone()], vec![f.clone(), g.clone()], vec![]));
                }
            }
        }
    }
}

fn rand_union(rng: &mut ChaCha8Rng) -> Case {
    let x = rspace(rng, 4);
    let y = rspace(rng, 4);
    let f = random_map_in(rng, &x, &y);
    let g = random_map_in(rng, &x, &y);
    Case::new(vec![x, y], vec![f, g], vec![])
}

/// Condition (b) is monotone in `Z`, so pairs of minimal members are the
/// binding case.
fn check_union(c: &Case, cfg: &SuiteConfig) -> Check {
    let (f, g) = (&c.maps[0], &c.maps[1]);
    let u = lib(f.to_multimap().combine(&g.to_multimap(), CombineMode::Union))?;
    let Ok(sel) = u.selections(cfg.selection_cap) else {
        return Ok(Outcome::Skip);
    };
    let fams: Vec<_> = (0..f.domain().len())
        .map(|p| Ok((lib(ev_family_with(f, p, cfg.ev_check))?, lib(ev_family_with(g, p, cfg.ev_check))?)))
        .collect::<std::result::Result<_, String>>()?;
    for (k, h) in sel.enumerate() {
        for (p, (ff, fg)) in fams.iter().enumerate() {
            for zf in &ff.minimal {
                for zg in &fg.minimal {
                    let z = zf.union_unchecked(zg);
                    ensure!(
                        condition_b(&h, p, &z) && condition_b_definitional(&h, p, &z),
                        "selection {k} at {p}: {} fails condition (b)",
                        set_label(f.codomain(), &z)
                    );
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

fn ex_sub_union(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    let spaces = spaces_upto(cfg.exhaustive_max.min(2));
    for x in &spaces {
        for y in &spaces {
            let ms = multimaps_between(x, y, true);
            for a in &ms {
                for b in &ms {
                    emit(Case::new(vec![x.clone(), y.clone()], vec![], vec![a.clone(), b.clone()]));
                }
            }
        }
    }
}

fn rand_sub_union(rng: &mut ChaCha8Rng) -> Case {
    let x = rspace(rng, 4);
    let y = rspace(rng, 4);
    let a = random_multimap_in(rng, &x, &y, false);
    let b = random_multimap_in(rng, &x, &y, false);
    Case::new(vec![x, y], vec![], vec![a, b])
}

/// The union proof: split a selection of `F1 ∪ F2` into selections `g` of
/// `F1` and `h` of `F2`; `g(U_p) ∪ h(U_p)` certifies it.
fn check_sub_union(c: &Case, cfg: &SuiteConfig) -> Check {
    let (a, b) = (&c.multimaps[0], &c.multimaps[1]);
    let u = lib(a.combine(b, CombineMode::Union))?;
    let (ra, ru) = match (
        is_pre_multi_split(a, None, cfg.selection_cap),
        is_pre_multi_split(&u, None, cfg.selection_cap),
    ) {
        (Ok(ra), Ok(ru)) => (ra, ru),
        _ => return Ok(Outcome::Skip),
    };
    ensure!(ra.holds, "non-empty submultifunction is not pre-multi-split");
    ensure!(ru.holds, "union is not pre-multi-split");
    let sel = lib(u.selections(cfg.selection_cap))?;
    for (k, f) in sel.enumerate() {
        let split = |part: &MultiMap| {
            let t = (0..f.domain().len())
                .map(|x| {
                    if part.value(x).contains(f.apply(x)) {
                        f.apply(x)
                    } else {
                        part.value(x).first().expect("non-empty")
                    }
                })
                .collect();
            PointMap::new(f.domain().clone(), f.codomain().clone(), t).expect("in range")
        };
        let (g, h) = (split(a), split(b));
        ensure!(a.contains_selection(&g) && b.contains_selection(&h), "split is not a pair of selections");
        for p in 0..f.domain().len() {
            let z = local_image(&g, p).union_unchecked(&local_image(&h, p));
            ensure!(
                condition_b_definitional(&f, p, &z),
                "selection {k} at {p}: union certificate fails condition (b)"
            );
        }
    }
    Ok(Outcome::Pass)
}

fn check_invimg(c: &Case, cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    if !f.is_surjective() || !f.is_closed_map() {
        return Ok(Outcome::Skip);
    }
    let inv = inverse_image_multifunction(f);
    ensure!(inv.is_usc(None).holds(), "inverse image of a closed surjection is not u.s.c.");
    let r = match is_pre_multi_split(&inv, None, cfg.selection_cap) {
        Ok(r) => r,
        Err(Error::SearchSpaceTooLarge { .. }) => return Ok(Outcome::Skip),
        Err(e) => return Err(e.to_string()),
    };
    ensure!(r.holds && r.values_certify, "inverse image is not certified pre-multi-split: {r:?}");
    Ok(Outcome::Pass)
}

fn ex_partitions(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    for x in spaces_upto(cfg.exhaustive_max) {
        for k in 1..=x.len() {
            let d = Arc::new(FinSpace::discrete(k));
            for c in maps_between(&x, &d).into_iter().filter(PointMap::is_surjective) {
                emit(Case::new(vec![x.clone(), d.clone()], vec![c], vec![]));
            }
        }
    }
}

fn rand_partition(rng: &mut ChaCha8Rng) -> Case {
    let x = rspace(rng, 6);
    let k = size(rng, x.len());
    let d = Arc::new(FinSpace::discrete(k));
    let mut t: Vec<usize> = (0..x.len()).map(|i| if i < k { i } else { rng.gen_range(0..k) }).collect();
    t.shuffle(rng);
    let c = PointMap::new(x.clone(), d.clone(), t).expect("in range");
    Case::new(vec![x, d], vec![c], vec![])
}

fn classes_of(c: &PointMap) -> Vec<Vec<usize>> {
    c.fibers().iter().map(PointSet::to_vec).collect()
}

fn check_quot(c: &Case, cfg: &SuiteConfig) -> Check {
    let x = &c.spaces[0];
    let (q, p) = lib(quotient_space(x, &classes_of(&c.maps[0])))?;
    if !q.is_discrete() {
        return Ok(Outcome::Skip);
    }
    ensure!(p.is_continuous(None).holds() && p.is_closed_map(), "quotient map not continuous and closed");
    let inv = inverse_image_multifunction(&p);
    let r = match is_pre_multi_split(&inv, None, cfg.selection_cap) {
        Ok(r) => r,
        Err(Error::SearchSpaceTooLarge { .. }) => return Ok(Outcome::Skip),
        Err(e) => return Err(e.to_string()),
    };
    ensure!(r.holds && r.values_certify, "p⁻¹ is not certified pre-multi-split: {r:?}");
    Ok(Outcome::Pass)
}

fn check_quotient_space(c: &Case, _cfg: &SuiteConfig) -> Check {
    let x = &c.spaces[0];
    let (q, p) = lib(quotient_space(x, &classes_of(&c.maps[0])))?;
    ensure!(p.is_continuous(None).holds(), "projection is not continuous");
    for s in subsets(&q) {
        let pre = lib(p.preimage(&s))?;
        ensure!(
            q.is_open(&s) == x.is_open(&pre),
            "class set {} open in quotient: {}, preimage open: {}",
            set_label(&q, &s),
            q.is_open(&s),
            x.is_open(&pre)
        );
    }
    Ok(Outcome::Pass)
}

fn ex_equiv6(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    let max = cfg.exhaustive_max.min(3);
    for n in 1..=max {
        let spaces = enumerate_topologies(n).expect("within bound");
        for x in &spaces {
            for y in &spaces {
                // Triples for n ≤ 2; for n = 3 the third space is the second.
                let ws: Vec<&Arc<FinSpace>> = if n <= 2 { spaces.iter().collect() } else { vec![y] };
                for w in ws {
                    for f in bijections(x, y) {
                        for g in bijections(y, w) {
                            emit(Case::new(vec![x.clone(), y.clone(), w.clone()], vec![f.clone(), g], vec![]));
                        }
                    }
                }
            }
        }
    }
}

fn rand_equiv6(rng: &mut ChaCha8Rng) -> Case {
    let n = size(rng, 5);
    let x = random_space_in(rng, n);
    let y = random_space_in(rng, n);
    let w = random_space_in(rng, n);
    let f = random_bijection_in(rng, &x, &y);
    let g = random_bijection_in(rng, &y, &w);
    Case::new(vec![x, y, w], vec![f, g], vec![])
}

fn check_equiv6(c: &Case, _cfg: &SuiteConfig) -> Check {
    let (f, g) = (&c.maps[0], &c.maps[1]);
    for s in &c.spaces {
        ensure!(is_split_homeo(&PointMap::identity(s.clone())), "identity is not a split homeomorphism");
    }
    ensure!(is_split_homeo(f), "bijection is not a split homeomorphism");
    ensure!(is_split_homeo(&lib(f.inverse())?), "inverse is not a split homeomorphism");
    ensure!(is_split_homeo(&lib(f.then(g))?), "composite is not a split homeomorphism");
    Ok(Outcome::Pass)
}

fn ex_discrete_bijections(max: usize, emit: &mut dyn FnMut(Case)) {
    for n in 1..=max {
        let d = Arc::new(FinSpace::discrete(n));
        for f in bijections(&d, &d) {
            emit(Case::new(vec![d.clone()], vec![f], vec![]));
        }
    }
}

fn ex_invstar(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    ex_discrete_bijections(cfg.exhaustive_max.max(4), emit)
}

fn rand_discrete_bijection(rng: &mut ChaCha8Rng) -> Case {
    let d = Arc::new(FinSpace::discrete(size(rng, 7)));
    let f = random_bijection_in(rng, &d, &d);
    Case::new(vec![d], vec![f], vec![])
}

fn check_invstar(c: &Case, _cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    let inv = lib(f.inverse())?;
    for y in 0..f.codomain().len() {
        let v = lib(inverse_star(f, y))?;
        ensure!(v.to_vec() == vec![inv.apply(y)], "(f⁻¹)*({y}) = {:?}", v.to_vec());
    }
    Ok(Outcome::Pass)
}

fn check_roundtrip(c: &Case, _cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    let d = lib(reglue_from_splithomeo(f))?;
    ensure!(validate_reglue(&d).passes(), "datum from f does not validate");
    let back = lib(splithomeo_from_reglue(&d))?;
    ensure!(back == *f, "round trip gives {:?}, expected {:?}", back.table(), f.table());
    Ok(Outcome::Pass)
}

/// A datum on a discrete `Z` of `z` points over discrete `X`, `Y` of `n`
/// points.
fn random_datum(rng: &mut ChaCha8Rng, n: usize, z: usize) -> (Arc<FinSpace>, Arc<FinSpace>, Arc<FinSpace>, [PointMap; 3]) {
    let zs = Arc::new(FinSpace::discrete(z));
    let x = Arc::new(FinSpace::discrete(n));
    let y = Arc::new(FinSpace::discrete(n));
    let mut px: Vec<usize> = (0..z).map(|i| if i < n { i } else { rng.gen_range(0..n) }).collect();
    px.shuffle(rng);
    let fibers: Vec<Vec<usize>> = (0..n).map(|c| (0..z).filter(|&i| px[i] == c).collect()).collect();
    let pxinv: Vec<usize> = fibers.iter().map(|f| *f.choose(rng).expect("surjective")).collect();
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.shuffle(rng);
    let mut py: Vec<usize> = (0..z).map(|_| rng.gen_range(0..n)).collect();
    for (c, &zi) in pxinv.iter().enumerate() {
        py[zi] = sigma[c];
    }
    // Every point of Y must be hit; the chosen representatives already do.
    let maps = [
        PointMap::new(zs.clone(), x.clone(), px).expect("in range"),
        PointMap::new(zs.clone(), y.clone(), py).expect("in range"),
        PointMap::new(x.clone(), zs.clone(), pxinv).expect("in range"),
    ];
    (zs, x, y, maps)
}

fn rand_equiv7(rng: &mut ChaCha8Rng) -> Case {
    let n = size(rng, 4);
    let z1 = n + rng.gen_range(0..=n);
    let z2 = n + rng.gen_range(0..=n);
    let (za, xa, ya, [px, py, pxinv]) = random_datum(rng, n, z1);
    let (zb, _, wb, [qy, qw, qyinv]) = random_datum(rng, n, z2);
    // Both data share Y; discrete spaces of equal size are equal.
    Case::new(vec![za, xa, ya, zb, wb], vec![px, py, pxinv, qy, qw, qyinv], vec![])
}

fn ex_equiv7(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    for n in 1..=cfg.exhaustive_max.min(3) {
        let d = Arc::new(FinSpace::discrete(n));
        let bs = bijections(&d, &d);
        for f in &bs {
            for g in &bs {
                let d1 = reglue_from_splithomeo(f).expect("discrete bijection");
                let d2 = reglue_from_splithomeo(g).expect("discrete bijection");
                emit(Case::new(
                    vec![d1.z().clone(), d.clone(), d2.z().clone()],
                    vec![
                        d1.px().clone(),
                        d1.py().clone(),
                        d1.pxinv().clone(),
                        d2.px().clone(),
                        d2.py().clone(),
                        d2.pxinv().clone(),
                    ],
                    vec![],
                ));
            }
        }
    }
}

fn check_equiv7(c: &Case, _cfg: &SuiteConfig) -> Check {
    let m = &c.maps;
    let d1 = lib(ReglueDatum::new(m[0].domain().clone(), m[0].clone(), m[1].clone(), m[2].clone()))?;
    let d2 = lib(ReglueDatum::new(m[3].domain().clone(), m[3].clone(), m[4].clone(), m[5].clone()))?;
    ensure!(validate_reglue(&d1).passes() && validate_reglue(&d2).passes(), "input data do not validate");
    let t = lib(reglue_transitive(&d1, &d2))?;
    ensure!(validate_reglue(&t).passes(), "composite datum does not validate");
    let expect = lib(d1.derived().then(&d2.derived()))?;
    ensure!(t.derived() == expect, "composite derives {:?}, expected {:?}", t.derived().table(), expect.table());
    let r = lib(reglue_reverse(&d1))?;
    ensure!(validate_reglue(&r).passes(), "reversed datum does not validate");
    ensure!(r.derived() == lib(d1.derived().inverse())?, "reversed datum does not derive f⁻¹");
    let back = lib(reglue_transitive(&d1, &r))?;
    ensure!(
        back.derived() == PointMap::identity(d1.x().clone()),
        "datum chained with its reverse is not the identity"
    );
    Ok(Outcome::Pass)
}

fn check_usc_oracle(c: &Case, _cfg: &SuiteConfig) -> Check {
    let big_f = &c.multimaps[0];
    for p in 0..big_f.domain().len() {
        let fast = big_f.is_usc(Some(p)).holds();
        let def = big_f.is_usc_definitional(p);
        ensure!(fast == def, "p={p}: fast {fast}, definitional {def}");
    }
    Ok(Outcome::Pass)
}

fn ex_spaces(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    for x in spaces_upto(cfg.exhaustive_max) {
        emit(Case::new(vec![x], vec![], vec![]));
    }
}

fn rand_space(rng: &mut ChaCha8Rng) -> Case {
    let n = size(rng, 6);
    Case::new(vec![random_space_in(rng, n)], vec![], vec![])
}

fn check_closure_laws(c: &Case, _cfg: &SuiteConfig) -> Check {
    let s = &c.spaces[0];
    let n = s.len();
    for p in 0..n {
        for q in s.min_open(p).iter() {
            ensure!(s.min_open(q).is_subset_unchecked(s.min_open(p)), "U_{q} not inside U_{p}");
        }
    }
    let opens = s.opens();
    let closed = s.closed_sets();
    let all = subsets(s);
    for a in &all {
        let cl = s.closure(a);
        let int = s.interior(a);
        ensure!(int.is_subset_unchecked(a) && a.is_subset_unchecked(&cl), "int ⊆ A ⊆ cl fails");
        ensure!(s.closure(&cl) == cl, "closure not idempotent");
        ensure!(s.closure(&a.complement()).complement() == int, "interior is not dual to closure");
        let mut meet = s.full_set();
        for k in closed.iter().filter(|k| a.is_subset_unchecked(k)) {
            meet = meet.intersection_unchecked(k);
        }
        ensure!(meet == cl, "closure differs from the intersection of closed supersets");
        let mut join = s.empty_set();
        for o in opens.iter().filter(|o| o.is_subset_unchecked(a)) {
            join.union_with(o);
        }
        ensure!(join == int, "interior differs from the union of open subsets");
    }
    if n <= 4 {
        for a in &all {
            for b in &all {
                ensure!(
                    s.closure(&a.union_unchecked(b)) == s.closure(a).union_unchecked(&s.closure(b)),
                    "closure does not commute with union"
                );
            }
        }
    }
    // Separation axioms by brute force over opens and closed sets.
    let nbhd = |p: usize| opens.iter().filter(move |o| o.contains(p));
    let mut t0 = true;
    let mut hausdorff = true;
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            if !nbhd(p).any(|o| !o.contains(q)) && !nbhd(q).any(|o| !o.contains(p)) {
                t0 = false;
            }
            if !nbhd(p).any(|u| nbhd(q).any(|v| !u.intersects_unchecked(v))) {
                hausdorff = false;
            }
        }
    }
    let mut regular = true;
    for k in &closed {
        for p in (0..n).filter(|&p| !k.contains(p)) {
            let separated = nbhd(p).any(|u| {
                opens
                    .iter()
                    .any(|v| k.is_subset_unchecked(v) && !u.intersects_unchecked(v))
            });
            regular &= separated;
        }
    }
    let flags = s.separation_flags();
    ensure!(flags.t0 == t0, "t0 flag {} but brute force {t0}", flags.t0);
    ensure!(flags.hausdorff == hausdorff, "hausdorff flag {} but brute force {hausdorff}", flags.hausdorff);
    ensure!(flags.regular == regular, "regular flag {} but brute force {regular}", flags.regular);
    ensure!(hausdorff == s.is_discrete(), "Hausdorff but not discrete, or the reverse");
    Ok(Outcome::Pass)
}

fn check_map_oracles(c: &Case, _cfg: &SuiteConfig) -> Check {
    let f = &c.maps[0];
    let cont = f.is_continuous(None).holds();
    ensure!(cont == f.is_continuous_by_opens(), "continuity checks disagree");
    let closed = f.is_closed_map();
    ensure!(closed == f.is_closed_map_by_closed_sets(), "closed-map checks disagree");
    let inv = inverse_image_multifunction(f);
    ensure!(inv.is_usc(None).holds() == closed, "f⁻¹ u.s.c. is {} but f closed is {closed}", !closed);
    if cont && f.codomain().is_discrete() {
        ensure!(closed, "continuous map into a discrete space is not closed");
    }
    Ok(Outcome::Pass)
}

fn ex_space_pairs(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    let spaces = spaces_upto(cfg.exhaustive_max);
    for x in &spaces {
        for y in &spaces {
            emit(Case::new(vec![x.clone(), y.clone()], vec![], vec![]));
        }
    }
}

fn check_cardinality(c: &Case, _cfg: &SuiteConfig) -> Check {
    let (x, y) = (&c.spaces[0], &c.spaces[1]);
    let fast = lib(split_homeomorphic(x, y))?.is_some();
    let brute = maps_between(x, y).iter().any(is_split_homeo);
    ensure!(fast == brute, "cardinality test {fast}, search over all maps {brute}");
    ensure!(fast == (x.len() == y.len()), "split homeomorphy differs from equal cardinality");
    Ok(Outcome::Pass)
}

fn ex_graph_ops(cfg: &SuiteConfig, emit: &mut dyn FnMut(Case)) {
    let spaces = spaces_upto(cfg.exhaustive_max.min(2));
    for x in &spaces {
        for y in &spaces {
            let fs = multimaps_between(x, y, false);
            let hs = multimaps_between(y, x, false);
            for (i, f) in fs.iter().enumerate() {
                let g = &fs[(i * 7 + 3) % fs.len()];
                let h = &hs[(i * 5 + 1) % hs.len()];
                emit(Case::new(vec![x.clone(), y.clone()], vec![], vec![f.clone(), g.clone(), h.clone()]));
            }
        }
    }
}

fn rand_graph_ops(rng: &mut ChaCha8Rng) -> Case {
    let x = rspace(rng, 4);
    let y = rspace(rng, 4);
    let f = random_multimap_in(rng, &x, &y, true);
    let g = random_multimap_in(rng, &x, &y, true);
    let h = random_multimap_in(rng, &y, &x, true);
    Case::new(vec![x, y], vec![], vec![f, g, h])
}

fn check_graph_ops(c: &Case, cfg: &SuiteConfig) -> Check {
    let (f, g, h) = (&c.multimaps[0], &c.multimaps[1], &c.multimaps[2]);
    let (x, y) = (f.domain(), f.codomain());
    let u = lib(f.combine(g, CombineMode::Union))?;
    let (prod, gf, _) = f.graph_and_closure();
    ensure!(u.graph_in(&prod) == gf.union_unchecked(&g.graph_in(&prod)), "gr(F ∪ G) ≠ gr F ∪ gr G");
    let hf = lib(f.then(h))?;
    for a in 0..x.len() {
        for b in 0..x.len() {
            let related = f.value(a).iter().any(|m| h.value(m).contains(b));
            ensure!(hf.value(a).contains(b) == related, "gr(H∘F) differs from the relational composite at ({a},{b})");
        }
    }
    if f.is_nonempty() {
        let sel = lib(f.selections(cfg.selection_cap))?;
        let expected = f.selection_count();
        let mut count = 0u128;
        for s in sel {
            ensure!(f.contains_selection(&s), "selection leaves gr F");
            count += 1;
        }
        ensure!(count == expected, "{count} selections, expected {expected}");
    }
    let _ = y;
    Ok(Outcome::Pass)
}

fn check_noop(_c: &Case, _cfg: &SuiteConfig) -> Check {
    Ok(Outcome::Pass)
}

fn registry() -> Vec<Property> {
    macro_rules! p {
        ($name:expr, $claim:expr, $ex:expr, $rand:expr, $check:expr) => {
            Property {
                name: $name,
                claim: $claim,
                exhaustive: $ex,
                random: $rand,
                check: $check,
                noop: None,
            }
        };
    }
    vec![
        p!("P_ev_agree", "fast and definitional extended-value checks agree",
           Some(ex_maps_cfg), Some(rand_map_5), check_ev_agree),
        p!("P_reduction", "a set satisfying condition (b) contains a set of extended values",
           Some(ex_maps_cfg), Some(rand_map_5), check_reduction),
        p!("P_fp_inclusion", "adding f(p) to a set of extended values keeps it one",
           Some(ex_maps_cfg), Some(rand_map_5), check_fp_inclusion),
        p!("P_interval", "sets between two sets of extended values are sets of extended values",
           Some(ex_maps_cfg), Some(rand_map_5), check_interval),
        p!("P_unique", "Hausdorff codomain: the set of extended values is unique and equals X_p",
           Some(ex_maps_discrete_cfg), Some(rand_map_discrete_6), check_unique),
        p!("P_compose", "the composite candidate satisfies condition (b) for g∘f",
           Some(ex_compose), Some(rand_compose), check_compose),
        p!("P_xp", "X_p is the intersection of cl f(U) and the condition (a) point set",
           Some(ex_maps_cfg), Some(rand_map_5), check_xp),
        p!("P_star_usc", "f* is upper semicontinuous",
           Some(ex_maps_discrete_cfg), Some(rand_map_discrete_6), check_star_usc),
        p!("P_star_usco_closed", "f* is usco with closed graph and f(p) ∈ f*(p)",
           Some(ex_maps_discrete_cfg), Some(rand_map_discrete_6), check_star_usco_closed),
        p!("P_graph", "cl(gr f) = gr(f*)",
           Some(ex_maps_discrete_cfg), Some(rand_map_discrete_6), check_graph),
        p!("P_proj_closed", "the first projection restricted to gr(f*) is closed",
           Some(ex_maps_discrete_cfg), Some(rand_map_discrete_6), check_proj_closed),
        p!("P_finusc", "non-empty finite u.s.c. multifunctions are pre-multi-split, certified by F(p)",
           Some(ex_multimaps_ne2), Some(rand_usc), check_finusc),
        p!("P_tilde_z", "Z~_p contains X_p of every selection",
           Some(ex_multimaps_ne2), Some(rand_multimap), check_tilde_z),
        p!("P_star_pms", "f* is pre-multi-split",
           Some(ex_maps_discrete_cfg), Some(rand_map_discrete_6), check_star_pms),
        p!("P_minusco", "every selection of a minimal usco map G has f* = G",
           Some(ex_minusco), Some(rand_minusco), check_minusco),
        p!("P_cont_iff", "continuous iff multi-split continuous with closed graph",
           Some(ex_maps_discrete_cfg), Some(rand_map_discrete_6), check_cont_iff),
        p!("P_fto", "fibers of the projection on cl(gr f) have size |f*(p)|",
           Some(ex_maps_discrete_cfg), Some(rand_map_discrete_6), check_fto),
        p!("P_union", "Z^f ∪ Z^g certifies every selection of f ∪ g",
           Some(ex_union), Some(rand_union), check_union),
        p!("P_sub_union", "submultifunctions and unions of pre-multi-split maps are pre-multi-split",
           Some(ex_sub_union), Some(rand_sub_union), check_sub_union),
        p!("P_invimg", "the inverse image of a closed surjection is pre-multi-split",
           Some(ex_maps_cfg), Some(rand_map_5), check_invimg),
        p!("P_quot", "p⁻¹ is pre-multi-split for finite classes with Hausdorff quotient",
           Some(ex_partitions), Some(rand_partition), check_quot),
        p!("P_quotient_space", "quotient opens are exactly the sets with open preimage",
           Some(ex_partitions), Some(rand_partition), check_quotient_space),
        p!("P_equiv6", "split homeomorphy is reflexive, symmetric and transitive",
           Some(ex_equiv6), Some(rand_equiv6), check_equiv6),
        p!("P_invstar", "(f⁻¹)*(y) is the transpose of gr(f*) at y",
           Some(ex_invstar), Some(rand_discrete_bijection), check_invstar),
        p!("P_equiv7", "cut-and-reglue data compose, reverse and validate",
           Some(ex_equiv7), Some(rand_equiv7), check_equiv7),
        p!("P_roundtrip", "split homeomorphism → reglue datum → split homeomorphism is the identity",
           Some(ex_invstar), Some(rand_discrete_bijection), check_roundtrip),
        p!("P_usc_oracle", "fast and definitional u.s.c. checks agree",
           Some(ex_multimaps_all2), Some(rand_multimap), check_usc_oracle),
        p!("P_closure_laws", "closure, interior, separation flags and minimal-open consistency",
           Some(ex_spaces), Some(rand_space), check_closure_laws),
        p!("P_map_oracles", "continuity, closedness and u.s.c. of f⁻¹ agree with their oracles",
           Some(ex_maps_cfg), Some(rand_map_5), check_map_oracles),
        p!("P_cardinality", "finite spaces are split homeomorphic iff equinumerous",
           Some(ex_space_pairs), None, check_cardinality),
        p!("P_graph_ops", "graphs of unions, composites and selections",
           Some(ex_graph_ops), Some(rand_graph_ops), check_graph_ops),
        Property {
            name: "P_compactness",
            claim: "split homeomorphisms preserve compactness",
            exhaustive: None,
            random: None,
            check: check_noop,
            noop: Some("every finite space is compact and every constructed space is finite"),
        },
        Property {
            name: "P_subcontinuity",
            claim: "multifunctions between finite spaces are subcontinuous",
            exhaustive: None,
            random: None,
            check: check_noop,
            noop: Some("every net in a finite space has a cluster point"),
        },
    ]
}

/// Names of all registered properties, in run order.
pub fn property_names() -> Vec<&'static str> {
    registry().iter().map(|p| p.name).collect()
}

fn find(name: &str) -> Result<Property> {
    registry()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownProperty(name.to_string()))
}

fn fnv(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of random trial `i` of `name` under the suite seed.
pub fn trial_seed(seed: u64, name: &str, i: u64) -> u64 {
    let mut z = seed ^ fnv(name.as_bytes()) ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn run_property(name: &str, mode: Mode, cfg: &SuiteConfig) -> Result<PropertyResult> {
    let prop = find(name)?;
    let start = Instant::now();
    let mut trials = 0u64;
    let mut skipped = 0u64;
    let mut failures = Vec::new();
    let check = prop.check;
    let mut run = |case: Case, seed: Option<u64>| {
        trials += 1;
        match check(&case, cfg) {
            Ok(Outcome::Pass) => {}
            Ok(Outcome::Skip) => skipped += 1,
            Err(detail) => failures.push(FailureRecord {
                seed,
                case: case.to_data(),
                detail,
            }),
        }
    };
    if prop.noop.is_none() {
        if matches!(mode, Mode::Exhaustive | Mode::Both) {
            if let Some(ex) = prop.exhaustive {
                ex(cfg, &mut |c| run(c, None));
            }
        }
        if matches!(mode, Mode::Random | Mode::Both) {
            if let Some(gen) = prop.random {
                for i in 0..cfg.trials {
                    let s = trial_seed(cfg.seed, name, i);
                    let mut rng = ChaCha8Rng::seed_from_u64(s);
                    run(gen(&mut rng), Some(s));
                }
            }
        }
    }
    failures.sort();
    Ok(PropertyResult {
        name: prop.name.to_string(),
        claim: prop.claim.to_string(),
        trials,
        skipped,
        failures,
        elapsed: start.elapsed(),
        note: prop.noop.map(str::to_string),
    })
}

/// Every registered property in both modes. With `trials = 0` only the
/// exhaustive part runs.
pub fn run_all(cfg: &SuiteConfig) -> Vec<PropertyResult> {
    property_names()
        .into_iter()
        .map(|n| run_property(n, Mode::Both, cfg).expect("registered name"))
        .collect()
}

/// Regenerates the case of a random trial from its seed.
pub fn regenerate(name: &str, seed: u64) -> Result<CaseData> {
    let prop = find(name)?;
    let gen = prop
        .random
        .ok_or_else(|| Error::UnknownProperty(format!("{name} has no random generator")))?;
    Ok(gen(&mut ChaCha8Rng::seed_from_u64(seed)).to_data())
}

/// Re-runs a recorded case. Returns `Some(detail)` if it still fails.
pub fn replay(name: &str, record: &FailureRecord, cfg: &SuiteConfig) -> Result<Option<String>> {
    let prop = find(name)?;
    let case = Case::from_data(&record.case)?;
    Ok((prop.check)(&case, cfg).err())
}
