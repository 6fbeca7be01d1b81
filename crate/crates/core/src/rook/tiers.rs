//! Tiered solvability on the rook's graph.
//!
//! Each tier is a [`SolverTier`] registered by name in a [`TierRegistry`]; a
//! [`TieredSolver`] runs a chosen list of tiers in order and the first tier with
//! an opinion wins. Tiers only ever return sound answers, so a root no tier can
//! decide is reported as unknown rather than guessed.
//!
//! | name       | decides                                                         |
//! |------------|-----------------------------------------------------------------|
//! | `police`   | solvable for every root: a robocop or a police component exists |
//! | `direct`   | solvable: the root is occupied or a cop sees it                 |
//! | `weight`   | unsolvable: distance weight of the root below one               |
//! | `lone-cop` | both ways, exactly, when there is at most one cop and no robocop |
//! | `exact`    | both ways by exhaustive search on small grids, within a budget  |

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::census::Census;
use super::plan::{direct_plan, lone_cop_plan, police_plan, robocop_plan, CatchPlan};
use super::{GridVertex, RookConfig};
use crate::error::{Error, Result};
use crate::exact::{ExactSolver, DEFAULT_STATE_BUDGET};

/// Tier order used when none is configured.
pub const DEFAULT_TIER_ORDER: &[&str] = &["police", "direct", "weight", "lone-cop", "exact"];

/// Answer of one tier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Solvable(Option<CatchPlan>),
    /// unsolvable, with a root that cannot be reached
    Unsolvable(GridVertex),
}

/// One strategy for deciding solvability.
pub trait SolverTier: Send + Sync {
    fn name(&self) -> &'static str;

    /// A decision covering all roots at once, if this tier can give one cheaply.
    fn decide_all(&self, _census: &Census<'_>) -> Option<Decision> {
        None
    }

    /// Decision for a single root; `want_plan` asks for a catch plan on success.
    fn decide_root(
        &self,
        census: &Census<'_>,
        root: GridVertex,
        want_plan: bool,
    ) -> Option<Decision>;
}

/// Knobs shared by tier factories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TierOptions {
    /// largest vertex count handed to the exhaustive search
    pub exact_max_vertices: usize,
    /// state budget per root for the exhaustive search
    pub exact_budget: usize,
}

impl Default for TierOptions {
    fn default() -> Self {
        Self {
            exact_max_vertices: 16,
            exact_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

type TierFactory = Box<dyn Fn(&TierOptions) -> Box<dyn SolverTier> + Send + Sync>;

/// Name-keyed tier factories.
pub struct TierRegistry {
    factories: BTreeMap<&'static str, TierFactory>,
}

impl Default for TierRegistry {
    fn default() -> Self {
        let mut registry = Self::empty();
        registry.register("police", |_| Box::new(PoliceTier));
        registry.register("direct", |_| Box::new(DirectTier));
        registry.register("weight", |_| Box::new(WeightTier));
        registry.register("lone-cop", |_| Box::new(LoneCopTier));
        registry.register("exact", |o| {
            Box::new(ExactTier {
                max_vertices: o.exact_max_vertices,
                budget: o.exact_budget,
            })
        });
        registry
    }
}

impl TierRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register<F>(&mut self, name: &'static str, factory: F)
    where
        F: Fn(&TierOptions) -> Box<dyn SolverTier> + Send + Sync + 'static,
    {
        self.factories.insert(name, Box::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }

    pub fn create(&self, name: &str, options: &TierOptions) -> Result<Box<dyn SolverTier>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "solver tier",
                name: name.to_string(),
                known: self.names().collect::<Vec<_>>().join(", "),
            })?;
        Ok(factory(options))
    }
}

/// Outcome of the tiered solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Solvable {
        tier: &'static str,
        plan: Option<CatchPlan>,
    },
    Unsolvable {
        tier: &'static str,
        root: GridVertex,
    },
    /// no tier decided `unresolved` of the roots, and none was refuted
    Unknown { unresolved: usize },
}

impl Verdict {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Verdict::Solvable { .. })
    }

    pub fn is_unsolvable(&self) -> bool {
        matches!(self, Verdict::Unsolvable { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn tier(&self) -> &'static str {
        match self {
            Verdict::Solvable { tier, .. } | Verdict::Unsolvable { tier, .. } => tier,
            Verdict::Unknown { .. } => "none",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&VerdictJson::from(self)).expect("plain struct serializes")
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Solvable { tier, .. } => write!(f, "solvable ({tier})"),
            Verdict::Unsolvable { tier, root } => write!(f, "unsolvable at {root} ({tier})"),
            Verdict::Unknown { unresolved } => write!(f, "unknown ({unresolved} roots undecided)"),
        }
    }
}

/// Wire form: `{"verdict": "solvable"|"unsolvable"|"unknown", "tier": name, "plan": [[r1,c1,r2,c2], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub verdict: String,
    pub tier: String,
    pub plan: CatchPlan,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<(usize, usize)>,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        let (verdict, plan, root) = match v {
            Verdict::Solvable { plan, .. } => ("solvable", plan.clone().unwrap_or_default(), None),
            Verdict::Unsolvable { root, .. } => (
                "unsolvable",
                CatchPlan::default(),
                Some((root.row, root.col)),
            ),
            Verdict::Unknown { .. } => ("unknown", CatchPlan::default(), None),
        };
        Self {
            verdict: verdict.to_string(),
            tier: v.tier().to_string(),
            plan,
            root,
        }
    }
}

/// Runs tiers in order.
pub struct TieredSolver {
    tiers: Vec<Box<dyn SolverTier>>,
}

impl Default for TieredSolver {
    fn default() -> Self {
        Self::from_names(
            &TierRegistry::default(),
            DEFAULT_TIER_ORDER,
            &TierOptions::default(),
        )
        .expect("default tiers are registered")
    }
}

impl TieredSolver {
    pub fn new(tiers: Vec<Box<dyn SolverTier>>) -> Self {
        Self { tiers }
    }

    pub fn with_options(options: &TierOptions) -> Self {
        Self::from_names(&TierRegistry::default(), DEFAULT_TIER_ORDER, options)
            .expect("default tiers are registered")
    }

    pub fn from_names<S: AsRef<str>>(
        registry: &TierRegistry,
        names: &[S],
        options: &TierOptions,
    ) -> Result<Self> {
        let tiers = names
            .iter()
            .map(|n| registry.create(n.as_ref(), options))
            .collect::<Result<_>>()?;
        Ok(Self { tiers })
    }

    pub fn tier_names(&self) -> Vec<&'static str> {
        self.tiers.iter().map(|t| t.name()).collect()
    }

    /// Verdict for one root (with a plan when the deciding tier can build one),
    /// or, when `root` is `None`, for all roots together.
    pub fn solve(&self, config: &RookConfig, root: Option<GridVertex>) -> Verdict {
        let census = Census::new(config);
        match root {
            Some(root) => self.solve_root(&census, root),
            None => self.solve_all(&census),
        }
    }

    fn solve_root(&self, census: &Census<'_>, root: GridVertex) -> Verdict {
        for tier in &self.tiers {
            match tier.decide_root(census, root, true) {
                Some(Decision::Solvable(plan)) => {
                    return Verdict::Solvable {
                        tier: tier.name(),
                        plan,
                    }
                }
                Some(Decision::Unsolvable(root)) => {
                    return Verdict::Unsolvable {
                        tier: tier.name(),
                        root,
                    }
                }
                None => {}
            }
        }
        Verdict::Unknown { unresolved: 1 }
    }

    fn solve_all(&self, census: &Census<'_>) -> Verdict {
        for tier in &self.tiers {
            match tier.decide_all(census) {
                Some(Decision::Solvable(_)) => {
                    return Verdict::Solvable {
                        tier: tier.name(),
                        plan: None,
                    }
                }
                Some(Decision::Unsolvable(root)) => {
                    return Verdict::Unsolvable {
                        tier: tier.name(),
                        root,
                    }
                }
                None => {}
            }
        }
        let mut unresolved = 0;
        let mut deciding: Option<&'static str> = None;
        let mut mixed = false;
        for root in census.config().graph().vertices() {
            let decided = self
                .tiers
                .iter()
                .find_map(|t| t.decide_root(census, root, false).map(|d| (t.name(), d)));
            match decided {
                Some((name, Decision::Unsolvable(root))) => {
                    return Verdict::Unsolvable { tier: name, root }
                }
                Some((name, Decision::Solvable(_))) => {
                    mixed |= deciding.is_some_and(|d| d != name);
                    deciding.get_or_insert(name);
                }
                None => unresolved += 1,
            }
        }
        if unresolved > 0 {
            Verdict::Unknown { unresolved }
        } else {
            let tier = if mixed {
                "per-root"
            } else {
                deciding.unwrap_or("per-root")
            };
            Verdict::Solvable { tier, plan: None }
        }
    }
}

/// `solvable_tiered` with the default tiers.
pub fn solvable_tiered(config: &RookConfig, root: Option<GridVertex>) -> Verdict {
    TieredSolver::default().solve(config, root)
}

struct PoliceTier;

impl SolverTier for PoliceTier {
    fn name(&self) -> &'static str {
        "police"
    }

    fn decide_all(&self, census: &Census<'_>) -> Option<Decision> {
        (census.has_robocop() || census.has_police_component()).then_some(Decision::Solvable(None))
    }

    fn decide_root(
        &self,
        census: &Census<'_>,
        root: GridVertex,
        want_plan: bool,
    ) -> Option<Decision> {
        self.decide_all(census)?;
        let plan = want_plan.then(|| {
            direct_plan(census, root)
                .or_else(|| robocop_plan(census, root))
                .or_else(|| police_plan(census, root))
                .expect("a robocop or police component always yields a plan")
        });
        Some(Decision::Solvable(plan))
    }
}

struct DirectTier;

impl SolverTier for DirectTier {
    fn name(&self) -> &'static str {
        "direct"
    }

    /// Roots not caught directly are the empty cells of (rows without a cop) x
    /// (columns without a cop); none left means every root is caught.
    fn decide_all(&self, census: &Census<'_>) -> Option<Decision> {
        let n = census.n();
        let free_rows = (1..=n).filter(|&r| !census.row_has_cop(r)).count();
        let free_cols = (1..=n).filter(|&c| !census.col_has_cop(c)).count();
        let filled = census
            .occupied()
            .iter()
            .filter(|v| !census.row_has_cop(v.row) && !census.col_has_cop(v.col))
            .count();
        (free_rows * free_cols == filled).then_some(Decision::Solvable(None))
    }

    fn decide_root(
        &self,
        census: &Census<'_>,
        root: GridVertex,
        want_plan: bool,
    ) -> Option<Decision> {
        if !census.direct_catch(root) {
            return None;
        }
        Some(Decision::Solvable(if want_plan {
            direct_plan(census, root)
        } else {
            None
        }))
    }
}

/// On the rook's graph every vertex is at distance 0, 1 or 2 from the root, so
/// four times the weight is `t + R + C + c(root)` with `R`, `C` the pebbles in
/// the root's row and column.
struct WeightTier;

impl WeightTier {
    fn scaled_weight(census: &Census<'_>, root: GridVertex) -> u64 {
        census.total()
            + census.row_sum(root.row)
            + census.col_sum(root.col)
            + u64::from(census.count(root))
    }
}

impl SolverTier for WeightTier {
    fn name(&self) -> &'static str {
        "weight"
    }

    fn decide_root(
        &self,
        census: &Census<'_>,
        root: GridVertex,
        _want_plan: bool,
    ) -> Option<Decision> {
        (Self::scaled_weight(census, root) < 4).then_some(Decision::Unsolvable(root))
    }
}

/// With no robocop and at most one cop only one pebble is ever mobile: a cop
/// spends two pebbles to put one on a neighbour, which is a cop afterwards only
/// if it was a citizen. The relay therefore stays within the cop's component,
/// and a root is reachable iff it is occupied or seen by a member of that
/// component. With no cop at all no move exists.
struct LoneCopTier;

impl LoneCopTier {
    fn applies(census: &Census<'_>) -> bool {
        !census.has_robocop() && census.cops().len() <= 1
    }

    fn reach(census: &Census<'_>) -> (Vec<bool>, Vec<bool>) {
        match census.cops() {
            [cop] => census.component_lines(census.component_of(*cop)),
            _ => (vec![false; census.n()], vec![false; census.n()]),
        }
    }
}

impl SolverTier for LoneCopTier {
    fn name(&self) -> &'static str {
        "lone-cop"
    }

    fn decide_all(&self, census: &Census<'_>) -> Option<Decision> {
        if !Self::applies(census) {
            return None;
        }
        let (rows, cols) = Self::reach(census);
        let n = census.n();
        for r in (1..=n).filter(|&r| !rows[r - 1]) {
            for c in (1..=n).filter(|&c| !cols[c - 1]) {
                let v = GridVertex::new(r, c);
                if census.count(v) == 0 {
                    return Some(Decision::Unsolvable(v));
                }
            }
        }
        Some(Decision::Solvable(None))
    }

    fn decide_root(
        &self,
        census: &Census<'_>,
        root: GridVertex,
        want_plan: bool,
    ) -> Option<Decision> {
        if !Self::applies(census) {
            return None;
        }
        if census.count(root) > 0 {
            return Some(Decision::Solvable(want_plan.then(CatchPlan::default)));
        }
        let (rows, cols) = Self::reach(census);
        if rows[root.row - 1] || cols[root.col - 1] {
            let plan = if want_plan {
                lone_cop_plan(census, root)
            } else {
                None
            };
            Some(Decision::Solvable(plan))
        } else {
            Some(Decision::Unsolvable(root))
        }
    }
}

struct ExactTier {
    max_vertices: usize,
    budget: usize,
}

impl SolverTier for ExactTier {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn decide_root(
        &self,
        census: &Census<'_>,
        root: GridVertex,
        _want_plan: bool,
    ) -> Option<Decision> {
        let config = census.config();
        let rook = config.graph();
        if rook.vertex_count() > self.max_vertices {
            return None;
        }
        let graph = rook.to_simple_graph();
        let solver = ExactSolver::new(&graph).ok()?.with_budget(self.budget);
        match solver.root_solvable(config.config(), rook.index(root)) {
            Ok(true) => Some(Decision::Solvable(None)),
            Ok(false) => Some(Decision::Unsolvable(root)),
            Err(_) => None,
        }
    }
}
