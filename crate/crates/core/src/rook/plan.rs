//! Constructive catch plans: explicit move sequences that put a pebble on a root.

use serde::{Deserialize, Serialize};

use super::census::Census;
use super::{GridVertex, RookConfig};
use crate::error::Result;

/// One pebbling move on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: GridVertex,
    pub to: GridVertex,
}

impl Move {
    pub const fn new(from: GridVertex, to: GridVertex) -> Self {
        Self { from, to }
    }
}

// [r1, c1, r2, c2] on the wire
impl Serialize for Move {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.from.row, self.from.col, self.to.row, self.to.col].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Move {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [r1, c1, r2, c2] = <[usize; 4]>::deserialize(d)?;
        Ok(Move::new(GridVertex::new(r1, c1), GridVertex::new(r2, c2)))
    }
}

/// An ordered move sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CatchPlan {
    pub moves: Vec<Move>,
}

impl CatchPlan {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Replays every move with full legality checks.
    pub fn replay(&self, config: &RookConfig) -> Result<RookConfig> {
        self.moves
            .iter()
            .try_fold(config.clone(), |c, &mv| c.apply_move(mv))
    }

    /// Replays and reports whether the root ends up occupied.
    pub fn catches(&self, config: &RookConfig, root: GridVertex) -> bool {
        self.replay(config).is_ok_and(|end| end.count(root) >= 1)
    }
}

impl From<Vec<Move>> for CatchPlan {
    fn from(moves: Vec<Move>) -> Self {
        Self { moves }
    }
}

/// A plan from the first sufficient condition that fires: direct catch, then a
/// robocop, then a police component. `None` when none applies.
pub fn catch_plan(config: &RookConfig, root: GridVertex) -> Option<CatchPlan> {
    let census = Census::new(config);
    direct_plan(&census, root)
        .or_else(|| robocop_plan(&census, root))
        .or_else(|| police_plan(&census, root))
}

/// Zero moves if the root is occupied, else one move from the smallest cop seeing it.
pub(crate) fn direct_plan(census: &Census<'_>, root: GridVertex) -> Option<CatchPlan> {
    if census.count(root) > 0 {
        return Some(CatchPlan::default());
    }
    census
        .cop_seeing(root)
        .map(|cop| vec![Move::new(cop, root)].into())
}

/// Two pebbles from the robocop to where its row meets the root's column, then one to the root.
pub(crate) fn robocop_plan(census: &Census<'_>, root: GridVertex) -> Option<CatchPlan> {
    let k = (0..census.occupied().len()).find(|&k| census.count_at(k) >= 4)?;
    let u = census.occupied()[k];
    if u == root {
        return Some(CatchPlan::default());
    }
    if u.shares_line(root) {
        return Some(vec![Move::new(u, root)].into());
    }
    let corner = GridVertex::new(u.row, root.col);
    let mut moves = vec![Move::new(u, corner)];
    if census.count(corner) == 0 {
        moves.push(Move::new(u, corner));
    }
    moves.push(Move::new(corner, root));
    Some(moves.into())
}

/// Police-component plan.
///
/// Take the smallest cop `a` lying in a police component and a shortest path
/// `a = v1, v2, ..., vk` to the nearest other cop. One pebble from `a` goes to
/// `a'`, where `a`'s line through `v2` meets the root's column (or row). Then
/// `vk` feeds `v(k-1)`, which becomes a cop and feeds the next, down to `a'`,
/// which finally feeds the root.
pub(crate) fn police_plan(census: &Census<'_>, root: GridVertex) -> Option<CatchPlan> {
    let start = census
        .cops()
        .iter()
        .copied()
        .find(|&k| census.components()[census.component_of(k)].cop_count >= 2)?;
    let path = census.shortest_path(start, |k| census.count_at(k) >= 2)?;
    let occ = census.occupied();
    let a = occ[path[0]];
    let b = occ[path[1]];
    if a.shares_line(root) {
        return Some(vec![Move::new(a, root)].into());
    }
    let relay = if a.row == b.row {
        GridVertex::new(a.row, root.col)
    } else {
        GridVertex::new(root.row, a.col)
    };
    let mut moves = vec![Move::new(a, relay)];
    if census.count(relay) == 0 {
        for i in (1..path.len()).rev() {
            let to = if i == 1 { relay } else { occ[path[i - 1]] };
            moves.push(Move::new(occ[path[i]], to));
        }
    }
    moves.push(Move::new(relay, root));
    Some(moves.into())
}

/// With exactly one cop, a single pebble can be relayed along citizens of the
/// cop's component; the root is reachable iff some member sees it.
pub(crate) fn lone_cop_plan(census: &Census<'_>, root: GridVertex) -> Option<CatchPlan> {
    if census.count(root) > 0 {
        return Some(CatchPlan::default());
    }
    let &[cop] = census.cops() else { return None };
    let occ = census.occupied();
    if occ[cop].shares_line(root) {
        return Some(vec![Move::new(occ[cop], root)].into());
    }
    let path = census.shortest_path(cop, |k| occ[k].shares_line(root))?;
    let mut moves: Vec<Move> = path
        .windows(2)
        .map(|w| Move::new(occ[w[0]], occ[w[1]]))
        .collect();
    moves.push(Move::new(occ[*path.last().expect("non-empty path")], root));
    Some(moves.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rook::RookGraph;
    use crate::space::sample_configuration;

    fn v(r: usize, c: usize) -> GridVertex {
        GridVertex::new(r, c)
    }

    #[test]
    fn chain_plan_matches_cascade() {
        let chain =
            RookConfig::from_pebbles(3, &[(v(1, 1), 2), (v(1, 2), 1), (v(3, 2), 2)]).unwrap();
        let plan = catch_plan(&chain, v(2, 3)).unwrap();
        assert_eq!(
            plan.moves,
            vec![
                Move::new(v(1, 1), v(1, 3)),
                Move::new(v(3, 2), v(1, 2)),
                Move::new(v(1, 2), v(1, 3)),
                Move::new(v(1, 3), v(2, 3)),
            ]
        );
        let end = plan.replay(&chain).unwrap();
        assert!(end.count(v(2, 3)) >= 1);
    }

    #[test]
    fn direct_and_robocop_plans() {
        let c = RookConfig::from_pebbles(4, &[(v(2, 4), 2)]).unwrap();
        let plan = catch_plan(&c, v(2, 1)).unwrap();
        assert_eq!(plan.moves, vec![Move::new(v(2, 4), v(2, 1))]);

        let occupied_root = RookConfig::from_pebbles(4, &[(v(3, 3), 1)]).unwrap();
        assert!(catch_plan(&occupied_root, v(3, 3)).unwrap().is_empty());

        let robo = RookConfig::from_pebbles(4, &[(v(1, 1), 4)]).unwrap();
        let plan = catch_plan(&robo, v(3, 2)).unwrap();
        assert_eq!(plan.len(), 3);
        assert!(plan.catches(&robo, v(3, 2)));
        // the corner (1,2) already holds a pebble: one relay move is enough
        let robo = RookConfig::from_pebbles(4, &[(v(1, 1), 4), (v(1, 2), 1)]).unwrap();
        let plan = catch_plan(&robo, v(3, 2)).unwrap();
        assert_eq!(plan.len(), 2);
        assert!(plan.catches(&robo, v(3, 2)));
    }

    #[test]
    fn no_sufficient_condition_means_no_plan() {
        let apart = RookConfig::from_pebbles(3, &[(v(1, 1), 2), (v(2, 2), 2)]).unwrap();
        assert!(catch_plan(&apart, v(3, 3)).is_none());
        assert!(catch_plan(&RookConfig::empty(3).unwrap(), v(1, 1)).is_none());
    }

    #[test]
    fn move_wire_format() {
        let plan: CatchPlan = vec![Move::new(v(1, 2), v(3, 2))].into();
        assert_eq!(serde_json::to_string(&plan).unwrap(), "[[1,2,3,2]]");
        let back: CatchPlan = serde_json::from_str("[[1,2,3,2]]").unwrap();
        assert_eq!(back, plan);
    }

    #[test]
    fn emitted_plans_replay() {
        let mut emitted = 0;
        for seed in 0..3000u64 {
            let n = 2 + (seed % 7) as usize;
            let t = 1 + seed % (3 * n as u64);
            let g = RookGraph::new(n).unwrap();
            let config = RookConfig::new(g, sample_configuration(n * n, t, seed).unwrap()).unwrap();
            for root in g.vertices() {
                if let Some(plan) = catch_plan(&config, root) {
                    emitted += 1;
                    assert!(
                        plan.catches(&config, root),
                        "{config:?} root {root} plan {plan:?}"
                    );
                }
                let census = Census::new(&config);
                if let Some(plan) = lone_cop_plan(&census, root) {
                    assert!(
                        plan.catches(&config, root),
                        "{config:?} root {root} plan {plan:?}"
                    );
                }
            }
        }
        assert!(emitted > 1000);
    }
}
