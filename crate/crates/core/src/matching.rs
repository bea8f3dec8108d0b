//! Bipartite matchings between agents and items.
//!
//! An *envy-free* matching leaves no unmatched agent adjacent to a matched
//! item. The maximum one is obtained from any maximum matching by deleting
//! everything reachable from the unmatched agents along alternating paths.

use std::collections::VecDeque;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    items: usize,
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// `adjacency[a]` lists the items agent `a` is adjacent to.
    pub fn new(items: usize, mut adjacency: Vec<Vec<usize>>) -> Self {
        for adj in &mut adjacency {
            assert!(adj.iter().all(|&t| t < items), "item index out of range");
            adj.sort_unstable();
            adj.dedup();
        }
        BipartiteGraph { items, adjacency }
    }

    pub fn agents(&self) -> usize {
        self.adjacency.len()
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn neighbours(&self, agent: usize) -> &[usize] {
        &self.adjacency[agent]
    }

    pub fn has_edge(&self, agent: usize, item: usize) -> bool {
        self.adjacency[agent].binary_search(&item).is_ok()
    }
}

/// Set of `(agent, item)` pairs, sorted by agent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn item_of(&self, agent: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == agent).map(|p| p.1)
    }

    pub fn agent_of(&self, item: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.1 == item).map(|p| p.0)
    }

    /// No unmatched agent is adjacent to a matched item.
    pub fn is_envy_free(&self, g: &BipartiteGraph) -> bool {
        (0..g.agents())
            .filter(|&a| self.item_of(a).is_none())
            .all(|a| g.neighbours(a).iter().all(|&t| self.agent_of(t).is_none()))
    }

    fn from_slots(agent_item: &[Option<usize>]) -> Self {
        Matching {
            pairs: agent_item
                .iter()
                .enumerate()
                .filter_map(|(a, t)| t.map(|t| (a, t)))
                .collect(),
        }
    }
}

/// Maximum-cardinality matching by repeated augmenting-path search, agents
/// and items tried in increasing index order.
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    let mut item_agent: Vec<Option<usize>> = vec![None; g.items()];
    for a in 0..g.agents() {
        let mut seen = vec![false; g.items()];
        augment(g, a, &mut seen, &mut item_agent);
    }
    let mut agent_item = vec![None; g.agents()];
    for (t, a) in item_agent.iter().enumerate() {
        if let Some(a) = a {
            agent_item[*a] = Some(t);
        }
    }
    Matching::from_slots(&agent_item)
}

fn augment(g: &BipartiteGraph, a: usize, seen: &mut [bool], item_agent: &mut [Option<usize>]) -> bool {
    for &t in g.neighbours(a) {
        if seen[t] {
            continue;
        }
        seen[t] = true;
        let free = match item_agent[t] {
            None => true,
            Some(b) => augment(g, b, seen, item_agent),
        };
        if free {
            item_agent[t] = Some(a);
            return true;
        }
    }
    false
}

/// Maximum-cardinality envy-free matching.
pub fn max_envy_free_matching(g: &BipartiteGraph) -> Matching {
    let m = max_matching(g);
    let mut agent_item = vec![None; g.agents()];
    let mut item_agent = vec![None; g.items()];
    for &(a, t) in &m.pairs {
        agent_item[a] = Some(t);
        item_agent[t] = Some(a);
    }

    let mut removed_agent = vec![false; g.agents()];
    let mut removed_item = vec![false; g.items()];
    let mut queue: VecDeque<usize> = (0..g.agents()).filter(|&a| agent_item[a].is_none()).collect();
    for &a in &queue {
        removed_agent[a] = true;
    }
    while let Some(a) = queue.pop_front() {
        for &t in g.neighbours(a) {
            if removed_item[t] {
                continue;
            }
            removed_item[t] = true;
            if let Some(b) = item_agent[t] {
                if !removed_agent[b] {
                    removed_agent[b] = true;
                    queue.push_back(b);
                }
            }
        }
    }

    let kept: Vec<Option<usize>> = agent_item
        .iter()
        .enumerate()
        .map(|(a, t)| if removed_agent[a] { None } else { *t })
        .collect();
    Matching::from_slots(&kept)
}
