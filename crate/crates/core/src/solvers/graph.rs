use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::Instance;

/// Threshold graph on marked locations: `u ~ v` iff `u != v` and
/// `d(u, v) <= 2δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConflictGraph {
    nodes: Vec<usize>,
    /// Adjacency by position in `nodes`, each list ascending.
    adjacency: Vec<Vec<usize>>,
}

impl ConflictGraph {
    /// Location indices of the nodes, ascending.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Neighbours of the node at position `pos`, as positions.
    pub fn neighbors(&self, pos: usize) -> &[usize] {
        &self.adjacency[pos]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as location pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(move |(i, adj)| {
            adj.iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (self.nodes[i], self.nodes[j]))
        })
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match (self.nodes.binary_search(&u), self.nodes.binary_search(&v)) {
            (Ok(i), Ok(j)) => self.adjacency[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }
}

/// Builds the conflict graph at threshold `2δ` (closed comparison).
pub fn build_conflict_graph(
    inst: &Instance,
    marked: &[usize],
    delta: f64,
) -> Result<ConflictGraph> {
    if !(delta >= 0.0) {
        return Err(Error::param(format!("delta must be >= 0, got {delta}")));
    }
    let mut nodes = marked.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    if let Some(&bad) = nodes.iter().find(|&&v| v >= inst.len()) {
        return Err(Error::param(format!("marked location {bad} out of range")));
    }
    let metric = inst.metric();
    let threshold = 2.0 * delta;
    let adjacency = Exec::default().map_range(nodes.len(), |i| {
        let row = metric.row(nodes[i]);
        nodes
            .iter()
            .enumerate()
            .filter(|&(j, &v)| j != i && row[v] <= threshold)
            .map(|(j, _)| j)
            .collect()
    });
    Ok(ConflictGraph { nodes, adjacency })
}

/// Greedy maximal independent set.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependentSetResult {
    /// Selected locations in pick order.
    pub chosen: Vec<usize>,
    /// Every node in the order the greedy scan visited it.
    pub order: Vec<usize>,
}

impl IndependentSetResult {
    /// No two chosen nodes are adjacent.
    pub fn is_independent(&self, g: &ConflictGraph) -> bool {
        self.chosen
            .iter()
            .enumerate()
            .all(|(i, &u)| self.chosen[i + 1..].iter().all(|&v| !g.has_edge(u, v)))
    }

    /// Every node outside the set has a chosen neighbour.
    pub fn is_maximal(&self, g: &ConflictGraph) -> bool {
        g.nodes()
            .iter()
            .filter(|v| !self.chosen.contains(v))
            .all(|&v| self.chosen.iter().any(|&u| g.has_edge(u, v)))
    }
}

/// Scans nodes by ascending `(f, index)` and keeps each one none of whose
/// neighbours has been kept.
pub fn greedy_mis(g: &ConflictGraph, facility_costs: &[f64]) -> Result<IndependentSetResult> {
    if g.is_empty() {
        return Err(Error::param("conflict graph has no nodes"));
    }
    let mut positions: Vec<usize> = (0..g.len()).collect();
    positions.sort_by(|&a, &b| {
        let (u, v) = (g.nodes[a], g.nodes[b]);
        facility_costs[u]
            .total_cmp(&facility_costs[v])
            .then(u.cmp(&v))
    });
    let mut blocked = vec![false; g.len()];
    let mut chosen = Vec::new();
    for &pos in &positions {
        if blocked[pos] {
            continue;
        }
        chosen.push(g.nodes[pos]);
        blocked[pos] = true;
        for &nb in g.neighbors(pos) {
            blocked[nb] = true;
        }
    }
    Ok(IndependentSetResult {
        chosen,
        order: positions.into_iter().map(|p| g.nodes[p]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::fixtures::line;

    #[test]
    fn line_threshold() {
        let inst = line(&[0.0, 0.3, 0.6], &[1.0, 2.0, 3.0], &[1, 1, 1]);
        let g = build_conflict_graph(&inst, &[0, 1, 2], 0.2).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(!g.has_edge(0, 2));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn closed_threshold() {
        let inst = line(&[0.0, 0.5], &[1.0, 1.0], &[1, 1]);
        let g = build_conflict_graph(&inst, &[0, 1], 0.25).unwrap();
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn zero_delta_has_no_edges() {
        let inst = line(&[0.0, 0.1, 0.2, 0.9], &[1.0; 4], &[1; 4]);
        let g = build_conflict_graph(&inst, &[0, 1, 2, 3], 0.0).unwrap();
        assert_eq!(g.edge_count(), 0);
        let mis = greedy_mis(&g, inst.facility_costs()).unwrap();
        assert_eq!(mis.chosen, vec![0, 1, 2, 3]);
    }

    #[test]
    fn large_delta_is_complete() {
        let inst = line(&[0.0, 0.1, 0.2, 0.9], &[0.4, 0.3, 0.2, 0.5], &[1; 4]);
        let g = build_conflict_graph(&inst, &[3, 1, 0, 2], 0.45).unwrap();
        assert_eq!(g.edge_count(), 6);
        let mis = greedy_mis(&g, inst.facility_costs()).unwrap();
        assert_eq!(mis.chosen, vec![2]);
        assert_eq!(mis.order, vec![2, 1, 0, 3]);
    }

    #[test]
    fn path_picks_ends() {
        let inst = line(&[0.0, 0.3, 0.6], &[1.0, 2.0, 3.0], &[1, 1, 1]);
        let g = build_conflict_graph(&inst, &[0, 1, 2], 0.2).unwrap();
        let mis = greedy_mis(&g, inst.facility_costs()).unwrap();
        assert_eq!(mis.chosen, vec![0, 2]);
        assert!(mis.is_independent(&g));
        assert!(mis.is_maximal(&g));
    }

    #[test]
    fn cheap_middle_blocks_ends() {
        let inst = line(&[0.0, 0.3, 0.6], &[2.0, 1.0, 3.0], &[1, 1, 1]);
        let g = build_conflict_graph(&inst, &[0, 1, 2], 0.2).unwrap();
        assert_eq!(
            greedy_mis(&g, inst.facility_costs()).unwrap().chosen,
            vec![1]
        );
    }

    #[test]
    fn equal_costs_break_by_index() {
        let inst = line(&[0.0, 0.3], &[1.0, 1.0], &[1, 1]);
        let g = build_conflict_graph(&inst, &[1, 0], 0.2).unwrap();
        assert_eq!(
            greedy_mis(&g, inst.facility_costs()).unwrap().chosen,
            vec![0]
        );
    }

    #[test]
    fn errors() {
        let inst = line(&[0.0], &[1.0], &[1]);
        assert!(build_conflict_graph(&inst, &[0], -1.0).is_err());
        assert!(build_conflict_graph(&inst, &[3], 1.0).is_err());
        let empty = build_conflict_graph(&inst, &[], 1.0).unwrap();
        assert!(greedy_mis(&empty, inst.facility_costs()).is_err());
    }
}
