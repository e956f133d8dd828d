//! Junction-network construction.
//!
//! An instance compiles into a layered rectangular grid of waveguide
//! junctions, one block per element. Within block `i` (element `e`):
//!
//! * a **split** sits at row 0 of every column holding a partial sum of the
//!   previous blocks; its vertical arm continues the running sum unchanged
//!   (element excluded) while its diagonal arm adds `e` by drifting one
//!   column per row for `e` rows (element included);
//! * a **pass** marks every point where a diagonal crosses a live vertical
//!   line — the two streams traverse without mixing (up to crosstalk);
//! * a **converge** sits at row `e` where a diagonal lands, folding its
//!   stream back into the vertical direction and merging with the vertical
//!   line of the landing column when one exists.
//!
//! Columns therefore track partial sums exactly: after block `i` the live
//! columns are `P_i = P_{i-1} ∪ (P_{i-1} + e_i)`, and the network's output
//! ports are the achievable subset sums `P_N`.
//!
//! Nodes are stored sorted by `(block, row, col)`, which is also a
//! topological order: every edge points from a lower index to a higher one.

use serde::{Deserialize, Serialize};

use crate::ssp::SspInstance;
use crate::{Error, Result};

/// Which arm of a junction an edge carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Straight-down segment; the sum is unchanged along it.
    #[serde(rename = "v")]
    Vertical,
    /// Down-and-across segment; the sum grows by one per row along it.
    #[serde(rename = "d")]
    Diagonal,
}

/// Role of a node in the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JunctionKind {
    /// The single source feeding column 0 of the first block.
    Input,
    /// Unbalanced splitter: vertical arm excludes the element, diagonal includes it.
    Split,
    /// Waveguide crossing: vertical and diagonal streams traverse independently.
    Pass,
    /// Diagonal-to-vertical fold, merging with the vertical line when present.
    Converge,
    /// Read-out port at the bottom of a live column.
    Output,
    /// Explicit dump for diverted light; never emitted by the builder, which
    /// ledgers diverted power instead of routing it.
    LossSink,
}

/// One junction, addressed by grid position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    /// Block index: 0 for the input, `1..=N` for element blocks, `N+1` for ports.
    pub block: u32,
    /// Row within the block, `0..=e_i`.
    pub row: u64,
    /// Column, equal to the partial sum this position represents.
    pub col: u64,
    /// What sits at this position.
    pub kind: JunctionKind,
}

/// A directed waveguide segment between two junctions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Index of the upstream node.
    pub from: u32,
    /// Index of the downstream node.
    pub to: u32,
    /// Whether the segment runs vertically or diagonally.
    pub branch: Branch,
    /// Rows descended along the segment; drives per-length loss.
    #[serde(skip)]
    pub span_rows: u64,
}

/// Edge slots of one node: at most one edge per arm and direction.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NodeIo {
    pub(crate) in_v: Option<u32>,
    pub(crate) in_d: Option<u32>,
    pub(crate) out_v: Option<u32>,
    pub(crate) out_d: Option<u32>,
}

/// Headline sizes of a built network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkStats {
    /// Split junctions; equals the sum of live-column counts entering each block.
    pub n_split: usize,
    /// Pass junctions (waveguide crossings).
    pub n_pass: usize,
    /// Converge junctions; one per diagonal, so equal to `n_split`.
    pub n_converge: usize,
    /// Output ports, one per achievable subset sum.
    pub n_ports: usize,
    /// Total rows descended from input to ports: the element total.
    pub depth: u64,
}

/// The compiled junction network for one instance.
#[derive(Debug, Clone)]
pub struct JunctionNetwork {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    io: Vec<NodeIo>,
    partial_sums: Vec<Vec<u64>>,
    output_ports: Vec<u64>,
    elements: Vec<u64>,
}

/// Serialization form of a network: nodes, edges, and port columns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkExport {
    /// All junctions, in topological order.
    pub nodes: Vec<Node>,
    /// All segments, as index pairs with their branch label.
    pub edges: Vec<Edge>,
    /// Output port columns, ascending.
    pub ports: Vec<u64>,
}

/// The partial-sum layers `P_0..=P_N`, each sorted ascending.
///
/// `P_0 = {0}` and `P_i = P_{i-1} ∪ (P_{i-1} + e_i)`; the final layer is the
/// set of achievable subset sums.
pub fn partial_sum_layers(inst: &SspInstance) -> Vec<Vec<u64>> {
    let mut layers = Vec::with_capacity(inst.size() + 1);
    layers.push(vec![0u64]);
    for &e in inst.elements() {
        let prev = layers.last().expect("at least P_0");
        let mut next = Vec::with_capacity(prev.len() * 2);
        // Sorted merge of `prev` and `prev + e`, dropping duplicates.
        let (mut a, mut b) = (0usize, 0usize);
        while a < prev.len() || b < prev.len() {
            let low = match (prev.get(a), prev.get(b)) {
                (Some(&x), Some(&y)) => x.min(y + e),
                (Some(&x), None) => x,
                (None, Some(&y)) => y + e,
                (None, None) => unreachable!(),
            };
            if a < prev.len() && prev[a] == low {
                a += 1;
            }
            if b < prev.len() && prev[b] + e == low {
                b += 1;
            }
            next.push(low);
        }
        layers.push(next);
    }
    layers
}

/// Compiles an instance into its junction network.
pub fn build_network(inst: &SspInstance) -> JunctionNetwork {
    let total = inst.total() as usize;
    let layers = partial_sum_layers(inst);

    let mut nodes: Vec<Node> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut io: Vec<NodeIo> = Vec::new();

    let add_node = |nodes: &mut Vec<Node>, io: &mut Vec<NodeIo>, node: Node| -> u32 {
        nodes.push(node);
        io.push(NodeIo::default());
        (nodes.len() - 1) as u32
    };
    let add_edge =
        |edges: &mut Vec<Edge>, io: &mut Vec<NodeIo>, from: u32, to: u32, branch: Branch, span_rows: u64| {
            let idx = edges.len() as u32;
            edges.push(Edge { from, to, branch, span_rows });
            match branch {
                Branch::Vertical => {
                    debug_assert!(io[from as usize].out_v.is_none(), "vertical arm reused");
                    debug_assert!(io[to as usize].in_v.is_none(), "vertical slot reused");
                    io[from as usize].out_v = Some(idx);
                    io[to as usize].in_v = Some(idx);
                }
                Branch::Diagonal => {
                    debug_assert!(io[from as usize].out_d.is_none(), "diagonal arm reused");
                    debug_assert!(io[to as usize].in_d.is_none(), "diagonal slot reused");
                    io[from as usize].out_d = Some(idx);
                    io[to as usize].in_d = Some(idx);
                }
            }
        };

    let input = add_node(&mut nodes, &mut io, Node { block: 0, row: 0, col: 0, kind: JunctionKind::Input });

    // For each live column: the node currently feeding the bottom of the
    // block just finished, plus the rows still to descend to reach it.
    let mut bottom: Vec<Option<(u32, u64)>> = vec![None; total + 1];
    bottom[0] = Some((input, 0));

    // Column membership and rank within the current `prev` layer.
    let mut member = vec![false; total + 1];
    let mut rank = vec![0u32; total + 1];

    for (bi, &e) in inst.elements().iter().enumerate() {
        let block = (bi + 1) as u32;
        let prev = &layers[bi];

        member.iter_mut().for_each(|m| *m = false);
        for (j, &x) in prev.iter().enumerate() {
            member[x as usize] = true;
            rank[x as usize] = j as u32;
        }

        // Splits along row 0, then per-column and per-diagonal chain tails.
        let mut last_v: Vec<(u32, u64)> = Vec::with_capacity(prev.len());
        let mut last_d: Vec<(u32, u64)> = Vec::with_capacity(prev.len());
        for &x in prev {
            let split =
                add_node(&mut nodes, &mut io, Node { block, row: 0, col: x, kind: JunctionKind::Split });
            let (src, pending) = bottom[x as usize].expect("live column has a source");
            add_edge(&mut edges, &mut io, src, split, Branch::Vertical, pending);
            last_v.push((split, 0));
            last_d.push((split, 0));
        }

        // Crossings: a diagonal launched at column c-k crosses the vertical
        // line at column c on row k, for every live pair k rows apart.
        for k in 1..e {
            for (j, &c) in prev.iter().enumerate() {
                if c < k || !member[(c - k) as usize] {
                    continue;
                }
                let pass =
                    add_node(&mut nodes, &mut io, Node { block, row: k, col: c, kind: JunctionKind::Pass });
                let jd = rank[(c - k) as usize] as usize;
                let (v_node, v_row) = last_v[j];
                let (d_node, d_row) = last_d[jd];
                add_edge(&mut edges, &mut io, v_node, pass, Branch::Vertical, k - v_row);
                add_edge(&mut edges, &mut io, d_node, pass, Branch::Diagonal, k - d_row);
                last_v[j] = (pass, k);
                last_d[jd] = (pass, k);
            }
        }

        // Landings: each diagonal folds back to vertical at row e, column x+e.
        let mut conv_nodes: Vec<u32> = Vec::with_capacity(prev.len());
        for (j, &x) in prev.iter().enumerate() {
            let y = x + e;
            let conv =
                add_node(&mut nodes, &mut io, Node { block, row: e, col: y, kind: JunctionKind::Converge });
            let (d_node, d_row) = last_d[j];
            add_edge(&mut edges, &mut io, d_node, conv, Branch::Diagonal, e - d_row);
            if y as usize <= total && member[y as usize] {
                let jv = rank[y as usize] as usize;
                let (v_node, v_row) = last_v[jv];
                add_edge(&mut edges, &mut io, v_node, conv, Branch::Vertical, e - v_row);
            }
            conv_nodes.push(conv);
        }

        // Hand the next block its per-column sources.
        let next = &layers[bi + 1];
        let mut fresh: Vec<Option<(u32, u64)>> = vec![None; total + 1];
        for &z in next {
            let src = if z >= e && member[(z - e) as usize] {
                // A diagonal lands here; its converge is the column's source.
                (conv_nodes[rank[(z - e) as usize] as usize], 0)
            } else {
                // Vertical line only; remaining rows of the block still apply.
                let j = rank[z as usize] as usize;
                let (v_node, v_row) = last_v[j];
                (v_node, e - v_row)
            };
            fresh[z as usize] = Some(src);
        }
        bottom = fresh;
    }

    // Read-out ports along the bottom edge.
    let ports_layer = layers.last().expect("at least P_0");
    let port_block = (inst.size() + 1) as u32;
    for &z in ports_layer {
        let out =
            add_node(&mut nodes, &mut io, Node { block: port_block, row: 0, col: z, kind: JunctionKind::Output });
        let (src, pending) = bottom[z as usize].expect("port column has a source");
        add_edge(&mut edges, &mut io, src, out, Branch::Vertical, pending);
    }

    JunctionNetwork {
        nodes,
        edges,
        io,
        output_ports: ports_layer.clone(),
        partial_sums: layers,
        elements: inst.elements().to_vec(),
    }
}

impl JunctionNetwork {
    /// All junctions, in topological `(block, row, col)` order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// All segments; every edge points from a lower node index to a higher one.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub(crate) fn io(&self) -> &[NodeIo] {
        &self.io
    }

    /// The partial-sum layers `P_0..=P_N` the network was built from.
    pub fn partial_sums(&self) -> &[Vec<u64>] {
        &self.partial_sums
    }

    /// Output port columns, ascending; exactly the achievable subset sums.
    pub fn output_ports(&self) -> &[u64] {
        &self.output_ports
    }

    /// The instance elements the network encodes.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// Index of the single input node.
    pub fn input_node(&self) -> u32 {
        0
    }

    /// Junction and port counts plus total depth.
    pub fn stats(&self) -> NetworkStats {
        let mut stats = NetworkStats {
            n_split: 0,
            n_pass: 0,
            n_converge: 0,
            n_ports: self.output_ports.len(),
            depth: self.elements.iter().sum(),
        };
        for node in &self.nodes {
            match node.kind {
                JunctionKind::Split => stats.n_split += 1,
                JunctionKind::Pass => stats.n_pass += 1,
                JunctionKind::Converge => stats.n_converge += 1,
                _ => {}
            }
        }
        stats
    }

    /// Snapshot for serialization.
    pub fn export(&self) -> NetworkExport {
        NetworkExport {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
            ports: self.output_ports.clone(),
        }
    }
}

impl NetworkExport {
    /// Serializes to the network file format.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    /// Parses the network file format, checking edge indices are in range.
    pub fn from_json(text: &str) -> Result<Self> {
        let export: NetworkExport =
            serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("network JSON: {e}")))?;
        let n = export.nodes.len() as u32;
        for edge in &export.edges {
            if edge.from >= n || edge.to >= n {
                return Err(Error::InvalidParams(format!(
                    "edge {} -> {} references a missing node",
                    edge.from, edge.to
                )));
            }
        }
        Ok(export)
    }

    /// Stats recomputed from the exported node list.
    pub fn stats(&self) -> NetworkStats {
        let mut n_split = 0;
        let mut n_pass = 0;
        let mut n_converge = 0;
        let mut depth = 0;
        for node in &self.nodes {
            match node.kind {
                JunctionKind::Split => n_split += 1,
                JunctionKind::Pass => n_pass += 1,
                JunctionKind::Converge => n_converge += 1,
                _ => {}
            }
            depth = depth.max(node.col);
        }
        NetworkStats { n_split, n_pass, n_converge, n_ports: self.ports.len(), depth }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssp::SubsetCountTable;

    fn net(elements: &[i64]) -> JunctionNetwork {
        build_network(&SspInstance::new(elements, None).unwrap())
    }

    /// Crossing count derived independently of the builder: within block `i`,
    /// one pass per ordered pair of live columns less than `e_i` apart.
    fn expected_passes(inst: &SspInstance) -> usize {
        let layers = partial_sum_layers(inst);
        inst.elements()
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let prev = &layers[i];
                let mut count = 0;
                for (a, &x) in prev.iter().enumerate() {
                    for &y in &prev[a + 1..] {
                        if y - x < e {
                            count += 1;
                        }
                    }
                }
                count
            })
            .sum()
    }

    #[test]
    fn partial_sums_follow_the_recurrence() {
        let inst = SspInstance::new(&[2, 5, 7, 9], None).unwrap();
        let layers = partial_sum_layers(&inst);
        assert_eq!(layers[0], vec![0]);
        assert_eq!(layers[1], vec![0, 2]);
        assert_eq!(layers[2], vec![0, 2, 5, 7]);
        // 2+5 and 7 collide: P_3 has 7 entries, not 8.
        assert_eq!(layers[3], vec![0, 2, 5, 7, 9, 12, 14]);
        assert_eq!(layers[4], vec![0, 2, 5, 7, 9, 11, 12, 14, 16, 18, 21, 23]);
    }

    #[test]
    fn ports_equal_achievable_sums() {
        for elements in [&[3i64, 7, 11][..], &[1, 2, 3], &[2, 5, 7, 9], &[4, 4, 4], &[5]] {
            let inst = SspInstance::new(elements, None).unwrap();
            let network = build_network(&inst);
            let oracle = SubsetCountTable::build(&inst).unwrap();
            assert_eq!(network.output_ports(), &oracle.achievable_sums()[..], "{elements:?}");
        }
    }

    #[test]
    fn junction_counts_match_layer_sizes() {
        // n_split = Σ |P_{i-1}|, one converge per split.
        let network = net(&[3, 7, 11]);
        let stats = network.stats();
        assert_eq!(stats.n_split, 1 + 2 + 4);
        assert_eq!(stats.n_converge, stats.n_split);
        assert_eq!(stats.n_pass, 7);
        assert_eq!(stats.n_ports, 8);
        assert_eq!(stats.depth, 21);

        let stats = net(&[3, 7, 9, 11]).stats();
        assert_eq!(stats.n_split, 1 + 2 + 4 + 8);
        assert_eq!(stats.n_ports, 16);

        // Collision case: |P_3| = 7 brings the split count to 14.
        let stats = net(&[2, 5, 7, 9]).stats();
        assert_eq!(stats.n_split, 1 + 2 + 4 + 7);
        assert_eq!(stats.n_ports, 12);

        let stats = net(&[5]).stats();
        assert_eq!(stats.n_split, 1);
        assert_eq!(stats.n_pass, 0);
        assert_eq!(stats.n_converge, 1);
        assert_eq!(stats.n_ports, 2);
        assert_eq!(stats.depth, 5);
    }

    #[test]
    fn pass_count_matches_pairwise_oracle() {
        for elements in [&[3i64, 7, 11][..], &[2, 5, 7, 9], &[1, 1, 1], &[6, 2, 3], &[2, 3, 5, 7, 11]] {
            let inst = SspInstance::new(elements, None).unwrap();
            let network = build_network(&inst);
            assert_eq!(network.stats().n_pass, expected_passes(&inst), "{elements:?}");
        }
    }

    #[test]
    fn node_order_is_topological() {
        let network = net(&[2, 5, 7, 9]);
        for edge in network.edges() {
            assert!(edge.from < edge.to, "edge {} -> {} goes backwards", edge.from, edge.to);
        }
        let mut keys: Vec<(u32, u64, u64)> =
            network.nodes().iter().map(|n| (n.block, n.row, n.col)).collect();
        let sorted = {
            let mut s = keys.clone();
            s.sort_unstable();
            s
        };
        assert_eq!(keys, sorted, "nodes not in (block, row, col) order");
        keys.dedup();
        assert_eq!(keys.len(), network.nodes().len(), "duplicate grid positions");
    }

    #[test]
    fn arm_wiring_matches_junction_roles() {
        let network = net(&[3, 7, 11]);
        for (idx, node) in network.nodes().iter().enumerate() {
            let io = network.io()[idx];
            let pat = (io.in_v.is_some(), io.in_d.is_some(), io.out_v.is_some(), io.out_d.is_some());
            match node.kind {
                JunctionKind::Input => assert_eq!(pat, (false, false, true, false)),
                JunctionKind::Split => assert_eq!(pat, (true, false, true, true)),
                JunctionKind::Pass => assert_eq!(pat, (true, true, true, true)),
                JunctionKind::Converge => {
                    assert!(io.in_d.is_some() && io.out_v.is_some() && io.out_d.is_none());
                }
                JunctionKind::Output => assert_eq!(pat, (true, false, false, false)),
                JunctionKind::LossSink => unreachable!("builder never emits sinks"),
            }
        }
    }

    #[test]
    fn export_round_trip_preserves_stats() {
        let network = net(&[2, 5, 7, 9]);
        let text = network.export().to_json();
        let back = NetworkExport::from_json(&text).unwrap();
        assert_eq!(back.stats(), network.stats());
        assert_eq!(back.ports, network.output_ports());
        // Kind and branch labels use the wire vocabulary.
        assert!(text.contains("\"split\"") && text.contains("\"pass\"") && text.contains("\"converge\""));
        assert!(text.contains("\"v\"") && text.contains("\"d\""));
        assert!(!text.contains("span_rows"));
    }

    #[test]
    fn bad_export_is_rejected() {
        let text = r#"{"nodes":[{"block":0,"row":0,"col":0,"kind":"input"}],
                       "edges":[{"from":0,"to":5,"branch":"v"}],"ports":[0]}"#;
        assert!(NetworkExport::from_json(text).is_err());
    }
}
