//! Graph-based structural monotonicity analysis.
//!
//! The directed SR-graph records how species and reactions influence each
//! other; collapsing its species nodes yields the signed R-graph on
//! reactions. A consistent labeling of the R-graph (every cycle carries an
//! even number of negative edges) certifies orthant monotonicity, and after
//! augmenting the network with a dummy source for the input species and a
//! dummy probe promoted by the output species, the sign product of the two
//! dummy labels decides positive vs negative input-output monotonicity.
//! Failure of the check is inconclusive, never a proof of non-monotonicity.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{build_sign_structure, Network, Reaction, SignStructure};

pub const R_IN_NAME: &str = "R_IN";
pub const R_OUT_NAME: &str = "R_OUT";

/// How a species takes part in a reaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeCase {
    /// C1: promoter; only the species -> reaction edge exists.
    Promoter,
    /// C2: produced or consumed without affecting the rate (e.g. the product
    /// of an irreversible reaction); only the reaction -> species edge exists.
    ProductOnly,
    /// C3: both directions.
    Bidirectional,
}

/// One species/reaction incidence of the directed SR-graph, with the case
/// that determines its direction(s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SrEdge {
    pub species: usize,
    pub reaction: usize,
    pub case: EdgeCase,
}

/// Bipartite directed graph on species and reaction nodes.
#[derive(Debug, Clone)]
pub struct SrGraph {
    pub species_nodes: Vec<String>,
    pub reaction_nodes: Vec<String>,
    pub edges: Vec<SrEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSign {
    Positive,
    Negative,
}

impl EdgeSign {
    fn as_i8(self) -> i8 {
        match self {
            EdgeSign::Positive => 1,
            EdgeSign::Negative => -1,
        }
    }
}

/// An undirected signed edge of the R-graph, with the species that induced
/// it. Parallel edges of opposite sign between the same pair are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct REdge {
    /// reaction ids with `a < b`
    pub a: usize,
    pub b: usize,
    pub sign: EdgeSign,
    pub witness: usize,
}

/// Signed multigraph on reaction nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RGraph {
    pub node_names: Vec<String>,
    pub edges: Vec<REdge>,
}

impl RGraph {
    pub fn num_nodes(&self) -> usize {
        self.node_names.len()
    }

    pub fn pos_edges(&self) -> impl Iterator<Item = &REdge> {
        self.edges.iter().filter(|e| e.sign == EdgeSign::Positive)
    }

    pub fn neg_edges(&self) -> impl Iterator<Item = &REdge> {
        self.edges.iter().filter(|e| e.sign == EdgeSign::Negative)
    }

    pub fn has_edge_between(&self, i: usize, k: usize) -> bool {
        let (a, b) = if i < k { (i, k) } else { (k, i) };
        self.edges.iter().any(|e| e.a == a && e.b == b)
    }
}

/// A sign assignment to reactions, indexed by reaction id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    pub sigma: Vec<i8>,
}

/// A cycle of the R-graph with an odd number of negative edges, refuting the
/// existence of a consistent labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddNegativeCycle {
    pub edges: Vec<REdge>,
}

impl OddNegativeCycle {
    /// Check the certificate against the graph it was extracted from: the
    /// edges must exist, close a cycle, and carry an odd negative count.
    pub fn verify(&self, rg: &RGraph) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let neg = self.neg_count();
        if neg.is_multiple_of(2) {
            return false;
        }
        if !self.edges.iter().all(|e| rg.edges.contains(e)) {
            return false;
        }
        // every node on the cycle must be met an even number of times
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for e in &self.edges {
            *degree.entry(e.a).or_default() += 1;
            *degree.entry(e.b).or_default() += 1;
        }
        degree.values().all(|&d| d % 2 == 0)
    }

    pub fn neg_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign == EdgeSign::Negative).count()
    }
}

/// Why a verdict is inconclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    OddNegativeCycle(OddNegativeCycle),
    RuleOfTwoWitness { species: usize, count: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    PositivelyMonotonic,
    NegativelyMonotonic,
    Inconclusive,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictKind::PositivelyMonotonic => "PositivelyMonotonic",
            VerdictKind::NegativelyMonotonic => "NegativelyMonotonic",
            VerdictKind::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// Outcome of the structural input-output monotonicity check.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// labeling of the augmented network (absent iff inconclusive),
    /// normalized so that sigma\[r_in\] = +1
    pub labeling: Option<Labeling>,
    pub certificate: Option<Certificate>,
    /// true when the dummy input and output reactions fall into different
    /// R-graph components; either sign would then be consistent and the
    /// positive verdict is a convention
    pub disconnected_io: bool,
    /// reaction ids of the dummies within the augmented network
    pub r_in: usize,
    pub r_out: usize,
    /// the augmented network and its R-graph, kept for reporting
    pub augmented: Network,
    pub r_graph: RGraph,
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("input and output species must be distinct")]
    InputEqualsOutput,
    #[error("unknown species id {0}")]
    UnknownSpecies(usize),
    #[error("reaction `{0}` is not reversible")]
    NotReversible(String),
    #[error("reaction `{0}` has promoters; its reversed form would need them to act as inhibitors, which the rate-law family cannot express")]
    PromotedFlip(String),
    #[error("brute-force labeling supports at most {max} nodes, got {got}")]
    TooManyNodes { max: usize, got: usize },
}

fn edge_case(dr: i8, gamma: i64) -> Option<EdgeCase> {
    match (dr != 0, gamma != 0) {
        (true, false) => Some(EdgeCase::Promoter),
        (false, true) => Some(EdgeCase::ProductOnly),
        (true, true) => Some(EdgeCase::Bidirectional),
        (false, false) => None,
    }
}

/// Build the directed SR-graph.
pub fn build_sr_graph(network: &Network) -> SrGraph {
    let ss = build_sign_structure(network);
    let mut edges = Vec::new();
    for (i, row) in ss.dr_sign.iter().enumerate() {
        for (j, &dr) in row.iter().enumerate() {
            if let Some(case) = edge_case(dr, ss.gamma[j][i]) {
                edges.push(SrEdge {
                    species: j,
                    reaction: i,
                    case,
                });
            }
        }
    }
    SrGraph {
        species_nodes: network.species.iter().map(|s| s.name.clone()).collect(),
        reaction_nodes: network.reactions.iter().map(|r| r.name.clone()).collect(),
        edges,
    }
}

/// Build the signed R-graph: reactions i and k are joined for every species
/// j with `dr_sign[i][j] * gamma[j][k]` (or the symmetric product) non-zero,
/// positively or negatively according to its sign.
pub fn build_r_graph(network: &Network) -> RGraph {
    let ss = build_sign_structure(network);
    r_graph_from_signs(network, &ss)
}

fn r_graph_from_signs(network: &Network, ss: &SignStructure) -> RGraph {
    let r = network.num_reactions();
    let s = network.num_species();
    let mut edges = Vec::new();
    for a in 0..r {
        for b in (a + 1)..r {
            for j in 0..s {
                let forward = i64::from(ss.dr_sign[a][j]) * ss.gamma[j][b];
                let backward = i64::from(ss.dr_sign[b][j]) * ss.gamma[j][a];
                // one edge per (pair, sign); parallel same-sign edges add nothing
                let mut push = |sign| {
                    let dup = edges
                        .iter()
                        .any(|e: &REdge| e.a == a && e.b == b && e.sign == sign);
                    if !dup {
                        edges.push(REdge {
                            a,
                            b,
                            sign,
                            witness: j,
                        });
                    }
                };
                if forward > 0 || backward > 0 {
                    push(EdgeSign::Positive);
                }
                if forward < 0 || backward < 0 {
                    push(EdgeSign::Negative);
                }
            }
        }
    }
    RGraph {
        node_names: network.reactions.iter().map(|r| r.name.clone()).collect(),
        edges,
    }
}

/// Per-species involvement counts of the Rule of 2: the number of
/// bidirectional (C3) reactions, plus one if any promoter (C1) incidence
/// exists, plus one if any product-only (C2) incidence exists. A count above
/// two rules out a consistent labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleOfTwo {
    /// indexed by species id
    pub counts: Vec<u32>,
    pub pass: bool,
}

impl RuleOfTwo {
    pub fn first_witness(&self) -> Option<(usize, u32)> {
        self.counts
            .iter()
            .enumerate()
            .find(|&(_, &n)| n > 2)
            .map(|(j, &n)| (j, n))
    }
}

pub fn rule_of_two(network: &Network) -> RuleOfTwo {
    let ss = build_sign_structure(network);
    let mut counts = Vec::with_capacity(network.num_species());
    for j in 0..network.num_species() {
        let mut c3 = 0u32;
        let mut any_c1 = false;
        let mut any_c2 = false;
        for i in 0..network.num_reactions() {
            match edge_case(ss.dr_sign[i][j], ss.gamma[j][i]) {
                Some(EdgeCase::Bidirectional) => c3 += 1,
                Some(EdgeCase::Promoter) => any_c1 = true,
                Some(EdgeCase::ProductOnly) => any_c2 = true,
                None => {}
            }
        }
        counts.push(c3 + u32::from(any_c1) + u32::from(any_c2));
    }
    let pass = counts.iter().all(|&n| n <= 2);
    RuleOfTwo { counts, pass }
}

/// Decide consistent-labeling existence by sign propagation.
///
/// Breadth-first traversal per component, anchoring the lowest-indexed node
/// to +1. A positive edge forces equal signs, a negative edge opposite
/// signs; parallel edges of both signs between one pair form a length-2
/// cycle with one negative edge and refute immediately, as does any
/// propagation conflict.
pub fn find_consistent_labeling(rg: &RGraph) -> Result<Labeling, OddNegativeCycle> {
    let n = rg.num_nodes();
    // collapse the multigraph to one required relative sign per pair
    let mut constraint: BTreeMap<(usize, usize), (i8, REdge)> = BTreeMap::new();
    for e in &rg.edges {
        let key = (e.a, e.b);
        match constraint.get(&key) {
            None => {
                constraint.insert(key, (e.sign.as_i8(), *e));
            }
            Some(&(sign, first)) if sign != e.sign.as_i8() => {
                return Err(OddNegativeCycle {
                    edges: vec![first, *e],
                });
            }
            Some(_) => {}
        }
    }
    let mut adj: Vec<Vec<(usize, i8, REdge)>> = vec![Vec::new(); n];
    for (&(a, b), &(sign, e)) in &constraint {
        adj[a].push((b, sign, e));
        adj[b].push((a, sign, e));
    }

    let mut sigma = vec![0i8; n];
    let mut parent: Vec<Option<(usize, REdge)>> = vec![None; n];
    for root in 0..n {
        if sigma[root] != 0 {
            continue;
        }
        sigma[root] = 1;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, sign, e) in &adj[u] {
                let want = sigma[u] * sign;
                if sigma[v] == 0 {
                    sigma[v] = want;
                    parent[v] = Some((u, e));
                    queue.push_back(v);
                } else if sigma[v] != want {
                    return Err(conflict_cycle(u, v, e, &parent));
                }
            }
        }
    }
    Ok(Labeling { sigma })
}

/// Close the cycle through a conflicting non-tree edge: walk both endpoints
/// up to their common ancestor in the BFS forest.
fn conflict_cycle(u: usize, v: usize, edge: REdge, parent: &[Option<(usize, REdge)>]) -> OddNegativeCycle {
    let path_to_root = |mut x: usize| {
        let mut nodes = vec![x];
        let mut edges = Vec::new();
        while let Some((p, e)) = parent[x] {
            nodes.push(p);
            edges.push(e);
            x = p;
        }
        (nodes, edges)
    };
    let (nodes_u, edges_u) = path_to_root(u);
    let (nodes_v, edges_v) = path_to_root(v);
    // find the lowest common node
    let set_u: BTreeMap<usize, usize> = nodes_u.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let (vi, anc) = nodes_v
        .iter()
        .enumerate()
        .find(|(_, x)| set_u.contains_key(x))
        .map(|(i, &x)| (i, x))
        .expect("BFS forest paths always meet");
    let ui = set_u[&anc];
    let mut edges = vec![edge];
    edges.extend_from_slice(&edges_u[..ui]);
    edges.extend_from_slice(&edges_v[..vi]);
    OddNegativeCycle { edges }
}

/// Check the consistent-labeling inequality for every ordered reaction pair
/// and species, directly against the network's sign structure.
pub fn verify_labeling(network: &Network, labeling: &Labeling) -> bool {
    let ss = build_sign_structure(network);
    let r = network.num_reactions();
    if labeling.sigma.len() != r || labeling.sigma.iter().any(|&s| s != 1 && s != -1) {
        return false;
    }
    for i in 0..r {
        for k in 0..r {
            if i == k {
                continue;
            }
            for j in 0..network.num_species() {
                let v = i64::from(labeling.sigma[i])
                    * i64::from(ss.dr_sign[i][j])
                    * ss.gamma[j][k]
                    * i64::from(labeling.sigma[k]);
                if v < 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Exhaustive labeling search, the test oracle for the propagation
/// algorithm. Returns the first consistent assignment in the order that
/// enumerates +1 before -1 position by position.
pub fn brute_force_labeling(rg: &RGraph) -> Result<Option<Labeling>, GraphError> {
    const MAX_NODES: usize = 20;
    let n = rg.num_nodes();
    if n > MAX_NODES {
        return Err(GraphError::TooManyNodes {
            max: MAX_NODES,
            got: n,
        });
    }
    for mask in 0u32..(1u32 << n) {
        let sigma: Vec<i8> = (0..n)
            .map(|i| if mask & (1 << i) == 0 { 1 } else { -1 })
            .collect();
        let ok = rg.edges.iter().all(|e| {
            sigma[e.a] * sigma[e.b] == e.sign.as_i8()
        });
        if ok {
            return Ok(Some(Labeling { sigma }));
        }
    }
    Ok(None)
}

/// Add the two dummy reactions of the monotonicity test: a source feeding
/// the input species and a zero-stoichiometry probe promoted by the output
/// species. The original network is left untouched.
pub fn augment(network: &Network, input: usize, output: usize) -> Result<Network, GraphError> {
    if input == output {
        return Err(GraphError::InputEqualsOutput);
    }
    let s = network.num_species();
    if input >= s {
        return Err(GraphError::UnknownSpecies(input));
    }
    if output >= s {
        return Err(GraphError::UnknownSpecies(output));
    }
    let mut augmented = network.clone();
    let r = network.num_reactions();
    augmented.reactions.push(Reaction {
        id: r,
        name: R_IN_NAME.to_string(),
        reactants: BTreeMap::new(),
        products: BTreeMap::from([(input, 1)]),
        promoters: Default::default(),
        reversible: false,
        k_fwd: 1.0,
        k_bwd: None,
    });
    augmented.reactions.push(Reaction {
        id: r + 1,
        name: R_OUT_NAME.to_string(),
        reactants: BTreeMap::new(),
        products: BTreeMap::new(),
        promoters: [output].into_iter().collect(),
        reversible: false,
        k_fwd: 1.0,
        k_bwd: None,
    });
    Ok(augmented)
}

/// The structural sufficient check for input-output monotonicity: augment,
/// build the R-graph, search for a consistent labeling, and read the verdict
/// off the product of the two dummy labels.
pub fn check_io_monotonicity(
    network: &Network,
    input: usize,
    output: usize,
) -> Result<Verdict, GraphError> {
    let augmented = augment(network, input, output)?;
    let rg = build_r_graph(&augmented);
    let r_in = network.num_reactions();
    let r_out = r_in + 1;

    // The Rule of 2 is a necessary condition: a failing species means the
    // labeling search below must fail too. The cycle it produces is the more
    // actionable certificate, so the witness is only a fallback.
    let rot = rule_of_two(&augmented);

    match find_consistent_labeling(&rg) {
        Err(cycle) => Ok(Verdict {
            kind: VerdictKind::Inconclusive,
            labeling: None,
            certificate: Some(Certificate::OddNegativeCycle(cycle)),
            disconnected_io: false,
            r_in,
            r_out,
            augmented,
            r_graph: rg,
        }),
        Ok(mut labeling) => {
            if let Some((species, count)) = rot.first_witness() {
                // Unreachable if the Rule of 2 holds, but never report a
                // monotonic verdict that the necessary condition contradicts.
                debug_assert!(false, "rule-of-two witness despite labeling");
                return Ok(Verdict {
                    kind: VerdictKind::Inconclusive,
                    labeling: None,
                    certificate: Some(Certificate::RuleOfTwoWitness { species, count }),
                    disconnected_io: false,
                    r_in,
                    r_out,
                    augmented,
                    r_graph: rg,
                });
            }
            // normalize the component containing R_IN so sigma[R_IN] = +1
            if labeling.sigma[r_in] == -1 {
                flip_component(&rg, r_in, &mut labeling);
            }
            let disconnected_io = !same_component(&rg, r_in, r_out);
            // with the output in a separate component either sign is
            // consistent; anchor it to +1 as well, making the convention a
            // positive verdict
            if disconnected_io && labeling.sigma[r_out] == -1 {
                flip_component(&rg, r_out, &mut labeling);
            }
            let kind = if labeling.sigma[r_in] * labeling.sigma[r_out] == 1 {
                VerdictKind::PositivelyMonotonic
            } else {
                VerdictKind::NegativelyMonotonic
            };
            Ok(Verdict {
                kind,
                labeling: Some(labeling),
                certificate: None,
                disconnected_io,
                r_in,
                r_out,
                augmented,
                r_graph: rg,
            })
        }
    }
}

fn adjacency(rg: &RGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); rg.num_nodes()];
    for e in &rg.edges {
        adj[e.a].push(e.b);
        adj[e.b].push(e.a);
    }
    adj
}

fn component_of(rg: &RGraph, start: usize) -> Vec<bool> {
    let adj = adjacency(rg);
    let mut seen = vec![false; rg.num_nodes()];
    let mut queue = std::collections::VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

fn same_component(rg: &RGraph, a: usize, b: usize) -> bool {
    component_of(rg, a)[b]
}

fn flip_component(rg: &RGraph, anchor: usize, labeling: &mut Labeling) {
    let seen = component_of(rg, anchor);
    for (i, &in_comp) in seen.iter().enumerate() {
        if in_comp {
            labeling.sigma[i] = -labeling.sigma[i];
        }
    }
}

/// Swap reactants with products (and the two rate constants) of a reversible
/// reaction. The monotonicity verdict is invariant under this.
pub fn flip_orientation(network: &Network, reaction: usize) -> Result<Network, GraphError> {
    let Some(rx) = network.reactions.get(reaction) else {
        return Err(GraphError::UnknownSpecies(reaction));
    };
    if !rx.reversible {
        return Err(GraphError::NotReversible(rx.name.clone()));
    }
    if !rx.promoters.is_empty() {
        // the promoter multiplies the forward term only, so the reversed
        // reaction is not the same dynamical system
        return Err(GraphError::PromotedFlip(rx.name.clone()));
    }
    let mut flipped = network.clone();
    let rx = &mut flipped.reactions[reaction];
    std::mem::swap(&mut rx.reactants, &mut rx.products);
    let k_bwd = rx.k_bwd.take().unwrap();
    rx.k_bwd = Some(std::mem::replace(&mut rx.k_fwd, k_bwd));
    Ok(flipped)
}

/// Render the SR-graph in DOT. Species are ellipses, reactions boxes;
/// bidirectional incidences become two arcs.
pub fn sr_graph_to_dot(graph: &SrGraph) -> String {
    let mut out = String::from("digraph sr {\n");
    for name in &graph.species_nodes {
        let _ = writeln!(out, "  \"{name}\" [shape=ellipse];");
    }
    for name in &graph.reaction_nodes {
        let _ = writeln!(out, "  \"{name}\" [shape=box];");
    }
    for e in &graph.edges {
        let sp = &graph.species_nodes[e.species];
        let rx = &graph.reaction_nodes[e.reaction];
        match e.case {
            EdgeCase::Promoter => {
                let _ = writeln!(out, "  \"{sp}\" -> \"{rx}\";");
            }
            EdgeCase::ProductOnly => {
                let _ = writeln!(out, "  \"{rx}\" -> \"{sp}\";");
            }
            EdgeCase::Bidirectional => {
                let _ = writeln!(out, "  \"{sp}\" -> \"{rx}\";");
                let _ = writeln!(out, "  \"{rx}\" -> \"{sp}\";");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Render the R-graph in DOT: solid edges labeled `+`, dashed labeled `-`.
pub fn r_graph_to_dot(graph: &RGraph) -> String {
    let mut out = String::from("graph r {\n");
    for name in &graph.node_names {
        let _ = writeln!(out, "  \"{name}\" [shape=box];");
    }
    for e in &graph.edges {
        let a = &graph.node_names[e.a];
        let b = &graph.node_names[e.b];
        match e.sign {
            EdgeSign::Positive => {
                let _ = writeln!(out, "  \"{a}\" -- \"{b}\" [label=\"+\", style=solid];");
            }
            EdgeSign::Negative => {
                let _ = writeln!(out, "  \"{a}\" -- \"{b}\" [label=\"-\", style=dashed];");
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn michaelis() -> Network {
        parse("E + S <-> ES @ 0.1, 1000\nES -> E + P @ 0.3\n").unwrap().network
    }

    fn fan_in() -> Network {
        parse("A -> C @ 1\nB -> C @ 1\nC -> D @ 1\n").unwrap().network
    }

    fn competing() -> Network {
        parse("A -> B @ 1\nA + B -> C @ 1\n").unwrap().network
    }

    #[test]
    fn michaelis_sr_graph() {
        let net = michaelis();
        let g = build_sr_graph(&net);
        let case = |sp: &str, rx: &str| {
            let j = g.species_nodes.iter().position(|n| n == sp).unwrap();
            let i = g.reaction_nodes.iter().position(|n| n == rx).unwrap();
            g.edges
                .iter()
                .find(|e| e.species == j && e.reaction == i)
                .map(|e| e.case)
        };
        assert_eq!(case("E", "R1"), Some(EdgeCase::Bidirectional));
        assert_eq!(case("S", "R1"), Some(EdgeCase::Bidirectional));
        assert_eq!(case("ES", "R1"), Some(EdgeCase::Bidirectional));
        assert_eq!(case("ES", "R2"), Some(EdgeCase::Bidirectional));
        assert_eq!(case("E", "R2"), Some(EdgeCase::ProductOnly));
        assert_eq!(case("P", "R2"), Some(EdgeCase::ProductOnly));
        assert_eq!(case("P", "R1"), None);
        assert_eq!(g.edges.len(), 6);
    }

    #[test]
    fn single_reaction_sr_graph() {
        let net = parse("A -> B @ 1\n").unwrap().network;
        let g = build_sr_graph(&net);
        assert_eq!(g.edges.len(), 2);
        assert_eq!(g.edges[0].case, EdgeCase::Bidirectional); // A
        assert_eq!(g.edges[1].case, EdgeCase::ProductOnly); // B
    }

    #[test]
    fn promoter_sr_edge() {
        let net = parse("Mek1 + [PRaf] <-> PMek1 @ 0.02, 0.07\n").unwrap().network;
        let g = build_sr_graph(&net);
        let praf = net.species_id("PRaf").unwrap();
        let e = g.edges.iter().find(|e| e.species == praf).unwrap();
        assert_eq!(e.case, EdgeCase::Promoter);
    }

    #[test]
    fn michaelis_r_graph_single_positive_edge() {
        let rg = build_r_graph(&michaelis());
        assert_eq!(rg.edges.len(), 1);
        let e = rg.edges[0];
        assert_eq!((e.a, e.b, e.sign), (0, 1, EdgeSign::Positive));
        assert_eq!(e.witness, 0); // E, the first of the shared-species witnesses
    }

    #[test]
    fn fan_in_r_graph() {
        let rg = build_r_graph(&fan_in());
        assert!(!rg.has_edge_between(0, 1));
        assert!(rg.has_edge_between(0, 2));
        assert!(rg.has_edge_between(1, 2));
        assert!(rg.edges.iter().all(|e| e.sign == EdgeSign::Positive));
    }

    #[test]
    fn competing_r_graph_has_parallel_edges() {
        let net = competing();
        let rg = build_r_graph(&net);
        let a = net.species_id("A").unwrap();
        let b = net.species_id("B").unwrap();
        let signs: Vec<(EdgeSign, usize)> = rg.edges.iter().map(|e| (e.sign, e.witness)).collect();
        assert!(signs.contains(&(EdgeSign::Negative, a)));
        assert!(signs.contains(&(EdgeSign::Positive, b)));
    }

    #[test]
    fn rule_of_two_fan_in() {
        let net = fan_in();
        let rot = rule_of_two(&net);
        assert_eq!(rot.counts[net.species_id("C").unwrap()], 2);
        assert!(rot.pass);
    }

    #[test]
    fn rule_of_two_three_reversible() {
        let net = parse("X <-> A @ 1, 1\nX <-> B @ 1, 1\nX <-> C @ 1, 1\n").unwrap().network;
        let rot = rule_of_two(&net);
        assert_eq!(rot.counts[net.species_id("X").unwrap()], 3);
        assert!(!rot.pass);
        // brute force confirms no labeling exists
        let rg = build_r_graph(&net);
        assert_eq!(brute_force_labeling(&rg).unwrap(), None);
    }

    #[test]
    fn rule_of_two_single_reaction() {
        let net = parse("A -> B @ 1\n").unwrap().network;
        let rot = rule_of_two(&net);
        assert!(rot.counts.iter().all(|&n| n <= 1));
        assert!(rot.pass);
    }

    #[test]
    fn labeling_michaelis() {
        let rg = build_r_graph(&michaelis());
        let l = find_consistent_labeling(&rg).unwrap();
        assert_eq!(l.sigma, vec![1, 1]);
    }

    #[test]
    fn labeling_fan_in() {
        let rg = build_r_graph(&fan_in());
        let l = find_consistent_labeling(&rg).unwrap();
        assert_eq!(l.sigma, vec![1, 1, 1]);
    }

    #[test]
    fn labeling_competing_certificate() {
        let rg = build_r_graph(&competing());
        let cycle = find_consistent_labeling(&rg).unwrap_err();
        assert_eq!(cycle.edges.len(), 2);
        assert_eq!(cycle.neg_count(), 1);
        assert!(cycle.verify(&rg));
        assert_eq!(brute_force_labeling(&rg).unwrap(), None);
    }

    #[test]
    fn verify_labeling_michaelis() {
        let net = michaelis();
        assert!(verify_labeling(&net, &Labeling { sigma: vec![1, 1] }));
        assert!(!verify_labeling(&net, &Labeling { sigma: vec![1, -1] }));
    }

    #[test]
    fn verify_labeling_single_reaction() {
        let net = parse("A -> B @ 1\n").unwrap().network;
        assert!(verify_labeling(&net, &Labeling { sigma: vec![1] }));
        assert!(verify_labeling(&net, &Labeling { sigma: vec![-1] }));
    }

    #[test]
    fn augment_michaelis() {
        let net = parse(
            "E + S <-> ES @ 0.1, 1000\nES -> E + P @ 0.3\n",
        )
        .unwrap()
        .network;
        let s = net.species_id("S").unwrap();
        let p = net.species_id("P").unwrap();
        let aug = augment(&net, s, p).unwrap();
        assert_eq!(aug.num_reactions(), 4);
        let ss = build_sign_structure(&aug);
        // R_IN column is e_S
        for j in 0..aug.num_species() {
            assert_eq!(ss.gamma[j][2], i64::from(j == s));
            assert_eq!(ss.dr_sign[2][j], 0);
            assert_eq!(ss.gamma[j][3], 0);
            assert_eq!(ss.dr_sign[3][j], i8::from(j == p));
        }
        // non-destructive
        assert_eq!(net.num_reactions(), 2);
        assert_eq!(aug.reactions[0], net.reactions[0]);
    }

    #[test]
    fn augment_rejects_same_species() {
        let net = michaelis();
        assert_eq!(augment(&net, 0, 0), Err(GraphError::InputEqualsOutput));
        assert_eq!(augment(&net, 0, 99), Err(GraphError::UnknownSpecies(99)));
    }

    #[test]
    fn michaelis_positively_monotonic() {
        let net = michaelis();
        let v = check_io_monotonicity(
            &net,
            net.species_id("S").unwrap(),
            net.species_id("P").unwrap(),
        )
        .unwrap();
        assert_eq!(v.kind, VerdictKind::PositivelyMonotonic);
        let l = v.labeling.unwrap();
        assert_eq!(l.sigma[v.r_in], 1);
        assert_eq!(l.sigma[v.r_in] * l.sigma[v.r_out], 1);
        assert!(!v.disconnected_io);
    }

    #[test]
    fn competing_inconclusive() {
        let net = competing();
        let v = check_io_monotonicity(
            &net,
            net.species_id("A").unwrap(),
            net.species_id("C").unwrap(),
        )
        .unwrap();
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        match v.certificate.unwrap() {
            Certificate::OddNegativeCycle(c) => {
                assert!(c.verify(&v.r_graph));
                assert_eq!(c.edges.len(), 2);
            }
            other => panic!("expected a cycle certificate, got {other:?}"),
        }
    }

    #[test]
    fn consuming_negatively_monotonic() {
        let net = parse("A + B -> C @ 1\n").unwrap().network;
        let v = check_io_monotonicity(
            &net,
            net.species_id("A").unwrap(),
            net.species_id("B").unwrap(),
        )
        .unwrap();
        assert_eq!(v.kind, VerdictKind::NegativelyMonotonic);
    }

    #[test]
    fn disconnected_io_flag() {
        let net = parse("A -> B @ 1\nC -> D @ 1\n").unwrap().network;
        let v = check_io_monotonicity(
            &net,
            net.species_id("A").unwrap(),
            net.species_id("D").unwrap(),
        )
        .unwrap();
        assert_eq!(v.kind, VerdictKind::PositivelyMonotonic);
        assert!(v.disconnected_io);
    }

    #[test]
    fn flip_orientation_involution() {
        let net = michaelis();
        let once = flip_orientation(&net, 0).unwrap();
        assert_ne!(once, net);
        let twice = flip_orientation(&once, 0).unwrap();
        assert_eq!(twice, net);
        assert_eq!(
            flip_orientation(&net, 1),
            Err(GraphError::NotReversible("R2".into()))
        );
    }

    #[test]
    fn flip_preserves_verdict() {
        let net = michaelis();
        let s = net.species_id("S").unwrap();
        let p = net.species_id("P").unwrap();
        let before = check_io_monotonicity(&net, s, p).unwrap().kind;
        let flipped = flip_orientation(&net, 0).unwrap();
        let after = check_io_monotonicity(&flipped, s, p).unwrap().kind;
        assert_eq!(before, after);
    }

    #[test]
    fn brute_force_michaelis() {
        let rg = build_r_graph(&michaelis());
        let l = brute_force_labeling(&rg).unwrap().unwrap();
        assert_eq!(l.sigma, vec![1, 1]);
    }

    #[test]
    fn brute_force_node_cap() {
        let names: Vec<String> = (0..21).map(|i| format!("R{i}")).collect();
        let rg = RGraph {
            node_names: names,
            edges: vec![],
        };
        assert!(matches!(
            brute_force_labeling(&rg),
            Err(GraphError::TooManyNodes { .. })
        ));
    }

    #[test]
    fn michaelis_sr_dot() {
        let dot = sr_graph_to_dot(&build_sr_graph(&michaelis()));
        assert!(dot.contains("\"S\" -> \"R1\""));
        assert!(dot.contains("\"R1\" -> \"S\""));
        assert!(dot.contains("\"R2\" -> \"P\""));
        assert!(!dot.contains("\"P\" -> \"R2\""));
    }

    #[test]
    fn michaelis_r_dot() {
        let dot = r_graph_to_dot(&build_r_graph(&michaelis()));
        assert!(dot.contains("\"R1\" -- \"R2\" [label=\"+\", style=solid];"));
        assert!(!dot.contains("dashed"));
    }

    #[test]
    fn empty_network_dot() {
        let net = Network::new(vec![], vec![], vec![]).unwrap();
        assert_eq!(sr_graph_to_dot(&build_sr_graph(&net)), "digraph sr {\n}\n");
        assert_eq!(r_graph_to_dot(&build_r_graph(&net)), "graph r {\n}\n");
    }
}
