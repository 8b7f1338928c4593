//! Graph construction for cliques joined by chains.
//!
//! Vertices are numbered contiguously from 0. Each [`GraphSpec`] also keeps a
//! signed label per vertex: for `K_p ⊕ C_q` and `C_{q1} ⊕ K_p ⊕ C_{q2}`
//! the clique occupies labels `-p+1..=0`, the right chain `1..` and the left
//! chain `..=-p`; for networks labels are simply `index + 1`.
//!
//! A chain `C_q` carries `q - 1` vertices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::matrix::SymMatrix;

/// What a vertex is part of.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Role {
    Clique {
        clique: usize,
    },
    Chain {
        chain: usize,
    },
    /// Clique vertex where one or more chains attach.
    Junction {
        clique: usize,
        chains: Vec<usize>,
    },
}

impl Role {
    pub fn clique(&self) -> Option<usize> {
        match self {
            Role::Clique { clique } | Role::Junction { clique, .. } => Some(*clique),
            Role::Chain { .. } => None,
        }
    }
}

/// Parameters a graph was generated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    SingleChain { p: usize, q: usize },
    TwoChain { q1: usize, p: usize, q2: usize },
    Network { spec: CliqueNetworkSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueBlock {
    pub id: String,
    /// Graph vertex indices, in clique-local order.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainPath {
    /// Chain vertices ordered outward from the `from` attachment.
    pub vertices: Vec<usize>,
    /// Clique vertex the first chain vertex hangs off.
    pub from: usize,
    /// Clique vertex the last chain vertex connects to, if the chain is closed.
    pub to: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub roles: Vec<Role>,
    pub labels: Vec<i64>,
    pub cliques: Vec<CliqueBlock>,
    pub chains: Vec<ChainPath>,
    pub family: Family,
}

// ---------------------------------------------------------------------------
// Network description (JSON ingest)

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliqueNetworkSpec {
    pub cliques: Vec<CliqueDecl>,
    #[serde(default)]
    pub links: Vec<LinkDecl>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliqueDecl {
    pub id: String,
    pub p: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDecl {
    pub from: Attachment,
    pub to: LinkEnd,
    /// Number of interior chain vertices.
    pub length: usize,
}

/// A vertex of a named clique; `vertex` is 0-based within the clique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Attachment {
    pub clique: String,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LinkEnd {
    Open(OpenEnd),
    Clique(Attachment),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpenEnd {
    #[serde(rename = "open")]
    Open,
}

impl CliqueNetworkSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CliqueNetworkSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidNetwork(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network spec serializes")
    }

    fn clique_index(&self, id: &str) -> Option<usize> {
        self.cliques.iter().position(|c| c.id == id)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cliques.is_empty() {
            return Err(Error::InvalidNetwork("no cliques declared".into()));
        }
        let mut seen = BTreeSet::new();
        for c in &self.cliques {
            if c.p < 3 {
                return Err(Error::InvalidNetwork(format!(
                    "clique `{}` has p = {}, need p >= 3",
                    c.id, c.p
                )));
            }
            if !seen.insert(c.id.as_str()) {
                return Err(Error::InvalidNetwork(format!(
                    "duplicate clique id `{}`",
                    c.id
                )));
            }
        }
        for (k, link) in self.links.iter().enumerate() {
            if link.length < 1 {
                return Err(Error::InvalidNetwork(format!(
                    "link {k} has length 0, need at least one interior vertex"
                )));
            }
            self.check_attachment(k, &link.from)?;
            if let LinkEnd::Clique(a) = &link.to {
                self.check_attachment(k, a)?;
            }
        }
        Ok(())
    }

    fn check_attachment(&self, link: usize, a: &Attachment) -> Result<()> {
        let idx = self.clique_index(&a.clique).ok_or_else(|| {
            Error::InvalidNetwork(format!(
                "link {link} refers to unknown clique `{}`",
                a.clique
            ))
        })?;
        let p = self.cliques[idx].p;
        if a.vertex >= p {
            return Err(Error::InvalidNetwork(format!(
                "link {link} attaches at vertex {} of clique `{}` which has only {p} vertices",
                a.vertex, a.clique
            )));
        }
        Ok(())
    }

    fn attachments_of(&self, id: &str) -> Vec<usize> {
        let mut out = Vec::new();
        for link in &self.links {
            if link.from.clique == id {
                out.push(link.from.vertex);
            }
            if let LinkEnd::Clique(a) = &link.to {
                if a.clique == id {
                    out.push(a.vertex);
                }
            }
        }
        out
    }

    /// Number of link ends touching clique `id` (its degree in the network).
    pub fn degree(&self, id: &str) -> usize {
        self.attachments_of(id).len()
    }

    /// True iff every link touching clique `id` attaches at a different vertex.
    pub fn distinct_attachments(&self, id: &str) -> bool {
        let a = self.attachments_of(id);
        let set: BTreeSet<_> = a.iter().collect();
        set.len() == a.len()
    }
}

// ---------------------------------------------------------------------------
// Builders

struct Builder {
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn new() -> Self {
        Builder { edges: Vec::new() }
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.edges.push((a.min(b), a.max(b)));
    }

    fn clique(&mut self, vertices: &[usize]) {
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                self.edge(a, b);
            }
        }
    }

    fn path(&mut self, start: usize, vertices: &[usize]) {
        let mut prev = start;
        for &v in vertices {
            self.edge(prev, v);
            prev = v;
        }
    }
}

fn mark_junction(roles: &mut [Role], v: usize, chain: usize) {
    match &mut roles[v] {
        Role::Clique { clique } => {
            roles[v] = Role::Junction {
                clique: *clique,
                chains: vec![chain],
            }
        }
        Role::Junction { chains, .. } => chains.push(chain),
        Role::Chain { .. } => unreachable!("chains attach only to clique vertices"),
    }
}

/// `K_p ⊕ C_q`: a clique on `p` vertices with a chain of `q - 1` vertices hanging
/// off one clique vertex.
pub fn build_single_chain(p: usize, q: usize) -> Result<GraphSpec> {
    if p < 3 {
        return Err(domain("p", p as f64, "p >= 3"));
    }
    if q < 2 {
        return Err(domain("q", q as f64, "q >= 2"));
    }
    let n = p + q - 1;
    let clique: Vec<usize> = (0..p).collect();
    let chain: Vec<usize> = (p..n).collect();
    let junction = p - 1;

    let mut b = Builder::new();
    b.clique(&clique);
    b.path(junction, &chain);

    let mut roles: Vec<Role> = (0..n)
        .map(|v| {
            if v < p {
                Role::Clique { clique: 0 }
            } else {
                Role::Chain { chain: 0 }
            }
        })
        .collect();
    mark_junction(&mut roles, junction, 0);

    let g = GraphSpec {
        n,
        edges: b.edges,
        roles,
        labels: (0..n).map(|i| i as i64 - (p as i64 - 1)).collect(),
        cliques: vec![CliqueBlock {
            id: "K".into(),
            vertices: clique,
        }],
        chains: vec![ChainPath {
            vertices: chain,
            from: junction,
            to: None,
        }],
        family: Family::SingleChain { p, q },
    };
    g.validate()?;
    Ok(g)
}

/// `C_{q1} ⊕ K_p ⊕ C_{q2}`: chains of `q1 - 1` and `q2 - 1` vertices on two
/// different clique vertices. Chain 0 is the left chain (`C_{q1}`), chain 1 the
/// right chain (`C_{q2}`).
pub fn build_two_chain(q1: usize, p: usize, q2: usize) -> Result<GraphSpec> {
    if q1 < 2 {
        return Err(domain("q1", q1 as f64, "q1 >= 2"));
    }
    if p < 3 {
        return Err(domain("p", p as f64, "p >= 3"));
    }
    if q2 < 2 {
        return Err(domain("q2", q2 as f64, "q2 >= 2"));
    }
    let left_len = q1 - 1;
    let n = left_len + p + (q2 - 1);
    // Contiguous indices follow label order: left chain, clique, right chain.
    let clique: Vec<usize> = (left_len..left_len + p).collect();
    let left_junction = left_len; // label -p+1
    let right_junction = left_len + p - 1; // label 0
    let left: Vec<usize> = (0..left_len).rev().collect();
    let right: Vec<usize> = (left_len + p..n).collect();

    let mut b = Builder::new();
    b.clique(&clique);
    b.path(left_junction, &left);
    b.path(right_junction, &right);

    let mut roles: Vec<Role> = (0..n)
        .map(|v| {
            if v < left_len {
                Role::Chain { chain: 0 }
            } else if v < left_len + p {
                Role::Clique { clique: 0 }
            } else {
                Role::Chain { chain: 1 }
            }
        })
        .collect();
    mark_junction(&mut roles, left_junction, 0);
    mark_junction(&mut roles, right_junction, 1);

    let min_label = -(p as i64) - (q1 as i64) + 2;
    let g = GraphSpec {
        n,
        edges: b.edges,
        roles,
        labels: (0..n).map(|i| i as i64 + min_label).collect(),
        cliques: vec![CliqueBlock {
            id: "K".into(),
            vertices: clique,
        }],
        chains: vec![
            ChainPath {
                vertices: left,
                from: left_junction,
                to: None,
            },
            ChainPath {
                vertices: right,
                from: right_junction,
                to: None,
            },
        ],
        family: Family::TwoChain { q1, p, q2 },
    };
    g.validate()?;
    Ok(g)
}

/// Builds a general network of cliques joined by chains. Cliques take the
/// first vertex indices in declaration order, then each link's chain vertices
/// in declaration order, numbered from the `from` end.
pub fn build_network(spec: &CliqueNetworkSpec) -> Result<GraphSpec> {
    spec.validate()?;
    let mut next = 0usize;
    let mut cliques = Vec::with_capacity(spec.cliques.len());
    let mut roles = Vec::new();
    let mut b = Builder::new();
    for (ci, c) in spec.cliques.iter().enumerate() {
        let vertices: Vec<usize> = (next..next + c.p).collect();
        next += c.p;
        b.clique(&vertices);
        roles.extend(vertices.iter().map(|_| Role::Clique { clique: ci }));
        cliques.push(CliqueBlock {
            id: c.id.clone(),
            vertices,
        });
    }
    let vertex_of = |a: &Attachment| -> usize {
        let ci = spec.clique_index(&a.clique).expect("validated");
        cliques[ci].vertices[a.vertex]
    };

    let mut chains = Vec::with_capacity(spec.links.len());
    for (li, link) in spec.links.iter().enumerate() {
        let vertices: Vec<usize> = (next..next + link.length).collect();
        next += link.length;
        roles.extend(vertices.iter().map(|_| Role::Chain { chain: li }));
        let from = vertex_of(&link.from);
        b.path(from, &vertices);
        mark_junction(&mut roles, from, li);
        let to = match &link.to {
            LinkEnd::Open(_) => None,
            LinkEnd::Clique(a) => {
                let t = vertex_of(a);
                b.edge(*vertices.last().expect("length >= 1"), t);
                mark_junction(&mut roles, t, li);
                Some(t)
            }
        };
        chains.push(ChainPath { vertices, from, to });
    }

    let n = next;
    let g = GraphSpec {
        n,
        edges: b.edges,
        roles,
        labels: (1..=n as i64).collect(),
        cliques,
        chains,
        family: Family::Network { spec: spec.clone() },
    };
    g.validate()?;
    Ok(g)
}

// ---------------------------------------------------------------------------

impl GraphSpec {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Checks the structural invariants: simple graph, connected, cliques
    /// complete, chains induce paths.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidGraph("empty graph".into()));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in &self.edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a >= self.n || b >= self.n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
        }
        if self.roles.len() != self.n || self.labels.len() != self.n {
            return Err(Error::InvalidGraph("role/label table size mismatch".into()));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        for c in &self.cliques {
            let members: BTreeSet<_> = c.vertices.iter().copied().collect();
            let inside = set
                .iter()
                .filter(|(a, b)| members.contains(a) && members.contains(b))
                .count();
            let p = members.len();
            if inside != p * (p - 1) / 2 {
                return Err(Error::InvalidGraph(format!(
                    "clique `{}` induces {inside} edges, expected {}",
                    c.id,
                    p * (p - 1) / 2
                )));
            }
        }
        for (ci, ch) in self.chains.iter().enumerate() {
            let members: BTreeSet<_> = ch.vertices.iter().copied().collect();
            let mut nb: BTreeMap<usize, usize> = members.iter().map(|&v| (v, 0)).collect();
            for &(a, b) in &set {
                if members.contains(&a) && members.contains(&b) {
                    *nb.get_mut(&a).unwrap() += 1;
                    *nb.get_mut(&b).unwrap() += 1;
                }
            }
            let len = ch.vertices.len();
            for (k, &v) in ch.vertices.iter().enumerate() {
                let expected = if len == 1 {
                    0
                } else if k == 0 || k + 1 == len {
                    1
                } else {
                    2
                };
                if nb[&v] != expected {
                    return Err(Error::InvalidGraph(format!(
                        "chain {ci} is not a path at vertex {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Non-junction vertices of clique `c`, in clique-local order.
    pub fn interior_clique_vertices(&self, c: usize) -> Vec<usize> {
        self.cliques[c]
            .vertices
            .iter()
            .copied()
            .filter(|&v| matches!(self.roles[v], Role::Clique { .. }))
            .collect()
    }

    /// Applies the Laplacian in exact integer arithmetic.
    pub fn laplacian_apply_int(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![0i64; self.n];
        for &(a, b) in &self.edges {
            out[a] += v[a] - v[b];
            out[b] += v[b] - v[a];
        }
        out
    }

    /// Signed label of vertex `v`.
    pub fn label(&self, v: usize) -> i64 {
        self.labels[v]
    }

    /// Vertex index carrying signed label `label`.
    pub fn index_of_label(&self, label: i64) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn describe(&self) -> String {
        match &self.family {
            Family::SingleChain { p, q } => format!("K_{p} ⊕ C_{q}"),
            Family::TwoChain { q1, p, q2 } => format!("C_{q1} ⊕ K_{p} ⊕ C_{q2}"),
            Family::Network { spec } => {
                let parts: Vec<String> = spec
                    .cliques
                    .iter()
                    .map(|c| format!("{}=K_{}", c.id, c.p))
                    .collect();
                format!("network[{}; {} links]", parts.join(", "), spec.links.len())
            }
        }
    }
}

/// Graph Laplacian `L = D - A`.
pub fn laplacian(g: &GraphSpec) -> SymMatrix {
    let mut m = SymMatrix::zeros(g.n);
    for &(a, b) in &g.edges {
        m.set(a, b, -1.0);
        m.add_diag(a, 1.0);
        m.add_diag(b, 1.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k10_three_chains() -> CliqueNetworkSpec {
        let open = |vertex: usize, length: usize| LinkDecl {
            from: Attachment {
                clique: "K".into(),
                vertex,
            },
            to: LinkEnd::Open(OpenEnd::Open),
            length,
        };
        CliqueNetworkSpec {
            cliques: vec![CliqueDecl {
                id: "K".into(),
                p: 10,
            }],
            links: vec![open(9, 5), open(4, 4), open(0, 3)],
        }
    }

    #[test]
    fn single_chain_counts() {
        let g = build_single_chain(6, 4).unwrap();
        assert_eq!((g.n, g.edge_count()), (9, 18));
        let g = build_single_chain(3, 2).unwrap();
        assert_eq!((g.n, g.edge_count()), (4, 4));
        let g = build_single_chain(4, 3).unwrap();
        assert_eq!((g.n, g.edge_count()), (6, 8));
    }

    #[test]
    fn single_chain_laplacian_matches_published_matrix() {
        let g = build_single_chain(6, 4).unwrap();
        let l = laplacian(&g);
        let mut rows = vec![vec![0.0; 9]; 9];
        for i in 0..6 {
            for j in 0..6 {
                rows[i][j] = if i == j { 5.0 } else { -1.0 };
            }
        }
        rows[5][5] = 6.0;
        rows[5][6] = -1.0;
        rows[6][5] = -1.0;
        rows[6][6] = 2.0;
        rows[6][7] = -1.0;
        rows[7][6] = -1.0;
        rows[7][7] = 2.0;
        rows[7][8] = -1.0;
        rows[8][7] = -1.0;
        rows[8][8] = 1.0;
        assert_eq!(l, SymMatrix::from_rows(&rows).unwrap());
        assert_eq!(l.diagonal(), vec![5., 5., 5., 5., 5., 6., 2., 2., 1.]);
        assert_eq!(g.labels, vec![-5, -4, -3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn two_chain_counts_and_labels() {
        let g = build_two_chain(4, 6, 4).unwrap();
        assert_eq!((g.n, g.edge_count()), (12, 21));
        let g = build_two_chain(2, 4, 2).unwrap();
        assert_eq!((g.n, g.edge_count()), (6, 8));
        assert_eq!(g.degrees().iter().filter(|&&d| d == 1).count(), 2);
        let g = build_two_chain(3, 5, 4).unwrap();
        assert_eq!((g.n, g.edge_count()), (10, 15));
        // Junctions sit at labels -p+1 and 0.
        let j: Vec<i64> = g
            .roles
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!(r, Role::Junction { .. }))
            .map(|(v, _)| g.label(v))
            .collect();
        assert_eq!(j, vec![-4, 0]);
        assert_eq!(g.labels.first(), Some(&-6));
        assert_eq!(g.labels.last(), Some(&3));
    }

    #[test]
    fn builders_reject_small_parameters() {
        assert!(matches!(
            build_single_chain(2, 4),
            Err(Error::Domain { name: "p", .. })
        ));
        assert!(matches!(
            build_single_chain(5, 1),
            Err(Error::Domain { name: "q", .. })
        ));
        assert!(matches!(
            build_two_chain(1, 5, 3),
            Err(Error::Domain { name: "q1", .. })
        ));
        assert!(matches!(
            build_two_chain(3, 5, 0),
            Err(Error::Domain { name: "q2", .. })
        ));
    }

    #[test]
    fn k10_network_has_22_vertices() {
        let spec = k10_three_chains();
        let g = build_network(&spec).unwrap();
        assert_eq!(g.n, 22);
        assert_eq!(g.edge_count(), 45 + 12);
        // Chains occupy labels 11..=15, 16..=19, 20..=22 attached at 10, 5, 1.
        assert_eq!(
            g.chains[0]
                .vertices
                .iter()
                .map(|&v| g.label(v))
                .collect::<Vec<_>>(),
            vec![11, 12, 13, 14, 15]
        );
        assert_eq!(g.label(g.chains[0].from), 10);
        assert_eq!(g.label(g.chains[1].from), 5);
        assert_eq!(g.label(g.chains[2].from), 1);
        assert_eq!(spec.degree("K"), 3);
        assert!(spec.distinct_attachments("K"));
    }

    #[test]
    fn single_clique_network_is_complete_graph() {
        let spec = CliqueNetworkSpec {
            cliques: vec![CliqueDecl {
                id: "A".into(),
                p: 3,
            }],
            links: vec![],
        };
        let g = build_network(&spec).unwrap();
        let l = laplacian(&g);
        assert_eq!(l.diagonal(), vec![2.0; 3]);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(l.get(i, j), -1.0);
                }
            }
        }
    }

    #[test]
    fn two_cliques_joined_by_chain() {
        let spec = CliqueNetworkSpec {
            cliques: vec![
                CliqueDecl {
                    id: "A".into(),
                    p: 5,
                },
                CliqueDecl {
                    id: "B".into(),
                    p: 5,
                },
            ],
            links: vec![LinkDecl {
                from: Attachment {
                    clique: "A".into(),
                    vertex: 0,
                },
                to: LinkEnd::Clique(Attachment {
                    clique: "B".into(),
                    vertex: 2,
                }),
                length: 3,
            }],
        };
        let g = build_network(&spec).unwrap();
        assert_eq!((g.n, g.edge_count()), (13, 24));
        assert_eq!(spec.degree("A"), 1);
        assert_eq!(spec.degree("B"), 1);
    }

    #[test]
    fn disconnected_network_is_rejected() {
        let spec = CliqueNetworkSpec {
            cliques: vec![
                CliqueDecl {
                    id: "A".into(),
                    p: 3,
                },
                CliqueDecl {
                    id: "B".into(),
                    p: 4,
                },
            ],
            links: vec![],
        };
        assert_eq!(build_network(&spec), Err(Error::Disconnected));
    }

    #[test]
    fn invalid_attachment_is_rejected() {
        let mut spec = k10_three_chains();
        spec.links[0].from.vertex = 10;
        assert!(matches!(
            build_network(&spec),
            Err(Error::InvalidNetwork(_))
        ));
        let mut spec = k10_three_chains();
        spec.links[1].from.clique = "Z".into();
        assert!(matches!(
            build_network(&spec),
            Err(Error::InvalidNetwork(_))
        ));
    }

    #[test]
    fn shared_attachment_flag() {
        let mut spec = k10_three_chains();
        spec.links[1].from.vertex = 9;
        assert!(!spec.distinct_attachments("K"));
        let g = build_network(&spec).unwrap();
        let j = g.cliques[0].vertices[9];
        assert_eq!(
            g.roles[j],
            Role::Junction {
                clique: 0,
                chains: vec![0, 1]
            }
        );
    }

    #[test]
    fn json_round_trip_and_strictness() {
        let text = r#"{"cliques":[{"id":"K","p":10}],
            "links":[{"from":{"clique":"K","vertex":9},"to":"open","length":5},
                     {"from":{"clique":"K","vertex":4},"to":"open","length":4},
                     {"from":{"clique":"K","vertex":0},"to":"open","length":3}]}"#;
        let spec = CliqueNetworkSpec::from_json(text).unwrap();
        assert_eq!(spec, k10_three_chains());
        assert_eq!(CliqueNetworkSpec::from_json(&spec.to_json()).unwrap(), spec);

        let closed = r#"{"cliques":[{"id":"A","p":4},{"id":"B","p":4}],
            "links":[{"from":{"clique":"A","vertex":0},"to":{"clique":"B","vertex":1},"length":2}]}"#;
        let spec = CliqueNetworkSpec::from_json(closed).unwrap();
        assert!(matches!(spec.links[0].to, LinkEnd::Clique(_)));

        let unknown = r#"{"cliques":[{"id":"K","p":5,"colour":"red"}],"links":[]}"#;
        assert!(CliqueNetworkSpec::from_json(unknown).is_err());
        let unknown_top = r#"{"cliques":[{"id":"K","p":5}],"links":[],"extra":1}"#;
        assert!(CliqueNetworkSpec::from_json(unknown_top).is_err());
        let bad_end = r#"{"cliques":[{"id":"K","p":5}],"links":[{"from":{"clique":"K","vertex":0},"to":"closed","length":2}]}"#;
        assert!(CliqueNetworkSpec::from_json(bad_end).is_err());
    }

    #[test]
    fn single_chain_equals_equivalent_network() {
        for p in 3..=8 {
            for q in 2..=7 {
                let a = build_single_chain(p, q).unwrap();
                let spec = CliqueNetworkSpec {
                    cliques: vec![CliqueDecl { id: "K".into(), p }],
                    links: vec![LinkDecl {
                        from: Attachment {
                            clique: "K".into(),
                            vertex: p - 1,
                        },
                        to: LinkEnd::Open(OpenEnd::Open),
                        length: q - 1,
                    }],
                };
                let b = build_network(&spec).unwrap();
                let ea: BTreeSet<_> = a.edges.iter().collect();
                let eb: BTreeSet<_> = b.edges.iter().collect();
                assert_eq!(ea, eb);
                assert_eq!(a.roles, b.roles);
                assert_eq!(laplacian(&a), laplacian(&b));
            }
        }
    }
}
