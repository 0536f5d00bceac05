//! Immutable undirected simple graphs in compressed sparse row form.
//!
//! Every constructor normalises its input: self-loops are dropped, duplicate
//! and reversed edges collapse to one undirected edge, and external node ids
//! are remapped to dense internal ids in first-seen order. The external id of
//! each internal node is kept so reports can name nodes the way the input did.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::motif::mask;

pub type NodeId = u32;

/// How to split an edge-list line into tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Whitespace,
    Char(char),
}

/// Parse options for [`Graph::load_edge_list`].
#[derive(Debug, Clone)]
pub struct EdgeListOptions {
    /// Lines whose first non-blank character is one of these are skipped.
    pub comment_prefixes: Vec<char>,
    pub delimiter: Delimiter,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        // '#' covers SNAP headers, '%' covers KONECT.
        Self {
            comment_prefixes: vec!['#', '%'],
            delimiter: Delimiter::Whitespace,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    labels: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `node_count` nodes labelled `0..node_count`.
    ///
    /// Out-of-range endpoints are rejected; loops and duplicates are dropped.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u as usize >= node_count || v as usize >= node_count {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u != v {
                pairs.push((u.min(v), u.max(v)));
            }
        }
        Ok(Self::from_normalized(
            (0..node_count as u64).collect(),
            pairs,
        ))
    }

    /// Builds a graph from arbitrary external ids, remapping them densely in
    /// first-seen order. Fails with [`Error::EmptyGraph`] if no edge survives
    /// normalisation.
    pub fn from_labeled_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut remap = std::collections::HashMap::new();
        let mut labels = Vec::new();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            if a == b {
                continue;
            }
            let mut id = |x: u64| -> NodeId {
                *remap.entry(x).or_insert_with(|| {
                    labels.push(x);
                    (labels.len() - 1) as NodeId
                })
            };
            let (u, v) = (id(a), id(b));
            pairs.push((u.min(v), u.max(v)));
        }
        if pairs.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(Self::from_normalized(labels, pairs))
    }

    fn from_normalized(labels: Vec<u64>, mut pairs: Vec<(NodeId, NodeId)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let n = labels.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        for &(u, v) in &pairs {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Self {
            offsets,
            targets,
            labels,
            edge_count: pairs.len(),
        }
    }

    /// Parses a whitespace (or custom) delimited edge list.
    ///
    /// Only the first two tokens of a line are read, so KONECT files with
    /// weight or timestamp columns load as their underlying simple graph.
    pub fn load_edge_list<R: Read>(reader: R, options: &EdgeListOptions) -> Result<Self> {
        let mut edges = Vec::new();
        for (index, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let lineno = index + 1;
            let trimmed = line.trim();
            if trimmed.is_empty()
                || trimmed
                    .chars()
                    .next()
                    .is_some_and(|c| options.comment_prefixes.contains(&c))
            {
                continue;
            }
            let mut tokens: Box<dyn Iterator<Item = &str>> = match options.delimiter {
                Delimiter::Whitespace => Box::new(trimmed.split_whitespace()),
                Delimiter::Char(c) => Box::new(trimmed.split(c).map(str::trim)),
            };
            let mut endpoint = || -> Result<u64> {
                let token = tokens.next().ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: "expected two node ids".into(),
                })?;
                token.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("invalid node id {token:?}"),
                })
            };
            let a = endpoint()?;
            let b = endpoint()?;
            edges.push((a, b));
        }
        Self::from_labeled_edges(edges)
    }

    pub fn load_edge_list_path<P: AsRef<Path>>(path: P, options: &EdgeListOptions) -> Result<Self> {
        Self::load_edge_list(File::open(path)?, options)
    }

    /// Writes one `u v` line per undirected edge using external ids.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for u in 0..self.node_count() as NodeId {
            for &v in self.neighbors(u) {
                if u < v {
                    writeln!(
                        out,
                        "{} {}",
                        self.labels[u as usize], self.labels[v as usize]
                    )?;
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `D`, the sum of all degrees.
    #[inline]
    pub fn degree_sum(&self) -> u64 {
        2 * self.edge_count as u64
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn external_id(&self, v: NodeId) -> u64 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count() as NodeId)
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Component index per node plus the number of components.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let n = self.node_count();
        let mut comp = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if comp[start] != u32::MAX {
                continue;
            }
            comp[start] = count;
            queue.push_back(start as NodeId);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count as usize)
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.components().1 == 1
    }

    /// Induced subgraph on the largest connected component.
    ///
    /// Ties go to the component holding the smallest internal id. Internal ids
    /// keep their relative order and external ids are preserved.
    pub fn largest_connected_component(&self) -> Graph {
        let (comp, count) = self.components();
        if count <= 1 {
            return self.clone();
        }
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c as usize] += 1;
        }
        // Components are numbered in order of their smallest member, so the
        // first maximum is the tie-break winner.
        let best =
            (0..count).fold(0, |best, c| if sizes[c] > sizes[best] { c } else { best }) as u32;
        let mut new_id = vec![NodeId::MAX; self.node_count()];
        let mut labels = Vec::with_capacity(sizes[best as usize]);
        for (v, &c) in comp.iter().enumerate() {
            if c == best {
                new_id[v] = labels.len() as NodeId;
                labels.push(self.labels[v]);
            }
        }
        let mut pairs = Vec::new();
        for u in 0..self.node_count() as NodeId {
            if comp[u as usize] != best {
                continue;
            }
            for &v in self.neighbors(u) {
                if u < v {
                    pairs.push((new_id[u as usize], new_id[v as usize]));
                }
            }
        }
        Self::from_normalized(labels, pairs)
    }

    /// Edge bitmask of the subgraph induced by `nodes` (at most 7 of them).
    ///
    /// Bit [`mask::pair_bit`]`(i, j, nodes.len())` is set when `nodes[i]` and
    /// `nodes[j]` are adjacent.
    pub fn induced_edge_mask(&self, nodes: &[NodeId]) -> u32 {
        let k = nodes.len();
        debug_assert!(k <= mask::MAX_SMALL_GRAPH);
        let mut bits = 0u32;
        for i in 0..k {
            for j in i + 1..k {
                if self.has_edge(nodes[i], nodes[j]) {
                    bits |= 1 << mask::pair_bit(i, j, k);
                }
            }
        }
        bits
    }
}
