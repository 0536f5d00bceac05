//! The catalog of connected motifs on 3 to 5 vertices.
//!
//! Motifs are found by brute force: every edge bitmask on `k` vertices is
//! canonicalised over all `k!` relabelings and the connected classes are kept.
//! The per-motif constants the estimators divide by are then counted directly
//! on the motif:
//!
//! * `l` – fewest vertices in a walk (repeats allowed) that covers the motif,
//! * `L` – vertices on the longest simple path,
//! * `P_r(s)` – directed `s`-vertex walks covering all vertices (for `s >= k`)
//!   or directed simple `s`-vertex paths (for `s < k`),
//! * `P_w` – ways to assign the waddle draws to the off-path vertices once a
//!   longest path is fixed,
//! * `Z` – 2 when reversing the path along the window breaks the completion.
//!
//! Ids follow a fixed convention: (3,1) wedge, (3,2) triangle, (4,1) star,
//! (4,2) path, (4,6) clique, (5,2) fork, (5,3) star, (5,6) cricket, (5,21)
//! clique. Every other id is handed out in order of edge count, then
//! canonical code.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_K: usize = 3;
pub const MAX_K: usize = 5;

/// Bit-level helpers for graphs on at most [`mask::MAX_SMALL_GRAPH`] vertices.
///
/// An edge set is a `u32` with one bit per unordered vertex pair, pairs taken
/// in lexicographic order `(0,1), (0,2), .., (0,k-1), (1,2), ..`.
pub mod mask {
    pub const MAX_SMALL_GRAPH: usize = 7;

    #[inline]
    pub const fn pair_count(k: usize) -> usize {
        k * (k - 1) / 2
    }

    #[inline]
    pub fn pair_bit(i: usize, j: usize, k: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(j < k && i != j);
        i * k - i * (i + 1) / 2 + (j - i - 1)
    }

    #[inline]
    pub fn has_edge(bits: u32, i: usize, j: usize, k: usize) -> bool {
        bits & (1 << pair_bit(i, j, k)) != 0
    }

    /// Neighbor sets as vertex bitsets.
    pub fn adjacency(bits: u32, k: usize) -> [u8; MAX_SMALL_GRAPH] {
        let mut adj = [0u8; MAX_SMALL_GRAPH];
        for i in 0..k {
            for j in i + 1..k {
                if has_edge(bits, i, j, k) {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        adj
    }

    /// Relabels vertex `i` as `perm[i]`.
    pub fn permute(bits: u32, perm: &[usize], k: usize) -> u32 {
        let mut out = 0;
        for i in 0..k {
            for j in i + 1..k {
                if has_edge(bits, i, j, k) {
                    out |= 1 << pair_bit(perm[i], perm[j], k);
                }
            }
        }
        out
    }

    pub fn is_connected(bits: u32, k: usize) -> bool {
        if k == 0 {
            return false;
        }
        let adj = adjacency(bits, k);
        let full = ((1u16 << k) - 1) as u8;
        let mut seen = 1u8;
        let mut frontier = 1u8;
        while frontier != 0 {
            let mut next = 0u8;
            for (v, &row) in adj.iter().enumerate().take(k) {
                if frontier & (1 << v) != 0 {
                    next |= row;
                }
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == full
    }

    /// All permutations of `0..k` in lexicographic order.
    pub fn permutations(k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..k).collect();
        loop {
            out.push(current.clone());
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
                return out;
            };
            let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
    }
}

/// `M(k, m)`: motif `m` among the connected motifs on `k` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MotifId {
    pub k: u8,
    pub m: u8,
}

impl MotifId {
    pub const fn new(k: u8, m: u8) -> Self {
        Self { k, m }
    }
}

impl fmt::Display for MotifId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({},{})", self.k, self.m)
    }
}

impl FromStr for MotifId {
    type Err = Error;

    /// Accepts `k,m` or `M(k,m)`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .trim_start_matches("M(")
            .trim_start_matches('(')
            .trim_end_matches(')');
        let bad = || Error::InvalidArgument(format!("motif id {s:?} is not of the form k,m"));
        let (k, m) = inner.split_once(',').ok_or_else(bad)?;
        Ok(Self {
            k: k.trim().parse().map_err(|_| bad())?,
            m: m.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// One way of laying a motif walk over the last `s` walk nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathEmbedding {
    /// Motif vertex placed at each window position, oldest first.
    pub vertices: Vec<u8>,
    /// For each waddle draw, the window position whose neighbors it samples.
    /// Empty unless the embedding is a longest simple path shorter than `k`.
    pub waddle_anchors: Vec<u8>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MotifEntry {
    pub id: MotifId,
    pub canonical_code: u32,
    pub edge_count: u32,
    /// `l(k,m)`.
    pub shortest_cover: usize,
    /// `L(k,m)`.
    pub longest_path: usize,
    /// `Z(k,m)`, 1 for motifs that never waddle.
    pub symmetry: u32,
    /// `P_r(k,m,s)` for `s` in `L..=l`.
    pub pr_table: BTreeMap<usize, u64>,
    /// `P_w(k,m,L)`, 1 for motifs that never waddle.
    pub pw: u64,
    #[serde(skip)]
    embeddings: BTreeMap<usize, Vec<PathEmbedding>>,
}

impl MotifEntry {
    pub fn k(&self) -> usize {
        self.id.k as usize
    }

    pub fn pr(&self, s: usize) -> Option<u64> {
        self.pr_table.get(&s).copied()
    }

    /// True when the longest simple path misses some vertex, so the walk
    /// window has to be completed by waddling.
    pub fn is_waddled(&self) -> bool {
        self.longest_path < self.k()
    }

    /// `P_r(k,m,L) * P_w(k,m,L) / Z(k,m)`: the number of (window, waddle)
    /// outcomes that reveal one copy of the motif.
    pub fn waddle_divisor(&self) -> f64 {
        let pr = self.pr(self.longest_path).unwrap_or(0);
        (pr * self.pw) as f64 / self.symmetry as f64
    }

    /// Embeddings stored for `s = L` and `s = l`.
    pub fn embeddings(&self, s: usize) -> &[PathEmbedding] {
        self.embeddings.get(&s).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Uniform choice among the `P_r(k,m,s)` embeddings.
    pub fn random_path_embedding<R: Rng + ?Sized>(
        &self,
        s: usize,
        rng: &mut R,
    ) -> Option<&PathEmbedding> {
        let all = self.embeddings(s);
        if all.is_empty() {
            None
        } else {
            Some(&all[rng.gen_range(0..all.len())])
        }
    }

    /// Adjacency bitsets of the canonical representative.
    pub fn adjacency(&self) -> [u8; mask::MAX_SMALL_GRAPH] {
        mask::adjacency(self.canonical_code, self.k())
    }
}

#[derive(Debug, Clone)]
pub struct MotifCatalog {
    k_max: usize,
    entries: Vec<Vec<MotifEntry>>,
    // mask -> m, 0 for disconnected; indexed by k.
    classifier: Vec<Vec<u8>>,
}

impl MotifCatalog {
    pub fn build(k_max: usize) -> Result<Self> {
        if !(MIN_K..=MAX_K).contains(&k_max) {
            return Err(Error::MotifSize(k_max));
        }
        let mut entries = vec![Vec::new(); k_max + 1];
        let mut classifier = vec![Vec::new(); k_max + 1];
        for k in MIN_K..=k_max {
            let (e, table) = build_size(k)?;
            entries[k] = e;
            classifier[k] = table;
        }
        let catalog = Self {
            k_max,
            entries,
            classifier,
        };
        catalog.check_anchored_divisors()?;
        Ok(catalog)
    }

    /// The full `k <= 5` catalog, built once per process.
    pub fn shared() -> &'static MotifCatalog {
        static CATALOG: OnceLock<MotifCatalog> = OnceLock::new();
        CATALOG.get_or_init(|| MotifCatalog::build(MAX_K).expect("motif catalog invariants"))
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// `T_k`.
    pub fn motif_count(&self, k: usize) -> usize {
        self.entries.get(k).map_or(0, Vec::len)
    }

    pub fn entries(&self, k: usize) -> &[MotifEntry] {
        self.entries.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn entry(&self, id: MotifId) -> Option<&MotifEntry> {
        self.entries(id.k as usize)
            .get((id.m as usize).checked_sub(1)?)
    }

    pub fn require(&self, id: MotifId) -> Result<&MotifEntry> {
        self.entry(id).ok_or(Error::UnknownMotif(id))
    }

    pub fn ensure_k(&self, k: usize) -> Result<()> {
        if (MIN_K..=self.k_max).contains(&k) {
            Ok(())
        } else {
            Err(Error::MotifSize(k))
        }
    }

    /// Motif of a `size`-vertex edge set, or `None` when it is disconnected.
    /// The answer does not depend on how the vertices are labelled.
    #[inline]
    pub fn classify(&self, bits: u32, size: usize) -> Option<MotifId> {
        match self.classifier.get(size)?.get(bits as usize).copied() {
            Some(0) | None => None,
            Some(m) => Some(MotifId::new(size as u8, m)),
        }
    }

    /// Minimum relabeled edge mask, the canonical form.
    pub fn canonical_code(bits: u32, size: usize) -> u32 {
        mask::permutations(size)
            .iter()
            .map(|p| mask::permute(bits, p, size))
            .min()
            .unwrap_or(bits)
    }

    fn check_anchored_divisors(&self) -> Result<()> {
        // The specialised 4- and 5-node walks waddle from fixed window
        // positions and divide by these constants.
        let anchored: [(MotifId, &[u8], f64); 4] = [
            (MotifId::new(4, 1), &[1], 6.0),
            (MotifId::new(5, 2), &[1], 2.0),
            (MotifId::new(5, 6), &[1], 4.0),
            (MotifId::new(5, 3), &[1, 1], 24.0),
        ];
        for (id, anchors, expected) in anchored {
            let Some(entry) = self.entry(id) else {
                continue;
            };
            if entry.waddle_divisor() != expected {
                return Err(Error::Catalog(format!(
                    "{id}: P_r*P_w/Z = {} but the specialised walk divides by {expected}",
                    entry.waddle_divisor()
                )));
            }
            let fixed = fixed_plan_outcomes(entry, anchors) as f64;
            if fixed != expected {
                return Err(Error::Catalog(format!(
                    "{id}: fixed-anchor waddle reveals {fixed} outcomes per copy, expected {expected}"
                )));
            }
        }
        Ok(())
    }
}

/// Directed simple paths of every length, grouped by vertex count.
fn simple_paths(adj: &[u8], k: usize) -> BTreeMap<usize, Vec<Vec<u8>>> {
    fn extend(adj: &[u8], path: &mut Vec<u8>, used: u8, out: &mut BTreeMap<usize, Vec<Vec<u8>>>) {
        out.entry(path.len()).or_default().push(path.clone());
        let last = *path.last().unwrap() as usize;
        let mut next = adj[last] & !used;
        while next != 0 {
            let v = next.trailing_zeros() as u8;
            next &= next - 1;
            path.push(v);
            extend(adj, path, used | (1 << v), out);
            path.pop();
        }
    }
    let mut out = BTreeMap::new();
    for v in 0..k as u8 {
        extend(adj, &mut vec![v], 1 << v, &mut out);
    }
    out
}

/// Directed walks of exactly `s` vertices visiting every vertex.
fn covering_walks(adj: &[u8], k: usize, s: usize) -> Vec<Vec<u8>> {
    fn extend(
        adj: &[u8],
        full: u8,
        k: usize,
        s: usize,
        walk: &mut Vec<u8>,
        seen: u8,
        out: &mut Vec<Vec<u8>>,
    ) {
        let missing = k - seen.count_ones() as usize;
        if missing > s - walk.len() {
            return;
        }
        if walk.len() == s {
            if seen == full {
                out.push(walk.clone());
            }
            return;
        }
        let last = *walk.last().unwrap() as usize;
        let mut next = adj[last];
        while next != 0 {
            let v = next.trailing_zeros() as u8;
            next &= next - 1;
            walk.push(v);
            extend(adj, full, k, s, walk, seen | (1 << v), out);
            walk.pop();
        }
    }
    let full = ((1u16 << k) - 1) as u8;
    let mut out = Vec::new();
    for v in 0..k as u8 {
        extend(adj, full, k, s, &mut vec![v], 1 << v, &mut out);
    }
    out
}

/// Vertex count of the shortest covering walk, by BFS over
/// (current vertex, visited set).
fn shortest_cover(adj: &[u8], k: usize) -> usize {
    let full = ((1u16 << k) - 1) as u8;
    let mut dist: HashMap<(u8, u8), usize> = HashMap::new();
    let mut queue = std::collections::VecDeque::new();
    for v in 0..k as u8 {
        dist.insert((v, 1 << v), 1);
        queue.push_back((v, 1u8 << v));
    }
    while let Some((v, seen)) = queue.pop_front() {
        let d = dist[&(v, seen)];
        if seen == full {
            return d;
        }
        let mut next = adj[v as usize];
        while next != 0 {
            let w = next.trailing_zeros() as u8;
            next &= next - 1;
            let state = (w, seen | (1 << w));
            if let Entry::Vacant(e) = dist.entry(state) {
                e.insert(d + 1);
                queue.push_back(state);
            }
        }
    }
    unreachable!("motifs are connected")
}

/// Off-path vertices in ascending order, each anchored at the first window
/// position adjacent to it.
fn waddle_plan(adj: &[u8], k: usize, path: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    let on_path: u8 = path.iter().fold(0, |acc, &v| acc | (1 << v));
    let mut targets = Vec::new();
    let mut anchors = Vec::new();
    for v in 0..k as u8 {
        if on_path & (1 << v) != 0 {
            continue;
        }
        let pos = path
            .iter()
            .position(|&p| adj[p as usize] & (1 << v) != 0)
            .ok_or_else(|| {
                Error::Catalog(format!("vertex {v} is two hops off the longest path"))
            })?;
        targets.push(v);
        anchors.push(pos as u8);
    }
    Ok((targets, anchors))
}

/// Number of slot -> vertex bijections with each slot's vertex adjacent to
/// `path[anchor]`.
fn count_assignments(adj: &[u8], path: &[u8], anchors: &[u8], targets: &[u8]) -> u64 {
    fn go(adj: &[u8], path: &[u8], anchors: &[u8], targets: &[u8], slot: usize, used: u8) -> u64 {
        if slot == anchors.len() {
            return 1;
        }
        let anchor = path[anchors[slot] as usize] as usize;
        targets
            .iter()
            .enumerate()
            .filter(|&(i, &t)| used & (1 << i) == 0 && adj[anchor] & (1 << t) != 0)
            .map(|(i, _)| go(adj, path, anchors, targets, slot + 1, used | (1 << i)))
            .sum()
    }
    go(adj, path, anchors, targets, 0, 0)
}

/// Waddle tuples that complete window `path` to the whole motif when draw
/// `j` samples the neighbors of `path[anchors[j]]`.
fn completions(adj: &[u8], k: usize, path: &[u8], anchors: &[u8]) -> u64 {
    let on_path: u8 = path.iter().fold(0, |acc, &v| acc | (1 << v));
    let targets: Vec<u8> = (0..k as u8).filter(|v| on_path & (1 << v) == 0).collect();
    if targets.len() != anchors.len() {
        return 0;
    }
    count_assignments(adj, path, anchors, &targets)
}

/// Sum over every longest path of the motif, taken as a walk window, of the
/// waddle outcomes that complete it under a fixed anchor plan.
pub(crate) fn fixed_plan_outcomes(entry: &MotifEntry, anchors: &[u8]) -> u64 {
    let adj = entry.adjacency();
    entry
        .embeddings(entry.longest_path)
        .iter()
        .map(|window| completions(&adj, entry.k(), &window.vertices, anchors))
        .sum()
}

fn build_size(k: usize) -> Result<(Vec<MotifEntry>, Vec<u8>)> {
    let pairs = mask::pair_count(k);
    let perms = mask::permutations(k);
    let mut canon_of = vec![u32::MAX; 1 << pairs];
    let mut codes: Vec<u32> = Vec::new();
    for bits in 0..(1u32 << pairs) {
        if canon_of[bits as usize] != u32::MAX || !mask::is_connected(bits, k) {
            continue;
        }
        let images: Vec<u32> = perms.iter().map(|p| mask::permute(bits, p, k)).collect();
        let code = *images.iter().min().unwrap();
        for img in images {
            canon_of[img as usize] = code;
        }
        codes.push(code);
    }

    let mut entries = Vec::with_capacity(codes.len());
    for &code in &codes {
        entries.push(measure(k, code)?);
    }
    assign_ids(k, &mut entries)?;
    entries.sort_by_key(|e| e.id.m);

    let by_code: HashMap<u32, u8> = entries.iter().map(|e| (e.canonical_code, e.id.m)).collect();
    let table = canon_of
        .iter()
        .map(|&c| if c == u32::MAX { 0 } else { by_code[&c] })
        .collect();
    Ok((entries, table))
}

fn measure(k: usize, code: u32) -> Result<MotifEntry> {
    let adj = mask::adjacency(code, k);
    let paths = simple_paths(&adj, k);
    let (&longest, longest_paths) = paths.iter().next_back().unwrap();
    let cover = shortest_cover(&adj, k);

    let mut pr_table = BTreeMap::new();
    let mut embeddings = BTreeMap::new();
    for s in longest..=cover {
        let found: Vec<Vec<u8>> = if s < k {
            paths.get(&s).cloned().unwrap_or_default()
        } else {
            covering_walks(&adj, k, s)
        };
        pr_table.insert(s, found.len() as u64);
        if s == longest || s == cover {
            let mut list = Vec::with_capacity(found.len());
            for vertices in found {
                let waddle_anchors = if s < k {
                    waddle_plan(&adj, k, &vertices)?.1
                } else {
                    Vec::new()
                };
                list.push(PathEmbedding {
                    vertices,
                    waddle_anchors,
                });
            }
            embeddings.insert(s, list);
        }
    }
    debug_assert_eq!(longest_paths.len() as u64, pr_table[&longest]);

    let (pw, symmetry) = if longest < k {
        let canonical = &embeddings[&longest][0].vertices;
        let (targets, anchors) = waddle_plan(&adj, k, canonical)?;
        let pw = count_assignments(&adj, canonical, &anchors, &targets);
        let reversed: Vec<u8> = canonical.iter().rev().copied().collect();
        let z = if count_assignments(&adj, &reversed, &anchors, &targets) > 0 {
            1
        } else {
            2
        };
        (pw, z)
    } else {
        (1, 1)
    };

    let entry = MotifEntry {
        id: MotifId::new(k as u8, 0),
        canonical_code: code,
        edge_count: code.count_ones(),
        shortest_cover: cover,
        longest_path: longest,
        symmetry,
        pr_table,
        pw,
        embeddings,
    };
    if entry.is_waddled() {
        check_random_embedding_normalizer(&entry)?;
    }
    Ok(entry)
}

/// The generic walk picks one of the `P_r` longest-path embeddings at random
/// and waddles from the anchors that embedding dictates. Averaged over that
/// choice, a copy of the motif must be revealed by exactly
/// `P_r * P_w / Z` (window, waddle) outcomes.
fn check_random_embedding_normalizer(entry: &MotifEntry) -> Result<()> {
    let adj = entry.adjacency();
    let k = entry.k();
    let embeddings = entry.embeddings(entry.longest_path);
    let mut total = 0u64;
    for window in embeddings {
        for plan in embeddings {
            // Laying motif path `plan` onto the window decides which window
            // positions get sampled; the graph copy is the motif itself.
            total += completions(&adj, k, &window.vertices, &plan.waddle_anchors);
        }
    }
    let pr = embeddings.len() as u64;
    if total * entry.symmetry as u64 != pr * pr * entry.pw {
        return Err(Error::Catalog(format!(
            "code {:#x}: random-embedding waddle reveals {total}/{pr} outcomes, P_r*P_w/Z = {}",
            entry.canonical_code,
            entry.waddle_divisor()
        )));
    }
    Ok(())
}

fn max_degree(entry: &MotifEntry) -> u32 {
    entry.adjacency()[..entry.k()]
        .iter()
        .map(|a| a.count_ones())
        .max()
        .unwrap_or(0)
}

fn assign_ids(k: usize, entries: &mut [MotifEntry]) -> Result<()> {
    type Anchor = (u8, fn(&MotifEntry) -> bool);
    let anchors: &[Anchor] = match k {
        3 => &[(1, |e| e.edge_count == 2), (2, |e| e.edge_count == 3)],
        4 => &[
            (1, |e| e.edge_count == 3 && max_degree(e) == 3),
            (2, |e| e.edge_count == 3 && max_degree(e) == 2),
            (6, |e| e.edge_count == 6),
        ],
        5 => &[
            (2, |e| e.longest_path == 4 && e.edge_count == 4),
            (3, |e| e.longest_path == 3),
            (6, |e| e.longest_path == 4 && e.edge_count == 5),
            (21, |e| e.edge_count == 10),
        ],
        _ => &[],
    };
    let mut taken = vec![false; entries.len() + 1];
    for &(m, matches) in anchors {
        let hits: Vec<usize> = (0..entries.len())
            .filter(|&i| matches(&entries[i]))
            .collect();
        if hits.len() != 1 || m as usize > entries.len() {
            return Err(Error::Catalog(format!(
                "anchor M({k},{m}) matched {} motifs",
                hits.len()
            )));
        }
        entries[hits[0]].id.m = m;
        taken[m as usize] = true;
    }
    let mut rest: Vec<usize> = (0..entries.len())
        .filter(|&i| entries[i].id.m == 0)
        .collect();
    rest.sort_by_key(|&i| (entries[i].edge_count, entries[i].canonical_code));
    let mut free = (1..=entries.len()).filter(|&m| !taken[m]);
    for i in rest {
        entries[i].id.m = free.next().unwrap() as u8;
    }
    Ok(())
}
