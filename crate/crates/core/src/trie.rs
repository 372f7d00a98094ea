//! Cardinal trees (tries) over byte alphabets.
//!
//! Nodes are dense ids `0..n` assigned in pre-order, so node `0` is always the
//! root and `preorder` is the identity permutation. Every edge label is a
//! byte; the root's incoming label is the sentinel `#`, the smallest byte that
//! labels no edge.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// The effective alphabet of a trie: the bytes that label at least one edge,
/// plus the sentinel.
///
/// The sentinel precedes every symbol in the alphabet order even when its
/// byte value is larger (e.g. when `0x00` labels an edge).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<u8>,
    sentinel: u8,
}

impl Alphabet {
    /// Builds the alphabet of the given edge labels, choosing the smallest
    /// unused byte as sentinel.
    pub fn from_labels<I: IntoIterator<Item = u8>>(labels: I) -> Result<Self> {
        let mut used = [false; 256];
        for b in labels {
            used[b as usize] = true;
        }
        let sentinel = used.iter().position(|&u| !u).ok_or(Error::NoSentinel)? as u8;
        let symbols = (0..=255u8).filter(|&b| used[b as usize]).collect();
        Ok(Alphabet { symbols, sentinel })
    }

    /// Rebuilds an alphabet from stored parts, validating the invariants.
    pub fn from_parts(sentinel: u8, symbols: Vec<u8>) -> Result<Self> {
        if symbols.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed("alphabet symbols not strictly increasing".into()));
        }
        if symbols.contains(&sentinel) {
            return Err(Error::Malformed("sentinel labels an edge".into()));
        }
        let expected = Alphabet::from_labels(symbols.iter().copied())?;
        if expected.sentinel != sentinel {
            return Err(Error::Malformed("sentinel is not the smallest unused byte".into()));
        }
        Ok(Alphabet { symbols, sentinel })
    }

    /// Non-sentinel symbols in increasing order.
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn sentinel(&self) -> u8 {
        self.sentinel
    }

    /// Number of non-sentinel symbols.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Index of `symbol` among the non-sentinel symbols.
    pub fn index_of(&self, symbol: u8) -> Option<usize> {
        self.symbols.binary_search(&symbol).ok()
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.index_of(symbol).is_some()
    }

    /// Compares two bytes under the alphabet order: sentinel first, then byte order.
    pub fn cmp_symbols(&self, a: u8, b: u8) -> Ordering {
        match (a == self.sentinel, b == self.sentinel) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => a.cmp(&b),
        }
    }
}

/// Per-symbol edge counts `n_1..n_sigma` of a trie with `n` nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolDistribution {
    n: u64,
    symbols: Vec<u8>,
    counts: Vec<u64>,
}

impl SymbolDistribution {
    /// Distribution over the symbols `a`, `b`, `c`, ... in order.
    pub fn new(n: u64, counts: Vec<u64>) -> Result<Self> {
        if counts.len() > 26 {
            let symbols = (0..counts.len()).map(|i| i as u8 + 1).collect();
            return Self::with_symbols(n, symbols, counts);
        }
        let symbols = (0..counts.len()).map(|i| b'a' + i as u8).collect();
        Self::with_symbols(n, symbols, counts)
    }

    pub fn with_symbols(n: u64, symbols: Vec<u8>, counts: Vec<u64>) -> Result<Self> {
        if symbols.len() != counts.len() {
            return Err(Error::InvalidMatrix("symbol and count lengths differ".into()));
        }
        if symbols.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMatrix("symbols not strictly increasing".into()));
        }
        if n == 0 || counts.iter().sum::<u64>() != n - 1 {
            return Err(Error::Infeasible);
        }
        if counts.is_empty() && n != 1 {
            return Err(Error::Infeasible);
        }
        Ok(SymbolDistribution { n, symbols, counts })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sigma(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }
}

/// An edge-labeled ordered tree with distinct, label-sorted sibling edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trie {
    parent: Vec<NodeId>,
    label: Vec<u8>,
    depth: Vec<usize>,
    child_start: Vec<usize>,
    child_ids: Vec<NodeId>,
    alphabet: Alphabet,
}

impl Trie {
    /// The trie with a single node.
    pub fn single() -> Self {
        let alphabet = Alphabet::from_labels(std::iter::empty()).expect("empty alphabet");
        Trie {
            parent: vec![0],
            label: vec![alphabet.sentinel],
            depth: vec![0],
            child_start: vec![0, 0],
            child_ids: Vec::new(),
            alphabet,
        }
    }

    /// Builds a trie from an arbitrary parent/label description.
    ///
    /// `parent[root] == root`; the root's label is ignored. Node ids of the
    /// result are re-assigned in pre-order.
    pub fn from_parent_labels(parent: &[usize], labels: &[u8]) -> Result<Self> {
        let n = parent.len();
        if n == 0 || labels.len() != n {
            return Err(Error::InvalidTrie("parent and label arrays must be nonempty and equal length".into()));
        }
        let roots: Vec<usize> = (0..n).filter(|&u| parent[u] == u).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidTrie(format!("expected exactly one root, found {}", roots.len())));
        }
        let root = roots[0];
        let mut children: Vec<Vec<(u8, usize)>> = vec![Vec::new(); n];
        for u in 0..n {
            if u == root {
                continue;
            }
            if parent[u] >= n {
                return Err(Error::InvalidTrie(format!("parent of node {u} out of range")));
            }
            children[parent[u]].push((labels[u], u));
        }
        for (u, list) in children.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidTrie(format!("node {u} has two outgoing edges with the same label")));
            }
        }
        let alphabet = Alphabet::from_labels((0..n).filter(|&u| u != root).map(|u| labels[u]))?;

        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            order.push(u);
            if order.len() > n {
                break;
            }
            stack.extend(children[u].iter().rev().map(|&(_, v)| v));
        }
        if order.len() != n {
            return Err(Error::InvalidTrie("not every node is reachable from the root".into()));
        }
        let mut new_id = vec![0usize; n];
        for (i, &u) in order.iter().enumerate() {
            new_id[u] = i;
        }
        let mut builder = TrieBuilder::with_capacity(n);
        for &u in &order {
            let p = if u == root { 0 } else { new_id[parent[u]] };
            builder.push(p, if u == root { alphabet.sentinel } else { labels[u] });
        }
        for &u in &order {
            builder.set_children(children[u].iter().map(|&(_, v)| new_id[v]));
        }
        Ok(builder.finish(alphabet))
    }

    /// Rebuilds a trie from the out-label sets of its nodes listed in pre-order.
    ///
    /// Each node after the root is attached to the deepest pending edge on the
    /// left. Fails with [`Error::NotInImage`] when no edge is pending for some
    /// node or edges remain pending at the end.
    pub fn from_out_sets<S: AsRef<[u8]>>(out_sets: &[S]) -> Result<Self> {
        let n = out_sets.len();
        if n == 0 {
            return Err(Error::NotInImage);
        }
        let mut parent = vec![0usize; n];
        let mut labels = vec![0u8; n];
        // Pending edges, leftmost on top.
        let mut pending: Vec<(usize, u8)> = Vec::new();
        for (j, set) in out_sets.iter().enumerate() {
            let set = set.as_ref();
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidMatrix(format!("out-set of node {} not strictly increasing", j + 1)));
            }
            if j > 0 {
                let (p, c) = pending.pop().ok_or(Error::NotInImage)?;
                parent[j] = p;
                labels[j] = c;
            }
            pending.extend(set.iter().rev().map(|&c| (j, c)));
        }
        if !pending.is_empty() {
            return Err(Error::NotInImage);
        }
        // Attachment order is already pre-order with label-sorted siblings.
        let alphabet = Alphabet::from_labels(labels[1..].iter().copied())?;
        labels[0] = alphabet.sentinel;
        let mut builder = TrieBuilder::with_capacity(n);
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for j in 1..n {
            children[parent[j]].push(j);
        }
        for j in 0..n {
            builder.push(parent[j], labels[j]);
        }
        for list in children {
            builder.set_children(list.into_iter());
        }
        Ok(builder.finish(alphabet))
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Parent of `u`; the root is its own parent.
    pub fn parent(&self, u: NodeId) -> NodeId {
        self.parent[u]
    }

    /// Incoming edge label of `u` (the sentinel for the root).
    pub fn label(&self, u: NodeId) -> u8 {
        self.label[u]
    }

    pub fn depth(&self, u: NodeId) -> usize {
        self.depth[u]
    }

    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Children of `u` as `(label, child)` pairs in label order.
    pub fn children(&self, u: NodeId) -> impl Iterator<Item = (u8, NodeId)> + '_ {
        self.child_ids[self.child_start[u]..self.child_start[u + 1]]
            .iter()
            .map(move |&v| (self.label[v], v))
    }

    /// Labels of the edges leaving `u`, in increasing order.
    pub fn out_labels(&self, u: NodeId) -> Vec<u8> {
        self.children(u).map(|(c, _)| c).collect()
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.child_start[u + 1] - self.child_start[u]
    }

    pub fn child(&self, u: NodeId, c: u8) -> Option<NodeId> {
        self.children(u).find(|&(l, _)| l == c).map(|(_, v)| v)
    }

    /// The string labeling the path from the root to `u`.
    pub fn path(&self, u: NodeId) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.depth[u]);
        let mut v = u;
        while v != 0 {
            out.push(self.label[v]);
            v = self.parent[v];
        }
        out.reverse();
        out
    }

    /// Nodes in depth-first pre-order.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root()];
        while let Some(u) = stack.pop() {
            order.push(u);
            stack.extend(self.child_ids[self.child_start[u]..self.child_start[u + 1]].iter().rev());
        }
        order
    }

    /// Compares the incoming path strings of two nodes co-lexicographically
    /// (right to left, empty string smallest).
    pub fn cmp_colex(&self, a: NodeId, b: NodeId) -> Ordering {
        let (mut a, mut b) = (a, b);
        loop {
            match (a == 0, b == 0) {
                (true, true) => return Ordering::Equal,
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                (false, false) => match self.label[a].cmp(&self.label[b]) {
                    Ordering::Equal => {
                        a = self.parent[a];
                        b = self.parent[b];
                    }
                    other => return other,
                },
            }
        }
    }

    /// Nodes sorted co-lexicographically by their incoming path strings.
    pub fn colex_order(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.cmp_colex(a, b));
        order
    }

    /// The last `k` symbols of the root-to-`u` path, left-padded with the
    /// sentinel when `u` is shallower than `k`.
    pub fn context(&self, u: NodeId, k: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(k);
        let mut v = u;
        for _ in 0..k {
            // The root's label is the sentinel and the root is its own parent.
            out.push(self.label[v]);
            v = self.parent[v];
        }
        out.reverse();
        out
    }

    /// Counts nodes whose `|pattern|`-th order context equals `pattern` by
    /// checking every node.
    pub fn naive_count(&self, pattern: &[u8]) -> Result<usize> {
        if pattern.contains(&self.alphabet.sentinel) {
            return Err(Error::PatternContainsSentinel);
        }
        let m = pattern.len();
        Ok((0..self.len())
            .filter(|&u| {
                if self.depth[u] < m {
                    return false;
                }
                let mut v = u;
                pattern.iter().rev().all(|&c| {
                    let ok = self.label[v] == c;
                    v = self.parent[v];
                    ok
                })
            })
            .count())
    }

    /// Per-symbol edge counts over the trie's effective alphabet.
    pub fn symbol_distribution(&self) -> SymbolDistribution {
        let mut counts = vec![0u64; self.alphabet.len()];
        for u in 1..self.len() {
            let i = self.alphabet.index_of(self.label[u]).expect("edge label in alphabet");
            counts[i] += 1;
        }
        SymbolDistribution {
            n: self.len() as u64,
            symbols: self.alphabet.symbols.clone(),
            counts,
        }
    }
}

/// Accumulates nodes already in pre-order.
struct TrieBuilder {
    parent: Vec<NodeId>,
    label: Vec<u8>,
    depth: Vec<usize>,
    child_start: Vec<usize>,
    child_ids: Vec<NodeId>,
}

impl TrieBuilder {
    fn with_capacity(n: usize) -> Self {
        TrieBuilder {
            parent: Vec::with_capacity(n),
            label: Vec::with_capacity(n),
            depth: Vec::with_capacity(n),
            child_start: Vec::with_capacity(n + 1),
            child_ids: Vec::with_capacity(n.saturating_sub(1)),
        }
    }

    fn push(&mut self, parent: NodeId, label: u8) {
        let d = if self.parent.is_empty() { 0 } else { self.depth[parent] + 1 };
        self.parent.push(parent);
        self.label.push(label);
        self.depth.push(d);
    }

    fn set_children<I: Iterator<Item = NodeId>>(&mut self, children: I) {
        self.child_start.push(self.child_ids.len());
        self.child_ids.extend(children);
    }

    fn finish(mut self, alphabet: Alphabet) -> Trie {
        self.child_start.push(self.child_ids.len());
        Trie {
            parent: self.parent,
            label: self.label,
            depth: self.depth,
            child_start: self.child_start,
            child_ids: self.child_ids,
            alphabet,
        }
    }
}

/// Builds the trie of all prefixes of `strings`.
pub fn build_from_strings<S: AsRef<[u8]>>(strings: &[S]) -> Result<Trie> {
    if strings.is_empty() {
        return Err(Error::InvalidTrie("empty string set".into()));
    }
    #[derive(Default)]
    struct Node(BTreeMap<u8, Node>);

    let mut root = Node::default();
    for s in strings {
        let mut cur = &mut root;
        for &b in s.as_ref() {
            cur = cur.0.entry(b).or_default();
        }
    }

    let mut labels_used = [false; 256];
    let mut parent = Vec::new();
    let mut label = Vec::new();
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<(&Node, usize, u8)> = vec![(&root, 0, 0)];
    while let Some((node, p, c)) = stack.pop() {
        let id = parent.len();
        parent.push(p);
        label.push(c);
        children.push(Vec::new());
        if id > 0 {
            labels_used[c as usize] = true;
            children[p].push(id);
        }
        for (&b, child) in node.0.iter().rev() {
            stack.push((child, id, b));
        }
    }
    let alphabet = Alphabet::from_labels((0..=255u8).filter(|&b| labels_used[b as usize]))?;
    label[0] = alphabet.sentinel;
    let mut builder = TrieBuilder::with_capacity(parent.len());
    for (&p, &c) in parent.iter().zip(&label) {
        builder.push(p, c);
    }
    for list in children {
        builder.set_children(list.into_iter());
    }
    Ok(builder.finish(alphabet))
}

/// Splits the newline-delimited input format into strings. A trailing LF
/// terminates the last string rather than starting a new one.
pub fn parse_strings(data: &[u8]) -> Vec<Vec<u8>> {
    if data.is_empty() {
        return Vec::new();
    }
    let body = data.strip_suffix(b"\n").unwrap_or(data);
    body.split(|&b| b == b'\n').map(<[u8]>::to_vec).collect()
}
