//! Decorated trees of cylinders and the volume of `Q(1^K, -1^{K+4})`.
//!
//! A genus-0 pillowcase cover decomposes into horizontal cylinders (tree
//! edges) glued along singular layers (tree vertices). Each vertex carries
//! a decoration `a_v`; together with the valence `l_v` it fixes the numbers
//! of zeros `m_v = a_v + l_v - 1` and poles `n_v = a_v - l_v + 3` on the
//! layer. Summing the contributions of all decorated trees recovers the
//! Masur-Veech volume.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::arith::{
    compositions, factorial, int_rat, multinomial, zeta_even, BigRational, PiValue,
};
use crate::error::{Error, Result};
use crate::local::{local_polynomial, LayerSignature};
use crate::poly::{Monomial, Polynomial};

/// A tree with a non-negative decoration on each vertex, stored in
/// canonical form: vertex 0 is the canonical root, vertices are numbered in
/// preorder with children sorted by canonical code, and edge `j` joins
/// vertex `j + 1` to its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecoratedTree {
    parent: Vec<Option<usize>>,
    decoration: Vec<u32>,
    code: String,
}

impl DecoratedTree {
    /// Builds the canonical form of a decorated tree given by an edge list.
    pub fn new(vertices: usize, edges: &[(usize, usize)], decoration: &[u32]) -> Result<Self> {
        if vertices < 2 {
            return Err(Error::Invalid(
                "a decorated tree needs at least 2 vertices".into(),
            ));
        }
        if decoration.len() != vertices {
            return Err(Error::DimensionMismatch {
                expected: vertices,
                got: decoration.len(),
            });
        }
        if edges.len() != vertices - 1 || edges.iter().any(|&(a, b)| a >= vertices || b >= vertices)
        {
            return Err(Error::Invalid("edge list does not describe a tree".into()));
        }
        let adj = adjacency(vertices, edges);
        let mut seen = vec![false; vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("edge list does not describe a tree".into()));
        }

        let (root, code) = centers(&adj)
            .into_iter()
            .map(|c| (c, rooted_code(&adj, decoration, c, usize::MAX)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("a tree has a center");

        // Relabel in canonical preorder.
        let mut parent = Vec::with_capacity(vertices);
        let mut deco = Vec::with_capacity(vertices);
        fn walk(
            adj: &[Vec<usize>],
            decoration: &[u32],
            v: usize,
            from: usize,
            from_new: Option<usize>,
            parent: &mut Vec<Option<usize>>,
            deco: &mut Vec<u32>,
        ) {
            let me = parent.len();
            parent.push(from_new);
            deco.push(decoration[v]);
            let mut kids: Vec<(String, usize)> = adj[v]
                .iter()
                .filter(|&&u| u != from)
                .map(|&u| (rooted_code(adj, decoration, u, v), u))
                .collect();
            kids.sort();
            for (_, u) in kids {
                walk(adj, decoration, u, v, Some(me), parent, deco);
            }
        }
        walk(
            &adj,
            decoration,
            root,
            usize::MAX,
            None,
            &mut parent,
            &mut deco,
        );
        Ok(DecoratedTree {
            parent,
            decoration: deco,
            code,
        })
    }

    pub fn vertices(&self) -> usize {
        self.parent.len()
    }

    /// Number of edges `k`.
    pub fn edge_count(&self) -> usize {
        self.vertices() - 1
    }

    /// Edge `j` as `(parent, child)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..self.vertices())
            .map(|c| (self.parent[c].expect("non-root has a parent"), c))
            .collect()
    }

    pub fn decoration(&self) -> &[u32] {
        &self.decoration
    }

    /// Canonical code; equal iff the decorated trees are isomorphic.
    pub fn canonical_code(&self) -> &str {
        &self.code
    }

    pub fn valence(&self, v: usize) -> u32 {
        let children = self.parent.iter().filter(|p| **p == Some(v)).count();
        (children + usize::from(self.parent[v].is_some())) as u32
    }

    /// Indices of the edges incident to `v`, in increasing order.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(j, _)| j)
            .collect()
    }

    /// `(m_v, n_v)`; `None` if the decoration is inadmissible at `v`.
    pub fn layer(&self, v: usize) -> Option<LayerSignature> {
        let a = i64::from(self.decoration[v]);
        let l = i64::from(self.valence(v));
        let (m, n) = (a + l - 1, a - l + 3);
        if m < 0 || n < 0 {
            return None;
        }
        LayerSignature::new(m as u32, n as u32).ok()
    }

    pub fn layers(&self) -> Result<Vec<LayerSignature>> {
        (0..self.vertices())
            .map(|v| {
                self.layer(v).ok_or_else(|| {
                    Error::Invalid(format!("decoration at vertex {v} is below valence - 3"))
                })
            })
            .collect()
    }

    /// The number of zeros `K` this tree contributes to, when admissible.
    pub fn zero_count(&self) -> Option<u32> {
        let layers = self.layers().ok()?;
        Some(layers.iter().map(LayerSignature::m).sum())
    }

    /// Order of the automorphism group preserving adjacency and decoration.
    pub fn aut_order(&self) -> u64 {
        let adj = adjacency(self.vertices(), &self.edges());
        let cs = centers(&adj);
        let mut order = rooted_aut(&adj, &self.decoration, cs[0], usize::MAX);
        if cs.len() == 2
            && rooted_code(&adj, &self.decoration, cs[0], usize::MAX)
                == rooted_code(&adj, &self.decoration, cs[1], usize::MAX)
        {
            order *= 2;
        }
        order
    }
}

impl DecoratedTree {
    /// Nested rendering from the canonical root, e.g. `(1,1)[(0,2),(1,1)[(0,2)]]`.
    pub fn nested(&self) -> String {
        fn go(t: &DecoratedTree, v: usize, out: &mut String) {
            match t.layer(v) {
                Some(s) => out.push_str(&s.to_string()),
                None => out.push_str(&format!("a={}", t.decoration[v])),
            }
            let kids: Vec<usize> = (0..t.vertices())
                .filter(|&c| t.parent[c] == Some(v))
                .collect();
            if !kids.is_empty() {
                out.push('[');
                for (i, &c) in kids.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    go(t, c, out);
                }
                out.push(']');
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.nested())
    }
}

fn adjacency(vertices: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); vertices];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// One or two central vertices, found by stripping leaves.
fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in &adj[v] {
                degree[u] -= 1;
                if degree[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// AHU code of the subtree at `v` away from `from`, refined by decoration.
fn rooted_code(adj: &[Vec<usize>], decoration: &[u32], v: usize, from: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&u| u != from)
        .map(|&u| rooted_code(adj, decoration, u, v))
        .collect();
    kids.sort();
    format!("({}{})", decoration[v], kids.concat())
}

/// Automorphisms of the subtree at `v` fixing `v`.
fn rooted_aut(adj: &[Vec<usize>], decoration: &[u32], v: usize, from: usize) -> u64 {
    let mut groups: BTreeMap<String, u64> = BTreeMap::new();
    let mut order = 1u64;
    for &u in adj[v].iter().filter(|&&u| u != from) {
        order *= rooted_aut(adj, decoration, u, v);
        *groups
            .entry(rooted_code(adj, decoration, u, v))
            .or_default() += 1;
    }
    for &mult in groups.values() {
        order *= (1..=mult).product::<u64>();
    }
    order
}

/// Decodes a Prüfer sequence into an edge list on `seq.len() + 2` vertices.
fn prufer_edges(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Unlabelled trees on `vertices` vertices, as edge lists of canonical
/// representatives.
fn unlabelled_trees(vertices: usize) -> Vec<Vec<(usize, usize)>> {
    if vertices == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let zeros = vec![0; vertices];
    let mut seq = vec![0usize; vertices - 2];
    loop {
        let edges = prufer_edges(&seq);
        let t = DecoratedTree::new(vertices, &edges, &zeros).expect("Prüfer decoding gives a tree");
        if seen.insert(t.code.clone()) {
            out.push(t.edges());
        }
        // Next sequence in base `vertices`.
        let mut i = 0;
        loop {
            if i == seq.len() {
                return out;
            }
            seq[i] += 1;
            if seq[i] < vertices {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// All decorated trees with `sum m_v = K`, up to isomorphism, sorted by
/// edge count and then canonical code.
pub fn enumerate_decorated_trees(k_zeros: u32) -> Vec<DecoratedTree> {
    let mut found: BTreeMap<(usize, String), DecoratedTree> = BTreeMap::new();
    for vertices in 2..=(k_zeros as usize + 2) {
        let budget = k_zeros + 2 - vertices as u32;
        for edges in unlabelled_trees(vertices) {
            let adj = adjacency(vertices, &edges);
            let floor: Vec<u32> = adj
                .iter()
                .map(|a| (a.len() as u32).saturating_sub(3))
                .collect();
            let forced: u32 = floor.iter().sum();
            if forced > budget {
                continue;
            }
            for extra in compositions(budget - forced, vertices) {
                let deco: Vec<u32> = floor.iter().zip(&extra).map(|(f, e)| f + e).collect();
                let t = DecoratedTree::new(vertices, &edges, &deco).expect("valid tree");
                found.entry((t.edge_count(), t.code.clone())).or_insert(t);
            }
        }
    }
    found.into_values().collect()
}

/// `Z(prod w_i^{b_i+1}) = 2/(b+2k-1)! prod (b_i+1)! zeta(b_i+2)` on the
/// shell `b + 2k = 2K + 2`.
pub fn zeta_operator(mono: &Monomial, k: usize, k_zeros: u32) -> Result<PiValue> {
    if mono.support_len() > k {
        return Err(Error::ZetaOperator(format!(
            "monomial {mono:?} uses more than {k} variables"
        )));
    }
    let exps = mono.padded(k);
    if let Some(i) = exps.iter().position(|&e| e == 0) {
        return Err(Error::ZetaOperator(format!(
            "variable w{} has exponent 0",
            i + 1
        )));
    }
    let b: u32 = exps.iter().map(|e| e - 1).sum();
    let dim = 2 * k_zeros + 2;
    if b + 2 * k as u32 != dim {
        return Err(Error::ZetaOperator(format!(
            "degree {} is off the shell b + 2k = {dim}",
            b + 2 * k as u32
        )));
    }
    let mut value = PiValue::rational(BigRational::new(
        BigInt::from(2),
        factorial(u64::from(b) + 2 * k as u64 - 1),
    ));
    for &e in &exps {
        let z = zeta_even(i64::from(e) + 1)?;
        value = value * z.scale(&int_rat(factorial(u64::from(e))));
    }
    Ok(value)
}

/// Contribution of one decorated tree to the volume.
#[derive(Clone, Debug)]
pub struct TreeContribution {
    pub tree: DecoratedTree,
    pub layers: Vec<LayerSignature>,
    pub aut_order: u64,
    /// `c(T, a) = multinomial(K; m_v) multinomial(K+4; n_v) / |Aut|`.
    pub multinomial_factor: BigRational,
    /// `prod_v F_{m_v, n_v}` in the edge widths.
    pub product: Polynomial,
    pub value: PiValue,
}

/// `2^k c(T,a) Z(w_1...w_k prod_v F_{m_v,n_v})`.
pub fn tree_contribution(tree: &DecoratedTree, k_zeros: u32) -> Result<TreeContribution> {
    let layers = tree.layers()?;
    let k = tree.edge_count();
    let ms: Vec<u64> = layers.iter().map(|s| u64::from(s.m())).collect();
    let ns: Vec<u64> = layers.iter().map(|s| u64::from(s.n())).collect();
    let aut = tree.aut_order();
    let multinomial_factor = BigRational::new(
        multinomial(u64::from(k_zeros), &ms)? * multinomial(u64::from(k_zeros) + 4, &ns)?,
        BigInt::from(aut),
    );

    let mut product = Polynomial::one(k);
    for (v, sig) in layers.iter().enumerate() {
        let local = local_polynomial(*sig).rename(&tree.incident_edges(v), k);
        product = product.mul(&local);
    }
    let widths = (0..k).fold(Polynomial::one(k), |acc, j| acc.mul(&Polynomial::var(j, k)));
    let integrand = widths.mul(&product);
    // Summing over heights adds one to the degree of each width, so the
    // shell `b + 2k = 2K + 2` means the integrand has degree `2K + 2 - k`.
    let dim = 2 * k_zeros + 2;
    let shell = dim - k as u32;
    if integrand.homogeneous_degree() != Some(shell) {
        return Err(Error::Verification(format!(
            "integrand of tree {tree} is not homogeneous of degree {shell}"
        )));
    }

    let mut z = PiValue::zero(dim);
    for (mono, c) in integrand.terms() {
        z = z.checked_add(&zeta_operator(mono, k, k_zeros)?.scale(c))?;
    }
    let twist = int_rat(BigInt::one() << k);
    let value = z.scale(&(&twist * &multinomial_factor));
    Ok(TreeContribution {
        tree: tree.clone(),
        layers,
        aut_order: aut,
        multinomial_factor,
        product,
        value,
    })
}

/// Contributions of every decorated tree, in enumeration order.
pub fn contributions(k_zeros: u32) -> Result<Vec<TreeContribution>> {
    if k_zeros == 0 {
        return Err(Error::Invalid(
            "the number of zeros K must be at least 1".into(),
        ));
    }
    enumerate_decorated_trees(k_zeros)
        .par_iter()
        .map(|t| tree_contribution(t, k_zeros))
        .collect()
}

/// Subtotals of the volume grouped by the number of cylinders `k`.
pub fn subtotals(contribs: &[TreeContribution]) -> Result<BTreeMap<usize, PiValue>> {
    let mut out: BTreeMap<usize, PiValue> = BTreeMap::new();
    for c in contribs {
        let k = c.tree.edge_count();
        let slot = out
            .entry(k)
            .or_insert_with(|| PiValue::zero(c.value.pi_power()));
        *slot = slot.checked_add(&c.value)?;
    }
    Ok(out)
}

/// `Vol Q(1^K, -1^{K+4})` as the sum over decorated trees.
pub fn volume(k_zeros: u32) -> Result<PiValue> {
    let contribs = contributions(k_zeros)?;
    PiValue::sum(2 * k_zeros + 2, contribs.iter().map(|c| &c.value))
}

/// The closed form `pi^{2K+2} / 2^{K-1}`.
pub fn expected_volume(k_zeros: u32) -> PiValue {
    let coefficient = BigRational::new(BigInt::one(), BigInt::one() << (k_zeros - 1));
    PiValue::new(coefficient, 2 * k_zeros + 2).expect("even power")
}

/// Exact `sum_{h w <= N} w^{b+1}` over positive integers `h, w`.
pub fn height_width_sum(b: u32, n: u64) -> BigInt {
    let mut total = BigInt::from(0);
    for w in 1..=n {
        total += BigInt::from(w).pow(b + 1) * BigInt::from(n / w);
    }
    total
}

/// Ratio of `sum_{h w <= N} w^{b+1}` to its asymptotic
/// `N^{b+2}/(b+2)! (b+1)! zeta(b+2)`, for even `b`.
pub fn zeta_asymptotic_ratio(b: u32, n: u64) -> Result<f64> {
    let exact = height_width_sum(b, n);
    let leading = zeta_even(i64::from(b) + 2)?.scale(&BigRational::new(
        factorial(u64::from(b) + 1) * BigInt::from(n).pow(b + 2),
        factorial(u64::from(b) + 2),
    ));
    let exact = BigRational::from_integer(exact);
    // Both sides share the factor pi^{b+2}; divide exactly first.
    let ratio = PiValue::new(exact / leading.coefficient(), 0)?.approx()
        / std::f64::consts::PI.powi(b as i32 + 2);
    Ok(ratio)
}
