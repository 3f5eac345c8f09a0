//! Brute-force ribbon graph oracle.
//!
//! A ribbon graph is stored as a pair of dart permutations: the vertex
//! rotation `sigma` (3-cycles for zeros, fixed points for poles) and the
//! edge involution `alpha`. Faces are the cycles of `sigma ∘ alpha`. Darts
//! `3i, 3i+1, 3i+2` belong to trivalent vertex `i` and dart `3m + j` to
//! univalent vertex `j`, so `sigma` is fixed and graphs differ only by
//! `alpha` and the face labelling.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{compositions, factorial, int_rat, rat, BigRational};
use crate::error::{Error, Result};
use crate::linalg;
use crate::local::LayerSignature;
use crate::poly::{pair_sum, Monomial, Polynomial, RationalFunction};

/// Multiplicity of each unordered pair of faces among the edges.
type EdgeMultiset = BTreeMap<(usize, usize), u32>;

/// Which vertex labels are part of the isomorphism type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelMode {
    /// Faces labelled, vertices anonymous.
    FacesOnly,
    /// Faces, zeros and poles all labelled.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonGraph {
    trivalent: usize,
    univalent: usize,
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    face_of: Vec<usize>,
    faces: usize,
}

/// JSON rendering of a ribbon graph.
#[derive(Clone, Debug, Serialize)]
pub struct RibbonGraphJson {
    pub darts: usize,
    pub sigma: Vec<usize>,
    pub alpha: Vec<usize>,
    pub labels: RibbonLabels,
}

#[derive(Clone, Debug, Serialize)]
pub struct RibbonLabels {
    /// `z<i>` for zeros, `p<j>` for poles, one entry per dart.
    pub vertex: Vec<String>,
    /// 1-based face label per dart.
    pub face: Vec<usize>,
}

fn canonical_sigma(m: usize, n: usize) -> Vec<usize> {
    let mut sigma: Vec<usize> = (0..3 * m + n).collect();
    for v in 0..m {
        sigma[3 * v] = 3 * v + 1;
        sigma[3 * v + 1] = 3 * v + 2;
        sigma[3 * v + 2] = 3 * v;
    }
    sigma
}

impl RibbonGraph {
    fn from_parts(m: usize, n: usize, alpha: Vec<usize>, face_of: Vec<usize>) -> Self {
        let faces = face_of.iter().copied().max().map_or(0, |f| f + 1);
        RibbonGraph {
            trivalent: m,
            univalent: n,
            sigma: canonical_sigma(m, n),
            alpha,
            face_of,
            faces,
        }
    }

    pub fn trivalent(&self) -> usize {
        self.trivalent
    }

    pub fn univalent(&self) -> usize {
        self.univalent
    }

    pub fn darts(&self) -> usize {
        self.alpha.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn face_of(&self, dart: usize) -> usize {
        self.face_of[dart]
    }

    pub fn faces(&self) -> usize {
        self.faces
    }

    pub fn vertices(&self) -> usize {
        self.trivalent + self.univalent
    }

    /// Edges as dart pairs `(d, alpha(d))` with `d < alpha(d)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.darts())
            .filter(|&d| d < self.alpha[d])
            .map(|d| (d, self.alpha[d]))
            .collect()
    }

    /// For each edge, the sorted pair of faces on its two sides.
    pub fn edge_faces(&self) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .map(|(a, b)| {
                let (fa, fb) = (self.face_of[a], self.face_of[b]);
                (fa.min(fb), fa.max(fb))
            })
            .collect()
    }

    /// Sorted multiset of edge face pairs; identifies the graph up to
    /// vertex relabelling for the small cases used in tests.
    pub fn face_pair_profile(&self) -> Vec<(usize, usize)> {
        let mut p = self.edge_faces();
        p.sort_unstable();
        p
    }

    fn vertex_of(&self, dart: usize) -> usize {
        vertex_of(self.trivalent, dart)
    }

    pub fn is_connected(&self) -> bool {
        connected(self.trivalent, self.univalent, &self.alpha)
    }

    /// `v - e + f`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices() as i64 - self.edges().len() as i64 + self.faces as i64
    }

    /// Faces recomputed from `sigma ∘ alpha`, independent of stored labels.
    pub fn face_cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.darts()];
        let mut cycles = Vec::new();
        for start in 0..self.darts() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                cycle.push(d);
                d = self.sigma[self.alpha[d]];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// `2^{m+n-1} prod_e 1/(λ_i + λ_j)` over edges bordering faces `i`, `j`.
    pub fn laplace_transform(&self) -> RationalFunction {
        let mut sum = FactoredSum::new(self.faces);
        sum.add(self.face_pair_profile(), BigRational::one());
        sum.to_rational_function(self.trivalent + self.univalent)
    }

    /// Number of edge length assignments in `(1/2)Z_{>0}` whose face
    /// perimeters equal the integer `widths`.
    pub fn exact_lattice_count(&self, widths: &[u64]) -> Result<u64> {
        let doubled: Vec<u64> = widths.iter().map(|w| 2 * w).collect();
        self.exact_lattice_count_doubled(&doubled)
    }

    /// Same as [`exact_lattice_count`](Self::exact_lattice_count) with
    /// half-integer widths given as `2w`.
    pub fn exact_lattice_count_doubled(&self, doubled_widths: &[u64]) -> Result<u64> {
        if doubled_widths.len() != self.faces {
            return Err(Error::DimensionMismatch {
                expected: self.faces,
                got: doubled_widths.len(),
            });
        }
        Ok(LatticeSystem::new(self).count(doubled_widths))
    }

    pub fn to_json(&self) -> RibbonGraphJson {
        let vertex = (0..self.darts())
            .map(|d| {
                let v = self.vertex_of(d);
                if v < self.trivalent {
                    format!("z{}", v + 1)
                } else {
                    format!("p{}", v - self.trivalent + 1)
                }
            })
            .collect();
        RibbonGraphJson {
            darts: self.darts(),
            sigma: self.sigma.clone(),
            alpha: self.alpha.clone(),
            labels: RibbonLabels {
                vertex,
                face: self.face_of.iter().map(|f| f + 1).collect(),
            },
        }
    }
}

fn vertex_of(m: usize, dart: usize) -> usize {
    if dart < 3 * m {
        dart / 3
    } else {
        m + dart - 3 * m
    }
}

fn connected(m: usize, n: usize, alpha: &[usize]) -> bool {
    let v = m + n;
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (d, &e) in alpha.iter().enumerate() {
        let (a, b) = (
            find(&mut parent, vertex_of(m, d)),
            find(&mut parent, vertex_of(m, e)),
        );
        if a != b {
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    (0..v).all(|x| find(&mut parent, x) == root)
}

/// A connected genus-0 dart pairing with faces numbered by first dart.
#[derive(Clone, Debug)]
struct Skeleton {
    alpha: Vec<usize>,
    face_of: Vec<usize>,
    faces: usize,
}

fn perfect_matchings(darts: usize) -> Vec<Vec<usize>> {
    fn go(alpha: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(first) = alpha.iter().position(|&x| x == usize::MAX) else {
            out.push(alpha.clone());
            return;
        };
        for other in first + 1..alpha.len() {
            if alpha[other] == usize::MAX {
                alpha[first] = other;
                alpha[other] = first;
                go(alpha, out);
                alpha[first] = usize::MAX;
                alpha[other] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    if darts.is_multiple_of(2) {
        go(&mut vec![usize::MAX; darts], &mut out);
    }
    out
}

fn skeletons(sig: LayerSignature) -> Vec<Skeleton> {
    let (m, n) = (sig.m() as usize, sig.n() as usize);
    let sigma = canonical_sigma(m, n);
    let darts = 3 * m + n;
    perfect_matchings(darts)
        .into_iter()
        .filter(|alpha| connected(m, n, alpha))
        .filter_map(|alpha| {
            let mut face_of = vec![usize::MAX; darts];
            let mut faces = 0;
            for start in 0..darts {
                if face_of[start] != usize::MAX {
                    continue;
                }
                let mut d = start;
                while face_of[d] == usize::MAX {
                    face_of[d] = faces;
                    d = sigma[alpha[d]];
                }
                faces += 1;
            }
            let euler = (m + n) as i64 - (darts / 2) as i64 + faces as i64;
            (euler == 2).then_some(Skeleton {
                alpha,
                face_of,
                faces,
            })
        })
        .collect()
}

/// Dart relabellings commuting with `sigma` allowed by `mode`.
fn relabelling_group(m: usize, n: usize, mode: LabelMode) -> Vec<Vec<usize>> {
    let vertex_perms: Vec<Vec<usize>> = match mode {
        LabelMode::Full => vec![(0..m).collect()],
        LabelMode::FacesOnly => (0..m).permutations(m).collect(),
    };
    let pole_perms: Vec<Vec<usize>> = match mode {
        LabelMode::Full => vec![(0..n).collect()],
        LabelMode::FacesOnly => (0..n).permutations(n).collect(),
    };
    let rotations: Vec<Vec<usize>> = (0..m)
        .map(|_| 0..3usize)
        .multi_cartesian_product()
        .collect();
    let rotations = if m == 0 { vec![Vec::new()] } else { rotations };

    let mut group = Vec::new();
    for vp in &vertex_perms {
        for rot in &rotations {
            for pp in &pole_perms {
                let mut g = vec![0; 3 * m + n];
                for v in 0..m {
                    for j in 0..3 {
                        g[3 * v + j] = 3 * vp[v] + (j + rot[v]) % 3;
                    }
                }
                for u in 0..n {
                    g[3 * m + u] = 3 * m + pp[u];
                }
                group.push(g);
            }
        }
    }
    group
}

fn canonical_key(alpha: &[usize], face_of: &[usize], group: &[Vec<usize>]) -> Vec<usize> {
    let darts = alpha.len();
    let mut best: Option<Vec<usize>> = None;
    let mut key = vec![0; 2 * darts];
    for g in group {
        for d in 0..darts {
            key[g[d]] = g[alpha[d]];
            key[darts + g[d]] = face_of[d];
        }
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key.clone());
        }
    }
    best.expect("group contains the identity")
}

/// Isomorphism classes of labelled graphs, each with the number of
/// `(alpha, face labelling)` pairs in its orbit.
fn classes(sig: LayerSignature, mode: LabelMode) -> BTreeMap<Vec<usize>, usize> {
    let (m, n) = (sig.m() as usize, sig.n() as usize);
    let group = relabelling_group(m, n, mode);
    let mut out: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for sk in skeletons(sig) {
        for perm in (0..sk.faces).permutations(sk.faces) {
            let labelled: Vec<usize> = sk.face_of.iter().map(|&f| perm[f]).collect();
            *out.entry(canonical_key(&sk.alpha, &labelled, &group))
                .or_default() += 1;
        }
    }
    out
}

fn graph_from_key(sig: LayerSignature, key: &[usize]) -> RibbonGraph {
    let darts = key.len() / 2;
    RibbonGraph::from_parts(
        sig.m() as usize,
        sig.n() as usize,
        key[..darts].to_vec(),
        key[darts..].to_vec(),
    )
}

/// All connected genus-0 ribbon graphs with the given signature and
/// labelled faces, up to isomorphism in the chosen mode.
pub fn enumerate_graphs(sig: LayerSignature, mode: LabelMode) -> Vec<RibbonGraph> {
    classes(sig, mode)
        .keys()
        .map(|k| graph_from_key(sig, k))
        .collect()
}

/// Fully labelled graphs with weight `1/|Aut|`.
pub fn fully_labelled(sig: LayerSignature) -> Vec<(RibbonGraph, BigRational)> {
    let group_order = BigInt::from(3u32).pow(sig.m());
    classes(sig, LabelMode::Full)
        .into_iter()
        .map(|(k, orbit)| {
            let weight = BigRational::new(BigInt::from(orbit), group_order.clone());
            (graph_from_key(sig, &k), weight)
        })
        .collect()
}

/// Sum of `c * prod 1/(λ_i + λ_j)^{p_ij}` kept in factored form until the
/// end, so that the common denominator is a product of linear forms.
struct FactoredSum {
    arity: usize,
    terms: HashMap<Vec<(usize, usize)>, BigRational>,
}

impl FactoredSum {
    fn new(arity: usize) -> Self {
        FactoredSum {
            arity,
            terms: HashMap::new(),
        }
    }

    fn add(&mut self, profile: Vec<(usize, usize)>, c: BigRational) {
        *self.terms.entry(profile).or_insert_with(BigRational::zero) += c;
    }

    /// Multiplies every term by `2^{vertices-1}`.
    fn to_rational_function(&self, vertices: usize) -> RationalFunction {
        let scale = int_rat(BigInt::one() << (vertices - 1));
        let mut max_exp: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        let counted: Vec<(EdgeMultiset, &BigRational)> = self
            .terms
            .iter()
            .map(|(profile, c)| {
                let mut e: BTreeMap<(usize, usize), u32> = BTreeMap::new();
                for &p in profile {
                    *e.entry(p).or_default() += 1;
                }
                for (&p, &k) in &e {
                    let slot = max_exp.entry(p).or_default();
                    *slot = (*slot).max(k);
                }
                (e, c)
            })
            .collect();
        let factor = |&(i, j): &(usize, usize)| pair_sum(i, j, self.arity);
        let den = max_exp
            .iter()
            .fold(Polynomial::one(self.arity), |acc, (p, &k)| {
                acc.mul(&factor(p).pow(k))
            });
        let mut num = Polynomial::zero(self.arity);
        for (e, c) in counted {
            let mut term = Polynomial::constant(c * &scale, self.arity);
            for (p, &k) in &max_exp {
                let missing = k - e.get(p).copied().unwrap_or(0);
                if missing > 0 {
                    term = term.mul(&factor(p).pow(missing));
                }
            }
            num = num.add(&term);
        }
        RationalFunction::new(num, den).expect("product of linear forms is nonzero")
    }
}

/// `F̂_{m,n} = sum over fully labelled graphs of F̂_Γ`.
pub fn hat_f(sig: LayerSignature) -> RationalFunction {
    let mut sum = FactoredSum::new(sig.faces());
    for (g, weight) in fully_labelled(sig) {
        sum.add(g.face_pair_profile(), weight);
    }
    sum.to_rational_function((sig.m() + sig.n()) as usize)
}

/// Checks `F̂_{m+1,n+1} = 2(m+1) sum_i (-1/λ_i) ∂F̂_{m,n}/∂λ_i` exactly.
pub fn verify_pole_recurrence(sig: LayerSignature) -> Result<bool> {
    let next = LayerSignature::new(sig.m() + 1, sig.n() + 1)?;
    let lhs = hat_f(next);
    let base = hat_f(sig);
    let l = sig.faces();
    let num = base.numerator();
    let den = base.denominator();
    // Common denominator den^2 * prod λ_i.
    let all_vars = (0..l).fold(Polynomial::one(l), |acc, i| acc.mul(&Polynomial::var(i, l)));
    let mut rhs_num = Polynomial::zero(l);
    for i in 0..l {
        let others = (0..l)
            .filter(|&j| j != i)
            .fold(Polynomial::one(l), |acc, j| acc.mul(&Polynomial::var(j, l)));
        let quotient = num.partial(i).mul(den).sub(&num.mul(&den.partial(i)));
        rhs_num = rhs_num.sub(&quotient.mul(&others));
    }
    let rhs_num = rhs_num.scale(&rat(2 * (i64::from(sig.m()) + 1)));
    let rhs = RationalFunction::new(rhs_num, den.mul(den).mul(&all_vars))?;
    Ok(lhs.equals(&rhs))
}

/// Linear system `sum_{d in face f} x_{edge(d)} = target_f` over positive
/// integers `x` (doubled edge lengths).
struct LatticeSystem {
    edges: Vec<(usize, usize)>,
    faces: usize,
    /// Faces whose last incident edge is this one.
    closes: Vec<Vec<usize>>,
    /// Sum of coefficients over all edges of each face.
    weight: Vec<i64>,
}

impl LatticeSystem {
    fn new(g: &RibbonGraph) -> Self {
        let edges = g.edge_faces();
        let mut last = vec![usize::MAX; g.faces()];
        let mut weight = vec![0i64; g.faces()];
        for (j, &(a, b)) in edges.iter().enumerate() {
            last[a] = j;
            last[b] = j;
            weight[a] += 1;
            weight[b] += 1;
        }
        let mut closes = vec![Vec::new(); edges.len()];
        for (f, &j) in last.iter().enumerate() {
            if j != usize::MAX {
                closes[j].push(f);
            }
        }
        LatticeSystem {
            edges,
            faces: g.faces(),
            closes,
            weight,
        }
    }

    fn count(&self, targets: &[u64]) -> u64 {
        let mut residual: Vec<i64> = targets.iter().map(|&t| t as i64).collect();
        let mut pending = self.weight.clone();
        debug_assert_eq!(residual.len(), self.faces);
        self.go(0, &mut residual, &mut pending)
    }

    fn go(&self, j: usize, residual: &mut [i64], pending: &mut [i64]) -> u64 {
        if j == self.edges.len() {
            return u64::from(residual.iter().all(|&r| r == 0));
        }
        let (a, b) = self.edges[j];
        pending[a] -= 1;
        pending[b] -= 1;
        let coef_a = if a == b { 2 } else { 1 };
        let feasible = |x: i64, residual: &[i64], pending: &[i64]| -> bool {
            if a == b {
                residual[a] - 2 * x >= pending[a]
            } else {
                residual[a] - x >= pending[a] && residual[b] - x >= pending[b]
            }
        };
        let mut total = 0;
        if let Some(&f) = self.closes[j].first() {
            let coef = if a == b { 2 } else { 1 };
            let r = residual[f];
            if r > 0 && r % coef == 0 {
                let x = r / coef;
                if feasible(x, residual, pending) {
                    total += self.assign(j, x, residual, pending);
                }
            }
        } else {
            let hi = if a == b {
                (residual[a] - pending[a]) / coef_a
            } else {
                (residual[a] - pending[a]).min(residual[b] - pending[b])
            };
            for x in 1..=hi {
                total += self.assign(j, x, residual, pending);
            }
        }
        pending[a] += 1;
        pending[b] += 1;
        total
    }

    fn assign(&self, j: usize, x: i64, residual: &mut [i64], pending: &mut [i64]) -> u64 {
        let (a, b) = self.edges[j];
        residual[a] -= x;
        residual[b] -= x;
        let closed_ok = self.closes[j].iter().all(|&f| residual[f] == 0);
        let out = if closed_ok {
            self.go(j + 1, residual, pending)
        } else {
            0
        };
        residual[a] += x;
        residual[b] += x;
        out
    }
}

/// Exact lattice count summed over all fully labelled graphs.
pub fn total_lattice_count(sig: LayerSignature, widths: &[u64]) -> Result<BigRational> {
    let graphs = fully_labelled(sig);
    total_count_for(&graphs, widths)
}

fn total_count_for(graphs: &[(RibbonGraph, BigRational)], widths: &[u64]) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for (g, w) in graphs {
        let c = g.exact_lattice_count(widths)?;
        if c > 0 {
            total += w * rat(c as i64);
        }
    }
    Ok(total)
}

/// True if some nontrivial signed sum `sum eps_i w_i` with `eps_i in
/// {-1, 0, 1}` vanishes; such width vectors lie on chamber walls.
fn on_wall(w: &[u64]) -> bool {
    let l = w.len();
    (0..l)
        .map(|_| -1i64..=1)
        .multi_cartesian_product()
        .filter(|eps| eps.iter().any(|&e| e != 0))
        .any(|eps| eps.iter().zip(w).map(|(e, &x)| e * x as i64).sum::<i64>() == 0)
}

/// Leading coefficient of `t -> count(t w)` along a ray, found by exact
/// finite differences on `t = P s` for the smallest period `P <= 6` where
/// the samples are polynomial of degree `d`.
fn ray_leading_coefficient(
    graphs: &[(RibbonGraph, BigRational)],
    direction: &[u64],
    degree: u32,
) -> Result<BigRational> {
    let d = degree as usize;
    for period in 1..=6u64 {
        let samples: Vec<BigRational> = (1..=d as u64 + 3)
            .map(|s| {
                let w: Vec<u64> = direction.iter().map(|x| x * period * s).collect();
                total_count_for(graphs, &w)
            })
            .collect::<Result<_>>()?;
        let mut diffs = samples;
        for _ in 0..d {
            diffs = diffs.windows(2).map(|p| &p[1] - &p[0]).collect();
        }
        // diffs now holds 3 values of the d-th difference; they must agree.
        if diffs.windows(2).all(|p| p[0] == p[1]) {
            let lead = &diffs[0] / int_rat(factorial(degree as u64));
            let scale = int_rat(BigInt::from(period).pow(degree));
            return Ok(lead / scale);
        }
    }
    Err(Error::InsufficientSamples(format!(
        "counts along direction {direction:?} are not polynomial for any period <= 6"
    )))
}

/// Recovers the top homogeneous part of the summed lattice counts by
/// fitting exact counts along rays `t w` and interpolating the leading
/// coefficients over a deterministic grid of generic directions in
/// `{1..=sample_radius}^l`.
pub fn leading_part_fit(sig: LayerSignature, sample_radius: u64) -> Result<Polynomial> {
    let l = sig.faces();
    let degree = sig.m() + sig.n() - 2;
    let graphs = fully_labelled(sig);
    let basis: Vec<Monomial> = compositions(degree, l)
        .into_iter()
        .map(Monomial::new)
        .collect();
    let unknowns = basis.len();
    let row = |w: &[u64]| -> Vec<BigRational> {
        basis
            .iter()
            .map(|m| {
                let mut v = BigInt::one();
                for (i, &e) in m.padded(l).iter().enumerate() {
                    v *= BigInt::from(w[i]).pow(e);
                }
                int_rat(v)
            })
            .collect()
    };

    let mut chosen: Vec<Vec<u64>> = Vec::new();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut checks: Vec<Vec<u64>> = Vec::new();
    for w in (0..l).map(|_| 1..=sample_radius).multi_cartesian_product() {
        if on_wall(&w) {
            continue;
        }
        if rows.len() < unknowns {
            let r = row(&w);
            rows.push(r);
            if linalg::rank(&rows) == rows.len() {
                chosen.push(w);
            } else {
                rows.pop();
            }
        } else if checks.len() < 2 {
            checks.push(w);
        } else {
            break;
        }
    }
    if rows.len() < unknowns || checks.len() < 2 {
        return Err(Error::InsufficientSamples(format!(
            "radius {sample_radius} gives {} generic directions for {unknowns} unknowns",
            rows.len() + checks.len()
        )));
    }

    let rhs: Vec<BigRational> = chosen
        .iter()
        .map(|w| ray_leading_coefficient(&graphs, w, degree))
        .collect::<Result<_>>()?;
    let coeffs = linalg::solve(&rows, &rhs)
        .ok_or_else(|| Error::InsufficientSamples("singular interpolation system".into()))?;
    let fitted = Polynomial::from_terms(l, basis.into_iter().zip(coeffs));

    for w in &checks {
        let expected = ray_leading_coefficient(&graphs, w, degree)?;
        let point: Vec<BigRational> = w.iter().map(|&x| rat(x as i64)).collect();
        if fitted.evaluate(&point)? != expected {
            return Err(Error::InsufficientSamples(format!(
                "fitted polynomial disagrees with the leading coefficient at {w:?}"
            )));
        }
    }
    Ok(fitted)
}

/// Number of fully labelled graphs as an exact integer, when every class
/// has trivial automorphism group.
pub fn fully_labelled_count(sig: LayerSignature) -> Option<u64> {
    let total: BigRational = fully_labelled(sig).into_iter().map(|(_, w)| w).sum();
    total
        .is_integer()
        .then(|| total.to_integer().to_u64())
        .flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::local::f_closed;

    fn sig(m: u32, n: u32) -> LayerSignature {
        LayerSignature::new(m, n).unwrap()
    }

    fn find_by_profile<'a>(
        graphs: &'a [RibbonGraph],
        profile: &[(usize, usize)],
    ) -> &'a RibbonGraph {
        graphs
            .iter()
            .find(|g| g.face_pair_profile() == profile)
            .unwrap_or_else(|| panic!("no graph with profile {profile:?}"))
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_graphs(sig(2, 2), LabelMode::FacesOnly).len(), 5);
        assert_eq!(enumerate_graphs(sig(0, 2), LabelMode::FacesOnly).len(), 1);
        // The pendant edge sits in one of the two labelled faces.
        assert_eq!(enumerate_graphs(sig(1, 1), LabelMode::FacesOnly).len(), 2);
        // 2!2!(1/2 + 1/2 + 1 + 1 + 1) fully labelled graphs.
        assert_eq!(enumerate_graphs(sig(2, 2), LabelMode::Full).len(), 16);
        assert_eq!(fully_labelled_count(sig(2, 2)), Some(16));
    }

    #[test]
    fn enumerated_graphs_are_planar_and_connected() {
        for s in [
            sig(0, 2),
            sig(1, 1),
            sig(1, 3),
            sig(2, 0),
            sig(2, 2),
            sig(3, 1),
            sig(3, 3),
        ] {
            for g in enumerate_graphs(s, LabelMode::FacesOnly) {
                assert!(g.is_connected());
                assert_eq!(g.euler_characteristic(), 2);
                assert_eq!(g.faces(), s.faces());
                assert_eq!(g.face_cycles().len(), s.faces());
                assert_eq!(g.edges().len(), s.edges());
            }
        }
    }

    #[test]
    fn face_label_swap_on_f22_graphs() {
        let graphs = enumerate_graphs(sig(2, 2), LabelMode::FacesOnly);
        let swap = |p: &[(usize, usize)]| {
            let mut q: Vec<(usize, usize)> = p
                .iter()
                .map(|&(a, b)| {
                    let (a, b) = (1 - a, 1 - b);
                    (a.min(b), a.max(b))
                })
                .collect();
            q.sort_unstable();
            q
        };
        let profiles: Vec<_> = graphs.iter().map(RibbonGraph::face_pair_profile).collect();
        let fixed: Vec<_> = profiles.iter().filter(|p| swap(p) == **p).collect();
        // Only the graph with one pendant edge on each side is self-dual.
        assert_eq!(fixed.len(), 1);
        assert_eq!(*fixed[0], vec![(0, 0), (0, 1), (0, 1), (1, 1)]);
        for p in &profiles {
            assert!(profiles.contains(&swap(p)));
        }
    }

    #[test]
    fn laplace_transforms_of_named_graphs() {
        let graphs = enumerate_graphs(sig(2, 2), LabelMode::FacesOnly);
        let l = |i| Polynomial::var(i, 2);
        // Γ_{2,1}: (1/2)(2/(λ1+λ2))(1/λ2)^3
        let g21 = find_by_profile(&graphs, &[(0, 1), (1, 1), (1, 1), (1, 1)]);
        let expected =
            RationalFunction::new(Polynomial::one(2), l(0).add(&l(1)).mul(&l(1).pow(3))).unwrap();
        assert!(g21.laplace_transform().equals(&expected));
        // Γ_3: (1/2)(2/(λ1+λ2))^2 (1/λ1)(1/λ2)
        let g3 = find_by_profile(&graphs, &[(0, 0), (0, 1), (0, 1), (1, 1)]);
        let expected = RationalFunction::new(
            Polynomial::constant(rat(2), 2),
            l(0).add(&l(1)).pow(2).mul(&l(0)).mul(&l(1)),
        )
        .unwrap();
        assert!(g3.laplace_transform().equals(&expected));

        let single = &enumerate_graphs(sig(0, 2), LabelMode::FacesOnly)[0];
        let expected = RationalFunction::inverse_var(0, 1);
        assert!(single.laplace_transform().equals(&expected));
    }

    #[test]
    fn laplace_degree_is_minus_edges() {
        for s in [sig(1, 1), sig(2, 2), sig(3, 1), sig(1, 3)] {
            for g in enumerate_graphs(s, LabelMode::FacesOnly) {
                let f = g.laplace_transform();
                assert_eq!(f.homogeneous_degree(), Some(-(s.edges() as i64)));
            }
        }
    }

    #[test]
    fn hat_f_examples() {
        let l = |i| Polynomial::var(i, 2);
        let expected = RationalFunction::new(
            l(0).pow(2).add(&l(1).pow(2)).scale(&rat(4)),
            l(0).pow(3).mul(&l(1).pow(3)),
        )
        .unwrap();
        assert!(hat_f(sig(2, 2)).equals(&expected));
        assert!(hat_f(sig(0, 2)).equals(&RationalFunction::inverse_var(0, 1)));
        assert!(hat_f(sig(1, 1)).equals(&Polynomial::one(2).laplace()));
    }

    #[test]
    fn hat_f_is_laplace_of_closed_form() {
        for s in LayerSignature::all_up_to(8) {
            if 3 * s.m() + s.n() > 12 {
                continue;
            }
            assert!(hat_f(s).equals(&f_closed(s).laplace()), "{s}");
        }
    }

    #[test]
    fn pole_recurrence_holds() {
        for s in [sig(1, 1), sig(0, 2), sig(2, 2), sig(2, 0), sig(1, 3)] {
            assert!(verify_pole_recurrence(s).unwrap(), "{s}");
        }
    }

    #[test]
    fn lattice_counts_small_cases() {
        let single = &enumerate_graphs(sig(0, 2), LabelMode::FacesOnly)[0];
        assert_eq!(single.exact_lattice_count(&[1]).unwrap(), 1);
        assert!(single.exact_lattice_count(&[1, 2]).is_err());

        let graphs = enumerate_graphs(sig(2, 2), LabelMode::FacesOnly);
        // Γ_{1,1}: face 1 is the inside of the 2-cycle, both pendants in face 2.
        let g11 = find_by_profile(&graphs, &[(0, 1), (0, 1), (1, 1), (1, 1)]);
        for (w1, w2) in [(1u64, 2u64), (2, 5), (3, 4), (4, 4), (5, 2)] {
            let brute = brute_force_g11(w1, w2);
            assert_eq!(
                g11.exact_lattice_count(&[w1, w2]).unwrap(),
                brute,
                "({w1},{w2})"
            );
        }
        assert_eq!(g11.exact_lattice_count(&[1, 2]).unwrap(), 0);

        // Γ_3 at (2,3): leading order says w1^2 = 4, the exact count is (w1-1)^2.
        let g3 = find_by_profile(&graphs, &[(0, 0), (0, 1), (0, 1), (1, 1)]);
        assert_eq!(g3.exact_lattice_count(&[2, 3]).unwrap(), 1);
    }

    /// Positive half-integers l1..l4 with l1+l2 = w1, l1+l2+2l3+2l4 = w2.
    fn brute_force_g11(w1: u64, w2: u64) -> u64 {
        let top = 2 * w2.max(w1);
        let mut count = 0;
        for x1 in 1..=top {
            for x2 in 1..=top {
                for x3 in 1..=top {
                    for x4 in 1..=top {
                        if x1 + x2 == 2 * w1 && x1 + x2 + 2 * x3 + 2 * x4 == 2 * w2 {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn odd_total_perimeter_has_no_lattice_points() {
        for s in [sig(1, 1), sig(2, 2), sig(3, 1), sig(2, 0)] {
            for g in enumerate_graphs(s, LabelMode::FacesOnly) {
                for doubled in (0..g.faces()).map(|_| 1..=7u64).multi_cartesian_product() {
                    if doubled.iter().sum::<u64>() % 2 == 1 {
                        assert_eq!(g.exact_lattice_count_doubled(&doubled).unwrap(), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn leading_fit_small() {
        assert_eq!(leading_part_fit(sig(0, 2), 6).unwrap(), f_closed(sig(0, 2)));
        assert_eq!(leading_part_fit(sig(1, 3), 6).unwrap(), f_closed(sig(1, 3)));
        assert_eq!(leading_part_fit(sig(2, 2), 8).unwrap(), f_closed(sig(2, 2)));
    }

    #[test]
    fn leading_fit_rejects_tiny_radius() {
        assert!(matches!(
            leading_part_fit(sig(2, 2), 1),
            Err(Error::InsufficientSamples(_))
        ));
    }

    #[test]
    fn weights_are_one_for_small_signatures() {
        for s in [sig(1, 1), sig(2, 0), sig(2, 2), sig(3, 1)] {
            assert!(
                fully_labelled(s).iter().all(|(_, w)| *w == ratio(1, 1)),
                "{s}"
            );
        }
    }
}
