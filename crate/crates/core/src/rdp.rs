//! Pullback-coefficient inequality systems over rational double point
//! stars, their exhaustive integer minima, and the characteristic
//! bounds those minima certify.
//!
//! A boundary curve through a double point star pulls back with an
//! integer coefficient a at the central curve and integer coefficients
//! along the branches. Requiring the pullback to meet every exceptional
//! curve nonpositively yields a small linear system over the
//! intersection matrix; its minimal feasible a drives the lc-threshold
//! argument that rules out small characteristics.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::classify::{classify_shape, is_rdp, ShapeClass};
use crate::exact::Rat;
use crate::gf::GfCtx;
use crate::graph::{DualGraph, GraphError, Vertex};
use crate::p1::{self, SplitAnswer, TableAnswer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RdpError {
    /// The graph is not a double point star of a supported branch type.
    NotRdpStar,
    /// No integer point in the search box satisfies the system.
    EmptyFeasible { box_hi: u64 },
    /// A characteristic candidate is not prime.
    NotPrime(u64),
    Graph(GraphError),
}

impl core::fmt::Display for RdpError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RdpError::NotRdpStar => {
                write!(f, "graph is not a rational double point star of a supported type")
            }
            RdpError::EmptyFeasible { box_hi } => {
                write!(f, "no feasible point with all coefficients in 1..={}", box_hi)
            }
            RdpError::NotPrime(p) => write!(f, "{} is not prime", p),
            RdpError::Graph(e) => write!(f, "{}", e),
        }
    }
}

impl From<GraphError> for RdpError {
    fn from(e: GraphError) -> Self {
        RdpError::Graph(e)
    }
}

/// Default inclusive upper bound for the coefficient search box.
pub const DEFAULT_BOX: u64 = 8;

/// A system of homogeneous linear inequalities read off the
/// intersection matrix: each row r, owned by an exceptional vertex,
/// asserts sum_j rows[r][j] * x_j <= 0 over integer variables x_j >= 1
/// bounded by `box_hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalitySystem {
    /// Variable names; the central coefficient "a" is always first.
    pub vars: Vec<String>,
    /// Vertex id carrying each variable.
    pub var_vertices: Vec<u32>,
    /// Coefficient rows, one per chosen vertex.
    pub rows: Vec<Vec<i64>>,
    /// Vertex id whose intersection row produced each inequality.
    pub row_owners: Vec<u32>,
    /// Inclusive upper bound of the search box.
    pub box_hi: u64,
}

impl InequalitySystem {
    pub fn with_box(mut self, box_hi: u64) -> Self {
        self.box_hi = box_hi;
        self
    }

    /// All rows hold at the given point (entries in variable order).
    pub fn satisfied(&self, point: &[u64]) -> bool {
        self.rows.iter().all(|row| {
            row.iter().zip(point).map(|(c, x)| c * *x as i64).sum::<i64>() <= 0
        })
    }

    /// Renders a row as "2*a1l >= a + a2l".
    pub fn row_display(&self, r: usize) -> String {
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for (c, name) in self.rows[r].iter().zip(&self.vars) {
            if *c < 0 {
                lhs.push(if *c == -1 {
                    name.clone()
                } else {
                    format!("{}*{}", -c, name)
                });
            } else if *c > 0 {
                rhs.push(if *c == 1 {
                    name.clone()
                } else {
                    format!("{}*{}", c, name)
                });
            }
        }
        format!("{} >= {}", lhs.join(" + "), rhs.join(" + "))
    }
}

/// The star graph of a double point with the given branch determinants:
/// every curve is a (-2)-curve and a branch of determinant d is a chain
/// of d - 1 of them. Vertex 0 is the center.
pub fn rdp_star_graph(dets: [u64; 3]) -> Result<DualGraph, RdpError> {
    if dets.iter().any(|&d| d < 2) {
        return Err(RdpError::NotRdpStar);
    }
    let mut verts = alloc::vec![Vertex::new(0, -2, 1, true)];
    let mut edges = Vec::new();
    let mut next = 1u32;
    for &d in &dets {
        let mut prev = 0u32;
        for _ in 0..d - 1 {
            verts.push(Vertex::new(next, -2, 1, true));
            edges.push((prev, next, 1));
            prev = next;
            next += 1;
        }
    }
    Ok(DualGraph::new(verts, edges)?)
}

struct LabeledStar {
    center: u32,
    /// Branch vertex ids from the center outward, labeled l, r, d.
    l: Vec<u32>,
    r: Vec<u32>,
    d: Vec<u32>,
    /// Sorted branch determinants.
    dets: [u64; 3],
}

/// Splits a star into labeled branches. The two branches sharing a
/// determinant are l and r; when all determinants differ, d is the
/// smallest and l, r the middle and largest.
fn labeled_star(g: &DualGraph) -> Option<LabeledStar> {
    let center = g.vertices().iter().find(|v| g.valence(v.id) == 3)?.id;
    let comps = g.components_without(center);
    if comps.len() != 3 {
        return None;
    }
    let mut branches = Vec::with_capacity(3);
    for comp in &comps {
        let order = g.order_as_chain(comp, center)?;
        let det = g.chain_det_of(&order).to_u64()?;
        branches.push((det, order));
    }
    branches.sort_by(|a, b| (a.0, a.1.len(), a.1[0]).cmp(&(b.0, b.1.len(), b.1[0])));
    let dets = [branches[0].0, branches[1].0, branches[2].0];
    let (d, l, r) = if dets[1] == dets[2] && dets[0] != dets[1] {
        let d = branches.remove(0).1;
        let l = branches.remove(0).1;
        let r = branches.remove(0).1;
        (d, l, r)
    } else if dets[0] == dets[1] {
        let l = branches.remove(0).1;
        let r = branches.remove(0).1;
        let d = branches.remove(0).1;
        (d, l, r)
    } else {
        let d = branches.remove(0).1;
        let l = branches.remove(0).1;
        let r = branches.remove(0).1;
        (d, l, r)
    };
    Some(LabeledStar { center, l, r, d, dets })
}

/// Derives the inequality system of a double point star: at each chosen
/// vertex v the pullback coefficients must satisfy
/// sum_j x_j * (E_j . E_v) <= 0, which for (-2)-curves reads
/// 2 x_v >= sum of the neighboring coefficients. The chosen vertices
/// depend on the branch type: the center alone for (2,2,d); the center
/// and both long branch heads for (2,3,3) and (2,3,4); and additionally
/// the second vertex of the longest branch and the short branch for
/// (2,3,5).
pub fn derive_inequalities(g: &DualGraph) -> Result<InequalitySystem, RdpError> {
    if !is_rdp(g) {
        return Err(RdpError::NotRdpStar);
    }
    if !matches!(classify_shape(g), ShapeClass::Star { .. }) {
        return Err(RdpError::NotRdpStar);
    }
    let star = labeled_star(g).ok_or(RdpError::NotRdpStar)?;
    let owners: Vec<u32> = match star.dets {
        [2, 2, _] => alloc::vec![star.center],
        [2, 3, 3] | [2, 3, 4] => alloc::vec![star.center, star.l[0], star.r[0]],
        [2, 3, 5] => {
            alloc::vec![star.center, star.l[0], star.r[0], star.r[1], star.d[0]]
        }
        _ => return Err(RdpError::NotRdpStar),
    };
    // Variables: every vertex appearing in some chosen row.
    let mut occurring: Vec<u32> = owners.clone();
    for &v in &owners {
        for &(u, _) in g.neighbors(v) {
            occurring.push(u);
        }
    }
    let mut vars = alloc::vec![(String::from("a"), star.center)];
    for (label, branch) in [("l", &star.l), ("r", &star.r), ("d", &star.d)] {
        for (k, &id) in branch.iter().enumerate() {
            if occurring.contains(&id) {
                vars.push((format!("a{}{}", k + 1, label), id));
            }
        }
    }
    let var_vertices: Vec<u32> = vars.iter().map(|(_, id)| *id).collect();
    let mat = g.intersection_matrix();
    let mut rows = Vec::with_capacity(owners.len());
    for &v in &owners {
        let vi = g.index_of(v)?;
        let row: Vec<i64> = var_vertices
            .iter()
            .map(|&u| mat[g.index_of(u).unwrap()][vi])
            .collect();
        rows.push(row);
    }
    Ok(InequalitySystem {
        vars: vars.into_iter().map(|(n, _)| n).collect(),
        var_vertices,
        rows,
        row_owners: owners,
        box_hi: DEFAULT_BOX,
    })
}

/// Minimal central coefficient and every feasible tuple attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralCoefficientResult {
    pub min_a: u64,
    /// All feasible points (in variable order) with a = min_a.
    pub minimizers: Vec<Vec<u64>>,
    pub box_hi: u64,
}

/// Exhaustively enumerates integer points of the box 1..=box_hi
/// satisfying every inequality, returning the minimal value of the
/// central coefficient together with all points attaining it. The
/// search is a depth-first scan over variable assignments pruned by
/// per-row lower bounds on the unassigned tail.
pub fn minimal_central(sys: &InequalitySystem) -> Result<CentralCoefficientResult, RdpError> {
    let n = sys.vars.len();
    let hi = sys.box_hi as i64;
    // min_tail[r][k]: least possible contribution of variables k.. to row r.
    let mut min_tail = alloc::vec![alloc::vec![0i64; n + 1]; sys.rows.len()];
    for (r, row) in sys.rows.iter().enumerate() {
        for k in (0..n).rev() {
            let c = row[k];
            min_tail[r][k] = min_tail[r][k + 1] + if c > 0 { c } else { c * hi };
        }
    }
    fn dfs(
        sys: &InequalitySystem,
        min_tail: &[Vec<i64>],
        point: &mut Vec<u64>,
        sums: &mut Vec<i64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        let k = point.len();
        if sys
            .rows
            .iter()
            .enumerate()
            .any(|(r, _)| sums[r] + min_tail[r][k] > 0)
        {
            return;
        }
        if k == sys.vars.len() {
            out.push(point.clone());
            return;
        }
        for x in 1..=sys.box_hi {
            point.push(x);
            for (r, row) in sys.rows.iter().enumerate() {
                sums[r] += row[k] * x as i64;
            }
            dfs(sys, min_tail, point, sums, out);
            point.pop();
            for (r, row) in sys.rows.iter().enumerate() {
                sums[r] -= row[k] * x as i64;
            }
        }
    }
    for a in 1..=sys.box_hi {
        let mut point = alloc::vec![a];
        let mut sums: Vec<i64> = sys.rows.iter().map(|row| row[0] * a as i64).collect();
        let mut out = Vec::new();
        dfs(sys, &min_tail, &mut point, &mut sums, &mut out);
        if !out.is_empty() {
            debug_assert!(out.iter().all(|pt| sys.satisfied(pt)));
            return Ok(CentralCoefficientResult { min_a: a, minimizers: out, box_hi: sys.box_hi });
        }
    }
    Err(RdpError::EmptyFeasible { box_hi: sys.box_hi })
}

/// How a candidate characteristic was ruled out, if it was.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundRoute {
    /// min_a / (p - 1) > 1: the pullback forces a non-lc pair, which is
    /// incompatible with F-purity.
    LcThreshold { min_a: u64 },
    /// min_a / (p - 1) >= 1: adjunction to the central curve would
    /// require the marked projective line to be sharply F-split, and
    /// both the classification table and the splitting oracle refuse.
    Adjunction { table: TableAnswer, oracle_yes: bool },
    NotExcluded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharBoundEntry {
    pub p: u64,
    pub excluded: bool,
    pub route: BoundRoute,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharBoundReport {
    pub dets: [u64; 3],
    pub min_a: u64,
    pub entries: Vec<CharBoundEntry>,
    /// Certified constraint on the characteristic, e.g. "p >= 5".
    pub bound_label: String,
}

fn next_prime(mut n: u64) -> u64 {
    let is_prime = |m: u64| m >= 2 && (2..m).take_while(|d| d * d <= m).all(|d| m % d != 0);
    while !is_prime(n) {
        n += 1;
    }
    n
}

/// Splitting-oracle refusal check for the adjunction route: the marked
/// line with the given weights must be sharply F-split for the
/// singularity to be F-pure, and at small p both the table and the
/// oracle refuse.
fn adjunction_route(weights: &[u64], p: u64) -> Result<(bool, BoundRoute), RdpError> {
    let table = p1::table_sharply_f_split(weights, p);
    let ctx = GfCtx::prime(p).map_err(|_| RdpError::NotPrime(p))?;
    let pair = p1::P1Pair::from_weights(&ctx, weights, None).map_err(|_| RdpError::NotRdpStar)?;
    let oracle_yes = matches!(
        p1::oracle_sharply_f_split(&ctx, &pair, 3),
        Ok(SplitAnswer::Yes(_))
    );
    let excluded = table == TableAnswer::No && !oracle_yes;
    Ok((excluded, BoundRoute::Adjunction { table, oracle_yes }))
}

/// For each candidate characteristic, reports whether the double point
/// star of the given type can be F-pure, and by which route it is
/// excluded. The `different` list is the boundary induced on the
/// central curve; its denominators are the weights of the marked line
/// used by the adjunction route.
pub fn char_bound(
    dets: [u64; 3],
    different: &[Rat],
    p_candidates: &[u64],
) -> Result<CharBoundReport, RdpError> {
    let g = rdp_star_graph(dets)?;
    let sys = derive_inequalities(&g)?;
    let res = minimal_central(&sys)?;
    let min_a = res.min_a;
    let mut sorted = dets;
    sorted.sort_unstable();
    let weights: Vec<u64> = if different.len() == 3 {
        let mut w: Vec<u64> = different
            .iter()
            .map(|c| c.denom().to_u64().ok_or(RdpError::NotRdpStar))
            .collect::<Result<_, _>>()?;
        w.sort_unstable();
        w
    } else {
        sorted.to_vec()
    };
    let adjunction_applies = sorted == [2, 3, 5];
    let mut entries = Vec::with_capacity(p_candidates.len());
    for &p in p_candidates {
        if p < 2 {
            return Err(RdpError::NotPrime(p));
        }
        let (excluded, route) = if min_a > p - 1 {
            (true, BoundRoute::LcThreshold { min_a })
        } else if adjunction_applies && min_a >= p - 1 {
            adjunction_route(&weights, p)?
        } else {
            (false, BoundRoute::NotExcluded)
        };
        entries.push(CharBoundEntry { p, excluded, route });
    }
    // The lc route alone excludes p <= min_a; the adjunction route can
    // push the bound past the next prime.
    let first_allowed = next_prime(min_a + 1);
    let bound_label = if adjunction_applies {
        let (excl, _) = adjunction_route(&weights, first_allowed)?;
        if excl {
            format!("p > {}", first_allowed)
        } else {
            format!("p >= {}", first_allowed)
        }
    } else {
        format!("p >= {}", first_allowed)
    };
    Ok(CharBoundReport { dets: sorted, min_a, entries, bound_label })
}
