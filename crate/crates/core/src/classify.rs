//! Shape recognition for klt resolution graphs and the strong F-regularity
//! verdict for the rational double point catalogue over imperfect fields.
//!
//! Shapes come in five classes. Chains and stars are trees with simple
//! edges; their twisted counterparts arise as quotients of chains and
//! stars by a field extension of degree two or three and show up as paths
//! with multiple edges. Everything else is `Other`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::exact::{self, Rat};
use crate::graph::{DualGraph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeClass {
    /// A path with simple edges; the argument is the vertex count.
    Chain(usize),
    /// A tree with one valence-3 vertex and three chain branches, simple
    /// edges everywhere. Branch lattice determinants and vertex counts
    /// are sorted ascending (by determinant, then length).
    Star { dets: [BigInt; 3], lengths: [usize; 3] },
    /// A path, all edges of multiplicity two, degrees (1, 2, .., 2) from
    /// one end: the quotient of a chain by a degree-two extension.
    TwistedChain(usize),
    /// The quotient of a star by a degree-two or degree-three extension;
    /// `fold` records which. The type triple is sorted ascending.
    TwistedStar { dets: [BigInt; 3], fold: u8 },
    Other,
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeClass::Chain(n) => write!(f, "Chain({})", n),
            ShapeClass::Star { dets, .. } => {
                write!(f, "Star({},{},{})", dets[0], dets[1], dets[2])
            }
            ShapeClass::TwistedChain(n) => write!(f, "TwistedChain({})", n),
            ShapeClass::TwistedStar { dets, .. } => {
                write!(f, "TwistedStar({},{},{})", dets[0], dets[1], dets[2])
            }
            ShapeClass::Other => write!(f, "Other"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    /// The graph is not one of the catalogue shapes.
    NotKltShape,
    /// A decomposition plan was requested for a graph that is not
    /// strongly F-regular.
    NotStronglyFRegular,
    /// A step's Cartier index bound shares a factor with p. Unreachable
    /// for verdicts produced by this module; kept as a loud failure.
    TamenessFails { index_bound: u64, p: u64 },
    Graph(GraphError),
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::NotKltShape => write!(f, "graph shape is outside the klt catalogue"),
            ClassifyError::NotStronglyFRegular => {
                write!(f, "graph is not strongly F-regular, no decomposition plan")
            }
            ClassifyError::TamenessFails { index_bound, p } => {
                write!(f, "index bound {} is divisible by p = {}", index_bound, p)
            }
            ClassifyError::Graph(e) => write!(f, "{}", e),
        }
    }
}

impl From<GraphError> for ClassifyError {
    fn from(e: GraphError) -> Self {
        ClassifyError::Graph(e)
    }
}

/// Orders the vertex ids of a path graph from one end; `None` when the
/// graph is not a simple path on >= 2 vertices.
fn path_order(g: &DualGraph) -> Option<Vec<u32>> {
    if g.n() < 2 || !g.is_tree() {
        return None;
    }
    let mut ends = Vec::new();
    for v in g.vertices() {
        match g.valence(v.id) {
            1 => ends.push(v.id),
            2 => {}
            _ => return None,
        }
    }
    if ends.len() != 2 {
        return None;
    }
    let mut order = Vec::with_capacity(g.n());
    let mut prev = None;
    let mut cur = ends[0];
    loop {
        order.push(cur);
        let next = g
            .neighbors(cur)
            .iter()
            .map(|&(w, _)| w)
            .find(|&w| Some(w) != prev);
        match next {
            Some(w) => {
                prev = Some(cur);
                cur = w;
            }
            None => break,
        }
    }
    if order.len() == g.n() {
        Some(order)
    } else {
        None
    }
}

struct StarData {
    center: u32,
    /// (determinant, vertex ids from the center outward), sorted by
    /// (determinant, length, head id).
    branches: Vec<(BigInt, Vec<u32>)>,
}

fn star_data(g: &DualGraph) -> Option<StarData> {
    if !g.is_tree() || g.edges().iter().any(|&(_, _, m)| m != 1) {
        return None;
    }
    let mut center = None;
    for v in g.vertices() {
        match g.valence(v.id) {
            0 | 1 | 2 => {}
            3 => {
                if center.is_some() {
                    return None;
                }
                center = Some(v.id);
            }
            _ => return None,
        }
    }
    let center = center?;
    let comps = g.components_without(center);
    if comps.len() != 3 {
        return None;
    }
    let mut branches = Vec::with_capacity(3);
    for comp in &comps {
        let order = g.order_as_chain(comp, center)?;
        let det = g.chain_det_of(&order);
        branches.push((det, order));
    }
    branches.sort_by(|a, b| (a.0.clone(), a.1.len(), a.1[0]).cmp(&(b.0.clone(), b.1.len(), b.1[0])));
    Some(StarData { center, branches })
}

struct TripleFold {
    folded: u32,
    center: u32,
    /// Lattice determinant of one upstairs arm.
    arm: BigInt,
}

fn triple_fold(g: &DualGraph) -> Option<TripleFold> {
    if g.n() != 2 || g.edges().len() != 1 {
        return None;
    }
    let (u, v, m) = g.edges()[0];
    if m != 3 {
        return None;
    }
    let (du, dv) = (g.vertex(u).ok()?.degree, g.vertex(v).ok()?.degree);
    let (folded, center) = match (du, dv) {
        (3, 1) => (u, v),
        (1, 3) => (v, u),
        _ => return None,
    };
    let s = g.vertex(folded).ok()?.self_int;
    if s % 3 != 0 {
        return None;
    }
    Some(TripleFold { folded, center, arm: exact::int(-s / 3) })
}

struct Z2Star {
    /// Degree-2 prefix, ordered away from the crossing.
    prefix: Vec<u32>,
    center: u32,
    /// Degree-1 tail beyond the center, ordered away from it.
    tail: Vec<u32>,
    /// Lattice determinant of one upstairs arm (halved prefix).
    arm: BigInt,
    tail_det: BigInt,
}

fn z2_star(g: &DualGraph) -> Option<Z2Star> {
    let order = path_order(g)?;
    for dir in [order.clone(), order.iter().rev().copied().collect()] {
        if let Some(data) = z2_star_oriented(g, &dir) {
            return Some(data);
        }
    }
    None
}

fn z2_star_oriented(g: &DualGraph, order: &[u32]) -> Option<Z2Star> {
    let n = order.len();
    let deg = |id: u32| g.vertex(id).unwrap().degree;
    let a = order.iter().take_while(|&&id| deg(id) == 2).count();
    if a == 0 || n < a + 2 {
        return None;
    }
    if order[a..].iter().any(|&id| deg(id) != 1) {
        return None;
    }
    // Edges inside the prefix and the crossing edge are double, the rest
    // are simple; prefix self-intersections are even.
    for i in 0..n - 1 {
        let m = g.mult(order[i], order[i + 1]);
        let want = if i < a { 2 } else { 1 };
        if m != want {
            return None;
        }
    }
    let mut halved = Vec::with_capacity(a);
    for &id in &order[..a] {
        let s = g.vertex(id).unwrap().self_int;
        if s % 2 != 0 {
            return None;
        }
        halved.push(s / 2);
    }
    // The prefix is ordered ending at the crossing; arm determinants do
    // not depend on chain orientation.
    let arm = exact::chain_determinant(&halved);
    let tail: Vec<u32> = order[a + 1..].to_vec();
    let tail_det = g.chain_det_of(&tail);
    Some(Z2Star {
        prefix: order[..a].to_vec(),
        center: order[a],
        tail,
        arm,
        tail_det,
    })
}

fn sorted_triple(a: BigInt, b: BigInt, c: BigInt) -> [BigInt; 3] {
    let mut t = [a, b, c];
    t.sort();
    t
}

/// Recognizes the catalogue shape of a resolution graph.
pub fn classify_shape(g: &DualGraph) -> ShapeClass {
    if g.vertices().iter().any(|v| !v.genus_zero) {
        return ShapeClass::Other;
    }
    if g.n() == 1 {
        return ShapeClass::Chain(1);
    }
    let all_simple = g.edges().iter().all(|&(_, _, m)| m == 1);
    let max_valence = g.vertices().iter().map(|v| g.valence(v.id)).max().unwrap_or(0);
    if g.is_tree() && all_simple && max_valence <= 2 {
        return ShapeClass::Chain(g.n());
    }
    if let Some(star) = star_data(g) {
        let dets = sorted_triple(
            star.branches[0].0.clone(),
            star.branches[1].0.clone(),
            star.branches[2].0.clone(),
        );
        let lengths = [
            star.branches[0].1.len(),
            star.branches[1].1.len(),
            star.branches[2].1.len(),
        ];
        return ShapeClass::Star { dets, lengths };
    }
    if let Some(tf) = triple_fold(g) {
        return ShapeClass::TwistedStar {
            dets: [tf.arm.clone(), tf.arm.clone(), tf.arm],
            fold: 3,
        };
    }
    if let Some(order) = path_order(g) {
        let all_double = g.edges().iter().all(|&(_, _, m)| m == 2);
        if all_double {
            let deg = |id: u32| g.vertex(id).unwrap().degree;
            for dir in [order.clone(), order.iter().rev().copied().collect::<Vec<_>>()] {
                if deg(dir[0]) == 1 && dir[1..].iter().all(|&id| deg(id) == 2) {
                    return ShapeClass::TwistedChain(g.n());
                }
            }
        }
        if let Some(z2) = z2_star(g) {
            return ShapeClass::TwistedStar {
                dets: sorted_triple(z2.arm.clone(), z2.arm, z2.tail_det),
                fold: 2,
            };
        }
    }
    ShapeClass::Other
}

/// Negative definite with all discrepancies > -1.
pub fn is_klt(g: &DualGraph) -> bool {
    if !g.is_negative_definite() {
        return false;
    }
    match g.discrepancies() {
        Ok(d) => d.iter().all(|a| a > &exact::rat_int(-1)),
        Err(_) => false,
    }
}

/// Negative definite with all discrepancies >= 0.
pub fn is_canonical(g: &DualGraph) -> bool {
    if !g.is_negative_definite() {
        return false;
    }
    match g.discrepancies() {
        Ok(d) => d.iter().all(|a| a >= &exact::rat_int(0)),
        Err(_) => false,
    }
}

/// A rational double point graph: negative definite and K . E_v = 0 for
/// every vertex, forcing all discrepancies to vanish.
pub fn is_rdp(g: &DualGraph) -> bool {
    if !g.is_negative_definite() {
        return false;
    }
    match g.canonical_degrees() {
        Ok(k) => k.iter().all(|&v| v == 0),
        Err(_) => false,
    }
}

/// Outcome of the geometric reducedness analysis of the exceptional
/// curves, from graph data alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeomReducedness {
    AllReduced,
    /// p = 3, triple-fold star, inseparable degree-3 curve.
    CaseA { vertex: u32 },
    /// p = 2, twisted chain or double-fold star, inseparable degree-2 curve.
    CaseB { vertex: u32 },
    /// p = 2 and the graph is a chain of length one: graph data cannot
    /// decide reducedness.
    CaseCIndeterminate,
}

/// Diagnoses which geometric non-reducedness case can occur for the
/// given characteristic, from the shape and separability flags.
pub fn geom_reducedness(g: &DualGraph, p: u64) -> GeomReducedness {
    let shape = classify_shape(g);
    geom_reducedness_with_shape(g, p, &shape)
}

fn geom_reducedness_with_shape(g: &DualGraph, p: u64, shape: &ShapeClass) -> GeomReducedness {
    if p == 3 {
        if let ShapeClass::TwistedStar { fold: 3, .. } = shape {
            if let Some(tf) = triple_fold(g) {
                let v = g.vertex(tf.folded).expect("folded vertex exists");
                if !v.separable {
                    return GeomReducedness::CaseA { vertex: tf.folded };
                }
            }
        }
    }
    if p == 2 {
        let twisted = matches!(shape, ShapeClass::TwistedChain(_))
            || matches!(shape, ShapeClass::TwistedStar { fold: 2, .. });
        if twisted {
            for v in g.vertices() {
                if v.degree == 2 && !v.separable {
                    return GeomReducedness::CaseB { vertex: v.id };
                }
            }
        }
        if matches!(shape, ShapeClass::Chain(1)) {
            return GeomReducedness::CaseCIndeterminate;
        }
    }
    GeomReducedness::AllReduced
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfrOutcome {
    StronglyFRegular,
    NotSFR,
    Indeterminate,
}

impl fmt::Display for SfrOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SfrOutcome::StronglyFRegular => write!(f, "StronglyFRegular"),
            SfrOutcome::NotSFR => write!(f, "NotSFR"),
            SfrOutcome::Indeterminate => write!(f, "Indeterminate"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SfrReason {
    /// Star type outside the admissible list.
    ShapeNotAdmissible,
    /// The characteristic must exceed this bound for the type.
    CharTooSmall { required_above: u64 },
    /// Geometric non-reducedness case 'a', 'b', or the indeterminate 'c'.
    GeomNonReducedCase(char),
    NotKlt,
}

impl fmt::Display for SfrReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SfrReason::ShapeNotAdmissible => write!(f, "shape-not-admissible"),
            SfrReason::CharTooSmall { required_above } => {
                write!(f, "char-too-small-requires-p>{}", required_above)
            }
            SfrReason::GeomNonReducedCase(c) => write!(f, "geom-nonreduced-case-{}", c),
            SfrReason::NotKlt => write!(f, "not-klt"),
        }
    }
}

/// Status of the reducedness condition recorded on a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedStatus {
    AllReduced,
    CaseA,
    CaseB,
    IndeterminateChainOne,
    Assumed,
}

impl fmt::Display for ReducedStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReducedStatus::AllReduced => write!(f, "all-reduced"),
            ReducedStatus::CaseA => write!(f, "nonreduced-case-a"),
            ReducedStatus::CaseB => write!(f, "nonreduced-case-b"),
            ReducedStatus::IndeterminateChainOne => write!(f, "indeterminate-chain-of-one"),
            ReducedStatus::Assumed => write!(f, "assumed-reduced"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SfrVerdict {
    pub outcome: SfrOutcome,
    pub reasons: Vec<SfrReason>,
    pub reduced_status: ReducedStatus,
    /// Which catalogue rule was applied to the shape.
    pub shape_rule: String,
}

enum CharRule {
    AnyP,
    Above(u64),
    NotAdmissible,
}

fn shape_rule(shape: &ShapeClass) -> (String, CharRule) {
    use alloc::string::ToString;
    let two = exact::int(2);
    let three = exact::int(3);
    match shape {
        ShapeClass::Chain(_) => ("chain-any-p".to_string(), CharRule::AnyP),
        ShapeClass::TwistedChain(_) => ("twisted-chain-any-p".to_string(), CharRule::AnyP),
        ShapeClass::Star { dets, .. } | ShapeClass::TwistedStar { dets, .. } => {
            let prefix = if matches!(shape, ShapeClass::Star { .. }) {
                "star"
            } else {
                "twisted-star"
            };
            let rule = if dets[0] == two && dets[1] == two && dets[2] >= two {
                Some((alloc::format!("{}-(2,2,d)-requires-p>2", prefix), CharRule::Above(2)))
            } else if dets[0] == two && dets[1] == three && (dets[2] == three || dets[2] == exact::int(4)) {
                Some((
                    alloc::format!("{}-(2,3,{})-requires-p>3", prefix, dets[2]),
                    CharRule::Above(3),
                ))
            } else if dets[0] == two && dets[1] == three && dets[2] == exact::int(5) {
                Some((alloc::format!("{}-(2,3,5)-requires-p>5", prefix), CharRule::Above(5)))
            } else {
                None
            };
            match rule {
                Some(r) => r,
                None => (
                    alloc::format!(
                        "{}-({},{},{})-not-admissible",
                        prefix,
                        dets[0],
                        dets[1],
                        dets[2]
                    ),
                    CharRule::NotAdmissible,
                ),
            }
        }
        ShapeClass::Other => ("not-a-klt-shape".to_string(), CharRule::NotAdmissible),
    }
}

/// Verdict on strong F-regularity of the singularity with this resolution
/// graph in characteristic p.
pub fn sfr_verdict(g: &DualGraph, p: u64) -> Result<SfrVerdict, ClassifyError> {
    sfr_verdict_with(g, p, false)
}

/// As [`sfr_verdict`], optionally assuming every exceptional curve is
/// geometrically reduced (overriding the graph-based diagnosis).
pub fn sfr_verdict_with(
    g: &DualGraph,
    p: u64,
    assume_reduced: bool,
) -> Result<SfrVerdict, ClassifyError> {
    let shape = classify_shape(g);
    if shape == ShapeClass::Other {
        return Err(ClassifyError::NotKltShape);
    }
    let mut reasons = Vec::new();
    if !is_klt(g) {
        reasons.push(SfrReason::NotKlt);
    }
    let reduced_status = if assume_reduced {
        ReducedStatus::Assumed
    } else {
        match geom_reducedness_with_shape(g, p, &shape) {
            GeomReducedness::AllReduced => ReducedStatus::AllReduced,
            GeomReducedness::CaseA { .. } => {
                reasons.push(SfrReason::GeomNonReducedCase('a'));
                ReducedStatus::CaseA
            }
            GeomReducedness::CaseB { .. } => {
                reasons.push(SfrReason::GeomNonReducedCase('b'));
                ReducedStatus::CaseB
            }
            GeomReducedness::CaseCIndeterminate => {
                reasons.push(SfrReason::GeomNonReducedCase('c'));
                ReducedStatus::IndeterminateChainOne
            }
        }
    };
    let (rule, char_rule) = shape_rule(&shape);
    match char_rule {
        CharRule::AnyP => {}
        CharRule::Above(bound) => {
            if p <= bound {
                reasons.push(SfrReason::CharTooSmall { required_above: bound });
            }
        }
        CharRule::NotAdmissible => reasons.push(SfrReason::ShapeNotAdmissible),
    }
    let outcome = if reasons.is_empty() {
        SfrOutcome::StronglyFRegular
    } else if reasons == [SfrReason::GeomNonReducedCase('c')] {
        SfrOutcome::Indeterminate
    } else {
        SfrOutcome::NotSFR
    };
    Ok(SfrVerdict { outcome, reasons, reduced_status, shape_rule: rule })
}

/// One contraction step of a two-stage (or one-stage) tame plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TameStep {
    /// Vertex ids contracted by this step.
    pub contracted: Vec<u32>,
    /// Curves in the reduced boundary of the source pair of this step.
    pub boundary: Vec<u32>,
    /// For each contracted curve C: (K + B) . C on the source, required
    /// to be <= 0.
    pub nefness: Vec<(u32, Rat)>,
    /// Different coefficients at branch points coming from earlier
    /// contractions, per contracted curve (empty in the first step).
    pub different: Vec<(u32, Vec<Rat>)>,
    /// Cartier index bound for the source pair of this step.
    pub index_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TamePlan {
    pub p: u64,
    pub steps: Vec<TameStep>,
}

impl TamePlan {
    pub fn all_nef(&self) -> bool {
        let zero = exact::rat_int(0);
        self.steps
            .iter()
            .all(|s| s.nefness.iter().all(|(_, v)| v <= &zero))
    }

    /// Largest per-step index bound; coprime to p by construction.
    pub fn index_bound(&self) -> u64 {
        self.steps.iter().map(|s| s.index_bound).max().unwrap_or(1)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Ramification data of one contracted component: ids, the curve of the
/// surviving graph it attaches to, the attaching multiplicity, and the
/// upstairs arm determinant governing the different.
struct RamBranch {
    ids: Vec<u32>,
    attach: u32,
    attach_mult: u32,
    ram_det: BigInt,
}

fn one_step_plan(g: &DualGraph, p: u64) -> Result<TamePlan, ClassifyError> {
    let ids = g.ids();
    let ones = alloc::vec![exact::rat_int(1); g.n()];
    let mut nefness = Vec::with_capacity(g.n());
    for &id in &ids {
        nefness.push((id, g.pair_degree(&ones, id)?));
    }
    let different = ids.iter().map(|&id| (id, Vec::new())).collect();
    Ok(TamePlan {
        p,
        steps: alloc::vec![TameStep {
            contracted: ids.clone(),
            boundary: ids,
            nefness,
            different,
            index_bound: 1,
        }],
    })
}

fn two_step_plan(
    g: &DualGraph,
    p: u64,
    step1: Vec<RamBranch>,
    survivors: Vec<u32>,
) -> Result<TamePlan, ClassifyError> {
    let ones = alloc::vec![exact::rat_int(1); g.n()];
    let mut contracted1: Vec<u32> = Vec::new();
    for b in &step1 {
        contracted1.extend(b.ids.iter().copied());
    }
    contracted1.sort();
    let mut nef1 = Vec::new();
    for &id in &contracted1 {
        nef1.push((id, g.pair_degree(&ones, id)?));
    }
    let diff1 = contracted1.iter().map(|&id| (id, Vec::new())).collect();
    let mut bound2 = 1u64;
    for b in &step1 {
        let m = b
            .ram_det
            .to_u64()
            .ok_or(ClassifyError::NotStronglyFRegular)?;
        bound2 = lcm(bound2, m);
    }
    if gcd(bound2, p) != 1 {
        return Err(ClassifyError::TamenessFails { index_bound: bound2, p });
    }
    let mut nef2 = Vec::new();
    let mut diff2 = Vec::new();
    for &c in &survivors {
        let vtx = g.vertex(c)?;
        let mut val = exact::rat_int(-2 * vtx.degree as i64);
        for &other in &survivors {
            if other != c {
                val += exact::rat_int(g.mult(c, other) as i64);
            }
        }
        let mut coeffs: Vec<Rat> = Vec::new();
        for b in &step1 {
            if b.attach != c {
                continue;
            }
            let m = Rat::from_integer(b.ram_det.clone());
            let coeff = (m.clone() - exact::rat_int(1)) / m;
            for _ in 0..b.attach_mult {
                coeffs.push(coeff.clone());
                val += coeff.clone();
            }
        }
        coeffs.sort();
        nef2.push((c, val));
        diff2.push((c, coeffs));
    }
    Ok(TamePlan {
        p,
        steps: alloc::vec![
            TameStep {
                contracted: contracted1.clone(),
                boundary: g.ids(),
                nefness: nef1,
                different: diff1,
                index_bound: 1,
            },
            TameStep {
                contracted: survivors.clone(),
                boundary: survivors,
                nefness: nef2,
                different: diff2,
                index_bound: bound2,
            },
        ],
    })
}

/// Builds the staged contraction plan certifying tameness: each step
/// contracts a set of curves against which (K + boundary) is anti-nef,
/// and the intermediate pairs have Cartier index coprime to p. Requires
/// a strongly F-regular verdict.
pub fn tame_decomposition_plan(g: &DualGraph, p: u64) -> Result<TamePlan, ClassifyError> {
    let verdict = sfr_verdict(g, p)?;
    if verdict.outcome != SfrOutcome::StronglyFRegular {
        return Err(ClassifyError::NotStronglyFRegular);
    }
    let shape = classify_shape(g);
    match &shape {
        ShapeClass::Chain(_) | ShapeClass::TwistedChain(_) => one_step_plan(g, p),
        ShapeClass::Star { dets, .. } => {
            let star = star_data(g).ok_or(ClassifyError::NotKltShape)?;
            let two_two = dets[0] == exact::int(2) && dets[1] == exact::int(2);
            let branches: Vec<RamBranch> = star
                .branches
                .iter()
                .map(|(det, order)| RamBranch {
                    ids: order.clone(),
                    attach: star.center,
                    attach_mult: 1,
                    ram_det: det.clone(),
                })
                .collect();
            if two_two {
                // Contract the two determinant-2 branches first.
                let mut branches = branches;
                let rest = branches.split_off(2);
                let mut survivors = alloc::vec![star.center];
                for b in &rest {
                    survivors.extend(b.ids.iter().copied());
                }
                survivors.sort();
                two_step_plan(g, p, branches, survivors)
            } else {
                two_step_plan(g, p, branches, alloc::vec![star.center])
            }
        }
        ShapeClass::TwistedStar { fold: 3, .. } => {
            let tf = triple_fold(g).ok_or(ClassifyError::NotKltShape)?;
            let step1 = alloc::vec![RamBranch {
                ids: alloc::vec![tf.folded],
                attach: tf.center,
                attach_mult: 3,
                ram_det: tf.arm,
            }];
            two_step_plan(g, p, step1, alloc::vec![tf.center])
        }
        ShapeClass::TwistedStar { dets, fold: 2 } => {
            let z2 = z2_star(g).ok_or(ClassifyError::NotKltShape)?;
            let two_two = dets[0] == exact::int(2) && dets[1] == exact::int(2) && z2.arm == exact::int(2);
            let prefix_branch = RamBranch {
                ids: z2.prefix.clone(),
                attach: z2.center,
                attach_mult: 2,
                ram_det: z2.arm.clone(),
            };
            let tail_branch = RamBranch {
                ids: z2.tail.clone(),
                attach: z2.center,
                attach_mult: 1,
                ram_det: z2.tail_det.clone(),
            };
            if two_two {
                // The folded prefix is the pair of determinant-2 arms.
                let mut survivors = alloc::vec![z2.center];
                survivors.extend(z2.tail.iter().copied());
                survivors.sort();
                two_step_plan(g, p, alloc::vec![prefix_branch], survivors)
            } else {
                two_step_plan(g, p, alloc::vec![prefix_branch, tail_branch], alloc::vec![z2.center])
            }
        }
        _ => Err(ClassifyError::NotKltShape),
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;
    use alloc::vec;

    fn mk(verts: &[(u32, i64, u32, bool)], edges: &[(u32, u32, u32)]) -> DualGraph {
        let vs = verts
            .iter()
            .map(|&(id, s, d, sep)| Vertex::new(id, s, d, sep))
            .collect();
        DualGraph::new(vs, edges.to_vec()).unwrap()
    }

    fn chain(selfs: &[i64]) -> DualGraph {
        let verts: Vec<_> = selfs
            .iter()
            .enumerate()
            .map(|(i, &s)| (i as u32 + 1, s, 1, true))
            .collect();
        let edges: Vec<_> = (1..selfs.len() as u32).map(|i| (i, i + 1, 1)).collect();
        mk(&verts, &edges)
    }

    fn e8() -> DualGraph {
        let verts: Vec<_> = (0..8).map(|i| (i, -2, 1, true)).collect();
        mk(
            &verts,
            &[(0, 1, 1), (0, 2, 1), (2, 3, 1), (0, 4, 1), (4, 5, 1), (5, 6, 1), (6, 7, 1)],
        )
    }

    fn d4() -> DualGraph {
        mk(
            &[(0, -2, 1, true), (1, -2, 1, true), (2, -2, 1, true), (3, -2, 1, true)],
            &[(0, 1, 1), (0, 2, 1), (0, 3, 1)],
        )
    }

    fn triple_fold_graph(sep: bool) -> DualGraph {
        mk(&[(1, -6, 3, sep), (2, -2, 1, true)], &[(1, 2, 3)])
    }

    fn twisted_chain3(sep: bool) -> DualGraph {
        mk(
            &[(1, -2, 1, true), (2, -4, 2, sep), (3, -4, 2, true)],
            &[(1, 2, 2), (2, 3, 2)],
        )
    }

    fn z2_233_long(sep: bool) -> DualGraph {
        mk(
            &[(1, -4, 2, sep), (2, -4, 2, true), (3, -2, 1, true), (4, -2, 1, true)],
            &[(1, 2, 2), (2, 3, 2), (3, 4, 1)],
        )
    }

    fn z2_233_short() -> DualGraph {
        mk(
            &[(1, -6, 2, true), (2, -2, 1, true), (3, -2, 1, true)],
            &[(1, 2, 2), (2, 3, 1)],
        )
    }

    fn z2_22d(d_tail: usize) -> DualGraph {
        let mut verts = vec![(1u32, -4i64, 2u32, true)];
        let mut edges = vec![(1u32, 2u32, 2u32)];
        for i in 0..=d_tail as u32 {
            verts.push((2 + i, -2, 1, true));
        }
        for i in 0..d_tail as u32 {
            edges.push((2 + i, 3 + i, 1));
        }
        mk(&verts, &edges)
    }

    #[test]
    fn chains_classify() {
        assert_eq!(classify_shape(&chain(&[-5])), ShapeClass::Chain(1));
        assert_eq!(classify_shape(&chain(&[-2, -3, -2])), ShapeClass::Chain(3));
    }

    #[test]
    fn stars_classify() {
        match classify_shape(&e8()) {
            ShapeClass::Star { dets, lengths } => {
                assert_eq!(dets, [exact::int(2), exact::int(3), exact::int(5)]);
                assert_eq!(lengths, [1, 2, 4]);
            }
            other => panic!("E8 classified as {:?}", other),
        }
        match classify_shape(&d4()) {
            ShapeClass::Star { dets, lengths } => {
                assert_eq!(dets, [exact::int(2), exact::int(2), exact::int(2)]);
                assert_eq!(lengths, [1, 1, 1]);
            }
            other => panic!("D4 classified as {:?}", other),
        }
    }

    #[test]
    fn twisted_chains_classify() {
        assert_eq!(classify_shape(&twisted_chain3(true)), ShapeClass::TwistedChain(3));
        let two = mk(
            &[(1, -2, 1, true), (2, -4, 2, true)],
            &[(1, 2, 2)],
        );
        assert_eq!(classify_shape(&two), ShapeClass::TwistedChain(2));
    }

    #[test]
    fn twisted_stars_classify() {
        match classify_shape(&triple_fold_graph(true)) {
            ShapeClass::TwistedStar { dets, fold } => {
                assert_eq!(fold, 3);
                assert_eq!(dets, [exact::int(2), exact::int(2), exact::int(2)]);
            }
            other => panic!("triple fold classified as {:?}", other),
        }
        for g in [z2_233_long(true), z2_233_short()] {
            match classify_shape(&g) {
                ShapeClass::TwistedStar { dets, fold } => {
                    assert_eq!(fold, 2);
                    assert_eq!(dets, [exact::int(2), exact::int(3), exact::int(3)]);
                }
                other => panic!("z2 star classified as {:?}", other),
            }
        }
        match classify_shape(&z2_22d(1)) {
            ShapeClass::TwistedStar { dets, fold } => {
                assert_eq!(fold, 2);
                assert_eq!(dets, [exact::int(2), exact::int(2), exact::int(2)]);
            }
            other => panic!("z2 (2,2,2) classified as {:?}", other),
        }
        match classify_shape(&z2_22d(2)) {
            ShapeClass::TwistedStar { dets, .. } => {
                assert_eq!(dets, [exact::int(2), exact::int(2), exact::int(3)]);
            }
            other => panic!("z2 (2,2,3) classified as {:?}", other),
        }
    }

    #[test]
    fn non_catalogue_shapes() {
        // Valence four.
        let cross = mk(
            &[(0, -2, 1, true), (1, -2, 1, true), (2, -2, 1, true), (3, -2, 1, true), (4, -2, 1, true)],
            &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)],
        );
        assert_eq!(classify_shape(&cross), ShapeClass::Other);
        // A cycle.
        let tri = mk(
            &[(1, -3, 1, true), (2, -3, 1, true), (3, -3, 1, true)],
            &[(1, 2, 1), (2, 3, 1), (1, 3, 1)],
        );
        assert_eq!(classify_shape(&tri), ShapeClass::Other);
        // Double edge between two degree-one curves fits no fold pattern.
        let dbl = mk(&[(1, -2, 1, true), (2, -2, 1, true)], &[(1, 2, 2)]);
        assert_eq!(classify_shape(&dbl), ShapeClass::Other);
        // Triple edge needs 3 | self-intersection of the folded curve.
        let bad_fold = mk(&[(1, -5, 3, true), (2, -2, 1, true)], &[(1, 2, 3)]);
        assert_eq!(classify_shape(&bad_fold), ShapeClass::Other);
        // Simple path with a lone double edge in the middle.
        let mixed = mk(
            &[(1, -2, 1, true), (2, -3, 2, true), (3, -2, 1, true)],
            &[(1, 2, 2), (2, 3, 1)],
        );
        assert_eq!(classify_shape(&mixed), ShapeClass::Other);
        // Positive genus disqualifies.
        let mut v = Vertex::new(1, -2, 1, true);
        v.genus_zero = false;
        let g = DualGraph::new(vec![v], vec![]).unwrap();
        assert_eq!(classify_shape(&g), ShapeClass::Other);
    }

    #[test]
    fn klt_and_rdp_predicates() {
        assert!(is_klt(&e8()));
        assert!(is_rdp(&e8()));
        assert!(is_canonical(&e8()));
        assert!(is_klt(&chain(&[-2, -3])));
        assert!(!is_rdp(&chain(&[-2, -3])));
        // Degenerate twisted chain: intersection matrix is singular.
        let flat = mk(&[(1, -2, 1, true), (2, -2, 2, true)], &[(1, 2, 2)]);
        assert!(!is_klt(&flat));
        // The RDP condition reads s = -2 deg through the degree.
        let twisted_rdp = mk(&[(1, -2, 1, true), (2, -4, 2, true)], &[(1, 2, 2)]);
        assert!(is_rdp(&twisted_rdp));
    }

    #[test]
    fn verdict_char_thresholds() {
        for (p, want) in [(2u64, false), (3, false), (5, false), (7, true), (11, true)] {
            let v = sfr_verdict(&e8(), p).unwrap();
            assert_eq!(
                v.outcome == SfrOutcome::StronglyFRegular,
                want,
                "E8 at p = {}",
                p
            );
        }
        let v5 = sfr_verdict(&e8(), 5).unwrap();
        assert_eq!(v5.reasons, vec![SfrReason::CharTooSmall { required_above: 5 }]);
        assert_eq!(v5.shape_rule, "star-(2,3,5)-requires-p>5");
        let v2 = sfr_verdict(&d4(), 2).unwrap();
        assert_eq!(v2.outcome, SfrOutcome::NotSFR);
        assert!(sfr_verdict(&d4(), 3).unwrap().outcome == SfrOutcome::StronglyFRegular);
        assert!(sfr_verdict(&chain(&[-2, -2, -2]), 2).unwrap().outcome == SfrOutcome::StronglyFRegular);
    }

    #[test]
    fn verdict_chain_of_one() {
        let g = chain(&[-3]);
        let v = sfr_verdict(&g, 2).unwrap();
        assert_eq!(v.outcome, SfrOutcome::Indeterminate);
        assert_eq!(v.reasons, vec![SfrReason::GeomNonReducedCase('c')]);
        assert_eq!(v.reduced_status, ReducedStatus::IndeterminateChainOne);
        let assumed = sfr_verdict_with(&g, 2, true).unwrap();
        assert_eq!(assumed.outcome, SfrOutcome::StronglyFRegular);
        assert_eq!(assumed.reduced_status, ReducedStatus::Assumed);
        assert_eq!(sfr_verdict(&g, 3).unwrap().outcome, SfrOutcome::StronglyFRegular);
    }

    #[test]
    fn verdict_geom_cases() {
        // Case a: p = 3 triple fold with inseparable folded curve.
        let insep = triple_fold_graph(false);
        let v = sfr_verdict(&insep, 3).unwrap();
        assert_eq!(v.outcome, SfrOutcome::NotSFR);
        assert_eq!(v.reasons, vec![SfrReason::GeomNonReducedCase('a')]);
        assert_eq!(geom_reducedness(&insep, 3), GeomReducedness::CaseA { vertex: 1 });
        assert_eq!(geom_reducedness(&insep, 5), GeomReducedness::AllReduced);
        assert_eq!(sfr_verdict(&insep, 5).unwrap().outcome, SfrOutcome::StronglyFRegular);
        assert_eq!(
            sfr_verdict(&triple_fold_graph(true), 3).unwrap().outcome,
            SfrOutcome::StronglyFRegular
        );
        // At p = 2 the (2,2,2) char bound fires instead.
        let v2 = sfr_verdict(&insep, 2).unwrap();
        assert_eq!(v2.reasons, vec![SfrReason::CharTooSmall { required_above: 2 }]);
        // Case b: p = 2 twisted chain with inseparable degree-2 curve.
        let tb = twisted_chain3(false);
        let vb = sfr_verdict(&tb, 2).unwrap();
        assert_eq!(vb.reasons, vec![SfrReason::GeomNonReducedCase('b')]);
        assert_eq!(geom_reducedness(&tb, 2), GeomReducedness::CaseB { vertex: 2 });
        assert_eq!(sfr_verdict(&tb, 3).unwrap().outcome, SfrOutcome::StronglyFRegular);
        assert_eq!(
            sfr_verdict(&twisted_chain3(true), 2).unwrap().outcome,
            SfrOutcome::StronglyFRegular
        );
        // Case b on a folded star combines with the char bound.
        let zb = z2_233_long(false);
        let vzb = sfr_verdict(&zb, 2).unwrap();
        assert!(vzb.reasons.contains(&SfrReason::GeomNonReducedCase('b')));
        assert!(vzb
            .reasons
            .contains(&SfrReason::CharTooSmall { required_above: 3 }));
    }

    #[test]
    fn verdict_not_klt_and_inadmissible() {
        let flat = mk(&[(1, -2, 1, true), (2, -2, 2, true)], &[(1, 2, 2)]);
        let v = sfr_verdict(&flat, 5).unwrap();
        assert_eq!(v.reasons, vec![SfrReason::NotKlt]);
        assert_eq!(v.outcome, SfrOutcome::NotSFR);
        // Star of type (2,3,7).
        let verts: Vec<_> = (0..10).map(|i| (i, -2, 1, true)).collect();
        let t237 = mk(
            &verts,
            &[
                (0, 1, 1),
                (0, 2, 1),
                (2, 3, 1),
                (0, 4, 1),
                (4, 5, 1),
                (5, 6, 1),
                (6, 7, 1),
                (7, 8, 1),
                (8, 9, 1),
            ],
        );
        let v7 = sfr_verdict(&t237, 11).unwrap();
        assert!(v7.reasons.contains(&SfrReason::ShapeNotAdmissible));
        assert_eq!(v7.outcome, SfrOutcome::NotSFR);
        // Non-catalogue shape errors out.
        let tri = mk(
            &[(1, -3, 1, true), (2, -3, 1, true), (3, -3, 1, true)],
            &[(1, 2, 1), (2, 3, 1), (1, 3, 1)],
        );
        assert_eq!(sfr_verdict(&tri, 5), Err(ClassifyError::NotKltShape));
    }

    #[test]
    fn plan_chains() {
        let plan = tame_decomposition_plan(&chain(&[-2, -2, -2]), 7).unwrap();
        assert_eq!(plan.steps.len(), 1);
        let s = &plan.steps[0];
        assert_eq!(s.index_bound, 1);
        assert_eq!(
            s.nefness,
            vec![
                (1, exact::rat_int(-1)),
                (2, exact::rat_int(0)),
                (3, exact::rat_int(-1))
            ]
        );
        assert!(plan.all_nef());
        assert_eq!(plan.index_bound(), 1);

        let tplan = tame_decomposition_plan(&twisted_chain3(true), 3).unwrap();
        assert_eq!(tplan.steps.len(), 1);
        assert_eq!(
            tplan.steps[0].nefness,
            vec![
                (1, exact::rat_int(0)),
                (2, exact::rat_int(0)),
                (3, exact::rat_int(-2))
            ]
        );
        assert!(tplan.all_nef());
    }

    #[test]
    fn plan_e8() {
        let plan = tame_decomposition_plan(&e8(), 7).unwrap();
        assert_eq!(plan.steps.len(), 2);
        let s1 = &plan.steps[0];
        assert_eq!(s1.contracted, vec![1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(s1.boundary.len(), 8);
        assert_eq!(s1.index_bound, 1);
        assert!(s1.nefness.iter().all(|(_, v)| v <= &exact::rat_int(0)));
        let s2 = &plan.steps[1];
        assert_eq!(s2.contracted, vec![0]);
        assert_eq!(s2.nefness, vec![(0, exact::rat(-1, 30))]);
        assert_eq!(
            s2.different,
            vec![(0, vec![exact::rat(1, 2), exact::rat(2, 3), exact::rat(4, 5)])]
        );
        assert_eq!(s2.index_bound, 30);
        assert!(plan.all_nef());
        assert_eq!(plan.index_bound(), 30);
    }

    #[test]
    fn plan_two_two_d() {
        let plan = tame_decomposition_plan(&d4(), 3).unwrap();
        assert_eq!(plan.steps.len(), 2);
        assert_eq!(plan.steps[0].contracted, vec![1, 2]);
        assert_eq!(plan.steps[1].contracted, vec![0, 3]);
        assert_eq!(plan.steps[1].index_bound, 2);
        let nef2 = &plan.steps[1].nefness;
        assert_eq!(nef2[0], (0, exact::rat_int(0)));
        assert_eq!(nef2[1], (3, exact::rat_int(-1)));
        assert_eq!(
            plan.steps[1].different[0],
            (0, vec![exact::rat(1, 2), exact::rat(1, 2)])
        );
        assert!(plan.all_nef());

        let zplan = tame_decomposition_plan(&z2_22d(2), 3).unwrap();
        assert_eq!(zplan.steps.len(), 2);
        assert_eq!(zplan.steps[0].contracted, vec![1]);
        assert_eq!(zplan.steps[1].contracted, vec![2, 3, 4]);
        assert_eq!(zplan.steps[1].index_bound, 2);
        assert_eq!(zplan.steps[1].nefness[0], (2, exact::rat_int(0)));
        assert_eq!(
            zplan.steps[1].different[0],
            (2, vec![exact::rat(1, 2), exact::rat(1, 2)])
        );
        assert!(zplan.all_nef());
    }

    #[test]
    fn plan_folded_stars() {
        let plan = tame_decomposition_plan(&triple_fold_graph(true), 5).unwrap();
        assert_eq!(plan.steps.len(), 2);
        assert_eq!(plan.steps[0].contracted, vec![1]);
        assert_eq!(plan.steps[0].nefness, vec![(1, exact::rat_int(-3))]);
        assert_eq!(plan.steps[1].nefness, vec![(2, exact::rat(-1, 2))]);
        assert_eq!(
            plan.steps[1].different,
            vec![(2, vec![exact::rat(1, 2), exact::rat(1, 2), exact::rat(1, 2)])]
        );
        assert_eq!(plan.steps[1].index_bound, 2);

        let zplan = tame_decomposition_plan(&z2_233_long(true), 5).unwrap();
        assert_eq!(zplan.steps.len(), 2);
        assert_eq!(zplan.steps[0].contracted, vec![1, 2, 4]);
        assert_eq!(zplan.steps[1].contracted, vec![3]);
        assert_eq!(zplan.steps[1].nefness, vec![(3, exact::rat(-1, 6))]);
        assert_eq!(
            zplan.steps[1].different,
            vec![(3, vec![exact::rat(1, 2), exact::rat(2, 3), exact::rat(2, 3)])]
        );
        assert_eq!(zplan.steps[1].index_bound, 6);
        assert!(zplan.all_nef());
    }

    #[test]
    fn plan_requires_sfr() {
        assert_eq!(
            tame_decomposition_plan(&e8(), 5),
            Err(ClassifyError::NotStronglyFRegular)
        );
        assert_eq!(
            tame_decomposition_plan(&chain(&[-3]), 2),
            Err(ClassifyError::NotStronglyFRegular)
        );
        let plan = tame_decomposition_plan(&chain(&[-3]), 3).unwrap();
        assert_eq!(plan.steps.len(), 1);
        assert_eq!(plan.steps[0].nefness, vec![(1, exact::rat_int(-2))]);
    }
}
