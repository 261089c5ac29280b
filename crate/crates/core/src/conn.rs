//! The connection relation: `f1` is connected to `f2` when `f1·g` lies in
//! the block of `f2` for some multiplier `g`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::points::TaggedPoint;
use crate::witness::{
    dyadic_radii, spot_check_expr, Claim, ClaimKind, ClaimStatus, ProbePlan, SpotError, SpotReport, Verdict,
};
use crate::zoo::{representative, CombTerms, FnExpr, DEFAULT_FAMILY_N};
use crate::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConnError {
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("no edge {0} -> {1}")]
    UnknownEdge(String, String),
    #[error("no shipped plan for edge {0} -> {1}; supply one")]
    NoDefaultPlan(String, String),
    #[error("malformed DOT at line {line}: {message}")]
    Dot { line: usize, message: String },
    #[error(transparent)]
    Spot(#[from] SpotError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnEdge {
    pub from: String,
    pub to: String,
    pub multiplier: FnExpr,
    pub provenance: String,
}

/// A directed graph of representatives whose edges carry multipliers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnGraph {
    name: String,
    nodes: Vec<String>,
    edges: Vec<ConnEdge>,
}

/// Node and edge structure without multipliers, as read back from DOT.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphShape {
    pub name: String,
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

#[derive(Serialize)]
struct EdgeJson<'a> {
    from: &'a str,
    to: &'a str,
    multiplier: String,
    provenance: &'a str,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    name: &'a str,
    nodes: &'a [String],
    edges: Vec<EdgeJson<'a>>,
}

impl ConnGraph {
    /// Panics on self-edges or edges to undeclared nodes.
    fn build(name: &str, nodes: Vec<String>, edges: Vec<ConnEdge>) -> ConnGraph {
        for e in &edges {
            assert_ne!(e.from, e.to, "self-edge");
            assert!(nodes.contains(&e.from) && nodes.contains(&e.to), "edge to undeclared node");
        }
        ConnGraph { name: name.to_string(), nodes, edges }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[ConnEdge] {
        &self.edges
    }

    pub fn edge(&self, from: &str, to: &str) -> Option<&ConnEdge> {
        self.edges.iter().find(|e| e.from == from && e.to == to)
    }

    pub fn in_degree(&self, node: &str) -> usize {
        self.edges.iter().filter(|e| e.to == node).count()
    }

    pub fn out_degree(&self, node: &str) -> usize {
        self.edges.iter().filter(|e| e.from == node).count()
    }

    pub fn shape(&self) -> GraphShape {
        GraphShape {
            name: self.name.clone(),
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|e| (e.from.clone(), e.to.clone())).collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph {} {{\n", quote_id(&self.name));
        for n in &self.nodes {
            let _ = writeln!(s, "  {};", quote_id(n));
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  {} -> {} [label=\"conn\", g=\"{}\"];",
                quote_id(&e.from),
                quote_id(&e.to),
                escape(&e.multiplier.to_string())
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        let view = GraphJson {
            name: &self.name,
            nodes: &self.nodes,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: &e.from,
                    to: &e.to,
                    multiplier: e.multiplier.to_string(),
                    provenance: &e.provenance,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&view).expect("graph serializes")
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote_id(id: &str) -> String {
    if !id.is_empty()
        && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !id.starts_with(|c: char| c.is_ascii_digit())
    {
        id.to_string()
    } else {
        format!("\"{}\"", escape(id))
    }
}

/// Every representative `f_i` connected to `f_28` through `g ≡ 0`.
pub fn star_graph() -> ConnGraph {
    let nodes: Vec<String> = (1..=28).map(|i| format!("f{i}")).collect();
    let edges = (1..=27)
        .map(|i| ConnEdge {
            from: format!("f{i}"),
            to: "f28".into(),
            multiplier: FnExpr::zero(),
            provenance: "f_i * 0 is the zero function, everywhere differentiable".into(),
        })
        .collect();
    ConnGraph::build("star", nodes, edges)
}

/// `x + Σ_{n>=1} π^n 1_{π^n}(x)`
pub fn multiplier_w_t() -> FnExpr {
    FnExpr::sum([FnExpr::Identity, FnExpr::PiComb(CombTerms::Infinite)])
}

/// `x(x-1) 1_[0,1](x)`
pub fn multiplier_w_c() -> FnExpr {
    let x_minus_one = FnExpr::sum([FnExpr::Identity, FnExpr::scale(-Q::one(), FnExpr::ConstOne)]);
    FnExpr::restrict_to_unit(FnExpr::product([FnExpr::Identity, x_minus_one]))
}

/// Weierstrass, Thomae, Cantor and Dirichlet with the five stated connections.
pub fn big_four_graph() -> ConnGraph {
    let nodes = ["W", "T", "C", "D"].map(String::from).to_vec();
    let edge = |from: &str, to: &str, g: FnExpr, why: &str| ConnEdge {
        from: from.into(),
        to: to.into(),
        multiplier: g,
        provenance: why.into(),
    };
    let lattice = "g = sum_n 1_{A+2n}, A = {sin(m) : m >= 1} dense in [-1,1]";
    let edges = vec![
        edge("W", "D", FnExpr::SinLattice, lattice),
        edge("T", "D", FnExpr::SinLattice, lattice),
        edge("C", "D", FnExpr::SinLattice, lattice),
        edge("W", "T", multiplier_w_t(), "g = x + sum_{n>=1} pi^n 1_{pi^n}(x)"),
        edge("W", "C", multiplier_w_c(), "g = x(x-1) 1_[0,1](x)"),
    ];
    ConnGraph::build("bigfour", nodes, edges)
}

/// The zoo entry a node stands for: `W, T, C, D` or `f1..f28`.
pub fn node_entry(node: &str) -> Option<usize> {
    match node {
        "W" => Some(22),
        "T" => Some(11),
        "C" => Some(25),
        "D" => Some(1),
        _ => node.strip_prefix('f')?.parse().ok().filter(|i| (1..=28).contains(i)),
    }
}

/// `4^(m(m-1)/2)`: each unordered pair has four edge states.
pub fn scenario_count(m: u32) -> BigUint {
    let pairs = m as u64 * m.saturating_sub(1) as u64 / 2;
    BigUint::one() << (2 * pairs) as usize
}

/// Scientific notation rounded half up to `sig` significant figures, e.g. `3.790327×10^227`.
pub fn render_scientific(n: &BigUint, sig: usize) -> String {
    let sig = sig.max(1);
    let digits = n.to_string();
    let mut exp = digits.len() - 1;
    let mut mantissa: Vec<u8> = digits.bytes().map(|b| b - b'0').collect();
    if mantissa.len() > sig {
        let round_up = mantissa[sig] >= 5;
        mantissa.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    mantissa.insert(0, 1);
                    mantissa.truncate(sig);
                    exp += 1;
                    break;
                }
                i -= 1;
                if mantissa[i] == 9 {
                    mantissa[i] = 0;
                } else {
                    mantissa[i] += 1;
                    break;
                }
            }
        }
    }
    mantissa.resize(sig, 0);
    let text: String = mantissa.iter().map(|d| char::from(b'0' + d)).collect();
    if sig == 1 {
        format!("{text}×10^{exp}")
    } else {
        format!("{}.{}×10^{exp}", &text[..1], &text[1..])
    }
}

/// Reads back the node and edge structure of a DOT digraph.
pub fn parse_dot(text: &str) -> Result<GraphShape, ConnError> {
    let err = |line: usize, message: &str| ConnError::Dot { line, message: message.into() };
    let mut name = None;
    let mut nodes: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut closed = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        if closed {
            return Err(err(line_no, "content after closing brace"));
        }
        if name.is_none() {
            let rest = line.strip_prefix("digraph").ok_or_else(|| err(line_no, "expected `digraph`"))?;
            let rest = rest.trim().strip_suffix('{').ok_or_else(|| err(line_no, "expected `{`"))?;
            let (id, tail) = read_id(rest.trim()).ok_or_else(|| err(line_no, "expected graph name"))?;
            if !tail.trim().is_empty() {
                return Err(err(line_no, "unexpected text after graph name"));
            }
            name = Some(id);
            continue;
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let stmt = line.strip_suffix(';').unwrap_or(line);
        let (a, rest) = read_id(stmt).ok_or_else(|| err(line_no, "expected node id"))?;
        let rest = rest.trim_start();
        if let Some(after) = rest.strip_prefix("->") {
            let (b, tail) = read_id(after.trim_start()).ok_or_else(|| err(line_no, "expected edge target"))?;
            let tail = tail.trim();
            if !(tail.is_empty() || (tail.starts_with('[') && tail.ends_with(']'))) {
                return Err(err(line_no, "malformed edge attributes"));
            }
            for n in [&a, &b] {
                if !nodes.contains(n) {
                    nodes.push(n.clone());
                }
            }
            edges.push((a, b));
        } else {
            if !(rest.is_empty() || (rest.starts_with('[') && rest.ends_with(']'))) {
                return Err(err(line_no, "malformed node statement"));
            }
            if !nodes.contains(&a) {
                nodes.push(a);
            }
        }
    }
    match (name, closed) {
        (Some(name), true) => Ok(GraphShape { name, nodes, edges }),
        _ => Err(err(text.lines().count(), "unterminated graph")),
    }
}

/// An identifier, bare or double-quoted, and the remaining text.
fn read_id(s: &str) -> Option<(String, &str)> {
    if let Some(body) = s.strip_prefix('"') {
        let mut out = String::new();
        let mut chars = body.char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => out.push(chars.next()?.1),
                '"' => return Some((out, &body[i + 1..])),
                _ => out.push(c),
            }
        }
        None
    } else {
        let end = s.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(s.len());
        (end > 0).then(|| (s[..end].to_string(), &s[end..]))
    }
}

/// Result of spot-checking `f1·g` against the block of `f2`.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeReport {
    pub from: String,
    pub to: String,
    pub product: String,
    pub target_block: usize,
    pub report: SpotReport,
    /// Claims that were contradicted or left open.
    pub findings: Vec<String>,
}

fn describe(v: &Verdict) -> String {
    match v {
        Verdict::Consistent { budget_used } => format!("consistent after {budget_used} evaluations"),
        Verdict::Falsified { witness, gap, .. } => format!("falsified at {witness} with gap {gap}"),
        Verdict::ConvergesTo { limit } => format!("difference quotients converge to {limit}"),
        Verdict::Oscillates { low, high } => format!("difference quotients oscillate between {low} and {high}"),
        Verdict::Inconclusive { reason } => format!("inconclusive: {reason}"),
    }
}

fn kind_name(k: ClaimKind) -> &'static str {
    match k {
        ClaimKind::Continuous => "continuity",
        ClaimKind::Discontinuous => "discontinuity",
        ClaimKind::Differentiable => "differentiability",
        ClaimKind::NonDifferentiable => "non-differentiability",
    }
}

/// Spot-checks `f1·g` against the declared signature of entry `target`.
pub fn empirical_edge_check(
    (from, to): (&str, &str),
    f1: &FnExpr,
    g: &FnExpr,
    target: usize,
    claims: &[Claim],
) -> Result<EdgeReport, ConnError> {
    let entry = representative(target, DEFAULT_FAMILY_N).map_err(|_| ConnError::UnknownNode(to.into()))?;
    let product = FnExpr::product([f1.clone(), g.clone()]);
    let report = spot_check_expr(target, &product, &entry.declared_signature, claims)?;
    let findings = report
        .results
        .iter()
        .filter(|r| r.status != ClaimStatus::Confirmed)
        .map(|r| {
            let status = if r.status == ClaimStatus::Contradicted { "contradicted" } else { "unresolved" };
            let last = r.verdicts.last().map(describe).unwrap_or_default();
            format!("{} claim at {} {status}: {last}", kind_name(r.kind), r.point)
        })
        .collect();
    Ok(EdgeReport {
        from: from.into(),
        to: to.into(),
        product: product.to_string(),
        target_block: target,
        report,
        findings,
    })
}

/// Looks up `from -> to` in `graph` and checks it with `claims`, or the shipped plan.
pub fn check_edge(graph: &ConnGraph, from: &str, to: &str, claims: Option<&[Claim]>) -> Result<EdgeReport, ConnError> {
    let edge = graph.edge(from, to).ok_or_else(|| ConnError::UnknownEdge(from.into(), to.into()))?;
    let src = node_entry(from).ok_or_else(|| ConnError::UnknownNode(from.into()))?;
    let dst = node_entry(to).ok_or_else(|| ConnError::UnknownNode(to.into()))?;
    let f1 = representative(src, DEFAULT_FAMILY_N).map_err(|_| ConnError::UnknownNode(from.into()))?.expr;
    let owned;
    let claims = match claims {
        Some(c) => c,
        None => {
            owned = default_edge_plans(from, to).ok_or_else(|| ConnError::NoDefaultPlan(from.into(), to.into()))?;
            &owned
        }
    };
    empirical_edge_check((from, to), &f1, &edge.multiplier, dst, claims)
}

fn r(n: i64, d: i64) -> TaggedPoint {
    TaggedPoint::ratio(n, d)
}

fn at(kind: ClaimKind, points: &[TaggedPoint], radii_to: u32) -> Vec<Claim> {
    points.iter().map(|p| Claim::new(kind, ProbePlan::new(p.clone()).with_radii(dyadic_radii(3, radii_to)))).collect()
}

/// Shipped claims for the big-four edges and the star edges into `f28`.
pub fn default_edge_plans(from: &str, to: &str) -> Option<Vec<Claim>> {
    use ClaimKind::*;
    let root2 = TaggedPoint::surd(Q::from_integer(0.into()), Q::one()).expect("nonzero");
    let sin_points =
        || [(1, 0), (2, 0), (1, 1), (2, -1)].map(|(m, n)| TaggedPoint::sin_shift(m, n).expect("valid shift")).to_vec();
    let plans = match (from, to) {
        ("W", "C") => {
            let cont = [r(-1, 1), r(-1, 2), r(0, 1), r(1, 4), r(1, 3), r(1, 2), r(2, 3), r(1, 1), r(3, 2), r(2, 1)];
            [
                at(Continuous, &cont, 24),
                at(Differentiable, &[r(-1, 2), r(3, 2), r(5, 2)], 16),
                at(NonDifferentiable, &[r(0, 1), r(1, 1)], 16),
            ]
            .concat()
        }
        ("W", "T") => [
            at(Continuous, &[root2], 24),
            at(Discontinuous, &[TaggedPoint::pi_power(1), TaggedPoint::pi_power(2)], 16),
            at(NonDifferentiable, &[r(0, 1), TaggedPoint::pi_power(1)], 16),
        ]
        .concat(),
        ("W", "D") | ("T", "D") | ("C", "D") => {
            [at(Discontinuous, &sin_points(), 16), at(NonDifferentiable, &sin_points(), 16)].concat()
        }
        (f, "f28") if node_entry(f).is_some_and(|i| i < 28) => {
            let pts = [r(0, 1), r(1, 3), root2, TaggedPoint::pi_power(1), r(-5, 2)];
            [at(Continuous, &pts, 16), at(Differentiable, &pts, 16)].concat()
        }
        _ => return None,
    };
    Some(plans)
}

/// In- and out-degree of every node.
pub fn degrees(graph: &ConnGraph) -> BTreeMap<String, (usize, usize)> {
    graph.nodes.iter().map(|n| (n.clone(), (graph.in_degree(n), graph.out_degree(n)))).collect()
}
