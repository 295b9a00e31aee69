//! Unit-resistor networks.
//!
//! Every edge of a [`Graph`] is a 1 ohm resistor. A unit current enters at
//! the source and leaves at the grounded sink; voltages come from the
//! grounded Laplacian and currents from Ohm's law. The current through an
//! edge `ab` under unit injection across `ab` is the probability that a
//! uniform spanning tree contains `ab`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::graph::{require_connected, Edge, Graph};
use crate::linalg::{laplacian_minor, Cholesky};

/// Accepted residual per vertex of the Laplacian solve.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// A positive resistance in ohms.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Resistance(f64);

impl Resistance {
    pub fn new(ohms: f64) -> Result<Resistance> {
        if ohms > 0.0 && ohms.is_finite() {
            Ok(Resistance(ohms))
        } else {
            Err(invalid("resistance must be positive and finite"))
        }
    }

    pub fn ohms(self) -> f64 {
        self.0
    }
}

/// Voltages and currents for a unit current from `source` to `sink`.
#[derive(Clone, Debug)]
pub struct ElectricalSolution {
    source: usize,
    sink: usize,
    voltages: Vec<f64>,
    edges: Vec<Edge>,
    /// Current along each edge in the `lo -> hi` direction.
    currents: Vec<f64>,
}

impl ElectricalSolution {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn voltage(&self, v: usize) -> f64 {
        self.voltages[v]
    }

    pub fn voltages(&self) -> &[f64] {
        &self.voltages
    }

    /// Current flowing `from -> to`; `None` if the pair is not an edge.
    pub fn current(&self, from: usize, to: usize) -> Option<f64> {
        let e = Edge::new(from, to).ok()?;
        let idx = self.edges.binary_search(&e).ok()?;
        let i = self.currents[idx];
        Some(if from == e.lo() { i } else { -i })
    }

    /// `(edge, current lo -> hi)` pairs.
    pub fn edge_currents(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.edges.iter().copied().zip(self.currents.iter().copied())
    }

    /// Net current leaving `v`.
    pub fn net_current(&self, v: usize) -> f64 {
        self.edge_currents()
            .filter(|(e, _)| e.touches(v))
            .map(|(e, i)| if e.lo() == v { i } else { -i })
            .sum()
    }

    pub fn effective_resistance(&self) -> f64 {
        self.voltages[self.source] - self.voltages[self.sink]
    }
}

/// Solves for unit current injected at `a` and extracted at grounded `b`.
pub fn solve_unit_current(g: &Graph, a: usize, b: usize) -> Result<ElectricalSolution> {
    let n = g.n();
    if a >= n || b >= n {
        return Err(invalid("vertex out of range"));
    }
    if a == b {
        return Err(invalid("source and sink coincide"));
    }
    let (labels, _) = g.component_labels();
    if labels[a] != labels[b] {
        return Err(Error::NoPath { a, b });
    }
    let vertices: Vec<usize> = (0..n).filter(|&v| v != b && labels[v] == labels[b]).collect();
    let m = vertices.len();
    let factor = Cholesky::factor(laplacian_minor(g, &vertices), m)?;
    let source_row = vertices.binary_search(&a).expect("source in component");
    let mut x = vec![0.0; m];
    x[source_row] = 1.0;
    factor.solve_in_place(&mut x);

    let mut voltages = vec![0.0; n];
    for (&v, &val) in vertices.iter().zip(&x) {
        voltages[v] = val;
    }

    let residual = vertices
        .iter()
        .map(|&v| {
            let lv: f64 = g.neighbors(v).iter().map(|&w| voltages[v] - voltages[w]).sum();
            let rhs = if v == a { 1.0 } else { 0.0 };
            libm::fabs(lv - rhs)
        })
        .fold(0.0, f64::max);
    let tolerance = RESIDUAL_TOLERANCE * n as f64;
    if residual > tolerance {
        return Err(Error::Residual { residual, tolerance });
    }

    let edges = g.edges().to_vec();
    let currents = edges.iter().map(|e| voltages[e.lo()] - voltages[e.hi()]).collect();
    Ok(ElectricalSolution {
        source: a,
        sink: b,
        voltages,
        edges,
        currents,
    })
}

/// Effective resistance between `a` and `b`.
pub fn effective_resistance(g: &Graph, a: usize, b: usize) -> Result<Resistance> {
    Resistance::new(solve_unit_current(g, a, b)?.effective_resistance())
}

/// Probability that a uniform spanning tree of `g` contains `e`.
pub fn edge_inclusion_probability(g: &Graph, e: Edge) -> Result<f64> {
    if !g.contains_edge(e) {
        return Err(invalid("edge not in graph"));
    }
    require_connected(g)?;
    let sol = solve_unit_current(g, e.lo(), e.hi())?;
    Ok(sol.current(e.lo(), e.hi()).expect("edge present").clamp(0.0, 1.0))
}

/// Resistors in a chain.
pub fn combine_series(rs: &[Resistance]) -> Result<Resistance> {
    if rs.is_empty() {
        return Err(invalid("empty resistor list"));
    }
    Resistance::new(rs.iter().map(|r| r.0).sum())
}

/// Resistors sharing both endpoints.
pub fn combine_parallel(rs: &[Resistance]) -> Result<Resistance> {
    if rs.is_empty() {
        return Err(invalid("empty resistor list"));
    }
    Resistance::new(1.0 / rs.iter().map(|r| 1.0 / r.0).sum::<f64>())
}

/// Upper bound `2 / (c + 2)` on the inclusion probability of `e = ab`, where
/// `c` is the number of common neighbors of `a` and `b`.
///
/// The edge in parallel with `c` disjoint two-paths has resistance
/// `2 / (c + 2)`; that network embeds in `g`, so by Rayleigh monotonicity
/// the resistance across `ab` in `g` is at most this and the current
/// through the edge itself is at most the same value.
pub fn two_path_inclusion_bound(g: &Graph, e: Edge) -> Result<f64> {
    if !g.contains_edge(e) {
        return Err(invalid("edge not in graph"));
    }
    let c = g.common_neighbors(e.lo(), e.hi());
    Ok(2.0 / (c as f64 + 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_complete;

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_pairs(n, &pairs).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn series_path() {
        let g = Graph::from_pairs(3, &[(0, 2), (2, 1)]).unwrap();
        let sol = solve_unit_current(&g, 0, 1).unwrap();
        assert!(close(sol.current(0, 2).unwrap(), 1.0));
        assert!(close(sol.current(2, 1).unwrap(), 1.0));
        assert!(close(sol.voltage(0), 2.0));
        assert!(close(sol.voltage(1), 0.0));
        assert!(close(effective_resistance(&g, 0, 1).unwrap().ohms(), 2.0));
    }

    #[test]
    fn single_edge() {
        let g = make_complete(2).unwrap();
        let sol = solve_unit_current(&g, 0, 1).unwrap();
        assert!(close(sol.voltage(0), 1.0));
        assert!(close(sol.current(0, 1).unwrap(), 1.0));
        assert!(close(sol.current(1, 0).unwrap(), -1.0));
        assert!(close(effective_resistance(&g, 1, 0).unwrap().ohms(), 1.0));
    }

    #[test]
    fn four_cycle_current_divider() {
        let g = cycle(4);
        let sol = solve_unit_current(&g, 0, 1).unwrap();
        assert!(close(sol.current(0, 1).unwrap(), 0.75));
        assert!(close(sol.current(0, 3).unwrap(), 0.25));
        assert!(close(sol.current(3, 2).unwrap(), 0.25));
        assert!(close(sol.current(2, 1).unwrap(), 0.25));
        let e = Edge::new(0, 1).unwrap();
        assert!(close(edge_inclusion_probability(&g, e).unwrap(), 0.75));
        assert_eq!(two_path_inclusion_bound(&g, e).unwrap(), 1.0);
    }

    #[test]
    fn complete_graph_values() {
        let k4 = make_complete(4).unwrap();
        assert!(close(effective_resistance(&k4, 0, 1).unwrap().ohms(), 0.5));
        let e = Edge::new(1, 3).unwrap();
        assert!(close(edge_inclusion_probability(&k4, e).unwrap(), 0.5));
        for n in 3..10 {
            let kn = make_complete(n).unwrap();
            let e = Edge::new(0, n - 1).unwrap();
            let exact = edge_inclusion_probability(&kn, e).unwrap();
            assert!(close(exact, 2.0 / n as f64));
            assert!(close(two_path_inclusion_bound(&kn, e).unwrap(), 2.0 / n as f64));
        }
    }

    #[test]
    fn bridge_is_always_included() {
        // triangle 0-1-2 with a pendant 3 attached to 2
        let g = Graph::from_pairs(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let p = edge_inclusion_probability(&g, Edge::new(2, 3).unwrap()).unwrap();
        assert!(close(p, 1.0));
    }

    #[test]
    fn error_paths() {
        let g = Graph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(solve_unit_current(&g, 0, 2).unwrap_err(), Error::NoPath { a: 0, b: 2 });
        assert!(matches!(solve_unit_current(&g, 1, 1), Err(Error::InvalidArgument(_))));
        assert_eq!(
            edge_inclusion_probability(&g, Edge::new(0, 1).unwrap()).unwrap_err(),
            Error::Disconnected
        );
        assert!(edge_inclusion_probability(&g, Edge::new(0, 3).unwrap()).is_err());
        assert!(two_path_inclusion_bound(&g, Edge::new(0, 3).unwrap()).is_err());
        // disconnected graph, but the pair itself is joined
        assert!(close(effective_resistance(&g, 2, 3).unwrap().ohms(), 1.0));
    }

    #[test]
    fn resistor_combination() {
        let r = |x| Resistance::new(x).unwrap();
        assert_eq!(combine_series(&[r(1.0), r(2.0)]).unwrap().ohms(), 3.0);
        assert_eq!(combine_series(&[r(2.5)]).unwrap().ohms(), 2.5);
        assert_eq!(combine_series(&[r(1.0), r(1.0), r(1.0)]).unwrap().ohms(), 3.0);
        assert!(close(combine_parallel(&[r(1.0), r(2.0)]).unwrap().ohms(), 2.0 / 3.0));
        assert!(close(combine_parallel(&[r(2.5)]).unwrap().ohms(), 2.5));
        assert!(close(combine_parallel(&[r(2.0), r(2.0)]).unwrap().ohms(), 1.0));
        assert!(combine_series(&[]).is_err());
        assert!(combine_parallel(&[]).is_err());
        assert!(Resistance::new(0.0).is_err());
        assert!(Resistance::new(-1.0).is_err());
    }

    #[test]
    fn flow_is_conserved() {
        let g = crate::graph::gen_gnp(12, 0.5, 4).unwrap();
        assert!(g.is_connected());
        let sol = solve_unit_current(&g, 3, 7).unwrap();
        for v in 0..12 {
            let expect = match v {
                3 => 1.0,
                7 => -1.0,
                _ => 0.0,
            };
            assert!((sol.net_current(v) - expect).abs() < 1e-9 * 12.0);
        }
    }
}
