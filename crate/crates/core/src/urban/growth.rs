use std::collections::HashMap;

use crate::grid::Grid2D;
use crate::math::{exp, hypot};
use crate::rng::Rng;
use crate::sampling::{sample_grid_positions, DiscreteSampler};

use super::{RoadGraph, UrbanError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Colonization {
    pub r_influence: f64,
    pub r_kill: f64,
    pub step_len: f64,
    pub max_iters: usize,
}

impl Colonization {
    fn validate(&self) -> Result<(), UrbanError> {
        if !(self.r_kill >= 0.0 && self.r_kill < self.r_influence && self.r_influence.is_finite()) {
            return Err(UrbanError::BadParams("need 0 <= r_kill < r_influence".into()));
        }
        if !(self.step_len > 0.0 && self.step_len.is_finite()) {
            return Err(UrbanError::BadParams("step_len must be > 0".into()));
        }
        Ok(())
    }
}

/// Attractor counts after each iteration's kill pass.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ColonizationTrace {
    pub remaining: Vec<usize>,
    pub iterations: usize,
}

/// Uniform bucket grid over node positions.
struct Buckets {
    cell: f64,
    map: HashMap<(i64, i64), Vec<usize>>,
}

impl Buckets {
    fn new(cell: f64) -> Self {
        Self {
            cell,
            map: HashMap::new(),
        }
    }

    fn key(&self, x: f64, y: f64) -> (i64, i64) {
        ((x / self.cell).floor() as i64, (y / self.cell).floor() as i64)
    }

    fn insert(&mut self, i: usize, x: f64, y: f64) {
        let k = self.key(x, y);
        self.map.entry(k).or_default().push(i);
    }

    /// Candidates within one cell in each direction, so any point closer
    /// than `cell` is included.
    fn near(&self, x: f64, y: f64) -> impl Iterator<Item = usize> + '_ {
        let (kx, ky) = self.key(x, y);
        (-1..=1).flat_map(move |dy| {
            (-1..=1).flat_map(move |dx| self.map.get(&(kx + dx, ky + dy)).into_iter().flatten().copied())
        })
    }
}

pub fn space_colonization(
    roots: &[(f64, f64)],
    attractors: &[(f64, f64)],
    p: &Colonization,
) -> Result<RoadGraph, UrbanError> {
    space_colonization_traced(roots, attractors, p).map(|(g, _)| g)
}

/// Each iteration removes attractors within `r_kill` of a node, then every
/// remaining attractor within `r_influence` pulls its nearest node (lowest
/// index on ties). Each pulled node grows one child `step_len` along the
/// mean unit direction to its attractors. Stops when nothing is pulled or
/// after `max_iters` iterations.
pub fn space_colonization_traced(
    roots: &[(f64, f64)],
    attractors: &[(f64, f64)],
    p: &Colonization,
) -> Result<(RoadGraph, ColonizationTrace), UrbanError> {
    if roots.is_empty() {
        return Err(UrbanError::NoRoots);
    }
    p.validate()?;
    let mut g = RoadGraph::from_roots(roots.iter().copied());
    let mut index = Buckets::new(p.r_influence);
    for (i, n) in g.nodes.iter().enumerate() {
        index.insert(i, n.x, n.y);
    }
    let mut alive: Vec<(f64, f64)> = attractors.to_vec();
    let mut trace = ColonizationTrace::default();
    let kill2 = p.r_kill * p.r_kill;
    let infl2 = p.r_influence * p.r_influence;

    for _ in 0..p.max_iters {
        alive.retain(|&(ax, ay)| {
            !index.near(ax, ay).any(|i| {
                let n = g.nodes[i];
                let (dx, dy) = (n.x - ax, n.y - ay);
                dx * dx + dy * dy <= kill2
            })
        });
        trace.remaining.push(alive.len());
        trace.iterations += 1;
        if alive.is_empty() {
            break;
        }

        let mut pull: HashMap<usize, (f64, f64)> = HashMap::new();
        for &(ax, ay) in &alive {
            let mut best: Option<(f64, usize)> = None;
            for i in index.near(ax, ay) {
                let n = g.nodes[i];
                let (dx, dy) = (n.x - ax, n.y - ay);
                let d2 = dx * dx + dy * dy;
                if d2 > infl2 {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bd, bi)) => d2 < bd || (d2 == bd && i < bi),
                };
                if better {
                    best = Some((d2, i));
                }
            }
            if let Some((d2, i)) = best {
                let d = d2.sqrt();
                if d > 0.0 {
                    let n = g.nodes[i];
                    let e = pull.entry(i).or_insert((0.0, 0.0));
                    e.0 += (ax - n.x) / d;
                    e.1 += (ay - n.y) / d;
                }
            }
        }
        let mut pulled: Vec<usize> = pull.keys().copied().collect();
        pulled.sort_unstable();
        let mut grew = false;
        for i in pulled {
            let (sx, sy) = pull[&i];
            let len = hypot(sx, sy);
            if len < 1e-12 {
                continue;
            }
            let n = g.nodes[i];
            let (nx, ny) = (n.x + p.step_len * sx / len, n.y + p.step_len * sy / len);
            let id = g.add_node(nx, ny, i);
            index.insert(id, nx, ny);
            grew = true;
        }
        if !grew {
            break;
        }
    }
    Ok((g, trace))
}

/// Adds `new_nodes` nodes one at a time. Each lands at a position drawn in
/// proportion to `pop` and links to an existing node chosen with weight
/// `(degree + 1)·exp(−d/λ)`.
pub fn preferential_growth(
    g: &RoadGraph,
    pop: &Grid2D,
    new_nodes: usize,
    lambda: f64,
    rng: &mut Rng,
) -> Result<RoadGraph, UrbanError> {
    if g.nodes.is_empty() {
        return Err(UrbanError::EmptyGraph);
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(UrbanError::BadParams("lambda must be > 0".into()));
    }
    let mut out = g.clone();
    if new_nodes == 0 {
        return Ok(out);
    }
    // validates the density once up front
    DiscreteSampler::new(pop.values())?;
    let mut degree = out.degrees();
    let mut weights = Vec::with_capacity(out.nodes.len() + new_nodes);
    for _ in 0..new_nodes {
        let (x, y) = sample_grid_positions(pop, 1, rng)?[0];
        weights.clear();
        let mut nearest = (f64::INFINITY, 0usize);
        for (i, n) in out.nodes.iter().enumerate() {
            let d = hypot(n.x - x, n.y - y);
            if d < nearest.0 {
                nearest = (d, i);
            }
            weights.push((degree[i] + 1) as f64 * exp(-d / lambda));
        }
        let target = match DiscreteSampler::new(&weights) {
            Ok(s) => s.sample(rng),
            // every proximity weight underflowed: attach to the closest node
            Err(_) => nearest.1,
        };
        out.add_node(x, y, target);
        degree[target] += 1;
        degree.push(1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(r_influence: f64, r_kill: f64, step_len: f64) -> Colonization {
        Colonization {
            r_influence,
            r_kill,
            step_len,
            max_iters: 1000,
        }
    }

    #[test]
    fn single_attractor_chain() {
        let g = space_colonization(&[(0.0, 0.0)], &[(5.0, 0.0)], &params(10.0, 1.0, 1.0)).unwrap();
        assert_eq!(g.edges.len(), 4);
        assert_eq!(g.nodes.len(), 5);
        for (k, n) in g.nodes.iter().enumerate() {
            assert!((n.x - k as f64).abs() < 1e-12 && n.y.abs() < 1e-12);
        }
        assert_eq!(g.edges, vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn no_attractors_keeps_roots() {
        let g = space_colonization(&[(1.0, 2.0), (3.0, 4.0)], &[], &params(5.0, 1.0, 1.0)).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn colonization_errors() {
        assert_eq!(
            space_colonization(&[], &[(1.0, 1.0)], &params(5.0, 1.0, 1.0)).unwrap_err(),
            UrbanError::NoRoots
        );
        assert!(space_colonization(&[(0.0, 0.0)], &[], &params(1.0, 1.0, 1.0)).is_err());
        assert!(space_colonization(&[(0.0, 0.0)], &[], &params(2.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn out_of_range_attractor_is_ignored() {
        let (g, trace) = space_colonization_traced(&[(0.0, 0.0)], &[(50.0, 0.0)], &params(10.0, 1.0, 1.0)).unwrap();
        assert!(g.edges.is_empty());
        assert_eq!(trace.remaining, vec![1]);
    }

    #[test]
    fn preferential_zero_arrivals() {
        let g = RoadGraph::from_roots([(2.0, 2.0)]);
        let pop = Grid2D::filled(8, 8, 1.0).unwrap();
        assert_eq!(preferential_growth(&g, &pop, 0, 1.0, &mut Rng::new(3)).unwrap(), g);
        assert_eq!(
            preferential_growth(&RoadGraph::default(), &pop, 5, 1.0, &mut Rng::new(3)).unwrap_err(),
            UrbanError::EmptyGraph
        );
        let zero = Grid2D::zeros(8, 8).unwrap();
        assert_eq!(
            preferential_growth(&g, &zero, 5, 1.0, &mut Rng::new(3)).unwrap_err(),
            UrbanError::ZeroMass
        );
    }
}
