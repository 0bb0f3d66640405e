//! Static weighted spatial models and routes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Locations `0..len` connected by directed, non-negatively weighted edges.
#[derive(Debug)]
pub struct SpatialModel {
    adjacency: Vec<Vec<(usize, f64)>>,
    names: Vec<String>,
    distances: OnceLock<Vec<f64>>,
}

impl Clone for SpatialModel {
    fn clone(&self) -> Self {
        SpatialModel {
            adjacency: self.adjacency.clone(),
            names: self.names.clone(),
            distances: self.distances.clone(),
        }
    }
}

impl PartialEq for SpatialModel {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency && self.names == other.names
    }
}

impl SpatialModel {
    /// Builds a model from directed edges `(src, dst, weight)`.
    pub fn new(
        locations: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        if locations == 0 {
            return Err(Error::InvalidModel(
                "a spatial model needs at least one location".into(),
            ));
        }
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); locations];
        for (src, dst, w) in edges {
            for idx in [src, dst] {
                if idx >= locations {
                    return Err(Error::OutOfRange {
                        what: "location",
                        index: idx,
                        size: locations,
                    });
                }
            }
            if src == dst {
                return Err(Error::InvalidModel(format!("self-loop on location {src}")));
            }
            if !(w >= 0.0) {
                return Err(Error::InvalidModel(format!(
                    "edge {src}->{dst} has invalid weight {w}"
                )));
            }
            if adjacency[src].iter().any(|&(d, _)| d == dst) {
                return Err(Error::InvalidModel(format!("duplicate edge {src}->{dst}")));
            }
            adjacency[src].push((dst, w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(d, _)| d);
        }
        Ok(SpatialModel {
            adjacency,
            names: (0..locations).map(|i| i.to_string()).collect(),
            distances: OnceLock::new(),
        })
    }

    /// Builds a model where every edge is present in both directions.
    pub fn undirected(
        locations: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let both: Vec<_> = edges
            .into_iter()
            .flat_map(|(a, b, w)| [(a, b, w), (b, a, w)])
            .collect();
        Self::new(locations, both)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.len() {
            return Err(Error::shape(format!("{} names", self.len()), names.len()));
        }
        self.names = names;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn name(&self, location: usize) -> &str {
        &self.names[location]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Outgoing edges of `location` as `(target, weight)`.
    pub fn neighbors(&self, location: usize) -> Result<&[(usize, f64)]> {
        self.adjacency
            .get(location)
            .map(Vec::as_slice)
            .ok_or(Error::OutOfRange {
                what: "location",
                index: location,
                size: self.len(),
            })
    }

    pub(crate) fn out_edges(&self, location: usize) -> &[(usize, f64)] {
        &self.adjacency[location]
    }

    pub fn weight(&self, src: usize, dst: usize) -> Option<f64> {
        self.adjacency
            .get(src)?
            .iter()
            .find(|&&(d, _)| d == dst)
            .map(|&(_, w)| w)
    }

    /// Row-major `len × len` matrix of minimal route distances; `+inf` marks
    /// unreachable pairs. Computed on first use.
    pub fn pairwise_distances(&self) -> &[f64] {
        self.distances.get_or_init(|| {
            let n = self.len();
            let mut out = Vec::with_capacity(n * n);
            for src in 0..n {
                out.extend(self.dijkstra(src));
            }
            out
        })
    }

    pub fn distance(&self, from: usize, to: usize) -> f64 {
        self.pairwise_distances()[from * self.len() + to]
    }

    fn dijkstra(&self, src: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.len()];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(MinDist(0.0, src));
        while let Some(MinDist(d, x)) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            for &(y, w) in &self.adjacency[x] {
                let nd = d + w;
                if nd < dist[y] {
                    dist[y] = nd;
                    heap.push(MinDist(nd, y));
                }
            }
        }
        dist
    }

    /// Sum of the first `i` edge weights of `route`.
    pub fn route_distance(&self, route: &Route, i: usize) -> Result<f64> {
        let r = route.locations();
        if i >= r.len() {
            return Err(Error::OutOfRange {
                what: "route position",
                index: i,
                size: r.len(),
            });
        }
        let mut total = 0.0;
        for pair in r[..=i].windows(2) {
            let w = self
                .weight(pair[0], pair[1])
                .ok_or_else(|| Error::InvalidModel(format!("no edge {}->{}", pair[0], pair[1])))?;
            total += w;
        }
        if let Some(&bad) = r.iter().find(|&&l| l >= self.len()) {
            return Err(Error::OutOfRange {
                what: "location",
                index: bad,
                size: self.len(),
            });
        }
        Ok(total)
    }

    /// All routes from `start` whose total distance stays within `max_dist`
    /// and that visit no location more than `max_visits` times.
    pub fn enumerate_routes(&self, start: usize, max_dist: f64, max_visits: usize) -> Vec<Route> {
        let mut out = Vec::new();
        let mut visits = vec![0usize; self.len()];
        let mut path = vec![start];
        visits[start] = 1;
        self.extend_routes(&mut path, 0.0, max_dist, max_visits, &mut visits, &mut out);
        out
    }

    /// All simple routes from `start` with distance at most `max_dist`.
    pub fn enumerate_prefix_routes(&self, start: usize, max_dist: f64) -> Vec<Route> {
        self.enumerate_routes(start, max_dist, 1)
    }

    fn extend_routes(
        &self,
        path: &mut Vec<usize>,
        dist: f64,
        max_dist: f64,
        max_visits: usize,
        visits: &mut [usize],
        out: &mut Vec<Route>,
    ) {
        out.push(Route(path.clone()));
        let x = *path.last().unwrap();
        for &(y, w) in &self.adjacency[x] {
            let nd = dist + w;
            if nd <= max_dist && visits[y] < max_visits {
                visits[y] += 1;
                path.push(y);
                self.extend_routes(path, nd, max_dist, max_visits, visits, out);
                path.pop();
                visits[y] -= 1;
            }
        }
    }
}

/// A finite route: consecutive locations must be joined by an edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Route(Vec<usize>);

impl Route {
    pub fn new(locations: Vec<usize>) -> Self {
        Route(locations)
    }

    pub fn locations(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(PartialEq)]
struct MinDist(f64, usize);

impl Eq for MinDist {}

impl PartialOrd for MinDist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MinDist {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Great-circle distance in kilometres between two `(lat, lon)` points in degrees.
pub fn haversine_km(a: (f64, f64), b: (f64, f64)) -> f64 {
    const EARTH_RADIUS_KM: f64 = 6371.0088;
    let (lat1, lon1) = (a.0.to_radians(), a.1.to_radians());
    let (lat2, lon2) = (b.0.to_radians(), b.1.to_radians());
    let h = ((lat2 - lat1) / 2.0).sin().powi(2)
        + lat1.cos() * lat2.cos() * ((lon2 - lon1) / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().asin()
}
