use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Qualitative sign of a dependency. `Unspecified` is the `±` of a missing relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quality {
    Positive,
    Negative,
    Unspecified,
}

impl Quality {
    /// Serial composition: signs multiply, `±` absorbs.
    pub fn compose(self, other: Quality) -> Quality {
        use Quality::*;
        match (self, other) {
            (Unspecified, _) | (_, Unspecified) => Unspecified,
            (Positive, Positive) | (Negative, Negative) => Positive,
            _ => Negative,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Quality::Positive => "+",
            Quality::Negative => "-",
            Quality::Unspecified => "±",
        }
    }

    pub fn parse(s: &str) -> Option<Quality> {
        match s.trim() {
            "+" => Some(Quality::Positive),
            "-" => Some(Quality::Negative),
            "±" | "+-" => Some(Quality::Unspecified),
            _ => None,
        }
    }
}

impl fmt::Display for Quality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub strength: T,
    pub quality: Quality,
}

/// Signed directed fuzzy graph of explicit value dependencies.
///
/// A missing pair means strength 0 and unspecified quality.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueDependencyGraph<T> {
    ids: Vec<String>,
    edges: BTreeMap<(usize, usize), Edge<T>>,
}

impl<T: Scalar> ValueDependencyGraph<T> {
    pub fn new(ids: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        Ok(ValueDependencyGraph {
            ids,
            edges: BTreeMap::new(),
        })
    }

    /// Nodes named `r1..rn`.
    pub fn with_size(n: usize) -> Self {
        ValueDependencyGraph {
            ids: (1..=n).map(|i| format!("r{i}")).collect(),
            edges: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn add_edge(&mut self, from: usize, to: usize, strength: T, quality: Quality) -> Result<()> {
        let n = self.len();
        if from >= n || to >= n {
            return Err(Error::invalid(format!("edge ({from},{to}) out of range for {n} nodes")));
        }
        if from == to {
            return Err(Error::invalid(format!("self-dependency on `{}`", self.ids[from])));
        }
        if !(strength > T::zero() && strength <= T::one()) {
            return Err(Error::invalid(format!("strength {strength} outside (0, 1]")));
        }
        if quality == Quality::Unspecified {
            return Err(Error::invalid("an explicit dependency needs quality + or -"));
        }
        self.edges.insert((from, to), Edge { strength, quality });
        Ok(())
    }

    pub fn remove_edge(&mut self, from: usize, to: usize) -> Option<Edge<T>> {
        self.edges.remove(&(from, to))
    }

    pub fn edge(&self, from: usize, to: usize) -> Option<Edge<T>> {
        self.edges.get(&(from, to)).copied()
    }

    /// Edges in `(from, to)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Edge<T>)> + '_ {
        self.edges.iter().map(|(&(i, j), &e)| (i, j, e))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn negative_count(&self) -> usize {
        self.edges
            .values()
            .filter(|e| e.quality == Quality::Negative)
            .count()
    }

    /// Outgoing adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<(usize, Edge<T>)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (i, j, e) in self.edges() {
            adj[i].push((j, e));
        }
        adj
    }

    /// Weakest-link strength and sign product along `path`.
    pub fn path_strength(&self, path: &[usize]) -> Result<(Quality, T)> {
        if path.len() < 2 {
            return Err(Error::invalid("a dependency path needs at least two nodes"));
        }
        let mut quality = Quality::Positive;
        let mut strength = T::one();
        for w in path.windows(2) {
            match self.edge(w[0], w[1]) {
                Some(e) => {
                    quality = quality.compose(e.quality);
                    strength = strength.min_of(e.strength);
                }
                None => return Ok((Quality::Unspecified, T::zero())),
            }
        }
        Ok((quality, strength))
    }

    /// Value dependency level and negative share. NVDL is `None` without edges.
    pub fn vdl_nvdl(&self) -> Result<(T, Option<T>)> {
        let n = self.len();
        if n < 2 {
            return Err(Error::invalid("VDL needs at least two requirements"));
        }
        let k = T::from_usize_lossy(self.edge_count());
        let vdl = k / T::from_usize_lossy(n * (n - 1));
        let nvdl = (self.edge_count() > 0).then(|| T::from_usize_lossy(self.negative_count()) / k);
        Ok((vdl, nvdl))
    }

    /// The same graph with strengths converted to another scalar type.
    pub fn convert<U: Scalar>(&self) -> ValueDependencyGraph<U> {
        ValueDependencyGraph {
            ids: self.ids.clone(),
            edges: self
                .edges
                .iter()
                .map(|(&k, e)| {
                    (
                        k,
                        Edge {
                            strength: U::from_f64_lossy(e.strength.as_f64()),
                            quality: e.quality,
                        },
                    )
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn table_of_serial_inference() {
        use Quality::*;
        assert_eq!(Positive.compose(Positive), Positive);
        assert_eq!(Positive.compose(Negative), Negative);
        assert_eq!(Negative.compose(Positive), Negative);
        assert_eq!(Negative.compose(Negative), Positive);
        for q in [Positive, Negative, Unspecified] {
            assert_eq!(q.compose(Unspecified), Unspecified);
            assert_eq!(Unspecified.compose(q), Unspecified);
        }
    }

    #[test]
    fn weakest_link() {
        let mut g = ValueDependencyGraph::<f64>::with_size(4);
        g.add_edge(0, 1, 0.4, Quality::Positive).unwrap();
        g.add_edge(1, 3, 0.3, Quality::Positive).unwrap();
        g.add_edge(0, 2, 0.8, Quality::Positive).unwrap();
        g.add_edge(2, 3, 0.8, Quality::Positive).unwrap();
        assert_eq!(g.path_strength(&[0, 2, 3]).unwrap(), (Quality::Positive, 0.8));
        assert_eq!(g.path_strength(&[0, 1, 3]).unwrap(), (Quality::Positive, 0.3));
        assert_eq!(g.path_strength(&[0, 3]).unwrap(), (Quality::Unspecified, 0.0));
        assert!(g.path_strength(&[0]).is_err());
    }

    #[test]
    fn density_levels() {
        let r = |a, b| Ratio::new(a, b);
        let mut g = ValueDependencyGraph::<Ratio<i64>>::with_size(3);
        assert_eq!(g.vdl_nvdl().unwrap(), (r(0, 1), None));
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    g.add_edge(i, j, r(1, 2), Quality::Positive).unwrap();
                }
            }
        }
        assert_eq!(g.vdl_nvdl().unwrap(), (r(1, 1), Some(r(0, 1))));
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = ValueDependencyGraph::<f64>::with_size(2);
        assert!(g.add_edge(0, 0, 0.5, Quality::Positive).is_err());
        assert!(g.add_edge(0, 1, 0.0, Quality::Positive).is_err());
        assert!(g.add_edge(0, 1, 1.5, Quality::Positive).is_err());
        assert!(g.add_edge(0, 2, 0.5, Quality::Positive).is_err());
        assert!(g.add_edge(0, 1, 0.5, Quality::Unspecified).is_err());
        assert!(ValueDependencyGraph::<f64>::new(vec!["a".into(), "a".into()]).is_err());
    }
}
