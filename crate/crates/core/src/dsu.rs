//! Union-find over `{1, ..., n}` tracking component sizes and edge counts.

#[derive(Debug, Clone)]
pub struct EdgeCountingDsu {
    parent: Vec<u32>,
    size: Vec<u32>,
    edges: Vec<u64>,
    components: usize,
}

impl EdgeCountingDsu {
    pub fn new(n: usize) -> Self {
        EdgeCountingDsu {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            edges: vec![0; n],
            components: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Root of the 0-based element `x`, with path halving.
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    fn find_readonly(&self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            x = self.parent[x] as usize;
        }
        x
    }

    /// Adds the edge `{a, b}` (0-based). Returns `true` if two components merged.
    pub fn add_edge(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.edges[ra] += 1;
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.edges[big] += self.edges[small] + 1;
        self.components -= 1;
        true
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn component_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }

    /// `(size, edges)` for every component.
    pub fn components(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        (0..self.parent.len())
            .filter(|&x| self.parent[x] as usize == x)
            .map(|r| (self.size[r] as usize, self.edges[r]))
    }

    /// `(size, edges)` of the component containing `x`.
    pub fn component_of(&self, x: usize) -> (usize, u64) {
        let r = self.find_readonly(x);
        (self.size[r] as usize, self.edges[r])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_edges_and_components() {
        let mut d = EdgeCountingDsu::new(5);
        assert_eq!(d.component_count(), 5);
        assert!(d.add_edge(0, 1));
        assert!(d.add_edge(1, 2));
        assert!(!d.add_edge(0, 2));
        assert!(!d.add_edge(0, 1));
        assert_eq!(d.component_count(), 3);
        assert_eq!(d.component_of(2), (3, 4));
        assert!(d.connected(0, 2));
        assert!(!d.connected(0, 3));
        let mut comps: Vec<_> = d.components().collect();
        comps.sort();
        assert_eq!(comps, vec![(1, 0), (1, 0), (3, 4)]);
    }
}
