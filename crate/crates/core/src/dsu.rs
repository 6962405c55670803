use alloc::vec::Vec;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: alloc::vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns `false` if they were already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// For every element, the minimum element of its set.
    pub fn min_labels(&mut self) -> Vec<usize> {
        let n = self.len();
        let mut min_of_root = alloc::vec![usize::MAX; n];
        for x in 0..n {
            let r = self.find(x);
            if x < min_of_root[r] {
                min_of_root[r] = x;
            }
        }
        (0..n).map(|x| min_of_root[self.find(x)]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges() {
        let mut d = DisjointSets::new(6);
        assert!(d.union(4, 2));
        assert!(d.union(2, 5));
        assert!(!d.union(5, 4));
        assert!(d.same(4, 5));
        assert!(!d.same(0, 5));
        assert_eq!(d.min_labels(), alloc::vec![0, 1, 2, 3, 2, 2]);
    }
}
