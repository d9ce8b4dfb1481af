use super::{Permutation, StepKind, Transposition};

/// A permutation together with a cycle label per element, so that
/// "are `i` and `j` in the same cycle?" is answered in O(1).
///
/// Right multiplication by a transposition costs O(size of the smaller cycle
/// involved): a merge relabels the smaller cycle, a split walks both halves in
/// lockstep and relabels whichever closes first.
#[derive(Debug, Clone)]
pub struct CycleTracker {
    perm: Permutation,
    label: Vec<u32>,
    size: Vec<u32>,
    free: Vec<u32>,
    cycles: usize,
}

impl CycleTracker {
    pub fn new(perm: Permutation) -> Self {
        let n = perm.n();
        let mut label = vec![u32::MAX; n];
        let mut size = Vec::new();
        let img = perm.zero_based();
        for start in 0..n {
            if label[start] != u32::MAX {
                continue;
            }
            let l = size.len() as u32;
            let mut len = 0u32;
            let mut x = start;
            while label[x] == u32::MAX {
                label[x] = l;
                len += 1;
                x = img[x] as usize;
            }
            size.push(len);
        }
        let cycles = size.len();
        CycleTracker {
            perm,
            label,
            size,
            free: Vec::new(),
            cycles,
        }
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn into_perm(self) -> Permutation {
        self.perm
    }

    pub fn n(&self) -> usize {
        self.perm.n()
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles
    }

    pub fn distance_from_identity(&self) -> usize {
        self.n() - self.cycles
    }

    #[inline]
    pub fn same_cycle(&self, a: usize, b: usize) -> bool {
        self.label[a - 1] == self.label[b - 1]
    }

    pub fn cycle_size_of(&self, x: usize) -> usize {
        self.size[self.label[x - 1] as usize] as usize
    }

    /// What right multiplication by `t` would do, without doing it.
    #[inline]
    pub fn kind_of(&self, t: &Transposition) -> StepKind {
        if self.same_cycle(t.i(), t.j()) {
            StepKind::Fragmentation
        } else {
            StepKind::Coagulation
        }
    }

    /// `σ ← σ · t`.
    pub fn apply(&mut self, t: &Transposition) -> StepKind {
        let (i, j) = (t.i() - 1, t.j() - 1);
        let (li, lj) = (self.label[i], self.label[j]);
        if li != lj {
            let (small_start, small, big) = if self.size[li as usize] <= self.size[lj as usize] {
                (i, li, lj)
            } else {
                (j, lj, li)
            };
            self.relabel_from(small_start, big);
            self.size[big as usize] += self.size[small as usize];
            self.size[small as usize] = 0;
            self.free.push(small);
            self.perm.right_multiply(t);
            self.cycles -= 1;
            StepKind::Coagulation
        } else {
            self.perm.right_multiply(t);
            let img = self.perm.zero_based();
            let (mut a, mut b) = (img[i] as usize, img[j] as usize);
            let mut len = 1u32;
            let small_start = loop {
                if a == i {
                    break i;
                }
                if b == j {
                    break j;
                }
                a = img[a] as usize;
                b = img[b] as usize;
                len += 1;
            };
            let fresh = match self.free.pop() {
                Some(l) => l,
                None => {
                    self.size.push(0);
                    (self.size.len() - 1) as u32
                }
            };
            self.relabel_from(small_start, fresh);
            self.size[fresh as usize] = len;
            self.size[li as usize] -= len;
            self.cycles += 1;
            StepKind::Fragmentation
        }
    }

    fn relabel_from(&mut self, start: usize, to: u32) {
        let img = self.perm.zero_based();
        let mut x = start;
        loop {
            self.label[x] = to;
            x = img[x] as usize;
            if x == start {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tracker_agrees_with_direct_computation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 3, 7, 40] {
            let mut tr = CycleTracker::new(Permutation::identity(n).unwrap());
            let mut plain = Permutation::identity(n).unwrap();
            for _ in 0..2000 {
                let a = rng.random_range(1..=n);
                let mut b = rng.random_range(1..n);
                if b >= a {
                    b += 1;
                }
                let t = Transposition::new(a, b).unwrap();
                let (next, expected) = plain.apply_transposition(&t).unwrap();
                assert_eq!(tr.apply(&t), expected);
                plain = next;
                assert_eq!(tr.perm(), &plain);
                assert_eq!(tr.cycle_count(), plain.cycle_count());
                for x in 1..=n {
                    assert_eq!(tr.cycle_size_of(x), plain.cycle_len_of(x));
                    let y = (x % n) + 1;
                    assert_eq!(tr.same_cycle(x, y), plain.same_cycle(x, y));
                }
            }
        }
    }
}
