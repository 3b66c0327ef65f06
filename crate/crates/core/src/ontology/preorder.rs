//! Reflexive-transitive closure of a finite relation.

/// Dense reachability matrix, one bit row per node.
#[derive(Debug, Clone)]
pub struct Reachability {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Reachability {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in edges {
            succ[a].push(b);
        }
        let mut bits = vec![0u64; n * words];
        let mut stack = Vec::new();
        for start in 0..n {
            let row = &mut bits[start * words..(start + 1) * words];
            row[start / 64] |= 1 << (start % 64);
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in &succ[v] {
                    let (word, bit) = (w / 64, 1u64 << (w % 64));
                    if row[word] & bit == 0 {
                        row[word] |= bit;
                        stack.push(w);
                    }
                }
            }
        }
        Self { n, words, bits }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn reaches(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] & (1 << (b % 64)) != 0
    }

    /// Equivalence classes of size at least two, each sorted, in order of
    /// their smallest member.
    pub fn nontrivial_components(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.n];
        let mut out = Vec::new();
        for a in 0..self.n {
            if assigned[a] {
                continue;
            }
            let class: Vec<usize> = (a..self.n)
                .filter(|&b| self.reaches(a, b) && self.reaches(b, a))
                .collect();
            for &b in &class {
                assigned[b] = true;
            }
            if class.len() > 1 {
                out.push(class);
            }
        }
        out
    }
}
