use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

/// Reverse Cuthill–McKee ordering of the symmetrized sparsity pattern.
/// Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(m: &SparseMatrix) -> Vec<usize> {
    let n = m.rows();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j, _) in m.triplets() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let bfs_levels = |start: usize, visited: &[bool]| -> (usize, usize) {
        // (last node of the final level with minimal degree, eccentricity)
        let mut seen = visited.to_vec();
        let mut level = vec![start];
        seen[start] = true;
        let mut depth = 0;
        loop {
            let mut next = Vec::new();
            for &v in &level {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                let far = *level.iter().min_by_key(|&&v| degree[v]).unwrap();
                return (far, depth);
            }
            depth += 1;
            level = next;
        }
    };

    while order.len() < n {
        let seed = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| degree[v])
            .unwrap();
        // pseudo-peripheral node
        let mut start = seed;
        let mut ecc = bfs_levels(start, &visited).1;
        for _ in 0..8 {
            let (far, e) = bfs_levels(start, &visited);
            let (_, e2) = bfs_levels(far, &visited);
            if e2 > ecc.max(e) {
                start = far;
                ecc = e2;
            } else {
                break;
            }
        }
        let begin = order.len();
        visited[start] = true;
        order.push(start);
        let mut head = begin;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut nbrs: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            nbrs.sort_by_key(|&w| degree[w]);
            for w in nbrs {
                visited[w] = true;
                order.push(w);
            }
        }
    }
    order.reverse();
    order
}

/// Lower and upper bandwidth of `m` under the ordering `perm[new] = old`.
pub fn bandwidths(m: &SparseMatrix, perm: &[usize]) -> (usize, usize) {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let (mut kl, mut ku) = (0, 0);
    for (i, j, _) in m.triplets() {
        let (a, b) = (inv[i], inv[j]);
        if a > b {
            kl = kl.max(a - b);
        } else {
            ku = ku.max(b - a);
        }
    }
    (kl, ku)
}

/// Banded LU factorization with partial pivoting of a reordered sparse matrix.
#[derive(Debug, Clone)]
pub struct SparseLu {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<f64>,
    pivots: Vec<usize>,
    perm: Vec<usize>,
}

impl SparseLu {
    pub fn factor(m: &SparseMatrix) -> Result<Self> {
        let n = m.rows();
        if n != m.cols() {
            return Err(Error::Precondition("LU needs a square matrix".into()));
        }
        let perm = reverse_cuthill_mckee(m);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let (kl, ku) = bandwidths(m, &perm);
        let kv = kl + ku;
        let ldab = 2 * kl + ku + 1;
        let mut ab = vec![0.0; ldab * n];
        let idx = |i: usize, j: usize| j * ldab + kv + i - j;
        for (i, j, v) in m.triplets() {
            ab[idx(inv[i], inv[j])] += v;
        }
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        let mut pivots = vec![0; n];
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let col = j * ldab + kv;
            let mut p = 0;
            let mut best = ab[col].abs();
            for r in 1..=km {
                let v = ab[col + r].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            pivots[j] = j + p;
            if !(best > 1e-14 * scale) {
                return Err(Error::Singular { index: perm[j] });
            }
            ju = ju.max((j + ku + p).min(n - 1));
            if p != 0 {
                for c in j..=ju {
                    ab.swap(idx(j, c), idx(j + p, c));
                }
            }
            let pivot = ab[col];
            // trailing zeros of the multiplier column need no update
            let mut kz = km;
            while kz > 0 && ab[col + kz] == 0.0 {
                kz -= 1;
            }
            for r in 1..=kz {
                ab[col + r] /= pivot;
            }
            if kz == 0 {
                continue;
            }
            let (done, rest) = ab.split_at_mut((j + 1) * ldab);
            let lcol = &done[col + 1..=col + kz];
            for c in j + 1..=ju {
                let base = (c - j - 1) * ldab + kv + j - c;
                let u = rest[base];
                if u != 0.0 {
                    for (a, l) in rest[base + 1..=base + kz].iter_mut().zip(lcol) {
                        *a -= l * u;
                    }
                }
            }
        }
        Ok(SparseLu {
            n,
            kl,
            ku,
            ldab,
            ab,
            pivots,
            perm,
        })
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::Precondition(format!(
                "right-hand side of length {} for a system of size {n}",
                rhs.len()
            )));
        }
        let kv = self.kl + self.ku;
        let idx = |i: usize, j: usize| j * self.ldab + kv + i - j;
        let mut b: Vec<f64> = self.perm.iter().map(|&o| rhs[o]).collect();
        for j in 0..n {
            let p = self.pivots[j];
            if p != j {
                b.swap(j, p);
            }
            let km = self.kl.min(n - 1 - j);
            let bj = b[j];
            if bj != 0.0 {
                for r in 1..=km {
                    b[j + r] -= self.ab[idx(j + r, j)] * bj;
                }
            }
        }
        for i in (0..n).rev() {
            let last = (i + kv).min(n - 1);
            let mut s = b[i];
            for c in i + 1..=last {
                s -= self.ab[idx(i, c)] * b[c];
            }
            b[i] = s / self.ab[idx(i, i)];
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = b[new];
        }
        Ok(x)
    }
}

/// Solves `M x = rhs` with a reordered banded LU factorization.
pub fn lu_solve(m: &SparseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    SparseLu::factor(m)?.solve(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sparse::TripletBuilder;

    #[test]
    fn identity_and_swap() {
        let x = lu_solve(&SparseMatrix::identity(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0, 3.0]);
        let mut t = TripletBuilder::new(2, 2);
        t.add(0, 1, 1.0);
        t.add(1, 0, 1.0);
        let x = lu_solve(&t.finalize(), &[5.0, 7.0]).unwrap();
        assert_eq!(x, vec![7.0, 5.0]);
    }

    #[test]
    fn singular_detected() {
        let mut t = TripletBuilder::new(3, 3);
        t.add(0, 0, 1.0);
        t.add(1, 1, 1.0);
        t.add(2, 0, 1.0);
        assert!(matches!(
            lu_solve(&t.finalize(), &[1.0, 1.0, 1.0]),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn rcm_shrinks_bandwidth_of_shuffled_path() {
        // path graph numbered in a scattered way
        let n = 50;
        let label = |k: usize| (k * 17) % n;
        let mut t = TripletBuilder::new(n, n);
        for k in 0..n {
            t.add(label(k), label(k), 2.0);
            if k + 1 < n {
                t.add(label(k), label(k + 1), -1.0);
                t.add(label(k + 1), label(k), -1.0);
            }
        }
        let m = t.finalize();
        let perm = reverse_cuthill_mckee(&m);
        assert_eq!(bandwidths(&m, &perm), (1, 1));
    }
}
