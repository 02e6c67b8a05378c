//! Ordering of conceptual-model activities.

/// Kahn's algorithm over `n` nodes. Among ready nodes the lowest index goes
/// first, so ties follow declaration order. Returns `None` on a cycle.
pub fn topo_order(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indegree = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in edges {
        succ[a].push(b);
        indegree[b] += 1;
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        out.push(i);
        for &j in &succ[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.insert(j);
            }
        }
    }
    (out.len() == n).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_sorts(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        fn go(n: usize, edges: &[(usize, usize)], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for v in 0..n {
                if cur.contains(&v) {
                    continue;
                }
                if edges.iter().any(|&(a, b)| b == v && !cur.contains(&a)) {
                    continue;
                }
                cur.push(v);
                go(n, edges, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, edges, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn diamond_is_a_valid_sort() {
        let edges = [(0, 1), (0, 2), (1, 3), (2, 3)];
        let order = topo_order(4, &edges).unwrap();
        assert_eq!(order, [0, 1, 2, 3]);
        assert!(all_sorts(4, &edges).contains(&order));
    }

    #[test]
    fn ties_follow_declaration_order() {
        assert_eq!(topo_order(3, &[]).unwrap(), [0, 1, 2]);
        assert_eq!(topo_order(3, &[(2, 0)]).unwrap(), [1, 2, 0]);
    }

    #[test]
    fn cycle_is_none() {
        assert_eq!(topo_order(2, &[(0, 1), (1, 0)]), None);
    }

    #[test]
    fn random_dags_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if a != b && rng.gen_bool(0.25) {
                        edges.push((a, b));
                    }
                }
            }
            let sorts = all_sorts(n, &edges);
            match topo_order(n, &edges) {
                Some(order) => assert!(sorts.contains(&order), "{edges:?} -> {order:?}"),
                None => assert!(sorts.is_empty(), "{edges:?}"),
            }
        }
    }
}
