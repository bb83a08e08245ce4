//! Small permutation utilities. A permutation of `n` points is a vector `p`
//! with `p[i]` the image of `i` (0-based).

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// Sign of a permutation (+1 or -1).
pub fn sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut s = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            s = -s;
        }
    }
    s
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// `(a ∘ b)(i) = a(b(i))`.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

/// All permutations of `n` points in lexicographic order.
pub fn all(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = identity(n);
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Sign of the permutation that sorts `seq` stably into increasing order.
pub fn sort_sign<T: Ord>(seq: &[T]) -> i32 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Koszul sign of reordering graded elements: `parities[i]` is the parity of
/// the element at position `i`, and `target[i]` its new position.
pub fn koszul_sign(parities: &[bool], target: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..target.len() {
        for j in i + 1..target.len() {
            if target[i] > target[j] && parities[i] && parities[j] {
                s = -s;
            }
        }
    }
    s
}

/// All `(k, l)`-shuffles, as the sorted list of positions taken by the first
/// block.
pub fn shuffles(k: usize, l: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k + l, k, &mut Vec::new(), &mut out);
    out
}

/// Cyclic rotation `i -> i + 1 mod n`.
pub fn rotation(n: usize) -> Perm {
    (0..n).map(|i| (i + 1) % n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs() {
        assert_eq!(sign(&[0, 1, 2]), 1);
        assert_eq!(sign(&[1, 0, 2]), -1);
        assert_eq!(sign(&[1, 2, 0]), 1);
        assert_eq!(sign(&rotation(4)), -1);
    }

    #[test]
    fn counts() {
        assert_eq!(all(4).len(), 24);
        assert_eq!(shuffles(2, 2).len(), 6);
        assert_eq!(shuffles(0, 3), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn sign_is_a_homomorphism() {
        let ps = all(4);
        for a in &ps {
            for b in &ps {
                assert_eq!(sign(&compose(a, b)), sign(a) * sign(b));
            }
            assert_eq!(compose(a, &inverse(a)), identity(4));
        }
    }

    #[test]
    fn koszul() {
        // swapping two odd elements
        assert_eq!(koszul_sign(&[true, true], &[1, 0]), -1);
        assert_eq!(koszul_sign(&[true, false], &[1, 0]), 1);
    }
}
