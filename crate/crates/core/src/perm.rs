//! Permutations in cycle notation and small permutation groups.
//!
//! Points are 0-based internally and 1-based in text. Products act on the
//! right: `p.then(q)` sends `i` to `q(p(i))`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 256);
        Permutation { images: (0..n as u16).map(|i| i as u8).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Permutation(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Permutation { images: images.into_iter().map(|i| i as u8).collect() })
    }

    /// Parses cycle notation over `1..=n`, e.g. `(12)(3586)` or `(4,5,7,8)`.
    /// Without commas every digit is one point.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self, Error> {
        let bad = |m: &str| Error::Permutation(format!("{s:?}: {m}"));
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = open.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let body = open[..close].trim();
            rest = open[close + 1..].trim_start();
            if body.is_empty() {
                continue;
            }
            let points: Vec<usize> = if body.contains(',') {
                body.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad("bad point"))).collect::<Result<_, _>>()?
            } else {
                body.chars().filter(|c| !c.is_whitespace()).map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("bad point"))).collect::<Result<_, _>>()?
            };
            for (i, &p) in points.iter().enumerate() {
                if p == 0 || p > n {
                    return Err(bad("point out of range"));
                }
                if std::mem::replace(&mut seen[p - 1], true) {
                    return Err(bad("point repeated"));
                }
                images[p - 1] = points[(i + 1) % points.len()] - 1;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize).collect()
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut j = self.apply(start);
            while j != start {
                seen[j] = true;
                c.push(j);
                j = self.apply(j);
            }
            out.push(c);
        }
        out
    }

    /// Embeds into a larger degree, fixing the new points.
    pub fn extended(&self, n: usize) -> Permutation {
        assert!(n >= self.degree());
        let mut images = self.images.clone();
        images.extend((self.degree()..n).map(|i| i as u8));
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation with comma-separated points; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All elements of the group generated by `gens`, identity first, in BFS order.
pub fn closure(gens: &[Permutation], degree: usize) -> Vec<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let x = g.then(h);
            if seen.insert(x.clone()) {
                out.push(x.clone());
                queue.push_back(x);
            }
        }
    }
    out
}

/// Every permutation of `0..n` in lexicographic order of images.
pub fn symmetric_group(n: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(Permutation::from_images(prefix.clone()).unwrap());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Lexicographically first representative of every right coset `H t` in `S_n`,
/// in increasing order.
pub fn right_transversal(subgroup: &[Permutation], n: usize) -> Vec<Permutation> {
    let mut covered: HashSet<Permutation> = HashSet::new();
    let mut reps = Vec::new();
    for t in symmetric_group(n) {
        if covered.contains(&t) {
            continue;
        }
        for h in subgroup {
            covered.insert(h.then(&t));
        }
        reps.push(t);
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_both_notations() {
        let a = Permutation::parse_cycles("(12)(3586)", 8).unwrap();
        assert_eq!(a.apply(0), 1);
        assert_eq!(a.apply(2), 4);
        assert_eq!(a.apply(7), 5);
        let b = Permutation::parse_cycles("(4,5,7,8)", 8).unwrap();
        assert_eq!(b.to_string(), "(4,5,7,8)");
        assert!(Permutation::parse_cycles("()", 8).unwrap().is_identity());
        assert!(Permutation::parse_cycles("(19)", 8).is_err());
        assert!(Permutation::parse_cycles("(121)", 8).is_err());
    }

    #[test]
    fn right_action_composition() {
        let p = Permutation::parse_cycles("(12)", 3).unwrap();
        let q = Permutation::parse_cycles("(23)", 3).unwrap();
        // 1 -> 2 under p, then 2 -> 3 under q.
        assert_eq!(p.then(&q).apply(0), 2);
        assert!(p.then(&p.inverse()).is_identity());
    }

    #[test]
    fn closure_and_transversal_sizes() {
        let gens = [Permutation::parse_cycles("(1,2)", 4).unwrap(), Permutation::parse_cycles("(1,2,3,4)", 4).unwrap()];
        let g = closure(&gens, 4);
        assert_eq!(g.len(), 24);
        let h = closure(&[Permutation::parse_cycles("(1,2)", 4).unwrap()], 4);
        assert_eq!(right_transversal(&h, 4).len(), 12);
    }

    #[test]
    fn display_round_trip() {
        let p = Permutation::parse_cycles("(1,10,3)(4,5)", 12).unwrap();
        assert_eq!(Permutation::parse_cycles(&p.to_string(), 12).unwrap(), p);
    }
}
