//! Permutations in one-line notation and the Bruhat order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `w` stored as `[w(1), ..., w(n)]` with 1-based values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        let n = one_line.len();
        let mut seen = vec![false; n + 1];
        for &x in &one_line {
            if x == 0 || x > n || seen[x] {
                return Err(Error::BadPermutation(one_line));
            }
            seen[x] = true;
        }
        Ok(Perm(one_line))
    }

    pub fn identity(n: usize) -> Self {
        Perm((1..=n).collect())
    }

    pub fn longest(n: usize) -> Self {
        Perm((1..=n).rev().collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `w(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut v = vec![0; self.n()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x - 1] = i + 1;
        }
        Perm(v)
    }

    /// `self o other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Self {
        assert_eq!(self.n(), other.n());
        Perm(other.0.iter().map(|&i| self.0[i - 1]).collect())
    }

    pub fn length(&self) -> usize {
        let v = &self.0;
        (0..v.len())
            .map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count())
            .sum()
    }

    /// Sorted prefix `{w(1), ..., w(k)}`.
    pub fn prefix_set(&self, k: usize) -> Vec<usize> {
        let mut s = self.0[..k].to_vec();
        s.sort_unstable();
        s
    }

    /// Bruhat order through the Gale order on every prefix.
    pub fn bruhat_le(&self, other: &Perm) -> bool {
        assert_eq!(self.n(), other.n());
        (1..self.n()).all(|k| {
            self.prefix_set(k)
                .iter()
                .zip(other.prefix_set(k))
                .all(|(a, b)| *a <= b)
        })
    }

    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        permute(&mut cur, 0, &mut out);
        out.sort();
        out
    }
}

fn permute(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
    if k == cur.len() {
        out.push(Perm(cur.clone()));
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for x in &self.0 {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parsed: std::result::Result<Vec<usize>, _> = if s.contains(',') {
            s.split(',').map(|p| p.trim().parse::<usize>()).collect()
        } else {
            s.chars()
                .map(|ch| ch.to_string().parse::<usize>())
                .collect()
        };
        Perm::new(parsed.map_err(|_| Error::BadPermutation(Vec::new()))?)
    }
}
