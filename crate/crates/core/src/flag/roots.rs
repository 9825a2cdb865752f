//! Classical root systems in their defining representations.
//!
//! Matrices act on `C^m`; with `m = 2n` (`Sp(n)`, `SO(2n)`) or `2n+1`
//! (`SO(2n+1)`) the basis is `e_1..e_n, e_{n+1}..e_{2n}` (then `e_{2n+1}`),
//! the first half carrying weights `ε_i`, the second `-ε_i`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Group {
    /// `SU(n)`, type `A_{n-1}`.
    SU(u32),
    /// `Sp(n)`, type `C_n`.
    Sp(u32),
    /// `SO(m)`: type `B_n` for `m = 2n+1`, `D_n` for `m = 2n`.
    SO(u32),
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::SU(n) => write!(f, "SU{n}"),
            Group::Sp(n) => write!(f, "Sp{n}"),
            Group::SO(m) => write!(f, "SO{m}"),
        }
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().replace(['(', ')'], "");
        let parse = |rest: &str| rest.parse::<u32>().map_err(|_| Error::Parse(format!("bad group {s:?}")));
        let g = if let Some(r) = t.strip_prefix("SU") {
            Group::SU(parse(r)?)
        } else if let Some(r) = t.strip_prefix("Sp") {
            Group::Sp(parse(r)?)
        } else if let Some(r) = t.strip_prefix("SO") {
            Group::SO(parse(r)?)
        } else {
            return Err(Error::Parse(format!("bad group {s:?}")));
        };
        g.validate()?;
        Ok(g)
    }
}

/// A positive root, in `ε` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Root {
    /// `ε_i - ε_j`, `i < j` (1-based).
    Diff { i: u32, j: u32 },
    /// `ε_i + ε_j`, `i < j`, or `2ε_i` when `i == j`.
    Sum { i: u32, j: u32 },
    /// `ε_i`.
    Short { i: u32 },
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Diff { i, j } => write!(f, "e{i}-e{j}"),
            Root::Sum { i, j } if i == j => write!(f, "2e{i}"),
            Root::Sum { i, j } => write!(f, "e{i}+e{j}"),
            Root::Short { i } => write!(f, "e{i}"),
        }
    }
}

/// Sparse integer matrix entries `(row, col, value)`, 0-based.
pub type Entries = Vec<(usize, usize, i64)>;

impl Group {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Group::SU(n) => n >= 2,
            Group::Sp(n) => n >= 1,
            Group::SO(m) => m >= 5,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("group {self}")))
        }
    }

    /// Rank of the root system.
    pub fn rank(&self) -> u32 {
        match *self {
            Group::SU(n) => n - 1,
            Group::Sp(n) => n,
            Group::SO(m) => m / 2,
        }
    }

    /// `n` in the `ε` description (`n` for SU(n), the rank otherwise).
    fn eps(&self) -> u32 {
        match *self {
            Group::SU(n) => n,
            _ => self.rank(),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Group::SU(n) => n as usize,
            Group::Sp(n) => 2 * n as usize,
            Group::SO(m) => m as usize,
        }
    }

    fn is_b(&self) -> bool {
        matches!(*self, Group::SO(m) if m % 2 == 1)
    }

    fn is_d(&self) -> bool {
        matches!(*self, Group::SO(m) if m % 2 == 0)
    }

    /// Positive roots: differences, then sums (with `2ε_i` in place for
    /// `Sp`), then short roots, each lexicographic in `(i, j)`.
    pub fn positive_roots(&self) -> Vec<Root> {
        let n = self.eps();
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(Root::Diff { i, j });
            }
        }
        if matches!(self, Group::SU(_)) {
            return out;
        }
        let sp = matches!(self, Group::Sp(_));
        for i in 1..=n {
            for j in (if sp { i } else { i + 1 })..=n {
                out.push(Root::Sum { i, j });
            }
        }
        if self.is_b() {
            for i in 1..=n {
                out.push(Root::Short { i });
            }
        }
        out
    }

    /// Simple roots `α_1..α_rank` in Bourbaki order.
    pub fn simple_roots(&self) -> Vec<Root> {
        let l = self.rank();
        let mut out: Vec<Root> = (1..l).map(|i| Root::Diff { i, j: i + 1 }).collect();
        match *self {
            Group::SU(_) => out.push(Root::Diff { i: l, j: l + 1 }),
            Group::Sp(_) => out.push(Root::Sum { i: l, j: l }),
            _ if self.is_b() => out.push(Root::Short { i: l }),
            _ => out.push(Root::Sum { i: l - 1, j: l }),
        }
        out
    }

    /// Coordinates of `root` in the simple-root basis.
    pub fn simple_coefficients(&self, root: &Root) -> Vec<u32> {
        let l = self.rank() as usize;
        let mut c = vec![0u32; l];
        let ones = |c: &mut Vec<u32>, from: u32, to: u32, v: u32| {
            for k in from..to {
                c[k as usize - 1] += v;
            }
        };
        match *root {
            Root::Diff { i, j } => ones(&mut c, i, j, 1),
            Root::Sum { i, j } => {
                let n = l as u32;
                if self.is_d() {
                    ones(&mut c, i, j, 1);
                    ones(&mut c, j, n - 1, 2);
                    if j == n {
                        c[n as usize - 2] -= 1;
                        c[n as usize - 1] += 1;
                    } else {
                        c[n as usize - 2] += 1;
                        c[n as usize - 1] += 1;
                    }
                } else if matches!(self, Group::Sp(_)) {
                    ones(&mut c, i, j, 1);
                    ones(&mut c, j, n, 2);
                    c[n as usize - 1] += 1;
                } else {
                    ones(&mut c, i, j, 1);
                    ones(&mut c, j, n, 2);
                    c[n as usize - 1] += 2;
                }
            }
            Root::Short { i } => {
                ones(&mut c, i, l as u32 + 1, 1);
            }
        }
        c
    }

    /// `ε`-coordinates of a root (length `eps()`).
    pub fn eps_vector(&self, root: &Root) -> Vec<i64> {
        let mut v = vec![0i64; self.eps() as usize];
        match *root {
            Root::Diff { i, j } => {
                v[i as usize - 1] += 1;
                v[j as usize - 1] -= 1;
            }
            Root::Sum { i, j } => {
                v[i as usize - 1] += 1;
                v[j as usize - 1] += 1;
            }
            Root::Short { i } => v[i as usize - 1] += 1,
        }
        v
    }

    /// Positive root vector `E_α` as a sparse integer matrix.
    pub fn root_vector(&self, root: &Root) -> Entries {
        let n = self.eps() as usize;
        match (*self, *root) {
            (Group::SU(_), Root::Diff { i, j }) => vec![(i as usize - 1, j as usize - 1, 1)],
            (_, Root::Diff { i, j }) => {
                let (i, j) = (i as usize - 1, j as usize - 1);
                vec![(i, j, 1), (n + j, n + i, -1)]
            }
            (Group::Sp(_), Root::Sum { i, j }) if i == j => {
                let i = i as usize - 1;
                vec![(i, n + i, 1)]
            }
            (Group::Sp(_), Root::Sum { i, j }) => {
                let (i, j) = (i as usize - 1, j as usize - 1);
                vec![(i, n + j, 1), (j, n + i, 1)]
            }
            (_, Root::Sum { i, j }) => {
                let (i, j) = (i as usize - 1, j as usize - 1);
                vec![(i, n + j, 1), (j, n + i, -1)]
            }
            (_, Root::Short { i }) => {
                let i = i as usize - 1;
                vec![(i, 2 * n, 1), (2 * n, n + i, -1)]
            }
        }
    }

    /// `E_{-α} = ᵀE_α`.
    pub fn negative_root_vector(&self, root: &Root) -> Entries {
        self.root_vector(root).into_iter().map(|(r, c, v)| (c, r, v)).collect()
    }

    /// Gram matrix of the invariant form (`None` for `SU`).
    pub fn invariant_form(&self) -> Option<Entries> {
        let n = self.eps() as usize;
        match *self {
            Group::SU(_) => None,
            Group::Sp(_) => Some((0..n).flat_map(|i| [(i, n + i, 1), (n + i, i, -1)]).collect()),
            Group::SO(m) => {
                let mut e: Entries = (0..n).flat_map(|i| [(i, n + i, 1), (n + i, i, 1)]).collect();
                if m % 2 == 1 {
                    e.push((2 * n, 2 * n, 1));
                }
                Some(e)
            }
        }
    }

    /// Hermitian symmetric for a single black node at `r` (1-based).
    pub fn is_symmetric_node(&self, r: u32) -> bool {
        let l = self.rank();
        match *self {
            Group::SU(_) => true,
            _ if self.is_d() => r == 1 || r + 1 >= l,
            _ => r == 1 || r == l,
        }
    }
}

pub fn dense(e: &Entries, m: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; m]; m];
    for &(r, c, v) in e {
        out[r][c] += v;
    }
    out
}

pub fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = a.len();
    (0..m).map(|i| (0..m).map(|j| (0..m).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn bracket(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let ab = int_mul(a, b);
    let ba = int_mul(b, a);
    ab.iter().zip(&ba).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups() -> Vec<Group> {
        vec![Group::SU(3), Group::SU(4), Group::Sp(3), Group::Sp(4), Group::SO(7), Group::SO(9), Group::SO(8), Group::SO(10)]
    }

    #[test]
    fn coefficients_reconstruct_roots() {
        for g in groups() {
            let simple: Vec<Vec<i64>> = g.simple_roots().iter().map(|r| g.eps_vector(r)).collect();
            for r in g.positive_roots() {
                let c = g.simple_coefficients(&r);
                let mut v = vec![0i64; simple[0].len()];
                for (k, s) in simple.iter().enumerate() {
                    for (x, y) in v.iter_mut().zip(s) {
                        *x += c[k] as i64 * y;
                    }
                }
                assert_eq!(v, g.eps_vector(&r), "{g} {r}");
            }
        }
    }

    #[test]
    fn root_vectors_preserve_form() {
        for g in groups() {
            let Some(s) = g.invariant_form() else { continue };
            let s = dense(&s, g.dim());
            for r in g.positive_roots() {
                let x = dense(&g.root_vector(&r), g.dim());
                let xt: Vec<Vec<i64>> = (0..g.dim()).map(|i| (0..g.dim()).map(|j| x[j][i]).collect()).collect();
                let lhs = int_mul(&xt, &s);
                let rhs = int_mul(&s, &x);
                assert!(lhs.iter().flatten().zip(rhs.iter().flatten()).all(|(a, b)| a + b == 0), "{g} {r}");
            }
        }
    }

    #[test]
    fn brackets_follow_root_addition() {
        for g in groups() {
            let m = g.dim();
            let roots = g.positive_roots();
            let vecs: Vec<Vec<Vec<i64>>> = roots.iter().map(|r| dense(&g.root_vector(r), m)).collect();
            for (a, ra) in roots.iter().enumerate() {
                for (b, rb) in roots.iter().enumerate() {
                    let sum: Vec<i64> = g.eps_vector(ra).iter().zip(g.eps_vector(rb)).map(|(x, y)| x + y).collect();
                    let br = bracket(&vecs[a], &vecs[b]);
                    let target = roots.iter().position(|r| g.eps_vector(r) == sum);
                    match target {
                        Some(t) => {
                            // nonzero multiple of E_{α+β}
                            let e = &vecs[t];
                            let (i, j) = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).find(|&(i, j)| e[i][j] != 0).unwrap();
                            assert!(br[i][j] != 0, "{g} [{ra},{rb}]");
                            assert!((0..m).all(|p| (0..m).all(|q| br[p][q] * e[i][j] == br[i][j] * e[p][q])));
                        }
                        None => assert!(br.iter().flatten().all(|&x| x == 0), "{g} [{ra},{rb}]"),
                    }
                }
            }
            for s in g.simple_roots() {
                let x = dense(&g.root_vector(&s), m);
                let y = dense(&g.negative_root_vector(&s), m);
                let h = bracket(&x, &y);
                assert!((0..m).all(|i| (0..m).all(|j| i == j || h[i][j] == 0)));
                assert!((0..m).any(|i| h[i][i] != 0));
            }
        }
    }
}
