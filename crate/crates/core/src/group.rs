//! Finite groups given by their multiplication table.
//!
//! Elements are dense indices and `0` is always the identity.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TopoError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    mult: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupFile {
    order: usize,
    mult: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Checks closure, associativity, that `0` is a two-sided identity and
    /// that inverses exist.
    pub fn from_table(mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = mult.len();
        if n == 0 {
            return Err(TopoError::InvalidGroup("empty table".into()));
        }
        if mult.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(TopoError::InvalidGroup("table is not a square table over 0..order".into()));
        }
        if (0..n).any(|a| mult[0][a] != a || mult[a][0] != a) {
            return Err(TopoError::InvalidGroup("0 is not a two-sided identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(TopoError::InvalidGroup(format!("({a}{b}){c} != {a}({b}{c})")));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| mult[a][b] == 0 && mult[b][a] == 0) {
                Some(b) => inverse.push(b),
                None => return Err(TopoError::InvalidGroup(format!("element {a} has no inverse"))),
            }
        }
        Ok(FiniteGroup { mult, inverse })
    }

    fn from_table_unchecked(mult: Vec<Vec<usize>>) -> Self {
        let n = mult.len();
        let inverse = (0..n).map(|a| (0..n).find(|&b| mult[a][b] == 0).expect("inverse")).collect();
        let g = FiniteGroup { mult, inverse };
        debug_assert!(FiniteGroup::from_table(g.mult.clone()).is_ok());
        g
    }

    /// `Z/m`, element `k` standing for `k mod m`.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(TopoError::InvalidArgument("cyclic(m) needs m >= 1".into()));
        }
        Ok(FiniteGroup::from_table_unchecked(
            (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect(),
        ))
    }

    /// The dihedral group of order `2m`, presented by `r^m = s^2 = 1`, `rs = sr^{m-1}`.
    ///
    /// `r^a s^b` is stored at index `a + b·m`.
    pub fn dihedral(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(TopoError::InvalidArgument("dihedral(m) needs m >= 1".into()));
        }
        let n = 2 * m;
        let mult = (0..n)
            .map(|x| {
                let (a, b) = (x % m, x / m);
                (0..n)
                    .map(|y| {
                        let (c, d) = (y % m, y / m);
                        // s^b r^c = r^{±c} s^b
                        let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
                        rot + ((b + d) % 2) * m
                    })
                    .collect()
            })
            .collect();
        Ok(FiniteGroup::from_table_unchecked(mult))
    }

    /// `G × H` with `(g, h)` stored at `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (ng, nh) = (g.order(), h.order());
        let mult = (0..ng * nh)
            .map(|x| {
                (0..ng * nh).map(|y| g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh)).collect()
            })
            .collect();
        FiniteGroup::from_table_unchecked(mult)
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The subgroup generated by `gens`, as a membership mask.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.order()];
        member[0] = true;
        let mut elems = vec![0];
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                }
            }
        }
        member
    }

    pub fn commutator_subgroup(&self) -> Vec<bool> {
        let n = self.order();
        let comms: Vec<usize> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
            .collect();
        self.generated_subgroup(&comms)
    }

    /// Invariant factors of `G/[G, G]`, each `> 1` and dividing the next.
    ///
    /// Computed by brute force: for each prime `p` the `p`-primary part is read
    /// off from how many cosets are killed by `p^k`, without any matrix
    /// reduction.
    pub fn abelianization(&self) -> Vec<u64> {
        let n = self.order();
        let comm = self.commutator_subgroup();
        // Coset label of every element: smallest element of g·[G,G].
        let members: Vec<usize> = (0..n).filter(|&x| comm[x]).collect();
        let coset: Vec<usize> =
            (0..n).map(|g| members.iter().map(|&c| self.mul(g, c)).min().unwrap()).collect();
        let reps: Vec<usize> = (0..n).filter(|&g| coset[g] == g).collect();
        let quotient_order = reps.len();
        let pow = |g: usize, e: usize| (0..e).fold(0, |acc, _| self.mul(acc, g));

        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        let mut rest = quotient_order;
        let mut p = 2;
        while rest > 1 {
            if rest % p == 0 {
                while rest % p == 0 {
                    rest /= p;
                }
                // a_k = log_p #{x : x^{p^k} = 1}; a_k - a_{k-1} parts have exponent >= k.
                let mut logs = vec![0u32];
                let mut pk = 1;
                loop {
                    pk *= p;
                    let killed = reps.iter().filter(|&&g| comm[pow(g, pk)]).count();
                    let mut log = 0;
                    let mut c = killed;
                    while c > 1 {
                        c /= p;
                        log += 1;
                    }
                    if log == *logs.last().unwrap() {
                        break;
                    }
                    logs.push(log);
                }
                let ge: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
                // Exponents, largest first.
                let parts = ge[0] as usize;
                let exps: Vec<u32> =
                    (0..parts).map(|j| ge.iter().filter(|&&c| c as usize > j).count() as u32).collect();
                per_prime.push((p as u64, exps));
            }
            p += 1;
        }
        let count = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..count)
            .map(|j| per_prime.iter().map(|(p, e)| e.get(j).map_or(1, |&x| p.pow(x))).product())
            .collect();
        factors.reverse();
        factors
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GroupFile { order: self.order(), mult: self.mult.clone() })
            .expect("group serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(text)?;
        if file.order != file.mult.len() {
            return Err(TopoError::InvalidGroup(format!(
                "order {} but the table has {} rows",
                file.order,
                file.mult.len()
            )));
        }
        FiniteGroup::from_table(file.mult)
    }

    /// Parses the builtin names `Z:m`, `D:m` and products such as `Z:2 x Z:2`.
    pub fn from_name(name: &str) -> Result<Self> {
        let mut acc: Option<FiniteGroup> = None;
        for factor in name.split('x').map(str::trim) {
            let (kind, m) = factor
                .split_once(':')
                .ok_or_else(|| TopoError::InvalidArgument(format!("bad group factor '{factor}'")))?;
            let m: usize = m
                .trim()
                .parse()
                .map_err(|_| TopoError::InvalidArgument(format!("bad group order in '{factor}'")))?;
            let g = match kind.trim() {
                "Z" => FiniteGroup::cyclic(m)?,
                "D" => FiniteGroup::dihedral(m)?,
                other => return Err(TopoError::InvalidArgument(format!("unknown group family '{other}'"))),
            };
            acc = Some(match acc {
                None => g,
                Some(prev) => FiniteGroup::direct_product(&prev, &g),
            });
        }
        acc.ok_or_else(|| TopoError::InvalidArgument("empty group name".into()))
    }
}
