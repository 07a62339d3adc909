//! The space expression language used by the CLI.
//!
//! ```text
//! expr   := "point" | "discrete" INT | "circle" INT | "sphere" INT
//!         | "join" "(" expr "," expr ")" | "disjoint" "(" expr "," expr ")"
//!         | "lens" INT "[" INT ("," INT)* "]" | "milnor" group INT | "rp" INT
//!         | "mapping-torus" "(" "circle" INT "," "rot" INT ")" | "load" PATH
//! group  := factor ("x" factor)*
//! factor := ("Z" | "D") ":" INT
//! ```

use std::fmt;
use std::sync::Arc;

use crate::dset::{disjoint_union, join, DeltaSet};
use crate::error::{Result, TopoError};
use crate::group::FiniteGroup;
use crate::spaces::{lens_space, mapping_torus, milnor_base, polygon_rotation, real_projective, LensParams};

pub const DEFAULT_MAX_SIMPLICES: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupFamily {
    Cyclic,
    Dihedral,
}

/// A product of cyclic and dihedral factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec(pub Vec<(GroupFamily, usize)>);

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        let mut acc: Option<FiniteGroup> = None;
        for &(family, m) in &self.0 {
            let g = match family {
                GroupFamily::Cyclic => FiniteGroup::cyclic(m)?,
                GroupFamily::Dihedral => FiniteGroup::dihedral(m)?,
            };
            acc = Some(match acc {
                None => g,
                Some(prev) => FiniteGroup::direct_product(&prev, &g),
            });
        }
        acc.ok_or_else(|| TopoError::InvalidArgument("empty group".into()))
    }

    pub fn order(&self) -> u128 {
        self.0
            .iter()
            .map(|&(f, m)| match f {
                GroupFamily::Cyclic => m as u128,
                GroupFamily::Dihedral => 2 * m as u128,
            })
            .product()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(fam, m)| format!("{}:{m}", if fam == GroupFamily::Cyclic { "Z" } else { "D" }))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceExpr {
    Point,
    Discrete(usize),
    Circle(usize),
    Sphere(i64),
    Join(Box<SpaceExpr>, Box<SpaceExpr>),
    Disjoint(Box<SpaceExpr>, Box<SpaceExpr>),
    Lens { m: u64, ls: Vec<i64> },
    Milnor { group: GroupSpec, n: usize },
    Rp(usize),
    MappingTorus { m: usize, rot: i64 },
    Load(String),
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Point => write!(f, "point"),
            SpaceExpr::Discrete(k) => write!(f, "discrete {k}"),
            SpaceExpr::Circle(m) => write!(f, "circle {m}"),
            SpaceExpr::Sphere(n) => write!(f, "sphere {n}"),
            SpaceExpr::Join(a, b) => write!(f, "join({a}, {b})"),
            SpaceExpr::Disjoint(a, b) => write!(f, "disjoint({a}, {b})"),
            SpaceExpr::Lens { m, ls } => {
                let ls: Vec<String> = ls.iter().map(i64::to_string).collect();
                write!(f, "lens {m} [{}]", ls.join(","))
            }
            SpaceExpr::Milnor { group, n } => write!(f, "milnor {group} {n}"),
            SpaceExpr::Rp(n) => write!(f, "rp {n}"),
            SpaceExpr::MappingTorus { m, rot } => write!(f, "mapping-torus(circle {m}, rot {rot})"),
            SpaceExpr::Load(path) => write!(f, "load \"{path}\""),
        }
    }
}

pub fn parse(text: &str) -> Result<SpaceExpr> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("end of input"));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, expected: &str) -> TopoError {
        let before = &self.chars[..self.pos.min(self.chars.len())];
        let line = 1 + before.iter().filter(|&&c| c == '\n').count();
        let col = 1 + before.iter().rev().take_while(|&&c| c != '\n').count();
        TopoError::Syntax { line, col, expected: expected.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        while self.chars.get(self.pos).is_some_and(|&c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            self.pos += 1;
        }
        Some(self.chars[start..self.pos].iter().collect())
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        let save = self.pos;
        match self.ident() {
            Some(w) if w == word => Ok(()),
            _ => {
                self.pos = save;
                self.skip_ws();
                Err(self.error(&format!("'{word}'")))
            }
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.error("integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("integer in range")
        })
    }

    fn natural(&mut self) -> Result<usize> {
        let save = self.pos;
        let v = self.int()?;
        usize::try_from(v).map_err(|_| {
            self.pos = save;
            self.skip_ws();
            self.error("non-negative integer")
        })
    }

    fn pair(&mut self) -> Result<(Box<SpaceExpr>, Box<SpaceExpr>)> {
        self.expect('(')?;
        let a = self.expr()?;
        self.expect(',')?;
        let b = self.expr()?;
        self.expect(')')?;
        Ok((Box::new(a), Box::new(b)))
    }

    fn group(&mut self) -> Result<GroupSpec> {
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            let family = match self.ident().as_deref() {
                Some("Z") => GroupFamily::Cyclic,
                Some("D") => GroupFamily::Dihedral,
                _ => return Err(self.error("group factor 'Z:m' or 'D:m'")),
            };
            self.expect(':')?;
            factors.push((family, self.natural()?));
            let save = self.pos;
            if self.ident().as_deref() != Some("x") {
                self.pos = save;
                return Ok(GroupSpec(factors));
            }
        }
    }

    fn path(&mut self) -> Result<String> {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&'"') {
            self.pos += 1;
            let start = self.pos;
            while self.chars.get(self.pos).is_some_and(|&c| c != '"') {
                self.pos += 1;
            }
            if self.pos >= self.chars.len() {
                return Err(self.error("closing '\"'"));
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            self.pos += 1;
            return Ok(s);
        }
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| !c.is_whitespace() && c != ',' && c != ')') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("file path"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn expr(&mut self) -> Result<SpaceExpr> {
        self.skip_ws();
        let start = self.pos;
        let Some(word) = self.ident() else {
            return Err(self.error("space expression"));
        };
        Ok(match word.as_str() {
            "point" => SpaceExpr::Point,
            "discrete" => SpaceExpr::Discrete(self.natural()?),
            "circle" => SpaceExpr::Circle(self.natural()?),
            "sphere" => SpaceExpr::Sphere(self.int()?),
            "join" => {
                let (a, b) = self.pair()?;
                SpaceExpr::Join(a, b)
            }
            "disjoint" => {
                let (a, b) = self.pair()?;
                SpaceExpr::Disjoint(a, b)
            }
            "lens" => {
                let m = self.natural()? as u64;
                self.expect('[')?;
                let mut ls = vec![self.int()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    ls.push(self.int()?);
                }
                self.expect(']')?;
                SpaceExpr::Lens { m, ls }
            }
            "milnor" => {
                let group = self.group()?;
                SpaceExpr::Milnor { group, n: self.natural()? }
            }
            "rp" => SpaceExpr::Rp(self.natural()?),
            "mapping-torus" => {
                self.expect('(')?;
                self.keyword("circle")?;
                let m = self.natural()?;
                self.expect(',')?;
                self.keyword("rot")?;
                let rot = self.int()?;
                self.expect(')')?;
                SpaceExpr::MappingTorus { m, rot }
            }
            "load" => SpaceExpr::Load(self.path()?),
            _ => {
                self.pos = start;
                return Err(self.error("space expression"));
            }
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub max_simplices: u128,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { max_simplices: DEFAULT_MAX_SIMPLICES }
    }
}

impl EvalOptions {
    fn guard(&self, predicted: u128) -> Result<()> {
        if predicted > self.max_simplices {
            Err(TopoError::SizeLimit { predicted, cap: self.max_simplices })
        } else {
            Ok(())
        }
    }
}

fn join_size(a: u128, b: u128) -> u128 {
    (a + 1).saturating_mul(b + 1) - 1
}

fn iterated_join_size(one: u128, copies: u64) -> u128 {
    (0..copies).fold(0u128, |acc, _| join_size(acc, one))
}

/// Builds the Δ-set, refusing any step whose simplex count (including the
/// intermediate covering space of a quotient) would exceed the cap.
pub fn evaluate(expr: &SpaceExpr, opts: &EvalOptions) -> Result<DeltaSet> {
    match expr {
        SpaceExpr::Point => Ok(DeltaSet::point()),
        SpaceExpr::Discrete(k) => {
            opts.guard(*k as u128)?;
            DeltaSet::discrete(*k)
        }
        SpaceExpr::Circle(m) => {
            opts.guard(2 * *m as u128)?;
            DeltaSet::polygon_circle(*m)
        }
        SpaceExpr::Sphere(n) => {
            opts.guard(iterated_join_size(2, (*n + 1).max(0) as u64))?;
            DeltaSet::sphere(*n)
        }
        SpaceExpr::Join(a, b) => {
            let (a, b) = (evaluate(a, opts)?, evaluate(b, opts)?);
            opts.guard(join_size(a.total_simplices() as u128, b.total_simplices() as u128))?;
            Ok(join(&a, &b))
        }
        SpaceExpr::Disjoint(a, b) => {
            let (a, b) = (evaluate(a, opts)?, evaluate(b, opts)?);
            opts.guard((a.total_simplices() + b.total_simplices()) as u128)?;
            Ok(disjoint_union(&a, &b))
        }
        SpaceExpr::Lens { m, ls } => {
            let params = LensParams::new(*m, ls)?;
            params.check_coprime()?;
            opts.guard(iterated_join_size(2 * *m as u128, ls.len() as u64))?;
            Ok(lens_space(&params)?.0)
        }
        SpaceExpr::Milnor { group, n } => {
            opts.guard(iterated_join_size(group.order(), *n as u64 + 1))?;
            Ok(milnor_base(&group.build()?, *n).0)
        }
        SpaceExpr::Rp(n) => {
            opts.guard(iterated_join_size(2, *n as u64 + 1))?;
            Ok(real_projective(*n).0)
        }
        SpaceExpr::MappingTorus { m, rot } => {
            opts.guard(6 * *m as u128)?;
            let f = polygon_rotation(*m, *rot)?;
            let base: Arc<DeltaSet> = f.source().clone();
            mapping_torus(&base, &f)
        }
        SpaceExpr::Load(path) => {
            let d = DeltaSet::load(path)?;
            opts.guard(d.total_simplices() as u128)?;
            Ok(d)
        }
    }
}
