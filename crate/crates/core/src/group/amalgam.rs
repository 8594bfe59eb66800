//! The knot group of a connected sum, `G = G_- *_Z G_+`, amalgamated along
//! the meridians `omega_- = omega_+`.
//!
//! Normal form: `c_1 c_2 ... c_n omega^k` where the `c_i` alternate between
//! the factors and each is a nontrivial element of the kernel of the height
//! map `L: G_pm -> Z` (`L(omega) = 1`). Since `L(g omega^j) = L(g) + j`, every
//! coset `g <omega>` meets the kernel exactly once, so the kernel is a
//! canonical transversal for left and right cosets alike.

use std::fmt;

use serde::Serialize;

use super::word::{parse_powers, TorusGroup, TorusWord, GEN_A, GEN_B};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Side::Minus => "-",
            Side::Plus => "+",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.suffix())
    }
}

/// A transversal syllable: a nontrivial element of `ker L` in one factor.
pub type AmSyllable = (Side, TorusWord);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AmalgamWord {
    pub syllables: Vec<AmSyllable>,
    pub omega: i64,
}

impl AmalgamWord {
    pub fn identity() -> Self {
        AmalgamWord::default()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty() && self.omega == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Amalgam {
    pub minus: TorusGroup,
    pub plus: TorusGroup,
}

impl Amalgam {
    pub fn new(minus: TorusGroup, plus: TorusGroup) -> Self {
        Amalgam { minus, plus }
    }

    pub fn factor(&self, side: Side) -> &TorusGroup {
        match side {
            Side::Minus => &self.minus,
            Side::Plus => &self.plus,
        }
    }

    /// Writes `y = r omega^j` with `L(r) = 0`.
    pub fn split(&self, side: Side, y: &TorusWord) -> (TorusWord, i64) {
        let g = self.factor(side);
        let j = g.height_units(y);
        let r = g.mul(y, &g.pow(&g.omega(), -j));
        (r, j)
    }

    /// Canonical representative (in `ker L`) of the coset `y <omega>`.
    pub fn transversal(&self, side: Side, y: &TorusWord) -> TorusWord {
        self.split(side, y).0
    }

    /// Right-multiplies by an element of one factor.
    pub fn push_factor(&self, w: &mut AmalgamWord, side: Side, x: &TorusWord) {
        let g = self.factor(side);
        let mut y = g.mul(&g.pow(&g.omega(), w.omega), x);
        if matches!(w.syllables.last(), Some((s, _)) if *s == side) {
            let (_, c) = w.syllables.pop().unwrap();
            y = g.mul(&c, &y);
        }
        let (r, j) = self.split(side, &y);
        if !r.is_identity() {
            w.syllables.push((side, r));
        }
        w.omega = j;
    }

    pub fn from_factor(&self, side: Side, x: &TorusWord) -> AmalgamWord {
        let mut w = AmalgamWord::identity();
        self.push_factor(&mut w, side, x);
        w
    }

    pub fn omega_pow(&self, k: i64) -> AmalgamWord {
        AmalgamWord {
            syllables: Vec::new(),
            omega: k,
        }
    }

    pub fn mul(&self, x: &AmalgamWord, y: &AmalgamWord) -> AmalgamWord {
        let mut w = x.clone();
        for (side, c) in &y.syllables {
            self.push_factor(&mut w, *side, c);
        }
        w.omega += y.omega;
        w
    }

    pub fn inv(&self, x: &AmalgamWord) -> AmalgamWord {
        let mut w = self.omega_pow(-x.omega);
        for (side, c) in x.syllables.iter().rev() {
            let g = self.factor(*side);
            self.push_factor(&mut w, *side, &g.inv(c));
        }
        w
    }

    pub fn conj(&self, g: &AmalgamWord, x: &AmalgamWord) -> AmalgamWord {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    /// Parses generators `a-, b-, t-, a+, b+, t+, w`.
    pub fn parse(&self, s: &str) -> Result<AmalgamWord> {
        let mut w = AmalgamWord::identity();
        for (name, e) in parse_powers(s)? {
            let (side, letter) = match name.as_str() {
                "w" => {
                    w.omega += e;
                    continue;
                }
                n if n.len() == 2 && (n.ends_with('-') || n.ends_with('+')) => {
                    let side = if n.ends_with('-') { Side::Minus } else { Side::Plus };
                    (side, &n[..1])
                }
                other => return Err(Error::Parse(format!("unknown generator '{other}'"))),
            };
            let g = self.factor(side);
            let x = match letter {
                "a" => g.gen(GEN_A, e),
                "b" => g.gen(GEN_B, e),
                "t" => g.pow(&g.tau(), e),
                other => return Err(Error::Parse(format!("unknown generator '{other}'"))),
            };
            self.push_factor(&mut w, side, &x);
        }
        Ok(w)
    }

    pub fn format(&self, x: &AmalgamWord) -> String {
        let mut parts = Vec::new();
        for (side, c) in &x.syllables {
            let sfx = side.suffix();
            let g = self.factor(*side);
            let s = g.format(
                c,
                [
                    &format!("a{sfx}"),
                    &format!("b{sfx}"),
                    &format!("t{sfx}"),
                ],
            );
            parts.push(s);
        }
        if x.omega != 0 {
            parts.push(format!("w^{}", x.omega));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(".")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn am() -> Amalgam {
        Amalgam::new(TorusGroup::new(2, 3).unwrap(), TorusGroup::new(2, 5).unwrap())
    }

    #[test]
    fn omega_is_shared() {
        let g = am();
        let wm = g.from_factor(Side::Minus, &g.minus.omega());
        let wp = g.from_factor(Side::Plus, &g.plus.omega());
        assert_eq!(wm, g.omega_pow(1));
        assert_eq!(wp, g.omega_pow(1));
    }

    #[test]
    fn inverse_and_parse_round_trip() {
        let g = am();
        let x = g.parse("a-^1.b+^2.w^3.b-^-1.t+^1").unwrap();
        assert!(g.mul(&x, &g.inv(&x)).is_identity());
        assert!(g.mul(&g.inv(&x), &x).is_identity());
        let s = g.format(&x);
        assert_eq!(g.parse(&s).unwrap(), x);
    }

    #[test]
    fn syllables_lie_in_kernel() {
        let g = am();
        let x = g.parse("a-^1.b+^3.a-^1.b-^1.a+^1.b+^-2").unwrap();
        for (side, c) in &x.syllables {
            assert_eq!(g.factor(*side).height_units(c), 0);
            assert!(!c.is_identity());
        }
        for pair in x.syllables.windows(2) {
            assert_ne!(pair[0].0, pair[1].0);
        }
    }
}
