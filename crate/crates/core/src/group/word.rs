//! Normal forms in free products of two cyclic groups and in torus-knot
//! groups `<a, b | a^p = b^q>`.

use std::fmt;

use crate::error::{Error, Result};

/// Index of a free factor: `0` for `a`, `1` for `b`.
pub type Gen = u8;

pub const GEN_A: Gen = 0;
pub const GEN_B: Gen = 1;

/// A power of one generator. In a normal form the exponent lies in the open
/// range `0 < exp < modulus` for finite cyclic factors and is nonzero for
/// infinite ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub gen: Gen,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: Gen, exp: i64) -> Self {
        Syllable { gen, exp }
    }
}

/// Free product `C_0 * C_1` of two cyclic groups; `None` means infinite cyclic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FreeProduct {
    pub moduli: [Option<i64>; 2],
}

/// Reduced word in a [`FreeProduct`].
pub type FpWord = Vec<Syllable>;

impl FreeProduct {
    pub fn cyclic(p: i64, q: i64) -> Self {
        FreeProduct {
            moduli: [Some(p), Some(q)],
        }
    }

    pub fn free() -> Self {
        FreeProduct {
            moduli: [None, None],
        }
    }

    /// Reduces an exponent of generator `gen`; `0` means trivial.
    pub fn reduce_exp(&self, gen: Gen, e: i64) -> i64 {
        match self.moduli[gen as usize] {
            Some(m) => e.rem_euclid(m),
            None => e,
        }
    }

    /// Right-multiplies a reduced word by `gen^e` in place.
    pub fn push(&self, w: &mut FpWord, gen: Gen, e: i64) {
        if let Some(last) = w.last_mut() {
            if last.gen == gen {
                let r = self.reduce_exp(gen, last.exp + e);
                if r == 0 {
                    w.pop();
                } else {
                    last.exp = r;
                }
                return;
            }
        }
        let r = self.reduce_exp(gen, e);
        if r != 0 {
            w.push(Syllable::new(gen, r));
        }
    }

    pub fn mul(&self, x: &[Syllable], y: &[Syllable]) -> FpWord {
        let mut w = x.to_vec();
        for s in y {
            self.push(&mut w, s.gen, s.exp);
        }
        w
    }

    pub fn inv(&self, x: &[Syllable]) -> FpWord {
        let mut w = Vec::with_capacity(x.len());
        for s in x.iter().rev() {
            self.push(&mut w, s.gen, -s.exp);
        }
        w
    }

    pub fn pow(&self, x: &[Syllable], k: i64) -> FpWord {
        let base = if k < 0 { self.inv(x) } else { x.to_vec() };
        let mut w = Vec::new();
        for _ in 0..k.unsigned_abs() {
            w = self.mul(&w, &base);
        }
        w
    }

    /// Drops a trailing syllable of generator `gen`: the canonical
    /// representative of the coset `x <gen>`.
    pub fn coset_rep(&self, x: &[Syllable], gen: Gen) -> FpWord {
        let mut w = x.to_vec();
        if w.last().is_some_and(|s| s.gen == gen) {
            w.pop();
        }
        w
    }
}

/// Canonical form of the end `prefix . period^infinity` of an infinite
/// reduced word, where `prefix . period . period ...` is already reduced.
///
/// The prefix is shortened as far as possible by rotating the period, and the
/// period is replaced by its primitive root, so two eventually periodic words
/// have equal tails exactly when their canonical forms agree.
pub fn canonical_end<S: Clone + PartialEq>(prefix: &[S], period: &[S]) -> (Vec<S>, Vec<S>) {
    assert!(!period.is_empty(), "empty period");
    let mut u = prefix.to_vec();
    let mut v = period.to_vec();
    let n = v.len();
    for d in 1..=n {
        if n % d == 0 && (0..n).all(|i| v[i] == v[i % d]) {
            v.truncate(d);
            break;
        }
    }
    while let Some(last) = u.last() {
        if *last == *v.last().unwrap() {
            u.pop();
            v.rotate_right(1);
        } else {
            break;
        }
    }
    (u, v)
}

/// Element of the torus-knot group `<a, b | a^p = b^q>` in normal form
/// `tau^k . s_1 ... s_r` with alternating syllables `a^i` (`0<i<p`) and
/// `b^j` (`0<j<q`); `tau = a^p = b^q` is central.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TorusWord {
    pub tau: i64,
    pub syllables: FpWord,
}

impl TorusWord {
    pub fn identity() -> Self {
        TorusWord::default()
    }

    pub fn is_identity(&self) -> bool {
        self.tau == 0 && self.syllables.is_empty()
    }
}

/// The torus-knot group with its canonical Euclid data `mq + np = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusGroup {
    pub p: i64,
    pub q: i64,
    pub m: i64,
    pub n: i64,
}

/// Solves `mq + np = 1` with `0 < m < p`.
pub fn ext_euclid(p: i64, q: i64) -> Result<(i64, i64)> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidConfig {
            field: "p,q".into(),
            reason: format!("need p, q >= 2, got ({p}, {q})"),
        });
    }
    let (mut r0, mut r1) = (q, p);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    if r0 != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    // s0 * q == 1 (mod p)
    let m = s0.rem_euclid(p);
    let n = (1 - m * q) / p;
    debug_assert_eq!(m * q + n * p, 1);
    Ok((m, n))
}

impl TorusGroup {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        let (m, n) = ext_euclid(p, q)?;
        Ok(TorusGroup { p, q, m, n })
    }

    /// The quotient `G / <tau> = Z_p * Z_q`, which acts on the Bass-Serre tree.
    pub fn free_part(&self) -> FreeProduct {
        FreeProduct::cyclic(self.p, self.q)
    }

    fn modulus(&self, gen: Gen) -> i64 {
        if gen == GEN_A {
            self.p
        } else {
            self.q
        }
    }

    /// Right-multiplies by `gen^e`, carrying full turns into `tau`.
    pub fn push(&self, w: &mut TorusWord, gen: Gen, e: i64) {
        let md = self.modulus(gen);
        let (total, had_last) = match w.syllables.last() {
            Some(last) if last.gen == gen => (last.exp + e, true),
            _ => (e, false),
        };
        w.tau += total.div_euclid(md);
        let r = total.rem_euclid(md);
        if had_last {
            if r == 0 {
                w.syllables.pop();
            } else {
                w.syllables.last_mut().unwrap().exp = r;
            }
        } else if r != 0 {
            w.syllables.push(Syllable::new(gen, r));
        }
    }

    pub fn mul(&self, x: &TorusWord, y: &TorusWord) -> TorusWord {
        let mut w = x.clone();
        w.tau += y.tau;
        for s in &y.syllables {
            self.push(&mut w, s.gen, s.exp);
        }
        w
    }

    pub fn inv(&self, x: &TorusWord) -> TorusWord {
        let mut w = TorusWord {
            tau: -x.tau,
            syllables: Vec::new(),
        };
        for s in x.syllables.iter().rev() {
            self.push(&mut w, s.gen, -s.exp);
        }
        w
    }

    pub fn pow(&self, x: &TorusWord, k: i64) -> TorusWord {
        let base = if k < 0 { self.inv(x) } else { x.clone() };
        let mut w = TorusWord::identity();
        for _ in 0..k.unsigned_abs() {
            w = self.mul(&w, &base);
        }
        w
    }

    pub fn conj(&self, g: &TorusWord, x: &TorusWord) -> TorusWord {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    pub fn gen(&self, gen: Gen, e: i64) -> TorusWord {
        let mut w = TorusWord::identity();
        self.push(&mut w, gen, e);
        w
    }

    pub fn a(&self) -> TorusWord {
        self.gen(GEN_A, 1)
    }

    pub fn b(&self) -> TorusWord {
        self.gen(GEN_B, 1)
    }

    pub fn tau(&self) -> TorusWord {
        TorusWord {
            tau: 1,
            syllables: Vec::new(),
        }
    }

    /// The meridian `omega = b^n a^m`.
    pub fn omega(&self) -> TorusWord {
        let mut w = self.gen(GEN_B, self.n);
        self.push(&mut w, GEN_A, self.m);
        w
    }

    /// Normalizes a word given as a list of generator powers.
    pub fn normalize(&self, letters: &[(Gen, i64)]) -> TorusWord {
        let mut w = TorusWord::identity();
        for &(g, e) in letters {
            self.push(&mut w, g, e);
        }
        w
    }

    /// Translation height in units of `lambda(omega) = beta/pq`:
    /// `a -> q`, `b -> p`, `tau -> pq`. A homomorphism to `Z`.
    pub fn height_units(&self, x: &TorusWord) -> i64 {
        let mut h = x.tau * self.p * self.q;
        for s in &x.syllables {
            h += s.exp * if s.gen == GEN_A { self.q } else { self.p };
        }
        h
    }

    /// Image in `Z_p * Z_q` (drops the central factor).
    pub fn project(&self, x: &TorusWord) -> FpWord {
        x.syllables.clone()
    }

    /// Lift of a reduced free-product word with `tau`-power zero.
    pub fn lift(&self, w: &[Syllable]) -> TorusWord {
        TorusWord {
            tau: 0,
            syllables: w.to_vec(),
        }
    }

    /// Formats with generator names, e.g. `t^-1.b^2.a^1`; identity is `1`.
    pub fn format(&self, x: &TorusWord, names: [&str; 3]) -> String {
        let mut parts = Vec::new();
        if x.tau != 0 {
            parts.push(format!("{}^{}", names[2], x.tau));
        }
        for s in &x.syllables {
            parts.push(format!("{}^{}", names[s.gen as usize], s.exp));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(".")
        }
    }
}

/// Parses `name^exp` tokens separated by `.`; `1` or the empty string is the
/// identity. Returns `(token name, exponent)` pairs.
pub fn parse_powers(s: &str) -> Result<Vec<(String, i64)>> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(Vec::new());
    }
    s.split('.')
        .map(|tok| {
            let tok = tok.trim();
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent in '{tok}'")))?,
                ),
                None => (tok, 1),
            };
            if name.is_empty() {
                return Err(Error::Parse(format!("empty generator in '{s}'")));
            }
            Ok((name.to_string(), exp))
        })
        .collect()
}

impl TorusGroup {
    /// Parses a word over `a`, `b`, `t` (central) and `w` (meridian).
    pub fn parse(&self, s: &str) -> Result<TorusWord> {
        let mut w = TorusWord::identity();
        for (name, e) in parse_powers(s)? {
            match name.as_str() {
                "a" => self.push(&mut w, GEN_A, e),
                "b" => self.push(&mut w, GEN_B, e),
                "t" => w.tau += e,
                "w" => w = self.mul(&w, &self.pow(&self.omega(), e)),
                other => return Err(Error::Parse(format!("unknown generator '{other}'"))),
            }
        }
        Ok(w)
    }
}

impl fmt::Display for TorusWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.tau != 0 {
            parts.push(format!("t^{}", self.tau));
        }
        for s in &self.syllables {
            let n = if s.gen == GEN_A { "a" } else { "b" };
            parts.push(format!("{n}^{}", s.exp));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("."))
        }
    }
}

/// Formats a free-product word with the given generator names.
pub fn format_fp(w: &[Syllable], names: [&str; 2]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|s| format!("{}^{}", names[s.gen as usize], s.exp))
        .collect::<Vec<_>>()
        .join(".")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclid_examples() {
        assert_eq!(ext_euclid(2, 3).unwrap(), (1, -1));
        assert_eq!(ext_euclid(3, 5).unwrap(), (2, -3));
        assert_eq!(ext_euclid(2, 5).unwrap(), (1, -2));
        assert!(matches!(ext_euclid(2, 4), Err(Error::NotCoprime { .. })));
        assert!(ext_euclid(1, 4).is_err());
    }

    #[test]
    fn normalize_examples() {
        let g = TorusGroup::new(2, 3).unwrap();
        let ap = g.normalize(&[(GEN_A, 2)]);
        assert_eq!(ap, g.tau());
        assert_eq!(g.normalize(&[(GEN_B, 3)]), g.tau());
        assert!(g.normalize(&[]).is_identity());
        let w = g.omega();
        assert_eq!(w.tau, -1);
        assert_eq!(
            w.syllables,
            vec![Syllable::new(GEN_B, 2), Syllable::new(GEN_A, 1)]
        );
        assert_eq!(w.to_string(), "t^-1.b^2.a^1");
        assert_eq!(g.parse("t^-1.b^2.a^1").unwrap(), w);
    }

    #[test]
    fn inverse_and_heights() {
        let g = TorusGroup::new(3, 5).unwrap();
        let x = g.normalize(&[(GEN_A, 2), (GEN_B, -7), (GEN_A, 4), (GEN_B, 1)]);
        assert!(g.mul(&x, &g.inv(&x)).is_identity());
        assert_eq!(g.height_units(&g.omega()), 1);
        assert_eq!(g.height_units(&g.tau()), 15);
        assert_eq!(g.height_units(&g.a()), 5);
        assert_eq!(g.height_units(&g.b()), 3);
    }

    #[test]
    fn canonical_end_rotates_and_roots() {
        let (u, v) = canonical_end(&[1, 2, 3, 1, 2], &[3, 1, 2, 3, 1, 2]);
        assert_eq!(u, Vec::<i32>::new());
        assert_eq!(v, vec![1, 2, 3]);
        let (u, v) = canonical_end(&[9, 1], &[2, 1]);
        assert_eq!(u, vec![9]);
        assert_eq!(v, vec![1, 2]);
    }
}
