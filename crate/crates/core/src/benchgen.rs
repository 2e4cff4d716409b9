//! Parametric benchmark families.
//!
//! Encodings, with the component used as interface:
//!
//! * `CyclicC`/`CyclicS`: Milner's cyclic scheduler. Cycler `i` starts
//!   (`a_i`), hands the token on (`g_{i+1}`) and waits for its consumer to
//!   finish (`b_i`) in either order; consumer `i` alternates `a_i`, `b_i`.
//!   Interface: consumer 0, resp. cycler 0.
//! * `Dac`: a chain of `n` workers; worker `i` is started by its parent,
//!   forks worker `i+1`, does local work and joins it. The last worker does
//!   four steps of work. Interface: the root.
//! * `Ring`: token ring; node `i` either lets its user enter the critical
//!   section or skips it, then passes the token. Interface: node 0.
//! * `Dp`: philosophers take and release their forks one at a time.
//! * `Dpsyn`: philosophers take and release both forks at once.
//! * `Dpd`: `Dp` where a dictionary circulates; a philosopher must hold it
//!   to pick up forks and passes it on before releasing them. The
//!   dictionary may also skip a seat.
//!
//! Philosopher 0 is the interface of the three dining families.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::model::{Lts, LtsBuilder, ModelError, Product};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    CyclicC,
    CyclicS,
    Dac,
    Ring,
    Dp,
    Dpd,
    Dpsyn,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::CyclicC, Family::CyclicS, Family::Dac, Family::Ring, Family::Dp, Family::Dpd, Family::Dpsyn];

    pub fn name(self) -> &'static str {
        match self {
            Family::CyclicC => "CyclicC",
            Family::CyclicS => "CyclicS",
            Family::Dac => "Dac",
            Family::Ring => "Ring",
            Family::Dp => "Dp",
            Family::Dpd => "Dpd",
            Family::Dpsyn => "Dpsyn",
        }
    }

    /// Inclusive parameter range.
    pub fn bounds(self) -> (usize, usize) {
        (2, 64)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| BenchError::UnknownFamily(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("{family}({n}) out of range {lo}..={hi}")]
    OutOfRange { family: Family, n: usize, lo: usize, hi: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn generate(family: Family, n: usize) -> Result<Product, BenchError> {
    let (lo, hi) = family.bounds();
    if n < lo || n > hi {
        return Err(BenchError::OutOfRange { family, n, lo, hi });
    }
    let (components, interface) = match family {
        Family::CyclicC => (cyclic(n)?, n),
        Family::CyclicS => (cyclic(n)?, 0),
        Family::Dac => (dac(n)?, 0),
        Family::Ring => (ring(n)?, 0),
        Family::Dp => (dp(n)?, 0),
        Family::Dpd => (dpd(n)?, 0),
        Family::Dpsyn => (dpsyn(n)?, 0),
    };
    Ok(Product::new(components, interface, false)?)
}

/// Cyclers `0..n`, then consumers `0..n`.
fn cyclic(n: usize) -> Result<Vec<Lts>, ModelError> {
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b, g, gn) = (format!("a{i}"), format!("b{i}"), format!("g{i}"), format!("g{}", (i + 1) % n));
        let init = if i == 0 { "A" } else { "D" };
        out.push(
            LtsBuilder::new(format!("cycler{i}"))
                .initial(init)
                .transition("A", &a, "C")
                .transition("C", &g, "E")
                .transition("E", &b, "D")
                .transition("E", &gn, "B")
                .transition("D", &gn, "A")
                .transition("B", &b, "A")
                .build()?,
        );
    }
    for i in 0..n {
        out.push(
            LtsBuilder::new(format!("consumer{i}"))
                .transition("p", &format!("a{i}"), "q")
                .transition("q", &format!("b{i}"), "p")
                .build()?,
        );
    }
    Ok(out)
}

fn dac(n: usize) -> Result<Vec<Lts>, ModelError> {
    let mut out = Vec::new();
    out.push(
        LtsBuilder::new("worker0")
            .transition("A", "start1", "F")
            .transition("F", "w0", "W")
            .transition("W", "fin1", "D")
            .build()?,
    );
    for i in 1..n {
        let (s, f) = (format!("start{i}"), format!("fin{i}"));
        let mut b = LtsBuilder::new(format!("worker{i}")).transition("I", &s, "A");
        if i == n - 1 {
            let chain = ["A", "L0", "L1", "L2", "D"];
            for k in 0..4 {
                b = b.transition(chain[k], &format!("w{i}_{k}"), chain[k + 1]);
            }
        } else {
            b = b.transition("A", &format!("start{}", i + 1), "F").transition("F", &format!("w{i}_0"), "W").transition(
                "W",
                &format!("fin{}", i + 1),
                "D",
            );
        }
        out.push(b.transition("D", &f, "T").build()?);
    }
    Ok(out)
}

/// Node and user per position, interleaved: node0, user0, node1, ...
fn ring(n: usize) -> Result<Vec<Lts>, ModelError> {
    let mut out = Vec::new();
    for i in 0..n {
        let t = format!("t{i}");
        let tn = format!("t{}", (i + 1) % n);
        let (en, ex, sk, rq) = (format!("en{i}"), format!("ex{i}"), format!("sk{i}"), format!("rq{i}"));
        out.push(
            LtsBuilder::new(format!("node{i}"))
                .initial(if i == 0 { "T" } else { "N" })
                .transition("N", &t, "T")
                .transition("T", &sk, "P")
                .transition("T", &en, "C")
                .transition("C", &ex, "P")
                .transition("P", &tn, "N")
                .build()?,
        );
        out.push(
            LtsBuilder::new(format!("user{i}"))
                .transition("u", &rq, "w")
                .transition("u", &sk, "u")
                .transition("w", &en, "c")
                .transition("c", &ex, "u")
                .build()?,
        );
    }
    Ok(out)
}

/// Fork `j` is the left fork of philosopher `j` and the right fork of
/// philosopher `j-1`.
fn fork(j: usize, n: usize) -> Result<Lts, ModelError> {
    let q = (j + n - 1) % n;
    LtsBuilder::new(format!("fork{j}"))
        .transition("f", &format!("tl{j}"), "x")
        .transition("x", &format!("rl{j}"), "f")
        .transition("f", &format!("tr{q}"), "y")
        .transition("y", &format!("rr{q}"), "f")
        .build()
}

fn cycle(name: String, steps: &[String]) -> Result<Lts, ModelError> {
    let mut b = LtsBuilder::new(name);
    for (k, a) in steps.iter().enumerate() {
        b = b.transition(&format!("s{k}"), a, &format!("s{}", (k + 1) % steps.len()));
    }
    b.build()
}

fn dp(n: usize) -> Result<Vec<Lts>, ModelError> {
    let mut out = Vec::new();
    for i in 0..n {
        let steps: Vec<String> = ["tl", "tr", "rl", "rr"].iter().map(|a| format!("{a}{i}")).collect();
        out.push(cycle(format!("phil{i}"), &steps)?);
    }
    for j in 0..n {
        out.push(fork(j, n)?);
    }
    Ok(out)
}

fn dpd(n: usize) -> Result<Vec<Lts>, ModelError> {
    let mut out = Vec::new();
    for i in 0..n {
        let steps: Vec<String> = ["gd", "tl", "tr", "pd", "rl", "rr"].iter().map(|a| format!("{a}{i}")).collect();
        out.push(cycle(format!("phil{i}"), &steps)?);
    }
    for j in 0..n {
        out.push(fork(j, n)?);
    }
    let mut d = LtsBuilder::new("dict");
    for k in 0..n {
        let (p, h, next) = (format!("p{k}"), format!("h{k}"), format!("p{}", (k + 1) % n));
        d = d.transition(&p, &format!("gd{k}"), &h).transition(&h, &format!("pd{k}"), &next).transition(
            &p,
            &format!("skip{k}"),
            &next,
        );
    }
    out.push(d.initial("p0").build()?);
    Ok(out)
}

fn dpsyn(n: usize) -> Result<Vec<Lts>, ModelError> {
    let mut out = Vec::new();
    for i in 0..n {
        out.push(
            LtsBuilder::new(format!("phil{i}"))
                .transition("t", &format!("take{i}"), "e")
                .transition("e", &format!("rel{i}"), "t")
                .build()?,
        );
    }
    for j in 0..n {
        let (l, r) = (j, (j + 1) % n);
        out.push(
            LtsBuilder::new(format!("fork{j}"))
                .transition("f", &format!("take{l}"), "b")
                .transition("f", &format!("take{r}"), "b")
                .transition("b", &format!("rel{l}"), "f")
                .transition("b", &format!("rel{r}"), "f")
                .build()?,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(matches!(generate(Family::Dp, 1), Err(BenchError::OutOfRange { .. })));
    }

    #[test]
    fn philosophers_are_uniform() {
        let a = generate(Family::Dp, 2).unwrap();
        let b = generate(Family::Dp, 3).unwrap();
        assert_eq!(a.components()[0].num_states(), b.components()[0].num_states());
        assert_eq!(a.components()[1].num_states(), b.components()[2].num_states());
    }
}
