use std::fmt;
use std::str::FromStr;

use super::Permutation;
use crate::error::{Error, Result};

impl Permutation {
    /// Parses cycle notation such as `"(1 4 3 7)(2)(5 8)"` on `{1, ..., n}`.
    /// Fixed points may be omitted; `"()"` and the empty string mean the identity.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Permutation> {
        let cycles = tokenize(s)?;
        build(cycles, n)
    }
}

fn tokenize(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' at {rest:?}")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::Parse("unbalanced parenthesis".into()))?;
        let body = &open[..close];
        let cycle = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad element {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        cycles.push(cycle);
        rest = open[close + 1..].trim_start();
    }
    Ok(cycles)
}

fn build(cycles: Vec<Vec<usize>>, n: usize) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    let mut image: Vec<u32> = (0..n as u32).collect();
    let mut used = vec![false; n];
    for cycle in &cycles {
        for &x in cycle {
            if x == 0 || x > n {
                return Err(Error::IndexOutOfRange { index: x, n });
            }
            if std::mem::replace(&mut used[x - 1], true) {
                return Err(Error::Parse(format!("element {x} appears twice")));
            }
        }
        for (k, &x) in cycle.iter().enumerate() {
            let next = cycle[(k + 1) % cycle.len()];
            image[x - 1] = (next - 1) as u32;
        }
    }
    Ok(Permutation::from_zero_based(image))
}

impl FromStr for Permutation {
    type Err = Error;

    /// Infers `n` as the largest element mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let cycles = tokenize(s)?;
        let n = cycles.iter().flatten().copied().max().unwrap_or(1);
        build(cycles, n)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            f.write_str("(")?;
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_uses_least_element_order() {
        let p = Permutation::parse_cycles("(6 10 9)(5 8)(7 1 4 3)", 10).unwrap();
        assert_eq!(p.to_string(), "(1 4 3 7)(2)(5 8)(6 10 9)");
    }

    #[test]
    fn parse_errors() {
        assert!(Permutation::parse_cycles("(1 2", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 5)", 3).is_err());
        assert!(Permutation::parse_cycles("1 2", 3).is_err());
        assert!(Permutation::parse_cycles("(a b)", 3).is_err());
    }

    #[test]
    fn from_str_infers_size() {
        let p: Permutation = "(1 3)".parse().unwrap();
        assert_eq!(p.n(), 3);
        let id: Permutation = "()".parse().unwrap();
        assert!(id.is_identity());
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(images in (1usize..12).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())) {
            let p = Permutation::from_images(&images).unwrap();
            let q = Permutation::parse_cycles(&p.to_string(), p.n()).unwrap();
            prop_assert_eq!(p, q);
        }
    }
}
