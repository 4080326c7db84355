//! Variable identifiers.
//!
//! The derived ordering is the variable priority used by the monomial
//! order: `T` variables by ascending block then position, then `S`
//! variables, then the formal parameters. Smaller means more significant.

use std::fmt;

/// Formal parameter: `t` for torus elements, `s` for flow time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    T,
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `T[block][pos]`, positions are 1-based.
    T { block: u32, pos: u32 },
    /// `S[k]`, 1-based.
    S(u32),
    Param(Param),
}

impl Var {
    pub const fn t(block: u32, pos: u32) -> Self {
        Var::T { block, pos }
    }

    pub const fn s(k: u32) -> Self {
        Var::S(k)
    }

    pub fn is_param(&self) -> bool {
        matches!(self, Var::Param(_))
    }

    pub fn is_t(&self) -> bool {
        matches!(self, Var::T { .. })
    }

    pub fn block(&self) -> Option<u32> {
        match self {
            Var::T { block, .. } => Some(*block),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T { block, pos } => write!(f, "T[{block}][{pos}]"),
            Var::S(k) => write!(f, "S[{k}]"),
            Var::Param(Param::T) => f.write_str("t"),
            Var::Param(Param::S) => f.write_str("s"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn priority_order() {
        let mut vars = [
            Var::Param(Param::S),
            Var::s(1),
            Var::t(2, 1),
            Var::t(1, 2),
            Var::Param(Param::T),
            Var::t(1, 1),
        ];
        vars.sort();
        let printed: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        assert_eq!(printed, ["T[1][1]", "T[1][2]", "T[2][1]", "S[1]", "t", "s"]);
    }
}
