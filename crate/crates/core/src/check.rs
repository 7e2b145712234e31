use std::fmt;

use crate::exact::{fmt_q, Q};

/// One exact identity `lhs = rhs` together with the name of the formula it instantiates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: Q,
    pub rhs: Q,
}

impl IdentityCheck {
    pub fn new(name: &'static str, lhs: Q, rhs: Q) -> Self {
        IdentityCheck { name, lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.holds() { "=" } else { "!=" };
        write!(f, "{}: {} {} {}", self.name, fmt_q(&self.lhs), rel, fmt_q(&self.rhs))
    }
}

/// First failing identity, if any.
pub fn first_violation(checks: &[IdentityCheck]) -> Option<&IdentityCheck> {
    checks.iter().find(|c| !c.holds())
}
