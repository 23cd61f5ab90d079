//! The seven-point mode lattice plus bottom, as a bit set over the three
//! basic instantiation states.

use core::fmt;

/// Bit set over {ground, var, nonground-nonvar}. `{var, ngv}` has no name
/// in the lattice and is rounded up to `any`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode(u8);

const G: u8 = 1;
const V: u8 = 2;
const N: u8 = 4;

impl Mode {
    pub const BOTTOM: Mode = Mode(0);
    pub const GROUND: Mode = Mode(G);
    pub const VAR: Mode = Mode(V);
    pub const NGV: Mode = Mode(N);
    pub const NOVAR: Mode = Mode(G | N);
    pub const GV: Mode = Mode(G | V);
    pub const ANY: Mode = Mode(G | V | N);

    pub const ALL: [Mode; 8] = [
        Mode::BOTTOM,
        Mode::GROUND,
        Mode::VAR,
        Mode::NGV,
        Mode::NOVAR,
        Mode::GV,
        Mode::ANY,
        Mode::ANY,
    ];

    fn round(bits: u8) -> Mode {
        if bits == V | N {
            Mode::ANY
        } else {
            Mode(bits)
        }
    }

    pub fn glb(self, other: Mode) -> Mode {
        Mode::round(self.0 & other.0)
    }

    pub fn lub(self, other: Mode) -> Mode {
        Mode::round(self.0 | other.0)
    }

    pub fn leq(self, other: Mode) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_bottom(self) -> bool {
        self.0 == 0
    }

    pub fn is_ground(self) -> bool {
        self == Mode::GROUND
    }

    pub fn is_var(self) -> bool {
        self == Mode::VAR
    }

    pub fn may_be_ground(self) -> bool {
        self.0 & G != 0
    }

    pub fn may_be_var(self) -> bool {
        self.0 & V != 0
    }

    pub fn may_be_ngv(self) -> bool {
        self.0 & N != 0
    }

    /// Surely not a variable.
    pub fn is_nonvar(self) -> bool {
        !self.is_bottom() && !self.may_be_var()
    }

    /// Surely contains a variable.
    pub fn is_nonground(self) -> bool {
        !self.is_bottom() && !self.may_be_ground()
    }

    /// Modes a term of this mode can have after further instantiation.
    pub fn instantiated(self) -> Mode {
        let mut b = self.0;
        if b & V != 0 {
            b |= G | N;
        }
        if b & N != 0 {
            b |= G;
        }
        Mode::round(b)
    }

    /// Possible modes of the common instance after unifying terms of modes
    /// `self` and `other`.
    pub fn unify(self, other: Mode) -> Mode {
        let mut out = 0u8;
        for a in [G, V, N] {
            for b in [G, V, N] {
                if self.0 & a == 0 || other.0 & b == 0 {
                    continue;
                }
                out |= match (a, b) {
                    (G, _) | (_, G) => G,
                    (V, V) => V,
                    (V, N) | (N, V) => N,
                    _ => G | N,
                };
            }
        }
        Mode::round(out)
    }

    /// Mode of a concrete term.
    pub fn of_term(t: &crate::ast::Term) -> Mode {
        if t.is_var() {
            Mode::VAR
        } else if t.is_ground() {
            Mode::GROUND
        } else {
            Mode::NGV
        }
    }

    pub fn admits(self, t: &crate::ast::Term) -> bool {
        Mode::of_term(t).leq(self)
    }

    pub fn name(self) -> &'static str {
        match self.0 {
            0 => "bot",
            G => "gr",
            V => "var",
            N => "ngv",
            x if x == G | N => "novar",
            x if x == G | V => "gv",
            _ => "any",
        }
    }

    pub fn from_name(s: &str) -> Option<Mode> {
        Some(match s {
            "gr" | "ground" => Mode::GROUND,
            "var" => Mode::VAR,
            "ngv" => Mode::NGV,
            "novar" => Mode::NOVAR,
            "gv" => Mode::GV,
            "any" => Mode::ANY,
            _ => return None,
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_order() {
        assert!(Mode::GROUND.leq(Mode::NOVAR));
        assert!(Mode::NGV.leq(Mode::NOVAR));
        assert!(Mode::VAR.leq(Mode::GV));
        assert!(!Mode::VAR.leq(Mode::NOVAR));
        for m in Mode::ALL {
            assert!(Mode::BOTTOM.leq(m));
            assert!(m.leq(Mode::ANY));
        }
        assert_eq!(Mode::GROUND.glb(Mode::VAR), Mode::BOTTOM);
        assert_eq!(Mode::VAR.lub(Mode::NGV), Mode::ANY);
        assert_eq!(Mode::GV.glb(Mode::NOVAR), Mode::GROUND);
    }

    #[test]
    fn unify_modes() {
        assert_eq!(Mode::VAR.unify(Mode::GROUND), Mode::GROUND);
        assert_eq!(Mode::NGV.unify(Mode::NGV), Mode::NOVAR);
        assert_eq!(Mode::VAR.unify(Mode::VAR), Mode::VAR);
        assert_eq!(Mode::ANY.instantiated(), Mode::ANY);
        assert_eq!(Mode::NGV.instantiated(), Mode::NOVAR);
        assert_eq!(Mode::VAR.instantiated(), Mode::ANY);
    }
}
