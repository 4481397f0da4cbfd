//! Membership in `I = I_L ⊗ ∧ + W ⊗ I_∧` and `I_fin = I + I_Φ`.
//!
//! `I_L` is spanned by normal monomials containing some `y^α`, and
//! `I_∧ = (u(L))` by forms containing some `dx^β`, so both are spanned by
//! basis terms and membership can be decided term by term.

use super::{WeylElement, WeylTerm};
use crate::geometry::LeafSpec;

#[derive(Clone, Copy, Debug)]
pub enum Ideal<'a> {
    /// The polarization ideal `I`.
    Polarization,
    /// `I + I_Φ` for the leaf `x^β = c^β`.
    Leaf(&'a LeafSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// First term outside the ideal.
    pub witness: Option<WeylTerm>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.member
    }
}

pub(crate) fn term_in_polarization_ideal(t: &WeylTerm, nu: usize) -> bool {
    t.fiber.alpha_part(nu).iter().any(|&e| e > 0) || t.form.has_beta(nu)
}

pub fn ideal_membership(a: &WeylElement, which: Ideal<'_>) -> Membership {
    let nu = a.nu();
    for t in a.terms() {
        if term_in_polarization_ideal(&t, nu) {
            continue;
        }
        let ok = match which {
            Ideal::Polarization => false,
            Ideal::Leaf(leaf) => leaf.vanishes(&t.coeff),
        };
        if !ok {
            return Membership {
                member: false,
                witness: Some(t),
            };
        }
    }
    Membership {
        member: true,
        witness: None,
    }
}
