//! Equivariant cohomology `H*_T(G/P)`.

use std::sync::Arc;

use crate::algebra::LaurentPoly;
use crate::cartan::FlagVariety;
use crate::error::Result;
use crate::gkm::{Cohomology, GkmClass, SchubertExpansion};

pub type HClass = GkmClass<Cohomology>;
pub type HExpansion = SchubertExpansion<Cohomology>;

/// `[X^w]` for `w ∈ W^P`.
pub fn schubert_class_h(space: &Arc<FlagVariety>, w: usize) -> Result<HClass> {
    HClass::schubert(space, w)
}

pub fn h_multiply(f: &HClass, g: &HClass) -> Result<HClass> {
    f.multiply(g)
}

/// `∫_X f` by localization; the non-equivariant value is the constant term.
pub fn integrate_h(f: &HClass) -> Result<LaurentPoly> {
    f.integrate()
}

pub fn pullback_h(f: &HClass, target: &Arc<FlagVariety>) -> Result<HClass> {
    f.pullback(target)
}

pub fn pushforward_h(f: &HClass, target: &Arc<FlagVariety>) -> Result<HClass> {
    f.pushforward(target)
}

pub fn expand_schubert_h(f: &HClass) -> Result<HExpansion> {
    f.expand()
}
