//! Local solubility over the completions of the rationals.

mod hilbert;
mod intpoly;
mod modp;
mod primes;
mod quadric;
mod report;

pub use hilbert::{hasse_invariant, hilbert_symbol, is_local_square};
pub use intpoly::{IntPoly, ModPoly};
pub use modp::{hensel_lift, hensel_lift_steps, hensel_refine, solutions_mod_p, HenselPoint, ModPSolution, DEFAULT_MODP_BUDGET};
pub use primes::{is_prime, primes_below, Place};
pub use quadric::{isotropy_witness, lift_isotropic, quadric_isotropic, IsotropyWitness, WITNESS_BUDGET};
pub use report::{congruence_solubility_report, Criterion, PrimeReport, ReportOptions, SearchMethod, SolubilityStatus};
