pub mod abel;
pub mod catalog;
pub mod conditions;
pub mod groebner;
pub mod period;
pub mod verify;

use isochron::groebner::Budget;

/// Default budget, then the environment, then the flag.
pub fn budget(pairs: Option<usize>) -> Budget {
    let b = Budget::from_env();
    match pairs {
        Some(p) => b.with_pairs(p),
        None => b,
    }
}
