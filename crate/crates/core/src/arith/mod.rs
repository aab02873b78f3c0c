//! Sieves and the special-function kernel.

pub mod hurwitz;
pub mod primes;
pub mod quad;
pub mod sieve;
pub mod special;

pub use hurwitz::{hurwitz_zeta, HurwitzValue};
pub use primes::{prime_sum_between, prime_zeta, PrimeZeta};
pub use quad::{integrate, QuadResult, QuadValue, Quadrature, Rule};
pub use sieve::{for_each_prime_in, primes_up_to, sieve, SievedTables, SIEVE_CAPACITY};
pub use special::{
    digamma, gamma, ln_gamma, ln_gamma_complex, upper_incomplete_gamma, upper_incomplete_gamma_real, EULER_GAMMA,
};
