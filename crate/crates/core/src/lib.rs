pub mod approx;
pub mod colist;
pub mod conat;
pub mod cotree;
pub mod erat;
pub mod lang;
pub mod lazy;
pub mod sieve;
