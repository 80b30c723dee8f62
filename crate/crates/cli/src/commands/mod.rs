pub mod axioms;
pub mod examples;
pub mod ode;
pub mod profile;
