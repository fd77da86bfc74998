//! Simulation and estimation of terahertz pulses radiated by the coherence
//! that two optical fields prepare between the upper levels of a V-type
//! three-level system, with ruby (Cr³⁺:Al₂O₃) as the reference medium.
//!
//! * [`dynamics`]: pulse envelopes, density-matrix evolution and the
//!   closed-form coherence solutions.
//! * [`materials`]: material presets, unit handling and optical
//!   intensity/energy bookkeeping.
//! * [`propagation`]: phase matching, THz emission and pulse energies.
//! * [`scenarios`]: end-to-end pipelines, table reproduction and sweeps.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod integrate;
pub mod materials;
pub mod propagation;
pub mod scenarios;
pub mod units;
