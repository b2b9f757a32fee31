//! Blind linear inverse problems by partially collapsed Gibbs sampling with
//! diffusion restoration (GibbsDDRM).
//!
//! Measurements follow `y = H_φ x_0 + z` with both the clean data `x_0` and
//! the operator parameters φ unknown. The sampler alternates spectral-space
//! restoration steps for the diffusion latents with Langevin updates of φ,
//! interleaved inside one restoration sweep so the operator estimate improves
//! while the chain is still noisy.
//!
//! The crate is built for desk-scale verification: denoisers are exact
//! analytic posteriors (Gaussian and Gaussian-mixture priors) rather than
//! learned networks, and the [`oracle`] module provides the brute-force
//! references (conjugate posteriors, quadrature, TV distance) that the test
//! suite measures everything against.
//!
//! Module map:
//! * [`priors`] — noise schedules, latent state, analytic MMSE denoisers.
//! * [`operators`] — parametric operators with SVD access: dense, circulant
//!   (1-D/2-D), complex circulant, scalar gain.
//! * [`ddrm`] — the modified spectral-space conditional samplers and the
//!   non-blind restoration baseline.
//! * [`phi_sampler`] — Langevin/MAP updates of φ and the Jensen-gap bound.
//! * [`pcgs`] — the GibbsDDRM driver, blocked-Gibbs baseline, reference
//!   samplers, and the trimming validator.
//! * [`oracle`] — independent brute-force references.
//! * [`metrics`] — PSNR/MSE and shift-aligned kernel error.

pub mod ddrm;
pub mod error;
pub mod metrics;
pub mod operators;
pub mod oracle;
pub mod pcgs;
pub mod phi_sampler;
pub mod priors;

pub use error::{Error, Result};
