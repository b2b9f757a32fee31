//! Reference samplers on the tractable toy model.
//!
//! These validate the sampler-construction argument on a model where every
//! conditional is exactly computable, with no restoration approximations in
//! the loop:
//!
//! * Sampler 1 — the naive Gibbs sweep over `(x_{0:T}, φ)`.
//! * Sampler 2 — same conditionals rearranged into the cycle structure with
//!   inner φ/latent alternation, still conditioning on stale lower latents.
//! * Sampler 3 — marginalizes the stale latents: each step jointly redraws
//!   them, but their values are never conditioned on again.
//! * Pcgs — drops (trims) the redundant draws of Sampler 3 entirely; this is
//!   the order the production driver uses.
//!
//! All four must share the stationary distribution `p(x_{0:T}, φ | y)`.
//! Conditionals are Gaussian wherever the conditioning set pins `x_0`; where
//! `x_0` is marginalized out, the φ conditional is one-dimensional and is
//! drawn exactly by grid inverse-CDF.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::oracle::{GridDistribution1d, ScalarToy, ToyModel};
use crate::pcgs::trimming::{GibbsStep, TrimmingTracker};

/// Which reference sampler to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerVariant {
    Sampler1,
    Sampler2,
    Sampler3,
    Pcgs,
}

/// One retained sweep: the latents `x_0..x_T` and φ.
#[derive(Debug, Clone)]
pub struct ToyChainSample {
    pub x: Vec<f64>,
    pub phi: f64,
}

fn draw_normal<R: Rng + ?Sized>(mean: f64, var: f64, rng: &mut R) -> f64 {
    mean + var.sqrt() * rng.sample::<f64, _>(StandardNormal)
}

/// Observations `(value, noise_var)` of `x_0` contributed by latents `t0..=t1`.
fn latent_obs(toy: &ScalarToy, x: &[f64], t0: usize, t1: usize) -> Vec<(f64, f64)> {
    (t0..=t1)
        .map(|t| {
            let s = toy.schedule.sigma(t);
            (x[t], s * s)
        })
        .collect()
}

/// Exact draw from `p(φ | x_{t:T}, y)` with `x_0` marginalized out
/// (one-dimensional grid inverse-CDF).
fn sample_phi_marginal<R: Rng + ?Sized>(
    toy: &ScalarToy,
    x: &[f64],
    t: usize,
    rng: &mut R,
) -> Result<f64> {
    let t_top = toy.schedule.t_steps();
    let obs = latent_obs(toy, x, t, t_top);
    let (m, s2) = toy.x0_posterior(&obs, None);

    // Cover the prior envelope plus the likelihood-preferred region.
    let prior_std = toy.phi_var.sqrt();
    let mut lo = toy.phi_mean - 12.0 * prior_std;
    let mut hi = toy.phi_mean + 12.0 * prior_std;
    if m.abs() > 1e-9 {
        let center = toy.y / m;
        let width = 12.0 * (toy.sigma_y * toy.sigma_y + center * center * s2).sqrt() / m.abs();
        lo = lo.min(center - width);
        hi = hi.max(center + width);
    }
    lo = lo.max(toy.phi_mean - 24.0 * prior_std);
    hi = hi.min(toy.phi_mean + 24.0 * prior_std);

    let density = toy.phi_log_density_marginal(m, s2);
    let grid = GridDistribution1d::from_log_density(lo, hi, 4097, density)?;
    Ok(grid.sample(rng))
}

/// Runs the chosen reference sampler for `sweeps` cycles and returns the
/// chain of `(x_{0:T}, φ)` samples, one per cycle. `m_inner` plays the role
/// of a constant `M_t` for the variants that alternate inner updates.
pub fn run_reference_sampler<R: Rng + ?Sized>(
    toy_model: &ToyModel,
    variant: SamplerVariant,
    sweeps: usize,
    m_inner: usize,
    rng: &mut R,
) -> Result<Vec<ToyChainSample>> {
    let toy = toy_model.as_scalar()?;
    if sweeps == 0 {
        return Err(Error::invalid("sweeps must be >= 1"));
    }
    let t_top = toy.schedule.t_steps();
    if t_top == 0 {
        return Err(Error::invalid("reference samplers need T >= 1"));
    }

    // Initial state drawn from the model priors.
    let mut phi = draw_normal(toy.phi_mean, toy.phi_var, rng);
    let mut x = vec![0.0; t_top + 1];
    x[0] = draw_normal(toy.prior_mean, toy.prior_var, rng);
    for t in 1..=t_top {
        let s = toy.schedule.sigma(t);
        x[t] = draw_normal(x[0], s * s, rng);
    }

    let mut chain = Vec::with_capacity(sweeps);
    for _ in 0..sweeps {
        match variant {
            SamplerVariant::Sampler1 => sweep_sampler1(&toy, &mut x, &mut phi, rng),
            SamplerVariant::Sampler2 => sweep_sampler2(&toy, &mut x, &mut phi, m_inner, rng),
            SamplerVariant::Sampler3 => sweep_sampler3(&toy, &mut x, &mut phi, m_inner, rng)?,
            SamplerVariant::Pcgs => sweep_pcgs(&toy, &mut x, &mut phi, m_inner, None, rng)?,
        }
        chain.push(ToyChainSample { x: x.clone(), phi });
    }
    Ok(chain)
}

/// Like [`run_reference_sampler`] with the PCGS variant, but registering every
/// conditional with a [`TrimmingTracker`] so the trimming rule is enforced at
/// runtime.
pub fn run_pcgs_validated<R: Rng + ?Sized>(
    toy_model: &ToyModel,
    sweeps: usize,
    m_inner: usize,
    rng: &mut R,
) -> Result<Vec<ToyChainSample>> {
    let toy = toy_model.as_scalar()?;
    let t_top = toy.schedule.t_steps();
    let mut labels: Vec<String> = (0..=t_top).map(|t| format!("x_{t}")).collect();
    labels.push("phi".into());
    let mut tracker = TrimmingTracker::new(labels);

    let mut phi = draw_normal(toy.phi_mean, toy.phi_var, rng);
    let mut x = vec![0.0; t_top + 1];
    x[0] = draw_normal(toy.prior_mean, toy.prior_var, rng);
    for t in 1..=t_top {
        let s = toy.schedule.sigma(t);
        x[t] = draw_normal(x[0], s * s, rng);
    }

    let mut chain = Vec::with_capacity(sweeps);
    for _ in 0..sweeps {
        sweep_pcgs(&toy, &mut x, &mut phi, m_inner, Some(&mut tracker), rng)?;
        chain.push(ToyChainSample { x: x.clone(), phi });
    }
    Ok(chain)
}

/// Naive Gibbs: every conditional conditions on all other variables.
fn sweep_sampler1<R: Rng + ?Sized>(toy: &ScalarToy, x: &mut [f64], phi: &mut f64, rng: &mut R) {
    let t_top = toy.schedule.t_steps();
    // x_T, then x_t down to x_1: given x_0 these depend on nothing else.
    for t in (1..=t_top).rev() {
        let s = toy.schedule.sigma(t);
        x[t] = draw_normal(x[0], s * s, rng);
    }
    // x_0 | x_{1:T}, φ, y.
    let obs = latent_obs(toy, x, 1, t_top);
    let (m, v) = toy.x0_posterior(&obs, Some(*phi));
    x[0] = draw_normal(m, v, rng);
    // φ | x_{0:T}, y.
    let (pm, pv) = toy.phi_posterior_given_x0(x[0]);
    *phi = draw_normal(pm, pv, rng);
}

/// Sampler 2: the cycle-structured rearrangement. Conditionals still include
/// the stale lower latents (so `x_0` is pinned everywhere), repeated and
/// reordered — which leaves the stationary distribution unchanged.
fn sweep_sampler2<R: Rng + ?Sized>(
    toy: &ScalarToy,
    x: &mut [f64],
    phi: &mut f64,
    m_inner: usize,
    rng: &mut R,
) {
    let t_top = toy.schedule.t_steps();
    let sample_xt = |x: &mut [f64], t: usize, phi: f64, rng: &mut R| {
        if t >= 1 {
            // x_t | x_0 (stale), everything else drops out.
            let s = toy.schedule.sigma(t);
            x[t] = draw_normal(x[0], s * s, rng);
        } else {
            // x_0 | x_{1:T}, φ, y.
            let obs = latent_obs(toy, x, 1, t_top);
            let (m, v) = toy.x0_posterior(&obs, Some(phi));
            x[0] = draw_normal(m, v, rng);
        }
    };

    let s = toy.schedule.sigma(t_top);
    x[t_top] = draw_normal(x[0], s * s, rng);
    for t in (0..t_top).rev() {
        sample_xt(x, t, *phi, rng);
        for _ in 0..m_inner {
            // φ | x_0 (fresh at t = 0, stale otherwise), y.
            let (pm, pv) = toy.phi_posterior_given_x0(x[0]);
            *phi = draw_normal(pm, pv, rng);
            sample_xt(x, t, *phi, rng);
        }
    }
}

/// Sampler 3: each step jointly redraws the stale lower latents
/// (marginalization) — the redundant draws still happen, but nothing
/// conditions on them afterwards.
fn sweep_sampler3<R: Rng + ?Sized>(
    toy: &ScalarToy,
    x: &mut [f64],
    phi: &mut f64,
    m_inner: usize,
    rng: &mut R,
) -> Result<()> {
    let t_top = toy.schedule.t_steps();

    // Redraw x_0 from its conditional given (φ, x_{hi..T}, y), then the
    // intermediate latents below `below` from p(x_j | x_0).
    let redraw_lower = |x: &mut [f64], phi: f64, hi: usize, below: usize, rng: &mut R| {
        let obs = latent_obs(toy, x, hi, t_top);
        let (m, v) = toy.x0_posterior(&obs, Some(phi));
        x[0] = draw_normal(m, v, rng);
        for j in 1..below {
            let s = toy.schedule.sigma(j);
            x[j] = draw_normal(x[0], s * s, rng);
        }
    };

    // {x_T, ψ_T}: ψ_T is all of x_{0:T-1}.
    {
        let (m, v) = toy.x0_posterior(&[], Some(*phi));
        x[0] = draw_normal(m, v, rng);
        for j in 1..t_top {
            let s = toy.schedule.sigma(j);
            x[j] = draw_normal(x[0], s * s, rng);
        }
        let s = toy.schedule.sigma(t_top);
        x[t_top] = draw_normal(x[0], s * s, rng);
    }

    for t in (0..t_top).rev() {
        // {x_t, ψ_t} | φ, χ_t, y.
        if t >= 1 {
            redraw_lower(x, *phi, t + 1, t, rng);
            let s = toy.schedule.sigma(t);
            x[t] = draw_normal(x[0], s * s, rng);
        } else {
            let obs = latent_obs(toy, x, 1, t_top);
            let (m, v) = toy.x0_posterior(&obs, Some(*phi));
            x[0] = draw_normal(m, v, rng);
        }
        for _ in 0..m_inner {
            // {φ, ψ_t} | x_{t:T}, y.
            if t >= 1 {
                *phi = sample_phi_marginal(toy, x, t, rng)?;
                redraw_lower(x, *phi, t, t, rng);
            } else {
                let (pm, pv) = toy.phi_posterior_given_x0(x[0]);
                *phi = draw_normal(pm, pv, rng);
            }
            // {x_t, ψ_t} | φ, χ_t, y.
            if t >= 1 {
                redraw_lower(x, *phi, t + 1, t, rng);
                let s = toy.schedule.sigma(t);
                x[t] = draw_normal(x[0], s * s, rng);
            } else {
                let obs = latent_obs(toy, x, 1, t_top);
                let (m, v) = toy.x0_posterior(&obs, Some(*phi));
                x[0] = draw_normal(m, v, rng);
            }
        }
    }
    Ok(())
}

/// The partially collapsed order: Sampler 3 with the redundant lower-latent
/// draws removed. Optionally registers every conditional with a trimming
/// tracker.
fn sweep_pcgs<R: Rng + ?Sized>(
    toy: &ScalarToy,
    x: &mut [f64],
    phi: &mut f64,
    m_inner: usize,
    mut tracker: Option<&mut TrimmingTracker>,
    rng: &mut R,
) -> Result<()> {
    let t_top = toy.schedule.t_steps();
    let phi_id = t_top + 1;
    let track = |tracker: &mut Option<&mut TrimmingTracker>,
                     sampled: Vec<usize>,
                     conditioned: Vec<usize>,
                     trimmed: Vec<usize>|
     -> Result<()> {
        if let Some(tr) = tracker.as_deref_mut() {
            tr.step(&GibbsStep { sampled, conditioned, trimmed })?;
        }
        Ok(())
    };

    // x_T | φ, y with x_{0:T-1} marginalized: x_0 integrates out of the
    // forward kernel, inflating the variance by σ_T².
    {
        let (m, v) = toy.x0_posterior(&[], Some(*phi));
        let s = toy.schedule.sigma(t_top);
        track(
            &mut tracker,
            vec![t_top],
            vec![phi_id],
            (0..t_top).collect(),
        )?;
        x[t_top] = draw_normal(m, v + s * s, rng);
    }

    for t in (0..t_top).rev() {
        let upper: Vec<usize> = (t + 1..=t_top).collect();
        // x_t | φ, x_{t+1:T}, y (lower latents trimmed).
        let draw_xt = |x: &mut [f64], phi: f64, rng: &mut R| {
            let obs = latent_obs(toy, x, t + 1, t_top);
            let (m, v) = toy.x0_posterior(&obs, Some(phi));
            if t >= 1 {
                let s = toy.schedule.sigma(t);
                draw_normal(m, v + s * s, rng)
            } else {
                draw_normal(m, v, rng)
            }
        };

        let mut cond = vec![phi_id];
        cond.extend(&upper);
        track(&mut tracker, vec![t], cond.clone(), (0..t).collect())?;
        x[t] = draw_xt(x, *phi, rng);

        for _ in 0..m_inner {
            // φ | x_{t:T}, y (lower latents trimmed; exact 1-D draw).
            let mut cond_phi = vec![t];
            cond_phi.extend(&upper);
            track(&mut tracker, vec![phi_id], cond_phi, (0..t).collect())?;
            if t >= 1 {
                *phi = sample_phi_marginal(toy, x, t, rng)?;
            } else {
                let (pm, pv) = toy.phi_posterior_given_x0(x[0]);
                *phi = draw_normal(pm, pv, rng);
            }

            track(&mut tracker, vec![t], cond.clone(), (0..t).collect())?;
            x[t] = draw_xt(x, *phi, rng);
        }
    }
    Ok(())
}
