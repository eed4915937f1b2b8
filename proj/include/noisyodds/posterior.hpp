#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "noisyodds/beliefs.hpp"

namespace noisyodds {

/// How the consensus is formed from the two beliefs.
///  BasicGame: equal weights, so P_C is triangular on [L, H].
///  DeFinetti: all weight on the subject, so P_C is uniform on [L, H].
enum class Variant { BasicGame, DeFinetti };

std::string_view to_string(Variant v) noexcept;
/// Accepts "basic" / "basicgame" and "definetti". Throws ConfigError otherwise.
Variant parse_variant(std::string_view name);

/// Symmetric triangular density of the consensus on [L, H] with its mode at
/// p_t. DegenerateError when L = H.
double consensus_density(Probability p_c_value, const BeliefEnvelope& env);

/// Likelihood of the consensus p_c as a function of the truth p_t, under a
/// uniform prior on p_t. This is the unnormalized two-branch piecewise form;
/// its integral over p_t is the marginal density of P_C at p_c.
/// No validation; returns 0 off the support.
double pt_kernel_given_pc(double p_t, double p_c, double epsilon) noexcept;

/// Same for the uniform (subject-weighted) consensus.
double definetti_pt_kernel(double p_t, double p_c, double epsilon) noexcept;

/// Posterior density of the truth given the consensus (basic game).
/// Requires 0 < epsilon <= 1 (DomainError) and 0 < p_c < 1 (DegenerateError
/// at the extremes, where the posterior is a point mass).
double pt_density_given_pc(Probability p_t_value, Probability p_c, double epsilon);

/// Posterior density of the truth given the subject's quote.
double definetti_pt_density(Probability p_t_value, Probability p_c, double epsilon);

/// Zeroth and first moments of a kernel, computed from antiderivatives.
struct KernelMoments {
    double mass = 0.0;   // integral of k(t)
    double first = 0.0;  // integral of t k(t)
};

KernelMoments kernel_moments(Variant variant, double p_c, double epsilon);

/// Closed support [lo, hi] shared by both kernels.
std::pair<double, double> posterior_support(double p_c, double epsilon) noexcept;

class PosteriorDensity {
public:
    PosteriorDensity(Probability p_c, double epsilon, Variant variant);

    double operator()(double p_t) const noexcept;
    double kernel(double p_t) const noexcept;

    Probability p_c() const noexcept { return p_c_; }
    double epsilon() const noexcept { return epsilon_; }
    Variant variant() const noexcept { return variant_; }
    Probability support_lo() const noexcept { return Probability(lo_); }
    Probability support_hi() const noexcept { return Probability(hi_); }

    /// Integral of the kernel, i.e. the marginal density of the consensus.
    double normalizer() const noexcept { return moments_.mass; }
    /// Posterior mean of p_t.
    double mean() const noexcept { return moments_.first / moments_.mass; }

    /// Points where the density has a kink: both support ends, p_c and 1/2.
    std::vector<double> breakpoints() const;

private:
    Probability p_c_;
    double epsilon_;
    Variant variant_;
    double lo_;
    double hi_;
    KernelMoments moments_;
};

}  // namespace noisyodds
