#pragma once

#include "superem/em.hpp"
#include "superem/perturbation.hpp"
#include "superem/trajectory.hpp"
#include "superem/wavelet.hpp"

#include <string>
#include <string_view>

namespace superem {

enum class Variant
{
	/// Accept when the resilience inequality holds and phi does not increase.
	alg1,
	/// Accept when phi does not increase and the K-L distance drops.
	alg2,
	alg1_no_phi_check,
	alg2_no_phi_check
};

enum class PhiScheme
{
	tv,
	l1_hard,
	l1_soft
};

/// How the sums of the unknown limit over S- and S+ are estimated.
enum class BoundEstimate
{
	/// max/min against the count fraction |S|/N * B.
	count_fraction,
	/// Next-iterate sums only.
	iterate_sum
};

std::string_view to_string(Variant v);
std::string_view to_string(PhiScheme p);
std::string_view to_string(BoundEstimate b);
Variant parse_variant(std::string_view s);
PhiScheme parse_phi_scheme(std::string_view s);
BoundEstimate parse_bound_estimate(std::string_view s);

struct SuperiorizerConfig
{
	double beta0 = 0.0;
	double gamma = 0.5;
	double q1 = 0.01;
	double rho = 1e-6;
	Variant variant = Variant::alg2;
	PhiScheme phi = PhiScheme::tv;
	int max_inner_tries = 40;
	int max_outer_iters = 50;
	/// Stop once beta drops below this (0 disables).
	double beta_stop_threshold = 0.0;
	BoundEstimate bound_estimate = BoundEstimate::count_fraction;
	WaveletSpec wavelet = WaveletSpec::bior68();
	double tv_smoothing = 1e-8;

	/// beta0 = 0 is allowed and reduces the loop to classic EM.
	void validate() const;
};

struct ReconState
{
	ImageGrid x;
	double kl = 0.0;
	double phi = 0.0;
	double beta = 0.0;
	int k = 0;
};

struct ConditionReport
{
	double lhs = 0.0;
	double rhs = 0.0;
	double b_minus = 0.0;
	double b_plus = 0.0;
	Index s_minus_size = 0;
	Index s_plus_size = 0;
	/// I(b, A y).
	double kl_before = 0.0;
	/// I(b, A x_next).
	double kl_after = 0.0;
	/// I(b, A x) for the current iterate.
	double kl_current = 0.0;
	double phi_before = 0.0;
	double phi_after = 0.0;
	bool phi_decreased = false;
	bool inequality_holds = false;
	bool kl_decreased = false;
	bool satisfied = false;
};

/// phi(x) under the configured scheme.
double phi_value(const ImageGrid& x, const SuperiorizerConfig& cfg);

/// Perturbation of x at level beta under the configured scheme.
PerturbationProposal propose(const ImageGrid& x, double beta, const SuperiorizerConfig& cfg,
                             const ColumnMask& active = {});

/// Resilience inequality for x_next = P(y):
///   beta max_{S-}(-v/y) B- - beta min_{S+}(v/y) B+ + beta sum_j H_j v_j < I(y) - I(x_next).
/// Sums over S use the column weights H_j (unit weights reproduce the unweighted form).
/// `kl_y`, when finite, is taken as I(y) instead of recomputing it.
ConditionReport check_condition_alg1(const EmWorkspace& w, const PerturbationProposal& p, const ImageGrid& x_next,
                                     const ReconState& state, const SuperiorizerConfig& cfg,
                                     double kl_y = kNotAvailable);

/// phi(y) <= phi(x) (unless the variant skips it) and I(x_next) < I(x).
ConditionReport check_condition_alg2(const EmWorkspace& w, const PerturbationProposal& p, const ImageGrid& x_next,
                                     const ReconState& state, const SuperiorizerConfig& cfg);

/// Superiorized EM. Rows carry k, kl, beta, inner tries and, for alg1 variants,
/// the inequality sides of the accepted try; phi metrics are left to the caller.
Trajectory run_superiorized(EmWorkspace& w, const ImageGrid& x0, const SuperiorizerConfig& cfg);

}  // namespace superem
