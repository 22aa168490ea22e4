#include "superem/superiorizer.hpp"

#include "superem/kl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace superem {

std::string_view to_string(Variant v)
{
	switch (v)
	{
		case Variant::alg1: return "alg1";
		case Variant::alg2: return "alg2";
		case Variant::alg1_no_phi_check: return "alg1_no_phi_check";
		case Variant::alg2_no_phi_check: return "alg2_no_phi_check";
	}
	return "?";
}

std::string_view to_string(PhiScheme p)
{
	switch (p)
	{
		case PhiScheme::tv: return "tv";
		case PhiScheme::l1_hard: return "l1_hard";
		case PhiScheme::l1_soft: return "l1_soft";
	}
	return "?";
}

std::string_view to_string(BoundEstimate b)
{
	return b == BoundEstimate::count_fraction ? "count_fraction" : "iterate_sum";
}

Variant parse_variant(std::string_view s)
{
	for (auto v : {Variant::alg1, Variant::alg2, Variant::alg1_no_phi_check, Variant::alg2_no_phi_check})
		if (to_string(v) == s)
			return v;
	throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

PhiScheme parse_phi_scheme(std::string_view s)
{
	for (auto p : {PhiScheme::tv, PhiScheme::l1_hard, PhiScheme::l1_soft})
		if (to_string(p) == s)
			return p;
	throw std::invalid_argument("unknown phi scheme '" + std::string(s) + "'");
}

BoundEstimate parse_bound_estimate(std::string_view s)
{
	for (auto b : {BoundEstimate::count_fraction, BoundEstimate::iterate_sum})
		if (to_string(b) == s)
			return b;
	throw std::invalid_argument("unknown bound estimate '" + std::string(s) + "'");
}

void SuperiorizerConfig::validate() const
{
	if (!(beta0 >= 0.0) || !std::isfinite(beta0))
		throw std::invalid_argument("superiorizer: beta0 must be finite and nonnegative");
	if (!(gamma > 0.0 && gamma < 1.0))
		throw std::invalid_argument("superiorizer: gamma must lie in (0, 1)");
	if (!(rho > 0.0))
		throw std::invalid_argument("superiorizer: rho must be positive");
	if (!(q1 >= 0.0))
		throw std::invalid_argument("superiorizer: q1 must be nonnegative");
	if (max_inner_tries < 1 || max_outer_iters < 1)
		throw std::invalid_argument("superiorizer: iteration caps must be positive");
	if (!(beta_stop_threshold >= 0.0))
		throw std::invalid_argument("superiorizer: beta_stop_threshold must be nonnegative");
	if (!(tv_smoothing > 0.0))
		throw std::invalid_argument("superiorizer: tv_smoothing must be positive");
}

namespace {

bool checks_phi(Variant v)
{
	return v == Variant::alg1 || v == Variant::alg2;
}

bool is_alg1(Variant v)
{
	return v == Variant::alg1 || v == Variant::alg1_no_phi_check;
}

ThresholdMode mode_of(PhiScheme p)
{
	return p == PhiScheme::l1_soft ? ThresholdMode::soft : ThresholdMode::hard;
}

}  // namespace

double phi_value(const ImageGrid& x, const SuperiorizerConfig& cfg)
{
	return cfg.phi == PhiScheme::tv ? tv_value(x) : wavelet_l1(x, cfg.wavelet);
}

PerturbationProposal propose(const ImageGrid& x, double beta, const SuperiorizerConfig& cfg, const ColumnMask& active)
{
	if (cfg.phi == PhiScheme::tv)
		return propose_tv(x, beta, active, cfg.tv_smoothing);
	return propose_l1(x, beta, mode_of(cfg.phi), cfg.wavelet, active);
}

ConditionReport check_condition_alg1(const EmWorkspace& w, const PerturbationProposal& p, const ImageGrid& x_next,
                                     const ReconState& state, const SuperiorizerConfig& cfg, double kl_y)
{
	const auto& h = w.matrix().column_sums();
	const auto& active = w.matrix().active();
	const double n = double(w.matrix().num_active());
	const double total = w.total_counts();
	const double beta = p.beta;
	const auto& v = p.v.pixels;
	const auto& y = p.y.pixels;

	ConditionReport r;
	r.s_minus_size = Index(p.s_minus.size());
	r.s_plus_size = Index(p.s_plus.size());

	double sum_v = 0.0;
	for (Index j = 0; j < v.size(); ++j)
		if (active[j])
			sum_v += h[j] * v[j];

	double lhs = beta * sum_v;
	if (!p.s_minus.empty())
	{
		double worst = -std::numeric_limits<double>::infinity();
		double mass = 0.0;
		for (Index j : p.s_minus)
		{
			worst = std::max(worst, -v[j] / y[j]);
			mass += h[j] * x_next.pixels[j];
		}
		r.b_minus = cfg.bound_estimate == BoundEstimate::count_fraction
		                ? std::max(cfg.rho + mass, double(r.s_minus_size) / n * total)
		                : cfg.rho + mass;
		lhs += beta * worst * r.b_minus;
	}
	if (!p.s_plus.empty())
	{
		double least = std::numeric_limits<double>::infinity();
		double mass = 0.0;
		for (Index j : p.s_plus)
		{
			least = std::min(least, v[j] / y[j]);
			mass += h[j] * x_next.pixels[j];
		}
		r.b_plus = cfg.bound_estimate == BoundEstimate::count_fraction
		               ? std::min(mass, double(r.s_plus_size) / n * total)
		               : mass;
		lhs -= beta * least * r.b_plus;
	}

	r.kl_before = std::isfinite(kl_y) ? kl_y : kl_objective(w, p.y);
	r.kl_after = kl_objective(w, x_next);
	r.kl_current = state.kl;
	r.lhs = lhs;
	r.rhs = r.kl_before - r.kl_after;
	r.phi_before = p.phi_before;
	r.phi_after = p.phi_after;
	r.phi_decreased = p.phi_after <= p.phi_before;
	r.inequality_holds = r.lhs < r.rhs;
	r.kl_decreased = r.kl_after < r.kl_current;
	r.satisfied = r.inequality_holds && (r.phi_decreased || !checks_phi(cfg.variant));
	return r;
}

ConditionReport check_condition_alg2(const EmWorkspace& w, const PerturbationProposal& p, const ImageGrid& x_next,
                                     const ReconState& state, const SuperiorizerConfig& cfg)
{
	ConditionReport r;
	r.lhs = r.rhs = kNotAvailable;
	r.kl_before = kNotAvailable;
	r.s_minus_size = Index(p.s_minus.size());
	r.s_plus_size = Index(p.s_plus.size());
	r.kl_after = kl_objective(w, x_next);
	r.kl_current = state.kl;
	r.phi_before = p.phi_before;
	r.phi_after = p.phi_after;
	r.phi_decreased = p.phi_after <= p.phi_before;
	r.kl_decreased = r.kl_after < r.kl_current;
	r.satisfied = r.kl_decreased && (r.phi_decreased || !checks_phi(cfg.variant));
	return r;
}

Trajectory run_superiorized(EmWorkspace& w, const ImageGrid& x0, const SuperiorizerConfig& cfg)
{
	cfg.validate();
	const auto& active = w.matrix().active();
	const bool alg1 = is_alg1(cfg.variant);

	ReconState s;
	s.x = x0;
	for (Index j = 0; j < s.x.size(); ++j)
	{
		if (!active[j])
			s.x.pixels[j] = 0.0;
		else if (!(s.x.pixels[j] > 0.0))
			throw std::invalid_argument("run_superiorized: x0 must be positive on active columns");
	}
	s.kl = kl_objective(w, s.x);
	s.beta = cfg.beta0;

	Trajectory t;
	t.rows.push_back({.k = 0, .kl = s.kl, .beta = s.beta, .accepted_variant = "initial"});
	t.iterates.push_back(s.x);

	for (int k = 0; k < cfg.max_outer_iters; ++k)
	{
		if (cfg.beta_stop_threshold > 0.0 && s.beta < cfg.beta_stop_threshold)
			break;
		TrajectoryRow row;
		row.k = k + 1;
		ImageGrid next;

		if (s.beta == 0.0)
		{
			next = em_step(w, s.x);
			row.kl = kl_objective(w, next);
			row.accepted_variant = "em";
		}
		else
		{
			s.phi = phi_value(s.x, cfg);
			bool accepted = false;
			int tries = 0;
			while (tries < cfg.max_inner_tries)
			{
				++tries;
				const PerturbationProposal p = propose(s.x, s.beta, cfg, active);
				ImageGrid candidate = em_step(w, p.y);
				ConditionReport rep;
				if (alg1)
				{
					// em_step leaves A y in the workspace.
					const double kl_y = kl_distance(w.data().values, w.ray_sums());
					rep = check_condition_alg1(w, p, candidate, s, cfg, kl_y);
				}
				else
				{
					rep = check_condition_alg2(w, p, candidate, s, cfg);
				}
				if (rep.satisfied)
				{
					accepted = true;
					next = std::move(candidate);
					row.kl = rep.kl_after;
					row.beta = s.beta;
					row.condition_lhs = rep.lhs;
					row.condition_rhs = rep.rhs;
					row.accepted_variant = std::string(to_string(cfg.variant));
					if (!alg1)
					{
						const double drop = s.kl > 0.0 ? (s.kl - rep.kl_after) / s.kl : 0.0;
						if (drop < cfg.q1)
							s.beta *= cfg.gamma;
					}
					break;
				}
				s.beta *= cfg.gamma;
			}
			row.inner_tries = tries;
			if (!accepted)
			{
				next = em_step(w, s.x);
				row.kl = kl_objective(w, next);
				row.beta = s.beta;
				row.accepted_variant = "fallback";
			}
		}
		s.x = std::move(next);
		s.kl = row.kl;
		s.k = k + 1;
		t.rows.push_back(row);
		t.iterates.push_back(s.x);
	}
	return t;
}

}  // namespace superem
