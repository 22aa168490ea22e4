#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace superem {

/// Raised when b_i > 0 meets d_i = 0: the divergence is +infinity.
class InfiniteDistance : public std::domain_error
{
public:
	using std::domain_error::domain_error;
};

namespace detail {

/// u - log(1+u) for u > -1, accurate to a few ulps including near u = 0.
inline double u_minus_log1p(double u)
{
	if (std::abs(u) < 0.05)
	{
		// Alternating series sum_{n>=2} (-1)^n u^n / n, truncated well below eps.
		double term = u * u;
		double sum = 0.0;
		for (int n = 2; n < 40; ++n)
		{
			const double add = term / n;
			sum += (n % 2 == 0) ? add : -add;
			if (std::abs(add) <= 1e-18 * std::abs(sum))
				break;
			term *= u;
		}
		return sum;
	}
	return u - std::log1p(u);
}

}  // namespace detail

/// One term of the generalized Kullback-Leibler divergence,
/// b ln(b/d) - b + d, with 0 ln(0/d) = 0. Always >= 0.
inline double kl_term(double b, double d)
{
	if (b <= 0.0)
		return d;
	if (d <= 0.0)
		throw InfiniteDistance("kl_distance: b_i > 0 with d_i = 0");
	return b * detail::u_minus_log1p((d - b) / b);
}

/// Generalized K-L distance I(b, d) = sum_i b_i ln(b_i/d_i) - b_i + d_i.
///
/// Terms are evaluated in the cancellation-free form b (u - ln(1+u)), u = (d-b)/b,
/// so every summand is nonnegative and the reduction order is fixed.
template <typename DerivedB, typename DerivedD>
double kl_distance(const Eigen::DenseBase<DerivedB>& b, const Eigen::DenseBase<DerivedD>& d)
{
	if (b.size() != d.size())
		throw std::invalid_argument("kl_distance: size mismatch (" + std::to_string(b.size()) + " vs " +
		                            std::to_string(d.size()) + ")");
	double sum = 0.0;
	for (Eigen::Index i = 0; i < b.size(); ++i)
		sum += kl_term(double(b.derived().coeff(i)), double(d.derived().coeff(i)));
	return sum;
}

/// K-L distance restricted to entries where `mask` is true.
template <typename DerivedB, typename DerivedD, typename DerivedM>
double kl_distance_masked(const Eigen::DenseBase<DerivedB>& b, const Eigen::DenseBase<DerivedD>& d,
                          const Eigen::DenseBase<DerivedM>& mask)
{
	if (b.size() != d.size() || b.size() != mask.size())
		throw std::invalid_argument("kl_distance_masked: size mismatch");
	double sum = 0.0;
	for (Eigen::Index i = 0; i < b.size(); ++i)
		if (mask.derived().coeff(i))
			sum += kl_term(double(b.derived().coeff(i)), double(d.derived().coeff(i)));
	return sum;
}

}  // namespace superem
