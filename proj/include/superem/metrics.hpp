#pragma once

#include "superem/image.hpp"

#include <cmath>
#include <stdexcept>

namespace superem {

/// (1/N) sum_j (x_j - x*_j)^2.
template <typename Scalar>
Scalar mse(const BasicImage<Scalar>& x, const BasicImage<Scalar>& ref)
{
	require_same_shape(x, ref);
	return (x.pixels - ref.pixels).squaredNorm() / Scalar(x.size());
}

/// sqrt(sum (x - x*)^2 / sum x*^2). Throws std::domain_error for an all-zero reference.
template <typename Scalar>
Scalar rmse(const BasicImage<Scalar>& x, const BasicImage<Scalar>& ref)
{
	require_same_shape(x, ref);
	const Scalar denom = ref.pixels.squaredNorm();
	if (!(denom > Scalar(0)))
		throw std::domain_error("rmse: reference image is zero");
	return std::sqrt((x.pixels - ref.pixels).squaredNorm() / denom);
}

}  // namespace superem
