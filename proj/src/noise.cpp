#include "superem/noise.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/poisson_distribution.hpp>

#include <stdexcept>

namespace superem {

Sinogram simulate_counts(const Sinogram& noise_free, std::int64_t target_counts, std::uint64_t seed)
{
	if (target_counts <= 0)
		throw std::invalid_argument("simulate_counts: target counts must be positive");
	if ((noise_free.values.array() < 0.0).any())
		throw std::invalid_argument("simulate_counts: negative projection value");
	const double total = noise_free.total();
	if (!(total > 0.0))
		throw std::invalid_argument("simulate_counts: projection data is all zero");

	const double scale = double(target_counts) / total;
	boost::random::mt19937_64 rng(seed);
	Sinogram out = noise_free;
	for (Eigen::Index i = 0; i < out.size(); ++i)
	{
		const double mean = noise_free.values[i] * scale;
		if (mean <= 0.0)
		{
			out.values[i] = 0.0;
			continue;
		}
		boost::random::poisson_distribution<std::int64_t, double> draw(mean);
		out.values[i] = double(draw(rng));
	}
	return out;
}

}  // namespace superem
