#pragma once

#include "superem/image.hpp"
#include "superem/sinogram.hpp"
#include "superem/system_matrix.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace superem::testing {

/// Seeded generators for property tests.
class Gen
{
public:
	explicit Gen(std::uint64_t seed) : rng_(seed) {}

	double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
	int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
	bool coin(double p) { return uniform(0.0, 1.0) < p; }

	Eigen::VectorXd vector(Index n, double lo, double hi)
	{
		Eigen::VectorXd v(n);
		for (Index i = 0; i < n; ++i)
			v[i] = uniform(lo, hi);
		return v;
	}

	ImageGrid image(int w, int h, double lo, double hi) { return ImageGrid(w, h, 1.0, vector(Index(w) * h, lo, hi)); }

	/// Random nonnegative M x N matrix with no zero row or column. With
	/// `unit_columns` every column is rescaled to sum to 1.
	Eigen::MatrixXd dense_matrix(int m, int n, double density, bool unit_columns)
	{
		Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n);
		for (int i = 0; i < m; ++i)
			for (int j = 0; j < n; ++j)
				if (coin(density))
					a(i, j) = uniform(0.05, 2.0);
		for (int i = 0; i < m; ++i)
			if (a.row(i).sum() == 0.0)
				a(i, integer(0, n - 1)) = uniform(0.05, 2.0);
		for (int j = 0; j < n; ++j)
			if (a.col(j).sum() == 0.0)
				a(integer(0, m - 1), j) = uniform(0.05, 2.0);
		if (unit_columns)
			for (int j = 0; j < n; ++j)
				a.col(j) /= a.col(j).sum();
		return a;
	}

	/// Poisson-like integer counts around `mean`, zeros included.
	Eigen::VectorXd counts(Index m, double mean)
	{
		Eigen::VectorXd b(m);
		for (Index i = 0; i < m; ++i)
			b[i] = double(std::poisson_distribution<int>(mean * uniform(0.2, 1.8))(rng_));
		return b;
	}

	std::mt19937_64& engine() { return rng_; }

private:
	std::mt19937_64 rng_;
};

/// Flat single-view sinogram holding `v`.
inline Sinogram flat(const Eigen::VectorXd& v)
{
	return Sinogram::flat(v);
}

inline ImageGrid column(const Eigen::VectorXd& v)
{
	return ImageGrid(1, int(v.size()), 1.0, v);
}

inline double rel_diff(double a, double b)
{
	return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace superem::testing
