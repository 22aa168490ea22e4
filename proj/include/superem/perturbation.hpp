#pragma once

#include "superem/image.hpp"
#include "superem/system_matrix.hpp"
#include "superem/wavelet.hpp"

#include <cmath>
#include <vector>

namespace superem {

/// Isotropic total variation over the interior differences:
/// sum_{r < H-1, c < W-1} sqrt((x[r+1,c]-x[r,c])^2 + (x[r,c+1]-x[r,c])^2).
/// The last row and column only enter as forward neighbours.
template <typename Scalar>
Scalar tv_value(const BasicImage<Scalar>& x)
{
	Scalar sum = 0;
	for (int r = 0; r + 1 < x.height; ++r)
		for (int c = 0; c + 1 < x.width; ++c)
		{
			const Scalar a = x.at(r + 1, c) - x.at(r, c);
			const Scalar b = x.at(r, c + 1) - x.at(r, c);
			sum += std::sqrt(a * a + b * b);
		}
	return sum;
}

/// Normalized negative TV subgradient, v = s / |s|_inf (v = 0 when s = 0).
/// Terms whose squared gradient falls below eps^2 use eps as their magnitude.
ImageGrid tv_direction(const ImageGrid& x, double smoothing_eps = 1e-8);

enum class ThresholdMode
{
	hard,
	soft
};

/// Coefficient shrinkage at level beta. Hard keeps |a| >= beta, zeroes the rest;
/// soft maps a -> a - sign(a) beta for |a| >= beta, zero otherwise.
CoefficientPyramid threshold_coeffs(CoefficientPyramid c, double beta, ThresholdMode mode);

/// y_j = y_raw_j where positive, x_j / 2 elsewhere; masked columns are 0.
/// An empty mask means every column is active.
ImageGrid repair_positivity(const ImageGrid& x, const ImageGrid& y_raw, const ColumnMask& active = {});

struct PerturbationProposal
{
	ImageGrid y;
	/// Realized direction (y - x) / beta; zero when beta = 0.
	ImageGrid v;
	double beta = 0.0;
	std::vector<Index> s_minus;
	std::vector<Index> s_plus;
	double phi_before = 0.0;
	double phi_after = 0.0;
	/// Objective of the candidate before the positivity repair.
	double phi_raw = 0.0;
};

/// TV perturbation y = repair(x + beta v), v from tv_direction.
PerturbationProposal propose_tv(const ImageGrid& x, double beta, const ColumnMask& active = {},
                                double smoothing_eps = 1e-8);

/// Wavelet-l1 perturbation y = repair(idwt2(threshold(dwt2(x), beta))).
PerturbationProposal propose_l1(const ImageGrid& x, double beta, ThresholdMode mode, const WaveletSpec& spec,
                                const ColumnMask& active = {});

}  // namespace superem
