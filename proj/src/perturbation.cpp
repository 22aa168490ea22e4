#include "superem/perturbation.hpp"

#include <algorithm>
#include <stdexcept>

namespace superem {

namespace {

bool is_active(const ColumnMask& active, Index j)
{
	return active.size() == 0 || active[j];
}

void require_mask(const ColumnMask& active, const ImageGrid& x)
{
	if (active.size() != 0 && active.size() != x.size())
		throw std::invalid_argument("column mask size does not match the image");
}

// Fills v = (y - x) / beta and the sign sets over active columns.
void finish_direction(PerturbationProposal& p, const ImageGrid& x, const ColumnMask& active)
{
	p.v = x.with_pixels(Eigen::VectorXd::Zero(x.size()));
	if (p.beta > 0.0)
		p.v.pixels = (p.y.pixels - x.pixels) / p.beta;
	for (Index j = 0; j < x.size(); ++j)
	{
		if (!is_active(active, j))
		{
			p.v.pixels[j] = 0.0;
			continue;
		}
		if (p.v.pixels[j] < 0.0)
			p.s_minus.push_back(j);
		else if (p.v.pixels[j] > 0.0)
			p.s_plus.push_back(j);
	}
}

}  // namespace

ImageGrid tv_direction(const ImageGrid& x, double smoothing_eps)
{
	ImageGrid grad = x.with_pixels(Eigen::VectorXd::Zero(x.size()));
	const double eps2 = smoothing_eps * smoothing_eps;
	for (int r = 0; r + 1 < x.height; ++r)
		for (int c = 0; c + 1 < x.width; ++c)
		{
			const double a = x.at(r + 1, c) - x.at(r, c);
			const double b = x.at(r, c + 1) - x.at(r, c);
			const double inv = 1.0 / std::sqrt(std::max(a * a + b * b, eps2));
			grad.at(r + 1, c) += a * inv;
			grad.at(r, c + 1) += b * inv;
			grad.at(r, c) -= (a + b) * inv;
		}
	const double peak = grad.pixels.cwiseAbs().maxCoeff();
	if (peak > 0.0)
		grad.pixels *= -1.0 / peak;
	else
		grad.pixels.setZero();
	return grad;
}

CoefficientPyramid threshold_coeffs(CoefficientPyramid c, double beta, ThresholdMode mode)
{
	if (!(beta >= 0.0))
		throw std::invalid_argument("threshold_coeffs: beta must be nonnegative");
	if (beta == 0.0)
		return c;
	c.coeffs = c.coeffs.unaryExpr([beta, mode](double a) {
		if (std::abs(a) < beta)
			return 0.0;
		return mode == ThresholdMode::hard ? a : a - std::copysign(beta, a);
	});
	return c;
}

ImageGrid repair_positivity(const ImageGrid& x, const ImageGrid& y_raw, const ColumnMask& active)
{
	require_same_shape(x, y_raw);
	require_mask(active, x);
	ImageGrid y = y_raw;
	for (Index j = 0; j < y.size(); ++j)
	{
		if (!is_active(active, j))
			y.pixels[j] = 0.0;
		else if (!(y.pixels[j] > 0.0))
			y.pixels[j] = 0.5 * x.pixels[j];
	}
	return y;
}

PerturbationProposal propose_tv(const ImageGrid& x, double beta, const ColumnMask& active, double smoothing_eps)
{
	if (!(beta >= 0.0))
		throw std::invalid_argument("propose_tv: beta must be nonnegative");
	require_mask(active, x);
	PerturbationProposal p;
	p.beta = beta;
	p.phi_before = tv_value(x);
	if (beta == 0.0)
	{
		p.y = x;
		p.phi_raw = p.phi_after = p.phi_before;
		finish_direction(p, x, active);
		return p;
	}
	const ImageGrid dir = tv_direction(x, smoothing_eps);
	const ImageGrid raw = x.with_pixels(x.pixels + beta * dir.pixels);
	p.phi_raw = tv_value(raw);
	p.y = repair_positivity(x, raw, active);
	p.phi_after = tv_value(p.y);
	finish_direction(p, x, active);
	return p;
}

PerturbationProposal propose_l1(const ImageGrid& x, double beta, ThresholdMode mode, const WaveletSpec& spec,
                                const ColumnMask& active)
{
	if (!(beta >= 0.0))
		throw std::invalid_argument("propose_l1: beta must be nonnegative");
	require_mask(active, x);
	PerturbationProposal p;
	p.beta = beta;
	const CoefficientPyramid coeffs = dwt2(x, spec);
	p.phi_before = l1_norm(coeffs);
	const CoefficientPyramid shrunk = threshold_coeffs(coeffs, beta, mode);
	p.phi_raw = l1_norm(shrunk);
	const ImageGrid raw = idwt2(shrunk, spec, x.extent);
	p.y = repair_positivity(x, raw, active);
	p.phi_after = wavelet_l1(p.y, spec);
	finish_direction(p, x, active);
	return p;
}

}  // namespace superem
