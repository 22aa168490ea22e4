#include "superem/em.hpp"

#include "superem/kl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace superem {

EmWorkspace::EmWorkspace(const SystemMatrix& a, Sinogram b, double floor_scale) : a_(&a), b_(std::move(b))
{
	if (b_.size() != a.rows())
		throw std::invalid_argument("EmWorkspace: sinogram has " + std::to_string(b_.size()) +
		                            " bins, matrix has " + std::to_string(a.rows()) + " rows");
	if ((b_.values.array() < 0.0).any())
		throw std::invalid_argument("EmWorkspace: measured data must be nonnegative");
	if (!(floor_scale > 0.0))
		throw std::invalid_argument("EmWorkspace: floor scale must be positive");
	total_ = b_.total();
	floor_ = std::max(floor_scale * total_ / double(b_.size()), std::numeric_limits<double>::min());
}

const Eigen::VectorXd& EmWorkspace::back_ratio(const ImageGrid& x)
{
	d_ = a_->forward(x.pixels);
	ratio_.resize(d_.size());
	for (Index i = 0; i < d_.size(); ++i)
	{
		const double b = b_.values[i];
		ratio_[i] = b > 0.0 ? b / std::max(d_[i], floor_) : 0.0;
	}
	back_ = a_->back(ratio_);
	return back_;
}

namespace {

void require_valid(const EmWorkspace& w, const ImageGrid& x)
{
	if (x.size() != w.matrix().cols())
		throw std::invalid_argument("image has " + std::to_string(x.size()) + " pixels, matrix has " +
		                            std::to_string(w.matrix().cols()) + " columns");
	if ((x.pixels.array() < 0.0).any())
		throw std::invalid_argument("EM iterate has a negative pixel");
}

}  // namespace

ImageGrid em_step(EmWorkspace& w, const ImageGrid& x)
{
	require_valid(w, x);
	const auto& back = w.back_ratio(x);
	const auto& h = w.matrix().column_sums();
	const auto& active = w.matrix().active();
	ImageGrid next = x;
	for (Index j = 0; j < x.size(); ++j)
		next.pixels[j] = active[j] ? x.pixels[j] * back[j] / h[j] : 0.0;
	return next;
}

Eigen::VectorXd em_factors(EmWorkspace& w, const ImageGrid& x)
{
	require_valid(w, x);
	const auto& back = w.back_ratio(x);
	const auto& h = w.matrix().column_sums();
	return w.matrix().active().select(back.cwiseQuotient(h), 0.0);
}

double kl_objective(const EmWorkspace& w, const ImageGrid& x)
{
	require_valid(w, x);
	return kl_distance(w.data().values, w.matrix().forward(x.pixels));
}

Eigen::VectorXd kl_gradient(EmWorkspace& w, const ImageGrid& x)
{
	const auto f = em_factors(w, x);
	const auto& h = w.matrix().column_sums();
	return h.cwiseProduct((Eigen::VectorXd::Ones(f.size()) - f));
}

std::vector<EmIterate> run_classic_em(EmWorkspace& w, const ImageGrid& x0, int iters)
{
	if (iters < 1)
		throw std::invalid_argument("run_classic_em: need at least one iteration");
	std::vector<EmIterate> out;
	out.reserve(std::size_t(iters) + 1);
	ImageGrid x = x0;
	for (Index j = 0; j < x.size(); ++j)
		if (!w.matrix().active()[j])
			x.pixels[j] = 0.0;
	out.push_back({x, kl_objective(w, x)});
	for (int k = 0; k < iters; ++k)
	{
		x = em_step(w, x);
		out.push_back({x, kl_objective(w, x)});
	}
	return out;
}

double fixed_point_residual(EmWorkspace& w, const ImageGrid& x)
{
	const ImageGrid p = em_step(w, x);
	return kl_distance_masked(p.pixels, x.pixels, w.matrix().active());
}

double weighted_image_kl(const SystemMatrix& a, const ImageGrid& p, const ImageGrid& q)
{
	require_same_shape(p, q);
	const auto& h = a.column_sums();
	double sum = 0.0;
	for (Index j = 0; j < p.size(); ++j)
		if (a.active()[j])
			sum += h[j] * kl_term(p.pixels[j], q.pixels[j]);
	return sum;
}

double KtReport::max_violation() const
{
	return std::max(support_violation, std::max(zero_set_violation, 0.0));
}

KtReport kt_check(EmWorkspace& w, const ImageGrid& x, double tol)
{
	const auto f = em_factors(w, x);
	const auto& active = w.matrix().active();
	KtReport r;
	double zero_max = -std::numeric_limits<double>::infinity();
	for (Index j = 0; j < x.size(); ++j)
	{
		if (!active[j])
			continue;
		if (x.pixels[j] > tol)
		{
			r.support_violation = std::max(r.support_violation, std::abs(f[j] - 1.0));
			++r.support_size;
		}
		else
		{
			zero_max = std::max(zero_max, f[j] - 1.0);
			++r.zero_set_size;
		}
	}
	r.zero_set_violation = r.zero_set_size ? zero_max : 0.0;
	return r;
}

}  // namespace superem
