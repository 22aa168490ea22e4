#include "superem/projector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace superem {

std::vector<double> bin_centers(int num_bins, double extent)
{
	std::vector<double> s(static_cast<std::size_t>(num_bins));
	const double width = 2.0 * extent / num_bins;
	for (int k = 0; k < num_bins; ++k)
		s[std::size_t(k)] = -extent + (k + 0.5) * width;
	return s;
}

std::vector<RaySegment> trace_ray(const ImageGrid& grid, double s, double phi)
{
	const double e = grid.extent;
	const double ox = s * std::cos(phi);
	const double oy = s * std::sin(phi);
	const double dx = -std::sin(phi);
	const double dy = std::cos(phi);
	constexpr double tiny = 1e-14;

	// Slab clipping against [-e, e]^2.
	double t0 = -std::numeric_limits<double>::infinity();
	double t1 = std::numeric_limits<double>::infinity();
	auto clip = [&](double o, double d) {
		if (std::abs(d) < tiny)
			return std::abs(o) <= e;
		double a = (-e - o) / d;
		double b = (e - o) / d;
		if (a > b)
			std::swap(a, b);
		t0 = std::max(t0, a);
		t1 = std::min(t1, b);
		return true;
	};
	if (!clip(ox, dx) || !clip(oy, dy) || !(t1 > t0))
		return {};

	std::vector<double> ts;
	ts.reserve(std::size_t(grid.width + grid.height + 2));
	ts.push_back(t0);
	ts.push_back(t1);
	const double pw = grid.pixel_width();
	const double ph = grid.pixel_height();
	if (std::abs(dx) >= tiny)
		for (int k = 1; k < grid.width; ++k)
		{
			const double t = (-e + k * pw - ox) / dx;
			if (t > t0 && t < t1)
				ts.push_back(t);
		}
	if (std::abs(dy) >= tiny)
		for (int k = 1; k < grid.height; ++k)
		{
			const double t = (-e + k * ph - oy) / dy;
			if (t > t0 && t < t1)
				ts.push_back(t);
		}
	std::sort(ts.begin(), ts.end());

	std::vector<RaySegment> segments;
	segments.reserve(ts.size());
	const double min_length = 1e-12 * std::min(pw, ph);
	for (std::size_t k = 0; k + 1 < ts.size(); ++k)
	{
		const double len = ts[k + 1] - ts[k];
		if (len <= min_length)
			continue;
		const double tm = 0.5 * (ts[k] + ts[k + 1]);
		const double x = ox + tm * dx;
		const double y = oy + tm * dy;
		const int col = std::clamp(int(std::floor((x + e) / pw)), 0, grid.width - 1);
		const int row = std::clamp(int(std::floor((e - y) / ph)), 0, grid.height - 1);
		segments.push_back({Index(row) * grid.width + col, len, ts[k], ts[k + 1]});
	}
	return segments;
}

SystemMatrix build_system_matrix(const ImageGrid& attenuation, const AcquisitionSpec& acq)
{
	acq.validate();
	if ((attenuation.pixels.array() < 0.0).any())
		throw std::invalid_argument("build_system_matrix: attenuation must be nonnegative");

	const auto angles = acq.view_angles();
	const auto bins = bin_centers(acq.num_bins, attenuation.extent);
	SinogramShape shape{acq.num_views, acq.num_bins, angles};

	std::vector<SystemMatrix::Triplet> entries;
	entries.reserve(std::size_t(acq.num_views) * acq.num_bins * std::size_t(attenuation.width) * 2);
	std::vector<double> downstream;
	for (int v = 0; v < acq.num_views; ++v)
		for (int b = 0; b < acq.num_bins; ++b)
		{
			const Index row = Index(v) * acq.num_bins + b;
			const auto segments = trace_ray(attenuation, bins[std::size_t(b)], angles[std::size_t(v)]);
			// Attenuation accumulated from the detector end backwards.
			downstream.assign(segments.size(), 0.0);
			double tail = 0.0;
			for (std::size_t k = segments.size(); k-- > 0;)
			{
				const double mu_len = attenuation.pixels[segments[k].pixel] * segments[k].length;
				downstream[k] = tail + 0.5 * mu_len;
				tail += mu_len;
			}
			for (std::size_t k = 0; k < segments.size(); ++k)
			{
				const double a = segments[k].length * std::exp(-downstream[k]);
				if (a > 0.0)
					entries.emplace_back(row, segments[k].pixel, a);
			}
		}
	return SystemMatrix::from_triplets(shape.size(), attenuation.size(), entries, std::move(shape));
}

}  // namespace superem
