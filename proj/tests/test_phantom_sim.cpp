#include "support.hpp"

#include "superem/noise.hpp"
#include "superem/phantom.hpp"
#include "superem/projector.hpp"

#include <doctest.h>

#include <numbers>
#include <set>

using namespace superem;
using superem::testing::Gen;

namespace {

// Length of the line {s theta + t theta_perp} inside [-e, e]^2 (Liang-Barsky).
double square_chord(double s, double phi, double e)
{
	const double ox = s * std::cos(phi), oy = s * std::sin(phi);
	const double d[2] = {-std::sin(phi), std::cos(phi)};
	const double o[2] = {ox, oy};
	double lo = -1e300, hi = 1e300;
	for (int k = 0; k < 2; ++k)
	{
		if (std::abs(d[k]) < 1e-15)
		{
			if (std::abs(o[k]) > e)
				return 0.0;
			continue;
		}
		const double a = (-e - o[k]) / d[k], b = (e - o[k]) / d[k];
		lo = std::max(lo, std::min(a, b));
		hi = std::min(hi, std::max(a, b));
	}
	return std::max(0.0, hi - lo);
}

AcquisitionSpec acquisition(int views, int bins, double range = std::numbers::pi)
{
	AcquisitionSpec acq;
	acq.num_views = views;
	acq.num_bins = bins;
	acq.angular_range = range;
	return acq;
}

}  // namespace

TEST_CASE("default phantom: activity levels and body-center attenuation")
{
	const auto p = rasterize_phantom(PhantomSpec{}, GridSpec{128, 128, 15.0});
	std::set<double> values(p.activity.pixels.begin(), p.activity.pixels.end());
	CHECK(values == std::set<double>{0.0, 1.0, 2.0, 3.0});

	// Pixel containing the body center.
	CHECK(p.attenuation.at(63, 63) == doctest::Approx(0.15));
	CHECK(p.attenuation.at(64, 64) == doctest::Approx(0.15));
	std::set<double> mus(p.attenuation.pixels.begin(), p.attenuation.pixels.end());
	CHECK(mus == std::set<double>{0.0, 0.03, 0.15, 0.17});
	// Corners lie outside the body.
	CHECK(p.activity.at(0, 0) == 0.0);
	CHECK(p.attenuation.at(127, 127) == 0.0);
}

TEST_CASE("default phantom layering")
{
	PhantomSpec spec;
	const GridSpec grid{128, 128, 15.0};
	const auto p = rasterize_phantom(spec, grid);
	for (int r = 0; r < grid.height; ++r)
		for (int c = 0; c < grid.width; ++c)
		{
			const double x = p.activity.center_x(c), y = p.activity.center_y(r);
			double expected = 0.0;
			if (spec.body.contains(x, y))
				expected = 2.0;
			if (spec.lungs[0].contains(x, y) || spec.lungs[1].contains(x, y))
				expected = 1.0;
			if (spec.bones[0].contains(x, y) || spec.bones[1].contains(x, y))
				expected = 2.0;
			if (spec.myocardium.contains(x, y))
				expected = 3.0;
			REQUIRE(p.activity.at(r, c) == expected);
		}
}

TEST_CASE("uniform-activity phantom is constant inside the body")
{
	PhantomSpec spec;
	spec.activity = RegionValues{0.0, 5.0, 5.0, 5.0, 5.0};
	const auto p = rasterize_phantom(spec, GridSpec{64, 64, 15.0});
	for (int r = 0; r < 64; ++r)
		for (int c = 0; c < 64; ++c)
		{
			const bool inside = spec.body.contains(p.activity.center_x(c), p.activity.center_y(r));
			CHECK(p.activity.at(r, c) == (inside ? 5.0 : 0.0));
		}
}

TEST_CASE("phantom errors")
{
	PhantomSpec bad;
	bad.body.semi_x = 0.0;
	CHECK_THROWS_AS(rasterize_phantom(bad, GridSpec{}), std::invalid_argument);
	PhantomSpec ring;
	ring.myocardium.inner_diameter = 9.0;
	CHECK_THROWS_AS(rasterize_phantom(ring, GridSpec{}), std::invalid_argument);
	CHECK_THROWS_AS(rasterize_phantom(PhantomSpec{}, GridSpec{4, 64, 15.0}), std::invalid_argument);
}

TEST_CASE("view angles are l * pi / N0")
{
	const auto angles = acquisition(60, 8).view_angles();
	REQUIRE(angles.size() == 60);
	CHECK(angles[0] == 0.0);
	CHECK(angles[59] == doctest::Approx(59.0 * std::numbers::pi / 60.0));
}

TEST_CASE("bin centers span the extent")
{
	const auto s = bin_centers(4, 2.0);
	CHECK(s == std::vector<double>{-1.5, -0.5, 0.5, 1.5});
}

TEST_CASE("trace_ray: ordered contiguous segments whose lengths sum to the chord")
{
	Gen g(21);
	const ImageGrid grid(17, 23, 3.0);
	for (int trial = 0; trial < 300; ++trial)
	{
		const double phi = g.uniform(0.0, std::numbers::pi);
		const double s = g.uniform(-4.0, 4.0);
		const auto segs = trace_ray(grid, s, phi);
		double sum = 0.0;
		for (std::size_t k = 0; k < segs.size(); ++k)
		{
			sum += segs[k].length;
			CHECK(segs[k].t_exit > segs[k].t_enter);
			if (k > 0)
				CHECK(segs[k].t_enter >= segs[k - 1].t_exit - 1e-12);
		}
		CHECK(sum == doctest::Approx(square_chord(s, phi, 3.0)).epsilon(1e-9));
	}
}

TEST_CASE("mu = 0: matrix rows are chord lengths")
{
	const ImageGrid mu(32, 32, 15.0, 0.0);
	const auto acq = acquisition(12, 40);
	const auto a = build_system_matrix(mu, acq);
	const auto angles = acq.view_angles();
	const auto bins = bin_centers(40, 15.0);
	const Eigen::VectorXd rows = a.forward(Eigen::VectorXd::Ones(mu.size()));
	for (int v = 0; v < 12; ++v)
		for (int b = 0; b < 40; ++b)
		{
			const double chord = square_chord(bins[std::size_t(b)], angles[std::size_t(v)], 15.0);
			CHECK(std::abs(rows[v * 40 + b] - chord) <= 1e-9);
		}
}

TEST_CASE("mu = 0: centered disk matches analytic chords within 2% RMS at 128x128")
{
	const double extent = 15.0, radius = 10.0;
	ImageGrid disk(128, 128, extent);
	for (int r = 0; r < 128; ++r)
		for (int c = 0; c < 128; ++c)
			if (std::hypot(disk.center_x(c), disk.center_y(r)) <= radius)
				disk.at(r, c) = 1.0;
	const auto acq = acquisition(16, 128);
	const auto a = build_system_matrix(ImageGrid(128, 128, extent, 0.0), acq);
	const Eigen::VectorXd p = project(a, disk).values;
	const auto bins = bin_centers(128, extent);
	double err2 = 0.0, ref2 = 0.0;
	for (int v = 0; v < 16; ++v)
		for (int b = 0; b < 128; ++b)
		{
			const double s = bins[std::size_t(b)];
			const double chord = std::abs(s) < radius ? 2.0 * std::sqrt(radius * radius - s * s) : 0.0;
			err2 += std::pow(p[v * 128 + b] - chord, 2);
			ref2 += chord * chord;
		}
	CHECK(std::sqrt(err2 / ref2) < 0.02);
}

TEST_CASE("uniform mu: horizontal ray matches (1 - exp(-mu L)) / mu within 1%")
{
	const double extent = 15.0, mu0 = 0.15, length = 2.0 * extent;
	const ImageGrid mu(128, 128, extent, mu0);
	// Views at 0 and pi/2; the second view's rays are horizontal.
	const auto acq = acquisition(2, 128);
	const auto a = build_system_matrix(mu, acq);
	const Eigen::VectorXd p = a.forward(Eigen::VectorXd::Ones(mu.size()));
	const double expected = (1.0 - std::exp(-mu0 * length)) / mu0;
	for (int b = 0; b < 128; b += 17)
		CHECK(std::abs(p[128 + b] - expected) / expected < 0.01);
}

TEST_CASE("pixel outside every ray is masked")
{
	const ImageGrid mu(9, 9, 1.0, 0.0);
	const auto a = build_system_matrix(mu, acquisition(1, 3));
	// Vertical rays at x = -2/3, 0, 2/3 cross pixel columns 1, 4 and 7 only.
	for (int c = 0; c < 9; ++c)
	{
		const bool hit = c == 1 || c == 4 || c == 7;
		for (int r = 0; r < 9; ++r)
		{
			CHECK(a.active()[r * 9 + c] == hit);
			CHECK((a.column_sums()[r * 9 + c] > 0.0) == hit);
		}
	}
}

TEST_CASE("raising attenuation never increases any entry")
{
	Gen g(22);
	const auto acq = acquisition(7, 12);
	for (int trial = 0; trial < 10; ++trial)
	{
		const ImageGrid mu = g.image(10, 10, 0.0, 0.3);
		ImageGrid more = mu;
		for (int k = 0; k < 5; ++k)
			more.pixels[g.integer(0, 99)] += g.uniform(0.0, 0.5);
		const Eigen::MatrixXd a = build_system_matrix(mu, acq).to_dense();
		const Eigen::MatrixXd b = build_system_matrix(more, acq).to_dense();
		CHECK((b.array() <= a.array()).all());
	}
}

TEST_CASE("build_system_matrix rejects negative attenuation")
{
	ImageGrid mu(8, 8, 1.0, 0.0);
	mu.pixels[3] = -0.1;
	CHECK_THROWS_AS(build_system_matrix(mu, acquisition(2, 4)), std::invalid_argument);
}

TEST_CASE("simulate_counts: total near target, zero bins stay zero, deterministic")
{
	const auto p = rasterize_phantom(PhantomSpec{}, GridSpec{64, 64, 15.0});
	const auto a = build_system_matrix(p.attenuation, acquisition(60, 64));
	Sinogram clean = project(a, p.activity);
	clean.values[5] = 0.0;
	const Sinogram b = simulate_counts(clean, 500000, 3);
	CHECK(std::abs(b.total() - 500000.0) <= 3.0 * std::sqrt(500000.0));
	CHECK(b.values[5] == 0.0);
	CHECK((b.values.array() == b.values.array().round()).all());
	const Sinogram c = simulate_counts(clean, 500000, 3);
	CHECK((b.values - c.values).cwiseAbs().maxCoeff() == 0.0);
	const Sinogram d = simulate_counts(clean, 500000, 4);
	CHECK((b.values - d.values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("simulate_counts: per-bin means over 200 draws")
{
	Gen g(23);
	const Sinogram clean = testing::flat(g.vector(16, 0.5, 2.0));
	const double target = 400.0;
	const Eigen::VectorXd mean = clean.values * (target / clean.total());
	Eigen::VectorXd sum = Eigen::VectorXd::Zero(16);
	for (std::uint64_t seed = 0; seed < 200; ++seed)
		sum += simulate_counts(clean, std::int64_t(target), 1000 + seed).values;
	const Eigen::VectorXd avg = sum / 200.0;
	for (Index i = 0; i < 16; ++i)
		CHECK(std::abs(avg[i] - mean[i]) <= 5.0 * std::sqrt(mean[i] / 200.0));
}

TEST_CASE("simulate_counts errors")
{
	CHECK_THROWS_AS(simulate_counts(testing::flat(Eigen::VectorXd::Zero(4)), 100, 1), std::invalid_argument);
	CHECK_THROWS_AS(simulate_counts(testing::flat(Eigen::VectorXd::Ones(4)), 0, 1), std::invalid_argument);
	CHECK_THROWS_AS(simulate_counts(testing::flat(-Eigen::VectorXd::Ones(4)), 10, 1), std::invalid_argument);
}
