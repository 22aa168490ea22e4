#pragma once

#include "superem/image.hpp"
#include "superem/sinogram.hpp"

#include <array>
#include <cstdint>
#include <numbers>
#include <utility>

namespace superem {

struct Ellipse
{
	double cx = 0, cy = 0;
	double semi_x = 1, semi_y = 1;

	bool contains(double x, double y) const
	{
		const double u = (x - cx) / semi_x;
		const double v = (y - cy) / semi_y;
		return u * u + v * v <= 1.0;
	}
};

struct Ring
{
	double cx = 0, cy = 0;
	double inner_diameter = 0, outer_diameter = 1;

	bool contains(double x, double y) const
	{
		const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
		return r2 >= 0.25 * inner_diameter * inner_diameter && r2 <= 0.25 * outer_diameter * outer_diameter;
	}
};

struct Circle
{
	double cx = 0, cy = 0;
	double diameter = 1;

	bool contains(double x, double y) const
	{
		const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
		return r2 <= 0.25 * diameter * diameter;
	}
};

struct RegionValues
{
	double outside = 0;
	double body = 0;
	double lung = 0;
	double bone = 0;
	double myocardium = 0;
};

/// Thorax phantom: body ellipse containing two lungs, two bones and a myocardial ring.
/// Coordinates in cm, y pointing up. Layering: body < lungs/bones < ring.
///
/// Default sizes: body axes 30 x 22.5 cm, lung axes 8.8 x 10 cm, ring diameters 6/8 cm,
/// bone diameter 2.5 cm. Region centers are a free choice: lungs symmetric, the ring
/// just left of the midline below the lung centers, bones as sternum and spine.
struct PhantomSpec
{
	Ellipse body{0.0, 0.0, 15.0, 11.25};
	std::array<Ellipse, 2> lungs{Ellipse{-7.0, 2.0, 4.4, 5.0}, Ellipse{7.0, 2.0, 4.4, 5.0}};
	Ring myocardium{-0.5, -4.0, 6.0, 8.0};
	std::array<Circle, 2> bones{Circle{0.0, 9.0, 2.5}, Circle{0.0, -9.5, 2.5}};

	/// Myocardium : background : lung = 3 : 2 : 1; bone carries background activity.
	RegionValues activity{0.0, 2.0, 1.0, 2.0, 3.0};
	/// Linear attenuation coefficients, cm^-1.
	RegionValues attenuation{0.0, 0.15, 0.03, 0.17, 0.15};

	/// Throws std::invalid_argument on nonpositive axes/diameters or inner >= outer ring.
	void validate() const;
};

struct GridSpec
{
	int width = 128;
	int height = 128;
	double extent = 15.0;  // half-width of the field of view, cm
};

/// Parallel-beam acquisition over `angular_range` with views phi_l = l * range / N0.
struct AcquisitionSpec
{
	int num_views = 60;
	double angular_range = std::numbers::pi;
	int num_bins = 128;
	std::int64_t target_counts = 500000;
	std::uint64_t seed = 1;

	std::vector<double> view_angles() const;
	void validate() const;
};

struct PhantomImages
{
	ImageGrid activity;
	ImageGrid attenuation;
};

/// Samples each region at pixel centers.
PhantomImages rasterize_phantom(const PhantomSpec& spec, const GridSpec& grid);

}  // namespace superem
