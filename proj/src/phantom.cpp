#include "superem/phantom.hpp"

#include <stdexcept>
#include <string>

namespace superem {

namespace {

void require_positive(double v, const char* what)
{
	if (!(v > 0.0))
		throw std::invalid_argument(std::string("phantom: ") + what + " must be positive");
}

}  // namespace

void PhantomSpec::validate() const
{
	require_positive(body.semi_x, "body semi-axis");
	require_positive(body.semi_y, "body semi-axis");
	for (const auto& l : lungs)
	{
		require_positive(l.semi_x, "lung semi-axis");
		require_positive(l.semi_y, "lung semi-axis");
	}
	for (const auto& b : bones)
		require_positive(b.diameter, "bone diameter");
	require_positive(myocardium.outer_diameter, "ring outer diameter");
	if (myocardium.inner_diameter < 0.0 || myocardium.inner_diameter >= myocardium.outer_diameter)
		throw std::invalid_argument("phantom: ring needs 0 <= inner diameter < outer diameter");
	for (double v : {activity.outside, activity.body, activity.lung, activity.bone, activity.myocardium,
	                 attenuation.outside, attenuation.body, attenuation.lung, attenuation.bone,
	                 attenuation.myocardium})
		if (!(v >= 0.0))
			throw std::invalid_argument("phantom: region values must be nonnegative");
}

std::vector<double> AcquisitionSpec::view_angles() const
{
	std::vector<double> angles(static_cast<std::size_t>(num_views));
	for (int l = 0; l < num_views; ++l)
		angles[std::size_t(l)] = angular_range * l / num_views;
	return angles;
}

void AcquisitionSpec::validate() const
{
	if (num_views <= 0 || num_bins <= 0)
		throw std::invalid_argument("acquisition: views and bins must be positive");
	if (!(angular_range > 0.0))
		throw std::invalid_argument("acquisition: angular range must be positive");
	if (target_counts <= 0)
		throw std::invalid_argument("acquisition: target counts must be positive");
}

PhantomImages rasterize_phantom(const PhantomSpec& spec, const GridSpec& grid)
{
	spec.validate();
	if (grid.width < 8 || grid.height < 8)
		throw std::invalid_argument("phantom: grid must be at least 8x8");
	if (!(grid.extent > 0.0))
		throw std::invalid_argument("phantom: grid extent must be positive");

	PhantomImages out{ImageGrid(grid.width, grid.height, grid.extent), ImageGrid(grid.width, grid.height, grid.extent)};
	for (int r = 0; r < grid.height; ++r)
	{
		const double y = out.activity.center_y(r);
		for (int c = 0; c < grid.width; ++c)
		{
			const double x = out.activity.center_x(c);
			double act = spec.activity.outside;
			double mu = spec.attenuation.outside;
			if (spec.body.contains(x, y))
			{
				act = spec.activity.body;
				mu = spec.attenuation.body;
				for (const auto& l : spec.lungs)
					if (l.contains(x, y))
					{
						act = spec.activity.lung;
						mu = spec.attenuation.lung;
					}
				for (const auto& b : spec.bones)
					if (b.contains(x, y))
					{
						act = spec.activity.bone;
						mu = spec.attenuation.bone;
					}
				if (spec.myocardium.contains(x, y))
				{
					act = spec.activity.myocardium;
					mu = spec.attenuation.myocardium;
				}
			}
			out.activity.at(r, c) = act;
			out.attenuation.at(r, c) = mu;
		}
	}
	return out;
}

}  // namespace superem
