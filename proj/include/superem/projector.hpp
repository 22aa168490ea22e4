#pragma once

#include "superem/image.hpp"
#include "superem/phantom.hpp"
#include "superem/system_matrix.hpp"

#include <vector>

namespace superem {

/// One pixel crossing of a ray. `t_enter`/`t_exit` are positions along the ray
/// direction theta_perp = (-sin phi, cos phi).
struct RaySegment
{
	Index pixel;
	double length;
	double t_enter;
	double t_exit;
};

/// Exact ray/pixel intersection for the line s*theta + t*theta_perp through an
/// image grid, segments ordered by increasing t (towards the detector).
std::vector<RaySegment> trace_ray(const ImageGrid& grid, double s, double phi);

/// Detector bin centers: num_bins equal bins spanning [-extent, extent].
std::vector<double> bin_centers(int num_bins, double extent);

/// Attenuated parallel-beam system matrix.
///
/// a_ij = l_ij * exp(-(mu_j l_ij / 2 + sum of mu * length over the pixels ray i
/// crosses after j)), i.e. the attenuation line integral from the middle of pixel
/// j's chord to the detector at t = +inf. Row i = view * num_bins + bin.
SystemMatrix build_system_matrix(const ImageGrid& attenuation, const AcquisitionSpec& acq);

}  // namespace superem
