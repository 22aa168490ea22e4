#pragma once

#include "superem/em.hpp"
#include "superem/image.hpp"

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace superem {

inline constexpr double kNotAvailable = std::numeric_limits<double>::quiet_NaN();

/// One logged iterate. `accepted_variant` is "initial", "em", "fallback" or the
/// name of the variant whose condition accepted the step.
struct TrajectoryRow
{
	int k = 0;
	double kl = kNotAvailable;
	double tv = kNotAvailable;
	double l1 = kNotAvailable;
	double mse = kNotAvailable;
	double beta = 0.0;
	int inner_tries = 0;
	double condition_lhs = kNotAvailable;
	double condition_rhs = kNotAvailable;
	std::string accepted_variant;
};

/// Rows plus the iterates they describe (rows[k] <-> iterates[k]).
struct Trajectory
{
	std::vector<TrajectoryRow> rows;
	std::vector<ImageGrid> iterates;

	const ImageGrid& final_image() const { return iterates.back(); }
};

/// Classic EM in trajectory form (beta = 0 on every row).
Trajectory classic_trajectory(EmWorkspace& w, const ImageGrid& x0, int iters);

/// CSV columns: k,kl,tv,l1,mse,beta,inner_tries,condition_lhs,condition_rhs,accepted_variant.
/// Unavailable values are written as empty cells.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t);
std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path);

}  // namespace superem
