#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace superem {

/// Acquisition layout shared by sinograms and the rows of a system matrix.
struct SinogramShape
{
	int num_views = 1;
	int num_bins = 0;
	std::vector<double> angles;  // radians, one per view

	Eigen::Index size() const { return Eigen::Index(num_views) * num_bins; }

	static SinogramShape flat(Eigen::Index rows)
	{
		return SinogramShape{1, int(rows), {0.0}};
	}

	bool operator==(const SinogramShape&) const = default;
};

/// Projection data, view-major: value(view, bin) = values[view * num_bins + bin].
template <typename Scalar>
struct BasicSinogram
{
	using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

	SinogramShape shape;
	Vector values;

	BasicSinogram() = default;

	BasicSinogram(SinogramShape s, Vector v) : shape(std::move(s)), values(std::move(v))
	{
		if (shape.num_views <= 0 || shape.num_bins <= 0)
			throw std::invalid_argument("sinogram dimensions must be positive");
		if (Eigen::Index(shape.angles.size()) != shape.num_views)
			throw std::invalid_argument("sinogram needs one angle per view");
		if (values.size() != shape.size())
			throw std::invalid_argument("sinogram value count " + std::to_string(values.size()) +
			                            " does not match views*bins " + std::to_string(shape.size()));
	}

	/// Wraps a bare vector as a single-view sinogram.
	static BasicSinogram flat(Vector v)
	{
		auto s = SinogramShape::flat(v.size());
		return BasicSinogram(std::move(s), std::move(v));
	}

	int num_views() const { return shape.num_views; }
	int num_bins() const { return shape.num_bins; }
	Eigen::Index size() const { return values.size(); }

	Scalar at(int view, int bin) const { return values[Eigen::Index(view) * shape.num_bins + bin]; }
	Scalar& at(int view, int bin) { return values[Eigen::Index(view) * shape.num_bins + bin]; }

	Scalar total() const { return values.sum(); }
};

using Sinogram = BasicSinogram<double>;

}  // namespace superem
